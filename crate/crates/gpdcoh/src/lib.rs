//! Exact cohomology of finite groupoids.
//!
//! The crate computes cohomology of finite groupoids with coefficients in
//! genuine representations and in two-term representations up to homotopy
//! (a graded bundle `E0 ⊕ E1` with boundary `∂`, quasi-actions `λ`, and
//! curvature `K`), entirely over ℚ with exact arithmetic. On top of the
//! plain computations it ships verification suites for the structural
//! facts these complexes satisfy: vanishing of higher cohomology over a
//! finite base, the mapping-cone description of cones of equivariant maps,
//! the regular-case long exact sequence relating a two-term system to its
//! kernel and cokernel representations, the low-degree exact sequence, the
//! flat-boundary curvature class, Morita dimension invariance, the
//! normalized-subcomplex quasi-isomorphism, and the division-map
//! axiomatization of groupoids.
//!
//! Layering, bottom up:
//!
//! * [`rat`], [`matrix`], [`complex`] — exact sparse linear algebra:
//!   rationals, fraction-free elimination, chain complexes, mapping cones,
//!   connecting homomorphisms.
//! * [`groupoid`], [`division`] — finite groupoids, nerves, constructors,
//!   and the `(s, m̄)` division presentation with reconstruction.
//! * [`rep`], [`cochain`] — coefficient systems and the cochain complexes
//!   they generate.
//! * [`proper`], [`sequences`], [`morita`] — averaging/transgression,
//!   exact-sequence machinery, Mayer–Vietoris comparisons.
//! * [`examples`], [`randgen`], [`suite`] — the builtin example registry,
//!   seeded generators, and the named verification suites.

pub mod rat;
pub mod matrix;
pub mod complex;

pub mod groupoid;
pub mod division;

pub mod rep;
pub mod cochain;

pub mod proper;
pub mod sequences;
pub mod morita;

pub mod examples;
pub mod randgen;
pub mod suite;
