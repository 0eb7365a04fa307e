//! Cochain complexes over a finite groupoid.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * A degree-`k` cochain with coefficients in a bundle `E` assigns to every
//!   composable string `(g₁, …, g_k)` a vector in the fiber over `t(g₁)`.
//!   Degree-0 cochains are sections, one fiber vector per object.
//! * Bases enumerate strings in nerve order (lexicographic in arrow
//!   indices), each string followed by its fiber coordinates.
//! * For an arrowwise action family `λ` the twisted differential is
//!
//!   ```text
//!   (δu)(g₁,…,g_{k+1}) = λ_{g₁}·u(g₂,…,g_{k+1})
//!                      + Σᵢ₌₁..k (−1)^i u(g₁,…,gᵢgᵢ₊₁,…,g_{k+1})
//!                      + (−1)^{k+1} u(g₁,…,g_k)
//!   ```
//!
//!   which in degree 0 reads `(δu)(g) = λ_g·u_{s(g)} − u_{t(g)}`. For a
//!   genuine representation `δ² = 0`; for a bare quasi-action the graded
//!   maps are still well defined and `δ²` measures the failure of
//!   multiplicativity.
//! * The total complex of a two-term system has `C⁰ = Γ(E0)` and
//!   `Cⁿ = Cⁿ(G,E0) ⊕ Cⁿ⁻¹(G,E1)` for `n ≥ 1`, with structure operator
//!   `D(u,v) = (δ₀u + K·v, ∂∘u − δ₁v)` where
//!   `(K·v)(g₁,…,g_{k+1}) = K(g₁,g₂)(v(g₃,…,g_{k+1}))`. The identity
//!   `D² = 0` is equivalent to the four structure equations and is
//!   re-checked numerically whenever a [`ChainComplex`] is assembled.

use crate::complex::{ChainComplex, ChainMap, ComplexError, Subquotient};
use crate::groupoid::FiniteGroupoid;
use crate::matrix::{self, MatrixError, SparseMat};
use crate::rat::{rat_int, Rat};
use crate::rep::{coker_projections, RepError, Representation, Ruth2};
use num::{One, Zero};
use std::collections::HashMap;

/// Nerve levels `G⁽⁰⁾, …, G⁽ᵏ⁾` with position lookup for `k ≥ 1`.
/// Level 0 is indexed by objects; its strings are empty.
pub struct Nerve {
    levels: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Nerve {
    pub fn up_to(gpd: &FiniteGroupoid, top: usize) -> Nerve {
        let mut levels = Vec::with_capacity(top + 1);
        let mut index = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let strings = gpd.nerve(k);
            let map = if k == 0 {
                HashMap::new()
            } else {
                strings.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()
            };
            levels.push(strings);
            index.push(map);
        }
        Nerve { levels, index }
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn strings(&self, k: usize) -> &[Vec<usize>] {
        &self.levels[k]
    }

    /// Position of a string in level `k ≥ 1` (level 0 is indexed by the
    /// object directly).
    pub fn position(&self, k: usize, s: &[usize]) -> usize {
        self.index[k][s]
    }
}

/// Coordinate layout of one cochain space `Cᵏ(G, E)`.
pub struct DegreeBasis {
    /// Object carrying the fiber of each string.
    pub fiber: Vec<usize>,
    /// First coordinate of each string's fiber block.
    pub offsets: Vec<usize>,
    pub total: usize,
}

pub fn degree_basis(
    gpd: &FiniteGroupoid,
    nerve: &Nerve,
    dims: &[usize],
    k: usize,
) -> DegreeBasis {
    let mut fiber = Vec::new();
    let mut offsets = Vec::new();
    let mut total = 0;
    if k == 0 {
        for x in 0..gpd.n_objects() {
            fiber.push(x);
            offsets.push(total);
            total += dims[x];
        }
    } else {
        for s in nerve.strings(k) {
            let x = gpd.tgt(s[0]);
            fiber.push(x);
            offsets.push(total);
            total += dims[x];
        }
    }
    DegreeBasis { fiber, offsets, total }
}

/// Index (in level `tau.len()−1`) of the `i`-th face of `tau`:
/// face 0 drops the first arrow, face `i` composes `gᵢgᵢ₊₁`, the last face
/// drops the final arrow. For 1-strings the two outer faces land in level 0
/// and the returned index is the object index.
fn face_column(gpd: &FiniteGroupoid, nerve: &Nerve, tau: &[usize], i: usize) -> usize {
    let k1 = tau.len();
    if i == 0 {
        return if k1 == 1 { gpd.src(tau[0]) } else { nerve.position(k1 - 1, &tau[1..]) };
    }
    if i == k1 {
        return if k1 == 1 {
            gpd.tgt(tau[0])
        } else {
            nerve.position(k1 - 1, &tau[..k1 - 1])
        };
    }
    let mut s = Vec::with_capacity(k1 - 1);
    s.extend_from_slice(&tau[..i - 1]);
    s.push(gpd.compose(tau[i - 1], tau[i]).expect("composable string"));
    s.extend_from_slice(&tau[i + 1..]);
    nerve.position(k1 - 1, &s)
}

/// Matrix of the twisted differential `δ : Cᵏ(G,E) → Cᵏ⁺¹(G,E)` for an
/// arrowwise action family (one matrix per arrow, unit-shaped like a
/// representation but not assumed multiplicative).
pub fn twisted_differential(
    gpd: &FiniteGroupoid,
    nerve: &Nerve,
    dims: &[usize],
    act: &[SparseMat],
    k: usize,
) -> Result<SparseMat, MatrixError> {
    let src = degree_basis(gpd, nerve, dims, k);
    let dst = degree_basis(gpd, nerve, dims, k + 1);
    let mut trips = Vec::new();
    for (ti, tau) in nerve.strings(k + 1).iter().enumerate() {
        let ro = dst.offsets[ti];
        let ci = face_column(gpd, nerve, tau, 0);
        for (r, c, v) in act[tau[0]].triplets() {
            trips.push((ro + r, src.offsets[ci] + c, v.clone()));
        }
        for i in 1..=(k + 1) {
            let ci = face_column(gpd, nerve, tau, i);
            let sign = if i % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            for d in 0..dims[dst.fiber[ti]] {
                trips.push((ro + d, src.offsets[ci] + d, sign.clone()));
            }
        }
    }
    SparseMat::from_triplets_accumulate(dst.total, src.total, trips)
}

/// Matrix of the action-free differential `δ̄`: the twisted differential
/// with the first face omitted. In degree 0, `(δ̄u)(g) = −u_{t(g)}`. It is
/// acyclic with contracting homotopy `h(φ)(g₁,…,g_k) = φ(1_{t(g₁)},g₁,…,g_k)`
/// against `δ' = −δ̄`.
pub fn bare_differential(
    gpd: &FiniteGroupoid,
    nerve: &Nerve,
    dims: &[usize],
    k: usize,
) -> Result<SparseMat, MatrixError> {
    let src = degree_basis(gpd, nerve, dims, k);
    let dst = degree_basis(gpd, nerve, dims, k + 1);
    let mut trips = Vec::new();
    for (ti, tau) in nerve.strings(k + 1).iter().enumerate() {
        let ro = dst.offsets[ti];
        for i in 1..=(k + 1) {
            let ci = face_column(gpd, nerve, tau, i);
            let sign = if i % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            for d in 0..dims[dst.fiber[ti]] {
                trips.push((ro + d, src.offsets[ci] + d, sign.clone()));
            }
        }
    }
    SparseMat::from_triplets_accumulate(dst.total, src.total, trips)
}

/// Matrix of the unit-insertion homotopy
/// `h : Cᵏ⁺¹(G,E) → Cᵏ(G,E)`, `h(φ)(g₁,…,g_k) = φ(1_{t(g₁)}, g₁,…,g_k)`
/// (in degree 0, `h(φ)_x = φ(1_x)`).
pub fn unit_insertion_homotopy(
    gpd: &FiniteGroupoid,
    nerve: &Nerve,
    dims: &[usize],
    k: usize,
) -> Result<SparseMat, MatrixError> {
    let src = degree_basis(gpd, nerve, dims, k + 1);
    let dst = degree_basis(gpd, nerve, dims, k);
    let mut trips = Vec::new();
    if k == 0 {
        for x in 0..gpd.n_objects() {
            let ci = nerve.position(1, &[gpd.unit(x)]);
            for d in 0..dims[x] {
                trips.push((dst.offsets[x] + d, src.offsets[ci] + d, rat_int(1)));
            }
        }
    } else {
        for (si, sigma) in nerve.strings(k).iter().enumerate() {
            let mut ext = Vec::with_capacity(k + 1);
            ext.push(gpd.unit(gpd.tgt(sigma[0])));
            ext.extend_from_slice(sigma);
            let ci = nerve.position(k + 1, &ext);
            for d in 0..dims[dst.fiber[si]] {
                trips.push((dst.offsets[si] + d, src.offsets[ci] + d, rat_int(1)));
            }
        }
    }
    SparseMat::from_triplets(dst.total, src.total, trips)
}

/// Matrix of the objectwise pushforward `Cᵏ(G,A) → Cᵏ(G,B)` applying a
/// fixed fiber map `f_x : A_x → B_x` at every string.
pub fn fiber_map_block(
    gpd: &FiniteGroupoid,
    nerve: &Nerve,
    src_dims: &[usize],
    dst_dims: &[usize],
    maps: &[SparseMat],
    k: usize,
) -> Result<SparseMat, MatrixError> {
    let src = degree_basis(gpd, nerve, src_dims, k);
    let dst = degree_basis(gpd, nerve, dst_dims, k);
    let mut trips = Vec::new();
    for (si, _) in src.fiber.iter().enumerate() {
        let x = src.fiber[si];
        for (r, c, v) in maps[x].triplets() {
            trips.push((dst.offsets[si] + r, src.offsets[si] + c, v.clone()));
        }
    }
    SparseMat::from_triplets(dst.total, src.total, trips)
}

/// Matrix of the curvature transport
/// `K· : Cᵏ(G,E1) → Cᵏ⁺²(G,E0)`, `(K·v)(g₁,…,g_{k+2}) = K(g₁,g₂)(v(g₃,…))`.
pub fn curvature_block(
    gpd: &FiniteGroupoid,
    nerve: &Nerve,
    r: &Ruth2,
    v_degree: usize,
) -> Result<SparseMat, MatrixError> {
    let src = degree_basis(gpd, nerve, &r.dims1, v_degree);
    let dst = degree_basis(gpd, nerve, &r.dims0, v_degree + 2);
    let mut trips = Vec::new();
    for (ti, tau) in nerve.strings(v_degree + 2).iter().enumerate() {
        let Some(k) = r.kappa.get(&(tau[0], tau[1])) else { continue };
        let ci = if v_degree == 0 {
            gpd.src(tau[1])
        } else {
            nerve.position(v_degree, &tau[2..])
        };
        for (r0, c0, v) in k.triplets() {
            trips.push((dst.offsets[ti] + r0, src.offsets[ci] + c0, v.clone()));
        }
    }
    SparseMat::from_triplets(dst.total, src.total, trips)
}

/// Matrix of the first-arrow action shift
/// `a : Cᵏ⁻¹(G,E) → Cᵏ(G,E)`, `(a·v)(g₁,…,g_k) = λ_{g₁}·v(g₂,…,g_k)`.
pub fn action_shift(
    gpd: &FiniteGroupoid,
    nerve: &Nerve,
    dims: &[usize],
    act: &[SparseMat],
    out_degree: usize,
) -> Result<SparseMat, MatrixError> {
    let src = degree_basis(gpd, nerve, dims, out_degree - 1);
    let dst = degree_basis(gpd, nerve, dims, out_degree);
    let mut trips = Vec::new();
    for (ti, tau) in nerve.strings(out_degree).iter().enumerate() {
        let ci = face_column(gpd, nerve, tau, 0);
        for (r, c, v) in act[tau[0]].triplets() {
            trips.push((dst.offsets[ti] + r, src.offsets[ci] + c, v.clone()));
        }
    }
    SparseMat::from_triplets(dst.total, src.total, trips)
}

/// Graded maps of the twisted differential at degrees `0..=k_max` without
/// asserting `δ² = 0`; this is the form appropriate for quasi-actions.
pub fn quasi_differentials(
    gpd: &FiniteGroupoid,
    dims: &[usize],
    act: &[SparseMat],
    k_max: usize,
) -> Result<(Vec<usize>, Vec<SparseMat>), MatrixError> {
    let nerve = Nerve::up_to(gpd, k_max + 1);
    let space_dims = (0..=k_max + 1)
        .map(|k| degree_basis(gpd, &nerve, dims, k).total)
        .collect();
    let d = (0..=k_max)
        .map(|k| twisted_differential(gpd, &nerve, dims, act, k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((space_dims, d))
}

/// Cochain complex of a genuine representation, truncated so that
/// cohomology is available through degree `k_max`.
pub fn rep_complex(
    gpd: &FiniteGroupoid,
    rep: &Representation,
    k_max: usize,
) -> Result<ChainComplex, ComplexError> {
    let (dims, d) = quasi_differentials(gpd, &rep.dims, &rep.act, k_max)?;
    ChainComplex::new(dims, d)
}

/// Dimensions of the two blocks of the total space at degree `n`:
/// `(dim Cⁿ(G,E0), dim Cⁿ⁻¹(G,E1))`, the second being 0 at `n = 0`.
pub fn total_split(gpd: &FiniteGroupoid, nerve: &Nerve, r: &Ruth2, n: usize) -> (usize, usize) {
    let e0 = degree_basis(gpd, nerve, &r.dims0, n).total;
    let e1 = if n == 0 { 0 } else { degree_basis(gpd, nerve, &r.dims1, n - 1).total };
    (e0, e1)
}

/// Graded maps of the structure operator `D` at degrees `0..=k_max`
/// without asserting `D² = 0`. Space dimensions are returned alongside.
pub fn total_differentials(
    gpd: &FiniteGroupoid,
    r: &Ruth2,
    k_max: usize,
) -> Result<(Vec<usize>, Vec<SparseMat>), MatrixError> {
    let nerve = Nerve::up_to(gpd, k_max + 1);
    let dims = (0..=k_max + 1)
        .map(|n| {
            let (a, b) = total_split(gpd, &nerve, r, n);
            a + b
        })
        .collect();
    let mut d = Vec::with_capacity(k_max + 1);
    for n in 0..=k_max {
        let (c0, c1) = total_split(gpd, &nerve, r, n);
        let (r0, r1) = total_split(gpd, &nerve, r, n + 1);
        let mut blocks = vec![
            (0usize, 0usize, twisted_differential(gpd, &nerve, &r.dims0, &r.lambda0, n)?),
            (1, 0, fiber_map_block(gpd, &nerve, &r.dims0, &r.dims1, &r.partial, n)?),
        ];
        if n >= 1 {
            blocks.push((0, 1, curvature_block(gpd, &nerve, r, n - 1)?));
            blocks.push((
                1,
                1,
                twisted_differential(gpd, &nerve, &r.dims1, &r.lambda1, n - 1)?.neg(),
            ));
        }
        d.push(SparseMat::from_blocks(&[r0, r1], &[c0, c1], blocks)?);
    }
    Ok((dims, d))
}

/// Total cochain complex of a two-term system. The caller is responsible
/// for validating the structure first; an invalid input surfaces here as a
/// `D² ≠ 0` construction error.
pub fn ruth_complex(
    gpd: &FiniteGroupoid,
    r: &Ruth2,
    k_max: usize,
) -> Result<ChainComplex, ComplexError> {
    let (dims, d) = total_differentials(gpd, r, k_max)?;
    ChainComplex::new(dims, d)
}

/// Coordinates of the unit-free strings inside `Cᵏ(G,E)` (all of degree 0).
fn normalized_coords(
    gpd: &FiniteGroupoid,
    nerve: &Nerve,
    dims: &[usize],
    k: usize,
) -> Vec<usize> {
    let basis = degree_basis(gpd, nerve, dims, k);
    let mut keep = Vec::new();
    if k == 0 {
        return (0..basis.total).collect();
    }
    for (si, s) in nerve.strings(k).iter().enumerate() {
        if s.iter().any(|g| gpd.is_unit(*g)) {
            continue;
        }
        for d in 0..dims[basis.fiber[si]] {
            keep.push(basis.offsets[si] + d);
        }
    }
    keep
}

fn inclusion_from_coords(ambient: usize, coords: &[usize]) -> Result<SparseMat, MatrixError> {
    SparseMat::from_triplets(
        ambient,
        coords.len(),
        coords.iter().enumerate().map(|(j, c)| (*c, j, Rat::one())),
    )
}

fn normalized_pair(
    full: &ChainComplex,
    kept: Vec<Vec<usize>>,
) -> Result<(ChainComplex, ChainMap), ComplexError> {
    let sub_dims: Vec<usize> = kept.iter().map(|k| k.len()).collect();
    let mut sub_d = Vec::with_capacity(full.top_degree());
    for n in 0..full.top_degree() {
        sub_d.push(full.differential(n).submatrix(&kept[n + 1], &kept[n]));
    }
    let sub = ChainComplex::new(sub_dims, sub_d)?;
    let incl = (0..kept.len())
        .map(|n| inclusion_from_coords(full.dim(n), &kept[n]))
        .collect::<Result<Vec<_>, _>>()?;
    let map = ChainMap::new(&sub, full, incl)?;
    Ok((sub, map))
}

/// Normalized subcomplex of a representation complex: cochains vanishing
/// on every string that contains a unit arrow. Returns the subcomplex and
/// its inclusion; the chain-map check certifies that the subspace is
/// closed under the differential.
pub fn normalized_rep_complex(
    gpd: &FiniteGroupoid,
    rep: &Representation,
    k_max: usize,
) -> Result<(ChainComplex, ChainMap), ComplexError> {
    let full = rep_complex(gpd, rep, k_max)?;
    let nerve = Nerve::up_to(gpd, k_max + 1);
    let kept = (0..=k_max + 1)
        .map(|k| normalized_coords(gpd, &nerve, &rep.dims, k))
        .collect();
    normalized_pair(&full, kept)
}

/// Normalized subcomplex of a total complex; the unit-free condition is
/// imposed on both the `E0` and the shifted `E1` block.
pub fn normalized_ruth_complex(
    gpd: &FiniteGroupoid,
    r: &Ruth2,
    k_max: usize,
) -> Result<(ChainComplex, ChainMap), ComplexError> {
    let full = ruth_complex(gpd, r, k_max)?;
    let nerve = Nerve::up_to(gpd, k_max + 1);
    let mut kept = Vec::with_capacity(k_max + 2);
    for n in 0..=k_max + 1 {
        let (e0_total, _) = total_split(gpd, &nerve, r, n);
        let mut coords = normalized_coords(gpd, &nerve, &r.dims0, n);
        if n >= 1 {
            coords.extend(
                normalized_coords(gpd, &nerve, &r.dims1, n - 1)
                    .into_iter()
                    .map(|c| c + e0_total),
            );
        }
        kept.push(coords);
    }
    normalized_pair(&full, kept)
}

/// Cup product of `u ∈ Cᵏ(G,E)` with a scalar cochain `f ∈ Cᵏ'(G)`:
/// `(u·f)(g₁,…,g_{k+k'}) = f(g_{k+1},…,g_{k+k'}) · u(g₁,…,g_k)`, where an
/// empty tail evaluates `f` at the string's endpoint. Satisfies the module
/// rule `δ(u·f) = (δu)·f + (−1)ᵏ u·(δf)`.
pub fn cup_product(
    gpd: &FiniteGroupoid,
    nerve: &Nerve,
    dims: &[usize],
    u_deg: usize,
    u: &[Rat],
    f_deg: usize,
    f: &[Rat],
) -> Vec<Rat> {
    let src = degree_basis(gpd, nerve, dims, u_deg);
    let dst = degree_basis(gpd, nerve, dims, u_deg + f_deg);
    let mut out = vec![Rat::zero(); dst.total];
    for (ti, tau) in nerve.strings(u_deg + f_deg).iter().enumerate() {
        let head = if u_deg == 0 {
            if tau.is_empty() { ti } else { gpd.tgt(tau[0]) }
        } else {
            nerve.position(u_deg, &tau[..u_deg])
        };
        let tail = if f_deg == 0 {
            if tau.is_empty() { ti } else { gpd.src(tau[u_deg - 1]) }
        } else {
            nerve.position(f_deg, &tau[u_deg..])
        };
        let scale = &f[tail];
        if scale.is_zero() {
            continue;
        }
        for d in 0..dims[dst.fiber[ti]] {
            out[dst.offsets[ti] + d] = &u[src.offsets[head] + d] * scale;
        }
    }
    out
}

/// A solution space returned with an explicit basis, in the coordinates of
/// the corresponding section space (`Γ(E0)` or `Γ(E1)`, objects in order).
pub struct SectionSpace {
    pub dim: usize,
    pub basis: Vec<Vec<Rat>>,
}

/// Invariant sections of the kernel bundle:
/// `{α ∈ Γ(E0) : ∂α = 0 and λ⁰_g α_{s(g)} = α_{t(g)} for every arrow}`.
/// For a valid structure this space has the dimension of `H⁰` of the total
/// complex.
pub fn invariant_isotropy_sections(
    gpd: &FiniteGroupoid,
    r: &Ruth2,
) -> Result<SectionSpace, MatrixError> {
    let offsets = section_offsets(&r.dims0);
    let total = offsets[gpd.n_objects()];
    let mut trips = Vec::new();
    let mut row = 0;
    for x in 0..gpd.n_objects() {
        for (i, j, v) in r.partial[x].triplets() {
            trips.push((row + i, offsets[x] + j, v.clone()));
        }
        row += r.partial[x].rows();
    }
    for g in 0..gpd.n_arrows() {
        let (s, t) = (gpd.src(g), gpd.tgt(g));
        for (i, j, v) in r.lambda0[g].triplets() {
            trips.push((row + i, offsets[s] + j, v.clone()));
        }
        for d in 0..r.dims0[t] {
            trips.push((row + d, offsets[t] + d, rat_int(-1)));
        }
        row += r.dims0[t];
    }
    let m = SparseMat::from_triplets_accumulate(row, total, trips)?;
    let basis = matrix::kernel_basis(&m);
    Ok(SectionSpace { dim: basis.len(), basis })
}

/// Invariant sections of a genuine representation:
/// `{α ∈ Γ(E) : g·α_{s(g)} = α_{t(g)} for every arrow}`. This is `H⁰` of
/// the representation complex.
pub fn invariant_sections_rep(
    gpd: &FiniteGroupoid,
    rep: &Representation,
) -> Result<SectionSpace, MatrixError> {
    let offsets = section_offsets(&rep.dims);
    let total = offsets[gpd.n_objects()];
    let mut trips = Vec::new();
    let mut row = 0;
    for g in 0..gpd.n_arrows() {
        let (s, t) = (gpd.src(g), gpd.tgt(g));
        for (i, j, v) in rep.act[g].triplets() {
            trips.push((row + i, offsets[s] + j, v.clone()));
        }
        for d in 0..rep.dims[t] {
            trips.push((row + d, offsets[t] + d, rat_int(-1)));
        }
        row += rep.dims[t];
    }
    let m = SparseMat::from_triplets_accumulate(row, total, trips)?;
    let basis = matrix::kernel_basis(&m);
    Ok(SectionSpace { dim: basis.len(), basis })
}

/// Invariant sections of the cokernel bundle:
/// classes `[V] ∈ Γ(E1)/∂Γ(E0)` with `V_{t(g)} − λ¹_g V_{s(g)} ∈ im ∂_{t(g)}`
/// for every arrow. The basis vectors are representatives in `Γ(E1)`. For a
/// valid structure over a finite groupoid this space has the dimension of
/// `H¹` of the total complex.
pub fn invariant_normal_sections(
    gpd: &FiniteGroupoid,
    r: &Ruth2,
) -> Result<SectionSpace, RepError> {
    let sq = invariant_normal_subquotient(gpd, r)?;
    Ok(SectionSpace { dim: sq.dim(), basis: sq.reps().to_vec() })
}

/// Same space as [`invariant_normal_sections`], returned as a
/// [`Subquotient`] of `Γ(E1)` so that arbitrary invariant sections can be
/// reduced to class coordinates.
pub fn invariant_normal_subquotient(
    gpd: &FiniteGroupoid,
    r: &Ruth2,
) -> Result<Subquotient, RepError> {
    let (nu_dims, proj, _) = coker_projections(gpd, r)?;
    let offsets = section_offsets(&r.dims1);
    let total = offsets[gpd.n_objects()];
    let mut trips = Vec::new();
    let mut row = 0;
    for g in 0..gpd.n_arrows() {
        let (s, t) = (gpd.src(g), gpd.tgt(g));
        for (i, j, v) in proj[t].triplets() {
            trips.push((row + i, offsets[t] + j, v.clone()));
        }
        let shifted = proj[t].mul(&r.lambda1[g])?;
        for (i, j, v) in shifted.triplets() {
            trips.push((row + i, offsets[s] + j, -v.clone()));
        }
        row += nu_dims[t];
    }
    let m = SparseMat::from_triplets_accumulate(row, total, trips)?;
    let cycles = matrix::kernel_basis(&m);
    let mut boundaries = Vec::new();
    for x in 0..gpd.n_objects() {
        for col in r.partial[x].sparse_cols() {
            boundaries.push(col.into_iter().map(|(i, v)| (offsets[x] + i, v)).collect());
        }
    }
    Ok(Subquotient::new(total, &cycles, boundaries))
}

fn section_offsets(dims: &[usize]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(dims.len() + 1);
    let mut total = 0;
    for d in dims {
        offsets.push(total);
        total += d;
    }
    offsets.push(total);
    offsets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{action_groupoid, group_groupoid, unit_groupoid};
    use crate::rep::{cone_ruth, gauge_twist, trivial_rep, validate_ruth};

    fn zmod(n: usize) -> FiniteGroupoid {
        let names: Vec<String> = (0..n).map(|i| format!("z{i}")).collect();
        let table: Vec<Vec<usize>> =
            (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        group_groupoid(&names, &table).unwrap()
    }

    fn z2_swap() -> FiniteGroupoid {
        let names = vec!["z0".to_string(), "z1".to_string()];
        let table = vec![vec![0, 1], vec![1, 0]];
        let act = vec![vec![0, 1], vec![1, 0]];
        let pts = vec!["p".to_string(), "q".to_string()];
        action_groupoid(&names, &table, &pts, &act).unwrap()
    }

    fn cone_trivial(gpd: &FiniteGroupoid) -> Ruth2 {
        let a = trivial_rep(gpd, 1);
        let b = trivial_rep(gpd, 1);
        let rho: Vec<SparseMat> =
            (0..gpd.n_objects()).map(|_| SparseMat::zero(1, 1)).collect();
        cone_ruth(gpd, &a, &b, &rho).unwrap()
    }

    #[test]
    fn trivial_rep_cohomology_of_z2() {
        let g = zmod(2);
        let c = rep_complex(&g, &trivial_rep(&g, 1), 3).unwrap();
        assert_eq!(c.cohomology_dims(3).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn sign_rep_cohomology_of_z2() {
        let g = zmod(2);
        let sign = Representation {
            dims: vec![1],
            act: vec![
                SparseMat::identity(1),
                SparseMat::from_triplets(1, 1, vec![(0, 0, rat_int(-1))]).unwrap(),
            ],
        };
        let c = rep_complex(&g, &sign, 3).unwrap();
        assert_eq!(c.cohomology_dims(3).unwrap(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn unit_groupoid_cohomology_is_sections() {
        let g = unit_groupoid(&["a".into(), "b".into(), "c".into()]).unwrap();
        let rep = trivial_rep(&g, 2);
        let c = rep_complex(&g, &rep, 3).unwrap();
        assert_eq!(c.cohomology_dims(3).unwrap(), vec![6, 0, 0, 0]);
    }

    #[test]
    fn non_multiplicative_quasi_action_has_nonzero_square() {
        let g = zmod(2);
        let non_unit = (0..2).find(|x| !g.is_unit(*x)).unwrap();
        let mut act = vec![SparseMat::identity(1), SparseMat::identity(1)];
        act[non_unit] = SparseMat::from_triplets(1, 1, vec![(0, 0, rat_int(2))]).unwrap();
        let (_, d) = quasi_differentials(&g, &[1], &act, 2).unwrap();
        assert!(!d[1].mul(&d[0]).unwrap().is_zero());
    }

    #[test]
    fn strict_cone_total_cohomology() {
        let g = zmod(2);
        let r = cone_trivial(&g);
        let c = ruth_complex(&g, &r, 3).unwrap();
        assert_eq!(c.cohomology_dims(3).unwrap(), vec![1, 1, 0, 0]);
    }

    #[test]
    fn identity_cone_is_acyclic() {
        let g = z2_swap();
        let a = trivial_rep(&g, 1);
        let rho: Vec<SparseMat> = (0..2).map(|_| SparseMat::identity(1)).collect();
        let r = cone_ruth(&g, &a, &a, &rho).unwrap();
        let c = ruth_complex(&g, &r, 3).unwrap();
        assert_eq!(c.cohomology_dims(3).unwrap(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn gauge_twist_preserves_total_cohomology() {
        let g = zmod(2);
        let r = cone_trivial(&g);
        let eta: Vec<SparseMat> = (0..g.n_arrows())
            .map(|x| {
                if g.is_unit(x) {
                    SparseMat::zero(1, 1)
                } else {
                    SparseMat::from_triplets(1, 1, vec![(0, 0, rat_int(5))]).unwrap()
                }
            })
            .collect();
        let tw = gauge_twist(&g, &r, &eta).unwrap();
        validate_ruth(&g, &tw).unwrap();
        let c = ruth_complex(&g, &tw, 3).unwrap();
        assert_eq!(c.cohomology_dims(3).unwrap(), vec![1, 1, 0, 0]);
    }

    #[test]
    fn normalized_subcomplex_of_z2() {
        let g = zmod(2);
        let (sub, _) = normalized_rep_complex(&g, &trivial_rep(&g, 1), 3).unwrap();
        assert_eq!(sub.dim(1), 1);
        assert_eq!(sub.cohomology_dims(3).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn normalized_subcomplex_of_unit_groupoid_vanishes() {
        let g = unit_groupoid(&["a".into(), "b".into()]).unwrap();
        let (sub, _) = normalized_rep_complex(&g, &trivial_rep(&g, 1), 3).unwrap();
        for k in 1..=4 {
            assert_eq!(sub.dim(k), 0);
        }
    }

    #[test]
    fn normalized_total_complex_matches_full_dims() {
        let g = z2_swap();
        let r = cone_trivial(&g);
        let full = ruth_complex(&g, &r, 3).unwrap();
        let (sub, _) = normalized_ruth_complex(&g, &r, 3).unwrap();
        assert_eq!(
            sub.cohomology_dims(3).unwrap(),
            full.cohomology_dims(3).unwrap()
        );
    }

    #[test]
    fn cup_with_constant_one_is_identity() {
        let g = z2_swap();
        let nerve = Nerve::up_to(&g, 3);
        let dims = vec![2, 2];
        let basis = degree_basis(&g, &nerve, &dims, 2);
        let u: Vec<Rat> = (0..basis.total).map(|i| rat_int(i as i64 + 1)).collect();
        let one = vec![Rat::one(); g.n_objects()];
        assert_eq!(cup_product(&g, &nerve, &dims, 2, &u, 0, &one), u);
    }

    #[test]
    fn cup_of_sections_is_pointwise() {
        let g = z2_swap();
        let nerve = Nerve::up_to(&g, 1);
        let dims = vec![1, 1];
        let u = vec![rat_int(2), rat_int(3)];
        let f = vec![rat_int(5), rat_int(7)];
        assert_eq!(
            cup_product(&g, &nerve, &dims, 0, &u, 0, &f),
            vec![rat_int(10), rat_int(21)]
        );
    }

    #[test]
    fn leibniz_rule_in_low_degrees() {
        let g = z2_swap();
        let nerve = Nerve::up_to(&g, 4);
        let rep = trivial_rep(&g, 2);
        let triv = vec![1usize; g.n_objects()];
        let ones: Vec<SparseMat> = (0..g.n_arrows()).map(|_| SparseMat::identity(1)).collect();
        for (ku, kf) in [(0, 0), (0, 1), (1, 0), (1, 1), (2, 1)] {
            let ub = degree_basis(&g, &nerve, &rep.dims, ku);
            let fb = degree_basis(&g, &nerve, &triv, kf);
            let u: Vec<Rat> = (0..ub.total).map(|i| rat_int(2 * i as i64 - 3)).collect();
            let f: Vec<Rat> = (0..fb.total).map(|i| rat_int(i as i64 + 1)).collect();
            let du = twisted_differential(&g, &nerve, &rep.dims, &rep.act, ku)
                .unwrap()
                .mul_vec(&u);
            let df = twisted_differential(&g, &nerve, &triv, &ones, kf).unwrap().mul_vec(&f);
            let cup = cup_product(&g, &nerve, &rep.dims, ku, &u, kf, &f);
            let lhs = twisted_differential(&g, &nerve, &rep.dims, &rep.act, ku + kf)
                .unwrap()
                .mul_vec(&cup);
            let a = cup_product(&g, &nerve, &rep.dims, ku + 1, &du, kf, &f);
            let b = cup_product(&g, &nerve, &rep.dims, ku, &u, kf + 1, &df);
            let sign = if ku % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            let rhs: Vec<Rat> =
                a.iter().zip(&b).map(|(x, y)| x + &sign * y).collect();
            assert_eq!(lhs, rhs, "Leibniz fails at degrees ({ku},{kf})");
        }
    }

    #[test]
    fn invariant_sections_of_strict_cone() {
        let g = zmod(2);
        let r = cone_trivial(&g);
        let iso = invariant_isotropy_sections(&g, &r).unwrap();
        assert_eq!(iso.dim, 1);
        let nor = invariant_normal_sections(&g, &r).unwrap();
        assert_eq!(nor.dim, 1);
    }

    #[test]
    fn surjective_partial_kills_normal_sections() {
        let g = zmod(2);
        let a = trivial_rep(&g, 1);
        let rho: Vec<SparseMat> = vec![SparseMat::identity(1)];
        let r = cone_ruth(&g, &a, &a, &rho).unwrap();
        let nor = invariant_normal_sections(&g, &r).unwrap();
        assert_eq!(nor.dim, 0);
        let iso = invariant_isotropy_sections(&g, &r).unwrap();
        assert_eq!(iso.dim, 0);
    }

    #[test]
    fn invariant_dims_match_total_cohomology() {
        let g = z2_swap();
        let r = cone_trivial(&g);
        let c = ruth_complex(&g, &r, 2).unwrap();
        let dims = c.cohomology_dims(1).unwrap();
        assert_eq!(invariant_isotropy_sections(&g, &r).unwrap().dim, dims[0]);
        assert_eq!(invariant_normal_sections(&g, &r).unwrap().dim, dims[1]);
    }

    #[test]
    fn bare_differential_homotopy_identity() {
        // δ' = −δ̄ is contracted by unit insertion: δ'h + hδ' = id.
        let g = z2_swap();
        let nerve = Nerve::up_to(&g, 4);
        let dims = vec![2, 1];
        for k in 0..=3usize {
            let id = SparseMat::identity(degree_basis(&g, &nerve, &dims, k).total);
            let dk = bare_differential(&g, &nerve, &dims, k).unwrap().neg();
            let hk = unit_insertion_homotopy(&g, &nerve, &dims, k).unwrap();
            let mut sum = hk.mul(&dk).unwrap();
            if k > 0 {
                let dkm1 = bare_differential(&g, &nerve, &dims, k - 1).unwrap().neg();
                let hkm1 = unit_insertion_homotopy(&g, &nerve, &dims, k - 1).unwrap();
                sum = sum.add(&dkm1.mul(&hkm1).unwrap()).unwrap();
            }
            assert_eq!(sum, id, "homotopy identity fails at degree {k}");
        }
    }
}
