//! Coefficient systems on a finite groupoid.
//!
//! Two kinds are supported. A [`Representation`] is a genuine functorial
//! action: a fiber dimension per object and an invertible matrix per arrow,
//! with units acting as the identity and composition preserved on the nose.
//! A [`Ruth2`] is a two-term representation up to homotopy: a graded bundle
//! `E0 ⊕ E1`, an objectwise boundary `∂ : E0 → E1`, quasi-actions `λ⁰, λ¹`
//! that need only be multiplicative up to the curvature `K`, and the
//! curvature itself, one matrix `K(g,h) : E1_{s(h)} → E0_{t(g)}` per
//! composable pair. The structure equations are, per arrow, pair, and
//! triple:
//!
//! 1. `∂ λ⁰_g = λ¹_g ∂`
//! 2. `λ⁰_g λ⁰_h − λ⁰_{gh} + K(g,h) ∂ = 0`
//! 3. `λ¹_g λ¹_h − λ¹_{gh} + ∂ K(g,h) = 0`
//! 4. `λ⁰_g K(h,k) − K(gh,k) + K(g,hk) − K(g,h) λ¹_k = 0`
//!
//! together with unit normalization: `λ⁰, λ¹` send units to identities and
//! `K(g,h)` vanishes when either argument is a unit. These four equations
//! are exactly what makes the associated total complex square to zero, and
//! [`validate_ruth`] checks them all with named witnesses.

use crate::groupoid::{FiniteGroupoid, GaugeResult, GroupoidMorphism};
use crate::matrix::{self, SparseMat};
use crate::rat::{format_rat, parse_rat, Rat};
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum RepError {
    #[error("fiber dimensions must list every object exactly once")]
    BundleShape,
    #[error("action at arrow `{0}` has shape {1}x{2}, expected {3}x{4}")]
    ActionShape(String, usize, usize, usize, usize),
    #[error("unit arrow `{0}` does not act as the identity")]
    UnitNotIdentity(String),
    #[error("action is not multiplicative at (`{0}`, `{1}`)")]
    NotMultiplicative(String, String),
    #[error("action at arrow `{0}` is not invertible")]
    NotInvertible(String),
    #[error("boundary at object `{0}` has shape {1}x{2}, expected {3}x{4}")]
    BoundaryShape(String, usize, usize, usize, usize),
    #[error("curvature at (`{0}`, `{1}`) has shape {2}x{3}, expected {4}x{5}")]
    CurvatureShape(String, String, usize, usize, usize, usize),
    #[error("curvature declared at non-composable pair (`{0}`, `{1}`)")]
    CurvatureDomain(String, String),
    #[error("curvature does not vanish on the unit pair (`{0}`, `{1}`)")]
    CurvatureUnit(String, String),
    #[error("equation (1) fails at arrow `{0}`")]
    Equation1(String),
    #[error("equation (2) fails at pair (`{0}`, `{1}`)")]
    Equation2(String, String),
    #[error("equation (3) fails at pair (`{0}`, `{1}`)")]
    Equation3(String, String),
    #[error("equation (4) fails at triple (`{0}`, `{1}`, `{2}`)")]
    Equation4(String, String, String),
    #[error("map at object `{0}` is not equivariant")]
    NotEquivariant(String),
    #[error("kernel fibers have non-constant dimension along an orbit: {0}")]
    NotRegular(String),
    #[error("twist matrix at arrow `{0}` has shape {1}x{2}, expected {3}x{4}")]
    TwistShape(String, usize, usize, usize, usize),
    #[error("twist must vanish on unit arrows (nonzero at `{0}`)")]
    TwistUnit(String),
    #[error("unknown object `{0}` in coefficient data")]
    UnknownObject(String),
    #[error("unknown arrow `{0}` in coefficient data")]
    UnknownArrow(String),
    #[error("missing matrix for `{0}`")]
    MissingMatrix(String),
    #[error("invalid rational entry: {0}")]
    BadEntry(String),
    #[error("curvature key `{0}` does not split into two arrow ids")]
    BadCurvatureKey(String),
    #[error("curvature key `{0}` splits ambiguously")]
    AmbiguousCurvatureKey(String),
    #[error("matrix error: {0}")]
    Matrix(#[from] matrix::MatrixError),
}

/// Genuine representation: invertible fiberwise action, strictly functorial.
#[derive(Clone, Debug)]
pub struct Representation {
    pub dims: Vec<usize>,
    pub act: Vec<SparseMat>,
}

/// Two-term representation up to homotopy.
#[derive(Clone, Debug)]
pub struct Ruth2 {
    pub dims0: Vec<usize>,
    pub dims1: Vec<usize>,
    /// `∂_x : E0_x → E1_x` per object.
    pub partial: Vec<SparseMat>,
    /// `λ⁰_g : E0_{s(g)} → E0_{t(g)}` per arrow.
    pub lambda0: Vec<SparseMat>,
    /// `λ¹_g : E1_{s(g)} → E1_{t(g)}` per arrow.
    pub lambda1: Vec<SparseMat>,
    /// `K(g,h) : E1_{s(h)} → E0_{t(g)}` per composable pair; absent means 0.
    pub kappa: BTreeMap<(usize, usize), SparseMat>,
}

impl Ruth2 {
    /// `K(g,h)`, materializing zeros.
    pub fn curvature(&self, gpd: &FiniteGroupoid, g: usize, h: usize) -> SparseMat {
        match self.kappa.get(&(g, h)) {
            Some(m) => m.clone(),
            None => SparseMat::zero(self.dims0[gpd.tgt(g)], self.dims1[gpd.src(h)]),
        }
    }
}

/// Validates a genuine representation: shapes, identity units,
/// multiplicativity, invertibility.
pub fn validate_rep(gpd: &FiniteGroupoid, rep: &Representation) -> Result<(), RepError> {
    if rep.dims.len() != gpd.n_objects() || rep.act.len() != gpd.n_arrows() {
        return Err(RepError::BundleShape);
    }
    for g in 0..gpd.n_arrows() {
        let m = &rep.act[g];
        let (r, c) = (rep.dims[gpd.tgt(g)], rep.dims[gpd.src(g)]);
        if m.rows() != r || m.cols() != c {
            return Err(RepError::ActionShape(gpd.arrow_id(g).into(), m.rows(), m.cols(), r, c));
        }
    }
    for x in 0..gpd.n_objects() {
        if rep.act[gpd.unit(x)] != SparseMat::identity(rep.dims[x]) {
            return Err(RepError::UnitNotIdentity(gpd.arrow_id(gpd.unit(x)).into()));
        }
    }
    for g in 0..gpd.n_arrows() {
        for h in 0..gpd.n_arrows() {
            if let Some(gh) = gpd.compose(g, h) {
                if rep.act[g].mul(&rep.act[h])? != rep.act[gh] {
                    return Err(RepError::NotMultiplicative(
                        gpd.arrow_id(g).into(),
                        gpd.arrow_id(h).into(),
                    ));
                }
            }
        }
    }
    // Invertibility follows from functoriality (act(g)·act(g⁻¹) = id), so
    // no extra elimination is needed here.
    Ok(())
}

/// Validates the full two-term structure: shapes, unit normalization, and
/// equations (1)–(4). Exhaustive; the first violation is returned with its
/// witness arrows.
pub fn validate_ruth(gpd: &FiniteGroupoid, r: &Ruth2) -> Result<(), RepError> {
    let n = gpd.n_arrows();
    if r.dims0.len() != gpd.n_objects()
        || r.dims1.len() != gpd.n_objects()
        || r.partial.len() != gpd.n_objects()
        || r.lambda0.len() != n
        || r.lambda1.len() != n
    {
        return Err(RepError::BundleShape);
    }
    for x in 0..gpd.n_objects() {
        let m = &r.partial[x];
        if m.rows() != r.dims1[x] || m.cols() != r.dims0[x] {
            return Err(RepError::BoundaryShape(
                gpd.object_id(x).into(),
                m.rows(),
                m.cols(),
                r.dims1[x],
                r.dims0[x],
            ));
        }
    }
    for g in 0..n {
        let (s, t) = (gpd.src(g), gpd.tgt(g));
        let m0 = &r.lambda0[g];
        if m0.rows() != r.dims0[t] || m0.cols() != r.dims0[s] {
            return Err(RepError::ActionShape(
                gpd.arrow_id(g).into(),
                m0.rows(),
                m0.cols(),
                r.dims0[t],
                r.dims0[s],
            ));
        }
        let m1 = &r.lambda1[g];
        if m1.rows() != r.dims1[t] || m1.cols() != r.dims1[s] {
            return Err(RepError::ActionShape(
                gpd.arrow_id(g).into(),
                m1.rows(),
                m1.cols(),
                r.dims1[t],
                r.dims1[s],
            ));
        }
    }
    for ((g, h), m) in &r.kappa {
        if gpd.compose(*g, *h).is_none() {
            return Err(RepError::CurvatureDomain(
                gpd.arrow_id(*g).into(),
                gpd.arrow_id(*h).into(),
            ));
        }
        let (rr, cc) = (r.dims0[gpd.tgt(*g)], r.dims1[gpd.src(*h)]);
        if m.rows() != rr || m.cols() != cc {
            return Err(RepError::CurvatureShape(
                gpd.arrow_id(*g).into(),
                gpd.arrow_id(*h).into(),
                m.rows(),
                m.cols(),
                rr,
                cc,
            ));
        }
    }
    // Unit normalization.
    for x in 0..gpd.n_objects() {
        let u = gpd.unit(x);
        if r.lambda0[u] != SparseMat::identity(r.dims0[x])
            || r.lambda1[u] != SparseMat::identity(r.dims1[x])
        {
            return Err(RepError::UnitNotIdentity(gpd.arrow_id(u).into()));
        }
    }
    for ((g, h), m) in &r.kappa {
        if (gpd.is_unit(*g) || gpd.is_unit(*h)) && !m.is_zero() {
            return Err(RepError::CurvatureUnit(
                gpd.arrow_id(*g).into(),
                gpd.arrow_id(*h).into(),
            ));
        }
    }
    // Equation (1).
    for g in 0..n {
        let lhs = r.partial[gpd.tgt(g)].mul(&r.lambda0[g])?;
        let rhs = r.lambda1[g].mul(&r.partial[gpd.src(g)])?;
        if lhs != rhs {
            return Err(RepError::Equation1(gpd.arrow_id(g).into()));
        }
    }
    // Equations (2) and (3).
    for g in 0..n {
        for h in 0..n {
            let Some(gh) = gpd.compose(g, h) else { continue };
            let k = r.curvature(gpd, g, h);
            let e2 = r.lambda0[g]
                .mul(&r.lambda0[h])?
                .sub(&r.lambda0[gh])?
                .add(&k.mul(&r.partial[gpd.src(h)])?)?;
            if !e2.is_zero() {
                return Err(RepError::Equation2(
                    gpd.arrow_id(g).into(),
                    gpd.arrow_id(h).into(),
                ));
            }
            let e3 = r.lambda1[g]
                .mul(&r.lambda1[h])?
                .sub(&r.lambda1[gh])?
                .add(&r.partial[gpd.tgt(g)].mul(&k)?)?;
            if !e3.is_zero() {
                return Err(RepError::Equation3(
                    gpd.arrow_id(g).into(),
                    gpd.arrow_id(h).into(),
                ));
            }
        }
    }
    // Equation (4).
    for g in 0..n {
        for h in 0..n {
            let Some(gh) = gpd.compose(g, h) else { continue };
            for k in 0..n {
                let Some(hk) = gpd.compose(h, k) else { continue };
                let e4 = r.lambda0[g]
                    .mul(&r.curvature(gpd, h, k))?
                    .sub(&r.curvature(gpd, gh, k))?
                    .add(&r.curvature(gpd, g, hk))?
                    .sub(&r.curvature(gpd, g, h).mul(&r.lambda1[k])?)?;
                if !e4.is_zero() {
                    return Err(RepError::Equation4(
                        gpd.arrow_id(g).into(),
                        gpd.arrow_id(h).into(),
                        gpd.arrow_id(k).into(),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Rank-`d` trivial representation.
pub fn trivial_rep(gpd: &FiniteGroupoid, d: usize) -> Representation {
    Representation {
        dims: vec![d; gpd.n_objects()],
        act: (0..gpd.n_arrows()).map(|_| SparseMat::identity(d)).collect(),
    }
}

/// Left-regular representation: the fiber at `x` is spanned by `t⁻¹(x)`,
/// and `g` acts by `h ↦ g∘h`.
pub fn regular_rep(gpd: &FiniteGroupoid) -> Representation {
    let dims: Vec<usize> = (0..gpd.n_objects()).map(|x| gpd.arrows_into(x).len()).collect();
    let act = (0..gpd.n_arrows())
        .map(|g| {
            let src_basis = gpd.arrows_into(gpd.src(g));
            let tgt_basis = gpd.arrows_into(gpd.tgt(g));
            let trips = src_basis.iter().enumerate().map(|(j, h)| {
                let gh = gpd.compose(g, *h).expect("t(h) = s(g)");
                let i = tgt_basis.binary_search(&gh).expect("t(g∘h) = t(g)");
                (i, j, num::One::one())
            });
            SparseMat::from_triplets(tgt_basis.len(), src_basis.len(), trips).unwrap()
        })
        .collect();
    Representation { dims, act }
}

/// Conjugates a representation by invertible objectwise matrices:
/// `act'(g) = Q_{t(g)} · act(g) · Q_{s(g)}⁻¹`.
pub fn conjugate_rep(
    gpd: &FiniteGroupoid,
    rep: &Representation,
    q: &[SparseMat],
) -> Result<Representation, RepError> {
    let mut qinv = Vec::with_capacity(q.len());
    for (x, m) in q.iter().enumerate() {
        let inv = matrix::inverse(m)
            .ok_or_else(|| RepError::NotInvertible(gpd.object_id(x).into()))?;
        qinv.push(inv);
    }
    let act = (0..gpd.n_arrows())
        .map(|g| {
            q[gpd.tgt(g)]
                .mul(&rep.act[g])
                .and_then(|m| m.mul(&qinv[gpd.src(g)]))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Representation { dims: rep.dims.clone(), act })
}

/// Objectwise direct sum of two representations.
pub fn direct_sum_rep(
    gpd: &FiniteGroupoid,
    a: &Representation,
    b: &Representation,
) -> Result<Representation, RepError> {
    let dims = (0..gpd.n_objects()).map(|x| a.dims[x] + b.dims[x]).collect();
    let act = (0..gpd.n_arrows())
        .map(|g| {
            SparseMat::from_blocks(
                &[a.dims[gpd.tgt(g)], b.dims[gpd.tgt(g)]],
                &[a.dims[gpd.src(g)], b.dims[gpd.src(g)]],
                vec![(0, 0, a.act[g].clone()), (1, 1, b.act[g].clone())],
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Representation { dims, act })
}

/// Internal hom `Hom(A, B)` with action `ξ ↦ b(g)·ξ·a(g)⁻¹`. The fiber at
/// `x` is the space of `dimB_x × dimA_x` matrices, vectorized row-major.
pub fn hom_rep(
    gpd: &FiniteGroupoid,
    a: &Representation,
    b: &Representation,
) -> Result<Representation, RepError> {
    let dims: Vec<usize> = (0..gpd.n_objects()).map(|x| a.dims[x] * b.dims[x]).collect();
    let mut act = Vec::with_capacity(gpd.n_arrows());
    for g in 0..gpd.n_arrows() {
        let (s, t) = (gpd.src(g), gpd.tgt(g));
        let a_inv = matrix::inverse(&a.act[g])
            .ok_or_else(|| RepError::NotInvertible(gpd.arrow_id(g).into()))?;
        let mut trips = Vec::new();
        for i in 0..b.dims[s] {
            for j in 0..a.dims[s] {
                // Image of the matrix unit E_{ij} under ξ ↦ b(g) ξ a(g)⁻¹:
                // column i of b(g) times row j of a(g)⁻¹.
                let col = j + i * a.dims[s];
                for (bi, _, bv) in b.act[g].triplets().filter(|(_, c, _)| *c == i) {
                    for (aj, av) in (0..a.dims[t]).map(|c| (c, a_inv.get(j, c))) {
                        let v = bv * &av;
                        if !v.is_zero() {
                            trips.push((aj + bi * a.dims[t], col, v));
                        }
                    }
                }
            }
        }
        act.push(SparseMat::from_triplets(dims[t], dims[s], trips)?);
    }
    Ok(Representation { dims, act })
}

/// Pullback of a representation along a morphism into its base groupoid.
pub fn pullback_rep(
    total: &FiniteGroupoid,
    proj: &GroupoidMorphism,
    rep: &Representation,
) -> Representation {
    Representation {
        dims: (0..total.n_objects()).map(|o| rep.dims[proj.obj_map[o]]).collect(),
        act: (0..total.n_arrows()).map(|a| rep.act[proj.arr_map[a]].clone()).collect(),
    }
}

/// Pullback of a two-term system along a morphism into its base groupoid.
pub fn pullback_ruth(
    total: &FiniteGroupoid,
    base: &FiniteGroupoid,
    proj: &GroupoidMorphism,
    r: &Ruth2,
) -> Ruth2 {
    let _ = base;
    let mut kappa = BTreeMap::new();
    for a in 0..total.n_arrows() {
        for b in 0..total.n_arrows() {
            if total.compose(a, b).is_none() {
                continue;
            }
            if let Some(k) = r.kappa.get(&(proj.arr_map[a], proj.arr_map[b])) {
                if !k.is_zero() {
                    kappa.insert((a, b), k.clone());
                }
            }
        }
    }
    Ruth2 {
        dims0: (0..total.n_objects()).map(|o| r.dims0[proj.obj_map[o]]).collect(),
        dims1: (0..total.n_objects()).map(|o| r.dims1[proj.obj_map[o]]).collect(),
        partial: (0..total.n_objects()).map(|o| r.partial[proj.obj_map[o]].clone()).collect(),
        lambda0: (0..total.n_arrows()).map(|a| r.lambda0[proj.arr_map[a]].clone()).collect(),
        lambda1: (0..total.n_arrows()).map(|a| r.lambda1[proj.arr_map[a]].clone()).collect(),
        kappa,
    }
}

/// Strict cone of an equivariant map `ρ : A → B` of genuine
/// representations: `∂ = ρ`, `λ⁰ = a`, `λ¹ = b`, `K = 0`. Equivariance
/// (`ρ_{t(g)} a(g) = b(g) ρ_{s(g)}`) is verified.
pub fn cone_ruth(
    gpd: &FiniteGroupoid,
    a: &Representation,
    b: &Representation,
    rho: &[SparseMat],
) -> Result<Ruth2, RepError> {
    for x in 0..gpd.n_objects() {
        let m = &rho[x];
        if m.rows() != b.dims[x] || m.cols() != a.dims[x] {
            return Err(RepError::BoundaryShape(
                gpd.object_id(x).into(),
                m.rows(),
                m.cols(),
                b.dims[x],
                a.dims[x],
            ));
        }
    }
    for g in 0..gpd.n_arrows() {
        let lhs = rho[gpd.tgt(g)].mul(&a.act[g])?;
        let rhs = b.act[g].mul(&rho[gpd.src(g)])?;
        if lhs != rhs {
            return Err(RepError::NotEquivariant(gpd.arrow_id(g).into()));
        }
    }
    Ok(Ruth2 {
        dims0: a.dims.clone(),
        dims1: b.dims.clone(),
        partial: rho.to_vec(),
        lambda0: a.act.clone(),
        lambda1: b.act.clone(),
        kappa: BTreeMap::new(),
    })
}

/// Gauge transformation of a two-term system by arrowwise maps
/// `η_g : E1_{s(g)} → E0_{t(g)}` vanishing on units:
///
/// * `λ⁰` gains `η_g ∂`, `λ¹` gains `∂ η_g`,
/// * `K(g,h)` becomes `K(g,h) − λ⁰_g η_h + η_{gh} − η_g ∂ η_h − η_g λ¹_h`.
///
/// The twisted structure satisfies the same equations (twisting is
/// conjugation of the total complex by a unipotent cochain isomorphism), so
/// cohomology is unchanged.
pub fn gauge_twist(
    gpd: &FiniteGroupoid,
    r: &Ruth2,
    eta: &[SparseMat],
) -> Result<Ruth2, RepError> {
    for g in 0..gpd.n_arrows() {
        let m = &eta[g];
        let (rr, cc) = (r.dims0[gpd.tgt(g)], r.dims1[gpd.src(g)]);
        if m.rows() != rr || m.cols() != cc {
            return Err(RepError::TwistShape(
                gpd.arrow_id(g).into(),
                m.rows(),
                m.cols(),
                rr,
                cc,
            ));
        }
        if gpd.is_unit(g) && !m.is_zero() {
            return Err(RepError::TwistUnit(gpd.arrow_id(g).into()));
        }
    }
    let mut lambda0 = Vec::with_capacity(gpd.n_arrows());
    let mut lambda1 = Vec::with_capacity(gpd.n_arrows());
    for g in 0..gpd.n_arrows() {
        lambda0.push(r.lambda0[g].add(&eta[g].mul(&r.partial[gpd.src(g)])?)?);
        lambda1.push(r.lambda1[g].add(&r.partial[gpd.tgt(g)].mul(&eta[g])?)?);
    }
    let mut kappa = BTreeMap::new();
    for g in 0..gpd.n_arrows() {
        for h in 0..gpd.n_arrows() {
            let Some(gh) = gpd.compose(g, h) else { continue };
            let k = r
                .curvature(gpd, g, h)
                .sub(&r.lambda0[g].mul(&eta[h])?)?
                .add(&eta[gh])?
                .sub(&eta[g].mul(&r.partial[gpd.tgt(h)].mul(&eta[h])?)?)?
                .sub(&eta[g].mul(&r.lambda1[h])?)?;
            if !k.is_zero() {
                kappa.insert((g, h), k);
            }
        }
    }
    Ok(Ruth2 {
        dims0: r.dims0.clone(),
        dims1: r.dims1.clone(),
        partial: r.partial.clone(),
        lambda0,
        lambda1,
        kappa,
    })
}

/// Kernel representation `𝔦 = ker ∂` with the restricted `λ⁰` action.
/// Returns the representation and the objectwise inclusion matrices.
/// Fails with a witness when the kernel fibers cannot carry a genuine
/// representation (non-constant rank along an orbit).
pub fn kernel_rep(
    gpd: &FiniteGroupoid,
    r: &Ruth2,
) -> Result<(Representation, Vec<SparseMat>), RepError> {
    let mut incl = Vec::with_capacity(gpd.n_objects());
    let mut dims = Vec::with_capacity(gpd.n_objects());
    for x in 0..gpd.n_objects() {
        let basis = matrix::kernel_basis(&r.partial[x]);
        dims.push(basis.len());
        let mut trips = Vec::new();
        for (j, v) in basis.iter().enumerate() {
            for (i, val) in v.iter().enumerate() {
                if !val.is_zero() {
                    trips.push((i, j, val.clone()));
                }
            }
        }
        incl.push(SparseMat::from_triplets(r.dims0[x], basis.len(), trips)?);
    }
    let mut act = Vec::with_capacity(gpd.n_arrows());
    for g in 0..gpd.n_arrows() {
        let (s, t) = (gpd.src(g), gpd.tgt(g));
        let image = r.lambda0[g].mul(&incl[s])?;
        let cols: Vec<Vec<Rat>> = (0..image.cols())
            .map(|j| (0..image.rows()).map(|i| image.get(i, j)).collect())
            .collect();
        let sols = matrix::solve_many(&incl[t], &cols);
        let mut trips = Vec::new();
        for (j, sol) in sols.into_iter().enumerate() {
            let sol = sol.ok_or_else(|| {
                RepError::NotRegular(format!(
                    "λ⁰ along `{}` leaves the kernel fibers",
                    gpd.arrow_id(g)
                ))
            })?;
            for (i, v) in sol.into_iter().enumerate() {
                if !v.is_zero() {
                    trips.push((i, j, v));
                }
            }
        }
        act.push(SparseMat::from_triplets(dims[t], dims[s], trips)?);
    }
    let rep = Representation { dims, act };
    validate_rep(gpd, &rep).map_err(|e| RepError::NotRegular(e.to_string()))?;
    Ok((rep, incl))
}

/// Objectwise cokernel data of `∂`: for each object, the projection
/// `Q_x : E1_x → ν_x` onto free coordinates modulo `im ∂_x` and a section
/// `S_x : ν_x → E1_x` with `Q S = id` and `Q ∂ = 0`. Makes no regularity
/// assumption.
pub fn coker_projections(
    gpd: &FiniteGroupoid,
    r: &Ruth2,
) -> Result<(Vec<usize>, Vec<SparseMat>, Vec<SparseMat>), RepError> {
    let mut proj = Vec::with_capacity(gpd.n_objects());
    let mut sect = Vec::with_capacity(gpd.n_objects());
    let mut dims = Vec::with_capacity(gpd.n_objects());
    for x in 0..gpd.n_objects() {
        let ech = matrix::span_echelon_sparse(r.partial[x].sparse_cols(), r.dims1[x]);
        let free = ech.free_cols();
        dims.push(free.len());
        // Q: coordinates of (v mod im ∂) at the free positions.
        let mut qtrips = Vec::new();
        for i in 0..r.dims1[x] {
            let mut e = vec![Rat::zero(); r.dims1[x]];
            e[i] = num::One::one();
            ech.reduce_vec(&mut e);
            for (row, f) in free.iter().enumerate() {
                if !e[*f].is_zero() {
                    qtrips.push((row, i, e[*f].clone()));
                }
            }
        }
        proj.push(SparseMat::from_triplets(free.len(), r.dims1[x], qtrips)?);
        let strips = free
            .iter()
            .enumerate()
            .map(|(j, f)| (*f, j, num::One::one()));
        sect.push(SparseMat::from_triplets(r.dims1[x], free.len(), strips)?);
    }
    Ok((dims, proj, sect))
}

/// Cokernel representation `ν = coker ∂` with the action induced by `λ¹`.
/// Returns the representation, the objectwise projections
/// `Q_x : E1_x → ν_x`, and sections `S_x : ν_x → E1_x` with `Q S = id`.
pub fn cokernel_rep(
    gpd: &FiniteGroupoid,
    r: &Ruth2,
) -> Result<(Representation, Vec<SparseMat>, Vec<SparseMat>), RepError> {
    let (dims, proj, sect) = coker_projections(gpd, r)?;
    let mut act = Vec::with_capacity(gpd.n_arrows());
    for g in 0..gpd.n_arrows() {
        let (s, t) = (gpd.src(g), gpd.tgt(g));
        act.push(proj[t].mul(&r.lambda1[g])?.mul(&sect[s])?);
    }
    let rep = Representation { dims, act };
    validate_rep(gpd, &rep).map_err(|e| RepError::NotRegular(e.to_string()))?;
    Ok((rep, proj, sect))
}

/// Representation associated to a gauge groupoid and a representation of
/// its structure group, computed directly on class representatives: the
/// fiber over each orbit is `V` in basepoint coordinates, and an arrow
/// `[p_y, w]` acts by `ρ(α)⁻¹` for the unique `α` with `α·w = p_x`.
pub fn associated_bundle_rep(
    gauge: &GaugeResult,
    act: &[Vec<usize>],
    rho: &[SparseMat],
    dim: usize,
) -> Result<Representation, RepError> {
    let gpd = &gauge.groupoid;
    let mut mats = Vec::with_capacity(gpd.n_arrows());
    for a in 0..gpd.n_arrows() {
        let (_, w) = gauge.canonical_pair[a];
        let px = gauge.basepoint[gpd.src(a)];
        let alpha = (0..rho.len())
            .find(|g| act[*g][w] == px)
            .expect("free transitive orbit action");
        let m = matrix::inverse(&rho[alpha])
            .ok_or_else(|| RepError::NotInvertible(gpd.arrow_id(a).into()))?;
        mats.push(m);
    }
    let rep = Representation { dims: vec![dim; gpd.n_objects()], act: mats };
    validate_rep(gpd, &rep)?;
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Wire formats
// ---------------------------------------------------------------------------

type MatrixRows = Vec<Vec<String>>;

/// Wire form of a genuine representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepData {
    /// Fiber dimension per object id.
    #[serde(rename = "E")]
    pub e: BTreeMap<String, usize>,
    /// Action matrix per arrow id, rows of rationals.
    pub action: BTreeMap<String, MatrixRows>,
}

/// Wire form of a two-term system. `K` is keyed by `"g|h"`; pairs with
/// zero curvature may be omitted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RuthData {
    #[serde(rename = "E0")]
    pub e0: BTreeMap<String, usize>,
    #[serde(rename = "E1")]
    pub e1: BTreeMap<String, usize>,
    pub partial: BTreeMap<String, MatrixRows>,
    pub lambda0: BTreeMap<String, MatrixRows>,
    pub lambda1: BTreeMap<String, MatrixRows>,
    #[serde(rename = "K", default)]
    pub kappa: BTreeMap<String, MatrixRows>,
}

fn parse_matrix(rows: &MatrixRows, r: usize, c: usize, ctx: &str) -> Result<SparseMat, RepError> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(RepError::BadEntry(format!("matrix for {ctx} is not {r}x{c}")));
    }
    let mut trips = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            let v = parse_rat(s).map_err(RepError::BadEntry)?;
            if !v.is_zero() {
                trips.push((i, j, v));
            }
        }
    }
    Ok(SparseMat::from_triplets(r, c, trips)?)
}

fn format_matrix(m: &SparseMat) -> MatrixRows {
    m.dense_rows()
        .into_iter()
        .map(|row| row.iter().map(format_rat).collect())
        .collect()
}

fn bundle_dims(
    gpd: &FiniteGroupoid,
    map: &BTreeMap<String, usize>,
) -> Result<Vec<usize>, RepError> {
    let mut dims = vec![0; gpd.n_objects()];
    let mut seen = vec![false; gpd.n_objects()];
    for (id, d) in map {
        let x = gpd.object_index(id).ok_or_else(|| RepError::UnknownObject(id.clone()))?;
        dims[x] = *d;
        seen[x] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(RepError::BundleShape);
    }
    Ok(dims)
}

/// Decodes a representation against its groupoid.
pub fn rep_from_data(gpd: &FiniteGroupoid, data: &RepData) -> Result<Representation, RepError> {
    let dims = bundle_dims(gpd, &data.e)?;
    let mut act = Vec::with_capacity(gpd.n_arrows());
    for g in 0..gpd.n_arrows() {
        let id = gpd.arrow_id(g);
        let rows = data
            .action
            .get(id)
            .ok_or_else(|| RepError::MissingMatrix(format!("action at `{id}`")))?;
        act.push(parse_matrix(rows, dims[gpd.tgt(g)], dims[gpd.src(g)], id)?);
    }
    for id in data.action.keys() {
        if gpd.arrow_index(id).is_none() {
            return Err(RepError::UnknownArrow(id.clone()));
        }
    }
    Ok(Representation { dims, act })
}

pub fn rep_to_data(gpd: &FiniteGroupoid, rep: &Representation) -> RepData {
    RepData {
        e: (0..gpd.n_objects())
            .map(|x| (gpd.object_id(x).to_string(), rep.dims[x]))
            .collect(),
        action: (0..gpd.n_arrows())
            .map(|g| (gpd.arrow_id(g).to_string(), format_matrix(&rep.act[g])))
            .collect(),
    }
}

/// Splits a `"g|h"` curvature key into arrow indices. Arrow ids may contain
/// the separator, so every split point is tried; the key must resolve to
/// exactly one composable pair.
fn split_curvature_key(gpd: &FiniteGroupoid, key: &str) -> Result<(usize, usize), RepError> {
    let mut found = None;
    for (pos, ch) in key.char_indices() {
        if ch != '|' {
            continue;
        }
        let (g, h) = (&key[..pos], &key[pos + 1..]);
        if let (Some(gi), Some(hi)) = (gpd.arrow_index(g), gpd.arrow_index(h)) {
            if found.is_some() && found != Some((gi, hi)) {
                return Err(RepError::AmbiguousCurvatureKey(key.to_string()));
            }
            found = Some((gi, hi));
        }
    }
    found.ok_or_else(|| RepError::BadCurvatureKey(key.to_string()))
}

/// Decodes a two-term system against its groupoid. Structural shapes are
/// enforced here; the equations are left to [`validate_ruth`].
pub fn ruth_from_data(gpd: &FiniteGroupoid, data: &RuthData) -> Result<Ruth2, RepError> {
    let dims0 = bundle_dims(gpd, &data.e0)?;
    let dims1 = bundle_dims(gpd, &data.e1)?;
    let mut partial = Vec::with_capacity(gpd.n_objects());
    for x in 0..gpd.n_objects() {
        let id = gpd.object_id(x);
        match data.partial.get(id) {
            Some(rows) => partial.push(parse_matrix(rows, dims1[x], dims0[x], id)?),
            None => partial.push(SparseMat::zero(dims1[x], dims0[x])),
        }
    }
    let mut lambda0 = Vec::with_capacity(gpd.n_arrows());
    let mut lambda1 = Vec::with_capacity(gpd.n_arrows());
    for g in 0..gpd.n_arrows() {
        let id = gpd.arrow_id(g);
        let (s, t) = (gpd.src(g), gpd.tgt(g));
        let l0 = data
            .lambda0
            .get(id)
            .ok_or_else(|| RepError::MissingMatrix(format!("lambda0 at `{id}`")))?;
        lambda0.push(parse_matrix(l0, dims0[t], dims0[s], id)?);
        let l1 = data
            .lambda1
            .get(id)
            .ok_or_else(|| RepError::MissingMatrix(format!("lambda1 at `{id}`")))?;
        lambda1.push(parse_matrix(l1, dims1[t], dims1[s], id)?);
    }
    let mut kappa = BTreeMap::new();
    for (key, rows) in &data.kappa {
        let (g, h) = split_curvature_key(gpd, key)?;
        if gpd.compose(g, h).is_none() {
            return Err(RepError::CurvatureDomain(
                gpd.arrow_id(g).into(),
                gpd.arrow_id(h).into(),
            ));
        }
        let m = parse_matrix(rows, dims0[gpd.tgt(g)], dims1[gpd.src(h)], key)?;
        if !m.is_zero() {
            kappa.insert((g, h), m);
        }
    }
    Ok(Ruth2 { dims0, dims1, partial, lambda0, lambda1, kappa })
}

pub fn ruth_to_data(gpd: &FiniteGroupoid, r: &Ruth2) -> RuthData {
    RuthData {
        e0: (0..gpd.n_objects())
            .map(|x| (gpd.object_id(x).to_string(), r.dims0[x]))
            .collect(),
        e1: (0..gpd.n_objects())
            .map(|x| (gpd.object_id(x).to_string(), r.dims1[x]))
            .collect(),
        partial: (0..gpd.n_objects())
            .map(|x| (gpd.object_id(x).to_string(), format_matrix(&r.partial[x])))
            .collect(),
        lambda0: (0..gpd.n_arrows())
            .map(|g| (gpd.arrow_id(g).to_string(), format_matrix(&r.lambda0[g])))
            .collect(),
        lambda1: (0..gpd.n_arrows())
            .map(|g| (gpd.arrow_id(g).to_string(), format_matrix(&r.lambda1[g])))
            .collect(),
        kappa: r
            .kappa
            .iter()
            .map(|((g, h), m)| {
                (format!("{}|{}", gpd.arrow_id(*g), gpd.arrow_id(*h)), format_matrix(m))
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{action_groupoid, group_groupoid};
    use crate::rat::rat_int;

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

    #[test]
    fn trivial_and_regular_reps_validate() {
        for g in [zmod(3), z2_swap()] {
            validate_rep(&g, &trivial_rep(&g, 2)).unwrap();
            validate_rep(&g, &regular_rep(&g)).unwrap();
        }
    }

    #[test]
    fn sign_rep_of_z2() {
        let g = zmod(2);
        let sign = Representation {
            dims: vec![1],
            act: vec![
                SparseMat::identity(1),
                SparseMat::from_triplets(1, 1, vec![(0, 0, rat_int(-1))]).unwrap(),
            ],
        };
        validate_rep(&g, &sign).unwrap();
    }

    #[test]
    fn strict_cone_is_valid_ruth() {
        let g = z2_swap();
        let a = trivial_rep(&g, 1);
        let b = trivial_rep(&g, 1);
        let rho: Vec<SparseMat> = (0..2).map(|_| SparseMat::zero(1, 1)).collect();
        let r = cone_ruth(&g, &a, &b, &rho).unwrap();
        validate_ruth(&g, &r).unwrap();
        let id_rho: Vec<SparseMat> = (0..2).map(|_| SparseMat::identity(1)).collect();
        let r2 = cone_ruth(&g, &a, &b, &id_rho).unwrap();
        validate_ruth(&g, &r2).unwrap();
    }

    #[test]
    fn gauge_twist_preserves_validity_and_inverts() {
        let g = z2_swap();
        let a = trivial_rep(&g, 1);
        let b = trivial_rep(&g, 1);
        let rho: Vec<SparseMat> = (0..2).map(|_| SparseMat::zero(1, 1)).collect();
        let r = cone_ruth(&g, &a, &b, &rho).unwrap();
        let eta: Vec<SparseMat> = (0..g.n_arrows())
            .map(|x| {
                if g.is_unit(x) {
                    SparseMat::zero(1, 1)
                } else {
                    SparseMat::from_triplets(1, 1, vec![(0, 0, rat_int(3))]).unwrap()
                }
            })
            .collect();
        let twisted = gauge_twist(&g, &r, &eta).unwrap();
        validate_ruth(&g, &twisted).unwrap();
        assert!(!twisted.kappa.is_empty(), "twist of a strict cone should bend the curvature");
        let back = gauge_twist(&g, &twisted, &eta.iter().map(|m| m.neg()).collect::<Vec<_>>())
            .unwrap();
        validate_ruth(&g, &back).unwrap();
        assert_eq!(back.kappa.len(), r.kappa.len());
        for gidx in 0..g.n_arrows() {
            assert_eq!(back.lambda0[gidx], r.lambda0[gidx]);
            assert_eq!(back.lambda1[gidx], r.lambda1[gidx]);
        }
    }

    #[test]
    fn perturbed_ruth_fails_validation() {
        let g = z2_swap();
        let a = trivial_rep(&g, 1);
        let b = trivial_rep(&g, 1);
        let rho: Vec<SparseMat> = (0..2).map(|_| SparseMat::zero(1, 1)).collect();
        let mut r = cone_ruth(&g, &a, &b, &rho).unwrap();
        let non_unit = (0..g.n_arrows()).find(|x| !g.is_unit(*x)).unwrap();
        r.lambda0[non_unit].set(0, 0, rat_int(2));
        assert!(validate_ruth(&g, &r).is_err());
    }

    #[test]
    fn kernel_and_cokernel_of_cone() {
        // ρ = id on one summand, 0 on the other: 𝔦 and ν are both lines.
        let g = z2_swap();
        let a = trivial_rep(&g, 2);
        let b = trivial_rep(&g, 2);
        let rho: Vec<SparseMat> = (0..2)
            .map(|_| SparseMat::from_triplets(2, 2, vec![(0, 0, rat_int(1))]).unwrap())
            .collect();
        let r = cone_ruth(&g, &a, &b, &rho).unwrap();
        let (ker, incl) = kernel_rep(&g, &r).unwrap();
        assert_eq!(ker.dims, vec![1, 1]);
        for x in 0..2 {
            assert!(r.partial[x].mul(&incl[x]).unwrap().is_zero());
        }
        let (coker, proj, sect) = cokernel_rep(&g, &r).unwrap();
        assert_eq!(coker.dims, vec![1, 1]);
        for x in 0..2 {
            assert!(proj[x].mul(&r.partial[x]).unwrap().is_zero());
            assert_eq!(proj[x].mul(&sect[x]).unwrap(), SparseMat::identity(1));
        }
    }

    #[test]
    fn hom_rep_acts_by_conjugation() {
        let g = zmod(2);
        let sign = Representation {
            dims: vec![1],
            act: vec![
                SparseMat::identity(1),
                SparseMat::from_triplets(1, 1, vec![(0, 0, rat_int(-1))]).unwrap(),
            ],
        };
        let reg = regular_rep(&g);
        let h = hom_rep(&g, &reg, &sign).unwrap();
        validate_rep(&g, &h).unwrap();
        assert_eq!(h.dims, vec![2]);
    }

    #[test]
    fn rep_wire_round_trip() {
        let g = z2_swap();
        let rep = regular_rep(&g);
        let data = rep_to_data(&g, &rep);
        let back = rep_from_data(&g, &data).unwrap();
        assert_eq!(back.dims, rep.dims);
        for x in 0..g.n_arrows() {
            assert_eq!(back.act[x], rep.act[x]);
        }
    }

    #[test]
    fn ruth_wire_round_trip_with_ambiguous_ids() {
        // Pair groupoid arrow ids contain '|'; curvature keys must still
        // resolve uniquely.
        let g = crate::groupoid::pair_groupoid(&["x1".into(), "x2".into()]).unwrap();
        let a = trivial_rep(&g, 1);
        let b = trivial_rep(&g, 1);
        let rho: Vec<SparseMat> = (0..2).map(|_| SparseMat::zero(1, 1)).collect();
        let base = cone_ruth(&g, &a, &b, &rho).unwrap();
        let eta: Vec<SparseMat> = (0..g.n_arrows())
            .map(|x| {
                if g.is_unit(x) {
                    SparseMat::zero(1, 1)
                } else {
                    SparseMat::from_triplets(1, 1, vec![(0, 0, rat_int(1))]).unwrap()
                }
            })
            .collect();
        let r = gauge_twist(&g, &base, &eta).unwrap();
        validate_ruth(&g, &r).unwrap();
        let data = ruth_to_data(&g, &r);
        let back = ruth_from_data(&g, &data).unwrap();
        validate_ruth(&g, &back).unwrap();
        assert_eq!(back.kappa, r.kappa);
    }
}
