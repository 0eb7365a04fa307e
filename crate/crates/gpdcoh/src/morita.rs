//! Morita comparisons. A pullback groupoid along a surjection onto the
//! object set, the Čech groupoid of a cover, and the gauge groupoid of a
//! free group action are all equivalent to their base; here the
//! cohomology of both sides is computed (coefficients transported along
//! the canonical morphism) and compared degree by degree. For covers the
//! comparison is upgraded to explicit Mayer–Vietoris chain maps `π*` and
//! `Ψ` with `Ψ∘π* = id` exactly.

use std::collections::BTreeMap;

use crate::cochain::{degree_basis, rep_complex, ruth_complex, Nerve};
use crate::complex::{ChainComplex, ChainMap, ComplexError};
use crate::groupoid::{
    cech_groupoid, gauge_groupoid, group_groupoid, pullback_groupoid, FiniteGroupoid,
    GroupoidError, PullbackResult,
};
use crate::matrix::{MatrixError, SparseMat};
use crate::rat::{format_rat, rat, Rat};
use crate::rep::{
    associated_bundle_rep, pullback_rep, pullback_ruth, validate_rep, Representation, RepError,
    Ruth2,
};
use num::{One, Zero};

#[derive(Debug, thiserror::Error)]
pub enum MoritaError {
    #[error("weight of set {0} at object `{1}` is nonzero outside the set")]
    NotSubordinate(usize, String),
    #[error("weights at object `{0}` sum to {1}, not 1")]
    NotUnitSum(String, String),
    #[error("partition has {0} weight rows for {1} cover sets")]
    WeightRows(usize, usize),
    #[error("weight row {0} has {1} entries for {2} objects")]
    WeightCols(usize, usize, usize),
    #[error("cover set {0} names unknown object `{1}`")]
    UnknownObject(usize, String),
    #[error("group element `{0}` has no arrow in the group groupoid")]
    MissingGroupArrow(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A cover of the object set together with exact rational weights
/// `ρ_j(x)` that vanish outside `U_j` and sum to 1 at every object.
#[derive(Clone, Debug)]
pub struct PartitionOfUnity {
    pub cover: Vec<Vec<String>>,
    /// `rho[j][x]`, indexed by cover set and object index.
    pub rho: Vec<Vec<Rat>>,
}

impl PartitionOfUnity {
    /// The canonical subordinate partition: `ρ_j(x) = 1/|{i : x ∈ U_i}|`
    /// for `x ∈ U_j`, else 0.
    pub fn auto(
        base: &FiniteGroupoid,
        cover: &[Vec<String>],
    ) -> Result<PartitionOfUnity, MoritaError> {
        let membership = membership(base, cover)?;
        let mut counts = vec![0usize; base.n_objects()];
        for row in &membership {
            for (x, inside) in row.iter().enumerate() {
                if *inside {
                    counts[x] += 1;
                }
            }
        }
        let rho = membership
            .iter()
            .map(|row| {
                (0..base.n_objects())
                    .map(|x| if row[x] { rat(1, counts[x] as i64) } else { Rat::zero() })
                    .collect()
            })
            .collect();
        let pu = PartitionOfUnity { cover: cover.to_vec(), rho };
        pu.validate(base)?;
        Ok(pu)
    }

    /// Checks subordination and the unit-sum property.
    pub fn validate(&self, base: &FiniteGroupoid) -> Result<(), MoritaError> {
        let membership = membership(base, &self.cover)?;
        if self.rho.len() != self.cover.len() {
            return Err(MoritaError::WeightRows(self.rho.len(), self.cover.len()));
        }
        for (j, row) in self.rho.iter().enumerate() {
            if row.len() != base.n_objects() {
                return Err(MoritaError::WeightCols(j, row.len(), base.n_objects()));
            }
            for (x, w) in row.iter().enumerate() {
                if !w.is_zero() && !membership[j][x] {
                    return Err(MoritaError::NotSubordinate(j, base.object_id(x).into()));
                }
            }
        }
        for x in 0..base.n_objects() {
            let sum: Rat = self.rho.iter().map(|row| row[x].clone()).sum();
            if !sum.is_one() {
                return Err(MoritaError::NotUnitSum(
                    base.object_id(x).into(),
                    format_rat(&sum),
                ));
            }
        }
        Ok(())
    }
}

fn membership(
    base: &FiniteGroupoid,
    cover: &[Vec<String>],
) -> Result<Vec<Vec<bool>>, MoritaError> {
    let mut rows = Vec::with_capacity(cover.len());
    for (j, u) in cover.iter().enumerate() {
        let mut row = vec![false; base.n_objects()];
        for id in u {
            let x = base
                .object_index(id)
                .ok_or_else(|| MoritaError::UnknownObject(j, id.clone()))?;
            row[x] = true;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// The Mayer–Vietoris package for a cover: the Čech groupoid with
/// pulled-back coefficients and the chain maps `π*` (pullback along the
/// projection) and `Ψ` (weighted push-down).
pub struct MvMaps {
    pub cech: PullbackResult,
    pub coefficients: Representation,
    pub base_complex: ChainComplex,
    pub cech_complex: ChainComplex,
    pub pi_star: ChainMap,
    pub psi: ChainMap,
}

impl MvMaps {
    /// Whether `Ψ∘π* = id` holds entrywise in every degree.
    pub fn psi_pi_identity(&self) -> bool {
        (0..self.base_complex.dims().len()).all(|n| {
            match self.psi.component(n).mul(self.pi_star.component(n)) {
                Ok(m) => m == SparseMat::identity(self.base_complex.dim(n)),
                Err(_) => false,
            }
        })
    }
}

/// Builds the Čech groupoid of the partition's cover and the
/// Mayer–Vietoris chain maps
/// `π* : C(G,E) → C(Ğ,π*E)`, `(π*c)(ğ₁,…,ğ_k) = c(πğ₁,…,πğ_k)`, and
/// `Ψ : C(Ğ,π*E) → C(G,E)`,
/// `Ψ(c)(g₁,…,g_k) = Σ ρ_{i₁}(t g₁) ρ_{j₁}(s g₁) ⋯ ρ_{j_k}(s g_k) ·
/// c((i₁,g₁,j₁),(j₁,g₂,j₂),…)`, the sum running over index tuples whose
/// Čech arrows exist. Both are verified to be chain maps at construction;
/// `Ψ∘π* = id` follows from the unit sums and is exposed as
/// [`MvMaps::psi_pi_identity`].
pub fn mv_maps(
    base: &FiniteGroupoid,
    pu: &PartitionOfUnity,
    e: &Representation,
    k_max: usize,
) -> Result<MvMaps, MoritaError> {
    pu.validate(base)?;
    let cech = cech_groupoid(base, &pu.cover)?;
    let cg = &cech.groupoid;
    let pe = pullback_rep(cg, &cech.projection, e);
    let base_cx = rep_complex(base, e, k_max)?;
    let cech_cx = rep_complex(cg, &pe, k_max)?;
    let base_nerve = Nerve::up_to(base, k_max + 1);
    let cech_nerve = Nerve::up_to(cg, k_max + 1);

    // Čech object of `(j, x)` and Čech arrow of `(i, g, j)`.
    let mut obj_of: Vec<Vec<Option<usize>>> =
        vec![vec![None; base.n_objects()]; pu.cover.len()];
    for (j, u) in pu.cover.iter().enumerate() {
        for id in u {
            let x = base.object_index(id).expect("validated above");
            obj_of[j][x] = cg.object_index(&format!("U{j}:{id}"));
        }
    }
    let mut arrow_of: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for a in 0..cg.n_arrows() {
        arrow_of.insert((cg.tgt(a), cech.projection.arr_map[a], cg.src(a)), a);
    }
    let sets_containing: Vec<Vec<usize>> = (0..base.n_objects())
        .map(|x| (0..pu.cover.len()).filter(|j| obj_of[*j][x].is_some()).collect())
        .collect();

    let mut pi_comps = Vec::with_capacity(k_max + 2);
    let mut psi_comps = Vec::with_capacity(k_max + 2);
    for n in 0..=k_max + 1 {
        let bb = degree_basis(base, &base_nerve, &e.dims, n);
        let cb = degree_basis(cg, &cech_nerve, &pe.dims, n);
        let mut pi_trips = Vec::new();
        if n == 0 {
            for p in 0..cg.n_objects() {
                let x = cech.projection.obj_map[p];
                for d in 0..e.dims[x] {
                    pi_trips.push((cb.offsets[p] + d, bb.offsets[x] + d, Rat::one()));
                }
            }
        } else {
            for (si, sigma) in cech_nerve.strings(n).iter().enumerate() {
                let tau: Vec<usize> =
                    sigma.iter().map(|a| cech.projection.arr_map[*a]).collect();
                let ci = base_nerve.position(n, &tau);
                for d in 0..pe.dims[cb.fiber[si]] {
                    pi_trips.push((cb.offsets[si] + d, bb.offsets[ci] + d, Rat::one()));
                }
            }
        }
        pi_comps.push(SparseMat::from_triplets(cb.total, bb.total, pi_trips)?);

        let mut psi_trips = Vec::new();
        if n == 0 {
            for x in 0..base.n_objects() {
                for j in &sets_containing[x] {
                    let p = obj_of[*j][x].expect("set membership");
                    for d in 0..e.dims[x] {
                        psi_trips.push((
                            bb.offsets[x] + d,
                            cb.offsets[p] + d,
                            pu.rho[*j][x].clone(),
                        ));
                    }
                }
            }
        } else {
            for (ti, tau) in base_nerve.strings(n).iter().enumerate() {
                // Index choices: one set containing t(g₁), then one per
                // source object along the string.
                let mut choices = Vec::with_capacity(n + 1);
                choices.push(&sets_containing[base.tgt(tau[0])]);
                for g in tau {
                    choices.push(&sets_containing[base.src(*g)]);
                }
                let mut idx = vec![0usize; choices.len()];
                loop {
                    let picks: Vec<usize> =
                        idx.iter().zip(&choices).map(|(i, c)| c[*i]).collect();
                    let mut weight = pu.rho[picks[0]][base.tgt(tau[0])].clone();
                    for (m, g) in tau.iter().enumerate() {
                        weight *= pu.rho[picks[m + 1]][base.src(*g)].clone();
                    }
                    if !weight.is_zero() {
                        let mut sigma = Vec::with_capacity(n);
                        for (m, g) in tau.iter().enumerate() {
                            let t_obj = obj_of[picks[m]][base.tgt(*g)].expect("membership");
                            let s_obj =
                                obj_of[picks[m + 1]][base.src(*g)].expect("membership");
                            sigma.push(arrow_of[&(t_obj, *g, s_obj)]);
                        }
                        let si = cech_nerve.position(n, &sigma);
                        for d in 0..e.dims[bb.fiber[ti]] {
                            psi_trips.push((
                                bb.offsets[ti] + d,
                                cb.offsets[si] + d,
                                weight.clone(),
                            ));
                        }
                    }
                    let mut m = 0;
                    loop {
                        idx[m] += 1;
                        if idx[m] < choices[m].len() {
                            break;
                        }
                        idx[m] = 0;
                        m += 1;
                        if m == choices.len() {
                            break;
                        }
                    }
                    if m == choices.len() {
                        break;
                    }
                }
            }
        }
        psi_comps.push(SparseMat::from_triplets(bb.total, cb.total, psi_trips)?);
    }

    let pi_star = ChainMap::new(&base_cx, &cech_cx, pi_comps)?;
    let psi = ChainMap::new(&cech_cx, &base_cx, psi_comps)?;
    Ok(MvMaps { cech, coefficients: pe, base_complex: base_cx, cech_complex: cech_cx, pi_star, psi })
}

/// Two-sided dimension comparison, serialized as
/// `{"left_dims": […], "right_dims": […], "equal": bool}`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct MoritaReport {
    pub left_dims: Vec<usize>,
    pub right_dims: Vec<usize>,
    pub equal: bool,
}

/// Coefficients for a comparison: a genuine representation or a two-term
/// system on the base side.
pub enum Coefficients<'a> {
    Rep(&'a Representation),
    Ruth(&'a Ruth2),
}

fn compare_along(
    base: &FiniteGroupoid,
    pb: &PullbackResult,
    coeff: &Coefficients,
    k_max: usize,
) -> Result<MoritaReport, MoritaError> {
    let (left_dims, right_dims) = match coeff {
        Coefficients::Rep(e) => (
            rep_complex(base, e, k_max)?.cohomology_dims(k_max)?,
            rep_complex(&pb.groupoid, &pullback_rep(&pb.groupoid, &pb.projection, e), k_max)?
                .cohomology_dims(k_max)?,
        ),
        Coefficients::Ruth(r) => (
            ruth_complex(base, r, k_max)?.cohomology_dims(k_max)?,
            ruth_complex(
                &pb.groupoid,
                &pullback_ruth(&pb.groupoid, base, &pb.projection, r),
                k_max,
            )?
            .cohomology_dims(k_max)?,
        ),
    };
    let equal = left_dims == right_dims;
    Ok(MoritaReport { left_dims, right_dims, equal })
}

/// Compares cohomology over the base against the pullback groupoid along
/// a surjection `f : P → objects`, with coefficients pulled back along
/// the canonical projection.
pub fn pullback_compare(
    base: &FiniteGroupoid,
    coeff: &Coefficients,
    p_objects: &[String],
    f: &BTreeMap<String, String>,
    k_max: usize,
) -> Result<MoritaReport, MoritaError> {
    let pb = pullback_groupoid(base, p_objects, f)?;
    compare_along(base, &pb, coeff, k_max)
}

/// Compares cohomology over the base against the Čech groupoid of a
/// cover of the object set.
pub fn cech_compare(
    base: &FiniteGroupoid,
    coeff: &Coefficients,
    cover: &[Vec<String>],
    k_max: usize,
) -> Result<MoritaReport, MoritaError> {
    let pb = cech_groupoid(base, cover)?;
    compare_along(base, &pb, coeff, k_max)
}

/// Compares a group with representation `ρ` against the gauge groupoid of
/// a free action on `total` with the associated-bundle representation.
/// `rho` is indexed by group element in `names` order.
pub fn gauge_compare(
    names: &[String],
    table: &[Vec<usize>],
    total: &[String],
    act: &[Vec<usize>],
    rho: &[SparseMat],
    dim: usize,
    k_max: usize,
) -> Result<MoritaReport, MoritaError> {
    let group = group_groupoid(names, table)?;
    let mut act_mats = Vec::with_capacity(group.n_arrows());
    for a in 0..group.n_arrows() {
        let i = names
            .iter()
            .position(|n| n == group.arrow_id(a))
            .ok_or_else(|| MoritaError::MissingGroupArrow(group.arrow_id(a).into()))?;
        act_mats.push(rho[i].clone());
    }
    let left_rep = Representation { dims: vec![dim], act: act_mats };
    validate_rep(&group, &left_rep)?;
    let left_dims = rep_complex(&group, &left_rep, k_max)?.cohomology_dims(k_max)?;

    let gauge = gauge_groupoid(names, table, total, act)?;
    let assoc = associated_bundle_rep(&gauge, act, rho, dim)?;
    let right_dims =
        rep_complex(&gauge.groupoid, &assoc, k_max)?.cohomology_dims(k_max)?;
    let equal = left_dims == right_dims;
    Ok(MoritaReport { left_dims, right_dims, equal })
}
