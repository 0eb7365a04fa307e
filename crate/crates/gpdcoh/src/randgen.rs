//! Seeded random generators for test corpora: groupoids, representations,
//! equivariant maps, valid and deliberately broken two-term systems,
//! division-table corruptions, covers, and surjections. Everything is
//! driven by a ChaCha stream so a seed reproduces a corpus exactly.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::division::DivisionData;
use crate::groupoid::{
    action_groupoid, group_groupoid, pair_groupoid, unit_groupoid, FiniteGroupoid,
};
use crate::matrix::{self, SparseMat};
use crate::rat::{rat, rat_int, Rat};
use crate::rep::{
    cone_ruth, conjugate_rep, direct_sum_rep, gauge_twist, regular_rep, trivial_rep,
    validate_ruth, Representation, Ruth2,
};
use num::Zero;

pub struct RandGen {
    rng: ChaCha8Rng,
}

/// Input bundle for a gauge comparison: a group, a free action on a total
/// set, and a representation indexed by group element.
pub struct GaugeInput {
    pub names: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub total: Vec<String>,
    pub act: Vec<Vec<usize>>,
    pub rho: Vec<SparseMat>,
    pub dim: usize,
}

fn zmod_table(n: usize) -> (Vec<String>, Vec<Vec<usize>>) {
    let names = (0..n).map(|i| format!("z{i}")).collect();
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    (names, table)
}

impl RandGen {
    pub fn new(seed: u64) -> RandGen {
        RandGen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rational(&mut self) -> Rat {
        rat(self.rng.gen_range(-3..=3), self.rng.gen_range(1..=3))
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn nonzero_rational(&mut self) -> Rat {
        rat(self.rng.gen_range(1..=3), self.rng.gen_range(1..=3))
            * rat_int(if self.rng.gen_bool(0.5) { 1 } else { -1 })
    }

    pub fn vector(&mut self, n: usize) -> Vec<Rat> {
        (0..n).map(|_| self.rational()).collect()
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> SparseMat {
        let dense: Vec<Vec<Rat>> =
            (0..rows).map(|_| self.vector(cols)).collect();
        SparseMat::from_dense(rows, cols, &dense).expect("shape by construction")
    }

    pub fn invertible(&mut self, n: usize) -> SparseMat {
        if n == 0 {
            return SparseMat::identity(0);
        }
        loop {
            let m = self.matrix(n, n);
            if matrix::inverse(&m).is_some() {
                return m;
            }
        }
    }

    /// A random groupoid with at most 30 arrows, drawn from groups,
    /// unit and pair groupoids, and action groupoids of cyclic groups.
    pub fn groupoid(&mut self) -> FiniteGroupoid {
        match self.rng.gen_range(0..4) {
            0 => {
                let n = self.rng.gen_range(1..=8);
                let (names, table) = zmod_table(n);
                group_groupoid(&names, &table).expect("group table")
            }
            1 => {
                let k = self.rng.gen_range(1..=5);
                let objects: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
                unit_groupoid(&objects).expect("distinct objects")
            }
            2 => {
                let k = self.rng.gen_range(2..=5);
                let objects: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
                pair_groupoid(&objects).expect("distinct objects")
            }
            _ => {
                let n = self.rng.gen_range(2..=4);
                let (names, table) = zmod_table(n);
                let (pts, act) = self.cyclic_action(n);
                action_groupoid(&names, &table, &pts, &act).expect("action table")
            }
        }
    }

    /// Like [`RandGen::groupoid`], retried until the arrow count is small
    /// enough for high-degree nerve work.
    pub fn small_groupoid(&mut self, max_arrows: usize) -> FiniteGroupoid {
        loop {
            let g = self.groupoid();
            if g.n_arrows() <= max_arrows {
                return g;
            }
        }
    }

    /// Like [`RandGen::small_groupoid`], additionally retried until some
    /// arrow is not a unit. Needed by [`RandGen::invalid_ruth`]: over a
    /// unit groupoid every normalized two-term structure satisfies the
    /// equations, so no perturbation can invalidate one.
    pub fn small_nonunit_groupoid(&mut self, max_arrows: usize) -> FiniteGroupoid {
        loop {
            let g = self.small_groupoid(max_arrows);
            if (0..g.n_arrows()).any(|a| !g.is_unit(a)) {
                return g;
            }
        }
    }

    /// Points and a `ℤ/n` action: a disjoint union of free `n`-cycles and
    /// fixed points, applied `i` times for element `i`.
    fn cyclic_action(&mut self, n: usize) -> (Vec<String>, Vec<Vec<usize>>) {
        let cycles = self.rng.gen_range(0..=1);
        let fixed = self.rng.gen_range(if cycles == 0 { 1 } else { 0 }..=2);
        let p = cycles * n + fixed;
        let pts: Vec<String> = (0..p).map(|i| format!("p{i}")).collect();
        let step: Vec<usize> = (0..p)
            .map(|i| if i < cycles * n { (i / n) * n + (i + 1) % n } else { i })
            .collect();
        let mut act = vec![(0..p).collect::<Vec<usize>>()];
        for _ in 1..n {
            let prev = act.last().unwrap();
            act.push(prev.iter().map(|i| step[*i]).collect());
        }
        (pts, act)
    }

    /// A random genuine representation: a conjugated direct sum drawn
    /// from trivial and left-regular pieces.
    pub fn rep(&mut self, gpd: &FiniteGroupoid) -> Representation {
        let base = match self.rng.gen_range(0..3) {
            0 => trivial_rep(gpd, self.rng.gen_range(1..=2)),
            1 => regular_rep(gpd),
            _ => {
                let a = trivial_rep(gpd, 1);
                let b = regular_rep(gpd);
                direct_sum_rep(gpd, &a, &b).expect("matching objects")
            }
        };
        let q: Vec<SparseMat> =
            base.dims.iter().map(|d| self.invertible(*d)).collect();
        conjugate_rep(gpd, &base, &q).expect("q invertible")
    }

    /// Like [`RandGen::rep`], retried until every fiber dimension stays
    /// at or below `d_max`.
    pub fn rep_bounded(&mut self, gpd: &FiniteGroupoid, d_max: usize) -> Representation {
        loop {
            let e = self.rep(gpd);
            if e.dims.iter().all(|d| *d <= d_max) {
                return e;
            }
        }
    }

    /// Representations `a`, `b` of bounded dimension together with an
    /// equivariant objectwise map `ρ : a → b`, built by conjugating a
    /// constant map between trivial representations.
    pub fn equivariant_pair(
        &mut self,
        gpd: &FiniteGroupoid,
    ) -> (Representation, Representation, Vec<SparseMat>) {
        self.equivariant_pair_sized(gpd, 2)
    }

    /// Same, with both fiber dimensions drawn from `1..=d_max`.
    pub fn equivariant_pair_sized(
        &mut self,
        gpd: &FiniteGroupoid,
        d_max: usize,
    ) -> (Representation, Representation, Vec<SparseMat>) {
        let d0 = self.rng.gen_range(1..=d_max);
        let d1 = self.rng.gen_range(1..=d_max);
        let core = match self.rng.gen_range(0..3) {
            0 => SparseMat::zero(d1, d0),
            1 => {
                let mut m = SparseMat::zero(d1, d0);
                for i in 0..d0.min(d1) {
                    m.set(i, i, self.rational());
                }
                m
            }
            _ => self.matrix(d1, d0),
        };
        let p: Vec<SparseMat> =
            (0..gpd.n_objects()).map(|_| self.invertible(d0)).collect();
        let q: Vec<SparseMat> =
            (0..gpd.n_objects()).map(|_| self.invertible(d1)).collect();
        let a = conjugate_rep(gpd, &trivial_rep(gpd, d0), &p).expect("p invertible");
        let b = conjugate_rep(gpd, &trivial_rep(gpd, d1), &q).expect("q invertible");
        let rho: Vec<SparseMat> = (0..gpd.n_objects())
            .map(|x| {
                let pinv = matrix::inverse(&p[x]).expect("p invertible");
                q[x].mul(&core).and_then(|m| m.mul(&pinv)).expect("shapes")
            })
            .collect();
        (a, b, rho)
    }

    /// A valid two-term system: the cone of a random equivariant map,
    /// gauge-twisted by random `η` (zero at units).
    pub fn valid_ruth(&mut self, gpd: &FiniteGroupoid) -> Ruth2 {
        self.valid_ruth_sized(gpd, 2)
    }

    /// Same, with fiber dimensions drawn from `1..=d_max`.
    pub fn valid_ruth_sized(&mut self, gpd: &FiniteGroupoid, d_max: usize) -> Ruth2 {
        let (a, b, rho) = self.equivariant_pair_sized(gpd, d_max);
        let cone = cone_ruth(gpd, &a, &b, &rho).expect("rho equivariant");
        let eta: Vec<SparseMat> = (0..gpd.n_arrows())
            .map(|g| {
                let (r, c) = (cone.dims0[gpd.tgt(g)], cone.dims1[gpd.src(g)]);
                if gpd.is_unit(g) {
                    SparseMat::zero(r, c)
                } else {
                    self.matrix(r, c)
                }
            })
            .collect();
        let r = gauge_twist(gpd, &cone, &eta).expect("eta shaped");
        debug_assert!(validate_ruth(gpd, &r).is_ok());
        r
    }

    /// Perturbs one non-unit entry of a valid system until validation
    /// actually fails, so callers get a certified-invalid instance.
    ///
    /// The groupoid must have at least one non-unit arrow (use
    /// [`RandGen::small_nonunit_groupoid`]); otherwise every normalized
    /// structure is valid and no perturbation site exists.
    pub fn invalid_ruth(&mut self, gpd: &FiniteGroupoid) -> Ruth2 {
        let base = self.valid_ruth(gpd);
        for _ in 0..200 {
            let mut r = base.clone();
            if self.perturb_site(gpd, &mut r) && validate_ruth(gpd, &r).is_err() {
                return r;
            }
        }
        panic!("no invalidating perturbation found; does the groupoid have a non-unit arrow?");
    }

    fn perturb_site(&mut self, gpd: &FiniteGroupoid, r: &mut Ruth2) -> bool {
        let delta = self.nonzero_rational();
        match self.rng.gen_range(0..4) {
            0 => {
                let x = self.rng.gen_range(0..gpd.n_objects());
                let m = &mut r.partial[x];
                if m.rows() == 0 || m.cols() == 0 {
                    return false;
                }
                let (i, j) =
                    (self.rng.gen_range(0..m.rows()), self.rng.gen_range(0..m.cols()));
                let v = m.get(i, j) + delta;
                m.set(i, j, v);
                true
            }
            1 | 2 => {
                let g = self.rng.gen_range(0..gpd.n_arrows());
                if gpd.is_unit(g) {
                    return false;
                }
                let m = if self.rng.gen_bool(0.5) {
                    &mut r.lambda0[g]
                } else {
                    &mut r.lambda1[g]
                };
                if m.rows() == 0 || m.cols() == 0 {
                    return false;
                }
                let (i, j) =
                    (self.rng.gen_range(0..m.rows()), self.rng.gen_range(0..m.cols()));
                let v = m.get(i, j) + delta;
                m.set(i, j, v);
                true
            }
            _ => {
                let g = self.rng.gen_range(0..gpd.n_arrows());
                let h = self.rng.gen_range(0..gpd.n_arrows());
                if gpd.is_unit(g) || gpd.is_unit(h) || gpd.compose(g, h).is_none() {
                    return false;
                }
                let (rows, cols) =
                    (r.dims0[gpd.tgt(g)], r.dims1[gpd.src(h)]);
                if rows == 0 || cols == 0 {
                    return false;
                }
                let mut m = r.curvature(gpd, g, h);
                let (i, j) =
                    (self.rng.gen_range(0..rows), self.rng.gen_range(0..cols));
                let v = m.get(i, j) + delta;
                m.set(i, j, v);
                r.kappa.insert((g, h), m);
                true
            }
        }
    }

    /// Changes a single entry of a division table: a source label, an
    /// operand, or a result, possibly to a fresh unknown name.
    pub fn corrupt_division(&mut self, d: &DivisionData) -> DivisionData {
        let mut out = d.clone();
        loop {
            match self.rng.gen_range(0..3) {
                0 => {
                    let keys: Vec<String> = out.s.keys().cloned().collect();
                    let key = keys[self.rng.gen_range(0..keys.len())].clone();
                    let mut labels: Vec<String> = out.s.values().cloned().collect();
                    labels.push("!obj".into());
                    let pick = labels[self.rng.gen_range(0..labels.len())].clone();
                    if out.s[&key] != pick {
                        out.s.insert(key, pick);
                        return out;
                    }
                }
                slot => {
                    if out.mbar.is_empty() {
                        continue;
                    }
                    let i = self.rng.gen_range(0..out.mbar.len());
                    let j = if slot == 1 { 2 } else { self.rng.gen_range(0..2) };
                    let mut arrows = out.arrows.clone();
                    arrows.push("!arr".into());
                    let pick = arrows[self.rng.gen_range(0..arrows.len())].clone();
                    if out.mbar[i][j] != pick {
                        out.mbar[i][j] = pick;
                        return out;
                    }
                }
            }
        }
    }

    /// A cover of the object set by one to three possibly overlapping
    /// nonempty subsets.
    pub fn cover(&mut self, gpd: &FiniteGroupoid) -> Vec<Vec<String>> {
        self.cover_sized(gpd, 3)
    }

    /// A cover with at most `max_sets` subsets.
    pub fn cover_sized(
        &mut self,
        gpd: &FiniteGroupoid,
        max_sets: usize,
    ) -> Vec<Vec<String>> {
        let n = gpd.n_objects();
        let m = self.rng.gen_range(1..=max_sets.min(n.max(1)));
        let mut member = vec![vec![false; n]; m];
        for x in 0..n {
            member[self.rng.gen_range(0..m)][x] = true;
        }
        for row in member.iter_mut() {
            for x in 0..n {
                if !row[x] && self.rng.gen_bool(0.3) {
                    row[x] = true;
                }
            }
        }
        member
            .iter()
            .filter(|row| row.iter().any(|b| *b))
            .map(|row| {
                (0..n)
                    .filter(|x| row[*x])
                    .map(|x| gpd.object_id(x).to_string())
                    .collect()
            })
            .collect()
    }

    /// A surjection onto the object set: one or two named points over
    /// each object.
    pub fn surjection(
        &mut self,
        gpd: &FiniteGroupoid,
    ) -> (Vec<String>, BTreeMap<String, String>) {
        let mut points = Vec::new();
        let mut f = BTreeMap::new();
        for x in 0..gpd.n_objects() {
            for k in 0..self.rng.gen_range(1..=2) {
                let name = format!("q{x}_{k}");
                f.insert(name.clone(), gpd.object_id(x).to_string());
                points.push(name);
            }
        }
        (points, f)
    }

    /// A gauge-comparison input: `ℤ/n`, a free action on one or two
    /// orbits, and a conjugated representation (a rational character or
    /// the regular representation).
    pub fn gauge_input(&mut self) -> GaugeInput {
        let n = self.rng.gen_range(2..=4);
        let (names, table) = zmod_table(n);
        let orbits = if n >= 4 { 1 } else { self.rng.gen_range(1..=2) };
        let mut total = Vec::new();
        for o in 0..orbits {
            for k in 0..n {
                total.push(format!("t{o}_{k}"));
            }
        }
        let act: Vec<Vec<usize>> = (0..n)
            .map(|g| {
                (0..orbits * n)
                    .map(|i| (i / n) * n + (g + i % n) % n)
                    .collect()
            })
            .collect();
        let base: Vec<SparseMat> = match self.rng.gen_range(0..3) {
            0 => (0..n).map(|_| SparseMat::identity(1)).collect(),
            1 if n % 2 == 0 => (0..n)
                .map(|i| {
                    SparseMat::from_dense(
                        1,
                        1,
                        &[vec![rat_int(if i % 2 == 0 { 1 } else { -1 })]],
                    )
                    .unwrap()
                })
                .collect(),
            _ => (0..n)
                .map(|g| {
                    SparseMat::from_triplets(
                        n,
                        n,
                        (0..n).map(|j| ((g + j) % n, j, num::One::one())),
                    )
                    .unwrap()
                })
                .collect(),
        };
        let dim = base[0].rows();
        let m = self.invertible(dim);
        let minv = matrix::inverse(&m).expect("invertible");
        let rho = base
            .iter()
            .map(|b| m.mul(b).and_then(|x| x.mul(&minv)).expect("shapes"))
            .collect();
        GaugeInput { names, table, total, act, rho, dim }
    }

    /// A random element of `ker d`, nonzero whenever the kernel is.
    pub fn cocycle(&mut self, d: &SparseMat) -> Vec<Rat> {
        let basis = matrix::kernel_basis(d);
        let mut out = vec![Rat::zero(); d.cols()];
        if basis.is_empty() {
            return out;
        }
        loop {
            for v in &basis {
                let c = self.rational();
                if c.is_zero() {
                    continue;
                }
                for (slot, x) in out.iter_mut().zip(v) {
                    *slot += &c * x;
                }
            }
            if !out.iter().all(|x| x.is_zero()) {
                return out;
            }
        }
    }
}
