//! Finite groupoids: validated construction, nerves, morphisms, and the
//! standard constructors (groups, pair/unit groupoids, actions, pullbacks,
//! covers, gauge groupoids).
//!
//! A groupoid is stored fully materialized: objects and arrows in sorted id
//! order, a total composition table over composable pairs, plus unit and
//! inverse tables. [`FiniteGroupoid::from_data`] checks every axiom
//! exhaustively and reports the first violation with named witnesses; units
//! and inverses may be omitted from the input, in which case they are
//! derived (and are cross-checked when present). All orderings are
//! deterministic, so nerve bases and everything downstream are reproducible.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error)]
pub enum GroupoidError {
    #[error("duplicate object id `{0}`")]
    DuplicateObject(String),
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{0}` references unknown object `{1}`")]
    UnknownObject(String, String),
    #[error("reference to unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("compose declared for non-composable pair (`{0}`, `{1}`)")]
    NotComposable(String, String),
    #[error("duplicate compose entry for (`{0}`, `{1}`)")]
    DuplicateCompose(String, String),
    #[error("missing compose entry for composable pair (`{0}`, `{1}`)")]
    MissingCompose(String, String),
    #[error("compose(`{0}`, `{1}`) = `{2}` violates s(g∘h) = s(h), t(g∘h) = t(g)")]
    ComposeEndpoints(String, String, String),
    #[error("associativity fails on (`{0}`, `{1}`, `{2}`)")]
    Associativity(String, String, String),
    #[error("object `{0}` admits no unit arrow")]
    MissingUnit(String),
    #[error("declared unit `{1}` of object `{0}` fails the unit laws")]
    BadUnit(String, String),
    #[error("arrow `{0}` admits no inverse")]
    MissingInverse(String),
    #[error("declared inverse `{1}` of arrow `{0}` fails the inverse laws")]
    BadInverse(String, String),
    #[error("id `{0}` contains reserved separator `{1}`")]
    ReservedSeparator(String, char),
    #[error("map is not defined on all of `{0}`")]
    PartialMap(String),
    #[error("group action is not an action: {0}")]
    NotAnAction(String),
    #[error("group action is not free (stabilizer of `{0}` is nontrivial)")]
    NotFree(String),
    #[error("cover element `{0}` is not an object")]
    CoverNotSubset(String),
    #[error("cover misses object `{0}`")]
    CoverMisses(String),
    #[error("`{0}` is not surjective: object `{1}` has empty fiber")]
    NotSurjective(String, String),
}

/// Wire form of an arrow.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrowData {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// Wire form of a groupoid. `units` and `inverses` are optional; when
/// present they are cross-checked against the derived ones.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupoidData {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowData>,
    /// Entries `[g, h, k]` meaning `g∘h = k` (apply `h` first).
    pub compose: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverses: Option<BTreeMap<String, String>>,
}

/// A validated finite groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    compose: Vec<Vec<Option<usize>>>,
    unit: Vec<usize>,
    inv: Vec<usize>,
    by_tgt: Vec<Vec<usize>>,
    obj_index: BTreeMap<String, usize>,
    arr_index: BTreeMap<String, usize>,
}

impl FiniteGroupoid {
    /// Validates raw data against every groupoid axiom.
    pub fn from_data(data: &GroupoidData) -> Result<Self, GroupoidError> {
        let mut objects = data.objects.clone();
        objects.sort();
        for w in objects.windows(2) {
            if w[0] == w[1] {
                return Err(GroupoidError::DuplicateObject(w[0].clone()));
            }
        }
        let obj_index: BTreeMap<String, usize> =
            objects.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();

        let mut arrow_list = data.arrows.clone();
        arrow_list.sort_by(|a, b| a.id.cmp(&b.id));
        for w in arrow_list.windows(2) {
            if w[0].id == w[1].id {
                return Err(GroupoidError::DuplicateArrow(w[0].id.clone()));
            }
        }
        let arrows: Vec<String> = arrow_list.iter().map(|a| a.id.clone()).collect();
        let arr_index: BTreeMap<String, usize> =
            arrows.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let n = arrows.len();

        let mut src = Vec::with_capacity(n);
        let mut tgt = Vec::with_capacity(n);
        for a in &arrow_list {
            let s = *obj_index
                .get(&a.src)
                .ok_or_else(|| GroupoidError::UnknownObject(a.id.clone(), a.src.clone()))?;
            let t = *obj_index
                .get(&a.tgt)
                .ok_or_else(|| GroupoidError::UnknownObject(a.id.clone(), a.tgt.clone()))?;
            src.push(s);
            tgt.push(t);
        }

        let mut compose: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for [g, h, k] in &data.compose {
            let gi = *arr_index.get(g).ok_or_else(|| GroupoidError::UnknownArrow(g.clone()))?;
            let hi = *arr_index.get(h).ok_or_else(|| GroupoidError::UnknownArrow(h.clone()))?;
            let ki = *arr_index.get(k).ok_or_else(|| GroupoidError::UnknownArrow(k.clone()))?;
            if src[gi] != tgt[hi] {
                return Err(GroupoidError::NotComposable(g.clone(), h.clone()));
            }
            if compose[gi][hi].is_some() {
                return Err(GroupoidError::DuplicateCompose(g.clone(), h.clone()));
            }
            if src[ki] != src[hi] || tgt[ki] != tgt[gi] {
                return Err(GroupoidError::ComposeEndpoints(g.clone(), h.clone(), k.clone()));
            }
            compose[gi][hi] = Some(ki);
        }
        for g in 0..n {
            for h in 0..n {
                if src[g] == tgt[h] && compose[g][h].is_none() {
                    return Err(GroupoidError::MissingCompose(
                        arrows[g].clone(),
                        arrows[h].clone(),
                    ));
                }
            }
        }

        // Associativity over all composable triples.
        for g in 0..n {
            for h in 0..n {
                let Some(gh) = compose[g][h] else { continue };
                for k in 0..n {
                    if tgt[k] != src[h] {
                        continue;
                    }
                    let hk = compose[h][k].expect("totality verified above");
                    if compose[gh][k] != compose[g][hk] {
                        return Err(GroupoidError::Associativity(
                            arrows[g].clone(),
                            arrows[h].clone(),
                            arrows[k].clone(),
                        ));
                    }
                }
            }
        }

        // Units: derive per object, cross-check declarations.
        let mut unit = Vec::with_capacity(objects.len());
        for (x, xid) in objects.iter().enumerate() {
            let mut found = None;
            'cands: for e in 0..n {
                if src[e] != x || tgt[e] != x {
                    continue;
                }
                for g in 0..n {
                    if tgt[g] == x && compose[e][g] != Some(g) {
                        continue 'cands;
                    }
                    if src[g] == x && compose[g][e] != Some(g) {
                        continue 'cands;
                    }
                }
                found = Some(e);
                break;
            }
            let e = found.ok_or_else(|| GroupoidError::MissingUnit(xid.clone()))?;
            if let Some(decl) = &data.units {
                match decl.get(xid) {
                    Some(d) if arr_index.get(d) == Some(&e) => {}
                    Some(d) => return Err(GroupoidError::BadUnit(xid.clone(), d.clone())),
                    None => return Err(GroupoidError::PartialMap(format!("units at `{xid}`"))),
                }
            }
            unit.push(e);
        }

        // Inverses: derive per arrow, cross-check declarations.
        let mut inv = Vec::with_capacity(n);
        for g in 0..n {
            let mut found = None;
            for h in 0..n {
                if src[h] == tgt[g]
                    && tgt[h] == src[g]
                    && compose[g][h] == Some(unit[tgt[g]])
                    && compose[h][g] == Some(unit[src[g]])
                {
                    found = Some(h);
                    break;
                }
            }
            let h = found.ok_or_else(|| GroupoidError::MissingInverse(arrows[g].clone()))?;
            if let Some(decl) = &data.inverses {
                match decl.get(&arrows[g]) {
                    Some(d) if arr_index.get(d) == Some(&h) => {}
                    Some(d) => {
                        return Err(GroupoidError::BadInverse(arrows[g].clone(), d.clone()))
                    }
                    None => {
                        return Err(GroupoidError::PartialMap(format!(
                            "inverses at `{}`",
                            arrows[g]
                        )))
                    }
                }
            }
            inv.push(h);
        }

        let mut by_tgt = vec![Vec::new(); objects.len()];
        for g in 0..n {
            by_tgt[tgt[g]].push(g);
        }

        Ok(FiniteGroupoid {
            objects,
            arrows,
            src,
            tgt,
            compose,
            unit,
            inv,
            by_tgt,
            obj_index,
            arr_index,
        })
    }

    /// Wire form with units and inverses filled in.
    pub fn to_data(&self) -> GroupoidData {
        let arrows = (0..self.n_arrows())
            .map(|g| ArrowData {
                id: self.arrows[g].clone(),
                src: self.objects[self.src[g]].clone(),
                tgt: self.objects[self.tgt[g]].clone(),
            })
            .collect();
        let mut compose = Vec::new();
        for g in 0..self.n_arrows() {
            for h in 0..self.n_arrows() {
                if let Some(k) = self.compose[g][h] {
                    compose.push([
                        self.arrows[g].clone(),
                        self.arrows[h].clone(),
                        self.arrows[k].clone(),
                    ]);
                }
            }
        }
        let units = self
            .objects
            .iter()
            .enumerate()
            .map(|(x, id)| (id.clone(), self.arrows[self.unit[x]].clone()))
            .collect();
        let inverses = (0..self.n_arrows())
            .map(|g| (self.arrows[g].clone(), self.arrows[self.inv[g]].clone()))
            .collect();
        GroupoidData {
            objects: self.objects.clone(),
            arrows,
            compose,
            units: Some(units),
            inverses: Some(inverses),
        }
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_id(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn arrow_id(&self, g: usize) -> &str {
        &self.arrows[g]
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.obj_index.get(id).copied()
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arr_index.get(id).copied()
    }

    pub fn src(&self, g: usize) -> usize {
        self.src[g]
    }

    pub fn tgt(&self, g: usize) -> usize {
        self.tgt[g]
    }

    /// `g∘h` (apply `h` first), defined when `src(g) = tgt(h)`.
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.compose[g][h]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.unit[self.tgt[g]] == g
    }

    /// Arrows `h` with `tgt(h) = x`, ascending.
    pub fn arrows_into(&self, x: usize) -> &[usize] {
        &self.by_tgt[x]
    }

    /// Composable strings `(g_1, …, g_k)` with `src(g_i) = tgt(g_{i+1})`,
    /// in lexicographic order of arrow indices. For `k = 0` the result has
    /// one empty string per object, aligned with object order.
    pub fn nerve(&self, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![Vec::new(); self.n_objects()];
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        self.nerve_rec(k, &mut cur, &mut out);
        out
    }

    fn nerve_rec(&self, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        match cur.last().copied() {
            None => {
                for g in 0..self.n_arrows() {
                    cur.push(g);
                    self.nerve_rec(k, cur, out);
                    cur.pop();
                }
            }
            Some(last) => {
                for &g in &self.by_tgt[self.src[last]] {
                    cur.push(g);
                    self.nerve_rec(k, cur, out);
                    cur.pop();
                }
            }
        }
    }
}

fn check_separator(ids: &[String], sep: char) -> Result<(), GroupoidError> {
    for id in ids {
        if id.contains(sep) {
            return Err(GroupoidError::ReservedSeparator(id.clone(), sep));
        }
    }
    Ok(())
}

/// Groupoid with one object `*` from a group multiplication table
/// (`table[g][h] = g∘h`).
pub fn group_groupoid(
    names: &[String],
    table: &[Vec<usize>],
) -> Result<FiniteGroupoid, GroupoidError> {
    let arrows = names
        .iter()
        .map(|id| ArrowData { id: id.clone(), src: "*".into(), tgt: "*".into() })
        .collect();
    let mut compose = Vec::new();
    for (g, row) in table.iter().enumerate() {
        for (h, k) in row.iter().enumerate() {
            compose.push([names[g].clone(), names[h].clone(), names[*k].clone()]);
        }
    }
    FiniteGroupoid::from_data(&GroupoidData {
        objects: vec!["*".into()],
        arrows,
        compose,
        units: None,
        inverses: None,
    })
}

/// Groupoid with only unit arrows (`1_x` at each object).
pub fn unit_groupoid(objects: &[String]) -> Result<FiniteGroupoid, GroupoidError> {
    let arrows: Vec<ArrowData> = objects
        .iter()
        .map(|x| ArrowData { id: format!("1_{x}"), src: x.clone(), tgt: x.clone() })
        .collect();
    let compose = arrows
        .iter()
        .map(|a| [a.id.clone(), a.id.clone(), a.id.clone()])
        .collect();
    FiniteGroupoid::from_data(&GroupoidData {
        objects: objects.to_vec(),
        arrows,
        compose,
        units: None,
        inverses: None,
    })
}

/// Pair groupoid: one arrow `y|x : x → y` for every ordered pair.
pub fn pair_groupoid(objects: &[String]) -> Result<FiniteGroupoid, GroupoidError> {
    check_separator(objects, '|')?;
    let mut arrows = Vec::new();
    let mut compose = Vec::new();
    for y in objects {
        for x in objects {
            arrows.push(ArrowData { id: format!("{y}|{x}"), src: x.clone(), tgt: y.clone() });
        }
    }
    for z in objects {
        for y in objects {
            for x in objects {
                compose.push([format!("{z}|{y}"), format!("{y}|{x}"), format!("{z}|{x}")]);
            }
        }
    }
    FiniteGroupoid::from_data(&GroupoidData {
        objects: objects.to_vec(),
        arrows,
        compose,
        units: None,
        inverses: None,
    })
}

/// Action groupoid `Γ ⋉ X` for a left action of a group on a finite set:
/// arrows `γ@x : x → γ·x`, composed by `(γ'@(γ·x)) ∘ (γ@x) = (γ'γ)@x`.
///
/// `act[γ][x]` gives `γ·x`; the action axioms are verified.
pub fn action_groupoid(
    names: &[String],
    table: &[Vec<usize>],
    points: &[String],
    act: &[Vec<usize>],
) -> Result<FiniteGroupoid, GroupoidError> {
    check_separator(names, '@')?;
    check_separator(points, '@')?;
    verify_action(names, table, points, act)?;
    let mut arrows = Vec::new();
    let mut compose = Vec::new();
    for (g, gn) in names.iter().enumerate() {
        for (x, xn) in points.iter().enumerate() {
            arrows.push(ArrowData {
                id: format!("{gn}@{xn}"),
                src: xn.clone(),
                tgt: points[act[g][x]].clone(),
            });
        }
    }
    for (g2, g2n) in names.iter().enumerate() {
        for (g1, g1n) in names.iter().enumerate() {
            for (x, xn) in points.iter().enumerate() {
                // (g2 @ g1·x) ∘ (g1 @ x) = (g2 g1) @ x
                let mid = points[act[g1][x]].clone();
                compose.push([
                    format!("{g2n}@{mid}"),
                    format!("{g1n}@{xn}"),
                    format!("{}@{xn}", names[table[g2][g1]]),
                ]);
            }
        }
    }
    FiniteGroupoid::from_data(&GroupoidData {
        objects: points.to_vec(),
        arrows,
        compose,
        units: None,
        inverses: None,
    })
}

fn group_identity(names: &[String], table: &[Vec<usize>]) -> Result<usize, GroupoidError> {
    for e in 0..names.len() {
        if (0..names.len()).all(|g| table[e][g] == g && table[g][e] == g) {
            return Ok(e);
        }
    }
    Err(GroupoidError::NotAnAction("group table has no identity".into()))
}

fn verify_action(
    names: &[String],
    table: &[Vec<usize>],
    points: &[String],
    act: &[Vec<usize>],
) -> Result<(), GroupoidError> {
    if act.len() != names.len() || act.iter().any(|row| row.len() != points.len()) {
        return Err(GroupoidError::PartialMap("action table".into()));
    }
    let e = group_identity(names, table)?;
    for x in 0..points.len() {
        if act[e][x] != x {
            return Err(GroupoidError::NotAnAction(format!(
                "identity moves `{}`",
                points[x]
            )));
        }
    }
    for g in 0..names.len() {
        for h in 0..names.len() {
            for x in 0..points.len() {
                if act[g][act[h][x]] != act[table[g][h]][x] {
                    return Err(GroupoidError::NotAnAction(format!(
                        "compatibility fails at ({}, {}, {})",
                        names[g], names[h], points[x]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Arrow-level map between groupoids together with its object-level map.
#[derive(Clone, Debug)]
pub struct GroupoidMorphism {
    pub obj_map: Vec<usize>,
    pub arr_map: Vec<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum MorphismViolation {
    #[error("source of image disagrees at arrow `{0}`")]
    Source(String),
    #[error("target of image disagrees at arrow `{0}`")]
    Target(String),
    #[error("unit at object `{0}` is not preserved")]
    Unit(String),
    #[error("composition is not preserved at (`{0}`, `{1}`)")]
    Composition(String, String),
    #[error("inverse is not preserved at arrow `{0}`")]
    Inverse(String),
    #[error("division is not preserved at (`{0}`, `{1}`)")]
    Division(String, String),
    #[error("images of arrows out of object `{0}` have inconsistent sources")]
    InconsistentObjectImage(String),
    #[error("map has wrong length")]
    Length,
}

/// Functor criterion: endpoints, units, composition, and inverses are all
/// preserved.
pub fn is_morphism_classical(
    src_g: &FiniteGroupoid,
    dst_g: &FiniteGroupoid,
    m: &GroupoidMorphism,
) -> Result<(), MorphismViolation> {
    if m.obj_map.len() != src_g.n_objects() || m.arr_map.len() != src_g.n_arrows() {
        return Err(MorphismViolation::Length);
    }
    for g in 0..src_g.n_arrows() {
        let fg = m.arr_map[g];
        if dst_g.src(fg) != m.obj_map[src_g.src(g)] {
            return Err(MorphismViolation::Source(src_g.arrow_id(g).into()));
        }
        if dst_g.tgt(fg) != m.obj_map[src_g.tgt(g)] {
            return Err(MorphismViolation::Target(src_g.arrow_id(g).into()));
        }
    }
    for x in 0..src_g.n_objects() {
        if m.arr_map[src_g.unit(x)] != dst_g.unit(m.obj_map[x]) {
            return Err(MorphismViolation::Unit(src_g.object_id(x).into()));
        }
    }
    for g in 0..src_g.n_arrows() {
        for h in 0..src_g.n_arrows() {
            if let Some(gh) = src_g.compose(g, h) {
                if dst_g.compose(m.arr_map[g], m.arr_map[h]) != Some(m.arr_map[gh]) {
                    return Err(MorphismViolation::Composition(
                        src_g.arrow_id(g).into(),
                        src_g.arrow_id(h).into(),
                    ));
                }
            }
        }
    }
    for g in 0..src_g.n_arrows() {
        if m.arr_map[src_g.inv(g)] != dst_g.inv(m.arr_map[g]) {
            return Err(MorphismViolation::Inverse(src_g.arrow_id(g).into()));
        }
    }
    Ok(())
}

/// Division criterion: an arrow-level map is a morphism iff it intertwines
/// `m̄(g, h) = g∘h⁻¹` on pairs with equal source and descends to objects
/// (all arrows out of one object map to arrows out of one object). Returns
/// the induced object map.
pub fn is_morphism_division(
    src_g: &FiniteGroupoid,
    dst_g: &FiniteGroupoid,
    arr_map: &[usize],
) -> Result<Vec<usize>, MorphismViolation> {
    if arr_map.len() != src_g.n_arrows() {
        return Err(MorphismViolation::Length);
    }
    for g in 0..src_g.n_arrows() {
        for h in 0..src_g.n_arrows() {
            if src_g.src(g) != src_g.src(h) {
                continue;
            }
            let mb = src_g.compose(g, src_g.inv(h)).expect("equal sources compose");
            if dst_g.src(arr_map[g]) != dst_g.src(arr_map[h]) {
                return Err(MorphismViolation::InconsistentObjectImage(
                    src_g.object_id(src_g.src(g)).into(),
                ));
            }
            let fmb = dst_g
                .compose(arr_map[g], dst_g.inv(arr_map[h]))
                .expect("checked equal sources");
            if fmb != arr_map[mb] {
                return Err(MorphismViolation::Division(
                    src_g.arrow_id(g).into(),
                    src_g.arrow_id(h).into(),
                ));
            }
        }
    }
    // Objects: x ↦ src of the image of the unit (every object has its unit
    // among the arrows out of it, and consistency was checked above).
    let obj_map = (0..src_g.n_objects())
        .map(|x| dst_g.src(arr_map[src_g.unit(x)]))
        .collect();
    Ok(obj_map)
}

/// Pullback of a groupoid along a surjection `f : P → objects`.
pub struct PullbackResult {
    pub groupoid: FiniteGroupoid,
    /// Projection onto the base (arrow `(p, g, q) ↦ g`).
    pub projection: GroupoidMorphism,
}

/// Pullback groupoid along `f`: objects `P`, arrows `p|g|q : q → p` for
/// `f(p) = t(g)`, `f(q) = s(g)`, with `(p|g₁|q) ∘ (q|g₂|r) = p|g₁∘g₂|r`.
pub fn pullback_groupoid(
    base: &FiniteGroupoid,
    p_objects: &[String],
    f: &BTreeMap<String, String>,
) -> Result<PullbackResult, GroupoidError> {
    check_separator(p_objects, '|')?;
    let mut fiber: Vec<usize> = Vec::with_capacity(p_objects.len());
    for p in p_objects {
        let x = f
            .get(p)
            .and_then(|id| base.object_index(id))
            .ok_or_else(|| GroupoidError::PartialMap(format!("surjection at `{p}`")))?;
        fiber.push(x);
    }
    for x in 0..base.n_objects() {
        if !fiber.contains(&x) {
            return Err(GroupoidError::NotSurjective(
                "surjection".into(),
                base.object_id(x).into(),
            ));
        }
    }
    let sorted: Vec<String> = {
        let mut v = p_objects.to_vec();
        v.sort();
        v
    };
    let arrow_name =
        |p: &str, g: usize, q: &str| format!("{p}|{}|{q}", base.arrow_id(g));
    let mut arrows = Vec::new();
    let mut compose = Vec::new();
    // (p, g, q) per constructed arrow; id parsing is unreliable when base
    // arrow ids themselves contain the separator.
    let mut decode: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
    for (pi, p) in p_objects.iter().enumerate() {
        for g in 0..base.n_arrows() {
            if base.tgt(g) != fiber[pi] {
                continue;
            }
            for (qi, q) in p_objects.iter().enumerate() {
                if base.src(g) != fiber[qi] {
                    continue;
                }
                let id = arrow_name(p, g, q);
                decode.insert(id.clone(), (pi, g, qi));
                arrows.push(ArrowData { id, src: q.clone(), tgt: p.clone() });
            }
        }
    }
    for a in &arrows {
        for b in &arrows {
            if a.src != b.tgt {
                continue;
            }
            let (_, ga, _) = decode[&a.id];
            let (_, gb, qb) = decode[&b.id];
            let k = base.compose(ga, gb).expect("fibers align over composable arrows");
            compose.push([a.id.clone(), b.id.clone(), arrow_name(&a.tgt, k, &p_objects[qb])]);
        }
    }
    let groupoid = FiniteGroupoid::from_data(&GroupoidData {
        objects: sorted,
        arrows,
        compose,
        units: None,
        inverses: None,
    })?;
    let obj_map = (0..groupoid.n_objects())
        .map(|i| {
            let p = groupoid.object_id(i);
            let pos = p_objects.iter().position(|q| q == p).unwrap();
            fiber[pos]
        })
        .collect();
    let arr_map = (0..groupoid.n_arrows())
        .map(|a| decode[groupoid.arrow_id(a)].1)
        .collect();
    Ok(PullbackResult { groupoid, projection: GroupoidMorphism { obj_map, arr_map } })
}

/// Čech groupoid of an open cover: the pullback along
/// `⊔ᵢ Uᵢ → objects`, with duplicated objects named `U{i}:{x}`.
pub fn cech_groupoid(
    base: &FiniteGroupoid,
    cover: &[Vec<String>],
) -> Result<PullbackResult, GroupoidError> {
    let mut seen = BTreeSet::new();
    let mut p_objects = Vec::new();
    let mut f = BTreeMap::new();
    for (i, u) in cover.iter().enumerate() {
        for x in u {
            if base.object_index(x).is_none() {
                return Err(GroupoidError::CoverNotSubset(x.clone()));
            }
            let name = format!("U{i}:{x}");
            if !seen.insert(name.clone()) {
                return Err(GroupoidError::DuplicateObject(name));
            }
            f.insert(name.clone(), x.clone());
            p_objects.push(name);
        }
    }
    for x in 0..base.n_objects() {
        let covered = cover.iter().any(|u| u.iter().any(|y| y == base.object_id(x)));
        if !covered {
            return Err(GroupoidError::CoverMisses(base.object_id(x).into()));
        }
    }
    pullback_groupoid(base, &p_objects, &f)
}

/// Gauge groupoid data: the quotient `(P × P)/Γ` of a free group action,
/// with arrows named by class representatives canonical at the target side.
pub struct GaugeResult {
    pub groupoid: FiniteGroupoid,
    /// Orbit (object index) of each point of `P`.
    pub orbit_of_point: Vec<usize>,
    /// Basepoint (index into `total`) chosen in each orbit.
    pub basepoint: Vec<usize>,
    /// The points of `P` in input order.
    pub total: Vec<String>,
    /// Trivialization functor to the group: arrow ↦ group element index.
    pub to_group: Vec<usize>,
    /// Canonical class representative of each arrow, as point indices
    /// `(first, second)` with the first leg at the target's basepoint.
    pub canonical_pair: Vec<(usize, usize)>,
}

/// Gauge groupoid of a free left action of a group on a finite set `P`.
///
/// Objects are the orbits `o:{p}` named after their minimal point; the
/// arrow class `[q', q]` is named by its representative with first leg at
/// the target's basepoint. The trivialization sends the class with
/// canonical form `(p_y, δ·p_x)` to `δ`; it is a functor onto the group.
pub fn gauge_groupoid(
    names: &[String],
    table: &[Vec<usize>],
    total: &[String],
    act: &[Vec<usize>],
) -> Result<GaugeResult, GroupoidError> {
    check_separator(total, '~')?;
    verify_action(names, table, total, act)?;
    let e = group_identity(names, table)?;
    let mut total_sorted = total.to_vec();
    total_sorted.sort();
    let pt_index: BTreeMap<&str, usize> =
        total.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
    // Freeness: only the identity fixes a point.
    for g in 0..names.len() {
        if g == e {
            continue;
        }
        for (x, p) in total.iter().enumerate() {
            if act[g][x] == x {
                return Err(GroupoidError::NotFree(p.clone()));
            }
        }
    }
    // Orbits with lexicographically minimal basepoints.
    let mut orbit_of_point = vec![usize::MAX; total.len()];
    let mut basepoint = Vec::new();
    let mut orbit_names = Vec::new();
    for p in &total_sorted {
        let pi = pt_index[p.as_str()];
        if orbit_of_point[pi] != usize::MAX {
            continue;
        }
        let o = basepoint.len();
        for g in 0..names.len() {
            orbit_of_point[act[g][pi]] = o;
        }
        basepoint.push(pi);
        orbit_names.push(format!("o:{p}"));
    }

    // Arrows: (target orbit y, group element δ, source orbit x), realized
    // as the class with representative (p_y, δ·p_x).
    let arrow_name = |y: usize, d: usize, x: usize| {
        format!("{}~{}", total[basepoint[y]], total[act[d][basepoint[x]]])
    };
    let mut arrows = Vec::new();
    let mut compose = Vec::new();
    for y in 0..basepoint.len() {
        for d in 0..names.len() {
            for x in 0..basepoint.len() {
                arrows.push(ArrowData {
                    id: arrow_name(y, d, x),
                    src: orbit_names[x].clone(),
                    tgt: orbit_names[y].clone(),
                });
            }
        }
    }
    for y in 0..basepoint.len() {
        for d1 in 0..names.len() {
            for x in 0..basepoint.len() {
                for d2 in 0..names.len() {
                    for w in 0..basepoint.len() {
                        compose.push([
                            arrow_name(y, d1, x),
                            arrow_name(x, d2, w),
                            arrow_name(y, table[d1][d2], w),
                        ]);
                    }
                }
            }
        }
    }
    let groupoid = FiniteGroupoid::from_data(&GroupoidData {
        objects: orbit_names,
        arrows,
        compose,
        units: None,
        inverses: None,
    })?;
    // Recover δ and the canonical pair from each sorted arrow id.
    let mut to_group = vec![usize::MAX; groupoid.n_arrows()];
    let mut canonical_pair = vec![(usize::MAX, usize::MAX); groupoid.n_arrows()];
    for y in 0..basepoint.len() {
        for d in 0..names.len() {
            for x in 0..basepoint.len() {
                let idx = groupoid.arrow_index(&arrow_name(y, d, x)).unwrap();
                to_group[idx] = d;
                canonical_pair[idx] = (basepoint[y], act[d][basepoint[x]]);
            }
        }
    }
    // Object order inside the groupoid may differ from discovery order;
    // remap orbit bookkeeping onto groupoid object indices.
    let remap: Vec<usize> = (0..basepoint.len())
        .map(|o| {
            groupoid
                .object_index(&format!("o:{}", total[basepoint[o]]))
                .expect("orbit object present")
        })
        .collect();
    let mut orbit_remapped = vec![usize::MAX; total.len()];
    for (p, o) in orbit_of_point.iter().enumerate() {
        orbit_remapped[p] = remap[*o];
    }
    let mut base_remapped = vec![usize::MAX; basepoint.len()];
    for (o, bp) in basepoint.iter().enumerate() {
        base_remapped[remap[o]] = *bp;
    }
    Ok(GaugeResult {
        groupoid,
        orbit_of_point: orbit_remapped,
        basepoint: base_remapped,
        total: total.to_vec(),
        to_group,
        canonical_pair,
    })
}
