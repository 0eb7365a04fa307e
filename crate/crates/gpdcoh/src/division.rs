//! The division presentation of a groupoid: arrows, a source map, and the
//! single operation `m̄(g, h) = g∘h⁻¹`, defined exactly on pairs with equal
//! source.
//!
//! Three axioms characterize the structures arising this way:
//!
//! 1. `s(m̄(g, h)) = s(m̄(h, h))` whenever `s(g) = s(h)`;
//! 2. `m̄(m̄(g, k), m̄(h, k)) = m̄(g, h)` whenever `s(g) = s(h) = s(k)`;
//! 3. `s` is injective on the image of the diagonal `g ↦ m̄(g, g)`.
//!
//! [`DivisionPresentation::to_groupoid`] reconstructs composition, units,
//! targets, and inverses from `(s, m̄)` alone — requiring additionally that
//! the diagonal image covers every source label (otherwise some object has
//! no unit) — and then runs the full groupoid validator on the result, so a
//! presentation that secretly fails to be a groupoid is always rejected
//! with a witness.

use crate::groupoid::{ArrowData, FiniteGroupoid, GroupoidData, GroupoidError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum DivisionError {
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),
    #[error("reference to unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("source map is missing arrow `{0}`")]
    MissingSource(String),
    #[error("division undefined on equal-source pair (`{0}`, `{1}`)")]
    Undefined(String, String),
    #[error("division declared on pair (`{0}`, `{1}`) with different sources")]
    WrongDomain(String, String),
    #[error("duplicate division entry for (`{0}`, `{1}`)")]
    DuplicateEntry(String, String),
    #[error("axiom s(m̄(g,h)) = s(m̄(h,h)) fails at (`{0}`, `{1}`)")]
    SourceAxiom(String, String),
    #[error("axiom m̄(m̄(g,k), m̄(h,k)) = m̄(g,h) fails at (`{0}`, `{1}`, `{2}`)")]
    CancellationAxiom(String, String, String),
    #[error("diagonal elements `{0}` and `{1}` share source `{2}`")]
    DiagonalNotInjective(String, String, String),
    #[error("no diagonal element has source `{0}`, so that object lacks a unit")]
    DiagonalNotOnto(String),
    #[error("reconstructed structure is not a groupoid: {0}")]
    Reconstruction(#[from] GroupoidError),
}

/// Wire form of a division presentation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivisionData {
    pub arrows: Vec<String>,
    /// Source label of each arrow.
    pub s: BTreeMap<String, String>,
    /// Entries `[g, h, m̄(g,h)]` over pairs with equal source.
    pub mbar: Vec<[String; 3]>,
}

/// A structurally well-formed division presentation (domain of `m̄` is
/// exactly the equal-source pairs). The three axioms are checked separately
/// by [`DivisionPresentation::check_axioms`].
pub struct DivisionPresentation {
    arrows: Vec<String>,
    labels: Vec<String>,
    s: Vec<usize>,
    mbar: Vec<Vec<Option<usize>>>,
}

impl DivisionPresentation {
    pub fn from_data(data: &DivisionData) -> Result<Self, DivisionError> {
        let mut arrows = data.arrows.clone();
        arrows.sort();
        for w in arrows.windows(2) {
            if w[0] == w[1] {
                return Err(DivisionError::DuplicateArrow(w[0].clone()));
            }
        }
        let arr_index: BTreeMap<&str, usize> =
            arrows.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        let mut labels: Vec<String> = data.s.values().cloned().collect();
        labels.sort();
        labels.dedup();
        let lab_index: BTreeMap<&str, usize> =
            labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut s = Vec::with_capacity(arrows.len());
        for a in &arrows {
            let l = data.s.get(a).ok_or_else(|| DivisionError::MissingSource(a.clone()))?;
            s.push(lab_index[l.as_str()]);
        }
        for a in data.s.keys() {
            if !arr_index.contains_key(a.as_str()) {
                return Err(DivisionError::UnknownArrow(a.clone()));
            }
        }
        let n = arrows.len();
        let mut mbar: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for [g, h, r] in &data.mbar {
            let gi = *arr_index
                .get(g.as_str())
                .ok_or_else(|| DivisionError::UnknownArrow(g.clone()))?;
            let hi = *arr_index
                .get(h.as_str())
                .ok_or_else(|| DivisionError::UnknownArrow(h.clone()))?;
            let ri = *arr_index
                .get(r.as_str())
                .ok_or_else(|| DivisionError::UnknownArrow(r.clone()))?;
            if s[gi] != s[hi] {
                return Err(DivisionError::WrongDomain(g.clone(), h.clone()));
            }
            if mbar[gi][hi].is_some() {
                return Err(DivisionError::DuplicateEntry(g.clone(), h.clone()));
            }
            mbar[gi][hi] = Some(ri);
        }
        for g in 0..n {
            for h in 0..n {
                if s[g] == s[h] && mbar[g][h].is_none() {
                    return Err(DivisionError::Undefined(arrows[g].clone(), arrows[h].clone()));
                }
            }
        }
        Ok(DivisionPresentation { arrows, labels, s, mbar })
    }

    pub fn to_data(&self) -> DivisionData {
        let s = self
            .arrows
            .iter()
            .enumerate()
            .map(|(g, id)| (id.clone(), self.labels[self.s[g]].clone()))
            .collect();
        let mut mbar = Vec::new();
        for g in 0..self.arrows.len() {
            for h in 0..self.arrows.len() {
                if let Some(r) = self.mbar[g][h] {
                    mbar.push([
                        self.arrows[g].clone(),
                        self.arrows[h].clone(),
                        self.arrows[r].clone(),
                    ]);
                }
            }
        }
        DivisionData { arrows: self.arrows.clone(), s, mbar }
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    /// Verifies the three division axioms, reporting the first witness.
    pub fn check_axioms(&self) -> Result<(), DivisionError> {
        let n = self.arrows.len();
        for g in 0..n {
            for h in 0..n {
                let Some(ghb) = self.mbar[g][h] else { continue };
                let hhb = self.mbar[h][h].expect("equal sources are total");
                if self.s[ghb] != self.s[hhb] {
                    return Err(DivisionError::SourceAxiom(
                        self.arrows[g].clone(),
                        self.arrows[h].clone(),
                    ));
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                if self.s[g] != self.s[h] {
                    continue;
                }
                for k in 0..n {
                    if self.s[k] != self.s[g] {
                        continue;
                    }
                    let gk = self.mbar[g][k].expect("total");
                    let hk = self.mbar[h][k].expect("total");
                    // The first axiom (already verified) makes this defined.
                    let outer = self.mbar[gk][hk].ok_or_else(|| {
                        DivisionError::CancellationAxiom(
                            self.arrows[g].clone(),
                            self.arrows[h].clone(),
                            self.arrows[k].clone(),
                        )
                    })?;
                    if Some(outer) != self.mbar[g][h] {
                        return Err(DivisionError::CancellationAxiom(
                            self.arrows[g].clone(),
                            self.arrows[h].clone(),
                            self.arrows[k].clone(),
                        ));
                    }
                }
            }
        }
        let mut diag_by_source: BTreeMap<usize, usize> = BTreeMap::new();
        for g in 0..n {
            let d = self.mbar[g][g].expect("total");
            match diag_by_source.get(&self.s[d]) {
                Some(prev) if *prev != d => {
                    return Err(DivisionError::DiagonalNotInjective(
                        self.arrows[*prev].clone(),
                        self.arrows[d].clone(),
                        self.labels[self.s[d]].clone(),
                    ));
                }
                _ => {
                    diag_by_source.insert(self.s[d], d);
                }
            }
        }
        Ok(())
    }

    /// Reconstructs the groupoid: `t(g) = s(m̄(g,g))`, unit at `x` the
    /// diagonal element with source `x`, `i(g) = m̄(u(s(g)), g)`, and
    /// `g∘h = m̄(g, i(h))`. The result is passed through full groupoid
    /// validation.
    pub fn to_groupoid(&self) -> Result<FiniteGroupoid, DivisionError> {
        self.check_axioms()?;
        let n = self.arrows.len();
        // Units: the diagonal image must also cover every label.
        let mut unit_of_label: Vec<Option<usize>> = vec![None; self.labels.len()];
        for g in 0..n {
            let d = self.mbar[g][g].expect("total");
            unit_of_label[self.s[d]] = Some(d);
        }
        let mut units = Vec::with_capacity(self.labels.len());
        for (l, u) in unit_of_label.iter().enumerate() {
            units.push(u.ok_or_else(|| DivisionError::DiagonalNotOnto(self.labels[l].clone()))?);
        }
        let tgt: Vec<usize> = (0..n).map(|g| self.s[self.mbar[g][g].unwrap()]).collect();
        let inv: Vec<usize> = (0..n).map(|g| self.mbar[units[self.s[g]]][g].unwrap()).collect();
        let arrows = (0..n)
            .map(|g| ArrowData {
                id: self.arrows[g].clone(),
                src: self.labels[self.s[g]].clone(),
                tgt: self.labels[tgt[g]].clone(),
            })
            .collect();
        let mut compose = Vec::new();
        for g in 0..n {
            for h in 0..n {
                if self.s[g] != tgt[h] {
                    continue;
                }
                // s(i(h)) = t(h) = s(g), so the division below is defined.
                let k = self.mbar[g][inv[h]].expect("sources align");
                compose.push([
                    self.arrows[g].clone(),
                    self.arrows[h].clone(),
                    self.arrows[k].clone(),
                ]);
            }
        }
        let data = GroupoidData {
            objects: self.labels.clone(),
            arrows,
            compose,
            units: None,
            inverses: None,
        };
        Ok(FiniteGroupoid::from_data(&data)?)
    }
}

/// Division presentation of a validated groupoid: forgets targets,
/// composition, units, and inverses, keeping `s` and `m̄(g,h) = g∘h⁻¹`.
pub fn to_division(g: &FiniteGroupoid) -> DivisionPresentation {
    let n = g.n_arrows();
    let arrows: Vec<String> = (0..n).map(|a| g.arrow_id(a).to_string()).collect();
    let labels: Vec<String> = (0..g.n_objects()).map(|x| g.object_id(x).to_string()).collect();
    let s: Vec<usize> = (0..n).map(|a| g.src(a)).collect();
    let mut mbar: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    for a in 0..n {
        for b in 0..n {
            if g.src(a) == g.src(b) {
                mbar[a][b] = Some(g.compose(a, g.inv(b)).expect("equal sources divide"));
            }
        }
    }
    DivisionPresentation { arrows, labels, s, mbar }
}

/// `(g_1, …, g_k) ↦ (a_1, …, a_k)` with `a_i = g_i ∘ g_{i+1} ∘ … ∘ g_k`:
/// turns a composable string into a tuple of arrows sharing the source
/// `s(g_k)`.
pub fn to_common_source(g: &FiniteGroupoid, string: &[usize]) -> Vec<usize> {
    let mut out = vec![0; string.len()];
    let k = string.len();
    for i in (0..k).rev() {
        out[i] = if i == k - 1 {
            string[i]
        } else {
            g.compose(string[i], out[i + 1]).expect("composable string")
        };
    }
    out
}

/// Inverse of [`to_common_source`]: `g_i = m̄(a_i, a_{i+1}) = a_i ∘ a_{i+1}⁻¹`
/// for `i < k` and `g_k = a_k`. Returns `None` unless all sources agree.
pub fn from_common_source(g: &FiniteGroupoid, tuple: &[usize]) -> Option<Vec<usize>> {
    if tuple.is_empty() {
        return Some(Vec::new());
    }
    let s0 = g.src(tuple[tuple.len() - 1]);
    if tuple.iter().any(|a| g.src(*a) != s0) {
        return None;
    }
    let mut out = Vec::with_capacity(tuple.len());
    for i in 0..tuple.len() - 1 {
        out.push(g.compose(tuple[i], g.inv(tuple[i + 1])).expect("equal sources"));
    }
    out.push(tuple[tuple.len() - 1]);
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{pair_groupoid, unit_groupoid};

    fn s3() -> FiniteGroupoid {
        // S₃ as permutations of {0,1,2}, named by their one-line notation.
        let perms: Vec<Vec<usize>> = vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ];
        let names: Vec<String> = perms
            .iter()
            .map(|p| format!("p{}{}{}", p[0], p[1], p[2]))
            .collect();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let comp: Vec<usize> = (0..3).map(|i| p[q[i]]).collect();
                        perms.iter().position(|r| *r == comp).unwrap()
                    })
                    .collect()
            })
            .collect();
        crate::groupoid::group_groupoid(&names, &table).unwrap()
    }

    #[test]
    fn round_trip_preserves_groupoid() {
        for g in [
            s3(),
            pair_groupoid(&["a".into(), "b".into()]).unwrap(),
            unit_groupoid(&["x".into(), "y".into(), "z".into()]).unwrap(),
        ] {
            let d = to_division(&g);
            d.check_axioms().unwrap();
            let back = d.to_groupoid().unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn wire_round_trip() {
        let g = s3();
        let data = to_division(&g).to_data();
        let d = DivisionPresentation::from_data(&data).unwrap();
        assert_eq!(d.to_groupoid().unwrap(), g);
    }

    #[test]
    fn diagonal_collision_is_rejected() {
        // Left projection m̄(g, h) = g on two arrows with a shared source
        // label satisfies the source and cancellation axioms, but every
        // arrow is its own diagonal, so the diagonals a and b collide at x.
        let data = DivisionData {
            arrows: vec!["a".into(), "b".into()],
            s: [("a".to_string(), "x".to_string()), ("b".to_string(), "x".to_string())]
                .into_iter()
                .collect(),
            mbar: vec![
                ["a".into(), "a".into(), "a".into()],
                ["a".into(), "b".into(), "a".into()],
                ["b".into(), "a".into(), "b".into()],
                ["b".into(), "b".into(), "b".into()],
            ],
        };
        let d = DivisionPresentation::from_data(&data).unwrap();
        match d.check_axioms() {
            Err(DivisionError::DiagonalNotInjective(_, _, label)) => assert_eq!(label, "x"),
            other => panic!("expected diagonal injectivity failure, got {other:?}"),
        }
    }

    #[test]
    fn missing_unit_is_rejected() {
        // Unit groupoid with m̄(1_x2, 1_x2) redirected to 1_x1: axioms hold
        // but x2 loses its unit at reconstruction.
        let g = unit_groupoid(&["x1".into(), "x2".into(), "x3".into()]).unwrap();
        let mut data = to_division(&g).to_data();
        for entry in &mut data.mbar {
            if entry[0] == "1_x2" {
                entry[2] = "1_x1".into();
            }
        }
        let d = DivisionPresentation::from_data(&data).unwrap();
        match d.to_groupoid() {
            Err(DivisionError::SourceAxiom(_, _)) | Err(DivisionError::DiagonalNotOnto(_)) => {}
            other => panic!("expected rejection, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn common_source_change_of_variables_is_bijective() {
        let g = s3();
        for k in 1..=3 {
            let nerve = g.nerve(k);
            let mut seen = std::collections::BTreeSet::new();
            for s in &nerve {
                let a = to_common_source(&g, s);
                let s0 = g.src(*a.last().unwrap());
                assert!(a.iter().all(|x| g.src(*x) == s0));
                assert!(seen.insert(a.clone()), "change of variables must be injective");
                assert_eq!(from_common_source(&g, &a).unwrap(), *s);
            }
            // Surjectivity: every common-source tuple arises.
            assert_eq!(seen.len(), nerve.len());
            assert_eq!(seen.len(), 6usize.pow(k as u32));
        }
    }
}
