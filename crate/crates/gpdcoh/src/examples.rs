//! Built-in example registry. Each entry builds a groupoid, optionally
//! with coefficients attached, and can be written out as canonical JSON
//! for the CLI's `example` command. New entries can be registered at
//! runtime behind the [`ExampleBuilder`] trait.

use std::fs;
use std::path::{Path, PathBuf};

use crate::groupoid::{
    action_groupoid, cech_groupoid, gauge_groupoid, group_groupoid, pair_groupoid,
    unit_groupoid, FiniteGroupoid, GroupoidError,
};
use crate::matrix::SparseMat;
use crate::rat::rat;
use crate::rep::{
    associated_bundle_rep, cone_ruth, gauge_twist, rep_to_data, ruth_to_data, trivial_rep,
    validate_ruth, RepError, Representation, Ruth2,
};

#[derive(Debug, thiserror::Error)]
pub enum ExampleError {
    #[error("unknown example `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Matrix(#[from] crate::matrix::MatrixError),
    #[error("writing `{0}`: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub enum ExampleCoefficients {
    Rep(Representation),
    Ruth(Ruth2),
}

pub struct ExampleData {
    pub groupoid: FiniteGroupoid,
    pub coefficients: Option<ExampleCoefficients>,
}

/// A named recipe producing one example.
pub trait ExampleBuilder: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self) -> Result<ExampleData, ExampleError>;
}

#[derive(Clone, Copy)]
struct Builtin {
    name: &'static str,
    summary: &'static str,
    build: fn() -> Result<ExampleData, ExampleError>,
}

impl ExampleBuilder for Builtin {
    fn name(&self) -> &'static str {
        self.name
    }
    fn summary(&self) -> &'static str {
        self.summary
    }
    fn build(&self) -> Result<ExampleData, ExampleError> {
        (self.build)()
    }
}

pub struct ExampleRegistry {
    entries: Vec<Box<dyn ExampleBuilder>>,
}

impl ExampleRegistry {
    /// The twelve standard examples.
    pub fn builtin() -> ExampleRegistry {
        let mut reg = ExampleRegistry { entries: Vec::new() };
        let builtins: &[Builtin] = &[
            Builtin {
                name: "zmod2",
                summary: "cyclic group of order 2, trivial line",
                build: || group_example(&zmod_table(2)),
            },
            Builtin {
                name: "zmod3",
                summary: "cyclic group of order 3, trivial line",
                build: || group_example(&zmod_table(3)),
            },
            Builtin {
                name: "s3",
                summary: "symmetric group on three letters, trivial line",
                build: || group_example(&s3_table()),
            },
            Builtin {
                name: "pair2",
                summary: "pair groupoid on two objects, trivial line",
                build: || pair_example(2),
            },
            Builtin {
                name: "pair3",
                summary: "pair groupoid on three objects, trivial line",
                build: || pair_example(3),
            },
            Builtin {
                name: "unit3",
                summary: "unit groupoid on three objects, trivial line",
                build: unit3_example,
            },
            Builtin {
                name: "act-z2-swap",
                summary: "Z/2 acting on two points by swap, trivial line",
                build: act_z2_swap_example,
            },
            Builtin {
                name: "gauge-z2-p4",
                summary: "gauge groupoid of a free Z/2 action on four points, sign bundle",
                build: gauge_z2_p4_example,
            },
            Builtin {
                name: "cech-line",
                summary: "Cech groupoid of a two-set cover of three points, trivial line",
                build: cech_line_example,
            },
            Builtin {
                name: "cone-trivial",
                summary: "two-term system with zero boundary over the swap action",
                build: || cone_example(false),
            },
            Builtin {
                name: "cone-id",
                summary: "two-term system with invertible boundary over the swap action",
                build: || cone_example(true),
            },
            Builtin {
                name: "twisted-cone",
                summary: "gauge-twisted flat cone over Z/2 with nonzero curvature",
                build: twisted_cone_example,
            },
        ];
        for b in builtins {
            reg.register(Box::new(*b));
        }
        reg
    }

    pub fn register(&mut self, builder: Box<dyn ExampleBuilder>) {
        self.entries.push(builder);
    }

    pub fn get(&self, name: &str) -> Option<&dyn ExampleBuilder> {
        self.entries.iter().find(|e| e.name() == name).map(|e| e.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn ExampleBuilder> {
        self.entries.iter().map(|e| e.as_ref())
    }

    pub fn build(&self, name: &str) -> Result<ExampleData, ExampleError> {
        self.get(name)
            .ok_or_else(|| ExampleError::Unknown(name.into()))?
            .build()
    }
}

fn zmod_table(n: usize) -> (Vec<String>, Vec<Vec<usize>>) {
    let names = (0..n).map(|i| format!("z{i}")).collect();
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    (names, table)
}

/// Elements named by their action; `r` is the 3-cycle, `s` the transposition
/// of the first two letters, and the table composes right-to-left.
fn s3_table() -> (Vec<String>, Vec<Vec<usize>>) {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [1, 2, 0],
        [2, 0, 1],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
    ];
    let names = ["e", "r", "r2", "s", "sr", "sr2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let table = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    let pq = [p[q[0]], p[q[1]], p[q[2]]];
                    perms.iter().position(|r| *r == pq).unwrap()
                })
                .collect()
        })
        .collect();
    (names, table)
}

fn with_trivial_line(g: FiniteGroupoid) -> ExampleData {
    let e = trivial_rep(&g, 1);
    ExampleData { groupoid: g, coefficients: Some(ExampleCoefficients::Rep(e)) }
}

fn group_example(
    (names, table): &(Vec<String>, Vec<Vec<usize>>),
) -> Result<ExampleData, ExampleError> {
    Ok(with_trivial_line(group_groupoid(names, table)?))
}

fn pair_example(n: usize) -> Result<ExampleData, ExampleError> {
    let objects: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    Ok(with_trivial_line(pair_groupoid(&objects)?))
}

fn unit3_example() -> Result<ExampleData, ExampleError> {
    let objects: Vec<String> = (1..=3).map(|i| format!("x{i}")).collect();
    Ok(with_trivial_line(unit_groupoid(&objects)?))
}

fn swap_action_groupoid() -> Result<FiniteGroupoid, ExampleError> {
    let (names, table) = zmod_table(2);
    let pts = vec!["p".to_string(), "q".to_string()];
    let act = vec![vec![0, 1], vec![1, 0]];
    Ok(action_groupoid(&names, &table, &pts, &act)?)
}

fn act_z2_swap_example() -> Result<ExampleData, ExampleError> {
    Ok(with_trivial_line(swap_action_groupoid()?))
}

fn gauge_z2_p4_example() -> Result<ExampleData, ExampleError> {
    let (names, table) = zmod_table(2);
    let total: Vec<String> = (0..4).map(|i| format!("p{i}")).collect();
    let act = vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2]];
    let gauge = gauge_groupoid(&names, &table, &total, &act)?;
    let sign = vec![
        SparseMat::identity(1),
        SparseMat::from_dense(1, 1, &[vec![rat(-1, 1)]])?,
    ];
    let rep = associated_bundle_rep(&gauge, &act, &sign, 1)?;
    Ok(ExampleData {
        groupoid: gauge.groupoid,
        coefficients: Some(ExampleCoefficients::Rep(rep)),
    })
}

fn cech_line_example() -> Result<ExampleData, ExampleError> {
    let objects: Vec<String> = (1..=3).map(|i| format!("x{i}")).collect();
    let base = unit_groupoid(&objects)?;
    let cover = vec![
        vec!["x1".to_string(), "x2".to_string()],
        vec!["x2".to_string(), "x3".to_string()],
    ];
    let cech = cech_groupoid(&base, &cover)?;
    Ok(with_trivial_line(cech.groupoid))
}

fn cone_example(invertible: bool) -> Result<ExampleData, ExampleError> {
    let g = swap_action_groupoid()?;
    let a = trivial_rep(&g, 1);
    let b = trivial_rep(&g, 1);
    let rho: Vec<SparseMat> = (0..g.n_objects())
        .map(|_| if invertible { SparseMat::identity(1) } else { SparseMat::zero(1, 1) })
        .collect();
    let r = cone_ruth(&g, &a, &b, &rho)?;
    Ok(ExampleData { groupoid: g, coefficients: Some(ExampleCoefficients::Ruth(r)) })
}

fn twisted_cone_example() -> Result<ExampleData, ExampleError> {
    let (names, table) = zmod_table(2);
    let g = group_groupoid(&names, &table)?;
    let a = trivial_rep(&g, 1);
    let b = trivial_rep(&g, 1);
    let rho: Vec<SparseMat> =
        (0..g.n_objects()).map(|_| SparseMat::zero(1, 1)).collect();
    let flat = cone_ruth(&g, &a, &b, &rho)?;
    let eta: Vec<SparseMat> = (0..g.n_arrows())
        .map(|h| {
            if g.is_unit(h) {
                Ok(SparseMat::zero(1, 1))
            } else {
                SparseMat::from_dense(1, 1, &[vec![rat(1, 2)]]).map_err(RepError::from)
            }
        })
        .collect::<Result<_, _>>()?;
    let r = gauge_twist(&g, &flat, &eta)?;
    validate_ruth(&g, &r)?;
    Ok(ExampleData { groupoid: g, coefficients: Some(ExampleCoefficients::Ruth(r)) })
}

/// Paths of the files an example was written to.
#[derive(Debug)]
pub struct WrittenFiles {
    pub groupoid: PathBuf,
    pub coefficients: Option<PathBuf>,
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), ExampleError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| ExampleError::Io(path.to_path_buf(), e))
}

/// Writes `<name>.groupoid.json` plus `<name>.rep.json` or
/// `<name>.ruth.json` under `dir`.
pub fn write_example(
    data: &ExampleData,
    name: &str,
    dir: &Path,
) -> Result<WrittenFiles, ExampleError> {
    fs::create_dir_all(dir).map_err(|e| ExampleError::Io(dir.to_path_buf(), e))?;
    let gpath = dir.join(format!("{name}.groupoid.json"));
    write_json(&gpath, &data.groupoid.to_data())?;
    let cpath = match &data.coefficients {
        Some(ExampleCoefficients::Rep(e)) => {
            let p = dir.join(format!("{name}.rep.json"));
            write_json(&p, &rep_to_data(&data.groupoid, e))?;
            Some(p)
        }
        Some(ExampleCoefficients::Ruth(r)) => {
            let p = dir.join(format!("{name}.ruth.json"));
            write_json(&p, &ruth_to_data(&data.groupoid, r))?;
            Some(p)
        }
        None => None,
    };
    Ok(WrittenFiles { groupoid: gpath, coefficients: cpath })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{rep_complex, ruth_complex};
    use crate::groupoid::GroupoidData;
    use crate::rep::{rep_from_data, ruth_from_data, validate_rep, RepData, RuthData};

    #[test]
    fn registry_has_twelve_named_entries() {
        let reg = ExampleRegistry::builtin();
        let names = reg.names();
        assert_eq!(names.len(), 12);
        for expect in [
            "zmod2",
            "zmod3",
            "s3",
            "pair2",
            "pair3",
            "unit3",
            "act-z2-swap",
            "gauge-z2-p4",
            "cech-line",
            "cone-trivial",
            "cone-id",
            "twisted-cone",
        ] {
            assert!(names.contains(&expect), "missing {expect}");
        }
        assert!(reg.get("nope").is_none());
    }

    #[test]
    fn every_builtin_round_trips_through_json() {
        let reg = ExampleRegistry::builtin();
        for entry in reg.iter() {
            let data = entry.build().unwrap();
            let text = serde_json::to_string(&data.groupoid.to_data()).unwrap();
            let parsed: GroupoidData = serde_json::from_str(&text).unwrap();
            let g2 = FiniteGroupoid::from_data(&parsed).unwrap();
            assert_eq!(g2, data.groupoid, "groupoid {}", entry.name());
            match &data.coefficients {
                Some(ExampleCoefficients::Rep(e)) => {
                    let text =
                        serde_json::to_string(&rep_to_data(&data.groupoid, e)).unwrap();
                    let parsed: RepData = serde_json::from_str(&text).unwrap();
                    let e2 = rep_from_data(&g2, &parsed).unwrap();
                    validate_rep(&g2, &e2).unwrap();
                    assert_eq!(e2.dims, e.dims);
                    assert_eq!(e2.act, e.act);
                }
                Some(ExampleCoefficients::Ruth(r)) => {
                    let text =
                        serde_json::to_string(&ruth_to_data(&data.groupoid, r)).unwrap();
                    let parsed: RuthData = serde_json::from_str(&text).unwrap();
                    let r2 = ruth_from_data(&g2, &parsed).unwrap();
                    validate_ruth(&g2, &r2).unwrap();
                    assert_eq!(r2.dims0, r.dims0);
                    assert_eq!(r2.dims1, r.dims1);
                }
                None => {}
            }
        }
    }

    #[test]
    fn builtin_shapes_and_dims() {
        let reg = ExampleRegistry::builtin();
        let s3 = reg.build("s3").unwrap();
        assert_eq!(s3.groupoid.n_arrows(), 6);
        let dims = match &s3.coefficients {
            Some(ExampleCoefficients::Rep(e)) => {
                rep_complex(&s3.groupoid, e, 3).unwrap().cohomology_dims(3).unwrap()
            }
            _ => unreachable!(),
        };
        assert_eq!(dims, vec![1, 0, 0, 0]);

        let pair3 = reg.build("pair3").unwrap();
        assert_eq!(pair3.groupoid.n_objects(), 3);
        assert_eq!(pair3.groupoid.n_arrows(), 9);

        let gauge = reg.build("gauge-z2-p4").unwrap();
        assert_eq!(gauge.groupoid.n_objects(), 2);
        assert_eq!(gauge.groupoid.n_arrows(), 8);
        let dims = match &gauge.coefficients {
            Some(ExampleCoefficients::Rep(e)) => {
                rep_complex(&gauge.groupoid, e, 3).unwrap().cohomology_dims(3).unwrap()
            }
            _ => unreachable!(),
        };
        assert_eq!(dims, vec![0, 0, 0, 0]);

        let cech = reg.build("cech-line").unwrap();
        assert_eq!(cech.groupoid.n_objects(), 4);
        assert_eq!(cech.groupoid.n_arrows(), 6);

        let cone = reg.build("cone-trivial").unwrap();
        let dims = match &cone.coefficients {
            Some(ExampleCoefficients::Ruth(r)) => {
                ruth_complex(&cone.groupoid, r, 3).unwrap().cohomology_dims(3).unwrap()
            }
            _ => unreachable!(),
        };
        assert_eq!(dims, vec![1, 1, 0, 0]);

        let cone_id = reg.build("cone-id").unwrap();
        let dims = match &cone_id.coefficients {
            Some(ExampleCoefficients::Ruth(r)) => {
                ruth_complex(&cone_id.groupoid, r, 3).unwrap().cohomology_dims(3).unwrap()
            }
            _ => unreachable!(),
        };
        assert_eq!(dims, vec![0, 0, 0, 0]);
    }

    #[test]
    fn twisted_cone_has_nonzero_curvature() {
        let reg = ExampleRegistry::builtin();
        let data = reg.build("twisted-cone").unwrap();
        let r = match &data.coefficients {
            Some(ExampleCoefficients::Ruth(r)) => r,
            _ => unreachable!(),
        };
        assert!(!r.kappa.values().all(|m| m.is_zero()));
        validate_ruth(&data.groupoid, r).unwrap();
    }

    #[test]
    fn writes_canonical_files() {
        let dir = std::env::temp_dir().join("gpdcoh-example-test");
        let _ = std::fs::remove_dir_all(&dir);
        let reg = ExampleRegistry::builtin();
        let data = reg.build("twisted-cone").unwrap();
        let files = write_example(&data, "twisted-cone", &dir).unwrap();
        assert!(files.groupoid.exists());
        let cpath = files.coefficients.unwrap();
        assert!(cpath.ends_with("twisted-cone.ruth.json"));
        let text = std::fs::read_to_string(&cpath).unwrap();
        let parsed: RuthData = serde_json::from_str(&text).unwrap();
        let back = ruth_from_data(&data.groupoid, &parsed).unwrap();
        validate_ruth(&data.groupoid, &back).unwrap();
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
