//! End-to-end acceptance run. Each numbered check prints one pass/fail
//! line; the test fails if any line fails. Runtime-bounded checks fold
//! their wall-clock budget into the verdict.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use gpdcoh::cochain::{
    normalized_rep_complex, normalized_ruth_complex, rep_complex, ruth_complex,
    total_differentials,
};
use gpdcoh::examples::{ExampleCoefficients, ExampleRegistry};
use gpdcoh::groupoid::FiniteGroupoid;
use gpdcoh::matrix::SparseMat;
use gpdcoh::randgen::RandGen;
use gpdcoh::rep::{cone_ruth, gauge_twist, validate_ruth, Ruth2};
use gpdcoh::sequences::curvature_cup_check;
use gpdcoh::suite::{SuiteOptions, SuiteRegistry, DEFAULT_SEED};

struct Line {
    label: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn check(
    lines: &mut Vec<Line>,
    label: &'static str,
    budget: Option<Duration>,
    body: impl FnOnce() -> Result<(), String>,
) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let mut pass = outcome.is_ok();
    let mut detail = outcome.err().unwrap_or_default();
    if let Some(budget) = budget {
        if elapsed > budget {
            pass = false;
            let _ = write!(detail, " [over budget: {elapsed:.1?} > {budget:.1?}]");
        }
    }
    lines.push(Line { label, pass, detail, elapsed });
}

fn run_suite(name: &str) -> Result<(), String> {
    let report = SuiteRegistry::builtin()
        .run(name, &SuiteOptions::default())
        .map_err(|e| e.to_string())?;
    if report.pass {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| match &c.detail {
                Some(d) => format!("{}: {d}", c.name),
                None => c.name.clone(),
            })
            .collect();
        Err(failed.join("; "))
    }
}

fn d_squared_is_zero(g: &FiniteGroupoid, r: &Ruth2) -> bool {
    let Ok((_, d)) = total_differentials(g, r, 3) else {
        return false;
    };
    (0..3).all(|k| d[k + 1].mul(&d[k]).map(|m| m.is_zero()).unwrap_or(false))
}

/// A valid system with zero boundary and (generically) nonzero curvature:
/// a flat cone between two random representations, gauge twisted.
fn flat_twisted_ruth(gen: &mut RandGen, g: &FiniteGroupoid) -> Ruth2 {
    let a = gen.rep_bounded(g, 2);
    let b = gen.rep_bounded(g, 2);
    let rho: Vec<SparseMat> =
        (0..g.n_objects()).map(|x| SparseMat::zero(b.dims[x], a.dims[x])).collect();
    let flat = cone_ruth(g, &a, &b, &rho).expect("zero map is equivariant");
    let eta: Vec<SparseMat> = (0..g.n_arrows())
        .map(|h| {
            let (rows, cols) = (a.dims[g.tgt(h)], b.dims[g.src(h)]);
            if g.is_unit(h) {
                SparseMat::zero(rows, cols)
            } else {
                gen.matrix(rows, cols)
            }
        })
        .collect();
    gauge_twist(g, &flat, &eta).expect("twist of a valid system stays valid")
}

fn gpdcoh_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpdcoh"))
        .args(args)
        .output()
        .expect("spawning the CLI binary")
}

fn combined(out: &Output) -> String {
    format!(
        "{}{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct CohomologyReport {
    schema: String,
    #[allow(dead_code)]
    input: String,
    #[allow(dead_code)]
    coefficients: String,
    max_degree: usize,
    dims: Vec<usize>,
    pass: bool,
    #[allow(dead_code)]
    witnesses: Vec<String>,
}

fn cli_dims(example: &str, degree: Option<usize>) -> Result<Vec<usize>, String> {
    let mut args = vec!["cohomology", "--example", example, "--json"];
    let degree_text;
    if let Some(d) = degree {
        degree_text = d.to_string();
        args.extend(["--max-degree", &degree_text]);
    }
    let out = gpdcoh_bin(&args);
    if !out.status.success() {
        return Err(format!("exit {:?}: {}", out.status.code(), combined(&out)));
    }
    let report: CohomologyReport = serde_json::from_slice(&out.stdout)
        .map_err(|e| format!("report does not parse back: {e}"))?;
    if report.schema != "gpdcoh.cohomology/1" || !report.pass {
        return Err(format!("unexpected report header: {}, pass={}", report.schema, report.pass));
    }
    if report.dims.len() != report.max_degree + 1 {
        return Err("dims length disagrees with the recorded truncation".into());
    }
    Ok(report.dims)
}

fn write_corrupted_inputs(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let emit = gpdcoh_bin(&["example", "s3", "--out", dir.to_str().unwrap()]);
    assert!(emit.status.success(), "emitting s3: {}", combined(&emit));
    let emit = gpdcoh_bin(&["example", "twisted-cone", "--out", dir.to_str().unwrap()]);
    assert!(emit.status.success(), "emitting twisted-cone: {}", combined(&emit));

    let s3 = dir.join("s3.groupoid.json");
    let mut value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&s3).unwrap()).unwrap();
    let compose = value["compose"].as_array_mut().unwrap();
    let wrong = compose[4][2].clone();
    compose[3][2] = wrong;
    let bad_groupoid = dir.join("s3.bad.groupoid.json");
    fs::write(&bad_groupoid, serde_json::to_string(&value).unwrap()).unwrap();

    let cone = dir.join("twisted-cone.ruth.json");
    let mut value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&cone).unwrap()).unwrap();
    value["lambda1"]["z1"] = serde_json::json!([["2/1"]]);
    let bad_ruth = dir.join("twisted-cone.bad.ruth.json");
    fs::write(&bad_ruth, serde_json::to_string(&value).unwrap()).unwrap();

    (bad_groupoid, dir.join("twisted-cone.groupoid.json"), bad_ruth)
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();
    let secs = Duration::from_secs;

    check(&mut lines, "1 division-presentation round-trips", Some(secs(30)), || {
        run_suite("appendix")
    });

    check(&mut lines, "2 structure equations match the operator", None, || {
        let mut gen = RandGen::new(DEFAULT_SEED);
        for i in 0..100 {
            let g = gen.small_nonunit_groupoid(6);
            let (r, expected_valid) = if i < 50 {
                (gen.valid_ruth(&g), true)
            } else {
                (gen.invalid_ruth(&g), false)
            };
            let validated = validate_ruth(&g, &r).is_ok();
            if validated != expected_valid {
                return Err(format!("case {i}: generator produced the wrong class"));
            }
            if validated != d_squared_is_zero(&g, &r) {
                return Err(format!(
                    "case {i}: validation says {validated} but D² disagrees"
                ));
            }
        }
        Ok(())
    });

    check(&mut lines, "3 higher cohomology vanishes over a finite base", Some(secs(120)), || {
        run_suite("vanish")
    });

    check(&mut lines, "4 cones of equivariant maps match mapping cones", None, || {
        run_suite("cone")
    });

    check(&mut lines, "5 regular-case cylinder, sequences, and LES", None, || {
        run_suite("les-regular")
    });

    check(&mut lines, "6 low-degree five-node exactness", None, || {
        run_suite("les-low")
    });

    check(&mut lines, "7 flat curvature class drives the connecting map", None, || {
        let mut gen = RandGen::new(DEFAULT_SEED);
        let twisted = ExampleRegistry::builtin().build("twisted-cone").unwrap();
        let mut cases = vec![(
            twisted.groupoid.clone(),
            match twisted.coefficients {
                Some(ExampleCoefficients::Ruth(r)) => r,
                _ => unreachable!("twisted-cone carries a two-term system"),
            },
        )];
        for _ in 0..20 {
            let g = gen.small_groupoid(6);
            let r = flat_twisted_ruth(&mut gen, &g);
            cases.push((g, r));
        }
        for (i, (g, r)) in cases.iter().enumerate() {
            validate_ruth(g, r).map_err(|e| format!("case {i} invalid: {e}"))?;
            let report = curvature_cup_check(g, r, 3).map_err(|e| format!("case {i}: {e}"))?;
            if !report.cocycle_ok {
                return Err(format!("case {i}: curvature class is not a 2-cocycle"));
            }
            if !report.pass {
                return Err(format!(
                    "case {i}: connecting map differs from the signed cup product \
                     (classes_equal={}, representatives_equal={})",
                    report.classes_equal, report.representatives_equal
                ));
            }
        }
        Ok(())
    });

    check(&mut lines, "8 Morita-invariant dimensions", None, || run_suite("morita"));

    check(&mut lines, "9 normalized subcomplex is a quasi-isomorphism", None, || {
        for entry in ExampleRegistry::builtin().iter() {
            let data = entry.build().map_err(|e| e.to_string())?;
            let g = &data.groupoid;
            let (full, normalized) = match data.coefficients.as_ref().expect("builtin") {
                ExampleCoefficients::Rep(e) => (
                    rep_complex(g, e, 4).unwrap().cohomology_dims(4).unwrap(),
                    normalized_rep_complex(g, e, 4).unwrap().0.cohomology_dims(4).unwrap(),
                ),
                ExampleCoefficients::Ruth(r) => (
                    ruth_complex(g, r, 4).unwrap().cohomology_dims(4).unwrap(),
                    normalized_ruth_complex(g, r, 4).unwrap().0.cohomology_dims(4).unwrap(),
                ),
            };
            if full != normalized {
                return Err(format!(
                    "{}: full {full:?} vs normalized {normalized:?}",
                    entry.name()
                ));
            }
        }
        Ok(())
    });

    check(&mut lines, "10 differential is a degree-1 derivation", None, || {
        run_suite("dgmodule")
    });

    check(&mut lines, "11 CLI contract", Some(secs(300)), || {
        let dims = cli_dims("s3", Some(3))?;
        if dims != [1, 0, 0, 0] {
            return Err(format!("s3 at degree 3 reported {dims:?}"));
        }
        let dims = cli_dims("s3", None)?;
        if dims != [1, 0, 0, 0, 0] {
            return Err(format!("s3 at the default degree reported {dims:?}"));
        }

        for name in SuiteRegistry::builtin().names() {
            let out = gpdcoh_bin(&["suite", "--suite", name, "--builtin"]);
            if !out.status.success() {
                return Err(format!("suite {name} exited {:?}: {}", out.status.code(), combined(&out)));
            }
        }

        let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
        fs::create_dir_all(&dir).unwrap();
        let (bad_groupoid, cone_groupoid, bad_ruth) = write_corrupted_inputs(&dir);

        let out = gpdcoh_bin(&["validate", bad_groupoid.to_str().unwrap()]);
        if out.status.code() != Some(1) || !combined(&out).contains("associativity") {
            return Err(format!(
                "corrupted groupoid: exit {:?}, output {}",
                out.status.code(),
                combined(&out)
            ));
        }
        let out = gpdcoh_bin(&[
            "validate",
            bad_ruth.to_str().unwrap(),
            "--groupoid",
            cone_groupoid.to_str().unwrap(),
        ]);
        if out.status.code() != Some(1) || !combined(&out).contains("equation (3)") {
            return Err(format!(
                "corrupted two-term system: exit {:?}, output {}",
                out.status.code(),
                combined(&out)
            ));
        }
        Ok(())
    });

    let mut failures = Vec::new();
    for line in &lines {
        let verdict = if line.pass { "PASS" } else { "FAIL" };
        let detail = if line.detail.is_empty() {
            String::new()
        } else {
            format!(" — {}", line.detail)
        };
        println!("criterion {:<48} {verdict} ({:.1?}){detail}", line.label, line.elapsed);
        if !line.pass {
            failures.push(format!("criterion {}{detail}", line.label));
        }
    }
    assert!(failures.is_empty(), "failed acceptance checks:\n{}", failures.join("\n"));
}
