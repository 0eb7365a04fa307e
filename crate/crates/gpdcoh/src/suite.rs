//! Verification suites behind a common [`Suite`] trait, registered by
//! name and selected at runtime. Each suite assembles a corpus (built-in
//! examples plus a seeded random batch), runs its checks, and returns a
//! [`SuiteReport`] listing every check with a witness on failure.

use rayon::prelude::*;

use crate::cochain::{cup_product, degree_basis, rep_complex, Nerve};
use crate::division::{to_division, DivisionPresentation};
use crate::examples::{ExampleCoefficients, ExampleData, ExampleError, ExampleRegistry};
use crate::groupoid::FiniteGroupoid;
use crate::matrix::SparseMat;
use crate::morita::{
    cech_compare, gauge_compare, mv_maps, pullback_compare, Coefficients,
    PartitionOfUnity,
};
use crate::proper::{transgress, vanishing_report_rep, vanishing_report_ruth};
use crate::randgen::RandGen;
use crate::rat::Rat;
use crate::rep::{cone_ruth, trivial_rep, Representation, Ruth2};
use crate::sequences::{action_cone_check, low_degree_check, regular_les};

pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Example(#[from] ExampleError),
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub max_degree: usize,
    pub parallel: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: DEFAULT_SEED, max_degree: 4, parallel: false }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub max_degree: usize,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: &str, opts: &SuiteOptions, checks: Vec<CheckResult>) -> SuiteReport {
        let pass = checks.iter().all(|c| c.pass);
        SuiteReport {
            suite: suite.into(),
            seed: opts.seed,
            max_degree: opts.max_degree,
            checks,
            pass,
        }
    }
}

/// A named batch of checks.
pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport, SuiteError>;
}

pub struct SuiteRegistry {
    entries: Vec<Box<dyn Suite>>,
}

impl SuiteRegistry {
    pub fn builtin() -> SuiteRegistry {
        SuiteRegistry {
            entries: vec![
                Box::new(VanishSuite),
                Box::new(LesRegularSuite),
                Box::new(LesLowSuite),
                Box::new(ConeSuite),
                Box::new(MoritaSuite),
                Box::new(AppendixSuite),
                Box::new(DgModuleSuite),
            ],
        }
    }

    pub fn register(&mut self, suite: Box<dyn Suite>) {
        self.entries.push(suite);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Suite> {
        self.entries.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Suite> {
        self.entries.iter().map(|s| s.as_ref())
    }

    pub fn run(&self, name: &str, opts: &SuiteOptions) -> Result<SuiteReport, SuiteError> {
        self.get(name)
            .ok_or_else(|| SuiteError::Unknown(name.into()))?
            .run(opts)
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

/// Runs one closure per case, in parallel when requested; case order is
/// preserved either way.
fn run_cases<I, F>(parallel: bool, cases: &[I], f: F) -> Vec<Result<(), String>>
where
    I: Sync,
    F: Fn(&I) -> Result<(), String> + Sync,
{
    if parallel {
        cases.par_iter().map(&f).collect()
    } else {
        cases.iter().map(&f).collect()
    }
}

fn summarize(name: &str, outcomes: Vec<Result<(), String>>) -> CheckResult {
    let total = outcomes.len();
    let failures: Vec<(usize, String)> = outcomes
        .into_iter()
        .enumerate()
        .filter_map(|(i, r)| r.err().map(|w| (i, w)))
        .collect();
    match failures.first() {
        None => CheckResult {
            name: name.into(),
            pass: true,
            detail: Some(format!("{total} cases")),
        },
        Some((i, w)) => CheckResult {
            name: name.into(),
            pass: false,
            detail: Some(format!(
                "{} of {total} cases failed; case {i}: {w}",
                failures.len()
            )),
        },
    }
}

fn builtin_examples() -> Result<Vec<(String, ExampleData)>, SuiteError> {
    let reg = ExampleRegistry::builtin();
    let mut out = Vec::new();
    for entry in reg.iter() {
        out.push((entry.name().to_string(), entry.build()?));
    }
    Ok(out)
}

/// Embeds a genuine representation as a two-term system with zero odd
/// part, so representation-coefficient examples flow through the
/// two-term machinery unchanged.
fn rep_as_ruth(gpd: &FiniteGroupoid, rep: &Representation) -> Ruth2 {
    let zero_side = trivial_rep(gpd, 0);
    let rho: Vec<SparseMat> =
        rep.dims.iter().map(|d| SparseMat::zero(0, *d)).collect();
    cone_ruth(gpd, rep, &zero_side, &rho).expect("zero map is equivariant")
}

// ---------------------------------------------------------------------------
// vanish
// ---------------------------------------------------------------------------

struct VanishSuite;

const VANISH_RANDOM_RUTHS: usize = 20;
const TRANSGRESSION_COCYCLES: usize = 100;

impl Suite for VanishSuite {
    fn name(&self) -> &'static str {
        "vanish"
    }
    fn summary(&self) -> &'static str {
        "higher cohomology vanishes; degrees 0 and 1 match invariant sections"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport, SuiteError> {
        let k_max = opts.max_degree;
        let builtins = builtin_examples()?;
        let mut checks = Vec::new();

        let mut rep_cases: Vec<(String, FiniteGroupoid, Representation)> = Vec::new();
        let mut ruth_cases: Vec<(String, FiniteGroupoid, Ruth2)> = Vec::new();
        for (name, data) in builtins {
            match data.coefficients {
                Some(ExampleCoefficients::Rep(e)) => {
                    rep_cases.push((name, data.groupoid, e))
                }
                Some(ExampleCoefficients::Ruth(r)) => {
                    ruth_cases.push((name, data.groupoid, r))
                }
                None => {}
            }
        }
        let outcomes = run_cases(opts.parallel, &rep_cases, |(name, g, rep)| {
            let report = vanishing_report_rep(g, rep, k_max)
                .map_err(|e| format!("{name}: {e}"))?;
            if report.pass {
                Ok(())
            } else {
                Err(format!(
                    "{name}: dims {:?} expected {:?}",
                    report.dims, report.expected
                ))
            }
        });
        checks.push(summarize("builtin representations vanish above degree 0", outcomes));

        let outcomes = run_cases(opts.parallel, &ruth_cases, |(name, g, r)| {
            let report = vanishing_report_ruth(g, r, k_max)
                .map_err(|e| format!("{name}: {e}"))?;
            if report.pass {
                Ok(())
            } else {
                Err(format!(
                    "{name}: dims {:?} expected {:?}",
                    report.dims, report.expected
                ))
            }
        });
        checks.push(summarize(
            "builtin two-term systems match kernel/cokernel invariants",
            outcomes,
        ));

        let mut gen = RandGen::new(opts.seed);
        let random: Vec<(FiniteGroupoid, Ruth2)> = (0..VANISH_RANDOM_RUTHS)
            .map(|_| {
                let g = gen.small_groupoid(4);
                let r = gen.valid_ruth(&g);
                (g, r)
            })
            .collect();
        let outcomes = run_cases(opts.parallel, &random, |(g, r)| {
            let report =
                vanishing_report_ruth(g, r, k_max).map_err(|e| e.to_string())?;
            if report.pass {
                Ok(())
            } else {
                Err(format!("dims {:?} expected {:?}", report.dims, report.expected))
            }
        });
        checks.push(summarize("random gauge-twisted systems vanish above degree 1", outcomes));

        let cocycles: Vec<(FiniteGroupoid, Representation, usize, Vec<Rat>)> = (0
            ..TRANSGRESSION_COCYCLES)
            .map(|_| {
                let g = gen.small_groupoid(6);
                let e = gen.rep_bounded(&g, 4);
                let k = gen.range(1, 3);
                let cx = rep_complex(&g, &e, k).expect("complex builds");
                let z = gen.cocycle(cx.differential(k));
                (g, e, k, z)
            })
            .collect();
        let outcomes = run_cases(opts.parallel, &cocycles, |(g, e, k, z)| {
            transgress(g, e, *k, z).map(|_| ()).map_err(|e| e.to_string())
        });
        checks.push(summarize("transgression inverts the differential", outcomes));

        Ok(SuiteReport::new(self.name(), opts, checks))
    }
}

// ---------------------------------------------------------------------------
// les-regular
// ---------------------------------------------------------------------------

struct LesRegularSuite;

const LES_REGULAR_RANDOM: usize = 10;

impl Suite for LesRegularSuite {
    fn name(&self) -> &'static str {
        "les-regular"
    }
    fn summary(&self) -> &'static str {
        "cylinder contraction, kernel/cylinder exact sequences, assembled long exact sequence"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport, SuiteError> {
        let k_max = opts.max_degree;
        let builtins = builtin_examples()?;
        let mut checks = Vec::new();

        let cases: Vec<(String, FiniteGroupoid, Ruth2)> = builtins
            .iter()
            .filter_map(|(name, data)| match &data.coefficients {
                Some(ExampleCoefficients::Rep(e)) => Some((
                    name.clone(),
                    data.groupoid.clone(),
                    rep_as_ruth(&data.groupoid, e),
                )),
                Some(ExampleCoefficients::Ruth(r)) => {
                    Some((name.clone(), data.groupoid.clone(), r.clone()))
                }
                None => None,
            })
            .collect();
        let outcomes = run_cases(opts.parallel, &cases, |(name, g, r)| {
            let report = regular_les(g, r, k_max).map_err(|e| format!("{name}: {e}"))?;
            if report.pass {
                Ok(())
            } else {
                Err(format!("{name}: {}", regular_les_witness(&report)))
            }
        });
        checks.push(summarize("builtin examples", outcomes));

        let mut gen = RandGen::new(opts.seed);
        let random: Vec<(FiniteGroupoid, Ruth2)> = (0..LES_REGULAR_RANDOM)
            .map(|_| {
                let g = gen.small_groupoid(4);
                let r = gen.valid_ruth(&g);
                (g, r)
            })
            .collect();
        let outcomes = run_cases(opts.parallel, &random, |(g, r)| {
            let report = regular_les(g, r, k_max).map_err(|e| e.to_string())?;
            if report.pass {
                Ok(())
            } else {
                Err(regular_les_witness(&report))
            }
        });
        checks.push(summarize("random two-term systems", outcomes));

        Ok(SuiteReport::new(self.name(), opts, checks))
    }
}

fn regular_les_witness(report: &crate::sequences::RegularLes) -> String {
    if !report.cylinder.acyclic || !report.cylinder.contraction_ok {
        return format!("cylinder: {:?}", report.cylinder);
    }
    if !report.sr_zero {
        return "S∘R ≠ 0".into();
    }
    if !report.ses_kernel.iter().all(|d| d.exact()) {
        return "kernel sequence inexact".into();
    }
    if !report.ses_cylinder.iter().all(|d| d.exact()) {
        return "cylinder sequence inexact".into();
    }
    let node = report
        .les
        .nodes
        .iter()
        .find(|n| !n.exact)
        .map(|n| n.label.clone())
        .unwrap_or_else(|| "unknown".into());
    format!("long exact sequence fails at {node}")
}

// ---------------------------------------------------------------------------
// les-low
// ---------------------------------------------------------------------------

struct LesLowSuite;

const LES_LOW_CASES: usize = 20;

impl Suite for LesLowSuite {
    fn name(&self) -> &'static str {
        "les-low"
    }
    fn summary(&self) -> &'static str {
        "five-node low-degree sequence is exact"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport, SuiteError> {
        let builtins = builtin_examples()?;
        let mut checks = Vec::new();

        let cases: Vec<(String, FiniteGroupoid, Ruth2)> = builtins
            .iter()
            .filter_map(|(name, data)| match &data.coefficients {
                Some(ExampleCoefficients::Ruth(r)) => {
                    Some((name.clone(), data.groupoid.clone(), r.clone()))
                }
                _ => None,
            })
            .collect();
        let outcomes = run_cases(opts.parallel, &cases, |(name, g, r)| {
            let report = low_degree_check(g, r).map_err(|e| format!("{name}: {e}"))?;
            if report.pass {
                Ok(())
            } else {
                Err(format!("{name}: node dims {:?}", report.dims))
            }
        });
        checks.push(summarize("builtin two-term systems", outcomes));

        let mut gen = RandGen::new(opts.seed);
        let random: Vec<(FiniteGroupoid, Ruth2)> = (0..LES_LOW_CASES)
            .map(|_| {
                let g = gen.groupoid();
                let r = gen.valid_ruth(&g);
                (g, r)
            })
            .collect();
        let outcomes = run_cases(opts.parallel, &random, |(g, r)| {
            let report = low_degree_check(g, r).map_err(|e| e.to_string())?;
            if report.pass {
                Ok(())
            } else {
                Err(format!("node dims {:?}", report.dims))
            }
        });
        checks.push(summarize("random two-term systems", outcomes));

        Ok(SuiteReport::new(self.name(), opts, checks))
    }
}

// ---------------------------------------------------------------------------
// cone
// ---------------------------------------------------------------------------

struct ConeSuite;

const CONE_CASES: usize = 20;

impl Suite for ConeSuite {
    fn name(&self) -> &'static str {
        "cone"
    }
    fn summary(&self) -> &'static str {
        "cone of an equivariant map matches the mapping cone entrywise, with its long exact sequence"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport, SuiteError> {
        let k_max = opts.max_degree;
        let mut gen = RandGen::new(opts.seed);
        let cases: Vec<(FiniteGroupoid, Representation, Representation, Vec<SparseMat>)> =
            (0..CONE_CASES)
                .map(|_| {
                    let g = gen.small_groupoid(5);
                    let (a, b, rho) = gen.equivariant_pair(&g);
                    (g, a, b, rho)
                })
                .collect();
        let outcomes = run_cases(opts.parallel, &cases, |(g, a, b, rho)| {
            let cmp =
                action_cone_check(g, a, b, rho, k_max).map_err(|e| e.to_string())?;
            if cmp.pass {
                Ok(())
            } else {
                Err(format!(
                    "dims_equal={} entrywise={} ses={} les={}",
                    cmp.dims_equal,
                    cmp.entrywise_equal,
                    cmp.ses.iter().all(|d| d.exact()),
                    cmp.les.all_exact
                ))
            }
        });
        let checks = vec![summarize("random equivariant maps", outcomes)];
        Ok(SuiteReport::new(self.name(), opts, checks))
    }
}

// ---------------------------------------------------------------------------
// morita
// ---------------------------------------------------------------------------

struct MoritaSuite;

const MORITA_PULLBACKS: usize = 10;
const MORITA_CECH: usize = 10;
const MORITA_GAUGE: usize = 5;

impl Suite for MoritaSuite {
    fn name(&self) -> &'static str {
        "morita"
    }
    fn summary(&self) -> &'static str {
        "cohomology dimensions agree across pullback, Cech, and gauge presentations"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport, SuiteError> {
        let k_max = opts.max_degree.min(3);
        let mut gen = RandGen::new(opts.seed);
        let mut checks = Vec::new();

        enum Coeff {
            Rep(Representation),
            Ruth(Ruth2),
        }
        fn base_and_coeff(gen: &mut RandGen) -> (FiniteGroupoid, Coeff) {
            // Bound the degree-4 nerve so that the doubled point fibers of
            // the comparison groupoid stay tractable.
            let g = loop {
                let g = gen.groupoid();
                if g.nerve(4).len() <= 300 {
                    break g;
                }
            };
            let coeff = if gen.coin() {
                let (a, _, _) = gen.equivariant_pair(&g);
                Coeff::Rep(a)
            } else {
                Coeff::Ruth(gen.valid_ruth_sized(&g, 1))
            };
            (g, coeff)
        }

        let pullbacks: Vec<_> = (0..MORITA_PULLBACKS)
            .map(|_| {
                let (g, coeff) = base_and_coeff(&mut gen);
                let (points, f) = gen.surjection(&g);
                (g, coeff, points, f)
            })
            .collect();
        let outcomes = run_cases(opts.parallel, &pullbacks, |(g, coeff, points, f)| {
            let report = match coeff {
                Coeff::Rep(e) => {
                    pullback_compare(g, &Coefficients::Rep(e), points, f, k_max)
                }
                Coeff::Ruth(r) => {
                    pullback_compare(g, &Coefficients::Ruth(r), points, f, k_max)
                }
            }
            .map_err(|e| e.to_string())?;
            if report.equal {
                Ok(())
            } else {
                Err(format!("{:?} vs {:?}", report.left_dims, report.right_dims))
            }
        });
        checks.push(summarize("pullbacks along surjections", outcomes));

        let cechs: Vec<_> = (0..MORITA_CECH)
            .map(|_| {
                let (g, coeff) = base_and_coeff(&mut gen);
                let cover = gen.cover_sized(&g, 2);
                (g, coeff, cover)
            })
            .collect();
        let outcomes = run_cases(opts.parallel, &cechs, |(g, coeff, cover)| {
            match coeff {
                Coeff::Rep(e) => {
                    let pu =
                        PartitionOfUnity::auto(g, cover).map_err(|e| e.to_string())?;
                    let mv = mv_maps(g, &pu, e, k_max).map_err(|e| e.to_string())?;
                    if !mv.psi_pi_identity() {
                        return Err("Ψ∘π* ≠ id".into());
                    }
                    let left = mv
                        .base_complex
                        .cohomology_dims(k_max)
                        .map_err(|e| e.to_string())?;
                    let right = mv
                        .cech_complex
                        .cohomology_dims(k_max)
                        .map_err(|e| e.to_string())?;
                    if left == right {
                        Ok(())
                    } else {
                        Err(format!("{left:?} vs {right:?}"))
                    }
                }
                Coeff::Ruth(r) => {
                    let report = cech_compare(g, &Coefficients::Ruth(r), cover, k_max)
                        .map_err(|e| e.to_string())?;
                    if report.equal {
                        Ok(())
                    } else {
                        Err(format!("{:?} vs {:?}", report.left_dims, report.right_dims))
                    }
                }
            }
        });
        checks.push(summarize("Cech covers with Mayer-Vietoris section", outcomes));

        let gauges: Vec<_> = (0..MORITA_GAUGE).map(|_| gen.gauge_input()).collect();
        let outcomes = run_cases(opts.parallel, &gauges, |input| {
            let report = gauge_compare(
                &input.names,
                &input.table,
                &input.total,
                &input.act,
                &input.rho,
                input.dim,
                k_max,
            )
            .map_err(|e| e.to_string())?;
            if report.equal {
                Ok(())
            } else {
                Err(format!("{:?} vs {:?}", report.left_dims, report.right_dims))
            }
        });
        checks.push(summarize("gauge groupoids with associated bundles", outcomes));

        Ok(SuiteReport::new(self.name(), opts, checks))
    }
}

// ---------------------------------------------------------------------------
// appendix
// ---------------------------------------------------------------------------

struct AppendixSuite;

const APPENDIX_CASES: usize = 100;

impl Suite for AppendixSuite {
    fn name(&self) -> &'static str {
        "appendix"
    }
    fn summary(&self) -> &'static str {
        "division presentations reconstruct the groupoid; corruptions are rejected"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport, SuiteError> {
        let mut gen = RandGen::new(opts.seed);
        let groupoids: Vec<FiniteGroupoid> =
            (0..APPENDIX_CASES).map(|_| gen.groupoid()).collect();

        let outcomes = run_cases(opts.parallel, &groupoids, |g| {
            let data = to_division(g).to_data();
            let p = DivisionPresentation::from_data(&data).map_err(|e| e.to_string())?;
            p.check_axioms().map_err(|e| e.to_string())?;
            let rebuilt = p.to_groupoid().map_err(|e| e.to_string())?;
            if rebuilt == *g {
                Ok(())
            } else {
                Err("reconstruction differs from the original".into())
            }
        });
        let mut checks = vec![summarize("round-trips", outcomes)];

        let corrupted: Vec<(FiniteGroupoid, crate::division::DivisionData)> = groupoids
            .iter()
            .map(|g| {
                let data = to_division(g).to_data();
                (g.clone(), gen.corrupt_division(&data))
            })
            .collect();
        let outcomes = run_cases(opts.parallel, &corrupted, |(g, bad)| {
            let verdict = DivisionPresentation::from_data(bad)
                .and_then(|p| p.check_axioms().map(|_| p))
                .and_then(|p| p.to_groupoid());
            match verdict {
                Err(_) => Ok(()),
                Ok(rebuilt) if rebuilt != *g => Ok(()),
                Ok(_) => Err("corruption reconstructed the original groupoid".into()),
            }
        });
        checks.push(summarize("single-entry corruptions rejected or differ", outcomes));

        Ok(SuiteReport::new(self.name(), opts, checks))
    }
}

// ---------------------------------------------------------------------------
// dgmodule
// ---------------------------------------------------------------------------

struct DgModuleSuite;

const DG_PAIRS: usize = 200;

impl Suite for DgModuleSuite {
    fn name(&self) -> &'static str {
        "dgmodule"
    }
    fn summary(&self) -> &'static str {
        "module Leibniz rule for the cup action of scalar cochains"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport, SuiteError> {
        let builtins = builtin_examples()?;
        let reps: Vec<(String, FiniteGroupoid, Representation)> = builtins
            .into_iter()
            .filter_map(|(name, data)| match data.coefficients {
                Some(ExampleCoefficients::Rep(e)) => Some((name, data.groupoid, e)),
                _ => None,
            })
            .collect();

        struct Ctx {
            name: String,
            gpd: FiniteGroupoid,
            dims: Vec<usize>,
            scalar_dims: Vec<usize>,
            nerve: Nerve,
            d_e: Vec<SparseMat>,
            d_s: Vec<SparseMat>,
        }
        let contexts: Vec<Ctx> = reps
            .into_iter()
            .map(|(name, gpd, e)| {
                let cx_e = rep_complex(&gpd, &e, 3).expect("complex builds");
                let scalar = trivial_rep(&gpd, 1);
                let cx_s = rep_complex(&gpd, &scalar, 3).expect("complex builds");
                let nerve = Nerve::up_to(&gpd, 4);
                Ctx {
                    name,
                    gpd,
                    dims: e.dims,
                    scalar_dims: scalar.dims,
                    nerve,
                    d_e: (0..=3).map(|k| cx_e.differential(k).clone()).collect(),
                    d_s: (0..=3).map(|k| cx_s.differential(k).clone()).collect(),
                }
            })
            .collect();

        let mut gen = RandGen::new(opts.seed);
        struct Case {
            ctx: usize,
            p: usize,
            q: usize,
            u: Vec<Rat>,
            f: Vec<Rat>,
        }
        let cases: Vec<Case> = (0..DG_PAIRS)
            .map(|i| {
                let ctx = i % contexts.len();
                let c = &contexts[ctx];
                let p = i % 3;
                let q = (i / 3) % (4 - p).min(3);
                let u_dim =
                    degree_basis(&c.gpd, &c.nerve, &c.dims, p).total;
                let f_dim =
                    degree_basis(&c.gpd, &c.nerve, &c.scalar_dims, q).total;
                Case { ctx, p, q, u: gen.vector(u_dim), f: gen.vector(f_dim) }
            })
            .collect();

        let outcomes = run_cases(opts.parallel, &cases, |case| {
            let c = &contexts[case.ctx];
            let (p, q) = (case.p, case.q);
            let uf = cup_product(&c.gpd, &c.nerve, &c.dims, p, &case.u, q, &case.f);
            let lhs = c.d_e[p + q].mul_vec(&uf);
            let du = c.d_e[p].mul_vec(&case.u);
            let df = c.d_s[q].mul_vec(&case.f);
            let term1 = cup_product(&c.gpd, &c.nerve, &c.dims, p + 1, &du, q, &case.f);
            let term2 = cup_product(&c.gpd, &c.nerve, &c.dims, p, &case.u, q + 1, &df);
            let ok = lhs.iter().enumerate().all(|(i, x)| {
                let rhs = if p % 2 == 0 {
                    &term1[i] + &term2[i]
                } else {
                    &term1[i] - &term2[i]
                };
                *x == rhs
            });
            if ok {
                Ok(())
            } else {
                Err(format!("{} at degrees ({p},{q})", c.name))
            }
        });
        let checks = vec![summarize("Leibniz identity on random pairs", outcomes)];
        Ok(SuiteReport::new(self.name(), opts, checks))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lists_the_seven_suites() {
        let reg = SuiteRegistry::builtin();
        let names = reg.names();
        assert_eq!(
            names,
            vec!["vanish", "les-regular", "les-low", "cone", "morita", "appendix", "dgmodule"]
        );
        assert!(reg.get("vanish").is_some());
        assert!(reg.get("nope").is_none());
    }

    #[test]
    fn appendix_suite_passes() {
        let reg = SuiteRegistry::builtin();
        let report = reg.run("appendix", &SuiteOptions::default()).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.checks.len(), 2);
    }

    #[test]
    fn dgmodule_suite_passes() {
        let reg = SuiteRegistry::builtin();
        let report = reg.run("dgmodule", &SuiteOptions::default()).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn unknown_suite_is_an_error() {
        let reg = SuiteRegistry::builtin();
        assert!(matches!(
            reg.run("bogus", &SuiteOptions::default()),
            Err(SuiteError::Unknown(_))
        ));
    }
}
