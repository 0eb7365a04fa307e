//! Command-line front end: validates JSON inputs, computes cohomology
//! tables, runs the named verification suites, emits the built-in
//! examples, rebuilds groupoids from division presentations, and compares
//! cohomology along Čech covers.
//!
//! Exit codes: 0 when the command succeeds and every requested check
//! passes, 1 when an input fails validation or a check fails, 2 on I/O,
//! parse, or usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand};
use gpdcoh::cochain::{rep_complex, ruth_complex};
use gpdcoh::complex::ChainComplex;
use gpdcoh::division::{DivisionData, DivisionPresentation};
use gpdcoh::examples::{write_example, ExampleCoefficients, ExampleRegistry};
use gpdcoh::groupoid::{FiniteGroupoid, GroupoidData};
use gpdcoh::morita::{cech_compare, mv_maps, Coefficients, PartitionOfUnity};
use gpdcoh::rep::{
    rep_from_data, ruth_from_data, validate_rep, validate_ruth, RepData,
    Representation, Ruth2, RuthData,
};
use gpdcoh::suite::{SuiteOptions, SuiteRegistry, DEFAULT_SEED};
use serde::{Deserialize, Serialize};

const MAX_ARROWS_VAR: &str = "GPDCOH_MAX_ARROWS";
const DEFAULT_MAX_ARROWS: usize = 200;

#[derive(Parser)]
#[command(
    name = "gpdcoh",
    version,
    about = "Exact cohomology of finite groupoids over the rationals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a JSON input; the kind (groupoid, representation,
    /// two-term system, division presentation) is detected from its fields
    Validate {
        /// File to validate
        path: PathBuf,
        /// Groupoid the coefficients act over (required for
        /// representation and two-term inputs)
        #[arg(long)]
        groupoid: Option<PathBuf>,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Compute cohomology dimensions H^0 through H^max
    #[command(group(ArgGroup::new("input").required(true).args(["example", "groupoid"])))]
    Cohomology {
        /// Built-in example name (list them with `gpdcoh example --list`)
        #[arg(long, conflicts_with_all = ["groupoid", "rep", "ruth"])]
        example: Option<String>,
        /// Groupoid file
        #[arg(long)]
        groupoid: Option<PathBuf>,
        /// Representation coefficient file
        #[arg(long, requires = "groupoid", conflicts_with = "ruth")]
        rep: Option<PathBuf>,
        /// Two-term system coefficient file
        #[arg(long, requires = "groupoid")]
        ruth: Option<PathBuf>,
        /// Highest degree to report
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Run a named verification suite over the built-in corpus plus
    /// seeded random cases
    Suite {
        /// Suite name: vanish, les-regular, les-low, cone, morita,
        /// appendix, or dgmodule
        #[arg(long)]
        suite: String,
        /// Restrict to the built-in corpus and the seeded random cases
        /// (the only supported mode, so this flag is the default)
        #[arg(long)]
        builtin: bool,
        /// Seed for the random cases
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Highest degree the suite checks
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Run the suite cases on a thread pool
        #[arg(long)]
        parallel: bool,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Write a built-in example to canonical JSON files
    Example {
        /// Example name
        name: Option<String>,
        /// Directory to write into
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// List the available examples instead of writing one
        #[arg(long)]
        list: bool,
    },
    /// Rebuild a groupoid from a division-map presentation
    Reconstruct {
        /// Division presentation file
        path: PathBuf,
        /// Write the groupoid JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare cohomology of a groupoid with its Čech groupoid over a cover
    #[command(group(ArgGroup::new("coeff").required(true).args(["rep", "ruth"])))]
    Morita {
        /// Groupoid file
        #[arg(long)]
        groupoid: PathBuf,
        /// Representation coefficient file
        #[arg(long)]
        rep: Option<PathBuf>,
        /// Two-term system coefficient file
        #[arg(long)]
        ruth: Option<PathBuf>,
        /// JSON file holding the cover: an array of arrays of object ids
        #[arg(long)]
        cover: PathBuf,
        /// Highest degree to compare
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
}

/// Outcome of a validation step: usable value, or rejection with a
/// printable witness. Hard failures (I/O, parse) use `Err` instead and
/// exit with code 2.
type Verdict<T> = std::result::Result<T, String>;

/// Unwraps a [`Verdict`], printing the witness and exiting the command
/// with code 1 when the input was rejected.
macro_rules! accept {
    ($verdict:expr) => {
        match $verdict {
            Ok(value) => value,
            Err(witness) => return reject(&witness),
        }
    };
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<u8> {
    match Cli::parse().command {
        Command::Validate { path, groupoid, json } => {
            cmd_validate(&path, groupoid.as_deref(), json)
        }
        Command::Cohomology { example, groupoid, rep, ruth, max_degree, json } => {
            cmd_cohomology(example, groupoid, rep, ruth, max_degree, json)
        }
        Command::Suite { suite, builtin: _, seed, max_degree, parallel, json } => {
            cmd_suite(&suite, SuiteOptions { seed, max_degree, parallel }, json)
        }
        Command::Example { name, out, list } => cmd_example(name, &out, list),
        Command::Reconstruct { path, out } => cmd_reconstruct(&path, out.as_deref()),
        Command::Morita { groupoid, rep, ruth, cover, max_degree, json } => {
            cmd_morita(&groupoid, rep, ruth, &cover, max_degree, json)
        }
    }
}

fn reject(witness: &str) -> Result<u8> {
    eprintln!("invalid: {witness}");
    Ok(1)
}

fn plural(n: usize, noun: &str) -> String {
    if n == 1 {
        noun.to_string()
    } else {
        format!("{noun}s")
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn max_arrows_cap() -> Result<usize> {
    match std::env::var(MAX_ARROWS_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow!("{MAX_ARROWS_VAR} must be an integer, got `{v}`")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_ARROWS),
        Err(e) => Err(anyhow!("{MAX_ARROWS_VAR}: {e}")),
    }
}

fn arrow_cap_verdict(n_arrows: usize) -> Result<Verdict<()>> {
    let cap = max_arrows_cap()?;
    Ok(if n_arrows > cap {
        Err(format!("input has {n_arrows} arrows, above the {MAX_ARROWS_VAR} cap of {cap}"))
    } else {
        Ok(())
    })
}

fn load_groupoid(path: &Path) -> Result<Verdict<FiniteGroupoid>> {
    let data: GroupoidData = read_json(path)?;
    if let Err(w) = arrow_cap_verdict(data.arrows.len())? {
        return Ok(Err(w));
    }
    Ok(FiniteGroupoid::from_data(&data).map_err(|e| e.to_string()))
}

fn load_rep(gpd: &FiniteGroupoid, path: &Path) -> Result<Verdict<Representation>> {
    let data: RepData = read_json(path)?;
    Ok(rep_from_data(gpd, &data)
        .and_then(|e| validate_rep(gpd, &e).map(|()| e))
        .map_err(|e| e.to_string()))
}

fn load_ruth(gpd: &FiniteGroupoid, path: &Path) -> Result<Verdict<Ruth2>> {
    let data: RuthData = read_json(path)?;
    Ok(ruth_from_data(gpd, &data)
        .and_then(|r| validate_ruth(gpd, &r).map(|()| r))
        .map_err(|e| e.to_string()))
}

#[derive(Serialize, Deserialize)]
struct ValidationReport {
    schema: String,
    input: String,
    kind: String,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

fn cmd_validate(path: &Path, groupoid: Option<&Path>, json: bool) -> Result<u8> {
    let value: serde_json::Value = read_json(path)?;
    let fields = value
        .as_object()
        .ok_or_else(|| anyhow!("{}: expected a JSON object", path.display()))?;

    let over = |groupoid: Option<&Path>| -> Result<Verdict<FiniteGroupoid>> {
        let Some(gp) = groupoid else {
            bail!("coefficient inputs need --groupoid to validate against")
        };
        load_groupoid(gp)
    };

    let (kind, verdict): (&str, Verdict<()>) = if fields.contains_key("mbar") {
        let data: DivisionData = serde_json::from_value(value.clone())
            .with_context(|| format!("parsing {}", path.display()))?;
        let v = match arrow_cap_verdict(data.arrows.len())? {
            Err(w) => Err(w),
            Ok(()) => DivisionPresentation::from_data(&data)
                .and_then(|d| d.check_axioms())
                .map_err(|e| e.to_string()),
        };
        ("division presentation", v)
    } else if fields.contains_key("compose") {
        ("groupoid", load_groupoid(path)?.map(|_| ()))
    } else if fields.contains_key("E0") {
        let v = match over(groupoid)? {
            Err(w) => Err(w),
            Ok(g) => load_ruth(&g, path)?.map(|_| ()),
        };
        ("two-term system", v)
    } else if fields.contains_key("E") || fields.contains_key("action") {
        let v = match over(groupoid)? {
            Err(w) => Err(w),
            Ok(g) => load_rep(&g, path)?.map(|_| ()),
        };
        ("representation", v)
    } else {
        bail!(
            "{}: unrecognized input shape (expected groupoid, representation, \
             two-term, or division fields)",
            path.display()
        );
    };

    let report = ValidationReport {
        schema: "gpdcoh.validate/1".into(),
        input: path.display().to_string(),
        kind: kind.into(),
        valid: verdict.is_ok(),
        witness: verdict.as_ref().err().cloned(),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else if let Err(w) = &verdict {
        println!("{}: INVALID {kind} — {w}", path.display());
    } else {
        println!("{}: valid {kind}", path.display());
    }
    Ok(if report.valid { 0 } else { 1 })
}

#[derive(Serialize, Deserialize)]
struct CohomologyReport {
    schema: String,
    input: String,
    coefficients: String,
    max_degree: usize,
    dims: Vec<usize>,
    pass: bool,
    witnesses: Vec<String>,
}

fn cmd_cohomology(
    example: Option<String>,
    groupoid: Option<PathBuf>,
    rep: Option<PathBuf>,
    ruth: Option<PathBuf>,
    max_degree: usize,
    json: bool,
) -> Result<u8> {
    enum Coeff {
        Rep(Representation),
        Ruth(Ruth2),
    }
    let (input, g, coeff) = if let Some(name) = example {
        let data = ExampleRegistry::builtin().build(&name).map_err(|e| anyhow!("{e}"))?;
        let coeff = match data.coefficients {
            Some(ExampleCoefficients::Rep(e)) => Coeff::Rep(e),
            Some(ExampleCoefficients::Ruth(r)) => Coeff::Ruth(r),
            None => bail!("example `{name}` carries no coefficients"),
        };
        (format!("builtin example `{name}`"), data.groupoid, coeff)
    } else {
        let gp = groupoid.expect("clap guarantees the input group");
        let g = accept!(load_groupoid(&gp)?);
        let coeff = match (&rep, &ruth) {
            (Some(p), None) => Coeff::Rep(accept!(load_rep(&g, p)?)),
            (None, Some(p)) => Coeff::Ruth(accept!(load_ruth(&g, p)?)),
            _ => bail!("provide exactly one of --rep or --ruth"),
        };
        (gp.display().to_string(), g, coeff)
    };

    let (coefficients, cx): (String, ChainComplex) = match &coeff {
        Coeff::Rep(e) => (
            format!("representation (total fiber dimension {})", e.dims.iter().sum::<usize>()),
            rep_complex(&g, e, max_degree).map_err(|e| anyhow!("{e}"))?,
        ),
        Coeff::Ruth(r) => (
            format!(
                "two-term system (total fiber dimensions {}+{})",
                r.dims0.iter().sum::<usize>(),
                r.dims1.iter().sum::<usize>()
            ),
            ruth_complex(&g, r, max_degree).map_err(|e| anyhow!("{e}"))?,
        ),
    };
    let dims = cx.cohomology_dims(max_degree).map_err(|e| anyhow!("{e}"))?;

    let report = CohomologyReport {
        schema: "gpdcoh.cohomology/1".into(),
        input,
        coefficients,
        max_degree,
        dims,
        pass: true,
        witnesses: Vec::new(),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("input: {}", report.input);
        println!(
            "groupoid: {} {}, {} {}",
            g.n_objects(),
            plural(g.n_objects(), "object"),
            g.n_arrows(),
            plural(g.n_arrows(), "arrow")
        );
        println!("coefficients: {}", report.coefficients);
        println!("dims H^0..H^{}: {:?}", max_degree, report.dims);
    }
    Ok(0)
}

#[derive(Serialize)]
struct VersionedSuiteReport<T: Serialize> {
    schema: &'static str,
    #[serde(flatten)]
    report: T,
}

fn cmd_suite(name: &str, opts: SuiteOptions, json: bool) -> Result<u8> {
    let reg = SuiteRegistry::builtin();
    let report = reg.run(name, &opts).map_err(|e| {
        anyhow!("{e}; available suites: {}", reg.names().join(", "))
    })?;
    if json {
        let versioned = VersionedSuiteReport { schema: "gpdcoh.suite/1", report: &report };
        println!("{}", serde_json::to_string_pretty(&versioned)?);
    } else {
        println!(
            "suite `{}` (seed {}, max degree {})",
            report.suite, report.seed, report.max_degree
        );
        for check in &report.checks {
            let status = if check.pass { "ok  " } else { "FAIL" };
            match &check.detail {
                Some(d) => println!("  {status} {} — {d}", check.name),
                None => println!("  {status} {}", check.name),
            }
        }
        let failed = report.checks.iter().filter(|c| !c.pass).count();
        if report.pass {
            println!("all {} checks passed", report.checks.len());
        } else {
            println!("{failed} of {} checks failed", report.checks.len());
        }
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_example(name: Option<String>, out: &Path, list: bool) -> Result<u8> {
    let reg = ExampleRegistry::builtin();
    if list {
        for entry in reg.iter() {
            println!("{:<14} {}", entry.name(), entry.summary());
        }
        return Ok(0);
    }
    let name = name.ok_or_else(|| anyhow!("provide an example name, or --list"))?;
    let data = reg.build(&name).map_err(|e| anyhow!("{e}"))?;
    fs::create_dir_all(out)
        .with_context(|| format!("creating {}", out.display()))?;
    let files = write_example(&data, &name, out).map_err(|e| anyhow!("{e}"))?;
    println!("wrote {}", files.groupoid.display());
    if let Some(coeff) = files.coefficients {
        println!("wrote {}", coeff.display());
    }
    Ok(0)
}

fn cmd_reconstruct(path: &Path, out: Option<&Path>) -> Result<u8> {
    let data: DivisionData = read_json(path)?;
    accept!(arrow_cap_verdict(data.arrows.len())?);
    let rebuilt = DivisionPresentation::from_data(&data)
        .and_then(|div| {
            div.check_axioms()?;
            div.to_groupoid()
        })
        .map_err(|e| e.to_string());
    let g = accept!(rebuilt);
    let text = serde_json::to_string_pretty(&g.to_data())?;
    match out {
        Some(p) => {
            fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?;
            println!(
                "reconstructed groupoid ({} {}, {} {}) written to {}",
                g.n_objects(),
                plural(g.n_objects(), "object"),
                g.n_arrows(),
                plural(g.n_arrows(), "arrow"),
                p.display()
            );
        }
        None => println!("{text}"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct MoritaCliReport {
    schema: String,
    input: String,
    coefficients: String,
    cover_sets: usize,
    max_degree: usize,
    base_dims: Vec<usize>,
    cech_dims: Vec<usize>,
    dims_equal: bool,
    /// Whether the averaging map splits the pullback exactly (`Ψ∘π* = id`);
    /// only computed for representation coefficients.
    #[serde(skip_serializing_if = "Option::is_none")]
    averaging_splits_pullback: Option<bool>,
    pass: bool,
}

fn cmd_morita(
    groupoid: &Path,
    rep: Option<PathBuf>,
    ruth: Option<PathBuf>,
    cover_path: &Path,
    max_degree: usize,
    json: bool,
) -> Result<u8> {
    let g = accept!(load_groupoid(groupoid)?);
    let cover: Vec<Vec<String>> = read_json(cover_path)?;

    enum Coeff {
        Rep(Representation),
        Ruth(Ruth2),
    }
    let (coefficients, coeff) = match (&rep, &ruth) {
        (Some(p), None) => ("representation".to_string(), Coeff::Rep(accept!(load_rep(&g, p)?))),
        (None, Some(p)) => {
            ("two-term system".to_string(), Coeff::Ruth(accept!(load_ruth(&g, p)?)))
        }
        _ => bail!("provide exactly one of --rep or --ruth"),
    };

    let borrowed = match &coeff {
        Coeff::Rep(e) => Coefficients::Rep(e),
        Coeff::Ruth(r) => Coefficients::Ruth(r),
    };
    let compared = match cech_compare(&g, &borrowed, &cover, max_degree) {
        Ok(r) => r,
        Err(e) => return reject(&e.to_string()),
    };
    let averaging = match &coeff {
        Coeff::Rep(e) => {
            let pu = match PartitionOfUnity::auto(&g, &cover) {
                Ok(pu) => pu,
                Err(e) => return reject(&e.to_string()),
            };
            match mv_maps(&g, &pu, e, max_degree) {
                Ok(maps) => Some(maps.psi_pi_identity()),
                Err(e) => return reject(&e.to_string()),
            }
        }
        Coeff::Ruth(_) => None,
    };

    let report = MoritaCliReport {
        schema: "gpdcoh.morita/1".into(),
        input: groupoid.display().to_string(),
        coefficients,
        cover_sets: cover.len(),
        max_degree,
        base_dims: compared.left_dims,
        cech_dims: compared.right_dims,
        dims_equal: compared.equal,
        averaging_splits_pullback: averaging,
        pass: compared.equal && averaging != Some(false),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("input: {} with a {}-set cover", report.input, report.cover_sets);
        println!("coefficients: {}", report.coefficients);
        println!("base dims H^0..H^{}: {:?}", max_degree, report.base_dims);
        println!("Čech dims H^0..H^{}: {:?}", max_degree, report.cech_dims);
        if let Some(split) = report.averaging_splits_pullback {
            println!("averaging splits pullback: {split}");
        }
        println!("{}", if report.pass { "PASS" } else { "FAIL" });
    }
    Ok(if report.pass { 0 } else { 1 })
}
