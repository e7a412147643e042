//! Command-line front end: argument parsing, the structure-constant cache and
//! the human-readable and JSON reports of each verb.

use crate::center::{decompose, CenterError, CenterOptions, DEFAULT_SEED};
use crate::cuntz::verify_cuntz_identities;
use crate::ghdata::{preset, DataError, Extension, GHData, PRESET_NAMES};
use crate::modular::{
    assemble, check_axioms, check_factorization, compare_reference, grading_counts, reference,
    reference_factors, verlinde, AxiomReport, Comparison, Fusion, MatchOptions, ModularData,
    ModularDataFile, ModularError,
};
use crate::numerics::{Precision, COMPARISON_TOL};
use crate::structured::{run_structured, StructuredError};
use crate::tube::{check_closed_forms, StructureTable, Tube, TubeError};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

/// Tolerance of the modular axioms.
pub const AXIOM_TOL: f64 = 1e-8;
/// Tolerance of the closed-form lemma families.
pub const LEMMA_TOL: f64 = 1e-9;
/// Tolerance of the Cuntz identities.
pub const CUNTZ_TOL: f64 = 1e-10;
/// Distance of a Verlinde value from an integer still accepted.
pub const FUSION_TOL: f64 = 1e-6;

/// Environment variable naming the structure-constant cache directory.
pub const CACHE_ENV: &str = "TUBEKIT_CACHE_DIR";

/// Reference tables that have no computable preset.
pub const REFERENCE_ONLY: [&str; 1] = ["z8"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Tube(#[from] TubeError),
    #[error(transparent)]
    Center(#[from] CenterError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Structured(#[from] StructuredError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

impl CliError {
    /// 2 for problems with the invocation or its inputs, 1 for mathematical
    /// failures surfacing as errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Center(_) | CliError::Structured(_) => 1,
            CliError::Modular(ModularError::NonIntegral { .. }) => 1,
            CliError::Modular(ModularError::Malformed(_)) => 2,
            CliError::Modular(_) | CliError::Tube(_) => 1,
            CliError::Usage(_) | CliError::Data(_) | CliError::Io { .. } | CliError::Json { .. } => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    Standard,
    Compensated,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Standard => Precision::Standard,
            PrecisionArg::Compensated => Precision::Compensated,
        }
    }
}

/// Quantum doubles of generalized Haagerup categories.
#[derive(Debug, Parser)]
#[command(name = "tubekit", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the main result to this file.
    #[arg(short = 'o', long = "out", global = true)]
    pub out: Option<PathBuf>,
    /// Matching tolerance for reference comparisons.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed of the random central probe.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Ignore and do not write the structure-constant cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Summation mode for long reductions.
    #[arg(long, global = true, value_enum, default_value = "standard")]
    pub precision: PrecisionArg,
    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in presets.
    ListPresets,
    /// Compute the modular data of the double of a preset or JSON input.
    Double {
        /// Preset name or path to a category JSON file.
        input: String,
    },
    /// Compare a preset's double against its embedded reference table.
    Verify { preset: String },
    /// Run the Cuntz, closed-form and structured verification suites.
    Check {
        /// Preset name or path to a category JSON file.
        input: String,
    },
    /// Fusion rules of a modular data JSON file via the Verlinde formula.
    Fusion { path: PathBuf },
}

/// Settings shared by every verb.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub out: Option<PathBuf>,
    pub tol: f64,
    pub seed: u64,
    pub precision: Precision,
    pub cache_dir: Option<PathBuf>,
    pub json: bool,
    pub verbose: bool,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let tol = cli.tol.unwrap_or(COMPARISON_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
        }
        let cache_dir = if cli.no_cache {
            None
        } else {
            std::env::var_os(CACHE_ENV).map(PathBuf::from)
        };
        Ok(RunConfig {
            out: cli.out.clone(),
            tol,
            seed: cli.seed,
            precision: cli.precision.into(),
            cache_dir,
            json: cli.json,
            verbose: cli.verbose,
        })
    }

    fn center_options(&self) -> CenterOptions {
        CenterOptions {
            seed: self.seed,
            precision: self.precision,
            ..CenterOptions::default()
        }
    }

    fn log(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }
}

/// Parse the arguments, run the verb and map the outcome to an exit code.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Run one verb; returns 0 on success and 1 on a mathematical failure.
pub fn run(cli: &Cli) -> Result<u8> {
    let cfg = RunConfig::from_cli(cli)?;
    match &cli.command {
        Command::ListPresets => cmd_list_presets(&cfg),
        Command::Double { input } => cmd_double(&cfg, input),
        Command::Verify { preset } => cmd_verify(&cfg, preset),
        Command::Check { input } => cmd_check(&cfg, input),
        Command::Fusion { path } => cmd_fusion(&cfg, path),
    }
}

// ---------------------------------------------------------------------------
// Inputs and cache

/// A category to double, resolved from a preset name or a JSON file.
pub struct Input {
    pub name: String,
    pub preset: Option<String>,
    pub data: GHData,
    pub extension: Extension,
    /// Bytes identifying the input for the cache key.
    fingerprint: Vec<u8>,
}

pub fn resolve_input(spec: &str) -> Result<Input> {
    if PRESET_NAMES.contains(&spec) {
        let p = preset(spec)?;
        return Ok(Input {
            name: p.name.clone(),
            preset: Some(spec.to_string()),
            data: p.data,
            extension: p.extension,
            fingerprint: format!("preset:{spec}").into_bytes(),
        });
    }
    if REFERENCE_ONLY.contains(&spec) {
        return Err(CliError::Usage(format!(
            "'{spec}' is a reference-only table and has no computable preset"
        )));
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(DataError::UnknownPreset(spec.to_string()).into());
    }
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let (data, extension) = GHData::from_json(&text)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    Ok(Input {
        name,
        preset: None,
        data,
        extension,
        fingerprint: text.into_bytes(),
    })
}

fn cache_path(dir: &Path, input: &Input, tube: &Tube) -> PathBuf {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.update(input.extension.kind().as_bytes());
    h.update((tube.len() as u64).to_le_bytes());
    h.update(&input.fingerprint);
    let hex = h.finalize().iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    });
    dir.join(format!("{}-{}.json", input.name, &hex[..16]))
}

fn load_cache(cfg: &RunConfig, input: &Input, tube: &Tube) {
    let Some(dir) = &cfg.cache_dir else { return };
    let path = cache_path(dir, input, tube);
    let Ok(text) = std::fs::read_to_string(&path) else {
        return;
    };
    match serde_json::from_str::<StructureTable>(&text)
        .map_err(|e| e.to_string())
        .and_then(|t| tube.import_structure(&t).map_err(|e| e.to_string()))
    {
        Ok(()) => cfg.log(format!("loaded structure constants from {}", path.display())),
        Err(e) => cfg.log(format!("ignoring cache {}: {e}", path.display())),
    }
}

fn store_cache(cfg: &RunConfig, input: &Input, tube: &Tube) {
    let Some(dir) = &cfg.cache_dir else { return };
    let path = cache_path(dir, input, tube);
    let result = std::fs::create_dir_all(dir).and_then(|()| {
        let text = serde_json::to_string(&tube.export_structure()).map_err(std::io::Error::other)?;
        std::fs::write(&path, text)
    });
    match result {
        Ok(()) => cfg.log(format!("wrote structure constants to {}", path.display())),
        Err(e) => eprintln!("warning: could not write cache {}: {e}", path.display()),
    }
}

/// The double of one input, with everything the verbs report on.
pub struct Doubled {
    pub tube: Tube,
    pub md: ModularData,
    pub axioms: AxiomReport,
    pub fusion: std::result::Result<Fusion, ModularError>,
}

fn compute_double(cfg: &RunConfig, input: &Input) -> Result<Doubled> {
    let t0 = std::time::Instant::now();
    let tube = Tube::new(&input.data, &input.extension)?;
    cfg.log(format!("{}: tube basis of {} labels", input.name, tube.len()));
    load_cache(cfg, input, &tube);
    let md = {
        let (dec, diag) = decompose(&tube, &cfg.center_options())?;
        cfg.log(format!("center of dimension {}", dec.center_dim));
        assemble(&input.name, &diag, &dec)?
    };
    store_cache(cfg, input, &tube);
    cfg.log(format!("double computed in {:.2?}", t0.elapsed()));
    let axioms = check_axioms(&md);
    let fusion = verlinde(&md, FUSION_TOL);
    Ok(Doubled {
        tube,
        md,
        axioms,
        fusion,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    std::fs::write(path, text + "\n").map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

// ---------------------------------------------------------------------------
// Verbs

pub fn cmd_list_presets(cfg: &RunConfig) -> Result<u8> {
    let mut rows = Vec::new();
    for name in PRESET_NAMES {
        let p = preset(name)?;
        rows.push(json!({
            "name": name,
            "kind": p.extension.kind(),
            "group": p.data.group.to_string(),
            "global_dimension": p.global_dimension(),
            "computable": true,
        }));
    }
    for name in REFERENCE_ONLY {
        rows.push(json!({ "name": name, "kind": "reference-only", "computable": false }));
    }
    if cfg.json {
        print_json(&rows);
    } else {
        for r in &rows {
            let extra = match r["group"].as_str() {
                Some(g) => format!(
                    "{:<18} G = {g}, global dimension {:.6}",
                    r["kind"].as_str().unwrap_or(""),
                    r["global_dimension"].as_f64().unwrap_or(0.0)
                ),
                None => "reference-only (data, no pipeline)".to_string(),
            };
            println!("{:<16} {extra}", r["name"].as_str().unwrap_or(""));
        }
    }
    Ok(0)
}

fn twist_text(md: &ModularData, i: usize) -> String {
    match md.t_snap[i] {
        Some(r) => format!("exp(2 pi i {r})"),
        None => format!("{:.10}{:+.10}i (unsnapped)", md.t[i].re, md.t[i].im),
    }
}

fn axiom_lines(ax: &AxiomReport) -> String {
    let failures = ax.failures(AXIOM_TOL);
    if failures.is_empty() {
        format!(
            "modular axioms: PASS (unitarity {:.1e}, symmetry {:.1e}, (ST)^3 = S^2 {:.1e})",
            ax.unitarity, ax.symmetry, ax.st_cubed
        )
    } else {
        let list: Vec<String> = failures
            .iter()
            .map(|(n, v)| format!("{n} {v:.3e}"))
            .collect();
        format!("modular axioms: FAIL ({})", list.join(", "))
    }
}

pub fn cmd_double(cfg: &RunConfig, spec: &str) -> Result<u8> {
    let input = resolve_input(spec)?;
    let d = compute_double(cfg, &input)?;
    let ok = d.axioms.passes(AXIOM_TOL) && d.fusion.is_ok();
    let mut file = d.md.to_file(d.fusion.as_ref().ok());
    file.status = Some(if ok { "computed" } else { "failed-checks" }.to_string());
    if let Some(out) = &cfg.out {
        write_json(out, &file)?;
    }
    if cfg.json && cfg.out.is_none() {
        print_json(&file);
    } else {
        print!("{}", double_summary(&d));
    }
    if let Err(e) = &d.fusion {
        eprintln!("fusion: {e}");
    }
    Ok(if ok { 0 } else { 1 })
}

fn double_summary(d: &Doubled) -> String {
    let md = &d.md;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}: rank {}, global dimension {:.10}, tube basis {} labels",
        md.name,
        md.rank(),
        md.global_dimension,
        d.tube.len()
    );
    let grades = grading_counts(md);
    if grades.len() > 1 {
        let g: Vec<String> = grades.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "grading: {}", g.join("/"));
    }
    let _ = writeln!(s, "{}", axiom_lines(&d.axioms));
    match &d.fusion {
        Ok(f) => {
            let _ = writeln!(
                s,
                "fusion rules: integral to {:.1e}, largest coefficient {}",
                f.integrality,
                f.max_coefficient()
            );
        }
        Err(e) => {
            let _ = writeln!(s, "fusion rules: FAIL ({e})");
        }
    }
    for (i, o) in md.objects.iter().enumerate() {
        let mult: Vec<String> = o
            .multiplicities
            .iter()
            .map(|(k, v)| if *v == 1 { k.clone() } else { format!("{v}*{k}") })
            .collect();
        let _ = writeln!(
            s,
            "  {:>3}  d = {:<12.6}  theta = {:<28}  {}",
            i,
            o.qdim,
            twist_text(md, i),
            mult.join(" + ")
        );
    }
    s
}

/// Outcome of `verify`.
#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub preset: String,
    pub rank: usize,
    pub tolerance: f64,
    pub axioms_pass: bool,
    pub fusion_pass: bool,
    pub comparison: Comparison,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization: Option<crate::modular::FactorizationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grading: Option<Vec<usize>>,
    pub pass: bool,
}

/// Expected sizes of the graded components, where the reference states them.
fn expected_grading(name: &str) -> Option<Vec<usize>> {
    match name {
        "fourfourfourtwo" => Some(vec![24, 12, 12]),
        _ => None,
    }
}

pub fn verify_double(name: &str, md: &ModularData, tol: f64) -> Result<VerifyReport> {
    let reference = reference(name)?;
    let opts = MatchOptions {
        tol,
        ..MatchOptions::default()
    };
    let comparison = compare_reference(md, &reference, &opts);
    let factorization = reference_factors(name)?.map(|f| check_factorization(md, &f, &opts));
    let grading = expected_grading(name).map(|_| grading_counts(md));
    let axioms_pass = check_axioms(md).passes(AXIOM_TOL);
    let fusion_pass = verlinde(md, FUSION_TOL).is_ok();
    let pass = comparison.matched
        && axioms_pass
        && fusion_pass
        && factorization.as_ref().is_none_or(|f| f.passes(tol))
        && grading == expected_grading(name);
    Ok(VerifyReport {
        preset: name.to_string(),
        rank: md.rank(),
        tolerance: tol,
        axioms_pass,
        fusion_pass,
        comparison,
        factorization,
        grading,
        pass,
    })
}

pub fn cmd_verify(cfg: &RunConfig, name: &str) -> Result<u8> {
    if !PRESET_NAMES.contains(&name) {
        return Err(if REFERENCE_ONLY.contains(&name) {
            CliError::Usage(format!("'{name}' is reference-only; nothing to verify"))
        } else {
            DataError::UnknownPreset(name.to_string()).into()
        });
    }
    let input = resolve_input(name)?;
    let d = compute_double(cfg, &input)?;
    let report = verify_double(name, &d.md, cfg.tol)?;
    if let Some(out) = &cfg.out {
        write_json(out, &report)?;
    }
    if cfg.json {
        print_json(&report);
    } else {
        print!("{}", verify_text(&report));
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn verify_text(r: &VerifyReport) -> String {
    let mut s = String::new();
    let c = &r.comparison;
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    let _ = writeln!(s, "{}: {verdict} at tolerance {:e}", r.preset, r.tolerance);
    let _ = writeln!(
        s,
        "  reference match: {} (max|dS| = {:.3e}, max|dT| = {:.3e}, {}/{} objects placed{})",
        if c.matched { "yes" } else { "no" },
        c.max_ds,
        c.max_dt,
        c.assigned,
        r.rank,
        if c.conjugated { ", complex conjugated" } else { "" }
    );
    if !c.matched && c.assigned == r.rank {
        let _ = writeln!(
            s,
            "  deviations exceed the tolerance {:e}; loosen --tol to accept them",
            r.tolerance
        );
    }
    let _ = writeln!(
        s,
        "  modular axioms: {}   Verlinde integrality: {}",
        if r.axioms_pass { "pass" } else { "FAIL" },
        if r.fusion_pass { "pass" } else { "FAIL" }
    );
    if let Some(f) = &r.factorization {
        let _ = writeln!(
            s,
            "  factorization S = S_a (x) S_b, T = T_a (x) T_b: {} (max|dS| = {:.3e}, max|dT| = {:.3e}, factor axioms {:.1e})",
            if f.passes(r.tolerance) { "confirmed" } else { "FAILED" },
            f.comparison.max_ds,
            f.comparison.max_dt,
            f.factor_defect
        );
    }
    if let Some(g) = &r.grading {
        let text: Vec<String> = g.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "  grading by Z/{}: {}", g.len(), text.join("/"));
    }
    let perm: Vec<String> = c
        .permutation
        .iter()
        .map(|&p| {
            if p == usize::MAX {
                "-".to_string()
            } else {
                p.to_string()
            }
        })
        .collect();
    let _ = writeln!(s, "  reference -> computed: [{}]", perm.join(", "));
    s
}

/// One line of the `check` report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub suite: String,
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Cuntz identities, closed-form lemma families, the decomposition's own
/// checks and (for presets) the structured tables.
pub fn check_suite(cfg: &RunConfig, input: &Input) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    let tube = Tube::new(&input.data, &input.extension)?;
    for c in verify_cuntz_identities(&input.data, tube.algebra()) {
        lines.push(CheckLine {
            suite: "cuntz identities".into(),
            name: c.name.to_string(),
            value: c.max_deviation,
            tolerance: CUNTZ_TOL,
            pass: c.max_deviation < CUNTZ_TOL,
            note: None,
        });
    }
    for f in check_closed_forms(&tube)? {
        lines.push(CheckLine {
            suite: "closed-form products".into(),
            name: format!("{} ({} cases)", f.family, f.cases),
            value: f.max_deviation,
            tolerance: LEMMA_TOL,
            pass: f.passes(LEMMA_TOL),
            note: f.correction.map(str::to_string),
        });
    }
    load_cache(cfg, input, &tube);
    let (dec, _diag) = decompose(&tube, &cfg.center_options())?;
    store_cache(cfg, input, &tube);
    let ch = &dec.checks;
    for (name, v) in [
        ("idempotent", ch.idempotent),
        ("self-adjoint", ch.self_adjoint),
        ("orthogonal", ch.orthogonality),
        ("central", ch.centrality),
        ("sum to one", ch.sum_to_one),
        ("t eigenvector", ch.t_eigen_residual),
    ] {
        lines.push(CheckLine {
            suite: "minimal central projections".into(),
            name: name.into(),
            value: v,
            tolerance: LEMMA_TOL,
            pass: v < LEMMA_TOL,
            note: None,
        });
    }
    if let Some(name) = &input.preset {
        for c in run_structured(name, &tube, Some(&dec))? {
            let pass = c.passes();
            lines.push(CheckLine {
                suite: c.family.clone(),
                name: c.name.clone(),
                value: c.value,
                tolerance: c.tolerance,
                pass,
                note: c.correction.map(str::to_string),
            });
        }
    }
    Ok(lines)
}

pub fn cmd_check(cfg: &RunConfig, spec: &str) -> Result<u8> {
    let input = resolve_input(spec)?;
    let lines = check_suite(cfg, &input)?;
    let failed = lines.iter().filter(|l| !l.pass).count();
    if let Some(out) = &cfg.out {
        write_json(out, &lines)?;
    }
    if cfg.json {
        print_json(&lines);
    } else {
        let mut suite = "";
        for l in &lines {
            if l.suite != suite {
                suite = &l.suite;
                println!("{suite}");
            }
            let mark = if l.pass { "ok  " } else { "FAIL" };
            println!("  {mark} {:<66} {:.3e}", l.name, l.value);
            if let Some(n) = &l.note {
                println!("       reading: {n}");
            }
        }
        println!(
            "{}: {} checks, {} failed",
            input.name,
            lines.len(),
            failed
        );
    }
    Ok(if failed == 0 { 0 } else { 1 })
}

pub fn cmd_fusion(cfg: &RunConfig, path: &Path) -> Result<u8> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: ModularDataFile = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    let md = ModularData::from_file(&file)?;
    let fusion = verlinde(&md, FUSION_TOL)?;
    let rank = md.rank();
    let sparse = fusion.sparse();
    let body = if cfg.json {
        serde_json::to_string_pretty(&json!({
            "rank": rank,
            "integrality": fusion.integrality,
            "max_coefficient": fusion.max_coefficient(),
            "fusion": sparse,
        }))
        .expect("fusion serializes")
            + "\n"
    } else {
        let mut s = String::from("i,j,k,N\n");
        for [i, j, k, n] in &sparse {
            let _ = writeln!(s, "{i},{j},{k},{n}");
        }
        s
    };
    match &cfg.out {
        Some(out) => std::fs::write(out, &body).map_err(|source| CliError::Io {
            path: out.clone(),
            source,
        })?,
        None => print!("{body}"),
    }
    let assoc = fusion.associativity_failures();
    let unit = fusion.unit_defect();
    eprintln!(
        "rank {rank}: {} nonzero coefficients, largest {}, integral to {:.1e}, unit defect {unit}, associativity failures {assoc}",
        sparse.len(),
        fusion.max_coefficient(),
        fusion.integrality
    );
    Ok(if assoc == 0 && unit == 0 { 0 } else { 1 })
}
