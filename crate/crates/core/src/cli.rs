//! The `prr` command line.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::belldiag::{random_search, SearchConfig};
use crate::bounds::{
    alpha_iid_report, canonical_formula, gap_report, iid_entropy_bound, iid_norm_report, mi_form_bound,
    ppt_repeater_bound, ppt_transposed_rate_bound, purity_form_bound, BoundReport, FORMULAS,
};
use crate::clodcc::{apply, load_script, swap_circuit, ProtocolCircuit};
use crate::densop::{DensityOperator, Party};
use crate::entropic::von_neumann_entropy;
use crate::error::{Error, Result};
use crate::format::{json_f64, round_json};
use crate::statespec::StateSpec;
use crate::verify::{run_suite, SUITES};
use crate::werner::{critical_dimension, default_alpha_grid, werner_scan, write_dcri_csv, write_scan_csv, DEFAULT_D_MAX};

pub const BUILTIN_SWAP: &str = "builtin:swap";

#[derive(Parser, Debug)]
#[command(name = "prr", version, about = "Private randomness repeater numerics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Werner mutual informations over an (alpha, d) grid, with critical dimensions.
    WernerScan(WernerScanArgs),
    /// Seeded random search for gap instances among Bell-diagonal states.
    BellSearch(BellSearchArgs),
    /// Evaluate one bound on a state.
    Bound(BoundArgs),
    /// Run property suites.
    Verify(VerifyArgs),
    /// Run a protocol script on a state.
    Protocol(ProtocolArgs),
}

#[derive(Args, Debug, Serialize)]
struct WernerScanArgs {
    /// Comma-separated alphas in (0, 1]; default 0.1, 0.15, ..., 1.0.
    #[arg(long, value_delimiter = ',')]
    alpha_list: Option<Vec<f64>>,
    #[arg(long, default_value_t = 2)]
    d_min: usize,
    #[arg(long, default_value_t = DEFAULT_D_MAX)]
    d_max: usize,
    /// CSV path; `<out>.dcri.csv` and `<out>.manifest.json` are written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct BellSearchArgs {
    #[arg(long, default_value_t = 500_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    separable_only: bool,
    /// Include wall-clock time; the report is then no longer byte-stable.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    state: String,
    /// Second input where the bound takes two; defaults to `--state`.
    #[arg(long)]
    state_tilde: Option<String>,
    #[arg(long)]
    formula: String,
    /// Local dimension for iid-entropy; defaults to the largest register.
    #[arg(long)]
    local_dim: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ProtocolArgs {
    /// Script path, or `builtin:swap`.
    #[arg(long)]
    script: String,
    /// Input state; defaults to `swap-input`.
    #[arg(long)]
    state: Option<String>,
    /// Record Eve's copies of transmitted registers.
    #[arg(long)]
    eve: bool,
    /// Target state for the fidelity of the `--keep` marginal.
    #[arg(long)]
    target: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "A,B")]
    keep: Vec<String>,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub outputs: Vec<String>,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("I/O error: {e}"))
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Entry point used by the binary.
pub fn main_from_env() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&args, &mut stdout.lock(), &mut stderr.lock())
}

fn configure_threads() {
    if let Some(n) = std::env::var("THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool may already exist when called from tests
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn run<S: AsRef<str>>(args: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args.iter().map(|s| s.as_ref())) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    configure_threads();
    let result = match cli.command {
        Command::WernerScan(a) => cmd_werner_scan(&a, out),
        Command::BellSearch(a) => cmd_bell_search(&a, out),
        Command::Bound(a) => cmd_bound(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Protocol(a) => cmd_protocol(&a, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "{msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_manifest(path: &Path, manifest: &RunManifest) -> Outcome {
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    fs::write(sibling(path, ".manifest.json"), text + "\n")?;
    Ok(())
}

fn manifest(command: &str, parameters: Value, seed: Option<u64>, outputs: Vec<&Path>) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        parameters: round_json(parameters),
        seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    }
}

fn cmd_werner_scan(a: &WernerScanArgs, out: &mut dyn Write) -> Outcome {
    let alphas = a.alpha_list.clone().unwrap_or_else(default_alpha_grid);
    if alphas.is_empty() {
        return Err(Failure::Usage("--alpha-list is empty".into()));
    }
    if let Some(bad) = alphas.iter().find(|&&x| !(x > 0.0 && x <= 1.0)) {
        return Err(Failure::Usage(format!("alpha {bad} outside (0, 1]")));
    }
    let rows = werner_scan(&alphas, a.d_min, a.d_max)?;
    let mut sorted = alphas.clone();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let dcri = sorted
        .iter()
        .map(|&x| critical_dimension(x, a.d_max))
        .collect::<Result<Vec<_>>>()?;
    match &a.out {
        Some(path) => {
            let dcri_path = sibling(path, ".dcri.csv");
            write_scan_csv(&rows, fs::File::create(path)?)?;
            write_dcri_csv(&dcri, fs::File::create(&dcri_path)?)?;
            write_manifest(
                path,
                &manifest(
                    "werner-scan",
                    json!({"alpha_list": sorted, "d_min": a.d_min, "d_max": a.d_max}),
                    None,
                    vec![path, &dcri_path],
                ),
            )?;
            write_dcri_csv(&dcri, &mut *out)?;
        }
        None => write_scan_csv(&rows, &mut *out)?,
    }
    Ok(())
}

fn cmd_bell_search(a: &BellSearchArgs, out: &mut dyn Write) -> Outcome {
    let cfg = SearchConfig::new(a.samples, a.seed, a.separable_only)?;
    let start = Instant::now();
    let mut report = random_search(&cfg);
    if a.timing {
        report.runtime_ms = Some(start.elapsed().as_millis());
    }
    let text = serde_json::to_string_pretty(&report.to_json()).expect("report serializes") + "\n";
    match &a.out {
        Some(path) => {
            fs::write(path, &text)?;
            let params = json!({"samples": a.samples, "separable_only": a.separable_only, "timing": a.timing});
            write_manifest(path, &manifest("bell-search", params, Some(a.seed), vec![path]))?;
            writeln!(out, "violations: {}", report.violations.len())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_spec(s: &str) -> std::result::Result<StateSpec, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(format!("bad state spec `{s}`: {e}")))
}

fn evaluate_bound(id: &str, spec: &StateSpec, tilde: Option<&StateSpec>, local_dim: Option<usize>) -> Result<BoundReport> {
    if id == "alpha-iid" {
        let d = spec
            .alpha_v_dim()
            .ok_or_else(|| Error::InvalidParameter("alpha-iid needs an alphaV:<d> state".into()))?;
        return Ok(alpha_iid_report(d));
    }
    let rho = spec.build()?;
    let rho_tilde = match tilde {
        Some(t) => t.build()?,
        None => rho.clone(),
    };
    match id {
        "ppt-repeater" => ppt_repeater_bound(&rho, &rho_tilde),
        "purity-form" => purity_form_bound(&rho, &rho_tilde),
        "mi-form" => mi_form_bound(&rho),
        "transposed-rate" => ppt_transposed_rate_bound(&rho, &rho_tilde),
        "iid-norm" => iid_norm_report(&rho, &rho_tilde),
        "iid-entropy" => {
            let d = local_dim.unwrap_or_else(|| rho.layout().dims().into_iter().max().unwrap_or(1));
            iid_entropy_bound(&rho, d)
        }
        "gap" => gap_report(&rho),
        other => unreachable!("canonical formula {other} has no evaluator"),
    }
}

fn cmd_bound(a: &BoundArgs, out: &mut dyn Write) -> Outcome {
    let Some(id) = canonical_formula(&a.formula) else {
        let known: Vec<&str> = FORMULAS.to_vec();
        return Err(Failure::Usage(format!(
            "unknown formula `{}`; known: {}",
            a.formula,
            known.join(", ")
        )));
    };
    let spec = parse_spec(&a.state)?;
    let tilde = a.state_tilde.as_deref().map(parse_spec).transpose()?;
    let value = match evaluate_bound(id, &spec, tilde.as_ref(), a.local_dim) {
        Ok(r) => {
            let mut v = r.to_json();
            v["state"] = json!(spec.to_string());
            v
        }
        Err(Error::Hypothesis(msg)) => json!({
            "formula_id": id,
            "state": spec.to_string(),
            "value": Value::Null,
            "applicable": false,
            "error": msg,
        }),
        Err(e) => return Err(e.into()),
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json"))?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    if a.suite != "all" && !SUITES.contains(&a.suite.as_str()) {
        return Err(Failure::Usage(format!(
            "unknown suite `{}`; known: all, {}",
            a.suite,
            SUITES.join(", ")
        )));
    }
    let checks = run_suite(&a.suite, a.seed)?;
    for c in &checks {
        writeln!(out, "{}", c.line())?;
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    writeln!(out, "{} passed, {} failed", checks.len() - failed, failed)?;
    if failed > 0 {
        return Err(Failure::Check(format!("{failed} check(s) failed")));
    }
    Ok(())
}

fn load_circuit(script: &str, rho: &DensityOperator, eve: bool) -> Result<ProtocolCircuit> {
    let mut c = if script == BUILTIN_SWAP {
        let c = swap_circuit(true);
        if c.layout.dims() != rho.layout().dims() || c.layout.labels() != rho.layout().labels() {
            return Err(Error::DimensionMismatch(format!(
                "builtin swap needs registers {:?} with dims {:?}",
                c.layout.labels(),
                c.layout.dims()
            )));
        }
        c
    } else {
        load_script(Path::new(script), rho.layout())?
    };
    c.record_eve = eve;
    Ok(c)
}

fn party_summary(state: &DensityOperator) -> Result<BTreeMap<String, Value>> {
    let mut parties = BTreeMap::new();
    for p in [Party::A, Party::B, Party::C] {
        let regs = state.layout().owned_by(p);
        if regs.is_empty() {
            continue;
        }
        let m = state.marginal(&regs)?;
        parties.insert(
            p.to_string(),
            json!({"registers": regs, "entropy": json_f64(von_neumann_entropy(&m)?)}),
        );
    }
    Ok(parties)
}

fn cmd_protocol(a: &ProtocolArgs, out: &mut dyn Write) -> Outcome {
    let spec = parse_spec(a.state.as_deref().unwrap_or("swap-input"))?;
    let rho = spec.build()?;
    let circuit = load_circuit(&a.script, &rho, a.eve)?;
    let outcome = apply(&circuit, &rho)?;
    let state = &outcome.state;
    let mut v = json!({
        "state": spec.to_string(),
        "script": a.script,
        "steps": circuit.len(),
        "registers": state.layout().labels(),
        "owners": state.layout().registers().iter().map(|r| r.party.to_string()).collect::<Vec<_>>(),
        "entropy": json_f64(von_neumann_entropy(state)?),
        "parties": party_summary(state)?,
    });
    if circuit.len() == 0 {
        v["note"] = json!("empty script: input summary");
    }
    let keep = state.marginal(&a.keep)?;
    v["kept"] = json!({"registers": a.keep, "entropy": json_f64(von_neumann_entropy(&keep)?)});
    if let Some(t) = &a.target {
        let target = parse_spec(t)?.build()?;
        let target = target.relabel(keep.layout().clone())?;
        v["target"] = json!(t);
        v["fidelity"] = json_f64(keep.fidelity(&target)?);
    }
    if let Some(eve) = &outcome.eve {
        v["eve"] = json!({"sends": eve.sends.len(), "entropy": json_f64(eve.entropy())});
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
    Ok(())
}
