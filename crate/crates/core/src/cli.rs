//! Command-line front end behind the `chanlab` binary.
//!
//! Exit codes: `0` when every audited invariant holds, `2` when any is
//! violated, `1` for usage and IO errors. JSON reports carry `"schema": 1`
//! and are byte-identical for identical command lines.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::channels::{verify_cptp, KrausMap};
use crate::entropy::{
    ampss_audit, inequality_suite, AmpssEntropies, EntropyConfig, InequalityReport, LogBase,
};
use crate::holo::{build_embedding, chain_with, default_probes, prepare, reconstruct_with, EmbeddingKind, HoloDims};
use crate::linalg::{operator_norm, trace_norm, Tolerance};
use crate::qec::{
    circuit_readout, circuit_syndrome_sampled, encode, roundtrip, shor_code, single_qubit_errors,
    three_qubit_code, PauliString, RoundtripReport, StabilizerCode,
};
use crate::random::{random_density_with, random_hermitian, random_multipartite, substream};
use crate::recovery::{beta0_mass, erasure_example, QuadratureGrid};
use crate::states::{PureState, StateJson};
use crate::suites::{entropy_fuzz, recovery_fuzz};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "chanlab", version, about = "Reproducible quantum-information audits and demos")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Master seed. Trial `t` draws from its own substream of this seed.
    #[arg(long, global = true, env = "CHANLAB_SEED")]
    pub seed: Option<u64>,
    /// Eigenvalue cutoff for supports and entropies.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value = "nats")]
    pub log_base: LogBase,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Subadditivity, Araki-Lieb, strong subadditivity, Pinsker and additivity on random states.
    EntropyAudit(EntropyAuditArgs),
    /// Replay the black-hole entropy chain and audit it on sampled states.
    AmpssDemo(AmpssArgs),
    /// Check a channel file for complete positivity and trace preservation.
    ChannelVerify {
        file: PathBuf,
    },
    /// Run single-qubit Pauli errors through the Shor or three-qubit code.
    ShorDemo(ShorArgs),
    /// Petz recovery on the erasure example.
    PetzDemo(PetzArgs),
    /// Universal recovery bound on random channel, state and reference triples.
    RecoverySweep(RecoveryArgs),
    /// Entanglement-wedge reconstruction in a small code embedding.
    WedgeDemo(WedgeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EntropyAuditArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,2,2")]
    pub dims: Vec<usize>,
    /// Audit a fixed state instead of random ones.
    #[arg(long, value_enum, conflicts_with = "state")]
    pub fixture: Option<Fixture>,
    /// Audit a state read from a JSON file.
    #[arg(long)]
    pub state: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    Ghz,
}

#[derive(Debug, Clone, Args)]
pub struct AmpssArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,2,2")]
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodeKind {
    Shor,
    Three,
}

#[derive(Debug, Clone, Args)]
pub struct ShorArgs {
    #[arg(long, value_enum, default_value_t = CodeKind::Shor)]
    pub code: CodeKind,
    /// Pauli error such as `Z5` or `X1Z2`.
    #[arg(long, conflicts_with = "sweep")]
    pub error: Option<String>,
    /// Logical amplitudes `alpha,beta`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub logical: Option<Vec<f64>>,
    /// Every single-qubit X, Z and Y error.
    #[arg(long)]
    pub sweep: bool,
    /// Also draw each ancilla outcome from the Born rule (needs a seed).
    #[arg(long)]
    pub sample: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PetzExample {
    Erasure,
}

#[derive(Debug, Clone, Args)]
pub struct PetzArgs {
    #[arg(long, value_enum, default_value_t = PetzExample::Erasure)]
    pub example: PetzExample,
    /// `d_code,d2,d3,d_abar`
    #[arg(long, value_delimiter = ',', default_value = "2,2,0,2")]
    pub dims: Vec<usize>,
    /// Spectrum of the reference state on the code space.
    #[arg(long, value_delimiter = ',')]
    pub sigma: Option<Vec<f64>>,
    /// Random code states checked on top of the tomographic set.
    #[arg(long, default_value_t = 20)]
    pub states: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RecoveryArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 3)]
    pub max_dim: usize,
    /// Truncation `T` of the integral over `t`.
    #[arg(long, default_value_t = 12.0)]
    pub truncation: f64,
    /// Gauss-Legendre nodes per panel.
    #[arg(long, default_value_t = 43)]
    pub order: usize,
    /// Rebuild every map on the doubled grid and report the shift.
    #[arg(long)]
    pub refine: bool,
}

#[derive(Debug, Clone, Args)]
pub struct WedgeArgs {
    #[arg(long, default_value = "random")]
    pub kind: EmbeddingKind,
    /// `d_a,d_abar,d_A,d_Abar`
    #[arg(long, value_delimiter = ',', default_value = "2,2,4,4")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub probes: usize,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Lib(crate::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(m) => write!(f, "io: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A finished command: JSON body, human table and verdict.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub passed: bool,
    pub body: Value,
    pub table: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut obj = match &self.body {
            Value::Object(m) => m.clone(),
            other => {
                let mut m = serde_json::Map::new();
                m.insert("result".into(), other.clone());
                m
            }
        };
        obj.insert("schema".into(), json!(SCHEMA_VERSION));
        obj.insert("command".into(), json!(self.command));
        obj.insert("passed".into(), json!(self.passed));
        let mut text = serde_json::to_string_pretty(&Value::Object(obj)).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Table => {
                let verdict = if self.passed { "PASS" } else { "VIOLATION" };
                format!("{}{}: {verdict}\n", self.table, self.command)
            }
        }
    }
}

/// Parse `args` (including the program name), run, emit, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli).and_then(|r| emit(&r, &cli.config).map(|_| r)) {
        Ok(report) => {
            if report.passed {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("chanlab: {e}");
            1
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<Report> {
    let cfg = entropy_config(&cli.config)?;
    match &cli.command {
        Command::EntropyAudit(args) => entropy_audit(args, &cli.config, &cfg),
        Command::AmpssDemo(args) => ampss_demo(args, &cli.config, &cfg),
        Command::ChannelVerify { file } => channel_verify(file),
        Command::ShorDemo(args) => shor_demo(args, &cli.config),
        Command::PetzDemo(args) => petz_demo(args, &cli.config, &cfg),
        Command::RecoverySweep(args) => recovery_sweep(args, &cli.config, &cfg),
        Command::WedgeDemo(args) => wedge_demo(args, &cli.config),
    }
}

fn emit(report: &Report, config: &RunConfig) -> CliResult<()> {
    let text = report.render(config.format);
    match &config.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn entropy_config(config: &RunConfig) -> CliResult<EntropyConfig> {
    let mut tol = Tolerance::default();
    if let Some(cutoff) = config.tol {
        tol = Tolerance::new(cutoff, tol.hermiticity_tol, tol.trace_tol)
            .map_err(|e| CliError::Usage(format!("--tol: {e}")))?;
    }
    Ok(EntropyConfig {
        log_base: config.log_base,
        tol,
    })
}

fn require_seed(config: &RunConfig) -> CliResult<u64> {
    config
        .seed
        .ok_or_else(|| CliError::Usage("this command samples randomness; pass --seed or set CHANLAB_SEED".into()))
}

fn require_trials(trials: usize) -> CliResult<()> {
    if trials == 0 {
        Err(CliError::Usage("--trials must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn require_dims(dims: &[usize], len: Option<usize>) -> CliResult<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(CliError::Usage(format!("--dims must be positive, got {dims:?}")));
    }
    match len {
        Some(n) if dims.len() != n => Err(CliError::Usage(format!(
            "--dims needs {n} entries, got {}",
            dims.len()
        ))),
        _ => Ok(()),
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// Left-aligned text table.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.iter().map(|h| h.to_string()).collect());
    out += &line(widths.iter().map(|w| "-".repeat(*w)).collect());
    for row in rows {
        out += &line(row.clone());
    }
    out
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

fn ghz() -> crate::Result<crate::states::DensityOperator> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0] = Complex64::new(s, 0.0);
    amps[7] = Complex64::new(s, 0.0);
    Ok(PureState::from_amplitudes(&amps, vec![2, 2, 2])?.density())
}

fn summarize(reports: &[InequalityReport]) -> (Value, String) {
    let mut names: Vec<&str> = Vec::new();
    for r in reports {
        if !names.contains(&r.name.as_str()) {
            names.push(&r.name);
        }
    }
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for name in names {
        let group: Vec<&InequalityReport> = reports.iter().filter(|r| r.name == name).collect();
        let violations = group.iter().filter(|r| !r.passed).count();
        let min_slack = group.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
        rows.push(vec![
            name.to_string(),
            group.len().to_string(),
            violations.to_string(),
            sci(min_slack),
        ]);
        summary.push(json!({
            "name": name,
            "checks": group.len(),
            "violations": violations,
            "min_slack": min_slack,
        }));
    }
    (
        Value::Array(summary),
        table(&["inequality", "checks", "violations", "min slack"], &rows),
    )
}

fn entropy_audit(args: &EntropyAuditArgs, config: &RunConfig, cfg: &EntropyConfig) -> CliResult<Report> {
    require_trials(args.trials)?;
    require_dims(&args.dims, None)?;
    let (reports, source) = if let Some(Fixture::Ghz) = args.fixture {
        (inequality_suite(&ghz()?, cfg)?, json!({"fixture": "ghz"}))
    } else if let Some(path) = &args.state {
        let parsed: StateJson = serde_json::from_str(&read_file(path)?)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let rho = parsed.into_density()?.with_dims(args.dims.clone())?;
        (inequality_suite(&rho, cfg)?, json!({"state": path.display().to_string()}))
    } else {
        let seed = require_seed(config)?;
        (
            entropy_fuzz(&args.dims, args.trials, seed, cfg)?,
            json!({"seed": seed, "trials": args.trials, "dims": args.dims}),
        )
    };
    let violations: Vec<&InequalityReport> = reports.iter().filter(|r| !r.passed).collect();
    let (summary, mut text) = summarize(&reports);
    for v in &violations {
        text += &format!(
            "violation: {} slack {} trial {:?}\n",
            v.name,
            sci(v.slack),
            v.seed
        );
    }
    let mut body = json!({
        "source": source,
        "log_base": format!("{:?}", cfg.log_base).to_lowercase(),
        "summary": summary,
        "violations": violations,
    });
    if args.fixture.is_some() || args.state.is_some() {
        body["reports"] = to_value(&reports);
    }
    Ok(Report {
        command: "entropy-audit",
        passed: violations.is_empty(),
        body,
        table: text,
    })
}

fn ampss_demo(args: &AmpssArgs, config: &RunConfig, cfg: &EntropyConfig) -> CliResult<Report> {
    require_trials(args.trials)?;
    require_dims(&args.dims, Some(3))?;
    let seed = require_seed(config)?;
    let hand = ampss_audit(&AmpssEntropies::hand_input());
    let mut text = String::from("hand-input replay\n");
    for step in &hand.chain {
        let mark = if step.holds { "" } else { "  [fails for these numbers]" };
        text += &format!(
            "  {:>2} {:<16} = {:>6.3}  {}{mark}\n",
            step.relation, step.expression, step.value, step.justification
        );
    }
    text += &format!("  contradiction: {}\n", hand.contradiction);

    let d: usize = args.dims.iter().product();
    let sampled = (0..args.trials as u64)
        .map(|t| {
            let mut rng = substream(seed, t);
            let rank = rand::Rng::gen_range(&mut rng, 1..=d);
            let rho = random_multipartite(&args.dims, rank, &mut rng)?;
            Ok(ampss_audit(&AmpssEntropies::from_state(&rho, cfg)?))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let joint: Vec<usize> = sampled
        .iter()
        .enumerate()
        .filter(|(_, r)| r.contradiction)
        .map(|(t, _)| t)
        .collect();
    let ssa_fail: Vec<usize> = sampled
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.strong_subadditivity)
        .map(|(t, _)| t)
        .collect();
    let count = |f: fn(&crate::entropy::AmpssReport) -> bool| sampled.iter().filter(|r| f(r)).count();
    let rows = vec![
        vec!["(i)".to_string(), count(|r| r.pure_entangled_pair).to_string()],
        vec!["(ii)".to_string(), count(|r| r.pair_decoupled).to_string()],
        vec!["(iii)".to_string(), count(|r| r.radiation_purified).to_string()],
        vec!["(iv)".to_string(), count(|r| r.strong_subadditivity).to_string()],
        vec!["(i)+(ii)+(iii)".to_string(), joint.len().to_string()],
    ];
    text += &format!("\nsampled states: {} on dims {:?}\n", args.trials, args.dims);
    text += &table(&["condition", "states satisfying"], &rows);
    let passed = hand.contradiction && joint.is_empty() && ssa_fail.is_empty();
    Ok(Report {
        command: "ampss-demo",
        passed,
        body: json!({
            "hand_input": hand,
            "sampled": {
                "seed": seed,
                "trials": args.trials,
                "dims": args.dims,
                "jointly_i_ii_iii": joint,
                "strong_subadditivity_failures": ssa_fail,
            },
        }),
        table: text,
    })
}

fn channel_verify(file: &Path) -> CliResult<Report> {
    let map: KrausMap = serde_json::from_str(&read_file(file)?)
        .map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
    let cert = verify_cptp(&map)?;
    let rows = vec![
        vec!["completeness residual".into(), sci(cert.completeness_residual), cert.trace_preserving.to_string()],
        vec!["Choi min eigenvalue".into(), sci(cert.choi_min_eigenvalue), cert.completely_positive.to_string()],
    ];
    let text = format!(
        "{} Kraus operators, {} -> {}\n{}",
        map.len(),
        map.in_dim(),
        map.out_dim(),
        table(&["check", "value", "ok"], &rows)
    );
    Ok(Report {
        command: "channel-verify",
        passed: cert.passed,
        body: json!({
            "file": file.display().to_string(),
            "in_dim": map.in_dim(),
            "out_dim": map.out_dim(),
            "kraus_count": map.len(),
            "certificate": cert,
        }),
        table: text,
    })
}

#[derive(Debug, Clone, Serialize)]
struct ShorRow {
    error: String,
    syndrome: Vec<i8>,
    correction: Option<String>,
    fidelity: Option<f64>,
    logical_preserved: bool,
    effective_logical: Option<String>,
    /// The code is expected to undo this error.
    expected_corrected: bool,
    circuit_syndrome: Option<Vec<i8>>,
    circuit_agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampled_bits: Option<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
    ok: bool,
}

fn expected_corrected(code: &StabilizerCode, error: &PauliString) -> bool {
    code.n == 9 || error.is_x_type()
}

fn shor_row(
    code: &StabilizerCode,
    logical: (Complex64, Complex64),
    error: &PauliString,
    sample_seed: Option<u64>,
) -> crate::Result<ShorRow> {
    let expected = expected_corrected(code, error);
    let corrupted = error.apply(&encode(code, logical.0, logical.1)?)?;
    let circuit = circuit_readout(code, &corrupted)?;
    let sampled_bits = match sample_seed {
        Some(seed) => Some(
            (0..code.generators.len())
                .map(|g| {
                    circuit_syndrome_sampled(code, &corrupted, g, &mut substream(seed, g as u64)).map(|(b, _)| b)
                })
                .collect::<crate::Result<Vec<u8>>>()?,
        ),
        None => None,
    };
    let (rt, failure): (Option<RoundtripReport>, _) = match roundtrip(code, logical, error) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let syndrome = match &rt {
        Some(r) => r.syndrome.clone(),
        None => code.syndrome_of(error).bits,
    };
    let circuit_agrees = circuit.as_ref().is_some_and(|c| c.bits == syndrome);
    let preserved = rt.as_ref().is_some_and(|r| r.logical_preserved);
    Ok(ShorRow {
        error: error.to_string(),
        syndrome,
        correction: rt.as_ref().map(|r| r.correction.clone()),
        fidelity: rt.as_ref().map(|r| r.fidelity),
        logical_preserved: preserved,
        effective_logical: rt.as_ref().map(|r| r.effective_logical.clone()),
        expected_corrected: expected,
        circuit_syndrome: circuit.map(|s| s.bits),
        circuit_agrees,
        sampled_bits,
        failure,
        ok: circuit_agrees && preserved == expected,
    })
}

fn fmt_syndrome(bits: &[i8]) -> String {
    bits.iter()
        .map(|b| if *b > 0 { "+" } else { "-" })
        .collect::<Vec<_>>()
        .join("")
}

fn shor_demo(args: &ShorArgs, config: &RunConfig) -> CliResult<Report> {
    let code = match args.code {
        CodeKind::Shor => shor_code(),
        CodeKind::Three => three_qubit_code(),
    };
    let logical = match &args.logical {
        Some(v) => {
            let &[a, b] = v.as_slice() else {
                return Err(CliError::Usage(format!("--logical needs two amplitudes, got {}", v.len())));
            };
            if ((a * a + b * b) - 1.0).abs() > 1e-9 {
                return Err(CliError::Usage(format!(
                    "--logical {a},{b} is not normalized (|a|^2 + |b|^2 = {})",
                    a * a + b * b
                )));
            }
            (Complex64::new(a, 0.0), Complex64::new(b, 0.0))
        }
        None => (Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0)),
    };
    let sample_seed = if args.sample { Some(require_seed(config)?) } else { None };
    let errors = if args.sweep {
        single_qubit_errors(code.n)
    } else if let Some(e) = &args.error {
        vec![PauliString::parse(e, code.n).map_err(|e| CliError::Usage(e.to_string()))?]
    } else {
        return Err(CliError::Usage("pass --error <PAULI> or --sweep".into()));
    };
    let rows = errors
        .iter()
        .map(|e| shor_row(&code, logical, e, sample_seed))
        .collect::<crate::Result<Vec<_>>>()?;
    let text_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.error.clone(),
                fmt_syndrome(&r.syndrome),
                r.correction.clone().unwrap_or_else(|| "uncorrectable".into()),
                r.fidelity.map_or("-".into(), |f| format!("{f:.12}")),
                r.effective_logical.clone().unwrap_or_else(|| "-".into()),
                r.circuit_agrees.to_string(),
            ]
        })
        .collect();
    let corrected = rows.iter().filter(|r| r.logical_preserved).count();
    let mut text = format!("{} code, logical ({}, {})\n", code.name, logical.0.re, logical.1.re);
    text += &table(&["error", "syndrome", "correction", "fidelity", "logical", "circuit"], &text_rows);
    text += &format!("{corrected}/{} errors corrected\n", rows.len());
    Ok(Report {
        command: "shor-demo",
        passed: rows.iter().all(|r| r.ok),
        body: json!({
            "code": code.name,
            "logical": [logical.0.re, logical.1.re],
            "corrected": corrected,
            "rows": rows,
        }),
        table: text,
    })
}

fn petz_demo(args: &PetzArgs, config: &RunConfig, cfg: &EntropyConfig) -> CliResult<Report> {
    let PetzExample::Erasure = args.example;
    let &[d_code, d2, d3, d_abar] = args.dims.as_slice() else {
        return Err(CliError::Usage("--dims needs d_code,d2,d3,d_abar".into()));
    };
    let seed = require_seed(config)?;
    let spectrum = match &args.sigma {
        Some(s) => s.clone(),
        None => (0..d_code).map(|k| 0.5f64.powi(k as i32)).collect(),
    };
    let ex = erasure_example(d_code, d_code, d2, d3, d_abar, &spectrum, seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut residuals = Vec::with_capacity(args.states);
    for t in 0..args.states as u64 {
        let rho = random_density_with(d_code, d_code, &mut substream(seed, t))?;
        let back = ex.petz.apply(&ex.channel.apply(&rho)?)?;
        residuals.push(trace_norm(&(rho.op() - back.op()))?);
    }
    let random_max = residuals.iter().cloned().fold(0.0, f64::max);
    let residual = ex.report.max_residual.max(random_max);
    let passed = residual <= 1e-8 && ex.report.max_gap <= 1e-8;
    let rows = vec![
        vec!["tomographic states".into(), ex.report.code_states.to_string(), sci(ex.report.max_residual)],
        vec!["random states".into(), args.states.to_string(), sci(random_max)],
    ];
    let mut text = format!(
        "erasure example: d_code={d_code} d2={d2} d3={d3} d_abar={d_abar}, Tr chi_2 = {:.12}\n",
        ex.report.chi_trace
    );
    text += &table(&["code states", "count", "max ||rho - P(N(rho))||_1"], &rows);
    text += &format!("max recoverability gap: {}\n", sci(ex.report.max_gap));
    Ok(Report {
        command: "petz-demo",
        passed,
        body: json!({
            "example": "erasure",
            "seed": seed,
            "dims": {"d_code": d_code, "d2": d2, "d3": d3, "d_abar": d_abar},
            "log_base": format!("{:?}", cfg.log_base).to_lowercase(),
            "erasure": ex.report,
            "random_states": args.states,
            "random_max_residual": random_max,
            "max_residual": residual,
            "support_completeness_residual": ex.petz.completeness_residual_on_support(),
        }),
        table: text,
    })
}

fn recovery_sweep(args: &RecoveryArgs, config: &RunConfig, cfg: &EntropyConfig) -> CliResult<Report> {
    require_trials(args.trials)?;
    if args.max_dim < 2 {
        return Err(CliError::Usage("--max-dim must be at least 2".into()));
    }
    let seed = require_seed(config)?;
    let grid = QuadratureGrid::new(args.truncation, args.order).map_err(|e| CliError::Usage(e.to_string()))?;
    let mass_error = (grid.mass() - 1.0).abs();
    let trials = recovery_fuzz(args.trials, args.max_dim, seed, &grid, args.refine, cfg)?;
    let failures: Vec<u64> = trials.iter().filter(|t| !t.passed()).map(|t| t.trial).collect();
    let min_slack = trials.iter().map(|t| t.report.bound_slack).fold(f64::INFINITY, f64::min);
    let max_shift = trials.iter().filter_map(|t| t.refinement_shift).fold(0.0, f64::max);
    let passed = mass_error <= 1e-6 && failures.is_empty();
    let mut rows = vec![
        vec!["nodes".into(), grid.len().to_string()],
        vec!["T".into(), format!("{}", grid.truncation)],
        vec!["|sum w beta0 - 1|".into(), sci(mass_error)],
        vec!["analytic tail 1 - tanh(pi T / 2)".into(), sci(1.0 - beta0_mass(grid.truncation))],
        vec!["trials".into(), trials.len().to_string()],
        vec!["min gap + 2 log F".into(), sci(min_slack)],
        vec!["failures".into(), failures.len().to_string()],
    ];
    if args.refine {
        rows.push(vec!["max shift on doubled grid".into(), sci(max_shift)]);
    }
    Ok(Report {
        command: "recovery-sweep",
        passed,
        body: json!({
            "seed": seed,
            "grid": {"nodes": grid.len(), "T": grid.truncation, "mass_error": mass_error},
            "min_bound_slack": min_slack,
            "max_refinement_shift": if args.refine { json!(max_shift) } else { Value::Null },
            "failures": failures,
            "trials": trials,
        }),
        table: table(&["quantity", "value"], &rows),
    })
}

fn wedge_demo(args: &WedgeArgs, config: &RunConfig) -> CliResult<Report> {
    require_dims(&args.dims, Some(4))?;
    if args.probes == 0 {
        return Err(CliError::Usage("--probes must be at least 1".into()));
    }
    let seed = require_seed(config)?;
    let dims = HoloDims::from_slice(&args.dims)?;
    let emb = build_embedding(args.kind, dims, seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let probes = default_probes(&emb, args.probes, seed)?;
    let phi = random_hermitian(dims.a, &mut substream(seed, args.probes as u64));
    let setup = prepare(&emb, &probes, &QuadratureGrid::default())?;
    let (_, recon) = reconstruct_with(&emb, &setup, &phi, &probes)?;
    let chain = chain_with(&emb, &setup, &probes, &phi)?;
    let d = chain.deltas;
    let rows: Vec<Vec<String>> = chain
        .probes
        .iter()
        .zip(&recon.per_operator)
        .enumerate()
        .map(|(k, (p, c))| {
            vec![
                k.to_string(),
                sci(p.step1),
                sci(p.step2),
                sci(p.final_residual),
                sci(c.lhs),
                sci(c.rhs),
                (p.passed && c.passed).to_string(),
            ]
        })
        .collect();
    let mut text = format!(
        "{:?} embedding {:?}: epsilon = {} bits, delta1 = {}, delta2 = {}, delta = {}\n",
        args.kind,
        args.dims,
        sci(d.epsilon),
        sci(d.delta1),
        sci(d.delta2),
        sci(d.delta)
    );
    text += &table(
        &["probe", "step1 (<=d1)", "step2 (<=d2)", "final (<=d)", "|<O_A>-<phi>|", "d ||phi||", "ok"],
        &rows,
    );
    Ok(Report {
        command: "wedge-demo",
        passed: recon.passed() && chain.passed,
        body: json!({
            "seed": seed,
            "kind": args.kind,
            "dims": dims,
            "isometry_residual": emb.isometry_residual(),
            "observable_norm": operator_norm(&phi),
            "reconstruction": recon,
            "chain": chain,
        }),
        table: text,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> Report {
        let cli = Cli::try_parse_from(std::iter::once("chanlab").chain(args.iter().copied())).unwrap();
        execute(&cli).unwrap()
    }

    #[test]
    fn ghz_fixture_reports_ln2_ssa_slack() {
        let r = run_ok(&["entropy-audit", "--trials", "1", "--fixture", "ghz"]);
        assert!(r.passed);
        let ssa = r.body["reports"]
            .as_array()
            .unwrap()
            .iter()
            .find(|x| x["name"] == "strong_subadditivity")
            .unwrap()["slack"]
            .as_f64()
            .unwrap();
        assert!((ssa - std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn zero_trials_is_usage_error() {
        let cli = Cli::try_parse_from(["chanlab", "entropy-audit", "--trials", "0", "--seed", "1"]).unwrap();
        assert!(matches!(execute(&cli), Err(CliError::Usage(_))));
    }

    #[test]
    fn random_commands_need_a_seed() {
        let cli = Cli::try_parse_from(["chanlab", "wedge-demo"]).unwrap();
        if cli.config.seed.is_none() {
            assert!(matches!(execute(&cli), Err(CliError::Usage(_))));
        }
    }

    #[test]
    fn json_is_deterministic_and_versioned() {
        let a = run_ok(&["entropy-audit", "--trials", "20", "--seed", "4"]).to_json();
        let b = run_ok(&["entropy-audit", "--trials", "20", "--seed", "4"]).to_json();
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema"], 1);
    }

    #[test]
    fn shor_single_error_row() {
        let r = run_ok(&["shor-demo", "--error", "Z5", "--logical", "0.6,0.8"]);
        assert!(r.passed);
        assert_eq!(r.body["rows"][0]["correction"], "Z4");
        let bad = Cli::try_parse_from(["chanlab", "shor-demo", "--error", "Z5", "--logical", "0.6,0.6"]).unwrap();
        assert!(matches!(execute(&bad), Err(CliError::Usage(_))));
    }

    #[test]
    fn three_qubit_sweep_flags_phase_errors() {
        let r = run_ok(&["shor-demo", "--code", "three", "--sweep"]);
        assert!(r.passed);
        for row in r.body["rows"].as_array().unwrap() {
            let is_x = row["error"].as_str().unwrap().starts_with('X');
            assert_eq!(row["logical_preserved"].as_bool().unwrap(), is_x);
        }
    }
}
