use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hscorr::interferometer::{empirical_correlation, PhaseSettings};
use hscorr::locality::{locality_sweep_with, TrialUnitary};
use hscorr::qstate::DensityMatrix;
use hscorr::{
    decompose, ghsz_contradiction_report, ghz_density, reconstruct, sample_outcomes, Block,
    CoefficientTensor, GhszVerdict, Party,
};
use thiserror::Error;

use crate::format::{self, FileKind, ParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error in {path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Validation(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 2,
            CliError::Validation(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<hscorr::Error> for CliError {
    fn from(e: hscorr::Error) -> Self {
        match e {
            hscorr::Error::Addressing(_) | hscorr::Error::Parameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hscorr", version, about = "Pauli-basis correlations of GHZ states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Density matrix file -> all 4^n Pauli-string coefficients
    Decompose(InOut),
    /// Coefficient file -> density matrix file
    Reconstruct(InOut),
    /// Tabulate the three-party correlation against sin(phi1+phi2+phi3)
    Scan {
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Four-setting GHSZ argument against local realism
    Ghsz,
    /// Check that local unitaries leave the other parties' correlations alone
    VerifyLocality {
        /// Density matrix file; the GHZ state when omitted
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "a")]
        party: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Use the identity instead of Haar-random unitaries
        #[arg(long)]
        identity: bool,
    },
    /// Draw detector triples from the GHZ interferometer
    Sample {
        #[command(flatten)]
        phases: Phases,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a density matrix or coefficient file against its invariants
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
struct InOut {
    #[arg(long)]
    input: PathBuf,
    /// Defaults to standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Phases {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi3: f64,
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    match cmd {
        Command::Decompose(io) => cmd_decompose(&io.input, io.output.as_deref(), out, err),
        Command::Reconstruct(io) => cmd_reconstruct(&io.input, io.output.as_deref(), out),
        Command::Scan { points, output } => cmd_scan(points, output.as_deref(), out),
        Command::Ghsz => cmd_ghsz(out),
        Command::VerifyLocality {
            input,
            party,
            trials,
            seed,
            tol,
            identity,
        } => cmd_verify_locality(input.as_deref(), &party, trials, seed, tol, identity, out),
        Command::Sample { phases, count, seed } => cmd_sample(&phases, count, seed, out),
        Command::Validate { input } => cmd_validate(&input, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn load_density(path: &Path) -> Result<DensityMatrix<f64>, CliError> {
    let text = read(path)?;
    let (n, m) = format::parse_density(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    Ok(DensityMatrix::new(n, m)?)
}

fn load_coefficients(path: &Path) -> Result<CoefficientTensor, CliError> {
    let text = read(path)?;
    format::parse_coefficients(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Six-decimal rendering without negative zero.
fn short(x: f64) -> String {
    let v = format!("{x:.6}");
    if v.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        v.trim_start_matches('-').to_string()
    } else {
        v
    }
}

fn block_summary(c: &CoefficientTensor) -> String {
    let vec3 = |v: [f64; 3]| v.map(short).join(" ");
    let mat3 = |m: [[f64; 3]; 3]| m.map(vec3).join(" | ");
    let mut s = String::new();
    s += &format!("r: {}\n", vec3(c.r()));
    s += &format!("s: {}\n", vec3(c.s()));
    s += &format!("p: {}\n", vec3(c.p()));
    s += &format!("q_ab: {}\n", mat3(c.q_ab()));
    s += &format!("o_ac: {}\n", mat3(c.o_ac()));
    s += &format!("t_bc: {}\n", mat3(c.t_bc()));
    let nonzero: Vec<String> = c
        .iter()
        .filter(|(st, v)| st.weight() == 3 && v.abs() > 1e-12)
        .map(|(st, v)| format!("{st}={}", short(v)))
        .collect();
    s += &format!("R nonzeros: {}\n", nonzero.join(" "));
    s
}

pub fn cmd_decompose(
    input: &Path,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, CliError> {
    let rho = load_density(input)?;
    let coeffs = decompose(&rho)?;
    emit(output, &format::write_coefficients(&coeffs), out)?;
    if coeffs.n_parties() == 3 {
        // keep stdout a clean coefficient file when it carries the records
        let summary = block_summary(&coeffs);
        let sink: &mut dyn Write = if output.is_some() { out } else { err };
        sink.write_all(summary.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(0)
}

pub fn cmd_reconstruct(input: &Path, output: Option<&Path>, out: &mut dyn Write) -> Result<u8, CliError> {
    let coeffs = load_coefficients(input)?;
    let rho = reconstruct(&coeffs)?;
    emit(output, &format::write_density(rho.n_parties(), rho.entries()), out)?;
    Ok(0)
}

pub fn cmd_scan(points: usize, output: Option<&Path>, out: &mut dyn Write) -> Result<u8, CliError> {
    if points < 2 {
        return Err(CliError::Usage(format!("--points must be at least 2, got {points}")));
    }
    let tau = std::f64::consts::TAU;
    let mut text = String::from("phi1,phi2,phi3,E,closed_form,abs_error\n");
    let mut row = |p: [f64; 3]| {
        let e = hscorr::correlation(&PhaseSettings::new(p[0], p[1], p[2]).expect("finite grid"));
        let closed = (p[0] + p[1] + p[2]).sin();
        text += &[p[0], p[1], p[2], e, closed, (e - closed).abs()]
            .map(format::fmt_real)
            .join(",");
        text.push('\n');
    };
    let grid: Vec<f64> = (0..points).map(|i| tau * i as f64 / (points - 1) as f64).collect();
    for &total in &grid {
        row([total, 0.0, 0.0]);
    }
    for &total in &grid {
        let third = total / 3.0;
        row([third, third, third]);
    }
    emit(output, &text, out)?;
    Ok(0)
}

pub fn cmd_ghsz(out: &mut dyn Write) -> Result<u8, CliError> {
    let r = ghsz_contradiction_report::<f64>();
    let mut text = String::from("setting,phi1,phi2,phi3,E\n");
    for (k, (s, e)) in r.settings.iter().zip(&r.correlations).enumerate() {
        text += &format!(
            "{},{},{},{},{}\n",
            k + 1,
            short(s.phi1),
            short(s.phi2),
            short(s.phi3),
            short(*e)
        );
    }
    text += &format!("product,{}\n", short(r.product));
    text += &format!(
        "local_realist_fourth,{}\n",
        r.local_realist_fourth.map_or("undetermined".to_string(), short)
    );
    text += &format!(
        "verdict,{}\n",
        match r.verdict {
            GhszVerdict::Contradiction => "CONTRADICTION",
            GhszVerdict::Consistent => "CONSISTENT",
        }
    );
    emit(None, &text, out)?;
    Ok(0)
}

pub fn cmd_verify_locality(
    input: Option<&Path>,
    party: &str,
    trials: usize,
    seed: u64,
    tol: f64,
    identity: bool,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let party: Party = party
        .parse()
        .map_err(|e: hscorr::Error| CliError::Usage(e.to_string()))?;
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let rho = match input {
        Some(p) => load_density(p)?,
        None => ghz_density(),
    };
    if party.index() >= rho.n_parties() {
        return Err(CliError::Usage(format!(
            "party {party} out of range for a {}-party state",
            rho.n_parties()
        )));
    }
    let source = if identity {
        TrialUnitary::Identity
    } else {
        TrialUnitary::Haar
    };
    let report = locality_sweep_with(&rho, party, trials, seed, tol, source)?;
    let (unchanged, changed): (Vec<Block>, Vec<Block>) =
        Block::all(rho.n_parties()).into_iter().partition(|b| !b.involves(party));
    let names = |v: &[Block]| v.iter().map(Block::name).collect::<Vec<_>>().join(";");

    let mut text = String::from("field,value\n");
    text += &format!("party,{party}\n");
    text += &format!("trials,{trials}\n");
    text += &format!("seed,{seed}\n");
    text += &format!("tol,{tol:e}\n");
    text += &format!("unchanged_blocks,{}\n", names(&unchanged));
    text += &format!("changed_blocks,{}\n", names(&changed));
    text += &format!("worst_unchanged_deviation,{:e}\n", report.worst_unchanged_deviation);
    text += &format!("worst_changed_deviation,{:e}\n", report.worst_changed_deviation);
    text += &format!("worst_marginal_deviation,{:e}\n", report.worst_marginal_deviation);
    text += &format!("failed_trials,{}\n", report.failed_trials.len());
    let passed = report.verdict.passed();
    text += &format!("verdict,{}\n", if passed { "PASS" } else { "FAIL" });
    emit(None, &text, out)?;
    Ok(if passed { 0 } else { 1 })
}

/// Detector names for outcome `index`, e.g. `de'f`.
fn outcome_label(index: usize) -> String {
    ['d', 'e', 'f']
        .iter()
        .enumerate()
        .map(|(k, d)| {
            if (index >> (2 - k)) & 1 == 1 {
                format!("{d}'")
            } else {
                d.to_string()
            }
        })
        .collect()
}

fn cmd_sample(phases: &Phases, count: u64, seed: u64, out: &mut dyn Write) -> Result<u8, CliError> {
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let settings = PhaseSettings::new(phases.phi1, phases.phi2, phases.phi3)?;
    let counts = sample_outcomes(&settings, count, seed)?;
    let empirical = empirical_correlation(&counts);
    let exact = hscorr::correlation(&settings);
    let variance = (1.0 - exact * exact).max(0.0);
    let z = if variance < 1e-12 {
        if (empirical - exact).abs() < 1e-9 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (empirical - exact) / (variance / count as f64).sqrt()
    };
    let mut text = String::from("outcome,count\n");
    for (i, c) in counts.iter().enumerate() {
        text += &format!("{},{c}\n", outcome_label(i));
    }
    text += &format!("empirical_E,{}\n", format::fmt_real(empirical));
    text += &format!("exact_E,{}\n", format::fmt_real(exact));
    text += &format!("z_score,{:.4}\n", z + 0.0);
    emit(None, &text, out)?;
    Ok(0)
}

fn cmd_validate(input: &Path, out: &mut dyn Write) -> Result<u8, CliError> {
    let text = read(input)?;
    let parse_err = |source| CliError::Parse {
        path: input.display().to_string(),
        source,
    };
    let kind = format::detect_kind(&text).map_err(parse_err)?;
    let msg = match kind {
        FileKind::DensityMatrix => {
            let rho = load_density(input)?;
            format!(
                "ok: density matrix, {} parties, purity {}\n",
                rho.n_parties(),
                short(rho.purity())
            )
        }
        FileKind::Coefficients => {
            let c = format::parse_coefficients(&text).map_err(parse_err)?;
            if (c.unit() - 1.0).abs() >= 1e-12 {
                return Err(hscorr::Error::Normalization(c.unit()).into());
            }
            if let Some((s, v)) = c.iter().find(|(_, v)| v.abs() > 1.0 + 1e-12) {
                return Err(CliError::Validation(format!(
                    "validation error: coefficient range invariant violated: {s} = {v}"
                )));
            }
            let bound = (1u64 << c.n_parties()) as f64;
            if c.sum_of_squares() > bound + 1e-10 {
                return Err(CliError::Validation(format!(
                    "validation error: purity-bound invariant violated: sum of squares {} > {bound}",
                    c.sum_of_squares()
                )));
            }
            reconstruct(&c)?.validate()?;
            format!("ok: coefficients, {} parties\n", c.n_parties())
        }
    };
    emit(None, &msg, out)?;
    Ok(0)
}
