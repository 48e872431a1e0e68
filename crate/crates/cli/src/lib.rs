//! `cpulse`: build, evaluate, solve and verify composite pulse sequences
//! from the command line.

pub mod document;
pub mod error;
pub mod output;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use composite_pulses::analysis::{
    self, compare_with_band, profile, robustness_window, uniform_grid, HalfPiFamily,
};
use composite_pulses::families::{theta_from_probability, Family, FamilyDescriptor};
use composite_pulses::solver::{solve_phases, verify_order, SeedStrategy, SolveTemplate, DEFAULT_SEED};
use composite_pulses::su2::probability_series;
use composite_pulses::tables::{self, RowCheck};

use document::{round_sig, BranchEntry, SequenceDocument, SolveDocument, SCHEMA_VERSION};
use error::CliError;
use output::{csv_bytes, emit, fmt_num};

#[derive(Debug, Parser)]
#[command(name = "cpulse", version, about = "Composite pulse sequences robust to pulse-area errors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a family member and write it as a sequence document
    Generate(GenerateArgs),
    /// Sample the transition probability over a range of relative area errors
    Profile(ProfileArgs),
    /// Power series of the transition probability in the area error
    Series(SeriesArgs),
    /// Solve for the phases of a pulse-area template
    Solve(SolveArgs),
    /// Regenerate the published phase tables and report per-entry status
    VerifyTable(VerifyArgs),
    /// Robustness windows and minimal pulse counts
    Window(WindowArgs),
    /// Deviations from the common target of several sequences
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output file, written atomically [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub eps_max: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Family name, e.g. prime2, prime3, prime4-abba, sym-half-pi, twin-asym, bb1
    pub family: String,
    /// Pulse count (π/2 families, Levitt-Ernst) or base count (twins)
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Rotation angle in units of π
    #[arg(long, conflicts_with = "p")]
    pub theta: Option<f64>,
    /// Target transition probability
    #[arg(long)]
    pub p: Option<f64>,
    /// Family variant; 0 picks the default
    #[arg(long, default_value_t = 0)]
    pub variant: u8,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    pub document: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    pub document: PathBuf,
    /// Highest coefficient index
    #[arg(long, default_value_t = 12)]
    pub order: usize,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Area pattern of A (π/2) and B (π) pulses, e.g. ABBBA
    pub template: String,
    /// Target transition probability
    #[arg(long)]
    pub p: f64,
    /// Highest series coefficient to annul [default: smallest square system]
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Random restarts on top of the analytic and continuation seeds
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableChoice {
    Primes,
    Twins,
    #[value(name = "half-pi", alias = "half_pi")]
    HalfPi,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Tables to check; none selected is a vacuous pass
    #[arg(value_enum)]
    pub which: Vec<TableChoice>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    /// Sequence document whose window is measured
    #[arg(conflicts_with_all = ["family", "audit"])]
    pub document: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Minimal pulse count query for a π/2 family: sym or asym
    #[arg(long, requires = "eps")]
    pub family: Option<String>,
    /// Required window half-width for --family
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    /// Recompute the published minimal pulse counts
    #[arg(long)]
    pub audit: bool,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(required = true, num_args = 1..)]
    pub documents: Vec<PathBuf>,
    #[arg(long, default_value_t = -0.2, allow_hyphen_values = true)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
    pub eps_max: f64,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    /// Half-width of the band summarised on stderr
    #[arg(long, default_value_t = analysis::COMPARISON_BAND)]
    pub band: f64,
    #[command(flatten)]
    pub out: OutArg,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Profile(a) => profile_cmd(a),
        Command::Series(a) => series(a),
        Command::Solve(a) => solve(a),
        Command::VerifyTable(a) => verify_table(a),
        Command::Window(a) => window(a),
        Command::Compare(a) => compare_cmd(a),
    }
}

fn out_path(o: &OutArg) -> Option<&Path> {
    o.out.as_deref()
}

fn generate(a: GenerateArgs) -> Result<(), CliError> {
    let family = Family::from_name(&a.family).ok_or_else(|| {
        let names: Vec<_> = Family::ALL.iter().map(Family::name).collect();
        CliError::Usage(format!("unknown family {:?}; expected one of {}", a.family, names.join(", ")))
    })?;
    let theta = match (a.theta, a.p) {
        (Some(t), _) => t,
        (None, Some(p)) => theta_from_probability(p)?,
        (None, None) if !family.takes_theta() => 0.5,
        (None, None) => return Err(CliError::Usage(format!("{family} needs --theta or --p"))),
    };
    let doc = SequenceDocument::from_descriptor(&FamilyDescriptor::new(family, a.n, theta, a.variant))?;
    emit(out_path(&a.out), doc.to_toml().as_bytes())
}

fn profile_cmd(a: ProfileArgs) -> Result<(), CliError> {
    let seq = SequenceDocument::read(&a.document)?.sequence()?;
    let p = profile(&seq, a.grid.eps_min, a.grid.eps_max, a.grid.points)?;
    let rows = p.iter().map(|(e, v)| vec![fmt_num(e), fmt_num(v)]);
    emit(out_path(&a.out), &csv_bytes(&["eps", "probability"], rows)?)
}

fn series(a: SeriesArgs) -> Result<(), CliError> {
    let doc = SequenceDocument::read(&a.document)?;
    let seq = doc.sequence()?;
    let coeffs = probability_series(&seq, a.order)?;
    match verify_order(&seq, doc.p_target()?) {
        Ok(c) => eprintln!("error order {} (log-log slope {:.3})", c.order, c.slope),
        Err(e) => eprintln!("error order not certified: {e}"),
    }
    let rows = coeffs.iter().enumerate().map(|(k, c)| vec![k.to_string(), fmt_num(*c)]);
    emit(out_path(&a.out), &csv_bytes(&["k", "coefficient"], rows)?)
}

fn solve(a: SolveArgs) -> Result<(), CliError> {
    let mut template = SolveTemplate::from_letters(&a.template, a.p)?;
    if let Some(m) = a.order {
        template = template.with_annul_count(m)?;
    }
    let seeds = SeedStrategy {
        seed: a.seed,
        random_restarts: a.restarts,
        ..SeedStrategy::default()
    };
    let results = solve_phases(&template, &seeds)?;
    let mut branches = Vec::new();
    for r in &results {
        let seq = r.sequence(&template)?;
        let cert = verify_order(&seq, a.p)?;
        branches.push(BranchEntry {
            phases_pi: r.phases_pi.iter().copied().map(round_sig).collect(),
            residual_norm: r.residual_norm,
            achieved_order: r.achieved_order,
            verified_order: cert.order,
            slope: cert.slope,
        });
    }
    let doc = SolveDocument {
        schema_version: SCHEMA_VERSION.into(),
        template: template.letters(),
        areas_pi: template.areas_pi().to_vec(),
        p_target: a.p,
        annul_count: template.annul_count(),
        seed: a.seed,
        branches,
    };
    eprintln!("{} branch(es)", results.len());
    emit(out_path(&a.out), doc.to_toml().as_bytes())
}

fn verify_table(a: VerifyArgs) -> Result<(), CliError> {
    let all = a.which.contains(&TableChoice::All);
    let wants = |t: TableChoice| all || a.which.contains(&t);
    let mut checks: Vec<RowCheck> = Vec::new();
    if wants(TableChoice::Primes) {
        checks.extend(tables::check_prime_constructors());
        let seeds = SeedStrategy {
            seed: a.seed,
            ..SeedStrategy::default()
        };
        checks.extend(tables::check_prime_solver(&seeds));
    }
    if wants(TableChoice::Twins) {
        checks.extend(tables::check_twins());
    }
    if wants(TableChoice::HalfPi) {
        checks.extend(tables::check_half_pi());
    }
    let rows = checks.iter().map(|c| {
        vec![
            c.table.to_string(),
            c.row.clone(),
            format!("{:.3e}", c.max_deviation),
            if c.passed { "pass" } else { "fail" }.to_string(),
        ]
    });
    emit(
        out_path(&a.out),
        &csv_bytes(&["table", "entry", "max_deviation_pi", "status"], rows)?,
    )?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.row.as_str()).collect();
    eprintln!("{} of {} entries pass", checks.len() - failed.len(), checks.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify(failed.join("; ")))
    }
}

fn window(a: WindowArgs) -> Result<(), CliError> {
    if a.audit {
        let rows = analysis::window_audit(a.n_max)?;
        let body = rows.iter().map(|r| {
            vec![
                fmt_num(r.eps_req),
                r.family.name().to_string(),
                r.claimed.to_string(),
                r.closed_form.to_string(),
                r.oracle.to_string(),
                fmt_num(r.eps_star_closed_form),
                fmt_num(r.eps_star_oracle),
            ]
        });
        let header = ["eps", "family", "claimed", "closed_form", "oracle", "eps_star_closed_form", "eps_star_oracle"];
        return emit(out_path(&a.out), &csv_bytes(&header, body)?);
    }
    if let Some(name) = &a.family {
        let family = HalfPiFamily::from_name(name)
            .ok_or_else(|| CliError::Usage(format!("unknown family {name:?}; expected sym or asym")))?;
        let eps = a.eps.expect("clap enforces --eps");
        let n = analysis::min_pulses_for_window(family, a.tol, eps, a.n_max)?;
        let report = analysis::checked_window(family, n, a.tol)?;
        let mut s = String::new();
        writeln!(s, "family,tol,eps_req,n,eps_star").unwrap();
        writeln!(s, "{},{},{},{},{}", family.name(), fmt_num(a.tol), fmt_num(eps), n, fmt_num(report.eps_star)).unwrap();
        return emit(out_path(&a.out), s.as_bytes());
    }
    let path = a
        .document
        .as_ref()
        .ok_or_else(|| CliError::Usage("give a document, --family with --eps, or --audit".into()))?;
    let doc = SequenceDocument::read(path)?;
    let report = robustness_window(&doc.sequence()?, doc.p_target()?, a.tol)?;
    let rows = [vec![
        report.family,
        report.n.to_string(),
        fmt_num(report.tol),
        fmt_num(report.eps_star),
    ]];
    emit(out_path(&a.out), &csv_bytes(&["label", "n", "tol", "eps_star"], rows)?)
}

fn compare_cmd(a: CompareArgs) -> Result<(), CliError> {
    let seqs = a
        .documents
        .iter()
        .map(|p| SequenceDocument::read(p)?.sequence())
        .collect::<Result<Vec<_>, _>>()?;
    let grid = uniform_grid(a.eps_min, a.eps_max, a.points)?;
    let c = compare_with_band(&seqs, &grid, a.band)?;
    let mut header = vec!["eps".to_string()];
    header.extend(c.labels.iter().cloned());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = grid.iter().enumerate().map(|(i, e)| {
        let mut row = vec![fmt_num(*e)];
        row.extend(c.deviations.iter().map(|d| fmt_num(d[i])));
        row
    });
    emit(out_path(&a.out), &csv_bytes(&header, rows)?)?;
    for (label, m) in c.labels.iter().zip(&c.max_in_band) {
        eprintln!("max |P - {}| on |eps| <= {}: {m:.6e}  {label}", c.p_target, c.band);
    }
    Ok(())
}
