//! Command-line front end. `run` returns the process exit code:
//! 0 success, 2 certification failure, 3 input or usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::adversary::{reuse_frame_demo, run_protocol, EveStrategy};
use crate::certify::{certify_scheme, Tolerances, DEFAULT_HOLEVO_TOL, DEFAULT_N_RANDOM, DEFAULT_SEED, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::matcore::io::write_binary;
use crate::schemes::{
    both_private_classical_scheme, capacity_table, perm_classical_scheme,
    quantum_basis_scheme, quantum_scheme, read_scheme, sabotaged_scheme, su2_classical_scheme,
    su2_classical_size, tetrahedron_states, three_qubit_octet, write_scheme, CapacityRow, ClassicalScheme,
    Scheme,
};
use crate::schurweyl::{parse_two_j, SchurTransform};
use crate::twirl::SrfKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "rftwirl", version, about = "Schur-Weyl transforms, reference-frame twirls and private communication schemes")]
struct Cli {
    /// Omit the timestamp field from JSON output.
    #[arg(long, global = true)]
    no_timestamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the Schur transform for N qubits and list its irrep blocks.
    Schur(SchurArgs),
    /// Generate or certify a scheme file.
    #[command(subcommand)]
    Scheme(SchemeCommand),
    /// Finite-N private capacities and bounds.
    Capacity(CapacityArgs),
    /// Monte-Carlo run of the protocol against a misaligned eavesdropper.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Construction {
    Tetrahedron,
    Octet,
    Su2Classical,
    PermClassical,
    BothClassical,
    QuantumBasis,
    Quantum,
    Sabotaged,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Strategy {
    Helstrom,
    Fixed,
}

#[derive(Debug, Args)]
struct SchurArgs {
    #[arg(long)]
    n: usize,
    /// Directory for `schur_n<N>.json` and `schur_n<N>.bin`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum SchemeCommand {
    Generate(GenerateArgs),
    Certify(CertifyArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    construction: Construction,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    srf: Option<SrfArg>,
    /// Smallest spin used by su2-classical, e.g. `1` or `3/2`.
    #[arg(long)]
    jmin: Option<String>,
    /// Comma-separated spins for perm-classical, e.g. `1,0`.
    #[arg(long, value_delimiter = ',')]
    irreps: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SrfArg {
    Su2,
    Perm,
    Both,
}

impl From<SrfArg> for SrfKind {
    fn from(s: SrfArg) -> Self {
        match s {
            SrfArg::Su2 => SrfKind::Su2,
            SrfArg::Perm => SrfKind::Perm,
            SrfArg::Both => SrfKind::Both,
        }
    }
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_HOLEVO_TOL)]
    holevo_tol: f64,
    /// Random logical states per quantum certification.
    #[arg(long, default_value_t = DEFAULT_N_RANDOM)]
    n_random: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct CapacityArgs {
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "helstrom")]
    strategy: Strategy,
    /// Message pair for the Helstrom strategy.
    #[arg(long, value_parser = parse_pair, default_value = "0,1")]
    pair: (usize, usize),
    /// Also send two messages under one shared rotation (only `2` is supported).
    #[arg(long)]
    reuse_frame: Option<usize>,
    /// JSON-lines transcript, one record per trial.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the summary; stdout otherwise.
    #[arg(long)]
    summary: Option<PathBuf>,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two indices `a,b`, got `{s}`"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("bad index `{x}`: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(Error::Uncertified(msg)) => {
            eprintln!("error: scheme failed certification: {msg}");
            EXIT_FAIL
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let stamp = !cli.no_timestamp;
    match &cli.command {
        Command::Schur(a) => cmd_schur(a, stamp),
        Command::Scheme(SchemeCommand::Generate(a)) => cmd_generate(a),
        Command::Scheme(SchemeCommand::Certify(a)) => cmd_certify(a, stamp),
        Command::Capacity(a) => cmd_capacity(a, stamp),
        Command::Simulate(a) => cmd_simulate(a, stamp),
    }
}

fn to_json<T: Serialize>(value: &T, stamp: bool) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    if let (true, Value::Object(map)) = (stamp, &mut v) {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        map.insert("timestamp".into(), Value::from(secs));
    }
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn block_table(t: &SchurTransform) -> String {
    let mut s = format!("N = {}, dim = {}\n", t.n_qubits(), t.dim());
    let _ = writeln!(s, "{:>6} {:>6} {:>6} {:>8}", "j", "d_R", "d_P", "offset");
    for b in t.blocks() {
        let _ = writeln!(s, "{:>6} {:>6} {:>6} {:>8}", b.label.to_string(), b.d_r, b.d_p, b.offset);
    }
    s
}

fn cmd_schur(a: &SchurArgs, stamp: bool) -> Result<i32> {
    let t = SchurTransform::shared(a.n)?;
    let header = to_json(&t.export_header(), stamp)?;
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("schur_n{}.json", a.n)), &header)?;
        let file = std::fs::File::create(dir.join(format!("schur_n{}.bin", a.n)))?;
        write_binary(t.unitary(), std::io::BufWriter::new(file))?;
        std::fs::write(dir.join(format!("schur_n{}.txt", a.n)), block_table(&t))?;
    }
    match a.format {
        Format::Text => print!("{}", block_table(&t)),
        Format::Json => print!("{header}"),
    }
    Ok(EXIT_OK)
}

fn require_n(a: &GenerateArgs, fixed: Option<usize>) -> Result<usize> {
    match (a.n, fixed) {
        (Some(n), Some(f)) if n != f => {
            Err(Error::InvalidArgument(format!("this construction is defined for N = {f} only")))
        }
        (Some(n), _) => Ok(n),
        (None, Some(f)) => Ok(f),
        (None, None) => Err(Error::InvalidArgument("--n is required for this construction".into())),
    }
}

/// Retargets an SU(2) or S_N scheme to the combined twirl when asked.
fn with_srf(scheme: ClassicalScheme, srf: Option<SrfArg>) -> Result<ClassicalScheme> {
    match srf.map(SrfKind::from) {
        None => Ok(scheme),
        Some(k) if k == scheme.srf() => Ok(scheme),
        Some(SrfKind::Both) => scheme.for_both(),
        Some(k) => Err(Error::InvalidArgument(format!("{} cannot be certified against {k}", scheme.construction()))),
    }
}

fn generate(a: &GenerateArgs) -> Result<Scheme> {
    let srf = |default: SrfKind| a.srf.map_or(default, SrfKind::from);
    Ok(match a.construction {
        Construction::Tetrahedron => {
            require_n(a, Some(2))?;
            Scheme::Classical(with_srf(tetrahedron_states()?, a.srf)?)
        }
        Construction::Octet => {
            require_n(a, Some(3))?;
            Scheme::Classical(with_srf(three_qubit_octet()?, a.srf)?)
        }
        Construction::Su2Classical => {
            let n = require_n(a, None)?;
            let two_j_min = match &a.jmin {
                Some(s) => parse_two_j(s)?,
                None => best_jmin(n)?,
            };
            Scheme::Classical(with_srf(su2_classical_scheme(n, two_j_min)?, a.srf)?)
        }
        Construction::PermClassical => {
            let n = require_n(a, None)?;
            let irreps = match &a.irreps {
                Some(list) => Some(list.iter().map(|s| parse_two_j(s)).collect::<Result<Vec<_>>>()?),
                None => None,
            };
            Scheme::Classical(with_srf(perm_classical_scheme(n, irreps.as_deref())?, a.srf)?)
        }
        Construction::BothClassical => {
            let n = require_n(a, None)?;
            with_srf(both_private_classical_scheme(n)?, a.srf).map(Scheme::Classical)?
        }
        Construction::QuantumBasis => Scheme::Classical(quantum_basis_scheme(require_n(a, None)?, srf(SrfKind::Su2))?),
        Construction::Quantum => Scheme::Quantum(quantum_scheme(require_n(a, None)?, srf(SrfKind::Su2))?),
        Construction::Sabotaged => {
            let n = a.n.unwrap_or(2);
            Scheme::Classical(sabotaged_scheme(n, srf(SrfKind::Su2))?)
        }
    })
}

fn best_jmin(n: usize) -> Result<u32> {
    let n32 = n as u32;
    let mut best: Option<(usize, u32)> = None;
    for two_j_min in (n32 % 2..n32).step_by(2) {
        let size = su2_classical_size(n, two_j_min)?;
        if best.is_none_or(|(s, _)| size > s) {
            best = Some((size, two_j_min));
        }
    }
    best.map(|(_, tj)| tj)
        .ok_or_else(|| Error::InvalidArgument(format!("no valid j_min for N = {n}")))
}

fn cmd_generate(a: &GenerateArgs) -> Result<i32> {
    let scheme = generate(a)?;
    match &a.out {
        Some(path) => {
            write_scheme(&scheme, path)?;
            eprintln!("wrote {} ({})", path.display(), scheme.id());
        }
        None => println!("{}", scheme.to_json()?),
    }
    Ok(EXIT_OK)
}

fn cmd_certify(a: &CertifyArgs, stamp: bool) -> Result<i32> {
    let scheme = read_scheme(&a.input).map_err(|e| match e {
        Error::Io(io) => Error::Format(format!("{}: {io}", a.input.display())),
        other => other,
    })?;
    if !(a.tol > 0.0 && a.holevo_tol > 0.0) {
        return Err(Error::InvalidArgument("tolerances must be positive".into()));
    }
    let tol = Tolerances { tol: a.tol, holevo_tol: a.holevo_tol };
    let report = certify_scheme(&scheme, a.n_random, a.seed, tol)?;
    let text = match a.format {
        Format::Json => to_json(&report, stamp)?,
        Format::Text => {
            let mut s = format!("{}: {}\n", report.scheme_id, if report.passed { "PASS" } else { "FAIL" });
            let _ = writeln!(s, "  states               {}", report.n_states);
            let _ = writeln!(s, "  orthogonality defect {:.3e}", report.orthogonality_defect);
            let _ = writeln!(s, "  privacy defect       {:.3e}", report.privacy_defect);
            let _ = writeln!(s, "  rho0 residual        {:.3e}", report.rho0_residual);
            let _ = writeln!(s, "  Holevo (bits)        {:.3e}", report.holevo_bits);
            let _ = writeln!(s, "  bound                {}", report.bound_used);
            for f in &report.failures {
                let _ = writeln!(s, "  failed: {f}");
            }
            s
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(if report.passed { EXIT_OK } else { EXIT_FAIL })
}

fn capacity_text(rows: &[CapacityRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>3} | {:>9} {:>9} | {:>9} {:>9} | {:>9} {:>9} | {:>9} {:>9} {:>9}",
        "N", "su2 q", "su2 c", "perm q", "perm c", "both q", "both c", "su2 bnd", "perm bnd", "both bnd"
    );
    for chunk in rows.chunks(3) {
        let _ = write!(s, "{:>3} |", chunk[0].n_qubits);
        for r in chunk {
            let mark = |below: bool| if below { "*" } else { " " };
            let _ = write!(
                s,
                " {:>8.4}{} {:>8.4}{} |",
                r.quantum_qubits,
                mark(r.quantum_below_asymptotic),
                r.classical_cbits,
                mark(r.classical_below_asymptotic)
            );
        }
        for r in chunk {
            let _ = write!(s, " {:>9.4}", r.bound_cbits);
        }
        s.push('\n');
    }
    s.push_str("q: private qubits, c: private c-bits (log2 of the largest constructed scheme),\n");
    s.push_str("bnd: log2 of the classical message bound; * marks values below the large-N formula\n");
    s
}

#[derive(Serialize)]
struct CapacityReport<'a> {
    n_min: usize,
    n_max: usize,
    rows: &'a [CapacityRow],
}

fn cmd_capacity(a: &CapacityArgs, stamp: bool) -> Result<i32> {
    let rows = capacity_table(a.n_min, a.n_max)?;
    let text = match a.format {
        Format::Text => capacity_text(&rows),
        Format::Json => to_json(&CapacityReport { n_min: a.n_min, n_max: a.n_max, rows: &rows }, stamp)?,
    };
    emit(&text, a.out.as_deref())?;
    Ok(EXIT_OK)
}

fn cmd_simulate(a: &SimulateArgs, stamp: bool) -> Result<i32> {
    let scheme = match read_scheme(&a.input)? {
        Scheme::Classical(c) => c,
        Scheme::Quantum(_) => {
            return Err(Error::InvalidArgument("simulation needs a classical scheme".into()));
        }
    };
    if let Some(k) = a.reuse_frame {
        if k != 2 {
            return Err(Error::InvalidArgument("--reuse-frame supports exactly 2 transmissions".into()));
        }
    }
    let strategy = match a.strategy {
        Strategy::Helstrom => EveStrategy::HelstromPairwise { a: a.pair.0, b: a.pair.1 },
        Strategy::Fixed => EveStrategy::FixedMeasurement,
    };
    let run = run_protocol(&scheme, a.trials, a.seed, strategy)?;
    if let Some(path) = &a.out {
        std::fs::write(path, run.transcript_jsonl()?)?;
    }
    let mut summary = serde_json::to_value(run.summary())?;
    if a.reuse_frame.is_some() {
        summary["reuse_frame"] = serde_json::to_value(reuse_frame_demo(&scheme, a.trials, a.seed)?)?;
    }
    emit(&to_json(&summary, stamp)?, a.summary.as_deref())?;
    Ok(EXIT_OK)
}
