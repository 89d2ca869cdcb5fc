//! The `gadgetc` command-line driver.
//!
//! Subcommands: `compile`, `verify-history`, `sweep-epsilon`, `gap-sweep`.
//! Every output is deterministic given the inputs and `--seed`, all numeric
//! output carries 12 significant digits, and every emitted file records the
//! run configuration (including the seed) in its header comments.
//!
//! Exit codes: 0 success / thresholds met, 1 thresholds failed, 2 parse
//! error, 3 validation error, 4 resource limit.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{BitString, Circuit};
use crate::fmt_sig12 as sig;
use crate::gadget::{compile, GadgetKind};
use crate::history::HistoryProblem;
use crate::pauli::{dense_qubit_limit, OperatorSum, SetName};
use crate::spectral::{
    eigensolve_dense, gadget_error_sweep, gap_sweep, ground_space_overlap, sweep_csv, uniform_grid,
};
use crate::{Error, Result};

/// Overlap threshold of the history verdict.
const OVERLAP_THRESHOLD: f64 = 1.0 - 1e-8;
/// Bounds of the random verification suite.
const RANDOM_MAX_N: usize = 3;
const RANDOM_MAX_T: usize = 4;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Zzxx,
    Zx,
}

impl From<ModelArg> for SetName {
    fn from(m: ModelArg) -> SetName {
        match m {
            ModelArg::Zzxx => SetName::Zzxx,
            ModelArg::Zx => SetName::Zx,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ValidateModelArg {
    Zzxx,
    Zx,
    RealSubset,
}

impl From<ValidateModelArg> for SetName {
    fn from(m: ValidateModelArg) -> SetName {
        match m {
            ValidateModelArg::Zzxx => SetName::Zzxx,
            ValidateModelArg::Zx => SetName::Zx,
            ValidateModelArg::RealSubset => SetName::RealSubset,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gadgetc",
    version,
    about = "Compile and certify restricted-interaction spin Hamiltonians"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rewrite a real 2-local Hamiltonian into a restricted interaction set.
    Compile {
        /// Target interaction set.
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Error budget per replaced term.
        #[arg(long)]
        eps: f64,
        /// Energy scale of the gadget parameters.
        #[arg(long, default_value_t = 1.0)]
        ebar: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output Hamiltonian file; a `<out>.report` sidecar rides along.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Input Hamiltonian file.
        target: PathBuf,
    },
    /// Build a history-state Hamiltonian and certify annihilation, ground
    /// overlap and gap.
    VerifyHistory {
        /// Classical input bits (defaults to all zeros).
        #[arg(long)]
        x: Option<String>,
        /// Include the clock-init penalty (lifts the residual; see docs).
        #[arg(long)]
        include_clockinit: bool,
        /// Residual threshold for the pass verdict.
        #[arg(long, default_value_t = 1e-10)]
        tol_residual: f64,
        /// Run a seeded random-circuit suite of this size instead of a file.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the built Hamiltonian to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Circuit file (omit when using --random).
        circuit: Option<PathBuf>,
    },
    /// Certify one gadget kind across an error-budget sweep; emits CSV.
    SweepEpsilon {
        /// Gadget kind: zx-from-zzxx, zz-from-zx or xx-from-zx.
        #[arg(long)]
        kind: String,
        /// Target coupling coefficient.
        #[arg(long)]
        coeff: f64,
        /// Comma-separated error budgets in (0,1), descending.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        ebar: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a Hamiltonian file against an interaction set.
    Validate {
        #[arg(long, value_enum)]
        model: ValidateModelArg,
        /// Hamiltonian file.
        file: PathBuf,
    },
    /// Gap of the interpolation between two Hamiltonians; emits `s,gap` CSV.
    GapSweep {
        /// Number of interpolation grid points.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Initial Hamiltonian file.
        hi: PathBuf,
        /// Final Hamiltonian file.
        hf: PathBuf,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) | Error::Invalid(_) => 2,
        Error::DenseLimit { .. } | Error::NoConvergence { .. } => 4,
        _ => 3,
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Parse and execute; separated from [`run`] for tests.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Compile {
            model,
            eps,
            ebar,
            seed,
            out,
            target,
        } => cmd_compile(model.into(), eps, ebar, seed, out, &target),
        Command::VerifyHistory {
            x,
            include_clockinit,
            tol_residual,
            random,
            seed,
            out,
            circuit,
        } => cmd_verify_history(
            x,
            include_clockinit,
            tol_residual,
            random,
            seed,
            out,
            circuit,
        ),
        Command::SweepEpsilon {
            kind,
            coeff,
            eps,
            ebar,
            seed,
            out,
        } => cmd_sweep_epsilon(&kind, coeff, &eps, ebar, seed, out),
        Command::Validate { model, file } => cmd_validate(model.into(), &file),
        Command::GapSweep {
            grid,
            seed,
            out,
            hi,
            hf,
        } => cmd_gap_sweep(grid, seed, out, &hi, &hf),
    }
}

fn cmd_validate(model: SetName, path: &Path) -> Result<i32> {
    let h = OperatorSum::parse(&std::fs::read_to_string(path)?)?.canonicalize();
    let violations = crate::pauli::InteractionSet::named(model).validate(&h);
    if violations.is_empty() {
        println!(
            "pass: {} terms in the {} set",
            h.terms().len(),
            model.label()
        );
        Ok(0)
    } else {
        println!("fail: {} violating term(s)", violations.len());
        for t in &violations {
            println!("  {} {}", t.coefficient, t.word());
        }
        Ok(3)
    }
}

fn cmd_compile(
    model: SetName,
    eps: f64,
    ebar: f64,
    seed: u64,
    out: Option<PathBuf>,
    target_path: &Path,
) -> Result<i32> {
    let text = std::fs::read_to_string(target_path)?;
    let target = OperatorSum::parse(&text)?;
    let compiled = compile(&target, model, eps, ebar)?;

    let config = format!(
        "gadgetc compile model={} eps={} ebar={} seed={}",
        model.label().to_lowercase(),
        sig(eps),
        sig(ebar),
        seed
    );
    let header = vec![
        config.clone(),
        format!(
            "system qubits 1..{}, ancilla qubits {}..{}",
            compiled.system_qubits,
            compiled.system_qubits + 1,
            compiled.total_qubits()
        ),
        format!(
            "total declared shift: {}",
            sig(compiled.total_declared_shift)
        ),
    ];
    let ham_text = compiled.hamiltonian.serialize(&header);
    let report_text = format!("# {config}\n{}", compiled.report());

    match &out {
        Some(path) => {
            std::fs::write(path, &ham_text)?;
            let report_path = PathBuf::from(format!("{}.report", path.display()));
            std::fs::write(&report_path, &report_text)?;
            println!("wrote {}", path.display());
            println!("wrote {}", report_path.display());
        }
        None => {
            print!("{ham_text}");
            eprint!("{report_text}");
        }
    }
    Ok(0)
}

struct HistoryVerdict {
    n: usize,
    t: usize,
    residual: f64,
    overlap: f64,
    gap: f64,
    pass: bool,
}

fn verify_one(
    problem: &HistoryProblem,
    include_clockinit: bool,
    tol_residual: f64,
) -> Result<HistoryVerdict> {
    let total_qubits = problem.total_qubits();
    if total_qubits > dense_qubit_limit() {
        return Err(Error::DenseLimit {
            qubits: total_qubits,
            limit: dense_qubit_limit(),
        });
    }
    let h = problem.hamiltonian(include_clockinit)?;
    let psi = problem.history_state()?;
    let residual = h.apply(&psi)?.norm();
    let dense = h.to_dense()?;
    let overlap = ground_space_overlap(&dense, &psi);
    let mut report = eigensolve_dense(&dense, 2)?;
    report.overlaps.push(("history_state".to_string(), overlap));
    let pass = residual <= tol_residual && overlap >= OVERLAP_THRESHOLD;
    Ok(HistoryVerdict {
        n: problem.n(),
        t: problem.t(),
        residual,
        overlap,
        gap: report.gap,
        pass,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify_history(
    x: Option<String>,
    include_clockinit: bool,
    tol_residual: f64,
    random: Option<usize>,
    seed: u64,
    out: Option<PathBuf>,
    circuit_path: Option<PathBuf>,
) -> Result<i32> {
    if tol_residual.is_nan() || tol_residual <= 0.0 {
        return Err(Error::Invalid("tol-residual must be positive".into()));
    }
    let config = format!(
        "gadgetc verify-history include_clockinit={include_clockinit} tol_residual={} seed={seed}",
        sig(tol_residual)
    );

    if let Some(count) = random {
        if count == 0 {
            return Err(Error::Invalid("--random needs a positive count".into()));
        }
        if circuit_path.is_some() {
            return Err(Error::Invalid(
                "--random and a circuit file are exclusive".into(),
            ));
        }
        println!("# {config} random={count}");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut all_pass = true;
        let mut max_residual: f64 = 0.0;
        let mut min_overlap: f64 = 1.0;
        let mut passed = 0usize;
        for idx in 1..=count {
            let n = rng.gen_range(1..=RANDOM_MAX_N);
            let t = rng.gen_range(1..=RANDOM_MAX_T);
            let circuit = Circuit::random(&mut rng, n, t);
            let bits = BitString::new((0..n).map(|_| rng.gen_bool(0.5)).collect());
            let problem = HistoryProblem::new(circuit, bits)?;
            let v = verify_one(&problem, include_clockinit, tol_residual)?;
            all_pass &= v.pass;
            passed += v.pass as usize;
            max_residual = max_residual.max(v.residual);
            min_overlap = min_overlap.min(v.overlap);
            println!(
                "circuit {idx}: n={} T={} residual={} overlap={} gap={} {}",
                v.n,
                v.t,
                sig(v.residual),
                sig(v.overlap),
                sig(v.gap),
                if v.pass { "pass" } else { "fail" }
            );
        }
        println!(
            "summary: {passed}/{count} pass max_residual={} min_overlap={}",
            sig(max_residual),
            sig(min_overlap)
        );
        println!("verdict {}", if all_pass { "pass" } else { "fail" });
        return Ok(if all_pass { 0 } else { 1 });
    }

    let path =
        circuit_path.ok_or_else(|| Error::Invalid("need a circuit file or --random N".into()))?;
    let text = std::fs::read_to_string(&path)?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let circuit = Circuit::parse(&text, &base)?;
    let bits = match x {
        Some(s) => BitString::from_str(&s)?,
        None => BitString::zeros(circuit.n()),
    };
    let problem = HistoryProblem::new(circuit, bits)?;
    let v = verify_one(&problem, include_clockinit, tol_residual)?;

    println!("# {config} x={}", problem.input);
    println!("n {}", v.n);
    println!("T {}", v.t);
    println!("residual {}", sig(v.residual));
    println!("overlap {}", sig(v.overlap));
    println!("gap {}", sig(v.gap));
    println!("verdict {}", if v.pass { "pass" } else { "fail" });

    if let Some(out_path) = out {
        let mut header = vec![config.clone()];
        header.extend(problem.header(include_clockinit));
        let h = problem.hamiltonian(include_clockinit)?;
        std::fs::write(&out_path, h.serialize(&header))?;
        println!("wrote {}", out_path.display());
    }
    Ok(if v.pass { 0 } else { 1 })
}

fn cmd_sweep_epsilon(
    kind_s: &str,
    coeff: f64,
    eps_list: &[f64],
    ebar: f64,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<i32> {
    let kind = GadgetKind::parse(kind_s)?;
    if eps_list.is_empty() {
        return Err(Error::Invalid("empty eps list".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Invalid(
            "eps values must be strictly descending".into(),
        ));
    }
    let rows = gadget_error_sweep(kind, coeff, eps_list, ebar)?;
    let config = format!(
        "gadgetc sweep-epsilon kind={} coeff={} ebar={} seed={}",
        kind.label(),
        sig(coeff),
        sig(ebar),
        seed
    );
    let csv = sweep_csv(&rows, &[config]);
    write_or_print(&out, &csv)?;
    Ok(0)
}

fn cmd_gap_sweep(
    grid: usize,
    seed: u64,
    out: Option<PathBuf>,
    hi_path: &Path,
    hf_path: &Path,
) -> Result<i32> {
    if grid < 2 {
        return Err(Error::Invalid("grid needs at least 2 points".into()));
    }
    let hi = OperatorSum::parse(&std::fs::read_to_string(hi_path)?)?;
    let hf = OperatorSum::parse(&std::fs::read_to_string(hf_path)?)?;
    let sweep = gap_sweep(&hi, &hf, &uniform_grid(grid))?;
    let config = format!("gadgetc gap-sweep grid={grid} seed={seed}");
    let mut csv = sweep.to_csv(&[config]);
    csv.push_str(&format!(
        "# min gap {} at s={}\n",
        sig(sweep.min_gap),
        sig(sweep.argmin_s)
    ));
    write_or_print(&out, &csv)?;
    Ok(0)
}
