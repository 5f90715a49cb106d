//! Command-line front end for the `hierstate` library.
//!
//! Exit codes: 0 success, 1 domain failure (unphysical state, Pauli
//! violation, library error), 2 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use hierstate::complexity::{self, series, CoderRegistry, MatrixElementSeries, DEFAULT_THRESHOLD};
use hierstate::dynamics::{self, run_sweep, IntegratorRegistry, SimConfig, SweepSpec};
use hierstate::physicality::{check_node, pauli_check_scoped};
use hierstate::rep_theory::{decompose_product, IrrepLabel};
use hierstate::repair::{amputate, ionize_recombine, repair, ComponentSpec, Organism, RemovalAction};
use hierstate::state_tree::{self, validate_tree, HierState};
use hierstate::bundled;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Parser)]
#[command(name = "hierstate", version, about = "Hierarchical quantum states: physicality, repair cascades, toy dynamics, description length")]
struct Cli {
    /// Seed for every random draw made by the command.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Output path (CSV for `simulate`, directory for sweeps, file for generators).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a tensor product of SU(2) irreps into irreducible blocks,
    /// T(j1) ⊗ … ⊗ T(jn) = ⊕ D_k, and check the dimension identity.
    Decompose {
        /// Comma-separated spins, e.g. `1/2,1/2,1`.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        spins: Vec<IrrepLabel>,
    },
    /// Check that each parent basis label (J, M) occurs in the product of its
    /// children's irreps with M = Σ m_i.
    Validate {
        #[arg(long)]
        state: PathBuf,
    },
    /// Generalized Pauli principle: no two fermions that are components of
    /// the same system one level up may share a quantum state.
    Pauli {
        #[arg(long)]
        state: PathBuf,
        /// How many levels below a node its fermions are compared (1 = direct children).
        #[arg(long, default_value_t = 1)]
        scope_depth: usize,
    },
    /// Cut components off an organism {ψ_A; {ψ_AC1 … ψ_ACN}} and descend level
    /// by level until the product of component irreps contains T(G_A) again.
    Repair {
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated component indices to remove.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        remove: Vec<usize>,
        #[arg(long)]
        max_depth: u32,
    },
    /// Ionization A + γ → A⁺ + e followed by recombination A⁺ + e → A.
    Ionize {
        #[arg(long)]
        scenario: PathBuf,
        /// Index of the component playing the electron.
        #[arg(long)]
        electron: usize,
        /// Spin of the captured component (defaults to the removed one).
        #[arg(long)]
        capture_spin: Option<IrrepLabel>,
    },
    /// Integrate the two-block toy model H = m1 v1²/2 + m2 v2²/2 + U(|x1-x2|) + Λ(S1 S2)
    /// with m_i = m0 + λ(v_i²) s_a^i s_b^i.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// `<param>=<start>:<end>:<count>` over lambda0, lambda1, m0 or dt.
        #[arg(long)]
        sweep: Option<SweepSpec>,
        /// Override the integrator named in the config.
        #[arg(long)]
        integrator: Option<String>,
    },
    /// Compare the coded length of a quantized E_mn(t) series with its raw
    /// length; short codes mean the series follows a rule.
    Classify {
        /// CSV with one column of values (a non-numeric header line is skipped).
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        quantization: f64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value = complexity::MtfRleGamma::NAME)]
        coder: String,
    },
    /// Write a one-column series (uniform symbols, random walk or cosine).
    Series {
        #[arg(long, value_enum)]
        kind: SeriesKind,
        #[arg(long, default_value_t = 4096)]
        len: usize,
        #[arg(long, default_value_t = 256)]
        alphabet: u32,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long, default_value_t = std::f64::consts::TAU / 1024.0)]
        omega: f64,
    },
    /// State-file utilities for the vector-space operations aΨ and Φ + Ψ.
    #[command(subcommand)]
    State(StateCommand),
    /// Print a bundled example file.
    Example {
        /// File name; omit to list.
        name: Option<String>,
    },
    /// List the registered integrators and coders.
    Strategies,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    Uniform,
    Walk,
    Cos,
}

#[derive(Subcommand)]
enum StateCommand {
    /// Report structural problems of a state file.
    Check {
        #[arg(long)]
        state: PathBuf,
    },
    /// Multiply every amplitude by a complex scalar `re[,im]`.
    Scale {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1..=2, allow_negative_numbers = true)]
        by: Vec<f64>,
    },
    /// Add two congruent states node by node.
    Add {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
}

/// Domain outcome of a subcommand that ran to completion.
enum Verdict {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_state(path: &Path) -> Result<HierState> {
    Ok(HierState::from_json(&read(path)?)?)
}

fn load_organism(path: &Path) -> Result<Organism> {
    Ok(Organism::from_json(&read(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Verdict> {
    let machine = cli.format == Format::Machine;
    match &cli.command {
        Command::Decompose { spins } => {
            let sum = decompose_product(spins)?;
            let product: u64 = spins.iter().map(|s| s.dim()).product();
            let total = sum.total_dim();
            if machine {
                for (label, mult) in sum.iter().rev() {
                    println!("irrep j={label} mult={mult}");
                }
                println!("dimension product={product} sum={total} ok={}", product == total);
            } else {
                println!("{sum}");
                println!("dimension check: {product} = {total}");
            }
            Ok(if product == total { Verdict::Pass } else { Verdict::Fail })
        }
        Command::Validate { state } => {
            let psi = load_state(state)?;
            let violations = validate_tree(&psi);
            if !violations.is_empty() {
                for v in &violations {
                    println!("{v}");
                }
                bail!("InvalidState: {} structural violation(s)", violations.len());
            }
            let reports = check_node(&psi);
            for (path, r) in &reports {
                if machine {
                    let reasons: Vec<String> = r.reasons.iter().map(|x| x.to_string()).collect();
                    println!(
                        "report path={path} physical={} reasons={} multiplicity={}",
                        r.physical,
                        if reasons.is_empty() { "-".to_string() } else { reasons.join(",") },
                        r.parent_multiplicity
                    );
                } else {
                    println!("{path}: {r}");
                }
            }
            Ok(if reports.iter().all(|(_, r)| r.physical) { Verdict::Pass } else { Verdict::Fail })
        }
        Command::Pauli { state, scope_depth } => {
            let psi = load_state(state)?;
            let violations = pauli_check_scoped(&psi, *scope_depth);
            for v in &violations {
                if machine {
                    println!("violation system={} first={} second={}", v.system, v.first, v.second);
                } else {
                    println!("{v}");
                }
            }
            if machine {
                println!("violations={}", violations.len());
            } else if violations.is_empty() {
                println!("no Pauli violations");
            }
            Ok(if violations.is_empty() { Verdict::Pass } else { Verdict::Fail })
        }
        Command::Repair { scenario, remove, max_depth } => {
            let org = load_organism(scenario)?;
            let gamma = RemovalAction::new(remove.iter().copied(), org.components.len())?;
            let remainder = amputate(&org, &gamma)?;
            let result = repair(&remainder, *max_depth);
            if !machine {
                let removed: Vec<&str> = remainder.removed.iter().map(|c| c.name.as_str()).collect();
                println!("removed: {}", removed.join(", "));
                println!("remainder complete: {}", remainder.complete);
                println!("{result}");
            }
            let witness: Vec<String> = result.witness_irreps().iter().map(|l| l.to_string()).collect();
            let mut block = serde_json::to_value(&result)?;
            block["witness"] = serde_json::json!(witness);
            block["target_irrep"] = serde_json::json!(org.target_irrep.to_string());
            println!("RESULT {}", serde_json::to_string(&block)?);
            Ok(if result.feasible { Verdict::Pass } else { Verdict::Fail })
        }
        Command::Ionize { scenario, electron, capture_spin } => {
            let org = load_organism(scenario)?;
            let capture = capture_spin.map(|j| ComponentSpec::leaf("captured", j));
            let out = ionize_recombine(&org, *electron, capture)?;
            if machine {
                println!(
                    "broken_complete={} restored_complete={}",
                    out.broken_complete, out.restored_complete
                );
            } else {
                println!(
                    "after removing {} (spin {}): complete = {}",
                    out.removed.name, out.removed.irrep, out.broken_complete
                );
                println!(
                    "after capturing {} (spin {}): complete = {}",
                    out.captured.name, out.captured.irrep, out.restored_complete
                );
            }
            Ok(Verdict::Pass)
        }
        Command::Simulate { config, sweep, integrator } => {
            let mut cfg: SimConfig = serde_json::from_str(&read(config)?)
                .map_err(|e| anyhow!("InvalidConfig: {e}"))?;
            if let Some(name) = integrator {
                cfg.integrator = name.clone();
            }
            match sweep {
                Some(spec) => simulate_sweep(&cfg, spec, cli.out.as_deref(), machine),
                None => simulate_single(&cfg, cli.out.as_deref(), machine),
            }
        }
        Command::Classify { series, quantization, threshold, coder } => {
            let text = read(series)?;
            let values = parse_column(&text)?;
            let s = MatrixElementSeries::new((0, 0), values, *quantization)?;
            let registry = CoderRegistry::with_builtins();
            let report = complexity::classify_with(registry.get(coder)?, &s, *threshold)?;
            println!("{}", report.machine_line());
            if !machine {
                println!("{report}");
            }
            Ok(Verdict::Pass)
        }
        Command::Series { kind, len, alphabet, step, omega } => {
            let values = match kind {
                SeriesKind::Uniform => series::uniform_symbols(cli.seed, *len, *alphabet),
                SeriesKind::Walk => series::random_walk(cli.seed, *len, *step),
                SeriesKind::Cos => series::cosine(*len, *omega),
            };
            let mut text = String::from("value\n");
            for v in values {
                text.push_str(&format!("{v:.16e}\n"));
            }
            emit(cli.out.as_deref(), &text)?;
            Ok(Verdict::Pass)
        }
        Command::State(cmd) => state_command(cmd, cli.out.as_deref(), machine),
        Command::Example { name } => {
            match name {
                None => {
                    for (n, _) in bundled::FILES {
                        println!("{n}");
                    }
                }
                Some(n) => {
                    let text = bundled::get(n).ok_or_else(|| anyhow!("UnknownExample: `{n}`"))?;
                    emit(cli.out.as_deref(), text)?;
                }
            }
            Ok(Verdict::Pass)
        }
        Command::Strategies => {
            for name in IntegratorRegistry::with_builtins().names() {
                println!("integrator {name}");
            }
            for name in CoderRegistry::with_builtins().names() {
                println!("coder {name}");
            }
            for name in hierstate::physicality::GroupRegistry::with_builtins().names() {
                println!("group {name}");
            }
            Ok(Verdict::Pass)
        }
    }
}

fn parse_column(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if i == 0 => continue,
            Err(e) => bail!("InvalidSeries: line {}: `{field}`: {e}", i + 1),
        }
    }
    Ok(values)
}

fn simulate_single(cfg: &SimConfig, out: Option<&Path>, machine: bool) -> Result<Verdict> {
    let (traj, error) = match dynamics::run(cfg) {
        Ok(t) => (t, None),
        Err(aborted) => (aborted.partial, Some(aborted.source)),
    };
    let mut csv = Vec::new();
    traj.write_csv(&mut csv)?;
    match out {
        Some(p) => fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?,
        None if machine => {}
        None => io::stdout().write_all(&csv)?,
    }
    let drift = traj.max_relative_drift();
    let status = error.as_ref().map_or("ok".to_string(), |e| e.to_string());
    if machine || out.is_some() {
        println!("samples={} max_relative_drift={drift:.6e} status={status}", traj.len());
    }
    match error {
        Some(e) => Err(e.into()),
        None => Ok(Verdict::Pass),
    }
}

fn simulate_sweep(cfg: &SimConfig, spec: &SweepSpec, out: Option<&Path>, machine: bool) -> Result<Verdict> {
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("sweep"));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let runs = run_sweep(cfg, spec);
    let mut summary = format!("index,{},samples,max_relative_drift,status\n", spec.param);
    let mut all_ok = true;
    for (i, r) in runs.iter().enumerate() {
        let traj = r.trajectory();
        let mut csv = Vec::new();
        traj.write_csv(&mut csv)?;
        let path = dir.join(format!("run_{i:03}.csv"));
        fs::write(&path, &csv).with_context(|| format!("writing {}", path.display()))?;
        let status = match &r.outcome {
            Ok(_) => "ok".to_string(),
            Err(e) => {
                all_ok = false;
                e.source.to_string().split(':').next().unwrap_or("error").to_string()
            }
        };
        summary.push_str(&format!(
            "{i},{:.16e},{},{:.6e},{status}\n",
            r.value,
            traj.len(),
            traj.max_relative_drift()
        ));
    }
    fs::write(dir.join("summary.csv"), &summary)?;
    if machine {
        print!("{summary}");
    } else {
        println!("{:>5} {:>24} {:>10} {:>14}  status", "index", spec.param.to_string(), "samples", "max drift");
        for line in summary.lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            println!("{:>5} {:>24} {:>10} {:>14}  {}", f[0], f[1], f[2], f[3], f[4]);
        }
        println!("wrote {} run(s) and summary.csv to {}", runs.len(), dir.display());
    }
    Ok(if all_ok { Verdict::Pass } else { Verdict::Fail })
}

fn state_command(cmd: &StateCommand, out: Option<&Path>, machine: bool) -> Result<Verdict> {
    match cmd {
        StateCommand::Check { state } => {
            let psi = load_state(state)?;
            let violations = validate_tree(&psi);
            for v in &violations {
                println!("{v}");
            }
            if machine {
                println!("nodes={} violations={}", psi.node_count(), violations.len());
            } else if violations.is_empty() {
                println!("well-formed ({} node(s))", psi.node_count());
            }
            Ok(if violations.is_empty() { Verdict::Pass } else { Verdict::Fail })
        }
        StateCommand::Scale { state, by } => {
            let psi = load_state(state)?;
            let a = Complex64::new(by[0], by.get(1).copied().unwrap_or(0.0));
            let scaled = state_tree::scalar_mul(a, &psi);
            emit(out, &(scaled.to_json_pretty() + "\n"))?;
            Ok(Verdict::Pass)
        }
        StateCommand::Add { state, other } => {
            let sum = state_tree::add(&load_state(state)?, &load_state(other)?)?;
            emit(out, &(sum.to_json_pretty() + "\n"))?;
            Ok(Verdict::Pass)
        }
    }
}
