//! Command-line front end over the library.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quancorde::bench;
use quancorde::canary::{is_clifford, make_canary, make_random_canary};
use quancorde::circuit::{emit_qasm, parse_qasm};
use quancorde::mitigate::Report;
use quancorde::noisysim::{run_shots, BaseRates, Counts, NoiseModel};
use quancorde::pipeline::{self, kickback, RunConfig};
use quancorde::transpile::decompose_to_basis;
use quancorde::{stabsim, Circuit};

#[derive(Parser)]
#[command(name = "quancorde", version, about = "Canary-ordered ensemble post-processing for noisy circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline from a TOML config.
    Run {
        config: PathBuf,
        /// Output directory for report.json, records.csv and summary.txt.
        #[arg(long, default_value = "quancorde-out")]
        out: PathBuf,
        /// Override `[run] seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write the nearest-Clifford canary of a circuit.
    Canary {
        input: PathBuf,
        output: PathBuf,
        /// Draw every RZ uniformly from the quarter turns instead.
        #[arg(long)]
        random: Option<u64>,
    },
    /// Sample a circuit, noisy by default.
    Simulate {
        input: PathBuf,
        /// NoiseModel or BaseRates TOML. Defaults to the base rates on an
        /// all-to-all device.
        #[arg(long)]
        noise: Option<PathBuf>,
        #[arg(long, default_value_t = 8192)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Noiseless sampling; Clifford circuits use the tableau simulator.
        #[arg(long)]
        ideal: bool,
        /// Emit JSON instead of CSV.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a benchmark circuit and its ideal-outcome sidecar.
    BenchGen {
        #[command(subcommand)]
        family: Family,
        #[arg(long, default_value = ".", global = true)]
        out: PathBuf,
    },
    /// Re-render a report.json as CSV and summary.
    Report {
        report: PathBuf,
        /// Write records.csv and summary.txt here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Ripple-carry adder computing a + b.
    Adder { bits: usize, a: u64, b: u64 },
    Qft { n: usize },
    /// A named QAOA fixture, e.g. QAOA6_star.
    Qaoa { fixture: String },
    /// Two-qubit phase kickback with output 11.
    Kickback,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8) -> impl Fn(String) -> Failure {
    move |message| Failure { code, message }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(2)(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(1)(format!("{}: {e}", path.display())))
}

fn load_qasm(path: &Path) -> Result<Circuit, Failure> {
    let mut c = parse_qasm(&read(path)?).map_err(|e| fail(2)(format!("{}: {e}", path.display())))?;
    if let Some(stem) = path.file_stem() {
        c.name = stem.to_string_lossy().into_owned();
    }
    Ok(c)
}

fn noise_model(path: Option<&Path>, n: usize) -> Result<NoiseModel, Failure> {
    let Some(path) = path else {
        return Ok(NoiseModel::all_to_all(n, &BaseRates::default()));
    };
    let text = read(path)?;
    if let Ok(m) = toml::from_str::<NoiseModel>(&text) {
        return Ok(m);
    }
    let rates: BaseRates = toml::from_str(&text).map_err(|e| fail(2)(format!("{}: {e}", path.display())))?;
    Ok(NoiseModel::all_to_all(n, &rates))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { config, out, seed } => {
            let mut cfg = RunConfig::from_file(&config).map_err(|e| fail(2)(e.to_string()))?;
            if let Some(s) = seed {
                cfg.run.seed = s;
            }
            let outcome = pipeline::run(&cfg).map_err(|e| fail(e.exit_code() as u8)(e.to_string()))?;
            pipeline::write_report(&outcome.report, &out).map_err(|e| fail(1)(e.to_string()))?;
            print!("{}", outcome.report.summary());
        }
        Command::Canary { input, output, random } => {
            let c = load_qasm(&input)?;
            let basis = if c.gates().iter().all(|g| g.is_basis()) {
                c
            } else {
                eprintln!("decomposing source gates to the device basis");
                decompose_to_basis(&c).map_err(|e| fail(2)(e.to_string()))?
            };
            let k = match random {
                Some(seed) => make_random_canary(&basis, seed),
                None => make_canary(&basis),
            }
            .map_err(|e| fail(2)(e.to_string()))?;
            write(&output, &emit_qasm(&k))?;
        }
        Command::Simulate {
            input,
            noise,
            shots,
            seed,
            ideal,
            json,
            out,
        } => {
            let c = load_qasm(&input)?;
            let basis = decompose_to_basis(&c).map_err(|e| fail(2)(e.to_string()))?;
            let counts: Counts = if ideal && is_clifford(&basis).unwrap_or(false) {
                stabsim::sample(&c, shots, seed).map_err(|e| fail(3)(e.to_string()))?
            } else {
                let model = if ideal {
                    NoiseModel::noiseless(c.num_qubits())
                } else {
                    noise_model(noise.as_deref(), c.num_qubits())?
                };
                run_shots(&basis, &model, shots, seed).map_err(|e| fail(3)(e.to_string()))?
            };
            let text = if json { counts.to_json() } else { counts.to_csv() };
            match out {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
        }
        Command::BenchGen { family, out } => {
            let (c, ideal) = match family {
                Family::Adder { bits, a, b } => {
                    let (c, s) = bench::adder(bits, a, b).map_err(|e| fail(2)(e.to_string()))?;
                    (c, [(s, 1.0)].into_iter().collect())
                }
                Family::Qft { n } => bench::qft(n).map_err(|e| fail(2)(e.to_string()))?,
                Family::Qaoa { fixture } => bench::qaoa_fixtures()
                    .into_iter()
                    .find(|f| f.name == fixture)
                    .ok_or_else(|| fail(2)(format!("unknown fixture {fixture}")))?
                    .build()
                    .map_err(|e| fail(3)(e.to_string()))?,
                Family::Kickback => (kickback(), [("11".parse().expect("literal"), 1.0)].into_iter().collect()),
            };
            fs::create_dir_all(&out).map_err(|e| fail(1)(e.to_string()))?;
            let qasm = out.join(format!("{}.qasm", c.name));
            let sidecar = out.join(format!("{}.json", c.name));
            write(&qasm, &emit_qasm(&c))?;
            let pairs = serde_json::to_string_pretty(&bench::sidecar(&ideal)).expect("serializes");
            write(&sidecar, &(pairs + "\n"))?;
            println!("{}\n{}", qasm.display(), sidecar.display());
        }
        Command::Report { report, out } => {
            let r = Report::from_json(&read(&report)?).map_err(|e| fail(2)(e.to_string()))?;
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).map_err(|e| fail(1)(e.to_string()))?;
                    write(&dir.join("records.csv"), &r.records_csv())?;
                    write(&dir.join("summary.txt"), &r.summary())?;
                }
                None => print!("{}", r.summary()),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("QUANCORDE_THREADS").ok().and_then(|v| v.parse().ok()) {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
