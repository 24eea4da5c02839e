//! End-to-end runs driven by a TOML config: build or load the circuit,
//! decompose, synthesize the canary, place every ensemble member, simulate
//! target and canary per member, and analyze.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench::{self, from_sidecar};
use crate::canary::make_canary;
use crate::circuit::{parse_qasm, Circuit};
use crate::mitigate::{analyze, AnalysisConfig, Distribution, EnsembleRun, MitigateError, Report, WeightFn};
use crate::noisysim::{make_diverse_ensemble, BaseRates, NoiseModel, NoisyProgram, SimError};
use crate::transpile::{decompose_to_basis, random_layouts, route, CouplingGraph, Layout, TranspileError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("simulation: {0}")]
    Sim(#[from] SimError),
    #[error("{0}")]
    EmptyStrings(MitigateError),
    #[error("analysis: {0}")]
    Analysis(MitigateError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl PipelineError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Sim(_) | PipelineError::Analysis(_) => 3,
            PipelineError::EmptyStrings(_) => 4,
            PipelineError::Io(_) => 1,
        }
    }
}

impl From<MitigateError> for PipelineError {
    fn from(e: MitigateError) -> Self {
        match e {
            MitigateError::EmptyStrings(_) => PipelineError::EmptyStrings(e),
            MitigateError::BadFMin(_) => PipelineError::Config(e.to_string()),
            e => PipelineError::Analysis(e),
        }
    }
}

impl From<TranspileError> for PipelineError {
    fn from(e: TranspileError) -> Self {
        PipelineError::Config(e.to_string())
    }
}

fn config_err(e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Config(e.to_string())
}

/// Source of the target circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CircuitSpec {
    /// OpenQASM 2 file, relative to the config file.
    Qasm { path: PathBuf },
    Adder { bits: usize, a: u64, b: u64 },
    Qft { n: usize },
    Qaoa {
        nodes: usize,
        edges: Vec<(usize, usize)>,
        gamma: f64,
        beta: f64,
    },
    /// A named entry of [`bench::qaoa_fixtures`].
    QaoaFixture { name: String },
    /// Two-qubit phase-kickback circuit whose only output is `11`.
    Kickback,
}

/// How ensemble members differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Distinct machines: one jittered noise model per member, one layout.
    Inter,
    /// One jittered machine, one random layout per member.
    Intra,
    /// Uniform noise scaled by `level_step · (k + 1)` for member `k`.
    Monotone,
}

impl Mode {
    pub fn default_members(self) -> usize {
        match self {
            Mode::Inter => 7,
            Mode::Intra => 50,
            Mode::Monotone => 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleConfig {
    pub mode: Mode,
    /// Defaults to 7 (inter), 50 (intra) or 20 (monotone).
    pub members: Option<usize>,
    pub base: BaseRates,
    /// Multiplies every base rate.
    pub scale: f64,
    pub jitter: f64,
    pub level_step: f64,
    /// Graph preset (`heavy-hex-27`, `line:N`, `ring:N`, `grid:RxC`) or
    /// `all` for all-to-all over the circuit's qubits. Defaults to
    /// `heavy-hex-27` for intra mode and `all` otherwise.
    pub graph: Option<String>,
    /// Edge-list file, relative to the config file. Overrides `graph`.
    pub graph_file: Option<PathBuf>,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            mode: Mode::Inter,
            members: None,
            base: BaseRates::default(),
            scale: 1.0,
            jitter: 2.0,
            level_step: 0.1,
            graph: None,
            graph_file: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub shots: u64,
    pub seed: u64,
    pub f_min: f64,
    pub weight: WeightFn,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            shots: 8192,
            seed: 0,
            f_min: 1e-3,
            weight: WeightFn::Linear,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorrectConfig {
    /// JSON list of `[bitstring, probability]` pairs, relative to the
    /// config file. Generated circuits supply their own ideal otherwise.
    pub sidecar: Option<PathBuf>,
    /// Ideal strings within this factor of the most likely one count as
    /// correct for the rank metric.
    pub relative: f64,
}

impl Default for CorrectConfig {
    fn default() -> Self {
        CorrectConfig {
            sidecar: None,
            relative: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub circuit: CircuitSpec,
    #[serde(default)]
    pub ensemble: EnsembleConfig,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub correct: CorrectConfig,
    /// Directory that relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn new(circuit: CircuitSpec) -> Self {
        RunConfig {
            circuit,
            ensemble: EnsembleConfig::default(),
            run: RunSection::default(),
            correct: CorrectConfig::default(),
            base_dir: PathBuf::new(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        toml::from_str(text).map_err(config_err)
    }

    pub fn from_file(path: &Path) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    /// The config with every default made explicit.
    pub fn resolved(&self) -> RunConfig {
        let mut r = self.clone();
        let e = &mut r.ensemble;
        e.members.get_or_insert(e.mode.default_members());
        if e.graph_file.is_none() && e.graph.is_none() {
            e.graph = Some(if e.mode == Mode::Intra { "heavy-hex-27" } else { "all" }.to_string());
        }
        r
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn path(&self, p: &Path) -> PathBuf {
        self.base_dir.join(p)
    }

    fn validate(&self) -> Result<(), PipelineError> {
        let e = &self.ensemble;
        let members = e.members.unwrap_or(e.mode.default_members());
        if members < 2 {
            return Err(config_err(format!("ensemble needs at least 2 members, got {members}")));
        }
        if self.run.shots == 0 {
            return Err(config_err("shots must be positive"));
        }
        if !(self.run.f_min > 0.0 && self.run.f_min <= 1.0) {
            return Err(config_err(format!("f_min must lie in (0, 1], got {}", self.run.f_min)));
        }
        if e.jitter.is_nan() || e.jitter < 1.0 {
            return Err(config_err(format!("jitter must be at least 1, got {}", e.jitter)));
        }
        if !(e.scale >= 0.0 && e.level_step >= 0.0) {
            return Err(config_err("scale and level_step must be nonnegative"));
        }
        if !(self.correct.relative > 0.0 && self.correct.relative <= 1.0) {
            return Err(config_err("correct.relative must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// One placed ensemble member.
#[derive(Clone, Debug)]
pub struct Member {
    pub label: String,
    pub layout: Layout,
    pub target: Circuit,
    pub canary: Circuit,
    pub model: NoiseModel,
}

/// Everything needed to simulate an ensemble.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub config: RunConfig,
    pub source: Circuit,
    /// Decomposed to the device basis, before placement.
    pub logical: Circuit,
    pub canary: Circuit,
    pub ideal: Option<Distribution>,
    pub members: Vec<Member>,
}

/// Outputs of a full run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub prepared: Prepared,
    pub run: EnsembleRun,
    pub report: Report,
}

/// Stream-splitting seed derivation.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const NOISE_TAG: u64 = 1;
const LAYOUT_TAG: u64 = 2;
const SHOT_TAG: u64 = 1000;

/// The two-qubit phase-kickback circuit: the ancilla in `|−⟩` kicks a
/// phase back onto the data qubit, and both read `1`.
pub fn kickback() -> Circuit {
    let mut c = Circuit::new(2, 2).with_name("kickback");
    c.x(1).h(0).h(1).cx(0, 1).h(0).h(1).measure_all();
    c
}

fn load_circuit(cfg: &RunConfig) -> Result<(Circuit, Option<Distribution>), PipelineError> {
    let single = |s: crate::circuit::BitString| Some(Distribution::from([(s, 1.0)]));
    Ok(match &cfg.circuit {
        CircuitSpec::Qasm { path } => {
            let p = cfg.path(path);
            let text = fs::read_to_string(&p)
                .map_err(|e| PipelineError::Config(format!("{}: {e}", p.display())))?;
            (parse_qasm(&text).map_err(config_err)?, None)
        }
        &CircuitSpec::Adder { bits, a, b } => {
            let (c, out) = bench::adder(bits, a, b).map_err(config_err)?;
            (c, single(out))
        }
        &CircuitSpec::Qft { n } => {
            let (c, ideal) = bench::qft(n).map_err(config_err)?;
            (c, Some(ideal))
        }
        CircuitSpec::Qaoa {
            nodes,
            edges,
            gamma,
            beta,
        } => {
            let (c, ideal) = bench::qaoa(*nodes, edges, *gamma, *beta).map_err(config_err)?;
            (c, Some(ideal))
        }
        CircuitSpec::QaoaFixture { name } => {
            let f = bench::qaoa_fixtures()
                .into_iter()
                .find(|f| &f.name == name)
                .ok_or_else(|| config_err(format!("unknown qaoa fixture {name}")))?;
            let (c, ideal) = f.build().map_err(config_err)?;
            (c, Some(ideal))
        }
        CircuitSpec::Kickback => (kickback(), single("11".parse().expect("literal"))),
    })
}

fn load_graph(cfg: &RunConfig, n: usize) -> Result<CouplingGraph, PipelineError> {
    if let Some(p) = &cfg.ensemble.graph_file {
        let p = cfg.path(p);
        let text = fs::read_to_string(&p)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", p.display())))?;
        return CouplingGraph::parse(&text).map_err(config_err);
    }
    match cfg.ensemble.graph.as_deref() {
        None | Some("all") => {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            CouplingGraph::new(n, pairs).map_err(config_err)
        }
        Some(name) => CouplingGraph::preset(name).map_err(config_err),
    }
}

/// Build the circuit, its canary, and every placed member.
pub fn prepare(config: &RunConfig) -> Result<Prepared, PipelineError> {
    config.validate()?;
    let cfg = config.resolved();
    let (source, bench_ideal) = load_circuit(&cfg)?;
    let ideal = match &cfg.correct.sidecar {
        Some(p) => {
            let p = cfg.path(p);
            let text = fs::read_to_string(&p)
                .map_err(|e| PipelineError::Config(format!("{}: {e}", p.display())))?;
            let pairs: Vec<(String, f64)> = serde_json::from_str(&text).map_err(config_err)?;
            Some(from_sidecar(&pairs).map_err(config_err)?)
        }
        None => bench_ideal,
    };
    let logical = decompose_to_basis(&source)?;
    let canary = make_canary(&logical).map_err(config_err)?;

    let e = &cfg.ensemble;
    let count = e.members.expect("resolved");
    let graph = load_graph(&cfg, logical.num_qubits())?;
    let seed = cfg.run.seed;
    let noise_seed = derive_seed(seed, NOISE_TAG);
    let layout_seed = derive_seed(seed, LAYOUT_TAG);
    let all_to_all = e.graph_file.is_none() && e.graph.as_deref() == Some("all");
    let layouts = match (e.mode, all_to_all) {
        (Mode::Intra, _) => random_layouts(&logical, &graph, count, layout_seed)?,
        (_, true) => vec![Layout::identity(logical.num_qubits(), graph.num_physical_qubits())],
        (_, false) => random_layouts(&logical, &graph, 1, layout_seed)?,
    };
    let base = NoiseModel::uniform(graph.num_physical_qubits(), graph.edges(), &e.base.scaled(e.scale));
    let models: Vec<NoiseModel> = match e.mode {
        Mode::Inter => make_diverse_ensemble(&base, count, e.jitter, noise_seed),
        Mode::Intra => vec![make_diverse_ensemble(&base, 1, e.jitter, noise_seed).remove(0)],
        Mode::Monotone => (0..count)
            .map(|k| base.scaled(e.level_step * (k + 1) as f64))
            .collect(),
    };

    let mut placed: Vec<(Layout, Circuit, Circuit)> = Vec::with_capacity(layouts.len());
    for l in &layouts {
        let sub = graph.induced(l.as_slice());
        let mut target = route(&logical, &sub, l)?;
        target.name = logical.name.clone();
        let canary = make_canary(&target).map_err(config_err)?;
        placed.push((l.clone(), target, canary));
    }
    let members = (0..count)
        .map(|k| {
            let (layout, target, canary) = placed[k.min(placed.len() - 1)].clone();
            Member {
                label: format!("m{k:02}"),
                layout,
                target,
                canary,
                model: models[k.min(models.len() - 1)].clone(),
            }
        })
        .collect();
    Ok(Prepared {
        config: cfg,
        source,
        logical,
        canary,
        ideal,
        members,
    })
}

impl Prepared {
    /// Simulate target and canary on every member.
    pub fn execute(&self) -> Result<EnsembleRun, PipelineError> {
        let shots = self.config.run.shots;
        let seed = self.config.run.seed;
        let mut target_counts = Vec::with_capacity(self.members.len());
        let mut canary_counts = Vec::with_capacity(self.members.len());
        for (k, m) in self.members.iter().enumerate() {
            let tag = SHOT_TAG + 2 * k as u64;
            let t = NoisyProgram::compile(&m.target, &m.model)?;
            target_counts.push(t.run(shots, derive_seed(seed, tag)));
            let c = NoisyProgram::compile(&m.canary, &m.model)?;
            canary_counts.push(c.run(shots, derive_seed(seed, tag + 1)));
        }
        Ok(EnsembleRun::new(
            self.members.iter().map(|m| m.label.clone()).collect(),
            target_counts,
            canary_counts,
            self.logical.clone(),
            self.canary.clone(),
        )?)
    }

    pub fn analysis_config(&self) -> AnalysisConfig {
        AnalysisConfig {
            f_min: self.config.run.f_min,
            weight: self.config.run.weight,
            correct_relative: self.config.correct.relative,
        }
    }

    /// Analyze `run` and embed the resolved config.
    pub fn analyze(&self, run: &EnsembleRun) -> Result<Report, PipelineError> {
        let mut report = analyze(run, &self.analysis_config(), self.ideal.as_ref())?;
        report.config = serde_json::to_value(&self.config).expect("config serializes");
        Ok(report)
    }
}

/// Prepare, simulate and analyze.
pub fn run(config: &RunConfig) -> Result<Outcome, PipelineError> {
    let prepared = prepare(config)?;
    let run = prepared.execute()?;
    let report = prepared.analyze(&run)?;
    Ok(Outcome {
        prepared,
        run,
        report,
    })
}

/// Write `report.json`, `records.csv` and `summary.txt` into `dir`.
pub fn write_report(report: &Report, dir: &Path) -> Result<(), PipelineError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), report.to_json())?;
    fs::write(dir.join("records.csv"), report.records_csv())?;
    fs::write(dir.join("summary.txt"), report.summary())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabsim;

    fn small(spec: CircuitSpec, mode: Mode, members: usize) -> RunConfig {
        let mut cfg = RunConfig::new(spec);
        cfg.ensemble.mode = mode;
        cfg.ensemble.members = Some(members);
        cfg.run.shots = 512;
        cfg
    }

    #[test]
    fn kickback_outputs_11() {
        let c = kickback();
        assert_eq!(stabsim::ideal_probability(&c, &"11".parse().unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn resolved_defaults() {
        let cfg = RunConfig::from_toml("[circuit]\nkind = \"kickback\"\n[ensemble]\nmode = \"intra\"\n").unwrap();
        let r = cfg.resolved();
        assert_eq!(r.ensemble.members, Some(50));
        assert_eq!(r.ensemble.graph.as_deref(), Some("heavy-hex-27"));
        assert_eq!(r.run.shots, 8192);
        assert_eq!(r.run.f_min, 1e-3);
        assert_eq!(RunConfig::from_toml(&r.to_toml()).unwrap(), r);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(RunConfig::from_toml("[circuit]\nkind = \"nope\"\n"), Err(PipelineError::Config(_))));
        let mut cfg = small(CircuitSpec::Kickback, Mode::Inter, 1);
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
        cfg.ensemble.members = Some(3);
        cfg.run.f_min = 0.0;
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn noiseless_run_recovers_ideal() {
        let mut cfg = small(CircuitSpec::Adder { bits: 1, a: 1, b: 1 }, Mode::Inter, 3);
        cfg.ensemble.scale = 0.0;
        let out = run(&cfg).unwrap();
        let m = out.report.metrics.unwrap();
        assert_eq!(m.fidelity_q, 1.0);
        assert_eq!(out.report.strings_analyzed, 1);
        assert!(out.report.fallback);
    }

    #[test]
    fn intra_members_use_distinct_layouts() {
        let cfg = small(CircuitSpec::Adder { bits: 1, a: 1, b: 0 }, Mode::Intra, 4);
        let p = prepare(&cfg).unwrap();
        assert_eq!(p.members.len(), 4);
        for w in p.members.windows(2) {
            assert_ne!(w[0].layout, w[1].layout);
            assert_eq!(w[0].model, w[1].model);
        }
        for m in &p.members {
            assert_eq!(m.target.active_qubits(), { let mut v = m.layout.as_slice().to_vec(); v.sort(); v });
        }
    }

    #[test]
    fn monotone_levels_increase() {
        let p = prepare(&small(CircuitSpec::Kickback, Mode::Monotone, 5)).unwrap();
        let p2: Vec<f64> = p.members.iter().map(|m| m.model.mean_p2()).collect();
        assert!(p2.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn same_seed_same_report() {
        let cfg = small(CircuitSpec::Qft { n: 3 }, Mode::Inter, 3);
        let a = run(&cfg).unwrap().report.to_json();
        assert_eq!(a, run(&cfg).unwrap().report.to_json());
        let mut other = cfg.clone();
        other.run.seed = 1;
        assert_ne!(a, run(&other).unwrap().report.to_json());
    }
}
