//! Config-driven experiment runner.
//!
//! A suite config is a JSON object
//! `{"seed": u64, "output_dir"?: path, "timing"?: bool, "experiments": [...]}`
//! where each experiment is `{"name"?: str, "kind": str, "params": {...}}`
//! and `kind` is one of [`KINDS`]. Each block writes `trace.csv` and
//! `summary.json` into its own directory; `manifest.json` is written last.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arena::{
    adversarial_superfinite_run, pac_experiment, run_generation, run_generation_verified, run_identification,
    run_level, LevelEnv, NamedDistribution, Schedule,
};
use crate::mechanisms::{Generator, GeneratorStrategy, LearnerKind};
use crate::risk::{template_report, Distribution, MechanismDescriptor, TemplateParams};
use crate::rng;
use crate::universe::{ConceptClass, Instance, LanguageSpec};
use crate::vcdim::{sample_bound, vc_dimension, ClassShape, HypothesisClass, VcResult};

pub use report::emit_report;

/// Experiment kinds a config may name.
pub const KINDS: [&str; 7] = ["vc", "pac", "limit-identify", "limit-generate", "adversary", "levels", "risk"];

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("config error: {0}")]
    Config(String),
    #[error("block `{block}` failed: {source}")]
    Block {
        block: String,
        #[source]
        source: crate::Error,
    },
    #[error("missing manifest: no {MANIFEST} in {0}")]
    MissingManifest(PathBuf),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed artifact {0}")]
    Artifact(String),
}

impl SuiteError {
    /// Process exit status: 2 for config problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            SuiteError::Config(_) | SuiteError::MissingManifest(_) => 2,
            _ => 1,
        }
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> SuiteError {
    let context = context.into();
    move |source| SuiteError::Io { context, source }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: u64,
    #[serde(default)]
    output_dir: Option<PathBuf>,
    #[serde(default)]
    timing: bool,
    experiments: Vec<RawExperiment>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    #[serde(default)]
    name: Option<String>,
    kind: String,
    #[serde(default)]
    params: Value,
}

/// Instances `{start..=end}` or an explicit list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UniverseSpec {
    Range { start: Instance, end: Instance },
    List(Vec<Instance>),
}

impl UniverseSpec {
    pub fn points(&self) -> Vec<Instance> {
        match self {
            UniverseSpec::Range { start, end } => (*start..=*end).collect(),
            UniverseSpec::List(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistConfig {
    label: String,
    #[serde(default)]
    uniform: Option<UniverseSpec>,
    #[serde(default)]
    support: Option<Vec<(Instance, f64)>>,
}

impl DistConfig {
    fn build(&self) -> crate::Result<NamedDistribution> {
        let d = match (&self.uniform, &self.support) {
            (Some(u), None) => Distribution::uniform(u.points())?,
            (None, Some(s)) => Distribution::new(s.clone())?,
            _ => {
                return Err(crate::Error::InvalidDistribution(format!(
                    "`{}` needs exactly one of `uniform` or `support`",
                    self.label
                )))
            }
        };
        Ok(NamedDistribution::new(self.label.clone(), d))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VcBlock {
    class: ClassShape,
    universe: UniverseSpec,
    cap: u32,
}

fn default_c() -> f64 {
    4.0
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PacBlock {
    class: ClassShape,
    universe: UniverseSpec,
    target: LanguageSpec,
    distributions: Vec<DistConfig>,
    eps: f64,
    delta: f64,
    /// Explicit sample size; otherwise taken from the VC bound with `vc` and `c`.
    #[serde(default)]
    m: Option<u64>,
    #[serde(default)]
    vc: Option<u32>,
    #[serde(default = "default_c")]
    c: f64,
    trials: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdentifyBlock {
    class: ConceptClass,
    target: LanguageSpec,
    learner: LearnerKind,
    #[serde(default = "fair")]
    schedule: Schedule,
    horizon: u64,
    #[serde(default)]
    stability_window: Option<u64>,
}

fn fair() -> Schedule {
    Schedule::Fair
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GenerateBlock {
    class: ConceptClass,
    target: LanguageSpec,
    generator: GeneratorStrategy,
    #[serde(default = "fair")]
    schedule: Schedule,
    horizon: u64,
    #[serde(default = "one")]
    n0: u64,
    #[serde(default)]
    verifier: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AdversaryBlock {
    learner: LearnerKind,
    horizon: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelsBlock {
    level: u8,
    #[serde(default)]
    params: Value,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RiskBlock {
    mechanism: MechanismDescriptor,
    language: LanguageSpec,
    #[serde(default)]
    params: Value,
}

#[derive(Clone, Debug)]
enum Block {
    Vc(VcBlock),
    Pac(PacBlock),
    Identify(IdentifyBlock),
    Generate(GenerateBlock),
    Adversary(AdversaryBlock),
    Levels(LevelEnv),
    Risk { mechanism: MechanismDescriptor, language: LanguageSpec, params: TemplateParams },
}

#[derive(Clone, Debug)]
struct Planned {
    dir: String,
    name: String,
    kind: String,
    seed: u64,
    block: Block,
}

/// A parsed and validated suite.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub timing: bool,
    config_sha256: String,
    blocks: Vec<Planned>,
}

fn parse_at<T: serde::de::DeserializeOwned>(value: Value, at: &str) -> Result<T, SuiteError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let loc = if path == "." { at.to_string() } else { format!("{at}.{path}") };
        SuiteError::Config(format!("{loc}: {}", e.inner()))
    })
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c.to_ascii_lowercase() } else { '_' })
        .collect()
}

impl SuiteConfig {
    /// Parses config text. `seed_override` replaces the declared seed.
    pub fn parse(text: &str, seed_override: Option<u64>) -> Result<Self, SuiteError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let raw: RawConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            SuiteError::Config(format!("{path}: {}", e.inner()))
        })?;
        let seed = seed_override.unwrap_or(raw.seed);
        let mut blocks = Vec::with_capacity(raw.experiments.len());
        for (i, exp) in raw.experiments.into_iter().enumerate() {
            let at = format!("experiments[{i}].params");
            let block_seed = rng::derive_seed(seed, i as u64);
            let block = match exp.kind.as_str() {
                "vc" => Block::Vc(parse_at(exp.params, &at)?),
                "pac" => Block::Pac(parse_at(exp.params, &at)?),
                "limit-identify" => Block::Identify(parse_at(exp.params, &at)?),
                "limit-generate" => Block::Generate(parse_at(exp.params, &at)?),
                "adversary" => Block::Adversary(parse_at(exp.params, &at)?),
                "levels" => {
                    let l: LevelsBlock = parse_at(exp.params, &at)?;
                    Block::Levels(
                        LevelEnv::from_json(l.level, l.params)
                            .map_err(|e| SuiteError::Config(format!("{at}.params: {e}")))?,
                    )
                }
                "risk" => {
                    let r: RiskBlock = parse_at(exp.params, &at)?;
                    let mut p = match r.params {
                        Value::Null => json!({}),
                        v => v,
                    };
                    if let Value::Object(m) = &mut p {
                        m.entry("seed").or_insert(json!(block_seed));
                    }
                    let params: TemplateParams = parse_at(p, &format!("{at}.params"))?;
                    Block::Risk { mechanism: r.mechanism, language: r.language, params }
                }
                other => {
                    return Err(SuiteError::Config(format!(
                        "experiments[{i}].kind: unknown experiment kind \"{other}\" (expected one of {})",
                        KINDS.join(", ")
                    )))
                }
            };
            let name = exp.name.unwrap_or_else(|| exp.kind.clone());
            blocks.push(Planned {
                dir: format!("{i:02}-{}", slug(&name)),
                name,
                kind: exp.kind,
                seed: block_seed,
                block,
            });
        }
        Ok(SuiteConfig {
            seed,
            output_dir: raw.output_dir,
            timing: raw.timing,
            config_sha256: hex::encode(Sha256::digest(text.as_bytes())),
            blocks,
        })
    }

    pub fn block_dirs(&self) -> Vec<String> {
        self.blocks.iter().map(|b| b.dir.clone()).collect()
    }
}

/// Files and summary produced by one block.
struct BlockOutput {
    result: Value,
    files: Vec<(String, String)>,
}

fn vc_csv(class: &str, r: &VcResult, ms: Option<u128>) -> String {
    let ms = ms.map_or(String::new(), |m| m.to_string());
    format!(
        "class,universe_size,cap,vc,exact_flag,elapsed_ms\n{class},{},{},{},{},{ms}\n",
        r.universe_size, r.cap, r.vc, r.exact as u8
    )
}

fn to_csv_text<S: Serialize>(rows: &[S]) -> crate::Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| crate::Error::InvalidArgument(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct RiskCsvRow<'a> {
    property: &'a str,
    risk_kind: &'a str,
    value: String,
    witnesses: usize,
    universe_or_window: &'a str,
    note: &'a str,
}

#[derive(Serialize)]
struct MetricRow {
    metric: String,
    value: String,
}

fn metric_csv(v: &Value) -> crate::Result<String> {
    let rows: Vec<MetricRow> = match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| MetricRow {
                metric: k.clone(),
                value: match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                },
            })
            .collect(),
        _ => Vec::new(),
    };
    to_csv_text(&rows)
}

fn level_feedback(level: u8) -> &'static str {
    match level {
        0 => "none: unlabeled observations only",
        1 => "reflexive: data distribution follows the current hypothesis",
        2 => "noisy: weak statistical signal",
        3 => "indirect: positive examples only",
        _ => "direct: every output judged by a verifier",
    }
}

fn run_block(p: &Planned, timing: bool) -> crate::Result<BlockOutput> {
    match &p.block {
        Block::Vc(b) => {
            let universe = b.universe.points();
            let hc = HypothesisClass::new(b.class, universe.iter().copied())?;
            let start = Instant::now();
            let r = vc_dimension(&hc, &universe, b.cap)?;
            let ms = timing.then(|| start.elapsed().as_millis());
            let csv = vc_csv(&b.class.name(), &r, ms);
            Ok(BlockOutput {
                result: json!({
                    "class": b.class.name(),
                    "universe_size": r.universe_size,
                    "cap": r.cap,
                    "vc": r.vc,
                    "exact": r.exact,
                    "elapsed_ms": ms,
                }),
                files: vec![("trace.csv".into(), csv)],
            })
        }
        Block::Pac(b) => {
            let hc = HypothesisClass::new(b.class, b.universe.points())?;
            let dists = b.distributions.iter().map(DistConfig::build).collect::<crate::Result<Vec<_>>>()?;
            let (m, source) = match (b.m, b.vc) {
                (Some(m), _) => (m, "given".to_string()),
                (None, Some(d)) => (sample_bound(d, b.eps, b.delta, b.c)?, format!("sample_bound(d={d}, C={})", b.c)),
                (None, None) => {
                    return Err(crate::Error::InvalidArgument("pac block needs `m` or `vc`".into()));
                }
            };
            let out = pac_experiment(&hc, &b.target, &dists, b.eps, b.delta, m, b.trials, p.seed)?;
            let mut result = json!(out.summary);
            result["m_source"] = json!(source);
            Ok(BlockOutput { result, files: vec![("trace.csv".into(), out.to_csv())] })
        }
        Block::Identify(b) => {
            let learner = b.learner.build(&b.class)?;
            let window = b.stability_window.unwrap_or((b.horizon / 5).max(1));
            let t = run_identification(&b.class, &b.target, learner, &b.schedule, b.horizon, window)?;
            Ok(BlockOutput { result: json!(t.summary), files: vec![("trace.csv".into(), t.to_csv())] })
        }
        Block::Generate(b) => {
            let gen = Generator::new(b.class.clone(), b.generator);
            let t = if b.verifier {
                run_generation_verified(&b.class, &b.target, &gen, &b.schedule, b.horizon)?
            } else {
                run_generation(&b.class, &b.target, &gen, &b.schedule, b.horizon, b.n0)?
            };
            Ok(BlockOutput { result: json!(t.summary), files: vec![("trace.csv".into(), t.to_csv())] })
        }
        Block::Adversary(b) => {
            let learner = b.learner.build(&ConceptClass::superfinite())?;
            let o = adversarial_superfinite_run(learner, b.horizon)?;
            Ok(BlockOutput { result: json!(o.trace.summary), files: vec![("trace.csv".into(), o.trace.to_csv())] })
        }
        Block::Levels(env) => {
            let out = run_level(env, p.seed)?;
            let summary = out.summary_json();
            let traces = out.traces();
            let mut files = Vec::new();
            match traces.split_first() {
                Some(((_, first), rest)) => {
                    files.push(("trace.csv".into(), first.to_csv()));
                    for (name, t) in rest {
                        files.push((format!("trace_{name}.csv"), t.to_csv()));
                    }
                }
                None => files.push(("trace.csv".into(), metric_csv(&summary)?)),
            }
            let trace_summaries: serde_json::Map<String, Value> =
                traces.iter().map(|(n, t)| (n.to_string(), json!(t.summary))).collect();
            Ok(BlockOutput {
                result: json!({
                    "level": out.level(),
                    "feedback": level_feedback(out.level()),
                    "observed": out.observed(),
                    "summary": summary,
                    "traces": trace_summaries,
                }),
                files,
            })
        }
        Block::Risk { mechanism, language, params } => {
            let rows = template_report(mechanism, language, params)?;
            let csv_rows: Vec<RiskCsvRow> = rows
                .iter()
                .map(|r| RiskCsvRow {
                    property: &r.property,
                    risk_kind: r.risk_kind.name(),
                    value: r.value.map_or("undefined".into(), |v| v.to_string()),
                    witnesses: r.report.as_ref().map_or(0, |rep| rep.witnesses.len()),
                    universe_or_window: r.report.as_ref().map_or("", |rep| rep.universe_or_window.as_str()),
                    note: r.note.as_deref().unwrap_or(""),
                })
                .collect();
            Ok(BlockOutput {
                result: json!({
                    "mechanism": mechanism.name(),
                    "language": language.to_string(),
                    "rows": rows,
                }),
                files: vec![("trace.csv".into(), to_csv_text(&csv_rows)?)],
            })
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Runs every block (in parallel) and writes the artifact tree under `out`.
/// Outputs depend only on the config text and seed.
pub fn run_suite(config: &SuiteConfig, out: &Path) -> Result<PathBuf, SuiteError> {
    fs::create_dir_all(out).map_err(io_err(format!("creating {}", out.display())))?;
    let results: Vec<crate::Result<BlockOutput>> =
        config.blocks.par_iter().map(|p| run_block(p, config.timing)).collect();

    let mut entries = Vec::with_capacity(results.len());
    for (p, res) in config.blocks.iter().zip(results) {
        let output = res.map_err(|source| SuiteError::Block { block: p.dir.clone(), source })?;
        let dir = out.join(&p.dir);
        fs::create_dir_all(&dir).map_err(io_err(format!("creating {}", dir.display())))?;
        let summary = json!({
            "block": p.dir,
            "name": p.name,
            "kind": p.kind,
            "seed": p.seed,
            "result": output.result,
        });
        let mut files = vec!["summary.json".to_string()];
        fs::write(dir.join("summary.json"), pretty(&summary))
            .map_err(io_err(format!("writing {}/summary.json", p.dir)))?;
        for (name, text) in &output.files {
            fs::write(dir.join(name), text).map_err(io_err(format!("writing {}/{name}", p.dir)))?;
            files.push(name.clone());
        }
        files.sort();
        entries.push(json!({"dir": p.dir, "name": p.name, "kind": p.kind, "seed": p.seed, "files": files}));
    }
    let manifest = json!({
        "tool": "learnlab",
        "version": env!("CARGO_PKG_VERSION"),
        "seed": config.seed,
        "config_sha256": config.config_sha256,
        "rng": rng::RNG_ALGORITHM,
        "regular_class_equivalence": "exact, by minimized automaton signature",
        "timing": config.timing,
        "blocks": entries,
    });
    fs::write(out.join(MANIFEST), pretty(&manifest)).map_err(io_err("writing manifest"))?;
    Ok(out.to_path_buf())
}

/// Reads, parses and runs the config at `path`; `out` overrides the
/// config's `output_dir`.
pub fn run_suite_file(path: &Path, out: Option<&Path>, seed_override: Option<u64>) -> Result<PathBuf, SuiteError> {
    let text = fs::read_to_string(path).map_err(|e| SuiteError::Config(format!("reading {}: {e}", path.display())))?;
    let config = SuiteConfig::parse(&text, seed_override)?;
    let dir = match (out, &config.output_dir) {
        (Some(o), _) => o.to_path_buf(),
        (None, Some(d)) => path.parent().unwrap_or(Path::new(".")).join(d),
        (None, None) => return Err(SuiteError::Config("no output directory: pass --out or set output_dir".into())),
    };
    run_suite(&config, &dir)
}
