use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use super::{io_err, SuiteError, MANIFEST};

const RISK_AXES: &str = "\
| Axis | Question asked | Mechanism | Risk measured |
|---|---|---|---|
| Expressibility | is the concept a member of the function class? | hypothesis | disagreement on a finite universe |
| Computability | does a total decider agree with the concept? | fuel-bounded decider | disagreement, undefined if a run diverges |
| Statistical learning | does ERM reach low risk from samples? | ERM over a hypothesis class | exact or Monte Carlo mass of the error region |
| Generation | do outputs stay inside the target and stay new? | generator fed an enumeration | invalid or repeated outputs over a window |
";

const QUANTIFIERS: &str = "\
Success for each row is judged under a different quantifier order. \
Expressibility and computability ask for one object that is right at every point of the universe. \
PAC learning fixes the learner first and then lets the distribution, accuracy and confidence vary, \
with the sample size chosen last. \
Identification and generation in the limit fix the learner or generator and require that, \
for every enumeration of the target, errors stop after some finite position. \
Nothing in a finite run certifies that position; the traces only show where errors were last observed.
";

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => "-".into(),
        Some(Value::String(s)) => s.replace('|', "\\|"),
        Some(Value::Bool(b)) => if *b { "yes" } else { "no" }.into(),
        Some(Value::Number(n)) => match n.as_f64() {
            Some(f) if n.is_f64() => format!("{f:.4}"),
            _ => n.to_string(),
        },
        Some(Value::Array(a)) if a.is_empty() => "none".into(),
        Some(Value::Array(a)) if a.len() > 8 => {
            format!("{} items, {}..{}", a.len(), cell(a.first()), cell(a.last()))
        }
        Some(other) => other.to_string().replace('|', "\\|"),
    }
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
    for r in rows {
        let _ = writeln!(out, "| {} |", r.join(" | "));
    }
    out.push('\n');
}

struct Loaded {
    path: String,
    summary: Value,
}

impl Loaded {
    fn result(&self, key: &str) -> Option<&Value> {
        self.summary["result"].get(key)
    }

    fn detail(&self, key: &str) -> Option<&Value> {
        self.summary["result"]["details"].get(key)
    }

    fn name(&self) -> String {
        cell(self.summary.get("name"))
    }
}

/// Renders `report.md` from a run directory. Returns the written path.
pub fn emit_report(input: &Path, out: Option<&Path>) -> Result<PathBuf, SuiteError> {
    let manifest_path = input.join(MANIFEST);
    if !manifest_path.is_file() {
        return Err(SuiteError::MissingManifest(input.to_path_buf()));
    }
    let text = fs::read_to_string(&manifest_path).map_err(io_err("reading manifest"))?;
    let manifest: Value = serde_json::from_str(&text).map_err(|e| SuiteError::Artifact(format!("{MANIFEST}: {e}")))?;
    let blocks = manifest["blocks"].as_array().ok_or_else(|| SuiteError::Artifact(format!("{MANIFEST}: no blocks")))?;

    let mut loaded = Vec::new();
    for b in blocks {
        let dir = b["dir"].as_str().ok_or_else(|| SuiteError::Artifact(format!("{MANIFEST}: block without dir")))?;
        let path = format!("{dir}/summary.json");
        let raw = fs::read_to_string(input.join(&path)).map_err(io_err(format!("reading {path}")))?;
        let summary = serde_json::from_str(&raw).map_err(|e| SuiteError::Artifact(format!("{path}: {e}")))?;
        loaded.push(Loaded { path, summary });
    }
    let of_kind = |k: &'static str| loaded.iter().filter(move |l| l.summary["kind"] == k);

    let mut md = String::from("# Experiment report\n\n");
    let _ = writeln!(
        md,
        "Seed `{}`, config sha256 `{}`, rng `{}`, {} blocks.\n",
        cell(manifest.get("seed")),
        cell(manifest.get("config_sha256")),
        cell(manifest.get("rng")),
        blocks.len()
    );

    md.push_str("## Feedback levels\n\n");
    let rows: Vec<Vec<String>> = of_kind("levels")
        .map(|l| {
            vec![
                cell(l.result("level")),
                cell(l.result("feedback")),
                cell(l.result("observed")),
                format!("`{}`", l.path),
            ]
        })
        .collect();
    if rows.is_empty() {
        md.push_str("No level experiments in this run.\n\n");
    } else {
        table(&mut md, &["Level", "Feedback", "Observed", "Source"], &rows);
    }

    md.push_str("## Risk template\n\n");
    let mut rows = Vec::new();
    for l in of_kind("risk") {
        for r in l.result("rows").and_then(Value::as_array).into_iter().flatten() {
            rows.push(vec![
                cell(r.get("property")),
                cell(r.get("mechanism_class")),
                cell(r.get("risk_kind")),
                cell(r.get("value")),
                cell(r.get("quantifiers")),
                cell(r.get("note")),
                format!("`{}`", l.path),
            ]);
        }
    }
    if rows.is_empty() {
        md.push_str("No risk rows in this run.\n\n");
    } else {
        table(&mut md, &["Property", "Mechanism class", "Risk", "Value", "Quantifiers", "Note", "Source"], &rows);
    }
    md.push_str("### Axes\n\n");
    md.push_str(RISK_AXES);
    md.push('\n');

    let rows: Vec<Vec<String>> = of_kind("vc")
        .map(|l| {
            vec![
                l.name(),
                cell(l.result("class")),
                cell(l.result("universe_size")),
                cell(l.result("cap")),
                cell(l.result("vc")),
                cell(l.result("exact")),
                format!("`{}`", l.path),
            ]
        })
        .collect();
    if !rows.is_empty() {
        md.push_str("## VC dimension\n\n");
        table(&mut md, &["Block", "Class", "Universe", "Cap", "VC", "Exact", "Source"], &rows);
    }

    let mut rows = Vec::new();
    for l in of_kind("pac") {
        for d in l.result("per_distribution").and_then(Value::as_array).into_iter().flatten() {
            rows.push(vec![
                l.name(),
                cell(l.result("class")),
                cell(l.result("target")),
                cell(l.result("m")),
                cell(d.get("label")),
                cell(d.get("failure_frequency")),
                cell(l.result("delta")),
                cell(d.get("within_delta")),
                format!("`{}`", l.path),
            ]);
        }
    }
    if !rows.is_empty() {
        md.push_str("## PAC trials\n\n");
        table(
            &mut md,
            &["Block", "Class", "Target", "m", "Distribution", "Failure rate", "delta", "Within", "Source"],
            &rows,
        );
    }

    let rows: Vec<Vec<String>> = of_kind("limit-identify")
        .map(|l| {
            vec![
                l.name(),
                cell(l.detail("class")),
                cell(l.detail("learner")),
                cell(l.detail("schedule")),
                cell(l.result("lock_step")),
                cell(l.result("mind_changes")),
                cell(l.detail("converged_correct")),
                format!("`{}`", l.path),
            ]
        })
        .collect();
    if !rows.is_empty() {
        md.push_str("## Identification in the limit\n\n");
        table(
            &mut md,
            &["Block", "Class", "Learner", "Schedule", "Lock step", "Mind changes", "Correct", "Source"],
            &rows,
        );
    }

    let rows: Vec<Vec<String>> = of_kind("limit-generate")
        .map(|l| {
            vec![
                l.name(),
                cell(l.detail("class")),
                cell(l.detail("generator")),
                cell(l.detail("target_index")),
                cell(l.detail("validity_violations")),
                cell(l.detail("novelty_violations")),
                cell(l.detail("first_violation_free_suffix_start")),
                format!("`{}`", l.path),
            ]
        })
        .collect();
    if !rows.is_empty() {
        md.push_str("## Generation in the limit\n\n");
        table(
            &mut md,
            &["Block", "Class", "Generator", "Target index", "Invalid", "Repeated", "Clean from", "Source"],
            &rows,
        );
    }

    let rows: Vec<Vec<String>> = of_kind("adversary")
        .map(|l| {
            vec![
                l.name(),
                cell(l.detail("learner")),
                cell(l.detail("horizon")),
                cell(l.result("mind_changes")),
                cell(l.result("committed_target")),
                cell(l.detail("defeated")),
                format!("`{}`", l.path),
            ]
        })
        .collect();
    if !rows.is_empty() {
        md.push_str("## Adversary on SUPERFINITE\n\n");
        table(
            &mut md,
            &["Block", "Learner", "Horizon", "Mind changes", "Committed target", "Defeated", "Source"],
            &rows,
        );
    }

    md.push_str("## Quantifiers\n\n");
    md.push_str(QUANTIFIERS);

    let path = out.map(Path::to_path_buf).unwrap_or_else(|| input.join("report.md"));
    fs::write(&path, md).map_err(io_err(format!("writing {}", path.display())))?;
    Ok(path)
}
