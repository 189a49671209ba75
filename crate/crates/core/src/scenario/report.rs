use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::ScenarioReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportFormat {
    /// Pretty-printed JSON at full precision; parses back to an equal report.
    Json,
    /// Aligned `key  value` rows at 6 significant digits.
    #[default]
    Table,
}

pub fn emit_report(report: &ScenarioReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            // every field is a plain struct, number, string or vec: cannot fail
            let mut s = serde_json::to_string_pretty(report).expect("report is serializable");
            s.push('\n');
            s
        }
        ReportFormat::Table => table(report),
    }
}

/// Rounds to 6 significant digits and prints the shortest form that reads
/// back as that value (`1.0`, `0.25`, `1e-7`).
pub fn format_significant(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    // avoid printing "-0.0"
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded:?}")
}

fn table(r: &ScenarioReport) -> String {
    let v = &r.verdict;
    let num = format_significant;
    let mut rows: Vec<(String, String)> = vec![
        ("scenario".into(), r.config.scenario.to_string()),
        ("p_a_alice".into(), num(v.p_a_alice)),
        ("p_a_bob".into(), num(v.p_a_bob)),
        ("naive_concurrence".into(), num(v.naive_concurrence)),
        ("estimator_valid".into(), v.estimator_valid.to_string()),
        ("disagreement_prob".into(), num(v.disagreement_prob)),
        ("p_aa".into(), num(v.outcomes.p_aa)),
        ("p_as".into(), num(v.outcomes.p_as)),
        ("p_sa".into(), num(v.outcomes.p_sa)),
        ("p_ss".into(), num(v.outcomes.p_ss)),
        ("truth_single_copy_concurrence".into(), num(v.truth_single_copy_concurrence)),
    ];
    if let Some(description) = &r.config.description {
        rows.insert(1, ("description".into(), description.clone()));
    }
    if let Some(b) = v.truth_decomposition_bound {
        rows.push(("truth_decomposition_bound".into(), num(b)));
    }
    if let Some(f) = &r.functionals {
        rows.push(("mean_concurrence".into(), num(f.mean_concurrence)));
        rows.push(("mean_concurrence_functional".into(), num(f.mean_concurrence_functional)));
        rows.push(("member_concurrence_functional".into(), num(f.member_concurrence_functional)));
    }
    if let Some(s) = &r.shots {
        rows.push(("shots".into(), s.shots.to_string()));
        rows.push(("seed".into(), s.seed.to_string()));
        for (name, k) in ["count_aa", "count_as", "count_sa", "count_ss"]
            .into_iter()
            .zip(s.counts.as_array())
        {
            rows.push((name.into(), k.to_string()));
        }
    }
    for c in &r.checks {
        let actual = c.actual.map_or_else(|| "missing".to_string(), num);
        rows.push((
            format!("expect {}", c.quantity),
            format!(
                "{} (expected {} ± {}, got {actual})",
                if c.passed { "PASS" } else { "FAIL" },
                num(c.expected),
                num(c.tolerance)
            ),
        ));
    }
    if !r.checks.is_empty() {
        rows.push(("result".into(), if r.passed { "PASS" } else { "FAIL" }.into()));
    }

    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in rows {
        let _ = writeln!(out, "{k:<width$}  {val}");
    }
    out
}
