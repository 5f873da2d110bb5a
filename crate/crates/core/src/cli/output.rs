use serde::Serialize;

use super::config::RunConfig;
use super::verify::{CheckStatus, VerifyReport};
use crate::protocols::{BaselineReport, ProtocolTranscript, SweepTable};

/// Version tag of every JSON document written by the CLI.
pub const SCHEMA: &str = "qswitch-lab/1";

#[derive(Serialize)]
struct Meta<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    meta: Meta<'a>,
    data: &'a T,
}

/// Pretty JSON document `{schema, meta, data}` ending in a newline.
pub fn json_document<T: Serialize>(cfg: &RunConfig, data: &T) -> String {
    let env = Envelope {
        schema: SCHEMA,
        meta: Meta {
            tool: "qswitch",
            version: env!("CARGO_PKG_VERSION"),
            config: cfg,
        },
        data,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("plain data serializes");
    s.push('\n');
    s
}

/// Twelve significant digits in scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn lines(rows: Vec<Vec<String>>) -> String {
    let mut out = String::new();
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

pub fn verify_csv(r: &VerifyReport) -> String {
    let mut rows = vec![vec!["check", "status", "expectation", "value", "tolerance", "note"]
        .into_iter()
        .map(String::from)
        .collect()];
    for c in &r.checks {
        rows.push(vec![
            c.name.clone(),
            serde_json::to_value(c.status).unwrap().as_str().unwrap().to_string(),
            serde_json::to_value(c.expectation).unwrap().as_str().unwrap().to_string(),
            c.value.map(num).unwrap_or_default(),
            num(c.tolerance),
            quote(c.note.as_deref().unwrap_or("")),
        ]);
    }
    lines(rows)
}

pub fn transcript_csv(t: &ProtocolTranscript) -> String {
    let mut head: Vec<String> = ["protocol", "d", "n_lines", "x", "resource"].map(String::from).to_vec();
    head.extend(t.metrics.keys().cloned());
    let mut row = vec![
        t.protocol.to_string(),
        t.params.d.to_string(),
        t.params.n_lines.to_string(),
        t.params.x.map(|x| x.to_string()).unwrap_or_default(),
        quote(&t.params.resource),
    ];
    row.extend(t.metrics.values().map(|v| num(*v)));
    lines(vec![head, row])
}

pub fn baseline_csv(r: &BaselineReport) -> String {
    let head = [
        "d",
        "bob_success",
        "bound",
        "min_pairwise_trace_distance",
        "max_pairwise_trace_distance",
        "leak_certified",
        "implication_holds",
    ]
    .map(String::from)
    .to_vec();
    let row = vec![
        r.d.to_string(),
        num(r.bob_success),
        num(r.bound),
        num(r.min_pairwise_trace_distance),
        num(r.max_pairwise_trace_distance),
        r.leak_certified.to_string(),
        r.implication_holds.to_string(),
    ];
    lines(vec![head, row])
}

pub fn sweep_csv(t: &SweepTable) -> String {
    let mut head: Vec<String> = (0..t.d).map(|j| format!("lambda_{j}")).collect();
    head.extend(["metric", "resource_entanglement", "is_perfect"].map(String::from));
    let mut rows = vec![head];
    for r in &t.rows {
        let mut row: Vec<String> = r.spectrum.iter().map(|l| num(*l)).collect();
        row.push(num(r.metric));
        row.push(num(r.resource_entanglement));
        row.push(r.is_perfect.to_string());
        rows.push(row);
    }
    lines(rows)
}

pub fn verify_summary(r: &VerifyReport) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let verdict = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        let value = c.value.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into());
        let expect = serde_json::to_value(c.expectation).unwrap();
        s.push_str(&format!(
            "{verdict} {:<32} value={value} tol={:.1e} ({})",
            c.name,
            c.tolerance,
            expect.as_str().unwrap()
        ));
        if let Some(n) = &c.note {
            s.push_str(&format!(" [{n}]"));
        }
        s.push('\n');
    }
    s.push_str(&format!(
        "verify d={} N={}: {}\n",
        r.d,
        r.n_lines,
        if r.passed { "all checks passed" } else { "FAILED" }
    ));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(1.0), "1.00000000000e0");
        assert_eq!(num(0.9330127018922193), "9.33012701892e-1");
        assert_eq!(quote("schmidt:0.25,0.75"), "\"schmidt:0.25,0.75\"");
        assert_eq!(quote("max"), "max");
    }
}
