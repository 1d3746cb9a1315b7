//! Text and line-delimited JSON rendering of scenario results.
//!
//! The JSON form carries no timings or host details, so it is byte-stable for
//! a fixed scenario and seed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use stpro_core::check::{Outcome, Report, Status};

/// The result of one scenario entry.
pub struct EntryResult {
    pub name: String,
    pub kind: String,
    /// Resolved keys, including `check`; this is the replay spec.
    pub keys: BTreeMap<String, String>,
    pub seed: u64,
    pub budget: u64,
    pub expect: Status,
    pub criterion: Option<String>,
    pub report: Report,
    pub elapsed: Duration,
}

impl EntryResult {
    /// Whether the outcome matches the `expect` key; negative entries pass by failing.
    pub fn verdict(&self) -> Status {
        match (self.expect, self.report.status()) {
            (_, Status::Inconclusive) => Status::Inconclusive,
            (want, got) if want == got => Status::Pass,
            _ => Status::Fail,
        }
    }

    pub fn spec_json(&self) -> String {
        serde_json::to_string(&self.keys).expect("string map serializes")
    }

    pub fn replay_command(&self, o: &Outcome) -> Option<String> {
        let w = o.witness.as_ref()?;
        Some(format!(
            "stpro replay --spec {} --identity {} --index {}",
            shell_quote(&self.spec_json()),
            shell_quote(&o.name),
            w.index
        ))
    }
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}

/// Worst verdict over all entries; an empty run passes.
pub fn overall(results: &[EntryResult]) -> Status {
    results.iter().map(EntryResult::verdict).max().unwrap_or(Status::Pass)
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Inconclusive => 3,
    }
}

#[derive(Serialize)]
struct EntryLine<'a> {
    r#type: &'static str,
    entry: &'a str,
    check: &'a str,
    seed: u64,
    budget: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    criterion: Option<&'a str>,
    expect: &'static str,
    status: &'static str,
    verdict: &'static str,
    identities: usize,
}

#[derive(Serialize)]
struct WitnessJson<'a> {
    index: u64,
    detail: &'a str,
}

#[derive(Serialize)]
struct OutcomeLine<'a> {
    r#type: &'static str,
    entry: &'a str,
    identity: &'a str,
    status: &'static str,
    evaluated: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    replay: Option<String>,
}

#[derive(Serialize)]
struct SummaryLine {
    r#type: &'static str,
    version: &'static str,
    entries: usize,
    pass: usize,
    fail: usize,
    inconclusive: usize,
    status: &'static str,
}

pub fn json_lines(results: &[EntryResult]) -> String {
    let mut out = String::new();
    for r in results {
        push(&mut out, &EntryLine {
            r#type: "entry",
            entry: &r.name,
            check: &r.kind,
            seed: r.seed,
            budget: r.budget,
            criterion: r.criterion.as_deref(),
            expect: r.expect.as_str(),
            status: r.report.status().as_str(),
            verdict: r.verdict().as_str(),
            identities: r.report.outcomes.len(),
        });
        for o in &r.report.outcomes {
            push(&mut out, &OutcomeLine {
                r#type: "outcome",
                entry: &r.name,
                identity: &o.name,
                status: o.status.as_str(),
                evaluated: o.evaluated,
                witness: o.witness.as_ref().map(|w| WitnessJson { index: w.index, detail: &w.detail }),
                note: o.note.as_deref(),
                replay: r.replay_command(o),
            });
        }
    }
    let count = |s: Status| results.iter().filter(|r| r.verdict() == s).count();
    push(&mut out, &SummaryLine {
        r#type: "summary",
        version: env!("CARGO_PKG_VERSION"),
        entries: results.len(),
        pass: count(Status::Pass),
        fail: count(Status::Fail),
        inconclusive: count(Status::Inconclusive),
        status: overall(results).as_str(),
    });
    out
}

fn push<T: Serialize>(out: &mut String, line: &T) {
    out.push_str(&serde_json::to_string(line).expect("report lines serialize"));
    out.push('\n');
}

pub fn text(results: &[EntryResult], source: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "stpro {} on {} ({} entries)", env!("CARGO_PKG_VERSION"), source, results.len());
    for r in results {
        let tag = r.criterion.as_ref().map(|c| format!(" criterion {c}")).unwrap_or_default();
        let neg = if r.expect == Status::Fail { ", expected to fail" } else { "" };
        let _ = writeln!(
            out,
            "\n[{}] {} seed={} budget={}{tag}: {}{neg} ({:.2?})",
            r.name,
            r.kind,
            r.seed,
            r.budget,
            r.verdict(),
            r.elapsed
        );
        for o in &r.report.outcomes {
            let _ = writeln!(out, "  {:<12} {} ({} evaluated)", o.status.as_str(), o.name, o.evaluated);
            if let Some(w) = &o.witness {
                let _ = writeln!(out, "               witness #{}: {}", w.index, w.detail);
            }
            if let Some(n) = &o.note {
                let _ = writeln!(out, "               {n}");
            }
            if let Some(cmd) = r.replay_command(o) {
                let _ = writeln!(out, "               replay: {cmd}");
            }
        }
    }
    let count = |s: Status| results.iter().filter(|r| r.verdict() == s).count();
    let _ = writeln!(
        out,
        "\n{}: {} passed, {} failed, {} inconclusive",
        overall(results),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Inconclusive)
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use stpro_core::check::Witness;

    fn result(expect: Status, status: Status) -> EntryResult {
        EntryResult {
            name: "e".into(),
            kind: "roots".into(),
            keys: [("check".to_string(), "roots".to_string()), ("phi".to_string(), "A'2".to_string())].into(),
            seed: 1,
            budget: 10,
            expect,
            criterion: None,
            report: Report {
                outcomes: vec![Outcome {
                    name: "x".into(),
                    evaluated: 1,
                    status,
                    witness: (status == Status::Fail).then(|| Witness { index: 4, detail: "d".into() }),
                    note: None,
                }],
            },
            elapsed: Duration::from_millis(5),
        }
    }

    #[test]
    fn verdicts() {
        assert_eq!(result(Status::Pass, Status::Pass).verdict(), Status::Pass);
        assert_eq!(result(Status::Fail, Status::Fail).verdict(), Status::Pass);
        assert_eq!(result(Status::Fail, Status::Pass).verdict(), Status::Fail);
        assert_eq!(result(Status::Pass, Status::Inconclusive).verdict(), Status::Inconclusive);
        assert_eq!(overall(&[]), Status::Pass);
    }

    #[test]
    fn json_has_no_timings_and_quotes_replay() {
        let mut a = result(Status::Pass, Status::Fail);
        let j1 = json_lines(std::slice::from_ref(&a));
        a.elapsed = Duration::from_secs(9);
        assert_eq!(j1, json_lines(&[a]));
        assert!(j1.contains(r#"--spec '{\"check\":\"roots\",\"phi\":\"A'\\''2\"}'"#), "{j1}");
        assert_eq!(j1.lines().count(), 3);
    }
}
