use std::fmt::Write;

use super::RunReport;
use crate::verdict::Status;

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Holds => "HOLDS",
        Status::Fails => "FAILS",
        Status::Inconclusive => "INCONCLUSIVE",
    }
}

/// Markdown rendering of a run: a summary table and one section per check.
pub fn render_markdown(run: &RunReport) -> String {
    let mut out = String::new();
    let s = &run.summary;
    let _ = writeln!(out, "# Theorem harness report\n");
    let _ = writeln!(
        out,
        "seed {}; {} checks: {} consistent, {} violation, {} inconclusive, {} errors\n",
        run.seed, s.checks, s.consistent, s.violation, s.inconclusive, s.errors
    );
    let _ = writeln!(out, "| theorem | systems | outcome | holds | fails | inconclusive |");
    let _ = writeln!(out, "|---|---|---|---|---|---|");
    for r in &run.reports {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.theorem,
            r.systems.join(", "),
            r.outcome,
            r.count(Status::Holds),
            r.count(Status::Fails),
            r.count(Status::Inconclusive)
        );
    }
    for r in &run.reports {
        let _ = writeln!(out, "\n## {} ({})\n\n{}\n", r.theorem, r.outcome, r.statement);
        if let Some(e) = &r.error {
            let _ = writeln!(out, "error: {e}\n");
        }
        for a in &r.assertions {
            let _ = writeln!(out, "- asserted: {a}");
        }
        for f in &r.findings {
            let _ = writeln!(out, "- finding: {f}");
        }
        for v in &r.violations {
            let fails = &r.predicates[v.fails];
            let _ = writeln!(out, "- VIOLATION: {} ({} on {} {})", v.claim, fails.id, fails.system, fails.subject);
        }
        if !r.predicates.is_empty() {
            let _ = writeln!(out, "\n| predicate | system | subject | required | verdict |");
            let _ = writeln!(out, "|---|---|---|---|---|");
            for p in &r.predicates {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    p.id,
                    p.system,
                    p.subject.replace('|', "\\|"),
                    if p.required { "yes" } else { "no" },
                    status_text(p.verdict.status)
                );
            }
        }
    }
    out
}
