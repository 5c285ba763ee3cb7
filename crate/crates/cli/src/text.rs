use std::fmt::Write;

use crate::run::Report;

fn num(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.9}")
    }
}

pub fn render(r: &Report) -> String {
    let mut s = String::new();
    let name = r.name.as_deref().unwrap_or("<unnamed>");
    let sel = r.selector.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
    let verdict = if r.passed { "PASS" } else { "FAIL" };
    let _ = writeln!(s, "scenario {name} [{sel}]: {verdict} (exit {})", r.exit_code);
    if let Some(e) = &r.error {
        let _ = writeln!(s, "  error ({}): {}", e.kind, e.message);
    }
    for (label, v) in &r.validations {
        let state = if v.passed { "pass" } else { "FAIL" };
        let _ = writeln!(s, "  validation {label}: {state} ({} checks, {} violations)", v.checked, v.violations.len());
        for viol in v.violations.iter().take(10) {
            let _ = writeln!(s, "    {} at {:?} by {:.3e}", viol.axiom, viol.witness, viol.magnitude);
        }
        if v.violations.len() > 10 {
            let _ = writeln!(s, "    ... {} more", v.violations.len() - 10);
        }
    }
    for c in &r.checks {
        let _ = writeln!(s, "  check {}: {} ({})", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
    }
    if let Some(c) = &r.certificate {
        let chain: Vec<String> = c.chain.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "  u = {}, v = {}, chain {}", c.u, c.v, chain.join(" -> "));
        if let Some(p) = &c.premise {
            let _ = writeln!(s, "  premise {}: {} <= {} (rho = {})", p.name, num(p.lhs), num(p.rhs), num(p.rho));
        }
        let w = c.inequalities.iter().map(|q| q.name.len()).max().unwrap_or(4).max(10);
        let _ = writeln!(s, "  {:<w$}  {:>16} {:>3} {:>16}  {:>16}", "inequality", "lhs", "", "rhs", "slack");
        for q in &c.inequalities {
            let op = if q.strict { "<" } else { "<=" };
            let _ = writeln!(s, "  {:<w$}  {:>16} {:>3} {:>16}  {:>16}", q.name, num(q.lhs), op, num(q.rhs), num(q.slack));
        }
        for n in &c.notes {
            let _ = writeln!(s, "  note: {n}");
        }
    }
    s
}
