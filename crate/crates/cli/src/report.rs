use std::fmt::Write;

use mandelq::QResult;

pub fn human(label: &str, r: &QResult) -> String {
    let mut s = String::new();
    let d = &r.diagnostics;
    let q = r.q_bar.q;
    let _ = writeln!(s, "state: {label}");
    let _ = writeln!(s, "Q = {:.6}  ({:?})", r.q_min, r.q_min);
    let _ = writeln!(s, "q_bar = ({:.6}, {:.6}, {:.6})", q.x, q.y, q.z);
    let _ = writeln!(s, "theta = {:.6}  phi = {:.6}", r.q_bar.theta, r.q_bar.phi);
    let (a1, a2) = (r.alpha_bar.alpha1, r.alpha_bar.alpha2);
    let _ = writeln!(s, "alpha_bar = ({:.6}{:+.6}i, {:.6}{:+.6}i)", a1.re, a1.im, a2.re, a2.im);
    let _ = writeln!(s, "method: {}", r.method.name());
    if let Some(mu) = d.multiplier {
        let _ = writeln!(
            s,
            "multiplier = {mu:.6e}  lambda_min = {:.6e}  residual = {:.2e}",
            d.lambda_min.unwrap_or(f64::NAN),
            d.stationarity_residual.unwrap_or(f64::NAN)
        );
    }
    let _ = writeln!(s, "hard_case: {}  degenerate: {}", d.hard_case, d.degenerate);
    if let Some((l1, l2)) = d.levels {
        let _ = writeln!(s, "levels: {l1} x {l2}");
    }
    if let Some(c) = d.convergence_change {
        let _ = writeln!(s, "cutoff change: {c:.2e}");
    }
    let _ = writeln!(s, "closed-form check: {}", serde_json::to_string(&d.closed_form_check).unwrap_or_default());
    s
}

pub fn json(label: &str, r: &QResult) -> String {
    let doc = serde_json::json!({
        "state": label,
        "Q": r.q_min,
        "q_bar": [r.q_bar.q.x, r.q_bar.q.y, r.q_bar.q.z],
        "theta": r.q_bar.theta,
        "phi": r.q_bar.phi,
        "alpha_bar": [[r.alpha_bar.alpha1.re, r.alpha_bar.alpha1.im], [r.alpha_bar.alpha2.re, r.alpha_bar.alpha2.im]],
        "method": r.method.name(),
        "diagnostics": r.diagnostics,
    });
    serde_json::to_string_pretty(&doc).expect("serializable")
}
