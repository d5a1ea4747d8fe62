//! Acceptance criteria 1–8, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so the verdict lines are always
//! printed, and exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mandelq::closed_forms::{
    discrepancy_ledger, validate_family, Reading, Verdict, CLOSED_FORM_TOLERANCE,
};
use mandelq::fock::{fock_state, realize, Cutoff, JointState, TruncationPolicy};
use mandelq::minimizer::{minimize_grid, minimize_sphere_quadratic, GridConfig, SphereQuadratic};
use mandelq::moments::{
    extract_moments, mandel_q_at, mandel_q_covariant_denominator, mandel_q_direct, q_of_alpha,
};
use mandelq::sweep::{preset, run_sweep, write_csv, Axis, AxisValues, Format, SweepSpec};
use mandelq::{invariant_mandel_q, Family, QOptions, SU2Element, TwoModeState};
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as C64;
use rand::Rng;

type Check = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(u8, &str, Check, Option<Duration>); 8] = [
        (1, "Fock exactness", fock_exactness, Some(Duration::from_secs(1))),
        (2, "reduction identity", reduction_identity, Some(Duration::from_secs(30))),
        (3, "U(2) invariance", u2_invariance, Some(Duration::from_secs(60))),
        (4, "minimizer cross-validation", minimizer_cross_validation, Some(Duration::from_secs(30))),
        (5, "closed forms vs oracle", closed_forms_vs_oracle, Some(Duration::from_secs(300))),
        (6, "sign claims", sign_claims, Some(Duration::from_secs(600))),
        (7, "covariant denominator", covariant_denominator, Some(Duration::from_secs(1))),
        (8, "determinism", determinism, None),
    ];
    let mut failed = 0;
    for (id, name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let over_budget = budget.is_some_and(|b| elapsed > b);
        let (verdict, detail) = match outcome {
            Ok(detail) if !over_budget => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; exceeded {:?}", budget.unwrap())),
            Err(why) => ("FAIL", why),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {id}: {verdict}  {name} ({elapsed:.2?}): {detail}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fock_exactness() -> Result<String, String> {
    let mut count = 0;
    for total in 1..=6usize {
        for n1 in 0..=total {
            let n2 = total - n1;
            let r = invariant_mandel_q(&TwoModeState::Fock { n1, n2 }, &QOptions::default())
                .map_err(|e| format!("Fock({n1},{n2}): {e}"))?;
            let expected = -(n1.max(n2) as f64) / total as f64;
            ensure((r.q_min - expected).abs() < 1e-9, || {
                format!("Fock({n1},{n2}): Q = {} expected {expected}", r.q_min)
            })?;
            let q3 = r.q_bar.q.z;
            match n1.cmp(&n2) {
                std::cmp::Ordering::Greater => ensure((q3 - 1.0).abs() < 1e-9, || format!("Fock({n1},{n2}): q3 = {q3}"))?,
                std::cmp::Ordering::Less => ensure((q3 + 1.0).abs() < 1e-9, || format!("Fock({n1},{n2}): q3 = {q3}"))?,
                std::cmp::Ordering::Equal => ensure(r.diagnostics.degenerate && (q3 - 1.0).abs() < 1e-9, || {
                    format!("Fock({n1},{n2}): tie not flagged (q3 = {q3})")
                })?,
            }
            count += 1;
        }
    }
    Ok(format!("{count} states exact to 1e-9"))
}

fn reduction_identity() -> Result<String, String> {
    let mut rng = common::rng(2);
    let policy = TruncationPolicy::default();
    let mut states = Vec::new();
    for _ in 0..10 {
        states.push(common::random_squeezed_coherent(&mut rng, 1.5, 0.8));
        states.push(common::random_thermal(&mut rng));
        states.push(common::random_superposition(&mut rng));
        states.push(common::random_fock(&mut rng));
        let n_max = rng.gen_range(1..=8);
        let rank = rng.gen_range(1..=3);
        states.push(TwoModeState::ExplicitDensityMatrix(common::random_density(&mut rng, n_max, rank)));
    }
    let mut pairs = 0;
    let mut worst: f64 = 0.0;
    for state in &states {
        let moments = extract_moments(state, &policy).map_err(|e| format!("{state:?}: {e}"))?;
        let joint = realize(state, &policy)
            .and_then(|r| r.to_joint(20_000))
            .map_err(|e| format!("{state:?}: {e}"))?;
        for _ in 0..5 {
            let alpha = common::random_alpha(&mut rng);
            let reduced = mandel_q_at(&moments, &q_of_alpha(&alpha)).map_err(|e| e.to_string())?;
            let direct = mandel_q_direct(&joint, &alpha).map_err(|e| e.to_string())?;
            worst = worst.max((reduced - direct).abs());
            pairs += 1;
        }
    }
    ensure(worst < 1e-8, || format!("max deviation {worst:e} over {pairs} pairs"))?;
    Ok(format!("{pairs} pairs, max deviation {worst:.1e}"))
}

fn u2_invariance() -> Result<String, String> {
    let mut rng = common::rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n_max = rng.gen_range(1..=6);
        let rank = rng.gen_range(1..=4);
        let rho = common::random_density(&mut rng, n_max, rank);
        let base = invariant_mandel_q(&TwoModeState::ExplicitDensityMatrix(rho.clone()), &QOptions::default())
            .map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let u = common::random_u2(&mut rng);
            let rotated = TwoModeState::ExplicitDensityMatrix(common::rotate(&rho, &u));
            let r = invariant_mandel_q(&rotated, &QOptions::default()).map_err(|e| e.to_string())?;
            worst = worst.max((r.q_min - base.q_min).abs());
        }
    }
    ensure(worst < 1e-7, || format!("max |Q(ρ') − Q(ρ)| = {worst:e}"))?;
    Ok(format!("250 rotations, max change {worst:.1e}"))
}

fn random_quadratic(rng: &mut rand_chacha::ChaCha8Rng, i: usize) -> SphereQuadratic {
    let scale = 10f64.powf(rng.gen_range(-1.0..1.0));
    let m = Matrix3::from_fn(|_, _| common::gaussian(rng));
    let a = (m + m.transpose()) * (0.5 * scale);
    let mut b = Vector3::from_fn(|_, _| common::gaussian(rng)) * scale;
    if i % 5 == 0 {
        // Near and exact hard cases: little or no pull along the bottom eigenvector.
        let eig = a.symmetric_eigen();
        let k = eig.eigenvalues.imin();
        let w = eig.eigenvectors.column(k).into_owned();
        b -= w * w.dot(&b);
        b *= if i % 10 == 0 { 0.05 } else { 1.0 };
    }
    SphereQuadratic { a, b, c: common::gaussian(rng), scale: rng.gen_range(0.05..2.0) }
}

fn minimizer_cross_validation() -> Result<String, String> {
    let mut rng = common::rng(4);
    let dense = GridConfig::dense();
    let mut worst_value: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    let mut hard = 0;
    for i in 0..500 {
        let sq = random_quadratic(&mut rng, i);
        let exact = minimize_sphere_quadratic(&sq).map_err(|e| e.to_string())?;
        let grid = minimize_grid(|d| sq.objective(&d.q), &dense).map_err(|e| e.to_string())?;
        let d = &exact.diagnostics;
        let residual = d.stationarity_residual.unwrap_or(f64::INFINITY);
        let (mu, lam) = (d.multiplier.unwrap_or(f64::NAN), d.lambda_min.unwrap_or(f64::NAN));
        ensure(mu <= lam + 1e-12 * lam.abs().max(1.0), || format!("instance {i}: μ = {mu} > λ_min = {lam}"))?;
        ensure(exact.q_min <= grid.q_min + 1e-12, || {
            format!("instance {i}: grid {} beat secular {}", grid.q_min, exact.q_min)
        })?;
        worst_value = worst_value.max((exact.q_min - grid.q_min).abs());
        worst_residual = worst_residual.max(residual);
        hard += d.hard_case as usize;
    }
    ensure(worst_value < 1e-7, || format!("max |secular − grid| = {worst_value:e}"))?;
    ensure(worst_residual < 1e-9, || format!("max stationarity residual {worst_residual:e}"))?;
    Ok(format!(
        "500 instances ({hard} hard case), max gap {worst_value:.1e}, max residual {worst_residual:.1e}"
    ))
}

fn closed_forms_vs_oracle() -> Result<String, String> {
    let policy = TruncationPolicy::default();
    let tol = 1e-5;
    let mut parts = Vec::new();
    for family in [Family::SqueezedCoherent, Family::Superposition] {
        let s = validate_family(family, Reading::Resolved, &policy, tol).map_err(|e| e.to_string())?;
        let n = s.points.len();
        ensure(n >= 100, || format!("{family}: only {n} points"))?;
        ensure(s.count(Verdict::Mismatch) == 0, || {
            format!("{family}: {} mismatches, max diff {:e}", s.count(Verdict::Mismatch), s.max_abs_diff())
        })?;
        parts.push(format!("{family} {n} points max diff {:.1e}", s.max_abs_diff()));
    }
    // The thermal expression either matches or every failure is a recorded discrepancy.
    let s = validate_family(Family::SqueezedThermal, Reading::Resolved, &policy, CLOSED_FORM_TOLERANCE)
        .map_err(|e| e.to_string())?;
    let mismatches = s.count(Verdict::Mismatch);
    if mismatches > 0 {
        let recorded = discrepancy_ledger().iter().any(|d| d.family == Family::SqueezedThermal && !d.resolved);
        ensure(recorded, || format!("thermal: {mismatches} mismatches with no ledger entry"))?;
        ensure(s.mismatches().all(|p| p.report.oracle_value.is_some()), || {
            "thermal: mismatch without an oracle value".to_string()
        })?;
    }
    parts.push(format!("thermal {mismatches}/{} mismatches, all in the ledger", s.points.len()));
    Ok(parts.join("; "))
}

fn squeeze_axes(max: f64, steps: usize) -> Vec<Axis> {
    ["a", "b"]
        .map(|name| Axis { name: name.to_string(), values: AxisValues::Range { min: 0.0, max, steps } })
        .to_vec()
}

fn sweep(family: Family, fixed: &[(&str, f64)], axes: Vec<Axis>) -> Result<Vec<(Vec<f64>, Option<f64>)>, String> {
    let spec = SweepSpec {
        family,
        fixed: fixed.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        axes,
        cutoff: None,
        cross_check: false,
        format: Format::Csv,
        preset: None,
        notes: Vec::new(),
    };
    let out = run_sweep(&spec).map_err(|e| e.to_string())?;
    Ok(out.rows.into_iter().map(|r| (r.coords, r.result.map(|q| q.q_min))).collect())
}

fn sign_claims() -> Result<String, String> {
    // (a) squeezed vacuum never shows subpoissonian statistics.
    let rows = sweep(Family::SqueezedCoherent, &[("z1", 0.0), ("z2", 0.0)], squeeze_axes(1.2, 13))?;
    let mut vacuum_min = f64::INFINITY;
    for (coords, q) in &rows {
        match q {
            Some(q) => vacuum_min = vacuum_min.min(*q),
            None => ensure(coords == &[0.0, 0.0], || format!("undefined point {coords:?}"))?,
        }
    }
    ensure(vacuum_min >= -1e-9, || format!("(a) squeezed vacuum min Q = {vacuum_min:e}"))?;

    // (b) squeezed thermal: superpoissonian, a↔b symmetric, decreasing in β.
    let betas = [0.5, 1.0, 2.0, 4.0];
    let mut grids = Vec::new();
    for beta in betas {
        let rows = sweep(Family::SqueezedThermal, &[("beta", beta)], squeeze_axes(1.0, 11))?;
        let q: Vec<f64> = rows.iter().map(|(_, q)| q.ok_or("undefined thermal point")).collect::<Result<_, _>>()?;
        grids.push(q);
    }
    let mut asym: f64 = 0.0;
    for (g, beta) in grids.iter().zip(betas) {
        let low = g.iter().cloned().fold(f64::INFINITY, f64::min);
        ensure(low > 0.0, || format!("(b) β = {beta}: min Q = {low}"))?;
        for i in 0..11 {
            for j in 0..11 {
                asym = asym.max((g[i * 11 + j] - g[j * 11 + i]).abs());
            }
        }
    }
    ensure(asym < 1e-9, || format!("(b) a↔b asymmetry {asym:e}"))?;
    for k in 1..betas.len() {
        for p in 0..121 {
            ensure(grids[k][p] < grids[k - 1][p], || {
                format!("(b) Q not decreasing between β = {} and {} at point {p}", betas[k - 1], betas[k])
            })?;
        }
    }

    // (c) superposition presets stay at or below zero.
    let mut sup_max = f64::NEG_INFINITY;
    for name in ["fig5a", "fig5b", "fig5c", "fig5d"] {
        let spec = preset(name).ok_or("missing preset")?;
        for row in run_sweep(&spec).map_err(|e| e.to_string())?.rows {
            let q = row.result.ok_or_else(|| format!("{name}: undefined point"))?.q_min;
            sup_max = sup_max.max(q);
        }
    }
    ensure(sup_max <= 1e-9, || format!("(c) superposition max Q = {sup_max:e}"))?;

    // (d) squeezed coherent presets on the a = b diagonal.
    let mut diag_max = f64::NEG_INFINITY;
    let mut diag_points = 0;
    for fig in 1..=3 {
        for panel in ['a', 'b', 'c', 'd'] {
            let spec = preset(&format!("fig{fig}{panel}")).ok_or("missing preset")?;
            let values = spec.axes[0].values.values();
            let options = spec.options();
            for &a in &values {
                let state = spec.state_at(&[a, a]).map_err(|e| e.to_string())?;
                match invariant_mandel_q(&state, &options) {
                    Ok(r) => {
                        diag_max = diag_max.max(r.q_min);
                        diag_points += 1;
                    }
                    Err(mandelq::Error::ZeroIntensity(_)) => {}
                    Err(e) => return Err(format!("fig{fig}{panel} a = b = {a}: {e}")),
                }
            }
        }
    }
    ensure(diag_max <= 1e-9, || format!("(d) diagonal max Q = {diag_max:e}"))?;

    Ok(format!(
        "vacuum min {vacuum_min:.1e}; thermal asymmetry {asym:.1e}; superposition max {sup_max:.1e}; \
         diagonal max {diag_max:.1e} over {diag_points} points"
    ))
}

fn covariant_denominator() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    let pure = SU2Element::new(C64::from(1.0), C64::from(0.0)).unwrap();
    let other = SU2Element::new(C64::from(0.0), C64::from(1.0)).unwrap();
    for n1 in 1..=5 {
        for n2 in 1..=5 {
            let cutoff = Cutoff::with_n_max(n1.max(n2) + 1).unwrap();
            let state = JointState::Pure { cutoff, amplitudes: fock_state(n1, n2, cutoff).unwrap() };
            for alpha in [&pure, &other] {
                let q = mandel_q_covariant_denominator(&state, alpha).map_err(|e| e.to_string())?;
                worst = worst.max((q + 1.0).abs());
            }
        }
    }
    ensure(worst < 1e-10, || format!("max |Q + 1| = {worst:e}"))?;
    Ok(format!("25 Fock states, max |Q + 1| = {worst:.1e}"))
}

fn determinism() -> Result<String, String> {
    let spec = preset("fig4b").ok_or("missing preset fig4b")?;
    let render = || -> Result<Vec<u8>, String> {
        let out = run_sweep(&spec).map_err(|e| e.to_string())?;
        let mut buf = Vec::new();
        write_csv(&out, &mut buf).map_err(|e| e.to_string())?;
        Ok(buf)
    };
    let first = render()?;
    let second = render()?;
    ensure(first == second, || "fig4b CSV differs between runs".to_string())?;
    Ok(format!("{} identical bytes", first.len()))
}
