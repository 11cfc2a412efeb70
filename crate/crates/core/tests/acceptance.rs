//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria 2 and 8 are known to fail against their stated targets; the line still
//! reads FAIL and the run only errors if an outcome changes. Set
//! `ZENO_STRICT_ACCEPTANCE=1` to make any FAIL fatal.

mod common;

use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zeno_bench::bounds::recurrence::recurrence_residual;
use zeno_bench::bounds::tradeoffs::{fixed_interval_report, log_grid, Trend, Verdict};
use zeno_bench::bounds::{
    f_count, phi_closed, phi_direct, theorem1_bound, tradeoff_eps, tradeoff_tau, BoundParameters,
};
use zeno_bench::config::{config_hash, Experiment, ExperimentConfig};
use zeno_bench::dynamics::run_protocol;
use zeno_bench::error::Result;
use zeno_bench::linalg::{self, random};
use zeno_bench::measurement::{protocol_channel, three_term_povm, weak_measure_single, Protocol, Strength};
use zeno_bench::stabilizer::{self, StabilizerCode};
use zeno_bench::sweep::run_sweep;
use zeno_bench::verify::phi_grid;

const KNOWN_RED: &[u32] = &[2, 8];

struct Outcome {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(id: u32, name: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome {
        id,
        name,
        passed,
        detail,
    }
}

fn experiment() -> Experiment {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/bitflip3.json");
    let (cfg, _) = ExperimentConfig::load(&path).expect("bundled config loads");
    cfg.build().expect("bundled config builds")
}

fn couplings(exp: &Experiment) -> (f64, f64) {
    let d = stabilizer::decompose_over(&exp.code, &exp.hamiltonian, 0.0, 1.0, 1e-10).expect("decomposes");
    (d.j0, d.j1)
}

fn sweep_grid() -> (Vec<u64>, Vec<Strength>) {
    let strengths = [0.5, 1.0, 2.0, f64::INFINITY]
        .iter()
        .map(|&e| Strength::new(e).unwrap())
        .collect();
    (vec![1, 2, 4, 8, 16, 32, 64], strengths)
}

fn bound_dominance(exp: &Experiment) -> Result<Outcome> {
    let start = Instant::now();
    let report = run_sweep(exp, &[Protocol::Group], config_hash("acceptance"))?;
    let elapsed = start.elapsed().as_secs_f64();
    let worst = report
        .rows
        .iter()
        .map(|r| r.d_sim - r.d_bound)
        .fold(f64::NEG_INFINITY, f64::max);
    let ok = report.rows.len() == 28 && worst <= 1e-9 && elapsed < 30.0;
    Ok(outcome(
        1,
        "bound dominance",
        ok,
        format!(
            "{} rows, max(D_sim - D_bound) = {worst:.3e}, max ratio {:.4}, {elapsed:.2}s",
            report.rows.len(),
            report.summary.max_ratio
        ),
    ))
}

fn convergence_rate(exp: &Experiment) -> Result<Outcome> {
    let (j0, j1) = couplings(exp);
    let p = BoundParameters::new(3, Protocol::Group, j0, j1, 1.0, 100_000, Strength::new(1.0)?)?;
    let r = theorem1_bound(&p)?;
    let b1 = r.b1.expect("finite strength");
    let m = p.cycles as f64;
    let rel = (m * r.full_bound - b1).abs() / b1;
    let half_rel = (m * r.half_sum_bound - b1).abs() / b1;
    Ok(outcome(
        2,
        "convergence rate",
        rel < 0.05,
        format!(
            "|M*B - B1|/B1 = {rel:.4} at M=1e5 (M*B/B1 = {:.6}); with the halved sum {half_rel:.2e}",
            m * r.full_bound / b1
        ),
    ))
}

fn phi_oracle() -> Result<Outcome> {
    let (mut worst_rel, mut worst_res, mut count) = (0.0f64, 0.0f64, 0usize);
    for (q, beta, xi, m) in phi_grid() {
        let direct = phi_direct(q, beta, xi, m)?;
        let closed = phi_closed(q, beta, xi, m)?.value;
        worst_rel = worst_rel.max((closed - direct).abs() / direct.abs());
        if m >= 2 {
            worst_res = worst_res.max(recurrence_residual(q, beta, xi, m, |k| phi_direct(q, beta, xi, k))?);
        }
        count += 1;
    }
    Ok(outcome(
        3,
        "phi oracle",
        worst_rel < 1e-9 && worst_res < 1e-9,
        format!("{count} points, max rel error {worst_rel:.2e}, max recurrence residual {worst_res:.2e}"),
    ))
}

fn counting_oracle() -> Result<Outcome> {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for gens in [&["ZZI", "IZZ"][..], &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"][..]] {
        let big_q = (1u64 << gens.len()) - 1;
        for l in 0..=5 {
            let counts = common::tuple_counts(gens, l);
            let want_id = f_count(big_q, l, true)?;
            let want_g = f_count(big_q, l, false)?;
            if counts[0] as u128 != want_id {
                mismatches.push(format!("Q={big_q} l={l} identity: {} vs {want_id}", counts[0]));
            }
            for (g, &n) in counts.iter().enumerate().skip(1) {
                if n as u128 != want_g {
                    mismatches.push(format!("Q={big_q} l={l} g={g}: {n} vs {want_g}"));
                }
            }
            checked += counts.len();
        }
    }
    Ok(outcome(
        4,
        "counting oracle",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("{checked} counts equal")
        } else {
            mismatches.join("; ")
        },
    ))
}

fn representation_suite() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let codes = [
        (StabilizerCode::from_labels(&["ZZI", "IZZ"])?, 2),
        (StabilizerCode::from_labels(&["XXI", "IXX"])?, 1),
        (StabilizerCode::from_labels(&["ZZ"])?, 2),
        (StabilizerCode::from_labels(&["XYZ"])?, 2),
    ];
    let strength = Strength::new(0.8)?;
    let (mut resolve, mut ortho, mut graded, mut eigen) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for sample in 0..50 {
        let (code, bath) = &codes[sample % codes.len()];
        let dim = (1 << code.num_qubits()) * bath;
        let a = random::matrix(&mut rng, dim);
        let b = random::matrix(&mut rng, dim);
        let ca = code.isotypical_components(&a, *bath)?;
        let cb = code.isotypical_components(&b, *bath)?;
        let sum = ca.iter().fold(linalg::CMatrix::zeros(dim, dim), |acc, x| acc + x);
        resolve = resolve.max(linalg::max_abs(&(sum - &a)));
        for g in 0..ca.len() {
            for h in 0..cb.len() {
                if g != h {
                    ortho = ortho.max(linalg::hs_inner(&ca[g], &ca[h]).norm());
                }
                let prod = &ca[g] * &cb[h];
                let projected = code.apply_isotypical_projector(g ^ h, &prod, *bath)?;
                graded = graded.max(linalg::max_abs(&(projected - &prod)));
            }
        }
        for s in 1..code.group_size() {
            let channel = weak_measure_single(code.element(s), *bath, strength)?;
            for (g, comp) in ca.iter().enumerate() {
                let factor = strength.zeta_pow(StabilizerCode::sigma_labels(g, s) as f64);
                let expected = comp * num_complex::Complex64::from(factor);
                eigen = eigen.max(linalg::max_abs(&(channel.apply(comp)? - expected)));
            }
        }
    }
    let worst = resolve.max(ortho).max(graded).max(eigen);
    Ok(outcome(
        5,
        "representation theory",
        worst < 1e-10,
        format!("resolution {resolve:.1e}, orthogonality {ortho:.1e}, graded {graded:.1e}, eigen-action {eigen:.1e}"),
    ))
}

fn strong_limit(exp: &Experiment) -> Result<Outcome> {
    let model = common::bitflip_model();
    let (cycles, _) = sweep_grid();
    let (j0, j1) = couplings(exp);
    let mut sim_err = 0.0f64;
    let mut bound_err = 0.0f64;
    for protocol in [Protocol::Group, Protocol::Generators] {
        for &m in &cycles {
            let r = run_protocol(
                &exp.code,
                &exp.hamiltonian,
                &exp.initial_state,
                1.0,
                m,
                Strength::Infinite,
                protocol,
            )?;
            sim_err = sim_err.max((r.distance - common::projective_distance(&model, 1.0, m)).abs());
            let p = BoundParameters::new(3, protocol, j0, j1, 1.0, m, Strength::Infinite)?;
            let b = theorem1_bound(&p)?.full_bound;
            let s = common::strong_formula(3.0, j0, j1, 1.0, m);
            bound_err = bound_err.max((b - s).abs() / s);
        }
    }
    Ok(outcome(
        6,
        "strong-limit consistency",
        sim_err < 1e-10 && bound_err < 1e-13,
        format!("simulation vs projective oracle {sim_err:.2e}, bound vs strong formula (rel) {bound_err:.2e}"),
    ))
}

fn tradeoffs() -> Result<Outcome> {
    let mut notes = Vec::new();
    let mut ok = true;
    let grid = log_grid(2, 6, 4);
    for (a, ratio, want) in [
        (0.5, 1.0, Verdict::Convergent),
        (1.2, 1.0, Verdict::Divergent),
        (0.4, 2.0, Verdict::Convergent),
        (0.6, 2.0, Verdict::Divergent),
    ] {
        let p = BoundParameters::new(3, Protocol::Group, 0.1, 0.1 * ratio, 1.0, 1, Strength::new(1.0)?)?;
        let s = tradeoff_tau(&p, a, &grid)?;
        ok &= s.verdict == want;
        notes.push(format!("a={a},J1/J0={ratio}: {:?}", s.verdict));
    }
    let p = BoundParameters::new(3, Protocol::Group, 0.05, 0.1, 1.0, 1, Strength::new(1.0)?)?;
    for (exponent, want) in [(-0.4, Trend::Decreasing), (-0.6, Trend::NonDecreasing)] {
        let s = tradeoff_eps(&p, exponent, &grid)?;
        ok &= s.trend == want;
        notes.push(format!("eps=M^{exponent}: {:?}", s.trend));
    }
    Ok(outcome(7, "trade-off classifications", ok, notes.join(", ")))
}

fn fixed_interval() -> Result<Outcome> {
    let series = fixed_interval_report(3, 1.0, 1.0, 0.05, 50)?;
    let single = fixed_interval_report(3, 1.0, 1.0, 0.01, 1)?;
    let exact = single.values[0];
    let rel = (single.leading_expansion - exact).abs() / exact;
    let rel3 = (single.third_order_expansion - exact).abs() / exact;
    Ok(outcome(
        8,
        "fixed-interval result",
        series.strictly_increasing && series.minimizer == 1 && rel < 1e-3,
        format!(
            "strictly increasing over 1..50: {}, f(1) vs stated expansion rel {rel:.2e}, with cubic term {rel3:.2e}",
            series.strictly_increasing
        ),
    ))
}

fn generators_vs_group(exp: &Experiment) -> Result<Outcome> {
    let (j0, j1) = couplings(exp);
    let (cycles, strengths) = sweep_grid();
    let mut ordering = true;
    for &m in &cycles {
        for &eps in &strengths {
            let group = BoundParameters::new(3, Protocol::Group, j0, j1, 1.0, m, eps)?;
            let gens = group.with_protocol(Protocol::Generators);
            ordering &= theorem1_bound(&gens)?.full_bound >= theorem1_bound(&group)?.full_bound;
        }
    }
    let report = run_sweep(exp, &[Protocol::Generators], config_hash("acceptance"))?;
    let worst = report
        .rows
        .iter()
        .map(|r| r.d_sim - r.d_bound)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(outcome(
        9,
        "generators vs group",
        ordering && worst <= 1e-9,
        format!("bound ordering holds: {ordering}, generator sweep max(D_sim - D_bound) = {worst:.3e}"),
    ))
}

fn channel_sanity(exp: &Experiment) -> Result<Outcome> {
    let (cycles, strengths) = sweep_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let bath = exp.hamiltonian.bath_dim();
    let dim = exp.hamiltonian.dim();
    let (mut trace_err, mut min_eig) = (0.0f64, f64::INFINITY);
    for &eps in &strengths {
        let mut channels = vec![
            protocol_channel(&exp.code, bath, eps, Protocol::Group)?,
            protocol_channel(&exp.code, bath, eps, Protocol::Generators)?,
        ];
        for s in 1..exp.code.group_size() {
            channels.push(weak_measure_single(exp.code.element(s), bath, eps)?);
            channels.push(three_term_povm(exp.code.element(s), bath, eps)?);
        }
        for ch in &channels {
            for _ in 0..4 {
                let out = ch.apply(&random::density(&mut rng, dim))?;
                trace_err = trace_err.max((linalg::trace(&out).re - 1.0).abs());
                min_eig = min_eig.min(linalg::min_eigenvalue(&out));
            }
        }
        for protocol in [Protocol::Group, Protocol::Generators] {
            for &m in &cycles {
                let r = run_protocol(&exp.code, &exp.hamiltonian, &exp.initial_state, 1.0, m, eps, protocol)?;
                trace_err = trace_err.max(r.validity.trace_error);
                min_eig = min_eig.min(r.validity.min_eigenvalue);
            }
        }
    }
    Ok(outcome(
        10,
        "channel sanity",
        trace_err <= 1e-12 && min_eig >= -1e-10,
        format!("max trace error {trace_err:.2e}, min eigenvalue {min_eig:.2e}"),
    ))
}

fn main() {
    let exp = experiment();
    type Check<'a> = Box<dyn Fn() -> Result<Outcome> + 'a>;
    let checks: Vec<(u32, &str, Check)> = vec![
        (1, "bound dominance", Box::new(|| bound_dominance(&exp))),
        (2, "convergence rate", Box::new(|| convergence_rate(&exp))),
        (3, "phi oracle", Box::new(phi_oracle)),
        (4, "counting oracle", Box::new(counting_oracle)),
        (5, "representation theory", Box::new(representation_suite)),
        (6, "strong-limit consistency", Box::new(|| strong_limit(&exp))),
        (7, "trade-off classifications", Box::new(tradeoffs)),
        (8, "fixed-interval result", Box::new(fixed_interval)),
        (9, "generators vs group", Box::new(|| generators_vs_group(&exp))),
        (10, "channel sanity", Box::new(|| channel_sanity(&exp))),
    ];
    let strict = std::env::var_os("ZENO_STRICT_ACCEPTANCE").is_some_and(|v| v == "1");
    let mut unexpected = Vec::new();
    for (id, name, check) in checks {
        let o = check().unwrap_or_else(|e| outcome(id, name, false, format!("error: {e}")));
        let known = KNOWN_RED.contains(&o.id);
        println!(
            "{} criterion {:>2} {}: {}{}",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.detail,
            if known && !o.passed { " [known]" } else { "" }
        );
        if o.passed == known || (strict && !o.passed) {
            unexpected.push(o.id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
