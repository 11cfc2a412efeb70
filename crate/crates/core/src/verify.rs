//! Seeded property suites, runnable from the command line.
//!
//! Every property reports the number of checks, the worst residual against its
//! tolerance and, on failure, the witness that produced the worst residual.
//! Output depends only on the seed and the options.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::recurrence::{
    phi_closed, phi_direct, recurrence_residual, summand_identity_residual, PhiCoefficients,
};
use crate::bounds::{f_count, gamma_l, gamma_l_binomial, strong_limit_bound, theorem1_bound, BoundParameters};
use crate::error::Result;
use crate::linalg::{self, CMatrix};
use crate::measurement::{self, damping_exponent, ChannelKind, Protocol, QuantumChannel, Strength};
use crate::pauli::{PauliOperator, Phase};
use crate::stabilizer::StabilizerCode;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Pauli,
    Stabilizer,
    Measurement,
    Bounds,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pauli" => Ok(Suite::Pauli),
            "stabilizer" => Ok(Suite::Stabilizer),
            "measurement" => Ok(Suite::Measurement),
            "bounds" => Ok(Suite::Bounds),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random samples per property.
    pub samples: usize,
    /// Test hook: relative error injected into the expected damping factor `ζ`.
    pub zeta_perturbation: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            samples: 20,
            zeta_perturbation: 0.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyOutcome {
    pub suite: &'static str,
    pub property: &'static str,
    pub checks: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub witness: Option<String>,
}

impl fmt::Display for PropertyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {}/{} checks={} worst={:.3e} tol={:.1e}",
            self.suite, self.property, self.checks, self.worst, self.tolerance
        )?;
        if let (false, Some(w)) = (self.passed, &self.witness) {
            write!(f, " witness: {w}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub outcomes: Vec<PropertyOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify seed={}", self.seed)?;
        for o in &self.outcomes {
            writeln!(f, "{o}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} properties, {} failed", self.outcomes.len(), failed)
    }
}

/// Worst-residual accumulator for one property.
struct Check {
    suite: &'static str,
    property: &'static str,
    tolerance: f64,
    checks: usize,
    worst: f64,
    witness: Option<String>,
}

impl Check {
    fn new(suite: &'static str, property: &'static str, tolerance: f64) -> Self {
        Check {
            suite,
            property,
            tolerance,
            checks: 0,
            worst: 0.0,
            witness: None,
        }
    }

    fn record(&mut self, residual: f64, witness: impl FnOnce() -> String) {
        self.checks += 1;
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        if residual > self.worst || (residual == self.worst && self.witness.is_none()) {
            self.worst = residual;
            self.witness = Some(witness());
        }
    }

    fn holds(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.record(if ok { 0.0 } else { 1.0 }, witness);
    }

    fn finish(self) -> PropertyOutcome {
        PropertyOutcome {
            suite: self.suite,
            property: self.property,
            checks: self.checks,
            worst: self.worst,
            tolerance: self.tolerance,
            passed: self.worst <= self.tolerance,
            witness: self.witness,
        }
    }
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut outcomes = Vec::new();
    if matches!(suite, Suite::Pauli | Suite::All) {
        outcomes.extend(pauli_suite(&mut rng, opts)?);
    }
    if matches!(suite, Suite::Stabilizer | Suite::All) {
        outcomes.extend(stabilizer_suite(&mut rng, opts)?);
    }
    if matches!(suite, Suite::Measurement | Suite::All) {
        outcomes.extend(measurement_suite(&mut rng, opts)?);
    }
    if matches!(suite, Suite::Bounds | Suite::All) {
        outcomes.extend(bounds_suite(&mut rng, opts)?);
    }
    Ok(VerifyReport {
        seed: opts.seed,
        outcomes,
    })
}

pub fn random_pauli<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PauliOperator {
    let x = (0..n).map(|_| rng.gen()).collect();
    let z = (0..n).map(|_| rng.gen()).collect();
    PauliOperator::from_bits(x, z, Phase::from_quarter_turns(rng.gen_range(0..4))).expect("n > 0")
}

/// Codes exercised by the suites, with the bath dimension used for each.
pub fn sample_codes() -> Vec<(StabilizerCode, usize)> {
    [
        (&["ZZI", "IZZ"][..], 2),
        (&["XXI", "IXX"][..], 1),
        (&["XXXX", "ZZZZ"][..], 1),
        (&["ZZ"][..], 2),
        (&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"][..], 1),
    ]
    .into_iter()
    .map(|(g, b)| (StabilizerCode::from_labels(g).expect("valid sample code"), b))
    .collect()
}

fn code_name(code: &StabilizerCode) -> String {
    code.generators()
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn pauli_suite(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<PropertyOutcome>> {
    let mut product = Check::new("pauli", "product_matches_matrices", 1e-12);
    let mut assoc = Check::new("pauli", "product_associative", 0.5);
    let mut comm = Check::new("pauli", "commutation_matches_matrices", 1e-12);
    let mut round = Check::new("pauli", "label_round_trip", 0.5);
    let mut unitary = Check::new("pauli", "unitary_and_hermitian_iff_real_phase", 1e-12);
    for _ in 0..opts.samples {
        let n = rng.gen_range(1..=4);
        let (p, q, r) = (random_pauli(rng, n), random_pauli(rng, n), random_pauli(rng, n));
        let (mp, mq) = (p.to_matrix()?, q.to_matrix()?);
        let pq = p.multiply(&q)?;
        product.record(linalg::max_abs(&(pq.to_matrix()? - &mp * &mq)), || {
            format!("P={p} Q={q}")
        });
        assoc.holds(pq.multiply(&r)? == p.multiply(&q.multiply(&r)?)?, || {
            format!("P={p} Q={q} R={r}")
        });
        let commutator = linalg::max_abs(&linalg::commutator(&mp, &mq));
        let expected = if p.commutes(&q)? { 0.0 } else { 2.0 };
        comm.record((commutator - expected).abs(), || format!("P={p} Q={q}"));
        round.holds(p.to_string().parse::<PauliOperator>()? == p, || format!("P={p}"));
        let dim = mp.nrows();
        let u = linalg::max_abs(&(&mp * mp.adjoint() - CMatrix::identity(dim, dim)));
        let h = linalg::hermiticity_error(&mp);
        let herm_ok = (h < 1e-12) == p.is_hermitian();
        unitary.record(if herm_ok { u } else { 1.0 }, || format!("P={p}"));
    }
    Ok(vec![
        product.finish(),
        assoc.finish(),
        comm.finish(),
        round.finish(),
        unitary.finish(),
    ])
}

fn stabilizer_suite(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<PropertyOutcome>> {
    let mut resolve = Check::new("stabilizer", "projectors_resolve_identity", 1e-10);
    let mut ortho = Check::new("stabilizer", "projectors_orthogonal_idempotent", 1e-10);
    let mut graded = Check::new("stabilizer", "graded_product_closure", 1e-10);
    let mut dims = Check::new("stabilizer", "isotypical_dimensions", 0.5);
    for (code, bath) in sample_codes() {
        let name = code_name(&code);
        let dim = (1usize << code.num_qubits()) * bath;
        let size = code.group_size();
        let samples = if dim > 16 { opts.samples.min(3) } else { opts.samples };
        for _ in 0..samples {
            let a = linalg::random::matrix(rng, dim);
            let b = linalg::random::matrix(rng, dim);
            let pa = code.isotypical_components(&a, bath)?;
            let pb = code.isotypical_components(&b, bath)?;
            let sum = pa.iter().fold(CMatrix::zeros(dim, dim), |acc, m| acc + m);
            resolve.record(linalg::max_abs(&(sum - &a)), || format!("code={name}"));
            let g = rng.gen_range(0..size);
            let h = rng.gen_range(0..size);
            let twice = code.apply_isotypical_projector(g, &pa[h], bath)?;
            let expected = if g == h {
                pa[h].clone()
            } else {
                CMatrix::zeros(dim, dim)
            };
            ortho.record(linalg::max_abs(&(twice - expected)), || {
                format!("code={name} g={g} h={h}")
            });
            let prod = &pa[g] * &pb[h];
            let proj = code.apply_isotypical_projector(g ^ h, &prod, bath)?;
            graded.record(linalg::max_abs(&(proj - &prod)), || format!("code={name} g={g} h={h}"));
        }
        if dim <= 16 {
            let d = code.verify_isotypical_dimensions(bath)?;
            dims.holds(d.matches_closed_forms(), || {
                format!("code={name} a={:?} b={:?}", d.state_dims, d.operator_dims)
            });
        }
    }
    Ok(vec![resolve.finish(), ortho.finish(), graded.finish(), dims.finish()])
}

fn measurement_suite(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<PropertyOutcome>> {
    let mut eigen = Check::new("measurement", "eigen_action_law", 1e-10);
    let mut trace = Check::new("measurement", "trace_preserving", 1e-12);
    let mut positive = Check::new("measurement", "positivity", 1e-10);
    let mut kraus = Check::new("measurement", "kraus_completeness", 1e-12);
    let mut order = Check::new("measurement", "group_order_invariance", 1e-10);
    let mut three = Check::new("measurement", "three_term_equivalence", 1e-10);
    let codes: Vec<_> = sample_codes()
        .into_iter()
        .filter(|(c, b)| (1usize << c.num_qubits()) * b <= 16)
        .collect();
    for _ in 0..opts.samples {
        let (code, bath) = &codes[rng.gen_range(0..codes.len())];
        let (code, bath) = (code, *bath);
        let name = code_name(code);
        let dim = (1usize << code.num_qubits()) * bath;
        let eps = Strength::Finite(rng.gen_range(0.05..3.0));
        let measured = rng.gen_range(1..code.group_size());
        let channels: Vec<(QuantumChannel, Option<usize>)> = vec![
            (
                measurement::weak_measure_single(code.element(measured), bath, eps)?,
                Some(measured),
            ),
            (measurement::protocol_channel(code, bath, eps, Protocol::Group)?, None),
            (
                measurement::protocol_channel(code, bath, eps, Protocol::Generators)?,
                None,
            ),
            (
                measurement::three_term_povm(code.element(measured), bath, eps)?,
                Some(measured),
            ),
        ];
        let a = linalg::random::matrix(rng, dim);
        let parts = code.isotypical_components(&a, bath)?;
        let rho = linalg::random::density(rng, dim);
        let zeta = eps.zeta() * (1.0 + opts.zeta_perturbation);
        for (chan, s) in &channels {
            let kind = chan.kind();
            for (g, part) in parts.iter().enumerate() {
                let m = damping_exponent(kind, code, g, *s);
                let out = chan.apply(part)?;
                eigen.record(linalg::max_abs(&(out - part.scale(zeta.powi(m as i32)))), || {
                    format!("code={name} kind={kind:?} g={g} eps={eps} zeta={zeta:.6}")
                });
            }
            let out = chan.apply(&rho)?;
            trace.record((linalg::trace(&out) - linalg::ONE).norm(), || {
                format!("code={name} kind={kind:?}")
            });
            positive.record((-linalg::min_eigenvalue(&out)).max(0.0), || {
                format!("code={name} kind={kind:?}")
            });
            kraus.record(chan.completeness_error(), || format!("code={name} kind={kind:?}"));
        }
        let mut labels: Vec<usize> = (1..code.group_size()).collect();
        labels.shuffle(rng);
        let shuffled = measurement::weak_measure_group_in_order(code, bath, eps, &labels)?;
        let diff = shuffled.apply(&rho)? - channels[1].0.apply(&rho)?;
        order.record(linalg::max_abs(&diff), || format!("code={name} order={labels:?}"));
        let two = channels[0].0.apply(&rho)?;
        let povm = channels[3].0.apply(&rho)?;
        three.record(linalg::max_abs(&(two - povm)), || {
            format!("code={name} S={}", code.element(measured))
        });
        debug_assert_eq!(channels[3].0.kind(), ChannelKind::ThreeTerm);
    }
    Ok(vec![
        eigen.finish(),
        trace.finish(),
        positive.finish(),
        kraus.finish(),
        order.finish(),
        three.finish(),
    ])
}

/// The grid `Q ∈ {1,3,7}`, `β ∈ {0.01,0.1,0.5}`, `ξ ∈ {0.1,0.5,0.9}`, `M ∈ 1..=15`.
pub fn phi_grid() -> Vec<(f64, f64, f64, u64)> {
    let mut out = Vec::new();
    for q in [1.0, 3.0, 7.0] {
        for beta in [0.01, 0.1, 0.5] {
            for xi in [0.1, 0.5, 0.9] {
                for m in 1..=15 {
                    out.push((q, beta, xi, m));
                }
            }
        }
    }
    out
}

/// `f_l` counted over the actual group by dynamic programming over the
/// group's multiplication table.
pub fn enumerate_counts(code: &StabilizerCode, max_l: usize) -> Result<Vec<Vec<u128>>> {
    let size = code.group_size();
    let mut table = vec![vec![0usize; size]; size];
    for (a, row) in table.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = code.label_of(&code.element(a).multiply(code.element(b))?)?;
        }
    }
    let mut counts = vec![vec![0u128; size]];
    counts[0][0] = 1;
    for l in 1..=max_l {
        let mut next = vec![0u128; size];
        for (prev, &c) in counts[l - 1].iter().enumerate() {
            if c == 0 {
                continue;
            }
            for s in 1..size {
                next[table[prev][s]] += c;
            }
        }
        counts.push(next);
    }
    Ok(counts)
}

fn bounds_suite(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<PropertyOutcome>> {
    let mut oracle = Check::new("bounds", "phi_oracle_grid", 1e-9);
    let mut recur = Check::new("bounds", "recurrence_residual", 1e-9);
    for (q, beta, xi, m) in phi_grid() {
        let direct = phi_direct(q, beta, xi, m)?;
        let closed = phi_closed(q, beta, xi, m)?.value;
        oracle.record((closed - direct).abs() / direct.abs(), || {
            format!("Q={q} beta={beta} xi={xi} M={m}")
        });
        if m >= 2 {
            let res = recurrence_residual(q, beta, xi, m, |k| Ok(phi_closed(q, beta, xi, k)?.value))?;
            recur.record(res, || format!("Q={q} beta={beta} xi={xi} M={m}"));
        }
    }

    let mut summand = Check::new("bounds", "summand_identity", 1e-10);
    for _ in 0..opts.samples {
        let m = rng.gen_range(3..=18i64);
        let u = rng.gen_range(1..m);
        let eta = rng.gen_range(1..m);
        let r = rng.gen_range(1..=eta.min(u));
        let (beta, xi) = (rng.gen_range(0.01..1.0), rng.gen_range(0.01..0.99));
        let q = [1.0, 3.0, 7.0, 15.0][rng.gen_range(0..4)];
        let res = summand_identity_residual(q, beta, xi, m, u, eta, r);
        summand.record(res, || {
            format!("Q={q} beta={beta:.4} xi={xi:.4} M={m} u={u} eta={eta} r={r}")
        });
    }

    let mut vieta = Check::new("bounds", "root_identities", 1e-12);
    for _ in 0..opts.samples {
        let q = [1.0, 3.0, 7.0, 15.0][rng.gen_range(0..4)];
        let (beta, xi) = (rng.gen_range(0.001..2.0), rng.gen_range(0.0..0.999));
        let c = PhiCoefficients::new(q, beta, xi)?;
        let prod = (c.gamma_plus * c.gamma_minus - (1.0 + beta + q * beta) * xi).abs();
        let sum = (c.gamma_plus + c.gamma_minus - (1.0 + beta + (1.0 + q * beta) * xi)).abs();
        vieta.record(prod.max(sum), || format!("Q={q} beta={beta:.4} xi={xi:.4}"));
    }

    let mut counting = Check::new("bounds", "counting_matches_enumeration", 0.5);
    for labels in [&["ZZI", "IZZ"][..], &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"][..]] {
        let code = StabilizerCode::from_labels(labels)?;
        let counts = enumerate_counts(&code, 5)?;
        for (l, row) in counts.iter().enumerate() {
            for (g, &n) in row.iter().enumerate() {
                let closed = f_count(code.big_q(), l as u32, g == 0)?;
                counting.holds(closed == n, || {
                    format!("Q={} l={l} g={g} enumerated={n} closed={closed}", code.big_q())
                });
            }
        }
    }

    let mut gammas = Check::new("bounds", "gamma_closed_vs_binomial", 1e-12);
    for _ in 0..opts.samples {
        let q = [1u64, 3, 7, 15][rng.gen_range(0..4)];
        let (j0, j1) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        let l = rng.gen_range(0..8u32);
        for target in [true, false] {
            let a = gamma_l(q, j0, j1, l, target)?;
            let b = gamma_l_binomial(q, j0, j1, l, target)?;
            gammas.record((a - b).abs() / a.abs().max(1.0), || {
                format!("Q={q} J0={j0:.4} J1={j1:.4} l={l}")
            });
        }
    }

    let mut monotone = Check::new("bounds", "bound_nonincreasing_in_strength", 1e-12);
    let mut ordering = Check::new("bounds", "generators_bound_dominates_group", 1e-12);
    let mut strong = Check::new("bounds", "strong_limit_consistency", 0.0);
    for _ in 0..opts.samples {
        let q = [1u64, 3, 7, 15][rng.gen_range(0..4)];
        let (j0, j1) = (rng.gen_range(0.0..0.5), rng.gen_range(0.01..0.5));
        let tau = rng.gen_range(0.1..2.0);
        let m = rng.gen_range(1..200u64);
        let base = BoundParameters::new(q, Protocol::Group, j0, j1, tau, m, Strength::Infinite)?;
        let witness = || format!("Q={q} J0={j0:.4} J1={j1:.4} tau={tau:.4} M={m}");
        let mut prev = f64::INFINITY;
        for eps in [0.1, 0.3, 1.0, 3.0, 10.0] {
            let b = theorem1_bound(&base.with_strength(Strength::Finite(eps)))?.full_bound;
            monotone.record(((b - prev) / prev.max(1e-300)).max(0.0), witness);
            prev = b;
            let gen = theorem1_bound(
                &base
                    .with_strength(Strength::Finite(eps))
                    .with_protocol(Protocol::Generators),
            )?
            .full_bound;
            ordering.record(((b - gen) / b.max(1e-300)).max(0.0), witness);
        }
        let inf = theorem1_bound(&base)?.full_bound;
        strong.record((inf - strong_limit_bound(q, j0, j1, tau, m)?).abs(), witness);
    }

    Ok(vec![
        oracle.finish(),
        recur.finish(),
        summand.finish(),
        vieta.finish(),
        counting.finish(),
        gammas.finish(),
        monotone.finish(),
        ordering.finish(),
        strong.finish(),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_are_deterministic() {
        let opts = VerifyOptions {
            seed: 7,
            samples: 4,
            ..Default::default()
        };
        let a = run(Suite::All, &opts).unwrap();
        assert!(a.passed(), "{a}");
        let b = run(Suite::All, &opts).unwrap();
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn perturbed_zeta_is_caught() {
        let opts = VerifyOptions {
            seed: 3,
            samples: 3,
            zeta_perturbation: 1e-3,
        };
        let report = run(Suite::Measurement, &opts).unwrap();
        let failed: Vec<_> = report.failures().map(|o| o.property).collect();
        assert_eq!(failed, vec!["eigen_action_law"]);
    }
}
