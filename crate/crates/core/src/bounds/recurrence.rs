//! The weak-term sum `φ(M)`: direct triple sum, its second-order recurrence,
//! and the closed-form solution.
//!
//! `φ(M) = Σ_{η,u,r} β^{η−1} ξ^u Q^r C(η,r) C(u−1,r−1) C(M−u,η−r)` satisfies
//! `φ(M) = p·φ(M−1) − s·φ(M−2) + Qβξ(1+β)^{M−2}` with `p = 1+β+(1+Qβ)ξ`,
//! `s = (1+β+Qβ)ξ`, `φ(0) = 0` and `φ(1) = Qξ`.

use serde::Serialize;

use crate::bounds::binomial;
use crate::error::{Error, Result};

/// Largest `M` accepted by [`phi_direct`].
pub const PHI_DIRECT_LIMIT: u64 = 20;

/// Neumaier-compensated sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

fn check_inputs(beta: f64, xi: f64) -> Result<()> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Domain(format!(
            "beta must be finite and nonnegative, got {beta}"
        )));
    }
    if !(0.0..1.0).contains(&xi) {
        return Err(Error::DegenerateMeasurement(format!("xi must lie in [0, 1), got {xi}")));
    }
    Ok(())
}

/// One summand `Φ(M, u, η, r)`; zero where a binomial vanishes.
pub fn summand(big_q: f64, beta: f64, xi: f64, m: i64, u: i64, eta: i64, r: i64) -> f64 {
    if eta < 1 || u < 1 || r < 1 {
        return 0.0;
    }
    let b = binomial(eta, r) * binomial(u - 1, r - 1) * binomial(m - u, eta - r);
    if b == 0.0 {
        return 0.0;
    }
    beta.powi((eta - 1) as i32) * xi.powi(u as i32) * big_q.powi(r as i32) * b
}

/// Direct triple sum; the reference oracle.
pub fn phi_direct(big_q: f64, beta: f64, xi: f64, m: u64) -> Result<f64> {
    check_inputs(beta, xi)?;
    if m > PHI_DIRECT_LIMIT {
        return Err(Error::Capacity {
            what: "cycle count for the direct sum",
            size: m as usize,
            limit: PHI_DIRECT_LIMIT as usize,
        });
    }
    let m = m as i64;
    let mut acc = CompensatedSum::default();
    for eta in 1..=m {
        for u in 1..=m {
            for r in 1..=eta.min(u) {
                acc.add(summand(big_q, beta, xi, m, u, eta, r));
            }
        }
    }
    Ok(acc.total())
}

/// Relative residual of the eight-term identity satisfied by the summand.
pub fn summand_identity_residual(big_q: f64, beta: f64, xi: f64, m: i64, u: i64, eta: i64, r: i64) -> f64 {
    let f = |mm, uu, ee, rr| summand(big_q, beta, xi, mm, uu, ee, rr);
    let terms = [
        big_q * beta * xi * f(m - 2, u, eta, r),
        beta * xi * f(m - 2, u, eta, r + 1),
        xi * f(m - 2, u, eta + 1, r + 1),
        -big_q * beta * xi * f(m - 1, u, eta, r),
        -xi * f(m - 1, u, eta + 1, r + 1),
        -beta * f(m - 1, u + 1, eta, r + 1),
        -f(m - 1, u + 1, eta + 1, r + 1),
        f(m, u + 1, eta + 1, r + 1),
    ];
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    if scale == 0.0 {
        return 0.0;
    }
    terms.iter().sum::<f64>().abs() / scale
}

/// Relative residual of the inhomogeneous recurrence at `m ≥ 2`, using `phi`
/// for the three values involved (`φ(0) = 0` is not queried).
pub fn recurrence_residual(big_q: f64, beta: f64, xi: f64, m: u64, phi: impl Fn(u64) -> Result<f64>) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain("the recurrence starts at M = 2".into()));
    }
    let p = 1.0 + beta + (1.0 + big_q * beta) * xi;
    let s = (1.0 + beta + big_q * beta) * xi;
    let prev2 = if m == 2 { 0.0 } else { phi(m - 2)? };
    let terms = [
        phi(m)?,
        -p * phi(m - 1)?,
        s * prev2,
        -big_q * beta * (1.0 + beta).powi((m - 2) as i32) * xi,
    ];
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    Ok(if scale == 0.0 {
        0.0
    } else {
        terms.iter().sum::<f64>().abs() / scale
    })
}

/// Roots and amplitudes of the closed solution
/// `φ(M) = A₊γ₊^{M−1} + A₋γ₋^{M−1} − (1+β)^M/β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiCoefficients {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    #[serde(rename = "A_plus")]
    pub a_plus: f64,
    #[serde(rename = "A_minus")]
    pub a_minus: f64,
}

impl PhiCoefficients {
    /// Requires `β > 0`; the roots are then real and distinct for `ξ ∈ [0, 1)`.
    pub fn new(big_q: f64, beta: f64, xi: f64) -> Result<Self> {
        check_inputs(beta, xi)?;
        if beta == 0.0 {
            return Err(Error::Domain("closed form needs beta > 0".into()));
        }
        let sum = 1.0 + beta + (1.0 + big_q * beta) * xi;
        let product = (1.0 + beta + big_q * beta) * xi;
        let gap = 1.0 + beta - (1.0 + big_q * beta) * xi;
        let disc = (gap * gap + 4.0 * big_q * beta * beta * xi).sqrt();
        let gamma_plus = 0.5 * (sum + disc);
        // Vieta keeps the small root accurate.
        let gamma_minus = product / gamma_plus;
        let amp = |g_this: f64, g_other: f64| {
            (big_q * beta * xi * (g_this + beta) + (1.0 + beta) * ((1.0 + beta) - g_other))
                / (beta * (g_this - g_other))
        };
        Ok(PhiCoefficients {
            gamma_plus,
            gamma_minus,
            a_plus: amp(gamma_plus, gamma_minus),
            a_minus: amp(gamma_minus, gamma_plus),
        })
    }

    pub fn phi(&self, beta: f64, m: u64) -> f64 {
        // Factor out the dominant root so huge M overflows to +inf rather than NaN.
        let k = (m - 1) as f64;
        let g = self.gamma_plus;
        let bracket = self.a_plus + self.a_minus * (self.gamma_minus / g).powf(k)
            - (1.0 + beta) / beta * ((1.0 + beta) / g).powf(k);
        bracket * g.powf(k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiRoute {
    Closed,
    /// `β = 0`, small `M`: direct sum.
    DirectFallback,
    /// `β = 0`, large `M`: only `η = 1` survives, `φ = Qξ(1 − ξ^M)/(1 − ξ)`.
    Geometric,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiEvaluation {
    pub value: f64,
    pub route: PhiRoute,
    pub coefficients: Option<PhiCoefficients>,
}

impl PhiEvaluation {
    pub fn degenerate(&self) -> bool {
        self.route != PhiRoute::Closed
    }
}

/// `φ(M)` via the closed solution, falling back when `β = 0`.
pub fn phi_closed(big_q: f64, beta: f64, xi: f64, m: u64) -> Result<PhiEvaluation> {
    check_inputs(beta, xi)?;
    if m < 1 {
        return Err(Error::Domain("cycle count M must be at least 1".into()));
    }
    if beta > 0.0 {
        let c = PhiCoefficients::new(big_q, beta, xi)?;
        return Ok(PhiEvaluation {
            value: c.phi(beta, m),
            route: PhiRoute::Closed,
            coefficients: Some(c),
        });
    }
    if m <= PHI_DIRECT_LIMIT {
        return Ok(PhiEvaluation {
            value: phi_direct(big_q, beta, xi, m)?,
            route: PhiRoute::DirectFallback,
            coefficients: None,
        });
    }
    let tail = -(m as f64 * xi.ln()).exp_m1();
    Ok(PhiEvaluation {
        value: big_q * xi * tail / (1.0 - xi),
        route: PhiRoute::Geometric,
        coefficients: None,
    })
}

/// `y(n) = p·y(n−1) − s·y(n−2) + b·cⁿ`, solved as `y(n) = A r₁ⁿ + B r₂ⁿ + K cⁿ`.
/// Valid when the characteristic roots are distinct and differ from `c`.
#[derive(Clone, Copy, Debug)]
pub struct LinearRecurrence {
    pub p: f64,
    pub s: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct RecurrenceSolution {
    pub roots: (f64, f64),
    pub amplitudes: (f64, f64),
    pub particular: f64,
    pub c: f64,
}

impl LinearRecurrence {
    /// The recurrence obeyed by `φ`.
    pub fn for_phi(big_q: f64, beta: f64, xi: f64) -> Self {
        let c = 1.0 + beta;
        LinearRecurrence {
            p: 1.0 + beta + (1.0 + big_q * beta) * xi,
            s: (1.0 + beta + big_q * beta) * xi,
            b: big_q * beta * xi / (c * c),
            c,
        }
    }

    pub fn solve(&self, y0: f64, y1: f64) -> Result<RecurrenceSolution> {
        let disc = self.p * self.p - 4.0 * self.s;
        if disc <= 0.0 {
            return Err(Error::Numerical(
                "characteristic roots are not real and distinct".into(),
            ));
        }
        let root = disc.sqrt();
        let r1 = 0.5 * (self.p + root);
        let r2 = 0.5 * (self.p - root);
        let char_at_c = self.c * self.c - self.p * self.c + self.s;
        if char_at_c == 0.0 {
            return Err(Error::Numerical("inhomogeneity is resonant with a root".into()));
        }
        let k = self.b * self.c * self.c / char_at_c;
        // A + B = y0 − K and A r₁ + B r₂ = y1 − K c.
        let rhs0 = y0 - k;
        let rhs1 = y1 - k * self.c;
        let a = (rhs1 - r2 * rhs0) / (r1 - r2);
        let b = rhs0 - a;
        Ok(RecurrenceSolution {
            roots: (r1, r2),
            amplitudes: (a, b),
            particular: k,
            c: self.c,
        })
    }
}

impl RecurrenceSolution {
    pub fn eval(&self, n: u64) -> f64 {
        let n = n as i32;
        self.amplitudes.0 * self.roots.0.powi(n)
            + self.amplitudes.1 * self.roots.1.powi(n)
            + self.particular * self.c.powi(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_values() {
        let (q, b, x) = (3.0, 0.2, 0.4);
        assert!((phi_direct(q, b, x, 1).unwrap() - q * x).abs() < 1e-15);
        let two = q * x * (1.0 + 2.0 * b + (1.0 + q * b) * x);
        assert!((phi_direct(q, b, x, 2).unwrap() - two).abs() < 1e-14);
        assert_eq!(phi_direct(q, b, 0.0, 7).unwrap(), 0.0);
        assert!(phi_direct(q, b, x, 21).is_err());
    }

    #[test]
    fn closed_matches_direct() {
        let direct = phi_direct(3.0, 0.05, 0.25, 10).unwrap();
        let closed = phi_closed(3.0, 0.05, 0.25, 10).unwrap();
        assert_eq!(closed.route, PhiRoute::Closed);
        assert!((closed.value - direct).abs() <= 1e-10 * direct);
    }

    #[test]
    fn vieta_and_ordering() {
        let (q, b, x) = (7.0, 0.3, 0.6);
        let c = PhiCoefficients::new(q, b, x).unwrap();
        assert!((c.gamma_plus * c.gamma_minus - (1.0 + b + q * b) * x).abs() < 1e-12);
        assert!((c.gamma_plus + c.gamma_minus - (1.0 + b + (1.0 + q * b) * x)).abs() < 1e-12);
        assert!(c.gamma_plus > c.gamma_minus && c.gamma_minus > 0.0);
    }

    #[test]
    fn beta_zero_fallbacks_agree() {
        let (q, x) = (3.0, 0.3);
        let direct = phi_closed(q, 0.0, x, 12).unwrap();
        assert_eq!(direct.route, PhiRoute::DirectFallback);
        let geometric = q * x * (1.0 - x.powi(12)) / (1.0 - x);
        assert!((direct.value - geometric).abs() < 1e-14);
        assert_eq!(phi_closed(q, 0.0, x, 40).unwrap().route, PhiRoute::Geometric);
        // Small β approaches the β = 0 value.
        let near = phi_closed(q, 1e-7, x, 12).unwrap().value;
        assert!((near - geometric).abs() < 1e-5);
    }

    #[test]
    fn generic_solver_reproduces_phi() {
        let (q, b, x) = (3.0, 0.1, 0.5);
        let sol = LinearRecurrence::for_phi(q, b, x).solve(0.0, q * x).unwrap();
        assert!((sol.particular + 1.0 / b).abs() < 1e-12);
        for m in 1..=15 {
            let d = phi_direct(q, b, x, m).unwrap();
            assert!((sol.eval(m) - d).abs() <= 1e-10 * d, "M={m}");
        }
    }

    #[test]
    fn summand_identity_on_sample_points() {
        for (m, u, eta, r) in [(6, 2, 3, 1), (9, 4, 4, 2), (12, 5, 6, 3), (5, 1, 1, 1)] {
            assert!(summand_identity_residual(3.0, 0.2, 0.7, m, u, eta, r) < 1e-12);
        }
    }

    #[test]
    fn recurrence_residual_of_direct_sum() {
        for m in 2..=12 {
            let res = recurrence_residual(7.0, 0.1, 0.9, m, |k| phi_direct(7.0, 0.1, 0.9, k)).unwrap();
            assert!(res < 1e-13, "M={m}: {res}");
        }
    }
}
