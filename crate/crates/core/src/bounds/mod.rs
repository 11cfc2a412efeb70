//! Closed-form error bounds for the weak-measurement Zeno protocols.
//!
//! The bound depends on the stabilizer group only through `Q = |𝐒| − 1` and on
//! the protocol through `ξ = ζ^{q_eff}`, with `q_eff = (Q+1)/2` when every
//! group element is measured and `q_eff = 1` when only generators are.

pub mod counting;
pub mod recurrence;
pub mod spectral;
pub mod theorem;
pub mod tradeoffs;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measurement::{Protocol, Strength};

pub use counting::{big_gamma, f_count, gamma_l, gamma_l_binomial};
pub use recurrence::{phi_closed, phi_direct, PhiEvaluation, PhiRoute};
pub use spectral::{bath_moment_bound, SpectralDensity};
pub use theorem::{b1_coefficient, strong_limit_bound, theorem1_bound, BoundReport, Branch};
pub use tradeoffs::{fixed_interval_bound, fixed_interval_report, tradeoff_eps, tradeoff_tau};

/// Checks `Q = 2^Q̄ − 1` with `Q̄ ≥ 1`.
pub fn validate_big_q(big_q: u64) -> Result<()> {
    if big_q == 0 || !(big_q + 1).is_power_of_two() {
        return Err(Error::Domain(format!("Q must be 2^k - 1 with k >= 1, got {big_q}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundParameters {
    #[serde(rename = "Q")]
    pub big_q: u64,
    pub protocol: Protocol,
    #[serde(rename = "J0")]
    pub j0: f64,
    #[serde(rename = "J1")]
    pub j1: f64,
    pub tau: f64,
    #[serde(rename = "M")]
    pub cycles: u64,
    pub epsilon: Strength,
}

impl BoundParameters {
    pub fn new(
        big_q: u64,
        protocol: Protocol,
        j0: f64,
        j1: f64,
        tau: f64,
        cycles: u64,
        epsilon: Strength,
    ) -> Result<Self> {
        validate_big_q(big_q)?;
        for (name, v) in [("J0", j0), ("J1", j1), ("tau", tau)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain(format!("{name} must be finite and nonnegative, got {v}")));
            }
        }
        if cycles < 1 {
            return Err(Error::Domain("cycle count M must be at least 1".into()));
        }
        Ok(BoundParameters {
            big_q,
            protocol,
            j0,
            j1,
            tau,
            cycles,
            epsilon,
        })
    }

    pub fn with_cycles(mut self, cycles: u64) -> Self {
        self.cycles = cycles;
        self
    }

    pub fn with_strength(mut self, epsilon: Strength) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_protocol(mut self, protocol: Protocol) -> Self {
        self.protocol = protocol;
        self
    }

    pub fn q_effective(&self) -> f64 {
        match self.protocol {
            Protocol::Group => (self.big_q + 1) as f64 / 2.0,
            Protocol::Generators => 1.0,
        }
    }

    pub fn zeta(&self) -> f64 {
        self.epsilon.zeta()
    }

    /// `ξ = ζ^{q_eff}`.
    pub fn xi(&self) -> f64 {
        self.epsilon.zeta_pow(self.q_effective())
    }

    /// `1 − ξ` without cancellation.
    pub fn one_minus_xi(&self) -> f64 {
        self.epsilon.one_minus_zeta_pow(self.q_effective())
    }

    pub fn jm(&self) -> f64 {
        self.j0.max(self.j1)
    }
}

/// `C(n, k)` as a float; zero outside `0 ≤ k ≤ n`.
pub(crate) fn binomial(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0_f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_validation() {
        for q in [1, 3, 7, 15, 1023] {
            validate_big_q(q).unwrap();
        }
        for q in [0, 2, 4, 6] {
            assert!(validate_big_q(q).is_err());
        }
    }

    #[test]
    fn xi_per_protocol() {
        let p = BoundParameters::new(3, Protocol::Group, 0.1, 0.2, 1.0, 4, Strength::Finite(1.0)).unwrap();
        let zeta = 1.0 / 1f64.cosh();
        assert!((p.xi() - zeta * zeta).abs() < 1e-15);
        assert!((p.one_minus_xi() - (1.0 - zeta * zeta)).abs() < 1e-15);
        let g = p.with_protocol(Protocol::Generators);
        assert!((g.xi() - zeta).abs() < 1e-15);
        assert!(BoundParameters::new(3, Protocol::Group, -0.1, 0.2, 1.0, 4, Strength::Infinite).is_err());
        assert!(BoundParameters::new(3, Protocol::Group, 0.1, 0.2, 1.0, 0, Strength::Infinite).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(30, 15), 155117520.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(binomial(3, -1), 0.0);
        assert_eq!(binomial(0, 0), 1.0);
    }
}
