//! The full finite-`M` bound, its `1/M` coefficient and its projective limit.
//!
//! The bound is assembled as `B = S + W` with the strong term
//! `S = (1+Γ_𝟙)^M − e^{τJ₀}` and the weak term `W = Γ_g φ(M)`. Expanding `φ`
//! in its closed form recovers the five-term printed expression, see
//! [`full_bound_expanded`].

use serde::Serialize;

use crate::bounds::counting::{big_gamma, identity_growth};
use crate::bounds::recurrence::{phi_closed, PhiRoute};
use crate::bounds::{validate_big_q, BoundParameters};
use crate::error::{Error, Result};
use crate::measurement::{Protocol, Strength};

/// Smallest finite strength for which the `1/M` coefficient is evaluated.
pub const B1_MIN_STRENGTH: f64 = 1e-6;

/// Which of `J₀`, `J₁` dominates; selects `β` and `Γ±`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `J₀ ≥ J₁`: `β = Γ₊ = Γ_𝟙`, `Γ₋ = Γ_g`.
    #[serde(rename = "J0>=J1")]
    IdentityDominant,
    /// `J₀ < J₁`: `β = Γ₊ = Γ_g`, `Γ₋ = Γ_𝟙`.
    #[serde(rename = "J0<J1")]
    ErrorDominant,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    #[serde(rename = "Q")]
    pub big_q: u64,
    pub q_effective: f64,
    pub protocol: Protocol,
    #[serde(rename = "J0")]
    pub j0: f64,
    #[serde(rename = "J1")]
    pub j1: f64,
    #[serde(rename = "Jm")]
    pub jm: f64,
    pub tau: f64,
    #[serde(rename = "M")]
    pub cycles: u64,
    pub epsilon: Strength,
    pub zeta: f64,
    pub xi: f64,
    pub branch: Branch,
    pub big_gamma_identity: f64,
    pub big_gamma_g: f64,
    pub beta: f64,
    pub big_gamma_plus: f64,
    pub big_gamma_minus: f64,
    pub gamma_plus: Option<f64>,
    pub gamma_minus: Option<f64>,
    #[serde(rename = "A_plus")]
    pub a_plus: Option<f64>,
    #[serde(rename = "A_minus")]
    pub a_minus: Option<f64>,
    pub phi: f64,
    pub phi_route: Option<PhiRoute>,
    pub weak_term: f64,
    pub strong_term: f64,
    /// `B = S + W`.
    pub full_bound: f64,
    /// `½(S + W)`.
    pub half_sum_bound: f64,
    #[serde(rename = "B1")]
    pub b1: Option<f64>,
    /// `B₁/M`.
    pub asymptotic_bound: Option<f64>,
    pub strong_limit: f64,
}

/// `e^{J₀τ}[((Q e^{−J₁τ/M} + e^{QJ₁τ/M})/(Q+1))^M − 1]`.
pub fn strong_limit_bound(big_q: u64, j0: f64, j1: f64, tau: f64, cycles: u64) -> Result<f64> {
    validate_big_q(big_q)?;
    if cycles < 1 {
        return Err(Error::Domain("cycle count M must be at least 1".into()));
    }
    let m = cycles as f64;
    let growth = identity_growth(big_q as f64, tau * j1 / m);
    Ok((j0 * tau).exp() * (m * growth.ln_1p()).exp_m1())
}

/// `B₁ = e^{τJ₀} Qτ²J₁²/4 + e^{τJm}(QτJ₁/2)(1+τJm) ξ/(1−ξ)`.
pub fn b1_coefficient(p: &BoundParameters) -> Result<f64> {
    if let Strength::Finite(e) = p.epsilon {
        if e < B1_MIN_STRENGTH {
            return Err(Error::DegenerateMeasurement(format!(
                "first-order coefficient diverges as the strength vanishes (epsilon = {e:e})"
            )));
        }
    }
    let q = p.big_q as f64;
    let (t, j1, jm) = (p.tau, p.j1, p.jm());
    let strong = (t * p.j0).exp() * q * t * t * j1 * j1 / 4.0;
    let weak = (t * jm).exp() * (q * t * j1 / 2.0) * (1.0 + t * jm) * p.xi() / p.one_minus_xi();
    Ok(strong + weak)
}

pub fn theorem1_bound(p: &BoundParameters) -> Result<BoundReport> {
    let q = p.big_q as f64;
    let xi = p.xi();
    if xi.is_nan() || xi >= 1.0 {
        return Err(Error::DegenerateMeasurement(format!(
            "xi = {xi} leaves no measurement damping (epsilon = {})",
            p.epsilon
        )));
    }
    let g_id = big_gamma(p, true);
    let g_err = big_gamma(p, false);
    let branch = if p.j0 >= p.j1 {
        Branch::IdentityDominant
    } else {
        Branch::ErrorDominant
    };
    let (beta, g_plus, g_minus) = match branch {
        Branch::IdentityDominant => (g_id, g_id, g_err),
        Branch::ErrorDominant => (g_err, g_err, g_id),
    };

    let strong = strong_limit_bound(p.big_q, p.j0, p.j1, p.tau, p.cycles)?;
    let eval = phi_closed(q, beta, xi, p.cycles)?;
    let weak = if g_err == 0.0 || xi == 0.0 {
        0.0
    } else {
        g_err * eval.value
    };
    let full = strong + weak;
    let b1 = b1_coefficient(p).ok();
    let coeffs = eval.coefficients;
    Ok(BoundReport {
        big_q: p.big_q,
        q_effective: p.q_effective(),
        protocol: p.protocol,
        j0: p.j0,
        j1: p.j1,
        jm: p.jm(),
        tau: p.tau,
        cycles: p.cycles,
        epsilon: p.epsilon,
        zeta: p.zeta(),
        xi,
        branch,
        big_gamma_identity: g_id,
        big_gamma_g: g_err,
        beta,
        big_gamma_plus: g_plus,
        big_gamma_minus: g_minus,
        gamma_plus: coeffs.map(|c| c.gamma_plus),
        gamma_minus: coeffs.map(|c| c.gamma_minus),
        a_plus: coeffs.map(|c| c.a_plus),
        a_minus: coeffs.map(|c| c.a_minus),
        phi: eval.value,
        phi_route: Some(eval.route),
        weak_term: weak,
        strong_term: strong,
        full_bound: full,
        half_sum_bound: 0.5 * full,
        b1,
        asymptotic_bound: b1.map(|b| b / p.cycles as f64),
        strong_limit: strong,
    })
}

/// The five-term expression
/// `[1+Γ_𝟙]^M − (Γ₋/Γ_𝟙)[1+Γ₊]^M + Γ_g A₊γ₊^{M−1} + Γ_g A₋γ₋^{M−1} − e^{τJ₀}`,
/// evaluated literally. Loses precision at large `M`; kept as a cross-check.
pub fn full_bound_expanded(p: &BoundParameters) -> Result<f64> {
    let r = theorem1_bound(p)?;
    let (Some(gp), Some(gm), Some(ap), Some(am)) = (r.gamma_plus, r.gamma_minus, r.a_plus, r.a_minus) else {
        return Err(Error::Domain("closed-form coefficients unavailable (beta = 0)".into()));
    };
    let m = p.cycles as i32;
    Ok((1.0 + r.big_gamma_identity).powi(m)
        - r.big_gamma_minus / r.big_gamma_identity * (1.0 + r.big_gamma_plus).powi(m)
        + r.big_gamma_g * ap * gp.powi(m - 1)
        + r.big_gamma_g * am * gm.powi(m - 1)
        - (p.tau * p.j0).exp())
}

/// Richardson estimate of `lim M·B(M)` from `M` and `2M`, removing the `1/M` correction.
pub fn richardson_limit(p: &BoundParameters, cycles: u64) -> Result<f64> {
    let single = cycles as f64 * theorem1_bound(&p.with_cycles(cycles))?.full_bound;
    let double = 2.0 * cycles as f64 * theorem1_bound(&p.with_cycles(2 * cycles))?.full_bound;
    Ok(2.0 * double - single)
}
