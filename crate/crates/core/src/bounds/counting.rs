//! Counting functions for products of non-identity stabilizer elements.
//!
//! `f_l(g)` is the number of ordered `l`-tuples of non-identity group elements
//! whose product is `g`. It depends only on whether `g` is the identity.

use crate::bounds::{binomial, validate_big_q, BoundParameters};
use crate::error::{Error, Result};

/// `f_l(𝟙) = (Q^l + Q(−1)^l)/(Q+1)` or `f_l(g≠𝟙) = (Q^l − (−1)^l)/(Q+1)`, exactly.
pub fn f_count(big_q: u64, l: u32, identity_target: bool) -> Result<u128> {
    validate_big_q(big_q)?;
    let q = big_q as i128;
    let power = q
        .checked_pow(l)
        .ok_or_else(|| Error::Domain(format!("Q^l overflows for Q={big_q}, l={l}")))?;
    let sign: i128 = if l.is_multiple_of(2) { 1 } else { -1 };
    let numerator = if identity_target {
        power + q * sign
    } else {
        power - sign
    };
    Ok((numerator / (q + 1)) as u128)
}

/// `γ_l` in closed form: `((J₀+QJ₁)^l ± ...)/(Q+1)`.
pub fn gamma_l(big_q: u64, j0: f64, j1: f64, l: u32, identity_target: bool) -> Result<f64> {
    validate_big_q(big_q)?;
    let q = big_q as f64;
    let hi = (j0 + q * j1).powi(l as i32);
    let lo = (j0 - j1).powi(l as i32);
    Ok(if identity_target {
        (hi + q * lo) / (q + 1.0)
    } else {
        (hi - lo) / (q + 1.0)
    })
}

/// `γ_l = Σ_s C(l,s) J₀^s J₁^{l−s} f_{l−s}`, summed term by term.
pub fn gamma_l_binomial(big_q: u64, j0: f64, j1: f64, l: u32, identity_target: bool) -> Result<f64> {
    let mut acc = 0.0;
    for s in 0..=l {
        let f = f_count(big_q, l - s, identity_target)? as f64;
        acc += binomial(l as i64, s as i64) * j0.powi(s as i32) * j1.powi((l - s) as i32) * f;
    }
    Ok(acc)
}

/// `Γ_𝟙(τ/M)` or `Γ_g(τ/M)`, evaluated with `expm1`/`ln_1p` so small arguments keep full precision.
pub fn big_gamma(p: &BoundParameters, identity_target: bool) -> f64 {
    let q = p.big_q as f64;
    let step = p.tau / p.cycles as f64;
    let (a0, a1) = (step * p.j0, step * p.j1);
    if identity_target {
        (a0 + identity_growth(q, a1).ln_1p()).exp_m1()
    } else {
        a0.exp() * ((q * a1).exp_m1() - (-a1).exp_m1()) / (q + 1.0)
    }
}

/// `(e^{Qa} + Q e^{−a})/(Q+1) − 1`.
pub(crate) fn identity_growth(q: f64, a: f64) -> f64 {
    ((q * a).exp_m1() + q * (-a).exp_m1()) / (q + 1.0)
}
