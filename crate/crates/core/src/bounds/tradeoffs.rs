//! Scaling regimes: how `τ` or `ε` may vary with `M` while the bound still
//! vanishes, and the fixed-interval setting where extra measurements only hurt.

use serde::Serialize;

use crate::bounds::counting::identity_growth;
use crate::bounds::theorem::b1_coefficient;
use crate::bounds::{validate_big_q, BoundParameters};
use crate::error::{Error, Result};
use crate::measurement::Strength;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Convergent,
    Divergent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Decreasing,
    NonDecreasing,
    Mixed,
}

impl Trend {
    pub fn of(values: &[f64]) -> Trend {
        if values.windows(2).all(|w| w[1] < w[0]) {
            Trend::Decreasing
        } else if values.windows(2).all(|w| w[1] >= w[0]) {
            Trend::NonDecreasing
        } else {
            Trend::Mixed
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeriesPoint {
    #[serde(rename = "M")]
    pub cycles: u64,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TradeoffSeries {
    pub verdict: Verdict,
    /// Critical value of the scanned parameter.
    pub threshold: f64,
    pub points: Vec<SeriesPoint>,
    pub trend: Trend,
}

/// Log-spaced grid `10^lo … 10^hi` with `per_decade` points per decade.
pub fn log_grid(lo: u32, hi: u32, per_decade: u32) -> Vec<u64> {
    let mut out: Vec<u64> = (0..=(hi - lo) * per_decade)
        .map(|i| 10f64.powf(lo as f64 + i as f64 / per_decade as f64).round() as u64)
        .collect();
    out.dedup();
    out
}

fn series(grid: &[u64], f: impl Fn(u64) -> Result<f64>) -> Result<(Vec<SeriesPoint>, Trend)> {
    if grid.is_empty() {
        return Err(Error::Domain("empty M grid".into()));
    }
    let points = grid
        .iter()
        .map(|&m| {
            Ok(SeriesPoint {
                cycles: m,
                value: f(m)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = points.iter().map(|p| p.value).collect();
    Ok((points, Trend::of(&values)))
}

/// Total time growing as `τ = a·ln(M)/J₀`; leading-order bound `B₁/M`.
///
/// Convergent iff `a < 1` when `J₀ ≥ J₁`, else iff `a < J₀/J₁`.
pub fn tradeoff_tau(p: &BoundParameters, a: f64, grid: &[u64]) -> Result<TradeoffSeries> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Domain(format!("rate exponent a must be positive, got {a}")));
    }
    if p.j0 <= 0.0 {
        return Err(Error::Domain(
            "the time scaling is expressed in units of 1/J0, which needs J0 > 0".into(),
        ));
    }
    let threshold = if p.j0 >= p.j1 { 1.0 } else { p.j0 / p.j1 };
    let (points, trend) = series(grid, |m| {
        let tau = a * (m as f64).ln() / p.j0;
        Ok(b1_coefficient(&p.with_tau(tau).with_cycles(m))? / m as f64)
    })?;
    Ok(TradeoffSeries {
        verdict: if a < threshold {
            Verdict::Convergent
        } else {
            Verdict::Divergent
        },
        threshold,
        points,
        trend,
    })
}

/// Strength scaling as `ε = M^p`; leading-order bound `B₁/M`. Convergent iff `p > −1/2`.
pub fn tradeoff_eps(p: &BoundParameters, exponent: f64, grid: &[u64]) -> Result<TradeoffSeries> {
    if !exponent.is_finite() {
        return Err(Error::Domain(format!("exponent must be finite, got {exponent}")));
    }
    let (points, trend) = series(grid, |m| {
        let eps = Strength::new((m as f64).powf(exponent))?;
        Ok(b1_coefficient(&p.with_strength(eps).with_cycles(m))? / m as f64)
    })?;
    Ok(TradeoffSeries {
        verdict: if exponent > -0.5 {
            Verdict::Convergent
        } else {
            Verdict::Divergent
        },
        threshold: -0.5,
        points,
        trend,
    })
}

/// Projective bound with fixed spacing `Δτ` between measurements, `τ = MΔτ`:
/// `f(M) = e^{J₀MΔτ}[((e^{QJ₁Δτ} + Qe^{−J₁Δτ})/(Q+1))^M − 1]`.
pub fn fixed_interval_bound(big_q: u64, j0: f64, j1: f64, delta_tau: f64, cycles: u64) -> Result<f64> {
    validate_big_q(big_q)?;
    if !(delta_tau.is_finite() && delta_tau > 0.0) {
        return Err(Error::Domain(format!("interval must be positive, got {delta_tau}")));
    }
    if cycles < 1 {
        return Err(Error::Domain("cycle count M must be at least 1".into()));
    }
    let m = cycles as f64;
    let growth = identity_growth(big_q as f64, j1 * delta_tau);
    Ok((j0 * m * delta_tau).exp() * (m * growth.ln_1p()).exp_m1())
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedIntervalReport {
    #[serde(rename = "Q")]
    pub big_q: u64,
    #[serde(rename = "J0")]
    pub j0: f64,
    #[serde(rename = "J1")]
    pub j1: f64,
    pub delta_tau: f64,
    /// `f(1), …, f(M_max)`.
    pub values: Vec<f64>,
    pub minimizer: u64,
    pub strictly_increasing: bool,
    /// `(Q/2)(J₁Δτ)²(1 + J₀Δτ)`.
    pub leading_expansion: f64,
    /// Leading expansion plus the `Q(Q−1)(J₁Δτ)³/6` term it omits.
    pub third_order_expansion: f64,
    /// `J₁Δτ < 1`.
    pub protected: bool,
}

pub fn fixed_interval_report(
    big_q: u64,
    j0: f64,
    j1: f64,
    delta_tau: f64,
    max_cycles: u64,
) -> Result<FixedIntervalReport> {
    let values = (1..=max_cycles)
        .map(|m| fixed_interval_bound(big_q, j0, j1, delta_tau, m))
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(Error::Domain("cycle count M must be at least 1".into()));
    }
    let minimizer = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i as u64 + 1)
        .unwrap_or(1);
    let q = big_q as f64;
    let (x, d) = (j1 * delta_tau, j0 * delta_tau);
    let leading = q / 2.0 * x * x * (1.0 + d);
    Ok(FixedIntervalReport {
        big_q,
        j0,
        j1,
        delta_tau,
        strictly_increasing: values.windows(2).all(|w| w[1] > w[0]),
        values,
        minimizer,
        leading_expansion: leading,
        third_order_expansion: leading + q * (q - 1.0) * x.powi(3) / 6.0,
        protected: x < 1.0,
    })
}
