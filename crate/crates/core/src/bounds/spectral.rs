//! Moment bounds for bath correlation spectra.

use crate::error::{Error, Result};

/// `|∫ ωⁿ S_{αβ}(ω) dω| ≤ (2‖B₀‖)ⁿ ‖B_α‖ ‖B_β‖` for a finite-dimensional bath.
pub fn bath_moment_bound(n: u32, norm_b0: f64, norm_b_alpha: f64, norm_b_beta: f64) -> Result<f64> {
    for (name, v) in [("‖B0‖", norm_b0), ("‖Bα‖", norm_b_alpha), ("‖Bβ‖", norm_b_beta)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Domain(format!("{name} must be finite and nonnegative, got {v}")));
        }
    }
    Ok((2.0 * norm_b0).powi(n as i32) * norm_b_alpha * norm_b_beta)
}

/// Model spectral densities used to illustrate when moment bounds apply.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectralDensity {
    /// `S(ω) ∝ γ / ((ω − ω₀)² + γ²)`: heavy tails.
    Lorentzian { center: f64, width: f64 },
    /// Support inside `[−cutoff, cutoff]`, as for any bounded bath Hamiltonian.
    BandLimited { cutoff: f64 },
}

impl SpectralDensity {
    /// True when `∫ |ω|ⁿ S(ω) dω` diverges.
    pub fn moment_diverges(&self, n: u32) -> bool {
        match self {
            SpectralDensity::Lorentzian { .. } => n >= 1,
            SpectralDensity::BandLimited { .. } => false,
        }
    }
}
