//! Bath moment bounds and when they exist.

use zeno_bench::bounds::{bath_moment_bound, SpectralDensity};

fn main() -> zeno_bench::error::Result<()> {
    for n in 1..=6 {
        println!("n = {n}: moment bound {:.4}", bath_moment_bound(n, 1.0, 0.2, 0.1)?);
    }
    let lorentz = SpectralDensity::Lorentzian {
        center: 0.0,
        width: 0.1,
    };
    let band = SpectralDensity::BandLimited { cutoff: 2.0 };
    for n in [1, 2] {
        println!(
            "moment {n}: Lorentzian diverges {}, band-limited diverges {}",
            lorentz.moment_diverges(n),
            band.moment_diverges(n)
        );
    }
    Ok(())
}
