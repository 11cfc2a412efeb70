//! The weak-term triple sum against its two-root closed form.

use zeno_bench::bounds::recurrence::{phi_closed, phi_direct, recurrence_residual};

fn main() -> zeno_bench::error::Result<()> {
    let (q, beta, xi) = (3.0, 0.4, 0.3);
    println!(
        "{:>3} {:>20} {:>20} {:>10} {:>10}",
        "M", "direct", "closed", "rel err", "residual"
    );
    for m in 1..=12u64 {
        let d = phi_direct(q, beta, xi, m)?;
        let c = phi_closed(q, beta, xi, m)?;
        let res = if m >= 2 {
            recurrence_residual(q, beta, xi, m, |k| phi_direct(q, beta, xi, k))?
        } else {
            0.0
        };
        println!(
            "{m:>3} {d:>20.14e} {:>20.14e} {:>10.1e} {res:>10.1e}",
            c.value,
            (c.value - d).abs() / d
        );
    }
    for m in [200, 1_000_000] {
        let big = phi_closed(q, beta, xi, m)?;
        println!("M = {m} via {:?}: {:.6e}", big.route, big.value);
    }
    Ok(())
}
