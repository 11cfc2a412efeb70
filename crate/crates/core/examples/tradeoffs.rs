//! Letting the total time or the measurement strength scale with M.

use zeno_bench::bounds::tradeoffs::{fixed_interval_report, log_grid};
use zeno_bench::bounds::{tradeoff_eps, tradeoff_tau, BoundParameters};
use zeno_bench::measurement::{Protocol, Strength};

fn main() -> zeno_bench::error::Result<()> {
    let p = BoundParameters::new(3, Protocol::Group, 0.1, 0.2, 1.0, 1, Strength::new(1.0)?)?;
    let grid = log_grid(2, 6, 1);

    for a in [0.3, 0.7] {
        let s = tradeoff_tau(&p, a, &grid)?;
        println!(
            "tau = {a}*ln(M)/J0: {:?} (threshold {}), trend {:?}",
            s.verdict, s.threshold, s.trend
        );
    }
    for e in [-0.4, -0.6] {
        let s = tradeoff_eps(&p, e, &grid)?;
        let last = s.points.last().map(|pt| pt.value).unwrap_or(f64::NAN);
        println!(
            "eps = M^{e}: {:?}, trend {:?}, B1/M at M=1e6 = {last:.3e}",
            s.verdict, s.trend
        );
    }

    let f = fixed_interval_report(3, 0.1, 0.2, 0.5, 8)?;
    println!(
        "fixed spacing 0.5: f(M) = {:?}",
        f.values.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
    );
    println!("minimised at M = {}, protected: {}", f.minimizer, f.protected);
    Ok(())
}
