//! Anatomy of the bound: strong and weak parts, branch choice and the large-M tail.

use zeno_bench::bounds::{theorem1_bound, BoundParameters};
use zeno_bench::measurement::{Protocol, Strength};

fn main() -> zeno_bench::error::Result<()> {
    let base = BoundParameters::new(3, Protocol::Group, 0.1, 0.2, 1.0, 10, Strength::new(1.0)?)?;
    let r = theorem1_bound(&base)?;
    println!("{}", serde_json::to_string_pretty(&r).expect("serialisable"));

    println!("\n{:>8} {:>14} {:>14} {:>14}", "M", "B", "M*B", "B1");
    for m in [10, 100, 1_000, 10_000, 100_000] {
        let r = theorem1_bound(&base.with_cycles(m))?;
        println!(
            "{m:>8} {:>14.6e} {:>14.6e} {:>14.6e}",
            r.full_bound,
            m as f64 * r.full_bound,
            r.b1.unwrap_or(f64::NAN)
        );
    }

    for protocol in [Protocol::Group, Protocol::Generators] {
        let r = theorem1_bound(&base.with_protocol(protocol))?;
        println!(
            "{:>10}: effective Q {:.3}, B = {:.6e}",
            protocol.name(),
            r.q_effective,
            r.full_bound
        );
    }
    Ok(())
}
