//! Weak syndrome measurement damps coherences between syndrome sectors by `ζ = sech ε`.

use zeno_bench::dynamics::maximally_mixed;
use zeno_bench::linalg::{self, CMatrix};
use zeno_bench::measurement::{weak_measure_generators, weak_measure_group, Strength};
use zeno_bench::stabilizer::StabilizerCode;

fn main() -> zeno_bench::error::Result<()> {
    let code = StabilizerCode::from_labels(&["ZZ"])?;
    let plus = CMatrix::from_element(4, 4, linalg::ONE) / num_complex::Complex64::from(4.0);
    let p_even = code.syndrome_projector(0, 1)?;
    let p_odd = code.syndrome_projector(1, 1)?;
    let coherence = |rho: &CMatrix| linalg::max_abs(&(&p_even * rho * &p_odd));

    println!("{:>6} {:>10} {:>12} {:>12}", "eps", "zeta", "group", "generators");
    for eps in [0.1, 0.5, 1.0, 2.0, f64::INFINITY] {
        let s = Strength::new(eps)?;
        let g = weak_measure_group(&code, 1, s)?.apply(&plus)?;
        let n = weak_measure_generators(&code, 1, s)?.apply(&plus)?;
        println!(
            "{:>6} {:>10.6} {:>12.6} {:>12.6}",
            s.to_string(),
            s.zeta(),
            coherence(&g) / coherence(&plus),
            coherence(&n) / coherence(&plus)
        );
    }

    let five = StabilizerCode::from_labels(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"])?;
    let ch = weak_measure_group(&five, 1, Strength::new(0.7)?)?;
    let out = ch.apply(&maximally_mixed(32))?;
    println!(
        "five-qubit code, group channel: completeness error {:.1e}, trace {:.15}",
        ch.completeness_error(),
        linalg::trace(&out).re
    );
    Ok(())
}
