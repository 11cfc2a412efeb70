//! Repeated weak measurement protecting an encoded qubit from a bit-flip
//! coupling, compared against the analytic bound.

use num_complex::Complex64;
use zeno_bench::bounds::{theorem1_bound, BoundParameters};
use zeno_bench::dynamics::{encode_pure, maximally_mixed, run_protocol, DensityMatrix};
use zeno_bench::linalg::{CMatrix, CVector};
use zeno_bench::measurement::{Protocol, Strength};
use zeno_bench::stabilizer::{HamiltonianSpec, HamiltonianTerm, StabilizerCode};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn main() -> zeno_bench::error::Result<()> {
    let code = StabilizerCode::from_labels(&["ZZI", "IZZ"])?;
    let sx = CMatrix::from_row_slice(2, 2, &[c(0.0), c(0.1), c(0.1), c(0.0)]);
    let sz = CMatrix::from_row_slice(2, 2, &[c(0.05), c(0.0), c(0.0), c(-0.05)]);
    let h = HamiltonianSpec::new(
        3,
        2,
        vec![
            HamiltonianTerm::new("XII".parse()?, sx),
            HamiltonianTerm::new("III".parse()?, sz),
        ],
    )?;
    let logical = CVector::from_vec(vec![c(0.6), c(0.8)]);
    let rho0 = DensityMatrix::product(&encode_pure(&code, &logical)?, &maximally_mixed(2))?;

    let tau = 1.0;
    println!("{:>4} {:>6} {:>12} {:>12}", "M", "eps", "D_sim", "bound");
    for eps in [1.0, f64::INFINITY] {
        let s = Strength::new(eps)?;
        for m in [1, 4, 16, 64] {
            let r = run_protocol(&code, &h, &rho0, tau, m, s, Protocol::Group)?;
            let p = BoundParameters::new(code.big_q(), Protocol::Group, r.j0, r.j1, tau, m, s)?;
            let b = theorem1_bound(&p)?;
            println!(
                "{m:>4} {:>6} {:>12.4e} {:>12.4e}",
                s.to_string(),
                r.distance,
                b.full_bound
            );
        }
    }
    Ok(())
}
