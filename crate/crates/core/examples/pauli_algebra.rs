//! Multiplying and comparing Pauli strings in symplectic form.

use zeno_bench::pauli::{PauliOperator, Phase};

fn main() -> zeno_bench::error::Result<()> {
    let xx: PauliOperator = "XX".parse()?;
    let zz: PauliOperator = "ZZ".parse()?;
    let xz: PauliOperator = "XZ".parse()?;

    let product = xx.multiply(&zz)?;
    println!("XX * ZZ = {product}  (hermitian: {})", product.is_hermitian());
    println!("XX, ZZ commute: {}", xx.commutes(&zz)?);
    println!("XX, XZ commute: {}", xx.commutes(&xz)?);

    let iy = PauliOperator::from_label("Y", Phase::I)?;
    println!("i*Y = {iy}, weight {}, matrix\n{}", iy.weight(), iy.to_matrix()?);

    // Matrix products agree with the symplectic rule.
    let dense = xx.to_matrix()? * zz.to_matrix()?;
    let err = zeno_bench::linalg::max_abs(&(dense - product.to_matrix()?));
    println!("dense check: max |difference| = {err:.1e}");
    Ok(())
}
