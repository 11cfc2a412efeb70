//! Syndrome projectors and the isotypical split of an operator for the
//! three-qubit repetition code.

use zeno_bench::linalg;
use zeno_bench::stabilizer::StabilizerCode;

fn main() -> zeno_bench::error::Result<()> {
    let code = StabilizerCode::from_labels(&["ZZI", "IZZ"])?;
    println!(
        "n = {}, k = {}, group order Q+1 = {}",
        code.num_qubits(),
        code.logical_qubits(),
        code.group_size()
    );
    for (label, s) in code.elements().iter().enumerate() {
        let rank = linalg::trace(&code.syndrome_projector(label, 1)?).re;
        println!("  label {label:02b}: element {s}, projector rank {rank:.0}");
    }

    let dims = code.verify_isotypical_dimensions(2)?;
    println!(
        "isotypical state dims {:?} (closed forms match: {})",
        dims.state_dims,
        dims.matches_closed_forms()
    );

    // X on the first qubit anticommutes with ZZI only, so it lives in one component.
    let x1 = "XII".parse::<zeno_bench::pauli::PauliOperator>()?;
    let comps = code.isotypical_components(&x1.to_matrix()?, 1)?;
    for (g, c) in comps.iter().enumerate() {
        println!("  component {g:02b}: norm {:.3}", linalg::max_abs(c));
    }
    println!("syndrome of XII = {:02b}", code.syndrome_of(&x1)?);
    Ok(())
}
