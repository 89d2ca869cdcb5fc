//! Compile a small real 2-local Hamiltonian into both restricted models
//! and check the compiled spectra against the target.
//!
//! Run: cargo run --example compile_target

use gadgetc::gadget::compile;
use gadgetc::pauli::{InteractionSet, Letter, OperatorSum, PauliString, SetName};
use gadgetc::spectral::eigensolve;

fn main() {
    // Z_1 X_2 + 0.5 X_1: native to ZX, needs one gadget under ZZXX
    let target = OperatorSum::new(
        2,
        vec![
            PauliString::place(2, &[(1, Letter::Z), (2, Letter::X)], 1.0).unwrap(),
            PauliString::single(2, 1, Letter::X, 0.5).unwrap(),
        ],
    )
    .unwrap();
    let lambda_target = eigensolve(&target, 1).unwrap().eigenvalues[0];
    println!("target_lambda0 {:.9}", lambda_target);

    for (model, eps) in [(SetName::Zzxx, 0.05), (SetName::Zx, 0.05)] {
        println!("--- model {} ---", model.label());
        let compiled = compile(&target, model, eps, 1.0).unwrap();
        print!("{}", compiled.report());

        let violations = InteractionSet::named(model).validate(&compiled.hamiltonian);
        println!(
            "validation {}",
            if violations.is_empty() {
                "pass"
            } else {
                "FAIL"
            }
        );

        let lambda = eigensolve(&compiled.hamiltonian, 1).unwrap().eigenvalues[0];
        let corrected = lambda + compiled.total_declared_shift;
        println!("compiled_lambda0 {:.9}", lambda);
        println!("shift_corrected  {:.9}", corrected);
        println!("abs_error        {:.3e}", (corrected - lambda_target).abs());
        println!();
    }
}
