//! Interpolation gap sweep for a history instance: the initial operator
//! pins the clock to time zero via the clock-init penalty, the final one
//! replaces that penalty with the propagation term. The gap stays open
//! along the path, which is what makes the interpolation usable.
//!
//! Run: cargo run --example adiabatic_gap

use std::str::FromStr;

use gadgetc::circuit::{BitString, Circuit, Gate};
use gadgetc::history;
use gadgetc::spectral::{gap_sweep, uniform_grid};

fn main() {
    let circuit = Circuit::new(1, vec![Gate::x(1), Gate::x(1)]).unwrap();
    let x = BitString::from_str("0").unwrap();
    let (n, t) = (circuit.n(), circuit.t());

    let base = history::h_in(&x, n, t)
        .unwrap()
        .plus(&history::h_clock(t).embed(n, n + t).unwrap())
        .unwrap();
    let hi = base
        .plus(&history::h_clock_init(t).embed(n, n + t).unwrap())
        .unwrap()
        .canonicalize();
    let hf = base
        .plus(&history::h_prop(&circuit).unwrap())
        .unwrap()
        .canonicalize();

    eprintln!("sweeping (1-s) H_i + s H_f on {} qubits, 101 points", n + t);
    let sweep = gap_sweep(&hi, &hf, &uniform_grid(101)).unwrap();
    print!(
        "{}",
        sweep.to_csv(&[format!("history interpolation n={n} T={t}")])
    );
    println!("# min gap {:.9} at s={:.3}", sweep.min_gap, sweep.argmin_s);

    // single-qubit closed-form case for comparison: gap 2 sqrt(s^2+(1-s)^2)
    let hi1 = gadgetc::pauli::OperatorSum::parse("-1 X\n").unwrap();
    let hf1 = gadgetc::pauli::OperatorSum::parse("-1 Z\n").unwrap();
    let sweep1 = gap_sweep(&hi1, &hf1, &uniform_grid(101)).unwrap();
    println!(
        "# two-level oracle: min gap {:.9} at s={:.3} (exact sqrt(2) at 0.5)",
        sweep1.min_gap, sweep1.argmin_s
    );
}
