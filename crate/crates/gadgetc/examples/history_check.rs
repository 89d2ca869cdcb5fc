//! Build a history-state Hamiltonian for a small circuit and certify it:
//! the annihilation residual, the ground-space overlap, the spectral gap,
//! and the effect of the clock-init penalty.
//!
//! Run: cargo run --example history_check

use std::str::FromStr;

use gadgetc::circuit::{BitString, Circuit, Gate};
use gadgetc::history::{self, HistoryProblem};
use gadgetc::spectral::{eigensolve, ground_space_overlap};

fn main() {
    // a 2-qubit, 3-gate circuit: entangle, rotate, flip
    let circuit = Circuit::new(
        2,
        vec![
            Gate::cnot(1, 2).unwrap(),
            Gate::r(0.7, 2, 1).unwrap(),
            Gate::x(2),
        ],
    )
    .unwrap();
    let input = BitString::from_str("10").unwrap();
    let problem = HistoryProblem::new(circuit, input).unwrap();

    eprintln!(
        "history register: {} logical + {} clock qubits, dimension {}",
        problem.n(),
        problem.t(),
        1usize << problem.total_qubits()
    );

    let h = problem.hamiltonian(false).unwrap();
    let psi = problem.history_state().unwrap();
    let residual = h.apply(&psi).unwrap().norm();
    let dense = h.to_dense().unwrap();
    let overlap = ground_space_overlap(&dense, &psi);
    let report = eigensolve(&h, 4).unwrap();

    println!("term_count {}", h.terms().len());
    println!("residual {:.3e}", residual);
    println!("ground_overlap {:.12}", overlap);
    println!("gap {:.6}", report.gap);
    println!(
        "lowest_eigenvalues {:?}",
        report
            .eigenvalues
            .iter()
            .map(|e| (e * 1e9).round() / 1e9)
            .collect::<Vec<_>>()
    );

    // the clock-init penalty cannot be annihilated by the history state:
    // its expectation is T/(T+1)
    let h_init = problem.hamiltonian(true).unwrap();
    let energy = psi.dot(&h_init.apply(&psi).unwrap());
    println!("clockinit_expectation {:.6}", energy);
    println!(
        "clockinit_expectation_formula {:.6}",
        problem.t() as f64 / (problem.t() as f64 + 1.0)
    );

    // clock penalty spectrum: the zero eigenspace is spanned by the T+1
    // legal unary words
    let clock = history::h_clock(problem.t());
    let clock_report = eigensolve(&clock, problem.t() + 2).unwrap();
    let zeros = clock_report
        .eigenvalues
        .iter()
        .filter(|e| e.abs() < 1e-9)
        .count();
    println!("clock_ground_degeneracy {zeros}");
}
