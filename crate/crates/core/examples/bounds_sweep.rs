// Measured winning probability of the explicit strategy against the quantum
// upper bound, the `p^{-2/3}/22` guarantee and the trivial value.
//
// cargo run --release --example bounds_sweep

use std::error::Error;

use chshq::construction::build_strategy;
use chshq::game::{classical_guarantee, quantum_upper_bound};
use chshq::PrimeModulus;

pub fn run(primes: &[u64]) -> Result<(), Box<dyn Error>> {
    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>12}",
        "p", "explicit", "guarantee", "trivial", "quantum ub"
    );
    for &p in primes {
        let (_, report) = build_strategy(PrimeModulus::new(p)?)?;
        let pairs = (p * p) as f64;
        let g = classical_guarantee(p);
        println!(
            "{:>8} {:>12.3e} {:>12.3e}{} {:>12.3e} {:>12.3e}",
            p,
            report.win_count as f64 / pairs,
            g.probability,
            if g.p1_gt_30 { " " } else { "*" },
            (2 * p - 1) as f64 / pairs,
            quantum_upper_bound(p)
        );
    }
    println!("* guarantee is advisory for p1 <= 30");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run(&[101, 1009, 1499, 10007, 32771, 40009])
}
