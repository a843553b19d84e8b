// Exact optimal classical values for the smallest primes.
//
// cargo run --release --example optimal_value

use std::error::Error;

use chshq::oracle::{optimal_classical_value, DEFAULT_CAP};
use chshq::PrimeModulus;

pub fn run(primes: &[u64]) -> Result<(), Box<dyn Error>> {
    for &q in primes {
        let r = optimal_classical_value(PrimeModulus::new(q)?, DEFAULT_CAP)?;
        let alice: Vec<_> = r.witness.alice_table().iter().map(|e| e.value()).collect();
        let bob: Vec<_> = r.witness.bob_table().iter().map(|e| e.value()).collect();
        println!(
            "q = {q}: {} of {} (trivial {}), witness alice {alice:?} bob {bob:?}",
            r.max_wins,
            q * q,
            2 * q - 1
        );
    }
    if let Err(e) = optimal_classical_value(PrimeModulus::new(11)?, DEFAULT_CAP) {
        println!("q = 11: {e}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run(&[2, 3, 5, 7])
}
