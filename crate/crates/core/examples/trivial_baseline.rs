// The constant-zero strategy wins exactly when `x = 0` or `y = 0`.
//
// cargo run --example trivial_baseline

use std::error::Error;

use chshq::game::{evaluate, trivial_strategy};
use chshq::PrimeModulus;

pub fn run(primes: &[u64]) -> Result<(), Box<dyn Error>> {
    println!("{:>8} {:>10} {:>10} {:>12}", "q", "wins", "2q - 1", "probability");
    for &q in primes {
        let report = evaluate(&trivial_strategy(PrimeModulus::new(q)?));
        assert_eq!(report.win_count, 2 * q - 1);
        println!(
            "{:>8} {:>10} {:>10} {:>12.6}",
            q,
            report.win_count,
            2 * q - 1,
            report.probability_f64()
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run(&[2, 3, 5, 7, 101, 1499, 40009])
}
