// Build the explicit strategy for a prime, evaluate it over every input pair
// and print the construction report.
//
// cargo run --release --example explicit_strategy -- 40009

use std::error::Error;

use chshq::construction::build_strategy;
use chshq::PrimeModulus;

pub fn run(p: u64) -> Result<(), Box<dyn Error>> {
    let p = PrimeModulus::new(p)?;
    let (strategy, report) = build_strategy(p)?;
    println!("p = {p}, p1 = {}, p2 = {}", report.params.p1, report.params.p2);
    println!(
        "grid: {} incidences; kept {} of {} lines after removing shared slopes",
        report.pre_incidences, report.lines_kept, report.lines_total
    );
    println!(
        "wins {} of {} input pairs ({} from incidences, floor p^(4/3)/22 = {}{})",
        report.win_count,
        p.get() * p.get(),
        report.post_incidence_count,
        report.guarantee_floor,
        if report.params.p1_gt_30 { "" } else { ", advisory below p1 = 32" },
    );
    let sample: Vec<_> = strategy.alice_table().iter().take(8).map(|e| e.value()).collect();
    println!("alice[0..8] = {sample:?}");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let p = std::env::args().nth(1).map_or(Ok(1499), |s| s.parse())?;
    run(p)
}
