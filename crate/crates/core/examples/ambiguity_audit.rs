// Count transformed lines that share a slope and compare with the bounds.
//
// cargo run --release --example ambiguity_audit -- 40009

use std::error::Error;

use chshq::audit::{audit_with_census, k_census, Band};
use chshq::construction::derive_params;
use chshq::fraction::to_f64;
use chshq::PrimeModulus;

pub fn run(p: u64) -> Result<(), Box<dyn Error>> {
    let params = derive_params(PrimeModulus::new(p)?)?;
    let census = k_census(&params);
    for band in [Band::Small, Band::Middle, Band::Large] {
        let records: Vec<_> = census.iter().filter(|r| r.band == band).collect();
        let repeated: usize = records.iter().filter(|r| r.solutions.len() > 1).map(|r| r.solutions.len()).sum();
        println!("{:<6} {:>6} values of k, {:>5} repeated solutions", band.as_str(), records.len(), repeated);
    }
    let report = audit_with_census(&params, &census);
    println!(
        "R_emp = {} (bound {:.1}{}), lines kept {} (floor {:.1}), censuses agree: {}",
        report.r_emp,
        to_f64(&report.r_final_bound),
        if report.r_final_valid { "" } else { ", advisory" },
        report.lines_kept,
        to_f64(&report.kept_floor),
        report.census_agrees
    );
    assert_eq!(report.middle_band_violations, 0);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let p = std::env::args().nth(1).map_or(Ok(1499), |s| s.parse())?;
    run(p)
}
