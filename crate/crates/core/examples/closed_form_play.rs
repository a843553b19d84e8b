// Play rounds with the per-input rules, without building any table.
//
// cargo run --example closed_form_play -- 40009 20

use std::error::Error;

use rand::{Rng, SeedableRng};

use chshq::construction::{derive_params, ClosedFormRules};
use chshq::game::wins;
use chshq::PrimeModulus;

pub fn run(p: u64, rounds: u64) -> Result<(), Box<dyn Error>> {
    let rules = ClosedFormRules::new(derive_params(PrimeModulus::new(p)?)?);
    let f = rules.params().p;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(p);
    let mut won = 0;
    for _ in 0..rounds {
        let (x, y) = (f.element(rng.gen_range(0..p)), f.element(rng.gen_range(0..p)));
        let (a, b) = (rules.alice(x), rules.bob(y));
        let w = wins(x, y, a, b, f);
        won += w as u64;
        println!("x = {x:>6}  y = {y:>6}  a = {a:>6}  b = {b:>6}  {}", if w { "win" } else { "-" });
    }
    println!("{won} of {rounds} random rounds won");

    if p == 101 {
        // a hit: (23, 93) lies on the line with slope 46
        let (x, y) = (f.element(23), f.element(46));
        assert!(wins(x, y, rules.alice(x), rules.bob(y), f));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let p = args.next().map_or(Ok(101), |s| s.parse())?;
    let rounds = args.next().map_or(Ok(20), |s| s.parse())?;
    run(p, rounds)
}
