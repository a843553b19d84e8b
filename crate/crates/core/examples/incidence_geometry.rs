// Strategies as points and lines: a point `(x, a(x))` on the line with slope
// `y` and intercept `-b(y)` is a winning input pair.
//
// cargo run --example incidence_geometry

use std::error::Error;

use chshq::game::{evaluate, trivial_strategy};
use chshq::geometry::{
    count_incidences, geometry_to_strategy, strategy_to_geometry, validate_unambiguous, AffineLine, AffinePoint,
    GeometryDocument, LineSet, PointSet,
};
use chshq::PrimeModulus;

pub fn run(q: u64) -> Result<(), Box<dyn Error>> {
    let q = PrimeModulus::new(q)?;
    let (points, lines) = strategy_to_geometry(&trivial_strategy(q));
    let incidences = count_incidences(&points, &lines)?;
    println!("trivial strategy over F_{q}: {incidences} incidences");
    assert_eq!(incidences, evaluate(&trivial_strategy(q)).win_count);

    // all points on one line: many incidences, but not a strategy
    let slope = q.element(3);
    let on_one_line: Vec<_> = q
        .elements()
        .map(|x| AffinePoint { x, h: q.mul(slope, x) })
        .collect();
    let twice = vec![AffineLine { slope, intercept: q.element(0) }; 2];
    let (p_set, l_set) = (PointSet::new(q, on_one_line)?, LineSet::new(q, twice)?);
    let flags = validate_unambiguous(&p_set, &l_set);
    println!(
        "two copies of one line: {} incidences, {} colliding slopes",
        count_incidences(&p_set, &l_set)?,
        flags.duplicate_slope_count
    );
    assert!(geometry_to_strategy(&p_set, &l_set).is_err());

    let single = LineSet::new(q, vec![l_set.lines()[0]])?;
    let s = geometry_to_strategy(&p_set, &single)?;
    println!("with one copy: strategy winning {} pairs", evaluate(&s).win_count);

    let doc = GeometryDocument::from_sets(&p_set, &single)?;
    println!("{}", serde_json::to_string(&doc)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run(7)
}
