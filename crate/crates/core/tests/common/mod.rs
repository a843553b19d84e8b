#![allow(dead_code)]

use std::collections::HashSet;

use chshq::construction::Construction;
use chshq::game::wins;
use chshq::FieldElement;

/// Wins on input pairs where Alice's input has no point or Bob's input has no
/// line, counted pair by pair from the construction's geometry.
pub fn fallback_wins(c: &Construction) -> u64 {
    let q = c.params.p;
    let covered_x: HashSet<FieldElement> = c.points.points().iter().map(|p| p.x).collect();
    let covered_y: HashSet<FieldElement> = c.dedup.kept.iter().map(|l| l.line.slope).collect();
    let alice = |x: FieldElement| {
        c.points
            .points()
            .iter()
            .find(|p| p.x == x)
            .map_or(FieldElement::ZERO, |p| p.h)
    };
    let bob = |y: FieldElement| {
        c.dedup
            .kept
            .iter()
            .find(|l| l.line.slope == y)
            .map_or(FieldElement::ZERO, |l| q.neg(l.line.intercept))
    };
    let bob_table: Vec<FieldElement> = q.elements().map(bob).collect();
    let mut n = 0;
    for x in q.elements() {
        let a = if covered_x.contains(&x) { alice(x) } else { FieldElement::ZERO };
        for y in q.elements() {
            if covered_x.contains(&x) && covered_y.contains(&y) {
                continue;
            }
            n += wins(x, y, a, bob_table[y.value() as usize], q) as u64;
        }
    }
    n
}
