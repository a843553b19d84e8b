//! The explicit `p^{-2/3}/22` strategy.
//!
//! Start from an integer grid of `p1 * p2` points and `p1 * p2 / 4` lines with
//! many incidences, move it into `F_p` with a map that preserves incidence and
//! separates point x-coordinates, then drop lines whose slopes collide.
//! Survivors are read off as a strategy, with 0 for uncovered inputs.

use std::collections::HashMap;
use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{icbrt, FieldElement, PrimeModulus};
use crate::game::{classical_guarantee, evaluate, DeterministicStrategy};
use crate::geometry::{count_incidences, geometry_to_strategy, AffineLine, AffinePoint, LineSet, PointSet};

/// Grid dimensions for a prime `p` and the inequalities they are expected to meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub p: PrimeModulus,
    /// `2 * floor(p^{1/3} / 2)`
    pub p1: u64,
    /// `2 * floor(p / (2 p1))`
    pub p2: u64,
    /// `p1^2 < p2` (fails with equality just above even cubes, e.g. 1009, 32771)
    pub bound_p1sq_lt_p2: bool,
    /// `p - 2 p1 < p1 p2 < p`
    pub bound_sandwich: bool,
    pub p1_gt_30: bool,
}

impl ConstructionParams {
    /// Whether the duplicate-slope and win-count bounds are claimed. Uses the
    /// non-strict `p1^2 <= p2`.
    pub fn bounds_apply(&self) -> bool {
        self.p1_gt_30 && self.p1 * self.p1 <= self.p2 && self.bound_sandwich
    }

    pub fn points_total(&self) -> u64 {
        self.p1 * self.p2
    }

    pub fn lines_total(&self) -> u64 {
        self.p1 * self.p2 / 4
    }

    /// Incidences of the integer grid, `p1^2 p2 / 4`.
    pub fn grid_incidences(&self) -> u64 {
        self.p1 * self.p1 * self.p2 / 4
    }
}

pub fn derive_params(p: PrimeModulus) -> Result<ConstructionParams> {
    let n = p.get();
    let p1 = 2 * (icbrt(n) / 2);
    if p1 < 2 {
        return Err(Error::ConstructionUnsupported { p: n, p1 });
    }
    let p2 = 2 * (n / (2 * p1));
    let prod = p1 as u128 * p2 as u128;
    Ok(ConstructionParams {
        p,
        p1,
        p2,
        bound_p1sq_lt_p2: p1 * p1 < p2,
        bound_sandwich: (n as u128) < prod + 2 * p1 as u128 && prod < n as u128,
        p1_gt_30: p1 > 30,
    })
}

/// `x in [0, p1)`, `a in [0, p2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: u64,
    pub a: u64,
}

/// The integer line `a = y x + b` with `y in [0, p1/2)`, `b in [0, p2/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridLine {
    pub y: u64,
    pub b: u64,
}

impl GridPoint {
    pub fn in_range(&self, params: &ConstructionParams) -> bool {
        self.x < params.p1 && self.a < params.p2
    }
}

impl GridLine {
    pub fn in_range(&self, params: &ConstructionParams) -> bool {
        self.y < params.p1 / 2 && self.b < params.p2 / 2
    }

    /// Integer incidence, no wraparound.
    pub fn contains(&self, g: GridPoint) -> bool {
        g.a == self.y * g.x + self.b
    }
}

/// All grid points and lines, each in lexicographic order.
pub fn build_grid(params: &ConstructionParams) -> (Vec<GridPoint>, Vec<GridLine>) {
    let points = (0..params.p1)
        .flat_map(|x| (0..params.p2).map(move |a| GridPoint { x, a }))
        .collect();
    let lines = (0..params.p1 / 2)
        .flat_map(|y| (0..params.p2 / 2).map(move |b| GridLine { y, b }))
        .collect();
    (points, lines)
}

/// Integer incidences between grid points and lines. Each line is walked over
/// `x in [0, p1)` and the hit is looked up among the points.
pub fn count_grid_incidences(points: &[GridPoint], lines: &[GridLine], params: &ConstructionParams) -> u64 {
    let set: HashSet<GridPoint> = points.iter().copied().collect();
    lines
        .iter()
        .map(|l| {
            (0..params.p1)
                .filter(|&x| set.contains(&GridPoint { x, a: l.y * x + l.b }))
                .count() as u64
        })
        .sum()
}

/// `(x, a) -> (1 / (p2 x - a), 1 + 2a / (p2 x - a))`.
pub fn transform_point(g: GridPoint, params: &ConstructionParams) -> Result<AffinePoint> {
    if !g.in_range(params) {
        return Err(Error::GridRange(format!("{g:?}")));
    }
    if g.x == 0 && g.a == 0 {
        return Err(Error::ExcludedPoint);
    }
    let f = params.p;
    let denom = f.sub(f.mul(f.element(params.p2), f.element(g.x)), f.element(g.a));
    let inv = f.inv(denom)?;
    let h = f.add(f.one(), f.mul(f.element(2 * g.a), inv));
    Ok(AffinePoint { x: inv, h })
}

/// `(y, b) -> (2 p2 b / (p2 - y), (p2 + y) / (p2 - y))` as (slope, intercept).
pub fn transform_line(l: GridLine, params: &ConstructionParams) -> Result<AffineLine> {
    if !l.in_range(params) {
        return Err(Error::GridRange(format!("{l:?}")));
    }
    let f = params.p;
    let inv = f.inv(f.element(params.p2 - l.y))?;
    let slope = f.mul(f.mul(f.element(2 * params.p2), f.element(l.b)), inv);
    let intercept = f.mul(f.element(params.p2 + l.y), inv);
    Ok(AffineLine { slope, intercept })
}

/// A transformed line together with the grid line it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourcedLine {
    pub source: GridLine,
    pub line: AffineLine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dedup {
    pub kept: Vec<SourcedLine>,
    pub removed: u64,
}

/// Keeps one line per slope: the one with the smallest source `(y, b)`.
/// Survivors stay in input order.
pub fn dedup_lines(lines: &[SourcedLine]) -> Dedup {
    let mut best: HashMap<FieldElement, usize> = HashMap::with_capacity(lines.len());
    for (i, l) in lines.iter().enumerate() {
        best.entry(l.line.slope)
            .and_modify(|j| {
                if l.source < lines[*j].source {
                    *j = i;
                }
            })
            .or_insert(i);
    }
    let kept: Vec<SourcedLine> = lines
        .iter()
        .enumerate()
        .filter(|(i, l)| best[&l.line.slope] == *i)
        .map(|(_, l)| *l)
        .collect();
    Dedup {
        removed: (lines.len() - kept.len()) as u64,
        kept,
    }
}

/// Every stage of the pipeline for one prime.
#[derive(Clone, Debug)]
pub struct Construction {
    pub params: ConstructionParams,
    pub grid_points: Vec<GridPoint>,
    pub grid_lines: Vec<GridLine>,
    /// Images of every grid point but `(0, 0)`, in grid order.
    pub points: PointSet,
    /// Every transformed line, in grid order.
    pub transformed_lines: Vec<SourcedLine>,
    pub dedup: Dedup,
    pub strategy: DeterministicStrategy,
}

impl Construction {
    pub fn kept_lines(&self) -> LineSet {
        LineSet::new(self.params.p, self.dedup.kept.iter().map(|l| l.line).collect()).expect("canonical lines")
    }
}

pub fn construct(p: PrimeModulus) -> Result<Construction> {
    let params = derive_params(p)?;
    let (grid_points, grid_lines) = build_grid(&params);
    let points = grid_points
        .par_iter()
        .filter(|g| g.x != 0 || g.a != 0)
        .map(|g| transform_point(*g, &params))
        .collect::<Result<Vec<_>>>()?;
    let transformed_lines = grid_lines
        .par_iter()
        .map(|l| {
            Ok(SourcedLine {
                source: *l,
                line: transform_line(*l, &params)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dedup = dedup_lines(&transformed_lines);
    let points = PointSet::new(p, points)?;
    let kept = LineSet::new(p, dedup.kept.iter().map(|l| l.line).collect())?;
    let strategy = geometry_to_strategy(&points, &kept)?;
    Ok(Construction {
        params,
        grid_points,
        grid_lines,
        points,
        transformed_lines,
        dedup,
        strategy,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub params: ConstructionParams,
    pub pre_incidences: u64,
    pub points_kept: u64,
    pub lines_total: u64,
    pub lines_kept: u64,
    pub lines_removed: u64,
    /// Incidences between surviving points and kept lines, counted in `F_p`.
    pub post_incidence_count: u64,
    /// Exhaustive winning count of the strategy over all `p^2` input pairs.
    pub win_count: u64,
    /// `lines_kept * (p1 - 1)`
    pub kept_line_floor: u64,
    /// `floor(p^{4/3} / 22)`
    pub guarantee_floor: u64,
    pub guarantee_met: bool,
}

impl ConstructionReport {
    pub fn from_construction(c: &Construction) -> Result<Self> {
        let pre_incidences = count_grid_incidences(&c.grid_points, &c.grid_lines, &c.params);
        let post_incidence_count = count_incidences(&c.points, &c.kept_lines())?;
        let win_count = evaluate(&c.strategy).win_count;
        let guarantee_floor = classical_guarantee(c.params.p.get()).win_count_floor;
        let lines_kept = c.dedup.kept.len() as u64;
        Ok(ConstructionReport {
            params: c.params,
            pre_incidences,
            points_kept: c.points.len() as u64,
            lines_total: c.transformed_lines.len() as u64,
            lines_kept,
            lines_removed: c.dedup.removed,
            post_incidence_count,
            win_count,
            kept_line_floor: lines_kept * (c.params.p1 - 1),
            guarantee_floor,
            guarantee_met: win_count >= guarantee_floor,
        })
    }
}

/// Runs the whole pipeline and evaluates the result exhaustively.
pub fn build_strategy(p: PrimeModulus) -> Result<(DeterministicStrategy, ConstructionReport)> {
    let c = construct(p)?;
    let report = ConstructionReport::from_construction(&c)?;
    Ok((c.strategy, report))
}

/// Per-input answers computed directly, without building any table.
#[derive(Clone, Copy, Debug)]
pub struct ClosedFormRules {
    params: ConstructionParams,
    inv_two_p2: FieldElement,
}

impl ClosedFormRules {
    pub fn new(params: ConstructionParams) -> Self {
        let f = params.p;
        let inv_two_p2 = f.inv(f.element(2 * params.p2)).expect("2 p2 < p is invertible");
        ClosedFormRules { params, inv_two_p2 }
    }

    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    /// Recovers the grid point `(x', a')` with `1 / (p2 x' - a') = x` and
    /// answers `1 + 2 a' x`, or 0 if there is none.
    pub fn alice(&self, x: FieldElement) -> FieldElement {
        let ConstructionParams { p: f, p1, p2, .. } = self.params;
        if x.is_zero() {
            return FieldElement::ZERO;
        }
        let v = f.inv(x).expect("nonzero").value();
        // x' >= 1: v = p2 x' - a' with a' in [0, p2)
        let column = v.div_ceil(p2);
        let offset = if column < p1 {
            column * p2 - v
        } else if f.get() - v < p2 {
            // x' = 0: v = p - a'
            f.get() - v
        } else {
            return FieldElement::ZERO;
        };
        f.add(f.one(), f.mul(f.element(2 * offset), x))
    }

    /// Scans `y' = 0, 1, ...` for the first grid line with slope `beta` and
    /// answers minus its intercept, or 0 if there is none.
    pub fn bob(&self, beta: FieldElement) -> FieldElement {
        let ConstructionParams { p: f, p1, p2, .. } = self.params;
        let scaled = f.mul(beta, self.inv_two_p2);
        for y in 0..p1 / 2 {
            let b = f.mul(scaled, f.element(p2 - y));
            if b.value() < p2 / 2 {
                let intercept = f.div(f.element(p2 + y), f.element(p2 - y)).expect("p2 - y != 0");
                return f.neg(intercept);
            }
        }
        FieldElement::ZERO
    }

    pub fn strategy(&self) -> DeterministicStrategy {
        DeterministicStrategy::from_fns(self.params.p, |x| self.alice(x), |y| self.bob(y))
    }
}

pub fn alice_rule(x: FieldElement, params: &ConstructionParams) -> FieldElement {
    ClosedFormRules::new(*params).alice(x)
}

pub fn bob_rule(beta: FieldElement, params: &ConstructionParams) -> FieldElement {
    ClosedFormRules::new(*params).bob(beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64) -> ConstructionParams {
        derive_params(PrimeModulus::new(p).unwrap()).unwrap()
    }

    #[test]
    fn derived_parameters() {
        let c = params(101);
        assert_eq!((c.p1, c.p2), (4, 24));
        assert!(c.bound_p1sq_lt_p2 && c.bound_sandwich && !c.p1_gt_30);

        let c = params(1499);
        assert_eq!((c.p1, c.p2), (10, 148));
        assert!(c.bound_p1sq_lt_p2 && c.bound_sandwich);

        let c = params(40009);
        assert_eq!((c.p1, c.p2), (34, 1176));
        assert!(c.bound_p1sq_lt_p2 && c.bound_sandwich && c.p1_gt_30 && c.bounds_apply());

        let c = params(32771);
        assert_eq!((c.p1, c.p2), (32, 1024));
        assert!(!c.bound_p1sq_lt_p2 && c.bound_sandwich && c.bounds_apply());

        let c = params(1009);
        assert_eq!((c.p1, c.p2), (10, 100));
        assert!(!c.bound_p1sq_lt_p2);
    }

    #[test]
    fn tiny_primes_are_unsupported() {
        for p in [2, 3, 5, 7] {
            let err = derive_params(PrimeModulus::new(p).unwrap()).unwrap_err();
            assert!(matches!(err, Error::ConstructionUnsupported { .. }));
        }
        assert_eq!(params(11).p1, 2);
    }

    #[test]
    fn grid_sizes_and_incidences() {
        for (p, pts, lns, inc) in [(101, 96, 24, 96), (1499, 1480, 370, 3700)] {
            let c = params(p);
            let (points, lines) = build_grid(&c);
            assert_eq!((points.len(), lines.len()), (pts, lns));
            assert_eq!(count_grid_incidences(&points, &lines, &c), inc);
            assert_eq!(c.grid_incidences(), inc);
            let direct: u64 = lines
                .iter()
                .map(|l| points.iter().filter(|g| l.contains(**g)).count() as u64)
                .sum();
            assert_eq!(direct, inc);
        }
    }

    #[test]
    fn lines_stay_below_p2() {
        for p in [11, 101, 1009, 1499, 32771, 40009] {
            let c = params(p);
            let top = (c.p2 / 2 - 1) + (c.p1 / 2 - 1) * (c.p1 - 1);
            assert!(top < c.p2, "p = {p}");
        }
    }

    #[test]
    fn transform_examples() {
        let c = params(101);
        let f = c.p;
        let pt = |x, a| transform_point(GridPoint { x, a }, &c).unwrap();
        assert_eq!(pt(1, 0), AffinePoint { x: f.element(80), h: f.element(1) });
        assert_eq!(pt(1, 2), AffinePoint { x: f.element(23), h: f.element(93) });
        assert_eq!(transform_point(GridPoint { x: 0, a: 0 }, &c), Err(Error::ExcludedPoint));
        assert!(matches!(transform_point(GridPoint { x: 4, a: 0 }, &c), Err(Error::GridRange(_))));

        let l = transform_line(GridLine { y: 1, b: 1 }, &c).unwrap();
        assert_eq!(l, AffineLine { slope: f.element(46), intercept: f.element(45) });
        let l0 = transform_line(GridLine { y: 0, b: 0 }, &c).unwrap();
        assert_eq!(l0, AffineLine { slope: f.element(0), intercept: f.element(1) });
    }

    #[test]
    fn dedup_keeps_smallest_source() {
        let c = params(101);
        let (_, lines) = build_grid(&c);
        let sourced: Vec<SourcedLine> = lines
            .iter()
            .map(|l| SourcedLine { source: *l, line: transform_line(*l, &c).unwrap() })
            .collect();
        let d = dedup_lines(&sourced);
        let zero: Vec<_> = d.kept.iter().filter(|l| l.line.slope.is_zero()).collect();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].source, GridLine { y: 0, b: 0 });
        assert_eq!(d.kept.len() as u64 + d.removed, 24);

        // reversed input: the same survivors, in reversed order
        let rev: Vec<_> = sourced.iter().rev().copied().collect();
        let mut again = dedup_lines(&rev).kept;
        again.reverse();
        assert_eq!(again, d.kept);

        let distinct = &d.kept;
        assert_eq!(dedup_lines(distinct), Dedup { kept: distinct.clone(), removed: 0 });
    }

    #[test]
    fn alice_rule_examples() {
        let c = params(101);
        let f = c.p;
        assert_eq!(alice_rule(f.element(0), &c), FieldElement::ZERO);
        assert_eq!(alice_rule(f.element(23), &c).value(), 93);
        // inverses in (p2 (p1 - 1), p - p2] = (72, 77] decompose to no grid point
        let x = f.inv(f.element(75)).unwrap();
        assert_eq!(alice_rule(x, &c), FieldElement::ZERO);
        // column x' = 0: v = p - a' gives the image of (0, a'), whose output is -1
        let x = f.inv(f.element(101 - 5)).unwrap();
        assert_eq!(alice_rule(x, &c).value(), 100);
    }

    #[test]
    fn bob_rule_examples() {
        let c = params(101);
        let f = c.p;
        assert_eq!(bob_rule(f.element(46), &c).value(), 56);
        assert_eq!(bob_rule(f.element(0), &c).value(), 100);
        let rules = ClosedFormRules::new(c);
        let uncovered = f.elements().find(|&b| {
            (0..2).all(|y| f.mul(f.mul(b, rules.inv_two_p2), f.element(24 - y)).value() >= 12)
        });
        assert_eq!(bob_rule(uncovered.unwrap(), &c), FieldElement::ZERO);
    }

    #[test]
    fn worked_example_wins() {
        let c = params(101);
        let f = c.p;
        let (a, b) = (alice_rule(f.element(23), &c), bob_rule(f.element(46), &c));
        assert!(crate::game::wins(f.element(23), f.element(46), a, b, f));
    }

    #[test]
    fn pipeline_at_101() {
        let (s, r) = build_strategy(PrimeModulus::new(101).unwrap()).unwrap();
        assert_eq!(r.pre_incidences, 96);
        assert_eq!(r.lines_kept + r.lines_removed, r.lines_total);
        assert_eq!(r.lines_total, 24);
        assert_eq!(r.points_kept, 95);
        assert!(r.win_count >= r.post_incidence_count);
        assert_eq!(s, ClosedFormRules::new(r.params).strategy());
        let back: ConstructionReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn pipeline_rejects_small_primes() {
        assert!(matches!(
            build_strategy(PrimeModulus::new(7).unwrap()),
            Err(Error::ConstructionUnsupported { p: 7, p1: 0 })
        ));
    }
}
