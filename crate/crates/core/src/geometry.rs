//! Points and lines in the affine plane over `F_p`, incidence counting, and the
//! correspondence between strategies and point/line sets.
//!
//! A strategy `(a, b)` corresponds to the points `(x, a(x))` and the lines
//! `h = y g + t` with slope `y` and intercept `t = -b(y)`. A pair of inputs wins
//! exactly when the point lies on the line.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};
use crate::game::DeterministicStrategy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[FieldElement; 2]", into = "[FieldElement; 2]")]
pub struct AffinePoint {
    pub x: FieldElement,
    pub h: FieldElement,
}

/// The line `h = slope * x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[FieldElement; 2]", into = "[FieldElement; 2]")]
pub struct AffineLine {
    pub slope: FieldElement,
    pub intercept: FieldElement,
}

impl From<[FieldElement; 2]> for AffinePoint {
    fn from([x, h]: [FieldElement; 2]) -> Self {
        AffinePoint { x, h }
    }
}

impl From<AffinePoint> for [FieldElement; 2] {
    fn from(p: AffinePoint) -> Self {
        [p.x, p.h]
    }
}

impl From<[FieldElement; 2]> for AffineLine {
    fn from([slope, intercept]: [FieldElement; 2]) -> Self {
        AffineLine { slope, intercept }
    }
}

impl From<AffineLine> for [FieldElement; 2] {
    fn from(l: AffineLine) -> Self {
        [l.slope, l.intercept]
    }
}

#[inline]
pub fn on_line(pt: AffinePoint, ln: AffineLine, p: PrimeModulus) -> bool {
    pt.h == p.add(p.mul(ln.slope, pt.x), ln.intercept)
}

/// Ordered points over a fixed modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    modulus: PrimeModulus,
    points: Vec<AffinePoint>,
}

/// Ordered lines over a fixed modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSet {
    modulus: PrimeModulus,
    lines: Vec<AffineLine>,
}

fn check(p: PrimeModulus, es: &[FieldElement]) -> Result<()> {
    match es.iter().find(|e| !p.contains(**e)) {
        Some(e) => Err(Error::NonCanonical {
            value: e.value(),
            modulus: p.get(),
        }),
        None => Ok(()),
    }
}

impl PointSet {
    pub fn new(modulus: PrimeModulus, points: Vec<AffinePoint>) -> Result<Self> {
        for pt in &points {
            check(modulus, &[pt.x, pt.h])?;
        }
        Ok(PointSet { modulus, points })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn points(&self) -> &[AffinePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl LineSet {
    pub fn new(modulus: PrimeModulus, lines: Vec<AffineLine>) -> Result<Self> {
        for ln in &lines {
            check(modulus, &[ln.slope, ln.intercept])?;
        }
        Ok(LineSet { modulus, lines })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn lines(&self) -> &[AffineLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// Collision census. Every member of a colliding group is counted, so two
/// points sharing an x contribute 2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityFlags {
    pub duplicate_x_count: u64,
    pub duplicate_slope_count: u64,
}

impl AmbiguityFlags {
    pub fn is_unambiguous(&self) -> bool {
        self.duplicate_x_count == 0 && self.duplicate_slope_count == 0
    }
}

fn colliding_members<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> u64 {
    let mut groups: HashMap<K, u64> = HashMap::new();
    for k in keys {
        *groups.entry(k).or_default() += 1;
    }
    groups.values().filter(|&&n| n > 1).sum()
}

pub fn validate_unambiguous(points: &PointSet, lines: &LineSet) -> AmbiguityFlags {
    AmbiguityFlags {
        duplicate_x_count: colliding_members(points.points.iter().map(|p| p.x)),
        duplicate_slope_count: colliding_members(lines.lines.iter().map(|l| l.slope)),
    }
}

fn same_modulus(points: &PointSet, lines: &LineSet) -> Result<PrimeModulus> {
    if points.modulus != lines.modulus {
        return Err(Error::ModulusMismatch(points.modulus.get(), lines.modulus.get()));
    }
    Ok(points.modulus)
}

/// Incidence count keyed by slope: for each point and each distinct slope the
/// only possible intercept is `h - slope * x`, which is looked up in that
/// slope's intercept list. Cost is `O(|P| * distinct slopes)`.
pub fn count_incidences(points: &PointSet, lines: &LineSet) -> Result<u64> {
    let p = same_modulus(points, lines)?;
    let mut by_slope: HashMap<FieldElement, Vec<FieldElement>> = HashMap::new();
    for ln in &lines.lines {
        by_slope.entry(ln.slope).or_default().push(ln.intercept);
    }
    let mut groups: Vec<(FieldElement, Vec<FieldElement>)> = by_slope.into_iter().collect();
    groups.sort_unstable_by_key(|g| g.0);

    Ok(points
        .points
        .par_iter()
        .with_min_len(64)
        .map(|pt| {
            groups
                .iter()
                .map(|(slope, intercepts)| {
                    let t = p.sub(pt.h, p.mul(*slope, pt.x));
                    intercepts.iter().filter(|&&i| i == t).count() as u64
                })
                .sum::<u64>()
        })
        .sum())
}

/// `O(|P| * |L|)` reference scan.
pub fn count_incidences_direct(points: &PointSet, lines: &LineSet) -> Result<u64> {
    let p = same_modulus(points, lines)?;
    let mut n = 0;
    for &pt in &points.points {
        for &ln in &lines.lines {
            n += on_line(pt, ln, p) as u64;
        }
    }
    Ok(n)
}

pub fn strategy_to_geometry(s: &DeterministicStrategy) -> (PointSet, LineSet) {
    let q = s.modulus();
    let points = q.elements().map(|x| AffinePoint { x, h: s.alice(x) }).collect();
    let lines = q
        .elements()
        .map(|y| AffineLine {
            slope: y,
            intercept: q.neg(s.bob(y)),
        })
        .collect();
    (PointSet { modulus: q, points }, LineSet { modulus: q, lines })
}

/// Inverse of [`strategy_to_geometry`]. Inputs not covered by a point (for
/// Alice) or a line slope (for Bob) answer 0.
pub fn geometry_to_strategy(points: &PointSet, lines: &LineSet) -> Result<DeterministicStrategy> {
    let q = same_modulus(points, lines)?;
    let flags = validate_unambiguous(points, lines);
    if !flags.is_unambiguous() {
        return Err(Error::Ambiguous(flags));
    }
    let n = q.get() as usize;
    let mut alice = vec![FieldElement::ZERO; n];
    let mut bob = vec![FieldElement::ZERO; n];
    for pt in &points.points {
        alice[pt.x.value() as usize] = pt.h;
    }
    for ln in &lines.lines {
        bob[ln.slope.value() as usize] = q.neg(ln.intercept);
    }
    DeterministicStrategy::new(q, alice, bob)
}

/// The geometry document `{"p", "points": [[x, h]], "lines": [[slope, intercept]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryDocument {
    pub p: u64,
    pub points: Vec<AffinePoint>,
    pub lines: Vec<AffineLine>,
}

impl GeometryDocument {
    pub fn from_sets(points: &PointSet, lines: &LineSet) -> Result<Self> {
        let p = same_modulus(points, lines)?;
        Ok(GeometryDocument {
            p: p.get(),
            points: points.points.clone(),
            lines: lines.lines.clone(),
        })
    }

    pub fn into_sets(self) -> Result<(PointSet, LineSet)> {
        let p = PrimeModulus::new(self.p)?;
        Ok((PointSet::new(p, self.points)?, LineSet::new(p, self.lines)?))
    }
}
