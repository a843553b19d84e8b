//! Duplicate-slope census for the transformed lines.
//!
//! A grid line `(y, b)` with `b != 0` lands on slope `s = 2 p2 b / (p2 - y)`.
//! Writing `k = 2 p2 / s` turns "which lines share slope `s`" into "which
//! in-range `(y, b)` solve `k b = p2 - y`". The audit enumerates both sides
//! independently, checks they agree, and compares the measured duplicate count
//! with the closed-form bounds.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{build_grid, transform_line, ConstructionParams, GridLine};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::fraction::{self, Fraction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    /// `k < p1 / 2`
    Small,
    /// `p1 / 2 <= k <= 2 p1`: at most one solution.
    Middle,
    /// `k > 2 p1`
    Large,
}

impl Band {
    pub fn of(k: u64, p1: u64) -> Band {
        if 2 * k < p1 {
            Band::Small
        } else if k <= 2 * p1 {
            Band::Middle
        } else {
            Band::Large
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Band::Small => "small",
            Band::Middle => "middle",
            Band::Large => "large",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeEquationRecord {
    pub k: FieldElement,
    pub band: Band,
    /// In-range solutions of `k b = p2 - y`, ascending in `y`.
    pub solutions: Vec<GridLine>,
}

pub fn solutions_for_k(k: FieldElement, params: &ConstructionParams) -> Result<SlopeEquationRecord> {
    let f = params.p;
    if k.is_zero() {
        return Err(Error::ZeroStep);
    }
    let inv_k = f.inv(k)?;
    let solutions = (0..params.p1 / 2)
        .filter_map(|y| {
            let b = f.mul(f.element(params.p2 - y), inv_k).value();
            (b < params.p2 / 2).then_some(GridLine { y, b })
        })
        .collect();
    Ok(SlopeEquationRecord {
        k,
        band: Band::of(k.value(), params.p1),
        solutions,
    })
}

/// One record per `k = 1, ..., p - 1`, ascending.
pub fn k_census(params: &ConstructionParams) -> Vec<SlopeEquationRecord> {
    let f = params.p;
    (1..f.get() as usize)
        .into_par_iter()
        .with_min_len(256)
        .map(|k| solutions_for_k(f.element(k as u64), params).expect("k != 0"))
        .collect()
}

/// `k, band, solution_count` rows.
pub fn k_census_csv(records: &[SlopeEquationRecord]) -> String {
    let mut out = String::from("k,band,solution_count\n");
    for r in records {
        out.push_str(&format!("{},{},{}\n", r.k, r.band.as_str(), r.solutions.len()));
    }
    out
}

/// Grid lines grouped by transformed slope.
pub fn slope_families(params: &ConstructionParams) -> HashMap<FieldElement, Vec<GridLine>> {
    let (_, lines) = build_grid(params);
    let mut families: HashMap<FieldElement, Vec<GridLine>> = HashMap::new();
    for l in lines {
        let slope = transform_line(l, params).expect("grid line in range").slope;
        families.entry(slope).or_default().push(l);
    }
    families
}

pub fn r_small_bound(params: &ConstructionParams) -> Fraction {
    let p1 = params.p1 as u128;
    Fraction::new(p1 * p1, 4)
}

pub fn r_large_bound(params: &ConstructionParams) -> Fraction {
    let p1 = params.p1 as u128;
    Fraction::new(p1 * p1 * p1, 6)
}

pub fn r_total_bound(params: &ConstructionParams) -> Fraction {
    r_small_bound(params) + r_large_bound(params)
}

/// `p1 p2 / 5`; only claimed when `p1 > 30`.
pub fn r_final_bound(params: &ConstructionParams) -> (Fraction, bool) {
    (
        Fraction::new(params.p1 as u128 * params.p2 as u128, 5),
        params.p1_gt_30,
    )
}

/// `p1 p2 / 4 - p1 p2 / 5 = p1 p2 / 20`
pub fn kept_floor(params: &ConstructionParams) -> Fraction {
    Fraction::new(params.p1 as u128 * params.p2 as u128, 20)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub p: u64,
    pub p1: u64,
    pub p2: u64,
    pub bounds_apply: bool,
    pub lines_total: u64,
    /// The `b = 0` lines all map to slope 0.
    pub slope_zero_family: u64,
    /// Members of the slope-0 family dropped by dedup (all but one).
    pub slope_zero_duplicates: u64,
    pub duplicate_families: u64,
    /// Lines sharing their slope with another line, every member counted.
    pub r_emp: u64,
    /// Lines dedup drops (all but one per family).
    pub lines_removed: u64,
    pub lines_kept: u64,
    /// Repeated solutions in the k-equation census (nonzero slopes only).
    pub k_census_repeated: u64,
    pub census_agrees: bool,
    pub middle_band_violations: u64,
    pub max_solutions_small: u64,
    pub max_solutions_middle: u64,
    pub max_solutions_large: u64,
    #[serde(with = "fraction")]
    pub r_small_bound: Fraction,
    #[serde(with = "fraction")]
    pub r_large_bound: Fraction,
    #[serde(with = "fraction")]
    pub r_total_bound: Fraction,
    #[serde(with = "fraction")]
    pub r_final_bound: Fraction,
    pub r_final_valid: bool,
    #[serde(with = "fraction")]
    pub kept_floor: Fraction,
    pub r_emp_below_final: bool,
    pub kept_meets_floor: bool,
}

impl AuditReport {
    /// A failed claim: a middle-band collision, or (where the bounds apply)
    /// too many duplicates.
    pub fn violation(&self) -> bool {
        self.middle_band_violations > 0 || (self.bounds_apply && !self.r_emp_below_final)
    }
}

pub fn audit(params: &ConstructionParams) -> AuditReport {
    audit_with_census(params, &k_census(params))
}

pub fn audit_with_census(params: &ConstructionParams, census: &[SlopeEquationRecord]) -> AuditReport {
    let f = params.p;
    let families = slope_families(params);
    let lines_total = params.lines_total();

    let slope_zero_family = families.get(&FieldElement::ZERO).map_or(0, |v| v.len() as u64);
    let dup_sizes: Vec<u64> = families.values().map(|v| v.len() as u64).filter(|&n| n > 1).collect();
    let r_emp: u64 = dup_sizes.iter().sum();
    let lines_removed: u64 = families.values().map(|v| v.len() as u64 - 1).sum();
    let lines_kept = lines_total - lines_removed;

    // Every nonzero slope family must be exactly the solution set of k = 2 p2 / s.
    let two_p2 = f.element(2 * params.p2);
    let mut census_agrees = true;
    let mut census_mass = 0u64;
    let mut k_census_repeated = 0u64;
    let mut census_families = 0u64;
    for rec in census {
        let n = rec.solutions.len() as u64;
        census_mass += n;
        if n > 1 {
            k_census_repeated += n;
        }
        if n == 0 {
            continue;
        }
        census_families += 1;
        let slope = f.mul(two_p2, f.inv(rec.k).expect("k != 0"));
        let mut family = families.get(&slope).cloned().unwrap_or_default();
        family.sort_unstable();
        census_agrees &= family == rec.solutions;
    }
    let nonzero_families = families.len() as u64 - u64::from(slope_zero_family > 0);
    census_agrees &= census_families == nonzero_families;
    census_agrees &= census_mass == lines_total - slope_zero_family;
    let zero_dups = if slope_zero_family > 1 { slope_zero_family } else { 0 };
    census_agrees &= k_census_repeated + zero_dups == r_emp;

    let max_in = |band: Band| {
        census
            .iter()
            .filter(|r| r.band == band)
            .map(|r| r.solutions.len() as u64)
            .max()
            .unwrap_or(0)
    };
    let middle_band_violations = census
        .iter()
        .filter(|r| r.band == Band::Middle && r.solutions.len() > 1)
        .count() as u64;

    let (r_final, r_final_valid) = r_final_bound(params);
    let floor = kept_floor(params);
    AuditReport {
        p: f.get(),
        p1: params.p1,
        p2: params.p2,
        bounds_apply: params.bounds_apply(),
        lines_total,
        slope_zero_family,
        slope_zero_duplicates: slope_zero_family.saturating_sub(1),
        duplicate_families: dup_sizes.len() as u64,
        r_emp,
        lines_removed,
        lines_kept,
        k_census_repeated,
        census_agrees,
        middle_band_violations,
        max_solutions_small: max_in(Band::Small),
        max_solutions_middle: max_in(Band::Middle),
        max_solutions_large: max_in(Band::Large),
        r_small_bound: r_small_bound(params),
        r_large_bound: r_large_bound(params),
        r_total_bound: r_total_bound(params),
        r_final_bound: r_final,
        r_final_valid,
        kept_floor: floor,
        r_emp_below_final: Fraction::from(r_emp as u128) < r_final,
        kept_meets_floor: Fraction::from(lines_kept as u128) >= floor,
    }
}
