//! Exact classical value of CHSH_q for tiny `q`, by scanning every Alice table
//! and answering each with Bob's best response.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};
use crate::fraction::{self, Fraction};
use crate::game::DeterministicStrategy;

pub const DEFAULT_CAP: u64 = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub q: u64,
    pub max_wins: u64,
    #[serde(with = "fraction")]
    pub optimal_value: Fraction,
    pub witness: DeterministicStrategy,
    pub strategies_scanned: u64,
}

/// Which player's table is enumerated; the other plays a best response.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumerate {
    Alice,
    Bob,
}

/// For each `y`, the `b` hit by the most `x` with `alice[x] + b = x y`
/// (smallest `b` on ties). Returns Bob's table and the total wins.
pub fn best_response_bob(alice: &[FieldElement], q: PrimeModulus) -> (Vec<FieldElement>, u64) {
    best_response(alice, q)
}

/// Mirror of [`best_response_bob`]; the winning condition is symmetric under
/// swapping `(x, a)` with `(y, b)`.
pub fn best_response_alice(bob: &[FieldElement], q: PrimeModulus) -> (Vec<FieldElement>, u64) {
    best_response(bob, q)
}

fn best_response(fixed: &[FieldElement], q: PrimeModulus) -> (Vec<FieldElement>, u64) {
    let n = q.get() as usize;
    let mut hist = vec![0u64; n];
    let mut response = Vec::with_capacity(n);
    let mut total = 0;
    for y in q.elements() {
        hist.iter_mut().for_each(|h| *h = 0);
        for (x, &a) in q.elements().zip(fixed) {
            hist[q.sub(q.mul(x, y), a).value() as usize] += 1;
        }
        let (b, &best) = hist
            .iter()
            .enumerate()
            .max_by(|(i, u), (j, v)| u.cmp(v).then(j.cmp(i)))
            .expect("q >= 2");
        response.push(q.element(b as u64));
        total += best;
    }
    (response, total)
}

/// `q^q * q^2` table steps, the cost of a full scan.
pub fn estimated_steps(q: u64) -> f64 {
    let q = q as f64;
    q.powf(q) * q * q
}

pub fn optimal_classical_value(q: PrimeModulus, cap: u64) -> Result<OracleResult> {
    optimal_classical_value_by(q, cap, Enumerate::Alice)
}

/// Scans tables in lexicographic order (entry 0 most significant). The first
/// maximizer is the witness, for any number of worker threads.
pub fn optimal_classical_value_by(q: PrimeModulus, cap: u64, side: Enumerate) -> Result<OracleResult> {
    let n = q.get();
    if n > cap {
        return Err(Error::OracleCap {
            q: n,
            cap,
            estimated_steps: estimated_steps(n),
        });
    }
    let total = n.pow(n as u32);
    let shards = total.div_ceil(4096);
    let (best_index, max_wins) = (0..shards)
        .into_par_iter()
        .map(|s| {
            let start = s * 4096;
            let end = (start + 4096).min(total);
            let mut table = decode(start, q);
            let mut best = (start, 0u64);
            for index in start..end {
                let (_, wins) = best_response(&table, q);
                if wins > best.1 {
                    best = (index, wins);
                }
                increment(&mut table, q);
            }
            best
        })
        .reduce(
            || (u64::MAX, 0),
            |a, b| {
                if a.1 > b.1 || (a.1 == b.1 && a.0 < b.0) {
                    a
                } else {
                    b
                }
            },
        );
    let table = decode(best_index, q);
    let (response, wins) = best_response(&table, q);
    debug_assert_eq!(wins, max_wins);
    let witness = match side {
        Enumerate::Alice => DeterministicStrategy::new(q, table, response)?,
        Enumerate::Bob => DeterministicStrategy::new(q, response, table)?,
    };
    Ok(OracleResult {
        q: n,
        max_wins,
        optimal_value: Fraction::new(max_wins as u128, (n * n) as u128),
        witness,
        strategies_scanned: total,
    })
}

fn decode(mut index: u64, q: PrimeModulus) -> Vec<FieldElement> {
    let n = q.get();
    let mut table = vec![FieldElement::ZERO; n as usize];
    for slot in table.iter_mut().rev() {
        *slot = q.element(index % n);
        index /= n;
    }
    table
}

fn increment(table: &mut [FieldElement], q: PrimeModulus) {
    for slot in table.iter_mut().rev() {
        let next = slot.value() + 1;
        if next < q.get() {
            *slot = q.element(next);
            return;
        }
        *slot = FieldElement::ZERO;
    }
}
