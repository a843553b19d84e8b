//! The CHSH_q game: deterministic strategies, the exact evaluator, the trivial
//! baseline and closed-form bound values.

use std::ops::Range;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{icbrt, is_prime, FieldElement, PrimeModulus};
use crate::fraction::{self, Fraction};

/// `a + b == x * y` in `F_q`.
#[inline]
pub fn wins(x: FieldElement, y: FieldElement, a: FieldElement, b: FieldElement, q: PrimeModulus) -> bool {
    q.add(a, b) == q.mul(x, y)
}

/// A CHSH_q game instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameInstance {
    pub q: PrimeModulus,
}

impl GameInstance {
    pub fn new(q: PrimeModulus) -> Self {
        GameInstance { q }
    }

    pub fn input_pairs(&self) -> u128 {
        let q = self.q.get() as u128;
        q * q
    }

    pub fn wins(&self, x: FieldElement, y: FieldElement, a: FieldElement, b: FieldElement) -> bool {
        wins(x, y, a, b, self.q)
    }
}

/// Output tables `alice[x]` and `bob[y]`.
///
/// The JSON form is the strategy document `{"q", "alice", "bob"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StrategyDocument")]
pub struct DeterministicStrategy {
    q: PrimeModulus,
    alice: Vec<FieldElement>,
    bob: Vec<FieldElement>,
}

#[derive(Deserialize)]
struct StrategyDocument {
    q: u64,
    alice: Vec<u64>,
    bob: Vec<u64>,
}

impl TryFrom<StrategyDocument> for DeterministicStrategy {
    type Error = Error;

    fn try_from(doc: StrategyDocument) -> Result<Self> {
        let q = PrimeModulus::new(doc.q)?;
        let table = |v: Vec<u64>| v.into_iter().map(|e| q.canonical(e)).collect::<Result<Vec<_>>>();
        DeterministicStrategy::new(q, table(doc.alice)?, table(doc.bob)?)
    }
}

impl DeterministicStrategy {
    pub fn new(q: PrimeModulus, alice: Vec<FieldElement>, bob: Vec<FieldElement>) -> Result<Self> {
        for table in [&alice, &bob] {
            if table.len() as u64 != q.get() {
                return Err(Error::TableLength {
                    len: table.len(),
                    modulus: q.get(),
                });
            }
            if let Some(bad) = table.iter().find(|e| !q.contains(**e)) {
                return Err(Error::NonCanonical {
                    value: bad.value(),
                    modulus: q.get(),
                });
            }
        }
        Ok(DeterministicStrategy { q, alice, bob })
    }

    pub fn from_fns(
        q: PrimeModulus,
        alice: impl Fn(FieldElement) -> FieldElement,
        bob: impl Fn(FieldElement) -> FieldElement,
    ) -> Self {
        DeterministicStrategy {
            q,
            alice: q.elements().map(alice).collect(),
            bob: q.elements().map(bob).collect(),
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.q
    }

    pub fn alice(&self, x: FieldElement) -> FieldElement {
        self.alice[x.value() as usize]
    }

    pub fn bob(&self, y: FieldElement) -> FieldElement {
        self.bob[y.value() as usize]
    }

    pub fn alice_table(&self) -> &[FieldElement] {
        &self.alice
    }

    pub fn bob_table(&self) -> &[FieldElement] {
        &self.bob
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("strategy serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Document(e.to_string()))
    }
}

/// Wins over the block `xs x ys` of input pairs.
pub fn count_wins_in(s: &DeterministicStrategy, xs: Range<u64>, ys: Range<u64>) -> u64 {
    let q = s.q;
    let alice = &s.alice[xs.start as usize..xs.end as usize];
    let mut count = 0u64;
    for y in ys {
        let y = q.element(y);
        // target = x*y - bob[y], advanced by y per step in x
        let mut target = q.sub(q.mul(q.element(xs.start), y), s.bob(y)).value();
        let (step, modulus) = (y.value(), q.get());
        for a in alice {
            count += (a.value() == target) as u64;
            target += step;
            if target >= modulus {
                target -= modulus;
            }
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub q: u64,
    pub win_count: u64,
    #[serde(with = "fraction")]
    pub win_probability: Fraction,
    /// Wall time; kept out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl EvaluationReport {
    pub fn probability_f64(&self) -> f64 {
        fraction::to_f64(&self.win_probability)
    }
}

/// Exact winning count over all `q^2` input pairs. Rows of Bob's inputs are
/// spread over the current rayon pool; the total does not depend on the split.
pub fn evaluate(s: &DeterministicStrategy) -> EvaluationReport {
    let start = Instant::now();
    let q = s.q.get();
    let win_count: u64 = (0..q as usize)
        .into_par_iter()
        .with_min_len(16)
        .map(|y| count_wins_in(s, 0..q, y as u64..y as u64 + 1))
        .sum();
    EvaluationReport {
        q,
        win_count,
        win_probability: Fraction::new(win_count as u128, q as u128 * q as u128),
        elapsed: start.elapsed(),
    }
}

/// Both players always answer 0.
pub fn trivial_strategy(q: PrimeModulus) -> DeterministicStrategy {
    DeterministicStrategy::from_fns(q, |_| FieldElement::ZERO, |_| FieldElement::ZERO)
}

/// `1/sqrt(q) + 1/q - 1/(q sqrt(q))`, the known upper bound on the quantum value.
/// Defined for any `q >= 1`.
pub fn quantum_upper_bound(q: u64) -> f64 {
    assert!(q >= 1, "quantum bound needs q >= 1");
    let q = q as f64;
    let r = q.sqrt();
    1.0 / r + 1.0 / q - 1.0 / (q * r)
}

/// The `q^{-2/3} / 22` guarantee of the explicit construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalGuarantee {
    pub q: u64,
    pub prime: bool,
    pub p1: u64,
    /// The guarantee is only claimed for `p1 > 30`; otherwise it is advisory.
    pub p1_gt_30: bool,
    /// `floor(q^{4/3} / 22)`, i.e. the largest `F` with `(22 F)^3 <= q^4`.
    pub win_count_floor: u64,
    /// `q^{-2/3} / 22`.
    pub probability: f64,
}

pub fn classical_guarantee(q: u64) -> ClassicalGuarantee {
    let p1 = 2 * (icbrt(q) / 2);
    let floor = (BigUint::from(q).pow(4u32).cbrt() / 22u32)
        .to_u64()
        .expect("q^{4/3}/22 fits in u64 for q < 2^62");
    ClassicalGuarantee {
        q,
        prime: is_prime(q),
        p1,
        p1_gt_30: p1 > 30,
        win_count_floor: floor,
        probability: (q as f64).powf(-2.0 / 3.0) / 22.0,
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn naive_wins(s: &DeterministicStrategy) -> u64 {
        let q = s.modulus();
        let mut n = 0;
        for x in q.elements() {
            for y in q.elements() {
                n += wins(x, y, s.alice(x), s.bob(y), q) as u64;
            }
        }
        n
    }

    #[test]
    fn wins_examples() {
        let q = fp(101);
        let e = |v| q.element(v);
        assert!(wins(e(0), e(5), e(0), e(0), q));
        assert!(wins(e(23), e(46), e(93), e(56), q));
        assert!(!wins(e(1), e(1), e(0), e(0), q));
    }

    #[test]
    fn trivial_strategy_wins_2q_minus_1() {
        for p in [2, 3, 5, 7, 11, 101, 1499] {
            let r = evaluate(&trivial_strategy(fp(p)));
            assert_eq!(r.win_count, 2 * p - 1);
        }
        assert_eq!(trivial_strategy(fp(2)).alice_table(), &[FieldElement::ZERO; 2]);
    }

    #[test]
    fn binary_all_zero_is_three_quarters() {
        let r = evaluate(&trivial_strategy(fp(2)));
        assert_eq!(r.win_count, 3);
        assert_eq!(r.win_probability, Fraction::new(3, 4));
    }

    #[test]
    fn quantum_bound_values() {
        assert!((quantum_upper_bound(2) - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-12);
        assert!((quantum_upper_bound(2) - 0.853_553_390_593).abs() < 1e-9);
        assert_eq!(quantum_upper_bound(4), 0.625);
        assert_eq!(quantum_upper_bound(1), 1.0);
    }

    #[test]
    fn guarantee_floor_is_exact() {
        let g = classical_guarantee(40009);
        assert!(g.p1_gt_30 && g.prime);
        let f = g.win_count_floor as u128;
        let p4 = 40009u128.pow(4);
        assert!((22 * f).pow(3) <= p4 && (22 * (f + 1)).pow(3) > p4);
        assert_eq!(g.win_count_floor, 62199);
        assert!((g.probability - 3.886e-5).abs() < 1e-7);

        let small = classical_guarantee(8);
        assert!(!small.p1_gt_30 && !small.prime);
    }

    #[test]
    fn strategy_document_validation() {
        let s = DeterministicStrategy::from_json(r#"{"q":3,"alice":[0,1,2],"bob":[2,2,0]}"#).unwrap();
        assert_eq!(s.bob(fp(3).element(0)).value(), 2);
        assert_eq!(DeterministicStrategy::from_json(&s.to_json()).unwrap(), s);
        for bad in [
            r#"{"q":4,"alice":[0,0,0,0],"bob":[0,0,0,0]}"#,
            r#"{"q":3,"alice":[0,1],"bob":[0,0,0]}"#,
            r#"{"q":3,"alice":[0,1,3],"bob":[0,0,0]}"#,
            r#"{"q":3,"alice":[0,1,2]"#,
        ] {
            assert!(matches!(DeterministicStrategy::from_json(bad), Err(Error::Document(_))), "{bad}");
        }
    }

    #[test]
    fn report_roundtrips() {
        let r = evaluate(&trivial_strategy(fp(101)));
        let back: EvaluationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back.win_count, 201);
        assert_eq!(back.win_probability, r.win_probability);
    }

    fn random_strategy() -> impl Strategy<Value = DeterministicStrategy> {
        prop::sample::select(vec![2u64, 3, 5, 7, 13, 31, 101]).prop_flat_map(|p| {
            let t = prop::collection::vec(0..p, p as usize);
            (t.clone(), t).prop_map(move |(a, b)| {
                let q = fp(p);
                DeterministicStrategy::new(
                    q,
                    a.into_iter().map(|v| q.element(v)).collect(),
                    b.into_iter().map(|v| q.element(v)).collect(),
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn evaluate_matches_naive_double_loop(s in random_strategy()) {
            let r = evaluate(&s);
            prop_assert_eq!(r.win_count, naive_wins(&s));
            let q = s.modulus().get();
            prop_assert!(r.win_count <= q * q);
        }

        #[test]
        fn partitions_of_x_sum_to_total(s in random_strategy(), cuts in prop::collection::vec(any::<prop::sample::Index>(), 0..4)) {
            let q = s.modulus().get();
            let mut bounds: Vec<u64> = cuts.iter().map(|c| c.index(q as usize + 1) as u64).collect();
            bounds.extend([0, q]);
            bounds.sort_unstable();
            let total: u64 = bounds.windows(2).map(|w| count_wins_in(&s, w[0]..w[1], 0..q)).sum();
            prop_assert_eq!(total, evaluate(&s).win_count);
        }
    }
}
