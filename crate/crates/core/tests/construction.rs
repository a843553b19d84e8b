mod common;

use std::collections::HashSet;

use chshq::audit::audit;
use chshq::construction::{build_grid, construct, derive_params, transform_line, transform_point, ClosedFormRules, ConstructionReport};
use chshq::game::{evaluate, trivial_strategy};
use chshq::geometry::{count_incidences, count_incidences_direct, on_line, strategy_to_geometry, validate_unambiguous};
use chshq::oracle::{optimal_classical_value, DEFAULT_CAP};
use chshq::PrimeModulus;

fn fp(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

#[test]
fn incidence_is_preserved_by_the_transformation() {
    for p in [11, 101, 1009, 1499] {
        let params = derive_params(fp(p)).unwrap();
        let (points, lines) = build_grid(&params);
        let images: Vec<_> = points[1..].iter().map(|g| transform_point(*g, &params).unwrap()).collect();
        for l in &lines {
            let image = transform_line(*l, &params).unwrap();
            for (g, t) in points[1..].iter().zip(&images) {
                assert_eq!(l.contains(*g), on_line(*t, image, params.p), "p = {p}, {g:?}, {l:?}");
            }
        }
    }
}

#[test]
fn transformed_points_have_distinct_x() {
    for p in [101, 1499, 40009] {
        let c = construct(fp(p)).unwrap();
        let xs: HashSet<_> = c.points.points().iter().map(|pt| pt.x).collect();
        assert_eq!(xs.len() as u64, c.params.points_total() - 1);
        assert_eq!(validate_unambiguous(&c.points, &c.kept_lines()).duplicate_x_count, 0);
        assert_eq!(validate_unambiguous(&c.points, &c.kept_lines()).duplicate_slope_count, 0);
    }
}

#[test]
fn closed_form_rules_match_tables() {
    for p in [11, 13, 101, 1009, 1499] {
        let c = construct(fp(p)).unwrap();
        assert_eq!(ClosedFormRules::new(c.params).strategy(), c.strategy, "p = {p}");
    }
}

#[test]
fn wins_split_into_incidences_and_fallback() {
    for p in [11, 13, 31, 101, 211, 1009] {
        let c = construct(fp(p)).unwrap();
        let incidences = count_incidences(&c.points, &c.kept_lines()).unwrap();
        assert_eq!(incidences, count_incidences_direct(&c.points, &c.kept_lines()).unwrap());
        assert_eq!(evaluate(&c.strategy).win_count, incidences + common::fallback_wins(&c), "p = {p}");
    }
}

#[test]
fn surviving_incidences_follow_the_kept_lines() {
    // each kept line carries p1 grid points; (0, 0) only sits on kept line (0, 0)
    for p in [101, 1499, 32771] {
        let c = construct(fp(p)).unwrap();
        let r = ConstructionReport::from_construction(&c).unwrap();
        assert_eq!(r.post_incidence_count, r.lines_kept * c.params.p1 - 1);
        assert!(r.win_count >= r.post_incidence_count);
        assert!(r.post_incidence_count >= r.kept_line_floor);
    }
}

#[test]
fn dedup_removes_no_more_than_the_census() {
    for p in [101, 1009, 1499, 32771] {
        let params = derive_params(fp(p)).unwrap();
        let c = construct(params.p).unwrap();
        let a = audit(&params);
        assert_eq!(a.lines_kept, c.dedup.kept.len() as u64);
        assert!(a.lines_kept >= a.lines_total - a.r_emp);
    }
}

#[test]
fn geometry_of_the_constructed_strategy_roundtrips() {
    let c = construct(fp(101)).unwrap();
    let (points, lines) = strategy_to_geometry(&c.strategy);
    assert_eq!(chshq::geometry::geometry_to_strategy(&points, &lines).unwrap(), c.strategy);
}

#[test]
fn oracle_dominates_random_strategies() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for q in [2, 3, 5, 7] {
        let m = fp(q);
        let best = optimal_classical_value(m, DEFAULT_CAP).unwrap().max_wins;
        assert!(best >= evaluate(&trivial_strategy(m)).win_count);
        for _ in 0..200 {
            let mut table = || (0..q).map(|_| m.element(rng.gen_range(0..q))).collect::<Vec<_>>();
            let s = chshq::DeterministicStrategy::new(m, table(), table()).unwrap();
            assert!(evaluate(&s).win_count <= best);
        }
    }
}
