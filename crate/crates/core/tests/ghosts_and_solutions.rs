use std::sync::Arc;

use proptest::prelude::*;
use psghost::ghost::{
    all_line_evaluations_zero, ghost_report, line_ghost, partial_pencil_ghost, prime_field_rank,
    punctured_pencil_ghost, vandermonde_check,
};
use psghost::tomo::{enumerate_set_solutions, verify_solution, Solver};
use psghost::{is_ghost, phi, FieldSpec, HomPoly, Plane, PointMultiset};

fn field(p: u32, h: u32) -> Arc<FieldSpec> {
    Arc::new(FieldSpec::new(p, h).unwrap())
}

fn plain_sets(f: &Arc<FieldSpec>) -> Vec<PointMultiset> {
    let n = psghost::plane::plane_size(f.order());
    (0u32..(1 << n))
        .map(|m| PointMultiset::from_mults(f.clone(), (0..n).map(|k| (m >> k) & 1).collect()).unwrap())
        .collect()
}

#[test]
fn q2_ghost_group_by_enumeration() {
    let f = field(2, 1);
    let ghosts = plain_sets(&f).into_iter().filter(is_ghost).count();
    assert_eq!(ghosts, 16);
    assert_eq!(ghost_report(f).unwrap().exponent, 4);
}

#[test]
fn q2_zero_target_sets() {
    let f = field(2, 1);
    let pl = Plane::new(f.clone());
    let sets = enumerate_set_solutions(&HomPoly::zero(f.clone()), 100).unwrap();
    assert_eq!(sets.len(), 16);
    let full = PointMultiset::full(f.clone());
    assert!(sets.contains(&PointMultiset::empty(f.clone())));
    assert!(sets.contains(&full));
    for l in pl.lines() {
        let line = line_ghost(&pl, l).unwrap();
        assert!(sets.contains(&line));
        assert!(sets.contains(&line.complement_in(&full).unwrap()));
    }
}

#[test]
fn coset_law_exhaustive_small() {
    for p in [2, 3] {
        let f = field(p, 1);
        let s = PointMultiset::from_points(f.clone(), &[[0, 0, 1], [1, 1, 0]]).unwrap();
        let g = phi(&s);
        let sols = Solver::new(f.clone()).unwrap().brute_force_sets(&g).unwrap().solutions;
        assert!(sols.contains(&s));
        for a in &sols {
            assert!(verify_solution(a, &g));
            for b in &sols {
                assert!(is_ghost(&a.msum(&b.minverse()).unwrap()));
            }
        }
    }
}

#[test]
fn brute_force_matches_coset_walk() {
    for p in [2, 3] {
        let f = field(p, 1);
        let solver = Solver::new(f.clone()).unwrap();
        for pts in [&[[0u32, 0, 1]][..], &[[1, 0, 0], [0, 1, 1]], &[]] {
            let g = phi(&PointMultiset::from_points(f.clone(), pts).unwrap());
            let brute = solver.brute_force_sets(&g).unwrap();
            let walk = solver.coset_walk_sets(&g, usize::MAX, u64::MAX).unwrap();
            assert!(walk.exhaustive);
            assert_eq!(brute.solutions, walk.solutions, "p={p} {pts:?}");
        }
    }
}

#[test]
fn constructions_over_extension_fields() {
    for (p, h) in [(2, 2), (2, 3), (3, 2)] {
        let f = field(p, h);
        let pl = Plane::new(f.clone());
        let q = f.order();
        for v in pl.points().iter().step_by(7) {
            for lambda in 0..=q / p {
                assert!(is_ghost(&partial_pencil_ghost(&pl, v, lambda).unwrap()));
                if lambda * p < q {
                    assert!(is_ghost(&punctured_pencil_ghost(&pl, v, lambda).unwrap()));
                }
            }
        }
        assert!(partial_pencil_ghost(&pl, &pl.points()[0], q / p + 1).is_err());
    }
}

#[test]
fn prime_field_ranks() {
    for p in [2u32, 3, 5, 7] {
        let r = ghost_report(field(p, 1)).unwrap();
        assert_eq!(r.rank, prime_field_rank(p));
        assert_eq!(r.exponent, prime_field_rank(p) + 1);
        assert!(!r.is_experimental());
    }
}

fn field_and_mults() -> impl Strategy<Value = (Arc<FieldSpec>, Vec<u32>)> {
    prop::sample::select(vec![(3u32, 1u32), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]).prop_flat_map(|(p, h)| {
        let f = field(p, h);
        let n = psghost::plane::plane_size(f.order());
        (Just(f), prop::collection::vec(0..p, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ghost_characterizations_agree((f, mults) in field_and_mults()) {
        let pl = Plane::new(f.clone());
        let s = PointMultiset::from_mults(f, mults).unwrap();
        let g = is_ghost(&s);
        prop_assert_eq!(g, vandermonde_check(&pl, &s));
        prop_assert_eq!(g, all_line_evaluations_zero(&pl, &s));
    }

    #[test]
    fn solve_round_trip((f, mults) in field_and_mults()) {
        let s = PointMultiset::from_mults(f.clone(), mults).unwrap();
        let coset = Solver::new(f).unwrap().solve(&phi(&s)).unwrap();
        prop_assert!(coset.contains(&s));
        let x = coset.particular.clone().unwrap();
        prop_assert_eq!(phi(&x), phi(&s));
    }
}
