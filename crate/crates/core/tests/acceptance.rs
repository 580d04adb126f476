//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use psghost::cli::random_multiset;
use psghost::elim::{run_elimination, verify_procedure};
use psghost::ghost::{
    all_line_evaluations_zero, ghost_report, line_ghost, partial_pencil_ghost, prime_field_rank,
    punctured_pencil_ghost, vandermonde_check,
};
use psghost::plane::plane_size;
use psghost::tomo::Solver;
use psghost::{is_ghost, phi, FieldElement, FieldSpec, HomPoly, Plane, PointMultiset, ProjLine};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SEED: u64 = 20_240_501;

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn field(p: u32, h: u32) -> Arc<FieldSpec> {
    Arc::new(FieldSpec::new(p, h).expect("supported field"))
}

fn var(f: &Arc<FieldSpec>, i: u32, j: u32) -> HomPoly {
    let mut g = HomPoly::zero(f.clone());
    g.set_coeff(i, j, FieldElement::ONE).expect("valid monomial");
    g
}

fn plain_sets(f: &Arc<FieldSpec>) -> impl Iterator<Item = PointMultiset> + '_ {
    let n = plane_size(f.order());
    (0u32..(1 << n)).map(move |m| {
        PointMultiset::from_mults(f.clone(), (0..n).map(|k| (m >> k) & 1).collect()).expect("0/1 multiplicities")
    })
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    o.detail = format!("{} [{:.3?}, limit {:?}]", o.detail, took, limit);
    o.passed &= took < limit;
    o
}

fn fano() -> Outcome {
    let f = field(2, 1);
    let z = var(&f, 1, 0);
    let sets: [&[[u32; 3]]; 3] = [&[[0, 0, 1]], &[[1, 0, 1], [1, 0, 0]], &[[1, 0, 0], [0, 1, 0], [1, 1, 1]]];
    let ok = sets
        .iter()
        .filter(|pts| phi(&PointMultiset::from_points(f.clone(), pts).expect("points")) == z)
        .count();
    outcome(ok == 3, format!("{ok}/3 sets give Z"))
}

fn union_counterexample() -> Outcome {
    let f = field(2, 1);
    let pl = Plane::new(f.clone());
    let five = PointMultiset::from_points(f.clone(), &[[0, 1, 0], [0, 0, 1], [0, 1, 1], [1, 0, 0], [1, 1, 0]])
        .expect("points");
    let g = phi(&five);
    let x0 = line_ghost(&pl, &ProjLine::from_values(&f, [1, 0, 0]).expect("line")).expect("ghost");
    let z0 = line_ghost(&pl, &ProjLine::from_values(&f, [0, 0, 1]).expect("line")).expect("ghost");
    let lines_zero = phi(&x0).is_zero() && phi(&z0).is_zero();
    outcome(g == var(&f, 0, 1) && lines_zero, format!("union gives {g}, lines give 0: {lines_zero}"))
}

const PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

fn rank_theorem() -> Outcome {
    let expected = [3, 6, 15, 28, 66, 91];
    let got: Vec<usize> = PRIMES
        .iter()
        .map(|&p| ghost_report(field(p, 1)).map(|r| r.rank).unwrap_or(0))
        .collect();
    outcome(got == expected, format!("ranks {got:?}"))
}

fn ghost_count() -> Outcome {
    let exps: Vec<usize> = PRIMES
        .iter()
        .map(|&p| ghost_report(field(p, 1)).map(|r| r.exponent).unwrap_or(0))
        .collect();
    let want: Vec<usize> = PRIMES.iter().map(|&p| prime_field_rank(p) + 1).collect();
    let f = field(2, 1);
    let ghosts = plain_sets(&f).filter(is_ghost).count();
    outcome(
        exps == want && ghosts == 16,
        format!("exponents {exps:?}; {ghosts} ghosts among 128 sets at q=2"),
    )
}

fn elimination_replay() -> Outcome {
    let states = match run_elimination(7) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut cells = 0;
    for (n, s) in states.iter().enumerate() {
        match common::compare(s, &common::fixture(n)) {
            Ok(c) => cells += c,
            Err(e) => return outcome(false, e),
        }
    }
    outcome(states.len() == 6, format!("{} states, {cells} printed cells equal", states.len()))
}

fn closed_forms() -> Outcome {
    let mut notes = Vec::new();
    let mut all = true;
    for p in [3, 5, 7, 11, 13] {
        let start = Instant::now();
        match verify_procedure(p) {
            Ok(r) => {
                let took = start.elapsed();
                let ok = r.passed() && (p != 13 || took < Duration::from_secs(60));
                all &= ok;
                notes.push(format!(
                    "p={p}: {} cells, {} divisibility, {} mismatches ({took:.2?})",
                    r.closed_form_cells,
                    r.divisibility_checks,
                    r.discrepancies.len()
                ));
                for d in r.discrepancies.iter().take(3) {
                    notes.push(format!("  {d}"));
                }
            }
            Err(e) => {
                all = false;
                notes.push(format!("p={p}: {e}"));
            }
        }
    }
    outcome(all, notes.join("; "))
}

fn characterization() -> Outcome {
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    let mut ghosts_seen = 0usize;
    let mut test = |pl: &Plane, s: &PointMultiset| {
        let g = is_ghost(s);
        checked += 1;
        ghosts_seen += usize::from(g);
        if g != vandermonde_check(pl, s) || g != all_line_evaluations_zero(pl, s) {
            mismatches += 1;
        }
    };
    for p in [2, 3] {
        let f = field(p, 1);
        let pl = Plane::new(f.clone());
        for s in plain_sets(&f) {
            test(&pl, &s);
        }
    }
    // Half uniform multisets, half random kernel combinations (uniform
    // multisets are almost never ghosts).
    let mut rng = StdRng::seed_from_u64(SEED);
    for (p, h) in [(5, 1), (7, 1), (2, 3), (3, 2)] {
        let f = field(p, h);
        let pl = Plane::new(f.clone());
        let basis = match Solver::new(f.clone()) {
            Ok(s) => s.report().kernel_basis.clone(),
            Err(e) => return outcome(false, e.to_string()),
        };
        for k in 0..10_000 {
            let s = if k % 2 == 0 {
                random_multiset(&f, &mut rng)
            } else {
                basis.iter().fold(PointMultiset::empty(f.clone()), |acc, b| {
                    acc.msum(&b.scale(rng.gen_range(0..p))).expect("same field")
                })
            };
            test(&pl, &s);
        }
    }
    outcome(
        mismatches == 0,
        format!("{checked} multisets ({ghosts_seen} ghosts), {mismatches} mismatches"),
    )
}

fn constructors() -> Outcome {
    let mut total = 0usize;
    let mut failures = Vec::new();
    for (p, h) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
        let f = field(p, h);
        let q = f.order();
        let pl = Plane::new(f.clone());
        let full = PointMultiset::full(f.clone());
        let mut sets = Vec::new();
        for l in pl.lines() {
            sets.push(("line", line_ghost(&pl, l)));
        }
        for v in pl.points() {
            for lambda in 0..=q / p {
                sets.push(("partial pencil", partial_pencil_ghost(&pl, v, lambda)));
                if lambda * p < q {
                    sets.push(("punctured pencil", punctured_pencil_ghost(&pl, v, lambda)));
                }
            }
        }
        for (name, s) in sets {
            let s = match s {
                Ok(s) => s,
                Err(e) => {
                    failures.push(format!("q={q} {name}: {e}"));
                    continue;
                }
            };
            let comp = s.complement_in(&full).expect("plain subset");
            total += 2;
            if !is_ghost(&s) {
                failures.push(format!("q={q} {name}"));
            }
            if !is_ghost(&comp) {
                failures.push(format!("q={q} complement of {name}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{total} sets and complements, {} failures {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()),
    )
}

fn round_trip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED ^ 9);
    let mut failures = 0usize;
    for p in [2, 3, 5, 7] {
        let f = field(p, 1);
        let solver = match Solver::new(f.clone()) {
            Ok(s) => s,
            Err(e) => return outcome(false, e.to_string()),
        };
        for _ in 0..1000 {
            let s = random_multiset(&f, &mut rng);
            let g = phi(&s);
            let Ok(coset) = solver.solve(&g) else {
                failures += 1;
                continue;
            };
            let mut draw = || -> Vec<u32> { (0..coset.kernel_basis.len()).map(|_| rng.gen_range(0..p)).collect() };
            let (a, b) = (coset.member(&draw()), coset.member(&draw()));
            let ok = match (a, b) {
                (Ok(a), Ok(b)) => {
                    coset.contains(&s)
                        && phi(&a) == g
                        && phi(&b) == g
                        && is_ghost(&a.msum(&b.minverse()).expect("same field"))
                }
                _ => false,
            };
            failures += usize::from(!ok);
        }
    }
    let f = field(2, 1);
    let solver = Solver::new(f.clone()).expect("GF(2)");
    let z = var(&f, 1, 0);
    let brute = solver.brute_force_sets(&z).map(|e| e.solutions.len()).unwrap_or(0);
    let walk = solver
        .coset_walk_sets(&z, usize::MAX, u64::MAX)
        .map(|e| if e.exhaustive { e.solutions.len() } else { 0 })
        .unwrap_or(usize::MAX);
    outcome(
        failures == 0 && brute == walk && brute > 0,
        format!("4000 round trips, {failures} failures; G=Z at q=2: brute force {brute}, coset filter {walk}"),
    )
}

fn extension_fields() -> Outcome {
    let mut notes = Vec::new();
    let mut all = true;
    for (p, h) in [(2, 2), (2, 3), (3, 2)] {
        let f = field(p, h);
        let q = f.order() as usize;
        let n = q * q + q + 1;
        match ghost_report(f) {
            Ok(r) => {
                let bound = n.min(h as usize * q * (q + 1) / 2);
                let ok = r.rank > 0
                    && r.rank <= bound
                    && r.exponent == n - r.rank
                    && r.kernel_basis.len() == r.exponent
                    && r.kernel_basis.iter().all(is_ghost)
                    && r.is_experimental();
                all &= ok;
                notes.push(format!("q={q}: d={} (bound {bound}), exponent {}", r.rank, r.exponent));
            }
            Err(e) => {
                all = false;
                notes.push(format!("q={q}: {e}"));
            }
        }
    }
    outcome(all, format!("experimental: {}", notes.join("; ")))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("Fano reproduction", Box::new(|| timed(Duration::from_millis(1), fano))),
        ("set-union counterexample", Box::new(|| timed(Duration::from_millis(1), union_counterexample))),
        ("rank theorem", Box::new(|| timed(Duration::from_secs(5), rank_theorem))),
        ("ghost-count theorem", Box::new(ghost_count)),
        ("elimination replay at p=7", Box::new(|| timed(Duration::from_secs(1), elimination_replay))),
        ("closed forms vs elimination", Box::new(closed_forms)),
        ("ghost characterization equivalence", Box::new(characterization)),
        ("constructor theorems", Box::new(constructors)),
        ("inverse-problem round trip", Box::new(round_trip)),
        ("extension fields", Box::new(extension_fields)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", k + 1, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
