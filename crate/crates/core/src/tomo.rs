//! The inverse problem: all multisets with a prescribed power sum
//! polynomial form a coset of the ghost subgroup.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ghost::{is_ghost, GhostReport, ImageSystem};
use crate::msets::{phi, PointMultiset};
use crate::plane::Plane;
use crate::poly::HomPoly;

/// particular ⊎ span(kernel_basis), or no solution at all.
#[derive(Clone, Debug)]
pub struct SolutionCoset {
    pub field: Arc<FieldSpec>,
    pub particular: Option<PointMultiset>,
    pub kernel_basis: Vec<PointMultiset>,
    pub exponent: usize,
}

impl SolutionCoset {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }

    /// p^exponent, or 0 when inconsistent; `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        if self.particular.is_none() {
            return Some(0);
        }
        let e = u32::try_from(self.exponent).ok()?;
        (self.field.characteristic() as u128).checked_pow(e)
    }

    pub fn contains(&self, set: &PointMultiset) -> bool {
        match &self.particular {
            Some(x) if x.field() == set.field() => set.msum(&x.minverse()).map(|d| is_ghost(&d)).unwrap_or(false),
            _ => false,
        }
    }

    /// particular ⊎ Σ coeffs[k]·kernel_basis[k].
    pub fn member(&self, coeffs: &[u32]) -> Result<PointMultiset> {
        let base = self
            .particular
            .clone()
            .ok_or_else(|| Error::Domain("the coset is empty".into()))?;
        if coeffs.len() != self.kernel_basis.len() {
            return Err(Error::Domain(format!(
                "{} coefficients for {} kernel vectors",
                coeffs.len(),
                self.kernel_basis.len()
            )));
        }
        coeffs
            .iter()
            .zip(&self.kernel_basis)
            .try_fold(base, |acc, (&c, k)| acc.msum(&k.scale(c)))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.particular {
            None => out.push_str("# inconsistent: no multiset has this power sum polynomial\n"),
            Some(x) => {
                out.push_str(&format!(
                    "# solution coset: {}^{} multisets\n# particular\n",
                    self.field.characteristic(),
                    self.exponent
                ));
                out.push_str(&x.to_text());
            }
        }
        for (k, g) in self.kernel_basis.iter().enumerate() {
            out.push_str(&format!("\n# ghost {k}\n"));
            out.push_str(&g.to_text());
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "field": self.field.to_string(),
            "consistent": self.is_consistent(),
            "exponent": self.exponent,
            "particular": self.particular.as_ref().map(PointMultiset::to_text),
            "kernel_basis": self.kernel_basis.iter().map(PointMultiset::to_text).collect::<Vec<_>>(),
        })
    }
}

/// Image matrix and kernel for one field, reusable across many targets.
#[derive(Debug)]
pub struct Solver {
    system: ImageSystem,
    report: GhostReport,
}

impl Solver {
    pub fn new(field: Arc<FieldSpec>) -> Result<Solver> {
        let system = ImageSystem::new(Arc::new(Plane::new(field)));
        let report = GhostReport::from_system(&system)?;
        Ok(Solver { system, report })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.system.field()
    }

    pub fn report(&self) -> &GhostReport {
        &self.report
    }

    pub fn system(&self) -> &ImageSystem {
        &self.system
    }

    pub fn solve(&self, g: &HomPoly) -> Result<SolutionCoset> {
        let target = self.system.target(g)?;
        let field = self.field().clone();
        let particular = self
            .system
            .matrix()
            .solve_particular(&target)?
            .map(|x| PointMultiset::from_mults(field.clone(), x))
            .transpose()?;
        Ok(SolutionCoset {
            field,
            particular,
            kernel_basis: self.report.kernel_basis.clone(),
            exponent: self.report.exponent,
        })
    }

    /// Plain sets S with φ(S) = G in canonical order, at most `limit`.
    /// Exhaustive over all subsets for q <= 3, otherwise a coset walk.
    pub fn set_solutions(&self, g: &HomPoly, limit: usize) -> Result<SetEnumeration> {
        if limit == 0 {
            return Err(Error::Domain("limit must be positive".into()));
        }
        if self.field().order() <= 3 {
            let mut e = self.brute_force_sets(g)?;
            e.solutions.truncate(limit);
            return Ok(e);
        }
        self.coset_walk_sets(g, limit, DEFAULT_WALK_STEPS)
    }

    /// Tests every subset of the plane; only feasible for tiny q.
    pub fn brute_force_sets(&self, g: &HomPoly) -> Result<SetEnumeration> {
        let n = self.system.plane().size();
        if n > 24 {
            return Err(Error::Domain(format!("2^{n} subsets is too many to enumerate")));
        }
        let target = self.system.target(g)?;
        let field = self.field().clone();
        let mut solutions = Vec::new();
        let mut mults = vec![0u32; n];
        for mask in 0u64..(1u64 << n) {
            for (k, m) in mults.iter_mut().enumerate() {
                *m = ((mask >> k) & 1) as u32;
            }
            if self.system.image_vector_of(&mults) == target {
                solutions.push(PointMultiset::from_mults(field.clone(), mults.clone())?);
            }
        }
        solutions.sort();
        Ok(SetEnumeration {
            solutions,
            exhaustive: true,
            steps: 1u64 << n,
        })
    }

    /// Walks the coset in p-ary Gray-code order (each step adds one kernel
    /// vector) and keeps the 0/1 members. Stops after `limit` sets or
    /// `max_steps` steps; `exhaustive` reports whether the whole coset was
    /// visited.
    pub fn coset_walk_sets(&self, g: &HomPoly, limit: usize, max_steps: u64) -> Result<SetEnumeration> {
        if limit == 0 {
            return Err(Error::Domain("limit must be positive".into()));
        }
        let coset = self.solve(g)?;
        let Some(start) = coset.particular else {
            return Ok(SetEnumeration {
                solutions: Vec::new(),
                exhaustive: true,
                steps: 0,
            });
        };
        let p = self.field().characteristic();
        let field = self.field().clone();
        let basis: Vec<&[u32]> = coset.kernel_basis.iter().map(|k| k.mults()).collect();
        let mut current = start.mults().to_vec();
        let mut digits = vec![0u32; basis.len()];
        let mut solutions = Vec::new();
        let mut steps = 0u64;
        let mut exhaustive = false;
        loop {
            if current.iter().all(|&m| m <= 1) {
                solutions.push(PointMultiset::from_mults(field.clone(), current.clone())?);
                if solutions.len() >= limit {
                    break;
                }
            }
            // counter increment: trailing digits at p-1 roll over
            let Some(d) = digits.iter().position(|&x| x != p - 1) else {
                exhaustive = true;
                break;
            };
            if steps >= max_steps {
                break;
            }
            for x in digits.iter_mut().take(d) {
                *x = 0;
            }
            digits[d] += 1;
            for (c, &b) in current.iter_mut().zip(basis[d]) {
                *c = (*c + b) % p;
            }
            steps += 1;
        }
        solutions.sort();
        Ok(SetEnumeration {
            solutions,
            exhaustive,
            steps,
        })
    }
}

pub const DEFAULT_WALK_STEPS: u64 = 1 << 24;

#[derive(Clone, Debug)]
pub struct SetEnumeration {
    pub solutions: Vec<PointMultiset>,
    /// Every candidate was examined.
    pub exhaustive: bool,
    pub steps: u64,
}

pub fn solve(g: &HomPoly) -> Result<SolutionCoset> {
    Solver::new(g.field().clone())?.solve(g)
}

pub fn enumerate_set_solutions(g: &HomPoly, limit: usize) -> Result<Vec<PointMultiset>> {
    if limit == 0 {
        return Err(Error::Domain("limit must be positive".into()));
    }
    Ok(Solver::new(g.field().clone())?.set_solutions(g, limit)?.solutions)
}

pub fn verify_solution(set: &PointMultiset, g: &HomPoly) -> bool {
    set.field() == g.field() && phi(set) == *g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghost::line_ghost;
    use crate::plane::ProjLine;

    fn z_poly() -> HomPoly {
        let f = Arc::new(FieldSpec::new(2, 1).unwrap());
        phi(&PointMultiset::from_points(f, &[[0, 0, 1]]).unwrap())
    }

    #[test]
    fn fano_coset() {
        let g = z_poly();
        let f = g.field().clone();
        let coset = solve(&g).unwrap();
        assert_eq!(coset.size(), Some(16));
        for pts in [&[[0, 0, 1]][..], &[[1, 0, 1], [1, 0, 0]], &[[1, 0, 0], [0, 1, 0], [1, 1, 1]]] {
            let s = PointMultiset::from_points(f.clone(), pts).unwrap();
            assert!(coset.contains(&s));
            assert!(verify_solution(&s, &g));
        }
        assert!(!verify_solution(&PointMultiset::empty(f.clone()), &g));
        let sets = enumerate_set_solutions(&g, 1000).unwrap();
        let solver = Solver::new(f).unwrap();
        let walked = solver.coset_walk_sets(&g, 1000, u64::MAX).unwrap();
        assert!(walked.exhaustive);
        assert_eq!(walked.solutions, sets);
        assert!(sets.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn zero_target() {
        let f = Arc::new(FieldSpec::new(3, 1).unwrap());
        let coset = solve(&HomPoly::zero(f.clone())).unwrap();
        assert!(coset.particular.as_ref().unwrap().is_empty());
        assert_eq!(coset.exponent, 7);
        let plane = Plane::new(f.clone());
        let line = line_ghost(&plane, &ProjLine::from_values(&f, [1, 2, 0]).unwrap()).unwrap();
        assert!(verify_solution(&line, &HomPoly::zero(f.clone())));
        assert!(coset.contains(&line));
        let m = coset.member(&[1, 2, 0, 0, 1, 0, 2]).unwrap();
        assert!(is_ghost(&m));
    }

    #[test]
    fn limit_zero_rejected() {
        assert!(matches!(enumerate_set_solutions(&z_poly(), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn walk_respects_limit() {
        let f = Arc::new(FieldSpec::new(5, 1).unwrap());
        let s = PointMultiset::from_points(f.clone(), &[[1, 2, 3], [0, 1, 4]]).unwrap();
        let solver = Solver::new(f).unwrap();
        let e = solver.coset_walk_sets(&phi(&s), 3, 10_000).unwrap();
        assert!(e.solutions.len() <= 3);
        assert!(e.solutions.iter().all(|x| x.is_plain() && verify_solution(x, &phi(&s))));
    }
}
