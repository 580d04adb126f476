//! Ghosts: multisets whose power sum polynomial vanishes identically.
//!
//! They form the kernel of S -> G^S. This module builds the point-image
//! matrix (row k = coefficients of G^{P_k}, expanded to F_p coordinates),
//! counts ghosts through its rank, and provides the geometric ghost
//! constructions (lines, partial pencils, punctured pencils).

use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{expand_fq_to_fp, FpMatrix};
use crate::msets::{phi, PointMultiset};
use crate::plane::{Plane, ProjLine, ProjPoint};
use crate::poly::{point_image, HomPoly};

pub fn is_ghost(set: &PointMultiset) -> bool {
    phi(set).is_zero()
}

/// True iff G^S vanishes at the Plücker coordinates of every line.
pub fn all_line_evaluations_zero(plane: &Plane, set: &PointMultiset) -> bool {
    let g = phi(set);
    plane.lines().iter().all(|l| g.evaluate(l).is_zero())
}

/// Multiplicity-weighted |S ∩ ℓ| mod p for every line, in line order.
pub fn line_intersections_mod_p(plane: &Plane, set: &PointMultiset) -> Vec<u32> {
    let p = plane.field().characteristic() as u64;
    (0..plane.size())
        .map(|l| {
            let m: u64 = plane
                .line_point_indices(l)
                .iter()
                .map(|&i| set.get_index(i) as u64)
                .sum();
            (m % p) as u32
        })
        .collect()
}

/// Generalized Vandermonde test: some r mod p with |S ∩ ℓ| ≡ r for every
/// line ℓ and |S| ≡ r.
pub fn vandermonde_check(plane: &Plane, set: &PointMultiset) -> bool {
    let counts = line_intersections_mod_p(plane, set);
    let r = set.total_mod_p();
    counts.iter().all(|&c| c == r)
}

fn checked_ghost(set: PointMultiset, what: &str) -> Result<PointMultiset> {
    if is_ghost(&set) {
        Ok(set)
    } else {
        Err(Error::Integrity(format!("{what} is not a ghost")))
    }
}

fn union_of_lines(plane: &Plane, lines: &[usize]) -> PointMultiset {
    let mut s = PointMultiset::empty(plane.field().clone());
    for &l in lines {
        for &i in plane.line_point_indices(l) {
            s.set_index(i, 1);
        }
    }
    s
}

/// The q+1 points of a line, each once.
pub fn line_ghost(plane: &Plane, line: &ProjLine) -> Result<PointMultiset> {
    let s = union_of_lines(plane, &[plane.line_index(line)]);
    checked_ghost(s, "line")
}

/// Point-set union of the first λp+1 lines through `vertex` (canonical line
/// order), for 0 ≤ λ ≤ p^(h-1).
pub fn partial_pencil_ghost(plane: &Plane, vertex: &ProjPoint, lambda: u32) -> Result<PointMultiset> {
    let f = plane.field();
    let (p, h, q) = (f.characteristic(), f.degree(), f.order());
    let max = p.pow(h - 1);
    if lambda > max {
        return Err(Error::Domain(format!(
            "partial pencil needs 0 <= lambda <= {max}, got {lambda}"
        )));
    }
    let count = (lambda * p + 1) as usize;
    debug_assert!(count <= q as usize + 1);
    let pencil = plane.pencil_line_indices(plane.point_index(vertex));
    let s = union_of_lines(plane, &pencil[..count]);
    checked_ghost(s, "partial pencil")
}

/// The first q-λp lines through `vertex`, with `vertex` removed. Requires
/// 1 ≤ q-λp (so λ ≤ (q-1)/p); q-λp never exceeds q+1 since λ ≥ 0.
pub fn punctured_pencil_ghost(plane: &Plane, vertex: &ProjPoint, lambda: u32) -> Result<PointMultiset> {
    let f = plane.field();
    let (p, q) = (f.characteristic() as u64, f.order() as u64);
    if lambda as u64 * p >= q {
        return Err(Error::Domain(format!(
            "punctured pencil needs q - lambda p >= 1, got lambda = {lambda}"
        )));
    }
    let count = (q - lambda as u64 * p) as usize;
    let vi = plane.point_index(vertex);
    let pencil = plane.pencil_line_indices(vi);
    let mut s = union_of_lines(plane, &pencil[..count]);
    s.set_index(vi, 0);
    checked_ghost(s, "punctured pencil")
}

/// The plane and its point-image matrix over F_p: row k holds the F_p
/// coordinates of G^{P_k}, so `x M` is the expanded image of the multiset x.
#[derive(Debug)]
pub struct ImageSystem {
    plane: Arc<Plane>,
    matrix: FpMatrix,
}

impl ImageSystem {
    pub fn new(plane: Arc<Plane>) -> Self {
        let field = plane.field().clone();
        let rows: Vec<Vec<_>> = plane
            .points()
            .iter()
            .map(|pt| point_image(&field, pt).coeffs().to_vec())
            .collect();
        let matrix = expand_fq_to_fp(&field, &rows).expect("rows share one length");
        ImageSystem { plane, matrix }
    }

    pub fn plane(&self) -> &Arc<Plane> {
        &self.plane
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.plane.field()
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    /// The F_p coordinate vector of a polynomial, matching matrix columns.
    pub fn target(&self, g: &HomPoly) -> Result<Vec<u32>> {
        if g.field() != self.field() {
            return Err(Error::FieldMismatch(g.field().to_string(), self.field().to_string()));
        }
        let f = self.field();
        Ok(g.coeffs().iter().flat_map(|&c| f.coords(c)).collect())
    }

    /// The image of a multiset computed through the matrix.
    pub fn image_vector(&self, set: &PointMultiset) -> Vec<u32> {
        self.matrix.left_mul(set.mults())
    }

    pub fn image_vector_of(&self, mults: &[u32]) -> Vec<u32> {
        self.matrix.left_mul(mults)
    }
}

/// Rank of S -> G^S over F_p and the resulting ghost subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostReport {
    pub q: u32,
    pub p: u32,
    pub h: u32,
    /// F_p-dimension of the image.
    pub rank: usize,
    /// log_p of the number of ghosts: q^2+q+1 - rank.
    pub exponent: usize,
    pub kernel_basis: Vec<PointMultiset>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    q: u32,
    p: u32,
    h: u32,
    rank: usize,
    exponent: usize,
    ghost_count: Option<String>,
    experimental: bool,
    note: &'a str,
    kernel_basis: Vec<String>,
}

impl GhostReport {
    pub fn from_system(system: &ImageSystem) -> Result<Self> {
        let field = system.field().clone();
        let m = system.matrix();
        let rank = m.rank();
        let kernel = m.kernel_basis();
        let exponent = m.rows() - rank;
        if kernel.len() != exponent {
            return Err(Error::Integrity(format!(
                "kernel has {} vectors but rank-nullity gives {exponent}",
                kernel.len()
            )));
        }
        let kernel_basis = kernel
            .into_iter()
            .map(|v| PointMultiset::from_mults(field.clone(), v))
            .collect::<Result<Vec<_>>>()?;
        if let Some(bad) = kernel_basis.iter().position(|s| !is_ghost(s)) {
            return Err(Error::Integrity(format!("kernel vector {bad} is not a ghost")));
        }
        Ok(GhostReport {
            q: field.order(),
            p: field.characteristic(),
            h: field.degree(),
            rank,
            exponent,
            kernel_basis,
        })
    }

    /// Whether the rank has no closed form to compare against (h > 1).
    pub fn is_experimental(&self) -> bool {
        self.h > 1
    }

    /// p^exponent when it fits in 128 bits.
    pub fn ghost_count(&self) -> Option<u128> {
        let e = u32::try_from(self.exponent).ok()?;
        (self.p as u128).checked_pow(e)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let note = if self.is_experimental() {
            "computed, no literature value"
        } else {
            "prime field: rank C(p+1,2), exponent C(p+1,2)+1"
        };
        let body = ReportJson {
            q: self.q,
            p: self.p,
            h: self.h,
            rank: self.rank,
            exponent: self.exponent,
            ghost_count: self.ghost_count().map(|c| c.to_string()),
            experimental: self.is_experimental(),
            note,
            kernel_basis: self.kernel_basis.iter().map(PointMultiset::to_text).collect(),
        };
        serde_json::to_value(body).unwrap_or_else(|e| json!({ "error": e.to_string() }))
    }

    pub fn to_text(&self) -> String {
        let field = if self.h == 1 {
            format!("{}", self.p)
        } else {
            format!("{}^{}", self.p, self.h)
        };
        let mut out = format!("field: GF({field}), q = {}\n", self.q);
        out.push_str(&format!("points: {}\n", (self.q as usize).pow(2) + self.q as usize + 1));
        out.push_str(&format!("rank of phi over F_{}: {}", self.p, self.rank));
        if self.is_experimental() {
            out.push_str(" (computed, no literature value)");
        }
        out.push('\n');
        out.push_str(&format!("ghost exponent: {}\n", self.exponent));
        match self.ghost_count() {
            Some(c) => out.push_str(&format!("ghosts: {}^{} = {c}\n", self.p, self.exponent)),
            None => out.push_str(&format!("ghosts: {}^{}\n", self.p, self.exponent)),
        }
        out
    }
}

/// Builds the plane, the image matrix and the report for a field.
pub fn ghost_report(field: Arc<FieldSpec>) -> Result<GhostReport> {
    let plane = Arc::new(Plane::new(field));
    GhostReport::from_system(&ImageSystem::new(plane))
}

/// C(p+1, 2), the image dimension for a prime field.
pub fn prime_field_rank(p: u32) -> usize {
    let p = p as usize;
    p * (p + 1) / 2
}

/// Set-theoretic union of two plain sets (multiplicity 1 wherever either
/// has a point).
pub fn plain_union(a: &PointMultiset, b: &PointMultiset) -> Result<PointMultiset> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    let mult = a
        .mults()
        .iter()
        .zip(b.mults())
        .map(|(&x, &y)| u32::from(x != 0 || y != 0))
        .collect();
    PointMultiset::from_mults(a.field().clone(), mult)
}
