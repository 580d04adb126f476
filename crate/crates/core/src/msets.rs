//! The abelian p-group of point multisets with multiplicities mod p.

use std::fmt;
use std::sync::Arc;

use crate::error::{parse_err, Error, Result};
use crate::field::FieldSpec;
use crate::plane::{index_of, plane_size, triple_at, ProjPoint};
use crate::poly::{check_header_field, header_field, power_sum, HomPoly};

/// Dense multiplicity vector over the canonical point enumeration, entries
/// in 0..p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointMultiset {
    field: Arc<FieldSpec>,
    mult: Vec<u32>,
}

impl PartialOrd for PointMultiset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PointMultiset {
    /// Lexicographic on multiplicity vectors.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.mult.cmp(&other.mult)
    }
}

impl PointMultiset {
    pub fn empty(field: Arc<FieldSpec>) -> Self {
        let n = plane_size(field.order());
        PointMultiset {
            field,
            mult: vec![0; n],
        }
    }

    /// The whole plane, every point once.
    pub fn full(field: Arc<FieldSpec>) -> Self {
        let n = plane_size(field.order());
        PointMultiset {
            field,
            mult: vec![1; n],
        }
    }

    /// Multiplicities are reduced mod p.
    pub fn from_mults(field: Arc<FieldSpec>, mult: Vec<u32>) -> Result<Self> {
        if mult.len() != plane_size(field.order()) {
            return Err(Error::Domain(format!(
                "expected {} multiplicities, got {}",
                plane_size(field.order()),
                mult.len()
            )));
        }
        let p = field.characteristic();
        let mult = mult.into_iter().map(|m| m % p).collect();
        Ok(PointMultiset { field, mult })
    }

    /// Plain set from integer-encoded coordinate triples (normalized here).
    /// Repeated points add up mod p.
    pub fn from_points(field: Arc<FieldSpec>, points: &[[u32; 3]]) -> Result<Self> {
        let mut s = PointMultiset::empty(field);
        for v in points {
            let pt = ProjPoint::from_values(&s.field, *v)?;
            s.add_point(&pt, 1);
        }
        Ok(s)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn mults(&self) -> &[u32] {
        &self.mult
    }

    pub fn get(&self, point: &ProjPoint) -> u32 {
        self.mult[index_of(self.field.order(), &point.coords())]
    }

    pub fn get_index(&self, idx: usize) -> u32 {
        self.mult[idx]
    }

    pub fn set(&mut self, point: &ProjPoint, m: u32) {
        let idx = index_of(self.field.order(), &point.coords());
        self.mult[idx] = m % self.field.characteristic();
    }

    pub fn set_index(&mut self, idx: usize, m: u32) {
        self.mult[idx] = m % self.field.characteristic();
    }

    pub fn add_point(&mut self, point: &ProjPoint, m: u32) {
        let idx = index_of(self.field.order(), &point.coords());
        let p = self.field.characteristic();
        self.mult[idx] = (self.mult[idx] + m % p) % p;
    }

    /// `(index, multiplicity)` for points with nonzero multiplicity.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .map(|(i, &m)| (i, m))
    }

    pub fn points(&self) -> impl Iterator<Item = (ProjPoint, u32)> + '_ {
        let q = self.field.order();
        self.support().map(move |(i, m)| {
            (
                ProjPoint::new(&self.field, triple_at(q, i)).expect("canonical triple"),
                m,
            )
        })
    }

    /// Total multiplicity |S| as an integer.
    pub fn total(&self) -> u64 {
        self.mult.iter().map(|&m| m as u64).sum()
    }

    /// |S| mod p.
    pub fn total_mod_p(&self) -> u32 {
        (self.total() % self.field.characteristic() as u64) as u32
    }

    pub fn is_empty(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    /// True when every multiplicity is 0 or 1.
    pub fn is_plain(&self) -> bool {
        self.mult.iter().all(|&m| m <= 1)
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    /// Multiset sum mod p.
    pub fn msum(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        let p = self.field.characteristic();
        let mult = self
            .mult
            .iter()
            .zip(&other.mult)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Ok(PointMultiset {
            field: self.field.clone(),
            mult,
        })
    }

    /// Group inverse: each multiplicity m becomes p - m (mod p).
    pub fn minverse(&self) -> Self {
        let p = self.field.characteristic();
        PointMultiset {
            field: self.field.clone(),
            mult: self.mult.iter().map(|&m| (p - m) % p).collect(),
        }
    }

    /// Complement of `self` in `outer`: multiplicities m_outer - m_self.
    /// Requires `self` to be contained in `outer`.
    pub fn complement_in(&self, outer: &Self) -> Result<Self> {
        self.check_same_field(outer)?;
        let mut mult = Vec::with_capacity(self.mult.len());
        for (idx, (&a, &b)) in self.mult.iter().zip(&outer.mult).enumerate() {
            if a > b {
                return Err(Error::Domain(format!(
                    "not contained: point {idx} has multiplicity {a} > {b}"
                )));
            }
            mult.push(b - a);
        }
        Ok(PointMultiset {
            field: self.field.clone(),
            mult,
        })
    }

    /// Scalar multiple k * S in the group (k-fold multiset sum).
    pub fn scale(&self, k: u32) -> Self {
        let p = self.field.characteristic() as u64;
        PointMultiset {
            field: self.field.clone(),
            mult: self
                .mult
                .iter()
                .map(|&m| ((m as u64 * k as u64) % p) as u32)
                .collect(),
        }
    }

    /// File form: header `# mset q=<field>` then `a b c : m` per point.
    pub fn to_text(&self) -> String {
        let mut out = format!("# mset q={}\n", self.field);
        out.push_str(&self.body_text());
        out
    }

    pub(crate) fn body_text(&self) -> String {
        let mut out = String::new();
        for (pt, m) in self.points() {
            out.push_str(&format!("{pt} : {m}\n"));
        }
        out
    }

    /// Parses the multiset file format. Points may be given unnormalized;
    /// a missing `: m` means multiplicity 1.
    pub fn parse(text: &str, field: &Arc<FieldSpec>) -> Result<Self> {
        let mut s = PointMultiset::empty(field.clone());
        let mut header = false;
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(label) = header_field(rest, "mset") {
                    check_header_field(&label, field, line_no)?;
                    header = true;
                }
                continue;
            }
            if !header {
                return Err(parse_err(line_no, "missing '# mset q=...' header"));
            }
            let (coords, m) = match line.split_once(':') {
                Some((c, m)) => (
                    c,
                    m.trim()
                        .parse::<u64>()
                        .map_err(|_| parse_err(line_no, "bad multiplicity"))?,
                ),
                None => (line, 1),
            };
            let pt = ProjPoint::parse(field, coords).map_err(|e| parse_err(line_no, e.to_string()))?;
            let p = field.characteristic();
            s.add_point(&pt, (m % p as u64) as u32);
        }
        if !header {
            return Err(parse_err(0, "missing '# mset q=...' header"));
        }
        Ok(s)
    }
}

impl fmt::Display for PointMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .points()
            .map(|(pt, m)| {
                let v = pt.values();
                if m == 1 {
                    format!("({},{},{})", v[0], v[1], v[2])
                } else {
                    format!("({},{},{}):{m}", v[0], v[1], v[2])
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The homomorphism S -> G^S.
pub fn phi(set: &PointMultiset) -> HomPoly {
    power_sum(set)
}

/// log_p of the group order, q^2 + q + 1.
pub fn group_exponent(field: &FieldSpec) -> usize {
    plane_size(field.order())
}
