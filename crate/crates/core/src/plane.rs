//! Points and lines of PG(2,q) in canonical form.
//!
//! A coordinate triple is normalized so that its first nonzero coordinate is 1.
//! Points (and, dually, lines) are enumerated as (0,0,1); (0,1,c) for c
//! ascending; (1,b,c) for (b,c) ascending. The position in this order is the
//! point index used by multisets and matrices everywhere else.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

pub type Triple = [FieldElement; 3];

/// Scales a nonzero triple so that its first nonzero coordinate is 1.
pub fn normalize(field: &FieldSpec, t: Triple) -> Result<Triple> {
    let lead = t
        .iter()
        .copied()
        .find(|x| !x.is_zero())
        .ok_or_else(|| Error::Domain("the zero triple is not a projective element".into()))?;
    let s = field.inv(lead)?;
    Ok(t.map(|x| field.mul(x, s)))
}

fn dot(field: &FieldSpec, a: &Triple, b: &Triple) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    for k in 0..3 {
        acc = field.add(acc, field.mul(a[k], b[k]));
    }
    acc
}

/// Canonical position of a normalized triple.
pub fn index_of(q: u32, t: &Triple) -> usize {
    let q = q as usize;
    let (a, b, c) = (t[0].value() as usize, t[1].value() as usize, t[2].value() as usize);
    if a == 0 && b == 0 {
        0
    } else if a == 0 {
        1 + c
    } else {
        1 + q + b * q + c
    }
}

/// Inverse of [`index_of`].
pub fn triple_at(q: u32, idx: usize) -> Triple {
    let qs = q as usize;
    let raw = if idx == 0 {
        [0, 0, 1]
    } else if idx <= qs {
        [0, 1, (idx - 1) as u32]
    } else {
        let r = idx - 1 - qs;
        [1, (r / qs) as u32, (r % qs) as u32]
    };
    raw.map(|v| {
        // values below q are valid encodings in any field of order q
        FieldElement::from_raw(v)
    })
}

pub fn plane_size(q: u32) -> usize {
    let q = q as usize;
    q * q + q + 1
}

macro_rules! projective_type {
    ($name:ident, $what:literal) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Triple);

        impl $name {
            /// Builds from any nonzero triple, normalizing it.
            pub fn new(field: &FieldSpec, t: Triple) -> Result<Self> {
                Ok($name(normalize(field, t)?))
            }

            /// Builds from integer encodings.
            pub fn from_values(field: &FieldSpec, v: [u32; 3]) -> Result<Self> {
                let t = [field.element(v[0])?, field.element(v[1])?, field.element(v[2])?];
                Self::new(field, t)
            }

            pub fn coords(&self) -> Triple {
                self.0
            }

            pub fn values(&self) -> [u32; 3] {
                self.0.map(|x| x.value())
            }

            /// Parses the text form `"a b c"`.
            pub fn parse(field: &FieldSpec, s: &str) -> Result<Self> {
                let parts: Vec<&str> = s.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(Error::Domain(format!(
                        concat!("a ", $what, " needs three coordinates, got '{}'"),
                        s
                    )));
                }
                let mut v = [0u32; 3];
                for (slot, part) in v.iter_mut().zip(&parts) {
                    *slot = part
                        .parse()
                        .map_err(|_| Error::Domain(format!("bad coordinate '{part}'")))?;
                }
                Self::from_values(field, v)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{} {} {}", self.0[0], self.0[1], self.0[2])
            }
        }
    };
}

projective_type!(ProjPoint, "point");
projective_type!(ProjLine, "line");

impl ProjLine {
    /// The point with the same coordinates.
    pub fn dual(&self) -> ProjPoint {
        ProjPoint(self.0)
    }
}

impl ProjPoint {
    /// The line with the same (Plücker) coordinates.
    pub fn dual(&self) -> ProjLine {
        ProjLine(self.0)
    }
}

pub fn enumerate_points(field: &FieldSpec) -> Vec<ProjPoint> {
    (0..plane_size(field.order()))
        .map(|i| ProjPoint(triple_at(field.order(), i)))
        .collect()
}

pub fn enumerate_lines(field: &FieldSpec) -> Vec<ProjLine> {
    enumerate_points(field).iter().map(ProjPoint::dual).collect()
}

pub fn incident(field: &FieldSpec, point: &ProjPoint, line: &ProjLine) -> bool {
    dot(field, &point.0, &line.0).is_zero()
}

/// PG(2,q) with its incidence structure precomputed.
#[derive(Debug)]
pub struct Plane {
    field: Arc<FieldSpec>,
    points: Vec<ProjPoint>,
    lines: Vec<ProjLine>,
    line_points: Vec<Vec<usize>>,
    point_lines: Vec<Vec<usize>>,
}

impl Plane {
    pub fn new(field: Arc<FieldSpec>) -> Self {
        let points = enumerate_points(&field);
        let lines = enumerate_lines(&field);
        let mut line_points = vec![Vec::with_capacity(field.order() as usize + 1); lines.len()];
        let mut point_lines = vec![Vec::with_capacity(field.order() as usize + 1); points.len()];
        for (li, line) in lines.iter().enumerate() {
            for (pi, point) in points.iter().enumerate() {
                if incident(&field, point, line) {
                    line_points[li].push(pi);
                    point_lines[pi].push(li);
                }
            }
        }
        Plane {
            field,
            points,
            lines,
            line_points,
            point_lines,
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    /// Number of points (= number of lines), q^2 + q + 1.
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn point_index(&self, point: &ProjPoint) -> usize {
        index_of(self.order(), &point.0)
    }

    pub fn line_index(&self, line: &ProjLine) -> usize {
        index_of(self.order(), &line.0)
    }

    /// Indices of the q+1 points on the line with index `line`, ascending.
    pub fn line_point_indices(&self, line: usize) -> &[usize] {
        &self.line_points[line]
    }

    /// Indices of the q+1 lines through the point with index `point`, ascending.
    pub fn pencil_line_indices(&self, point: usize) -> &[usize] {
        &self.point_lines[point]
    }

    pub fn line_points(&self, line: &ProjLine) -> Vec<ProjPoint> {
        self.line_points[self.line_index(line)]
            .iter()
            .map(|&i| self.points[i])
            .collect()
    }

    pub fn pencil_lines(&self, point: &ProjPoint) -> Vec<ProjLine> {
        self.point_lines[self.point_index(point)]
            .iter()
            .map(|&i| self.lines[i])
            .collect()
    }

    pub fn incident(&self, point: &ProjPoint, line: &ProjLine) -> bool {
        incident(&self.field, point, line)
    }
}
