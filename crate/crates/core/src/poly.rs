//! Homogeneous polynomials of degree q-1 in X, Y, Z over GF(q), Rédei
//! factors and power sum polynomials.
//!
//! The monomial X^(q-1-i-j) Y^j Z^i is addressed by `(i, j)`; coefficient
//! vectors list monomials in ascending `(i, j)` order.

use std::fmt;
use std::sync::Arc;

use crate::error::{parse_err, Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::msets::PointMultiset;
use crate::plane::{normalize, triple_at, ProjLine, ProjPoint, Triple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialIndex {
    /// Exponent of Z.
    pub i: u32,
    /// Exponent of Y.
    pub j: u32,
}

impl MonomialIndex {
    pub fn x_exponent(&self, q: u32) -> u32 {
        q - 1 - self.i - self.j
    }
}

/// Dimension of the space, C(q+1, 2).
pub fn monomial_count(q: u32) -> usize {
    let q = q as usize;
    q * (q + 1) / 2
}

pub fn monomial_position(q: u32, i: u32, j: u32) -> Option<usize> {
    if i as u64 + j as u64 > q as u64 - 1 {
        return None;
    }
    let (q, i, j) = (q as usize, i as usize, j as usize);
    // rows i' < i contribute q - i' monomials each
    Some(i * (2 * q + 1 - i) / 2 + j)
}

pub fn monomials(q: u32) -> Vec<MonomialIndex> {
    let mut out = Vec::with_capacity(monomial_count(q));
    for i in 0..q {
        for j in 0..(q - i) {
            out.push(MonomialIndex { i, j });
        }
    }
    out
}

/// The linear form aX + bY + cZ of a point (a, b, c).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearForm(pub Triple);

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .zip(["X", "Y", "Z"])
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| if c.value() == 1 { v.to_string() } else { format!("{c}{v}") })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

pub fn redei_factor(point: &ProjPoint) -> LinearForm {
    LinearForm(point.coords())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    field: Arc<FieldSpec>,
    coeffs: Vec<FieldElement>,
}

impl HomPoly {
    pub fn zero(field: Arc<FieldSpec>) -> Self {
        let n = monomial_count(field.order());
        HomPoly {
            field,
            coeffs: vec![FieldElement::ZERO; n],
        }
    }

    pub fn from_coeffs(field: Arc<FieldSpec>, coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.len() != monomial_count(field.order()) {
            return Err(Error::Domain(format!(
                "expected {} coefficients, got {}",
                monomial_count(field.order()),
                coeffs.len()
            )));
        }
        for c in &coeffs {
            field.element(c.value())?;
        }
        Ok(HomPoly { field, coeffs })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: u32, j: u32) -> Option<FieldElement> {
        monomial_position(self.field.order(), i, j).map(|k| self.coeffs[k])
    }

    pub fn set_coeff(&mut self, i: u32, j: u32, c: FieldElement) -> Result<()> {
        let k = monomial_position(self.field.order(), i, j)
            .ok_or_else(|| Error::Domain(format!("no monomial with i={i}, j={j}")))?;
        self.coeffs[k] = self.field.element(c.value())?;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_same_field(&self, other: &HomPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &HomPoly) -> Result<HomPoly> {
        self.check_same_field(other)?;
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(HomPoly {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> HomPoly {
        HomPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &HomPoly) -> Result<HomPoly> {
        self.add(&other.neg())
    }

    /// Value at the Plücker coordinates of a line.
    pub fn evaluate(&self, line: &ProjLine) -> FieldElement {
        evaluate_unchecked(&self.field, &self.coeffs, &line.coords())
    }

    /// Value at an arbitrary nonzero triple. The triple is normalized first;
    /// by homogeneity of degree q-1 the result does not depend on scaling.
    pub fn evaluate_triple(&self, t: Triple) -> Result<FieldElement> {
        for x in &t {
            self.field.element(x.value())?;
        }
        let t = normalize(&self.field, t)?;
        Ok(evaluate_unchecked(&self.field, &self.coeffs, &t))
    }

    /// Nonzero terms as `(monomial, coefficient)`, in coefficient order.
    pub fn terms(&self) -> impl Iterator<Item = (MonomialIndex, FieldElement)> + '_ {
        monomials(self.field.order())
            .into_iter()
            .zip(self.coeffs.iter().copied())
            .filter(|(_, c)| !c.is_zero())
    }

    /// File form: header `# psp q=<field>` then `i j coeff` per nonzero term.
    pub fn to_text(&self) -> String {
        let mut out = format!("# psp q={}\n", self.field);
        for (m, c) in self.terms() {
            out.push_str(&format!("{} {} {}\n", m.i, m.j, c));
        }
        out
    }

    pub fn parse(text: &str, field: &Arc<FieldSpec>) -> Result<HomPoly> {
        let mut poly = HomPoly::zero(field.clone());
        let mut seen = vec![false; poly.coeffs.len()];
        let mut header = false;
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(label) = header_field(rest, "psp") {
                    check_header_field(&label, field, line_no)?;
                    header = true;
                }
                continue;
            }
            if !header {
                return Err(parse_err(line_no, "missing '# psp q=...' header"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(parse_err(line_no, "expected 'i j coeff'"));
            }
            let nums = parts
                .iter()
                .map(|s| s.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| parse_err(line_no, "non-integer field"))?;
            let k = monomial_position(field.order(), nums[0], nums[1])
                .ok_or_else(|| parse_err(line_no, "exponents exceed q - 1"))?;
            if seen[k] {
                return Err(parse_err(line_no, "duplicate monomial"));
            }
            seen[k] = true;
            poly.coeffs[k] = field
                .element(nums[2])
                .map_err(|e| parse_err(line_no, e.to_string()))?;
        }
        if !header {
            return Err(parse_err(0, "missing '# psp q=...' header"));
        }
        Ok(poly)
    }
}

impl fmt::Display for HomPoly {
    /// Human form such as `X + 2Y^2Z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.field.order();
        let mut terms = Vec::new();
        for (m, c) in self.terms() {
            let mut s = if c.value() == 1 { String::new() } else { c.to_string() };
            for (var, e) in [("X", m.x_exponent(q)), ("Y", m.j), ("Z", m.i)] {
                match e {
                    0 => {}
                    1 => s.push_str(var),
                    _ => s.push_str(&format!("{var}^{e}")),
                }
            }
            if s.is_empty() {
                s.push('1');
            }
            terms.push(s);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Parses `q=<label>` out of a header comment of the given kind.
pub(crate) fn header_field(comment: &str, kind: &str) -> Option<String> {
    let mut it = comment.split_whitespace();
    if it.next()? != kind {
        return None;
    }
    it.find_map(|tok| tok.strip_prefix("q=").map(str::to_string))
}

pub(crate) fn check_header_field(label: &str, field: &FieldSpec, line: usize) -> Result<()> {
    let declared: FieldSpec = label
        .parse()
        .map_err(|_| parse_err(line, format!("bad field '{label}' in header")))?;
    if declared.characteristic() != field.characteristic() || declared.degree() != field.degree() {
        return Err(parse_err(
            line,
            format!("header declares q={label} but the field is {field}"),
        ));
    }
    Ok(())
}

/// Field label declared in the header of a psp or mset file, if any.
pub fn declared_field(text: &str) -> Option<String> {
    text.lines().find_map(|l| {
        let rest = l.trim().strip_prefix('#')?;
        header_field(rest, "psp").or_else(|| header_field(rest, "mset"))
    })
}

fn powers(field: &FieldSpec, x: FieldElement, n: u32) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = FieldElement::ONE;
    for _ in 0..=n {
        out.push(acc);
        acc = field.mul(acc, x);
    }
    out
}

fn evaluate_unchecked(field: &FieldSpec, coeffs: &[FieldElement], t: &Triple) -> FieldElement {
    let d = field.order() - 1;
    let (px, py, pz) = (
        powers(field, t[0], d),
        powers(field, t[1], d),
        powers(field, t[2], d),
    );
    let mut acc = FieldElement::ZERO;
    let mut k = 0;
    for i in 0..=d {
        for j in 0..=(d - i) {
            let c = coeffs[k];
            k += 1;
            if c.is_zero() {
                continue;
            }
            let m = field.mul(field.mul(px[(d - i - j) as usize], py[j as usize]), pz[i as usize]);
            acc = field.add(acc, field.mul(c, m));
        }
    }
    acc
}

// coeffs += weight * (aX + bY + cZ)^(q-1), expanded by the multinomial theorem.
fn accumulate(field: &FieldSpec, coeffs: &mut [FieldElement], t: &Triple, weight: FieldElement) {
    let d = field.order() - 1;
    let multinomials = field.multinomial_table();
    let (pa, pb, pc) = (
        powers(field, t[0], d),
        powers(field, t[1], d),
        powers(field, t[2], d),
    );
    let mut k = 0;
    for i in 0..=d {
        for j in 0..=(d - i) {
            let term = field.mul(
                field.mul(multinomials[k], pa[(d - i - j) as usize]),
                field.mul(pb[j as usize], pc[i as usize]),
            );
            coeffs[k] = field.add(coeffs[k], field.mul(weight, term));
            k += 1;
        }
    }
}

/// G^S: the sum over the points of S, with multiplicity, of the (q-1)-th
/// powers of their Rédei factors.
pub fn power_sum(set: &PointMultiset) -> HomPoly {
    let field = set.field().clone();
    let q = field.order();
    let mut coeffs = vec![FieldElement::ZERO; monomial_count(q)];
    for (idx, m) in set.support() {
        accumulate(&field, &mut coeffs, &triple_at(q, idx), field.embed(m as u64));
    }
    HomPoly { field, coeffs }
}

/// Power sum polynomial of a single point, (aX + bY + cZ)^(q-1).
pub fn point_image(field: &Arc<FieldSpec>, point: &ProjPoint) -> HomPoly {
    let mut coeffs = vec![FieldElement::ZERO; monomial_count(field.order())];
    accumulate(field, &mut coeffs, &point.coords(), FieldElement::ONE);
    HomPoly {
        field: field.clone(),
        coeffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::Plane;

    fn fano() -> Plane {
        Plane::new(Arc::new(FieldSpec::prime(2).unwrap()))
    }

    fn set(pl: &Plane, pts: &[[u32; 3]]) -> PointMultiset {
        PointMultiset::from_points(pl.field().clone(), pts).unwrap()
    }

    fn var(pl: &Plane, i: u32, j: u32) -> HomPoly {
        let mut g = HomPoly::zero(pl.field().clone());
        g.set_coeff(i, j, FieldElement::ONE).unwrap();
        g
    }

    #[test]
    fn monomial_positions() {
        for q in [2, 3, 4, 7, 9] {
            for (k, m) in monomials(q).iter().enumerate() {
                assert_eq!(monomial_position(q, m.i, m.j), Some(k));
            }
            assert_eq!(monomials(q).len(), monomial_count(q));
            assert_eq!(monomial_position(q, q, 0), None);
        }
    }

    #[test]
    fn redei_factors() {
        let f7 = FieldSpec::prime(7).unwrap();
        let f2 = FieldSpec::prime(2).unwrap();
        let form = |f: &FieldSpec, v| redei_factor(&ProjPoint::from_values(f, v).unwrap()).to_string();
        assert_eq!(form(&f2, [0, 0, 1]), "Z");
        assert_eq!(form(&f2, [1, 0, 0]), "X");
        assert_eq!(form(&f7, [1, 2, 3]), "X + 2Y + 3Z");
    }

    #[test]
    fn fano_power_sums() {
        let pl = fano();
        let z = var(&pl, 1, 0);
        assert_eq!(power_sum(&set(&pl, &[[0, 0, 1]])), z);
        assert_eq!(power_sum(&set(&pl, &[[1, 0, 1], [1, 0, 0]])), z);
        let five = set(&pl, &[[0, 1, 0], [0, 0, 1], [0, 1, 1], [1, 0, 0], [1, 1, 0]]);
        assert_eq!(power_sum(&five), var(&pl, 0, 1));
        assert!(power_sum(&PointMultiset::empty(pl.field().clone())).is_zero());
        assert_eq!(z.to_string(), "Z");
    }

    #[test]
    fn evaluation_examples() {
        let pl = fano();
        let z = var(&pl, 1, 0);
        let f = pl.field();
        assert_eq!(z.evaluate(&ProjLine::from_values(f, [0, 0, 1]).unwrap()), FieldElement::ONE);
        assert_eq!(z.evaluate(&ProjLine::from_values(f, [1, 0, 0]).unwrap()), FieldElement::ZERO);
    }

    #[test]
    fn evaluation_is_scale_invariant() {
        let f = Arc::new(FieldSpec::new(3, 2).unwrap());
        let pl = Plane::new(f.clone());
        let s = PointMultiset::from_points(f.clone(), &[[1, 2, 3], [0, 1, 5], [1, 8, 8]]).unwrap();
        let g = power_sum(&s);
        for line in pl.lines().iter().step_by(7) {
            let v = g.evaluate(line);
            for lambda in f.elements().skip(1) {
                let t = line.coords().map(|x| f.mul(x, lambda));
                assert_eq!(g.evaluate_triple(t).unwrap(), v);
            }
        }
    }

    #[test]
    fn add_and_negate() {
        let pl = Plane::new(Arc::new(FieldSpec::prime(5).unwrap()));
        let g = power_sum(&set(&pl, &[[1, 2, 3], [0, 1, 4]]));
        let zero = HomPoly::zero(pl.field().clone());
        assert_eq!(g.add(&zero).unwrap(), g);
        assert!(g.add(&g.neg()).unwrap().is_zero());
        let fano = fano();
        assert_eq!(
            var(&fano, 1, 0).add(&var(&fano, 0, 1)).unwrap().to_string(),
            "Y + Z"
        );
        assert!(matches!(g.add(&var(&fano, 1, 0)), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn text_round_trip_and_errors() {
        let f = Arc::new(FieldSpec::new(2, 2).unwrap());
        let pl = Plane::new(f.clone());
        let g = power_sum(&set(&pl, &[[1, 2, 3], [0, 1, 1]]));
        let text = g.to_text();
        assert!(text.starts_with("# psp q=2^2\n"));
        assert_eq!(HomPoly::parse(&text, &f).unwrap(), g);

        let bad = "# psp q=2^2\n0 0 1\n0 9 1\n";
        assert_eq!(
            HomPoly::parse(bad, &f),
            Err(Error::Parse { line: 3, msg: "exponents exceed q - 1".into() })
        );
        assert!(matches!(HomPoly::parse("0 0 1\n", &f), Err(Error::Parse { line: 1, .. })));
        assert!(HomPoly::parse("# psp q=3\n", &f).is_err());
        assert!(HomPoly::parse("# psp q=4\n0 0 1\n0 0 2\n", &f).is_err());
        assert_eq!(declared_field(&text).as_deref(), Some("2^2"));
    }
}
