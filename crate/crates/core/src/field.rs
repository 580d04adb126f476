//! Exact arithmetic in GF(q), q = p^h.
//!
//! Elements are stored in their compact integer encoding: the base-p digit
//! expansion of the polynomial-basis coordinates, constant term in the lowest
//! digit. For h = 1 this is just the residue mod p.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// Conway polynomials shipped for the small extension fields, low-order first.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The integer encoding of this element.
    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    // Caller guarantees `v` is below the order of the field it is used in.
    pub(crate) fn from_raw(v: u32) -> Self {
        FieldElement(v)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Description of GF(p^h) together with the tables needed for arithmetic.
///
/// Shared behind an `Arc` by every value that lives in the field.
pub struct FieldSpec {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    // discrete log tables, only built for h > 1
    exp: Vec<u32>,
    log: Vec<u32>,
    multinomials: OnceLock<Vec<FieldElement>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("h", &self.h)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.h == other.h && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.p, self.h, self.modulus()).hash(state);
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.h == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.h)
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `"p"`, `"p^h"`, or a bare prime power such as `"9"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidField(format!("cannot parse field '{s}'"));
        let (p, h) = match s.split_once('^') {
            Some((p, h)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                h.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => {
                let n = s.parse::<u64>().map_err(|_| bad())?;
                prime_power(n).ok_or_else(|| {
                    Error::InvalidField(format!("{n} is not a prime power"))
                })?
            }
        };
        let p = u32::try_from(p).map_err(|_| bad())?;
        FieldSpec::new(p, h)
    }
}

impl FieldSpec {
    /// GF(p^h) with the built-in modulus (x for h = 1, a Conway polynomial
    /// where tabulated, otherwise the lexicographically smallest monic
    /// irreducible polynomial of degree h).
    pub fn new(p: u32, h: u32) -> Result<Self> {
        check_order(p, h)?;
        let modulus = if h == 1 {
            vec![0, 1]
        } else if let Some((_, _, m)) = CONWAY.iter().find(|(cp, ch, _)| *cp == p && *ch == h) {
            m.to_vec()
        } else {
            smallest_irreducible(p, h)
        };
        Self::build(p, h, modulus)
    }

    /// GF(p^h) with a caller-supplied monic irreducible modulus of degree h
    /// (coefficients low-order first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        let mut modulus = modulus;
        while modulus.len() > 1 && modulus.last() == Some(&0) {
            modulus.pop();
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        let h = (modulus.len() - 1) as u32;
        check_order(p, h)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(format!(
                "modulus coefficients must lie in 0..{p}"
            )));
        }
        if h == 1 {
            if modulus != [0, 1] {
                return Err(Error::InvalidField("prime fields use the modulus x".into()));
            }
        } else if !is_irreducible(p, &modulus) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:?} is not monic irreducible over F_{p}"
            )));
        }
        Self::build(p, h, modulus)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    fn build(p: u32, h: u32, modulus: Vec<u32>) -> Result<Self> {
        let q = p.pow(h);
        let mut f = FieldSpec {
            p,
            h,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            multinomials: OnceLock::new(),
        };
        if h > 1 {
            f.build_log_tables()?;
        }
        Ok(f)
    }

    fn build_log_tables(&mut self) -> Result<()> {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (2..self.q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.slow_pow(g, order / r) != 1)
            })
            .ok_or_else(|| Error::InvalidField("no primitive element found".into()))?;
        let mut exp = vec![0u32; self.q as usize - 1];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = k as u32;
            x = self.slow_mul(x, generator);
        }
        if x != 1 {
            return Err(Error::Integrity("generator order mismatch".into()));
        }
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    // Schoolbook product reduced by the modulus, on encoded values.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let pa = self.digits(a);
        let pb = self.digits(b);
        let p = self.p as u64;
        let mut prod = vec![0u64; pa.len() + pb.len()];
        for (i, &x) in pa.iter().enumerate() {
            for (j, &y) in pb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let rem = poly_rem(self.p, &prod, &self.modulus);
        self.undigits(&rem)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn digits(&self, mut v: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.h as usize);
        for _ in 0..self.h {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.h
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Validates an integer encoding.
    pub fn element(&self, v: u32) -> Result<FieldElement> {
        if v < self.q {
            Ok(FieldElement(v))
        } else {
            Err(Error::Domain(format!("{v} is not an element of GF({})", self.q)))
        }
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElement> {
        if coords.len() != self.h as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::Domain(format!(
                "expected {} coordinates in 0..{}",
                self.h, self.p
            )));
        }
        Ok(FieldElement(self.undigits(coords)))
    }

    /// Polynomial-basis coordinates, low-order first.
    pub fn coords(&self, a: FieldElement) -> Vec<u32> {
        self.digits(a.0)
    }

    /// Embeds an integer into the prime subfield.
    pub fn embed(&self, m: u64) -> FieldElement {
        FieldElement((m % self.p as u64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.h == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.h {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.h {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if self.h == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let k = (self.log[a.0 as usize] + self.log[b.0 as usize]) % (self.q - 1);
        FieldElement(self.exp[k as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.h == 1 {
            return Ok(self.pow(a, (self.p - 2) as u64));
        }
        let k = (self.q - 1 - self.log[a.0 as usize]) % (self.q - 1);
        Ok(FieldElement(self.exp[k as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation; `pow(0, 0) = 1`.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(q-1)`: 0 for a = 0 and 1 otherwise.
    pub fn pow_q_minus_1(&self, a: FieldElement) -> FieldElement {
        let r = self.pow(a, (self.q - 1) as u64);
        debug_assert_eq!(
            r,
            if a.is_zero() { FieldElement::ZERO } else { FieldElement::ONE }
        );
        r
    }

    /// The multinomial coefficient (q-1)! / (i! j! (q-1-i-j)!) reduced into
    /// the prime subfield.
    pub fn multinomial_mod_p(&self, i: u32, j: u32) -> Result<FieldElement> {
        let n = self.q - 1;
        if i as u64 + j as u64 > n as u64 {
            return Err(Error::Domain(format!("i + j = {} exceeds q - 1 = {n}", i + j)));
        }
        let exact = multinomial(n as u64, i as u64, j as u64);
        let r = (exact % BigUint::from(self.p)).to_u32().unwrap_or(0);
        Ok(FieldElement(r))
    }

    /// Multinomial coefficients C(q-1; i, j) for every monomial, in the
    /// coefficient-vector order used by [`crate::poly::HomPoly`].
    pub fn multinomial_table(&self) -> &[FieldElement] {
        self.multinomials.get_or_init(|| {
            let n = self.q - 1;
            let mut out = Vec::with_capacity(crate::poly::monomial_count(self.q));
            for i in 0..=n {
                for j in 0..=(n - i) {
                    out.push(self.multinomial_mod_p(i, j).expect("i + j <= q - 1"));
                }
            }
            out
        })
    }
}

fn check_order(p: u32, h: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if h == 0 {
        return Err(Error::InvalidField("extension degree must be >= 1".into()));
    }
    let q = (p as u64).checked_pow(h).unwrap_or(u64::MAX);
    if q > MAX_ORDER {
        return Err(Error::InvalidField(format!(
            "field order {p}^{h} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    Ok(())
}

/// Exact multinomial coefficient n! / (i! j! (n-i-j)!).
pub fn multinomial(n: u64, i: u64, j: u64) -> BigUint {
    assert!(i + j <= n, "multinomial indices exceed n");
    let k = n - i - j;
    if n <= 20 {
        let fact = |m: u64| (1..=m).product::<u64>();
        return BigUint::from(fact(n) / (fact(i) * fact(j) * fact(k)));
    }
    let fact = |m: u64| (1..=m).fold(BigUint::one(), |acc, x| acc * x);
    fact(n) / (fact(i) * fact(j) * fact(k))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_power(n: u64) -> Option<(u64, u32)> {
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut h = 0;
    while m.is_multiple_of(p) {
        m /= p;
        h += 1;
    }
    (m == 1).then_some((p, h))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Remainder of `a` modulo the monic polynomial `m` over F_p.
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let p64 = p as u64;
    while r.len() > dm {
        let lead = r.pop().expect("non-empty");
        if lead != 0 {
            let off = r.len() - dm;
            for (k, &c) in m[..dm].iter().enumerate() {
                r[off + k] = (r[off + k] + p64 - (lead * c as u64) % p64) % p64;
            }
        }
    }
    r.resize(dm, 0);
    r.into_iter().map(|x| x as u32).collect()
}

/// Exhaustive irreducibility test: no monic factor of degree 1..=deg/2.
pub fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let deg = poly.len() - 1;
    if poly.last() != Some(&1) {
        return false;
    }
    if deg >= 2 && poly[0] == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if poly_rem(p, poly, &f).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, h: u32) -> Vec<u32> {
    let count = (p as u64).pow(h);
    (0..count)
        .map(|code| {
            let mut f = Vec::with_capacity(h as usize + 1);
            let mut c = code;
            for _ in 0..h {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            f
        })
        .find(|f| is_irreducible(p, f))
        .expect("an irreducible polynomial exists in every degree")
}
