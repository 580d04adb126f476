//! Exact linear algebra over F_p and over the integers.
//!
//! Vectors are row vectors acting on the left: the kernel of a matrix `M` is
//! `{x : x M = 0}`, matching the orientation of the point-image matrix (rows
//! indexed by points, columns by monomial coordinates).

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Entries are reduced mod p; all rows must have length `cols`.
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Domain(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| (x % p as u64) as u32));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = (v % self.p as u64) as u32;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// `x M` for a row vector `x` of length `rows`.
    pub fn left_mul(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.rows, "vector length must equal row count");
        let p = self.p as u64;
        let mut out = vec![0u64; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0 {
                continue;
            }
            for (acc, &m) in out.iter_mut().zip(self.row(r)) {
                *acc = (*acc + xr as u64 * m as u64) % p;
            }
        }
        out.into_iter().map(|v| v as u32).collect()
    }

    fn inv_mod(&self, a: u32) -> u32 {
        let (mut base, mut e, mut acc) = (a as u64, self.p as u64 - 2, 1u64);
        let p = self.p as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }

    /// Reduced row echelon form in place; returns pivot columns. The pivot in
    /// each column is the first nonzero entry at or below the current row.
    fn rref_in_place(&mut self, limit_cols: usize) -> Vec<usize> {
        let p = self.p as u64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit_cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..self.cols {
                    self.data.swap(r * self.cols + k, pr * self.cols + k);
                }
            }
            let inv = self.inv_mod(self.get(r, c)) as u64;
            for k in 0..self.cols {
                let v = self.data[r * self.cols + k] as u64;
                self.data[r * self.cols + k] = (v * inv % p) as u32;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c) as u64;
                if f == 0 {
                    continue;
                }
                for k in c..self.cols {
                    let pivot = self.data[r * self.cols + k] as u64;
                    let v = self.data[i * self.cols + k] as u64;
                    self.data[i * self.cols + k] = ((v + p * p - f * pivot) % p) as u32;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place(m.cols);
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the left kernel `{x : x M = 0}` in reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let (t, pivots) = self.transpose().rref();
        let n = self.rows;
        let p = self.p;
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for f in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; n];
            v[f] = 1 % p;
            for (r, &pc) in pivots.iter().enumerate() {
                let e = t.get(r, f);
                v[pc] = (p - e) % p;
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return basis;
        }
        let k = FpMatrix {
            p,
            rows: basis.len(),
            cols: n,
            data: basis.concat(),
        };
        let (reduced, _) = k.rref();
        (0..reduced.rows).map(|r| reduced.row(r).to_vec()).collect()
    }

    /// One `x` with `x M = target`, free variables set to zero; `None` if
    /// the system is inconsistent.
    pub fn solve_particular(&self, target: &[u32]) -> Result<Option<Vec<u32>>> {
        if target.len() != self.cols {
            return Err(Error::Domain(format!(
                "target has length {}, expected {}",
                target.len(),
                self.cols
            )));
        }
        // M^T x = target^T, augmented by the target column
        let t = self.transpose();
        let mut aug = FpMatrix::zeros(self.p, t.rows, t.cols + 1);
        for (r, &v) in target.iter().enumerate() {
            for c in 0..t.cols {
                aug.data[r * aug.cols + c] = t.get(r, c);
            }
            aug.data[r * aug.cols + t.cols] = v % self.p;
        }
        let pivots = aug.rref_in_place(t.cols);
        let rank = pivots.len();
        if (rank..aug.rows).any(|r| aug.get(r, t.cols) != 0) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.rows];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, t.cols);
        }
        Ok(Some(x))
    }

    pub fn det(&self) -> Result<u32> {
        if self.rows != self.cols {
            return Err(Error::Domain("determinant of a non-square matrix".into()));
        }
        let p = self.p as u64;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u64;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return Ok(0);
            };
            if pr != c {
                for k in 0..n {
                    m.data.swap(c * n + k, pr * n + k);
                }
                det = (p - det) % p;
            }
            let pivot = m.get(c, c) as u64;
            det = det * pivot % p;
            let inv = m.inv_mod(pivot as u32) as u64;
            for i in c + 1..n {
                let f = m.get(i, c) as u64 * inv % p;
                if f == 0 {
                    continue;
                }
                for k in c..n {
                    let v = m.data[i * n + k] as u64;
                    let w = m.data[c * n + k] as u64;
                    m.data[i * n + k] = ((v + p * p - f * w) % p) as u32;
                }
            }
        }
        Ok(det as u32)
    }

    /// CSV dump with a `p=<p> rows=<r> cols=<c>` header line.
    pub fn to_csv(&self) -> String {
        let mut out = format!("p={} rows={} cols={}\n", self.p, self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }
}

/// Replaces every GF(q) entry by its h prime-subfield coordinates, so an
/// r x c matrix over GF(q) becomes r x (h c) over F_p. Entry (r, c) lands in
/// columns h c .. h c + h, low-order coordinate first.
pub fn expand_fq_to_fp(field: &FieldSpec, rows: &[Vec<FieldElement>]) -> Result<FpMatrix> {
    let h = field.degree() as usize;
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m = FpMatrix::zeros(field.characteristic(), rows.len(), cols * h);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Domain(format!("row {r} has length {}, expected {cols}", row.len())));
        }
        for (c, &x) in row.iter().enumerate() {
            for (k, d) in field.coords(x).into_iter().enumerate() {
                m.data[r * m.cols + c * h + k] = d;
            }
        }
    }
    Ok(m)
}

/// Dense matrix of exact integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Domain("ragged integer matrix".into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn reduce_mod(&self, p: u32) -> FpMatrix {
        let pb = BigInt::from(p);
        let data = self
            .data
            .iter()
            .map(|x| x.mod_floor(&pb).to_u32().expect("residue below p"))
            .collect();
        FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Fraction-free (Bareiss) row echelon form and the rank. Every division
    /// performed is exact; a non-exact one is reported as an integrity error.
    pub fn eliminate(&self) -> Result<(IntMatrix, usize)> {
        let mut m = self.clone();
        let rank = m.bareiss(&mut 1)?;
        Ok((m, rank))
    }

    // Returns the rank; flips `sign` on every row swap.
    fn bareiss(&mut self, sign: &mut i32) -> Result<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = BigInt::from(1);
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for k in 0..cols {
                    self.data.swap(r * cols + k, pr * cols + k);
                }
                *sign = -*sign;
            }
            let pivot = self.get(r, c).clone();
            for i in r + 1..rows {
                let lead = self.get(i, c).clone();
                for k in c + 1..cols {
                    let num = self.get(i, k) * &pivot - &lead * self.get(r, k);
                    let (quo, rem) = num.div_rem(&prev);
                    if !rem.is_zero() {
                        return Err(Error::Integrity(format!(
                            "inexact Bareiss division at ({i}, {k})"
                        )));
                    }
                    self.set(i, k, quo);
                }
                self.set(i, c, BigInt::zero());
            }
            prev = pivot;
            r += 1;
        }
        Ok(r)
    }

    /// Exact determinant by Bareiss elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Domain("determinant of a non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(BigInt::from(1));
        }
        let mut m = self.clone();
        let mut sign = 1;
        let rank = m.bareiss(&mut sign)?;
        if rank < self.rows {
            return Ok(BigInt::zero());
        }
        let d = m.get(self.rows - 1, self.cols - 1).clone();
        Ok(if sign < 0 { -d } else { d })
    }

    pub fn max_abs_bits(&self) -> u64 {
        self.data.iter().map(|x| x.abs().bits()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, rows: &[&[u64]]) -> FpMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        FpMatrix::from_rows(p, cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FpMatrix::identity(2, 3).rank(), 3);
        assert_eq!(FpMatrix::zeros(5, 4, 3).rank(), 0);
        assert_eq!(m(3, &[&[1, 2, 0], &[2, 1, 0], &[0, 0, 1]]).rank(), 2);
    }

    #[test]
    fn kernel_examples() {
        assert!(FpMatrix::identity(7, 4).kernel_basis().is_empty());
        let k = FpMatrix::zeros(3, 2, 2).kernel_basis();
        assert_eq!(k, vec![vec![1, 0], vec![0, 1]]);
        let a = m(3, &[&[1, 2, 0], &[2, 1, 0], &[0, 0, 1]]);
        let k = a.kernel_basis();
        assert_eq!(k, vec![vec![1, 1, 0]]);
        assert_eq!(a.left_mul(&k[0]), vec![0, 0, 0]);
    }

    #[test]
    fn solve_examples() {
        let a = m(5, &[&[1, 2], &[3, 4], &[0, 1]]);
        assert_eq!(a.solve_particular(&[0, 0]).unwrap(), Some(vec![0, 0, 0]));
        let x = a.solve_particular(&[2, 3]).unwrap().unwrap();
        assert_eq!(a.left_mul(&x), vec![2, 3]);
        // rows only reach the first coordinate
        let b = m(5, &[&[1, 0], &[2, 0]]);
        assert_eq!(b.solve_particular(&[0, 1]).unwrap(), None);
        assert!(b.solve_particular(&[1]).is_err());
    }

    #[test]
    fn det_mod_p() {
        assert_eq!(m(7, &[&[1, 2], &[3, 4]]).det().unwrap(), 5); // -2 mod 7
        assert_eq!(m(7, &[&[0, 1], &[1, 0]]).det().unwrap(), 6);
        assert!(m(7, &[&[1, 2]]).det().is_err());
    }

    #[test]
    fn expand_examples() {
        let f7 = FieldSpec::prime(7).unwrap();
        let row = vec![vec![f7.element(3).unwrap(), f7.element(6).unwrap()]];
        assert_eq!(expand_fq_to_fp(&f7, &row).unwrap(), m(7, &[&[3, 6]]));

        let f4 = FieldSpec::new(2, 2).unwrap();
        let x = f4.from_coords(&[0, 1]).unwrap();
        assert_eq!(expand_fq_to_fp(&f4, &[vec![x]]).unwrap(), m(2, &[&[0, 1]]));

        let f9 = FieldSpec::new(3, 2).unwrap();
        let e = expand_fq_to_fp(&f9, &[vec![f9.element(5).unwrap(), f9.element(7).unwrap()]]).unwrap();
        assert_eq!((e.rows(), e.cols()), (1, 4));
        assert_eq!(e.row(0), &[2, 1, 1, 2]);
    }

    #[test]
    fn integer_determinants() {
        let v = IntMatrix::from_i64(&[vec![1, 1, 1], vec![1, 2, 4], vec![1, 3, 9]]).unwrap();
        assert_eq!(v.det().unwrap(), BigInt::from(2));
        let s = IntMatrix::from_i64(&[vec![1, 2, 3], vec![4, 5, 6], vec![1, 2, 3]]).unwrap();
        assert_eq!(s.det().unwrap(), BigInt::zero());
        let j = IntMatrix::from_i64(&[vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2]]).unwrap();
        assert_eq!(j.det().unwrap(), BigInt::from(4));
        let swap = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(swap.det().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn integer_echelon() {
        let a = IntMatrix::from_i64(&[vec![2, 4, 6], vec![1, 2, 3], vec![1, 3, 4]]).unwrap();
        let (e, rank) = a.eliminate().unwrap();
        assert_eq!(rank, 2);
        assert!(e.row(2).iter().all(Zero::is_zero));
        assert!(e.get(1, 0).is_zero());
    }

    #[test]
    fn csv_dump() {
        let a = m(3, &[&[1, 2], &[0, 1]]);
        assert_eq!(a.to_csv(), "p=3 rows=2 cols=2\n1,2\n0,1\n");
    }
}
