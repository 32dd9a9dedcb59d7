//! Exact integer matrices and Gaussian elimination over scalars.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::number::{QPoly, Scalar};

/// Square or rectangular matrix over Z.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Self {
        IntMatrix { rows }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        IntMatrix { rows: rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect() }
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        IntMatrix { rows }
    }

    pub fn zeros(r: usize, c: usize) -> Self {
        IntMatrix { rows: vec![vec![BigInt::zero(); c]; r] }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.rows[i][j] = v;
    }

    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.rows.iter().map(|r| r.iter().map(ToPrimitive::to_i64).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.nrows(), self.ncols());
        let mut out = Self::zeros(c, r);
        for i in 0..r {
            for j in 0..c {
                out.rows[j][i] = self.rows[i][j].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (r, k, c) = (self.nrows(), self.ncols(), other.ncols());
        let mut out = Self::zeros(r, c);
        for i in 0..r {
            for t in 0..k {
                let a = &self.rows[i][t];
                if a.is_zero() {
                    continue;
                }
                for j in 0..c {
                    out.rows[i][j] += a * &other.rows[t][j];
                }
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut acc = Self::identity(self.nrows());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Row vector times matrix, `v·A`.
    pub fn left_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.ncols()];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * &self.rows[i][j];
            }
        }
        out
    }

    /// `v·A` for scalar vectors.
    pub fn left_mul_scalar(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.ncols())
            .map(|j| {
                v.iter()
                    .enumerate()
                    .filter(|(i, _)| !self.rows[*i][j].is_zero())
                    .map(|(i, vi)| vi * Scalar::from_bigint(self.rows[i][j].clone()))
                    .sum()
            })
            .collect()
    }

    /// `A·m` for scalar column vectors.
    pub fn right_mul_scalar(&self, m: &[Scalar]) -> Vec<Scalar> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(m)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, x)| Scalar::from_bigint(a.clone()) * x)
                    .sum()
            })
            .collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.nrows()).map(|i| self.rows[i][i].clone()).sum()
    }

    /// Characteristic polynomial `det(tI − A)`, little-endian, by Faddeev–LeVerrier.
    pub fn charpoly(&self) -> Vec<BigInt> {
        let n = self.nrows();
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            // M_k = A·M_{k−1} + c_{n−k+1}·I
            let mut next = self.mul(&m);
            for i in 0..n {
                next.rows[i][i] += &c[n - k + 1];
            }
            m = next;
            let tr = self.mul(&m).trace();
            let (q, r) = (-tr).div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero());
            c[n - k] = q;
        }
        c
    }

    pub fn charpoly_q(&self) -> QPoly {
        QPoly::from_bigints(&self.charpoly())
    }

    /// Evaluates a polynomial at the matrix.
    pub fn eval_poly(&self, p: &[BigInt]) -> Self {
        let n = self.nrows();
        let mut acc = Self::zeros(n, n);
        for c in p.iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                acc.rows[i][i] += c;
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Zero::is_zero))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Scalar>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Scalar::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Some solution `x` of `M x = b`, if one exists.
pub fn solve(m: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Scalar>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of `{x : M x = 0}`.
pub fn nullspace(m: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Scalar::zero(); cols];
        x[free] = Scalar::one();
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = -&a[r][free];
        }
        basis.push(x);
    }
    basis
}

/// Hermite normal form (row style, upper triangular, positive pivots) of an
/// integer row lattice; zero rows are dropped.
pub fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut r0 = 0;
    for c in 0..cols {
        // Euclid on column c among rows r0..
        loop {
            let nz: Vec<usize> = (r0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = rows[i][c].div_floor(&rows[p][c]);
                    let prow = rows[p].clone();
                    for (x, y) in rows[i].iter_mut().zip(prow.iter()) {
                        *x -= &q * y;
                    }
                }
            }
        }
        if let Some(p) = (r0..rows.len()).find(|&i| !rows[i][c].is_zero()) {
            rows.swap(r0, p);
            if rows[r0][c].is_negative() {
                for x in rows[r0].iter_mut() {
                    *x = -&*x;
                }
            }
            // Reduce entries above the pivot.
            let prow = rows[r0].clone();
            for i in 0..r0 {
                let q = rows[i][c].div_floor(&prow[c]);
                if !q.is_zero() {
                    for (x, y) in rows[i].iter_mut().zip(prow.iter()) {
                        *x -= &q * y;
                    }
                }
            }
            r0 += 1;
        }
    }
    for r in rows.into_iter().take(r0) {
        out.push(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: determinant of `tI − A` by cofactor expansion over Q[t].
    fn charpoly_laplace(a: &IntMatrix) -> QPoly {
        fn det(m: &[Vec<QPoly>]) -> QPoly {
            if m.len() == 1 {
                return m[0][0].clone();
            }
            let mut acc = QPoly::zero();
            for j in 0..m.len() {
                let minor: Vec<Vec<QPoly>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
                let term = m[0][j].mul(&det(&minor));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
        let n = a.nrows();
        let m: Vec<Vec<QPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = QPoly::constant(num_rational::BigRational::from_integer(-a.get(i, j).clone()));
                        if i == j {
                            c.add(&QPoly::x())
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        det(&m)
    }

    #[test]
    fn charpoly_matches_cofactor_oracle() {
        let cases = [
            vec![vec![1, 1], vec![1, 1]],
            vec![vec![1, 1], vec![1, 0]],
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 0]],
            vec![vec![2, -1, 0, 3], vec![1, 0, 4, 1], vec![0, 5, -2, 1], vec![1, 1, 1, 1]],
        ];
        for c in cases {
            let a = IntMatrix::from_i64(&c);
            assert_eq!(a.charpoly_q(), charpoly_laplace(&a), "{a}");
            assert!(a.eval_poly(&a.charpoly()).is_zero());
        }
        assert_eq!(IntMatrix::from_i64(&[vec![1, 1], vec![1, 1]]).charpoly_q(), QPoly::from_ints([0i64, -2, 1]));
    }

    #[test]
    fn solves_and_kernels() {
        let m = vec![vec![Scalar::int(1), Scalar::int(2)], vec![Scalar::int(2), Scalar::int(4)]];
        assert!(solve(&m, &[Scalar::int(1), Scalar::int(3)]).is_none());
        let x = solve(&m, &[Scalar::int(1), Scalar::int(2)]).unwrap();
        assert_eq!(&x[0] + Scalar::int(2) * &x[1], Scalar::int(1));
        let k = nullspace(&m);
        assert_eq!(k, vec![vec![Scalar::int(-2), Scalar::int(1)]]);
    }

    #[test]
    fn hermite_form() {
        let rows = vec![vec![BigInt::from(4), BigInt::from(6)], vec![BigInt::from(2), BigInt::from(4)]];
        let h = hermite_rows(rows);
        assert_eq!(h, vec![vec![BigInt::from(2), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(2)]]);
    }
}
