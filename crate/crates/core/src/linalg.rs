//! Exact rank and left kernels of polynomial coefficient matrices.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{Monomial, MultiPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("empty polynomial family")]
    EmptyFamily,
    #[error("polynomials in a family must share their number of variables")]
    DimensionMismatch,
    #[error("matrix needs {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("certificate has {got} coefficients for a family of {expected}")]
    CertificateLength { expected: usize, got: usize },
    #[error("certificate is the zero vector")]
    ZeroCertificate,
    #[error("certificate does not annihilate the family")]
    CertificateMismatch,
}

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(RationalMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        RationalMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Coefficient matrix of a family together with its column monomials
/// (grlex-descending).
pub fn coefficient_matrix_with_columns(
    family: &[MultiPoly],
) -> Result<(RationalMatrix, Vec<Monomial>), LinalgError> {
    let first = family.first().ok_or(LinalgError::EmptyFamily)?;
    if family.iter().any(|p| p.dim() != first.dim()) {
        return Err(LinalgError::DimensionMismatch);
    }
    let support: BTreeSet<&Monomial> = family
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m))
        .collect();
    let columns: Vec<Monomial> = support.into_iter().rev().cloned().collect();
    let entries = family
        .iter()
        .flat_map(|p| columns.iter().map(move |m| p.coefficient(m)))
        .collect();
    let matrix = RationalMatrix::new(family.len(), columns.len(), entries)?;
    Ok((matrix, columns))
}

/// One row per polynomial, one column per monomial of the joint support.
pub fn coefficient_matrix(family: &[MultiPoly]) -> Result<RationalMatrix, LinalgError> {
    coefficient_matrix_with_columns(family).map(|(m, _)| m)
}

/// Exact rank by fraction-free (Bareiss) elimination.
///
/// Rows are first scaled to integers; every intermediate division is exact.
pub fn rank(m: &RationalMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows).map(|i| integer_row(m.row(i))).collect();
    bareiss_rank(&mut a, m.cols)
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

fn bareiss_rank(a: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[col];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            for j in col + 1..cols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

/// Determinant of a square integer matrix (fraction-free).
pub(crate) fn integer_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return BigInt::zero();
        };
        if p != col {
            a.swap(col, p);
            sign = -sign;
        }
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            for j in col + 1..n {
                let v = &pivot_row[col] * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = a[col][col].clone();
    }
    sign * prev
}

/// Basis of the left null space: vectors `b` with `sum_i b[i] * row_i = 0`.
/// Each vector is scaled so its first nonzero entry is 1.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    // Gauss-Jordan on the transpose: unknowns are the row weights.
    let n = m.rows;
    let mut t: Vec<Vec<Rational>> = (0..m.cols)
        .map(|j| (0..n).map(|i| m.get(i, j).clone()).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..t.len()).find(|&i| !t[i][col].is_zero()) else {
            continue;
        };
        t.swap(r, p);
        let inv = t[r][col].recip();
        for v in t[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        pivots.push(col);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (pr, &pc) in pivots.iter().enumerate() {
                v[pc] = -t[pr][free].clone();
            }
            normalize_first_nonzero(v)
        })
        .collect()
}

fn normalize_first_nonzero(mut v: Vec<Rational>) -> Vec<Rational> {
    if let Some(lead) = v.iter().find(|q| !q.is_zero()).cloned() {
        for q in v.iter_mut() {
            *q /= &lead;
        }
    }
    v
}

/// `sum_i coefficients[i] * family[i]`.
pub fn contract(coefficients: &[Rational], family: &[MultiPoly]) -> MultiPoly {
    let dim = family.first().map_or(1, MultiPoly::dim);
    family
        .iter()
        .zip(coefficients)
        .filter(|(_, b)| !b.is_zero())
        .fold(MultiPoly::zero(dim), |acc, (p, b)| &acc + &p.scale(b))
}

/// Nonzero coefficient vector witnessing `sum_i b_i p_i = 0`.
///
/// Construction checks the relation against the family, so a certificate
/// in hand is always valid for the family it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyCertificate {
    coefficients: Vec<Rational>,
}

impl DependencyCertificate {
    pub fn new(coefficients: Vec<Rational>, family: &[MultiPoly]) -> Result<Self, LinalgError> {
        if coefficients.len() != family.len() {
            return Err(LinalgError::CertificateLength {
                expected: family.len(),
                got: coefficients.len(),
            });
        }
        if coefficients.iter().all(Zero::is_zero) {
            return Err(LinalgError::ZeroCertificate);
        }
        if !contract(&coefficients, family).is_zero() {
            return Err(LinalgError::CertificateMismatch);
        }
        Ok(DependencyCertificate { coefficients })
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Whether this certificate is a nonzero multiple of `other`.
    pub fn is_proportional_to(&self, other: &[Rational]) -> bool {
        if other.len() != self.coefficients.len() || other.iter().all(Zero::is_zero) {
            return false;
        }
        normalize_first_nonzero(self.coefficients.clone())
            == normalize_first_nonzero(other.to_vec())
    }

    /// Checks the relation against an arbitrary family.
    pub fn annihilates(&self, family: &[MultiPoly]) -> bool {
        family.len() == self.coefficients.len() && contract(&self.coefficients, family).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, UniPoly};

    fn ints(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v, 1)).collect())
                .collect(),
        )
    }

    fn u(c: &[i64]) -> MultiPoly {
        MultiPoly::from(&UniPoly::from_ints(c))
    }

    fn pythagorean() -> Vec<MultiPoly> {
        vec![u(&[0, 2]), u(&[-1, 0, 1]), u(&[1, 0, 1])]
    }

    #[test]
    fn coefficient_matrix_examples() {
        assert_eq!(
            coefficient_matrix(&[u(&[0, 1]), u(&[0, 2])]).unwrap(),
            ints(&[&[1], &[2]])
        );
        assert_eq!(
            coefficient_matrix(&[u(&[1, 1]), u(&[-1, 1])]).unwrap(),
            ints(&[&[1, 1], &[1, -1]])
        );
        let z = coefficient_matrix(&[MultiPoly::zero(1)]).unwrap();
        assert_eq!((z.rows(), z.cols()), (1, 0));
        assert_eq!(coefficient_matrix(&[]), Err(LinalgError::EmptyFamily));
        assert_eq!(
            coefficient_matrix(&[MultiPoly::one(1), MultiPoly::one(2)]),
            Err(LinalgError::DimensionMismatch)
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&ints(&[&[1], &[2]])), 1);
        assert_eq!(rank(&ints(&[&[1, 1], &[1, -1]])), 2);
        let squares: Vec<_> = pythagorean().iter().map(|p| p.pow(2)).collect();
        assert_eq!(rank(&coefficient_matrix(&squares).unwrap()), 2);
        assert_eq!(rank(&RationalMatrix::zeros(3, 4)), 0);
        assert_eq!(rank(&RationalMatrix::identity(4)), 4);
    }

    #[test]
    fn rank_with_rational_entries_and_skipped_columns() {
        let m = RationalMatrix::from_rows(vec![
            vec![rat(0, 1), rat(1, 2), rat(1, 3)],
            vec![rat(0, 1), rat(1, 4), rat(1, 6)],
            vec![rat(0, 1), rat(0, 1), rat(5, 7)],
        ]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(
            kernel_basis(&ints(&[&[1], &[2]])),
            vec![vec![rat(1, 1), rat(-1, 2)]]
        );
        assert!(kernel_basis(&coefficient_matrix(&[u(&[0, 1]), u(&[1])]).unwrap()).is_empty());
        let squares: Vec<_> = pythagorean().iter().map(|p| p.pow(2)).collect();
        let k = kernel_basis(&coefficient_matrix(&squares).unwrap());
        assert_eq!(k, vec![vec![rat(1, 1), rat(1, 1), rat(-1, 1)]]);
    }

    #[test]
    fn determinant() {
        let a = vec![
            vec![BigInt::from(2), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(3)],
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)],
        ];
        // 2*(0-3) - 1*(0-3) + 0 = -3
        assert_eq!(integer_determinant(a), BigInt::from(-3));
    }

    #[test]
    fn certificates_are_checked() {
        let fam = pythagorean();
        let squares: Vec<_> = fam.iter().map(|p| p.pow(2)).collect();
        let ok =
            DependencyCertificate::new(vec![rat(2, 1), rat(2, 1), rat(-2, 1)], &squares).unwrap();
        assert!(ok.is_proportional_to(&[rat(1, 1), rat(1, 1), rat(-1, 1)]));
        assert!(!ok.is_proportional_to(&[rat(1, 1), rat(-1, 1), rat(-1, 1)]));
        assert_eq!(
            DependencyCertificate::new(vec![rat(1, 1), rat(1, 1), rat(-1, 1)], &fam),
            Err(LinalgError::CertificateMismatch)
        );
        assert_eq!(
            DependencyCertificate::new(vec![rat(0, 1); 3], &squares),
            Err(LinalgError::ZeroCertificate)
        );
        assert!(matches!(
            DependencyCertificate::new(vec![rat(1, 1)], &squares),
            Err(LinalgError::CertificateLength { .. })
        ));
    }
}
