//! Radicals and the generalized Mason inequality for univariate families.
//!
//! For `p_1 + ... + p_k = 0` spanning a space of dimension `k - 1` with no
//! common zero, `max deg p_i <= C(k-1, 2) * (n0(p_1 ... p_k) - 1)` where
//! `n0` counts distinct roots over the algebraic closure.

use num_traits::Zero;
use thiserror::Error;

use crate::independence::pairs;
use crate::linalg::{self, DependencyCertificate};
use crate::poly::{Degree, MultiPoly, PolyError, Rational, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MasonError {
    #[error("need at least 2 polynomials, got {0}")]
    TooFewPolynomials(usize),
    #[error("polynomial {0} is zero")]
    ZeroPolynomial(usize),
    #[error("the polynomials do not sum to zero")]
    NonZeroSum,
    #[error("the polynomials span dimension {rank}, expected {expected}")]
    WrongSpan { rank: usize, expected: usize },
    #[error("the polynomials share the nonconstant factor {0}")]
    CommonZero(String),
    #[error("certificate does not annihilate the r-th powers")]
    CertificateMismatch,
    #[error("the product of the polynomials is constant")]
    ConstantProduct,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasonVerdict {
    pub max_degree: u32,
    /// Number of distinct roots of the product.
    pub radical_count: usize,
    /// `C(k-1, 2) * (radical_count - 1)`.
    pub rhs: i64,
    pub holds: bool,
}

/// `p / gcd(p, p')`, monic. Same roots as `p`, each simple.
pub fn squarefree_part(p: &UniPoly) -> Result<UniPoly, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let g = p.gcd(&p.derivative())?;
    Ok(p.exact_div(&g)?.monic())
}

/// Number of distinct roots of `prod polys` in the algebraic closure.
pub fn radical_count(polys: &[UniPoly]) -> Result<usize, MasonError> {
    if let Some(i) = polys.iter().position(UniPoly::is_zero) {
        return Err(MasonError::ZeroPolynomial(i));
    }
    let product = polys.iter().fold(UniPoly::one(), |acc, p| &acc * p);
    let radical = squarefree_part(&product)?;
    Ok(radical.degree().finite().unwrap_or(0) as usize)
}

/// Checks the three hypotheses, then evaluates both sides of the
/// inequality exactly.
pub fn mason_check(polys: &[UniPoly]) -> Result<MasonVerdict, MasonError> {
    let k = polys.len();
    if k < 2 {
        return Err(MasonError::TooFewPolynomials(k));
    }
    if let Some(i) = polys.iter().position(UniPoly::is_zero) {
        return Err(MasonError::ZeroPolynomial(i));
    }
    let sum = polys.iter().fold(UniPoly::zero(), |acc, p| &acc + p);
    if !sum.is_zero() {
        return Err(MasonError::NonZeroSum);
    }
    let multi: Vec<MultiPoly> = polys.iter().map(MultiPoly::from).collect();
    let rank =
        linalg::rank(&linalg::coefficient_matrix(&multi).expect("family is nonempty, univariate"));
    if rank != k - 1 {
        return Err(MasonError::WrongSpan {
            rank,
            expected: k - 1,
        });
    }
    let common = polys[1..]
        .iter()
        .try_fold(polys[0].clone(), |g, p| g.gcd(p))?;
    if !common.is_constant() {
        return Err(MasonError::CommonZero(common.to_string()));
    }

    let max_degree = polys
        .iter()
        .filter_map(|p| p.degree().finite())
        .max()
        .unwrap_or(0);
    let radical_count = radical_count(polys)?;
    let rhs = pairs(k as u64 - 1).expect("small k") as i64 * (radical_count as i64 - 1);
    Ok(MasonVerdict {
        max_degree,
        radical_count,
        rhs,
        holds: i64::from(max_degree) <= rhs,
    })
}

/// Largest exponent compatible with the degree-summing argument for a
/// dependence `sum b_i p_i^r = 0` whose terms `q_i = b_i p_i^r` satisfy the
/// Mason hypotheses: `k * C(k-1, 2) * (D - 1) / D` with `D = deg prod p_i`,
/// the product taken over the terms with nonzero `b_i`.
pub fn implied_r_bound(
    polys: &[UniPoly],
    r: u32,
    certificate: &DependencyCertificate,
) -> Result<Rational, MasonError> {
    let powers: Vec<UniPoly> = polys.iter().map(|p| p.pow(r)).collect();
    let multi: Vec<MultiPoly> = powers.iter().map(MultiPoly::from).collect();
    if !certificate.annihilates(&multi) {
        return Err(MasonError::CertificateMismatch);
    }
    let (support, q): (Vec<&UniPoly>, Vec<UniPoly>) = polys
        .iter()
        .zip(&powers)
        .zip(certificate.coefficients())
        .filter(|(_, b)| !b.is_zero())
        .map(|((p, pr), b)| (p, pr.scale(b)))
        .unzip();
    mason_check(&q)?;

    let k = q.len() as u64;
    let product = support.into_iter().fold(UniPoly::one(), |acc, p| &acc * p);
    let d = match product.degree() {
        Degree::Finite(d) if d > 0 => d,
        _ => return Err(MasonError::ConstantProduct),
    };
    Ok(summed_degree_bound(k, d))
}

/// `k * C(k-1, 2) * (D - 1) / D` for `D >= 1`.
pub fn summed_degree_bound(k: u64, product_degree: u32) -> Rational {
    let scale = k * pairs(k - 1).expect("small k");
    let d = u64::from(product_degree);
    Rational::new((scale * (d - 1)).into(), d.into())
}
