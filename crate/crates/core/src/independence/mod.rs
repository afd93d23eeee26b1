//! Linear (in)dependence of polynomial families and of their powers.
//!
//! Every verdict here is exact. A dependent verdict always carries a
//! [`DependencyCertificate`] that has been checked against the family.

mod verify;

pub use verify::{
    sample_family, sample_poly, verify_families, verify_theorem, Counterexample, Probe,
    SamplerConfig, VerifyReport,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{self, DependencyCertificate, LinalgError};
use crate::poly::{MultiPoly, PolyError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndependenceError {
    #[error("empty polynomial family")]
    EmptyFamily,
    #[error("need at least 2 polynomials, got {0}")]
    TooFewPolynomials(usize),
    #[error("polynomial {0} is zero")]
    ZeroPolynomial(usize),
    #[error("polynomials in a family must share their number of variables")]
    DimensionMismatch,
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("polynomials {0} and {1} are linearly dependent")]
    PairwiseDependent(usize, usize),
    #[error("theorem bound needs k >= 2, got {0}")]
    InvalidFamilySize(u64),
    #[error("theorem bound overflows for k = {0}")]
    BoundOverflow(u64),
    #[error("exponent range must contain at least r = 1")]
    EmptyExponentRange,
    #[error("trial {trial}: no valid family after {attempts} draws")]
    SamplerExhausted { trial: usize, attempts: usize },
    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A family `p_1, ..., p_k` (k >= 2, all nonzero, same variables) and an
/// exponent `r >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerFamily {
    polys: Vec<MultiPoly>,
    exponent: u32,
}

impl PowerFamily {
    pub fn new(polys: Vec<MultiPoly>, exponent: u32) -> Result<Self, IndependenceError> {
        if polys.len() < 2 {
            return Err(IndependenceError::TooFewPolynomials(polys.len()));
        }
        check_family(&polys)?;
        if exponent == 0 {
            return Err(IndependenceError::ZeroExponent);
        }
        Ok(PowerFamily { polys, exponent })
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn k(&self) -> usize {
        self.polys.len()
    }

    pub fn dim(&self) -> usize {
        self.polys[0].dim()
    }

    /// The family `p_1^r, ..., p_k^r`.
    pub fn powers(&self) -> Vec<MultiPoly> {
        self.polys.iter().map(|p| p.pow(self.exponent)).collect()
    }
}

/// Nonempty, shared dimension, no zero polynomial.
fn check_family(polys: &[MultiPoly]) -> Result<(), IndependenceError> {
    let first = polys.first().ok_or(IndependenceError::EmptyFamily)?;
    if polys.iter().any(|p| p.dim() != first.dim()) {
        return Err(IndependenceError::DimensionMismatch);
    }
    if let Some(i) = polys.iter().position(MultiPoly::is_zero) {
        return Err(IndependenceError::ZeroPolynomial(i));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndependenceVerdict {
    Independent,
    Dependent(DependencyCertificate),
}

impl IndependenceVerdict {
    pub fn is_dependent(&self) -> bool {
        matches!(self, IndependenceVerdict::Dependent(_))
    }

    pub fn certificate(&self) -> Option<&DependencyCertificate> {
        match self {
            IndependenceVerdict::Independent => None,
            IndependenceVerdict::Dependent(c) => Some(c),
        }
    }
}

/// First pair `(i, j)`, `i < j`, whose coefficient rows have rank < 2.
pub fn find_dependent_pair(
    polys: &[MultiPoly],
) -> Result<Option<(usize, usize)>, IndependenceError> {
    check_family(polys)?;
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            let m = linalg::coefficient_matrix(&[polys[i].clone(), polys[j].clone()])?;
            if linalg::rank(&m) < 2 {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// No member of the family is a scalar multiple of another.
pub fn pairwise_independent(polys: &[MultiPoly]) -> Result<bool, IndependenceError> {
    Ok(find_dependent_pair(polys)?.is_none())
}

/// Dependent iff the coefficient matrix has rank below the family size.
/// The certificate is the first left-kernel basis vector.
pub fn linear_dependency(polys: &[MultiPoly]) -> Result<IndependenceVerdict, IndependenceError> {
    let m = linalg::coefficient_matrix(polys)?;
    if linalg::rank(&m) == polys.len() {
        return Ok(IndependenceVerdict::Independent);
    }
    let beta = linalg::kernel_basis(&m)
        .into_iter()
        .next()
        .expect("rank deficiency implies a kernel vector");
    Ok(IndependenceVerdict::Dependent(DependencyCertificate::new(
        beta, polys,
    )?))
}

/// Verdict for `p_1^r, ..., p_k^r`.
///
/// Independence is first sought through a nonsingular evaluation matrix
/// `[p_i(a_j)^r]` at k integer points, which proves independence without
/// expanding the powers. Otherwise the expanded coefficient matrix decides.
pub fn powers_dependency(family: &PowerFamily) -> IndependenceVerdict {
    if evaluation_screen(family.polys(), family.exponent()) {
        return IndependenceVerdict::Independent;
    }
    linear_dependency(&family.powers()).expect("PowerFamily invariants hold for its powers")
}

const SCREEN_SEED: u64 = 0x5eed_0fe7_a1ce;
const SCREEN_ROUNDS: u64 = 3;
const SCREEN_RANGE: i64 = 1 << 10;

/// `true` only when some evaluation matrix is nonsingular, which proves the
/// powers independent. `false` proves nothing.
fn evaluation_screen(polys: &[MultiPoly], r: u32) -> bool {
    let k = polys.len();
    let dim = polys[0].dim();
    (0..SCREEN_ROUNDS).any(|round| {
        let mut rng = ChaCha8Rng::seed_from_u64(SCREEN_SEED ^ round);
        let points: Vec<Vec<Rational>> = (0..k)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        Rational::from_integer(rng.gen_range(-SCREEN_RANGE..=SCREEN_RANGE).into())
                    })
                    .collect()
            })
            .collect();
        let rows: Vec<Vec<BigInt>> = polys
            .iter()
            .map(|p| {
                let values: Vec<Rational> = points
                    .iter()
                    .map(|a| {
                        num_traits::pow(
                            p.eval(a).expect("point has the family dimension"),
                            r as usize,
                        )
                    })
                    .collect();
                let lcm = values.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
                values
                    .iter()
                    .map(|q| q.numer() * (&lcm / q.denom()))
                    .collect()
            })
            .collect();
        !linalg::integer_determinant(rows).is_zero()
    })
}

/// `max(k * C(k-1, 2), 2)`: every exponent strictly above it gives
/// independent powers for a pairwise independent family of size k.
pub fn theorem_bound(k: u64) -> Result<u64, IndependenceError> {
    if k < 2 {
        return Err(IndependenceError::InvalidFamilySize(k));
    }
    pairs(k - 1)
        .and_then(|c| c.checked_mul(k))
        .map(|b| b.max(2))
        .ok_or(IndependenceError::BoundOverflow(k))
}

/// `C(n, 2)`.
pub fn pairs(n: u64) -> Option<u64> {
    match n {
        0 | 1 => Some(0),
        _ if n.is_multiple_of(2) => (n / 2).checked_mul(n - 1),
        _ => n.checked_mul((n - 1) / 2),
    }
}

/// Divides out the gcd of the whole family. Returns the quotients and the
/// (normalized) common factor.
pub fn make_relatively_prime(
    polys: &[MultiPoly],
) -> Result<(Vec<MultiPoly>, MultiPoly), IndependenceError> {
    check_family(polys)?;
    let mut common = polys[0].primitive_normalized();
    for p in &polys[1..] {
        if common.is_constant() {
            break;
        }
        common = common.gcd(p)?;
    }
    let quotients = polys
        .iter()
        .map(|p| p.exact_div(&common))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((quotients, common))
}

/// Ascending exponents `r` in `1..=r_max` whose power family is dependent.
pub fn bad_exponents(polys: &[MultiPoly], r_max: u32) -> Result<Vec<u32>, IndependenceError> {
    if r_max < 1 {
        return Err(IndependenceError::EmptyExponentRange);
    }
    PowerFamily::new(polys.to_vec(), 1)?;
    if let Some((i, j)) = find_dependent_pair(polys)? {
        return Err(IndependenceError::PairwiseDependent(i, j));
    }
    Ok((1..=r_max)
        .into_par_iter()
        .filter(|&r| {
            let family = PowerFamily {
                polys: polys.to_vec(),
                exponent: r,
            };
            powers_dependency(&family).is_dependent()
        })
        .collect())
}
