use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{format_rational, Degree, Monomial, PolyError, Rational, UniPoly};

/// Sparse multivariate polynomial over the rationals in a fixed number of
/// variables `x1, ..., xd`.
///
/// No stored coefficient is zero, so derived equality is semantic equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        MultiPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(dim), c);
        }
        p
    }

    /// The variable `x_{index+1}`.
    pub fn var(dim: usize, index: usize) -> Result<Self, PolyError> {
        if index >= dim {
            return Err(PolyError::VariableOutOfRange { index, dim });
        }
        let mut p = Self::zero(dim);
        p.terms.insert(Monomial::var(dim, index), Rational::one());
        Ok(p)
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, summing
    /// repeated monomials and dropping zeros.
    ///
    /// Panics if a monomial has the wrong number of exponents.
    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.dim(), dim, "monomial has wrong number of variables");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        acc.retain(|_, c| !c.is_zero());
        MultiPoly { dim, terms: acc }
    }

    /// Embeds a univariate polynomial as a polynomial in `x_{var+1}`.
    pub fn from_univariate(u: &UniPoly, dim: usize, var: usize) -> Result<Self, PolyError> {
        if var >= dim {
            return Err(PolyError::VariableOutOfRange { index: var, dim });
        }
        let terms = u.coefficients().iter().enumerate().map(|(e, c)| {
            let mut m = Monomial::one(dim);
            if e > 0 {
                m = m.with_exponent(var, e as u32);
            }
            (m, c.clone())
        });
        Ok(Self::from_terms(dim, terms))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (zero for the zero polynomial).
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.coefficient(&Monomial::one(self.dim)))
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending grlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Leading term under grlex, `None` for zero.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn check_dim(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.dim != other.dim {
            return Err(PolyError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_dim(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(MultiPoly {
            dim: self.dim,
            terms,
        })
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_dim(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.dim));
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(MultiPoly {
            dim: self.dim,
            terms,
        })
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        MultiPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiplies every term by the monomial `m`.
    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        MultiPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    /// `self^r` by repeated squaring; `p^0 = 1` for every `p`, including zero.
    pub fn pow(&self, r: u32) -> MultiPoly {
        let mut result = Self::one(self.dim);
        if r == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut e = r;
        loop {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = &base * &base;
        }
        result
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .map_or(Degree::NegInf, Degree::Finite)
    }

    /// Degree in `x_{index+1}`; `NegInf` for the zero polynomial.
    pub fn degree_in(&self, index: usize) -> Result<Degree, PolyError> {
        if index >= self.dim {
            return Err(PolyError::VariableOutOfRange {
                index,
                dim: self.dim,
            });
        }
        Ok(self
            .terms
            .keys()
            .map(|m| m.exponent(index))
            .max()
            .map_or(Degree::NegInf, Degree::Finite))
    }

    /// Indices of the variables occurring with positive exponent.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.dim)
            .filter(|&i| self.terms.keys().any(|m| m.exponent(i) > 0))
            .collect()
    }

    /// Evaluates the variables named in `assignment`, keeping the others
    /// symbolic. The ambient dimension is unchanged.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<usize, Rational>,
    ) -> Result<MultiPoly, PolyError> {
        if let Some((&index, _)) = assignment.range(self.dim..).next() {
            return Err(PolyError::VariableOutOfRange {
                index,
                dim: self.dim,
            });
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = m.clone();
            for (&i, value) in assignment {
                let e = m.exponent(i);
                if e > 0 {
                    coeff *= num_traits::pow(value.clone(), e as usize);
                    rest = rest.without(i);
                }
            }
            out.push((rest, coeff));
        }
        Ok(Self::from_terms(self.dim, out))
    }

    /// Full evaluation at a point with one coordinate per variable.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.dim {
            return Err(PolyError::DimensionMismatch {
                left: self.dim,
                right: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Reads the polynomial as univariate in `x_{var+1}`. Fails if any other
    /// variable occurs.
    pub fn compress_to_univariate(&self, var: usize) -> Result<UniPoly, PolyError> {
        if var >= self.dim {
            return Err(PolyError::VariableOutOfRange {
                index: var,
                dim: self.dim,
            });
        }
        let mut coeffs =
            vec![Rational::zero(); self.total_degree().finite().map_or(0, |d| d as usize + 1)];
        for (m, c) in &self.terms {
            if m.without(var).is_one() {
                coeffs[m.exponent(var) as usize] = c.clone();
            } else {
                return Err(PolyError::NotUnivariate);
            }
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Coefficients of `self` viewed as a polynomial in `x_{var+1}` over the
    /// remaining variables; entry `e` multiplies `x_{var+1}^e`.
    pub(crate) fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = match self.degree_in(var) {
            Ok(Degree::Finite(d)) => d as usize,
            _ => return Vec::new(),
        };
        let mut out = vec![Self::zero(self.dim); deg + 1];
        for (m, c) in &self.terms {
            out[m.exponent(var) as usize]
                .terms
                .insert(m.without(var), c.clone());
        }
        out
    }

    /// Exact quotient `self / divisor`; [`PolyError::NotDivisible`] if the
    /// division leaves a remainder.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_dim(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.checked_div(lm).ok_or(PolyError::NotDivisible)?;
            let qc = c / lc;
            rem = &rem - &divisor.mul_monomial(&qm, &qc);
            quotient.push((qm, qc));
        }
        Ok(Self::from_terms(self.dim, quotient))
    }

    /// Scales to integer coefficients with gcd 1 and a positive grlex-leading
    /// coefficient. Zero stays zero.
    pub fn primitive_normalized(&self) -> MultiPoly {
        let Some((_, lead)) = self.leading_term() else {
            return self.clone();
        };
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if lead.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

// Operator forms panic on a dimension mismatch; the `try_*` methods report it.
impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("polynomial dimension mismatch")
    }
}

/// Canonical rendering, grlex-descending, e.g. `1/2*x1^2*x2 - x2 + 3`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (n, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                f.write_str(&format_rational(&abs))?;
                continue;
            }
            let mut factors = Vec::new();
            if !abs.is_one() {
                factors.push(format_rational(&abs));
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{e}", i + 1)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    fn poly(dim: usize, terms: &[(&[u32], i64)]) -> MultiPoly {
        MultiPoly::from_terms(dim, terms.iter().map(|(e, c)| (mono(e), rat(*c, 1))))
    }

    fn x() -> MultiPoly {
        MultiPoly::var(1, 0).unwrap()
    }

    fn c(v: i64) -> MultiPoly {
        MultiPoly::constant(1, rat(v, 1))
    }

    #[test]
    fn add_examples() {
        assert_eq!(&(&x() + &c(1)) + &(-&x()), c(1));
        let p = poly(1, &[(&[2], 3), (&[0], -1)]);
        assert_eq!(&p + &MultiPoly::zero(1), p);
        let a = &(&x() * &x()) - &c(1);
        let b = &(&x() * &x()) + &c(1);
        assert_eq!(&a + &b, poly(1, &[(&[2], 2)]));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&(&x() - &c(1)) * &(&x() + &c(1)), &(&x() * &x()) - &c(1));
        let p = poly(1, &[(&[3], 5), (&[1], -2)]);
        assert_eq!(&p * &c(1), p);
        let two_x = x().scale(&rat(2, 1));
        assert_eq!(&two_x * &two_x, poly(1, &[(&[2], 4)]));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = MultiPoly::one(1);
        let b = MultiPoly::one(2);
        assert_eq!(
            a.try_add(&b),
            Err(PolyError::DimensionMismatch { left: 1, right: 2 })
        );
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn pow_examples() {
        let p = &x() + &c(1);
        assert_eq!(p.pow(2), poly(1, &[(&[2], 1), (&[1], 2), (&[0], 1)]));
        assert_eq!(MultiPoly::zero(1).pow(3), MultiPoly::zero(1));
        assert_eq!(MultiPoly::zero(1).pow(0), MultiPoly::one(1));
        let q = &(&x() * &x()) - &c(1);
        // oracle: plain repeated multiplication
        assert_eq!(q.pow(2), &q * &q);
        assert_eq!(q.pow(2), poly(1, &[(&[4], 1), (&[2], -2), (&[0], 1)]));
    }

    #[test]
    fn degrees() {
        let p = poly(2, &[(&[2, 1], 1), (&[0, 1], 1)]);
        assert_eq!(p.total_degree(), Degree::Finite(3));
        assert_eq!(MultiPoly::zero(2).total_degree(), Degree::NegInf);
        assert_eq!(c(7).total_degree(), Degree::Finite(0));

        let q = poly(2, &[(&[2, 1], 1)]);
        assert_eq!(q.degree_in(1), Ok(Degree::Finite(1)));
        assert_eq!(q.degree_in(0), Ok(Degree::Finite(2)));
        assert_eq!(c(5).degree_in(0), Ok(Degree::Finite(0)));
        assert_eq!(MultiPoly::zero(2).degree_in(0), Ok(Degree::NegInf));
        assert_eq!(
            q.degree_in(2),
            Err(PolyError::VariableOutOfRange { index: 2, dim: 2 })
        );
    }

    #[test]
    fn substitute_examples() {
        let assign = |v: i64| BTreeMap::from([(1usize, rat(v, 1))]);
        let sum = poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(
            sum.substitute(&assign(1)).unwrap(),
            poly(2, &[(&[1, 0], 1), (&[0, 0], 1)])
        );
        let prod = poly(2, &[(&[1, 1], 1)]);
        assert!(prod.substitute(&assign(0)).unwrap().is_zero());
        let squares = poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        assert_eq!(
            squares.substitute(&assign(2)).unwrap(),
            poly(2, &[(&[2, 0], 1), (&[0, 0], 4)])
        );
        let bad = BTreeMap::from([(5usize, rat(1, 1))]);
        assert!(matches!(
            sum.substitute(&bad),
            Err(PolyError::VariableOutOfRange { index: 5, .. })
        ));
    }

    #[test]
    fn univariate_conversion() {
        let p = poly(2, &[(&[0, 3], 2), (&[0, 0], -1)]);
        let u = p.compress_to_univariate(1).unwrap();
        assert_eq!(u, UniPoly::from_ints(&[-1, 0, 0, 2]));
        assert_eq!(MultiPoly::from_univariate(&u, 2, 1).unwrap(), p);
        assert_eq!(p.compress_to_univariate(0), Err(PolyError::NotUnivariate));
    }

    #[test]
    fn exact_division() {
        let x2m1 = &(&x() * &x()) - &c(1);
        assert_eq!(x2m1.exact_div(&(&x() - &c(1))), Ok(&x() + &c(1)));
        assert_eq!(x2m1.exact_div(&x2m1), Ok(c(1)));
        let q = x2m1.pow(2).exact_div(&x2m1).unwrap();
        assert_eq!(&q * &x2m1, x2m1.pow(2));
        assert_eq!(q, x2m1);
        assert_eq!(x2m1.exact_div(&x()), Err(PolyError::NotDivisible));
        assert_eq!(
            x2m1.exact_div(&MultiPoly::zero(1)),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn display() {
        assert_eq!((&(&x() * &x()) - &c(1)).to_string(), "x1^2 - 1");
        assert_eq!(MultiPoly::zero(2).to_string(), "0");
        let half = MultiPoly::from_terms(2, [(mono(&[1, 1]), rat(1, 2))]);
        assert_eq!(half.to_string(), "1/2*x1*x2");
        let p = MultiPoly::from_terms(
            2,
            [
                (mono(&[0, 0]), rat(-3, 4)),
                (mono(&[1, 0]), rat(-1, 1)),
                (mono(&[0, 2]), rat(2, 1)),
            ],
        );
        assert_eq!(p.to_string(), "2*x2^2 - x1 - 3/4");
    }

    #[test]
    fn normalization() {
        let p = MultiPoly::from_terms(1, [(mono(&[1]), rat(-1, 2)), (mono(&[0]), rat(-1, 3))]);
        assert_eq!(p.primitive_normalized(), poly(1, &[(&[1], 3), (&[0], 2)]));
    }
}
