//! Multivariate gcd over the rationals.
//!
//! Recursive on variables: pick a main variable, split each input into its
//! content (gcd of the coefficients, a polynomial in the other variables)
//! and primitive part, run a primitive pseudo-remainder sequence on the
//! primitive parts and multiply back the gcd of the contents.

use super::{Degree, Monomial, MultiPoly, PolyError};

impl MultiPoly {
    /// Greatest common divisor, normalized to integer coefficients with
    /// gcd 1 and a positive grlex-leading coefficient.
    pub fn gcd(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if self.dim() != other.dim() {
            return Err(PolyError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::GcdOfZeros);
        }
        Ok(gcd_rec(self, other))
    }
}

/// Free-function form of [`MultiPoly::gcd`].
pub fn gcd_multi(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly, PolyError> {
    a.gcd(b)
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.primitive_normalized();
    }
    if b.is_zero() {
        return a.primitive_normalized();
    }
    let mut vars = a.variables();
    vars.extend(b.variables());
    let Some(&main) = vars.iter().min() else {
        return MultiPoly::one(a.dim());
    };

    let (cont_a, pp_a) = split_content(a, main);
    let (cont_b, pp_b) = split_content(b, main);
    let content = gcd_rec(&cont_a, &cont_b);

    let (mut f, mut g) = if deg(&pp_a, main) >= deg(&pp_b, main) {
        (pp_a, pp_b)
    } else {
        (pp_b, pp_a)
    };
    let primitive = loop {
        if deg(&g, main) == 0 {
            // g is a unit in Q[rest][main] once its content is removed
            break MultiPoly::one(a.dim());
        }
        let r = pseudo_rem(&f, &g, main);
        if r.is_zero() {
            break g;
        }
        f = g;
        g = split_content(&r, main).1;
    };
    (&content * &primitive).primitive_normalized()
}

fn deg(p: &MultiPoly, var: usize) -> u32 {
    match p.degree_in(var) {
        Ok(Degree::Finite(d)) => d,
        _ => 0,
    }
}

/// (content, primitive part) of a nonzero `p` viewed in `Q[others][var]`.
fn split_content(p: &MultiPoly, var: usize) -> (MultiPoly, MultiPoly) {
    let coeffs = p.coefficients_in(var);
    let mut content = MultiPoly::zero(p.dim());
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        content = gcd_rec(&content, c);
        if content.is_constant() {
            break;
        }
    }
    let primitive = p
        .exact_div(&content)
        .expect("content divides every coefficient")
        .primitive_normalized();
    (content, primitive)
}

/// `lc(g)^e * f mod g` in `x_var`, without dividing in the coefficient ring.
fn pseudo_rem(f: &MultiPoly, g: &MultiPoly, var: usize) -> MultiPoly {
    let dg = deg(g, var);
    let lc_g = g.coefficients_in(var).pop().expect("g is nonzero");
    let one = num_traits::One::one();
    let mut r = f.clone();
    while !r.is_zero() && deg(&r, var) >= dg {
        let dr = deg(&r, var);
        let lc_r = r.coefficients_in(var).pop().expect("r is nonzero");
        let shift = Monomial::one(r.dim()).with_exponent(var, dr - dg);
        r = &(&lc_g * &r) - &(&lc_r * &g.mul_monomial(&shift, &one));
    }
    r
}
