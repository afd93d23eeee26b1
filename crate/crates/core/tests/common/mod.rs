#![allow(dead_code)]

use powerindep::independence::sample_poly;
use powerindep::linalg::RationalMatrix;
use powerindep::poly::{rat, MultiPoly, Rational, UniPoly};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uni(c: &[i64]) -> UniPoly {
    UniPoly::from_ints(c)
}

pub fn multi(c: &[i64]) -> MultiPoly {
    MultiPoly::from(&uni(c))
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x, 1)).collect()
}

pub fn pythagorean() -> Vec<UniPoly> {
    vec![uni(&[0, 2]), uni(&[-1, 0, 1]), uni(&[1, 0, 1])]
}

pub fn rand_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    rat(
        rng.gen_range(-bound..=bound),
        rng.gen_range(1..=bound.max(1)),
    )
}

pub fn rand_uni<R: Rng>(rng: &mut R, max_degree: usize) -> UniPoly {
    let deg = rng.gen_range(0..=max_degree);
    UniPoly::new((0..=deg).map(|_| rat(rng.gen_range(-9..=9), 1)).collect())
}

pub fn rand_nonzero_uni<R: Rng>(rng: &mut R, max_degree: usize) -> UniPoly {
    loop {
        let p = rand_uni(rng, max_degree);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn rand_multi<R: Rng>(rng: &mut R, dim: usize, max_degree: u32) -> MultiPoly {
    sample_poly(rng, dim, max_degree, 0.5, 9)
}

pub fn rand_nonzero_multi<R: Rng>(rng: &mut R, dim: usize, max_degree: u32) -> MultiPoly {
    loop {
        let p = rand_multi(rng, dim, max_degree);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random matrix up to 8x8 with entries in [-9, 9]; about half of them are
/// built as a product through a narrow inner dimension, so rank deficiency
/// is common.
pub fn rand_matrix<R: Rng>(rng: &mut R) -> RationalMatrix {
    let rows = rng.gen_range(1..=8);
    let cols = rng.gen_range(1..=8);
    if rng.gen_bool(0.5) {
        let entries = (0..rows * cols)
            .map(|_| rat(rng.gen_range(-9..=9), 1))
            .collect();
        return RationalMatrix::new(rows, cols, entries).unwrap();
    }
    let inner = rng.gen_range(1..=rows.min(cols));
    let a: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..inner).map(|_| rng.gen_range(-3..=3)).collect())
        .collect();
    let b: Vec<Vec<i64>> = (0..inner)
        .map(|_| (0..cols).map(|_| rng.gen_range(-3..=3)).collect())
        .collect();
    let entries = (0..rows)
        .flat_map(|i| {
            let (a, b) = (&a, &b);
            (0..cols).map(move |j| rat((0..inner).map(|t| a[i][t] * b[t][j]).sum(), 1))
        })
        .collect();
    RationalMatrix::new(rows, cols, entries).unwrap()
}

/// Random univariate family of size 2..=5; roughly half get a last member
/// that is a combination of the others.
pub fn rand_uni_family<R: Rng>(rng: &mut R, max_degree: usize) -> Vec<UniPoly> {
    let k = rng.gen_range(2..=5);
    let mut fam: Vec<UniPoly> = (0..k).map(|_| rand_nonzero_uni(rng, max_degree)).collect();
    if rng.gen_bool(0.5) {
        let combo = fam[..k - 1].iter().fold(UniPoly::zero(), |acc, p| {
            &acc + &p.scale(&rat(rng.gen_range(-3..=3), 1))
        });
        if !combo.is_zero() {
            fam[k - 1] = combo;
        }
    }
    fam
}

/// `(2uv, u^2 - v^2, u^2 + v^2)`, whose squares satisfy `a^2 + b^2 = c^2`.
pub fn pythagorean_from(u: &MultiPoly, v: &MultiPoly) -> Vec<MultiPoly> {
    let uu = u * u;
    let vv = v * v;
    vec![(u * v).scale(&rat(2, 1)), &uu - &vv, &uu + &vv]
}

/// `u(q)` by Horner's rule.
pub fn compose(u: &UniPoly, q: &MultiPoly) -> MultiPoly {
    u.coefficients()
        .iter()
        .rev()
        .fold(MultiPoly::zero(q.dim()), |acc, c| {
            &(&acc * q) + &MultiPoly::constant(q.dim(), c.clone())
        })
}
