//! Randomized validation of the exponent bound on sampled families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    find_dependent_pair, make_relatively_prime, powers_dependency, theorem_bound,
    IndependenceError, IndependenceVerdict, PowerFamily,
};
use crate::poly::{format_rational, Monomial, MultiPoly, Rational};

/// Which exponents to test for each family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Probe {
    /// `bound + 1 ..= bound + window`.
    AboveBound { window: u32 },
    /// Explicit exponents, including ones at or below the bound.
    Exponents(Vec<u32>),
}

impl Default for Probe {
    fn default() -> Self {
        Probe::AboveBound { window: 3 }
    }
}

impl Probe {
    pub fn exponents(&self, k: usize) -> Result<Vec<u32>, IndependenceError> {
        match self {
            Probe::AboveBound { window } => {
                let bound = theorem_bound(k as u64)?;
                let bound =
                    u32::try_from(bound).map_err(|_| IndependenceError::BoundOverflow(k as u64))?;
                Ok((1..=*window).map(|w| bound + w).collect())
            }
            Probe::Exponents(rs) => Ok(rs.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub k_min: usize,
    pub k_max: usize,
    pub d_min: usize,
    pub d_max: usize,
    /// Bound on the total degree of each sampled polynomial.
    pub max_degree: u32,
    /// Probability that a given monomial is in the support.
    pub density: f64,
    /// Coefficients are drawn uniformly from `-coeff_bound..=coeff_bound`.
    pub coeff_bound: i64,
    pub probe: Probe,
    /// Draws per trial before giving up.
    pub retry_budget: usize,
    /// Divide each sampled family by its gcd.
    pub relatively_prime: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            k_min: 3,
            k_max: 3,
            d_min: 1,
            d_max: 1,
            max_degree: 4,
            density: 0.5,
            coeff_bound: 9,
            probe: Probe::default(),
            retry_budget: 1000,
            relatively_prime: false,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<(), IndependenceError> {
        let bad = |msg: &str| Err(IndependenceError::InvalidConfig(msg.to_owned()));
        if self.k_min < 2 || self.k_min > self.k_max {
            return bad("need 2 <= k_min <= k_max");
        }
        if self.d_min < 1 || self.d_min > self.d_max {
            return bad("need 1 <= d_min <= d_max");
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return bad("density must lie in (0, 1]");
        }
        if self.coeff_bound < 1 {
            return bad("coefficient bound must be positive");
        }
        Ok(())
    }
}

/// A family whose powers turned out dependent at a probed exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub sub_seed: u64,
    pub dim: usize,
    pub polys: Vec<String>,
    pub exponent: u32,
    pub certificate: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub passes: usize,
    /// Number of (family, exponent) pairs checked.
    pub checks: usize,
    pub failures: Vec<Counterexample>,
    pub passed: bool,
}

impl VerifyReport {
    fn assemble(seed: u64, outcomes: Vec<(usize, Vec<Counterexample>)>) -> Self {
        let trials = outcomes.len();
        let checks = outcomes.iter().map(|(n, _)| n).sum();
        let passes = outcomes.iter().filter(|(_, f)| f.is_empty()).count();
        let failures: Vec<_> = outcomes.into_iter().flat_map(|(_, f)| f).collect();
        VerifyReport {
            seed,
            trials,
            passes,
            checks,
            passed: failures.is_empty(),
            failures,
        }
    }
}

/// Random polynomial in `dim` variables of total degree at most
/// `max_degree`; may be zero.
pub fn sample_poly<R: Rng>(
    rng: &mut R,
    dim: usize,
    max_degree: u32,
    density: f64,
    coeff_bound: i64,
) -> MultiPoly {
    let terms: Vec<(Monomial, Rational)> = monomials_up_to(dim, max_degree)
        .into_iter()
        .filter_map(|m| {
            rng.gen_bool(density).then(|| {
                (
                    m,
                    Rational::from_integer(rng.gen_range(-coeff_bound..=coeff_bound).into()),
                )
            })
        })
        .collect();
    MultiPoly::from_terms(dim, terms)
}

fn monomials_up_to(dim: usize, max_degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, dim: usize, left: u32, out: &mut Vec<Monomial>) {
        if prefix.len() == dim {
            out.push(Monomial::from_exponents(prefix.clone()));
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(prefix, dim, left - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(dim), dim, max_degree, &mut out);
    out
}

/// One draw of `k` polynomials; `None` if the draw has a zero member or a
/// proportional pair.
pub fn sample_family<R: Rng>(
    rng: &mut R,
    config: &SamplerConfig,
    k: usize,
    dim: usize,
) -> Option<Vec<MultiPoly>> {
    let family: Vec<MultiPoly> = (0..k)
        .map(|_| {
            sample_poly(
                rng,
                dim,
                config.max_degree,
                config.density,
                config.coeff_bound,
            )
        })
        .collect();
    if family.iter().any(MultiPoly::is_zero) || find_dependent_pair(&family).ok()?.is_some() {
        return None;
    }
    if config.relatively_prime {
        make_relatively_prime(&family).ok().map(|(q, _)| q)
    } else {
        Some(family)
    }
}

fn probe_family(
    trial: usize,
    sub_seed: u64,
    polys: &[MultiPoly],
    probe: &Probe,
) -> Result<(usize, Vec<Counterexample>), IndependenceError> {
    let exponents = probe.exponents(polys.len())?;
    let mut failures = Vec::new();
    for &r in &exponents {
        let family = PowerFamily::new(polys.to_vec(), r)?;
        if let IndependenceVerdict::Dependent(cert) = powers_dependency(&family) {
            failures.push(Counterexample {
                trial,
                sub_seed,
                dim: family.dim(),
                polys: polys.iter().map(ToString::to_string).collect(),
                exponent: r,
                certificate: cert.coefficients().iter().map(format_rational).collect(),
            });
        }
    }
    Ok((exponents.len(), failures))
}

/// Samples `trials` families and checks that their powers are independent
/// at every probed exponent.
///
/// Trial `i` draws from its own generator seeded with `seed ^ i`, so the
/// report does not depend on scheduling.
pub fn verify_theorem(
    config: &SamplerConfig,
    trials: usize,
    seed: u64,
) -> Result<VerifyReport, IndependenceError> {
    config.validate()?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let sub_seed = seed ^ trial as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
            let k = rng.gen_range(config.k_min..=config.k_max);
            let dim = rng.gen_range(config.d_min..=config.d_max);
            let family = (0..config.retry_budget)
                .find_map(|_| sample_family(&mut rng, config, k, dim))
                .ok_or(IndependenceError::SamplerExhausted {
                    trial,
                    attempts: config.retry_budget,
                })?;
            probe_family(trial, sub_seed, &family, &config.probe)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerifyReport::assemble(seed, outcomes))
}

/// Runs the same probe on caller-supplied families, which must be nonzero
/// and pairwise independent.
pub fn verify_families(
    families: &[Vec<MultiPoly>],
    probe: &Probe,
) -> Result<VerifyReport, IndependenceError> {
    let outcomes = families
        .iter()
        .enumerate()
        .map(|(trial, polys)| {
            if let Some((i, j)) = find_dependent_pair(polys)? {
                return Err(IndependenceError::PairwiseDependent(i, j));
            }
            probe_family(trial, 0, polys, probe)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerifyReport::assemble(0, outcomes))
}
