//! Reduction of a multivariate power dependence to a univariate one.
//!
//! All variables but one are replaced by integer constants found by seeded
//! random search. Every accepted point is verified exactly: the projected
//! polynomials must stay nonzero and pairwise independent.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::independence::{find_dependent_pair, IndependenceError, PowerFamily};
use crate::linalg::DependencyCertificate;
use crate::poly::{MultiPoly, PolyError, Rational, UniPoly};

/// Default number of candidate points tried by the search.
pub const DEFAULT_BUDGET: usize = 64;

const INITIAL_RANGE: i64 = 8;

/// Why a candidate point was rejected. Indices refer to the searched family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjectionFailure {
    /// Polynomial `j` vanished.
    Zero(usize),
    /// Polynomials `i` and `j` became proportional.
    Proportional(usize, usize),
    /// Polynomial `j` became constant while a nonzero constant term must be
    /// carried alongside it.
    ConstantBesideOffset(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectionError {
    #[error("empty polynomial family")]
    EmptyFamily,
    #[error("variable index {index} out of range for {dim} variables")]
    VariableOutOfRange { index: usize, dim: usize },
    #[error("polynomial {0} does not involve the kept variable")]
    KeptVariableMissing(usize),
    #[error("polynomials {0} and {1} are linearly dependent")]
    PairwiseDependent(usize, usize),
    #[error("reduction needs at least 2 variables, got {0}")]
    TooFewVariables(usize),
    #[error("certificate does not annihilate the r-th powers")]
    CertificateMismatch,
    #[error("point does not assign every variable except x{}", .0 + 1)]
    IncompletePoint(usize),
    #[error("no valid projection point after {attempts} attempts (last failure: {last:?})")]
    BudgetExhausted {
        attempts: usize,
        last: Option<ProjectionFailure>,
    },
    #[error("projection point rejected: {0:?}")]
    Rejected(ProjectionFailure),
    #[error(transparent)]
    Independence(#[from] IndependenceError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Values for every variable except `kept_variable`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionPoint {
    pub kept_variable: usize,
    pub values: BTreeMap<usize, Rational>,
}

impl ProjectionPoint {
    fn covers(&self, dim: usize) -> bool {
        self.kept_variable < dim
            && (0..dim).all(|v| v == self.kept_variable || self.values.contains_key(&v))
            && self
                .values
                .keys()
                .all(|&v| v < dim && v != self.kept_variable)
    }

    /// Substitutes the point and reads the result in the kept variable.
    pub fn project(&self, p: &MultiPoly) -> Result<UniPoly, PolyError> {
        p.substitute(&self.values)?
            .compress_to_univariate(self.kept_variable)
    }
}

/// Record of one reduction: which variable survived, where the others were
/// fixed, and the resulting univariate relation
/// `sum_{j in S} b_j pbar_j^r + gamma' = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub chosen_variable: usize,
    /// `support_sets[i]` lists the polynomials that involve `x_{i+1}`.
    pub support_sets: Vec<Vec<usize>>,
    /// Indices of the polynomials that involve the chosen variable.
    pub relabeled_family: Vec<usize>,
    pub point: ProjectionPoint,
    /// Projections of the polynomials in `relabeled_family`, in order.
    pub projected: Vec<UniPoly>,
    /// The full dependence `b_1, ..., b_k` being reduced.
    pub certificate: Vec<Rational>,
    /// Value of `sum_{j not in S} b_j p_j^r` at the point.
    pub gamma_prime: Rational,
    pub exponent: u32,
    pub attempts: usize,
}

impl ReductionTrace {
    /// Coefficients of the projected polynomials.
    pub fn coefficients(&self) -> Vec<Rational> {
        self.relabeled_family
            .iter()
            .map(|&j| self.certificate[j].clone())
            .collect()
    }

    /// The univariate dependent family with its coefficients. The constant
    /// polynomial 1 carries `gamma'` when `gamma'` is nonzero; since
    /// `1^r = 1` the relation holds for the r-th powers of this family.
    pub fn reduced_instance(&self) -> (Vec<UniPoly>, Vec<Rational>) {
        let mut polys = self.projected.clone();
        let mut coeffs = self.coefficients();
        if !self.gamma_prime.is_zero() {
            polys.push(UniPoly::one());
            coeffs.push(self.gamma_prime.clone());
        }
        (polys, coeffs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    Reduced(ReductionTrace),
    /// No variable is shared by two polynomials: each polynomial is
    /// univariate in its own variable (or constant) and a dependence among
    /// their powers cannot hold.
    AlreadyContradictory {
        support_sets: Vec<Vec<usize>>,
    },
}

/// `S_i = { j : deg_{x_i} p_j > 0 }` for each variable.
pub fn support_sets(polys: &[MultiPoly]) -> Vec<Vec<usize>> {
    let dim = polys.iter().map(MultiPoly::dim).max().unwrap_or(0);
    (0..dim)
        .map(|i| {
            polys
                .iter()
                .enumerate()
                .filter(|(_, p)| p.degree_in(i).is_ok_and(|d| d.is_positive()))
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

fn first_failure(projected: &[UniPoly]) -> Option<ProjectionFailure> {
    if let Some(j) = projected.iter().position(UniPoly::is_zero) {
        return Some(ProjectionFailure::Zero(j));
    }
    let multi: Vec<MultiPoly> = projected.iter().map(MultiPoly::from).collect();
    match find_dependent_pair(&multi) {
        Ok(Some((i, j))) => Some(ProjectionFailure::Proportional(i, j)),
        _ => None,
    }
}

fn check_search_input(polys: &[MultiPoly], keep: usize) -> Result<(), ProjectionError> {
    let first = polys.first().ok_or(ProjectionError::EmptyFamily)?;
    let dim = first.dim();
    if keep >= dim {
        return Err(ProjectionError::VariableOutOfRange { index: keep, dim });
    }
    for (j, p) in polys.iter().enumerate() {
        if !p.degree_in(keep)?.is_positive() {
            return Err(ProjectionError::KeptVariableMissing(j));
        }
    }
    if let Some((i, j)) = find_dependent_pair(polys)? {
        return Err(ProjectionError::PairwiseDependent(i, j));
    }
    Ok(())
}

/// Seeded search over integer points in `[-B, B]^(d-1)`, starting from
/// `B = 8` and doubling after every `budget / 4` rejections.
fn search<F>(
    polys: &[MultiPoly],
    keep: usize,
    seed: u64,
    budget: usize,
    extra: F,
) -> Result<(ProjectionPoint, Vec<UniPoly>, usize), ProjectionError>
where
    F: Fn(&ProjectionPoint, &[UniPoly]) -> Option<ProjectionFailure>,
{
    let dim = polys[0].dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = (budget / 4).max(1);
    let mut range = INITIAL_RANGE;
    let mut last = None;
    for attempt in 0..budget {
        if attempt > 0 && attempt % step == 0 {
            range = range.saturating_mul(2);
        }
        let values = (0..dim)
            .filter(|&v| v != keep)
            .map(|v| {
                (
                    v,
                    Rational::from_integer(rng.gen_range(-range..=range).into()),
                )
            })
            .collect();
        let point = ProjectionPoint {
            kept_variable: keep,
            values,
        };
        let projected = polys
            .iter()
            .map(|p| point.project(p))
            .collect::<Result<Vec<_>, _>>()?;
        match first_failure(&projected).or_else(|| extra(&point, &projected)) {
            None => return Ok((point, projected, attempt + 1)),
            Some(f) => last = Some(f),
        }
    }
    Err(ProjectionError::BudgetExhausted {
        attempts: budget,
        last,
    })
}

/// A point at which every polynomial of the family stays nonzero and no two
/// become proportional. Never returns an unverified point.
pub fn find_projection_point(
    polys: &[MultiPoly],
    keep: usize,
    seed: u64,
    budget: usize,
) -> Result<ProjectionPoint, ProjectionError> {
    check_search_input(polys, keep)?;
    search(polys, keep, seed, budget, |_, _| None).map(|(point, _, _)| point)
}

fn gamma_prime(
    family: &PowerFamily,
    coefficients: &[Rational],
    outside: impl Iterator<Item = usize>,
    point: &ProjectionPoint,
) -> Result<Rational, PolyError> {
    let mut total = Rational::zero();
    for j in outside {
        if coefficients[j].is_zero() {
            continue;
        }
        let value = family.polys()[j]
            .substitute(&point.values)?
            .constant_value()
            .expect("polynomial outside the support set is constant at the point");
        total += &coefficients[j] * num_traits::pow(value, family.exponent() as usize);
    }
    Ok(total)
}

fn check_dependent_family(
    family: &PowerFamily,
    certificate: &DependencyCertificate,
) -> Result<Vec<Vec<usize>>, ProjectionError> {
    if family.dim() < 2 {
        return Err(ProjectionError::TooFewVariables(family.dim()));
    }
    if !certificate.annihilates(&family.powers()) {
        return Err(ProjectionError::CertificateMismatch);
    }
    if let Some((i, j)) = find_dependent_pair(family.polys())? {
        return Err(ProjectionError::PairwiseDependent(i, j));
    }
    Ok(support_sets(family.polys()))
}

/// Projects the dependence `sum b_j p_j^r = 0` onto the first variable
/// shared by at least two polynomials.
pub fn reduce_to_univariate(
    family: &PowerFamily,
    certificate: &DependencyCertificate,
    seed: u64,
) -> Result<Reduction, ProjectionError> {
    reduce_with_budget(family, certificate, seed, DEFAULT_BUDGET)
}

pub fn reduce_with_budget(
    family: &PowerFamily,
    certificate: &DependencyCertificate,
    seed: u64,
    budget: usize,
) -> Result<Reduction, ProjectionError> {
    let sets = check_dependent_family(family, certificate)?;
    let Some(chosen) = sets.iter().position(|s| s.len() > 1) else {
        return Ok(Reduction::AlreadyContradictory { support_sets: sets });
    };
    let members = sets[chosen].clone();
    let subfamily: Vec<MultiPoly> = members.iter().map(|&j| family.polys()[j].clone()).collect();
    let beta = certificate.coefficients();
    let outside = |point: &ProjectionPoint| {
        gamma_prime(
            family,
            beta,
            (0..family.k()).filter(|j| !members.contains(j)),
            point,
        )
    };
    let (point, projected, attempts) =
        search(&subfamily, chosen, seed, budget, |point, projected| {
            constant_beside_offset(projected, &outside(point).ok()?)
        })?;
    let gamma = outside(&point)?;
    Ok(Reduction::Reduced(ReductionTrace {
        chosen_variable: chosen,
        support_sets: sets,
        relabeled_family: members,
        point,
        projected,
        certificate: beta.to_vec(),
        gamma_prime: gamma,
        exponent: family.exponent(),
        attempts,
    }))
}

fn constant_beside_offset(projected: &[UniPoly], gamma: &Rational) -> Option<ProjectionFailure> {
    if gamma.is_zero() {
        return None;
    }
    projected
        .iter()
        .position(UniPoly::is_constant)
        .map(ProjectionFailure::ConstantBesideOffset)
}

/// Builds the trace for a caller-chosen point, rejecting it if the reduced
/// family would not be nonzero and pairwise independent.
pub fn project_at(
    family: &PowerFamily,
    certificate: &DependencyCertificate,
    point: ProjectionPoint,
) -> Result<ReductionTrace, ProjectionError> {
    let sets = check_dependent_family(family, certificate)?;
    if !point.covers(family.dim()) {
        return Err(ProjectionError::IncompletePoint(point.kept_variable));
    }
    let chosen = point.kept_variable;
    let members = sets[chosen].clone();
    let projected = members
        .iter()
        .map(|&j| point.project(&family.polys()[j]))
        .collect::<Result<Vec<_>, _>>()?;
    let beta = certificate.coefficients();
    let gamma = gamma_prime(
        family,
        beta,
        (0..family.k()).filter(|j| !members.contains(j)),
        &point,
    )?;
    if let Some(f) =
        first_failure(&projected).or_else(|| constant_beside_offset(&projected, &gamma))
    {
        return Err(ProjectionError::Rejected(f));
    }
    Ok(ReductionTrace {
        chosen_variable: chosen,
        support_sets: sets,
        relabeled_family: members,
        point,
        projected,
        certificate: beta.to_vec(),
        gamma_prime: gamma,
        exponent: family.exponent(),
        attempts: 1,
    })
}

/// Replays a trace against its family: the projections, `gamma'`, the
/// univariate relation, and pairwise independence of the reduced family are
/// all recomputed exactly.
pub fn check_reduction_soundness(family: &PowerFamily, trace: &ReductionTrace) -> bool {
    replay(family, trace).unwrap_or(false)
}

fn replay(family: &PowerFamily, trace: &ReductionTrace) -> Option<bool> {
    let dim = family.dim();
    let sets = support_sets(family.polys());
    let ok_shape = trace.exponent == family.exponent()
        && trace.certificate.len() == family.k()
        && trace.certificate.iter().any(|b| !b.is_zero())
        && trace.chosen_variable < dim
        && trace.point.kept_variable == trace.chosen_variable
        && trace.point.covers(dim)
        && trace.support_sets == sets
        && trace.relabeled_family == sets[trace.chosen_variable]
        && trace.relabeled_family.len() > 1
        && trace.projected.len() == trace.relabeled_family.len();
    if !ok_shape {
        return Some(false);
    }
    let cert = DependencyCertificate::new(trace.certificate.clone(), &family.powers()).ok()?;
    for (&j, pbar) in trace.relabeled_family.iter().zip(&trace.projected) {
        if trace.point.project(&family.polys()[j]).ok()? != *pbar {
            return Some(false);
        }
    }
    let outside = (0..family.k()).filter(|j| !trace.relabeled_family.contains(j));
    if gamma_prime(family, cert.coefficients(), outside, &trace.point).ok()? != trace.gamma_prime {
        return Some(false);
    }
    let (polys, coeffs) = trace.reduced_instance();
    let relation = polys
        .iter()
        .zip(&coeffs)
        .fold(UniPoly::zero(), |acc, (p, b)| {
            &acc + &p.pow(trace.exponent).scale(b)
        });
    if !relation.is_zero() {
        return Some(false);
    }
    Some(first_failure(&polys).is_none() && !polys.iter().all(|p| p == &UniPoly::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Monomial};

    fn poly(dim: usize, terms: &[(&[u32], i64)]) -> MultiPoly {
        MultiPoly::from_terms(
            dim,
            terms
                .iter()
                .map(|(e, c)| (Monomial::from_exponents(e.to_vec()), rat(*c, 1))),
        )
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    /// Pythagorean triple in `x1 + c*x2`.
    fn shifted_triple(c: i64) -> Vec<MultiPoly> {
        let t = poly(2, &[(&[1, 0], 1), (&[0, 1], c)]);
        let one = MultiPoly::one(2);
        let tt = &t * &t;
        vec![t.scale(&rat(2, 1)), &tt - &one, &tt + &one]
    }

    #[test]
    fn support_set_examples() {
        let fam = [
            poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]),
            poly(2, &[(&[1, 0], 1), (&[0, 1], -1)]),
        ];
        assert_eq!(support_sets(&fam), vec![vec![0, 1], vec![0, 1]]);
        let fam = [poly(2, &[(&[1, 0], 1)]), poly(2, &[(&[0, 1], 1)])];
        assert_eq!(support_sets(&fam), vec![vec![0], vec![1]]);
        let fam = [poly(1, &[(&[0], 5)]), poly(1, &[(&[1], 1)])];
        assert_eq!(support_sets(&fam), vec![vec![1]]);
    }

    #[test]
    fn projection_of_sum_and_difference() {
        let fam = [
            poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]),
            poly(2, &[(&[1, 0], 1), (&[0, 1], -1)]),
        ];
        let point = find_projection_point(&fam, 0, 3, DEFAULT_BUDGET).unwrap();
        assert!(!point.values[&1].is_zero());
        let fam = [
            poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]),
            poly(2, &[(&[1, 0], 1), (&[0, 1], 2)]),
        ];
        let point = find_projection_point(&fam, 0, 3, DEFAULT_BUDGET).unwrap();
        let projected: Vec<_> = fam.iter().map(|p| point.project(p).unwrap()).collect();
        assert!(first_failure(&projected).is_none());
    }

    #[test]
    fn always_proportional_pair_exhausts_budget() {
        let fam = [poly(2, &[(&[1, 1], 1)]), poly(2, &[(&[1, 0], 1)])];
        let err = find_projection_point(&fam, 0, 0, 16).unwrap_err();
        match err {
            ProjectionError::BudgetExhausted { attempts, last } => {
                assert_eq!(attempts, 16);
                assert!(matches!(
                    last,
                    Some(ProjectionFailure::Proportional(0, 1)) | Some(ProjectionFailure::Zero(0))
                ));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn search_input_errors() {
        let fam = [poly(2, &[(&[0, 1], 1)]), poly(2, &[(&[1, 0], 1)])];
        assert_eq!(
            find_projection_point(&fam, 0, 0, 8),
            Err(ProjectionError::KeptVariableMissing(0))
        );
        assert!(matches!(
            find_projection_point(&fam, 2, 0, 8),
            Err(ProjectionError::VariableOutOfRange { index: 2, dim: 2 })
        ));
        let fam = [poly(2, &[(&[1, 0], 1)]), poly(2, &[(&[1, 0], 3)])];
        assert_eq!(
            find_projection_point(&fam, 0, 0, 8),
            Err(ProjectionError::PairwiseDependent(0, 1))
        );
    }

    #[test]
    fn reduces_shifted_pythagorean_triple() {
        let family = PowerFamily::new(shifted_triple(1), 2).unwrap();
        let cert = DependencyCertificate::new(ints(&[1, 1, -1]), &family.powers()).unwrap();
        let Reduction::Reduced(trace) = reduce_to_univariate(&family, &cert, 11).unwrap() else {
            panic!("expected a reduction");
        };
        assert_eq!(trace.chosen_variable, 0);
        assert_eq!(trace.relabeled_family, vec![0, 1, 2]);
        assert!(trace.gamma_prime.is_zero());
        assert!(check_reduction_soundness(&family, &trace));

        // at x2 = 0 the projection is the plain triple
        let point = ProjectionPoint {
            kept_variable: 0,
            values: BTreeMap::from([(1, rat(0, 1))]),
        };
        let trace = project_at(&family, &cert, point).unwrap();
        let plain: Vec<UniPoly> = [[0, 2, 0], [-1, 0, 1], [1, 0, 1]]
            .iter()
            .map(|c| UniPoly::from_ints(c))
            .collect();
        assert_eq!(trace.projected, plain);
    }

    #[test]
    fn offset_carries_outside_polynomials() {
        // x1 + x2 - (x1 + x2) = 0 at r = 1; S_1 = {0, 2}
        let fam = vec![
            poly(2, &[(&[1, 0], 1)]),
            poly(2, &[(&[0, 1], 1)]),
            poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]),
        ];
        let family = PowerFamily::new(fam, 1).unwrap();
        let cert = DependencyCertificate::new(ints(&[1, 1, -1]), &family.powers()).unwrap();
        let point = ProjectionPoint {
            kept_variable: 0,
            values: BTreeMap::from([(1, rat(1, 1))]),
        };
        let trace = project_at(&family, &cert, point).unwrap();
        assert_eq!(trace.relabeled_family, vec![0, 2]);
        assert_eq!(trace.gamma_prime, rat(1, 1));
        assert_eq!(
            trace.projected,
            vec![UniPoly::from_ints(&[0, 1]), UniPoly::from_ints(&[1, 1])]
        );
        let (polys, coeffs) = trace.reduced_instance();
        assert_eq!(polys.len(), 3);
        assert_eq!(coeffs, ints(&[1, -1, 1]));
        assert!(check_reduction_soundness(&family, &trace));

        let Reduction::Reduced(trace) = reduce_to_univariate(&family, &cert, 5).unwrap() else {
            panic!("expected a reduction");
        };
        assert_eq!(trace.gamma_prime, trace.point.values[&1]);
        assert!(check_reduction_soundness(&family, &trace));
    }

    #[test]
    fn rejects_univariate_input() {
        let fam: Vec<MultiPoly> = [[0, 2, 0], [-1, 0, 1], [1, 0, 1]]
            .iter()
            .map(|c| MultiPoly::from(&UniPoly::from_ints(c)))
            .collect();
        let family = PowerFamily::new(fam, 2).unwrap();
        let cert = DependencyCertificate::new(ints(&[1, 1, -1]), &family.powers()).unwrap();
        assert_eq!(
            reduce_to_univariate(&family, &cert, 0),
            Err(ProjectionError::TooFewVariables(1))
        );
    }

    #[test]
    fn tampered_traces_fail_replay() {
        let family = PowerFamily::new(shifted_triple(3), 2).unwrap();
        let cert = DependencyCertificate::new(ints(&[1, 1, -1]), &family.powers()).unwrap();
        let Reduction::Reduced(trace) = reduce_to_univariate(&family, &cert, 1).unwrap() else {
            panic!("expected a reduction");
        };
        assert!(check_reduction_soundness(&family, &trace));

        let mut bad = trace.clone();
        bad.gamma_prime = rat(1, 1);
        assert!(!check_reduction_soundness(&family, &bad));

        let mut bad = trace.clone();
        bad.projected[1] = UniPoly::zero();
        assert!(!check_reduction_soundness(&family, &bad));

        let mut bad = trace;
        bad.certificate = ints(&[0, 0, 0]);
        assert!(!check_reduction_soundness(&family, &bad));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let family = PowerFamily::new(shifted_triple(7), 2).unwrap();
        let cert = DependencyCertificate::new(ints(&[1, 1, -1]), &family.powers()).unwrap();
        assert_eq!(
            reduce_to_univariate(&family, &cert, 42).unwrap(),
            reduce_to_univariate(&family, &cert, 42).unwrap()
        );
    }
}
