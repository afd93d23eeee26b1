//! Slow reference implementations used to cross-check the main code paths,
//! and a harness that recomputes the worked examples with them.
//!
//! Nothing here shares an algorithm with the code it checks: ranks use plain
//! rational elimination, powers use repeated multiplication, and dependence
//! of univariate families is decided from values at fixed points.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::independence::{
    bad_exponents, linear_dependency, make_relatively_prime, pairwise_independent,
    powers_dependency, verify_theorem, PowerFamily, SamplerConfig,
};
use crate::linalg::{self, DependencyCertificate, RationalMatrix};
use crate::mason::{implied_r_bound, mason_check, radical_count, squarefree_part};
use crate::poly::{format_rational, rat, MultiPoly, Rational, UniPoly};
use crate::projection::{
    check_reduction_soundness, find_projection_point, reduce_to_univariate, Reduction,
};

/// Rank by Gaussian elimination over the rationals, pivoting on the first
/// nonzero entry of each column.
pub fn naive_rank(m: &RationalMatrix) -> usize {
    let mut a = m.to_rows();
    let rows = a.len();
    let mut r = 0;
    for col in 0..m.cols() {
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &a[r][col];
            let pivot_row = a[r].clone();
            for (v, pv) in a[i].iter_mut().zip(&pivot_row).skip(col) {
                *v -= &f * pv;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// `p * p * ... * p` (`r` factors); `p^0 = 1`.
pub fn naive_power(p: &MultiPoly, r: u32) -> MultiPoly {
    (0..r).fold(MultiPoly::one(p.dim()), |acc, _| &acc * p)
}

/// The fixed evaluation points `0, 1, -1, 2, -2, ...`.
pub fn grid_points(count: usize) -> Vec<Rational> {
    (0..count)
        .map(|i| {
            let n = i.div_ceil(2) as i64;
            rat(if i % 2 == 1 { n } else { -n }, 1)
        })
        .collect()
}

/// Dependence of a univariate family from its values at `D + 1` grid
/// points, `D` the largest degree. Polynomials of degree at most `D` are
/// determined by those values, so the value matrix has the same rank as the
/// coefficient matrix.
pub fn dependence_by_small_grid(polys: &[UniPoly]) -> bool {
    let max_degree = polys
        .iter()
        .filter_map(|p| p.degree().finite())
        .max()
        .unwrap_or(0) as usize;
    let points = grid_points(max_degree + 1);
    let rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| points.iter().map(|x| horner(p, x)).collect())
        .collect();
    naive_rank(&RationalMatrix::from_rows(rows)) < polys.len()
}

fn horner(p: &UniPoly, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.coefficients().iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// One recomputed example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub case: String,
    pub expected: String,
    pub got: String,
    pub agree: bool,
}

impl OracleResult {
    fn new(case: &str, expected: impl ToString, got: impl ToString) -> Self {
        let (expected, got) = (expected.to_string(), got.to_string());
        OracleResult {
            case: case.to_owned(),
            agree: expected == got,
            expected,
            got,
        }
    }
}

fn u(c: &[i64]) -> UniPoly {
    UniPoly::from_ints(c)
}

fn m(c: &[i64]) -> MultiPoly {
    MultiPoly::from(&u(c))
}

fn pythagorean() -> Vec<UniPoly> {
    vec![u(&[0, 2]), u(&[-1, 0, 1]), u(&[1, 0, 1])]
}

fn divides(d: &MultiPoly, p: &MultiPoly) -> bool {
    p.exact_div(d).is_ok_and(|q| &q * d == *p)
}

fn certificate_text(v: Option<&DependencyCertificate>) -> String {
    v.map_or("independent".into(), |c| {
        c.coefficients()
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(",")
    })
}

/// Every worked example, with the expected side taken from an oracle (or a
/// hand-derived value checked by one) and the other side from the library.
pub fn derived_cases() -> Vec<OracleResult> {
    let mut out = Vec::new();
    let triple = pythagorean();
    let triple_m: Vec<MultiPoly> = triple.iter().map(MultiPoly::from).collect();
    let squares: Vec<UniPoly> = triple.iter().map(|p| p.pow(2)).collect();
    let squares_m: Vec<MultiPoly> = squares.iter().map(MultiPoly::from).collect();

    let p = m(&[-1, 0, 1]);
    out.push(OracleResult::new(
        "pow (x^2-1)^2",
        naive_power(&p, 2),
        p.pow(2),
    ));

    let (a, b) = (m(&[-1, 0, 1]), m(&[1, 2, 1]));
    let g = a.gcd(&b).expect("nonzero");
    let checked = if divides(&g, &a) && divides(&g, &b) {
        g.to_string()
    } else {
        "not a divisor".into()
    };
    out.push(OracleResult::new("gcd(x^2-1, x^2+2x+1)", "x1 + 1", checked));

    let x1x2 = crate::cli::parse_poly("x1*x2", 2).expect("valid");
    let x1sq_x2 = crate::cli::parse_poly("x1^2*x2", 2).expect("valid");
    let g = x1x2.gcd(&x1sq_x2).expect("nonzero");
    let checked = if divides(&g, &x1x2) && divides(&g, &x1sq_x2) {
        g.to_string()
    } else {
        "not a divisor".into()
    };
    out.push(OracleResult::new("gcd(x1*x2, x1^2*x2)", "x1*x2", checked));

    let q = m(&[1, 0, -2, 0, 1])
        .exact_div(&m(&[-1, 0, 1]))
        .expect("exact");
    let back = &q * &m(&[-1, 0, 1]);
    out.push(OracleResult::new(
        "exact_div multiply-back",
        m(&[1, 0, -2, 0, 1]),
        back,
    ));

    let sq_matrix = linalg::coefficient_matrix(&squares_m).expect("nonempty");
    out.push(OracleResult::new(
        "rank of squared triple",
        naive_rank(&sq_matrix),
        linalg::rank(&sq_matrix),
    ));

    let k = linalg::kernel_basis(
        &linalg::coefficient_matrix(&[m(&[0, 1]), m(&[0, 2])]).expect("nonempty"),
    );
    out.push(OracleResult::new(
        "kernel of {x, 2x}",
        "1,-1/2",
        k.first().map_or(String::new(), |v| {
            v.iter().map(format_rational).collect::<Vec<_>>().join(",")
        }),
    ));

    let pair_oracle = (0..3).all(|i| {
        (i + 1..3).all(|j| {
            let pm = linalg::coefficient_matrix(&[triple_m[i].clone(), triple_m[j].clone()])
                .expect("nonempty");
            naive_rank(&pm) == 2
        })
    });
    out.push(OracleResult::new(
        "pairwise independence of triple",
        pair_oracle,
        pairwise_independent(&triple_m).expect("nonzero"),
    ));

    let lin = [u(&[1, 1]), u(&[-1, 1]), u(&[0, 1])];
    let lin_m: Vec<MultiPoly> = lin.iter().map(MultiPoly::from).collect();
    out.push(OracleResult::new(
        "{x+1, x-1, x} dependent",
        dependence_by_small_grid(&lin),
        linear_dependency(&lin_m).expect("nonempty").is_dependent(),
    ));

    for r in [2u32, 4] {
        let powered: Vec<UniPoly> = triple.iter().map(|p| p.pow(r)).collect();
        let family = PowerFamily::new(triple_m.clone(), r).expect("valid family");
        out.push(OracleResult::new(
            &format!("triple dependent at r = {r}"),
            dependence_by_small_grid(&powered),
            powers_dependency(&family).is_dependent(),
        ));
    }
    let family = PowerFamily::new(triple_m.clone(), 2).expect("valid family");
    out.push(OracleResult::new(
        "triple certificate at r = 2",
        "1,1,-1",
        certificate_text(powers_dependency(&family).certificate()),
    ));

    for (name, fam, common) in [
        (
            "relatively prime {x^2, x^3}",
            vec![m(&[0, 0, 1]), m(&[0, 0, 0, 1])],
            m(&[0, 0, 1]),
        ),
        (
            "relatively prime {2x(x+1), (x+1)^2}",
            vec![m(&[0, 2, 2]), m(&[1, 2, 1])],
            m(&[1, 1]),
        ),
    ] {
        let (quotients, g) = make_relatively_prime(&fam).expect("nonzero");
        let rebuilt = quotients.iter().zip(&fam).all(|(q, p)| &(q * &g) == p);
        out.push(OracleResult::new(
            name,
            format!("{common} true"),
            format!("{g} {rebuilt}"),
        ));
    }

    let grid_scan = |fam: &[UniPoly], rmax: u32| -> Vec<u32> {
        (1..=rmax)
            .filter(|&r| {
                dependence_by_small_grid(&fam.iter().map(|p| p.pow(r)).collect::<Vec<_>>())
            })
            .collect()
    };
    out.push(OracleResult::new(
        "bad exponents of triple up to 3",
        format!("{:?}", grid_scan(&triple, 3)),
        format!("{:?}", bad_exponents(&triple_m, 3).expect("valid")),
    ));
    let pair = [u(&[0, 1]), u(&[1, 1])];
    let pair_m: Vec<MultiPoly> = pair.iter().map(MultiPoly::from).collect();
    out.push(OracleResult::new(
        "bad exponents of {x, x+1} up to 2",
        format!("{:?}", grid_scan(&pair, 2)),
        format!("{:?}", bad_exponents(&pair_m, 2).expect("valid")),
    ));

    let sf = squarefree_part(&u(&[1, 0, -2, 0, 1])).expect("nonzero");
    out.push(OracleResult::new(
        "squarefree part of (x^2-1)^2",
        "x1^2 - 1",
        sf,
    ));

    // x (x^2 - 1)(x^2 + 1): five roots 0, 1, -1, i, -i
    let radical = &(&u(&[0, 1]) * &u(&[-1, 0, 1])) * &u(&[1, 0, 1]);
    out.push(OracleResult::new(
        "radical count of squared triple",
        radical.degree(),
        radical_count(&squares).expect("nonzero"),
    ));

    let q_family = [u(&[0, 0, 4]), u(&[1, 0, -2, 0, 1]), u(&[-1, 0, -2, 0, -1])];
    let v = mason_check(&q_family).expect("valid instance");
    out.push(OracleResult::new(
        "mason on squared triple",
        "4 5 4 true",
        format!("{} {} {} {}", v.max_degree, v.radical_count, v.rhs, v.holds),
    ));
    let v = mason_check(&[u(&[1]), u(&[0, 1]), u(&[-1, -1])]).expect("valid instance");
    out.push(OracleResult::new(
        "mason on {1, x, -x-1}",
        "1 2 1 true",
        format!("{} {} {} {}", v.max_degree, v.radical_count, v.rhs, v.holds),
    ));

    let cert = DependencyCertificate::new(vec![rat(1, 1), rat(1, 1), rat(-1, 1)], &squares_m)
        .expect("valid");
    let product_degree: u32 = triple.iter().filter_map(|p| p.degree().finite()).sum();
    let summed = Rational::new(
        (3 * (product_degree as i64 - 1)).into(),
        (product_degree as i64).into(),
    );
    out.push(OracleResult::new(
        "implied bound for squared triple",
        format_rational(&summed),
        implied_r_bound(&triple, 2, &cert).map_or_else(|e| e.to_string(), |b| format_rational(&b)),
    ));

    let x1 = crate::cli::parse_poly("x1", 2).expect("valid");
    let stuck = find_projection_point(&[x1x2.clone(), x1], 0, 0, 32);
    out.push(OracleResult::new(
        "projection of {x1*x2, x1} never separates",
        "budget exhausted",
        if stuck.is_err() {
            "budget exhausted"
        } else {
            "found a point"
        },
    ));

    let shifted: Vec<MultiPoly> = ["2*(x1+x2)", "(x1+x2)^2-1", "(x1+x2)^2+1"]
        .iter()
        .map(|t| crate::cli::parse_poly(t, 2).expect("valid"))
        .collect();
    let family = PowerFamily::new(shifted, 2).expect("valid family");
    let cert = DependencyCertificate::new(vec![rat(1, 1), rat(1, 1), rat(-1, 1)], &family.powers())
        .expect("valid");
    let sound = match reduce_to_univariate(&family, &cert, 0) {
        Ok(Reduction::Reduced(trace)) => {
            let (polys, _) = trace.reduced_instance();
            check_reduction_soundness(&family, &trace)
                && dependence_by_small_grid(&polys.iter().map(|p| p.pow(2)).collect::<Vec<_>>())
        }
        _ => false,
    };
    out.push(OracleResult::new(
        "reduction of shifted triple",
        true,
        sound,
    ));

    let report = verify_theorem(&SamplerConfig::default(), 50, 7).expect("sampler succeeds");
    out.push(OracleResult::new(
        "verify seed 7, 50 trials",
        50,
        report.passes,
    ));

    let one = MultiPoly::one(1);
    out.push(OracleResult::new(
        "naive_power r = 0",
        one.clone(),
        naive_power(&m(&[3, 1]), 0),
    ));
    out.push(OracleResult::new(
        "naive_rank of identity",
        3,
        naive_rank(&RationalMatrix::identity(3)),
    ));
    debug_assert!(Rational::one() == rat(1, 1));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_alternate() {
        assert_eq!(
            grid_points(5),
            vec![rat(0, 1), rat(1, 1), rat(-1, 1), rat(2, 1), rat(-2, 1)]
        );
    }

    #[test]
    fn naive_rank_basics() {
        assert_eq!(naive_rank(&RationalMatrix::identity(3)), 3);
        assert_eq!(naive_rank(&RationalMatrix::zeros(3, 3)), 0);
        assert_eq!(naive_rank(&RationalMatrix::zeros(0, 0)), 0);
    }

    #[test]
    fn naive_power_basics() {
        let p = m(&[2, -1, 1]);
        assert_eq!(naive_power(&p, 0), MultiPoly::one(1));
        assert_eq!(naive_power(&p, 1), p);
    }

    #[test]
    fn grid_examples() {
        assert!(dependence_by_small_grid(&[u(&[0, 1]), u(&[0, 2])]));
        assert!(!dependence_by_small_grid(&[
            u(&[1]),
            u(&[0, 1]),
            u(&[0, 0, 1])
        ]));
        let squares: Vec<UniPoly> = pythagorean().iter().map(|p| p.pow(2)).collect();
        assert!(dependence_by_small_grid(&squares));
    }
}
