//! Simultaneous Diophantine approximation through lattice reduction.
//!
//! Given rationals `a_1 .. a_n` and `0 < eps < 1`, find `q > 0` and integers
//! `p_i` with `|a_i - p_i / q| <= eps / q`. The lattice spanned by
//! `(eps/Q, a_1, .., a_n)` and `-e_i` contains `(q eps/Q, q a_1 - p_1, ..)`,
//! which LLL finds when `Q = 2^{n(n+1)/4} eps^{-n}`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{ceil_root, int_to_rational, round_half_up, uint_to_rational};
use crate::error::{invalid, Result};
use crate::lattice::{default_delta, lll_reduce, norm_sq, LatticeBasis};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdaProblem {
    pub alphas: Vec<BigRational>,
    pub epsilon: BigRational,
    /// Scaling bound `Q` of the first column.
    pub q_bound: BigUint,
    /// Largest absolute numerator or denominator among the alphas.
    pub x_bound: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdaSolution {
    pub q: BigUint,
    pub ps: Vec<BigInt>,
    /// `max_i |a_i - p_i/q| * q`.
    pub quality: BigRational,
    /// Squared norm of the reduced row the solution was read from.
    pub row_norm_sq: BigRational,
}

impl SdaProblem {
    /// Problem with the default bound `Q = ceil(2^{n(n+1)/4} eps^{-n})`.
    pub fn new(alphas: Vec<BigRational>, epsilon: BigRational) -> Result<Self> {
        check_epsilon(&epsilon)?;
        if alphas.is_empty() {
            return Err(invalid("at least one alpha is required"));
        }
        let q_bound = default_q(alphas.len(), &epsilon);
        Ok(Self::with_q(alphas, epsilon, q_bound))
    }

    pub fn with_q(alphas: Vec<BigRational>, epsilon: BigRational, q_bound: BigUint) -> Self {
        let x_bound = alphas
            .iter()
            .flat_map(|a| [a.numer().magnitude().clone(), a.denom().magnitude().clone()])
            .max()
            .unwrap_or_default();
        Self {
            alphas,
            epsilon,
            q_bound,
            x_bound,
        }
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }
}

fn check_epsilon(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() || *eps >= BigRational::one() {
        return Err(invalid(format!("epsilon = {eps} must lie in (0, 1)")));
    }
    Ok(())
}

/// `ceil(2^{n(n+1)/4} eps^{-n})`, computed exactly as a fourth root.
pub fn default_q(n: usize, eps: &BigRational) -> BigUint {
    let n32 = n as u32;
    let two_pow = BigRational::from_integer(BigInt::one() << (n * (n + 1)));
    let fourth = two_pow * eps.recip().pow(4 * n32 as i32);
    ceil_root(&fourth, 4)
}

/// Whether `q < 2^{n(n+1)/4} eps^{-(n+1)}`, compared after raising to the 4th power.
pub fn within_q_limit(q: &BigUint, n: usize, eps: &BigRational) -> bool {
    let lhs = uint_to_rational(&q.pow(4));
    let rhs = BigRational::from_integer(BigInt::one() << (n * (n + 1))) * eps.recip().pow(4 * (n as i32 + 1));
    lhs < rhs
}

pub fn build_sda_lattice(problem: &SdaProblem) -> LatticeBasis {
    let n = problem.n();
    let mut rows = Vec::with_capacity(n + 1);
    let mut first = Vec::with_capacity(n + 1);
    first.push(&problem.epsilon / uint_to_rational(&problem.q_bound));
    first.extend(problem.alphas.iter().cloned());
    rows.push(first);
    for i in 1..=n {
        let mut row = vec![BigRational::zero(); n + 1];
        row[i] = -BigRational::one();
        rows.push(row);
    }
    LatticeBasis::new(rows).expect("square basis by construction")
}

/// Checks both approximation bounds for a candidate `(q, p)`.
pub fn satisfies_bounds(problem: &SdaProblem, q: &BigUint, ps: &[BigInt]) -> bool {
    if q.is_zero() || ps.len() != problem.n() {
        return false;
    }
    let qr = uint_to_rational(q);
    let eps_over_q = &problem.epsilon / &qr;
    within_q_limit(q, problem.n(), &problem.epsilon)
        && problem
            .alphas
            .iter()
            .zip(ps)
            .all(|(a, p)| (a - int_to_rational(p) / &qr).abs() <= eps_over_q)
}

pub fn solve_sda(problem: &SdaProblem) -> Result<Option<SdaSolution>> {
    check_epsilon(&problem.epsilon)?;
    if problem.q_bound.is_zero() {
        return Err(invalid("Q must be at least 1"));
    }
    let basis = build_sda_lattice(problem);
    let reduced = lll_reduce(&basis, &default_delta())?;
    let scale = uint_to_rational(&problem.q_bound) / &problem.epsilon;

    for row in reduced.rows() {
        if row[0].is_zero() {
            continue;
        }
        let q_rat = (&row[0] * &scale).abs();
        if !q_rat.is_integer() {
            continue;
        }
        let Some(q) = q_rat.to_integer().to_biguint() else {
            continue;
        };
        let qr = uint_to_rational(&q);
        let ps: Vec<BigInt> = problem.alphas.iter().map(|a| round_half_up(&(a * &qr))).collect();
        if !satisfies_bounds(problem, &q, &ps) {
            continue;
        }
        let quality = problem
            .alphas
            .iter()
            .zip(&ps)
            .map(|(a, p)| (a * &qr - int_to_rational(p)).abs())
            .max()
            .unwrap_or_default();
        return Ok(Some(SdaSolution {
            q,
            ps,
            quality,
            row_norm_sq: norm_sq(row)?,
        }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice_determinant;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn lattice_shape_one_dim() {
        let p = SdaProblem::with_q(vec![q(1, 3)], q(1, 2), 4u32.into());
        let b = build_sda_lattice(&p);
        assert_eq!(b.rows(), &[vec![q(1, 8), q(1, 3)], vec![q(0, 1), q(-1, 1)]]);
        assert_eq!(lattice_determinant(&b).unwrap(), q(1, 8));
    }

    #[test]
    fn lattice_shape_three_dim() {
        let p = SdaProblem::new(vec![q(1, 2), q(2, 7), q(5, 11)], q(1, 3)).unwrap();
        let b = build_sda_lattice(&p);
        assert_eq!(b.rank(), 4);
        for i in 1..4 {
            assert_eq!(b.rows()[i][i], q(-1, 1));
        }
        assert_eq!(lattice_determinant(&b).unwrap(), q(1, 3) / uint_to_rational(&p.q_bound));
    }

    #[test]
    fn default_q_values() {
        // n = 1, eps = 1/4: ceil(sqrt(2) * 4) = 6
        assert_eq!(default_q(1, &q(1, 4)), BigUint::from(6u32));
        // n = 3, eps = 1/2: 2^3 * 2^3 = 64
        assert_eq!(default_q(3, &q(1, 2)), BigUint::from(64u32));
    }

    #[test]
    fn integer_alphas() {
        let p = SdaProblem::new(vec![q(3, 1), q(-2, 1), q(0, 1)], q(1, 5)).unwrap();
        let s = solve_sda(&p).unwrap().unwrap();
        assert_eq!(s.q, BigUint::one());
        assert_eq!(s.ps, vec![3.into(), (-2).into(), 0.into()]);
        assert!(s.quality.is_zero());
    }

    #[test]
    fn one_dim_against_brute_force() {
        let a = q(3, 10);
        let eps = q(1, 4);
        let p = SdaProblem::new(vec![a.clone()], eps.clone()).unwrap();
        let s = solve_sda(&p).unwrap().expect("solution exists");
        // admissible pairs by exhaustive search over q below the limit
        let admissible: Vec<(u32, i64)> = (1u32..64)
            .filter(|&qq| within_q_limit(&qq.into(), 1, &eps))
            .flat_map(|qq| (-1i64..=qq as i64).map(move |pp| (qq, pp)))
            .filter(|&(qq, pp)| (&a - q(pp, qq as i64)).abs() <= &eps / q(qq as i64, 1))
            .collect();
        assert!(admissible.contains(&(3, 1)));
        let got = (u32::try_from(&s.q).unwrap(), i64::try_from(&s.ps[0]).unwrap());
        assert!(admissible.contains(&got), "{got:?} not in {admissible:?}");
        assert!(s.row_norm_sq < BigRational::one());
    }

    #[test]
    fn epsilon_validated() {
        assert!(SdaProblem::new(vec![q(1, 2)], q(1, 1)).is_err());
        assert!(SdaProblem::new(vec![q(1, 2)], q(0, 1)).is_err());
        assert!(SdaProblem::new(vec![], q(1, 2)).is_err());
        let bad = SdaProblem::with_q(vec![q(1, 2)], q(3, 2), 5u32.into());
        assert!(solve_sda(&bad).is_err());
    }
}
