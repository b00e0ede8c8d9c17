//! Factorial number system and the permutation-combination step.
//!
//! An index `0 <= m < n!` is written as `m = sum u_i * (n - i)!` with
//! `0 <= u_i <= n - i`. Applying the code to a list selects, for each `i` in
//! turn, the `(u_i + 1)`-th element among the ones not yet taken.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::arith::factorial_table;
use crate::error::{invalid, Error, Result};

/// Factorial-base digits `u_1 .. u_n` of an index below `n!`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LehmerCode {
    digits: Vec<usize>,
}

impl LehmerCode {
    pub fn new(digits: Vec<usize>) -> Result<Self> {
        let n = digits.len();
        for (i, &u) in digits.iter().enumerate() {
            // zero-based i, so the bound is n - 1 - i
            if u > n - 1 - i {
                return Err(invalid(format!(
                    "digit {} = {u} exceeds bound {}",
                    i + 1,
                    n - 1 - i
                )));
            }
        }
        Ok(Self { digits })
    }

    pub fn identity(n: usize) -> Self {
        Self { digits: vec![0; n] }
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

/// Greedy division by descending factorials: `u_i = floor(r_{i-1} / (n-i)!)`.
pub fn factorial_carry(m: &BigUint, n: usize) -> Result<LehmerCode> {
    let fact = factorial_table(n);
    if *m >= fact[n] {
        return Err(Error::OutOfRange(format!("index must be below {n}!")));
    }
    let mut rest = m.clone();
    let mut digits = Vec::with_capacity(n);
    for i in 1..=n {
        let f = &fact[n - i];
        let u = &rest / f;
        rest -= &u * f;
        digits.push(u.to_usize().expect("digit below n"));
    }
    debug_assert!(rest.is_zero());
    Ok(LehmerCode { digits })
}

pub fn lehmer_to_index(code: &LehmerCode) -> BigUint {
    let n = code.len();
    let fact = factorial_table(n);
    code.digits
        .iter()
        .enumerate()
        .map(|(i, &u)| &fact[n - 1 - i] * BigUint::from(u))
        .sum()
}

/// Reorders `elements` by the code: output position `i` takes the
/// `(u_i + 1)`-th element still remaining.
pub fn permute<T: Clone>(elements: &[T], code: &LehmerCode) -> Result<Vec<T>> {
    if elements.len() != code.len() {
        return Err(Error::DimensionMismatch {
            expected: code.len(),
            got: elements.len(),
        });
    }
    let mut remaining: Vec<&T> = elements.iter().collect();
    Ok(code
        .digits
        .iter()
        .map(|&u| remaining.remove(u).clone())
        .collect())
}
