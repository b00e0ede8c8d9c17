//! Super-increasing sequences and the greedy subset-sum solver.

use num_bigint::{BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

/// A strictly positive sequence where every term exceeds the sum of all
/// preceding terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperIncreasingSequence {
    weights: Vec<BigUint>,
}

impl SuperIncreasingSequence {
    pub fn new(weights: Vec<BigUint>) -> Result<Self> {
        if !is_superincreasing(&weights)? {
            return Err(invalid("weights are not super-increasing"));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> BigUint {
        self.weights.iter().sum()
    }

    pub fn into_weights(self) -> Vec<BigUint> {
        self.weights
    }
}

/// A generic subset-sum instance `(weights, target)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumInstance {
    pub weights: Vec<BigUint>,
    pub target: BigUint,
}

impl SubsetSumInstance {
    pub fn is_solved_by(&self, bits: &SolutionBits) -> bool {
        bits.len() == self.weights.len() && bits.dot(&self.weights) == self.target
    }
}

/// 0/1 selection vector, one entry per weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolutionBits(pub Vec<bool>);

impl SolutionBits {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, weights: &[BigUint]) -> BigUint {
        self.0
            .iter()
            .zip(weights)
            .filter(|(&bit, _)| bit)
            .map(|(_, w)| w)
            .sum()
    }

    pub fn as_u8(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }
}

/// Whether every weight is positive and exceeds the sum of its predecessors.
pub fn is_superincreasing(weights: &[BigUint]) -> Result<bool> {
    if weights.is_empty() {
        return Err(invalid("empty weight list"));
    }
    let mut prefix = BigUint::zero();
    for w in weights {
        if w.is_zero() || *w <= prefix {
            return Ok(false);
        }
        prefix += w;
    }
    Ok(true)
}

/// Deterministic super-increasing sequence: `b_1` is uniform in
/// `[1, 2^slack_bits]` and each later term is the running sum plus an offset
/// uniform in the same range.
pub fn generate_superincreasing(n: usize, slack_bits: u32, seed: u64) -> Result<SuperIncreasingSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_with_rng(n, slack_bits, &mut rng)
}

pub(crate) fn generate_with_rng<R: rand::Rng>(
    n: usize,
    slack_bits: u32,
    rng: &mut R,
) -> Result<SuperIncreasingSequence> {
    if n == 0 {
        return Err(invalid("sequence length must be at least 1"));
    }
    let one = BigUint::one();
    let upper = (BigUint::one() << slack_bits) + 1u32;
    let mut prefix = BigUint::zero();
    let mut weights = Vec::with_capacity(n);
    for _ in 0..n {
        let offset = rng.gen_biguint_range(&one, &upper);
        let w = &prefix + offset;
        prefix += &w;
        weights.push(w);
    }
    Ok(SuperIncreasingSequence { weights })
}

/// Greedy solver scanning from the largest weight down. Returns `None` when a
/// non-zero residual is left, i.e. `s` is not a subset sum.
pub fn solve_superincreasing(seq: &SuperIncreasingSequence, s: &BigUint) -> Option<SolutionBits> {
    greedy(seq.weights(), s)
}

/// Like [`solve_superincreasing`] but validates the weights first.
pub fn solve_weights(weights: &[BigUint], s: &BigUint) -> Result<Option<SolutionBits>> {
    if !is_superincreasing(weights)? {
        return Err(invalid("weights are not super-increasing"));
    }
    Ok(greedy(weights, s))
}

/// A set of weights that is super-increasing once sorted ascending, kept
/// together with the permutation back to the caller's positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperIncreasingSet {
    sorted: SuperIncreasingSequence,
    order: Vec<usize>,
}

impl SuperIncreasingSet {
    pub fn new(weights: &[BigUint]) -> Result<Self> {
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by(|&i, &j| weights[i].cmp(&weights[j]));
        let sorted = SuperIncreasingSequence::new(order.iter().map(|&i| weights[i].clone()).collect())?;
        Ok(Self { sorted, order })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn total(&self) -> BigUint {
        self.sorted.total()
    }

    /// Greedy solve on the sorted weights; bits come back in input order.
    pub fn solve(&self, s: &BigUint) -> Option<SolutionBits> {
        let bits = solve_superincreasing(&self.sorted, s)?;
        let mut out = vec![false; self.order.len()];
        for (bit, &pos) in bits.0.iter().zip(&self.order) {
            out[pos] = *bit;
        }
        Some(SolutionBits(out))
    }
}

/// Solves a subset-sum instance whose weights form a super-increasing set in
/// some order. See [`SuperIncreasingSet`].
pub fn solve_superincreasing_set(weights: &[BigUint], s: &BigUint) -> Result<Option<SolutionBits>> {
    Ok(SuperIncreasingSet::new(weights)?.solve(s))
}

fn greedy(weights: &[BigUint], s: &BigUint) -> Option<SolutionBits> {
    let mut residual = s.clone();
    let mut bits = vec![false; weights.len()];
    for (i, w) in weights.iter().enumerate().rev() {
        if residual >= *w {
            bits[i] = true;
            residual -= w;
        }
    }
    residual.is_zero().then_some(SolutionBits(bits))
}

/// Knapsack density `n / log2(max weight)`. The logarithm is rounded to 64
/// fractional bits before dividing.
pub fn density(weights: &[BigUint]) -> Result<BigRational> {
    let max = weights.iter().max().ok_or_else(|| invalid("empty weight list"))?;
    if *max < BigUint::from(2u32) {
        return Err(Error::InvalidInput("max weight must be at least 2".into()));
    }
    let log = log2_fixed(max, 64);
    Ok(BigRational::new(
        (BigUint::from(weights.len()) << 64u32).into(),
        log.into(),
    ))
}

/// `round(log2(x) * 2^frac_bits)` computed by repeated squaring of the
/// normalized mantissa. Exact powers of two give exact results.
fn log2_fixed(x: &BigUint, frac_bits: u32) -> BigUint {
    let int_part = x.bits() - 1;
    let mut acc = BigUint::from(int_part) << frac_bits;
    // mantissa y = x / 2^int_part in [1, 2), held with `prec` fractional bits
    let prec = frac_bits as u64 + 64;
    let mut y = if prec >= int_part {
        x << (prec - int_part)
    } else {
        x >> (int_part - prec)
    };
    let two = BigUint::from(2u32) << prec;
    let mut bit = BigUint::one() << frac_bits;
    // one extra iteration decides rounding
    for _ in 0..=frac_bits {
        bit >>= 1u32;
        y = (&y * &y) >> prec;
        if y >= two {
            y >>= 1u32;
            if bit.is_zero() {
                acc += 1u32;
            } else {
                acc += &bit;
            }
        }
    }
    acc
}
