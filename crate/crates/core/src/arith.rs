//! Arbitrary-precision helpers: modular inverses, primality, factorials and
//! a few exact operations on rationals that `num-rational` does not provide.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Miller-Rabin rounds used by [`next_prime`].
pub const PRIMALITY_ROUNDS: usize = 64;

const SMALL_PRIMES: [u32; 54] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

/// Inverse of `a` modulo `m`, or `None` when `gcd(a, m) != 1`.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_zero() {
        return None;
    }
    let m_int = BigInt::from(m.clone());
    let ext = BigInt::from(a.clone()).extended_gcd(&m_int);
    if !ext.gcd.is_one() {
        return None;
    }
    ext.x.mod_floor(&m_int).to_biguint()
}

/// Miller-Rabin with `rounds` random bases drawn from a generator seeded by the
/// candidate itself, so the answer is a pure function of `(n, rounds)`.
pub fn is_probable_prime(n: &BigUint, rounds: usize) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }

    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;

    let seed = n.iter_u64_digits().fold(0x9e37_79b9_7f4a_7c15u64, |acc, x| {
        acc.rotate_left(17) ^ x.wrapping_mul(0xbf58_476d_1ce4_e5b9)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_one);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest probable prime strictly greater than `n`.
pub fn next_prime(n: &BigUint) -> BigUint {
    let mut candidate = n + 1u32;
    if candidate <= BigUint::from(2u32) {
        return BigUint::from(2u32);
    }
    if candidate.is_even() {
        candidate += 1u32;
    }
    while !is_probable_prime(&candidate, PRIMALITY_ROUNDS) {
        candidate += 2u32;
    }
    candidate
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// `[0!, 1!, ..., n!]`
pub fn factorial_table(n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigUint::one());
    for k in 1..=n {
        let next = &out[k - 1] * BigUint::from(k);
        out.push(next);
    }
    out
}

pub fn floor(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &BigRational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// `floor(x + 1/2)`, i.e. nearest integer with ties rounded up.
pub fn round_half_up(x: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    (x.numer() * &two + x.denom()).div_floor(&(x.denom() * two))
}

pub fn int_to_rational(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

pub fn uint_to_rational(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

/// Smallest integer `r` with `r^k >= x` for non-negative rational `x`.
pub fn ceil_root(x: &BigRational, k: u32) -> BigUint {
    assert!(!x.is_negative(), "ceil_root of a negative value");
    let floor_x = floor(x).to_biguint().unwrap_or_default();
    let mut r = floor_x.nth_root(k);
    while uint_to_rational(&r.pow(k)) < *x {
        r += 1u32;
    }
    r
}

/// The rational with smallest denominator (then smallest numerator) lying
/// strictly inside `(lo, hi)`. `hi = None` stands for +infinity. Requires
/// `0 <= lo < hi`.
pub fn simplest_between(lo: &BigRational, hi: Option<&BigRational>) -> BigRational {
    debug_assert!(!lo.is_negative());
    let whole = floor(lo);
    let next_int = int_to_rational(&(&whole + 1));
    match hi {
        None => next_int,
        Some(h) if next_int < *h => next_int,
        Some(h) => {
            // lo and hi share the integer part; recurse on the reciprocals.
            let base = int_to_rational(&whole);
            let lo_frac = lo - &base;
            let hi_frac = h - &base;
            let inner_lo = hi_frac.recip();
            let inner_hi = if lo_frac.is_zero() { None } else { Some(lo_frac.recip()) };
            base + simplest_between(&inner_lo, inner_hi.as_ref()).recip()
        }
    }
}

/// Base-2 logarithm of a positive integer, accurate to about 52 bits.
pub fn log2(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap_or(0.0).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(0.0);
    top.log2() + shift as f64
}
