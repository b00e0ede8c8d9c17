//! Ciphertext-only attack recovering an equivalent super-increasing key.
//!
//! For the trapdoor `U = w^-1 mod p` there are integers `k_i` with
//! `a_i U - k_i p = b_i`, so `k_1 / a_1` sits just below `U / p` and the
//! vector `(lambda k_1, k_1 a_2 - k_2 a_1, .., k_1 a_l - k_l a_1)` is unusually
//! short in the lattice spanned by `(lambda, a_2, .., a_l)` and `-a_1 e_i`.
//! LLL exposes it, `k_1` is read off the first coordinate, and a ratio
//! `U'/p'` just above `k_1/a_1` turns the public weights back into a
//! super-increasing sequence `b'_i = U' a_i mod p'`.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{floor, int_to_rational, simplest_between, uint_to_rational};
use crate::cryptosystem::{
    blocks_to_message, check_ciphertext_shape, encrypt, select_weights, Ciphertext, MessageBlock, PrivateKey,
    PublicKey,
};
use crate::error::{invalid, Result};
use crate::knapsack::{is_superincreasing, SuperIncreasingSequence, SuperIncreasingSet};
use crate::lattice::{default_delta, lll_reduce_with_stats, norm_sq, LatticeBasis, Vector};

/// Lattice widths tried by default, filtered to those the key supports.
pub const DEFAULT_ELL_SWEEP: [usize; 5] = [4, 6, 8, 10, 12];
/// Number of `lambda = 2^-e` values tried by default.
pub const DEFAULT_LAMBDA_COUNT: u32 = 16;
pub const DEFAULT_MAX_CANDIDATES: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackConfig {
    pub ell_sweep: Vec<usize>,
    pub lambda_sweep: Vec<BigRational>,
    /// Cap on distinct multipliers examined.
    pub max_candidates: usize,
}

impl AttackConfig {
    /// Default sweeps for a key with `n` public weights: `l` from
    /// [`DEFAULT_ELL_SWEEP`] and `lambda = 2^-e` for the
    /// [`DEFAULT_LAMBDA_COUNT`] exponents just below `n`.
    pub fn default_for(n: usize) -> Self {
        let ell_sweep: Vec<usize> = DEFAULT_ELL_SWEEP.iter().copied().filter(|&l| l <= n && l >= 2).collect();
        let ell_sweep = if ell_sweep.is_empty() { vec![n.max(2)] } else { ell_sweep };
        let hi = (n as u32).saturating_sub(1).max(1);
        let lo = hi.saturating_sub(DEFAULT_LAMBDA_COUNT - 1).max(1);
        Self {
            ell_sweep,
            lambda_sweep: lambda_sweep_from_exponents(lo, hi),
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.ell_sweep.is_empty() || self.lambda_sweep.is_empty() {
            return Err(invalid("attack sweeps must be non-empty"));
        }
        if let Some(l) = self.ell_sweep.iter().find(|&&l| l < 2 || l > n) {
            return Err(invalid(format!("ell = {l} must lie in [2, {n}]")));
        }
        if let Some(lam) = self.lambda_sweep.iter().find(|l| !l.is_positive()) {
            return Err(invalid(format!("lambda = {lam} must be positive")));
        }
        Ok(())
    }
}

/// `[2^-lo, .., 2^-hi]`, in increasing exponent order.
pub fn lambda_sweep_from_exponents(lo: u32, hi: u32) -> Vec<BigRational> {
    (lo..=hi)
        .map(|e| BigRational::new(BigInt::one(), BigInt::one() << e))
        .collect()
}

/// A multiplier read off one reduced lattice row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateMultiplier {
    pub k1: BigUint,
    /// `k_2 .. k_l`.
    pub ks: Vec<BigInt>,
    /// The reduced row, sign-normalized so its first entry is positive.
    pub source_vector: Vector,
    pub source_norm_sq: BigRational,
    pub ell: usize,
    pub lambda: BigRational,
}

/// `b'_i = U' a_i mod p'`, checked super-increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalentKey {
    pub u_prime: BigUint,
    pub p_prime: BigUint,
    pub b_prime: SuperIncreasingSequence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackReport {
    pub success: bool,
    pub equivalent_key: Option<EquivalentKey>,
    pub plaintext: Option<Vec<u8>>,
    pub candidates_tried: usize,
    pub config_used: AttackConfig,
    /// Re-encrypting the plaintext under the public key reproduced the
    /// ciphertext exactly.
    pub validation: bool,
    pub lattices_reduced: usize,
    pub lll_swaps: u64,
    /// Multiplier of the winning candidate.
    pub winning_k1: Option<BigUint>,
}

/// Row 0 is `(lambda, a_2, .., a_l)`; row `i` has `-a_1` in column `i`.
pub fn build_attack_lattice(a: &[BigUint], lambda: &BigRational) -> Result<LatticeBasis> {
    let l = a.len();
    if l < 2 {
        return Err(invalid("attack lattice needs at least two weights"));
    }
    if a.iter().any(|x| x.is_zero()) {
        return Err(invalid("attack lattice needs positive weights"));
    }
    let neg_a1 = -uint_to_rational(&a[0]);
    let mut rows = Vec::with_capacity(l);
    let mut first = Vec::with_capacity(l);
    first.push(lambda.clone());
    first.extend(a[1..].iter().map(uint_to_rational));
    rows.push(first);
    for i in 1..l {
        let mut row = vec![BigRational::zero(); l];
        row[i] = neg_a1.clone();
        rows.push(row);
    }
    LatticeBasis::new(rows)
}

/// Candidates from one reduced lattice, ordered by source norm then `k1`.
/// Also returns the number of LLL swaps spent.
pub fn candidates_from_lattice(a: &[BigUint], ell: usize, lambda: &BigRational) -> Result<(Vec<CandidateMultiplier>, u64)> {
    let weights = &a[..ell.min(a.len())];
    let basis = build_attack_lattice(weights, lambda)?;
    let (reduced, stats) = lll_reduce_with_stats(&basis, &default_delta())?;
    let a1 = BigInt::from(weights[0].clone());

    let mut out = Vec::new();
    for row in reduced.rows() {
        if row[0].is_zero() {
            continue;
        }
        let v: Vector = if row[0].is_negative() { row.iter().map(|x| -x).collect() } else { row.clone() };
        let k1_rat = &v[0] / lambda;
        if !k1_rat.is_integer() {
            continue;
        }
        let Some(k1) = k1_rat.to_integer().to_biguint() else {
            continue;
        };
        let k1_int = BigInt::from(k1.clone());
        let mut ks = Vec::with_capacity(ell - 1);
        for (ai, vi) in weights[1..].iter().zip(&v[1..]) {
            if !vi.is_integer() {
                break;
            }
            let num = &k1_int * BigInt::from(ai.clone()) - vi.to_integer();
            let (k, rem) = num.div_rem(&a1);
            if !rem.is_zero() {
                break;
            }
            ks.push(k);
        }
        if ks.len() != ell - 1 {
            continue;
        }
        let source_norm_sq = norm_sq(&v)?;
        out.push(CandidateMultiplier {
            k1,
            ks,
            source_vector: v,
            source_norm_sq,
            ell,
            lambda: lambda.clone(),
        });
    }
    out.sort_by(|x, y| x.source_norm_sq.cmp(&y.source_norm_sq).then_with(|| x.k1.cmp(&y.k1)));
    Ok((out, stats.swaps))
}

/// All candidates over the configured sweeps, deduplicated by `k1` and
/// capped at `max_candidates`.
pub fn recover_multiplier_candidates(pk: &PublicKey, config: &AttackConfig) -> Result<Vec<CandidateMultiplier>> {
    config.validate(pk.a.len())?;
    let mut all = Vec::new();
    for &ell in &config.ell_sweep {
        for lambda in &config.lambda_sweep {
            all.extend(candidates_from_lattice(&pk.a, ell, lambda)?.0);
        }
    }
    all.sort_by(|x, y| x.source_norm_sq.cmp(&y.source_norm_sq).then_with(|| x.k1.cmp(&y.k1)));
    let mut seen = HashSet::new();
    all.retain(|c| seen.insert(c.k1.clone()));
    all.truncate(config.max_candidates);
    Ok(all)
}

/// `b'_i = a_i U' mod p'` for every public weight, kept only if the result is
/// super-increasing.
pub fn derive_equivalent_key(pk: &PublicKey, u_prime: &BigUint, p_prime: &BigUint) -> Option<EquivalentKey> {
    if u_prime.is_zero() || *p_prime < BigUint::from(2u32) || pk.a.is_empty() {
        return None;
    }
    let b: Vec<BigUint> = pk.a.iter().map(|a| a * u_prime % p_prime).collect();
    if !is_superincreasing(&b).ok()? {
        return None;
    }
    Some(EquivalentKey {
        u_prime: u_prime.clone(),
        p_prime: p_prime.clone(),
        b_prime: SuperIncreasingSequence::new(b).ok()?,
    })
}

/// Searches ratios `x = U'/p'` in `(k1/a_1, (k1 + 2^{1-n})/a_1)` for one that
/// makes the fractional parts `{a_i x}` super-increasing with sum below one,
/// and returns the simplest such ratio as an equivalent key.
///
/// Inside that window each `{a_i x}` is piecewise linear in `x`; between
/// consecutive wrap points every condition is a half-line, so each piece is
/// solved exactly.
pub fn refine_equivalent_key(pk: &PublicKey, k1: &BigUint) -> Option<EquivalentKey> {
    let n = pk.a.len();
    let a1 = pk.a.first()?;
    if a1.is_zero() || n == 0 {
        return None;
    }
    let a1_int = BigInt::from(a1.clone());
    let a: Vec<BigInt> = pk.a.iter().map(|x| BigInt::from(x.clone())).collect();
    let c: Vec<BigInt> = pk.a.iter().map(|ai| BigInt::from(k1 * ai % a1)).collect();
    // z = a_1 x - k1 ranges over (0, 2^{1-n})
    let z_max = BigRational::new(BigInt::one(), BigInt::one() << (n - 1));

    let mut cuts: Vec<BigRational> = Vec::new();
    let cap = 8 * n + 8;
    for (ai, ci) in a.iter().zip(&c) {
        if ai.is_zero() {
            continue;
        }
        let mut j = BigInt::one();
        loop {
            let z = BigRational::new(&j * &a1_int - ci, ai.clone());
            if z >= z_max {
                break;
            }
            cuts.push(z);
            if cuts.len() > cap {
                return None;
            }
            j += 1;
        }
    }
    cuts.sort();
    cuts.dedup();

    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(BigRational::zero());
    edges.extend(cuts);
    edges.push(z_max);

    let k1_rat = uint_to_rational(k1);
    let a1_rat = int_to_rational(&a1_int);
    for piece in edges.windows(2) {
        let Some((lo, hi)) = feasible_piece(&a, &c, &a1_int, &piece[0], &piece[1]) else {
            continue;
        };
        let x = simplest_between(&((&k1_rat + lo) / &a1_rat), Some(&((&k1_rat + hi) / &a1_rat)));
        let (u, p) = (x.numer().to_biguint()?, x.denom().to_biguint()?);
        if let Some(key) = derive_equivalent_key(pk, &u, &p) {
            return Some(key);
        }
    }
    None
}

/// Sub-interval of `(lo, hi)` where `G_i(z) = c_i + a_i z - w_i a_1` (with
/// `w_i` fixed by the piece) is super-increasing and sums below `a_1`.
fn feasible_piece(
    a: &[BigInt],
    c: &[BigInt],
    a1: &BigInt,
    lo: &BigRational,
    hi: &BigRational,
) -> Option<(BigRational, BigRational)> {
    if lo >= hi {
        return None;
    }
    let mid = (lo + hi) / BigRational::from_integer(2.into());
    let a1_rat = int_to_rational(a1);
    let mut lower = lo.clone();
    let mut upper = hi.clone();
    // constraint alpha + gamma z > 0
    let mut apply = |alpha: BigInt, gamma: BigInt| -> bool {
        if gamma.is_zero() {
            return alpha.is_positive();
        }
        let bound = BigRational::new(-alpha, gamma.clone());
        if gamma.is_positive() {
            if bound > lower {
                lower = bound;
            }
        } else if bound < upper {
            upper = bound;
        }
        true
    };

    let mut beta_sum = BigInt::zero();
    let mut a_sum = BigInt::zero();
    for (i, (ai, ci)) in a.iter().zip(c).enumerate() {
        let wraps = floor(&((int_to_rational(ci) + int_to_rational(ai) * &mid) / &a1_rat));
        let beta = ci - wraps * a1;
        let ok = if i == 0 {
            apply(beta.clone(), ai.clone())
        } else {
            apply(&beta - &beta_sum, ai - &a_sum)
        };
        if !ok {
            return None;
        }
        beta_sum += beta;
        a_sum += ai;
    }
    if !apply(a1 - beta_sum, -a_sum) {
        return None;
    }
    (lower < upper).then_some((lower, upper))
}

/// Decrypts with an equivalent key. Each block is reduced with `U'` modulo
/// `p'`, lifted by multiples of `p'` until the greedy solver produces bits
/// that re-encrypt under the true public weights to the observed block.
pub fn attack_decrypt(pk: &PublicKey, eq: &EquivalentKey, ct: &Ciphertext) -> Result<Option<Vec<u8>>> {
    let params = &pk.params;
    check_ciphertext_shape(params, ct)?;
    let selected_b = select_weights(eq.b_prime.weights(), &ct.d_prime, params)?;
    let selected_a = select_weights(&pk.a, &ct.d_prime, params)?;
    let Ok(set) = SuperIncreasingSet::new(&selected_b) else {
        return Ok(None);
    };
    let total = set.total();
    let max_lift = total.div_ceil(&eq.p_prime);

    let mut blocks = Vec::with_capacity(ct.blocks.len());
    for c in &ct.blocks {
        let base = c * &eq.u_prime % &eq.p_prime;
        let mut found = None;
        let mut m = BigUint::zero();
        while m <= max_lift {
            let target = &base + &m * &eq.p_prime;
            if target > total {
                break;
            }
            if let Some(bits) = set.solve(&target) {
                if bits.dot(&selected_a) == *c {
                    found = Some(bits);
                    break;
                }
            }
            m += 1u32;
        }
        match found {
            Some(bits) => blocks.push(MessageBlock(bits)),
            None => return Ok(None),
        }
    }
    Ok(blocks_to_message(&blocks, ct.msg_len_bytes))
}

fn validated(pk: &PublicKey, ct: &Ciphertext, plaintext: &[u8]) -> bool {
    encrypt(pk, plaintext).map(|re| re == *ct).unwrap_or(false)
}

/// Tries a single multiplier: first the pair `(k1, a_1)`, then the refined
/// ratio just above `k1 / a_1`.
pub fn try_candidate(pk: &PublicKey, ct: &Ciphertext, k1: &BigUint) -> Result<Option<(EquivalentKey, Vec<u8>)>> {
    let literal = derive_equivalent_key(pk, k1, &pk.a[0]);
    let keys = literal.into_iter().chain(std::iter::once_with(|| refine_equivalent_key(pk, k1)).flatten());
    for key in keys {
        if let Some(plain) = attack_decrypt(pk, &key, ct)? {
            if validated(pk, ct, &plain) {
                return Ok(Some((key, plain)));
            }
        }
    }
    Ok(None)
}

/// Runs the sweeps in order, testing candidates as each lattice is reduced,
/// and stops at the first plaintext that survives re-encryption.
pub fn full_attack(pk: &PublicKey, ct: &Ciphertext, config: &AttackConfig) -> Result<AttackReport> {
    config.validate(pk.a.len())?;
    let mut report = AttackReport {
        success: false,
        equivalent_key: None,
        plaintext: None,
        candidates_tried: 0,
        config_used: config.clone(),
        validation: false,
        lattices_reduced: 0,
        lll_swaps: 0,
        winning_k1: None,
    };
    let mut seen: HashSet<BigUint> = HashSet::new();

    'sweep: for &ell in &config.ell_sweep {
        for lambda in &config.lambda_sweep {
            let (cands, swaps) = candidates_from_lattice(&pk.a, ell, lambda)?;
            report.lattices_reduced += 1;
            report.lll_swaps += swaps;
            for cand in cands {
                if !seen.insert(cand.k1.clone()) {
                    continue;
                }
                if report.candidates_tried >= config.max_candidates {
                    break 'sweep;
                }
                report.candidates_tried += 1;
                if let Some((key, plain)) = try_candidate(pk, ct, &cand.k1)? {
                    report.validation = validated(pk, ct, &plain);
                    report.success = report.validation;
                    report.equivalent_key = Some(key);
                    report.plaintext = Some(plain);
                    report.winning_k1 = Some(cand.k1);
                    break 'sweep;
                }
            }
        }
    }
    Ok(report)
}

/// Diagnostics computed with the true private key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrueMultiplierDiagnostics {
    /// `k_1 = (a_1 U - b_1) / p`.
    pub k1: BigUint,
    /// Indices `i >= 2` checked against `|a_i k_1 - a_1 k_i| < p / 2^{n-i-1}`.
    pub checked: usize,
    pub violations: usize,
}

pub fn true_multiplier_diagnostics(pk: &PublicKey, sk: &PrivateKey) -> TrueMultiplierDiagnostics {
    let n = pk.a.len();
    let u = &sk.w_inv;
    let k: Vec<BigInt> = pk
        .a
        .iter()
        .zip(sk.b.weights())
        .map(|(a, b)| (BigInt::from(a * u) - BigInt::from(b.clone())) / BigInt::from(sk.p.clone()))
        .collect();
    let a: Vec<BigInt> = pk.a.iter().map(|x| BigInt::from(x.clone())).collect();
    let p = BigInt::from(sk.p.clone());
    let mut violations = 0;
    for i in 1..n {
        // 1-based index i+1: bound p / 2^{n-(i+1)-1}
        let lhs = (&a[i] * &k[0] - &a[0] * &k[i]).abs();
        let shift = n as i64 - (i as i64 + 1) - 1;
        let holds = if shift >= 0 {
            (lhs << shift as usize) < p
        } else {
            lhs < (&p << (-shift) as usize)
        };
        if !holds {
            violations += 1;
        }
    }
    TrueMultiplierDiagnostics {
        k1: k[0].to_biguint().unwrap_or_default(),
        checked: n.saturating_sub(1),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cryptosystem::{keygen, SchemeParams};
    use crate::lattice::lattice_determinant;
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn uints(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn small_public() -> PublicKey {
        PublicKey {
            a: uints(&[34, 51, 58, 11, 39]),
            params: SchemeParams::new(5, 1, 5, 5, 0).unwrap(),
        }
    }

    #[test]
    fn lattice_layout() {
        let b = build_attack_lattice(&uints(&[5, 7, 11]), &r(1, 4)).unwrap();
        let want = vec![
            vec![r(1, 4), r(7, 1), r(11, 1)],
            vec![r(0, 1), r(-5, 1), r(0, 1)],
            vec![r(0, 1), r(0, 1), r(-5, 1)],
        ];
        assert_eq!(b.rows(), want.as_slice());
        assert_eq!(lattice_determinant(&b).unwrap(), r(25, 4));

        let two = build_attack_lattice(&uints(&[9, 4]), &r(3, 1)).unwrap();
        assert_eq!(two.rank(), 2);
        assert_eq!(lattice_determinant(&two).unwrap(), r(27, 1));

        assert!(build_attack_lattice(&uints(&[9]), &r(1, 1)).is_err());
        assert!(build_attack_lattice(&uints(&[0, 4]), &r(1, 1)).is_err());
    }

    #[test]
    fn small_key_equivalent() {
        let pk = small_public();
        let key = derive_equivalent_key(&pk, &18u32.into(), &61u32.into()).unwrap();
        assert_eq!(key.b_prime.weights(), uints(&[2, 3, 7, 15, 31]).as_slice());
        assert!(derive_equivalent_key(&pk, &0u32.into(), &61u32.into()).is_none());
        assert!(derive_equivalent_key(&pk, &18u32.into(), &1u32.into()).is_none());
    }

    #[test]
    fn literal_pair_never_superincreasing() {
        for seed in 0..10 {
            let kp = keygen(&SchemeParams::desk(16), seed).unwrap();
            let d = true_multiplier_diagnostics(&kp.public, &kp.private);
            assert!(derive_equivalent_key(&kp.public, &d.k1, &kp.public.a[0]).is_none());
        }
    }

    #[test]
    fn random_pairs_rarely_work() {
        let kp = keygen(&SchemeParams::desk(16), 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let hits = (0..200)
            .filter(|_| {
                let u = BigUint::from(rng.next_u64());
                let p = BigUint::from(rng.next_u64() | 1) + &kp.private.p;
                derive_equivalent_key(&kp.public, &u, &p).is_some()
            })
            .count();
        assert_eq!(hits, 0);
    }

    #[test]
    fn true_trapdoor_reproduces_b() {
        for seed in 0..10 {
            let kp = keygen(&SchemeParams::desk(16), seed).unwrap();
            let key = derive_equivalent_key(&kp.public, &kp.private.w_inv, &kp.private.p).unwrap();
            assert_eq!(key.b_prime, kp.private.b);
        }
    }

    #[test]
    fn true_k1_refines() {
        for seed in 0..10 {
            let kp = keygen(&SchemeParams::desk(24), seed).unwrap();
            let d = true_multiplier_diagnostics(&kp.public, &kp.private);
            let key = refine_equivalent_key(&kp.public, &d.k1).expect("refined key");
            let x = BigRational::new(key.u_prime.clone().into(), key.p_prime.clone().into());
            let lo = BigRational::new(d.k1.clone().into(), kp.public.a[0].clone().into());
            assert!(x > lo);
        }
    }

    #[test]
    fn k1_read_exactly() {
        let kp = keygen(&SchemeParams::desk(16), 1).unwrap();
        let lambda = r(1, 1 << 10);
        let (cands, _) = candidates_from_lattice(&kp.public.a, 6, &lambda).unwrap();
        assert!(!cands.is_empty());
        for c in &cands {
            assert_eq!(c.source_vector[0], &lambda * uint_to_rational(&c.k1));
            assert!(c.source_vector[0].is_positive());
            assert_eq!(c.ks.len(), 5);
        }
        for w in cands.windows(2) {
            assert!(w[0].source_norm_sq <= w[1].source_norm_sq);
        }
    }

    #[test]
    fn attack_decrypt_with_true_key() {
        let kp = keygen(&SchemeParams::desk(16), 4).unwrap();
        let key = derive_equivalent_key(&kp.public, &kp.private.w_inv, &kp.private.p).unwrap();
        let msg = b"desk".to_vec();
        let ct = encrypt(&kp.public, &msg).unwrap();
        assert_eq!(attack_decrypt(&kp.public, &key, &ct).unwrap(), Some(msg));
    }

    #[test]
    fn wrong_key_never_succeeds() {
        let kp = keygen(&SchemeParams::desk(16), 4).unwrap();
        let other = keygen(&SchemeParams::desk(16), 5).unwrap();
        let key = derive_equivalent_key(&other.public, &other.private.w_inv, &other.private.p).unwrap();
        let ct = encrypt(&kp.public, b"abcd").unwrap();
        assert_eq!(attack_decrypt(&kp.public, &key, &ct).unwrap(), None);
    }

    #[test]
    fn attack_recovers_desk_messages() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut wins = 0;
        for seed in 0..6 {
            let kp = keygen(&SchemeParams::desk(16), seed).unwrap();
            let mut msg = vec![0u8; 3];
            rng.fill_bytes(&mut msg);
            let ct = encrypt(&kp.public, &msg).unwrap();
            let rep = full_attack(&kp.public, &ct, &AttackConfig::default_for(16)).unwrap();
            if rep.success {
                wins += 1;
                assert!(rep.validation);
                assert_eq!(rep.plaintext.as_deref(), Some(msg.as_slice()));
                assert!(rep.winning_k1.is_some());
            } else {
                assert!(rep.plaintext.is_none());
            }
            assert!(rep.candidates_tried <= DEFAULT_MAX_CANDIDATES);
        }
        assert!(wins >= 4, "only {wins} of 6");
    }

    #[test]
    fn zero_message_is_trivially_consistent() {
        let kp = keygen(&SchemeParams::desk(16), 2).unwrap();
        let ct = encrypt(&kp.public, &[0u8; 2]).unwrap();
        let rep = full_attack(&kp.public, &ct, &AttackConfig::default_for(16)).unwrap();
        assert!(rep.success && rep.validation);
        assert_eq!(rep.plaintext.unwrap(), vec![0u8; 2]);
    }

    #[test]
    fn huge_lambda_yields_no_false_success() {
        let kp = keygen(&SchemeParams::desk(16), 3).unwrap();
        let ct = encrypt(&kp.public, b"xy").unwrap();
        let cfg = AttackConfig {
            ell_sweep: vec![4],
            lambda_sweep: vec![BigRational::from_integer(BigInt::one() << 200)],
            max_candidates: 8,
        };
        let rep = full_attack(&kp.public, &ct, &cfg).unwrap();
        if rep.success {
            assert_eq!(rep.plaintext.unwrap(), b"xy".to_vec());
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = AttackConfig::default_for(16);
        assert!(cfg.validate(16).is_ok());
        assert!(cfg.ell_sweep.iter().all(|&l| l <= 16));
        cfg.ell_sweep = vec![1];
        assert!(cfg.validate(16).is_err());
        cfg.ell_sweep = vec![17];
        assert!(cfg.validate(16).is_err());
        cfg.ell_sweep = vec![4];
        cfg.lambda_sweep = vec![r(0, 1)];
        assert!(cfg.validate(16).is_err());
        assert_eq!(lambda_sweep_from_exponents(2, 4), vec![r(1, 4), r(1, 8), r(1, 16)]);
    }

    #[test]
    fn true_multiplier_bound_mostly_holds() {
        let mut checked = 0;
        let mut violations = 0;
        for seed in 0..10 {
            let kp = keygen(&SchemeParams::desk(24), seed).unwrap();
            let d = true_multiplier_diagnostics(&kp.public, &kp.private);
            assert_eq!(d.checked, 23);
            checked += d.checked;
            violations += d.violations;
        }
        assert!(violations * 10 < checked, "{violations} of {checked}");
    }

    #[test]
    fn identity_multiplier_key() {
        let b = SuperIncreasingSequence::new(uints(&[3, 5, 11, 20, 41, 90])).unwrap();
        let p: BigUint = 173u32.into();
        let sk = PrivateKey::from_parts(b, BigUint::one(), p).unwrap();
        let pk = sk.public_key(SchemeParams::new(6, 2, 3, 2, 0).unwrap());
        let d = true_multiplier_diagnostics(&pk, &sk);
        assert!(d.k1.is_zero());
        let ct = encrypt(&pk, b"q").unwrap();
        let rep = full_attack(&pk, &ct, &AttackConfig::default_for(6)).unwrap();
        assert!(rep.success);
        assert_eq!(rep.plaintext.unwrap(), b"q".to_vec());
    }
}
