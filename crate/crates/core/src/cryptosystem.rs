//! The attacked knapsack scheme.
//!
//! Private weights `b` are super-increasing; the public weights are
//! `a_i = b_i * w mod p`. Encryption hashes the message to a permutation
//! index `D'`, permutes every group of `group_size` public weights with the
//! same Lehmer code, keeps the first `take` of each group and sums the
//! selected weights against each message block.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{factorial, mod_inverse, next_prime};
use crate::error::{invalid, Error, Result};
use crate::knapsack::{generate_with_rng, SolutionBits, SuperIncreasingSequence, SuperIncreasingSet};
use crate::permutation::{factorial_carry, permute};

/// Digest construction used to derive the permutation index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum HashId {
    /// `SHA-256(M || ctr)` for a big-endian `u32` counter `0..4`, concatenated
    /// into 1024 bits and read as a big-endian integer.
    #[default]
    Sha256Ctr4,
}

impl HashId {
    pub const fn as_str(self) -> &'static str {
        match self {
            HashId::Sha256Ctr4 => "sha256-ctr4",
        }
    }

    pub fn digest(self, message: &[u8]) -> BigUint {
        match self {
            HashId::Sha256Ctr4 => {
                let mut out = Vec::with_capacity(128);
                for ctr in 0u32..4 {
                    let mut h = Sha256::new();
                    h.update(message);
                    h.update(ctr.to_be_bytes());
                    out.extend_from_slice(&h.finalize());
                }
                BigUint::from_bytes_be(&out)
            }
        }
    }
}

impl fmt::Display for HashId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HashId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sha256-ctr4" => Ok(HashId::Sha256Ctr4),
            other => Err(invalid(format!("unknown hash_id {other:?}"))),
        }
    }
}

impl Serialize for HashId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for HashId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shape of a key: `n = subsets * group_size` weights, `take` of each group
/// selected per encryption.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub n: usize,
    pub subsets: usize,
    pub group_size: usize,
    pub take: usize,
    pub slack_bits: u32,
    #[serde(default)]
    pub hash_id: HashId,
}

impl Default for SchemeParams {
    fn default() -> Self {
        Self::standard()
    }
}

impl SchemeParams {
    pub const DEFAULT_SLACK_BITS: u32 = 8;

    /// 1360 weights in 8 groups of 170, 128 taken per group: 1024-bit blocks.
    pub fn standard() -> Self {
        Self {
            n: 1360,
            subsets: 8,
            group_size: 170,
            take: 128,
            slack_bits: Self::DEFAULT_SLACK_BITS,
            hash_id: HashId::Sha256Ctr4,
        }
    }

    /// Two groups of `n / 2`, half of each group taken.
    pub fn desk(n: usize) -> Self {
        let group_size = n / 2;
        Self {
            n,
            subsets: 2,
            group_size,
            take: (group_size / 2).max(1),
            slack_bits: Self::DEFAULT_SLACK_BITS,
            hash_id: HashId::Sha256Ctr4,
        }
    }

    pub fn new(n: usize, subsets: usize, group_size: usize, take: usize, slack_bits: u32) -> Result<Self> {
        let params = Self {
            n,
            subsets,
            group_size,
            take,
            slack_bits,
            hash_id: HashId::Sha256Ctr4,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.subsets == 0 || self.group_size == 0 {
            return Err(invalid("subsets and group_size must be positive"));
        }
        if self.n != self.subsets * self.group_size {
            return Err(invalid(format!(
                "n = {} must equal subsets * group_size = {}",
                self.n,
                self.subsets * self.group_size
            )));
        }
        if self.take == 0 || self.take > self.group_size {
            return Err(invalid(format!(
                "take = {} must lie in [1, group_size = {}]",
                self.take, self.group_size
            )));
        }
        Ok(())
    }

    pub fn block_bits(&self) -> usize {
        self.subsets * self.take
    }

    /// `group_size!`, the modulus of the permutation index.
    pub fn index_modulus(&self) -> BigUint {
        factorial(self.group_size)
    }

    pub fn blocks_for(&self, msg_len_bytes: usize) -> usize {
        (msg_len_bytes * 8).div_ceil(self.block_bits())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub a: Vec<BigUint>,
    pub params: SchemeParams,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    pub b: SuperIncreasingSequence,
    pub w: BigUint,
    pub w_inv: BigUint,
    pub p: BigUint,
}

impl PrivateKey {
    /// Assembles a key from its trapdoor parts, computing `w^-1 mod p`.
    pub fn from_parts(b: SuperIncreasingSequence, w: BigUint, p: BigUint) -> Result<Self> {
        if p <= b.total() {
            return Err(invalid("modulus must exceed the sum of the private weights"));
        }
        if w.is_zero() || w >= p {
            return Err(invalid("multiplier must lie in [1, p)"));
        }
        let w_inv = mod_inverse(&w, &p).ok_or_else(|| invalid("multiplier is not invertible"))?;
        Ok(Self { b, w, w_inv, p })
    }

    /// Checks `p > sum b`, `1 <= w < p`, `gcd(w, p) = 1` and `w * w_inv = 1 mod p`.
    pub fn check_invariants(&self) -> bool {
        self.p > self.b.total()
            && !self.w.is_zero()
            && self.w < self.p
            && self.w.gcd(&self.p).is_one()
            && (&self.w * &self.w_inv % &self.p).is_one()
    }

    /// `a_i = b_i * w mod p`.
    pub fn public_weights(&self) -> Vec<BigUint> {
        self.b.weights().iter().map(|bi| bi * &self.w % &self.p).collect()
    }

    pub fn public_key(&self, params: SchemeParams) -> PublicKey {
        PublicKey {
            a: self.public_weights(),
            params,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair {
    pub public: PublicKey,
    pub private: PrivateKey,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub blocks: Vec<BigUint>,
    pub d_prime: BigUint,
    pub msg_len_bytes: usize,
}

/// Bits of one block, `block_bits` long.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageBlock(pub SolutionBits);

pub fn keygen(params: &SchemeParams, seed: u64) -> Result<KeyPair> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = generate_with_rng(params.n, params.slack_bits, &mut rng)?;
    let p = next_prime(&b.total());
    let w = if p > BigUint::from(2u32) {
        rng.gen_biguint_range(&BigUint::from(2u32), &p)
    } else {
        BigUint::one()
    };
    let private = PrivateKey::from_parts(b, w, p)?;
    let public = private.public_key(params.clone());
    Ok(KeyPair { public, private })
}

/// Splits `vector` into `subsets` groups, permutes every group with the code
/// of `d_prime`, and concatenates the first `take` items of each group.
pub fn select_weights<T: Clone>(vector: &[T], d_prime: &BigUint, params: &SchemeParams) -> Result<Vec<T>> {
    if vector.len() != params.n {
        return Err(Error::DimensionMismatch {
            expected: params.n,
            got: vector.len(),
        });
    }
    let code = factorial_carry(d_prime, params.group_size)?;
    let mut out = Vec::with_capacity(params.block_bits());
    for group in vector.chunks(params.group_size) {
        let permuted = permute(group, &code)?;
        out.extend(permuted.into_iter().take(params.take));
    }
    Ok(out)
}

/// `D' = digest(M) mod group_size!`.
pub fn digest_to_dprime(message: &[u8], params: &SchemeParams) -> BigUint {
    params.hash_id.digest(message) % params.index_modulus()
}

/// Message bits, most significant bit of each byte first, zero padded to a
/// whole number of blocks.
pub fn message_blocks(message: &[u8], params: &SchemeParams) -> Vec<MessageBlock> {
    let block_bits = params.block_bits();
    let blocks = params.blocks_for(message.len());
    let mut bits = vec![false; blocks * block_bits];
    for (i, byte) in message.iter().enumerate() {
        for j in 0..8 {
            bits[i * 8 + j] = byte >> (7 - j) & 1 == 1;
        }
    }
    bits.chunks(block_bits)
        .map(|c| MessageBlock(SolutionBits(c.to_vec())))
        .collect()
}

/// Inverse of [`message_blocks`]; fails if any padding bit is set.
pub fn blocks_to_message(blocks: &[MessageBlock], msg_len_bytes: usize) -> Option<Vec<u8>> {
    let bits: Vec<bool> = blocks.iter().flat_map(|b| b.0 .0.iter().copied()).collect();
    if bits.len() < msg_len_bytes * 8 || bits[msg_len_bytes * 8..].iter().any(|&b| b) {
        return None;
    }
    Some(
        bits[..msg_len_bytes * 8]
            .chunks(8)
            .map(|c| c.iter().fold(0u8, |acc, &b| acc << 1 | b as u8))
            .collect(),
    )
}

/// `C_k = sum Au_i * x_{k,i}` for each block.
pub fn encrypt_blocks(selected: &[BigUint], blocks: &[MessageBlock]) -> Vec<BigUint> {
    blocks.iter().map(|b| b.0.dot(selected)).collect()
}

pub fn encrypt(pk: &PublicKey, message: &[u8]) -> Result<Ciphertext> {
    let params = &pk.params;
    params.validate()?;
    let d_prime = digest_to_dprime(message, params);
    let selected = select_weights(&pk.a, &d_prime, params)?;
    let blocks = encrypt_blocks(&selected, &message_blocks(message, params));
    Ok(Ciphertext {
        blocks,
        d_prime,
        msg_len_bytes: message.len(),
    })
}

pub(crate) fn check_ciphertext_shape(params: &SchemeParams, ct: &Ciphertext) -> Result<()> {
    if ct.d_prime >= params.index_modulus() {
        return Err(Error::OutOfRange("d_prime must be below group_size!".into()));
    }
    let expected = params.blocks_for(ct.msg_len_bytes);
    if ct.blocks.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: ct.blocks.len(),
        });
    }
    Ok(())
}

pub fn decrypt(sk: &PrivateKey, params: &SchemeParams, ct: &Ciphertext) -> Result<Vec<u8>> {
    params.validate()?;
    check_ciphertext_shape(params, ct)?;
    let selected = select_weights(sk.b.weights(), &ct.d_prime, params)?;
    let set = SuperIncreasingSet::new(&selected)
        .map_err(|_| Error::KeyIncompatible("selected private weights are not super-increasing".into()))?;

    let blocks = ct
        .blocks
        .par_iter()
        .enumerate()
        .map(|(k, c)| {
            let target = c * &sk.w_inv % &sk.p;
            set.solve(&target)
                .map(MessageBlock)
                .ok_or(Error::CorruptCiphertext { block: k })
        })
        .collect::<Result<Vec<_>>>()?;

    blocks_to_message(&blocks, ct.msg_len_bytes).ok_or(Error::CorruptCiphertext {
        block: blocks.len().saturating_sub(1),
    })
}

/// Whether the selected private weights are super-increasing in the order the
/// permutation leaves them, without sorting.
pub fn selection_in_order_superincreasing(b: &SuperIncreasingSequence, d_prime: &BigUint, params: &SchemeParams) -> Result<bool> {
    let selected = select_weights(b.weights(), d_prime, params)?;
    crate::knapsack::is_superincreasing(&selected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    fn u(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn small_key() -> PrivateKey {
        let b = SuperIncreasingSequence::new(u(&[2, 3, 7, 15, 31])).unwrap();
        PrivateKey::from_parts(b, 17u32.into(), 61u32.into()).unwrap()
    }

    #[test]
    fn small_key_matches_modular_oracle() {
        let sk = small_key();
        // independent: 17 * b_i mod 61 computed with machine integers
        let expect: Vec<u64> = [2u64, 3, 7, 15, 31].iter().map(|b| 17 * b % 61).collect();
        assert_eq!(expect, vec![34, 51, 58, 11, 39]);
        assert_eq!(sk.public_weights(), u(&expect));
        let inv = (1..61u64).find(|x| 17 * x % 61 == 1).unwrap();
        assert_eq!(sk.w_inv, BigUint::from(inv));
        assert_eq!(inv, 18);
        assert!(sk.check_invariants());
    }

    #[test]
    fn unit_multiplier_is_identity() {
        let b = SuperIncreasingSequence::new(u(&[2, 3, 7, 15, 31])).unwrap();
        let sk = PrivateKey::from_parts(b.clone(), 1u32.into(), 61u32.into()).unwrap();
        assert_eq!(sk.public_weights(), b.weights());
    }

    #[test]
    fn from_parts_rejects_bad_trapdoors() {
        let b = SuperIncreasingSequence::new(u(&[2, 3, 7, 15, 31])).unwrap();
        assert!(PrivateKey::from_parts(b.clone(), 17u32.into(), 58u32.into()).is_err());
        assert!(PrivateKey::from_parts(b.clone(), 0u32.into(), 61u32.into()).is_err());
        assert!(PrivateKey::from_parts(b, 6u32.into(), 62u32.into()).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(SchemeParams::standard().validate().is_ok());
        assert_eq!(SchemeParams::standard().block_bits(), 1024);
        assert!(SchemeParams::new(16, 2, 8, 4, 4).is_ok());
        assert!(SchemeParams::new(17, 2, 8, 4, 4).is_err());
        assert!(SchemeParams::new(16, 2, 8, 9, 4).is_err());
        assert!(SchemeParams::new(16, 2, 8, 0, 4).is_err());
    }

    #[test]
    fn select_weights_examples() {
        let params = SchemeParams::new(6, 1, 6, 3, 0).unwrap();
        let v = ['A', 'B', 'C', 'D', 'E', 'F'];
        assert_eq!(select_weights(&v, &100u32.into(), &params).unwrap(), vec!['A', 'F', 'B']);
        assert_eq!(select_weights(&v, &0u32.into(), &params).unwrap(), vec!['A', 'B', 'C']);
        assert!(select_weights(&v, &720u32.into(), &params).is_err());

        let two = SchemeParams::new(8, 2, 4, 2, 0).unwrap();
        let v: Vec<u32> = (0..8).collect();
        assert_eq!(select_weights(&v, &0u32.into(), &two).unwrap(), vec![0, 1, 4, 5]);
    }

    #[test]
    fn digest_bounds() {
        let params = SchemeParams::standard();
        let modulus = params.index_modulus();
        assert!(digest_to_dprime(b"", &params) < modulus);
        assert!(digest_to_dprime(b"hello", &params) < modulus);
        assert_eq!(HashId::Sha256Ctr4.digest(b"").bits() <= 1024, true);
        assert_eq!("sha256-ctr4".parse::<HashId>().unwrap(), HashId::Sha256Ctr4);
        assert!("md5".parse::<HashId>().is_err());
    }

    #[test]
    fn digest_golden_values() {
        // independently computed with Python's hashlib
        let digest = HashId::Sha256Ctr4.digest(b"abc");
        let bytes = digest.to_bytes_be();
        assert_eq!(bytes[..8], [0xcf, 0x2d, 0xb1, 0xac, 0x98, 0x67, 0xde, 0xbd]);
        assert_eq!(digest_to_dprime(b"abc", &SchemeParams::desk(16)), BigUint::from(20174u32));
        assert_eq!(digest_to_dprime(b"abc", &SchemeParams::desk(24)), BigUint::from(305323214u32));
        let full: BigUint = "337372606496851018380426821823786184500551460617574807875046694423004394892300240827684485390832720542615755777971207465056960255714357795320727702208555082566574848939656512336261853532951907288209848114082547422201168861221606360965481789317697226983933955269710924936248096577659208573984087510030353614".parse().unwrap();
        assert_eq!(digest_to_dprime(b"abc", &SchemeParams::standard()), full);
    }

    #[test]
    fn block_helpers() {
        let params = SchemeParams::new(16, 2, 8, 4, 0).unwrap();
        let blocks = message_blocks(&[0b1000_0001, 0xff], &params);
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].0.as_u8(), vec![1, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(blocks_to_message(&blocks, 2).unwrap(), vec![0b1000_0001, 0xff]);
        assert!(blocks_to_message(&blocks, 1).is_none());
    }

    #[test]
    fn zero_and_single_bit_blocks() {
        let kp = keygen(&SchemeParams::desk(16), 3).unwrap();
        let ct = encrypt(&kp.public, &[0u8; 3]).unwrap();
        assert!(ct.blocks.iter().all(|c| c.is_zero()));
        assert_eq!(decrypt(&kp.private, &kp.public.params, &ct).unwrap(), vec![0u8; 3]);

        let msg = [0x80u8, 0];
        let ct = encrypt(&kp.public, &msg).unwrap();
        let au = select_weights(&kp.public.a, &ct.d_prime, &kp.public.params).unwrap();
        assert_eq!(ct.blocks[0], au[0]);
    }

    #[test]
    fn desk_roundtrips() {
        let params = SchemeParams::new(24, 2, 12, 8, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..20 {
            let kp = keygen(&params, seed).unwrap();
            assert!(kp.private.check_invariants());
            for len in [0usize, 1, 2, 5, 17] {
                let mut msg = vec![0u8; len];
                rng.fill_bytes(&mut msg);
                let ct = encrypt(&kp.public, &msg).unwrap();
                let au = select_weights(&kp.public.a, &ct.d_prime, &params).unwrap();
                let total: BigUint = au.iter().sum();
                assert!(ct.blocks.iter().all(|c| *c <= total));
                assert_eq!(decrypt(&kp.private, &params, &ct).unwrap(), msg);
            }
        }
    }

    #[test]
    fn eq_one_and_two_duality() {
        for seed in 0..10 {
            let kp = keygen(&SchemeParams::desk(32), seed).unwrap();
            let sk = &kp.private;
            for (a, b) in kp.public.a.iter().zip(sk.b.weights()) {
                assert_eq!(a * &sk.w_inv % &sk.p, *b);
            }
            let d = digest_to_dprime(&seed.to_le_bytes(), &kp.public.params);
            let au = select_weights(&kp.public.a, &d, &kp.public.params).unwrap();
            let bu = select_weights(sk.b.weights(), &d, &kp.public.params).unwrap();
            for (a, b) in au.iter().zip(&bu) {
                assert_eq!(*a, b * &sk.w % &sk.p);
            }
        }
    }

    #[test]
    fn tampered_ciphertext_detected() {
        let kp = keygen(&SchemeParams::desk(24), 5).unwrap();
        let msg = b"attack at dawn".to_vec();
        let ct = encrypt(&kp.public, &msg).unwrap();
        let mut caught = 0;
        for k in 0..ct.blocks.len() {
            let mut bad = ct.clone();
            bad.blocks[k] += 1u32;
            match decrypt(&kp.private, &kp.public.params, &bad) {
                Err(Error::CorruptCiphertext { .. }) => caught += 1,
                Ok(m) => assert_ne!(m, msg),
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(caught > 0);
    }

    #[test]
    fn mismatched_key_fails() {
        let params = SchemeParams::desk(24);
        let a = keygen(&params, 1).unwrap();
        let b = keygen(&params, 2).unwrap();
        let msg = b"0123456789".to_vec();
        let ct = encrypt(&a.public, &msg).unwrap();
        match decrypt(&b.private, &params, &ct) {
            Ok(m) => assert_ne!(m, msg),
            Err(_) => {}
        }
    }

    #[test]
    fn shape_errors() {
        let kp = keygen(&SchemeParams::desk(16), 9).unwrap();
        let mut ct = encrypt(&kp.public, b"ab").unwrap();
        ct.blocks.pop();
        assert!(matches!(
            decrypt(&kp.private, &kp.public.params, &ct),
            Err(Error::DimensionMismatch { .. })
        ));
        ct.d_prime = kp.public.params.index_modulus();
        assert!(decrypt(&kp.private, &kp.public.params, &ct).is_err());
    }
}
