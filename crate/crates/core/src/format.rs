//! JSON documents read and written by the command-line tool.
//!
//! Big integers are decimal strings and rationals are `"p/q"` or `"p"`
//! strings, so no consumer loses precision. Every parse error names the
//! offending field, e.g. `a[3]` or `rows[1][0]`.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::attack::{AttackConfig, AttackReport, EquivalentKey};
use crate::cryptosystem::{Ciphertext, PrivateKey, PublicKey, SchemeParams};
use crate::diophantine::{SdaProblem, SdaSolution};
use crate::error::{Error, Result};
use crate::knapsack::SuperIncreasingSequence;
use crate::lattice::LatticeBasis;

fn malformed(field: impl Into<String>, reason: impl ToString) -> Error {
    Error::Malformed {
        field: field.into(),
        reason: reason.to_string(),
    }
}

fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| malformed(what, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data always serializes")
}

pub fn parse_uint(s: &str, field: &str) -> Result<BigUint> {
    BigUint::from_str(s.trim()).map_err(|e| malformed(field, format!("{e} in {s:?}")))
}

pub fn parse_int(s: &str, field: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|e| malformed(field, format!("{e} in {s:?}")))
}

pub fn parse_rational(s: &str, field: &str) -> Result<BigRational> {
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s, field)?)),
        Some((n, d)) => {
            let num = parse_int(n, field)?;
            let den = parse_int(d, field)?;
            if den.is_zero() {
                return Err(malformed(field, "zero denominator"));
            }
            Ok(BigRational::new(num, den))
        }
    }
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn uints(values: &[String], field: &str) -> Result<Vec<BigUint>> {
    values
        .iter()
        .enumerate()
        .map(|(i, s)| parse_uint(s, &format!("{field}[{i}]")))
        .collect()
}

fn strings<T: ToString>(values: &[T]) -> Vec<String> {
    values.iter().map(T::to_string).collect()
}

#[derive(Serialize, Deserialize)]
struct PublicKeyDoc {
    params: SchemeParams,
    a: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct PrivateKeyDoc {
    b: Vec<String>,
    w: String,
    w_inv: String,
    p: String,
    params: SchemeParams,
}

#[derive(Serialize, Deserialize)]
struct CiphertextDoc {
    blocks: Vec<String>,
    d_prime: String,
    msg_len_bytes: usize,
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    rows: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct SdaInputDoc {
    alphas: Vec<String>,
    epsilon: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q_bound: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct SdaSolutionDoc {
    q: String,
    ps: Vec<String>,
    quality: String,
    row_norm_sq: String,
}

#[derive(Serialize, Deserialize)]
struct SdaOutputDoc {
    solution: Option<SdaSolutionDoc>,
}

pub fn public_key_to_json(pk: &PublicKey) -> String {
    to_json(&PublicKeyDoc {
        params: pk.params.clone(),
        a: strings(&pk.a),
    })
}

pub fn public_key_from_json(text: &str) -> Result<PublicKey> {
    let doc: PublicKeyDoc = parse_json(text, "public key")?;
    doc.params.validate().map_err(|e| malformed("params", e))?;
    let a = uints(&doc.a, "a")?;
    if a.len() != doc.params.n {
        return Err(malformed("a", format!("expected {} weights, found {}", doc.params.n, a.len())));
    }
    Ok(PublicKey { a, params: doc.params })
}

/// The private key document also carries the scheme parameters, since
/// decryption needs the group layout.
pub fn private_key_to_json(sk: &PrivateKey, params: &SchemeParams) -> String {
    to_json(&PrivateKeyDoc {
        b: strings(sk.b.weights()),
        w: sk.w.to_string(),
        w_inv: sk.w_inv.to_string(),
        p: sk.p.to_string(),
        params: params.clone(),
    })
}

pub fn private_key_from_json(text: &str) -> Result<(PrivateKey, SchemeParams)> {
    let doc: PrivateKeyDoc = parse_json(text, "private key")?;
    doc.params.validate().map_err(|e| malformed("params", e))?;
    let b = uints(&doc.b, "b")?;
    if b.len() != doc.params.n {
        return Err(malformed("b", format!("expected {} weights, found {}", doc.params.n, b.len())));
    }
    let b = SuperIncreasingSequence::new(b).map_err(|e| malformed("b", e))?;
    let w = parse_uint(&doc.w, "w")?;
    let p = parse_uint(&doc.p, "p")?;
    let w_inv = parse_uint(&doc.w_inv, "w_inv")?;
    let sk = PrivateKey::from_parts(b, w, p).map_err(|e| malformed("w", e))?;
    if sk.w_inv != w_inv {
        return Err(malformed("w_inv", "not the inverse of w modulo p"));
    }
    Ok((sk, doc.params))
}

pub fn ciphertext_to_json(ct: &Ciphertext) -> String {
    to_json(&CiphertextDoc {
        blocks: strings(&ct.blocks),
        d_prime: ct.d_prime.to_string(),
        msg_len_bytes: ct.msg_len_bytes,
    })
}

pub fn ciphertext_from_json(text: &str) -> Result<Ciphertext> {
    let doc: CiphertextDoc = parse_json(text, "ciphertext")?;
    Ok(Ciphertext {
        blocks: uints(&doc.blocks, "blocks")?,
        d_prime: parse_uint(&doc.d_prime, "d_prime")?,
        msg_len_bytes: doc.msg_len_bytes,
    })
}

pub fn matrix_to_json(basis: &LatticeBasis) -> String {
    to_json(&MatrixDoc {
        rows: basis
            .rows()
            .iter()
            .map(|row| row.iter().map(rational_to_string).collect())
            .collect(),
    })
}

pub fn matrix_from_json(text: &str) -> Result<LatticeBasis> {
    let doc: MatrixDoc = parse_json(text, "matrix")?;
    let mut rows = Vec::with_capacity(doc.rows.len());
    for (i, row) in doc.rows.iter().enumerate() {
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, s)| parse_rational(s, &format!("rows[{i}][{j}]")))
            .collect::<Result<Vec<_>>>()?;
        rows.push(parsed);
    }
    LatticeBasis::new(rows).map_err(|e| malformed("rows", e))
}

/// Reads `{"alphas": [...], "epsilon": "p/q"}` with an optional `"q_bound"`.
pub fn sda_problem_from_json(text: &str) -> Result<SdaProblem> {
    let doc: SdaInputDoc = parse_json(text, "sda problem")?;
    let alphas = doc
        .alphas
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s, &format!("alphas[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let epsilon = parse_rational(&doc.epsilon, "epsilon")?;
    match doc.q_bound {
        None => SdaProblem::new(alphas, epsilon).map_err(|e| malformed("epsilon", e)),
        Some(q) => {
            let q = parse_uint(&q, "q_bound")?;
            if q.is_zero() {
                return Err(malformed("q_bound", "must be at least 1"));
            }
            SdaProblem::new(alphas.clone(), epsilon.clone()).map_err(|e| malformed("epsilon", e))?;
            Ok(SdaProblem::with_q(alphas, epsilon, q))
        }
    }
}

pub fn sda_problem_to_json(problem: &SdaProblem) -> String {
    to_json(&SdaInputDoc {
        alphas: problem.alphas.iter().map(rational_to_string).collect(),
        epsilon: rational_to_string(&problem.epsilon),
        q_bound: Some(problem.q_bound.to_string()),
    })
}

pub fn sda_solution_to_json(solution: Option<&SdaSolution>) -> String {
    to_json(&SdaOutputDoc {
        solution: solution.map(|s| SdaSolutionDoc {
            q: s.q.to_string(),
            ps: strings(&s.ps),
            quality: rational_to_string(&s.quality),
            row_norm_sq: rational_to_string(&s.row_norm_sq),
        }),
    })
}

#[derive(Serialize)]
struct EquivalentKeyDoc {
    u_prime: String,
    p_prime: String,
    b_prime: Vec<String>,
}

#[derive(Serialize)]
struct AttackConfigDoc {
    ell_sweep: Vec<usize>,
    lambda_sweep: Vec<String>,
    max_candidates: usize,
}

#[derive(Serialize)]
struct AttackReportDoc {
    success: bool,
    validation: bool,
    candidates_tried: usize,
    lattices_reduced: usize,
    lll_swaps: u64,
    winning_k1: Option<String>,
    equivalent_key: Option<EquivalentKeyDoc>,
    plaintext_hex: Option<String>,
    config_used: AttackConfigDoc,
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn attack_config_summary(config: &AttackConfig) -> String {
    to_json(&config_doc(config))
}

fn config_doc(config: &AttackConfig) -> AttackConfigDoc {
    AttackConfigDoc {
        ell_sweep: config.ell_sweep.clone(),
        lambda_sweep: config.lambda_sweep.iter().map(rational_to_string).collect(),
        max_candidates: config.max_candidates,
    }
}

pub fn attack_report_to_json(report: &AttackReport) -> String {
    to_json(&AttackReportDoc {
        success: report.success,
        validation: report.validation,
        candidates_tried: report.candidates_tried,
        lattices_reduced: report.lattices_reduced,
        lll_swaps: report.lll_swaps,
        winning_k1: report.winning_k1.as_ref().map(BigUint::to_string),
        equivalent_key: report.equivalent_key.as_ref().map(|k: &EquivalentKey| EquivalentKeyDoc {
            u_prime: k.u_prime.to_string(),
            p_prime: k.p_prime.to_string(),
            b_prime: strings(k.b_prime.weights()),
        }),
        plaintext_hex: report.plaintext.as_deref().map(hex_string),
        config_used: config_doc(&report.config_used),
    })
}
