//! Exact rational lattice machinery.
//!
//! Bases are stored as rows of [`BigRational`]. Everything here is exact:
//! Gram-Schmidt data, reducedness checks and determinants compare rationals
//! with no tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{int_to_rational, round_half_up};
use crate::error::{invalid, Error, Result};

pub type Vector = Vec<BigRational>;

/// Lovász constant used unless the caller asks otherwise.
pub fn default_delta() -> BigRational {
    BigRational::new(3.into(), 4.into())
}

/// Row basis `f_1 .. f_m` of a lattice in `Q^d`, `m <= d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    rows: Vec<Vector>,
}

impl LatticeBasis {
    pub fn new(rows: Vec<Vector>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(invalid("basis has no rows"));
        };
        let d = first.len();
        if d == 0 {
            return Err(invalid("basis rows are empty"));
        }
        for row in &rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
        }
        if rows.len() > d {
            return Err(invalid(format!("{} rows in dimension {d}", rows.len())));
        }
        Ok(Self { rows })
    }

    pub fn from_integers<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone().into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vector> {
        self.rows
    }

    /// Number of basis vectors.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }
}

/// Gram-Schmidt orthogonalization: `f_i = f_i* + sum_{j<i} mu_{i,j} f_j*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramSchmidtData {
    pub ortho: Vec<Vector>,
    /// Row `i` holds `mu_{i,0} .. mu_{i,i-1}`.
    pub mu: Vec<Vec<BigRational>>,
    /// `F_i = <f_i*, f_i*>`.
    pub norms: Vec<BigRational>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LllStats {
    pub swaps: u64,
    pub size_reductions: u64,
    pub iterations: u64,
}

pub fn inner_product(x: &[BigRational], y: &[BigRational]) -> Result<BigRational> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(dot(x, y))
}

fn dot(x: &[BigRational], y: &[BigRational]) -> BigRational {
    x.iter().zip(y).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
}

pub fn norm_sq(y: &[BigRational]) -> Result<BigRational> {
    if y.is_empty() {
        return Err(invalid("empty vector"));
    }
    Ok(dot(y, y))
}

pub fn sup_norm(y: &[BigRational]) -> Result<BigRational> {
    y.iter()
        .map(|v| v.abs())
        .max()
        .ok_or_else(|| invalid("empty vector"))
}

pub fn gram_schmidt(basis: &LatticeBasis) -> Result<GramSchmidtData> {
    let m = basis.rank();
    let mut ortho: Vec<Vector> = Vec::with_capacity(m);
    let mut mu = Vec::with_capacity(m);
    let mut norms: Vec<BigRational> = Vec::with_capacity(m);
    for (i, f) in basis.rows.iter().enumerate() {
        let mut star = f.clone();
        let mut mu_row = Vec::with_capacity(i);
        for j in 0..i {
            let c = dot(f, &ortho[j]) / &norms[j];
            for (s, o) in star.iter_mut().zip(&ortho[j]) {
                *s -= &c * o;
            }
            mu_row.push(c);
        }
        let n = dot(&star, &star);
        if n.is_zero() {
            return Err(Error::RankDeficient { row: i });
        }
        ortho.push(star);
        mu.push(mu_row);
        norms.push(n);
    }
    Ok(GramSchmidtData { ortho, mu, norms })
}

fn check_delta(delta: &BigRational) -> Result<()> {
    let quarter = BigRational::new(1.into(), 4.into());
    if *delta <= quarter || *delta >= BigRational::one() {
        return Err(invalid(format!("delta = {delta} must lie in (1/4, 1)")));
    }
    Ok(())
}

/// Size condition `|mu_{i,j}| <= 1/2` and the Lovász condition
/// `F_i >= (delta - mu_{i,i-1}^2) F_{i-1}`, recomputed from scratch.
pub fn is_lll_reduced(basis: &LatticeBasis, delta: &BigRational) -> Result<bool> {
    check_delta(delta)?;
    let gs = gram_schmidt(basis)?;
    let half = BigRational::new(1.into(), 2.into());
    let size_ok = gs.mu.iter().flatten().all(|m| m.abs() <= half);
    let lovasz_ok = (1..basis.rank()).all(|i| {
        let m = &gs.mu[i][i - 1];
        gs.norms[i] >= (delta - m * m) * &gs.norms[i - 1]
    });
    Ok(size_ok && lovasz_ok)
}

pub fn lll_reduce(basis: &LatticeBasis, delta: &BigRational) -> Result<LatticeBasis> {
    lll_reduce_with_stats(basis, delta).map(|(b, _)| b)
}

/// LLL reduction with incremental Gram-Schmidt updates.
pub fn lll_reduce_with_stats(basis: &LatticeBasis, delta: &BigRational) -> Result<(LatticeBasis, LllStats)> {
    check_delta(delta)?;
    let gs = gram_schmidt(basis)?;
    let mut state = LllState {
        f: basis.rows.clone(),
        mu: gs.mu,
        big_f: gs.norms,
        stats: LllStats::default(),
    };
    let m = state.f.len();
    let mut k = 1;
    while k < m {
        state.stats.iterations += 1;
        state.red(k, k - 1);
        let mu_k = &state.mu[k][k - 1];
        if state.big_f[k] < (delta - mu_k * mu_k) * &state.big_f[k - 1] {
            state.swap(k);
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                state.red(k, l);
            }
            k += 1;
        }
    }
    let stats = state.stats;
    Ok((LatticeBasis { rows: state.f }, stats))
}

struct LllState {
    f: Vec<Vector>,
    mu: Vec<Vec<BigRational>>,
    big_f: Vec<BigRational>,
    stats: LllStats,
}

impl LllState {
    fn red(&mut self, k: usize, l: usize) {
        let half = BigRational::new(1.into(), 2.into());
        if self.mu[k][l].abs() <= half {
            return;
        }
        self.stats.size_reductions += 1;
        let r = round_half_up(&self.mu[k][l]);
        let rq = int_to_rational(&r);
        let (head, tail) = self.f.split_at_mut(k);
        for (x, y) in tail[0].iter_mut().zip(&head[l]) {
            *x -= &rq * y;
        }
        let (head, tail) = self.mu.split_at_mut(k);
        for j in 0..l {
            tail[0][j] -= &rq * &head[l][j];
        }
        tail[0][l] -= rq;
    }

    fn swap(&mut self, k: usize) {
        self.stats.swaps += 1;
        let mu = self.mu[k][k - 1].clone();
        let total = &self.big_f[k] + &mu * &mu * &self.big_f[k - 1];
        self.mu[k][k - 1] = &mu * &self.big_f[k - 1] / &total;
        self.big_f[k] = &self.big_f[k - 1] * &self.big_f[k] / &total;
        self.big_f[k - 1] = total;
        self.f.swap(k, k - 1);
        for j in 0..k - 1 {
            let (head, tail) = self.mu.split_at_mut(k);
            std::mem::swap(&mut head[k - 1][j], &mut tail[0][j]);
        }
        for i in k + 1..self.f.len() {
            let t = self.mu[i][k].clone();
            self.mu[i][k] = &self.mu[i][k - 1] - &mu * &t;
            self.mu[i][k - 1] = t + &self.mu[k][k - 1] * &self.mu[i][k];
        }
    }
}

/// `|det|` of a square basis by exact Gaussian elimination.
pub fn lattice_determinant(basis: &LatticeBasis) -> Result<BigRational> {
    let n = basis.rank();
    if n != basis.dim() {
        return Err(invalid(format!("determinant needs a square basis, got {n}x{}", basis.dim())));
    }
    Ok(determinant(basis.rows.clone()).abs())
}

pub(crate) fn determinant(mut a: Vec<Vector>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= &factor * y;
            }
        }
    }
    det
}

/// Every non-zero combination with coefficients in `[-bound, bound]`, sorted
/// by squared norm. A brute-force reference for small lattices.
pub fn enumerate_short_vectors(basis: &LatticeBasis, coeff_bound: u32) -> Result<Vec<(Vector, BigRational)>> {
    let m = basis.rank();
    if m > 6 {
        return Err(invalid(format!("enumeration limited to 6 basis vectors, got {m}")));
    }
    if coeff_bound > 5 {
        return Err(invalid(format!("coefficient bound limited to 5, got {coeff_bound}")));
    }
    let b = coeff_bound as i64;
    let width = (2 * b + 1) as usize;
    let total = width.pow(m as u32);
    let mut out = Vec::with_capacity(total.saturating_sub(1));
    let mut coeffs = vec![-b; m];
    for _ in 0..total {
        if coeffs.iter().any(|&c| c != 0) {
            let mut v = vec![BigRational::zero(); basis.dim()];
            for (c, row) in coeffs.iter().zip(&basis.rows) {
                if *c == 0 {
                    continue;
                }
                let cq = BigRational::from_integer((*c).into());
                for (x, y) in v.iter_mut().zip(row) {
                    *x += &cq * y;
                }
            }
            let n = dot(&v, &v);
            out.push((v, n));
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c <= b {
                break;
            }
            *c = -b;
        }
    }
    out.sort_by(|x, y| x.1.cmp(&y.1));
    Ok(out)
}
