//! Seeded trial grids for the attack: key generation, a random message,
//! encryption and a full attack per trial, with timing and LLL counters.

use std::io::Write;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::attack::{full_attack, lambda_sweep_from_exponents, true_multiplier_diagnostics, AttackConfig};
use crate::cryptosystem::{encrypt, keygen, selection_in_order_superincreasing, Ciphertext, KeyPair, SchemeParams};
use crate::error::{invalid, Result};

/// Seed of the instance shown by the command-line demo.
pub const DEMO_SEED: u64 = 7;
/// Key size of the command-line demo.
pub const DEMO_N: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialGrid {
    pub n_values: Vec<usize>,
    pub trials_per_point: usize,
    pub seed_base: u64,
    /// Plaintext length of every trial.
    pub message_bytes: usize,
    pub slack_bits: Option<u32>,
    pub ell_sweep: Option<Vec<usize>>,
    /// Inclusive `(lo, hi)` range of `e` in `lambda = 2^-e`.
    pub lambda_exponents: Option<(u32, u32)>,
    pub max_candidates: Option<usize>,
    /// Run trials on the rayon pool. Records come back in grid order either way.
    pub parallel: bool,
}

impl TrialGrid {
    pub fn new(n_values: Vec<usize>, trials_per_point: usize, seed_base: u64) -> Self {
        Self {
            n_values,
            trials_per_point,
            seed_base,
            message_bytes: 4,
            slack_bits: None,
            ell_sweep: None,
            lambda_exponents: None,
            max_candidates: None,
            parallel: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials_per_point == 0 {
            return Err(invalid("trials_per_point must be at least 1"));
        }
        for &n in &self.n_values {
            let params = self.params_for(n);
            params.validate()?;
            self.config_for(n).validate(n)?;
        }
        Ok(())
    }

    /// Desk layout for `n`, with the slack override applied.
    pub fn params_for(&self, n: usize) -> SchemeParams {
        let mut params = SchemeParams::desk(n);
        if let Some(s) = self.slack_bits {
            params.slack_bits = s;
        }
        params
    }

    pub fn config_for(&self, n: usize) -> AttackConfig {
        let mut cfg = AttackConfig::default_for(n);
        if let Some(ells) = &self.ell_sweep {
            cfg.ell_sweep = ells.clone();
        }
        if let Some((lo, hi)) = self.lambda_exponents {
            cfg.lambda_sweep = lambda_sweep_from_exponents(lo, hi);
        }
        if let Some(m) = self.max_candidates {
            cfg.max_candidates = m;
        }
        cfg
    }

    /// Seed of trial `t`, shared across every `n`.
    pub fn seed_of(&self, trial: usize) -> u64 {
        self.seed_base.wrapping_add(trial as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub seed: u64,
    pub success: bool,
    pub validation: bool,
    /// Recovered plaintext equals the message that was encrypted.
    pub recovered_matches: bool,
    pub wall_ms: f64,
    pub candidates_tried: usize,
    /// Whether the selected private weights stay super-increasing in permuted order.
    pub selection_ok: bool,
    pub lll_swaps: u64,
    pub lattices_reduced: usize,
    pub bound_checked: usize,
    pub bound_violations: usize,
}

impl TrialRecord {
    /// Equality on everything except the wall-clock time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        Self {
            wall_ms: 0.0,
            ..self.clone()
        } == Self {
            wall_ms: 0.0,
            ..other.clone()
        }
    }
}

/// Key pair, random message and its ciphertext for one seeded trial.
pub fn trial_instance(params: &SchemeParams, seed: u64, message_bytes: usize) -> Result<(KeyPair, Vec<u8>, Ciphertext)> {
    let kp = keygen(params, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (params.n as u64).rotate_left(32));
    let mut message = vec![0u8; message_bytes];
    rng.fill_bytes(&mut message);
    let ct = encrypt(&kp.public, &message)?;
    Ok((kp, message, ct))
}

pub fn run_trial(grid: &TrialGrid, n: usize, seed: u64) -> Result<TrialRecord> {
    let params = grid.params_for(n);
    let config = grid.config_for(n);
    let (kp, message, ct) = trial_instance(&params, seed, grid.message_bytes)?;
    let selection_ok = selection_in_order_superincreasing(&kp.private.b, &ct.d_prime, &params)?;
    let diag = true_multiplier_diagnostics(&kp.public, &kp.private);

    let start = Instant::now();
    let report = full_attack(&kp.public, &ct, &config)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    Ok(TrialRecord {
        n,
        seed,
        success: report.success,
        validation: report.validation,
        recovered_matches: report.plaintext.as_deref() == Some(message.as_slice()),
        wall_ms,
        candidates_tried: report.candidates_tried,
        selection_ok,
        lll_swaps: report.lll_swaps,
        lattices_reduced: report.lattices_reduced,
        bound_checked: diag.checked,
        bound_violations: diag.violations,
    })
}

/// Every `(n, trial)` point of the grid, ordered by `n` then seed.
pub fn run_grid(grid: &TrialGrid) -> Result<Vec<TrialRecord>> {
    grid.validate()?;
    let points: Vec<(usize, u64)> = grid
        .n_values
        .iter()
        .flat_map(|&n| (0..grid.trials_per_point).map(move |t| (n, t)))
        .map(|(n, t)| (n, grid.seed_of(t)))
        .collect();
    if grid.parallel {
        points.par_iter().map(|&(n, s)| run_trial(grid, n, s)).collect()
    } else {
        points.iter().map(|&(n, s)| run_trial(grid, n, s)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub median_ms: f64,
    pub selection_ok: usize,
}

/// Per-`n` success rate and median attack time, in ascending `n`.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut ns: Vec<usize> = records.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter()
        .map(|n| {
            let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n).collect();
            let successes = rows.iter().filter(|r| r.success).count();
            let mut times: Vec<f64> = rows.iter().map(|r| r.wall_ms).collect();
            times.sort_by(f64::total_cmp);
            SummaryRow {
                n,
                trials: rows.len(),
                successes,
                success_rate: successes as f64 / rows.len() as f64,
                median_ms: median(&times),
                selection_ok: rows.iter().filter(|r| r.selection_ok).count(),
            }
        })
        .collect()
}

fn median(sorted: &[f64]) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        k if k % 2 == 1 => sorted[k / 2],
        k => (sorted[k / 2 - 1] + sorted[k / 2]) / 2.0,
    }
}

/// Least-squares slope of `ln(median_ms)` against `ln(n)`. Needs two
/// distinct `n` with positive times.
pub fn scaling_slope(summary: &[SummaryRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = summary
        .iter()
        .filter(|r| r.median_ms > 0.0 && r.n > 0)
        .map(|r| ((r.n as f64).ln(), r.median_ms.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Serialize)]
struct CsvRow {
    n: usize,
    seed: u64,
    success: bool,
    wall_ms: String,
    candidates: usize,
    selection_ok: bool,
    swaps: u64,
}

/// Writes `n,seed,success,wall_ms,candidates,selection_ok,swaps`.
pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CsvRow {
            n: r.n,
            seed: r.seed,
            success: r.success,
            wall_ms: format!("{:.3}", r.wall_ms),
            candidates: r.candidates_tried,
            selection_ok: r.selection_ok,
            swaps: r.lll_swaps,
        })?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(n: usize, success: bool, ms: f64) -> TrialRecord {
        TrialRecord {
            n,
            seed: 0,
            success,
            validation: success,
            recovered_matches: success,
            wall_ms: ms,
            candidates_tried: 1,
            selection_ok: false,
            lll_swaps: 0,
            lattices_reduced: 1,
            bound_checked: 0,
            bound_violations: 0,
        }
    }

    #[test]
    fn single_point() {
        let grid = TrialGrid::new(vec![16], 1, 3);
        let recs = run_grid(&grid).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!((recs[0].n, recs[0].seed), (16, 3));
        assert!(!recs[0].success || (recs[0].validation && recs[0].recovered_matches));
    }

    #[test]
    fn deterministic_and_ordered() {
        let mut grid = TrialGrid::new(vec![16, 12], 3, 40);
        let a = run_grid(&grid).unwrap();
        grid.parallel = false;
        let b = run_grid(&grid).unwrap();
        assert_eq!(a.len(), 6);
        assert!(a.iter().zip(&b).all(|(x, y)| x.same_outcome(y)));
        let order: Vec<(usize, u64)> = a.iter().map(|r| (r.n, r.seed)).collect();
        assert_eq!(order, vec![(16, 40), (16, 41), (16, 42), (12, 40), (12, 41), (12, 42)]);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run_grid(&TrialGrid::new(vec![16], 0, 0)).is_err());
        assert!(run_grid(&TrialGrid::new(vec![15], 1, 0)).is_err());
    }

    #[test]
    fn summaries() {
        assert!(summarize(&[]).is_empty());
        let all = summarize(&[record(8, true, 1.0), record(8, true, 3.0)]);
        assert_eq!(all[0].success_rate, 1.0);
        assert_eq!(all[0].median_ms, 2.0);

        let mixed = [
            record(24, true, 5.0),
            record(16, false, 1.0),
            record(24, false, 9.0),
            record(16, true, 2.0),
            record(24, true, 7.0),
            record(16, false, 4.0),
        ];
        let s = summarize(&mixed);
        assert_eq!(s.iter().map(|r| (r.n, r.successes, r.trials)).collect::<Vec<_>>(), vec![(16, 1, 3), (24, 2, 3)]);
        assert_eq!(s[0].median_ms, 2.0);
        assert_eq!(s[1].median_ms, 7.0);
    }

    #[test]
    fn slope_of_power_law() {
        let rows: Vec<SummaryRow> = [10usize, 20, 40]
            .iter()
            .map(|&n| SummaryRow {
                n,
                trials: 1,
                successes: 1,
                success_rate: 1.0,
                median_ms: (n as f64).powi(3),
                selection_ok: 0,
            })
            .collect();
        assert!((scaling_slope(&rows).unwrap() - 3.0).abs() < 1e-9);
        assert!(scaling_slope(&rows[..1]).is_none());
    }

    #[test]
    fn csv_columns() {
        let mut buf = Vec::new();
        write_csv(&[record(16, true, 1.25)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,seed,success,wall_ms,candidates,selection_ok,swaps"));
        assert_eq!(lines.next(), Some("16,0,true,1.250,1,false,0"));
    }
}
