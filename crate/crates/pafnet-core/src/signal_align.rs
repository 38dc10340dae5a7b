//! Phase-correlation lag estimation and panel alignment.
//!
//! Inter-process lags are estimated in the frequency domain: the cross-power
//! spectrum of a (target, candidate) pair is normalized to unit magnitude per
//! bin, so only phase survives, and its inverse transform peaks at the lag
//! that best realigns the candidate with the target. The peak location feeds
//! straight into [`align`], which circularly shifts each selected neighbor.

use std::io::Write;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::panel::SeriesPanel;

/// Absolute clamp for the cross-spectrum magnitude; keeps constant or
/// sparse-spectrum series from dividing zero by zero.
pub const DEFAULT_EPS: f64 = 1e-12;

/// Forward DFT, no normalization factor.
pub fn dft(x: &[f64]) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(x.len()).process(&mut buf);
    buf
}

/// Inverse DFT; carries the `1/T` factor so `inverse_dft(dft(x)) == x`.
pub fn inverse_dft(spectrum: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let t = spectrum.len();
    let mut buf = spectrum.to_vec();
    FftPlanner::new().plan_fft_inverse(t).process(&mut buf);
    let scale = 1.0 / t as f64;
    for v in &mut buf {
        *v *= scale;
    }
    buf
}

/// Whitened circular cross-correlogram of an ordered pair of series.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCorrelogram {
    /// Correlation value per candidate lag, length `T`.
    pub values: Vec<f64>,
    /// `(target index, candidate index)` the correlogram was computed for.
    pub pair: (usize, usize),
}

impl PhaseCorrelogram {
    /// Peak lag and value; ties resolve to the lower lag.
    pub fn peak(&self) -> (usize, f64) {
        let mut best_tau = 0;
        let mut best = self.values[0];
        for (tau, &v) in self.values.iter().enumerate().skip(1) {
            if v > best {
                best = v;
                best_tau = tau;
            }
        }
        (best_tau, best)
    }
}

fn correlogram_values(
    target_spectrum: &[Complex<f64>],
    candidate_spectrum: &[Complex<f64>],
    eps: f64,
) -> Vec<f64> {
    let cross: Vec<Complex<f64>> = target_spectrum
        .iter()
        .zip(candidate_spectrum)
        .map(|(a, b)| {
            let g = a.conj() * b;
            g / g.norm().max(eps)
        })
        .collect();
    inverse_dft(&cross).iter().map(|c| c.re).collect()
}

/// Phase correlation between a target series and a candidate.
///
/// The value at lag `tau` measures how well the candidate, advanced
/// circularly by `tau`, lines up with the target; the arg-max is exactly the
/// shift that [`align`] applies. Amplitude is normalized out, so rescaling
/// either input by a positive factor leaves the correlogram unchanged.
pub fn phase_correlation(x_i: &[f64], x_j: &[f64], eps: f64) -> Result<PhaseCorrelogram> {
    if x_i.len() != x_j.len() {
        return Err(Error::LengthMismatch {
            left: x_i.len(),
            right: x_j.len(),
        });
    }
    let values = correlogram_values(&dft(x_i), &dft(x_j), eps);
    Ok(PhaseCorrelogram {
        values,
        pair: (0, 1),
    })
}

/// Per-target neighbor indices, alignment lags and peak scores.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborPlan {
    processes: usize,
    neighbors_per_target: usize,
    /// Window length the correlograms were computed on; lags live in `[0, window_len)`.
    window_len: usize,
    neighbors: Vec<usize>,
    lags: Vec<usize>,
    scores: Vec<f64>,
}

impl NeighborPlan {
    pub fn processes(&self) -> usize {
        self.processes
    }

    pub fn neighbors_per_target(&self) -> usize {
        self.neighbors_per_target
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    pub fn neighbor(&self, target: usize, rank: usize) -> usize {
        self.neighbors[target * self.neighbors_per_target + rank]
    }

    pub fn lag(&self, target: usize, rank: usize) -> usize {
        self.lags[target * self.neighbors_per_target + rank]
    }

    pub fn score(&self, target: usize, rank: usize) -> f64 {
        self.scores[target * self.neighbors_per_target + rank]
    }

    /// Copy of this plan with every lag forced to zero; neighbor choice and
    /// scores are kept. Used by the alignment-free model variant.
    pub fn with_zero_lags(&self) -> NeighborPlan {
        NeighborPlan {
            lags: vec![0; self.lags.len()],
            ..self.clone()
        }
    }

    /// Rebuilds a plan from raw rows, validating shape. Used when loading
    /// checkpoints.
    pub fn from_parts(
        processes: usize,
        neighbors_per_target: usize,
        window_len: usize,
        neighbors: Vec<usize>,
        lags: Vec<usize>,
        scores: Vec<f64>,
    ) -> Result<Self> {
        let n = processes * neighbors_per_target;
        if neighbors.len() != n || lags.len() != n || scores.len() != n {
            return Err(Error::PlanShapeMismatch {
                reason: format!(
                    "expected {n} entries, got {}/{}/{}",
                    neighbors.len(),
                    lags.len(),
                    scores.len()
                ),
            });
        }
        if let Some(&j) = neighbors.iter().find(|&&j| j >= processes) {
            return Err(Error::PlanShapeMismatch {
                reason: format!("neighbor index {j} out of range for {processes} processes"),
            });
        }
        Ok(NeighborPlan {
            processes,
            neighbors_per_target,
            window_len,
            neighbors,
            lags,
            scores,
        })
    }

    /// Serializes the plan as CSV with header `target,rank,neighbor,lag,score`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "target,rank,neighbor,lag,score")?;
        for i in 0..self.processes {
            for r in 0..self.neighbors_per_target {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    i,
                    r,
                    self.neighbor(i, r),
                    self.lag(i, r),
                    self.score(i, r)
                )?;
            }
        }
        Ok(())
    }
}

/// Selects the top-`k` phase-correlated neighbors for every target process.
///
/// The target itself is excluded: slot 0 of the aligned panel already carries
/// it. Candidates are ranked by peak correlogram value; ties break on the
/// lower process index, then the lower lag, so the result is deterministic
/// regardless of evaluation order.
pub fn select_neighbors(panel: &SeriesPanel, k: usize, eps: f64) -> Result<NeighborPlan> {
    let m = panel.processes();
    if k == 0 || k > m.saturating_sub(1) {
        return Err(Error::KTooLarge {
            k,
            max: m.saturating_sub(1),
        });
    }
    let t = panel.timestamps();
    let spectra: Vec<Vec<Complex<f64>>> = (0..m).map(|p| dft(panel.channel(p))).collect();

    let mut neighbors = Vec::with_capacity(m * k);
    let mut lags = Vec::with_capacity(m * k);
    let mut scores = Vec::with_capacity(m * k);
    for i in 0..m {
        // (score, candidate, lag) per candidate j != i
        let mut candidates: Vec<(f64, usize, usize)> = Vec::with_capacity(m - 1);
        for j in 0..m {
            if j == i {
                continue;
            }
            let values = correlogram_values(&spectra[i], &spectra[j], eps);
            let peak = PhaseCorrelogram {
                values,
                pair: (i, j),
            }
            .peak();
            candidates.push((peak.1, j, peak.0));
        }
        candidates.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .expect("correlogram scores are finite")
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });
        for &(score, j, tau) in candidates.iter().take(k) {
            neighbors.push(j);
            lags.push(tau);
            scores.push(score);
        }
    }
    Ok(NeighborPlan {
        processes: m,
        neighbors_per_target: k,
        window_len: t,
        neighbors,
        lags,
        scores,
    })
}

/// Lag-aligned panel: for each target, the target window itself (slot 0)
/// followed by its circularly shifted neighbors.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPanel {
    values: Vec<f64>,
    processes: usize,
    slots: usize,
    window_len: usize,
}

impl AlignedPanel {
    pub fn processes(&self) -> usize {
        self.processes
    }

    /// `K + 1`: the target slot plus one slot per neighbor.
    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    /// Series in slot `slot` for target `target`; slot 0 is the target itself.
    pub fn series(&self, target: usize, slot: usize) -> &[f64] {
        let start = (target * self.slots + slot) * self.window_len;
        &self.values[start..start + self.window_len]
    }
}

/// Aligns every selected neighbor to its target by the planned circular shift.
///
/// `aligned.series(i, 0)` is the unshifted target window; slot `s >= 1` holds
/// neighbor `plan.neighbor(i, s - 1)` advanced by `plan.lag(i, s - 1)` modulo
/// the window length.
pub fn align(panel: &SeriesPanel, plan: &NeighborPlan) -> Result<AlignedPanel> {
    let m = panel.processes();
    let t = panel.timestamps();
    if plan.processes != m {
        return Err(Error::PlanShapeMismatch {
            reason: format!(
                "plan built for {} processes, panel has {m}",
                plan.processes
            ),
        });
    }
    let k = plan.neighbors_per_target;
    let slots = k + 1;
    let mut values = Vec::with_capacity(m * slots * t);
    for i in 0..m {
        values.extend_from_slice(panel.channel(i));
        for r in 0..k {
            let src = panel.channel(plan.neighbor(i, r));
            let tau = plan.lag(i, r) % t;
            values.extend_from_slice(&src[tau..]);
            values.extend_from_slice(&src[..tau]);
        }
    }
    Ok(AlignedPanel {
        values,
        processes: m,
        slots,
        window_len: t,
    })
}
