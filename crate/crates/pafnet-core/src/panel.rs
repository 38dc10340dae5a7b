//! Multivariate quality series panel.

use crate::error::{Error, Result};

/// A multivariate time series: `M` process channels over `T_total` timestamps.
///
/// Row-major storage, one row per process. All values are finite; ingestion
/// and generation are responsible for never letting a NaN/Inf through.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPanel {
    values: Vec<f64>,
    processes: usize,
    timestamps: usize,
    pub channel_names: Vec<String>,
    pub sampling_note: String,
}

impl SeriesPanel {
    /// Builds a panel from row-major values, validating the invariants:
    /// at least one process, at least two timestamps, every value finite.
    pub fn new(
        values: Vec<f64>,
        processes: usize,
        timestamps: usize,
        channel_names: Vec<String>,
        sampling_note: impl Into<String>,
    ) -> Result<Self> {
        if processes == 0 {
            return Err(Error::InvalidPanel("need at least one process".into()));
        }
        if timestamps < 2 {
            return Err(Error::InvalidPanel(format!(
                "need at least 2 timestamps, got {timestamps}"
            )));
        }
        if values.len() != processes * timestamps {
            return Err(Error::InvalidPanel(format!(
                "value buffer has {} entries, expected {} x {}",
                values.len(),
                processes,
                timestamps
            )));
        }
        if channel_names.len() != processes {
            return Err(Error::InvalidPanel(format!(
                "{} channel names for {} processes",
                channel_names.len(),
                processes
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidPanel(format!(
                "non-finite value at process {}, timestamp {}",
                pos / timestamps,
                pos % timestamps
            )));
        }
        Ok(Self {
            values,
            processes,
            timestamps,
            channel_names,
            sampling_note: sampling_note.into(),
        })
    }

    /// Number of processes `M`.
    pub fn processes(&self) -> usize {
        self.processes
    }

    /// Number of timestamps `T_total`.
    pub fn timestamps(&self) -> usize {
        self.timestamps
    }

    /// One process channel as a slice of length `T_total`.
    pub fn channel(&self, process: usize) -> &[f64] {
        let start = process * self.timestamps;
        &self.values[start..start + self.timestamps]
    }

    pub fn value(&self, process: usize, t: usize) -> f64 {
        self.values[process * self.timestamps + t]
    }

    /// A contiguous time slice `[start, start + len)` of every channel,
    /// returned as a new panel.
    pub fn segment(&self, start: usize, len: usize) -> Result<SeriesPanel> {
        if start + len > self.timestamps {
            return Err(Error::TooShort {
                needed: start + len,
                actual: self.timestamps,
            });
        }
        let mut values = Vec::with_capacity(self.processes * len);
        for p in 0..self.processes {
            values.extend_from_slice(&self.channel(p)[start..start + len]);
        }
        SeriesPanel::new(
            values,
            self.processes,
            len,
            self.channel_names.clone(),
            self.sampling_note.clone(),
        )
    }
}
