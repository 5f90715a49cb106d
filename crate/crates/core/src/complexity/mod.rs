//! Description-length proxy for the complexity of an evolution operator.
//!
//! A time series of one matrix element `E_mn(t)` is symbolized by uniform
//! quantization and encoded with a fully specified coder. If the code is
//! much shorter than a plain fixed-width listing of the symbols, the series
//! is generated by a short rule (`RuleLike`); otherwise the series is close
//! to its own shortest description (`SeriesLike`). Kolmogorov complexity is
//! uncomputable, so this is only a compressibility proxy.

mod bits;
pub mod coder;
pub mod series;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use coder::{CoderRegistry, DescriptionCoder, Encoded, FixedWidth, MtfRleGamma};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexityError {
    #[error("InvalidSeries: {0}")]
    InvalidSeries(String),
    #[error("InvalidThreshold: {0} is outside (0, 1)")]
    InvalidThreshold(f64),
    #[error("UnknownCoder: `{0}`")]
    UnknownCoder(String),
    #[error("Truncated: code ended early")]
    Truncated,
    #[error("Corrupt: {0}")]
    Corrupt(String),
}

/// Samples of `E_mn(t)` at uniform time steps.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixElementSeries {
    pub labels: (usize, usize),
    pub values: Vec<f64>,
    /// Bin width used by [`symbolize`].
    pub quantization: f64,
}

impl MatrixElementSeries {
    pub fn new(labels: (usize, usize), values: Vec<f64>, quantization: f64) -> Result<Self, ComplexityError> {
        if values.is_empty() {
            return Err(ComplexityError::InvalidSeries("series is empty".into()));
        }
        if !(quantization > 0.0 && quantization.is_finite()) {
            return Err(ComplexityError::InvalidSeries(format!(
                "quantization must be positive, got {quantization}"
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(ComplexityError::InvalidSeries(format!("non-finite value {v}")));
        }
        Ok(Self {
            labels,
            values,
            quantization,
        })
    }
}

/// `floor(value / quantization)` for every sample.
pub fn symbolize(series: &MatrixElementSeries) -> Vec<i64> {
    series
        .values
        .iter()
        .map(|v| (v / series.quantization).floor() as i64)
        .collect()
}

fn alphabet_size(symbols: &[i64]) -> usize {
    let mut sorted = symbols.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len()
}

/// `N * max(1, ceil(log2 A))`.
pub fn raw_bits(symbols: &[i64]) -> u64 {
    symbols.len() as u64 * coder::fixed_width(alphabet_size(symbols)) as u64
}

/// Code length under the default `mtf-rle-gamma` coder.
pub fn description_length(symbols: &[i64]) -> u64 {
    MtfRleGamma.encode(symbols).bits
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    RuleLike,
    SeriesLike,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::RuleLike => "RuleLike",
            Verdict::SeriesLike => "SeriesLike",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub coder: &'static str,
    pub symbols: usize,
    pub alphabet: usize,
    pub raw_bits: u64,
    pub compressed_bits: u64,
    pub ratio: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

impl ComplexityReport {
    pub fn machine_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for ComplexityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} symbols over {} values: {} raw bits, {} coded bits ({}), ratio {:.4} vs threshold {} -> {}",
            self.symbols,
            self.alphabet,
            self.raw_bits,
            self.compressed_bits,
            self.coder,
            self.ratio,
            self.threshold,
            self.verdict
        )
    }
}

pub fn classify(series: &MatrixElementSeries, threshold: f64) -> Result<ComplexityReport, ComplexityError> {
    classify_with(&MtfRleGamma, series, threshold)
}

/// `SeriesLike` iff `compressed / raw >= threshold`.
pub fn classify_with(
    coder: &dyn DescriptionCoder,
    series: &MatrixElementSeries,
    threshold: f64,
) -> Result<ComplexityReport, ComplexityError> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(ComplexityError::InvalidThreshold(threshold));
    }
    let symbols = symbolize(series);
    let raw = raw_bits(&symbols);
    let compressed = coder.encode(&symbols).bits;
    let ratio = compressed as f64 / raw as f64;
    Ok(ComplexityReport {
        coder: coder.name(),
        symbols: symbols.len(),
        alphabet: alphabet_size(&symbols),
        raw_bits: raw,
        compressed_bits: compressed,
        ratio,
        threshold,
        verdict: if ratio < threshold {
            Verdict::RuleLike
        } else {
            Verdict::SeriesLike
        },
    })
}
