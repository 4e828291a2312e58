//! Alignment metrics: sample Pearson correlation, cosine similarity and
//! mean squared error.
//!
//! Degenerate inputs return typed errors rather than NaN: a constant vector
//! has no defined correlation ([`MetricError::ZeroVariance`]) and an
//! all-zero vector has no direction ([`MetricError::ZeroNorm`]). Callers
//! that aggregate scores must decide explicitly what to do with those
//! markers; nothing in this crate turns them into 0.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::{from_usize, Float};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("input lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {min} elements, got {got}")]
    TooShort { min: usize, got: usize },
    #[error("constant input: correlation undefined")]
    ZeroVariance,
    #[error("zero-norm input: cosine undefined")]
    ZeroNorm,
}

fn check_lengths<F: Float>(a: &[F], b: &[F], min: usize) -> Result<(), MetricError> {
    if a.len() != b.len() {
        return Err(MetricError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < min {
        return Err(MetricError::TooShort { min, got: a.len() });
    }
    Ok(())
}

/// Sample Pearson correlation coefficient.
///
/// Symmetric in its arguments and invariant under positive affine
/// transforms of either one.
pub fn pearson<F: Float>(a: &[F], b: &[F]) -> Result<F, MetricError> {
    check_lengths(a, b, 2)?;
    let n = from_usize::<F>(a.len());
    let mean_a = a.iter().copied().sum::<F>() / n;
    let mean_b = b.iter().copied().sum::<F>() / n;
    let mut cov = F::zero();
    let mut var_a = F::zero();
    let mut var_b = F::zero();
    for (&x, &y) in a.iter().zip(b) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        cov = cov + dx * dy;
        var_a = var_a + dx * dx;
        var_b = var_b + dy * dy;
    }
    if var_a == F::zero() || var_b == F::zero() {
        return Err(MetricError::ZeroVariance);
    }
    Ok(cov / (var_a * var_b).sqrt())
}

/// Cosine similarity: dot(a, b) / (‖a‖ ‖b‖).
///
/// Lands in [0, 1] when both inputs are nonnegative and is invariant under
/// positive scaling of either argument.
pub fn cosine<F: Float>(a: &[F], b: &[F]) -> Result<F, MetricError> {
    check_lengths(a, b, 1)?;
    let mut dot = F::zero();
    let mut norm_a = F::zero();
    let mut norm_b = F::zero();
    for (&x, &y) in a.iter().zip(b) {
        dot = dot + x * y;
        norm_a = norm_a + x * x;
        norm_b = norm_b + y * y;
    }
    if norm_a == F::zero() || norm_b == F::zero() {
        return Err(MetricError::ZeroNorm);
    }
    Ok(dot / (norm_a.sqrt() * norm_b.sqrt()))
}

/// Mean squared error: (1/n) Σ (aᵢ − bᵢ)².
pub fn mse<F: Float>(a: &[F], b: &[F]) -> Result<F, MetricError> {
    check_lengths(a, b, 1)?;
    let sum = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<F>();
    Ok(sum / from_usize(a.len()))
}

/// The three alignment metrics for one vector pair. `None` marks a metric
/// that is undefined for the inputs (zero variance or zero norm); it is
/// serialized as `null`, never as 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignmentScore<F = f64> {
    pub pearson: Option<F>,
    pub cosine: Option<F>,
    pub mse: F,
}

impl<F: Float> AlignmentScore<F> {
    /// Computes all three metrics, mapping degenerate-input errors onto
    /// explicit `None` markers. Length mismatches still fail.
    pub fn between(a: &[F], b: &[F]) -> Result<Self, MetricError> {
        let pearson = match pearson(a, b) {
            Ok(r) => Some(r),
            Err(MetricError::ZeroVariance) => None,
            Err(e) => return Err(e),
        };
        let cosine = match cosine(a, b) {
            Ok(s) => Some(s),
            Err(MetricError::ZeroNorm) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            pearson,
            cosine,
            mse: mse(a, b)?,
        })
    }
}
