//! Dilution-gradient target series on the dyadic grid.
//!
//! Families (`i = 1..=n`):
//!
//! | family    | raw value              |
//! |-----------|------------------------|
//! | linear    | `a + (i - 1) * delta`  |
//! | harmonic  | `a / i`                |
//! | geometric | `a * ratio^(i - 1)`    |
//! | parabolic | `a + b * (i - 1)^2`    |
//!
//! Each raw value is quantized to precision `d`. Values outside `[0, 1]` are
//! an error; nothing is clamped.

use rand::Rng;
use thiserror::Error;

use crate::cf::{CfError, ConcFactor, MAX_PRECISION};
use crate::model::TargetSeries;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Linear { a: f64, delta: f64 },
    Harmonic { a: f64 },
    /// Log-spaced gradient: constant ratio between neighbours.
    Geometric { a: f64, ratio: f64 },
    Parabolic { a: f64, b: f64 },
    Explicit(Vec<ConcFactor>),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Linear { .. } => "linear",
            Family::Harmonic { .. } => "harmonic",
            Family::Geometric { .. } => "geometric",
            Family::Parabolic { .. } => "parabolic",
            Family::Explicit(_) => "explicit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub family: Family,
    pub count: usize,
    pub precision: u32,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series length must be at least 1")]
    Empty,
    #[error("precision {0} exceeds the supported maximum of {MAX_PRECISION}")]
    Precision(u32),
    #[error("element {index} evaluates to {value}, outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("unknown series family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Cf(#[from] CfError),
}

/// Raw (unquantized) value of element `i` (1-based).
fn raw_value(family: &Family, i: usize) -> f64 {
    let k = (i - 1) as f64;
    match *family {
        Family::Linear { a, delta } => a + k * delta,
        Family::Harmonic { a } => a / i as f64,
        Family::Geometric { a, ratio } => a * ratio.powi((i - 1) as i32),
        Family::Parabolic { a, b } => a + b * k * k,
        Family::Explicit(ref v) => v[i - 1].to_f64(),
    }
}

pub fn generate(spec: &SeriesSpec) -> Result<TargetSeries, SeriesError> {
    if spec.precision > MAX_PRECISION {
        return Err(SeriesError::Precision(spec.precision));
    }
    if let Family::Explicit(values) = &spec.family {
        if values.is_empty() {
            return Err(SeriesError::Empty);
        }
        return Ok(TargetSeries::new(values.clone()));
    }
    if spec.count == 0 {
        return Err(SeriesError::Empty);
    }
    (1..=spec.count)
        .map(|i| {
            let raw = raw_value(&spec.family, i);
            if !(0.0..=1.0).contains(&raw) {
                return Err(SeriesError::OutOfRange { index: i - 1, value: raw });
            }
            Ok(ConcFactor::quantize(raw, spec.precision)?)
        })
        .collect::<Result<Vec<_>, _>>()
        .map(TargetSeries::new)
}

/// Draws family parameters that keep every element of an `n`-long series
/// inside `[0, 1]`.
pub fn random_family<R: Rng>(name: &str, n: usize, rng: &mut R) -> Result<Family, SeriesError> {
    let span = (n.max(2) - 1) as f64;
    let fam = match name {
        "linear" => {
            let a: f64 = rng.gen_range(0.0..1.0);
            // shrink slightly so float rounding never leaves [0, 1]
            let lo = -0.999 * a / span;
            let hi = 0.999 * (1.0 - a) / span;
            Family::Linear { a, delta: rng.gen_range(lo..=hi) }
        }
        "harmonic" => Family::Harmonic { a: rng.gen_range(0.05..=1.0) },
        "geometric" => {
            Family::Geometric { a: rng.gen_range(0.05..=1.0), ratio: rng.gen_range(0.3..1.0) }
        }
        "parabolic" => {
            let a: f64 = rng.gen_range(0.0..1.0);
            let lo = -0.999 * a / (span * span);
            let hi = 0.999 * (1.0 - a) / (span * span);
            Family::Parabolic { a, b: rng.gen_range(lo..=hi) }
        }
        other => return Err(SeriesError::UnknownFamily(other.to_string())),
    };
    Ok(fam)
}

/// A random explicit series: `len` grid values of precision at most `max_precision`.
pub fn random_explicit<R: Rng>(len: usize, max_precision: u32, rng: &mut R) -> TargetSeries {
    let d = rng.gen_range(1..=max_precision.max(1));
    (0..len)
        .map(|_| {
            let k = rng.gen_range(0..=(1u64 << d));
            ConcFactor::from_parts(k, d).expect("k <= 2^d by construction")
        })
        .collect()
}
