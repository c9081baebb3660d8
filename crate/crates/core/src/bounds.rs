//! Axis-aligned box bounds for bounded searches (GA encoding, SA sampling,
//! device parameter ranges).

use crate::error::CoreError;
use crate::rng::RngStream;
use crate::vector::VectorN;

/// Per-dimension closed intervals `[lo, hi]` with finite `lo < hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    ranges: Vec<(f64, f64)>,
}

impl Bounds {
    pub fn new(ranges: Vec<(f64, f64)>) -> Result<Self, CoreError> {
        if ranges.is_empty() {
            return Err(CoreError::InvalidBounds);
        }
        for &(lo, hi) in &ranges {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(CoreError::InvalidBounds);
            }
        }
        Ok(Self { ranges })
    }

    pub fn dims(&self) -> usize {
        self.ranges.len()
    }

    pub fn lo(&self, k: usize) -> f64 {
        self.ranges[k].0
    }

    pub fn hi(&self, k: usize) -> f64 {
        self.ranges[k].1
    }

    pub fn width(&self, k: usize) -> f64 {
        self.ranges[k].1 - self.ranges[k].0
    }

    pub fn ranges(&self) -> &[(f64, f64)] {
        &self.ranges
    }

    /// True when every component of `x` lies inside its interval
    /// (endpoints included).
    pub fn contains(&self, x: &VectorN) -> bool {
        x.dim() == self.dims()
            && x.as_slice()
                .iter()
                .zip(&self.ranges)
                .all(|(v, &(lo, hi))| (lo..=hi).contains(v))
    }

    /// Returns the first out-of-bounds component as an error, or `Ok(())`.
    pub fn check(&self, x: &VectorN) -> Result<(), CoreError> {
        if x.dim() != self.dims() {
            return Err(CoreError::DimensionMismatch {
                expected: self.dims(),
                actual: x.dim(),
            });
        }
        for (k, (v, &(lo, hi))) in x.as_slice().iter().zip(&self.ranges).enumerate() {
            if !(lo..=hi).contains(v) {
                return Err(CoreError::OutOfBounds {
                    index: k,
                    value: *v,
                    lo,
                    hi,
                });
            }
        }
        Ok(())
    }

    /// Clamps each component of `x` into its interval.
    pub fn clamp(&self, x: &VectorN) -> VectorN {
        assert_eq!(x.dim(), self.dims(), "dimension mismatch in Bounds::clamp");
        VectorN::new(
            x.as_slice()
                .iter()
                .zip(&self.ranges)
                .map(|(v, &(lo, hi))| v.clamp(lo, hi))
                .collect(),
        )
        .expect("clamped finite bounds are finite")
    }

    /// Uniform sample inside the box; consumes one uniform per dimension,
    /// in dimension order.
    pub fn sample_uniform(&self, rng: &mut RngStream) -> VectorN {
        VectorN::new(
            self.ranges
                .iter()
                .map(|&(lo, hi)| rng.next_range_f64(lo, hi))
                .collect(),
        )
        .expect("uniform sample within finite bounds is finite")
    }
}
