use crate::error::{Result, SplineError};

/// An interval of the parameter line whose ends may each be open or closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidDomain1D {
    lower: f64,
    upper: f64,
    lower_open: bool,
    upper_open: bool,
}

impl ValidDomain1D {
    pub fn new(lower: f64, upper: f64, lower_open: bool, upper_open: bool) -> Result<Self> {
        if !(lower < upper) {
            return Err(SplineError::EmptyDomain);
        }
        Ok(Self { lower, upper, lower_open, upper_open })
    }

    pub fn closed(lower: f64, upper: f64) -> Result<Self> {
        Self::new(lower, upper, false, false)
    }

    /// `[lower, t)`: everything right of `t` is trimmed away.
    pub fn trimmed_above(lower: f64, t: f64) -> Result<Self> {
        Self::new(lower, t, false, true)
    }

    /// `(t, upper]`: everything left of `t` is trimmed away.
    pub fn trimmed_below(t: f64, upper: f64) -> Result<Self> {
        Self::new(t, upper, true, false)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn is_lower_open(&self) -> bool {
        self.lower_open
    }

    pub fn is_upper_open(&self) -> bool {
        self.upper_open
    }

    pub fn contains(&self, u: f64) -> bool {
        let above = if self.lower_open { u > self.lower } else { u >= self.lower };
        let below = if self.upper_open { u < self.upper } else { u <= self.upper };
        above && below
    }

    /// Whether `[a, b]` meets the domain in a set of positive length.
    pub fn overlaps(&self, a: f64, b: f64) -> bool {
        b.min(self.upper) > a.max(self.lower)
    }

    /// Whether `[a, b]` lies in the closure of the domain.
    pub fn covers(&self, a: f64, b: f64) -> bool {
        self.lower <= a && b <= self.upper
    }

    /// Intersection with `[a, b]` as a closed interval, if it has positive length.
    pub fn clip(&self, a: f64, b: f64) -> Option<(f64, f64)> {
        let lo = a.max(self.lower);
        let hi = b.min(self.upper);
        (hi > lo).then_some((lo, hi))
    }

    /// Mirror image under `u -> c - u`.
    pub fn reflected(&self, c: f64) -> Self {
        Self {
            lower: c - self.upper,
            upper: c - self.lower,
            lower_open: self.upper_open,
            upper_open: self.lower_open,
        }
    }
}
