//! Numerical carrier for angle evaluations: a value plus one standard error.

use serde::Serialize;

/// Default absolute floor under every tolerance comparison.
pub const TOL_FLOOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    /// One standard error; zero for exact evaluations.
    pub stderr: f64,
    pub samples: u64,
    pub exact: bool,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, stderr: 0.0, samples: 0, exact: true }
    }

    pub fn monte_carlo(value: f64, stderr: f64, samples: u64) -> Self {
        debug_assert!(stderr >= 0.0);
        Estimate { value, stderr, samples, exact: false }
    }

    pub fn zero() -> Self {
        Self::exact(0.0)
    }

    pub fn one() -> Self {
        Self::exact(1.0)
    }

    pub fn add(&self, other: &Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            stderr: (self.stderr * self.stderr + other.stderr * other.stderr).sqrt(),
            samples: self.samples.max(other.samples),
            exact: self.exact && other.exact,
        }
    }

    pub fn sub(&self, other: &Estimate) -> Estimate {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Estimate {
        Estimate { value: -self.value, ..*self }
    }

    pub fn scale(&self, s: f64) -> Estimate {
        Estimate { value: self.value * s, stderr: self.stderr * s.abs(), ..*self }
    }

    /// Product with first-order error propagation, treating the factors as
    /// independent (they are evaluated on distinct sample streams).
    pub fn mul(&self, other: &Estimate) -> Estimate {
        let var = self.value * self.value * other.stderr * other.stderr
            + other.value * other.value * self.stderr * self.stderr
            + self.stderr * self.stderr * other.stderr * other.stderr;
        Estimate {
            value: self.value * other.value,
            stderr: var.sqrt(),
            samples: self.samples.max(other.samples),
            exact: self.exact && other.exact,
        }
    }

    /// max(4 sigma, floor): the default acceptance tolerance.
    pub fn tolerance(&self) -> f64 {
        (4.0 * self.stderr).max(TOL_FLOOR)
    }

    pub fn agrees_with(&self, expected: f64) -> bool {
        (self.value - expected).abs() <= self.tolerance()
    }

    /// Deviation measured against the combined error of two estimates.
    pub fn agrees_with_estimate(&self, other: &Estimate) -> bool {
        let se = (self.stderr * self.stderr + other.stderr * other.stderr).sqrt();
        (self.value - other.value).abs() <= (4.0 * se).max(TOL_FLOOR)
    }
}
