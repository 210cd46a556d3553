//! Spacetime points and uniformly sampled complex wavefunctions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinate time plus 1 to 3 spatial (or phase-space) coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: Vec<f64>,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: Vec<f64>) -> Self {
        Self { t, x }
    }

    /// A 1-D point.
    pub fn line(t: f64, x: f64) -> Self {
        Self { t, x: vec![x] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.iter().all(|v| v.is_finite())
    }

    /// Largest coordinate difference, time included.
    pub fn max_abs_diff(&self, other: &SpacetimePoint) -> f64 {
        self.x
            .iter()
            .zip(&other.x)
            .map(|(a, b)| (a - b).abs())
            .fold((self.t - other.t).abs(), f64::max)
    }
}

/// Complex amplitudes on a uniform 1-D grid at a fixed proper time.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionGrid {
    origin: f64,
    spacing: f64,
    values: Vec<Complex64>,
    tau: f64,
}

impl WavefunctionGrid {
    pub fn new(origin: f64, spacing: f64, values: Vec<Complex64>, tau: f64) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::validation(format!("grid spacing must be positive, got {spacing}")));
        }
        if values.is_empty() {
            return Err(Error::validation("grid has no values"));
        }
        if !origin.is_finite() || !tau.is_finite() {
            return Err(Error::validation("grid origin and tau must be finite"));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("grid value".into()));
        }
        Ok(Self { origin, spacing, values, tau })
    }

    /// Samples `f` at `n` nodes starting at `origin`.
    pub fn from_fn(
        origin: f64,
        spacing: f64,
        n: usize,
        tau: f64,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        let values = (0..n).map(|i| f(origin + i as f64 * spacing)).collect();
        Self::new(origin, spacing, values, tau)
    }

    /// `n` nodes spanning `[lo, hi]` inclusive.
    pub fn over_interval(
        lo: f64,
        hi: f64,
        n: usize,
        tau: f64,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        if n < 2 || !(hi > lo) {
            return Err(Error::validation("interval grid needs n >= 2 and hi > lo"));
        }
        Self::from_fn(lo, (hi - lo) / (n - 1) as f64, n, tau, f)
    }

    #[inline]
    pub fn origin(&self) -> f64 {
        self.origin
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    #[inline]
    pub fn tau(&self) -> f64 {
        self.tau
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn position(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.spacing
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.position(i))
    }

    /// Last node position.
    pub fn end(&self) -> f64 {
        self.position(self.len() - 1)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.origin && x <= self.end()
    }

    /// Same geometry, new amplitudes and stamp.
    pub fn with_values(&self, values: Vec<Complex64>, tau: f64) -> Result<Self> {
        if values.len() != self.len() {
            return Err(Error::validation("value count does not match grid"));
        }
        Self::new(self.origin, self.spacing, values, tau)
    }

    /// Multiplies every amplitude by `e^{i theta}`.
    pub fn rotate_phase(&self, theta: f64) -> Self {
        let w = Complex64::from_polar(1.0, theta);
        Self { values: self.values.iter().map(|z| z * w).collect(), ..self.clone() }
    }

    /// Discrete L2 norm, `sum |psi_i|^2 * spacing`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.spacing
    }

    /// Cubic (four-point Lagrange) interpolation inside the hull, zero outside.
    ///
    /// The stencil is shifted inward at the edges; grids with fewer than four
    /// nodes fall back to linear interpolation.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        let n = self.len();
        if !self.contains(x) {
            return Complex64::new(0.0, 0.0);
        }
        if n == 1 {
            return self.values[0];
        }
        let s = (x - self.origin) / self.spacing;
        let cell = (s.floor() as usize).min(n - 2);
        if n < 4 {
            let f = s - cell as f64;
            return self.values[cell] * (1.0 - f) + self.values[cell + 1] * f;
        }
        let start = cell.saturating_sub(1).min(n - 4);
        let u = s - start as f64;
        // Lagrange basis on nodes 0, 1, 2, 3 evaluated at u.
        let w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
        let w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
        let w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
        let w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
        let v = &self.values[start..start + 4];
        v[0] * w0 + v[1] * w1 + v[2] * w2 + v[3] * w3
    }
}

/// `sum |psi_i|^2 * spacing`.
pub fn grid_norm(grid: &WavefunctionGrid) -> f64 {
    grid.norm()
}
