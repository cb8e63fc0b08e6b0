//! Unit-disk side of the dynamics.
//!
//! `S(z) = i (τ + z)/(τ − z)` maps the disk onto the upper half-plane and
//! sends the boundary point τ to ∞, so `g = S⁻¹ ∘ f ∘ S` is a parabolic
//! self-map of the disk with Denjoy–Wolff point τ. Everything long-horizon
//! is computed on the half-plane side through
//! `gⁿ(z) − τ = −2iτ / (fⁿ(S(z)) + i)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::classifier::classify_shift;
use crate::error::{Error, Result};
use crate::extrapolate::{aitken_limit, aitken_limit_with, LimitEstimate, DEFAULT_TOLERANCE};
use crate::halfplane::{HalfPlanePoint, ParabolicMap};
use crate::orbit::{iterate, Orbit};

#[derive(Debug, Clone, PartialEq)]
pub struct DiskSetting {
    tau: Complex64,
    map: ParabolicMap,
}

impl DiskSetting {
    pub fn new(tau: Complex64, map: ParabolicMap) -> Result<Self> {
        if !((tau.norm() - 1.0).abs() <= 1e-12) {
            return Err(Error::DomainError(format!("tau = {tau} is not on the unit circle")));
        }
        Ok(Self { tau, map })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn map(&self) -> &ParabolicMap {
        &self.map
    }

    /// `S(z) = i (τ + z)/(τ − z)`
    pub fn cayley(&self, z: Complex64) -> Result<HalfPlanePoint> {
        if !(z.norm() < 1.0) {
            return Err(Error::DomainError(format!("|z| = {} is not below 1", z.norm())));
        }
        let w = Complex64::i() * (self.tau + z) / (self.tau - z);
        // Im S(z) = (1 − |z|²)/|τ − z|², exact and positive
        let y = (1.0 - z.norm_sqr()) / (self.tau - z).norm_sqr();
        HalfPlanePoint::new(w.re, y)
    }

    /// `S⁻¹(w) = τ (w − i)/(w + i)`
    pub fn cayley_inv(&self, w: HalfPlanePoint) -> Complex64 {
        let w = w.to_complex();
        self.tau * (w - Complex64::i()) / (w + Complex64::i())
    }

    /// One step of `g = S⁻¹ ∘ f ∘ S`.
    pub fn g(&self, z: Complex64) -> Result<Complex64> {
        let w = self.map.evaluate(self.cayley(z)?)?;
        Ok(self.cayley_inv(w))
    }

    /// `[z, g(z), …, gⁿ(z)]` by direct iteration in the disk. Only meant as a
    /// short-horizon cross-check: points crowd against τ and lose precision.
    pub fn iterate_directly(&self, z: Complex64, n: usize) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(z);
        let mut cur = z;
        for _ in 0..n {
            cur = self.g(cur)?;
            out.push(cur);
        }
        Ok(out)
    }

    /// Half-plane orbit of `S(z)`.
    pub fn half_plane_orbit(&self, z: Complex64, n: usize) -> Result<Orbit> {
        iterate(&self.map, self.cayley(z)?, n)
    }

    /// `|gⁿ(z) − τ| = 2 / |fⁿ(S(z)) + i|`.
    pub fn disk_orbit_gap(&self, z: Complex64, n: usize) -> Result<f64> {
        let orbit = self.half_plane_orbit(z, n)?;
        Ok(gap(orbit.last()))
    }

    /// Gaps for `k = 0..=n` from a single orbit.
    pub fn disk_orbit_gaps(&self, z: Complex64, n: usize) -> Result<Vec<f64>> {
        Ok(self.half_plane_orbit(z, n)?.points().map(gap).collect())
    }

    /// `C = 2/|β − ∫ t dμ|`, the limit of `n |gⁿ − τ|` for finite-shift maps.
    pub fn rate_constant(&self) -> Result<f64> {
        let verdict = classify_shift(&self.map);
        if !verdict.kind.is_finite() {
            return Err(Error::NotFiniteShift(verdict.kind.to_string()));
        }
        Ok(2.0 / self.map.drift()?.abs())
    }

    /// Extrapolated limit of `n · |gⁿ(z) − τ|`.
    pub fn verify_rate(&self, z: Complex64, horizon: usize) -> Result<LimitEstimate> {
        let seq = scaled_gaps(&self.disk_orbit_gaps(z, horizon)?);
        Ok(aitken_limit_with(&seq, DEFAULT_TOLERANCE))
    }

    /// Rows of the rate CSV for `n = stride, 2·stride, …, horizon`; the
    /// estimate in each row uses the sequence up to that `n`.
    pub fn rate_rows(&self, z: Complex64, horizon: usize, stride: usize) -> Result<Vec<RateRow>> {
        let gaps = self.disk_orbit_gaps(z, horizon)?;
        let seq = scaled_gaps(&gaps);
        let stride = stride.max(1);
        Ok((1..=horizon)
            .filter(|n| n % stride == 0 || *n == horizon)
            .map(|n| RateRow {
                n,
                gap: gaps[n],
                n_times_gap: seq[n - 1],
                aitken_estimate: aitken_limit(&seq[..n]).value,
            })
            .collect())
    }
}

fn gap(w: HalfPlanePoint) -> f64 {
    2.0 / w.x.hypot(w.y + 1.0)
}

/// `n · gap(n)` for `n = 1..`.
fn scaled_gaps(gaps: &[f64]) -> Vec<f64> {
    gaps.iter().enumerate().skip(1).map(|(n, g)| n as f64 * g).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateRow {
    pub n: usize,
    pub gap: f64,
    pub n_times_gap: f64,
    pub aitken_estimate: f64,
}
