//! Parabolic self-maps of the upper half-plane with Denjoy–Wolff point at
//! infinity, in Herglotz form `f(z) = z + β + ∫ (1 + tz)/(t − z) dμ(t)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::RealMeasure;
use crate::quadrature::{Integrator, QuadratureOptions};

/// A point `x + iy` with `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && y > 0.0 {
            Ok(Self { x, y })
        } else {
            Err(Error::DomainError(format!("{x} + {y}i is not in the upper half-plane")))
        }
    }

    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }
}

impl From<HalfPlanePoint> for Complex64 {
    fn from(p: HalfPlanePoint) -> Self {
        p.to_complex()
    }
}

/// The Herglotz kernel `(1 + tz)/(t − z)`.
///
/// The imaginary part is always taken from `y (1 + t²)/|t − z|²`, so it is
/// non-negative in floating point. The real part switches between
/// `(1 + t²)/(t − z) − t` (for `|t| <= |z|`) and `z + (1 + z²)/(t − z)`
/// (for `|t| > |z|`, evaluated in `s = 1/t`) to avoid cancellation; the
/// second form also stays finite for `t = ±∞`.
#[inline]
pub fn herglotz_kernel(t: f64, z: HalfPlanePoint) -> Complex64 {
    herglotz_kernel_at(t, t - z.x, z)
}

/// [`herglotz_kernel`] with the offset `d = t − Re z` supplied by a caller
/// that knows it more accurately than `t − x` would round.
#[inline]
pub fn herglotz_kernel_at(t: f64, d: f64, z: HalfPlanePoint) -> Complex64 {
    let HalfPlanePoint { x, y } = z;
    if t.abs() <= x.hypot(y) {
        let den = d * d + y * y;
        let w = 1.0 + t * t;
        Complex64::new(w * d / den - t, y * w / den)
    } else {
        let s = 1.0 / t;
        // divide numerator and denominator of the t-form by t²
        let d = if t.is_finite() { d * s } else { 1.0 };
        let den = d * d + (y * s) * (y * s);
        let re = x + ((1.0 + x * x - y * y) * s * d - 2.0 * x * y * y * s * s) / den;
        let im = y * (s * s + 1.0) / den;
        Complex64::new(re, im)
    }
}

/// `f(z) = z + β + ∫ (1 + tz)/(t − z) dμ(t)` with β and μ not both zero.
///
/// Immutable; evaluation is pure and the map can be shared across threads.
#[derive(Debug, Clone)]
pub struct ParabolicMap {
    beta: f64,
    mu: RealMeasure,
    integrator: Integrator,
}

impl PartialEq for ParabolicMap {
    fn eq(&self, other: &Self) -> bool {
        self.beta == other.beta && self.mu == other.mu
    }
}

impl ParabolicMap {
    pub fn new(beta: f64, mu: RealMeasure) -> Result<Self> {
        Self::with_quadrature(beta, mu, QuadratureOptions::default())
    }

    pub fn with_quadrature(beta: f64, mu: RealMeasure, options: QuadratureOptions) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::InvalidMeasure(format!("beta must be finite (got {beta})")));
        }
        if beta == 0.0 && mu.is_empty() {
            return Err(Error::DegenerateMap);
        }
        Ok(Self {
            beta,
            mu,
            integrator: Integrator::new(options),
        })
    }

    /// `f(z) = z + β`.
    pub fn translation(beta: f64) -> Result<Self> {
        Self::new(beta, RealMeasure::empty())
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mu(&self) -> &RealMeasure {
        &self.mu
    }

    pub fn quadrature(&self) -> QuadratureOptions {
        self.integrator.options()
    }

    /// Same (β, μ) evaluated with a different quadrature rule.
    pub fn with_options(&self, options: QuadratureOptions) -> Self {
        Self {
            beta: self.beta,
            mu: self.mu.clone(),
            integrator: Integrator::new(options),
        }
    }

    /// `∫ (1 + tz)/(t − z) dμ(t)`
    pub fn herglotz_integral(&self, z: HalfPlanePoint) -> Result<Complex64> {
        if !(z.y > 0.0) {
            return Err(Error::DomainError(format!("Im z = {} is not positive", z.y)));
        }
        if self.mu.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if self.mu.is_atomic() {
            self.mu.integrate_kernel(|t| herglotz_kernel(t, z), &self.integrator)
        } else {
            self.mu
                .integrate_kernel_focused(|t, d| herglotz_kernel_at(t, d, z), z.x, z.y, &self.integrator)
        }
    }

    pub fn evaluate(&self, z: HalfPlanePoint) -> Result<HalfPlanePoint> {
        let integral = self.herglotz_integral(z)?;
        Ok(HalfPlanePoint {
            x: z.x + self.beta + integral.re,
            y: z.y + integral.im,
        })
    }

    /// `Im f(z) − Im z = y ∫ (1 + t²)/|t − z|² dμ(t) ≥ 0`.
    pub fn imaginary_gain(&self, z: HalfPlanePoint) -> Result<f64> {
        Ok(self.herglotz_integral(z)?.im)
    }

    /// `β − ∫ t dμ`, the asymptotic horizontal speed of finite-shift orbits.
    pub fn drift(&self) -> Result<f64> {
        Ok(self.beta - self.mu.first_moment()?)
    }
}
