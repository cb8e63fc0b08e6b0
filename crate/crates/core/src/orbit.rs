//! Forward orbits `z_n = f^n(z_0)` and the limit quantities read off them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extrapolate::{aitken_limit_with, LimitEstimate, DEFAULT_TOLERANCE};
use crate::halfplane::{HalfPlanePoint, ParabolicMap};

/// Relative slack allowed on `y_{n+1} >= y_n` before iteration gives up.
pub const MONOTONE_SLACK: f64 = 1e-12;
/// Orbits whose modulus exceeds this are reported as overflowing.
pub const MAX_MODULUS: f64 = 1e150;
pub const DEFAULT_MIN_ORBIT: usize = 1000;
pub const DEFAULT_HORIZON: usize = 100_000;

/// Finite trajectory `z_0, …, z_N`, stored as separate coordinate series.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Orbit {
    /// Number of points, `N + 1`.
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn point(&self, n: usize) -> HalfPlanePoint {
        HalfPlanePoint {
            x: self.xs[n],
            y: self.ys[n],
        }
    }

    pub fn last(&self) -> HalfPlanePoint {
        self.point(self.len() - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = HalfPlanePoint> + '_ {
        self.xs.iter().zip(&self.ys).map(|(&x, &y)| HalfPlanePoint { x, y })
    }

    /// `(y_{n+1} − y_n)/y_n` for `n = 0..N`.
    pub fn series_terms(&self) -> Vec<f64> {
        self.ys.windows(2).map(|w| (w[1] - w[0]) / w[0]).collect()
    }

    /// `ρ(z_{n+1}, z_n)` for `n = 0..N`.
    pub fn rho_steps(&self) -> Vec<f64> {
        (0..self.steps())
            .map(|n| pseudo_hyperbolic_distance(self.point(n + 1), self.point(n)))
            .collect()
    }
}

fn step(map: &ParabolicMap, z: HalfPlanePoint, n: usize) -> Result<HalfPlanePoint> {
    let w = map.evaluate(z)?;
    if !(w.x.is_finite() && w.y.is_finite()) || w.x.hypot(w.y) > MAX_MODULUS {
        return Err(Error::Overflow { step: n + 1 });
    }
    if !(w.y >= z.y * (1.0 - MONOTONE_SLACK)) {
        return Err(Error::NumericalBreakdown {
            step: n + 1,
            before: z.y,
            after: w.y,
        });
    }
    Ok(w)
}

/// `[z_0, f(z_0), …, f^{n_steps}(z_0)]`.
pub fn iterate(map: &ParabolicMap, z0: HalfPlanePoint, n_steps: usize) -> Result<Orbit> {
    iterate_while(map, z0, n_steps, |_| true)
}

/// Iterates until `n_steps` are done or `keep_going` rejects the newest point
/// (that point is kept).
pub fn iterate_while<P>(map: &ParabolicMap, z0: HalfPlanePoint, n_steps: usize, mut keep_going: P) -> Result<Orbit>
where
    P: FnMut(HalfPlanePoint) -> bool,
{
    let z0 = HalfPlanePoint::new(z0.x, z0.y)?;
    let mut xs = Vec::with_capacity(n_steps + 1);
    let mut ys = Vec::with_capacity(n_steps + 1);
    xs.push(z0.x);
    ys.push(z0.y);
    let mut z = z0;
    for n in 0..n_steps {
        z = step(map, z, n)?;
        xs.push(z.x);
        ys.push(z.y);
        if !keep_going(z) {
            break;
        }
    }
    Ok(Orbit { xs, ys })
}

/// `|z − w| / |z − w̄|` on the upper half-plane.
pub fn pseudo_hyperbolic_distance(z: HalfPlanePoint, w: HalfPlanePoint) -> f64 {
    let dx = z.x - w.x;
    let num = dx.hypot(z.y - w.y);
    if num == 0.0 {
        return 0.0;
    }
    num / dx.hypot(z.y + w.y)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitDiagnostics {
    /// `lim (x_{n+1} − x_n)/y_n`
    pub b_hat: LimitEstimate,
    /// `lim y_n`
    pub y_hat: LimitEstimate,
    /// `lim (x_{n+1} − x_n)`
    pub delta_hat: LimitEstimate,
    /// `lim ρ(z_{n+1}, z_n)`, the hyperbolic step
    pub step_hat: LimitEstimate,
    /// `Σ_{k<=n} (y_{k+1} − y_k)/y_k`
    pub series_partial_sums: Vec<f64>,
}

impl OrbitDiagnostics {
    /// `|Δ − b·Y|` and the tolerance `factor ×` the combined error indicators.
    pub fn delta_consistency(&self, factor: f64) -> (f64, f64) {
        let (b, y, d) = (self.b_hat, self.y_hat, self.delta_hat);
        let gap = (d.value - b.value * y.value).abs();
        let combined = d.error_indicator + b.value.abs() * y.error_indicator + y.value.abs() * b.error_indicator;
        (gap, factor * combined)
    }

    /// Positive hyperbolic step: the step limit is resolved away from zero.
    pub fn positive_step(&self) -> bool {
        !self.step_hat.is_zero(STEP_ZERO_FACTOR)
    }
}

/// `step_hat` counts as zero when its value is below this multiple of its error indicator.
pub const STEP_ZERO_FACTOR: f64 = 10.0;

pub fn pommerenke_quantities(orbit: &Orbit) -> Result<OrbitDiagnostics> {
    pommerenke_quantities_with(orbit, DEFAULT_MIN_ORBIT, DEFAULT_TOLERANCE)
}

pub fn pommerenke_quantities_with(orbit: &Orbit, min_len: usize, tolerance: f64) -> Result<OrbitDiagnostics> {
    if orbit.len() < min_len.max(4) {
        return Err(Error::InsufficientOrbit {
            len: orbit.len(),
            min: min_len.max(4),
        });
    }
    let xs = orbit.xs();
    let ys = orbit.ys();
    let dx: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let b_seq: Vec<f64> = dx.iter().zip(ys).map(|(d, y)| d / y).collect();
    let series_partial_sums = orbit
        .series_terms()
        .into_iter()
        .scan(0.0, |acc, t| {
            *acc += t;
            Some(*acc)
        })
        .collect();
    Ok(OrbitDiagnostics {
        b_hat: aitken_limit_with(&b_seq, tolerance),
        y_hat: aitken_limit_with(ys, tolerance),
        delta_hat: aitken_limit_with(&dx, tolerance),
        step_hat: aitken_limit_with(&orbit.rho_steps(), tolerance),
        series_partial_sums,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftLimit {
    /// Extrapolated `lim Re(z_n)/n`.
    pub re: LimitEstimate,
    /// `Im(z_N)/N`, which tends to zero for finite-shift maps.
    pub im_residual: f64,
}

/// Extrapolates `x_n / n`.
pub fn drift_limit(orbit: &Orbit) -> Result<DriftLimit> {
    drift_limit_with(orbit, DEFAULT_MIN_ORBIT, DEFAULT_TOLERANCE)
}

pub fn drift_limit_with(orbit: &Orbit, min_len: usize, tolerance: f64) -> Result<DriftLimit> {
    if orbit.len() < min_len.max(4) {
        return Err(Error::InsufficientOrbit {
            len: orbit.len(),
            min: min_len.max(4),
        });
    }
    let seq: Vec<f64> = orbit.xs()[1..]
        .iter()
        .enumerate()
        .map(|(k, x)| x / (k + 1) as f64)
        .collect();
    let last = orbit.steps() as f64;
    Ok(DriftLimit {
        re: aitken_limit_with(&seq, tolerance),
        im_residual: orbit.last().y.abs() / last,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleVerdict {
    BoundedShift { y_limit: f64 },
    UnboundedShift,
    Inconclusive,
}

impl OracleVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            OracleVerdict::BoundedShift { .. } => "BoundedShift",
            OracleVerdict::UnboundedShift => "UnboundedShift",
            OracleVerdict::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub n_max: usize,
    /// Largest admissible extrapolated tail `Σ_{k>N} (y_{k+1} − y_k)/y_k`.
    pub tolerance: f64,
    /// Unbounded once `y_n > divergence_factor · y_0`.
    pub divergence_factor: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_HORIZON,
            tolerance: 0.05,
            divergence_factor: 1e6,
        }
    }
}

/// Decade-ratio bounds on the series terms: at or below `BOUNDED_RATIO` the
/// decay is fast enough to sum, at or above `DIVERGENT_RATIO` it is
/// harmonic-like or slower.
pub const BOUNDED_RATIO: f64 = 0.5;
pub const DIVERGENT_RATIO: f64 = 0.8;

/// Sums of the series terms over the last two decades of indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesProfile {
    /// `Σ_{[N/100, N/10)}`
    pub previous_decade: f64,
    /// `Σ_{[N/10, N)}`
    pub last_decade: f64,
    /// `last_decade / previous_decade`; `10^{1−s}` for terms `~ k^{−s}`.
    pub ratio: f64,
    /// Geometric extrapolation of the remaining sum beyond `N`.
    pub tail: f64,
}

/// Decade profile of non-negative series terms; `None` for fewer than 100 terms.
pub fn series_profile(terms: &[f64]) -> Option<SeriesProfile> {
    let n = terms.len();
    if n < 100 {
        return None;
    }
    let previous_decade: f64 = terms[n / 100..n / 10].iter().sum();
    let last_decade: f64 = terms[n / 10..].iter().sum();
    let ratio = if previous_decade > 0.0 {
        last_decade / previous_decade
    } else if last_decade == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let tail = if ratio < 1.0 {
        last_decade * ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    Some(SeriesProfile {
        previous_decade,
        last_decade,
        ratio,
        tail,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub verdict: OracleVerdict,
    pub steps: usize,
    pub y_last: f64,
    pub profile: Option<SeriesProfile>,
}

/// Simulation test of boundedness of `y_n`, through the series
/// `Σ (y_{n+1} − y_n)/y_n` (finite iff `y_n` is bounded).
pub fn shift_oracle(map: &ParabolicMap, z0: HalfPlanePoint, options: &OracleOptions) -> Result<OracleReport> {
    let threshold = options.divergence_factor * z0.y;
    let orbit = iterate_while(map, z0, options.n_max, |z| z.y <= threshold)?;
    Ok(oracle_verdict(&orbit, options))
}

/// Verdict of [`shift_oracle`] on an orbit that is already computed. Only
/// the first `options.n_max` steps are looked at.
pub fn oracle_verdict(orbit: &Orbit, options: &OracleOptions) -> OracleReport {
    let threshold = options.divergence_factor * orbit.ys()[0];
    let len = orbit.len().min(options.n_max + 1);
    let ys = &orbit.ys()[..len];
    if let Some(k) = ys.iter().position(|&y| y > threshold) {
        return OracleReport {
            verdict: OracleVerdict::UnboundedShift,
            steps: k,
            y_last: ys[k],
            profile: None,
        };
    }
    let y_last = ys[len - 1];
    let terms: Vec<f64> = ys.windows(2).map(|w| (w[1] - w[0]) / w[0]).collect();
    let profile = series_profile(&terms);
    let verdict = match profile {
        None => OracleVerdict::Inconclusive,
        Some(p) if p.ratio >= DIVERGENT_RATIO => OracleVerdict::UnboundedShift,
        Some(p) if p.ratio <= BOUNDED_RATIO && p.tail <= options.tolerance => OracleVerdict::BoundedShift {
            y_limit: y_last * p.tail.exp(),
        },
        Some(_) => OracleVerdict::Inconclusive,
    };
    OracleReport {
        verdict,
        steps: len - 1,
        y_last,
        profile,
    }
}

/// One row of the orbit CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitRow {
    pub n: usize,
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub rho_step: f64,
    pub series_partial: f64,
}

/// Rows for `n = 0, stride, 2·stride, … < N`.
pub fn orbit_rows(orbit: &Orbit, stride: usize) -> Vec<OrbitRow> {
    let stride = stride.max(1);
    let mut rows = Vec::new();
    let mut partial = 0.0;
    for n in 0..orbit.steps() {
        let z = orbit.point(n);
        let w = orbit.point(n + 1);
        partial += (w.y - z.y) / z.y;
        if n % stride == 0 {
            rows.push(OrbitRow {
                n,
                x: z.x,
                y: z.y,
                dx: w.x - z.x,
                rho_step: pseudo_hyperbolic_distance(w, z),
                series_partial: partial,
            });
        }
    }
    rows
}
