//! Finite positive measures on the real line.
//!
//! A measure is a finite sum of point masses, constant-density histogram
//! pieces and one-sided power-law tails `c |t|^{-p}` on `|t| >= t0`. Every
//! moment the classifier needs has a closed form on this family, and the
//! tails make every divergence pattern of the absolute and square moments
//! reachable.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::Integrator;

/// A non-negative value that may be `+∞`.
///
/// Moments are reported with an explicit infinite flag so comparisons in the
/// classifier never depend on floating overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinite => None,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinite => f.write_str("inf"),
        }
    }
}

impl std::ops::Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::Infinite,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub t: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramPiece {
    pub a: f64,
    pub b: f64,
    pub height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailSide {
    Positive,
    Negative,
}

/// Density `c |t|^{-p}` on `[t0, ∞)` or `(-∞, -t0]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTail {
    pub side: TailSide,
    pub t0: f64,
    pub c: f64,
    pub p: f64,
}

impl PowerTail {
    pub fn mass(&self) -> f64 {
        self.c * self.t0.powf(1.0 - self.p) / (self.p - 1.0)
    }

    fn sign(&self) -> f64 {
        match self.side {
            TailSide::Positive => 1.0,
            TailSide::Negative => -1.0,
        }
    }

    /// `∫ |t|^k c |t|^{-p} dt` over the tail; infinite when `p <= k + 1`.
    fn abs_power_moment(&self, k: f64) -> ExtendedReal {
        let e = self.p - k - 1.0;
        if e <= 0.0 {
            ExtendedReal::Infinite
        } else {
            ExtendedReal::Finite(self.c * self.t0.powf(-e) / e)
        }
    }

    /// Exponent `m` of the tail coordinate `v`, with `t = ±t0 v^{-m}`.
    ///
    /// In `u = t0/|t|` the tail is `c t0^{1-p} u^{p-2} du`, which is singular
    /// at `u = 0` when `p < 2` and only Hölder when `p > 2`. With `u = v^m`
    /// the weight becomes `m v^{m(p-1)-1}`; `m` is the smallest integer that
    /// makes that exponent at least 8, so the integrand is smooth enough for
    /// the fixed-order rule down to `v = 0`. Kernels that are analytic in
    /// `1/t` at infinity stay analytic in `v`.
    pub fn smoothing_power(&self) -> i32 {
        ((9.0 / (self.p - 1.0)).ceil() as i32).max(1)
    }

    /// Position `t` of the tail coordinate `v ∈ (0, 1]`.
    pub fn position(&self, v: f64) -> f64 {
        self.sign() * self.t0 * v.powi(-self.smoothing_power())
    }

    /// Density of the tail in the coordinate `v`.
    pub fn weight(&self, v: f64) -> f64 {
        let m = self.smoothing_power();
        let e = f64::from(m) * (self.p - 1.0) - 1.0;
        self.c * self.t0.powf(1.0 - self.p) * f64::from(m) * v.powf(e)
    }

    /// Inverse of [`PowerTail::position`], defined for `|t| >= t0` on the tail side.
    pub fn coordinate(&self, t: f64) -> Option<f64> {
        let r = self.sign() * t / self.t0;
        (r >= 1.0).then(|| r.powf(-1.0 / f64::from(self.smoothing_power())))
    }

    fn validate(&self) -> Result<()> {
        let ok = self.t0.is_finite()
            && self.t0 > 0.0
            && self.c.is_finite()
            && self.c > 0.0
            && self.p.is_finite()
            && self.p > 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidMeasure(format!(
                "tail needs t0 > 0, c > 0, p > 1 (got t0 = {}, c = {}, p = {})",
                self.t0, self.c, self.p
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    /// `∫_{(-∞,0)} |t| dμ`
    AbsNeg,
    /// `∫_{(0,∞)} |t| dμ`
    AbsPos,
    /// `∫ t dμ`, defined only when both absolute moments are finite.
    First,
    /// `∫_{(-∞,0)} t² dμ`
    SqNeg,
    /// `∫_{(0,∞)} t² dμ`
    SqPos,
}

/// Finite positive Borel measure on ℝ. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RealMeasure {
    atoms: Vec<Atom>,
    pieces: Vec<HistogramPiece>,
    tails: Vec<PowerTail>,
}

impl RealMeasure {
    pub fn new(atoms: Vec<Atom>, pieces: Vec<HistogramPiece>, tails: Vec<PowerTail>) -> Result<Self> {
        for a in &atoms {
            if !(a.t.is_finite() && a.mass.is_finite() && a.mass > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "atom needs finite position and positive mass (got t = {}, mass = {})",
                    a.t, a.mass
                )));
            }
        }
        for p in &pieces {
            if !(p.a.is_finite() && p.b.is_finite() && p.a < p.b && p.height.is_finite() && p.height > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "piece needs finite a < b and positive height (got a = {}, b = {}, height = {})",
                    p.a, p.b, p.height
                )));
            }
        }
        for t in &tails {
            t.validate()?;
        }
        Ok(Self { atoms, pieces, tails })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Pure point measure from `(position, mass)` pairs.
    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            atoms.iter().map(|&(t, mass)| Atom { t, mass }).collect(),
            Vec::new(),
            Vec::new(),
        )
    }

    pub fn single_tail(side: TailSide, t0: f64, c: f64, p: f64) -> Result<Self> {
        Self::new(Vec::new(), Vec::new(), vec![PowerTail { side, t0, c, p }])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[HistogramPiece] {
        &self.pieces
    }

    pub fn tails(&self) -> &[PowerTail] {
        &self.tails
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.pieces.is_empty() && self.tails.is_empty()
    }

    pub fn is_atomic(&self) -> bool {
        self.pieces.is_empty() && self.tails.is_empty()
    }

    /// μ(ℝ)
    pub fn total_mass(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass).sum();
        let pieces: f64 = self.pieces.iter().map(|p| p.height * (p.b - p.a)).sum();
        let tails: f64 = self.tails.iter().map(PowerTail::mass).sum();
        atoms + pieces + tails
    }

    /// Same measure with every mass multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.atoms
                .iter()
                .map(|a| Atom {
                    mass: a.mass * factor,
                    ..*a
                })
                .collect(),
            self.pieces
                .iter()
                .map(|p| HistogramPiece {
                    height: p.height * factor,
                    ..*p
                })
                .collect(),
            self.tails.iter().map(|t| PowerTail { c: t.c * factor, ..*t }).collect(),
        )
    }

    pub fn moment(&self, kind: MomentKind) -> Result<ExtendedReal> {
        match kind {
            MomentKind::AbsNeg => Ok(self.side_moment(TailSide::Negative, 1)),
            MomentKind::AbsPos => Ok(self.side_moment(TailSide::Positive, 1)),
            MomentKind::SqNeg => Ok(self.side_moment(TailSide::Negative, 2)),
            MomentKind::SqPos => Ok(self.side_moment(TailSide::Positive, 2)),
            MomentKind::First => {
                let neg = self.side_moment(TailSide::Negative, 1);
                let pos = self.side_moment(TailSide::Positive, 1);
                match (neg, pos) {
                    (ExtendedReal::Finite(n), ExtendedReal::Finite(p)) => Ok(ExtendedReal::Finite(p - n)),
                    _ => Err(Error::UndefinedMoment(format!(
                        "first moment needs finite absolute moments (negative side {neg}, positive side {pos})"
                    ))),
                }
            }
        }
    }

    /// `∫ t dμ`, or `UndefinedMoment` when `∫ |t| dμ = ∞`.
    pub fn first_moment(&self) -> Result<f64> {
        self.moment(MomentKind::First)?
            .finite()
            .ok_or_else(|| Error::UndefinedMoment("first moment".into()))
    }

    /// `∫ |t|^k dμ` restricted to one open half-line, in closed form.
    fn side_moment(&self, side: TailSide, k: i32) -> ExtendedReal {
        let on_side = |t: f64| match side {
            TailSide::Positive => t > 0.0,
            TailSide::Negative => t < 0.0,
        };
        // fold from +0: an empty float sum is -0
        let mut acc = self
            .atoms
            .iter()
            .filter(|a| on_side(a.t))
            .fold(0.0, |s, a| s + a.mass * a.t.abs().powi(k));
        for p in &self.pieces {
            let (lo, hi) = match side {
                TailSide::Positive => (p.a.max(0.0), p.b.max(0.0)),
                TailSide::Negative => ((-p.b).max(0.0), (-p.a).max(0.0)),
            };
            let kf = f64::from(k + 1);
            acc += p.height * (hi.powi(k + 1) - lo.powi(k + 1)) / kf;
        }
        let mut total = ExtendedReal::Finite(acc);
        for t in self.tails.iter().filter(|t| t.side == side) {
            total = total + t.abs_power_moment(f64::from(k));
        }
        total
    }

    /// `∫ k(t) dμ(t)` for a kernel continuous on the support.
    ///
    /// Atoms are summed exactly, pieces use adaptive Gauss–Legendre, tails
    /// are integrated in the coordinate of [`PowerTail::position`]. On tails
    /// the kernel must stay bounded.
    pub fn integrate_kernel<K>(&self, kernel: K, integrator: &Integrator) -> Result<Complex64>
    where
        K: Fn(f64) -> Complex64,
    {
        let mut total = Complex64::new(0.0, 0.0);
        for a in &self.atoms {
            total += kernel(a.t) * a.mass;
        }
        for p in &self.pieces {
            total += integrator.integrate(&kernel, &[p.a, p.b])? * p.height;
        }
        for tail in &self.tails {
            total += integrate_tail_coordinate(tail, &|t| kernel(t), &[0.0, 1.0], integrator)?;
        }
        Ok(total)
    }

    /// `∫ k(t) dμ(t)` for a kernel with a complex pole at `center + i width`.
    ///
    /// The kernel is called as `k(t, t − center)`. Within the zone
    /// `|t − center| <= |center|/2` quadrature runs in the offset itself, so
    /// the second argument is exact at every node and the kernel never has to
    /// form `t − center` from a rounded `t`; outside it `|t| <= 3 |t − center|`
    /// and rounding in `t` is harmless. Panels are
    /// graded geometrically (ratio 16) away from the pole, so each sits at a
    /// distance comparable to its own length.
    pub fn integrate_kernel_focused<K>(
        &self,
        kernel: K,
        center: f64,
        width: f64,
        integrator: &Integrator,
    ) -> Result<Complex64>
    where
        K: Fn(f64, f64) -> Complex64,
    {
        let focus = Focus::new(center, width);
        let c = center;
        let far = |t: f64| kernel(t, t - c);
        let near = |s: f64| kernel(c + s, s);

        let mut total = Complex64::new(0.0, 0.0);
        for a in &self.atoms {
            total += kernel(a.t, a.t - c) * a.mass;
        }

        let mut breaks = Vec::new();
        for p in &self.pieces {
            let (lo, hi) = (c - focus.radius, c + focus.radius);
            if p.a < lo {
                focus.far_breaks(p.a, p.b.min(lo), &mut breaks);
                total += integrator.integrate(far, &breaks)? * p.height;
            }
            if p.b > hi {
                focus.far_breaks(p.a.max(hi), p.b, &mut breaks);
                total += integrator.integrate(far, &breaks)? * p.height;
            }
            let s_lo = if p.a > lo { p.a - c } else { -focus.radius };
            let s_hi = if p.b < hi { p.b - c } else { focus.radius };
            if s_lo < s_hi {
                focus.near_breaks(s_lo, s_hi, &mut breaks);
                total += integrator.integrate(near, &breaks)? * p.height;
            }
        }

        for tail in &self.tails {
            let sign = tail.sign();
            // near zone as a range of |t| on the tail's side
            let (r_lo, r_hi) = if sign > 0.0 {
                (c - focus.radius, c + focus.radius)
            } else {
                (-(c + focus.radius), -(c - focus.radius))
            };
            let r_lo = r_lo.max(tail.t0);
            let m = f64::from(tail.smoothing_power());
            let coordinate = |r: f64| (tail.t0 / r).powf(1.0 / m);
            let (v_lo, v_hi) = if r_lo < r_hi {
                (coordinate(r_hi), coordinate(r_lo))
            } else {
                (1.0, 1.0)
            };

            // grading across the origin only helps a tail when the pole is above it
            let mut far_points: Vec<f64> = focus
                .far
                .iter()
                .filter(|&&t| t * c > 0.0)
                .filter_map(|&t| tail.coordinate(t))
                .collect();
            // radial image of the pole, useful when it sits off the tail's side
            far_points.push(coordinate(c.hypot(width).max(tail.t0)));
            for (a, b) in [(0.0, v_lo), (v_hi, 1.0)] {
                if a < b {
                    breaks.clear();
                    breaks.push(a);
                    breaks.extend(far_points.iter().copied().filter(|&v| v > a && v < b));
                    breaks.push(b);
                    breaks.sort_by(f64::total_cmp);
                    total += integrate_tail_coordinate(tail, &far, &breaks, integrator)?;
                }
            }

            if r_lo < r_hi {
                let (s_lo, s_hi) = if sign > 0.0 {
                    ((tail.t0 - c).max(-focus.radius), focus.radius)
                } else {
                    (-focus.radius, (-tail.t0 - c).min(focus.radius))
                };
                focus.near_breaks(s_lo, s_hi, &mut breaks);
                let density = |s: f64| near(s) * (tail.c * (c + s).abs().powf(-tail.p));
                total += integrator.integrate(density, &breaks)?;
            }
        }
        Ok(total)
    }
}

/// `∫ k dμ` over the part of a tail between the given coordinates.
fn integrate_tail_coordinate(
    tail: &PowerTail,
    kernel: &dyn Fn(f64) -> Complex64,
    breaks: &[f64],
    integrator: &Integrator,
) -> Result<Complex64> {
    let f = |v: f64| {
        let weight = tail.weight(v);
        if weight == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            kernel(tail.position(v)) * weight
        }
    };
    integrator.integrate(f, breaks)
}

const FOCUS_RATIO: f64 = 16.0;

/// Geometric panel grading around a pole at `center + i width`.
struct Focus {
    radius: f64,
    /// Offsets inside `(-radius, radius)`.
    near: Vec<f64>,
    /// Positions beyond the near zone.
    far: Vec<f64>,
}

impl Focus {
    fn new(center: f64, width: f64) -> Self {
        let radius = 0.5 * center.abs();
        let reach = 8.0 * center.abs().max(width);
        let mut near = vec![0.0];
        let mut far = Vec::new();
        let mut d = width;
        while d <= reach {
            if d < radius {
                near.extend([-d, d]);
            } else {
                far.extend([center - d, center + d]);
            }
            d *= FOCUS_RATIO;
        }
        Self { radius, near, far }
    }

    fn near_breaks(&self, lo: f64, hi: f64, out: &mut Vec<f64>) {
        Self::fill(lo, hi, &self.near, out);
    }

    fn far_breaks(&self, lo: f64, hi: f64, out: &mut Vec<f64>) {
        Self::fill(lo, hi, &self.far, out);
    }

    fn fill(lo: f64, hi: f64, points: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.push(lo);
        out.extend(points.iter().copied().filter(|&x| x > lo && x < hi));
        out.push(hi);
        out.sort_by(f64::total_cmp);
    }
}
