//! Adaptive composite Gauss–Legendre quadrature for complex-valued integrands.
//!
//! Each panel is integrated with a fixed-order rule and bisected until the
//! parent estimate agrees with the sum of its halves. The acceptance test is
//! absolute, scaled by the magnitude of a coarse first pass over all initial
//! panels, so that panels touching an integrable endpoint singularity shrink
//! until their contribution is negligible instead of forever chasing a
//! relative error that does not improve under bisection. A floor of a few ulps
//! of `∫|f|` keeps a component that cancels to zero from chasing round-off.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 32;
pub const DEFAULT_REL_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub order: usize,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
            rel_tol: DEFAULT_REL_TOL,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

impl QuadratureOptions {
    /// Doubled order and halved tolerance; used as a reference rule in tests.
    pub fn refined(self) -> Self {
        Self {
            order: self.order * 2,
            rel_tol: self.rel_tol * 0.5,
            max_depth: self.max_depth,
        }
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
///
/// Roots of P_n are found by Newton iteration from the Tricomi initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[derive(Debug, Clone)]
pub struct Integrator {
    options: QuadratureOptions,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Default for Integrator {
    fn default() -> Self {
        Self::new(QuadratureOptions::default())
    }
}

impl Integrator {
    pub fn new(options: QuadratureOptions) -> Self {
        let (nodes, weights) = gauss_legendre(options.order);
        Self {
            options,
            nodes,
            weights,
        }
    }

    pub fn options(&self) -> QuadratureOptions {
        self.options
    }

    /// Single application of the fixed rule on [a, b].
    pub fn panel<F: Fn(f64) -> Complex64>(&self, f: &F, a: f64, b: f64) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }

    /// The fixed rule applied to `f` and to `|f|`.
    fn panel_with_abs<F: Fn(f64) -> Complex64>(&self, f: &F, a: f64, b: f64) -> (Complex64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x);
            acc += v * *w;
            abs += v.norm() * *w;
        }
        (acc * half, abs * half.abs())
    }

    /// Integrates `f` over [breakpoints[0], breakpoints[last]] with the
    /// interior breakpoints used as initial panel boundaries.
    ///
    /// Breakpoints must be sorted; duplicates are skipped.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F, breakpoints: &[f64]) -> Result<Complex64> {
        let mut panels: Vec<(f64, f64)> = Vec::with_capacity(breakpoints.len());
        for w in breakpoints.windows(2) {
            debug_assert!(w[0] <= w[1], "breakpoints must be sorted");
            if w[1] > w[0] {
                panels.push((w[0], w[1]));
            }
        }
        if panels.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }

        let (coarse, abs): (Vec<Complex64>, Vec<f64>) =
            panels.iter().map(|&(a, b)| self.panel_with_abs(&f, a, b)).unzip();
        let (scale_re, scale_im) = coarse
            .iter()
            .fold((0.0f64, 0.0f64), |(r, i), c| (r + c.re.abs(), i + c.im.abs()));
        let floor = ROUNDOFF_ULPS * f64::EPSILON * abs.iter().sum::<f64>();
        let tol = Tolerance {
            re: (self.options.rel_tol * scale_re).max(floor).max(f64::MIN_POSITIVE),
            im: (self.options.rel_tol * scale_im).max(floor).max(f64::MIN_POSITIVE),
        };

        let mut total = Complex64::new(0.0, 0.0);
        for (&(a, b), whole) in panels.iter().zip(coarse) {
            total += self.refine(&f, a, b, whole, 0, tol)?;
        }
        Ok(total)
    }

    fn refine<F: Fn(f64) -> Complex64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        whole: Complex64,
        depth: u32,
        tol: Tolerance,
    ) -> Result<Complex64> {
        let mid = 0.5 * (a + b);
        let left = self.panel(f, a, mid);
        let right = self.panel(f, mid, b);
        let sum = left + right;
        let diff = sum - whole;
        if diff.re.abs() <= tol.re && diff.im.abs() <= tol.im {
            return Ok(sum);
        }
        if depth >= self.options.max_depth || mid <= a || mid >= b {
            return Err(Error::QuadratureFailure {
                a,
                b,
                max_depth: self.options.max_depth,
            });
        }
        Ok(self.refine(f, a, mid, left, depth + 1, tol)? + self.refine(f, mid, b, right, depth + 1, tol)?)
    }
}

const ROUNDOFF_ULPS: f64 = 64.0;

#[derive(Debug, Clone, Copy)]
struct Tolerance {
    re: f64,
    im: f64,
}
