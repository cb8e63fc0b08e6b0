//! Limit estimation for slowly converging sequences with Aitken's Δ² process.
//!
//! Two variants run on every sequence:
//!
//! * consecutive: Δ² on the last three terms, exact when the error is
//!   geometric in the index;
//! * dyadic: Δ² iterated on the terms at indices `M/16, M/8, …, M`, exact
//!   when the error is a power of the index. Orbit statistics converge like
//!   `n^{-α}`, where the consecutive variant barely helps.
//!
//! The variant with the smaller error indicator wins. Each indicator is the
//! distance between the final accelerated value and the one obtained from
//! the first half of the sequence (for the dyadic variant also the previous
//! level), so it reflects the actual convergence of that variant. Iterated
//! Δ² stops at the last level whose differences still contract.

/// Extrapolated limit with an error indicator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub value: f64,
    pub error_indicator: f64,
    pub converged: bool,
}

impl LimitEstimate {
    /// Treat the limit as zero when it is not resolved from its own error.
    pub fn is_zero(&self, factor: f64) -> bool {
        self.value.abs() <= factor * self.error_indicator
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

const DYADIC_LEVELS: u32 = 5;

pub fn aitken_limit(seq: &[f64]) -> LimitEstimate {
    aitken_limit_with(seq, DEFAULT_TOLERANCE)
}

/// `converged` is set iff the error indicator is at most `tolerance`.
pub fn aitken_limit_with(seq: &[f64], tolerance: f64) -> LimitEstimate {
    let n = seq.len();
    let Some(&last) = seq.last() else {
        return LimitEstimate {
            value: f64::NAN,
            error_indicator: f64::INFINITY,
            converged: false,
        };
    };
    let raw_fallback = || {
        // distance travelled over the second half; |last − seq[n−2]| would
        // grossly understate the error of a slowly converging sequence
        let err = if n >= 2 {
            (last - seq[(n / 2).min(n - 2)]).abs()
        } else {
            f64::INFINITY
        };
        LimitEstimate {
            value: last,
            error_indicator: err,
            converged: false,
        }
    };
    if n < 3 {
        return raw_fallback();
    }

    let candidates = [consecutive(seq), dyadic(seq)];
    let best = candidates
        .into_iter()
        .flatten()
        .filter(|(v, e)| v.is_finite() && e.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1));
    match best {
        Some((value, error_indicator)) => LimitEstimate {
            value,
            error_indicator,
            converged: error_indicator <= tolerance,
        },
        None => raw_fallback(),
    }
}

/// One Δ² step on `(a, b, c)`. `None` when the second difference is not
/// resolvable or the differences do not contract.
fn delta_squared(a: f64, b: f64, c: f64) -> Option<f64> {
    let d1 = b - a;
    let d2 = c - b;
    if d1 == 0.0 && d2 == 0.0 {
        return Some(c);
    }
    // A divergent or oscillating-outward sequence has an anti-limit, not a limit.
    if d2.abs() >= d1.abs() {
        return None;
    }
    let den = d2 - d1;
    let scale = a.abs().max(b.abs()).max(c.abs());
    if den.abs() <= 4.0 * f64::EPSILON * scale || den == 0.0 {
        return None;
    }
    Some(c - d2 * d2 / den)
}

fn consecutive(seq: &[f64]) -> Option<(f64, f64)> {
    let n = seq.len();
    let at = |end: usize| delta_squared(seq[end - 2], seq[end - 1], seq[end]);
    let last = at(n - 1)?;
    // compare with the accelerated value at half the length
    let half = (n / 2).max(2);
    let prev = if half < n - 1 {
        at(half)?
    } else {
        at(n - 2).unwrap_or(seq[n - 1])
    };
    Some((last, (last - prev).abs()))
}

fn dyadic(seq: &[f64]) -> Option<(f64, f64)> {
    let (value, internal) = dyadic_once(seq)?;
    // a transient can make the levels agree by accident; require the estimate
    // to survive halving the horizon as well
    let halved = dyadic_once(&seq[..seq.len() / 2]).map_or(internal, |(v, _)| (value - v).abs());
    Some((value, internal.max(halved)))
}

fn dyadic_once(seq: &[f64]) -> Option<(f64, f64)> {
    let n = seq.len();
    let levels = DYADIC_LEVELS.min(n.ilog2() + 1);
    if levels < 3 {
        return None;
    }
    let step = 1usize << (levels - 1);
    let top = n / step * step;
    let mut samples: Vec<f64> = (0..levels).rev().map(|j| seq[(top >> j) - 1]).collect();

    // iterate while the differences still contract; once a level has
    // converged the next one only sees rounding noise
    let mut history = Vec::new();
    while samples.len() >= 3 {
        let next: Option<Vec<f64>> = samples.windows(3).map(|w| delta_squared(w[0], w[1], w[2])).collect();
        let Some(next) = next else { break };
        history.push(*next.last()?);
        samples = next;
    }
    let value = *history.last()?;
    // previous: second-to-last entry at the final level, else the last of the level before
    let prev = if samples.len() >= 2 {
        samples[samples.len() - 2]
    } else if history.len() >= 2 {
        history[history.len() - 2]
    } else {
        // single level with three samples: compare to the last sampled raw term
        seq[top - 1]
    };
    Some((value, (value - prev).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_error_with_rounding_noise_is_not_understated() {
        let limit = 0.12;
        let seq: Vec<f64> = (1..=100_000)
            .map(|n| limit - 35.0 / n as f64 + 1e-12 * (n as f64).sin())
            .collect();
        let est = aitken_limit(&seq);
        let err = (est.value - limit).abs();
        assert!(err < 1e-6, "{est:?}");
        assert!(err <= est.error_indicator.max(1e-9), "{est:?}");
    }

    #[test]
    fn constant_sequence() {
        let e = aitken_limit(&[3.5; 10]);
        assert_eq!(e.value, 3.5);
        assert_eq!(e.error_indicator, 0.0);
        assert!(e.converged);
    }

    #[test]
    fn geometric_error_is_removed_exactly() {
        let seq: Vec<f64> = (1..=20).map(|n| 1.0 + 0.5f64.powi(n)).collect();
        let e = aitken_limit(&seq);
        assert!((e.value - 1.0).abs() <= 4.0 * f64::EPSILON, "{}", e.value);
        assert!(e.converged);
    }

    #[test]
    fn power_law_error_is_removed() {
        let seq: Vec<f64> = (1..=4096).map(|n| 2.0 + 3.0 / (n as f64).sqrt()).collect();
        let e = aitken_limit(&seq);
        assert!((e.value - 2.0).abs() < 1e-9, "{}", e.value);
    }

    #[test]
    fn short_sequences_fall_back() {
        let e = aitken_limit(&[1.0, 2.0]);
        assert_eq!(e.value, 2.0);
        assert!(!e.converged);
        assert!(aitken_limit(&[]).value.is_nan());
    }

    #[test]
    fn divergent_sequence_is_not_converged() {
        let seq: Vec<f64> = (1..=100_000).map(|n| (2.0 * n as f64).sqrt()).collect();
        let e = aitken_limit(&seq);
        assert!(!e.converged, "{e:?}");
    }

    #[test]
    fn zero_test() {
        let e = LimitEstimate {
            value: 1e-9,
            error_indicator: 1e-9,
            converged: true,
        };
        assert!(e.is_zero(10.0));
        let e = LimitEstimate {
            value: 0.3,
            error_indicator: 1e-9,
            converged: true,
        };
        assert!(!e.is_zero(10.0));
    }
}
