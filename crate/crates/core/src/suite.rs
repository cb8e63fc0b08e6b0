//! Randomized cross-validation of the classifier against orbit simulation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classifier::{cross_validate, CrossValidation};
use crate::error::Result;
use crate::halfplane::{HalfPlanePoint, ParabolicMap};
use crate::measure::RealMeasure;
use crate::orbit::OracleOptions;

/// Ranges for random atom-only maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomMapSampler {
    pub atom_range: (f64, f64),
    /// Masses are drawn from `(0, max_mass]`.
    pub max_mass: f64,
    pub beta_range: (f64, f64),
    pub max_atoms: usize,
    /// Maps with `|drift| < min_drift` are redrawn.
    pub min_drift: f64,
}

impl Default for AtomMapSampler {
    fn default() -> Self {
        Self {
            atom_range: (-5.0, 5.0),
            max_mass: 2.0,
            beta_range: (-3.0, 3.0),
            max_atoms: 4,
            min_drift: 0.1,
        }
    }
}

impl AtomMapSampler {
    pub fn sample<R: Rng>(&self, rng: &mut R) -> ParabolicMap {
        loop {
            let k = rng.gen_range(1..=self.max_atoms);
            let atoms: Vec<(f64, f64)> = (0..k)
                .map(|_| {
                    let t = rng.gen_range(self.atom_range.0..=self.atom_range.1);
                    // (0, max] rather than [0, max)
                    let m = self.max_mass * (1.0 - rng.gen::<f64>());
                    (t, m)
                })
                .collect();
            let beta = rng.gen_range(self.beta_range.0..=self.beta_range.1);
            let Ok(mu) = RealMeasure::from_atoms(&atoms) else {
                continue;
            };
            let Ok(map) = ParabolicMap::new(beta, mu) else { continue };
            if map.drift().is_ok_and(|d| d.abs() >= self.min_drift) {
                return map;
            }
        }
    }

    /// Deterministic map for a seed.
    pub fn for_seed(&self, seed: u64) -> ParabolicMap {
        self.sample(&mut ChaCha8Rng::seed_from_u64(seed))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub seed: u64,
    pub map: ParabolicMap,
    pub outcome: CrossValidation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SuiteTally {
    pub agree: usize,
    pub disagree: usize,
    pub inconclusive: usize,
}

impl SuiteTally {
    pub fn of(rows: &[SuiteRow]) -> Self {
        rows.iter().fold(Self::default(), |mut t, r| {
            match r.outcome {
                CrossValidation::Agree { .. } => t.agree += 1,
                CrossValidation::Disagree { .. } => t.disagree += 1,
                CrossValidation::OracleInconclusive { .. } => t.inconclusive += 1,
            }
            t
        })
    }

    pub fn total(&self) -> usize {
        self.agree + self.disagree + self.inconclusive
    }

    pub fn decided(&self) -> usize {
        self.agree + self.disagree
    }

    pub fn inconclusive_rate(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            self.inconclusive as f64 / self.total() as f64
        }
    }
}

/// Cross-validates one random map per seed, in parallel. Rows come back
/// sorted by seed regardless of scheduling.
pub fn run_suite(
    seeds: &[u64],
    sampler: &AtomMapSampler,
    z0: HalfPlanePoint,
    options: &OracleOptions,
) -> Result<Vec<SuiteRow>> {
    let mut rows = seeds
        .par_iter()
        .map(|&seed| {
            let map = sampler.for_seed(seed);
            let outcome = cross_validate(&map, z0, options)?;
            Ok(SuiteRow { seed, map, outcome })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.seed);
    Ok(rows)
}
