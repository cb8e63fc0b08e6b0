#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use parashift_core::{HalfPlanePoint, HistogramPiece, ParabolicMap, PowerTail, RealMeasure, TailSide};
use proptest::prelude::*;
use rand::Rng;

fn q(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite input")
}

/// `z + β + Σ m (1 + tz)/(t − z)` in exact rational arithmetic, rounded once at the end.
pub fn rational_evaluate(beta: f64, atoms: &[(f64, f64)], z: HalfPlanePoint) -> (f64, f64) {
    let (x, y) = (q(z.x), q(z.y));
    let one = BigRational::from_integer(BigInt::from(1));
    let mut re = x.clone() + q(beta);
    let mut im = y.clone();
    for &(t, m) in atoms {
        let (t, m) = (q(t), q(m));
        // (1 + t x + i t y) / ((t − x) − i y)
        let (a, b) = (one.clone() + t.clone() * x.clone(), t.clone() * y.clone());
        let (c, d) = (t - x.clone(), -y.clone());
        let den = c.clone() * c.clone() + d.clone() * d.clone();
        re += m.clone() * (a.clone() * c.clone() + b.clone() * d.clone()) / den.clone();
        im += m * (b * c - a * d) / den;
    }
    debug_assert!(!im.is_zero());
    (re.to_f64().unwrap(), im.to_f64().unwrap())
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

pub fn random_atoms<R: Rng>(rng: &mut R, max: usize) -> Vec<(f64, f64)> {
    let k = rng.gen_range(1..=max);
    (0..k)
        .map(|_| (rng.gen_range(-10.0..10.0), rng.gen_range(0.01..3.0)))
        .collect()
}

pub fn random_tail<R: Rng>(rng: &mut R) -> PowerTail {
    PowerTail {
        side: if rng.gen_bool(0.5) {
            TailSide::Positive
        } else {
            TailSide::Negative
        },
        t0: rng.gen_range(0.1..5.0),
        c: rng.gen_range(0.05..2.0),
        p: rng.gen_range(1.1..4.5),
    }
}

pub fn random_piece<R: Rng>(rng: &mut R) -> HistogramPiece {
    let a = rng.gen_range(-8.0..8.0);
    HistogramPiece {
        a,
        b: a + rng.gen_range(0.01..6.0),
        height: rng.gen_range(0.01..2.0),
    }
}

/// Non-empty measure with atoms, pieces and tails each present with probability 1/2.
pub fn random_mixed_measure<R: Rng>(rng: &mut R) -> RealMeasure {
    loop {
        let atoms = if rng.gen_bool(0.5) {
            random_atoms(rng, 3)
        } else {
            vec![]
        };
        let pieces = (0..rng.gen_range(0..=2)).map(|_| random_piece(rng)).collect();
        let tails = (0..rng.gen_range(0..=2)).map(|_| random_tail(rng)).collect();
        let atoms = atoms
            .into_iter()
            .map(|(t, mass)| parashift_core::Atom { t, mass })
            .collect();
        let mu = RealMeasure::new(atoms, pieces, tails).unwrap();
        if !mu.is_empty() {
            return mu;
        }
    }
}

pub fn random_point<R: Rng>(rng: &mut R) -> HalfPlanePoint {
    let y = 10f64.powf(rng.gen_range(-1.5..1.5));
    HalfPlanePoint::new(rng.gen_range(-30.0..30.0), y).unwrap()
}

pub fn point_strategy() -> impl Strategy<Value = HalfPlanePoint> {
    (-30.0..30.0f64, -1.5..1.5f64).prop_map(|(x, e)| HalfPlanePoint::new(x, 10f64.powf(e)).unwrap())
}

pub fn atoms_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-10.0..10.0f64, 0.01..3.0f64), 1..6)
}

pub fn tail_strategy() -> impl Strategy<Value = PowerTail> {
    (any::<bool>(), 0.1..5.0f64, 0.05..2.0f64, 1.1..4.5f64).prop_map(|(pos, t0, c, p)| PowerTail {
        side: if pos { TailSide::Positive } else { TailSide::Negative },
        t0,
        c,
        p,
    })
}

pub fn piece_strategy() -> impl Strategy<Value = HistogramPiece> {
    (-8.0..8.0f64, 0.01..6.0f64, 0.01..2.0f64).prop_map(|(a, w, height)| HistogramPiece { a, b: a + w, height })
}

pub fn mixed_measure_strategy() -> impl Strategy<Value = RealMeasure> {
    (
        prop::collection::vec((-10.0..10.0f64, 0.01..3.0f64), 0..3),
        prop::collection::vec(piece_strategy(), 0..3),
        prop::collection::vec(tail_strategy(), 0..3),
    )
        .prop_filter("measure must be non-empty", |(a, p, t)| {
            !(a.is_empty() && p.is_empty() && t.is_empty())
        })
        .prop_map(|(atoms, pieces, tails)| {
            let atoms = atoms
                .into_iter()
                .map(|(t, mass)| parashift_core::Atom { t, mass })
                .collect();
            RealMeasure::new(atoms, pieces, tails).unwrap()
        })
}

pub fn atom_map(beta: f64, atoms: &[(f64, f64)]) -> ParabolicMap {
    ParabolicMap::new(beta, RealMeasure::from_atoms(atoms).unwrap()).unwrap()
}

pub fn tail_map(beta: f64, side: TailSide, p: f64) -> ParabolicMap {
    ParabolicMap::new(beta, RealMeasure::single_tail(side, 1.0, 1.0, p).unwrap()).unwrap()
}

/// Named maps exercised by the structural checks: every branch of the
/// classifier and every component kind of the measure.
pub fn test_maps() -> Vec<(String, ParabolicMap)> {
    let mut maps = vec![
        ("translation".to_string(), ParabolicMap::translation(1.0).unwrap()),
        ("atom b=1".to_string(), atom_map(1.0, &[(0.0, 1.0)])),
        ("atom b=0".to_string(), atom_map(0.0, &[(0.0, 1.0)])),
        ("two atoms".to_string(), atom_map(0.0, &[(1.0, 1.0), (-1.0, 1.0)])),
        (
            "piece".to_string(),
            ParabolicMap::new(
                0.5,
                RealMeasure::new(
                    vec![],
                    vec![HistogramPiece {
                        a: -1.0,
                        b: 2.0,
                        height: 0.5,
                    }],
                    vec![],
                )
                .unwrap(),
            )
            .unwrap(),
        ),
    ];
    for p in [1.5, 2.5, 3.5] {
        for beta in [-1.0, 0.0, 3.0] {
            maps.push((format!("tail+ p={p} b={beta}"), tail_map(beta, TailSide::Positive, p)));
        }
    }
    maps.push(("tail- p=2.5 b=0".to_string(), tail_map(0.0, TailSide::Negative, 2.5)));
    maps
}
