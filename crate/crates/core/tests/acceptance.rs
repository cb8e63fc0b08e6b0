//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use parashift_core::orbit::{drift_limit, oracle_verdict, pommerenke_quantities};
use parashift_core::{
    classify_shift, iterate, pseudo_hyperbolic_distance, run_suite, AtomMapSampler, Complex64, CrossValidation,
    DiskSetting, HalfPlanePoint, Integrator, OracleOptions, OracleVerdict, Orbit, OrbitDiagnostics, ParabolicMap,
    ShiftKind, SuiteTally, TailSide,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const HORIZON: usize = 100_000;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

/// A map with its orbit from `i` and what the estimators make of it.
struct Run {
    name: String,
    map: ParabolicMap,
    kind: ShiftKind,
    orbit: Orbit,
    oracle: OracleVerdict,
    diagnostics: OrbitDiagnostics,
}

impl Run {
    fn new(name: impl Into<String>, map: ParabolicMap) -> Self {
        let orbit = iterate(&map, HalfPlanePoint::i(), HORIZON).unwrap();
        let oracle = oracle_verdict(&orbit, &OracleOptions::default()).verdict;
        let diagnostics = pommerenke_quantities(&orbit).unwrap();
        Self {
            name: name.into(),
            kind: classify_shift(&map).kind,
            map,
            orbit,
            oracle,
            diagnostics,
        }
    }
}

fn seeds() -> Vec<u64> {
    (0..200).collect()
}

fn criterion_1() -> Outcome {
    let rows = run_suite(
        &seeds(),
        &AtomMapSampler::default(),
        HalfPlanePoint::i(),
        &OracleOptions::default(),
    )
    .unwrap();
    let tally = SuiteTally::of(&rows);
    let disagreements: Vec<u64> = rows
        .iter()
        .filter(|r| matches!(r.outcome, CrossValidation::Disagree { .. }))
        .map(|r| r.seed)
        .collect();
    Outcome::new(
        tally.total() == 200 && tally.disagree == 0 && tally.inconclusive_rate() < 0.05,
        format!(
            "agree {}/{} decided, inconclusive {:.1}%, disagreeing seeds {disagreements:?}",
            tally.agree,
            tally.decided(),
            100.0 * tally.inconclusive_rate()
        ),
    )
}

/// Positive-side tails with β on both sides of `∫ t dμ` where it exists.
fn tail_suite() -> Vec<Run> {
    let mut runs = Vec::new();
    for (p, betas) in [
        (1.5, vec![-1.0, 3.0]),
        (2.5, vec![0.0, 1.0, 3.0]),
        (3.5, vec![0.0, 1.5]),
    ] {
        for beta in betas {
            runs.push(Run::new(
                format!("p={p} beta={beta}"),
                tail_map(beta, TailSide::Positive, p),
            ));
        }
    }
    runs
}

/// The verdict predicted from the tail exponent alone (`t0 = c = 1`).
fn expected_tail_kind(beta: f64, p: f64) -> ShiftKind {
    if p <= 2.0 {
        return ShiftKind::InfiniteShift;
    }
    let first = 1.0 / (p - 2.0);
    match (beta < first, beta > first, p > 3.0) {
        (true, _, _) => ShiftKind::FiniteShiftCaseII,
        (_, true, true) => ShiftKind::FiniteShiftCaseI,
        _ => ShiftKind::InfiniteShift,
    }
}

fn criterion_2(tails: &[Run]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for r in tails {
        let p: f64 = r.name[2..5].parse().unwrap();
        let classifier_ok = r.kind == expected_tail_kind(r.map.beta(), p);
        let bounded = matches!(r.oracle, OracleVerdict::BoundedShift { .. });
        let oracle_ok = match r.oracle {
            OracleVerdict::Inconclusive => false,
            _ => bounded == r.kind.is_finite(),
        };
        // the oracle is required to concur on the p = 1.5 and p = 2.5 maps
        pass &= classifier_ok && (oracle_ok || p > 3.0);
        parts.push(format!("{} {} oracle {}", r.name, r.kind, r.oracle.name()));
    }
    Outcome::new(pass, parts.join("; "))
}

fn criterion_3(atom: &Run, tail: &Run) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for r in [atom, tail] {
        let exact = r.map.drift().unwrap();
        let est = drift_limit(&r.orbit).unwrap().re.value;
        let err = rel_err(est, exact);
        pass &= err < 0.01;
        parts.push(format!("{}: {est:.6} vs {exact} (rel {err:.1e})", r.name));
    }
    Outcome::new(pass, parts.join("; "))
}

fn criterion_4() -> Outcome {
    let tau = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let mut pass = true;
    let mut parts = Vec::new();
    let maps = [
        ("translation", ParabolicMap::translation(1.0).unwrap()),
        ("atom beta=1", atom_map(1.0, &[(0.0, 1.0)])),
        ("tail p=2.5 beta=0", tail_map(0.0, TailSide::Positive, 2.5)),
    ];
    for (name, f) in maps {
        let s = DiskSetting::new(tau, f).unwrap();
        let c = s.rate_constant().unwrap();
        let est = s.verify_rate(z, HORIZON).unwrap();
        let err = rel_err(est.value, c);
        pass &= err < 0.02;
        parts.push(format!("{name}: {:.6} vs {c} (rel {err:.1e})", est.value));
    }
    let s = DiskSetting::new(tau, ParabolicMap::translation(1.0).unwrap()).unwrap();
    let last = *s.rate_rows(z, 10_000, 10_000).unwrap().last().unwrap();
    let err = rel_err(last.n_times_gap, 2.0);
    pass &= err < 1e-3;
    parts.push(format!("translation closed form at n=1e4: rel {err:.1e}"));
    Outcome::new(pass, parts.join("; "))
}

fn criterion_5(tails: &[Run]) -> Outcome {
    let sampler = AtomMapSampler::default();
    let mut checked = 0;
    let mut failures = Vec::new();
    let atoms = seeds()
        .into_iter()
        .map(|seed| Run::new(format!("seed {seed}"), sampler.for_seed(seed)));
    let mut check = |r: &Run| {
        if !r.kind.is_finite() {
            return;
        }
        checked += 1;
        let (gap, allowed) = r.diagnostics.delta_consistency(5.0);
        if !r.diagnostics.positive_step() || gap > allowed {
            failures.push(format!(
                "{} (step {:?}, gap {gap:.2e} > {allowed:.2e})",
                r.name, r.diagnostics.step_hat
            ));
        }
    };
    for r in atoms {
        check(&r);
    }
    for r in tails {
        check(r);
    }
    let zero = Run::new("atom beta=0", atom_map(0.0, &[(0.0, 1.0)]));
    let d = &zero.diagnostics;
    let zero_ok = d.b_hat.is_zero(10.0) && !d.positive_step();
    Outcome::new(
        failures.is_empty() && zero_ok,
        format!(
            "{checked} finite-shift maps, failures {failures:?}; zero-step map b = {:.1e}, step = {:.1e}",
            d.b_hat.value, d.step_hat.value
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures: Vec<String> = Vec::new();
    let maps = test_maps();
    let points: Vec<HalfPlanePoint> = (0..1000).map(|_| random_point(&mut rng)).collect();

    for (name, f) in &maps {
        for (k, z) in points.iter().enumerate() {
            let w = f.evaluate(*z).unwrap();
            if w.y < z.y {
                failures.push(format!("{name}: Im decreased at {z:?}"));
            }
            let other = points[(k + 1) % points.len()];
            let before = pseudo_hyperbolic_distance(*z, other);
            let after = pseudo_hyperbolic_distance(w, f.evaluate(other).unwrap());
            if after > before + 1e-10 {
                failures.push(format!("{name}: rho expanded at {z:?}"));
            }
        }
        for z in points.iter().step_by(100) {
            let steps = iterate(f, *z, 1000).unwrap().rho_steps();
            if steps.windows(2).any(|w| w[1] > w[0] + 1e-10) {
                failures.push(format!("{name}: rho step increased from {z:?}"));
            }
        }
        for _ in 0..10 {
            let tau = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            let s = DiskSetting::new(tau, f.clone()).unwrap();
            let z = Complex64::from_polar(
                0.95 * rng.gen::<f64>().sqrt(),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let direct = s.iterate_directly(z, 50).unwrap();
            let gaps = s.disk_orbit_gaps(z, 50).unwrap();
            if direct
                .iter()
                .zip(&gaps)
                .any(|(w, g)| rel_err((w - tau).norm(), *g) > 1e-9)
            {
                failures.push(format!("{name}: disk iteration departs from the half-plane gap at {z}"));
            }
        }
    }

    let s = DiskSetting::new(Complex64::new(1.0, 0.0), ParabolicMap::translation(1.0).unwrap()).unwrap();
    for _ in 0..1000 {
        let tau = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let s = DiskSetting::new(tau, s.map().clone()).unwrap();
        let z = Complex64::from_polar(
            0.999 * rng.gen::<f64>().sqrt(),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        if (s.cayley_inv(s.cayley(z).unwrap()) - z).norm() > 1e-12 {
            failures.push(format!("Cayley round trip at {z}"));
        }
    }

    let mut atom_maps: Vec<(f64, Vec<(f64, f64)>)> = vec![
        (1.0, vec![(0.0, 1.0)]),
        (0.0, vec![(0.0, 1.0)]),
        (0.0, vec![(1.0, 1.0), (-1.0, 1.0)]),
    ];
    atom_maps.extend((0..20).map(|_| (rng.gen_range(-3.0..3.0), random_atoms(&mut rng, 5))));
    for (beta, atoms) in &atom_maps {
        let f = atom_map(*beta, atoms);
        for z in &points {
            let w = f.evaluate(*z).unwrap();
            let (re, im) = rational_evaluate(*beta, atoms, *z);
            if (w.x - re).abs() > 1e-13 * re.abs().max(im) || (w.y - im).abs() > 1e-13 * im {
                failures.push(format!("atoms {atoms:?}: rational oracle mismatch at {z:?}"));
            }
        }
    }

    let count = failures.len();
    failures.truncate(5);
    Outcome::new(
        count == 0,
        format!(
            "{} maps x {} points, {count} violations {failures:?}",
            maps.len() + atom_maps.len(),
            points.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let q = Integrator::default();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let mu = random_mixed_measure(&mut rng);
        let v = mu.integrate_kernel(|_| Complex64::new(1.0, 0.0), &q).unwrap();
        worst = worst.max(rel_err(v.re, mu.total_mass()));
    }
    Outcome::new(
        worst <= 1e-10,
        format!("worst relative error {worst:.1e} over 100 measures"),
    )
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |n: u32, title: &str, run: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "criterion {n} [{}] {title}: {} ({:.1?})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed()
        );
    };

    let tails = tail_suite();
    let atom = Run::new("atom beta=1", atom_map(1.0, &[(0.0, 1.0)]));
    let tail = Run::new("tail p=2.5 beta=0", tail_map(0.0, TailSide::Positive, 2.5));

    report(1, "classifier vs orbit oracle on 200 random atom maps", &criterion_1);
    report(2, "divergent-moment branches on power tails", &|| criterion_2(&tails));
    report(3, "drift limit within 1%", &|| criterion_3(&atom, &tail));
    report(4, "disk-side rate within 2%", &criterion_4);
    report(5, "positive step and delta = b * Y on finite-shift maps", &|| {
        criterion_5(&tails)
    });
    report(6, "structural invariants", &criterion_6);
    report(7, "unit kernel integrates to total mass", &criterion_7);

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
