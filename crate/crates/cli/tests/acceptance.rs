//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use chronolens_core::exact::{
    kovalevskaya_coeff, kovalevskaya_coeff_recursive, kovalevskaya_ratio, leibniz_oracle, power_specialization_check,
    tri2_rhs, tri_sum, ExactPoly,
};
use chronolens_core::gallery::{
    analyticity_probe, hermite_eigen_residual, tychonov_decay, tychonov_derivative_bound, InverseSquareSpec,
    TychonovParams, TychonovSeries, HERMITE_TRUNCATION,
};
use chronolens_core::kernel::{
    certify, contour_time_derivative, kernel_time_derivative, richardson_time_derivative, scan_minimal_constants,
    KernelPoint, ScanSpec,
};
use chronolens_core::nonlinear::{convergence_order, dz_fit, step_solver, taylor_predict, time_jet, DEFAULT_DT};
use chronolens_core::numerics::linspace;
use chronolens_core::spectral::{Field, Grid, HermiteBasis, OperatorSpec};
use chronolens_core::taylor::{backward_gate, propagate};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self { failures: Vec::new(), notes: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn within(&mut self, start: Instant, limit: Duration) {
        let t = start.elapsed();
        self.note(format!("{:.2}s", t.as_secs_f64()));
        self.expect(t < limit, format!("runtime {:.1}s over {}s", t.as_secs_f64(), limit.as_secs()));
    }
}

fn random_poly(rng: &mut ChaCha8Rng) -> ExactPoly {
    let deg = rng.random_range(0..=3u32);
    let c: Vec<i64> = (0..=deg).map(|_| rng.random_range(-4..=4i64)).collect();
    ExactPoly::from_ints(&c)
}

fn identity_suite(c: &mut Check) {
    let start = Instant::now();
    let mut mismatches = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(0..=6u32);
        let k = rng.random_range(1..=4usize);
        let factors: Vec<ExactPoly> = (0..k).map(|_| random_poly(&mut rng)).collect();
        if tri2_rhs(n, &factors).unwrap() != leibniz_oracle(n, &factors).unwrap() {
            mismatches += 1;
        }
    }
    c.expect(mismatches == 0, format!("{mismatches} of 200 cases disagree with the Leibniz oracle"));
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for n in 0..=6u32 {
        for k in 1..=4u32 {
            let h = random_poly(&mut rng);
            c.expect(power_specialization_check(n, k, &h), format!("power specialization n={n} k={k}"));
        }
    }
    c.within(start, Duration::from_secs(10));
}

fn tri_boundedness(c: &mut Check) {
    let start = Instant::now();
    let (mut small, mut large) = (0.0f64, 0.0f64);
    for k in [2u32, 3, 4] {
        for n in 2..=30u32 {
            let r = tri_sum(n, k).unwrap().bound_ratio;
            c.expect(r.is_finite(), format!("ratio n={n} k={k} not finite"));
            if n <= 10 {
                small = small.max(r);
            } else {
                large = large.max(r);
            }
        }
    }
    c.note(format!("max n<=10 {small:.4}, max n>10 {large:.4}"));
    c.expect(large <= 10.0 * small, "tail exceeds 10x the reference maximum");
    c.within(start, Duration::from_secs(30));
}

fn kovalevskaya(c: &mut Check) {
    for m in 0..=6u64 {
        for l in 0..=12u64 {
            c.expect(
                kovalevskaya_coeff(m, l) == kovalevskaya_coeff_recursive(m, l),
                format!("formula and recursion differ at ({m},{l})"),
            );
        }
    }
    let int = |v: u64| BigRational::from_integer(BigInt::from(v));
    c.expect(kovalevskaya_ratio(1) == int(1680), "ratio(1) != 1680");
    c.expect(kovalevskaya_ratio(2) == int(259_459_200), "ratio(2) != 259459200");
    let r: Vec<_> = (0..=8).map(kovalevskaya_ratio).collect();
    c.expect(r.windows(2).all(|w| w[1] > w[0]), "ratio not strictly increasing for n <= 8");
}

fn taylor_round_trip(c: &mut Check) {
    let g = Grid::standard();
    let a0 = Field::from_fn(&g, |x| x.sin() + 0.5 * (3.0 * x).sin());
    let cases: [(&str, OperatorSpec, f64, f64); 2] =
        [("heat", OperatorSpec::Laplacian, -1.0, -9.0), ("biharmonic", OperatorSpec::NegBiharmonic, -1.0, -81.0)];
    for (name, op, l1, l3) in cases {
        for s in [0.1, -0.1, 0.2, -0.2] {
            let exact = Field::from_fn(&g, |x| (l1 * s).exp() * x.sin() + 0.5 * (l3 * s).exp() * (3.0 * x).sin());
            let got = propagate(&op, &a0, 0.0, s, 30, 1e-12).unwrap().field.unwrap();
            let err = got.max_abs_diff(&exact).unwrap();
            if err >= 1e-10 {
                c.note(format!(
                    "{name} s={s}: error {err:.2e}, relative {:.1e}, |u| = {:.2e}",
                    err / exact.sup_norm(),
                    exact.sup_norm()
                ));
            }
            c.expect(err < 1e-10, format!("{name} s={s}"));
        }
    }
}

fn backward_gate_check(c: &mut Check) {
    let g = Grid::standard();
    let sin = Field::from_fn(&g, f64::sin);
    let e_sin = sin.scale(1f64.exp());
    let (v, _) = backward_gate(&OperatorSpec::Laplacian, &sin, 1.0, 30, Some(&e_sin)).unwrap();
    c.expect(v.solvable, "sin x, horizon 1 not solvable");
    let err = v.reconstruction_error.unwrap_or(f64::INFINITY);
    c.note(format!("reconstruction {err:.2e}"));
    c.expect(err < 1e-8, "reconstruction error");

    let rough = Field::from_fn(&g, |x| (1..=32).map(|m| (m as f64 * x).sin() / (m * m) as f64).sum());
    let (r, _) = backward_gate(&OperatorSpec::Laplacian, &rough, 0.5, 30, None).unwrap();
    c.note(format!("32-mode radius {:.4}", r.certified_radius));
    c.expect(!r.solvable && r.certified_radius < 0.5, "32-mode datum certified");

    for (datum, horizon) in [(&sin, 1.0), (&rough, 0.5)] {
        let (b, _) = backward_gate(&OperatorSpec::Laplacian, datum, horizon, 30, None).unwrap();
        for scale in [1e-2, 1e2] {
            let (s, _) = backward_gate(&OperatorSpec::Laplacian, &datum.scale(scale), horizon, 30, None).unwrap();
            c.expect(s.solvable == b.solvable, format!("verdict changes under scale {scale}"));
        }
    }
}

fn kernel_bounds(c: &mut Check) {
    let start = Instant::now();
    let rep = scan_minimal_constants(1, 16, 0.125, &ScanSpec::default()).unwrap();
    let cert = certify(&rep);
    c.note(format!("C1 = {:.4}", cert.c1));
    c.expect(cert.passed, "certify() false");
    c.expect((rep.sup_ratio[0] - PI.powf(-0.5)).abs() < 1e-3, "sup_ratio(0)");
    // max over y of |y² - 1/2| e^{-y²/2} / √π
    let y = linspace(0.0, 12.0, 1_200_001);
    let s1 = y.iter().map(|y| (y * y - 0.5).abs() * (-y * y / 2.0).exp()).fold(0.0, f64::max) / PI.sqrt();
    c.expect((rep.sup_ratio[1] - s1).abs() < 1e-3, format!("sup_ratio(1) {} vs {s1}", rep.sup_ratio[1]));

    let mut worst = 0.0f64;
    for (r, t) in [(0.3, 0.5), (1.1, 1.0), (2.4, 0.5), (0.0, 0.25)] {
        for k in 0..=6 {
            let exact = kernel_time_derivative(KernelPoint::new(1, r, t).unwrap(), k).unwrap();
            let oracle = contour_time_derivative(&[r], t, k, 96).unwrap();
            worst = worst.max((oracle - exact).abs() / exact.abs());
        }
    }
    let exact = kernel_time_derivative(KernelPoint::new(1, 1.0, 0.25).unwrap(), 2).unwrap();
    let rich = richardson_time_derivative(&[1.0], 0.25, 2, 1e-2).unwrap();
    worst = worst.max((rich - exact).abs() / exact.abs());
    c.note(format!("oracle relative error {worst:.1e}"));
    c.expect(worst < 1e-8, "derivative oracle mismatch");
    c.within(start, Duration::from_secs(60));
}

fn gallery(c: &mut Check) {
    let basis = HermiteBasis::new(HERMITE_TRUNCATION);
    for n in 0..=4 {
        for k in 0..=5 {
            let r = hermite_eigen_residual(n, k, &basis).unwrap();
            c.expect(r.collocation < 1e-6 && r.diagonal < 1e-6, format!("hermite n={n} k={k}"));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..100 {
        let a = rng.random_range(0.0..=10.0);
        let d = rng.random_range(3..=10u32);
        let s = InverseSquareSpec::new(a, d).unwrap();
        let al = s.alpha_of_a;
        c.expect((al * (al - 1.0) + (d as f64 - 1.0) * al - a).abs() < 1e-12, format!("inverse-square A={a} d={d}"));
    }

    let series = TychonovSeries::new(TychonovParams::default()).unwrap();
    let mut worst = 0.0f64;
    for t in linspace(0.4, 1.0, 13) {
        for x in linspace(-1.0, 1.0, 17) {
            worst = worst.max(series.eval(x, t).unwrap().residual);
        }
    }
    c.expect(worst < 1e-8, format!("Tychonov residual {worst:.1e}"));
    c.expect((series.eval(0.0, 1.0).unwrap().u - (-1f64).exp()).abs() < 1e-10, "u(0,1) != 1/e");
    let decay = tychonov_decay(2, 1.0, 6, 21).unwrap();
    c.expect(decay.windows(2).all(|w| w[1].1 < w[0].1), "Tychonov decay not monotone");
    c.expect(decay[6].1.exp() < 1e-6, "Tychonov sup at m=6 not below 1e-6");
    let bound = tychonov_derivative_bound(2, 10, 400);
    c.note(format!("Tychonov C = {:.3}", bound.constant));
    c.expect(bound.constant <= 50.0, "Tychonov derivative constant over 50");

    let half = analyticity_probe(1, 2, 1e-2).unwrap();
    let two_thirds = analyticity_probe(2, 3, 1e-2).unwrap();
    c.expect(half.first_mismatch == Some(2), "p=1/2 mismatch order");
    c.expect(two_thirds.first_mismatch == Some(3), "p=2/3 mismatch order");
}

fn nonlinear(c: &mut Check) {
    let start = Instant::now();
    let g = Grid::standard();
    let k = 0.1;
    let run = step_solver(2, &Field::from_fn(&g, |_| k), DEFAULT_DT, 1.0, 250).unwrap();
    let solver = run.final_field().values().iter().fold(0.0f64, |m, v| m.max((v - k / (1.0 - k)).abs()));
    c.expect(solver < 1e-8, format!("Riccati solver {solver:.1e}"));
    let jet = time_jet(&run, 0.0, 12).unwrap();
    let taylor = taylor_predict(&jet, 0.5).values().iter().fold(0.0f64, |m, v| m.max((v - k / (1.0 - 0.5 * k)).abs()));
    c.expect(taylor < 1e-10, format!("Riccati Taylor {taylor:.1e}"));

    let u0 = Field::from_fn(&g, |x| 0.1 * x.sin());
    for p in [2, 3] {
        let run = step_solver(p, &u0, DEFAULT_DT, 0.35, 1).unwrap();
        let jet = time_jet(&run, 0.3, 12).unwrap();
        let err = taylor_predict(&jet, 0.35).max_abs_diff(&run.snapshot_at(0.35).unwrap().field).unwrap();
        c.expect(err < 1e-7, format!("cross-validation p={p}: {err:.1e}"));
    }

    let mut fitted = Vec::new();
    for n in [256, 512] {
        let g = Grid::new(n, std::f64::consts::TAU).unwrap();
        let run = step_solver(3, &Field::from_fn(&g, |x| 0.1 * x.sin()), DEFAULT_DT, 1.0, 50).unwrap();
        let jets: Vec<_> = [0.25, 0.5, 1.0].iter().map(|&t| time_jet(&run, t, 10).unwrap()).collect();
        fitted.push(dz_fit(&jets).unwrap().fitted_n);
    }
    let ratio = fitted[1] / fitted[0];
    c.note(format!("N {:.4} -> {:.4}", fitted[0], fitted[1]));
    c.expect(fitted.iter().all(|f| f.is_finite()) && ratio < 2.0 && ratio > 0.5, "dz_fit refinement");

    for p in [2, 3] {
        let order = convergence_order(p, &u0, 1.0, 0.1).unwrap().order;
        c.note(format!("order p={p} {order:.2}"));
        c.expect(order >= 3.8, format!("convergence order p={p}"));
    }
    c.within(start, Duration::from_secs(120));
}

fn json_files(dir: &Path, out: &mut Vec<std::path::PathBuf>) {
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            json_files(&p, out);
        } else if p.extension().is_some_and(|x| x == "json") {
            out.push(p);
        }
    }
}

fn determinism(c: &mut Check, suite_start: Instant) {
    let tmp = tempfile::tempdir().unwrap();
    let mut codes = Vec::new();
    for name in ["first", "second"] {
        let status = Command::new(env!("CARGO_BIN_EXE_chronolens"))
            .args(["--seed", "42", "--out"])
            .arg(tmp.path().join(name))
            .arg("all")
            .output()
            .unwrap()
            .status;
        codes.push(status.code());
    }
    c.expect(codes[0] == codes[1], "exit codes differ");
    let mut files = Vec::new();
    json_files(&tmp.path().join("first"), &mut files);
    files.sort();
    c.expect(files.len() >= 10, format!("only {} JSON reports", files.len()));
    for f in &files {
        let rel = f.strip_prefix(tmp.path().join("first")).unwrap();
        let b = std::fs::read(tmp.path().join("second").join(rel)).unwrap_or_default();
        c.expect(std::fs::read(f).unwrap() == b, format!("{} differs", rel.display()));
    }
    c.note(format!("{} JSON files compared", files.len()));
    c.within(suite_start, Duration::from_secs(300));
}

type Criterion = (&'static str, fn(&mut Check));

fn main() -> ExitCode {
    let suite_start = Instant::now();
    let criteria: [Criterion; 8] = [
        ("identity suite", identity_suite),
        ("weighted multinomial sum bound", tri_boundedness),
        ("Kovalevskaya coefficients", kovalevskaya),
        ("Taylor round-trip", taylor_round_trip),
        ("backward gate", backward_gate_check),
        ("kernel-bound certification", kernel_bounds),
        ("gallery", gallery),
        ("nonlinear", nonlinear),
    ];
    let mut failed = 0;
    let mut report = |i: usize, name: &str, c: Check| {
        let word = if c.failures.is_empty() { "PASS" } else { "FAIL" };
        let mut detail = c.notes.join("; ");
        if !c.failures.is_empty() {
            failed += 1;
            detail = format!("{detail}; failed: {}", c.failures.join(", "));
        }
        let detail = detail.trim_start_matches("; ");
        if detail.is_empty() {
            println!("criterion {i} {word} {name}");
        } else {
            println!("criterion {i} {word} {name}: {detail}");
        }
    };
    for (i, (name, f)) in criteria.iter().enumerate() {
        let mut c = Check::new();
        f(&mut c);
        report(i + 1, name, c);
    }
    let mut c = Check::new();
    determinism(&mut c, suite_start);
    report(9, "determinism", c);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of 9 criteria failed");
        ExitCode::FAILURE
    }
}
