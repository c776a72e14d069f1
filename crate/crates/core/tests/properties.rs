use chronolens_core::exact::{leibniz_oracle, tri2_rhs, ExactPoly};
use chronolens_core::gallery::{TychonovParams, TychonovSeries};
use chronolens_core::kernel::{kernel_time_derivative_at, laplacian_of_time_derivative_at};
use chronolens_core::nonlinear::step_solver;
use chronolens_core::spectral::{Field, Grid, OperatorSpec};
use chronolens_core::taylor::{backward_gate, propagate};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn falling(n: u32, m: u32) -> BigInt {
    (0..m).map(|i| BigInt::from(n - i)).product()
}

fn binomial(n: u32, m: u32) -> BigInt {
    falling(n, m) / falling(m, m)
}

fn poly() -> impl Strategy<Value = ExactPoly> {
    prop::collection::vec(-5i64..=5, 1..=4).prop_map(|c| ExactPoly::from_ints(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_factor_sum_matches_leibniz_on_the_weight(f in poly(), g in poly(), n in 0u32..=6) {
        // ∂^n(t^n P) = Σ_j C(n,j) n!/(n-j)! t^{n-j} P^{(n-j)}
        let p = &f * &g;
        let mut direct = ExactPoly::zero();
        for j in 0..=n {
            let c = binomial(n, j) * falling(n, j);
            let term = &ExactPoly::monomial(BigRational::from_integer(c), n - j) * &p.nth_derivative(n - j);
            direct = &direct + &term;
        }
        prop_assert_eq!(&tri2_rhs(n, &[f.clone(), g.clone()]).unwrap(), &direct);
        prop_assert_eq!(&leibniz_oracle(n, &[f, g]).unwrap(), &direct);
    }

    #[test]
    fn heat_forward_then_backward_is_identity(b1 in -1.0f64..1.0, b3 in -1.0f64..1.0, s in 0.05f64..0.2) {
        let g = Grid::standard();
        let a0 = Field::from_fn(&g, |x| b1 * x.sin() + b3 * (3.0 * x).cos());
        let op = OperatorSpec::Laplacian;
        let fwd = propagate(&op, &a0, 0.0, s, 30, 1e-13).unwrap().field.unwrap();
        let back = propagate(&op, &fwd, s, 0.0, 30, 1e-13).unwrap().field.unwrap();
        prop_assert!(back.max_abs_diff(&a0).unwrap() < 1e-10);
    }

    #[test]
    fn gate_verdict_ignores_amplitude(scale in -3.0f64..3.0, horizon in 0.1f64..1.5) {
        let g = Grid::standard();
        let a = Field::from_fn(&g, |x| x.sin() + 0.25 * (2.0 * x).sin());
        let op = OperatorSpec::Laplacian;
        let (base, _) = backward_gate(&op, &a, horizon, 30, None).unwrap();
        let (scaled, _) = backward_gate(&op, &a.scale(10f64.powf(scale)), horizon, 30, None).unwrap();
        prop_assert_eq!(base.solvable, scaled.solvable);
        prop_assert!(
            base.certified_radius == scaled.certified_radius
                || (base.certified_radius - scaled.certified_radius).abs() <= 1e-9 * base.certified_radius
        );
    }

    #[test]
    fn kernel_solves_the_heat_equation(
        d in 1usize..=3,
        x in prop::array::uniform3(-2.0f64..2.0),
        t in 0.05f64..1.0,
        k in 0usize..=5,
    ) {
        let off = &x[..d];
        let lhs = kernel_time_derivative_at(off, t, k + 1).unwrap();
        let rhs = laplacian_of_time_derivative_at(off, t, k).unwrap();
        let scale = kernel_time_derivative_at(&vec![0.0; d], t, 0).unwrap() * t.powi(-(k as i32 + 1));
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale.max(lhs.abs()));
    }

    #[test]
    fn kernel_is_radial(x in prop::array::uniform3(-2.0f64..2.0), t in 0.05f64..1.0, k in 0usize..=4) {
        let a = kernel_time_derivative_at(&x, t, k).unwrap();
        let b = kernel_time_derivative_at(&[x[2], -x[0], x[1]], t, k).unwrap();
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let c = kernel_time_derivative_at(&[r, 0.0, 0.0], t, k).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
        prop_assert!((a - c).abs() <= 1e-10 * a.abs().max(1e-12));
    }

    #[test]
    fn riccati_from_any_small_constant(c in 0.01f64..0.3) {
        let g = Grid::new(32, std::f64::consts::TAU).unwrap();
        let run = step_solver(2, &Field::from_fn(&g, |_| c), 1e-2, 0.5, 50).unwrap();
        let exact = c / (1.0 - 0.5 * c);
        for v in run.final_field().values() {
            prop_assert!((v - exact).abs() < 1e-10 * exact);
        }
    }

    #[test]
    fn tychonov_axis_is_g(t in 0.4f64..1.0) {
        let s = TychonovSeries::new(TychonovParams::default()).unwrap();
        let v = s.eval(0.0, t).unwrap();
        prop_assert!((v.u - (-t.powi(-2)).exp()).abs() < 1e-15);
        prop_assert!(s.eval(0.3, -t).unwrap().u == 0.0);
    }
}
