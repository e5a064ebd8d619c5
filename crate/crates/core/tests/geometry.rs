use membrane_core::geometry::metric::{det4, invert4, mat_mul, ETA};
use membrane_core::geometry::*;
use proptest::prelude::*;

fn max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
    (0..4).flat_map(|i| (0..4).map(move |j| (a[i][j] - b[i][j]).abs())).fold(0.0, f64::max)
}

fn jet() -> impl Strategy<Value = (f64, [f64; 4])> {
    (-0.3f64..0.3, prop::array::uniform4(-0.5f64..0.5))
        .prop_filter("admissible", |(c, d)| metric_from_c(*c, d).is_ok())
}

fn cone_point() -> impl Strategy<Value = [f64; 4]> {
    (0.5f64..10.0, prop::array::uniform3(-10.0f64..10.0))
        .prop_map(|(tau, yb)| [(tau * tau + yb.iter().map(|v| v * v).sum::<f64>()).sqrt(), yb[0], yb[1], yb[2]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn rank_one_inverse_matches_direct_inversion((c, d) in jet()) {
        let m = metric_from_c(c, &d).unwrap();
        let direct = invert4(&m.g).unwrap();
        prop_assert!(max_abs_diff(&m.g_inv, &direct) <= 1e-12);
        prop_assert!(max_abs_diff(&m.gt_inv, &invert4(&m.gt).unwrap()) <= 1e-12);
        let id = mat_mul(&m.g, &m.g_inv);
        let eye: Mat4 = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }));
        prop_assert!(max_abs_diff(&id, &eye) <= 1e-12);
    }

    #[test]
    fn determinant_ratio((c, d) in jet()) {
        let m = metric_from_c(c, &d).unwrap();
        prop_assert!((det4(&m.g) / det4(&ETA) - m.det).abs() <= 1e-12);
        prop_assert!((det4(&m.gt) / det4(&ETA) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn null_chart_round_trip(y in prop::array::uniform4(-20.0f64..20.0)) {
        let back = from_null(to_null(y));
        for i in 0..4 {
            prop_assert!((back[i] - y[i]).abs() <= 1e-12 * (1.0 + y[i].abs()));
        }
    }

    #[test]
    fn original_chart_round_trip(t in -5.0f64..5.0, x1 in -5.0f64..5.0, xh in prop::array::uniform2(-3.0f64..3.0)) {
        for p in [PlaneWaveProfile::canonical(), PlaneWaveProfile::double_bump()] {
            let n = null_from_txt(t, x1, xh, &p).unwrap();
            let (t2, x2) = reconstruct_txt(n, &p).unwrap();
            prop_assert!((t2 - t).abs() <= 1e-12 && (x2 - x1).abs() <= 1e-12);
        }
    }

    #[test]
    fn foliation_reconstructs_the_point(y in cone_point()) {
        let f = foliation_at(y).unwrap();
        let r = (y[1] * y[1] + y[2] * y[2] + y[3] * y[3]).sqrt();
        prop_assert!((f.tau * f.cosh_rho - y[0]).abs() <= 1e-12 * y[0]);
        prop_assert!((f.tau * f.rho.sinh() - r).abs() <= 1e-11 * (1.0 + r));
        let n = to_null(y);
        let tau2 = 2.0 * n.u * n.ubar - n.xhat[0].powi(2) - n.xhat[1].powi(2);
        prop_assert!((tau2 - f.tau * f.tau).abs() <= 1e-11 * y[0] * y[0]);
    }
}
