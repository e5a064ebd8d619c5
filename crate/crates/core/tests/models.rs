use membrane_core::geometry::PlaneWaveProfile;
use membrane_core::grid::evolve::{ActiveRegion, Rhs};
use membrane_core::grid::stencil::PointStencil;
use membrane_core::grid::{FieldState, GridSpec};
use membrane_core::models::checks::{background_residual, evolve_scaled, linearization_check};
use membrane_core::models::mms::mms_convergence;
use membrane_core::models::oracle::divergence_residual;
use membrane_core::models::quasilinear::residual;
use membrane_core::models::tt::{coordinate_jet, frame_from_coordinates};
use membrane_core::models::*;
use membrane_core::ModelError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng) -> [f64; 4] {
    // inside the cone with tau in [1, 6]
    let tau: f64 = rng.gen_range(1.0..6.0);
    let yb: [f64; 3] = [0, 1, 2].map(|_| rng.gen_range(-4.0..4.0));
    let y0 = (tau * tau + yb.iter().map(|v| v * v).sum::<f64>()).sqrt();
    [y0, yb[0], yb[1], yb[2]]
}

fn random_jet(rng: &mut ChaCha8Rng, size: f64) -> CoordJet {
    let mut d2 = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let v = size * rng.gen_range(-1.0..1.0);
            d2[i][j] = v;
            d2[j][i] = v;
        }
    }
    CoordJet {
        y: random_point(rng),
        phi: size * rng.gen_range(-1.0..1.0),
        d1: [0, 1, 2, 3].map(|_| size * rng.gen_range(-1.0..1.0)),
        d2,
    }
}

/// Jet of size `size (tau/y0)^2`: the decay of small data makes the relative corrections to
/// `c_TT` uniformly small up to the light cone.
fn weighted_jet(rng: &mut ChaCha8Rng, size: f64) -> CoordJet {
    let j = random_jet(rng, 1.0);
    let y = j.y;
    let w = size * (y[0] * y[0] - y[1] * y[1] - y[2] * y[2] - y[3] * y[3]) / (y[0] * y[0]);
    CoordJet { y, phi: w * j.phi, d1: j.d1.map(|v| w * v), d2: j.d2.map(|r| r.map(|v| w * v)) }
}

fn random_profile(rng: &mut ChaCha8Rng) -> ProfileAt {
    ProfileAt { f2: rng.gen_range(-2.0..2.0), f3: rng.gen_range(-4.0..4.0) }
}

#[test]
fn expanded_equation_matches_divergence_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let th = Thresholds::default();
    for _ in 0..500 {
        let j = random_jet(&mut rng, 0.05);
        let p = random_profile(&mut rng);
        let a = residual(&j, p, &th).unwrap();
        let b = divergence_residual(&j, p);
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn principal_coefficients_match_divergence_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let th = Thresholds::default();
    for _ in 0..100 {
        let j = random_jet(&mut rng, 0.05);
        let p = random_profile(&mut rng);
        let asm = assemble(&j, p, &th).unwrap();
        let base = divergence_residual(&j, p);
        for m in 0..4 {
            for n in m..4 {
                let mut k = j;
                k.d2[m][n] += 1.0;
                if m != n {
                    k.d2[n][m] += 1.0;
                }
                let want = if m == n { asm.a[m][n] } else { 2.0 * asm.a[m][n] };
                let got = divergence_residual(&k, p) - base;
                assert!((got - want).abs() < 1e-10, "({m},{n}): {got} vs {want}");
            }
        }
        // lower-order part: residual with zero second derivatives
        let mut z = j;
        z.d2 = [[0.0; 4]; 4];
        assert!((divergence_residual(&z, p) - (asm.n - asm.source)).abs() < 1e-12);
    }
}

#[test]
fn zero_jet_coefficients() {
    let j = CoordJet { y: [2.0, 0.3, 0.0, 0.1], phi: 0.0, d1: [0.0; 4], d2: [[0.0; 4]; 4] };
    let asm = assemble(&j, ProfileAt { f2: 1.3, f3: 0.2 }, &Thresholds::default()).unwrap();
    assert_eq!(asm.a[0][0], -1.0);
    assert_eq!(asm.n, 0.0);
    assert_eq!(asm.source, 0.0);
    let mut c = j;
    c.phi = 0.2;
    let asm = assemble(&c, ProfileAt { f2: 1.5, f3: 0.0 }, &Thresholds::default()).unwrap();
    assert!((asm.a[0][0] - (-1.0 + 0.3)).abs() < 1e-15);
}

#[test]
fn hyperbolicity_guard() {
    let j = CoordJet { y: [2.0, 0.0, 0.0, 0.0], phi: 0.8, d1: [0.0; 4], d2: [[0.0; 4]; 4] };
    // c = 0.8: A^00 = -0.2
    let e = assemble(&j, ProfileAt { f2: 1.0, f3: 0.0 }, &Thresholds::default());
    assert!(matches!(e, Err(ModelError::HyperbolicityLoss { .. })));
}

#[test]
fn tt_solve_agrees_with_coordinate_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let th = Thresholds::default();
    for _ in 0..500 {
        let mut j = weighted_jet(&mut rng, 0.05);
        let p = random_profile(&mut rng);
        j.d2[0][0] = solve_phi00(&j, p, &th).unwrap();
        let f = frame_from_coordinates(&j);
        let back = coordinate_jet(&f, j.d2[0][0]);
        for m in 0..4 {
            assert!((back.d1[m] - j.d1[m]).abs() < 1e-12);
            for n in 0..4 {
                assert!((back.d2[m][n] - j.d2[m][n]).abs() < 1e-10);
            }
        }
        let s = tt_solve(&f, p, &th).unwrap();
        assert!((s.tt - j.d2[0][0]).abs() < 1e-10, "{} vs {}", s.tt, j.d2[0][0]);
    }
}

#[test]
fn tt_coefficient_is_comparable_to_tau_ratio() {
    let f = FrameJet { y: [2.0, 0.0, 0.0, 0.0], phi: 0.0, t: 0.0, l: [0.0; 3], lt: [0.0; 3], ll: [[0.0; 3]; 3] };
    assert_eq!(tt_solve(&f, ProfileAt { f2: 1.0, f3: 1.0 }, &Thresholds::default()).unwrap().c_tt, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let j = weighted_jet(&mut rng, 0.01);
        let p = random_profile(&mut rng);
        let y = j.y;
        let tau2 = y[0] * y[0] - y[1] * y[1] - y[2] * y[2] - y[3] * y[3];
        let s = tt_solve(&frame_from_coordinates(&j), p, &Thresholds::default()).unwrap();
        worst = worst.max((s.c_tt * y[0] * y[0] / tau2 - 1.0).abs());
    }
    assert!(worst <= 0.1, "{worst}");
}

#[test]
fn tt_solve_flags_degenerate_coefficient() {
    // large c along a direction nearly tangent to the cone
    let f = FrameJet { y: [5.0, 4.9, 0.0, 0.0], phi: 0.45, t: 0.0, l: [0.0; 3], lt: [0.0; 3], ll: [[0.0; 3]; 3] };
    let e = tt_solve(&f, ProfileAt { f2: 1.0, f3: 0.0 }, &Thresholds::default());
    assert!(matches!(e, Err(ModelError::CoefficientDegenerate { .. })), "{e:?}");
}

#[test]
fn background_is_preserved() {
    let grid = GridSpec::new(6.0, 25, 0.1, 0.5).unwrap();
    let profiles = [PlaneWaveProfile::canonical(), PlaneWaveProfile::double_bump(), PlaneWaveProfile::single(1.0, 1.0, 40.0)];
    for kind in [ModelKind::Semilinear, ModelKind::Quasilinear] {
        for p in &profiles {
            let r = background_residual(kind, p, grid).unwrap();
            assert!(r <= 1e-13, "{kind:?}: {r}");
        }
    }
}

fn poly_bump(g: &GridSpec, amp: f64, radius: f64) -> FieldState {
    let phi = (0..g.len())
        .map(|i| {
            let p = g.point(i);
            let s2 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / (radius * radius);
            if s2 < 1.0 {
                amp * (1.0 - s2).powi(8)
            } else {
                0.0
            }
        })
        .collect();
    FieldState { t: 2.0, phi, pi: vec![0.0; g.len()] }
}

#[test]
fn semilinear_with_flat_profile_is_the_wave_equation() {
    let grid = GridSpec::new(5.0, 33, 0.1, 0.5).unwrap();
    let s = poly_bump(&grid, 1.0, 2.5);
    let region = grid.interior(3);
    let mut a = vec![0.0; grid.len()];
    let mut b = vec![0.0; grid.len()];
    Model::new(ModelKind::Semilinear, PlaneWaveProfile::flat()).pi_dot(&grid, 2.0, &s.phi, &s.pi, &region, &mut a).unwrap();
    Model::new(ModelKind::Linear, PlaneWaveProfile::canonical()).pi_dot(&grid, 2.0, &s.phi, &s.pi, &region, &mut b).unwrap();
    assert_eq!(a, b);
}

#[test]
fn null_data_annihilates_the_semilinear_term() {
    // phi depends only on u, and pi is set to the discrete d/dy1 phi, so V phi = 0 on the grid
    let grid = GridSpec::new(5.0, 33, 0.1, 0.5).unwrap();
    let t = 0.5;
    let phi: Vec<f64> = (0..grid.len())
        .map(|i| {
            let p = grid.point(i);
            let u = null_u(t, p[0]);
            let w = 1.0 - (p[1] * p[1] + p[2] * p[2]) / 9.0;
            let b = if (u - 1.0).abs() < 1.5 { (1.0 - ((u - 1.0) / 1.5).powi(2)).powi(6) } else { 0.0 };
            b * w.max(0.0).powi(6)
        })
        .collect();
    let ps = PointStencil::new(&grid);
    let region = grid.interior(3);
    let mut pi = vec![0.0; grid.len()];
    for idx in 0..grid.len() {
        if region.contains(grid.unindex(idx)) {
            pi[idx] = ps.d1(&phi, idx, 0);
        }
    }
    let mut a = vec![0.0; grid.len()];
    let mut b = vec![0.0; grid.len()];
    Model::new(ModelKind::Semilinear, PlaneWaveProfile::single(1.0, 1.0, 5.0)).pi_dot(&grid, t, &phi, &pi, &region, &mut a).unwrap();
    Model::new(ModelKind::Linear, PlaneWaveProfile::flat()).pi_dot(&grid, t, &phi, &pi, &region, &mut b).unwrap();
    assert_eq!(a, b);
}

#[test]
fn manufactured_solution_converges_at_fourth_order() {
    let m = Manufactured { amplitude: 0.1 };
    for kind in [ModelKind::Semilinear, ModelKind::Quasilinear] {
        let model = Model::new(kind, PlaneWaveProfile::canonical());
        let (errs, orders) = mms_convergence(&model, m, 5.0, &[41, 61, 81], 0.5).unwrap();
        eprintln!("{kind:?}: errors {errs:?} orders {orders:?}");
        assert!(orders.iter().all(|&o| o >= 3.5), "{kind:?}: {orders:?}");
    }
}

#[test]
fn linearization_is_the_wave_equation() {
    let grid = GridSpec::new(6.0, 49, 0.1, 0.5).unwrap();
    let data = poly_bump(&grid, 1.0, 2.0);
    let active = ActiveRegion::Full;
    let flat = Model::new(ModelKind::Semilinear, PlaneWaveProfile::flat());
    let r = linearization_check(&flat, grid, active, &data, 1e-3, 3.5).unwrap();
    assert!(r.relative() < 1e-12, "{}", r.relative());
    for kind in [ModelKind::Semilinear, ModelKind::Quasilinear] {
        let model = Model::new(kind, PlaneWaveProfile::single(1.0, 1.0, 4.0));
        let a = linearization_check(&model, grid, active, &data, 1e-2, 3.5).unwrap();
        let b = linearization_check(&model, grid, active, &data, 5e-3, 3.5).unwrap();
        let ratio = a.scaled_difference / b.scaled_difference;
        eprintln!("{kind:?}: {} {} ratio {ratio}", a.relative(), b.relative());
        assert!(a.relative() > 1e-8 && a.relative() < 0.1);
        assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
    }
}

#[test]
fn quasilinear_and_semilinear_differ_at_second_order() {
    let grid = GridSpec::new(6.0, 49, 0.1, 0.5).unwrap();
    let data = poly_bump(&grid, 1.0, 2.0);
    let profile = PlaneWaveProfile::single(1.0, 1.0, 4.0);
    let sl = Model::new(ModelKind::Semilinear, profile.clone());
    let ql = Model::new(ModelKind::Quasilinear, profile);
    let diff = |eps: f64| {
        let a = evolve_scaled(&sl, grid, ActiveRegion::Full, &data, eps, 4.0).unwrap();
        let b = evolve_scaled(&ql, grid, ActiveRegion::Full, &data, eps, 4.0).unwrap();
        a.phi.iter().zip(&b.phi).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / eps
    };
    let (d1, d2) = (diff(1e-2), diff(5e-3));
    eprintln!("paired differences {d1} {d2}");
    assert!(d1 > 0.0);
    assert!((d1 / d2 - 2.0).abs() < 0.2, "{}", d1 / d2);
}
