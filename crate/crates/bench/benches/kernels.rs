use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use membrane_core::diagnostics::{inject, word_energies, SupportCone};
use membrane_core::geometry::PlaneWaveProfile;
use membrane_core::grid::stencil::PointStencil;
use membrane_core::grid::{ActiveRegion, FieldState, GridSpec, Rhs, Stepper};
use membrane_core::models::{Model, ModelKind};
use membrane_core::weight_algebra::{verify_algebra, BracketTable};

fn bump_state(grid: &GridSpec) -> FieldState {
    let mut s = FieldState::zeros(grid.len(), 2.0);
    for idx in 0..grid.len() {
        let r2: f64 = grid.point(idx).iter().map(|x| x * x).sum();
        s.phi[idx] = 1e-3 * (1.0 - r2).max(0.0).powi(4);
    }
    s
}

fn stencil(c: &mut Criterion) {
    let grid = GridSpec::new(3.0, 41, 0.0, 0.5).unwrap();
    let s = bump_state(&grid);
    let ps = PointStencil::new(&grid);
    let region = grid.interior(2);
    c.bench_function("laplacian_41", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in region.lo[0]..region.hi[0] {
                for j in region.lo[1]..region.hi[1] {
                    for k in region.lo[2]..region.hi[2] {
                        acc += ps.laplacian(&s.phi, grid.index(i, j, k));
                    }
                }
            }
            black_box(acc)
        })
    });
}

fn model_rhs(c: &mut Criterion) {
    let grid = GridSpec::new(3.0, 41, 0.01, 0.5).unwrap();
    let s = bump_state(&grid);
    let region = grid.interior(2);
    let mut out = vec![0.0; grid.len()];
    for kind in [ModelKind::Linear, ModelKind::Semilinear, ModelKind::Quasilinear] {
        let model = Model::new(kind, PlaneWaveProfile::canonical());
        c.bench_function(&format!("pi_dot_{kind:?}_41"), |b| {
            b.iter(|| model.pi_dot(&grid, s.t, &s.phi, &s.pi, &region, &mut out).unwrap())
        });
    }
    let model = Model::new(ModelKind::Semilinear, PlaneWaveProfile::canonical());
    let active = ActiveRegion::Cone { center: [0.0; 3], radius: 1.0, t0: 2.0, pad: 11.0 * grid.h() };
    c.bench_function("rk4_step_semilinear_41", |b| {
        b.iter_batched(
            || (Stepper::new(grid, active), s.clone()),
            |(mut st, mut state)| st.step(&model, &mut state, grid.dt(1.0)).unwrap(),
            criterion::BatchSize::SmallInput,
        )
    });
}

fn hierarchy(c: &mut Criterion) {
    let grid = GridSpec::new(6.0, 49, 0.0, 0.5).unwrap();
    let tau = 3.0;
    let region = SupportCone::unit().sigma_region(&grid, tau, 3);
    let sample = inject(&grid, region, tau, |y| {
        let r2 = y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
        let f = (-r2 / 4.0).exp() / y[0];
        (f, -f / y[0])
    });
    c.bench_function("word_energies_k3", |b| b.iter(|| word_energies(black_box(&sample), None, 3).unwrap()));
}

fn algebra(c: &mut Criterion) {
    let table = BracketTable::standard(3);
    c.bench_function("verify_algebra_d3", |b| b.iter(|| verify_algebra(3, black_box(&table))));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = stencil, model_rhs, hierarchy, algebra
}
criterion_main!(benches);
