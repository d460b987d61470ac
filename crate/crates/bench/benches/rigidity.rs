use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rigidkit_core::corpus::CORPUS;
use rigidkit_core::{
    auto_pin, energy_along_trajectory, fourth_derivative_test, min_energy_on_sphere, rigidity_order,
    AnalyticTarget, EnergyFamily, EnergySpec, Jet, PinnedFramework, Polynomial, DEFAULT_LADDER_TOL,
    DEFAULT_MAX_K, DEFAULT_RANK_TOL,
};

fn pinned(name: &str) -> PinnedFramework {
    let entry = CORPUS.iter().find(|e| e.name == name).unwrap();
    auto_pin(&entry.framework().unwrap(), DEFAULT_RANK_TOL).unwrap().pinned
}

fn ladder(c: &mut Criterion) {
    let mut group = c.benchmark_group("ladder");
    for e in CORPUS.iter() {
        let pf = pinned(e.name);
        group.bench_function(e.name, |b| {
            b.iter(|| rigidity_order(black_box(&pf), DEFAULT_MAX_K, DEFAULT_LADDER_TOL).unwrap())
        });
    }
    group.finish();
}

fn jets(c: &mut Criterion) {
    let x = Jet::from_coeffs(&[1.0, 0.5, -0.25, 0.125], 32);
    c.bench_function("jet/mul_32", |b| b.iter(|| black_box(&x) * black_box(&x)));
    c.bench_function("jet/powf_32", |b| b.iter(|| black_box(&x).powf(-6.0)));
    c.bench_function("jet/exp_32", |b| b.iter(|| black_box(&x).exp()));

    let pf = pinned("leonardo3");
    let witness = rigidity_order(&pf, DEFAULT_MAX_K, DEFAULT_LADDER_TOL).unwrap().witness.unwrap();
    for family in [EnergyFamily::Harmonic, EnergyFamily::LennardJones] {
        let spec = EnergySpec::new(family, pf.framework());
        c.bench_function(&format!("jet/leonardo3_{family:?}"), |b| {
            b.iter(|| energy_along_trajectory(&spec, &pf, black_box(&witness), 16).unwrap())
        });
    }
}

fn critical(c: &mut Criterion) {
    let poly = Polynomial::from_json_str(r#"[{"exps":[2,0],"coef":1},{"exps":[1,2],"coef":-2},{"exps":[0,4],"coef":2}]"#)
        .unwrap();
    let target = AnalyticTarget::Polynomial(poly);
    let mut group = c.benchmark_group("fourth_derivative");
    group.sample_size(10);
    group.bench_function("quartic", |b| b.iter(|| fourth_derivative_test(black_box(&target), 1e-8, 64).unwrap()));
    group.finish();
}

fn growth(c: &mut Criterion) {
    let pf = pinned("k33");
    let spec = EnergySpec::new(EnergyFamily::Harmonic, pf.framework());
    let mut group = c.benchmark_group("min_energy_on_sphere");
    group.sample_size(10);
    for r in [1e-1, 1e-2] {
        group.bench_function(format!("k33_r{r:e}"), |b| {
            b.iter(|| min_energy_on_sphere(&spec, &pf, black_box(r), 32, 0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, ladder, jets, critical, growth);
criterion_main!(benches);
