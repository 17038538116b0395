//! Benchmarks of the lattice side: Faddeev-Popov assembly, the orbit
//! solve behind the functional connection, and its projections.

use criterion::{criterion_group, criterion_main, Criterion};
use fsforms::lattice::experiments::{run_experiment, ExperimentParams};
use fsforms::lattice::{
    fp_symmetric, rough_field, seeded, Boundary, Connection, Group, Lattice, SmoothProfile,
};
use std::hint::black_box;

fn pointed(group: Group, sites: usize) -> Lattice {
    let mut lat = Lattice::new(group, sites);
    lat.boundary = Boundary::Fixed;
    lat
}

fn fp_assembly(c: &mut Criterion) {
    let lat = pointed(Group::Su2, 128);
    let mut rng = seeded(42);
    let a = SmoothProfile::random(&mut rng, 3).sample(&lat);
    c.bench_function("assemble FP operator (su2, N=128)", |b| {
        b.iter(|| fp_symmetric(black_box(&lat), black_box(&a)))
    });
}

fn connection_solve(c: &mut Criterion) {
    let lat = pointed(Group::Su2, 128);
    let mut rng = seeded(42);
    let a = SmoothProfile::random(&mut rng, 3).sample(&lat);
    c.bench_function("connection solve (su2, N=128)", |b| {
        b.iter(|| Connection::new(black_box(&lat), black_box(&a)).unwrap())
    });
}

fn projection_apply(c: &mut Criterion) {
    let lat = pointed(Group::Su2, 128);
    let mut rng = seeded(42);
    let a = SmoothProfile::random(&mut rng, 3).sample(&lat);
    let conn = Connection::new(&lat, &a).unwrap();
    let v = rough_field(&lat, &mut rng);
    c.bench_function("horizontal projection (su2, N=128)", |b| {
        b.iter(|| conn.horizontal(black_box(&v)))
    });
}

fn projectors_experiment(c: &mut Criterion) {
    let params = ExperimentParams {
        sites: Some(64),
        ..ExperimentParams::default()
    };
    c.bench_function("projectors experiment (N=64)", |b| {
        b.iter(|| run_experiment("projectors", black_box(&params)).unwrap())
    });
}

criterion_group!(
    benches,
    fp_assembly,
    connection_solve,
    projection_apply,
    projectors_experiment
);
criterion_main!(benches);
