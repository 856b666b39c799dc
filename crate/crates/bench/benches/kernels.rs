use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qneb_bench::{ed_run, layered_circuit, saddle_operator};
use qneb_core::driver::Driver;
use qneb_core::groundstate::{rotoselect_sweep, solve_ed_compiled, VqeState};
use qneb_core::hamiltonian::{Geometry, HamiltonianBuilder, OrbitalBasis};
use qneb_core::simulator::StateVector;

fn simulator(c: &mut Criterion) {
    for n in [6, 14] {
        let circ = layered_circuit(n, 4);
        c.bench_function(&format!("circuit_{n}q_4layers"), |b| {
            b.iter(|| {
                let mut s = StateVector::zero(n).unwrap();
                s.run(black_box(&circ)).unwrap();
                s
            })
        });
    }
}

fn hamiltonian(c: &mut Criterion) {
    let builder = HamiltonianBuilder::new(OrbitalBasis::Lowdin);
    let g = Geometry::h3(0.94, 0.94).unwrap();
    c.bench_function("h3_build", |b| b.iter(|| builder.build(black_box(&g)).unwrap()));
    let op = saddle_operator(OrbitalBasis::Lowdin);
    c.bench_function("h3_ed", |b| b.iter(|| solve_ed_compiled(black_box(&op), None).unwrap()));
}

fn vqe(c: &mut Criterion) {
    let op = saddle_operator(OrbitalBasis::CoreHamiltonian);
    c.bench_function("rotoselect_sweep_d5", |b| {
        b.iter_batched(
            || VqeState::initial(6, 5, 0),
            |mut s| rotoselect_sweep(&mut s, &op).unwrap(),
            criterion::BatchSize::SmallInput,
        )
    });
}

fn fbar(c: &mut Criterion) {
    let cfg = ed_run(3);
    let theta: Vec<f64> = (0..cfg.generator.theta.len()).map(|k| 0.01 * k as f64).collect();
    c.bench_function("fbar_n3_ed_uncached", |b| {
        b.iter_batched(
            || Driver::new(cfg.clone()).unwrap(),
            |d| d.evaluate_fbar(&theta).unwrap().fbar,
            criterion::BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, simulator, hamiltonian, vqe, fbar);
criterion_main!(benches);
