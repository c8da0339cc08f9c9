use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use forkalg::axiom::{check_axiom, Axiom};
use forkalg::catalog::{canonical_form, count, CatalogQuery};
use forkalg::frame::w_frame;
use forkalg::projectivity::build_retraction;
use forkalg::unification::{brute_force_mu, mu_set};
use forkalg::cm;
use forkalg_bench::{fork_frames, retraction_instances, shuffled_w};

fn catalog(c: &mut Criterion) {
    let mut g = c.benchmark_group("catalog");
    g.bench_function("posets<=6", |b| b.iter(|| count(&CatalogQuery::posets(6)).unwrap()));
    g.bench_function("quasiorders<=5 labelled", |b| {
        b.iter(|| count(&CatalogQuery::quasiorders(5).labelled()).unwrap())
    });
    g.bench_function("fork<=7 connected", |b| {
        b.iter(|| count(&CatalogQuery::fork_frames(7).connected()).unwrap())
    });
    g.finish();
}

fn canonical(c: &mut Criterion) {
    let w = shuffled_w();
    let big = fork_frames(8, 8);
    c.bench_function("canonical/W", |b| b.iter(|| canonical_form(black_box(&w)).unwrap()));
    c.bench_function("canonical/fork8", |b| {
        b.iter(|| big.iter().map(|f| canonical_form(f).unwrap()).collect::<Vec<_>>())
    });
}

fn unification(c: &mut Criterion) {
    let bw = cm(&w_frame()).unwrap();
    c.bench_function("mu_set/B_W", |b| b.iter(|| mu_set(black_box(&bw)).unwrap()));
    c.bench_function("oracle/B_W<=5", |b| b.iter(|| brute_force_mu(black_box(&bw), 5).unwrap()));
}

fn retraction(c: &mut Criterion) {
    let cases = retraction_instances(64, 16);
    c.bench_function("build_retraction/64", |b| {
        b.iter_batched(
            || cases.clone(),
            |cases| {
                for (w, e) in &cases {
                    let _ = build_retraction(w, e);
                }
            },
            BatchSize::SmallInput,
        )
    });
}

fn axioms(c: &mut Criterion) {
    let algebras: Vec<_> = fork_frames(8, 7).iter().map(|f| cm(f).unwrap()).collect();
    for ax in Axiom::ALL {
        c.bench_function(&format!("axiom/{}", ax.name()), |b| {
            b.iter(|| algebras.iter().filter(|a| check_axiom(ax, a).unwrap().holds).count())
        });
    }
}

criterion_group!(benches, catalog, canonical, unification, retraction, axioms);
criterion_main!(benches);
