//! Core workloads, tagged with the backend they were compiled with.
//!
//! ```text
//! cargo bench -p cofib --bench enumeration -- --save-baseline parallel
//! cargo bench -p cofib --bench enumeration --no-default-features -- --baseline parallel
//! ```

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cofib::cofcat::{check_axioms, gluing_cubes};
use cofib::corpus;
use cofib::dconstr::{FiltCategory, WeqPolicy};
use cofib::fincat::FinCategory;
use cofib::frames::Nf;
use cofib::hocat::homotopy_category;
use cofib::par;
use cofib::reedy::{enumerate_diagrams, DirectIndex};
use cofib::simplicial::FinSimplicialSet;

fn mode() -> &'static str {
    if par::is_parallel() {
        "parallel"
    } else {
        "sequential"
    }
}

fn workloads(c: &mut Criterion) {
    let lab = corpus::lattice(&["a", "b"], true);
    let path = corpus::by_name("path_la").unwrap();
    let la = corpus::lattice(&["a"], true);
    let span = FinCategory::span();
    let w: Vec<bool> = (0..span.n_mor()).map(|f| span.is_identity(f)).collect();
    let idx = DirectIndex::from_category(span, w).unwrap();
    let delta3 = FinSimplicialSet::standard(3);

    let mut g = c.benchmark_group("core");
    g.sample_size(10);
    g.bench_function("check_axioms/lab_all", |b| b.iter(|| black_box(check_axioms(&lab))));
    g.bench_function("check_axioms/path_la", |b| b.iter(|| black_box(check_axioms(&path))));
    g.bench_function("gluing_cubes/lab_all", |b| b.iter(|| black_box(gluing_cubes(&lab).len())));
    g.bench_function("homotopy_category/path_la", |b| b.iter(|| black_box(homotopy_category(&path).unwrap())));
    g.bench_function("filt/delta3_k2", |b| {
        b.iter(|| black_box(FiltCategory::build(&delta3, 2, &WeqPolicy::Generated).unwrap().n_mor()))
    });
    g.bench_function("enumerate_diagrams/span_lab", |b| {
        b.iter(|| black_box(enumerate_diagrams(&idx, &lab, 100_000).unwrap().len()))
    });
    g.bench_function("nf_build/la_all_k1_cap2", |b| {
        b.iter(|| black_box(Nf::build(&la, 1, 2, 100_000).unwrap().frames.len()))
    });
    g.finish();
    eprintln!("backend: {}", mode());
}

criterion_group!(benches, workloads);
criterion_main!(benches);
