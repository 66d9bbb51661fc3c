//! FEM and BEM assembly on the default rayon pool versus a single worker.
//! Build with `--no-default-features` for the plain sequential loops.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pzwave::bem::{BoundarySpaces, CalderonBlock};
use pzwave::fem::{FeSpace, FemBlock};
use pzwave::materials::MaterialSet;
use pzwave::mesh::{generate_rect_mesh, BoundaryMesh, DiagonalPattern, Region};
use pzwave::par;
use pzwave::C64;

fn fem(c: &mut Criterion) {
    let mut g = c.benchmark_group("fem_assembly");
    g.sample_size(10);
    let mat = MaterialSet::standard();
    for h in [0.1, 0.05] {
        let mesh = generate_rect_mesh([1.0, 1.0], [3.0, 2.0], h, DiagonalPattern::Right).unwrap();
        let boundary = BoundaryMesh::extract_region(&mesh, &Region::Everywhere).unwrap();
        let space = FeSpace::new(&mesh, &boundary, 2).unwrap();
        g.bench_with_input(BenchmarkId::new("pool", h), &h, |b, _| b.iter(|| FemBlock::assemble(&mesh, &space, &mat)));
        g.bench_with_input(BenchmarkId::new("one_thread", h), &h, |b, _| {
            b.iter(|| par::with_threads(1, || FemBlock::assemble(&mesh, &space, &mat)))
        });
    }
    g.finish();
}

fn bem(c: &mut Criterion) {
    let mut g = c.benchmark_group("bem_assembly");
    g.sample_size(10);
    let s = C64::new(1.0, 2.0);
    for h in [0.1, 0.05] {
        let mesh = generate_rect_mesh([1.0, 1.0], [3.0, 2.0], h, DiagonalPattern::Right).unwrap();
        let boundary = BoundaryMesh::extract_region(&mesh, &Region::Everywhere).unwrap();
        let bs = BoundarySpaces::new(&mesh, &boundary, 2).unwrap();
        g.bench_with_input(BenchmarkId::new("pool", h), &h, |b, _| {
            b.iter(|| CalderonBlock::assemble(s, 1.0, &bs).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("one_thread", h), &h, |b, _| {
            b.iter(|| par::with_threads(1, || CalderonBlock::assemble(s, 1.0, &bs).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, fem, bem);
criterion_main!(benches);
