use criterion::{criterion_group, criterion_main, Criterion};

use valfield_core::{
    smith_normal_form, solve_lp, AffineMap, FieldDescriptor, LpInstance, Matrix, Polyhedron,
    SampleGrid, Sense,
};

fn random_matrix(grid: &SampleGrid, rng: &mut rand_like::Rng, rows: usize, cols: usize) -> Matrix {
    let d = &grid.descriptor;
    let mut m = Matrix::zeros(d, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, grid.random_scalar(rng));
        }
    }
    m
}

// thin alias so the helper signature stays readable
mod rand_like {
    pub type Rng = rand_chacha::ChaCha8Rng;
}

fn bench_snf(c: &mut Criterion) {
    let d = FieldDescriptor::p_adic(5).unwrap();
    let grid = SampleGrid::default_for(&d, -3, 3, 11);
    let mut rng = grid.rng();
    let mats: Vec<Matrix> = (0..16).map(|_| random_matrix(&grid, &mut rng, 5, 6)).collect();
    c.bench_function("snf_5x6", |b| {
        b.iter(|| {
            for m in &mats {
                std::hint::black_box(smith_normal_form(m));
            }
        })
    });
}

fn bench_solve_lp(c: &mut Criterion) {
    let d = FieldDescriptor::p_adic(2).unwrap();
    let grid = SampleGrid::default_for(&d, -3, 3, 12);
    let mut rng = grid.rng();
    let instances: Vec<LpInstance> = (0..16)
        .map(|_| {
            let a = random_matrix(&grid, &mut rng, 3, 3);
            let b = (0..3).map(|_| grid.random_scalar(&mut rng)).collect();
            let cost = (0..3).map(|_| grid.random_scalar(&mut rng)).collect();
            LpInstance::without_equalities(a, b, cost, Sense::Min).unwrap()
        })
        .collect();
    c.bench_function("solve_lp_3x3", |b| {
        b.iter(|| {
            for inst in &instances {
                std::hint::black_box(solve_lp(inst).unwrap());
            }
        })
    });
}

fn bench_direct_image(c: &mut Criterion) {
    let d = FieldDescriptor::p_adic(3).unwrap();
    let grid = SampleGrid::default_for(&d, -3, 3, 13);
    let mut rng = grid.rng();
    let cases: Vec<(Polyhedron, AffineMap)> = (0..8)
        .map(|_| {
            let a = random_matrix(&grid, &mut rng, 4, 3);
            let v = (0..4).map(|_| grid.random_scalar(&mut rng)).collect();
            let p = Polyhedron::from_inequalities(3, a, v).unwrap();
            let f = AffineMap::linear(random_matrix(&grid, &mut rng, 2, 3));
            (p, f)
        })
        .collect();
    c.bench_function("direct_image_3_to_2", |b| {
        b.iter(|| {
            for (p, f) in &cases {
                std::hint::black_box(p.direct_image(f).unwrap());
            }
        })
    });
}

criterion_group!(benches, bench_snf, bench_solve_lp, bench_direct_image);
criterion_main!(benches);
