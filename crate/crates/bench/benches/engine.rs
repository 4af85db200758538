use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use fedosov_core::{coeff_sequences, gen, CoordPoly, Geometry, StarProduct, SymplecticForm, WeylCurvatureSpec, WeylForm};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn weyl_product(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s = SymplecticForm::standard(4).unwrap();
    let a = gen::weyl(&mut rng, 4, 8, 6, &[0, 1], 12);
    let b = gen::weyl(&mut rng, 4, 8, 6, &[0, 1], 12);
    c.bench_function("circ_r4_cap8", |bench| bench.iter(|| a.circ(&b, &s)));
    let r = gen::geometry(&mut rng, 4, 1, 0.5).curvature().weyl_two_form(WeylForm::UNCAPPED);
    c.bench_function("delta_inv_curvature_r4", |bench| bench.iter(|| r.delta_inv()));
}

fn fedosov(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let curved = WeylCurvatureSpec::unperturbed(gen::geometry(&mut rng, 4, 1, 0.5));
    let mut group = c.benchmark_group("fedosov");
    group.sample_size(10);
    group.bench_function("solve_r_curved_r4_cap6", |bench| bench.iter(|| StarProduct::new(curved.clone(), 2).unwrap()));
    let f = gen::homogeneous_poly(&mut rng, 4, 2, 3);
    let g = gen::homogeneous_poly(&mut rng, 4, 2, 3);
    let sp = StarProduct::new(curved.clone(), 2).unwrap();
    group.bench_function("star_curved_r4_order2_cold", |bench| {
        bench.iter_batched(|| sp.clone(), |sp| sp.star(&f, &g).unwrap(), BatchSize::LargeInput)
    });
    let flat = WeylCurvatureSpec::unperturbed(Geometry::flat(SymplecticForm::standard(2).unwrap()));
    let alpha = gen::constant_skew(&mut rng, 2);
    let pert = flat.perturbed(1, alpha).unwrap();
    let x = CoordPoly::var(2, 0);
    let y = CoordPoly::var(2, 1);
    group.bench_function("star_flat_r2_order8", |bench| {
        bench.iter(|| StarProduct::new(pert.clone(), 8).unwrap().star(&x, &y).unwrap())
    });
    group.finish();
}

fn coefficients(c: &mut Criterion) {
    c.bench_function("coeff_sequences_32", |bench| bench.iter(|| coeff_sequences(32)));
}

criterion_group!(benches, weyl_product, fedosov, coefficients);
criterion_main!(benches);
