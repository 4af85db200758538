#![allow(dead_code)]

use fedosov_core::*;
use proptest::prelude::ProptestConfig;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

pub fn sym(dim: usize) -> SymplecticForm {
    SymplecticForm::standard(dim).unwrap()
}

pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

pub fn qi(n: i64, d: i64) -> Scalar {
    Scalar::imag_ratio(n, d)
}

pub fn x(dim: usize, i: usize) -> CoordPoly {
    CoordPoly::var(dim, i)
}

pub fn p(text: &str, dim: usize) -> CoordPoly {
    parse_poly(text, dim).unwrap()
}

/// Unit-free series `f` at order 0.
pub fn s0(f: &CoordPoly) -> HSeries<CoordPoly> {
    HSeries::constant(f.clone(), 0)
}
