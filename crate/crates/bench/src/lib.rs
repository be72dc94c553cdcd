//! Shared fixtures for the benchmarks.

use kanforge::free::{formal_filling, make_free_fibration};
use kanforge::kan::sample_box;
use kanforge::sample;
use kanforge::zsub::terminal_object;
use kanforge::{FibrationStructure, FreeFibration, GenConfig, OpenBox, Value, ZMorphism};

/// `K 1_1`.
pub fn unit_free() -> FreeFibration {
    make_free_fibration(&ZMorphism::identity(&terminal_object()))
}

pub fn unit_formal() -> FibrationStructure {
    formal_filling(&unit_free())
}

/// `n` seeded terms of `K 1_1`.
pub fn terms(n: usize, seed: u64, cfg: &GenConfig) -> Vec<Value> {
    let kf = unit_free();
    let mut rng = sample::rng(seed);
    (0..n).map(|_| kf.sample(&mut rng, cfg)).collect()
}

/// `n` seeded open boxes against `f`.
pub fn boxes(f: &ZMorphism, n: usize, seed: u64, cfg: &GenConfig) -> Vec<OpenBox> {
    let mut rng = sample::rng(seed);
    (0..n)
        .map(|_| sample_box(f, &mut rng, cfg, cfg.rank))
        .collect()
}
