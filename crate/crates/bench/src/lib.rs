//! Fixed inputs shared by the benchmarks in `benches/`.

use carpet_core::sample::Sampler;
use carpet_core::{Base, PillowPoint};

pub const SEED: u64 = 0xbe9c;

pub fn base(p: u32) -> Base {
    Base::new(p).expect("odd base")
}

/// Seeded `D_p` points, identical on every run.
pub fn dp_points(p: u32, count: usize) -> Vec<PillowPoint> {
    Sampler::new(base(p), SEED).take(count, |s| s.dp_point())
}

/// Seeded points anywhere on the pillow.
pub fn pillow_points(p: u32, count: usize) -> Vec<PillowPoint> {
    Sampler::new(base(p), SEED ^ 1).take(count, |s| s.pillow_point())
}
