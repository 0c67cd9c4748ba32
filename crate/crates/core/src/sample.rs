//! Seeded generators of exact rational sample points.
//!
//! All denominators stay at or below `p^6` so every downstream check is exact
//! and replayable from the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::carpet::{member, CarpetSpace};
use crate::exactnum::{Base, DigitExpansion, PRational};
use crate::pillow::{Face, PillowPoint};

pub struct Sampler {
    rng: ChaCha8Rng,
    p: Base,
}

const DIGITS: u32 = 6;

impl Sampler {
    pub fn new(p: Base, seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), p }
    }

    fn face(&mut self) -> Face {
        if self.rng.random_bool(0.5) {
            Face::Front
        } else {
            Face::Back
        }
    }

    /// `a/d` with `d <= p^3` and `0 <= a <= d`.
    pub fn unit_rational(&mut self) -> PRational {
        let dmax = self.p.pow(3) as i64;
        let d = self.rng.random_range(1..=dmax);
        let a = self.rng.random_range(0..=d);
        PRational::new(a, d)
    }

    /// Any point of the pillow.
    pub fn pillow_point(&mut self) -> PillowPoint {
        let face = self.face();
        let x = self.unit_rational();
        let y = self.unit_rational();
        PillowPoint::new(face, x, y).expect("unit coordinates")
    }

    /// A point of the closed front face `Q`.
    pub fn front_point(&mut self) -> PillowPoint {
        let x = self.unit_rational();
        let y = self.unit_rational();
        PillowPoint::front(x, y).expect("unit coordinates")
    }

    /// Corner of a random good level-6 tile.
    fn good_corner(&mut self) -> PillowPoint {
        let q = self.p.get();
        let m = self.p.middle();
        let (mut i, mut j) = (0i64, 0i64);
        for _ in 0..DIGITS {
            let (a, b) = loop {
                let pair = (self.rng.random_range(0..q), self.rng.random_range(0..q));
                if pair != (m, m) {
                    break pair;
                }
            };
            i = i * q as i64 + a as i64;
            j = j * q as i64 + b as i64;
        }
        let side = self.p.pow(DIGITS) as i64;
        let (di, dj) = (self.rng.random_range(0..=1), self.rng.random_range(0..=1));
        let face = self.face();
        PillowPoint::at(face, (i + di, side), (j + dj, side)).expect("corner in square")
    }

    /// A point of `D_p`: half good-tile corners, half rejection-sampled
    /// rationals with small denominators.
    pub fn dp_point(&mut self) -> PillowPoint {
        if self.rng.random_bool(0.5) {
            return self.good_corner();
        }
        for _ in 0..64 {
            let q = self.pillow_point();
            if member(self.p, CarpetSpace::Dp, &q) {
                return q;
            }
        }
        self.good_corner()
    }

    /// A point of `C_p`: either `p`-adic or eventually periodic with digits
    /// avoiding the middle one.
    pub fn cantor_value(&mut self) -> PRational {
        let q = self.p.get();
        let m = self.p.middle();
        let digit = |rng: &mut ChaCha8Rng| loop {
            let d = rng.random_range(0..q);
            if d != m {
                break d;
            }
        };
        let (pre_len, per_len) = if self.rng.random_bool(0.5) {
            (self.rng.random_range(0..=DIGITS as usize), 0)
        } else {
            (self.rng.random_range(0..=2), self.rng.random_range(1..=3))
        };
        let pre: Vec<u32> = (0..pre_len).map(|_| digit(&mut self.rng)).collect();
        let per: Vec<u32> = (0..per_len).map(|_| digit(&mut self.rng)).collect();
        DigitExpansion::new(self.p, pre, per).expect("digits in range").value()
    }

    pub fn take<T>(&mut self, n: usize, mut f: impl FnMut(&mut Self) -> T) -> Vec<T> {
        (0..n).map(|_| f(self)).collect()
    }
}

/// Deterministic grid sample of `Q`: the points `(a/d, b/d)` for a fixed
/// denominator, thinned to `count` points.
pub fn front_grid(p: Base, count: usize) -> Vec<PillowPoint> {
    let d = 2 * p.get() as i64 + 3;
    let all: Vec<PillowPoint> = (0..=d)
        .flat_map(|a| (0..=d).map(move |b| (a, b)))
        .map(|(a, b)| PillowPoint::at(Face::Front, (a, d), (b, d)).expect("grid point"))
        .collect();
    let stride = (all.len() / count.max(1)).max(1);
    all.into_iter().step_by(stride).take(count).collect()
}
