//! Seeded random inputs for sampled checks. The seed comes from
//! `GRADIRA_SEED` when set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::Chart;
use crate::scalar::Scalar;

pub const DEFAULT_SEED: u64 = 0x6772_6164;

pub fn seed_from_env() -> u64 {
    std::env::var("GRADIRA_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn from_env() -> Self {
        Sampler::new(seed_from_env())
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    pub fn nonzero(&mut self, bound: i64) -> i64 {
        loop {
            let v = self.int(-bound, bound);
            if v != 0 {
                return v;
            }
        }
    }

    /// Random polynomial in the chart coordinates with a constant term.
    pub fn poly(&mut self, chart: &Chart, max_deg: u32, terms: usize) -> Scalar {
        let mut s = Scalar::from_i64(self.int(-3, 3));
        for _ in 0..terms {
            let d = self.int(1, max_deg.max(1) as i64) as u32;
            let mut t = Scalar::from_i64(self.nonzero(3));
            for _ in 0..d {
                let k = self.index(chart.dim());
                t = &t * &chart.x(k);
            }
            s = &s + &t;
        }
        s
    }
}
