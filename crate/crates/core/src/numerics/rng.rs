use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::Vector;

/// Counter-based random stream addressed by `(seed, stream_id)`.
///
/// Backed by ChaCha8, whose 64-bit stream parameter selects an independent
/// keystream for the same key. A given pair always replays the same draws,
/// regardless of which thread consumes it.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RandomSource {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    #[inline]
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.rng.sample(StandardNormal);
        }
    }
}

pub fn standard_normal_draws(src: &mut RandomSource, count: usize) -> Vector {
    let mut out = vec![0.0; count];
    src.fill_normal(&mut out);
    Vector::from(out)
}
