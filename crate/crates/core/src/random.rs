use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::operator::C64;
use crate::state::StateVector;

/// Generator used everywhere a seed is accepted.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` under `seed`; trial `i` of a run always sees the
/// same draws regardless of how many trials run or in which order.
pub fn stream_rng(seed: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Haar-random qubit from two standard complex Gaussians.
pub fn random_qubit_state<R: Rng + ?Sized>(rng: &mut R) -> StateVector {
    loop {
        let mut g = || C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let (a, b) = (g(), g());
        if a.norm_sqr() + b.norm_sqr() > 1e-300 {
            return StateVector::normalized(1, vec![a, b]).expect("nonzero vector normalizes");
        }
    }
}
