//! Fixed inputs shared by the benchmarks, seeded so runs are comparable.

use forkalg::catalog::random::random_fork_frame;
use forkalg::frame::w_frame;
use forkalg::projectivity::random_instance;
use forkalg::{Frame, Morphism};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x00be_1c4a;

/// Retraction instances with up to `max_points` points.
pub fn retraction_instances(count: usize, max_points: usize) -> Vec<(Frame, Morphism)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count).map(|_| random_instance(&mut rng, max_points)).collect()
}

/// Random fork frames on exactly `n` points.
pub fn fork_frames(count: usize, n: usize) -> Vec<Frame> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ n as u64);
    (0..count).map(|_| random_fork_frame(&mut rng, n)).collect()
}

/// The five-point frame W with its points renamed by a fixed permutation,
/// so canonical form has work to do.
pub fn shuffled_w() -> Frame {
    w_frame().permute(&[3, 0, 4, 1, 2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(fork_frames(3, 6), fork_frames(3, 6));
        assert_eq!(retraction_instances(2, 8).len(), 2);
        assert_eq!(shuffled_w().len(), 5);
    }
}
