#![allow(dead_code)]

use forkalg::Frame;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Reflexive-transitive closure of a random relation on 1..=max points.
pub fn arb_quasiorder(max: usize) -> impl Strategy<Value = Frame> {
    (1..=max)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n * n)))
        .prop_map(|(n, bits)| {
            Frame::from_fn(n, |i, j| i == j || bits[i * n + j])
                .unwrap()
                .reflexive_transitive_closure()
        })
}

pub fn arb_fork_frame(max: usize) -> impl Strategy<Value = Frame> {
    (1..=max, any::<u64>()).prop_map(|(n, seed)| {
        forkalg::catalog::random::random_fork_frame(&mut ChaCha8Rng::seed_from_u64(seed), n)
    })
}

/// Every relation on `n` points, as a frame, in bitmask order.
pub fn all_relations(n: usize) -> impl Iterator<Item = Frame> {
    (0u64..1 << (n * n)).map(move |m| Frame::from_fn(n, |i, j| m >> (i * n + j) & 1 == 1).unwrap())
}
