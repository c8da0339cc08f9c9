//! Random fork frames for property tests.
//!
//! Frames grow one point at a time by two moves that keep a partial order of
//! height at most two and local width at most two: a new maximal point above
//! some lonely minimal points, or a new minimal point below at most two
//! maximal points. Neither move adds a point above an old one, so the old
//! frame stays up-closed (a generated subframe) in the new one.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bits::PointSet;
use crate::frame::{Frame, Morphism};

/// A random fork frame with `n ≥ 1` points.
pub fn random_fork_frame<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Frame {
    assert!(n >= 1);
    let seed = Frame::from_succ_unchecked(vec![PointSet::singleton(0)], None);
    grow(rng, &seed, PointSet::singleton(0), n - 1)
}

/// Adds `extra` random points to `base`, which is kept up-closed. Points are
/// then shuffled; the returned embedding maps each point of `base` to its
/// place in the result.
pub fn extend_fork_frame<R: Rng + ?Sized>(rng: &mut R, base: &Frame, extra: usize) -> (Frame, Morphism) {
    let grown = grow(rng, base, base.universe(), extra);
    let mut perm: Vec<usize> = grown.points().collect();
    perm.shuffle(rng);
    let mut rows = vec![PointSet::EMPTY; grown.len()];
    for x in grown.points() {
        rows[perm[x]] = grown.succ(x).iter().map(|y| perm[y]).collect();
    }
    let w = Frame::from_succ_unchecked(rows, None);
    let map = base.points().map(|x| perm[x]).collect();
    let emb = Morphism::new(base, &w, map).expect("indices in range");
    (w, emb)
}

fn grow<R: Rng + ?Sized>(rng: &mut R, start: &Frame, protected: PointSet, extra: usize) -> Frame {
    let mut rows: Vec<PointSet> = start.rows().to_vec();
    for _ in 0..extra {
        let f = Frame::from_succ_unchecked(rows.clone(), None);
        let n = rows.len();
        // minimal points outside the protected set with fewer than two
        // strict successors may go below a new top
        let lonely: Vec<usize> = f
            .points()
            .filter(|&x| {
                !protected.contains(x) && f.strict_down(x).is_empty() && f.strict_up(x).len() < 2
            })
            .collect();
        let tops: Vec<usize> = f.points().filter(|&x| f.strict_up(x).is_empty()).collect();
        if rng.gen_bool(0.5) && !lonely.is_empty() {
            let below: Vec<usize> = lonely.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
            for &x in &below {
                rows[x].insert(n);
            }
            rows.push(PointSet::singleton(n));
        } else {
            let k = rng.gen_range(0..=2.min(tops.len()));
            let above: Vec<usize> = tops.choose_multiple(rng, k).copied().collect();
            let mut own: PointSet = above.into_iter().collect();
            own.insert(n);
            rows.push(own);
        }
    }
    Frame::from_succ_unchecked(rows, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::is_generated_subframe;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_frames_are_fork_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..12 {
            for _ in 0..20 {
                let f = random_fork_frame(&mut rng, n);
                assert_eq!(f.len(), n);
                assert!(f.is_fork_frame(), "{f:?}");
            }
        }
    }

    #[test]
    fn extensions_keep_base_generated() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (n, extra) = (rng.gen_range(1..6), rng.gen_range(0..6));
            let base = random_fork_frame(&mut rng, n);
            let (w, emb) = extend_fork_frame(&mut rng, &base, extra);
            assert!(w.is_fork_frame());
            assert!(emb.is_injective());
            assert!(is_generated_subframe(&base, &w, &emb));
        }
    }
}
