//! Canonical forms of small frames.
//!
//! Points are first split into cells by colour refinement, which is invariant
//! under isomorphism. The key is then the least adjacency bit string over all
//! orderings that list the cells in colour order. Bits are laid out block by
//! block, block `k` holding the pairs whose larger position is `k`, so a
//! partial ordering of the first positions fixes a prefix of the key and the
//! search prunes on it.

use crate::error::{Error, Result};
use crate::frame::Frame;

/// Largest frame `canonical_form` accepts; `n²` bits must fit in a `u128`.
pub const CANON_MAX_POINTS: usize = 11;

/// Isomorphism-invariant key: equal keys exactly for isomorphic frames.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    pub n: u8,
    pub bits: u128,
}

pub fn canonical_form(f: &Frame) -> Result<CanonicalKey> {
    canonical_labelling(f).map(|(k, _)| k)
}

/// The key and a relabelling `perm` (point `x` goes to position `perm[x]`)
/// realizing it.
pub fn canonical_labelling(f: &Frame) -> Result<(CanonicalKey, Vec<usize>)> {
    let n = f.len();
    if n > CANON_MAX_POINTS {
        return Err(Error::CapExceeded {
            n,
            cap: CANON_MAX_POINTS,
        });
    }
    let colours = refine(f);
    let mut order: Vec<usize> = f.points().collect();
    order.sort_by_key(|&x| (colours[x], x));
    // cell_of_pos[i]: colour required at position i
    let cell_of_pos: Vec<u32> = order.iter().map(|&x| colours[x]).collect();

    let mut search = Search {
        f,
        n,
        colours: &colours,
        cell_of_pos: &cell_of_pos,
        placed: Vec::with_capacity(n),
        used: 0,
        best: None,
    };
    search.dfs(0);
    let (bits, placed) = search.best.expect("at least one ordering");
    let mut perm = vec![0; n];
    for (pos, &x) in placed.iter().enumerate() {
        perm[x] = pos;
    }
    Ok((CanonicalKey { n: n as u8, bits }, perm))
}

/// The frame relabelled into canonical order, with default labels.
pub fn canonical_frame(f: &Frame) -> Result<Frame> {
    let (_, perm) = canonical_labelling(f)?;
    let mut rows = vec![crate::bits::PointSet::EMPTY; f.len()];
    for x in f.points() {
        rows[perm[x]] = f.succ(x).iter().map(|y| perm[y]).collect();
    }
    Ok(Frame::from_succ_unchecked(rows, None))
}

struct Search<'a> {
    f: &'a Frame,
    n: usize,
    colours: &'a [u32],
    cell_of_pos: &'a [u32],
    placed: Vec<usize>,
    used: u64,
    best: Option<(u128, Vec<usize>)>,
}

impl Search<'_> {
    /// Bits of block `k` given the points placed at positions `0..=k`.
    fn block(&self, k: usize) -> (u128, u32) {
        let p = self.placed[k];
        let mut v = 0u128;
        for j in 0..k {
            let q = self.placed[j];
            v = (v << 2) | ((self.f.rel(p, q) as u128) << 1) | self.f.rel(q, p) as u128;
        }
        v = (v << 1) | self.f.rel(p, p) as u128;
        (v, 2 * k as u32 + 1)
    }

    fn dfs(&mut self, pos: usize) {
        self.dfs_with(pos, 0, 0);
    }

    fn dfs_with(&mut self, pos: usize, prefix: u128, prefix_len: u32) {
        let total = (self.n * self.n) as u32;
        if let Some((best, _)) = &self.best {
            let best_prefix = if prefix_len == 0 { 0 } else { best >> (total - prefix_len) };
            if prefix > best_prefix {
                return;
            }
        }
        if pos == self.n {
            if self.best.as_ref().is_none_or(|(b, _)| prefix < *b) {
                self.best = Some((prefix, self.placed.clone()));
            }
            return;
        }
        let want = self.cell_of_pos[pos];
        for x in 0..self.n {
            if self.used >> x & 1 == 1 || self.colours[x] != want {
                continue;
            }
            self.placed.push(x);
            self.used |= 1 << x;
            let (bits, len) = self.block(pos);
            self.dfs_with(pos + 1, (prefix << len) | bits, prefix_len + len);
            self.used &= !(1 << x);
            self.placed.pop();
        }
    }
}

/// Colour refinement on the successor and predecessor relations. Colours are
/// ranks of sorted signatures, so isomorphic frames get equal colour multisets.
fn refine(f: &Frame) -> Vec<u32> {
    let n = f.len();
    let initial: Vec<(bool, usize, usize)> = f
        .points()
        .map(|x| (f.rel(x, x), f.succ(x).len(), f.pred(x).len()))
        .collect();
    let mut colours = rank(&initial);
    let mut classes = count_distinct(&colours);
    loop {
        let sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..n)
            .map(|x| {
                let mut out: Vec<u32> = f.succ(x).iter().map(|y| colours[y]).collect();
                let mut inc: Vec<u32> = f.pred(x).iter().map(|y| colours[y]).collect();
                out.sort_unstable();
                inc.sort_unstable();
                (colours[x], out, inc)
            })
            .collect();
        let next = rank(&sigs);
        let next_classes = count_distinct(&next);
        if next_classes == classes {
            return colours;
        }
        colours = next;
        classes = next_classes;
    }
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(s).expect("present") as u32)
        .collect()
}

fn count_distinct(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}
