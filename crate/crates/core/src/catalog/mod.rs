//! Exhaustive enumeration of small quasiorders and partial orders.
//!
//! Frames on `k + 1` points are produced from frames on `k` points by adding
//! one point `p` below an up-closed set `U` and above a down-closed set `D`
//! with `D × U` already related, so the old frame stays an induced subframe.
//! Deleting the last point inverts this, so every frame is reached. Height,
//! local width and antisymmetry pass to induced subframes, which lets the
//! generator prune on them; connectedness is only tested on output.

mod canon;
pub mod random;

pub use canon::{canonical_form, canonical_frame, canonical_labelling, CanonicalKey, CANON_MAX_POINTS};

use std::collections::BTreeMap;

use crate::bits::PointSet;
use crate::error::{Error, Result};
use crate::frame::Frame;

/// Default largest frame size a query may ask for.
pub const DEFAULT_CAP: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    Quasiorder,
    Poset,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogQuery {
    pub min_points: usize,
    pub max_points: usize,
    pub kind: OrderKind,
    pub connected: bool,
    pub max_height: Option<usize>,
    pub max_local_width: Option<usize>,
    /// Up to isomorphism (one canonical representative per class) or all
    /// labelled frames.
    pub up_to_iso: bool,
    pub cap: usize,
}

impl CatalogQuery {
    pub fn quasiorders(max_points: usize) -> CatalogQuery {
        CatalogQuery {
            min_points: 1,
            max_points,
            kind: OrderKind::Quasiorder,
            connected: false,
            max_height: None,
            max_local_width: None,
            up_to_iso: true,
            cap: DEFAULT_CAP,
        }
    }

    pub fn posets(max_points: usize) -> CatalogQuery {
        CatalogQuery {
            kind: OrderKind::Poset,
            ..CatalogQuery::quasiorders(max_points)
        }
    }

    /// Partial orders of height at most two and local width at most two.
    pub fn fork_frames(max_points: usize) -> CatalogQuery {
        CatalogQuery::posets(max_points).max_height(2).max_local_width(2)
    }

    pub fn connected(mut self) -> Self {
        self.connected = true;
        self
    }

    pub fn max_height(mut self, h: usize) -> Self {
        self.max_height = Some(h);
        self
    }

    pub fn max_local_width(mut self, m: usize) -> Self {
        self.max_local_width = Some(m);
        self
    }

    /// Only frames with exactly `n` points.
    pub fn exactly(mut self, n: usize) -> Self {
        self.min_points = n;
        self.max_points = n;
        self
    }

    pub fn min_points(mut self, n: usize) -> Self {
        self.min_points = n;
        self
    }

    pub fn labelled(mut self) -> Self {
        self.up_to_iso = false;
        self
    }

    pub fn cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Is this the fork-frame constraint set?
    pub fn is_fork(&self) -> bool {
        self.kind == OrderKind::Poset && self.max_height == Some(2) && self.max_local_width == Some(2)
    }

    fn hereditary_ok(&self, f: &Frame) -> bool {
        if self.max_height.is_none() && self.max_local_width.is_none() {
            return true;
        }
        let stats = f.order_stats().expect("generated frames are quasiorders");
        self.max_height.is_none_or(|h| stats.height <= h)
            && self.max_local_width.is_none_or(|m| stats.local_width <= m)
    }

    /// Does `f` satisfy every constraint of the query?
    pub fn accepts(&self, f: &Frame) -> bool {
        let kind_ok = match self.kind {
            OrderKind::Quasiorder => f.is_quasiorder(),
            OrderKind::Poset => f.is_partial_order(),
        };
        kind_ok
            && f.len() >= self.min_points.max(1)
            && f.len() <= self.max_points
            && (!self.connected || f.is_connected())
            && self.hereditary_ok(f)
    }
}

/// Streams the frames satisfying `q`: by point count, then (up to isomorphism)
/// in ascending canonical key, or (labelled) in generation order.
pub fn enumerate(q: &CatalogQuery) -> Result<Enumeration> {
    let cap = q.cap.min(CANON_MAX_POINTS);
    if q.max_points > cap {
        return Err(Error::CapExceeded {
            n: q.max_points,
            cap,
        });
    }
    let seed = Frame::from_succ_unchecked(vec![PointSet::singleton(0)], None);
    let mode = if q.max_points == 0 {
        Mode::Done
    } else if q.up_to_iso {
        Mode::Levels {
            level: vec![seed],
            pending: Vec::new().into_iter(),
            started: false,
        }
    } else {
        Mode::Labelled { stack: vec![seed] }
    };
    Ok(Enumeration {
        query: q.clone(),
        mode,
    })
}

/// Number of frames satisfying `q`.
pub fn count(q: &CatalogQuery) -> Result<usize> {
    Ok(enumerate(q)?.count())
}

pub struct Enumeration {
    query: CatalogQuery,
    mode: Mode,
}

enum Mode {
    Levels {
        /// Canonical representatives of all frames with the current point count
        /// that pass the hereditary constraints.
        level: Vec<Frame>,
        pending: std::vec::IntoIter<Frame>,
        started: bool,
    },
    Labelled {
        stack: Vec<Frame>,
    },
    Done,
}

impl Iterator for Enumeration {
    type Item = Frame;

    fn next(&mut self) -> Option<Frame> {
        let q = &self.query;
        match &mut self.mode {
            Mode::Done => None,
            Mode::Labelled { stack } => loop {
                let f = stack.pop()?;
                if f.len() < q.max_points {
                    let mut ext = extensions(&f, q);
                    ext.reverse();
                    stack.extend(ext);
                }
                if f.len() >= q.min_points && (!q.connected || f.is_connected()) {
                    return Some(f);
                }
            },
            Mode::Levels {
                level,
                pending,
                started,
            } => loop {
                if let Some(f) = pending.next() {
                    return Some(f);
                }
                if *started {
                    let n = level.first().map_or(0, Frame::len);
                    if n >= q.max_points || level.is_empty() {
                        self.mode = Mode::Done;
                        return None;
                    }
                    *level = next_level(level, q);
                }
                *started = true;
                let n = level.first().map_or(0, Frame::len);
                let out: Vec<Frame> = if n >= q.min_points {
                    level
                        .iter()
                        .filter(|f| !q.connected || f.is_connected())
                        .cloned()
                        .collect()
                } else {
                    Vec::new()
                };
                *pending = out.into_iter();
            },
        }
    }
}

fn next_level(level: &[Frame], q: &CatalogQuery) -> Vec<Frame> {
    let mut seen: BTreeMap<CanonicalKey, Frame> = BTreeMap::new();
    for f in level {
        for g in extensions(f, q) {
            let (key, perm) = canonical_labelling(&g).expect("within cap");
            seen.entry(key).or_insert_with(|| relabel(&g, &perm));
        }
    }
    seen.into_values().collect()
}

fn relabel(f: &Frame, perm: &[usize]) -> Frame {
    let mut rows = vec![PointSet::EMPTY; f.len()];
    for x in f.points() {
        rows[perm[x]] = f.succ(x).iter().map(|y| perm[y]).collect();
    }
    Frame::from_succ_unchecked(rows, None)
}

/// One-point extensions of `f` passing the hereditary constraints of `q`, in
/// ascending `(D, U)` order.
fn extensions(f: &Frame, q: &CatalogQuery) -> Vec<Frame> {
    let n = f.len();
    let subsets = || (0..1u64 << n).map(PointSet);
    let downs: Vec<PointSet> = subsets().filter(|&s| f.is_down_closed(s)).collect();
    let ups: Vec<PointSet> = subsets().filter(|&s| f.is_up_closed(s)).collect();
    let mut out = Vec::new();
    for &d in &downs {
        // everything in D must already be below everything in U
        let above_all_d = d.iter().fold(f.universe(), |acc, x| acc & f.succ(x));
        for &u in &ups {
            if !u.is_subset(above_all_d) {
                continue;
            }
            if q.kind == OrderKind::Poset && d.intersects(u) {
                continue;
            }
            let mut rows: Vec<PointSet> = f.rows().to_vec();
            for x in d.iter() {
                rows[x].insert(n);
            }
            let mut own = u;
            own.insert(n);
            rows.push(own);
            let g = Frame::from_succ_unchecked(rows, None);
            if q.hereditary_ok(&g) {
                out.push(g);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(q: CatalogQuery, max: usize) -> Vec<usize> {
        (1..=max).map(|n| count(&q.clone().exactly(n)).unwrap()).collect()
    }

    #[test]
    fn poset_counts() {
        assert_eq!(counts(CatalogQuery::posets(6), 6), [1, 2, 5, 16, 63, 318]);
    }

    #[test]
    fn quasiorder_counts() {
        assert_eq!(counts(CatalogQuery::quasiorders(5), 5), [1, 3, 9, 33, 139]);
    }

    #[test]
    fn labelled_poset_counts() {
        assert_eq!(counts(CatalogQuery::posets(5).labelled(), 5), [1, 3, 19, 219, 4231]);
    }

    #[test]
    fn small_examples() {
        assert_eq!(count(&CatalogQuery::posets(2).exactly(2)).unwrap(), 2);
        let q = CatalogQuery::fork_frames(3).exactly(3).connected();
        let frames: Vec<Frame> = enumerate(&q).unwrap().collect();
        assert_eq!(frames.len(), 2);
        assert!(frames.iter().any(|f| f.is_isomorphic(&crate::frame::fork())));
        assert!(frames.iter().any(|f| f.is_isomorphic(&crate::frame::cofork())));
        assert_eq!(count(&CatalogQuery::quasiorders(1)).unwrap(), 1);
    }

    #[test]
    fn output_is_sorted_and_canonical() {
        let frames: Vec<Frame> = enumerate(&CatalogQuery::posets(4).exactly(4)).unwrap().collect();
        let keys: Vec<CanonicalKey> = frames.iter().map(|f| canonical_form(f).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        for f in &frames {
            assert_eq!(&canonical_frame(f).unwrap(), f);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate(&CatalogQuery::posets(8)).err(),
            Some(Error::CapExceeded { n: 8, cap: 7 })
        );
        assert!(enumerate(&CatalogQuery::posets(8).cap(8)).is_ok());
    }
}
