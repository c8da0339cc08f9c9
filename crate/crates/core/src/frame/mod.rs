//! Finite frames `⟨W, R⟩`, their quasiorder structure and generated subframes.
//!
//! Points are indexed `0..n`. The relation is stored twice, as successor rows
//! `R(x)` and predecessor rows `R˘(x)`, both as [`PointSet`] words. All set-valued
//! outputs are ascending in point index.

mod builtin;
mod io;
mod morphism;
mod order;

pub use builtin::{antichain, chain, cofork, fork, prongs, single_point, w_frame};
pub use io::{parse_frame, write_frame};
pub use morphism::{is_bounded_morphism, Morphism, MorphismSearch, SearchOutcome};
pub use order::{mu_sets, ClusterPoset, MuSets, OrderStats, UnificationType};

use std::fmt;

use crate::bits::{PointSet, MAX_POINTS};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    succ: Vec<PointSet>,
    pred: Vec<PointSet>,
    labels: Vec<String>,
}

/// The two levels of a frame of height at most two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Levels {
    /// Points with nothing strictly below them (closed atoms of the dual algebra).
    pub lower: PointSet,
    /// Points with something strictly below them (non-closed atoms).
    pub upper: PointSet,
}

impl Frame {
    /// Builds a frame on `n` points from ordered pairs `(x, y)` meaning `x R y`.
    pub fn new<I>(n: usize, pairs: I) -> Result<Frame>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_size(n)?;
        let mut succ = vec![PointSet::EMPTY; n];
        for (x, y) in pairs {
            for i in [x, y] {
                if i >= n {
                    return Err(Error::PointOutOfRange { index: i, n });
                }
            }
            succ[x].insert(y);
        }
        Ok(Frame::from_succ_unchecked(succ, None))
    }

    /// Builds a frame from successor rows; `rows[x]` is `R(x)`.
    pub fn from_rows(rows: Vec<PointSet>) -> Result<Frame> {
        let n = rows.len();
        check_size(n)?;
        let universe = PointSet::full(n);
        if let Some(bad) = rows.iter().find(|r| !r.is_subset(universe)) {
            let index = (*bad - universe).first().unwrap_or(n);
            return Err(Error::PointOutOfRange { index, n });
        }
        Ok(Frame::from_succ_unchecked(rows, None))
    }

    /// Frame on `n` points whose relation is given by a predicate.
    pub fn from_fn(n: usize, rel: impl Fn(usize, usize) -> bool) -> Result<Frame> {
        check_size(n)?;
        let rows = (0..n)
            .map(|x| (0..n).filter(|&y| rel(x, y)).collect())
            .collect();
        Ok(Frame::from_succ_unchecked(rows, None))
    }

    /// The empty frame. It is the dual of the one-element (trivial) algebra and
    /// is the only frame allowed to have no points.
    pub fn empty() -> Frame {
        Frame {
            succ: Vec::new(),
            pred: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub(crate) fn from_succ_unchecked(succ: Vec<PointSet>, labels: Option<Vec<String>>) -> Frame {
        let n = succ.len();
        let mut pred = vec![PointSet::EMPTY; n];
        for (x, row) in succ.iter().enumerate() {
            for y in row.iter() {
                pred[y].insert(x);
            }
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        Frame { succ, pred, labels }
    }

    /// Replaces the point names. Names must be distinct and non-empty.
    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Frame> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.len() {
            return Err(Error::parse(
                0,
                0,
                format!("{} labels given for {} points", labels.len(), self.len()),
            ));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || labels[..i].contains(l) {
                return Err(Error::parse(0, 0, format!("duplicate or empty label `{l}`")));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.succ.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn universe(&self) -> PointSet {
        PointSet::full(self.len())
    }

    #[inline]
    pub fn rel(&self, x: usize, y: usize) -> bool {
        self.succ[x].contains(y)
    }

    /// `R(x)`; for a quasiorder this is `↑x`.
    #[inline]
    pub fn succ(&self, x: usize) -> PointSet {
        self.succ[x]
    }

    /// `R˘(x)`; for a quasiorder this is `↓x`.
    #[inline]
    pub fn pred(&self, x: usize) -> PointSet {
        self.pred[x]
    }

    pub fn rows(&self) -> &[PointSet] {
        &self.succ
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Names of the points of `s`, ascending by index.
    pub fn names(&self, s: PointSet) -> Vec<&str> {
        s.iter().map(|x| self.label(x)).collect()
    }

    /// `{a,b}`-style rendering of a point set.
    pub fn format_set(&self, s: PointSet) -> String {
        format!("{{{}}}", self.names(s).join(","))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(|r| r.len()).sum()
    }

    pub fn converse(&self) -> Frame {
        Frame {
            succ: self.pred.clone(),
            pred: self.succ.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn is_reflexive(&self) -> bool {
        self.points().all(|x| self.rel(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.points().all(|x| {
            let reach = self.image(self.succ[x]);
            reach.is_subset(self.succ[x])
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.points()
            .all(|x| (self.succ[x] & self.pred[x]).is_subset(PointSet::singleton(x)))
    }

    pub fn is_quasiorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    pub fn is_partial_order(&self) -> bool {
        self.is_quasiorder() && self.is_antisymmetric()
    }

    pub(crate) fn require_quasiorder(&self) -> Result<()> {
        if self.is_quasiorder() {
            Ok(())
        } else {
            Err(Error::NotQuasiorder)
        }
    }

    /// Smallest reflexive and transitive relation containing `R`.
    pub fn reflexive_transitive_closure(&self) -> Frame {
        let n = self.len();
        let mut rows: Vec<PointSet> = (0..n)
            .map(|x| self.succ[x] | PointSet::singleton(x))
            .collect();
        // Warshall on bit rows.
        for k in 0..n {
            for x in 0..n {
                if rows[x].contains(k) {
                    rows[x] = rows[x] | rows[k];
                }
            }
        }
        Frame::from_succ_unchecked(rows, Some(self.labels.clone()))
    }

    /// `R[S]`: all points some member of `s` is related to.
    pub fn image(&self, s: PointSet) -> PointSet {
        s.iter().fold(PointSet::EMPTY, |acc, x| acc | self.succ[x])
    }

    /// `R˘[S]`.
    pub fn preimage(&self, s: PointSet) -> PointSet {
        s.iter().fold(PointSet::EMPTY, |acc, x| acc | self.pred[x])
    }

    /// Smallest superset of `s` closed under `R`.
    pub fn up_closure(&self, s: PointSet) -> PointSet {
        let mut cur = s;
        loop {
            let next = cur | self.image(cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Smallest superset of `s` closed under `R˘`.
    pub fn down_closure(&self, s: PointSet) -> PointSet {
        let mut cur = s;
        loop {
            let next = cur | self.preimage(cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    pub fn is_up_closed(&self, s: PointSet) -> bool {
        self.image(s).is_subset(s)
    }

    pub fn is_down_closed(&self, s: PointSet) -> bool {
        self.preimage(s).is_subset(s)
    }

    /// `↑̊x`: points strictly above `x`, i.e. `x R y` but not `y R x`.
    pub fn strict_up(&self, x: usize) -> PointSet {
        self.succ[x] - self.pred[x]
    }

    /// Points strictly below `x`.
    pub fn strict_down(&self, x: usize) -> PointSet {
        self.pred[x] - self.succ[x]
    }

    /// Points with nothing strictly above them.
    pub fn maximal_points(&self) -> PointSet {
        self.points().filter(|&x| self.strict_up(x).is_empty()).collect()
    }

    /// Points with nothing strictly below them.
    pub fn minimal_points(&self) -> PointSet {
        self.points().filter(|&x| self.strict_down(x).is_empty()).collect()
    }

    /// Connected components with respect to `R ∪ R˘`, ordered by least point.
    pub fn components(&self) -> Vec<PointSet> {
        let mut seen = PointSet::EMPTY;
        let mut out = Vec::new();
        for start in self.points() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = PointSet::singleton(start);
            loop {
                let next = comp | self.image(comp) | self.preimage(comp);
                if next == comp {
                    break;
                }
                comp = next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Component containing `x`.
    pub fn component_of(&self, x: usize) -> PointSet {
        self.components()
            .into_iter()
            .find(|c| c.contains(x))
            .expect("every point lies in a component")
    }

    /// Lower and upper level of a partial order of height at most two.
    ///
    /// A point is on the upper level iff something lies strictly below it; an
    /// isolated point is therefore on the lower level.
    pub fn levels(&self) -> Result<Levels> {
        if !self.is_partial_order() {
            return Err(Error::NotForkFrame("relation is not a partial order".into()));
        }
        let upper: PointSet = self
            .points()
            .filter(|&x| !self.strict_down(x).is_empty())
            .collect();
        if upper.iter().any(|y| !self.strict_up(y).is_empty()) {
            return Err(Error::NotForkFrame("height exceeds two".into()));
        }
        Ok(Levels {
            lower: self.universe() - upper,
            upper,
        })
    }

    /// Substructure induced on `s`, together with the list of original indices
    /// (position `i` of the result is original point `map[i]`).
    pub fn induced(&self, s: PointSet) -> (Frame, Vec<usize>) {
        let map: Vec<usize> = s.iter().collect();
        let mut inverse = vec![usize::MAX; self.len()];
        for (i, &x) in map.iter().enumerate() {
            inverse[x] = i;
        }
        let rows = map
            .iter()
            .map(|&x| (self.succ[x] & s).iter().map(|y| inverse[y]).collect())
            .collect();
        let labels = map.iter().map(|&x| self.labels[x].clone()).collect();
        (Frame::from_succ_unchecked(rows, Some(labels)), map)
    }

    /// Relabels points: original point `x` becomes point `perm[x]`.
    pub fn permute(&self, perm: &[usize]) -> Frame {
        let n = self.len();
        assert_eq!(perm.len(), n, "permutation length mismatch");
        let mut rows = vec![PointSet::EMPTY; n];
        let mut labels = vec![String::new(); n];
        for x in 0..n {
            rows[perm[x]] = self.succ[x].iter().map(|y| perm[y]).collect();
            labels[perm[x]] = self.labels[x].clone();
        }
        Frame::from_succ_unchecked(rows, Some(labels))
    }

    /// Disjoint union; points of `other` follow those of `self`.
    /// Labels get the suffixes `.1` and `.2`.
    pub fn disjoint_union(&self, other: &Frame) -> Result<Frame> {
        let n = self.len();
        check_size(n + other.len())?;
        let rows = self
            .succ
            .iter()
            .copied()
            .chain(other.succ.iter().map(|r| PointSet(r.bits() << n)))
            .collect();
        let labels = self
            .labels
            .iter()
            .map(|l| format!("{l}.1"))
            .chain(other.labels.iter().map(|l| format!("{l}.2")))
            .collect();
        Ok(Frame::from_succ_unchecked(rows, Some(labels)))
    }

    /// Partial order of height at most two and local width at most two.
    pub fn is_fork_frame(&self) -> bool {
        if self.is_empty() || !self.is_partial_order() {
            return false;
        }
        let stats = self.order_stats().expect("partial order is a quasiorder");
        stats.height <= 2 && stats.local_width <= 2
    }
}

/// Is `embedding` an isomorphism of `sub` onto a generated subframe of `sup`?
///
/// The image must be closed under the relation of `sup`, and the embedding must
/// be injective and both preserve and reflect the relation.
pub fn is_generated_subframe(sub: &Frame, sup: &Frame, embedding: &Morphism) -> bool {
    if embedding.source() != sub || embedding.target() != sup || !embedding.is_injective() {
        return false;
    }
    let image = embedding.image();
    if !sup.is_up_closed(image) {
        return false;
    }
    let m = embedding.map();
    sub.points()
        .all(|x| sub.points().all(|y| sub.rel(x, y) == sup.rel(m[x], m[y])))
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::EmptyFrame)
    } else if n > MAX_POINTS {
        Err(Error::TooManyPoints(n))
    } else {
        Ok(())
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .points()
            .flat_map(|x| {
                self.succ[x]
                    .iter()
                    .map(move |y| format!("{}→{}", self.labels[x], self.labels[y]))
            })
            .collect();
        write!(f, "Frame[{}]({})", self.labels.join(" "), pairs.join(", "))
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_frame(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_cycle() -> Frame {
        Frame::new(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn quasiorder_examples() {
        assert!(fork().is_quasiorder());
        assert!(!Frame::new(1, []).unwrap().is_quasiorder());
        // a R b, b R c, but not a R c
        assert!(!three_cycle().is_quasiorder());
        assert!(three_cycle().reflexive_transitive_closure().is_quasiorder());
    }

    #[test]
    fn closure_of_cycle_is_single_cluster() {
        let c = three_cycle().reflexive_transitive_closure();
        assert!(c.points().all(|x| c.succ(x) == c.universe()));
    }

    #[test]
    fn component_examples() {
        assert_eq!(w_frame().components().len(), 1);
        let ff = fork().disjoint_union(&fork()).unwrap();
        assert_eq!(ff.components().len(), 2);
        assert_eq!(antichain(5).components().len(), 5);
    }

    #[test]
    fn levels_of_fork_and_w() {
        let f = fork();
        let lv = f.levels().unwrap();
        assert_eq!(f.names(lv.lower), ["u"]);
        assert_eq!(f.names(lv.upper), ["v", "w"]);

        let w = w_frame();
        let lv = w.levels().unwrap();
        assert_eq!(w.names(lv.lower), ["u", "u'"]);
        assert_eq!(w.names(lv.upper), ["t", "v", "w"]);

        let p = single_point();
        let lv = p.levels().unwrap();
        assert_eq!(lv.lower, PointSet::singleton(0));
        assert!(lv.upper.is_empty());
    }

    #[test]
    fn levels_reject_tall_frames() {
        assert!(matches!(chain(3).levels(), Err(Error::NotForkFrame(_))));
        assert!(matches!(
            three_cycle().reflexive_transitive_closure().levels(),
            Err(Error::NotForkFrame(_))
        ));
    }

    #[test]
    fn generated_subframe_examples() {
        let w = w_frame();
        let up_u = w.succ(w.index_of("u").unwrap());
        let (sub, map) = w.induced(up_u);
        let emb = Morphism::new(&sub, &w, map).unwrap();
        assert!(is_generated_subframe(&sub, &w, &emb));

        let f = fork();
        let (root, map) = f.induced(PointSet::singleton(0));
        let emb = Morphism::new(&root, &f, map).unwrap();
        assert!(!is_generated_subframe(&root, &f, &emb));

        let id = Morphism::identity(&f);
        assert!(is_generated_subframe(&f, &f, &id));
    }

    #[test]
    fn strict_up_sets_in_fork() {
        let f = fork();
        assert_eq!(f.names(f.strict_up(0)), ["v", "w"]);
        assert!(f.strict_up(1).is_empty());
        assert_eq!(f.maximal_points(), PointSet::from_indices([1, 2]));
    }

    #[test]
    fn sizes_are_checked() {
        assert_eq!(Frame::new(0, []), Err(Error::EmptyFrame));
        assert_eq!(Frame::new(65, []), Err(Error::TooManyPoints(65)));
        assert_eq!(
            Frame::new(2, [(0, 2)]),
            Err(Error::PointOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn fork_frame_recognition() {
        assert!(fork().is_fork_frame());
        assert!(w_frame().is_fork_frame());
        assert!(cofork().is_fork_frame());
        assert!(!chain(3).is_fork_frame());
        assert!(!prongs(3).is_fork_frame());
    }
}
