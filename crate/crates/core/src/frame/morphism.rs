//! Point maps between frames, bounded-morphism checks and exhaustive search.

use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use super::Frame;
use crate::bits::PointSet;
use crate::error::{Error, Result};

/// A total map from the points of `source` to the points of `target`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: Arc<Frame>,
    target: Arc<Frame>,
    map: Vec<usize>,
}

impl Morphism {
    pub fn new(source: &Frame, target: &Frame, map: Vec<usize>) -> Result<Morphism> {
        Morphism::from_shared(Arc::new(source.clone()), Arc::new(target.clone()), map)
    }

    pub fn from_shared(source: Arc<Frame>, target: Arc<Frame>, map: Vec<usize>) -> Result<Morphism> {
        if map.len() != source.len() {
            return Err(Error::InvalidMorphism(format!(
                "map has {} entries but the source has {} points",
                map.len(),
                source.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.len()) {
            return Err(Error::PointOutOfRange {
                index: bad,
                n: target.len(),
            });
        }
        Ok(Morphism { source, target, map })
    }

    pub fn identity(frame: &Frame) -> Morphism {
        let f = Arc::new(frame.clone());
        Morphism {
            source: f.clone(),
            target: f,
            map: frame.points().collect(),
        }
    }

    pub fn source(&self) -> &Frame {
        &self.source
    }

    pub fn target(&self) -> &Frame {
        &self.target
    }

    pub fn source_shared(&self) -> &Arc<Frame> {
        &self.source
    }

    pub fn target_shared(&self) -> &Arc<Frame> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn image_of(&self, s: PointSet) -> PointSet {
        s.iter().map(|x| self.map[x]).collect()
    }

    pub fn image(&self) -> PointSet {
        self.map.iter().copied().collect()
    }

    /// Source points mapped into `s`.
    pub fn preimage(&self, s: PointSet) -> PointSet {
        self.source.points().filter(|&x| s.contains(self.map[x])).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.map.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.image() == self.target.universe()
    }

    /// Preserves the relation and satisfies the back condition.
    pub fn is_bounded(&self) -> bool {
        self.source
            .points()
            .all(|x| self.image_of(self.source.succ(x)) == self.target.succ(self.map[x]))
    }

    /// `then ∘ self`.
    pub fn compose(&self, then: &Morphism) -> Result<Morphism> {
        if *self.target != *then.source {
            return Err(Error::InvalidMorphism(
                "composition of morphisms with mismatched frames".into(),
            ));
        }
        Ok(Morphism {
            source: self.source.clone(),
            target: then.target.clone(),
            map: self.map.iter().map(|&y| then.map[y]).collect(),
        })
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .map
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}↦{}", self.source.label(x), self.target.label(y)))
            .collect();
        write!(f, "Morphism({})", parts.join(", "))
    }
}

/// Is `m` a bounded morphism: `x R y ⇒ m(x) S m(y)`, and
/// `m(x) S z ⇒ ∃y (x R y ∧ m(y) = z)`?
pub fn is_bounded_morphism(m: &Morphism) -> bool {
    m.is_bounded()
}

/// Statistics of a finished (or aborted) search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Candidate assignments tried.
    pub nodes: u64,
    /// Solutions passed to the visitor.
    pub found: usize,
    /// False if the visitor stopped the search early.
    pub complete: bool,
}

/// Exhaustive backtracking search for bounded morphisms `source → target`.
///
/// Source points are assigned in ascending index order and candidates are
/// tried in ascending order, so solutions are produced in lexicographic order
/// of their maps. The forth condition is checked incrementally; the back
/// condition for a point is checked as soon as it and all its successors are
/// assigned.
#[derive(Clone, Debug)]
pub struct MorphismSearch<'a> {
    source: &'a Frame,
    target: &'a Frame,
    domains: Vec<PointSet>,
    injective: bool,
    surjective: bool,
    budget: Option<u64>,
}

impl<'a> MorphismSearch<'a> {
    pub fn new(source: &'a Frame, target: &'a Frame) -> Self {
        MorphismSearch {
            source,
            target,
            domains: vec![target.universe(); source.len()],
            injective: false,
            surjective: false,
            budget: None,
        }
    }

    pub fn injective(mut self, yes: bool) -> Self {
        self.injective = yes;
        self
    }

    pub fn surjective(mut self, yes: bool) -> Self {
        self.surjective = yes;
        self
    }

    /// Abort with [`Error::SearchBudgetExceeded`] after this many candidate steps.
    pub fn budget(mut self, steps: u64) -> Self {
        self.budget = Some(steps);
        self
    }

    /// Only allow images in `allowed` for source point `x`.
    pub fn restrict(mut self, x: usize, allowed: PointSet) -> Self {
        self.domains[x] &= allowed;
        self
    }

    pub fn fix(self, x: usize, y: usize) -> Self {
        self.restrict(x, PointSet::singleton(y))
    }

    /// Images must agree on the number of successors and predecessors.
    /// Only sound for searches for isomorphisms.
    pub(crate) fn degree_filtered(mut self) -> Self {
        for x in self.source.points() {
            let key = (self.source.succ(x).len(), self.source.pred(x).len());
            let ok: PointSet = self
                .target
                .points()
                .filter(|&y| (self.target.succ(y).len(), self.target.pred(y).len()) == key)
                .collect();
            self.domains[x] &= ok;
        }
        self
    }

    pub fn for_each<F>(&self, mut visit: F) -> Result<SearchOutcome>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let n = self.source.len();
        let mut outcome = SearchOutcome {
            complete: true,
            ..SearchOutcome::default()
        };
        if self.injective && n > self.target.len() {
            return Ok(outcome);
        }
        if self.surjective && n < self.target.len() {
            return Ok(outcome);
        }
        // completes_at[k]: points whose successors are all assigned once point k is.
        let mut completes_at = vec![Vec::new(); n];
        for z in 0..n {
            let last = (self.source.succ(z) | PointSet::singleton(z))
                .iter()
                .max()
                .expect("non-empty");
            completes_at[last].push(z);
        }
        let mut state = State {
            map: vec![usize::MAX; n],
            used: PointSet::EMPTY,
            hits: vec![0; self.target.len()],
            hit: PointSet::EMPTY,
            completes_at,
        };
        let flow = self.descend(0, &mut state, &mut outcome, &mut visit)?;
        outcome.complete = flow.is_continue();
        Ok(outcome)
    }

    fn descend<F>(
        &self,
        x: usize,
        st: &mut State,
        out: &mut SearchOutcome,
        visit: &mut F,
    ) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let n = self.source.len();
        if x == n {
            if self.surjective && st.hit != self.target.universe() {
                return Ok(ControlFlow::Continue(()));
            }
            out.found += 1;
            return Ok(visit(&st.map));
        }
        let mut candidates = self.domains[x];
        if self.injective {
            candidates = candidates - st.used;
        }
        let earlier = PointSet::full(x);
        let succ_before = self.source.succ(x) & earlier;
        let pred_before = self.source.pred(x) & earlier;
        let reflexive = self.source.rel(x, x);
        for c in candidates.iter() {
            out.nodes += 1;
            if let Some(b) = self.budget {
                if out.nodes > b {
                    return Err(Error::SearchBudgetExceeded(b));
                }
            }
            if reflexive && !self.target.rel(c, c) {
                continue;
            }
            let tsucc = self.target.succ(c);
            let tpred = self.target.pred(c);
            if succ_before.iter().any(|y| !tsucc.contains(st.map[y]))
                || pred_before.iter().any(|y| !tpred.contains(st.map[y]))
            {
                continue;
            }
            st.map[x] = c;
            // back condition for every point whose up-set is now fully assigned
            let back_ok = st.completes_at[x].iter().all(|&z| {
                let img: PointSet = self.source.succ(z).iter().map(|y| st.map[y]).collect();
                self.target.succ(st.map[z]).is_subset(img)
            });
            if !back_ok {
                continue;
            }
            st.used.insert(c);
            st.hits[c] += 1;
            st.hit.insert(c);
            let remaining = n - x - 1;
            let prune = self.surjective && (self.target.universe() - st.hit).len() > remaining;
            let flow = if prune {
                ControlFlow::Continue(())
            } else {
                self.descend(x + 1, st, out, visit)?
            };
            st.hits[c] -= 1;
            if st.hits[c] == 0 {
                st.hit.remove(c);
                st.used.remove(c);
            }
            if flow.is_break() {
                return Ok(flow);
            }
        }
        st.map[x] = usize::MAX;
        Ok(ControlFlow::Continue(()))
    }

    /// Lexicographically least solution.
    pub fn first(&self) -> Result<Option<Vec<usize>>> {
        let mut found = None;
        self.for_each(|m| {
            found = Some(m.to_vec());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    pub fn all(&self) -> Result<Vec<Vec<usize>>> {
        let mut found = Vec::new();
        self.for_each(|m| {
            found.push(m.to_vec());
            ControlFlow::Continue(())
        })?;
        Ok(found)
    }

    pub fn count(&self) -> Result<usize> {
        Ok(self.for_each(|_| ControlFlow::Continue(()))?.found)
    }
}

struct State {
    map: Vec<usize>,
    used: PointSet,
    hits: Vec<u32>,
    hit: PointSet,
    completes_at: Vec<Vec<usize>>,
}

impl Frame {
    /// An isomorphism `self → other` as a point map, if one exists.
    pub fn find_isomorphism(&self, other: &Frame) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.edge_count() != other.edge_count() {
            return None;
        }
        MorphismSearch::new(self, other)
            .injective(true)
            .surjective(true)
            .degree_filtered()
            .first()
            .expect("unbudgeted search cannot fail")
    }

    pub fn is_isomorphic(&self, other: &Frame) -> bool {
        self.find_isomorphism(other).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{chain, fork, single_point, w_frame};

    #[test]
    fn bounded_examples() {
        let f = fork();
        assert!(Morphism::identity(&f).is_bounded());

        let c = chain(2);
        let p = single_point();
        assert!(Morphism::new(&c, &p, vec![0, 0]).unwrap().is_bounded());

        // u↦c0, v↦c1, w↦c0: back condition fails at w
        let m = Morphism::new(&f, &c, vec![0, 1, 0]).unwrap();
        assert!(!m.is_bounded());
    }

    #[test]
    fn morphism_validation() {
        let f = fork();
        assert!(Morphism::new(&f, &f, vec![0, 1]).is_err());
        assert!(Morphism::new(&f, &f, vec![0, 1, 3]).is_err());
    }

    #[test]
    fn search_finds_generated_embeddings_of_fork_in_w() {
        let f = fork();
        let w = w_frame();
        let embeddings = MorphismSearch::new(&f, &w).injective(true).all().unwrap();
        // ↑u and ↑u', each with the prongs in either order
        assert_eq!(embeddings.len(), 4);
        for e in embeddings {
            let m = Morphism::new(&f, &w, e).unwrap();
            assert!(m.is_bounded() && m.is_injective());
        }
    }

    #[test]
    fn search_respects_fixed_points_and_budget() {
        let w = w_frame();
        let f = fork();
        let found = MorphismSearch::new(&w, &f).fix(0, 0).all().unwrap();
        assert!(found.iter().all(|m| m[0] == 0));
        let r = MorphismSearch::new(&w, &f).budget(2).all();
        assert_eq!(r, Err(Error::SearchBudgetExceeded(2)));
    }

    #[test]
    fn isomorphism_of_relabelled_w() {
        let w = w_frame();
        let p = w.permute(&[4, 2, 0, 1, 3]);
        let iso = w.find_isomorphism(&p).unwrap();
        let m = Morphism::new(&w, &p, iso).unwrap();
        assert!(m.is_bounded() && m.is_injective() && m.is_surjective());
        assert!(!fork().is_isomorphic(&crate::frame::cofork()));
    }
}
