//! Cluster poset, height / width / local width, and μ-sets of finite quasiorders.

use std::fmt;

use super::Frame;
use crate::bits::PointSet;
use crate::error::Result;

/// Quotient of a quasiorder by its clusters (classes of mutually related points).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterPoset {
    /// Clusters, ordered by least member.
    pub classes: Vec<PointSet>,
    /// `cluster_of[x]` is the index of the cluster containing point `x`.
    pub cluster_of: Vec<usize>,
    /// `above[i]` holds the clusters `j` with `i ≤ j` (reflexive).
    pub above: Vec<u64>,
}

impl ClusterPoset {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.above[i] & (1u64 << j) != 0
    }

    fn strictly_above(&self, i: usize) -> u64 {
        self.above[i] & !(1u64 << i)
    }

    /// Number of clusters in a longest chain.
    pub fn height(&self) -> usize {
        let mut memo = vec![0usize; self.len()];
        // Visiting in decreasing number of clusters above guarantees the
        // strict successors are done first.
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.above[i].count_ones());
        for &i in &order {
            let best = PointSet(self.strictly_above(i))
                .iter()
                .map(|j| memo[j])
                .max()
                .unwrap_or(0);
            memo[i] = best + 1;
        }
        memo.into_iter().max().unwrap_or(0)
    }

    /// Size of a largest antichain among the clusters in `subset`.
    ///
    /// Computed as `|subset|` minus a maximum matching in the strict-order
    /// bipartite graph (Dilworth / Fulkerson).
    pub fn width_of(&self, subset: u64) -> usize {
        let members: Vec<usize> = PointSet(subset).iter().collect();
        let mut match_right: Vec<Option<usize>> = vec![None; self.len()];
        let mut matching = 0;
        for &i in &members {
            let mut seen = 0u64;
            if self.augment(i, subset, &mut seen, &mut match_right) {
                matching += 1;
            }
        }
        members.len() - matching
    }

    fn augment(
        &self,
        i: usize,
        subset: u64,
        seen: &mut u64,
        match_right: &mut [Option<usize>],
    ) -> bool {
        for j in PointSet(self.strictly_above(i) & subset).iter() {
            if *seen & (1u64 << j) != 0 {
                continue;
            }
            *seen |= 1u64 << j;
            let free = match match_right[j] {
                None => true,
                Some(k) => self.augment(k, subset, seen, match_right),
            };
            if free {
                match_right[j] = Some(i);
                return true;
            }
        }
        false
    }

    pub fn width(&self) -> usize {
        self.width_of(crate::bits::full_mask(self.len()))
    }

    /// `max { w(↑x) }` over all clusters.
    pub fn local_width(&self) -> usize {
        (0..self.len())
            .map(|i| self.width_of(self.above[i]))
            .max()
            .unwrap_or(0)
    }

    /// Clusters with no cluster strictly above.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.strictly_above(i) == 0)
            .collect()
    }
}

/// Height, width and local width of a finite quasiorder, all measured on clusters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderStats {
    pub height: usize,
    pub width: usize,
    pub local_width: usize,
}

/// Unification type of a quasiorder or of an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnificationType {
    Unitary,
    Finitary,
    Infinitary,
    Nullary,
}

impl UnificationType {
    /// Type determined by the cardinality of a μ-set (`None`: no μ-set exists).
    pub fn from_mu_cardinality(card: Option<usize>) -> UnificationType {
        match card {
            Some(1) => UnificationType::Unitary,
            Some(0) | None => UnificationType::Nullary,
            Some(_) => UnificationType::Finitary,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            UnificationType::Unitary => "1",
            UnificationType::Finitary => "ω",
            UnificationType::Infinitary => "∞",
            UnificationType::Nullary => "0",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UnificationType::Unitary => "unitary",
            UnificationType::Finitary => "finitary",
            UnificationType::Infinitary => "infinitary",
            UnificationType::Nullary => "nullary",
        }
    }
}

impl fmt::Display for UnificationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// All dense antichains of a finite quasiorder.
///
/// A set is dense when every point is `≾` some member. In a finite quasiorder
/// the dense antichains are exactly the sets picking one point from every
/// maximal cluster, so they are represented by those clusters and expanded
/// lazily.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuSets {
    pub maximal_clusters: Vec<PointSet>,
}

impl MuSets {
    /// Common cardinality of every μ-set.
    pub fn cardinality(&self) -> usize {
        self.maximal_clusters.len()
    }

    /// Number of distinct μ-sets.
    pub fn count(&self) -> u128 {
        self.maximal_clusters
            .iter()
            .map(|c| c.len() as u128)
            .product()
    }

    pub fn kind(&self) -> UnificationType {
        UnificationType::from_mu_cardinality(
            (!self.maximal_clusters.is_empty()).then_some(self.cardinality()),
        )
    }

    /// The μ-sets in ascending lexicographic order of their member choices.
    pub fn iter(&self) -> impl Iterator<Item = PointSet> + '_ {
        let choices: Vec<Vec<usize>> = self
            .maximal_clusters
            .iter()
            .map(|c| c.iter().collect())
            .collect();
        let total = if choices.is_empty() { 0 } else { self.count() };
        (0..total).map(move |mut k| {
            let mut set = PointSet::EMPTY;
            for c in choices.iter().rev() {
                let len = c.len() as u128;
                set.insert(c[(k % len) as usize]);
                k /= len;
            }
            set
        })
    }
}

/// μ-sets of a finite quasiorder.
///
/// A set `M` is dense (complete) when every point `x` has some `m ∈ M` with
/// `x ≾ m`; reading "below" the other way round dualizes everything.
pub fn mu_sets(frame: &Frame) -> Result<MuSets> {
    let poset = frame.cluster_poset()?;
    let maximal_clusters = poset
        .maximal()
        .into_iter()
        .map(|i| poset.classes[i])
        .collect();
    Ok(MuSets { maximal_clusters })
}

impl Frame {
    pub fn cluster_poset(&self) -> Result<ClusterPoset> {
        self.require_quasiorder()?;
        let mut classes: Vec<PointSet> = Vec::new();
        let mut cluster_of = vec![usize::MAX; self.len()];
        for x in self.points() {
            if cluster_of[x] != usize::MAX {
                continue;
            }
            let class = self.succ(x) & self.pred(x);
            for y in class.iter() {
                cluster_of[y] = classes.len();
            }
            classes.push(class);
        }
        let above = classes
            .iter()
            .map(|c| {
                let rep = c.first().expect("clusters are non-empty");
                self.succ(rep)
                    .iter()
                    .fold(0u64, |acc, y| acc | (1u64 << cluster_of[y]))
            })
            .collect();
        Ok(ClusterPoset {
            classes,
            cluster_of,
            above,
        })
    }

    pub fn order_stats(&self) -> Result<OrderStats> {
        let poset = self.cluster_poset()?;
        Ok(OrderStats {
            height: poset.height(),
            width: poset.width(),
            local_width: poset.local_width(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::frame::{chain, fork, single_point, w_frame};

    #[test]
    fn stats_examples() {
        let s = |f: &Frame| {
            let st = f.order_stats().unwrap();
            (st.height, st.width, st.local_width)
        };
        assert_eq!(s(&fork()), (2, 2, 2));
        assert_eq!(s(&w_frame()), (2, 3, 2));
        assert_eq!(s(&single_point()), (1, 1, 1));
        assert_eq!(s(&chain(4)), (4, 1, 1));
    }

    #[test]
    fn stats_reject_non_quasiorders() {
        let f = Frame::new(2, [(0, 1)]).unwrap();
        assert_eq!(f.order_stats(), Err(Error::NotQuasiorder));
        assert_eq!(mu_sets(&f), Err(Error::NotQuasiorder));
    }

    #[test]
    fn clusters_collapse() {
        // {0,1} is a cluster below 2.
        let f = Frame::new(3, [(0, 1), (1, 0), (0, 2)])
            .unwrap()
            .reflexive_transitive_closure();
        let cp = f.cluster_poset().unwrap();
        assert_eq!(cp.classes, vec![PointSet::from_indices([0, 1]), PointSet::singleton(2)]);
        assert_eq!(f.order_stats().unwrap().height, 2);
        assert_eq!(f.order_stats().unwrap().width, 1);
    }

    #[test]
    fn mu_set_examples() {
        let f = fork();
        let mu = mu_sets(&f).unwrap();
        assert_eq!(mu.iter().collect::<Vec<_>>(), vec![PointSet::from_indices([1, 2])]);
        assert_eq!(mu.kind(), UnificationType::Finitary);

        let mu = mu_sets(&single_point()).unwrap();
        assert_eq!(mu.iter().collect::<Vec<_>>(), vec![PointSet::singleton(0)]);
        assert_eq!(mu.kind(), UnificationType::Unitary);

        let mu = mu_sets(&chain(2)).unwrap();
        assert_eq!(mu.iter().collect::<Vec<_>>(), vec![PointSet::singleton(1)]);
        assert_eq!(mu.kind(), UnificationType::Unitary);
    }

    #[test]
    fn mu_sets_pick_one_point_per_top_cluster() {
        // top cluster {1,2} above 0, plus isolated 3.
        let f = Frame::new(4, [(0, 1), (1, 2), (2, 1)])
            .unwrap()
            .reflexive_transitive_closure();
        let mu = mu_sets(&f).unwrap();
        let all: Vec<_> = mu.iter().collect();
        assert_eq!(
            all,
            vec![PointSet::from_indices([1, 3]), PointSet::from_indices([2, 3])]
        );
        assert!(all.iter().all(|s| s.len() == mu.cardinality()));
    }
}
