//! Homomorphisms, closed ideals and subalgebras.
//!
//! A homomorphism `h: A → B` of finite closure algebras is stored as its dual
//! bounded morphism `cf(B) → cf(A)`; then `h(x)` is the preimage of `x`.

use std::fmt;
use std::sync::Arc;

use super::ClosureAlgebra;
use crate::bits::{Element, PointSet};
use crate::error::{Error, Result};
use crate::frame::{Frame, Morphism, MorphismSearch};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgHom {
    dual: Morphism,
}

impl AlgHom {
    /// Wraps a bounded morphism `cf(B) → cf(A)` as a homomorphism `A → B`.
    pub fn new(dual: Morphism) -> Result<AlgHom> {
        if !dual.is_bounded() {
            return Err(Error::InvalidMorphism("dual map is not bounded".into()));
        }
        Ok(AlgHom { dual })
    }

    pub fn identity(a: &ClosureAlgebra) -> AlgHom {
        let f = a.frame_shared().clone();
        let dual = Morphism::from_shared(f.clone(), f, a.atom_frame().points().collect())
            .expect("identity map");
        AlgHom { dual }
    }

    pub fn dual(&self) -> &Morphism {
        &self.dual
    }

    /// Atom frame of the domain.
    pub fn source_frame(&self) -> &Frame {
        self.dual.target()
    }

    /// Atom frame of the codomain.
    pub fn target_frame(&self) -> &Frame {
        self.dual.source()
    }

    pub fn source(&self) -> ClosureAlgebra {
        algebra_of(self.dual.target_shared())
    }

    pub fn target(&self) -> ClosureAlgebra {
        algebra_of(self.dual.source_shared())
    }

    pub fn apply(&self, x: Element) -> Element {
        self.dual.preimage(x.into()).into()
    }

    pub fn is_injective(&self) -> bool {
        self.dual.is_surjective()
    }

    pub fn is_surjective(&self) -> bool {
        self.dual.is_injective()
    }

    /// `h⁻¹(0)`, generated by the atoms outside the image of the dual.
    pub fn kernel(&self) -> ClosedIdeal {
        let missed = self.source_frame().universe() - self.dual.image();
        ClosedIdeal {
            generator: missed.into(),
        }
    }

    /// `then ∘ self`.
    pub fn compose(&self, then: &AlgHom) -> Result<AlgHom> {
        Ok(AlgHom {
            dual: then.dual.compose(&self.dual)?,
        })
    }
}

fn algebra_of(frame: &Arc<Frame>) -> ClosureAlgebra {
    if frame.is_empty() {
        ClosureAlgebra::trivial()
    } else {
        ClosureAlgebra::from_shared(frame.clone()).expect("homomorphisms join quasiorders")
    }
}

impl fmt::Debug for AlgHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgHom(dual: {:?})", self.dual)
    }
}

/// A closed ideal `↓g` for a closed element `g`; it is the kernel of the
/// quotient map and determined by its generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClosedIdeal {
    generator: Element,
}

impl ClosedIdeal {
    pub fn new(a: &ClosureAlgebra, generator: Element) -> Result<ClosedIdeal> {
        if !generator.is_subset(a.top()) || !a.is_closed(generator) {
            return Err(Error::NotClosed);
        }
        Ok(ClosedIdeal { generator })
    }

    pub fn generator(&self) -> Element {
        self.generator
    }

    pub fn contains(&self, x: Element) -> bool {
        x.is_subset(self.generator)
    }

    pub fn is_subset(&self, other: &ClosedIdeal) -> bool {
        self.generator.is_subset(other.generator)
    }

    pub fn is_proper(&self, a: &ClosureAlgebra) -> bool {
        self.generator != a.top()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomKind {
    Any,
    Surjective,
    Injective,
    Bijective,
}

/// All homomorphisms `a → b` of the requested kind, in lexicographic order of
/// their dual point maps.
pub fn hom_search(a: &ClosureAlgebra, b: &ClosureAlgebra, kind: HomKind) -> Vec<AlgHom> {
    let (inj, surj) = match kind {
        HomKind::Any => (false, false),
        HomKind::Surjective => (true, false),
        HomKind::Injective => (false, true),
        HomKind::Bijective => (true, true),
    };
    let src = b.frame_shared();
    let tgt = a.frame_shared();
    let maps = MorphismSearch::new(src, tgt)
        .injective(inj)
        .surjective(surj)
        .all()
        .expect("unbudgeted search cannot fail");
    maps.into_iter()
        .map(|map| AlgHom {
            dual: Morphism::from_shared(src.clone(), tgt.clone(), map).expect("search output"),
        })
        .collect()
}

/// A subalgebra with its inclusion map. Its atoms are the `blocks` of the
/// atoms of the ambient algebra.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub algebra: ClosureAlgebra,
    pub blocks: Vec<Element>,
    pub embedding: AlgHom,
}

/// Every subalgebra of `a`, including `a` itself and the two-element one.
///
/// Subalgebras correspond to partitions of the atoms whose blocks have
/// closures that are unions of blocks.
pub fn subalgebras(a: &ClosureAlgebra) -> Vec<Subalgebra> {
    let n = a.atom_count();
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    partitions(&mut assign, 1, 1, &mut |assign, blocks| {
        let mut sets = vec![Element::EMPTY; blocks];
        for (x, &k) in assign.iter().enumerate() {
            sets[k].insert(x);
        }
        let closed = sets.iter().all(|&s| {
            let fs = a.closure(s);
            sets.iter().all(|&t| t.is_subset(fs) || !t.intersects(fs))
        });
        if closed {
            out.push(build_subalgebra(a, assign, sets));
        }
    });
    out
}

/// Restricted growth strings: `assign[i] ≤ 1 + max(assign[..i])`.
fn partitions(assign: &mut [usize], i: usize, blocks: usize, visit: &mut impl FnMut(&[usize], usize)) {
    if i == assign.len() {
        visit(assign, blocks);
        return;
    }
    for k in 0..=blocks {
        assign[i] = k;
        partitions(assign, i + 1, blocks.max(k + 1), visit);
    }
}

fn build_subalgebra(a: &ClosureAlgebra, assign: &[usize], blocks: Vec<Element>) -> Subalgebra {
    let frame = a.atom_frame();
    let rows: Vec<PointSet> = blocks
        .iter()
        .map(|&s| {
            let up = frame.image(s.into());
            (0..blocks.len())
                .filter(|&j| PointSet::from(blocks[j]).intersects(up))
                .collect()
        })
        .collect();
    let labels: Vec<String> = blocks
        .iter()
        .map(|&s| frame.names(s.into()).join("+"))
        .collect();
    let sub_frame = Arc::new(
        Frame::from_rows(rows)
            .and_then(|f| f.with_labels(labels))
            .expect("blocks are disjoint and non-empty"),
    );
    let algebra = ClosureAlgebra::from_shared(sub_frame.clone()).expect("quotient of a quasiorder");
    let dual = Morphism::from_shared(a.frame_shared().clone(), sub_frame, assign.to_vec())
        .expect("block indices are in range");
    let embedding = AlgHom::new(dual).expect("blocks closed under f give a bounded map");
    Subalgebra {
        algebra,
        blocks,
        embedding,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::cm;
    use crate::frame::{fork, single_point, w_frame};

    /// Is `h` a homomorphism, checked element by element?
    fn preserves_operations(a: &ClosureAlgebra, b: &ClosureAlgebra, h: &AlgHom) -> bool {
        a.elements().all(|x| {
            h.apply(a.complement(x)) == b.complement(h.apply(x))
                && h.apply(a.closure(x)) == b.closure(h.apply(x))
                && a.elements().all(|y| h.apply(x | y) == h.apply(x) | h.apply(y))
        })
    }

    #[test]
    fn homs_from_fork_to_two() {
        let bf = cm(&fork()).unwrap();
        let two = ClosureAlgebra::two();
        let homs = hom_search(&bf, &two, HomKind::Any);
        // ultrafilters at the maximal points v and w
        assert_eq!(homs.len(), 2);
        for h in &homs {
            assert!(h.is_surjective());
            assert!(preserves_operations(&bf, &two, h));
            assert_eq!(h.kernel().generator().len(), 2);
        }
        assert!(hom_search(&bf, &two, HomKind::Injective).is_empty());
        assert_eq!(hom_search(&two, &bf, HomKind::Injective).len(), 1);
    }

    #[test]
    fn every_search_result_is_a_homomorphism() {
        let bw = cm(&w_frame()).unwrap();
        let bf = cm(&fork()).unwrap();
        let homs = hom_search(&bw, &bf, HomKind::Any);
        assert!(!homs.is_empty());
        for h in &homs {
            assert!(preserves_operations(&bw, &bf, h));
        }
        let surj = hom_search(&bw, &bf, HomKind::Surjective);
        // two roots, times the swap of the fork's prongs
        assert_eq!(surj.len(), 4);
        assert_eq!(
            hom_search(&bw, &bw, HomKind::Bijective).len(),
            2,
            "identity and the left-right mirror"
        );
    }

    #[test]
    fn composition_matches_pointwise() {
        let bw = cm(&w_frame()).unwrap();
        let bf = cm(&fork()).unwrap();
        let two = ClosureAlgebra::two();
        for h in hom_search(&bw, &bf, HomKind::Any) {
            for u in hom_search(&bf, &two, HomKind::Any) {
                let c = h.compose(&u).unwrap();
                assert!(bw.elements().all(|x| c.apply(x) == u.apply(h.apply(x))));
            }
        }
        let id = AlgHom::identity(&bw);
        assert!(bw.elements().all(|x| id.apply(x) == x));
    }

    #[test]
    fn closed_ideals() {
        let bf = cm(&fork()).unwrap();
        let u = Element::singleton(0);
        let i = ClosedIdeal::new(&bf, u).unwrap();
        assert!(i.contains(u) && !i.contains(Element::singleton(1)));
        assert_eq!(ClosedIdeal::new(&bf, Element::singleton(1)), Err(Error::NotClosed));
        assert!(i.is_proper(&bf));
    }

    #[test]
    fn subalgebras_of_small_algebras() {
        let two = ClosureAlgebra::two();
        assert_eq!(subalgebras(&two).len(), 1);
        let bf = cm(&fork()).unwrap();
        let subs = subalgebras(&bf);
        for s in &subs {
            assert!(s.embedding.is_injective());
            assert!(preserves_operations(&s.algebra, &bf, &s.embedding));
        }
        let sizes: Vec<u128> = subs.iter().map(|s| s.algebra.size()).collect();
        assert!(sizes.contains(&2) && sizes.contains(&8));
        // brute-force oracle: count Boolean subalgebras closed under f
        assert_eq!(subs.len(), count_closed_subalgebras(&bf));
        let bw = cm(&w_frame()).unwrap();
        assert_eq!(subalgebras(&bw).len(), count_closed_subalgebras(&bw));
    }

    /// Counts families of elements that contain 0, are closed under −, +, f.
    fn count_closed_subalgebras(a: &ClosureAlgebra) -> usize {
        let elems: Vec<Element> = a.elements().collect();
        let m = elems.len();
        assert!(m <= 32);
        let mut count = 0;
        // subsets of the element set are too many for 32 elements, so grow
        // the generated subalgebra from every set of at most 3 generators
        let mut seen = std::collections::HashSet::new();
        for i in 0..m {
            for j in i..m {
                for k in j..m {
                    let gen = generate(a, &[elems[i], elems[j], elems[k]]);
                    if seen.insert(gen) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    fn generate(a: &ClosureAlgebra, gens: &[Element]) -> u64 {
        let mut set: u64 = 1 | (1u64 << a.top().bits());
        for g in gens {
            set |= 1u64 << g.bits();
        }
        loop {
            let members: Vec<Element> = (0..64).filter(|i| set >> i & 1 == 1).map(Element).collect();
            let mut next = set;
            for &x in &members {
                next |= 1u64 << a.complement(x).bits();
                next |= 1u64 << a.closure(x).bits();
                for &y in &members {
                    next |= 1u64 << (x | y).bits();
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    }

    #[test]
    fn single_point_is_rigid() {
        let two = cm(&single_point()).unwrap();
        assert_eq!(hom_search(&two, &two, HomKind::Any).len(), 1);
    }
}
