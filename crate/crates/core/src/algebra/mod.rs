//! Finite closure algebras, represented by their atom frames.
//!
//! Every finite closure algebra is the complex algebra of its atom frame, so a
//! [`ClosureAlgebra`] stores the quasiorder on its atoms and the derived
//! closure of each atom. Elements are sets of atoms ([`Element`]); the Boolean
//! operations are set operations and the closure of an element is the union
//! of the closures of its atoms.

mod hom;

pub use hom::{hom_search, subalgebras, AlgHom, ClosedIdeal, HomKind, Subalgebra};

use std::fmt;
use std::sync::Arc;

use crate::bits::{Element, PointSet};
use crate::error::{Error, Result};
use crate::frame::{Frame, Morphism};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClosureAlgebra {
    frame: Arc<Frame>,
    /// `f(a)` for every atom `a`: all atoms `b` with `b ≾ a`.
    atom_closure: Vec<Element>,
}

/// The complex algebra `⟨2^W, ◇_R⟩` of a quasiorder.
pub fn cm(frame: &Frame) -> Result<ClosureAlgebra> {
    ClosureAlgebra::from_shared(Arc::new(frame.clone()))
}

/// The atom frame of a finite closure algebra: `a ≾ b ⇔ a ≤ f(b)`.
pub fn cf(algebra: &ClosureAlgebra) -> Frame {
    let n = algebra.atom_count();
    let rows = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| algebra.atom_closure[b].contains(a))
                .collect()
        })
        .collect();
    Frame::from_succ_unchecked(rows, Some(algebra.frame.labels().to_vec()))
}

impl ClosureAlgebra {
    pub fn from_shared(frame: Arc<Frame>) -> Result<ClosureAlgebra> {
        frame.require_quasiorder()?;
        let atom_closure = frame.points().map(|a| frame.pred(a).into()).collect();
        Ok(ClosureAlgebra {
            frame,
            atom_closure,
        })
    }

    /// Builds an algebra from the closure of each atom, extended additively.
    ///
    /// The table must describe a closure operator: every atom lies below its
    /// closure and closures are idempotent.
    pub fn from_closure_table<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        table: Vec<Element>,
    ) -> Result<ClosureAlgebra> {
        let n = table.len();
        let universe = Element::full(n);
        for (a, &fa) in table.iter().enumerate() {
            if !fa.contains(a) || !fa.is_subset(universe) {
                return Err(Error::NotQuasiorder);
            }
            let ffa = fa.iter().fold(Element::EMPTY, |acc, b| acc | table[b]);
            if ffa != fa {
                return Err(Error::NotQuasiorder);
            }
        }
        let frame = Frame::from_fn(n, |a, b| table[b].contains(a))?.with_labels(labels)?;
        ClosureAlgebra::from_shared(Arc::new(frame))
    }

    /// The two-element algebra, with the identity as closure.
    pub fn two() -> ClosureAlgebra {
        cm(&crate::frame::single_point()).expect("one reflexive point")
    }

    /// The one-element algebra `0 = 1`.
    pub fn trivial() -> ClosureAlgebra {
        ClosureAlgebra {
            frame: Arc::new(Frame::empty()),
            atom_closure: Vec::new(),
        }
    }

    pub fn atom_frame(&self) -> &Frame {
        &self.frame
    }

    pub fn frame_shared(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn atom_count(&self) -> usize {
        self.atom_closure.len()
    }

    /// Number of elements, `2^atoms`.
    pub fn size(&self) -> u128 {
        1u128 << self.atom_count()
    }

    pub fn is_trivial(&self) -> bool {
        self.atom_count() == 0
    }

    pub fn top(&self) -> Element {
        Element::full(self.atom_count())
    }

    pub fn bottom(&self) -> Element {
        Element::EMPTY
    }

    pub fn atom(&self, a: usize) -> Element {
        Element::singleton(a)
    }

    pub fn complement(&self, x: Element) -> Element {
        x.complement(self.atom_count())
    }

    #[inline]
    pub fn closure(&self, x: Element) -> Element {
        x.iter()
            .fold(Element::EMPTY, |acc, a| acc | self.atom_closure[a])
    }

    /// `f^∂(x) = −f(−x)`.
    pub fn interior(&self, x: Element) -> Element {
        self.complement(self.closure(self.complement(x)))
    }

    pub fn is_closed(&self, x: Element) -> bool {
        self.closure(x) == x
    }

    pub fn is_open(&self, x: Element) -> bool {
        self.interior(x) == x
    }

    pub fn is_clopen(&self, x: Element) -> bool {
        self.is_closed(x) && self.is_open(x)
    }

    /// All elements in ascending bit order. Only sensible for small algebras.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        assert!(self.atom_count() < 32, "refusing to enumerate 2^{} elements", self.atom_count());
        (0..1u64 << self.atom_count()).map(Element)
    }

    /// Closed elements, ascending. They are the down-closed sets of atoms.
    pub fn closed_elements(&self) -> Vec<Element> {
        self.elements().filter(|&x| self.is_closed(x)).collect()
    }

    pub fn open_elements(&self) -> Vec<Element> {
        self.elements().filter(|&x| self.is_open(x)).collect()
    }

    /// Join of the atoms `a` with `a < f(a)`.
    pub fn non_closed_atoms(&self) -> Element {
        (0..self.atom_count())
            .filter(|&a| self.atom_closure[a] != Element::singleton(a))
            .collect()
    }

    /// `{a,b}` using atom labels.
    pub fn format(&self, x: Element) -> String {
        self.frame.format_set(x.into())
    }

    /// Parses `{a,b}`, `{}`, `0` or `1`.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let t = text.trim();
        match t {
            "0" => return Ok(self.bottom()),
            "1" => return Ok(self.top()),
            _ => {}
        }
        let inner = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::parse(1, 1, format!("expected `{{…}}`, got `{t}`")))?;
        let mut x = Element::EMPTY;
        for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let a = self
                .frame
                .index_of(name)
                .ok_or_else(|| Error::parse(1, 1, format!("unknown atom `{name}`")))?;
            x.insert(a);
        }
        Ok(x)
    }

    /// Exhaustively checks `f(0)=0`, additivity, `x ≤ f(x)` and idempotence.
    pub fn satisfies_closure_laws(&self) -> bool {
        if !self.closure(Element::EMPTY).is_empty() {
            return false;
        }
        let elems: Vec<Element> = self.elements().collect();
        elems.iter().all(|&x| {
            let fx = self.closure(x);
            x.is_subset(fx) && self.closure(fx) == fx
        }) && elems
            .iter()
            .all(|&x| elems.iter().all(|&y| self.closure(x | y) == self.closure(x) | self.closure(y)))
    }

    /// `A` is directly indecomposable iff `0` and `1` are its only clopen
    /// elements, iff its atom frame is connected.
    pub fn is_directly_indecomposable(&self) -> Result<bool> {
        if self.is_trivial() {
            return Err(Error::TrivialAlgebra);
        }
        Ok(self.frame.is_connected())
    }

    /// Relative algebra `↓b` for a closed `b ≠ 0`.
    ///
    /// Join, meet and the closure are inherited and complements are relative
    /// to `b`. The projection `x ↦ b·x` is returned as well when it is a
    /// homomorphism, which is the case exactly when `b` is also open.
    pub fn relative_algebra(&self, b: Element) -> Result<RelativeAlgebra> {
        if b.is_empty() {
            return Err(Error::ZeroBound);
        }
        if !self.is_closed(b) {
            return Err(Error::NotClosed);
        }
        let (frame, map) = self.frame.induced(b.into());
        let frame = Arc::new(frame);
        let algebra = ClosureAlgebra::from_shared(frame.clone())?;
        let projection = if self.is_open(b) {
            let dual = Morphism::from_shared(frame, self.frame.clone(), map)?;
            Some(AlgHom::new(dual)?)
        } else {
            None
        };
        Ok(RelativeAlgebra {
            algebra,
            projection,
        })
    }

    /// Quotient by a closed ideal, realized on the generated subframe of atoms
    /// outside the ideal, with the canonical surjection.
    pub fn quotient(&self, ideal: &ClosedIdeal) -> (ClosureAlgebra, AlgHom) {
        let rest = self.complement(ideal.generator());
        let (frame, map) = self.frame.induced(rest.into());
        let frame = Arc::new(frame);
        let algebra = if frame.is_empty() {
            ClosureAlgebra::trivial()
        } else {
            ClosureAlgebra::from_shared(frame.clone()).expect("subframe of a quasiorder")
        };
        let dual = Morphism::from_shared(algebra.frame.clone(), self.frame.clone(), map)
            .expect("indices come from the induced subframe");
        let hom = AlgHom::new(dual).expect("inclusion of an up-closed set is bounded");
        (algebra, hom)
    }

    /// Direct product; its atom frame is the disjoint union.
    pub fn product(&self, other: &ClosureAlgebra) -> Result<ClosureAlgebra> {
        if self.is_trivial() {
            return Ok(other.clone());
        }
        if other.is_trivial() {
            return Ok(self.clone());
        }
        let frame = self.frame.disjoint_union(&other.frame)?;
        ClosureAlgebra::from_shared(Arc::new(frame))
    }

    /// An isomorphism `self → other`, found as an isomorphism of atom frames.
    pub fn isomorphism_to(&self, other: &ClosureAlgebra) -> Option<AlgHom> {
        let map = other.frame.find_isomorphism(&self.frame)?;
        let dual = Morphism::from_shared(other.frame.clone(), self.frame.clone(), map).ok()?;
        AlgHom::new(dual).ok()
    }

    pub fn is_isomorphic(&self, other: &ClosureAlgebra) -> bool {
        self.isomorphism_to(other).is_some()
    }
}

/// Result of [`ClosureAlgebra::relative_algebra`].
#[derive(Clone, Debug)]
pub struct RelativeAlgebra {
    pub algebra: ClosureAlgebra,
    pub projection: Option<AlgHom>,
}

impl fmt::Debug for ClosureAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.atom_count())
            .map(|a| {
                format!(
                    "f({})={}",
                    self.frame.label(a),
                    self.format(self.atom_closure[a])
                )
            })
            .collect();
        write!(f, "ClosureAlgebra[{}]", parts.join(", "))
    }
}

impl From<&ClosureAlgebra> for PointSet {
    fn from(a: &ClosureAlgebra) -> PointSet {
        a.frame.universe()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{fork, single_point, w_frame};

    fn el(a: &ClosureAlgebra, s: &str) -> Element {
        a.parse_element(s).unwrap()
    }

    #[test]
    fn fork_algebra_has_five_closed_elements() {
        let bf = cm(&fork()).unwrap();
        assert_eq!(bf.size(), 8);
        let closed: Vec<String> = bf.closed_elements().iter().map(|&x| bf.format(x)).collect();
        assert_eq!(closed, ["{}", "{u}", "{u,v}", "{u,w}", "{u,v,w}"]);
    }

    #[test]
    fn two_has_identity_closure() {
        let two = ClosureAlgebra::two();
        assert_eq!(two.size(), 2);
        assert!(two.elements().all(|x| two.closure(x) == x));
        assert_eq!(cf(&two), single_point());
    }

    #[test]
    fn w_atom_closures_match_table() {
        let bw = cm(&w_frame()).unwrap();
        assert_eq!(bw.size(), 32);
        let expect = [
            ("{u}", "{u}"),
            ("{u'}", "{u'}"),
            ("{t}", "{u,t}"),
            ("{v}", "{u,u',v}"),
            ("{w}", "{u',w}"),
        ];
        for (x, fx) in expect {
            assert_eq!(bw.closure(el(&bw, x)), el(&bw, fx), "f({x})");
        }
    }

    #[test]
    fn interior_and_closure_in_fork() {
        let bf = cm(&fork()).unwrap();
        let v = el(&bf, "{v}");
        assert_eq!(bf.interior(v), v);
        assert!(bf.is_open(v));
        assert_eq!(bf.closure(v), el(&bf, "{u,v}"));
        assert_eq!(bf.closure(bf.bottom()), bf.bottom());
        assert_eq!(bf.interior(bf.top()), bf.top());
    }

    #[test]
    fn canonical_frame_round_trip() {
        for f in [fork(), w_frame(), single_point()] {
            let a = cm(&f).unwrap();
            assert_eq!(cf(&a), f);
        }
    }

    #[test]
    fn closure_table_construction() {
        let bw = cm(&w_frame()).unwrap();
        let table = (0..5).map(|a| bw.closure(Element::singleton(a))).collect();
        let again = ClosureAlgebra::from_closure_table(["u", "u'", "t", "v", "w"], table).unwrap();
        assert_eq!(again, bw);
        // not increasing
        let bad = ClosureAlgebra::from_closure_table(["a", "b"], vec![Element(2), Element(2)]);
        assert_eq!(bad, Err(Error::NotQuasiorder));
        // not idempotent: f(a) = {a,b}, f(b) = {b,c}
        let bad = ClosureAlgebra::from_closure_table(
            ["a", "b", "c"],
            vec![Element(0b011), Element(0b110), Element(0b100)],
        );
        assert_eq!(bad, Err(Error::NotQuasiorder));
    }

    #[test]
    fn relative_algebra_examples() {
        let bw = cm(&w_frame()).unwrap();
        let fv = bw.closure(el(&bw, "{v}"));
        let rel = bw.relative_algebra(fv).unwrap();
        assert_eq!(rel.algebra.atom_count(), 3);
        assert!(rel.algebra.satisfies_closure_laws());
        // f(v) is closed but not open, so x ↦ f(v)·x does not commute with f
        assert!(rel.projection.is_none());

        let top = bw.relative_algebra(bw.top()).unwrap();
        assert_eq!(top.algebra, bw);
        let p = top.projection.unwrap();
        assert!(bw.elements().all(|x| p.apply(x) == x));

        assert_eq!(bw.relative_algebra(Element::EMPTY).unwrap_err(), Error::ZeroBound);
        assert_eq!(
            bw.relative_algebra(el(&bw, "{t}")).unwrap_err(),
            Error::NotClosed
        );
    }

    #[test]
    fn clopen_splits_product() {
        let bf = cm(&fork()).unwrap();
        let prod = bf.product(&bf).unwrap();
        assert_eq!(prod.atom_count(), 6);
        let b = Element::full(3);
        assert!(prod.is_clopen(b));
        let left = prod.relative_algebra(b).unwrap();
        let right = prod.relative_algebra(prod.complement(b)).unwrap();
        assert!(left.projection.is_some() && right.projection.is_some());
        let again = left.algebra.product(&right.algebra).unwrap();
        assert!(again.is_isomorphic(&prod));
        assert!(left.algebra.is_isomorphic(&bf));
    }

    #[test]
    fn product_components() {
        let two = ClosureAlgebra::two();
        let p = two.product(&two).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(cf(&p).components().len(), 2);
        let bf = cm(&fork()).unwrap();
        let q = bf.product(&two).unwrap();
        assert_eq!(cf(&q).components().len(), 2);
    }

    #[test]
    fn quotients_of_w() {
        let bw = cm(&w_frame()).unwrap();
        let bf = cm(&fork()).unwrap();
        for atom in ["{t}", "{w}"] {
            let g = bw.closure(el(&bw, atom));
            let ideal = ClosedIdeal::new(&bw, g).unwrap();
            let (q, p) = bw.quotient(&ideal);
            assert!(q.is_isomorphic(&bf));
            assert!(p.is_surjective());
            assert_eq!(p.kernel(), ideal);
        }
        let zero = ClosedIdeal::new(&bw, Element::EMPTY).unwrap();
        let (q, _) = bw.quotient(&zero);
        assert_eq!(q, bw);
    }

    #[test]
    fn indecomposability() {
        let bf = cm(&fork()).unwrap();
        assert_eq!(bf.is_directly_indecomposable(), Ok(true));
        assert_eq!(bf.product(&bf).unwrap().is_directly_indecomposable(), Ok(false));
        assert_eq!(cm(&w_frame()).unwrap().is_directly_indecomposable(), Ok(true));
        assert_eq!(
            ClosureAlgebra::trivial().is_directly_indecomposable(),
            Err(Error::TrivialAlgebra)
        );
    }

    #[test]
    fn isomorphism_examples() {
        let bf = cm(&fork()).unwrap();
        let relabelled = cm(&fork().permute(&[2, 0, 1])).unwrap();
        let iso = bf.isomorphism_to(&relabelled).unwrap();
        assert!(iso.is_injective() && iso.is_surjective());
        let two = ClosureAlgebra::two();
        let cube = two.product(&two).unwrap().product(&two).unwrap();
        assert_eq!(cube.size(), bf.size());
        assert!(!bf.is_isomorphic(&cube));
        let bw = cm(&w_frame()).unwrap();
        assert!(bw.is_isomorphic(&cm(&cf(&bw)).unwrap()));
    }
}
