//! Projectivity of fork algebras.
//!
//! A fork algebra is projective exactly when it is directly indecomposable and
//! the closures of any two non-closed atoms meet. Three independent routes are
//! offered: that atom condition, the absence of a copy of `B_W` as a
//! subalgebra, and bounded retractions of extension frames onto the dual
//! frame (constructed in [`build_retraction`], searched in
//! [`brute_force_retraction`]).

mod retract;

pub use retract::{
    brute_force_retraction, build_retraction, bounded_injectivity_probe, random_instance, Case,
    CaseEntry, ProbeKind, ProbeReport, RetractionPlan,
};

use crate::algebra::{cm, AlgHom, ClosureAlgebra};
use crate::axiom::is_fork_algebra;
use crate::bits::Element;
use crate::error::{Error, Result};
use crate::frame::{w_frame, Frame, Morphism};

/// Dual form of the necessary condition for projectivity in the variety of
/// height-two partial orders of local width `m`: directly indecomposable, and
/// any `k ≤ m` non-closed atoms have closures with a common atom.
pub fn necessary_condition_v2m(a: &ClosureAlgebra, m: usize) -> Result<bool> {
    let f = a.atom_frame();
    let fits = m >= 2
        && f.is_partial_order()
        && f.order_stats()
            .map(|s| s.height <= 2 && s.local_width <= m)
            .unwrap_or(false);
    if !fits {
        return Err(Error::WrongVariety(format!(
            "need a partial order of height ≤ 2 and local width ≤ {m}, with m ≥ 2"
        )));
    }
    if !a.is_directly_indecomposable()? {
        return Ok(false);
    }
    let nc: Vec<usize> = a.non_closed_atoms().iter().collect();
    Ok(meets_nonzero(a, &nc, 0, a.top(), m))
}

/// Do all sub-families of `atoms[start..]` of size ≤ `left`, together with the
/// closures already folded into `acc`, meet non-trivially?
fn meets_nonzero(a: &ClosureAlgebra, atoms: &[usize], start: usize, acc: Element, left: usize) -> bool {
    if acc.is_empty() {
        return false;
    }
    if left == 0 {
        return true;
    }
    (start..atoms.len()).all(|i| {
        let next = acc & a.closure(a.atom(atoms[i]));
        meets_nonzero(a, atoms, i + 1, next, left - 1)
    })
}

/// First pair `a < b` of non-closed atoms (by index) with `f(a)·f(b) = 0`.
pub fn zero_meet_pair(a: &ClosureAlgebra) -> Option<(usize, usize)> {
    let nc: Vec<usize> = a.non_closed_atoms().iter().collect();
    for (i, &x) in nc.iter().enumerate() {
        for &y in &nc[i + 1..] {
            if (a.closure(a.atom(x)) & a.closure(a.atom(y))).is_empty() {
                return Some((x, y));
            }
        }
    }
    None
}

/// Is the fork algebra `a` projective in the fork variety?
pub fn is_projective_fork(a: &ClosureAlgebra) -> Result<bool> {
    if !is_fork_algebra(a)? {
        return Err(Error::NotForkAlgebra);
    }
    Ok(a.is_directly_indecomposable()? && zero_meet_pair(a).is_none())
}

/// The same condition read on a fork frame: connected, and any two upper
/// points have a common point below them.
pub fn is_projective_fork_frame(f: &Frame) -> Result<bool> {
    let levels = f.levels()?;
    if !f.is_fork_frame() {
        return Err(Error::NotForkFrame("local width exceeds two".into()));
    }
    let upper: Vec<usize> = levels.upper.iter().collect();
    let pairs_ok = upper.iter().enumerate().all(|(i, &x)| {
        upper[i + 1..]
            .iter()
            .all(|&y| f.pred(x).intersects(f.pred(y)))
    });
    Ok(f.is_connected() && pairs_ok)
}

/// A copy of `B_W` inside a fork algebra, built from two non-closed atoms with
/// disjoint closures.
#[derive(Clone, Debug)]
pub struct BWWitness {
    pub a0: usize,
    pub b0: usize,
    pub v: Element,
    pub d: Element,
    pub u: Element,
    pub t: Element,
    pub u_prime: Element,
    pub w: Element,
    /// Embedding `B_W ↪ a`, mapping the atoms `u, u', t, v, w` of `B_W` to the
    /// elements of the same names.
    pub embedding: AlgHom,
}

impl BWWitness {
    /// The five atoms of the copy, in the order `u, u', t, v, w`.
    pub fn atoms(&self) -> [Element; 5] {
        [self.u, self.u_prime, self.t, self.v, self.w]
    }
}

/// The first `B_W` witness, taking atom pairs in lexicographic order.
pub fn find_bw_subalgebra(a: &ClosureAlgebra) -> Result<Option<BWWitness>> {
    Ok(witnesses(a, true)?.into_iter().next())
}

/// One witness for every qualifying pair of atoms.
pub fn find_all_bw_subalgebras(a: &ClosureAlgebra) -> Result<Vec<BWWitness>> {
    witnesses(a, false)
}

fn witnesses(a: &ClosureAlgebra, first_only: bool) -> Result<Vec<BWWitness>> {
    if a.is_trivial() || !is_fork_algebra(a)? {
        return Err(Error::NotForkAlgebra);
    }
    if !a.is_directly_indecomposable()? {
        return Err(Error::NotIndecomposable);
    }
    let nc: Vec<usize> = a.non_closed_atoms().iter().collect();
    let mut out = Vec::new();
    for (i, &x) in nc.iter().enumerate() {
        for &y in &nc[i + 1..] {
            if (a.closure(a.atom(x)) & a.closure(a.atom(y))).is_empty() {
                out.push(bw_witness(a, x, y)?);
                if first_only {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

fn bw_witness(a: &ClosureAlgebra, a0: usize, b0: usize) -> Result<BWWitness> {
    let fa = a.closure(a.atom(a0));
    let fb = a.closure(a.atom(b0));
    let v = a.complement(a.closure(a.atom(a0) | a.atom(b0)));
    let d = a.complement(v) & a.closure(v);
    let u = d & fa;
    let t = a.complement(d) & fa;
    let u_prime = d & fb;
    let w = a.complement(d) & fb;

    let gap = |what: &str| Error::ProofGap(format!("B_W witness for atoms {a0},{b0}: {what}"));
    let parts = [u, u_prime, t, v, w];
    if parts.iter().any(|p| p.is_empty()) {
        return Err(gap("a part is zero"));
    }
    for (i, p) in parts.iter().enumerate() {
        if parts[i + 1..].iter().any(|q| p.intersects(*q)) {
            return Err(gap("parts overlap"));
        }
    }
    if parts.iter().fold(Element::EMPTY, |acc, &p| acc | p) != a.top() {
        return Err(gap("parts do not cover 1"));
    }
    if !a.is_closed(u) || !a.is_closed(u_prime) {
        return Err(gap("u or u' is not closed"));
    }
    if a.closure(t) != fa || a.closure(w) != fb {
        return Err(gap("f(t) ≠ f(a) or f(w) ≠ f(b)"));
    }
    // Dual of the embedding: each atom of `a` goes to the part containing it.
    let bw = cm(&w_frame()).expect("W is a partial order");
    let map: Vec<usize> = (0..a.atom_count())
        .map(|x| parts.iter().position(|p| p.contains(x)).expect("parts cover 1"))
        .collect();
    let dual = Morphism::from_shared(a.frame_shared().clone(), bw.frame_shared().clone(), map)?;
    let embedding = AlgHom::new(dual)
        .map_err(|_| gap("the parts do not span a copy of B_W"))?;
    if !embedding.is_injective() {
        return Err(gap("embedding is not injective"));
    }
    Ok(BWWitness {
        a0,
        b0,
        v,
        d,
        u,
        t,
        u_prime,
        w,
        embedding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{fork, prongs, single_point};

    #[test]
    fn v2m_examples() {
        let bf = cm(&fork()).unwrap();
        let bw = cm(&w_frame()).unwrap();
        assert_eq!(necessary_condition_v2m(&bf, 2), Ok(true));
        assert_eq!(necessary_condition_v2m(&bw, 2), Ok(false));
        assert_eq!(necessary_condition_v2m(&ClosureAlgebra::two(), 3), Ok(true));
        assert!(matches!(
            necessary_condition_v2m(&cm(&prongs(3)).unwrap(), 2),
            Err(Error::WrongVariety(_))
        ));
        assert_eq!(necessary_condition_v2m(&cm(&prongs(3)).unwrap(), 3), Ok(true));
    }

    #[test]
    fn projectivity_examples() {
        let bw = cm(&w_frame()).unwrap();
        assert_eq!(is_projective_fork(&cm(&fork()).unwrap()), Ok(true));
        assert_eq!(is_projective_fork(&bw), Ok(false));
        assert_eq!(is_projective_fork(&ClosureAlgebra::two()), Ok(true));
        assert_eq!(zero_meet_pair(&bw), Some((2, 4)));
        for f in [fork(), w_frame(), single_point()] {
            assert_eq!(
                is_projective_fork_frame(&f).unwrap(),
                is_projective_fork(&cm(&f).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn bw_witness_in_w() {
        let bw = cm(&w_frame()).unwrap();
        let wit = find_bw_subalgebra(&bw).unwrap().unwrap();
        assert_eq!((wit.a0, wit.b0), (2, 4));
        let show = |x| bw.format(x);
        assert_eq!(show(wit.v), "{v}");
        assert_eq!(show(wit.d), "{u,u'}");
        assert_eq!(show(wit.u), "{u}");
        assert_eq!(show(wit.t), "{t}");
        assert_eq!(show(wit.u_prime), "{u'}");
        assert_eq!(show(wit.w), "{w}");
        assert!(wit.embedding.is_surjective());
        assert!(find_bw_subalgebra(&cm(&fork()).unwrap()).unwrap().is_none());
    }

    #[test]
    fn bw_witness_preconditions() {
        let sq = cm(&fork()).unwrap().product(&cm(&fork()).unwrap()).unwrap();
        assert_eq!(find_bw_subalgebra(&sq).unwrap_err(), Error::NotIndecomposable);
        assert_eq!(
            find_bw_subalgebra(&cm(&crate::frame::chain(3)).unwrap()).unwrap_err(),
            Error::NotForkAlgebra
        );
    }
}
