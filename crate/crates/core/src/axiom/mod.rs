//! Equational checks on finite closure algebras and their first-order
//! frame counterparts.

mod term;

pub use term::{cl, eval, int, join, le, meet, neg, parse_term, var, Env, Term};

use std::fmt;

use crate::algebra::ClosureAlgebra;
use crate::bits::Element;
use crate::error::{Error, Result};
use crate::frame::Frame;
use term::{eval_indexed, Compiled};

/// Default cap on the number of assignments an exhaustive check may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Grz,
    Bd2,
    Bw2,
    Geach,
}

impl Axiom {
    pub const ALL: [Axiom; 4] = [Axiom::Grz, Axiom::Bd2, Axiom::Bw2, Axiom::Geach];
    /// The axioms defining the fork variety.
    pub const FORK: [Axiom; 3] = [Axiom::Grz, Axiom::Bd2, Axiom::Bw2];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Grz => "grz",
            Axiom::Bd2 => "bd2",
            Axiom::Bw2 => "bw2",
            Axiom::Geach => "geach",
        }
    }

    pub fn from_name(name: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.name() == name)
    }

    pub fn term(self) -> Term {
        let x = || var("x");
        let y = || var("y");
        match self {
            // fd(f(x·f(−x)) + x) ≤ x
            Axiom::Grz => le(int(join(cl(meet(x(), cl(neg(x())))), x())), x()),
            // −x·f(x) ≤ f(fd(x))
            Axiom::Bd2 => le(meet(neg(x()), cl(x())), cl(int(x()))),
            // −(x·y·f(x·−y)·f(−x·y)·f(−x·−y)) = 1
            Axiom::Bw2 => neg(meet(
                meet(
                    meet(meet(x(), y()), cl(meet(x(), neg(y())))),
                    cl(meet(neg(x()), y())),
                ),
                cl(meet(neg(x()), neg(y()))),
            )),
            // f(fd(x)) ≤ fd(f(x))
            Axiom::Geach => le(cl(int(x())), int(cl(x()))),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of an exhaustive validity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub name: String,
    pub holds: bool,
    /// First failing assignment in lexicographic order, if any.
    pub witness: Option<Vec<(String, Element)>>,
    /// Assignments evaluated.
    pub checked: u64,
}

impl AxiomReport {
    pub fn witness_env(&self) -> Option<Env> {
        self.witness
            .as_ref()
            .map(|w| w.iter().cloned().collect())
    }

    /// `x={v}, y={}` using the atom labels of `a`.
    pub fn format_witness(&self, a: &ClosureAlgebra) -> Option<String> {
        self.witness.as_ref().map(|w| {
            w.iter()
                .map(|(k, v)| format!("{k}={}", a.format(*v)))
                .collect::<Vec<_>>()
                .join(", ")
        })
    }
}

/// Checks `t ≈ 1` on every assignment, with the default budget.
pub fn check_equation(t: &Term, a: &ClosureAlgebra) -> Result<AxiomReport> {
    check_equation_with_budget(t, a, DEFAULT_BUDGET)
}

/// Checks `t ≈ 1` on every assignment. Variables are ordered by name and
/// assignments enumerated lexicographically, the first variable varying
/// slowest and each ranging over elements in ascending bit order.
pub fn check_equation_with_budget(t: &Term, a: &ClosureAlgebra, budget: u64) -> Result<AxiomReport> {
    let vars: Vec<String> = t.variables().into_iter().collect();
    let n = a.atom_count();
    let total = (n as u32)
        .checked_mul(vars.len() as u32)
        .filter(|&bits| bits < 64)
        .map(|bits| 1u64 << bits)
        .unwrap_or(u64::MAX);
    if total > budget {
        return Err(Error::SearchBudgetExceeded(budget));
    }
    let compiled = Compiled::new(t, &vars);
    let top = a.top();
    let mut vals = vec![Element::EMPTY; vars.len()];
    let mut checked = 0u64;
    loop {
        checked += 1;
        if eval_indexed(&compiled, a, &vals) != top {
            return Ok(AxiomReport {
                name: t.to_string(),
                holds: false,
                witness: Some(vars.iter().cloned().zip(vals.iter().copied()).collect()),
                checked,
            });
        }
        // odometer, last variable fastest
        let mut i = vars.len();
        loop {
            if i == 0 {
                return Ok(AxiomReport {
                    name: t.to_string(),
                    holds: true,
                    witness: None,
                    checked,
                });
            }
            i -= 1;
            if vals[i] == top {
                vals[i] = Element::EMPTY;
            } else {
                vals[i] = Element(vals[i].bits() + 1);
                break;
            }
        }
    }
}

pub fn check_axiom(axiom: Axiom, a: &ClosureAlgebra) -> Result<AxiomReport> {
    let mut r = check_equation(&axiom.term(), a)?;
    r.name = axiom.name().to_string();
    Ok(r)
}

/// `∀x∀y(x≾y ⇒ x=y ∨ ∃z1(x≾z1 ∧ ∀z2(z1≾z2 ⇒ y=z2)))`, checked literally.
pub fn frame_condition_bd2(f: &Frame) -> Result<bool> {
    f.require_quasiorder()?;
    let pts = f.points();
    Ok(pts.clone().all(|x| {
        pts.clone().all(|y| {
            !f.rel(x, y)
                || x == y
                || pts
                    .clone()
                    .any(|z1| f.rel(x, z1) && pts.clone().all(|z2| !f.rel(z1, z2) || y == z2))
        })
    }))
}

/// `∀y1∀y2((x≾y1 ∧ x≾y2) ⇒ x=y1 ∨ x=y2 ∨ y1=y2 ∨ ∀z1(x≾z1 ⇒ x=z1 ∨ y1=z1 ∨ y2=z1))`,
/// checked literally for every `x`.
pub fn frame_condition_bw2(f: &Frame) -> Result<bool> {
    f.require_quasiorder()?;
    let pts = f.points();
    Ok(pts.clone().all(|x| {
        pts.clone().all(|y1| {
            pts.clone().all(|y2| {
                !(f.rel(x, y1) && f.rel(x, y2))
                    || x == y1
                    || x == y2
                    || y1 == y2
                    || pts
                        .clone()
                        .all(|z1| !f.rel(x, z1) || x == z1 || y1 == z1 || y2 == z1)
            })
        })
    }))
}

/// Frame-side description of the fork variety: a partial order of height at
/// most two and local width at most two.
pub fn is_fork_frame_by_stats(f: &Frame) -> bool {
    f.is_partial_order()
        && f.order_stats()
            .map(|s| s.height <= 2 && s.local_width <= 2)
            .unwrap_or(false)
}

/// Is `a` a fork algebra, i.e. a non-trivial finite model of Grz, BD₂, BW₂?
///
/// Decided on the atom frame, which is exact for finite algebras; see
/// [`fork_axioms_hold`] for the equational route.
pub fn is_fork_algebra(a: &ClosureAlgebra) -> Result<bool> {
    if a.is_trivial() {
        return Err(Error::TrivialAlgebra);
    }
    Ok(is_fork_frame_by_stats(a.atom_frame()))
}

/// Exhaustively checks Grz, BD₂ and BW₂ on `a`.
pub fn fork_axioms_hold(a: &ClosureAlgebra) -> Result<bool> {
    if a.is_trivial() {
        return Err(Error::TrivialAlgebra);
    }
    for ax in Axiom::FORK {
        if !check_axiom(ax, a)?.holds {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For all open `x, y`: `x + y = 1 ⇒ x = 1 ∨ y = 1`. The witness is the first
/// failing pair in ascending order.
pub fn wdp_witness_check(a: &ClosureAlgebra) -> AxiomReport {
    let opens = a.open_elements();
    let top = a.top();
    let mut checked = 0;
    for &x in &opens {
        for &y in &opens {
            checked += 1;
            if x | y == top && x != top && y != top {
                return AxiomReport {
                    name: "wdp".into(),
                    holds: false,
                    witness: Some(vec![("x".into(), x), ("y".into(), y)]),
                    checked,
                };
            }
        }
    }
    AxiomReport {
        name: "wdp".into(),
        holds: true,
        witness: None,
        checked,
    }
}

/// Shape of atoms in a fork algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomShapeReport {
    /// Pairs `(a, b)` of atoms with `b ≤ f(a)`, `b ≠ a` and `b` not closed.
    pub below_closure_not_closed: Vec<(usize, usize)>,
    /// Atoms that are neither open nor closed.
    pub neither_open_nor_closed: Vec<usize>,
}

impl AtomShapeReport {
    pub fn holds(&self) -> bool {
        self.below_closure_not_closed.is_empty() && self.neither_open_nor_closed.is_empty()
    }
}

/// Checks, for each atom `a`, that all atoms below `f(a)` other than `a` are
/// closed (hence so is every element below `f(a)·−a`), and that `a` is open or
/// closed.
pub fn atom_shape_checks(a: &ClosureAlgebra) -> Result<AtomShapeReport> {
    if a.is_trivial() || !is_fork_algebra(a)? {
        return Err(Error::NotForkAlgebra);
    }
    let n = a.atom_count();
    let mut report = AtomShapeReport {
        below_closure_not_closed: Vec::new(),
        neither_open_nor_closed: Vec::new(),
    };
    for x in 0..n {
        let ax = a.atom(x);
        for y in a.closure(ax).iter().filter(|&y| y != x) {
            if !a.is_closed(a.atom(y)) {
                report.below_closure_not_closed.push((x, y));
            }
        }
        if !a.is_closed(ax) && !a.is_open(ax) {
            report.neither_open_nor_closed.push(x);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::cm;
    use crate::frame::{antichain, chain, fork, prongs, single_point, w_frame};

    #[test]
    fn fork_axioms_on_named_algebras() {
        for f in [fork(), w_frame(), single_point()] {
            let a = cm(&f).unwrap();
            for ax in Axiom::FORK {
                let r = check_axiom(ax, &a).unwrap();
                assert!(r.holds, "{ax} on {f:?}");
            }
        }
        let bw = cm(&w_frame()).unwrap();
        assert_eq!(check_axiom(Axiom::Bd2, &bw).unwrap().checked, 32);
        assert_eq!(check_axiom(Axiom::Bw2, &bw).unwrap().checked, 1024);
    }

    #[test]
    fn geach_fails_on_fork_at_v() {
        let bf = cm(&fork()).unwrap();
        let r = check_axiom(Axiom::Geach, &bf).unwrap();
        assert!(!r.holds);
        assert_eq!(r.format_witness(&bf).unwrap(), "x={v}");
        let env = r.witness_env().unwrap();
        assert_ne!(eval(&Axiom::Geach.term(), &bf, &env).unwrap(), bf.top());
    }

    #[test]
    fn frame_conditions_examples() {
        assert!(frame_condition_bd2(&fork()).unwrap());
        assert!(frame_condition_bw2(&fork()).unwrap());
        assert!(!frame_condition_bd2(&chain(3)).unwrap());
        assert!(!frame_condition_bw2(&prongs(3)).unwrap());
        assert!(frame_condition_bw2(&chain(3)).unwrap());
        let irreflexive = Frame::new(1, []).unwrap();
        assert_eq!(frame_condition_bd2(&irreflexive), Err(Error::NotQuasiorder));
    }

    #[test]
    fn fork_recognition() {
        assert_eq!(is_fork_algebra(&cm(&w_frame()).unwrap()), Ok(true));
        assert_eq!(is_fork_algebra(&cm(&chain(3)).unwrap()), Ok(false));
        assert_eq!(is_fork_algebra(&ClosureAlgebra::two()), Ok(true));
        assert_eq!(is_fork_algebra(&ClosureAlgebra::trivial()), Err(Error::TrivialAlgebra));
        for f in [fork(), w_frame(), chain(3), prongs(3), antichain(3)] {
            let a = cm(&f).unwrap();
            assert_eq!(fork_axioms_hold(&a), is_fork_algebra(&a), "{f:?}");
        }
    }

    #[test]
    fn wdp_examples() {
        let bf = cm(&fork()).unwrap();
        assert!(wdp_witness_check(&bf).holds);
        assert!(wdp_witness_check(&ClosureAlgebra::two()).holds);
        let sq = bf.product(&bf).unwrap();
        let r = wdp_witness_check(&sq);
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(w[0].1, Element::full(3));
        assert_eq!(w[1].1, Element(0b111_000));
    }

    #[test]
    fn atom_shapes() {
        for f in [fork(), w_frame()] {
            let r = atom_shape_checks(&cm(&f).unwrap()).unwrap();
            assert!(r.holds());
        }
        let bw = cm(&w_frame()).unwrap();
        let (u, t) = (bw.atom(0), bw.atom(2));
        assert!(u.is_subset(bw.closure(t)) && bw.is_closed(u));
        assert_eq!(
            atom_shape_checks(&cm(&chain(3)).unwrap()),
            Err(Error::NotForkAlgebra)
        );
    }

    #[test]
    fn budget_guard() {
        let bw = cm(&w_frame()).unwrap();
        let t = parse_term("x + y + z").unwrap();
        assert_eq!(
            check_equation_with_budget(&t, &bw, 1000),
            Err(Error::SearchBudgetExceeded(1000))
        );
        assert!(check_equation_with_budget(&t, &bw, 1 << 15).is_ok());
    }

    #[test]
    fn closed_term_checks_once() {
        let r = check_equation(&parse_term("1").unwrap(), &ClosureAlgebra::two()).unwrap();
        assert!(r.holds);
        assert_eq!(r.checked, 1);
        let r = check_equation(&parse_term("0").unwrap(), &ClosureAlgebra::two()).unwrap();
        assert_eq!(r.witness, Some(vec![]));
    }
}
