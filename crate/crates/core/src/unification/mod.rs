//! Algebraic unifiers of finite fork algebras.
//!
//! A unifier of `A` is a homomorphism `u: A → B` into a finite projective
//! algebra. Every unifier factors as `e ∘ p_θ` through the quotient by its
//! kernel, and in the fork variety that quotient is itself projective, so the
//! canonical unifiers `⟨p_θ, A/θ⟩` over the admissible kernels `θ` represent
//! all of them. [`mu_set`] works on those; [`brute_force_mu`] enumerates every
//! homomorphism into small projective targets instead and serves as its
//! oracle.

use std::ops::ControlFlow;

use crate::algebra::{cm, hom_search, AlgHom, ClosedIdeal, ClosureAlgebra, HomKind};
use crate::axiom::{check_axiom, is_fork_algebra, Axiom, AxiomReport};
use crate::bits::{PointSet, MAX_POINTS};
use crate::catalog::{enumerate, CatalogQuery, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::frame::{fork, Frame, Morphism, MorphismSearch, UnificationType};
use crate::projectivity::{is_projective_fork, is_projective_fork_frame};

/// Most unifiers the brute-force oracle will collect by default.
pub const DEFAULT_UNIFIER_BUDGET: u64 = 200_000;

/// Most `≈`-classes the oracle will order.
pub const MAX_CLASSES: usize = 4096;

/// A unifier `u: A → B`, kept together with its kernel and the quotient it
/// factors through.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unifier {
    pub source: ClosureAlgebra,
    pub kernel: ClosedIdeal,
    /// `A/ker(u)`.
    pub quotient: ClosureAlgebra,
    /// The projective target `B`.
    pub target: ClosureAlgebra,
    pub hom: AlgHom,
}

impl Unifier {
    /// `⟨p_θ, A/θ⟩` for `θ = ↓g`; the quotient must be a projective fork algebra.
    pub fn canonical(a: &ClosureAlgebra, kernel: ClosedIdeal) -> Result<Unifier> {
        if !kernel.is_proper(a) {
            return Err(Error::NotUnifiable);
        }
        let (quotient, hom) = a.quotient(&kernel);
        if !is_projective_fork(&quotient)? {
            return Err(Error::NotProjectiveSubalgebra(format!(
                "quotient by ↓{} is not projective",
                a.format(kernel.generator())
            )));
        }
        Ok(Unifier {
            source: a.clone(),
            kernel,
            target: quotient.clone(),
            quotient,
            hom,
        })
    }

    /// Wraps an arbitrary homomorphism into a projective fork algebra.
    pub fn from_hom(hom: AlgHom) -> Result<Unifier> {
        let target = hom.target();
        if target.is_trivial() || !is_projective_fork(&target)? {
            return Err(Error::NotProjectiveSubalgebra("target is not projective".into()));
        }
        let source = hom.source();
        let kernel = hom.kernel();
        let (quotient, _) = source.quotient(&kernel);
        Ok(Unifier {
            source,
            kernel,
            quotient,
            target,
            hom,
        })
    }

    /// Is this the quotient map itself (target equal to the quotient)?
    pub fn is_canonical(&self) -> bool {
        self.hom.is_surjective()
    }

    /// Short description for error messages.
    pub fn describe(&self) -> String {
        format!(
            "ker ↓{} → {} atoms",
            self.source.format(self.kernel.generator()),
            self.target.atom_count()
        )
    }
}

/// `⟨u, B⟩ ≽ ⟨v, C⟩` witnessed by `h: B → C` with `h ∘ u = v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub dominated: Unifier,
    /// Index into [`MuReport::mu_set`].
    pub by: usize,
    pub hom: AlgHom,
}

#[derive(Clone, Debug)]
pub struct MuReport {
    pub mu_set: Vec<Unifier>,
    pub kind: UnificationType,
    pub certificates: Vec<Certificate>,
    /// Unifiers examined.
    pub examined: usize,
    /// `≈`-classes among them.
    pub classes: usize,
    /// Generality order on the classes (`i ≾ j`: `j` is more general), when
    /// there are at most [`MAX_POINTS`].
    pub order: Option<Frame>,
}

impl MuReport {
    pub fn kernels(&self) -> Vec<ClosedIdeal> {
        self.mu_set.iter().map(|u| u.kernel).collect()
    }
}

/// Is `𝟚` a homomorphic image of `a`?
pub fn is_unifiable(a: &ClosureAlgebra) -> bool {
    !hom_search(a, &ClosureAlgebra::two(), HomKind::Surjective).is_empty()
}

fn require_fork(a: &ClosureAlgebra) -> Result<()> {
    match is_fork_algebra(a) {
        Ok(true) => Ok(()),
        Ok(false) | Err(Error::TrivialAlgebra) => Err(Error::NotForkAlgebra),
        Err(e) => Err(e),
    }
}

/// Proper closed ideals whose quotient is projective, by ascending generator.
pub fn admissible_congruences(a: &ClosureAlgebra) -> Result<Vec<ClosedIdeal>> {
    require_fork(a)?;
    let f = a.atom_frame();
    let mut out = Vec::new();
    for g in a.closed_elements() {
        if g == a.top() {
            continue;
        }
        let rest = a.complement(g);
        let (sub, _) = f.induced(rest.into());
        if is_projective_fork_frame(&sub)? {
            out.push(ClosedIdeal::new(a, g)?);
        }
    }
    out.sort_by_key(|k| k.generator());
    Ok(out)
}

/// An `h` with `u2.hom = h ∘ u1.hom`, found by search alone.
///
/// Dually `h` is a bounded morphism `g: cf(B2) → cf(B1)` with
/// `u1* ∘ g = u2*`, so each point `y` may only go to the `u1*`-preimage of
/// `u2*(y)`.
pub fn find_factor(u1: &AlgHom, u2: &AlgHom) -> Result<Option<AlgHom>> {
    if u1.source_frame() != u2.source_frame() {
        return Err(Error::InvalidMorphism("unifiers of different algebras".into()));
    }
    let (d1, d2) = (u1.dual(), u2.dual());
    let (b1, b2) = (d1.source_shared().clone(), d2.source_shared().clone());
    let mut search = MorphismSearch::new(&b2, &b1);
    for y in b2.points() {
        search = search.restrict(y, d1.preimage(PointSet::singleton(d2.apply(y))));
    }
    let Some(map) = search.first()? else {
        return Ok(None);
    };
    let dual = Morphism::from_shared(b2.clone(), b1.clone(), map)?;
    let h = AlgHom::new(dual)?;
    if u1.compose(&h)? != *u2 {
        return Err(Error::ProofGap("factor does not compose to the target unifier".into()));
    }
    Ok(Some(h))
}

/// Is `u1 ≽ u2`? Returns the witnessing `h`.
///
/// Kernel inclusion is necessary, and for canonical unifiers also sufficient;
/// the search result must agree with it or the call fails with
/// [`Error::Inconsistent`].
pub fn more_general(u1: &Unifier, u2: &Unifier) -> Result<Option<AlgHom>> {
    if u1.source != u2.source {
        return Err(Error::InvalidMorphism("unifiers of different algebras".into()));
    }
    let included = u1.kernel.is_subset(&u2.kernel);
    let found = find_factor(&u1.hom, &u2.hom)?;
    if found.is_some() && !included {
        return Err(Error::Inconsistent(format!(
            "{} ≽ {} although the kernels are not included",
            u1.describe(),
            u2.describe()
        )));
    }
    if found.is_none() && included && u1.is_canonical() && u2.is_canonical() {
        return Err(Error::Inconsistent(format!(
            "kernels included but no factor from {} to {}",
            u1.describe(),
            u2.describe()
        )));
    }
    Ok(found)
}

/// `u1 ≈ u2`.
pub fn equivalent(u1: &Unifier, u2: &Unifier) -> Result<bool> {
    Ok(more_general(u1, u2)?.is_some() && more_general(u2, u1)?.is_some())
}

/// The μ-set formed by the canonical unifiers over the ⊆-minimal admissible
/// kernels. The order claims are all certified by [`more_general`].
pub fn mu_set(a: &ClosureAlgebra) -> Result<MuReport> {
    if a.is_trivial() {
        return Err(Error::NotUnifiable);
    }
    let kernels = admissible_congruences(a)?;
    if kernels.is_empty() || !is_unifiable(a) {
        return Err(Error::NotUnifiable);
    }
    let unifiers = kernels
        .iter()
        .map(|&k| Unifier::canonical(a, k))
        .collect::<Result<Vec<_>>>()?;
    let minimal: Vec<usize> = (0..kernels.len())
        .filter(|&i| {
            !kernels
                .iter()
                .any(|k| k.is_subset(&kernels[i]) && *k != kernels[i])
        })
        .collect();
    let mu: Vec<Unifier> = minimal.iter().map(|&i| unifiers[i].clone()).collect();

    for (i, x) in mu.iter().enumerate() {
        for y in &mu[i + 1..] {
            if more_general(x, y)?.is_some() || more_general(y, x)?.is_some() {
                return Err(Error::Inconsistent("μ-set members are comparable".into()));
            }
        }
    }
    let mut certificates = Vec::new();
    for (i, u) in unifiers.iter().enumerate() {
        if minimal.contains(&i) {
            continue;
        }
        let mut cert = None;
        for (j, m) in mu.iter().enumerate() {
            if let Some(h) = more_general(m, u)? {
                cert = Some(Certificate {
                    dominated: u.clone(),
                    by: j,
                    hom: h,
                });
                break;
            }
        }
        certificates.push(cert.ok_or_else(|| {
            Error::Inconsistent(format!("{} is below no μ-set member", u.describe()))
        })?);
    }
    let kind = finite_type(mu.len())?;
    let order = if unifiers.len() <= MAX_POINTS {
        Some(generality_order(&unifiers)?)
    } else {
        None
    };
    Ok(MuReport {
        classes: unifiers.len(),
        examined: unifiers.len(),
        mu_set: mu,
        kind,
        certificates,
        order,
    })
}

/// The order `le` as a frame, if it has few enough points.
fn order_frame(le: &[Vec<bool>]) -> Result<Option<Frame>> {
    if le.len() > MAX_POINTS {
        return Ok(None);
    }
    let rows = le
        .iter()
        .map(|row| (0..row.len()).filter(|&j| row[j]).collect())
        .collect();
    Frame::from_rows(rows).map(Some)
}

/// `i ≾ j` when unifier `j` is more general than unifier `i`.
fn generality_order(unifiers: &[Unifier]) -> Result<Frame> {
    let mut above = vec![PointSet::EMPTY; unifiers.len()];
    for (i, ui) in unifiers.iter().enumerate() {
        for (j, uj) in unifiers.iter().enumerate() {
            if i == j || more_general(uj, ui)?.is_some() {
                above[i].insert(j);
            }
        }
    }
    Frame::from_rows(above)
}

fn finite_type(card: usize) -> Result<UnificationType> {
    match UnificationType::from_mu_cardinality(Some(card)) {
        t @ (UnificationType::Unitary | UnificationType::Finitary) => Ok(t),
        t => Err(Error::ProofGap(format!("finite algebra of type {t}"))),
    }
}

pub fn unification_type(a: &ClosureAlgebra) -> Result<UnificationType> {
    Ok(mu_set(a)?.kind)
}

/// Projective fork algebras with at most `bound` atoms, one per isomorphism
/// class.
pub fn projective_targets(bound: usize) -> Result<Vec<ClosureAlgebra>> {
    let q = CatalogQuery::fork_frames(bound)
        .connected()
        .cap(bound.max(DEFAULT_CAP));
    let mut out = Vec::new();
    for f in enumerate(&q)? {
        if is_projective_fork_frame(&f)? {
            out.push(cm(&f)?);
        }
    }
    Ok(out)
}

/// μ-set by definition: every homomorphism into every projective fork algebra
/// with at most `bound` atoms, grouped into `≈`-classes by factor search, and
/// the maximal classes of the resulting order.
pub fn brute_force_mu(a: &ClosureAlgebra, bound: usize) -> Result<MuReport> {
    brute_force_mu_with_budget(a, bound, DEFAULT_UNIFIER_BUDGET)
}

pub fn brute_force_mu_with_budget(a: &ClosureAlgebra, bound: usize, budget: u64) -> Result<MuReport> {
    let mut homs: Vec<AlgHom> = Vec::new();
    for b in projective_targets(bound)? {
        let src = a.atom_frame();
        let outcome = MorphismSearch::new(b.atom_frame(), src).for_each(|map| {
            let dual = Morphism::from_shared(
                b.frame_shared().clone(),
                a.frame_shared().clone(),
                map.to_vec(),
            )
            .expect("search yields valid maps");
            homs.push(AlgHom::new(dual).expect("search yields bounded maps"));
            if homs.len() as u64 > budget {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if !outcome.complete {
            return Err(Error::SearchBudgetExceeded(budget));
        }
    }
    if homs.is_empty() {
        return Err(Error::NotUnifiable);
    }

    // classes under ≈, each represented by its first member
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..homs.len() {
        let mut joined = false;
        for &r in &reps {
            if find_factor(&homs[r], &homs[i])?.is_some() && find_factor(&homs[i], &homs[r])?.is_some() {
                joined = true;
                break;
            }
        }
        if !joined {
            reps.push(i);
            if reps.len() > MAX_CLASSES {
                return Err(Error::CapExceeded {
                    n: reps.len(),
                    cap: MAX_CLASSES,
                });
            }
        }
    }
    // le[i][j]: class j is more general than class i
    let mut le = vec![vec![false; reps.len()]; reps.len()];
    for (i, &ri) in reps.iter().enumerate() {
        for (j, &rj) in reps.iter().enumerate() {
            le[i][j] = i == j || find_factor(&homs[rj], &homs[ri])?.is_some();
        }
    }
    let classes = reps.len();
    if (0..classes).any(|i| (0..i).any(|j| le[i][j] && le[j][i])) {
        return Err(Error::Inconsistent("distinct ≈-classes are equivalent".into()));
    }
    let top: Vec<usize> = (0..classes)
        .filter(|&i| (0..classes).all(|j| j == i || !le[i][j]))
        .collect();
    let mu = top
        .iter()
        .map(|&c| Unifier::from_hom(homs[reps[c]].clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut certificates = Vec::new();
    for (c, &r) in reps.iter().enumerate() {
        if top.contains(&c) {
            continue;
        }
        let by = top
            .iter()
            .position(|&m| le[c][m])
            .ok_or_else(|| Error::Inconsistent("class below no maximal class".into()))?;
        let hom = find_factor(&mu[by].hom, &homs[r])?.expect("order entry came from a factor");
        certificates.push(Certificate {
            dominated: Unifier::from_hom(homs[r].clone())?,
            by,
            hom,
        });
    }
    let kind = UnificationType::from_mu_cardinality(Some(mu.len()));
    Ok(MuReport {
        mu_set: mu,
        kind,
        certificates,
        examined: homs.len(),
        classes,
        order: order_frame(&le)?,
    })
}

/// Do the two μ-sets have the same size and pair up under `≈`?
pub fn mu_sets_match(x: &MuReport, y: &MuReport) -> Result<bool> {
    if x.mu_set.len() != y.mu_set.len() {
        return Ok(false);
    }
    for u in &x.mu_set {
        let mut hit = false;
        for v in &y.mu_set {
            if find_factor(&u.hom, &v.hom)?.is_some() && find_factor(&v.hom, &u.hom)?.is_some() {
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCheck {
    pub left: usize,
    pub right: usize,
    pub projective: bool,
    pub indecomposable: bool,
}

#[derive(Clone, Debug)]
pub struct FilteringReport {
    pub products: Vec<ProductCheck>,
    /// Geach on `B_F`; its failure places the fork variety outside the
    /// Geach variety, where unification is not filtering.
    pub geach_on_fork: AxiomReport,
}

impl FilteringReport {
    /// No product of two non-trivial factors is projective.
    pub fn all_products_fail(&self) -> bool {
        self.products.iter().all(|p| !p.projective)
    }
}

/// Projectivity of `A × B` for every unordered pair (with repetition) of the
/// given projective fork algebras.
pub fn filtering_probe(catalog: &[ClosureAlgebra]) -> Result<FilteringReport> {
    let mut products = Vec::new();
    for (i, a) in catalog.iter().enumerate() {
        for (j, b) in catalog.iter().enumerate().skip(i) {
            let p = a.product(b)?;
            products.push(ProductCheck {
                left: i,
                right: j,
                projective: is_projective_fork(&p)?,
                indecomposable: p.is_directly_indecomposable()?,
            });
        }
    }
    let bf = cm(&fork())?;
    Ok(FilteringReport {
        products,
        geach_on_fork: check_axiom(Axiom::Geach, &bf)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::w_frame;

    fn ideal(a: &ClosureAlgebra, atoms: &str) -> ClosedIdeal {
        let g = a.closure(a.parse_element(atoms).unwrap());
        ClosedIdeal::new(a, g).unwrap()
    }

    #[test]
    fn unifiability() {
        let bf = cm(&fork()).unwrap();
        assert!(is_unifiable(&cm(&w_frame()).unwrap()));
        assert!(!is_unifiable(&ClosureAlgebra::trivial()));
        assert!(is_unifiable(&bf.product(&bf).unwrap()));
    }

    #[test]
    fn admissible_in_w() {
        let bw = cm(&w_frame()).unwrap();
        let ks = admissible_congruences(&bw).unwrap();
        let mut quotients: Vec<String> = ks
            .iter()
            .map(|k| bw.format(bw.complement(k.generator())))
            .collect();
        quotients.sort();
        assert_eq!(quotients, ["{t}", "{u',v,w}", "{u,t,v}", "{v}", "{w}"]);

        let bf = cm(&fork()).unwrap();
        let kf = admissible_congruences(&bf).unwrap();
        assert!(kf.contains(&ClosedIdeal::new(&bf, bf.bottom()).unwrap()));
        let two = ClosureAlgebra::two();
        assert_eq!(
            admissible_congruences(&two).unwrap(),
            [ClosedIdeal::new(&two, two.bottom()).unwrap()]
        );
        assert_eq!(
            admissible_congruences(&ClosureAlgebra::trivial()),
            Err(Error::NotForkAlgebra)
        );
    }

    #[test]
    fn w_has_two_maximal_unifiers() {
        let bw = cm(&w_frame()).unwrap();
        let r = mu_set(&bw).unwrap();
        assert_eq!(r.kind, UnificationType::Finitary);
        assert_eq!(r.kernels(), [ideal(&bw, "{t}"), ideal(&bw, "{w}")]);
        assert!(more_general(&r.mu_set[0], &r.mu_set[1]).unwrap().is_none());
        assert!(more_general(&r.mu_set[1], &r.mu_set[0]).unwrap().is_none());
        assert_eq!(r.certificates.len(), 3);
        for q in &r.mu_set {
            assert!(q.quotient.is_isomorphic(&cm(&fork()).unwrap()));
        }
    }

    #[test]
    fn unitary_examples() {
        let bf = cm(&fork()).unwrap();
        assert_eq!(unification_type(&bf), Ok(UnificationType::Unitary));
        let r = mu_set(&bf).unwrap();
        assert_eq!(r.kernels(), [ClosedIdeal::new(&bf, bf.bottom()).unwrap()]);
        assert_eq!(unification_type(&ClosureAlgebra::two()), Ok(UnificationType::Unitary));
        assert_eq!(mu_set(&ClosureAlgebra::trivial()).unwrap_err(), Error::NotUnifiable);
    }

    #[test]
    fn identity_dominates() {
        let bf = cm(&fork()).unwrap();
        let id = Unifier::from_hom(AlgHom::identity(&bf)).unwrap();
        for h in hom_search(&bf, &bf, HomKind::Any) {
            let u = Unifier::from_hom(h.clone()).unwrap();
            assert_eq!(more_general(&id, &u).unwrap(), Some(h));
        }
    }

    #[test]
    fn distinct_prime_kernels_incomparable() {
        let bf = cm(&fork()).unwrap();
        let onto_two = hom_search(&bf, &ClosureAlgebra::two(), HomKind::Surjective);
        assert_eq!(onto_two.len(), 2);
        let (x, y) = (
            Unifier::from_hom(onto_two[0].clone()).unwrap(),
            Unifier::from_hom(onto_two[1].clone()).unwrap(),
        );
        assert_ne!(x.kernel, y.kernel);
        assert!(more_general(&x, &y).unwrap().is_none());
        assert!(more_general(&y, &x).unwrap().is_none());
    }

    #[test]
    fn oracle_small_examples() {
        let bw = cm(&w_frame()).unwrap();
        let r = brute_force_mu(&bw, 5).unwrap();
        assert_eq!(r.mu_set.len(), 2);
        assert!(mu_sets_match(&r, &mu_set(&bw).unwrap()).unwrap());
        assert_eq!(brute_force_mu(&ClosureAlgebra::two(), 2).unwrap().mu_set.len(), 1);
        let bf = cm(&fork()).unwrap();
        let r = brute_force_mu(&bf, 4).unwrap();
        assert_eq!(r.kind, UnificationType::Unitary);
        assert!(mu_sets_match(&r, &mu_set(&bf).unwrap()).unwrap());
    }

    #[test]
    fn oracle_budget() {
        let bw = cm(&w_frame()).unwrap();
        assert_eq!(
            brute_force_mu_with_budget(&bw, 5, 3).unwrap_err(),
            Error::SearchBudgetExceeded(3)
        );
    }

    #[test]
    fn products_are_not_projective() {
        let cat = [ClosureAlgebra::two(), cm(&fork()).unwrap()];
        let r = filtering_probe(&cat).unwrap();
        assert_eq!(r.products.len(), 3);
        assert!(r.all_products_fail());
        assert!(r.products.iter().all(|p| !p.indecomposable));
        assert!(!r.geach_on_fork.holds);
    }
}
