//! The acceptance suite: twelve checks reproducing the finite results on the
//! fork, the frame `W`, and exhaustive catalogs of small frames.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{cm, hom_search, ClosedIdeal, ClosureAlgebra, HomKind};
use crate::axiom::{check_axiom, frame_condition_bd2, frame_condition_bw2, wdp_witness_check, Axiom};
use crate::bits::{Element, PointSet};
use crate::catalog::{enumerate, CatalogQuery};
use crate::error::Result;
use crate::frame::{fork, is_bounded_morphism, mu_sets, w_frame, Frame};
use crate::projectivity::{
    bounded_injectivity_probe, brute_force_retraction, build_retraction, find_bw_subalgebra,
    is_projective_fork, random_instance, ProbeKind,
};
use crate::unification::{
    brute_force_mu, filtering_probe, more_general, mu_set, mu_sets_match, projective_targets,
    MuReport,
};
use crate::UnificationType;

/// Seed for the randomized retraction check.
pub const RETRACTION_SEED: u64 = 0x5eed_f0c4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {:>2} {}: {}", self.id, self.title, self.detail)
    }
}

type Check = fn() -> Result<(bool, String)>;

const CRITERIA: [(&str, Check); 12] = [
    ("fork algebra structure", fork_structure),
    ("closures in B_W", w_closures),
    ("axioms on B_F and B_W", axioms),
    ("frame correspondence", correspondence),
    ("projectivity routes agree", projectivity_routes),
    ("B_W certificate", bw_certificate),
    ("constructive retraction", retractions),
    ("unification of B_W", unification_of_w),
    ("type theorem", type_theorem),
    ("variety sanity", variety_sanity),
    ("WDP and filtering", wdp_and_filtering),
    ("μ-set cardinality", mu_cardinality),
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Runs criterion `id` (1-based).
pub fn run(id: usize) -> CriterionOutcome {
    let (title, check) = CRITERIA[id - 1];
    let start = Instant::now();
    let (passed, detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionOutcome {
        id,
        title,
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

pub fn run_all() -> Vec<CriterionOutcome> {
    (1..=CRITERIA.len()).map(run).collect()
}

fn elements(a: &ClosureAlgebra, names: &[&str]) -> Result<Vec<Element>> {
    names.iter().map(|n| a.parse_element(n)).collect()
}

fn fork_structure() -> Result<(bool, String)> {
    let bf = cm(&fork())?;
    let mut closed = bf.closed_elements();
    closed.sort();
    let mut want = elements(&bf, &["0", "{u}", "{u,v}", "{u,w}", "1"])?;
    want.sort();
    let ok = bf.size() == 8 && bf.atom_count() == 3 && closed == want;
    let shown: Vec<String> = closed.iter().map(|&x| bf.format(x)).collect();
    Ok((ok, format!("{} elements, {} atoms, closed {}", bf.size(), bf.atom_count(), shown.join(" "))))
}

fn w_closures() -> Result<(bool, String)> {
    let bw = cm(&w_frame())?;
    let table = [
        ("{u}", "{u}"),
        ("{u'}", "{u'}"),
        ("{t}", "{u,t}"),
        ("{v}", "{u,u',v}"),
        ("{w}", "{u',w}"),
    ];
    let mut bad = Vec::new();
    for (x, fx) in table {
        let got = bw.closure(bw.parse_element(x)?);
        if got != bw.parse_element(fx)? {
            bad.push(format!("f{x}={}", bw.format(got)));
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "all five match".into() } else { bad.join(", ") }))
}

fn axioms() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, frame) in [("B_F", fork()), ("B_W", w_frame())] {
        let a = cm(&frame)?;
        for ax in [Axiom::Grz, Axiom::Bd2, Axiom::Bw2] {
            let r = check_axiom(ax, &a)?;
            ok &= r.holds && r.checked <= 1024;
            notes.push(format!("{} on {name}: {} ({})", ax.name(), r.holds, r.checked));
        }
    }
    let bf = cm(&fork())?;
    let g = check_axiom(Axiom::Geach, &bf)?;
    let witness = g.format_witness(&bf);
    ok &= !g.holds && witness.as_deref() == Some("x={v}");
    notes.push(format!("G on B_F fails at {}", witness.unwrap_or_default()));
    Ok((ok, notes.join("; ")))
}

fn correspondence() -> Result<(bool, String)> {
    let mut frames = 0;
    let mut bad = 0;
    for f in enumerate(&CatalogQuery::quasiorders(5))? {
        let a = cm(&f)?;
        frames += 1;
        if check_axiom(Axiom::Bd2, &a)?.holds != frame_condition_bd2(&f)?
            || check_axiom(Axiom::Bw2, &a)?.holds != frame_condition_bw2(&f)?
        {
            bad += 1;
        }
    }
    Ok((bad == 0 && frames == 185, format!("{frames} quasiorders, {bad} exceptions")))
}

fn projectivity_routes() -> Result<(bool, String)> {
    let mut frames = 0;
    let mut projective = 0;
    let mut bad = Vec::new();
    for f in enumerate(&CatalogQuery::fork_frames(6).connected())? {
        let a = cm(&f)?;
        frames += 1;
        let by_atoms = is_projective_fork(&a)?;
        let by_bw = find_bw_subalgebra(&a)?.is_none();
        let by_retraction = bounded_injectivity_probe(&f, 2, ProbeKind::Fork, None)?.all_retractable();
        projective += by_atoms as usize;
        if by_atoms != by_bw || by_atoms != by_retraction {
            bad.push(format!("{f:?}"));
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "{frames} connected fork frames, {projective} projective, {} disagreements",
            bad.len()
        ),
    ))
}

fn bw_certificate() -> Result<(bool, String)> {
    let bw = cm(&w_frame())?;
    let ft = bw.closure(bw.parse_element("{t}")?);
    let fw = bw.closure(bw.parse_element("{w}")?);
    let Some(wit) = find_bw_subalgebra(&bw)? else {
        return Ok((false, "no witness found".into()));
    };
    let got = [wit.v, wit.d, wit.u, wit.t, wit.u_prime, wit.w].map(|x| bw.format(x));
    let want = ["{v}", "{u,u'}", "{u}", "{t}", "{u'}", "{w}"];
    let ok = (ft & fw).is_empty() && got == want;
    Ok((
        ok,
        format!(
            "f(t)·f(w)={}, v={} d={} u={} t={} u'={} w={}",
            bw.format(ft & fw),
            got[0],
            got[1],
            got[2],
            got[3],
            got[4],
            got[5]
        ),
    ))
}

fn retractions() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(RETRACTION_SEED);
    let (mut failures, mut compared) = (Vec::new(), 0);
    for i in 0..500 {
        let (w, emb) = random_instance(&mut rng, 12);
        let plan = match build_retraction(&w, &emb) {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("#{i}: {e}"));
                continue;
            }
        };
        let m = &plan.map;
        let fixes_v = emb.map().iter().enumerate().all(|(j, &x)| m.apply(x) == j);
        if !(is_bounded_morphism(m) && m.is_surjective() && fixes_v) {
            failures.push(format!("#{i}: invalid retraction"));
            continue;
        }
        if w.len() <= 8 {
            compared += 1;
            if brute_force_retraction(&w, &emb, None)?.is_none() {
                failures.push(format!("#{i}: search finds no retraction"));
            }
        }
    }
    let detail = format!(
        "500 instances, {compared} compared with search, {} failures{}",
        failures.len(),
        failures.first().map(|f| format!(" (first {f})")).unwrap_or_default()
    );
    Ok((failures.is_empty(), detail))
}

fn unification_of_w() -> Result<(bool, String)> {
    let bw = cm(&w_frame())?;
    let r = mu_set(&bw)?;
    let ideal = |x: &str| -> Result<ClosedIdeal> {
        ClosedIdeal::new(&bw, bw.closure(bw.parse_element(x)?))
    };
    let kernels_ok = r.kernels() == [ideal("{t}")?, ideal("{w}")?];
    let incomparable = r.mu_set.len() == 2
        && more_general(&r.mu_set[0], &r.mu_set[1])?.is_none()
        && more_general(&r.mu_set[1], &r.mu_set[0])?.is_none();
    let oracle = brute_force_mu(&bw, bw.atom_count())?;
    let agree = mu_sets_match(&r, &oracle)?;
    let ok = kernels_ok && incomparable && r.kind == UnificationType::Finitary && agree;
    let shown: Vec<String> = r
        .kernels()
        .iter()
        .map(|k| format!("↓{}", bw.format(k.generator())))
        .collect();
    Ok((
        ok,
        format!(
            "μ = {{{}}}, type {}, oracle {} classes from {} unifiers, match {agree}",
            shown.join(", "),
            r.kind,
            oracle.classes,
            oracle.examined
        ),
    ))
}

fn type_theorem() -> Result<(bool, String)> {
    let (mut algebras, mut bad) = (0, Vec::new());
    let (mut unitary, mut finitary) = (0, 0);
    for f in enumerate(&CatalogQuery::fork_frames(5))? {
        let a = cm(&f)?;
        algebras += 1;
        let r = mu_set(&a)?;
        match r.kind {
            UnificationType::Unitary => unitary += 1,
            UnificationType::Finitary => finitary += 1,
            _ => bad.push(format!("{f:?}: type {}", r.kind)),
        }
        let oracle = brute_force_mu(&a, a.atom_count())?;
        if !mu_sets_match(&r, &oracle)? {
            bad.push(format!("{f:?}: oracle disagrees"));
        }
    }
    Ok((
        bad.is_empty(),
        format!("{algebras} fork algebras: {unitary} unitary, {finitary} finitary, {} exceptions", bad.len()),
    ))
}

fn variety_sanity() -> Result<(bool, String)> {
    let bw = cm(&w_frame())?;
    let mut ok = true;
    for ax in [Axiom::Grz, Axiom::Bd2, Axiom::Bw2] {
        ok &= check_axiom(ax, &bw)?.holds;
    }
    // ↑u' is the complement of the closed element u+t
    let g = bw.parse_element("{u,t}")?;
    let (q, p) = bw.quotient(&ClosedIdeal::new(&bw, g)?);
    let bf = cm(&fork())?;
    let image_ok = p.is_surjective() && q.is_isomorphic(&bf);
    let surjections = hom_search(&bw, &bf, HomKind::Surjective).len();
    ok &= image_ok && surjections > 0;
    Ok((
        ok,
        format!("axioms hold on B_W: {ok}; B_W/↓(u+t) ≅ B_F: {image_ok}; {surjections} surjections B_W ↠ B_F"),
    ))
}

fn wdp_and_filtering() -> Result<(bool, String)> {
    let bf = cm(&fork())?;
    let on_bf = wdp_witness_check(&bf).holds;
    let square = wdp_witness_check(&bf.product(&bf)?).holds;
    let targets = projective_targets(5)?;
    let probe = filtering_probe(&targets)?;
    let ok = on_bf && !square && probe.all_products_fail() && !probe.geach_on_fork.holds;
    Ok((
        ok,
        format!(
            "WDP on B_F {on_bf}, on B_F×B_F {square}; {} products of {} projectives, {} projective",
            probe.products.len(),
            targets.len(),
            probe.products.iter().filter(|p| p.projective).count()
        ),
    ))
}

/// Every dense antichain of a quasiorder, by direct search over points in
/// index order. A branch is cut once some point already passed can no longer
/// be covered by a chosen point or a later compatible one.
fn dense_antichains(f: &Frame) -> Vec<PointSet> {
    fn compatible(f: &Frame, y: usize, chosen: PointSet) -> bool {
        chosen.iter().all(|c| !f.rel(y, c) && !f.rel(c, y))
    }
    fn coverable(f: &Frame, x: usize, chosen: PointSet) -> bool {
        let covered = chosen.iter().fold(PointSet::EMPTY, |acc, m| acc | f.pred(m));
        (0..=x).filter(|&z| !covered.contains(z)).all(|z| {
            (x + 1..f.len()).any(|y| f.rel(z, y) && compatible(f, y, chosen))
        })
    }
    fn go(f: &Frame, x: usize, chosen: PointSet, out: &mut Vec<PointSet>) {
        if x == f.len() {
            out.push(chosen);
            return;
        }
        if coverable(f, x, chosen) {
            go(f, x + 1, chosen, out);
        }
        if compatible(f, x, chosen) {
            let mut next = chosen;
            next.insert(x);
            if coverable(f, x, next) {
                go(f, x + 1, next, out);
            }
        }
    }
    let mut out = Vec::new();
    go(f, 0, PointSet::EMPTY, &mut out);
    out
}

/// All dense antichains of `f` have the size `mu_sets` reports, and there are
/// as many as it counts.
fn invariant_holds(f: &Frame) -> Result<bool> {
    let all = dense_antichains(f);
    let mu = mu_sets(f)?;
    Ok(all.iter().all(|s| s.len() == mu.cardinality()) && all.len() as u128 == mu.count())
}

fn report_invariant(r: &MuReport) -> Result<bool> {
    match &r.order {
        Some(order) => Ok(invariant_holds(order)? && mu_sets(order)?.cardinality() == r.mu_set.len()),
        None => Ok(true),
    }
}

fn mu_cardinality() -> Result<(bool, String)> {
    let (mut frames, mut orders, mut bad) = (0, 0, 0);
    for f in enumerate(&CatalogQuery::quasiorders(5))? {
        frames += 1;
        bad += !invariant_holds(&f)? as usize;
    }
    let mut algebras = vec![cm(&w_frame())?];
    for f in enumerate(&CatalogQuery::fork_frames(5))? {
        algebras.push(cm(&f)?);
    }
    for a in &algebras {
        for r in [mu_set(a)?, brute_force_mu(a, a.atom_count())?] {
            orders += r.order.is_some() as usize;
            bad += !report_invariant(&r)? as usize;
        }
    }
    Ok((
        bad == 0,
        format!("{frames} quasiorders and {orders} unifier orders, {bad} exceptions"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{antichain, chain};

    #[test]
    fn dense_antichains_small() {
        assert_eq!(dense_antichains(&chain(3)).len(), 1);
        assert_eq!(dense_antichains(&antichain(3)), [PointSet(0b111)]);
        let cluster = Frame::from_fn(2, |_, _| true).unwrap();
        assert_eq!(dense_antichains(&cluster).len(), 2);
        assert!(invariant_holds(&cluster).unwrap());
    }

    #[test]
    fn outcome_display() {
        let o = run(1);
        assert!(o.to_string().starts_with("PASS  1 fork algebra structure"));
    }
}
