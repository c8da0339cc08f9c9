//! Bounded retractions of fork frames onto projective generated subframes.

use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use rand::Rng;

use super::is_projective_fork_frame;
use crate::bits::PointSet;
use crate::catalog::random::{extend_fork_frame, random_fork_frame};
use crate::error::{Error, Result};
use crate::frame::{is_generated_subframe, Frame, Morphism, MorphismSearch};

/// Why a point of `W` received its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// Point of `V`, fixed.
    InV,
    /// Outside the component of `V`; sent to a maximal point of `V`.
    OutsideComponent,
    /// `V` has a single point and everything collapses onto it.
    Collapse,
    /// Lower point with its single strict successor in `V`.
    W1Single,
    /// Lower point with both strict successors in `V`; sent to a common lower
    /// point of the two.
    W1Pair,
    /// Upper point outside `V` above a lower point that also sees `V`.
    W2Top,
    /// Lower point whose `V`-successor is the one chosen for its top.
    W2Same,
    /// Lower point whose `V`-successor differs from the one chosen for its top.
    W2Split,
    /// Upper point first reached from a lower point with no successor in `V`.
    W3Top,
    /// Lower point with one strict successor, none in `V`.
    W3Single,
    /// Lower point with two strict successors, both already assigned.
    W3Both,
    /// Lower point with two strict successors, one already assigned.
    W3One,
    /// Lower point with two strict successors, neither assigned yet.
    W3Neither,
}

impl Case {
    /// Short code naming the branch of the construction.
    pub fn code(self) -> &'static str {
        match self {
            Case::InV => "V",
            Case::OutsideComponent => "outside",
            Case::Collapse => "collapse",
            Case::W1Single => "1a",
            Case::W1Pair => "1b",
            Case::W2Top => "2:top",
            Case::W2Same => "2:same",
            Case::W2Split => "2:split",
            Case::W3Top => "3:top",
            Case::W3Single => "3:single",
            Case::W3Both => "3:both",
            Case::W3One => "3:one",
            Case::W3Neither => "3:neither",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseEntry {
    /// Point of `W`.
    pub point: usize,
    pub case: Case,
    /// Its image, a point of `V`.
    pub value: usize,
}

/// A bounded retraction `p: W ↠ V` with a record of how it was built.
#[derive(Clone, Debug)]
pub struct RetractionPlan {
    pub sup: Arc<Frame>,
    pub sub: Arc<Frame>,
    pub embedding: Morphism,
    pub map: Morphism,
    /// One entry per point of `W`, in the order values were fixed.
    pub case_log: Vec<CaseEntry>,
    /// Lower points of `W` outside `V` by case: all strict successors in `V`,
    /// some in `V`, none in `V`.
    pub w1: PointSet,
    pub w2: PointSet,
    pub w3: PointSet,
}

impl RetractionPlan {
    /// The case log as text, one line per point.
    pub fn explain(&self) -> String {
        let mut out = String::new();
        for e in &self.case_log {
            out.push_str(&format!(
                "{} -> {}  [{}]\n",
                self.sup.label(e.point),
                self.sub.label(e.value),
                e.case
            ));
        }
        out
    }
}

struct Builder<'a> {
    w: &'a Frame,
    v: &'a Frame,
    /// `V` index of each `W` point of the image, else `usize::MAX`.
    inv: Vec<usize>,
    emb: Vec<usize>,
    p: Vec<Option<usize>>,
    log: Vec<CaseEntry>,
    /// Lower and upper levels of `V`, in `V` indices.
    lv1: PointSet,
    lv2: PointSet,
}

impl Builder<'_> {
    fn set(&mut self, x: usize, val: usize, case: Case) {
        debug_assert!(self.p[x].is_none());
        self.p[x] = Some(val);
        self.log.push(CaseEntry {
            point: x,
            case,
            value: val,
        });
    }

    fn to_v(&self, x: usize) -> usize {
        self.inv[x]
    }

    /// Least lower point of `V` below both `a` and `b` (`V` indices).
    fn common_lower(&self, a: usize, b: usize) -> Result<usize> {
        (self.v.pred(a) & self.v.pred(b) & self.lv1)
            .first()
            .ok_or_else(|| {
                Error::ProofGap(format!(
                    "no lower point of V below both {} and {}",
                    self.v.label(a),
                    self.v.label(b)
                ))
            })
    }

    fn least_upper(&self) -> usize {
        self.lv2.first().expect("connected V with two or more points has upper points")
    }
}

/// Builds a bounded retraction of the fork frame `w` onto the image of
/// `v_embedding: V → W`, following the case analysis on lower points of `W`
/// outside `V`. Every free choice takes the least index in `V`.
pub fn build_retraction(w: &Frame, v_embedding: &Morphism) -> Result<RetractionPlan> {
    if v_embedding.target() != w {
        return Err(Error::InvalidMorphism("embedding does not land in W".into()));
    }
    let v = v_embedding.source();
    if !v_embedding.is_injective() || !is_generated_subframe(v, w, v_embedding) {
        return Err(Error::NotGenerated(
            "the image of V must be an up-closed copy of V".into(),
        ));
    }
    let levels = w.levels()?;
    if !w.is_fork_frame() {
        return Err(Error::NotForkFrame("local width exceeds two".into()));
    }
    if !is_projective_fork_frame(v)? {
        return Err(Error::NotProjectiveSubalgebra(
            "V is disconnected or has two upper points with nothing in common below".into(),
        ));
    }

    let image = v_embedding.image();
    let mut inv = vec![usize::MAX; w.len()];
    for (i, &x) in v_embedding.map().iter().enumerate() {
        inv[x] = i;
    }
    let v_levels = v.levels()?;
    let mut b = Builder {
        w,
        v,
        inv,
        emb: v_embedding.map().to_vec(),
        p: vec![None; w.len()],
        log: Vec::new(),
        lv1: v_levels.lower,
        lv2: v_levels.upper,
    };
    for x in image.iter() {
        let i = b.to_v(x);
        b.set(x, i, Case::InV);
    }
    let comp = w.component_of(b.emb[0]);
    let top_of_v = v.maximal_points().first().expect("V is non-empty");
    for x in (w.universe() - comp).iter() {
        b.set(x, top_of_v, Case::OutsideComponent);
    }
    let (mut w1, mut w2, mut w3) = (PointSet::EMPTY, PointSet::EMPTY, PointSet::EMPTY);
    if v.len() == 1 {
        for x in (comp - image).iter() {
            b.set(x, 0, Case::Collapse);
        }
    } else {
        let lower_out = levels.lower & (comp - image);
        for x in lower_out.iter() {
            let up = w.strict_up(x);
            if up.is_subset(image) {
                w1.insert(x);
            } else if up.intersects(image) {
                w2.insert(x);
            } else {
                w3.insert(x);
            }
        }
        case_one(&mut b, w1)?;
        case_two(&mut b, w2)?;
        case_three(&mut b, w3)?;
    }

    let map: Vec<usize> = b
        .p
        .iter()
        .enumerate()
        .map(|(x, val)| val.ok_or_else(|| Error::ProofGap(format!("point {} left unassigned", w.label(x)))))
        .collect::<Result<_>>()?;
    let sup = v_embedding.target_shared().clone();
    let sub = v_embedding.source_shared().clone();
    let map = Morphism::from_shared(sup.clone(), sub.clone(), map)?;
    if !map.is_bounded() || !map.is_surjective() {
        return Err(Error::ProofGap("constructed map is not a bounded epimorphism".into()));
    }
    if (0..v.len()).any(|i| map.apply(b.emb[i]) != i) {
        return Err(Error::ProofGap("constructed map moves a point of V".into()));
    }
    Ok(RetractionPlan {
        sup,
        sub,
        embedding: v_embedding.clone(),
        map,
        case_log: b.log,
        w1,
        w2,
        w3,
    })
}

fn case_one(b: &mut Builder<'_>, w1: PointSet) -> Result<()> {
    for x in w1.iter() {
        let up: Vec<usize> = b.w.strict_up(x).iter().map(|y| b.to_v(y)).collect();
        match up[..] {
            [v] => b.set(x, v, Case::W1Single),
            [v, w] => {
                let u = b.common_lower(v, w)?;
                b.set(x, u, Case::W1Pair);
            }
            _ => return Err(Error::ProofGap(format!("{} has no strict successor", b.w.label(x)))),
        }
    }
    Ok(())
}

fn case_two(b: &mut Builder<'_>, w2: PointSet) -> Result<()> {
    // each x in W2 has exactly one successor y outside V and one v inside
    let mut groups: Vec<(usize, Vec<(usize, usize)>)> = Vec::new();
    for x in w2.iter() {
        let up = b.w.strict_up(x);
        let y = up.iter().find(|&y| b.inv[y] == usize::MAX).expect("W2 sees outside V");
        let v = up.iter().find(|&y| b.inv[y] != usize::MAX).expect("W2 sees V");
        let v = b.to_v(v);
        match groups.iter_mut().find(|g| g.0 == y) {
            Some(g) => g.1.push((x, v)),
            None => groups.push((y, vec![(x, v)])),
        }
    }
    groups.sort_by_key(|g| g.0);
    for (y, members) in groups {
        let v1 = members[0].1;
        b.set(y, v1, Case::W2Top);
        for (x, vi) in members {
            if vi == v1 {
                b.set(x, v1, Case::W2Same);
            } else {
                let u = b.common_lower(v1, vi)?;
                b.set(x, u, Case::W2Split);
            }
        }
    }
    Ok(())
}

fn case_three(b: &mut Builder<'_>, w3: PointSet) -> Result<()> {
    for x in w3.iter() {
        let up: Vec<usize> = b.w.strict_up(x).iter().collect();
        match up[..] {
            [y] => match b.p[y] {
                Some(py) => {
                    if !b.v.strict_up(py).is_empty() {
                        return Err(Error::ProofGap(format!(
                            "{} is sent to {}, which is not maximal in V",
                            b.w.label(y),
                            b.v.label(py)
                        )));
                    }
                    b.set(x, py, Case::W3Single);
                }
                None => {
                    let v = b.least_upper();
                    b.set(y, v, Case::W3Top);
                    b.set(x, v, Case::W3Single);
                }
            },
            [y, z] => match (b.p[y], b.p[z]) {
                (Some(py), Some(pz)) => {
                    // equal images need x on that point, not below it
                    let u = if py == pz { py } else { b.common_lower(py, pz)? };
                    b.set(x, u, Case::W3Both);
                }
                (Some(_), None) | (None, Some(_)) => {
                    let (done, open) = if b.p[y].is_some() { (y, z) } else { (z, y) };
                    let pd = b.p[done].expect("checked");
                    let v = b.least_upper();
                    b.set(open, v, Case::W3Top);
                    let u = if v == pd { v } else { b.common_lower(pd, v)? };
                    b.set(x, u, Case::W3One);
                }
                (None, None) => {
                    let v = b.least_upper();
                    b.set(y, v, Case::W3Top);
                    b.set(z, v, Case::W3Top);
                    // a lower point of V under v alone, if there is one
                    let lonely = (b.v.pred(v) & b.lv1)
                        .iter()
                        .find(|&u| b.v.strict_up(u) == PointSet::singleton(v));
                    b.set(x, lonely.unwrap_or(v), Case::W3Neither);
                }
            },
            _ => return Err(Error::ProofGap(format!("{} has no strict successor", b.w.label(x)))),
        }
    }
    Ok(())
}

/// The lexicographically least bounded retraction `W ↠ V` fixing the image of
/// `v_embedding`, found by exhaustive search.
pub fn brute_force_retraction(w: &Frame, v_embedding: &Morphism, budget: Option<u64>) -> Result<Option<Morphism>> {
    if v_embedding.target() != w {
        return Err(Error::InvalidMorphism("embedding does not land in W".into()));
    }
    let v = v_embedding.source();
    if !v_embedding.is_injective() || !v_embedding.is_bounded() {
        return Err(Error::NotGenerated("the embedding must be injective and bounded".into()));
    }
    let mut search = MorphismSearch::new(w, v).surjective(true);
    for (i, &x) in v_embedding.map().iter().enumerate() {
        search = search.fix(x, i);
    }
    if let Some(b) = budget {
        search = search.budget(b);
    }
    Ok(match search.first()? {
        Some(map) => Some(Morphism::from_shared(
            v_embedding.target_shared().clone(),
            v_embedding.source_shared().clone(),
            map,
        )?),
        None => None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeKind {
    /// Extensions must be fork frames.
    Fork,
    /// Extensions may be any quasiorder.
    Quasiorder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    /// Extension frames examined (labelled, so isomorphic copies may repeat).
    pub extensions: usize,
    pub retractable: usize,
    /// The first extension without a retraction, with `V` on points `0..|V|`.
    pub first_failure: Option<Frame>,
}

impl ProbeReport {
    pub fn all_retractable(&self) -> bool {
        self.extensions == self.retractable
    }
}

/// Checks every extension of `v` by up to `extra` new points in which `v`
/// stays a generated subframe, asking for a bounded retraction onto `v`.
pub fn bounded_injectivity_probe(
    v: &Frame,
    extra: usize,
    kind: ProbeKind,
    budget: Option<u64>,
) -> Result<ProbeReport> {
    v.require_quasiorder()?;
    if kind == ProbeKind::Fork && !v.is_fork_frame() {
        return Err(Error::NotForkFrame("the probed frame must be a fork frame".into()));
    }
    let mut report = ProbeReport {
        extensions: 0,
        retractable: 0,
        first_failure: None,
    };
    let base = Frame::from_succ_unchecked(v.rows().to_vec(), None);
    let vshared = Arc::new(base.clone());
    let mut err = None;
    let _ = for_each_extension(&base, v.len(), extra, kind, &mut |w| {
        let wshared = Arc::new(w.clone());
        let emb = Morphism::from_shared(vshared.clone(), wshared, (0..v.len()).collect())
            .expect("V occupies the first points");
        report.extensions += 1;
        match brute_force_retraction(w, &emb, budget) {
            Ok(Some(_)) => report.retractable += 1,
            Ok(None) => {
                if report.first_failure.is_none() {
                    report.first_failure = Some(w.clone());
                }
            }
            Err(e) => {
                err = Some(e);
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    match err {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

/// Calls `visit` on every extension of `f` by 1 to `extra` points. No new
/// point sits above a point of the prefix `0..keep`, which stays up-closed.
fn for_each_extension(
    f: &Frame,
    keep: usize,
    extra: usize,
    kind: ProbeKind,
    visit: &mut dyn FnMut(&Frame) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if extra == 0 {
        return ControlFlow::Continue(());
    }
    let n = f.len();
    let protected = PointSet(crate::bits::full_mask(keep));
    let subsets = || (0..1u64 << n).map(PointSet);
    let downs: Vec<PointSet> = subsets()
        .filter(|&s| !s.intersects(protected) && f.is_down_closed(s))
        .collect();
    let ups: Vec<PointSet> = subsets().filter(|&s| f.is_up_closed(s)).collect();
    for &d in &downs {
        let above_all_d = d.iter().fold(f.universe(), |acc, x| acc & f.succ(x));
        for &u in &ups {
            if !u.is_subset(above_all_d) || (kind == ProbeKind::Fork && d.intersects(u)) {
                continue;
            }
            let mut rows = f.rows().to_vec();
            for x in d.iter() {
                rows[x].insert(n);
            }
            let mut own = u;
            own.insert(n);
            rows.push(own);
            let g = Frame::from_succ_unchecked(rows, None);
            if kind == ProbeKind::Fork && !g.is_fork_frame() {
                continue;
            }
            visit(&g)?;
            for_each_extension(&g, keep, extra - 1, kind, visit)?;
        }
    }
    ControlFlow::Continue(())
}

/// A random fork frame `W` with at most `max_points` points and an embedded
/// projective generated subframe `V`.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, max_points: usize) -> (Frame, Morphism) {
    assert!(max_points >= 1);
    let v = loop {
        let k = rng.gen_range(1..=max_points.min(6));
        let cand = random_fork_frame(rng, k);
        if is_projective_fork_frame(&cand).expect("random frames are fork frames") {
            break cand;
        }
    };
    let extra = rng.gen_range(0..=max_points - v.len());
    extend_fork_frame(rng, &v, extra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{fork, w_frame};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// The fork `u<v, u<w` on points 0..3 plus extra points and pairs.
    fn fork_plus(extra: usize, pairs: &[(usize, usize)]) -> (Frame, Morphism) {
        let mut all = vec![(0, 1), (0, 2)];
        all.extend_from_slice(pairs);
        let w = Frame::new(3 + extra, all.into_iter().chain((0..3 + extra).map(|i| (i, i))))
            .unwrap()
            .reflexive_transitive_closure();
        let emb = Morphism::new(&fork(), &w, vec![0, 1, 2]).unwrap();
        (w, emb)
    }

    fn case_of(plan: &RetractionPlan, x: usize) -> (Case, usize) {
        let e = plan.case_log.iter().find(|e| e.point == x).unwrap();
        (e.case, e.value)
    }

    #[test]
    fn case_1a() {
        let (w, emb) = fork_plus(1, &[(3, 1)]);
        let plan = build_retraction(&w, &emb).unwrap();
        assert_eq!(case_of(&plan, 3), (Case::W1Single, 1));
    }

    #[test]
    fn case_1b() {
        let (w, emb) = fork_plus(1, &[(3, 1), (3, 2)]);
        let plan = build_retraction(&w, &emb).unwrap();
        assert_eq!(case_of(&plan, 3), (Case::W1Pair, 0));
    }

    #[test]
    fn case_2() {
        // x=3 below v and the fresh top y=4
        let (w, emb) = fork_plus(2, &[(3, 1), (3, 4)]);
        let plan = build_retraction(&w, &emb).unwrap();
        assert_eq!(case_of(&plan, 4), (Case::W2Top, 1));
        assert_eq!(case_of(&plan, 3), (Case::W2Same, 1));
        assert_eq!(plan.w2, PointSet::singleton(3));
        let brute = brute_force_retraction(&w, &emb, None).unwrap();
        assert!(brute.is_some());
    }

    #[test]
    fn identity_when_v_is_w() {
        let w = w_frame();
        let id = Morphism::identity(&w);
        assert!(build_retraction(&w, &id).is_err(), "W itself is not projective");
        let found = brute_force_retraction(&w, &id, None).unwrap().unwrap();
        assert_eq!(found.map(), &[0, 1, 2, 3, 4]);
        let f = fork();
        let plan = build_retraction(&f, &Morphism::identity(&f)).unwrap();
        assert_eq!(plan.map.map(), &[0, 1, 2]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = fork();
        let w = w_frame();
        // {u, t, v} as a copy of the fork is up-closed
        let emb = Morphism::new(&f, &w, vec![0, 2, 3]).unwrap();
        assert!(build_retraction(&w, &emb).is_ok());
        // {u', t, w}: not up-closed
        let emb = Morphism::new(&f, &w, vec![1, 2, 4]).unwrap();
        assert!(matches!(build_retraction(&w, &emb), Err(Error::NotGenerated(_))));
    }

    #[test]
    fn w_retracts_onto_its_forks() {
        let w = w_frame();
        for map in [vec![0, 2, 3], vec![1, 3, 4]] {
            let emb = Morphism::new(&fork(), &w, map).unwrap();
            let plan = build_retraction(&w, &emb).unwrap();
            assert!(plan.map.is_bounded());
            assert!(brute_force_retraction(&w, &emb, None).unwrap().is_some());
        }
    }

    #[test]
    fn random_instances_retract() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let (w, emb) = random_instance(&mut rng, 10);
            let plan = build_retraction(&w, &emb).unwrap_or_else(|e| panic!("{e} on {w:?} / {emb:?}"));
            assert!(plan.map.is_bounded() && plan.map.is_surjective());
        }
    }

    #[test]
    fn probe_fork_and_w() {
        let r = bounded_injectivity_probe(&fork(), 2, ProbeKind::Fork, None).unwrap();
        assert!(r.extensions > 0);
        assert!(r.all_retractable());
        let r = bounded_injectivity_probe(&w_frame(), 1, ProbeKind::Fork, None).unwrap();
        assert!(!r.all_retractable());
        let r = bounded_injectivity_probe(&crate::frame::single_point(), 2, ProbeKind::Quasiorder, None).unwrap();
        assert!(r.all_retractable());
    }
}
