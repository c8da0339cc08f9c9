use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use forkalg::axiom::{check_equation_with_budget, parse_term, Axiom, AxiomReport, DEFAULT_BUDGET};
use forkalg::catalog::{enumerate, CatalogQuery, OrderKind};
use forkalg::frame::{is_bounded_morphism, mu_sets, write_frame};
use forkalg::projectivity::{
    brute_force_retraction, build_retraction, find_all_bw_subalgebras, find_bw_subalgebra,
    is_projective_fork, zero_meet_pair,
};
use forkalg::unification::{
    admissible_congruences, brute_force_mu, is_unifiable, mu_set, mu_sets_match, Unifier,
};
use forkalg::{verify, ClosureAlgebra, Error, Frame, Morphism, PointSet};
use serde::Serialize;

use crate::dot::{render, Highlight};
use crate::input::{load_algebra, load_frame};
use crate::Format;

pub struct Ctx {
    pub format: Format,
    pub close: bool,
}

pub struct Outcome {
    pub rendered: String,
    pub verdict: bool,
}

impl Ctx {
    /// Renders a report in the requested format. `dot` is `None` for commands
    /// without a graph.
    fn finish<R: Serialize>(&self, report: &R, text: String, dot: Option<String>, verdict: bool) -> Result<Outcome> {
        let rendered = match self.format {
            Format::Text => text,
            Format::Json => serde_json::to_string_pretty(report)?,
            Format::Dot => match dot {
                Some(d) => d,
                None => bail!("--format dot is not available for this command"),
            },
        };
        Ok(Outcome { rendered, verdict })
    }
}

fn names(f: &Frame, s: PointSet) -> Vec<String> {
    f.names(s).into_iter().map(str::to_string).collect()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct FrameStats {
    points: usize,
    labels: Vec<String>,
    pairs: usize,
    reflexive: bool,
    transitive: bool,
    quasiorder: bool,
    partial_order: bool,
    connected: bool,
    components: Vec<Vec<String>>,
    height: Option<usize>,
    width: Option<usize>,
    local_width: Option<usize>,
    lower: Option<Vec<String>>,
    upper: Option<Vec<String>>,
    fork_frame: bool,
    projective: Option<bool>,
}

pub fn frame_stats(ctx: &Ctx, input: &str) -> Result<Outcome> {
    let f = load_frame(input, ctx.close)?;
    let stats = f.order_stats().ok();
    let levels = f.levels().ok();
    let fork_frame = f.is_fork_frame();
    let projective = if fork_frame {
        Some(forkalg::projectivity::is_projective_fork_frame(&f)?)
    } else {
        None
    };
    let r = FrameStats {
        points: f.len(),
        labels: f.labels().to_vec(),
        pairs: f.edge_count(),
        reflexive: f.is_reflexive(),
        transitive: f.is_transitive(),
        quasiorder: f.is_quasiorder(),
        partial_order: f.is_partial_order(),
        connected: f.is_connected(),
        components: f.components().into_iter().map(|c| names(&f, c)).collect(),
        height: stats.map(|s| s.height),
        width: stats.map(|s| s.width),
        local_width: stats.map(|s| s.local_width),
        lower: levels.as_ref().map(|l| names(&f, l.lower)),
        upper: levels.as_ref().map(|l| names(&f, l.upper)),
        fork_frame,
        projective,
    };
    let mut t = String::new();
    let _ = writeln!(t, "points: {} ({})", r.points, r.labels.join(" "));
    let _ = writeln!(t, "pairs: {}", r.pairs);
    let _ = writeln!(t, "quasiorder: {}", yes(r.quasiorder));
    let _ = writeln!(t, "partial order: {}", yes(r.partial_order));
    let _ = writeln!(t, "connected: {} (components: {})", yes(r.connected), r.components.len());
    if let Some(s) = stats {
        let _ = writeln!(t, "height: {}  width: {}  local width: {}", s.height, s.width, s.local_width);
    }
    if let (Some(lo), Some(up)) = (&r.lower, &r.upper) {
        let _ = writeln!(t, "lower: {}  upper: {}", lo.join(" "), up.join(" "));
    }
    let _ = writeln!(t, "fork frame: {}", yes(fork_frame));
    if let Some(p) = projective {
        let _ = writeln!(t, "projective: {p}");
    }
    let dot = render(&f, input, &[]);
    ctx.finish(&r, t, Some(dot), true)
}

#[derive(Serialize)]
struct MuReportOut {
    cardinality: usize,
    count: String,
    r#type: &'static str,
    type_name: &'static str,
    maximal_clusters: Vec<Vec<String>>,
    mu_sets: Vec<Vec<String>>,
}

/// μ-sets listed at most.
const MU_LIST_LIMIT: usize = 32;

pub fn frame_mu(ctx: &Ctx, input: &str) -> Result<Outcome> {
    let f = load_frame(input, ctx.close)?;
    let mu = mu_sets(&f)?;
    let r = MuReportOut {
        cardinality: mu.cardinality(),
        count: mu.count().to_string(),
        r#type: mu.kind().symbol(),
        type_name: mu.kind().name(),
        maximal_clusters: mu.maximal_clusters.iter().map(|&c| names(&f, c)).collect(),
        mu_sets: mu.iter().take(MU_LIST_LIMIT).map(|s| names(&f, s)).collect(),
    };
    let mut t = String::new();
    let _ = writeln!(t, "type: {} ({})", r.r#type, r.type_name);
    let _ = writeln!(t, "μ-set cardinality: {}", r.cardinality);
    let _ = writeln!(t, "μ-sets: {}", r.count);
    for s in &r.mu_sets {
        let _ = writeln!(t, "  {{{}}}", s.join(","));
    }
    ctx.finish(&r, t, None, true)
}

#[derive(Serialize)]
struct AxiomOut {
    name: String,
    holds: bool,
    checked: u64,
    witness: Option<String>,
}

fn axiom_out(a: &ClosureAlgebra, name: String, r: &AxiomReport) -> AxiomOut {
    AxiomOut {
        name,
        holds: r.holds,
        checked: r.checked,
        witness: r.format_witness(a),
    }
}

pub fn algebra_axioms(
    ctx: &Ctx,
    input: &str,
    axioms: &[String],
    terms: &[String],
    budget: Option<u64>,
) -> Result<Outcome> {
    let (_, a) = load_algebra(input, ctx.close)?;
    let budget = budget.unwrap_or(DEFAULT_BUDGET);
    let mut chosen = Vec::new();
    for name in axioms {
        chosen.push(Axiom::from_name(name).with_context(|| format!("unknown axiom `{name}`"))?);
    }
    if chosen.is_empty() && terms.is_empty() {
        chosen = Axiom::ALL.to_vec();
    }
    let mut results = Vec::new();
    for ax in chosen {
        let r = check_equation_with_budget(&ax.term(), &a, budget)?;
        results.push(axiom_out(&a, ax.name().to_string(), &r));
    }
    for text in terms {
        let t = parse_term(text).with_context(|| format!("--term `{text}`"))?;
        let r = check_equation_with_budget(&t, &a, budget)?;
        results.push(axiom_out(&a, t.to_string(), &r));
    }
    let all = results.iter().all(|r| r.holds);
    let mut t = String::new();
    for r in &results {
        let _ = write!(t, "{}: {} ({} assignments)", r.name, if r.holds { "holds" } else { "fails" }, r.checked);
        if let Some(w) = &r.witness {
            let _ = write!(t, ", witness {w}");
        }
        t.push('\n');
    }
    ctx.finish(&results, t, None, all)
}

#[derive(Serialize)]
struct ProjectiveOut {
    projective: bool,
    indecomposable: bool,
    zero_meet_pair: Option<[String; 2]>,
}

pub fn algebra_projective(ctx: &Ctx, input: &str) -> Result<Outcome> {
    let (f, a) = load_algebra(input, ctx.close)?;
    let projective = is_projective_fork(&a)?;
    let indecomposable = a.is_directly_indecomposable()?;
    let pair = zero_meet_pair(&a);
    let r = ProjectiveOut {
        projective,
        indecomposable,
        zero_meet_pair: pair.map(|(x, y)| [f.label(x).to_string(), f.label(y).to_string()]),
    };
    let mut t = format!("projective: {projective}\n");
    if !indecomposable {
        t.push_str("reason: not directly indecomposable (the frame is disconnected)\n");
    }
    if let Some([x, y]) = &r.zero_meet_pair {
        let _ = writeln!(t, "witness: ({x}, {y}) with f({x})·f({y}) = 0");
    }
    let marks: Vec<Highlight> = pair
        .map(|(x, y)| {
            vec![Highlight {
                set: [x, y].into_iter().collect(),
                colour: "red",
                name: "zero meet",
            }]
        })
        .unwrap_or_default();
    let dot = render(&f, input, &marks);
    ctx.finish(&r, t, Some(dot), projective)
}

#[derive(Serialize)]
struct RetractEntry {
    point: String,
    image: String,
    case: String,
}

#[derive(Serialize)]
struct RetractOut {
    sub: Vec<String>,
    constructed: bool,
    reason: Option<String>,
    map: Vec<RetractEntry>,
    w1: Vec<String>,
    w2: Vec<String>,
    w3: Vec<String>,
    bounded: bool,
    /// Whether exhaustive search finds some retraction (only run when the
    /// construction does not apply).
    search: Option<bool>,
}

/// Search steps allowed when the construction does not apply.
const RETRACT_SEARCH_BUDGET: u64 = 5_000_000;

pub fn algebra_retract(ctx: &Ctx, input: &str, sub: &[String], explain: bool) -> Result<Outcome> {
    let w = load_frame(input, ctx.close)?;
    let mut set = PointSet::EMPTY;
    for name in sub {
        let x = w.index_of(name).with_context(|| format!("no point named `{name}`"))?;
        set.insert(x);
    }
    let (v, map) = w.induced(set);
    let emb = Morphism::new(&v, &w, map)?;
    let sub_names = names(&w, set);
    let highlight_v = Highlight {
        set,
        colour: "blue",
        name: "V",
    };
    match build_retraction(&w, &emb) {
        Ok(plan) => {
            let mut entries: Vec<&forkalg::projectivity::CaseEntry> = plan.case_log.iter().collect();
            entries.sort_by_key(|e| e.point);
            let r = RetractOut {
                sub: sub_names.clone(),
                constructed: true,
                reason: None,
                map: entries
                    .iter()
                    .map(|e| RetractEntry {
                        point: w.label(e.point).to_string(),
                        image: v.label(e.value).to_string(),
                        case: e.case.code().to_string(),
                    })
                    .collect(),
                w1: names(&w, plan.w1),
                w2: names(&w, plan.w2),
                w3: names(&w, plan.w3),
                bounded: is_bounded_morphism(&plan.map),
                search: None,
            };
            let mut t = format!("retraction onto {{{}}}:\n", sub_names.join(","));
            if explain {
                let _ = writeln!(t, "W1: {{{}}}  W2: {{{}}}  W3: {{{}}}", r.w1.join(","), r.w2.join(","), r.w3.join(","));
                for line in plan.explain().lines() {
                    let _ = writeln!(t, "  {line}");
                }
            } else {
                for e in &r.map {
                    let _ = writeln!(t, "  {} -> {}", e.point, e.image);
                }
            }
            let _ = writeln!(t, "bounded: {}", r.bounded);
            let marks = [
                highlight_v,
                Highlight {
                    set: plan.w1,
                    colour: "forestgreen",
                    name: "W1",
                },
                Highlight {
                    set: plan.w2,
                    colour: "orange",
                    name: "W2",
                },
                Highlight {
                    set: plan.w3,
                    colour: "red",
                    name: "W3",
                },
            ];
            let dot = render(&w, input, &marks);
            let ok = r.bounded;
            ctx.finish(&r, t, Some(dot), ok)
        }
        Err(Error::NotProjectiveSubalgebra(reason)) => {
            let found = brute_force_retraction(&w, &emb, Some(RETRACT_SEARCH_BUDGET))?;
            let r = RetractOut {
                sub: sub_names.clone(),
                constructed: false,
                reason: Some(reason.clone()),
                map: found
                    .as_ref()
                    .map(|m| {
                        w.points()
                            .map(|x| RetractEntry {
                                point: w.label(x).to_string(),
                                image: v.label(m.apply(x)).to_string(),
                                case: "search".into(),
                            })
                            .collect()
                    })
                    .unwrap_or_default(),
                w1: Vec::new(),
                w2: Vec::new(),
                w3: Vec::new(),
                bounded: found.is_some(),
                search: Some(found.is_some()),
            };
            let mut t = format!("no construction onto {{{}}}: {reason}\n", sub_names.join(","));
            let _ = writeln!(
                t,
                "exhaustive search: {}",
                if found.is_some() { "a retraction exists" } else { "no retraction" }
            );
            for e in &r.map {
                let _ = writeln!(t, "  {} -> {}", e.point, e.image);
            }
            let dot = render(&w, input, &[highlight_v]);
            let ok = found.is_some();
            ctx.finish(&r, t, Some(dot), ok)
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct WitnessOut {
    atoms: [String; 2],
    v: String,
    d: String,
    u: String,
    t: String,
    u_prime: String,
    w: String,
}

pub fn algebra_bw_witness(ctx: &Ctx, input: &str, all: bool) -> Result<Outcome> {
    let (f, a) = load_algebra(input, ctx.close)?;
    let found = if all {
        find_all_bw_subalgebras(&a)?
    } else {
        find_bw_subalgebra(&a)?.into_iter().collect()
    };
    let out: Vec<WitnessOut> = found
        .iter()
        .map(|w| WitnessOut {
            atoms: [f.label(w.a0).to_string(), f.label(w.b0).to_string()],
            v: a.format(w.v),
            d: a.format(w.d),
            u: a.format(w.u),
            t: a.format(w.t),
            u_prime: a.format(w.u_prime),
            w: a.format(w.w),
        })
        .collect();
    let mut t = String::new();
    if out.is_empty() {
        t.push_str("no copy of B_W\n");
    }
    for w in &out {
        let _ = writeln!(
            t,
            "atoms ({}, {}): v={} d={} u={} t={} u'={} w={}",
            w.atoms[0], w.atoms[1], w.v, w.d, w.u, w.t, w.u_prime, w.w
        );
    }
    let marks: Vec<Highlight> = found
        .first()
        .map(|w| {
            let parts = [
                (w.u, "blue", "u"),
                (w.u_prime, "purple", "u'"),
                (w.t, "forestgreen", "t"),
                (w.v, "orange", "v"),
                (w.w, "red", "w"),
            ];
            parts
                .into_iter()
                .map(|(set, colour, name)| Highlight {
                    set: set.into(),
                    colour,
                    name,
                })
                .collect()
        })
        .unwrap_or_default();
    let dot = render(&f, input, &marks);
    let verdict = !out.is_empty();
    ctx.finish(&out, t, Some(dot), verdict)
}

#[derive(Serialize)]
struct CongruenceOut {
    kernel: String,
    quotient: String,
}

#[derive(Serialize)]
struct CertificateOut {
    dominated: String,
    by: String,
    map: Vec<String>,
}

#[derive(Serialize)]
struct OracleOut {
    bound: usize,
    unifiers: usize,
    classes: usize,
    mu_size: usize,
    matches: bool,
}

#[derive(Serialize)]
struct UnifyOut {
    atoms: usize,
    unifiable: bool,
    admissible: Vec<CongruenceOut>,
    mu_set: Vec<CongruenceOut>,
    r#type: &'static str,
    type_name: &'static str,
    certificates: Vec<CertificateOut>,
    oracle: Option<OracleOut>,
}

fn congruence(a: &ClosureAlgebra, g: forkalg::Element) -> CongruenceOut {
    CongruenceOut {
        kernel: format!("↓{}", a.format(g)),
        quotient: a.format(a.complement(g)),
    }
}

fn kernel_name(a: &ClosureAlgebra, u: &Unifier) -> String {
    format!("↓{}", a.format(u.kernel.generator()))
}

pub fn unify_report(ctx: &Ctx, input: &str, oracle: Option<usize>) -> Result<Outcome> {
    let (_, a) = load_algebra(input, ctx.close)?;
    let admissible = admissible_congruences(&a)?;
    let report = mu_set(&a)?;
    let certificates = report
        .certificates
        .iter()
        .map(|c| {
            let h = c.hom.dual();
            CertificateOut {
                dominated: kernel_name(&a, &c.dominated),
                by: kernel_name(&a, &report.mu_set[c.by]),
                map: h
                    .source()
                    .points()
                    .map(|y| format!("{}->{}", h.source().label(y), h.target().label(h.apply(y))))
                    .collect(),
            }
        })
        .collect();
    let oracle = match oracle {
        Some(bound) => {
            let bound = if bound == 0 { a.atom_count() } else { bound };
            let o = brute_force_mu(&a, bound)?;
            Some(OracleOut {
                bound,
                unifiers: o.examined,
                classes: o.classes,
                mu_size: o.mu_set.len(),
                matches: mu_sets_match(&report, &o)?,
            })
        }
        None => None,
    };
    let r = UnifyOut {
        atoms: a.atom_count(),
        unifiable: is_unifiable(&a),
        admissible: admissible.iter().map(|k| congruence(&a, k.generator())).collect(),
        mu_set: report.mu_set.iter().map(|u| congruence(&a, u.kernel.generator())).collect(),
        r#type: report.kind.symbol(),
        type_name: report.kind.name(),
        certificates,
        oracle,
    };
    let mut t = String::new();
    let _ = writeln!(t, "admissible congruences: {}", r.admissible.len());
    for c in &r.admissible {
        let _ = writeln!(t, "  {}  quotient frame {}", c.kernel, c.quotient);
    }
    let _ = writeln!(t, "μ-set:");
    for c in &r.mu_set {
        let _ = writeln!(t, "  {}  quotient frame {}", c.kernel, c.quotient);
    }
    let _ = writeln!(t, "type: {} ({})", r.r#type, r.type_name);
    for c in &r.certificates {
        let _ = writeln!(t, "  {} ≽ {} via {}", c.by, c.dominated, c.map.join(" "));
    }
    if let Some(o) = &r.oracle {
        let _ = writeln!(
            t,
            "oracle (≤ {} atoms): {} unifiers, {} classes, μ-set of {}, agrees: {}",
            o.bound, o.unifiers, o.classes, o.mu_size, o.matches
        );
    }
    let verdict = r.oracle.as_ref().is_none_or(|o| o.matches);
    ctx.finish(&r, t, None, verdict)
}

#[derive(Serialize)]
struct CountOut {
    points: usize,
    frames: usize,
}

#[derive(Serialize)]
struct DumpOut {
    constraints: Vec<String>,
    up_to_iso: bool,
    counts: Vec<CountOut>,
    total: usize,
    frames: Vec<String>,
}

fn query(constraints: &[String], min: usize, max: usize, labelled: bool, cap: Option<usize>) -> Result<CatalogQuery> {
    let mut q = CatalogQuery::quasiorders(max).min_points(min);
    for c in constraints {
        match c.trim() {
            "quasiorder" => q.kind = OrderKind::Quasiorder,
            "poset" => q.kind = OrderKind::Poset,
            "fork" => {
                q.kind = OrderKind::Poset;
                q = q.max_height(2).max_local_width(2);
            }
            "connected" => q = q.connected(),
            other => match other.split_once('=') {
                Some(("height", h)) => q = q.max_height(h.parse().context("height")?),
                Some(("width", m)) => q = q.max_local_width(m.parse().context("width")?),
                _ => bail!("unknown constraint `{other}`"),
            },
        }
    }
    if labelled {
        q = q.labelled();
    }
    if let Some(c) = cap {
        q = q.cap(c);
    }
    Ok(q)
}

pub fn catalog_dump(
    ctx: &Ctx,
    constraints: &[String],
    min: usize,
    max: usize,
    labelled: bool,
    cap: Option<usize>,
    out: Option<&Path>,
) -> Result<Outcome> {
    let q = query(constraints, min, max, labelled, cap)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let mut counts: Vec<CountOut> = Vec::new();
    let mut frames = Vec::new();
    for f in enumerate(&q)? {
        let n = f.len();
        match counts.last_mut() {
            Some(c) if c.points == n => c.frames += 1,
            _ => counts.push(CountOut { points: n, frames: 1 }),
        }
        let text = write_frame(&f);
        match out {
            Some(dir) => {
                let k = counts.last().map_or(0, |c| c.frames);
                let path = dir.join(format!("{n}-{k:05}.frame"));
                fs::write(&path, &text).with_context(|| format!("cannot write {}", path.display()))?;
            }
            None => frames.push(text),
        }
    }
    let total = counts.iter().map(|c| c.frames).sum();
    let r = DumpOut {
        constraints: constraints.to_vec(),
        up_to_iso: q.up_to_iso,
        counts,
        total,
        frames,
    };
    let mut t = String::new();
    for (i, f) in r.frames.iter().enumerate() {
        let _ = writeln!(t, "# frame {}\n{f}", i + 1);
    }
    for c in &r.counts {
        let _ = writeln!(t, "# {} points: {}", c.points, c.frames);
    }
    let _ = writeln!(t, "# total: {}", r.total);
    ctx.finish(&r, t, None, true)
}

#[derive(Serialize)]
struct CriterionOut {
    id: usize,
    title: &'static str,
    passed: bool,
    detail: String,
}

pub fn verify_paper(ctx: &Ctx) -> Result<Outcome> {
    let outcomes = verify::run_all();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let mut t = String::new();
    for o in &outcomes {
        let _ = writeln!(t, "{o}");
    }
    let _ = writeln!(t, "{passed}/{} criteria passed", outcomes.len());
    let r: Vec<CriterionOut> = outcomes
        .into_iter()
        .map(|o| CriterionOut {
            id: o.id,
            title: o.title,
            passed: o.passed,
            detail: o.detail,
        })
        .collect();
    let all = passed == r.len();
    ctx.finish(&r, t, None, all)
}
