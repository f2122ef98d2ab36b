//! The line-usage calculus: which nodes use a given line, computed two
//! independent ways.
//!
//! The brute-force route tests divisibility of each node's fundamental
//! polynomial directly. The pipeline route lowers the set by removing all
//! disjoint maximal lines and adjoint pairs in one step, then applies single
//! disjoint/adjoint reductions until the line becomes maximal, and reads the
//! users off the terminal set. `used_nodes_pipeline` runs both and errors on
//! any disagreement; that cross-check is the artifact's primary self-test.
//!
//! All subset work runs on node bitmasks against the precomputed line
//! catalog, so a single classification costs microseconds once the catalog
//! exists.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeMap, SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::gcset::{Context, NodeSet};
use crate::geom::{intersect, Intersection, Line, Point};
use crate::Error;

/// One-step removal record: all disjoint maximal lines (u1) and all adjoint
/// pairs (u2), removed simultaneously.
#[derive(Clone, Debug, Serialize)]
pub struct LoweringResult {
    pub original: NodeSet,
    pub line: Line,
    pub lowered: NodeSet,
    pub u1: Vec<Line>,
    pub u2: Vec<(Line, Line)>,
}

impl LoweringResult {
    pub fn lowered_degree(&self) -> usize {
        self.lowered.degree()
    }
}

/// A single reduction item: one disjoint maximal line or one adjoint pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionStep {
    Disjoint(Line),
    Adjoint(Line, Line),
}

impl Serialize for ReductionStep {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        match self {
            ReductionStep::Disjoint(l) => {
                map.serialize_entry("kind", "disjoint")?;
                map.serialize_entry("lines", &[l])?;
            }
            ReductionStep::Adjoint(l1, l2) => {
                map.serialize_entry("kind", "adjoint")?;
                map.serialize_entry("lines", &[l1, l2])?;
            }
        }
        map.end()
    }
}

/// The reduction steps that made the line maximal, and the set where it is.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub terminal: NodeSet,
}

impl ReductionTrace {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }
}

/// Where a line sits in the usage taxonomy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineClass {
    Maximal,
    Proper,
    ProperMinus(usize),
    Unused,
}

impl fmt::Display for LineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineClass::Maximal => write!(f, "maximal"),
            LineClass::Proper => write!(f, "proper"),
            LineClass::ProperMinus(r) => write!(f, "proper_minus_{r}"),
            LineClass::Unused => write!(f, "unused"),
        }
    }
}

/// Classification of one line, with the reduction trace for proper(-r)
/// lines and the nodes of the line that are 2m in the lowered set.
#[derive(Clone, Debug)]
pub struct LineClassification {
    pub line: Line,
    pub variant: LineClass,
    pub trace: Option<ReductionTrace>,
    pub hat_2m: Vec<Point>,
}

/// Reduction step preference. The default prefers disjoint items and takes
/// the canonically smallest; the reversed policy exists so tests can check
/// that the outcome does not depend on the choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionPolicy {
    DisjointFirstSmallest,
    AdjointFirstLargest,
}

/// Everything known about one line's usage.
///
/// `r` counts the 2m-nodes of the original set on the line and `r_hat` the
/// 2m-nodes of the lowered set on it, with the conventional zeros for
/// maximal and proper lines that make s = k - r - r_hat hold across all
/// classes; `s` is 0 for unused lines.
#[derive(Clone, Debug)]
pub struct UsageReport {
    pub line: Line,
    pub k: usize,
    pub users: Vec<Point>,
    pub r: usize,
    pub r_hat: usize,
    pub s: i64,
    pub delta: usize,
    pub classification: LineClassification,
    pub oracle_agrees: bool,
}

impl Serialize for UsageReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("UsageReport", 10)?;
        st.serialize_field("line", &self.line)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("r_hat", &self.r_hat)?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("delta", &self.delta)?;
        st.serialize_field("users", &self.users)?;
        st.serialize_field("class", &self.classification.variant.to_string())?;
        match &self.classification.trace {
            Some(t) => st.serialize_field("trace", &t.steps)?,
            None => st.serialize_field("trace", &Vec::<ReductionStep>::new())?,
        }
        st.serialize_field("hat_2m", &self.classification.hat_2m)?;
        st.end()
    }
}

/// The set of nodes whose fundamental polynomial the line divides, by the
/// direct restriction test on each solved polynomial. This is the oracle
/// the pipeline is validated against: it never touches the reduction
/// machinery. The divisibility test runs on the primitive integer form of
/// each polynomial, which vanishes on the line exactly when the rational
/// restriction does.
pub fn used_nodes_bruteforce(ctx: &mut Context, l: &Line) -> Result<Vec<Point>, Error> {
    let degree = ctx.degree();
    ctx.fundamental_ints()?;
    let mut users = Vec::new();
    for i in 0..ctx.set().len() {
        let ints = &ctx.fundamental_ints()?[i];
        if crate::poly::int_restriction_is_zero(ints, degree, l) {
            users.push(ctx.set().nodes()[i].clone());
        }
    }
    Ok(users)
}

/// Disjoint maximal lines and adjoint pairs of a node subset relative to a
/// line, as catalog indices. Pairs are keyed by the shared node on the
/// line; three maximal lines through one node would break correctness and
/// are reported as an internal error.
struct Reductions {
    disjoint: Vec<usize>,
    adjoint: Vec<(usize, usize)>,
}

fn reductions(
    ctx: &mut Context,
    line_mask: u64,
    line: &Line,
    mask: u64,
    degree: usize,
) -> Result<Reductions, Error> {
    let maximal = ctx.subset_maximal(mask, degree)?;
    let mut disjoint = Vec::new();
    let mut through: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for &mi in &maximal {
        let entry = ctx.line_at(mi);
        if &entry.line == line {
            continue;
        }
        let shared = entry.mask & line_mask & mask;
        if shared == 0 {
            disjoint.push(mi);
        } else {
            for bit in 0..64 {
                if shared & (1u64 << bit) != 0 {
                    through.entry(bit).or_default().push(mi);
                }
            }
        }
    }
    let mut adjoint = Vec::new();
    for (_, lines) in through {
        match lines.len() {
            1 => {}
            2 => adjoint.push((lines[0], lines[1])),
            k => {
                return Err(Error::Internal {
                    detail: format!("{k} maximal lines concurrent at a node"),
                })
            }
        }
    }
    adjoint.sort();
    Ok(Reductions { disjoint, adjoint })
}

/// Disjoint maximal lines, paired with the adjoint pairs.
pub(crate) type ReductionLines = (Vec<Line>, Vec<(Line, Line)>);

/// Disjoint maximal lines and adjoint pairs of the full set relative to a
/// line, as lines.
pub(crate) fn full_set_reductions(ctx: &mut Context, l: &Line) -> Result<ReductionLines, Error> {
    let full = ctx.full_mask();
    let line_mask = ctx.incidence_mask(l);
    let degree = ctx.degree();
    let red = reductions(ctx, line_mask, l, full, degree)?;
    let disjoint = red
        .disjoint
        .iter()
        .map(|&i| ctx.line_at(i).line.clone())
        .collect();
    let adjoint = red
        .adjoint
        .iter()
        .map(|&(a, b)| (ctx.line_at(a).line.clone(), ctx.line_at(b).line.clone()))
        .collect();
    Ok((disjoint, adjoint))
}

struct LoweringMasks {
    mask: u64,
    degree: usize,
    u1: Vec<usize>,
    u2: Vec<(usize, usize)>,
}

fn lowering_masks(ctx: &mut Context, l: &Line) -> Result<LoweringMasks, Error> {
    let full = ctx.full_mask();
    let line_mask = ctx.incidence_mask(l);
    let degree = ctx.degree();
    let red = reductions(ctx, line_mask, l, full, degree)?;
    let mut removed = 0u64;
    for &mi in &red.disjoint {
        removed |= ctx.line_at(mi).mask;
    }
    for &(a, b) in &red.adjoint {
        removed |= ctx.line_at(a).mask;
        removed |= ctx.line_at(b).mask;
    }
    let mask = full & !removed;
    if mask == 0 {
        return Err(Error::EmptyLowering { line: l.clone() });
    }
    let drop = red.disjoint.len() + 2 * red.adjoint.len();
    if drop > degree {
        return Err(Error::Internal {
            detail: "lowering removed more lines than the degree".into(),
        });
    }
    Ok(LoweringMasks {
        mask,
        degree: degree - drop,
        u1: red.disjoint,
        u2: red.adjoint,
    })
}

/// The lowering of the set by a line: all disjoint maximal lines and all
/// adjoint pairs removed in one simultaneous step. A maximal line has
/// neither, so its lowering is the set itself.
pub fn lowering(ctx: &mut Context, l: &Line) -> Result<LoweringResult, Error> {
    let k = (ctx.incidence_mask(l) & ctx.full_mask()).count_ones() as usize;
    if k < 2 {
        return Err(Error::TooFewNodes {
            line: l.clone(),
            count: k,
        });
    }
    let lm = lowering_masks(ctx, l)?;
    let lowered = ctx
        .materialize(lm.mask, lm.degree)
        .map_err(|e| Error::Internal {
            detail: format!("lowering count mismatch: {e}"),
        })?;
    let u1 = lm.u1.iter().map(|&i| ctx.line_at(i).line.clone()).collect();
    let u2 = lm
        .u2
        .iter()
        .map(|&(a, b)| (ctx.line_at(a).line.clone(), ctx.line_at(b).line.clone()))
        .collect();
    Ok(LoweringResult {
        original: ctx.set().clone(),
        line: l.clone(),
        lowered,
        u1,
        u2,
    })
}

fn is_maximal_in(ctx: &mut Context, l: &Line, mask: u64, degree: usize) -> Result<bool, Error> {
    let maximal = ctx.subset_maximal(mask, degree)?;
    Ok(maximal.iter().any(|&mi| &ctx.line_at(mi).line == l))
}

/// Nodes of the line, inside the lowered set, lying on exactly two of its
/// maximal lines. Empty for maximal and proper lines by convention.
pub fn hat_2m_nodes(ctx: &mut Context, l: &Line) -> Result<Vec<Point>, Error> {
    let full = ctx.full_mask();
    let degree = ctx.degree();
    if is_maximal_in(ctx, l, full, degree)? {
        return Ok(Vec::new());
    }
    let lm = match lowering_masks(ctx, l) {
        Ok(lm) => lm,
        Err(Error::EmptyLowering { .. }) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    hat_2m_from_masks(ctx, l, &lm)
}

fn hat_2m_from_masks(ctx: &mut Context, l: &Line, lm: &LoweringMasks) -> Result<Vec<Point>, Error> {
    if is_maximal_in(ctx, l, lm.mask, lm.degree)? {
        return Ok(Vec::new());
    }
    let maximal = ctx.subset_maximal(lm.mask, lm.degree)?;
    let line_mask = ctx.incidence_mask(l);
    let mut out = Vec::new();
    for bit in 0..64u32 {
        let b = 1u64 << bit;
        if line_mask & lm.mask & b == 0 {
            continue;
        }
        let count = maximal
            .iter()
            .filter(|&&mi| ctx.line_at(mi).mask & b != 0)
            .count();
        if count == 2 {
            out.push(ctx.set().nodes()[bit as usize].clone());
        }
    }
    Ok(out)
}

fn triangular_inverse(m: usize) -> Option<usize> {
    // smallest s >= 1 with s(s-1)/2 = m
    let mut s = 1usize;
    while s * (s - 1) / 2 < m {
        s += 1;
        if s > 100 {
            return None;
        }
    }
    (s * (s - 1) / 2 == m).then_some(s)
}

/// Classifies a line as maximal, proper, proper(-r), or unused, with the
/// default reduction policy. Results are cached on the context.
pub fn classify_line(ctx: &mut Context, l: &Line) -> Result<LineClassification, Error> {
    if let Some(c) = ctx.classifications.get(l) {
        return Ok(c.clone());
    }
    let c = classify_line_with_policy(ctx, l, ReductionPolicy::DisjointFirstSmallest)?;
    ctx.classifications.insert(l.clone(), c.clone());
    Ok(c)
}

/// Classification under an explicit reduction-step preference. The factor
/// structure forces the outcome, so both policies must agree; a dedicated
/// test asserts this rather than the library assuming it.
pub fn classify_line_with_policy(
    ctx: &mut Context,
    l: &Line,
    policy: ReductionPolicy,
) -> Result<LineClassification, Error> {
    let full = ctx.full_mask();
    let degree = ctx.degree();
    let line_mask = ctx.incidence_mask(l);
    let k = (line_mask & full).count_ones() as usize;
    if k < 2 {
        return Err(Error::TooFewNodes {
            line: l.clone(),
            count: k,
        });
    }
    if is_maximal_in(ctx, l, full, degree)? {
        return Ok(LineClassification {
            line: l.clone(),
            variant: LineClass::Maximal,
            trace: None,
            hat_2m: Vec::new(),
        });
    }
    // The pipeline presupposes a used line; unused is decided first.
    let brute = used_nodes_bruteforce(ctx, l)?;
    if brute.is_empty() {
        return Ok(LineClassification {
            line: l.clone(),
            variant: LineClass::Unused,
            trace: None,
            hat_2m: Vec::new(),
        });
    }
    let s_implied = triangular_inverse(brute.len());

    let lm = lowering_masks(ctx, l)?;
    if is_maximal_in(ctx, l, lm.mask, lm.degree)? {
        return Ok(LineClassification {
            line: l.clone(),
            variant: LineClass::Proper,
            trace: None,
            hat_2m: Vec::new(),
        });
    }
    let hat_2m = hat_2m_from_masks(ctx, l, &lm)?;

    let mut mask = lm.mask;
    let mut cur_degree = lm.degree;
    let mut steps: Vec<ReductionStep> = Vec::new();
    loop {
        if is_maximal_in(ctx, l, mask, cur_degree)? {
            break;
        }
        if let Some(s) = s_implied {
            if cur_degree + 1 < s {
                return Err(Error::NonTermination {
                    line: l.clone(),
                    detail: format!(
                        "degree fell to {cur_degree} below the oracle-implied terminal {}",
                        s - 1
                    ),
                });
            }
        }
        if steps.len() > degree + 2 {
            return Err(Error::NonTermination {
                line: l.clone(),
                detail: "reduction step budget exhausted".into(),
            });
        }
        let red = reductions(ctx, line_mask, l, mask, cur_degree)?;
        let step = match policy {
            ReductionPolicy::DisjointFirstSmallest => {
                if let Some(&mi) = red.disjoint.first() {
                    (
                        vec![mi],
                        ReductionStep::Disjoint(ctx.line_at(mi).line.clone()),
                    )
                } else if let Some(&(a, b)) = red.adjoint.first() {
                    (
                        vec![a, b],
                        ReductionStep::Adjoint(
                            ctx.line_at(a).line.clone(),
                            ctx.line_at(b).line.clone(),
                        ),
                    )
                } else {
                    return Err(Error::NonTermination {
                        line: l.clone(),
                        detail: "no disjoint or adjoint reduction available".into(),
                    });
                }
            }
            ReductionPolicy::AdjointFirstLargest => {
                if let Some(&(a, b)) = red.adjoint.last() {
                    (
                        vec![a, b],
                        ReductionStep::Adjoint(
                            ctx.line_at(a).line.clone(),
                            ctx.line_at(b).line.clone(),
                        ),
                    )
                } else if let Some(&mi) = red.disjoint.last() {
                    (
                        vec![mi],
                        ReductionStep::Disjoint(ctx.line_at(mi).line.clone()),
                    )
                } else {
                    return Err(Error::NonTermination {
                        line: l.clone(),
                        detail: "no disjoint or adjoint reduction available".into(),
                    });
                }
            }
        };
        let (removed, step) = step;
        let drop = if removed.len() == 2 { 2 } else { 1 };
        for mi in removed {
            mask &= !ctx.line_at(mi).mask;
        }
        if mask == 0 || cur_degree < drop {
            return Err(Error::NonTermination {
                line: l.clone(),
                detail: "reduction emptied the set".into(),
            });
        }
        cur_degree -= drop;
        steps.push(step);
    }
    let terminal = ctx
        .materialize(mask, cur_degree)
        .map_err(|e| Error::Internal {
            detail: format!("terminal count mismatch: {e}"),
        })?;
    Ok(LineClassification {
        line: l.clone(),
        variant: LineClass::ProperMinus(steps.len()),
        trace: Some(ReductionTrace { steps, terminal }),
        hat_2m,
    })
}

/// Full usage report through the lowering/reduction pipeline, cross-checked
/// against the brute-force oracle. An `OracleMismatch` error here means the
/// two routes disagreed; it must never fire.
pub fn used_nodes_pipeline(ctx: &mut Context, l: &Line) -> Result<UsageReport, Error> {
    if let Some(r) = ctx.usage_reports.get(l) {
        return Ok(r.clone());
    }
    let classification = classify_line(ctx, l)?;
    let full = ctx.full_mask();
    let line_mask = ctx.incidence_mask(l);
    let degree = ctx.degree();
    let k = (line_mask & full).count_ones() as usize;

    let users_mask = match &classification.variant {
        LineClass::Maximal => full & !line_mask,
        LineClass::Proper => {
            let lm = lowering_masks(ctx, l)?;
            lm.mask & !line_mask
        }
        LineClass::ProperMinus(_) => {
            let trace = classification.trace.as_ref().expect("trace recorded");
            let mut mask = 0u64;
            for p in trace.terminal.nodes() {
                let idx = ctx.set().index_of(p).expect("terminal is a subset");
                mask |= 1 << idx;
            }
            mask & !line_mask
        }
        LineClass::Unused => 0,
    };
    let users: Vec<Point> = (0..ctx.set().len())
        .filter(|i| users_mask & (1 << i) != 0)
        .map(|i| ctx.set().nodes()[i].clone())
        .collect();

    let brute = used_nodes_bruteforce(ctx, l)?;
    if users != brute {
        return Err(Error::OracleMismatch { line: l.clone() });
    }

    let m_counts = ctx.node_m_counts()?.to_vec();
    let r = match classification.variant {
        LineClass::Maximal => 0,
        _ => (0..ctx.set().len())
            .filter(|&i| line_mask & (1 << i) != 0 && m_counts[i] == 2)
            .count(),
    };
    let r_hat = classification.hat_2m.len();
    let s = match classification.variant {
        LineClass::Unused => 0,
        _ => k as i64 - r as i64 - r_hat as i64,
    };
    let report = UsageReport {
        line: l.clone(),
        k,
        users,
        r,
        r_hat,
        s,
        delta: degree + 1 - k,
        classification,
        oracle_agrees: true,
    };
    ctx.usage_reports.insert(l.clone(), report.clone());
    Ok(report)
}

/// Family-specific tag of a used line, derivable when the set carries
/// constructor provenance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilyClass {
    Maximal,
    /// Carnicer-Gasca: a line through two or more 1m-nodes.
    OneMConnector,
    OLine,
    OoLine,
    DdLine,
    /// Connector of the leftover 1m-nodes of the maximal pair (i, j).
    PairLine {
        i: usize,
        j: usize,
    },
    /// Through the i-th D-node and its crossing with maximal line j.
    DNodeLine {
        i: usize,
        j: usize,
    },
    /// Lattice pencil r, index s.
    Lattice {
        family: usize,
        index: usize,
    },
}

impl fmt::Display for FamilyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyClass::Maximal => write!(f, "maximal"),
            FamilyClass::OneMConnector => write!(f, "one-m-connector"),
            FamilyClass::OLine => write!(f, "o-line"),
            FamilyClass::OoLine => write!(f, "oo-line"),
            FamilyClass::DdLine => write!(f, "dd-line"),
            FamilyClass::PairLine { i, j } => write!(f, "pair-line({i},{j})"),
            FamilyClass::DNodeLine { i, j } => write!(f, "d-node-line({i},{j})"),
            FamilyClass::Lattice { family, index } => write!(f, "lattice({family},{index})"),
        }
    }
}

impl Serialize for FamilyClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One used line with the nodes that use it.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub line: Line,
    pub users: Vec<Point>,
    pub family_class: Option<FamilyClass>,
}

/// Every line used by at least one node, harvested from the factorizations,
/// with family tags when provenance is available. `unmatched` lists used
/// lines no predicted family class covers and `overlaps` any line claimed
/// by two classes; both must stay empty for the constructed families.
#[derive(Clone, Debug, Serialize)]
pub struct UsedLineCatalog {
    pub entries: Vec<CatalogEntry>,
    pub unmatched: Vec<Line>,
    pub overlaps: Vec<(Line, String, String)>,
}

type PredictedClasses = (BTreeMap<Line, FamilyClass>, Vec<(Line, String, String)>);

/// Predicted (line -> class) map from provenance, with overlap detection.
fn predicted_classes(ctx: &Context) -> Result<Option<PredictedClasses>, Error> {
    use crate::constructors::Provenance;
    let Some(prov) = ctx.provenance() else {
        return Ok(None);
    };
    let mut map: BTreeMap<Line, FamilyClass> = BTreeMap::new();
    let mut overlaps: Vec<(Line, String, String)> = Vec::new();
    let mut insert = |line: Line, class: FamilyClass| {
        if let Some(prev) = map.get(&line) {
            if prev != &class {
                overlaps.push((line.clone(), prev.to_string(), class.to_string()));
            }
            return;
        }
        map.insert(line, class);
    };
    match prov {
        Provenance::ChungYao { lines, .. } => {
            for l in lines {
                insert(l.clone(), FamilyClass::Maximal);
            }
        }
        Provenance::CarnicerGasca { lines, extras, .. } => {
            for l in lines {
                insert(l.clone(), FamilyClass::Maximal);
            }
            for i in 0..extras.len() {
                for j in (i + 1)..extras.len() {
                    let l = crate::geom::line_through(&extras[i], &extras[j])?;
                    insert(l, FamilyClass::OneMConnector);
                }
            }
        }
        Provenance::DefectTwo {
            maximal,
            o_lines,
            drops,
            ..
        } => {
            for l in maximal {
                insert(l.clone(), FamilyClass::Maximal);
            }
            for l in o_lines {
                insert(l.clone(), FamilyClass::OLine);
            }
            for i in 0..maximal.len() {
                for j in (i + 1)..maximal.len() {
                    if drops[i] == drops[j] {
                        continue; // both pairs of 1m-nodes sit on two o-lines
                    }
                    let p = intersect(&maximal[i], &o_lines[drops[j]]);
                    let q = intersect(&maximal[j], &o_lines[drops[i]]);
                    if let (Intersection::At(p), Intersection::At(q)) = (p, q) {
                        insert(
                            crate::geom::line_through(&p, &q)?,
                            FamilyClass::PairLine { i, j },
                        );
                    }
                }
            }
        }
        Provenance::DefectThree {
            maximal,
            d_nodes,
            oo_lines,
            dd_lines,
            ..
        } => {
            for l in maximal {
                insert(l.clone(), FamilyClass::Maximal);
            }
            for l in oo_lines {
                insert(l.clone(), FamilyClass::OoLine);
            }
            for l in dd_lines {
                insert(l.clone(), FamilyClass::DdLine);
            }
            for i in 0..3usize {
                for j in (i + 1)..3 {
                    // leftover 1m-nodes: oo_j on maximal_i, oo_i on maximal_j
                    let p = intersect(&oo_lines[j], &maximal[i]);
                    let q = intersect(&oo_lines[i], &maximal[j]);
                    if let (Intersection::At(p), Intersection::At(q)) = (p, q) {
                        insert(
                            crate::geom::line_through(&p, &q)?,
                            FamilyClass::PairLine { i, j },
                        );
                    }
                }
            }
            for i in 0..3usize {
                for j in 3..maximal.len() {
                    if let Intersection::At(p) = intersect(&oo_lines[i], &maximal[j]) {
                        insert(
                            crate::geom::line_through(&d_nodes[i], &p)?,
                            FamilyClass::DNodeLine { i, j },
                        );
                    }
                }
            }
        }
        Provenance::Principal { families, .. } => {
            let degree = ctx.set().degree();
            for (r, fam) in families.iter().enumerate() {
                for (s, l) in fam.iter().enumerate() {
                    if s < degree {
                        insert(
                            l.clone(),
                            FamilyClass::Lattice {
                                family: r,
                                index: s,
                            },
                        );
                    }
                }
            }
        }
    }
    Ok(Some((map, overlaps)))
}

/// Harvests every used line from the node factorizations. Requires the set
/// to be GC (every fundamental polynomial must split).
pub fn used_line_catalog(ctx: &mut Context) -> Result<UsedLineCatalog, Error> {
    let count = ctx.set().len();
    let mut users_of: BTreeMap<Line, Vec<Point>> = BTreeMap::new();
    for i in 0..count {
        let f = ctx.factorization(i)?;
        let mut seen: Vec<&Line> = Vec::new();
        for l in &f.lines {
            if seen.contains(&l) {
                continue;
            }
            seen.push(l);
            users_of.entry(l.clone()).or_default().push(f.node.clone());
        }
    }
    let predicted = predicted_classes(ctx)?;
    let mut unmatched = Vec::new();
    let mut overlaps = Vec::new();
    let mut entries = Vec::with_capacity(users_of.len());
    for (line, mut users) in users_of {
        users.sort();
        let family_class = match &predicted {
            Some((map, _)) => {
                let c = map.get(&line).cloned();
                if c.is_none() {
                    unmatched.push(line.clone());
                }
                c
            }
            None => None,
        };
        entries.push(CatalogEntry {
            line,
            users,
            family_class,
        });
    }
    if let Some((_, o)) = predicted {
        overlaps = o;
    }
    Ok(UsedLineCatalog {
        entries,
        unmatched,
        overlaps,
    })
}

/// Total usage count and per-line counts.
#[derive(Clone, Debug)]
pub struct Census {
    pub total: u64,
    pub per_line: Vec<(Line, u64)>,
}

impl Serialize for Census {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Census", 2)?;
        st.serialize_field("total", &self.total)?;
        struct PerLine<'a>(&'a [(Line, u64)]);
        impl Serialize for PerLine<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for pair in self.0 {
                    seq.serialize_element(pair)?;
                }
                seq.end()
            }
        }
        st.serialize_field("per_line", &PerLine(&self.per_line))?;
        st.end()
    }
}

/// Counts line usages over all nodes: the total is the factor count summed
/// over nodes, and the per-line map counts the nodes using each line.
pub fn usage_census(ctx: &mut Context) -> Result<Census, Error> {
    let count = ctx.set().len();
    let mut total = 0u64;
    let mut per_line: BTreeMap<Line, u64> = BTreeMap::new();
    for i in 0..count {
        let f = ctx.factorization(i)?;
        total += f.lines.len() as u64;
        let mut seen: Vec<&Line> = Vec::new();
        for l in &f.lines {
            if seen.contains(&l) {
                continue;
            }
            seen.push(l);
            *per_line.entry(l.clone()).or_default() += 1;
        }
    }
    Ok(Census {
        total,
        per_line: per_line.into_iter().collect(),
    })
}
