//! Node sets and their structural analysis: maximal-line enumeration, node
//! classification, defect, and the line-factor peeling that decides the GC
//! property.
//!
//! [`Context`] owns a node set together with every derived artifact that is
//! expensive to compute (the line arrangement, fundamental polynomials,
//! factorizations, per-line classifications). Callers thread a `&mut Context`
//! through the analysis instead of relying on hidden global caches.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::constructors::Provenance;
use crate::geom::{line_through, Line, Point, Rat};
use crate::poly::{self, BivarPoly, FundamentalFactorization};
use crate::usage::{LineClassification, UsageReport};
use crate::Error;

/// Degree-tagged finite point set with exactly (n+1)(n+2)/2 distinct nodes,
/// stored in canonical (x, y) order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NodeSet {
    degree: usize,
    nodes: Vec<Point>,
}

impl NodeSet {
    /// Validates cardinality, distinctness, and the collinearity bound (no
    /// degree+2 nodes on one line).
    pub fn new(degree: usize, nodes: Vec<Point>) -> Result<NodeSet, Error> {
        let set = NodeSet::new_allow_collinear(degree, nodes)?;
        for (line, members) in pair_lines(&set.nodes) {
            if members.len() > degree + 1 {
                return Err(Error::TooManyCollinear {
                    line,
                    count: members.len(),
                });
            }
        }
        Ok(set)
    }

    /// Validates cardinality and distinctness only. Exists so degenerate
    /// inputs (deliberately collinear experiments, corrupted files) can
    /// still reach the determinant machinery and be reported as incorrect.
    pub fn new_allow_collinear(degree: usize, mut nodes: Vec<Point>) -> Result<NodeSet, Error> {
        let expected = poly::dim(degree);
        if nodes.len() != expected {
            return Err(Error::SizeMismatch {
                expected,
                got: nodes.len(),
            });
        }
        nodes.sort();
        for w in nodes.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateNode { node: w[0].clone() });
            }
        }
        Ok(NodeSet { degree, nodes })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.nodes.binary_search(p).ok()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index_of(p).is_some()
    }

    /// The sub-set obtained by keeping the selected nodes, re-tagged with the
    /// given degree. Distinctness and order are inherited; only the
    /// cardinality is re-checked.
    pub fn subset(&self, keep: impl Fn(&Point) -> bool, degree: usize) -> Result<NodeSet, Error> {
        let nodes: Vec<Point> = self.nodes.iter().filter(|p| keep(p)).cloned().collect();
        let expected = poly::dim(degree);
        if nodes.len() != expected {
            return Err(Error::SizeMismatch {
                expected,
                got: nodes.len(),
            });
        }
        Ok(NodeSet { degree, nodes })
    }

    /// The set minus all nodes of a line, tagged one degree lower.
    pub fn remove_line(&self, l: &Line) -> Result<NodeSet, Error> {
        if self.degree == 0 {
            return Err(Error::Internal {
                detail: "cannot remove a line from a degree-0 set".into(),
            });
        }
        self.subset(|p| !crate::geom::incident(l, p), self.degree - 1)
    }
}

/// All distinct lines through at least two of the given points, with the
/// sorted indices of their incident points.
fn pair_lines(nodes: &[Point]) -> BTreeMap<Line, Vec<usize>> {
    let mut map: BTreeMap<Line, Vec<usize>> = BTreeMap::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let l = line_through(&nodes[i], &nodes[j]).expect("nodes are distinct");
            map.entry(l).or_default();
        }
    }
    for (line, members) in map.iter_mut() {
        for (k, p) in nodes.iter().enumerate() {
            if crate::geom::incident(line, p) {
                members.push(k);
            }
        }
    }
    map
}

/// One line of the arrangement spanned by the node set: the canonical line,
/// its incident node indices, and the same incidence as a bitmask.
#[derive(Clone, Debug)]
pub struct CatalogLine {
    pub line: Line,
    pub nodes: Vec<usize>,
    pub mask: u64,
}

/// Structural summary of a node set.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub maximal_lines: Vec<Line>,
    pub defect: i64,
    pub node_classes: Vec<(Point, usize)>,
    pub n_correct: bool,
    pub is_gc: bool,
}

/// Incidence census of one line against the set, split by node class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineProfile {
    pub line: Line,
    pub node_count: usize,
    pub zero_m: usize,
    pub one_m: usize,
    pub two_m: usize,
}

/// Why a node's fundamental polynomial did not split into lines: what was
/// peeled, what remains, and which pencils through residual zeros still
/// admit a line factor.
#[derive(Clone, Debug)]
pub struct FactorFailure {
    pub node: Point,
    pub peeled: Vec<Line>,
    /// Residual after peeling, up to a nonzero rational factor.
    pub residual: BivarPoly,
    pub pencil: Vec<PencilDiagnostic>,
}

/// Line-factor search through one zero of the residual: the gcd degree of
/// the direction forms, and the factor line when the gcd is linear.
#[derive(Clone, Debug)]
pub struct PencilDiagnostic {
    pub through: Point,
    pub gcd_degree: usize,
    pub extracted: Option<Line>,
}

/// Outcome of factoring every node's fundamental polynomial.
#[derive(Clone, Debug)]
pub struct GcStatus {
    pub factorizations: Vec<Result<FundamentalFactorization, FactorFailure>>,
}

impl GcStatus {
    pub fn is_gc(&self) -> bool {
        self.factorizations.iter().all(Result::is_ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FactorFailure> {
        self.factorizations.iter().filter_map(|r| r.as_ref().err())
    }
}

/// Analysis cache for one node set. All getters compute on first use and
/// memoize; the set itself is immutable.
pub struct Context {
    set: NodeSet,
    provenance: Option<Provenance>,
    catalog: Option<Vec<CatalogLine>>,
    maximal: Option<Result<Vec<usize>, Error>>,
    node_m_counts: Option<Vec<usize>>,
    determinant: Option<Rat>,
    fundamentals: Option<Result<Vec<BivarPoly>, Error>>,
    fundamental_ints: Option<Vec<Vec<BigInt>>>,
    gc: Option<GcStatus>,
    pub(crate) classifications: BTreeMap<Line, LineClassification>,
    pub(crate) usage_reports: BTreeMap<Line, UsageReport>,
}

/// Bitmask routines cap the set size; degree 8 gives 45 nodes, well below.
pub const MAX_NODES: usize = 64;

impl Context {
    pub fn new(set: NodeSet) -> Result<Context, Error> {
        if set.len() > MAX_NODES {
            return Err(Error::SetTooLarge {
                max: MAX_NODES,
                got: set.len(),
            });
        }
        Ok(Context {
            set,
            provenance: None,
            catalog: None,
            maximal: None,
            node_m_counts: None,
            determinant: None,
            fundamentals: None,
            fundamental_ints: None,
            gc: None,
            classifications: BTreeMap::new(),
            usage_reports: BTreeMap::new(),
        })
    }

    pub fn with_provenance(set: NodeSet, provenance: Provenance) -> Result<Context, Error> {
        let mut ctx = Context::new(set)?;
        ctx.provenance = Some(provenance);
        Ok(ctx)
    }

    pub fn set(&self) -> &NodeSet {
        &self.set
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn degree(&self) -> usize {
        self.set.degree()
    }

    /// Every line through at least two nodes, sorted canonically.
    pub fn catalog(&mut self) -> &[CatalogLine] {
        if self.catalog.is_none() {
            let entries: Vec<CatalogLine> = pair_lines(self.set.nodes())
                .into_iter()
                .map(|(line, nodes)| {
                    let mask = nodes.iter().fold(0u64, |m, &i| m | (1u64 << i));
                    CatalogLine { line, nodes, mask }
                })
                .collect();
            self.catalog = Some(entries);
        }
        self.catalog.as_ref().unwrap()
    }

    pub fn catalog_entry(&mut self, l: &Line) -> Option<&CatalogLine> {
        let catalog = self.catalog();
        catalog
            .binary_search_by(|e| e.line.cmp(l))
            .ok()
            .map(|i| &catalog[i])
    }

    /// Bitmask of nodes incident to the line (not restricted to catalog
    /// membership, so 0- and 1-node lines work too).
    pub fn incidence_mask(&mut self, l: &Line) -> u64 {
        if let Some(entry) = self.catalog_entry(l) {
            return entry.mask;
        }
        let mut mask = 0u64;
        for (i, p) in self.set.nodes().iter().enumerate() {
            if crate::geom::incident(l, p) {
                mask |= 1 << i;
            }
        }
        mask
    }

    pub fn full_mask(&self) -> u64 {
        if self.set.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.set.len()) - 1
        }
    }

    /// Maximal lines of the set: exactly the (degree+1)-node lines.
    pub fn maximal_lines(&mut self) -> Result<Vec<Line>, Error> {
        let idxs = self.maximal_indices()?;
        let catalog = self.catalog.as_ref().unwrap();
        Ok(idxs.iter().map(|&i| catalog[i].line.clone()).collect())
    }

    pub(crate) fn maximal_indices(&mut self) -> Result<Vec<usize>, Error> {
        if self.maximal.is_none() {
            let bound = self.set.degree() + 1;
            let mut out = Vec::new();
            let mut err = None;
            for (i, entry) in self.catalog().iter().enumerate() {
                if entry.nodes.len() > bound {
                    err = Some(Error::TooManyCollinear {
                        line: entry.line.clone(),
                        count: entry.nodes.len(),
                    });
                    break;
                }
                if entry.nodes.len() == bound {
                    out.push(i);
                }
            }
            self.maximal = Some(match err {
                Some(e) => Err(e),
                None => Ok(out),
            });
        }
        self.maximal.clone().unwrap()
    }

    /// Maximal lines of an arbitrary node subset, as catalog indices. The
    /// subset is assumed to have the given degree.
    pub(crate) fn subset_maximal(&mut self, mask: u64, degree: usize) -> Result<Vec<usize>, Error> {
        let bound = degree + 1;
        let mut out = Vec::new();
        for (i, entry) in self.catalog().iter().enumerate() {
            let count = (entry.mask & mask).count_ones() as usize;
            if count > bound {
                return Err(Error::TooManyCollinear {
                    line: entry.line.clone(),
                    count,
                });
            }
            if count == bound {
                out.push(i);
            }
        }
        Ok(out)
    }

    pub(crate) fn line_at(&self, catalog_index: usize) -> &CatalogLine {
        &self.catalog.as_ref().expect("catalog built")[catalog_index]
    }

    /// Materializes a node subset as a NodeSet of the given degree.
    pub(crate) fn materialize(&self, mask: u64, degree: usize) -> Result<NodeSet, Error> {
        self.set
            .subset(|p| mask & (1 << self.set.index_of(p).unwrap()) != 0, degree)
    }

    /// Number of maximal lines through each node.
    pub fn node_m_counts(&mut self) -> Result<&[usize], Error> {
        if self.node_m_counts.is_none() {
            let maximal = self.maximal_indices()?;
            let catalog = self.catalog.as_ref().unwrap();
            let mut counts = vec![0usize; self.set.len()];
            for &mi in &maximal {
                for &node in &catalog[mi].nodes {
                    counts[node] += 1;
                }
            }
            self.node_m_counts = Some(counts);
        }
        Ok(self.node_m_counts.as_ref().unwrap())
    }

    pub fn correctness_determinant(&mut self) -> Result<&Rat, Error> {
        if self.determinant.is_none() {
            self.determinant = Some(poly::correctness_determinant(&self.set)?);
        }
        Ok(self.determinant.as_ref().unwrap())
    }

    pub fn n_correct(&mut self) -> Result<bool, Error> {
        Ok(!self.correctness_determinant()?.is_zero())
    }

    pub fn fundamentals(&mut self) -> Result<&[BivarPoly], Error> {
        if self.fundamentals.is_none() {
            self.fundamentals = Some(poly::fundamental_all(&self.set));
        }
        match self.fundamentals.as_ref().unwrap() {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn fundamental(&mut self, node_index: usize) -> Result<&BivarPoly, Error> {
        Ok(&self.fundamentals()?[node_index])
    }

    /// Primitive integer coefficient forms of the fundamentals, for fast
    /// exact divisibility tests.
    pub(crate) fn fundamental_ints(&mut self) -> Result<&[Vec<BigInt>], Error> {
        if self.fundamental_ints.is_none() {
            let ints: Vec<Vec<BigInt>> = self
                .fundamentals()?
                .iter()
                .map(|p| p.primitive_int_coeffs())
                .collect();
            self.fundamental_ints = Some(ints);
        }
        Ok(self.fundamental_ints.as_ref().unwrap())
    }

    /// Factors every node's fundamental polynomial into lines, or records
    /// why it cannot be done.
    pub fn gc_status(&mut self) -> Result<&GcStatus, Error> {
        if self.gc.is_none() {
            let maximal = self.maximal_indices()?;
            self.fundamental_ints()?;
            let catalog = self.catalog.as_ref().unwrap().clone();
            let ints = self.fundamental_ints.as_ref().unwrap().clone();
            let set = self.set.clone();
            let factorizations = (0..set.len())
                .map(|i| factor_node(&set, &catalog, &maximal, i, &ints[i]))
                .collect();
            self.gc = Some(GcStatus { factorizations });
        }
        Ok(self.gc.as_ref().unwrap())
    }

    pub fn is_gc(&mut self) -> Result<bool, Error> {
        if !self.n_correct()? {
            return Ok(false);
        }
        Ok(self.gc_status()?.is_gc())
    }

    pub fn factorization(&mut self, node_index: usize) -> Result<FundamentalFactorization, Error> {
        let node = self.set.nodes()[node_index].clone();
        match &self.gc_status()?.factorizations[node_index] {
            Ok(f) => Ok(f.clone()),
            Err(fail) => Err(Error::NotFullyFactorable {
                node,
                residual_degree: fail.residual.effective_degree(),
            }),
        }
    }

    /// Full structural report: maximal lines, defect, node classes,
    /// correctness, GC flag.
    pub fn analyze(&mut self) -> Result<AnalysisReport, Error> {
        let maximal = self.maximal_lines()?;
        let defect = self.set.degree() as i64 + 2 - maximal.len() as i64;
        let counts = self.node_m_counts()?.to_vec();
        let node_classes: Vec<(Point, usize)> =
            self.set.nodes().iter().cloned().zip(counts).collect();
        let n_correct = self.n_correct()?;
        let is_gc = self.is_gc()?;
        Ok(AnalysisReport {
            maximal_lines: maximal,
            defect,
            node_classes,
            n_correct,
            is_gc,
        })
    }

    /// Incidence census of a line split by node class.
    pub fn line_profile(&mut self, l: &Line) -> Result<LineProfile, Error> {
        let mask = self.incidence_mask(l);
        let counts = self.node_m_counts()?.to_vec();
        let (mut zero_m, mut one_m, mut two_m) = (0, 0, 0);
        for i in 0..self.set.len() {
            if mask & (1 << i) == 0 {
                continue;
            }
            match counts[i] {
                0 => zero_m += 1,
                1 => one_m += 1,
                2 => two_m += 1,
                k => {
                    return Err(Error::Internal {
                        detail: format!("node on {k} maximal lines"),
                    })
                }
            }
        }
        Ok(LineProfile {
            line: l.clone(),
            node_count: mask.count_ones() as usize,
            zero_m,
            one_m,
            two_m,
        })
    }
}

/// The factorization of one node's fundamental polynomial by greedy line
/// peeling. Maximal lines avoiding the node divide unconditionally (a
/// degree-n polynomial vanishing at n+1 collinear points has the line as a
/// factor), so they are peeled first without a divisibility probe; the
/// remaining factors are searched among catalog lines in canonical order.
/// The factor multiset is order-independent because the polynomial ring is
/// a unique factorization domain.
fn factor_node(
    set: &NodeSet,
    catalog: &[CatalogLine],
    maximal: &[usize],
    node_index: usize,
    int_coeffs: &[BigInt],
) -> Result<FundamentalFactorization, FactorFailure> {
    let node = set.nodes()[node_index].clone();
    let node_bit = 1u64 << node_index;
    let mut degree = set.degree();
    let mut w = int_coeffs.to_vec();
    let mut peeled: Vec<Line> = Vec::new();

    for &mi in maximal {
        let entry = &catalog[mi];
        if entry.mask & node_bit != 0 {
            continue;
        }
        match poly::int_try_divide(&w, degree, &entry.line) {
            Some(q) => {
                w = q;
                degree -= 1;
                peeled.push(entry.line.clone());
            }
            None => {
                debug_assert!(false, "maximal line avoiding the node must divide");
                break;
            }
        }
    }

    'peel: while degree > 0 {
        for entry in catalog {
            if entry.mask & node_bit != 0 {
                continue; // the factor would vanish at the node itself
            }
            if let Some(q) = poly::int_try_divide(&w, degree, &entry.line) {
                w = q;
                degree -= 1;
                peeled.push(entry.line.clone());
                continue 'peel;
            }
        }
        let residual = BivarPoly::from_int_coeffs(degree, &w);
        let pencil = pencil_diagnostics(set, node_index, &w, degree);
        return Err(FactorFailure {
            node,
            peeled,
            residual,
            pencil,
        });
    }

    let mut product = Rat::one();
    for l in &peeled {
        product *= &l.eval_at(&node);
    }
    debug_assert!(!product.is_zero());
    peeled.sort();
    Ok(FundamentalFactorization {
        node,
        scalar: product.recip(),
        lines: peeled,
    })
}

/// Searches for line factors of the residual through each of its zeros in
/// the node set. Writing the residual around a zero B as a sum of forms
/// h_m, a line through B with direction (dx, dy) divides the residual
/// exactly when every h_m(dx, dy) = 0, i.e. when the direction is a common
/// root of the forms. The gcd of the dehomogenized forms finds those
/// directions without any factorization; only a linear gcd pins down a
/// concrete line.
fn pencil_diagnostics(
    set: &NodeSet,
    node_index: usize,
    residual: &[BigInt],
    degree: usize,
) -> Vec<PencilDiagnostic> {
    let mut out = Vec::new();
    if degree == 0 {
        return out;
    }
    for (i, b) in set.nodes().iter().enumerate() {
        if i == node_index {
            continue;
        }
        if !poly::int_eval(residual, degree, b).is_zero() {
            continue;
        }
        let shifted = shift_poly(residual, degree, b);
        // dehomogenized direction forms h_m(t, 1)
        let mut forms: Vec<Vec<Rat>> = Vec::new();
        for m in 1..=degree {
            let mut f = vec![Rat::zero(); m + 1];
            for a in 0..=m {
                f[a] = shifted[poly_idx(a, m - a)].clone();
            }
            if f.iter().any(|c| !c.is_zero()) {
                forms.push(f);
            }
        }
        if forms.is_empty() {
            continue;
        }
        let mut gcd = forms[0].clone();
        for f in &forms[1..] {
            gcd = univar_gcd(&gcd, f);
        }
        let gcd_degree = univar_degree(&gcd);
        let mut extracted = None;
        if gcd_degree == 1 {
            // root t0 = -g0/g1, direction (t0, 1)
            let t0 = &(-&gcd[0]) / &gcd[1];
            let q = Point::new(&b.x + &t0, &b.y + &Rat::one());
            if let Ok(l) = line_through(b, &q) {
                if poly::int_try_divide(residual, degree, &l).is_some() {
                    extracted = Some(l);
                }
            }
        } else if gcd_degree == 0 {
            // no affine-direction factor; check the vertical direction (1, 0)
            let vertical_ok = (1..=degree).all(|m| shifted[poly_idx(m, 0)].is_zero());
            if vertical_ok {
                let q = Point::new(&b.x + &Rat::one(), b.y.clone());
                if let Ok(l) = line_through(b, &q) {
                    if poly::int_try_divide(residual, degree, &l).is_some() {
                        extracted = Some(l);
                    }
                }
            }
        }
        if gcd_degree >= 1 || extracted.is_some() {
            out.push(PencilDiagnostic {
                through: b.clone(),
                gcd_degree,
                extracted,
            });
        }
    }
    out
}

fn poly_idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + i
}

/// Coefficients of p(bx + u, by + v) in the triangular layout.
fn shift_poly(coeffs: &[BigInt], degree: usize, b: &Point) -> Vec<Rat> {
    let n = degree;
    let mut out = vec![Rat::zero(); poly::dim(n)];
    let mut xp = vec![Rat::one()];
    let mut yp = vec![Rat::one()];
    for k in 1..=n {
        xp.push(&xp[k - 1] * &b.x);
        yp.push(&yp[k - 1] * &b.y);
    }
    let binom = binomials(n);
    for (k, (i, j)) in poly::monomials(n).enumerate() {
        if coeffs[k].is_zero() {
            continue;
        }
        let c = Rat::from_bigint(coeffs[k].clone());
        for s in 0..=i {
            for t in 0..=j {
                let factor = &(&c * &Rat::from_bigint(BigInt::from(binom[i][s] * binom[j][t])))
                    * &(&xp[i - s] * &yp[j - t]);
                out[poly_idx(s, t)] += &factor;
            }
        }
    }
    out
}

fn binomials(n: usize) -> Vec<Vec<u64>> {
    let mut b = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        b[i][0] = 1;
        for j in 1..=i {
            b[i][j] = b[i - 1][j - 1] + if j < i { b[i - 1][j] } else { 0 };
        }
    }
    b
}

fn univar_degree(p: &[Rat]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

fn univar_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let trim = |v: &[Rat]| -> Vec<Rat> {
        let d = v.iter().rposition(|c| !c.is_zero());
        match d {
            Some(d) => v[..=d].to_vec(),
            None => vec![],
        }
    };
    let mut f = trim(a);
    let mut g = trim(b);
    while !g.is_empty() {
        // remainder of f by g
        let gd = g.len() - 1;
        let glead = g[gd].clone();
        while f.len() >= g.len() && !f.is_empty() {
            let fd = f.len() - 1;
            let factor = &f[fd] / &glead;
            let shift = fd - gd;
            for (k, gc) in g.iter().enumerate() {
                let delta = &factor * gc;
                f[k + shift] -= &delta;
            }
            f = trim(&f);
            if f.len() <= gd {
                break;
            }
        }
        std::mem::swap(&mut f, &mut g);
        g = trim(&g);
    }
    if f.is_empty() {
        return vec![Rat::zero()];
    }
    // monic normalization keeps the result deterministic
    let lead = f.last().unwrap().clone();
    f.iter().map(|c| c / &lead).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn line(a: i64, b: i64, c: i64) -> Line {
        Line::from_ints(a, b, c).unwrap()
    }

    /// The principal lattice of the given degree: {(i, j) : i + j <= n}.
    fn pl(n: usize) -> NodeSet {
        let mut nodes = Vec::new();
        for i in 0..=(n as i64) {
            for j in 0..=(n as i64 - i) {
                nodes.push(pt(i, j));
            }
        }
        NodeSet::new(n, nodes).unwrap()
    }

    #[test]
    fn node_set_validation() {
        assert!(matches!(
            NodeSet::new(1, vec![pt(0, 0), pt(1, 0)]),
            Err(Error::SizeMismatch { .. })
        ));
        assert!(matches!(
            NodeSet::new(1, vec![pt(0, 0), pt(0, 0), pt(1, 0)]),
            Err(Error::DuplicateNode { .. })
        ));
        assert!(matches!(
            NodeSet::new(1, vec![pt(0, 0), pt(1, 1), pt(2, 2)]),
            Err(Error::TooManyCollinear { .. })
        ));
        assert!(NodeSet::new_allow_collinear(1, vec![pt(0, 0), pt(1, 1), pt(2, 2)]).is_ok());
    }

    #[test]
    fn unit_triangle_maximal_lines() {
        let set = NodeSet::new(1, vec![pt(0, 0), pt(1, 0), pt(0, 1)]).unwrap();
        let mut ctx = Context::new(set).unwrap();
        let m = ctx.maximal_lines().unwrap();
        assert_eq!(m, vec![line(0, 1, 0), line(1, 0, 0), line(1, 1, -1)]);
    }

    #[test]
    fn pl3_maximal_lines_and_defect() {
        let mut ctx = Context::new(pl(3)).unwrap();
        let m = ctx.maximal_lines().unwrap();
        assert_eq!(m, vec![line(0, 1, 0), line(1, 0, 0), line(1, 1, -3)]);
        let report = ctx.analyze().unwrap();
        assert_eq!(report.defect, 2); // n + 2 - 3
        assert!(report.n_correct);
        assert!(report.is_gc);
    }

    #[test]
    fn pl5_analysis() {
        let mut ctx = Context::new(pl(5)).unwrap();
        let report = ctx.analyze().unwrap();
        assert_eq!(report.maximal_lines.len(), 3);
        assert_eq!(report.defect, 4); // n - 1
    }

    #[test]
    fn pl2_factorization_of_origin() {
        let mut ctx = Context::new(pl(2)).unwrap();
        let idx = ctx.set().index_of(&pt(0, 0)).unwrap();
        let f = ctx.factorization(idx).unwrap();
        assert_eq!(f.scalar, Rat::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(f.lines, vec![line(1, 1, -2), line(1, 1, -1)]);
        // soundness: expansion reproduces the solved fundamental polynomial
        let expanded = f.expand(2);
        assert_eq!(&expanded, ctx.fundamental(idx).unwrap());
    }

    #[test]
    fn unit_triangle_factorization() {
        let set = NodeSet::new(1, vec![pt(0, 0), pt(1, 0), pt(0, 1)]).unwrap();
        let mut ctx = Context::new(set).unwrap();
        let idx = ctx.set().index_of(&pt(0, 0)).unwrap();
        let f = ctx.factorization(idx).unwrap();
        assert_eq!(f.lines, vec![line(1, 1, -1)]);
        assert_eq!(f.scalar, Rat::from_int(-1));
    }

    #[test]
    fn degree_one_sets_are_gc() {
        let set = NodeSet::new(1, vec![pt(0, 0), pt(3, 1), pt(1, 4)]).unwrap();
        let mut ctx = Context::new(set).unwrap();
        assert!(ctx.is_gc().unwrap());
    }

    #[test]
    fn random_degree_two_set_is_not_gc() {
        // Six points in general position with no three collinear and no
        // conic degeneracy that would make them GC: a generic configuration.
        let set = NodeSet::new(
            2,
            vec![pt(0, 0), pt(1, 0), pt(0, 1), pt(2, 3), pt(5, 1), pt(3, 7)],
        )
        .unwrap();
        let mut ctx = Context::new(set).unwrap();
        assert!(ctx.n_correct().unwrap());
        assert!(!ctx.is_gc().unwrap());
        let status = ctx.gc_status().unwrap();
        let fail = status.failures().next().expect("some node must fail");
        assert!(fail.residual.effective_degree() > 0);
    }

    #[test]
    fn line_profile_counts_classes() {
        let mut ctx = Context::new(pl(3)).unwrap();
        // the maximal line x = 0 carries (0,0), (0,1), (0,2), (0,3):
        // (0,0) lies on x=0 and y=0 -> 2m; (0,3) on x=0 and x+y=3 -> 2m.
        let p = ctx.line_profile(&line(1, 0, 0)).unwrap();
        assert_eq!(p.node_count, 4);
        assert_eq!((p.zero_m, p.one_m, p.two_m), (0, 2, 2));
    }

    #[test]
    fn fundamentals_satisfy_delta_property() {
        let mut ctx = Context::new(pl(2)).unwrap();
        let nodes = ctx.set().nodes().to_vec();
        for (i, _) in nodes.iter().enumerate() {
            let p = ctx.fundamental(i).unwrap().clone();
            for (j, b) in nodes.iter().enumerate() {
                let v = p.eval(b);
                if i == j {
                    assert!(v.is_one());
                } else {
                    assert!(v.is_zero());
                }
            }
        }
    }

    #[test]
    fn partition_of_unity() {
        let mut ctx = Context::new(pl(3)).unwrap();
        let count = ctx.set().len();
        let mut sum = BivarPoly::zero(3);
        for i in 0..count {
            sum = sum.add(ctx.fundamental(i).unwrap());
        }
        assert_eq!(sum, BivarPoly::constant(3, Rat::one()));
    }

    #[test]
    fn peel_order_independence() {
        // Factor with the default canonical order, then re-factor with the
        // catalog reversed; the multisets must agree.
        let mut ctx = Context::new(pl(3)).unwrap();
        let maximal = ctx.maximal_indices().unwrap();
        let ints = ctx.fundamental_ints().unwrap().to_vec();
        let catalog = ctx.catalog().to_vec();
        let set = ctx.set().clone();

        let mut reversed = catalog.clone();
        reversed.reverse();
        let rev_maximal: Vec<usize> = maximal
            .iter()
            .map(|&i| catalog.len() - 1 - i)
            .rev()
            .collect();

        for i in 0..set.len() {
            let a = factor_node(&set, &catalog, &maximal, i, &ints[i]).unwrap();
            let b = factor_node(&set, &reversed, &rev_maximal, i, &ints[i]).unwrap();
            assert_eq!(a.lines, b.lines);
            assert_eq!(a.scalar, b.scalar);
        }
    }
}
