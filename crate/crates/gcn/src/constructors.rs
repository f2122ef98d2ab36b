//! Exact builders for the five families of GC sets: Chung-Yao (defect 0),
//! Carnicer-Gasca (defect 1), defect-2, defect-3, and affine principal
//! lattices (defect n-1).
//!
//! Randomized constructors draw small integer data from a counter-based
//! generator and reject every degeneracy with exact predicates, so identical
//! (degree, seed) pairs always produce bit-identical sets. The defect-2 and
//! defect-3 builders re-verify their characterization clauses and
//! n-correctness before returning.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::gcset::{Context, NodeSet};
use crate::geom::{incident, intersect, line_through, Intersection, Line, Point, Rat};
use crate::Error;

const MAX_ATTEMPTS: u32 = 10_000;
/// Bound on random line coefficients.
const COEFF_BOUND: i64 = 50;

/// Counter-based deterministic generator (splitmix64). Owned per call so
/// constructors stay pure functions of (degree, seed).
struct Rng {
    state: u64,
}

impl Rng {
    fn new(seed: u64) -> Rng {
        Rng { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-enough draw in [lo, hi]; determinism matters more than bias.
    fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    fn line(&mut self, bound: i64) -> Line {
        loop {
            let a = self.int_in(-bound, bound);
            let b = self.int_in(-bound, bound);
            let c = self.int_in(-bound, bound);
            if a == 0 && b == 0 {
                continue;
            }
            return Line::from_ints(a, b, c).expect("nonzero normal");
        }
    }

    /// Small rational parameter; numerators and denominators stay tiny to
    /// keep downstream determinant entries short.
    fn param(&mut self) -> Rat {
        let num = self.int_in(-24, 24);
        let den = self.int_in(1, 3);
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    /// A point on the line via its canonical parametrization.
    fn point_on(&mut self, l: &Line) -> Point {
        let t = self.param();
        if !l.b().is_zero() {
            let b = Rat::from_bigint(l.b().clone());
            let y = &(-&(&(&Rat::from_bigint(l.a().clone()) * &t)
                + &Rat::from_bigint(l.c().clone())))
                / &b;
            Point::new(t, y)
        } else {
            let x = &(-&Rat::from_bigint(l.c().clone())) / &Rat::from_bigint(l.a().clone());
            Point::new(x, t)
        }
    }

    fn point(&mut self) -> Point {
        Point::new(self.param(), self.param())
    }

    /// A line through the given point with a random direction.
    fn line_through_point(&mut self, p: &Point) -> Line {
        loop {
            let dx = self.int_in(-12, 12);
            let dy = self.int_in(-12, 12);
            if dx == 0 && dy == 0 {
                continue;
            }
            let a = Rat::from_int(dy);
            let b = Rat::from_int(-dx);
            let c = -&(&(&a * &p.x) + &(&b * &p.y));
            if let Ok(l) = Line::from_rational_coeffs(&a, &b, &c) {
                return l;
            }
        }
    }
}

/// Seed lines in general position: no two parallel, no three concurrent.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneralPositionLines {
    pub lines: Vec<Line>,
    pub seed: u64,
}

/// An invertible affine map of the plane, acting on points and lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    /// Row-major linear part [[m00, m01], [m10, m11]].
    pub linear: [[Rat; 2]; 2],
    pub translation: [Rat; 2],
}

impl AffineMap {
    pub fn identity() -> AffineMap {
        AffineMap {
            linear: [[Rat::one(), Rat::zero()], [Rat::zero(), Rat::one()]],
            translation: [Rat::zero(), Rat::zero()],
        }
    }

    pub fn det(&self) -> Rat {
        &(&self.linear[0][0] * &self.linear[1][1]) - &(&self.linear[0][1] * &self.linear[1][0])
    }

    pub fn apply(&self, p: &Point) -> Point {
        Point::new(
            &(&(&self.linear[0][0] * &p.x) + &(&self.linear[0][1] * &p.y)) + &self.translation[0],
            &(&(&self.linear[1][0] * &p.x) + &(&self.linear[1][1] * &p.y)) + &self.translation[1],
        )
    }

    pub fn inverse(&self) -> Result<AffineMap, Error> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularTransform);
        }
        let inv = [
            [&self.linear[1][1] / &det, &(-&self.linear[0][1]) / &det],
            [&(-&self.linear[1][0]) / &det, &self.linear[0][0] / &det],
        ];
        let tx = -&(&(&inv[0][0] * &self.translation[0]) + &(&inv[0][1] * &self.translation[1]));
        let ty = -&(&(&inv[1][0] * &self.translation[0]) + &(&inv[1][1] * &self.translation[1]));
        Ok(AffineMap {
            linear: inv,
            translation: [tx, ty],
        })
    }

    /// Image of a line: the locus of T(p) for p on the line, computed by
    /// composing the defining form with the inverse map.
    pub fn transform_line(&self, l: &Line, inverse: &AffineMap) -> Result<Line, Error> {
        let a = Rat::from_bigint(l.a().clone());
        let b = Rat::from_bigint(l.b().clone());
        let c = Rat::from_bigint(l.c().clone());
        let na = &(&a * &inverse.linear[0][0]) + &(&b * &inverse.linear[1][0]);
        let nb = &(&a * &inverse.linear[0][1]) + &(&b * &inverse.linear[1][1]);
        let nc = &(&(&a * &inverse.translation[0]) + &(&b * &inverse.translation[1])) + &c;
        Line::from_rational_coeffs(&na, &nb, &nc)
    }
}

/// Construction record carried alongside a generated set so analyses can
/// cross-check discovered structure against intent.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Provenance {
    #[serde(rename = "chung-yao")]
    ChungYao { seed: u64, lines: Vec<Line> },
    #[serde(rename = "carnicer-gasca")]
    CarnicerGasca {
        seed: u64,
        lines: Vec<Line>,
        extras: Vec<Point>,
    },
    #[serde(rename = "defect-2")]
    DefectTwo {
        seed: u64,
        maximal: Vec<Line>,
        center: Point,
        o_lines: Vec<Line>,
        /// For maximal line i, the index of the O-line whose intersection
        /// with it was left out of the node set.
        drops: Vec<usize>,
    },
    #[serde(rename = "defect-3")]
    DefectThree {
        seed: u64,
        maximal: Vec<Line>,
        /// `d_nodes[i]` lies on `maximal[i]`.
        d_nodes: Vec<Point>,
        /// `o_nodes[k]` lies on `dd_lines[k]`.
        o_nodes: Vec<Point>,
        /// `oo_lines[i]` joins the two o-nodes other than i and misses
        /// `maximal[i]` inside the set.
        oo_lines: Vec<Line>,
        /// `dd_lines[k]` joins the two d-nodes other than k.
        dd_lines: Vec<Line>,
    },
    #[serde(rename = "principal")]
    Principal {
        transform: AffineMap,
        /// Three pencils of degree+1 lines each; family r index s cuts the
        /// lattice along its r-th coordinate.
        families: Vec<Vec<Line>>,
    },
}

impl Provenance {
    pub fn family_name(&self) -> &'static str {
        match self {
            Provenance::ChungYao { .. } => "chung-yao",
            Provenance::CarnicerGasca { .. } => "carnicer-gasca",
            Provenance::DefectTwo { .. } => "defect-2",
            Provenance::DefectThree { .. } => "defect-3",
            Provenance::Principal { .. } => "principal",
        }
    }
}

/// A constructed node set together with its provenance.
#[derive(Clone, Debug, Serialize)]
pub struct Instance {
    #[serde(flatten)]
    pub set: NodeSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Deserialize)]
struct InstanceRepr {
    degree: usize,
    nodes: Vec<Point>,
    #[serde(default)]
    provenance: Option<Provenance>,
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Instance, D::Error> {
        let repr = InstanceRepr::deserialize(deserializer)?;
        // Collinearity violations are allowed at load time so degenerate
        // inputs can still be analyzed and reported as incorrect.
        let set = NodeSet::new_allow_collinear(repr.degree, repr.nodes)
            .map_err(serde::de::Error::custom)?;
        Ok(Instance {
            set,
            provenance: repr.provenance,
        })
    }
}

impl Instance {
    pub fn context(&self) -> Result<Context, Error> {
        match &self.provenance {
            Some(p) => Context::with_provenance(self.set.clone(), p.clone()),
            None => Context::new(self.set.clone()),
        }
    }
}

/// Draws `count` lines in general position by rejection.
fn general_position_lines(
    rng: &mut Rng,
    count: usize,
    attempts: &mut u32,
    family: &'static str,
) -> Result<Vec<Line>, Error> {
    let mut lines: Vec<Line> = Vec::with_capacity(count);
    let mut crossings: Vec<Point> = Vec::new();
    while lines.len() < count {
        *attempts += 1;
        if *attempts > MAX_ATTEMPTS {
            return Err(Error::GenerationFailed {
                family,
                attempts: *attempts,
            });
        }
        let cand = rng.line(COEFF_BOUND);
        if lines.contains(&cand) {
            continue;
        }
        if lines.iter().any(|l| l.is_parallel_to(&cand)) {
            continue;
        }
        if crossings.iter().any(|p| incident(&cand, p)) {
            continue; // three concurrent lines
        }
        for l in &lines {
            match intersect(l, &cand) {
                Intersection::At(p) => crossings.push(p),
                Intersection::ParallelOrEqual => unreachable!("parallel rejected"),
            }
        }
        lines.push(cand);
    }
    Ok(lines)
}

fn pairwise_intersections(lines: &[Line]) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            if let Intersection::At(p) = intersect(&lines[i], &lines[j]) {
                out.push(p);
            }
        }
    }
    out
}

/// Chung-Yao lattice: all pairwise intersections of degree+2 general
/// position lines. Defect 0; every node lies on exactly two maximal lines.
pub fn chung_yao(degree: usize, seed: u64) -> Result<Instance, Error> {
    if degree < 1 {
        return Err(Error::DegreeOutOfRange {
            family: "chung-yao",
            degree,
            min: 1,
        });
    }
    let mut rng = Rng::new(seed);
    let mut attempts = 0;
    loop {
        let lines = general_position_lines(&mut rng, degree + 2, &mut attempts, "chung-yao")?;
        let nodes = pairwise_intersections(&lines);
        match NodeSet::new(degree, nodes) {
            Ok(set) => {
                return Ok(Instance {
                    set,
                    provenance: Some(Provenance::ChungYao { seed, lines }),
                })
            }
            Err(_) => continue,
        }
    }
}

/// Carnicer-Gasca lattice: intersections of degree+1 general position lines
/// plus one extra node on each line. Defect 1.
pub fn carnicer_gasca(degree: usize, seed: u64) -> Result<Instance, Error> {
    if degree < 2 {
        return Err(Error::DegreeOutOfRange {
            family: "carnicer-gasca",
            degree,
            min: 2,
        });
    }
    let mut rng = Rng::new(seed);
    let mut attempts = 0;
    let lines = general_position_lines(&mut rng, degree + 1, &mut attempts, "carnicer-gasca")?;
    let crossings = pairwise_intersections(&lines);
    loop {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(Error::GenerationFailed {
                family: "carnicer-gasca",
                attempts,
            });
        }
        let mut extras = Vec::with_capacity(lines.len());
        'sample: for (i, l) in lines.iter().enumerate() {
            for _ in 0..64 {
                let p = rng.point_on(l);
                let on_other = lines
                    .iter()
                    .enumerate()
                    .any(|(j, m)| j != i && incident(m, &p));
                if !on_other {
                    extras.push(p);
                    continue 'sample;
                }
            }
            break 'sample; // hopeless line, resample everything
        }
        if extras.len() != lines.len() {
            continue;
        }
        let mut nodes = crossings.clone();
        nodes.extend(extras.iter().cloned());
        let set = match NodeSet::new(degree, nodes) {
            Ok(s) => s,
            Err(_) => continue,
        };
        // The seed lines must be the only maximal lines.
        let mut ctx = Context::new(set.clone())?;
        let mut maximal = ctx.maximal_lines()?;
        maximal.sort();
        let mut sorted_seeds = lines.clone();
        sorted_seeds.sort();
        if maximal != sorted_seeds {
            continue;
        }
        return Ok(Instance {
            set,
            provenance: Some(Provenance::CarnicerGasca {
                seed,
                lines,
                extras,
            }),
        });
    }
}

/// Balanced drop choice: for each maximal line in order, keep the two
/// O-line crossings that least load their O-lines, dropping the crossing on
/// the currently fullest O-line (canonically smallest on ties). This is
/// what keeps every O-line strictly below degree+1 nodes.
fn choose_drops(n: usize) -> Vec<usize> {
    let mut kept = [0usize; 3];
    let mut drops = Vec::with_capacity(n);
    for _ in 0..n {
        let drop = (0..3)
            .max_by_key(|&j| (kept[j], std::cmp::Reverse(j)))
            .unwrap();
        for (j, k) in kept.iter_mut().enumerate() {
            if j != drop {
                *k += 1;
            }
        }
        drops.push(drop);
    }
    drops
}

/// Defect-2 set: degree general-position maximal lines, two extra nodes per
/// line placed on three lines concurrent at an off-lattice center O, plus O
/// itself.
pub fn defect_two(degree: usize, seed: u64) -> Result<Instance, Error> {
    if degree < 3 {
        return Err(Error::DegreeOutOfRange {
            family: "defect-2",
            degree,
            min: 3,
        });
    }
    let n = degree;
    let mut rng = Rng::new(seed);
    let mut attempts = 0;
    let lines = general_position_lines(&mut rng, n, &mut attempts, "defect-2")?;
    let crossings = pairwise_intersections(&lines);
    'outer: loop {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(Error::GenerationFailed {
                family: "defect-2",
                attempts,
            });
        }
        let center = rng.point();
        if lines.iter().any(|l| incident(l, &center)) {
            continue;
        }
        let mut o_lines: Vec<Line> = Vec::with_capacity(3);
        for _ in 0..3 {
            let cand = rng.line_through_point(&center);
            if o_lines.contains(&cand) {
                continue 'outer;
            }
            if lines.iter().any(|l| l.is_parallel_to(&cand)) {
                continue 'outer;
            }
            if crossings.iter().any(|p| incident(&cand, p)) {
                continue 'outer;
            }
            o_lines.push(cand);
        }
        o_lines.sort();

        let drops = choose_drops(n);
        let mut one_m_nodes: Vec<Point> = Vec::with_capacity(2 * n);
        for (i, maximal) in lines.iter().enumerate() {
            for (j, o_line) in o_lines.iter().enumerate() {
                if j == drops[i] {
                    continue;
                }
                match intersect(maximal, o_line) {
                    Intersection::At(p) => one_m_nodes.push(p),
                    Intersection::ParallelOrEqual => continue 'outer,
                }
            }
        }

        let mut nodes = crossings.clone();
        nodes.extend(one_m_nodes.iter().cloned());
        nodes.push(center.clone());
        let set = match NodeSet::new(n, nodes) {
            Ok(s) => s,
            Err(_) => continue,
        };

        let mut ctx = Context::new(set.clone())?;
        let mut maximal = ctx.maximal_lines()?;
        maximal.sort();
        let mut sorted_seeds = lines.clone();
        sorted_seeds.sort();
        if maximal != sorted_seeds {
            continue; // an accidental maximal line emerged
        }
        if !ctx.n_correct()? {
            continue;
        }
        // Characterization checks: the three concurrent O-lines carry all
        // the 1m-nodes, none reaches degree+1 nodes, each keeps at least 2.
        for o_line in &o_lines {
            if !incident(o_line, &center) {
                return Err(Error::CharacterizationViolated {
                    family: "defect-2",
                    detail: "o-line misses the center".into(),
                });
            }
            let count = set.nodes().iter().filter(|p| incident(o_line, p)).count();
            if count > n {
                return Err(Error::CharacterizationViolated {
                    family: "defect-2",
                    detail: format!("o-line carries {count} nodes"),
                });
            }
        }
        for p in &one_m_nodes {
            if !o_lines.iter().any(|l| incident(l, p)) {
                return Err(Error::CharacterizationViolated {
                    family: "defect-2",
                    detail: "1m-node off all o-lines".into(),
                });
            }
        }
        return Ok(Instance {
            set,
            provenance: Some(Provenance::DefectTwo {
                seed,
                maximal: lines,
                center,
                o_lines,
                drops,
            }),
        });
    }
}

/// Defect-3 set: degree-1 general-position maximal lines, three extra nodes
/// per line, and three off-lattice nodes O_1, O_2, O_3 arranged so that the
/// triples {O_k, D_i, D_j} are collinear and each OO-line carries exactly
/// degree nodes while missing its opposite maximal line inside the set.
pub fn defect_three(degree: usize, seed: u64) -> Result<Instance, Error> {
    if degree < 4 {
        return Err(Error::DegreeOutOfRange {
            family: "defect-3",
            degree,
            min: 4,
        });
    }
    let n = degree;
    let mut rng = Rng::new(seed);
    let mut attempts = 0;
    let lines = general_position_lines(&mut rng, n - 1, &mut attempts, "defect-3")?;
    let crossings = pairwise_intersections(&lines);
    'outer: loop {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(Error::GenerationFailed {
                family: "defect-3",
                attempts,
            });
        }
        // D_i on maximal line i, off all others.
        let mut d_nodes: Vec<Point> = Vec::with_capacity(3);
        for i in 0..3 {
            let mut found = false;
            for _ in 0..64 {
                let p = rng.point_on(&lines[i]);
                let bad = lines
                    .iter()
                    .enumerate()
                    .any(|(j, l)| j != i && incident(l, &p));
                if !bad {
                    d_nodes.push(p);
                    found = true;
                    break;
                }
            }
            if !found {
                continue 'outer;
            }
        }
        // dd_lines[k] joins the two d-nodes other than k.
        if line_through(&d_nodes[0], &d_nodes[1]).is_err() {
            continue;
        }
        let dd_of = |k: usize| -> Result<Line, Error> {
            let (i, j) = match k {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            line_through(&d_nodes[i], &d_nodes[j])
        };
        let dd_lines: Vec<Line> = match (dd_of(0), dd_of(1), dd_of(2)) {
            (Ok(a), Ok(b), Ok(c)) => vec![a, b, c],
            _ => continue,
        };
        if dd_lines[0] == dd_lines[1] || dd_lines[1] == dd_lines[2] || dd_lines[0] == dd_lines[2] {
            continue; // collinear d-nodes
        }
        if dd_lines
            .iter()
            .any(|dd| crossings.iter().any(|p| incident(dd, p)))
        {
            continue;
        }
        // O_k on dd_lines[k], off every maximal line and distinct from the
        // d-nodes.
        let mut o_nodes: Vec<Point> = Vec::with_capacity(3);
        for dd in &dd_lines {
            let mut found = false;
            for _ in 0..64 {
                let p = rng.point_on(dd);
                if lines.iter().any(|l| incident(l, &p)) {
                    continue;
                }
                if d_nodes.contains(&p) {
                    continue;
                }
                o_nodes.push(p);
                found = true;
                break;
            }
            if !found {
                continue 'outer;
            }
        }
        if let Ok(l) = line_through(&o_nodes[0], &o_nodes[1]) {
            if incident(&l, &o_nodes[2]) {
                continue; // collinear O-nodes
            }
        } else {
            continue;
        }
        // oo_lines[i] joins the two o-nodes other than i.
        let oo_of = |i: usize| -> Result<Line, Error> {
            let (j, k) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            line_through(&o_nodes[j], &o_nodes[k])
        };
        let oo_lines: Vec<Line> = match (oo_of(0), oo_of(1), oo_of(2)) {
            (Ok(a), Ok(b), Ok(c)) => vec![a, b, c],
            _ => continue,
        };
        // Each oo-line must cross every maximal line except possibly its
        // own, avoid all 2m-nodes and d-nodes, and miss its own maximal
        // line inside the set.
        let mut one_m_nodes: Vec<Point> = Vec::new();
        for (i, oo) in oo_lines.iter().enumerate() {
            if crossings.iter().any(|p| incident(oo, p)) {
                continue 'outer;
            }
            if d_nodes.iter().any(|p| incident(oo, p)) {
                continue 'outer;
            }
            for (j, maximal) in lines.iter().enumerate() {
                match intersect(oo, maximal) {
                    Intersection::At(p) => {
                        if j == i {
                            // will be excluded from the set; checked below
                            if d_nodes[i] == p {
                                continue 'outer;
                            }
                        } else {
                            if d_nodes.get(j).map(|d| d == &p).unwrap_or(false) {
                                continue 'outer;
                            }
                            one_m_nodes.push(p);
                        }
                    }
                    Intersection::ParallelOrEqual => {
                        if j != i {
                            continue 'outer; // every other crossing must exist
                        }
                    }
                }
            }
        }

        let mut nodes = crossings.clone();
        nodes.extend(d_nodes.iter().cloned());
        nodes.extend(one_m_nodes.iter().cloned());
        nodes.extend(o_nodes.iter().cloned());
        let set = match NodeSet::new(n, nodes) {
            Ok(s) => s,
            Err(_) => continue,
        };

        let mut ctx = Context::new(set.clone())?;
        let mut maximal = ctx.maximal_lines()?;
        maximal.sort();
        let mut sorted_seeds = lines.clone();
        sorted_seeds.sort();
        if maximal != sorted_seeds {
            continue;
        }
        if !ctx.n_correct()? {
            continue;
        }
        // Characterization checks.
        for (i, oo) in oo_lines.iter().enumerate() {
            let count = set.nodes().iter().filter(|p| incident(oo, p)).count();
            if count != n {
                return Err(Error::CharacterizationViolated {
                    family: "defect-3",
                    detail: format!("oo-line carries {count} nodes, expected {n}"),
                });
            }
            if let Intersection::At(p) = intersect(oo, &lines[i]) {
                if set.contains(&p) {
                    return Err(Error::CharacterizationViolated {
                        family: "defect-3",
                        detail: "oo-line meets its maximal line at a node".into(),
                    });
                }
            }
        }
        for (k, dd) in dd_lines.iter().enumerate() {
            if !incident(dd, &o_nodes[k]) {
                return Err(Error::CharacterizationViolated {
                    family: "defect-3",
                    detail: "collinearity triple broken".into(),
                });
            }
        }
        return Ok(Instance {
            set,
            provenance: Some(Provenance::DefectThree {
                seed,
                maximal: lines,
                d_nodes,
                o_nodes,
                oo_lines,
                dd_lines,
            }),
        });
    }
}

/// Principal lattice of the given degree, optionally pushed through an
/// invertible affine map. Defect degree-1 with exactly three maximal lines.
pub fn principal_lattice(degree: usize, transform: Option<AffineMap>) -> Result<Instance, Error> {
    if degree < 1 {
        return Err(Error::DegreeOutOfRange {
            family: "principal",
            degree,
            min: 1,
        });
    }
    let n = degree as i64;
    let map = transform.unwrap_or_else(AffineMap::identity);
    let inverse = map.inverse()?; // rejects singular transforms
    let mut nodes = Vec::new();
    for i in 0..=n {
        for j in 0..=(n - i) {
            nodes.push(map.apply(&Point::from_ints(i, j)));
        }
    }
    let mut families: Vec<Vec<Line>> = Vec::with_capacity(3);
    for r in 0..3 {
        let mut fam = Vec::with_capacity(degree + 1);
        for s in 0..=n {
            let base = match r {
                0 => Line::from_ints(1, 0, -s),
                1 => Line::from_ints(0, 1, -s),
                _ => Line::from_ints(1, 1, -(n - s)),
            }
            .expect("valid base line");
            fam.push(map.transform_line(&base, &inverse)?);
        }
        families.push(fam);
    }
    let set = NodeSet::new(degree, nodes)?;
    Ok(Instance {
        set,
        provenance: Some(Provenance::Principal {
            transform: map,
            families,
        }),
    })
}
