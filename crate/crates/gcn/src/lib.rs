//! Exact construction and structural analysis of GC_n interpolation node
//! sets in the plane.
//!
//! A GC_n set is an n-correct node set in which every node's fundamental
//! polynomial splits into n linear factors. This crate builds the known
//! families of such sets with exact rational arithmetic (Chung-Yao,
//! Carnicer-Gasca, defect-2, defect-3, and principal lattices), computes and
//! factorizes fundamental polynomials, runs the lowering/reduction calculus
//! that classifies used lines as maximal, proper, or proper(-r), and
//! machine-checks the structural laws these sets obey on concrete instances.
//!
//! Entry points:
//! - [`constructors`] builds family instances from a degree and a seed.
//! - [`gcset::Context`] caches the per-set analysis (maximal lines, node
//!   classes, fundamental polynomials and their factorizations).
//! - [`usage`] computes the node set using a given line, two independent
//!   ways, and classifies every line of the arrangement.
//! - [`verify`] turns the structural laws into pass/fail reports with
//!   witnesses.

// Errors carry the exact line or node that witnessed the failure; keeping
// the enum by value outweighs the size of a Result here.
#![allow(clippy::result_large_err)]
// Index loops that drive several parallel arrays or use the index as a
// semantic identifier stay as index loops.
#![allow(clippy::needless_range_loop)]

pub mod constructors;
pub mod gcset;
pub mod geom;
pub mod poly;
pub mod usage;
pub mod verify;

use geom::{Line, Point};
use thiserror::Error as ThisError;

/// Crate-wide error type. Variants are named for the contract they break.
#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum Error {
    #[error("the two points are identical: {point}")]
    IdenticalPoints { point: Point },

    #[error("line coefficients (a, b) must not both be zero")]
    DegenerateLine,

    #[error("node set has {got} nodes, expected {expected}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("duplicate node {node}")]
    DuplicateNode { node: Point },

    #[error("line {line} passes through {count} nodes, more than degree+1")]
    TooManyCollinear { line: Line, count: usize },

    #[error("node sets larger than {max} nodes are unsupported (got {got})")]
    SetTooLarge { max: usize, got: usize },

    #[error("polynomial is not divisible by the line")]
    NotDivisible,

    #[error("node set is not correct: collocation determinant is zero")]
    NotCorrect,

    #[error("node {node} is not in the set")]
    NodeAbsent { node: Point },

    #[error("fundamental polynomial of {node} does not split over candidate lines (residual degree {residual_degree})")]
    NotFullyFactorable { node: Point, residual_degree: usize },

    #[error("{family} generation failed after {attempts} attempts")]
    GenerationFailed { family: &'static str, attempts: u32 },

    #[error("{family} instance violates its characterization: {detail}")]
    CharacterizationViolated {
        family: &'static str,
        detail: String,
    },

    #[error("affine transform is singular")]
    SingularTransform,

    #[error("degree {degree} is below the {family} minimum of {min}")]
    DegreeOutOfRange {
        family: &'static str,
        degree: usize,
        min: usize,
    },

    #[error("line {line} passes through only {count} nodes; at least 2 required")]
    TooFewNodes { line: Line, count: usize },

    #[error("lowering by {line} removed every node")]
    EmptyLowering { line: Line },

    #[error("reduction of {line} did not terminate: {detail}")]
    NonTermination { line: Line, detail: String },

    #[error("pipeline and brute-force usage sets disagree for {line}")]
    OracleMismatch { line: Line },

    #[error("unknown check id: {id}")]
    UnknownCheck { id: String },

    #[error("internal invariant violated: {detail}")]
    Internal { detail: String },
}

pub use constructors::{
    carnicer_gasca, chung_yao, defect_three, defect_two, principal_lattice, AffineMap, Instance,
    Provenance,
};
pub use gcset::{AnalysisReport, Context, LineProfile, NodeSet};
pub use geom::{
    incident, intersect, line_through, Intersection, Line as GeomLine, Point as GeomPoint, Rat,
};
pub use poly::{BivarPoly, FundamentalFactorization};
pub use usage::{
    classify_line, hat_2m_nodes, lowering, usage_census, used_line_catalog, used_nodes_bruteforce,
    used_nodes_pipeline, Census, FamilyClass, LineClass, LineClassification, LoweringResult,
    ReductionPolicy, ReductionStep, ReductionTrace, UsageReport, UsedLineCatalog,
};
pub use verify::{run_checks, CheckStatus, ReportBundle, TheoremReport, Witness};
