//! Exact parametric global minimum cuts.
//!
//! Edge costs are affine in a parameter vector `μ`, and `Z(μ)` is the value
//! of a minimum cut. Along a ray `μ = μ0 + λν` the function `Z` is concave and
//! piecewise linear in `λ`. This crate computes its next breakpoint and its
//! maximizer exactly, with rational arithmetic throughout.

pub mod bench;
pub mod envelope;
pub mod error;
pub mod generate;
pub mod io;
pub mod mincut_sw;
pub mod minor;
pub mod next_breakpoint;
pub mod numeric;
pub mod oracle;
pub mod pgraph;
pub mod pmax;

pub use bench::{run_bench, BenchAlgorithm, BenchConfig, BenchReport, BenchRow};
pub use envelope::{lower_envelope, Piece, PiecewiseLinearConcave};
pub use error::{Error, Result};
pub use generate::{random_graph, random_ray, GeneratorConfig};
pub use io::{parse_graph, serialize_graph};
pub use mincut_sw::{ma_ordering, one_sided_slope, ray_mincut, sw_mincut, MaOrdering, OneSided, Work};
pub use minor::DenseMinor;
pub use numeric::{lex_compare, line_intersection, AffineLine, Direction, Lex, Rational};
pub use pgraph::{Cut, ParamGraph, RayEdge, RayGraph};
pub use next_breakpoint::{
    lambda_bar, pnb_deterministic, pnb_deterministic_traced, pnb_random_trial, pnb_randomized, ray_envelope, ray_envelope_to, BreakpointKind,
    BreakpointResult, RayProblem,
};
pub use oracle::{oracle_envelope, oracle_pmax, oracle_pnb, CutCatalog};
pub use pmax::{
    approx_cuts, megiddo_maximize, megiddo_next_breakpoint, pmax_newton, pmax_scaling_1d, pmax_scaling_1d_traced, pnb_via_pmax,
    ApproxMode, MaxResult, ScalingLadder, ScalingTrace,
};
