//! Brute-force ground truth for small graphs: every cut, every line.

use rayon::prelude::*;

use crate::envelope::{lower_envelope, PiecewiseLinearConcave};
use crate::error::{Error, Result};
use crate::next_breakpoint::{BreakpointKind, BreakpointResult, RayProblem};
use crate::numeric::{AffineLine, Rational};
use crate::pgraph::{Cut, RayGraph};
use crate::pmax::MaxResult;

pub const DEFAULT_MAX_N: usize = 16;
/// Environment variable overriding [`DEFAULT_MAX_N`].
pub const MAX_N_VAR: &str = "PARACUT_ORACLE_MAX_N";

/// Largest vertex count the exhaustive routines accept.
pub fn max_n() -> usize {
    std::env::var(MAX_N_VAR)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .map_or(DEFAULT_MAX_N, |n| n.min(63))
}

pub(crate) fn check_size(n: usize) -> Result<()> {
    let cap = max_n();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    Ok(())
}

/// All cuts of a ray graph with their cost lines, in increasing order of the
/// side's bitmask.
#[derive(Clone, Debug)]
pub struct CutCatalog {
    entries: Vec<(Cut, AffineLine)>,
}

impl CutCatalog {
    pub fn build(ray: &RayGraph) -> Result<CutCatalog> {
        let n = ray.n_original();
        check_size(n)?;
        if n < 2 {
            return Err(Error::TooFewVertices);
        }
        let map = ray.vertex_map();
        let edges: Vec<(u64, u64, &AffineLine)> = ray
            .edges()
            .iter()
            .map(|e| (1u64 << e.u, 1u64 << e.v, &e.line))
            .collect();
        let entries = (1u64..1 << (n - 1))
            .into_par_iter()
            .filter_map(|half| {
                let mask = half << 1;
                // Cuts of a contracted graph keep every supervertex whole.
                if (0..n).any(|v| (mask >> v & 1) != (mask >> map[v] & 1)) {
                    return None;
                }
                let mut line = AffineLine::default();
                for &(bu, bv, l) in &edges {
                    if (mask & bu == 0) != (mask & bv == 0) {
                        line += l;
                    }
                }
                Some((Cut::from_mask(n, mask).expect("proper subset"), line))
            })
            .collect();
        Ok(CutCatalog { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Cut, AffineLine)] {
        &self.entries
    }

    pub fn lines(&self) -> Vec<AffineLine> {
        self.entries.iter().map(|(_, l)| l.clone()).collect()
    }

    /// `min_C c_λ(C)`, by direct minimisation.
    pub fn min_at(&self, lambda: &Rational) -> Rational {
        self.entries.iter().map(|(_, l)| l.eval(lambda)).min().expect("nonempty catalog")
    }

    /// Cuts whose cost at `lambda` equals `value`.
    pub fn attaining(&self, lambda: &Rational, value: &Rational) -> Vec<Cut> {
        self.entries
            .iter()
            .filter(|(_, l)| l.eval(lambda) == *value)
            .map(|(c, _)| c.clone())
            .collect()
    }
}

/// `Z` restricted to the ray over `[lo, hi]`.
pub fn oracle_envelope(g: &RayGraph, lo: &Rational, hi: &Rational) -> Result<PiecewiseLinearConcave> {
    let catalog = CutCatalog::build(g)?;
    lower_envelope(&catalog.lines(), lo, hi)
}

/// First breakpoint of `Z` after the origin, inside `[0, domain_hi)` (or
/// `[0, λ̄]` when unbounded).
pub fn oracle_pnb(p: &RayProblem) -> Result<BreakpointResult> {
    let catalog = CutCatalog::build(&p.ray)?;
    let zero = Rational::zero();
    let window = match &p.domain_hi {
        Some(h) => h.clone(),
        None => &p.lambda_bar + &Rational::one(),
    };
    let mut out = BreakpointResult::none(p, Default::default());
    if !window.is_positive() {
        return Ok(out);
    }
    let env = lower_envelope(&catalog.lines(), &zero, &window)?;
    out.slope_before = env.pieces()[0].line.slope.clone();
    if let Some(next) = env.pieces().get(1) {
        let at = next.start.clone();
        out.kind = BreakpointKind::Found;
        out.witness = catalog
            .entries()
            .iter()
            .find(|(_, l)| *l == next.line)
            .map(|(c, _)| c.clone());
        out.mu_nb = Some(p.ray.point(&at));
        out.lambda_nb = Some(at);
        out.slope_after = Some(next.line.slope.clone());
    }
    Ok(out)
}

/// Leftmost maximizer of `Z` on `[lo, hi]` with every cut optimal there.
pub fn oracle_pmax(g: &RayGraph, lo: &Rational, hi: &Rational) -> Result<MaxResult> {
    crate::pmax::check_domain(g, lo, hi)?;
    let catalog = CutCatalog::build(g)?;
    let env = lower_envelope(&catalog.lines(), lo, hi)?;
    let (lambda_star, z_star) = env.argmax();
    let mut witnesses = catalog.attaining(&lambda_star, &z_star);
    witnesses.sort();
    Ok(MaxResult {
        mu_star: g.point(&lambda_star),
        witnesses,
        lambda_star,
        z_star,
        oracle_calls: 0,
        work: Default::default(),
    })
}
