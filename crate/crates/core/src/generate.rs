//! Seeded random instances with one parameter.
//!
//! Slopes are drawn from `[-slope_range, slope_range]` and each intercept is
//! lifted to at least `-slope * lambda_target`, so every edge cost stays
//! nonnegative on `[0, lambda_target]` of the ray `μ = λ`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::pgraph::{ParamGraph, RayGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub n: usize,
    /// Number of distinct vertex pairs carrying an edge, capped at `n(n-1)/2`.
    pub m: usize,
    pub slope_range: i64,
    /// Upper end of the random extra added on top of the minimal intercept.
    pub extra_range: i64,
    pub lambda_target: i64,
    /// Start from a random spanning tree so the graph is connected.
    pub connected: bool,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(n: usize, m: usize, seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            n,
            m,
            slope_range: 5,
            extra_range: 10,
            lambda_target: 3,
            connected: true,
            seed,
        }
    }
}

fn pair_of(index: usize, n: usize) -> (usize, usize) {
    // Row u holds the pairs (u, u+1..n).
    let mut rest = index;
    for u in 0..n {
        let row = n - 1 - u;
        if rest < row {
            return (u, u + 1 + rest);
        }
        rest -= row;
    }
    unreachable!("pair index out of range")
}

fn pair_index(u: usize, v: usize, n: usize) -> usize {
    let (u, v) = (u.min(v), u.max(v));
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// A `d = 1` instance drawn according to `cfg`.
pub fn random_graph(cfg: &GeneratorConfig) -> Result<ParamGraph> {
    if cfg.n < 2 {
        return Err(Error::TooFewVertices);
    }
    if cfg.slope_range < 0 || cfg.extra_range < 0 || cfg.lambda_target < 0 {
        return Err(Error::InvalidArgument("generator ranges must be nonnegative".into()));
    }
    let n = cfg.n;
    let total = n * (n - 1) / 2;
    let m = cfg.m.min(total);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut chosen = vec![false; total];
    let mut count = 0;
    if cfg.connected {
        for v in 1..n {
            let u = rng.gen_range(0..v);
            chosen[pair_index(u, v, n)] = true;
            count += 1;
        }
    }
    if count < m {
        let free: Vec<usize> = (0..total).filter(|&i| !chosen[i]).collect();
        for k in sample(&mut rng, free.len(), m - count) {
            chosen[free[k]] = true;
        }
    }
    let mut g = ParamGraph::new(n, 1);
    for (i, _) in chosen.iter().enumerate().filter(|(_, &c)| c) {
        let (u, v) = pair_of(i, n);
        let slope = rng.gen_range(-cfg.slope_range..=cfg.slope_range);
        let base = (-slope * cfg.lambda_target).max(0);
        let intercept = base + rng.gen_range(0..=cfg.extra_range);
        g.add_edge(u, v, vec![intercept, slope])?;
    }
    Ok(g)
}

/// The instance restricted to the ray `μ = λ`.
pub fn random_ray(cfg: &GeneratorConfig) -> Result<RayGraph> {
    random_graph(cfg)?.restrict_to_ray(&[Rational::zero()], &[1])
}
