#![allow(dead_code)]

use paracut::{random_graph, AffineLine, GeneratorConfig, ParamGraph, Rational, RayGraph, RayProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub struct Instance {
    pub cfg: GeneratorConfig,
    pub graph: ParamGraph,
    pub ray: RayGraph,
}

impl Instance {
    pub fn problem(&self) -> RayProblem {
        RayProblem::new(self.ray.clone(), None).unwrap()
    }

    /// Domain on which the generator guarantees nonnegative costs.
    pub fn max_domain(&self) -> (Rational, Rational) {
        (q(0), q(self.cfg.lambda_target))
    }
}

/// Random `d = 1` instances with `n` drawn from `n_lo..=n_hi`. Some are
/// disconnected and some have no slack in their intercepts, so ties and flat
/// pieces show up.
pub fn corpus(count: usize, n_lo: usize, n_hi: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(n_lo..=n_hi);
            let total = n * (n - 1) / 2;
            let connected = rng.gen_bool(0.85);
            let m = rng.gen_range(if connected { n - 1 } else { 1 }..=total);
            let cfg = GeneratorConfig {
                n,
                m,
                slope_range: 5,
                extra_range: rng.gen_range(0..=8),
                lambda_target: rng.gen_range(1..=4),
                connected,
                seed: rng.gen(),
            };
            let graph = random_graph(&cfg).unwrap();
            let ray = graph.restrict_to_ray(&[q(0)], &[1]).unwrap();
            Instance { cfg, graph, ray }
        })
        .collect()
}

/// Every proper vertex subset containing vertex 0's complement side, as a
/// bitmask over `n` vertices with bit 0 clear.
pub fn masks(n: usize) -> impl Iterator<Item = u64> {
    (1u64..1 << (n - 1)).map(|h| h << 1)
}

/// Cost line of the cut `mask`, summed edge by edge.
pub fn mask_line(ray: &RayGraph, mask: u64) -> AffineLine {
    let mut line = AffineLine::default();
    for e in ray.edges() {
        if (mask >> e.u & 1) != (mask >> e.v & 1) {
            line += &e.line;
        }
    }
    line
}

/// `Z(λ)` by enumeration.
pub fn brute_z(ray: &RayGraph, lambda: &Rational) -> Rational {
    masks(ray.n_original())
        .map(|m| mask_line(ray, m).eval(lambda))
        .min()
        .unwrap()
}

/// Random rational in `[lo, hi]` with a denominator below `den`.
pub fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    let d = rng.gen_range(1..den);
    Rational::new(rng.gen_range(lo * d..=hi * d), d)
}
