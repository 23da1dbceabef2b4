//! Timing and work counts of the solvers on generated instances.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::Result;
use crate::generate::{random_ray, GeneratorConfig};
use crate::mincut_sw::Work;
use crate::next_breakpoint::{pnb_deterministic, pnb_randomized, RayProblem};
use crate::numeric::Rational;
use crate::pmax::{megiddo_maximize, megiddo_next_breakpoint, pmax_newton, pmax_scaling_1d, pnb_via_pmax};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchAlgorithm {
    NbDeterministic,
    NbRandomized,
    NbNewton,
    NbMegiddo,
    MaxNewton,
    MaxScaling,
    MaxMegiddo,
}

impl BenchAlgorithm {
    pub const ALL: [BenchAlgorithm; 7] = [
        BenchAlgorithm::NbDeterministic,
        BenchAlgorithm::NbRandomized,
        BenchAlgorithm::NbNewton,
        BenchAlgorithm::NbMegiddo,
        BenchAlgorithm::MaxNewton,
        BenchAlgorithm::MaxScaling,
        BenchAlgorithm::MaxMegiddo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchAlgorithm::NbDeterministic => "nb-det",
            BenchAlgorithm::NbRandomized => "nb-rand",
            BenchAlgorithm::NbNewton => "nb-newton",
            BenchAlgorithm::NbMegiddo => "nb-megiddo",
            BenchAlgorithm::MaxNewton => "max-newton",
            BenchAlgorithm::MaxScaling => "max-scaling",
            BenchAlgorithm::MaxMegiddo => "max-megiddo",
        }
    }

    pub fn from_name(s: &str) -> Option<BenchAlgorithm> {
        BenchAlgorithm::ALL.into_iter().find(|a| a.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    /// Edges per vertex; the generator caps at the complete graph.
    pub edges_per_vertex: usize,
    pub instances: usize,
    pub seed: u64,
    pub eta: Rational,
    pub algorithms: Vec<BenchAlgorithm>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![50, 100, 200],
            edges_per_vertex: 10,
            instances: 1,
            seed: 0,
            eta: Rational::new(1, 100),
            algorithms: vec![BenchAlgorithm::NbDeterministic, BenchAlgorithm::NbMegiddo],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub instance: usize,
    pub n: usize,
    pub m: usize,
    pub algorithm: BenchAlgorithm,
    pub wall_ms: f64,
    pub work: Work,
    pub sw_equivalents: f64,
    /// `λ^NB` (empty when there is none) or `λ*`.
    pub lambda: Option<Rational>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("instance,n,m,algorithm,wall_ms,ma_orderings,sw_runs,oracle_calls,sw_equivalents,lambda\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{:.3},{},{},{},{:.2},{}",
                r.instance,
                r.n,
                r.m,
                r.algorithm.name(),
                r.wall_ms,
                r.work.ma_orderings,
                r.work.sw_runs,
                r.work.oracle_calls,
                r.sw_equivalents,
                r.lambda.as_ref().map(|l| l.to_string()).unwrap_or_default()
            )
            .unwrap();
        }
        out
    }

    /// Mean Stoer–Wagner-equivalent work of `alg` on graphs with `n` vertices.
    pub fn mean_sw_equivalents(&self, alg: BenchAlgorithm, n: usize) -> Option<f64> {
        let xs: Vec<f64> = self.rows.iter().filter(|r| r.algorithm == alg && r.n == n).map(|r| r.sw_equivalents).collect();
        (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

fn run_one(alg: BenchAlgorithm, p: &RayProblem, hi: &Rational, seed: u64, eta: &Rational) -> Result<(Work, Option<Rational>)> {
    let zero = Rational::zero();
    Ok(match alg {
        BenchAlgorithm::NbDeterministic => pnb_deterministic(p).map(|r| (r.work, r.lambda_nb))?,
        BenchAlgorithm::NbRandomized => pnb_randomized(p, seed, eta).map(|r| (r.work, r.lambda_nb))?,
        BenchAlgorithm::NbNewton => pnb_via_pmax(p).map(|r| (r.work, r.lambda_nb))?,
        BenchAlgorithm::NbMegiddo => megiddo_next_breakpoint(p).map(|r| (r.work, r.lambda_nb))?,
        BenchAlgorithm::MaxNewton => pmax_newton(&p.ray, &zero, hi).map(|r| (r.work, Some(r.lambda_star)))?,
        BenchAlgorithm::MaxScaling => pmax_scaling_1d(&p.ray, &zero, hi).map(|r| (r.work, Some(r.lambda_star)))?,
        BenchAlgorithm::MaxMegiddo => megiddo_maximize(&p.ray, &zero, hi).map(|r| (r.work, Some(r.lambda_star)))?,
    })
}

/// Runs every configured algorithm on every generated instance, one at a
/// time so that wall times are not contended.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    let mut instance = 0;
    for &n in &cfg.sizes {
        for k in 0..cfg.instances {
            let gen = GeneratorConfig::new(n, n * cfg.edges_per_vertex, cfg.seed.wrapping_add(k as u64).wrapping_add((n as u64) << 32));
            let ray = random_ray(&gen)?;
            let m = ray.edges().len();
            let hi = Rational::from_integer(gen.lambda_target);
            let p = RayProblem::new(ray, Some(hi.clone()))?;
            for &alg in &cfg.algorithms {
                let t = Instant::now();
                let (work, lambda) = run_one(alg, &p, &hi, cfg.seed, &cfg.eta)?;
                report.rows.push(BenchRow {
                    instance,
                    n,
                    m,
                    algorithm: alg,
                    wall_ms: t.elapsed().as_secs_f64() * 1e3,
                    sw_equivalents: work.sw_equivalents(n),
                    work,
                    lambda,
                });
            }
            instance += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoke_run_has_header_and_rows() {
        let cfg = BenchConfig {
            sizes: vec![8],
            edges_per_vertex: 3,
            algorithms: BenchAlgorithm::ALL.to_vec(),
            ..BenchConfig::default()
        };
        let report = run_bench(&cfg).unwrap();
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("instance,n,m,algorithm"));
        assert_eq!(lines.len(), 1 + BenchAlgorithm::ALL.len());
        let nb: Vec<_> = report.rows.iter().filter(|r| r.algorithm.name().starts_with("nb-")).map(|r| r.lambda.clone()).collect();
        assert!(nb.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn names_roundtrip() {
        for a in BenchAlgorithm::ALL {
            assert_eq!(BenchAlgorithm::from_name(a.name()), Some(a));
        }
    }
}
