mod common;

use common::{brute_z, mask_line, masks, q};
use paracut::{
    approx_cuts, megiddo_maximize, megiddo_next_breakpoint, oracle_envelope, oracle_pmax, oracle_pnb, one_sided_slope, pmax_newton,
    pmax_scaling_1d_traced, pnb_deterministic, pnb_deterministic_traced, pnb_random_trial, pnb_randomized, pnb_via_pmax, random_graph, ray_envelope_to,
    ApproxMode, CutCatalog, Direction, GeneratorConfig, ParamGraph, Rational, RayGraph, RayProblem,
};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (GeneratorConfig, ParamGraph, RayGraph)> {
    (3usize..=7, 0usize..=21, 0i64..=6, 1i64..=4, any::<u64>(), any::<bool>()).prop_map(|(n, m, extra, lt, seed, connected)| {
        let cfg = GeneratorConfig {
            n,
            m: m.max(1),
            slope_range: 5,
            extra_range: extra,
            lambda_target: lt,
            connected,
            seed,
        };
        let g = random_graph(&cfg).unwrap();
        let ray = g.restrict_to_ray(&[q(0)], &[1]).unwrap();
        (cfg, g, ray)
    })
}

/// Rational `num/den` of the way through `[lo, hi]`.
fn between(lo: &Rational, hi: &Rational, num: i64, den: i64) -> Rational {
    lo + &(&Rational::new(num, den) * &(hi - lo))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minor_cuts_dominate((cfg, g, ray) in instance(), pairs in prop::collection::vec((0usize..7, 0usize..7), 0..4), k in 0i64..=16) {
        let mut minor = g.clone();
        for (u, v) in pairs {
            let (u, v) = (minor.supervertex_of(u % cfg.n), minor.supervertex_of(v % cfg.n));
            if u != v && minor.live_vertices().len() > 2 {
                minor = minor.contract(u, v).unwrap();
            }
        }
        let at = Rational::new(k * cfg.lambda_target, 16);
        let minor_ray = minor.restrict_to_ray(&[q(0)], &[1]).unwrap();
        let catalog = CutCatalog::build(&minor_ray).unwrap();
        prop_assert!(catalog.min_at(&at) >= brute_z(&ray, &at));
        for (cut, line) in catalog.entries() {
            prop_assert_eq!(line.eval(&at), ray.cut_cost(cut, &at).unwrap());
        }
    }

    #[test]
    fn right_slope_matches_envelope((cfg, _g, ray) in instance(), k in 0i64..16) {
        let hi = q(cfg.lambda_target);
        let at = between(&q(0), &hi, k, 16);
        let env = oracle_envelope(&ray, &q(0), &hi).unwrap();
        let r = one_sided_slope(&ray, &at, Direction::Right).unwrap();
        prop_assert_eq!(&r.z, &env.eval(&at));
        prop_assert_eq!(&r.slope, env.right_slope(&at));
        prop_assert_eq!(ray.cut_line(&r.witness).unwrap().slope, r.slope);
        let l = one_sided_slope(&ray, &hi, Direction::Left).unwrap();
        prop_assert_eq!(&l.slope, env.left_slope(&hi));
    }

    #[test]
    fn deterministic_iterations_stay_right_of_breakpoint((_cfg, _g, ray) in instance()) {
        let p = RayProblem::new(ray, None).unwrap();
        let orc = oracle_pnb(&p).unwrap();
        let (res, trace) = pnb_deterministic_traced(&p).unwrap();
        prop_assert_eq!(&res.lambda_nb, &orc.lambda_nb);
        if let Some(nb) = &orc.lambda_nb {
            for it in &trace {
                prop_assert!(&it.lambda_r >= nb);
                prop_assert!(it.l <= it.zr);
            }
        }
    }

    #[test]
    fn trial_candidates_never_below_breakpoint((_cfg, _g, ray) in instance(), seed in any::<u64>()) {
        let p = RayProblem::new(ray, None).unwrap();
        let orc = oracle_pnb(&p).unwrap();
        if let (Some(c), Some(nb)) = (pnb_random_trial(&p, seed).unwrap(), orc.lambda_nb) {
            prop_assert!(c >= nb);
        }
    }

    #[test]
    fn next_breakpoint_paths_agree((_cfg, _g, ray) in instance(), seed in any::<u64>()) {
        let p = RayProblem::new(ray, None).unwrap();
        let det = pnb_deterministic(&p).unwrap();
        let via = pnb_via_pmax(&p).unwrap();
        let meg = megiddo_next_breakpoint(&p).unwrap();
        prop_assert_eq!(&via.lambda_nb, &det.lambda_nb);
        prop_assert_eq!(&meg.lambda_nb, &det.lambda_nb);
        prop_assert_eq!(&meg.slope_after, &det.slope_after);
        let rand = pnb_randomized(&p, seed, &Rational::new(1, 1000)).unwrap();
        if rand.is_found() {
            // A found answer is certified, so it cannot be wrong.
            prop_assert_eq!(&rand.lambda_nb, &det.lambda_nb);
        }
        if let Some(s) = &det.slope_after {
            prop_assert!(*s <= &p.slope0 - &q(1));
        }
    }

    #[test]
    fn maximize_paths_agree((cfg, _g, ray) in instance()) {
        let (lo, hi) = (q(0), q(cfg.lambda_target));
        let orc = oracle_pmax(&ray, &lo, &hi).unwrap();
        let newton = pmax_newton(&ray, &lo, &hi).unwrap();
        let (scaling, trace) = pmax_scaling_1d_traced(&ray, &lo, &hi, 0).unwrap();
        let megiddo = megiddo_maximize(&ray, &lo, &hi).unwrap();
        for r in [&newton, &scaling, &megiddo] {
            prop_assert_eq!(&r.z_star, &orc.z_star);
            prop_assert_eq!(&r.lambda_star, &orc.lambda_star);
            for w in &r.witnesses {
                prop_assert_eq!(ray.cut_cost(w, &r.lambda_star).unwrap(), orc.z_star.clone());
            }
        }
        // Every optimal cut at λ* is near-optimal where the scaling solver enumerates.
        if trace.r2.is_some() {
            prop_assert_eq!(&scaling.witnesses, &orc.witnesses);
        }
        let env = oracle_envelope(&ray, &lo, &hi).unwrap();
        let slopes: std::collections::BTreeSet<_> = env.pieces().iter().map(|p| p.line.slope.clone()).collect();
        prop_assert!(newton.oracle_calls as usize <= slopes.len() + 2);

        // Scaling sandwich on the first located cell.
        if let (Some((a, b)), Some(ladder)) = (&trace.r1, &trace.ladder) {
            for k in 1..8 {
                let mu = between(a, b, k, 8);
                let base = ladder.base_line.eval(&mu);
                if base.is_positive() {
                    let z = brute_z(&ray, &mu);
                    prop_assert!(base <= z);
                    prop_assert!(z < ladder.g(ladder.p).eval(&mu));
                }
            }
            // Some edge of the witness stays above the lowest rung on the second cell.
            if let Some((c, d)) = &trace.r2 {
                let w = &scaling.witnesses[0];
                for k in 1..8 {
                    let mu = between(c, d, k, 8);
                    let g1 = ladder.g(1).eval(&mu);
                    let heavy = ray.edges().iter().any(|e| w.separates(e.u, e.v) && e.line.eval(&mu) >= g1);
                    prop_assert!(heavy);
                }
            }
        }
    }

    #[test]
    fn traced_envelope_matches_oracle_past_lambda_bar((cfg, _g, ray) in instance()) {
        let end = q(cfg.lambda_target);
        let p = RayProblem::new(ray.clone(), Some(end.clone())).unwrap();
        let ours = ray_envelope_to(&p, &end).unwrap();
        let orc = oracle_envelope(&ray, &q(0), &end).unwrap();
        prop_assert_eq!(ours.pieces(), orc.pieces());
    }

    #[test]
    fn oracle_envelope_is_pointwise_min((cfg, _g, ray) in instance(), ks in prop::collection::vec(0i64..=100, 10)) {
        let hi = q(cfg.lambda_target);
        let env = oracle_envelope(&ray, &q(0), &hi).unwrap();
        for k in ks {
            let x = between(&q(0), &hi, k, 100);
            prop_assert_eq!(env.eval(&x), brute_z(&ray, &x));
        }
        let slopes: std::collections::BTreeSet<_> = masks(cfg.n).map(|m| mask_line(&ray, m).slope).collect();
        prop_assert!(env.pieces().len() <= slopes.len());
    }
}

#[test]
fn approx_modes_agree_on_small_graphs() {
    let alpha = Rational::new(13, 10);
    for seed in 0..60 {
        let n = 3 + (seed as usize % 6);
        let g = random_graph(&GeneratorConfig::new(n, 2 * n, seed)).unwrap();
        let mu = [Rational::new(seed as i64 % 7, 3)];
        let brute = approx_cuts(&g, &mu, &alpha, seed, ApproxMode::Bruteforce).unwrap();
        let sampled = approx_cuts(&g, &mu, &alpha, seed, ApproxMode::Randomized).unwrap();
        assert_eq!(brute, sampled, "seed {seed}");
        let z = &brute[0].1;
        for (_, c) in &brute {
            assert!(*c <= &alpha * z);
        }
    }
}
