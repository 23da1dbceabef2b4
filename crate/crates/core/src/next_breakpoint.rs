//! Next breakpoint of `Z` along a ray, by contraction.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::envelope::{lower_envelope, PiecewiseLinearConcave};
use crate::error::{Error, Result};
use crate::mincut_sw::{ma_order_slots, mincut_of_minor, one_sided_in, Work};
use crate::minor::DenseMinor;
use crate::numeric::{lex_compare, line_intersection, AffineLine, Direction, Rational};
use crate::pgraph::{Cut, RayGraph};

/// A ray together with the start data the contraction algorithms need.
#[derive(Clone, Debug)]
pub struct RayProblem {
    pub ray: RayGraph,
    pub lambda_bar: Rational,
    /// `Z` at the ray origin.
    pub z0: Rational,
    /// Right derivative of `Z` at the origin.
    pub slope0: Rational,
    /// Exclusive upper end of the admissible parameter range, if bounded.
    pub domain_hi: Option<Rational>,
    /// Start data came from [`RayProblem::new`], so the solvers skip
    /// recomputing `Z(0)`.
    start_known: bool,
}

impl RayProblem {
    /// Computes `Z(0)` and its right slope with one lexicographic min-cut run.
    /// `cap` optionally bounds the parameter range further.
    pub fn new(ray: RayGraph, cap: Option<Rational>) -> Result<RayProblem> {
        let domain_hi = Self::validated_domain(&ray, cap)?;
        let start = crate::mincut_sw::one_sided_slope(&ray, &Rational::zero(), Direction::Right)?;
        Ok(RayProblem {
            lambda_bar: ray.lambda_bar(),
            ray,
            z0: start.z,
            slope0: start.slope,
            domain_hi,
            start_known: true,
        })
    }

    /// Takes caller-supplied start data; the solvers check `z0` against `Z(0)`.
    pub fn with_start(ray: RayGraph, z0: Rational, slope0: Rational, cap: Option<Rational>) -> Result<RayProblem> {
        let domain_hi = Self::validated_domain(&ray, cap)?;
        Ok(RayProblem {
            lambda_bar: ray.lambda_bar(),
            ray,
            z0,
            slope0,
            domain_hi,
            start_known: false,
        })
    }

    /// Errors unless `z0 = Z(0)`. Free when the start data was computed here.
    pub(crate) fn check_start(&self, lines: &DenseMinor<AffineLine>, work: &mut Work) -> Result<()> {
        if self.start_known {
            return Ok(());
        }
        let (_, z) = mincut_of_minor(lines.at(&Rational::zero()), work)?;
        if z != self.z0 {
            return Err(Error::InconsistentStart {
                given: self.z0.to_string(),
                actual: z.to_string(),
            });
        }
        Ok(())
    }

    fn validated_domain(ray: &RayGraph, cap: Option<Rational>) -> Result<Option<Rational>> {
        if ray.live_vertices().len() < 2 {
            return Err(Error::TooFewVertices);
        }
        if let Some(c) = &cap {
            if c.is_negative() {
                return Err(Error::InvalidArgument(format!("negative parameter cap {c}")));
            }
        }
        let limit = ray.nonnegative_limit()?;
        Ok(match (limit, cap) {
            (Some(a), Some(b)) => Some(Rational::min_of(a, b)),
            (a, b) => a.or(b),
        })
    }

    /// The line `L(λ) = Z(0) + λ·Z'(0)`.
    pub fn start_line(&self) -> AffineLine {
        AffineLine::new(self.z0.clone(), self.slope0.clone())
    }

    /// Right end of the search interval: `min(λ̄, domain_hi)`.
    pub fn search_hi(&self) -> Rational {
        match &self.domain_hi {
            Some(h) => Rational::min_of(self.lambda_bar.clone(), h.clone()),
            None => self.lambda_bar.clone(),
        }
    }

    /// Whether a breakpoint at `lambda` lies inside the admissible range.
    pub fn admits(&self, lambda: &Rational) -> bool {
        self.domain_hi.as_ref().is_none_or(|h| lambda < h)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BreakpointKind {
    Found,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BreakpointResult {
    pub kind: BreakpointKind,
    pub lambda_nb: Option<Rational>,
    pub mu_nb: Option<Vec<Rational>>,
    /// Optimal cut at the breakpoint whose line gives the slope after it.
    pub witness: Option<Cut>,
    pub slope_before: Rational,
    pub slope_after: Option<Rational>,
    #[serde(skip)]
    pub work: Work,
    /// Contraction leaves explored (randomized solver only).
    #[serde(skip)]
    pub trials: u64,
    /// Smallest raw candidate before certification (randomized solver only).
    #[serde(skip)]
    pub candidate: Option<Rational>,
}

impl BreakpointResult {
    pub fn is_found(&self) -> bool {
        self.kind == BreakpointKind::Found
    }

    pub(crate) fn none(p: &RayProblem, work: Work) -> Self {
        BreakpointResult {
            kind: BreakpointKind::None,
            lambda_nb: None,
            mu_nb: None,
            witness: None,
            slope_before: p.slope0.clone(),
            slope_after: None,
            work,
            trials: 0,
            candidate: None,
        }
    }
}

pub fn lambda_bar(g: &RayGraph) -> Rational {
    g.lambda_bar()
}

/// Accepts `candidate` as the next breakpoint iff `Z` lies lexicographically
/// below `L` just right of it, i.e. `Z(c) < L(c)`, or they agree and `Z`
/// bends downward there.
pub(crate) fn certify(
    p: &RayProblem,
    lines: &DenseMinor<AffineLine>,
    candidate: Option<Rational>,
    mut work: Work,
) -> Result<BreakpointResult> {
    let c = match candidate {
        Some(c) if c.is_positive() && c <= p.search_hi() && p.admits(&c) => c,
        _ => return Ok(BreakpointResult::none(p, work)),
    };
    let right = one_sided_in(lines, &c, Direction::Right, &mut work)?;
    let l_at = p.start_line().eval(&c);
    if lex_compare((&right.z, &right.slope), (&l_at, &p.slope0)).is_lt() {
        Ok(BreakpointResult {
            kind: BreakpointKind::Found,
            mu_nb: Some(p.ray.point(&c)),
            lambda_nb: Some(c),
            witness: Some(right.witness),
            slope_before: p.slope0.clone(),
            slope_after: Some(right.slope),
            work,
            trials: 0,
            candidate: None,
        })
    } else {
        Ok(BreakpointResult::none(p, work))
    }
}

/// One iteration of the deterministic contraction loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iteration {
    pub lambda_r: Rational,
    /// Smallest singleton-cut cost of the current minor at `lambda_r`.
    pub zr: Rational,
    pub l: Rational,
    pub pendant_pair: (usize, usize),
}

/// Deterministic pendant-pair contraction.
pub fn pnb_deterministic(p: &RayProblem) -> Result<BreakpointResult> {
    pnb_deterministic_traced(p).map(|(r, _)| r)
}

pub fn pnb_deterministic_traced(p: &RayProblem) -> Result<(BreakpointResult, Vec<Iteration>)> {
    let mut work = Work::default();
    let lines = DenseMinor::from_ray(&p.ray).compacted();
    p.check_start(&lines, &mut work)?;
    let hi = p.search_hi();
    if hi.is_zero() {
        return Ok((BreakpointResult::none(p, work), Vec::new()));
    }
    let l = p.start_line();
    let zero = Rational::zero();
    let mut best = hi.clone();
    let mut trace = Vec::with_capacity(lines.live_count());
    let mut minor = lines.clone();
    while minor.live_count() > 1 {
        let degrees: Vec<AffineLine> = minor.live_slots().map(|s| minor.degree(s)).collect();
        let zr = lower_envelope(&degrees, &zero, &hi)?;
        let lambda_r = match zr.first_crossing(&l, &zero) {
            Some(x) => Rational::min_of(x, hi.clone()),
            None => hi.clone(),
        };
        if lambda_r < best {
            best = lambda_r.clone();
        }
        let at = minor.at(&lambda_r);
        let (order, _) = ma_order_slots(&at, &mut |a: &Rational, b: &Rational| a.cmp(b));
        work.ma_orderings += 1;
        let k = order.len();
        let (s, t) = (order[k - 2], order[k - 1]);
        trace.push(Iteration {
            zr: zr.eval(&lambda_r),
            l: l.eval(&lambda_r),
            pendant_pair: (minor.label(s), minor.label(t)),
            lambda_r,
        });
        minor.merge(s, t);
    }
    Ok((certify(p, &lines, Some(best), work)?, trace))
}

/// Draws an index with probability proportional to its (nonnegative)
/// weight, exactly. `None` when all weights vanish.
pub(crate) fn weighted_pick<R: RngCore>(rng: &mut R, weights: &[Rational]) -> Option<usize> {
    if let Some(ints) = scaled_small(weights) {
        let total: u128 = ints.iter().sum();
        if total == 0 {
            return None;
        }
        let mut x = rng.gen_range(0..total);
        for (i, &w) in ints.iter().enumerate() {
            if x < w {
                return Some(i);
            }
            x -= w;
        }
        unreachable!("sample below total");
    }
    let l = weights.iter().fold(BigInt::from(1), |acc, w| acc.lcm(&w.denom()));
    let ints: Vec<BigUint> = weights
        .iter()
        .map(|w| (w.numer() * (&l / w.denom())).to_biguint().expect("nonnegative weight"))
        .collect();
    let total: BigUint = ints.iter().sum();
    if total.is_zero() {
        return None;
    }
    let mut x = uniform_below(rng, &total);
    for (i, w) in ints.iter().enumerate() {
        if &x < w {
            return Some(i);
        }
        x -= w;
    }
    unreachable!("sample below total");
}

fn scaled_small(weights: &[Rational]) -> Option<Vec<u128>> {
    let mut l: i128 = 1;
    for w in weights {
        let (_, d) = w.as_small()?;
        let d = d as i128;
        l = (l / l.gcd(&d)).checked_mul(d)?;
        if l > 1 << 62 {
            return None;
        }
    }
    let mut total: u128 = 0;
    let mut out = Vec::with_capacity(weights.len());
    for w in weights {
        let (n, d) = w.as_small()?;
        assert!(n >= 0, "negative sampling weight");
        let x = (n as i128).checked_mul(l / d as i128)? as u128;
        total = total.checked_add(x)?;
        out.push(x);
    }
    Some(out)
}

fn uniform_below<R: RngCore>(rng: &mut R, bound: &BigUint) -> BigUint {
    let bits = bound.bits() as usize;
    let bytes = bits.div_ceil(8);
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        let excess = bytes * 8 - bits;
        buf[bytes - 1] &= 0xffu8 >> excess;
        let x = BigUint::from_bytes_le(&buf);
        if &x < bound {
            return x;
        }
    }
}

/// A minor under random contraction, with the degree of every slot kept as
/// an affine function so that each step costs `O(n)`.
#[derive(Clone, Debug)]
struct Contraction {
    minor: DenseMinor<AffineLine>,
    deg: Vec<AffineLine>,
}

impl Contraction {
    fn new(minor: DenseMinor<AffineLine>) -> Self {
        let deg = (0..minor.slot_count())
            .map(|s| if minor.is_alive(s) { minor.degree(s) } else { AffineLine::default() })
            .collect();
        Contraction { minor, deg }
    }

    fn live(&self) -> usize {
        self.minor.live_count()
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (keep, gone) = (a.min(b), a.max(b));
        let between = self.minor.weight(keep, gone).cloned().unwrap_or_default();
        let merged = &(&self.deg[keep] + &self.deg[gone]) - &between.scale(&Rational::from_integer(2));
        self.deg[keep] = merged;
        self.deg[gone] = AffineLine::default();
        self.minor.merge(keep, gone);
    }

    /// Average singleton-cut cost as a function of λ.
    fn upper_bound(&self) -> AffineLine {
        let mut total = AffineLine::default();
        for s in self.minor.live_slots() {
            total += &self.deg[s];
        }
        total.scale(&Rational::new(1, self.live() as i64))
    }

    /// Where the next contraction samples its edge.
    fn sample_point(&self, l: &AffineLine, hi: &Rational) -> Rational {
        line_intersection(l, &self.upper_bound())
            .filter(|x| !x.is_negative() && x <= hi)
            .unwrap_or_else(|| hi.clone())
    }

    fn step<R: RngCore>(&mut self, l: &AffineLine, hi: &Rational, rng: &mut R) {
        let at = self.sample_point(l, hi);
        let slots: Vec<usize> = self.minor.live_slots().collect();
        let degrees: Vec<Rational> = slots.iter().map(|&s| self.deg[s].eval(&at)).collect();
        if let Some(i) = weighted_pick(rng, &degrees) {
            let u = slots[i];
            let (nbrs, w): (Vec<usize>, Vec<Rational>) = self.minor.neighbours(u).map(|(j, line)| (j, line.eval(&at))).unzip();
            let j = weighted_pick(rng, &w).expect("positive degree");
            self.merge(u, nbrs[j]);
            return;
        }
        // Every cut costs zero here, so any contraction keeps an optimal cut.
        let present: Vec<(usize, usize)> = self.minor.edges().map(|(i, j, _)| (i, j)).collect();
        let (a, b) = if present.is_empty() {
            let i = rng.gen_range(0..slots.len());
            let mut j = rng.gen_range(0..slots.len() - 1);
            if j >= i {
                j += 1;
            }
            (slots[i], slots[j])
        } else {
            present[rng.gen_range(0..present.len())]
        };
        self.merge(a, b);
    }

    fn contract_to<R: RngCore>(&mut self, target: usize, l: &AffineLine, hi: &Rational, rng: &mut R) {
        while self.live() > target.max(2) {
            self.step(l, hi, rng);
        }
    }
}

fn positive_crossing(l: &AffineLine, cut_line: &AffineLine) -> Option<Rational> {
    line_intersection(l, cut_line).filter(|x| x.is_positive())
}

fn keep_min(best: &mut Option<Rational>, x: Option<Rational>) {
    if let Some(x) = x {
        if best.as_ref().is_none_or(|b| x < *b) {
            *best = Some(x);
        }
    }
}

/// Smallest positive crossing of `L` with any cut of a small minor.
fn minor_candidates(minor: &DenseMinor<AffineLine>, l: &AffineLine) -> Option<Rational> {
    let slots: Vec<usize> = minor.live_slots().collect();
    let k = slots.len();
    let mut best = None;
    for mask in 1u64..(1 << (k - 1)) {
        let on = |i: usize| i > 0 && mask >> (i - 1) & 1 == 1;
        let mut line = AffineLine::default();
        for a in 0..k {
            for b in a + 1..k {
                if on(a) != on(b) {
                    if let Some(w) = minor.weight(slots[a], slots[b]) {
                        line += w;
                    }
                }
            }
        }
        keep_min(&mut best, positive_crossing(l, &line));
    }
    best
}

/// One randomized contraction run down to two supervertices; returns the
/// positive crossing of `L` with the surviving cut, if any.
pub fn pnb_random_trial(p: &RayProblem, seed: u64) -> Result<Option<Rational>> {
    let lines = DenseMinor::from_ray(&p.ray).compacted();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Contraction::new(lines);
    let l = p.start_line();
    c.contract_to(2, &l, &p.search_hi(), &mut rng);
    Ok(minor_candidates(&c.minor, &l))
}

const KS_BASE: usize = 6;

/// Smallest `t` with `t ≥ 1 + k/√2`.
fn ks_target(k: usize) -> usize {
    let mut s = (k as f64 / std::f64::consts::SQRT_2).floor() as usize;
    while 2 * s * s < k * k {
        s += 1;
    }
    while s > 0 && 2 * (s - 1) * (s - 1) >= k * k {
        s -= 1;
    }
    1 + s
}

fn ks_recurse<R: RngCore>(c: Contraction, l: &AffineLine, hi: &Rational, rng: &mut R, best: &mut Option<Rational>, leaves: &mut u64) {
    let k = c.live();
    if k <= KS_BASE {
        *leaves += 1;
        keep_min(best, minor_candidates(&c.minor, l));
        return;
    }
    let t = ks_target(k);
    for _ in 0..2 {
        let mut d = c.clone();
        d.contract_to(t, l, hi, rng);
        ks_recurse(d, l, hi, rng, best, leaves);
    }
}

/// Number of independent recursive runs for failure probability `eta`.
pub fn repetitions(n: usize, eta: f64) -> usize {
    let log_n = (n.max(2) as f64).log2();
    ((1.0 / eta).ln() * log_n).ceil().max(1.0) as usize
}

/// Recursive randomized contraction, amplified to failure probability
/// about `eta`. Run `i` uses seed `seed + i`.
pub fn pnb_randomized(p: &RayProblem, seed: u64, eta: &Rational) -> Result<BreakpointResult> {
    if !eta.is_positive() || *eta >= Rational::one() {
        return Err(Error::InvalidArgument(format!("eta must lie in (0, 1), got {eta}")));
    }
    let mut work = Work::default();
    let lines = DenseMinor::from_ray(&p.ray).compacted();
    p.check_start(&lines, &mut work)?;
    let hi = p.search_hi();
    if hi.is_zero() {
        return Ok(BreakpointResult::none(p, work));
    }
    let l = p.start_line();
    let reps = repetitions(lines.live_count(), eta.to_f64());
    let base = Contraction::new(lines.clone());
    let runs: Vec<(Option<Rational>, u64)> = (0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            let (mut best, mut leaves) = (None, 0);
            ks_recurse(base.clone(), &l, &hi, &mut rng, &mut best, &mut leaves);
            (best, leaves)
        })
        .collect();
    let mut best = None;
    let mut trials = 0;
    for (b, leaves) in runs {
        keep_min(&mut best, b);
        trials += leaves;
    }
    let mut r = certify(p, &lines, best.clone(), work)?;
    r.trials = trials;
    r.candidate = best;
    Ok(r)
}

/// The exact envelope of `Z` on `[0, search_hi]`, traced breakpoint by
/// breakpoint with the deterministic solver.
pub fn ray_envelope(p: &RayProblem) -> Result<PiecewiseLinearConcave> {
    ray_envelope_to(p, &p.search_hi())
}

/// As [`ray_envelope`], on `[0, end]`. `end` may exceed `λ̄` but not the
/// range where costs stay nonnegative.
pub fn ray_envelope_to(p: &RayProblem, end: &Rational) -> Result<PiecewiseLinearConcave> {
    let zero = Rational::zero();
    let end = end.clone();
    if !end.is_positive() || p.domain_hi.as_ref().is_some_and(|h| end > *h) {
        return Err(Error::domain(&zero, &end));
    }
    let mut lines = vec![p.start_line()];
    let mut offset = Rational::zero();
    let mut cur = p.clone();
    loop {
        let r = pnb_deterministic(&cur)?;
        if !r.is_found() {
            break;
        }
        let (Some(step), Some(after)) = (r.lambda_nb, r.slope_after) else {
            break;
        };
        let z = cur.start_line().eval(&step);
        offset = &offset + &step;
        if offset >= end {
            break;
        }
        lines.push(AffineLine::through(&offset, &z, after.clone()));
        cur = RayProblem::with_start(p.ray.shifted(&offset), z, after, Some(&end - &offset))?;
        // Exact values from the certified breakpoint.
        cur.start_known = true;
    }
    lower_envelope(&lines, &zero, &end)
}
