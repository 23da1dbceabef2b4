//! Maximizing `Z` along a ray, and the next-breakpoint solvers built on
//! parametric search.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::envelope::lower_envelope;
use crate::error::{Error, Result};
use crate::mincut_sw::{mincut_of_minor, one_sided_in, stoer_wagner_phases, OneSided, Work};
use crate::minor::DenseMinor;
use crate::next_breakpoint::{certify, weighted_pick, BreakpointResult, RayProblem};
use crate::numeric::{line_intersection, AffineLine, Direction, Rational};
use crate::pgraph::{Cut, ParamGraph, RayGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxResult {
    pub lambda_star: Rational,
    pub mu_star: Vec<Rational>,
    pub z_star: Rational,
    /// Optimal cuts at `lambda_star`.
    pub witnesses: Vec<Cut>,
    /// Distinct parameter values at which a min-cut oracle was queried.
    pub oracle_calls: u64,
    #[serde(skip)]
    pub work: Work,
}

/// Rejects empty domains and domains on which some edge cost is negative.
pub fn check_domain(g: &RayGraph, lo: &Rational, hi: &Rational) -> Result<()> {
    if lo >= hi {
        return Err(Error::domain(lo, hi));
    }
    if g.live_vertices().len() < 2 {
        return Err(Error::TooFewVertices);
    }
    for e in g.edges() {
        for at in [lo, hi] {
            if e.line.eval(at).is_negative() {
                return Err(Error::negative(format!("on edge {}-{} at λ = {at}", e.u + 1, e.v + 1)));
            }
        }
    }
    Ok(())
}

/// One-sided min-cut queries, optionally on `Z(λ) - shift·λ`, counting the
/// distinct points queried.
struct Probe<'a> {
    lines: &'a DenseMinor<AffineLine>,
    shift: Rational,
    points: BTreeSet<Rational>,
    work: Work,
}

impl<'a> Probe<'a> {
    fn new(lines: &'a DenseMinor<AffineLine>, shift: Rational) -> Self {
        Probe {
            lines,
            shift,
            points: BTreeSet::new(),
            work: Work::default(),
        }
    }

    fn side(&mut self, at: &Rational, dir: Direction) -> Result<OneSided> {
        self.points.insert(at.clone());
        let mut r = one_sided_in(self.lines, at, dir, &mut self.work)?;
        if !self.shift.is_zero() {
            r.z = &r.z - &(&self.shift * at);
            r.slope = &r.slope - &self.shift;
        }
        Ok(r)
    }

    fn calls(&self) -> u64 {
        self.points.len() as u64
    }

    /// Where the leftmost maximizer lies relative to `r`, for `lo ≤ r ≤ hi`.
    fn locate_max(&mut self, r: &Rational, lo: &Rational, hi: &Rational) -> Result<Ordering> {
        if r < lo {
            return Ok(Ordering::Greater);
        }
        if r > hi {
            return Ok(Ordering::Less);
        }
        if r < hi {
            let right = self.side(r, Direction::Right)?;
            if right.slope.is_positive() {
                return Ok(Ordering::Greater);
            }
            if r == lo {
                return Ok(Ordering::Equal);
            }
        }
        let left = self.side(r, Direction::Left)?;
        Ok(if left.slope.is_positive() {
            Ordering::Equal
        } else {
            Ordering::Less
        })
    }

    /// Optimal cuts at `at` that define the one-sided slopes within `[lo, hi]`.
    fn witnesses(&mut self, at: &Rational, lo: &Rational, hi: &Rational) -> Result<Vec<Cut>> {
        let mut out = Vec::new();
        if at < hi {
            out.push(self.side(at, Direction::Right)?.witness);
        }
        if at > lo {
            out.push(self.side(at, Direction::Left)?.witness);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

fn finish(g: &RayGraph, probe: &mut Probe, lambda_star: Rational, lo: &Rational, hi: &Rational) -> Result<MaxResult> {
    let witnesses = probe.witnesses(&lambda_star, lo, hi)?;
    let z_star = g.cut_cost(&witnesses[0], &lambda_star)?;
    Ok(MaxResult {
        mu_star: g.point(&lambda_star),
        lambda_star,
        z_star,
        witnesses,
        oracle_calls: probe.calls(),
        work: probe.work,
    })
}

/// Discrete Newton on supporting lines; returns the leftmost maximizer.
fn newton_core(probe: &mut Probe, lo: &Rational, hi: &Rational) -> Result<Rational> {
    let start = probe.side(lo, Direction::Right)?;
    if !start.slope.is_positive() {
        return Ok(lo.clone());
    }
    let end = probe.side(hi, Direction::Left)?;
    if end.slope.is_positive() {
        return Ok(hi.clone());
    }
    let mut rising = start.line(lo);
    let mut falling = end.line(hi);
    loop {
        let m = line_intersection(&rising, &falling).expect("slopes of opposite sign");
        let right = probe.side(&m, Direction::Right)?;
        if right.z == rising.eval(&m) {
            return Ok(m);
        }
        if right.slope.is_positive() {
            rising = right.line(&m);
            continue;
        }
        let left = probe.side(&m, Direction::Left)?;
        if left.slope.is_positive() {
            return Ok(m);
        }
        falling = left.line(&m);
    }
}

/// Leftmost maximizer of `Z` on `[lo, hi]` by discrete Newton.
pub fn pmax_newton(g: &RayGraph, lo: &Rational, hi: &Rational) -> Result<MaxResult> {
    check_domain(g, lo, hi)?;
    let lines = DenseMinor::from_ray(g).compacted();
    let mut probe = Probe::new(&lines, Rational::zero());
    let at = newton_core(&mut probe, lo, hi)?;
    finish(g, &mut probe, at, lo, hi)
}

/// Next breakpoint as the maximizer of `Z(λ) - (Z'(0) - 1/2)·λ`. Cut slopes
/// are integers, so the slope of `Z` drops by at least one at the
/// breakpoint and the shifted function peaks exactly there.
pub fn pnb_via_pmax(p: &RayProblem) -> Result<BreakpointResult> {
    let lines = DenseMinor::from_ray(&p.ray).compacted();
    let hi = p.search_hi();
    let mut work = Work::default();
    p.check_start(&lines, &mut work)?;
    if !hi.is_positive() {
        return Ok(BreakpointResult::none(p, work));
    }
    let delta = &p.slope0 - &Rational::new(1, 2);
    let mut probe = Probe::new(&lines, delta);
    let at = newton_core(&mut probe, &Rational::zero(), &hi)?;
    work.absorb(&probe.work);
    work.oracle_calls += probe.calls();
    certify(p, &lines, Some(at), work)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxMode {
    Bruteforce,
    Randomized,
}

impl ApproxMode {
    /// Exhaustive up to the oracle size cap, sampling beyond it.
    pub fn for_size(n: usize) -> ApproxMode {
        if n <= crate::oracle::max_n() {
            ApproxMode::Bruteforce
        } else {
            ApproxMode::Randomized
        }
    }
}

/// All cuts `C` with `c_μ(C) ≤ α·Z(μ)`, with their costs, cheapest first.
pub fn approx_cuts(g: &ParamGraph, mu: &[Rational], alpha: &Rational, seed: u64, mode: ApproxMode) -> Result<Vec<(Cut, Rational)>> {
    if *alpha < Rational::one() {
        return Err(Error::InvalidArgument(format!("alpha must be at least 1, got {alpha}")));
    }
    let minor = DenseMinor::from_param(g, mu)?.compacted();
    approx_cuts_sq(&minor, &(alpha * alpha), seed, mode)
}

/// As [`approx_cuts`] with the factor given by its square, so irrational
/// factors with rational squares stay exact.
pub(crate) fn approx_cuts_sq(
    minor: &DenseMinor<Rational>,
    alpha_sq: &Rational,
    seed: u64,
    mode: ApproxMode,
) -> Result<Vec<(Cut, Rational)>> {
    let (_, z) = mincut_of_minor(minor.clone(), &mut Work::default())?;
    let bound = alpha_sq * &(&z * &z);
    let within = |c: &Rational| c * c <= bound;
    let mut found: BTreeMap<Cut, Rational> = BTreeMap::new();
    match mode {
        ApproxMode::Bruteforce => {
            crate::oracle::check_size(minor.live_count())?;
            for (cut, cost) in minor_cuts(minor) {
                if within(&cost) {
                    found.insert(cut, cost);
                }
            }
        }
        ApproxMode::Randomized => {
            let k = minor.live_count();
            // A given α-approximate cut survives one contraction run with
            // probability about k^{-2α}.
            let alpha = alpha_sq.to_f64().sqrt();
            let runs = ((k as f64).powf(2.0 * alpha) * (k as f64).ln()).ceil().max(1.0) as u64;
            let target = approx_target(alpha_sq);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..runs {
                let mut m = minor.clone();
                karger_contract(&mut m, target, &mut rng);
                for (cut, cost) in minor_cuts(&m) {
                    if within(&cost) {
                        found.insert(cut, cost);
                    }
                }
            }
        }
    }
    let mut out: Vec<(Cut, Rational)> = found.into_iter().collect();
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// `⌈2α⌉` from `α²`, at least 2.
fn approx_target(alpha_sq: &Rational) -> usize {
    let four = Rational::from_integer(4) * alpha_sq.clone();
    let mut t = 2usize;
    while Rational::from_integer((t * t) as i64) < four {
        t += 1;
    }
    t
}

/// Every cut of a minor with its cost.
fn minor_cuts(minor: &DenseMinor<Rational>) -> Vec<(Cut, Rational)> {
    let slots: Vec<usize> = minor.live_slots().collect();
    let k = slots.len();
    let mut out = Vec::with_capacity((1 << (k - 1)) - 1);
    for mask in 1u64..(1 << (k - 1)) {
        let on = |i: usize| i > 0 && mask >> (i - 1) & 1 == 1;
        let mut cost = Rational::zero();
        for a in 0..k {
            for b in a + 1..k {
                if on(a) != on(b) {
                    if let Some(w) = minor.weight(slots[a], slots[b]) {
                        cost += w;
                    }
                }
            }
        }
        let side: Vec<usize> = (0..k).filter(|&i| on(i)).map(|i| slots[i]).collect();
        out.push((minor.cut_of_slots(&side), cost));
    }
    out
}

/// Random contraction with probabilities proportional to fixed costs.
fn karger_contract<R: RngCore>(m: &mut DenseMinor<Rational>, target: usize, rng: &mut R) {
    let mut deg: Vec<Rational> = (0..m.slot_count())
        .map(|s| if m.is_alive(s) { m.degree(s) } else { Rational::zero() })
        .collect();
    while m.live_count() > target.max(2) {
        let slots: Vec<usize> = m.live_slots().collect();
        let ds: Vec<Rational> = slots.iter().map(|&s| deg[s].clone()).collect();
        let (a, b) = match weighted_pick(rng, &ds) {
            Some(i) => {
                let u = slots[i];
                let (nbrs, w): (Vec<usize>, Vec<Rational>) = m.neighbours(u).map(|(j, w)| (j, w.clone())).unzip();
                (u, nbrs[weighted_pick(rng, &w).expect("positive degree")])
            }
            None => {
                let i = rng.gen_range(0..slots.len());
                let mut j = rng.gen_range(0..slots.len() - 1);
                if j >= i {
                    j += 1;
                }
                (slots[i], slots[j])
            }
        };
        let (keep, gone) = (a.min(b), a.max(b));
        let between = m.weight(keep, gone).cloned().unwrap_or_default();
        deg[keep] = &(&deg[keep] + &deg[gone]) - &(&between + &between);
        deg[gone] = Rational::zero();
        m.merge(keep, gone);
    }
}

/// The geometric thresholds `g_i(ē, λ) = β·ε^{2(i-1)}·c_λ(ē)` with
/// `ε² = 5/4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingLadder {
    pub eps_sq: Rational,
    pub beta: Rational,
    pub p: usize,
    /// Endpoints of `ē` (supervertex labels).
    pub base_edge: (usize, usize),
    pub base_line: AffineLine,
    /// Multipliers of `c(ē)` for `g_0 ..= g_p`; `g_{p+1}` is unbounded.
    pub levels: Vec<Rational>,
}

impl ScalingLadder {
    pub fn new(m: usize, base_edge: (usize, usize), base_line: AffineLine) -> ScalingLadder {
        let eps_sq = Rational::new(5, 4);
        let beta = &(&eps_sq - &Rational::one()) / &Rational::from_integer(m.max(1) as i64);
        // Smallest k with ε^{2k} ≥ m²/(ε²-1) = 4m².
        let goal = Rational::from_integer(4 * (m.max(1) * m.max(1)) as i64);
        let mut k = 0;
        let mut pow = Rational::one();
        while pow < goal {
            pow = &pow * &eps_sq;
            k += 1;
        }
        let p = 1 + k;
        let mut levels = vec![Rational::zero()];
        let mut g = beta.clone();
        for _ in 1..=p {
            levels.push(g.clone());
            g = &g * &eps_sq;
        }
        ScalingLadder {
            eps_sq,
            beta,
            p,
            base_edge,
            base_line,
            levels,
        }
    }

    /// Factor `2ε⁴ - 1` within which every cut that is optimal somewhere in
    /// the located cell stays near-optimal at any other point of it. Edge
    /// ratios to `c(ē)` move by at most `ε²` inside a band, edges below `g_1`
    /// add at most `ε² - 1`, and the bound is applied once in each direction.
    pub fn enumeration_factor(&self) -> Rational {
        &(&(&self.eps_sq * &self.eps_sq) * &Rational::from_integer(2)) - &Rational::one()
    }

    /// `g_i` as a line in λ, for `0 ≤ i ≤ p`.
    pub fn g(&self, i: usize) -> AffineLine {
        self.base_line.scale(&self.levels[i])
    }
}

/// Intermediate regions of one scaling run, for inspection.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScalingTrace {
    pub r1: Option<(Rational, Rational)>,
    pub mu1: Option<Rational>,
    pub ladder: Option<ScalingLadder>,
    pub restricted: Option<(Rational, Rational)>,
    pub r2: Option<(Rational, Rational)>,
    pub mu2: Option<Rational>,
    pub approx_count: usize,
}

enum Located {
    At(Rational),
    Between(Rational, Rational),
}

/// Binary search for the maximizer among sorted interior `points` of `(a, b)`.
fn locate(probe: &mut Probe, points: &[Rational], a: &Rational, b: &Rational, lo: &Rational, hi: &Rational) -> Result<Located> {
    let (mut a, mut b) = (a.clone(), b.clone());
    let (mut i, mut j) = (0, points.len());
    while i < j {
        let mid = (i + j) / 2;
        let r = &points[mid];
        match probe.locate_max(r, lo, hi)? {
            Ordering::Equal => return Ok(Located::At(r.clone())),
            Ordering::Greater => {
                a = r.clone();
                i = mid + 1;
            }
            Ordering::Less => {
                b = r.clone();
                j = mid;
            }
        }
    }
    Ok(Located::Between(a, b))
}

fn sorted_inside(mut pts: Vec<Rational>, a: &Rational, b: &Rational) -> Vec<Rational> {
    pts.retain(|x| x > a && x < b);
    pts.sort();
    pts.dedup();
    pts
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        let next = parent[x];
        parent[x] = r;
        x = next;
    }
    r
}

/// Edges `(i, j, line)` of a maximum spanning tree at `at` (Kruskal).
fn max_spanning_tree(edges: &[(usize, usize, AffineLine)], slots: usize, at: &Rational) -> Vec<usize> {
    let mut order: Vec<(Rational, usize)> = edges.iter().enumerate().map(|(k, e)| (e.2.eval(at), k)).collect();
    order.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut parent: Vec<usize> = (0..slots).collect();
    let mut tree = Vec::new();
    for (_, k) in order {
        let (ru, rv) = (find(&mut parent, edges[k].0), find(&mut parent, edges[k].1));
        if ru != rv {
            parent[ru] = rv;
            tree.push(k);
        }
    }
    tree
}

/// Leftmost maximizer of `Z` on `[lo, hi]` by edge-cost scaling.
pub fn pmax_scaling_1d(g: &RayGraph, lo: &Rational, hi: &Rational) -> Result<MaxResult> {
    pmax_scaling_1d_traced(g, lo, hi, 0).map(|(r, _)| r)
}

/// As [`pmax_scaling_1d`], also returning the located cells. `seed` drives
/// the sampled cut enumeration used above the oracle size cap.
pub fn pmax_scaling_1d_traced(g: &RayGraph, lo: &Rational, hi: &Rational, seed: u64) -> Result<(MaxResult, ScalingTrace)> {
    check_domain(g, lo, hi)?;
    let lines = DenseMinor::from_ray(g).compacted();
    let mut probe = Probe::new(&lines, Rational::zero());
    let mut trace = ScalingTrace::default();
    match probe.locate_max(lo, lo, hi)? {
        Ordering::Equal => return Ok((finish(g, &mut probe, lo.clone(), lo, hi)?, trace)),
        _ => {
            if probe.locate_max(hi, lo, hi)? == Ordering::Equal {
                return Ok((finish(g, &mut probe, hi.clone(), lo, hi)?, trace));
            }
        }
    }
    let edges: Vec<(usize, usize, AffineLine)> = lines.edges().map(|(i, j, l)| (i, j, l.clone())).collect();

    // Cell of the edge-line arrangement holding the maximizer.
    let mut crossings = Vec::new();
    for x in 0..edges.len() {
        for y in x + 1..edges.len() {
            if let Some(r) = line_intersection(&edges[x].2, &edges[y].2) {
                crossings.push(r);
            }
        }
    }
    let h1 = sorted_inside(crossings, lo, hi);
    let (a, b) = match locate(&mut probe, &h1, lo, hi, lo, hi)? {
        Located::At(r) => return Ok((finish(g, &mut probe, r, lo, hi)?, trace)),
        Located::Between(a, b) => (a, b),
    };
    trace.r1 = Some((a.clone(), b.clone()));
    let mu1 = Rational::midpoint(&a, &b);
    trace.mu1 = Some(mu1.clone());

    let tree = max_spanning_tree(&edges, lines.slot_count(), &mu1);
    if tree.len() + 1 < lines.live_count() {
        // Disconnected: every cut of some component is free, Z ≡ 0.
        return Ok((finish(g, &mut probe, lo.clone(), lo, hi)?, trace));
    }
    let &bar = tree
        .iter()
        .min_by(|&&x, &&y| edges[x].2.eval(&mu1).cmp(&edges[y].2.eval(&mu1)).then(x.cmp(&y)))
        .expect("nonempty tree");
    let bar_line = edges[bar].2.clone();
    let ladder = ScalingLadder::new(
        edges.len(),
        (lines.label(edges[bar].0), lines.label(edges[bar].1)),
        bar_line.clone(),
    );
    trace.ladder = Some(ladder.clone());

    // Where c(ē) reaches zero on R1, shrink to the part where the top rung
    // still dominates the cheapest edge positive on all of R1.
    let (mut a2, mut b2) = (a.clone(), b.clone());
    if bar_line.eval(&a).is_zero() || bar_line.eval(&b).is_zero() {
        let tilde = edges
            .iter()
            .filter(|e| e.2.eval(&a).is_positive() && e.2.eval(&b).is_positive())
            .min_by(|x, y| x.2.eval(&mu1).cmp(&y.2.eval(&mu1)))
            .ok_or_else(|| Error::InvalidArgument("no edge is positive on the located cell".into()))?;
        let gap = &ladder.g(ladder.p) - &tilde.2;
        if let Some(root) = line_intersection(&ladder.g(ladder.p), &tilde.2) {
            if gap.slope.is_positive() && root > a2 {
                a2 = Rational::min_of(root, b2.clone());
            } else if gap.slope.is_negative() && root < b2 {
                b2 = Rational::max_of(root, a2.clone());
            }
        }
        trace.restricted = Some((a2.clone(), b2.clone()));
    }

    // Cell of the threshold arrangement holding the maximizer.
    let mut crossings = Vec::new();
    for e in &edges {
        for i in 1..=ladder.p {
            if let Some(r) = line_intersection(&e.2, &ladder.g(i)) {
                crossings.push(r);
            }
        }
    }
    let mut h2 = crossings;
    for x in [&a2, &b2] {
        h2.push(x.clone());
    }
    let h2 = sorted_inside(h2, &a, &b);
    let (c, d) = match locate(&mut probe, &h2, &a, &b, lo, hi)? {
        Located::At(r) => return Ok((finish(g, &mut probe, r, lo, hi)?, trace)),
        Located::Between(c, d) => (c, d),
    };
    trace.r2 = Some((c.clone(), d.clone()));
    let mu2 = Rational::midpoint(&c, &d);
    trace.mu2 = Some(mu2.clone());

    let at_mu2 = lines.at(&mu2);
    let mode = ApproxMode::for_size(at_mu2.live_count());
    let factor = ladder.enumeration_factor();
    let near = approx_cuts_sq(&at_mu2, &(&factor * &factor), seed, mode)?;
    trace.approx_count = near.len();
    let cut_lines: Vec<(Cut, AffineLine)> = near
        .into_iter()
        .map(|(cut, _)| {
            let line = g.cut_line(&cut)?;
            Ok((cut, line))
        })
        .collect::<Result<_>>()?;
    let env = lower_envelope(&cut_lines.iter().map(|(_, l)| l.clone()).collect::<Vec<_>>(), &c, &d)?;
    let (lambda_star, z_star) = env.argmax();
    let mut witnesses: Vec<Cut> = cut_lines
        .iter()
        .filter(|(_, l)| l.eval(&lambda_star) == z_star)
        .map(|(c, _)| c.clone())
        .collect();
    witnesses.sort();
    probe.work.sw_runs += 1;
    Ok((
        MaxResult {
            mu_star: g.point(&lambda_star),
            lambda_star,
            z_star,
            witnesses,
            oracle_calls: probe.calls(),
            work: probe.work,
        },
        trace,
    ))
}

/// Tracks what is known about an unknown target parameter and answers
/// "target versus r" by running a parametric test only when the known
/// bounds do not already decide it.
struct Locator<F> {
    above: Option<Rational>,
    below: Option<Rational>,
    exact: Option<Rational>,
    test: F,
    tests: u64,
    error: Option<Error>,
}

impl<F: FnMut(&Rational) -> Result<Ordering>> Locator<F> {
    fn new(test: F) -> Self {
        Locator {
            above: None,
            below: None,
            exact: None,
            test,
            tests: 0,
            error: None,
        }
    }

    fn target_vs(&mut self, r: &Rational) -> Ordering {
        if let Some(t) = &self.exact {
            return t.cmp(r);
        }
        if self.above.as_ref().is_some_and(|a| r <= a) {
            return Ordering::Greater;
        }
        if self.below.as_ref().is_some_and(|b| r >= b) {
            return Ordering::Less;
        }
        if self.error.is_some() {
            return Ordering::Equal;
        }
        self.tests += 1;
        match (self.test)(r) {
            Ok(o) => {
                match o {
                    Ordering::Greater => self.above = Some(r.clone()),
                    Ordering::Less => self.below = Some(r.clone()),
                    Ordering::Equal => self.exact = Some(r.clone()),
                }
                o
            }
            Err(e) => {
                self.error = Some(e);
                Ordering::Equal
            }
        }
    }

    /// Compares two affine functions at the target shifted by `side·ε`.
    fn compare(&mut self, f: &AffineLine, g: &AffineLine, side: Direction) -> Ordering {
        let d = f - g;
        if d.slope.is_zero() {
            return d.intercept.cmp(&Rational::zero());
        }
        let root = -(&d.intercept / &d.slope);
        let up = if d.slope.is_positive() { Ordering::Greater } else { Ordering::Less };
        match self.target_vs(&root) {
            Ordering::Greater => up,
            Ordering::Less => up.reverse(),
            Ordering::Equal => match side {
                Direction::Right => up,
                Direction::Left => up.reverse(),
            },
        }
    }
}

/// Stoer–Wagner on affine weights with every comparison resolved at the
/// unknown target; returns the line of each phase cut.
fn megiddo_phases<F: FnMut(&Rational) -> Result<Ordering>>(
    lines: &DenseMinor<AffineLine>,
    locator: &mut Locator<F>,
    side: Direction,
    work: &mut Work,
) -> Result<Vec<(Cut, AffineLine)>> {
    let (phases, _) = stoer_wagner_phases(lines.clone(), &mut |f: &AffineLine, g: &AffineLine| locator.compare(f, g, side), work);
    if let Some(e) = locator.error.take() {
        return Err(e);
    }
    Ok(phases.into_iter().map(|p| (p.cut, p.value)).collect())
}

/// Next breakpoint by parametric search over Stoer–Wagner.
pub fn megiddo_next_breakpoint(p: &RayProblem) -> Result<BreakpointResult> {
    let lines = DenseMinor::from_ray(&p.ray).compacted();
    let mut work = Work::default();
    p.check_start(&lines, &mut work)?;
    let hi = p.search_hi();
    if !hi.is_positive() {
        return Ok(BreakpointResult::none(p, work));
    }
    let l = p.start_line();
    let probe = RefCell::new(Probe::new(&lines, Rational::zero()));
    let nb_test = |r: &Rational| -> Result<Ordering> {
        if *r > hi {
            // Only reached when no breakpoint lies within the search interval.
            return Ok(Ordering::Greater);
        }
        let mut probe = probe.borrow_mut();
        let admissible = p.admits(r);
        let dir = if admissible { Direction::Right } else { Direction::Left };
        let s = probe.side(r, dir)?;
        let lr = l.eval(r);
        Ok(if s.z < lr {
            Ordering::Less
        } else if admissible && s.slope < p.slope0 {
            Ordering::Equal
        } else {
            Ordering::Greater
        })
    };
    let mut locator = Locator::new(nb_test);
    locator.above = Some(Rational::zero());
    // Decide once whether the target lies within the search interval.
    locator.target_vs(&hi);
    if let Some(e) = locator.error.take() {
        return Err(e);
    }
    let phases = megiddo_phases(&lines, &mut locator, Direction::Right, &mut work)?;
    let candidate = phases
        .iter()
        .filter_map(|(_, line)| line_intersection(&l, line))
        .filter(|x| x.is_positive())
        .min();
    work.absorb(&probe.borrow().work);
    work.oracle_calls += probe.borrow().calls();
    certify(p, &lines, candidate, work)
}

/// Leftmost maximizer of `Z` on `[lo, hi]` by parametric search over
/// Stoer–Wagner, run once on each side of the target so that both
/// slope-defining cuts appear among the phase cuts.
pub fn megiddo_maximize(g: &RayGraph, lo: &Rational, hi: &Rational) -> Result<MaxResult> {
    check_domain(g, lo, hi)?;
    let lines = DenseMinor::from_ray(g).compacted();
    let probe = RefCell::new(Probe::new(&lines, Rational::zero()));
    let mut work = Work::default();
    let mut locator = Locator::new(|r: &Rational| probe.borrow_mut().locate_max(r, lo, hi));
    let mut cuts = megiddo_phases(&lines, &mut locator, Direction::Right, &mut work)?;
    cuts.extend(megiddo_phases(&lines, &mut locator, Direction::Left, &mut work)?);
    drop(locator);
    cuts.sort_by(|a, b| a.0.cmp(&b.0));
    cuts.dedup_by(|a, b| a.0 == b.0);
    let env = lower_envelope(&cuts.iter().map(|(_, l)| l.clone()).collect::<Vec<_>>(), lo, hi)?;
    let (lambda_star, z_star) = env.argmax();
    let witnesses = cuts
        .iter()
        .filter(|(_, l)| l.eval(&lambda_star) == z_star)
        .map(|(c, _)| c.clone())
        .collect();
    let probe = probe.into_inner();
    work.absorb(&probe.work);
    Ok(MaxResult {
        mu_star: g.point(&lambda_star),
        lambda_star,
        z_star,
        witnesses,
        oracle_calls: probe.calls(),
        work,
    })
}
