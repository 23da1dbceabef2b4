//! Global minimum cuts by maximum-adjacency orderings.
//!
//! The ordering and the phase loop are generic over the weight type and the
//! comparison, so the same code runs with plain rationals, with `(value,
//! slope)` pairs for one-sided derivatives, and with affine weights whose
//! comparisons are resolved by a parametric search.

use std::cmp::Ordering;
use std::ops::AddAssign;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::minor::DenseMinor;
use crate::numeric::{AffineLine, Direction, Lex, Rational};
use crate::pgraph::{Cut, ParamGraph, RayGraph};

/// Counts of the expensive primitives an algorithm performed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct Work {
    pub ma_orderings: u64,
    pub sw_runs: u64,
    pub oracle_calls: u64,
}

impl Work {
    pub fn absorb(&mut self, other: &Work) {
        self.ma_orderings += other.ma_orderings;
        self.sw_runs += other.sw_runs;
        self.oracle_calls += other.oracle_calls;
    }

    /// MA orderings expressed in units of one full Stoer–Wagner run on `n` vertices.
    pub fn sw_equivalents(&self, n: usize) -> f64 {
        self.ma_orderings as f64 / (n.max(2) - 1) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaOrdering<W = Rational> {
    /// Supervertex labels in MA order.
    pub order: Vec<usize>,
    pub pendant_pair: (usize, usize),
    /// Weight of `δ(v_k)` in the current graph.
    pub last_cut_value: W,
}

/// MA ordering over slots, starting at the lowest live slot. Ties go to the
/// lowest slot. Returns the slot order and the connection weight of the last
/// vertex.
pub(crate) fn ma_order_slots<W, F>(minor: &DenseMinor<W>, cmp: &mut F) -> (Vec<usize>, W)
where
    W: Clone + Zero + for<'a> AddAssign<&'a W>,
    F: FnMut(&W, &W) -> Ordering,
{
    let slots: Vec<usize> = minor.live_slots().collect();
    let size = minor.slot_count();
    let mut key: Vec<W> = vec![W::zero(); size];
    let mut pending = vec![false; size];
    for &s in &slots {
        pending[s] = true;
    }
    let mut order = Vec::with_capacity(slots.len());
    let mut current = slots[0];
    let mut last_key = W::zero();
    loop {
        pending[current] = false;
        order.push(current);
        if order.len() == slots.len() {
            break;
        }
        for (j, w) in minor.neighbours(current) {
            if pending[j] {
                key[j] += w;
            }
        }
        let mut best: Option<usize> = None;
        for &s in &slots {
            if !pending[s] {
                continue;
            }
            match best {
                None => best = Some(s),
                Some(b) => {
                    if cmp(&key[s], &key[b]) == Ordering::Greater {
                        best = Some(s);
                    }
                }
            }
        }
        current = best.expect("pending vertex");
        last_key = key[current].clone();
    }
    (order, last_key)
}

/// MA ordering of a graph with fixed nonnegative weights.
pub fn ma_ordering(minor: &DenseMinor<Rational>) -> Result<MaOrdering> {
    if minor.live_count() < 2 {
        return Err(Error::TooFewVertices);
    }
    if let Some((i, j, w)) = minor.edges().find(|(_, _, w)| w.is_negative()) {
        return Err(Error::negative(format!(
            "{w} between supervertices {} and {}",
            minor.label(i) + 1,
            minor.label(j) + 1
        )));
    }
    let (order, last) = ma_order_slots(minor, &mut |a: &Rational, b: &Rational| a.cmp(b));
    let k = order.len();
    Ok(MaOrdering {
        pendant_pair: (minor.label(order[k - 2]), minor.label(order[k - 1])),
        order: order.iter().map(|&s| minor.label(s)).collect(),
        last_cut_value: last,
    })
}

/// One Stoer–Wagner phase candidate: `δ(v_k)` of the phase graph.
#[derive(Clone, Debug)]
pub(crate) struct Phase<W> {
    pub cut: Cut,
    pub value: W,
}

/// All phase candidates and the index of the first minimum among them.
pub(crate) fn stoer_wagner_phases<W, F>(mut minor: DenseMinor<W>, cmp: &mut F, work: &mut Work) -> (Vec<Phase<W>>, usize)
where
    W: Clone + Zero + for<'a> AddAssign<&'a W>,
    F: FnMut(&W, &W) -> Ordering,
{
    work.sw_runs += 1;
    let mut phases: Vec<Phase<W>> = Vec::with_capacity(minor.live_count().saturating_sub(1));
    let mut best = 0;
    while minor.live_count() > 1 {
        let (order, last) = ma_order_slots(&minor, cmp);
        work.ma_orderings += 1;
        let k = order.len();
        let (s, t) = (order[k - 2], order[k - 1]);
        phases.push(Phase {
            cut: minor.singleton_cut(t),
            value: last,
        });
        let idx = phases.len() - 1;
        if idx > 0 && cmp(&phases[idx].value, &phases[best].value) == Ordering::Less {
            best = idx;
        }
        minor.merge(s, t);
    }
    (phases, best)
}

/// Minimum cut of `g` for the fixed costs `c_μ`.
pub fn sw_mincut(g: &ParamGraph, mu: &[Rational]) -> Result<(Cut, Rational)> {
    let minor = DenseMinor::from_param(g, mu)?;
    mincut_of_minor(minor, &mut Work::default())
}

/// Minimum cut of a ray graph at the point `lambda`.
pub fn ray_mincut(ray: &RayGraph, lambda: &Rational) -> Result<(Cut, Rational)> {
    mincut_of_minor(DenseMinor::from_ray(ray).at(lambda), &mut Work::default())
}

pub(crate) fn mincut_of_minor(minor: DenseMinor<Rational>, work: &mut Work) -> Result<(Cut, Rational)> {
    if minor.live_count() < 2 {
        return Err(Error::TooFewVertices);
    }
    if let Some((i, j, w)) = minor.edges().find(|(_, _, w)| w.is_negative()) {
        return Err(Error::negative(format!(
            "{w} between supervertices {} and {}",
            minor.label(i) + 1,
            minor.label(j) + 1
        )));
    }
    let (mut phases, best) = stoer_wagner_phases(minor, &mut |a: &Rational, b: &Rational| a.cmp(b), work);
    let p = phases.swap_remove(best);
    Ok((p.cut, p.value))
}

/// Value, one-sided slope, and a witness cut of `Z` at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneSided {
    pub z: Rational,
    pub slope: Rational,
    pub witness: Cut,
}

impl OneSided {
    /// The witness's cost line, which supports `Z` at the query point.
    pub fn line(&self, at: &Rational) -> AffineLine {
        AffineLine::through(at, &self.z, self.slope.clone())
    }
}

/// `Z(at)` and its derivative on the `dir` side of `at`, obtained by running
/// Stoer–Wagner on `(value, dir·slope)` pairs ordered lexicographically.
pub fn one_sided_slope(ray: &RayGraph, at: &Rational, dir: Direction) -> Result<OneSided> {
    one_sided_in(&DenseMinor::from_ray(ray), at, dir, &mut Work::default())
}

pub(crate) fn one_sided_in(lines: &DenseMinor<AffineLine>, at: &Rational, dir: Direction, work: &mut Work) -> Result<OneSided> {
    if lines.live_count() < 2 {
        return Err(Error::TooFewVertices);
    }
    let minor = lines.map(|l| l.lex_at(at, dir));
    if let Some((i, j, _)) = minor.edges().find(|(_, _, w)| w.is_negative()) {
        let side = match dir {
            Direction::Right => "right",
            Direction::Left => "left",
        };
        return Err(Error::negative(format!(
            "between supervertices {} and {} just {side} of λ = {at}",
            minor.label(i) + 1,
            minor.label(j) + 1
        )));
    }
    let (mut phases, best) = stoer_wagner_phases(minor, &mut |a: &Lex, b: &Lex| a.cmp(b), work);
    let p = phases.swap_remove(best);
    let slope = match dir {
        Direction::Right => p.value.slope,
        Direction::Left => -p.value.slope,
    };
    Ok(OneSided {
        z: p.value.value,
        slope,
        witness: p.cut,
    })
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn t1_ray() -> RayGraph {
        RayGraph::from_lines(
            3,
            [
                (0, 1, AffineLine::from_ints(0, 1)),
                (1, 2, AffineLine::from_ints(1, 0)),
                (0, 2, AffineLine::from_ints(2, -1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn ma_ordering_t1_at_zero() {
        let m = DenseMinor::from_weighted_edges(3, &[(0, 1, q(0)), (1, 2, q(1)), (0, 2, q(2))]).unwrap();
        let o = ma_ordering(&m).unwrap();
        assert_eq!(o.order, vec![0, 2, 1]);
        assert_eq!(o.pendant_pair, (2, 1));
        assert_eq!(o.last_cut_value, q(1));
    }

    #[test]
    fn ma_ordering_small_cases() {
        let m = DenseMinor::from_weighted_edges(2, &[(0, 1, q(7))]).unwrap();
        let o = ma_ordering(&m).unwrap();
        assert_eq!((o.order, o.pendant_pair, o.last_cut_value), (vec![0, 1], (0, 1), q(7)));

        let star = DenseMinor::from_weighted_edges(4, &[(0, 1, q(1)), (0, 2, q(1)), (0, 3, q(1))]).unwrap();
        let o = ma_ordering(&star).unwrap();
        assert_eq!(o.order[0], 0);
        assert_eq!(o.last_cut_value, q(1));

        let single = DenseMinor::<Rational>::from_weighted_edges(1, &[]).unwrap();
        assert_eq!(ma_ordering(&single), Err(Error::TooFewVertices));
        let neg = DenseMinor::from_weighted_edges(2, &[(0, 1, q(-1))]).unwrap();
        assert!(matches!(ma_ordering(&neg), Err(Error::NegativeCost { .. })));
    }

    #[test]
    fn sw_mincut_t1() {
        let g = crate::pgraph::ParamGraph::from_edges(3, 1, [(0, 1, vec![0, 1]), (1, 2, vec![1, 0]), (0, 2, vec![2, -1])]).unwrap();
        let (cut, v) = sw_mincut(&g, &[q(0)]).unwrap();
        assert_eq!((cut.side().to_vec(), v), (vec![1], q(1)));
        let (_, v) = sw_mincut(&g, &[q(1)]).unwrap();
        assert_eq!(v, q(2));
        let k2 = crate::pgraph::ParamGraph::from_edges(2, 0, [(0, 1, vec![5])]).unwrap();
        let (cut, v) = sw_mincut(&k2, &[]).unwrap();
        assert_eq!((cut.side().to_vec(), v), (vec![1], q(5)));
        assert!(matches!(sw_mincut(&g, &[q(3)]), Err(Error::NegativeCost { .. })));
    }

    #[test]
    fn one_sided_t1() {
        let ray = t1_ray();
        let r = one_sided_slope(&ray, &q(0), Direction::Right).unwrap();
        assert_eq!((r.z, r.slope, r.witness.side().to_vec()), (q(1), q(1), vec![1]));
        let r = one_sided_slope(&ray, &q(1), Direction::Right).unwrap();
        assert_eq!((r.z, r.slope, r.witness.side().to_vec()), (q(2), q(-1), vec![2]));
        let r = one_sided_slope(&ray, &q(1), Direction::Left).unwrap();
        assert_eq!((r.z, r.slope, r.witness.side().to_vec()), (q(2), q(1), vec![1]));
        // Right of λ = 2 the edge 1-3 is negative.
        assert!(matches!(one_sided_slope(&ray, &q(2), Direction::Right), Err(Error::NegativeCost { .. })));
        assert!(one_sided_slope(&ray, &q(2), Direction::Left).is_ok());
    }

    fn brute_min_separating(n: usize, w: &[Vec<i64>], s: usize, t: usize) -> i64 {
        (1u64..(1 << n) - 1)
            .filter(|m| (m >> s & 1) != (m >> t & 1))
            .map(|m| {
                let mut c = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if (m >> i & 1) != (m >> j & 1) {
                            c += w[i][j];
                        }
                    }
                }
                c
            })
            .min()
            .unwrap()
    }

    #[test]
    fn pendant_pairs_and_values_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(2..=8);
            let mut w = vec![vec![0i64; n]; n];
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.6) {
                        let x = rng.gen_range(0..=20);
                        w[i][j] = x;
                        w[j][i] = x;
                        edges.push((i, j, q(x)));
                    }
                }
            }
            let m = DenseMinor::from_weighted_edges(n, &edges).unwrap();
            let o = ma_ordering(&m).unwrap();
            let (s, t) = o.pendant_pair;
            assert_eq!(q(brute_min_separating(n, &w, s, t)), o.last_cut_value);
            let (cut, v) = mincut_of_minor(m, &mut Work::default()).unwrap();
            let global = (1u64..(1 << n) - 1)
                .map(|mask| {
                    let mut c = 0;
                    for i in 0..n {
                        for j in i + 1..n {
                            if (mask >> i & 1) != (mask >> j & 1) {
                                c += w[i][j];
                            }
                        }
                    }
                    c
                })
                .min()
                .unwrap();
            assert_eq!(v, q(global));
            let direct: i64 = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| cut.separates(i, j))
                .map(|(i, j)| w[i][j])
                .sum();
            assert_eq!(q(direct), v);
        }
    }
}
