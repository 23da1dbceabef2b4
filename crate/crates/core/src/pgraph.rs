//! Parametric multigraphs, cuts, contraction, and restriction to a ray.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{AffineLine, Rational};

/// A nonempty proper subset of the original vertices.
///
/// Stored canonically: the side never contains vertex 0, so a cut and its
/// complement compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut {
    n: usize,
    side: Vec<usize>,
}

impl Cut {
    pub fn new(n: usize, side: impl IntoIterator<Item = usize>) -> Result<Cut> {
        let mut in_side = vec![false; n];
        let mut count = 0;
        for v in side {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if !in_side[v] {
                in_side[v] = true;
                count += 1;
            }
        }
        if count == 0 || count == n {
            return Err(Error::TrivialCut);
        }
        Ok(Cut::from_membership(&in_side))
    }

    /// `in_side[v]` marks one side; must be nonempty and proper.
    pub(crate) fn from_membership(in_side: &[bool]) -> Cut {
        let flip = in_side[0];
        let side = (0..in_side.len()).filter(|&v| in_side[v] != flip).collect();
        Cut {
            n: in_side.len(),
            side,
        }
    }

    /// Bit `i` of `mask` set means vertex `i` is on the side. `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Cut> {
        Cut::new(n, (0..n).filter(|&v| mask >> v & 1 == 1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical side (vertex 0 excluded), ascending.
    pub fn side(&self) -> &[usize] {
        &self.side
    }

    pub fn contains(&self, v: usize) -> bool {
        self.side.binary_search(&v).is_ok()
    }

    pub fn separates(&self, u: usize, v: usize) -> bool {
        self.contains(u) != self.contains(v)
    }

    pub fn membership(&self) -> Vec<bool> {
        let mut m = vec![false; self.n];
        for &v in &self.side {
            m[v] = true;
        }
        m
    }

    /// 1-based vertex ids of the canonical side.
    pub fn one_based(&self) -> Vec<usize> {
        self.side.iter().map(|v| v + 1).collect()
    }
}

impl Serialize for Cut {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

/// Multigraph with integer affine edge costs `c⁰ + Σ μᵢ cⁱ`.
///
/// Vertices are 0-based original ids. After contraction each supervertex is
/// labelled by its smallest original member. Parallel edges are merged by
/// summing cost vectors; self-loops never exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamGraph {
    n: usize,
    dim: usize,
    vertex_map: Vec<usize>,
    edges: BTreeMap<(usize, usize), Vec<i64>>,
}

impl ParamGraph {
    pub fn new(n: usize, dim: usize) -> ParamGraph {
        ParamGraph {
            n,
            dim,
            vertex_map: (0..n).collect(),
            edges: BTreeMap::new(),
        }
    }

    /// Builds a graph from `(u, v, costs)` triples over 0-based vertices.
    pub fn from_edges<I>(n: usize, dim: usize, edges: I) -> Result<ParamGraph>
    where
        I: IntoIterator<Item = (usize, usize, Vec<i64>)>,
    {
        let mut g = ParamGraph::new(n, dim);
        for (u, v, c) in edges {
            g.add_edge(u, v, c)?;
        }
        Ok(g)
    }

    /// Adds an edge between the supervertices containing `u` and `v`,
    /// merging it into an existing parallel edge.
    pub fn add_edge(&mut self, u: usize, v: usize, cost: Vec<i64>) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if cost.len() != self.dim + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.dim + 1,
                got: cost.len(),
            });
        }
        let (a, b) = (self.vertex_map[u], self.vertex_map[v]);
        if a == b {
            return Err(Error::SelfLoop(u));
        }
        self.merge_edge((a.min(b), a.max(b)), &cost)
    }

    fn merge_edge(&mut self, key: (usize, usize), cost: &[i64]) -> Result<()> {
        match self.edges.get_mut(&key) {
            Some(existing) => {
                for (x, y) in existing.iter_mut().zip(cost) {
                    *x = x
                        .checked_add(*y)
                        .ok_or_else(|| Error::InvalidArgument("edge cost overflow".into()))?;
                }
            }
            None => {
                self.edges.insert(key, cost.to_vec());
            }
        }
        Ok(())
    }

    pub fn n_original(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(supervertex u, supervertex v, costs)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &[i64])> + '_ {
        self.edges.iter().map(|(&(u, v), c)| (u, v, c.as_slice()))
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn supervertex_of(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn is_live(&self, s: usize) -> bool {
        s < self.n && self.vertex_map[s] == s
    }

    pub fn live_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.vertex_map[v] == v).collect()
    }

    pub fn members(&self, s: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.vertex_map[v] == s).collect()
    }

    pub fn is_contracted(&self) -> bool {
        self.vertex_map.iter().enumerate().any(|(v, &s)| v != s)
    }

    /// Merges supervertices `u` and `v`, dropping the edges between them.
    pub fn contract(&self, u: usize, v: usize) -> Result<ParamGraph> {
        if u == v {
            return Err(Error::InvalidArgument(format!(
                "cannot contract supervertex {u} with itself"
            )));
        }
        for x in [u, v] {
            if !self.is_live(x) {
                return Err(Error::DeadSupervertex(x));
            }
        }
        let (keep, gone) = (u.min(v), u.max(v));
        let relabel = |s: usize| if s == gone { keep } else { s };
        let mut out = ParamGraph {
            n: self.n,
            dim: self.dim,
            vertex_map: self.vertex_map.iter().map(|&s| relabel(s)).collect(),
            edges: BTreeMap::new(),
        };
        for (&(a, b), c) in &self.edges {
            let (a, b) = (relabel(a), relabel(b));
            if a != b {
                out.merge_edge((a.min(b), a.max(b)), c)?;
            }
        }
        Ok(out)
    }

    /// The cut of original vertices whose supervertices lie in `s`.
    pub fn expand_cut(&self, s: &[usize]) -> Result<Cut> {
        let mut chosen = vec![false; self.n];
        for &x in s {
            if !self.is_live(x) {
                return Err(Error::DeadSupervertex(x));
            }
            chosen[x] = true;
        }
        Cut::new(self.n, (0..self.n).filter(|&v| chosen[self.vertex_map[v]]))
    }

    pub fn edge_cost_at(&self, cost: &[i64], mu: &[Rational]) -> Rational {
        let mut total = Rational::from_integer(cost[0]);
        for (c, m) in cost[1..].iter().zip(mu) {
            if *c != 0 {
                total += &(m * &Rational::from_integer(*c));
            }
        }
        total
    }

    fn check_mu(&self, mu: &[Rational]) -> Result<()> {
        if mu.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: mu.len(),
            });
        }
        Ok(())
    }

    /// `c_μ(δ(C))`. The cut must not split a supervertex.
    pub fn cut_cost_at(&self, cut: &Cut, mu: &[Rational]) -> Result<Rational> {
        self.check_mu(mu)?;
        check_cut_fits(cut, self.n, &self.vertex_map)?;
        Ok(self
            .edges
            .iter()
            .filter(|((u, v), _)| cut.separates(*u, *v))
            .map(|(_, c)| self.edge_cost_at(c, mu))
            .sum())
    }

    /// Rewrites every edge cost along `μ⁰ + λν` as `c̄⁰(e) + λ c̄¹(e)`.
    pub fn restrict_to_ray(&self, mu0: &[Rational], nu: &[i64]) -> Result<RayGraph> {
        self.check_mu(mu0)?;
        if nu.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: nu.len(),
            });
        }
        let edges = self
            .edges
            .iter()
            .map(|(&(u, v), c)| {
                let intercept = self.edge_cost_at(c, mu0);
                let slope: i128 = c[1..]
                    .iter()
                    .zip(nu)
                    .map(|(&ci, &ni)| ci as i128 * ni as i128)
                    .sum();
                RayEdge {
                    u,
                    v,
                    line: AffineLine::new(intercept, Rational::from_i128(slope, 1)),
                }
            })
            .collect();
        Ok(RayGraph {
            n: self.n,
            vertex_map: self.vertex_map.clone(),
            edges,
            mu0: mu0.to_vec(),
            nu: nu.to_vec(),
        })
    }
}

fn check_cut_fits(cut: &Cut, n: usize, vertex_map: &[usize]) -> Result<()> {
    if cut.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: cut.n(),
        });
    }
    for (v, &s) in vertex_map.iter().enumerate().take(n) {
        if cut.contains(v) != cut.contains(s) {
            return Err(Error::SplitsSupervertex(s));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayEdge {
    pub u: usize,
    pub v: usize,
    pub line: AffineLine,
}

/// A parametric graph restricted to the ray `μ⁰ + λν`, `λ ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayGraph {
    n: usize,
    vertex_map: Vec<usize>,
    edges: Vec<RayEdge>,
    mu0: Vec<Rational>,
    nu: Vec<i64>,
}

impl RayGraph {
    /// One-parameter graph given directly by its edge lines (`μ⁰ = 0`, `ν = 1`).
    /// Slopes must be integers.
    pub fn from_lines<I>(n: usize, edges: I) -> Result<RayGraph>
    where
        I: IntoIterator<Item = (usize, usize, AffineLine)>,
    {
        let mut merged: BTreeMap<(usize, usize), AffineLine> = BTreeMap::new();
        for (u, v, line) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !line.slope.is_integer() {
                return Err(Error::InvalidArgument(format!(
                    "edge slope {} is not an integer",
                    line.slope
                )));
            }
            *merged.entry((u.min(v), u.max(v))).or_default() += &line;
        }
        Ok(RayGraph {
            n,
            vertex_map: (0..n).collect(),
            edges: merged
                .into_iter()
                .map(|((u, v), line)| RayEdge { u, v, line })
                .collect(),
            mu0: vec![Rational::zero()],
            nu: vec![1],
        })
    }

    pub fn n_original(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[RayEdge] {
        &self.edges
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn live_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.vertex_map[v] == v).collect()
    }

    pub fn mu0(&self) -> &[Rational] {
        &self.mu0
    }

    pub fn nu(&self) -> &[i64] {
        &self.nu
    }

    /// `μ⁰ + λν`.
    pub fn point(&self, lambda: &Rational) -> Vec<Rational> {
        self.mu0
            .iter()
            .zip(&self.nu)
            .map(|(m, &n)| m + &(lambda * &Rational::from_integer(n)))
            .collect()
    }

    /// The same graph re-based at `μ⁰ + by·ν`.
    pub fn shifted(&self, by: &Rational) -> RayGraph {
        RayGraph {
            n: self.n,
            vertex_map: self.vertex_map.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| RayEdge {
                    u: e.u,
                    v: e.v,
                    line: e.line.shifted(by),
                })
                .collect(),
            mu0: self.point(by),
            nu: self.nu.clone(),
        }
    }

    /// `c̄⁰(C) + λ c̄¹(C)` summed over the edges crossing `cut`.
    pub fn cut_line(&self, cut: &Cut) -> Result<AffineLine> {
        check_cut_fits(cut, self.n, &self.vertex_map)?;
        let mut line = AffineLine::default();
        for e in &self.edges {
            if cut.separates(e.u, e.v) {
                line += &e.line;
            }
        }
        Ok(line)
    }

    pub fn cut_cost(&self, cut: &Cut, lambda: &Rational) -> Result<Rational> {
        Ok(self.cut_line(cut)?.eval(lambda))
    }

    /// `Σ_e |c̄⁰(e)|`, an upper bound on the next breakpoint's λ.
    pub fn lambda_bar(&self) -> Rational {
        self.edges.iter().map(|e| e.line.intercept.abs()).sum()
    }

    /// Largest λ keeping every edge cost nonnegative on `[0, λ]`; `None` when
    /// unbounded. Fails if some cost is negative at 0 or turns negative
    /// immediately after it.
    pub fn nonnegative_limit(&self) -> Result<Option<Rational>> {
        let mut cap: Option<Rational> = None;
        for e in &self.edges {
            let (c0, c1) = (&e.line.intercept, &e.line.slope);
            if c0.is_negative() || (c0.is_zero() && c1.is_negative()) {
                return Err(Error::negative(format!(
                    "on edge {}-{} at the ray origin",
                    e.u + 1,
                    e.v + 1
                )));
            }
            if c1.is_negative() {
                let root = -(c0 / c1);
                if cap.as_ref().is_none_or(|c| root < *c) {
                    cap = Some(root);
                }
            }
        }
        Ok(cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    pub(crate) fn t1() -> ParamGraph {
        ParamGraph::from_edges(
            3,
            1,
            [(0, 1, vec![0, 1]), (1, 2, vec![1, 0]), (0, 2, vec![2, -1])],
        )
        .unwrap()
    }

    #[test]
    fn restrict_identity_ray() {
        let ray = t1().restrict_to_ray(&[q(0)], &[1]).unwrap();
        let lines: Vec<_> = ray.edges().iter().map(|e| e.line.clone()).collect();
        assert_eq!(
            lines,
            vec![
                AffineLine::from_ints(0, 1),
                AffineLine::from_ints(2, -1),
                AffineLine::from_ints(1, 0)
            ]
        );
    }

    #[test]
    fn restrict_two_dimensional() {
        let g = ParamGraph::from_edges(2, 2, [(0, 1, vec![1, 2, 3])]).unwrap();
        let ray = g.restrict_to_ray(&[q(0), q(0)], &[1, 1]).unwrap();
        assert_eq!(ray.edges()[0].line, AffineLine::from_ints(1, 5));

        let g = ParamGraph::from_edges(2, 2, [(0, 1, vec![4, 1, -1])]).unwrap();
        let ray = g.restrict_to_ray(&[q(1), q(1)], &[1, -1]).unwrap();
        assert_eq!(ray.edges()[0].line, AffineLine::from_ints(4, 2));

        assert!(matches!(
            g.restrict_to_ray(&[q(1)], &[1, -1]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn contract_merges_parallel_edges() {
        let g = t1().contract(0, 1).unwrap();
        assert_eq!(g.live_vertices(), vec![0, 2]);
        let edges: Vec<_> = g.edges().map(|(u, v, c)| (u, v, c.to_vec())).collect();
        assert_eq!(edges, vec![(0, 2, vec![3, -1])]);
        // The source graph is untouched.
        assert_eq!(t1().num_edges(), 3);
    }

    #[test]
    fn contract_drops_self_loops() {
        let p3 = ParamGraph::from_edges(3, 1, [(0, 1, vec![1, 2]), (1, 2, vec![3, 0])]).unwrap();
        let g = p3.contract(1, 2).unwrap();
        let edges: Vec<_> = g.edges().map(|(u, v, c)| (u, v, c.to_vec())).collect();
        assert_eq!(edges, vec![(0, 1, vec![1, 2])]);
    }

    #[test]
    fn contract_rejects_degenerate_pairs() {
        assert!(t1().contract(0, 0).is_err());
        let g = t1().contract(0, 1).unwrap();
        assert_eq!(g.contract(1, 2), Err(Error::DeadSupervertex(1)));
    }

    #[test]
    fn cut_cost_examples() {
        let ray = t1().restrict_to_ray(&[q(0)], &[1]).unwrap();
        let c2 = Cut::new(3, [1]).unwrap();
        assert_eq!(ray.cut_line(&c2).unwrap(), AffineLine::from_ints(1, 1));
        let c1 = Cut::new(3, [0]).unwrap();
        assert_eq!(ray.cut_line(&c1).unwrap(), AffineLine::from_ints(2, 0));
        assert_eq!(Cut::new(3, [0, 1, 2]), Err(Error::TrivialCut));
        assert_eq!(Cut::new(3, []), Err(Error::TrivialCut));
    }

    #[test]
    fn expand_cut_canonicalizes() {
        let g = t1().contract(0, 1).unwrap();
        let cut = g.expand_cut(&[0]).unwrap();
        assert_eq!(cut.side(), &[2]);
        let cut = t1().expand_cut(&[2]).unwrap();
        assert_eq!(cut.side(), &[2]);
        assert_eq!(g.expand_cut(&[0, 2]), Err(Error::TrivialCut));
    }

    #[test]
    fn nonnegative_limit_of_t1() {
        let ray = t1().restrict_to_ray(&[q(0)], &[1]).unwrap();
        assert_eq!(ray.nonnegative_limit().unwrap(), Some(q(2)));
        assert_eq!(ray.lambda_bar(), q(3));
        let bad = RayGraph::from_lines(2, [(0, 1, AffineLine::from_ints(0, -1))]).unwrap();
        assert!(matches!(bad.nonnegative_limit(), Err(Error::NegativeCost { .. })));
    }

    fn random_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize, i64, i64)>)> {
        (3usize..=8).prop_flat_map(|n| {
            let edge = (0..n, 0..n, 0i64..20, -5i64..6);
            (Just(n), prop::collection::vec(edge, 1..20))
        })
    }

    proptest! {
        #[test]
        fn contraction_preserves_cut_costs(
            (n, raw) in random_graph(),
            merges in prop::collection::vec((0usize..8, 0usize..8), 0..6),
            side_bits in any::<u64>(),
            lambda_num in -20i64..20,
        ) {
            let edges = raw.into_iter().filter(|(u, v, _, _)| u != v).map(|(u, v, a, b)| (u, v, vec![a, b]));
            let original = ParamGraph::from_edges(n, 1, edges).unwrap();
            let mut g = original.clone();
            for (a, b) in merges {
                let (a, b) = (g.supervertex_of(a % n), g.supervertex_of(b % n));
                if a != b && g.live_vertices().len() > 2 {
                    g = g.contract(a, b).unwrap();
                }
            }
            let live = g.live_vertices();
            prop_assume!(live.len() >= 2);
            let chosen: Vec<usize> = live.iter().enumerate().filter(|(i, _)| side_bits >> i & 1 == 1).map(|(_, &s)| s).collect();
            prop_assume!(!chosen.is_empty() && chosen.len() < live.len());
            let cut = g.expand_cut(&chosen).unwrap();
            let mu = vec![Rational::new(lambda_num, 3)];
            prop_assert_eq!(g.cut_cost_at(&cut, &mu).unwrap(), original.cut_cost_at(&cut, &mu).unwrap());
        }

        #[test]
        fn ray_evaluation_matches_direct(
            c in prop::collection::vec(-20i64..20, 3),
            mu in prop::collection::vec((-10i64..10, 1i64..5), 2),
            nu in prop::collection::vec(-3i64..4, 2),
            lam in (0i64..50, 1i64..7),
        ) {
            let g = ParamGraph::from_edges(2, 2, [(0, 1, c.clone())]).unwrap();
            let mu0: Vec<Rational> = mu.iter().map(|&(p, q)| Rational::new(p, q)).collect();
            let ray = g.restrict_to_ray(&mu0, &nu).unwrap();
            let lambda = Rational::new(lam.0, lam.1);
            let direct = g.edge_cost_at(&c, &ray.point(&lambda));
            prop_assert_eq!(ray.edges()[0].line.eval(&lambda), direct);
        }
    }
}
