//! Dense working copies of (contracted) graphs.
//!
//! Every contraction-based routine owns one of these. Slots are ordered by
//! their smallest original member, and merging always keeps the lower slot,
//! so slot order and supervertex-label order coincide throughout.

use std::ops::AddAssign;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numeric::{AffineLine, Rational};
use crate::pgraph::{Cut, ParamGraph, RayGraph};

#[derive(Clone, Debug)]
pub struct DenseMinor<W> {
    n_original: usize,
    size: usize,
    members: Vec<Vec<usize>>,
    alive: Vec<bool>,
    live: usize,
    adj: Vec<Option<W>>,
}

impl<W> DenseMinor<W>
where
    W: Clone + Zero + for<'a> AddAssign<&'a W>,
{
    /// `groups` are the original members of each supervertex, sorted by
    /// their smallest member; `edges` reference group indices.
    fn build(n_original: usize, groups: Vec<Vec<usize>>, edges: impl IntoIterator<Item = (usize, usize, W)>) -> Self {
        let size = groups.len();
        let mut adj: Vec<Option<W>> = vec![None; size * size];
        for (i, j, w) in edges {
            for (a, b) in [(i, j), (j, i)] {
                match &mut adj[a * size + b] {
                    Some(x) => *x += &w,
                    slot @ None => *slot = Some(w.clone()),
                }
            }
        }
        DenseMinor {
            n_original,
            size,
            live: size,
            alive: vec![true; size],
            members: groups,
            adj,
        }
    }

    /// Simple weighted graph over `n` vertices; parallel edges are summed.
    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, W)]) -> Result<Self> {
        for &(u, v, _) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
        }
        let groups = (0..n).map(|v| vec![v]).collect();
        Ok(Self::build(n, groups, edges.iter().cloned()))
    }

    pub fn n_original(&self) -> usize {
        self.n_original
    }

    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn is_alive(&self, slot: usize) -> bool {
        self.alive[slot]
    }

    pub fn live_slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&i| self.alive[i])
    }

    pub fn slot_count(&self) -> usize {
        self.size
    }

    pub fn members(&self, slot: usize) -> &[usize] {
        &self.members[slot]
    }

    /// Supervertex label: the smallest original member.
    pub fn label(&self, slot: usize) -> usize {
        self.members[slot][0]
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<&W> {
        self.adj[i * self.size + j].as_ref()
    }

    /// Live neighbours of `slot` with their aggregate weights.
    pub fn neighbours(&self, slot: usize) -> impl Iterator<Item = (usize, &W)> + '_ {
        let row = &self.adj[slot * self.size..(slot + 1) * self.size];
        row.iter()
            .enumerate()
            .filter_map(move |(j, w)| w.as_ref().filter(|_| self.alive[j]).map(|w| (j, w)))
    }

    /// Live edges `(i, j, w)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &W)> + '_ {
        self.live_slots()
            .flat_map(move |i| self.neighbours(i).filter(move |(j, _)| *j > i).map(move |(j, w)| (i, j, w)))
    }

    pub fn degree(&self, slot: usize) -> W {
        let mut d = W::zero();
        for (_, w) in self.neighbours(slot) {
            d += w;
        }
        d
    }

    /// Merges the two slots into the lower one, summing parallel edges.
    pub fn merge(&mut self, a: usize, b: usize) {
        assert!(a != b && self.alive[a] && self.alive[b], "invalid merge");
        let (keep, gone) = (a.min(b), a.max(b));
        let n = self.size;
        for j in 0..n {
            if j == keep || j == gone || !self.alive[j] {
                continue;
            }
            if let Some(w) = self.adj[gone * n + j].take() {
                self.adj[j * n + gone] = None;
                match &mut self.adj[keep * n + j] {
                    Some(x) => *x += &w,
                    slot @ None => *slot = Some(w),
                }
                self.adj[j * n + keep] = self.adj[keep * n + j].clone();
            }
        }
        self.adj[keep * n + gone] = None;
        self.adj[gone * n + keep] = None;
        let moved = std::mem::take(&mut self.members[gone]);
        let mut merged = Vec::with_capacity(self.members[keep].len() + moved.len());
        let (mut x, mut y) = (self.members[keep].iter().peekable(), moved.iter().peekable());
        while let (Some(&&p), Some(&&q)) = (x.peek(), y.peek()) {
            if p < q {
                merged.push(p);
                x.next();
            } else {
                merged.push(q);
                y.next();
            }
        }
        merged.extend(x);
        merged.extend(y);
        self.members[keep] = merged;
        self.alive[gone] = false;
        self.live -= 1;
    }

    /// The original-vertex cut `δ(slot)`.
    pub fn singleton_cut(&self, slot: usize) -> Cut {
        self.cut_of_slots(&[slot])
    }

    pub fn cut_of_slots(&self, slots: &[usize]) -> Cut {
        let mut side = vec![false; self.n_original];
        for &s in slots {
            for &v in &self.members[s] {
                side[v] = true;
            }
        }
        Cut::from_membership(&side)
    }

    /// Same structure with every weight mapped through `f`.
    pub fn map<V, F>(&self, mut f: F) -> DenseMinor<V>
    where
        F: FnMut(&W) -> V,
    {
        DenseMinor {
            n_original: self.n_original,
            size: self.size,
            members: self.members.clone(),
            alive: self.alive.clone(),
            live: self.live,
            adj: self.adj.iter().map(|w| w.as_ref().map(&mut f)).collect(),
        }
    }

    /// Shrinks storage to the live slots.
    pub fn compacted(&self) -> Self {
        let live: Vec<usize> = self.live_slots().collect();
        let k = live.len();
        let mut adj = vec![None; k * k];
        for (a, &i) in live.iter().enumerate() {
            for (b, &j) in live.iter().enumerate() {
                adj[a * k + b] = self.adj[i * self.size + j].clone();
            }
        }
        DenseMinor {
            n_original: self.n_original,
            size: k,
            members: live.iter().map(|&i| self.members[i].clone()).collect(),
            alive: vec![true; k],
            live: k,
            adj,
        }
    }
}

fn supervertex_groups(n: usize, vertex_map: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut slot_of = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (v, &s) in vertex_map.iter().enumerate().take(n) {
        if slot_of[s] == usize::MAX {
            slot_of[s] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot_of[s]].push(v);
    }
    (groups, slot_of)
}

impl DenseMinor<AffineLine> {
    pub fn from_ray(ray: &RayGraph) -> Self {
        let (groups, slot_of) = supervertex_groups(ray.n_original(), ray.vertex_map());
        let edges = ray
            .edges()
            .iter()
            .map(|e| (slot_of[e.u], slot_of[e.v], e.line.clone()));
        Self::build(ray.n_original(), groups, edges)
    }

    /// Edge weights evaluated at `lambda`.
    pub fn at(&self, lambda: &Rational) -> DenseMinor<Rational> {
        self.map(|l| l.eval(lambda))
    }
}

impl DenseMinor<Rational> {
    /// Edge costs `c_μ` of a (possibly contracted) parametric graph.
    pub fn from_param(g: &ParamGraph, mu: &[Rational]) -> Result<Self> {
        if mu.len() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                got: mu.len(),
            });
        }
        let (groups, slot_of) = supervertex_groups(g.n_original(), g.vertex_map());
        let edges: Vec<_> = g
            .edges()
            .map(|(u, v, c)| (slot_of[u], slot_of[v], g.edge_cost_at(c, mu)))
            .collect();
        Ok(Self::build(g.n_original(), groups, edges))
    }
}
