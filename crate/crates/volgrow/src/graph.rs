//! Weighted gadget graph of an assembled plan and the exact verifiers for
//! the distance/volume sandwich, annulus connectivity, and pointwise
//! doubling.
//!
//! Each placement component expands to a marked node plus a chain of depth
//! nodes at unit spacing carrying the per-depth volumes. Marked points of
//! glued pieces are joined by an edge of length `l` (`l t_j` on top of a Q
//! piece, `d_j` from an R to a side piece), and a unit body edge joins a
//! parent's deepest chain node to the child's marked node so that removing
//! single points never disconnects the model. All lengths and weights are
//! exact rationals; shortest paths are label-setting with rational keys.

use crate::assembly::{Anchor, AssemblyPlan, DiscreteGrowth};
use crate::exact;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    #[serde(with = "exact::serde_ratio")]
    pub weight: BigRational,
    pub r_value: u64,
    pub placement: usize,
    pub component: u64,
    /// 0 for the marked point, depth index otherwise.
    pub depth: usize,
    pub is_marked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    nodes: Vec<Node>,
    adj: Vec<Vec<(usize, BigRational)>>,
    origin: usize,
    unit_l: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceViolation {
    pub node: usize,
    pub r_value: u64,
    #[serde(with = "exact::serde_ratio")]
    pub distance: BigRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SandwichSide {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichViolation {
    pub n: usize,
    pub side: SandwichSide,
    #[serde(with = "exact::serde_ratio")]
    pub ball: BigRational,
    #[serde(with = "exact::serde_ratio")]
    pub z_bound: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingViolation {
    pub source: usize,
    #[serde(with = "exact::serde_ratio")]
    pub r: BigRational,
    #[serde(with = "exact::serde_ratio")]
    pub ratio: BigRational,
}

/// Sorted-by-distance index over one source's shortest paths; ball volumes
/// become prefix sums plus a binary search.
pub struct BallIndex {
    pub order: Vec<(BigRational, usize)>,
    prefix: Vec<BigRational>,
}

impl BallIndex {
    pub fn new(graph: &MetricGraph, distances: &[Option<BigRational>]) -> Self {
        let mut order: Vec<(BigRational, usize)> = distances
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.clone().map(|d| (d, i)))
            .collect();
        order.sort();
        let mut prefix = Vec::with_capacity(order.len() + 1);
        let mut acc = BigRational::zero();
        prefix.push(acc.clone());
        for (_, node) in &order {
            acc += &graph.nodes[*node].weight;
            prefix.push(acc.clone());
        }
        BallIndex { order, prefix }
    }

    pub fn volume(&self, radius: &BigRational) -> BigRational {
        let idx = self.order.partition_point(|(d, _)| d <= radius);
        self.prefix[idx].clone()
    }

    pub fn eccentricity(&self) -> BigRational {
        self.order
            .last()
            .map(|(d, _)| d.clone())
            .unwrap_or_else(BigRational::zero)
    }
}

impl MetricGraph {
    /// Expand a plan into its gadget graph.
    pub fn build(plan: &AssemblyPlan) -> Self {
        let mut nodes: Vec<Node> = Vec::new();
        let mut adj: Vec<Vec<(usize, BigRational)>> = Vec::new();
        // marked[placement][component], chain_end likewise.
        let mut marked: Vec<Vec<usize>> = Vec::new();
        let mut chain_end: Vec<Vec<usize>> = Vec::new();
        let one = BigRational::one();
        for (pi, p) in plan.placements.iter().enumerate() {
            let piece = &plan.pieces[p.piece];
            let comps = match p.anchor {
                Anchor::Level { .. } => 1,
                Anchor::Vertices { .. } => piece.components.max(1),
            };
            let split = BigRational::from_integer(BigInt::from(comps));
            let mut m_row = Vec::with_capacity(comps as usize);
            let mut e_row = Vec::with_capacity(comps as usize);
            for c in 0..comps {
                let y = nodes.len();
                nodes.push(Node {
                    weight: BigRational::zero(),
                    r_value: p.offset,
                    placement: pi,
                    component: c,
                    depth: 0,
                    is_marked: true,
                });
                adj.push(Vec::new());
                let mut prev = y;
                for (i, v) in piece.profile.iter().enumerate() {
                    let id = nodes.len();
                    nodes.push(Node {
                        weight: v / &split,
                        r_value: p.offset + i as u64 + 1,
                        placement: pi,
                        component: c,
                        depth: i + 1,
                        is_marked: false,
                    });
                    adj.push(Vec::new());
                    adj[prev].push((id, one.clone()));
                    adj[id].push((prev, one.clone()));
                    prev = id;
                }
                m_row.push(y);
                e_row.push(prev);
            }
            marked.push(m_row);
            chain_end.push(e_row);
        }
        for (pi, p) in plan.placements.iter().enumerate() {
            for at in &p.attach {
                let pc = (at.parent_component as usize).min(marked[at.parent].len() - 1);
                let cc = (at.child_component as usize).min(marked[pi].len() - 1);
                let a = marked[at.parent][pc];
                let b = marked[pi][cc];
                adj[a].push((b, at.length.clone()));
                adj[b].push((a, at.length.clone()));
                // Body edge: parent's deepest chain node to the child's
                // marked point; keeps annuli connected without shortcuts.
                let e = chain_end[at.parent][pc];
                if e != a {
                    adj[e].push((b, one.clone()));
                    adj[b].push((e, one.clone()));
                }
            }
        }
        MetricGraph {
            nodes,
            adj,
            origin: 0,
            unit_l: plan.l,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn unit_l(&self) -> u64 {
        self.unit_l
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn total_weight(&self) -> BigRational {
        self.nodes.iter().map(|n| n.weight.clone()).sum()
    }

    /// Exact single-source shortest paths; `None` marks unreachable nodes.
    pub fn distances(&self, source: usize) -> Vec<Option<BigRational>> {
        let mut dist: Vec<Option<BigRational>> = vec![None; self.nodes.len()];
        let mut heap: BinaryHeap<Reverse<(BigRational, usize)>> = BinaryHeap::new();
        dist[source] = Some(BigRational::zero());
        heap.push(Reverse((BigRational::zero(), source)));
        let mut done = vec![false; self.nodes.len()];
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for (v, len) in &self.adj[u] {
                if done[*v] {
                    continue;
                }
                let cand = &d + len;
                let better = match &dist[*v] {
                    Some(cur) => &cand < cur,
                    None => true,
                };
                if better {
                    dist[*v] = Some(cand.clone());
                    heap.push(Reverse((cand, *v)));
                }
            }
        }
        dist
    }

    pub fn origin_index(&self) -> BallIndex {
        let d = self.distances(self.origin);
        BallIndex::new(self, &d)
    }

    pub fn is_connected(&self) -> bool {
        self.distances(self.origin).iter().all(|d| d.is_some())
    }

    /// Total weight within shortest-path distance `radius` of the origin.
    pub fn ball_volume(&self, radius: &BigRational) -> BigRational {
        self.origin_index().volume(radius)
    }

    /// `r(x)/3 <= d(o,x) <= 3 r(x)` for every node with `r(x) >= r_min`.
    pub fn check_distance_bounds(&self, r_min: u64) -> Vec<DistanceViolation> {
        let dist = self.distances(self.origin);
        let three = BigRational::from_integer(BigInt::from(3));
        let mut out = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if n.r_value < r_min {
                continue;
            }
            let Some(d) = &dist[i] else {
                out.push(DistanceViolation {
                    node: i,
                    r_value: n.r_value,
                    distance: BigRational::from_integer(BigInt::from(-1)),
                });
                continue;
            };
            let r = BigRational::from_integer(BigInt::from(n.r_value));
            if d * &three < r || d > &(r * &three) {
                out.push(DistanceViolation {
                    node: i,
                    r_value: n.r_value,
                    distance: d.clone(),
                });
            }
        }
        out
    }

    /// `z(floor(n/3)) <= vol B(o, n) <= z(3n)` for integer `n` while `3n`
    /// stays inside `z`'s grid.
    pub fn check_sandwich(&self, z: &DiscreteGrowth, horizon: usize) -> Vec<SandwichViolation> {
        let index = self.origin_index();
        let mut out = Vec::new();
        for n in 0..=horizon {
            if 3 * n > z.horizon() {
                break;
            }
            let ball = index.volume(&BigRational::from_integer(BigInt::from(n)));
            let lo = z.at(n / 3);
            let hi = z.at(3 * n);
            if &ball < lo {
                out.push(SandwichViolation {
                    n,
                    side: SandwichSide::Lower,
                    ball: ball.clone(),
                    z_bound: lo.clone(),
                });
            }
            if &ball > hi {
                out.push(SandwichViolation {
                    n,
                    side: SandwichSide::Upper,
                    ball,
                    z_bound: hi.clone(),
                });
            }
        }
        out
    }

    /// Connected components of the subgraph induced on
    /// `{x : r_in < d(o,x) <= r_out}`.
    pub fn annulus_components(&self, r_in: &BigRational, r_out: &BigRational) -> usize {
        let dist = self.distances(self.origin);
        let in_band = |i: usize| -> bool {
            match &dist[i] {
                Some(d) => d > r_in && d <= r_out,
                None => false,
            }
        };
        let mut seen = vec![false; self.nodes.len()];
        let mut components = 0;
        for start in 0..self.nodes.len() {
            if seen[start] || !in_band(start) {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                for (v, _) in &self.adj[u] {
                    if !seen[*v] && in_band(*v) {
                        seen[*v] = true;
                        stack.push(*v);
                    }
                }
            }
        }
        components
    }

    /// Violations of `vol(x, 2r) <= A vol(x, r)` over half-integer radii
    /// `r in (r0, diameter/2]`. Scans every node when the graph has at most
    /// `scan_limit` nodes, otherwise the origin and marked nodes only (the
    /// scanned set is reported with each violation's source).
    pub fn pointwise_doubling(
        &self,
        r0: &BigRational,
        a: &BigRational,
        scan_limit: usize,
    ) -> Vec<DoublingViolation> {
        let sources: Vec<usize> = if self.nodes.len() <= scan_limit {
            (0..self.nodes.len()).collect()
        } else {
            std::iter::once(self.origin)
                .chain(
                    self.nodes
                        .iter()
                        .enumerate()
                        .filter(|(_, n)| n.is_marked)
                        .map(|(i, _)| i),
                )
                .collect()
        };
        let mut indexes: Vec<(usize, BallIndex)> = Vec::with_capacity(sources.len());
        let mut diameter = BigRational::zero();
        for &s in &sources {
            let d = self.distances(s);
            let idx = BallIndex::new(self, &d);
            let ecc = idx.eccentricity();
            if ecc > diameter {
                diameter = ecc;
            }
            indexes.push((s, idx));
        }
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let r_cap = &diameter * &half;
        let mut out = Vec::new();
        for (s, idx) in &indexes {
            // First half-integer strictly above r0.
            let mut r = (r0 * BigRational::from_integer(BigInt::from(2)))
                .floor()
                / BigRational::from_integer(BigInt::from(2))
                + &half;
            while r <= r_cap {
                let small = idx.volume(&r);
                if !small.is_zero() {
                    let big = idx.volume(&(&r * BigRational::from_integer(BigInt::from(2))));
                    if &big > &(a * &small) {
                        out.push(DoublingViolation {
                            source: *s,
                            r: r.clone(),
                            ratio: big / small,
                        });
                    }
                }
                r += &half;
            }
        }
        out
    }

    /// Largest doubling ratio seen at the origin over half-integer radii
    /// `r in (r0, r_max]`; the fail-side witness for doubling tests.
    pub fn origin_doubling_sup(&self, r0: &BigRational, r_max: &BigRational) -> BigRational {
        let idx = self.origin_index();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let mut r = (r0 * BigRational::from_integer(BigInt::from(2))).floor()
            / BigRational::from_integer(BigInt::from(2))
            + &half;
        let mut sup = BigRational::zero();
        while &r <= r_max {
            let small = idx.volume(&r);
            if !small.is_zero() {
                let big = idx.volume(&(&r * BigRational::from_integer(BigInt::from(2))));
                let ratio = big / small;
                if ratio > sup {
                    sup = ratio;
                }
            }
            r += &half;
        }
        sup
    }

    /// Edge list CSV: `a,b,length_exact,length_approx`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,length_exact,length_approx\n");
        for (u, row) in self.adj.iter().enumerate() {
            for (v, len) in row {
                if u < *v {
                    out.push_str(&format!(
                        "{u},{v},{},{}\n",
                        exact::ratio_to_string(len),
                        exact::ratio_to_f64(len)
                    ));
                }
            }
        }
        out
    }

    pub fn ball_table_csv(&self, r_max: u64) -> String {
        let index = self.origin_index();
        let mut out = String::from("r,vol_exact,vol_approx\n");
        for r in 0..=r_max {
            let v = index.volume(&BigRational::from_integer(BigInt::from(r)));
            out.push_str(&format!(
                "{r},{},{}\n",
                exact::ratio_to_string(&v),
                exact::ratio_to_f64(&v)
            ));
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gadget {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let shape = if n.is_marked { "box" } else { "point" };
            out.push_str(&format!("  n{i} [shape={shape} label=\"r{}\"];\n", n.r_value));
        }
        for (u, row) in self.adj.iter().enumerate() {
            for (v, len) in row {
                if u < *v {
                    out.push_str(&format!(
                        "  n{u} -- n{v} [label=\"{}\"];\n",
                        exact::ratio_to_string(len)
                    ));
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// Adversarial helper for negative tests: stretch every edge incident to
    /// a node in place.
    pub fn stretch_node_edges(&mut self, node: usize, factor: u64) {
        let f = BigRational::from_integer(BigInt::from(factor));
        let neighbours: Vec<usize> = self.adj[node].iter().map(|(v, _)| *v).collect();
        for (_, len) in self.adj[node].iter_mut() {
            *len *= &f;
        }
        for nb in neighbours {
            for (v, len) in self.adj[nb].iter_mut() {
                if *v == node {
                    *len *= &f;
                }
            }
        }
    }

    /// Scale one node's weight (negative-control for sandwich tests).
    pub fn scale_weight(&mut self, node: usize, num: u64, den: u64) {
        let f = BigRational::new(BigInt::from(num), BigInt::from(den));
        self.nodes[node].weight *= f;
    }
}
