//! Rooted trees with distinguished trunk rays, at most two branches per
//! vertex, and per-level counts matching a growth function's increments.
//!
//! Side-branch allocation is newest-first: when a level needs more vertices
//! than the trunk provides, child slots are filled starting from the most
//! recently created branch, so old branches only grow when every newer one
//! is saturated. Building twice from identical inputs yields identical
//! parent arrays.

use crate::assembly::LevelSet;
use crate::growth::GrowthFunction;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("infeasible growth at level {level}: need {need} vertices, capacity {capacity}")]
    InfeasibleGrowth {
        level: usize,
        need: String,
        capacity: String,
    },
    #[error("vertex {0} lies on a trunk")]
    OnTrunk(usize),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("level count at {level} exceeds the build limit {limit}")]
    TooLarge { level: usize, limit: usize },
}

/// Per-level build limit; protects against accidentally exponential inputs.
pub const MAX_LEVEL_COUNT: usize = 4_000_000;

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub level: usize,
    pub parent: Option<VertexId>,
    pub on_trunk: bool,
    pub trunk_id: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleTree {
    vertices: Vec<Vertex>,
    /// Start index of each level in `vertices`; levels are contiguous.
    level_start: Vec<usize>,
    children: Vec<Vec<VertexId>>,
    horizon: usize,
    trunk_count: u32,
}

impl AdmissibleTree {
    /// Build a single-trunk tree with per-level counts equal to `w`'s
    /// increments and no side branch on trunk vertices at levels in `s`.
    pub fn build(w: &GrowthFunction, s: &LevelSet, horizon: usize) -> Result<Self, TreeError> {
        let horizon = horizon.min(w.horizon());
        let mut vertices = vec![Vertex {
            level: 0,
            parent: None,
            on_trunk: true,
            trunk_id: Some(0),
        }];
        let mut level_start = vec![0usize];
        // Previous level bookkeeping: trunk vertex id + non-trunk ids in creation order.
        let mut prev_trunk: VertexId = 0;
        let mut prev_side: Vec<VertexId> = Vec::new();
        for level in 1..=horizon {
            level_start.push(vertices.len());
            let need_big: BigInt = w.value(level) - w.value(level - 1);
            let need = need_big.to_usize().ok_or(TreeError::TooLarge {
                level,
                limit: MAX_LEVEL_COUNT,
            })?;
            if need > MAX_LEVEL_COUNT {
                return Err(TreeError::TooLarge {
                    level,
                    limit: MAX_LEVEL_COUNT,
                });
            }
            let trunk_side_slot = if s.contains(level - 1) { 0usize } else { 1 };
            let capacity = 1 + trunk_side_slot + 2 * prev_side.len();
            if need < 1 || need > capacity {
                return Err(TreeError::InfeasibleGrowth {
                    level,
                    need: need.to_string(),
                    capacity: capacity.to_string(),
                });
            }
            // Trunk continuation first.
            let trunk_new = vertices.len();
            vertices.push(Vertex {
                level,
                parent: Some(prev_trunk),
                on_trunk: true,
                trunk_id: Some(0),
            });
            let mut new_side = Vec::with_capacity(need - 1);
            let mut remaining = need - 1;
            // Newest-first slot order: the trunk's fresh side slot, then the
            // previous level's side vertices from newest to oldest, two slots each.
            if remaining > 0 && trunk_side_slot == 1 {
                new_side.push(vertices.len());
                vertices.push(Vertex {
                    level,
                    parent: Some(prev_trunk),
                    on_trunk: false,
                    trunk_id: None,
                });
                remaining -= 1;
            }
            'alloc: for &p in prev_side.iter().rev() {
                for _slot in 0..2 {
                    if remaining == 0 {
                        break 'alloc;
                    }
                    new_side.push(vertices.len());
                    vertices.push(Vertex {
                        level,
                        parent: Some(p),
                        on_trunk: false,
                        trunk_id: None,
                    });
                    remaining -= 1;
                }
            }
            debug_assert_eq!(remaining, 0);
            prev_trunk = trunk_new;
            prev_side = new_side;
        }
        Ok(Self::finish(vertices, level_start, horizon, 1))
    }

    /// Assemble a tree from explicit per-level parent lists.
    ///
    /// `levels[j]` holds, for each vertex at level `j+1` in order, the index
    /// of its parent *within level `j`*. Trunk rays are then assigned
    /// according to `trunks`.
    pub fn from_level_parents(
        level_parents: &[Vec<usize>],
        trunks: TrunkAssign,
    ) -> Result<Self, TreeError> {
        let mut vertices = vec![Vertex {
            level: 0,
            parent: None,
            on_trunk: false,
            trunk_id: None,
        }];
        let mut level_start = vec![0usize];
        let mut prev_ids: Vec<VertexId> = vec![0];
        for (j, parents) in level_parents.iter().enumerate() {
            level_start.push(vertices.len());
            if parents.is_empty() {
                return Err(TreeError::MalformedTree(format!("empty level {}", j + 1)));
            }
            let mut ids = Vec::with_capacity(parents.len());
            for &p in parents {
                if p >= prev_ids.len() {
                    return Err(TreeError::MalformedTree(format!(
                        "level {}: parent index {} out of range",
                        j + 1,
                        p
                    )));
                }
                ids.push(vertices.len());
                vertices.push(Vertex {
                    level: j + 1,
                    parent: Some(prev_ids[p]),
                    on_trunk: false,
                    trunk_id: None,
                });
            }
            prev_ids = ids;
        }
        let horizon = level_parents.len();
        let mut tree = Self::finish(vertices, level_start, horizon, 0);
        tree.assign_trunks(trunks)?;
        Ok(tree)
    }

    fn finish(
        vertices: Vec<Vertex>,
        level_start: Vec<usize>,
        horizon: usize,
        trunk_count: u32,
    ) -> Self {
        let mut children = vec![Vec::new(); vertices.len()];
        for (id, v) in vertices.iter().enumerate() {
            if let Some(p) = v.parent {
                children[p].push(id);
            }
        }
        Self {
            vertices,
            level_start,
            children,
            horizon,
            trunk_count,
        }
    }

    fn assign_trunks(&mut self, trunks: TrunkAssign) -> Result<(), TreeError> {
        let paths: Vec<Vec<VertexId>> = match trunks {
            TrunkAssign::SingleLeftmost => {
                vec![self.leftmost_deep_path()]
            }
            TrunkAssign::ByEnds { max_ends } => {
                let mut leaves = self.end_representatives();
                if leaves.len() > max_ends {
                    leaves.truncate(1);
                }
                leaves.iter().map(|&leaf| self.root_path(leaf)).collect()
            }
            TrunkAssign::ExplicitLeaves(leaves) => {
                leaves.iter().map(|&leaf| self.root_path(leaf)).collect()
            }
        };
        let mut count = 0u32;
        for (tid, path) in paths.iter().enumerate() {
            count += 1;
            for &v in path {
                if self.vertices[v].trunk_id.is_none() {
                    self.vertices[v].trunk_id = Some(tid as u32);
                }
                self.vertices[v].on_trunk = true;
            }
        }
        self.trunk_count = count.max(1);
        if self.vertices.is_empty() || !self.vertices[0].on_trunk {
            // Root always belongs to trunk 0.
            if let Some(root) = self.vertices.get_mut(0) {
                root.on_trunk = true;
                root.trunk_id = Some(0);
            }
        }
        Ok(())
    }

    /// Deepest path from the root choosing the first (oldest) child at ties.
    fn leftmost_deep_path(&self) -> Vec<VertexId> {
        let mut depth = vec![0usize; self.vertices.len()];
        for id in (0..self.vertices.len()).rev() {
            depth[id] = self.children[id]
                .iter()
                .map(|&c| depth[c] + 1)
                .max()
                .unwrap_or(0);
        }
        let mut path = vec![0];
        let mut cur = 0;
        while let Some(&next) = self.children[cur].iter().max_by_key(|&&c| {
            // Prefer the deepest subtree; tie-break toward the lowest id.
            (depth[c], std::cmp::Reverse(c))
        }) {
            if self.children[cur].is_empty() {
                break;
            }
            path.push(next);
            cur = next;
        }
        path
    }

    /// One horizon-level leaf per end, where ends are the connected
    /// components of the sub-forest above level `horizon/2` that reach the
    /// horizon. This mirrors counting unbounded complement components of a
    /// ball around the root, at the only scale a finite tree offers.
    pub fn end_representatives(&self) -> Vec<VertexId> {
        let cut = self.horizon / 2;
        // reach[v]: subtree of v contains a horizon-level vertex.
        let mut reach = vec![false; self.vertices.len()];
        for id in (0..self.vertices.len()).rev() {
            if self.vertices[id].level == self.horizon {
                reach[id] = true;
            }
            for &c in &self.children[id] {
                if reach[c] {
                    reach[id] = true;
                }
            }
        }
        // Component representatives: vertices at level cut+1 with reach,
        // mapped to their leftmost horizon descendant.
        let mut reps = Vec::new();
        for id in 0..self.vertices.len() {
            if self.vertices[id].level == cut + 1 && reach[id] {
                let mut cur = id;
                while self.vertices[cur].level < self.horizon {
                    let next = self.children[cur].iter().copied().find(|&c| reach[c]);
                    match next {
                        Some(c) => cur = c,
                        None => break,
                    }
                }
                reps.push(cur);
            }
        }
        reps
    }

    fn root_path(&self, leaf: VertexId) -> Vec<VertexId> {
        let mut path = Vec::new();
        let mut cur = Some(leaf);
        while let Some(v) = cur {
            path.push(v);
            cur = self.vertices[v].parent;
        }
        path.reverse();
        path
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn trunk_count(&self) -> u32 {
        self.trunk_count
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn children(&self, id: VertexId) -> &[VertexId] {
        &self.children[id]
    }

    pub fn level_count(&self, level: usize) -> usize {
        let start = self.level_start[level];
        let end = if level + 1 < self.level_start.len() {
            self.level_start[level + 1]
        } else {
            self.vertices.len()
        };
        end - start
    }

    pub fn level_ids(&self, level: usize) -> std::ops::Range<usize> {
        let start = self.level_start[level];
        let end = if level + 1 < self.level_start.len() {
            self.level_start[level + 1]
        } else {
            self.vertices.len()
        };
        start..end
    }

    /// Trunk vertex of the given trunk at a level, if present.
    pub fn trunk_vertex(&self, trunk: u32, level: usize) -> Option<VertexId> {
        self.level_ids(level)
            .find(|&id| self.vertices[id].on_trunk && self.vertices[id].trunk_id == Some(trunk))
    }

    /// Number of vertices within level `n` (the tree's own ball count).
    pub fn ball_count(&self, n: usize) -> BigInt {
        let n = n.min(self.horizon);
        let mut acc = 0usize;
        for level in 0..=n {
            acc += self.level_count(level);
        }
        BigInt::from(acc)
    }

    /// Level of the trunk vertex from which `x`'s branch departs: the level
    /// of the deepest trunk ancestor of `x`.
    pub fn departure_level(&self, x: VertexId) -> Result<usize, TreeError> {
        if self.vertices[x].on_trunk {
            return Err(TreeError::OnTrunk(x));
        }
        let mut cur = x;
        while let Some(p) = self.vertices[cur].parent {
            if self.vertices[p].on_trunk {
                return Ok(self.vertices[p].level);
            }
            cur = p;
        }
        Err(TreeError::MalformedTree(format!(
            "vertex {x} has no trunk ancestor"
        )))
    }

    /// JSON per the tree schema: `{"levels":[{"count","parents","trunk"}...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut levels = Vec::new();
        for level in 0..=self.horizon {
            let range = self.level_ids(level);
            let parents: Vec<serde_json::Value> = if level == 0 {
                Vec::new()
            } else {
                let prev = self.level_start[level - 1];
                range
                    .clone()
                    .map(|id| {
                        serde_json::Value::from(self.vertices[id].parent.expect("non-root") - prev)
                    })
                    .collect()
            };
            let trunk: Vec<serde_json::Value> = range
                .clone()
                .map(|id| match self.vertices[id].trunk_id {
                    Some(t) if self.vertices[id].on_trunk => serde_json::Value::from(t),
                    _ => serde_json::Value::Null,
                })
                .collect();
            levels.push(serde_json::json!({
                "count": range.len(),
                "parents": parents,
                "trunk": trunk,
            }));
        }
        serde_json::json!({ "levels": levels })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, TreeError> {
        let levels = value
            .get("levels")
            .and_then(|l| l.as_array())
            .ok_or_else(|| TreeError::MalformedTree("missing levels".to_string()))?;
        if levels.is_empty() {
            return Err(TreeError::MalformedTree("no levels".to_string()));
        }
        let mut level_parents = Vec::new();
        let mut trunk_leaves: Vec<Vec<Option<u32>>> = Vec::new();
        for (j, lvl) in levels.iter().enumerate() {
            let parents: Vec<usize> = lvl
                .get("parents")
                .and_then(|p| p.as_array())
                .map(|arr| {
                    arr.iter()
                        .map(|v| v.as_u64().unwrap_or(u64::MAX) as usize)
                        .collect()
                })
                .unwrap_or_default();
            let trunk: Vec<Option<u32>> = lvl
                .get("trunk")
                .and_then(|p| p.as_array())
                .map(|arr| arr.iter().map(|v| v.as_u64().map(|t| t as u32)).collect())
                .unwrap_or_default();
            trunk_leaves.push(trunk);
            if j > 0 {
                level_parents.push(parents);
            }
        }
        let mut tree = Self::from_level_parents(&level_parents, TrunkAssign::SingleLeftmost)?;
        // Restore explicit trunk markings when the file carries them.
        let mut any = false;
        for (level, marks) in trunk_leaves.iter().enumerate() {
            for (offset, mark) in marks.iter().enumerate() {
                if let Some(t) = mark {
                    let id = tree.level_start[level] + offset;
                    tree.vertices[id].on_trunk = true;
                    tree.vertices[id].trunk_id = Some(*t);
                    any = true;
                }
            }
        }
        if any {
            for v in tree.vertices.iter_mut() {
                if v.trunk_id.is_none() {
                    v.on_trunk = false;
                }
            }
            tree.trunk_count = tree
                .vertices
                .iter()
                .filter_map(|v| v.trunk_id)
                .max()
                .map(|t| t + 1)
                .unwrap_or(1);
        }
        Ok(tree)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n  rankdir=TB;\n");
        for (id, v) in self.vertices.iter().enumerate() {
            let shape = if v.on_trunk { "box" } else { "circle" };
            out.push_str(&format!(
                "  n{id} [shape={shape} label=\"{id}@{}\"];\n",
                v.level
            ));
        }
        for (id, v) in self.vertices.iter().enumerate() {
            if let Some(p) = v.parent {
                out.push_str(&format!("  n{p} -> n{id};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// How trunk rays are chosen for trees given by explicit parent lists.
#[derive(Debug, Clone)]
pub enum TrunkAssign {
    /// One trunk along the leftmost deepest ray (one-ended inputs).
    SingleLeftmost,
    /// One trunk per detected end, capped; above the cap a single trunk is used.
    ByEnds { max_ends: usize },
    /// Explicit horizon-level leaves, one per trunk.
    ExplicitLeaves(Vec<VertexId>),
}

/// Per-level profile of an input tree: vertex counts, degree bound, and
/// levels where finite branches terminate below the horizon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndsLayout {
    pub per_level: Vec<u64>,
    pub degree_bound: Option<u32>,
    pub max_degree: u32,
    /// (level, count) pairs for leaves strictly below the horizon.
    pub finite_branch_levels: BTreeMap<usize, u64>,
    /// Ends detected at the half-horizon scale.
    pub ray_count: usize,
    /// Distinct boundary-sphere counts needed by a piece catalog: for a
    /// vertex of degree d this is d (root) or d, with d = children + parent.
    pub boundary_counts_needed: Vec<u32>,
}

impl EndsLayout {
    pub fn f(&self, j: usize) -> u64 {
        self.per_level.get(j).copied().unwrap_or(0)
    }

    /// Trivial one-ended layout with one vertex per level.
    pub fn single_ray(horizon: usize) -> Self {
        EndsLayout {
            per_level: vec![1; horizon + 1],
            degree_bound: Some(2),
            max_degree: 2,
            finite_branch_levels: BTreeMap::new(),
            ray_count: 1,
            boundary_counts_needed: vec![1, 2],
        }
    }

    /// Layout with `k^j` vertices at level `j` (degree-bounded connected sums).
    pub fn power_layout(k: u32, horizon: usize) -> Self {
        let mut per_level = Vec::with_capacity(horizon + 1);
        let mut count = 1u64;
        for _ in 0..=horizon {
            per_level.push(count);
            count = count.saturating_mul(k as u64);
        }
        EndsLayout {
            per_level,
            degree_bound: Some(k + 1),
            max_degree: k + 1,
            finite_branch_levels: BTreeMap::new(),
            ray_count: usize::MAX,
            boundary_counts_needed: (1..=k + 1).collect(),
        }
    }
}

/// Compute the layout of a tree given as per-level parent lists.
pub fn layout_from_tree(tree: &AdmissibleTree) -> EndsLayout {
    let mut per_level = Vec::with_capacity(tree.horizon() + 1);
    for level in 0..=tree.horizon() {
        per_level.push(tree.level_count(level) as u64);
    }
    let mut max_degree = 0u32;
    let mut boundary: Vec<u32> = Vec::new();
    let mut finite: BTreeMap<usize, u64> = BTreeMap::new();
    for (id, v) in tree.vertices().iter().enumerate() {
        let child_count = tree.children(id).len() as u32;
        let degree = child_count + u32::from(v.parent.is_some());
        max_degree = max_degree.max(degree);
        let needed = (child_count + u32::from(v.parent.is_some())).max(1);
        if !boundary.contains(&needed) {
            boundary.push(needed);
        }
        if child_count == 0 && v.level < tree.horizon() {
            *finite.entry(v.level).or_insert(0) += 1;
        }
    }
    boundary.sort_unstable();
    let ray_count = tree.end_representatives().len();
    EndsLayout {
        per_level,
        degree_bound: Some(max_degree),
        max_degree,
        finite_branch_levels: finite,
        ray_count,
        boundary_counts_needed: boundary,
    }
}

/// The two-ended line through the root: root has two children, every other
/// vertex continues its ray.
pub fn two_ended_line(horizon: usize) -> AdmissibleTree {
    let mut levels = Vec::new();
    levels.push(vec![0, 0]);
    for _ in 2..=horizon {
        levels.push(vec![0, 1]);
    }
    let mut tree =
        AdmissibleTree::from_level_parents(&levels, TrunkAssign::ByEnds { max_ends: 8 })
            .expect("line is well-formed");
    debug_assert_eq!(tree.trunk_count(), 2);
    tree.vertices[0].trunk_id = Some(0);
    tree
}

/// Star of `rays` rays from the root.
pub fn star(rays: usize, horizon: usize) -> AdmissibleTree {
    assert!(rays >= 1 && horizon >= 2);
    let mut levels = Vec::new();
    levels.push(vec![0; rays]);
    for _ in 2..=horizon {
        levels.push((0..rays).collect());
    }
    AdmissibleTree::from_level_parents(&levels, TrunkAssign::ByEnds { max_ends: rays.max(8) })
        .expect("star is well-formed")
}

/// Full binary tree (every vertex below the horizon has two children).
pub fn full_binary(horizon: usize) -> AdmissibleTree {
    let mut levels = Vec::new();
    let mut prev = 1usize;
    for _ in 1..=horizon {
        let mut parents = Vec::with_capacity(prev * 2);
        for p in 0..prev {
            parents.push(p);
            parents.push(p);
        }
        levels.push(parents);
        prev *= 2;
    }
    AdmissibleTree::from_level_parents(&levels, TrunkAssign::SingleLeftmost)
        .expect("binary tree is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::poly;

    fn empty_s() -> LevelSet {
        LevelSet::from_intervals(Vec::new()).unwrap()
    }

    #[test]
    fn comb_counts_match_increments() {
        let w = poly(&[1, 2], 5);
        let t = AdmissibleTree::build(&w, &empty_s(), 5).unwrap();
        let counts: Vec<usize> = (0..=5).map(|l| t.level_count(l)).collect();
        assert_eq!(counts, vec![1, 2, 2, 2, 2, 2]);
        assert_eq!(t.ball_count(5), BigInt::from(11));
        assert_eq!(t.ball_count(0), BigInt::from(1));
    }

    #[test]
    fn doubling_increments_rejected() {
        // Increment profile 1,2,4,8,... exceeds the 2-children capacity when
        // combined with an S-level, and generally at the first level where
        // count > 2 * previous count.
        let values: Vec<u64> = vec![1, 2, 4, 9, 19];
        let w = GrowthFunction::from_u64_values(&values).unwrap();
        // increments: 1,2,5,10 -> level 3 needs 5 > 2*2.
        let err = AdmissibleTree::build(&w, &empty_s(), 4).unwrap_err();
        match err {
            TreeError::InfeasibleGrowth { level, .. } => assert_eq!(level, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn s_levels_have_single_child_and_sides_shift() {
        let w = poly(&[1, 2], 6);
        let s = LevelSet::from_intervals(vec![(3, 2)]).unwrap(); // levels 3,4
        let t = AdmissibleTree::build(&w, &s, 6).unwrap();
        for level in 0..6 {
            let trunk = t.trunk_vertex(0, level).unwrap();
            let kids = t.children(trunk).len();
            if s.contains(level) {
                assert_eq!(kids, 1, "trunk vertex at S-level {level} must have 1 child");
            }
        }
        let counts: Vec<usize> = (0..=6).map(|l| t.level_count(l)).collect();
        assert_eq!(counts, vec![1, 2, 2, 2, 2, 2, 2]);
        // No vertex has 3 children.
        for id in 0..t.len() {
            assert!(t.children(id).len() <= 2);
        }
    }

    #[test]
    fn build_is_deterministic() {
        let w = poly(&[1, 1, 1], 40);
        let s = LevelSet::from_intervals(vec![(5, 1), (11, 2)]).unwrap();
        let a = AdmissibleTree::build(&w, &s, 40).unwrap();
        let b = AdmissibleTree::build(&w, &s, 40).unwrap();
        assert_eq!(a.vertices(), b.vertices());
    }

    #[test]
    fn departure_level_comb_leaf() {
        let w = poly(&[1, 2], 8);
        let t = AdmissibleTree::build(&w, &empty_s(), 8).unwrap();
        for id in 0..t.len() {
            let v = t.vertex(id);
            if !v.on_trunk {
                assert_eq!(t.departure_level(id).unwrap(), v.level - 1);
            }
        }
        let trunk = t.trunk_vertex(0, 3).unwrap();
        assert!(matches!(
            t.departure_level(trunk),
            Err(TreeError::OnTrunk(_))
        ));
    }

    #[test]
    fn departure_matches_parent_walk_oracle() {
        let w = poly(&[1, 1, 1], 30);
        let t = AdmissibleTree::build(&w, &empty_s(), 30).unwrap();
        for id in 0..t.len() {
            if t.vertex(id).on_trunk {
                continue;
            }
            // Independent oracle: walk parents, return first on-trunk level.
            let mut cur = id;
            let oracle = loop {
                let p = t.vertex(cur).parent.unwrap();
                if t.vertex(p).on_trunk {
                    break t.vertex(p).level;
                }
                cur = p;
            };
            let got = t.departure_level(id).unwrap();
            assert_eq!(got, oracle);
            assert!(got < t.vertex(id).level);
        }
    }

    #[test]
    fn ball_count_equals_growth_for_built_trees() {
        let w = poly(&[1, 3, 2], 50);
        let t = AdmissibleTree::build(&w, &empty_s(), 50).unwrap();
        for n in 0..=50 {
            assert_eq!(&t.ball_count(n), w.value(n), "ball count at {n}");
        }
    }

    #[test]
    fn line_layout_two_trunks() {
        let t = two_ended_line(20);
        assert_eq!(t.trunk_count(), 2);
        let layout = layout_from_tree(&t);
        assert_eq!(layout.per_level[0], 1);
        assert!(layout.per_level[1..].iter().all(|&c| c == 2));
        assert_eq!(layout.ray_count, 2);
        assert_eq!(layout.max_degree, 2);
        assert!(layout.finite_branch_levels.is_empty());
    }

    #[test]
    fn binary_layout_counts() {
        let t = full_binary(8);
        let layout = layout_from_tree(&t);
        assert_eq!(layout.per_level[3], 8);
        assert_eq!(layout.max_degree, 3);
        assert!(layout.ray_count > 8);
    }

    #[test]
    fn finite_branch_detection() {
        // A ray of length 8 with one branch of length 2 hanging at level 3.
        let mut levels: Vec<Vec<usize>> = Vec::new();
        levels.push(vec![0]); // level 1
        levels.push(vec![0]); // level 2
        levels.push(vec![0]); // level 3
        levels.push(vec![0, 0]); // level 4: ray + branch start
        levels.push(vec![0, 1]); // level 5: ray + branch end
        levels.push(vec![0]); // level 6
        levels.push(vec![0]); // level 7
        levels.push(vec![0]); // level 8
        let t = AdmissibleTree::from_level_parents(&levels, TrunkAssign::SingleLeftmost).unwrap();
        let layout = layout_from_tree(&t);
        assert_eq!(layout.finite_branch_levels.get(&5), Some(&1));
        assert_eq!(layout.ray_count, 1);
    }

    #[test]
    fn star_has_one_trunk_per_ray() {
        let t = star(3, 12);
        assert_eq!(t.trunk_count(), 3);
        let layout = layout_from_tree(&t);
        assert_eq!(layout.ray_count, 3);
    }

    #[test]
    fn tree_json_round_trip() {
        let w = poly(&[1, 2], 6);
        let s = LevelSet::from_intervals(vec![(3, 1)]).unwrap();
        let t = AdmissibleTree::build(&w, &s, 6).unwrap();
        let j = t.to_json();
        let back = AdmissibleTree::from_json(&j).unwrap();
        assert_eq!(back.vertices(), t.vertices());
    }
}
