//! Tree slices, their validation, tree metrics and the two-color tree cover.

pub mod bass_serre;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::cover::{ColoredCover, Family};
use crate::error::{Error, Result};
use crate::metric::{Metric, PointId, Violation};

pub use bass_serre::{build_bass_serre, r_stabilizer, BassSerre, VertexKey};

/// A finite tree with weights; edges are oriented from lower to higher
/// weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSlice {
    pub labels: Vec<String>,
    pub edges: Vec<(u32, u32)>,
    pub weight: Vec<u32>,
    pub depth: u32,
    /// Vertices whose neighbors may have been cut off by the truncation.
    pub boundary: Vec<bool>,
}

impl TreeSlice {
    /// Tree from a parent array; weights are distances to the root.
    pub fn from_parents(parents: &[Option<u32>], labels: Vec<String>) -> Result<Self> {
        let n = parents.len();
        if labels.len() != n {
            return Err(Error::input("one label per vertex is required"));
        }
        let edges: Vec<(u32, u32)> = parents
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v as u32)))
            .collect();
        let root = parents.iter().position(Option::is_none).unwrap_or(0) as u32;
        let weight = bfs_distances(n, &edges, root)
            .into_iter()
            .map(|d| d.unwrap_or(u32::MAX))
            .collect::<Vec<_>>();
        let depth = weight.iter().copied().filter(|&w| w != u32::MAX).max().unwrap_or(0);
        Ok(TreeSlice {
            labels,
            edges,
            weight,
            depth,
            boundary: vec![false; n],
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        adjacency(self.len(), &self.edges)
    }
}

fn adjacency(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    adj
}

fn bfs_distances(n: usize, edges: &[(u32, u32)], root: u32) -> Vec<Option<u32>> {
    let adj = adjacency(n, edges);
    let mut dist = vec![None; n];
    if n == 0 {
        return dist;
    }
    dist[root as usize] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v as usize].unwrap_or(0);
        for &w in &adj[v as usize] {
            if dist[w as usize].is_none() {
                dist[w as usize] = Some(dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeReport {
    pub passed: bool,
    pub vertices: usize,
    pub edges: usize,
    /// Description of the first failure.
    pub witness: Option<String>,
}

/// Connectivity, acyclicity, weight monotonicity along edges, and at most
/// one incoming edge per vertex.
pub fn validate_tree(t: &TreeSlice) -> TreeReport {
    let n = t.len();
    let fail = |w: String| TreeReport {
        passed: false,
        vertices: n,
        edges: t.edges.len(),
        witness: Some(w),
    };
    if n == 0 {
        return fail("empty tree".into());
    }
    if t.weight.len() != n || t.boundary.len() != n {
        return fail("weight or boundary table has the wrong length".into());
    }
    for &(a, b) in &t.edges {
        if a as usize >= n || b as usize >= n {
            return fail(format!("edge ({a}, {b}) names a missing vertex"));
        }
    }
    let mut uf: Vec<u32> = (0..n as u32).collect();
    fn find(uf: &mut [u32], mut x: u32) -> u32 {
        while uf[x as usize] != x {
            uf[x as usize] = uf[uf[x as usize] as usize];
            x = uf[x as usize];
        }
        x
    }
    for &(a, b) in &t.edges {
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        if ra == rb {
            return fail(format!(
                "cycle through edge {} -- {}",
                t.labels[a as usize], t.labels[b as usize]
            ));
        }
        uf[ra as usize] = rb;
    }
    let dist = bfs_distances(n, &t.edges, 0);
    if let Some(v) = dist.iter().position(Option::is_none) {
        return fail(format!("{} is unreachable", t.labels[v]));
    }
    let mut heads = vec![None; n];
    for &(a, b) in &t.edges {
        if t.weight[a as usize] >= t.weight[b as usize] {
            return fail(format!(
                "edge {} -> {} does not increase weight ({} to {})",
                t.labels[a as usize], t.labels[b as usize], t.weight[a as usize], t.weight[b as usize]
            ));
        }
        if let Some(prev) = heads[b as usize].replace(a) {
            return fail(format!(
                "{} is the head of edges from {} and {}",
                t.labels[b as usize], t.labels[prev as usize], t.labels[a as usize]
            ));
        }
    }
    TreeReport {
        passed: true,
        vertices: n,
        edges: t.edges.len(),
        witness: None,
    }
}

/// Path metric of a tree, rooted for ancestor queries.
#[derive(Clone, Debug)]
pub struct TreeMetric {
    labels: Vec<String>,
    adj: Vec<Vec<u32>>,
    root: u32,
    depth: Vec<u32>,
    /// `up[k][v]` is the `2^k`-th ancestor of `v` (the root maps to itself).
    up: Vec<Vec<u32>>,
}

impl TreeMetric {
    /// Requires a slice that passes `validate_tree`.
    pub fn new(t: &TreeSlice, root: u32) -> Result<Self> {
        let report = validate_tree(t);
        if !report.passed {
            return Err(Error::input(format!(
                "not a tree: {}",
                report.witness.unwrap_or_default()
            )));
        }
        if root as usize >= t.len() {
            return Err(Error::input("tree root is not a vertex"));
        }
        let adj = t.adjacency();
        let n = t.len();
        let mut parent = vec![root; n];
        let mut depth = vec![0u32; n];
        let mut seen = vec![false; n];
        seen[root as usize] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    parent[w as usize] = v;
                    depth[w as usize] = depth[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        let levels = (usize::BITS - n.leading_zeros()).max(1) as usize;
        let mut up = vec![parent];
        for k in 1..levels {
            let prev = &up[k - 1];
            let next: Vec<u32> = (0..n).map(|v| prev[prev[v] as usize]).collect();
            up.push(next);
        }
        Ok(TreeMetric {
            labels: t.labels.clone(),
            adj,
            root,
            depth,
            up,
        })
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    /// Distance to the root.
    pub fn depth(&self, v: PointId) -> u32 {
        self.depth[v as usize]
    }

    pub fn parent(&self, v: PointId) -> Option<PointId> {
        (v != self.root).then(|| self.up[0][v as usize])
    }

    /// Ancestor of `v` at depth `target` (`target ≤ depth(v)`).
    pub fn ancestor_at(&self, mut v: PointId, target: u32) -> PointId {
        let mut climb = self.depth[v as usize].saturating_sub(target);
        let mut k = 0;
        while climb > 0 {
            if climb & 1 == 1 {
                v = self.up[k][v as usize];
            }
            climb >>= 1;
            k += 1;
        }
        v
    }

    pub fn lca(&self, a: PointId, b: PointId) -> PointId {
        let (mut a, mut b) = if self.depth[a as usize] >= self.depth[b as usize] {
            (a, b)
        } else {
            (b, a)
        };
        a = self.ancestor_at(a, self.depth[b as usize]);
        if a == b {
            return a;
        }
        for k in (0..self.up.len()).rev() {
            let (x, y) = (self.up[k][a as usize], self.up[k][b as usize]);
            if x != y {
                a = x;
                b = y;
            }
        }
        self.up[0][a as usize]
    }

    fn tree_dist(&self, a: PointId, b: PointId) -> u32 {
        let c = self.lca(a, b);
        self.depth[a as usize] + self.depth[b as usize] - 2 * self.depth[c as usize]
    }
}

impl Metric for TreeMetric {
    fn len(&self) -> usize {
        self.labels.len()
    }

    fn dist(&self, a: PointId, b: PointId) -> Result<u32> {
        crate::metric::check_point(self, a)?;
        crate::metric::check_point(self, b)?;
        Ok(self.tree_dist(a, b))
    }

    fn near(&self, a: PointId, r: u32) -> Option<Result<Vec<PointId>>> {
        if a as usize >= self.labels.len() {
            return Some(Err(Error::input(format!("point {a} is outside the window"))));
        }
        let mut out = vec![a];
        let mut frontier = vec![(a, a)];
        for _ in 0..r {
            let mut next = Vec::new();
            for &(v, from) in &frontier {
                for &w in &self.adj[v as usize] {
                    if w != from {
                        out.push(w);
                        next.push((w, v));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Some(Ok(out))
    }

    fn diameter_of(&self, set: &[PointId]) -> Option<Result<u32>> {
        let Some(&first) = set.first() else {
            return Some(Ok(0));
        };
        let far = |from: PointId| {
            set.iter()
                .map(|&q| (self.tree_dist(from, q), q))
                .max_by_key(|&(d, q)| (d, std::cmp::Reverse(q)))
                .unwrap_or((0, from))
        };
        let (_, u) = far(first);
        Some(Ok(far(u).0))
    }

    fn closest_pair(&self, family: &[Vec<PointId>]) -> Option<Result<Option<Violation>>> {
        let n = self.labels.len();
        let mut owner: Vec<Option<(usize, PointId)>> = vec![None; n];
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        let mut sources: Vec<(PointId, usize)> = family
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&p| (p, i)))
            .collect();
        sources.sort_unstable();
        for (p, i) in sources {
            if p as usize >= n {
                return Some(Err(Error::input(format!("point {p} is outside the window"))));
            }
            if owner[p as usize].is_none() {
                owner[p as usize] = Some((i, p));
                dist[p as usize] = 0;
                queue.push_back(p);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v as usize] {
                if owner[w as usize].is_none() {
                    owner[w as usize] = owner[v as usize];
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut best: Option<(u32, (usize, usize), (PointId, PointId))> = None;
        for v in 0..n {
            let Some((i, p)) = owner[v] else { continue };
            for &w in &self.adj[v] {
                let Some((j, q)) = owner[w as usize] else { continue };
                if i < j {
                    let cand = (dist[v] + 1 + dist[w as usize], (i, j), (p, q));
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
        }
        Some(Ok(best.map(|(_, sets, points)| Violation {
            sets,
            points,
            distance: self.tree_dist(points.0, points.1),
        })))
    }

    fn label(&self, a: PointId) -> String {
        self.labels
            .get(a as usize)
            .cloned()
            .unwrap_or_else(|| a.to_string())
    }
}

/// Bound on set diameters of `tree_cover` at parameter `r`.
pub fn tree_cover_bound(r: u64) -> u64 {
    2 * (r + r.div_ceil(2))
}

/// Two-color cover of a tree at scale `r`: annuli of width `r` around the
/// root, split by ancestors set back `⌈r/2⌉` from the inner rim, colored
/// by parity of the annulus.
pub fn tree_cover(t: &TreeMetric, r: u32) -> Result<ColoredCover> {
    if r == 0 {
        return Err(Error::input("tree cover needs r ≥ 1"));
    }
    let setback = r.div_ceil(2);
    let mut groups: std::collections::BTreeMap<(u32, PointId), Vec<PointId>> = Default::default();
    for v in 0..t.len() as PointId {
        let k = t.depth(v) / r;
        let gate = if k == 0 {
            t.root()
        } else {
            t.ancestor_at(v, k * r - setback)
        };
        groups.entry((k, gate)).or_default().push(v);
    }
    let mut colors = vec![Vec::new(), Vec::new()];
    for ((k, _), set) in groups {
        colors[(k % 2) as usize].push(set);
    }
    let bound = tree_cover_bound(r as u64);
    let families = colors
        .into_iter()
        .map(|sets| Family::new(sets).with_bound(bound).with_gap(r as u64 + 1))
        .collect();
    Ok(ColoredCover::new(families, r as u64, (0..t.len() as PointId).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::verify_cover;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    fn path(n: usize) -> TreeSlice {
        let parents: Vec<Option<u32>> = (0..n).map(|i| i.checked_sub(1).map(|p| p as u32)).collect();
        TreeSlice::from_parents(&parents, labels(n)).unwrap()
    }

    #[test]
    fn single_vertex() {
        let t = TreeSlice::from_parents(&[None], labels(1)).unwrap();
        assert!(validate_tree(&t).passed);
        let m = TreeMetric::new(&t, 0).unwrap();
        let c = tree_cover(&m, 3).unwrap();
        assert_eq!(c.colors_used(), 1);
        assert!(verify_cover(&m, &c).unwrap().passed());
    }

    #[test]
    fn chord_is_a_cycle() {
        let mut t = path(5);
        t.edges.push((0, 4));
        let r = validate_tree(&t);
        assert!(!r.passed);
        assert!(r.witness.unwrap().contains("cycle"));
    }

    #[test]
    fn two_parents_detected() {
        let mut t = path(3);
        t.edges = vec![(0, 2), (1, 2)];
        t.weight = vec![0, 0, 1];
        let r = validate_tree(&t);
        assert!(!r.passed);
    }

    #[test]
    fn path_cover() {
        let t = path(200);
        let m = TreeMetric::new(&t, 0).unwrap();
        let c = tree_cover(&m, 4).unwrap();
        let report = verify_cover(&m, &c).unwrap();
        assert!(report.passed());
        assert!(report.max_diameter as u64 <= tree_cover_bound(4));
        let mid = TreeMetric::new(&t, 100).unwrap();
        assert!(verify_cover(&mid, &tree_cover(&mid, 4).unwrap()).unwrap().passed());
    }

    #[test]
    fn binary_tree_cover() {
        let n = (1usize << 13) - 1;
        let parents: Vec<Option<u32>> = (0..n).map(|i| (i > 0).then(|| ((i - 1) / 2) as u32)).collect();
        let t = TreeSlice::from_parents(&parents, labels(n)).unwrap();
        let m = TreeMetric::new(&t, 0).unwrap();
        for r in [2u32, 4, 8] {
            let c = tree_cover(&m, r).unwrap();
            let mut strict = c.clone();
            strict.scale = r as u64 + 1;
            let report = verify_cover(&m, &strict).unwrap();
            assert!(report.passed(), "r = {r}");
            assert_eq!(c.colors(), 2);
            assert!(report.max_diameter as u64 <= tree_cover_bound(r as u64));
        }
    }

    #[test]
    fn tree_metric_matches_bfs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 300;
        let parents: Vec<Option<u32>> = (0..n)
            .map(|i| (i > 0).then(|| rng.gen_range(0..i) as u32))
            .collect();
        let t = TreeSlice::from_parents(&parents, labels(n)).unwrap();
        let m = TreeMetric::new(&t, 17).unwrap();
        for a in (0..n as u32).step_by(7) {
            let bfs = bfs_distances(n, &t.edges, a);
            for b in 0..n as u32 {
                assert_eq!(Some(m.dist(a, b).unwrap()), bfs[b as usize]);
            }
        }
    }

    #[test]
    fn closest_pair_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = 120;
            let parents: Vec<Option<u32>> = (0..n)
                .map(|i| (i > 0).then(|| rng.gen_range(0..i) as u32))
                .collect();
            let t = TreeSlice::from_parents(&parents, labels(n)).unwrap();
            let m = TreeMetric::new(&t, 0).unwrap();
            let mut owner = vec![None; n];
            let mut family: Vec<Vec<u32>> = vec![Vec::new(); 4];
            for v in 0..n {
                if rng.gen_bool(0.2) {
                    let i = rng.gen_range(0..4);
                    owner[v] = Some(i);
                    family[i].push(v as u32);
                }
            }
            let mut best = None::<u32>;
            for a in 0..n {
                for b in 0..n {
                    if let (Some(i), Some(j)) = (owner[a], owner[b]) {
                        if i != j {
                            let d = m.dist(a as u32, b as u32).unwrap();
                            best = Some(best.map_or(d, |x| x.min(d)));
                        }
                    }
                }
            }
            let found = m.closest_pair(&family).unwrap().unwrap().map(|v| v.distance);
            assert_eq!(found, best);
        }
    }
}
