//! Word-metric windows of a group: the elements of a ball with distances
//! `d(x, y) = ‖x⁻¹y‖`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, RwLock};

use super::{check_point, Metric, MetricWindow, PointId};
use crate::error::{Error, Result};
use crate::group::{Element, Group, NormTable};

/// Norms of a group: read off normal forms where possible, else looked up
/// in a BFS table up to its horizon.
#[derive(Debug)]
pub struct NormOracle {
    group: Arc<Group>,
    table: Option<Arc<NormTable>>,
    cap: usize,
    near_table: RwLock<Option<Arc<NormTable>>>,
    /// Least radius whose ball failed to fit a requested cap.
    too_big: AtomicU32,
}

/// Two-sided bounds on a norm; equal when the norm is known exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lo: u32,
    pub hi: u32,
}

impl Bounds {
    pub fn exact(self) -> Option<u32> {
        (self.lo == self.hi).then_some(self.lo)
    }
}

impl NormOracle {
    pub fn new(group: Arc<Group>, horizon: u32, cap: usize) -> Result<Self> {
        let table = if group.has_exact_norm() {
            None
        } else {
            Some(Arc::new(NormTable::build(&group, horizon, cap)?))
        };
        Ok(NormOracle {
            group,
            table,
            cap,
            near_table: RwLock::new(None),
            too_big: AtomicU32::new(u32::MAX),
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    /// Largest norm this oracle decides exactly, `None` for unbounded.
    pub fn horizon(&self) -> Option<u32> {
        self.table.as_ref().map(|t| t.horizon())
    }

    pub fn bounds(&self, g: &Element) -> Bounds {
        if let Some(n) = self.group.exact_norm(g.letters()) {
            return Bounds { lo: n, hi: n };
        }
        let table = self.table.as_ref().expect("inexact norms carry a table");
        match table.get(g) {
            Some(n) => Bounds { lo: n, hi: n },
            None => Bounds {
                lo: table.horizon() + 1,
                hi: (g.len() as u32).max(table.horizon() + 1),
            },
        }
    }

    pub fn norm(&self, g: &Element) -> Result<u32> {
        self.bounds(g).exact().ok_or_else(|| {
            Error::exhausted(
                "norm",
                format!(
                    "norm of {} exceeds the table horizon {}",
                    self.group.format(g),
                    self.horizon().unwrap_or(0)
                ),
            )
        })
    }

    /// `‖g‖ ≥ d`, or window exhaustion when the bounds straddle `d`.
    pub fn at_least(&self, g: &Element, d: u32) -> Result<bool> {
        let b = self.bounds(g);
        if b.lo >= d {
            Ok(true)
        } else if b.hi < d {
            Ok(false)
        } else {
            self.norm(g).map(|n| n >= d)
        }
    }

    pub fn at_most(&self, g: &Element, r: u32) -> Result<bool> {
        self.at_least(g, r + 1).map(|x| !x)
    }

    /// Elements of norm at most `r`, if their enumeration fits the cap.
    pub fn ball_elements(&self, r: u32) -> Option<Arc<NormTable>> {
        self.ball_elements_within(r, self.cap)
    }

    /// Like `ball_elements`, giving up once the ball exceeds `cap` elements.
    pub fn ball_elements_within(&self, r: u32, cap: usize) -> Option<Arc<NormTable>> {
        if let Some(t) = &self.table {
            return (r <= t.horizon()).then(|| t.clone());
        }
        if let Some(t) = self.near_table.read().unwrap().as_ref() {
            if t.horizon() >= r {
                return Some(t.clone());
            }
        }
        if r >= self.too_big.load(Ordering::Relaxed) {
            return None;
        }
        match NormTable::build(&self.group, r, cap.min(self.cap)) {
            Ok(t) => {
                let t = Arc::new(t);
                *self.near_table.write().unwrap() = Some(t.clone());
                Some(t)
            }
            Err(_) => {
                self.too_big.fetch_min(r, Ordering::Relaxed);
                None
            }
        }
    }
}

/// The elements of a ball as a metric window. Distances between points
/// are exact whenever `‖x⁻¹y‖` is decided by the norm oracle.
#[derive(Debug)]
pub struct GroupWindow {
    oracle: Arc<NormOracle>,
    elements: Vec<Element>,
    index: HashMap<Element, PointId>,
    radius: u32,
}

impl GroupWindow {
    /// Window of all elements of norm at most `inner`, with norms decided
    /// up to `outer`.
    pub fn new(group: Arc<Group>, inner: u32, outer: u32, cap: usize) -> Result<Self> {
        let oracle = NormOracle::new(group.clone(), outer.max(inner), cap)?;
        let elements = match &oracle.table {
            Some(t) => {
                let mut v: Vec<Element> = t.within(inner).cloned().collect();
                v.sort();
                v
            }
            None => crate::group::ball(&group, inner, cap)?.elements,
        };
        Ok(Self::from_parts(Arc::new(oracle), elements, inner))
    }

    /// Window over an explicit element list, e.g. a region of a ball.
    pub fn with_elements(oracle: Arc<NormOracle>, mut elements: Vec<Element>, radius: u32) -> Self {
        elements.sort();
        elements.dedup();
        Self::from_parts(oracle, elements, radius)
    }

    fn from_parts(oracle: Arc<NormOracle>, elements: Vec<Element>, radius: u32) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as PointId))
            .collect();
        GroupWindow {
            oracle,
            elements,
            index,
            radius,
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        self.oracle.group()
    }

    pub fn oracle(&self) -> &Arc<NormOracle> {
        &self.oracle
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, p: PointId) -> &Element {
        &self.elements[p as usize]
    }

    pub fn id(&self, g: &Element) -> Option<PointId> {
        self.index.get(g).copied()
    }

    pub fn ids<'a>(&self, gs: impl IntoIterator<Item = &'a Element>) -> Result<Vec<PointId>> {
        gs.into_iter()
            .map(|g| {
                self.id(g).ok_or_else(|| {
                    Error::input(format!(
                        "element {} is not in the window",
                        self.group().format(g)
                    ))
                })
            })
            .collect()
    }

    pub fn identity(&self) -> PointId {
        self.id(&Element::identity()).expect("windows contain the identity")
    }

    fn between(&self, a: PointId, b: PointId) -> Element {
        self.group().between(self.element(a), self.element(b))
    }

    /// Exact diameter by branch and bound around the midpoint of a double
    /// sweep: pairs whose triangle bound through the midpoint cannot beat
    /// the best distance found are skipped.
    fn pruned_diameter(&self, set: &[PointId]) -> Result<u32> {
        let Some(&first) = set.first() else { return Ok(0) };
        let farthest = |from: PointId| -> Result<(PointId, u32)> {
            let mut best = (from, 0);
            for &q in set {
                let d = self.dist(from, q)?;
                if d > best.1 {
                    best = (q, d);
                }
            }
            Ok(best)
        };
        let (p1, _) = farthest(first)?;
        let (p2, mut best) = farthest(p1)?;
        let path = self.between(p1, p2);
        let group = self.group();
        let mid = group.mul(self.element(p1), &group.reduce(&path.letters()[..path.len() / 2]));
        let mut ecc: Vec<(u32, PointId)> = set
            .iter()
            .map(|&p| (self.oracle.bounds(&group.between(&mid, self.element(p))).hi, p))
            .collect();
        ecc.sort_unstable_by(|a, b| b.cmp(a));
        for (i, &(ei, p)) in ecc.iter().enumerate() {
            match ecc.get(i + 1) {
                Some(&(ej, _)) if ei + ej > best => {}
                _ => break,
            }
            for &(ej, q) in &ecc[i + 1..] {
                if ei + ej <= best {
                    break;
                }
                best = best.max(self.dist(p, q)?);
            }
        }
        Ok(best)
    }

    pub fn into_window(self) -> Result<MetricWindow> {
        let base = self.identity();
        let (inner, outer) = (self.radius, self.oracle.horizon().unwrap_or(u32::MAX));
        MetricWindow::new(Arc::new(self), base, inner, outer.max(inner))
    }
}

impl Metric for GroupWindow {
    fn len(&self) -> usize {
        self.elements.len()
    }

    fn dist(&self, a: PointId, b: PointId) -> Result<u32> {
        check_point(self, a)?;
        check_point(self, b)?;
        self.oracle.norm(&self.between(a, b))
    }

    fn at_least(&self, a: PointId, b: PointId, d: u32) -> Result<bool> {
        check_point(self, a)?;
        check_point(self, b)?;
        self.oracle.at_least(&self.between(a, b), d)
    }

    fn at_most(&self, a: PointId, b: PointId, r: u32) -> Result<bool> {
        check_point(self, a)?;
        check_point(self, b)?;
        self.oracle.at_most(&self.between(a, b), r)
    }

    fn diameter_of(&self, set: &[PointId]) -> Option<Result<u32>> {
        Some(self.pruned_diameter(set))
    }

    fn near(&self, a: PointId, r: u32) -> Option<Result<Vec<PointId>>> {
        if let Err(e) = check_point(self, a) {
            return Some(Err(e));
        }
        let table = self
            .oracle
            .ball_elements_within(r, (4 * self.elements.len()).max(1 << 12))?;
        let x = self.element(a);
        let mut out: Vec<PointId> = table
            .within(r)
            .filter_map(|b| self.id(&self.group().mul(x, b)))
            .collect();
        out.sort_unstable();
        Some(Ok(out))
    }

    fn label(&self, a: PointId) -> String {
        self.group().format(self.element(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::metric::check_axioms;

    #[test]
    fn free_window_axioms() {
        let g = Arc::new(Group::from_spec(&GroupSpec::free(&["a", "b"])).unwrap());
        let w = GroupWindow::new(g, 2, 4, 1 << 16).unwrap();
        assert_eq!(w.len(), 17);
        assert_eq!(check_axioms(&w).unwrap(), None);
        let a = w.id(&w.group().parse("a").unwrap()).unwrap();
        let near = w.near(a, 1).unwrap().unwrap();
        assert_eq!(near.len(), 5);
    }

    #[test]
    fn pruned_diameter_matches_pairwise() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let specs = [
            GroupSpec::free(&["a", "b"]),
            GroupSpec::free_abelian(&["a", "b"]),
            GroupSpec::from_toml(
                "kind = \"hnn\"\ngenerators = [\"y\"]\n[[factors]]\nkind = \"free-abelian\"\ngenerators = [\"a\"]\n[phi]\na = \"a a\"\n",
            )
            .unwrap(),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for spec in specs {
            let g = Arc::new(Group::from_spec(&spec).unwrap());
            let w = GroupWindow::new(g, 3, 6, 1 << 20).unwrap();
            let mut ids: Vec<PointId> = (0..w.len() as PointId).collect();
            for size in [1, 2, 5, 20, 60] {
                ids.shuffle(&mut rng);
                let set = &ids[..size.min(ids.len())];
                let mut brute = 0;
                for &p in set {
                    for &q in set {
                        brute = brute.max(w.dist(p, q).unwrap());
                    }
                }
                assert_eq!(w.pruned_diameter(set).unwrap(), brute);
            }
        }
    }

    #[test]
    fn bs12_window_needs_outer_horizon() {
        let spec = GroupSpec::from_toml(
            "kind = \"hnn\"\ngenerators = [\"y\"]\n[[factors]]\nkind = \"free-abelian\"\ngenerators = [\"a\"]\n[phi]\na = \"a a\"\n",
        )
        .unwrap();
        let g = Arc::new(Group::from_spec(&spec).unwrap());
        let w = GroupWindow::new(g.clone(), 3, 6, 1 << 20).unwrap();
        assert_eq!(check_axioms(&w).unwrap(), None);
        let narrow = GroupWindow::new(g, 3, 3, 1 << 20).unwrap();
        assert!(check_axioms(&narrow).is_err());
    }
}
