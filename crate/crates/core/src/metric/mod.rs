//! Finite metric windows and the set-level checks built on them.

pub mod coarse;
pub mod components;
pub mod coset;
pub mod line;
pub mod pointed;
pub mod window;

use std::sync::Arc;

use crate::error::{Error, Result};
pub use coarse::{coarse_uniform_witness, lipschitz_witness, CoarseWitness, LipschitzReport};
pub use components::{check_d_disjoint, d_components, diameter, Violation};
pub use coset::coset_distance;
pub use line::{LineMetric, MatrixMetric};
pub use pointed::{pointed_product_distance, PointedSpace, PointedWord};
pub use window::{Bounds, GroupWindow, NormOracle};

pub type PointId = u32;

/// An integer metric on points `0..len()`.
///
/// Backends whose distances are only known up to a horizon answer the
/// comparison queries soundly and raise `WindowExhausted` when a question
/// cannot be settled inside the window.
pub trait Metric: Send + Sync {
    fn len(&self) -> usize;

    fn dist(&self, a: PointId, b: PointId) -> Result<u32>;

    fn at_least(&self, a: PointId, b: PointId, d: u32) -> Result<bool> {
        Ok(self.dist(a, b)? >= d)
    }

    fn at_most(&self, a: PointId, b: PointId, r: u32) -> Result<bool> {
        Ok(self.dist(a, b)? <= r)
    }

    /// All points within distance `r` of `a`, when the backend can list
    /// them faster than a scan.
    fn near(&self, _a: PointId, _r: u32) -> Option<Result<Vec<PointId>>> {
        None
    }

    /// Diameter of a set, when the backend has a shortcut.
    fn diameter_of(&self, _set: &[PointId]) -> Option<Result<u32>> {
        None
    }

    /// Closest pair of points in distinct sets of a family of pairwise
    /// disjoint sets, when the backend has a shortcut.
    fn closest_pair(&self, _family: &[Vec<PointId>]) -> Option<Result<Option<Violation>>> {
        None
    }

    fn label(&self, a: PointId) -> String {
        a.to_string()
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A pointed metric window with recorded radii: every point lies within
/// `outer_radius` of the basepoint, and every ambient point within
/// `inner_radius` is present.
#[derive(Clone)]
pub struct MetricWindow {
    pub metric: Arc<dyn Metric>,
    pub basepoint: PointId,
    pub inner_radius: u32,
    pub outer_radius: u32,
}

impl MetricWindow {
    pub fn new(metric: Arc<dyn Metric>, basepoint: PointId, inner: u32, outer: u32) -> Result<Self> {
        if basepoint as usize >= metric.len() {
            return Err(Error::input("basepoint outside the window"));
        }
        if inner > outer {
            return Err(Error::input("inner radius exceeds outer radius"));
        }
        Ok(MetricWindow {
            metric,
            basepoint,
            inner_radius: inner,
            outer_radius: outer,
        })
    }

    pub fn len(&self) -> usize {
        self.metric.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metric.len() == 0
    }

    pub fn dist(&self, a: PointId, b: PointId) -> Result<u32> {
        self.metric.dist(a, b)
    }

    /// Points within `inner_radius` of the basepoint.
    pub fn inner_points(&self) -> Result<Vec<PointId>> {
        let mut out = Vec::new();
        for p in 0..self.len() as PointId {
            if self.metric.at_most(self.basepoint, p, self.inner_radius)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    pub fn check(&self, p: PointId) -> Result<()> {
        check_point(self.metric.as_ref(), p)
    }
}

pub(crate) fn check_point(m: &dyn Metric, p: PointId) -> Result<()> {
    if (p as usize) < m.len() {
        Ok(())
    } else {
        Err(Error::input(format!("point {p} is not in the window")))
    }
}

/// Exhaustively checks the metric axioms; returns the first failing triple.
pub fn check_axioms(m: &dyn Metric) -> Result<Option<String>> {
    let n = m.len() as PointId;
    let mut d = vec![0u32; (n as usize) * (n as usize)];
    for a in 0..n {
        for b in 0..n {
            d[(a * n + b) as usize] = m.dist(a, b)?;
        }
    }
    let at = |a: PointId, b: PointId| d[(a * n + b) as usize];
    for a in 0..n {
        if at(a, a) != 0 {
            return Ok(Some(format!("d({a},{a}) != 0")));
        }
        for b in 0..n {
            if at(a, b) != at(b, a) {
                return Ok(Some(format!("asymmetric at ({a},{b})")));
            }
            if a != b && at(a, b) == 0 {
                return Ok(Some(format!("distinct points {a},{b} at distance 0")));
            }
            for c in 0..n {
                if at(a, b) + at(b, c) < at(a, c) {
                    return Ok(Some(format!("triangle fails at ({a},{b},{c})")));
                }
            }
        }
    }
    Ok(None)
}
