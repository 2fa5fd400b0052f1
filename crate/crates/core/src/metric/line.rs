//! Simple explicit metrics: subsets of the integer line and distance tables.

use super::{check_point, Metric, PointId};
use crate::error::{Error, Result};

/// A finite subset of the integer line; point ids follow increasing order.
#[derive(Clone, Debug)]
pub struct LineMetric {
    points: Vec<i64>,
}

impl LineMetric {
    pub fn new(mut points: Vec<i64>) -> Self {
        points.sort_unstable();
        points.dedup();
        LineMetric { points }
    }

    pub fn interval(lo: i64, hi: i64) -> Self {
        LineMetric::new((lo..=hi).collect())
    }

    pub fn value(&self, p: PointId) -> i64 {
        self.points[p as usize]
    }

    pub fn id(&self, x: i64) -> Option<PointId> {
        self.points.binary_search(&x).ok().map(|i| i as PointId)
    }

    pub fn ids(&self, xs: impl IntoIterator<Item = i64>) -> Vec<PointId> {
        xs.into_iter().filter_map(|x| self.id(x)).collect()
    }
}

impl Metric for LineMetric {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn dist(&self, a: PointId, b: PointId) -> Result<u32> {
        check_point(self, a)?;
        check_point(self, b)?;
        Ok(self.value(a).abs_diff(self.value(b)) as u32)
    }

    fn near(&self, a: PointId, r: u32) -> Option<Result<Vec<PointId>>> {
        if let Err(e) = check_point(self, a) {
            return Some(Err(e));
        }
        let x = self.value(a);
        let lo = self.points.partition_point(|&p| p < x - r as i64);
        let hi = self.points.partition_point(|&p| p <= x + r as i64);
        Some(Ok((lo as PointId..hi as PointId).collect()))
    }

    fn diameter_of(&self, set: &[PointId]) -> Option<Result<u32>> {
        let vals = set.iter().map(|&p| self.value(p));
        let (lo, hi) = (vals.clone().min()?, vals.max()?);
        Some(Ok(lo.abs_diff(hi) as u32))
    }

    fn label(&self, a: PointId) -> String {
        self.value(a).to_string()
    }
}

/// A metric given by its full distance table.
#[derive(Clone, Debug)]
pub struct MatrixMetric {
    n: usize,
    table: Vec<u32>,
    labels: Vec<String>,
}

impl MatrixMetric {
    /// Builds the metric, rejecting tables that violate a metric axiom.
    pub fn new(table: Vec<Vec<u32>>, labels: Vec<String>) -> Result<Self> {
        let n = table.len();
        if table.iter().any(|r| r.len() != n) || labels.len() != n {
            return Err(Error::input("distance table must be square with one label per point"));
        }
        let m = MatrixMetric {
            n,
            table: table.into_iter().flatten().collect(),
            labels,
        };
        if let Some(why) = super::check_axioms(&m)? {
            return Err(Error::input(format!("not a metric: {why}")));
        }
        Ok(m)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> u32) -> Result<Self> {
        let table = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::new(table, (0..n).map(|i| i.to_string()).collect())
    }
}

impl Metric for MatrixMetric {
    fn len(&self) -> usize {
        self.n
    }

    fn dist(&self, a: PointId, b: PointId) -> Result<u32> {
        check_point(self, a)?;
        check_point(self, b)?;
        Ok(self.table[a as usize * self.n + b as usize])
    }

    fn label(&self, a: PointId) -> String {
        self.labels[a as usize].clone()
    }
}
