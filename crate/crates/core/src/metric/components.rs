//! d-components, d-disjointness and diameters over a metric.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{check_point, Metric, PointId};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub sets: (usize, usize),
    pub points: (PointId, PointId),
    pub distance: u32,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Partition of `points` into chains with consecutive gaps at most `d`.
/// Blocks are sorted internally and ordered by their least point.
pub fn d_components(m: &dyn Metric, points: &[PointId], d: u32) -> Result<Vec<Vec<PointId>>> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    for &p in &pts {
        check_point(m, p)?;
    }
    let pos: HashMap<PointId, usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut uf = UnionFind((0..pts.len()).collect());
    let edges: Vec<(usize, usize)> = pts
        .par_iter()
        .enumerate()
        .map(|(i, &p)| -> Result<Vec<(usize, usize)>> {
            let mut out = Vec::new();
            if let Some(near) = m.near(p, d) {
                for q in near? {
                    if let Some(&j) = pos.get(&q) {
                        if j > i {
                            out.push((i, j));
                        }
                    }
                }
            } else {
                for (j, &q) in pts.iter().enumerate().skip(i + 1) {
                    if m.at_most(p, q, d)? {
                        out.push((i, j));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for (i, j) in edges {
        uf.union(i, j);
    }
    let mut blocks: HashMap<usize, Vec<PointId>> = HashMap::new();
    for (i, &p) in pts.iter().enumerate() {
        blocks.entry(uf.find(i)).or_default().push(p);
    }
    let mut out: Vec<Vec<PointId>> = blocks.into_values().collect();
    out.sort_by_key(|b| b[0]);
    Ok(out)
}

/// First pair of distinct sets closer than `d`, if any.
pub fn check_d_disjoint(m: &dyn Metric, family: &[Vec<PointId>], d: u32) -> Result<Option<Violation>> {
    let mut owners: HashMap<PointId, Vec<usize>> = HashMap::new();
    for (i, set) in family.iter().enumerate() {
        for &p in set {
            check_point(m, p)?;
            let o = owners.entry(p).or_default();
            if o.last() != Some(&i) {
                o.push(i);
            }
        }
    }
    if d == 0 {
        return Ok(None);
    }
    for (p, o) in &owners {
        if o.len() > 1 {
            return Ok(Some(Violation {
                sets: (o[0], o[1]),
                points: (*p, *p),
                distance: 0,
            }));
        }
    }
    if let Some(found) = m.closest_pair(family) {
        return Ok(found?.filter(|v| v.distance < d));
    }
    let flat: Vec<(PointId, usize)> = family
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.iter().map(move |&p| (p, i)))
        .collect();
    let found = flat
        .par_iter()
        .enumerate()
        .map(|(k, &(p, i))| -> Result<Option<Violation>> {
            if let Some(near) = m.near(p, d - 1) {
                for q in near? {
                    if let Some(o) = owners.get(&q) {
                        if o[0] != i {
                            return Ok(Some(Violation {
                                sets: (i.min(o[0]), i.max(o[0])),
                                points: (p, q),
                                distance: m.dist(p, q)?,
                            }));
                        }
                    }
                }
            } else {
                for &(q, j) in &flat[k + 1..] {
                    if j != i && !m.at_least(p, q, d)? {
                        return Ok(Some(Violation {
                            sets: (i.min(j), i.max(j)),
                            points: (p, q),
                            distance: m.dist(p, q)?,
                        }));
                    }
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found
        .into_iter()
        .flatten()
        .min_by_key(|v| (v.sets, v.points)))
}

pub fn diameter(m: &dyn Metric, set: &[PointId]) -> Result<u32> {
    for &p in set {
        check_point(m, p)?;
    }
    if let Some(d) = m.diameter_of(set) {
        return d;
    }
    let rows = set
        .par_iter()
        .enumerate()
        .map(|(i, &p)| -> Result<u32> {
            let mut best = 0;
            for &q in &set[i + 1..] {
                best = best.max(m.dist(p, q)?);
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().max().unwrap_or(0))
}

/// Minimum distance between two sets, `None` when either is empty.
pub fn set_distance(m: &dyn Metric, a: &[PointId], b: &[PointId]) -> Result<Option<u32>> {
    let mut best: Option<u32> = None;
    for &p in a {
        for &q in b {
            let d = m.dist(p, q)?;
            best = Some(best.map_or(d, |x| x.min(d)));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{LineMetric, MatrixMetric};
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn fixpoint_oracle(m: &dyn Metric, pts: &[PointId], d: u32) -> Vec<Vec<PointId>> {
        let mut blocks: Vec<Vec<PointId>> = pts.iter().map(|&p| vec![p]).collect();
        loop {
            let mut merged = false;
            'outer: for i in 0..blocks.len() {
                for j in i + 1..blocks.len() {
                    let close = blocks[i]
                        .iter()
                        .any(|&p| blocks[j].iter().any(|&q| m.dist(p, q).unwrap() <= d));
                    if close {
                        let b = blocks.remove(j);
                        blocks[i].extend(b);
                        merged = true;
                        break 'outer;
                    }
                }
            }
            if !merged {
                break;
            }
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        blocks
    }

    #[test]
    fn line_examples() {
        let l = LineMetric::interval(0, 10);
        assert_eq!(d_components(&l, &l.ids([0, 1, 2, 3]), 1).unwrap().len(), 1);
        let blocks = d_components(&l, &l.ids([0, 1, 5, 6]), 2).unwrap();
        assert_eq!(blocks, vec![l.ids([0, 1]), l.ids([5, 6])]);
        assert!(d_components(&l, &[99], 1).is_err());
    }

    #[test]
    fn disjointness_examples() {
        let l = LineMetric::interval(0, 10);
        assert_eq!(check_d_disjoint(&l, &[l.ids([0]), l.ids([5])], 5).unwrap(), None);
        let v = check_d_disjoint(&l, &[l.ids([0]), l.ids([4])], 5).unwrap().unwrap();
        assert_eq!(v.distance, 4);
        assert_eq!(check_d_disjoint(&l, &[], 5).unwrap(), None);
    }

    #[test]
    fn grid_components_match_fixpoint_oracle() {
        let grid = MatrixMetric::from_fn(400, |i, j| {
            let (a, b) = ((i / 20) as i64, (i % 20) as i64);
            let (c, e) = ((j / 20) as i64, (j % 20) as i64);
            (a.abs_diff(c) + b.abs_diff(e)) as u32
        })
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut pts: Vec<PointId> = (0..400).collect();
            pts.shuffle(&mut rng);
            pts.truncate(50);
            let got = d_components(&grid, &pts, 3).unwrap();
            assert_eq!(got, fixpoint_oracle(&grid, &pts, 3));
            for (i, a) in got.iter().enumerate() {
                assert!(diameter(&grid, a).unwrap() <= 3 * (a.len() as u32 - 1));
                for b in &got[i + 1..] {
                    assert!(set_distance(&grid, a, b).unwrap().unwrap() > 3);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn line_components_match_oracle(xs in proptest::collection::vec(-40i64..40, 1..30), d in 1u32..6) {
            let l = LineMetric::new(xs);
            let pts: Vec<PointId> = (0..l.len() as PointId).collect();
            prop_assert_eq!(d_components(&l, &pts, d).unwrap(), fixpoint_oracle(&l, &pts, d));
        }
    }
}
