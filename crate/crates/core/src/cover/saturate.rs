//! The d-saturated union of two families.

use std::collections::HashMap;

use rayon::prelude::*;

use super::Family;
use crate::error::Result;
use crate::metric::{Metric, PointId};

/// Pairs `(i, j)` with `dist(a[i], b[j]) ≤ d`, sorted.
pub fn close_pairs(
    m: &dyn Metric,
    a: &[Vec<PointId>],
    b: &[Vec<PointId>],
    d: u64,
) -> Result<Vec<(usize, usize)>> {
    let d32 = u32::try_from(d).unwrap_or(u32::MAX);
    let mut owner: HashMap<PointId, Vec<usize>> = HashMap::new();
    for (j, s) in b.iter().enumerate() {
        for &p in s {
            owner.entry(p).or_default().push(j);
        }
    }
    let pairs = a
        .par_iter()
        .enumerate()
        .map(|(i, s)| -> Result<Vec<(usize, usize)>> {
            let mut hit = vec![false; b.len()];
            for &p in s {
                match m.near(p, d32) {
                    Some(near) => {
                        for q in near? {
                            if let Some(js) = owner.get(&q) {
                                for &j in js {
                                    hit[j] = true;
                                }
                            }
                        }
                    }
                    None => {
                        for (j, t) in b.iter().enumerate() {
                            if hit[j] {
                                continue;
                            }
                            for &q in t {
                                if m.at_most(p, q, d32)? {
                                    hit[j] = true;
                                    break;
                                }
                            }
                        }
                    }
                }
            }
            Ok(hit
                .iter()
                .enumerate()
                .filter(|(_, &h)| h)
                .map(|(j, _)| (i, j))
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pairs.into_iter().flatten().collect())
}

/// `𝒱 ∪_d 𝒰`: each `V` absorbs every `U` within `d`; the `U` far from every
/// `V` are kept. A `U` close to several `V` joins each of them.
pub fn saturated_union(m: &dyn Metric, v: &Family, u: &Family, d: u64) -> Result<Family> {
    let close = close_pairs(m, &v.sets, &u.sets, d)?;
    let mut absorbed = vec![false; u.sets.len()];
    let mut grown: Vec<Vec<PointId>> = v.sets.clone();
    for (i, j) in close {
        grown[i].extend_from_slice(&u.sets[j]);
        absorbed[j] = true;
    }
    grown.extend(
        u.sets
            .iter()
            .zip(&absorbed)
            .filter(|(_, &a)| !a)
            .map(|(s, _)| s.clone()),
    );
    Ok(Family::new(grown))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{check_d_disjoint, diameter, LineMetric};

    #[test]
    fn empty_sides() {
        let l = LineMetric::interval(0, 20);
        let u = Family::new(vec![l.ids(0..3), l.ids(8..10)]);
        assert_eq!(saturated_union(&l, &Family::empty(), &u, 2).unwrap(), u);
        assert_eq!(saturated_union(&l, &u, &Family::empty(), 2).unwrap(), u);
    }

    #[test]
    fn worked_example() {
        let l = LineMetric::interval(0, 40);
        let u = Family::new(vec![l.ids(0..=4), l.ids(8..=12)]);
        let v = Family::new(vec![l.ids(5..=6), l.ids(30..=31)]);
        let w = saturated_union(&l, &v, &u, 2).unwrap();
        let mut expect = l.ids(0..=6);
        expect.extend(l.ids(8..=12));
        assert_eq!(w.sets, vec![expect, l.ids(30..=31)]);
        assert_eq!(check_d_disjoint(&l, &w.sets, 2).unwrap(), None);
        assert!(w.sets.iter().all(|s| diameter(&l, s).unwrap() <= 13));
    }

    #[test]
    fn not_commutative() {
        let l = LineMetric::interval(0, 40);
        let u = Family::new(vec![l.ids(0..=4), l.ids(8..=12)]);
        let v = Family::new(vec![l.ids(5..=6), l.ids(30..=31)]);
        assert_ne!(
            saturated_union(&l, &v, &u, 2).unwrap(),
            saturated_union(&l, &u, &v, 2).unwrap()
        );
    }
}
