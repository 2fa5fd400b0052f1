//! Lipschitz and coarse-uniformity witnesses for maps between windows.

use std::collections::HashSet;

use rayon::prelude::*;

use super::{check_point, Metric, PointId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LipschitzReport {
    /// Smallest integer `λ` with `d(f x, f y) ≤ λ·d(x, y)` on all pairs.
    pub lambda: u32,
    /// A pair attaining `λ`, when the window has two points.
    pub witness: Option<(PointId, PointId)>,
    /// Whether pairs at distance 1 are moved at most 1.
    pub adjacent_one_lipschitz: bool,
}

/// `f[p]` is the image in `target` of source point `p`.
pub fn lipschitz_witness(source: &dyn Metric, target: &dyn Metric, f: &[PointId]) -> Result<LipschitzReport> {
    if f.len() != source.len() {
        return Err(Error::input("map is not total on the source window"));
    }
    for &q in f {
        check_point(target, q)?;
    }
    let rows = (0..source.len() as PointId)
        .into_par_iter()
        .map(|x| -> Result<(u32, Option<(PointId, PointId)>, bool)> {
            let mut best = (0, None, true);
            for y in x + 1..source.len() as PointId {
                let d = source.dist(x, y)?;
                let t = target.dist(f[x as usize], f[y as usize])?;
                let need = if d == 0 { 0 } else { t.div_ceil(d) };
                if best.1.is_none() || need > best.0 {
                    best.0 = need;
                    best.1 = Some((x, y));
                }
                if d == 1 && t > 1 {
                    best.2 = false;
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = LipschitzReport {
        lambda: 0,
        witness: None,
        adjacent_one_lipschitz: true,
    };
    for (lambda, witness, adj) in rows {
        if witness.is_some() && (report.witness.is_none() || lambda > report.lambda) {
            report.lambda = lambda;
            report.witness = witness;
        }
        report.adjacent_one_lipschitz &= adj;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseWitness {
    pub lipschitz: LipschitzReport,
    /// `ξ(r)`: the largest source distance whose images are at most `r` apart.
    pub xi: Vec<u32>,
    /// Strictly increasing majorant `ξ̄(r) = max(ξ̄(r−1)+1, ξ(r))`.
    pub xi_bar: Vec<u32>,
    /// `ρ(s) = min{r : ξ̄(r) ≥ s}`, sampled on `0..=outer`; values past the
    /// sampled range are `outer + 1`.
    pub rho: Vec<u32>,
}

impl CoarseWitness {
    pub fn rho_at(&self, s: u32) -> u32 {
        let outer = self.xi.len() as u32 - 1;
        self.xi_bar
            .iter()
            .position(|&v| v >= s)
            .map_or(outer + 1, |r| r as u32)
    }
}

/// Lower control for an injective map: `d(ψx, ψy) ≥ ρ(d(x, y))` on every
/// window pair.
pub fn coarse_uniform_witness(
    source: &dyn Metric,
    target: &dyn Metric,
    psi: &[PointId],
    outer: u32,
) -> Result<CoarseWitness> {
    let lipschitz = lipschitz_witness(source, target, psi)?;
    let mut seen = HashSet::new();
    if psi.iter().any(|q| !seen.insert(*q)) {
        return Err(Error::input("map is not injective on the window"));
    }
    let n = source.len() as PointId;
    let pairs = (0..n)
        .into_par_iter()
        .map(|x| -> Result<Vec<(u32, u32)>> {
            (x + 1..n)
                .map(|y| Ok((target.dist(psi[x as usize], psi[y as usize])?, source.dist(x, y)?)))
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut xi = vec![0u32; outer as usize + 1];
    for (t, s) in pairs.into_iter().flatten() {
        if t <= outer {
            xi[t as usize] = xi[t as usize].max(s);
        }
    }
    for r in 1..xi.len() {
        xi[r] = xi[r].max(xi[r - 1]);
    }
    let mut xi_bar = Vec::with_capacity(xi.len());
    for (r, &v) in xi.iter().enumerate() {
        xi_bar.push(if r == 0 { v } else { v.max(xi_bar[r - 1] + 1) });
    }
    let mut w = CoarseWitness {
        lipschitz,
        xi,
        xi_bar,
        rho: Vec::new(),
    };
    w.rho = (0..=outer).map(|s| w.rho_at(s)).collect();
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{LineMetric, MatrixMetric};

    #[test]
    fn identity_is_isometric() {
        let l = LineMetric::interval(-10, 10);
        let id: Vec<PointId> = (0..l.len() as PointId).collect();
        let w = coarse_uniform_witness(&l, &l, &id, 20).unwrap();
        assert_eq!(w.lipschitz.lambda, 1);
        assert!(w.lipschitz.adjacent_one_lipschitz);
        assert_eq!(w.rho, (0..=20).collect::<Vec<u32>>());
    }

    #[test]
    fn even_sublattice_into_line() {
        let src = LineMetric::interval(-16, 16);
        let tgt = LineMetric::interval(-32, 32);
        let psi: Vec<PointId> = (-16..=16).map(|k| tgt.id(2 * k).unwrap()).collect();
        let w = coarse_uniform_witness(&src, &tgt, &psi, 32).unwrap();
        assert_eq!(w.lipschitz.lambda, 2);
        for r in 0..=32u32 {
            assert_eq!(w.xi[r as usize], r / 2);
        }
        for x in 0..src.len() as PointId {
            for y in 0..src.len() as PointId {
                let s = src.dist(x, y).unwrap();
                assert!(w.rho_at(s) <= tgt.dist(psi[x as usize], psi[y as usize]).unwrap());
            }
        }
        assert!(w.rho.windows(2).all(|p| p[0] <= p[1]));
    }

    #[test]
    fn non_injective_rejected() {
        let l = LineMetric::interval(0, 3);
        let m = MatrixMetric::from_fn(1, |_, _| 0).unwrap();
        assert!(coarse_uniform_witness(&l, &m, &[0, 0, 0, 0], 3).is_err());
    }
}
