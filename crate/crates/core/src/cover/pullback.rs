//! Pulling covers back along 1-Lipschitz injective maps.

use std::collections::HashMap;

use super::{ColoredCover, Family, Transcript};
use crate::error::{Error, Result};
use crate::metric::{check_point, d_components, diameter, lipschitz_witness, Metric, PointId};

/// Largest number of points within `r` of a center, over `centers`.
pub fn bounded_geometry(m: &dyn Metric, centers: &[PointId], r: u32) -> Result<u64> {
    let mut best = 0u64;
    for &c in centers {
        check_point(m, c)?;
        let count = match m.near(c, r) {
            Some(near) => near?.len() as u64,
            None => {
                let mut n = 0u64;
                for q in 0..m.len() as PointId {
                    if m.at_most(c, q, r)? {
                        n += 1;
                    }
                }
                n
            }
        };
        best = best.max(count);
    }
    Ok(best)
}

/// Pulls `cover` (on `target`) back along `f: source → target`, splitting
/// each preimage into its `d`-components.
pub fn pullback_cover(
    source: &dyn Metric,
    target: &dyn Metric,
    f: &[PointId],
    cover: &ColoredCover,
    d: u64,
    stage: &str,
) -> Result<(ColoredCover, Transcript)> {
    let mut t = Transcript::default();
    let report = lipschitz_witness(source, target, f)?;
    if report.lambda > 1 {
        let (x, y) = report.witness.unwrap_or((0, 0));
        return Err(Error::input(format!(
            "map is not 1-Lipschitz: {} and {} are stretched by {}",
            source.label(x),
            source.label(y),
            report.lambda
        )));
    }
    let mut preimage: HashMap<PointId, PointId> = HashMap::new();
    for (x, &y) in f.iter().enumerate() {
        if let Some(prev) = preimage.insert(y, x as PointId) {
            return Err(Error::input(format!(
                "map is not injective: {} and {} share an image",
                source.label(prev),
                source.label(x as PointId)
            )));
        }
    }
    t.require(stage, "map is 1-Lipschitz and injective", true, format!("λ = {}", report.lambda))?;

    let mut r_bound = 0u32;
    let mut centers = Vec::new();
    for s in cover.families.iter().flat_map(|f| &f.sets) {
        r_bound = r_bound.max(diameter(target, s)?);
        if let Some(&c) = s.first() {
            centers.push(c);
        }
    }
    let c = bounded_geometry(target, &centers, r_bound)?;
    let d32 = u32::try_from(d).unwrap_or(u32::MAX);
    let limit = d.saturating_mul(c);

    let mut families = Vec::with_capacity(cover.colors());
    let mut worst = 0u32;
    for fam in &cover.families {
        let mut sets = Vec::new();
        for s in &fam.sets {
            let pre: Vec<PointId> = s.iter().filter_map(|y| preimage.get(y).copied()).collect();
            for comp in d_components(source, &pre, d32)? {
                worst = worst.max(diameter(source, &comp)?);
                sets.push(comp);
            }
        }
        families.push(Family::new(sets).with_bound(limit).with_gap(d.saturating_add(1)));
    }
    t.require(
        stage,
        "components bounded by d·c(R)",
        u64::from(worst) <= limit,
        format!("largest component diameter {worst}, R = {r_bound}, c(R) = {c}, d·c(R) = {limit}"),
    )?;
    let region: Vec<PointId> = cover
        .region
        .iter()
        .filter_map(|y| preimage.get(y).copied())
        .collect();
    Ok((ColoredCover::new(families, d, region), t))
}
