//! Exact verification of colored covers.

use std::collections::HashSet;

use super::ColoredCover;
use crate::error::Result;
use crate::metric::{check_d_disjoint, diameter, Metric, PointId, Violation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub sets: usize,
    pub violation: Option<Violation>,
    pub max_diameter: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub scale: u64,
    pub families: Vec<FamilyReport>,
    pub max_diameter: u32,
    pub missed: Option<PointId>,
}

impl VerifyReport {
    pub fn disjoint(&self) -> bool {
        self.families.iter().all(|f| f.violation.is_none())
    }

    pub fn covers(&self) -> bool {
        self.missed.is_none()
    }

    pub fn passed(&self) -> bool {
        self.disjoint() && self.covers()
    }
}

/// Checks each family for `scale`-disjointness, measures diameters, and
/// checks coverage of the claimed region.
pub fn verify_cover(m: &dyn Metric, cover: &ColoredCover) -> Result<VerifyReport> {
    let scale = u32::try_from(cover.scale).unwrap_or(u32::MAX);
    let mut families = Vec::new();
    let mut seen = HashSet::new();
    for f in &cover.families {
        let violation = check_d_disjoint(m, &f.sets, scale)?;
        let mut max_diameter = 0;
        for s in &f.sets {
            max_diameter = max_diameter.max(diameter(m, s)?);
            seen.extend(s.iter().copied());
        }
        families.push(FamilyReport {
            sets: f.sets.len(),
            violation,
            max_diameter,
        });
    }
    for &p in &cover.region {
        crate::metric::check_point(m, p)?;
    }
    let missed = cover.region.iter().copied().find(|p| !seen.contains(p));
    Ok(VerifyReport {
        scale: cover.scale,
        max_diameter: families.iter().map(|f| f.max_diameter).max().unwrap_or(0),
        families,
        missed,
    })
}
