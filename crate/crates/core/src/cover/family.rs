//! Families of point sets and colored covers.

use crate::metric::PointId;

/// A family of nonempty point sets. Sets are kept sorted, and the family
/// is ordered by least element.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Family {
    pub sets: Vec<Vec<PointId>>,
    /// Claimed uniform diameter bound (checked, not trusted).
    pub declared_bound: Option<u64>,
    /// Claimed separation (checked, not trusted).
    pub declared_gap: Option<u64>,
}

impl Family {
    pub fn new(sets: Vec<Vec<PointId>>) -> Self {
        let mut f = Family {
            sets,
            declared_bound: None,
            declared_gap: None,
        };
        f.normalize();
        f
    }

    pub fn empty() -> Self {
        Family::default()
    }

    pub fn with_bound(mut self, bound: u64) -> Self {
        self.declared_bound = Some(bound);
        self
    }

    pub fn with_gap(mut self, gap: u64) -> Self {
        self.declared_gap = Some(gap);
        self
    }

    pub fn normalize(&mut self) {
        for s in &mut self.sets {
            s.sort_unstable();
            s.dedup();
        }
        self.sets.retain(|s| !s.is_empty());
        self.sets.sort();
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> + '_ {
        self.sets.iter().flatten().copied()
    }

    /// Sets intersected with the complement of `remove`, dropping empties.
    pub fn without(&self, remove: &std::collections::HashSet<PointId>) -> Family {
        let mut f = Family::new(
            self.sets
                .iter()
                .map(|s| s.iter().copied().filter(|p| !remove.contains(p)).collect())
                .collect(),
        );
        f.declared_bound = self.declared_bound;
        f.declared_gap = self.declared_gap;
        f
    }
}

/// `n + 1` families claimed to be `scale`-disjoint and jointly covering
/// `region`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColoredCover {
    pub families: Vec<Family>,
    pub scale: u64,
    pub region: Vec<PointId>,
}

impl ColoredCover {
    pub fn new(families: Vec<Family>, scale: u64, mut region: Vec<PointId>) -> Self {
        region.sort_unstable();
        region.dedup();
        ColoredCover {
            families,
            scale,
            region,
        }
    }

    pub fn colors(&self) -> usize {
        self.families.len()
    }

    pub fn colors_used(&self) -> usize {
        self.families.iter().filter(|f| !f.is_empty()).count()
    }

    /// Largest declared bound, if every nonempty family declares one.
    pub fn declared_bound(&self) -> Option<u64> {
        self.families
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| f.declared_bound)
            .try_fold(0, |acc, b| b.map(|b| acc.max(b)))
    }

    pub fn padded(mut self, colors: usize) -> Self {
        while self.families.len() < colors {
            self.families.push(Family::empty());
        }
        self
    }
}
