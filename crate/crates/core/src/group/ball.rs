//! Breadth-first enumeration of word-metric balls.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use super::{Element, Group};
use crate::error::{Error, Result};

/// Word norms of every element of norm at most `horizon`, from BFS layers.
#[derive(Debug, Clone)]
pub struct NormTable {
    horizon: u32,
    norms: HashMap<Element, u32>,
    layers: Vec<Vec<Element>>,
}

impl NormTable {
    pub fn build(group: &Group, horizon: u32, cap: usize) -> Result<Self> {
        let letters = group.letters();
        let mut norms = HashMap::new();
        norms.insert(Element::identity(), 0);
        let mut layers = vec![vec![Element::identity()]];
        for r in 1..=horizon {
            let frontier = layers.last().unwrap();
            let candidates: Vec<Element> = frontier
                .par_iter()
                .flat_map_iter(|x| {
                    letters.iter().map(move |&l| {
                        let mut w = x.letters().to_vec();
                        w.push(l);
                        group.reduce(&w)
                    })
                })
                .collect();
            let mut seen = HashSet::new();
            let mut layer: Vec<Element> = candidates
                .into_iter()
                .filter(|x| !norms.contains_key(x) && seen.insert(x.clone()))
                .collect();
            layer.sort();
            for x in &layer {
                norms.insert(x.clone(), r);
            }
            if norms.len() > cap {
                let growth = layers.iter().map(Vec::len).chain([layer.len()]).collect();
                return Err(Error::Resource {
                    detail: format!(
                        "ball of radius {horizon} exceeds cap {cap} at radius {r}"
                    ),
                    growth,
                });
            }
            let done = layer.is_empty();
            layers.push(layer);
            if done {
                break;
            }
        }
        Ok(NormTable {
            horizon,
            norms,
            layers,
        })
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn get(&self, g: &Element) -> Option<u32> {
        self.norms.get(g).copied()
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    /// Sizes of the spheres of radius 0, 1, ….
    pub fn growth(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// Elements of norm at most `r`, sorted by norm then shortlex.
    pub fn within(&self, r: u32) -> impl Iterator<Item = &Element> {
        self.layers
            .iter()
            .take(r as usize + 1)
            .flat_map(|l| l.iter())
    }

    pub fn sphere(&self, r: u32) -> &[Element] {
        self.layers.get(r as usize).map_or(&[], |l| &l[..])
    }
}

/// The closed ball `B_r(e)` with its norm table.
#[derive(Debug, Clone)]
pub struct Ball {
    pub radius: u32,
    pub elements: Vec<Element>,
    pub table: NormTable,
}

pub fn ball(group: &Group, radius: u32, cap: usize) -> Result<Ball> {
    let table = NormTable::build(group, radius, cap)?;
    let mut elements: Vec<Element> = table.within(radius).cloned().collect();
    elements.sort();
    Ok(Ball {
        radius,
        elements,
        table,
    })
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn norm(&self, g: &Element) -> Option<u32> {
        self.table.get(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn free_group_ball_sizes() {
        let g = Group::from_spec(&GroupSpec::free(&["a", "b"])).unwrap();
        for r in 0..=5u32 {
            let b = ball(&g, r, 1 << 20).unwrap();
            assert_eq!(b.len(), 2 * 3usize.pow(r) - 1);
        }
    }

    #[test]
    fn z2_unit_ball() {
        let g = Group::from_spec(&GroupSpec::free_abelian(&["a", "b"])).unwrap();
        assert_eq!(ball(&g, 1, 100).unwrap().len(), 5);
        assert_eq!(ball(&g, 0, 100).unwrap().len(), 1);
    }

    #[test]
    fn cap_reports_growth() {
        let g = Group::from_spec(&GroupSpec::free(&["a", "b"])).unwrap();
        match ball(&g, 6, 100) {
            Err(Error::Resource { growth, .. }) => assert_eq!(growth, vec![1, 4, 12, 36, 108]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn finite_ball_saturates() {
        let g = Group::from_spec(&GroupSpec::racg(
            &["r", "s", "t"],
            &[("r", "s"), ("s", "t"), ("r", "t")],
        ))
        .unwrap();
        assert_eq!(ball(&g, 3, 100).unwrap().len(), 8);
        assert_eq!(ball(&g, 9, 100).unwrap().len(), 8);
    }
}
