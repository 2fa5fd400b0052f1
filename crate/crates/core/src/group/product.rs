//! Free products: alternating sequences of nontrivial factor normal forms.

use std::sync::Arc;

use super::word::{Letter, Word};
use super::Group;

#[derive(Debug)]
pub struct FreeProduct {
    pub(crate) factors: Vec<Arc<Group>>,
    pub(crate) offsets: Vec<usize>,
}

impl FreeProduct {
    pub fn new(factors: Vec<Arc<Group>>) -> Self {
        let offsets = offsets(&factors);
        FreeProduct { factors, offsets }
    }

    pub fn factors(&self) -> &[Arc<Group>] {
        &self.factors
    }

    pub fn reduce(&self, w: &[Letter]) -> Word {
        let mut syllables: Vec<(usize, Word)> = Vec::new();
        for (f, run) in split_runs(&self.offsets, w) {
            match syllables.last_mut() {
                Some((last, local)) if *last == f => {
                    local.extend(run);
                    let r = self.factors[f].reduce_word(local);
                    if r.is_empty() {
                        syllables.pop();
                    } else {
                        *local = r;
                    }
                }
                _ => {
                    let r = self.factors[f].reduce_word(&run);
                    if !r.is_empty() {
                        syllables.push((f, r));
                    }
                }
            }
        }
        flatten(&self.offsets, &syllables)
    }

    /// Factor syllables of a canonical word, as local words.
    pub fn syllables(&self, w: &[Letter]) -> Vec<(usize, Word)> {
        split_runs(&self.offsets, w)
    }
}

pub(crate) fn offsets(factors: &[Arc<Group>]) -> Vec<usize> {
    let mut out = Vec::with_capacity(factors.len());
    let mut acc = 0;
    for f in factors {
        out.push(acc);
        acc += f.rank();
    }
    out
}

pub(crate) fn factor_of(offsets: &[usize], l: Letter) -> (usize, Letter) {
    let g = l.generator();
    let f = offsets.partition_point(|&o| o <= g) - 1;
    (f, Letter::new(g - offsets[f], l.is_inverse()))
}

/// Maximal runs of letters from one factor, in local coordinates.
pub(crate) fn split_runs(offsets: &[usize], w: &[Letter]) -> Vec<(usize, Word)> {
    let mut out: Vec<(usize, Word)> = Vec::new();
    for &l in w {
        let (f, local) = factor_of(offsets, l);
        match out.last_mut() {
            Some((last, run)) if *last == f => run.push(local),
            _ => out.push((f, vec![local])),
        }
    }
    out
}

pub(crate) fn flatten(offsets: &[usize], syllables: &[(usize, Word)]) -> Word {
    syllables
        .iter()
        .flat_map(|(f, w)| w.iter().map(move |l| l.shifted(offsets[*f])))
        .collect()
}
