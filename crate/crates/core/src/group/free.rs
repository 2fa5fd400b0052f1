//! Free groups and right-angled Coxeter groups.

use super::word::{Letter, Word};
use crate::error::{Error, Result};

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out = Word::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Right-angled Coxeter group on a commutation graph.
#[derive(Debug)]
pub struct Racg {
    commute: Vec<Vec<bool>>,
}

impl Racg {
    pub fn new(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut commute = vec![vec![false; vertices]; vertices];
        for &(s, t) in edges {
            if s >= vertices || t >= vertices {
                return Err(Error::spec("racg edge names an unknown vertex"));
            }
            if s == t {
                return Err(Error::spec("racg edge is a loop"));
            }
            if commute[s][t] {
                return Err(Error::spec("racg edge listed twice"));
            }
            commute[s][t] = true;
            commute[t][s] = true;
        }
        Ok(Racg { commute })
    }

    pub fn vertices(&self) -> usize {
        self.commute.len()
    }

    pub fn commutes(&self, s: usize, t: usize) -> bool {
        self.commute[s][t]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertices();
        (0..n)
            .flat_map(|s| (s + 1..n).map(move |t| (s, t)))
            .filter(|&(s, t)| self.commute[s][t])
            .collect()
    }

    /// Geodesic word for `w`, then the lexicographically least word among
    /// its commutation rearrangements.
    pub fn reduce(&self, w: &[Letter]) -> Word {
        let mut reduced: Vec<usize> = Vec::with_capacity(w.len());
        for l in w {
            let s = l.generator();
            let mut cancel = None;
            for j in (0..reduced.len()).rev() {
                if reduced[j] == s {
                    cancel = Some(j);
                    break;
                }
                if !self.commute[reduced[j]][s] {
                    break;
                }
            }
            match cancel {
                Some(j) => {
                    reduced.remove(j);
                }
                None => reduced.push(s),
            }
        }
        let mut out = Word::with_capacity(reduced.len());
        while !reduced.is_empty() {
            let mut best: Option<usize> = None;
            for i in 0..reduced.len() {
                let s = reduced[i];
                if best.is_some_and(|b| reduced[b] <= s) {
                    continue;
                }
                if reduced[..i].iter().all(|&t| self.commute[t][s]) {
                    best = Some(i);
                }
            }
            let i = best.expect("first letter is always available");
            out.push(Letter::new(reduced.remove(i), false));
        }
        out
    }
}
