//! Membership, transversal and expression oracles for the subgroups an
//! amalgam or HNN extension is built along.
//!
//! Cosets are right cosets `C·g`; representatives are canonical words of
//! the ambient factor, with the identity representing `C` itself.

use std::collections::VecDeque;
use std::sync::Arc;

use super::abelian;
use super::finite::FiniteGroup;
use super::lattice::Lattice;
use super::word::{invert_word, shortlex_cmp, Letter, Word};
use crate::error::{Error, Result};

#[derive(Debug)]
pub enum SubgroupOracle {
    Finite {
        group: Arc<FiniteGroup>,
        /// Word over the subgroup generators for members, `None` otherwise.
        express: Vec<Option<Word>>,
        rep: Vec<u32>,
        gens: Vec<u32>,
    },
    Lattice {
        rank: usize,
        lattice: Lattice,
    },
}

/// Replaces generator `j` of a word over subgroup generators with `images[j]`.
pub fn substitute(w: &[Letter], images: &[Word]) -> Word {
    let mut out = Word::new();
    for l in w {
        let img = &images[l.generator()];
        if l.is_inverse() {
            out.extend(invert_word(img));
        } else {
            out.extend_from_slice(img);
        }
    }
    out
}

impl SubgroupOracle {
    pub fn finite(group: Arc<FiniteGroup>, gens: &[Word]) -> Self {
        let gens: Vec<u32> = gens.iter().map(|w| group.eval(w)).collect();
        let n = group.order();
        let mut express: Vec<Option<Word>> = vec![None; n];
        express[0] = Some(Word::new());
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            let base = express[x as usize].clone().unwrap();
            for (j, &g) in gens.iter().enumerate() {
                for inv in [false, true] {
                    let step = if inv { group.inv(g) } else { g };
                    let y = group.mul(x, step);
                    if express[y as usize].is_none() {
                        let mut w = base.clone();
                        w.push(Letter::new(j, inv));
                        express[y as usize] = Some(w);
                        queue.push_back(y);
                    }
                }
            }
        }
        let members: Vec<u32> = (0..n as u32)
            .filter(|&x| express[x as usize].is_some())
            .collect();
        let mut rep = vec![u32::MAX; n];
        for g in 0..n as u32 {
            if rep[g as usize] != u32::MAX {
                continue;
            }
            let coset: Vec<u32> = members.iter().map(|&c| group.mul(c, g)).collect();
            let best = *coset
                .iter()
                .min_by(|&&a, &&b| shortlex_cmp(group.word(a), group.word(b)))
                .unwrap();
            for x in coset {
                rep[x as usize] = best;
            }
        }
        SubgroupOracle::Finite {
            group,
            express,
            rep,
            gens,
        }
    }

    pub fn lattice(rank: usize, gens: &[Word]) -> Self {
        let vecs: Vec<Vec<i64>> = gens.iter().map(|w| abelian::vector(rank, w)).collect();
        SubgroupOracle::Lattice {
            rank,
            lattice: Lattice::new(rank, &vecs),
        }
    }

    pub fn num_gens(&self) -> usize {
        match self {
            SubgroupOracle::Finite { gens, .. } => gens.len(),
            SubgroupOracle::Lattice { lattice, .. } => {
                lattice.relations().len() + lattice.rank()
            }
        }
    }

    pub fn contains(&self, g: &[Letter]) -> bool {
        match self {
            SubgroupOracle::Finite { group, express, .. } => {
                express[group.id_of(g) as usize].is_some()
            }
            SubgroupOracle::Lattice { rank, lattice } => {
                lattice.contains(&abelian::vector(*rank, g))
            }
        }
    }

    /// Canonical representative of the right coset containing `g`.
    pub fn coset_rep(&self, g: &[Letter]) -> Word {
        match self {
            SubgroupOracle::Finite { group, rep, .. } => {
                group.word(rep[group.id_of(g) as usize]).clone()
            }
            SubgroupOracle::Lattice { rank, lattice } => {
                abelian::word(&lattice.residue(&abelian::vector(*rank, g)))
            }
        }
    }

    /// A word over the subgroup generators representing `g`, if `g` is a member.
    pub fn express(&self, g: &[Letter]) -> Option<Word> {
        match self {
            SubgroupOracle::Finite { group, express, .. } => {
                express[group.id_of(g) as usize].clone()
            }
            SubgroupOracle::Lattice { rank, lattice } => {
                let coeff = lattice.express(&abelian::vector(*rank, g))?;
                Some(abelian::word(&coeff))
            }
        }
    }

    /// Words over the subgroup generators that are trivial in the ambient
    /// group and generate all such relations.
    pub fn relations(&self) -> Vec<Word> {
        match self {
            SubgroupOracle::Finite {
                group,
                express,
                gens,
                ..
            } => {
                let mut out = Vec::new();
                for (x, w) in express.iter().enumerate() {
                    let Some(w) = w else { continue };
                    for (j, &g) in gens.iter().enumerate() {
                        let y = group.mul(x as u32, g);
                        let mut rel = w.clone();
                        rel.push(Letter::new(j, false));
                        rel.extend(invert_word(express[y as usize].as_ref().unwrap()));
                        out.push(rel);
                    }
                }
                out
            }
            SubgroupOracle::Lattice { lattice, .. } => lattice
                .relations()
                .iter()
                .map(|r| abelian::word(r))
                .collect(),
        }
    }

    /// Number of right cosets, `None` if infinite.
    pub fn index(&self) -> Option<u64> {
        match self {
            SubgroupOracle::Finite { group, express, .. } => {
                let size = express.iter().filter(|e| e.is_some()).count();
                Some((group.order() / size) as u64)
            }
            SubgroupOracle::Lattice { lattice, .. } => lattice.index(),
        }
    }

    /// Number of elements when the subgroup is finite.
    pub fn finite_order(&self) -> Option<usize> {
        match self {
            SubgroupOracle::Finite { express, .. } => Some(express.iter().filter(|e| e.is_some()).count()),
            SubgroupOracle::Lattice { lattice, .. } => (lattice.rank() == 0).then_some(1),
        }
    }

    pub fn is_whole(&self) -> bool {
        self.index() == Some(1)
    }

    /// Splits `g = c·r` with `c` in the subgroup and `r` the coset representative.
    pub fn decompose(&self, g: &[Letter], reduce: impl Fn(&[Letter]) -> Word) -> (Word, Word) {
        let r = self.coset_rep(g);
        let mut w = g.to_vec();
        w.extend(invert_word(&r));
        (reduce(&w), r)
    }
}

/// Checks that `gens[j] ↦ images[j]` extends to a homomorphism from the
/// subgroup into a group with reducer `reduce`.
pub fn check_hom(
    source: &SubgroupOracle,
    images: &[Word],
    reduce: impl Fn(&[Letter]) -> Word,
    what: &str,
) -> Result<()> {
    if images.len() != source.num_gens() {
        return Err(Error::spec(format!(
            "{what}: {} generators but {} images",
            source.num_gens(),
            images.len()
        )));
    }
    for rel in source.relations() {
        if !reduce(&substitute(&rel, images)).is_empty() {
            return Err(Error::spec(format!(
                "{what}: a relation of the subgroup is not preserved"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_transversals() {
        let a = Letter::new(0, false);
        let c = SubgroupOracle::lattice(1, &[vec![a, a]]);
        assert_eq!(c.index(), Some(2));
        assert_eq!(c.coset_rep(&[a, a, a]), vec![a]);
        assert_eq!(c.coset_rep(&[a.inverse()]), vec![a]);
        assert!(c.contains(&[a.inverse(), a.inverse()]));
        let (head, rep) = c.decompose(&[a, a, a], |w| abelian::reduce(1, w));
        assert_eq!((head, rep), (vec![a, a], vec![a]));
        let b = Letter::new(0, false);
        let c3 = SubgroupOracle::lattice(1, &[vec![b, b, b]]);
        let reps: Vec<Word> = (0..6)
            .map(|k| c3.coset_rep(&vec![b; k]))
            .collect();
        assert_eq!(reps[4], vec![b]);
        assert_eq!(reps[5], vec![b, b]);
        assert_eq!(reps[3], vec![]);
    }

    #[test]
    fn finite_transversals_are_idempotent() {
        let z6 = Arc::new(FiniteGroup::cyclic(6).unwrap());
        let s = Letter::new(0, false);
        let c = SubgroupOracle::finite(z6.clone(), &[vec![s, s]]);
        assert_eq!(c.index(), Some(2));
        for x in z6.elements() {
            let r = c.coset_rep(z6.word(x));
            assert_eq!(c.coset_rep(&r), r);
            let (head, rep) = c.decompose(z6.word(x), |w| z6.word(z6.eval(w)).clone());
            assert!(c.contains(&head));
            assert_eq!(rep, r);
        }
        assert!(check_hom(&c, &[vec![s, s, s, s]], |w| z6.word(z6.eval(w)).clone(), "t").is_ok());
        assert!(check_hom(&c, &[vec![s]], |w| z6.word(z6.eval(w)).clone(), "t").is_err());
    }
}
