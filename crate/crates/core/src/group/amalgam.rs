//! Amalgamated products of several factors over a common subgroup `C`.
//!
//! Normal form: `c·x̄₁…x̄_k` with `c ∈ C` (held in factor 0) and each `x̄_i` the
//! fixed representative of a nontrivial right coset `C·x_i` of its factor,
//! consecutive representatives from different factors.

use std::sync::Arc;

use super::product::{factor_of, flatten, offsets, split_runs};
use super::subgroup::{check_hom, substitute, SubgroupOracle};
use super::word::{Letter, Word};
use super::Group;
use crate::error::{Error, Result};

#[derive(Debug)]
pub struct Amalgam {
    pub(crate) factors: Vec<Arc<Group>>,
    pub(crate) offsets: Vec<usize>,
    pub(crate) subgroups: Vec<SubgroupOracle>,
    /// Generators of `C` as canonical words of each factor.
    pub(crate) c_gens: Vec<Vec<Word>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AmalgamForm {
    pub head: Word,
    pub syllables: Vec<(usize, Word)>,
}

impl Amalgam {
    pub fn new(factors: Vec<Arc<Group>>, c_gens: Vec<Vec<Word>>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::spec("amalgam needs at least two factors"));
        }
        let count = c_gens[0].len();
        if c_gens.iter().any(|g| g.len() != count) {
            return Err(Error::spec(
                "amalgam: subgroup generator lists differ in length",
            ));
        }
        let mut subgroups = Vec::new();
        let mut canon = Vec::new();
        for (f, gens) in factors.iter().zip(&c_gens) {
            let gens: Vec<Word> = gens.iter().map(|w| f.reduce_word(w)).collect();
            subgroups.push(f.subgroup_oracle(&gens)?);
            canon.push(gens);
        }
        for i in 0..factors.len() {
            for j in 0..factors.len() {
                if i != j {
                    check_hom(
                        &subgroups[i],
                        &canon[j],
                        |w| factors[j].reduce_word(w),
                        "amalgam subgroup identification",
                    )?;
                }
            }
        }
        Ok(Amalgam {
            offsets: offsets(&factors),
            factors,
            subgroups,
            c_gens: canon,
        })
    }

    pub fn factors(&self) -> &[Arc<Group>] {
        &self.factors
    }

    pub fn subgroup(&self, factor: usize) -> &SubgroupOracle {
        &self.subgroups[factor]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Moves an element of `C` written in factor `from` into factor `to`.
    pub fn transport(&self, c: &[Letter], from: usize, to: usize) -> Word {
        if from == to {
            return c.to_vec();
        }
        let e = self.subgroups[from]
            .express(c)
            .expect("transported element lies in the amalgamated subgroup");
        self.factors[to].reduce_word(&substitute(&e, &self.c_gens[to]))
    }

    fn decompose(&self, f: usize, g: &[Letter]) -> (Word, Word) {
        self.subgroups[f].decompose(g, |w| self.factors[f].reduce_word(w))
    }

    /// Right-multiplies `c ∈ C` (a word of factor `f`) into the form,
    /// pushing the `C`-part leftwards through every syllable.
    fn absorb(&self, form: &mut AmalgamForm, mut c: Word, mut f: usize) {
        for (g, x) in form.syllables.iter_mut().rev() {
            if c.is_empty() {
                return;
            }
            let mut w = x.clone();
            w.extend(self.transport(&c, f, *g));
            let (c2, r) = self.decompose(*g, &w);
            debug_assert!(!r.is_empty());
            *x = r;
            c = c2;
            f = *g;
        }
        let mut head = std::mem::take(&mut form.head);
        head.extend(self.transport(&c, f, 0));
        form.head = self.factors[0].reduce_word(&head);
    }

    fn push_local(&self, form: &mut AmalgamForm, f: usize, h: &[Letter]) {
        let mut g = Word::new();
        if matches!(form.syllables.last(), Some((last, _)) if *last == f) {
            g = form.syllables.pop().unwrap().1;
        }
        g.extend_from_slice(h);
        let g = self.factors[f].reduce_word(&g);
        let (c, r) = self.decompose(f, &g);
        self.absorb(form, c, f);
        if !r.is_empty() {
            form.syllables.push((f, r));
        }
    }

    pub fn form(&self, w: &[Letter]) -> AmalgamForm {
        let mut form = AmalgamForm::default();
        for (f, run) in split_runs(&self.offsets, w) {
            self.push_local(&mut form, f, &run);
        }
        form
    }

    /// Canonical word of a form; a factor-0 first syllable is merged into
    /// the head.
    pub fn word(&self, form: &AmalgamForm) -> Word {
        let mut parts: Vec<(usize, Word)> = Vec::new();
        let mut rest = &form.syllables[..];
        let mut head = form.head.clone();
        if let Some((0, x)) = rest.first() {
            head.extend_from_slice(x);
            head = self.factors[0].reduce_word(&head);
            rest = &rest[1..];
        }
        if !head.is_empty() {
            parts.push((0, head));
        }
        parts.extend(rest.iter().cloned());
        flatten(&self.offsets, &parts)
    }

    pub fn reduce(&self, w: &[Letter]) -> Word {
        self.word(&self.form(w))
    }

    pub fn factor_of(&self, l: Letter) -> (usize, Letter) {
        factor_of(&self.offsets, l)
    }

    pub fn is_trivial_subgroup(&self) -> bool {
        self.c_gens[0].iter().all(|w| w.is_empty())
    }
}
