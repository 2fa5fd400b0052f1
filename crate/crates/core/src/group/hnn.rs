//! HNN extensions `⟨G, y | y a y⁻¹ = φ(a), a ∈ A⟩`.
//!
//! Normal form: `g₀ y^ε₁ g₁ … y^εₙ gₙ` where `gᵢ` (i ≥ 1) is the fixed
//! representative of its right coset of `A` when `εᵢ = +1` and of `φ(A)`
//! when `εᵢ = −1`. Britton's condition follows: a trivial representative
//! between opposite stable letters would have pinched.

use std::sync::Arc;

use super::subgroup::{check_hom, substitute, SubgroupOracle};
use super::word::{Letter, Word};
use super::Group;
use crate::error::{Error, Result};

#[derive(Debug)]
pub struct Hnn {
    pub(crate) base: Arc<Group>,
    pub(crate) a: SubgroupOracle,
    pub(crate) b: SubgroupOracle,
    pub(crate) a_gens: Vec<Word>,
    pub(crate) b_gens: Vec<Word>,
    pub(crate) stable: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HnnForm {
    pub head: Word,
    /// `(true, g)` for `y·g`, `(false, g)` for `y⁻¹·g`.
    pub tail: Vec<(bool, Word)>,
}

impl HnnForm {
    pub fn signs(&self) -> Vec<bool> {
        self.tail.iter().map(|(s, _)| *s).collect()
    }
}

impl Hnn {
    pub fn new(base: Arc<Group>, a_gens: Vec<Word>, b_gens: Vec<Word>) -> Result<Self> {
        let a_gens: Vec<Word> = a_gens.iter().map(|w| base.reduce_word(w)).collect();
        let b_gens: Vec<Word> = b_gens.iter().map(|w| base.reduce_word(w)).collect();
        let a = base.subgroup_oracle(&a_gens)?;
        let b = base.subgroup_oracle(&b_gens)?;
        check_hom(&a, &b_gens, |w| base.reduce_word(w), "phi")?;
        check_hom(&b, &a_gens, |w| base.reduce_word(w), "phi inverse")?;
        if a.is_whole() && b.is_whole() {
            return Err(Error::Degenerate(
                "associated subgroups A and phi(A) are both the whole base group; \
                 every stable letter pair pinches"
                    .into(),
            ));
        }
        let stable = base.rank();
        Ok(Hnn {
            base,
            a,
            b,
            a_gens,
            b_gens,
            stable,
        })
    }

    pub fn base(&self) -> &Arc<Group> {
        &self.base
    }

    pub fn stable(&self) -> usize {
        self.stable
    }

    pub fn subgroup_a(&self) -> &SubgroupOracle {
        &self.a
    }

    pub fn subgroup_phi_a(&self) -> &SubgroupOracle {
        &self.b
    }

    pub fn phi(&self, a: &[Letter]) -> Word {
        let e = self.a.express(a).expect("argument of phi lies in A");
        self.base.reduce_word(&substitute(&e, &self.b_gens))
    }

    pub fn phi_inv(&self, b: &[Letter]) -> Word {
        let e = self.b.express(b).expect("argument of phi inverse lies in phi(A)");
        self.base.reduce_word(&substitute(&e, &self.a_gens))
    }

    /// Right-multiplies `g ∈ G` into the prefix of `form` made of its first
    /// `len` tail entries.
    fn absorb(&self, form: &mut HnnForm, mut g: Word, len: usize) {
        for i in (0..len).rev() {
            if g.is_empty() {
                return;
            }
            let (sign, x) = &mut form.tail[i];
            let mut w = x.clone();
            w.extend(g);
            let w = self.base.reduce_word(&w);
            let oracle = if *sign { &self.a } else { &self.b };
            let (c, r) = oracle.decompose(&w, |v| self.base.reduce_word(v));
            *x = r;
            g = if *sign { self.phi(&c) } else { self.phi_inv(&c) };
        }
        let mut head = std::mem::take(&mut form.head);
        head.extend(g);
        form.head = self.base.reduce_word(&head);
    }

    fn push_letter(&self, form: &mut HnnForm, l: Letter) {
        if l.generator() != self.stable {
            let n = form.tail.len();
            self.absorb(form, vec![l], n);
            return;
        }
        let sign = !l.is_inverse();
        if matches!(form.tail.last(), Some((s, x)) if *s != sign && x.is_empty()) {
            form.tail.pop();
        } else {
            form.tail.push((sign, Word::new()));
        }
    }

    pub fn form(&self, w: &[Letter]) -> HnnForm {
        let mut form = HnnForm::default();
        for &l in w {
            self.push_letter(&mut form, l);
        }
        form
    }

    pub fn word(&self, form: &HnnForm) -> Word {
        let mut out = form.head.clone();
        for (sign, x) in &form.tail {
            out.push(Letter::new(self.stable, !sign));
            out.extend_from_slice(x);
        }
        out
    }

    pub fn reduce(&self, w: &[Letter]) -> Word {
        self.word(&self.form(w))
    }

    /// Splits a word into `g₀ y^ε₁ g₁ …` without reducing it.
    pub fn presentation(&self, w: &[Letter]) -> HnnForm {
        let mut form = HnnForm::default();
        for &l in w {
            if l.generator() == self.stable {
                form.tail.push((!l.is_inverse(), Word::new()));
            } else if let Some((_, x)) = form.tail.last_mut() {
                x.push(l);
            } else {
                form.head.push(l);
            }
        }
        form
    }

    /// Whether a presentation contains no pinch `y g y⁻¹` (g ∈ A) or
    /// `y⁻¹ g y` (g ∈ φ(A)).
    pub fn is_britton_reduced(&self, p: &HnnForm) -> bool {
        p.tail.windows(2).all(|pair| {
            let (s, x) = &pair[0];
            let (t, _) = &pair[1];
            if s == t {
                return true;
            }
            let x = self.base.reduce_word(x);
            if *s {
                !self.a.contains(&x)
            } else {
                !self.b.contains(&x)
            }
        })
    }

    /// Whether two Britton-reduced presentations denote the same element.
    pub fn equivalent_reduced(&self, p: &HnnForm, q: &HnnForm) -> Result<bool> {
        if !self.is_britton_reduced(p) || !self.is_britton_reduced(q) {
            return Err(Error::input("presentation is not Britton-reduced"));
        }
        if p.signs() != q.signs() {
            return Ok(false);
        }
        Ok(self.reduce(&self.word(p)) == self.reduce(&self.word(q)))
    }
}
