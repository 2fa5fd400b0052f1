//! Group constructions with canonical normal forms.

pub mod abelian;
pub mod amalgam;
pub mod ball;
pub mod finite;
pub mod free;
pub mod hnn;
pub mod lattice;
pub mod product;
pub mod spec;
pub mod subgroup;
pub mod word;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
pub use amalgam::{Amalgam, AmalgamForm};
pub use ball::{ball, Ball, NormTable};
pub use finite::FiniteGroup;
pub use free::Racg;
pub use hnn::{Hnn, HnnForm};
pub use product::FreeProduct;
pub use spec::{GraphSpec, GroupSpec, SubgroupSpec};
pub use subgroup::SubgroupOracle;
pub use word::{Alphabet, Letter, Word};

/// A group element as its canonical word. Ordered shortlex.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Element(Word);

impl Element {
    pub fn identity() -> Self {
        Element(Word::new())
    }

    /// Wraps a word already known to be canonical.
    pub fn from_canonical(w: Word) -> Self {
        Element(w)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        word::shortlex_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Debug)]
pub enum Kind {
    Finite(Arc<FiniteGroup>),
    FreeAbelian(usize),
    Free(usize),
    Racg(Racg),
    FreeProduct(FreeProduct),
    Amalgam(Amalgam),
    Hnn(Hnn),
}

#[derive(Debug)]
pub struct Group {
    kind: Kind,
    alphabet: Alphabet,
    involution: Vec<bool>,
}

fn parse_words(alphabet: &Alphabet, texts: &[String]) -> Result<Vec<Word>> {
    texts.iter().map(|t| alphabet.parse(t)).collect()
}

fn joined_alphabet(factors: &[Arc<Group>], extra: &[String]) -> Result<Alphabet> {
    let mut labels: Vec<String> = factors
        .iter()
        .flat_map(|f| f.alphabet.labels().iter().cloned())
        .collect();
    labels.extend(extra.iter().cloned());
    Alphabet::new(labels)
}

impl Group {
    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        match spec {
            GroupSpec::Cyclic { generators, order } => {
                if generators.len() != 1 {
                    return Err(Error::spec("cyclic group takes exactly one generator"));
                }
                let g = FiniteGroup::cyclic(*order)?;
                Self::finite(g, generators)
            }
            GroupSpec::Finite {
                generators,
                table,
                elements,
            } => {
                if generators.len() != elements.len() {
                    return Err(Error::spec("finite group: generators and elements differ in length"));
                }
                let g = FiniteGroup::from_table(table.clone(), elements.clone())?;
                Self::finite(g, generators)
            }
            GroupSpec::FreeAbelian { generators } => Ok(Group {
                involution: vec![false; generators.len()],
                alphabet: Alphabet::new(generators.clone())?,
                kind: Kind::FreeAbelian(generators.len()),
            }),
            GroupSpec::Free { generators } => Ok(Group {
                involution: vec![false; generators.len()],
                alphabet: Alphabet::new(generators.clone())?,
                kind: Kind::Free(generators.len()),
            }),
            GroupSpec::Racg { graph } => {
                let alphabet = Alphabet::new(graph.vertices.clone())?;
                let mut edges = Vec::new();
                for [s, t] in &graph.edges {
                    let find = |x: &String| {
                        alphabet
                            .index_of(x)
                            .ok_or_else(|| Error::spec(format!("racg edge names unknown vertex {x}")))
                    };
                    edges.push((find(s)?, find(t)?));
                }
                Ok(Group {
                    involution: vec![true; alphabet.len()],
                    kind: Kind::Racg(Racg::new(alphabet.len(), &edges)?),
                    alphabet,
                })
            }
            GroupSpec::FreeProduct { factors } => {
                if factors.is_empty() {
                    return Err(Error::spec("free product needs at least one factor"));
                }
                let factors = Self::build_factors(factors)?;
                let alphabet = joined_alphabet(&factors, &[])?;
                let involution = factors.iter().flat_map(|f| f.involution.clone()).collect();
                Ok(Group {
                    kind: Kind::FreeProduct(FreeProduct::new(factors)),
                    alphabet,
                    involution,
                })
            }
            GroupSpec::Amalgam { factors, subgroup } => {
                let lists = subgroup.per_factor(factors.len())?;
                let factors = Self::build_factors(factors)?;
                let alphabet = joined_alphabet(&factors, &[])?;
                let c_gens = factors
                    .iter()
                    .zip(&lists)
                    .map(|(f, l)| parse_words(&f.alphabet, l))
                    .collect::<Result<Vec<_>>>()?;
                let involution = factors.iter().flat_map(|f| f.involution.clone()).collect();
                Ok(Group {
                    kind: Kind::Amalgam(Amalgam::new(factors, c_gens)?),
                    alphabet,
                    involution,
                })
            }
            GroupSpec::Hnn {
                factors,
                generators,
                phi,
            } => {
                if factors.len() != 1 {
                    return Err(Error::spec("hnn extension takes exactly one base factor"));
                }
                if generators.len() != 1 {
                    return Err(Error::spec("hnn extension takes exactly one stable letter"));
                }
                let base = Arc::new(Group::from_spec(&factors[0])?);
                let alphabet = joined_alphabet(std::slice::from_ref(&base), generators)?;
                let mut a_gens = Vec::new();
                let mut b_gens = Vec::new();
                for (k, v) in phi {
                    a_gens.push(base.alphabet.parse(k)?);
                    b_gens.push(base.alphabet.parse(v)?);
                }
                let mut involution = base.involution.clone();
                involution.push(false);
                Ok(Group {
                    kind: Kind::Hnn(Hnn::new(base, a_gens, b_gens)?),
                    alphabet,
                    involution,
                })
            }
        }
    }

    fn finite(g: FiniteGroup, generators: &[String]) -> Result<Self> {
        let involution = (0..g.rank()).map(|i| g.is_involution(i)).collect();
        Ok(Group {
            kind: Kind::Finite(Arc::new(g)),
            alphabet: Alphabet::new(generators.to_vec())?,
            involution,
        })
    }

    fn build_factors(specs: &[GroupSpec]) -> Result<Vec<Arc<Group>>> {
        specs
            .iter()
            .map(|s| Group::from_spec(s).map(Arc::new))
            .collect()
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }

    /// The symmetric generating set: each generator and, unless it is an
    /// involution, its inverse.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (g, &inv) in self.involution.iter().enumerate() {
            out.push(Letter::new(g, false));
            if !inv {
                out.push(Letter::new(g, true));
            }
        }
        out
    }

    /// Canonical word of the element represented by `w`.
    pub fn reduce_word(&self, w: &[Letter]) -> Word {
        let w: Word = w
            .iter()
            .map(|&l| {
                if l.is_inverse() && self.involution[l.generator()] {
                    l.inverse()
                } else {
                    l
                }
            })
            .collect();
        match &self.kind {
            Kind::Finite(g) => g.word(g.eval(&w)).clone(),
            Kind::FreeAbelian(n) => abelian::reduce(*n, &w),
            Kind::Free(_) => free::free_reduce(&w),
            Kind::Racg(r) => r.reduce(&w),
            Kind::FreeProduct(p) => p.reduce(&w),
            Kind::Amalgam(a) => a.reduce(&w),
            Kind::Hnn(h) => h.reduce(&w),
        }
    }

    pub fn reduce(&self, w: &[Letter]) -> Element {
        Element(self.reduce_word(w))
    }

    pub fn mul(&self, g: &Element, h: &Element) -> Element {
        let mut w = g.0.clone();
        w.extend_from_slice(&h.0);
        self.reduce(&w)
    }

    pub fn inv(&self, g: &Element) -> Element {
        self.reduce(&word::invert_word(&g.0))
    }

    /// `g⁻¹h`, the element whose norm is the distance between `g` and `h`.
    pub fn between(&self, g: &Element, h: &Element) -> Element {
        let mut w = word::invert_word(&g.0);
        w.extend_from_slice(&h.0);
        self.reduce(&w)
    }

    pub fn parse(&self, text: &str) -> Result<Element> {
        Ok(self.reduce(&self.alphabet.parse(text)?))
    }

    pub fn format(&self, g: &Element) -> String {
        self.alphabet.format(&g.0)
    }

    /// Word norm when it can be read off the normal form.
    pub fn exact_norm(&self, g: &[Letter]) -> Option<u32> {
        match &self.kind {
            Kind::Finite(f) => Some(f.norm(f.id_of(g))),
            Kind::FreeAbelian(_) | Kind::Free(_) | Kind::Racg(_) => Some(g.len() as u32),
            Kind::FreeProduct(p) => p
                .syllables(g)
                .iter()
                .map(|(f, w)| p.factors[*f].exact_norm(w))
                .sum(),
            Kind::Amalgam(_) | Kind::Hnn(_) => None,
        }
    }

    pub fn has_exact_norm(&self) -> bool {
        match &self.kind {
            Kind::FreeProduct(p) => p.factors.iter().all(|f| f.has_exact_norm()),
            Kind::Amalgam(_) | Kind::Hnn(_) => false,
            _ => true,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, Kind::Finite(_))
    }

    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            Kind::Finite(g) => Some(g.order()),
            _ => None,
        }
    }

    pub fn is_abelian_free(&self) -> bool {
        matches!(self.kind, Kind::FreeAbelian(_) | Kind::Free(1))
    }

    /// Subgroup oracle for the subgroup generated by `gens`; available for
    /// finite and free abelian groups.
    pub fn subgroup_oracle(&self, gens: &[Word]) -> Result<SubgroupOracle> {
        match &self.kind {
            Kind::Finite(g) => Ok(SubgroupOracle::finite(g.clone(), gens)),
            Kind::FreeAbelian(n) => Ok(SubgroupOracle::lattice(*n, gens)),
            Kind::Free(1) => Ok(SubgroupOracle::lattice(1, gens)),
            _ => Err(Error::spec(
                "subgroup oracles need a finite or free abelian factor",
            )),
        }
    }

    /// Finite groups: every element.
    pub fn finite_elements(&self) -> Option<Vec<Element>> {
        match &self.kind {
            Kind::Finite(g) => Some(g.elements().map(|x| Element(g.word(x).clone())).collect()),
            _ => None,
        }
    }
}
