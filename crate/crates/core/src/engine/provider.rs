//! Uniform cover providers for the factors of a construction.
//!
//! A provider covers any left-translate of a factor copy `A ⊂ Γ` with the
//! metric induced from `Γ`, with one bound for all copies.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::group::{Element, Group, Kind, Letter, Word};
use crate::metric::NormOracle;

/// Maps an ambient element to its local word in the factor, if it lies
/// in the factor.
pub type Locator = Arc<dyn Fn(&Element) -> Option<Word> + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProviderKind {
    /// One set per factor copy (finite factors).
    Finite,
    /// Intervals of powers of the generator, colored by parity (infinite
    /// cyclic factors).
    Interval,
}

#[derive(Clone)]
pub struct Provider {
    kind: ProviderKind,
    label: String,
    offset: usize,
    elements: Vec<Word>,
    oracle: Arc<NormOracle>,
    locator: Locator,
    /// Ambient norm of `a^m` is `|m|`.
    exact_line: bool,
    cache: Arc<Mutex<HashMap<u64, Option<(u64, u64)>>>>,
}

impl std::fmt::Debug for Provider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Provider({})", self.label)
    }
}

/// How a provider places the points of one copy at a scale.
pub enum Placement {
    /// `(color, block)` per point, with a uniform bound.
    Blocks(Vec<(usize, i64)>, u64),
    /// The provider cannot certify its blocks at this scale; the copy is
    /// kept whole.
    Whole,
}

fn exponent(local: &[Letter]) -> i64 {
    local
        .iter()
        .map(|l| if l.is_inverse() { -1 } else { 1 })
        .sum()
}

impl Provider {
    /// Chooses the provider for `factor`, whose letters start at `offset`
    /// in the ambient alphabet.
    pub fn for_factor(
        factor: &Group,
        label: String,
        offset: usize,
        oracle: Arc<NormOracle>,
        locator: Locator,
        exact_line: bool,
    ) -> Result<Self> {
        let (kind, elements) = match factor.kind() {
            Kind::Finite(_) => (
                ProviderKind::Finite,
                factor
                    .finite_elements()
                    .unwrap_or_default()
                    .into_iter()
                    .map(Element::into_word)
                    .collect(),
            ),
            Kind::Free(1) | Kind::FreeAbelian(1) => (ProviderKind::Interval, Vec::new()),
            _ => {
                return Err(Error::input(format!(
                    "no uniform cover provider for factor {label}: supported factors are finite or infinite cyclic"
                )))
            }
        };
        Ok(Provider {
            kind,
            label,
            offset,
            elements,
            oracle,
            locator,
            exact_line,
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn kind(&self) -> ProviderKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of families `n + 1`.
    pub fn colors(&self) -> usize {
        match self.kind {
            ProviderKind::Finite => 1,
            ProviderKind::Interval => 2,
        }
    }

    pub fn locate(&self, g: &Element) -> Option<Word> {
        (self.locator)(g)
    }

    pub fn ambient(&self, local: &[Letter]) -> Element {
        let w: Word = local.iter().map(|l| l.shifted(self.offset)).collect();
        self.oracle.group().reduce(&w)
    }

    fn power(&self, m: i64) -> Element {
        let l = Letter::new(0, m < 0);
        self.ambient(&vec![l; m.unsigned_abs() as usize])
    }

    /// Interval length `L(d)` and bound `R(d)`, when certified: every power
    /// `a^m` with `|m| ≥ L` has norm at least `d`.
    pub fn interval(&self, d: u64) -> Result<Option<(u64, u64)>> {
        if let Some(v) = self.cache.lock().unwrap().get(&d) {
            return Ok(*v);
        }
        let value = if self.exact_line {
            Some((d.max(1), d.saturating_sub(1)))
        } else {
            self.interval_from_table(d)?
        };
        self.cache.lock().unwrap().insert(d, value);
        Ok(value)
    }

    fn interval_from_table(&self, d: u64) -> Result<Option<(u64, u64)>> {
        let horizon = self.oracle.horizon().unwrap_or(u32::MAX) as u64;
        if d == 0 || d - 1 > horizon {
            return Ok(None);
        }
        let Some(table) = self.oracle.ball_elements((d - 1) as u32) else {
            return Ok(None);
        };
        let mut longest = 0i64;
        for g in table.within((d - 1) as u32) {
            if let Some(local) = self.locate(g) {
                longest = longest.max(exponent(&local).abs());
            }
        }
        let len = longest as u64 + 1;
        let mut bound = 0u64;
        for m in 0..len as i64 {
            bound = bound.max(self.oracle.bounds(&self.power(m)).hi as u64);
        }
        Ok(Some((len, bound)))
    }

    /// Bound on the diameter of one copy (finite factors).
    pub fn finite_bound(&self) -> u64 {
        self.elements
            .iter()
            .map(|w| self.oracle.bounds(&self.ambient(w)).hi as u64)
            .max()
            .unwrap_or(0)
    }

    /// Places local coordinates of one copy at scale `d`.
    pub fn place(&self, locals: &[Word], d: u64) -> Result<Placement> {
        match self.kind {
            ProviderKind::Finite => Ok(Placement::Blocks(vec![(0, 0); locals.len()], self.finite_bound())),
            ProviderKind::Interval => match self.interval(d)? {
                None => Ok(Placement::Whole),
                Some((len, bound)) => {
                    let len = len as i64;
                    let out = locals
                        .iter()
                        .map(|w| {
                            let k = exponent(w).div_euclid(len);
                            (k.rem_euclid(2) as usize, k)
                        })
                        .collect();
                    Ok(Placement::Blocks(out, bound))
                }
            },
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ProviderKind::Finite => "finite",
            ProviderKind::Interval => "interval",
        }
    }

    pub fn describe(&self) -> String {
        match self.kind {
            ProviderKind::Finite => format!("{}: one set per copy", self.label),
            ProviderKind::Interval => format!("{}: parity-colored intervals of powers", self.label),
        }
    }
}
