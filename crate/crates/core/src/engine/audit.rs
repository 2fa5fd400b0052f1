//! Exhaustive audits of the norm inequalities and containments used by
//! the amalgam and HNN pipelines.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, Group, Kind, Letter, NormTable, Word};
use crate::tree::BassSerre;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditViolation {
    pub element: String,
    pub norm: u32,
    pub bound: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub inequality: String,
    pub radius: u32,
    pub checked: usize,
    pub violations: Vec<AuditViolation>,
    /// Count of elements per slack `‖x‖ − bound`.
    pub tightness: BTreeMap<u32, usize>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, group: &Group, x: &Element, norm: u32, bound: u32) {
        self.checked += 1;
        if norm >= bound {
            *self.tightness.entry(norm - bound).or_default() += 1;
        } else {
            self.violations.push(AuditViolation {
                element: group.format(x),
                norm,
                bound,
            });
        }
    }
}

/// Least norm over each right coset met by the table, keyed by coset.
struct CosetNorms<K> {
    best: HashMap<K, (u32, Element)>,
    horizon: u32,
}

impl<K: std::hash::Hash + Eq> CosetNorms<K> {
    fn build(table: &NormTable, key: impl Fn(&Element) -> Option<K>) -> Self {
        let mut best: HashMap<K, (u32, Element)> = HashMap::new();
        for r in 0..=table.horizon() {
            for h in table.sphere(r) {
                if let Some(k) = key(h) {
                    best.entry(k).or_insert_with(|| (r, h.clone()));
                }
            }
        }
        CosetNorms {
            best,
            horizon: table.horizon(),
        }
    }

    /// Distance to the subgroup, or `horizon + 1` as a lower bound when no
    /// coset element lies in the table.
    fn dist(&self, k: &K) -> u32 {
        self.best.get(k).map_or(self.horizon + 1, |(n, _)| *n)
    }

    fn nearest(&self, k: &K) -> Option<&Element> {
        self.best.get(k).map(|(_, h)| h)
    }
}

fn table(group: &Arc<Group>, radius: u32, cap: usize) -> Result<NormTable> {
    NormTable::build(group, radius, cap).map_err(|e| e.at_stage("audit"))
}

/// `‖x‖ ≥ Σ d(x̄_i, C)` over the normal presentation `c·x̄₁…x̄_k` of every
/// element of the ball.
pub fn amalgam_audit(group: &Arc<Group>, radius: u32, cap: usize) -> Result<AuditReport> {
    let Kind::Amalgam(a) = group.kind() else {
        return Err(Error::input("the amalgam audit needs an amalgamated product"));
    };
    let t = table(group, radius, cap)?;
    let cosets = CosetNorms::build(&t, |h| {
        let mut s = a.form(h.letters()).syllables;
        (s.len() == 1).then(|| s.pop().unwrap())
    });
    let mut report = AuditReport {
        inequality: "‖x‖ ≥ Σ d(x̄ᵢ, C)".into(),
        radius,
        ..Default::default()
    };
    for r in 0..=radius {
        for x in t.sphere(r) {
            let bound = a.form(x.letters()).syllables.iter().map(|s| cosets.dist(s)).sum();
            report.record(group, x, r, bound);
        }
    }
    Ok(report)
}

struct HnnCosets {
    a: CosetNorms<Word>,
    phi_a: CosetNorms<Word>,
}

impl HnnCosets {
    fn build(group: &Arc<Group>, t: &NormTable) -> Result<Self> {
        let Kind::Hnn(h) = group.kind() else {
            return Err(Error::input("the HNN audit needs an HNN extension"));
        };
        let in_base = |g: &Element| {
            let f = h.form(g.letters());
            f.tail.is_empty().then_some(f.head)
        };
        Ok(HnnCosets {
            a: CosetNorms::build(t, |g| in_base(g).map(|w| h.subgroup_a().coset_rep(&w))),
            phi_a: CosetNorms::build(t, |g| in_base(g).map(|w| h.subgroup_phi_a().coset_rep(&w))),
        })
    }

    /// Cosets of `A` follow `y`, cosets of `φ(A)` follow `y⁻¹`.
    fn of(&self, sign: bool) -> &CosetNorms<Word> {
        if sign {
            &self.a
        } else {
            &self.phi_a
        }
    }
}

/// `‖x‖ ≥ d(g_n, A)` when the last stable letter is `y`, and
/// `‖x‖ ≥ d(g_n, φ(A))` when it is `y⁻¹`, on every element of the ball.
pub fn hnn_audit(group: &Arc<Group>, radius: u32, cap: usize) -> Result<AuditReport> {
    let t = table(group, radius, cap)?;
    let cosets = HnnCosets::build(group, &t)?;
    let Kind::Hnn(h) = group.kind() else { unreachable!() };
    let mut report = AuditReport {
        inequality: "‖x‖ ≥ d(gₙ, A) for εₙ = 1, d(gₙ, φ(A)) for εₙ = −1".into(),
        radius,
        ..Default::default()
    };
    for r in 0..=radius {
        for x in t.sphere(r) {
            let bound = match h.form(x.letters()).tail.last() {
                Some((sign, g)) => cosets.of(*sign).dist(g),
                None => 0,
            };
            report.record(group, x, r, bound);
        }
    }
    Ok(report)
}

/// Runs the audit that applies to `group`.
pub fn inequality_audit(group: &Arc<Group>, radius: u32, cap: usize) -> Result<AuditReport> {
    match group.kind() {
        Kind::Amalgam(_) => amalgam_audit(group, radius, cap),
        Kind::Hnn(_) => hnn_audit(group, radius, cap),
        _ => Err(Error::input("inequality audits apply to amalgams and HNN extensions")),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub claim: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ContainmentReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `W_k(A) ⊆ (BA)^k` (`k ≥ 1`; `W_0(A) = A`) for two-factor free
/// products and amalgams, and `W_k(G) ⊆ P_0 ∪ … ∪ P_k` for HNN extensions,
/// over the ball of radius `radius`.
pub fn stabilizer_containment(group: &Arc<Group>, radius: u32, cap: usize) -> Result<ContainmentReport> {
    let bs = BassSerre::new(group.clone())?;
    let t = table(group, radius, cap)?;
    let base = bs.base();
    let mut floor = 1;
    let (claim, length): (&str, Box<dyn Fn(&Element) -> u32>) = match group.kind() {
        Kind::Hnn(h) => {
            floor = 0;
            ("W_k(G) ⊆ P_0 ∪ … ∪ P_k", Box::new(|x: &Element| h.form(x.letters()).tail.len() as u32))
        }
        Kind::FreeProduct(p) if p.factors().len() == 2 => (
            "W_k(A) ⊆ (BA)^k",
            Box::new(|x: &Element| ba_length(&p.syllables(x.letters()))),
        ),
        Kind::Amalgam(a) if a.factors().len() == 2 => (
            "W_k(A) ⊆ (BA)^k",
            Box::new(|x: &Element| ba_length(&a.form(x.letters()).syllables)),
        ),
        _ => return Err(Error::input("containment audits need two factors or an HNN extension")),
    };
    let mut report = ContainmentReport {
        claim: claim.into(),
        ..Default::default()
    };
    for x in t.within(radius) {
        let k = bs.distance(&base, &bs.act(x, &base)).max(floor);
        let l = length(x);
        report.checked += 1;
        if l > k {
            report
                .failures
                .push(format!("{}: moves the base {k}, length {l}", group.format(x)));
        }
    }
    Ok(report)
}

/// Least `k` with the syllables in `(BA)^k`, `A` being factor 0.
fn ba_length(syllables: &[(usize, Word)]) -> u32 {
    let Some(first) = syllables.first() else { return 0 };
    let last = syllables.last().unwrap();
    let padded = syllables.len() + usize::from(first.0 == 0) + usize::from(last.0 == 1);
    (padded / 2) as u32
}

/// `Y_r ⊆ N_{r+1}(P_{l−1})`: every `z = x·y^ε·g` of the ball with
/// `d(g, A) ≤ r` (resp. `φ(A)`) lies within `r + 1` of an element of
/// length `l − 1`, exhibited as `z·h⁻¹·y^{−ε}` for the nearest `h ∈ A·g`.
pub fn neighborhood_containment(group: &Arc<Group>, r: u32, radius: u32, cap: usize) -> Result<ContainmentReport> {
    let Kind::Hnn(h) = group.kind() else {
        return Err(Error::input("the neighborhood containment applies to HNN extensions"));
    };
    let t = table(group, radius.max(r), cap)?;
    let cosets = HnnCosets::build(group, &t)?;
    let mut report = ContainmentReport {
        claim: format!("Y_{r} ⊆ N_{}(P_(l-1))", r + 1),
        ..Default::default()
    };
    for z in t.within(radius) {
        let form = h.form(z.letters());
        let Some((sign, g)) = form.tail.last() else { continue };
        let c = cosets.of(*sign);
        if c.dist(g) > r {
            continue;
        }
        report.checked += 1;
        let nearest = c.nearest(g).expect("coset met by the table");
        let mut w = group.mul(z, &group.inv(nearest)).into_word();
        w.push(Letter::new(h.stable(), *sign));
        let w = group.reduce(&w);
        let step = group.between(&w, z);
        let close = t.get(&step).is_some_and(|n| n <= r + 1);
        let shorter = h.form(w.letters()).tail.len() + 1 == form.tail.len();
        if !close || !shorter {
            report.failures.push(format!(
                "{} with witness {}",
                group.format(z),
                group.format(&w)
            ));
        }
    }
    Ok(report)
}
