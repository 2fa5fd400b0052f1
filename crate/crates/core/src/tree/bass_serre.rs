//! Bass-Serre trees of free products, amalgams and HNN extensions, with
//! vertices named by canonical coset data.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::TreeSlice;
use crate::error::{Error, Result};
use crate::group::word::invert_word;
use crate::group::{ball, Element, Group, Kind, Letter, Word};

/// A vertex of the Bass-Serre tree.
///
/// Steps are the left normal form `ȳ₁⁻¹…ȳ_k⁻¹` of a coset representative,
/// stored as the factor index and the word `ȳ_i` of that factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKey {
    /// The coset `x·A_f`.
    Factor { steps: Vec<(usize, Word)>, factor: usize },
    /// The coset `x·C` (three or more factors).
    Center { steps: Vec<(usize, Word)> },
    /// The coset `x·G` of the HNN base.
    Coset { tail: Vec<(bool, Word)> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Product { factors: usize },
    Hnn,
}

/// The tree on which a free product, amalgam or HNN extension acts.
#[derive(Clone, Debug)]
pub struct BassSerre {
    group: Arc<Group>,
    shape: Shape,
}

fn shift(offset: usize, w: &[Letter]) -> Word {
    w.iter().map(|l| l.shifted(offset)).collect()
}

impl BassSerre {
    pub fn new(group: Arc<Group>) -> Result<Self> {
        let shape = match group.kind() {
            Kind::FreeProduct(p) if p.factors().len() >= 2 => Shape::Product {
                factors: p.factors().len(),
            },
            Kind::Amalgam(a) => Shape::Product {
                factors: a.factors().len(),
            },
            Kind::Hnn(_) => Shape::Hnn,
            _ => {
                return Err(Error::input(
                    "Bass-Serre trees need a free product, amalgam or HNN extension",
                ))
            }
        };
        Ok(BassSerre { group, shape })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    fn centers(&self) -> bool {
        matches!(self.shape, Shape::Product { factors } if factors >= 3)
    }

    fn offsets(&self) -> &[usize] {
        match self.group.kind() {
            Kind::FreeProduct(p) => &p.offsets,
            Kind::Amalgam(a) => a.offsets(),
            _ => &[],
        }
    }

    /// The basepoint `x₀`: the factor coset `A₀` (two factors), the
    /// subgroup `C` (three or more), or the base `G` (HNN).
    pub fn base(&self) -> VertexKey {
        match self.shape {
            Shape::Hnn => VertexKey::Coset { tail: Vec::new() },
            _ if self.centers() => VertexKey::Center { steps: Vec::new() },
            _ => VertexKey::Factor {
                steps: Vec::new(),
                factor: 0,
            },
        }
    }

    fn left_steps(&self, x: &Element) -> Vec<(usize, Word)> {
        let inv = invert_word(x.letters());
        let mut steps = match self.group.kind() {
            Kind::FreeProduct(p) => p.syllables(&self.group.reduce_word(&inv)),
            Kind::Amalgam(a) => a.form(&inv).syllables,
            _ => Vec::new(),
        };
        steps.reverse();
        steps
    }

    fn hnn_tail(&self, x: &Element) -> Vec<(bool, Word)> {
        let Kind::Hnn(h) = self.group.kind() else {
            return Vec::new();
        };
        let mut tail = h.form(&invert_word(x.letters())).tail;
        tail.reverse();
        tail
    }

    /// The vertex `x·A_f`.
    pub fn factor_vertex(&self, x: &Element, factor: usize) -> VertexKey {
        let mut steps = self.left_steps(x);
        if matches!(steps.last(), Some((f, _)) if *f == factor) {
            steps.pop();
        }
        VertexKey::Factor { steps, factor }
    }

    /// The vertex `x·v` for `v` of the same type as the basepoint.
    pub fn vertex(&self, x: &Element) -> VertexKey {
        match self.base() {
            VertexKey::Coset { .. } => VertexKey::Coset {
                tail: self.hnn_tail(x),
            },
            VertexKey::Center { .. } => VertexKey::Center {
                steps: self.left_steps(x),
            },
            VertexKey::Factor { factor, .. } => self.factor_vertex(x, factor),
        }
    }

    /// Every vertex whose coset contains `x`.
    pub fn vertices_containing(&self, x: &Element) -> Vec<VertexKey> {
        match self.shape {
            Shape::Hnn => vec![self.vertex(x)],
            Shape::Product { factors } => {
                let mut out: Vec<VertexKey> = (0..factors).map(|f| self.factor_vertex(x, f)).collect();
                if self.centers() {
                    out.push(VertexKey::Center {
                        steps: self.left_steps(x),
                    });
                }
                out
            }
        }
    }

    /// A representative `x` of the coset named by `v`.
    pub fn representative(&self, v: &VertexKey) -> Element {
        let mut w = Word::new();
        match v {
            VertexKey::Factor { steps, .. } | VertexKey::Center { steps } => {
                let offsets = self.offsets();
                for (f, y) in steps {
                    w.extend(shift(offsets[*f], &invert_word(y)));
                }
            }
            VertexKey::Coset { tail } => {
                if let Kind::Hnn(h) = self.group.kind() {
                    for (sign, r) in tail {
                        w.extend(invert_word(r));
                        w.push(Letter::new(h.stable(), *sign));
                    }
                }
            }
        }
        self.group.reduce(&w)
    }

    /// The image `g·v`.
    pub fn act(&self, g: &Element, v: &VertexKey) -> VertexKey {
        let x = self.group.mul(g, &self.representative(v));
        match v {
            VertexKey::Factor { factor, .. } => self.factor_vertex(&x, *factor),
            VertexKey::Center { .. } => VertexKey::Center {
                steps: self.left_steps(&x),
            },
            VertexKey::Coset { .. } => VertexKey::Coset {
                tail: self.hnn_tail(&x),
            },
        }
    }

    /// The neighbor of `v` one step closer to the basepoint.
    pub fn parent(&self, v: &VertexKey) -> Option<VertexKey> {
        match v {
            VertexKey::Coset { tail } => {
                let mut tail = tail.clone();
                tail.pop().map(|_| VertexKey::Coset { tail })
            }
            VertexKey::Center { steps } => {
                let mut steps = steps.clone();
                let (f, _) = steps.pop()?;
                Some(VertexKey::Factor { steps, factor: f })
            }
            VertexKey::Factor { steps, factor } => {
                if self.centers() {
                    return Some(VertexKey::Center {
                        steps: steps.clone(),
                    });
                }
                let mut steps = steps.clone();
                match steps.pop() {
                    Some((f, _)) => Some(VertexKey::Factor { steps, factor: f }),
                    None if *factor == 0 => None,
                    None => Some(self.base()),
                }
            }
        }
    }

    /// The path from `v` to the basepoint, starting at `v`.
    pub fn ancestry(&self, v: &VertexKey) -> Vec<VertexKey> {
        let mut out = vec![v.clone()];
        while let Some(p) = self.parent(out.last().expect("nonempty")) {
            out.push(p);
        }
        out
    }

    /// Distance to the basepoint.
    pub fn depth(&self, v: &VertexKey) -> u32 {
        self.ancestry(v).len() as u32 - 1
    }

    pub fn distance(&self, u: &VertexKey, v: &VertexKey) -> u32 {
        let au = self.ancestry(u);
        let av = self.ancestry(v);
        let pos: HashMap<&VertexKey, usize> = av.iter().enumerate().map(|(i, k)| (k, i)).collect();
        for (i, k) in au.iter().enumerate() {
            if let Some(&j) = pos.get(k) {
                return (i + j) as u32;
            }
        }
        (au.len() + av.len() - 2) as u32
    }

    /// `max_s d(x₀, s·x₀)` over the generators.
    pub fn displacement(&self) -> u32 {
        let base = self.base();
        self.group
            .letters()
            .iter()
            .map(|&l| self.distance(&base, &self.act(&self.group.reduce(&[l]), &base)))
            .max()
            .unwrap_or(0)
    }

    pub fn label(&self, v: &VertexKey) -> String {
        let rep = self.group.format(&self.representative(v));
        match v {
            VertexKey::Factor { factor, .. } => format!("{rep}*A{factor}"),
            VertexKey::Center { .. } => format!("{rep}*C"),
            VertexKey::Coset { .. } => format!("{rep}*G"),
        }
    }

    /// Slice spanned by `keys` and their ancestors; vertices ordered by
    /// weight (distance to the basepoint), then key.
    pub fn slice(&self, keys: impl IntoIterator<Item = VertexKey>, depth: u32) -> (TreeSlice, Vec<VertexKey>) {
        let mut all: BTreeSet<(u32, VertexKey)> = BTreeSet::new();
        for k in keys {
            let chain = self.ancestry(&k);
            let d = chain.len() as u32 - 1;
            for (i, v) in chain.into_iter().enumerate() {
                if !all.insert((d - i as u32, v)) {
                    break;
                }
            }
        }
        let order: Vec<(u32, VertexKey)> = all.into_iter().collect();
        let index: HashMap<&VertexKey, u32> = order.iter().enumerate().map(|(i, (_, k))| (k, i as u32)).collect();
        let mut edges = Vec::new();
        for (i, (_, k)) in order.iter().enumerate() {
            if let Some(p) = self.parent(k) {
                edges.push((index[&p], i as u32));
            }
        }
        let weight: Vec<u32> = order.iter().map(|(d, _)| *d).collect();
        let boundary = weight.iter().map(|&w| w >= depth).collect();
        let slice = TreeSlice {
            labels: order.iter().map(|(_, k)| self.label(k)).collect(),
            edges,
            depth: weight.iter().copied().max().unwrap_or(0).min(depth),
            weight,
            boundary,
        };
        (slice, order.into_iter().map(|(_, k)| k).collect())
    }
}

/// Tree slice of the vertices met by the ball of radius `radius`, truncated
/// to weight at most `depth`.
pub fn build_bass_serre(group: Arc<Group>, depth: u32, radius: u32, cap: usize) -> Result<(TreeSlice, Vec<VertexKey>)> {
    let bs = BassSerre::new(group.clone())?;
    let b = ball(&group, radius, cap)?;
    let mut keys = BTreeSet::new();
    for x in &b.elements {
        for v in bs.vertices_containing(x) {
            if bs.depth(&v) <= depth {
                keys.insert(v);
            }
        }
    }
    Ok(bs.slice(keys, depth))
}

/// `W_R(x₀) ∩ elements`: the elements moving the basepoint at most `r`.
pub fn r_stabilizer(bs: &BassSerre, elements: &[Element], r: u32) -> Vec<Element> {
    elements
        .iter()
        .filter(|g| bs.depth(&bs.vertex(g)) <= r)
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::tree::validate_tree;

    fn group(text: &str) -> Arc<Group> {
        Arc::new(Group::from_spec(&GroupSpec::from_toml(text).unwrap()).unwrap())
    }

    fn z2z2() -> Arc<Group> {
        group(
            r#"
kind = "free-product"
[[factors]]
kind = "cyclic"
generators = ["s"]
order = 2
[[factors]]
kind = "cyclic"
generators = ["t"]
order = 2
"#,
        )
    }

    fn trefoil() -> Arc<Group> {
        group(
            r#"
kind = "amalgam"
[[factors]]
kind = "free-abelian"
generators = ["a"]
[[factors]]
kind = "free-abelian"
generators = ["b"]
[subgroup]
gens_in_A = ["a a"]
gens_in_B = ["b b b"]
"#,
        )
    }

    fn bs12() -> Arc<Group> {
        group(
            r#"
kind = "hnn"
generators = ["y"]
[[factors]]
kind = "free-abelian"
generators = ["a"]
[phi]
a = "a a"
"#,
        )
    }

    fn three_factors() -> Arc<Group> {
        group(
            r#"
kind = "free-product"
[[factors]]
kind = "cyclic"
generators = ["a"]
order = 2
[[factors]]
kind = "cyclic"
generators = ["b"]
order = 3
[[factors]]
kind = "cyclic"
generators = ["c"]
order = 2
"#,
        )
    }

    #[test]
    fn infinite_dihedral_is_a_path() {
        let (t, _) = build_bass_serre(z2z2(), 4, 6, 1 << 16).unwrap();
        assert!(validate_tree(&t).passed);
        let adj = t.adjacency();
        assert!(adj.iter().all(|n| n.len() <= 2));
        assert_eq!(t.len(), 9);
    }

    #[test]
    fn three_factor_star() {
        let (t, keys) = build_bass_serre(three_factors(), 1, 4, 1 << 16).unwrap();
        assert!(validate_tree(&t).passed);
        let adj = t.adjacency();
        assert_eq!(adj[0].len(), 3);
        assert_eq!(keys[0], VertexKey::Center { steps: vec![] });
        let (t2, keys2) = build_bass_serre(three_factors(), 2, 6, 1 << 16).unwrap();
        assert!(validate_tree(&t2).passed);
        // Each factor vertex A_f has |A_f| - 1 further center neighbors.
        for (i, k) in keys2.iter().enumerate() {
            if let VertexKey::Factor { steps, factor } = k {
                if steps.is_empty() {
                    let order = [2, 3, 2][*factor];
                    assert_eq!(t2.adjacency()[i].len(), order, "{k:?}");
                }
            }
        }
    }

    #[test]
    fn slices_validate() {
        for g in [z2z2(), trefoil(), bs12(), three_factors()] {
            let (t, _) = build_bass_serre(g, 5, 6, 1 << 18).unwrap();
            let report = validate_tree(&t);
            assert!(report.passed, "{:?}", report.witness);
        }
    }

    #[test]
    fn action_is_by_automorphisms() {
        for g in [z2z2(), trefoil(), bs12(), three_factors()] {
            let bs = BassSerre::new(g.clone()).unwrap();
            let (t, keys) = build_bass_serre(g.clone(), 4, 5, 1 << 18).unwrap();
            let b = ball(&g, 3, 1 << 16).unwrap();
            for x in b.elements.iter().step_by(3) {
                for &(a, c) in &t.edges {
                    let (u, v) = (bs.act(x, &keys[a as usize]), bs.act(x, &keys[c as usize]));
                    assert_eq!(bs.distance(&u, &v), 1);
                }
                for k in keys.iter().take(20) {
                    assert_eq!(bs.act(&g.inv(x), &bs.act(x, k)), *k);
                }
            }
        }
    }

    #[test]
    fn representative_lies_in_coset() {
        for g in [z2z2(), trefoil(), bs12(), three_factors()] {
            let bs = BassSerre::new(g.clone()).unwrap();
            let b = ball(&g, 4, 1 << 16).unwrap();
            for x in &b.elements {
                for v in bs.vertices_containing(x) {
                    let rep = bs.representative(&v);
                    assert!(bs.vertices_containing(&rep).contains(&v));
                }
            }
        }
    }

    #[test]
    fn stabilizer_of_base() {
        let g = z2z2();
        let bs = BassSerre::new(g.clone()).unwrap();
        let b = ball(&g, 6, 1 << 16).unwrap();
        let w0 = r_stabilizer(&bs, &b.elements, 0);
        assert!(w0.contains(&g.parse("s").unwrap()));
        assert!(w0.contains(&Element::identity()));
        let mut prev = 0;
        for r in 0..8 {
            let w = r_stabilizer(&bs, &b.elements, r);
            assert!(w.len() >= prev);
            prev = w.len();
        }
        assert_eq!(bs.displacement(), 2);
        assert_eq!(BassSerre::new(bs12()).unwrap().displacement(), 1);
    }
}
