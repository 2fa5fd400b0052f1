//! Witnesses that a homomorphism from a free or amalgamated product,
//! isometric on each factor, is a coarsely uniform embedding.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::word::invert_word;
use crate::group::{Element, Group, GroupSpec, Kind, Word};
use crate::metric::{coarse_uniform_witness, CoarseWitness, GroupWindow, NormOracle, PointId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSpec {
    pub source: GroupSpec,
    pub target: GroupSpec,
    /// Image word in the target for every source generator.
    pub images: BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    /// Factor elements whose norms were compared.
    pub factor_checks: usize,
    pub witness: CoarseWitness,
}

struct Map {
    target: Arc<Group>,
    images: Vec<Word>,
}

impl Map {
    fn apply(&self, x: &Element) -> Element {
        let mut w = Word::new();
        for l in x.letters() {
            let img = &self.images[l.generator()];
            if l.is_inverse() {
                w.extend(invert_word(img));
            } else {
                w.extend_from_slice(img);
            }
        }
        self.target.reduce(&w)
    }
}

/// Factor of `x` when it lies in a single factor (identity excluded).
fn factor_of(group: &Group, x: &Element) -> Option<usize> {
    match group.kind() {
        Kind::FreeProduct(p) => match p.syllables(x.letters()).as_slice() {
            [(f, _)] => Some(*f),
            _ => None,
        },
        Kind::Amalgam(a) => {
            let form = a.form(x.letters());
            match form.syllables.as_slice() {
                [] if !form.head.is_empty() => Some(0),
                [(f, _)] => Some(*f),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Checks that `ψ` is a homomorphism injective on the ball of radius
/// `radius` and isometric on each factor there, then measures its
/// Lipschitz constant and lower control function on that ball.
pub fn embedding_witness(spec: &EmbeddingSpec, radius: u32, cap: usize) -> Result<EmbeddingReport> {
    let source = Arc::new(Group::from_spec(&spec.source)?);
    if !matches!(source.kind(), Kind::FreeProduct(_) | Kind::Amalgam(_)) {
        return Err(Error::input("the source must be a free or amalgamated product"));
    }
    let target = Arc::new(Group::from_spec(&spec.target)?);
    let mut images = Vec::new();
    for label in source.alphabet().labels() {
        let text = spec
            .images
            .get(label)
            .ok_or_else(|| Error::input(format!("no image for generator {label}")))?;
        images.push(target.parse(text)?.into_word());
    }
    for key in spec.images.keys() {
        if source.alphabet().index_of(key).is_none() {
            return Err(Error::input(format!("image given for unknown generator {key}")));
        }
    }
    let map = Map {
        target: target.clone(),
        images,
    };
    let outer = 2 * radius;
    let window = GroupWindow::new(source.clone(), radius, outer, cap)?;
    let mapped: Vec<Element> = window.elements().iter().map(|x| map.apply(x)).collect();

    for (x, fx) in window.elements().iter().zip(&mapped) {
        for l in source.letters() {
            let s = source.reduce(&[l]);
            let lhs = target.mul(fx, &map.apply(&s));
            let rhs = map.apply(&source.mul(x, &s));
            if lhs != rhs {
                return Err(Error::input(format!(
                    "ψ is not a homomorphism: ψ({})ψ({}) ≠ ψ({} {})",
                    source.format(x),
                    source.format(&s),
                    source.format(x),
                    source.format(&s)
                )));
            }
        }
    }

    let mut seen = HashSet::new();
    for (x, fx) in window.elements().iter().zip(&mapped) {
        if !seen.insert(fx.clone()) {
            return Err(Error::input(format!(
                "ψ is not injective on the window: {} collides",
                source.format(x)
            )));
        }
    }

    let target_oracle = Arc::new(NormOracle::new(target.clone(), outer, cap)?);
    let mut factor_checks = 0;
    for (x, fx) in window.elements().iter().zip(&mapped) {
        let Some(f) = factor_of(&source, x) else { continue };
        let a = window.oracle().norm(x)?;
        let b = target_oracle.norm(fx)?;
        if a != b {
            return Err(Error::input(format!(
                "ψ is not isometric on factor {f}: ‖{}‖ = {a} but ‖ψ({})‖ = {b}",
                source.format(x),
                source.format(x)
            )));
        }
        factor_checks += 1;
    }

    let image_window = GroupWindow::with_elements(target_oracle, mapped.clone(), radius);
    let psi: Vec<PointId> = mapped
        .iter()
        .map(|y| image_window.id(y).expect("images are in the image window"))
        .collect();
    let witness = coarse_uniform_witness(&window, &image_window, &psi, outer)?;
    Ok(EmbeddingReport {
        factor_checks,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_z2() -> GroupSpec {
        GroupSpec::from_toml(
            "kind = \"free-product\"\n[[factors]]\nkind = \"cyclic\"\ngenerators = [\"s\"]\norder = 2\n[[factors]]\nkind = \"cyclic\"\ngenerators = [\"t\"]\norder = 2\n",
        )
        .unwrap()
    }

    fn images(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn identity_embedding() {
        let spec = EmbeddingSpec {
            source: z2_z2(),
            target: z2_z2(),
            images: images(&[("s", "s"), ("t", "t")]),
        };
        let r = embedding_witness(&spec, 5, 1 << 16).unwrap();
        assert_eq!(r.witness.lipschitz.lambda, 1);
        for s in 0..=10 {
            assert_eq!(r.witness.rho_at(s), s);
        }
        assert_eq!(r.factor_checks, 2);
    }

    #[test]
    fn square_racg_contains_infinite_dihedral_copies() {
        let spec = EmbeddingSpec {
            source: z2_z2(),
            target: GroupSpec::racg(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]),
            images: images(&[("s", "a"), ("t", "c")]),
        };
        let r = embedding_witness(&spec, 6, 1 << 16).unwrap();
        assert_eq!(r.witness.lipschitz.lambda, 1);
        assert!(r.witness.lipschitz.adjacent_one_lipschitz);
    }

    #[test]
    fn stretched_factor_is_rejected() {
        let spec = EmbeddingSpec {
            source: z2_z2(),
            target: GroupSpec::racg(&["a", "b", "c"], &[]),
            images: images(&[("s", "a"), ("t", "b c b")]),
        };
        let err = embedding_witness(&spec, 4, 1 << 16).unwrap_err().to_string();
        assert!(err.contains("isometric on factor 1"), "{err}");
        assert!(err.contains("‖t‖ = 1"), "{err}");
    }

    #[test]
    fn non_homomorphism_is_rejected() {
        let spec = EmbeddingSpec {
            source: z2_z2(),
            target: GroupSpec::free(&["x", "y"]),
            images: images(&[("s", "x"), ("t", "y")]),
        };
        assert!(embedding_witness(&spec, 3, 1 << 16).is_err());
    }
}
