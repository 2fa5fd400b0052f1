//! Serializable group descriptions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupSpec {
    /// Cyclic group of the given order on a single generator.
    Cyclic { generators: Vec<String>, order: u32 },
    /// Finite group from a Cayley table; `elements` lists the table entries
    /// named by `generators`. Entry 0 is the identity.
    Finite {
        generators: Vec<String>,
        table: Vec<Vec<u32>>,
        elements: Vec<u32>,
    },
    FreeAbelian { generators: Vec<String> },
    Free { generators: Vec<String> },
    FreeProduct { factors: Vec<GroupSpec> },
    /// Factors amalgamated along a common subgroup.
    Amalgam {
        factors: Vec<GroupSpec>,
        subgroup: SubgroupSpec,
    },
    /// HNN extension of the single factor; `generators` names the stable
    /// letter and `phi` maps generators of the associated subgroup to
    /// their images.
    Hnn {
        factors: Vec<GroupSpec>,
        generators: Vec<String>,
        phi: BTreeMap<String, String>,
    },
    Racg { graph: GraphSpec },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSpec {
    #[serde(rename = "gens_in_A", default)]
    pub gens_in_a: Vec<String>,
    #[serde(rename = "gens_in_B", default)]
    pub gens_in_b: Vec<String>,
    /// Per-factor generator words when there are more than two factors.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gens: Vec<Vec<String>>,
}

impl SubgroupSpec {
    pub fn per_factor(&self, factors: usize) -> Result<Vec<Vec<String>>> {
        if !self.gens.is_empty() {
            if !self.gens_in_a.is_empty() || !self.gens_in_b.is_empty() {
                return Err(Error::spec("subgroup: use either gens or gens_in_A/gens_in_B"));
            }
            if self.gens.len() != factors {
                return Err(Error::spec(format!(
                    "subgroup: {} generator lists for {factors} factors",
                    self.gens.len()
                )));
            }
            return Ok(self.gens.clone());
        }
        if factors == 2 {
            return Ok(vec![self.gens_in_a.clone(), self.gens_in_b.clone()]);
        }
        if self.gens_in_a.is_empty() && self.gens_in_b.is_empty() {
            return Ok(vec![Vec::new(); factors]);
        }
        Err(Error::spec(
            "subgroup: gens_in_A/gens_in_B need exactly two factors",
        ))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
}

impl GroupSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::input(format!("group spec: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("group specs serialize")
    }

    pub fn free(labels: &[&str]) -> Self {
        GroupSpec::Free {
            generators: labels.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn free_abelian(labels: &[&str]) -> Self {
        GroupSpec::FreeAbelian {
            generators: labels.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn cyclic(label: &str, order: u32) -> Self {
        GroupSpec::Cyclic {
            generators: vec![label.to_string()],
            order,
        }
    }

    pub fn racg(vertices: &[&str], edges: &[(&str, &str)]) -> Self {
        GroupSpec::Racg {
            graph: GraphSpec {
                vertices: vertices.iter().map(|s| s.to_string()).collect(),
                edges: edges
                    .iter()
                    .map(|(s, t)| [s.to_string(), t.to_string()])
                    .collect(),
            },
        }
    }

    /// Short human-readable name used in reports.
    pub fn describe(&self) -> String {
        match self {
            GroupSpec::Cyclic { order, .. } => format!("Z{order}"),
            GroupSpec::Finite { table, .. } => format!("G{}", table.len()),
            GroupSpec::FreeAbelian { generators } => format!("Z^{}", generators.len()),
            GroupSpec::Free { generators } => format!("F{}", generators.len()),
            GroupSpec::FreeProduct { factors } => factors
                .iter()
                .map(|f| f.describe())
                .collect::<Vec<_>>()
                .join("*"),
            GroupSpec::Amalgam { factors, .. } => format!(
                "amalgam({})",
                factors
                    .iter()
                    .map(|f| f.describe())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            GroupSpec::Hnn { factors, .. } => format!(
                "hnn({})",
                factors
                    .iter()
                    .map(|f| f.describe())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            GroupSpec::Racg { graph } => format!("racg({})", graph.vertices.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let text = r#"
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
"#;
        let spec = GroupSpec::from_toml(text).unwrap();
        let again = GroupSpec::from_toml(&spec.to_toml()).unwrap();
        assert_eq!(spec, again);
        assert_eq!(spec.to_toml(), again.to_toml());
        match &spec {
            GroupSpec::Amalgam { subgroup, .. } => {
                assert_eq!(subgroup.per_factor(2).unwrap()[1], vec!["b b b"]);
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn hnn_round_trip() {
        let text = r#"
kind = "hnn"
generators = ["y"]

[[factors]]
kind = "free-abelian"
generators = ["a"]

[phi]
a = "a a"
"#;
        let spec = GroupSpec::from_toml(text).unwrap();
        assert_eq!(GroupSpec::from_toml(&spec.to_toml()).unwrap(), spec);
    }

    #[test]
    fn rejects_unknown_kind() {
        assert!(GroupSpec::from_toml("kind = \"lie\"\n").is_err());
    }
}
