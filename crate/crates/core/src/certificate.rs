//! Self-contained, independently re-checkable records of pipeline runs.
//!
//! A certificate stores the configuration, the run parameters, the
//! families as canonical words and the hypothesis transcript. The digest
//! covers all of these. Verification regenerates the window from the
//! configuration and re-checks the families; stored verdicts are never
//! consulted.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cover::{verify_cover, Check, ColoredCover, Family};
use crate::engine::{PipelineConfig, PipelineOutput, PipelineParams};
use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::metric::{GroupWindow, Metric, PointId};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Content {
    pub format_version: u32,
    pub config: PipelineConfig,
    pub params: PipelineParams,
    /// Families of sets of canonical words, sorted.
    pub families: Vec<Vec<Vec<String>>>,
    pub transcript: Vec<Check>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdicts {
    pub disjoint: bool,
    pub covers: bool,
    pub bounded: bool,
    pub max_diameter: u32,
    pub transcript: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub content: Content,
    pub verdicts: Verdicts,
    pub digest: String,
}

/// Outcome of re-checking a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recheck {
    pub digest_ok: bool,
    pub verdicts: Verdicts,
    /// Human-readable reasons for failure, with witnesses.
    pub failures: Vec<String>,
}

impl Recheck {
    pub fn passed(&self) -> bool {
        self.digest_ok && self.verdicts.passed
    }
}

pub fn content_digest(content: &Content) -> String {
    let bytes = serde_json::to_vec(content).expect("content serializes");
    hex::encode(Sha256::digest(&bytes))
}

fn sorted_families(group: &Group, families: Vec<Vec<Vec<Element>>>) -> Vec<Vec<Vec<String>>> {
    families
        .into_iter()
        .map(|f| {
            let mut sets: Vec<Vec<Element>> = f
                .into_iter()
                .map(|mut s| {
                    s.sort();
                    s
                })
                .filter(|s| !s.is_empty())
                .collect();
            sets.sort();
            sets.into_iter()
                .map(|s| s.iter().map(|g| group.format(g)).collect())
                .collect()
        })
        .collect()
}

impl Certificate {
    pub fn from_run(config: &PipelineConfig, out: &PipelineOutput) -> Self {
        let families = sorted_families(out.window.group(), out.element_families());
        let content = Content {
            format_version: FORMAT_VERSION,
            config: config.clone(),
            params: out.params.clone(),
            families,
            transcript: out.transcript.checks.clone(),
        };
        let bound = out.cover.declared_bound().unwrap_or(0);
        let max_diameter = out.report.max_diameter;
        let transcript = out.transcript.passed();
        let verdicts = Verdicts {
            disjoint: out.report.disjoint(),
            covers: out.report.covers(),
            bounded: max_diameter as u64 <= bound,
            max_diameter,
            transcript,
            passed: out.report.passed() && max_diameter as u64 <= bound && transcript,
        };
        let digest = content_digest(&content);
        Certificate {
            content,
            verdicts,
            digest,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::spec(format!("certificate: {e}")))
    }

    /// Regenerates the window and re-checks the families.
    pub fn recheck(&self) -> Result<Recheck> {
        let c = &self.content;
        let mut failures = Vec::new();
        let digest_ok = content_digest(c) == self.digest;
        if !digest_ok {
            failures.push("digest does not match the certificate content".to_string());
        }
        if c.format_version != FORMAT_VERSION {
            return Err(Error::spec(format!("unsupported format version {}", c.format_version)));
        }
        let group = Arc::new(Group::from_spec(&c.config.group)?);
        let inner = c.config.inner_radius();
        if c.params.inner != inner || c.params.outer != c.config.radius || c.params.d != c.config.scale {
            failures.push("recorded parameters disagree with the configuration".to_string());
        }
        let window = GroupWindow::new(group.clone(), inner, c.config.radius, c.config.cap)?;
        let mut families = Vec::with_capacity(c.families.len());
        let mut bad_word = None;
        for f in &c.families {
            let mut sets = Vec::with_capacity(f.len());
            for s in f {
                let mut ids: Vec<PointId> = Vec::with_capacity(s.len());
                for w in s {
                    match parse_canonical(&group, &window, w) {
                        Ok(p) => ids.push(p),
                        Err(reason) => {
                            bad_word.get_or_insert(format!("`{w}`: {reason}"));
                        }
                    }
                }
                sets.push(ids);
            }
            families.push(Family::new(sets));
        }
        if let Some(b) = bad_word {
            failures.push(b);
        }
        let mut multiplicity: HashMap<PointId, usize> = HashMap::new();
        for f in &families {
            for p in f.points() {
                *multiplicity.entry(p).or_default() += 1;
            }
        }
        if families.len() != c.params.colors {
            failures.push(format!(
                "{} families recorded, {} colors claimed",
                families.len(),
                c.params.colors
            ));
        }
        let cover = ColoredCover::new(families, c.params.d, (0..window.len() as PointId).collect());
        let report = verify_cover(&window, &cover)?;
        for (i, f) in report.families.iter().enumerate() {
            if let Some(v) = &f.violation {
                failures.push(format!(
                    "family {i}: sets {} and {} meet at distance {} ({} and {})",
                    v.sets.0,
                    v.sets.1,
                    v.distance,
                    window.label(v.points.0),
                    window.label(v.points.1)
                ));
            }
        }
        if let Some(p) = report.missed {
            failures.push(format!("{} is not covered", window.label(p)));
        }
        let bound = c.params.stab_bound;
        let bounded = report.max_diameter as u64 <= bound;
        if !bounded {
            failures.push(format!("max diameter {} exceeds the bound {bound}", report.max_diameter));
        }
        let transcript = c.transcript.iter().all(|k| k.passed);
        if !transcript {
            failures.push("the transcript records a failed check".to_string());
        }
        let passed = failures.is_empty();
        Ok(Recheck {
            digest_ok,
            verdicts: Verdicts {
                disjoint: report.disjoint(),
                covers: report.covers(),
                bounded,
                max_diameter: report.max_diameter,
                transcript,
                passed,
            },
            failures,
        })
    }
}

fn parse_canonical(group: &Group, window: &GroupWindow, w: &str) -> std::result::Result<PointId, String> {
    let g = group.parse(w).map_err(|e| e.to_string())?;
    if group.format(&g) != w {
        return Err(format!("not canonical (canonical form `{}`)", group.format(&g)));
    }
    window.id(&g).ok_or_else(|| "outside the window".to_string())
}
