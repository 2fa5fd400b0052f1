//! Configured pipelines: free products, amalgams and HNN extensions act on
//! their Bass-Serre trees; quotients act on the image group.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::audit::{inequality_audit, neighborhood_containment, stabilizer_containment};
use super::action::{action_cover, ActionInput, OrbitAction, StabCover};
use super::quotient::{quotient_pipeline, QuotientSpec};
use super::strata::Strata;
use crate::cover::{verify_cover, ColoredCover, Transcript, VerifyReport};
use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupSpec};
use crate::metric::{GroupWindow, Metric, PointId};
use crate::tree::{tree_cover, BassSerre, TreeMetric, VertexKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineKind {
    FreeProduct,
    Amalgam,
    Hnn,
    Quotient,
}

impl PipelineKind {
    pub fn name(self) -> &'static str {
        match self {
            PipelineKind::FreeProduct => "free-product",
            PipelineKind::Amalgam => "amalgam",
            PipelineKind::Hnn => "hnn",
            PipelineKind::Quotient => "quotient",
        }
    }
}

fn default_padding() -> u32 {
    2
}

fn default_r_mult() -> u64 {
    5
}

fn default_cap() -> usize {
    1 << 22
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub pipeline: PipelineKind,
    pub scale: u64,
    /// Outer window radius; the cover is built on the ball of radius
    /// `radius / padding`.
    pub radius: u32,
    #[serde(default = "default_padding")]
    pub padding: u32,
    /// Ratio `r / R` between the union scale and the piece bound.
    #[serde(default = "default_r_mult")]
    pub r_mult: u64,
    #[serde(default = "default_cap")]
    pub cap: usize,
    /// Expected factor providers ("finite" or "interval"), checked against
    /// the ones chosen.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub providers: Vec<String>,
    pub group: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientSpec>,
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::spec(format!("config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs serialize")
    }

    pub fn inner_radius(&self) -> u32 {
        self.radius / self.padding.max(1)
    }

    fn validate(&self) -> Result<()> {
        if self.scale == 0 {
            return Err(Error::input("scale must be positive"));
        }
        if self.padding == 0 {
            return Err(Error::input("padding must be positive"));
        }
        if self.r_mult < 2 {
            return Err(Error::input("r_mult must be at least 2"));
        }
        if (self.pipeline == PipelineKind::Quotient) != self.quotient.is_some() {
            return Err(Error::input("a [quotient] table is required exactly for the quotient pipeline"));
        }
        Ok(())
    }
}

/// Parameters recorded with a pipeline run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub d: u64,
    pub inner: u32,
    pub outer: u32,
    pub lambda: u64,
    pub orbit_scale: u64,
    pub orbit_bound: u64,
    pub stab_bound: u64,
    pub r_mult: u64,
    /// Stabilizer families `n + 1`.
    pub stab_colors: usize,
    /// Orbit families `k + 1`.
    pub orbit_colors: usize,
    pub colors: usize,
}

pub struct PipelineOutput {
    pub window: GroupWindow,
    pub cover: ColoredCover,
    pub transcript: Transcript,
    pub report: VerifyReport,
    pub params: PipelineParams,
}

impl PipelineOutput {
    /// The cover's families as sets of elements.
    pub fn element_families(&self) -> Vec<Vec<Vec<Element>>> {
        self.cover
            .families
            .iter()
            .map(|f| {
                f.sets
                    .iter()
                    .map(|s| s.iter().map(|&p| self.window.element(p).clone()).collect())
                    .collect()
            })
            .collect()
    }
}

/// The action of a tree-acting group on its Bass-Serre slice.
pub struct TreeAction<'a> {
    bs: &'a BassSerre,
    keys: Vec<VertexKey>,
    index: std::collections::HashMap<VertexKey, PointId>,
    tree: TreeMetric,
    lambda: u64,
}

impl<'a> TreeAction<'a> {
    pub fn new(bs: &'a BassSerre, elements: &[Element]) -> Result<Self> {
        let (slice, keys) = bs.slice(elements.iter().map(|g| bs.vertex(g)), u32::MAX);
        let tree = TreeMetric::new(&slice, 0)?;
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i as PointId)).collect();
        Ok(TreeAction {
            bs,
            keys,
            index,
            tree,
            lambda: bs.displacement() as u64,
        })
    }

    pub fn tree(&self) -> &TreeMetric {
        &self.tree
    }
}

impl OrbitAction for TreeAction<'_> {
    fn orbit(&self) -> &dyn Metric {
        &self.tree
    }

    fn project(&self, g: &Element) -> Option<PointId> {
        self.index.get(&self.bs.vertex(g)).copied()
    }

    fn lift(&self, v: PointId) -> Element {
        self.bs.representative(&self.keys[v as usize])
    }

    fn lipschitz(&self) -> u64 {
        self.lambda
    }
}

fn expect_kind(config: &PipelineConfig, group: &Group) -> Result<()> {
    use crate::group::Kind;
    let ok = matches!(
        (config.pipeline, group.kind()),
        (PipelineKind::FreeProduct, Kind::FreeProduct(_))
            | (PipelineKind::Amalgam, Kind::Amalgam(_))
            | (PipelineKind::Hnn, Kind::Hnn(_))
    );
    if ok {
        Ok(())
    } else {
        Err(Error::input(format!(
            "the {} pipeline does not apply to {}",
            config.pipeline.name(),
            config.group.describe()
        )))
    }
}

fn tree_pipeline(config: &PipelineConfig) -> Result<PipelineOutput> {
    let group = Arc::new(Group::from_spec(&config.group)?);
    expect_kind(config, &group)?;
    let inner = config.inner_radius();
    let d = config.scale;
    let window = GroupWindow::new(group.clone(), inner, config.radius, config.cap)
        .map_err(|e| e.at_stage("window"))?;
    let oracle = window.oracle().clone();
    let strata = Strata::new(group.clone(), oracle, config.r_mult)?;
    if !config.providers.is_empty() {
        let chosen: Vec<String> = strata.providers().iter().map(|p| p.kind_name().to_string()).collect();
        if chosen != config.providers {
            return Err(Error::input(format!(
                "providers {:?} requested, {:?} available",
                config.providers, chosen
            )));
        }
    }
    let bs = strata.bass_serre();
    let action = TreeAction::new(bs, window.elements())?;
    let lambda = action.lipschitz().max(1);
    let orbit_scale = lambda * d;
    let orbit_cover = tree_cover(action.tree(), u32::try_from(orbit_scale).map_err(|_| Error::input("scale too large"))?)?;
    let orbit_bound = orbit_cover.declared_bound().unwrap_or(0);

    let mut transcript = Transcript::default();
    audits(config, &group, inner, &mut transcript)?;
    let mut stab_bound = 0;
    let points: Vec<PointId> = (0..window.len() as PointId).collect();
    let stab_colors = strata.colors();
    let (cover, t) = {
        let mut stab = |s: &[Element]| -> Result<StabCover> {
            let sw = strata.window(s, config.radius)?;
            let all: Vec<PointId> = (0..sw.len() as PointId).collect();
            let c = strata
                .cover(&sw, all, d, &mut transcript)
                .map_err(|e| e.at_stage("stabilizer cover"))?;
            let keep: std::collections::HashSet<&Element> = s.iter().collect();
            let families = c
                .families
                .iter()
                .map(|f| {
                    f.sets
                        .iter()
                        .map(|set| {
                            set.iter()
                                .map(|&p| sw.window.element(p).clone())
                                .filter(|e| keep.contains(e))
                                .collect::<Vec<_>>()
                        })
                        .filter(|set| !set.is_empty())
                        .collect()
                })
                .collect();
            stab_bound = c.declared_bound().unwrap_or(0);
            Ok(StabCover {
                families,
                bound: stab_bound,
            })
        };
        action_cover(
            &action,
            ActionInput {
                window: &window,
                points: &points,
                orbit_cover: &orbit_cover,
                d,
                stab_colors,
            },
            &mut stab,
        )?
    };
    transcript.extend(t);
    finish(window, cover, transcript, PipelineParams {
        d,
        inner,
        outer: config.radius,
        lambda,
        orbit_scale,
        orbit_bound,
        stab_bound,
        r_mult: config.r_mult,
        stab_colors,
        orbit_colors: orbit_cover.colors(),
        colors: 0,
    })
}

fn audits(config: &PipelineConfig, group: &Arc<Group>, inner: u32, t: &mut Transcript) -> Result<()> {
    use crate::group::Kind;
    if matches!(group.kind(), Kind::Amalgam(_) | Kind::Hnn(_)) {
        let a = inequality_audit(group, inner, config.cap)?;
        let detail = match a.violations.first() {
            Some(v) => format!("{}: norm {} below {}", v.element, v.norm, v.bound),
            None => format!("{} elements of the inner window", a.checked),
        };
        t.require("audit", &a.inequality, a.passed(), detail)?;
    }
    let two = match group.kind() {
        Kind::FreeProduct(p) => p.factors().len() == 2,
        Kind::Amalgam(a) => a.factors().len() == 2,
        _ => true,
    };
    if two {
        let c = stabilizer_containment(group, inner, config.cap)?;
        let detail = c.failures.first().cloned().unwrap_or_else(|| format!("{} elements", c.checked));
        t.require("audit", &c.claim, c.passed(), detail)?;
    }
    if let Kind::Hnn(_) = group.kind() {
        let r = u32::try_from(config.scale).unwrap_or(u32::MAX).min(inner);
        let c = neighborhood_containment(group, r, inner, config.cap)?;
        let detail = c.failures.first().cloned().unwrap_or_else(|| format!("{} elements", c.checked));
        t.require("audit", &c.claim, c.passed(), detail)?;
    }
    Ok(())
}

pub(crate) fn finish(
    window: GroupWindow,
    cover: ColoredCover,
    mut transcript: Transcript,
    mut params: PipelineParams,
) -> Result<PipelineOutput> {
    let report = verify_cover(&window, &cover)?;
    params.colors = cover.colors();
    transcript.record(
        "verification",
        "cover is d-disjoint on the inner window",
        report.disjoint(),
        format!("scale {}", cover.scale),
    );
    transcript.record(
        "verification",
        "cover covers the inner window",
        report.covers(),
        format!("{} points", window.len()),
    );
    Ok(PipelineOutput {
        window,
        cover,
        transcript,
        report,
        params,
    })
}

/// Runs the configured pipeline and verifies its output on the inner
/// window.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineOutput> {
    config.validate()?;
    if (config.inner_radius() as u64) < config.scale {
        return Err(Error::exhausted(
            "window",
            format!(
                "inner radius {} is below the scale {}; raise the radius to at least {}",
                config.inner_radius(),
                config.scale,
                config.scale * config.padding as u64
            ),
        ));
    }
    match config.pipeline {
        PipelineKind::Quotient => quotient_pipeline(config),
        _ => tree_pipeline(config),
    }
}
