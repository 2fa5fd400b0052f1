//! Covers of a free abelian group `G` through an epimorphism `φ: G → Z`,
//! with `G` acting on `H = Z` by `g·h = φ(g) + h` and `H` metrized by the
//! images of the generators.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::action::{action_cover, ActionInput, OrbitAction, StabCover};
use super::pipeline::{finish, PipelineConfig, PipelineOutput, PipelineParams};
use crate::cover::{ColoredCover, Family, Transcript};
use crate::error::{Error, Result};
use crate::group::{abelian, Element, Group, GroupSpec, Kind};
use crate::metric::{GroupWindow, Metric, PointId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientSpec {
    pub target: GroupSpec,
    /// Image word in the target for every generator of the source.
    pub phi: BTreeMap<String, String>,
}

/// `φ: Z^m → Z` with its kernel.
#[derive(Clone, Debug)]
pub struct Quotient {
    group: Arc<Group>,
    rank: usize,
    images: Vec<i64>,
    /// Primitive generator of the kernel, if it is nontrivial.
    kernel: Option<Vec<i64>>,
    /// Norms `‖h‖_H` for `|h| ≤ span`.
    norms: Vec<u32>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `(g, x, y)` with `ax + by = g = gcd(a, b)`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

impl Quotient {
    pub fn new(source: &GroupSpec, spec: &QuotientSpec) -> Result<Self> {
        let group = Arc::new(Group::from_spec(source)?);
        let Kind::FreeAbelian(rank) = *group.kind() else {
            return Err(Error::input("the quotient pipeline needs a free abelian source group"));
        };
        if rank == 0 || rank > 2 {
            return Err(Error::input("the quotient pipeline supports sources of rank 1 or 2"));
        }
        let target = Group::from_spec(&spec.target)?;
        if !matches!(target.kind(), Kind::FreeAbelian(1) | Kind::Free(1)) {
            return Err(Error::input("the quotient target must be infinite cyclic"));
        }
        let mut images = Vec::with_capacity(rank);
        for label in group.alphabet().labels() {
            let text = spec
                .phi
                .get(label)
                .ok_or_else(|| Error::input(format!("phi has no image for {label}")))?;
            let w = target.parse(text)?;
            images.push(abelian::vector(1, w.letters())[0]);
        }
        for key in spec.phi.keys() {
            if group.alphabet().index_of(key).is_none() {
                return Err(Error::input(format!("phi names unknown generator {key}")));
            }
        }
        let g = images.iter().fold(0, |acc, &p| gcd(acc, p));
        if g != 1 {
            return Err(Error::input(format!("phi is not onto: images generate {g}Z")));
        }
        let kernel = match images.as_slice() {
            [_] => None,
            [p, q] => {
                let k = vec![q / g, -p / g];
                let sign = if k.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) { -1 } else { 1 };
                Some(k.into_iter().map(|c| c * sign).collect())
            }
            _ => unreachable!(),
        };
        Ok(Quotient {
            group,
            rank,
            images,
            kernel,
            norms: vec![0],
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn kernel(&self) -> Option<&[i64]> {
        self.kernel.as_deref()
    }

    pub fn vector(&self, g: &Element) -> Vec<i64> {
        abelian::vector(self.rank, g.letters())
    }

    pub fn element(&self, v: &[i64]) -> Element {
        Element::from_canonical(abelian::word(v))
    }

    pub fn phi(&self, g: &Element) -> i64 {
        self.vector(g).iter().zip(&self.images).map(|(a, b)| a * b).sum()
    }

    fn max_step(&self) -> i64 {
        self.images.iter().map(|p| p.abs()).max().unwrap_or(1)
    }

    /// Extends the norm table of `H` to cover `|h| ≤ span`.
    fn ensure(&mut self, span: i64) {
        if (self.norms.len() as i64) > span {
            return;
        }
        let span = span.max(2 * self.norms.len() as i64);
        let reach = span + self.max_step();
        let size = (2 * reach + 1) as usize;
        let mut dist = vec![u32::MAX; size];
        let mut queue = VecDeque::new();
        dist[reach as usize] = 0;
        queue.push_back(reach);
        let steps: Vec<i64> = self.images.iter().filter(|&&p| p != 0).flat_map(|&p| [p, -p]).collect();
        while let Some(x) = queue.pop_front() {
            let dx = dist[x as usize];
            for s in &steps {
                let y = x + s;
                if (0..size as i64).contains(&y) && dist[y as usize] == u32::MAX {
                    dist[y as usize] = dx + 1;
                    queue.push_back(y);
                }
            }
        }
        self.norms = (0..=span).map(|h| dist[(reach + h) as usize]).collect();
    }

    /// `‖h‖_H`; requires `ensure` to have covered `|h|`.
    pub fn h_norm(&self, h: i64) -> u32 {
        self.norms[h.unsigned_abs() as usize]
    }

    /// `‖h‖_H` for any `h`.
    pub fn norm_of(&mut self, h: i64) -> u32 {
        self.ensure(h.abs());
        self.h_norm(h)
    }

    /// Some element with `φ(g) = h`.
    pub fn lift(&self, h: i64) -> Element {
        let v = match self.images.as_slice() {
            [p] => vec![h * p.signum()],
            [p, q] => {
                let (_, x, y) = ext_gcd(*p, *q);
                vec![h * x, h * y]
            }
            _ => unreachable!(),
        };
        self.element(&v)
    }

    /// The kernel element `t·k` nearest to `g`, with the distance.
    pub fn nearest_kernel(&self, g: &[i64]) -> Option<(i64, u32)> {
        let k = self.kernel.as_ref()?;
        let dist = |t: i64| -> u32 { g.iter().zip(k).map(|(a, b)| (a - t * b).unsigned_abs() as u32).sum() };
        let mut cands = vec![0];
        for (a, b) in g.iter().zip(k) {
            if *b != 0 {
                cands.push(a.div_euclid(*b));
                cands.push(a.div_euclid(*b) + 1);
            }
        }
        cands.into_iter().map(|t| (t, dist(t))).min_by_key(|&(t, d)| (d, t))
    }

    fn kernel_norm(&self) -> u64 {
        self.kernel.as_ref().map_or(0, |k| k.iter().map(|c| c.unsigned_abs()).sum())
    }
}

/// Checks `W_R(e) = N_R(K)` on the ball of radius `radius`, with the two
/// set sizes.
pub fn neighborhood_identity(q: &mut Quotient, r: u32, radius: u32) -> Result<(bool, usize, usize)> {
    let ball = crate::group::ball(&q.group, radius, 1 << 24)?;
    q.ensure(q.max_step() * radius as i64 + 1);
    let mut w = HashSet::new();
    let mut n = HashSet::new();
    let kernel: Vec<Vec<i64>> = match &q.kernel {
        None => vec![vec![0; q.rank]],
        Some(k) => {
            let kn = q.kernel_norm() as i64;
            let reach = (radius as i64 + r as i64) / kn.max(1) + 1;
            (-reach..=reach).map(|t| k.iter().map(|c| c * t).collect()).collect()
        }
    };
    for g in &ball.elements {
        let v = q.vector(g);
        if q.h_norm(q.phi(g)) <= r {
            w.insert(g.clone());
        }
        let near = kernel
            .iter()
            .any(|k| v.iter().zip(k).map(|(a, b)| (a - b).unsigned_abs()).sum::<u64>() <= r as u64);
        if near {
            n.insert(g.clone());
        }
    }
    Ok((w == n, w.len(), n.len()))
}

struct HLine {
    lo: i64,
    len: usize,
    norms: Vec<u32>,
}

impl Metric for HLine {
    fn len(&self) -> usize {
        self.len
    }

    fn dist(&self, a: PointId, b: PointId) -> Result<u32> {
        Ok(self.norms[(a as i64 - b as i64).unsigned_abs() as usize])
    }

    fn label(&self, a: PointId) -> String {
        (self.lo + a as i64).to_string()
    }
}

struct QuotientAction<'a> {
    q: &'a Quotient,
    line: HLine,
    lambda: u64,
}

impl OrbitAction for QuotientAction<'_> {
    fn orbit(&self) -> &dyn Metric {
        &self.line
    }

    fn project(&self, g: &Element) -> Option<PointId> {
        let v = self.q.phi(g) - self.line.lo;
        (0..self.line.len as i64).contains(&v).then_some(v as PointId)
    }

    fn lift(&self, v: PointId) -> Element {
        self.q.lift(self.line.lo + v as i64)
    }

    fn lipschitz(&self) -> u64 {
        self.lambda
    }
}

/// Interval cover of `H` at scale `scale`: blocks of `L` consecutive
/// integers colored by parity.
fn interval_cover(line: &HLine, q: &Quotient, scale: u64) -> ColoredCover {
    let l = 1 + (0..q.norms.len() as i64)
        .filter(|&h| (q.h_norm(h) as u64) < scale)
        .max()
        .unwrap_or(0);
    let bound = (0..l).map(|h| q.h_norm(h) as u64).max().unwrap_or(0);
    let mut blocks: BTreeMap<i64, Vec<PointId>> = BTreeMap::new();
    for v in 0..line.len as PointId {
        blocks.entry((line.lo + v as i64).div_euclid(l)).or_default().push(v);
    }
    let mut fams = vec![Vec::new(), Vec::new()];
    for (j, set) in blocks {
        fams[j.rem_euclid(2) as usize].push(set);
    }
    let families = fams
        .into_iter()
        .map(|s| Family::new(s).with_bound(bound).with_gap(scale))
        .collect();
    ColoredCover::new(families, scale, (0..line.len as PointId).collect())
}

pub(crate) fn quotient_pipeline(config: &PipelineConfig) -> Result<PipelineOutput> {
    let spec = config.quotient.as_ref().expect("validated");
    let mut q = Quotient::new(&config.group, spec)?;
    let d = config.scale;
    let inner = config.inner_radius();
    let window = GroupWindow::new(q.group.clone(), inner, config.radius, config.cap)?;
    let mut transcript = Transcript::default();

    let phis: Vec<i64> = window.elements().iter().map(|g| q.phi(g)).collect();
    let lo = phis.iter().copied().min().unwrap_or(0);
    let hi = phis.iter().copied().max().unwrap_or(0);
    q.ensure((hi - lo).max(q.max_step() * (d as i64 + 1)) + 1);
    let lambda = q.images.iter().map(|&p| q.h_norm(p) as u64).max().unwrap_or(0);
    let orbit_scale = lambda.max(1) * d;
    let line = HLine {
        lo,
        len: (hi - lo + 1) as usize,
        norms: q.norms.clone(),
    };
    let orbit_cover = interval_cover(&line, &q, orbit_scale);
    let orbit_bound = orbit_cover.declared_bound().unwrap_or(0);

    let (same, w_len, n_len) = neighborhood_identity(&mut q, orbit_bound as u32, inner)?;
    transcript.require(
        "quotient",
        "W_R(e) coincides with N_R(K)",
        same,
        format!("R = {orbit_bound}: |W_R(e)| = {w_len}, |N_R(K)| = {n_len} on the inner window"),
    )?;

    let stab_colors = if q.kernel.is_some() { 2 } else { 1 };
    let action = QuotientAction {
        q: &q,
        line,
        lambda,
    };
    let points: Vec<PointId> = (0..window.len() as PointId).collect();
    let mut stab_bound = 0;
    let mut stab_t = Transcript::default();
    let (cover, t) = action_cover(
        &action,
        ActionInput {
            window: &window,
            points: &points,
            orbit_cover: &orbit_cover,
            d,
            stab_colors,
        },
        &mut |s: &[Element]| {
            let r = orbit_bound;
            let far = s
                .iter()
                .map(|g| q.nearest_kernel(&q.vector(g)).map_or(g.len() as u32, |(_, d)| d))
                .max()
                .unwrap_or(0);
            stab_t.require(
                "stabilizer cover",
                "W_R(e) lies in N_R(K)",
                far as u64 <= r,
                format!("max distance to K is {far}, R = {r}"),
            )?;
            if q.kernel.is_none() {
                stab_bound = 2 * r;
                return Ok(StabCover {
                    families: vec![vec![s.to_vec()]],
                    bound: stab_bound,
                });
            }
            let kn = q.kernel_norm();
            let lk = (d + 2 * r).div_ceil(kn) as i64;
            let mut blocks: BTreeMap<i64, Vec<Element>> = BTreeMap::new();
            for g in s {
                let (t, _) = q.nearest_kernel(&q.vector(g)).expect("kernel is nontrivial");
                blocks.entry(t.div_euclid(lk)).or_default().push(g.clone());
            }
            let mut fams = vec![Vec::new(), Vec::new()];
            for (j, set) in blocks {
                fams[j.rem_euclid(2) as usize].push(set);
            }
            stab_bound = (lk as u64 - 1) * kn + 2 * r;
            Ok(StabCover {
                families: fams,
                bound: stab_bound,
            })
        },
    )?;
    transcript.extend(stab_t);
    transcript.extend(t);
    finish(
        window,
        cover,
        transcript,
        PipelineParams {
            d,
            inner,
            outer: config.radius,
            lambda,
            orbit_scale,
            orbit_bound,
            stab_bound,
            r_mult: config.r_mult,
            stab_colors,
            orbit_colors: 2,
            colors: 0,
        },
    )
}
