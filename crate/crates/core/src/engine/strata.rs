//! Stabilizer covers by induction on normal-form length.
//!
//! Points of level `m` (syllable count, or stable-letter count for HNN
//! extensions) are grouped into pieces, one per left coset of a factor
//! (or of the base). Each piece is covered by its factor's provider, the
//! points near the previous level form `Y_r` and are covered by pulling
//! back a cover of their anchors, and the union theorem merges the two.
//! Levels are then merged by finite unions.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use super::provider::{Placement, Provider};
use crate::cover::{
    finite_union_cover, union_combine, ColoredCover, Evidence, Family, PieceCheck, Transcript, UnionInput,
    YGap,
};
use crate::error::{Error, Result};
use crate::group::{Element, Group, Kind, Letter, Word};
use crate::metric::{GroupWindow, Metric, NormOracle, PointId};
use crate::tree::{BassSerre, VertexKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    FreeProduct,
    Amalgam,
    Hnn,
}

/// Exit points of a piece: the subgroup elements of the edge coset, as
/// ambient elements and local words, and whether the list is complete.
struct Exits {
    elements: Vec<(Element, Word)>,
    complete: bool,
}

#[derive(Clone, Debug)]
struct Sep {
    lo: u32,
    hi: u32,
    exit: Word,
}

#[derive(Clone, Debug)]
struct Info {
    level: u32,
    piece: Option<VertexKey>,
    provider: usize,
    local: Word,
    sep: Option<Sep>,
    anchor: Option<Element>,
}

/// Builds stabilizer covers for free products, amalgams and HNN
/// extensions.
pub struct Strata {
    group: Arc<Group>,
    bs: BassSerre,
    shape: Shape,
    oracle: Arc<NormOracle>,
    providers: Vec<Provider>,
    exits: Vec<Exits>,
    colors: usize,
    r_mult: u64,
    sep_cache: Mutex<HashMap<(usize, Word), Sep>>,
}

/// The closure of a point set under the anchor map, as a window.
pub struct StrataWindow {
    pub window: GroupWindow,
    info: Vec<Info>,
}

impl StrataWindow {
    pub fn level(&self, p: PointId) -> u32 {
        self.info[p as usize].level
    }
}

fn free_product_locator(group: Arc<Group>, f: usize) -> super::provider::Locator {
    Arc::new(move |g: &Element| {
        let Kind::FreeProduct(p) = group.kind() else { return None };
        let syl = p.syllables(g.letters());
        match syl.as_slice() {
            [] => Some(Word::new()),
            [(h, w)] if *h == f => Some(w.clone()),
            _ => None,
        }
    })
}

fn amalgam_locator(group: Arc<Group>, f: usize) -> super::provider::Locator {
    Arc::new(move |g: &Element| {
        let Kind::Amalgam(a) = group.kind() else { return None };
        let form = a.form(g.letters());
        let mut w = a.transport(&form.head, 0, f);
        match form.syllables.as_slice() {
            [] => {}
            [(h, x)] if *h == f => w.extend_from_slice(x),
            _ => return None,
        }
        Some(a.factors()[f].reduce_word(&w))
    })
}

fn hnn_locator(group: Arc<Group>) -> super::provider::Locator {
    Arc::new(move |g: &Element| {
        let Kind::Hnn(h) = group.kind() else { return None };
        let form = h.form(g.letters());
        form.tail.is_empty().then_some(form.head)
    })
}

impl Strata {
    pub fn new(group: Arc<Group>, oracle: Arc<NormOracle>, r_mult: u64) -> Result<Self> {
        let bs = BassSerre::new(group.clone())?;
        let exact = group.has_exact_norm();
        let mut providers = Vec::new();
        let shape = match group.kind() {
            Kind::FreeProduct(p) => {
                for (f, factor) in p.factors().iter().enumerate() {
                    providers.push(Provider::for_factor(
                        factor,
                        format!("A{f}"),
                        p.offsets[f],
                        oracle.clone(),
                        free_product_locator(group.clone(), f),
                        exact,
                    )?);
                }
                Shape::FreeProduct
            }
            Kind::Amalgam(a) => {
                for (f, factor) in a.factors().iter().enumerate() {
                    providers.push(Provider::for_factor(
                        factor,
                        format!("A{f}"),
                        a.offsets()[f],
                        oracle.clone(),
                        amalgam_locator(group.clone(), f),
                        false,
                    )?);
                }
                Shape::Amalgam
            }
            Kind::Hnn(h) => {
                providers.push(Provider::for_factor(
                    h.base(),
                    "G".into(),
                    0,
                    oracle.clone(),
                    hnn_locator(group.clone()),
                    false,
                )?);
                Shape::Hnn
            }
            _ => return Err(Error::input("stratified covers need a free product, amalgam or HNN extension")),
        };
        let colors = providers.iter().map(Provider::colors).max().unwrap_or(1);
        let mut s = Strata {
            group,
            bs,
            shape,
            oracle,
            providers,
            exits: Vec::new(),
            colors,
            r_mult,
            sep_cache: Mutex::new(HashMap::new()),
        };
        s.exits = s.build_exits();
        Ok(s)
    }

    /// Number of families `n + 1` of the uniform factor covers.
    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn providers(&self) -> &[Provider] {
        &self.providers
    }

    pub fn bass_serre(&self) -> &BassSerre {
        &self.bs
    }

    fn table_members(&self, member: impl Fn(&Element) -> bool) -> Vec<Element> {
        let Some(h) = self.oracle.horizon() else {
            return Vec::new();
        };
        let Some(table) = self.oracle.ball_elements(h) else {
            return Vec::new();
        };
        let mut out: Vec<Element> = table.within(h).filter(|g| member(g)).cloned().collect();
        out.sort();
        out
    }

    fn build_exits(&self) -> Vec<Exits> {
        match self.group.kind() {
            Kind::FreeProduct(p) => (0..p.factors().len())
                .map(|_| Exits {
                    elements: vec![(Element::identity(), Word::new())],
                    complete: true,
                })
                .collect(),
            Kind::Amalgam(a) => {
                let members = self.table_members(|g| a.form(g.letters()).syllables.is_empty());
                let complete = a.subgroup(0).finite_order() == Some(members.len());
                (0..a.factors().len())
                    .map(|f| Exits {
                        elements: members
                            .iter()
                            .map(|c| (c.clone(), self.providers[f].locate(c).expect("C lies in every factor")))
                            .collect(),
                        complete,
                    })
                    .collect()
            }
            Kind::Hnn(h) => {
                let base_member = |g: &Element, oracle: &crate::group::SubgroupOracle| {
                    let form = h.form(g.letters());
                    form.tail.is_empty() && oracle.contains(&form.head)
                };
                let phi_a = self.table_members(|g| base_member(g, h.subgroup_phi_a()));
                let a = self.table_members(|g| base_member(g, h.subgroup_a()));
                let mk = |list: Vec<Element>, order: Option<usize>| Exits {
                    complete: order == Some(list.len()),
                    elements: list
                        .into_iter()
                        .map(|g| {
                            let w = h.form(g.letters()).head;
                            (g, w)
                        })
                        .collect(),
                };
                vec![
                    mk(phi_a, h.subgroup_phi_a().finite_order()),
                    mk(a, h.subgroup_a().finite_order()),
                ]
            }
            _ => Vec::new(),
        }
    }

    /// Distance from the local coordinate `a` to the exit subgroup, with
    /// the nearest exit.
    fn sep(&self, list: usize, provider: usize, a: &Word) -> Sep {
        let key = (list, a.clone());
        if let Some(s) = self.sep_cache.lock().unwrap().get(&key) {
            return s.clone();
        }
        let a_amb = self.providers[provider].ambient(a);
        let exits = &self.exits[list];
        let mut lo = u32::MAX;
        let mut best: Option<(u32, Word)> = None;
        for (h_amb, h_local) in &exits.elements {
            let b = self.oracle.bounds(&self.group.between(&a_amb, h_amb));
            lo = lo.min(b.lo);
            if best.as_ref().is_none_or(|(hi, _)| b.hi < *hi) {
                best = Some((b.hi, h_local.clone()));
            }
        }
        if !exits.complete {
            let h = self.oracle.horizon().unwrap_or(u32::MAX);
            let norm_a = self.oracle.bounds(&a_amb).hi;
            lo = lo.min((h + 1).saturating_sub(norm_a));
        }
        let (hi, exit) = best.expect("exit lists contain the identity");
        let slack = u32::from(self.shape == Shape::Hnn);
        let s = Sep {
            lo: lo.min(hi) + slack,
            hi: hi + slack,
            exit,
        };
        self.sep_cache.lock().unwrap().insert(key, s.clone());
        s
    }

    fn info(&self, x: &Element) -> Result<Info> {
        let g = &self.group;
        let missing = || Error::input(format!("local coordinate of {} is not in its factor", g.format(x)));
        match g.kind() {
            Kind::FreeProduct(_) | Kind::Amalgam(_) => {
                let syllables = match g.kind() {
                    Kind::FreeProduct(p) => p.syllables(x.letters()),
                    Kind::Amalgam(a) => a.form(x.letters()).syllables,
                    _ => unreachable!(),
                };
                let level = syllables.len() as u32;
                let Some(&(f, _)) = syllables.last() else {
                    let local = self.providers[0].locate(x).ok_or_else(missing)?;
                    return Ok(Info {
                        level: 0,
                        piece: None,
                        provider: 0,
                        local,
                        sep: None,
                        anchor: None,
                    });
                };
                let piece = self.bs.factor_vertex(x, f);
                let rep = self.bs.representative(&piece);
                let local = self.providers[f].locate(&g.between(&rep, x)).ok_or_else(missing)?;
                let sep = self.sep(f, f, &local);
                let exit = self.providers[f].ambient(&sep.exit);
                let anchor = g.mul(&rep, &exit);
                Ok(Info {
                    level,
                    piece: Some(piece),
                    provider: f,
                    local,
                    sep: Some(sep),
                    anchor: Some(anchor),
                })
            }
            Kind::Hnn(h) => {
                let piece = self.bs.vertex(x);
                let rep = self.bs.representative(&piece);
                let local = self.providers[0].locate(&g.between(&rep, x)).ok_or_else(missing)?;
                let VertexKey::Coset { tail } = &piece else { unreachable!() };
                let Some(&(sign, _)) = tail.last() else {
                    return Ok(Info {
                        level: 0,
                        piece: None,
                        provider: 0,
                        local,
                        sep: None,
                        anchor: None,
                    });
                };
                let list = if sign { 0 } else { 1 };
                let sep = self.sep(list, 0, &local);
                let mut w = g.mul(&rep, &self.providers[0].ambient(&sep.exit)).into_word();
                w.push(Letter::new(h.stable(), !sign));
                Ok(Info {
                    level: tail.len() as u32,
                    piece: Some(piece),
                    provider: 0,
                    local,
                    sep: Some(sep),
                    anchor: Some(g.reduce(&w)),
                })
            }
            _ => Err(Error::input("unsupported group kind")),
        }
    }

    /// Closes `points` under the anchor map and builds the window.
    pub fn window(&self, points: &[Element], radius: u32) -> Result<StrataWindow> {
        let mut seen: HashMap<Element, Info> = HashMap::new();
        let mut pending: Vec<Element> = points.to_vec();
        while let Some(x) = pending.pop() {
            if seen.contains_key(&x) {
                continue;
            }
            let info = self.info(&x)?;
            if let Some(a) = &info.anchor {
                if !seen.contains_key(a) {
                    pending.push(a.clone());
                }
            }
            seen.insert(x, info);
        }
        let window = GroupWindow::with_elements(self.oracle.clone(), seen.keys().cloned().collect(), radius);
        let info = window
            .elements()
            .iter()
            .map(|x| seen.remove(x).expect("window element has info"))
            .collect();
        Ok(StrataWindow { window, info })
    }

    fn max_norm(&self, w: &StrataWindow, q: &[PointId]) -> u64 {
        q.iter()
            .map(|&p| self.oracle.bounds(w.window.element(p)).hi as u64)
            .max()
            .unwrap_or(0)
    }

    fn pairwise_hi(&self, w: &StrataWindow, q: &[PointId]) -> u64 {
        if q.len() > 2000 {
            return 2 * self.max_norm(w, q);
        }
        let mut best = 0u64;
        for (i, &a) in q.iter().enumerate() {
            for &b in &q[i + 1..] {
                let g = self.group.between(w.window.element(a), w.window.element(b));
                best = best.max(self.oracle.bounds(&g).hi as u64);
            }
        }
        best
    }

    fn single(&self, q: Vec<PointId>, bound: u64, d: u64) -> ColoredCover {
        let fam = Family::new(vec![q.clone()]).with_bound(bound).with_gap(d);
        ColoredCover::new(vec![fam], d, q).padded(self.colors)
    }

    /// Cover of `q` at scale `d` with `colors()` families.
    pub fn cover(&self, w: &StrataWindow, q: Vec<PointId>, d: u64, t: &mut Transcript) -> Result<ColoredCover> {
        if q.is_empty() {
            return Ok(ColoredCover::new(vec![Family::empty(); self.colors], d, q));
        }
        let m = self.max_norm(w, &q);
        if q.len() == 1 || d >= 2 * m {
            let bound = if q.len() == 1 { 0 } else { 2 * m };
            return Ok(self.single(q, bound, d));
        }
        let top = q.iter().map(|&p| w.level(p)).max().unwrap_or(0);
        let (a, b): (Vec<PointId>, Vec<PointId>) = q.iter().partition(|&&p| w.level(p) == top);
        if b.is_empty() {
            return self.cover_level(w, a, top, d, t);
        }
        let a_cover = self.cover_level(w, a, top, d, t)?;
        let r_a = a_cover.declared_bound().unwrap_or(0).max(d);
        let b_cover = self.cover(w, b, r_a.saturating_mul(self.r_mult), t)?;
        let stage = format!("finite union of levels ≤ {top} at scale {d}");
        let (out, tr) = finite_union_cover(
            &w.window,
            &a_cover,
            &b_cover,
            d,
            self.r_mult,
            PieceCheck::Declared,
            YGap::Declared,
            &stage,
        )?;
        t.extend(tr);
        Ok(out.padded(self.colors))
    }

    fn provider_families(
        &self,
        w: &StrataWindow,
        points: &[PointId],
        provider: usize,
        d: u64,
    ) -> Result<(Vec<Family>, u64)> {
        let locals: Vec<Word> = points.iter().map(|&p| w.info[p as usize].local.clone()).collect();
        match self.providers[provider].place(&locals, d)? {
            Placement::Blocks(places, bound) => {
                let mut sets: BTreeMap<(usize, i64), Vec<PointId>> = BTreeMap::new();
                for (&p, &(c, k)) in points.iter().zip(&places) {
                    sets.entry((c, k)).or_default().push(p);
                }
                let mut fams = vec![Vec::new(); self.colors];
                for ((c, _), s) in sets {
                    fams[c].push(s);
                }
                Ok((fams.into_iter().map(Family::new).collect(), bound))
            }
            Placement::Whole => {
                let bound = self.pairwise_hi(w, points);
                let mut fams = vec![Family::empty(); self.colors];
                fams[0] = Family::new(vec![points.to_vec()]);
                Ok((fams, bound))
            }
        }
    }

    fn cover_level(
        &self,
        w: &StrataWindow,
        q: Vec<PointId>,
        level: u32,
        d: u64,
        t: &mut Transcript,
    ) -> Result<ColoredCover> {
        if level == 0 {
            if self.shape == Shape::FreeProduct {
                return Ok(self.single(q, 0, d));
            }
            let (fams, bound) = self.provider_families(w, &q, 0, d)?;
            let fams = fams.into_iter().map(|f| f.with_bound(bound).with_gap(d)).collect();
            return Ok(ColoredCover::new(fams, d, q));
        }
        let stage = format!("level {level} at scale {d}");
        let mut pieces: BTreeMap<VertexKey, Vec<PointId>> = BTreeMap::new();
        for &p in &q {
            let key = w.info[p as usize].piece.clone().expect("positive levels have pieces");
            pieces.entry(key).or_default().push(p);
        }
        let mut piece_points = Vec::with_capacity(pieces.len());
        let mut piece_families = Vec::with_capacity(pieces.len());
        let mut bound = d;
        for pts in pieces.into_values() {
            let provider = w.info[pts[0] as usize].provider;
            let (fams, b) = self.provider_families(w, &pts, provider, d)?;
            bound = bound.max(b);
            piece_points.push(pts);
            piece_families.push(fams);
        }
        let r = bound.saturating_mul(self.r_mult);
        let mut y = Vec::new();
        let mut sep = HashMap::new();
        let mut disp = 0u64;
        for &p in &q {
            let s = w.info[p as usize].sep.as_ref().expect("positive levels have separations");
            if (s.lo as u64) < r || (s.hi as u64) <= r {
                y.push(p);
                disp = disp.max(s.hi as u64);
            } else {
                sep.insert(p, s.lo as u64);
            }
        }
        let anchors: Vec<PointId> = {
            let mut set = HashSet::new();
            for &p in &y {
                let a = w.info[p as usize].anchor.as_ref().expect("positive levels have anchors");
                set.insert(w.window.id(a).expect("anchors are in the window"));
            }
            let mut v: Vec<PointId> = set.into_iter().collect();
            v.sort_unstable();
            v
        };
        let lower = r.saturating_add(disp.saturating_mul(2));
        let anchor_cover = self.cover(w, anchors, lower, t)?;
        let mut owner: HashMap<PointId, (usize, usize)> = HashMap::new();
        for (c, f) in anchor_cover.families.iter().enumerate() {
            for (k, s) in f.sets.iter().enumerate() {
                for &p in s {
                    owner.insert(p, (c, k));
                }
            }
        }
        let anchor_bound = anchor_cover.declared_bound().unwrap_or(0);
        let mut y_sets: Vec<BTreeMap<usize, Vec<PointId>>> = vec![BTreeMap::new(); self.colors];
        for &p in &y {
            let a = w.window.id(w.info[p as usize].anchor.as_ref().unwrap()).unwrap();
            let (c, k) = owner[&a];
            y_sets[c].entry(k).or_default().push(p);
        }
        let y_families = y_sets
            .into_iter()
            .map(|m| {
                Family::new(m.into_values().collect())
                    .with_bound(anchor_bound.saturating_add(disp.saturating_mul(2)))
                    .with_gap(r)
            })
            .collect();
        let input = UnionInput {
            pieces: piece_points,
            piece_families,
            y,
            y_families,
            d,
            bound,
            r_mult: self.r_mult,
            piece_check: PieceCheck::Exact,
            separation: Evidence::Separation {
                sep,
                inequality: match self.shape {
                    Shape::Hnn => "stable-letter exits of base cosets".into(),
                    _ => "edge cosets of the Bass-Serre tree".into(),
                },
            },
            y_gap: YGap::Inherited {
                lower_scale: anchor_cover.scale,
                displacement: disp,
            },
        };
        let (out, tr) = union_combine(&w.window, input, &stage)?;
        t.extend(tr);
        Ok(out.padded(self.colors))
    }
}

impl StrataWindow {
    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }
}
