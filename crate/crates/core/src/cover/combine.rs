//! The countable-union combinator and the finite union of two covers.

use std::collections::{HashMap, HashSet};

use super::{saturated_union, ColoredCover, Family, Transcript};
use crate::error::{Error, Result};
use crate::metric::{check_d_disjoint, diameter, Metric, PointId};

/// How the separation of the pieces outside `Y_r` is established.
#[derive(Clone, Debug)]
pub enum Evidence {
    /// Distances are checked pairwise on the window.
    Exact,
    /// Each point carries a lower bound `sep(p)` such that points of
    /// distinct pieces are at least `max(sep(p), sep(q))` apart, by the
    /// named inequality (audited separately).
    Separation {
        sep: HashMap<PointId, u64>,
        inequality: String,
    },
}

/// How the piece families' disjointness and bounds are established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceCheck {
    /// Checked pairwise on the window.
    Exact,
    /// Read from the declared bound and gap of each family, which the
    /// stage that built them has checked.
    Declared,
}

/// How the separation of the families on `Y_r` is established.
#[derive(Clone, Debug)]
pub enum YGap {
    /// Checked exactly at `r`.
    Exact,
    /// Trust the declared gap of the families (verified where they were built).
    Declared,
    /// The families were pulled back from families `lower_scale`-disjoint
    /// along a map moving points at most `displacement`.
    Inherited { lower_scale: u64, displacement: u64 },
}

pub struct UnionInput {
    /// The pieces `F_α`, as point sets.
    pub pieces: Vec<Vec<PointId>>,
    /// Per piece, per color: families covering the piece.
    pub piece_families: Vec<Vec<Family>>,
    /// `Y_r` intersected with the union of the pieces.
    pub y: Vec<PointId>,
    pub y_families: Vec<Family>,
    pub d: u64,
    /// Uniform bound `R` of the piece families.
    pub bound: u64,
    /// `r = r_mult · R`.
    pub r_mult: u64,
    pub piece_check: PieceCheck,
    pub separation: Evidence,
    pub y_gap: YGap,
}

fn sat32(x: u64) -> u32 {
    u32::try_from(x).unwrap_or(u32::MAX)
}

/// First pair of a set farther apart than `bound`.
fn exceeds_bound(m: &dyn Metric, set: &[PointId], bound: u64) -> Result<Option<(PointId, PointId)>> {
    let b = sat32(bound);
    for (i, &p) in set.iter().enumerate() {
        for &q in &set[i + 1..] {
            if !m.at_most(p, q, b)? {
                return Ok(Some((p, q)));
            }
        }
    }
    Ok(None)
}

/// Builds `𝒲^i = 𝒱^i ∪_d Ū^i` after checking every hypothesis the
/// construction relies on; the first failing check is returned as an error.
pub fn union_combine(m: &dyn Metric, input: UnionInput, stage: &str) -> Result<(ColoredCover, Transcript)> {
    let mut t = Transcript::default();
    let UnionInput {
        pieces,
        piece_families,
        y,
        y_families,
        d,
        bound,
        r_mult,
        piece_check,
        separation,
        y_gap,
    } = input;
    let r = bound.saturating_mul(r_mult);
    if pieces.len() != piece_families.len() {
        return Err(Error::input("one family list per piece is required"));
    }
    t.require(stage, "bound dominates scale", bound >= d, format!("R = {bound}, d = {d}"))?;

    let y_set: HashSet<PointId> = y.iter().copied().collect();
    let colors = piece_families
        .iter()
        .map(Vec::len)
        .chain([y_families.len()])
        .max()
        .unwrap_or(0);

    let mut u_bar: Vec<Vec<Vec<PointId>>> = vec![Vec::new(); colors];
    let mut sets_checked = 0usize;
    for (alpha, (piece, fams)) in pieces.iter().zip(&piece_families).enumerate() {
        let in_piece: HashSet<PointId> = piece.iter().copied().collect();
        let mut covered = HashSet::new();
        for (i, f) in fams.iter().enumerate() {
            if piece_check == PieceCheck::Declared {
                if !f.is_empty() {
                    let ok = f.declared_bound.is_some_and(|b| b <= bound) && f.declared_gap.is_some_and(|g| g >= d);
                    t.require(
                        stage,
                        "piece families d-disjoint",
                        ok,
                        format!(
                            "piece {alpha}, color {i}: declared bound {:?} and gap {:?} against R = {bound}, d = {d}",
                            f.declared_bound, f.declared_gap
                        ),
                    )?;
                }
                sets_checked += f.len();
                for s in &f.sets {
                    if let Some(p) = s.iter().find(|p| !in_piece.contains(p)) {
                        return Err(Error::input(format!(
                            "piece {alpha} family set leaves the piece at {}",
                            m.label(*p)
                        )));
                    }
                    covered.extend(s.iter().copied());
                    let rest: Vec<PointId> = s.iter().copied().filter(|p| !y_set.contains(p)).collect();
                    if !rest.is_empty() {
                        u_bar[i].push(rest);
                    }
                }
                continue;
            }
            if let Some(v) = check_d_disjoint(m, &f.sets, sat32(d))? {
                t.require(
                    stage,
                    "piece families d-disjoint",
                    false,
                    format!("piece {alpha}, color {i}: points {} and {} at distance {}", m.label(v.points.0), m.label(v.points.1), v.distance),
                )?;
            }
            for s in &f.sets {
                sets_checked += 1;
                if let Some((p, q)) = exceeds_bound(m, s, bound)? {
                    t.require(
                        stage,
                        "piece families R-bounded",
                        false,
                        format!("piece {alpha}: {} and {} farther than {bound}", m.label(p), m.label(q)),
                    )?;
                }
                if let Some(p) = s.iter().find(|p| !in_piece.contains(p)) {
                    return Err(Error::input(format!(
                        "piece {alpha} family set leaves the piece at {}",
                        m.label(*p)
                    )));
                }
                covered.extend(s.iter().copied());
                let rest: Vec<PointId> = s.iter().copied().filter(|p| !y_set.contains(p)).collect();
                if !rest.is_empty() {
                    u_bar[i].push(rest);
                }
            }
        }
        if let Some(p) = piece.iter().find(|p| !covered.contains(p) && !y_set.contains(p)) {
            t.require(stage, "piece families cover", false, format!("piece {alpha} misses {}", m.label(*p)))?;
        }
    }
    t.require(
        stage,
        "piece families",
        true,
        format!(
            "{sets_checked} sets in {} pieces are {d}-disjoint and {bound}-bounded ({})",
            pieces.len(),
            match piece_check {
                PieceCheck::Exact => "checked pairwise",
                PieceCheck::Declared => "as declared",
            }
        ),
    )?;

    let off_y: Vec<Vec<PointId>> = pieces
        .iter()
        .map(|p| p.iter().copied().filter(|x| !y_set.contains(x)).collect::<Vec<_>>())
        .filter(|p: &Vec<PointId>| !p.is_empty())
        .collect();
    match &separation {
        Evidence::Exact => {
            let v = check_d_disjoint(m, &off_y, sat32(r))?;
            t.require(
                stage,
                "pieces off Y_r are r-disjoint",
                v.is_none(),
                match v {
                    None => format!("{} pieces checked exactly at r = {r}", off_y.len()),
                    Some(v) => format!("{} and {} at distance {} < r = {r}", m.label(v.points.0), m.label(v.points.1), v.distance),
                },
            )?;
        }
        Evidence::Separation { sep, inequality } => {
            let mut least: Option<(u64, PointId)> = None;
            for &p in off_y.iter().flatten() {
                let s = *sep.get(&p).ok_or_else(|| Error::input("separation bound missing for a point"))?;
                if least.is_none_or(|(v, _)| s < v) {
                    least = Some((s, p));
                }
            }
            t.require(
                stage,
                "pieces off Y_r are r-disjoint",
                least.is_none_or(|(s, _)| s >= r),
                match least {
                    None => "no points outside Y_r".to_string(),
                    Some((s, p)) => format!(
                        "least separation {s} (at {}) against r = {r}, via {inequality}",
                        m.label(p)
                    ),
                },
            )?;
        }
    }

    let mut y_cov = HashSet::new();
    for f in &y_families {
        y_cov.extend(f.points());
    }
    let missing = y.iter().find(|p| !y_cov.contains(p));
    t.require(
        stage,
        "Y_r families cover Y_r",
        missing.is_none(),
        match missing {
            None => format!("{} points of Y_r covered", y.len()),
            Some(p) => format!("{} uncovered", m.label(*p)),
        },
    )?;
    match y_gap {
        YGap::Exact => {
            for (i, f) in y_families.iter().enumerate() {
                let v = check_d_disjoint(m, &f.sets, sat32(r))?;
                t.require(
                    stage,
                    "Y_r families 5R-disjoint",
                    v.is_none(),
                    match v {
                        None => format!("color {i} checked exactly at {r}"),
                        Some(v) => format!("color {i}: distance {} < {r}", v.distance),
                    },
                )?;
            }
        }
        YGap::Declared => {
            for (i, f) in y_families.iter().enumerate() {
                if f.is_empty() {
                    continue;
                }
                let g = f.declared_gap.unwrap_or(0);
                t.require(
                    stage,
                    "Y_r families 5R-disjoint",
                    g >= r,
                    format!("color {i} declared {g}-disjoint against {r}"),
                )?;
            }
        }
        YGap::Inherited {
            lower_scale,
            displacement,
        } => {
            let need = r.saturating_add(displacement.saturating_mul(2));
            t.require(
                stage,
                "Y_r families 5R-disjoint",
                lower_scale >= need,
                format!(
                    "pulled back from {lower_scale}-disjoint families along moves of at most {displacement}; need {need}"
                ),
            )?;
        }
    }

    let mut d_bound: u64 = 0;
    for f in &y_families {
        let b = match f.declared_bound {
            Some(b) => b,
            None => {
                let mut b = 0;
                for s in &f.sets {
                    b = b.max(diameter(m, s)? as u64);
                }
                b
            }
        };
        d_bound = d_bound.max(b);
    }
    let out_bound = d_bound.saturating_add(d.saturating_add(bound).saturating_mul(2));

    let mut families = Vec::with_capacity(colors);
    for i in 0..colors {
        let v = y_families.get(i).cloned().unwrap_or_default();
        let u = Family::new(std::mem::take(&mut u_bar[i]));
        let w = saturated_union(m, &v, &u, d)?;
        families.push(w.with_bound(out_bound).with_gap(d));
    }
    let region: Vec<PointId> = pieces.iter().flatten().copied().chain(y).collect();
    Ok((ColoredCover::new(families, d, region), t))
}

/// Cover of `A ∪ B` from a cover of `A` at scale `d` and a cover of `B`
/// at scale at least `5R`, `R` the bound of the `A` cover.
pub fn finite_union_cover(
    m: &dyn Metric,
    a: &ColoredCover,
    b: &ColoredCover,
    d: u64,
    r_mult: u64,
    piece_check: PieceCheck,
    y_gap: YGap,
    stage: &str,
) -> Result<(ColoredCover, Transcript)> {
    if a.scale != d {
        return Err(Error::input(format!(
            "finite union: cover of A has scale {} but d = {d}",
            a.scale
        )));
    }
    let bound = match a.declared_bound() {
        Some(x) => x,
        None => {
            let mut x = 0;
            for s in a.families.iter().flat_map(|f| &f.sets) {
                x = x.max(diameter(m, s)? as u64);
            }
            x
        }
    }
    .max(d);
    if !b.region.is_empty() && b.scale < bound.saturating_mul(r_mult) {
        return Err(Error::input(format!(
            "finite union: cover of B has scale {} below r = {}",
            b.scale,
            bound.saturating_mul(r_mult)
        )));
    }
    let colors = a.colors().max(b.colors());
    let input = UnionInput {
        pieces: vec![a.region.clone()],
        piece_families: vec![a.families.clone()],
        y: b.region.clone(),
        y_families: b.clone().padded(colors).families,
        d,
        bound,
        r_mult,
        piece_check,
        separation: Evidence::Exact,
        y_gap,
    };
    let (mut cover, t) = union_combine(m, input, stage)?;
    cover = cover.padded(colors);
    Ok((cover, t))
}
