//! Covers of a group from a cover of an orbit and a cover of the
//! stabilizer neighborhoods `W_R(x₀)`.

use std::collections::{BTreeMap, HashMap};

use crate::cover::{ColoredCover, Family, Transcript};
use crate::error::{Error, Result};
use crate::group::Element;
use crate::metric::{GroupWindow, Metric, PointId};

/// An isometric action on a metric space, seen through the orbit map
/// `π(g) = g·x₀`.
pub trait OrbitAction {
    /// Metric on the orbit points.
    fn orbit(&self) -> &dyn Metric;
    /// `π(g)`, if the image lies in the orbit slice.
    fn project(&self, g: &Element) -> Option<PointId>;
    /// Some `g` with `π(g) = v`.
    fn lift(&self, v: PointId) -> Element;
    /// Largest displacement of a generator, bounding the Lipschitz
    /// constant of `π`.
    fn lipschitz(&self) -> u64;
}

/// Cover of a set of stabilizer-neighborhood elements: families of sets
/// of elements and a bound on their diameters.
pub struct StabCover {
    pub families: Vec<Vec<Vec<Element>>>,
    pub bound: u64,
}

/// Parameters of one composition.
pub struct ActionInput<'a> {
    pub window: &'a GroupWindow,
    pub points: &'a [PointId],
    pub orbit_cover: &'a ColoredCover,
    pub d: u64,
    /// Number of stabilizer families `n + 1`.
    pub stab_colors: usize,
}

/// Composes an orbit cover (`k + 1` families, `λd`-disjoint) with a
/// stabilizer cover (`n + 1` families, `d`-disjoint) into `(k+1)(n+1)`
/// families `W^{ij} = {g_F·C ∩ π⁻¹(F)}`.
pub fn action_cover(
    action: &dyn OrbitAction,
    input: ActionInput<'_>,
    stab: &mut dyn FnMut(&[Element]) -> Result<StabCover>,
) -> Result<(ColoredCover, Transcript)> {
    let stage = "action cover";
    let ActionInput {
        window,
        points,
        orbit_cover,
        d,
        stab_colors,
    } = input;
    let group = window.group().clone();
    let mut t = Transcript::default();
    let lambda = action.lipschitz();
    let orbit = action.orbit();

    let mut proj = HashMap::with_capacity(points.len());
    for &p in points {
        let v = action
            .project(window.element(p))
            .ok_or_else(|| Error::exhausted(stage, format!("orbit point of {} outside the slice", window.label(p))))?;
        proj.insert(p, v);
    }

    let mut worst = 0u32;
    let mut edges = 0usize;
    for &p in points {
        for l in group.letters() {
            let q = group.mul(window.element(p), &group.reduce(&[l]));
            let (Some(q), Some(&vp)) = (window.id(&q), proj.get(&p)) else { continue };
            let Some(&vq) = proj.get(&q) else { continue };
            worst = worst.max(orbit.dist(vp, vq)?);
            edges += 1;
        }
    }
    t.require(
        stage,
        "orbit map is λ-Lipschitz",
        worst as u64 <= lambda,
        format!("max orbit step {worst} over {edges} edges, λ = {lambda}"),
    )?;
    t.require(
        stage,
        "orbit cover is λd-disjoint",
        orbit_cover.scale >= lambda.max(1) * d,
        format!("orbit scale {} against λd = {}", orbit_cover.scale, lambda.max(1) * d),
    )?;
    let orbit_bound = orbit_cover
        .declared_bound()
        .ok_or_else(|| Error::input("orbit cover must declare its bound"))?;

    let mut owner: HashMap<PointId, (usize, usize)> = HashMap::new();
    for (i, f) in orbit_cover.families.iter().enumerate() {
        for (k, s) in f.sets.iter().enumerate() {
            for &v in s {
                owner.entry(v).or_insert((i, k));
            }
        }
    }

    let mut reps: BTreeMap<(usize, usize), (Element, PointId)> = BTreeMap::new();
    let mut members: BTreeMap<(usize, usize), Vec<(PointId, Element)>> = BTreeMap::new();
    let mut far = 0u32;
    for &p in points {
        let v = proj[&p];
        let &(i, k) = owner.get(&v).ok_or_else(|| {
            Error::hypothesis(stage, "orbit cover covers the orbit", format!("vertex {} uncovered", orbit.label(v)))
        })?;
        let (g_f, v_f) = reps.entry((i, k)).or_insert_with(|| {
            let v_f = *orbit_cover.families[i].sets[k].iter().min().expect("sets are nonempty");
            (action.lift(v_f), v_f)
        });
        far = far.max(orbit.dist(v, *v_f)?);
        members.entry((i, k)).or_default().push((p, group.between(g_f, window.element(p))));
    }
    let mut lifted = true;
    for ((i, k), (g_f, v_f)) in &reps {
        lifted &= action.project(g_f) == Some(*v_f) && orbit_cover.families[*i].sets[*k].contains(v_f);
    }
    t.require(stage, "g_F maps x₀ into F", lifted, format!("{} orbit sets", reps.len()))?;
    t.require(
        stage,
        "g_F⁻¹g lies in W_R(x₀)",
        far as u64 <= orbit_bound,
        format!("max orbit distance {far}, R = {orbit_bound}"),
    )?;

    let mut s_elems: Vec<Element> = members.values().flatten().map(|(_, s)| s.clone()).collect();
    s_elems.sort();
    s_elems.dedup();
    let sc = stab(&s_elems)?;
    t.require(
        stage,
        "stabilizer cover has n + 1 families",
        sc.families.len() == stab_colors,
        format!("{} families, expected {stab_colors}", sc.families.len()),
    )?;
    let mut slot: HashMap<&Element, (usize, usize)> = HashMap::new();
    for (j, f) in sc.families.iter().enumerate() {
        for (c, set) in f.iter().enumerate() {
            for e in set {
                slot.entry(e).or_insert((j, c));
            }
        }
    }
    let missing = s_elems.iter().find(|e| !slot.contains_key(e));
    t.require(
        stage,
        "stabilizer cover covers W_R(x₀)",
        missing.is_none(),
        match missing {
            Some(e) => format!("{} uncovered", group.format(e)),
            None => format!("{} elements", s_elems.len()),
        },
    )?;

    let k1 = orbit_cover.families.len();
    let mut sets: Vec<BTreeMap<((usize, usize), usize), Vec<PointId>>> = vec![BTreeMap::new(); k1 * stab_colors];
    for (key, list) in &members {
        for (p, s) in list {
            let (j, c) = slot[s];
            sets[key.0 * stab_colors + j].entry((*key, c)).or_default().push(*p);
        }
    }
    let families: Vec<Family> = sets
        .into_iter()
        .map(|m| Family::new(m.into_values().collect()).with_bound(sc.bound).with_gap(d))
        .collect();
    t.require(
        stage,
        "color count is (k+1)(n+1)",
        families.len() == k1 * stab_colors,
        format!("{} = {k1}·{stab_colors}", families.len()),
    )?;
    Ok((ColoredCover::new(families, d, points.to_vec()), t))
}
