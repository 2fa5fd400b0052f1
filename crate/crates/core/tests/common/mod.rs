#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::PathBuf;

use asdim_core::cover::{saturated_union, Family};
use asdim_core::engine::PipelineConfig;
use asdim_core::group::{Letter, Word};
use asdim_core::metric::{check_d_disjoint, diameter, Metric, PointId};
use asdim_core::{Group, GroupSpec};
use num::{BigInt, BigRational, One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn config(name: &str) -> PipelineConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    PipelineConfig::from_toml(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn group(name: &str) -> Group {
    Group::from_spec(&config(name).group).unwrap()
}

pub fn square_racg() -> Group {
    Group::from_spec(&GroupSpec::racg(
        &["a", "b", "c", "d"],
        &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
    ))
    .unwrap()
}

pub fn random_word(g: &Group, rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let letters = g.letters();
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| letters[rng.gen_range(0..letters.len())]).collect()
}

/// Evaluates a word in a faithful linear representation and returns a
/// comparable key.
pub type Oracle = Box<dyn Fn(&Group, &[Letter]) -> String>;

fn label(g: &Group, l: Letter) -> &str {
    &g.alphabet().labels()[l.generator()]
}

type M2 = [[i64; 2]; 2];

fn m2_mul(x: &M2, y: &M2) -> M2 {
    let mut z = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    z
}

fn m2_inv(x: &M2) -> M2 {
    [[x[1][1], -x[0][1]], [-x[1][0], x[0][0]]]
}

/// SL(2,Z) image; with `projective` the key ignores a global sign.
pub fn sl2(images: &'static [(&'static str, M2)], projective: bool) -> Oracle {
    Box::new(move |g, w| {
        let mut m: M2 = [[1, 0], [0, 1]];
        for &l in w {
            let base = images.iter().find(|(n, _)| *n == label(g, l)).unwrap().1;
            let x = if l.is_inverse() { m2_inv(&base) } else { base };
            m = m2_mul(&m, &x);
        }
        let first = m.iter().flatten().copied().find(|&v| v != 0).unwrap_or(1);
        if projective && first < 0 {
            for v in m.iter_mut().flatten() {
                *v = -*v;
            }
        }
        format!("{m:?}")
    })
}

/// Free group on `a`, `b` inside SL(2,Z).
pub fn sanov() -> Oracle {
    sl2(&[("a", [[1, 2], [0, 1]]), ("b", [[1, 0], [2, 1]])], false)
}

/// Z/2 * Z/3 as PSL(2,Z).
pub fn modular() -> Oracle {
    sl2(&[("s", [[0, -1], [1, 0]]), ("t", [[0, -1], [1, 1]])], true)
}

/// Exponent sums.
pub fn abelianization() -> Oracle {
    Box::new(|g, w| {
        let mut v = vec![0i64; g.rank()];
        for &l in w {
            v[l.generator()] += if l.is_inverse() { -1 } else { 1 };
        }
        format!("{v:?}")
    })
}

/// BS(1,2) with `y a y⁻¹ = a²` as affine maps of Q: a = x+1, y = 2x.
pub fn affine_bs12() -> Oracle {
    Box::new(|g, w| {
        let two = BigRational::from_integer(BigInt::from(2));
        let mut scale = BigRational::one();
        let mut shift = BigRational::zero();
        for &l in w {
            let (s, t) = match (label(g, l), l.is_inverse()) {
                ("a", false) => (BigRational::one(), BigRational::one()),
                ("a", true) => (BigRational::one(), -BigRational::one()),
                ("y", false) => (two.clone(), BigRational::zero()),
                ("y", true) => (two.recip(), BigRational::zero()),
                (other, _) => panic!("unexpected generator {other}"),
            };
            shift = &scale * t + shift;
            scale *= s;
        }
        format!("{scale} {shift}")
    })
}

/// Laurent polynomial in `t`, exponent to coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Laurent(BTreeMap<i32, i64>);

impl Laurent {
    fn monomial(c: i64, e: i32) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert(e, c);
        }
        Laurent(m)
    }

    fn add(&self, o: &Laurent) -> Laurent {
        let mut m = self.0.clone();
        for (&e, &c) in &o.0 {
            *m.entry(e).or_insert(0) += c;
        }
        m.retain(|_, c| *c != 0);
        Laurent(m)
    }

    fn mul(&self, o: &Laurent) -> Laurent {
        let mut m = BTreeMap::new();
        for (&e1, &c1) in &self.0 {
            for (&e2, &c2) in &o.0 {
                *m.entry(e1 + e2).or_insert(0) += c1 * c2;
            }
        }
        m.retain(|_, c| *c != 0);
        Laurent(m)
    }
}

type LM = [[Laurent; 2]; 2];

fn lm(entries: [[(i64, i32); 2]; 2]) -> LM {
    entries.map(|row| row.map(|(c, e)| Laurent::monomial(c, e)))
}

fn lm_mul(x: &LM, y: &LM) -> LM {
    std::array::from_fn(|i| std::array::from_fn(|j| x[i][0].mul(&y[0][j]).add(&x[i][1].mul(&y[1][j]))))
}

/// Trefoil group `a² = b³` as the braid group B₃ (a = σ₁σ₂σ₁, b = σ₁σ₂)
/// under the reduced Burau representation, which is faithful on B₃.
pub fn burau_trefoil() -> Oracle {
    Box::new(|g, w| {
        let s1 = lm([[(-1, 1), (1, 0)], [(0, 0), (1, 0)]]);
        let s1i = lm([[(-1, -1), (1, -1)], [(0, 0), (1, 0)]]);
        let s2 = lm([[(1, 0), (0, 0)], [(1, 1), (-1, 1)]]);
        let s2i = lm([[(1, 0), (0, 0)], [(1, 0), (-1, -1)]]);
        let a = lm_mul(&lm_mul(&s1, &s2), &s1);
        let ai = lm_mul(&lm_mul(&s1i, &s2i), &s1i);
        let b = lm_mul(&s1, &s2);
        let bi = lm_mul(&s2i, &s1i);
        let mut m = lm([[(1, 0), (0, 0)], [(0, 0), (1, 0)]]);
        for &l in w {
            let x = match (label(g, l), l.is_inverse()) {
                ("a", false) => &a,
                ("a", true) => &ai,
                ("b", false) => &b,
                ("b", true) => &bi,
                (other, _) => panic!("unexpected generator {other}"),
            };
            m = lm_mul(&m, x);
        }
        format!("{m:?}")
    })
}

/// Shortlex-least word reachable from `w` by swapping adjacent commuting
/// generators and deleting adjacent equal pairs.
pub fn racg_closure(commute: impl Fn(usize, usize) -> bool, w: &[Letter]) -> Word {
    let start: Vec<usize> = w.iter().map(|l| l.generator()).collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        for i in 0..cur.len().saturating_sub(1) {
            let (s, t) = (cur[i], cur[i + 1]);
            let mut next = cur.clone();
            if s == t {
                next.drain(i..i + 2);
            } else if commute(s, t) {
                next.swap(i, i + 1);
            } else {
                continue;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let best = seen
        .into_iter()
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
        .unwrap();
    best.into_iter().map(|s| Letter::new(s, false)).collect()
}

/// Counts of idempotence, multiplicativity, soundness and separation
/// failures over `n` random words.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct NormalFormReport {
    pub words: usize,
    pub idempotence: usize,
    pub multiplicativity: usize,
    pub soundness: usize,
    pub separation: usize,
}

impl NormalFormReport {
    pub fn mismatches(&self) -> usize {
        self.idempotence + self.multiplicativity + self.soundness + self.separation
    }
}

/// Random-word checks of `reduce` against `oracle`. Soundness: a word and
/// its normal form have equal images. Separation: among short words,
/// equal images force equal normal forms.
pub fn check_normal_forms(g: &Group, oracle: &Oracle, rng: &mut ChaCha8Rng, n: usize) -> NormalFormReport {
    let mut r = NormalFormReport {
        words: n,
        ..Default::default()
    };
    let mut by_image: HashMap<String, Word> = HashMap::new();
    for _ in 0..n {
        let u = random_word(g, rng, 12);
        let v = random_word(g, rng, 12);
        let ru = g.reduce_word(&u);
        let rv = g.reduce_word(&v);
        if g.reduce_word(&ru) != ru {
            r.idempotence += 1;
        }
        let uv: Word = u.iter().chain(&v).copied().collect();
        let ruv: Word = ru.iter().chain(&rv).copied().collect();
        if g.reduce_word(&uv) != g.reduce_word(&ruv) {
            r.multiplicativity += 1;
        }
        if oracle(g, &u) != oracle(g, &ru) {
            r.soundness += 1;
        }
        if u.len() <= 8 {
            let image = oracle(g, &u);
            match by_image.get(&image) {
                Some(prev) if *prev != ru => r.separation += 1,
                Some(_) => {}
                None => {
                    by_image.insert(image, ru);
                }
            }
        }
    }
    r
}

/// All words of length at most `max_len` over the symmetric generators.
pub fn all_words(g: &Group, max_len: usize) -> Vec<Word> {
    let letters = g.letters();
    let mut out = vec![Word::new()];
    let mut frontier = vec![Word::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                let mut x = w.clone();
                x.push(l);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Words whose normal form disagrees with the oracle partition: two words
/// with equal images but different normal forms, or the reverse.
pub fn exhaustive_mismatches(g: &Group, oracle: &Oracle, max_len: usize) -> usize {
    let mut image_to_nf: HashMap<String, Word> = HashMap::new();
    let mut nf_to_image: HashMap<Word, String> = HashMap::new();
    let mut bad = 0;
    for w in all_words(g, max_len) {
        let nf = g.reduce_word(&w);
        let image = oracle(g, &w);
        if image_to_nf.entry(image.clone()).or_insert_with(|| nf.clone()) != &nf {
            bad += 1;
        }
        if nf_to_image.entry(nf).or_insert(image.clone()) != &image {
            bad += 1;
        }
    }
    bad
}

/// Greedy random family: sets of diameter at most `bound`, pairwise at
/// least `gap` apart.
pub fn random_family(m: &dyn Metric, rng: &mut ChaCha8Rng, bound: u32, gap: u32, tries: usize) -> Family {
    let n = m.len() as PointId;
    let mut sets: Vec<Vec<PointId>> = Vec::new();
    for _ in 0..tries {
        let c = rng.gen_range(0..n);
        let radius = bound / 2;
        let mut set: Vec<PointId> = (0..n)
            .filter(|&q| m.dist(c, q).unwrap() <= radius && rng.gen_bool(0.7))
            .collect();
        set.push(c);
        set.sort_unstable();
        set.dedup();
        let far = sets
            .iter()
            .all(|s| s.iter().all(|&p| set.iter().all(|&q| m.dist(p, q).unwrap() >= gap)));
        if far {
            sets.push(set);
        }
    }
    sets.shuffle(rng);
    Family::new(sets)
}

/// One random saturated-union instance with `d ≤ max_d` and
/// `d ≤ R ≤ max_r`; the error names the first broken bound.
pub fn saturated_union_instance(m: &dyn Metric, rng: &mut ChaCha8Rng, max_d: u32, max_r: u32) -> Result<(), String> {
    let d = rng.gen_range(1..=max_d);
    let r = rng.gen_range(d..=max_r.max(d));
    let big_d = rng.gen_range(0..=3 * r);
    let u = random_family(m, rng, r, d, 12);
    let v = random_family(m, rng, big_d, 5 * r, 4);
    for s in &u.sets {
        if diameter(m, s).unwrap() > r {
            return Err(format!("input set wider than R={r}"));
        }
    }
    let w = saturated_union(m, &v, &u, d as u64).map_err(|e| e.to_string())?;
    if let Some(v) = check_d_disjoint(m, &w.sets, d).unwrap() {
        return Err(format!("d={d}: sets {:?} at distance {}", v.sets, v.distance));
    }
    let bound = big_d + 2 * (d + r);
    for s in &w.sets {
        let diam = diameter(m, s).unwrap();
        if diam > bound {
            return Err(format!("d={d} R={r} D={big_d}: diameter {diam} > {bound}"));
        }
    }
    let covered: std::collections::HashSet<PointId> = w.points().collect();
    if !u.points().chain(v.points()).all(|p| covered.contains(&p)) {
        return Err("union misses a point".into());
    }
    Ok(())
}
