//! Free abelian groups: canonical words are `a1^k1 a2^k2 ...`.

use super::word::{Letter, Word};

pub fn vector(rank: usize, w: &[Letter]) -> Vec<i64> {
    let mut v = vec![0; rank];
    for l in w {
        v[l.generator()] += if l.is_inverse() { -1 } else { 1 };
    }
    v
}

pub fn word(v: &[i64]) -> Word {
    let mut w = Word::new();
    for (g, &k) in v.iter().enumerate() {
        let l = Letter::new(g, k < 0);
        w.extend(std::iter::repeat_n(l, k.unsigned_abs() as usize));
    }
    w
}

pub fn reduce(rank: usize, w: &[Letter]) -> Word {
    word(&vector(rank, w))
}
