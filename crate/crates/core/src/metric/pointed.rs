//! The pointed free product of two pointed metric spaces: alternating
//! words in non-basepoint points, with the cut-the-common-prefix metric.

use std::sync::Arc;

use super::{check_point, Metric, PointId};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct PointedSpace {
    pub metric: Arc<dyn Metric>,
    pub base: PointId,
}

impl PointedSpace {
    pub fn new(metric: Arc<dyn Metric>, base: PointId) -> Result<Self> {
        check_point(metric.as_ref(), base)?;
        Ok(PointedSpace { metric, base })
    }

    fn norm(&self, p: PointId) -> Result<u32> {
        self.metric.dist(p, self.base)
    }
}

/// A word `x₁y₁x₂…`; each letter names its alphabet (0 for X, 1 for Y).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PointedWord {
    pub letters: Vec<(u8, PointId)>,
}

impl PointedWord {
    pub fn new(letters: Vec<(u8, PointId)>, spaces: &[PointedSpace; 2]) -> Result<Self> {
        for (i, &(s, p)) in letters.iter().enumerate() {
            if s > 1 {
                return Err(Error::input("pointed word letter names no alphabet"));
            }
            check_point(spaces[s as usize].metric.as_ref(), p)?;
            if p == spaces[s as usize].base {
                return Err(Error::input("pointed word contains a basepoint letter"));
            }
            if i > 0 && letters[i - 1].0 == s {
                return Err(Error::input("pointed word letters do not alternate"));
            }
        }
        Ok(PointedWord { letters })
    }

    pub fn trivial() -> Self {
        PointedWord::default()
    }

    pub fn norm(&self, spaces: &[PointedSpace; 2]) -> Result<u32> {
        norm_of(&self.letters, spaces)
    }
}

fn norm_of(letters: &[(u8, PointId)], spaces: &[PointedSpace; 2]) -> Result<u32> {
    letters
        .iter()
        .map(|&(s, p)| spaces[s as usize].norm(p))
        .sum()
}

pub fn pointed_product_distance(
    w: &PointedWord,
    v: &PointedWord,
    spaces: &[PointedSpace; 2],
) -> Result<u32> {
    let k = w
        .letters
        .iter()
        .zip(&v.letters)
        .take_while(|(a, b)| a == b)
        .count();
    let (rw, rv) = (&w.letters[k..], &v.letters[k..]);
    match (rw.first(), rv.first()) {
        (Some(&(s, p)), Some(&(t, q))) if s == t => Ok(spaces[s as usize].metric.dist(p, q)?
            + norm_of(&rw[1..], spaces)?
            + norm_of(&rv[1..], spaces)?),
        _ => Ok(norm_of(rw, spaces)? + norm_of(rv, spaces)?),
    }
}
