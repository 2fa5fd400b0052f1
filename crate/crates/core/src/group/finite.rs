//! Finite groups given by a Cayley table.

use std::collections::VecDeque;

use super::word::{Letter, Word};
use crate::error::{Error, Result};

/// A finite group with element 0 as identity. Each element carries its
/// shortlex-least word over the generators, which doubles as its canonical
/// form and its word norm.
#[derive(Debug)]
pub struct FiniteGroup {
    table: Vec<Vec<u32>>,
    inverse: Vec<u32>,
    generators: Vec<u32>,
    words: Vec<Word>,
    index: std::collections::HashMap<Word, u32>,
}

impl FiniteGroup {
    pub fn cyclic(order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::spec("cyclic group of order 0"));
        }
        let n = order as usize;
        let table = (0..n)
            .map(|i| (0..n).map(|j| ((i + j) % n) as u32).collect())
            .collect();
        Self::from_table(table, vec![1 % order])
    }

    pub fn from_table(table: Vec<Vec<u32>>, generators: Vec<u32>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(Error::spec("group table must be a nonempty square"));
        }
        if table.iter().flatten().any(|&x| x as usize >= n) {
            return Err(Error::spec("group table entry out of range"));
        }
        for i in 0..n {
            if table[0][i] as usize != i || table[i][0] as usize != i {
                return Err(Error::spec("element 0 must be the identity"));
            }
        }
        let mut inverse = vec![u32::MAX; n];
        for i in 0..n {
            let mut seen = vec![false; n];
            for j in 0..n {
                let x = table[i][j] as usize;
                if seen[x] {
                    return Err(Error::spec("group table is not a latin square"));
                }
                seen[x] = true;
                if x == 0 {
                    inverse[i] = j as u32;
                }
            }
        }
        if n <= 128 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let ab = table[a][b] as usize;
                        let bc = table[b][c] as usize;
                        if table[ab][c] != table[a][bc] {
                            return Err(Error::spec(format!(
                                "group table not associative at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        if generators.iter().any(|&g| g as usize >= n) {
            return Err(Error::spec("generator element out of range"));
        }

        // Layered BFS in letter order yields shortlex-least words.
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[0] = Some(Word::new());
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            let base = words[x as usize].clone().unwrap();
            for (g, &ge) in generators.iter().enumerate() {
                for inv in [false, true] {
                    let step = if inv { inverse[ge as usize] } else { ge };
                    let y = table[x as usize][step as usize];
                    if words[y as usize].is_none() {
                        let mut w = base.clone();
                        w.push(Letter::new(g, inv));
                        words[y as usize] = Some(w);
                        queue.push_back(y);
                    }
                }
            }
        }
        if words.iter().any(Option::is_none) {
            return Err(Error::spec("generators do not generate the finite group"));
        }
        let words: Vec<Word> = words.into_iter().map(Option::unwrap).collect();
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        Ok(FiniteGroup {
            table,
            inverse,
            generators,
            words,
            index,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_involution(&self, generator: usize) -> bool {
        let g = self.generators[generator];
        g != 0 && self.inverse[g as usize] == g
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize][b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn letter_element(&self, l: Letter) -> u32 {
        let g = self.generators[l.generator()];
        if l.is_inverse() {
            self.inverse[g as usize]
        } else {
            g
        }
    }

    pub fn eval(&self, w: &[Letter]) -> u32 {
        w.iter()
            .fold(0, |acc, &l| self.mul(acc, self.letter_element(l)))
    }

    pub fn word(&self, x: u32) -> &Word {
        &self.words[x as usize]
    }

    /// Element id of a canonical word.
    pub fn id_of(&self, w: &[Letter]) -> u32 {
        self.index.get(w).copied().unwrap_or_else(|| self.eval(w))
    }

    pub fn norm(&self, x: u32) -> u32 {
        self.words[x as usize].len() as u32
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order() as u32
    }
}
