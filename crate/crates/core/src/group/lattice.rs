//! Integer lattices in Z^n: Hermite normal form with a tracked transform.
//!
//! Used as the membership and transversal oracle for subgroups of free
//! abelian groups. Coset representatives are the residues with every pivot
//! coordinate in `[0, pivot)`.

#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    /// Echelon basis rows with positive pivots.
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    /// `basis[i] = sum_j transform[i][j] * gens[j]`.
    transform: Vec<Vec<i64>>,
    /// Integer relations among the generators.
    relations: Vec<Vec<i64>>,
    gens: usize,
}

impl Lattice {
    pub fn new(dim: usize, gens: &[Vec<i64>]) -> Self {
        let k = gens.len();
        let mut rows: Vec<Vec<i64>> = gens.to_vec();
        let mut t: Vec<Vec<i64>> = (0..k)
            .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut p = 0;
        for col in 0..dim {
            if p == k {
                break;
            }
            loop {
                let best = (p..k)
                    .filter(|&r| rows[r][col] != 0)
                    .min_by_key(|&r| rows[r][col].abs());
                let Some(best) = best else { break };
                rows.swap(p, best);
                t.swap(p, best);
                let mut done = true;
                for r in p + 1..k {
                    if rows[r][col] != 0 {
                        let q = rows[r][col].div_euclid(rows[p][col]);
                        sub_scaled(&mut rows, r, p, q);
                        sub_scaled(&mut t, r, p, q);
                        if rows[r][col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if p < k && rows[p][col] != 0 {
                if rows[p][col] < 0 {
                    rows[p].iter_mut().for_each(|x| *x = -*x);
                    t[p].iter_mut().for_each(|x| *x = -*x);
                }
                for r in 0..p {
                    let q = rows[r][col].div_euclid(rows[p][col]);
                    if q != 0 {
                        sub_scaled(&mut rows, r, p, q);
                        sub_scaled(&mut t, r, p, q);
                    }
                }
                pivots.push(col);
                p += 1;
            }
        }
        let relations = t[p..].to_vec();
        rows.truncate(p);
        t.truncate(p);
        Lattice {
            dim,
            basis: rows,
            pivots,
            transform: t,
            relations,
            gens: k,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Index in Z^n, or `None` when the lattice is not of full rank.
    pub fn index(&self) -> Option<u64> {
        if self.rank() < self.dim {
            return None;
        }
        Some(
            self.basis
                .iter()
                .zip(&self.pivots)
                .map(|(row, &c)| row[c] as u64)
                .product(),
        )
    }

    /// Splits `x = residue + sum_i coeff[i] * basis[i]`.
    fn split(&self, x: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let mut r = x.to_vec();
        let mut coeff = vec![0; self.basis.len()];
        for (i, (row, &c)) in self.basis.iter().zip(&self.pivots).enumerate() {
            let q = r[c].div_euclid(row[c]);
            if q != 0 {
                for (a, b) in r.iter_mut().zip(row) {
                    *a -= q * b;
                }
                coeff[i] = q;
            }
        }
        (r, coeff)
    }

    pub fn residue(&self, x: &[i64]) -> Vec<i64> {
        self.split(x).0
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.residue(x).iter().all(|&v| v == 0)
    }

    /// Coefficients over the original generators, if `x` lies in the lattice.
    pub fn express(&self, x: &[i64]) -> Option<Vec<i64>> {
        let (r, coeff) = self.split(x);
        if r.iter().any(|&v| v != 0) {
            return None;
        }
        let mut out = vec![0; self.gens];
        for (c, trow) in coeff.iter().zip(&self.transform) {
            for (o, t) in out.iter_mut().zip(trow) {
                *o += c * t;
            }
        }
        Some(out)
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }
}

fn sub_scaled(rows: &mut [Vec<i64>], target: usize, source: usize, q: i64) {
    let src = rows[source].clone();
    for (a, b) in rows[target].iter_mut().zip(&src) {
        *a -= q * b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclic_sublattice_residues() {
        let l = Lattice::new(1, &[vec![3]]);
        assert_eq!(l.index(), Some(3));
        assert_eq!(l.residue(&[7]), vec![1]);
        assert_eq!(l.residue(&[-1]), vec![2]);
        assert_eq!(l.express(&[-6]), Some(vec![-2]));
        assert_eq!(l.express(&[5]), None);
    }

    #[test]
    fn dependent_generators_give_relations() {
        let l = Lattice::new(1, &[vec![4], vec![6]]);
        assert_eq!(l.index(), Some(2));
        assert_eq!(l.relations().len(), 1);
        let rel = &l.relations()[0];
        assert_eq!(rel[0] * 4 + rel[1] * 6, 0);
        let c = l.express(&[2]).unwrap();
        assert_eq!(c[0] * 4 + c[1] * 6, 2);
    }

    #[test]
    fn non_full_rank() {
        let l = Lattice::new(2, &[vec![0, 1]]);
        assert_eq!(l.index(), None);
        assert!(l.contains(&[0, -5]));
        assert_eq!(l.residue(&[3, 4]), vec![3, 0]);
    }

    proptest! {
        #[test]
        fn express_reconstructs_members(
            gens in proptest::collection::vec(proptest::collection::vec(-6i64..7, 2), 1..4),
            coeffs in proptest::collection::vec(-5i64..6, 4),
        ) {
            let l = Lattice::new(2, &gens);
            let mut x = vec![0i64; 2];
            for (g, c) in gens.iter().zip(&coeffs) {
                x[0] += c * g[0];
                x[1] += c * g[1];
            }
            prop_assert!(l.contains(&x));
            let e = l.express(&x).unwrap();
            let mut y = vec![0i64; 2];
            for (g, c) in gens.iter().zip(&e) {
                y[0] += c * g[0];
                y[1] += c * g[1];
            }
            prop_assert_eq!(x, y);
            for rel in l.relations() {
                let s0: i64 = gens.iter().zip(rel).map(|(g, c)| g[0] * c).sum();
                let s1: i64 = gens.iter().zip(rel).map(|(g, c)| g[1] * c).sum();
                prop_assert_eq!((s0, s1), (0, 0));
            }
        }

        #[test]
        fn residue_is_constant_on_cosets(
            gens in proptest::collection::vec(proptest::collection::vec(-6i64..7, 2), 1..3),
            x in proptest::collection::vec(-20i64..21, 2),
            c in proptest::collection::vec(-3i64..4, 3),
        ) {
            let l = Lattice::new(2, &gens);
            let mut y = x.clone();
            for (g, k) in gens.iter().zip(&c) {
                y[0] += k * g[0];
                y[1] += k * g[1];
            }
            let r = l.residue(&x);
            prop_assert_eq!(&l.residue(&y), &r);
            prop_assert_eq!(l.residue(&r), r);
        }
    }
}
