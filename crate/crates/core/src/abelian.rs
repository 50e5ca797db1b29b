//! Abelianization of finite presentations via Smith normal form.

use serde::{Deserialize, Serialize};

/// `Z^free_rank + Z/t_1 + ... + Z/t_k` with `t_1 | t_2 | ... | t_k`, all `t_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abelianization {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl Abelianization {
    /// `matrix` has one row per relator and `columns` entries per row.
    pub fn of_matrix(matrix: &[Vec<i64>], columns: usize) -> Self {
        let snf = SmithForm::compute(matrix, columns);
        Abelianization {
            free_rank: columns - snf.diagonal.len(),
            torsion: snf
                .diagonal
                .iter()
                .map(|d| d.unsigned_abs() as u64)
                .filter(|d| *d > 1)
                .collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_infinite_cyclic(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for Abelianization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = (0..self.free_rank).map(|_| "Z".to_string()).collect();
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Diagonal form `U M V = D` of an integer matrix, keeping `V`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero diagonal entries, each dividing the next. Sign normalized to positive.
    pub diagonal: Vec<i128>,
    /// Column transform, `columns x columns`, unimodular.
    pub column_transform: Vec<Vec<i128>>,
}

impl SmithForm {
    pub fn compute(matrix: &[Vec<i64>], columns: usize) -> Self {
        let rows = matrix.len();
        let mut a: Vec<Vec<i128>> = matrix
            .iter()
            .map(|r| {
                assert_eq!(r.len(), columns, "ragged exponent matrix");
                r.iter().map(|&e| e as i128).collect()
            })
            .collect();
        let mut v: Vec<Vec<i128>> = (0..columns)
            .map(|i| (0..columns).map(|j| i128::from(i == j)).collect())
            .collect();

        let swap_cols = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, c1: usize, c2: usize| {
            if c1 != c2 {
                for row in a.iter_mut() {
                    row.swap(c1, c2);
                }
                for row in v.iter_mut() {
                    row.swap(c1, c2);
                }
            }
        };
        // col_dst -= q * col_src
        let sub_col = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, dst: usize, src: usize, q: i128| {
            for row in a.iter_mut() {
                row[dst] -= q * row[src];
            }
            for row in v.iter_mut() {
                row[dst] -= q * row[src];
            }
        };

        let mut diagonal = Vec::new();
        let mut t = 0;
        while t < rows.min(columns) {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..columns {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            swap_cols(&mut a, &mut v, t, pj);

            loop {
                let pivot = a[t][t];
                let mut clean = true;
                for i in t + 1..rows {
                    if a[i][t] != 0 {
                        let q = a[i][t].div_euclid(pivot);
                        let (top, rest) = a.split_at_mut(i);
                        for (x, y) in rest[0].iter_mut().zip(top[t].iter()) {
                            *x -= q * y;
                        }
                        if a[i][t] != 0 {
                            clean = false;
                        }
                    }
                }
                for j in t + 1..columns {
                    if a[t][j] != 0 {
                        let q = a[t][j].div_euclid(pivot);
                        sub_col(&mut a, &mut v, j, t, q);
                        if a[t][j] != 0 {
                            clean = false;
                        }
                    }
                }
                if clean {
                    let bad = (t + 1..rows).find(|&i| (t + 1..columns).any(|j| a[i][j] % pivot != 0));
                    match bad {
                        Some(i) => {
                            let (top, rest) = a.split_at_mut(i);
                            for (x, y) in top[t].iter_mut().zip(rest[0].iter()) {
                                *x += y;
                            }
                            continue;
                        }
                        None => break,
                    }
                }
                // move the smallest remaining entry of row/column t to the pivot
                let mut best = (t, t);
                for i in t..rows {
                    if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..columns {
                    if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                } else if best.1 != t {
                    swap_cols(&mut a, &mut v, t, best.1);
                }
            }
            if a[t][t] < 0 {
                for row in v.iter_mut() {
                    row[t] = -row[t];
                }
                for row in a.iter_mut() {
                    row[t] = -row[t];
                }
            }
            diagonal.push(a[t][t]);
            t += 1;
        }
        SmithForm {
            diagonal,
            column_transform: v,
        }
    }
}

/// A surjection from the presented group onto `Z/modulus`, given by the image
/// of each generator. Exists exactly when the abelianization is nontrivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicQuotient {
    pub modulus: u64,
    pub images: Vec<u64>,
}

pub fn cyclic_quotient(matrix: &[Vec<i64>], columns: usize) -> Option<CyclicQuotient> {
    let snf = SmithForm::compute(matrix, columns);
    let (column, modulus) = match snf.diagonal.iter().position(|d| *d > 1) {
        Some(j) => (j, smallest_prime_factor(snf.diagonal[j] as u64)),
        None if snf.diagonal.len() < columns => (snf.diagonal.len(), 2),
        None => return None,
    };
    let images = (0..columns)
        .map(|k| snf.column_transform[k][column].rem_euclid(modulus as i128) as u64)
        .collect();
    Some(CyclicQuotient { modulus, images })
}

/// When the abelianization is `Z`, the image of each generator in `Z`.
/// The sign is fixed so that the first nonzero image is positive.
pub fn infinite_cyclic_images(matrix: &[Vec<i64>], columns: usize) -> Option<Vec<i64>> {
    let snf = SmithForm::compute(matrix, columns);
    if snf.diagonal.len() + 1 != columns || snf.diagonal.iter().any(|d| *d != 1) {
        return None;
    }
    let j = snf.diagonal.len();
    let mut images: Vec<i64> = (0..columns).map(|k| snf.column_transform[k][j] as i64).collect();
    if images.iter().find(|i| **i != 0).is_some_and(|i| *i < 0) {
        images.iter_mut().for_each(|i| *i = -*i);
    }
    Some(images)
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..).take_while(|d| d * d <= n).find(|d| n % d == 0).unwrap_or(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        // <x | x^3>
        assert_eq!(
            Abelianization::of_matrix(&[vec![3]], 1),
            Abelianization {
                free_rank: 0,
                torsion: vec![3]
            }
        );
        // Z/2 + Z/3 = Z/6
        let a = Abelianization::of_matrix(&[vec![2, 0], vec![0, 3]], 2);
        assert_eq!(a.torsion, vec![6]);
        // Z/2 + Z/4 stays
        let a = Abelianization::of_matrix(&[vec![2, 0], vec![0, 4]], 2);
        assert_eq!(a.torsion, vec![2, 4]);
        // trefoil exponent matrix
        let a = Abelianization::of_matrix(&[vec![1, -1]], 2);
        assert!(a.is_infinite_cyclic());
        assert!(Abelianization::of_matrix(&[], 0).is_trivial());
        assert_eq!(Abelianization::of_matrix(&[], 2).free_rank, 2);
    }

    #[test]
    fn cyclic_quotients() {
        let q = cyclic_quotient(&[vec![1, -1], vec![2, 1]], 2).unwrap();
        assert_eq!(q.modulus, 3);
        assert_eq!(cyclic_quotient(&[vec![1, 0], vec![0, 1]], 2), None);
    }

    #[test]
    fn infinite_cyclic_images_of_knot_groups() {
        assert_eq!(infinite_cyclic_images(&[vec![1, -1]], 2), Some(vec![1, 1]));
        // <x, y | x^2 y^-3>: H1 = Z with x -> 3, y -> 2
        assert_eq!(infinite_cyclic_images(&[vec![2, -3]], 2), Some(vec![3, 2]));
        assert_eq!(infinite_cyclic_images(&[vec![2, 0]], 2), None);
    }

    /// Order of the abelian group via |det| when square and nonsingular.
    fn det(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        let mut total = 0i128;
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            total += sign * m[0][j] as i128 * det(&minor);
        }
        total
    }

    proptest! {
        #[test]
        fn square_order_matches_determinant(entries in prop::collection::vec(-4i64..=4, 9)) {
            let m: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let a = Abelianization::of_matrix(&m, 3);
            let d = det(&m).unsigned_abs();
            if d == 0 {
                prop_assert!(a.free_rank > 0);
            } else {
                prop_assert_eq!(a.free_rank, 0);
                prop_assert_eq!(a.torsion.iter().product::<u64>() as u128, d);
                for pair in a.torsion.windows(2) {
                    prop_assert_eq!(pair[1] % pair[0], 0);
                }
            }
        }

        #[test]
        fn cyclic_quotient_kills_relators(entries in prop::collection::vec(-4i64..=4, 6)) {
            let m: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let a = Abelianization::of_matrix(&m, 3);
            match cyclic_quotient(&m, 3) {
                None => prop_assert!(a.is_trivial()),
                Some(q) => {
                    for row in &m {
                        let s: i128 = row.iter().zip(&q.images).map(|(e, i)| *e as i128 * *i as i128).sum();
                        prop_assert_eq!(s.rem_euclid(q.modulus as i128), 0);
                    }
                    prop_assert!(q.images.iter().any(|i| *i != 0));
                }
            }
        }
    }
}
