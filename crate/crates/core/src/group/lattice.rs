//! Integer row-echelon (Hermite normal form) helpers for sublattices of `Z^d`.

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result has no zero rows, strictly increasing pivot columns, positive
/// pivots and entries above each pivot reduced into `[0, pivot)`.
pub(crate) fn hnf(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .filter(|r: &Vec<i128>| r.iter().any(|&x| x != 0))
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..dim {
        if pivot_row >= m.len() {
            break;
        }
        loop {
            // Move the smallest nonzero entry of this column into the pivot row.
            let best = (pivot_row..m.len())
                .filter(|&i| m[i][col] != 0)
                .min_by_key(|&i| m[i][col].abs());
            let Some(best) = best else { break };
            m.swap(pivot_row, best);
            let p = m[pivot_row][col];
            let mut done = true;
            for i in pivot_row + 1..m.len() {
                let q = m[i][col].div_euclid(p);
                if q != 0 {
                    for j in 0..dim {
                        m[i][j] -= q * m[pivot_row][j];
                    }
                }
                if m[i][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[pivot_row][col] == 0 {
            continue;
        }
        if m[pivot_row][col] < 0 {
            for x in m[pivot_row].iter_mut() {
                *x = -*x;
            }
        }
        let p = m[pivot_row][col];
        for i in 0..pivot_row {
            let q = m[i][col].div_euclid(p);
            if q != 0 {
                for j in 0..dim {
                    m[i][j] -= q * m[pivot_row][j];
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    m.into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("lattice entries fit in i64")).collect())
        .collect()
}

/// Index of the span of `rows` in `Z^dim`, or `None` when the rank is deficient.
pub(crate) fn index_of_span(rows: &[Vec<i64>], dim: usize) -> Option<u64> {
    let h = hnf(rows, dim);
    if h.len() < dim {
        return None;
    }
    Some((0..dim).map(|i| h[i][i] as u64).product())
}

/// Membership of `v` in the lattice whose Hermite normal form is `basis`.
pub(crate) fn contains(basis: &[Vec<i64>], v: &[i64]) -> bool {
    let mut r: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    for row in basis {
        let col = row.iter().position(|&x| x != 0).expect("hnf rows are nonzero");
        let p = row[col] as i128;
        if r[col] % p != 0 {
            return false;
        }
        let q = r[col] / p;
        for (x, &b) in r.iter_mut().zip(row) {
            *x -= q * b as i128;
        }
    }
    r.iter().all(|&x| x == 0)
}

/// Hermite normal form of the intersection of two lattices in `Z^dim`.
pub(crate) fn intersect(a: &[Vec<i64>], b: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    // Rows [A | A] and [B | 0]; rows with a vanishing first block carry xA = -yB.
    let mut stacked = Vec::new();
    for row in a {
        let mut r = row.clone();
        r.extend_from_slice(row);
        stacked.push(r);
    }
    for row in b {
        let mut r = row.clone();
        r.extend(std::iter::repeat(0).take(dim));
        stacked.push(r);
    }
    let h = hnf(&stacked, 2 * dim);
    let second: Vec<Vec<i64>> = h
        .into_iter()
        .filter(|r| r[..dim].iter().all(|&x| x == 0))
        .map(|r| r[dim..].to_vec())
        .collect();
    hnf(&second, dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_is_the_determinant() {
        assert_eq!(index_of_span(&[vec![2, 0], vec![0, 2]], 2), Some(4));
        assert_eq!(index_of_span(&[vec![1, 1], vec![1, -1]], 2), Some(2));
        assert_eq!(index_of_span(&[vec![1, 1], vec![2, 2]], 2), None);
        assert_eq!(index_of_span(&[vec![1, 0], vec![0, 1], vec![3, 5]], 2), Some(1));
    }

    #[test]
    fn membership_and_intersection() {
        let a = hnf(&[vec![2, 0], vec![0, 1]], 2);
        let b = hnf(&[vec![1, 0], vec![0, 3]], 2);
        let c = intersect(&a, &b, 2);
        assert_eq!(c, vec![vec![2, 0], vec![0, 3]]);
        assert!(contains(&c, &[4, -6]));
        assert!(!contains(&c, &[4, -5]));
        let d = intersect(&hnf(&[vec![1, 1], vec![0, 2]], 2), &hnf(&[vec![2, 0], vec![0, 1]], 2), 2);
        assert_eq!(index_of_span(&d, 2), Some(4));
    }
}
