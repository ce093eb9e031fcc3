
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `U * A = H`, where `H` is in row echelon form with positive pivots and
/// the entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = a.rows();
    let cols = a.cols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut row = 0;

    for col in 0..cols {
        if row >= rows {
            break;
        }
        // Euclid on the column entries below `row`.
        loop {
            let mut best: Option<usize> = None;
            for i in row..rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        if h[(i, col)].abs() < h[(b, col)].abs() {
                            best = Some(i);
                        }
                    }
                }
            }
            let Some(p) = best else { break };
            h.swap_rows(row, p);
            u.swap_rows(row, p);
            if h[(row, col)].is_negative() {
                h.negate_row(row);
                u.negate_row(row);
            }
            let pivot = h[(row, col)].clone();
            let mut any = false;
            for i in row + 1..rows {
                if !h[(i, col)].is_zero() {
                    let q = h[(i, col)].div_floor(&pivot);
                    h.row_axpy(i, row, &q);
                    u.row_axpy(i, row, &q);
                    if !h[(i, col)].is_zero() {
                        any = true;
                    }
                }
            }
            if !any {
                // Reduce entries above the pivot into [0, pivot).
                for i in 0..row {
                    let q = h[(i, col)].div_floor(&pivot);
                    h.row_axpy(i, row, &q);
                    u.row_axpy(i, row, &q);
                }
                row += 1;
                break;
            }
        }
    }
    (h, u)
}

/// Canonical basis of the column lattice of `A`: the nonzero columns of the
/// column-style Hermite form.  Two generating sets span the same lattice iff
/// their `column_hnf` results are equal.
pub fn column_hnf(a: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(&a.transpose());
    let ht = h.transpose();
    let nonzero: Vec<usize> = (0..ht.cols())
        .filter(|&j| (0..ht.rows()).any(|i| !ht[(i, j)].is_zero()))
        .collect();
    ht.select_columns(&nonzero)
}

/// Solve `A X = B` exactly over the integers.  Returns `None` when no
/// integral solution exists.
pub fn solve_exact(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(a.rows(), b.rows(), "A and B must have matching row count");
    // Column echelon form of A via the row HNF of its transpose:
    // U * A^T = H  =>  A * U^T = H^T.
    let (h, u) = hermite_normal_form(&a.transpose());
    let hc = h.transpose(); // rows x cols, column echelon
    let w = u.transpose();

    // Pivot row of each nonzero column.
    let mut pivots = Vec::new();
    for j in 0..hc.cols() {
        let mut p = None;
        for i in 0..hc.rows() {
            if !hc[(i, j)].is_zero() {
                p = Some(i);
                break;
            }
        }
        if let Some(p) = p {
            pivots.push((j, p));
        }
    }

    let mut y = IntMatrix::zeros(a.cols(), b.cols());
    for rhs in 0..b.cols() {
        let mut r = b.column(rhs);
        for &(j, p) in &pivots {
            if r[p].is_zero() {
                continue;
            }
            let (q, rem) = r[p].div_rem(&hc[(p, j)]);
            if !rem.is_zero() {
                return None;
            }
            for i in 0..hc.rows() {
                if !hc[(i, j)].is_zero() {
                    let t = &q * &hc[(i, j)];
                    r[i] -= t;
                }
            }
            y[(j, rhs)] = q;
        }
        if r.iter().any(|e| !e.is_zero()) {
            return None;
        }
    }
    Some(w.mul(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_spec_examples() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(h, a);
        assert!(u.is_identity());

        let a = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let (h, u) = hermite_normal_form(&a);
        assert!(h.is_identity());
        assert_eq!(u.mul(&a), h);

        // gcd(2,3) = 1 by Euclid.
        let a = IntMatrix::from_rows(&[vec![2], vec![3]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(h, IntMatrix::from_rows(&[vec![1], vec![0]]));
        assert_eq!(u.mul(&a), h);
    }

    #[test]
    fn solve_exact_roundtrip() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![0, 3], vec![1, 1]]);
        let x = IntMatrix::from_rows(&[vec![4], vec![-5]]);
        let b = a.mul(&x);
        let sol = solve_exact(&a, &b).unwrap();
        assert_eq!(a.mul(&sol), b);
    }

    #[test]
    fn solve_exact_detects_non_integral() {
        let a = IntMatrix::from_rows(&[vec![2]]);
        let b = IntMatrix::from_rows(&[vec![3]]);
        assert!(solve_exact(&a, &b).is_none());
    }

    #[test]
    fn column_hnf_is_lattice_canonical() {
        // Two generating sets of the same lattice.
        let g1 = IntMatrix::from_rows(&[vec![2, 0, 2], vec![0, 3, 3]]);
        let g2 = IntMatrix::from_rows(&[vec![2, 2], vec![3, 0]]);
        assert_eq!(column_hnf(&g1), column_hnf(&g2));
    }
}
