use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::finab::FinAbGroup;
use super::hnf::column_hnf;
use super::matrix::IntMatrix;

/// Smith normal form `U * A * V = S` with `U`, `V` unimodular and `S`
/// diagonal, the diagonal entries satisfying `d_1 | d_2 | ... | d_r` followed
/// by zeros.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// The nonzero diagonal entries, each positive, in divisibility order.
    pub invariant_factors: Vec<BigInt>,
}

/// Internal Smith engine with selectable transform tracking.
pub(crate) struct SnfData {
    pub s: IntMatrix,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    #[allow(dead_code)]
    pub v_inv: Option<IntMatrix>,
    pub invariant_factors: Vec<BigInt>,
}

/// Quotient q minimizing |a - q*b| for b > 0.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let (q, r) = a.div_mod_floor(b);
    if &(&r << 1) > b {
        q + BigInt::one()
    } else {
        q
    }
}

pub(crate) fn snf_engine(
    a: &IntMatrix,
    track_u: bool,
    track_u_inv: bool,
    track_v: bool,
    track_v_inv: bool,
) -> SnfData {
    let rows = a.rows();
    let cols = a.cols();
    let mut s = a.clone();
    let mut u = track_u.then(|| IntMatrix::identity(rows));
    let mut u_inv = track_u_inv.then(|| IntMatrix::identity(rows));
    let mut v = track_v.then(|| IntMatrix::identity(cols));
    let mut v_inv = track_v_inv.then(|| IntMatrix::identity(cols));

    // Row op helpers keep U, U^{-1} consistent: S' = E S  =>  U' = E U is not
    // what we track; we track U with U*A*V = S, so row ops multiply U on the
    // left and U^{-1} on the right by the inverse op.
    macro_rules! swap_rows {
        ($i:expr, $j:expr) => {{
            s.swap_rows($i, $j);
            if let Some(m) = u.as_mut() {
                m.swap_rows($i, $j);
            }
            if let Some(m) = u_inv.as_mut() {
                m.swap_cols($i, $j);
            }
        }};
    }
    macro_rules! row_axpy {
        // row[i] -= q * row[k]
        ($i:expr, $k:expr, $q:expr) => {{
            let q = $q;
            s.row_axpy($i, $k, &q);
            if let Some(m) = u.as_mut() {
                m.row_axpy($i, $k, &q);
            }
            if let Some(m) = u_inv.as_mut() {
                // (I - q e_ik)^{-1} = I + q e_ik: col[k] += q * col[i]
                let nq = -q;
                m.col_axpy($k, $i, &nq);
            }
        }};
    }
    macro_rules! negate_row {
        ($i:expr) => {{
            s.negate_row($i);
            if let Some(m) = u.as_mut() {
                m.negate_row($i);
            }
            if let Some(m) = u_inv.as_mut() {
                m.negate_col($i);
            }
        }};
    }
    macro_rules! swap_cols {
        ($i:expr, $j:expr) => {{
            s.swap_cols($i, $j);
            if let Some(m) = v.as_mut() {
                m.swap_cols($i, $j);
            }
            if let Some(m) = v_inv.as_mut() {
                m.swap_rows($i, $j);
            }
        }};
    }
    macro_rules! col_axpy {
        // col[j] -= q * col[k]
        ($j:expr, $k:expr, $q:expr) => {{
            let q = $q;
            s.col_axpy($j, $k, &q);
            if let Some(m) = v.as_mut() {
                m.col_axpy($j, $k, &q);
            }
            if let Some(m) = v_inv.as_mut() {
                let nq = -q;
                m.row_axpy($k, $j, &nq);
            }
        }};
    }

    let mut k = 0;
    'pivot: while k < rows.min(cols) {
        // Minimal absolute value nonzero entry as pivot bounds coefficient
        // growth.
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if s[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if s[(i, j)].abs() < s[(bi, bj)].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows!(k, pi);
        swap_cols!(k, pj);
        if s[(k, k)].is_negative() {
            negate_row!(k);
        }

        // Clear column k below the pivot; a nonzero remainder becomes a
        // strictly smaller pivot on the next pass.
        let mut dirty = false;
        for i in k + 1..rows {
            if !s[(i, k)].is_zero() {
                let q = nearest_quotient(&s[(i, k)], &s[(k, k)]);
                row_axpy!(i, k, q);
                if !s[(i, k)].is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue 'pivot;
        }
        for j in k + 1..cols {
            if !s[(k, j)].is_zero() {
                let q = nearest_quotient(&s[(k, j)], &s[(k, k)]);
                col_axpy!(j, k, q);
                if !s[(k, j)].is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue 'pivot;
        }

        // Pivot must divide the remaining submatrix to yield the chain
        // d_k | d_{k+1}; fold in a violating row and re-reduce.
        for i in k + 1..rows {
            for j in k + 1..cols {
                if !s[(i, j)].mod_floor(&s[(k, k)]).is_zero() {
                    let minus_one = -BigInt::one();
                    row_axpy!(k, i, minus_one);
                    continue 'pivot;
                }
            }
        }
        k += 1;
    }

    let mut invariant_factors = Vec::new();
    for i in 0..rows.min(cols) {
        if s[(i, i)].is_zero() {
            break;
        }
        invariant_factors.push(s[(i, i)].clone());
    }

    SnfData {
        s,
        u,
        u_inv,
        v,
        v_inv,
        invariant_factors,
    }
}

/// Smith normal form with both transforms, `U * A * V = S`.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let data = snf_engine(a, true, false, true, false);
    SmithForm {
        u: data.u.unwrap(),
        s: data.s,
        v: data.v.unwrap(),
        invariant_factors: data.invariant_factors,
    }
}

/// Rank over the integers (= rank over Q).
pub fn rank(a: &IntMatrix) -> usize {
    snf_engine(a, false, false, false, false).invariant_factors.len()
}

/// |det A| for square A: the product of the invariant factors, or 0.
pub fn abs_det(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows(), a.cols(), "determinant of a non-square matrix");
    let facs = snf_engine(a, false, false, false, false).invariant_factors;
    if facs.len() < a.rows() {
        return BigInt::zero();
    }
    facs.iter().product()
}

/// A saturated (primitive) basis of the integer kernel `{x : A x = 0}`,
/// returned as the columns of the result in column-Hermite canonical form.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let cols = a.cols();
    let data = snf_engine(a, false, false, true, false);
    let v = data.v.unwrap();
    let r = data.invariant_factors.len();
    let kernel_cols: Vec<usize> = (r..cols).collect();
    column_hnf(&v.select_columns(&kernel_cols))
}

/// Basis (as columns) of the solution lattice `{x : A x ≡ 0 (mod n)}`.
/// With `U A V = S`, the lattice is `V · diag(n / gcd(d_i, n))`.
pub fn solutions_mod_n(a: &IntMatrix, n: &BigInt) -> IntMatrix {
    let cols = a.cols();
    let data = snf_engine(a, false, false, true, false);
    let mut out = data.v.unwrap();
    for (i, d) in data.invariant_factors.iter().enumerate() {
        let g = d.gcd(n);
        let s = n / g;
        if !s.is_one() {
            for r in 0..cols {
                let val = &out[(r, i)] * &s;
                out[(r, i)] = val;
            }
        }
    }
    out
}

/// The group `Z^rows / column-span(A)` in canonical invariant-factor form.
pub fn cokernel(a: &IntMatrix) -> FinAbGroup {
    let data = snf_engine(a, false, false, false, false);
    let torsion: Vec<BigInt> = data
        .invariant_factors
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();
    FinAbGroup::new(a.rows() - data.invariant_factors.len(), torsion)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IntMatrix) {
        let f = smith_normal_form(a);
        assert_eq!(f.u.mul(a).mul(&f.v), f.s, "U*A*V != S");
        assert!(abs_det(&f.u).is_one(), "U not unimodular");
        assert!(abs_det(&f.v).is_one(), "V not unimodular");
        for w in f.invariant_factors.windows(2) {
            assert!(w[1].mod_floor(&w[0]).is_zero(), "divisibility chain broken");
        }
    }

    #[test]
    fn snf_spec_examples() {
        // d1 = gcd of entries = 2, d1*d2 = |det| = 8 by the 2x2 minor oracle.
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let f = smith_normal_form(&a);
        assert_eq!(
            f.invariant_factors,
            vec![BigInt::from(2), BigInt::from(4)]
        );
        check_snf(&a);

        let id = IntMatrix::identity(3);
        assert_eq!(
            smith_normal_form(&id).invariant_factors,
            vec![BigInt::from(1); 3]
        );

        let z = IntMatrix::zeros(2, 3);
        assert!(smith_normal_form(&z).invariant_factors.is_empty());
    }

    #[test]
    fn kernel_spec_examples() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
        // Saturated: the basis matrix has unit invariant factors.
        let facs = smith_normal_form(&k).invariant_factors;
        assert!(facs.iter().all(|d| d.is_one()));

        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
        assert_eq!(kernel_basis(&IntMatrix::zeros(1, 2)).cols(), 2);
    }

    #[test]
    fn cokernel_spec_examples() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let g = cokernel(&a);
        assert_eq!(g, FinAbGroup::new(0, vec![BigInt::from(6)]));

        assert!(cokernel(&IntMatrix::identity(4)).is_trivial());
        assert_eq!(cokernel(&IntMatrix::zeros(2, 2)), FinAbGroup::new(2, vec![]));
    }

    #[test]
    fn empty_matrices() {
        let a = IntMatrix::zeros(0, 3);
        assert_eq!(kernel_basis(&a).cols(), 3);
        let b = IntMatrix::zeros(3, 0);
        assert_eq!(cokernel(&b), FinAbGroup::new(3, vec![]));
        check_snf(&a);
        check_snf(&b);
    }
}
