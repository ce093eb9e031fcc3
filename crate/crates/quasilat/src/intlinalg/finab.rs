use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::hnf::{column_hnf, solve_exact};
use super::matrix::IntMatrix;
use super::snf::cokernel;
use super::{LinAlgError, Result};

/// A finitely generated abelian group in canonical invariant-factor form:
/// `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_t` with `d_1 | d_2 | ... | d_t`, each
/// `d_i >= 2`.  Two groups are equal iff their fields are equal.
///
/// The canonical generators are ordered torsion first (in divisibility
/// order), then the free generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        for d in &torsion {
            assert!(d >= &BigInt::from(2), "torsion factors must be >= 2");
        }
        for w in torsion.windows(2) {
            assert!(
                w[1].mod_floor(&w[0]).is_zero(),
                "torsion factors must form a divisibility chain"
            );
        }
        FinAbGroup { free_rank, torsion }
    }

    pub fn trivial() -> Self {
        FinAbGroup { free_rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup { free_rank: rank, torsion: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1);
        if n == 1 {
            Self::trivial()
        } else {
            FinAbGroup { free_rank: 0, torsion: vec![BigInt::from(n)] }
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Total order; `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion_order())
    }

    pub fn num_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Orders of the canonical generators; 0 stands for infinite order.
    pub fn generator_orders(&self) -> Vec<BigInt> {
        let mut out = self.torsion.clone();
        out.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank));
        out
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{}", d));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup({})", self)
    }
}

/// Kernel of a homomorphism `f` between two finitely generated abelian
/// groups.  The matrix `f` is given on canonical generators: column `j`
/// holds the image of the j-th generator of `source` in the canonical
/// coordinates of `target`.  Rejects matrices that do not respect the
/// relations of the source presentation.
pub fn finab_map_kernel(
    source: &FinAbGroup,
    target: &FinAbGroup,
    f: &IntMatrix,
) -> Result<FinAbGroup> {
    map_kernel_into_orders(&source.generator_orders(), &target.generator_orders(), f)
}

/// Kernel of a map between groups presented by generator orders (0 marks a
/// free generator).  The target need not be in canonical form; this is what
/// `sha2` uses against a direct product of cyclic Tate groups.
pub fn map_kernel_into_orders(
    src_orders: &[BigInt],
    tgt_orders: &[BigInt],
    f: &IntMatrix,
) -> Result<FinAbGroup> {
    let a = src_orders.len();
    let b = tgt_orders.len();
    if f.rows() != b || f.cols() != a {
        return Err(LinAlgError::DimensionMismatch(format!(
            "map matrix is {}x{}, expected {}x{}",
            f.rows(),
            f.cols(),
            b,
            a
        )));
    }

    // Well-definedness: o_j * f(e_j) must vanish in the target.
    for j in 0..a {
        if src_orders[j].is_zero() {
            continue;
        }
        for i in 0..b {
            let v = &src_orders[j] * &f[(i, j)];
            let ok = if tgt_orders[i].is_zero() {
                v.is_zero()
            } else {
                v.mod_floor(&tgt_orders[i]).is_zero()
            };
            if !ok {
                return Err(LinAlgError::IllDefinedMap);
            }
        }
    }

    // L = {x in Z^a : f x lies in the relation lattice of the target}.
    // Solve with auxiliary variables y over the torsion coordinates:
    // rows i free:     f_i x           = 0
    // rows i torsion:  f_i x + t_i y_i = 0
    let tors_rows: Vec<usize> = (0..b).filter(|&i| !tgt_orders[i].is_zero()).collect();
    let mut m = IntMatrix::zeros(b, a + tors_rows.len());
    for i in 0..b {
        for j in 0..a {
            m[(i, j)] = f[(i, j)].clone();
        }
    }
    for (y_idx, &i) in tors_rows.iter().enumerate() {
        m[(i, a + y_idx)] = tgt_orders[i].clone();
    }
    let ker = super::kernel_basis(&m);
    let x_rows: Vec<usize> = (0..a).collect();
    let l_gens = ker.select_rows(&x_rows);
    let l_basis = column_hnf(&l_gens);

    // The kernel subgroup is L / R_src.
    let src_tors: Vec<usize> = (0..a).filter(|&j| !src_orders[j].is_zero()).collect();
    let mut r_src = IntMatrix::zeros(a, src_tors.len());
    for (c, &j) in src_tors.iter().enumerate() {
        r_src[(j, c)] = src_orders[j].clone();
    }
    let y = solve_exact(&l_basis, &r_src).ok_or(LinAlgError::IllDefinedMap)?;
    Ok(cokernel_of_presentation(l_basis.cols(), &y))
}

fn cokernel_of_presentation(dim: usize, relations: &IntMatrix) -> FinAbGroup {
    if dim == 0 {
        return FinAbGroup::trivial();
    }
    debug_assert_eq!(relations.rows(), dim);
    cokernel(relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(FinAbGroup::trivial().to_string(), "0");
        assert_eq!(FinAbGroup::free(2).to_string(), "Z^2");
        assert_eq!(FinAbGroup::cyclic(2).to_string(), "Z/2");
        assert_eq!(
            FinAbGroup::new(1, vec![BigInt::from(2), BigInt::from(4)]).to_string(),
            "Z + Z/2 + Z/4"
        );
    }

    #[test]
    fn map_kernel_spec_examples() {
        let z2 = FinAbGroup::cyclic(2);
        let z3 = FinAbGroup::cyclic(3);
        let z4 = FinAbGroup::cyclic(4);

        // identity on Z/2 -> trivial kernel
        let id = IntMatrix::from_rows(&[vec![1]]);
        assert!(finab_map_kernel(&z2, &z2, &id).unwrap().is_trivial());

        // zero map Z/2 -> Z/3 has kernel Z/2
        let zero = IntMatrix::from_rows(&[vec![0]]);
        assert_eq!(finab_map_kernel(&z2, &z3, &zero).unwrap(), z2);

        // Z/4 --x2--> Z/4 has kernel {0, 2} = Z/2
        let two = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(finab_map_kernel(&z4, &z4, &two).unwrap(), z2);
    }

    #[test]
    fn map_kernel_rejects_ill_defined() {
        // "Z/2 -> Z/4, 1 |-> 1" does not respect 2*1 = 0.
        let z2 = FinAbGroup::cyclic(2);
        let z4 = FinAbGroup::cyclic(4);
        let f = IntMatrix::from_rows(&[vec![1]]);
        assert_eq!(
            finab_map_kernel(&z2, &z4, &f),
            Err(LinAlgError::IllDefinedMap)
        );
    }

    #[test]
    fn map_kernel_mixed_free_and_torsion() {
        // f: Z -> Z/6, 1 |-> 2. Kernel = 3Z = Z.
        let z = FinAbGroup::free(1);
        let z6 = FinAbGroup::cyclic(6);
        let f = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(finab_map_kernel(&z, &z6, &f).unwrap(), FinAbGroup::free(1));
    }
}
