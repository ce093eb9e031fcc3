use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::finab::FinAbGroup;
use super::hnf::solve_exact;
use super::matrix::IntMatrix;
use super::snf::snf_engine;
use super::{LinAlgError, Result};

/// A presentation of the quotient `Z^dim / column-span(relations)` that can
/// lift canonical generators to integer vectors and reduce integer vectors
/// to class coordinates.
#[derive(Debug, Clone)]
pub struct QuotientPresentation {
    dim: usize,
    u: IntMatrix,
    u_inv: IntMatrix,
    /// Invariant factor per adapted coordinate; 0 marks a free coordinate.
    orders: Vec<BigInt>,
    /// Adapted coordinates with order != 1, torsion first then free.
    kept: Vec<usize>,
    group: FinAbGroup,
}

impl QuotientPresentation {
    pub fn new(dim: usize, relations: &IntMatrix) -> Self {
        assert_eq!(relations.rows(), dim, "relation matrix must live in Z^dim");
        let data = snf_engine(relations, true, true, false, false);
        let r = data.invariant_factors.len();
        let mut orders = data.invariant_factors.clone();
        orders.extend(std::iter::repeat_n(BigInt::zero(), dim - r));
        let kept: Vec<usize> = (0..dim).filter(|&i| !orders[i].is_one()).collect();
        let torsion: Vec<BigInt> = data
            .invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect();
        let group = FinAbGroup::new(dim - r, torsion);
        QuotientPresentation {
            dim,
            u: data.u.unwrap(),
            u_inv: data.u_inv.unwrap(),
            orders,
            kept,
            group,
        }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Integer vector representing the i-th canonical generator.
    pub fn generator_rep(&self, i: usize) -> Vec<BigInt> {
        self.u_inv.column(self.kept[i])
    }

    /// Class coordinates of an arbitrary vector, aligned with the canonical
    /// generators (torsion coordinates reduced into `[0, d_i)`).
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim);
        let w = self.u.apply(v);
        self.kept
            .iter()
            .map(|&i| {
                if self.orders[i].is_zero() {
                    w[i].clone()
                } else {
                    w[i].mod_floor(&self.orders[i])
                }
            })
            .collect()
    }

    pub fn class_is_zero(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|c| c.is_zero())
    }
}

/// Homology of `Z^a --d_in--> Z^b --d_out--> Z^c` at the middle term, with
/// generator lifts into `Z^b` and class-coordinate reduction of kernel
/// vectors.
#[derive(Debug, Clone)]
pub struct HomologyAt {
    kernel: IntMatrix,
    pres: QuotientPresentation,
}

impl HomologyAt {
    pub fn group(&self) -> &FinAbGroup {
        self.pres.group()
    }

    /// Basis of `ker(d_out)` as columns.
    pub fn kernel_basis(&self) -> &IntMatrix {
        &self.kernel
    }

    /// Representative in `Z^b` of the i-th canonical generator.
    pub fn generator_rep(&self, i: usize) -> Vec<BigInt> {
        self.kernel.apply(&self.pres.generator_rep(i))
    }

    /// Class coordinates of a kernel vector; errors when the vector does not
    /// lie in `ker(d_out)`.
    pub fn reduce(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let col = IntMatrix::from_columns(&[v.to_vec()]);
        let w = solve_exact(&self.kernel, &col).ok_or(LinAlgError::NotInKernel)?;
        Ok(self.pres.reduce(&w.column(0)))
    }
}

/// `ker(d_out) / im(d_in)` for a two-step complex of free abelian groups.
/// Rejects inputs with `d_out * d_in != 0`.
pub fn homology_at(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<HomologyAt> {
    if d_out.cols() != d_in.rows() {
        return Err(LinAlgError::DimensionMismatch(format!(
            "middle dimensions disagree: d_in has {} rows, d_out has {} cols",
            d_in.rows(),
            d_out.cols()
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(LinAlgError::NotAComplex);
    }
    let kernel = super::kernel_basis(d_out);
    // im(d_in) lies in ker(d_out) and the kernel basis is saturated, so the
    // image has integral coordinates in that basis.
    let y = solve_exact(&kernel, d_in).ok_or(LinAlgError::NoSolution)?;
    let pres = QuotientPresentation::new(kernel.cols(), &y);
    Ok(HomologyAt { kernel, pres })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homology_spec_examples() {
        // Z --x2--> Z --0--> Z  gives Z/2.
        let d_in = IntMatrix::from_rows(&[vec![2]]);
        let d_out = IntMatrix::zeros(1, 1);
        let h = homology_at(&d_in, &d_out).unwrap();
        assert_eq!(h.group(), &FinAbGroup::cyclic(2));

        // Zero complex on rank 3 gives Z^3.
        let h = homology_at(&IntMatrix::zeros(3, 0), &IntMatrix::zeros(0, 3)).unwrap();
        assert_eq!(h.group(), &FinAbGroup::free(3));

        // Z --norm--> Z[Gamma] --> 0 for |Gamma| = 2: cokernel of (1,1)^T.
        let d_in = IntMatrix::from_rows(&[vec![1], vec![1]]);
        let d_out = IntMatrix::zeros(0, 2);
        let h = homology_at(&d_in, &d_out).unwrap();
        assert_eq!(h.group(), &FinAbGroup::free(1));
    }

    #[test]
    fn homology_rejects_non_complex() {
        let d_in = IntMatrix::identity(2);
        let d_out = IntMatrix::identity(2);
        assert!(matches!(
            homology_at(&d_in, &d_out),
            Err(LinAlgError::NotAComplex)
        ));
    }

    #[test]
    fn generator_reps_are_cycles_and_reduce_correctly() {
        // Z --x2--> Z --0--> Z.
        let d_in = IntMatrix::from_rows(&[vec![2]]);
        let d_out = IntMatrix::zeros(1, 1);
        let h = homology_at(&d_in, &d_out).unwrap();
        let rep = h.generator_rep(0);
        assert!(d_out.apply(&rep).iter().all(|x| x.is_zero()));
        // The generator reduces to coordinate 1, twice the generator to 0.
        assert_eq!(h.reduce(&rep).unwrap(), vec![BigInt::from(1)]);
        let double: Vec<BigInt> = rep.iter().map(|x| x * 2).collect();
        assert!(h.reduce(&double).unwrap().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn exact_complex_has_trivial_homology() {
        // Z --(1,0)^T--> Z^2 --(0,1)--> Z is exact in the middle.
        let d_in = IntMatrix::from_rows(&[vec![1], vec![0]]);
        let d_out = IntMatrix::from_rows(&[vec![0, 1]]);
        let h = homology_at(&d_in, &d_out).unwrap();
        assert!(h.group().is_trivial());
    }
}
