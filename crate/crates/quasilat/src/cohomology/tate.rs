//! Tate cohomology of cyclic subgroups in degree 0.
//!
//! For a cyclic `C` acting on `L`, periodicity gives
//! `H²(C, L) ≅ Ĥ⁰(C, L) = L^C / N_C·L`; this is the restriction target used
//! by the Tate–Shafarevich kernel.

use num_bigint::BigInt;

use super::{CohomologyError, Result};
use crate::glattice::GLattice;
use crate::groups::Subgroup;
use crate::intlinalg::{solve_exact, FinAbGroup, IntMatrix, QuotientPresentation};

/// `Ĥ⁰(C, L) = L^C / N_C·L` together with the data needed to reduce fixed
/// vectors into class coordinates.
#[derive(Debug, Clone)]
pub struct TateH0 {
    fixed: IntMatrix,
    pres: QuotientPresentation,
}

impl TateH0 {
    pub fn group(&self) -> &FinAbGroup {
        self.pres.group()
    }

    /// Basis of `L^C` as columns in `L` coordinates.
    pub fn fixed_basis(&self) -> &IntMatrix {
        &self.fixed
    }

    /// Class of a fixed vector.
    pub fn reduce(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let col = IntMatrix::from_columns(&[v.to_vec()]);
        let w = solve_exact(&self.fixed, &col).ok_or_else(|| {
            CohomologyError::Internal("vector is not fixed by the cyclic subgroup".into())
        })?;
        Ok(self.pres.reduce(&w.column(0)))
    }
}

/// Fixed sublattice modulo the image of the norm `Σ_{c∈C} action(c)`.
pub fn tate_h2_cyclic(cyclic: &Subgroup, lattice: &GLattice) -> Result<TateH0> {
    if !cyclic.is_cyclic()? {
        return Err(CohomologyError::NotCyclic);
    }
    let actions = lattice.actions_of_subgroup(cyclic)?;
    let rank = lattice.rank();

    // L^C: common kernel of (action - 1).
    let mut stacked = IntMatrix::zeros(0, rank);
    for a in &actions {
        if !a.is_identity() {
            stacked = stacked.vstack(&a.sub(&IntMatrix::identity(rank)));
        }
    }
    let fixed = if stacked.rows() == 0 {
        IntMatrix::identity(rank)
    } else {
        crate::intlinalg::kernel_basis(&stacked)
    };

    // Norm image N_C·L expressed in the fixed basis.
    let mut norm = IntMatrix::zeros(rank, rank);
    for a in &actions {
        norm = norm.add(a);
    }
    let y = solve_exact(&fixed, &norm).ok_or_else(|| {
        CohomologyError::Internal("norm image does not lie in the fixed sublattice".into())
    })?;
    let pres = QuotientPresentation::new(fixed.cols(), &y);
    if !pres.group().is_finite() {
        return Err(CohomologyError::Internal(
            "cyclic Tate group has unexpected free rank".into(),
        ));
    }
    Ok(TateH0 { fixed, pres })
}
