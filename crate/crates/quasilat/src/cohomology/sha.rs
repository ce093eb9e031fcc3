//! The Tate–Shafarevich group `Sh²(Γ, L)`: the kernel of the joint
//! restriction of `H²(Γ, L)` to all cyclic subgroups, and the obstruction
//! search over elementary-abelian subgroups of a Weyl group.
//!
//! A nonzero `Sh` on any subgroup obstructs quasi-invertibility.  The
//! converse fails (there are non-quasi-invertible lattices with vanishing
//! `Sh` everywhere), so a fruitless search is reported as
//! "no obstruction found", never as a positive certificate.

use num_bigint::BigInt;

use super::{
    h2_with_path, restriction_h2, tate_h2_cyclic, CohomologyBudget, CohomologyError,
    CohomologyResult, H2Path, Result,
};
use crate::glattice::{same_group, GLattice};
use crate::groups::{GroupError, MatGroup, Subgroup};
use crate::intlinalg::{map_kernel_into_orders, FinAbGroup, IntMatrix};

/// Audit record for one cyclic subgroup processed by [`sha2`].
#[derive(Debug, Clone)]
pub struct CyclicAudit {
    /// Sorted element indices inside the ambient group.
    pub element_indices: Vec<usize>,
    pub order: usize,
    /// `Ĥ⁰(C, L)`, the restriction target.
    pub target: FinAbGroup,
    /// Image coordinates of each `H²` generator.
    pub images: Vec<Vec<BigInt>>,
}

/// Result of a `Sh²` computation.
#[derive(Debug, Clone)]
pub struct ShaResult {
    pub sha: FinAbGroup,
    pub ambient_h2: FinAbGroup,
    pub per_cyclic_kernels: Vec<CyclicAudit>,
}

/// `Sh²(Γ, L) = ker[H²(Γ,L) → Π_C H²(C,L)]` over all cyclic subgroups `C`,
/// computed through the periodicity isomorphism on each factor.
pub fn sha2(group: &MatGroup, lattice: &GLattice) -> Result<ShaResult> {
    sha2_with(group, lattice, H2Path::Auto, &CohomologyBudget::default())
}

pub fn sha2_with(
    group: &MatGroup,
    lattice: &GLattice,
    path: H2Path,
    budget: &CohomologyBudget,
) -> Result<ShaResult> {
    if !same_group(group, lattice.group()) {
        return Err(CohomologyError::GroupMismatch);
    }
    let h2 = h2_with_path(group, lattice, path, budget)?;
    sha_from_h2(group, lattice, &h2)
}

pub(crate) fn sha_from_h2(
    group: &MatGroup,
    lattice: &GLattice,
    h2: &CohomologyResult,
) -> Result<ShaResult> {
    let cyclics = group.cyclic_subgroups()?;
    let n_gens = h2.group.num_generators();

    let mut audits = Vec::new();
    let mut target_orders: Vec<BigInt> = Vec::new();
    let mut map_rows: Vec<Vec<BigInt>> = Vec::new();

    for c in &cyclics {
        if c.is_trivial() {
            audits.push(CyclicAudit {
                element_indices: c.element_indices().to_vec(),
                order: 1,
                target: FinAbGroup::trivial(),
                images: vec![vec![]; n_gens],
            });
            continue;
        }
        let tate = tate_h2_cyclic(c, lattice)?;
        let t_gens = tate.group().num_generators();
        let mut images = Vec::with_capacity(n_gens);
        for rep in &h2.cocycle_reps {
            images.push(restriction_h2(lattice, rep, c, &tate)?);
        }
        // Rows of the joint restriction matrix for this factor.
        for row in 0..t_gens {
            map_rows.push(images.iter().map(|im| im[row].clone()).collect());
        }
        target_orders.extend(tate.group().generator_orders());
        audits.push(CyclicAudit {
            element_indices: c.element_indices().to_vec(),
            order: c.order(),
            target: tate.group().clone(),
            images,
        });
    }

    let f = IntMatrix::from_fn(map_rows.len(), n_gens, |i, j| map_rows[i][j].clone());
    let sha = map_kernel_into_orders(&h2.group.generator_orders(), &target_orders, &f)?;

    Ok(ShaResult {
        sha,
        ambient_h2: h2.group.clone(),
        per_cyclic_kernels: audits,
    })
}

/// Budget for [`sha_obstruction_search`].
#[derive(Debug, Clone)]
pub struct SearchBudget {
    /// Materialization cap for the ambient group.
    pub max_group_order: usize,
    /// Stop after this many subgroups.
    pub max_subgroups: usize,
    pub cohomology: CohomologyBudget,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_group_order: crate::groups::DEFAULT_ORDER_CAP,
            max_subgroups: 100_000,
            cohomology: CohomologyBudget::default(),
        }
    }
}

/// Outcome of an obstruction search.  `found` carries the first subgroup
/// (in deterministic enumeration order) with nonzero `Sh`; absence of a
/// witness is NOT a proof of quasi-invertibility.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub found: Option<(Subgroup, ShaResult)>,
    pub budget_exhausted: bool,
    pub subgroups_examined: usize,
}

/// Search the elementary-abelian rank-2 subgroups `(Z/p)²` of `W` for one
/// with `Sh²(Γ, L|Γ) ≠ 0`.
pub fn sha_obstruction_search(
    weyl: &MatGroup,
    lattice: &GLattice,
    primes: &[usize],
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    match weyl.materialize() {
        Ok(()) => {}
        Err(GroupError::CapExceeded { .. }) => {
            return Ok(SearchOutcome {
                found: None,
                budget_exhausted: true,
                subgroups_examined: 0,
            });
        }
        Err(e) => return Err(e.into()),
    }
    if weyl.order()? > budget.max_group_order {
        return Ok(SearchOutcome {
            found: None,
            budget_exhausted: true,
            subgroups_examined: 0,
        });
    }

    let mut examined = 0usize;
    for &p in primes {
        let subs = weyl.elementary_abelian_subgroups(p, 2)?;
        for sub in subs {
            if examined >= budget.max_subgroups {
                return Ok(SearchOutcome {
                    found: None,
                    budget_exhausted: true,
                    subgroups_examined: examined,
                });
            }
            examined += 1;
            let restricted = lattice.restrict(&sub)?;
            let result = sha2_with(
                restricted.group(),
                &restricted,
                H2Path::Auto,
                &budget.cohomology,
            )?;
            if !result.sha.is_trivial() {
                return Ok(SearchOutcome {
                    found: Some((sub, result)),
                    budget_exhausted: false,
                    subgroups_examined: examined,
                });
            }
        }
    }
    Ok(SearchOutcome {
        found: None,
        budget_exhausted: false,
        subgroups_examined: examined,
    })
}
