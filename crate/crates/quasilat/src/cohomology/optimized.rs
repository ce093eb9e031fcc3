//! The `H²` path through `H¹(G, (1/N)L/L)`, `N = |G|`.
//!
//! From `0 → L → L⊗Q → (L⊗Q)/L → 0` and the vanishing of `H^i(G, L⊗Q)` for
//! `i ≥ 1`, the connecting map identifies `H²(G, L)` with `H¹(G, (L⊗Q)/L)`.
//! Every class there is killed by `N`, so 1-cocycles take values in the
//! finite module `(1/N)L / L ≅ (Z/N)^r` and all arithmetic happens over
//! `Z/N` after clearing denominators:
//!
//! * cocycles: `x_{gh} ≡ x_g + ρ(g)·x_h (mod N)`, imposed for `g` in a
//!   generating set and all `h` (which implies all pairs);
//! * coboundaries: `g ↦ ((ρ(g)-I)w)/N mod N` for `w` in the lattice
//!   `W = {w : (ρ(g)-I)w ≡ 0 mod N for all g}`, which covers both ordinary
//!   coboundaries and the connecting image of the fixed part.
//!
//! A generator class is converted back to an honest 2-cocycle with values
//! in `L` via `c(g,h) = (ρ(g)x_h - x_{gh} + x_g)/N`, which is verified
//! exactly before being returned.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{cochain_from_values, CohomologyBudget, CohomologyError, CohomologyResult, Result};
use crate::glattice::GLattice;
use crate::groups::MatGroup;
use crate::intlinalg::{solve_exact, FinAbGroup, IntMatrix, QuotientPresentation};

pub(crate) fn optimized_h2(
    group: &MatGroup,
    lattice: &GLattice,
    budget: &CohomologyBudget,
) -> Result<CohomologyResult> {
    group.materialize()?;
    let order = group.order()?;
    if order > budget.max_group_order {
        return Err(CohomologyError::BudgetExceeded {
            what: format!("group order {order}"),
            rows: order,
            cols: order,
        });
    }
    let (identity, nonid, pos) = super::identity_free_positions(group)?;
    let r = lattice.rank();
    let m_dim = (order - 1) * r;
    if order == 1 || r == 0 {
        return Ok(CohomologyResult {
            group: FinAbGroup::trivial(),
            degree: 2,
            cocycle_reps: vec![],
        });
    }
    if m_dim > budget.max_middle_dim {
        return Err(CohomologyError::BudgetExceeded {
            what: "optimized H² variable count".into(),
            rows: m_dim,
            cols: m_dim,
        });
    }

    let n_big = BigInt::from(order);
    let actions = lattice.element_actions()?;

    // A small generating set keeps the constraint matrix narrow.
    let gen_indices = greedy_generators(group)?;

    // Cocycle constraints x_{gh} - x_g - ρ(g) x_h ≡ 0 (mod N) for g in the
    // generating set, h over all non-identity elements (x_e = 0).
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for &g in &gen_indices {
        if g == identity {
            continue;
        }
        for &h in &nonid {
            let gh = group.mul_index(g, h)?;
            let mut row = vec![BigInt::zero(); m_dim];
            let act = &actions[g];
            let hbase = pos[h].unwrap() * r;
            let gbase = pos[g].unwrap() * r;
            // r equations for this pair.
            for c in 0..r {
                row.iter_mut().for_each(|x| x.set_zero());
                if gh != identity {
                    let ghbase = pos[gh].unwrap() * r;
                    row[ghbase + c] += BigInt::one();
                }
                row[gbase + c] -= BigInt::one();
                for cc in 0..r {
                    if !act[(c, cc)].is_zero() {
                        row[hbase + cc] -= &act[(c, cc)];
                    }
                }
                rows.push(row.clone());
            }
        }
    }
    let constraint = IntMatrix::from_fn(rows.len(), m_dim, |i, j| rows[i][j].clone());

    // Solutions of C x ≡ 0 (mod N): with U C V = S, the solution lattice is
    // V · diag(N / gcd(d_i, N)).
    let k_basis = crate::intlinalg::solutions_mod_n(&constraint, &n_big);

    // Coboundary parameters: W = {w : (ρ(g)-I)w ≡ 0 mod N for generators}.
    let mut stacked = IntMatrix::zeros(0, r);
    for &g in &gen_indices {
        if g == identity {
            continue;
        }
        stacked = stacked.vstack(&actions[g].sub(&IntMatrix::identity(r)));
    }
    let w_basis = crate::intlinalg::solutions_mod_n(&stacked, &n_big);

    // Coboundary vectors in (Z/N)^m_dim, one per W basis column, plus N·Z^M.
    let mut b_cols: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..w_basis.cols() {
        let w = w_basis.column(j);
        let mut col = vec![BigInt::zero(); m_dim];
        for &h in &nonid {
            let v = actions[h].apply(&w);
            let base = pos[h].unwrap() * r;
            for c in 0..r {
                let num = &v[c] - &w[c];
                let (q, rem) = num.div_rem(&n_big);
                if !rem.is_zero() {
                    return Err(CohomologyError::Internal(
                        "coboundary parameter not divisible by N".into(),
                    ));
                }
                col[base + c] = q;
            }
        }
        b_cols.push(col);
    }
    let mut b_mat = IntMatrix::from_columns(&b_cols);
    if b_mat.rows() == 0 {
        b_mat = IntMatrix::zeros(m_dim, 0);
    }
    let b_full = b_mat.hstack(&IntMatrix::identity(m_dim).scale(&n_big));

    // H² = K_Z / B_Z in K-basis coordinates.
    let y = solve_exact(&k_basis, &b_full).ok_or_else(|| {
        CohomologyError::Internal("coboundaries do not lie in the cocycle lattice".into())
    })?;
    let pres = QuotientPresentation::new(k_basis.cols(), &y);
    if !pres.group().is_finite() {
        return Err(CohomologyError::Internal(
            "optimized H² produced unexpected free rank".into(),
        ));
    }

    // Convert generators to honest 2-cocycles with values in L.
    let mut reps = Vec::new();
    let two_dim = (order - 1) * (order - 1) * r;
    for i in 0..pres.group().num_generators() {
        let x = k_basis.apply(&pres.generator_rep(i));
        let get = |g: usize| -> Vec<BigInt> {
            if g == identity {
                vec![BigInt::zero(); r]
            } else {
                let base = pos[g].unwrap() * r;
                x[base..base + r].to_vec()
            }
        };
        let mut values = vec![BigInt::zero(); two_dim];
        for &g in &nonid {
            for &h in &nonid {
                let gh = group.mul_index(g, h)?;
                let xh = get(h);
                let xgh = get(gh);
                let xg = get(g);
                let rot = actions[g].apply(&xh);
                let base = (pos[g].unwrap() * (order - 1) + pos[h].unwrap()) * r;
                for c in 0..r {
                    let num = &rot[c] - &xgh[c] + &xg[c];
                    let (q, rem) = num.div_rem(&n_big);
                    if !rem.is_zero() {
                        return Err(CohomologyError::Internal(
                            "connecting cocycle is not integral".into(),
                        ));
                    }
                    values[base + c] = q;
                }
            }
        }
        let rep = cochain_from_values(2, r, values, pos.clone(), order - 1);
        verify_two_cocycle(group, actions, &rep, r)?;
        reps.push(rep);
    }

    Ok(CohomologyResult {
        group: pres.group().clone(),
        degree: 2,
        cocycle_reps: reps,
    })
}

fn verify_two_cocycle(
    group: &MatGroup,
    actions: &[IntMatrix],
    rep: &super::Cochain,
    rank: usize,
) -> Result<()> {
    let n = group.order()?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let ab = group.mul_index(a, b)?;
                let bc = group.mul_index(b, c)?;
                let t1 = actions[a].apply(&rep.value(&[b, c]));
                let t2 = rep.value(&[ab, c]);
                let t3 = rep.value(&[a, bc]);
                let t4 = rep.value(&[a, b]);
                for i in 0..rank {
                    if !(&t1[i] - &t2[i] + &t3[i] - &t4[i]).is_zero() {
                        return Err(CohomologyError::NotACocycle);
                    }
                }
            }
        }
    }
    Ok(())
}

/// A small generating subset of a materialized group, grown greedily.
fn greedy_generators(group: &MatGroup) -> Result<Vec<usize>> {
    let n = group.order()?;
    let identity = group.identity_index()?;
    let mut chosen: Vec<usize> = Vec::new();
    let mut span = vec![false; n];
    span[identity] = true;
    let mut span_count = 1;
    // Prefer the declared generators, then fill with anything missing.
    let mut candidates: Vec<usize> = Vec::new();
    for g in group.generators() {
        candidates.push(group.index_of(g)?);
    }
    candidates.extend(0..n);
    for cand in candidates {
        if span_count == n {
            break;
        }
        if span[cand] {
            continue;
        }
        chosen.push(cand);
        // Re-close the span.
        let mut queue: Vec<usize> = (0..n).filter(|&i| span[i]).collect();
        span[cand] = true;
        queue.push(cand);
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &y in &chosen {
                let z = group.mul_index(x, y)?;
                if !span[z] {
                    span[z] = true;
                    queue.push(z);
                }
            }
        }
        span_count = span.iter().filter(|&&b| b).count();
    }
    Ok(chosen)
}
