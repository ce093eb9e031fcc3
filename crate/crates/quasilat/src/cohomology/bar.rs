//! The normalized bar complex of inhomogeneous cochains.
//!
//! `C^k` is the free abelian group of maps `(G \ {e})^k -> L`; cochains
//! vanish whenever an argument is the identity.  Differentials are
//! assembled sparsely (each row has a bounded number of entries) and only
//! densified where a Smith reduction actually runs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{CohomologyError, Result};
use crate::glattice::GLattice;
use crate::groups::MatGroup;
use crate::intlinalg::IntMatrix;

/// Indexing data shared by the cohomology routines: element order, the
/// positions of non-identity elements, and the per-element action table.
pub(crate) struct GroupCtx {
    pub n: usize,
    pub identity: usize,
    /// Element index of each non-identity position.
    pub nonid: Vec<usize>,
    /// Position of each element among the non-identity ones.
    pub pos: Vec<Option<usize>>,
    pub rank: usize,
    pub actions: Vec<IntMatrix>,
    /// mul[i*n + j] = index of elements[i] * elements[j]
    pub mul: Vec<u32>,
}

impl GroupCtx {
    pub fn new(group: &MatGroup, lattice: &GLattice) -> Result<Self> {
        group.materialize()?;
        let n = group.order()?;
        let identity = group.identity_index()?;
        let mut nonid = Vec::with_capacity(n - 1);
        let mut pos = vec![None; n];
        for i in 0..n {
            if i != identity {
                pos[i] = Some(nonid.len());
                nonid.push(i);
            }
        }
        let actions = lattice.element_actions()?.to_vec();
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = group.mul_index(i, j)? as u32;
            }
        }
        Ok(GroupCtx {
            n,
            identity,
            nonid,
            pos,
            rank: lattice.rank(),
            actions,
            mul,
        })
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.n + j] as usize
    }

    /// Dimension of `C^k`, or an error when it overflows the budget bound.
    pub fn cochain_dim(&self, k: usize, cap: usize) -> Result<usize> {
        let mut dim: u128 = self.rank as u128;
        for _ in 0..k {
            dim = dim.saturating_mul((self.n - 1) as u128);
            if dim > cap as u128 {
                return Err(CohomologyError::BudgetExceeded {
                    what: format!("cochain dimension at degree {k}"),
                    rows: usize::MAX,
                    cols: usize::MAX,
                });
            }
        }
        Ok(dim as usize)
    }

    /// Flat index of a tuple of non-identity elements with a coordinate.
    pub fn tuple_index(&self, tuple: &[usize], coord: usize) -> usize {
        let mut idx = 0usize;
        for &g in tuple {
            idx = idx * (self.n - 1) + self.pos[g].expect("tuple entries are non-identity");
        }
        idx * self.rank + coord
    }

    /// Enumerate tuples in lexicographic position order.
    pub fn tuples(&self, k: usize) -> TupleIter<'_> {
        TupleIter {
            ctx: self,
            k,
            state: vec![0; k],
            done: false,
        }
    }
}

pub(crate) struct TupleIter<'a> {
    ctx: &'a GroupCtx,
    k: usize,
    state: Vec<usize>,
    done: bool,
}

impl Iterator for TupleIter<'_> {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current: Vec<usize> = self.state.iter().map(|&p| self.ctx.nonid[p]).collect();
        // advance
        let m = self.ctx.nonid.len();
        let mut i = self.k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.state[i] += 1;
            if self.state[i] < m {
                break;
            }
            self.state[i] = 0;
        }
        if self.k == 0 {
            self.done = true;
        }
        Some(current)
    }
}

/// A sparse integer matrix stored by rows.
pub(crate) struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<(u32, BigInt)>>,
}

impl SparseMat {
    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                m[(i, *j as usize)] = v.clone();
            }
        }
        m
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                let mut acc = BigInt::zero();
                for (j, c) in row {
                    if !v[*j as usize].is_zero() {
                        acc += c * &v[*j as usize];
                    }
                }
                acc
            })
            .collect()
    }
}

/// The differential `d: C^k -> C^{k+1}` of the normalized bar complex:
///
/// `(df)(g_1..g_{k+1}) = g_1 f(g_2..g_{k+1})
///     + Σ_i (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{k+1} f(g_1..g_k)`,
///
/// terms whose tuple contains the identity being dropped.
pub(crate) fn bar_differential(ctx: &GroupCtx, k: usize, cap: usize) -> Result<SparseMat> {
    let in_dim = ctx.cochain_dim(k, cap)?;
    let out_dim = ctx.cochain_dim(k + 1, cap)?;
    let r = ctx.rank;
    let mut data: Vec<Vec<(u32, BigInt)>> = Vec::with_capacity(out_dim);

    for tuple in ctx.tuples(k + 1) {
        // Rows for all coordinates of this output tuple.
        let mut rows: Vec<BTreeMap<u32, BigInt>> = vec![BTreeMap::new(); r];

        // Term 1: g_1 * f(g_2..g_{k+1}); the sub-tuple is automatically
        // identity-free.
        {
            let head = tuple[0];
            let rest = &tuple[1..];
            let act = &ctx.actions[head];
            let base = ctx.tuple_index(rest, 0);
            for c in 0..r {
                for cc in 0..r {
                    let a = &act[(c, cc)];
                    if !a.is_zero() {
                        add(&mut rows[c], (base + cc) as u32, a.clone());
                    }
                }
            }
        }

        // Middle terms: (-1)^i with g_i g_{i+1} merged, skipped when the
        // product is the identity.
        for i in 0..k {
            let merged = ctx.mul(tuple[i], tuple[i + 1]);
            if merged == ctx.identity {
                continue;
            }
            let mut sub = Vec::with_capacity(k);
            sub.extend_from_slice(&tuple[..i]);
            sub.push(merged);
            sub.extend_from_slice(&tuple[i + 2..]);
            let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
            let base = ctx.tuple_index(&sub, 0);
            for c in 0..r {
                add(&mut rows[c], (base + c) as u32, BigInt::from(sign));
            }
        }

        // Last term: (-1)^{k+1} f(g_1..g_k).
        {
            let sub = &tuple[..k];
            let sign = if (k + 1).is_multiple_of(2) { 1 } else { -1 };
            let base = ctx.tuple_index(sub, 0);
            for c in 0..r {
                add(&mut rows[c], (base + c) as u32, BigInt::from(sign));
            }
        }

        for row in rows {
            data.push(
                row.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .collect(),
            );
        }
    }

    debug_assert_eq!(data.len(), out_dim);
    Ok(SparseMat {
        rows: out_dim,
        cols: in_dim,
        data,
    })
}

fn add(row: &mut BTreeMap<u32, BigInt>, col: u32, val: BigInt) {
    use std::collections::btree_map::Entry;
    match row.entry(col) {
        Entry::Vacant(e) => {
            e.insert(val);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += val;
        }
    }
}

/// Rank of the sparse matrix over F_p, stopping early once `target` pivots
/// are found.  Returns the number of pivots found (== target on early stop).
pub(crate) fn p_rank_at_least(sp: &SparseMat, p: u64, target: usize) -> usize {
    if target == 0 {
        return 0;
    }
    // Echelon rows, dense mod p, keyed by pivot column.
    let cols = sp.cols;
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut echelon: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot col, row)
    let pb = BigInt::from(p);

    let mut scratch = vec![0u64; cols];
    for row in &sp.data {
        for x in scratch.iter_mut() {
            *x = 0;
        }
        let mut any = false;
        for (j, v) in row {
            let m = u64::try_from(&v.mod_floor(&pb)).expect("residue fits in u64");
            if m != 0 {
                scratch[*j as usize] = m;
                any = true;
            }
        }
        if !any {
            continue;
        }
        // Reduce against the echelon.
        let mut lead = None;
        let mut j = 0;
        while j < cols {
            if scratch[j] != 0 {
                match pivot_of_col[j] {
                    Some(e) => {
                        let (_, ref er) = echelon[e];
                        // scratch -= scratch[j] * er  (er has leading 1 at j)
                        let c = scratch[j];
                        for jj in j..cols {
                            if er[jj] != 0 {
                                let sub = (c as u128 * er[jj] as u128 % p as u128) as u64;
                                scratch[jj] = (scratch[jj] + p - sub) % p;
                            }
                        }
                    }
                    None => {
                        lead = Some(j);
                        break;
                    }
                }
            }
            j += 1;
        }
        if let Some(j) = lead {
            // Normalize leading entry to 1.
            let inv = mod_inverse(scratch[j], p);
            for x in scratch.iter_mut().skip(j) {
                if *x != 0 {
                    *x = (*x as u128 * inv as u128 % p as u128) as u64;
                }
            }
            pivot_of_col[j] = Some(echelon.len());
            echelon.push((j, scratch.clone()));
            if echelon.len() >= target {
                return echelon.len();
            }
        }
    }
    echelon.len()
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: p is prime.
    let mut result: u128 = 1;
    let mut base: u128 = a as u128 % p as u128;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u128;
        }
        base = base * base % p as u128;
        exp >>= 1;
    }
    result as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glattice::j_gamma;
    use crate::groups::MatGroup;

    fn klein() -> MatGroup {
        let a = IntMatrix::from_rows(&[vec![-1, 0], vec![0, 1]]);
        let b = IntMatrix::from_rows(&[vec![1, 0], vec![0, -1]]);
        MatGroup::close(vec![a, b], 10).unwrap()
    }

    #[test]
    fn d_compose_d_is_zero() {
        let g = klein();
        let j = j_gamma(&g).unwrap();
        let ctx = GroupCtx::new(&g, &j).unwrap();
        for k in 0..3 {
            let d1 = bar_differential(&ctx, k, 1 << 20).unwrap().to_dense();
            let d2 = bar_differential(&ctx, k + 1, 1 << 20).unwrap().to_dense();
            assert!(d2.mul(&d1).is_zero(), "d∘d != 0 at degree {k}");
        }
    }

    #[test]
    fn p_rank_early_stop() {
        let sp = SparseMat {
            rows: 3,
            cols: 3,
            data: vec![
                vec![(0, BigInt::from(1))],
                vec![(1, BigInt::from(2))],
                vec![(0, BigInt::from(3)), (1, BigInt::from(6))],
            ],
        };
        assert_eq!(p_rank_at_least(&sp, 1_000_003, 2), 2);
        assert_eq!(p_rank_at_least(&sp, 1_000_003, 3), 2);
    }
}
