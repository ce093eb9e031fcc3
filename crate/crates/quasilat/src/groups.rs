//! Finite groups realized as invertible integer matrices.
//!
//! Groups are stored by generators and materialized (fully enumerated) only
//! when an operation genuinely needs the element list.  Materialization is
//! breadth-first closure with a hard cap on the order, and the resulting
//! element list is sorted lexicographically on entries so that every
//! enumeration downstream is deterministic.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use thiserror::Error;

use crate::intlinalg::{abs_det, IntMatrix};

/// Default materialization cap.  The obstruction computations only ever
/// enumerate small subgroups, so large Weyl groups stay unmaterialized.
pub const DEFAULT_ORDER_CAP: usize = 20_000;

/// Full multiplication tables are only precomputed below this order;
/// larger groups fall back to matrix products with index lookup.
const MUL_TABLE_LIMIT: usize = 2048;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeded the order cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("generator {index} is not square of degree {degree}")]
    BadGenerator { index: usize, degree: usize },
    #[error("generator {index} is not unimodular")]
    NotUnimodular { index: usize },
    #[error("matrix is not an element of the group")]
    NotAnElement,
    #[error("the generator images do not define a homomorphism")]
    NonHomomorphism,
}

pub type Result<T> = std::result::Result<T, GroupError>;

/// How each element arises from the generators: `None` for the identity,
/// `Some((parent, gen))` meaning `element = elements[parent] * generators[gen]`.
type Word = Option<(usize, usize)>;

#[derive(Debug)]
struct Elements {
    /// All group elements, sorted lexicographically on entries.
    list: Vec<IntMatrix>,
    /// Index lookup by matrix.
    index: BTreeMap<IntMatrix, usize>,
    /// Derivation of each element, with indices into the sorted list.
    words: Vec<Word>,
    /// `gen_step[i * gens + k]` = index of `list[i] * generators[k]`.
    gen_step: Vec<u32>,
    /// Index of the identity.
    identity: usize,
    /// Full multiplication table when the order is small enough.
    mul: Option<Vec<u32>>,
    /// Inverse of each element when `mul` is present.
    inv: Option<Vec<u32>>,
}

#[derive(Debug)]
struct GroupInner {
    degree: usize,
    generators: Vec<IntMatrix>,
    order_cap: usize,
    elements: OnceLock<Result<Elements>>,
}

/// A finite group of unimodular integer matrices.
///
/// Cloning is cheap (shared inner state); materialization is idempotent and
/// safe under concurrent first use.
#[derive(Clone, Debug)]
pub struct MatGroup {
    inner: Arc<GroupInner>,
}

impl MatGroup {
    /// Group generated by the given matrices, materialized lazily.
    pub fn from_generators(generators: Vec<IntMatrix>, order_cap: usize) -> Result<Self> {
        let degree = match generators.first() {
            Some(g) => g.rows(),
            None => 0,
        };
        for (index, g) in generators.iter().enumerate() {
            if g.rows() != degree || g.cols() != degree {
                return Err(GroupError::BadGenerator { index, degree });
            }
            if abs_det(g) != BigInt::from(1) {
                return Err(GroupError::NotUnimodular { index });
            }
        }
        Ok(MatGroup {
            inner: Arc::new(GroupInner {
                degree,
                generators,
                order_cap,
                elements: OnceLock::new(),
            }),
        })
    }

    /// Complete element enumeration by breadth-first closure.
    ///
    /// Errors with `CapExceeded` if the closure passes `order_cap`.
    pub fn close(generators: Vec<IntMatrix>, order_cap: usize) -> Result<Self> {
        let g = Self::from_generators(generators, order_cap)?;
        g.materialize()?;
        Ok(g)
    }

    /// The trivial group of the given degree.
    pub fn trivial(degree: usize) -> Self {
        MatGroup::from_generators(vec![IntMatrix::identity(degree)], 2)
            .expect("identity generator is unimodular")
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.inner.generators
    }

    pub fn order_cap(&self) -> usize {
        self.inner.order_cap
    }

    pub fn identity_matrix(&self) -> IntMatrix {
        IntMatrix::identity(self.inner.degree)
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.inner.elements.get(), Some(Ok(_)))
    }

    fn elements_data(&self) -> Result<&Elements> {
        self.inner
            .elements
            .get_or_init(|| close_elements(&self.inner))
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Force enumeration of all elements.
    pub fn materialize(&self) -> Result<()> {
        self.elements_data().map(|_| ())
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements_data()?.list.len())
    }

    /// All elements, sorted lexicographically on entries.
    pub fn elements(&self) -> Result<&[IntMatrix]> {
        Ok(&self.elements_data()?.list)
    }

    pub fn element(&self, i: usize) -> Result<&IntMatrix> {
        Ok(&self.elements_data()?.list[i])
    }

    pub fn identity_index(&self) -> Result<usize> {
        Ok(self.elements_data()?.identity)
    }

    pub fn index_of(&self, m: &IntMatrix) -> Result<usize> {
        self.elements_data()?
            .index
            .get(m)
            .copied()
            .ok_or(GroupError::NotAnElement)
    }

    pub fn contains(&self, m: &IntMatrix) -> Result<bool> {
        Ok(self.elements_data()?.index.contains_key(m))
    }

    /// Index of `elements[i] * elements[j]`.
    pub fn mul_index(&self, i: usize, j: usize) -> Result<usize> {
        let e = self.elements_data()?;
        if let Some(mul) = &e.mul {
            return Ok(mul[i * e.list.len() + j] as usize);
        }
        let prod = e.list[i].mul(&e.list[j]);
        Ok(e.index[&prod])
    }

    pub fn inverse_index(&self, i: usize) -> Result<usize> {
        let e = self.elements_data()?;
        if let Some(inv) = &e.inv {
            return Ok(inv[i] as usize);
        }
        let m = e.list[i]
            .unimodular_inverse()
            .expect("group elements are unimodular");
        Ok(e.index[&m])
    }

    /// Multiplicative order of an element of the group.
    pub fn element_order(&self, m: &IntMatrix) -> Result<usize> {
        let i = self.index_of(m)?;
        self.element_order_by_index(i)
    }

    pub fn element_order_by_index(&self, i: usize) -> Result<usize> {
        let e = self.elements_data()?;
        let mut cur = i;
        let mut ord = 1;
        while cur != e.identity {
            cur = self.mul_index(cur, i)?;
            ord += 1;
        }
        Ok(ord)
    }

    /// Extend a map on generators to all elements along the closure words.
    ///
    /// `images[k]` is the image of `generators()[k]`; the identity maps to
    /// `identity_image`.  The extension is checked to be a homomorphism on
    /// every pair (element, generator); failure means the images do not
    /// satisfy the group's relations.
    pub fn extend_generator_map(
        &self,
        identity_image: IntMatrix,
        images: &[IntMatrix],
    ) -> Result<Vec<IntMatrix>> {
        assert_eq!(images.len(), self.inner.generators.len());
        let e = self.elements_data()?;
        let n = e.list.len();
        let mut out: Vec<Option<IntMatrix>> = vec![None; n];
        out[e.identity] = Some(identity_image);
        // The words form a tree rooted at the identity; resolve until stable.
        let mut remaining = n - 1;
        while remaining > 0 {
            let mut progressed = false;
            for i in 0..n {
                if out[i].is_some() {
                    continue;
                }
                if let Some((p, g)) = e.words[i] {
                    if out[p].is_some() {
                        let img = out[p].as_ref().unwrap().mul(&images[g]);
                        out[i] = Some(img);
                        remaining -= 1;
                        progressed = true;
                    }
                }
            }
            assert!(progressed, "closure words must form a spanning tree");
        }
        let out: Vec<IntMatrix> = out.into_iter().map(|m| m.unwrap()).collect();
        // Homomorphism check against every (element, generator) pair.
        let gens = self.inner.generators.len();
        for i in 0..n {
            for k in 0..gens {
                let prod = e.gen_step[i * gens + k] as usize;
                if out[i].mul(&images[k]) != out[prod] {
                    return Err(GroupError::NonHomomorphism);
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal direct product.
    pub fn direct_product(&self, other: &MatGroup) -> Result<MatGroup> {
        let d1 = self.degree();
        let d2 = other.degree();
        let mut gens = Vec::new();
        for g in self.generators() {
            gens.push(IntMatrix::block_diagonal(&[g.clone(), IntMatrix::identity(d2)]));
        }
        for h in other.generators() {
            gens.push(IntMatrix::block_diagonal(&[IntMatrix::identity(d1), h.clone()]));
        }
        MatGroup::from_generators(gens, self.order_cap().max(other.order_cap()))
    }

    /// All distinct cyclic subgroups, including the trivial one,
    /// deduplicated as element sets and returned in a deterministic order.
    pub fn cyclic_subgroups(&self) -> Result<Vec<Subgroup>> {
        let e = self.elements_data()?;
        let n = e.list.len();
        let mut seen = BTreeMap::new();
        for g in 0..n {
            let mut members = vec![e.identity];
            let mut cur = g;
            while cur != e.identity {
                members.push(cur);
                cur = self.mul_index(cur, g)?;
            }
            members.sort_unstable();
            seen.entry(members).or_insert(g);
        }
        let mut keys: Vec<Vec<usize>> = seen.into_keys().collect();
        keys.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        Ok(keys
            .into_iter()
            .map(|m| Subgroup {
                parent: self.clone(),
                element_indices: m,
            })
            .collect())
    }

    /// All subgroups isomorphic to `(Z/p)^rank`, deduplicated as element
    /// sets, deterministic order.
    pub fn elementary_abelian_subgroups(&self, p: usize, rank: usize) -> Result<Vec<Subgroup>> {
        let e = self.elements_data()?;
        let n = e.list.len();
        if rank == 0 {
            return Ok(vec![Subgroup {
                parent: self.clone(),
                element_indices: vec![e.identity],
            }]);
        }
        let mut order_p = Vec::new();
        for i in 0..n {
            if i != e.identity && self.element_order_by_index(i)? == p {
                order_p.push(i);
            }
        }
        // Grow subgroups rank by rank; a subgroup of order p^k extends by
        // any commuting order-p element outside it.
        let mut layer: Vec<Vec<usize>> = vec![vec![e.identity]];
        for _ in 0..rank {
            let mut next = BTreeMap::new();
            for sub in &layer {
                for &g in &order_p {
                    if sub.binary_search(&g).is_ok() {
                        continue;
                    }
                    let mut commutes = true;
                    for &h in sub.iter() {
                        if self.mul_index(h, g)? != self.mul_index(g, h)? {
                            commutes = false;
                            break;
                        }
                    }
                    if !commutes {
                        continue;
                    }
                    let mut members = Vec::with_capacity(sub.len() * p);
                    for &h in sub {
                        let mut cur = h;
                        for _ in 0..p {
                            members.push(cur);
                            cur = self.mul_index(cur, g)?;
                        }
                    }
                    members.sort_unstable();
                    members.dedup();
                    if members.len() == sub.len() * p {
                        next.entry(members).or_insert(());
                    }
                }
            }
            layer = next.into_keys().collect();
            if layer.is_empty() {
                return Ok(vec![]);
            }
        }
        layer.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        Ok(layer
            .into_iter()
            .map(|m| Subgroup {
                parent: self.clone(),
                element_indices: m,
            })
            .collect())
    }

    /// Every subgroup, by bottom-up closure of cyclic subgroups under
    /// one-element extensions.  Intended for small materialized groups.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>> {
        let n = self.order()?;
        let cyclics = self.cyclic_subgroups()?;
        let mut found: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
        let mut queue: Vec<Vec<usize>> = Vec::new();
        for c in &cyclics {
            if found.insert(c.element_indices.clone(), ()).is_none() {
                queue.push(c.element_indices.clone());
            }
        }
        while let Some(sub) = queue.pop() {
            if sub.len() == n {
                continue;
            }
            for g in 0..n {
                if sub.binary_search(&g).is_ok() {
                    continue;
                }
                let ext = self.close_indices(&sub, g)?;
                if found.insert(ext.clone(), ()).is_none() {
                    queue.push(ext);
                }
            }
        }
        let mut keys: Vec<Vec<usize>> = found.into_keys().collect();
        keys.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        Ok(keys
            .into_iter()
            .map(|m| Subgroup {
                parent: self.clone(),
                element_indices: m,
            })
            .collect())
    }

    /// Subgroup generated by the given elements of this group.
    pub fn subgroup_generated(&self, elems: &[IntMatrix]) -> Result<Subgroup> {
        let e = self.elements_data()?;
        let mut members = vec![e.identity];
        for m in elems {
            let g = self.index_of(m)?;
            members = self.close_indices(&members, g)?;
        }
        Ok(Subgroup {
            parent: self.clone(),
            element_indices: members,
        })
    }

    /// Closure of `sub ∪ {g}` as sorted element indices.
    fn close_indices(&self, sub: &[usize], g: usize) -> Result<Vec<usize>> {
        let n = self.order()?;
        let mut set = vec![false; n];
        for &s in sub {
            set[s] = true;
        }
        let mut queue: Vec<usize> = sub.to_vec();
        if !set[g] {
            set[g] = true;
            queue.push(g);
        }
        let mut gens: Vec<usize> = sub.to_vec();
        gens.push(g);
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &y in &gens {
                let z = self.mul_index(x, y)?;
                if !set[z] {
                    set[z] = true;
                    queue.push(z);
                }
            }
        }
        Ok((0..n).filter(|&i| set[i]).collect())
    }
}

/// A subgroup of a materialized `MatGroup`, stored as sorted element indices.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: MatGroup,
    element_indices: Vec<usize>,
}

impl Subgroup {
    /// Wrap explicitly given element indices as a subgroup.  The set is
    /// checked for closure.
    pub fn from_indices(parent: MatGroup, mut element_indices: Vec<usize>) -> Result<Self> {
        element_indices.sort_unstable();
        element_indices.dedup();
        let sub = Subgroup { parent, element_indices };
        if !sub.verify_closed()? {
            return Err(GroupError::NonHomomorphism);
        }
        Ok(sub)
    }

    pub fn trivial(parent: MatGroup) -> Result<Self> {
        let id = parent.identity_index()?;
        Ok(Subgroup {
            parent,
            element_indices: vec![id],
        })
    }

    pub fn full(parent: MatGroup) -> Result<Self> {
        let n = parent.order()?;
        Ok(Subgroup {
            parent,
            element_indices: (0..n).collect(),
        })
    }

    pub fn parent(&self) -> &MatGroup {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.element_indices.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.element_indices.len() == 1
    }

    pub fn element_indices(&self) -> &[usize] {
        &self.element_indices
    }

    pub fn element_matrices(&self) -> Result<Vec<IntMatrix>> {
        self.element_indices
            .iter()
            .map(|&i| self.parent.element(i).cloned())
            .collect()
    }

    pub fn is_cyclic(&self) -> Result<bool> {
        Ok(self.generator_of_cyclic()?.is_some())
    }

    /// For a cyclic subgroup: the first element (in sorted order) whose
    /// powers exhaust the subgroup.
    pub fn generator_of_cyclic(&self) -> Result<Option<usize>> {
        for &i in &self.element_indices {
            if self.parent.element_order_by_index(i)? == self.element_indices.len() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Check closure under products and inverses.
    pub fn verify_closed(&self) -> Result<bool> {
        for &i in &self.element_indices {
            if self
                .element_indices
                .binary_search(&self.parent.inverse_index(i)?)
                .is_err()
            {
                return Ok(false);
            }
            for &j in &self.element_indices {
                let k = self.parent.mul_index(i, j)?;
                if self.element_indices.binary_search(&k).is_err() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Realize the subgroup as a materialized group in its own right.
    pub fn as_group(&self) -> Result<MatGroup> {
        let mats = self.element_matrices()?;
        let g = MatGroup::from_generators(mats, self.order().max(2))?;
        g.materialize()?;
        Ok(g)
    }
}

fn close_elements(inner: &GroupInner) -> Result<Elements> {
    let degree = inner.degree;
    let gens = inner.generators.len();
    let identity = IntMatrix::identity(degree);

    // BFS closure, recording how each element is reached and the product
    // with each generator (computed anyway during the walk).
    let mut index: BTreeMap<IntMatrix, usize> = BTreeMap::new();
    let mut list: Vec<IntMatrix> = Vec::new();
    let mut words: Vec<Word> = Vec::new();
    let mut gen_step: Vec<u32> = Vec::new();
    index.insert(identity.clone(), 0);
    list.push(identity);
    words.push(None);
    let mut head = 0;
    while head < list.len() {
        let cur = list[head].clone();
        for gk in 0..gens {
            let next = cur.mul(&inner.generators[gk]);
            let next_idx = match index.get(&next) {
                Some(&i) => i,
                None => {
                    if list.len() >= inner.order_cap {
                        return Err(GroupError::CapExceeded { cap: inner.order_cap });
                    }
                    let i = list.len();
                    index.insert(next.clone(), i);
                    list.push(next);
                    words.push(Some((head, gk)));
                    i
                }
            };
            gen_step.push(next_idx as u32);
        }
        head += 1;
    }

    // Sort elements for a deterministic public order; remap words and steps.
    let n = list.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&a, &b| list[a].cmp(&list[b]));
    let mut new_pos = vec![0usize; n];
    for (new_i, &old_i) in perm.iter().enumerate() {
        new_pos[old_i] = new_i;
    }
    let sorted_list: Vec<IntMatrix> = perm.iter().map(|&i| list[i].clone()).collect();
    let sorted_words: Vec<Word> = perm
        .iter()
        .map(|&i| words[i].map(|(p, g)| (new_pos[p], g)))
        .collect();
    let mut sorted_steps = vec![0u32; n * gens];
    for old_i in 0..n {
        for gk in 0..gens {
            sorted_steps[new_pos[old_i] * gens + gk] =
                new_pos[gen_step[old_i * gens + gk] as usize] as u32;
        }
    }
    let mut sorted_index = BTreeMap::new();
    for (i, m) in sorted_list.iter().enumerate() {
        sorted_index.insert(m.clone(), i);
    }
    let identity_idx = sorted_index[&IntMatrix::identity(degree)];

    // Multiplication table by index composition along the word tree:
    // i * j = (i * parent(j)) * gen(j).
    let (mul, inv) = if n <= MUL_TABLE_LIMIT && gens > 0 {
        let mut mul = vec![0u32; n * n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| depth(&sorted_words, j));
        for &j in &order {
            match sorted_words[j] {
                None => {
                    for i in 0..n {
                        mul[i * n + j] = i as u32;
                    }
                }
                Some((p, gk)) => {
                    for i in 0..n {
                        let ip = mul[i * n + p] as usize;
                        mul[i * n + j] = sorted_steps[ip * gens + gk];
                    }
                }
            }
        }
        let mut inv = vec![0u32; n];
        for i in 0..n {
            let j = (0..n)
                .find(|&j| mul[i * n + j] as usize == identity_idx)
                .expect("every element has an inverse");
            inv[i] = j as u32;
        }
        (Some(mul), Some(inv))
    } else {
        (None, None)
    };

    Ok(Elements {
        list: sorted_list,
        index: sorted_index,
        words: sorted_words,
        gen_step: sorted_steps,
        identity: identity_idx,
        mul,
        inv,
    })
}

fn depth(words: &[Word], mut j: usize) -> usize {
    let mut d = 0;
    while let Some((p, _)) = words[j] {
        j = p;
        d += 1;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weyl_b2() -> MatGroup {
        // Signed permutations of Z^2: transposition and one sign flip.
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let flip = IntMatrix::from_rows(&[vec![1, 0], vec![0, -1]]);
        MatGroup::close(vec![swap, flip], DEFAULT_ORDER_CAP).unwrap()
    }

    fn sym3() -> MatGroup {
        let s1 = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        let s2 = IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
        MatGroup::close(vec![s1, s2], DEFAULT_ORDER_CAP).unwrap()
    }

    #[test]
    fn close_spec_examples() {
        let neg = IntMatrix::from_rows(&[vec![-1]]);
        let g = MatGroup::close(vec![neg], 10).unwrap();
        assert_eq!(g.order().unwrap(), 2);

        // |W(B_n)| = 2^n n! and |W(A_{n-1})| = n!, computed independently.
        assert_eq!(weyl_b2().order().unwrap(), (1 << 2) * 2);
        assert_eq!(sym3().order().unwrap(), 6);
    }

    #[test]
    fn closure_is_generator_order_independent() {
        let s1 = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        let s2 = IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
        let a = MatGroup::close(vec![s1.clone(), s2.clone()], 100).unwrap();
        let b = MatGroup::close(vec![s2, s1], 100).unwrap();
        assert_eq!(a.elements().unwrap(), b.elements().unwrap());
    }

    #[test]
    fn mul_table_matches_matrix_products() {
        let g = weyl_b2();
        let n = g.order().unwrap();
        for i in 0..n {
            for j in 0..n {
                let prod = g.element(i).unwrap().mul(g.element(j).unwrap());
                assert_eq!(g.mul_index(i, j).unwrap(), g.index_of(&prod).unwrap());
            }
        }
    }

    #[test]
    fn cap_exceeded() {
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let flip = IntMatrix::from_rows(&[vec![1, 0], vec![0, -1]]);
        assert_eq!(
            MatGroup::close(vec![swap, flip], 5).unwrap_err(),
            GroupError::CapExceeded { cap: 5 }
        );
    }

    #[test]
    fn cyclic_subgroups_spec_examples() {
        // Klein four group as diagonal sign matrices.
        let a = IntMatrix::from_rows(&[vec![-1, 0], vec![0, 1]]);
        let b = IntMatrix::from_rows(&[vec![1, 0], vec![0, -1]]);
        let klein = MatGroup::close(vec![a, b], 10).unwrap();
        assert_eq!(klein.cyclic_subgroups().unwrap().len(), 4);

        // Z/4 as a 4-cycle permutation matrix: orders 1, 2, 4.
        let c4 = IntMatrix::from_rows(&[
            vec![0, 0, 0, 1],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
        ]);
        let z4 = MatGroup::close(vec![c4], 10).unwrap();
        assert_eq!(z4.cyclic_subgroups().unwrap().len(), 3);

        let t = MatGroup::trivial(1);
        assert_eq!(t.cyclic_subgroups().unwrap().len(), 1);
    }

    #[test]
    fn cyclic_subgroup_count_matches_brute_force() {
        for g in [weyl_b2(), sym3()] {
            let subs = g.cyclic_subgroups().unwrap();
            let n = g.order().unwrap();
            let id = g.identity_index().unwrap();
            let mut sets = std::collections::BTreeSet::new();
            for i in 0..n {
                let mut members = vec![id];
                let mut cur = i;
                while cur != id {
                    members.push(cur);
                    cur = g.mul_index(cur, i).unwrap();
                }
                members.sort_unstable();
                sets.insert(members);
            }
            assert_eq!(subs.len(), sets.len());
            for s in &subs {
                assert!(s.verify_closed().unwrap());
                assert!(s.is_cyclic().unwrap());
            }
        }
    }

    #[test]
    fn elementary_abelian_spec_examples() {
        // (Z/2)^3 has 7 Klein subgroups (2-dimensional subspaces of F_2^3).
        let mut gens = Vec::new();
        for i in 0..3 {
            let mut m = IntMatrix::identity(3);
            m[(i, i)] = BigInt::from(-1);
            gens.push(m);
        }
        let g = MatGroup::close(gens, 10).unwrap();
        assert_eq!(g.elementary_abelian_subgroups(2, 2).unwrap().len(), 7);

        // Cyclic Z/4 has no Klein subgroup.
        let c4 = IntMatrix::from_rows(&[
            vec![0, 0, 0, 1],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
        ]);
        let z4 = MatGroup::close(vec![c4], 10).unwrap();
        assert!(z4.elementary_abelian_subgroups(2, 2).unwrap().is_empty());

        // Sym3 x Sym3 has a unique Sylow-3, which is Z/3 x Z/3.
        let prod = sym3().direct_product(&sym3()).unwrap();
        prod.materialize().unwrap();
        assert_eq!(prod.order().unwrap(), 36);
        assert_eq!(prod.elementary_abelian_subgroups(3, 2).unwrap().len(), 1);
    }

    #[test]
    fn product_and_orders() {
        let neg = IntMatrix::from_rows(&[vec![-1]]);
        let z2 = MatGroup::close(vec![neg], 10).unwrap();
        let v4 = z2.direct_product(&z2).unwrap();
        assert_eq!(v4.order().unwrap(), 4);
        assert_eq!(v4.element_order(&IntMatrix::identity(2)).unwrap(), 1);

        // A reflection in Sym3 is an involution.
        let g = sym3();
        let refl = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        let sub = g.subgroup_generated(&[refl]).unwrap();
        assert_eq!(sub.order(), 2);
        assert!(sub.verify_closed().unwrap());
    }

    #[test]
    fn all_subgroups_of_sym3() {
        // Sym3: trivial, three <transposition>, <3-cycle>, Sym3 itself.
        let subs = sym3().all_subgroups().unwrap();
        assert_eq!(subs.len(), 6);
        let mut orders: Vec<usize> = subs.iter().map(|s| s.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn extend_generator_map_detects_non_homomorphism() {
        // Sending the Z/2 generator to an order-4 rotation violates g^2 = e.
        let neg = IntMatrix::from_rows(&[vec![-1]]);
        let z2 = MatGroup::close(vec![neg], 10).unwrap();
        let rot4 = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(
            z2.extend_generator_map(IntMatrix::identity(2), &[rot4])
                .unwrap_err(),
            GroupError::NonHomomorphism
        );
    }
}
