//! Root and weight lattices of types A, B, C, D and G₂ in the standard
//! (Bourbaki) coordinates, with Weyl-group generator actions, the quotient
//! `P/Q`, intermediate lattices, and the character lattices `P^m_S` of
//! quotients `H^m/C`.
//!
//! Conventions fixed here and relied on everywhere downstream:
//!
//! * ambient coordinates: `A_{n-1}` lives in `Z^n` (root lattice = zero-sum
//!   vectors), `B_n`/`C_n`/`D_n` in `Z^n`, `G₂` directly in the root basis;
//! * the designated generator of `P/Q` is `ω̄₁` for types A and C, `ω̄_n`
//!   for types B and D with n odd; for D with n even the designated basis
//!   of `P/Q ≅ (Z/2)²` is `(ω̄_{n-1}, ω̄_n)`, and an element `a·ω̄_{n-1} +
//!   b·ω̄_n` is encoded as the integer `a + 2b`;
//! * the pairing `P/Q × Z(H) → Q/Z` is normalized to `⟨ḡ, z⟩ = 1/e` on the
//!   designated generators (diagonally for D even), `e` the encoding
//!   modulus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::glattice::{Ambient, GLattice, LatticeError};
use crate::groups::{GroupError, MatGroup, DEFAULT_ORDER_CAP};
use crate::intlinalg::{
    abs_det, column_hnf, solutions_mod_n, solve_exact, FinAbGroup, IntMatrix, LinAlgError,
    QuotientPresentation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("invalid rank {rank} for family {family:?}")]
    InvalidRank { family: Family, rank: usize },
    #[error("operation requires family B or D, got {0:?}")]
    WrongFamily(Family),
    #[error("invalid subgroup generators: {0}")]
    InvalidGenerators(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, RootDataError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    G2,
}

/// An irreducible root system.  For family A the `rank` field carries `n`
/// (the system is `A_{n-1}`, the Weyl group `Sym_n`); for B, C, D it is the
/// actual rank; G₂ is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootSystemSpec {
    pub family: Family,
    pub rank: usize,
}

impl RootSystemSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 2,
            Family::B | Family::C => rank >= 1,
            Family::D => rank >= 3,
            Family::G2 => true,
        };
        if !ok {
            return Err(RootDataError::InvalidRank { family, rank });
        }
        let rank = if family == Family::G2 { 2 } else { rank };
        Ok(RootSystemSpec { family, rank })
    }

    /// Dimension of the ambient coordinate space.
    pub fn ambient_degree(&self) -> usize {
        self.rank
    }

    /// Rank of the root/weight lattices.
    pub fn lattice_rank(&self) -> usize {
        match self.family {
            Family::A => self.rank - 1,
            _ => self.rank,
        }
    }

    /// Modulus of the designated encoding of `P/Q` elements: `n` for A,
    /// 2 for B and C, 4 for D odd, 2 for D even (two components), 1 for G₂.
    pub fn quotient_exponent(&self) -> usize {
        match self.family {
            Family::A => self.rank,
            Family::B | Family::C => 2,
            Family::D => {
                if self.rank % 2 == 1 {
                    4
                } else {
                    2
                }
            }
            Family::G2 => 1,
        }
    }

    /// Number of designated generators of `P/Q` (2 only for D even).
    pub fn quotient_generators(&self) -> usize {
        match self.family {
            Family::G2 => 0,
            Family::D if self.rank.is_multiple_of(2) => 2,
            _ => 1,
        }
    }

    /// Order of `P/Q`.
    pub fn quotient_order(&self) -> usize {
        match self.family {
            Family::A => self.rank,
            Family::B | Family::C => 2,
            Family::D => 4,
            Family::G2 => 1,
        }
    }
}

/// Simple-reflection generator matrices in the ambient coordinates.
pub fn weyl_generators(spec: &RootSystemSpec) -> Vec<IntMatrix> {
    let n = spec.rank;
    match spec.family {
        Family::A => (0..n - 1).map(|i| transposition(n, i, i + 1)).collect(),
        Family::B | Family::C => {
            let mut gens: Vec<IntMatrix> = (0..n.saturating_sub(1))
                .map(|i| transposition(n, i, i + 1))
                .collect();
            gens.push(sign_flip(n, n - 1));
            gens
        }
        Family::D => {
            let mut gens: Vec<IntMatrix> =
                (0..n - 1).map(|i| transposition(n, i, i + 1)).collect();
            // Reflection in e_{n-1} + e_n.
            let mut m = IntMatrix::identity(n);
            m[(n - 2, n - 2)] = BigInt::zero();
            m[(n - 1, n - 1)] = BigInt::zero();
            m[(n - 2, n - 1)] = BigInt::from(-1);
            m[(n - 1, n - 2)] = BigInt::from(-1);
            gens.push(m);
            gens
        }
        Family::G2 => {
            // Reflections in the simple-root basis, from the Cartan matrix.
            vec![
                IntMatrix::from_rows(&[vec![-1, 3], vec![0, 1]]),
                IntMatrix::from_rows(&[vec![1, 0], vec![1, -1]]),
            ]
        }
    }
}

pub fn transposition(n: usize, i: usize, j: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    m[(i, i)] = BigInt::zero();
    m[(j, j)] = BigInt::zero();
    m[(i, j)] = BigInt::from(1);
    m[(j, i)] = BigInt::from(1);
    m
}

pub fn sign_flip(n: usize, i: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    m[(i, i)] = BigInt::from(-1);
    m
}

/// Ambient columns of the root-lattice basis (integral).
fn root_basis(spec: &RootSystemSpec) -> IntMatrix {
    let n = spec.rank;
    let d = spec.ambient_degree();
    match spec.family {
        Family::A => {
            let cols: Vec<Vec<BigInt>> = (0..n - 1)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); d];
                    v[i] = BigInt::from(1);
                    v[i + 1] = BigInt::from(-1);
                    v
                })
                .collect();
            IntMatrix::from_columns(&cols)
        }
        Family::B => IntMatrix::identity(n),
        Family::C | Family::D => {
            let mut cols: Vec<Vec<BigInt>> = (0..n - 1)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); d];
                    v[i] = BigInt::from(1);
                    v[i + 1] = BigInt::from(-1);
                    v
                })
                .collect();
            let mut last = vec![BigInt::zero(); d];
            if spec.family == Family::C {
                last[n - 1] = BigInt::from(2);
            } else {
                last[n - 2] = BigInt::from(1);
                last[n - 1] = BigInt::from(1);
            }
            cols.push(last);
            IntMatrix::from_columns(&cols)
        }
        Family::G2 => IntMatrix::identity(2),
    }
}

/// Weight-lattice basis columns over a denominator, plus the fundamental
/// weights (times the same denominator) in ambient coordinates.
fn weight_basis(spec: &RootSystemSpec) -> (IntMatrix, BigInt, Vec<Vec<BigInt>>) {
    let n = spec.rank;
    let d = spec.ambient_degree();
    let e_block = |i: usize, scale: i64| {
        let mut v = vec![BigInt::zero(); d];
        for item in v.iter_mut().take(i) {
            *item = BigInt::from(scale);
        }
        v
    };
    match spec.family {
        Family::A => {
            // ω_i = e_1+..+e_i - (i/n) Σ e_j; columns are n·ω_i, den n.
            let den = BigInt::from(n as u64);
            let mut weights = Vec::new();
            for i in 1..n {
                let mut v = vec![BigInt::from(-(i as i64)); d];
                for item in v.iter_mut().take(i) {
                    *item = BigInt::from((n - i) as i64);
                }
                weights.push(v);
            }
            (IntMatrix::from_columns(&weights), den, weights)
        }
        Family::B => {
            // P = Z^n + Z·(1/2)Σe.
            let den = BigInt::from(2);
            let mut weights: Vec<Vec<BigInt>> =
                (1..n).map(|i| e_block(i, 2)).collect();
            weights.push(vec![BigInt::from(1); d]);
            let mut cols: Vec<Vec<BigInt>> = (0..n - 1)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); d];
                    v[i] = BigInt::from(2);
                    v
                })
                .collect();
            cols.push(vec![BigInt::from(1); d]);
            (IntMatrix::from_columns(&cols), den, weights)
        }
        Family::C => {
            let den = BigInt::from(1);
            let weights: Vec<Vec<BigInt>> = (1..=n).map(|i| e_block(i, 1)).collect();
            (IntMatrix::identity(n), den, weights)
        }
        Family::D => {
            let den = BigInt::from(2);
            let mut weights: Vec<Vec<BigInt>> =
                (1..=n - 2).map(|i| e_block(i, 2)).collect();
            let mut spin_minus = vec![BigInt::from(1); d];
            spin_minus[n - 1] = BigInt::from(-1);
            weights.push(spin_minus);
            weights.push(vec![BigInt::from(1); d]);
            let mut cols: Vec<Vec<BigInt>> = (0..n - 1)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); d];
                    v[i] = BigInt::from(2);
                    v
                })
                .collect();
            cols.push(vec![BigInt::from(1); d]);
            (IntMatrix::from_columns(&cols), den, weights)
        }
        Family::G2 => {
            // In the root basis: ω₁ = 2α₁ + α₂... both weights lie in Q.
            let w = vec![
                vec![BigInt::from(2), BigInt::from(1)],
                vec![BigInt::from(3), BigInt::from(2)],
            ];
            (IntMatrix::identity(2), BigInt::from(1), w)
        }
    }
}

/// The weight-modulo-root quotient with its designated generators.
#[derive(Debug, Clone)]
pub struct WeightQuotient {
    group: FinAbGroup,
    pres: QuotientPresentation,
    /// Canonical class coordinates of the designated generators.
    designated: Vec<Vec<BigInt>>,
    exponent: usize,
}

impl WeightQuotient {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// Class of a vector in weight-basis coordinates, expressed in the
    /// designated generators (coefficients modulo the exponent), found by
    /// brute force over the small coefficient space.
    pub fn designated_coords(&self, p_coords: &[BigInt]) -> Result<Vec<usize>> {
        let target = self.pres.reduce(p_coords);
        let k = self.designated.len();
        if k == 0 {
            return if target.iter().all(|c| c.is_zero()) {
                Ok(vec![])
            } else {
                Err(RootDataError::Internal(
                    "nonzero class in trivial quotient".into(),
                ))
            };
        }
        let e = self.exponent;
        let orders = self.group.generator_orders();
        let mut combo = vec![0usize; k];
        loop {
            let mut acc = vec![BigInt::zero(); target.len()];
            for (i, c) in combo.iter().enumerate() {
                for (a, dgen) in acc.iter_mut().zip(self.designated[i].iter()) {
                    *a += dgen * BigInt::from(*c as u64);
                }
            }
            let matches = acc
                .iter()
                .zip(target.iter())
                .zip(orders.iter())
                .all(|((a, t), o)| {
                    if o.is_zero() {
                        a == t
                    } else {
                        (a - t).mod_floor(o).is_zero()
                    }
                });
            if matches {
                return Ok(combo);
            }
            let mut i = 0;
            loop {
                if i == k {
                    return Err(RootDataError::Internal(
                        "class not generated by the designated generators".into(),
                    ));
                }
                combo[i] += 1;
                if combo[i] < e {
                    break;
                }
                combo[i] = 0;
                i += 1;
            }
        }
    }
}

/// An intermediate lattice `Q ⊆ L ⊆ P`, keyed by the subgroup `L/Q` of
/// `P/Q` in designated encoding.
#[derive(Debug, Clone)]
pub struct Intermediate {
    pub subgroup: Vec<usize>,
    pub index_in_p: BigInt,
    pub lattice: GLattice,
}

/// Root datum: `Q`, `P`, the quotient, and all proper intermediates.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub spec: RootSystemSpec,
    pub weyl: MatGroup,
    pub q: GLattice,
    pub p: GLattice,
    pub quotient: WeightQuotient,
    pub intermediates: Vec<Intermediate>,
    den: BigInt,
    q_basis: IntMatrix,
    p_basis: IntMatrix,
    /// Designated generator vectors (times den) in ambient coordinates.
    designated_ambient: Vec<Vec<BigInt>>,
}

impl RootDatum {
    /// Ambient lift (times den) of a `P/Q` element in designated encoding.
    pub fn lift_class(&self, value: usize) -> Vec<BigInt> {
        let dim = self.p_basis.rows();
        let mut v = vec![BigInt::zero(); dim];
        match self.designated_ambient.len() {
            0 => v,
            1 => {
                for (x, dgen) in v.iter_mut().zip(self.designated_ambient[0].iter()) {
                    *x = dgen * BigInt::from(value as u64);
                }
                v
            }
            _ => {
                let a = value % 2;
                let b = (value / 2) % 2;
                for (i, x) in v.iter_mut().enumerate() {
                    *x = &self.designated_ambient[0][i] * BigInt::from(a as u64)
                        + &self.designated_ambient[1][i] * BigInt::from(b as u64);
                }
                v
            }
        }
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn q_basis(&self) -> &IntMatrix {
        &self.q_basis
    }

    pub fn p_basis(&self) -> &IntMatrix {
        &self.p_basis
    }
}

/// Build the root datum in the standard coordinates.
pub fn root_datum(spec: &RootSystemSpec) -> Result<RootDatum> {
    let gens = weyl_generators(spec);
    let weyl = MatGroup::from_generators(gens, DEFAULT_ORDER_CAP)?;

    let q_basis_raw = root_basis(spec);
    let (p_basis, den, weights) = weight_basis(spec);
    // Scale the integral root basis to the weight denominator.
    let q_basis = q_basis_raw.scale(&den);
    let q = GLattice::from_ambient(
        weyl.clone(),
        Ambient {
            basis: q_basis.clone(),
            den: den.clone(),
        },
    )?;
    let p = GLattice::from_ambient(
        weyl.clone(),
        Ambient {
            basis: p_basis.clone(),
            den: den.clone(),
        },
    )?;

    // P/Q in weight coordinates.
    let y = solve_exact(&p_basis, &q_basis)
        .ok_or_else(|| RootDataError::Internal("Q does not lie in P".into()))?;
    let pres = QuotientPresentation::new(p.rank(), &y);
    let group = pres.group().clone();
    let expected = expected_quotient(spec);
    if group != expected {
        return Err(RootDataError::Internal(format!(
            "P/Q = {group}, expected {expected}"
        )));
    }

    // Designated generators of P/Q.
    let designated_ambient: Vec<Vec<BigInt>> = match (spec.family, spec.rank % 2) {
        (Family::G2, _) => vec![],
        (Family::A, _) | (Family::C, _) => vec![weights[0].clone()],
        (Family::B, _) => vec![weights[spec.rank - 1].clone()],
        (Family::D, 1) => vec![weights[spec.rank - 1].clone()],
        (Family::D, _) => vec![
            weights[spec.rank - 2].clone(),
            weights[spec.rank - 1].clone(),
        ],
    };
    let designated: Vec<Vec<BigInt>> = designated_ambient
        .iter()
        .map(|w| {
            let col = IntMatrix::from_columns(std::slice::from_ref(w));
            let coords = solve_exact(&p_basis, &col)
                .ok_or_else(|| RootDataError::Internal("weight not in P".into()))?;
            Ok(pres.reduce(&coords.column(0)))
        })
        .collect::<Result<_>>()?;
    let quotient = WeightQuotient {
        group,
        pres,
        designated,
        exponent: spec.quotient_exponent().max(1),
    };

    let mut datum = RootDatum {
        spec: *spec,
        weyl: weyl.clone(),
        q,
        p,
        quotient,
        intermediates: vec![],
        den: den.clone(),
        q_basis,
        p_basis,
        designated_ambient,
    };

    // Intermediate lattices from the proper nontrivial subgroups of P/Q.
    let mut intermediates = Vec::new();
    for sub in proper_subgroups(spec) {
        let mut cols: Vec<Vec<BigInt>> = (0..datum.q_basis.cols())
            .map(|j| datum.q_basis.column(j))
            .collect();
        for &g in &sub {
            cols.push(datum.lift_class(g));
        }
        let basis = column_hnf(&IntMatrix::from_columns(&cols));
        let lattice = GLattice::from_ambient(
            weyl.clone(),
            Ambient {
                basis: basis.clone(),
                den: den.clone(),
            },
        )?;
        let index_in_p = index_of_sublattice(&datum.p_basis, &basis)?;
        intermediates.push(Intermediate {
            subgroup: sub,
            index_in_p,
            lattice,
        });
    }
    datum.intermediates = intermediates;
    Ok(datum)
}

fn expected_quotient(spec: &RootSystemSpec) -> FinAbGroup {
    match spec.family {
        Family::A => FinAbGroup::cyclic(spec.rank as u64),
        Family::B | Family::C => FinAbGroup::cyclic(2),
        Family::D => {
            if spec.rank % 2 == 1 {
                FinAbGroup::cyclic(4)
            } else {
                FinAbGroup::new(0, vec![BigInt::from(2), BigInt::from(2)])
            }
        }
        Family::G2 => FinAbGroup::trivial(),
    }
}

/// Proper nontrivial subgroups of `P/Q`, each as a one-generator set in
/// designated encoding (P/Q is cyclic or (Z/2)², so one generator
/// suffices for every proper subgroup).
fn proper_subgroups(spec: &RootSystemSpec) -> Vec<Vec<usize>> {
    match spec.family {
        Family::A => {
            let n = spec.rank;
            let mut subs = Vec::new();
            for d in 2..n {
                if n.is_multiple_of(d) {
                    subs.push(vec![n / d]);
                }
            }
            subs
        }
        Family::B | Family::C | Family::G2 => vec![],
        Family::D => {
            if spec.rank % 2 == 1 {
                vec![vec![2]]
            } else {
                vec![vec![1], vec![2], vec![3]]
            }
        }
    }
}

fn index_of_sublattice(outer: &IntMatrix, inner: &IntMatrix) -> Result<BigInt> {
    let y = solve_exact(outer, inner)
        .ok_or_else(|| RootDataError::Internal("not a sublattice".into()))?;
    Ok(abs_det(&y))
}

/// The character lattice of `SO_n`: `Q` for type B, the vector-weight
/// intermediate for type D (flagged for D₄ where triality makes the three
/// intermediates symmetric).
#[derive(Debug, Clone)]
pub struct SoCharacterLattice {
    pub lattice: GLattice,
    /// Generator of `M/Q` in designated encoding (empty for type B).
    pub subgroup: Vec<usize>,
    pub triality_ambiguous: bool,
}

pub fn so_character_lattice(spec: &RootSystemSpec) -> Result<SoCharacterLattice> {
    match spec.family {
        Family::B => {
            let datum = root_datum(spec)?;
            Ok(SoCharacterLattice {
                lattice: datum.q,
                subgroup: vec![],
                triality_ambiguous: false,
            })
        }
        Family::D => {
            let datum = root_datum(spec)?;
            let vector_class = vector_class(spec);
            let inter = datum
                .intermediates
                .iter()
                .find(|i| i.subgroup == vec![vector_class])
                .ok_or_else(|| {
                    RootDataError::Internal("missing vector intermediate".into())
                })?;
            Ok(SoCharacterLattice {
                lattice: inter.lattice.clone(),
                subgroup: vec![vector_class],
                triality_ambiguous: spec.rank == 4,
            })
        }
        other => Err(RootDataError::WrongFamily(other)),
    }
}

/// Designated encoding of the vector weight class `ω̄₁` for type D:
/// `2·ω̄_n` when n is odd, `ω̄_{n-1} + ω̄_n` when n is even.
pub fn vector_class(spec: &RootSystemSpec) -> usize {
    if spec.rank % 2 == 1 {
        2
    } else {
        3
    }
}

/// The character lattice `P^m_S` of `S ⊆ (P/Q)^m` (generators in
/// designated encoding), over `W^m` acting blockwise, with its ambient
/// embedding.
#[derive(Debug, Clone)]
pub struct CharacterLattice {
    pub lattice: GLattice,
    pub weyl_m: MatGroup,
    /// `[P^m : P^m_S] = [(P/Q)^m : S]`.
    pub index_in_p: BigInt,
    pub s_order: BigInt,
}

pub fn character_lattice_pms(
    spec: &RootSystemSpec,
    m: usize,
    s_generators: &[Vec<usize>],
) -> Result<CharacterLattice> {
    validate_generators(spec, m, s_generators)?;
    let datum = root_datum(spec)?;
    let d = spec.ambient_degree();
    let big_d = d * m;

    // W^m by block generators.
    let mut gens = Vec::new();
    for slot in 0..m {
        for g in weyl_generators(spec) {
            let mut blocks = vec![IntMatrix::identity(d); m];
            blocks[slot] = g;
            gens.push(IntMatrix::block_diagonal(&blocks));
        }
    }
    let weyl_m = MatGroup::from_generators(gens, DEFAULT_ORDER_CAP)?;

    // Columns: Q^m basis plus lifts of the S generators.
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for slot in 0..m {
        for j in 0..datum.q_basis().cols() {
            cols.push(embed_block(&datum.q_basis().column(j), slot, big_d, d));
        }
    }
    for g in s_generators {
        let mut v = vec![BigInt::zero(); big_d];
        for (slot, &val) in g.iter().enumerate() {
            let lift = datum.lift_class(val);
            for (i, x) in lift.iter().enumerate() {
                v[slot * d + i] = x.clone();
            }
        }
        cols.push(v);
    }
    let basis = column_hnf(&IntMatrix::from_columns(&cols));
    let lattice = GLattice::from_ambient(
        weyl_m.clone(),
        Ambient {
            basis: basis.clone(),
            den: datum.den().clone(),
        },
    )?;

    let s_order = subgroup_order(spec, m, s_generators);

    // [P^m : P^m_S] by determinants against the P^m basis.
    let mut p_cols: Vec<Vec<BigInt>> = Vec::new();
    for slot in 0..m {
        for j in 0..datum.p_basis().cols() {
            p_cols.push(embed_block(&datum.p_basis().column(j), slot, big_d, d));
        }
    }
    let p_m_basis = column_hnf(&IntMatrix::from_columns(&p_cols));
    let index_in_p = index_of_sublattice(&p_m_basis, &basis)?;

    Ok(CharacterLattice {
        lattice,
        weyl_m,
        index_in_p,
        s_order,
    })
}

/// Order of the subgroup of `(P/Q)^m` spanned by generators in designated
/// encoding.
pub fn subgroup_order(spec: &RootSystemSpec, m: usize, gens: &[Vec<usize>]) -> BigInt {
    let e = spec.quotient_exponent().max(1);
    let width = flat_width(spec, m);
    if width == 0 {
        return BigInt::from(1);
    }
    let mut cols: Vec<Vec<BigInt>> = gens.iter().map(|g| flatten_entries(spec, g)).collect();
    for i in 0..width {
        let mut v = vec![BigInt::zero(); width];
        v[i] = BigInt::from(e as u64);
        cols.push(v);
    }
    let h = column_hnf(&IntMatrix::from_columns(&cols));
    let total: BigInt = (0..width).map(|_| BigInt::from(e as u64)).product();
    &total / abs_det(&h)
}

pub(crate) fn validate_generators(
    spec: &RootSystemSpec,
    m: usize,
    gens: &[Vec<usize>],
) -> Result<()> {
    if m == 0 {
        return Err(RootDataError::InvalidGenerators("m must be >= 1".into()));
    }
    let per_entry = entry_range(spec);
    for g in gens {
        if g.len() != m {
            return Err(RootDataError::InvalidGenerators(format!(
                "generator {g:?} has length {}, expected {m}",
                g.len()
            )));
        }
        if g.iter().any(|&x| x >= per_entry) {
            return Err(RootDataError::InvalidGenerators(format!(
                "entries of {g:?} must lie in 0..{per_entry}"
            )));
        }
    }
    Ok(())
}

/// Number of valid values per generator entry in designated encoding.
pub fn entry_range(spec: &RootSystemSpec) -> usize {
    match spec.family {
        Family::G2 => 1,
        Family::D => 4,
        Family::A => spec.rank,
        Family::B | Family::C => 2,
    }
}

/// Width of the flattened `Z/e` presentation of `(P/Q)^m`.
pub(crate) fn flat_width(spec: &RootSystemSpec, m: usize) -> usize {
    match spec.family {
        Family::G2 => 0,
        Family::D if spec.rank.is_multiple_of(2) => 2 * m,
        _ => m,
    }
}

/// Flatten designated entries to vectors over `Z/e` (splitting D-even
/// entries into their two bits).
pub(crate) fn flatten_entries(spec: &RootSystemSpec, g: &[usize]) -> Vec<BigInt> {
    if spec.quotient_generators() == 2 {
        let mut v = Vec::with_capacity(2 * g.len());
        for &x in g {
            v.push(BigInt::from((x % 2) as u64));
            v.push(BigInt::from(((x / 2) % 2) as u64));
        }
        v
    } else {
        g.iter().map(|&x| BigInt::from(x as u64)).collect()
    }
}

fn unflatten_entries(spec: &RootSystemSpec, v: &[BigInt], m: usize) -> Vec<usize> {
    let e = BigInt::from(spec.quotient_exponent().max(1) as u64);
    if spec.quotient_generators() == 2 {
        (0..m)
            .map(|i| {
                let a = v[2 * i].mod_floor(&e);
                let b = v[2 * i + 1].mod_floor(&e);
                usize::try_from(&a).unwrap() + 2 * usize::try_from(&b).unwrap()
            })
            .collect()
    } else {
        v.iter()
            .map(|x| usize::try_from(&x.mod_floor(&e)).unwrap())
            .collect()
    }
}

fn embed_block(col: &[BigInt], slot: usize, big_d: usize, d: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); big_d];
    for (i, x) in col.iter().enumerate() {
        v[slot * d + i] = x.clone();
    }
    v
}

/// Annihilator of a central subgroup `C ⊆ Z(H)^m` under the documented
/// pairing: with the designated generators of `P/Q` and `Z(H)` pairing to
/// `1/e` (diagonally for D even), the annihilator is the mod-e kernel of
/// the generator matrix of `C`.  Returns generators of `S ⊆ (P/Q)^m`.
pub fn center_annihilator(
    spec: &RootSystemSpec,
    m: usize,
    c_generators: &[Vec<usize>],
) -> Result<Vec<Vec<usize>>> {
    validate_generators(spec, m, c_generators)?;
    if spec.family == Family::G2 {
        return Ok(vec![]);
    }
    let e = spec.quotient_exponent().max(1);
    let width = flat_width(spec, m);

    let rows: Vec<Vec<BigInt>> = c_generators
        .iter()
        .map(|g| flatten_entries(spec, g))
        .collect();
    let mat = if rows.is_empty() {
        IntMatrix::zeros(0, width)
    } else {
        IntMatrix::from_fn(rows.len(), width, |i, j| rows[i][j].clone())
    };
    let e_big = BigInt::from(e as u64);
    let sols = solutions_mod_n(&mat, &e_big);
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for j in 0..sols.cols() {
        let entry = unflatten_entries(spec, &sols.column(j), m);
        if entry.iter().all(|&x| x == 0) {
            continue;
        }
        if seen.insert(entry.clone()) {
            out.push(entry);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::MatGroup;

    fn spec(f: Family, r: usize) -> RootSystemSpec {
        RootSystemSpec::new(f, r).unwrap()
    }

    #[test]
    fn weyl_orders_match_classical_formulas() {
        // n!, 2^n n!, 2^{n-1} n!, 12 computed independently.
        let fact = |n: usize| (1..=n).product::<usize>();
        let cases: Vec<(RootSystemSpec, usize)> = vec![
            (spec(Family::A, 2), fact(2)),
            (spec(Family::A, 3), fact(3)),
            (spec(Family::A, 4), fact(4)),
            (spec(Family::B, 2), 4 * fact(2)),
            (spec(Family::B, 3), 8 * fact(3)),
            (spec(Family::C, 3), 8 * fact(3)),
            (spec(Family::D, 3), 4 * fact(3)),
            (spec(Family::D, 4), 8 * fact(4)),
            (spec(Family::G2, 2), 12),
        ];
        for (s, expected) in cases {
            let g = MatGroup::close(weyl_generators(&s), 100_000).unwrap();
            assert_eq!(g.order().unwrap(), expected, "{s:?}");
        }
    }

    #[test]
    fn simple_reflections_are_involutions() {
        for s in [
            spec(Family::A, 4),
            spec(Family::B, 3),
            spec(Family::C, 2),
            spec(Family::D, 4),
            spec(Family::G2, 2),
        ] {
            for g in weyl_generators(&s) {
                assert!(g.mul(&g).is_identity());
            }
        }
    }

    #[test]
    fn quotients_match_classical_values() {
        assert_eq!(
            root_datum(&spec(Family::A, 3)).unwrap().quotient.group(),
            &FinAbGroup::cyclic(3)
        );
        assert_eq!(
            root_datum(&spec(Family::B, 3)).unwrap().quotient.group(),
            &FinAbGroup::cyclic(2)
        );
        assert_eq!(
            root_datum(&spec(Family::C, 3)).unwrap().quotient.group(),
            &FinAbGroup::cyclic(2)
        );
        assert_eq!(
            root_datum(&spec(Family::D, 3)).unwrap().quotient.group(),
            &FinAbGroup::cyclic(4)
        );
        assert_eq!(
            root_datum(&spec(Family::D, 4)).unwrap().quotient.group(),
            &FinAbGroup::new(0, vec![BigInt::from(2), BigInt::from(2)])
        );
        assert!(root_datum(&spec(Family::G2, 2))
            .unwrap()
            .quotient
            .group()
            .is_trivial());
    }

    #[test]
    fn intermediates_spec_examples() {
        assert!(root_datum(&spec(Family::A, 3))
            .unwrap()
            .intermediates
            .is_empty());
        let d3 = root_datum(&spec(Family::D, 3)).unwrap();
        assert_eq!(d3.intermediates.len(), 1);
        assert_eq!(d3.intermediates[0].index_in_p, BigInt::from(2));
        assert_eq!(root_datum(&spec(Family::D, 4)).unwrap().intermediates.len(), 3);
        let g2 = root_datum(&spec(Family::G2, 2)).unwrap();
        assert_eq!(
            g2.q.ambient_canonical().unwrap(),
            g2.p.ambient_canonical().unwrap()
        );
    }

    #[test]
    fn q_is_w_stable_inside_p() {
        // sublattice_with_action succeeds on the coordinates of Q in P.
        for s in [spec(Family::A, 4), spec(Family::B, 2), spec(Family::D, 4)] {
            let datum = root_datum(&s).unwrap();
            let coords = solve_exact(datum.p_basis(), datum.q_basis()).unwrap();
            datum.p.sublattice_with_action(&coords).unwrap();
        }
    }

    #[test]
    fn so_character_lattice_spec_examples() {
        let b3 = so_character_lattice(&spec(Family::B, 3)).unwrap();
        let datum = root_datum(&spec(Family::B, 3)).unwrap();
        assert_eq!(
            b3.lattice.ambient_canonical().unwrap(),
            datum.q.ambient_canonical().unwrap()
        );
        assert!(!b3.triality_ambiguous);

        let d3 = so_character_lattice(&spec(Family::D, 3)).unwrap();
        let datum = root_datum(&spec(Family::D, 3)).unwrap();
        let m = d3.lattice.ambient_canonical().unwrap();
        assert_ne!(m, datum.q.ambient_canonical().unwrap());
        assert_ne!(m, datum.p.ambient_canonical().unwrap());

        assert!(so_character_lattice(&spec(Family::D, 4))
            .unwrap()
            .triality_ambiguous);

        assert!(matches!(
            so_character_lattice(&spec(Family::A, 3)),
            Err(RootDataError::WrongFamily(Family::A))
        ));
    }

    #[test]
    fn pms_spec_examples() {
        // S = 0 gives Q^m, S = full gives P^m (checked by index).
        let s = spec(Family::A, 3);
        let zero = character_lattice_pms(&s, 2, &[]).unwrap();
        assert_eq!(zero.index_in_p, BigInt::from(9));
        assert_eq!(zero.s_order, BigInt::from(1));

        let full = character_lattice_pms(&s, 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(full.index_in_p, BigInt::from(1));
        assert_eq!(full.s_order, BigInt::from(9));

        // A1, m = 2, S = <(1,1)>: index 2 in P² (the SO4 lattice).
        let a1 = spec(Family::A, 2);
        let so4 = character_lattice_pms(&a1, 2, &[vec![1, 1]]).unwrap();
        assert_eq!(so4.index_in_p, BigInt::from(2));
        assert_eq!(so4.s_order, BigInt::from(2));
    }

    #[test]
    fn pms_index_times_order_is_total() {
        let cases = vec![
            (spec(Family::A, 4), 2, vec![vec![2, 0]]),
            (spec(Family::B, 2), 3, vec![vec![1, 1, 0]]),
            (spec(Family::D, 3), 2, vec![vec![2, 2]]),
            (spec(Family::D, 4), 1, vec![vec![3]]),
        ];
        for (s, m, gens) in cases {
            let cl = character_lattice_pms(&s, m, &gens).unwrap();
            let total = BigInt::from(s.quotient_order() as u64).pow(m as u32);
            assert_eq!(&cl.index_in_p * &cl.s_order, total, "{s:?} m={m}");
        }
    }

    #[test]
    fn center_annihilator_spec_examples() {
        let a1 = spec(Family::A, 2);
        // Trivial C: S = full (Z/2)².
        let s = center_annihilator(&a1, 2, &[]).unwrap();
        assert_eq!(subgroup_order(&a1, 2, &s), BigInt::from(4));

        // Full center: S = 0.
        let s = center_annihilator(&a1, 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(s.is_empty());

        // Diagonal mu_2: annihilator {(0,0),(1,1)}, verified by brute force
        // over all 16 pairing values of (Z/2)² x (Z/2)².
        let s = center_annihilator(&a1, 2, &[vec![1, 1]]).unwrap();
        let mut got = std::collections::BTreeSet::new();
        got.insert(vec![0usize, 0]);
        for v in &s {
            got.insert(v.clone());
        }
        let mut expected = std::collections::BTreeSet::new();
        for a in 0..2usize {
            for b in 0..2usize {
                if (a + b) % 2 == 0 {
                    expected.insert(vec![a, b]);
                }
            }
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn annihilator_order_product_is_total() {
        // |S| * |C| = |P/Q|^m under the perfect pairing.
        let cases = vec![
            (spec(Family::A, 4), 2, vec![vec![1, 2]]),
            (spec(Family::A, 5), 2, vec![vec![1, 0], vec![0, 1]]),
            (spec(Family::D, 3), 2, vec![vec![1, 1]]),
            (spec(Family::D, 4), 2, vec![vec![1, 0], vec![0, 2]]),
            (spec(Family::B, 3), 3, vec![vec![1, 1, 1]]),
        ];
        for (s, m, c_gens) in cases {
            let ann = center_annihilator(&s, m, &c_gens).unwrap();
            let total = BigInt::from(s.quotient_order() as u64).pow(m as u32);
            assert_eq!(
                subgroup_order(&s, m, &ann) * subgroup_order(&s, m, &c_gens),
                total,
                "{s:?} m={m}"
            );
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(RootSystemSpec::new(Family::D, 2).is_err());
        assert!(RootSystemSpec::new(Family::A, 1).is_err());
        let a2 = spec(Family::A, 3);
        assert!(matches!(
            character_lattice_pms(&a2, 2, &[vec![3, 0]]),
            Err(RootDataError::InvalidGenerators(_))
        ));
        assert!(matches!(
            character_lattice_pms(&a2, 2, &[vec![1]]),
            Err(RootDataError::InvalidGenerators(_))
        ));
    }
}
