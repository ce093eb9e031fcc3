//! The explicit non-quasi-invertible lattices, each constructor paired
//! with its verification computation:
//!
//! * the half-sum family `M` over Weyl groups of `B`/`D` diagrams, with the
//!   Klein-four embeddings through sign changes;
//! * the rank-3 even-sum lattice over `(Z/2)³` with its printed matrices;
//! * the `D₃^m` family with the two commuting involutions `a`, `b`;
//! * the `A₂^m` family `L_a`, its twisted isomorphism onto `L₁`, and the
//!   identification of `L₁` inside the `A_{3m-1}` weight lattice;
//! * the `A₅` weight lattice over `Sym₃ × Sym₃`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::glattice::{Ambient, GLattice, LatticeError, LatticeHom};
use crate::groups::{GroupError, MatGroup, DEFAULT_ORDER_CAP};
use crate::intlinalg::{
    abs_det, column_hnf, kernel_basis, solve_exact, cokernel, FinAbGroup, IntMatrix,
    LinAlgError,
};
use crate::rootdata::{sign_flip, transposition, weyl_generators, Family, RootSystemSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("diagram component {index}: type {family:?} rank {rank} not allowed")]
    BadComponent {
        index: usize,
        family: Family,
        rank: usize,
    },
    #[error("partition part U_{0} is empty")]
    EmptyPart(usize),
    #[error("partition of component {component} violates the D-parity condition")]
    ParityViolation { component: usize },
    #[error("partition does not partition component {component}")]
    NotAPartition { component: usize },
    #[error("embedding image is not in the Weyl group (component {component})")]
    NotInWeylGroup { component: usize },
    #[error("the diagram needs total rank >= 3 (got {0})")]
    RankTooSmall(usize),
    #[error("the diagram D4 alone is excluded from the sign-change embedding")]
    D4Alone,
    #[error("m must be >= 2 (got {0})")]
    BadM(usize),
    #[error("twist vector entries must be 1 or 2: {0:?}")]
    BadVector(Vec<usize>),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, WitnessError>;

/// A disjoint union of components of type `B_l` (l >= 1) or `D_l` (l >= 3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramSpec {
    components: Vec<RootSystemSpec>,
}

impl DiagramSpec {
    pub fn new(components: Vec<(Family, usize)>) -> Result<Self> {
        let mut specs = Vec::new();
        for (index, (family, rank)) in components.iter().enumerate() {
            let ok = match family {
                Family::B => *rank >= 1,
                Family::D => *rank >= 3,
                _ => false,
            };
            if !ok {
                return Err(WitnessError::BadComponent {
                    index,
                    family: *family,
                    rank: *rank,
                });
            }
            specs.push(RootSystemSpec {
                family: *family,
                rank: *rank,
            });
        }
        Ok(DiagramSpec { components: specs })
    }

    pub fn components(&self) -> &[RootSystemSpec] {
        &self.components
    }

    pub fn total_rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    /// Global coordinate range of component `i`.
    pub fn coordinate_range(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.components[..i].iter().map(|c| c.rank).sum();
        start..start + self.components[i].rank
    }

    pub fn is_d4_alone(&self) -> bool {
        self.components.len() == 1
            && self.components[0].family == Family::D
            && self.components[0].rank == 4
    }

    /// Block-diagonal Weyl generators of `W(Δ)`.
    pub fn weyl_generators(&self) -> Vec<IntMatrix> {
        let total = self.total_rank();
        let mut gens = Vec::new();
        for (i, comp) in self.components.iter().enumerate() {
            let range = self.coordinate_range(i);
            for g in weyl_generators(comp) {
                let mut m = IntMatrix::identity(total);
                for r in 0..comp.rank {
                    for c in 0..comp.rank {
                        m[(range.start + r, range.start + c)] = g[(r, c)].clone();
                    }
                }
                gens.push(m);
            }
        }
        gens
    }

    pub fn weyl_group(&self) -> Result<MatGroup> {
        Ok(MatGroup::from_generators(
            self.weyl_generators(),
            DEFAULT_ORDER_CAP,
        )?)
    }
}

/// The lattice `M` generated by the standard basis vectors and the
/// half-sum `β = (1/2) Σ ε_s`, over `W(Δ)`.
pub fn family_lattice_m(diagram: &DiagramSpec) -> Result<GLattice> {
    let n = diagram.total_rank();
    let weyl = diagram.weyl_group()?;
    // Columns over den 2: Σε, 2ε_1, ..., 2ε_{n-1}.
    let mut cols = vec![vec![BigInt::one(); n]];
    for i in 0..n - 1 {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::from(2);
        cols.push(v);
    }
    Ok(GLattice::from_ambient(
        weyl,
        Ambient {
            basis: IntMatrix::from_columns(&cols),
            den: BigInt::from(2),
        },
    )?)
}

/// Three disjoint subsets of each component's coordinates, covering it.
/// For D components the three sizes must be congruent to the rank mod 2.
#[derive(Debug, Clone)]
pub struct Partition3 {
    /// Global coordinate indices: `parts[i][k]` is `S_{i,k+1}`.
    pub parts: Vec<[Vec<usize>; 3]>,
}

impl Partition3 {
    /// Union of the κ-th parts over all components.
    pub fn union(&self, kappa: usize) -> Vec<usize> {
        let mut u: Vec<usize> = self
            .parts
            .iter()
            .flat_map(|p| p[kappa].iter().copied())
            .collect();
        u.sort_unstable();
        u
    }
}

/// Validate a partition against a diagram.
fn validate_partition(diagram: &DiagramSpec, partition: &Partition3) -> Result<()> {
    if partition.parts.len() != diagram.components.len() {
        return Err(WitnessError::NotAPartition { component: 0 });
    }
    for (i, comp) in diagram.components.iter().enumerate() {
        let range = diagram.coordinate_range(i);
        let mut all: Vec<usize> = partition.parts[i]
            .iter()
            .flat_map(|p| p.iter().copied())
            .collect();
        all.sort_unstable();
        let expected: Vec<usize> = range.clone().collect();
        if all != expected {
            return Err(WitnessError::NotAPartition { component: i });
        }
        if comp.family == Family::D {
            for part in &partition.parts[i] {
                if part.len() % 2 != comp.rank % 2 {
                    return Err(WitnessError::ParityViolation { component: i });
                }
            }
        }
    }
    for kappa in 0..3 {
        if partition.union(kappa).is_empty() {
            return Err(WitnessError::EmptyPart(kappa + 1));
        }
    }
    Ok(())
}

/// The constructive default partition: an odd D component is split three
/// ways first, then an even D component of rank >= 6, then the D4-plus-
/// others case, and finally the all-B fallback.
pub fn default_partition(diagram: &DiagramSpec) -> Result<Partition3> {
    let total = diagram.total_rank();
    if total < 3 {
        return Err(WitnessError::RankTooSmall(total));
    }
    if diagram.is_d4_alone() {
        return Err(WitnessError::D4Alone);
    }
    let comps = &diagram.components;
    let everything_to = |target: usize, kappa: usize| -> Vec<[Vec<usize>; 3]> {
        comps
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let coords: Vec<usize> = diagram.coordinate_range(i).collect();
                let mut part: [Vec<usize>; 3] = Default::default();
                if i != target {
                    part[kappa] = coords;
                }
                part
            })
            .collect()
    };

    // Odd D component: split into three odd parts (1, 1, l-2).
    if let Some(i) = comps
        .iter()
        .position(|c| c.family == Family::D && c.rank % 2 == 1)
    {
        let coords: Vec<usize> = diagram.coordinate_range(i).collect();
        let mut parts = everything_to(i, 2);
        parts[i] = [
            vec![coords[0]],
            vec![coords[1]],
            coords[2..].to_vec(),
        ];
        let p = Partition3 { parts };
        validate_partition(diagram, &p)?;
        return Ok(p);
    }
    // Even D component of rank >= 6: split (2, 2, l-4).
    if let Some(i) = comps
        .iter()
        .position(|c| c.family == Family::D && c.rank % 2 == 0 && c.rank >= 6)
    {
        let coords: Vec<usize> = diagram.coordinate_range(i).collect();
        let mut parts = everything_to(i, 2);
        parts[i] = [
            coords[0..2].to_vec(),
            coords[2..4].to_vec(),
            coords[4..].to_vec(),
        ];
        let p = Partition3 { parts };
        validate_partition(diagram, &p)?;
        return Ok(p);
    }
    // D4 with other components: (2, 2, ∅) on the D4, the rest to U_3.
    if let Some(i) = comps
        .iter()
        .position(|c| c.family == Family::D && c.rank == 4)
    {
        let coords: Vec<usize> = diagram.coordinate_range(i).collect();
        let mut parts = everything_to(i, 2);
        parts[i] = [coords[0..2].to_vec(), coords[2..4].to_vec(), vec![]];
        let p = Partition3 { parts };
        validate_partition(diagram, &p)?;
        return Ok(p);
    }
    // All components of type B: no parity constraints; put the first two
    // coordinates in U_1 and U_2 and the rest in U_3.
    let mut parts: Vec<[Vec<usize>; 3]> = comps.iter().map(|_| Default::default()).collect();
    for (i, _) in comps.iter().enumerate() {
        for coord in diagram.coordinate_range(i) {
            let kappa = if coord == 0 {
                0
            } else if coord == 1 {
                1
            } else {
                2
            };
            parts[i][kappa].push(coord);
        }
    }
    let p = Partition3 { parts };
    validate_partition(diagram, &p)?;
    Ok(p)
}

/// The Klein-four embedding `ι(γ_κ) = Π_{s ∉ U_κ} c_s` attached to a
/// partition: three commuting involutions in `W(Δ)` whose images generate
/// `Z/2 × Z/2` acting on the half-sum lattice.
pub fn gamma_embedding(
    diagram: &DiagramSpec,
    partition: &Partition3,
) -> Result<[IntMatrix; 3]> {
    let total = diagram.total_rank();
    if total < 3 {
        return Err(WitnessError::RankTooSmall(total));
    }
    validate_partition(diagram, partition)?;
    let mut images = Vec::new();
    for kappa in 0..3 {
        let u = partition.union(kappa);
        let mut m = IntMatrix::identity(total);
        for s in 0..total {
            if u.binary_search(&s).is_err() {
                m[(s, s)] = BigInt::from(-1);
            }
        }
        images.push(m);
    }
    // Images must lie in W: for D components the number of sign changes
    // inside the component must be even (granted by the parity condition).
    for (i, comp) in diagram.components.iter().enumerate() {
        if comp.family != Family::D {
            continue;
        }
        for img in &images {
            let flips = diagram
                .coordinate_range(i)
                .filter(|&s| img[(s, s)] == BigInt::from(-1))
                .count();
            if flips % 2 != 0 {
                return Err(WitnessError::NotInWeylGroup { component: i });
            }
        }
    }
    // γ1 γ2 = γ3 and the images are commuting involutions by construction;
    // assert rather than assume.
    let prod = images[0].mul(&images[1]);
    if prod != images[2] {
        return Err(WitnessError::Internal("γ1·γ2 != γ3".into()));
    }
    for img in &images {
        if !img.mul(img).is_identity() {
            return Err(WitnessError::Internal("embedding image is not an involution".into()));
        }
    }
    Ok([images[0].clone(), images[1].clone(), images[2].clone()])
}

/// The Klein-four group generated by an embedding, as its own `MatGroup`.
pub fn gamma_group(images: &[IntMatrix; 3]) -> Result<MatGroup> {
    Ok(MatGroup::close(vec![images[0].clone(), images[1].clone()], 8)?)
}

/// Verification data for the `M₀ ≅ J_Γ` decomposition of the half-sum
/// lattice restricted to an embedded Klein four group.
#[derive(Debug, Clone)]
pub struct FamilyDecomposition {
    /// `M` as a lattice over the Klein group.
    pub restricted: GLattice,
    /// Basis of `M₀` (the orbit span of β) in `M` coordinates.
    pub m0_basis: IntMatrix,
    /// The verified isomorphism `J_Γ → M₀`.
    pub j_iso: LatticeHom,
}

/// Restrict the half-sum lattice to the embedded Klein group and verify
/// the structure used by the obstruction argument:
/// `β + β_κ = Σ_{s ∈ U_κ} ε_s` and `M₀ = span(Γ·β) ≅ J_Γ` of rank 3.
pub fn family_decomposition(
    diagram: &DiagramSpec,
    partition: &Partition3,
) -> Result<FamilyDecomposition> {
    let m = family_lattice_m(diagram)?;
    let images = gamma_embedding(diagram, partition)?;
    let gamma = gamma_group(&images)?;
    let restricted = m.with_group(gamma.clone())?;

    let n = diagram.total_rank();
    let amb = restricted.ambient().expect("family lattice has an ambient");
    // β in lattice coordinates: ambient vector (1,..,1)/2, sought as
    // basis * x = (1,..,1) over den 2.
    let beta_amb = IntMatrix::from_columns(&[vec![BigInt::one(); n]]);
    let beta = solve_exact(&amb.basis, &beta_amb)
        .ok_or_else(|| WitnessError::Internal("β not in M".into()))?;

    // Orbit of β under the three involutions, in lattice coordinates.
    let mut orbit_cols = vec![beta.column(0)];
    for img in &images {
        let act = restricted.action_of_element_matrix(img)?;
        orbit_cols.push(act.apply(&beta.column(0)));
    }
    // β + β_κ = Σ_{s∈U_κ} ε_s identity, checked in ambient coordinates.
    for (kappa, img) in images.iter().enumerate() {
        let beta_k = &orbit_cols[kappa + 1];
        let sum: Vec<BigInt> = beta
            .column(0)
            .iter()
            .zip(beta_k.iter())
            .map(|(a, b)| a + b)
            .collect();
        let ambient_sum = amb.basis.apply(&sum);
        let u = partition.union(kappa);
        for s in 0..n {
            let expected = if u.binary_search(&s).is_ok() {
                BigInt::from(2) // times den
            } else {
                BigInt::zero()
            };
            if ambient_sum[s] != expected {
                return Err(WitnessError::Internal(format!(
                    "β + β_{} has wrong coordinate {s}",
                    kappa + 1
                )));
            }
        }
        let _ = img;
    }

    // M₀ = span of the orbit; rank 3 with β + β1 + β2 + β3 = 0.
    let m0_basis = column_hnf(&IntMatrix::from_columns(&orbit_cols));
    if m0_basis.cols() != 3 {
        return Err(WitnessError::Internal(format!(
            "orbit span has rank {}, expected 3",
            m0_basis.cols()
        )));
    }
    let (m0, _incl) = restricted.sublattice_with_action(&m0_basis)?;

    // J_Γ → M₀: e_γ ↦ γ·β for the three non-identity elements, in the
    // element order of the Klein group.
    let j = crate::glattice::j_gamma(&gamma)?;
    let id = gamma.identity_index()?;
    let mut cols = Vec::new();
    for g in 0..gamma.order()? {
        if g == id {
            continue;
        }
        let act = restricted.action_of_element_matrix(gamma.element(g)?)?;
        let img_m = act.apply(&beta.column(0));
        // Coordinates inside M₀.
        let col = solve_exact(&m0_basis, &IntMatrix::from_columns(&[img_m]))
            .ok_or_else(|| WitnessError::Internal("orbit vector not in M₀".into()))?;
        cols.push(col.column(0));
    }
    let j_iso = LatticeHom::new(&j, &m0, IntMatrix::from_columns(&cols))?;
    if !j_iso.is_isomorphism() {
        return Err(WitnessError::Internal("J_Γ → M₀ is not an isomorphism".into()));
    }

    Ok(FamilyDecomposition {
        restricted,
        m0_basis,
        j_iso,
    })
}

/// The rank-3 even-sum lattice over `(Z/2)³` and the certificate that, in
/// the basis `e₁ = ε₂-ε₁`, `e₂ = ε₂-ε₃`, `e₃ = -ε₁-ε₃`, the elements
/// `σ = c₂c₃`, `τ = c₁c₂`, `ρ = c₁c₂c₃` act by the printed matrices.
#[derive(Debug, Clone)]
pub struct KleinB1Certificate {
    pub sigma: IntMatrix,
    pub tau: IntMatrix,
    pub rho: IntMatrix,
    /// Basis change from the plain even-sum basis to (e₁, e₂, e₃).
    pub basis_change: IntMatrix,
    pub basis_change_det: BigInt,
}

pub fn klein_b1_lattice() -> Result<(GLattice, KleinB1Certificate)> {
    let group = MatGroup::from_generators(
        vec![sign_flip(3, 0), sign_flip(3, 1), sign_flip(3, 2)],
        8,
    )?;
    // Basis e₁ = ε₂-ε₁, e₂ = ε₂-ε₃, e₃ = -ε₁-ε₃ of the even-sum lattice.
    let basis = IntMatrix::from_columns(&[
        vec![BigInt::from(-1), BigInt::one(), BigInt::zero()],
        vec![BigInt::zero(), BigInt::one(), BigInt::from(-1)],
        vec![BigInt::from(-1), BigInt::zero(), BigInt::from(-1)],
    ]);
    let lattice = GLattice::from_ambient(
        group.clone(),
        Ambient {
            basis: basis.clone(),
            den: BigInt::one(),
        },
    )?;

    let c = |i: usize| sign_flip(3, i);
    let sigma = lattice.action_of_element_matrix(&c(1).mul(&c(2)))?;
    let tau = lattice.action_of_element_matrix(&c(0).mul(&c(1)))?;
    let rho = lattice.action_of_element_matrix(&c(0).mul(&c(1)).mul(&c(2)))?;

    // Basis change from {ε₁+ε₂, ε₁-ε₂, ε₂-ε₃} to the new basis.
    let plain = IntMatrix::from_columns(&[
        vec![BigInt::one(), BigInt::one(), BigInt::zero()],
        vec![BigInt::one(), BigInt::from(-1), BigInt::zero()],
        vec![BigInt::zero(), BigInt::one(), BigInt::from(-1)],
    ]);
    let basis_change = solve_exact(&plain, &basis)
        .ok_or_else(|| WitnessError::Internal("bases span different lattices".into()))?;
    let det = abs_det(&basis_change);
    Ok((
        lattice,
        KleinB1Certificate {
            sigma,
            tau,
            rho,
            basis_change,
            basis_change_det: det,
        },
    ))
}

/// The printed matrices the certificate must reproduce.
pub fn klein_b1_expected() -> (IntMatrix, IntMatrix, IntMatrix) {
    (
        IntMatrix::from_rows(&[vec![0, 0, 1], vec![-1, -1, -1], vec![1, 0, 0]]),
        IntMatrix::from_rows(&[vec![-1, -1, -1], vec![0, 0, 1], vec![0, 1, 0]]),
        IntMatrix::from_rows(&[vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]),
    )
}

/// The `D₃^m` lattice `L = (Z D₃)^m + Z·v_e`, `v_e = ε₁ + ε₄ + ... +
/// ε_{3m-2}`, over `W(D₃)^m`.
pub fn so6_lattice(m: usize) -> Result<GLattice> {
    if m < 2 {
        return Err(WitnessError::BadM(m));
    }
    let diagram: Vec<(Family, usize)> = (0..m).map(|_| (Family::D, 3)).collect();
    let diagram = DiagramSpec::new(diagram)?;
    let weyl = diagram.weyl_group()?;
    let n = 3 * m;
    let mut cols = Vec::new();
    for i in 0..m {
        let base = 3 * i;
        let mk = |entries: [(usize, i64); 2]| {
            let mut v = vec![BigInt::zero(); n];
            for (p, x) in entries {
                v[base + p] = BigInt::from(x);
            }
            v
        };
        cols.push(mk([(0, 1), (1, 1)]));
        cols.push(mk([(0, 1), (1, -1)]));
        cols.push(mk([(1, 1), (2, -1)]));
    }
    let mut v_e = vec![BigInt::zero(); n];
    for i in 0..m {
        v_e[3 * i] = BigInt::one();
    }
    cols.push(v_e);
    let basis = column_hnf(&IntMatrix::from_columns(&cols));
    Ok(GLattice::from_ambient(
        weyl,
        Ambient {
            basis,
            den: BigInt::one(),
        },
    )?)
}

/// The two commuting involutions `a = (12) c₄c₅ c₇c₈ ... c_{3m-2}c_{3m-1}`
/// and `b = c₁c₂ (45)` in `W(D₃)^m`.
pub fn so6_gamma(m: usize) -> Result<(IntMatrix, IntMatrix)> {
    if m < 2 {
        return Err(WitnessError::BadM(m));
    }
    let n = 3 * m;
    let mut a = transposition(n, 0, 1);
    for i in 1..m {
        a[(3 * i, 3 * i)] = BigInt::from(-1);
        a[(3 * i + 1, 3 * i + 1)] = BigInt::from(-1);
    }
    let mut b = transposition(n, 3, 4);
    b[(0, 0)] = BigInt::from(-1);
    b[(1, 1)] = BigInt::from(-1);
    // a and b are commuting involutions; verify rather than assume.
    if !a.mul(&a).is_identity() || !b.mul(&b).is_identity() || a.mul(&b) != b.mul(&a) {
        return Err(WitnessError::Internal("so6 generators are not commuting involutions".into()));
    }
    Ok((a, b))
}

/// The basis `β₁..β_{2m}` of `L₀ = L ∩ V₀` used in the obstruction proof,
/// and the check that it really is a basis.
#[derive(Debug, Clone)]
pub struct So6BasisReport {
    /// Ambient columns of β₁..β_{2m}.
    pub beta: IntMatrix,
    /// Canonical ambient basis of `L₀`.
    pub l0: IntMatrix,
    pub is_basis: bool,
}

pub fn so6_basis_check(m: usize) -> Result<So6BasisReport> {
    let lattice = so6_lattice(m)?;
    let (a, b) = so6_gamma(m)?;
    let n = 3 * m;
    // V₀ is spanned by the first two coordinates of each component.
    let v0: Vec<usize> = (0..m).flat_map(|i| [3 * i, 3 * i + 1]).collect();
    let l0_coords = lattice.intersection_with_coordinate_block(&v0)?;
    let l0_ambient = column_hnf(&lattice.to_ambient(&l0_coords)?);

    let mut v_e = vec![BigInt::zero(); n];
    for i in 0..m {
        v_e[3 * i] = BigInt::one();
    }
    let mut cols = Vec::new();
    cols.push(v_e.clone());
    cols.push(a.apply(&v_e));
    cols.push(b.apply(&v_e));
    // β₄ = ε₄ - ε₅.
    let mut beta4 = vec![BigInt::zero(); n];
    beta4[3] = BigInt::one();
    beta4[4] = BigInt::from(-1);
    cols.push(beta4);
    // β_{2i-1} = ε_{3i-2} + ε_{3i-1}, β_{2i} = ε_{3i-2} - ε_{3i-1} for
    // components i >= 3.
    for i in 2..m {
        let mut plus = vec![BigInt::zero(); n];
        plus[3 * i] = BigInt::one();
        plus[3 * i + 1] = BigInt::one();
        let mut minus = vec![BigInt::zero(); n];
        minus[3 * i] = BigInt::one();
        minus[3 * i + 1] = BigInt::from(-1);
        cols.push(plus);
        cols.push(minus);
    }
    let beta = IntMatrix::from_columns(&cols);
    let is_basis = column_hnf(&beta) == l0_ambient;
    Ok(So6BasisReport {
        beta,
        l0: l0_ambient,
        is_basis,
    })
}

/// The `(Sym₃)^m`-lattice `L_a = (Z A₂)^m + Z·x_a` with
/// `x_a = Σ a_i ω₁^{(i)}`, entries of `a` in {1, 2}.
pub fn sl3_lattice(m: usize, a: &[usize]) -> Result<GLattice> {
    if m < 2 {
        return Err(WitnessError::BadM(m));
    }
    if a.len() != m || a.iter().any(|&x| x != 1 && x != 2) {
        return Err(WitnessError::BadVector(a.to_vec()));
    }
    let n = 3 * m;
    // W = (Sym₃)^m blockwise.
    let mut gens = Vec::new();
    for i in 0..m {
        gens.push(transposition(n, 3 * i, 3 * i + 1));
        gens.push(transposition(n, 3 * i + 1, 3 * i + 2));
    }
    let weyl = MatGroup::from_generators(gens, DEFAULT_ORDER_CAP)?;

    // Columns over den 3: roots 3·α and 3·x_a with
    // ω₁ = ε₁ - (1/3)(ε₁+ε₂+ε₃) per component.
    let mut cols = Vec::new();
    for i in 0..m {
        let mut a1 = vec![BigInt::zero(); n];
        a1[3 * i] = BigInt::from(3);
        a1[3 * i + 1] = BigInt::from(-3);
        let mut a2 = vec![BigInt::zero(); n];
        a2[3 * i + 1] = BigInt::from(3);
        a2[3 * i + 2] = BigInt::from(-3);
        cols.push(a1);
        cols.push(a2);
    }
    let mut xa = vec![BigInt::zero(); n];
    for (i, &ai) in a.iter().enumerate() {
        let c = BigInt::from(ai as i64);
        xa[3 * i] = BigInt::from(3) * &c - &c;
        xa[3 * i + 1] = -&c;
        xa[3 * i + 2] = -&c;
    }
    cols.push(xa);
    let basis = column_hnf(&IntMatrix::from_columns(&cols));
    Ok(GLattice::from_ambient(
        weyl,
        Ambient {
            basis,
            den: BigInt::from(3),
        },
    )?)
}

/// A verified twisted isomorphism between lattices over the same matrix
/// group: `matrix · action_src(g) = action_tgt(φ(g)) · matrix` where φ is
/// conjugation by an ambient transformation normalizing the group.
#[derive(Debug, Clone)]
pub struct PhiIsomorphism {
    /// The lattice-coordinates isomorphism matrix (unimodular).
    pub matrix: IntMatrix,
    /// The ambient twist implementing φ.
    pub twist: IntMatrix,
    /// Coordinates (0-based) on which the twist is the diagram flip.
    pub twisted_slots: Vec<usize>,
}

/// The diagram-automorphism twist taking `L₁` to `L_a`: on every slot with
/// `a_i = 2` apply `-1 ∘ (1 3)`, elsewhere the identity.
pub fn sl3_tau_iso(m: usize, a: &[usize]) -> Result<PhiIsomorphism> {
    let l1 = sl3_lattice(m, &vec![1; m])?;
    let la = sl3_lattice(m, a)?;
    let n = 3 * m;
    let mut twist = IntMatrix::identity(n);
    let mut twisted_slots = Vec::new();
    for (i, &ai) in a.iter().enumerate() {
        if ai == 2 {
            twisted_slots.push(i);
            let base = 3 * i;
            for r in 0..3 {
                for c in 0..3 {
                    twist[(base + r, base + c)] = BigInt::zero();
                }
            }
            twist[(base, base + 2)] = BigInt::from(-1);
            twist[(base + 1, base + 1)] = BigInt::from(-1);
            twist[(base + 2, base)] = BigInt::from(-1);
        }
    }

    let b1 = &l1.ambient().unwrap().basis;
    let ba = &la.ambient().unwrap().basis;
    let matrix = solve_exact(ba, &twist.mul(b1))
        .ok_or_else(|| WitnessError::Internal("twist does not map L₁ into L_a".into()))?;
    if !abs_det(&matrix).is_one() {
        return Err(WitnessError::Internal("twist is not onto L_a".into()));
    }

    // Equivariance up to conjugation by the twist: for every generator g,
    // matrix · action_{L₁}(g) = action_{L_a}(t g t⁻¹) · matrix, and the
    // conjugate stays in the Weyl group.
    let weyl = l1.group().clone();
    weyl.materialize()?;
    let twist_inv = twist
        .unimodular_inverse()
        .map_err(|_| WitnessError::Internal("twist is not unimodular".into()))?;
    for g in weyl.generators() {
        let phi_g = twist.mul(g).mul(&twist_inv);
        if !weyl.contains(&phi_g)? {
            return Err(WitnessError::Internal(
                "twist conjugation leaves the Weyl group".into(),
            ));
        }
        let lhs = matrix.mul(&l1.action_of_element_matrix(g)?);
        let rhs = la.action_of_element_matrix(&phi_g)?.mul(&matrix);
        if lhs != rhs {
            return Err(WitnessError::Internal("twisted equivariance fails".into()));
        }
    }

    Ok(PhiIsomorphism {
        matrix,
        twist,
        twisted_slots,
    })
}

/// Verification report for the identification of `ψ(L₁)` inside the
/// `A_{3m-1}` weight lattice.
#[derive(Debug, Clone)]
pub struct A2mWeightReport {
    /// `Ξ' ∪ {μ}` is a basis of `M = Λ_{3m} ∩ ψ((Q A₂)^m)`.
    pub basis_ok: bool,
    /// `M = ψ(L₁)` as lattices.
    pub equals_psi_l1: bool,
    /// `Λ_{3m} / M`, expected free of rank m-1.
    pub quotient: FinAbGroup,
    /// The fundamental-weight expansion of λ₁ holds.
    pub lambda1_ok: bool,
}

pub fn a2m_weight_identification(m: usize) -> Result<A2mWeightReport> {
    if m < 2 {
        return Err(WitnessError::BadM(m));
    }
    let nn = 3 * m; // A_{3m-1} lives in Z^{3m}
    let spec = RootSystemSpec::new(Family::A, nn)
        .map_err(|e| WitnessError::Internal(e.to_string()))?;
    let datum = crate::rootdata::root_datum(&spec)
        .map_err(|e| WitnessError::Internal(e.to_string()))?;
    let den = datum.den().clone(); // = 3m
    let lam_basis = datum.p_basis().clone(); // columns over den

    // α_k ambient columns (times den), 1-based k.
    let alpha = |k: usize| -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); nn];
        v[k - 1] = den.clone();
        v[k] = -den.clone();
        v
    };

    // λ₁ = (1/3m)((3m-1)α₁ + (3m-2)α₂ + ... + α_{3m-1}).
    let omega1: Vec<BigInt> = {
        // From the root datum: first fundamental weight times den.
        let mut v = vec![-BigInt::one(); nn];
        v[0] = BigInt::from((nn - 1) as i64);
        v
    };
    let mut rhs = vec![BigInt::zero(); nn];
    for k in 1..nn {
        let coef = BigInt::from((nn - k) as i64);
        let ak = alpha(k);
        for (r, x) in rhs.iter_mut().enumerate() {
            *x += &coef * &ak[r];
        }
    }
    // rhs is den * Σ (3m-k) α_k; λ₁·den·den = rhs means λ₁ = rhs/den².
    let lambda1_ok = {
        let scaled: Vec<BigInt> = omega1.iter().map(|x| x * &den).collect();
        scaled == rhs
    };

    // ψ image subspace: spanned by α_k for k not divisible by 3.
    let kept: Vec<usize> = (1..nn).filter(|k| k % 3 != 0).collect();
    let span_cols: Vec<Vec<BigInt>> = kept.iter().map(|&k| alpha(k)).collect();
    let span = IntMatrix::from_columns(&span_cols);
    // Left kernel rows annihilating the span.
    let left_kernel = kernel_basis(&span.transpose()).transpose();
    // M = {v in Λ : left_kernel · v = 0}: coordinates in the Λ basis.
    let m_coords = kernel_basis(&left_kernel.mul(&lam_basis));
    let m_ambient = column_hnf(&lam_basis.mul(&m_coords));

    // Ξ' = {α₁, α₂, α₄, α₅, ..., α_{3m-5}, α_{3m-4}, α_{3m-2}} and μ.
    let mut xi_cols: Vec<Vec<BigInt>> = Vec::new();
    for i in 1..m {
        xi_cols.push(alpha(3 * i - 2));
        xi_cols.push(alpha(3 * i - 1));
    }
    xi_cols.push(alpha(nn - 2));
    // μ = m λ₁ - (m-1)α₃ - (m-2)α₆ - ... - α_{3(m-1)}.
    let mut mu: Vec<BigInt> = omega1.iter().map(|x| x * BigInt::from(m as u64)).collect();
    for j in 1..m {
        let coef = BigInt::from((m - j) as i64);
        let a3j = alpha(3 * j);
        for (r, x) in mu.iter_mut().enumerate() {
            *x -= &coef * &a3j[r];
        }
    }
    xi_cols.push(mu);
    let xi_mu = column_hnf(&IntMatrix::from_columns(&xi_cols));
    let basis_ok = xi_mu == m_ambient;

    // ψ(L₁): columns ψ(α^{(i)}_j) and ψ(Σ ω₁^{(i)}) over the same den.
    let mut psi_cols: Vec<Vec<BigInt>> = Vec::new();
    for i in 1..=m {
        psi_cols.push(alpha(3 * i - 2));
        psi_cols.push(alpha(3 * i - 1));
    }
    {
        // ψ(Σ ω₁^{(i)}) times den: the alpha() columns already carry the
        // den factor, so divide the weight combination by 3 exactly.
        let mut v = vec![BigInt::zero(); nn];
        for i in 1..=m {
            let a1 = alpha(3 * i - 2);
            let a2 = alpha(3 * i - 1);
            for (r, x) in v.iter_mut().enumerate() {
                let num = BigInt::from(2) * &a1[r] + &a2[r];
                let (q, rem) = num.div_rem(&BigInt::from(3));
                debug_assert!(rem.is_zero());
                *x += q;
            }
        }
        psi_cols.push(v);
    }
    let psi_l1 = column_hnf(&IntMatrix::from_columns(&psi_cols));
    let equals_psi_l1 = psi_l1 == m_ambient;

    // Λ / M.
    let quotient = cokernel(&m_coords);

    Ok(A2mWeightReport {
        basis_ok,
        equals_psi_l1,
        quotient,
        lambda1_ok,
    })
}

/// The `A₅` weight lattice (rank 5) as a lattice over `Sym₃ × Sym₃`
/// embedded blockwise in `Sym₆`.
pub fn lambda6_restricted() -> Result<GLattice> {
    let spec = RootSystemSpec::new(Family::A, 6)
        .map_err(|e| WitnessError::Internal(e.to_string()))?;
    let datum = crate::rootdata::root_datum(&spec)
        .map_err(|e| WitnessError::Internal(e.to_string()))?;
    let gens = vec![
        transposition(6, 0, 1),
        transposition(6, 1, 2),
        transposition(6, 3, 4),
        transposition(6, 4, 5),
    ];
    let group = MatGroup::from_generators(gens, 64)?;
    Ok(datum.p.with_group(group)?)
}
