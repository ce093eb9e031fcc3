//! Acceptance suite: every top-level claim the library makes about the
//! lattice computations the library asserts, each criterion one test with its
//! wall-clock budget.  All arithmetic is exact; "tolerance" is exact
//! equality of canonical forms throughout.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasilat::classify::{
    all_subspaces, almost_coordinate_basis, classify_stably_cayley, ExceptionalFamily,
    InputFamily, QuotientSpec, SubgroupSide,
};
use quasilat::cohomology::{
    h2_with_path, h_n, restriction_h2, sha2, sha2_with, tate_h2_cyclic, CohomologyBudget,
    H2Path,
};
use quasilat::glattice::{j_gamma, regular_lattice, GLattice};
use quasilat::groups::{MatGroup, Subgroup, DEFAULT_ORDER_CAP};
use quasilat::intlinalg::{
    abs_det, hermite_normal_form, smith_normal_form, FinAbGroup, IntMatrix,
};
use quasilat::rootdata::{transposition, Family, RootSystemSpec};
use quasilat::witnesses::{
    self, default_partition, family_decomposition, so6_basis_check, so6_gamma, so6_lattice,
    DiagramSpec,
};

fn finish(name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("ACCEPTANCE {name}: PASS in {elapsed:.2?} (budget {budget:.0?})");
    assert!(
        elapsed <= budget,
        "{name} exceeded its runtime budget: {elapsed:.2?} > {budget:.0?}"
    );
}

fn klein2() -> MatGroup {
    let a = quasilat::rootdata::sign_flip(2, 0);
    let b = quasilat::rootdata::sign_flip(2, 1);
    MatGroup::close(vec![a, b], 8).unwrap()
}

fn z3xz3() -> MatGroup {
    let mut a = IntMatrix::identity(6);
    let mut b = IntMatrix::identity(6);
    for i in 0..3 {
        for j in 0..3 {
            a[(i, j)] = BigInt::from(0);
            b[(3 + i, 3 + j)] = BigInt::from(0);
        }
    }
    for i in 0..3 {
        a[((i + 1) % 3, i)] = BigInt::from(1);
        b[(3 + (i + 1) % 3, 3 + i)] = BigInt::from(1);
    }
    MatGroup::close(vec![a, b], 16).unwrap()
}

fn cyclic_group(k: usize) -> MatGroup {
    if k == 1 {
        return MatGroup::trivial(1);
    }
    let mut m = IntMatrix::zeros(k, k);
    for i in 0..k {
        m[((i + 1) % k, i)] = BigInt::from(1);
    }
    MatGroup::close(vec![m], 2 * k).unwrap()
}

#[test]
fn criterion_01_sha_of_j_gamma() {
    // Sh(Z/2 x Z/2, J) = Z/2 and Sh(Z/3 x Z/3, J) = Z/3, < 5 s each.
    for (group, p) in [(klein2(), 2u64), (z3xz3(), 3)] {
        let started = Instant::now();
        let j = j_gamma(&group).unwrap();
        let sha = sha2(&group, &j).unwrap();
        assert_eq!(sha.sha, FinAbGroup::cyclic(p));
        finish(
            &format!("criterion-1 (p={p})"),
            started,
            Duration::from_secs(5),
        );
    }
}

#[test]
fn criterion_02_h2_cyclic_vanishing() {
    // H²(Γ_c, J) = 0 for every cyclic subgroup of (Z/p)², p in {2,3}; < 1 s.
    let started = Instant::now();
    for group in [klein2(), z3xz3()] {
        let j = j_gamma(&group).unwrap();
        let cyclics = group.cyclic_subgroups().unwrap();
        assert!(cyclics.iter().any(|c| c.is_trivial()));
        for c in cyclics {
            let restricted = j.restrict(&c).unwrap();
            let h2 = h_n(restricted.group(), &restricted, 2).unwrap();
            assert!(h2.group.is_trivial(), "H² nonzero on a cyclic subgroup");
        }
    }
    finish("criterion-2", started, Duration::from_secs(1));
}

#[test]
fn criterion_03_h3_equals_sha() {
    // H³((Z/p)², Z) = Z/p and equals Sh((Z/p)², J) computed independently;
    // < 30 s.
    let started = Instant::now();
    for (group, p) in [(klein2(), 2u64), (z3xz3(), 3)] {
        let trivial = GLattice::trivial_action(group.clone(), 1).unwrap();
        let h3 = h_n(&group, &trivial, 3).unwrap().group;
        assert_eq!(h3, FinAbGroup::cyclic(p));
        let j = j_gamma(&group).unwrap();
        let sha = sha2(&group, &j).unwrap().sha;
        assert_eq!(sha, h3);
    }
    finish("criterion-3", started, Duration::from_secs(30));
}

#[test]
fn criterion_04_half_sum_family() {
    // For the five listed diagrams the embedding succeeds and
    // Sh(ι(Γ), M) = Z/2; each < 10 s.
    let diagrams: Vec<(&str, Vec<(Family, usize)>)> = vec![
        ("(B1)^3", vec![(Family::B, 1), (Family::B, 1), (Family::B, 1)]),
        (
            "(B1)^4",
            vec![
                (Family::B, 1),
                (Family::B, 1),
                (Family::B, 1),
                (Family::B, 1),
            ],
        ),
        ("B2+B1", vec![(Family::B, 2), (Family::B, 1)]),
        ("D3", vec![(Family::D, 3)]),
        ("D3+B1", vec![(Family::D, 3), (Family::B, 1)]),
    ];
    for (name, parts) in diagrams {
        let started = Instant::now();
        let diagram = DiagramSpec::new(parts).unwrap();
        let partition = default_partition(&diagram).unwrap();
        let dec = family_decomposition(&diagram, &partition).unwrap();
        assert!(dec.j_iso.is_isomorphism());
        let sha = sha2(dec.restricted.group(), &dec.restricted).unwrap();
        assert_eq!(sha.sha, FinAbGroup::cyclic(2), "{name}");
        finish(
            &format!("criterion-4 ({name})"),
            started,
            Duration::from_secs(10),
        );
    }
}

#[test]
fn criterion_05_klein_matrices() {
    // The basis-change certificate reproduces the three printed matrices
    // exactly; < 1 s.
    let started = Instant::now();
    let (lattice, cert) = witnesses::klein_b1_lattice().unwrap();
    assert_eq!(lattice.rank(), 3);
    let (sigma, tau, rho) = witnesses::klein_b1_expected();
    assert_eq!(cert.sigma, sigma);
    assert_eq!(cert.tau, tau);
    assert_eq!(cert.rho, rho);
    assert_eq!(cert.basis_change_det, BigInt::from(1));
    finish("criterion-5", started, Duration::from_secs(1));
}

#[test]
fn criterion_06_so6_family() {
    // For m = 2 and 3: Sh(<a,b>, L) = Z/2 and the basis check passes;
    // < 30 s.
    let started = Instant::now();
    for m in [2usize, 3] {
        let report = so6_basis_check(m).unwrap();
        assert!(report.is_basis, "β is not a basis of L₀ at m = {m}");
        let l = so6_lattice(m).unwrap();
        let (a, b) = so6_gamma(m).unwrap();
        let gamma = MatGroup::close(vec![a, b], 8).unwrap();
        let restricted = l.with_group(gamma.clone()).unwrap();
        let sha = sha2(&gamma, &restricted).unwrap();
        assert_eq!(sha.sha, FinAbGroup::cyclic(2), "m = {m}");
    }
    finish("criterion-6", started, Duration::from_secs(30));
}

#[test]
fn criterion_07_a2_family() {
    // τ-isomorphism verified; weight identification passes; Sh(Γ', Λ₆) = 0
    // for every subgroup of Sym₃ x Sym₃ through the optimized H² path;
    // < 10 min (stretch budget).
    let started = Instant::now();

    let iso = witnesses::sl3_tau_iso(2, &[1, 2]).unwrap();
    assert!(abs_det(&iso.matrix) == BigInt::from(1));

    let report = witnesses::a2m_weight_identification(2).unwrap();
    assert!(report.basis_ok && report.equals_psi_l1 && report.lambda1_ok);
    assert_eq!(report.quotient, FinAbGroup::free(1));

    let lambda6 = witnesses::lambda6_restricted().unwrap();
    let group = lambda6.group().clone();
    group.materialize().unwrap();
    assert_eq!(group.order().unwrap(), 36);
    let budget = CohomologyBudget::default();
    let mut checked = 0usize;
    for sub in group.all_subgroups().unwrap() {
        if sub.order() == 1 {
            continue;
        }
        let restricted = lambda6.restrict(&sub).unwrap();
        let sha = sha2_with(restricted.group(), &restricted, H2Path::Optimized, &budget)
            .unwrap();
        assert!(
            sha.sha.is_trivial(),
            "nonzero Sh on a subgroup of order {}",
            sub.order()
        );
        checked += 1;
    }
    assert!(checked > 10, "subgroup sweep looks too small: {checked}");
    finish("criterion-7", started, Duration::from_secs(600));
}

#[test]
fn criterion_08_a1_exhaustive_sweep() {
    // For m <= 4, over every subspace of F₂^m: verdict ⇔ almost
    // coordinate; S = <(1,1)> decomposes as [SO4]; < 10 s.
    let started = Instant::now();
    let a1 = InputFamily::Root(RootSystemSpec::new(Family::A, 2).unwrap());
    for m in 1..=4usize {
        for v in all_subspaces(2, m) {
            let gens: Vec<Vec<usize>> = v
                .basis_rows()
                .iter()
                .map(|r| r.iter().map(|&x| x as usize).collect())
                .collect();
            let verdict = classify_stably_cayley(&QuotientSpec {
                root: a1,
                m,
                side: SubgroupSide::Character,
                generators: gens,
            })
            .unwrap();
            assert_eq!(
                verdict.stably_cayley,
                almost_coordinate_basis(&v).is_some(),
                "m={m}, rows {:?}",
                v.basis_rows()
            );
            // Decomposition present iff stably Cayley, and its coordinate
            // sets partition {1..m}.
            assert_eq!(verdict.decomposition.is_some(), verdict.stably_cayley);
            if let Some(facs) = &verdict.decomposition {
                let mut covered: Vec<usize> =
                    facs.iter().flat_map(|f| f.coords.iter().copied()).collect();
                covered.sort_unstable();
                assert_eq!(covered, (1..=m).collect::<Vec<_>>());
            }
        }
    }
    let verdict = classify_stably_cayley(&QuotientSpec {
        root: a1,
        m: 2,
        side: SubgroupSide::Character,
        generators: vec![vec![1, 1]],
    })
    .unwrap();
    let dec = verdict.decomposition.unwrap();
    assert_eq!(dec.len(), 1);
    assert_eq!(dec[0].group, "SO4");
    assert_eq!(dec[0].coords, vec![1, 2]);
    finish("criterion-8", started, Duration::from_secs(10));
}

#[test]
fn criterion_09_spot_verdicts() {
    // Spot verdicts from the cited theorem clauses; < 5 s total.
    let started = Instant::now();
    let spec = |root, m, gens: Vec<Vec<usize>>, side| QuotientSpec {
        root,
        m,
        side,
        generators: gens,
    };
    let a = |n| InputFamily::Root(RootSystemSpec::new(Family::A, n).unwrap());
    let b =
        |n| InputFamily::Root(RootSystemSpec::new(Family::B, n).unwrap());
    let c =
        |n| InputFamily::Root(RootSystemSpec::new(Family::C, n).unwrap());
    let d =
        |n| InputFamily::Root(RootSystemSpec::new(Family::D, n).unwrap());
    let g2 = InputFamily::Root(RootSystemSpec::new(Family::G2, 2).unwrap());
    use SubgroupSide::{Center, Character};

    let cases: Vec<(QuotientSpec, bool, &str)> = vec![
        (spec(a(5), 1, vec![], Character), true, "PGL5"),
        (spec(a(5), 1, vec![vec![1]], Character), false, "SL5"),
        (spec(b(3), 1, vec![], Character), true, "SO7"),
        (spec(b(3), 1, vec![vec![1]], Character), false, "Spin7"),
        (spec(b(2), 1, vec![], Character), true, "SO5 (Sp4/mu2)"),
        (spec(c(3), 1, vec![], Character), false, "PSp6"),
        (spec(d(3), 1, vec![vec![2]], Character), true, "SO6"),
        (spec(d(3), 1, vec![vec![1]], Character), false, "SL4 = Spin6"),
        (spec(d(3), 1, vec![], Character), true, "PGL4"),
        (spec(g2, 4, vec![], Character), true, "G2^4"),
        (
            spec(c(3), 2, vec![vec![1, 1]], Center),
            false,
            "C-type with nontrivial C",
        ),
        (
            spec(
                InputFamily::Exceptional(ExceptionalFamily::E6),
                1,
                vec![],
                Character,
            ),
            false,
            "E6-adjoint",
        ),
    ];
    for (q, want, label) in cases {
        let v = classify_stably_cayley(&q).unwrap();
        assert_eq!(v.stably_cayley, want, "{label}");
    }
    finish("criterion-9", started, Duration::from_secs(5));
}

#[test]
fn criterion_10_property_suites() {
    // SNF/HNF identities on 1000 random matrices; bar d∘d = 0; cyclic H²
    // equals the Tate group on cyclic groups of order <= 12 with random
    // lattices of rank <= 4; H¹/H² vanishing on regular lattices for
    // groups of order <= 24; optimized-vs-baseline H² agreement on every
    // instance within the baseline budget; the coordinate-section
    // combinatorics exhaustively for m in {4,5}.  Full suite < 15 min.
    let started = Instant::now();

    // --- Smith/Hermite identities on 1000 random matrices.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let a = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-9i64..=9)));
        let f = smith_normal_form(&a);
        assert_eq!(f.u.mul(&a).mul(&f.v), f.s);
        assert_eq!(abs_det(&f.u), BigInt::from(1));
        assert_eq!(abs_det(&f.v), BigInt::from(1));
        for w in f.invariant_factors.windows(2) {
            assert!((&w[1] % &w[0]).eq(&BigInt::from(0)));
        }
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(u.mul(&a), h);
        assert_eq!(abs_det(&u), BigInt::from(1));
        // Row echelon with positive pivots, entries above reduced.
        let mut last_pivot_col: isize = -1;
        for i in 0..h.rows() {
            let lead = (0..h.cols()).find(|&j| h[(i, j)] != BigInt::from(0));
            if let Some(j) = lead {
                assert!(h[(i, j)] > BigInt::from(0));
                assert!((j as isize) > last_pivot_col, "pivots must move right");
                last_pivot_col = j as isize;
                for i2 in 0..i {
                    assert!(h[(i2, j)] >= BigInt::from(0) && h[(i2, j)] < h[(i, j)]);
                }
            }
        }
    }

    // --- Bar complex: d∘d = 0 on assorted (G, L).
    {
        let g = klein2();
        let j = j_gamma(&g).unwrap();
        quasilat::cohomology::assert_bar_complex(&g, &j, 3).unwrap();
        let c6 = cyclic_group(6);
        let reg = regular_lattice(&c6).unwrap();
        quasilat::cohomology::assert_bar_complex(&c6, &reg, 2).unwrap();
    }

    // --- Cyclic H² equals Tate Ĥ⁰ on orders <= 12, random lattices of
    // rank <= 4; the same loop cross-checks the two H² paths.
    let budget = CohomologyBudget::default();
    for k in 2..=12usize {
        let group = cyclic_group(k);
        let full = Subgroup::full(group.clone()).unwrap();
        for sample in 0..3 {
            let lattice = random_cyclic_lattice(&group, k, &mut rng, sample);
            let h2 = h2_with_path(&group, &lattice, H2Path::CrossCheck, &budget).unwrap();
            let tate = tate_h2_cyclic(&full, &lattice).unwrap();
            assert_eq!(&h2.group, tate.group(), "k = {k}, sample = {sample}");
            // Restriction of every generator to the full subgroup is
            // injective (periodicity consistency).
            if !h2.group.is_trivial() {
                let mut cols = Vec::new();
                for rep in &h2.cocycle_reps {
                    cols.push(restriction_h2(&lattice, rep, &full, &tate).unwrap());
                }
                let f = IntMatrix::from_fn(
                    tate.group().num_generators(),
                    cols.len(),
                    |i, j| cols[j][i].clone(),
                );
                let ker = quasilat::intlinalg::finab_map_kernel(&h2.group, tate.group(), &f)
                    .unwrap();
                assert!(ker.is_trivial());
            }
        }
    }

    // --- Shapiro vanishing: H¹ and H² of regular lattices, |G| <= 24.
    let s3 = MatGroup::close(
        vec![transposition(3, 0, 1), transposition(3, 1, 2)],
        8,
    )
    .unwrap();
    let d4 = MatGroup::close(
        vec![
            IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]),
            IntMatrix::from_rows(&[vec![1, 0], vec![0, -1]]),
        ],
        10,
    )
    .unwrap();
    let a4 = {
        let r = IntMatrix::from_rows(&[
            vec![0, 0, 1, 0],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 0, 1],
        ]);
        let s = IntMatrix::from_rows(&[
            vec![0, 1, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 0],
        ]);
        MatGroup::close(vec![r, s], 16).unwrap()
    };
    let s4 = MatGroup::close(
        vec![
            transposition(4, 0, 1),
            transposition(4, 1, 2),
            transposition(4, 2, 3),
        ],
        32,
    )
    .unwrap();
    let mut shapiro_groups = vec![klein2(), s3, d4, a4, s4];
    for k in [3usize, 4, 6, 8, 12] {
        shapiro_groups.push(cyclic_group(k));
    }
    for g in &shapiro_groups {
        assert!(g.order().unwrap() <= 24);
        let reg = regular_lattice(g).unwrap();
        let h1 = h_n(g, &reg, 1).unwrap();
        assert!(h1.group.is_trivial(), "H¹(G, Z[G]) != 0");
        let h2 = h2_with_path(g, &reg, H2Path::Auto, &budget).unwrap();
        assert!(h2.group.is_trivial(), "H²(G, Z[G]) != 0");
        // Sh order divides the torsion order of H² (trivially here, but
        // the invariant is asserted on a nontrivial case below).
        let sha = sha2(g, &reg).unwrap();
        assert!(sha.sha.is_trivial());
    }
    {
        let g = klein2();
        let j = j_gamma(&g).unwrap();
        let sha = sha2(&g, &j).unwrap();
        let h2_order = sha.ambient_h2.torsion_order();
        let sha_order = sha.sha.torsion_order();
        assert!((&h2_order % &sha_order).eq(&BigInt::from(0)));
    }

    // --- Optimized vs baseline on further small instances.
    {
        let g = klein2();
        for l in [j_gamma(&g).unwrap(), regular_lattice(&g).unwrap()] {
            h2_with_path(&g, &l, H2Path::CrossCheck, &budget).unwrap();
        }
        // The (Z/3)² J lattice: the largest instance the baseline budget
        // admits in this suite.
        let g3 = z3xz3();
        let j3 = j_gamma(&g3).unwrap();
        let res = h2_with_path(&g3, &j3, H2Path::CrossCheck, &budget).unwrap();
        assert_eq!(res.group, FinAbGroup::cyclic(3));
        // Half-sum family and D3-family restrictions.
        let diagram = DiagramSpec::new(vec![
            (Family::B, 1),
            (Family::B, 1),
            (Family::B, 1),
        ])
        .unwrap();
        let partition = default_partition(&diagram).unwrap();
        let dec = family_decomposition(&diagram, &partition).unwrap();
        h2_with_path(
            dec.restricted.group(),
            &dec.restricted,
            H2Path::CrossCheck,
            &budget,
        )
        .unwrap();
        let l = so6_lattice(2).unwrap();
        let (sa, sb) = so6_gamma(2).unwrap();
        let gamma = MatGroup::close(vec![sa, sb], 8).unwrap();
        let restricted = l.with_group(gamma.clone()).unwrap();
        let res = h2_with_path(&gamma, &restricted, H2Path::CrossCheck, &budget).unwrap();
        assert!(!res.group.is_trivial());
        let b2 = MatGroup::close(
            vec![
                transposition(2, 0, 1),
                quasilat::rootdata::sign_flip(2, 1),
            ],
            DEFAULT_ORDER_CAP,
        )
        .unwrap();
        let datum =
            quasilat::rootdata::root_datum(&RootSystemSpec::new(Family::B, 2).unwrap())
                .unwrap();
        let q = datum.q.with_group(b2.clone()).unwrap();
        let p = datum.p.with_group(b2.clone()).unwrap();
        for l in [q, p] {
            h2_with_path(&b2, &l, H2Path::CrossCheck, &budget).unwrap();
        }
    }

    // --- The coordinate-section combinatorics, exhaustive for m in {4,5}:
    // if every proper section V ∩ F_I is almost coordinate then V is the
    // all-ones line or almost coordinate.
    for m in [4usize, 5] {
        for v in all_subspaces(2, m) {
            let mut all_sections_ac = true;
            for mask in 0..(1u32 << m) - 1 {
                let keep: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
                let section = v.intersect_coordinates(&keep).project_to(&keep);
                if almost_coordinate_basis(&section).is_none() {
                    all_sections_ac = false;
                    break;
                }
            }
            if !all_sections_ac {
                continue;
            }
            let all_ones_line =
                v.dim() == 1 && v.basis_rows()[0].iter().all(|&x| x == 1);
            assert!(
                all_ones_line || almost_coordinate_basis(&v).is_some(),
                "m={m}, rows {:?}",
                v.basis_rows()
            );
        }
    }

    finish("criterion-10", started, Duration::from_secs(900));
}

/// A random rank <= 4 lattice over the cyclic group of order k: block
/// permutation cycles of divisor sizes (valid orders), conjugated by a
/// random unimodular matrix.
fn random_cyclic_lattice(
    group: &MatGroup,
    k: usize,
    rng: &mut ChaCha8Rng,
    _sample: usize,
) -> GLattice {
    let divisors: Vec<usize> = (1..=k).filter(|d| k % d == 0).collect();
    let mut sizes = Vec::new();
    let mut total = 0usize;
    while total < 4 {
        let d = divisors[rng.gen_range(0..divisors.len())];
        if total + d > 4 {
            break;
        }
        sizes.push(d);
        total += d;
    }
    if sizes.is_empty() {
        sizes.push(1);
        total = 1;
    }
    let mut base = IntMatrix::zeros(total, total);
    let mut offset = 0;
    for &d in &sizes {
        for i in 0..d {
            base[(offset + (i + 1) % d, offset + i)] = BigInt::from(1);
        }
        offset += d;
    }
    // Random unimodular conjugation by a product of elementary matrices.
    let mut u = IntMatrix::identity(total);
    let mut u_inv = IntMatrix::identity(total);
    if total > 1 {
        for _ in 0..6 {
            let i = rng.gen_range(0..total);
            let mut j = rng.gen_range(0..total);
            while j == i {
                j = rng.gen_range(0..total);
            }
            let q = rng.gen_range(-2i64..=2);
            let mut e = IntMatrix::identity(total);
            e[(i, j)] = BigInt::from(q);
            let mut e_inv = IntMatrix::identity(total);
            e_inv[(i, j)] = BigInt::from(-q);
            u = e.mul(&u);
            u_inv = u_inv.mul(&e_inv);
        }
    }
    let action = u.mul(&base).mul(&u_inv);
    GLattice::from_generator_actions(group.clone(), total, vec![action]).unwrap()
}
