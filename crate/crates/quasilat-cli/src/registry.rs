//! Named groups, lattices and witness families exposed on the command
//! line.  References take the form `kind:name`, e.g. `J:klein2`,
//! `perm:regular-of-S3`, `Q:A2`, `m-family:B1^3`, `so6-family:m=2`.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use quasilat::glattice::{j_gamma, regular_lattice, GLattice};
use quasilat::groups::{MatGroup, DEFAULT_ORDER_CAP};
use quasilat::intlinalg::IntMatrix;
use quasilat::rootdata::{self, Family, RootSystemSpec};
use quasilat::witnesses::{
    self, default_partition, family_lattice_m, gamma_embedding, DiagramSpec,
};

/// A resolved lattice plus any named elements usable with `--subgroup`.
pub struct ResolvedLattice {
    pub lattice: GLattice,
    pub named_elements: BTreeMap<String, IntMatrix>,
    pub description: String,
}

pub fn named_group(name: &str) -> Result<MatGroup> {
    match name {
        "klein2" => {
            let a = sign(2, 0);
            let b = sign(2, 1);
            Ok(MatGroup::close(vec![a, b], 8)?)
        }
        "z3xz3" => {
            let a = block_cycle(3, 0);
            let b = block_cycle(3, 1);
            Ok(MatGroup::close(vec![a, b], 16)?)
        }
        "S3" => {
            let s1 = rootdata::transposition(3, 0, 1);
            let s2 = rootdata::transposition(3, 1, 2);
            Ok(MatGroup::close(vec![s1, s2], 8)?)
        }
        "S3xS3" => {
            let gens = vec![
                rootdata::transposition(6, 0, 1),
                rootdata::transposition(6, 1, 2),
                rootdata::transposition(6, 3, 4),
                rootdata::transposition(6, 4, 5),
            ];
            Ok(MatGroup::close(gens, 64)?)
        }
        other => bail!("unknown group {other:?}; known: klein2, z3xz3, S3, S3xS3"),
    }
}

fn sign(n: usize, i: usize) -> IntMatrix {
    rootdata::sign_flip(n, i)
}

/// (Z/3)^2 generator: a 3-cycle on one block of a 6-dimensional space.
fn block_cycle(p: usize, block: usize) -> IntMatrix {
    let n = 2 * p;
    let mut m = IntMatrix::identity(n);
    let base = block * p;
    for i in 0..p {
        for j in 0..p {
            m[(base + i, base + j)] = num_bigint::BigInt::from(0);
        }
    }
    for i in 0..p {
        m[(base + (i + 1) % p, base + i)] = num_bigint::BigInt::from(1);
    }
    m
}

fn parse_family(tag: &str) -> Result<Family> {
    Ok(match tag {
        "A" => Family::A,
        "B" => Family::B,
        "C" => Family::C,
        "D" => Family::D,
        "G2" => Family::G2,
        other => bail!("unknown family {other:?}"),
    })
}

fn parse_root_spec(name: &str) -> Result<RootSystemSpec> {
    // e.g. "A2" (meaning the A2 root system, i.e. family A with n = 3),
    // "B3", "D3", "G2".  For family A the numeral is the subscript, so we
    // translate to the crate's n = subscript + 1 convention.
    let (fam, num) = name.split_at(1);
    if name == "G2" {
        return Ok(RootSystemSpec::new(Family::G2, 2)?);
    }
    let family = parse_family(fam)?;
    let sub: usize = num.parse().with_context(|| format!("bad rank in {name:?}"))?;
    let rank = if family == Family::A { sub + 1 } else { sub };
    Ok(RootSystemSpec::new(family, rank)?)
}

fn parse_diagram(name: &str) -> Result<DiagramSpec> {
    // e.g. "B1^3", "B2+B1", "D3+B1".
    let mut comps = Vec::new();
    for part in name.split('+') {
        let (base, reps) = match part.split_once('^') {
            Some((b, r)) => (b, r.parse::<usize>().context("bad repeat count")?),
            None => (part, 1),
        };
        let spec = parse_root_spec(base)?;
        for _ in 0..reps {
            comps.push((spec.family, spec.rank));
        }
    }
    Ok(DiagramSpec::new(comps)?)
}

pub fn resolve_lattice(reference: &str) -> Result<ResolvedLattice> {
    let (kind, name) = reference.split_once(':').unwrap_or((reference, ""));
    match kind {
        "J" => {
            let group = named_group(name)?;
            Ok(ResolvedLattice {
                lattice: j_gamma(&group)?,
                named_elements: BTreeMap::new(),
                description: format!("J lattice of group {name}"),
            })
        }
        "perm" => match name {
            "regular-of-S3" => {
                let group = named_group("S3")?;
                Ok(ResolvedLattice {
                    lattice: regular_lattice(&group)?,
                    named_elements: BTreeMap::new(),
                    description: "regular permutation lattice of S3".into(),
                })
            }
            other => bail!("unknown permutation lattice {other:?}"),
        },
        "Q" | "P" | "M" => {
            let spec = parse_root_spec(name)?;
            let datum = rootdata::root_datum(&spec)?;
            let lattice = match kind {
                "Q" => datum.q,
                "P" => datum.p,
                _ => rootdata::so_character_lattice(&spec)?.lattice,
            };
            Ok(ResolvedLattice {
                lattice,
                named_elements: BTreeMap::new(),
                description: format!("{kind} lattice of {name}"),
            })
        }
        "m-family" => {
            let diagram = parse_diagram(name)?;
            let lattice = family_lattice_m(&diagram)?;
            // The Klein embedding needs total rank >= 3 and excludes the
            // lone D4 diagram; those lattices still resolve, just without
            // named involutions.
            let mut named = BTreeMap::new();
            if let Ok(partition) = default_partition(&diagram) {
                let imgs = gamma_embedding(&diagram, &partition)?;
                named.insert("gamma1".to_string(), imgs[0].clone());
                named.insert("gamma2".to_string(), imgs[1].clone());
                named.insert("gamma3".to_string(), imgs[2].clone());
            }
            Ok(ResolvedLattice {
                lattice,
                named_elements: named,
                description: format!("half-sum family lattice over W({name})"),
            })
        }
        "klein-b1" => {
            let (lattice, _cert) = witnesses::klein_b1_lattice()?;
            Ok(ResolvedLattice {
                lattice,
                named_elements: BTreeMap::new(),
                description: "rank-3 even-sum lattice over (Z/2)^3".into(),
            })
        }
        "so6-family" => {
            let m = parse_m(name)?;
            let lattice = witnesses::so6_lattice(m)?;
            let (a, b) = witnesses::so6_gamma(m)?;
            let mut named = BTreeMap::new();
            named.insert("a".to_string(), a);
            named.insert("b".to_string(), b);
            Ok(ResolvedLattice {
                lattice,
                named_elements: named,
                description: format!("D3^{m} family lattice"),
            })
        }
        "sl3-family" => {
            // name: "m=2,a=11" with a digits in {1,2}.
            let mut m = None;
            let mut avec = None;
            for part in name.split(',') {
                if let Some(v) = part.strip_prefix("m=") {
                    m = Some(v.parse::<usize>().context("bad m")?);
                } else if let Some(v) = part.strip_prefix("a=") {
                    avec = Some(
                        v.chars()
                            .map(|c| c.to_digit(10).map(|d| d as usize))
                            .collect::<Option<Vec<usize>>>()
                            .ok_or_else(|| anyhow!("bad twist vector {v:?}"))?,
                    );
                }
            }
            let m = m.ok_or_else(|| anyhow!("sl3-family needs m=<count>"))?;
            let a = avec.unwrap_or_else(|| vec![1; m]);
            Ok(ResolvedLattice {
                lattice: witnesses::sl3_lattice(m, &a)?,
                named_elements: BTreeMap::new(),
                description: format!("A2^{m} family lattice, twist {a:?}"),
            })
        }
        "lambda6" => Ok(ResolvedLattice {
            lattice: witnesses::lambda6_restricted()?,
            named_elements: BTreeMap::new(),
            description: "A5 weight lattice over S3 x S3".into(),
        }),
        "file" => {
            let text = std::fs::read_to_string(name)
                .with_context(|| format!("reading lattice file {name:?}"))?;
            let doc: quasilat::glattice::GLatticeDoc =
                serde_json::from_str(&text).context("parsing lattice document")?;
            Ok(ResolvedLattice {
                lattice: GLattice::from_doc(&doc)?,
                named_elements: BTreeMap::new(),
                description: format!("lattice from {name}"),
            })
        }
        other => bail!(
            "unknown lattice kind {other:?}; known: J, perm, Q, P, M, m-family, \
             klein-b1, so6-family, sl3-family, lambda6, file"
        ),
    }
}

fn parse_m(name: &str) -> Result<usize> {
    name.strip_prefix("m=")
        .ok_or_else(|| anyhow!("expected m=<count>, got {name:?}"))?
        .parse()
        .context("bad m")
}

/// Build the subgroup-restricted lattice for `--subgroup` element names.
pub fn restrict_to_named_subgroup(
    resolved: &ResolvedLattice,
    names: &[String],
) -> Result<GLattice> {
    let mut mats = Vec::new();
    for n in names {
        let m = resolved
            .named_elements
            .get(n)
            .ok_or_else(|| {
                anyhow!(
                    "unknown element {n:?}; this lattice provides {:?}",
                    resolved.named_elements.keys().collect::<Vec<_>>()
                )
            })?
            .clone();
        mats.push(m);
    }
    let subgroup = MatGroup::close(mats, DEFAULT_ORDER_CAP)?;
    if resolved.lattice.ambient().is_some() {
        Ok(resolved.lattice.with_group(subgroup)?)
    } else {
        let parent = resolved.lattice.group().clone();
        let sub = parent.subgroup_generated(subgroup.elements()?)?;
        Ok(resolved.lattice.restrict(&sub)?)
    }
}

/// View a lattice through a different acting group: by re-basing the
/// ambient action for ambient-backed lattices, or by restricting to the
/// corresponding subgroup otherwise.
pub fn act_through_group(
    lattice: &GLattice,
    group: MatGroup,
) -> Result<GLattice> {
    if lattice.ambient().is_some() {
        Ok(lattice.with_group(group)?)
    } else {
        let parent = lattice.group().clone();
        group.materialize()?;
        let elems: Vec<IntMatrix> = group.elements()?.to_vec();
        let sub = parent.subgroup_generated(&elems)?;
        Ok(lattice.restrict(&sub)?)
    }
}
