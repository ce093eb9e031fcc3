//! Regression lock for the root-datum coordinates: simple-reflection
//! matrices, root and weight bases, quotient structure, all rendered to a
//! canonical text and compared against the committed golden file.  The
//! mathematical correctness of these values is covered by the unit and
//! acceptance suites; this file guards against silent drift of the
//! conventions other modules depend on.

use quasilat::rootdata::{root_datum, weyl_generators, Family, RootSystemSpec};

fn render() -> String {
    let mut out = String::new();
    let mut specs = Vec::new();
    for n in 2..=6 {
        specs.push(RootSystemSpec::new(Family::A, n).unwrap());
    }
    for n in 1..=6 {
        specs.push(RootSystemSpec::new(Family::B, n).unwrap());
        specs.push(RootSystemSpec::new(Family::C, n).unwrap());
    }
    for n in 3..=6 {
        specs.push(RootSystemSpec::new(Family::D, n).unwrap());
    }
    specs.push(RootSystemSpec::new(Family::G2, 2).unwrap());

    for spec in specs {
        let datum = root_datum(&spec).unwrap();
        out.push_str(&format!("== {:?} rank {}\n", spec.family, spec.rank));
        for (k, g) in weyl_generators(&spec).iter().enumerate() {
            out.push_str(&format!("s{}:\n{}\n", k + 1, g));
        }
        out.push_str(&format!("den: {}\n", datum.den()));
        out.push_str(&format!("Q:\n{}\n", datum.q_basis()));
        out.push_str(&format!("P:\n{}\n", datum.p_basis()));
        out.push_str(&format!("P/Q: {}\n", datum.quotient.group()));
        for inter in &datum.intermediates {
            out.push_str(&format!(
                "intermediate {:?} index {}\n",
                inter.subgroup, inter.index_in_p
            ));
        }
        out.push('\n');
    }
    out
}

#[test]
fn root_datum_coordinates_are_locked() {
    if std::env::var("GOLDEN_REGEN").is_ok() {
        std::fs::write(
            concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/rootdata.golden"),
            render(),
        )
        .unwrap();
        return;
    }
    let expected = include_str!("golden/rootdata.golden");
    let rendered = render();
    if rendered != expected {
        // Point at the first differing line to make drift easy to read.
        for (i, (a, b)) in rendered.lines().zip(expected.lines()).enumerate() {
            assert_eq!(a, b, "first drift at line {}", i + 1);
        }
        assert_eq!(rendered.len(), expected.len(), "length drift");
    }
}
