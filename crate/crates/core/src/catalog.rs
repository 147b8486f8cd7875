//! Built-in tori and their character lattices.

use std::sync::Arc;

use crate::classify::{RationalityLevel, RationalityReport};
use crate::error::{Error, Result};
use crate::group::{FiniteMatrixGroup, DEFAULT_ORDER_CAP};
use crate::lattice::GLattice;
use crate::linalg::IntMatrix;

pub const NAMES: [&str; 5] = ["split_1", "norm_one_C2", "weil_restriction_C2", "norm_one_V4", "sign_rank1"];

/// What a fresh rationality run must reproduce: the level and the
/// nonzero `H¹(H, F)` entries as `(|H|, group)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedReport {
    pub level: RationalityLevel,
    pub obstructions: Vec<(usize, &'static str)>,
}

impl ExpectedReport {
    pub fn matches(&self, report: &RationalityReport) -> bool {
        use crate::classify::Fact;
        let found: Vec<(usize, String)> = report
            .justification
            .iter()
            .filter_map(|f| match f {
                Fact::Cohomology { subgroup, value, .. } => Some((subgroup.order(), value.to_string())),
                _ => None,
            })
            .collect();
        report.level == self.level
            && found.len() == self.obstructions.len()
            && found.iter().zip(&self.obstructions).all(|(a, b)| a.0 == b.0 && a.1 == b.1)
    }
}

#[derive(Clone, Debug)]
pub struct TorusDescriptor {
    pub name: &'static str,
    pub narrative: &'static str,
    pub character_lattice: GLattice,
    pub expected_report: ExpectedReport,
}

fn natural(dim: usize, generators: &[IntMatrix]) -> GLattice {
    let g = FiniteMatrixGroup::close(dim, generators, DEFAULT_ORDER_CAP).expect("catalog generators are valid");
    GLattice::natural(Arc::new(g))
}

pub fn catalog_get(name: &str) -> Result<TorusDescriptor> {
    let swap = || IntMatrix::from_rows(&[[0, 1], [1, 0]]);
    let sign = || IntMatrix::from_rows(&[[-1]]);
    let d = match name {
        "split_1" => TorusDescriptor {
            name: "split_1",
            narrative: "Split torus G_m over R. Splitting field R, Galois group trivial, character lattice Z.",
            character_lattice: natural(1, &[]),
            expected_report: ExpectedReport { level: RationalityLevel::Rational, obstructions: vec![] },
        },
        "norm_one_C2" => TorusDescriptor {
            name: "norm_one_C2",
            narrative: "Norm-one torus of C/R, the circle x^2 + y^2 = 1. \
                        Complex conjugation inverts the character z, so sigma acts on Z by -1.",
            character_lattice: natural(1, &[sign()]),
            expected_report: ExpectedReport { level: RationalityLevel::StablyRational, obstructions: vec![] },
        },
        "weil_restriction_C2" => TorusDescriptor {
            name: "weil_restriction_C2",
            narrative: "Weil restriction of G_m from C to R, the torus x^2 + y^2 != 0 in (x, y). \
                        Conjugation swaps the characters z and w = conj(z).",
            character_lattice: natural(2, &[swap()]),
            expected_report: ExpectedReport { level: RationalityLevel::Rational, obstructions: vec![] },
        },
        "norm_one_V4" => TorusDescriptor {
            name: "norm_one_V4",
            narrative: "Norm-one torus of a biquadratic extension K/k with group V4 = <a, b>. \
                        Lattice Z[V4]/(norm) in the basis of the images of 1, a, b.",
            character_lattice: natural(
                3,
                &[
                    IntMatrix::from_rows(&[[0, 1, -1], [1, 0, -1], [0, 0, -1]]),
                    IntMatrix::from_rows(&[[0, -1, 1], [0, -1, 0], [1, -1, 0]]),
                ],
            ),
            expected_report: ExpectedReport {
                level: RationalityLevel::NotStablyRational,
                obstructions: vec![(4, "Z/2")],
            },
        },
        "sign_rank1" => TorusDescriptor {
            name: "sign_rank1",
            narrative: "Z with the sign action of C2; same lattice as norm_one_C2.",
            character_lattice: natural(1, &[sign()]),
            expected_report: ExpectedReport { level: RationalityLevel::StablyRational, obstructions: vec![] },
        },
        other => return Err(Error::UnknownName(other.to_string())),
    };
    Ok(d)
}

pub fn list() -> Vec<TorusDescriptor> {
    NAMES.iter().map(|n| catalog_get(n).expect("listed")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries() {
        let w = catalog_get("weil_restriction_C2").unwrap();
        assert_eq!(w.character_lattice.generator_actions(), vec![IntMatrix::from_rows(&[[0, 1], [1, 0]])]);
        let s = catalog_get("split_1").unwrap();
        assert_eq!(s.character_lattice.group().order(), 1);
        assert_eq!(s.character_lattice.rank(), 1);
        assert!(matches!(catalog_get("nope"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn v4_generators_are_commuting_involutions() {
        let m = catalog_get("norm_one_V4").unwrap().character_lattice;
        let gens = m.group().generators().to_vec();
        assert_eq!(gens.len(), 2);
        let (a, b) = (&gens[0], &gens[1]);
        assert!((a * a).is_identity());
        assert!((b * b).is_identity());
        assert_eq!(a * b, b * a);
        assert_eq!(m.group().order(), 4);
    }
}
