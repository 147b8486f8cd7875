//! First cohomology `H¹(G, M)` and Tate cohomology `Ĥ⁻¹(G, M)` of G-lattices.
//!
//! Both groups are computed as quotients of integer lattices:
//!
//! * `H¹ = Z¹/B¹`, with `Z¹` the 1-cocycles `f(gh) = f(g) + g·f(h)` and `B¹`
//!   the coboundaries `f(g) = g·m − m`;
//! * `Ĥ⁻¹ = Z⁻¹/B⁻¹`, with `Z⁻¹` the kernel of the norm `Σ_g g` and `B⁻¹`
//!   the span of all `(g − 1)·m`.
//!
//! The cocycle system uses every pair of group elements rather than a
//! presentation; groups here are small and fully enumerated.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::lattice::{restrict, GLattice};
use crate::linalg::{cokernel, kernel_basis, ExactSolver, FiniteAbelianGroup, IntMatrix};

/// A cohomology group for each conjugacy class of subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyProfile {
    pub entries: Vec<(Subgroup, FiniteAbelianGroup)>,
}

impl CohomologyProfile {
    pub fn is_trivial(&self) -> bool {
        self.entries.iter().all(|(_, g)| g.is_trivial())
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &(Subgroup, FiniteAbelianGroup)> {
        self.entries.iter().filter(|(_, g)| !g.is_trivial())
    }

    pub fn get(&self, h: &Subgroup) -> Option<&FiniteAbelianGroup> {
        self.entries.iter().find(|(s, _)| s == h).map(|(_, g)| g)
    }
}

#[derive(Serialize)]
struct ProfileEntry<'a> {
    subgroup_order: usize,
    subgroup: &'a [usize],
    group: &'a FiniteAbelianGroup,
}

impl Serialize for CohomologyProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<ProfileEntry> = self
            .entries
            .iter()
            .map(|(h, g)| ProfileEntry {
                subgroup_order: h.order(),
                subgroup: h.members(),
                group: g,
            })
            .collect();
        entries.serialize(s)
    }
}

/// Expresses each column of `gens` in the basis `basis` and returns the
/// quotient `span(basis) / span(gens)`.
fn quotient(basis: &IntMatrix, gens: &IntMatrix, what: &str) -> Result<FiniteAbelianGroup> {
    let k = basis.cols();
    let solver = ExactSolver::new(basis);
    let mut coords = IntMatrix::zeros(k, gens.cols());
    for (j, col) in gens.columns().enumerate() {
        let x = solver.solve(&col).ok_or_else(|| {
            Error::InternalInconsistency(format!("{} generator {} does not lie in the cycle lattice", what, j))
        })?;
        for (i, c) in x.into_iter().enumerate() {
            coords[(i, j)] = c;
        }
    }
    Ok(cokernel(&coords, k))
}

/// `H¹(G, M)` for the full group of `m`.
pub fn h1(m: &GLattice) -> Result<FiniteAbelianGroup> {
    let g = m.group();
    let order = g.order();
    let n = m.rank();
    if order == 1 || n == 0 {
        return Ok(FiniteAbelianGroup::trivial());
    }
    // unknowns: f(g) for g = 1..order (f(identity) = 0 is forced)
    let unknowns = (order - 1) * n;
    let block = |e: usize| (e - 1) * n;
    let pairs = (order - 1) * (order - 1);
    let mut system = IntMatrix::zeros(pairs * n, unknowns);
    let mut row = 0;
    for a in 1..order {
        for b in 1..order {
            // f(a) + a·f(b) − f(ab) = 0
            let act = m.action(a);
            for i in 0..n {
                system[(row + i, block(a) + i)] += 1;
                for j in 0..n {
                    system[(row + i, block(b) + j)] += &act[(i, j)];
                }
                let ab = g.mul(a, b);
                if ab != 0 {
                    system[(row + i, block(ab) + i)] -= 1;
                }
            }
            row += n;
        }
    }
    let cocycles = kernel_basis(&system);

    // coboundaries of the standard basis vectors: f(g) = g·e_j − e_j
    let mut coboundaries = IntMatrix::zeros(unknowns, n);
    for e in 1..order {
        let act = m.action(e);
        for i in 0..n {
            for j in 0..n {
                let mut v = act[(i, j)].clone();
                if i == j {
                    v -= 1;
                }
                coboundaries[(block(e) + i, j)] = v;
            }
        }
    }
    quotient(&cocycles, &coboundaries, "coboundary")
}

/// The norm endomorphism `Σ_g action(g)`.
pub fn norm_map(m: &GLattice) -> IntMatrix {
    m.actions()
        .iter()
        .fold(IntMatrix::zeros(m.rank(), m.rank()), |acc, a| &acc + a)
}

/// Tate cohomology `Ĥ⁻¹(G, M)` for the full group of `m`.
pub fn tate_minus1(m: &GLattice) -> Result<FiniteAbelianGroup> {
    let n = m.rank();
    if n == 0 {
        return Ok(FiniteAbelianGroup::trivial());
    }
    let cycles = kernel_basis(&norm_map(m));
    let id = IntMatrix::identity(n);
    let boundaries = m
        .actions()
        .iter()
        .skip(1)
        .fold(IntMatrix::zeros(n, 0), |acc, a| acc.hstack(&(a - &id)));
    quotient(&cycles, &boundaries, "norm-boundary")
}

pub fn h1_at(m: &GLattice, h: &Subgroup) -> Result<FiniteAbelianGroup> {
    h1(&restrict(m, h))
}

pub fn tate_minus1_at(m: &GLattice, h: &Subgroup) -> Result<FiniteAbelianGroup> {
    tate_minus1(&restrict(m, h))
}

fn profile(m: &GLattice, f: fn(&GLattice) -> Result<FiniteAbelianGroup>) -> Result<CohomologyProfile> {
    let entries = m
        .group()
        .class_representatives()
        .into_iter()
        .map(|h| {
            let value = f(&restrict(m, &h))?;
            Ok((h, value))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CohomologyProfile { entries })
}

/// `H¹(H, M)` for one subgroup `H` per conjugacy class.
pub fn h1_profile(m: &GLattice) -> Result<CohomologyProfile> {
    profile(m, h1)
}

/// `Ĥ⁻¹(H, M)` for one subgroup `H` per conjugacy class.
pub fn tate_minus1_profile(m: &GLattice) -> Result<CohomologyProfile> {
    profile(m, tate_minus1)
}

/// Order of the subgroup as an integer, for annihilation checks.
pub fn subgroup_order(h: &Subgroup) -> BigInt {
    BigInt::from(h.order())
}
