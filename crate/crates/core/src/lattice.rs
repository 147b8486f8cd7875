//! G-lattices: `ℤⁿ` with an action of a finite matrix group, and the standard
//! constructions on them.
//!
//! Matrices act on column vectors from the left, so `m^g` is
//! `action(g) · m` and `action(g)·action(h) = action(gh)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{FiniteMatrixGroup, Subgroup};
use crate::linalg::{kernel_basis, ExactSolver, IntMatrix};

#[derive(Clone, Debug)]
pub struct GLattice {
    group: Arc<FiniteMatrixGroup>,
    rank: usize,
    action: Vec<IntMatrix>,
}

impl PartialEq for GLattice {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.rank == other.rank && self.action == other.action
    }
}

pub fn same_group(a: &Arc<FiniteMatrixGroup>, b: &Arc<FiniteMatrixGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GLattice {
    /// Wraps an explicit action, one matrix per group element, after checking
    /// that it is a homomorphism into `GL(rank, ℤ)`.
    pub fn new(group: Arc<FiniteMatrixGroup>, rank: usize, action: Vec<IntMatrix>) -> Result<Self> {
        let lattice = GLattice { group, rank, action };
        lattice.validate()?;
        Ok(lattice)
    }

    pub(crate) fn new_unchecked(group: Arc<FiniteMatrixGroup>, rank: usize, action: Vec<IntMatrix>) -> Self {
        debug_assert_eq!(action.len(), group.order());
        GLattice { group, rank, action }
    }

    /// The defining representation of a matrix group.
    pub fn natural(group: Arc<FiniteMatrixGroup>) -> Self {
        let action = group.elements().to_vec();
        let rank = group.dim();
        GLattice { group, rank, action }
    }

    /// `ℤ^rank` with trivial action.
    pub fn trivial(group: Arc<FiniteMatrixGroup>, rank: usize) -> Self {
        let action = vec![IntMatrix::identity(rank); group.order()];
        GLattice { group, rank, action }
    }

    /// Extends an assignment of matrices to the group generators (in the order
    /// of [`FiniteMatrixGroup::generators`]) to the whole group and validates it.
    pub fn from_generator_images(group: Arc<FiniteMatrixGroup>, rank: usize, images: &[IntMatrix]) -> Result<Self> {
        let gens = group.generator_indices().to_vec();
        if images.len() != gens.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} generator images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        let mut action: Vec<Option<IntMatrix>> = vec![None; group.order()];
        action[0] = Some(IntMatrix::identity(rank));
        let mut queue = vec![0];
        while let Some(x) = queue.pop() {
            for (k, &g) in gens.iter().enumerate() {
                let y = group.mul(x, g);
                if action[y].is_none() {
                    let m = action[x].as_ref().unwrap();
                    if images[k].rows() != rank || images[k].cols() != rank {
                        return Err(Error::DimensionMismatch(format!("generator image {} is not {}x{}", k, rank, rank)));
                    }
                    action[y] = Some(m * &images[k]);
                    queue.push(y);
                }
            }
        }
        let action = action.into_iter().map(|m| m.expect("generators span the group")).collect();
        GLattice::new(group, rank, action)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        if self.action.len() != g.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for a group of order {}",
                self.action.len(),
                g.order()
            )));
        }
        for (i, a) in self.action.iter().enumerate() {
            if a.rows() != self.rank || a.cols() != self.rank {
                return Err(Error::DimensionMismatch(format!("action matrix {} is not {}x{}", i, self.rank, self.rank)));
            }
        }
        if !self.action[0].is_identity() {
            return Err(Error::Validation {
                field: "action".into(),
                message: "identity element does not act trivially".into(),
            });
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if &self.action[a] * &self.action[b] != self.action[g.mul(a, b)] {
                    return Err(Error::Validation {
                        field: "action".into(),
                        message: format!("action is not a homomorphism at elements ({}, {})", a, b),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn group(&self) -> &Arc<FiniteMatrixGroup> {
        &self.group
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.action
    }

    /// Action matrices of the group generators.
    pub fn generator_actions(&self) -> Vec<IntMatrix> {
        self.group
            .generator_indices()
            .iter()
            .map(|&g| self.action[g].clone())
            .collect()
    }

    /// True when every action matrix is a permutation matrix.
    pub fn is_permutation_basis(&self) -> bool {
        self.action.iter().all(is_permutation_matrix)
    }

    fn check_same_group(&self, other: &GLattice) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }
}

pub fn is_permutation_matrix(m: &IntMatrix) -> bool {
    if !m.is_square() {
        return false;
    }
    let n = m.rows();
    let ok_rows = (0..n).all(|i| {
        let row = m.row(i);
        row.iter().filter(|x| x.is_one()).count() == 1 && row.iter().all(|x| x.is_zero() || x.is_one())
    });
    ok_rows && (0..n).all(|j| (0..n).filter(|&i| m[(i, j)].is_one()).count() == 1)
}

/// `ℤ[G/H]`: basis indexed by the left cosets of `H` (ordered by their
/// minimal element), with `G` permuting them by left translation.
pub fn coset_lattice(group: &Arc<FiniteMatrixGroup>, h: &Subgroup) -> GLattice {
    let cosets = group.left_cosets(h);
    let mut coset_of = vec![0; group.order()];
    for (c, members) in cosets.iter().enumerate() {
        for &x in members {
            coset_of[x] = c;
        }
    }
    let rank = cosets.len();
    let action = (0..group.order())
        .map(|g| {
            let mut m = IntMatrix::zeros(rank, rank);
            for (c, members) in cosets.iter().enumerate() {
                m[(coset_of[group.mul(g, members[0])], c)] = BigInt::one();
            }
            m
        })
        .collect();
    GLattice::new_unchecked(group.clone(), rank, action)
}

/// Direct sum of permutation lattices `⊕ ℤ[G/Hᵢ]`.
pub fn permutation_lattice(group: &Arc<FiniteMatrixGroup>, summands: &[Subgroup]) -> GLattice {
    summands.iter().fold(GLattice::trivial(group.clone(), 0), |acc, h| {
        direct_sum(&acc, &coset_lattice(group, h)).expect("same group")
    })
}

pub fn direct_sum(m: &GLattice, n: &GLattice) -> Result<GLattice> {
    m.check_same_group(n)?;
    let action = m.action.iter().zip(&n.action).map(|(a, b)| a.block_diag(b)).collect();
    Ok(GLattice::new_unchecked(m.group.clone(), m.rank + n.rank, action))
}

/// The dual lattice `Hom(M, ℤ)`: `g` acts by the transpose of `action(g⁻¹)`.
pub fn dual(m: &GLattice) -> GLattice {
    let action = (0..m.group.order())
        .map(|g| m.action[m.group.inverse(g)].transpose())
        .collect();
    GLattice::new_unchecked(m.group.clone(), m.rank, action)
}

/// `M` viewed as an `H`-lattice, with `H` as a standalone group.
pub fn restrict(m: &GLattice, h: &Subgroup) -> GLattice {
    let sub = Arc::new(m.group.subgroup_as_group(h));
    let action = h.members().iter().map(|&i| m.action[i].clone()).collect();
    GLattice::new_unchecked(sub, m.rank, action)
}

/// Hermite-canonical basis (columns) of `M^H = {m : h·m = m for all h ∈ H}`.
pub fn fixed_sublattice(m: &GLattice, h: &Subgroup) -> IntMatrix {
    let id = IntMatrix::identity(m.rank);
    let blocks: Vec<IntMatrix> = h
        .members()
        .iter()
        .filter(|&&g| g != 0)
        .map(|&g| &m.action[g] - &id)
        .collect();
    kernel_basis(&IntMatrix::vstack_all(&blocks, m.rank))
}

/// ℤ-basis of `Hom_G(M, N)`: matrices `X` (rank N × rank M) with
/// `X·action_M(g) = action_N(g)·X` for every generator `g`.
pub fn equivariant_homs(m: &GLattice, n: &GLattice) -> Result<Vec<IntMatrix>> {
    m.check_same_group(n)?;
    let (rm, rn) = (m.rank, n.rank);
    let unknowns = rm * rn;
    let gens = m.group.generator_indices();
    let mut system = IntMatrix::zeros(gens.len() * unknowns, unknowns);
    for (k, &g) in gens.iter().enumerate() {
        let (am, an) = (&m.action[g], &n.action[g]);
        for i in 0..rn {
            for j in 0..rm {
                let row = k * unknowns + i * rm + j;
                // (X·A_M)_{ij} = Σ_l x_{il} A_M[l][j]
                for l in 0..rm {
                    system[(row, i * rm + l)] += &am[(l, j)];
                }
                // (A_N·X)_{ij} = Σ_l A_N[i][l] x_{lj}
                for l in 0..rn {
                    system[(row, l * rm + j)] -= &an[(i, l)];
                }
            }
        }
    }
    let kernel = kernel_basis(&system);
    Ok(kernel
        .columns()
        .map(|c| IntMatrix::from_vec(rn, rm, c))
        .collect())
}

/// True when `x` intertwines the two actions on every group element.
pub fn is_equivariant(x: &IntMatrix, source: &GLattice, target: &GLattice) -> bool {
    same_group(&source.group, &target.group)
        && x.rows() == target.rank
        && x.cols() == source.rank
        && (0..source.group.order()).all(|g| (x * &source.action[g]) == (&target.action[g] * x))
}

/// The `G`-stable sublattice spanned by the columns of `basis` (which must be
/// linearly independent and span an invariant sublattice), with its induced action.
pub fn induced_sublattice(m: &GLattice, basis: &IntMatrix) -> Result<GLattice> {
    let k = basis.cols();
    let solver = ExactSolver::new(basis);
    let mut action = Vec::with_capacity(m.group.order());
    for g in 0..m.group.order() {
        let image = &m.action[g] * basis;
        let mut a = IntMatrix::zeros(k, k);
        for j in 0..k {
            let coords = solver.solve(&image.column(j)).ok_or_else(|| {
                Error::InternalInconsistency(format!("sublattice is not stable under element {}", g))
            })?;
            for (i, c) in coords.into_iter().enumerate() {
                a[(i, j)] = c;
            }
        }
        action.push(a);
    }
    GLattice::new(m.group.clone(), k, action)
}
