//! Isomorphism testing of G-lattices: an invariant cascade that can refute,
//! followed by a bounded search for a unimodular equivariant map.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, One};
use serde::Serialize;

use crate::cohomology::{h1_profile, tate_minus1_profile};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::lattice::{equivariant_homs, fixed_sublattice, same_group, GLattice};
use crate::linalg::{FiniteAbelianGroup, IntMatrix};
use crate::group::FiniteMatrixGroup;

/// Default number of coefficient vectors tried by one isomorphism search.
pub const DEFAULT_MAX_CANDIDATES: u64 = 200_000;

/// A computable invariant on which two lattices differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    Rank { left: usize, right: usize },
    FixedRank { subgroup: Subgroup, left: usize, right: usize },
    Tate { subgroup: Subgroup, left: FiniteAbelianGroup, right: FiniteAbelianGroup },
    H1 { subgroup: Subgroup, left: FiniteAbelianGroup, right: FiniteAbelianGroup },
    /// `rank Hom_G(M, N) ≠ rank End_G(M)`, impossible for isomorphic lattices.
    HomRank { endomorphisms: usize, homomorphisms: usize },
}

impl std::fmt::Display for Obstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Obstruction::Rank { left, right } => write!(f, "rank {} vs {}", left, right),
            Obstruction::FixedRank { subgroup, left, right } => write!(
                f,
                "fixed sublattice rank under subgroup {:?} (order {}): {} vs {}",
                subgroup.members(),
                subgroup.order(),
                left,
                right
            ),
            Obstruction::Tate { subgroup, left, right } => write!(
                f,
                "Tate H^-1 at subgroup {:?} (order {}): {} vs {}",
                subgroup.members(),
                subgroup.order(),
                left,
                right
            ),
            Obstruction::H1 { subgroup, left, right } => write!(
                f,
                "H^1 at subgroup {:?} (order {}): {} vs {}",
                subgroup.members(),
                subgroup.order(),
                left,
                right
            ),
            Obstruction::HomRank { endomorphisms, homomorphisms } => write!(
                f,
                "equivariant endomorphism rank {} vs homomorphism rank {}",
                endomorphisms, homomorphisms
            ),
        }
    }
}

impl Serialize for Obstruction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isomorphism {
    /// Unimodular `X` with `X·action_M(g) = action_N(g)·X`.
    Yes(IntMatrix),
    No(Obstruction),
    /// The bounded search found nothing and no invariant separates.
    Unknown { coeff_bound: usize, candidates_tried: u64 },
}

/// Shared cap on the number of candidate maps examined.
#[derive(Clone, Debug)]
pub struct SearchBudget {
    remaining: u64,
    spent: u64,
    exhausted: bool,
}

impl SearchBudget {
    pub fn new(max_candidates: u64) -> Self {
        SearchBudget {
            remaining: max_candidates,
            spent: 0,
            exhausted: false,
        }
    }

    pub(crate) fn take(&mut self) -> bool {
        if self.remaining == 0 {
            self.exhausted = true;
            return false;
        }
        self.remaining -= 1;
        self.spent += 1;
        true
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted
    }
}

/// Invariants compared by the refutation cascade, one entry per conjugacy
/// class of subgroups.
#[derive(Clone, Debug)]
pub struct LatticeInvariants {
    pub rank: usize,
    pub fixed_ranks: Vec<usize>,
    pub tate: Vec<FiniteAbelianGroup>,
    pub h1: Vec<FiniteAbelianGroup>,
}

impl LatticeInvariants {
    pub fn of(m: &GLattice) -> Result<Self> {
        let reps = m.group().class_representatives();
        let fixed_ranks = reps.iter().map(|h| fixed_sublattice(m, h).cols()).collect();
        let tate = tate_minus1_profile(m)?.entries.into_iter().map(|(_, g)| g).collect();
        let h1 = h1_profile(m)?.entries.into_iter().map(|(_, g)| g).collect();
        Ok(LatticeInvariants {
            rank: m.rank(),
            fixed_ranks,
            tate,
            h1,
        })
    }

    /// Invariants of `⊕ ℤ[G/Hᵢ]`, computed combinatorially: the fixed rank
    /// under `H` is the number of `H`-orbits on the cosets, and both
    /// cohomology groups vanish.
    pub fn of_permutation(group: &FiniteMatrixGroup, summands: &[Subgroup]) -> Self {
        let reps = group.class_representatives();
        let rank = summands.iter().map(|k| group.order() / k.order()).sum();
        let fixed_ranks = reps
            .iter()
            .map(|h| summands.iter().map(|k| group.double_coset_count(h, k)).sum())
            .collect();
        LatticeInvariants {
            rank,
            fixed_ranks,
            tate: vec![FiniteAbelianGroup::trivial(); reps.len()],
            h1: vec![FiniteAbelianGroup::trivial(); reps.len()],
        }
    }

    /// Invariants of a direct sum.
    pub fn plus(&self, other: &LatticeInvariants) -> Self {
        let zip_sum = |a: &[FiniteAbelianGroup], b: &[FiniteAbelianGroup]| {
            a.iter().zip(b).map(|(x, y)| x.direct_sum(y)).collect()
        };
        LatticeInvariants {
            rank: self.rank + other.rank,
            fixed_ranks: self.fixed_ranks.iter().zip(&other.fixed_ranks).map(|(a, b)| a + b).collect(),
            tate: zip_sum(&self.tate, &other.tate),
            h1: zip_sum(&self.h1, &other.h1),
        }
    }

    /// First invariant, in cascade order, on which the two differ.
    pub fn first_difference(&self, other: &LatticeInvariants, reps: &[Subgroup]) -> Option<Obstruction> {
        if self.rank != other.rank {
            return Some(Obstruction::Rank { left: self.rank, right: other.rank });
        }
        for (i, h) in reps.iter().enumerate() {
            if self.fixed_ranks[i] != other.fixed_ranks[i] {
                return Some(Obstruction::FixedRank {
                    subgroup: h.clone(),
                    left: self.fixed_ranks[i],
                    right: other.fixed_ranks[i],
                });
            }
        }
        for (i, h) in reps.iter().enumerate() {
            if self.tate[i] != other.tate[i] {
                return Some(Obstruction::Tate {
                    subgroup: h.clone(),
                    left: self.tate[i].clone(),
                    right: other.tate[i].clone(),
                });
            }
        }
        for (i, h) in reps.iter().enumerate() {
            if self.h1[i] != other.h1[i] {
                return Some(Obstruction::H1 {
                    subgroup: h.clone(),
                    left: self.h1[i].clone(),
                    right: other.h1[i].clone(),
                });
            }
        }
        None
    }
}

/// Tests `M ≅ N` as G-lattices.
pub fn lattices_isomorphic(m: &GLattice, n: &GLattice, coeff_bound: usize) -> Result<Isomorphism> {
    let mut budget = SearchBudget::new(DEFAULT_MAX_CANDIDATES);
    isomorphic_with_budget(m, n, coeff_bound, &mut budget)
}

pub fn isomorphic_with_budget(
    m: &GLattice,
    n: &GLattice,
    coeff_bound: usize,
    budget: &mut SearchBudget,
) -> Result<Isomorphism> {
    if !same_group(m.group(), n.group()) {
        return Err(Error::GroupMismatch);
    }
    if m.rank() != n.rank() {
        return Ok(Isomorphism::No(Obstruction::Rank { left: m.rank(), right: n.rank() }));
    }
    if m.actions() == n.actions() {
        return Ok(Isomorphism::Yes(IntMatrix::identity(m.rank())));
    }
    let reps = m.group().class_representatives();
    if let Some(ob) = LatticeInvariants::of(m)?.first_difference(&LatticeInvariants::of(n)?, &reps) {
        return Ok(Isomorphism::No(ob));
    }
    search_with_invariants_checked(m, n, coeff_bound, budget)
}

/// Runs the hom-rank test and the bounded search, assuming the cheaper
/// invariants already agree.
pub(crate) fn search_with_invariants_checked(
    m: &GLattice,
    n: &GLattice,
    coeff_bound: usize,
    budget: &mut SearchBudget,
) -> Result<Isomorphism> {
    if m.actions() == n.actions() {
        return Ok(Isomorphism::Yes(IntMatrix::identity(m.rank())));
    }
    let homs = equivariant_homs(m, n)?;
    let ends = equivariant_homs(m, m)?;
    if homs.len() != ends.len() {
        return Ok(Isomorphism::No(Obstruction::HomRank {
            endomorphisms: ends.len(),
            homomorphisms: homs.len(),
        }));
    }
    let before = budget.spent();
    match search_unimodular(&homs, m.rank(), coeff_bound, budget) {
        Some(x) => Ok(Isomorphism::Yes(x)),
        None => Ok(Isomorphism::Unknown {
            coeff_bound,
            candidates_tried: budget.spent() - before,
        }),
    }
}

/// Coefficient values in search order: 0, 1, −1, 2, −2, …
fn value_at(index: usize) -> i64 {
    if index == 0 {
        0
    } else if index % 2 == 1 {
        (index / 2 + 1) as i64
    } else {
        -((index / 2) as i64)
    }
}

/// Calls `visit` on every integer vector of length `k` with max-norm at most
/// `bound`, by increasing max-norm and lexicographically (in the value order
/// 0, 1, −1, 2, −2, …) within a norm. Stops when `visit` returns true.
pub(crate) fn for_each_coefficient_vector(k: usize, bound: usize, mut visit: impl FnMut(&[i64]) -> bool) -> bool {
    if k == 0 {
        return false;
    }
    let mut coeffs = vec![0i64; k];
    for norm in 1..=bound {
        let width = 2 * norm + 1;
        let mut digits = vec![0usize; k];
        loop {
            let mut at_norm = false;
            for (c, &d) in coeffs.iter_mut().zip(&digits) {
                *c = value_at(d);
                at_norm |= c.unsigned_abs() as usize == norm;
            }
            if at_norm && visit(&coeffs) {
                return true;
            }
            // odometer, last position fastest
            let mut wrapped = true;
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < width {
                    wrapped = false;
                    break;
                }
                *d = 0;
            }
            if wrapped {
                break;
            }
        }
    }
    false
}

fn det_i128(m: &[i64], n: usize) -> Option<i128> {
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<i128> = m.iter().map(|&x| x as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            match (k + 1..n).find(|&i| a[i * n + k] != 0) {
                Some(i) => {
                    for j in 0..n {
                        a.swap(i * n + j, k * n + j);
                    }
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a[i * n + j].checked_mul(a[k * n + k])?;
                let y = a[i * n + k].checked_mul(a[k * n + j])?;
                a[i * n + j] = x.checked_sub(y)? / prev;
            }
        }
        prev = a[k * n + k];
    }
    Some(sign * a[n * n - 1])
}

/// First unimodular combination `Σ cᵢ·basisᵢ` in search order.
pub(crate) fn search_unimodular(
    basis: &[IntMatrix],
    n: usize,
    coeff_bound: usize,
    budget: &mut SearchBudget,
) -> Option<IntMatrix> {
    if n == 0 {
        return Some(IntMatrix::identity(0));
    }
    let small: Option<Vec<Vec<i64>>> = basis
        .iter()
        .map(|b| b.entries().iter().map(ToPrimitive::to_i64).collect())
        .collect();
    let mut found = None;
    for_each_coefficient_vector(basis.len(), coeff_bound, |c| {
        if !budget.take() {
            return true;
        }
        let unimodular = match &small {
            Some(small) => {
                let mut x = vec![0i64; n * n];
                let mut overflow = false;
                for (coef, b) in c.iter().zip(small) {
                    if *coef == 0 {
                        continue;
                    }
                    for (xi, bi) in x.iter_mut().zip(b) {
                        match bi.checked_mul(*coef).and_then(|p| xi.checked_add(p)) {
                            Some(v) => *xi = v,
                            None => overflow = true,
                        }
                    }
                }
                match (overflow, det_i128(&x, n)) {
                    (false, Some(d)) => d == 1 || d == -1,
                    _ => combine(basis, c).determinant().abs().is_one(),
                }
            }
            None => combine(basis, c).determinant().abs().is_one(),
        };
        if unimodular {
            found = Some(combine(basis, c));
            return true;
        }
        false
    });
    found
}

pub(crate) fn combine(basis: &[IntMatrix], coeffs: &[i64]) -> IntMatrix {
    let mut x = IntMatrix::zeros(basis[0].rows(), basis[0].cols());
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            x = &x + &b.scale(&BigInt::from(c));
        }
    }
    x
}
