//! Membership tests for the lattice hierarchy
//!
//! ```text
//! permutation ⇒ stably permutation ⇒ invertible ⇒ flabby and coflabby
//! ```
//!
//! and the rationality verdict built on top of them. Every `Yes` and `No`
//! carries a certificate that [`Verdict::verify`] re-checks from scratch;
//! `Unknown` records the search bounds that were exhausted.

use serde::Serialize;

use crate::cohomology::{h1, h1_at, h1_profile, tate_minus1, tate_minus1_at, tate_minus1_profile};
use crate::error::Result;
use crate::group::{FiniteMatrixGroup, Subgroup};
use crate::isomorphism::{
    combine, for_each_coefficient_vector, search_with_invariants_checked, Isomorphism, LatticeInvariants,
    Obstruction, SearchBudget, DEFAULT_MAX_CANDIDATES,
};
use crate::lattice::{
    direct_sum, equivariant_homs, induced_sublattice, is_equivariant, permutation_lattice, GLattice,
};
use crate::linalg::{kernel_basis, solve_exact, FiniteAbelianGroup, IntMatrix};
use crate::resolution::{flabby_resolution, reduced_flabby_resolution, verify_resolution};

/// Which subgroups the flabby / coflabby conditions quantify over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Every subgroup `H ≤ G`.
    #[default]
    Strict,
    /// The whole group `G` only.
    PaperLiteral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Yes,
    No,
    Unknown,
}

/// Limits on the certificate searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    /// Largest rank of a permutation lattice tried.
    pub rank_bound: usize,
    /// Largest absolute coefficient in isomorphism searches.
    pub coeff_bound: usize,
    /// Total number of candidate maps examined per classifier call.
    pub max_candidates: u64,
}

impl SearchBounds {
    /// `rank(M) + 2·|G|`, coefficients up to 3.
    pub fn default_for(m: &GLattice) -> Self {
        SearchOptions::default().resolve(m)
    }
}

/// Search limits with the rank bound left relative to the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub rank_bound: Option<usize>,
    pub coeff_bound: usize,
    pub max_candidates: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            rank_bound: None,
            coeff_bound: 3,
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }
}

impl SearchOptions {
    pub fn resolve(&self, m: &GLattice) -> SearchBounds {
        SearchBounds {
            rank_bound: self
                .rank_bound
                .unwrap_or(m.rank() + 2 * m.group().order()),
            coeff_bound: self.coeff_bound,
            max_candidates: self.max_candidates,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CohomologyKind {
    #[serde(rename = "H^1")]
    H1,
    #[serde(rename = "H^-1")]
    TateMinus1,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `witness: M → ⊕ ℤ[G/Hᵢ]`.
    Permutation {
        #[serde(serialize_with = "ser_subgroups")]
        summands: Vec<Subgroup>,
        #[serde(serialize_with = "ser_matrix")]
        witness: IntMatrix,
    },
    /// `witness: M ⊕ P → Q`.
    StablyPermutation {
        #[serde(serialize_with = "ser_subgroups")]
        p: Vec<Subgroup>,
        #[serde(serialize_with = "ser_subgroups")]
        q: Vec<Subgroup>,
        #[serde(serialize_with = "ser_matrix")]
        witness: IntMatrix,
    },
    /// `witness: M ⊕ M' → P`.
    Invertible {
        #[serde(serialize_with = "ser_subgroups")]
        p: Vec<Subgroup>,
        #[serde(serialize_with = "ser_lattice")]
        complement: GLattice,
        #[serde(serialize_with = "ser_matrix")]
        witness: IntMatrix,
    },
    /// `witness: M₁ ⊕ P₁ → M₂ ⊕ P₂`.
    StablyEquivalent {
        #[serde(serialize_with = "ser_subgroups")]
        p1: Vec<Subgroup>,
        #[serde(serialize_with = "ser_subgroups")]
        p2: Vec<Subgroup>,
        #[serde(serialize_with = "ser_matrix")]
        witness: IntMatrix,
    },
    /// Every permutation candidate of the right rank, each with the invariant refuting it.
    Refuted { candidates: Vec<RefutedCandidate> },
    /// A cohomology group that would have to vanish.
    Cohomology {
        group: CohomologyKind,
        #[serde(serialize_with = "ser_subgroup")]
        subgroup: Subgroup,
        value: FiniteAbelianGroup,
    },
    /// Two lattices with different stable invariants.
    StableInvariant { obstruction: Obstruction },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefutedCandidate {
    #[serde(serialize_with = "ser_subgroups")]
    pub summands: Vec<Subgroup>,
    pub obstruction: Obstruction,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Option<Certificate>,
    pub bounds: SearchBounds,
    pub candidates_tried: u64,
}

impl Verdict {
    pub(crate) fn yes(certificate: Certificate, bounds: SearchBounds, budget: &SearchBudget) -> Self {
        Verdict {
            status: Status::Yes,
            certificate: Some(certificate),
            bounds,
            candidates_tried: budget.spent(),
        }
    }

    fn no(certificate: Certificate, bounds: SearchBounds, budget: &SearchBudget) -> Self {
        Verdict {
            status: Status::No,
            certificate: Some(certificate),
            bounds,
            candidates_tried: budget.spent(),
        }
    }

    fn unknown(bounds: SearchBounds, budget: &SearchBudget) -> Self {
        Verdict {
            status: Status::Unknown,
            certificate: None,
            bounds,
            candidates_tried: budget.spent(),
        }
    }

    /// Re-checks the certificate against `m` by direct computation.
    /// `Unknown` verdicts verify trivially.
    pub fn verify(&self, m: &GLattice) -> bool {
        match (&self.status, &self.certificate) {
            (Status::Unknown, None) => true,
            (Status::Unknown, Some(_)) => false,
            (_, None) => false,
            (status, Some(cert)) => verify_certificate(*status, cert, m).unwrap_or(false),
        }
    }
}

fn verify_certificate(status: Status, cert: &Certificate, m: &GLattice) -> Result<bool> {
    let g = m.group();
    let iso = |x: &IntMatrix, a: &GLattice, b: &GLattice| x.is_unimodular() && is_equivariant(x, a, b);
    Ok(match (status, cert) {
        (Status::Yes, Certificate::Permutation { summands, witness }) => {
            iso(witness, m, &permutation_lattice(g, summands))
        }
        (Status::Yes, Certificate::StablyPermutation { p, q, witness }) => {
            let left = direct_sum(m, &permutation_lattice(g, p))?;
            iso(witness, &left, &permutation_lattice(g, q))
        }
        (Status::Yes, Certificate::Invertible { p, complement, witness }) => {
            complement.validate().is_ok() && {
                let left = direct_sum(m, complement)?;
                iso(witness, &left, &permutation_lattice(g, p))
            }
        }
        (Status::No, Certificate::Refuted { candidates }) => {
            let expected = permutation_candidates(g, m.rank());
            let reps = g.class_representatives();
            let inv = LatticeInvariants::of(m)?;
            candidates.len() == expected.len()
                && candidates.iter().zip(&expected).all(|(c, e)| {
                    c.summands == *e && {
                        let other = permutation_lattice(g, e);
                        match &c.obstruction {
                            Obstruction::HomRank { endomorphisms, homomorphisms } => {
                                equivariant_homs(m, m).map(|v| v.len()).ok() == Some(*endomorphisms)
                                    && equivariant_homs(m, &other).map(|v| v.len()).ok() == Some(*homomorphisms)
                                    && endomorphisms != homomorphisms
                            }
                            ob => LatticeInvariants::of(&other)
                                .ok()
                                .and_then(|o| inv.first_difference(&o, &reps))
                                .as_ref()
                                == Some(ob),
                        }
                    }
                })
        }
        (Status::No, Certificate::Cohomology { group, subgroup, value }) => {
            let fresh = match group {
                CohomologyKind::H1 => h1_at(m, subgroup)?,
                CohomologyKind::TateMinus1 => tate_minus1_at(m, subgroup)?,
            };
            !value.is_trivial() && fresh == *value
        }
        _ => false,
    })
}

/// All multisets of conjugacy-class representatives `{H₁, …, Hₖ}` with
/// `Σ [G:Hᵢ] = rank`, ordered by number of summands, then lexicographically
/// by representative position.
pub fn permutation_candidates(group: &FiniteMatrixGroup, rank: usize) -> Vec<Vec<Subgroup>> {
    let reps = group.class_representatives();
    let index: Vec<usize> = reps.iter().map(|h| group.order() / h.order()).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    fn extend(index: &[usize], start: usize, remaining: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for i in start..index.len() {
            if index[i] <= remaining {
                current.push(i);
                extend(index, i, remaining - index[i], current, out);
                current.pop();
            }
        }
    }
    if rank > 0 {
        extend(&index, 0, rank, &mut Vec::new(), &mut out);
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out.into_iter()
        .map(|c| c.into_iter().map(|i| reps[i].clone()).collect())
        .collect()
}

fn first_nontrivial(m: &GLattice, mode: Mode, kind: CohomologyKind) -> Result<Option<(Subgroup, FiniteAbelianGroup)>> {
    Ok(match mode {
        Mode::PaperLiteral => {
            let v = match kind {
                CohomologyKind::H1 => h1(m)?,
                CohomologyKind::TateMinus1 => tate_minus1(m)?,
            };
            (!v.is_trivial()).then(|| (m.group().whole(), v))
        }
        Mode::Strict => {
            let p = match kind {
                CohomologyKind::H1 => h1_profile(m)?,
                CohomologyKind::TateMinus1 => tate_minus1_profile(m)?,
            };
            let first = p.nontrivial().next().cloned();
            first
        }
    })
}

/// `H¹(H, M) = 0` for all subgroups (Strict) or for `G` only (PaperLiteral).
pub fn is_coflabby(m: &GLattice, mode: Mode) -> Result<bool> {
    Ok(first_nontrivial(m, mode, CohomologyKind::H1)?.is_none())
}

/// `Ĥ⁻¹(H, M) = 0` for all subgroups (Strict) or for `G` only (PaperLiteral).
pub fn is_flabby(m: &GLattice, mode: Mode) -> Result<bool> {
    Ok(first_nontrivial(m, mode, CohomologyKind::TateMinus1)?.is_none())
}

/// Orbit decomposition for lattices whose action already permutes the basis.
fn decompose_permutation_basis(m: &GLattice) -> Option<(Vec<Subgroup>, IntMatrix)> {
    if !m.is_permutation_basis() {
        return None;
    }
    let g = m.group();
    let n = m.rank();
    let image = |x: usize, b: usize| -> usize {
        let a = m.action(x);
        (0..n).find(|&i| a[(i, b)] == 1.into()).unwrap()
    };
    let reps = g.class_representatives();
    let mut seen = vec![false; n];
    // (representative position, subgroup, base point)
    let mut orbits: Vec<(usize, Subgroup, usize)> = Vec::new();
    for b in 0..n {
        if seen[b] {
            continue;
        }
        let orbit: Vec<usize> = (0..g.order()).map(|x| image(x, b)).collect();
        for &p in &orbit {
            seen[p] = true;
        }
        let stab: Vec<usize> = (0..g.order()).filter(|&x| image(x, b) == b).collect();
        let stab = g.subgroup(&stab)?;
        let rep = g.representative_of(&stab);
        let pos = reps.iter().position(|r| *r == rep)?;
        // a point of the orbit whose stabilizer is exactly the representative
        let base = (0..g.order()).find_map(|x| {
            let p = image(x, b);
            (g.conjugate(&stab, x) == rep).then_some(p)
        })?;
        orbits.push((pos, rep, base));
    }
    orbits.sort_by_key(|(pos, _, _)| *pos);
    let summands: Vec<Subgroup> = orbits.iter().map(|(_, h, _)| h.clone()).collect();
    let mut x = IntMatrix::zeros(n, n);
    let mut offset = 0;
    for (_, h, base) in &orbits {
        let cosets = g.left_cosets(h);
        for (c, members) in cosets.iter().enumerate() {
            x[(offset + c, image(members[0], *base))] = 1.into();
        }
        offset += cosets.len();
    }
    Some((summands, x))
}

struct PermutationSearch {
    verdict: Verdict,
}

fn permutation_search(m: &GLattice, bounds: SearchBounds, budget: &mut SearchBudget) -> Result<PermutationSearch> {
    let g = m.group();
    if m.rank() == 0 {
        let cert = Certificate::Permutation { summands: vec![], witness: IntMatrix::identity(0) };
        return Ok(PermutationSearch { verdict: Verdict::yes(cert, bounds, budget) });
    }
    if let Some((summands, witness)) = decompose_permutation_basis(m) {
        let target = permutation_lattice(g, &summands);
        if witness.is_unimodular() && is_equivariant(&witness, m, &target) {
            let cert = Certificate::Permutation { summands, witness };
            return Ok(PermutationSearch { verdict: Verdict::yes(cert, bounds, budget) });
        }
    }
    let reps = g.class_representatives();
    let inv = LatticeInvariants::of(m)?;
    let mut refuted = Vec::new();
    let mut undecided = false;
    for cand in permutation_candidates(g, m.rank()) {
        let cinv = LatticeInvariants::of_permutation(g, &cand);
        if let Some(ob) = inv.first_difference(&cinv, &reps) {
            refuted.push(RefutedCandidate { summands: cand, obstruction: ob });
            continue;
        }
        let target = permutation_lattice(g, &cand);
        match search_with_invariants_checked(m, &target, bounds.coeff_bound, budget)? {
            Isomorphism::Yes(witness) => {
                let cert = Certificate::Permutation { summands: cand, witness };
                return Ok(PermutationSearch { verdict: Verdict::yes(cert, bounds, budget) });
            }
            Isomorphism::No(ob) => refuted.push(RefutedCandidate { summands: cand, obstruction: ob }),
            Isomorphism::Unknown { .. } => undecided = true,
        }
    }
    let verdict = if undecided {
        Verdict::unknown(bounds, budget)
    } else {
        Verdict::no(Certificate::Refuted { candidates: refuted }, bounds, budget)
    };
    Ok(PermutationSearch { verdict })
}

/// Is `M ≅ ⊕ ℤ[G/Hᵢ]` for some subgroups `Hᵢ`?
pub fn is_permutation(m: &GLattice, bounds: &SearchBounds) -> Result<Verdict> {
    let mut budget = SearchBudget::new(bounds.max_candidates);
    Ok(permutation_search(m, *bounds, &mut budget)?.verdict)
}

/// A nonvanishing `H¹` or `Ĥ⁻¹` at some subgroup; such a class survives
/// adding permutation summands.
fn stable_cohomology_obstruction(m: &GLattice) -> Result<Option<Certificate>> {
    for kind in [CohomologyKind::TateMinus1, CohomologyKind::H1] {
        if let Some((subgroup, value)) = first_nontrivial(m, Mode::Strict, kind)? {
            return Ok(Some(Certificate::Cohomology { group: kind, subgroup, value }));
        }
    }
    Ok(None)
}

fn candidates_by_rank(g: &FiniteMatrixGroup, max_rank: usize) -> Vec<Vec<(Vec<Subgroup>, LatticeInvariants)>> {
    (0..=max_rank)
        .map(|r| {
            permutation_candidates(g, r)
                .into_iter()
                .map(|c| {
                    let inv = LatticeInvariants::of_permutation(g, &c);
                    (c, inv)
                })
                .collect()
        })
        .collect()
}

/// Searches `A ⊕ P₁ ≅ B ⊕ P₂` over permutation lattices with
/// `rank(A ⊕ P₁) ≤ rank_bound`. `b_is_zero` restricts to `B ⊕ P₂ = P₂`.
fn stable_search(
    a: &GLattice,
    b: &GLattice,
    bounds: &SearchBounds,
    budget: &mut SearchBudget,
) -> Result<Option<(Vec<Subgroup>, Vec<Subgroup>, IntMatrix)>> {
    let g = a.group();
    let reps = g.class_representatives();
    if bounds.rank_bound < a.rank() || bounds.rank_bound < b.rank() {
        return Ok(None);
    }
    let table = candidates_by_rank(g, bounds.rank_bound);
    let inv_a = LatticeInvariants::of(a)?;
    let inv_b = LatticeInvariants::of(b)?;
    let empty = vec![(vec![], LatticeInvariants::of_permutation(g, &[]))];
    for total in a.rank().max(b.rank())..=bounds.rank_bound {
        let pa = if total == a.rank() { &empty } else { &table[total - a.rank()] };
        let pb = if total == b.rank() { &empty } else { &table[total - b.rank()] };
        for (p1, i1) in pa {
            let left_inv = inv_a.plus(i1);
            for (p2, i2) in pb {
                if p1.is_empty() && p2.is_empty() {
                    continue;
                }
                if left_inv.first_difference(&inv_b.plus(i2), &reps).is_some() {
                    continue;
                }
                let left = direct_sum(a, &permutation_lattice(g, p1))?;
                let right = direct_sum(b, &permutation_lattice(g, p2))?;
                if let Isomorphism::Yes(w) = search_with_invariants_checked(&left, &right, bounds.coeff_bound, budget)? {
                    return Ok(Some((p1.clone(), p2.clone(), w)));
                }
                if budget.exhausted() {
                    return Ok(None);
                }
            }
        }
    }
    Ok(None)
}

fn stably_permutation_search(m: &GLattice, bounds: &SearchBounds, budget: &mut SearchBudget) -> Result<Verdict> {
    if let Some(cert) = stable_cohomology_obstruction(m)? {
        return Ok(Verdict::no(cert, *bounds, budget));
    }
    let perm = permutation_search(m, *bounds, budget)?.verdict;
    if let (Status::Yes, Some(Certificate::Permutation { summands, witness })) = (perm.status, &perm.certificate) {
        let cert = Certificate::StablyPermutation { p: vec![], q: summands.clone(), witness: witness.clone() };
        return Ok(Verdict::yes(cert, *bounds, budget));
    }
    let zero = GLattice::trivial(m.group().clone(), 0);
    if let Some((p, q, witness)) = stable_search(m, &zero, bounds, budget)? {
        return Ok(Verdict::yes(Certificate::StablyPermutation { p, q, witness }, *bounds, budget));
    }
    Ok(Verdict::unknown(*bounds, budget))
}

/// Is `M ⊕ P ≅ Q` for permutation lattices `P`, `Q`?
pub fn is_stably_permutation(m: &GLattice, bounds: &SearchBounds) -> Result<Verdict> {
    let mut budget = SearchBudget::new(bounds.max_candidates);
    stably_permutation_search(m, bounds, &mut budget)
}

/// Is `M` a direct summand of a permutation lattice?
pub fn is_invertible(m: &GLattice, bounds: &SearchBounds) -> Result<Verdict> {
    let mut budget = SearchBudget::new(bounds.max_candidates);
    if let Some(cert) = stable_cohomology_obstruction(m)? {
        return Ok(Verdict::no(cert, *bounds, &budget));
    }
    let g = m.group().clone();
    let stable = stably_permutation_search(m, bounds, &mut budget)?;
    if let (Status::Yes, Some(Certificate::StablyPermutation { p, q, witness })) = (stable.status, &stable.certificate) {
        let cert = Certificate::Invertible {
            p: q.clone(),
            complement: permutation_lattice(&g, p),
            witness: witness.clone(),
        };
        return Ok(Verdict::yes(cert, *bounds, &budget));
    }
    if let Some(cert) = split_search(m, bounds, &mut budget)? {
        return Ok(Verdict::yes(cert, *bounds, &budget));
    }
    Ok(Verdict::unknown(*bounds, &budget))
}

/// Looks for an equivariant `i: M → P` admitting an equivariant left
/// inverse `p: P → M`; then `P = i(M) ⊕ ker p`.
fn split_search(m: &GLattice, bounds: &SearchBounds, budget: &mut SearchBudget) -> Result<Option<Certificate>> {
    let g = m.group().clone();
    let reps = g.class_representatives();
    let inv = LatticeInvariants::of(m)?;
    let n = m.rank();
    let identity: Vec<_> = IntMatrix::identity(n).entries().to_vec();
    for r in n + 1..=bounds.rank_bound {
        for cand in permutation_candidates(&g, r) {
            let cinv = LatticeInvariants::of_permutation(&g, &cand);
            // M^H is a summand of P^H
            if (0..reps.len()).any(|i| inv.fixed_ranks[i] > cinv.fixed_ranks[i]) {
                continue;
            }
            let p_lat = permutation_lattice(&g, &cand);
            let incl = equivariant_homs(m, &p_lat)?;
            let proj = equivariant_homs(&p_lat, m)?;
            if incl.is_empty() || proj.is_empty() {
                continue;
            }
            let mut found: Option<Certificate> = None;
            let mut failure = None;
            for_each_coefficient_vector(incl.len(), bounds.coeff_bound, |c| {
                if !budget.take() {
                    return true;
                }
                let i = combine(&incl, c);
                // Σ_j d_j (proj_j · i) = I
                let cols: Vec<IntMatrix> = proj.iter().map(|q| q * &i).collect();
                let mut system = IntMatrix::zeros(n * n, cols.len());
                for (j, q) in cols.iter().enumerate() {
                    for (k, e) in q.entries().iter().enumerate() {
                        system[(k, j)] = e.clone();
                    }
                }
                let Some(d) = solve_exact(&system, &identity) else { return false };
                let d: Vec<i64> = match d.iter().map(num_traits::ToPrimitive::to_i64).collect() {
                    Some(d) => d,
                    None => return false,
                };
                let p = combine(&proj, &d);
                let k = kernel_basis(&p);
                match induced_sublattice(&p_lat, &k) {
                    Ok(complement) => {
                        let witness = i.hstack(&k);
                        found = Some(Certificate::Invertible { p: cand.clone(), complement, witness });
                    }
                    Err(e) => failure = Some(e),
                }
                true
            });
            if let Some(e) = failure {
                return Err(e);
            }
            if found.is_some() || budget.exhausted() {
                return Ok(found);
            }
        }
    }
    Ok(None)
}

/// Is `M₁ ⊕ P₁ ≅ M₂ ⊕ P₂` for some permutation lattices `P₁`, `P₂`?
/// The classes of this relation are the stable classes `[M]`.
pub fn stably_equivalent(m1: &GLattice, m2: &GLattice, bounds: &SearchBounds) -> Result<Verdict> {
    let mut budget = SearchBudget::new(bounds.max_candidates);
    let reps = m1.group().class_representatives();
    let a = LatticeInvariants::of(m1)?;
    let b = LatticeInvariants::of(m2)?;
    // permutation summands add nothing to cohomology
    let strip = |x: &LatticeInvariants| LatticeInvariants {
        rank: 0,
        fixed_ranks: vec![0; reps.len()],
        tate: x.tate.clone(),
        h1: x.h1.clone(),
    };
    if let Some(obstruction) = strip(&a).first_difference(&strip(&b), &reps) {
        return Ok(Verdict::no(Certificate::StableInvariant { obstruction }, *bounds, &budget));
    }
    if m1.rank() == m2.rank() {
        if let Isomorphism::Yes(w) = search_with_invariants_checked(m1, m2, bounds.coeff_bound, &mut budget)? {
            let cert = Certificate::StablyEquivalent { p1: vec![], p2: vec![], witness: w };
            return Ok(Verdict::yes(cert, *bounds, &budget));
        }
    }
    if let Some((p1, p2, witness)) = stable_search(m1, m2, bounds, &mut budget)? {
        return Ok(Verdict::yes(Certificate::StablyEquivalent { p1, p2, witness }, *bounds, &budget));
    }
    Ok(Verdict::unknown(*bounds, &budget))
}

/// Re-checks a [`Certificate::StablyEquivalent`] for the pair `(m1, m2)`.
pub fn verify_stable_equivalence(verdict: &Verdict, m1: &GLattice, m2: &GLattice) -> bool {
    match (&verdict.status, &verdict.certificate) {
        (Status::Yes, Some(Certificate::StablyEquivalent { p1, p2, witness })) => {
            let g = m1.group();
            let (Ok(a), Ok(b)) = (
                direct_sum(m1, &permutation_lattice(g, p1)),
                direct_sum(m2, &permutation_lattice(g, p2)),
            ) else {
                return false;
            };
            witness.is_unimodular() && is_equivariant(witness, &a, &b)
        }
        (Status::No, Some(Certificate::StableInvariant { .. })) => {
            let (Ok(t1), Ok(t2), Ok(h1a), Ok(h1b)) = (
                tate_minus1_profile(m1),
                tate_minus1_profile(m2),
                h1_profile(m1),
                h1_profile(m2),
            ) else {
                return false;
            };
            t1 != t2 || h1a != h1b
        }
        (Status::Unknown, None) => true,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RationalityLevel {
    Rational,
    StablyRational,
    NotStablyRational,
    Undetermined,
}

impl std::fmt::Display for RationalityLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RationalityLevel::Rational => "Rational",
            RationalityLevel::StablyRational => "StablyRational",
            RationalityLevel::NotStablyRational => "NotStablyRational",
            RationalityLevel::Undetermined => "Undetermined",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Fact {
    Verdict { claim: String, verdict: Verdict },
    Cohomology {
        claim: String,
        group: CohomologyKind,
        #[serde(serialize_with = "ser_subgroup")]
        subgroup: Subgroup,
        value: FiniteAbelianGroup,
    },
    Resolution { claim: String, middle_rank: usize, quotient_rank: usize, verified: bool },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalityReport {
    pub level: RationalityLevel,
    pub justification: Vec<Fact>,
}

/// Decision cascade: permutation ⇒ rational; trivial flabby class ⇒ stably
/// rational; `H¹(H, F) ≠ 0` for the flabby quotient `F` ⇒ not stably rational.
pub fn rationality_verdict(m: &GLattice, options: &SearchOptions) -> Result<RationalityReport> {
    let mut facts = Vec::new();
    let perm = is_permutation(m, &options.resolve(m))?;
    let perm_status = perm.status;
    facts.push(Fact::Verdict { claim: "M is permutation".into(), verdict: perm });
    if perm_status == Status::Yes {
        return Ok(RationalityReport { level: RationalityLevel::Rational, justification: facts });
    }

    let res = flabby_resolution(m)?;
    let f = &res.quotient;
    facts.push(Fact::Resolution {
        claim: "flabby resolution 0 -> M -> P -> F -> 0".into(),
        middle_rank: res.middle.rank(),
        quotient_rank: f.rank(),
        verified: verify_resolution(&res),
    });
    let stable = is_stably_permutation(f, &options.resolve(f))?;
    let mut stable_status = stable.status;
    facts.push(Fact::Verdict { claim: "F is stably permutation".into(), verdict: stable });
    if stable_status == Status::Unknown {
        // same flabby class, usually a much smaller lattice
        let reduced = reduced_flabby_resolution(m)?;
        let verified = verify_resolution(&reduced);
        let f2 = &reduced.quotient;
        facts.push(Fact::Resolution {
            claim: "reduced flabby resolution 0 -> M -> P' -> F' -> 0".into(),
            middle_rank: reduced.middle.rank(),
            quotient_rank: f2.rank(),
            verified,
        });
        if verified {
            let stable = is_stably_permutation(f2, &options.resolve(f2))?;
            stable_status = stable.status;
            facts.push(Fact::Verdict { claim: "F' is stably permutation".into(), verdict: stable });
        }
    }
    if stable_status == Status::Yes {
        return Ok(RationalityReport { level: RationalityLevel::StablyRational, justification: facts });
    }

    let profile = h1_profile(f)?;
    let mut obstructed = false;
    for (h, value) in profile.nontrivial() {
        obstructed = true;
        facts.push(Fact::Cohomology {
            claim: "H^1(H, F) is nonzero".into(),
            group: CohomologyKind::H1,
            subgroup: h.clone(),
            value: value.clone(),
        });
    }
    let level = if obstructed {
        RationalityLevel::NotStablyRational
    } else {
        RationalityLevel::Undetermined
    };
    Ok(RationalityReport { level, justification: facts })
}

// serde helpers

pub(crate) fn matrix_rows(m: &IntMatrix) -> Vec<Vec<serde_json::Value>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| match num_traits::ToPrimitive::to_i64(x) {
                    Some(v) => serde_json::Value::from(v),
                    None => serde_json::Value::from(x.to_string()),
                })
                .collect()
        })
        .collect()
}

pub(crate) fn ser_matrix<S: serde::Serializer>(m: &IntMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    matrix_rows(m).serialize(s)
}

pub(crate) fn ser_subgroup<S: serde::Serializer>(h: &Subgroup, s: S) -> std::result::Result<S::Ok, S::Error> {
    h.members().serialize(s)
}

fn ser_subgroups<S: serde::Serializer>(hs: &[Subgroup], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<&[usize]> = hs.iter().map(Subgroup::members).collect();
    v.serialize(s)
}

fn ser_lattice<S: serde::Serializer>(m: &GLattice, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct L {
        rank: usize,
        generator_actions: Vec<Vec<Vec<serde_json::Value>>>,
    }
    L {
        rank: m.rank(),
        generator_actions: m.generator_actions().iter().map(matrix_rows).collect(),
    }
    .serialize(s)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lattice::coset_lattice;

    fn c2() -> Arc<FiniteMatrixGroup> {
        Arc::new(FiniteMatrixGroup::close(2, &[IntMatrix::from_rows(&[[0, 1], [1, 0]])], 24).unwrap())
    }

    fn sign(g: &Arc<FiniteMatrixGroup>) -> GLattice {
        GLattice::from_generator_images(g.clone(), 1, &[IntMatrix::from_rows(&[[-1]])]).unwrap()
    }

    #[test]
    fn flabby_and_coflabby_examples() {
        let g = c2();
        let triv = GLattice::trivial(g.clone(), 1);
        let reg = coset_lattice(&g, &g.trivial_subgroup());
        for mode in [Mode::Strict, Mode::PaperLiteral] {
            assert!(is_coflabby(&triv, mode).unwrap());
            assert!(is_coflabby(&reg, mode).unwrap());
            assert!(!is_coflabby(&sign(&g), mode).unwrap());
            assert!(is_flabby(&triv, mode).unwrap());
            assert!(is_flabby(&reg, mode).unwrap());
            assert!(!is_flabby(&sign(&g), mode).unwrap());
        }
    }

    #[test]
    fn permutation_examples() {
        let g = c2();
        let swap = GLattice::natural(g.clone());
        let v = is_permutation(&swap, &SearchBounds::default_for(&swap)).unwrap();
        assert_eq!(v.status, Status::Yes);
        match &v.certificate {
            Some(Certificate::Permutation { summands, witness }) => {
                assert_eq!(summands, &vec![g.trivial_subgroup()]);
                assert_eq!(witness, &IntMatrix::identity(2));
            }
            other => panic!("unexpected certificate {:?}", other),
        }
        assert!(v.verify(&swap));

        let s = sign(&g);
        let v = is_permutation(&s, &SearchBounds::default_for(&s)).unwrap();
        assert_eq!(v.status, Status::No);
        assert!(v.verify(&s));

        let skew = GLattice::from_generator_images(g.clone(), 2, &[IntMatrix::from_rows(&[[1, 2], [0, -1]])]).unwrap();
        let v = is_permutation(&skew, &SearchBounds::default_for(&skew)).unwrap();
        assert_eq!(v.status, Status::No);
        match &v.certificate {
            Some(Certificate::Refuted { candidates }) => {
                assert_eq!(candidates.len(), 2);
                assert!(candidates.iter().all(|c| matches!(c.obstruction, Obstruction::Tate { .. })
                    || matches!(c.obstruction, Obstruction::FixedRank { .. })));
            }
            other => panic!("unexpected certificate {:?}", other),
        }
        assert!(v.verify(&skew));
    }

    #[test]
    fn permutation_in_disguised_basis() {
        // ℤ[C₂] written in the basis (e₁, e₁ + e₂): σ ↦ [[-1, 0], [1, 1]]... conjugated swap
        let g = c2();
        let p = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
        let pinv = IntMatrix::from_rows(&[[1, -1], [0, 1]]);
        let swap = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        let conj = &(&pinv * &swap) * &p;
        let m = GLattice::from_generator_images(g.clone(), 2, &[conj]).unwrap();
        let v = is_permutation(&m, &SearchBounds::default_for(&m)).unwrap();
        assert_eq!(v.status, Status::Yes);
        assert!(v.verify(&m));
    }

    #[test]
    fn stably_permutation_and_invertible_examples() {
        let g = c2();
        let reg = coset_lattice(&g, &g.trivial_subgroup());
        let b = SearchBounds::default_for(&reg);
        let v = is_stably_permutation(&reg, &b).unwrap();
        assert_eq!(v.status, Status::Yes);
        assert!(v.verify(&reg));
        let v = is_invertible(&reg, &b).unwrap();
        assert_eq!(v.status, Status::Yes);
        assert!(v.verify(&reg));

        let s = sign(&g);
        let b = SearchBounds::default_for(&s);
        let v = is_stably_permutation(&s, &b).unwrap();
        assert_eq!(v.status, Status::No);
        assert!(v.verify(&s));
        let v = is_invertible(&s, &b).unwrap();
        assert_eq!(v.status, Status::No);
        assert!(v.verify(&s));
    }

    #[test]
    fn candidate_enumeration_order() {
        let g = c2();
        let c = permutation_candidates(&g, 2);
        // reps: {1} (index 2), C₂ (index 1)
        let orders: Vec<Vec<usize>> = c.iter().map(|v| v.iter().map(Subgroup::order).collect()).collect();
        assert_eq!(orders, vec![vec![1], vec![2, 2]]);
        assert!(permutation_candidates(&g, 0).is_empty());
    }

    #[test]
    fn stable_equivalence() {
        let g = c2();
        let s = sign(&g);
        let triv = GLattice::trivial(g.clone(), 1);
        let b = SearchBounds::default_for(&s);
        let v = stably_equivalent(&s, &triv, &b).unwrap();
        assert_eq!(v.status, Status::No);
        assert!(verify_stable_equivalence(&v, &s, &triv));
        // ℤ ~ 0 since ℤ = ℤ[G/G]
        let zero = GLattice::trivial(g.clone(), 0);
        let v = stably_equivalent(&triv, &zero, &b).unwrap();
        assert_eq!(v.status, Status::Yes);
        assert!(verify_stable_equivalence(&v, &triv, &zero));
    }
}
