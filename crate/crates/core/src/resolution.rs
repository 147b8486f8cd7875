//! Flabby resolutions `0 → M → P → F → 0` and the flabby class of `M`.
//!
//! The resolution is the dual of a coflabby cover `0 → K → Q → M° → 0` of the
//! dual lattice: for every class representative `H` and every Hermite basis
//! vector `x` of `(M°)^H`, `Q` gets a summand `ℤ[G/H]` whose coset `gH` maps
//! to `g·x`. Each `Q^H → (M°)^H` is then onto, so `K` is coflabby and
//! `F = K°` is flabby.

use std::sync::Arc;

use crate::classify::{
    is_flabby, is_permutation, is_stably_permutation, Certificate, Mode, SearchBounds, Status, Verdict,
};
use crate::cohomology::{h1_profile, CohomologyProfile};
use crate::error::{Error, Result};
use crate::isomorphism::SearchBudget;
use crate::group::{FiniteMatrixGroup, Subgroup};
use crate::lattice::{
    dual, fixed_sublattice, induced_sublattice, is_equivariant, is_permutation_matrix, permutation_lattice,
    same_group, GLattice,
};
use crate::linalg::{column_span_basis, kernel_basis, snf, ExactSolver, IntMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct Resolution {
    pub source: GLattice,
    /// `P = ⊕ ℤ[G/H]^{multiplicity}`, in summand order.
    pub middle_description: Vec<(Subgroup, usize)>,
    pub middle: GLattice,
    pub quotient: GLattice,
    /// `M → P`, a `rank P × rank M` matrix.
    pub embedding: IntMatrix,
    /// `P → F`, a `rank F × rank P` matrix.
    pub projection: IntMatrix,
}

fn empty(m: &GLattice) -> Resolution {
    let g = m.group().clone();
    Resolution {
        source: m.clone(),
        middle_description: Vec::new(),
        middle: GLattice::trivial(g.clone(), 0),
        quotient: GLattice::trivial(g, 0),
        embedding: IntMatrix::zeros(0, m.rank()),
        projection: IntMatrix::zeros(0, 0),
    }
}

pub fn flabby_resolution(m: &GLattice) -> Result<Resolution> {
    build(m, false)
}

/// A flabby resolution with fewer generators: class representatives are
/// visited from the largest subgroup down, and a fixed vector `x ∈ (M°)^H`
/// becomes a generator only when the cover built so far does not already
/// reach it from `Q^H`. The quotient lies in the same flabby class as the
/// one from [`flabby_resolution`].
pub fn reduced_flabby_resolution(m: &GLattice) -> Result<Resolution> {
    build(m, true)
}

fn cover_matrix(d: &GLattice, generators: &[(Subgroup, IntMatrix)]) -> IntMatrix {
    let g = d.group();
    let mut phi = IntMatrix::zeros(d.rank(), 0);
    for (h, x) in generators {
        for coset in g.left_cosets(h) {
            phi = phi.hstack(&(d.action(coset[0]) * x));
        }
    }
    phi
}

fn build(m: &GLattice, reduced: bool) -> Result<Resolution> {
    if m.rank() == 0 {
        return Ok(empty(m));
    }
    let g: &Arc<FiniteMatrixGroup> = m.group();
    let d = dual(m);

    let mut reps = g.class_representatives();
    if reduced {
        reps.reverse();
    }
    let mut generators: Vec<(Subgroup, IntMatrix)> = Vec::new();
    for h in reps {
        let x = fixed_sublattice(&d, &h);
        for col in x.columns() {
            let v = IntMatrix::column_vector(&col);
            if reduced && !generators.is_empty() {
                let summands: Vec<Subgroup> = generators.iter().map(|(s, _)| s.clone()).collect();
                let q = permutation_lattice(g, &summands);
                let reach = &cover_matrix(&d, &generators) * &fixed_sublattice(&q, &h);
                if ExactSolver::new(&reach).solve(&col).is_some() {
                    continue;
                }
            }
            generators.push((h.clone(), v));
        }
    }
    let mut description: Vec<(Subgroup, usize)> = Vec::new();
    for (h, _) in &generators {
        match description.last_mut() {
            Some((last, k)) if last == h => *k += 1,
            _ => description.push((h.clone(), 1)),
        }
    }
    let summands: Vec<Subgroup> = generators.iter().map(|(h, _)| h.clone()).collect();
    let q = permutation_lattice(g, &summands);
    let phi = cover_matrix(&d, &generators);

    let k = kernel_basis(&phi);
    let kernel = induced_sublattice(&q, &k)?;
    Ok(Resolution {
        source: m.clone(),
        middle_description: description,
        middle: dual(&q),
        quotient: dual(&kernel),
        embedding: phi.transpose(),
        projection: k.transpose(),
    })
}

/// Injective with saturated image: Smith invariants all `1`, full column rank.
fn is_split_injective(a: &IntMatrix) -> bool {
    let s = snf(a);
    s.rank() == a.cols() && s.diagonal().iter().take(s.rank()).all(|x| *x == 1.into())
}

/// Re-checks exactness, equivariance, the permutation action on `P` and
/// flabbiness of `F`, using only the stored matrices.
pub fn verify_resolution(r: &Resolution) -> bool {
    let (m, p, f) = (&r.source, &r.middle, &r.quotient);
    if !same_group(m.group(), p.group()) || !same_group(m.group(), f.group()) {
        return false;
    }
    if p.rank() != m.rank() + f.rank()
        || r.embedding.rows() != p.rank()
        || r.embedding.cols() != m.rank()
        || r.projection.rows() != f.rank()
        || r.projection.cols() != p.rank()
    {
        return false;
    }
    if p.validate().is_err() || f.validate().is_err() {
        return false;
    }
    if !is_equivariant(&r.embedding, m, p) || !is_equivariant(&r.projection, p, f) {
        return false;
    }
    if !is_split_injective(&r.embedding) || !is_split_injective(&r.projection.transpose()) {
        return false;
    }
    if column_span_basis(&r.embedding) != column_span_basis(&kernel_basis(&r.projection)) {
        return false;
    }
    let described: usize = r
        .middle_description
        .iter()
        .map(|(h, mult)| mult * (m.group().order() / h.order()))
        .sum();
    if described != p.rank() || !p.actions().iter().all(is_permutation_matrix) {
        return false;
    }
    is_flabby(f, Mode::Strict).unwrap_or(false)
}

impl Resolution {
    /// `P` as a list of coset summands, one entry per copy.
    pub fn middle_summands(&self) -> Vec<Subgroup> {
        self.middle_description
            .iter()
            .flat_map(|(h, k)| std::iter::repeat_n(h.clone(), *k))
            .collect()
    }
}

/// For `M ≅ C = ⊕ ℤ[G/Hᵢ]` via `x: M → C`, the dual cover `Q → M°` splits,
/// giving `F ⊕ C ≅ P`. Returns the witness `F ⊕ C → P`.
fn split_witness(r: &Resolution, x: &IntMatrix, summands: &[Subgroup]) -> Result<IntMatrix> {
    let g = r.source.group();
    let q = dual(&r.middle);
    let phi = r.embedding.transpose();
    let k = r.projection.transpose();
    let c = permutation_lattice(g, summands);
    // Xᵀ: C → M° is an equivariant isomorphism; lift each summand generator
    // to an Hᵢ-fixed vector of Q and spread it over the cosets.
    let xt = x.transpose();
    let mut s = IntMatrix::zeros(q.rank(), c.rank());
    let mut offset = 0;
    for h in summands {
        let u = xt.column(offset);
        let fixed = fixed_sublattice(&q, h);
        let y = ExactSolver::new(&(&phi * &fixed))
            .solve(&u)
            .ok_or_else(|| Error::InternalInconsistency("fixed vector does not lift through the cover".into()))?;
        let lift = fixed.apply(&y);
        for (j, coset) in g.left_cosets(h).iter().enumerate() {
            for (i, v) in q.action(coset[0]).apply(&lift).into_iter().enumerate() {
                s[(i, offset + j)] = v;
            }
        }
        offset += g.order() / h.order();
    }
    // [k | S]: K ⊕ C → Q is an isomorphism; the witness is its inverse transpose.
    let a = k.hstack(&s);
    let solver = ExactSolver::new(&a);
    let n = a.rows();
    let mut inverse = IntMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0.into(); n];
        e[j] = 1.into();
        let col = solver
            .solve(&e)
            .ok_or_else(|| Error::InternalInconsistency("split cover is not unimodular".into()))?;
        for (i, v) in col.into_iter().enumerate() {
            inverse[(i, j)] = v;
        }
    }
    Ok(inverse.transpose())
}

/// Is `[M]^fl` trivial, i.e. is the flabby quotient stably permutation?
/// The verdict and its certificate refer to `F = flabby_resolution(M).quotient`.
pub fn flabby_class_trivial(m: &GLattice, bounds: &SearchBounds) -> Result<Verdict> {
    let r = flabby_resolution(m)?;
    let perm = is_permutation(m, &SearchBounds { max_candidates: bounds.max_candidates, ..SearchBounds::default_for(m) })?;
    if let (Status::Yes, Some(Certificate::Permutation { summands, witness })) = (perm.status, &perm.certificate) {
        let split = split_witness(&r, witness, summands)?;
        let cert = Certificate::StablyPermutation { p: summands.clone(), q: r.middle_summands(), witness: split };
        let verdict = Verdict::yes(cert, *bounds, &SearchBudget::new(0));
        if verdict.verify(&r.quotient) {
            return Ok(verdict);
        }
    }
    is_stably_permutation(&r.quotient, bounds)
}

/// `H¹(H, F)` for the flabby quotient; a nonzero entry shows `[M]^fl ≠ 0`.
pub fn flabby_class_obstruction(m: &GLattice) -> Result<CohomologyProfile> {
    h1_profile(&flabby_resolution(m)?.quotient)
}
