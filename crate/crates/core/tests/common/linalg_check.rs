//! Exact-linalg invariants for one matrix, checked against the oracle.

use latori::linalg::{cokernel, column_span_basis, hnf, kernel_basis, snf, solve_exact};
use latori::IntMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::oracle;
use super::to_mat;

fn ensure(ok: bool, what: &str, a: &IntMatrix) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(format!("{} fails for\n{}", what, a))
    }
}

fn oracle_factors(a: &IntMatrix) -> Vec<i128> {
    if a.rows() == 0 || a.cols() == 0 {
        return vec![];
    }
    oracle::invariant_factors(&to_mat(a), a.cols())
}

fn unimodular(m: &IntMatrix) -> bool {
    m.is_square() && oracle::determinant(&to_mat(m)).abs() == 1
}

pub fn check_snf(a: &IntMatrix) -> Result<(), String> {
    let s = snf(a);
    ensure(&(&s.u * a) * &s.v == s.d, "U·A·V = D", a)?;
    ensure(unimodular(&s.u) && unimodular(&s.v), "U, V unimodular", a)?;
    let diag = s.diagonal();
    let off_diagonal_zero = (0..a.rows()).all(|i| (0..a.cols()).all(|j| i == j || s.d[(i, j)].is_zero()));
    ensure(off_diagonal_zero, "D diagonal", a)?;
    ensure(diag.iter().all(|d| !d.is_negative()), "D nonnegative", a)?;
    let chain = diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        }
    });
    ensure(chain, "divisibility chain", a)?;
    let nonzero: Vec<i128> = diag
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| i128::try_from(d.clone()).unwrap())
        .collect();
    ensure(nonzero == oracle_factors(a), "invariant factors agree with oracle", a)
}

pub fn check_hnf(a: &IntMatrix) -> Result<(), String> {
    let (h, u) = hnf(a);
    ensure(&u * a == h, "U·A = H", a)?;
    ensure(unimodular(&u), "U unimodular", a)?;
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero_row = false;
    for i in 0..h.rows() {
        let row = h.row(i);
        match row.iter().position(|x| !x.is_zero()) {
            None => seen_zero_row = true,
            Some(p) => {
                ensure(!seen_zero_row, "zero rows at the bottom", a)?;
                ensure(last_pivot.is_none_or(|q| p > q), "pivots strictly right", a)?;
                ensure(row[p].is_positive(), "positive pivot", a)?;
                for k in 0..i {
                    let x = &h[(k, p)];
                    ensure(!x.is_negative() && x < &row[p], "reduced above pivot", a)?;
                }
                for k in i + 1..h.rows() {
                    ensure(h[(k, p)].is_zero(), "zero below pivot", a)?;
                }
                last_pivot = Some(p);
            }
        }
    }
    Ok(())
}

pub fn check_kernel(a: &IntMatrix) -> Result<(), String> {
    let k = kernel_basis(a);
    let rank = oracle_factors(a).len();
    ensure(k.rows() == a.cols(), "kernel vectors have the right length", a)?;
    ensure((a * &k).is_zero(), "A·K = 0", a)?;
    ensure(k.cols() == a.cols() - rank, "kernel dimension = n - rank", a)?;
    ensure(oracle_factors(&k).iter().all(|&d| d == 1), "kernel saturated", a)?;
    ensure(column_span_basis(&k) == k, "kernel basis in canonical form", a)
}

pub fn check_cokernel(a: &IntMatrix) -> Result<(), String> {
    let g = cokernel(a, a.rows());
    let f = oracle_factors(a);
    let torsion: Vec<i128> = f.iter().copied().filter(|&d| d > 1).collect();
    ensure(g.free_rank() == a.rows() - f.len(), "cokernel free rank", a)?;
    let got: Vec<i128> = g.torsion().iter().map(|d| i128::try_from(d.clone()).unwrap()).collect();
    ensure(got == torsion, "cokernel torsion", a)
}

/// `A·x = b` for an `x` built from `seed`, and `A·x = b + e₀`, which is
/// solvable exactly when appending the column keeps the invariant factors.
pub fn check_solver(a: &IntMatrix, seed: &[i64]) -> Result<(), String> {
    let x: Vec<BigInt> = (0..a.cols()).map(|j| BigInt::from(seed[j % seed.len()])).collect();
    let b = a.apply(&x);
    match solve_exact(a, &b) {
        Some(y) => ensure(a.apply(&y) == b, "solution satisfies A·y = b", a)?,
        None => return Err(format!("consistent system reported unsolvable\n{}", a)),
    }
    if a.rows() == 0 {
        return Ok(());
    }
    let mut b2 = b.clone();
    b2[0] += BigInt::one();
    let augmented = a.hstack(&IntMatrix::column_vector(&b2));
    let solvable = oracle_factors(a) == oracle_factors(&augmented);
    match solve_exact(a, &b2) {
        Some(y) => ensure(solvable && a.apply(&y) == b2, "perturbed solution valid", a),
        None => ensure(!solvable, "perturbed system solvability agrees with oracle", a),
    }
}

pub fn check_all(a: &IntMatrix, seed: &[i64]) -> Result<(), String> {
    check_snf(a)?;
    check_hnf(a)?;
    check_kernel(a)?;
    check_cokernel(a)?;
    check_solver(a, seed)
}
