//! Smith and Hermite normal forms, integer kernels and exact solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `U·A·V = D` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal entries `d₁ | d₂ | …`, zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Position of the nonzero entry of smallest absolute value in the
/// submatrix starting at `(t, t)`, ties broken by row-major order.
fn smallest_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn snf(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_pivot(&d, t) else {
                return SmithForm { d, u, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole remaining block
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { d, u, v }
}

/// Row-style Hermite reduction. Returns `(H, U, pivot_columns)` with
/// `U·A = H`. When `track` is false `U` is left as the empty matrix.
fn hermite(a: &IntMatrix, track: bool) -> (IntMatrix, IntMatrix, Vec<usize>) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = if track {
        IntMatrix::identity(m)
    } else {
        IntMatrix::zeros(0, 0)
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                let x = &h[(i, c)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|b| x.abs() < h[(b, c)].abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            if track {
                u.swap_rows(r, p);
            }
            let pivot = h[(r, c)].clone();
            let mut clean = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&pivot);
                h.add_row_multiple(i, r, &q);
                if track {
                    u.add_row_multiple(i, r, &q);
                }
                clean &= h[(i, c)].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            if track {
                u.negate_row(r);
            }
        }
        let pivot = h[(r, c)].clone();
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&pivot);
            if !q.is_zero() {
                h.add_row_multiple(i, r, &q);
                if track {
                    u.add_row_multiple(i, r, &q);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (h, u, pivots)
}

/// Row Hermite normal form: `U·A = H`, `U` unimodular, `H` in row echelon
/// form with positive pivots and entries above each pivot in `[0, pivot)`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (h, u, _) = hermite(a, true);
    (h, u)
}

/// Nonzero rows of the Hermite form of `a`: the canonical basis of its row span.
pub fn row_span_basis(a: &IntMatrix) -> IntMatrix {
    let (h, _, pivots) = hermite(a, false);
    h.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
}

/// Rank over ℚ.
pub fn rank(a: &IntMatrix) -> usize {
    hermite(a, false).2.len()
}

/// Saturated, Hermite-canonical ℤ-basis of `{x : A·x = 0}`, one vector per column.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    // Compress to the nonzero Hermite rows first; the kernel is unchanged.
    let b = row_span_basis(a);
    let (_, u, pivots) = hermite(&b.transpose(), true);
    let kernel_rows: Vec<usize> = (pivots.len()..n).collect();
    let k = u.select_rows(&kernel_rows);
    if k.rows() == 0 {
        return IntMatrix::zeros(n, 0);
    }
    row_span_basis(&k).transpose()
}

/// Hermite-canonical basis (as columns) of the column span of `a`.
pub fn column_span_basis(a: &IntMatrix) -> IntMatrix {
    let b = row_span_basis(&a.transpose());
    if b.rows() == 0 {
        return IntMatrix::zeros(a.rows(), 0);
    }
    b.transpose()
}

/// Solver for `A·x = b` over the integers, reusable across right-hand sides.
#[derive(Clone, Debug)]
pub struct ExactSolver {
    rows: usize,
    // U·Aᵀ = H, so A·Uᵀ = Hᵀ
    h: IntMatrix,
    ut: IntMatrix,
    pivots: Vec<usize>,
}

impl ExactSolver {
    pub fn new(a: &IntMatrix) -> Self {
        let (h, u, pivots) = hermite(&a.transpose(), true);
        ExactSolver {
            rows: a.rows(),
            h,
            ut: u.transpose(),
            pivots,
        }
    }

    /// Integer `x` with `A·x = b`, or `None` when no integer solution exists.
    /// Free coordinates of the Hermite basis are set to zero.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let n = self.ut.cols();
        let mut residual = b.to_vec();
        let mut y = vec![BigInt::zero(); n];
        for (j, &p) in self.pivots.iter().enumerate() {
            let pivot = &self.h[(j, p)];
            let (q, r) = residual[p].div_rem(pivot);
            if !r.is_zero() {
                return None;
            }
            if q.is_zero() {
                continue;
            }
            for (i, res) in residual.iter_mut().enumerate().skip(p) {
                let e = &self.h[(j, i)];
                if !e.is_zero() {
                    *res -= &q * e;
                }
            }
            y[j] = q;
        }
        if residual.iter().any(|r| !r.is_zero()) {
            return None;
        }
        Some(self.ut.apply(&y))
    }
}

pub fn solve_exact(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    ExactSolver::new(a).solve(b)
}
