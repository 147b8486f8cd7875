//! Dense `i128` reference implementations, sharing no code with the library.
//!
//! Every operation panics on overflow instead of wrapping.

pub type Mat = Vec<Vec<i128>>;

fn mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("oracle overflow")
}

fn add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("oracle overflow")
}

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![0; c]; r]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn matmul(a: &Mat, b: &Mat, inner: usize) -> Mat {
    let cols = b.first().map_or(0, Vec::len);
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k] == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] = add(out[i][j], mul(row[k], b[k][j]));
            }
        }
    }
    out
}

/// Nonzero Smith invariants, positive, each dividing the next.
pub fn invariant_factors(a: &Mat, cols: usize) -> Vec<i128> {
    let mut m = a.clone();
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let p = m[t][t];
        let mut clean = true;
        for i in t + 1..rows {
            let q = m[i][t] / p;
            if q != 0 {
                for j in t..cols {
                    m[i][j] = add(m[i][j], -mul(q, m[t][j]));
                }
            }
            clean &= m[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = m[t][j] / p;
            if q != 0 {
                for i in t..rows {
                    m[i][j] = add(m[i][j], -mul(q, m[i][t]));
                }
            }
            clean &= m[t][j] == 0;
        }
        if !clean {
            continue;
        }
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0)) {
            for j in t..cols {
                m[t][j] = add(m[t][j], m[i][j]);
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

pub fn rank(a: &Mat, cols: usize) -> usize {
    invariant_factors(a, cols).len()
}

/// Column reduction `A·V = E` with `E` column-echelon; returns `(E, V, V⁻¹)`.
pub fn column_reduce(a: &Mat, cols: usize) -> (Mat, Mat, Mat) {
    let mut e = a.clone();
    let mut v = identity(cols);
    let mut vinv = identity(cols);
    let rows = e.len();
    let mut c = 0;
    for r in 0..rows {
        if c == cols {
            break;
        }
        loop {
            let nz: Vec<usize> = (c..cols).filter(|&j| e[r][j] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| e[r][j].abs()).unwrap();
            swap_cols(&mut e, &mut v, &mut vinv, c, p);
            let mut done = true;
            for j in c + 1..cols {
                let q = e[r][j] / e[r][c];
                if q != 0 {
                    // col_j -= q·col_c
                    for row in e.iter_mut() {
                        row[j] = add(row[j], -mul(q, row[c]));
                    }
                    for row in v.iter_mut() {
                        row[j] = add(row[j], -mul(q, row[c]));
                    }
                    // inverse: row_c += q·row_j
                    let rj = vinv[j].clone();
                    for (x, y) in vinv[c].iter_mut().zip(rj) {
                        *x = add(*x, mul(q, y));
                    }
                }
                done &= e[r][j] == 0;
            }
            if done {
                c += 1;
                break;
            }
        }
    }
    (e, v, vinv)
}

fn swap_cols(e: &mut Mat, v: &mut Mat, vinv: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in e.iter_mut() {
        row.swap(a, b);
    }
    for row in v.iter_mut() {
        row.swap(a, b);
    }
    vinv.swap(a, b);
}

/// Saturated kernel basis as columns, together with a left inverse `L`
/// (`L·K = I`) that gives coordinates of kernel vectors.
pub fn kernel(a: &Mat, cols: usize) -> (Mat, Mat) {
    let (e, v, vinv) = column_reduce(a, cols);
    let zero: Vec<usize> = (0..cols).filter(|&j| e.iter().all(|row| row[j] == 0)).collect();
    let k = v.iter().map(|row| zero.iter().map(|&j| row[j]).collect()).collect();
    let l = zero.iter().map(|&j| vinv[j].clone()).collect();
    (k, l)
}

/// `span(K) / span(B)` for `B ⊆ span(K)`, as (free rank, invariant factors > 1).
pub fn quotient(k: &Mat, l: &Mat, b: &Mat, ambient: usize) -> (usize, Vec<i128>) {
    let kc = k.first().map_or(0, Vec::len);
    let bc = b.first().map_or(0, Vec::len);
    if kc == 0 {
        assert!(b.iter().flatten().all(|&x| x == 0), "oracle: generators outside the cycle lattice");
        return (0, vec![]);
    }
    let coords = matmul(l, b, ambient);
    assert_eq!(matmul(k, &coords, kc), *b, "oracle: generators outside the cycle lattice");
    let factors = if bc == 0 { vec![] } else { invariant_factors(&coords, bc) };
    let free = kc - factors.len();
    (free, factors.into_iter().filter(|&d| d != 1).collect())
}

/// A finite group given by its matrices, with an action by matrices in the
/// same element order.
pub struct Module {
    pub elements: Vec<Mat>,
    pub action: Vec<Mat>,
    pub rank: usize,
}

impl Module {
    fn index_of(&self, m: &Mat) -> usize {
        self.elements.iter().position(|e| e == m).expect("oracle: group not closed")
    }

    fn product(&self, a: usize, b: usize) -> usize {
        let d = self.elements[0].len();
        self.index_of(&matmul(&self.elements[a], &self.elements[b], d))
    }

    fn identity_index(&self) -> usize {
        self.index_of(&identity(self.elements[0].len()))
    }

    /// `H¹` from the cocycle system over all ordered pairs, with unknowns
    /// `f(g)` for every element.
    pub fn h1(&self) -> (usize, Vec<i128>) {
        let n = self.elements.len();
        let r = self.rank;
        let unknowns = n * r;
        if r == 0 {
            return (0, vec![]);
        }
        // f(a) + a·f(b) - f(ab) = 0
        let mut system = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let ab = self.product(a, b);
                for i in 0..r {
                    let mut row = vec![0i128; unknowns];
                    row[a * r + i] += 1;
                    for j in 0..r {
                        row[b * r + j] += self.action[a][i][j];
                    }
                    row[ab * r + i] -= 1;
                    system.push(row);
                }
            }
        }
        let (k, l) = kernel(&system, unknowns);
        // coboundaries of the basis vectors: f(g) = g·e_j - e_j
        let mut b = zeros(unknowns, r);
        for g in 0..n {
            for i in 0..r {
                for j in 0..r {
                    b[g * r + i][j] = self.action[g][i][j] - i128::from(i == j);
                }
            }
        }
        let e = self.identity_index();
        assert!((0..r).all(|i| k[e * r + i].iter().all(|&x| x == 0)), "oracle: f(1) must vanish");
        quotient(&k, &l, &b, unknowns)
    }

    /// `Ĥ⁻¹`: kernel of the norm modulo all `(g - 1)·e_j`.
    pub fn tate_minus1(&self) -> (usize, Vec<i128>) {
        let r = self.rank;
        if r == 0 {
            return (0, vec![]);
        }
        let mut norm = zeros(r, r);
        for a in &self.action {
            for i in 0..r {
                for j in 0..r {
                    norm[i][j] += a[i][j];
                }
            }
        }
        let (k, l) = kernel(&norm, r);
        let mut b = zeros(r, 0);
        for a in &self.action {
            for j in 0..r {
                for (i, row) in b.iter_mut().enumerate() {
                    row.push(a[i][j] - i128::from(i == j));
                }
            }
        }
        quotient(&k, &l, &b, r)
    }
}

/// Determinant by cofactor expansion; for tiny matrices only.
pub fn determinant(a: &Mat) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return a[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Mat = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            mul(s * a[0][j], determinant(&minor))
        })
        .fold(0, add)
}
