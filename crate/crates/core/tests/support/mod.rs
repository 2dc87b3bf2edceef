//! Oracles shared by the integration tests. They use only textbook
//! algorithms and never call into the normal-form code.
#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use prelogchow::exactlin::IntMatrix;
use rand::Rng;

pub fn entries(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    a.row_vectors()
}

/// Fraction-free Gaussian elimination (Bareiss) on a square matrix.
pub fn det_bareiss(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Laplace expansion along the first row; only for tiny matrices.
pub fn det_cofactor(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    match n {
        0 => BigInt::one(),
        1 => rows[0][0].clone(),
        _ => {
            let mut acc = BigInt::zero();
            for c in 0..n {
                if rows[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &rows[0][c] * det_cofactor(&minor);
                if c % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// gcd of all maximal minors by enumeration.
pub fn gcd_minors_by_enumeration(a: &IntMatrix) -> BigInt {
    let rows = entries(a);
    let (m, n) = (a.rows(), a.cols());
    let k = m.min(n);
    let mut g = BigInt::zero();
    if m <= n {
        for cols in combinations(n, k) {
            let sub: Vec<Vec<BigInt>> = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
            g = g.gcd(&det_bareiss(&sub));
        }
    } else {
        for rs in combinations(m, k) {
            let sub: Vec<Vec<BigInt>> = rs.iter().map(|&r| rows[r].clone()).collect();
            g = g.gcd(&det_bareiss(&sub));
        }
    }
    g
}

/// Rank over F_p by plain row reduction.
pub fn rank_mod_p_oracle(a: &IntMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = entries(a)
        .iter()
        .map(|r| r.iter().map(|x| x.mod_floor(&pb).try_into().unwrap()).collect())
        .collect();
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][c].is_multiple_of(p)) else { continue };
        m.swap(rank, piv);
        let inv = mod_pow(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for j in 0..cols {
                    m[r][j] = (m[r][j] + p * p - f * m[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank over Q: number of nonzero pivots in a fraction-free elimination.
pub fn rank_oracle(a: &IntMatrix) -> usize {
    let mut m = entries(a);
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, piv);
        for r in rank + 1..rows {
            if m[r][c].is_zero() {
                continue;
            }
            let (a0, b0) = (m[rank][c].clone(), m[r][c].clone());
            for j in 0..cols {
                m[r][j] = &m[r][j] * &a0 - &m[rank][j] * &b0;
            }
        }
        rank += 1;
    }
    rank
}

pub fn is_unimodular(u: &IntMatrix) -> bool {
    u.is_square() && det_bareiss(&entries(u)).abs().is_one()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_i64_rows(&data)
}

/// Random matrix of given rank: product of random factors.
pub fn random_low_rank(rng: &mut impl Rng, rows: usize, cols: usize, r: usize) -> IntMatrix {
    random_matrix(rng, rows, r, 3).mul(&random_matrix(rng, r, cols, 3))
}

/// Random unimodular matrix: a product of elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let k = BigInt::from(rng.gen_range(-2..=2));
        let mut e = IntMatrix::identity(n);
        e.set(i, j, k);
        u = e.mul(&u);
    }
    u
}

/// HNF shape: echelon, positive pivots, entries above pivots reduced.
pub fn is_row_hnf(h: &IntMatrix) -> bool {
    let mut last: Option<usize> = None;
    let mut seen_zero = false;
    for r in 0..h.rows() {
        let lead = (0..h.cols()).find(|&c| !h.get(r, c).is_zero());
        match lead {
            None => seen_zero = true,
            Some(c) => {
                if seen_zero || last.is_some_and(|l| c <= l) || !h.get(r, c).is_positive() {
                    return false;
                }
                for above in 0..r {
                    let x = h.get(above, c);
                    if x.is_negative() || x >= h.get(r, c) {
                        return false;
                    }
                }
                last = Some(c);
            }
        }
    }
    true
}

/// Diagonal with `d_1 | d_2 | ...`, nonnegative, zeros last.
pub fn is_smith(s: &IntMatrix) -> bool {
    for r in 0..s.rows() {
        for c in 0..s.cols() {
            if r != c && !s.get(r, c).is_zero() {
                return false;
            }
        }
    }
    let diag: Vec<BigInt> = (0..s.rows().min(s.cols())).map(|i| s.get(i, i).clone()).collect();
    if diag.iter().any(|d| d.is_negative()) {
        return false;
    }
    diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        }
    })
}

/// Same Z-span of columns, decided by containment both ways. Both
/// matrices must have full column rank.
pub fn same_column_span(a: &IntMatrix, b: &IntMatrix) -> bool {
    contains_columns(a, b) && contains_columns(b, a)
}

/// Whether every column of `b` is an integer combination of columns of `a`.
pub fn contains_columns(a: &IntMatrix, b: &IntMatrix) -> bool {
    let sol = |v: Vec<BigInt>| integer_solve_oracle(a, &v);
    b.column_vectors().into_iter().all(sol)
}

/// Decides `a·x = v` over Z for full-column-rank `a`: Cramer's rule on a
/// nonsingular square row subset, then an integrality and residual check.
fn integer_solve_oracle(a: &IntMatrix, v: &[BigInt]) -> bool {
    let n = a.cols();
    if n == 0 {
        return v.iter().all(Zero::is_zero);
    }
    let rows = entries(a);
    let Some(sel) = combinations(a.rows(), n)
        .into_iter()
        .find(|rs| !det_bareiss(&rs.iter().map(|&r| rows[r].clone()).collect::<Vec<_>>()).is_zero())
    else {
        panic!("oracle needs full column rank");
    };
    let sub: Vec<Vec<BigInt>> = sel.iter().map(|&r| rows[r].clone()).collect();
    let d = det_bareiss(&sub);
    let mut x = Vec::with_capacity(n);
    for c in 0..n {
        let mut s = sub.clone();
        for (k, &r) in sel.iter().enumerate() {
            s[k][c] = v[r].clone();
        }
        let num = det_bareiss(&s);
        if !(&num % &d).is_zero() {
            return false;
        }
        x.push(num / &d);
    }
    a.mul_vec(&x).unwrap() == v
}
