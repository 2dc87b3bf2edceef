//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything here works on dense [`IntMatrix`] values: Hermite and Smith
//! normal forms with their transforms, ranks over the rationals and over
//! prime fields, integer kernels, cokernels, lattice saturation and the gcd
//! of maximal minors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LinAlgError> {
        if data.len() != rows * cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, d.clone());
        }
        m
    }

    /// Builds a matrix from rows of machine integers. Panics on ragged input.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend(r.as_ref().iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self, LinAlgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinAlgError::DimensionMismatch(format!(
                    "row of length {} in a matrix with {} columns",
                    r.len(),
                    cols
                )));
            }
            data.extend(r);
        }
        Ok(IntMatrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: Vec<Vec<BigInt>>, rows: usize) -> Result<Self, LinAlgError> {
        Ok(Self::from_rows(columns, rows)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn try_mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        self.try_mul(other).expect("matrix shapes")
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn try_add(&self, other: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    /// Rows `range` as a new matrix.
    pub fn select_rows(&self, rows: std::ops::Range<usize>) -> IntMatrix {
        let cols = self.cols;
        IntMatrix {
            rows: rows.len(),
            cols,
            data: self.data[rows.start * cols..rows.end * cols].to_vec(),
        }
    }

    pub fn select_cols(&self, cols: std::ops::Range<usize>) -> IntMatrix {
        self.transpose().select_rows(cols).transpose()
    }

    /// Copies `block` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &IntMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        out
    }

    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        if self.rows != other.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, other);
        Ok(out)
    }

    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        if self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c] * k;
            self.data[dst * self.cols + c] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src] * k;
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self.data[r * self.cols + c];
            self.data[r * self.cols + c] = v;
        }
    }

    /// Determinant via fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|x| x.to_string().len()).max().unwrap_or(1);
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", self.get(r, c).to_string(), width = width)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U` unimodular and `U·A = H`. `H` is in echelon
/// form, pivots are positive and entries above each pivot lie in
/// `[0, pivot)`. Zero rows come last.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows, a.cols);
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut p = 0;
    for col in 0..n {
        if p == m {
            break;
        }
        loop {
            let best = (p..m)
                .filter(|&r| !h.get(r, col).is_zero())
                .min_by(|&x, &y| h.get(x, col).abs().cmp(&h.get(y, col).abs()));
            let Some(best) = best else { break };
            h.swap_rows(p, best);
            u.swap_rows(p, best);
            let mut clean = true;
            for r in p + 1..m {
                if h.get(r, col).is_zero() {
                    continue;
                }
                let q = -h.get(r, col).div_floor(h.get(p, col));
                h.add_row_multiple(r, p, &q);
                u.add_row_multiple(r, p, &q);
                if !h.get(r, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(p, col).is_zero() {
            continue;
        }
        if h.get(p, col).is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        let pivot = h.get(p, col).clone();
        for r in 0..p {
            let q = -h.get(r, col).div_floor(&pivot);
            h.add_row_multiple(r, p, &q);
            u.add_row_multiple(r, p, &q);
        }
        p += 1;
    }
    (h, u)
}

/// Basis of the lattice spanned by the rows of `a`.
///
/// Returns `(B, C)` where the rows of `B` are the nonzero rows of the Hermite
/// form of `a` and `C·a = B` expresses each basis row over the input rows.
pub fn row_lattice_basis(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (h, u) = hnf(a);
    let r = (0..h.rows).take_while(|&i| h.row(i).iter().any(|x| !x.is_zero())).count();
    (h.select_rows(0..r), u.select_rows(0..r))
}

/// Pivot column of each row of a matrix in row echelon form.
pub fn echelon_pivots(h: &IntMatrix) -> Vec<usize> {
    (0..h.rows)
        .filter_map(|r| h.row(r).iter().position(|x| !x.is_zero()))
        .collect()
}

/// Solves `x·B = v` for `B` in Hermite normal form with independent rows.
/// Returns `None` when `v` is not an integral combination of the rows.
pub fn solve_in_row_basis(b: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    if v.len() != b.cols {
        return None;
    }
    let pivots = echelon_pivots(b);
    let mut rest = v.to_vec();
    let mut x = Vec::with_capacity(b.rows);
    for (i, &pc) in pivots.iter().enumerate() {
        let (q, r) = rest[pc].div_rem(b.get(i, pc));
        if !r.is_zero() {
            return None;
        }
        for (c, slot) in rest.iter_mut().enumerate() {
            *slot -= &q * b.get(i, c);
        }
        x.push(q);
    }
    if rest.iter().all(Zero::is_zero) {
        Some(x)
    } else {
        None
    }
}

/// Result of a Smith normal form computation: `U·A·V = S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Nonzero diagonal entries, in order (ones included).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s.get(i, i).clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Invariant factors greater than one: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }

    /// Solves `A·x = b` using this decomposition of `A`.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<IntegerSolution>, LinAlgError> {
        let c = self.u.mul_vec(b)?;
        let factors = self.invariant_factors();
        let r = factors.len();
        let mut y = vec![BigInt::zero(); self.v.rows];
        for (i, d) in factors.iter().enumerate() {
            let (q, rem) = c[i].div_rem(d);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
        if c[r..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        Ok(Some(IntegerSolution {
            x: self.v.mul_vec(&y)?,
            unique: r == self.v.rows,
        }))
    }
}

/// Smith normal form with transforms.
///
/// Elimination always pivots on an entry of smallest absolute value; the
/// divisibility chain is enforced by folding offending rows into the pivot
/// row.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in t..m {
                for c in t..n {
                    let x = s.get(r, c);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(br, bc)| x.abs() < s.get(br, bc).abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else {
                return SnfDecomposition { s, u, v };
            };
            s.swap_rows(t, br);
            u.swap_rows(t, br);
            s.swap_cols(t, bc);
            v.swap_cols(t, bc);

            let mut clean = true;
            for r in t + 1..m {
                if s.get(r, t).is_zero() {
                    continue;
                }
                let q = -s.get(r, t).div_floor(s.get(t, t));
                s.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                clean &= s.get(r, t).is_zero();
            }
            for c in t + 1..n {
                if s.get(t, c).is_zero() {
                    continue;
                }
                let q = -s.get(t, c).div_floor(s.get(t, t));
                s.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                clean &= s.get(t, c).is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = s.get(t, t).clone();
            let offender = (t + 1..m).find(|&r| {
                (t + 1..n).any(|c| !s.get(r, c).is_multiple_of(&pivot))
            });
            match offender {
                Some(r) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, r, &one);
                    u.add_row_multiple(t, r, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfDecomposition { s, u, v }
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    let mut m = a.clone();
    let mut r = 0;
    let mut prev = BigInt::one();
    for col in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        for i in r + 1..m.rows {
            for j in col + 1..m.cols {
                let v = (m.get(i, j) * m.get(r, col) - m.get(i, col) * m.get(r, j)) / &prev;
                m.set(i, j, v);
            }
            m.set(i, col, BigInt::zero());
        }
        prev = m.get(r, col).clone();
        r += 1;
    }
    r
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn reduce_mod_p(a: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    let pb = BigInt::from(p);
    (0..a.rows)
        .map(|r| {
            a.row(r)
                .iter()
                .map(|x| x.mod_floor(&pb).to_u64().expect("reduced entry fits"))
                .collect()
        })
        .collect()
}

fn pow_mod(b: u64, mut e: u64, p: u64) -> u64 {
    let p = p as u128;
    let mut acc = 1u128;
    let mut base = b as u128 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc as u64
}

/// Reduced row echelon form over F_p; returns the pivot columns.
fn rref_mod_p(m: &mut [Vec<u64>], cols: usize, p: u64) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = pow_mod(m[r][col], p - 2, p) as u128;
        for x in m[r].iter_mut() {
            *x = (*x as u128 * inv % p as u128) as u64;
        }
        for i in 0..rows {
            if i == r || m[i][col] == 0 {
                continue;
            }
            let f = m[i][col] as u128;
            let pivot_row = m[r].clone();
            for (x, &y) in m[i].iter_mut().zip(&pivot_row) {
                let sub = f * y as u128 % p as u128;
                *x = ((*x as u128 + p as u128 - sub) % p as u128) as u64;
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Rank of the reduction of `a` modulo the prime `p`.
pub fn rank_mod_p(a: &IntMatrix, p: u64) -> Result<usize, LinAlgError> {
    if !is_prime(p) {
        return Err(LinAlgError::NotPrime(p));
    }
    let mut m = reduce_mod_p(a, p);
    Ok(rref_mod_p(&mut m, a.cols, p).len())
}

/// Basis of the kernel `{x : A·x = 0}` over F_p, entries in `[0, p)`.
pub fn kernel_mod_p(a: &IntMatrix, p: u64) -> Result<Vec<Vec<u64>>, LinAlgError> {
    if !is_prime(p) {
        return Err(LinAlgError::NotPrime(p));
    }
    let mut m = reduce_mod_p(a, p);
    let pivots = rref_mod_p(&mut m, a.cols, p);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&fc| {
            let mut x = vec![0u64; a.cols];
            x[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = (p - m[r][fc]) % p;
            }
            x
        })
        .collect())
}

/// Basis (as columns) of the integer kernel lattice `{x ∈ Z^n : A·x = 0}`.
///
/// The basis comes from the unimodular transform of a Hermite form, so the
/// lattice it spans is saturated. It is returned in Hermite-reduced form.
pub fn kernel_saturated(a: &IntMatrix) -> IntMatrix {
    let n = a.cols;
    let (h, u) = hnf(&a.transpose());
    let r = (0..h.rows).take_while(|&i| h.row(i).iter().any(|x| !x.is_zero())).count();
    let k = u.select_rows(r..n);
    let (basis, _) = row_lattice_basis(&k);
    let mut out = basis.transpose();
    if out.rows != n {
        out = IntMatrix::zeros(n, 0);
    }
    out
}

/// Cokernel of `A: Z^n → Z^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelStructure {
    pub free_rank: usize,
    /// Invariant factors greater than one.
    pub invariant_factors: Vec<BigInt>,
    /// `free_rank × m` matrix onto coker-mod-torsion coordinates.
    pub projection: IntMatrix,
}

pub fn cokernel(a: &IntMatrix) -> CokernelStructure {
    let d = snf(a);
    let r = d.rank();
    let m = a.rows;
    let projection = d.u.select_rows(r..m);
    CokernelStructure {
        free_rank: m - r,
        invariant_factors: d.torsion(),
        projection,
    }
}

/// Basis (columns) of the saturation `(Q·L) ∩ Z^n` of the column span of `L`.
pub fn saturate(l: &IntMatrix) -> IntMatrix {
    let n = l.rows;
    let orth = kernel_saturated(&l.transpose());
    let sat = if orth.cols == 0 {
        IntMatrix::identity(n)
    } else {
        kernel_saturated(&orth.transpose())
    };
    let (basis, _) = row_lattice_basis(&sat.transpose());
    if basis.rows == 0 {
        IntMatrix::zeros(n, 0)
    } else {
        basis.transpose()
    }
}

/// gcd of all maximal minors; zero unless `A` has full rank.
pub fn gcd_maximal_minors(a: &IntMatrix) -> BigInt {
    let d = snf(a);
    let factors = d.invariant_factors();
    if factors.len() < a.rows.min(a.cols) {
        return BigInt::zero();
    }
    factors.iter().fold(BigInt::one(), |acc, x| acc * x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    pub x: Vec<BigInt>,
    /// Whether the solution is unique, i.e. `A` has trivial kernel.
    pub unique: bool,
}

/// Integer solution of `A·x = b`, or `None` if there is none over Z.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<IntegerSolution>, LinAlgError> {
    if b.len() != a.rows {
        return Err(LinAlgError::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows
        )));
    }
    snf(a).solve(b)
}

pub fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn hnf_identity() {
        let (h, u) = hnf(&IntMatrix::identity(3));
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));
    }

    #[test]
    fn hnf_rank_one_content_two() {
        let a = m(&[&[2, 4], &[4, 8]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, m(&[&[2, 4], &[0, 0]]));
        assert_eq!(u.mul(&a), h);
        assert_eq!(u.determinant().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn hnf_permutation() {
        let a = m(&[&[0, 1], &[1, 0]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u, a);
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let a = m(&[&[3, 5, 7], &[0, 2, 9], &[0, 0, 4]]);
        let (h, u) = hnf(&a);
        assert_eq!(u.mul(&a), h);
        for (i, &pc) in echelon_pivots(&h).iter().enumerate() {
            assert!(h.get(i, pc).is_positive());
            for r in 0..i {
                assert!(!h.get(r, pc).is_negative() && h.get(r, pc) < h.get(i, pc));
            }
        }
    }

    #[test]
    fn snf_small_cases() {
        assert_eq!(snf(&IntMatrix::identity(2)).s, IntMatrix::identity(2));
        let a = m(&[&[2, 4], &[4, 8]]);
        let d = snf(&a);
        assert_eq!(d.s, m(&[&[2, 0], &[0, 0]]));
        assert_eq!(d.u.mul(&a).mul(&d.v), d.s);
    }

    #[test]
    fn snf_enforces_divisibility() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let d = snf(&a);
        assert_eq!(d.invariant_factors(), to_bigints(&[1, 6]));
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&IntMatrix::zeros(3, 4)), 0);
        let a = m(&[&[2, 0], &[0, 2]]);
        assert_eq!(rank(&a), 2);
        assert_eq!(rank_mod_p(&a, 2).unwrap(), 0);
        assert_eq!(rank_mod_p(&a, 3).unwrap(), 2);
        assert_eq!(rank_mod_p(&a, 4), Err(LinAlgError::NotPrime(4)));
        assert_eq!(rank_mod_p(&a, 1), Err(LinAlgError::NotPrime(1)));
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel_saturated(&IntMatrix::identity(3)).cols(), 0);
        let k = kernel_saturated(&m(&[&[1, 1]]));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(v == to_bigints(&[1, -1]) || v == to_bigints(&[-1, 1]));
        // content two in the defining row does not affect the kernel lattice
        let k = kernel_saturated(&m(&[&[2, 4, 6]]));
        assert_eq!(k.cols(), 2);
        assert_eq!(saturate(&k), k);
    }

    #[test]
    fn kernel_mod_two() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let k = kernel_mod_p(&a, 2).unwrap();
        assert_eq!(k, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn cokernels() {
        let c = cokernel(&IntMatrix::zeros(3, 2));
        assert_eq!(c.free_rank, 3);
        assert!(c.invariant_factors.is_empty());
        let c = cokernel(&m(&[&[2]]));
        assert_eq!(c.free_rank, 0);
        assert_eq!(c.invariant_factors, to_bigints(&[2]));
        let a = m(&[&[1, 0], &[1, 2], &[0, 0]]);
        let c = cokernel(&a);
        assert_eq!(c.free_rank, 1);
        assert_eq!(c.invariant_factors, to_bigints(&[2]));
        assert!(c.projection.mul(&a).is_zero());
    }

    #[test]
    fn saturation() {
        let l = m(&[&[2, 0], &[0, 2]]);
        assert_eq!(saturate(&l), IntMatrix::identity(2));
        let l = m(&[&[2], &[4]]);
        assert_eq!(saturate(&l).column(0), to_bigints(&[1, 2]));
        assert_eq!(saturate(&IntMatrix::zeros(3, 0)).cols(), 0);
    }

    #[test]
    fn maximal_minors() {
        assert_eq!(gcd_maximal_minors(&IntMatrix::identity(4)), BigInt::one());
        assert_eq!(gcd_maximal_minors(&m(&[&[2, 0], &[0, 3]])), BigInt::from(6));
        assert_eq!(gcd_maximal_minors(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
        // 3x2 with minors 2, 4, 4
        assert_eq!(gcd_maximal_minors(&m(&[&[1, 1], &[1, 3], &[0, 4]])), BigInt::from(2));
    }

    #[test]
    fn integer_solutions() {
        let id = IntMatrix::identity(3);
        let b = to_bigints(&[4, -1, 7]);
        let s = solve_integer(&id, &b).unwrap().unwrap();
        assert_eq!(s.x, b);
        assert!(s.unique);
        assert_eq!(solve_integer(&m(&[&[2]]), &to_bigints(&[1])).unwrap(), None);
        let s = solve_integer(&m(&[&[1, 1]]), &to_bigints(&[3])).unwrap().unwrap();
        assert!(!s.unique);
        assert!(solve_integer(&id, &to_bigints(&[1])).is_err());
    }

    #[test]
    fn row_basis_coordinates() {
        let a = m(&[&[2, 4, 0], &[0, 6, 3], &[2, 10, 3]]);
        let (b, c) = row_lattice_basis(&a);
        assert_eq!(b.rows(), 2);
        assert_eq!(c.mul(&a), b);
        let v = to_bigints(&[4, 14, 3]);
        let x = solve_in_row_basis(&b, &v).unwrap();
        let back: Vec<BigInt> = (0..3)
            .map(|j| (0..2).fold(BigInt::zero(), |acc, i| acc + &x[i] * b.get(i, j)))
            .collect();
        assert_eq!(back, v);
        assert!(solve_in_row_basis(&b, &to_bigints(&[1, 0, 0])).is_none());
    }

    #[test]
    fn determinant_bareiss() {
        let a = m(&[&[0, 2, 1], &[3, 1, 0], &[1, 1, 1]]);
        assert_eq!(a.determinant().unwrap(), BigInt::from(-4));
    }
}
