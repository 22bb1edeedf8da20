//! Exact integer linear algebra: dense matrices over `BigInt`, Smith normal
//! form with unimodular transforms, integer solving and saturated kernels.
//!
//! The elimination runs on `i128` with checked arithmetic first and restarts
//! on `BigInt` if any intermediate overflows. Both paths use the same pivot
//! rule and floor division, so the transforms they return are identical.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::LinalgError;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from small-integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`IntMatrix::from_rows`] but with an explicit column count, so
    /// that matrices with zero rows keep their width.
    pub fn from_rows_with_cols<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        IntMatrix { rows: n, cols, data }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<BigInt>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigInt) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Matrix product; panics on shape mismatch.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * cols + j] = self.get(i, j).clone();
            }
            for j in 0..other.cols {
                out.data[i * cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        IntMatrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + jj] = self.get(i, j).clone();
            }
        }
        out
    }

    fn to_i128_rows(&self) -> Option<Vec<Vec<i128>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i128()).collect())
            .collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Result of [`smith_normal_form`]: `u * a * v == d` with `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub invariants: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

/// Smith normal form with all four transforms.
///
/// Pivot rule: smallest nonzero absolute value in the active block, ties broken
/// by lowest (row, column) index. The output is a deterministic function of
/// the input.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = a.shape();
    let track = Track { u: true, u_inv: true, v: true, v_inv: true };
    let out = match a.to_i128_rows() {
        Some(rows) => run_snf::<i128>(rows, m, n, track).ok(),
        None => None,
    };
    let (d, u, u_inv, v, v_inv) = match out {
        Some(w) => w.into_big(),
        None => {
            let rows = (0..m).map(|i| a.row(i).to_vec()).collect();
            run_snf::<BigInt>(rows, m, n, track)
                .expect("BigInt elimination cannot overflow")
                .into_big()
        }
    };
    let invariants = (0..m.min(n))
        .map(|i| d.get(i, i).clone())
        .take_while(|x| !x.is_zero())
        .collect();
    SmithForm {
        u: u.expect("tracked"),
        u_inv: u_inv.expect("tracked"),
        d,
        v: v.expect("tracked"),
        v_inv: v_inv.expect("tracked"),
        invariants,
    }
}

/// Solves `a x = b` over the integers. Returns `Ok(None)` when `b` is not in
/// the integer column span of `a`.
pub fn solve_linear(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let snf = smith_normal_form(a);
    Ok(solve_with(&snf, b))
}

/// Solves using a precomputed Smith form of `a`.
pub fn solve_with(snf: &SmithForm, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ub = snf.u.mul_vec(b);
    let r = snf.rank();
    let mut y = vec![BigInt::zero(); snf.v.rows()];
    for (i, c) in ub.iter().enumerate() {
        if i < r {
            let (q, rem) = c.div_rem(&snf.invariants[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Saturated basis of the integer kernel of `a`, as the columns of the result.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let idx: Vec<usize> = (snf.rank()..a.cols()).collect();
    snf.v.select_cols(&idx)
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    smith_normal_form(a).rank()
}

// ---------------------------------------------------------------------------
// Elimination engine, generic over the scalar so the fast path and the exact
// fallback share one implementation.

#[derive(Clone, Copy)]
struct Track {
    u: bool,
    u_inv: bool,
    v: bool,
    v_inv: bool,
}

#[derive(Debug)]
struct Overflow;

trait Scalar: Clone + PartialEq + Sized {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn floor_div(&self, d: &Self) -> Self;
    fn divides(&self, x: &Self) -> bool;
    /// `self - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Result<Self, Overflow>;
    fn neg(&self) -> Result<Self, Overflow>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i128 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn floor_div(&self, d: &Self) -> Self {
        let q = self / d;
        if self % d != 0 && ((*self < 0) != (*d < 0)) {
            q - 1
        } else {
            q
        }
    }
    fn divides(&self, x: &Self) -> bool {
        x % self == 0
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Result<Self, Overflow> {
        q.checked_mul(*b)
            .and_then(|p| self.checked_sub(p))
            .ok_or(Overflow)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn floor_div(&self, d: &Self) -> Self {
        Integer::div_floor(self, d)
    }
    fn divides(&self, x: &Self) -> bool {
        Zero::is_zero(&(x % self))
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Result<Self, Overflow> {
        Ok(self - q * b)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        Ok(-self.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type Mat<T> = Vec<Vec<T>>;

fn ident<T: Scalar>(n: usize) -> Mat<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::unit() } else { T::nil() }).collect())
        .collect()
}

struct Work<T> {
    a: Mat<T>,
    m: usize,
    n: usize,
    u: Option<Mat<T>>,
    u_inv: Option<Mat<T>>,
    v: Option<Mat<T>>,
    v_inv: Option<Mat<T>>,
}

type BigOut = (
    IntMatrix,
    Option<IntMatrix>,
    Option<IntMatrix>,
    Option<IntMatrix>,
    Option<IntMatrix>,
);

fn to_int_matrix<T: Scalar>(m: &Mat<T>, rows: usize, cols: usize) -> IntMatrix {
    let data = m.iter().flat_map(|r| r.iter().map(Scalar::to_big)).collect();
    IntMatrix { rows, cols, data }
}

impl<T: Scalar> Work<T> {
    fn into_big(self) -> BigOut {
        let (m, n) = (self.m, self.n);
        (
            to_int_matrix(&self.a, m, n),
            self.u.as_ref().map(|x| to_int_matrix(x, m, m)),
            self.u_inv.as_ref().map(|x| to_int_matrix(x, m, m)),
            self.v.as_ref().map(|x| to_int_matrix(x, n, n)),
            self.v_inv.as_ref().map(|x| to_int_matrix(x, n, n)),
        )
    }

    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &T) -> Result<(), Overflow> {
        if q.is_nil() {
            return Ok(());
        }
        sub_row(&mut self.a, i, t, q)?;
        if let Some(u) = self.u.as_mut() {
            sub_row(u, i, t, q)?;
        }
        if let Some(ui) = self.u_inv.as_mut() {
            // inverse op on the right: col_t += q * col_i
            let nq = q.neg()?;
            sub_col(ui, t, i, &nq)?;
        }
        Ok(())
    }

    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &T) -> Result<(), Overflow> {
        if q.is_nil() {
            return Ok(());
        }
        sub_col(&mut self.a, j, t, q)?;
        if let Some(v) = self.v.as_mut() {
            sub_col(v, j, t, q)?;
        }
        if let Some(vi) = self.v_inv.as_mut() {
            // inverse op on the left: row_t += q * row_j
            let nq = q.neg()?;
            sub_row(vi, t, j, &nq)?;
        }
        Ok(())
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        self.a.swap(i, k);
        if let Some(u) = self.u.as_mut() {
            u.swap(i, k);
        }
        if let Some(ui) = self.u_inv.as_mut() {
            for r in ui.iter_mut() {
                r.swap(i, k);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for r in self.a.iter_mut() {
            r.swap(j, k);
        }
        if let Some(v) = self.v.as_mut() {
            for r in v.iter_mut() {
                r.swap(j, k);
            }
        }
        if let Some(vi) = self.v_inv.as_mut() {
            vi.swap(j, k);
        }
    }

    fn neg_row(&mut self, i: usize) -> Result<(), Overflow> {
        for x in self.a[i].iter_mut() {
            *x = x.neg()?;
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[i].iter_mut() {
                *x = x.neg()?;
            }
        }
        if let Some(ui) = self.u_inv.as_mut() {
            for r in ui.iter_mut() {
                r[i] = r[i].neg()?;
            }
        }
        Ok(())
    }

    /// Smallest nonzero |a| in the block `t.., t..`, ties by lowest index.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if x.is_nil() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if !x.abs_lt(&self.a[bi][bj]) => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn eliminate(&mut self) -> Result<(), Overflow> {
        let k = self.m.min(self.n);
        for t in 0..k {
            let Some((pi, pj)) = self.find_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // Clear column t below the pivot.
                let mut residue = false;
                for i in t + 1..self.m {
                    if self.a[i][t].is_nil() {
                        continue;
                    }
                    let q = self.a[i][t].floor_div(&self.a[t][t]);
                    self.row_sub(i, t, &q)?;
                    residue |= !self.a[i][t].is_nil();
                }
                if residue {
                    let i = self.smallest_in_col(t);
                    self.swap_rows(t, i);
                    continue;
                }
                // Clear row t right of the pivot.
                for j in t + 1..self.n {
                    if self.a[t][j].is_nil() {
                        continue;
                    }
                    let q = self.a[t][j].floor_div(&self.a[t][t]);
                    self.col_sub(j, t, &q)?;
                    residue |= !self.a[t][j].is_nil();
                }
                if residue {
                    let j = self.smallest_in_row(t);
                    self.swap_cols(t, j);
                    continue;
                }
                // Enforce divisibility of the remaining block by the pivot.
                match self.first_non_multiple(t) {
                    Some(i) => {
                        let minus_one = T::unit().neg()?;
                        self.row_sub(t, i, &minus_one)?;
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_neg() {
                self.neg_row(t)?;
            }
        }
        Ok(())
    }

    fn smallest_in_col(&self, t: usize) -> usize {
        let mut best = t;
        for i in t..self.m {
            let x = &self.a[i][t];
            if !x.is_nil() && (self.a[best][t].is_nil() || x.abs_lt(&self.a[best][t])) {
                best = i;
            }
        }
        best
    }

    fn smallest_in_row(&self, t: usize) -> usize {
        let mut best = t;
        for j in t..self.n {
            let x = &self.a[t][j];
            if !x.is_nil() && (self.a[t][best].is_nil() || x.abs_lt(&self.a[t][best])) {
                best = j;
            }
        }
        best
    }

    fn first_non_multiple(&self, t: usize) -> Option<usize> {
        let p = &self.a[t][t];
        for i in t + 1..self.m {
            for j in t + 1..self.n {
                if !self.a[i][j].is_nil() && !p.divides(&self.a[i][j]) {
                    return Some(i);
                }
            }
        }
        None
    }
}

fn sub_row<T: Scalar>(m: &mut Mat<T>, i: usize, t: usize, q: &T) -> Result<(), Overflow> {
    let (src, dst) = if i < t {
        let (lo, hi) = m.split_at_mut(t);
        (&hi[0], &mut lo[i])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&lo[t], &mut hi[0])
    };
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        if !s.is_nil() {
            *d = d.sub_mul(q, s)?;
        }
    }
    Ok(())
}

fn sub_col<T: Scalar>(m: &mut Mat<T>, j: usize, t: usize, q: &T) -> Result<(), Overflow> {
    for r in m.iter_mut() {
        if !r[t].is_nil() {
            let s = r[t].clone();
            r[j] = r[j].sub_mul(q, &s)?;
        }
    }
    Ok(())
}

fn run_snf<T: Scalar>(a: Mat<T>, m: usize, n: usize, track: Track) -> Result<Work<T>, Overflow> {
    let mut w = Work {
        a,
        m,
        n,
        u: track.u.then(|| ident(m)),
        u_inv: track.u_inv.then(|| ident(m)),
        v: track.v.then(|| ident(n)),
        v_inv: track.v_inv.then(|| ident(n)),
    };
    w.eliminate()?;
    Ok(w)
}

/// Convenience: a vector of `BigInt` from small integers.
pub fn bigvec(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}
