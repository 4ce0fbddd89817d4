//! Small exact linear algebra: dense matrices generic over a num-traits
//! scalar, Hermite/Smith normal forms over the integers, rational
//! elimination, and characteristic polynomials. Everything here is sized for
//! rank <= 8 lattices and root lists of a few hundred vectors.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::Int;

/// Scalar usable as a matrix entry.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}
impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Debug> Debug for Mat<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)].clone();
                if a == T::zero() {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] = out[(r, c)].clone() + a.clone() * other[(k, c)].clone();
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "dimension mismatch");
        (0..self.cols)
            .map(|c| {
                (0..self.rows).fold(T::zero(), |acc, r| acc + v[r].clone() * self[(r, c)].clone())
            })
            .collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn block_diag(blocks: &[Mat<T>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out[(r0 + r, c0 + c)] = b[(r, c)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

/// Gauss-Jordan inverse over a field scalar. None if singular.
pub fn inverse<T>(m: &Mat<T>) -> Option<Mat<T>>
where
    T: Scalar + Div<Output = T>,
{
    assert_eq!(m.nrows(), m.ncols());
    let n = m.nrows();
    let mut a = m.clone();
    let mut inv = Mat::<T>::identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[(r, col)] != T::zero())?;
        if pivot != col {
            for c in 0..n {
                a.data.swap(pivot * n + c, col * n + c);
                inv.data.swap(pivot * n + c, col * n + c);
            }
        }
        let p = a[(col, col)].clone();
        for c in 0..n {
            a[(col, c)] = a[(col, c)].clone() / p.clone();
            inv[(col, c)] = inv[(col, c)].clone() / p.clone();
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[(r, col)].clone();
            if f == T::zero() {
                continue;
            }
            for c in 0..n {
                a[(r, c)] = a[(r, c)].clone() - f.clone() * a[(col, c)].clone();
                inv[(r, c)] = inv[(r, c)].clone() - f.clone() * inv[(col, c)].clone();
            }
        }
    }
    Some(inv)
}

/// Rank over a field scalar, by elimination.
pub fn rank<T>(m: &Mat<T>) -> usize
where
    T: Scalar + Div<Output = T>,
{
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut a = m.clone();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| a[(r, col)] != T::zero()) else {
            continue;
        };
        if pivot != rank {
            for c in 0..cols {
                a.data.swap(pivot * cols + c, rank * cols + c);
            }
        }
        let p = a[(rank, col)].clone();
        for r in rank + 1..rows {
            let f = a[(r, col)].clone() / p.clone();
            if f == T::zero() {
                continue;
            }
            for c in col..cols {
                a[(r, c)] = a[(r, c)].clone() - f.clone() * a[(rank, c)].clone();
            }
        }
        rank += 1;
    }
    rank
}

/// Smith normal form of an integer matrix: S = L * A * R with L, R
/// unimodular. Diagonal entries are nonnegative and each divides the next.
#[derive(Debug, Clone)]
pub struct Snf<T> {
    pub diag: Vec<T>,
    pub left: Mat<T>,
    pub right: Mat<T>,
}

pub fn smith_normal_form<T>(a: &Mat<T>) -> Snf<T>
where
    T: Scalar + Integer + Signed,
{
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut s = a.clone();
    let mut left = Mat::<T>::identity(rows);
    let mut right = Mat::<T>::identity(cols);
    let n = rows.min(cols);

    for t in 0..n {
        // Move a nonzero entry into the pivot slot.
        let Some((pr, pc)) = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .find(|&(r, c)| !s[(r, c)].is_zero())
        else {
            break;
        };
        swap_rows(&mut s, &mut left, t, pr);
        swap_cols(&mut s, &mut right, t, pc);

        loop {
            // Clear the pivot column with Euclidean row steps.
            let mut dirty = false;
            for r in t + 1..rows {
                while !s[(r, t)].is_zero() {
                    let q = s[(r, t)].div_floor(&s[(t, t)]);
                    row_sub(&mut s, &mut left, r, t, &q);
                    if !s[(r, t)].is_zero() {
                        swap_rows(&mut s, &mut left, r, t);
                        dirty = true;
                    }
                }
            }
            // Clear the pivot row with Euclidean column steps.
            for c in t + 1..cols {
                while !s[(t, c)].is_zero() {
                    let q = s[(t, c)].div_floor(&s[(t, t)]);
                    col_sub(&mut s, &mut right, c, t, &q);
                    if !s[(t, c)].is_zero() {
                        swap_cols(&mut s, &mut right, c, t);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }

        // Force divisibility: fold any lower-right entry the pivot misses.
        'divis: loop {
            for r in t + 1..rows {
                for c in t + 1..cols {
                    if !(s[(r, c)].clone() % s[(t, t)].clone()).is_zero() {
                        let one = T::one();
                        row_sub(&mut s, &mut left, t, r, &-one);
                        // Re-clear; the pivot may shrink.
                        clear_cross(&mut s, &mut left, &mut right, t);
                        continue 'divis;
                    }
                }
            }
            break;
        }

        if s[(t, t)].is_negative() {
            negate_row(&mut s, &mut left, t);
        }
    }

    let diag = (0..n).map(|i| s[(i, i)].clone()).collect();
    Snf { diag, left, right }
}

fn swap_rows<T: Scalar>(s: &mut Mat<T>, l: &mut Mat<T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..s.ncols() {
        let (ca, cb) = (s[(a, c)].clone(), s[(b, c)].clone());
        s[(a, c)] = cb;
        s[(b, c)] = ca;
    }
    for c in 0..l.ncols() {
        let (ca, cb) = (l[(a, c)].clone(), l[(b, c)].clone());
        l[(a, c)] = cb;
        l[(b, c)] = ca;
    }
}

fn swap_cols<T: Scalar>(s: &mut Mat<T>, r: &mut Mat<T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in 0..s.nrows() {
        let (ca, cb) = (s[(row, a)].clone(), s[(row, b)].clone());
        s[(row, a)] = cb;
        s[(row, b)] = ca;
    }
    for row in 0..r.nrows() {
        let (ca, cb) = (r[(row, a)].clone(), r[(row, b)].clone());
        r[(row, a)] = cb;
        r[(row, b)] = ca;
    }
}

/// row[a] -= q * row[b], tracked on the left transform.
fn row_sub<T: Scalar>(s: &mut Mat<T>, l: &mut Mat<T>, a: usize, b: usize, q: &T) {
    for c in 0..s.ncols() {
        s[(a, c)] = s[(a, c)].clone() - q.clone() * s[(b, c)].clone();
    }
    for c in 0..l.ncols() {
        l[(a, c)] = l[(a, c)].clone() - q.clone() * l[(b, c)].clone();
    }
}

/// col[a] -= q * col[b], tracked on the right transform.
fn col_sub<T: Scalar>(s: &mut Mat<T>, r: &mut Mat<T>, a: usize, b: usize, q: &T) {
    for row in 0..s.nrows() {
        s[(row, a)] = s[(row, a)].clone() - q.clone() * s[(row, b)].clone();
    }
    for row in 0..r.nrows() {
        r[(row, a)] = r[(row, a)].clone() - q.clone() * r[(row, b)].clone();
    }
}

fn negate_row<T: Scalar>(s: &mut Mat<T>, l: &mut Mat<T>, r: usize) {
    for c in 0..s.ncols() {
        s[(r, c)] = -s[(r, c)].clone();
    }
    for c in 0..l.ncols() {
        l[(r, c)] = -l[(r, c)].clone();
    }
}

fn clear_cross<T>(s: &mut Mat<T>, l: &mut Mat<T>, r: &mut Mat<T>, t: usize)
where
    T: Scalar + Integer + Signed,
{
    loop {
        let mut dirty = false;
        for row in t + 1..s.nrows() {
            while !s[(row, t)].is_zero() {
                let q = s[(row, t)].div_floor(&s[(t, t)]);
                row_sub(s, l, row, t, &q);
                if !s[(row, t)].is_zero() {
                    swap_rows(s, l, row, t);
                    dirty = true;
                }
            }
        }
        for col in t + 1..s.ncols() {
            while !s[(t, col)].is_zero() {
                let q = s[(t, col)].div_floor(&s[(t, t)]);
                col_sub(s, r, col, t, &q);
                if !s[(t, col)].is_zero() {
                    swap_cols(s, r, col, t);
                    dirty = true;
                }
            }
        }
        if !dirty {
            return;
        }
    }
}

/// Absolute determinant of a square integer matrix, via the Smith form.
pub fn abs_det(a: &Mat<Int>) -> u128 {
    assert_eq!(a.nrows(), a.ncols());
    let wide = a.map(|&x| x as i128);
    let snf = smith_normal_form(&wide);
    snf.diag.iter().fold(1u128, |acc, d| acc * d.unsigned_abs())
}

/// The lattice spanned by the rows of `basis`, with membership and integral
/// solving. Built once from the Smith form.
pub struct RowLattice {
    snf: Snf<i128>,
    rows: usize,
    cols: usize,
}

impl RowLattice {
    pub fn new(basis: &Mat<Int>) -> Self {
        let wide = basis.map(|&x| x as i128);
        RowLattice { snf: smith_normal_form(&wide), rows: basis.nrows(), cols: basis.ncols() }
    }

    pub fn rank(&self) -> usize {
        self.snf.diag.iter().filter(|d| **d != 0).count()
    }

    /// Invariant factors (nonzero Smith diagonal entries).
    pub fn invariant_factors(&self) -> Vec<u128> {
        self.snf.diag.iter().filter(|d| **d != 0).map(|d| d.unsigned_abs()).collect()
    }

    /// Solve x * basis = v over the integers. S = L*A*R, so x = y*L where
    /// y_i = (v*R)_i / s_i; membership fails when division fails or the
    /// tail of v*R is nonzero.
    pub fn solve(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.cols);
        let wide: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let w = self.snf.right.vec_mul(&wide);
        let n = self.snf.diag.len();
        let mut y = vec![0i128; self.rows];
        for (i, wi) in w.iter().enumerate() {
            if i < n && self.snf.diag[i] != 0 {
                if wi % self.snf.diag[i] != 0 {
                    return None;
                }
                y[i] = wi / self.snf.diag[i];
            } else if *wi != 0 {
                return None;
            }
        }
        let x = self.snf.left.vec_mul(&y);
        Some(x.iter().map(|&v| i128_to_int(v)).collect())
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.solve(v).is_some()
    }
}

fn i128_to_int(v: i128) -> Int {
    Int::try_from(v).expect("lattice coefficient overflow")
}

/// Characteristic polynomial det(tI - A) of an integer matrix, exact, monic,
/// returned as coefficients [c_0, ..., c_n] with c_n = 1. Faddeev-LeVerrier;
/// every division is exact.
pub fn char_poly(a: &Mat<Int>) -> Vec<Int> {
    assert_eq!(a.nrows(), a.ncols());
    let n = a.nrows();
    let a = a.map(|&x| x as i128);
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut m = Mat::<i128>::identity(n);
    for k in 1..=n {
        // m = A * m_{k-1} + c_{n-k+1} I at entry; then c_{n-k} = -tr(A m)/k.
        let am = a.mul_mat(&m);
        let tr: i128 = (0..n).map(|i| am[(i, i)]).sum();
        let c = -tr / (k as i128);
        debug_assert_eq!(-tr % (k as i128), 0, "Faddeev-LeVerrier division must be exact");
        coeffs[n - k] = c;
        m = am;
        for i in 0..n {
            m[(i, i)] += c;
        }
    }
    coeffs.iter().map(|&c| i128_to_int(c)).collect()
}

/// Evaluate a polynomial given as [c_0, ..., c_n] at an integer point.
pub fn poly_eval(coeffs: &[Int], x: Int) -> i128 {
    coeffs.iter().rev().fold(0i128, |acc, &c| acc * x as i128 + c as i128)
}

/// Multiply two integer polynomials in coefficient form.
pub fn poly_mul(a: &[Int], b: &[Int]) -> Vec<Int> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0 as Int; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Primes up to n inclusive.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let mut sieve = vec![true; (n + 1) as usize];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2;
    while p * p <= n {
        if sieve[p as usize] {
            let mut q = p * p;
            while q <= n {
                sieve[q as usize] = false;
                q += p;
            }
        }
        p += 1;
    }
    (2..=n).filter(|&i| sieve[i as usize]).collect()
}

/// Distinct prime factors of n, ascending.
pub fn prime_factors(mut n: u128) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as u64);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
