//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers ([`Int`]) or
//! rationals ([`Rat`]). There is no floating point anywhere in the crate; the
//! lattice computations (Hermite and Smith forms, gcd of maximal minors,
//! saturation) are the ones the push-forward multiplicities and the primitive
//! normals are built from.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("rank of the image ({image}) is below the rank of the lattice ({lattice})")]
    RankDrop { image: usize, lattice: usize },
    #[error("generator matrix is zero")]
    ZeroLattice,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system has a positive-dimensional solution set")]
    Underdetermined,
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

impl LinalgError {
    pub fn variant_name(&self) -> &'static str {
        match self {
            LinalgError::RankDrop { .. } => "RankDrop",
            LinalgError::ZeroLattice => "ZeroLattice",
            LinalgError::Inconsistent => "Inconsistent",
            LinalgError::Underdetermined => "Underdetermined",
            LinalgError::ZeroVector => "ZeroVector",
            LinalgError::DimensionMismatch(_) => "DimensionMismatch",
        }
    }
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_from_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

/// A rational vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactVector {
    entries: Vec<Rat>,
}

impl ExactVector {
    pub fn new(entries: Vec<Rat>) -> Self {
        ExactVector { entries }
    }

    pub fn from_ints(v: &[Int]) -> Self {
        ExactVector { entries: v.iter().map(rat_from_int).collect() }
    }

    pub fn from_i64(v: &[i64]) -> Self {
        ExactVector { entries: v.iter().map(|&x| Rat::from_integer(Int::from(x))).collect() }
    }

    pub fn zeros(dim: usize) -> Self {
        ExactVector { entries: vec![Rat::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rat> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.is_integer())
    }

    pub fn is_primitive(&self) -> bool {
        match self.to_integral() {
            Some(v) => gcd_slice(&v).is_one(),
            None => false,
        }
    }

    /// The integer entries, or `None` if some entry has a denominator.
    pub fn to_integral(&self) -> Option<Vec<Int>> {
        self.entries.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
    }

    pub fn dot(&self, other: &ExactVector) -> Rat {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for ExactVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        IntMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[Vec<Int>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned());
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Int>> = rows.iter().map(|r| ints(r)).collect();
        IntMatrix::from_rows(&rows, cols)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Int>], rows: usize) -> Self {
        let mut m = IntMatrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column of wrong length");
            for (i, x) in c.iter().enumerate() {
                m.data[i * columns.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Int {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Int) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn column_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
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
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Int]) -> Result<Vec<Int>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn to_exact(&self) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(rat_from_int).collect(),
        }
    }

    /// Determinant by fraction-free elimination. Panics if not square.
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.row_vecs();
        let (pivots, swaps) = bareiss_echelon(&mut m);
        if pivots.len() < self.rows {
            return Int::zero();
        }
        if self.rows == 0 {
            return Int::one();
        }
        let det = m[self.rows - 1][self.cols - 1].clone();
        if swaps % 2 == 1 {
            -det
        } else {
            det
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.row_vecs();
        bareiss_echelon(&mut m).0.len()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ";")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// A dense rational matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        ExactMatrix { rows, cols, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_i64_rows(rows).to_exact()
    }

    pub fn from_rows(rows: &[Vec<Rat>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned());
        }
        ExactMatrix { rows: rows.len(), cols, data }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::identity(n).to_exact()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_integral(&self) -> Option<IntMatrix> {
        let data: Option<Vec<Int>> =
            self.data.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect();
        data.map(|d| IntMatrix::new(self.rows, self.cols, d))
    }

    /// Each row multiplied by the lcm of its denominators. Same row space,
    /// same kernel, same solutions when applied to an augmented system.
    pub fn rows_scaled_to_integers(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|r| scale_to_integral(self.row(r))).collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.rows_scaled_to_integers();
        bareiss_echelon(&mut m).0.len()
    }
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

pub fn dot_rat_int(a: &[Rat], b: &[Int]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * rat_from_int(y)).sum()
}

pub fn gcd_slice(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Multiplies by the positive lcm of the denominators.
pub fn scale_to_integral(v: &[Rat]) -> Vec<Int> {
    let l = v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
    v.iter().map(|x| (x * rat_from_int(&l)).to_integer()).collect()
}

/// Divides an integer vector by the gcd of its entries. Direction is kept.
pub fn primitive_int(v: &[Int]) -> Result<Vec<Int>, LinalgError> {
    let g = gcd_slice(v);
    if g.is_zero() {
        return Err(LinalgError::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Scales `v` by a positive rational so that its entries are coprime integers.
pub fn make_primitive(v: &ExactVector) -> Result<ExactVector, LinalgError> {
    let scaled = scale_to_integral(v.entries());
    primitive_int(&scaled).map(|p| ExactVector::from_ints(&p))
}

/// Flips the sign so that the first nonzero entry is positive.
pub fn normalize_sign(v: &mut [Int]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

/// Extended gcd with `g >= 0` and `x*a + y*b == g`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (Int::one(), Int::zero());
    let (mut old_t, mut t) = (Int::zero(), Int::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Fraction-free (Bareiss) row echelon form, in place.
///
/// Returns the pivot positions `(row, col)` and the number of row swaps.
/// After the call, entry `(k, j)` for `j` at or right of the k-th pivot is the
/// minor on pivot rows/columns `0..=k` with column `j` substituted last.
pub fn bareiss_echelon(m: &mut [Vec<Int>]) -> (Vec<(usize, usize)>, usize) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = Int::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            swaps += 1;
        }
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[c].clone();
        for row in bottom.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = Int::zero();
        }
        // Earlier rows keep their values; later rows are now divided by `prev`.
        prev = pivot;
        pivots.push((r, c));
        r += 1;
    }
    (pivots, swaps)
}

fn rows_of(m: &IntMatrix) -> Vec<Vec<Int>> {
    m.row_vecs()
}

/// Row Hermite normal form.
///
/// Returns `(H, U)` with `U` unimodular and `H = U * M`: pivots positive,
/// entries above each pivot reduced into `[0, pivot)`, zero rows last.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = rows_of(m);
    let mut u = rows_of(&IntMatrix::identity(rows));
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        for i in pr + 1..rows {
            if h[i][c].is_zero() {
                continue;
            }
            let a = h[pr][c].clone();
            let b = h[i][c].clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let ag = &a / &g;
            let bg = &b / &g;
            combine_rows(&mut h, pr, i, &x, &y, &bg, &ag);
            combine_rows(&mut u, pr, i, &x, &y, &bg, &ag);
        }
        if h[pr][c].is_zero() {
            continue;
        }
        if h[pr][c].is_negative() {
            negate_row(&mut h[pr]);
            negate_row(&mut u[pr]);
        }
        for i in 0..pr {
            let q = h[i][c].div_floor(&h[pr][c]);
            if !q.is_zero() {
                sub_row_multiple(&mut h, i, pr, &q);
                sub_row_multiple(&mut u, i, pr, &q);
            }
        }
        pr += 1;
    }
    (IntMatrix::from_rows(&h, cols), IntMatrix::from_rows(&u, rows))
}

/// `row_p <- x*row_p + y*row_i`, `row_i <- -bg*row_p + ag*row_i` (determinant one).
fn combine_rows(m: &mut [Vec<Int>], p: usize, i: usize, x: &Int, y: &Int, bg: &Int, ag: &Int) {
    let width = m[p].len();
    for j in 0..width {
        let a = m[p][j].clone();
        let b = m[i][j].clone();
        if a.is_zero() && b.is_zero() {
            continue;
        }
        m[p][j] = x * &a + y * &b;
        m[i][j] = ag * &b - bg * &a;
    }
}

fn negate_row(r: &mut [Int]) {
    for x in r.iter_mut() {
        *x = -x.clone();
    }
}

fn sub_row_multiple(m: &mut [Vec<Int>], target: usize, src: usize, q: &Int) {
    let width = m[src].len();
    for j in 0..width {
        if !m[src][j].is_zero() {
            let d = q * &m[src][j];
            m[target][j] -= d;
        }
    }
}

/// Gcd of the absolute values of all maximal minors; zero iff rank-deficient.
///
/// Computed from the Hermite form: left multiplication by a unimodular matrix
/// leaves the gcd of maximal minors unchanged, and a full-rank Hermite form
/// has a single nonzero maximal minor, the product of its pivots.
pub fn gcd_maximal_minors(m: &IntMatrix) -> Int {
    let m = if m.rows() < m.cols() { m.transpose() } else { m.clone() };
    let k = m.cols();
    if k == 0 {
        return Int::one();
    }
    let (h, _) = hermite_normal_form(&m);
    let mut prod = Int::one();
    for i in 0..k {
        let p = h.get(i, i);
        if p.is_zero() {
            return Int::zero();
        }
        prod *= p;
    }
    prod.abs()
}

/// A basis (as columns) of the lattice generated by the columns of `b`.
fn lattice_basis_columns(b: &IntMatrix) -> IntMatrix {
    if b.rank() == b.cols() {
        return b.clone();
    }
    let (h, _) = hermite_normal_form(&b.transpose());
    let nonzero: Vec<Vec<Int>> =
        h.row_vecs().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    IntMatrix::from_rows(&nonzero, b.rows()).transpose()
}

/// Index of `A(D)` in the integer points of its real span, relative to the
/// saturation of `D`, where `D` is generated by the columns of `b`:
/// `gcd_maximal_minors(A*B) / gcd_maximal_minors(B)`.
pub fn lattice_index(a: &IntMatrix, b: &IntMatrix) -> Result<Int, LinalgError> {
    if b.is_zero() {
        return Err(LinalgError::ZeroLattice);
    }
    let basis = lattice_basis_columns(b);
    let ab = a.mul(&basis)?;
    let image = ab.rank();
    let lattice = basis.cols();
    if image < lattice {
        return Err(LinalgError::RankDrop { image, lattice });
    }
    let num = gcd_maximal_minors(&ab);
    let den = gcd_maximal_minors(&basis);
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// Diagonal of the Smith normal form (nonnegative, each dividing the next),
/// computed by direct row and column elimination.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<Int> {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.row_vecs();
    let n = rows.min(cols);
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        let Some((pi, pj)) = smallest_nonzero(&a, t, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                sub_row_multiple(&mut a, i, t, &q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let (pi, pj) = smallest_in_cross(&a, t);
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            let pivot = a[t][t].clone();
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &pivot).is_zero()));
            match offending {
                Some(i) => {
                    for j in 0..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn smallest_nonzero(a: &[Vec<Int>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, x) in row.iter().enumerate().skip(c0) {
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[bi][bj].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn smallest_in_cross(a: &[Vec<Int>], t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_abs: Option<Int> = None;
    let mut consider = |i: usize, j: usize, x: &Int| {
        if !x.is_zero() && best_abs.as_ref().is_none_or(|b| x.abs() < *b) {
            best = (i, j);
            best_abs = Some(x.abs());
        }
    };
    for (i, row) in a.iter().enumerate().skip(t) {
        consider(i, t, &row[t]);
    }
    for j in t..a[t].len() {
        consider(t, j, &a[t][j]);
    }
    best
}

/// Product of the elementary divisors of a full-column-rank integer matrix.
pub fn smith_index_oracle(m: &IntMatrix) -> Result<Int, LinalgError> {
    let diag = smith_diagonal(m);
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    if rank < m.cols() {
        return Err(LinalgError::RankDrop { image: rank, lattice: m.cols() });
    }
    Ok(diag.iter().fold(Int::one(), |p, x| p * x))
}

/// Solves `M x = b` exactly.
///
/// Uses fraction-free elimination on the integer-scaled augmented system and
/// rational back substitution. Reports `Inconsistent` before
/// `Underdetermined` when both apply.
pub fn solve_exact(m: &ExactMatrix, b: &ExactVector) -> Result<ExactVector, LinalgError> {
    if b.dim() != m.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "{} equations but right-hand side of length {}",
            m.rows(),
            b.dim()
        )));
    }
    let cols = m.cols();
    let mut aug: Vec<Vec<Int>> = (0..m.rows())
        .map(|r| {
            let mut row: Vec<Rat> = m.row(r).to_vec();
            row.push(b.entries()[r].clone());
            scale_to_integral(&row)
        })
        .collect();
    let (pivots, _) = bareiss_echelon(&mut aug);
    if pivots.iter().any(|&(_, c)| c == cols) {
        return Err(LinalgError::Inconsistent);
    }
    if pivots.len() < cols {
        return Err(LinalgError::Underdetermined);
    }
    let mut x = vec![Rat::zero(); cols];
    for &(r, c) in pivots.iter().rev() {
        let mut acc = rat_from_int(&aug[r][cols]);
        for j in c + 1..cols {
            if !aug[r][j].is_zero() {
                acc -= rat_from_int(&aug[r][j]) * &x[j];
            }
        }
        x[c] = acc / rat_from_int(&aug[r][c]);
    }
    Ok(ExactVector::new(x))
}

/// Z-basis of `{x in Z^n : row . x = 0 for every row}`.
///
/// The basis is saturated (a basis of the full kernel lattice) and returned
/// in Hermite normal form, so each vector is primitive with its first
/// nonzero entry positive.
pub fn integer_kernel(rows: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let mt = IntMatrix::from_rows(rows, n).transpose();
    let (h, u) = hermite_normal_form(&mt);
    let basis: Vec<Vec<Int>> = (0..n)
        .filter(|&r| h.row(r).iter().all(Zero::is_zero))
        .map(|r| u.row(r).to_vec())
        .collect();
    hermite_rows(&basis, n)
}

/// Nonzero rows of the Hermite form of the given rows.
pub fn hermite_rows(rows: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let (h, _) = hermite_normal_form(&IntMatrix::from_rows(rows, n));
    h.row_vecs().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

/// Primitive integral basis of the right kernel of `m`.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<ExactVector> {
    let rows = m.rows_scaled_to_integers();
    integer_kernel(&rows, m.cols()).iter().map(|v| ExactVector::from_ints(v)).collect()
}

/// Z-basis of `span(gens) ∩ Z^n`, in Hermite normal form.
pub fn saturate(gens: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    if gens.iter().all(|g| g.iter().all(Zero::is_zero)) {
        return Vec::new();
    }
    let orth = integer_kernel(gens, n);
    integer_kernel(&orth, n)
}

pub fn rank_of(rows: &[Vec<Int>]) -> usize {
    let mut m = rows.to_vec();
    bareiss_echelon(&mut m).0.len()
}

/// Index of the lattice generated by `gens` inside `span(gens) ∩ Z^n`.
/// The generators may be dependent. Returns 1 for an empty or zero set.
pub fn saturation_index(gens: &[Vec<Int>], n: usize) -> Int {
    let basis = hermite_rows(gens, n);
    if basis.is_empty() {
        return Int::one();
    }
    gcd_maximal_minors(&IntMatrix::from_rows(&basis, n))
}

/// Inverse of a square rational matrix, or `None` if singular.
pub fn inverse(m: &ExactMatrix) -> Option<ExactMatrix> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "inverse of a non-square matrix");
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.extend((0..n).map(|c| if c == r { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let d = &f * &a[c][j];
                    a[r][j] -= d;
                }
            }
        }
    }
    let rows: Vec<Vec<Rat>> = a.into_iter().map(|r| r[n..].to_vec()).collect();
    Some(ExactMatrix::from_rows(&rows, n))
}

/// Orthogonal projection onto the complement of a fixed subspace.
#[derive(Clone, Debug)]
pub struct OrthProjector {
    basis: Vec<Vec<Int>>,
    gram_inv: Option<ExactMatrix>,
}

impl OrthProjector {
    /// `basis` must be linearly independent.
    pub fn new(basis: &[Vec<Int>]) -> Self {
        if basis.is_empty() {
            return OrthProjector { basis: Vec::new(), gram_inv: None };
        }
        let k = basis.len();
        let gram: Vec<Vec<Rat>> = basis
            .iter()
            .map(|a| basis.iter().map(|b| rat_from_int(&dot(a, b))).collect())
            .collect();
        let gram_inv = inverse(&ExactMatrix::from_rows(&gram, k));
        assert!(gram_inv.is_some(), "projector basis must be independent");
        OrthProjector { basis: basis.to_vec(), gram_inv }
    }

    pub fn project(&self, v: &[Int]) -> Vec<Rat> {
        let mut out: Vec<Rat> = v.iter().map(rat_from_int).collect();
        let Some(gi) = &self.gram_inv else {
            return out;
        };
        let k = self.basis.len();
        let lv: Vec<Rat> = self.basis.iter().map(|b| rat_from_int(&dot(b, v))).collect();
        for i in 0..k {
            let coeff: Rat = (0..k).map(|j| gi.get(i, j) * &lv[j]).sum();
            if coeff.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(&self.basis[i]) {
                *o -= &coeff * rat_from_int(b);
            }
        }
        out
    }

    /// Projection made primitive, or `None` if `v` lies in the subspace.
    pub fn reduce_primitive(&self, v: &[Int]) -> Option<Vec<Int>> {
        primitive_int(&scale_to_integral(&self.project(v))).ok()
    }
}
