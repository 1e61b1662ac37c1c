//! Exact integer linear algebra: dense matrices over `BigInt`, Smith normal
//! form with transformation matrices, lattice solving and subquotients, and
//! a small F2 toolkit.
//!
//! Everything here is a pure function of its inputs. Matrices in this crate
//! are tiny (a few dozen rows at most), so the dense representation and the
//! textbook elimination below are all we need.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("composite of the two maps is nonzero")]
    CompositionNonzero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
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
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from machine-integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.as_ref().len()).unwrap_or(0);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    /// Builds a `rows x cols` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, v) in entries.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Entries reduced into `0..m`. `m = 0` leaves the matrix unchanged.
    pub fn reduce_mod(&self, m: u64) -> Self {
        if m == 0 {
            return self.clone();
        }
        let m = BigInt::from(m);
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mod_floor(&m)).collect(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<_> = idx.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.rows, &cols)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
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

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows())
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

/// Finitely generated abelian group `Z^free_rank + Z/d1 + ... + Z/dk`
/// with `d1 | d2 | ... | dk`, every `di >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn zero() -> Self {
        FinAbGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Canonical form of `Z^free_rank + (+)_i Z/factors[i]`; the factors need
    /// not form a divisibility chain.
    pub fn new(free_rank: usize, factors: &[u64]) -> Self {
        let orders: Vec<BigInt> = factors.iter().map(|&d| BigInt::from(d)).collect();
        let mut g = Self::from_orders(&orders);
        g.free_rank += free_rank;
        g
    }

    /// Canonical form of the direct sum of cyclic groups `Z/o` (order 0
    /// meaning `Z`).
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let free_rank = orders.iter().filter(|o| o.is_zero()).count();
        let finite: Vec<BigInt> = orders
            .iter()
            .filter(|o| !o.is_zero())
            .map(|o| o.abs())
            .filter(|o| !o.is_one())
            .collect();
        let snf = smith_normal_form(&IntMatrix::diagonal(&finite));
        let torsion = snf
            .invariant_factors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        FinAbGroup { free_rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Orders of the canonical cyclic components: torsion chain first, then
    /// zeros for the free part.
    pub fn component_orders(&self) -> Vec<BigInt> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank));
        v
    }

    pub fn cyclic(order: u64) -> Self {
        Self::new(0, &[order])
    }

    /// `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let mut k = 1;
            while i + k < self.torsion.len() && &self.torsion[i + k] == d {
                k += 1;
            }
            if k == 1 {
                parts.push(format!("Z{d}"));
            } else {
                parts.push(format!("Z{d}^{k}"));
            }
            i += k;
        }
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `left * input * right = diag`, with `left`, `right` unimodular and the
/// nonzero diagonal entries forming a positive divisibility chain.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub diag: IntMatrix,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        let n = self.diag.rows().min(self.diag.cols());
        (0..n).take_while(|&i| !self.diag[(i, i)].is_zero()).count()
    }

    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank())
            .map(|i| self.diag[(i, i)].clone())
            .collect()
    }
}

/// Smith normal form by elimination with a minimal-absolute-value pivot.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut left_inv = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut right_inv = IntMatrix::identity(cols);

    // Row op `row[dst] += k row[src]` applied to d, mirrored on the transforms.
    let row_add =
        |d: &mut IntMatrix, l: &mut IntMatrix, li: &mut IntMatrix, dst, src, k: &BigInt| {
            d.add_row_multiple(dst, src, k);
            l.add_row_multiple(dst, src, k);
            li.add_col_multiple(src, dst, &-k);
        };
    let col_add =
        |d: &mut IntMatrix, r: &mut IntMatrix, ri: &mut IntMatrix, dst, src, k: &BigInt| {
            d.add_col_multiple(dst, src, k);
            r.add_col_multiple(dst, src, k);
            ri.add_row_multiple(src, dst, &-k);
        };

    let n = rows.min(cols);
    for t in 0..n {
        // minimal nonzero pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = &d[(i, j)];
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        left_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        right.swap_cols(t, pj);
        right_inv.swap_rows(t, pj);

        loop {
            let mut dirty = false;
            // clear column t
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                row_add(&mut d, &mut left, &mut left_inv, i, t, &-q);
                if !d[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            // clear row t
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                col_add(&mut d, &mut right, &mut right_inv, j, t, &-q);
                if !d[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    let v = &d[(i, t)];
                    if !v.is_zero() && v.abs() < d[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let v = &d[(t, j)];
                    if !v.is_zero() && v.abs() < d[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.swap_rows(t, best.0);
                    left.swap_rows(t, best.0);
                    left_inv.swap_cols(t, best.0);
                } else if best.1 != t {
                    d.swap_cols(t, best.1);
                    right.swap_cols(t, best.1);
                    right_inv.swap_rows(t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offender {
                Some(i) => row_add(&mut d, &mut left, &mut left_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
            left_inv.negate_col(t);
        }
    }

    SnfResult {
        left,
        left_inv,
        diag: d,
        right,
        right_inv,
    }
}

/// Basis (as columns) of the integer kernel of `m`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    snf.right.submatrix(0..m.cols(), r..m.cols())
}

/// Basis (as independent columns) of the lattice spanned by the columns of `g`.
pub fn column_space_basis(g: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(g);
    let r = snf.rank();
    let cols: Vec<Vec<BigInt>> = (0..r)
        .map(|i| {
            let d = &snf.diag[(i, i)];
            snf.left_inv.column(i).iter().map(|x| x * d).collect()
        })
        .collect();
    IntMatrix::from_columns(g.rows(), &cols)
}

/// Solves `a x = z` over the integers via a precomputed Smith form of `a`.
#[derive(Clone, Debug)]
pub struct LatticeSolver {
    snf: SnfResult,
    rank: usize,
    cols: usize,
}

impl LatticeSolver {
    pub fn new(a: &IntMatrix) -> Self {
        let snf = smith_normal_form(a);
        let rank = snf.rank();
        LatticeSolver {
            snf,
            rank,
            cols: a.cols(),
        }
    }

    pub fn solve(&self, z: &[BigInt]) -> Option<Vec<BigInt>> {
        let w = self.snf.left.mul_vec(z);
        let mut y = vec![BigInt::zero(); self.cols];
        for (i, wi) in w.iter().enumerate() {
            if i < self.rank {
                let d = &self.snf.diag[(i, i)];
                let (q, r) = wi.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !wi.is_zero() {
                return None;
            }
        }
        Some(self.snf.right.mul_vec(&y))
    }

    pub fn contains(&self, z: &[BigInt]) -> bool {
        self.solve(z).is_some()
    }
}

pub fn solve_integer(a: &IntMatrix, z: &[BigInt]) -> Option<Vec<BigInt>> {
    LatticeSolver::new(a).solve(z)
}

/// Quotient `K / S` of a lattice `K` (given by a basis) by a sublattice `S`
/// (given by generators lying in `K`), with chosen generator representatives
/// and a coordinate map.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: FinAbGroup,
    /// Representative vectors of the canonical generators, in ambient
    /// coordinates. Each has its first nonzero coordinate positive.
    pub generators: Vec<Vec<BigInt>>,
    /// Order of each generator (0 for infinite order), torsion chain first.
    pub orders: Vec<BigInt>,
    ambient: usize,
    basis_solver: LatticeSolver,
    to_new: IntMatrix,
    kept: Vec<usize>,
    signs: Vec<bool>,
}

impl Subquotient {
    /// `basis` must have independent columns and every column of `sub` must
    /// lie in their span.
    pub fn new(basis: &IntMatrix, sub: &IntMatrix) -> Self {
        let n = basis.rows();
        assert_eq!(sub.rows(), n, "ambient dimension mismatch");
        let k = basis.cols();
        let basis_solver = LatticeSolver::new(basis);
        let coords: Vec<Vec<BigInt>> = sub
            .columns()
            .iter()
            .map(|c| {
                basis_solver
                    .solve(c)
                    .expect("subgroup generator outside the ambient lattice")
            })
            .collect();
        let c = IntMatrix::from_columns(k, &coords);
        let snf = smith_normal_form(&c);
        let rank = snf.rank();
        let gen_basis = basis * &snf.left_inv;

        let mut kept = Vec::new();
        let mut orders = Vec::new();
        let mut generators = Vec::new();
        let mut signs = Vec::new();
        for i in 0..k {
            let order = if i < rank {
                snf.diag[(i, i)].clone()
            } else {
                BigInt::zero()
            };
            if order.is_one() {
                continue;
            }
            let mut g = gen_basis.column(i);
            let negate = g
                .iter()
                .find(|x| !x.is_zero())
                .is_some_and(|x| x.is_negative());
            if negate {
                g.iter_mut().for_each(|x| *x = -&*x);
            }
            kept.push(i);
            orders.push(order);
            generators.push(g);
            signs.push(negate);
        }
        let group = FinAbGroup::from_orders(&orders);
        Subquotient {
            group,
            generators,
            orders,
            ambient: n,
            basis_solver,
            to_new: snf.left,
            kept,
            signs,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// True if `z` lies in the ambient lattice `K`.
    pub fn in_lattice(&self, z: &[BigInt]) -> bool {
        self.basis_solver.contains(z)
    }

    /// Coordinates of the class of `z` with respect to `generators`, reduced
    /// into `0..order` for torsion components. `None` if `z` is not in `K`.
    pub fn coordinates(&self, z: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.basis_solver.solve(z)?;
        let w = self.to_new.mul_vec(&c);
        Some(
            self.kept
                .iter()
                .zip(&self.orders)
                .zip(&self.signs)
                .map(|((&i, o), &neg)| {
                    let v = if neg { -&w[i] } else { w[i].clone() };
                    if o.is_zero() {
                        v
                    } else {
                        v.mod_floor(o)
                    }
                })
                .collect(),
        )
    }

    /// True if `z` is in `K` and represents the zero class.
    pub fn is_zero_class(&self, z: &[BigInt]) -> bool {
        self.coordinates(z)
            .is_some_and(|c| c.iter().all(|x| x.is_zero()))
    }
}

/// Homology `ker(d_out) / im(d_in)` at the middle of `A --d_in--> B --d_out--> C`.
pub fn homology_at(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<Subquotient, LinalgError> {
    if d_out.cols() != d_in.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "d_out has {} columns, d_in has {} rows",
            d_out.cols(),
            d_in.rows()
        )));
    }
    if !(d_out * d_in).is_zero() {
        return Err(LinalgError::CompositionNonzero);
    }
    let kernel = kernel_basis(d_out);
    Ok(Subquotient::new(&kernel, d_in))
}

/// Same as [`homology_at`] for the complex tensored with `Z/modulus`
/// (`modulus = 0` is the integral case).
pub fn homology_at_mod(
    d_in: &IntMatrix,
    d_out: &IntMatrix,
    modulus: u64,
) -> Result<Subquotient, LinalgError> {
    if modulus == 0 {
        return homology_at(d_in, d_out);
    }
    let n = d_in.rows();
    if d_out.cols() != n {
        return Err(LinalgError::DimensionMismatch(format!(
            "d_out has {} columns, d_in has {} rows",
            d_out.cols(),
            n
        )));
    }
    let m = BigInt::from(modulus);
    if !(d_out * d_in).reduce_mod(modulus).is_zero() {
        return Err(LinalgError::CompositionNonzero);
    }
    let relations = IntMatrix::identity(n).scale(&m);
    // cocycles: x with d_out x in m Z^k
    let out_rel = IntMatrix::identity(d_out.rows()).scale(&m);
    let ker = kernel_basis(&d_out.hstack(&out_rel));
    let proj = ker.submatrix(0..n, 0..ker.cols());
    let cycles = column_space_basis(&proj.hstack(&relations));
    let boundaries = d_in.hstack(&relations);
    Ok(Subquotient::new(&cycles, &boundaries))
}

/// Exactness of `G1 --f--> G2 --g--> G3` where each `Gi` is the group of
/// integer vectors modulo the diagonal relations `orders` (0 meaning `Z`).
pub fn is_exact_at(
    f: &IntMatrix,
    g: &IntMatrix,
    mid_orders: &[BigInt],
    target_orders: &[BigInt],
) -> bool {
    let n = mid_orders.len();
    assert_eq!(f.rows(), n);
    assert_eq!(g.cols(), n);
    assert_eq!(g.rows(), target_orders.len());
    let rel = |orders: &[BigInt]| {
        let cols: Vec<Vec<BigInt>> = orders
            .iter()
            .enumerate()
            .filter(|(_, o)| !o.is_zero())
            .map(|(i, o)| {
                let mut v = vec![BigInt::zero(); orders.len()];
                v[i] = o.clone();
                v
            })
            .collect();
        IntMatrix::from_columns(orders.len(), &cols)
    };
    let r_mid = rel(mid_orders);
    let r_tgt = rel(target_orders);
    // ker g, as a lattice in Z^n containing the relations of G2
    let ker = kernel_basis(&g.hstack(&r_tgt));
    let ker_proj = ker.submatrix(0..n, 0..ker.cols());
    let image = f.hstack(&r_mid);
    let image_solver = LatticeSolver::new(&image);
    let ker_solver = LatticeSolver::new(&ker_proj.hstack(&r_mid));
    let image_in_kernel = image.columns().iter().all(|c| ker_solver.contains(c));
    let kernel_in_image = ker_proj.columns().iter().all(|c| image_solver.contains(c));
    image_in_kernel && kernel_in_image
}

/// Rank over F2 and a basis of the F2 kernel of `m` (entries reduced mod 2).
pub fn mod2_rank_kernel(m: &IntMatrix) -> (usize, Vec<Vec<u8>>) {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<u8>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| if m[(i, j)].is_odd() { 1 } else { 0 })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] == 1) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..rows {
            if i != r && a[i][c] == 1 {
                for j in 0..cols {
                    a[i][j] ^= a[r][j];
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&fc| {
            let mut v = vec![0u8; cols];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = a[row][fc];
            }
            v
        })
        .collect();
    (r, kernel)
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
