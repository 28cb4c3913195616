//! Dense linear algebra over `F_q` and semilinear maps.
//!
//! Subspaces are stored as reduced row-echelon bases, so two subspaces are
//! equal exactly when their bases are equal.

use serde::{Deserialize, Serialize};

use crate::gf2m::{FieldElem, FieldParams};

pub type Vector = Vec<FieldElem>;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElem::ONE);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.row_mut(i).copy_from_slice(r);
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: FieldElem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [FieldElem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| FieldElem(a.0 ^ b.0)).collect(),
        }
    }

    /// `self^e` for a square matrix, by repeated squaring.
    pub fn pow(&self, mut e: u64, f: &FieldParams) -> Matrix {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    pub fn mul(&self, other: &Matrix, f: &FieldParams) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = f.add(*d, f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElem], f: &FieldParams) -> Vector {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(FieldElem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Applies `x -> x^(2^s)` to every entry.
    pub fn twist(&self, s: i64, f: &FieldParams) -> Matrix {
        if s.rem_euclid(f.degree() as i64) == 0 {
            return self.clone();
        }
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f.pow2(x, s)).collect(),
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    /// Reduced row-echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self, f: &FieldParams) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for x in self.row_mut(r) {
                *x = f.mul(*x, inv);
            }
            let pivot_row = self.row(r).to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for (x, &y) in self.row_mut(i).iter_mut().zip(&pivot_row).skip(c) {
                    *x = f.add(*x, f.mul(factor, y));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FieldParams) -> usize {
        self.clone().rref_in_place(f).len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self, f: &FieldParams) -> Vec<Vector> {
        let mut r = self.clone();
        let pivots = r.rref_in_place(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![FieldElem::ZERO; self.cols];
            v[free] = FieldElem::ONE;
            for (row, &p) in pivots.iter().enumerate() {
                // char 2: -x = x
                v[p] = r.get(row, free);
            }
            out.push(v);
        }
        out
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self, f: &FieldParams) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug.set(i, n + i, FieldElem::ONE);
        }
        let piv = aug.rref_in_place(f);
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(aug.select(&rows, &cols))
    }
}

pub fn twist_vec(v: &[FieldElem], s: i64, f: &FieldParams) -> Vector {
    v.iter().map(|&x| f.pow2(x, s)).collect()
}

/// Subspace of `F_q^n` with a canonical reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    n: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            n,
            basis: Matrix::zeros(0, n),
            pivots: vec![],
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            n,
            basis: Matrix::identity(n),
            pivots: (0..n).collect(),
        }
    }

    pub fn span(n: usize, vectors: &[Vector], f: &FieldParams) -> Self {
        let mut m = Matrix::from_rows(n, vectors);
        let pivots = m.rref_in_place(f);
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let all: Vec<usize> = (0..n).collect();
        Subspace {
            n,
            basis: m.select(&keep, &all),
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[FieldElem], f: &FieldParams) -> bool {
        let mut w = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            let c = w[p];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in w.iter_mut().zip(self.basis.row(r)) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn is_subspace_of(&self, other: &Subspace, f: &FieldParams) -> bool {
        self.dim() <= other.dim() && (0..self.dim()).all(|r| other.contains(self.basis.row(r), f))
    }

    pub fn sum(&self, other: &Subspace, f: &FieldParams) -> Subspace {
        let mut vs = self.basis();
        vs.extend(other.basis());
        Subspace::span(self.n, &vs, f)
    }

    /// Matrix `L` with `L v = 0` exactly for `v` in the subspace.
    pub fn annihilator(&self, f: &FieldParams) -> Matrix {
        let rows = self.basis.kernel(f);
        Matrix::from_rows(self.n, &rows)
    }

    pub fn intersection(&self, other: &Subspace, f: &FieldParams) -> Subspace {
        // v = B^T x with L_other v = 0
        let l = other.annihilator(f);
        if l.rows == 0 {
            return self.clone();
        }
        let bt = self.basis.transpose();
        let coeffs = l.mul(&bt, f).kernel(f);
        let vs: Vec<Vector> = coeffs.iter().map(|x| bt.mul_vec(x, f)).collect();
        Subspace::span(self.n, &vs, f)
    }

    pub fn twist(&self, s: i64, f: &FieldParams) -> Subspace {
        Subspace::span(self.n, &self.basis.twist(s, f).row_vectors(), f)
    }
}

/// `v -> A * sigma^twist(v)`, where `sigma` squares coordinates; so
/// `Op(c v) = c^(2^twist) Op(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemilinearOp {
    pub matrix: Matrix,
    pub twist: i64,
}

impl SemilinearOp {
    pub fn new(matrix: Matrix, twist: i64) -> Self {
        SemilinearOp { matrix, twist }
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols
    }

    pub fn apply(&self, v: &[FieldElem], f: &FieldParams) -> Vector {
        self.matrix.mul_vec(&twist_vec(v, self.twist, f), f)
    }

    /// `self after other`.
    pub fn compose(&self, other: &SemilinearOp, f: &FieldParams) -> SemilinearOp {
        SemilinearOp {
            matrix: self.matrix.mul(&other.matrix.twist(self.twist, f), f),
            twist: self.twist + other.twist,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn rank(&self, f: &FieldParams) -> usize {
        self.matrix.rank(f)
    }

    pub fn kernel(&self, f: &FieldParams) -> Subspace {
        let k = self.matrix.kernel(f);
        Subspace::span(self.dim(), &k, f).twist(-self.twist, f)
    }

    pub fn image(&self, w: &Subspace, f: &FieldParams) -> Subspace {
        let vs: Vec<Vector> = w.basis().iter().map(|v| self.apply(v, f)).collect();
        Subspace::span(self.matrix.rows, &vs, f)
    }

    /// `{v : Op(v) in w}`.
    pub fn preimage(&self, w: &Subspace, f: &FieldParams) -> Subspace {
        let l = w.annihilator(f);
        if l.rows == 0 {
            return Subspace::full(self.dim());
        }
        let u = l.mul(&self.matrix, f).kernel(f);
        Subspace::span(self.dim(), &u, f).twist(-self.twist, f)
    }

    /// Restriction to the coordinates `idx` (both source and target); the
    /// caller guarantees the span of `idx` is invariant.
    pub fn restrict(&self, idx: &[usize]) -> SemilinearOp {
        SemilinearOp {
            matrix: self.matrix.select(idx, idx),
            twist: self.twist,
        }
    }

    /// Conjugation by a change of basis `P` (new coordinates `x = P x'`):
    /// returns the operator in the primed coordinates.
    pub fn conjugate(&self, p: &Matrix, p_inv: &Matrix, f: &FieldParams) -> SemilinearOp {
        SemilinearOp {
            matrix: p_inv.mul(&self.matrix, f).mul(&p.twist(self.twist, f), f),
            twist: self.twist,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::make_field;
    use proptest::prelude::*;

    fn field() -> FieldParams {
        make_field(1).unwrap()
    }

    fn mat(f: &FieldParams, rows: usize, cols: usize, seed: &[u32]) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, FieldElem(seed[(i * cols + j) % seed.len()] % f.order()));
            }
        }
        m
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(seed in proptest::collection::vec(0u32..8, 1..40), r in 1usize..6, c in 1usize..7) {
            let f = field();
            let a = mat(&f, r, c, &seed);
            let k = a.kernel(&f);
            prop_assert_eq!(k.len() + a.rank(&f), c);
            for v in &k {
                prop_assert!(a.mul_vec(v, &f).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn intersection_dimension_formula(s1 in proptest::collection::vec(0u32..8, 1..30), s2 in proptest::collection::vec(0u32..8, 1..30)) {
            let f = field();
            let a = Subspace::span(5, &mat(&f, 3, 5, &s1).row_vectors(), &f);
            let b = Subspace::span(5, &mat(&f, 2, 5, &s2).row_vectors(), &f);
            let i = a.intersection(&b, &f);
            prop_assert_eq!(a.dim() + b.dim(), a.sum(&b, &f).dim() + i.dim());
            prop_assert!(i.is_subspace_of(&a, &f) && i.is_subspace_of(&b, &f));
        }

        #[test]
        fn semilinear_preimage_contains_exactly_the_right_vectors(seed in proptest::collection::vec(0u32..8, 1..30), ws in proptest::collection::vec(0u32..8, 1..30), twist in -2i64..3) {
            let f = field();
            let op = SemilinearOp::new(mat(&f, 4, 4, &seed), twist);
            let w = Subspace::span(4, &mat(&f, 2, 4, &ws).row_vectors(), &f);
            let pre = op.preimage(&w, &f);
            for v in pre.basis() {
                prop_assert!(w.contains(&op.apply(&v, &f), &f));
            }
            prop_assert_eq!(pre.dim(), op.kernel(&f).dim() + op.image(&Subspace::full(4), &f).intersection(&w, &f).dim());
        }

        #[test]
        fn composition_matches_application(s1 in proptest::collection::vec(0u32..8, 1..20), s2 in proptest::collection::vec(0u32..8, 1..20), v in proptest::collection::vec(0u32..8, 3), t1 in -1i64..2, t2 in -1i64..2) {
            let f = field();
            let a = SemilinearOp::new(mat(&f, 3, 3, &s1), t1);
            let b = SemilinearOp::new(mat(&f, 3, 3, &s2), t2);
            let v: Vector = v.into_iter().map(FieldElem).collect();
            prop_assert_eq!(a.compose(&b, &f).apply(&v, &f), a.apply(&b.apply(&v, &f), &f));
        }

        #[test]
        fn pow_matches_repeated_product(seed in proptest::collection::vec(0u32..8, 1..20), e in 0u64..20) {
            let f = field();
            let a = mat(&f, 3, 3, &seed);
            let mut want = Matrix::identity(3);
            for _ in 0..e {
                want = want.mul(&a, &f);
            }
            prop_assert_eq!(a.pow(e, &f), want);
        }
    }

    #[test]
    fn semilinearity() {
        let f = field();
        let op = SemilinearOp::new(mat(&f, 3, 3, &[1, 2, 3, 4, 5, 6, 7, 0, 1]), 1);
        let v = vec![FieldElem(1), FieldElem(3), FieldElem(6)];
        let c = FieldElem(5);
        let cv: Vector = v.iter().map(|&x| f.mul(c, x)).collect();
        let lhs = op.apply(&cv, &f);
        let rhs: Vector = op.apply(&v, &f).iter().map(|&x| f.mul(f.square(c), x)).collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_round_trip() {
        let f = field();
        let a = mat(&f, 3, 3, &[1, 2, 0, 0, 1, 5, 3, 0, 1]);
        let inv = a.inverse(&f).unwrap();
        assert_eq!(a.mul(&inv, &f), Matrix::identity(3));
        assert!(Matrix::zeros(2, 2).inverse(&f).is_none());
    }
}
