//! Block-matrix calculus over `A = F^2`: typed (shape-graded) matrices, the
//! two stacking sums, the grid assembler, permutation matrices, Kronecker
//! products and the block swap matrices.
//!
//! Conventions that everything downstream relies on:
//!
//! * A [`TypedMatrix`] of shape `(m, s)` is the block-diagonal matrix
//!   `diag(X1·e1, X2·e2)` with `X1` of size `m1 x s1` and `X2` of size
//!   `m2 x s2`.  Degenerate shapes are represented with genuinely empty
//!   blocks (zero rows and/or columns), not with phantom 1x1 zeros.
//! * [`PlainMatrix::kron`] follows the convention in which the LEFT factor
//!   varies fastest: the result consists of blocks `X·y_ij` laid out in the
//!   pattern of `Y`.  This is the transpose-of-arguments of the common
//!   `kron(A, B) = [a_ij B]` convention; a conformance test pins it down.
//! * Row and column indices are 0-based in code; documentation and
//!   serialized reports use 1-based positions.

use crate::scalar::{FieldSpec, Scalar};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A pair `(m1, m2)` of multiplicities; the objects of the category and the
/// grading of typed matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape(pub usize, pub usize);

impl Shape {
    pub const ZERO: Shape = Shape(0, 0);

    /// First standard shape `(1, 0)`.
    pub fn e1() -> Shape {
        Shape(1, 0)
    }

    /// Second standard shape `(0, 1)`.
    pub fn e2() -> Shape {
        Shape(0, 1)
    }

    pub fn add(self, other: Shape) -> Shape {
        Shape(self.0 + other.0, self.1 + other.1)
    }

    /// Total dimension `m1 + m2`.
    pub fn total(self) -> usize {
        self.0 + self.1
    }

    pub fn is_zero(self) -> bool {
        self == Shape::ZERO
    }

    /// Scale both components.
    pub fn scale(self, k: usize) -> Shape {
        Shape(self.0 * k, self.1 * k)
    }

    /// Component by 1-based index.
    pub fn component(self, i: usize) -> usize {
        match i {
            1 => self.0,
            2 => self.1,
            _ => panic!("component index must be 1 or 2"),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// Dense matrix over a single exact field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl PlainMatrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        PlainMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: &FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        PlainMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PlainMatrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer convenience constructor, mostly for tests and fixtures.
    pub fn from_i64_rows(field: &FieldSpec, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.data[r * self.cols + c] = v;
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let one = self.field.one();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let x = self.get(r, c);
                if r == c {
                    if *x != one {
                        return false;
                    }
                } else if !self.field.is_zero(x) {
                    return false;
                }
            }
        }
        true
    }

    pub fn add(&self, other: &PlainMatrix) -> PlainMatrix {
        self.zip(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &PlainMatrix) -> PlainMatrix {
        self.zip(other, |f, a, b| f.sub(a, b))
    }

    fn zip(
        &self,
        other: &PlainMatrix,
        op: impl Fn(&FieldSpec, &Scalar, &Scalar) -> Scalar,
    ) -> PlainMatrix {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "dimension mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| op(&self.field, a, b))
            .collect();
        PlainMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> PlainMatrix {
        self.map(|f, x| f.neg(x))
    }

    pub fn scale(&self, k: &Scalar) -> PlainMatrix {
        self.map(|f, x| f.mul(k, x))
    }

    fn map(&self, op: impl Fn(&FieldSpec, &Scalar) -> Scalar) -> PlainMatrix {
        PlainMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| op(&self.field, x)).collect(),
        }
    }

    pub fn mul(&self, other: &PlainMatrix) -> PlainMatrix {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(
            self.cols, other.rows,
            "product dimension mismatch: {}x{} times {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = &self.field;
        let mut out = PlainMatrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if f.is_zero(b) {
                        continue;
                    }
                    let cur = out.get(r, c).clone();
                    out.set(r, c, f.add(&cur, &f.mul(a, b)));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> PlainMatrix {
        PlainMatrix::from_fn(&self.field, self.cols, self.rows, |r, c| {
            self.get(c, r).clone()
        })
    }

    /// Kronecker product with the left factor innermost: the result is the
    /// pattern of `other` with each entry `y_ij` replaced by `self * y_ij`.
    pub fn kron(&self, other: &PlainMatrix) -> PlainMatrix {
        assert_eq!(self.field, other.field, "field mismatch");
        let f = &self.field;
        let (xr, xc) = (self.rows, self.cols);
        let (yr, yc) = (other.rows, other.cols);
        let mut out = PlainMatrix::zeros(f, xr * yr, xc * yc);
        for i in 0..yr {
            for j in 0..yc {
                let y = other.get(i, j);
                if f.is_zero(y) {
                    continue;
                }
                for r in 0..xr {
                    for c in 0..xc {
                        let x = self.get(r, c);
                        if f.is_zero(x) {
                            continue;
                        }
                        out.set(i * xr + r, j * xc + c, f.mul(x, y));
                    }
                }
            }
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PlainMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        PlainMatrix::from_fn(&self.field, rows, cols, |r, c| {
            self.get(r0 + r, c0 + c).clone()
        })
    }

    pub fn hstack(&self, other: &PlainMatrix) -> PlainMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        PlainMatrix::from_fn(&self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &PlainMatrix) -> PlainMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        PlainMatrix::from_fn(&self.field, self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.get(r, c).clone()
            } else {
                other.get(r - self.rows, c).clone()
            }
        })
    }

    /// Gaussian elimination; returns (rank, determinant, reduced echelon
    /// form).  The determinant is meaningful only for square inputs.
    pub fn rref(&self) -> (usize, Scalar, PlainMatrix) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut det = f.one();
        let mut rank = 0usize;
        for c in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| !f.is_zero(m.get(r, c))) else {
                continue;
            };
            if pivot != rank {
                for j in 0..m.cols {
                    let a = m.get(rank, j).clone();
                    let b = m.get(pivot, j).clone();
                    m.set(rank, j, b);
                    m.set(pivot, j, a);
                }
                det = f.neg(&det);
            }
            let pv = m.get(rank, c).clone();
            det = f.mul(&det, &pv);
            let inv = f.inv(&pv).expect("pivot nonzero");
            for j in 0..m.cols {
                let x = f.mul(m.get(rank, j), &inv);
                m.set(rank, j, x);
            }
            for r in 0..m.rows {
                if r == rank || f.is_zero(m.get(r, c)) {
                    continue;
                }
                let coeff = m.get(r, c).clone();
                for j in 0..m.cols {
                    let x = f.sub(m.get(r, j), &f.mul(&coeff, m.get(rank, j)));
                    m.set(r, j, x);
                }
            }
            rank += 1;
        }
        if self.rows == self.cols && rank != self.rows {
            det = f.zero();
        }
        (rank, det, m)
    }

    pub fn rank(&self) -> usize {
        self.rref().0
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        self.rref().1
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && !self.field.is_zero(&self.det())
    }

    pub fn try_inverse(&self) -> Option<PlainMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&PlainMatrix::identity(&self.field, n));
        let (_, _, red) = aug.rref();
        if !red.submatrix(0, 0, n, n).is_identity() {
            return None;
        }
        Some(red.submatrix(0, n, n, n))
    }

    /// Rows of entries, cloned; handy for serialization.
    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).clone()).collect())
            .collect()
    }
}

impl fmt::Display for PlainMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// The permutation matrix regrouping a concatenation of shaped blocks: the
/// image lists all first components in block order, then all second
/// components.  Defined recursively on the number of shapes; the recursion
/// telescopes to that direct description.
pub fn perm_matrix(field: &FieldSpec, shapes: &[Shape]) -> PlainMatrix {
    assert!(!shapes.is_empty(), "perm_matrix needs at least one shape");
    let idx = perm_indices(shapes);
    let n = idx.len();
    let mut m = PlainMatrix::zeros(field, n, n);
    for (r, &c) in idx.iter().enumerate() {
        m.set(r, c, field.one());
    }
    m
}

// out[r] = source position holding the 1 in row r
fn perm_indices(shapes: &[Shape]) -> Vec<usize> {
    let total: usize = shapes.iter().map(|s| s.total()).sum();
    let mut starts = Vec::with_capacity(shapes.len());
    let mut acc = 0usize;
    for s in shapes {
        starts.push(acc);
        acc += s.total();
    }
    let mut out = Vec::with_capacity(total);
    for (s, &st) in shapes.iter().zip(&starts) {
        for k in 0..s.0 {
            out.push(st + k);
        }
    }
    for (s, &st) in shapes.iter().zip(&starts) {
        for k in 0..s.1 {
            out.push(st + s.0 + k);
        }
    }
    out
}

/// The `n^2 x n^2` block swap matrix realizing the flip of two tensor
/// factors of dimension `n`.
pub fn swap_block(field: &FieldSpec, n: usize) -> PlainMatrix {
    swap_rect(field, n, n)
}

/// Rectangular swap: the `bc x bc` matrix whose block `(u, v)` for `u < b`,
/// `v < c` is the `c x b` unit matrix with a single 1 at `(v, u)`.  It sends
/// the tensor basis with the dim-`b` factor innermost to the flipped order;
/// `swap_rect(n, n) == swap_block(n)`.
pub fn swap_rect(field: &FieldSpec, c: usize, b: usize) -> PlainMatrix {
    let mut m = PlainMatrix::zeros(field, b * c, b * c);
    for u in 0..b {
        for v in 0..c {
            m.set(u * c + v, v * b + u, field.one());
        }
    }
    m
}

/// Block-diagonal matrix over `A = F^2` with an `(m, s)` shape: the `e1`
/// block is `m1 x s1`, the `e2` block `m2 x s2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedMatrix {
    out_shape: Shape,
    in_shape: Shape,
    block1: PlainMatrix,
    block2: PlainMatrix,
}

impl TypedMatrix {
    pub fn new(
        out_shape: Shape,
        in_shape: Shape,
        block1: PlainMatrix,
        block2: PlainMatrix,
    ) -> Self {
        assert_eq!(block1.field(), block2.field(), "field mismatch");
        assert_eq!((block1.rows(), block1.cols()), (out_shape.0, in_shape.0));
        assert_eq!((block2.rows(), block2.cols()), (out_shape.1, in_shape.1));
        TypedMatrix {
            out_shape,
            in_shape,
            block1,
            block2,
        }
    }

    pub fn zeros(field: &FieldSpec, out_shape: Shape, in_shape: Shape) -> Self {
        TypedMatrix {
            out_shape,
            in_shape,
            block1: PlainMatrix::zeros(field, out_shape.0, in_shape.0),
            block2: PlainMatrix::zeros(field, out_shape.1, in_shape.1),
        }
    }

    /// The identity `E_m`, with empty blocks where the shape vanishes.
    pub fn identity(field: &FieldSpec, m: Shape) -> Self {
        TypedMatrix {
            out_shape: m,
            in_shape: m,
            block1: PlainMatrix::identity(field, m.0),
            block2: PlainMatrix::identity(field, m.1),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        self.block1.field()
    }

    pub fn out_shape(&self) -> Shape {
        self.out_shape
    }

    pub fn in_shape(&self) -> Shape {
        self.in_shape
    }

    pub fn block(&self, i: usize) -> &PlainMatrix {
        match i {
            1 => &self.block1,
            2 => &self.block2,
            _ => panic!("block index must be 1 or 2"),
        }
    }

    pub fn block1(&self) -> &PlainMatrix {
        &self.block1
    }

    pub fn block2(&self) -> &PlainMatrix {
        &self.block2
    }

    pub fn is_zero(&self) -> bool {
        self.block1.is_zero() && self.block2.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.out_shape == self.in_shape && self.block1.is_identity() && self.block2.is_identity()
    }

    /// Composition as matrix product: `(m,s) x (s,t) -> (m,t)`.
    pub fn compose(&self, other: &TypedMatrix) -> TypedMatrix {
        assert_eq!(
            self.in_shape, other.out_shape,
            "composition shape mismatch: {} vs {}",
            self.in_shape, other.out_shape
        );
        TypedMatrix {
            out_shape: self.out_shape,
            in_shape: other.in_shape,
            block1: self.block1.mul(&other.block1),
            block2: self.block2.mul(&other.block2),
        }
    }

    pub fn add(&self, other: &TypedMatrix) -> TypedMatrix {
        assert_eq!(self.out_shape, other.out_shape);
        assert_eq!(self.in_shape, other.in_shape);
        TypedMatrix {
            out_shape: self.out_shape,
            in_shape: self.in_shape,
            block1: self.block1.add(&other.block1),
            block2: self.block2.add(&other.block2),
        }
    }

    pub fn sub(&self, other: &TypedMatrix) -> TypedMatrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TypedMatrix {
        TypedMatrix {
            out_shape: self.out_shape,
            in_shape: self.in_shape,
            block1: self.block1.neg(),
            block2: self.block2.neg(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> TypedMatrix {
        TypedMatrix {
            out_shape: self.out_shape,
            in_shape: self.in_shape,
            block1: self.block1.scale(k),
            block2: self.block2.scale(k),
        }
    }

    pub fn transpose(&self) -> TypedMatrix {
        TypedMatrix {
            out_shape: self.in_shape,
            in_shape: self.out_shape,
            block1: self.block1.transpose(),
            block2: self.block2.transpose(),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.out_shape == self.in_shape
            && self.block1.is_invertible()
            && self.block2.is_invertible()
    }

    pub fn try_inverse(&self) -> Option<TypedMatrix> {
        if self.out_shape != self.in_shape {
            return None;
        }
        Some(TypedMatrix {
            out_shape: self.in_shape,
            in_shape: self.out_shape,
            block1: self.block1.try_inverse()?,
            block2: self.block2.try_inverse()?,
        })
    }

    /// Grading of a row of the full `|m| x |s|` form: 1 for the first
    /// `m1` rows, 2 after.
    pub fn row_grading(&self, r: usize) -> usize {
        assert!(r < self.out_shape.total());
        if r < self.out_shape.0 {
            1
        } else {
            2
        }
    }

    pub fn col_grading(&self, c: usize) -> usize {
        assert!(c < self.in_shape.total());
        if c < self.in_shape.0 {
            1
        } else {
            2
        }
    }

    /// Entry of the full form at `(r, c)`: the scalar coefficient of the
    /// graded component when row and column gradings agree, zero otherwise.
    pub fn full_entry(&self, r: usize, c: usize) -> Scalar {
        let (gr, gc) = (self.row_grading(r), self.col_grading(c));
        if gr != gc {
            return self.field().zero();
        }
        if gr == 1 {
            self.block1.get(r, c).clone()
        } else {
            self.block2
                .get(r - self.out_shape.0, c - self.in_shape.0)
                .clone()
        }
    }

    /// Full `|m| x |s|` components over the base field: the pair of the
    /// `e1`- and `e2`-parts, each embedded at its diagonal position.  Used
    /// by oracle tests that conjugate with permutation matrices.
    pub fn to_full(&self) -> (PlainMatrix, PlainMatrix) {
        let f = self.field();
        let rows = self.out_shape.total();
        let cols = self.in_shape.total();
        let mut p1 = PlainMatrix::zeros(f, rows, cols);
        let mut p2 = PlainMatrix::zeros(f, rows, cols);
        for r in 0..self.out_shape.0 {
            for c in 0..self.in_shape.0 {
                p1.set(r, c, self.block1.get(r, c).clone());
            }
        }
        for r in 0..self.out_shape.1 {
            for c in 0..self.in_shape.1 {
                p2.set(
                    self.out_shape.0 + r,
                    self.in_shape.0 + c,
                    self.block2.get(r, c).clone(),
                );
            }
        }
        (p1, p2)
    }

    /// Vertical sum: stacks each block below the corresponding block of
    /// `self`; domains must agree.
    pub fn vstack_typed(&self, other: &TypedMatrix) -> TypedMatrix {
        assert_eq!(
            self.in_shape, other.in_shape,
            "vstack_typed needs equal domain shapes"
        );
        TypedMatrix {
            out_shape: self.out_shape.add(other.out_shape),
            in_shape: self.in_shape,
            block1: self.block1.vstack(&other.block1),
            block2: self.block2.vstack(&other.block2),
        }
    }

    /// Horizontal sum: blocks side by side; codomains must agree.
    pub fn hstack_typed(&self, other: &TypedMatrix) -> TypedMatrix {
        assert_eq!(
            self.out_shape, other.out_shape,
            "hstack_typed needs equal codomain shapes"
        );
        TypedMatrix {
            out_shape: self.out_shape,
            in_shape: self.in_shape.add(other.in_shape),
            block1: self.block1.hstack(&other.block1),
            block2: self.block2.hstack(&other.block2),
        }
    }
}

/// Assemble a grid of typed matrices into one typed matrix: horizontal sums
/// along each row, then the vertical sum of the rows.  Panics if shapes are
/// inconsistent along a grid row or column.
pub fn pi_assemble(grid: &[Vec<TypedMatrix>]) -> TypedMatrix {
    assert!(!grid.is_empty() && !grid[0].is_empty(), "empty grid");
    let cols = grid[0].len();
    for row in grid {
        assert_eq!(row.len(), cols, "ragged grid");
        for cell in &row[1..] {
            assert_eq!(
                cell.out_shape(),
                row[0].out_shape(),
                "inconsistent grid row"
            );
        }
    }
    for c in 0..cols {
        for row in &grid[1..] {
            assert_eq!(
                row[c].in_shape(),
                grid[0][c].in_shape(),
                "inconsistent grid column"
            );
        }
    }
    let rows: Vec<TypedMatrix> = grid
        .iter()
        .map(|row| {
            let mut acc = row[0].clone();
            for cell in &row[1..] {
                acc = acc.hstack_typed(cell);
            }
            acc
        })
        .collect();
    let mut acc = rows[0].clone();
    for r in &rows[1..] {
        acc = acc.vstack_typed(r);
    }
    acc
}

// ---- JSON form -------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TypedMatrixJson {
    shape_out: [usize; 2],
    shape_in: [usize; 2],
    block1: Vec<Vec<String>>,
    block2: Vec<Vec<String>>,
}

impl TypedMatrix {
    pub fn to_json(&self) -> serde_json::Value {
        let enc = |m: &PlainMatrix| -> Vec<Vec<String>> {
            m.to_rows()
                .into_iter()
                .map(|row| row.into_iter().map(|x| x.to_string()).collect())
                .collect()
        };
        serde_json::to_value(TypedMatrixJson {
            shape_out: [self.out_shape.0, self.out_shape.1],
            shape_in: [self.in_shape.0, self.in_shape.1],
            block1: enc(&self.block1),
            block2: enc(&self.block2),
        })
        .expect("serializable")
    }

    pub fn from_json(
        field: &FieldSpec,
        value: &serde_json::Value,
    ) -> Result<Self, crate::scalar::FieldError> {
        let raw: TypedMatrixJson = serde_json::from_value(value.clone()).map_err(|_| {
            crate::scalar::FieldError::Parse {
                what: "typed matrix",
                input: value.to_string(),
            }
        })?;
        let dec = |rows: &[Vec<String>], want_r: usize, want_c: usize| {
            if rows.len() != want_r || rows.iter().any(|r| r.len() != want_c) {
                return Err(crate::scalar::FieldError::Parse {
                    what: "typed matrix block dimensions",
                    input: value.to_string(),
                });
            }
            let mut out = Vec::with_capacity(want_r);
            for row in rows {
                let mut orow = Vec::with_capacity(want_c);
                for cell in row {
                    orow.push(field.parse_scalar(cell)?);
                }
                out.push(orow);
            }
            Ok(PlainMatrix::from_rows(field, out))
        };
        let out_shape = Shape(raw.shape_out[0], raw.shape_out[1]);
        let in_shape = Shape(raw.shape_in[0], raw.shape_in[1]);
        Ok(TypedMatrix::new(
            out_shape,
            in_shape,
            dec(&raw.block1, out_shape.0, in_shape.0)?,
            dec(&raw.block2, out_shape.1, in_shape.1)?,
        ))
    }
}

/// Parse a bare matrix given as rows of scalar strings.
pub fn plain_from_strings(
    field: &FieldSpec,
    rows: &[Vec<String>],
) -> Result<PlainMatrix, crate::scalar::FieldError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(r);
    for row in rows {
        if row.len() != c {
            return Err(crate::scalar::FieldError::Parse {
                what: "matrix",
                input: format!("{rows:?}"),
            });
        }
        let mut orow = Vec::with_capacity(c);
        for cell in row {
            orow.push(field.parse_scalar(cell)?);
        }
        out.push(orow);
    }
    Ok(PlainMatrix::from_rows(field, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn identity_typed_shapes() {
        let f = q();
        let e = TypedMatrix::identity(&f, Shape(1, 1));
        assert!(e.is_identity());
        assert_eq!(e.block1().rows(), 1);
        assert_eq!(e.block2().rows(), 1);

        let e20 = TypedMatrix::identity(&f, Shape(2, 0));
        assert!(e20.block1().is_identity());
        assert_eq!(e20.block2().rows(), 0);

        let e0 = TypedMatrix::identity(&f, Shape::ZERO);
        assert!(e0.is_zero());
        assert_eq!(e0.out_shape().total(), 0);
    }

    #[test]
    fn perm_matrix_small_cases() {
        let f = q();
        // two copies of (1,1): rows pick out positions 1,3,2,4 (1-based)
        let p = perm_matrix(&f, &[Shape(1, 1), Shape(1, 1)]);
        let expected = PlainMatrix::from_i64_rows(
            &f,
            &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]],
        );
        assert_eq!(p, expected);
        // second components empty: identity
        let p2 = perm_matrix(&f, &[Shape(2, 0), Shape(3, 0)]);
        assert!(p2.is_identity());
    }

    #[test]
    fn perm_matrix_matches_recursive_definition() {
        let f = q();
        // explicit two-shape block form
        let two = |m: Shape, mp: Shape| {
            let (m1, m2, n1, n2) = (m.0, m.1, mp.0, mp.1);
            let tot = m.total() + mp.total();
            let mut p = PlainMatrix::zeros(&f, tot, tot);
            let mut row = 0;
            for k in 0..m1 {
                p.set(row, k, f.one());
                row += 1;
            }
            for k in 0..n1 {
                p.set(row, m1 + m2 + k, f.one());
                row += 1;
            }
            for k in 0..m2 {
                p.set(row, m1 + k, f.one());
                row += 1;
            }
            for k in 0..n2 {
                p.set(row, m1 + m2 + n1 + k, f.one());
                row += 1;
            }
            p
        };
        let shapes = [Shape(1, 2), Shape(2, 1), Shape(1, 1)];
        // recursion: P_{a,b,c} = P_{a+b,c} * diag(P_{a,b}, I_{|c|})
        let p_ab = two(shapes[0], shapes[1]);
        let head = shapes[0].add(shapes[1]);
        let p_head_c = two(head, shapes[2]);
        let mut block = PlainMatrix::zeros(&f, 8, 8);
        for r in 0..6 {
            for c in 0..6 {
                block.set(r, c, p_ab.get(r, c).clone());
            }
        }
        for k in 0..2 {
            block.set(6 + k, 6 + k, f.one());
        }
        let expected = p_head_c.mul(&block);
        let got = perm_matrix(&f, &shapes);
        assert_eq!(got, expected);
        // permutation sanity
        assert!(got.mul(&got.transpose()).is_identity());
    }

    #[test]
    fn vstack_matches_permuted_plain_stack() {
        let f = q();
        let x = TypedMatrix::new(
            Shape(1, 2),
            Shape(1, 1),
            PlainMatrix::from_i64_rows(&f, &[&[2]]),
            PlainMatrix::from_i64_rows(&f, &[&[3], &[4]]),
        );
        let y = TypedMatrix::new(
            Shape(2, 1),
            Shape(1, 1),
            PlainMatrix::from_i64_rows(&f, &[&[5], &[6]]),
            PlainMatrix::from_i64_rows(&f, &[&[7]]),
        );
        let stacked = x.vstack_typed(&y);
        assert_eq!(stacked.out_shape(), Shape(3, 3));
        // oracle: P_{m,m'} * (X; Y) on the full forms, componentwise
        let p = perm_matrix(&f, &[x.out_shape(), y.out_shape()]);
        let (x1, x2) = x.to_full();
        let (y1, y2) = y.to_full();
        let naive1 = x1.vstack(&y1);
        let naive2 = x2.vstack(&y2);
        let (s1, s2) = stacked.to_full();
        assert_eq!(s1, p.mul(&naive1));
        assert_eq!(s2, p.mul(&naive2));
    }

    #[test]
    fn hstack_matches_plain_stack_through_perm() {
        let f = q();
        let x = TypedMatrix::new(
            Shape(1, 1),
            Shape(1, 2),
            PlainMatrix::from_i64_rows(&f, &[&[2]]),
            PlainMatrix::from_i64_rows(&f, &[&[3, 4]]),
        );
        let y = TypedMatrix::new(
            Shape(1, 1),
            Shape(2, 1),
            PlainMatrix::from_i64_rows(&f, &[&[5, 6]]),
            PlainMatrix::from_i64_rows(&f, &[&[7]]),
        );
        let stacked = x.hstack_typed(&y);
        assert_eq!(stacked.in_shape(), Shape(3, 3));
        let p = perm_matrix(&f, &[x.in_shape(), y.in_shape()]);
        let (x1, x2) = x.to_full();
        let (y1, y2) = y.to_full();
        let naive1 = x1.hstack(&y1);
        let naive2 = x2.hstack(&y2);
        let (s1, s2) = stacked.to_full();
        assert_eq!(s1, naive1.mul(&p.transpose()));
        assert_eq!(s2, naive2.mul(&p.transpose()));
    }

    #[test]
    fn kron_left_factor_innermost() {
        let f = q();
        // column (1;0) kron row (0 1) puts the 1 at entry (1,2) (1-based)
        let col = PlainMatrix::from_i64_rows(&f, &[&[1], &[0]]);
        let row = PlainMatrix::from_i64_rows(&f, &[&[0, 1]]);
        let k = col.kron(&row);
        let expected = PlainMatrix::from_i64_rows(&f, &[&[0, 1], &[0, 0]]);
        assert_eq!(k, expected);
        // 2x2 (x) 2x2 conformance: blocks follow the pattern of the right factor
        let x = PlainMatrix::from_i64_rows(&f, &[&[1, 2], &[3, 4]]);
        let y = PlainMatrix::from_i64_rows(&f, &[&[5, 6], &[7, 8]]);
        let xy = x.kron(&y);
        assert_eq!(*xy.get(0, 1), f.from_i64(2 * 5)); // x_12 * y_11
        assert_eq!(*xy.get(0, 2), f.from_i64(6)); // x_11 * y_12
        assert_eq!(xy.submatrix(0, 0, 2, 2), x.scale(&f.from_i64(5)));
        assert_eq!(xy.submatrix(0, 2, 2, 2), x.scale(&f.from_i64(6)));
    }

    #[test]
    fn kron_identities() {
        let f = q();
        let i3 = PlainMatrix::identity(&f, 3);
        let i4 = PlainMatrix::identity(&f, 4);
        assert!(i3.kron(&i4).is_identity());
    }

    #[test]
    fn swap_block_small() {
        let f = q();
        assert!(swap_block(&f, 1).is_identity());
        let s2 = swap_block(&f, 2);
        let expected = PlainMatrix::from_i64_rows(
            &f,
            &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]],
        );
        assert_eq!(s2, expected);
        for n in 1..=4 {
            let s = swap_block(&f, n);
            assert!(s.mul(&s).is_identity(), "swap_block({n}) is an involution");
        }
    }

    #[test]
    fn swap_rect_flips_kron_factors() {
        let f = q();
        // swap_rect(c, b) maps (dim-b inner, dim-c outer) to the flip
        let (b, c) = (2usize, 3usize);
        let s = swap_rect(&f, c, b);
        assert_eq!(s.rows(), b * c);
        for i in 0..b {
            for j in 0..c {
                let mut x = PlainMatrix::zeros(&f, b, 1);
                x.set(i, 0, f.one());
                let mut y = PlainMatrix::zeros(&f, c, 1);
                y.set(j, 0, f.one());
                let src = x.kron(&y); // 1 at index j*b + i
                let dst = y.kron(&x); // 1 at index i*c + j
                assert_eq!(s.mul(&src), dst);
            }
        }
        assert_eq!(swap_rect(&f, 3, 3), swap_block(&f, 3));
    }

    #[test]
    fn pi_assemble_one_by_one() {
        let f = q();
        let x = TypedMatrix::identity(&f, Shape(2, 1));
        assert_eq!(pi_assemble(&[vec![x.clone()]]), x);
    }

    #[test]
    fn typed_json_round_trip() {
        let f = FieldSpec::rationals_sqrt(5).unwrap();
        let t = f.theta().unwrap();
        let m = TypedMatrix::new(
            Shape(1, 1),
            Shape(1, 1),
            PlainMatrix::from_rows(&f, vec![vec![t.clone()]]),
            PlainMatrix::from_rows(&f, vec![vec![f.add(&f.one(), &t)]]),
        );
        let j = m.to_json();
        let back = TypedMatrix::from_json(&f, &j).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    #[should_panic(expected = "vstack_typed needs equal domain shapes")]
    fn vstack_shape_mismatch_panics() {
        let f = q();
        let a = TypedMatrix::identity(&f, Shape(1, 1));
        let b = TypedMatrix::identity(&f, Shape(2, 0));
        let _ = a.vstack_typed(&b);
    }

    #[test]
    fn inverse_round_trip() {
        let f = FieldSpec::prime(5).unwrap();
        let m = PlainMatrix::from_i64_rows(&f, &[&[2, 1], &[2, 3]]);
        let inv = m.try_inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let sing = PlainMatrix::from_i64_rows(&f, &[&[1, 2], &[2, 4]]);
        assert!(sing.try_inverse().is_none());
        assert!(f.is_zero(&sing.det()));
    }
}
