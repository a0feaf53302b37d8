//! The matrix model of the rank-two category: objects are shapes, morphisms
//! `m -> s` are typed matrices of shape `(s, m)`, composition is the matrix
//! product, and the tensor product of morphisms is assembled blockwise from
//! Kronecker products through the grid assembler.

use crate::blockmat::{pi_assemble, PlainMatrix, Shape, TypedMatrix};
use crate::fusion::FusionRule;
use crate::scalar::{FieldSpec, Scalar};

/// Morphisms `m -> s` are `(s, m)`-typed matrices; the alias documents the
/// orientation.
pub type Morphism = TypedMatrix;

/// The identity morphism on `e_i`.
pub fn unit_identity(field: &FieldSpec, i: usize) -> Morphism {
    match i {
        1 => TypedMatrix::identity(field, Shape::e1()),
        2 => TypedMatrix::identity(field, Shape::e2()),
        _ => panic!("simple index must be 1 or 2"),
    }
}

/// The image of a pure tensor of idempotent components under the structure
/// map: one typed component `lam_ij · E_{c_ij}` per basis pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiImage {
    parts: Vec<TypedMatrix>, // row-major (i, j) over {1,2} x {1,2}
}

impl PhiImage {
    pub fn part(&self, i: usize, j: usize) -> &TypedMatrix {
        assert!((1..=2).contains(&i) && (1..=2).contains(&j));
        &self.parts[(i - 1) * 2 + (j - 1)]
    }
}

/// Apply the structure map to an element of `A (x) A` given by its
/// coefficients `lam[i][j]` on the idempotent basis: component `(i, j)` is
/// `lam_ij · E_{c_ij}`.  The map is multiplicative componentwise.
pub fn phi_apply(rule: &FusionRule, field: &FieldSpec, lam: &[[Scalar; 2]; 2]) -> PhiImage {
    let mut parts = Vec::with_capacity(4);
    for i in 1..=2 {
        for j in 1..=2 {
            let e = TypedMatrix::identity(field, rule.c(i, j));
            parts.push(e.scale(&lam[i - 1][j - 1]));
        }
    }
    PhiImage { parts }
}

/// Inclusion of the `k`-th copy of `e_i` into `m`: a morphism `e_i -> m`
/// (column matrix with a single unit entry in the `e_i` block).  `k` is
/// 1-based and bounded by the `i`-th component of `m`.
pub fn inclusion(field: &FieldSpec, m: Shape, i: usize, k: usize) -> Morphism {
    projection(field, m, i, k).transpose()
}

/// Projection of `m` onto the `k`-th copy of `e_i`: a morphism `m -> e_i`
/// (row matrix with a single unit entry).
pub fn projection(field: &FieldSpec, m: Shape, i: usize, k: usize) -> Morphism {
    let mi = m.component(i);
    assert!(
        (1..=mi).contains(&k),
        "multiplicity index {k} out of range 1..={mi} for component {i} of {m}"
    );
    let e = match i {
        1 => Shape::e1(),
        2 => Shape::e2(),
        _ => panic!("simple index must be 1 or 2"),
    };
    let mut b1 = PlainMatrix::zeros(field, e.0, m.0);
    let mut b2 = PlainMatrix::zeros(field, e.1, m.1);
    if i == 1 {
        b1.set(0, k - 1, field.one());
    } else {
        b2.set(0, k - 1, field.one());
    }
    TypedMatrix::new(e, m, b1, b2)
}

/// Tensor product of morphisms.
///
/// With `x: m1 -> s1` and `y: m2 -> s2`, the result is `m1(x)m2 -> s1(x)s2`.
/// It is assembled as a grid over the row pairs `(i, u)` (rows of `y` outer,
/// rows of `x` inner) and column pairs `(j, v)`: the cell holds
/// `x_uv * y_ij * E_{c_gh}` where `g`, `h` are the gradings of the `x`- and
/// `y`-rows, and a zero block of the appropriate shape off the gradings.
pub fn mor_tensor(rule: &FusionRule, x: &Morphism, y: &Morphism) -> Morphism {
    assert_eq!(x.field(), y.field(), "field mismatch");
    let field = x.field().clone();
    let out = rule.obj_tensor(x.out_shape(), y.out_shape());
    let inn = rule.obj_tensor(x.in_shape(), y.in_shape());
    if out.is_zero() || inn.is_zero() {
        return TypedMatrix::zeros(&field, out, inn);
    }
    let (xr, xc) = (x.out_shape().total(), x.in_shape().total());
    let (yr, yc) = (y.out_shape().total(), y.in_shape().total());
    let mut grid: Vec<Vec<TypedMatrix>> = Vec::with_capacity(yr * xr);
    for i in 0..yr {
        let h_row = y.row_grading(i);
        for u in 0..xr {
            let g_row = x.row_grading(u);
            let row_shape = rule.c(g_row, h_row);
            let mut grow: Vec<TypedMatrix> = Vec::with_capacity(yc * xc);
            for j in 0..yc {
                let h_col = y.col_grading(j);
                for v in 0..xc {
                    let g_col = x.col_grading(v);
                    let col_shape = rule.c(g_col, h_col);
                    if g_row == g_col && h_row == h_col {
                        let lam = field.mul(&x.full_entry(u, v), &y.full_entry(i, j));
                        if field.is_zero(&lam) {
                            grow.push(TypedMatrix::zeros(&field, row_shape, col_shape));
                        } else {
                            grow.push(TypedMatrix::identity(&field, row_shape).scale(&lam));
                        }
                    } else {
                        grow.push(TypedMatrix::zeros(&field, row_shape, col_shape));
                    }
                }
            }
            grid.push(grow);
        }
    }
    let assembled = pi_assemble(&grid);
    debug_assert_eq!(assembled.out_shape(), out);
    debug_assert_eq!(assembled.in_shape(), inn);
    assembled
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{random_morphism, rng};
    use rand::Rng;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn hom_structure_of_simples() {
        // Hom(e1, e2) and Hom(e2, e1) vanish; End(e_i) is one-dimensional
        let f = q();
        let h12 = TypedMatrix::zeros(&f, Shape::e2(), Shape::e1());
        assert_eq!(h12.block1().rows(), 0);
        assert_eq!(h12.block2().cols(), 0);
        let end1 = TypedMatrix::identity(&f, Shape::e1());
        assert_eq!(end1.block1().rows() * end1.block1().cols(), 1);
        assert_eq!(end1.block2().rows(), 0);
    }

    #[test]
    fn phi_on_idempotent_basis() {
        let f = q();
        let rule = FusionRule::new(1, 1).unwrap();
        let one = f.one();
        let zero = f.zero();
        let img = phi_apply(
            &rule,
            &f,
            &[
                [one.clone(), zero.clone()],
                [zero.clone(), one.clone()],
            ],
        );
        assert!(img.part(1, 1).is_identity());
        assert_eq!(img.part(1, 1).out_shape(), Shape(1, 0));
        assert!(img.part(2, 2).is_identity());
        assert_eq!(img.part(2, 2).out_shape(), Shape(1, 1));
        // the (1,2) part is E_{e2} scaled by zero
        assert!(img.part(1, 2).is_zero());
        // multiplicativity on the graded pieces: componentwise products
        let a = [[f.from_i64(2), f.from_i64(3)], [f.from_i64(5), f.from_i64(7)]];
        let b = [[f.from_i64(11), f.from_i64(13)], [f.from_i64(17), f.from_i64(19)]];
        let mut prod = [[f.zero(), f.zero()], [f.zero(), f.zero()]];
        for i in 0..2 {
            for j in 0..2 {
                prod[i][j] = f.mul(&a[i][j], &b[i][j]);
            }
        }
        let ia = phi_apply(&rule, &f, &a);
        let ib = phi_apply(&rule, &f, &b);
        let ip = phi_apply(&rule, &f, &prod);
        for i in 1..=2 {
            for j in 1..=2 {
                assert_eq!(ia.part(i, j).compose(ib.part(i, j)), *ip.part(i, j));
            }
        }
    }

    #[test]
    fn projection_unit_position() {
        let f = q();
        // row of length 3 with the unit in the e2 block at offset k + m1
        let y = projection(&f, Shape(2, 1), 2, 1);
        assert_eq!(y.out_shape(), Shape::e2());
        assert_eq!(y.block2().cols(), 1);
        assert_eq!(*y.block2().get(0, 0), f.one());
        let (_, full2) = y.to_full();
        // position 3 in the 1x3 full form
        assert_eq!(*full2.get(0, 2), f.one());
    }

    #[test]
    fn basis_orthogonality_and_completeness() {
        let f = q();
        for m in [Shape(2, 3), Shape(1, 1), Shape(0, 2), Shape(3, 0)] {
            for i in 1..=2 {
                for k in 1..=m.component(i) {
                    for ip in 1..=2 {
                        for kp in 1..=m.component(ip) {
                            let y = projection(&f, m, i, k);
                            let x = inclusion(&f, m, ip, kp);
                            let comp = y.compose(&x);
                            if (i, k) == (ip, kp) {
                                assert!(comp.is_identity());
                            } else {
                                assert!(comp.is_zero());
                            }
                        }
                    }
                }
            }
            // completeness: sum of X Y over all (i, k) is E_m
            let mut sum = TypedMatrix::zeros(&f, m, m);
            for i in 1..=2 {
                for k in 1..=m.component(i) {
                    let x = inclusion(&f, m, i, k);
                    let y = projection(&f, m, i, k);
                    sum = sum.add(&x.compose(&y));
                }
            }
            assert!(sum.is_identity());
        }
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn inclusion_index_out_of_range() {
        let f = q();
        let _ = inclusion(&f, Shape(2, 1), 2, 2);
    }

    #[test]
    fn identity_functoriality() {
        let f = q();
        for (m, n) in [(1usize, 1usize), (0, 2), (2, 0), (2, 3)] {
            let rule = FusionRule::new(m, n).unwrap();
            for a in [Shape(1, 1), Shape(2, 0), Shape(0, 1), Shape(2, 2)] {
                for b in [Shape(1, 1), Shape(0, 2), Shape(1, 0)] {
                    let ea = TypedMatrix::identity(&f, a);
                    let eb = TypedMatrix::identity(&f, b);
                    let t = mor_tensor(&rule, &ea, &eb);
                    assert!(t.is_identity(), "E_a (x) E_b = E_(a(x)b) for {a},{b}");
                    assert_eq!(t.out_shape(), rule.obj_tensor(a, b));
                }
            }
        }
    }

    #[test]
    fn unit_object_tensor_is_identity_map() {
        let f = q();
        let rule = FusionRule::new(2, 1).unwrap();
        let mut r = rng(7);
        for _ in 0..50 {
            let a = Shape(r.gen_range(0..3), r.gen_range(0..3));
            let b = Shape(r.gen_range(0..3), r.gen_range(0..3));
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let x = random_morphism(&mut r, &f, a, b);
            let e1 = unit_identity(&f, 1);
            let left = mor_tensor(&rule, &e1, &x);
            let right = mor_tensor(&rule, &x, &e1);
            assert_eq!(left, x);
            assert_eq!(right, x);
        }
    }

    #[test]
    fn functoriality_random() {
        let mut r = rng(11);
        for (m, n) in [(1usize, 0usize), (0, 1), (1, 1), (0, 2), (2, 2)] {
            let rule = FusionRule::new(m, n).unwrap();
            for field in [q(), FieldSpec::prime(5).unwrap()] {
                for _ in 0..40 {
                    let a = Shape(r.gen_range(0..2), r.gen_range(1..3));
                    let b = Shape(r.gen_range(0..2), r.gen_range(1..3));
                    let c = Shape(r.gen_range(0..2), r.gen_range(1..3));
                    let ap = Shape(r.gen_range(0..2), r.gen_range(1..3));
                    let bp = Shape(r.gen_range(0..2), r.gen_range(1..3));
                    let cp = Shape(r.gen_range(0..2), r.gen_range(1..3));
                    // x: b->a, xp: c->b; y: bp->ap, yp: cp->bp
                    let x = random_morphism(&mut r, &field, a, b);
                    let xp = random_morphism(&mut r, &field, b, c);
                    let y = random_morphism(&mut r, &field, ap, bp);
                    let yp = random_morphism(&mut r, &field, bp, cp);
                    let lhs = mor_tensor(&rule, &x.compose(&xp), &y.compose(&yp));
                    let rhs = mor_tensor(&rule, &x, &y).compose(&mor_tensor(&rule, &xp, &yp));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn mixed_tensor_matches_multiplicity_index() {
        // composing inclusions through the tensor lands on the expected
        // basis column of the triple product
        for (m, n) in [(1usize, 1usize), (1, 2), (2, 3)] {
            let f = q();
            let rule = FusionRule::new(m, n).unwrap();
            let c22 = rule.c(2, 2);
            let triple = rule.triple();
            let e2m = unit_identity(&f, 2);
            // (X^{c22}_{2,q} (x) id_{e2}) o X^{c22}_{2,p} hits column m + n(q-1) + p
            for q_idx in 1..=n {
                for p in 1..=n {
                    let xq = inclusion(&f, c22, 2, q_idx);
                    let lhs = mor_tensor(&rule, &xq, &e2m).compose(&inclusion(&f, c22, 2, p));
                    let expected = inclusion(&f, triple, 2, m + n * (q_idx - 1) + p);
                    assert_eq!(lhs, expected);
                }
            }
            // (X^{c22}_{1,q} (x) id_{e2}) o X^{c12}_{2,1} hits column q
            for q_idx in 1..=m {
                let xq = inclusion(&f, c22, 1, q_idx);
                let lhs = mor_tensor(&rule, &xq, &e2m).compose(&inclusion(&f, Shape::e2(), 2, 1));
                let expected = inclusion(&f, triple, 2, q_idx);
                assert_eq!(lhs, expected);
            }
        }
    }
}
