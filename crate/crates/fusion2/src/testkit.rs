//! Deterministic random generators for matrices, morphisms and associator
//! candidates.  Used by the test suites and by the sampling searches; all
//! randomness is seeded so reports are reproducible.

use crate::blockmat::{PlainMatrix, Shape, TypedMatrix};
use crate::fusion::FusionRule;
use crate::pentagon::AssociatorData;
use crate::scalar::{FieldSpec, Scalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded RNG with a stable stream across runs.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random scalar: over a finite field uniform over the elements, over the
/// rationals (or an extension of them) small numerators and denominators.
pub fn random_scalar<R: Rng>(r: &mut R, field: &FieldSpec) -> Scalar {
    if let Some(order) = field.order() {
        let p = field.characteristic();
        let _ = order;
        if field.has_extension() {
            let a = r.gen_range(0..p) as i64;
            let b = r.gen_range(0..p) as i64;
            let base = field.base_field();
            field.from_base_pair(&base.from_i64(a), &base.from_i64(b))
        } else {
            field.from_i64(r.gen_range(0..p) as i64)
        }
    } else if field.has_extension() {
        let base = field.base_field();
        let a = base
            .from_rational(r.gen_range(-6..=6), r.gen_range(1..=3))
            .unwrap();
        let b = base
            .from_rational(r.gen_range(-6..=6), r.gen_range(1..=3))
            .unwrap();
        field.from_base_pair(&a, &b)
    } else {
        field
            .from_rational(r.gen_range(-6..=6), r.gen_range(1..=3))
            .unwrap()
    }
}

pub fn random_nonzero_scalar<R: Rng>(r: &mut R, field: &FieldSpec) -> Scalar {
    loop {
        let x = random_scalar(r, field);
        if !field.is_zero(&x) {
            return x;
        }
    }
}

pub fn random_plain<R: Rng>(
    r: &mut R,
    field: &FieldSpec,
    rows: usize,
    cols: usize,
) -> PlainMatrix {
    PlainMatrix::from_fn(field, rows, cols, |_, _| random_scalar(r, field))
}

/// Random invertible square matrix by rejection; empty matrices count as
/// invertible.
pub fn random_invertible<R: Rng>(r: &mut R, field: &FieldSpec, n: usize) -> PlainMatrix {
    loop {
        let m = random_plain(r, field, n, n);
        if n == 0 || m.is_invertible() {
            return m;
        }
    }
}

/// Random morphism `in_shape -> out_shape` (a typed matrix of that shape).
pub fn random_morphism<R: Rng>(
    r: &mut R,
    field: &FieldSpec,
    out_shape: Shape,
    in_shape: Shape,
) -> TypedMatrix {
    TypedMatrix::new(
        out_shape,
        in_shape,
        random_plain(r, field, out_shape.0, in_shape.0),
        random_plain(r, field, out_shape.1, in_shape.1),
    )
}

/// Random associator candidate; both blocks invertible.
pub fn random_invertible_candidate<R: Rng>(
    r: &mut R,
    field: &FieldSpec,
    rule: FusionRule,
) -> AssociatorData {
    let t = rule.triple();
    AssociatorData::new(
        rule,
        field.clone(),
        random_invertible(r, field, t.0),
        random_invertible(r, field, t.1),
    )
    .expect("dimensions fit by construction")
}

/// Random raw candidate, not necessarily invertible.
pub fn random_candidate<R: Rng>(
    r: &mut R,
    field: &FieldSpec,
    rule: FusionRule,
) -> AssociatorData {
    let t = rule.triple();
    AssociatorData::new(
        rule,
        field.clone(),
        random_plain(r, field, t.0, t.0),
        random_plain(r, field, t.1, t.1),
    )
    .expect("dimensions fit by construction")
}

/// Reusable randomized/exhaustive property suites.  Each function checks its
/// property on the stated number of cases, panics on the first violation and
/// returns the number of cases exercised.
pub mod suites {
    use super::*;
    use crate::blockmat::{perm_matrix, pi_assemble};
    use crate::category::{inclusion, mor_tensor, projection, unit_identity};
    use crate::gauge::{apply_gauge, Gauge};
    use crate::pentagon::{
        basis_index_left, basis_index_right, check_ass4_all, check_biedenharn_elliot_all,
        check_block_system, sixj,
    };

    fn test_fields() -> Vec<FieldSpec> {
        vec![
            FieldSpec::rationals(),
            FieldSpec::prime(5).unwrap(),
            FieldSpec::rationals_sqrt(5).unwrap(),
            FieldSpec::parse("F2[t^2+t+1]").unwrap(),
        ]
    }

    /// Kronecker mixed-product law on random conformable quadruples
    /// (dimensions 0 through 3 included).
    pub fn mixed_product(seed: u64, cases: usize) -> usize {
        let mut checked = 0;
        for field in test_fields() {
            let mut r = rng(seed);
            for _ in 0..cases {
                let (m, s, t) = (
                    r.gen_range(0..4),
                    r.gen_range(0..4),
                    r.gen_range(0..4),
                );
                let (mp, sp, tp) = (
                    r.gen_range(0..4),
                    r.gen_range(0..4),
                    r.gen_range(0..4),
                );
                let x = random_plain(&mut r, &field, m, s);
                let x1 = random_plain(&mut r, &field, s, t);
                let y = random_plain(&mut r, &field, mp, sp);
                let y1 = random_plain(&mut r, &field, sp, tp);
                let lhs = x.kron(&y).mul(&x1.kron(&y1));
                let rhs = x.mul(&x1).kron(&y.mul(&y1));
                assert_eq!(lhs, rhs, "mixed product over {field}");
                checked += 1;
            }
        }
        checked
    }

    /// Kronecker associativity on random triples.
    pub fn kron_associativity(seed: u64, cases: usize) -> usize {
        let mut checked = 0;
        for field in test_fields() {
            let mut r = rng(seed ^ 0x5eed);
            for _ in 0..cases {
                let dims: Vec<usize> = (0..6).map(|_| r.gen_range(0..3)).collect();
                let x = random_plain(&mut r, &field, dims[0], dims[1]);
                let y = random_plain(&mut r, &field, dims[2], dims[3]);
                let z = random_plain(&mut r, &field, dims[4], dims[5]);
                assert_eq!(x.kron(&y).kron(&z), x.kron(&y.kron(&z)));
                checked += 1;
            }
        }
        checked
    }

    /// Functoriality of the morphism tensor on random composable pairs.
    pub fn mor_tensor_functoriality(seed: u64, cases_per_rule: usize) -> usize {
        let mut checked = 0;
        let fields = [FieldSpec::rationals(), FieldSpec::prime(5).unwrap()];
        for (m, n) in [(1usize, 0usize), (0, 1), (1, 1), (0, 2), (2, 2)] {
            let rule = FusionRule::new(m, n).unwrap();
            for field in &fields {
                let mut r = rng(seed ^ ((m * 31 + n) as u64));
                for _ in 0..cases_per_rule {
                    let sh = |r: &mut ChaCha8Rng| Shape(r.gen_range(0..3), r.gen_range(0..3));
                    let (a, b, c) = (sh(&mut r), sh(&mut r), sh(&mut r));
                    let (ap, bp, cp) = (sh(&mut r), sh(&mut r), sh(&mut r));
                    let x = random_morphism(&mut r, field, a, b);
                    let xp = random_morphism(&mut r, field, b, c);
                    let y = random_morphism(&mut r, field, ap, bp);
                    let yp = random_morphism(&mut r, field, bp, cp);
                    let lhs = mor_tensor(&rule, &x.compose(&xp), &y.compose(&yp));
                    let rhs = mor_tensor(&rule, &x, &y).compose(&mor_tensor(&rule, &xp, &yp));
                    assert_eq!(lhs, rhs, "functoriality for rule {rule} over {field}");
                    checked += 1;
                }
            }
        }
        checked
    }

    /// Orthogonality and completeness of the inclusion/projection bases on
    /// random shapes.
    pub fn basis_orthogonality(seed: u64, cases: usize) -> usize {
        let field = FieldSpec::rationals();
        let mut r = rng(seed ^ 0xba515);
        let mut checked = 0;
        while checked < cases {
            let m = Shape(r.gen_range(0..4), r.gen_range(0..4));
            if m.is_zero() {
                continue;
            }
            let mut sum = TypedMatrix::zeros(&field, m, m);
            for i in 1..=2 {
                for k in 1..=m.component(i) {
                    for ip in 1..=2 {
                        for kp in 1..=m.component(ip) {
                            let y = projection(&field, m, i, k);
                            let x = inclusion(&field, m, ip, kp);
                            let comp = y.compose(&x);
                            if (i, k) == (ip, kp) {
                                assert!(comp.is_identity());
                            } else {
                                assert!(comp.is_zero());
                            }
                            checked += 1;
                        }
                    }
                    let x = inclusion(&field, m, i, k);
                    let y = projection(&field, m, i, k);
                    sum = sum.add(&x.compose(&y));
                }
            }
            assert!(sum.is_identity(), "completeness at {m}");
        }
        checked
    }

    /// Naturality of the associator against scalar endomorphisms of the
    /// simples, and the scalar product rule for their tensor.
    pub fn scalar_naturality(seed: u64, cases: usize) -> usize {
        let mut checked = 0;
        for (m, n) in [(1usize, 1usize), (0, 2), (1, 0), (2, 2)] {
            let rule = FusionRule::new(m, n).unwrap();
            for field in [FieldSpec::prime(5).unwrap(), FieldSpec::rationals()] {
                let mut r = rng(seed ^ 0xa7 ^ ((m * 7 + n) as u64));
                let per = cases / 8 + 1;
                for _ in 0..per {
                    let cand = random_invertible_candidate(&mut r, &field, rule);
                    let alpha = random_scalar(&mut r, &field);
                    let beta = random_scalar(&mut r, &field);
                    let gamma = random_scalar(&mut r, &field);
                    for i in 1..=2usize {
                        for j in 1..=2usize {
                            for l in 1..=2usize {
                                let x = unit_identity(&field, i).scale(&alpha);
                                let y = unit_identity(&field, j).scale(&beta);
                                let z = unit_identity(&field, l).scale(&gamma);
                                let yz = mor_tensor(&rule, &y, &z);
                                let xyz = mor_tensor(&rule, &x, &yz);
                                let product = field.mul(&field.mul(&alpha, &beta), &gamma);
                                let obj = xyz.out_shape();
                                let expected =
                                    TypedMatrix::identity(&field, obj).scale(&product);
                                assert_eq!(xyz, expected, "scalar tensor collapses");
                                let xy = mor_tensor(&rule, &x, &y);
                                let xy_z = mor_tensor(&rule, &xy, &z);
                                assert_eq!(xy_z, expected);
                                let a = cand.elementary(i, j, l);
                                assert_eq!(
                                    xyz.compose(&a),
                                    a.compose(&xy_z),
                                    "naturality at ({i},{j},{l})"
                                );
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
        checked
    }

    /// The two multiplicity-space identifications land on the indexed basis
    /// vectors; exhaustive over all index combinations for three rules.
    pub fn index_realization_exhaustive() -> usize {
        let field = FieldSpec::rationals();
        let mut checked = 0;
        for (m, n) in [(1usize, 1usize), (1, 2), (2, 3)] {
            let rule = FusionRule::new(m, n).unwrap();
            for i in 1..=2 {
                for j in 1..=2 {
                    for l in 1..=2 {
                        let obj = rule.obj_tensor(rule.obj_tensor(simple(i), simple(j)), simple(l));
                        for s in 1..=2 {
                            for k in 1..=2 {
                                for q in 1..=rule.c3(i, j, k) {
                                    for p in 1..=rule.c3(k, l, s) {
                                        let u = basis_index_left(&rule, i, j, l, s, k, p, q);
                                        let g = inclusion(&field, rule.c(i, j), k, q);
                                        let f = inclusion(&field, rule.c(k, l), s, p);
                                        let got = mor_tensor(&rule, &g, &unit_identity(&field, l))
                                            .compose(&f);
                                        let want = inclusion(&field, obj, s, u);
                                        assert_eq!(got, want, "left identification");
                                        checked += 1;
                                    }
                                }
                                let t = k;
                                for r in 1..=rule.c3(j, l, t) {
                                    for d in 1..=rule.c3(i, t, s) {
                                        let v = basis_index_right(&rule, i, j, l, s, t, d, r);
                                        let g = inclusion(&field, rule.c(j, l), t, r);
                                        let f = inclusion(&field, rule.c(i, t), s, d);
                                        let got = mor_tensor(&rule, &unit_identity(&field, i), &g)
                                            .compose(&f);
                                        let want = inclusion(&field, obj, s, v);
                                        assert_eq!(got, want, "right identification");
                                        checked += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        checked
    }

    fn simple(i: usize) -> Shape {
        if i == 1 {
            Shape::e1()
        } else {
            Shape::e2()
        }
    }

    /// Permutation matrices are orthogonal with a single 1 per row and
    /// column, on random shape sequences.
    pub fn perm_orthogonality(seed: u64, cases: usize) -> usize {
        let field = FieldSpec::rationals();
        let mut r = rng(seed ^ 0x9e37);
        for _ in 0..cases {
            let len = r.gen_range(1..5);
            let shapes: Vec<Shape> = (0..len)
                .map(|_| Shape(r.gen_range(0..3), r.gen_range(0..3)))
                .collect();
            let p = perm_matrix(&field, &shapes);
            assert!(p.mul(&p.transpose()).is_identity());
            for row in 0..p.rows() {
                let ones = (0..p.cols())
                    .filter(|&c| !field.is_zero(p.get(row, c)))
                    .count();
                assert_eq!(ones, 1);
            }
            for col in 0..p.cols() {
                let ones = (0..p.rows())
                    .filter(|&row| !field.is_zero(p.get(row, col)))
                    .count();
                assert_eq!(ones, 1);
            }
        }
        cases
    }

    /// Grid assembly agrees with both fold orders and with conjugation of
    /// the naive stack by permutation matrices.
    pub fn pi_assembly(seed: u64, cases: usize) -> usize {
        let field = FieldSpec::prime(7).unwrap();
        let mut r = rng(seed ^ 0x717);
        for _ in 0..cases {
            let rows = r.gen_range(1..4);
            let cols = r.gen_range(1..4);
            let row_shapes: Vec<Shape> = (0..rows)
                .map(|_| Shape(r.gen_range(0..3), r.gen_range(0..3)))
                .collect();
            let col_shapes: Vec<Shape> = (0..cols)
                .map(|_| Shape(r.gen_range(0..3), r.gen_range(0..3)))
                .collect();
            let grid: Vec<Vec<TypedMatrix>> = row_shapes
                .iter()
                .map(|&rs| {
                    col_shapes
                        .iter()
                        .map(|&cs| random_morphism(&mut r, &field, rs, cs))
                        .collect()
                })
                .collect();
            let assembled = pi_assemble(&grid);
            // column-major fold
            let cols_folded: Vec<TypedMatrix> = (0..cols)
                .map(|c| {
                    let mut acc = grid[0][c].clone();
                    for row in grid.iter().skip(1) {
                        acc = acc.vstack_typed(&row[c]);
                    }
                    acc
                })
                .collect();
            let mut other = cols_folded[0].clone();
            for c in &cols_folded[1..] {
                other = other.hstack_typed(c);
            }
            assert_eq!(assembled, other, "fold order agreement");
            // permutation-conjugation form on the full components
            let p_rows = perm_matrix(&field, &row_shapes);
            let p_cols = perm_matrix(&field, &col_shapes);
            let naive = |part: usize| {
                let mut vstacked: Option<crate::blockmat::PlainMatrix> = None;
                for row in &grid {
                    let mut hstacked: Option<crate::blockmat::PlainMatrix> = None;
                    for cell in row {
                        let (p1, p2) = cell.to_full();
                        let f = if part == 1 { p1 } else { p2 };
                        hstacked = Some(match hstacked {
                            None => f,
                            Some(acc) => acc.hstack(&f),
                        });
                    }
                    let hrow = hstacked.unwrap();
                    vstacked = Some(match vstacked {
                        None => hrow,
                        Some(acc) => acc.vstack(&hrow),
                    });
                }
                vstacked.unwrap()
            };
            let (a1, a2) = assembled.to_full();
            assert_eq!(a1, p_rows.mul(&naive(1)).mul(&p_cols.transpose()));
            assert_eq!(a2, p_rows.mul(&naive(2)).mul(&p_cols.transpose()));
        }
        cases
    }

    /// Applying two gauges in sequence equals applying their composite.
    pub fn gauge_composition(seed: u64, cases: usize) -> usize {
        let mut checked = 0;
        let fields = [FieldSpec::prime(5).unwrap(), FieldSpec::prime(3).unwrap()];
        for (m, n) in [(1usize, 1usize), (0, 2)] {
            let rule = FusionRule::new(m, n).unwrap();
            for field in &fields {
                let mut r = rng(seed ^ 0x6a ^ ((m * 13 + n) as u64));
                let c22 = rule.c(2, 2);
                for _ in 0..(cases / 4 + 1) {
                    let a = random_invertible_candidate(&mut r, field, rule);
                    let g = Gauge::new(
                        rule,
                        field,
                        random_nonzero_scalar(&mut r, field),
                        random_invertible(&mut r, field, c22.0),
                        random_invertible(&mut r, field, c22.1),
                    )
                    .unwrap();
                    let h = Gauge::new(
                        rule,
                        field,
                        random_nonzero_scalar(&mut r, field),
                        random_invertible(&mut r, field, c22.0),
                        random_invertible(&mut r, field, c22.1),
                    )
                    .unwrap();
                    let two_step = apply_gauge(&apply_gauge(&a, &g), &h);
                    let one_step = apply_gauge(&a, &g.then(&h));
                    assert_eq!(two_step, one_step);
                    checked += 1;
                }
            }
        }
        checked
    }

    /// The three pentagon formulations return the same verdict on random
    /// invertible candidates; the count of agreeing candidates is returned
    /// and any disagreement panics.
    pub fn three_way_agreement(
        seed: u64,
        cases_per_rule: usize,
        rules: &[(usize, usize)],
        field: &FieldSpec,
    ) -> usize {
        let mut checked = 0;
        for &(m, n) in rules {
            let rule = FusionRule::new(m, n).unwrap();
            let mut r = rng(seed ^ 0x3417 ^ ((m * 5 + n) as u64));
            for _ in 0..cases_per_rule {
                let cand = random_invertible_candidate(&mut r, field, rule);
                assert_agreement(&cand);
                checked += 1;
            }
        }
        checked
    }

    /// Check that all three formulations agree on one candidate (of any
    /// validity), panicking with context when they do not.
    pub fn assert_agreement(cand: &AssociatorData) {
        let a = check_ass4_all(cand);
        let b = check_biedenharn_elliot_all(cand);
        let c = check_block_system(cand).all_hold();
        assert!(
            a == b && b == c,
            "formulations disagree (coherence={a}, recoupling={b}, blocks={c}) on rule {} over {}: {}",
            cand.rule(),
            cand.field(),
            cand.to_json()
        );
    }

    /// The 6-j matrices extracted from first principles (associator acting
    /// on the identified bases) match the table entries.
    pub fn sixj_first_principles(seed: u64, candidates_per_rule: usize) -> usize {
        let mut checked = 0;
        for (m, n) in [(1usize, 0usize), (0, 1), (1, 1), (0, 2), (1, 2)] {
            let rule = FusionRule::new(m, n).unwrap();
            let field = FieldSpec::prime(5).unwrap();
            let mut r = rng(seed ^ 0x6a3);
            for _ in 0..candidates_per_rule {
                let cand = random_invertible_candidate(&mut r, &field, rule);
                for i in 1..=2 {
                    for j in 1..=2 {
                        for l in 1..=2 {
                            for s in 1..=2 {
                                for k in 1..=2 {
                                    for t in 1..=2 {
                                        let derived = derive_sixj(&cand, i, j, k, l, s, t);
                                        let table = sixj(&cand, i, j, k, l, s, t);
                                        assert_eq!(
                                            derived, table,
                                            "6-j {{{i} {j} {k}; {l} {s} {t}}} for rule {rule}"
                                        );
                                        checked += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        checked
    }

    // the component of a_{i,j,l} from the k-summand of the left-bracketed
    // basis to the t-summand of the right-bracketed one
    fn derive_sixj(
        data: &crate::pentagon::AssociatorData,
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        s: usize,
        t: usize,
    ) -> crate::blockmat::PlainMatrix {
        let rule = data.rule();
        let field = data.field().clone();
        let rows = rule.c3(i, t, s) * rule.c3(j, l, t);
        let cols = rule.c3(k, l, s) * rule.c3(i, j, k);
        let mut out = crate::blockmat::PlainMatrix::zeros(&field, rows, cols);
        let a = data.elementary(i, j, l);
        for q in 1..=rule.c3(i, j, k) {
            for p in 1..=rule.c3(k, l, s) {
                let col = (q - 1) * rule.c3(k, l, s) + p - 1;
                let g = inclusion(&field, rule.c(i, j), k, q);
                let f = inclusion(&field, rule.c(k, l), s, p);
                let sigma = mor_tensor(&rule, &g, &unit_identity(&field, l)).compose(&f);
                let image = a.compose(&sigma);
                // expand in the right-bracketed basis: coefficient of the
                // basis vector indexed (t, d, r) sits at its column position
                for rr in 1..=rule.c3(j, l, t) {
                    for d in 1..=rule.c3(i, t, s) {
                        let v = basis_index_right(&rule, i, j, l, s, t, d, rr);
                        let row = (rr - 1) * rule.c3(i, t, s) + d - 1;
                        let coeff = image.block(s).get(v - 1, 0).clone();
                        out.set(row, col, coeff);
                    }
                }
            }
        }
        out
    }
}
