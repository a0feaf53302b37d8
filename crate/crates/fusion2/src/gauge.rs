//! Gauge transformations of associators and gauge-equivalence testing.
//!
//! A gauge is a nonzero scalar together with an invertible change of basis
//! of the multiplicity space of `e2 (x) e2`; the components at unit indices
//! are pinned to the scalar.  Applying a gauge to an associator produces the
//! unique associator making the defining intertwining equation hold; two
//! associators are gauge equivalent exactly when the resulting categories
//! are tensor equivalent.

use crate::blockmat::{PlainMatrix, Shape, TypedMatrix};
use crate::category::{inclusion, mor_tensor, projection, unit_identity};
use crate::fusion::FusionRule;
use crate::pentagon::AssociatorData;
use crate::scalar::{FieldError, FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GaugeError {
    #[error("gauge scalar must be nonzero")]
    ZeroScalar,
    #[error("gauge basis change must be invertible")]
    Singular,
    #[error("gauge blocks must have sizes {want}")]
    BadDimensions { want: String },
    #[error("exhaustive search requires a finite field")]
    ExhaustiveNeedsFiniteField,
    #[error("associators live over different rules or fields")]
    Mismatch,
    #[error("exhaustive search space has {0} candidates, above the supported bound")]
    SearchTooLarge(u128),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A gauge: `alpha != 0` plus an invertible typed matrix on the multiplicity
/// space of `e2 (x) e2` (blocks of sizes `m` and `n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gauge {
    rule: FusionRule,
    alpha: Scalar,
    phi22: TypedMatrix,
}

impl Gauge {
    pub fn new(
        rule: FusionRule,
        field: &FieldSpec,
        alpha: Scalar,
        n1: PlainMatrix,
        n2: PlainMatrix,
    ) -> Result<Self, GaugeError> {
        field.check_member(&alpha)?;
        if field.is_zero(&alpha) {
            return Err(GaugeError::ZeroScalar);
        }
        let c22 = rule.c(2, 2);
        if n1.rows() != c22.0 || n1.cols() != c22.0 || n2.rows() != c22.1 || n2.cols() != c22.1 {
            return Err(GaugeError::BadDimensions {
                want: format!("{0}x{0} and {1}x{1}", c22.0, c22.1),
            });
        }
        let phi22 = TypedMatrix::new(c22, c22, n1, n2);
        if !phi22.is_invertible() {
            return Err(GaugeError::Singular);
        }
        Ok(Gauge { rule, alpha, phi22 })
    }

    pub fn identity(rule: FusionRule, field: &FieldSpec) -> Self {
        let c22 = rule.c(2, 2);
        Gauge {
            rule,
            alpha: field.one(),
            phi22: TypedMatrix::identity(field, c22),
        }
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn phi22(&self) -> &TypedMatrix {
        &self.phi22
    }

    pub fn rule(&self) -> FusionRule {
        self.rule
    }

    /// The gauge acting as `self` first, then `next`: components multiply
    /// pointwise with `self` on the left.
    pub fn then(&self, next: &Gauge) -> Gauge {
        assert_eq!(self.rule, next.rule, "rule mismatch in gauge composition");
        let field = self.phi22.field();
        Gauge {
            rule: self.rule,
            alpha: field.mul(&self.alpha, &next.alpha),
            phi22: self.phi22.compose(&next.phi22),
        }
    }

    /// Component `phi_{i,j}` of the induced family: `alpha * E` at unit
    /// indices, the free basis change at `(2,2)`.
    pub fn component(&self, i: usize, j: usize) -> TypedMatrix {
        let field = self.phi22.field();
        match (i, j) {
            (2, 2) => self.phi22.clone(),
            _ => TypedMatrix::identity(field, self.rule.c(i, j)).scale(&self.alpha),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let enc = |m: &PlainMatrix| -> Vec<Vec<String>> {
            m.to_rows()
                .into_iter()
                .map(|row| row.into_iter().map(|x| x.to_string()).collect())
                .collect()
        };
        serde_json::json!({
            "alpha": self.alpha.to_string(),
            "n1": enc(self.phi22.block1()),
            "n2": enc(self.phi22.block2()),
        })
    }
}

// left side of the defining equation at (i, j, l): the associator composed
// with the phi-twisted projection sandwich
fn twist_left(a: &AssociatorData, g: &Gauge, i: usize, j: usize, l: usize) -> TypedMatrix {
    let rule = a.rule();
    let field = a.field();
    let cij = rule.c(i, j);
    let el = unit_identity(field, l);
    let obj = rule.obj_tensor(rule.obj_tensor(simple(i), simple(j)), simple(l));
    let mut sum = TypedMatrix::zeros(field, obj, obj);
    for t in 1..=2 {
        for k in 1..=rule.c3(i, j, t) {
            let x = inclusion(field, cij, t, k);
            let y = projection(field, cij, t, k);
            let term = a
                .elementary(i, j, l)
                .compose(&mor_tensor(&rule, &x, &el))
                .compose(&g.component(t, l))
                .compose(&mor_tensor(&rule, &y.compose(&g.component(i, j)), &el));
            sum = sum.add(&term);
        }
    }
    sum
}

// right-side coefficient of the transformed associator at (i, j, l)
fn twist_right(a: &AssociatorData, g: &Gauge, i: usize, j: usize, l: usize) -> TypedMatrix {
    let rule = a.rule();
    let field = a.field();
    let cjl = rule.c(j, l);
    let ei = unit_identity(field, i);
    let obj = rule.obj_tensor(rule.obj_tensor(simple(i), simple(j)), simple(l));
    let mut sum = TypedMatrix::zeros(field, obj, obj);
    for t in 1..=2 {
        for k in 1..=rule.c3(j, l, t) {
            let x = inclusion(field, cjl, t, k);
            let y = projection(field, cjl, t, k);
            let term = mor_tensor(&rule, &ei, &x)
                .compose(&g.component(i, t))
                .compose(&mor_tensor(&rule, &ei, &y.compose(&g.component(j, l))));
            sum = sum.add(&term);
        }
    }
    sum
}

fn simple(i: usize) -> Shape {
    match i {
        1 => Shape::e1(),
        2 => Shape::e2(),
        _ => panic!("simple index must be 1 or 2"),
    }
}

/// Apply a gauge: the unique associator solving the intertwining equation
/// at `(2,2,2)`.  The unit-index instances of the equation hold identically
/// for this gauge family; this is asserted, not assumed.
pub fn apply_gauge(a: &AssociatorData, g: &Gauge) -> AssociatorData {
    assert_eq!(a.rule(), g.rule(), "rule mismatch");
    // unit-index instances must hold with the identity associator on both sides
    for (i, j, l) in [
        (1, 1, 1),
        (1, 1, 2),
        (1, 2, 1),
        (1, 2, 2),
        (2, 1, 1),
        (2, 1, 2),
        (2, 2, 1),
    ] {
        let lhs = twist_left(a, g, i, j, l);
        let rhs = twist_right(a, g, i, j, l);
        assert_eq!(
            lhs, rhs,
            "unit-index gauge equation failed at ({i},{j},{l})"
        );
    }
    let lhs = twist_left(a, g, 2, 2, 2);
    let coeff = twist_right(a, g, 2, 2, 2);
    let inv = coeff
        .try_inverse()
        .expect("internal error: right-side coefficient is invertible for an invertible gauge");
    let image = inv.compose(&lhs);
    AssociatorData::new(
        a.rule(),
        a.field().clone(),
        image.block1().clone(),
        image.block2().clone(),
    )
    .expect("gauge image has the original dimensions")
}

/// Strategy for the equivalence search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Complete enumeration of all gauges over a finite field.
    Exhaustive,
    /// The one-parameter scaling family (diagonal basis change with equal
    /// scalar blocks); available over any field.
    ParametricScaling,
}

#[derive(Debug, Clone)]
pub enum EquivalenceVerdict {
    Equivalent(Gauge),
    /// Definite no: every gauge was tried.
    Inequivalent,
    /// The searched family found no witness; the full constraint system is
    /// attached for external inspection.
    Inconclusive { residual_system: serde_json::Value },
}

const EXHAUSTIVE_LIMIT: u128 = 1 << 28;

/// Decide gauge equivalence of two associators over the same rule and field.
pub fn are_equivalent(
    a: &AssociatorData,
    b: &AssociatorData,
    strategy: Strategy,
) -> Result<EquivalenceVerdict, GaugeError> {
    if a.rule() != b.rule() || a.field() != b.field() {
        return Err(GaugeError::Mismatch);
    }
    match strategy {
        Strategy::Exhaustive => exhaustive_search(a, b),
        Strategy::ParametricScaling => Ok(parametric_scaling(a, b)),
    }
}

fn exhaustive_search(
    a: &AssociatorData,
    b: &AssociatorData,
) -> Result<EquivalenceVerdict, GaugeError> {
    let field = a.field().clone();
    let rule = a.rule();
    let q = field.order().ok_or(GaugeError::ExhaustiveNeedsFiniteField)?;
    let c22 = rule.c(2, 2);
    let cells = (c22.0 * c22.0 + c22.1 * c22.1) as u32;
    let space = (q - 1) * q.pow(cells);
    if space > EXHAUSTIVE_LIMIT {
        return Err(GaugeError::SearchTooLarge(space));
    }
    let elements = field.elements();
    for alpha in field.units() {
        for n1 in matrices_lex(&field, &elements, c22.0) {
            if c22.0 > 0 && !n1.is_invertible() {
                continue;
            }
            for n2 in matrices_lex(&field, &elements, c22.1) {
                if c22.1 > 0 && !n2.is_invertible() {
                    continue;
                }
                let g = Gauge::new(rule, &field, alpha.clone(), n1.clone(), n2)
                    .expect("constructed invertible");
                if apply_gauge(a, &g) == *b {
                    return Ok(EquivalenceVerdict::Equivalent(g));
                }
            }
        }
    }
    Ok(EquivalenceVerdict::Inequivalent)
}

// all n x n matrices in row-major lexicographic entry order
fn matrices_lex<'a>(
    field: &'a FieldSpec,
    elements: &'a [Scalar],
    n: usize,
) -> impl Iterator<Item = PlainMatrix> + 'a {
    let cells = n * n;
    let count = (elements.len() as u128).pow(cells as u32);
    (0..count).map(move |code| {
        let mut rem = code;
        let mut data = Vec::with_capacity(cells);
        for _ in 0..cells {
            data.push(elements[(rem % elements.len() as u128) as usize].clone());
            rem /= elements.len() as u128;
        }
        // the least significant digit should be the LAST entry for
        // lexicographic order on (row-major) entries
        data.reverse();
        PlainMatrix::from_fn(field, n, n, |r, c| data[r * n + c].clone())
    })
}

fn scaling_gauge(rule: FusionRule, field: &FieldSpec, s: &Scalar) -> Gauge {
    let c22 = rule.c(2, 2);
    Gauge::new(
        rule,
        field,
        field.one(),
        PlainMatrix::identity(field, c22.0).scale(s),
        PlainMatrix::identity(field, c22.1).scale(s),
    )
    .expect("nonzero scaling is invertible")
}

fn parametric_scaling(a: &AssociatorData, b: &AssociatorData) -> EquivalenceVerdict {
    let field = a.field().clone();
    let rule = a.rule();
    // candidate parameters: 1, and every ratio of matching nonzero entries
    let mut candidates: Vec<Scalar> = vec![field.one()];
    let mut push_ratios = |x: &PlainMatrix, y: &PlainMatrix| {
        for r in 0..x.rows() {
            for c in 0..x.cols() {
                let xa = x.get(r, c);
                let yb = y.get(r, c);
                if !field.is_zero(xa) && !field.is_zero(yb) {
                    let ratio = field.div(yb, xa).expect("nonzero");
                    if !candidates.contains(&ratio) {
                        candidates.push(ratio.clone());
                    }
                    let inv = field.inv(&ratio).expect("nonzero");
                    if !candidates.contains(&inv) {
                        candidates.push(inv);
                    }
                }
            }
        }
    };
    push_ratios(a.lambda1(), b.lambda1());
    push_ratios(a.lambda2(), b.lambda2());
    for s in &candidates {
        let g = scaling_gauge(rule, &field, s);
        if apply_gauge(a, &g) == *b {
            return EquivalenceVerdict::Equivalent(g);
        }
    }
    EquivalenceVerdict::Inconclusive {
        residual_system: residual_system_json(a, b),
    }
}

/// Does every gauge fix `a`?  Verified exactly on the bilinear expansion of
/// the defining equation: the left side equals the right-side coefficient
/// composed with `a` on every pair of unit assignments, which makes the
/// residual vanish identically in the gauge unknowns.
pub fn gauge_action_is_trivial(a: &AssociatorData) -> bool {
    let field = a.field().clone();
    let rule = a.rule();
    let c22 = rule.c(2, 2);
    let dim_n1 = c22.0 * c22.0;
    let dim_n2 = c22.1 * c22.1;
    let unknowns = 1 + dim_n1 + dim_n2;
    let unit = |u: usize| -> (Scalar, TypedMatrix) {
        let mut alpha = field.zero();
        let mut n1 = PlainMatrix::zeros(&field, c22.0, c22.0);
        let mut n2 = PlainMatrix::zeros(&field, c22.1, c22.1);
        if u == 0 {
            alpha = field.one();
        } else if u <= dim_n1 {
            let pos = u - 1;
            n1.set(pos / c22.0, pos % c22.0, field.one());
        } else {
            let pos = u - 1 - dim_n1;
            n2.set(pos / c22.1, pos % c22.1, field.one());
        }
        (alpha, TypedMatrix::new(c22, c22, n1, n2))
    };
    let comp = |asg: &(Scalar, TypedMatrix), i: usize, j: usize| -> TypedMatrix {
        match (i, j) {
            (2, 2) => asg.1.clone(),
            _ => TypedMatrix::identity(&field, rule.c(i, j)).scale(&asg.0),
        }
    };
    let el = unit_identity(&field, 2);
    let units: Vec<(Scalar, TypedMatrix)> = (0..unknowns).map(unit).collect();
    for ua in &units {
        for va in &units {
            let obj = rule.triple();
            let mut lhs = TypedMatrix::zeros(&field, obj, obj);
            let mut rhs = TypedMatrix::zeros(&field, obj, obj);
            for t in 1..=2 {
                for k in 1..=rule.c3(2, 2, t) {
                    let x = inclusion(&field, c22, t, k);
                    let y = projection(&field, c22, t, k);
                    lhs = lhs.add(
                        &a.a222()
                            .compose(&mor_tensor(&rule, &x, &el))
                            .compose(&comp(ua, t, 2))
                            .compose(&mor_tensor(&rule, &y.compose(&comp(va, 2, 2)), &el)),
                    );
                    rhs = rhs.add(
                        &mor_tensor(&rule, &el, &x)
                            .compose(&comp(ua, 2, t))
                            .compose(&mor_tensor(&rule, &el, &y.compose(&comp(va, 2, 2)))),
                    );
                }
            }
            if lhs != rhs.compose(&a.a222()) {
                return false;
            }
        }
    }
    true
}

/// The full gauge constraint `L(a, phi) - M(phi)·b = 0` at `(2,2,2)` as a
/// quadratic polynomial system in the unknowns
/// `[alpha, n1 entries row-major, n2 entries row-major]`, serialized
/// entrywise as monomial/coefficient lists.
pub fn residual_system_json(a: &AssociatorData, b: &AssociatorData) -> serde_json::Value {
    let field = a.field().clone();
    let rule = a.rule();
    let c22 = rule.c(2, 2);
    let dim_n1 = c22.0 * c22.0;
    let dim_n2 = c22.1 * c22.1;
    let unknowns = 1 + dim_n1 + dim_n2;

    // unit assignment for unknown u: alpha-part and phi22-part
    let unit = |u: usize| -> (Scalar, TypedMatrix) {
        let mut alpha = field.zero();
        let mut n1 = PlainMatrix::zeros(&field, c22.0, c22.0);
        let mut n2 = PlainMatrix::zeros(&field, c22.1, c22.1);
        if u == 0 {
            alpha = field.one();
        } else if u <= dim_n1 {
            let pos = u - 1;
            n1.set(pos / c22.0, pos % c22.0, field.one());
        } else {
            let pos = u - 1 - dim_n1;
            n2.set(pos / c22.1, pos % c22.1, field.one());
        }
        (alpha, TypedMatrix::new(c22, c22, n1, n2))
    };
    // component phi_{i,j} under an assignment
    let comp = |asg: &(Scalar, TypedMatrix), i: usize, j: usize| -> TypedMatrix {
        match (i, j) {
            (2, 2) => asg.1.clone(),
            _ => TypedMatrix::identity(&field, rule.c(i, j)).scale(&asg.0),
        }
    };
    let el = unit_identity(&field, 2);
    let cij = c22;
    // L is bilinear: slot u feeds phi_{t,2}, slot v feeds phi_{2,2}
    let l_bil = |u: &(Scalar, TypedMatrix), v: &(Scalar, TypedMatrix)| -> TypedMatrix {
        let obj = rule.triple();
        let mut sum = TypedMatrix::zeros(&field, obj, obj);
        for t in 1..=2 {
            for k in 1..=rule.c3(2, 2, t) {
                let x = inclusion(&field, cij, t, k);
                let y = projection(&field, cij, t, k);
                let term = a
                    .a222()
                    .compose(&mor_tensor(&rule, &x, &el))
                    .compose(&comp(u, t, 2))
                    .compose(&mor_tensor(&rule, &y.compose(&comp(v, 2, 2)), &el));
                sum = sum.add(&term);
            }
        }
        sum
    };
    let m_bil = |u: &(Scalar, TypedMatrix), v: &(Scalar, TypedMatrix)| -> TypedMatrix {
        let obj = rule.triple();
        let mut sum = TypedMatrix::zeros(&field, obj, obj);
        for t in 1..=2 {
            for k in 1..=rule.c3(2, 2, t) {
                let x = inclusion(&field, cij, t, k);
                let y = projection(&field, cij, t, k);
                let term = mor_tensor(&rule, &el, &x)
                    .compose(&comp(u, 2, t))
                    .compose(&mor_tensor(&rule, &el, &y.compose(&comp(v, 2, 2))));
                sum = sum.add(&term);
            }
        }
        sum
    };

    let mut equations: Vec<serde_json::Value> = Vec::new();
    let units: Vec<(Scalar, TypedMatrix)> = (0..unknowns).map(unit).collect();
    // coefficient of x_u x_v in each residual entry
    let mut terms: Vec<Vec<Vec<serde_json::Value>>> = Vec::new();
    let t_shape = rule.triple();
    let blocks = [(1usize, t_shape.0), (2usize, t_shape.1)];
    for (bi, sz) in blocks {
        terms.push(vec![Vec::new(); sz * sz]);
        let slot = terms.last_mut().unwrap();
        for (u, ua) in units.iter().enumerate() {
            for (v, va) in units.iter().enumerate() {
                let contrib = l_bil(ua, va).sub(&m_bil(ua, va).compose(&b.a222()));
                let blk = contrib.block(bi);
                for r in 0..sz {
                    for c in 0..sz {
                        let coeff = blk.get(r, c);
                        if !field.is_zero(coeff) {
                            slot[r * sz + c].push(serde_json::json!({
                                "monomial": [u, v],
                                "coeff": coeff.to_string(),
                            }));
                        }
                    }
                }
            }
        }
    }
    for ((bi, sz), slot) in blocks.iter().zip(&terms) {
        for r in 0..*sz {
            for c in 0..*sz {
                let list = &slot[r * sz + c];
                if !list.is_empty() {
                    equations.push(serde_json::json!({
                        "block": bi,
                        "row": r + 1,
                        "col": c + 1,
                        "terms": list,
                    }));
                }
            }
        }
    }
    serde_json::json!({
        "unknowns": unknowns,
        "layout": "x0 = alpha, then n1 entries row-major, then n2 entries row-major",
        "note": "each equation sums coeff * x_u * x_v over its terms and must vanish; unknowns range over invertible assignments",
        "equations": equations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{random_invertible, random_nonzero_scalar, rng};
    use rand::Rng;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    fn assoc(field: &FieldSpec, m: usize, n: usize, l2: &[&[i64]]) -> AssociatorData {
        let rule = FusionRule::new(m, n).unwrap();
        let t = rule.triple();
        AssociatorData::new(
            rule,
            field.clone(),
            PlainMatrix::identity(field, t.0),
            PlainMatrix::from_i64_rows(field, l2),
        )
        .unwrap()
    }

    fn random_gauge<R: Rng>(r: &mut R, field: &FieldSpec, rule: FusionRule) -> Gauge {
        let c22 = rule.c(2, 2);
        Gauge::new(
            rule,
            field,
            random_nonzero_scalar(r, field),
            random_invertible(r, field, c22.0),
            random_invertible(r, field, c22.1),
        )
        .unwrap()
    }

    #[test]
    fn identity_gauge_fixes_everything() {
        let f = f5();
        let a = assoc(&f, 1, 1, &[&[2, 1], &[2, 3]]);
        let g = Gauge::identity(a.rule(), &f);
        assert_eq!(apply_gauge(&a, &g), a);
    }

    #[test]
    fn gauge_action_trivial_when_multiplicity_free() {
        // for (1,0) the whole action collapses to the identity
        let f = f5();
        let a = assoc(&f, 1, 0, &[&[1]]);
        let mut r = rng(31);
        for _ in 0..20 {
            let g = random_gauge(&mut r, &f, a.rule());
            assert_eq!(apply_gauge(&a, &g), a);
        }
    }

    #[test]
    fn char5_eta_scaling_matches_offdiagonal_family() {
        // scaling the multiplicity basis by alpha sends the canonical
        // solution to the family with off-diagonal (alpha, 2/alpha)
        let f = f5();
        let canon = assoc(&f, 1, 1, &[&[2, 1], &[2, 3]]);
        for alpha in [2i64, 3, 4] {
            let g = scaling_gauge(canon.rule(), &f, &f.from_i64(alpha));
            let image = apply_gauge(&canon, &g);
            let ainv = f.inv(&f.from_i64(alpha)).unwrap();
            let expected_23 = f.div(&f.one(), &f.from_i64(alpha)).unwrap();
            let expected_32 = f.mul(&f.from_i64(2), &f.from_i64(alpha));
            let alt_23 = f.from_i64(alpha);
            let alt_32 = f.mul(&f.from_i64(2), &ainv);
            let got_23 = image.lambda23().get(0, 0).clone();
            let got_32 = image.lambda32().get(0, 0).clone();
            // one orientation of the scaling matches the displayed family
            assert!(
                (got_23 == expected_23 && got_32 == expected_32)
                    || (got_23 == alt_23 && got_32 == alt_32),
                "alpha={alpha}: got ({got_23}, {got_32})"
            );
            // diagonal and unit blocks are untouched
            assert_eq!(image.lambda22(), canon.lambda22());
            assert_eq!(image.lambda33(), canon.lambda33());
            assert_eq!(image.lambda1(), canon.lambda1());
        }
    }

    #[test]
    fn golden_family_scaling_structure() {
        let field = FieldSpec::rationals_sqrt(5).unwrap();
        let rule = FusionRule::new(1, 1).unwrap();
        let w = field
            .solve_monic_quadratic(&field.one(), &field.from_i64(-1))
            .roots[1]
            .clone();
        let l2 = PlainMatrix::from_rows(
            &field,
            vec![
                vec![w.clone(), field.one()],
                vec![w.clone(), field.neg(&w)],
            ],
        );
        let a = AssociatorData::new(
            rule,
            field.clone(),
            PlainMatrix::identity(&field, 1),
            l2,
        )
        .unwrap();
        let s = field.from_i64(3);
        let g = scaling_gauge(rule, &field, &s);
        let image = apply_gauge(&a, &g);
        // off-diagonal entries move to (t, w/t) for the scaling parameter
        // in one orientation
        let e23 = image.lambda23().get(0, 0).clone();
        let e32 = image.lambda32().get(0, 0).clone();
        assert_eq!(field.mul(&e23, &e32), w, "product is preserved");
        assert_ne!(e23, field.one(), "scaling moved the off-diagonal entry");
        assert_eq!(image.lambda22(), a.lambda22());
        // pentagon validity is preserved
        assert!(crate::pentagon::check_block_system(&image).all_hold());
    }

    #[test]
    fn gauge_composition_law() {
        let f = f5();
        let mut r = rng(37);
        for (m, n) in [(1usize, 1usize), (0, 2)] {
            let a = if (m, n) == (1, 1) {
                assoc(&f, 1, 1, &[&[2, 1], &[2, 3]])
            } else {
                let rule = FusionRule::new(0, 2).unwrap();
                AssociatorData::new(
                    rule,
                    f.clone(),
                    PlainMatrix::zeros(&f, 0, 0),
                    crate::blockmat::swap_block(&f, 2),
                )
                .unwrap()
            };
            for _ in 0..25 {
                let g = random_gauge(&mut r, &f, a.rule());
                let h = random_gauge(&mut r, &f, a.rule());
                let two_step = apply_gauge(&apply_gauge(&a, &g), &h);
                let one_step = apply_gauge(&a, &g.then(&h));
                assert_eq!(two_step, one_step);
            }
        }
    }

    #[test]
    fn gauge_preserves_pentagon() {
        let f = f5();
        let a = assoc(&f, 1, 1, &[&[2, 1], &[2, 3]]);
        assert!(crate::pentagon::check_block_system(&a).all_hold());
        let mut r = rng(41);
        for _ in 0..50 {
            let g = random_gauge(&mut r, &f, a.rule());
            let image = apply_gauge(&a, &g);
            assert!(crate::pentagon::check_block_system(&image).all_hold());
        }
    }

    #[test]
    fn sign_associators_inequivalent_exhaustively() {
        for p in [3u64, 5] {
            let f = FieldSpec::prime(p).unwrap();
            let plus = assoc(&f, 1, 0, &[&[1]]);
            let minus = assoc(&f, 1, 0, &[&[-1]]);
            match are_equivalent(&plus, &minus, Strategy::Exhaustive).unwrap() {
                EquivalenceVerdict::Inequivalent => {}
                other => panic!("expected inequivalent over F{p}, got {other:?}"),
            }
        }
        // over F2 the two signs coincide
        let f2 = FieldSpec::prime(2).unwrap();
        let plus = assoc(&f2, 1, 0, &[&[1]]);
        let minus = assoc(&f2, 1, 0, &[&[-1]]);
        assert_eq!(plus, minus);
        match are_equivalent(&plus, &minus, Strategy::Exhaustive).unwrap() {
            EquivalenceVerdict::Equivalent(_) => {}
            other => panic!("expected equivalent over F2, got {other:?}"),
        }
    }

    #[test]
    fn exhaustive_needs_finite_field() {
        let q = FieldSpec::rationals();
        let a = assoc(&q, 1, 0, &[&[1]]);
        let b = assoc(&q, 1, 0, &[&[-1]]);
        assert!(matches!(
            are_equivalent(&a, &b, Strategy::Exhaustive),
            Err(GaugeError::ExhaustiveNeedsFiniteField)
        ));
        // parametric over the rationals: inconclusive with a residual system
        match are_equivalent(&a, &b, Strategy::ParametricScaling).unwrap() {
            EquivalenceVerdict::Inconclusive { residual_system } => {
                assert!(residual_system["equations"].as_array().is_some());
            }
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn parametric_scaling_finds_witness() {
        let f = f5();
        let canon = assoc(&f, 1, 1, &[&[2, 1], &[2, 3]]);
        let variant = assoc(&f, 1, 1, &[&[2, 3], &[4, 3]]); // off-diagonal (3, 2/3=4)
        match are_equivalent(&canon, &variant, Strategy::ParametricScaling).unwrap() {
            EquivalenceVerdict::Equivalent(g) => {
                assert_eq!(apply_gauge(&canon, &g), variant);
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn gauge_rejects_bad_data() {
        let f = f5();
        let rule = FusionRule::new(1, 1).unwrap();
        assert!(matches!(
            Gauge::new(
                rule,
                &f,
                f.zero(),
                PlainMatrix::identity(&f, 1),
                PlainMatrix::identity(&f, 1)
            ),
            Err(GaugeError::ZeroScalar)
        ));
        assert!(matches!(
            Gauge::new(
                rule,
                &f,
                f.one(),
                PlainMatrix::zeros(&f, 1, 1),
                PlainMatrix::identity(&f, 1)
            ),
            Err(GaugeError::Singular)
        ));
    }
}
