//! Associator data and the pentagon constraint in three independent
//! formulations:
//!
//! 1. [`check_ass4`] — the four-factor coherence equation evaluated verbatim
//!    with morphism tensor products and inclusion/projection bases;
//! 2. [`check_biedenharn_elliot`] — the recoupling identity on 6-j matrices;
//! 3. [`check_block_system`] — the distilled per-case block equations (one
//!    equation when `n = 0`, one when `m = 0`, thirteen when `m, n > 0`).
//!
//! All three agree on every candidate; the acceptance suite exercises that
//! agreement on random candidates.

use crate::blockmat::{swap_block, swap_rect, PlainMatrix, Shape, TypedMatrix};
use crate::category::{inclusion, mor_tensor, projection, unit_identity, Morphism};
use crate::fusion::FusionRule;
use crate::scalar::{FieldError, FieldSpec};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PentagonError {
    #[error("block dimensions {got} do not match the rule (expected {want})")]
    BadDimensions { want: String, got: String },
    #[error("field mismatch between blocks")]
    FieldMismatch,
    #[error("associator is singular (both diagonal blocks must be invertible)")]
    Singular,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Raw associator candidate: the one free datum of the structure, the
/// endomorphism of `e2 (x) e2 (x) e2` with diagonal blocks `lambda1` (size
/// `mn`) and `lambda2` (size `m + n^2`).  No invertibility is assumed; the
/// brute-force search uses this type directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatorData {
    rule: FusionRule,
    field: FieldSpec,
    lambda1: PlainMatrix,
    lambda2: PlainMatrix,
}

impl AssociatorData {
    pub fn new(
        rule: FusionRule,
        field: FieldSpec,
        lambda1: PlainMatrix,
        lambda2: PlainMatrix,
    ) -> Result<Self, PentagonError> {
        let t = rule.triple();
        if lambda1.rows() != t.0 || lambda1.cols() != t.0 || lambda2.rows() != t.1 || lambda2.cols() != t.1 {
            return Err(PentagonError::BadDimensions {
                want: format!("{}x{} and {}x{}", t.0, t.0, t.1, t.1),
                got: format!(
                    "{}x{} and {}x{}",
                    lambda1.rows(),
                    lambda1.cols(),
                    lambda2.rows(),
                    lambda2.cols()
                ),
            });
        }
        if lambda1.field() != &field || lambda2.field() != &field {
            return Err(PentagonError::FieldMismatch);
        }
        Ok(AssociatorData {
            rule,
            field,
            lambda1,
            lambda2,
        })
    }

    pub fn rule(&self) -> FusionRule {
        self.rule
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn lambda1(&self) -> &PlainMatrix {
        &self.lambda1
    }

    pub fn lambda2(&self) -> &PlainMatrix {
        &self.lambda2
    }

    /// Top-left `m x m` block of `lambda2`.
    pub fn lambda22(&self) -> PlainMatrix {
        let m = self.rule.m();
        self.lambda2.submatrix(0, 0, m, m)
    }

    /// Top-right `m x n^2` block of `lambda2`.
    pub fn lambda23(&self) -> PlainMatrix {
        let (m, n) = (self.rule.m(), self.rule.n());
        self.lambda2.submatrix(0, m, m, n * n)
    }

    /// Bottom-left `n^2 x m` block of `lambda2`.
    pub fn lambda32(&self) -> PlainMatrix {
        let (m, n) = (self.rule.m(), self.rule.n());
        self.lambda2.submatrix(m, 0, n * n, m)
    }

    /// Bottom-right `n^2 x n^2` block of `lambda2`.
    pub fn lambda33(&self) -> PlainMatrix {
        let (m, n) = (self.rule.m(), self.rule.n());
        self.lambda2.submatrix(m, m, n * n, n * n)
    }

    /// The candidate as an endomorphism of the triple product.
    pub fn a222(&self) -> TypedMatrix {
        let t = self.rule.triple();
        TypedMatrix::new(t, t, self.lambda1.clone(), self.lambda2.clone())
    }

    /// Elementary associator on three simple factors: identity whenever an
    /// index is 1, the free datum at `(2,2,2)`.
    pub fn elementary(&self, i: usize, j: usize, l: usize) -> TypedMatrix {
        if (i, j, l) == (2, 2, 2) {
            self.a222()
        } else {
            let obj = self
                .rule
                .obj_tensor(self.rule.obj_tensor(simple(i), simple(j)), simple(l));
            TypedMatrix::identity(&self.field, obj)
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.lambda1.is_invertible() && self.lambda2.is_invertible()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let enc = |m: &PlainMatrix| -> Vec<Vec<String>> {
            m.to_rows()
                .into_iter()
                .map(|row| row.into_iter().map(|x| x.to_string()).collect())
                .collect()
        };
        serde_json::json!({
            "rule": {"m": self.rule.m(), "n": self.rule.n()},
            "field": self.field.to_string(),
            "lambda1": enc(&self.lambda1),
            "lambda2": enc(&self.lambda2),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, PentagonError> {
        #[derive(Deserialize)]
        struct RuleJson {
            m: usize,
            n: usize,
        }
        #[derive(Deserialize)]
        struct AssocJson {
            rule: RuleJson,
            field: String,
            lambda1: Vec<Vec<String>>,
            lambda2: Vec<Vec<String>>,
        }
        let raw: AssocJson =
            serde_json::from_value(value.clone()).map_err(|_| FieldError::Parse {
                what: "associator",
                input: value.to_string(),
            })?;
        let rule = FusionRule::new(raw.rule.m, raw.rule.n).map_err(|_| FieldError::Parse {
            what: "fusion rule",
            input: format!("m={}, n={}", raw.rule.m, raw.rule.n),
        })?;
        let field = FieldSpec::parse(&raw.field)?;
        let lambda1 = crate::blockmat::plain_from_strings(&field, &raw.lambda1)?;
        let lambda2 = crate::blockmat::plain_from_strings(&field, &raw.lambda2)?;
        AssociatorData::new(rule, field, lambda1, lambda2)
    }
}

/// Validated associator: an [`AssociatorData`] whose diagonal blocks are
/// both invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Associator(AssociatorData);

impl Associator {
    pub fn new(data: AssociatorData) -> Result<Self, PentagonError> {
        if !data.is_invertible() {
            return Err(PentagonError::Singular);
        }
        Ok(Associator(data))
    }

    pub fn data(&self) -> &AssociatorData {
        &self.0
    }

    pub fn into_data(self) -> AssociatorData {
        self.0
    }
}

impl std::ops::Deref for Associator {
    type Target = AssociatorData;

    fn deref(&self) -> &AssociatorData {
        &self.0
    }
}

fn simple(i: usize) -> Shape {
    match i {
        1 => Shape::e1(),
        2 => Shape::e2(),
        _ => panic!("simple index must be 1 or 2"),
    }
}

// ---- multiplicity-basis index maps ------------------------------------------

/// Position (1-based) of the basis vector of `Hom(e_s, e_i e_j e_l)` that the
/// left-bracketed pair `(p, q)` through the intermediate simple `k` lands on.
/// Requires `1 <= p <= c_{kls}` and `1 <= q <= c_{ijk}`.
pub fn basis_index_left(
    rule: &FusionRule,
    i: usize,
    j: usize,
    l: usize,
    s: usize,
    k: usize,
    p: usize,
    q: usize,
) -> usize {
    let ckls = rule.c3(k, l, s);
    let cijk = rule.c3(i, j, k);
    assert!(
        (1..=ckls).contains(&p) && (1..=cijk).contains(&q),
        "basis indices out of range: p={p} (max {ckls}), q={q} (max {cijk})"
    );
    let offset: usize = (1..k).map(|w| rule.c3(w, l, s) * rule.c3(i, j, w)).sum();
    offset + (q - 1) * ckls + p
}

/// Position for the right-bracketed pair `(d, r)` through the intermediate
/// simple `t`.  Requires `1 <= d <= c_{its}` and `1 <= r <= c_{jlt}`.
pub fn basis_index_right(
    rule: &FusionRule,
    i: usize,
    j: usize,
    l: usize,
    s: usize,
    t: usize,
    d: usize,
    r: usize,
) -> usize {
    let cits = rule.c3(i, t, s);
    let cjlt = rule.c3(j, l, t);
    assert!(
        (1..=cits).contains(&d) && (1..=cjlt).contains(&r),
        "basis indices out of range: d={d} (max {cits}), r={r} (max {cjlt})"
    );
    let offset: usize = (1..t).map(|w| rule.c3(i, w, s) * rule.c3(j, l, w)).sum();
    offset + (r - 1) * cits + d
}

// ---- 6-j symbols -------------------------------------------------------------

/// The 6-j matrix `{i j k; l s t}`: the component of the associator between
/// multiplicity spaces, of dimensions `(c_its * c_jlt) x (c_kls * c_ijk)`.
pub fn sixj(
    data: &AssociatorData,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    s: usize,
    t: usize,
) -> PlainMatrix {
    let rule = data.rule();
    let field = data.field();
    let rows = rule.c3(i, t, s) * rule.c3(j, l, t);
    let cols = rule.c3(k, l, s) * rule.c3(i, j, k);
    let key = (i, j, k, l, s, t);
    // identity families from the unit-index associators
    let ident = |n: usize| PlainMatrix::identity(field, n);
    match key {
        (1, 1, 1, 1, 1, 1) | (1, 1, 1, 2, 2, 2) | (1, 2, 2, 1, 2, 2) | (2, 1, 2, 1, 2, 1) => {
            ident(1)
        }
        (1, 2, 2, 2, 1, 1) | (2, 1, 2, 2, 1, 2) | (2, 2, 1, 1, 1, 2) => ident(rule.m()),
        (1, 2, 2, 2, 2, 2) | (2, 1, 2, 2, 2, 2) | (2, 2, 2, 1, 2, 2) => ident(rule.n()),
        (2, 2, 2, 2, 1, 2) => data.lambda1().clone(),
        (2, 2, 1, 2, 2, 1) => data.lambda22(),
        (2, 2, 2, 2, 2, 1) => data.lambda23(),
        (2, 2, 1, 2, 2, 2) => data.lambda32(),
        (2, 2, 2, 2, 2, 2) => data.lambda33(),
        _ => PlainMatrix::zeros(field, rows, cols),
    }
}

/// The full table of all 64 index patterns.
pub struct SixJTable {
    entries: Vec<((usize, usize, usize, usize, usize, usize), PlainMatrix)>,
}

impl SixJTable {
    pub fn build(data: &AssociatorData) -> Self {
        let mut entries = Vec::with_capacity(64);
        for i in 1..=2 {
            for j in 1..=2 {
                for k in 1..=2 {
                    for l in 1..=2 {
                        for s in 1..=2 {
                            for t in 1..=2 {
                                entries.push(((i, j, k, l, s, t), sixj(data, i, j, k, l, s, t)));
                            }
                        }
                    }
                }
            }
        }
        SixJTable { entries }
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize, s: usize, t: usize) -> &PlainMatrix {
        &self
            .entries
            .iter()
            .find(|(key, _)| *key == (i, j, k, l, s, t))
            .expect("all 64 entries present")
            .1
    }

    pub fn iter(
        &self,
    ) -> impl Iterator<Item = (&(usize, usize, usize, usize, usize, usize), &PlainMatrix)> {
        self.entries.iter().map(|(k, v)| (k, v))
    }
}

// ---- formulation 1: the four-factor coherence equation -----------------------

/// Outcome of one constraint check; `residual` is `lhs - rhs`.
#[derive(Debug, Clone)]
pub struct TypedCheck {
    pub holds: bool,
    pub residual: TypedMatrix,
}

#[derive(Debug, Clone)]
pub struct PlainCheck {
    pub holds: bool,
    pub residual: PlainMatrix,
}

/// Evaluate the four-factor coherence equation at simple indices
/// `(i1, i2, i3, i4)` by building both pentagon paths from morphism tensor
/// products and the inclusion/projection bases.
pub fn check_ass4(data: &AssociatorData, idx: [usize; 4]) -> TypedCheck {
    let [i1, i2, i3, i4] = idx;
    let rule = data.rule();
    let field = data.field();
    let e = |i: usize| unit_identity(field, i);
    let t = |x: &Morphism, y: &Morphism| mor_tensor(&rule, x, y);

    let obj = rule.obj_tensor(
        rule.obj_tensor(rule.obj_tensor(simple(i1), simple(i2)), simple(i3)),
        simple(i4),
    );
    let mut lhs = TypedMatrix::zeros(field, obj, obj);
    let c23 = rule.c(i2, i3);
    for j in 1..=2 {
        for k in 1..=rule.c3(i2, i3, j) {
            let xjk = inclusion(field, c23, j, k);
            let yjk = projection(field, c23, j, k);
            // (e_{i1} (x) a_{i2,i3,i4} (X (x) e_{i4}))
            let head = t(&e(i1), &data.elementary(i2, i3, i4).compose(&t(&xjk, &e(i4))));
            // ((e_{i1} (x) Y) a_{i1,i2,i3} (x) e_{i4})
            let tail = t(
                &t(&e(i1), &yjk).compose(&data.elementary(i1, i2, i3)),
                &e(i4),
            );
            let term = head
                .compose(&data.elementary(i1, j, i4))
                .compose(&tail);
            lhs = lhs.add(&term);
        }
    }

    let mut rhs = TypedMatrix::zeros(field, obj, obj);
    let c34 = rule.c(i3, i4);
    let c12 = rule.c(i1, i2);
    for j in 1..=2 {
        for k in 1..=rule.c3(i3, i4, j) {
            let xjk = inclusion(field, c34, j, k);
            let yjk = projection(field, c34, j, k);
            for jp in 1..=2 {
                for kp in 1..=rule.c3(i1, i2, jp) {
                    let xpk = inclusion(field, c12, jp, kp);
                    let ypk = projection(field, c12, jp, kp);
                    let head = t(&e(i1), &t(&e(i2), &xjk));
                    let mid = t(&xpk, &yjk);
                    let tail = t(&t(&ypk, &e(i3)), &e(i4));
                    let term = head
                        .compose(&data.elementary(i1, i2, j))
                        .compose(&mid)
                        .compose(&data.elementary(jp, i3, i4))
                        .compose(&tail);
                    rhs = rhs.add(&term);
                }
            }
        }
    }

    let residual = lhs.sub(&rhs);
    TypedCheck {
        holds: residual.is_zero(),
        residual,
    }
}

/// All sixteen simple-index tuples of the four-factor equation.
pub fn check_ass4_all(data: &AssociatorData) -> bool {
    for i1 in 1..=2 {
        for i2 in 1..=2 {
            for i3 in 1..=2 {
                for i4 in 1..=2 {
                    if !check_ass4(data, [i1, i2, i3, i4]).holds {
                        return false;
                    }
                }
            }
        }
    }
    true
}

// ---- formulation 2: the recoupling identity on 6-j matrices ------------------

/// Evaluate the recoupling identity at outer indices
/// `(j0, j5, j6, j7, j8)` (the four tensor factors are the nontrivial
/// simple).  Both sides are matrices from the triple multiplicity space
/// graded `(j6, j5)` to the one graded `(j7, j8)`; every Kronecker factor is
/// dimension-audited before multiplying.
pub fn check_biedenharn_elliot(data: &AssociatorData, idx: [usize; 5]) -> PlainCheck {
    let [j0, j5, j6, j7, j8] = idx;
    let rule = data.rule();
    let field = data.field();
    let c3 = |i, j, k| rule.c3(i, j, k);
    let ident = |n: usize| PlainMatrix::identity(field, n);

    let src = c3(j6, 2, j0) * c3(j5, 2, j6) * c3(2, 2, j5);
    let dst = c3(2, j7, j0) * c3(2, j8, j7) * c3(2, 2, j8);

    let audit = |label: &str, a: &PlainMatrix, b: &PlainMatrix| {
        assert_eq!(
            a.cols(),
            b.rows(),
            "recoupling factor mismatch at {label}: {}x{} then {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        );
    };

    let mut lhs = PlainMatrix::zeros(field, dst, src);
    for j in 1..=2 {
        let m1 = sixj(data, 2, 2, j, 2, j7, j8);
        let m2 = sixj(data, 2, j, j6, 2, j0, j7);
        let m3 = sixj(data, 2, 2, j5, 2, j6, j);
        let f1 = ident(c3(2, j7, j0)).kron(&m1);
        let f2 = m2.kron(&ident(c3(2, 2, j)));
        let f3 = ident(c3(j6, 2, j0)).kron(&m3);
        audit("lhs inner", &f2, &f3);
        audit("lhs outer", &f1, &f2);
        let term = f1.mul(&f2).mul(&f3);
        lhs = lhs.add(&term);
    }

    let m4 = sixj(data, 2, 2, j5, j8, j0, j7);
    let m5 = sixj(data, j5, 2, j6, 2, j0, j8);
    let g1 = m4.kron(&ident(c3(2, 2, j8)));
    // flip of the second and third tensor factors
    let p23 = ident(c3(j5, j8, j0)).kron(&swap_rect(field, c3(2, 2, j5), c3(2, 2, j8)));
    let g3 = m5.kron(&ident(c3(2, 2, j5)));
    audit("rhs inner", &p23, &g3);
    audit("rhs outer", &g1, &p23);
    let rhs = g1.mul(&p23).mul(&g3);

    let residual = lhs.sub(&rhs);
    PlainCheck {
        holds: residual.is_zero(),
        residual,
    }
}

/// All 32 outer-index tuples of the recoupling identity.
pub fn check_biedenharn_elliot_all(data: &AssociatorData) -> bool {
    for j0 in 1..=2 {
        for j5 in 1..=2 {
            for j6 in 1..=2 {
                for j7 in 1..=2 {
                    for j8 in 1..=2 {
                        if !check_biedenharn_elliot(data, [j0, j5, j6, j7, j8]).holds {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

// ---- formulation 3: per-case block systems -----------------------------------

/// Which branch of the case split a report came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockSystemCase {
    /// `m > 0, n = 0`: one equation.
    UnitSquare,
    /// `m = 0, n > 0`: one equation.
    SelfDual,
    /// `m, n > 0`: thirteen equations.
    Mixed,
}

#[derive(Debug, Clone)]
pub struct EquationCheck {
    pub label: &'static str,
    pub holds: bool,
    pub residual: PlainMatrix,
}

#[derive(Debug, Clone)]
pub struct BlockSystemReport {
    pub case: BlockSystemCase,
    pub equations: Vec<EquationCheck>,
}

impl BlockSystemReport {
    pub fn all_hold(&self) -> bool {
        self.equations.iter().all(|e| e.holds)
    }

    pub fn first_failure(&self) -> Option<&EquationCheck> {
        self.equations.iter().find(|e| !e.holds)
    }
}

/// Evaluate the distilled block equations for the candidate's case.
pub fn check_block_system(data: &AssociatorData) -> BlockSystemReport {
    let rule = data.rule();
    let (m, n) = (rule.m(), rule.n());
    let field = data.field();
    let im = PlainMatrix::identity(field, m);
    let inn = PlainMatrix::identity(field, n);
    let l1 = data.lambda1();
    let l22 = data.lambda22();
    let l23 = data.lambda23();
    let l32 = data.lambda32();
    let l33 = data.lambda33();

    let mut equations = Vec::new();
    let mut push = |label: &'static str, lhs: PlainMatrix, rhs: PlainMatrix| {
        let residual = lhs.sub(&rhs);
        equations.push(EquationCheck {
            label,
            holds: residual.is_zero(),
            residual,
        });
    };

    if n == 0 {
        // single equation: I_m kron (lambda22)^2 equals the block swap
        push("i", im.kron(&l22.mul(&l22)), swap_block(field, m));
        return BlockSystemReport {
            case: BlockSystemCase::UnitSquare,
            equations,
        };
    }
    if m == 0 {
        let swap = swap_block(field, n);
        let p23 = inn.kron(&swap);
        let lhs = inn.kron(&l33).mul(&l33.kron(&inn)).mul(&inn.kron(&l33));
        let rhs = l33.kron(&inn).mul(&p23).mul(&l33.kron(&inn));
        push("i", lhs, rhs);
        return BlockSystemReport {
            case: BlockSystemCase::SelfDual,
            equations,
        };
    }

    let swap_n = swap_block(field, n);
    let swap_mn = swap_rect(field, m, n); // block pattern (m, n), size mn x mn
    let zero = |r: usize, c: usize| PlainMatrix::zeros(field, r, c);
    let mm = m * m;
    let mn2 = m * n * n;
    let nm = n * m;
    let n3 = n * n * n;

    push(
        "i",
        im.kron(&l22.mul(&l22))
            .add(&im.kron(&l23).mul(&l1.kron(&inn)).mul(&im.kron(&l32))),
        swap_block(field, m),
    );
    push(
        "ii",
        im.kron(&l22.mul(&l23))
            .add(&im.kron(&l23).mul(&l1.kron(&inn)).mul(&im.kron(&l33))),
        zero(mm, mn2),
    );
    push(
        "iii",
        im.kron(&l32.mul(&l22))
            .add(&im.kron(&l33).mul(&l1.kron(&inn)).mul(&im.kron(&l32))),
        zero(mn2, mm),
    );
    push(
        "iv",
        im.kron(&l32.mul(&l23))
            .add(&im.kron(&l33).mul(&l1.kron(&inn)).mul(&im.kron(&l33))),
        l1.kron(&inn).mul(&im.kron(&swap_n)).mul(&l1.kron(&inn)),
    );
    push(
        "v",
        l1.mul(&l22.kron(&inn)).mul(l1),
        l23.kron(&inn).mul(&inn.kron(&swap_n)).mul(&l32.kron(&inn)),
    );
    push(
        "vi",
        l1.mul(&l23.kron(&inn)).mul(&inn.kron(&l32)),
        l22.kron(&inn).mul(&swap_mn),
    );
    push(
        "vii",
        l1.mul(&l23.kron(&inn)).mul(&inn.kron(&l33)),
        l23.kron(&inn).mul(&inn.kron(&swap_n)).mul(&l33.kron(&inn)),
    );
    push(
        "viii",
        inn.kron(&l23).mul(&l32.kron(&inn)).mul(l1),
        swap_mn.transpose().mul(&l22.kron(&inn)),
    );
    push(
        "ix",
        inn.kron(&l22.mul(&l22))
            .add(&inn.kron(&l23).mul(&l33.kron(&inn)).mul(&inn.kron(&l32))),
        zero(nm, nm),
    );
    push(
        "x",
        inn.kron(&l22.mul(&l23))
            .add(&inn.kron(&l23).mul(&l33.kron(&inn)).mul(&inn.kron(&l33))),
        swap_mn.transpose().mul(&l23.kron(&inn)),
    );
    push(
        "xi",
        inn.kron(&l33).mul(&l32.kron(&inn)).mul(l1),
        l33.kron(&inn).mul(&inn.kron(&swap_n)).mul(&l32.kron(&inn)),
    );
    push(
        "xii",
        inn.kron(&l32.mul(&l22))
            .add(&inn.kron(&l33).mul(&l33.kron(&inn)).mul(&inn.kron(&l32))),
        l32.kron(&inn).mul(&swap_mn),
    );
    push(
        "xiii",
        inn.kron(&l32.mul(&l23))
            .add(&inn.kron(&l33).mul(&l33.kron(&inn)).mul(&inn.kron(&l33))),
        l33.kron(&inn).mul(&inn.kron(&swap_n)).mul(&l33.kron(&inn)),
    );
    let _ = n3;
    BlockSystemReport {
        case: BlockSystemCase::Mixed,
        equations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{random_invertible_candidate, rng};

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    fn scalar_assoc(field: &FieldSpec, m: usize, n: usize, entries2: &[&[i64]]) -> AssociatorData {
        let rule = FusionRule::new(m, n).unwrap();
        let t = rule.triple();
        AssociatorData::new(
            rule,
            field.clone(),
            PlainMatrix::identity(field, t.0),
            PlainMatrix::from_i64_rows(field, entries2),
        )
        .unwrap()
    }

    fn golden_assoc() -> AssociatorData {
        // lambda2 = [[w, 1], [w, -w]] with w the positive quadratic root
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
        AssociatorData::new(
            rule,
            field.clone(),
            PlainMatrix::identity(&field, 1),
            l2,
        )
        .unwrap()
    }

    fn char5_assoc() -> AssociatorData {
        scalar_assoc(&f5(), 1, 1, &[&[2, 1], &[2, 3]])
    }

    #[test]
    fn sixj_table_dimensions_and_values() {
        let a = char5_assoc();
        // unit-index entries are identities of the documented sizes
        assert!(sixj(&a, 1, 1, 1, 1, 1, 1).is_identity());
        assert_eq!(sixj(&a, 1, 1, 1, 1, 1, 1).rows(), 1);
        assert!(sixj(&a, 1, 2, 2, 2, 1, 1).is_identity());
        assert_eq!(sixj(&a, 1, 2, 2, 2, 1, 1).rows(), 1); // I_m with m = 1
        assert!(sixj(&a, 2, 2, 2, 1, 2, 2).is_identity());
        // the five candidate blocks
        assert_eq!(sixj(&a, 2, 2, 2, 2, 1, 2), *a.lambda1());
        assert_eq!(sixj(&a, 2, 2, 1, 2, 2, 1), a.lambda22());
        assert_eq!(sixj(&a, 2, 2, 2, 2, 2, 1), a.lambda23());
        assert_eq!(sixj(&a, 2, 2, 1, 2, 2, 2), a.lambda32());
        assert_eq!(sixj(&a, 2, 2, 2, 2, 2, 2), a.lambda33());
        // a zero entry: one of its dimensions vanishes here
        let z = sixj(&a, 1, 2, 1, 2, 2, 2);
        assert!(z.is_zero());
        // every entry has the documented dimensions
        let rule = a.rule();
        for (key, mat) in SixJTable::build(&a).iter() {
            let &(i, j, k, l, s, t) = key;
            assert_eq!(mat.rows(), rule.c3(i, t, s) * rule.c3(j, l, t));
            assert_eq!(mat.cols(), rule.c3(k, l, s) * rule.c3(i, j, k));
        }
    }

    #[test]
    fn basis_index_formulas() {
        let rule = FusionRule::new(3, 2).unwrap();
        let (m, n) = (3usize, 2usize);
        // all indices 2, intermediate 2: offset m
        for q in 1..=n {
            for p in 1..=n {
                assert_eq!(
                    basis_index_left(&rule, 2, 2, 2, 2, 2, p, q),
                    m + n * (q - 1) + p
                );
            }
        }
        // all indices 2, intermediate 1: plain q (p forced to 1)
        for q in 1..=m {
            assert_eq!(basis_index_left(&rule, 2, 2, 2, 2, 1, 1, q), q);
        }
        // l = 1: k = s and p = 1 forced, u tracks the free index q
        for q in 1..=m {
            assert_eq!(basis_index_left(&rule, 2, 2, 1, 1, 1, 1, q), q);
        }
        for q in 1..=n {
            assert_eq!(basis_index_left(&rule, 2, 2, 1, 2, 2, 1, q), q);
        }
    }

    #[test]
    fn basis_index_is_bijective() {
        for (m, n) in [(1usize, 1usize), (1, 2), (2, 3)] {
            let rule = FusionRule::new(m, n).unwrap();
            for i in 1..=2 {
                for j in 1..=2 {
                    for l in 1..=2 {
                        for s in 1..=2 {
                            let dim: usize =
                                (1..=2).map(|k| rule.c3(k, l, s) * rule.c3(i, j, k)).sum();
                            let mut seen_left = vec![false; dim];
                            let mut seen_right = vec![false; dim];
                            for k in 1..=2 {
                                for q in 1..=rule.c3(i, j, k) {
                                    for p in 1..=rule.c3(k, l, s) {
                                        let u = basis_index_left(&rule, i, j, l, s, k, p, q);
                                        assert!(!seen_left[u - 1]);
                                        seen_left[u - 1] = true;
                                    }
                                }
                            }
                            let dim_r: usize =
                                (1..=2).map(|t| rule.c3(i, t, s) * rule.c3(j, l, t)).sum();
                            assert_eq!(dim, dim_r, "both decompositions have equal size");
                            for t in 1..=2 {
                                for r in 1..=rule.c3(j, l, t) {
                                    for d in 1..=rule.c3(i, t, s) {
                                        let v = basis_index_right(&rule, i, j, l, s, t, d, r);
                                        assert!(!seen_right[v - 1]);
                                        seen_right[v - 1] = true;
                                    }
                                }
                            }
                            assert!(seen_left.iter().all(|&b| b));
                            assert!(seen_right.iter().all(|&b| b));
                        }
                    }
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn basis_index_rejects_bad_range() {
        let rule = FusionRule::new(1, 1).unwrap();
        let _ = basis_index_left(&rule, 2, 2, 2, 2, 2, 2, 1);
    }

    #[test]
    fn ass4_holds_with_any_unit_index() {
        let mut r = rng(23);
        for (m, n) in [(1usize, 0usize), (0, 2), (1, 1)] {
            let rule = FusionRule::new(m, n).unwrap();
            let cand = random_invertible_candidate(&mut r, &f5(), rule);
            for idx in [
                [1, 2, 2, 2],
                [2, 1, 2, 2],
                [2, 2, 1, 2],
                [2, 2, 2, 1],
                [1, 1, 2, 1],
                [1, 1, 1, 1],
            ] {
                assert!(
                    check_ass4(&cand, idx).holds,
                    "tuple {idx:?} must hold for any invertible candidate"
                );
            }
        }
    }

    #[test]
    fn ass4_sign_solutions_for_multiplicity_free_rule() {
        let q = FieldSpec::rationals();
        let plus = scalar_assoc(&q, 1, 0, &[&[1]]);
        let minus = scalar_assoc(&q, 1, 0, &[&[-1]]);
        assert!(check_ass4(&plus, [2, 2, 2, 2]).holds);
        assert!(check_ass4(&minus, [2, 2, 2, 2]).holds);
        let two = scalar_assoc(&f5(), 1, 0, &[&[2]]);
        assert!(!check_ass4(&two, [2, 2, 2, 2]).holds);
    }

    #[test]
    fn recoupling_identity_examples() {
        // trivially associative point: the one-dimensional self-dual rule
        let q = FieldSpec::rationals();
        let triv = scalar_assoc(&q, 0, 1, &[&[1]]);
        assert!(check_biedenharn_elliot_all(&triv));

        // block swap solves the n = 2 case; the plain identity does not
        let rule = FusionRule::new(0, 2).unwrap();
        let swap = swap_block(&q, 2);
        let good = AssociatorData::new(
            rule,
            q.clone(),
            PlainMatrix::zeros(&q, 0, 0),
            swap,
        )
        .unwrap();
        assert!(check_biedenharn_elliot(&good, [2, 2, 2, 2, 2]).holds);
        assert!(check_biedenharn_elliot_all(&good));
        let bad = AssociatorData::new(
            rule,
            q.clone(),
            PlainMatrix::zeros(&q, 0, 0),
            PlainMatrix::identity(&q, 4),
        )
        .unwrap();
        assert!(!check_biedenharn_elliot(&bad, [2, 2, 2, 2, 2]).holds);
    }

    #[test]
    fn block_system_known_solutions() {
        let golden = golden_assoc();
        let report = check_block_system(&golden);
        assert_eq!(report.case, BlockSystemCase::Mixed);
        assert_eq!(report.equations.len(), 13);
        assert!(report.all_hold(), "{:?}", report.first_failure().map(|e| e.label));

        let c5 = char5_assoc();
        assert!(check_block_system(&c5).all_hold());

        // lambda1 = (2) over F5 is not a solution
        let rule = FusionRule::new(1, 1).unwrap();
        let f = f5();
        let bad = AssociatorData::new(
            rule,
            f.clone(),
            PlainMatrix::from_i64_rows(&f, &[&[2]]),
            PlainMatrix::from_i64_rows(&f, &[&[2, 1], &[2, 3]]),
        )
        .unwrap();
        assert!(!check_block_system(&bad).all_hold());
    }

    #[test]
    fn three_formulations_agree_on_known_candidates() {
        for data in [golden_assoc(), char5_assoc()] {
            assert!(check_ass4_all(&data));
            assert!(check_biedenharn_elliot_all(&data));
            assert!(check_block_system(&data).all_hold());
        }
        // and on a perturbed non-solution
        let mut bad = char5_assoc();
        let f = bad.field().clone();
        let mut l2 = bad.lambda2().clone();
        l2.set(0, 0, f.from_i64(3));
        bad = AssociatorData::new(bad.rule(), f, bad.lambda1().clone(), l2).unwrap();
        assert!(!check_ass4_all(&bad));
        assert!(!check_biedenharn_elliot_all(&bad));
        assert!(!check_block_system(&bad).all_hold());
    }

    #[test]
    fn associator_requires_invertibility() {
        let f = f5();
        let rule = FusionRule::new(1, 1).unwrap();
        let data = AssociatorData::new(
            rule,
            f.clone(),
            PlainMatrix::identity(&f, 1),
            PlainMatrix::from_i64_rows(&f, &[&[1, 2], &[2, 4]]),
        )
        .unwrap();
        assert!(matches!(
            Associator::new(data),
            Err(PentagonError::Singular)
        ));
    }

    #[test]
    fn associator_json_round_trip() {
        let a = golden_assoc();
        let j = a.to_json();
        let back = AssociatorData::from_json(&j).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn bad_dimensions_rejected() {
        let f = f5();
        let rule = FusionRule::new(1, 1).unwrap();
        let r = AssociatorData::new(
            rule,
            f.clone(),
            PlainMatrix::identity(&f, 2),
            PlainMatrix::identity(&f, 2),
        );
        assert!(matches!(r, Err(PentagonError::BadDimensions { .. })));
    }
}
