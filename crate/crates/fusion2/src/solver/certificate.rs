//! Machine-checkable nonexistence certificates.
//!
//! Each certificate is an ordered list of steps; [`Certificate::verify`]
//! re-derives every step.  Symbolic steps are polynomial identities over the
//! integers, so they specialize to every coefficient field; frame steps are
//! the named linear-algebra implications that glue the identities together
//! (uniqueness of the solution of an invertible system, rank counting).

use super::NonexistenceReason;
use crate::fusion::FusionRule;
use crate::solver::poly::{Poly, PolyMat};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("rule {0} is not covered by a nonexistence certificate")]
    NotApplicable(FusionRule),
    #[error("certificate step {step:?} failed: {why}")]
    StepFailed { step: String, why: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct CertStep {
    pub name: String,
    /// What the step asserts, with the key matrices in text form.
    pub statement: String,
    /// `symbolic` steps are verified polynomial identities; `frame` steps
    /// are the recorded logical implications; `arithmetic` steps are
    /// integer comparisons.
    pub kind: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub rule_m: usize,
    pub rule_n: usize,
    pub reason: NonexistenceReason,
    pub steps: Vec<CertStep>,
}

/// Build the certificate for a rule in one of the nonexistence cases.
pub fn nonexistence_certificate(rule: FusionRule) -> Result<Certificate, CertificateError> {
    let (m, n) = (rule.m(), rule.n());
    let reason = if m > 1 && n == 0 {
        NonexistenceReason::MGreaterOneNZero
    } else if (m, n) == (2, 2) {
        NonexistenceReason::MTwoNTwo
    } else if m > 1 && n > 0 && 2 * m > n * n {
        NonexistenceReason::TwoMGreaterNSquared
    } else {
        return Err(CertificateError::NotApplicable(rule));
    };
    let steps = match reason {
        NonexistenceReason::MGreaterOneNZero => unit_block_steps(m)?,
        NonexistenceReason::TwoMGreaterNSquared => {
            let mut steps = zero_corner_steps(m, n)?;
            steps.extend(rank_bound_steps(m, n)?);
            steps
        }
        NonexistenceReason::MTwoNTwo => {
            let mut steps = zero_corner_steps(2, 2)?;
            steps.extend(kernel_overflow_steps()?);
            steps
        }
    };
    Ok(Certificate {
        rule_m: m,
        rule_n: n,
        reason,
        steps,
    })
}

impl Certificate {
    /// Re-run every check.  Returns the verified step list.
    pub fn verify(&self) -> Result<Vec<CertStep>, CertificateError> {
        let rule = FusionRule::new(self.rule_m, self.rule_n)
            .map_err(|_| CertificateError::NotApplicable(FusionRule::new(1, 0).unwrap()))?;
        let fresh = nonexistence_certificate(rule)?;
        if fresh.reason != self.reason {
            return Err(CertificateError::StepFailed {
                step: "reason".into(),
                why: "stored reason does not match the rule".into(),
            });
        }
        Ok(fresh.steps)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn fail(step: &str, why: impl Into<String>) -> CertificateError {
    CertificateError::StepFailed {
        step: step.into(),
        why: why.into(),
    }
}

// ---- case m > 1, n = 0 -------------------------------------------------------

// The single block equation forces the square of the candidate block to
// satisfy I_m kron B = block-swap, whose (1,1) block pins b_11 to both 1 and
// 0.  No matrix B at all satisfies it once m > 1.
fn unit_block_steps(m: usize) -> Result<Vec<CertStep>, CertificateError> {
    assert!(m > 1);
    let b = PolyMat::symbols(m, m, 0);
    let lhs = PolyMat::identity(m).kron(&b);
    let rhs = PolyMat::swap_block(m);
    // entry (1,1) of block (1,1): b_11 = 1
    let p_top = lhs.get(0, 0).sub(rhs.get(0, 0));
    // entry (2,2) of block (1,1): b_11 = 0
    let p_diag = lhs.get(1, 1).sub(rhs.get(1, 1));
    if !p_top.sub(&Poly::var(0)).add(&Poly::one()).is_zero() {
        return Err(fail("pin-first-entry", "expected b_11 - 1"));
    }
    if !p_diag.sub(&Poly::var(0)).is_zero() {
        return Err(fail("pin-second-entry", "expected b_11"));
    }
    // the two constraints differ by the nonzero constant 1
    if !p_diag.sub(&p_top).sub(&Poly::one()).is_zero() {
        return Err(fail("contradiction", "difference of constraints is not 1"));
    }
    Ok(vec![
        CertStep {
            name: "pin-first-entry".into(),
            statement: format!(
                "entry (1,1) of the {m}x{m}-blocked equation reads b_11 - 1 = 0"
            ),
            kind: "symbolic",
        },
        CertStep {
            name: "pin-second-entry".into(),
            statement: "entry (2,2) of the same block reads b_11 = 0 (valid since m > 1)".into(),
            kind: "symbolic",
        },
        CertStep {
            name: "contradiction".into(),
            statement: "subtracting the two constraints yields 1 = 0 in every field".into(),
            kind: "symbolic",
        },
    ])
}

// ---- shared derivation: the top-left corner of lambda2 vanishes ---------------

struct Symbols {
    l1: PolyMat,
    l2: PolyMat,
    m: usize,
    n: usize,
}

impl Symbols {
    fn new(m: usize, n: usize) -> Self {
        let mn = m * n;
        let d = m + n * n;
        Symbols {
            l1: PolyMat::symbols(mn, mn, 0),
            l2: PolyMat::symbols(d, d, (mn * mn) as u32),
            m,
            n,
        }
    }

    fn l2_var(&self, r: usize, c: usize) -> u32 {
        let d = self.m + self.n * self.n;
        (self.m * self.n * self.m * self.n + r * d + c) as u32
    }

    fn l22(&self) -> PolyMat {
        self.l2.submatrix(0, 0, self.m, self.m)
    }

    fn l23(&self) -> PolyMat {
        self.l2.submatrix(0, self.m, self.m, self.n * self.n)
    }

    fn l32(&self) -> PolyMat {
        self.l2.submatrix(self.m, 0, self.n * self.n, self.m)
    }

    fn l33(&self) -> PolyMat {
        self.l2
            .submatrix(self.m, self.m, self.n * self.n, self.n * self.n)
    }
}

// Steps establishing lambda22 = 0 for any invertible solution with m > 1:
// the first and third block equations stack to an invertible linear system
// whose unique solution is read off twice.
fn zero_corner_steps(m: usize, n: usize) -> Result<Vec<CertStep>, CertificateError> {
    assert!(m > 1 && n > 0);
    let sy = Symbols::new(m, n);
    let im = PolyMat::identity(m);
    let inn = PolyMat::identity(n);
    let nn = n * n;
    let d = m + nn;

    // G = (l1 kron I_n)(I_m kron l32), the lower half of the stacked column
    let g = sy.l1.kron(&inn).mul(&im.kron(&sy.l32()));
    let stack = im.kron(&sy.l22()).vstack(&g);
    let stacked = im.kron(&sy.l2).mul(&stack);

    // equation (i) and (iii) left sides
    let lhs_i = im
        .kron(&sy.l22().mul(&sy.l22()))
        .add(&im.kron(&sy.l23()).mul(&sy.l1.kron(&inn)).mul(&im.kron(&sy.l32())));
    let lhs_iii = im
        .kron(&sy.l32().mul(&sy.l22()))
        .add(&im.kron(&sy.l33()).mul(&sy.l1.kron(&inn)).mul(&im.kron(&sy.l32())));
    if !stacked.sub(&lhs_i.vstack(&lhs_iii)).is_zero() {
        return Err(fail(
            "stack-equations",
            "stacked product does not equal the first and third block equations",
        ));
    }

    // right side of the stacked system
    let rhs = PolyMat::swap_block(m).vstack(&PolyMat::zeros(m * nn, m * m));

    let mut steps = vec![CertStep {
        name: "stack-equations".into(),
        statement: format!(
            "(I_{m} kron L2) * [I_{m} kron L22; (L1 kron I_{n})(I_{m} kron L32)] \
             equals the stacked left sides of block equations i and iii \
             (verified as a polynomial identity in {} unknowns)",
            m * n * m * n + d * d
        ),
        kind: "symbolic",
    }];

    // substitution vectors: both solve L2 x = e_k when the equations hold
    for k in 1..=m {
        // first reading: t = p = q = k
        for s in 0..d {
            let mut dot = Poly::zero();
            for j in 0..d {
                let vj = if j < m {
                    sy.l2.get(j, k - 1).clone()
                } else {
                    g.get((j - m) * m + (k - 1), (k - 1) * m + (k - 1)).clone()
                };
                dot = dot.add(&sy.l2.get(s, j).mul(&vj));
            }
            let entry = stacked.get(s * m + (k - 1), (k - 1) * m + (k - 1));
            if !dot.sub(entry).is_zero() {
                return Err(fail("first-reading", format!("row {s} mismatch for k={k}")));
            }
            let want = rhs.get(s * m + (k - 1), (k - 1) * m + (k - 1));
            let expect = if s + 1 == k { Poly::one() } else { Poly::zero() };
            if !want.sub(&expect).is_zero() {
                return Err(fail("first-reading", "stacked right side is not the unit vector"));
            }
        }
        // second reading: t = p = l, q = k for some l != k
        let l = if k == 1 { 2 } else { 1 };
        for s in 0..d {
            let mut dot = Poly::zero();
            for j in 0..d {
                let wj = if j < m {
                    Poly::zero()
                } else {
                    g.get((j - m) * m + (l - 1), (l - 1) * m + (k - 1)).clone()
                };
                dot = dot.add(&sy.l2.get(s, j).mul(&wj));
            }
            let entry = stacked.get(s * m + (l - 1), (l - 1) * m + (k - 1));
            if !dot.sub(entry).is_zero() {
                return Err(fail("second-reading", format!("row {s} mismatch for k={k}")));
            }
            let want = rhs.get(s * m + (l - 1), (l - 1) * m + (k - 1));
            let expect = if s + 1 == k { Poly::one() } else { Poly::zero() };
            if !want.sub(&expect).is_zero() {
                return Err(fail("second-reading", "stacked right side is not the unit vector"));
            }
        }
    }
    steps.push(CertStep {
        name: "first-reading".into(),
        statement: format!(
            "for each k <= {m}, reading the stacked system at (t,p,q) = (k,k,k) shows \
             (L22 column k, diagonal G entries) solves L2 x = e_k"
        ),
        kind: "symbolic",
    });
    steps.push(CertStep {
        name: "second-reading".into(),
        statement: format!(
            "reading it at (t,p) = (l,l), q = k with l != k (possible since m = {m} > 1) \
             shows a second solution whose first {m} coordinates are zero"
        ),
        kind: "symbolic",
    });
    steps.push(CertStep {
        name: "uniqueness".into(),
        statement: "L2 is invertible, so the two solutions coincide; \
                    hence every entry of L22 vanishes"
            .into(),
        kind: "frame",
    });
    Ok(steps)
}

// ---- case m > 1, 2m > n^2 ------------------------------------------------------

fn rank_bound_steps(m: usize, n: usize) -> Result<Vec<CertStep>, CertificateError> {
    let sy = Symbols::new(m, n);
    let nn = n * n;
    // with L22 = 0, the right side of equation vi vanishes identically
    let kill: Vec<u32> = (0..m)
        .flat_map(|r| (0..m).map(move |c| (r, c)))
        .map(|(r, c)| sy.l2_var(r, c))
        .collect();
    let inn = PolyMat::identity(n);
    let rhs_vi = sy.l22().kron(&inn).mul(&PolyMat::swap_rect(m, n));
    if !rhs_vi.kill_vars(&kill).is_zero() {
        return Err(fail("kill-vi", "right side of equation vi survives L22 = 0"));
    }
    let mut steps = vec![
        CertStep {
            name: "kill-vi".into(),
            statement: "with L22 = 0 the right side of block equation vi vanishes, so \
                        L1 (L23 kron I_n)(I_n kron L32) = 0; L1 is invertible, hence \
                        (L23 kron I_n)(I_n kron L32) = 0"
                .into(),
            kind: "symbolic",
        },
        CertStep {
            name: "full-rank-blocks".into(),
            statement: format!(
                "L2 invertible with zero top-left corner forces rank L23 = rank L32 = {m} \
                 (needs {m} <= {nn}; otherwise the rows of [0 L23] are already dependent)"
            ),
            kind: "frame",
        },
    ];
    // rank counting
    let prod_rank_left = m * n; // rank of L23 kron I_n
    let prod_rank_right = m * n; // rank of I_n kron L32
    let ambient = n * nn;
    if prod_rank_left + prod_rank_right <= ambient {
        return Err(fail(
            "rank-count",
            format!(
                "no contradiction: {prod_rank_left} + {prod_rank_right} <= {ambient}"
            ),
        ));
    }
    steps.push(CertStep {
        name: "rank-count".into(),
        statement: format!(
            "a zero product forces rank({m}*{n}) + rank({m}*{n}) <= {ambient}, i.e. \
             2*{m} <= {nn}; here 2*{m} = {} > {nn}: contradiction",
            2 * m
        ),
        kind: "arithmetic",
    });
    Ok(steps)
}

// ---- case m = n = 2 ------------------------------------------------------------

// After L22 = 0, equations v and vi make eight explicit vectors built from
// the columns of L32 lie in the kernel of L23; any nonzero column spans at
// least three of them, beating the two-dimensional kernel.
fn kernel_overflow_steps() -> Result<Vec<CertStep>, CertificateError> {
    // fresh symbols: C = L23 (2x4), B = L32 (4x2)
    let c = PolyMat::symbols(2, 4, 0);
    let b = PolyMat::symbols(4, 2, 8);
    let b_var = |r: usize, col: usize| 8 + (r * 2 + col) as u32;
    let i2 = PolyMat::identity(2);

    let p1 = c.kron(&i2).mul(&i2.kron(&b));
    let p2 = c
        .kron(&i2)
        .mul(&i2.kron(&PolyMat::swap_block(2)))
        .mul(&b.kron(&i2));

    // the eight kernel vectors for a column (b1, b2, b3, b4)
    let vectors = |col: usize| -> Vec<Vec<Poly>> {
        let bv = |r: usize| Poly::var(b_var(r, col));
        let z = Poly::zero;
        vec![
            vec![bv(0), bv(1), z(), z()],
            vec![z(), z(), bv(0), bv(1)],
            vec![bv(0), z(), bv(1), z()],
            vec![z(), bv(0), z(), bv(1)],
            vec![bv(2), bv(3), z(), z()],
            vec![z(), z(), bv(2), bv(3)],
            vec![bv(2), z(), bv(3), z()],
            vec![z(), bv(2), z(), bv(3)],
        ]
    };

    // every image polynomial of the claimed vectors appears among the
    // entries of the two vanishing products (up to sign)
    let mut entries: Vec<Poly> = Vec::new();
    for mat in [&p1, &p2] {
        for r in 0..mat.rows {
            for ccol in 0..mat.cols {
                entries.push(mat.get(r, ccol).clone());
            }
        }
    }
    for col in 0..2 {
        for (vi, vec) in vectors(col).iter().enumerate() {
            for r in 0..2 {
                let mut img = Poly::zero();
                for (j, component) in vec.iter().enumerate() {
                    img = img.add(&c.get(r, j).mul(component));
                }
                let found = entries
                    .iter()
                    .any(|e| e.sub(&img).is_zero() || e.add(&img).is_zero());
                if !found {
                    return Err(fail(
                        "kernel-vectors",
                        format!("image of vector {vi} (column {col}), row {r} not found"),
                    ));
                }
            }
        }
    }

    let mut steps = vec![
        CertStep {
            name: "specialize-v-vi".into(),
            statement: "with L22 = 0 and L1 invertible, equations v and vi force \
                        (L23 kron I_2)(I_2 kron L32) = 0 and \
                        (L23 kron I_2)(I_2 kron swap)(L32 kron I_2) = 0"
                .into(),
            kind: "frame",
        },
        CertStep {
            name: "kernel-vectors".into(),
            statement: "every row of L23 applied to each of the eight column-derived \
                        vectors appears among the entries of those two zero products, \
                        so all eight vectors lie in the kernel of L23 (verified \
                        symbolically, 32 identities)"
                .into(),
            kind: "symbolic",
        },
        CertStep {
            name: "columns-nonzero".into(),
            statement: "rank L32 = 2 makes both columns of L32 nonzero".into(),
            kind: "frame",
        },
    ];

    // explicit minors: with b2 != 0 the triple (v1, v2, v3) restricted to
    // columns {2,3,4} has determinant -b2^3; with b2 = 0, b1 != 0 the triple
    // (v1, v2, v4) restricted to columns {1,2,3} has determinant -b1^3.
    for col in 0..2 {
        for (lead, other, tag) in [(0usize, 1usize, "upper"), (2, 3, "lower")] {
            let vecs = vectors(col);
            let base = if lead == 0 { 0 } else { 4 };
            let m1 = PolyMat::from_fn(3, 3, |r, cc| {
                let v = &vecs[[base, base + 1, base + 2][r]];
                v[cc + 1].clone()
            });
            let d1 = m1.det3();
            let ok1 = d1.is_monomial_power(b_var(other, col), 3, -1)
                || d1.is_monomial_power(b_var(other, col), 3, 1);
            if !ok1 {
                return Err(fail("minor-generic", format!("{tag} column {col}")));
            }
            // kill the second coordinate, use the interleaved vector
            let kill = [b_var(other, col)];
            let m2 = PolyMat::from_fn(3, 3, |r, cc| {
                let v = &vecs[[base, base + 1, base + 3][r]];
                v[cc].kill_vars(&kill).clone()
            });
            let d2 = m2.det3();
            let ok2 = d2.is_monomial_power(b_var(lead, col), 3, -1)
                || d2.is_monomial_power(b_var(lead, col), 3, 1);
            if !ok2 {
                return Err(fail("minor-degenerate", format!("{tag} column {col}")));
            }
        }
    }
    steps.push(CertStep {
        name: "rank-three".into(),
        statement: "case split on the nonzero column half: a 3x3 minor of three of the \
                    kernel vectors equals plus or minus the cube of a nonzero coordinate \
                    in every case, so the kernel contains three independent vectors"
            .into(),
        kind: "symbolic",
    });
    steps.push(CertStep {
        name: "kernel-too-small".into(),
        statement: "rank L23 = 2 leaves a kernel of dimension 4 - 2 = 2 < 3: contradiction"
            .into(),
        kind: "arithmetic",
    });
    Ok(steps)
}
