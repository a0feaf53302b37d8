//! Exact field arithmetic over the rationals, prime fields and degree-two
//! extensions of either.
//!
//! A [`FieldSpec`] describes one of four kinds of field:
//!
//! * `Q` — the rationals,
//! * `Q[t^2+u*t+v]` — a quadratic extension of the rationals,
//! * `Fp` — the prime field with `p` elements,
//! * `Fp[t^2+u*t+v]` — the field with `p^2` elements.
//!
//! Elements are [`Scalar`] values in canonical form (reduced fractions with
//! positive denominator, least nonnegative residues) so that equality is
//! plain structural equality.  All operations take the field as explicit
//! context; matrices carry their `FieldSpec` and thread it through.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Errors produced by field construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported bound 2^62")]
    PrimeTooLarge(u64),
    #[error("modulus x^2 + {u}*x + {v} is reducible over {base}")]
    ReducibleModulus { u: String, v: String, base: String },
    #[error("field already carries a quadratic extension; towers are not supported")]
    AlreadyExtended,
    #[error("scalar {0} does not belong to field {1}")]
    WrongField(String, String),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

/// Base field: the rationals or a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Base {
    Rationals,
    Prime(u64),
}

/// A field element.  Which variant is in play is dictated by the owning
/// [`FieldSpec`]: plain variants for base fields, paired variants `a + b*t`
/// when a quadratic extension with root `t` is present.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    RatExt(BigRational, BigRational),
    Mod(u64),
    ModExt(u64, u64),
}

/// A field description: base plus optional monic quadratic modulus
/// `x^2 + u*x + v` (with `u`, `v` base-field scalars).
///
/// Two specs compare equal only on identical base and modulus; no
/// isomorphism detection is attempted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    base: Base,
    ext: Option<(Scalar, Scalar)>,
}

/// Roots of a monic quadratic, reported once each; `double` marks a
/// repeated root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticRoots {
    pub roots: Vec<Scalar>,
    pub double: bool,
}

// Deterministic Miller-Rabin, valid for all u64 with this witness set.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl FieldSpec {
    /// The field of rational numbers.
    pub fn rationals() -> Self {
        FieldSpec {
            base: Base::Rationals,
            ext: None,
        }
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= (1 << 62) {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec {
            base: Base::Prime(p),
            ext: None,
        })
    }

    /// Extend a base field by a root of `x^2 + u*x + v`.  The modulus must
    /// be irreducible: over a prime field this is checked by root search,
    /// over the rationals by the discriminant test.
    pub fn extend(&self, u: Scalar, v: Scalar) -> Result<Self, FieldError> {
        if self.ext.is_some() {
            return Err(FieldError::AlreadyExtended);
        }
        self.check_member(&u)?;
        self.check_member(&v)?;
        if self.base_quadratic_has_root(&u, &v) {
            return Err(FieldError::ReducibleModulus {
                u: u.to_string(),
                v: v.to_string(),
                base: self.to_string(),
            });
        }
        Ok(FieldSpec {
            base: self.base.clone(),
            ext: Some((u, v)),
        })
    }

    /// Convenience: `Q(sqrt(d))`, i.e. modulus `x^2 - d`.
    pub fn rationals_sqrt(d: i64) -> Result<Self, FieldError> {
        let q = FieldSpec::rationals();
        let neg_d = q.from_i64(-d);
        let zero = q.zero();
        q.extend(zero, neg_d)
    }

    fn base_quadratic_has_root(&self, u: &Scalar, v: &Scalar) -> bool {
        match self.base {
            Base::Rationals => {
                // reducible iff the discriminant is a rational square
                let d = self.sub(&self.mul(u, u), &self.mul(&self.from_i64(4), v));
                rational_sqrt(rat(&d)).is_some()
            }
            Base::Prime(p) if p <= 4096 => (0..p).any(|x| {
                let fx = self.add(&self.add(&self.mul(&Scalar::Mod(x), &Scalar::Mod(x)), &self.mul(u, &Scalar::Mod(x))), v);
                self.is_zero(&fx)
            }),
            Base::Prime(p) => {
                if p == 2 {
                    unreachable!("p = 2 is covered by the exhaustive branch");
                }
                // Euler's criterion on the discriminant
                let d = self.sub(&self.mul(u, u), &self.mul(&self.from_i64(4), v));
                match d {
                    Scalar::Mod(0) => true,
                    Scalar::Mod(x) => mod_pow(x, (p - 1) / 2, p) == 1,
                    _ => unreachable!(),
                }
            }
        }
    }

    /// 0 for a rational base, `p` for a prime base.
    pub fn characteristic(&self) -> u64 {
        match self.base {
            Base::Rationals => 0,
            Base::Prime(p) => p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.base, Base::Prime(_))
    }

    /// Number of elements of a finite field (`p` or `p^2`).
    pub fn order(&self) -> Option<u128> {
        match self.base {
            Base::Rationals => None,
            Base::Prime(p) => Some(if self.ext.is_some() {
                p as u128 * p as u128
            } else {
                p as u128
            }),
        }
    }

    pub fn has_extension(&self) -> bool {
        self.ext.is_some()
    }

    /// Modulus coefficients `(u, v)` of the extension, if any.
    pub fn modulus(&self) -> Option<(&Scalar, &Scalar)> {
        self.ext.as_ref().map(|(u, v)| (u, v))
    }

    /// The adjoined root `t`, if the field is extended.
    pub fn theta(&self) -> Option<Scalar> {
        self.ext.as_ref().map(|_| match self.base {
            Base::Rationals => Scalar::RatExt(BigRational::zero(), BigRational::one()),
            Base::Prime(_) => Scalar::ModExt(0, 1),
        })
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match (&self.base, &self.ext) {
            (Base::Rationals, None) => Scalar::Rat(BigRational::from_integer(n.into())),
            (Base::Rationals, Some(_)) => {
                Scalar::RatExt(BigRational::from_integer(n.into()), BigRational::zero())
            }
            (Base::Prime(p), None) => Scalar::Mod(reduce_i64(n, *p)),
            (Base::Prime(p), Some(_)) => Scalar::ModExt(reduce_i64(n, *p), 0),
        }
    }

    pub fn from_rational(&self, num: i64, den: i64) -> Result<Scalar, FieldError> {
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        self.div(&n, &d)
    }

    /// Lift a base-field pair `(a, b)` to the extension element `a + b*t`.
    pub fn from_base_pair(&self, a: &Scalar, b: &Scalar) -> Scalar {
        assert!(self.ext.is_some(), "from_base_pair needs an extended field");
        match (a, b) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::RatExt(a.clone(), b.clone()),
            (Scalar::Mod(a), Scalar::Mod(b)) => Scalar::ModExt(*a, *b),
            _ => panic!("from_base_pair takes base-field scalars"),
        }
    }

    /// Does `x` belong to this field (right variant for base/extension)?
    pub fn contains(&self, x: &Scalar) -> bool {
        match (&self.base, &self.ext, x) {
            (Base::Rationals, None, Scalar::Rat(_)) => true,
            (Base::Rationals, Some(_), Scalar::RatExt(_, _)) => true,
            (Base::Prime(p), None, Scalar::Mod(a)) => a < p,
            (Base::Prime(p), Some(_), Scalar::ModExt(a, b)) => a < p && b < p,
            _ => false,
        }
    }

    pub fn check_member(&self, x: &Scalar) -> Result<(), FieldError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(FieldError::WrongField(x.to_string(), self.to_string()))
        }
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Rat(a) => a.is_zero(),
            Scalar::RatExt(a, b) => a.is_zero() && b.is_zero(),
            Scalar::Mod(a) => *a == 0,
            Scalar::ModExt(a, b) => *a == 0 && *b == 0,
        }
    }

    pub fn is_one(&self, x: &Scalar) -> bool {
        *x == self.one()
    }

    pub fn add(&self, x: &Scalar, y: &Scalar) -> Scalar {
        self.debug_check(x);
        self.debug_check(y);
        match (x, y) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::RatExt(a, b), Scalar::RatExt(c, d)) => Scalar::RatExt(a + c, b + d),
            (Scalar::Mod(a), Scalar::Mod(b)) => Scalar::Mod(self.madd(*a, *b)),
            (Scalar::ModExt(a, b), Scalar::ModExt(c, d)) => {
                Scalar::ModExt(self.madd(*a, *c), self.madd(*b, *d))
            }
            _ => panic!("scalar kind mismatch in add"),
        }
    }

    pub fn sub(&self, x: &Scalar, y: &Scalar) -> Scalar {
        self.add(x, &self.neg(y))
    }

    pub fn neg(&self, x: &Scalar) -> Scalar {
        match x {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::RatExt(a, b) => Scalar::RatExt(-a, -b),
            Scalar::Mod(a) => Scalar::Mod(self.mneg(*a)),
            Scalar::ModExt(a, b) => Scalar::ModExt(self.mneg(*a), self.mneg(*b)),
        }
    }

    pub fn mul(&self, x: &Scalar, y: &Scalar) -> Scalar {
        self.debug_check(x);
        self.debug_check(y);
        match (x, y) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::RatExt(a, b), Scalar::RatExt(c, d)) => {
                // (a+bt)(c+dt) with t^2 = -u*t - v
                let (u, v) = self.rat_modulus();
                let bd = b * d;
                Scalar::RatExt(a * c - &bd * &v, a * d + b * c - bd * u)
            }
            (Scalar::Mod(a), Scalar::Mod(b)) => Scalar::Mod(self.mmul(*a, *b)),
            (Scalar::ModExt(a, b), Scalar::ModExt(c, d)) => {
                let (u, v) = self.mod_modulus();
                let bd = self.mmul(*b, *d);
                let re = self.msub(self.mmul(*a, *c), self.mmul(bd, v));
                let im = self.msub(
                    self.madd(self.mmul(*a, *d), self.mmul(*b, *c)),
                    self.mmul(bd, u),
                );
                Scalar::ModExt(re, im)
            }
            _ => panic!("scalar kind mismatch in mul"),
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self, x: &Scalar) -> Result<Scalar, FieldError> {
        if self.is_zero(x) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match x {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::RatExt(a, b) => {
                // conjugate over the base: (a - b*u) - b*t, norm a^2 - a*b*u + b^2*v
                let (u, v) = self.rat_modulus();
                let norm = a * a - a * b * &u + b * b * &v;
                Scalar::RatExt((a - b * u) / &norm, -b / norm)
            }
            Scalar::Mod(a) => Scalar::Mod(self.minv(*a)),
            Scalar::ModExt(a, b) => {
                let (u, v) = self.mod_modulus();
                let norm = self.msub(
                    self.madd(self.mmul(*a, *a), self.mmul(self.mmul(*b, *b), v)),
                    self.mmul(self.mmul(*a, *b), u),
                );
                let ninv = self.minv(norm);
                let re = self.mmul(self.msub(*a, self.mmul(*b, u)), ninv);
                let im = self.mmul(self.mneg(*b), ninv);
                Scalar::ModExt(re, im)
            }
        })
    }

    pub fn div(&self, x: &Scalar, y: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &Scalar, mut e: u64) -> Scalar {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Total order on canonical forms, used only to make reports and root
    /// sets deterministic.
    pub fn cmp_scalars(&self, x: &Scalar, y: &Scalar) -> Ordering {
        match (x, y) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::RatExt(a, b), Scalar::RatExt(c, d)) => a.cmp(c).then_with(|| b.cmp(d)),
            (Scalar::Mod(a), Scalar::Mod(b)) => a.cmp(b),
            (Scalar::ModExt(a, b), Scalar::ModExt(c, d)) => a.cmp(c).then_with(|| b.cmp(d)),
            _ => panic!("scalar kind mismatch in cmp"),
        }
    }

    /// All elements of a finite field in canonical ascending order.
    /// Panics on infinite fields.
    pub fn elements(&self) -> Vec<Scalar> {
        match (&self.base, &self.ext) {
            (Base::Prime(p), None) => (0..*p).map(Scalar::Mod).collect(),
            (Base::Prime(p), Some(_)) => {
                let mut out = Vec::with_capacity((p * p) as usize);
                for a in 0..*p {
                    for b in 0..*p {
                        out.push(Scalar::ModExt(a, b));
                    }
                }
                out
            }
            _ => panic!("elements() requires a finite field"),
        }
    }

    /// Nonzero elements of a finite field in canonical ascending order.
    pub fn units(&self) -> Vec<Scalar> {
        self.elements()
            .into_iter()
            .filter(|x| !self.is_zero(x))
            .collect()
    }

    // ----- quadratic equations -------------------------------------------

    /// Roots in this field of the monic quadratic `x^2 + u*x + v`.
    pub fn solve_monic_quadratic(&self, u: &Scalar, v: &Scalar) -> QuadraticRoots {
        self.debug_check(u);
        self.debug_check(v);
        if self.characteristic() == 2 {
            // tiny fields (F2 or F4): direct search is exact and complete
            let mut roots: Vec<Scalar> = self
                .elements()
                .into_iter()
                .filter(|x| {
                    let fx = self.add(&self.add(&self.mul(x, x), &self.mul(u, x)), v);
                    self.is_zero(&fx)
                })
                .collect();
            roots.sort_by(|a, b| self.cmp_scalars(a, b));
            // x^2 + v = (x + r)^2 squares to a double root in char 2
            let double = self.is_zero(u) && roots.len() == 1;
            return QuadraticRoots { roots, double };
        }
        let two = self.from_i64(2);
        let four = self.from_i64(4);
        let disc = self.sub(&self.mul(u, u), &self.mul(&four, v));
        if self.is_zero(&disc) {
            let r = self.div(&self.neg(u), &two).expect("char != 2");
            return QuadraticRoots {
                roots: vec![r],
                double: true,
            };
        }
        match self.sqrt(&disc) {
            Some(s) => {
                let r1 = self.div(&self.add(&self.neg(u), &s), &two).unwrap();
                let r2 = self.div(&self.sub(&self.neg(u), &s), &two).unwrap();
                let mut roots = vec![r1, r2];
                roots.sort_by(|a, b| self.cmp_scalars(a, b));
                QuadraticRoots {
                    roots,
                    double: false,
                }
            }
            None => QuadraticRoots {
                roots: vec![],
                double: false,
            },
        }
    }

    /// One square root of `x` in this field, if it exists.
    pub fn sqrt(&self, x: &Scalar) -> Option<Scalar> {
        if self.is_zero(x) {
            return Some(self.zero());
        }
        match x {
            Scalar::Rat(a) => rational_sqrt(a.clone()).map(Scalar::Rat),
            Scalar::Mod(a) => {
                let p = self.char_p();
                if p == 2 {
                    return Some(Scalar::Mod(*a));
                }
                mod_sqrt(*a, p).map(Scalar::Mod)
            }
            Scalar::RatExt(_, _) | Scalar::ModExt(_, _) => self.ext_sqrt(x),
        }
    }

    // sqrt in a quadratic extension of char != 2, reduced to base-field sqrts.
    fn ext_sqrt(&self, x: &Scalar) -> Option<Scalar> {
        assert_ne!(self.characteristic(), 2, "char-2 fields use direct search");
        let base = self.base_field();
        let (a, b) = self.split(x);
        let (u, v) = self.ext.clone().expect("extension present");
        let two = base.from_i64(2);
        let four = base.from_i64(4);
        // disc of the modulus; nonzero because the modulus is irreducible
        let md = base.sub(&base.mul(&u, &u), &base.mul(&four, &v));
        let check = |cand: &Scalar| -> bool { self.mul(cand, cand) == *x };
        if base.is_zero(&b) {
            // (y = 0): sqrt of a within the base
            if let Some(r) = base.sqrt(&a) {
                let cand = self.from_base_pair(&r, &base.zero());
                if check(&cand) {
                    return Some(cand);
                }
            }
            // (y != 0, x = u*y/2): y^2 = 4a / (u^2 - 4v)
            let w = base.div(&base.mul(&four, &a), &md).unwrap();
            if let Some(y) = base.sqrt(&w) {
                let xc = base.div(&base.mul(&u, &y), &two).unwrap();
                let cand = self.from_base_pair(&xc, &y);
                if check(&cand) {
                    return Some(cand);
                }
            }
            return None;
        }
        // b != 0: y != 0 and x = (b + u*y^2) / (2y); y^2 = w solves
        //   md * w^2 + (2ub - 4a) * w + b^2 = 0  over the base.
        let uu = base.div(&base.sub(&base.mul(&base.mul(&two, &u), &b), &base.mul(&four, &a)), &md).unwrap();
        let vv = base.div(&base.mul(&b, &b), &md).unwrap();
        for w in base.solve_monic_quadratic(&uu, &vv).roots {
            if let Some(y) = base.sqrt(&w) {
                if base.is_zero(&y) {
                    continue;
                }
                let num = base.add(&b, &base.mul(&u, &base.mul(&y, &y)));
                let xc = base.div(&num, &base.mul(&two, &y)).unwrap();
                let cand = self.from_base_pair(&xc, &y);
                if check(&cand) {
                    return Some(cand);
                }
            }
        }
        None
    }

    /// The base field underlying an extension (identity on base fields).
    pub fn base_field(&self) -> FieldSpec {
        FieldSpec {
            base: self.base.clone(),
            ext: None,
        }
    }

    /// Split an element of an extended field into base components `(a, b)`
    /// with `x = a + b*t`.  Base-field elements split as `(x, 0)`.
    pub fn split(&self, x: &Scalar) -> (Scalar, Scalar) {
        match x {
            Scalar::Rat(a) => (Scalar::Rat(a.clone()), Scalar::Rat(BigRational::zero())),
            Scalar::RatExt(a, b) => (Scalar::Rat(a.clone()), Scalar::Rat(b.clone())),
            Scalar::Mod(a) => (Scalar::Mod(*a), Scalar::Mod(0)),
            Scalar::ModExt(a, b) => (Scalar::Mod(*a), Scalar::Mod(*b)),
        }
    }

    // ----- text forms ------------------------------------------------------

    /// Parse a scalar belonging to this field.
    ///
    /// Rationals: `"3"`, `"-5/7"`.  Prime fields: decimal residues (signed
    /// input accepted, reduced to `[0, p)`).  Extensions: `"a+b*t"`,
    /// `"a-b*t"`, `"b*t"`, `"t"`, or a plain base element.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, FieldError> {
        let s = s.trim();
        let parse_err = || FieldError::Parse {
            what: "scalar",
            input: s.to_string(),
        };
        if self.ext.is_some() {
            let (a, b) = split_ext_literal(s).ok_or_else(parse_err)?;
            let base = self.base_field();
            let av = base.parse_base_number(&a).ok_or_else(parse_err)?;
            let bv = base.parse_base_number(&b).ok_or_else(parse_err)?;
            Ok(self.from_base_pair(&av, &bv))
        } else {
            self.parse_base_number(s).ok_or_else(parse_err)
        }
    }

    fn parse_base_number(&self, s: &str) -> Option<Scalar> {
        let s = s.trim();
        match self.base {
            Base::Rationals => {
                let r = if let Some((n, d)) = s.split_once('/') {
                    let n: BigInt = n.trim().parse().ok()?;
                    let d: BigInt = d.trim().parse().ok()?;
                    if d.is_zero() {
                        return None;
                    }
                    BigRational::new(n, d)
                } else {
                    BigRational::from_integer(s.parse().ok()?)
                };
                Some(Scalar::Rat(r))
            }
            Base::Prime(p) => {
                if let Some((n, d)) = s.split_once('/') {
                    let n: i64 = n.trim().parse().ok()?;
                    let d: i64 = d.trim().parse().ok()?;
                    let dv = reduce_i64(d, p);
                    if dv == 0 {
                        return None;
                    }
                    return Some(Scalar::Mod(self.mmul(reduce_i64(n, p), self.minv(dv))));
                }
                let n: i64 = s.parse().ok()?;
                Some(Scalar::Mod(reduce_i64(n, p)))
            }
        }
    }

    /// Parse a field description: `"Q"`, `"F5"`, `"Q[t^2=5]"`,
    /// `"F2[t^2+t+1]"`, `"Q[t^2-t-1]"`.
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let s = s.trim();
        let parse_err = || FieldError::Parse {
            what: "field spec",
            input: s.to_string(),
        };
        let (base_str, bracket) = match s.find('[') {
            Some(i) => {
                if !s.ends_with(']') {
                    return Err(parse_err());
                }
                (&s[..i], Some(&s[i + 1..s.len() - 1]))
            }
            None => (s, None),
        };
        let base = if base_str == "Q" {
            FieldSpec::rationals()
        } else if let Some(p) = base_str.strip_prefix('F') {
            let p: u64 = p.parse().map_err(|_| parse_err())?;
            FieldSpec::prime(p)?
        } else {
            return Err(parse_err());
        };
        match bracket {
            None => Ok(base),
            Some(inner) => {
                let (u, v) = parse_modulus(&base, inner).ok_or_else(parse_err)?;
                base.extend(u, v)
            }
        }
    }

    // ----- helpers ---------------------------------------------------------

    fn debug_check(&self, x: &Scalar) {
        debug_assert!(self.contains(x), "scalar {x} outside field {self}");
    }

    fn char_p(&self) -> u64 {
        match self.base {
            Base::Prime(p) => p,
            Base::Rationals => panic!("not a prime field"),
        }
    }

    fn rat_modulus(&self) -> (BigRational, BigRational) {
        match &self.ext {
            Some((Scalar::Rat(u), Scalar::Rat(v))) => (u.clone(), v.clone()),
            _ => panic!("rational modulus expected"),
        }
    }

    fn mod_modulus(&self) -> (u64, u64) {
        match &self.ext {
            Some((Scalar::Mod(u), Scalar::Mod(v))) => (*u, *v),
            _ => panic!("prime-field modulus expected"),
        }
    }

    fn madd(&self, a: u64, b: u64) -> u64 {
        let p = self.char_p();
        let s = a as u128 + b as u128;
        (s % p as u128) as u64
    }

    fn msub(&self, a: u64, b: u64) -> u64 {
        let p = self.char_p();
        self.madd(a, p - b % p)
    }

    fn mneg(&self, a: u64) -> u64 {
        let p = self.char_p();
        if a == 0 {
            0
        } else {
            p - a
        }
    }

    fn mmul(&self, a: u64, b: u64) -> u64 {
        let p = self.char_p();
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn minv(&self, a: u64) -> u64 {
        let p = self.char_p();
        assert!(a % p != 0, "inverse of zero");
        mod_pow(a, p - 2, p)
    }
}

fn reduce_i64(n: i64, p: u64) -> u64 {
    let r = n.rem_euclid(p as i64);
    r as u64
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn rat(s: &Scalar) -> BigRational {
    match s {
        Scalar::Rat(r) => r.clone(),
        _ => panic!("rational scalar expected"),
    }
}

fn rational_sqrt(r: BigRational) -> Option<BigRational> {
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    if r.is_negative() {
        return None;
    }
    let n = r.numer().to_biguint().unwrap();
    let d = r.denom().to_biguint().unwrap();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &sn * &sn == n && &sd * &sd == d {
        Some(BigRational::new(
            BigInt::from(sn),
            BigInt::from(sd),
        ))
    } else {
        None
    }
}

// Tonelli-Shanks for odd primes.
fn mod_sqrt(a: u64, p: u64) -> Option<u64> {
    debug_assert!(p % 2 == 1);
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(mod_pow(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    // deterministic scan for a quadratic non-residue
    let z = (2..p)
        .find(|&z| mod_pow(z, (p - 1) / 2, p) == p - 1)
        .expect("non-residue exists for odd p");
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul(tt, tt);
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}

// "a+b*t"-style literal -> textual (a, b) parts.
fn split_ext_literal(s: &str) -> Option<(String, String)> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    // split at the last top-level +/- that is not a leading sign and not
    // inside a fraction exponent (no parentheses in this grammar)
    let bytes = s.as_bytes();
    let mut split_at = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && bytes[i - 1] as char != '/' {
            // only split if the tail mentions t; otherwise "3-5" is malformed anyway
            if s[i..].contains('t') {
                split_at = Some(i);
                break;
            }
        }
    }
    let (a_part, b_part) = match split_at {
        Some(i) => (s[..i].to_string(), s[i..].to_string()),
        None => {
            if s.contains('t') {
                (String::from("0"), s.clone())
            } else {
                (s.clone(), String::from("+0*t"))
            }
        }
    };
    // normalize the t-part into a coefficient
    let b = b_part.strip_prefix('+').unwrap_or(&b_part);
    let coeff = if let Some(rest) = b.strip_suffix("*t") {
        rest.to_string()
    } else if let Some(rest) = b.strip_suffix('t') {
        match rest {
            "" => "1".to_string(),
            "-" => "-1".to_string(),
            other => other.to_string(),
        }
    } else {
        return None;
    };
    let a = if a_part.is_empty() {
        "0".to_string()
    } else {
        a_part
    };
    Some((a, coeff))
}

// modulus text inside brackets: "t^2=c" or "t^2 ± u t ± v"
fn parse_modulus(base: &FieldSpec, inner: &str) -> Option<(Scalar, Scalar)> {
    let inner: String = inner.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rhs) = inner.strip_prefix("t^2=") {
        let c = base.parse_base_number(rhs)?;
        return Some((base.zero(), base.neg(&c)));
    }
    let rest = inner.strip_prefix("t^2")?;
    if rest.is_empty() {
        return Some((base.zero(), base.zero()));
    }
    // tokenize into signed terms
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, ch) in rest.chars().enumerate() {
        if (ch == '+' || ch == '-') && i != 0 && !cur.ends_with('/') {
            terms.push(cur.clone());
            cur.clear();
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut u = base.zero();
    let mut v = base.zero();
    for term in &terms {
        let t = term.as_str();
        if t.is_empty() {
            return None;
        }
        if t.contains('t') {
            let c = t.trim_end_matches('t').trim_end_matches('*');
            let coeff = match c {
                "+" | "" => base.one(),
                "-" => base.neg(&base.one()),
                other => base.parse_base_number(other.strip_prefix('+').unwrap_or(other))?,
            };
            u = base.add(&u, &coeff);
        } else {
            let c = base.parse_base_number(t.strip_prefix('+').unwrap_or(t))?;
            v = base.add(&v, &c);
        }
    }
    Some((u, v))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(a) => write!(f, "{}", fmt_rat(a)),
            Scalar::Mod(a) => write!(f, "{a}"),
            Scalar::RatExt(a, b) => fmt_ext(f, &fmt_rat(a), b.is_zero(), a.is_zero(), &fmt_rat(b), b.is_negative(), &fmt_rat(&-b)),
            Scalar::ModExt(a, b) => fmt_ext(f, &a.to_string(), *b == 0, *a == 0, &b.to_string(), false, ""),
        }
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_ext(
    f: &mut fmt::Formatter<'_>,
    a: &str,
    b_zero: bool,
    a_zero: bool,
    b: &str,
    b_neg: bool,
    b_abs: &str,
) -> fmt::Result {
    if b_zero {
        return write!(f, "{a}");
    }
    if a_zero {
        return write!(f, "{b}*t");
    }
    if b_neg {
        write!(f, "{a}-{b_abs}*t")
    } else {
        write!(f, "{a}+{b}*t")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.base {
            Base::Rationals => "Q".to_string(),
            Base::Prime(p) => format!("F{p}"),
        };
        match &self.ext {
            None => write!(f, "{base}"),
            Some((u, v)) => {
                let bf = self.base_field();
                if bf.is_zero(u) {
                    // pure square root: t^2 = -v
                    write!(f, "{base}[t^2={}]", bf.neg(v))
                } else {
                    let mut s = format!("{base}[t^2");
                    let u_str = u.to_string();
                    if !bf.is_zero(u) {
                        let coeff = if bf.is_one(u) {
                            String::new()
                        } else {
                            format!("{u_str}*")
                        };
                        let signed = if u_str.starts_with('-') {
                            format!("{coeff}t")
                        } else {
                            format!("+{coeff}t")
                        };
                        s.push_str(&signed);
                    }
                    if !bf.is_zero(v) {
                        let v_str = v.to_string();
                        if v_str.starts_with('-') {
                            s.push_str(&v_str);
                        } else {
                            s.push('+');
                            s.push_str(&v_str);
                        }
                    }
                    s.push(']');
                    write!(f, "{s}")
                }
            }
        }
    }
}
