//! Small exact multivariate polynomial arithmetic over the integers, used
//! by the nonexistence certificates.  Identities proved here hold over any
//! field by specialization.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Monomial: sorted list of (variable id, positive exponent).
pub type Monomial = Vec<(u32, u32)>;

/// Sparse integer polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Vec::new(), BigInt::from(c));
        }
        Poly { terms }
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn var(id: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(id, 1)], BigInt::one());
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Is this polynomial exactly `c * x^k` for the single variable `x`?
    pub fn is_monomial_power(&self, id: u32, k: u32, c: i64) -> bool {
        if self.terms.len() != 1 {
            return false;
        }
        let (mono, coeff) = self.terms.iter().next().unwrap();
        *mono == vec![(id, k)] && *coeff == BigInt::from(c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = out.entry(m.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                out.remove(m);
            }
        }
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = merge_monomials(ma, mb);
                let entry = out.entry(m).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Poly { terms: out }
    }

    /// Substitute zero for every variable in `vars`.
    pub fn kill_vars(&self, vars: &[u32]) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.iter().any(|(v, _)| vars.contains(v)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn display<'a>(&'a self, names: &'a dyn Fn(u32) -> String) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

fn merge_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut map: BTreeMap<u32, u32> = BTreeMap::new();
    for &(v, e) in a.iter().chain(b.iter()) {
        *map.entry(v).or_insert(0) += e;
    }
    map.into_iter().collect()
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a dyn Fn(u32) -> String,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.poly.terms {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_empty() {
                parts.push(abs.to_string());
            }
            for &(v, e) in m {
                let name = (self.names)(v);
                if e == 1 {
                    parts.push(name);
                } else {
                    parts.push(format!("{name}^{e}"));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Dense matrix of integer polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Poly>,
}

impl PolyMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMat {
            rows,
            cols,
            data: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        PolyMat { rows, cols, data }
    }

    /// Matrix of fresh variables `base + r*cols + c`.
    pub fn symbols(rows: usize, cols: usize, base: u32) -> Self {
        Self::from_fn(rows, cols, |r, c| {
            Poly::var(base + (r * cols + c) as u32)
        })
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Poly) {
        self.data[r * self.cols + c] = v;
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PolyMat {
        PolyMat::from_fn(rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn add(&self, other: &PolyMat) -> PolyMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMat::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c).add(other.get(r, c))
        })
    }

    pub fn sub(&self, other: &PolyMat) -> PolyMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMat::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c).sub(other.get(r, c))
        })
    }

    pub fn mul(&self, other: &PolyMat) -> PolyMat {
        assert_eq!(self.cols, other.rows, "polynomial matrix product mismatch");
        PolyMat::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Poly::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.get(r, k).mul(other.get(k, c)));
            }
            acc
        })
    }

    pub fn transpose(&self) -> PolyMat {
        PolyMat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Kronecker product with the left factor innermost, matching the
    /// scalar-matrix convention.
    pub fn kron(&self, other: &PolyMat) -> PolyMat {
        let (xr, xc) = (self.rows, self.cols);
        let mut out = PolyMat::zeros(xr * other.rows, xc * other.cols);
        for i in 0..other.rows {
            for j in 0..other.cols {
                let y = other.get(i, j);
                if y.is_zero() {
                    continue;
                }
                for r in 0..xr {
                    for c in 0..xc {
                        out.set(i * xr + r, j * xc + c, self.get(r, c).mul(y));
                    }
                }
            }
        }
        out
    }

    pub fn vstack(&self, other: &PolyMat) -> PolyMat {
        assert_eq!(self.cols, other.cols);
        PolyMat::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.get(r, c).clone()
            } else {
                other.get(r - self.rows, c).clone()
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn kill_vars(&self, vars: &[u32]) -> PolyMat {
        PolyMat::from_fn(self.rows, self.cols, |r, c| self.get(r, c).kill_vars(vars))
    }

    /// The block swap matrix over polynomials (blocks of the rectangular
    /// unit pattern), mirroring the scalar version.
    pub fn swap_rect(c: usize, b: usize) -> PolyMat {
        let mut m = PolyMat::zeros(b * c, b * c);
        for u in 0..b {
            for v in 0..c {
                m.set(u * c + v, v * b + u, Poly::one());
            }
        }
        m
    }

    pub fn swap_block(n: usize) -> PolyMat {
        Self::swap_rect(n, n)
    }

    /// 3x3 determinant, used by the explicit minor checks.
    pub fn det3(&self) -> Poly {
        assert_eq!((self.rows, self.cols), (3, 3));
        let g = |r, c| self.get(r, c);
        let m = |a: &Poly, b: &Poly| a.mul(b);
        let t1 = g(0, 0).mul(&m(g(1, 1), g(2, 2)).sub(&m(g(1, 2), g(2, 1))));
        let t2 = g(0, 1).mul(&m(g(1, 0), g(2, 2)).sub(&m(g(1, 2), g(2, 0))));
        let t3 = g(0, 2).mul(&m(g(1, 0), g(2, 1)).sub(&m(g(1, 1), g(2, 0))));
        t1.sub(&t2).add(&t3)
    }
}
