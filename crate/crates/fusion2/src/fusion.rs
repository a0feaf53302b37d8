//! Rank-two fusion rules `r2^2 = m·1 + n·r2` and the induced tensor product
//! on objects.

use crate::blockmat::Shape;
use serde::{Deserialize, Serialize};
use std::fmt;

/// The multiplication data of a rank-two ring with basis `{1, r2}`:
/// `r2^2 = m·1 + n·r2` with `m + n > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FusionRule {
    m: usize,
    n: usize,
}

impl FusionRule {
    pub fn new(m: usize, n: usize) -> Result<Self, FusionError> {
        if m + n == 0 {
            return Err(FusionError::SquareIsZero);
        }
        Ok(FusionRule { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Structure shape `c_{ij}`: `c_11 = e1`, `c_12 = c_21 = e2`,
    /// `c_22 = (m, n)`.
    pub fn c(&self, i: usize, j: usize) -> Shape {
        match (i, j) {
            (1, 1) => Shape::e1(),
            (1, 2) | (2, 1) => Shape::e2(),
            (2, 2) => Shape(self.m, self.n),
            _ => panic!("fusion indices must be 1 or 2"),
        }
    }

    /// Structure constant `c_{ijk}`, the `k`-th component of `c_{ij}`.
    pub fn c3(&self, i: usize, j: usize, k: usize) -> usize {
        self.c(i, j).component(k)
    }

    /// Tensor product on objects: bilinear extension of the structure shapes.
    pub fn obj_tensor(&self, a: Shape, b: Shape) -> Shape {
        let mut out = Shape::ZERO;
        for i in 1..=2 {
            for j in 1..=2 {
                out = out.add(self.c(i, j).scale(a.component(i) * b.component(j)));
            }
        }
        out
    }

    /// `e2 (x) e2 (x) e2 = (mn, m + n^2)`, the home of the free associator.
    pub fn triple(&self) -> Shape {
        Shape(self.m * self.n, self.m + self.n * self.n)
    }
}

impl fmt::Display for FusionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, n={})", self.m, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FusionError {
    #[error("fusion rule requires m + n > 0")]
    SquareIsZero,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_shapes() {
        let r = FusionRule::new(1, 1).unwrap();
        assert_eq!(r.c(2, 2), Shape(1, 1));
        assert_eq!(r.c(1, 2), Shape(0, 1));
        assert_eq!(r.c(1, 1), Shape(1, 0));
        assert!(FusionRule::new(0, 0).is_err());
    }

    #[test]
    fn obj_tensor_examples() {
        let r = FusionRule::new(1, 1).unwrap();
        assert_eq!(r.obj_tensor(Shape(1, 1), Shape(1, 1)), Shape(2, 3));
        for (m, n) in [(1usize, 0usize), (0, 1), (1, 1), (2, 3), (0, 4)] {
            let r = FusionRule::new(m, n).unwrap();
            // unit object acts trivially
            let x = Shape(2, 3);
            assert_eq!(r.obj_tensor(x, Shape::e1()), x);
            assert_eq!(r.obj_tensor(Shape::e1(), x), x);
            // cube of e2
            let sq = r.obj_tensor(Shape::e2(), Shape::e2());
            let cube = r.obj_tensor(sq, Shape::e2());
            assert_eq!(cube, Shape(m * n, m + n * n));
            assert_eq!(cube, r.triple());
        }
    }

    #[test]
    fn obj_tensor_zero_iff_zero_factor() {
        let r = FusionRule::new(2, 1).unwrap();
        assert_eq!(r.obj_tensor(Shape::ZERO, Shape(3, 4)), Shape::ZERO);
        assert_eq!(r.obj_tensor(Shape(3, 4), Shape::ZERO), Shape::ZERO);
        assert_ne!(r.obj_tensor(Shape(1, 0), Shape(0, 1)), Shape::ZERO);
    }

    #[test]
    fn obj_tensor_associative_exhaustive() {
        for m in 0..=4usize {
            for n in 0..=4usize {
                if m + n == 0 {
                    continue;
                }
                let r = FusionRule::new(m, n).unwrap();
                for a1 in 0..=3usize {
                    for a2 in 0..=3usize {
                        for b1 in 0..=3usize {
                            for b2 in 0..=3usize {
                                for c1 in 0..=3usize {
                                    for c2 in 0..=3usize {
                                        let a = Shape(a1, a2);
                                        let b = Shape(b1, b2);
                                        let c = Shape(c1, c2);
                                        assert_eq!(
                                            r.obj_tensor(r.obj_tensor(a, b), c),
                                            r.obj_tensor(a, r.obj_tensor(b, c))
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn obj_tensor_bilinear() {
        let r = FusionRule::new(2, 3).unwrap();
        let a = Shape(1, 2);
        let ap = Shape(2, 1);
        let b = Shape(3, 1);
        assert_eq!(
            r.obj_tensor(a.add(ap), b),
            r.obj_tensor(a, b).add(r.obj_tensor(ap, b))
        );
    }
}
