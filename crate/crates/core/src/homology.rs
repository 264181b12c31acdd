//! Homology of the genus-2 Heegaard surface.
//!
//! A class in `H_1(F; Z) ≅ Z^4` is written `(a, x, b, y)` in the standard
//! basis. The `(a, x)` block is the image in `H_1(H')`, the `(b, y)` block
//! the image in `H_1(H)`. The Goeritz group acts block-diagonally by
//! `diag(C, C^{-T})` with `C ∈ GL(2, Z)`; the handlebody swap acts by the
//! coordinate permutation `(a, x, b, y) ↦ (y, b, x, a)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{add, det2, dot2, gcd_u64, mul, neg, sub};
use crate::error::{BlockSide, Error, Result};

/// A homology class `(a, x, b, y)`. Serialized as `[a, x, b, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 4]", into = "[i64; 4]")]
pub struct HomologyVector {
    pub a: i64,
    pub x: i64,
    pub b: i64,
    pub y: i64,
}

impl From<[i64; 4]> for HomologyVector {
    fn from([a, x, b, y]: [i64; 4]) -> Self {
        Self { a, x, b, y }
    }
}

impl From<HomologyVector> for [i64; 4] {
    fn from(v: HomologyVector) -> Self {
        v.to_array()
    }
}

impl fmt::Display for HomologyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.x, self.b, self.y)
    }
}

impl HomologyVector {
    pub const fn new(a: i64, x: i64, b: i64, y: i64) -> Self {
        Self { a, x, b, y }
    }

    pub const fn to_array(self) -> [i64; 4] {
        [self.a, self.x, self.b, self.y]
    }

    pub fn is_zero(&self) -> bool {
        self.to_array() == [0; 4]
    }

    pub fn first_block(&self) -> (i64, i64) {
        (self.a, self.x)
    }

    pub fn second_block(&self) -> (i64, i64) {
        (self.b, self.y)
    }

    /// gcd of `(a, x)`, or `None` when that block is zero.
    pub fn first_block_gcd(&self) -> Option<u64> {
        nonzero_gcd(self.a, self.x)
    }

    /// gcd of `(b, y)`, or `None` when that block is zero.
    pub fn second_block_gcd(&self) -> Option<u64> {
        nonzero_gcd(self.b, self.y)
    }

    /// Error if either block is zero.
    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.first_block() == (0, 0) {
            return Err(Error::DegenerateBlock {
                side: BlockSide::First,
            });
        }
        if self.second_block() == (0, 0) {
            return Err(Error::DegenerateBlock {
                side: BlockSide::Second,
            });
        }
        Ok(())
    }
}

/// Non-negative gcd. `gcd_pair(0, 0) == 0`; callers that need to treat a zero
/// block specially should use [`HomologyVector::first_block_gcd`] and friends.
pub fn gcd_pair(p: i64, q: i64) -> u64 {
    gcd_u64(p.unsigned_abs(), q.unsigned_abs())
}

fn nonzero_gcd(p: i64, q: i64) -> Option<u64> {
    match gcd_pair(p, q) {
        0 => None,
        g => Some(g),
    }
}

/// `a*b + x*y`: the dot product of the two blocks.
pub fn split_product(k: &HomologyVector) -> Result<i64> {
    dot2(k.a, k.b, k.x, k.y)
}

/// Framing of a curve relative to the Heegaard surface. Here it is taken to
/// be the split product of the curve's class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SurfaceSlope(pub i64);

impl SurfaceSlope {
    pub fn of(k: &HomologyVector) -> Result<Self> {
        split_product(k).map(SurfaceSlope)
    }
}

/// Algebraic intersection number in the symplectic basis `{a, b, x, y}`:
/// `(a1*b2 - a2*b1) + (x1*y2 - x2*y1)`.
pub fn symplectic_pairing(k1: &HomologyVector, k2: &HomologyVector) -> Result<i64> {
    add(det2(k1.a, k2.b, k2.a, k1.b)?, det2(k1.x, k2.y, k2.x, k1.y)?)
}

/// The handlebody swap on homology: `(a, x, b, y) ↦ (y, b, x, a)`. An involution.
pub fn epsilon_star(k: &HomologyVector) -> HomologyVector {
    HomologyVector::new(k.y, k.b, k.x, k.a)
}

/// A 2×2 integer matrix `[[s, t], [u, v]]`. Serialized as nested arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct Block2Matrix {
    pub s: i64,
    pub t: i64,
    pub u: i64,
    pub v: i64,
}

impl From<[[i64; 2]; 2]> for Block2Matrix {
    fn from([[s, t], [u, v]]: [[i64; 2]; 2]) -> Self {
        Self { s, t, u, v }
    }
}

impl From<Block2Matrix> for [[i64; 2]; 2] {
    fn from(m: Block2Matrix) -> Self {
        [[m.s, m.t], [m.u, m.v]]
    }
}

impl fmt::Display for Block2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.s, self.t, self.u, self.v)
    }
}

impl Block2Matrix {
    pub const IDENTITY: Block2Matrix = Block2Matrix::new(1, 0, 0, 1);

    pub const fn new(s: i64, t: i64, u: i64, v: i64) -> Self {
        Self { s, t, u, v }
    }

    pub fn det(&self) -> Result<i64> {
        det2(self.s, self.v, self.t, self.u)
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.det(), Ok(1) | Ok(-1))
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.s, self.u, self.t, self.v)
    }

    pub fn mul(&self, o: &Block2Matrix) -> Result<Block2Matrix> {
        Ok(Block2Matrix::new(
            dot2(self.s, o.s, self.t, o.u)?,
            dot2(self.s, o.t, self.t, o.v)?,
            dot2(self.u, o.s, self.v, o.u)?,
            dot2(self.u, o.t, self.v, o.v)?,
        ))
    }

    pub fn apply(&self, (p, q): (i64, i64)) -> Result<(i64, i64)> {
        Ok((dot2(self.s, p, self.t, q)?, dot2(self.u, p, self.v, q)?))
    }

    /// Exact inverse of a unimodular matrix: adjugate times the determinant.
    pub fn inverse(&self) -> Result<Block2Matrix> {
        let det = self.det()?;
        if det != 1 && det != -1 {
            return Err(Error::NotUnimodular { det });
        }
        Ok(Block2Matrix::new(
            mul(det, self.v)?,
            mul(det, neg(self.t)?)?,
            mul(det, neg(self.u)?)?,
            mul(det, self.s)?,
        ))
    }

    /// `(C^{-1})^T`.
    pub fn inverse_transpose(&self) -> Result<Block2Matrix> {
        Ok(self.inverse()?.transpose())
    }
}

/// `diag(C, D)` with `C` unimodular and `D = (C^{-1})^T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GoeritzMatrix {
    first_block: Block2Matrix,
    second_block: Block2Matrix,
}

impl GoeritzMatrix {
    pub const IDENTITY: GoeritzMatrix = GoeritzMatrix {
        first_block: Block2Matrix::IDENTITY,
        second_block: Block2Matrix::IDENTITY,
    };

    pub fn first_block(&self) -> Block2Matrix {
        self.first_block
    }

    pub fn second_block(&self) -> Block2Matrix {
        self.second_block
    }

    /// Accepts a pair of blocks only if they are in Goeritz form.
    pub fn from_blocks(c: Block2Matrix, d: Block2Matrix) -> Result<Self> {
        let det = c.det()?;
        if det != 1 && det != -1 {
            return Err(Error::NotUnimodular { det });
        }
        if c.transpose().mul(&d)? != Block2Matrix::IDENTITY {
            return Err(Error::Precondition(format!(
                "second block {d} is not the inverse transpose of {c}"
            )));
        }
        Ok(Self {
            first_block: c,
            second_block: d,
        })
    }

    pub fn apply(&self, k: &HomologyVector) -> Result<HomologyVector> {
        let (a, x) = self.first_block.apply(k.first_block())?;
        let (b, y) = self.second_block.apply(k.second_block())?;
        Ok(HomologyVector::new(a, x, b, y))
    }

    pub fn inverse(&self) -> Result<GoeritzMatrix> {
        goeritz_form_from_block(self.first_block.inverse()?)
    }
}

/// Builds `diag(C, (C^{-1})^T)`.
pub fn goeritz_form_from_block(c: Block2Matrix) -> Result<GoeritzMatrix> {
    Ok(GoeritzMatrix {
        first_block: c,
        second_block: c.inverse_transpose()?,
    })
}

/// `apply(M, k)` for a Goeritz-form matrix.
pub fn apply(m: &GoeritzMatrix, k: &HomologyVector) -> Result<HomologyVector> {
    m.apply(k)
}

/// The five curves whose Dehn twists generate the mapping class group of `F`.
/// `C1`, `C2`, `C4`, `C5` are oriented like `a`, `b`, `y`, `x` respectively;
/// `C3` runs between the two handles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistCurve {
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl TwistCurve {
    pub const ALL: [TwistCurve; 5] = [
        TwistCurve::C1,
        TwistCurve::C2,
        TwistCurve::C3,
        TwistCurve::C4,
        TwistCurve::C5,
    ];

    /// Change of split product a positive twist about this curve causes.
    pub fn slope_delta(self, k: &HomologyVector) -> Result<i64> {
        let sq = |v: i64| mul(v, v);
        match self {
            TwistCurve::C1 => neg(sq(k.b)?),
            TwistCurve::C2 => sq(k.a),
            TwistCurve::C3 => neg(sq(sub(k.b, k.y)?)?),
            TwistCurve::C4 => sq(k.x),
            TwistCurve::C5 => neg(sq(k.y)?),
        }
    }
}

/// Action of a positive Dehn twist on homology.
///
/// | curve | rule |
/// |---|---|
/// | c1 | `a ← a − b` |
/// | c2 | `b ← b + a` |
/// | c3 | `a ← a + (y − b)`, `x ← x − (y − b)` |
/// | c4 | `y ← y + x` |
/// | c5 | `x ← x − y` |
///
/// The c4/c5 signs mirror c2/c1 across the two handles; they are the only
/// choice that changes the split product by `+x²` and `−y²`.
pub fn dehn_twist(k: &HomologyVector, c: TwistCurve) -> Result<HomologyVector> {
    let mut out = *k;
    match c {
        TwistCurve::C1 => out.a = sub(k.a, k.b)?,
        TwistCurve::C2 => out.b = add(k.b, k.a)?,
        TwistCurve::C3 => {
            let i = sub(k.y, k.b)?;
            out.a = add(k.a, i)?;
            out.x = sub(k.x, i)?;
        }
        TwistCurve::C4 => out.y = add(k.y, k.x)?,
        TwistCurve::C5 => out.x = sub(k.x, k.y)?,
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(a: i64, x: i64, b: i64, y: i64) -> HomologyVector {
        HomologyVector::new(a, x, b, y)
    }

    #[test]
    fn split_product_examples() {
        assert_eq!(split_product(&v(1, 0, 0, 0)).unwrap(), 0);
        assert_eq!(split_product(&v(2, -6, 9, 3)).unwrap(), 0);
        assert_eq!(split_product(&v(12, -5, 17, 5)).unwrap(), 179);
        assert_eq!(split_product(&v(12, -7, 19, 7)).unwrap(), 179);
        assert_eq!(SurfaceSlope::of(&v(12, -5, 17, 5)).unwrap(), SurfaceSlope(179));
    }

    #[test]
    fn split_product_overflow_is_an_error() {
        let big = v(i64::MAX, 0, 2, 0);
        assert!(split_product(&big).unwrap_err().is_arithmetic());
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(symplectic_pairing(&v(1, 0, 0, 0), &v(0, 0, 1, 0)).unwrap(), 1);
        assert_eq!(symplectic_pairing(&v(0, 0, 1, 0), &v(1, 0, 0, 0)).unwrap(), -1);
        assert_eq!(symplectic_pairing(&v(0, 1, 0, 0), &v(0, 0, 0, 1)).unwrap(), 1);
        assert_eq!(symplectic_pairing(&v(1, 2, 3, 4), &v(5, 6, 7, 8)).unwrap(), -16);
        assert_eq!(symplectic_pairing(&v(3, 1, 4, 1), &v(3, 1, 4, 1)).unwrap(), 0);
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_star(&v(1, 0, 0, 0)), v(0, 0, 0, 1));
        assert_eq!(epsilon_star(&epsilon_star(&v(3, 1, 4, 1))), v(3, 1, 4, 1));
        assert_eq!(epsilon_star(&v(12, -7, 19, 7)), v(7, 19, -7, 12));
    }

    #[test]
    fn goeritz_form_examples() {
        assert_eq!(
            goeritz_form_from_block(Block2Matrix::IDENTITY).unwrap(),
            GoeritzMatrix::IDENTITY
        );
        let g = goeritz_form_from_block(Block2Matrix::new(1, 1, 2, 1)).unwrap();
        assert_eq!(g.second_block(), Block2Matrix::new(-1, 2, 1, -1));
        let r1 = Block2Matrix::new(0, 1, 1, 0);
        assert_eq!(goeritz_form_from_block(r1).unwrap().second_block(), r1);
        assert_eq!(
            goeritz_form_from_block(Block2Matrix::new(2, 0, 0, 1)),
            Err(Error::NotUnimodular { det: 2 })
        );
    }

    #[test]
    fn from_blocks_checks_inverse_transpose() {
        let c = Block2Matrix::new(1, 1, 2, 1);
        assert!(GoeritzMatrix::from_blocks(c, Block2Matrix::new(-1, 2, 1, -1)).is_ok());
        assert!(GoeritzMatrix::from_blocks(c, c).is_err());
    }

    #[test]
    fn apply_examples() {
        let k = v(12, -5, 17, 5);
        assert_eq!(apply(&GoeritzMatrix::IDENTITY, &k).unwrap(), k);
        let g = goeritz_form_from_block(Block2Matrix::new(1, 1, 2, 1)).unwrap();
        assert_eq!(apply(&g, &k).unwrap(), v(7, 19, -7, 12));
        let delta = goeritz_form_from_block(Block2Matrix::new(1, 0, 1, 1)).unwrap();
        assert_eq!(apply(&delta, &v(1, 0, 0, 0)).unwrap(), v(1, 1, 0, 0));
    }

    #[test]
    fn twist_examples() {
        let k = v(1, 0, 0, 0);
        let t = dehn_twist(&k, TwistCurve::C2).unwrap();
        assert_eq!(t, v(1, 0, 1, 0));
        assert_eq!(split_product(&t).unwrap() - split_product(&k).unwrap(), 1);

        let k = v(0, 0, 1, 0);
        let t = dehn_twist(&k, TwistCurve::C1).unwrap();
        assert_eq!(t, v(-1, 0, 1, 0));
        assert_eq!(split_product(&t).unwrap(), -1);

        let t = dehn_twist(&k, TwistCurve::C3).unwrap();
        assert_eq!(t, v(-1, 1, 1, 0));
        assert_eq!(split_product(&t).unwrap(), -1);
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_pair(6, 4), 2);
        assert_eq!(gcd_pair(0, 0), 0);
        assert_eq!(gcd_pair(12, -5), 1);
        assert_eq!(gcd_pair(i64::MIN, 0), 1u64 << 63);
        assert_eq!(v(0, 0, 3, 6).first_block_gcd(), None);
        assert_eq!(v(0, 0, 3, 6).second_block_gcd(), Some(3));
        assert_eq!(
            v(0, 0, 3, 6).require_nondegenerate(),
            Err(Error::DegenerateBlock {
                side: BlockSide::First
            })
        );
    }

    #[test]
    fn json_shapes() {
        let k = v(12, -5, 17, 5);
        assert_eq!(serde_json::to_string(&k).unwrap(), "[12,-5,17,5]");
        let m = Block2Matrix::new(1, 1, 2, 1);
        assert_eq!(serde_json::to_string(&m).unwrap(), "[[1,1],[2,1]]");
        let back: Block2Matrix = serde_json::from_str("[[1,1],[2,1]]").unwrap();
        assert_eq!(back, m);
    }

    fn coord() -> impl Strategy<Value = i64> {
        (i32::MIN as i64 / 2)..=(i32::MAX as i64 / 2)
    }

    fn vector() -> impl Strategy<Value = HomologyVector> {
        (coord(), coord(), coord(), coord()).prop_map(|(a, x, b, y)| v(a, x, b, y))
    }

    fn unimodular() -> impl Strategy<Value = Block2Matrix> {
        // products of a few elementary matrices stay small and unimodular
        proptest::collection::vec((0u8..4, -3i64..=3), 0..6).prop_map(|steps| {
            let mut m = Block2Matrix::IDENTITY;
            for (kind, n) in steps {
                let e = match kind {
                    0 => Block2Matrix::new(1, n, 0, 1),
                    1 => Block2Matrix::new(1, 0, n, 1),
                    2 => Block2Matrix::new(0, 1, 1, 0),
                    _ => Block2Matrix::new(-1, 0, 0, 1),
                };
                m = e.mul(&m).unwrap();
            }
            m
        })
    }

    fn small_vector() -> impl Strategy<Value = HomologyVector> {
        let c = -10_000i64..=10_000;
        (c.clone(), c.clone(), c.clone(), c).prop_map(|(a, x, b, y)| v(a, x, b, y))
    }

    proptest! {
        #[test]
        fn goeritz_preserves_split_product(c in unimodular(), k in small_vector()) {
            let g = goeritz_form_from_block(c).unwrap();
            prop_assert_eq!(split_product(&g.apply(&k).unwrap()).unwrap(), split_product(&k).unwrap());
        }

        #[test]
        fn epsilon_preserves_split_product(k in vector()) {
            prop_assert_eq!(split_product(&epsilon_star(&k)).unwrap(), split_product(&k).unwrap());
        }

        #[test]
        fn goeritz_preserves_pairing_epsilon_negates_it(c in unimodular(), k1 in small_vector(), k2 in small_vector()) {
            let g = goeritz_form_from_block(c).unwrap();
            let before = symplectic_pairing(&k1, &k2).unwrap();
            prop_assert_eq!(symplectic_pairing(&g.apply(&k1).unwrap(), &g.apply(&k2).unwrap()).unwrap(), before);
            prop_assert_eq!(symplectic_pairing(&epsilon_star(&k1), &epsilon_star(&k2)).unwrap(), -before);
        }

        #[test]
        fn twist_slope_deltas(k in vector()) {
            let sp = split_product(&k).unwrap();
            for c in TwistCurve::ALL {
                let t = dehn_twist(&k, c).unwrap();
                let delta = split_product(&t).unwrap() - sp;
                prop_assert_eq!(delta, c.slope_delta(&k).unwrap(), "curve {:?}", c);
            }
        }

        #[test]
        fn goeritz_preserves_first_block_gcd(c in unimodular(), k in small_vector()) {
            let g = goeritz_form_from_block(c).unwrap();
            let image = g.apply(&k).unwrap();
            prop_assert_eq!(gcd_pair(image.a, image.x), gcd_pair(k.a, k.x));
            prop_assert_eq!(gcd_pair(image.b, image.y), gcd_pair(k.b, k.y));
        }

        #[test]
        fn inverse_transpose_identity(c in unimodular()) {
            let d = c.inverse_transpose().unwrap();
            prop_assert_eq!(c.transpose().mul(&d).unwrap(), Block2Matrix::IDENTITY);
        }
    }
}
