//! Unimodular transporters between integer pairs and factorization of
//! `GL(2, Z)` blocks into Goeritz generator words.
//!
//! A block `C` is row-reduced to `diag(±1, ±1)` by the Euclidean algorithm.
//! Each elementary move has a fixed expression in the three reflections
//!
//! ```text
//! R1 = [[0, 1], [1, 0]]    R2 = [[-1, 0], [1, 1]]    R3 = [[-1, 0], [0, 1]]
//! ```
//!
//! and each reflection is the first block of a short ε-free word:
//! `R1 = αγ`, `R2 = αβδ`, `R3 = αβ`. Substituting and cancelling the
//! central involution α gives the compact table used by [`ElementaryMove::word`].

use serde::{Deserialize, Serialize};

use crate::arith::{bezout_canonical, neg};
use crate::error::{BlockSide, Error, Result};
use crate::homology::{gcd_pair, Block2Matrix, HomologyVector};
use crate::words::{evaluate, goeritz_matrix4, GoeritzGenerator, GoeritzWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RGenerator {
    R1,
    R2,
    R3,
}

impl RGenerator {
    pub const ALL: [RGenerator; 3] = [RGenerator::R1, RGenerator::R2, RGenerator::R3];

    pub fn matrix(self) -> Block2Matrix {
        match self {
            RGenerator::R1 => Block2Matrix::new(0, 1, 1, 0),
            RGenerator::R2 => Block2Matrix::new(-1, 0, 1, 1),
            RGenerator::R3 => Block2Matrix::new(-1, 0, 0, 1),
        }
    }

    /// An ε-free word whose first block is this reflection.
    pub fn word(self) -> GoeritzWord {
        use GoeritzGenerator::*;
        let parts: &[(GoeritzGenerator, i64)] = match self {
            RGenerator::R1 => &[(Alpha, 1), (Gamma, 1)],
            RGenerator::R2 => &[(Alpha, 1), (Beta, 1), (Delta, 1)],
            RGenerator::R3 => &[(Alpha, 1), (Beta, 1)],
        };
        GoeritzWord::from(parts.to_vec())
    }
}

/// One left multiplication in the row reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementaryMove {
    /// Exchange the two rows.
    Swap,
    /// `[[1, 0], [n, 1]]`
    Lower(i64),
    /// `[[1, n], [0, 1]]`
    Upper(i64),
    /// `diag(e1, e2)` with `e1, e2 = ±1`.
    Signs(i8, i8),
}

impl ElementaryMove {
    pub fn matrix(self) -> Block2Matrix {
        match self {
            ElementaryMove::Swap => Block2Matrix::new(0, 1, 1, 0),
            ElementaryMove::Lower(n) => Block2Matrix::new(1, 0, n, 1),
            ElementaryMove::Upper(n) => Block2Matrix::new(1, n, 0, 1),
            ElementaryMove::Signs(e1, e2) => Block2Matrix::new(e1 as i64, 0, 0, e2 as i64),
        }
    }

    /// The move as a product of reflections:
    ///
    /// | move | reflections |
    /// |---|---|
    /// | swap | `R1` |
    /// | lower `n > 0` | `(R3 R2)^n` |
    /// | lower `n < 0` | `(R2 R3)^-n` |
    /// | upper `n` | `R1 · lower(n) · R1` |
    /// | `diag(-1, 1)` | `R3` |
    /// | `diag(1, -1)` | `R1 R3 R1` |
    /// | `diag(-1, -1)` | `R3 R1 R3 R1` |
    ///
    /// The length grows with `|n|`; [`ElementaryMove::word`] is the compact form.
    pub fn reflections(self) -> Vec<RGenerator> {
        use RGenerator::*;
        let lower = |n: i64| -> Vec<RGenerator> {
            let pair = if n > 0 { [R3, R2] } else { [R2, R3] };
            pair.iter().copied().cycle().take(2 * n.unsigned_abs() as usize).collect()
        };
        match self {
            ElementaryMove::Swap => vec![R1],
            ElementaryMove::Lower(n) => lower(n),
            ElementaryMove::Upper(n) => {
                let mut out = vec![R1];
                out.extend(lower(n));
                out.push(R1);
                out
            }
            ElementaryMove::Signs(1, 1) => vec![],
            ElementaryMove::Signs(-1, 1) => vec![R3],
            ElementaryMove::Signs(1, -1) => vec![R1, R3, R1],
            ElementaryMove::Signs(_, _) => vec![R3, R1, R3, R1],
        }
    }

    /// Compact ε-free word with this move as first block: swap `αγ`,
    /// lower `δ^n`, upper `γ δ^n γ`, signs `αβ`, `β`, `α`.
    pub fn word(self) -> GoeritzWord {
        use GoeritzGenerator::*;
        let parts: Vec<(GoeritzGenerator, i64)> = match self {
            ElementaryMove::Swap => vec![(Alpha, 1), (Gamma, 1)],
            ElementaryMove::Lower(n) => vec![(Delta, n)],
            ElementaryMove::Upper(n) => vec![(Gamma, 1), (Delta, n), (Gamma, 1)],
            ElementaryMove::Signs(1, 1) => vec![],
            ElementaryMove::Signs(-1, 1) => vec![(Alpha, 1), (Beta, 1)],
            ElementaryMove::Signs(1, -1) => vec![(Beta, 1)],
            ElementaryMove::Signs(_, _) => vec![(Alpha, 1)],
        };
        GoeritzWord::from(parts)
    }
}

/// Substitutes generator words for reflections and simplifies involutions.
pub fn reflection_word(rs: &[RGenerator]) -> GoeritzWord {
    let mut w = GoeritzWord::identity();
    for r in rs {
        w = w.concat(&r.word());
    }
    collect_alpha(&w)
}

/// Moves every α to the front (α is central) and reduces involution exponents.
fn collect_alpha(w: &GoeritzWord) -> GoeritzWord {
    let mut alphas = 0i64;
    let mut rest = GoeritzWord::identity();
    for &(g, e) in w.letters() {
        if g == GoeritzGenerator::Alpha {
            alphas += e.rem_euclid(2);
        } else {
            rest.push(g, e);
        }
    }
    GoeritzWord::power(GoeritzGenerator::Alpha, alphas % 2)
        .concat(&rest)
        .reduce_involutions()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationResult {
    pub word: GoeritzWord,
    pub block: Block2Matrix,
    /// The word's matrix was checked against the Goeritz form of `block`.
    pub certified: bool,
}

/// Some `G ∈ GL(2, Z)` with `G·v = v2`, or `None` if the gcds differ.
///
/// With `v = g·(k, l)` and Bezout coefficients `e1·k + e2·l = 1`, the matrix
/// `M = [[k, -e2], [l, e1]]` has determinant 1 and sends `(g, 0)` to `v`.
/// The result is `M' M⁻¹` for the analogous `M'` of `v2`.
pub fn transporter_gl2(v: (i64, i64), v2: (i64, i64)) -> Result<Option<Block2Matrix>> {
    if v == (0, 0) || v2 == (0, 0) {
        return Err(Error::DegenerateBlock {
            side: BlockSide::First,
        });
    }
    let g = gcd_pair(v.0, v.1);
    if g != gcd_pair(v2.0, v2.1) {
        return Ok(None);
    }
    let m = frame(v, g)?;
    let m2 = frame(v2, g)?;
    m2.mul(&m.inverse()?).map(Some)
}

fn frame(v: (i64, i64), g: u64) -> Result<Block2Matrix> {
    // g ≤ 2^63 and divides both entries; for g = 2^63 the quotients are 0 or ±1
    let div = |p: i64| -> i64 { (p as i128 / g as i128) as i64 };
    let (k, l) = (div(v.0), div(v.1));
    let (e1, e2) = bezout_canonical(k, l)?;
    Ok(Block2Matrix::new(k, neg(e2)?, l, e1))
}

/// Row-reduces a unimodular block. Returns moves `E_1..E_n` with
/// `C = E_1 ⋯ E_n`.
pub fn elementary_factors(c: &Block2Matrix) -> Result<Vec<ElementaryMove>> {
    let det = c.det()?;
    if det != 1 && det != -1 {
        return Err(Error::NotUnimodular { det });
    }
    // cur = (applied left moves) · C; the factors of C are the inverses, in order.
    let mut cur = *c;
    let mut factors = Vec::new();
    while cur.u != 0 {
        if cur.s.unsigned_abs() < cur.u.unsigned_abs() {
            cur = ElementaryMove::Swap.matrix().mul(&cur)?;
            factors.push(ElementaryMove::Swap);
        } else {
            let q = cur.s / cur.u;
            cur = ElementaryMove::Upper(neg(q)?).matrix().mul(&cur)?;
            factors.push(ElementaryMove::Upper(q));
        }
    }
    // cur = [[±1, t], [0, ±1]]
    if cur.t != 0 {
        let n = crate::arith::mul(cur.t, cur.v)?;
        cur = ElementaryMove::Upper(neg(n)?).matrix().mul(&cur)?;
        factors.push(ElementaryMove::Upper(n));
    }
    factors.push(ElementaryMove::Signs(cur.s as i8, cur.v as i8));
    Ok(factors)
}

/// Factors a unimodular block into an ε-free generator word, certified by
/// evaluation.
pub fn factor_block(c: &Block2Matrix) -> Result<FactorizationResult> {
    let moves = elementary_factors(c)?;
    let mut word = GoeritzWord::identity();
    for m in &moves {
        word = word.concat(&m.word());
    }
    let word = collect_alpha(&word);
    let certified = evaluate(&word)? == goeritz_matrix4(*c)?;
    Ok(FactorizationResult {
        word,
        block: *c,
        certified,
    })
}

/// Carries `k` to a vector with first block `(gcd(a, x), 0)` by an ε-free word.
pub fn normalize_first_block(k: &HomologyVector) -> Result<(GoeritzWord, HomologyVector)> {
    if k.first_block() == (0, 0) {
        return Err(Error::DegenerateBlock {
            side: BlockSide::First,
        });
    }
    let g = gcd_pair(k.a, k.x);
    let target = (
        i64::try_from(g).map_err(|_| Error::Overflow("gcd"))?,
        0,
    );
    let c = transporter_gl2(k.first_block(), target)?
        .expect("gcds agree by construction");
    let f = factor_block(&c)?;
    let image = evaluate(&f.word)?.apply(k)?;
    if !f.certified || image.first_block() != target {
        return Err(Error::Precondition(format!(
            "normalization of {k} did not certify"
        )));
    }
    Ok((f.word, image))
}
