//! Words in the generators of the extended Goeritz group and their action on
//! homology.
//!
//! Words act right to left: in `a b g d' g d^2` the `d^2` is applied first,
//! so evaluating a word multiplies the generator matrices in written order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{add, mul};
use crate::error::{Error, Result};
use crate::homology::{goeritz_form_from_block, Block2Matrix, GoeritzMatrix, HomologyVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoeritzGenerator {
    Alpha,
    Beta,
    Gamma,
    /// The handle slide, not the rotation.
    Delta,
    /// Swaps the two handlebodies.
    Epsilon,
}

impl GoeritzGenerator {
    pub const ALL: [GoeritzGenerator; 5] = [
        GoeritzGenerator::Alpha,
        GoeritzGenerator::Beta,
        GoeritzGenerator::Gamma,
        GoeritzGenerator::Delta,
        GoeritzGenerator::Epsilon,
    ];

    pub fn ascii(self) -> char {
        match self {
            GoeritzGenerator::Alpha => 'a',
            GoeritzGenerator::Beta => 'b',
            GoeritzGenerator::Gamma => 'g',
            GoeritzGenerator::Delta => 'd',
            GoeritzGenerator::Epsilon => 'e',
        }
    }

    pub fn from_ascii(c: char) -> Option<Self> {
        Some(match c {
            'a' => GoeritzGenerator::Alpha,
            'b' => GoeritzGenerator::Beta,
            'g' => GoeritzGenerator::Gamma,
            'd' => GoeritzGenerator::Delta,
            'e' => GoeritzGenerator::Epsilon,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            GoeritzGenerator::Alpha => "alpha",
            GoeritzGenerator::Beta => "beta",
            GoeritzGenerator::Gamma => "gamma",
            GoeritzGenerator::Delta => "delta",
            GoeritzGenerator::Epsilon => "epsilon",
        }
    }

    /// α, γ and ε are involutions; β and δ have infinite order.
    pub fn is_involution(self) -> bool {
        matches!(
            self,
            GoeritzGenerator::Alpha | GoeritzGenerator::Gamma | GoeritzGenerator::Epsilon
        )
    }
}

impl fmt::Display for GoeritzGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A 4×4 integer matrix acting on `(a, x, b, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matrix4(pub [[i64; 4]; 4]);

impl Matrix4 {
    pub const IDENTITY: Matrix4 = Matrix4([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);

    pub fn mul(&self, o: &Matrix4) -> Result<Matrix4> {
        let mut out = [[0i64; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = 0i64;
                for k in 0..4 {
                    acc = add(acc, mul(self.0[i][k], o.0[k][j])?)?;
                }
                *cell = acc;
            }
        }
        Ok(Matrix4(out))
    }

    pub fn pow(&self, mut n: u64) -> Result<Matrix4> {
        let mut base = *self;
        let mut acc = Matrix4::IDENTITY;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn apply(&self, k: &HomologyVector) -> Result<HomologyVector> {
        let v = k.to_array();
        let mut out = [0i64; 4];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0i64;
            for (j, vj) in v.iter().enumerate() {
                acc = add(acc, mul(self.0[i][j], *vj)?)?;
            }
            *o = acc;
        }
        Ok(HomologyVector::from(out))
    }

    /// Determinant by Leibniz expansion in `i128`.
    pub fn det(&self) -> Result<i64> {
        let m = &self.0;
        let mut total: i128 = 0;
        for (perm, sign) in PERMUTATIONS_4 {
            let mut term: i128 = sign;
            for (row, &col) in perm.iter().enumerate() {
                term = term
                    .checked_mul(m[row][col] as i128)
                    .ok_or(Error::Overflow("determinant"))?;
            }
            total = total.checked_add(term).ok_or(Error::Overflow("determinant"))?;
        }
        i64::try_from(total).map_err(|_| Error::Overflow("determinant"))
    }

    pub fn block(&self, row: usize, col: usize) -> Block2Matrix {
        let m = &self.0;
        Block2Matrix::new(
            m[row][col],
            m[row][col + 1],
            m[row + 1][col],
            m[row + 1][col + 1],
        )
    }

    /// `Some` when the matrix is `diag(C, C^{-T})` with `C` unimodular.
    pub fn as_goeritz(&self) -> Option<GoeritzMatrix> {
        if self.block(0, 2) != Block2Matrix::new(0, 0, 0, 0)
            || self.block(2, 0) != Block2Matrix::new(0, 0, 0, 0)
        {
            return None;
        }
        GoeritzMatrix::from_blocks(self.block(0, 0), self.block(2, 2)).ok()
    }

    pub fn is_goeritz_form(&self) -> bool {
        self.as_goeritz().is_some()
    }
}

impl From<GoeritzMatrix> for Matrix4 {
    fn from(g: GoeritzMatrix) -> Self {
        let c = g.first_block();
        let d = g.second_block();
        Matrix4([
            [c.s, c.t, 0, 0],
            [c.u, c.v, 0, 0],
            [0, 0, d.s, d.t],
            [0, 0, d.u, d.v],
        ])
    }
}

impl fmt::Display for Matrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{:>4} {:>4} {:>4} {:>4} ]", row[0], row[1], row[2], row[3])?;
        }
        Ok(())
    }
}

const PERMUTATIONS_4: [([usize; 4], i128); 24] = [
    ([0, 1, 2, 3], 1),
    ([0, 1, 3, 2], -1),
    ([0, 2, 1, 3], -1),
    ([0, 2, 3, 1], 1),
    ([0, 3, 1, 2], 1),
    ([0, 3, 2, 1], -1),
    ([1, 0, 2, 3], -1),
    ([1, 0, 3, 2], 1),
    ([1, 2, 0, 3], 1),
    ([1, 2, 3, 0], -1),
    ([1, 3, 0, 2], -1),
    ([1, 3, 2, 0], 1),
    ([2, 0, 1, 3], 1),
    ([2, 0, 3, 1], -1),
    ([2, 1, 0, 3], -1),
    ([2, 1, 3, 0], 1),
    ([2, 3, 0, 1], 1),
    ([2, 3, 1, 0], -1),
    ([3, 0, 1, 2], -1),
    ([3, 0, 2, 1], 1),
    ([3, 1, 0, 2], 1),
    ([3, 1, 2, 0], -1),
    ([3, 2, 0, 1], -1),
    ([3, 2, 1, 0], 1),
];

/// Homology action of a generator.
pub fn generator_matrix(g: GoeritzGenerator) -> Matrix4 {
    match g {
        GoeritzGenerator::Alpha => Matrix4([
            [-1, 0, 0, 0],
            [0, -1, 0, 0],
            [0, 0, -1, 0],
            [0, 0, 0, -1],
        ]),
        GoeritzGenerator::Beta => Matrix4([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]]),
        GoeritzGenerator::Gamma => Matrix4([
            [0, -1, 0, 0],
            [-1, 0, 0, 0],
            [0, 0, 0, -1],
            [0, 0, -1, 0],
        ]),
        GoeritzGenerator::Delta => Matrix4([[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, -1], [0, 0, 0, 1]]),
        GoeritzGenerator::Epsilon => Matrix4([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]),
    }
}

fn generator_inverse_matrix(g: GoeritzGenerator) -> Matrix4 {
    match g {
        GoeritzGenerator::Delta => Matrix4([[1, 0, 0, 0], [-1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]),
        // the remaining generator images are involutions
        other => generator_matrix(other),
    }
}

/// A word in run-length normal form: adjacent runs use distinct generators
/// and no exponent is zero. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<(GoeritzGenerator, i64)>", into = "Vec<(GoeritzGenerator, i64)>")]
pub struct GoeritzWord {
    letters: Vec<(GoeritzGenerator, i64)>,
}

impl From<Vec<(GoeritzGenerator, i64)>> for GoeritzWord {
    fn from(letters: Vec<(GoeritzGenerator, i64)>) -> Self {
        let mut w = GoeritzWord::identity();
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }
}

impl From<GoeritzWord> for Vec<(GoeritzGenerator, i64)> {
    fn from(w: GoeritzWord) -> Self {
        w.letters
    }
}

impl GoeritzWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(g: GoeritzGenerator) -> Self {
        Self::power(g, 1)
    }

    pub fn power(g: GoeritzGenerator, e: i64) -> Self {
        let mut w = Self::identity();
        w.push(g, e);
        w
    }

    pub fn letters(&self) -> &[(GoeritzGenerator, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total number of generator letters, counting exponents.
    pub fn letter_count(&self) -> u64 {
        self.letters.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    /// Appends `g^e` on the right, merging with the last run. A run whose
    /// exponent would overflow is split instead of merged.
    pub fn push(&mut self, g: GoeritzGenerator, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == g {
                if let Some(sum) = last.1.checked_add(e) {
                    if sum == 0 {
                        self.letters.pop();
                    } else {
                        last.1 = sum;
                    }
                    return;
                }
            }
        }
        self.letters.push((g, e));
    }

    pub fn concat(&self, other: &GoeritzWord) -> GoeritzWord {
        let mut w = self.clone();
        for &(g, e) in &other.letters {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> Result<GoeritzWord> {
        let mut w = GoeritzWord::identity();
        for &(g, e) in self.letters.iter().rev() {
            w.push(g, e.checked_neg().ok_or(Error::Overflow("word inverse"))?);
        }
        Ok(w)
    }

    pub fn repeat(&self, n: usize) -> GoeritzWord {
        let mut w = GoeritzWord::identity();
        for _ in 0..n {
            w = w.concat(self);
        }
        w
    }

    /// Reduces exponents of α, γ and ε modulo 2. These generators are
    /// involutions in the group itself, so the result is the same element.
    pub fn reduce_involutions(&self) -> GoeritzWord {
        let mut out: Vec<(GoeritzGenerator, i64)> = Vec::with_capacity(self.letters.len());
        for &(g, e) in &self.letters {
            let e = if g.is_involution() { e.rem_euclid(2) } else { e };
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == g => {
                    let sum = last.1 + e;
                    let sum = if g.is_involution() { sum.rem_euclid(2) } else { sum };
                    if sum == 0 {
                        out.pop();
                    } else {
                        last.1 = sum;
                    }
                }
                _ => out.push((g, e)),
            }
        }
        GoeritzWord { letters: out }
    }

    pub fn epsilon_parity(&self) -> Parity {
        epsilon_parity(self)
    }
}

impl fmt::Display for GoeritzWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, &(g, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", g.ascii())?;
            if e < 0 {
                f.write_str("'")?;
            }
            if e.unsigned_abs() != 1 {
                write!(f, "^{}", e.unsigned_abs())?;
            }
        }
        Ok(())
    }
}

impl FromStr for GoeritzWord {
    type Err = Error;

    /// Parses the ASCII form: `a b g d e` for the generators, a trailing `'`
    /// for the inverse and an optional `^n` power, e.g. `a b g d' g d^2`.
    /// `1` or an empty string is the identity.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "1" {
            return Ok(GoeritzWord::identity());
        }
        let chars: Vec<(usize, char)> = s.char_indices().collect();
        let mut i = 0;
        let mut w = GoeritzWord::identity();
        while i < chars.len() {
            let (pos, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let g = GoeritzGenerator::from_ascii(c).ok_or_else(|| {
                Error::parse(pos, format!("expected one of a, b, g, d, e but found `{c}`"))
            })?;
            i += 1;
            let mut sign = 1i64;
            if i < chars.len() && chars[i].1 == '\'' {
                sign = -1;
                i += 1;
            }
            let mut power = 1i64;
            if i < chars.len() && chars[i].1 == '^' {
                let caret = chars[i].0;
                i += 1;
                let start = i;
                if i < chars.len() && chars[i].1 == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let end = chars.get(i).map_or(s.len(), |c| c.0);
                let from = chars.get(start).map_or(s.len(), |c| c.0);
                let text = &s[from..end];
                power = text.parse::<i64>().map_err(|_| {
                    Error::parse(caret, format!("expected an integer after `^`, found `{text}`"))
                })?;
            }
            if i < chars.len() && !chars[i].1.is_whitespace() && GoeritzGenerator::from_ascii(chars[i].1).is_none() {
                return Err(Error::parse(
                    chars[i].0,
                    format!("unexpected character `{}`", chars[i].1),
                ));
            }
            let e = power
                .checked_mul(sign)
                .ok_or_else(|| Error::parse(pos, "exponent out of range"))?;
            w.push(g, e);
        }
        Ok(w)
    }
}

/// Matrix of a word: the product of the generator matrices in written order.
pub fn evaluate(w: &GoeritzWord) -> Result<Matrix4> {
    let mut acc = Matrix4::IDENTITY;
    for &(g, e) in &w.letters {
        let m = if e > 0 {
            generator_matrix(g)
        } else {
            generator_inverse_matrix(g)
        };
        let m = if g.is_involution() {
            if e.unsigned_abs() % 2 == 0 {
                Matrix4::IDENTITY
            } else {
                m
            }
        } else {
            m.pow(e.unsigned_abs())?
        };
        acc = acc.mul(&m)?;
    }
    Ok(acc)
}

/// Builds `diag(C, C^{-T})` as a plain 4×4 matrix.
pub fn goeritz_matrix4(c: Block2Matrix) -> Result<Matrix4> {
    goeritz_form_from_block(c).map(Matrix4::from)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Parity of the total ε exponent. Even exactly when the word's matrix is in
/// Goeritz form.
pub fn epsilon_parity(w: &GoeritzWord) -> Parity {
    let odd = w
        .letters
        .iter()
        .filter(|(g, _)| *g == GoeritzGenerator::Epsilon)
        .fold(false, |acc, (_, e)| acc ^ (e.unsigned_abs() % 2 == 1));
    if odd {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// A relator together with a printable label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relator {
    pub label: String,
    pub word: GoeritzWord,
}

fn word_of(parts: &[(GoeritzGenerator, i64)]) -> GoeritzWord {
    GoeritzWord::from(parts.to_vec())
}

/// `[x, y] = x y x⁻¹ y⁻¹`
fn commutator(x: GoeritzGenerator, y: GoeritzGenerator) -> GoeritzWord {
    word_of(&[(x, 1), (y, 1), (x, -1), (y, -1)])
}

fn relator(label: &str, word: GoeritzWord) -> Relator {
    Relator {
        label: label.to_string(),
        word,
    }
}

/// Relators of the Goeritz group (8) or of its extension by ε (13).
pub fn relators(extended: bool) -> Vec<Relator> {
    use GoeritzGenerator::*;
    let alpha = GoeritzWord::generator(Alpha);
    let rot_cubed = word_of(&[(Beta, -1), (Gamma, 1), (Delta, 1)]).repeat(3);
    let slide_squared = word_of(&[(Beta, -1), (Delta, 1)]).repeat(2);
    let mut out = vec![
        relator("a^2", GoeritzWord::power(Alpha, 2)),
        relator("g^2", GoeritzWord::power(Gamma, 2)),
    ];
    if extended {
        out.push(relator("e^2", GoeritzWord::power(Epsilon, 2)));
    }
    out.push(relator("[a,b]", commutator(Alpha, Beta)));
    out.push(relator("[a,g]", commutator(Alpha, Gamma)));
    out.push(relator("[a,d]", commutator(Alpha, Delta)));
    out.push(relator("a[g,b]", alpha.concat(&commutator(Gamma, Beta))));
    if extended {
        out.push(relator("[e,a]", commutator(Epsilon, Alpha)));
        out.push(relator("a[e,b]", alpha.concat(&commutator(Epsilon, Beta))));
        out.push(relator("[e,g]", commutator(Epsilon, Gamma)));
        out.push(relator("(e d)^2", word_of(&[(Epsilon, 1), (Delta, 1)]).repeat(2)));
    }
    out.push(relator("(b' g d)^3", rot_cubed));
    out.push(relator("(b' d)^2", slide_squared));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelatorReport {
    pub extended: bool,
    pub total: usize,
    pub passed: usize,
    /// Labels of relators whose matrix is not the identity.
    pub failures: Vec<String>,
}

impl RelatorReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for RelatorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} relators map to identity", self.passed, self.total)?;
        if !self.extended {
            f.write_str(" (without ε)")?;
        }
        if !self.failures.is_empty() {
            write!(f, "; failing: {}", self.failures.join(", "))?;
        }
        Ok(())
    }
}

fn check_relators(extended: bool) -> RelatorReport {
    let rels = relators(extended);
    let failures: Vec<String> = rels
        .iter()
        .filter(|r| evaluate(&r.word).ok() != Some(Matrix4::IDENTITY))
        .map(|r| r.label.clone())
        .collect();
    RelatorReport {
        extended,
        total: rels.len(),
        passed: rels.len() - failures.len(),
        failures,
    }
}

/// Evaluates every relator of both presentations. Returns the plain report
/// first, then the extended one.
pub fn verify_relators() -> (RelatorReport, RelatorReport) {
    (check_relators(false), check_relators(true))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedWord {
    /// The rotation `β⁻¹ γ δ`, of order 3.
    DeltaRot,
    /// `β²`, the twist about the reducing curve; its image is trivial.
    BeltTwist,
    /// `α β γ δ⁻¹ γ δ²`, the transporter of the first twisted-torus case.
    CaseG,
}

impl NamedWord {
    pub const ALL: [NamedWord; 3] = [NamedWord::DeltaRot, NamedWord::BeltTwist, NamedWord::CaseG];

    pub fn name(self) -> &'static str {
        match self {
            NamedWord::DeltaRot => "delta_rot",
            NamedWord::BeltTwist => "belt_twist",
            NamedWord::CaseG => "case_g",
        }
    }

    pub fn word(self) -> GoeritzWord {
        use GoeritzGenerator::*;
        match self {
            NamedWord::DeltaRot => word_of(&[(Beta, -1), (Gamma, 1), (Delta, 1)]),
            NamedWord::BeltTwist => GoeritzWord::power(Beta, 2),
            NamedWord::CaseG => word_of(&[
                (Alpha, 1),
                (Beta, 1),
                (Gamma, 1),
                (Delta, -1),
                (Gamma, 1),
                (Delta, 2),
            ]),
        }
    }
}

impl FromStr for NamedWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedWord::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

pub fn named_word(name: &str) -> Result<GoeritzWord> {
    name.parse::<NamedWord>().map(NamedWord::word)
}
