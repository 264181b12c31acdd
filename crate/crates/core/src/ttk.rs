//! Twisted torus knots on the genus-2 surface: homology classes, the
//! parametric families, strand sequences at the switch, and the switch words
//! in the two handlebody groups.
//!
//! For coprime `1 ≤ m < q` write `q = d m + r`. The wrap counts are
//! `z_n = ⌈(n + 1) r / m⌉` for `-1 ≤ n ≤ m - 1` and the runs are
//! `p_n = d + z_n - z_{n-1}`. The dual sequences are the same construction
//! for `(q, q - m)`.

use serde::Serialize;

use crate::arith::{add, gcd_u64, mul, neg, sub};
use crate::equivalence::{decide_extended, homotopy_obstruction, ExtendedVerdict, HomotopyResult, Outcome};
use crate::error::{Error, Result};
use crate::freegroup::{
    abelianize, conjugate_equal, cyclic_reduce, free_reduce, is_cyclic_palindrome, Alphabet, FreeWord, Letter,
};
use crate::homology::{epsilon_star, split_product, Block2Matrix, HomologyVector};
use crate::words::{evaluate, goeritz_matrix4, NamedWord};

/// Parameters of `K(p, q, r, n)`: the `(p, q)` torus knot with `n` full
/// twists on `r` adjacent strands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub struct TtkParams {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub n: i64,
}

/// Homology class `(q, n r, p, r)`.
pub fn ttk_homology(params: &TtkParams) -> Result<HomologyVector> {
    Ok(HomologyVector::new(params.q, mul(params.n, params.r)?, params.p, params.r))
}

fn coprime(a: i64, b: i64) -> bool {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs()) == 1
}

fn precondition(msg: String) -> Error {
    Error::Precondition(msg)
}

/// Class of `K(r², q, r, -q)`, which has split product zero.
pub fn family_zero_slope(r: i64, q: i64) -> Result<HomologyVector> {
    if r < 2 {
        return Err(precondition(format!("zero-slope family needs r ≥ 2, got r = {r}")));
    }
    let r2 = mul(r, r)?;
    if q < 1 || q >= r2 {
        return Err(precondition(format!("zero-slope family needs 1 ≤ q < r², got q = {q}, r = {r}")));
    }
    if !coprime(r, q) {
        return Err(precondition(format!("zero-slope family needs gcd(r, q) = 1, got ({r}, {q})")));
    }
    if (q, r) == (1, 2) {
        return Err(precondition("zero-slope family excludes (q, r) = (1, 2), which is trivial".into()));
    }
    ttk_homology(&TtkParams {
        p: r2,
        q,
        r,
        n: neg(q)?,
    })
}

/// All `(r, q)` accepted by [`family_zero_slope`] with `r ≤ r_max`.
pub fn zero_slope_parameters(r_max: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for r in 2..=r_max {
        for q in 1..r * r {
            if coprime(r, q) && (q, r) != (1, 2) {
                out.push((r, q));
            }
        }
    }
    out
}

fn check_qm(q: i64, m: i64) -> Result<()> {
    if q <= 2 {
        return Err(precondition(format!("need q > 2, got q = {q}")));
    }
    if m < 1 || m >= q {
        return Err(precondition(format!("need 1 ≤ m < q, got m = {m}, q = {q}")));
    }
    if !coprime(q, m) {
        return Err(precondition(format!("need gcd(q, m) = 1, got ({q}, {m})")));
    }
    Ok(())
}

/// `K(kq + m, q, m, -1)` and `K(kq + q - m, q, q - m, -1)`.
pub fn family_pair(k: i64, q: i64, m: i64) -> Result<(HomologyVector, HomologyVector)> {
    check_qm(q, m)?;
    if k < 0 {
        return Err(precondition(format!("need k ≥ 0, got k = {k}")));
    }
    let kq = mul(k, q)?;
    let qm = sub(q, m)?;
    let first = ttk_homology(&TtkParams {
        p: add(kq, m)?,
        q,
        r: m,
        n: -1,
    })?;
    let second = ttk_homology(&TtkParams {
        p: add(kq, qm)?,
        q,
        r: qm,
        n: -1,
    })?;
    Ok((first, second))
}

/// Every coprime `(q, m)` with `2 < q ≤ q_max` and `1 ≤ m < q`.
pub fn admissible_pairs(q_max: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for q in 3..=q_max {
        for m in 1..q {
            if coprime(q, m) {
                out.push((q, m));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrandSequences {
    pub q: i64,
    pub m: i64,
    pub quotient: i64,
    pub remainder: i64,
    /// `z_{-1}, z_0, …, z_{m-1}`.
    pub wraps: Vec<i64>,
    /// `p_0, …, p_{m-1}`.
    pub runs: Vec<i64>,
    pub dual_m: i64,
    pub dual_quotient: i64,
    pub dual_remainder: i64,
    pub dual_wraps: Vec<i64>,
    pub dual_runs: Vec<i64>,
}

impl StrandSequences {
    /// `z_n` for `-1 ≤ n ≤ m - 1`.
    pub fn wrap(&self, n: i64) -> i64 {
        self.wraps[(n + 1) as usize]
    }
}

fn wraps_and_runs(q: i64, m: i64) -> (i64, i64, Vec<i64>, Vec<i64>) {
    let (d, r) = (q / m, q % m);
    let wraps: Vec<i64> = (-1..m).map(|n| ((n + 1) * r + m - 1).div_euclid(m)).collect();
    let runs: Vec<i64> = (0..m as usize).map(|i| d + wraps[i + 1] - wraps[i]).collect();
    (d, r, wraps, runs)
}

pub fn strand_sequences(q: i64, m: i64) -> Result<StrandSequences> {
    if m < 1 || m >= q || !coprime(q, m) {
        return Err(precondition(format!("strand sequences need coprime 1 ≤ m < q, got ({q}, {m})")));
    }
    if q > 1 << 20 {
        return Err(precondition(format!("q = {q} is too large for explicit sequences")));
    }
    let (quotient, remainder, wraps, runs) = wraps_and_runs(q, m);
    let dual_m = q - m;
    let (dual_quotient, dual_remainder, dual_wraps, dual_runs) = wraps_and_runs(q, dual_m);
    Ok(StrandSequences {
        q,
        m,
        quotient,
        remainder,
        wraps,
        runs,
        dual_m,
        dual_quotient,
        dual_remainder,
        dual_wraps,
        dual_runs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwitchWordPair {
    /// Words in `{A, X}`: the image `g(K1)` and the swapped second curve.
    pub inner: (FreeWord, FreeWord),
    /// Words in `{B, Y}`, same order.
    pub outer: (FreeWord, FreeWord),
    pub chi1: Vec<i64>,
    pub chi2: Vec<i64>,
    pub upsilon1: Vec<i64>,
    pub upsilon2: Vec<i64>,
    /// Cyclic run readings starting at the first separator letter.
    pub inner_runs_g: Vec<i64>,
    pub inner_runs_eps: Vec<i64>,
    pub outer_runs_g: Vec<i64>,
    pub outer_runs_eps: Vec<i64>,
}

const A: Letter = Letter::first();
const X: Letter = Letter::second();
const B: Letter = Letter::first();
const Y: Letter = Letter::second();

/// `A (A' X)^{p_{m-1}} ⋯ A (A' X)^{p_0}`, unreduced.
pub fn inner_g_word_raw(runs: &[i64]) -> FreeWord {
    let mut w = FreeWord::empty(Alphabet::Inner);
    for &p in runs.iter().rev() {
        w.push(A);
        for _ in 0..p {
            w.push(A.inv());
            w.push(X);
        }
    }
    w
}

/// `A' X^{p̃_{L-1}} ⋯ A' X^{p̃_0}`.
pub fn inner_eps_word(dual_runs: &[i64]) -> FreeWord {
    let mut w = FreeWord::empty(Alphabet::Inner);
    for &p in dual_runs.iter().rev() {
        w.push(A.inv());
        w.push_power(X, p);
    }
    w
}

/// `Y' B' (B Y²)^{p_{m-1}} ⋯ Y' B' (B Y²)^{p_0}`, unreduced.
pub fn outer_g_word_raw(runs: &[i64]) -> FreeWord {
    let mut w = FreeWord::empty(Alphabet::Outer);
    for &p in runs.iter().rev() {
        w.push(Y.inv());
        w.push(B.inv());
        for _ in 0..p {
            w.push(B);
            w.push(Y);
            w.push(Y);
        }
    }
    w
}

/// `Y B Y^{p̃_{L-1}} ⋯ Y B Y^{p̃_0}`.
pub fn outer_eps_word(dual_runs: &[i64]) -> FreeWord {
    let mut w = FreeWord::empty(Alphabet::Outer);
    for &p in dual_runs.iter().rev() {
        w.push(Y);
        w.push(B);
        w.push_power(Y, p);
    }
    w
}

/// Reads a word of the form `(run^e sep)*` into the exponents `e`.
/// `None` if the word has any other shape.
pub fn runs_before_separators(w: &FreeWord, run: Letter, sep: Letter) -> Option<Vec<i64>> {
    let mut out = Vec::new();
    let mut count = 0i64;
    for &l in w.letters() {
        if l == run {
            count += 1;
        } else if l == sep {
            out.push(count);
            count = 0;
        } else {
            return None;
        }
    }
    (count == 0).then_some(out)
}

/// Cyclically reduces, rotates to the first `sep`, and reads the powers of
/// `run` following each `sep` (wrapping around).
pub fn block_runs(w: &FreeWord, sep: Letter, run: Letter) -> Option<Vec<i64>> {
    let c = cyclic_reduce(w);
    let start = c.word().letters().iter().position(|&l| l == sep)?;
    let rotated = c.word().rotate_left(start);
    let mut out: Vec<i64> = Vec::new();
    for &l in rotated.letters() {
        if l == sep {
            out.push(0);
        } else if l == run {
            *out.last_mut()? += 1;
        } else {
            return None;
        }
    }
    Some(out)
}

/// The four switch words for `(q, m)` and their standardized run sequences.
///
/// Standardization: for the `g(K1)` words the trailing `X` (inner) or `Y²`
/// (outer) is moved to the front; for the swapped words the leading `A'`
/// (inner) or `Y B` (outer) is moved to the end. Each result has the form
/// `(run^e sep)*` and the exponents, read left to right, are the sequence.
pub fn switch_words(q: i64, m: i64) -> Result<SwitchWordPair> {
    check_qm(q, m)?;
    let seq = strand_sequences(q, m)?;
    let inner_g = free_reduce(&inner_g_word_raw(&seq.runs));
    let inner_e = inner_eps_word(&seq.dual_runs);
    let outer_g = free_reduce(&outer_g_word_raw(&seq.runs));
    let outer_e = outer_eps_word(&seq.dual_runs);

    let shape = |what: &str| precondition(format!("{what} word for ({q}, {m}) has an unexpected shape"));
    let chi1 = runs_before_separators(&inner_g.rotate_right(1), X, A.inv()).ok_or_else(|| shape("inner g"))?;
    let chi2 = runs_before_separators(&inner_e.rotate_left(1), X, A.inv()).ok_or_else(|| shape("inner ε"))?;
    let upsilon1 = runs_before_separators(&outer_g.rotate_right(2), Y, B).ok_or_else(|| shape("outer g"))?;
    let upsilon2 = runs_before_separators(&outer_e.rotate_left(2), Y, B).ok_or_else(|| shape("outer ε"))?;

    let inner_runs_g = block_runs(&inner_g, A.inv(), X).ok_or_else(|| shape("inner g"))?;
    let inner_runs_eps = block_runs(&inner_e, A.inv(), X).ok_or_else(|| shape("inner ε"))?;
    let outer_runs_g = block_runs(&outer_g, B, Y).ok_or_else(|| shape("outer g"))?;
    let outer_runs_eps = block_runs(&outer_e, B, Y).ok_or_else(|| shape("outer ε"))?;

    Ok(SwitchWordPair {
        inner: (inner_g, inner_e),
        outer: (outer_g, outer_e),
        chi1,
        chi2,
        upsilon1,
        upsilon2,
        inner_runs_g,
        inner_runs_eps,
        outer_runs_g,
        outer_runs_eps,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseCheck {
    pub tag: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub q: i64,
    pub m: i64,
    pub first: HomologyVector,
    pub second: HomologyVector,
    pub verdict: ExtendedVerdict,
    pub sequences: StrandSequences,
    pub words: SwitchWordPair,
    pub homotopy: HomotopyResult,
    pub checks: Vec<CaseCheck>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Checks(Vec<CaseCheck>);

impl Checks {
    fn add(&mut self, tag: &'static str, passed: bool, detail: impl FnOnce() -> String) {
        let detail = (!passed).then(detail);
        self.0.push(CaseCheck { tag, passed, detail });
    }
}

fn endpoint_identities(runs: &[i64], wraps: &[i64], quotient: i64) -> bool {
    let m = runs.len();
    if m == 1 {
        return wraps[0] == 0;
    }
    wraps[0] == 0 && wraps[1] == 1 && runs[0] == quotient + 1 && runs[m - 1] == quotient
}

fn near_palindrome(runs: &[i64]) -> bool {
    let m = runs.len();
    (1..m.saturating_sub(1)).all(|n| runs[n] == runs[m - 1 - n])
}

/// Positions of the 2's in the long sequence predicted from the short one,
/// and whether the short one is recovered from the gaps between them.
fn two_positions(short: &[i64], long: &[i64], q: i64) -> (bool, bool) {
    let mm = short.len();
    let twos: Vec<i64> = long
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == 2)
        .map(|(i, _)| i as i64)
        .collect();
    let mut expected = vec![0i64];
    let mut acc = 0i64;
    for (j, &p) in short.iter().enumerate().take(mm.saturating_sub(1)) {
        acc += p;
        expected.push(acc - (j as i64 + 2));
    }
    let positions = twos == expected;
    let reconstruction = positions
        && short[0] == 1 + (q - mm as i64) - twos[mm - 1]
        && (0..mm - 1).all(|i| short[mm - 1 - i] == 1 + twos[i + 1] - twos[i]);
    (positions, reconstruction)
}

/// End-to-end check of the `k = 1` family at `(q, m)`. Every sub-check runs;
/// failures are collected in the report rather than returned as errors.
pub fn verify_case(q: i64, m: i64) -> Result<CaseReport> {
    check_qm(q, m)?;
    let (k1, k2) = family_pair(1, q, m)?;
    let verdict = decide_extended(&k1, &k2)?;
    let seq = strand_sequences(q, m)?;
    let words = switch_words(q, m)?;
    let mut c = Checks(Vec::new());

    let sp = sub(add(mul(q, q)?, mul(q, m)?)?, mul(m, m)?)?;
    c.add(
        "homology.split_product",
        split_product(&k1)? == sp && split_product(&k2)? == sp,
        || format!("split products {} and {}, expected {sp}", split_product(&k1).unwrap_or(0), split_product(&k2).unwrap_or(0)),
    );
    c.add("decide.plain_not_equivalent", verdict.plain.outcome == Outcome::NotEquivalent, || {
        format!("plain side was {:?}", verdict.plain.outcome)
    });
    let case_block = Block2Matrix::new(1, 1, 2, 1);
    let eps = &verdict.epsilon;
    let unique = eps.outcome == Outcome::Equivalent
        && eps.witnesses.len() == 1
        && eps.witnesses[0].d == -1
        && eps.witnesses[0].block == case_block
        && eps.witnesses[0].certified;
    c.add("decide.epsilon_unique_block", unique, || {
        format!(
            "swapped side {:?} with witnesses {:?}",
            eps.outcome,
            eps.witnesses.iter().map(|w| (w.d, w.block)).collect::<Vec<_>>()
        )
    });
    let case_matrix = evaluate(&NamedWord::CaseG.word())?;
    c.add("case_word", case_matrix == goeritz_matrix4(case_block)? && case_matrix.apply(&k1)? == epsilon_star(&k2), || {
        "case word does not evaluate to the witness block".into()
    });

    let both = [
        (&seq.runs, &seq.wraps, seq.quotient),
        (&seq.dual_runs, &seq.dual_wraps, seq.dual_quotient),
    ];
    c.add("strand.sums", both.iter().all(|(r, _, _)| r.iter().sum::<i64>() == q), || {
        format!("runs {:?} and {:?} do not sum to {q}", seq.runs, seq.dual_runs)
    });
    c.add(
        "strand.values",
        both.iter().all(|(r, _, d)| r.iter().all(|v| *v == *d || *v == *d + 1)),
        || format!("runs {:?} / {:?} leave {{d, d+1}}", seq.runs, seq.dual_runs),
    );
    c.add(
        "strand.endpoints",
        both.iter().all(|(r, z, d)| endpoint_identities(r, z, *d)),
        || format!("endpoint identities fail for {:?} / {:?}", seq.runs, seq.dual_runs),
    );
    c.add(
        "strand.near_palindrome",
        both.iter().all(|(r, _, _)| near_palindrome(r)),
        || format!("interior of {:?} / {:?} is not a palindrome", seq.runs, seq.dual_runs),
    );
    let (short, long) = if 2 * m < q {
        (&seq.runs, &seq.dual_runs)
    } else {
        (&seq.dual_runs, &seq.runs)
    };
    let (positions, reconstruction) = two_positions(short, long, q);
    c.add("strand.two_positions", positions, || {
        format!("2's of {long:?} are not where {short:?} predicts")
    });
    c.add("strand.reconstruction", reconstruction, || {
        format!("{short:?} is not recovered from the 2's of {long:?}")
    });

    let plus_one: Vec<i64> = seq.dual_runs.iter().map(|p| p + 1).collect();
    let rev = |v: &[i64]| v.iter().rev().copied().collect::<Vec<_>>();
    c.add("runs.chi1", words.chi1 == seq.dual_runs, || {
        format!("chi1 {:?} vs dual runs {:?}", words.chi1, seq.dual_runs)
    });
    c.add("runs.chi2", words.chi2 == rev(&seq.dual_runs), || {
        format!("chi2 {:?} vs reversed dual runs", words.chi2)
    });
    c.add("runs.upsilon1", words.upsilon1 == plus_one, || {
        format!("upsilon1 {:?} vs {:?}", words.upsilon1, plus_one)
    });
    c.add("runs.upsilon2", words.upsilon2 == rev(&plus_one), || {
        format!("upsilon2 {:?} vs reversed {:?}", words.upsilon2, plus_one)
    });

    let (ig, ie) = (cyclic_reduce(&words.inner.0), cyclic_reduce(&words.inner.1));
    let (og, oe) = (cyclic_reduce(&words.outer.0), cyclic_reduce(&words.outer.1));
    c.add("conjugacy.inner", conjugate_equal(&ig, &ie), || {
        format!("{} and {} are not conjugate", words.inner.0, words.inner.1)
    });
    c.add("conjugacy.outer", conjugate_equal(&og, &oe), || {
        format!("{} and {} are not conjugate", words.outer.0, words.outer.1)
    });
    c.add(
        "palindrome.inner",
        is_cyclic_palindrome(&words.inner.0) && is_cyclic_palindrome(&words.inner.1),
        || "an inner word is not a cyclic palindrome".into(),
    );
    c.add(
        "palindrome.outer",
        is_cyclic_palindrome(&words.outer.0) && is_cyclic_palindrome(&words.outer.1),
        || "an outer word is not a cyclic palindrome".into(),
    );

    let target = epsilon_star(&k2);
    let inner_ab = (target.b, target.y);
    let outer_ab = (target.a, target.x);
    c.add(
        "abelianization.inner",
        abelianize(&words.inner.0) == inner_ab && abelianize(&words.inner.1) == inner_ab,
        || format!("inner words abelianize to {:?} / {:?}, expected {inner_ab:?}", abelianize(&words.inner.0), abelianize(&words.inner.1)),
    );
    c.add(
        "abelianization.outer",
        abelianize(&words.outer.0) == outer_ab && abelianize(&words.outer.1) == outer_ab,
        || format!("outer words abelianize to {:?} / {:?}, expected {outer_ab:?}", abelianize(&words.outer.0), abelianize(&words.outer.1)),
    );

    let homotopy = homotopy_obstruction(&ig, &og, &ie, &oe);
    c.add("homotopy.no_obstruction", homotopy == HomotopyResult::NoObstruction, || {
        format!("{homotopy:?}")
    });

    Ok(CaseReport {
        q,
        m,
        first: k1,
        second: k2,
        verdict,
        sequences: seq,
        words,
        homotopy,
        checks: c.0,
    })
}
