//! Deciding homological Goeritz equivalence.
//!
//! A Goeritz-form matrix `diag(C, C^{-T})` with `C = [[s, t], [u, v]]` and
//! `det C = d` carries `k = (a, x, b, y)` to `k' = (a', x', b', y')` exactly
//! when
//!
//! ```text
//! s a + t x = a'        u a + v x = x'
//! s y - t b = d y'      v b - u y = d b'
//! ```
//!
//! The `(s, t)` equations have determinant `-(ab + xy)` and the `(u, v)`
//! equations `ab + xy`, so for nonzero split product there is one rational
//! candidate per sign `d`. For split product zero both pairs of equations are
//! rank one and the solutions form a two-parameter family, handled by
//! [`zero_slope_screen`].
//!
//! A homological equivalence says nothing about isotopy: two curves with
//! equivalent classes may still differ by a sequence of twists about
//! reducing spheres, which act trivially on homology.

use serde::{Deserialize, Serialize};

use crate::arith::{add, det2, ext_gcd, mul, neg, solve_linear_diophantine, sub};
use crate::error::{Error, Result};
use crate::factorization::factor_block;
use crate::freegroup::{abelianize, conjugate_equal, CyclicWord};
use crate::homology::{epsilon_star, gcd_pair, split_product, Block2Matrix, HomologyVector};
use crate::words::{evaluate, generator_matrix, goeritz_matrix4, GoeritzGenerator, GoeritzWord, Matrix4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// gcds of the `(a, x)` blocks differ.
    GcdFirst,
    /// gcds of the `(b, y)` blocks differ.
    GcdSecond,
    /// Split products differ.
    Slope,
    /// No integral transporter with determinant `+1`.
    DivPlus,
    /// No integral transporter with determinant `-1`.
    DivMinus,
    /// A block of the target is zero.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Equivalent,
    NotEquivalent,
    Undecidable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub d: i64,
    /// The Goeritz block `C` acting before any handlebody swap.
    pub block: Block2Matrix,
    pub word: GoeritzWord,
    /// Matrix of `word`; carries the source vector to the target.
    pub matrix: Matrix4,
    pub swaps_handlebodies: bool,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witnesses: Vec<Witness>,
    pub failed_conditions: Vec<Condition>,
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        self.outcome == Outcome::Equivalent
    }

    fn not_equivalent(mut failed: Vec<Condition>) -> Self {
        failed.sort();
        failed.dedup();
        Verdict {
            outcome: Outcome::NotEquivalent,
            witnesses: Vec::new(),
            failed_conditions: failed,
        }
    }
}

fn check_sign(d: i64) -> Result<()> {
    if d != 1 && d != -1 {
        return Err(Error::Precondition(format!("determinant sign must be ±1, got {d}")));
    }
    Ok(())
}

/// The rational solution `numerators / divisor` of the transporter equations
/// for one determinant sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CandidateBlock {
    pub d: i64,
    pub numerators: Block2Matrix,
    pub divisor: i64,
    pub integral: bool,
    pub block: Option<Block2Matrix>,
}

/// Candidate for `det = d` when `ab + xy ≠ 0`:
///
/// ```text
/// s = (x y' d + a' b) / S     t = (-a y' d + a' y) / S
/// u = (-b' x d + b x') / S    v = (a b' d + x' y) / S
/// ```
pub fn candidate_block(k: &HomologyVector, k2: &HomologyVector, d: i64) -> Result<CandidateBlock> {
    check_sign(d)?;
    let divisor = split_product(k)?;
    if divisor == 0 {
        return Err(Error::ZeroSlope);
    }
    let (a, x, b, y) = (k.a, k.x, k.b, k.y);
    let (a2, x2, b2, y2) = (k2.a, k2.x, k2.b, k2.y);
    let numerators = Block2Matrix::new(
        add(mul(mul(x, y2)?, d)?, mul(a2, b)?)?,
        add(mul(mul(neg(a)?, y2)?, d)?, mul(a2, y)?)?,
        add(mul(mul(neg(b2)?, x)?, d)?, mul(b, x2)?)?,
        add(mul(mul(a, b2)?, d)?, mul(x2, y)?)?,
    );
    let entries = [numerators.s, numerators.t, numerators.u, numerators.v];
    let integral = entries.iter().all(|&n| (n as i128) % (divisor as i128) == 0);
    let block = if integral {
        let q = |n: i64| i64::try_from(n as i128 / divisor as i128).map_err(|_| Error::Overflow("division"));
        Some(Block2Matrix::new(q(entries[0])?, q(entries[1])?, q(entries[2])?, q(entries[3])?))
    } else {
        None
    };
    Ok(CandidateBlock {
        d,
        numerators,
        divisor,
        integral,
        block,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Rational,
    Integral,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SystemStatus {
    /// No solution over the given domain (and, for `integral`, a rational one exists).
    Inconsistent { over: Domain },
    Unique { candidate: CandidateBlock },
    /// All integer solutions `particular + Σ λ_i basis_i`, entries ordered `(s, t, u, v)`.
    Affine {
        rank_deficiency: usize,
        particular: [i64; 4],
        basis: Vec<[i64; 4]>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearSystemSolution {
    pub d: i64,
    #[serde(flatten)]
    pub status: SystemStatus,
}

enum Line {
    Inconsistent(Domain),
    Solutions { particular: [i64; 2], direction: [i64; 2] },
}

/// Integer solutions of two equations `r1·z = c1`, `r2·z = c2` in two
/// unknowns whose coefficient rows span a line.
fn solve_rank_one(r1: [i64; 2], c1: i64, r2: [i64; 2], c2: i64) -> Result<Line> {
    let (pivot, cp, other, co) = if r1 != [0, 0] { (r1, c1, r2, c2) } else { (r2, c2, r1, c1) };
    if pivot == [0, 0] {
        return Err(Error::Precondition("transporter system with a zero coefficient matrix".into()));
    }
    let cross = |i: usize| other[i] as i128 * cp as i128 == pivot[i] as i128 * co as i128;
    if !(cross(0) && cross(1)) {
        return Ok(Line::Inconsistent(Domain::Rational));
    }
    let (g, e1, e2) = ext_gcd(pivot[0], pivot[1])?;
    if cp % g != 0 {
        return Ok(Line::Inconsistent(Domain::Integral));
    }
    let scale = cp / g;
    Ok(Line::Solutions {
        particular: [mul(e1, scale)?, mul(e2, scale)?],
        direction: [pivot[1] / g, neg(pivot[0] / g)?],
    })
}

/// Solves the four transporter equations for `det C = d` over the integers.
pub fn transporter_system(k: &HomologyVector, k2: &HomologyVector, d: i64) -> Result<LinearSystemSolution> {
    check_sign(d)?;
    if k.is_zero() {
        return Err(Error::Precondition("source vector is zero".into()));
    }
    if split_product(k)? != 0 {
        let candidate = candidate_block(k, k2, d)?;
        return Ok(LinearSystemSolution {
            d,
            status: SystemStatus::Unique { candidate },
        });
    }
    let st = solve_rank_one([k.a, k.x], k2.a, [k.y, neg(k.b)?], mul(d, k2.y)?)?;
    let uv = solve_rank_one([k.a, k.x], k2.x, [neg(k.y)?, k.b], mul(d, k2.b)?)?;
    let status = match (st, uv) {
        (Line::Inconsistent(p), Line::Inconsistent(q)) => SystemStatus::Inconsistent {
            over: if p == Domain::Rational || q == Domain::Rational {
                Domain::Rational
            } else {
                Domain::Integral
            },
        },
        (Line::Inconsistent(over), _) | (_, Line::Inconsistent(over)) => SystemStatus::Inconsistent { over },
        (
            Line::Solutions { particular: p1, direction: n1 },
            Line::Solutions { particular: p2, direction: n2 },
        ) => SystemStatus::Affine {
            rank_deficiency: 2,
            particular: [p1[0], p1[1], p2[0], p2[1]],
            basis: vec![[n1[0], n1[1], 0, 0], [0, 0, n2[0], n2[1]]],
        },
    };
    Ok(LinearSystemSolution { d, status })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "determinant", rename_all = "snake_case")]
pub enum DeterminantResolution {
    /// An integer solution with `det = d`.
    Realizable { block: Block2Matrix, parameters: Vec<i64> },
    /// No integer solution has `det = d`.
    Unsatisfiable,
    /// The determinant condition is genuinely quadratic in the parameters.
    Unresolved,
}

fn block_of(v: [i64; 4]) -> Block2Matrix {
    Block2Matrix::new(v[0], v[1], v[2], v[3])
}

/// `det(P + Q)` expanded into the mixed terms `p.s q.v + q.s p.v - p.t q.u - q.t p.u`.
fn mixed_det(p: [i64; 4], q: [i64; 4]) -> Result<i64> {
    sub(add(mul(p[0], q[3])?, mul(q[0], p[3])?)?, add(mul(p[1], q[2])?, mul(q[1], p[2])?)?)
}

/// Looks for a solution of the system with determinant exactly `d`.
///
/// For an affine family `P + Σ λ_i N_i` the determinant is
/// `det P + Σ λ_i m(P, N_i) + Σ_{i<j} λ_i λ_j m(N_i, N_j) + Σ λ_i² det N_i`.
/// When every quadratic coefficient vanishes this is a linear Diophantine
/// equation and is solved exactly.
pub fn resolve_determinant(sol: &LinearSystemSolution) -> Result<DeterminantResolution> {
    match &sol.status {
        SystemStatus::Inconsistent { .. } => Ok(DeterminantResolution::Unsatisfiable),
        SystemStatus::Unique { candidate } => Ok(match candidate.block {
            Some(block) if block.det()? == sol.d => DeterminantResolution::Realizable {
                block,
                parameters: Vec::new(),
            },
            _ => DeterminantResolution::Unsatisfiable,
        }),
        SystemStatus::Affine { particular, basis, .. } => {
            let p = *particular;
            for (i, ni) in basis.iter().enumerate() {
                if block_of(*ni).det()? != 0 {
                    return Ok(DeterminantResolution::Unresolved);
                }
                for nj in &basis[i + 1..] {
                    if mixed_det(*ni, *nj)? != 0 {
                        return Ok(DeterminantResolution::Unresolved);
                    }
                }
            }
            let coeffs = basis.iter().map(|n| mixed_det(p, *n)).collect::<Result<Vec<_>>>()?;
            let rhs = sub(sol.d, block_of(p).det()?)?;
            let Some(lambda) = solve_linear_diophantine(&coeffs, rhs)? else {
                return Ok(DeterminantResolution::Unsatisfiable);
            };
            let mut v = p;
            for (l, n) in lambda.iter().zip(basis) {
                for (vi, ni) in v.iter_mut().zip(n) {
                    *vi = add(*vi, mul(*l, *ni)?)?;
                }
            }
            Ok(DeterminantResolution::Realizable {
                block: block_of(v),
                parameters: lambda,
            })
        }
    }
}

fn make_witness(
    k: &HomologyVector,
    target: &HomologyVector,
    block: Block2Matrix,
    d: i64,
    swap: bool,
) -> Result<Witness> {
    let f = factor_block(&block)?;
    let g = goeritz_matrix4(block)?;
    let (word, matrix) = if swap {
        (
            GoeritzWord::generator(GoeritzGenerator::Epsilon).concat(&f.word),
            generator_matrix(GoeritzGenerator::Epsilon).mul(&g)?,
        )
    } else {
        (f.word, g)
    };
    let certified = f.certified && evaluate(&word)? == matrix && matrix.apply(k)? == *target;
    Ok(Witness {
        d,
        block,
        word,
        matrix,
        swaps_handlebodies: swap,
        certified,
    })
}

fn side_conditions(k: &HomologyVector, target: &HomologyVector) -> Result<Vec<Condition>> {
    let mut failed = Vec::new();
    if target.first_block() == (0, 0) || target.second_block() == (0, 0) {
        failed.push(Condition::Degenerate);
    }
    if gcd_pair(k.a, k.x) != gcd_pair(target.a, target.x) {
        failed.push(Condition::GcdFirst);
    }
    if gcd_pair(k.b, k.y) != gcd_pair(target.b, target.y) {
        failed.push(Condition::GcdSecond);
    }
    if split_product(k)? != split_product(target)? {
        failed.push(Condition::Slope);
    }
    Ok(failed)
}

fn sign_condition(d: i64) -> Condition {
    if d == 1 {
        Condition::DivPlus
    } else {
        Condition::DivMinus
    }
}

fn decide_side(k: &HomologyVector, k2: &HomologyVector, swap: bool) -> Result<Verdict> {
    if split_product(k)? == 0 {
        return Err(Error::ZeroSlope);
    }
    let target = if swap { epsilon_star(k2) } else { *k2 };
    let failed = side_conditions(k, &target)?;
    if !failed.is_empty() {
        return Ok(Verdict::not_equivalent(failed));
    }
    let mut witnesses = Vec::new();
    let mut failed = Vec::new();
    for d in [1, -1] {
        let c = candidate_block(k, &target, d)?;
        match c.block {
            Some(block) if block.det()? == d => {
                let w = make_witness(k, k2, block, d, swap)?;
                if w.certified {
                    witnesses.push(w);
                } else {
                    failed.push(sign_condition(d));
                }
            }
            _ => failed.push(sign_condition(d)),
        }
    }
    if witnesses.is_empty() {
        return Ok(Verdict::not_equivalent(failed));
    }
    Ok(Verdict {
        outcome: Outcome::Equivalent,
        witnesses,
        failed_conditions: Vec::new(),
    })
}

/// Decides whether some Goeritz-form matrix carries `k` to `k2`. Requires
/// `ab + xy ≠ 0` for `k`. The gcd and slope conditions are all reported
/// when they fail; otherwise both determinant signs are tried.
pub fn decide_homological(k: &HomologyVector, k2: &HomologyVector) -> Result<Verdict> {
    decide_side(k, k2, false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtendedVerdict {
    pub plain: Verdict,
    /// Against `ε_* k2`; witness words end with ε applied last.
    pub epsilon: Verdict,
}

impl ExtendedVerdict {
    pub fn is_equivalent(&self) -> bool {
        self.plain.is_equivalent() || self.epsilon.is_equivalent()
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.plain.witnesses.iter().chain(&self.epsilon.witnesses)
    }
}

/// Both sides of the extended group: `k → k2` and `k → ε_* k2`.
pub fn decide_extended(k: &HomologyVector, k2: &HomologyVector) -> Result<ExtendedVerdict> {
    Ok(ExtendedVerdict {
        plain: decide_side(k, k2, false)?,
        epsilon: decide_side(k, k2, true)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouteSystem {
    pub solution: LinearSystemSolution,
    pub resolution: DeterminantResolution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScreenRoute {
    pub swaps_handlebodies: bool,
    pub target: HomologyVector,
    pub failed_conditions: Vec<Condition>,
    /// One entry per determinant sign; empty when the gcd screen already failed.
    pub systems: Vec<RouteSystem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScreenReport {
    pub verdict: Verdict,
    pub routes: Vec<ScreenRoute>,
}

/// Obstruction screen for two vectors of split product zero.
///
/// Each route (plain, and through ε) is first screened by the gcd conditions,
/// then the transporter system is solved for `d = ±1` and the determinant
/// condition resolved. The verdict is `NotEquivalent` only when every route is
/// obstructed. Any realizable transporter is listed as a witness and the
/// verdict is `Undecidable`: the screen never claims equivalence.
pub fn zero_slope_screen(k: &HomologyVector, k2: &HomologyVector) -> Result<ScreenReport> {
    let (s1, s2) = (split_product(k)?, split_product(k2)?);
    if s1 != 0 || s2 != 0 {
        return Err(Error::NonZeroSlope {
            source_slope: s1,
            target_slope: s2,
        });
    }
    k.require_nondegenerate()?;
    k2.require_nondegenerate()?;

    let mut routes = Vec::new();
    let mut witnesses = Vec::new();
    let mut unresolved = false;
    for swap in [false, true] {
        let target = if swap { epsilon_star(k2) } else { *k2 };
        let mut failed = Vec::new();
        if gcd_pair(k.a, k.x) != gcd_pair(target.a, target.x) {
            failed.push(Condition::GcdFirst);
        }
        if gcd_pair(k.b, k.y) != gcd_pair(target.b, target.y) {
            failed.push(Condition::GcdSecond);
        }
        let mut systems = Vec::new();
        if failed.is_empty() {
            for d in [1, -1] {
                let solution = transporter_system(k, &target, d)?;
                let resolution = resolve_determinant(&solution)?;
                match &resolution {
                    DeterminantResolution::Realizable { block, .. } => {
                        let w = make_witness(k, k2, *block, d, swap)?;
                        if w.certified {
                            witnesses.push(w);
                        } else {
                            unresolved = true;
                        }
                    }
                    DeterminantResolution::Unsatisfiable => failed.push(sign_condition(d)),
                    DeterminantResolution::Unresolved => unresolved = true,
                }
                systems.push(RouteSystem { solution, resolution });
            }
        }
        routes.push(ScreenRoute {
            swaps_handlebodies: swap,
            target,
            failed_conditions: failed,
            systems,
        });
    }

    let verdict = if !witnesses.is_empty() || unresolved {
        Verdict {
            outcome: Outcome::Undecidable,
            witnesses,
            failed_conditions: Vec::new(),
        }
    } else {
        Verdict::not_equivalent(routes.iter().flat_map(|r| r.failed_conditions.clone()).collect())
    };
    Ok(ScreenReport { verdict, routes })
}

/// Which free groups distinguish the two curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum HomotopyResult {
    Obstructed { inner: bool, outer: bool },
    /// Words are conjugate in both handlebodies. This does not imply equivalence.
    NoObstruction,
}

/// Compares the free homotopy classes of two curves in `H` (inner words)
/// and in `H'` (outer words).
pub fn homotopy_obstruction(
    inner_1: &CyclicWord,
    outer_1: &CyclicWord,
    inner_2: &CyclicWord,
    outer_2: &CyclicWord,
) -> HomotopyResult {
    let inner = !conjugate_equal(inner_1, inner_2);
    let outer = !conjugate_equal(outer_1, outer_2);
    if inner || outer {
        HomotopyResult::Obstructed { inner, outer }
    } else {
        HomotopyResult::NoObstruction
    }
}

/// Cheap necessary condition for conjugacy, exposed for diagnostics.
pub fn abelian_mismatch(w1: &CyclicWord, w2: &CyclicWord) -> bool {
    abelianize(w1.word()) != abelianize(w2.word())
}

/// `det` of a Goeritz witness block, checked for the expected sign.
pub fn witness_sign_matches(w: &Witness) -> bool {
    det2(w.block.s, w.block.v, w.block.t, w.block.u).ok() == Some(w.d)
}
