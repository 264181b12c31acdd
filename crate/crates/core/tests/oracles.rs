use goeritz_core::equivalence::{decide_homological, Outcome};
use goeritz_core::factorization::{factor_block, transporter_gl2};
use goeritz_core::freegroup::{conjugate_equal, cyclic_reduce, FreeWord};
use goeritz_core::{evaluate, Block2Matrix, GoeritzGenerator, GoeritzWord, HomologyVector};
use proptest::prelude::*;

type M2 = [[i64; 2]; 2];
type M4 = [[i64; 4]; 4];

fn unimodular_blocks(bound: i64) -> Vec<M2> {
    let r = -bound..=bound;
    let mut out = Vec::new();
    for s in r.clone() {
        for t in r.clone() {
            for u in r.clone() {
                for v in r.clone() {
                    if (s * v - t * u).abs() == 1 {
                        out.push([[s, t], [u, v]]);
                    }
                }
            }
        }
    }
    out
}

fn goeritz_of(c: M2) -> M4 {
    let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    // C^{-T} for det ±1
    let d = [[c[1][1] * det, -c[1][0] * det], [-c[0][1] * det, c[0][0] * det]];
    let mut m = [[0; 4]; 4];
    m[0][0] = c[0][0];
    m[0][1] = c[0][1];
    m[1][0] = c[1][0];
    m[1][1] = c[1][1];
    m[2][2] = d[0][0];
    m[2][3] = d[0][1];
    m[3][2] = d[1][0];
    m[3][3] = d[1][1];
    m
}

fn mat_vec(m: &M4, k: [i64; 4]) -> [i64; 4] {
    let mut out = [0; 4];
    for i in 0..4 {
        out[i] = (0..4).map(|j| m[i][j] * k[j]).sum();
    }
    out
}

fn mat_mul(a: &M4, b: &M4) -> M4 {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|l| a[i][l] * b[l][j]).sum();
        }
    }
    out
}

fn gen_table(g: GoeritzGenerator, inverse: bool) -> M4 {
    use GoeritzGenerator::*;
    match (g, inverse) {
        (Alpha, _) => [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]],
        (Beta, _) => [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]],
        (Gamma, _) => [[0, -1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]],
        (Delta, false) => [[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, -1], [0, 0, 0, 1]],
        (Delta, true) => [[1, 0, 0, 0], [-1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]],
        (Epsilon, _) => [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
    }
}

fn v(k: [i64; 4]) -> HomologyVector {
    HomologyVector::new(k[0], k[1], k[2], k[3])
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn gl2_transporter_exists_exactly_when_brute_force_finds_one() {
    let blocks = unimodular_blocks(3);
    for p in -3..=3 {
        for q in -3..=3 {
            for p2 in -3..=3 {
                for q2 in -3..=3 {
                    let brute = blocks
                        .iter()
                        .any(|c| c[0][0] * p + c[0][1] * q == p2 && c[1][0] * p + c[1][1] * q == q2);
                    let found = match transporter_gl2((p, q), (p2, q2)) {
                        Ok(found) => found,
                        Err(_) => {
                            assert!((p, q) == (0, 0) || (p2, q2) == (0, 0), "unexpected error at {:?}", (p, q));
                            continue;
                        }
                    };
                    if brute {
                        assert!(found.is_some(), "missed {:?} -> {:?}", (p, q), (p2, q2));
                    }
                    if let Some(m) = found {
                        assert!(m.is_unimodular());
                        assert_eq!(m.apply((p, q)).unwrap(), (p2, q2));
                        assert_eq!(gcd(p, q), gcd(p2, q2));
                    } else {
                        assert_ne!(gcd(p, q), gcd(p2, q2));
                    }
                }
            }
        }
    }
}

#[test]
fn decision_agrees_with_bounded_block_search() {
    let blocks = unimodular_blocks(2);
    let mut vectors = Vec::new();
    for a in -2..=2i64 {
        for x in -2..=2i64 {
            for b in -2..=2i64 {
                for y in -2..=2i64 {
                    if a * b + x * y != 0 && (a, x) != (0, 0) && (b, y) != (0, 0) {
                        vectors.push([a, x, b, y]);
                    }
                }
            }
        }
    }
    for k in vectors.iter().step_by(7) {
        for c in blocks.iter().step_by(5) {
            let k2 = mat_vec(&goeritz_of(*c), *k);
            let verdict = decide_homological(&v(*k), &v(k2)).unwrap();
            assert_eq!(verdict.outcome, Outcome::Equivalent, "{k:?} -> {k2:?}");
            for w in &verdict.witnesses {
                assert!(w.certified);
                let b = w.block;
                let m = goeritz_of([[b.s, b.t], [b.u, b.v]]);
                assert_eq!(mat_vec(&m, *k), k2);
            }
        }
    }
}

#[test]
fn negative_verdicts_have_no_small_witness() {
    let blocks: Vec<M4> = unimodular_blocks(4).into_iter().map(goeritz_of).collect();
    let samples = [
        ([1, 2, 3, 1], [1, 1, 3, 2]),
        ([2, 1, 1, 1], [1, 2, 1, 1]),
        ([3, 1, 1, 2], [1, 3, 2, 1]),
        ([1, 1, 2, 3], [2, 3, 1, 1]),
        ([2, 3, 1, 1], [1, 1, 2, 3]),
        ([1, 0, 5, 2], [1, 0, 3, 4]),
    ];
    for (k, k2) in samples {
        let verdict = decide_homological(&v(k), &v(k2)).unwrap();
        let brute = blocks.iter().any(|m| mat_vec(m, k) == k2);
        if verdict.outcome == Outcome::NotEquivalent {
            assert!(!brute, "{k:?} -> {k2:?} has a small witness");
        }
        if brute {
            assert_eq!(verdict.outcome, Outcome::Equivalent);
        }
    }
}

fn word_strategy() -> impl Strategy<Value = Vec<(GoeritzGenerator, bool)>> {
    let gens = prop_oneof![
        Just(GoeritzGenerator::Alpha),
        Just(GoeritzGenerator::Beta),
        Just(GoeritzGenerator::Gamma),
        Just(GoeritzGenerator::Delta),
        Just(GoeritzGenerator::Epsilon),
    ];
    prop::collection::vec((gens, any::<bool>()), 0..16)
}

proptest! {
    #[test]
    fn evaluation_matches_naive_product(letters in word_strategy()) {
        let mut word = GoeritzWord::identity();
        let mut expected: M4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        for &(g, inv) in &letters {
            let inv = inv && g == GoeritzGenerator::Delta;
            word.push(g, if inv { -1 } else { 1 });
            expected = mat_mul(&expected, &gen_table(g, inv));
        }
        prop_assert_eq!(evaluate(&word).unwrap().0, expected);
    }

    #[test]
    fn factorization_reproduces_block(steps in prop::collection::vec((0u8..4, -4i64..=4), 0..10)) {
        let mut c: M2 = [[1, 0], [0, 1]];
        for (kind, n) in steps {
            let e: M2 = match kind {
                0 => [[1, n], [0, 1]],
                1 => [[1, 0], [n, 1]],
                2 => [[0, 1], [1, 0]],
                _ => [[-1, 0], [0, 1]],
            };
            c = [
                [c[0][0] * e[0][0] + c[0][1] * e[1][0], c[0][0] * e[0][1] + c[0][1] * e[1][1]],
                [c[1][0] * e[0][0] + c[1][1] * e[1][0], c[1][0] * e[0][1] + c[1][1] * e[1][1]],
            ];
        }
        let f = factor_block(&Block2Matrix::new(c[0][0], c[0][1], c[1][0], c[1][1])).unwrap();
        prop_assert!(f.certified);
        prop_assert_eq!(evaluate(&f.word).unwrap().0, goeritz_of(c));
    }

    #[test]
    fn conjugacy_matches_rotation_search(
        w1 in prop::collection::vec(prop_oneof![Just(1i8), Just(-1), Just(2), Just(-2)], 0..8),
        w2 in prop::collection::vec(prop_oneof![Just(1i8), Just(-1), Just(2), Just(-2)], 0..8),
        u in prop::collection::vec(prop_oneof![Just(1i8), Just(-1), Just(2), Just(-2)], 0..4),
    ) {
        let mut conj = u.clone();
        conj.extend(&w1);
        conj.extend(u.iter().rev().map(|l| -l));
        let c1 = cyclic_reduce(&free_word(&w1));
        prop_assert!(conjugate_equal(&c1, &cyclic_reduce(&free_word(&conj))));
        prop_assert_eq!(
            conjugate_equal(&c1, &cyclic_reduce(&free_word(&w2))),
            naive_conjugate(&w1, &w2)
        );
    }
}

fn free_word(letters: &[i8]) -> FreeWord {
    if letters.is_empty() {
        return "1".parse().unwrap();
    }
    let text: Vec<&str> = letters
        .iter()
        .map(|l| match l {
            1 => "A",
            -1 => "A'",
            2 => "X",
            _ => "X'",
        })
        .collect();
    FreeWord::parse_in(goeritz_core::freegroup::Alphabet::Inner, &text.join(" ")).unwrap()
}

fn naive_cyclic(w: &[i8]) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::new();
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    while out.len() >= 2 && out[0] == -out[out.len() - 1] {
        out.pop();
        out.remove(0);
    }
    out
}

fn naive_conjugate(w1: &[i8], w2: &[i8]) -> bool {
    let (a, b) = (naive_cyclic(w1), naive_cyclic(w2));
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|r| a[r..].iter().chain(&a[..r]).eq(b.iter()))
}
