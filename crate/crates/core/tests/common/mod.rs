//! Strategies, independent oracles and property checks shared by the
//! integration suites.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use quandle_core::{Assignment, BraidWord, FiniteQuandle, Letter, Sign};

/// Quandles built from textbook formulas and run through `validate`:
/// `Q_N`, trivial, dihedral and Alexander quandles.
pub fn arb_quandle() -> impl Strategy<Value = FiniteQuandle> {
    prop_oneof![
        (3usize..=8).prop_map(|n| FiniteQuandle::q_n(n).unwrap()),
        (1usize..=6).prop_map(|n| table(n, |x, _| x)),
        (3usize..=9).prop_map(|n| table(n, |x, y| (2 * y + n - x) % n)),
        (3usize..=11, 1usize..11).prop_filter_map("t must be a unit mod n", |(n, t)| {
            let t = t % n;
            (t != 0 && gcd(t, n) == 1)
                .then(|| table(n, |x, y| (t * x + (n + 1 - t) * y) % n))
        }),
    ]
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Builds a quandle on `{1..=n}` from a 0-indexed operation.
pub fn table(n: usize, op: impl Fn(usize, usize) -> usize) -> FiniteQuandle {
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|y| op(x, y) + 1).collect())
        .collect();
    FiniteQuandle::validate(&rows).expect("formula quandle is valid")
}

pub fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((1..rank, any::<bool>()), 0..=max_len).prop_map(move |letters| {
        let letters = letters
            .into_iter()
            .map(|(index, positive)| Letter {
                index,
                sign: if positive { Sign::Positive } else { Sign::Negative },
            })
            .collect();
        BraidWord::new(rank, letters).unwrap()
    })
}

pub fn arb_assignment(rank: usize, order: usize) -> impl Strategy<Value = Assignment> {
    prop::collection::vec(1..=order, rank).prop_map(Assignment::new)
}

/// Word, assignment and quandle with rank in `2..=6`, length at most 30 and
/// the quandle drawn from `quandles`.
pub fn arb_case(
    quandles: impl Strategy<Value = FiniteQuandle>,
) -> impl Strategy<Value = (BraidWord, Assignment, FiniteQuandle)> {
    (2usize..=6, quandles).prop_flat_map(|(rank, q)| {
        let order = q.order();
        (arb_word(rank, 30), arb_assignment(rank, order), Just(q))
    })
}

pub fn arb_q_n() -> impl Strategy<Value = FiniteQuandle> {
    (3usize..=6).prop_map(|n| FiniteQuandle::q_n(n).unwrap())
}

/// `σ_i^e` as a word of the given rank.
pub fn power(rank: usize, i: usize, e: i64) -> BraidWord {
    let letter = if e >= 0 { Letter::pos(i) } else { Letter::neg(i) };
    BraidWord::new(rank, vec![letter; e.unsigned_abs() as usize]).unwrap()
}

/// An assignment `a` with `c(Q(b)(x_j)) = target[j]`, found by running the
/// inverse braid on the target.
pub fn preimage(b: &BraidWord, target: &[usize], q: &FiniteQuandle) -> Assignment {
    let values = b
        .inverse()
        .act_evaluated(&Assignment::new(target.to_vec()), q)
        .unwrap();
    Assignment::new(values)
}

// --- closed forms for Q_N, taken from the value tables for σ_i^{-m} -------

/// Values at positions `(i, i+1)` after prepending `σ_i^{-m}` to a braid whose
/// values there are `(1, N)`.
pub fn from_one_n(n: usize, m: usize) -> (usize, usize) {
    let k = m / 2;
    let s = k % (n - 1);
    if m.is_multiple_of(2) {
        (s + 1, n)
    } else {
        (n, if s == n - 2 { 1 } else { s + 2 })
    }
}

/// Same for starting values `(N, 1)`.
pub fn from_n_one(n: usize, m: usize) -> (usize, usize) {
    let k = m / 2;
    let s = k % (n - 1);
    if m.is_multiple_of(2) {
        (n, s + 1)
    } else {
        (s + 1, n)
    }
}

// --- property checks; each returns Err on a counterexample ----------------

pub fn fusion_equivalence(
    w: &BraidWord,
    a: &Assignment,
    q: &FiniteQuandle,
) -> Result<(), TestCaseError> {
    let fused = w.act_evaluated(a, q).unwrap();
    let via_terms = w.act().evaluate(a, q).unwrap();
    prop_assert_eq!(fused, via_terms);
    Ok(())
}

pub fn inverse_cancellation(
    w: &BraidWord,
    a: &Assignment,
    q: &FiniteQuandle,
) -> Result<(), TestCaseError> {
    let round = w.concat(&w.inverse()).act_evaluated(a, q).unwrap();
    prop_assert_eq!(&round[..], a.values());
    let round = w.inverse().concat(w).act_evaluated(a, q).unwrap();
    prop_assert_eq!(&round[..], a.values());
    Ok(())
}

/// `s_i s_j s_i = s_j s_i s_j` for `|i-j| = 1` and `s_i s_j = s_j s_i` for
/// `|i-j| > 1`, inserted in the middle of a random word, with random signs
/// applied consistently to both sides via conjugation-free forms.
pub fn braid_relations(
    prefix: &BraidWord,
    suffix: &BraidWord,
    i: usize,
    j: usize,
    a: &Assignment,
    q: &FiniteQuandle,
) -> Result<(), TestCaseError> {
    let rank = prefix.rank();
    let word = |letters: Vec<Letter>| {
        prefix
            .concat(&BraidWord::new(rank, letters).unwrap())
            .concat(suffix)
    };
    let (si, sj) = (Letter::pos(i), Letter::pos(j));
    let (lhs, rhs) = if i.abs_diff(j) == 1 {
        (word(vec![si, sj, si]), word(vec![sj, si, sj]))
    } else if i != j {
        (word(vec![si, sj]), word(vec![sj, si]))
    } else {
        // σ_i σ_i^{-1} = 1
        (word(vec![si, si.inverse()]), word(vec![]))
    };
    prop_assert_eq!(lhs.act_evaluated(a, q).unwrap(), rhs.act_evaluated(a, q).unwrap());
    // and the inverse forms
    prop_assert_eq!(
        lhs.inverse().act_evaluated(a, q).unwrap(),
        rhs.inverse().act_evaluated(a, q).unwrap()
    );
    Ok(())
}

/// Value tables for `σ_i^{-m} b` when `b` leaves `(1, N)` or `(N, 1)` at
/// positions `(i, i+1)`; `m` runs over two full periods.
pub fn negative_power_tables(
    b: &BraidWord,
    i: usize,
    n: usize,
    others: &[usize],
) -> Result<(), TestCaseError> {
    let q = FiniteQuandle::q_n(n).unwrap();
    let rank = b.rank();
    for (start, oracle) in [
        ((1, n), from_one_n as fn(usize, usize) -> (usize, usize)),
        ((n, 1), from_n_one),
    ] {
        let mut target: Vec<usize> = others.iter().map(|v| (v - 1) % n + 1).collect();
        target.resize(rank, n);
        target[i - 1] = start.0;
        target[i] = start.1;
        let a = preimage(b, &target, &q);
        prop_assert_eq!(&b.act_evaluated(&a, &q).unwrap(), &target);
        for m in 0..=4 * (n - 1) {
            let w = power(rank, i, -(m as i64)).concat(b);
            let v = w.act_evaluated(&a, &q).unwrap();
            prop_assert_eq!((v[i - 1], v[i]), oracle(n, m), "start {:?} m {}", start, m);
            for j in (0..rank).filter(|&j| j != i - 1 && j != i) {
                prop_assert_eq!(v[j], target[j]);
            }
        }
    }
    Ok(())
}

/// Two non-`N` values are swapped by each `σ_i^{±1}`: even powers fix the
/// pair, odd powers swap it.
pub fn swap_laws(
    b: &BraidWord,
    i: usize,
    n: usize,
    s: usize,
    t: usize,
    e: i64,
) -> Result<(), TestCaseError> {
    let q = FiniteQuandle::q_n(n).unwrap();
    let rank = b.rank();
    let mut target = vec![n; rank];
    target[i - 1] = s;
    target[i] = t;
    let a = preimage(b, &target, &q);
    let v = power(rank, i, e).concat(b).act_evaluated(&a, &q).unwrap();
    let expected = if e % 2 == 0 { (s, t) } else { (t, s) };
    prop_assert_eq!((v[i - 1], v[i]), expected);
    Ok(())
}

/// Equal values at `(i, i+1)` are fixed by `σ_i^{±1}` in any quandle.
pub fn equal_values_fixed(
    b: &BraidWord,
    i: usize,
    a: &Assignment,
    q: &FiniteQuandle,
    positive: bool,
) -> Result<(), TestCaseError> {
    let rank = b.rank();
    let mut target = b.act_evaluated(a, q).unwrap();
    target[i] = target[i - 1];
    let a = preimage(b, &target, q);
    let letter = if positive { Letter::pos(i) } else { Letter::neg(i) };
    let w = BraidWord::new(rank, vec![letter]).unwrap().concat(b);
    let v = w.act_evaluated(&a, q).unwrap();
    prop_assert_eq!(v, target);
    Ok(())
}
