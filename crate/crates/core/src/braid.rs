//! Braid words and their action on free-quandle generators.
//!
//! A word `l_1 l_2 ... l_m` defines `Q(l_1 (l_2 (... (l_m))))`: the tuple starts
//! at the identity and the rightmost letter is applied first. For the current
//! tuple `(a_1, ..., a_n)`:
//!
//! * `σ_i`      sends `x_i ↦ a_{i+1} *̄ a_i`, `x_{i+1} ↦ a_i`;
//! * `σ_i^{-1}` sends `x_i ↦ a_{i+1}`, `x_{i+1} ↦ a_i * a_{i+1}`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::finite_quandle::FiniteQuandle;
use crate::free_terms::{Assignment, Term, TermError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("malformed braid token {token:?}")]
    MalformedToken { token: String },
    #[error("generator s{index} is outside s1..s{} for {rank} strands", rank.saturating_sub(1))]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("braid rank must be at least 1")]
    ZeroRank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// `σ_index^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn pos(index: usize) -> Self {
        Self {
            index,
            sign: Sign::Positive,
        }
    }

    pub fn neg(index: usize) -> Self {
        Self {
            index,
            sign: Sign::Negative,
        }
    }

    pub fn inverse(self) -> Self {
        Self {
            index: self.index,
            sign: self.sign.flip(),
        }
    }
}

/// A word in the Artin generators of `B_n`, written left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(rank: usize, letters: Vec<Letter>) -> Result<Self, BraidError> {
        if rank == 0 {
            return Err(BraidError::ZeroRank);
        }
        if let Some(l) = letters.iter().find(|l| l.index < 1 || l.index >= rank) {
            return Err(BraidError::IndexOutOfRange {
                index: l.index,
                rank,
            });
        }
        Ok(Self { rank, letters })
    }

    pub fn identity(rank: usize) -> Self {
        Self {
            rank,
            letters: Vec::new(),
        }
    }

    /// Parses `s<i>` / `s<i>^<e>` atoms separated by whitespace. Exponents are
    /// expanded into `|e|` letters; they are never cancelled against neighbours.
    pub fn parse(text: &str, rank: usize) -> Result<Self, BraidError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let malformed = || BraidError::MalformedToken {
                token: token.to_string(),
            };
            let body = token.strip_prefix('s').ok_or_else(malformed)?;
            let (index, exponent) = match body.split_once('^') {
                Some((i, e)) => (i, e),
                None => (body, "1"),
            };
            if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            let index: usize = index.parse().map_err(|_| malformed())?;
            let digits = exponent.strip_prefix(['-', '+']).unwrap_or(exponent);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            let exponent: i64 = exponent.parse().map_err(|_| malformed())?;
            let sign = if exponent < 0 {
                Sign::Negative
            } else {
                Sign::Positive
            };
            // Range check even for zero exponents so typos are not silently ignored.
            if index < 1 || index >= rank {
                return Err(BraidError::IndexOutOfRange { index, rank });
            }
            let count = exponent.unsigned_abs() as usize;
            letters.extend(std::iter::repeat_n(Letter { index, sign }, count));
        }
        Self::new(rank, letters)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letters reversed with signs flipped.
    pub fn inverse(&self) -> Self {
        Self {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn concat(&self, other: &BraidWord) -> Self {
        assert_eq!(self.rank, other.rank, "braid ranks differ");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self {
            rank: self.rank,
            letters,
        }
    }

    /// `Q(b)(x_1), ..., Q(b)(x_n)` as explicit terms.
    pub fn act(&self) -> GeneratorImage {
        let mut terms: Vec<Term> = (1..=self.rank).map(Term::generator).collect();
        for letter in self.letters.iter().rev() {
            let i = letter.index - 1;
            let (a_i, a_next) = (terms[i].clone(), terms[i + 1].clone());
            match letter.sign {
                Sign::Positive => {
                    terms[i] = Term::inv_op(a_next, a_i.clone());
                    terms[i + 1] = a_i;
                }
                Sign::Negative => {
                    terms[i] = a_next.clone();
                    terms[i + 1] = Term::op(a_i, a_next);
                }
            }
        }
        GeneratorImage { terms }
    }

    /// Values `c(Q(b)(x_j))` computed directly on quandle elements.
    pub fn act_evaluated(
        &self,
        assignment: &Assignment,
        quandle: &FiniteQuandle,
    ) -> Result<Vec<usize>, TermError> {
        if assignment.rank() != self.rank {
            return Err(TermError::RankMismatch {
                expected: self.rank,
                found: assignment.rank(),
            });
        }
        assignment.validate_for(quandle)?;
        let mut values: Vec<usize> = assignment.values().iter().map(|v| v - 1).collect();
        self.act_in_place(&mut values, quandle);
        Ok(values.into_iter().map(|v| v + 1).collect())
    }

    /// Threads 0-indexed element values through the word. `values.len()` must
    /// equal the rank and every entry must be a valid 0-indexed element.
    #[inline]
    pub(crate) fn act_in_place(&self, values: &mut [usize], quandle: &FiniteQuandle) {
        for letter in self.letters.iter().rev() {
            let i = letter.index - 1;
            let (a_i, a_next) = (values[i], values[i + 1]);
            match letter.sign {
                Sign::Positive => {
                    values[i] = quandle.inv_op0(a_next, a_i);
                    values[i + 1] = a_i;
                }
                Sign::Negative => {
                    values[i] = a_next;
                    values[i + 1] = quandle.op0(a_i, a_next);
                }
            }
        }
    }
}

impl fmt::Display for BraidWord {
    /// Runs of equal letters are written with exponents: `s2^-2 s1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut rest = self.letters.as_slice();
        while let Some(&head) = rest.first() {
            let run = rest.iter().take_while(|&&l| l == head).count();
            let exponent = match head.sign {
                Sign::Positive => run as i64,
                Sign::Negative => -(run as i64),
            };
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if exponent == 1 {
                write!(f, "s{}", head.index)?;
            } else {
                write!(f, "s{}^{}", head.index, exponent)?;
            }
            rest = &rest[run..];
        }
        Ok(())
    }
}

/// Parses with rank inferred as one more than the largest generator index.
impl FromStr for BraidWord {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let probe = Self::parse(s, usize::MAX)?;
        let rank = probe.letters.iter().map(|l| l.index + 1).max().unwrap_or(1);
        Ok(Self {
            rank,
            letters: probe.letters,
        })
    }
}

/// The tuple `(Q(b)(x_1), ..., Q(b)(x_n))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorImage {
    terms: Vec<Term>,
}

impl GeneratorImage {
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Evaluates every image under `assignment`.
    pub fn evaluate(
        &self,
        assignment: &Assignment,
        quandle: &FiniteQuandle,
    ) -> Result<Vec<usize>, TermError> {
        self.terms
            .iter()
            .map(|t| crate::free_terms::evaluate(t, assignment, quandle))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let w = BraidWord::parse("s2^-2 s1", 4).unwrap();
        assert_eq!(w.letters(), &[Letter::neg(2), Letter::neg(2), Letter::pos(1)]);
        assert!(BraidWord::parse("", 4).unwrap().is_empty());
        assert!(BraidWord::parse("   ", 4).unwrap().is_empty());
        let w = BraidWord::parse("s2^-2 s1 s2^2", 4).unwrap();
        assert_eq!(
            w.letters(),
            &[
                Letter::neg(2),
                Letter::neg(2),
                Letter::pos(1),
                Letter::pos(2),
                Letter::pos(2)
            ]
        );
        assert!(BraidWord::parse("s3^0", 4).unwrap().is_empty());
        assert_eq!(BraidWord::parse("s1^+2", 3).unwrap().len(), 2);
    }

    #[test]
    fn parse_errors() {
        for bad in ["x1", "s", "s^2", "s1^", "s1^-", "s-1", "s1^2^3", "s1s2", "s1^a"] {
            assert!(
                matches!(
                    BraidWord::parse(bad, 4),
                    Err(BraidError::MalformedToken { .. })
                ),
                "{bad}"
            );
        }
        assert_eq!(
            BraidWord::parse("s1 s4", 4).unwrap_err(),
            BraidError::IndexOutOfRange { index: 4, rank: 4 }
        );
        assert_eq!(
            BraidWord::parse("s0", 4).unwrap_err(),
            BraidError::IndexOutOfRange { index: 0, rank: 4 }
        );
        assert!(BraidWord::parse("s4^0", 4).is_err());
    }

    #[test]
    fn display_compresses_runs() {
        for text in ["s2^-2 s1", "s2^-4 s3 s1 s2^2", "", "s1 s2^-1"] {
            assert_eq!(BraidWord::parse(text, 4).unwrap().to_string(), text);
        }
        let w: BraidWord = "s3 s1^-1".parse().unwrap();
        assert_eq!(w.rank(), 4);
    }

    #[test]
    fn worked_example_terms() {
        let image = BraidWord::parse("s2^-2 s1", 4).unwrap().act();
        let rendered: Vec<String> = image.terms().iter().map(Term::render).collect();
        assert_eq!(rendered, ["(x2~x1)", "(x1*x3)", "(x3*(x1*x3))", "x4"]);
    }

    #[test]
    fn trivial_word_is_identity() {
        let image = BraidWord::identity(4).act();
        let rendered: Vec<String> = image.terms().iter().map(Term::render).collect();
        assert_eq!(rendered, ["x1", "x2", "x3", "x4"]);
        let q = FiniteQuandle::q_n(5).unwrap();
        let a = Assignment::new(vec![3, 1, 5, 2]);
        assert_eq!(
            BraidWord::identity(4).act_evaluated(&a, &q).unwrap(),
            vec![3, 1, 5, 2]
        );
    }

    #[test]
    fn evaluated_action_examples() {
        for n in 3..=8 {
            let q = FiniteQuandle::q_n(n).unwrap();
            let a = Assignment::new(vec![1, 1, n, n]);
            let w = BraidWord::parse("s1 s2^-1", 4).unwrap();
            assert_eq!(w.act_evaluated(&a, &q).unwrap(), vec![n, 1, 2, n]);
            assert_eq!(w.act().evaluate(&a, &q).unwrap(), vec![n, 1, 2, n]);
            // intermediate tuples from the σ_2^2 prefix computation
            let w = BraidWord::parse("s2", 4).unwrap();
            assert_eq!(w.act_evaluated(&a, &q).unwrap(), vec![1, n, 1, n]);
            let w = BraidWord::parse("s2^2", 4).unwrap();
            assert_eq!(w.act_evaluated(&a, &q).unwrap(), vec![1, n - 1, n, n]);
            let w = BraidWord::parse("s1 s2^2", 4).unwrap();
            assert_eq!(w.act_evaluated(&a, &q).unwrap(), vec![n - 1, 1, n, n]);
            let w = BraidWord::parse("s2^-2 s1 s2^2", 4).unwrap();
            assert_eq!(w.act_evaluated(&a, &q).unwrap(), vec![n - 1, 2, n, n]);
        }
    }

    #[test]
    fn fused_matches_terms_on_worked_example() {
        let q = FiniteQuandle::q_n(4).unwrap();
        let a = Assignment::new(vec![1, 2, 3, 4]);
        let w = BraidWord::parse("s2^-2 s1", 4).unwrap();
        let via_terms = w.act().evaluate(&a, &q).unwrap();
        assert_eq!(w.act_evaluated(&a, &q).unwrap(), via_terms);
        // hand evaluation: (2~1, 1*3, 3*(1*3), 4) = (2, 1, 3, 4)
        assert_eq!(via_terms, vec![2, 1, 3, 4]);
    }

    #[test]
    fn periodic_prefix_equalizes_first_pair() {
        // For k ≡ 2N-5 (mod 2(N-1)), the σ_2^{-(k+1)} σ_1 σ_2^2 word makes the
        // first two values agree on (1, 1, N, N).
        for n in 3..=7 {
            let q = FiniteQuandle::q_n(n).unwrap();
            let a = Assignment::new(vec![1, 1, n, n]);
            for k in 1..=4 * (n - 1) {
                let w = BraidWord::parse(&format!("s2^-{} s1 s2^2", k + 1), 4).unwrap();
                let v = w.act_evaluated(&a, &q).unwrap();
                let resonant = k % (2 * (n - 1)) == 2 * n - 5;
                assert_eq!(v[0] == v[1], resonant, "N={n} k={k}");
            }
        }
    }

    #[test]
    fn rank_mismatch() {
        let q = FiniteQuandle::q_n(3).unwrap();
        let w = BraidWord::parse("s1", 3).unwrap();
        assert_eq!(
            w.act_evaluated(&Assignment::new(vec![1, 2]), &q).unwrap_err(),
            TermError::RankMismatch {
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn long_words_stay_cheap() {
        let q = FiniteQuandle::q_n(5).unwrap();
        let w = BraidWord::parse("s1^-100000", 2).unwrap();
        let image = w.act();
        let a = Assignment::new(vec![1, 5]);
        let fused = w.act_evaluated(&a, &q).unwrap();
        assert_eq!(image.evaluate(&a, &q).unwrap(), fused);
    }
}
