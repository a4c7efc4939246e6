//! Quandle presentations from intersection braid words, the built-in 4-charts,
//! and coloring enumeration.
//!
//! A relation `(w; a, b)` stands for `Q(w)(x_a) = Q(w)(x_b)`. A generator
//! assignment is a coloring iff it satisfies every relation after evaluation,
//! so counting colorings is a scan over all `|Q|^n` assignments.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::braid::{BraidError, BraidWord};
use crate::finite_quandle::FiniteQuandle;
use crate::free_terms::{Assignment, TermError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("chart parameter k must be at least 1, got {0}")]
    InvalidChartParameter(usize),
    #[error("relation {relation}: word has rank {word_rank}, presentation has rank {rank}")]
    WordRankMismatch {
        relation: usize,
        word_rank: usize,
        rank: usize,
    },
    #[error("relation {relation}: generator x{index} is outside x1..x{rank}")]
    GeneratorOutOfRange {
        relation: usize,
        index: usize,
        rank: usize,
    },
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("{rank} generators over {order} elements is too many assignments to enumerate")]
    SearchSpaceTooLarge { order: usize, rank: usize },
    #[error("coloring profile needs a rank-4 presentation, got rank {0}")]
    ProfileRank(usize),
    #[error("coloring {0:?} violates x1 = x2 or x3 = x4")]
    ProfileViolation(Vec<usize>),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Braid {
        line: usize,
        #[source]
        source: BraidError,
    },
    #[error("cannot read presentation file {path}: {message}")]
    Io { path: String, message: String },
}

/// `Q(word)(x_left) = Q(word)(x_right)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub word: BraidWord,
    pub left: usize,
    pub right: usize,
}

impl Relation {
    pub fn new(word: BraidWord, left: usize, right: usize) -> Self {
        Self { word, left, right }
    }

    /// Whether the assignment satisfies this relation.
    pub fn check(
        &self,
        assignment: &Assignment,
        quandle: &FiniteQuandle,
    ) -> Result<bool, PresentationError> {
        let rank = self.word.rank();
        for index in [self.left, self.right] {
            if index < 1 || index > rank {
                return Err(PresentationError::GeneratorOutOfRange {
                    relation: 1,
                    index,
                    rank,
                });
            }
        }
        let values = self.word.act_evaluated(assignment, quandle)?;
        Ok(values[self.left - 1] == values[self.right - 1])
    }

    #[inline]
    fn holds0(&self, assignment: &[usize], scratch: &mut [usize], quandle: &FiniteQuandle) -> bool {
        scratch.copy_from_slice(assignment);
        self.word.act_in_place(scratch, quandle);
        scratch[self.left - 1] == scratch[self.right - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    rank: usize,
    relations: Vec<Relation>,
    name: Option<String>,
}

impl Presentation {
    pub fn new(rank: usize, relations: Vec<Relation>) -> Result<Self, PresentationError> {
        for (i, rel) in relations.iter().enumerate() {
            if rel.word.rank() != rank {
                return Err(PresentationError::WordRankMismatch {
                    relation: i + 1,
                    word_rank: rel.word.rank(),
                    rank,
                });
            }
            for index in [rel.left, rel.right] {
                if index < 1 || index > rank {
                    return Err(PresentationError::GeneratorOutOfRange {
                        relation: i + 1,
                        index,
                        rank,
                    });
                }
            }
        }
        Ok(Self {
            rank,
            relations,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Parses the text format:
    ///
    /// ```text
    /// rank 4
    /// rel 1 2 :
    /// rel 1 2 : s2^-2 s1 s2^2
    /// ```
    ///
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line, header) = lines.next().ok_or(PresentationError::Parse {
            line: 1,
            message: "missing `rank <n>` line".into(),
        })?;
        let rank = header
            .strip_prefix("rank")
            .filter(|rest| rest.starts_with(char::is_whitespace))
            .and_then(|rest| rest.trim().parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| PresentationError::Parse {
                line,
                message: format!("expected `rank <n>` with n >= 1, found {header:?}"),
            })?;

        let mut relations = Vec::new();
        for (line, content) in lines {
            let parse_err = |message: String| PresentationError::Parse { line, message };
            let body = content
                .strip_prefix("rel")
                .filter(|rest| rest.starts_with(char::is_whitespace))
                .ok_or_else(|| parse_err(format!("expected `rel <a> <b> : <word>`, found {content:?}")))?;
            let (pair, word) = body
                .split_once(':')
                .ok_or_else(|| parse_err("missing `:` before braid word".into()))?;
            let indices = pair
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| parse_err(format!("expected generator index, found {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let [left, right] = indices[..] else {
                return Err(parse_err(format!(
                    "expected two generator indices, found {}",
                    indices.len()
                )));
            };
            for index in [left, right] {
                if index < 1 || index > rank {
                    return Err(parse_err(format!(
                        "generator x{index} is outside x1..x{rank}"
                    )));
                }
            }
            let word = BraidWord::parse(word, rank)
                .map_err(|source| PresentationError::Braid { line, source })?;
            relations.push(Relation::new(word, left, right));
        }
        Self::new(rank, relations)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PresentationError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| PresentationError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// Serializes to the format read by [`Presentation::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("rank {}\n", self.rank);
        for rel in &self.relations {
            let word = rel.word.to_string();
            if word.is_empty() {
                writeln!(out, "rel {} {} :", rel.left, rel.right).unwrap();
            } else {
                writeln!(out, "rel {} {} : {}", rel.left, rel.right, word).unwrap();
            }
        }
        out
    }
}

fn word4(text: &str) -> BraidWord {
    BraidWord::parse(text, 4).expect("built-in chart word")
}

fn chart(relations: &[(String, usize, usize)]) -> Presentation {
    let relations = relations
        .iter()
        .map(|(w, a, b)| Relation::new(word4(w), *a, *b))
        .collect();
    Presentation::new(4, relations).expect("built-in chart presentation")
}

/// The 4-chart `T_k`: eight relations read off its Hurwitz arc system.
pub fn chart_t(k: usize) -> Result<Presentation, PresentationError> {
    if k < 1 {
        return Err(PresentationError::InvalidChartParameter(k));
    }
    let e = k + 1;
    Ok(chart(&[
        (String::new(), 1, 2),
        (format!("s2^-{e} s1 s2^2"), 1, 2),
        ("s2^-2 s1 s2^2".into(), 3, 4),
        (format!("s2^-{e} s3 s1 s2^2"), 3, 4),
        (format!("s2^-{e} s3 s1 s2^2"), 1, 2),
        ("s2^-2 s3 s2^2".into(), 1, 2),
        (format!("s2^-{e} s3 s2^2"), 3, 4),
        (String::new(), 3, 4),
    ])
    .with_name(format!("t:{k}")))
}

/// The 4-chart `T_k*`, obtained from `T_k` by exchanging labels 1 and 3.
///
/// Exchanging the labels exchanges the generator pairs `(1, 2)` and `(3, 4)`,
/// and each word of `T_k*` equals a word of `T_k` up to `σ_1 σ_3 = σ_3 σ_1`.
pub fn chart_t_star(k: usize) -> Result<Presentation, PresentationError> {
    if k < 1 {
        return Err(PresentationError::InvalidChartParameter(k));
    }
    let e = k + 1;
    Ok(chart(&[
        (String::new(), 3, 4),
        (format!("s2^-{e} s3 s2^2"), 3, 4),
        ("s2^-2 s3 s2^2".into(), 1, 2),
        (format!("s2^-{e} s1 s3 s2^2"), 1, 2),
        (format!("s2^-{e} s1 s3 s2^2"), 3, 4),
        ("s2^-2 s1 s2^2".into(), 3, 4),
        (format!("s2^-{e} s1 s2^2"), 1, 2),
        (String::new(), 1, 2),
    ])
    .with_name(format!("tstar:{k}")))
}

/// The 4-chart `T_0`.
pub fn chart_t0() -> Presentation {
    chart(&[
        (String::new(), 1, 2),
        ("s1 s2^-1".into(), 2, 3),
        ("s2^-1 s3 s1 s2^-1".into(), 3, 4),
        ("s2^-1 s3 s1 s2^-1".into(), 1, 2),
        ("s3 s2^-1".into(), 2, 3),
        (String::new(), 3, 4),
    ])
    .with_name("t0")
}

/// All homomorphisms from a presented quandle into a finite quandle, listed
/// as generator assignments in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringReport {
    pub count: usize,
    pub trivial_count: usize,
    pub colorings: Vec<Assignment>,
}

/// Enumerates with one worker per available CPU.
pub fn count_colorings(
    presentation: &Presentation,
    quandle: &FiniteQuandle,
) -> Result<ColoringReport, PresentationError> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    count_colorings_with_workers(presentation, quandle, workers)
}

/// Scans all `|Q|^rank` assignments (x1 varies slowest). Ranges of the
/// assignment space are split across `workers` threads; the merged result is
/// identical to a serial scan.
pub fn count_colorings_with_workers(
    presentation: &Presentation,
    quandle: &FiniteQuandle,
    workers: usize,
) -> Result<ColoringReport, PresentationError> {
    let order = quandle.order();
    let rank = presentation.rank();
    let total = u32::try_from(rank)
        .ok()
        .and_then(|r| order.checked_pow(r))
        .filter(|&t| t <= 1 << 32)
        .ok_or(PresentationError::SearchSpaceTooLarge { order, rank })?;

    let workers = workers.clamp(1, total.max(1));
    let chunk = total.div_ceil(workers);
    let scan = |start: usize, end: usize| -> Vec<Vec<usize>> {
        let mut found = Vec::new();
        let mut digits = decode(start, order, rank);
        let mut scratch = vec![0; rank];
        for _ in start..end {
            if presentation
                .relations
                .iter()
                .all(|r| r.holds0(&digits, &mut scratch, quandle))
            {
                found.push(digits.iter().map(|v| v + 1).collect());
            }
            increment(&mut digits, order);
        }
        found
    };

    let mut parts: Vec<(usize, Vec<Vec<usize>>)> = if workers == 1 {
        vec![(0, scan(0, total))]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let (start, end) = (w * chunk, ((w + 1) * chunk).min(total));
                    let scan = &scan;
                    (start, s.spawn(move || scan(start, end)))
                })
                .collect();
            handles
                .into_iter()
                .map(|(start, h)| (start, h.join().expect("coloring worker panicked")))
                .collect()
        })
    };
    parts.sort_by_key(|(start, _)| *start);

    let colorings: Vec<Assignment> = parts
        .into_iter()
        .flat_map(|(_, found)| found)
        .map(Assignment::new)
        .collect();
    let trivial_count = colorings.iter().filter(|a| a.is_constant()).count();
    Ok(ColoringReport {
        count: colorings.len(),
        trivial_count,
        colorings,
    })
}

/// Base-`order` digits of `index`, most significant first.
fn decode(mut index: usize, order: usize, rank: usize) -> Vec<usize> {
    let mut digits = vec![0; rank];
    for d in digits.iter_mut().rev() {
        *d = index % order;
        index /= order;
    }
    digits
}

fn increment(digits: &mut [usize], order: usize) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < order {
            return;
        }
        *d = 0;
    }
}

/// The pairs `(c(x1), c(x3))` realized by colorings of a rank-4 presentation
/// in which every coloring has `c(x1) = c(x2)` and `c(x3) = c(x4)`.
pub fn coloring_profile(
    presentation: &Presentation,
    quandle: &FiniteQuandle,
) -> Result<BTreeSet<(usize, usize)>, PresentationError> {
    if presentation.rank() != 4 {
        return Err(PresentationError::ProfileRank(presentation.rank()));
    }
    let report = count_colorings(presentation, quandle)?;
    report
        .colorings
        .iter()
        .map(|a| match a.values() {
            &[s1, s2, t1, t2] if s1 == s2 && t1 == t2 => Ok((s1, t1)),
            v => Err(PresentationError::ProfileViolation(v.to_vec())),
        })
        .collect()
}
