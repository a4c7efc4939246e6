//! Finite quandles given by their operation tables.
//!
//! Elements are the integers `1..=N` at every public boundary. Tables are
//! stored flat and 0-indexed; `op_table[x * N + y]` holds `(x+1) * (y+1) - 1`.

use std::fmt::{self, Write as _};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuandleError {
    #[error("quandle must have at least one element")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry {value} at ({row}, {col}) is outside 1..={order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("axiom (i) fails: {a} * {a} = {value}")]
    NotIdempotent { a: usize, value: usize },
    #[error("axiom (ii) fails: right translation by {column} is not a bijection ({x} * {column} = {y} * {column} = {value})")]
    NotRightInvertible {
        column: usize,
        x: usize,
        y: usize,
        value: usize,
    },
    #[error("axiom (iii) fails at (a, b, c) = ({a}, {b}, {c}): (a*b)*c = {lhs}, (a*c)*(b*c) = {rhs}")]
    NotSelfDistributive {
        a: usize,
        b: usize,
        c: usize,
        lhs: usize,
        rhs: usize,
    },
    #[error("element {element} is outside 1..={order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("Q_N requires N >= 3, got {0}")]
    FamilyOrderTooSmall(usize),
    #[error("quandle is not Q_{0}; the shift map is only defined on the Q_N family")]
    NotFamilyMember(usize),
    #[error("shift map failed the homomorphism check on Q_{0}")]
    ShiftNotHomomorphism(usize),
    #[error("quandle table parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot read quandle file {path}: {message}")]
    Io { path: String, message: String },
}

/// A quandle on `{1, ..., N}` with precomputed right-division table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteQuandle {
    order: usize,
    op_table: Vec<usize>,
    inv_table: Vec<usize>,
}

impl fmt::Debug for FiniteQuandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteQuandle")
            .field("order", &self.order)
            .field("rows", &self.rows())
            .finish()
    }
}

impl FiniteQuandle {
    /// The quandle `Q_N`: `x * y = x` unless `y = N`, and right multiplication
    /// by `N` cycles `1 -> 2 -> ... -> N-1 -> 1` while fixing `N`.
    pub fn q_n(order: usize) -> Result<Self, QuandleError> {
        if order < 3 {
            return Err(QuandleError::FamilyOrderTooSmall(order));
        }
        let rows = (1..=order)
            .map(|x| {
                (1..=order)
                    .map(|y| {
                        if y != order || x == order {
                            x
                        } else if x == order - 1 {
                            1
                        } else {
                            x + 1
                        }
                    })
                    .collect()
            })
            .collect::<Vec<Vec<usize>>>();
        Self::validate(&rows)
    }

    /// Checks the three quandle axioms on a 1-indexed table (`rows[x-1][y-1] = x*y`).
    ///
    /// Reports the first failure in lexicographic order of the witness.
    pub fn validate(rows: &[Vec<usize>]) -> Result<Self, QuandleError> {
        let order = rows.len();
        if order == 0 {
            return Err(QuandleError::Empty);
        }
        let mut op_table = Vec::with_capacity(order * order);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(QuandleError::NotSquare {
                    row: r + 1,
                    len: row.len(),
                    order,
                });
            }
            for (c, &value) in row.iter().enumerate() {
                if value < 1 || value > order {
                    return Err(QuandleError::EntryOutOfRange {
                        row: r + 1,
                        col: c + 1,
                        value,
                        order,
                    });
                }
                op_table.push(value - 1);
            }
        }
        let at = |x: usize, y: usize| op_table[x * order + y];

        for a in 0..order {
            if at(a, a) != a {
                return Err(QuandleError::NotIdempotent {
                    a: a + 1,
                    value: at(a, a) + 1,
                });
            }
        }

        let mut inv_table = vec![usize::MAX; order * order];
        for a in 0..order {
            for x in 0..order {
                let b = at(x, a);
                let slot = &mut inv_table[b * order + a];
                if *slot != usize::MAX {
                    return Err(QuandleError::NotRightInvertible {
                        column: a + 1,
                        x: *slot + 1,
                        y: x + 1,
                        value: b + 1,
                    });
                }
                *slot = x;
            }
        }

        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    let lhs = at(at(a, b), c);
                    let rhs = at(at(a, c), at(b, c));
                    if lhs != rhs {
                        return Err(QuandleError::NotSelfDistributive {
                            a: a + 1,
                            b: b + 1,
                            c: c + 1,
                            lhs: lhs + 1,
                            rhs: rhs + 1,
                        });
                    }
                }
            }
        }

        Ok(Self {
            order,
            op_table,
            inv_table,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn check(&self, element: usize) -> Result<usize, QuandleError> {
        if element < 1 || element > self.order {
            Err(QuandleError::ElementOutOfRange {
                element,
                order: self.order,
            })
        } else {
            Ok(element - 1)
        }
    }

    pub fn contains(&self, element: usize) -> bool {
        (1..=self.order).contains(&element)
    }

    /// `x * y`.
    pub fn op(&self, x: usize, y: usize) -> Result<usize, QuandleError> {
        let (x, y) = (self.check(x)?, self.check(y)?);
        Ok(self.op_table[x * self.order + y] + 1)
    }

    /// The unique `x` with `x * a = b`.
    pub fn inv_op(&self, b: usize, a: usize) -> Result<usize, QuandleError> {
        let (b, a) = (self.check(b)?, self.check(a)?);
        Ok(self.inv_table[b * self.order + a] + 1)
    }

    // 0-indexed lookups for the evaluation hot path; callers guarantee range.
    #[inline]
    pub(crate) fn op0(&self, x: usize, y: usize) -> usize {
        self.op_table[x * self.order + y]
    }

    #[inline]
    pub(crate) fn inv_op0(&self, b: usize, a: usize) -> usize {
        self.inv_table[b * self.order + a]
    }

    /// The operation table as 1-indexed rows.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.op_table
            .chunks(self.order)
            .map(|row| row.iter().map(|v| v + 1).collect())
            .collect()
    }

    /// Right-division table as 1-indexed rows: `inv_rows()[b-1][a-1]` is `b *̄ a`.
    pub fn inv_rows(&self) -> Vec<Vec<usize>> {
        self.inv_table
            .chunks(self.order)
            .map(|row| row.iter().map(|v| v + 1).collect())
            .collect()
    }

    /// Tab-separated display with a header row, as quandle tables are usually printed.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        for y in 1..=self.order {
            write!(out, "\t{y}").unwrap();
        }
        out.push('\n');
        for (x, row) in self.rows().iter().enumerate() {
            write!(out, "{}", x + 1).unwrap();
            for v in row {
                write!(out, "\t{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Serializes to the table file format: `N` followed by `N` rows.
    pub fn to_file_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses and validates the table file format.
    pub fn parse_table(text: &str) -> Result<Self, QuandleError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (first, header) = lines.next().ok_or(QuandleError::Parse {
            line: 1,
            message: "missing order line".into(),
        })?;
        let order: usize = header.parse().map_err(|_| QuandleError::Parse {
            line: first,
            message: format!("expected order, found {header:?}"),
        })?;
        let mut rows = Vec::with_capacity(order);
        for (line, content) in lines {
            let row = content
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| QuandleError::Parse {
                        line,
                        message: format!("expected integer, found {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != order {
                return Err(QuandleError::Parse {
                    line,
                    message: format!("expected {order} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != order {
            return Err(QuandleError::Parse {
                line: first,
                message: format!("expected {order} rows, found {}", rows.len()),
            });
        }
        Self::validate(&rows)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, QuandleError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| QuandleError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse_table(&text)
    }

    /// The automorphism `f` of `Q_N` with `f(x) = x + 1` for `x < N - 1`,
    /// `f(N - 1) = 1`, `f(N) = N`, together with its inverse.
    pub fn shift_map(&self) -> Result<ShiftMap, QuandleError> {
        let n = self.order;
        if n < 3 || *self != Self::q_n(n)? {
            return Err(QuandleError::NotFamilyMember(n));
        }
        let forward: Vec<usize> = (1..=n)
            .map(|x| match x {
                x if x < n - 1 => x + 1,
                x if x == n - 1 => 1,
                _ => n,
            })
            .collect();
        let inverse: Vec<usize> = (1..=n)
            .map(|x| match x {
                1 => n - 1,
                x if x == n => n,
                x => x - 1,
            })
            .collect();
        if !is_homomorphism(self, self, &forward) || !is_homomorphism(self, self, &inverse) {
            return Err(QuandleError::ShiftNotHomomorphism(n));
        }
        Ok(ShiftMap { forward, inverse })
    }
}

/// The shift automorphism of `Q_N` and its inverse, both 1-indexed maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftMap {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl ShiftMap {
    /// `forward()[x-1] = f(x)`.
    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn apply(&self, x: usize) -> usize {
        self.forward[x - 1]
    }

    pub fn apply_inverse(&self, x: usize) -> usize {
        self.inverse[x - 1]
    }

    /// `f^s` for any integer `s` (negative powers use the inverse).
    pub fn power(&self, s: i64) -> Vec<usize> {
        let step = if s >= 0 { &self.forward } else { &self.inverse };
        let mut map: Vec<usize> = (1..=self.forward.len()).collect();
        for _ in 0..s.unsigned_abs() {
            for v in map.iter_mut() {
                *v = step[*v - 1];
            }
        }
        map
    }
}

/// Exhaustively checks `f(x * y) = f(x) * f(y)`; `f[x-1]` is the image of `x`.
///
/// Maps of the wrong length or with values outside the target return `false`.
pub fn is_homomorphism(source: &FiniteQuandle, target: &FiniteQuandle, f: &[usize]) -> bool {
    if f.len() != source.order() || f.iter().any(|&v| !target.contains(v)) {
        return false;
    }
    let n = source.order();
    (0..n).all(|x| {
        (0..n).all(|y| {
            let lhs = f[source.op0(x, y)] - 1;
            let rhs = target.op0(f[x] - 1, f[y] - 1);
            lhs == rhs
        })
    })
}
