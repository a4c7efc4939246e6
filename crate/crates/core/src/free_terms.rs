//! Elements of the free quandle on `x_1, ..., x_n` as expression trees.
//!
//! Subterms are reference counted, so the trees produced by the braid action
//! share structure. Evaluation and size are computed over the shared graph and
//! never recurse, so terms nested 10^5 deep are fine.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::finite_quandle::FiniteQuandle;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("assignment has {found} values, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("generator x{index} is outside x1..x{rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("assignment value {value} for x{index} is outside 1..={order}")]
    ValueOutOfRange {
        index: usize,
        value: usize,
        order: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermNode {
    Generator(usize),
    /// `left * right`
    Op(Term, Term),
    /// `left *̄ right`
    InvOp(Term, Term),
}

/// A free-quandle term. Cloning is O(1).
#[derive(Clone, PartialEq, Eq)]
pub struct Term(Arc<TermNode>);

impl Term {
    /// The generator `x_index` (1-indexed).
    pub fn generator(index: usize) -> Self {
        Term(Arc::new(TermNode::Generator(index)))
    }

    pub fn op(left: Term, right: Term) -> Self {
        Term(Arc::new(TermNode::Op(left, right)))
    }

    pub fn inv_op(left: Term, right: Term) -> Self {
        Term(Arc::new(TermNode::InvOp(left, right)))
    }

    pub fn node(&self) -> &TermNode {
        &self.0
    }

    fn key(&self) -> *const TermNode {
        Arc::as_ptr(&self.0)
    }

    /// Number of nodes of the expanded tree (shared subterms count once per
    /// occurrence). Saturates at `u64::MAX`.
    pub fn size(&self) -> u64 {
        let mut memo: HashMap<*const TermNode, u64> = HashMap::new();
        self.fold(&mut memo, |node, sub| match node {
            TermNode::Generator(_) => 1,
            TermNode::Op(..) | TermNode::InvOp(..) => {
                1u64.saturating_add(sub[0]).saturating_add(sub[1])
            }
        })
    }

    /// Largest generator index occurring in the term.
    pub fn max_generator(&self) -> usize {
        let mut memo = HashMap::new();
        self.fold(&mut memo, |node, sub| match node {
            TermNode::Generator(i) => *i,
            _ => sub[0].max(sub[1]),
        })
    }

    /// Fully parenthesized text: `x3`, `(x1*x3)`, `(x2~x1)`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        // Explicit stack of pending output pieces.
        enum Step<'a> {
            Visit(&'a Term),
            Text(&'static str),
        }
        let mut stack = vec![Step::Visit(self)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Text(s) => out.push_str(s),
                Step::Visit(t) => match t.node() {
                    TermNode::Generator(i) => {
                        out.push('x');
                        out.push_str(&i.to_string());
                    }
                    TermNode::Op(l, r) | TermNode::InvOp(l, r) => {
                        let sym = if matches!(t.node(), TermNode::Op(..)) { "*" } else { "~" };
                        out.push('(');
                        stack.push(Step::Text(")"));
                        stack.push(Step::Visit(r));
                        stack.push(Step::Text(sym));
                        stack.push(Step::Visit(l));
                    }
                },
            }
        }
        out
    }

    /// Post-order fold over the shared term graph, memoized by node identity.
    fn fold<T: Copy>(
        &self,
        memo: &mut HashMap<*const TermNode, T>,
        mut combine: impl FnMut(&TermNode, &[T]) -> T,
    ) -> T {
        let mut stack: Vec<(&Term, bool)> = vec![(self, false)];
        while let Some((t, expanded)) = stack.pop() {
            if memo.contains_key(&t.key()) {
                continue;
            }
            match t.node() {
                TermNode::Generator(_) => {
                    let v = combine(t.node(), &[]);
                    memo.insert(t.key(), v);
                }
                TermNode::Op(l, r) | TermNode::InvOp(l, r) => {
                    if expanded {
                        let v = combine(t.node(), &[memo[&l.key()], memo[&r.key()]]);
                        memo.insert(t.key(), v);
                    } else {
                        stack.push((t, true));
                        stack.push((r, false));
                        stack.push((l, false));
                    }
                }
            }
        }
        memo[&self.key()]
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// Deep chains would otherwise overflow the stack in the recursive Arc drop.
impl Drop for Term {
    fn drop(&mut self) {
        let mut pending: Vec<Term> = Vec::new();
        if let Some(node) = Arc::get_mut(&mut self.0) {
            take_children(node, &mut pending);
        }
        while let Some(mut t) = pending.pop() {
            if let Some(node) = Arc::get_mut(&mut t.0) {
                take_children(node, &mut pending);
            }
        }
    }
}

fn take_children(node: &mut TermNode, pending: &mut Vec<Term>) {
    if matches!(node, TermNode::Generator(_)) {
        return;
    }
    match std::mem::replace(node, TermNode::Generator(0)) {
        TermNode::Op(l, r) | TermNode::InvOp(l, r) => {
            pending.push(l);
            pending.push(r);
        }
        TermNode::Generator(_) => {}
    }
}

/// Images `c(x_1), ..., c(x_n)` of the generators; determines a homomorphism
/// from the free quandle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    values: Vec<usize>,
}

impl Assignment {
    pub fn new(values: Vec<usize>) -> Self {
        Self { values }
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn into_values(self) -> Vec<usize> {
        self.values
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Checks every value lies in the quandle.
    pub fn validate_for(&self, quandle: &FiniteQuandle) -> Result<(), TermError> {
        match self.values.iter().position(|&v| !quandle.contains(v)) {
            Some(i) => Err(TermError::ValueOutOfRange {
                index: i + 1,
                value: self.values[i],
                order: quandle.order(),
            }),
            None => Ok(()),
        }
    }
}

impl From<Vec<usize>> for Assignment {
    fn from(values: Vec<usize>) -> Self {
        Self::new(values)
    }
}

/// Value of `term` under the homomorphism determined by `assignment`.
pub fn evaluate(
    term: &Term,
    assignment: &Assignment,
    quandle: &FiniteQuandle,
) -> Result<usize, TermError> {
    assignment.validate_for(quandle)?;
    let rank = assignment.rank();
    let mut memo: HashMap<*const TermNode, usize> = HashMap::new();
    let mut stack: Vec<(&Term, bool)> = vec![(term, false)];
    while let Some((t, expanded)) = stack.pop() {
        if memo.contains_key(&t.key()) {
            continue;
        }
        let value = match t.node() {
            TermNode::Generator(i) => {
                if *i < 1 || *i > rank {
                    return Err(TermError::GeneratorOutOfRange { index: *i, rank });
                }
                assignment.values()[i - 1] - 1
            }
            TermNode::Op(l, r) | TermNode::InvOp(l, r) => {
                if !expanded {
                    stack.push((t, true));
                    stack.push((r, false));
                    stack.push((l, false));
                    continue;
                }
                let (lv, rv) = (memo[&l.key()], memo[&r.key()]);
                if matches!(t.node(), TermNode::Op(..)) {
                    quandle.op0(lv, rv)
                } else {
                    quandle.inv_op0(lv, rv)
                }
            }
        };
        memo.insert(t.key(), value);
    }
    Ok(memo[&term.key()] + 1)
}
