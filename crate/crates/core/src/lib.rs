//! Finite quandles, the braid-group action on free quandles, and quandle
//! coloring counts for surface braids presented by 4-charts.
//!
//! The pipeline is: a chart is given by its intersection braid words
//! ([`presentation::chart_t`], [`presentation::chart_t_star`],
//! [`presentation::chart_t0`], or a presentation file); each word acts on the
//! generators of the free quandle ([`braid::BraidWord::act`]); and colorings
//! by a [`finite_quandle::FiniteQuandle`] are found by evaluating every
//! relation on every generator assignment
//! ([`presentation::count_colorings`]).

pub mod braid;
pub mod cli;
pub mod finite_quandle;
pub mod free_terms;
pub mod presentation;

pub use braid::{BraidError, BraidWord, GeneratorImage, Letter, Sign};
pub use finite_quandle::{is_homomorphism, FiniteQuandle, QuandleError, ShiftMap};
pub use free_terms::{evaluate, Assignment, Term, TermError, TermNode};
pub use presentation::{
    chart_t, chart_t0, chart_t_star, coloring_profile, count_colorings,
    count_colorings_with_workers, ColoringReport, Presentation, PresentationError, Relation,
};
