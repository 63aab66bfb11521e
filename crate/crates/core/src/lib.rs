//! Exact anthyphairesis (reciprocal subtraction, i.e. continued fractions)
//! over natural numbers and real quadratic surds.
//!
//! - [`surd`]: exact arithmetic, comparison and floor in `Q(√D)`.
//! - [`anth`]: Euclidean and surd expansions, periodicity by repeated
//!   remainder ratio, canonical forms and proportion.
//! - [`approximants`]: convergents, side-and-diameter numbers, Pell values.
//! - [`dialectic`]: ratio classes of remainders and dialectic numbers.
//! - [`division`]: binary division trees with declared ratio equalities.
//! - [`cli`]: the `anth` command-line front end.

pub mod anth;
pub mod approximants;
pub mod cli;
pub mod dialectic;
pub mod division;
pub mod error;
pub mod literal;
pub mod surd;

pub use anth::{
    anth_pair, canonical_expansion, euclid_anth, is_commensurable, proportion_eq, surd_anth,
    Expansion, ExpansionKind, RemainderRatio, Trace,
};
pub use approximants::{convergents, pell_values, side_diameter, Convergent};
pub use dialectic::{
    dialectic_number_exp, dialectic_number_seq, remainder_classes, tma_regress, RatioState,
    TermSequence,
};
pub use division::{check_logos, parse_tree, render_tree, DivisionTree, LogosDecl, LogosReport};
pub use error::{Error, Result};
pub use literal::parse_surd;
pub use surd::{isqrt, QuadraticSurd, SurdState};
