//! Exact distributions of text character accesses for window-based pattern
//! matching algorithms on random texts.
//!
//! Given a pattern, an algorithm (Horspool, BNDM, or BOM), and a
//! finite-memory text model, this crate computes the exact probability
//! distribution of the number of character accesses the algorithm performs
//! on a random text of a given length, and the exact distribution of the
//! difference of accesses between two algorithms. The route is: per-window
//! cost and shift functions, a deterministic automaton that accumulates cost
//! while scanning the text left to right, minimization, a product with the
//! text model, and a forward probability recurrence over that product.

pub mod alphabet;
pub mod bruteforce;
pub mod daa;
pub mod diffdaa;
pub mod distribution;
pub mod matchers;
pub mod paa;
pub mod textmodel;

pub use alphabet::{Alphabet, Pattern};
pub use diffdaa::{build_difference_daa, difference_distribution, DiffSummary};
pub use distribution::Distribution;
pub use matchers::{run_matcher, Algorithm, MatchResult, WindowAnalysis, WindowCost};
pub use paa::{algorithm_distribution, build_paa, cost_distribution, Paa};
pub use textmodel::TextModel;

// Compiles and runs every code block in the guide as a doctest, one module
// per chapter so a failure names its source file.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/window-algorithms.md")]
    mod window_algorithms {}
    #[doc = include_str!("../../../book/src/cost-automata.md")]
    mod cost_automata {}
    #[doc = include_str!("../../../book/src/text-models.md")]
    mod text_models {}
    #[doc = include_str!("../../../book/src/distributions.md")]
    mod distributions {}
    #[doc = include_str!("../../../book/src/comparing-algorithms.md")]
    mod comparing_algorithms {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
