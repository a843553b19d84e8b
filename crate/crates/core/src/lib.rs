//! Classical strategies for CHSH_q nonlocal games over prime fields.
//!
//! Alice gets `x`, Bob gets `y`, both in `F_p`; they win when their answers
//! satisfy `a + b = x y`. This crate evaluates deterministic strategies
//! exactly, builds an explicit strategy that wins on more than `p^{4/3} / 22`
//! of the `p^2` input pairs (for `p1 > 30`), audits the duplicate-slope
//! bounds behind that guarantee, and computes exact optimal values for tiny
//! `q` by brute force.
//!
//! ```
//! use chshq::{construction::build_strategy, field::PrimeModulus};
//!
//! let p = PrimeModulus::new(101).unwrap();
//! let (_strategy, report) = build_strategy(p).unwrap();
//! assert!(report.win_count >= report.post_incidence_count);
//! ```

pub mod audit;
pub mod cli;
pub mod construction;
pub mod error;
pub mod field;
pub mod fraction;
pub mod game;
pub mod geometry;
pub mod oracle;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeModulus};
pub use game::{evaluate, DeterministicStrategy, EvaluationReport};
