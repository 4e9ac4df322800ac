//! Bounded graded posets, their Segre powers and lifted EL-labelings.
//!
//! The crate builds Boolean lattices, subspace lattices over prime fields
//! and user-supplied posets, verifies EL-labelings exhaustively, and
//! computes Möbius numbers and the rank-selected invariants α̃ and β̃ by
//! several independent routes.

mod bits;
pub mod error;
pub mod format;
pub mod invariants;
pub mod labeling;
pub mod lattices;
pub mod perm_stats;
pub mod poset;
pub mod shellability;

pub use error::{Error, Result};
pub use labeling::{EdgeLabeling, LabelPoset, LabeledPoset};
pub use poset::{build_poset, Poset, RankSelection};
