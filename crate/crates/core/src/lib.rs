//! Word equality and divisibility for semigroup presentations whose left
//! and right graphs are cycle-free.
//!
//! The decision procedure rewrites a word towards a guide letter with a
//! deterministic head-replacement transformation, strips matched letters,
//! and answers `No` when the transformation gets stuck or provably repeats
//! forever. A bounded breadth-first congruence closure ([`oracle`]) gives an
//! independent answer for cross-checking.

pub mod acyclic;
pub mod cli;
pub mod decide;
pub mod engine;
pub mod fuzz;
pub mod graph;
pub mod oracle;
pub mod presentation;
pub mod report;
pub mod represent;
pub mod word;

pub use acyclic::{AcyclicPresentation, Mode};
pub use decide::{decide, decide_dual, decide_in_mode, Answer, DecideLimits, Query, QueryKind, Reason, Verdict};
pub use graph::{check_cycle_free, CycleKind, CycleWitness, GraphSide, SideGraph};
pub use presentation::{ParseError, Presentation, Relation, RelationId, RelationSide, WordError};
pub use represent::{reconstruct, represent, scan_state_at, GuideLetter, Representation, Status};
pub use word::{Alphabet, Letter, Word};
