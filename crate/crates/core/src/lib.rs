//! Construction and verification of cyclic three-fold triple systems.
//!
//! A `TS_λ(v)` is a collection of 3-element blocks over `Z_v` in which every
//! unordered pair of points lies in exactly λ blocks. This crate builds
//! cyclic `TS₃(v)` designs from Skolem and hooked Skolem sequences (assembled
//! from fixed construction tables), develops them modulo `v`, and checks the
//! properties that matter for these designs: pair coverage, simplicity (no
//! repeated blocks), orbit structure, and (cyclic) indecomposability via
//! exact-cover search. A small exact integer solver classifies the linear
//! systems that decide when two construction rows can ever collide.
//!
//! Positions in sequences are 1-indexed everywhere, matching the usual
//! tabular presentation of Skolem sequences.

pub mod construct;
pub mod decompose;
pub mod design;
pub mod lines;
pub mod report;
pub mod sequence;
pub mod tables;

pub use construct::{construct, is_known_nonsimple, Method};
pub use design::{BaseBlock, Design, DevelopedSystem, Provenance};
pub use report::{CheckName, CheckStatus, VerificationReport};
pub use sequence::{Pair, PairSet, SequenceKind, SkolemTypeSequence, SymbolSlot};
pub use tables::{AffineForm, CaseSpec, TableRow};
