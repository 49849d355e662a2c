//! Left-distributive systems: carriers, operations, named contexts and law checks.

mod context;
mod descriptor;
mod element;
mod group;
mod laver;
pub mod laws;
mod ops;

pub use context::{f_conjugacy_op, LabeledOp, LdContext, Side, TwistPair, DEFAULT_WORD_LEN};
pub use descriptor::{parse_context, quote, resolve_preset, tokenize, Descriptor, Token, PRESETS};
pub use element::{BraidSampler, Carrier, Element};
pub use group::{FiniteGroup, GroupKind, Subgroup, MAX_ORDER};
pub use laver::{LaverTable, MAX_LEVEL};
pub use laws::{CheckOptions, ConditionReport, LawReport};
pub use ops::{Endo, Operation};
