use thiserror::Error;

use crate::dynstr::NodeId;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("position {pos} is out of range for a string of length {len}")]
    OutOfRange { pos: usize, len: usize },

    #[error("range [{start}..{end}] is invalid for a string of length {len}")]
    BadRange { start: usize, end: usize, len: usize },

    #[error("symbol {0} exceeds the alphabet bound")]
    SymbolTooLarge(u32),

    #[error("node {0:?} is not live")]
    DeadNode(NodeId),

    #[error("pattern must be nonempty")]
    EmptyPattern,

    #[error("text length {text} exceeds twice the pattern length {pattern}")]
    TextTooLong { pattern: usize, text: usize },

    #[error("tree precondition violated: {0}")]
    Tree(String),

    #[error("invalid gadget instance: {0}")]
    Gadget(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
