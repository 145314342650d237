//! Library side of the `dynlz` command-line tool.

pub mod ov;
pub mod report;
pub mod run;
pub mod scaling;
pub mod script;
pub mod workload;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Direct symbol comparisons; the reference.
    Naive,
    /// Interval partitions with per-interval suffix arrays.
    Fast,
    /// Whole-string suffix array rebuilt lazily after edits.
    Snapshot,
}

/// Runs `$body` with `$I` bound to the index type selected by `$backend`.
#[macro_export]
macro_rules! with_backend {
    ($backend:expr, $I:ident => $body:expr) => {
        match $backend {
            $crate::Backend::Naive => {
                type $I = ::dynlz::index::NaiveIndex;
                $body
            }
            $crate::Backend::Fast => {
                type $I = ::dynlz::index::FastIndex;
                $body
            }
            $crate::Backend::Snapshot => {
                type $I = ::dynlz::index::SnapshotIndex;
                $body
            }
        }
    };
}
