//! Constructive recipes: amplification, (P_k)/(P_∞) orderings, Toeplitz
//! morphisms, the subexponential family, and their validators.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bratteli::BratteliError;
use crate::directive::DirectiveError;
use crate::matrix::MatrixError;

mod amplify;
mod checks;
mod ordering;
mod subexp;
mod toeplitz;

pub use amplify::{amplify_diagram, copy_pattern, split_evenly};
pub use checks::{
    check_equal_row_sums, check_pinf, check_pk, Clause, Decomposition, PkFailure, PkWitness,
    PrefixKind,
};
pub use ordering::{assign_pinf_ordering, assign_pk_ordering, pk_word};
pub use subexp::{
    build_subexp_family, de_bruijn, linear_de_bruijn, GFunction, SubexpLevel, SubexpSpec,
};
pub use toeplitz::{
    check_toeplitz, toeplitz_morphisms, toeplitz_ordering, toeplitz_word, ToeplitzCheck,
};

/// The necessary conditions listed after the definition of Property (P_k),
/// plus the room needed to keep `v_m v_1` out of every image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RemarkCondition {
    /// (i) every entry is positive.
    PositiveEntries,
    /// (ii) `m_n > k`.
    AlphabetSize,
    /// (iii) `A(i, j) ≥ 2` for `j < i ≤ k + 1`.
    DoubledPrefix,
    /// (iv) `A(i, 1) ≥ i` for `i > k + 1`.
    LeadingRun,
    /// `m_n ≥ k + 2`, so the mandated prefix never ends in `v_{m_n}`.
    MarkerRoom,
}

impl fmt::Display for RemarkCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RemarkCondition::PositiveEntries => "condition (i): all entries positive",
            RemarkCondition::AlphabetSize => "condition (ii): m_n > k",
            RemarkCondition::DoubledPrefix => "condition (iii): A(i,j) >= 2 for j < i <= k+1",
            RemarkCondition::LeadingRun => "condition (iv): A(i,1) >= i for i > k+1",
            RemarkCondition::MarkerRoom => "m_n >= k+2 (room for the v_m suffix block)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("window too short: reached {achieved} amplified levels, need at least {needed}")]
    WindowTooShort { achieved: usize, needed: usize },
    #[error("no telescoping starting at level {level} has a positive matrix within the window")]
    NonSimple { level: usize },
    #[error("level {level}, vertex {vertex}: {condition} fails")]
    Precondition {
        level: usize,
        vertex: usize,
        condition: RemarkCondition,
    },
    #[error("level {level}: entry ({row},{col}) = {value} must exceed 3")]
    SmallEntry {
        level: usize,
        row: usize,
        col: usize,
        value: u64,
    },
    #[error("level {level}: row sums are not all equal")]
    UnequalRowSums { level: usize },
    #[error("level {level}: no alpha up to the cap {cap} satisfies the growth inequality")]
    AlphaCap { level: usize, cap: u32 },
    #[error("level {level}: image length exceeds the overflow guard")]
    LengthOverflow { level: usize },
    #[error("invalid growth function: {0}")]
    GFunction(String),
    #[error(transparent)]
    Bratteli(#[from] BratteliError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Directive(#[from] DirectiveError),
}
