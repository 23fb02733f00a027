//! Languages, complexity, right-special factors, desubstitution, signal
//! audits and asymptotic-pair windows.

use thiserror::Error;

use crate::directive::DirectiveError;

mod desubst;
mod language;
mod pairs;
mod signals;
mod special;

pub use desubst::{desubstitute_window, Desubstitution};
pub use language::{
    complexity_table, language, language_at_depth, pair_fixpoint, ComplexityRow, Language,
    LanguageSet, PairFixpoint, DEFAULT_PAIR_BUDGET,
};
pub use pairs::{
    asymptotic_pair_windows, is_allowed, pair_frame, AsymptoticPairWindow, LevelZeroLetters,
    PairFrame,
};
pub use signals::{
    signal_audit, AuditMode, Counterexample, LevelSignal, SignalAudit, SignalRecord,
};
pub use special::{
    right_special, right_special_report, RightSpecialReport, RsLength, SpecialWord,
    StabilizedBranch,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("level {level}: no available depth gives images long enough for words of length {m}")]
    TooShallow { level: usize, m: usize },
    #[error("level {level} is not available")]
    NoLevel { level: usize },
    #[error("window too short: no marker v_m v_1 found at level {level}")]
    NoMarker { level: usize },
    #[error("segment {segment} at level {level} matches no image")]
    NoMatch { level: usize, segment: String },
    #[error("segment {segment} at level {level} matches several images")]
    Ambiguous { level: usize, segment: String },
    #[error("component index {i} is outside 1..={k}")]
    Component { i: usize, k: usize },
    #[error("stability gap {delta} exceeds m_max {m_max}")]
    Gap { delta: usize, m_max: usize },
    #[error("sequence fails validation: {0}")]
    Invalid(String),
    #[error(transparent)]
    Directive(#[from] DirectiveError),
}
