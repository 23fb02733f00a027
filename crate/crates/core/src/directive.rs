//! Directive sequences `τ_0, τ_1, …` with an optional periodic continuation.

use std::borrow::Cow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Matrix;
use crate::words::{compose, Morphism, Word, WordError};

/// Composed images longer than this are refused rather than materialized.
pub const MAX_IMAGE_LETTERS: u128 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DirectiveError {
    #[error("directive sequence is empty")]
    Empty,
    #[error(
        "alphabet chain broken at level {level}: τ_{level} reads {source_size} letters \
         but τ_{next} writes {target_size}",
        next = level + 1
    )]
    Chain {
        level: usize,
        source_size: usize,
        target_size: usize,
    },
    #[error("periodic extension starting at {from} is invalid for {len} morphisms")]
    Extension { from: usize, len: usize },
    #[error("level {level} is beyond the available directive prefix of length {available}")]
    Unavailable { level: usize, available: usize },
    #[error("composed images from level {from} to {to} would exceed {limit} letters")]
    TooLong { from: usize, to: usize, limit: u128 },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Rule producing `τ_n` beyond the stored prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Extension {
    /// `τ_n = τ_{from + (n - from) mod (len - from)}` for `n ≥ len`.
    Periodic { from: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectiveSequence {
    morphisms: Vec<Morphism>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extension: Option<Extension>,
}

#[derive(Deserialize)]
struct DirectiveRepr {
    morphisms: Vec<Morphism>,
    #[serde(default)]
    extension: Option<Extension>,
}

impl<'de> Deserialize<'de> for DirectiveSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = DirectiveRepr::deserialize(d)?;
        DirectiveSequence::new(repr.morphisms, repr.extension).map_err(serde::de::Error::custom)
    }
}

impl DirectiveSequence {
    /// Levels are relabelled so that morphism `n` maps level `n + 1` to level `n`.
    pub fn new(
        morphisms: Vec<Morphism>,
        extension: Option<Extension>,
    ) -> Result<Self, DirectiveError> {
        if morphisms.is_empty() {
            return Err(DirectiveError::Empty);
        }
        let morphisms: Vec<Morphism> = morphisms
            .iter()
            .enumerate()
            .map(|(n, m)| m.at_level(n))
            .collect();
        for n in 0..morphisms.len() - 1 {
            let here = morphisms[n].source().size;
            let next = morphisms[n + 1].target().size;
            if here != next {
                return Err(DirectiveError::Chain {
                    level: n,
                    source_size: here,
                    target_size: next,
                });
            }
        }
        if let Some(Extension::Periodic { from }) = extension {
            let len = morphisms.len();
            if from >= len || morphisms[len - 1].source().size != morphisms[from].target().size {
                return Err(DirectiveError::Extension { from, len });
            }
        }
        Ok(DirectiveSequence {
            morphisms,
            extension,
        })
    }

    pub fn finite(morphisms: Vec<Morphism>) -> Result<Self, DirectiveError> {
        Self::new(morphisms, None)
    }

    /// The constant sequence `τ_n = m` for all `n`.
    pub fn constant(m: Morphism) -> Result<Self, DirectiveError> {
        Self::new(vec![m], Some(Extension::Periodic { from: 0 }))
    }

    pub fn prefix(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn extension(&self) -> Option<Extension> {
        self.extension
    }

    pub fn is_infinite(&self) -> bool {
        self.extension.is_some()
    }

    /// Number of available morphisms, `None` when unbounded.
    pub fn available(&self) -> Option<usize> {
        if self.is_infinite() {
            None
        } else {
            Some(self.morphisms.len())
        }
    }

    pub fn has_level(&self, n: usize) -> bool {
        self.available().is_none_or(|a| n < a)
    }

    /// `τ_n`, generated by the extension rule past the stored prefix.
    pub fn get(&self, n: usize) -> Option<Cow<'_, Morphism>> {
        let len = self.morphisms.len();
        if n < len {
            return Some(Cow::Borrowed(&self.morphisms[n]));
        }
        match self.extension {
            None => None,
            Some(Extension::Periodic { from }) => {
                let idx = from + (n - from) % (len - from);
                Some(Cow::Owned(self.morphisms[idx].at_level(n)))
            }
        }
    }

    fn require(&self, n: usize) -> Result<Cow<'_, Morphism>, DirectiveError> {
        self.get(n).ok_or(DirectiveError::Unavailable {
            level: n,
            available: self.morphisms.len(),
        })
    }

    /// `|V_n|`.
    pub fn alphabet_size(&self, n: usize) -> Option<usize> {
        if n == 0 {
            return Some(self.morphisms[0].target().size);
        }
        self.get(n - 1).map(|m| m.source().size)
    }

    /// Image lengths `|τ_{[n,N)}(a)|` for each letter `a` of `V_N`, saturating.
    pub fn image_lengths(&self, n: usize, big_n: usize) -> Result<Vec<u128>, DirectiveError> {
        let size = self.alphabet_size(n).ok_or(DirectiveError::Unavailable {
            level: n,
            available: self.morphisms.len(),
        })?;
        let mut lens = vec![1u128; size];
        for level in n..big_n {
            let m = self.require(level)?;
            lens = m
                .images()
                .iter()
                .map(|w| {
                    w.iter()
                        .fold(0u128, |acc, &l| acc.saturating_add(lens[l as usize - 1]))
                })
                .collect();
        }
        Ok(lens)
    }

    pub fn min_image_len(&self, n: usize, big_n: usize) -> Result<u128, DirectiveError> {
        Ok(self.image_lengths(n, big_n)?.into_iter().min().unwrap_or(0))
    }

    /// `τ_{[n,N)} = τ_n ∘ … ∘ τ_{N-1}`; the identity on `V_n` when `N = n`.
    pub fn compose_range(&self, n: usize, big_n: usize) -> Result<Morphism, DirectiveError> {
        let total: u128 = self
            .image_lengths(n, big_n)?
            .into_iter()
            .fold(0u128, u128::saturating_add);
        if total > MAX_IMAGE_LETTERS {
            return Err(DirectiveError::TooLong {
                from: n,
                to: big_n,
                limit: MAX_IMAGE_LETTERS,
            });
        }
        if big_n <= n {
            let alphabet = self.require(n)?.target();
            return Ok(Morphism::identity(alphabet));
        }
        let mut acc = self.require(big_n - 1)?.into_owned();
        for level in (n..big_n - 1).rev() {
            let outer = self.require(level)?;
            acc = compose(&outer, &acc)?;
        }
        Ok(acc)
    }

    /// Applies `τ_{[n,N)}` to a level-`N` word.
    pub fn apply_range(&self, n: usize, big_n: usize, w: &[u32]) -> Result<Word, DirectiveError> {
        let mut cur = Word::from(w);
        for level in (n..big_n).rev() {
            cur = self.require(level)?.apply(&cur);
        }
        Ok(cur)
    }

    /// Zero pattern of the incidence matrix of `τ_{[n,N)}`, computed on booleans
    /// so that long windows never overflow.
    pub fn window_support(&self, n: usize, big_n: usize) -> Result<Matrix, DirectiveError> {
        let mut acc: Option<Matrix> = None;
        for level in n..big_n {
            let inc = support(&self.require(level)?.incidence());
            acc = Some(match acc {
                None => inc,
                Some(prev) => support(&inc.mul(&prev).expect("chained shapes")),
            });
        }
        Ok(acc.unwrap_or_else(|| Matrix::identity(self.alphabet_size(n).unwrap_or(1))))
    }

    /// Primitivity of a window is checked on the composed morphism.
    pub fn is_primitive_window(&self, n: usize, big_n: usize) -> Result<bool, DirectiveError> {
        Ok(self.window_support(n, big_n)?.is_positive())
    }
}

fn support(m: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if m.get(r, c) > 0 {
                out.set(r, c, 1);
            }
        }
    }
    out
}

/// The Fibonacci substitution `a → ab, b → a` as a constant directive sequence.
pub fn fibonacci() -> DirectiveSequence {
    let m = Morphism::from_images(0, 2, vec![vec![1, 2], vec![1]]).expect("valid morphism");
    DirectiveSequence::constant(m).expect("valid constant sequence")
}
