use std::fmt;

use serde::Serialize;

use crate::bratteli::BratteliDiagram;
use crate::directive::{DirectiveSequence, Extension};
use crate::words::{runs, Letter, Word};

/// A clause of the (P_k) / (P_∞) definitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// `τ_0` is a hat morphism.
    Hat,
    /// (1) `τ_n` is primitive.
    Primitive,
    /// (2) the doubled prefix for `i ≤ k + 1`.
    Prefix,
    /// (3) the prefix `v_1^i v_2` for `i > k + 1`.
    LeadingRun,
    /// (4) suffix `v_{m_n}`.
    Suffix,
    /// (4) no factor `v_{m_n} v_1`.
    Marker,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Hat => "tau_0 hat",
            Clause::Primitive => "clause (1) primitive",
            Clause::Prefix => "clause (2) prefix",
            Clause::LeadingRun => "clause (3) prefix",
            Clause::Suffix => "clause (4) suffix",
            Clause::Marker => "clause (4) factor",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PkFailure {
    pub level: usize,
    pub vertex: Option<usize>,
    pub clause: Clause,
    pub detail: String,
}

impl fmt::Display for PkFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at level {}", self.clause, self.level)?;
        if let Some(v) = self.vertex {
            write!(f, ", vertex {v}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefixKind {
    /// `v_1² … v_{i-1}² v_i … v_{k+1}`, for `i ≤ k + 1`.
    Doubled,
    /// `v_1^i v_2`, for `i > k + 1`.
    Run,
}

/// `image = prefix · interior · suffix`, unless `overlap` is set: then the
/// image equals the prefix and the suffix is its last letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub vertex: usize,
    pub kind: PrefixKind,
    pub prefix: Word,
    pub interior: Word,
    pub suffix: Letter,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub overlap: bool,
}

impl Decomposition {
    pub fn reassemble(&self) -> Word {
        if self.overlap {
            return self.prefix.clone();
        }
        let mut w = self.prefix.concat(&self.interior);
        w.push(self.suffix);
        w
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PkWitness {
    /// `None` for (P_∞).
    pub k: Option<usize>,
    /// `levels[n - 1]` decomposes the images of `τ_n`.
    pub levels: Vec<Vec<Decomposition>>,
}

fn mandated_prefix(i: usize, k: usize) -> (PrefixKind, Word) {
    if i <= k + 1 {
        let mut blocks: Vec<(Letter, usize)> = (1..i).map(|j| (j as Letter, 2)).collect();
        blocks.extend((i..=k + 1).map(|j| (j as Letter, 1)));
        (PrefixKind::Doubled, runs(&blocks))
    } else {
        (PrefixKind::Run, runs(&[(1, i), (2, 1)]))
    }
}

fn check_levels(
    t: &DirectiveSequence,
    depth: usize,
    k_at: impl Fn(usize) -> usize,
) -> Result<Vec<Vec<Decomposition>>, PkFailure> {
    let tau0 = t.get(0).expect("level 0 exists");
    if !tau0.is_hat() {
        return Err(PkFailure {
            level: 0,
            vertex: None,
            clause: Clause::Hat,
            detail: "images of distinct letters share a letter".into(),
        });
    }
    let mut levels = Vec::new();
    for n in 1..depth {
        let tau = t.get(n).expect("level within depth");
        let k = k_at(n);
        let m = tau.target().size as Letter;
        if !tau.is_primitive() {
            return Err(PkFailure {
                level: n,
                vertex: None,
                clause: Clause::Primitive,
                detail: "some image misses a letter".into(),
            });
        }
        let mut decs = Vec::with_capacity(tau.source().size);
        for (idx, img) in tau.images().iter().enumerate() {
            let i = idx + 1;
            let (kind, prefix) = mandated_prefix(i, k);
            let fail = |clause: Clause, detail: String| PkFailure {
                level: n,
                vertex: Some(i),
                clause,
                detail,
            };
            if !img.starts_with(&prefix) {
                let clause = match kind {
                    PrefixKind::Doubled => Clause::Prefix,
                    PrefixKind::Run => Clause::LeadingRun,
                };
                return Err(fail(clause, format!("image {img} lacks prefix {prefix}")));
            }
            let last = *img.last().unwrap();
            if last != m {
                return Err(fail(
                    Clause::Suffix,
                    format!("image {img} ends in v_{last}, expected v_{m}"),
                ));
            }
            if let Some(pos) = img.windows(2).position(|w| w[0] == m && w[1] == 1) {
                return Err(fail(
                    Clause::Marker,
                    format!("image {img} has v_{m} v_1 at position {}", pos + 1),
                ));
            }
            let overlap = img.len() == prefix.len();
            let interior = if overlap {
                Word::empty()
            } else {
                Word::from(&img[prefix.len()..img.len() - 1])
            };
            decs.push(Decomposition {
                vertex: i,
                kind,
                prefix,
                interior,
                suffix: last,
                overlap,
            });
        }
        levels.push(decs);
    }
    Ok(levels)
}

/// Levels whose morphisms are all distinct: the stored prefix plus one period
/// of a periodic extension.
fn checked_depth(t: &DirectiveSequence) -> usize {
    let len = t.prefix().len();
    match t.extension() {
        None => len,
        Some(Extension::Periodic { from }) => len + (len - from),
    }
}

/// Checks Property (P_k) on every available level.
pub fn check_pk(t: &DirectiveSequence, k: usize) -> Result<PkWitness, PkFailure> {
    let levels = check_levels(t, checked_depth(t), |_| k)?;
    Ok(PkWitness { k: Some(k), levels })
}

/// Checks Property (P_∞) on the stored levels.
pub fn check_pinf(t: &DirectiveSequence) -> Result<PkWitness, PkFailure> {
    let levels = check_levels(t, t.prefix().len(), |n| n)?;
    Ok(PkWitness { k: None, levels })
}

/// Equal path number property: each matrix has constant row sums.
pub fn check_equal_row_sums(d: &BratteliDiagram) -> bool {
    d.has_equal_row_sums()
}
