use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::language::{lcp, prefix_counts, Language};
use super::AnalysisError;
use crate::directive::DirectiveSequence;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialWord {
    pub word: Word,
    pub followers: Vec<Letter>,
}

impl SpecialWord {
    pub fn degree(&self) -> usize {
        self.followers.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RsLength {
    pub m: usize,
    pub p: u64,
    pub special: Vec<SpecialWord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizedBranch {
    pub word: Word,
    pub followers: Vec<Letter>,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RightSpecialReport {
    pub level: usize,
    pub m_max: usize,
    pub delta: usize,
    pub lengths: Vec<RsLength>,
    pub stabilized_branches: usize,
    pub stabilized: Vec<StabilizedBranch>,
    /// `p(m+1) - p(m) = Σ (deg - 1)` at every measured `m < m_max`.
    pub identity_holds: bool,
}

/// Right-special words of length `m` read off the sorted set `L_{m+1}`.
pub fn right_special(next: &[Word]) -> Vec<SpecialWord> {
    let mut groups: BTreeMap<&[Letter], BTreeSet<Letter>> = BTreeMap::new();
    for w in next {
        let (head, last) = w.split_at(w.len() - 1);
        groups.entry(head).or_default().insert(last[0]);
    }
    groups
        .into_iter()
        .filter(|(_, f)| f.len() >= 2)
        .map(|(w, f)| SpecialWord {
            word: Word::from(w),
            followers: f.into_iter().collect(),
        })
        .collect()
}

/// Right-special words for `m = 1..=m_max` and the branches that persist as
/// suffixes over `[m_max - Δ, m_max]`. `Δ` defaults to a quarter of `m_max`.
pub fn right_special_report(
    t: &DirectiveSequence,
    level: usize,
    m_max: usize,
    delta: Option<usize>,
) -> Result<RightSpecialReport, AnalysisError> {
    let delta = delta.unwrap_or(m_max / 4);
    if delta >= m_max {
        return Err(AnalysisError::Gap { delta, m_max });
    }
    let top = Language::new(t).words(level, m_max + 1)?;
    let words = &top.words;
    let p = prefix_counts(words, m_max + 1);

    // Adjacent sorted words with common prefix of length exactly m witness a
    // branching of that prefix.
    let mut by_length: Vec<BTreeMap<Word, BTreeSet<Letter>>> = vec![BTreeMap::new(); m_max + 1];
    for pair in words.windows(2) {
        let l = lcp(&pair[0], &pair[1]);
        if l == 0 || l > m_max {
            continue;
        }
        let entry = by_length[l].entry(Word::from(&pair[0][..l])).or_default();
        entry.insert(pair[0][l]);
        entry.insert(pair[1][l]);
    }
    let lengths: Vec<RsLength> = (1..=m_max)
        .map(|m| RsLength {
            m,
            p: p[m],
            special: by_length[m]
                .iter()
                .map(|(w, f)| SpecialWord {
                    word: w.clone(),
                    followers: f.iter().copied().collect(),
                })
                .collect(),
        })
        .collect();
    let identity_holds = (1..m_max).all(|m| {
        let excess: u64 = lengths[m - 1]
            .special
            .iter()
            .map(|s| s.degree() as u64 - 1)
            .sum();
        p[m + 1] - p[m] == excess
    });

    let m0 = m_max - delta;
    let mut stable: Option<BTreeSet<Word>> = None;
    for m in m0..=m_max {
        let suffixes: BTreeSet<Word> = lengths[m - 1]
            .special
            .iter()
            .map(|s| Word::from(&s.word[m - m0..]))
            .collect();
        stable = Some(match stable {
            None => suffixes,
            Some(prev) => prev.intersection(&suffixes).cloned().collect(),
        });
    }
    let at_m0: BTreeMap<&Word, &SpecialWord> = lengths[m0 - 1]
        .special
        .iter()
        .map(|s| (&s.word, s))
        .collect();
    let stabilized: Vec<StabilizedBranch> = stable
        .unwrap_or_default()
        .into_iter()
        .map(|w| {
            let followers = at_m0[&w].followers.clone();
            StabilizedBranch {
                degree: followers.len(),
                followers,
                word: w,
            }
        })
        .collect();
    Ok(RightSpecialReport {
        level,
        m_max,
        delta,
        stabilized_branches: stabilized.len(),
        stabilized,
        lengths,
        identity_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::language;
    use crate::directive::fibonacci;

    #[test]
    fn fibonacci_single_branch() {
        let r = right_special_report(&fibonacci(), 0, 60, None).unwrap();
        assert_eq!(r.delta, 15);
        assert!(r.identity_holds);
        assert_eq!(r.stabilized_branches, 1);
        assert_eq!(r.stabilized[0].degree, 2);
        for l in &r.lengths {
            assert_eq!(l.special.len(), 1);
        }
    }

    #[test]
    fn grouping_matches_lcp_scan() {
        let f = fibonacci();
        let r = right_special_report(&f, 0, 12, Some(3)).unwrap();
        for m in 1..=12 {
            let next = language(&f, m + 1, 0).unwrap();
            assert_eq!(right_special(&next.words), r.lengths[m - 1].special);
        }
    }
}
