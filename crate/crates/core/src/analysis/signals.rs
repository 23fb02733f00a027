use std::collections::BTreeSet;

use serde::Serialize;

use super::desubst::decompose;
use super::pairs::is_allowed;
use super::special::right_special_report;
use super::AnalysisError;
use crate::constructions::{check_pinf, check_pk};
use crate::directive::DirectiveSequence;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "k", rename_all = "snake_case")]
pub enum AuditMode {
    Pk(usize),
    Pinf,
}

impl AuditMode {
    fn bound(&self, level: usize) -> usize {
        match *self {
            AuditMode::Pk(k) => k,
            AuditMode::Pinf => level,
        }
    }
}

/// What a right-special word looks like from level `level`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSignal {
    pub level: usize,
    /// Last complete level-`level` letter before the branching point.
    pub signal: Letter,
    /// Level-`level` letters that may follow the recognized letters and whose
    /// image continues the word by one of the level-0 followers.
    pub followers: Vec<Letter>,
    /// Level-0 letters between the end of the signal image and the branching point.
    pub tail: Word,
    /// Whether the letters before the signal read `v_m v_1² … v_{i-1}²`;
    /// `None` when `i = 1` or the window does not reach back far enough.
    pub context: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignalRecord {
    pub word: Word,
    pub followers: Vec<Letter>,
    pub levels: Vec<LevelSignal>,
    /// Signal index shared by the two deepest audited levels.
    pub stable_index: Option<Letter>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: Word,
    pub level: usize,
    pub clause: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignalAudit {
    pub mode: AuditMode,
    pub m_max: usize,
    pub audited: usize,
    pub records: Vec<SignalRecord>,
    pub counterexamples: Vec<Counterexample>,
}

impl SignalAudit {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// Deepest level reached by every record.
    pub fn common_depth(&self) -> usize {
        self.records
            .iter()
            .map(|r| r.levels.len())
            .min()
            .unwrap_or(0)
    }
}

fn common_prefix_len(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn audit_level(
    t: &DirectiveSequence,
    w: &Word,
    followers: &[Letter],
    level: usize,
) -> Result<Option<LevelSignal>, AnalysisError> {
    let (word, spans) = match decompose(t, w, level, false) {
        Ok(d) => d,
        Err(AnalysisError::NoMarker { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let end = w.len() as isize;
    let Some(j) = (0..word.len())
        .rev()
        .find(|&j| spans[j].1 <= end && spans[j].0 >= 0)
    else {
        return Ok(None);
    };
    let first = (0..=j).find(|&q| spans[q].0 >= 0).unwrap_or(j);
    let tail = Word::from(&w[spans[j].1 as usize..]);
    let tau = t.compose_range(0, level)?;
    let size = t
        .alphabet_size(level)
        .ok_or(AnalysisError::NoLevel { level })?;
    let mut next = BTreeSet::new();
    let mut probe = word[first..=j].to_vec();
    for d in 1..=size as Letter {
        let img = tau.image(d);
        if img.len() > tail.len() && img.starts_with(&tail) && followers.contains(&img[tail.len()])
        {
            probe.push(d);
            if is_allowed(t, level, &probe)? {
                next.insert(d);
            }
            probe.pop();
        }
    }
    let signal = word[j];
    let i = signal as usize;
    let context = if i <= 1 {
        None
    } else {
        let mut want: Vec<Letter> = vec![size as Letter];
        for v in 1..i as Letter {
            want.extend([v, v]);
        }
        (j >= want.len()).then(|| word[j - want.len()..j] == want[..])
    };
    Ok(Some(LevelSignal {
        level,
        signal,
        followers: next.into_iter().collect(),
        tail,
        context,
    }))
}

/// Audits the right-special words of length `m_max` at level 0: each is read
/// back level by level until the window holds no complete letter, and the
/// signal, its followers, the tail and the preceding context are checked.
pub fn signal_audit(
    t: &DirectiveSequence,
    mode: AuditMode,
    m_max: usize,
) -> Result<SignalAudit, AnalysisError> {
    match mode {
        AuditMode::Pk(k) => check_pk(t, k).map(|_| ()),
        AuditMode::Pinf => check_pinf(t).map(|_| ()),
    }
    .map_err(|f| AnalysisError::Invalid(f.to_string()))?;

    let report = right_special_report(t, 0, m_max, Some(0))?;
    let specials = &report.lengths[m_max - 1].special;
    let mut records = Vec::with_capacity(specials.len());
    let mut counterexamples = Vec::new();
    for s in specials {
        let mut levels = Vec::new();
        let mut level = 1;
        while t.has_level(level - 1) {
            match audit_level(t, &s.word, &s.followers, level)? {
                Some(ls) => levels.push(ls),
                None => break,
            }
            level += 1;
        }
        let tau_cache: Vec<_> = levels
            .iter()
            .map(|ls| t.compose_range(0, ls.level))
            .collect::<Result<_, _>>()?;
        for (ls, tau) in levels.iter().zip(&tau_cache) {
            let mut fail = |clause: &str, detail: String| {
                counterexamples.push(Counterexample {
                    word: s.word.clone(),
                    level: ls.level,
                    clause: clause.to_string(),
                    detail,
                })
            };
            let i = ls.signal;
            let bound = mode.bound(ls.level);
            if i as usize > bound {
                fail("index", format!("signal v_{i} exceeds bound {bound}"));
            }
            if ls.followers != [i, i + 1] {
                fail(
                    "followers",
                    format!("signal v_{i} followed by {:?}", ls.followers),
                );
            } else {
                let cp = common_prefix_len(tau.image(i), tau.image(i + 1));
                if ls.tail.len() != cp {
                    fail(
                        "tail",
                        format!("tail length {} but common prefix {cp}", ls.tail.len()),
                    );
                }
            }
            if ls.context == Some(false) {
                fail(
                    "context",
                    format!("signal v_{i} not preceded by v_m v_1^2 ... v_{}^2", i - 1),
                );
            }
        }
        let stable_index = match levels.as_slice() {
            [.., a, b] if a.signal == b.signal => Some(b.signal),
            _ => None,
        };
        records.push(SignalRecord {
            word: s.word.clone(),
            followers: s.followers.clone(),
            levels,
            stable_index,
        });
    }
    Ok(SignalAudit {
        mode,
        m_max,
        audited: records.len(),
        records,
        counterexamples,
    })
}
