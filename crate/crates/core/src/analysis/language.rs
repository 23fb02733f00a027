use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use super::AnalysisError;
use crate::directive::DirectiveSequence;
use crate::words::{Letter, Morphism, Word};

/// Levels below the query level used to seed the allowed 2-words.
pub const DEFAULT_PAIR_BUDGET: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairFixpoint {
    pub level: usize,
    pub pairs: BTreeSet<(Letter, Letter)>,
    /// Seeding one level shallower gives the same set.
    pub converged: bool,
    /// Deepest level whose images seeded the set.
    pub horizon: usize,
}

fn image_pairs(img: &[Letter], out: &mut BTreeSet<(Letter, Letter)>) {
    out.extend(img.windows(2).map(|w| (w[0], w[1])));
}

fn propagate(t: &DirectiveSequence, n: usize, seed: usize) -> BTreeSet<(Letter, Letter)> {
    let tau = t.get(seed).expect("seed level available");
    let mut pairs = BTreeSet::new();
    for img in tau.images() {
        image_pairs(img, &mut pairs);
    }
    for level in (n..seed).rev() {
        let tau = t.get(level).expect("level available");
        let mut next = BTreeSet::new();
        let mut letters = BTreeSet::new();
        for &(a, b) in &pairs {
            letters.insert(a);
            letters.insert(b);
            let (ia, ib) = (tau.image(a), tau.image(b));
            next.insert((*ia.last().unwrap(), ib[0]));
        }
        for a in letters {
            image_pairs(tau.image(a), &mut next);
        }
        pairs = next;
    }
    pairs
}

/// Allowed 2-words at level `n`, propagated down from the 2-words inside the
/// images of `τ_D`, `D = n + budget` (or the deepest available level).
pub fn pair_fixpoint(
    t: &DirectiveSequence,
    n: usize,
    budget: usize,
) -> Result<PairFixpoint, AnalysisError> {
    if !t.has_level(n) {
        return Err(AnalysisError::NoLevel { level: n });
    }
    let deepest = match t.available() {
        Some(len) => (n + budget).min(len - 1),
        None => n + budget,
    };
    let pairs = propagate(t, n, deepest);
    let converged = deepest > n && propagate(t, n, deepest - 1) == pairs;
    Ok(PairFixpoint {
        level: n,
        pairs,
        converged,
        horizon: deepest,
    })
}

/// `L_m` at one level, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LanguageSet {
    pub level: usize,
    pub m: usize,
    pub words: Vec<Word>,
    /// Deepest level whose morphisms were used.
    pub horizon: usize,
}

type SetCache = HashMap<(usize, usize), Arc<LanguageSet>>;

/// Memoizing language generator for one directive sequence.
///
/// Words of length `m ≥ 3` at level `n` are read inside `τ_{[n,N)}(u)` for
/// allowed words `u` of length `m' = 1 + ⌈(m-1)/ℓ⌉` at level `N`, where `N`
/// is the first level with `ℓ = min_a |τ_{[n,N)}(a)| ≥ 2`; only windows
/// starting inside the image of the first letter of `u` are kept. Lengths 1
/// and 2 come from the 2-word fixpoint.
pub struct Language<'a> {
    t: &'a DirectiveSequence,
    budget: usize,
    pairs: Mutex<HashMap<usize, Arc<PairFixpoint>>>,
    sets: Mutex<SetCache>,
    composed: Mutex<HashMap<(usize, usize), Arc<Morphism>>>,
}

impl<'a> Language<'a> {
    pub fn new(t: &'a DirectiveSequence) -> Self {
        Self::with_budget(t, DEFAULT_PAIR_BUDGET)
    }

    pub fn with_budget(t: &'a DirectiveSequence, budget: usize) -> Self {
        Language {
            t,
            budget,
            pairs: Mutex::new(HashMap::new()),
            sets: Mutex::new(HashMap::new()),
            composed: Mutex::new(HashMap::new()),
        }
    }

    pub fn sequence(&self) -> &DirectiveSequence {
        self.t
    }

    pub fn pairs(&self, n: usize) -> Result<Arc<PairFixpoint>, AnalysisError> {
        if let Some(p) = self.pairs.lock().unwrap().get(&n) {
            return Ok(p.clone());
        }
        let p = Arc::new(pair_fixpoint(self.t, n, self.budget)?);
        self.pairs.lock().unwrap().insert(n, p.clone());
        Ok(p)
    }

    pub fn composed(&self, n: usize, big_n: usize) -> Result<Arc<Morphism>, AnalysisError> {
        if let Some(m) = self.composed.lock().unwrap().get(&(n, big_n)) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.t.compose_range(n, big_n)?);
        self.composed.lock().unwrap().insert((n, big_n), m.clone());
        Ok(m)
    }

    fn deepest(&self) -> Option<usize> {
        self.t.available()
    }

    /// First `N > n` with every `|τ_{[n,N)}(a)| ≥ 2`.
    fn step(&self, n: usize, m: usize) -> Result<(usize, usize), AnalysisError> {
        let limit = self.deepest().unwrap_or(n + 64);
        for big_n in n + 1..=limit {
            let len = self.t.min_image_len(n, big_n)?;
            if len >= 2 {
                return Ok((big_n, len.min(usize::MAX as u128) as usize));
            }
        }
        Err(AnalysisError::TooShallow { level: n, m })
    }

    pub fn words(&self, n: usize, m: usize) -> Result<Arc<LanguageSet>, AnalysisError> {
        if let Some(s) = self.sets.lock().unwrap().get(&(n, m)) {
            return Ok(s.clone());
        }
        let set = Arc::new(self.compute(n, m)?);
        self.sets.lock().unwrap().insert((n, m), set.clone());
        Ok(set)
    }

    fn compute(&self, n: usize, m: usize) -> Result<LanguageSet, AnalysisError> {
        let pairs = self.pairs(n)?;
        let horizon = pairs.horizon;
        let words: Vec<Word> = match m {
            0 => vec![Word::empty()],
            1 => pairs
                .pairs
                .iter()
                .flat_map(|&(a, b)| [a, b])
                .collect::<BTreeSet<_>>()
                .into_iter()
                .map(|a| Word::new(vec![a]))
                .collect(),
            2 => pairs
                .pairs
                .iter()
                .map(|&(a, b)| Word::new(vec![a, b]))
                .collect(),
            _ => {
                let (big_n, len) = self.step(n, m)?;
                let m_up = 1 + (m - 1).div_ceil(len);
                let upper = self.words(big_n, m_up)?;
                let tau = self.composed(n, big_n)?;
                let found = windows_from(&tau, &upper.words, m);
                let mut words: Vec<Word> = found.into_iter().collect();
                words.sort_unstable();
                return Ok(LanguageSet {
                    level: n,
                    m,
                    words,
                    horizon: upper.horizon.max(horizon),
                });
            }
        };
        Ok(LanguageSet {
            level: n,
            m,
            words,
            horizon,
        })
    }
}

/// Length-`m` windows of `τ(u)` starting inside `τ(u_0)`.
fn windows_from(tau: &Morphism, upper: &[Word], m: usize) -> HashSet<Word> {
    upper
        .par_iter()
        .fold(HashSet::new, |mut acc, u| {
            let buf = tau.apply(u);
            let first = tau.image(u[0]).len();
            for start in 0..first {
                if start + m <= buf.len() {
                    acc.insert(Word::from(&buf[start..start + m]));
                }
            }
            acc
        })
        .reduce(HashSet::new, |a, b| {
            let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            big.extend(small);
            big
        })
}

/// `L_m(X^{(n)})` with the default budget.
pub fn language(t: &DirectiveSequence, m: usize, n: usize) -> Result<LanguageSet, AnalysisError> {
    Ok((*Language::new(t).words(n, m)?).clone())
}

/// `L_m` as the length-`m` factors of `τ_{[n,N)}(ab)` over allowed 2-words
/// `ab` at level `N`; requires every `|τ_{[n,N)}(a)| ≥ m`.
pub fn language_at_depth(
    t: &DirectiveSequence,
    m: usize,
    n: usize,
    big_n: usize,
) -> Result<LanguageSet, AnalysisError> {
    if t.min_image_len(n, big_n)? < m as u128 {
        return Err(AnalysisError::TooShallow { level: n, m });
    }
    let pairs = pair_fixpoint(t, big_n, DEFAULT_PAIR_BUDGET)?;
    let tau = t.compose_range(n, big_n)?;
    let two: Vec<Word> = pairs
        .pairs
        .iter()
        .map(|&(a, b)| Word::new(vec![a, b]))
        .collect();
    let mut words: BTreeSet<Word> = BTreeSet::new();
    for w in &two {
        let buf = tau.apply(w);
        words.extend(crate::words::factors(&buf, m));
    }
    Ok(LanguageSet {
        level: n,
        m,
        words: words.into_iter().collect(),
        horizon: pairs.horizon,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityRow {
    pub m: usize,
    pub p: u64,
    /// `ln p(m) / m`; reported only.
    pub h: f64,
}

/// `p(1..=m_max)` at level `n`. Each `L_m` is the set of length-`m` prefixes
/// of `L_{m_max}`, which is exact because allowed words extend to the right.
pub fn complexity_table(
    t: &DirectiveSequence,
    m_max: usize,
    n: usize,
) -> Result<Vec<ComplexityRow>, AnalysisError> {
    let top = Language::new(t).words(n, m_max)?;
    Ok(prefix_counts(&top.words, m_max)
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(m, p)| ComplexityRow {
            m,
            p,
            h: (p as f64).ln() / m as f64,
        })
        .collect())
}

/// `counts[m]` = number of distinct length-`m` prefixes of the sorted `words`.
pub(crate) fn prefix_counts(words: &[Word], m_max: usize) -> Vec<u64> {
    let mut counts = vec![0u64; m_max + 1];
    if words.is_empty() {
        return counts;
    }
    // A new length-m prefix starts wherever the common prefix with the
    // predecessor is shorter than m.
    for c in counts.iter_mut().skip(1) {
        *c = 1;
    }
    counts[0] = 1;
    for pair in words.windows(2) {
        let l = lcp(&pair[0], &pair[1]);
        for c in counts.iter_mut().take(m_max + 1).skip(l + 1) {
            *c += 1;
        }
    }
    counts
}

pub(crate) fn lcp(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directive::fibonacci;
    use crate::words::factors;

    fn brute(m: usize) -> BTreeSet<Word> {
        let f = fibonacci();
        let w = f.apply_range(0, 20, &[1]).unwrap();
        factors(&w, m)
    }

    #[test]
    fn fibonacci_pairs() {
        let p = pair_fixpoint(&fibonacci(), 0, 6).unwrap();
        assert!(p.converged);
        assert_eq!(
            p.pairs.into_iter().collect::<Vec<_>>(),
            vec![(1, 1), (1, 2), (2, 1)]
        );
    }

    #[test]
    fn fibonacci_language_matches_brute_force() {
        let f = fibonacci();
        let lang = Language::new(&f);
        for m in 0..=40 {
            let got = lang.words(0, m).unwrap();
            assert_eq!(got.words.len(), m + 1, "p({m})");
            if m > 0 {
                let b: Vec<Word> = brute(m).into_iter().collect();
                assert_eq!(got.words, b);
            }
        }
    }

    #[test]
    fn depth_variant_agrees() {
        let f = fibonacci();
        let a = language_at_depth(&f, 8, 0, 6).unwrap();
        let b = language_at_depth(&f, 8, 0, 8).unwrap();
        assert_eq!(a.words, b.words);
        assert_eq!(a.words, language(&f, 8, 0).unwrap().words);
        assert!(language_at_depth(&f, 8, 0, 3).is_err());
    }

    #[test]
    fn complexity_prefix_counts() {
        let rows = complexity_table(&fibonacci(), 30, 0).unwrap();
        assert_eq!(rows.len(), 30);
        for r in rows {
            assert_eq!(r.p, r.m as u64 + 1);
        }
    }

    #[test]
    fn single_letter_alphabet() {
        let m = Morphism::from_images(0, 1, vec![vec![1, 1]]).unwrap();
        let t = DirectiveSequence::constant(m).unwrap();
        let p = pair_fixpoint(&t, 0, 3).unwrap();
        assert_eq!(p.pairs.into_iter().collect::<Vec<_>>(), vec![(1, 1)]);
        assert_eq!(language(&t, 5, 0).unwrap().words.len(), 1);
    }
}
