use serde::Serialize;

use super::language::pair_fixpoint;
use super::{AnalysisError, DEFAULT_PAIR_BUDGET};
use crate::directive::DirectiveSequence;
use crate::words::{runs, Letter, Morphism, Word};

/// Two allowed words placed so that index `alpha` (negative) is their first
/// letter; they agree left of 0 and differ at 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsymptoticPairWindow {
    pub i: usize,
    pub level: usize,
    pub alpha: i64,
    pub x_window: Word,
    pub y_window: Word,
}

impl AsymptoticPairWindow {
    /// Letter at absolute position `p` of the x (or y) window.
    pub fn at(&self, p: i64, y: bool) -> Option<Letter> {
        let w = if y { &self.y_window } else { &self.x_window };
        let idx = p - self.alpha;
        (idx >= 0).then(|| w.get(idx as usize).copied()).flatten()
    }

    /// Two-row rendering with a ruler marking `alpha` and position 0.
    pub fn render(&self) -> String {
        let sep = |w: &Word| w.iter().map(|l| l.to_string()).collect::<Vec<_>>();
        let (xs, ys) = (sep(&self.x_window), sep(&self.y_window));
        let width = xs.iter().chain(&ys).map(String::len).max().unwrap_or(1);
        let row = |cells: &[String]| {
            cells
                .iter()
                .map(|c| format!("{c:>width$}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let zero = (-self.alpha) as usize;
        let mut ruler = vec![" ".repeat(width); xs.len().max(ys.len())];
        ruler[0] = format!("{:>width$}", "^");
        if zero < ruler.len() {
            ruler[zero] = format!("{:>width$}", "0");
        }
        format!(
            "component {} level {} offset {}\nx: {}\ny: {}\n   {}\n",
            self.i,
            self.level,
            self.alpha,
            row(&xs),
            row(&ys),
            ruler.join(" ")
        )
    }
}

fn doubled_prefix(i: usize) -> Word {
    let mut blocks: Vec<(Letter, usize)> = (1..i).map(|j| (j as Letter, 2)).collect();
    blocks.push((i as Letter, 1));
    runs(&blocks)
}

/// A pair window kept as level-`n` words; `τ_{[0,n)}` of them are the
/// windows, read lazily through [`LevelZeroLetters`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairFrame {
    pub i: usize,
    pub level: usize,
    pub alpha: i64,
    pub x_word: Word,
    pub y_word: Word,
}

/// The letters of `τ_{[0,n)}(top)`, produced one at a time.
pub struct LevelZeroLetters {
    taus: Vec<Morphism>,
    top: Vec<Letter>,
    top_pos: usize,
    stack: Vec<(usize, Letter, usize)>,
}

impl LevelZeroLetters {
    pub fn new(t: &DirectiveSequence, n: usize, top: &[Letter]) -> Result<Self, AnalysisError> {
        let taus = (0..n)
            .map(|l| t.get(l).map(|m| m.into_owned()))
            .collect::<Option<Vec<_>>>()
            .ok_or(AnalysisError::NoLevel { level: n })?;
        Ok(LevelZeroLetters {
            taus,
            top: top.to_vec(),
            top_pos: 0,
            stack: Vec::new(),
        })
    }
}

impl Iterator for LevelZeroLetters {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        loop {
            let Some((level, c, pos)) = self.stack.last_mut() else {
                let &l = self.top.get(self.top_pos)?;
                self.top_pos += 1;
                match self.taus.len() {
                    0 => return Some(l),
                    n => self.stack.push((n - 1, l, 0)),
                }
                continue;
            };
            let img = self.taus[*level].image(*c);
            if *pos == img.len() {
                self.stack.pop();
                continue;
            }
            let l = img[*pos];
            *pos += 1;
            if *level == 0 {
                return Some(l);
            }
            let below = *level - 1;
            self.stack.push((below, l, 0));
        }
    }
}

impl PairFrame {
    fn lengths(&self, t: &DirectiveSequence, w: &Word) -> Result<u128, AnalysisError> {
        let lens = t.image_lengths(0, self.level)?;
        Ok(w.iter().map(|&l| lens[l as usize - 1]).sum())
    }

    pub fn x_len(&self, t: &DirectiveSequence) -> Result<u128, AnalysisError> {
        self.lengths(t, &self.x_word)
    }

    pub fn y_len(&self, t: &DirectiveSequence) -> Result<u128, AnalysisError> {
        self.lengths(t, &self.y_word)
    }

    pub fn materialize(
        &self,
        t: &DirectiveSequence,
    ) -> Result<AsymptoticPairWindow, AnalysisError> {
        Ok(AsymptoticPairWindow {
            i: self.i,
            level: self.level,
            alpha: self.alpha,
            x_window: t.apply_range(0, self.level, &self.x_word)?,
            y_window: t.apply_range(0, self.level, &self.y_word)?,
        })
    }

    /// Length of the common prefix of the two windows; the pair splits at
    /// position 0 exactly when this equals `-alpha` and both windows reach 0.
    pub fn common_prefix(&self, t: &DirectiveSequence) -> Result<u128, AnalysisError> {
        let x = LevelZeroLetters::new(t, self.level, &self.x_word)?;
        let y = LevelZeroLetters::new(t, self.level, &self.y_word)?;
        Ok(x.zip(y).take_while(|(a, b)| a == b).count() as u128)
    }

    pub fn splits_at_zero(&self, t: &DirectiveSequence) -> Result<bool, AnalysisError> {
        let zero = (-self.alpha) as u128;
        Ok(self.common_prefix(t)? == zero && self.x_len(t)? > zero && self.y_len(t)? > zero)
    }

    /// Whether both windows of `self` reappear in those of `next` at the
    /// aligned offset `self.alpha - next.alpha`.
    pub fn nests_in(&self, next: &PairFrame, t: &DirectiveSequence) -> Result<bool, AnalysisError> {
        if next.alpha > self.alpha {
            return Ok(false);
        }
        let shift = (self.alpha - next.alpha) as usize;
        for (inner, outer) in [(&self.x_word, &next.x_word), (&self.y_word, &next.y_word)] {
            let a = LevelZeroLetters::new(t, self.level, inner)?;
            let len = self.lengths(t, inner)?;
            let b = LevelZeroLetters::new(t, next.level, outer)?.skip(shift);
            if (a.zip(b).take_while(|(p, q)| p == q).count() as u128) < len {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Both level-`n` words are allowed, hence so are their images.
    pub fn allowed(&self, t: &DirectiveSequence) -> Result<bool, AnalysisError> {
        Ok(is_allowed(t, self.level, &self.x_word)? && is_allowed(t, self.level, &self.y_word)?)
    }
}

/// The level-`n` form of the windows `w_{i,n}` (x side) and `u_{i,n}` (y side).
///
/// With `P = v_1² … v_{i-1}² v_i` at level `n`, `α_{i,1} = -|τ_0(P)|` and
/// `α_{i,n} = -|τ_{[0,n)}(P)| + α_{i,n-1}`. For odd `n` the x side is
/// `P v_i` and the y side `P v_{i+1}`; even `n` swaps them.
pub fn pair_frame(
    t: &DirectiveSequence,
    k: usize,
    i: usize,
    n: usize,
) -> Result<PairFrame, AnalysisError> {
    if i == 0 || i > k {
        return Err(AnalysisError::Component { i, k });
    }
    if n == 0 || !t.has_level(n - 1) {
        return Err(AnalysisError::NoLevel { level: n });
    }
    let size = t
        .alphabet_size(n)
        .ok_or(AnalysisError::NoLevel { level: n })?;
    if i + 1 > size {
        return Err(AnalysisError::Component { i, k: size - 1 });
    }
    let p = doubled_prefix(i);
    let mut alpha: i64 = 0;
    for level in 1..=n {
        let lens = t.image_lengths(0, level)?;
        alpha -= p.iter().map(|&l| lens[l as usize - 1]).sum::<u128>() as i64;
    }
    let same = p.concat(&[i as Letter]);
    let next = p.concat(&[i as Letter + 1]);
    let (x_word, y_word) = if n % 2 == 1 {
        (same, next)
    } else {
        (next, same)
    };
    Ok(PairFrame {
        i,
        level: n,
        alpha,
        x_word,
        y_word,
    })
}

/// [`pair_frame`] with both windows written out.
pub fn asymptotic_pair_windows(
    t: &DirectiveSequence,
    k: usize,
    i: usize,
    n: usize,
) -> Result<AsymptoticPairWindow, AnalysisError> {
    pair_frame(t, k, i, n)?.materialize(t)
}

fn kmp_contains(hay: &[Letter], needle: &[Letter]) -> bool {
    if needle.is_empty() {
        return true;
    }
    let mut fail = vec![0usize; needle.len()];
    let mut k = 0;
    for q in 1..needle.len() {
        while k > 0 && needle[k] != needle[q] {
            k = fail[k - 1];
        }
        if needle[k] == needle[q] {
            k += 1;
        }
        fail[q] = k;
    }
    k = 0;
    for &c in hay {
        while k > 0 && needle[k] != c {
            k = fail[k - 1];
        }
        if needle[k] == c {
            k += 1;
        }
        if k == needle.len() {
            return true;
        }
    }
    false
}

/// Whether `w` belongs to the language at level `n`: it must occur in
/// `τ_{[n,N)}(ab)` for an allowed 2-word `ab` at the first level `N` whose
/// images are all at least `|w|` long.
pub fn is_allowed(t: &DirectiveSequence, n: usize, w: &[Letter]) -> Result<bool, AnalysisError> {
    if w.len() <= 1 {
        let size = t
            .alphabet_size(n)
            .ok_or(AnalysisError::NoLevel { level: n })?;
        return Ok(w.iter().all(|&l| l >= 1 && l as usize <= size));
    }
    let mut big_n = n;
    loop {
        if !t.has_level(big_n) {
            return Err(AnalysisError::TooShallow {
                level: n,
                m: w.len(),
            });
        }
        if t.min_image_len(n, big_n)? >= w.len() as u128 {
            break;
        }
        big_n += 1;
    }
    let pairs = pair_fixpoint(t, big_n, DEFAULT_PAIR_BUDGET)?;
    let tau = t.compose_range(n, big_n)?;
    for &(a, b) in &pairs.pairs {
        let mut buf = tau.image(a).to_vec();
        buf.extend_from_slice(tau.image(b));
        if kmp_contains(&buf, w) {
            return Ok(true);
        }
    }
    Ok(false)
}
