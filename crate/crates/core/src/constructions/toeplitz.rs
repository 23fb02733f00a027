use serde::Serialize;

use super::{ConstructionError, RemarkCondition};
use crate::bratteli::{ordering_from_words, BratteliDiagram, OrderedBratteliDiagram};
use crate::directive::DirectiveSequence;
use crate::words::{Letter, Word};

/// Image of vertex `i` (1-based) under the Toeplitz-preserving recipe with
/// incoming counts `row`.
///
/// For `i ≠ 1` with class `s = i mod (k+1)` in `1..=k+1`, the prefix is
/// `v_1² … v_{s-1}² v_s … v_{k+1}`; for `i = 1` it is `v_1³ v_2 … v_{k+1}`.
/// The prefix is followed by the blocks `v_t^{ℓ_t}` in ascending `t`, where
/// `ℓ_t` is the entry minus what the prefix already used.
pub fn toeplitz_word(row: &[u64], i: usize, k: usize) -> Word {
    let m = row.len();
    let mut used = vec![0u64; m];
    if i == 1 {
        used[0] = 3;
        for u in used.iter_mut().take(k + 1).skip(1) {
            *u = 1;
        }
    } else {
        let s = (i - 1) % (k + 1) + 1;
        for (t, u) in used.iter_mut().enumerate().take(k + 1) {
            *u = if t + 1 < s { 2 } else { 1 };
        }
    }
    let mut word = Vec::with_capacity(row.iter().sum::<u64>() as usize);
    for (t, &c) in used.iter().enumerate() {
        word.extend(std::iter::repeat_n(t as Letter + 1, c as usize));
    }
    for (t, &a) in row.iter().enumerate() {
        word.extend(std::iter::repeat_n(t as Letter + 1, (a - used[t]) as usize));
    }
    Word::new(word)
}

/// The ordered diagram whose read morphisms are the Toeplitz-preserving ones.
pub fn toeplitz_ordering(
    d: &BratteliDiagram,
    k: usize,
) -> Result<OrderedBratteliDiagram, ConstructionError> {
    let mut words = Vec::with_capacity(d.depth());
    for n in 0..d.depth() {
        let a = d.matrix(n);
        let sums = a.row_sums();
        if sums.windows(2).any(|w| w[0] != w[1]) {
            return Err(ConstructionError::UnequalRowSums { level: n });
        }
        if n == 0 {
            words.push(
                (0..a.rows())
                    .map(|u| Word::new(vec![1; a.get(u, 0) as usize]))
                    .collect(),
            );
            continue;
        }
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                if a.get(r, c) <= 3 {
                    return Err(ConstructionError::SmallEntry {
                        level: n,
                        row: r + 1,
                        col: c + 1,
                        value: a.get(r, c),
                    });
                }
            }
        }
        if a.cols() < k + 2 {
            return Err(ConstructionError::Precondition {
                level: n,
                vertex: 1,
                condition: RemarkCondition::MarkerRoom,
            });
        }
        words.push(
            (0..a.rows())
                .map(|u| toeplitz_word(a.row(u), u + 1, k))
                .collect(),
        );
    }
    Ok(ordering_from_words(d, words)?)
}

/// Reads the Toeplitz-preserving directive sequence; `τ_0` is hat.
pub fn toeplitz_morphisms(
    d: &BratteliDiagram,
    k: usize,
) -> Result<DirectiveSequence, ConstructionError> {
    Ok(toeplitz_ordering(d, k)?.read_morphisms()?)
}

/// Outcome of checking a directive sequence against a diagram and the
/// Toeplitz-preserving recipe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToeplitzCheck {
    /// Letter counts of every image equal the matching matrix row.
    pub counts_match: bool,
    /// Per level, whether all images have the same length.
    pub equal_lengths: Vec<bool>,
    /// Images from level 1 on coincide with [`toeplitz_word`].
    pub follows_recipe: bool,
}

impl ToeplitzCheck {
    pub fn passed(&self) -> bool {
        self.counts_match && self.follows_recipe && self.equal_lengths.iter().all(|&b| b)
    }
}

pub fn check_toeplitz(t: &DirectiveSequence, d: &BratteliDiagram, k: usize) -> ToeplitzCheck {
    let levels = t.prefix().len().min(d.depth());
    let mut counts_match = t.prefix().len() == d.depth();
    let mut follows_recipe = counts_match;
    let mut equal_lengths = Vec::with_capacity(levels);
    for (n, tau) in t.prefix().iter().take(levels).enumerate() {
        let a = d.matrix(n);
        let images = tau.images();
        equal_lengths.push(images.windows(2).all(|w| w[0].len() == w[1].len()));
        for (u, img) in images.iter().enumerate() {
            // `τ_0` writes edge letters, so only its lengths are comparable.
            if n == 0 {
                counts_match &= u < a.rows() && img.len() as u64 == a.row(u).iter().sum::<u64>();
                continue;
            }
            let mut counts = vec![0u64; a.cols()];
            for &l in img.iter() {
                match counts.get_mut(l as usize - 1) {
                    Some(c) => *c += 1,
                    None => counts_match = false,
                }
            }
            if u >= a.rows() || counts != a.row(u) {
                counts_match = false;
            } else if *img != toeplitz_word(a.row(u), u + 1, k) {
                follows_recipe = false;
            }
        }
    }
    ToeplitzCheck {
        counts_match,
        equal_lengths,
        follows_recipe,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::runs;

    #[test]
    fn k1_rows_of_four() {
        let row = [4, 4, 4];
        assert_eq!(
            toeplitz_word(&row, 1, 1),
            runs(&[(1, 3), (2, 1), (1, 1), (2, 3), (3, 4)])
        );
        assert_eq!(
            toeplitz_word(&row, 2, 1),
            runs(&[(1, 2), (2, 1), (1, 2), (2, 3), (3, 4)])
        );
        assert_eq!(
            toeplitz_word(&row, 3, 1),
            runs(&[(1, 1), (2, 1), (1, 3), (2, 3), (3, 4)])
        );
    }

    #[test]
    fn k2_first_vertex_counts_match() {
        let row = [5, 6, 7, 8];
        let w = toeplitz_word(&row, 1, 2);
        assert!(w.starts_with(&[1, 1, 1, 2, 3]));
        for (t, &a) in row.iter().enumerate() {
            assert_eq!(w.iter().filter(|&&l| l as usize == t + 1).count() as u64, a);
        }
    }
}
