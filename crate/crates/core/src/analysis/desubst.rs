use std::collections::HashMap;

use serde::Serialize;

use super::AnalysisError;
use crate::directive::DirectiveSequence;
use crate::words::{Letter, Morphism, Word};

/// A window read back to level `level`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Desubstitution {
    pub level: usize,
    pub word: Word,
    /// `spans[j]` is the half-open range of level-0 positions covered by
    /// `τ_{[0,level)}(word[j])`; hat letters cut by the window edge may
    /// extend past it.
    pub spans: Vec<(isize, isize)>,
    /// Index in `word` of the letter whose image contains the tracked position.
    pub index: usize,
    /// Offset `r` of the tracked position inside that image.
    pub offset: usize,
}

fn hat_index(tau: &Morphism) -> Result<HashMap<Letter, (Letter, usize)>, AnalysisError> {
    let mut index = HashMap::new();
    for (b, img) in tau.images().iter().enumerate() {
        for (pos, &l) in img.iter().enumerate() {
            if index.insert(l, (b as Letter + 1, pos)).is_some() {
                return Err(AnalysisError::Ambiguous {
                    level: 0,
                    segment: Word::new(vec![l]).to_string(),
                });
            }
        }
    }
    Ok(index)
}

struct Level {
    word: Vec<Letter>,
    spans: Vec<(isize, isize)>,
}

fn lift_hat(tau: &Morphism, cur: &Level) -> Result<Level, AnalysisError> {
    let index = hat_index(tau)?;
    let mut word = Vec::new();
    let mut spans: Vec<(isize, isize)> = Vec::new();
    let mut last_start = None;
    for (i, &l) in cur.word.iter().enumerate() {
        let &(b, pos) = index.get(&l).ok_or_else(|| AnalysisError::NoMatch {
            level: 0,
            segment: Word::new(vec![l]).to_string(),
        })?;
        let start = cur.spans[i].0 - pos as isize;
        if last_start == Some((start, b)) {
            continue;
        }
        // A new image must begin where the previous one ended.
        if let Some(&(_, end)) = spans.last() {
            if start != end {
                return Err(AnalysisError::NoMatch {
                    level: 0,
                    segment: Word::from(&cur.word[..=i]).to_string(),
                });
            }
        }
        last_start = Some((start, b));
        word.push(b);
        spans.push((start, start + tau.image(b).len() as isize));
    }
    Ok(Level { word, spans })
}

fn lift_markers(
    tau: &Morphism,
    level: usize,
    cur: &Level,
    aligned: bool,
) -> Result<Level, AnalysisError> {
    let m = tau.target().size as Letter;
    let mut cuts: Vec<usize> = Vec::new();
    if aligned {
        cuts.push(0);
    }
    cuts.extend((1..cur.word.len()).filter(|&c| cur.word[c - 1] == m && cur.word[c] == 1));
    if aligned {
        cuts.push(cur.word.len());
    }
    if cuts.len() < 2 {
        return Err(AnalysisError::NoMarker { level });
    }
    let mut lookup: HashMap<&[Letter], Vec<Letter>> = HashMap::new();
    for (b, img) in tau.images().iter().enumerate() {
        lookup
            .entry(img.letters())
            .or_default()
            .push(b as Letter + 1);
    }
    let mut word = Vec::with_capacity(cuts.len() - 1);
    let mut spans = Vec::with_capacity(cuts.len() - 1);
    for pair in cuts.windows(2) {
        let seg = &cur.word[pair[0]..pair[1]];
        match lookup.get(seg).map(Vec::as_slice) {
            Some([b]) => word.push(*b),
            Some(_) => {
                return Err(AnalysisError::Ambiguous {
                    level,
                    segment: Word::from(seg).to_string(),
                })
            }
            None => {
                return Err(AnalysisError::NoMatch {
                    level,
                    segment: Word::from(seg).to_string(),
                })
            }
        }
        spans.push((cur.spans[pair[0]].0, cur.spans[pair[1] - 1].1));
    }
    Ok(Level { word, spans })
}

/// Reads a level-0 window `w` back to `to_level`, tracking the letter whose
/// image contains `w[position]`.
///
/// `τ_0` is undone through its hat structure; every higher level is cut at
/// the occurrences of `v_m v_1` and each complete segment must equal exactly
/// one image. With `aligned`, the window ends count as cuts at every level.
pub fn desubstitute_window(
    t: &DirectiveSequence,
    w: &[Letter],
    position: usize,
    to_level: usize,
    aligned: bool,
) -> Result<Desubstitution, AnalysisError> {
    let (word, spans) = decompose(t, w, to_level, aligned)?;
    let p = position as isize;
    let index = spans
        .iter()
        .position(|&(s, e)| s <= p && p < e)
        .ok_or(AnalysisError::NoMarker { level: to_level })?;
    Ok(Desubstitution {
        level: to_level,
        offset: (p - spans[index].0) as usize,
        index,
        word: Word::new(word),
        spans,
    })
}

/// Recognized letters with their half-open level-0 spans.
pub(crate) type Decomposition = (Vec<Letter>, Vec<(isize, isize)>);

/// Level-`to_level` letters recognized in `w` with their level-0 spans.
pub(crate) fn decompose(
    t: &DirectiveSequence,
    w: &[Letter],
    to_level: usize,
    aligned: bool,
) -> Result<Decomposition, AnalysisError> {
    let mut cur = Level {
        word: w.to_vec(),
        spans: (0..w.len() as isize).map(|i| (i, i + 1)).collect(),
    };
    for level in 0..to_level {
        let tau = t.get(level).ok_or(AnalysisError::NoLevel { level })?;
        cur = if level == 0 {
            lift_hat(&tau, &cur)?
        } else {
            lift_markers(&tau, level, &cur, aligned)?
        };
    }
    Ok((cur.word, cur.spans))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> DirectiveSequence {
        let hat = Morphism::from_images(0, 6, vec![vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        let t1 = Morphism::from_images(
            1,
            3,
            vec![vec![1, 2, 1, 2, 3], vec![1, 1, 2, 3], vec![1, 1, 1, 2, 3]],
        )
        .unwrap();
        DirectiveSequence::finite(vec![hat, t1.clone(), t1]).unwrap()
    }

    #[test]
    fn round_trip_aligned() {
        let t = toy();
        for u in 1..=3u32 {
            let w = t.apply_range(0, 2, &[u]).unwrap();
            for shift in [0, 3, w.len() - 1] {
                let d = desubstitute_window(&t, &w, shift, 2, true).unwrap();
                assert_eq!(d.word.letters(), &[u]);
                assert_eq!(d.offset, shift);
            }
        }
    }

    #[test]
    fn unaligned_uses_markers() {
        let t = toy();
        let w = t.apply_range(0, 2, &[3, 2, 1]).unwrap();
        let len3 = t.apply_range(0, 2, &[3]).unwrap().len();
        let d = desubstitute_window(&t, &w, len3 + 1, 2, false).unwrap();
        assert_eq!(d.word.letters(), &[2]);
        assert_eq!(d.offset, 1);
        assert!(matches!(
            desubstitute_window(&t, &w[..5], 0, 2, false),
            Err(AnalysisError::NoMarker { level: 1 })
        ));
    }
}
