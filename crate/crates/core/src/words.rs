//! Level alphabets, finite words and non-erasing morphisms between them.
//!
//! Letters are dense 1-based indices: letter `i` of the alphabet at level `n`
//! stands for the vertex `v_{i,n}`. Human-readable names only exist at the
//! I/O boundary.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Matrix;

pub type Letter = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("alphabet at level {level} must have at least one letter")]
    EmptyAlphabet { level: usize },
    #[error("morphism has {found} images but its source alphabet has {expected} letters")]
    ImageCount { expected: usize, found: usize },
    #[error("image of letter {letter} is empty (morphisms are non-erasing)")]
    EmptyImage { letter: Letter },
    #[error("image of letter {letter} uses letter {found}, outside 1..={size}")]
    LetterOutOfRange {
        letter: Letter,
        found: Letter,
        size: usize,
    },
    #[error(
        "cannot compose: inner target is level {inner_level} with {inner_size} letters, \
         outer source is level {outer_level} with {outer_size} letters"
    )]
    AlphabetMismatch {
        inner_level: usize,
        inner_size: usize,
        outer_level: usize,
        outer_size: usize,
    },
}

/// The alphabet `V_n = {v_{1,n}, …, v_{size,n}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    pub level: usize,
    pub size: usize,
}

impl Alphabet {
    pub fn new(level: usize, size: usize) -> Result<Self, WordError> {
        if size == 0 {
            return Err(WordError::EmptyAlphabet { level });
        }
        Ok(Alphabet { level, size })
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        1..=self.size as Letter
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter >= 1 && (letter as usize) <= self.size
    }
}

/// A finite, possibly empty, word.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend_from_slice(&mut self, letters: &[Letter]) {
        self.0.extend_from_slice(letters);
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        // Single-digit alphabets read best without separators.
        if self.0.iter().all(|&l| l < 10) {
            for l in &self.0 {
                write!(f, "{}", l)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

/// Builds `letter^count` runs, e.g. `runs(&[(1, 2), (2, 1)])` is `1 1 2`.
pub fn runs(blocks: &[(Letter, usize)]) -> Word {
    blocks
        .iter()
        .flat_map(|&(l, c)| std::iter::repeat_n(l, c))
        .collect()
}

/// All distinct contiguous subwords of length `m`.
pub fn factors(w: &[Letter], m: usize) -> BTreeSet<Word> {
    if w.len() < m {
        return BTreeSet::new();
    }
    w.windows(m.max(1))
        .take(if m == 0 { 1 } else { usize::MAX })
        .map(|s| if m == 0 { Word::empty() } else { Word::from(s) })
        .collect()
}

/// True iff one word is a prefix of the other.
pub fn prefix_dependent(u: &[Letter], w: &[Letter]) -> bool {
    u.starts_with(w) || w.starts_with(u)
}

/// A non-erasing morphism `source* → target*`.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(source: Alphabet, target: Alphabet, images: Vec<Word>) -> Result<Self, WordError> {
        if images.len() != source.size {
            return Err(WordError::ImageCount {
                expected: source.size,
                found: images.len(),
            });
        }
        for (i, img) in images.iter().enumerate() {
            let letter = i as Letter + 1;
            if img.is_empty() {
                return Err(WordError::EmptyImage { letter });
            }
            if let Some(&bad) = img.iter().find(|&&l| !target.contains(l)) {
                return Err(WordError::LetterOutOfRange {
                    letter,
                    found: bad,
                    size: target.size,
                });
            }
        }
        Ok(Morphism {
            source,
            target,
            images,
        })
    }

    /// Convenience constructor from raw letter vectors; source level is
    /// `target_level + 1`.
    pub fn from_images(
        target_level: usize,
        target_size: usize,
        images: Vec<Vec<Letter>>,
    ) -> Result<Self, WordError> {
        let source = Alphabet::new(target_level + 1, images.len())?;
        let target = Alphabet::new(target_level, target_size)?;
        Morphism::new(source, target, images.into_iter().map(Word::from).collect())
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Morphism {
            source: alphabet,
            target: alphabet,
            images: alphabet.letters().map(|l| Word::new(vec![l])).collect(),
        }
    }

    pub fn source(&self) -> Alphabet {
        self.source
    }

    pub fn target(&self) -> Alphabet {
        self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Image of a 1-based letter.
    pub fn image(&self, letter: Letter) -> &Word {
        &self.images[letter as usize - 1]
    }

    pub fn image_lengths(&self) -> Vec<usize> {
        self.images.iter().map(|w| w.len()).collect()
    }

    pub fn min_image_len(&self) -> usize {
        self.images.iter().map(|w| w.len()).min().unwrap_or(0)
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Applies the morphism to a word by concatenation.
    pub fn apply(&self, w: &[Letter]) -> Word {
        let len = w.iter().map(|&l| self.image(l).len()).sum();
        let mut out = Vec::with_capacity(len);
        for &l in w {
            out.extend_from_slice(self.image(l));
        }
        Word(out)
    }

    /// Same images, relabelled to sit between levels `level + 1` and `level`.
    pub fn at_level(&self, level: usize) -> Morphism {
        Morphism {
            source: Alphabet {
                level: level + 1,
                size: self.source.size,
            },
            target: Alphabet {
                level,
                size: self.target.size,
            },
            images: self.images.clone(),
        }
    }

    /// Entry `(i, j)` counts target letter `j` in the image of source letter `i`.
    pub fn incidence(&self) -> Matrix {
        let mut m = Matrix::zeros(self.source.size, self.target.size);
        for (i, img) in self.images.iter().enumerate() {
            for &l in img.iter() {
                let j = l as usize - 1;
                m.set(i, j, m.get(i, j) + 1);
            }
        }
        m
    }

    pub fn is_primitive(&self) -> bool {
        self.incidence().is_positive()
    }

    pub fn is_left_proper(&self) -> bool {
        let first = self.images[0][0];
        self.images.iter().all(|w| w[0] == first)
    }

    pub fn is_right_proper(&self) -> bool {
        let last = *self.images[0].last().unwrap();
        self.images.iter().all(|w| *w.last().unwrap() == last)
    }

    /// Images of distinct letters use pairwise disjoint sets of letters.
    pub fn is_hat(&self) -> bool {
        let mut owner = vec![0usize; self.target.size + 1];
        for (i, img) in self.images.iter().enumerate() {
            for &l in img.iter() {
                let slot = &mut owner[l as usize];
                if *slot != 0 && *slot != i + 1 {
                    return false;
                }
                *slot = i + 1;
            }
        }
        true
    }

    pub fn is_injective_on_symbols(&self) -> bool {
        let distinct: BTreeSet<&Word> = self.images.iter().collect();
        distinct.len() == self.images.len()
    }

    pub fn analyze(&self) -> MorphismReport {
        MorphismReport {
            incidence: self.incidence(),
            primitive: self.is_primitive(),
            left_proper: self.is_left_proper(),
            right_proper: self.is_right_proper(),
            hat: self.is_hat(),
            injective_on_symbols: self.is_injective_on_symbols(),
        }
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Morphism(V{}[{}] -> V{}[{}]: ",
            self.source.level, self.source.size, self.target.level, self.target.size
        )?;
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", i + 1, img)?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub incidence: Matrix,
    pub primitive: bool,
    pub left_proper: bool,
    pub right_proper: bool,
    pub hat: bool,
    pub injective_on_symbols: bool,
}

/// `outer ∘ inner`: the image of `u` is `outer(inner(u))`.
///
/// Its incidence matrix is `incidence(inner) · incidence(outer)`.
pub fn compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism, WordError> {
    if inner.target != outer.source {
        return Err(WordError::AlphabetMismatch {
            inner_level: inner.target.level,
            inner_size: inner.target.size,
            outer_level: outer.source.level,
            outer_size: outer.source.size,
        });
    }
    Ok(Morphism {
        source: inner.source,
        target: outer.target,
        images: inner.images.iter().map(|w| outer.apply(w)).collect(),
    })
}

#[derive(Serialize, Deserialize)]
struct MorphismRepr {
    source_level: usize,
    source_size: usize,
    target_size: usize,
    images: Vec<Vec<Letter>>,
}

impl Serialize for Morphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MorphismRepr {
            source_level: self.source.level,
            source_size: self.source.size,
            target_size: self.target.size,
            images: self.images.iter().map(|w| w.0.clone()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Morphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = MorphismRepr::deserialize(d)?;
        if repr.source_level == 0 {
            return Err(serde::de::Error::custom("source_level must be at least 1"));
        }
        let source =
            Alphabet::new(repr.source_level, repr.source_size).map_err(serde::de::Error::custom)?;
        let target = Alphabet::new(repr.source_level - 1, repr.target_size)
            .map_err(serde::de::Error::custom)?;
        Morphism::new(
            source,
            target,
            repr.images.into_iter().map(Word::from).collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Morphism {
        Morphism::from_images(0, 2, vec![vec![1, 2], vec![1]]).unwrap()
    }

    fn w(v: &[Letter]) -> Word {
        Word::from(v)
    }

    #[test]
    fn fibonacci_report() {
        let r = fib().analyze();
        assert_eq!(r.incidence.to_rows(), vec![vec![1, 1], vec![1, 0]]);
        assert!(!r.primitive);
        assert!(r.left_proper);
        assert!(!r.right_proper);
        assert!(!r.hat);
        assert!(r.injective_on_symbols);
    }

    #[test]
    fn identity_report() {
        let id = Morphism::identity(Alphabet::new(0, 2).unwrap());
        let r = id.analyze();
        assert_eq!(r.incidence, Matrix::identity(2));
        assert!(r.hat);
        assert!(r.injective_on_symbols);
    }

    #[test]
    fn equal_images_not_injective() {
        let m = Morphism::from_images(0, 2, vec![vec![1, 2], vec![1, 2]]).unwrap();
        assert!(!m.is_injective_on_symbols());
    }

    #[test]
    fn fibonacci_squared() {
        let f = fib();
        let f1 = f.at_level(1);
        let sq = compose(&f, &f1).unwrap();
        assert_eq!(sq.image(1), &w(&[1, 2, 1]));
        assert_eq!(sq.image(2), &w(&[1, 2]));
        assert_eq!(sq.incidence().to_rows(), vec![vec![2, 1], vec![1, 1]]);
        assert_eq!(sq.incidence(), f1.incidence().mul(&f.incidence()).unwrap());
    }

    #[test]
    fn compose_with_identity() {
        let f = fib();
        let id = Morphism::identity(f.target());
        assert_eq!(compose(&id, &f).unwrap(), f);
    }

    #[test]
    fn compose_rejects_mismatch() {
        let f = fib();
        assert!(matches!(
            compose(&f, &f),
            Err(WordError::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn factor_sets() {
        let abab = [1, 2, 1, 2];
        let got: Vec<Word> = factors(&abab, 2).into_iter().collect();
        assert_eq!(got, vec![w(&[1, 2]), w(&[2, 1])]);
        assert_eq!(
            factors(&abab, 4).into_iter().collect::<Vec<_>>(),
            vec![w(&abab)]
        );
        assert_eq!(factors(&[1, 1, 1], 2).len(), 1);
        assert!(factors(&[1], 2).is_empty());
        assert_eq!(
            factors(&abab, 0).into_iter().collect::<Vec<_>>(),
            vec![Word::empty()]
        );
    }

    #[test]
    fn prefix_dependence() {
        assert!(prefix_dependent(&[1, 2], &[1, 2, 2, 1]));
        assert!(!prefix_dependent(&[1, 2], &[2, 1]));
        assert!(prefix_dependent(&[1, 2, 1], &[1, 2, 1]));
    }

    #[test]
    fn invalid_morphisms_rejected() {
        assert_eq!(
            Morphism::from_images(0, 2, vec![vec![1], vec![]]).unwrap_err(),
            WordError::EmptyImage { letter: 2 }
        );
        assert!(matches!(
            Morphism::from_images(0, 2, vec![vec![3]]),
            Err(WordError::LetterOutOfRange { found: 3, .. })
        ));
    }

    #[test]
    fn json_layout() {
        let s = serde_json::to_string(&fib()).unwrap();
        assert_eq!(
            s,
            r#"{"source_level":1,"source_size":2,"target_size":2,"images":[[1,2],[1]]}"#
        );
        let back: Morphism = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fib());
        assert!(serde_json::from_str::<Morphism>(
            r#"{"source_level":1,"source_size":2,"target_size":2,"images":[[1,2]]}"#
        )
        .is_err());
    }

    #[test]
    fn runs_builder() {
        assert_eq!(runs(&[(1, 2), (2, 1), (3, 0)]), w(&[1, 1, 2]));
    }
}
