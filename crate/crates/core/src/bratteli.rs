//! Bratteli diagrams, orderings, Vershik successor and intertwining certificates.
//!
//! Matrix `n` has shape `|V_{n+1}| × |V_n|`; entry `(u, v)` counts edges from
//! `v ∈ V_n` to `u ∈ V_{n+1}`. Level `V_0` is the root and always has one vertex.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::directive::{DirectiveError, DirectiveSequence};
use crate::matrix::{Matrix, MatrixError};
use crate::words::{Letter, Morphism, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BratteliError {
    #[error("level {level} must have at least one vertex")]
    EmptyLevel { level: usize },
    #[error("matrix {index} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    MatrixShape {
        index: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("{levels} level sizes given for {matrices} matrices")]
    LevelCount { levels: usize, matrices: usize },
    #[error("telescoping sequence must start at level 0")]
    KeepStart,
    #[error("telescoping sequence is not strictly increasing at position {position}")]
    KeepOrder { position: usize },
    #[error("telescoping level {level} exceeds the available depth {depth}")]
    KeepRange { level: usize, depth: usize },
    #[error("order words given for {found} levels, diagram has {expected}")]
    OrderLevels { expected: usize, found: usize },
    #[error("level {level}: {found} order words for {expected} vertices")]
    OrderVertices {
        level: usize,
        expected: usize,
        found: usize,
    },
    #[error(
        "order word of vertex {vertex} at level {level} has letter counts {found:?}, \
         expected {expected:?}",
        level = level + 1
    )]
    CountMismatch {
        level: usize,
        vertex: usize,
        expected: Vec<u64>,
        found: Vec<u64>,
    },
    #[error("order word of vertex {vertex} at level {level} uses letter {letter} outside the level below")]
    OrderLetter {
        level: usize,
        vertex: usize,
        letter: Letter,
    },
    #[error("path edge {edge} is inconsistent with the ordering")]
    InvalidPath { edge: usize },
    #[error("path has depth {depth}, diagram has {available} levels")]
    PathDepth { depth: usize, available: usize },
    #[error(
        "every edge of the path is maximal: the successor leaves the depth-{depth} truncation"
    )]
    Overflow { depth: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Directive(#[from] DirectiveError),
}

/// One violated diagram invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Vertex `vertex` of level `level` has no outgoing edge.
    NoOutgoingEdge { level: usize, vertex: usize },
    /// Vertex `vertex` of level `level` has no incoming edge.
    NoIncomingEdge { level: usize, vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BratteliDiagram {
    level_sizes: Vec<usize>,
    matrices: Vec<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    levels: Vec<usize>,
    matrices: Vec<Matrix>,
}

impl Serialize for BratteliDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DiagramRepr {
            levels: self.level_sizes[1..].to_vec(),
            matrices: self.matrices.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BratteliDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = DiagramRepr::deserialize(d)?;
        BratteliDiagram::new(repr.levels, repr.matrices).map_err(serde::de::Error::custom)
    }
}

impl BratteliDiagram {
    /// `levels` lists `|V_1|, |V_2|, …`; the root is implicit.
    pub fn new(levels: Vec<usize>, matrices: Vec<Matrix>) -> Result<Self, BratteliError> {
        if levels.len() != matrices.len() {
            return Err(BratteliError::LevelCount {
                levels: levels.len(),
                matrices: matrices.len(),
            });
        }
        let mut level_sizes = Vec::with_capacity(levels.len() + 1);
        level_sizes.push(1);
        level_sizes.extend(levels);
        if let Some(level) = level_sizes.iter().position(|&s| s == 0) {
            return Err(BratteliError::EmptyLevel { level });
        }
        for (index, m) in matrices.iter().enumerate() {
            let (er, ec) = (level_sizes[index + 1], level_sizes[index]);
            if m.rows() != er || m.cols() != ec {
                return Err(BratteliError::MatrixShape {
                    index,
                    rows: m.rows(),
                    cols: m.cols(),
                    expected_rows: er,
                    expected_cols: ec,
                });
            }
        }
        Ok(BratteliDiagram {
            level_sizes,
            matrices,
        })
    }

    /// Sizes are read off the matrices.
    pub fn from_matrices(matrices: Vec<Matrix>) -> Result<Self, BratteliError> {
        let levels = matrices.iter().map(Matrix::rows).collect();
        Self::new(levels, matrices)
    }

    /// Number of matrices; levels `0..=depth` exist.
    pub fn depth(&self) -> usize {
        self.matrices.len()
    }

    pub fn level_size(&self, n: usize) -> usize {
        self.level_sizes[n]
    }

    pub fn level_sizes(&self) -> &[usize] {
        &self.level_sizes
    }

    pub fn matrix(&self, n: usize) -> &Matrix {
        &self.matrices[n]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (n, m) in self.matrices.iter().enumerate() {
            for v in 0..m.cols() {
                if m.column(v).all(|x| x == 0) {
                    out.push(Violation::NoOutgoingEdge {
                        level: n,
                        vertex: v + 1,
                    });
                }
            }
            for u in 0..m.rows() {
                if m.row(u).iter().all(|&x| x == 0) {
                    out.push(Violation::NoIncomingEdge {
                        level: n + 1,
                        vertex: u + 1,
                    });
                }
            }
        }
        out
    }

    /// Collapses the levels strictly between consecutive kept levels.
    pub fn telescope(&self, keep: &[usize]) -> Result<BratteliDiagram, BratteliError> {
        check_keep(keep, self.depth())?;
        let mut matrices = Vec::with_capacity(keep.len().saturating_sub(1));
        for pair in keep.windows(2) {
            let mut acc = self.matrices[pair[0]].clone();
            for n in pair[0] + 1..pair[1] {
                acc = self.matrices[n].mul(&acc)?;
            }
            matrices.push(acc);
        }
        Self::from_matrices(matrices)
    }

    /// Number of paths from the root to each vertex of level `n`.
    pub fn path_counts(&self, n: usize) -> Result<Vec<u64>, MatrixError> {
        let mut counts = Matrix::identity(1);
        for m in &self.matrices[..n] {
            counts = m.mul(&counts)?;
        }
        Ok(counts.column(0).collect())
    }

    pub fn has_equal_row_sums(&self) -> bool {
        self.matrices.iter().all(|m| {
            let sums = m.row_sums();
            sums.windows(2).all(|w| w[0] == w[1])
        })
    }
}

fn check_keep(keep: &[usize], depth: usize) -> Result<(), BratteliError> {
    if keep.first() != Some(&0) {
        return Err(BratteliError::KeepStart);
    }
    for (position, pair) in keep.windows(2).enumerate() {
        if pair[1] <= pair[0] {
            return Err(BratteliError::KeepOrder {
                position: position + 1,
            });
        }
    }
    if let Some(&level) = keep.iter().find(|&&l| l > depth) {
        return Err(BratteliError::KeepRange { level, depth });
    }
    Ok(())
}

/// An ordered diagram: `order_words[n][u-1]` lists the sources of the edges
/// entering `u ∈ V_{n+1}`, in increasing edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedBratteliDiagram {
    diagram: BratteliDiagram,
    order_words: Vec<Vec<Word>>,
}

#[derive(Serialize, Deserialize)]
struct OrderedRepr {
    levels: Vec<usize>,
    matrices: Vec<Matrix>,
    order_words: Vec<Vec<Word>>,
}

impl Serialize for OrderedBratteliDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OrderedRepr {
            levels: self.diagram.level_sizes[1..].to_vec(),
            matrices: self.diagram.matrices.clone(),
            order_words: self.order_words.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrderedBratteliDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = OrderedRepr::deserialize(d)?;
        let diagram =
            BratteliDiagram::new(repr.levels, repr.matrices).map_err(serde::de::Error::custom)?;
        ordering_from_words(&diagram, repr.order_words).map_err(serde::de::Error::custom)
    }
}

/// Attaches order words to a diagram after checking their letter counts.
pub fn ordering_from_words(
    diagram: &BratteliDiagram,
    order_words: Vec<Vec<Word>>,
) -> Result<OrderedBratteliDiagram, BratteliError> {
    if order_words.len() != diagram.depth() {
        return Err(BratteliError::OrderLevels {
            expected: diagram.depth(),
            found: order_words.len(),
        });
    }
    for (n, words) in order_words.iter().enumerate() {
        let m = diagram.matrix(n);
        if words.len() != m.rows() {
            return Err(BratteliError::OrderVertices {
                level: n + 1,
                expected: m.rows(),
                found: words.len(),
            });
        }
        for (u, w) in words.iter().enumerate() {
            let mut counts = vec![0u64; m.cols()];
            for &l in w.iter() {
                if l == 0 || l as usize > m.cols() {
                    return Err(BratteliError::OrderLetter {
                        level: n + 1,
                        vertex: u + 1,
                        letter: l,
                    });
                }
                counts[l as usize - 1] += 1;
            }
            if counts != m.row(u) {
                return Err(BratteliError::CountMismatch {
                    level: n,
                    vertex: u + 1,
                    expected: m.row(u).to_vec(),
                    found: counts,
                });
            }
        }
    }
    Ok(OrderedBratteliDiagram {
        diagram: diagram.clone(),
        order_words,
    })
}

/// A finite path from the root: `edges[n-1] = (u, p)` is the `p`-th edge
/// (1-based) entering vertex `u ∈ V_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinitePath {
    pub edges: Vec<(usize, usize)>,
}

impl OrderedBratteliDiagram {
    pub fn diagram(&self) -> &BratteliDiagram {
        &self.diagram
    }

    pub fn order_words(&self) -> &[Vec<Word>] {
        &self.order_words
    }

    /// Order word of vertex `u ∈ V_{n+1}` (1-based `u`).
    pub fn order_word(&self, n: usize, u: usize) -> &Word {
        &self.order_words[n][u - 1]
    }

    /// Reads `τ_0, …, τ_{depth-1}` off the ordering. `τ_0` is the hat morphism
    /// over the edge alphabet `E_1`, each vertex of `V_1` sent to its incoming
    /// edges in order.
    pub fn read_morphisms(&self) -> Result<DirectiveSequence, BratteliError> {
        let mut morphisms = Vec::with_capacity(self.diagram.depth());
        if self.diagram.depth() == 0 {
            return Err(DirectiveError::Empty.into());
        }
        let sums = self.diagram.matrix(0).row_sums();
        let edges: u64 = sums.iter().sum();
        let mut next = 1 as Letter;
        let mut hat = Vec::with_capacity(sums.len());
        for &s in &sums {
            hat.push((next..next + s as Letter).collect::<Vec<_>>());
            next += s as Letter;
        }
        morphisms
            .push(Morphism::from_images(0, edges as usize, hat).map_err(DirectiveError::from)?);
        for n in 1..self.diagram.depth() {
            let images = self.order_words[n]
                .iter()
                .map(|w| w.letters().to_vec())
                .collect();
            morphisms.push(
                Morphism::from_images(n, self.diagram.level_size(n), images)
                    .map_err(DirectiveError::from)?,
            );
        }
        Ok(DirectiveSequence::finite(morphisms)?)
    }

    /// The path into `u ∈ V_depth` made of minimal edges.
    pub fn minimal_path(&self, u: usize, depth: usize) -> FinitePath {
        let mut edges = vec![(0, 0); depth];
        let mut vertex = u;
        for n in (1..=depth).rev() {
            edges[n - 1] = (vertex, 1);
            vertex = self.order_word(n - 1, vertex)[0] as usize;
        }
        FinitePath { edges }
    }

    fn check_path(&self, p: &FinitePath) -> Result<(), BratteliError> {
        if p.edges.len() > self.diagram.depth() {
            return Err(BratteliError::PathDepth {
                depth: p.edges.len(),
                available: self.diagram.depth(),
            });
        }
        for (i, &(u, pos)) in p.edges.iter().enumerate() {
            let n = i + 1;
            if u == 0 || u > self.diagram.level_size(n) {
                return Err(BratteliError::InvalidPath { edge: n });
            }
            let w = self.order_word(n - 1, u);
            if pos == 0 || pos > w.len() {
                return Err(BratteliError::InvalidPath { edge: n });
            }
            if n >= 2 && w[pos - 1] as usize != p.edges[i - 1].0 {
                return Err(BratteliError::InvalidPath { edge: n });
            }
        }
        Ok(())
    }

    /// Increments the least non-maximal edge and resets the edges below it to
    /// the minimal path into the new source.
    pub fn vershik_successor(&self, p: &FinitePath) -> Result<FinitePath, BratteliError> {
        self.check_path(p)?;
        let depth = p.edges.len();
        let k = p
            .edges
            .iter()
            .enumerate()
            .position(|(i, &(u, pos))| pos < self.order_word(i, u).len())
            .ok_or(BratteliError::Overflow { depth })?;
        let mut edges = p.edges.clone();
        edges[k].1 += 1;
        let mut vertex = {
            let (u, pos) = edges[k];
            self.order_word(k, u)[pos - 1] as usize
        };
        for i in (0..k).rev() {
            edges[i] = (vertex, 1);
            vertex = self.order_word(i, vertex)[0] as usize;
        }
        Ok(FinitePath { edges })
    }

    /// All paths into `u ∈ V_depth`, from the minimal one by successive
    /// [`vershik_successor`](Self::vershik_successor) steps until overflow.
    pub fn vershik_orbit(&self, u: usize, depth: usize) -> Result<Vec<FinitePath>, BratteliError> {
        let mut out = vec![self.minimal_path(u, depth)];
        loop {
            match self.vershik_successor(out.last().expect("non-empty")) {
                Ok(next) => out.push(next),
                Err(BratteliError::Overflow { .. }) => return Ok(out),
                Err(e) => return Err(e),
            }
        }
    }

    /// For each level `1 ≤ n < depth`, all order words into `V_{n+1}` share
    /// their last letter and share their first letter, so the maximal and the
    /// minimal chains through levels below `depth` are unique.
    pub fn check_proper_ordering(&self, depth: usize) -> bool {
        let depth = depth.min(self.diagram.depth());
        (1..depth).all(|n| {
            let words = &self.order_words[n];
            let first = words[0][0];
            let last = *words[0].last().unwrap();
            words
                .iter()
                .all(|w| w[0] == first && *w.last().unwrap() == last)
        })
    }
}

/// Factorizations witnessing a common intertwining of `original` (telescoped
/// along `keep`) and `derived`: `C_n·B_n = A_n` and `B_{n+1}·C_n = M_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwiningCertificate {
    pub keep: Vec<usize>,
    pub b: Vec<Matrix>,
    pub c: Vec<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct CertLevel {
    #[serde(rename = "B")]
    b: Matrix,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct CertRepr {
    keep: Vec<usize>,
    levels: Vec<CertLevel>,
}

impl Serialize for IntertwiningCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let levels = self
            .b
            .iter()
            .enumerate()
            .map(|(n, b)| CertLevel {
                b: b.clone(),
                c: self.c.get(n).cloned(),
            })
            .collect();
        CertRepr {
            keep: self.keep.clone(),
            levels,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntertwiningCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CertRepr::deserialize(d)?;
        let mut b = Vec::new();
        let mut c = Vec::new();
        let count = repr.levels.len();
        for (n, level) in repr.levels.into_iter().enumerate() {
            b.push(level.b);
            match level.c {
                Some(m) => c.push(m),
                None if n + 1 == count => {}
                None => {
                    return Err(serde::de::Error::custom(format!(
                        "certificate level {n} is missing C"
                    )))
                }
            }
        }
        if c.len() + 1 != b.len() {
            return Err(serde::de::Error::custom(
                "last certificate level must omit C",
            ));
        }
        Ok(IntertwiningCertificate {
            keep: repr.keep,
            b,
            c,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("certificate shape mismatch: {0}")]
pub struct ShapeMismatch(pub String);

pub fn check_intertwining(
    original: &BratteliDiagram,
    derived: &BratteliDiagram,
    cert: &IntertwiningCertificate,
) -> Result<bool, ShapeMismatch> {
    let tele = original
        .telescope(&cert.keep)
        .map_err(|e| ShapeMismatch(e.to_string()))?;
    let levels = tele.depth();
    if cert.c.len() != levels || cert.b.len() != levels + 1 {
        return Err(ShapeMismatch(format!(
            "{} B and {} C factors for {} telescoped levels",
            cert.b.len(),
            cert.c.len(),
            levels
        )));
    }
    if derived.depth() != levels {
        return Err(ShapeMismatch(format!(
            "derived diagram has {} levels, expected {}",
            derived.depth(),
            levels
        )));
    }
    let mut ok = true;
    for n in 0..levels {
        let a = tele.matrix(n);
        let (b, c, b_next) = (&cert.b[n], &cert.c[n], &cert.b[n + 1]);
        let shape = |m: &Matrix, r: usize, col: usize, what: &str| {
            if m.rows() != r || m.cols() != col {
                Err(ShapeMismatch(format!(
                    "{what} at level {n} is {}x{}, expected {r}x{col}",
                    m.rows(),
                    m.cols()
                )))
            } else {
                Ok(())
            }
        };
        shape(b, derived.level_size(n), tele.level_size(n), "B")?;
        shape(c, tele.level_size(n + 1), derived.level_size(n), "C")?;
        shape(
            b_next,
            derived.level_size(n + 1),
            tele.level_size(n + 1),
            "B",
        )?;
        let cb = c.mul(b).ok();
        let bc = b_next.mul(c).ok();
        ok &= cb.as_ref() == Some(a) && bc.as_ref() == Some(derived.matrix(n));
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn w(v: &[Letter]) -> Word {
        Word::from(v)
    }

    fn toy() -> BratteliDiagram {
        BratteliDiagram::from_matrices(vec![m(&[&[1], &[1]]), m(&[&[1, 1], &[2, 1]])]).unwrap()
    }

    fn toy_ordered() -> OrderedBratteliDiagram {
        ordering_from_words(
            &toy(),
            vec![vec![w(&[1]), w(&[1])], vec![w(&[1, 2]), w(&[1, 2, 1])]],
        )
        .unwrap()
    }

    #[test]
    fn validation_reports() {
        assert!(toy().validate().is_empty());
        assert!(BratteliDiagram::from_matrices(vec![])
            .unwrap()
            .validate()
            .is_empty());
        let bad =
            BratteliDiagram::from_matrices(vec![m(&[&[1], &[1]]), m(&[&[1, 0], &[2, 0]])]).unwrap();
        assert_eq!(
            bad.validate(),
            vec![Violation::NoOutgoingEdge {
                level: 1,
                vertex: 2
            }]
        );
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            BratteliDiagram::new(vec![2, 2], vec![m(&[&[1], &[1]]), m(&[&[1], &[1]])]),
            Err(BratteliError::MatrixShape { index: 1, .. })
        ));
    }

    #[test]
    fn telescoping() {
        let d = toy();
        assert_eq!(d.telescope(&[0, 1, 2]).unwrap(), d);
        let t = d.telescope(&[0, 2]).unwrap();
        assert_eq!(t.matrix(0), &m(&[&[2], &[3]]));
        assert_eq!(t.level_sizes(), &[1, 2]);
        assert!(matches!(
            d.telescope(&[1, 2]),
            Err(BratteliError::KeepStart)
        ));
        assert!(matches!(
            d.telescope(&[0, 2, 2]),
            Err(BratteliError::KeepOrder { position: 2 })
        ));
        assert!(matches!(
            d.telescope(&[0, 3]),
            Err(BratteliError::KeepRange { .. })
        ));
        assert_eq!(d.path_counts(2).unwrap(), vec![2, 3]);
    }

    #[test]
    fn ordering_count_mismatch() {
        let d = BratteliDiagram::from_matrices(vec![m(&[&[1]]), m(&[&[1, 2]])]);
        assert!(d.is_err());
        let d = BratteliDiagram::from_matrices(vec![m(&[&[1], &[1]]), m(&[&[1, 2]])]).unwrap();
        let base = vec![w(&[1]), w(&[1])];
        assert!(ordering_from_words(&d, vec![base.clone(), vec![w(&[2, 1, 2])]]).is_ok());
        let err = ordering_from_words(&d, vec![base.clone(), vec![w(&[1, 1, 2])]]).unwrap_err();
        assert_eq!(
            err,
            BratteliError::CountMismatch {
                level: 1,
                vertex: 1,
                expected: vec![1, 2],
                found: vec![2, 1]
            }
        );
        assert!(matches!(
            ordering_from_words(&d, vec![base, vec![Word::empty()]]),
            Err(BratteliError::CountMismatch { .. })
        ));
    }

    #[test]
    fn read_morphisms_transcribes_and_hats() {
        let b = toy_ordered();
        let t = b.read_morphisms().unwrap();
        let tau0 = t.get(0).unwrap();
        assert!(tau0.is_hat());
        assert_eq!(tau0.image_lengths(), vec![1, 1]);
        assert_eq!(t.get(1).unwrap().image(2).letters(), &[1, 2, 1]);
        assert_eq!(t.get(1).unwrap().incidence(), *b.diagram().matrix(1));
    }

    #[test]
    fn vershik_walk() {
        let b = toy_ordered();
        let p = b.minimal_path(2, 2);
        assert_eq!(p.edges, vec![(1, 1), (2, 1)]);
        let q = b.vershik_successor(&p).unwrap();
        assert_eq!(q.edges, vec![(2, 1), (2, 2)]);
        let r = b.vershik_successor(&q).unwrap();
        assert_eq!(r.edges, vec![(1, 1), (2, 3)]);
        assert!(matches!(
            b.vershik_successor(&r),
            Err(BratteliError::Overflow { depth: 2 })
        ));
        assert!(matches!(
            b.vershik_successor(&FinitePath {
                edges: vec![(2, 1), (2, 1)]
            }),
            Err(BratteliError::InvalidPath { edge: 2 })
        ));
    }

    #[test]
    fn proper_ordering() {
        let b = toy_ordered();
        assert!(b.check_proper_ordering(1));
        assert!(!b.check_proper_ordering(2));
    }

    #[test]
    fn intertwining_hand_case() {
        let original = BratteliDiagram::from_matrices(vec![m(&[&[4]])]).unwrap();
        let derived = BratteliDiagram::from_matrices(vec![m(&[&[2], &[2]])]).unwrap();
        let cert = IntertwiningCertificate {
            keep: vec![0, 1],
            b: vec![m(&[&[1]]), m(&[&[1], &[1]])],
            c: vec![m(&[&[4]])],
        };
        // C_0 B_0 = [4]; B_1 C_0 = [[4],[4]] differs from the derived matrix.
        assert!(!check_intertwining(&original, &derived, &cert).unwrap());
        let derived = BratteliDiagram::from_matrices(vec![m(&[&[4], &[4]])]).unwrap();
        assert!(check_intertwining(&original, &derived, &cert).unwrap());
        let s = serde_json::to_string(&cert).unwrap();
        assert_eq!(
            s,
            r#"{"keep":[0,1],"levels":[{"B":[[1]],"C":[[4]]},{"B":[[1],[1]]}]}"#
        );
        assert_eq!(
            serde_json::from_str::<IntertwiningCertificate>(&s).unwrap(),
            cert
        );
    }

    #[test]
    fn diagram_json() {
        let d = toy();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(
            s,
            r#"{"levels":[2,2],"matrices":[[[1],[1]],[[1,1],[2,1]]]}"#
        );
        assert_eq!(serde_json::from_str::<BratteliDiagram>(&s).unwrap(), d);
        let o = toy_ordered();
        let s = serde_json::to_string(&o).unwrap();
        assert_eq!(
            serde_json::from_str::<OrderedBratteliDiagram>(&s).unwrap(),
            o
        );
    }
}
