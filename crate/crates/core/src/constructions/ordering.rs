use super::{ConstructionError, RemarkCondition};
use crate::bratteli::{ordering_from_words, BratteliDiagram, OrderedBratteliDiagram};
use crate::words::{Letter, Word};

/// The order word for vertex `i` (1-based) with incoming letter counts `row`:
/// the mandated (P_k) prefix, then the remaining letters in ascending blocks
/// with the `v_m` block last.
pub fn pk_word(row: &[u64], i: usize, k: usize) -> Result<Word, RemarkCondition> {
    let m = row.len();
    if row.contains(&0) {
        return Err(RemarkCondition::PositiveEntries);
    }
    if m <= k {
        return Err(RemarkCondition::AlphabetSize);
    }
    if m < k + 2 {
        return Err(RemarkCondition::MarkerRoom);
    }
    let mut prefix: Vec<(usize, u64)> = Vec::new();
    if i <= k + 1 {
        for j in 1..i {
            if row[j - 1] < 2 {
                return Err(RemarkCondition::DoubledPrefix);
            }
            prefix.push((j, 2));
        }
        prefix.extend((i..=k + 1).map(|j| (j, 1)));
    } else {
        if (row[0] as usize) < i {
            return Err(RemarkCondition::LeadingRun);
        }
        prefix.push((1, i as u64));
        prefix.push((2, 1));
    }
    let mut remaining = row.to_vec();
    let mut word = Vec::with_capacity(row.iter().sum::<u64>() as usize);
    for &(j, c) in &prefix {
        remaining[j - 1] -= c;
        word.extend(std::iter::repeat_n(j as Letter, c as usize));
    }
    for (j, &c) in remaining.iter().enumerate() {
        word.extend(std::iter::repeat_n(j as Letter + 1, c as usize));
    }
    Ok(Word::new(word))
}

fn root_words(d: &BratteliDiagram) -> Vec<Word> {
    let a0 = d.matrix(0);
    (0..a0.rows())
        .map(|u| Word::new(vec![1; a0.get(u, 0) as usize]))
        .collect()
}

fn assign_with(
    d: &BratteliDiagram,
    k_at: impl Fn(usize) -> usize,
) -> Result<OrderedBratteliDiagram, ConstructionError> {
    if d.depth() == 0 {
        return ordering_from_words(d, Vec::new()).map_err(Into::into);
    }
    let mut words = vec![root_words(d)];
    for n in 1..d.depth() {
        let a = d.matrix(n);
        let k = k_at(n);
        let level: Result<Vec<Word>, ConstructionError> = (0..a.rows())
            .map(|u| {
                pk_word(a.row(u), u + 1, k).map_err(|condition| ConstructionError::Precondition {
                    level: n,
                    vertex: u + 1,
                    condition,
                })
            })
            .collect();
        words.push(level?);
    }
    Ok(ordering_from_words(d, words)?)
}

/// An ordering whose read morphisms satisfy Property (P_k).
pub fn assign_pk_ordering(
    d: &BratteliDiagram,
    k: usize,
) -> Result<OrderedBratteliDiagram, ConstructionError> {
    assign_with(d, |_| k)
}

/// An ordering whose read morphisms satisfy Property (P_∞): level `n` uses
/// the (P_k) recipe with `k = n`.
pub fn assign_pinf_ordering(
    d: &BratteliDiagram,
) -> Result<OrderedBratteliDiagram, ConstructionError> {
    assign_with(d, |n| n)
}
