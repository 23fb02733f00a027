use super::ConstructionError;
use crate::bratteli::{BratteliDiagram, IntertwiningCertificate};
use crate::matrix::Matrix;

/// `B(w, v) = 1` iff `v = g(w)`, with the round-robin surjection
/// `g(w) = ((w - 1) mod |V|) + 1`.
pub fn copy_pattern(w_size: usize, v_size: usize) -> Matrix {
    let mut b = Matrix::zeros(w_size, v_size);
    for w in 0..w_size {
        b.set(w, w % v_size, 1);
    }
    b
}

/// Splits each column `v` of `a` among the copies of `v` in a level of size
/// `w_size`: every copy gets `⌊a/c⌋`, the lowest-index copies one more until
/// the remainder is used up. Satisfies `split_evenly(a, w) · copy_pattern(w, |V|) = a`.
pub fn split_evenly(a: &Matrix, w_size: usize) -> Matrix {
    let v_size = a.cols();
    let mut c = Matrix::zeros(a.rows(), w_size);
    for w in 0..w_size {
        let v = w % v_size;
        let copies = (w_size / v_size + usize::from(v < w_size % v_size)) as u64;
        let q = (w / v_size) as u64;
        for u in 0..a.rows() {
            let x = a.get(u, v);
            c.set(u, w, x / copies + u64::from(q < x % copies));
        }
    }
    c
}

/// Telescopes `d` until every matrix past level 0 is large, then replaces each
/// kept level by a level of vertex copies. Returns the derived diagram and the
/// certificate tying it to `d`.
///
/// Derived level `n ≥ 1` has `s_n = max(n + 1, k + 2, |V_n|)` vertices and
/// every entry of its matrix is at least `s_{n+1} + k + 2`.
pub fn amplify_diagram(
    d: &BratteliDiagram,
    k: usize,
) -> Result<(BratteliDiagram, IntertwiningCertificate), ConstructionError> {
    const NEEDED: usize = 2;
    let target = |j: usize, size: usize| (j + 1).max(k + 2).max(size);
    if d.depth() < NEEDED {
        return Err(ConstructionError::WindowTooShort {
            achieved: d.depth().min(1),
            needed: NEEDED,
        });
    }
    let mut keep = vec![0, 1];
    loop {
        let j = keep.len() - 1;
        let start = keep[j];
        if start >= d.depth() {
            break;
        }
        let s_j = target(j, d.level_size(start)) as u64;
        let mut acc = d.matrix(start).clone();
        let mut found = None;
        let mut ever_positive = false;
        for end in start + 1..=d.depth() {
            ever_positive |= acc.is_positive();
            let s_next = target(j + 1, d.level_size(end)) as u64;
            if acc.min_entry().unwrap_or(0) >= s_j * (s_next + k as u64 + 2) {
                found = Some(end);
                break;
            }
            if end < d.depth() {
                match d.matrix(end).mul(&acc) {
                    Ok(m) => acc = m,
                    Err(_) => break,
                }
            }
        }
        match found {
            Some(end) => keep.push(end),
            None if keep.len() > NEEDED => break,
            None if !ever_positive => return Err(ConstructionError::NonSimple { level: start }),
            None => {
                return Err(ConstructionError::WindowTooShort {
                    achieved: keep.len() - 1,
                    needed: NEEDED,
                })
            }
        }
    }
    let tele = d.telescope(&keep)?;
    let levels = tele.depth();
    let sizes: Vec<usize> = (0..=levels)
        .map(|j| {
            if j == 0 {
                1
            } else {
                target(j, tele.level_size(j))
            }
        })
        .collect();
    let b: Vec<Matrix> = (0..=levels)
        .map(|j| copy_pattern(sizes[j], tele.level_size(j)))
        .collect();
    let c: Vec<Matrix> = (0..levels)
        .map(|j| split_evenly(tele.matrix(j), sizes[j]))
        .collect();
    let mut matrices = Vec::with_capacity(levels);
    for j in 0..levels {
        matrices.push(b[j + 1].mul(&c[j])?);
    }
    let derived = BratteliDiagram::from_matrices(matrices)?;
    Ok((derived, IntertwiningCertificate { keep, b, c }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bratteli::check_intertwining;

    #[test]
    fn split_reassembles() {
        let a = Matrix::from_rows(vec![vec![7, 5], vec![4, 9], vec![3, 3]]).unwrap();
        let c = split_evenly(&a, 5);
        let b = copy_pattern(5, 2);
        assert_eq!(c.mul(&b).unwrap(), a);
        // Column 1 of `a` has three copies (w = 1, 3, 5): 7 = 3 + 2 + 2.
        assert_eq!(c.row(0), &[3, 3, 2, 2, 2]);
    }

    #[test]
    fn single_copy_is_identity_pattern() {
        let a = Matrix::from_rows(vec![vec![2, 3], vec![4, 5]]).unwrap();
        assert_eq!(copy_pattern(2, 2), Matrix::identity(2));
        assert_eq!(split_evenly(&a, 2), a);
    }

    #[test]
    fn all_ones_window_is_too_short() {
        let ones = |r, c| Matrix::filled(r, c, 1);
        let d = BratteliDiagram::from_matrices(vec![ones(2, 1), ones(2, 2), ones(2, 2)]).unwrap();
        assert!(matches!(
            amplify_diagram(&d, 1),
            Err(ConstructionError::WindowTooShort { .. })
        ));
    }

    #[test]
    fn non_simple_window() {
        let d = BratteliDiagram::from_matrices(vec![
            Matrix::filled(2, 1, 1),
            Matrix::identity(2),
            Matrix::identity(2),
        ])
        .unwrap();
        assert!(matches!(
            amplify_diagram(&d, 1),
            Err(ConstructionError::NonSimple { level: 1 })
        ));
    }

    #[test]
    fn amplified_bounds_and_certificate() {
        let mut ms = vec![Matrix::filled(2, 1, 1)];
        ms.extend((0..6).map(|_| Matrix::filled(2, 2, 50)));
        let d = BratteliDiagram::from_matrices(ms).unwrap();
        let (dd, cert) = amplify_diagram(&d, 1).unwrap();
        assert!(dd.depth() >= 3);
        for n in 1..dd.depth() {
            assert!(dd.level_size(n) > n.max(1));
            let bound = dd.level_size(n + 1).max(3) as u64;
            assert!(dd.matrix(n).min_entry().unwrap() >= bound);
        }
        assert!(check_intertwining(&d, &dd, &cert).unwrap());
    }
}
