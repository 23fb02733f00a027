use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::directive::{DirectiveError, DirectiveSequence};
use crate::words::{Letter, Morphism, Word};

/// Interior words longer than this are refused.
const MAX_INTERIOR: u128 = 1 << 24;

/// Image length of the hat morphism `τ_0`.
const L0: u64 = 3;

/// A growth sequence `(g_n)`, evaluated through `ln g_n`.
#[derive(Debug, Clone, PartialEq)]
pub enum GFunction {
    /// `g_n = 2^{√n}`.
    Pow2Sqrt,
    /// `g_n = n^d`.
    Poly(f64),
    /// Explicit values read from a table.
    Table(BTreeMap<u64, f64>),
}

#[derive(Deserialize)]
struct TableRow {
    n: u64,
    g_n: f64,
}

impl GFunction {
    /// Parses `pow2_sqrt` or `poly:<d>`.
    pub fn builtin(name: &str) -> Result<GFunction, ConstructionError> {
        if name == "pow2_sqrt" {
            return Ok(GFunction::Pow2Sqrt);
        }
        if let Some(d) = name.strip_prefix("poly:") {
            let d: f64 = d
                .parse()
                .map_err(|_| ConstructionError::GFunction(format!("bad exponent in {name:?}")))?;
            if !(d.is_finite() && d >= 0.0) {
                return Err(ConstructionError::GFunction(format!(
                    "bad exponent in {name:?}"
                )));
            }
            return Ok(GFunction::Poly(d));
        }
        Err(ConstructionError::GFunction(format!(
            "unknown builtin {name:?}"
        )))
    }

    /// Reads a CSV table with header `n,g_n`.
    pub fn from_csv(reader: impl Read) -> Result<GFunction, ConstructionError> {
        let mut table = BTreeMap::new();
        let mut rdr = csv::Reader::from_reader(reader);
        for (line, row) in rdr.deserialize::<TableRow>().enumerate() {
            let row =
                row.map_err(|e| ConstructionError::GFunction(format!("row {}: {e}", line + 1)))?;
            if !(row.g_n > 0.0 && row.g_n.is_finite()) {
                return Err(ConstructionError::GFunction(format!(
                    "row {}: g_n must be positive",
                    line + 1
                )));
            }
            table.insert(row.n, row.g_n);
        }
        Ok(GFunction::Table(table))
    }

    pub fn ln_at(&self, n: u64) -> Result<f64, ConstructionError> {
        match self {
            GFunction::Pow2Sqrt => Ok((n as f64).sqrt() * std::f64::consts::LN_2),
            GFunction::Poly(d) => Ok(d * (n as f64).ln()),
            GFunction::Table(t) => t.get(&n).map(|g| g.ln()).ok_or_else(|| {
                ConstructionError::GFunction(format!("table has no value for n = {n}"))
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubexpLevel {
    pub level: usize,
    pub alpha: u32,
    pub length: u64,
    /// Word between the prefix `v_1 v_2` and the suffix in the image of `v_1`.
    pub interior: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubexpSpec {
    pub l0: u64,
    pub levels: Vec<SubexpLevel>,
    /// Trailing levels built with `α = 1` so the language stays computable.
    pub filler_levels: usize,
}

/// Cyclic de Bruijn sequence of order `n` over symbols `0..q`
/// (Fredricksen–Kessler–Maiorana).
pub fn de_bruijn(q: usize, n: usize) -> Vec<usize> {
    let mut seq = Vec::new();
    if q == 1 {
        return vec![0];
    }
    let mut a = vec![0usize; n + 1];
    fn db(t: usize, p: usize, q: usize, n: usize, a: &mut Vec<usize>, seq: &mut Vec<usize>) {
        if t > n {
            if n.is_multiple_of(p) {
                seq.extend_from_slice(&a[1..=p]);
            }
        } else {
            a[t] = a[t - p];
            db(t + 1, p, q, n, a, seq);
            for j in a[t - p] + 1..q {
                a[t] = j;
                db(t + 1, t, q, n, a, seq);
            }
        }
    }
    db(1, 1, q, n, &mut a, &mut seq);
    seq
}

/// Linear word of length `q^n + n - 1` containing every length-`n` word.
pub fn linear_de_bruijn(q: usize, n: usize) -> Vec<usize> {
    let mut seq = de_bruijn(q, n);
    let wrap: Vec<usize> = seq.iter().cycle().take(n - 1).copied().collect();
    seq.extend(wrap);
    seq
}

fn level_images(n: usize, alpha: u32) -> Result<(Vec<Vec<Letter>>, Word), ConstructionError> {
    let m = n + 2;
    let q = (m - 1) as u128;
    if q.checked_pow(alpha).is_none_or(|p| p > MAX_INTERIOR) {
        return Err(ConstructionError::LengthOverflow { level: n });
    }
    let w: Word = linear_de_bruijn(m - 1, alpha as usize)
        .into_iter()
        .map(|s| s as Letter + 2)
        .collect();
    let length = (w.len() + 3).max(2 * n + 4);
    let last = m as Letter;
    let pad = last - 1;
    let mut images = Vec::with_capacity(n + 3);
    let mut first = vec![1, 2];
    first.extend_from_slice(&w);
    first.resize(length - 1, pad);
    first.push(last);
    images.push(first);
    for i in 2..=n + 3 {
        let mut img = vec![1; i];
        img.push(2);
        img.extend(3..last);
        img.resize(length - 1, pad);
        img.push(last);
        images.push(img);
    }
    Ok((images, w))
}

/// Builds `τ_0, …` with `|V_n| = n + 2`, `L_0 = 3`, `levels` levels whose
/// `α_n` is the least value with `(n+1)^{α_n - 1} ≥ g(α_n L_{n-1} ⋯ L_0)`,
/// and `tail` further levels with `α = 1`.
pub fn build_subexp_family(
    g: &GFunction,
    levels: usize,
    alpha_cap: u32,
    tail: usize,
) -> Result<(DirectiveSequence, SubexpSpec), ConstructionError> {
    let hat: Vec<Vec<Letter>> = (0..3u32)
        .map(|u| (1..=L0 as Letter).map(|j| u * L0 as Letter + j).collect())
        .collect();
    let mut morphisms = vec![Morphism::from_images(0, 9, hat).map_err(DirectiveError::from)?];
    let mut spec = SubexpSpec {
        l0: L0,
        levels: Vec::new(),
        filler_levels: tail,
    };
    let mut product: u128 = L0 as u128;
    for n in 1..=levels + tail {
        let alpha = if n <= levels {
            let base = ((n + 1) as f64).ln();
            let mut found = None;
            for alpha in 1..=alpha_cap {
                let x = u64::try_from(alpha as u128 * product)
                    .map_err(|_| ConstructionError::LengthOverflow { level: n })?;
                if (alpha - 1) as f64 * base >= g.ln_at(x)? {
                    found = Some(alpha);
                    break;
                }
            }
            found.ok_or(ConstructionError::AlphaCap {
                level: n,
                cap: alpha_cap,
            })?
        } else {
            1
        };
        let (images, w) = level_images(n, alpha)?;
        let length = images[0].len() as u64;
        product = product
            .checked_mul(length as u128)
            .filter(|&p| p <= u64::MAX as u128)
            .ok_or(ConstructionError::LengthOverflow { level: n })?;
        morphisms.push(Morphism::from_images(n, n + 2, images).map_err(DirectiveError::from)?);
        if n <= levels {
            spec.levels.push(SubexpLevel {
                level: n,
                alpha,
                length,
                interior: w,
            });
        }
    }
    Ok((DirectiveSequence::finite(morphisms)?, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::factors;

    #[test]
    fn de_bruijn_binary_order_three() {
        let s = de_bruijn(2, 3);
        assert_eq!(s, vec![0, 0, 0, 1, 0, 1, 1, 1]);
        let lin = linear_de_bruijn(2, 3);
        assert_eq!(lin.len(), 10);
    }

    #[test]
    fn sqrt_growth_level_one() {
        let (t, spec) = build_subexp_family(&GFunction::Pow2Sqrt, 1, 64, 2).unwrap();
        let l1 = &spec.levels[0];
        assert_eq!(l1.alpha, 5);
        assert_eq!(l1.interior.len(), 36);
        assert_eq!(l1.length, 39);
        let w: Vec<u32> = l1.interior.to_vec();
        assert_eq!(factors(&w, 5).len(), 32);
        for n in 1..t.prefix().len() {
            let lens = t.get(n).unwrap().image_lengths();
            assert!(lens.iter().all(|&l| l == lens[0]));
        }
    }

    #[test]
    fn builtin_parsing() {
        assert_eq!(GFunction::builtin("poly:2").unwrap(), GFunction::Poly(2.0));
        assert!(GFunction::builtin("poly:x").is_err());
        assert!(GFunction::builtin("exp").is_err());
        let t = GFunction::from_csv("n,g_n\n15,20.5\n".as_bytes()).unwrap();
        assert!((t.ln_at(15).unwrap() - 20.5f64.ln()).abs() < 1e-12);
        assert!(t.ln_at(16).is_err());
    }

    #[test]
    fn alpha_cap_is_reported() {
        let g = GFunction::Poly(50.0);
        assert!(matches!(
            build_subexp_family(&g, 1, 3, 0),
            Err(ConstructionError::AlphaCap { level: 1, cap: 3 })
        ));
    }
}
