//! Reflection symmetries of periodic words, and identification of words
//! that describe the same boundary law.

use std::cmp::Ordering;

use crate::periodic::PeriodicSolution;

pub use crate::periodic::minimal_period;

/// Entrywise comparison tolerance, relative to `max(1, |a|, |b|)`.
pub const WORD_TOL: f64 = 1e-9;

fn eq_tol(a: f64, b: f64) -> bool {
    (a - b).abs() <= WORD_TOL * a.abs().max(b.abs()).max(1.0)
}

fn at(word: &[f64], i: isize) -> f64 {
    let q = word.len() as isize;
    word[i.rem_euclid(q) as usize]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    /// `u_i = u_{q-i}`.
    Mirror,
    /// Reflections about the anchor pair `(0, p)` and `(p, q)`.
    TwoMirror(usize),
    None,
}

/// A symmetry kind together with the index equalities `u_i = u_j` that
/// were checked to establish it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryClass {
    pub kind: SymmetryKind,
    pub certificate: Vec<(isize, isize)>,
}

fn check(word: &[f64], pairs: Vec<(isize, isize)>) -> Option<Vec<(isize, isize)>> {
    pairs
        .iter()
        .all(|&(i, j)| eq_tol(at(word, i), at(word, j)))
        .then_some(pairs)
}

/// Strongest reflection symmetry of a word of period `word.len()`.
pub fn classify(word: &[f64]) -> SymmetryClass {
    let q = word.len() as isize;
    if q == 0 {
        return SymmetryClass {
            kind: SymmetryKind::None,
            certificate: Vec::new(),
        };
    }
    let mirror: Vec<_> = (-1..=q / 2).map(|i| (i, q - i)).collect();
    if let Some(cert) = check(word, mirror) {
        return SymmetryClass {
            kind: SymmetryKind::Mirror,
            certificate: cert,
        };
    }
    for p in 1..q {
        let mut pairs: Vec<_> = (0..=p / 2).map(|i| (i, p - i)).collect();
        pairs.extend((0..=(q - p) / 2).map(|j| (p + j, q - j)));
        if let Some(cert) = check(word, pairs) {
            return SymmetryClass {
                kind: SymmetryKind::TwoMirror(p as usize),
                certificate: cert,
            };
        }
    }
    SymmetryClass {
        kind: SymmetryKind::None,
        certificate: Vec::new(),
    }
}

/// Number of distinct entries of a word, up to [`WORD_TOL`].
pub fn distinct_values(word: &[f64]) -> usize {
    let mut seen: Vec<f64> = Vec::new();
    for &v in word {
        if !seen.iter().any(|&s| eq_tol(s, v)) {
            seen.push(v);
        }
    }
    seen.len()
}

/// Representative of a word's class, and the rotation that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalWord {
    pub word: Vec<f64>,
    pub shift_applied: usize,
}

/// Lexicographic order with the entrywise tolerance.
pub fn cmp_tol(a: &[f64], b: &[f64]) -> Ordering {
    for (&x, &y) in a.iter().zip(b) {
        if !eq_tol(x, y) {
            return x.total_cmp(&y);
        }
    }
    a.len().cmp(&b.len())
}

pub fn words_equal(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && cmp_tol(a, b) == Ordering::Equal
}

fn rotated(word: &[f64], r: usize, scale: bool) -> Vec<f64> {
    let q = word.len();
    let s = if scale { word[r] } else { 1.0 };
    (0..q).map(|i| word[(i + r) % q] / s).collect()
}

fn min_rotation(word: &[f64], shifts: impl Iterator<Item = usize>, scale: bool) -> CanonicalWord {
    let mut best: Option<CanonicalWord> = None;
    for r in shifts {
        let w = rotated(word, r, scale);
        let better = match &best {
            None => true,
            Some(b) => cmp_tol(&w, &b.word) == Ordering::Less,
        };
        if better {
            best = Some(CanonicalWord {
                word: w,
                shift_applied: r,
            });
        }
    }
    best.unwrap_or(CanonicalWord {
        word: Vec::new(),
        shift_applied: 0,
    })
}

/// Lexicographically smallest rotation that starts at an anchor `u_r = 1`.
///
/// Rotations starting at an anchor are again solutions with `u_0 = 1`, so
/// this identifies exactly the cyclic shifts of one orbit. A word with no
/// unit entry is compared over all rotations, each scaled by its first
/// entry. Ties go to the smaller rotation.
pub fn canonical_form(word: &[f64]) -> CanonicalWord {
    let anchors: Vec<usize> = (0..word.len()).filter(|&r| eq_tol(word[r], 1.0)).collect();
    if anchors.is_empty() {
        min_rotation(word, 0..word.len(), true)
    } else {
        min_rotation(word, anchors.into_iter(), false)
    }
}

/// Smallest rotation after rescaling each rotation to start at 1: the
/// coarser identification of boundary laws up to any cyclic shift and
/// positive factor.
pub fn gauge_form(word: &[f64]) -> CanonicalWord {
    min_rotation(word, 0..word.len(), true)
}

fn dedup_by<F>(solutions: &[PeriodicSolution], key: F) -> Vec<PeriodicSolution>
where
    F: Fn(&[f64]) -> CanonicalWord,
{
    let mut keyed: Vec<(Vec<f64>, &PeriodicSolution)> =
        solutions.iter().map(|s| (key(s.word()).word, s)).collect();
    keyed.sort_by(|a, b| {
        a.1.q()
            .cmp(&b.1.q())
            .then_with(|| cmp_tol(&a.0, &b.0))
            .then_with(|| a.1.family().cmp(&b.1.family()))
            .then_with(|| crate::periodic::cmp_words(a.1.word(), b.1.word()))
    });
    let mut out: Vec<(Vec<f64>, PeriodicSolution)> = Vec::new();
    for (k, s) in keyed {
        let dup = out.iter().any(|(ok, os)| os.q() == s.q() && words_equal(ok, &k));
        if !dup {
            out.push((k, s.clone()));
        }
    }
    out.into_iter().map(|(_, s)| s).collect()
}

/// One representative per [`canonical_form`], sorted by
/// `(q, canonical word)`. Words are stored at their minimal period, so a
/// lower-period word is never duplicated by a higher-period branch.
pub fn dedup(solutions: &[PeriodicSolution]) -> Vec<PeriodicSolution> {
    dedup_by(solutions, canonical_form)
}

/// One representative per [`gauge_form`].
pub fn dedup_gauge(solutions: &[PeriodicSolution]) -> Vec<PeriodicSolution> {
    dedup_by(solutions, gauge_form)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let (x, y) = (2.183550745473939, 6.900160813284883);
        assert_eq!(classify(&[1.0, x, y, x]).kind, SymmetryKind::Mirror);
        let y1 = 2.0 + 3f64.sqrt();
        let c = classify(&[1.0, y1, y1, 1.0]);
        assert_eq!(c.kind, SymmetryKind::TwoMirror(3));
        assert!(c.certificate.contains(&(0, 3)));
        assert_eq!(classify(&[1.0, 1.0, 1.0]).kind, SymmetryKind::Mirror);
        assert_eq!(classify(&[1.0, 2.0, 3.0, 5.0]).kind, SymmetryKind::None);
    }

    #[test]
    fn canonical_examples() {
        let x1 = 2.0 + 2f64.sqrt();
        let c = canonical_form(&[x1, 1.0, 1.0]);
        assert_eq!(c.word, vec![1.0, 1.0, x1]);
        assert_eq!(c.shift_applied, 1);

        let y1 = 2.0 + 3f64.sqrt();
        let a = canonical_form(&[1.0, 1.0, y1, y1]);
        let b = canonical_form(&[1.0, y1, y1, 1.0]);
        assert!(words_equal(&a.word, &b.word));
        assert_eq!(b.shift_applied, 3);

        assert_eq!(canonical_form(&[1.0; 4]).word, vec![1.0; 4]);
        assert_eq!(canonical_form(&[2.0, 4.0]).word, vec![1.0, 0.5]);
    }

    #[test]
    fn gauge_merges_reciprocal_pair() {
        let y1 = 2.0 + 3f64.sqrt();
        let y2 = 2.0 - 3f64.sqrt();
        let a = gauge_form(&[1.0, y1, y1, 1.0]);
        let b = gauge_form(&[1.0, y2, y2, 1.0]);
        assert!(words_equal(&a.word, &b.word));
        assert!(!words_equal(
            &canonical_form(&[1.0, y1, y1, 1.0]).word,
            &canonical_form(&[1.0, y2, y2, 1.0]).word
        ));
    }
}
