//! Jaro and Jaro-Winkler similarity over Unicode scalar values.
//!
//! Comparison is case-sensitive and byte-exact at the `char` level. Two empty
//! strings are treated as identical (1.0); an empty and a non-empty string
//! share nothing (0.0).

use alloc::vec;
use alloc::vec::Vec;

/// Winkler prefix scaling factor.
pub const PREFIX_SCALE: f64 = 0.1;
/// Longest common prefix that earns the Winkler boost.
pub const MAX_PREFIX: usize = 4;

pub fn jaro(a: &str, b: &str) -> f64 {
    if a == b {
        return 1.0;
    }
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    jaro_chars(&a, &b)
}

pub fn jaro_winkler(a: &str, b: &str) -> f64 {
    if a == b {
        return 1.0;
    }
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    jaro_winkler_chars(&a, &b)
}

pub fn jaro_winkler_chars(a: &[char], b: &[char]) -> f64 {
    let sim = jaro_chars(a, b);
    let prefix = a.iter().zip(b).take(MAX_PREFIX).take_while(|(x, y)| x == y).count();
    sim + prefix as f64 * PREFIX_SCALE * (1.0 - sim)
}

pub fn jaro_chars(a: &[char], b: &[char]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    if a == b {
        return 1.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut a_hit = vec![false; a.len()];
    let mut b_hit = vec![false; b.len()];
    let mut matches = 0usize;
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_hit[j] && b[j] == ca {
                a_hit[i] = true;
                b_hit[j] = true;
                matches += 1;
                break;
            }
        }
    }
    if matches == 0 {
        return 0.0;
    }
    let mut half_transpositions = 0usize;
    let mut bj = b_hit.iter().zip(b).filter(|(hit, _)| **hit).map(|(_, c)| c);
    for (_, ca) in a_hit.iter().zip(a).filter(|(hit, _)| **hit) {
        if bj.next() != Some(ca) {
            half_transpositions += 1;
        }
    }
    let m = matches as f64;
    let t = (half_transpositions / 2) as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

/// Upper bound on Jaro-Winkler for strings of `short` and `long` chars,
/// independent of their content. Used to skip pairs during all-pairs search.
pub(crate) fn jaro_winkler_upper_bound(short: usize, long: usize) -> f64 {
    if long == 0 {
        return 1.0;
    }
    let jaro_max = (2.0 + short as f64 / long as f64) / 3.0;
    let boost = MAX_PREFIX.min(short) as f64 * PREFIX_SCALE;
    jaro_max + boost * (1.0 - jaro_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_disjoint() {
        assert_eq!(jaro_winkler("BLAST", "BLAST"), 1.0);
        assert_eq!(jaro_winkler("abc", "xyz"), 0.0);
        assert_eq!(jaro_winkler("", ""), 1.0);
        assert_eq!(jaro_winkler("", "a"), 0.0);
        assert_eq!(jaro_winkler("a", ""), 0.0);
    }

    #[test]
    fn martha() {
        // matches 6, transpositions 1: (1 + 1 + 5/6) / 3 = 0.9444..
        let j = jaro("MARTHA", "MARHTA");
        assert!((j - 17.0 / 18.0).abs() < 1e-12);
        // prefix "MAR": 17/18 + 0.3 * (1/18)
        assert!((jaro_winkler("MARTHA", "MARHTA") - 0.961_111_111_111_111).abs() < 1e-9);
    }

    #[test]
    fn single_chars() {
        assert_eq!(jaro("a", "a"), 1.0);
        assert_eq!(jaro("a", "b"), 0.0);
    }

    #[test]
    fn bound_dominates() {
        for (a, b) in [("BLAST", "BLAST engine"), ("ImageJ", "Image J"), ("abcd", "abcdefgh")] {
            let (s, l) = (a.chars().count(), b.chars().count());
            assert!(jaro_winkler(a, b) <= jaro_winkler_upper_bound(s.min(l), s.max(l)) + 1e-12);
        }
    }
}
