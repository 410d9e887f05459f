use std::collections::HashMap;

use crate::model::CorpusNode;

/// Shannon entropy in bits of the empirical distribution of `tokens`;
/// `None` for an empty stream.
pub fn token_entropy<'a>(tokens: impl IntoIterator<Item = &'a str>) -> Option<f64> {
    let mut freq: HashMap<&str, u64> = HashMap::new();
    let mut n = 0u64;
    for t in tokens {
        *freq.entry(t).or_default() += 1;
        n += 1;
    }
    if n == 0 {
        return None;
    }
    if freq.len() == 1 {
        return Some(0.0);
    }
    // fixed summation order keeps the result independent of hash order
    let mut counts: Vec<u64> = freq.into_values().collect();
    counts.sort_unstable();
    let total = n as f64;
    let h: f64 = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    Some(h.clamp(0.0, total.log2()))
}

pub fn section_entropy(v: &CorpusNode) -> Option<f64> {
    token_entropy(v.tokens.iter())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors() {
        assert_eq!(token_entropy(["a", "a", "a"]), Some(0.0));
        assert_eq!(token_entropy(["a", "a", "b", "c"]), Some(1.5));
        assert_eq!(token_entropy(["a", "b", "c", "d", "e", "f", "g", "h"]), Some(3.0));
        assert_eq!(token_entropy([]), None);
    }

    #[test]
    fn permutation_invariant() {
        let a = token_entropy(["x", "y", "x", "z", "y", "x"]).unwrap();
        let b = token_entropy(["z", "x", "x", "y", "x", "y"]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn all_distinct_hits_upper_bound() {
        let h = token_entropy(["a", "b", "c"]).unwrap();
        assert!(h <= 3f64.log2());
        assert!((h - 3f64.log2()).abs() < 1e-15);
    }
}
