//! Reduced words in a free product of cyclic groups.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;

/// A word `g_{i1}^{e1} ⋯ g_{ik}^{ek}`; adjacent syllables use distinct
/// generators and exponents are canonical modulo finite orders.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    syllables: Vec<(usize, i64)>,
}

/// Representative of `e` modulo `order` in `(−order/2, order/2]`.
pub fn canonical_exponent(e: i64, order: Option<u32>) -> i64 {
    match order {
        Some(m) if m > 0 => {
            let m = m as i64;
            let r = e.rem_euclid(m);
            if 2 * r > m {
                r - m
            } else {
                r
            }
        }
        _ => e,
    }
}

fn order_of(orders: &[Option<u32>], i: usize) -> Option<u32> {
    orders.get(i).copied().flatten()
}

/// Free-product normal form: merges equal neighbours, drops trivial
/// syllables and reduces exponents modulo finite orders.
pub fn reduce_word(raw: &[(usize, i64)], orders: &[Option<u32>]) -> Word {
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(raw.len());
    for &(i, e) in raw {
        let e = canonical_exponent(e, order_of(orders, i));
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.0 == i => {
                let merged = canonical_exponent(last.1 + e, order_of(orders, i));
                if merged == 0 {
                    out.pop();
                } else {
                    last.1 = merged;
                }
            }
            _ => out.push((i, e)),
        }
    }
    Word { syllables: out }
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Reduced form of `raw`, treating every generator as of infinite order.
    pub fn from_raw(raw: &[(usize, i64)]) -> Self {
        reduce_word(raw, &[])
    }

    pub fn generator(i: usize) -> Self {
        Self { syllables: alloc::vec![(i, 1)] }
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters `Σ |eᵢ|`.
    pub fn letter_len(&self) -> usize {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn syllable_len(&self) -> usize {
        self.syllables.len()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.syllables.iter().map(|(i, _)| *i).max()
    }

    pub fn inverse(&self, orders: &[Option<u32>]) -> Word {
        let raw: Vec<_> = self.syllables.iter().rev().map(|&(i, e)| (i, -e)).collect();
        reduce_word(&raw, orders)
    }

    /// Reduced product `self · other`.
    pub fn concat(&self, other: &Word, orders: &[Option<u32>]) -> Word {
        let raw: Vec<_> = self.syllables.iter().chain(other.syllables.iter()).copied().collect();
        reduce_word(&raw, orders)
    }

    pub fn pow(&self, n: i64, orders: &[Option<u32>]) -> Word {
        let base = if n < 0 { self.inverse(orders) } else { self.clone() };
        let mut raw = Vec::new();
        for _ in 0..n.unsigned_abs() {
            raw.extend_from_slice(&base.syllables);
        }
        reduce_word(&raw, orders)
    }

    /// Rewrites a word over generators `0..k` by substituting `images[j]`
    /// for generator `j`.
    pub fn substitute(&self, images: &[Word], orders: &[Option<u32>]) -> Word {
        let mut raw = Vec::new();
        for &(j, e) in &self.syllables {
            let piece = images[j].pow(e, orders);
            raw.extend_from_slice(&piece.syllables);
        }
        reduce_word(&raw, orders)
    }

    fn sort_key(&self) -> (usize, Vec<(usize, u8, u64)>) {
        let seq = self
            .syllables
            .iter()
            .map(|&(i, e)| (i, if e > 0 { 0 } else { 1 }, e.unsigned_abs()))
            .collect();
        (self.letter_len(), seq)
    }
}

/// All nonempty reduced words of letter length `≤ max_len`, ordered by
/// length, then syllable by syllable on (generator, positive before negative,
/// magnitude).
pub fn enumerate_words(n_gens: usize, orders: &[Option<u32>], max_len: usize) -> Vec<Word> {
    fn extend(
        n_gens: usize,
        orders: &[Option<u32>],
        remaining: usize,
        current: &mut Vec<(usize, i64)>,
        out: &mut Vec<Word>,
    ) {
        for i in 0..n_gens {
            if current.last().map(|s| s.0) == Some(i) {
                continue;
            }
            for mag in 1..=remaining as i64 {
                for e in [mag, -mag] {
                    let order = order_of(orders, i);
                    if canonical_exponent(e, order) != e {
                        continue;
                    }
                    current.push((i, e));
                    out.push(Word { syllables: current.clone() });
                    extend(n_gens, orders, remaining - mag as usize, current, out);
                    current.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend(n_gens, orders, max_len, &mut current, &mut out);
    out.sort_by_cached_key(|w| w.sort_key());
    out
}

impl fmt::Display for Word {
    /// `g1^2.g2^-1`; generators are 1-based, exponent 1 is omitted, the empty
    /// word is `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("e");
        }
        for (k, &(i, e)) in self.syllables.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            if e == 1 {
                write!(f, "g{}", i + 1)?;
            } else {
                write!(f, "g{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::empty());
        }
        let mut raw = Vec::new();
        for part in s.split('.') {
            let body = part.strip_prefix('g').ok_or(Error::MalformedWord("syllable must start with 'g'"))?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e.parse::<i64>().map_err(|_| Error::MalformedWord("bad exponent"))?),
                None => (body, 1),
            };
            let idx: usize = idx.parse().map_err(|_| Error::MalformedWord("bad generator index"))?;
            if idx == 0 {
                return Err(Error::MalformedWord("generators are 1-based"));
            }
            raw.push((idx - 1, exp));
        }
        let w = Word::from_raw(&raw);
        if w.syllables.len() != raw.len() {
            return Err(Error::MalformedWord("word is not reduced"));
        }
        Ok(w)
    }
}

impl Word {
    pub fn to_string_lossy(&self) -> String {
        alloc::format!("{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn reduce_examples() {
        assert!(reduce_word(&[(0, 2), (0, -2)], &[]).is_empty());
        assert_eq!(reduce_word(&[(0, 1), (1, 1), (1, -1), (0, 1)], &[]).syllables(), &[(0, 2)]);
        assert_eq!(reduce_word(&[(1, 3)], &[None, Some(2)]).syllables(), &[(1, 1)]);
        assert_eq!(reduce_word(&[(0, 4)], &[Some(5)]).syllables(), &[(0, -1)]);
        assert!(reduce_word(&[(0, 5)], &[Some(5)]).is_empty());
    }

    #[test]
    fn enumerate_examples() {
        let words = enumerate_words(2, &[], 1);
        let names: Vec<_> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(names, ["g1", "g1^-1", "g2", "g2^-1"]);
        assert_eq!(enumerate_words(2, &[], 2).len(), 4 + 12);
        // reduced words of length exactly k in a free group of rank 2: 4·3^{k−1}
        assert_eq!(enumerate_words(2, &[], 4).len(), 4 + 12 + 36 + 108);

        let torsion = enumerate_words(2, &[Some(2), None], 4);
        assert!(torsion.iter().all(|w| w.syllables().iter().all(|&(i, e)| i != 0 || e == 1)));
    }

    #[test]
    fn enumerate_is_length_lexicographic() {
        let words = enumerate_words(3, &[None, Some(3), None], 3);
        assert!(words.windows(2).all(|p| p[0].sort_key() < p[1].sort_key()));
        let set: BTreeSet<_> = words.iter().cloned().collect();
        assert_eq!(set.len(), words.len());
        assert_eq!(words, enumerate_words(3, &[None, Some(3), None], 3));
    }

    #[test]
    fn display_and_parse() {
        let w = Word::from_raw(&[(0, 2), (1, -1)]);
        assert_eq!(w.to_string(), "g1^2.g2^-1");
        assert_eq!("g1^2.g2^-1".parse::<Word>().unwrap(), w);
        assert_eq!("g1^1.g3".parse::<Word>().unwrap(), Word::from_raw(&[(0, 1), (2, 1)]));
        assert_eq!("e".parse::<Word>().unwrap(), Word::empty());
        assert!("g0".parse::<Word>().is_err());
        assert!("g1.g1".parse::<Word>().is_err());
        assert!("h1".parse::<Word>().is_err());
    }

    #[test]
    fn inverse_and_substitute() {
        let orders = [None, None];
        let w = Word::from_raw(&[(0, 2), (1, -1)]);
        assert!(w.concat(&w.inverse(&orders), &orders).is_empty());
        let images = vec![Word::from_raw(&[(0, 1), (1, 3)]), Word::generator(1)];
        let s = Word::generator(0).pow(2, &orders).substitute(&images, &orders);
        assert_eq!(s.syllables(), &[(0, 1), (1, 3), (0, 1), (1, 3)]);
    }

    fn raw_strategy() -> impl Strategy<Value = Vec<(usize, i64)>> {
        proptest::collection::vec((0usize..3, -4i64..=4), 0..12)
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(raw in raw_strategy()) {
            let orders = [None, Some(3), Some(2)];
            let w = reduce_word(&raw, &orders);
            prop_assert_eq!(reduce_word(w.syllables(), &orders), w.clone());
            prop_assert!(w.syllables().windows(2).all(|p| p[0].0 != p[1].0));
            prop_assert!(w.syllables().iter().all(|&(_, e)| e != 0));
        }

        #[test]
        fn display_parse_roundtrip(raw in raw_strategy()) {
            let w = Word::from_raw(&raw);
            prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        }
    }
}
