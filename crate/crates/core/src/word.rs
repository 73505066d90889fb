//! Run-length words of the billiard model.
//!
//! A word with `c` runs is stored as its run lengths `eps[0..c]`, each 1 or 2.
//! Run `i` (1-based) carries the symbol `+` when `i` is odd and `-` when it is
//! even, so the signs never need to be stored. A word belongs to `T(c)` when
//! the first and last runs are single and the symbol length is `1 mod 3`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest crossing number with a nonempty word set.
pub const MIN_CROSSINGS: usize = 3;

/// Default enumeration limit: `2^26` candidate interiors.
pub const DEFAULT_MAX_ENUM_CROSSINGS: usize = 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("run {index} has length {value}; runs must have length 1 or 2")]
    RunOutOfRange { index: usize, value: u32 },
    #[error("first and last runs must have length 1")]
    EndRunNotSingle,
    #[error("symbol length {length} is not 1 mod 3")]
    LengthModViolation { length: usize },
    #[error("a word needs at least 3 runs, got {runs}")]
    TooFewRuns { runs: usize },
    #[error("unexpected character {found:?} at position {position}")]
    BadSymbol { position: usize, found: char },
    #[error("a word must start with '+'")]
    WrongLeadingSign,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("crossing number {c} is below the minimum of 3")]
    TooFewCrossings { c: usize },
    #[error("crossing number {c} exceeds the enumeration cap of {max_c}")]
    Unsupported { c: usize, max_c: usize },
}

/// A validated word of `T(c)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    eps: Vec<u8>,
}

impl Word {
    /// Validates a run-length sequence. Never normalizes.
    pub fn new<I>(eps: I) -> Result<Self, WordError>
    where
        I: IntoIterator,
        I::Item: Into<u32>,
    {
        let raw: Vec<u32> = eps.into_iter().map(Into::into).collect();
        if raw.len() < MIN_CROSSINGS {
            return Err(WordError::TooFewRuns { runs: raw.len() });
        }
        if let Some((index, &value)) = raw.iter().enumerate().find(|(_, &v)| v != 1 && v != 2) {
            return Err(WordError::RunOutOfRange { index: index + 1, value });
        }
        if raw[0] != 1 || raw[raw.len() - 1] != 1 {
            return Err(WordError::EndRunNotSingle);
        }
        let length: usize = raw.iter().map(|&v| v as usize).sum();
        if length % 3 != 1 {
            return Err(WordError::LengthModViolation { length });
        }
        Ok(Word { eps: raw.into_iter().map(|v| v as u8).collect() })
    }

    /// Caller guarantees validity.
    pub(crate) fn from_valid(eps: Vec<u8>) -> Self {
        debug_assert!(Word::new(eps.iter().copied()).is_ok(), "invalid word {eps:?}");
        Word { eps }
    }

    /// Parses a `+`/`-` string (the Unicode minus sign is accepted too).
    pub fn from_symbols(s: &str) -> Result<Self, WordError> {
        let mut runs: Vec<u32> = Vec::new();
        let mut last: Option<char> = None;
        for (position, ch) in s.chars().enumerate() {
            let sym = match ch {
                '+' => '+',
                '-' | '\u{2212}' => '-',
                found => return Err(WordError::BadSymbol { position, found }),
            };
            if last == Some(sym) {
                *runs.last_mut().expect("run exists") += 1;
            } else {
                if last.is_none() && sym != '+' {
                    return Err(WordError::WrongLeadingSign);
                }
                runs.push(1);
                last = Some(sym);
            }
        }
        Word::new(runs)
    }

    pub fn eps(&self) -> &[u8] {
        &self.eps
    }

    /// Number of runs, which is the crossing number of the knot.
    pub fn crossings(&self) -> usize {
        self.eps.len()
    }

    /// Number of symbols `ℓ`.
    pub fn symbol_len(&self) -> usize {
        self.eps.iter().map(|&e| e as usize).sum()
    }

    /// The other word representing the same knot: reversal for odd `c`,
    /// reverse-mirror for even `c`. Both are plain run reversal.
    pub fn reversal_partner(&self) -> Word {
        Word { eps: self.eps.iter().rev().copied().collect() }
    }

    pub fn is_palindromic(&self) -> bool {
        is_palindrome(&self.eps)
    }

    pub fn to_symbols(&self) -> String {
        let mut out = String::with_capacity(self.symbol_len());
        for (i, &e) in self.eps.iter().enumerate() {
            let sym = if i % 2 == 0 { '+' } else { '-' };
            for _ in 0..e {
                out.push(sym);
            }
        }
        out
    }

    /// Lexicographic minimum of the word and its reversal partner.
    pub fn canonical(&self) -> Word {
        let rev = self.reversal_partner();
        if rev < *self {
            rev
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_symbols())
    }
}

pub(crate) fn is_palindrome(eps: &[u8]) -> bool {
    eps.iter().eq(eps.iter().rev())
}

/// Which population of words is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordEnsemble {
    /// Every word of `T(c)`.
    AllWords,
    /// Words of palindromic type, `T_p(c)`.
    PalindromicWords,
    /// One representative per 2-bridge knot.
    KnotClasses,
}

impl WordEnsemble {
    /// The serialized name, e.g. `knot_classes`.
    pub fn as_str(&self) -> &'static str {
        match self {
            WordEnsemble::AllWords => "all_words",
            WordEnsemble::PalindromicWords => "palindromic_words",
            WordEnsemble::KnotClasses => "knot_classes",
        }
    }
}

/// Limit on the crossing number accepted by the enumerators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCap {
    pub max_c: usize,
}

impl Default for EnumerationCap {
    fn default() -> Self {
        EnumerationCap { max_c: DEFAULT_MAX_ENUM_CROSSINGS }
    }
}

impl EnumerationCap {
    pub fn new(max_c: usize) -> Self {
        EnumerationCap { max_c }
    }

    pub fn check(&self, c: usize) -> Result<(), EnumerationError> {
        if c < MIN_CROSSINGS {
            return Err(EnumerationError::TooFewCrossings { c });
        }
        if c > self.max_c {
            return Err(EnumerationError::Unsupported { c, max_c: self.max_c });
        }
        Ok(())
    }
}

/// Contiguous block of interior masks. Interiors are the runs `2..c-1`; the
/// most significant bit is run 2 and a set bit means a double run, so numeric
/// mask order is lexicographic order on `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shard {
    c: usize,
    start: u64,
    end: u64,
}

impl Shard {
    pub fn crossings(&self) -> usize {
        self.c
    }

    pub fn words(&self) -> MaskWords {
        MaskWords { c: self.c, next: self.start, end: self.end }
    }
}

/// Splits the candidate space of `T(c)` by a fixed-length interior prefix.
/// Concatenating the shards' streams in order reproduces [`enumerate_words`].
pub fn shards(c: usize, prefix_bits: u32, cap: EnumerationCap) -> Result<Vec<Shard>, EnumerationError> {
    cap.check(c)?;
    let interior = (c - 2) as u32;
    let bits = prefix_bits.min(interior);
    let width = 1u64 << (interior - bits);
    Ok((0..1u64 << bits).map(|p| Shard { c, start: p * width, end: (p + 1) * width }).collect())
}

/// Stream over interior masks in `[next, end)` that pass the length filter.
#[derive(Debug, Clone)]
pub struct MaskWords {
    c: usize,
    next: u64,
    end: u64,
}

impl Iterator for MaskWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let interior = self.c - 2;
        while self.next < self.end {
            let mask = self.next;
            self.next += 1;
            let length = self.c + mask.count_ones() as usize;
            if length % 3 == 1 {
                return Some(Word::from_valid(eps_from_mask(self.c, mask, interior)));
            }
        }
        None
    }
}

fn eps_from_mask(c: usize, mask: u64, interior: usize) -> Vec<u8> {
    let mut eps = Vec::with_capacity(c);
    eps.push(1);
    for j in (0..interior).rev() {
        eps.push(1 + ((mask >> j) & 1) as u8);
    }
    eps.push(1);
    eps
}

/// All words of `T(c)` in ascending lexicographic order of `eps`.
pub fn enumerate_words(c: usize, cap: EnumerationCap) -> Result<MaskWords, EnumerationError> {
    cap.check(c)?;
    Ok(MaskWords { c, next: 0, end: 1u64 << (c - 2) })
}

/// The palindromic words `T_p(c)`, in the same order as [`enumerate_words`].
/// Generated from the first half of the interior; for palindromes the first
/// half fixes the lexicographic position.
pub fn enumerate_palindromic(c: usize, cap: EnumerationCap) -> Result<PalindromicWords, EnumerationError> {
    cap.check(c)?;
    let half = (c - 2).div_ceil(2);
    Ok(PalindromicWords { c, next: 0, end: 1u64 << half })
}

#[derive(Debug, Clone)]
pub struct PalindromicWords {
    c: usize,
    next: u64,
    end: u64,
}

impl Iterator for PalindromicWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let interior = self.c - 2;
        let half = interior.div_ceil(2);
        while self.next < self.end {
            let h = self.next;
            self.next += 1;
            let mut eps = vec![1u8; self.c];
            for j in 0..half {
                let e = 1 + ((h >> (half - 1 - j)) & 1) as u8;
                eps[1 + j] = e;
                eps[self.c - 2 - j] = e;
            }
            let length: usize = eps.iter().map(|&e| e as usize).sum();
            if length % 3 == 1 {
                return Some(Word::from_valid(eps));
            }
        }
        None
    }
}

/// One representative per knot class with its number of words in `T(c)`:
/// palindromic words count once, every other pair `{w, r(w)}` is emitted once
/// (the lexicographically smaller word) with multiplicity 2.
pub fn canonical_class_reps(
    c: usize,
    cap: EnumerationCap,
) -> Result<impl Iterator<Item = (Word, u8)>, EnumerationError> {
    Ok(enumerate_words(c, cap)?.filter_map(class_rep))
}

pub(crate) fn class_rep(w: Word) -> Option<(Word, u8)> {
    let eps = w.eps();
    match eps.iter().cmp(eps.iter().rev()) {
        std::cmp::Ordering::Equal => Some((w, 1)),
        std::cmp::Ordering::Less => Some((w, 2)),
        std::cmp::Ordering::Greater => None,
    }
}

/// One line of the JSONL word stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordRecord {
    pub c: usize,
    pub eps: Vec<u8>,
    pub symbols: String,
    pub palindromic: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub genus: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub multiplicity: Option<u8>,
}

impl WordRecord {
    pub fn new(w: &Word) -> Self {
        WordRecord {
            c: w.crossings(),
            eps: w.eps().to_vec(),
            symbols: w.to_symbols(),
            palindromic: w.is_palindromic(),
            genus: None,
            multiplicity: None,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("word record serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(eps: &[u8]) -> Word {
        Word::new(eps.iter().copied()).unwrap()
    }

    /// Exhaustive oracle over all `{1,2}^c` sequences, independent of masks.
    fn brute_words(c: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut cur = vec![1u8; c];
        fn rec(i: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if i == cur.len() {
                if Word::new(cur.iter().copied()).is_ok() {
                    out.push(cur.clone());
                }
                return;
            }
            for e in 1..=2 {
                cur[i] = e;
                rec(i + 1, cur, out);
            }
        }
        rec(0, &mut cur, &mut out);
        out
    }

    #[test]
    fn ensemble_names_match_serde() {
        for e in [WordEnsemble::AllWords, WordEnsemble::PalindromicWords, WordEnsemble::KnotClasses] {
            assert_eq!(serde_json::to_value(e).unwrap(), e.as_str());
        }
    }

    #[test]
    fn make_word_examples() {
        let t = w(&[1, 2, 1]);
        assert_eq!((t.crossings(), t.symbol_len()), (3, 4));
        let f = w(&[1, 1, 1, 1]);
        assert_eq!((f.crossings(), f.symbol_len()), (4, 4));
        assert_eq!(Word::new([1u8, 1, 1]), Err(WordError::LengthModViolation { length: 3 }));
    }

    #[test]
    fn make_word_errors() {
        assert_eq!(Word::new([1u8, 3, 1]), Err(WordError::RunOutOfRange { index: 2, value: 3 }));
        assert_eq!(Word::new([1u8, 0, 1]), Err(WordError::RunOutOfRange { index: 2, value: 0 }));
        assert_eq!(Word::new([2u8, 1, 1]), Err(WordError::EndRunNotSingle));
        assert_eq!(Word::new([1u8, 2, 1, 2]), Err(WordError::EndRunNotSingle));
        assert_eq!(Word::new([1u8, 2]), Err(WordError::TooFewRuns { runs: 2 }));
        assert_eq!(Word::new(Vec::<u8>::new()), Err(WordError::TooFewRuns { runs: 0 }));
    }

    #[test]
    fn reversal_and_palindromes() {
        assert_eq!(w(&[1, 2, 2, 1, 1]).reversal_partner(), w(&[1, 1, 2, 2, 1]));
        assert_eq!(w(&[1, 2, 1]).reversal_partner(), w(&[1, 2, 1]));
        assert!(w(&[1, 2, 1]).is_palindromic());
        assert!(!w(&[1, 2, 2, 1, 1]).is_palindromic());
        assert!(w(&[1, 2, 2, 2, 2, 1]).is_palindromic());
    }

    #[test]
    fn symbols() {
        assert_eq!(w(&[1, 2, 1]).to_symbols(), "+--+");
        assert_eq!(w(&[1, 1, 1, 1]).to_symbols(), "+-+-");
        // a seven-crossing word with runs of both lengths
        let fig = Word::from_symbols("+--+-++--+").unwrap();
        assert_eq!(fig.eps(), &[1, 2, 1, 1, 2, 2, 1]);
        assert_eq!(fig.crossings(), 7);
        assert_eq!(fig.symbol_len(), 10);
        assert_eq!(fig.to_symbols(), "+--+-++--+");
        assert_eq!(Word::from_symbols("+\u{2212}\u{2212}+").unwrap(), w(&[1, 2, 1]));
        assert_eq!(Word::from_symbols("-+-"), Err(WordError::WrongLeadingSign));
        assert!(matches!(Word::from_symbols("+x+"), Err(WordError::BadSymbol { position: 1, .. })));
    }

    #[test]
    fn enumeration_small_cases() {
        let cap = EnumerationCap::default();
        let t3: Vec<_> = enumerate_words(3, cap).unwrap().collect();
        assert_eq!(t3, vec![w(&[1, 2, 1])]);
        let t5: Vec<_> = enumerate_words(5, cap).unwrap().collect();
        assert_eq!(t5, vec![w(&[1, 1, 2, 2, 1]), w(&[1, 2, 1, 2, 1]), w(&[1, 2, 2, 1, 1])]);
        assert_eq!(enumerate_words(7, cap).unwrap().count(), 11);
        let tp6: Vec<_> = enumerate_palindromic(6, cap).unwrap().collect();
        assert_eq!(tp6, vec![w(&[1, 2, 2, 2, 2, 1])]);
        assert_eq!(enumerate_palindromic(7, cap).unwrap().count(), 3);
        assert_eq!(enumerate_palindromic(3, cap).unwrap().collect::<Vec<_>>(), vec![w(&[1, 2, 1])]);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let cap = EnumerationCap::default();
        for c in 3..=14 {
            let fast: Vec<Vec<u8>> = enumerate_words(c, cap).unwrap().map(|w| w.eps().to_vec()).collect();
            let brute = brute_words(c);
            assert_eq!(fast, brute, "c={c}");
            let pal: Vec<Vec<u8>> = enumerate_palindromic(c, cap).unwrap().map(|w| w.eps().to_vec()).collect();
            let brute_pal: Vec<Vec<u8>> = brute.into_iter().filter(|e| is_palindrome(e)).collect();
            assert_eq!(pal, brute_pal, "c={c}");
        }
    }

    #[test]
    fn enumeration_counts() {
        let cap = EnumerationCap::default();
        for c in 3..=20usize {
            let t = ((1i64 << (c - 2)) - if c % 2 == 0 { 1 } else { -1 }) / 3;
            let h = (c - 1) / 2;
            let tp = ((1i64 << h) - if h % 2 == 0 { 1 } else { -1 }) / 3;
            assert_eq!(enumerate_words(c, cap).unwrap().count() as i64, t, "c={c}");
            assert_eq!(enumerate_palindromic(c, cap).unwrap().count() as i64, tp, "c={c}");
        }
    }

    #[test]
    fn class_reps() {
        let cap = EnumerationCap::default();
        let c3: Vec<_> = canonical_class_reps(3, cap).unwrap().collect();
        assert_eq!(c3, vec![(w(&[1, 2, 1]), 1)]);
        assert_eq!(canonical_class_reps(7, cap).unwrap().count(), 7);
        for c in 3..=20 {
            let total: usize = canonical_class_reps(c, cap).unwrap().map(|(_, m)| m as usize).sum();
            assert_eq!(total, enumerate_words(c, cap).unwrap().count());
        }
        for c in 3..=24 {
            let t = enumerate_words(c, cap).unwrap().count();
            let tp = enumerate_palindromic(c, cap).unwrap().count();
            let k = canonical_class_reps(c, cap).unwrap().count();
            assert_eq!(t, 2 * k - tp, "c={c}");
        }
    }

    #[test]
    fn shards_concatenate_to_full_stream() {
        let cap = EnumerationCap::default();
        for bits in [0, 1, 3, 5, 40] {
            let merged: Vec<Word> = shards(12, bits, cap).unwrap().iter().flat_map(|s| s.words()).collect();
            assert_eq!(merged, enumerate_words(12, cap).unwrap().collect::<Vec<_>>());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let cap = EnumerationCap::new(10);
        assert!(enumerate_words(10, cap).is_ok());
        assert_eq!(enumerate_words(11, cap).err(), Some(EnumerationError::Unsupported { c: 11, max_c: 10 }));
        assert_eq!(enumerate_palindromic(2, cap).err(), Some(EnumerationError::TooFewCrossings { c: 2 }));
    }

    #[test]
    fn json_record() {
        let rec = WordRecord::new(&w(&[1, 2, 1]));
        assert_eq!(rec.to_json_line(), r#"{"c":3,"eps":[1,2,1],"symbols":"+--+","palindromic":true}"#);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_word() -> impl Strategy<Value = Word> {
            (3usize..24).prop_flat_map(|c| {
                prop::collection::vec(1u8..=2, c - 2).prop_filter_map("length mod 3", move |mid| {
                    let mut eps = vec![1u8];
                    eps.extend(mid);
                    eps.push(1);
                    Word::new(eps).ok()
                })
            })
        }

        proptest! {
            #[test]
            fn reversal_is_an_involution(w in any_word()) {
                prop_assert_eq!(w.reversal_partner().reversal_partner(), w.clone());
                prop_assert_eq!(w.is_palindromic(), w.reversal_partner() == w);
            }

            #[test]
            fn symbols_round_trip(w in any_word()) {
                prop_assert_eq!(Word::from_symbols(&w.to_symbols()).unwrap(), w);
            }
        }
    }
}
