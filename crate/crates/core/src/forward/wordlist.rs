use std::cmp::Ordering;

use crate::sequence::{Symbol, Word};

/// Canonical enumeration `w(0), w(1), ...` of all words over a finite alphabet:
/// by length, then lexicographically by symbol value. `w(0)` is the empty word
/// and every proper suffix of a word comes before it.
#[derive(Clone, Debug)]
pub struct WordList {
    alphabet: Vec<Symbol>,
}

impl WordList {
    pub fn new(mut alphabet: Vec<Symbol>) -> Self {
        alphabet.sort_unstable();
        alphabet.dedup();
        Self { alphabet }
    }

    /// Alphabet of the symbols occurring in `symbols`.
    pub fn observed(symbols: &[Symbol]) -> Self {
        Self::new(symbols.to_vec())
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn iter(&self) -> WordIter<'_> {
        WordIter {
            list: self,
            digits: None,
        }
    }

    /// Position of `w`; `None` if it uses a foreign symbol or the index overflows.
    pub fn index_of(&self, w: &Word) -> Option<u128> {
        let a = self.alphabet.len() as u128;
        let mut offset: u128 = 0;
        let mut block: u128 = 1;
        for _ in 0..w.len() {
            offset = offset.checked_add(block)?;
            block = block.checked_mul(a)?;
        }
        let mut rank: u128 = 0;
        for s in w.letters() {
            let d = self.alphabet.binary_search(s).ok()? as u128;
            rank = rank.checked_mul(a)?.checked_add(d)?;
        }
        offset.checked_add(rank)
    }

    pub fn get(&self, mut index: u128) -> Option<Word> {
        let a = self.alphabet.len() as u128;
        let mut len = 0u32;
        let mut block: u128 = 1;
        while index >= block {
            if a == 0 {
                return None;
            }
            index -= block;
            block = block.checked_mul(a)?;
            len += 1;
        }
        let mut letters = vec![0; len as usize];
        for slot in letters.iter_mut().rev() {
            *slot = self.alphabet[(index % a) as usize];
            index /= a;
        }
        Some(Word::new(letters))
    }
}

/// Compares two words by their position in the canonical list.
pub fn word_order(a: &Word, b: &Word) -> Ordering {
    a.list_order(b)
}

pub struct WordIter<'a> {
    list: &'a WordList,
    digits: Option<Vec<usize>>,
}

impl Iterator for WordIter<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let a = self.list.alphabet.len();
        match &mut self.digits {
            None => self.digits = Some(Vec::new()),
            Some(d) => {
                if a == 0 {
                    return None;
                }
                let mut i = d.len();
                loop {
                    if i == 0 {
                        let len = d.len() + 1;
                        d.clear();
                        d.resize(len, 0);
                        break;
                    }
                    i -= 1;
                    d[i] += 1;
                    if d[i] < a {
                        break;
                    }
                    d[i] = 0;
                }
            }
        }
        let d = self.digits.as_ref().unwrap();
        Some(Word::new(d.iter().map(|&i| self.list.alphabet[i]).collect()))
    }
}
