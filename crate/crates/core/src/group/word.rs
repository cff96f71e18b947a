use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::GroupError;
use crate::config::SchottkyConfiguration;
use crate::moebius::{MoebiusMap, PrecisePoint};

/// Position of a letter in the canonical order `+1 < -1 < +2 < -2 < ...`.
pub fn letter_key(letter: i32) -> u32 {
    2 * (letter.unsigned_abs() - 1) + (letter < 0) as u32
}

pub fn letter_from_key(key: u32) -> i32 {
    let k = (key / 2 + 1) as i32;
    if key.is_multiple_of(2) {
        k
    } else {
        -k
    }
}

/// A freely reduced word in the generators: `+k` is `A_k`, `-k` is `A_k⁻¹`
/// (1-based). The word `l_1 l_2 ... l_n` denotes `A_{l_1} ∘ ... ∘ A_{l_n}`.
///
/// Ordering is shortlex over the canonical letter order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ReducedWord {
    letters: Vec<i32>,
}

impl ReducedWord {
    pub fn new(letters: Vec<i32>) -> Result<Self, GroupError> {
        if letters.contains(&0) {
            return Err(GroupError::ZeroLetter);
        }
        if let Some(position) = letters.windows(2).position(|w| w[0] == -w[1]) {
            return Err(GroupError::NotReduced { position });
        }
        Ok(Self { letters })
    }

    pub(crate) fn from_letters_unchecked(letters: Vec<i32>) -> Self {
        debug_assert!(Self::new(letters.clone()).is_ok());
        Self { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word of the inverse element: letters reversed and negated.
    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    /// First and last letters are not mutually inverse.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => *a != -*b,
            _ => true,
        }
    }

    /// Cyclic rotation by one letter; stays reduced when the word is
    /// cyclically reduced.
    pub fn rotate_left(&self) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(1);
        }
        Self { letters }
    }

    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }
}

impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            self.letters.iter().map(|&l| letter_key(l)).cmp(other.letters.iter().map(|&l| letter_key(l)))
        })
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Letters joined by `.`, e.g. `1.-2.1`; the empty word is the empty string.
impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for ReducedWord {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let letters = s
            .split('.')
            .map(|t| t.parse::<i32>().map_err(|_| GroupError::BadWord(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(letters)
    }
}

impl Serialize for ReducedWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All reduced words of length at most `max_len` on `rank` generators, in
/// canonical order.
pub fn enumerate_words(rank: usize, max_len: usize) -> WordIter {
    WordIter { rank: rank as u32, max_len, current: None, done: false }
}

/// Streaming enumeration; see [`enumerate_words`].
pub struct WordIter {
    rank: u32,
    max_len: usize,
    current: Option<Vec<u32>>,
    done: bool,
}

impl WordIter {
    /// Smallest key allowed after `prev`.
    fn first_after(prev: Option<u32>) -> u32 {
        match prev {
            // after -1 the letter +1 would cancel
            Some(1) => 1,
            _ => 0,
        }
    }

    fn is_inverse(a: u32, b: u32) -> bool {
        a / 2 == b / 2 && a != b
    }

    /// Smallest word of length `n` in canonical order.
    fn first_of_length(&self, n: usize) -> Option<Vec<u32>> {
        let mut keys = Vec::with_capacity(n);
        for _ in 0..n {
            let k = Self::first_after(keys.last().copied());
            if k >= 2 * self.rank {
                return None;
            }
            keys.push(k);
        }
        Some(keys)
    }

    /// Next word of the same length, as an odometer over reduced words.
    fn advance(&self, keys: &mut [u32]) -> bool {
        let top = 2 * self.rank;
        for p in (0..keys.len()).rev() {
            let prev = if p == 0 { None } else { Some(keys[p - 1]) };
            let mut k = keys[p] + 1;
            while k < top && prev.is_some_and(|q| Self::is_inverse(q, k)) {
                k += 1;
            }
            if k < top {
                keys[p] = k;
                for j in (p + 1)..keys.len() {
                    keys[j] = Self::first_after(Some(keys[j - 1]));
                    if keys[j] >= top {
                        return false;
                    }
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for WordIter {
    type Item = ReducedWord;

    fn next(&mut self) -> Option<ReducedWord> {
        if self.done {
            return None;
        }
        let next = match self.current.take() {
            None => Some(Vec::new()),
            Some(mut keys) => {
                if self.advance(&mut keys) {
                    Some(keys)
                } else if keys.len() < self.max_len {
                    self.first_of_length(keys.len() + 1)
                } else {
                    None
                }
            }
        };
        match next {
            Some(keys) => {
                let word = ReducedWord { letters: keys.iter().map(|&k| letter_from_key(k)).collect() };
                self.current = Some(keys);
                Some(word)
            }
            None => {
                self.done = true;
                None
            }
        }
    }
}

/// Number of reduced words of length at most `max_len` (including the empty word).
pub fn word_count(rank: usize, max_len: usize) -> u64 {
    let mut total = 1u64;
    let mut level = 2 * rank as u64;
    for _ in 0..max_len {
        total += level;
        level *= (2 * rank as u64).saturating_sub(1);
    }
    total
}

/// Generators and their inverses, indexed by letter key.
#[derive(Clone, Debug)]
pub struct Alphabet {
    maps: Vec<MoebiusMap>,
}

impl Alphabet {
    pub fn new(config: &SchottkyConfiguration) -> Self {
        let maps = config.pairs().iter().flat_map(|p| [p.generator, p.generator.inverse()]).collect();
        Self { maps }
    }

    pub fn rank(&self) -> usize {
        self.maps.len() / 2
    }

    pub fn letter(&self, letter: i32) -> Result<&MoebiusMap, GroupError> {
        if letter == 0 {
            return Err(GroupError::ZeroLetter);
        }
        self.maps.get(letter_key(letter) as usize).ok_or(GroupError::BadIndex { letter, rank: self.rank() })
    }

    pub fn evaluate(&self, w: &ReducedWord) -> Result<MoebiusMap, GroupError> {
        w.letters().iter().try_fold(MoebiusMap::identity(), |acc, &l| Ok(acc.compose(self.letter(l)?)))
    }

    /// `w(p)` letter by letter, rightmost first, in double-double arithmetic.
    pub fn apply_word(&self, w: &ReducedWord, p: PrecisePoint) -> Result<PrecisePoint, GroupError> {
        w.letters().iter().rev().try_fold(p, |q, &l| Ok(q.apply(self.letter(l)?)))
    }
}

/// `A_{l_1} ∘ ... ∘ A_{l_n}`, renormalized after every step.
pub fn evaluate(config: &SchottkyConfiguration, w: &ReducedWord) -> Result<MoebiusMap, GroupError> {
    Alphabet::new(config).evaluate(w)
}
