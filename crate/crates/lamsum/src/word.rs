//! Reduced words in the rank-2 free group on the generator pair.
//!
//! Letters are written `g`, `G`, `d`, `D` for the first generator, its
//! inverse, the second generator and its inverse. Words are kept freely
//! reduced at all times; the empty word is the identity.

use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// first generator
    G,
    /// inverse of the first generator
    Gi,
    /// second generator
    D,
    /// inverse of the second generator
    Di,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::G => Letter::Gi,
            Letter::Gi => Letter::G,
            Letter::D => Letter::Di,
            Letter::Di => Letter::D,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::G => 'g',
            Letter::Gi => 'G',
            Letter::D => 'd',
            Letter::Di => 'D',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'g' => Some(Letter::G),
            'G' => Some(Letter::Gi),
            'd' => Some(Letter::D),
            'D' => Some(Letter::Di),
            _ => None,
        }
    }

    pub const ALL: [Letter; 4] = [Letter::G, Letter::Gi, Letter::D, Letter::Di];
}

#[derive(Debug, Error, PartialEq)]
pub enum WordError {
    #[error("invalid letter {0:?}; expected one of g, G, d, D")]
    InvalidLetter(char),
}

/// A freely reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// Builds a word from arbitrary letters, freely reducing.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn parse(s: &str) -> Result<Word, WordError> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            letters.push(Letter::from_char(c).ok_or(WordError::InvalidLetter(c))?);
        }
        Ok(Word::from_letters(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends one letter, cancelling against the current tail.
    pub fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    /// Reduced concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Reduced conjugate `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &Word) -> Word {
        self.concat(other).concat(&self.inverse())
    }

    /// Strips matching inverse prefix/suffix pairs.
    pub fn cyclically_reduce(&self) -> Word {
        let mut ls = self.letters.clone();
        while ls.len() >= 2 && *ls.first().unwrap() == ls.last().unwrap().inverse() {
            ls.pop();
            ls.remove(0);
        }
        Word { letters: ls }
    }

    /// Whether two words are conjugate, decided through cyclic words.
    pub fn is_conjugate(&self, other: &Word) -> bool {
        let a = self.cyclically_reduce();
        let b = other.cyclically_reduce();
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        let n = a.len();
        (0..n).any(|k| (0..n).all(|i| a.letters[(i + k) % n] == b.letters[i]))
    }

    /// Whether the word is a proper power u^k with k ≥ 2.
    pub fn is_proper_power(&self) -> bool {
        let n = self.len();
        if n < 2 {
            return false;
        }
        (1..=n / 2)
            .filter(|p| n.is_multiple_of(*p))
            .any(|p| (p..n).all(|i| self.letters[i] == self.letters[i - p]))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// All freely reduced words of length at most `max_len`, in BFS order
/// (shorter words first); there are 1 + 4·(3^max_len − 1)/2 of them.
pub fn reduced_words(max_len: usize) -> Vec<Word> {
    let mut all = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for w in &frontier {
            for &l in &Letter::ALL {
                if w.letters.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.letters.push(l);
                next.push(v);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}
