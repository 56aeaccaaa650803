//! Words over a finite alphabet, kept freely reduced at all times.
//!
//! A [`Word`] is a sequence of syllables `g^e` with nonzero exponents and no
//! two adjacent syllables on the same generator. The empty word is the
//! identity. Conventions used throughout the crate:
//!
//! * `x^y = y x y^-1` (conjugation),
//! * `[x, y] = x y x^-1 y^-1` (commutator),
//! * words are compared shortlex on their letter expansion, with letters
//!   ordered `g0 < g0^-1 < g1 < g1^-1 < ...`.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// Index of a generator in an [`Alphabet`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct GeneratorId(pub usize);

/// A single letter `g` or `g^-1` of a word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub gen: GeneratorId,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: GeneratorId, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }

    /// Total order key: generator first, positive before inverse.
    fn key(self) -> (usize, bool) {
        (self.gen.0, self.inverse)
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("generator index {index} out of range for alphabet of size {size}")]
    GeneratorOutOfRange { index: usize, size: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("invalid generator name {0:?}: expected [A-Za-z][A-Za-z0-9_]*")]
    BadName(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
}

/// An ordered list of distinct generator names.
///
/// Names match `[A-Za-z][A-Za-z0-9_]*`. The listed order fixes the letter
/// order used by every shortlex comparison in the crate.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Alphabet {
    names: Vec<String>,
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, AlphabetError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(AlphabetError::BadName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(AlphabetError::DuplicateName(n.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, g: GeneratorId) -> &str {
        &self.names[g.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<GeneratorId> {
        self.names.iter().position(|n| n == name).map(GeneratorId)
    }

    pub fn ids(&self) -> impl Iterator<Item = GeneratorId> {
        (0..self.names.len()).map(GeneratorId)
    }

    /// Freely reduces a raw syllable list, checking generator ranges.
    pub fn reduce(&self, raw: &[(GeneratorId, i64)]) -> Result<Word, WordError> {
        for &(g, _) in raw {
            if g.0 >= self.len() {
                return Err(WordError::GeneratorOutOfRange { index: g.0, size: self.len() });
            }
        }
        Ok(Word::from_syllables(raw.iter().copied()))
    }
}

/// A freely reduced word.
///
/// Invariants: every exponent is nonzero and adjacent syllables use distinct
/// generators. All constructors and operations preserve this, so equality of
/// group elements of the ambient free group is plain structural equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    syllables: Vec<(GeneratorId, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { syllables: Vec::new() }
    }

    pub fn generator(g: GeneratorId) -> Self {
        Word { syllables: vec![(g, 1)] }
    }

    pub fn generator_power(g: GeneratorId, exp: i64) -> Self {
        if exp == 0 {
            Word::identity()
        } else {
            Word { syllables: vec![(g, exp)] }
        }
    }

    /// Builds a word from arbitrary syllables, freely reducing as it goes.
    pub fn from_syllables(syllables: impl IntoIterator<Item = (GeneratorId, i64)>) -> Self {
        let mut out: Vec<(GeneratorId, i64)> = Vec::new();
        for (g, e) in syllables {
            push_syllable(&mut out, g, e);
        }
        Word { syllables: out }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word::from_syllables(letters.into_iter().map(|l| (l.gen, l.exponent())))
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[(GeneratorId, i64)] {
        &self.syllables
    }

    /// Number of letters, i.e. the sum of absolute exponents.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.syllables.iter().flat_map(|&(g, e)| {
            let inv = e < 0;
            (0..e.unsigned_abs()).map(move |_| Letter::new(g, inv))
        })
    }

    pub fn max_generator(&self) -> Option<GeneratorId> {
        self.syllables.iter().map(|&(g, _)| g).max()
    }

    /// Exponent sum of `g` across the word.
    pub fn exponent_sum(&self, g: GeneratorId) -> i64 {
        self.syllables.iter().filter(|&&(h, _)| h == g).map(|&(_, e)| e).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.syllables.clone();
        for &(g, e) in &other.syllables {
            push_syllable(&mut out, g, e);
        }
        Word { syllables: out }
    }

    pub fn inverse(&self) -> Word {
        Word { syllables: self.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `self` conjugated by `y`: returns `y self y^-1`.
    pub fn conjugated_by(&self, y: &Word) -> Word {
        y.concat(self).concat(&y.inverse())
    }

    /// Splits off the maximal cyclic cancellation: returns `(core, conj)`
    /// with `self == conj core conj^-1` and `core` cyclically reduced.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let mut letters: Vec<Letter> = self.letters().collect();
        let mut conj: Vec<Letter> = Vec::new();
        while letters.len() >= 2 && letters[0].cancels(*letters.last().unwrap()) {
            conj.push(letters[0]);
            letters.remove(0);
            letters.pop();
        }
        (Word::from_letters(letters), Word::from_letters(conj))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters().next(), self.letters().last()) {
            (Some(first), Some(last)) => !first.cancels(last),
            _ => true,
        }
    }

    /// Shortlex comparison on the letter expansion.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        let (la, lb) = (self.len(), other.len());
        if la != lb {
            return la.cmp(&lb);
        }
        for (x, y) in self.letters().zip(other.letters()) {
            match x.key().cmp(&y.key()) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// The shortlex least word among all rotations of the cyclic core of
    /// `self` and of its inverse. Two relators have equal canonical forms
    /// precisely when one is a cyclic rotation of the other or of the
    /// other's inverse.
    pub fn canonical_cyclic(&self) -> Word {
        let (core, _) = self.cyclically_reduce();
        if core.is_empty() {
            return core;
        }
        let letters: Vec<Letter> = core.letters().collect();
        let inv: Vec<Letter> = letters.iter().rev().map(|l| l.inverted()).collect();
        let mut best: Option<Vec<Letter>> = None;
        for base in [&letters, &inv] {
            for start in 0..base.len() {
                let rot: Vec<Letter> =
                    base[start..].iter().chain(&base[..start]).copied().collect();
                let better = match &best {
                    None => true,
                    Some(b) => letter_lex(&rot, b) == Ordering::Less,
                };
                if better {
                    best = Some(rot);
                }
            }
        }
        Word::from_letters(best.unwrap())
    }

    /// All cyclic rotations of `self`, which must be cyclically reduced.
    pub fn rotations(&self) -> Vec<Word> {
        debug_assert!(self.is_cyclically_reduced());
        let letters: Vec<Letter> = self.letters().collect();
        if letters.is_empty() {
            return vec![Word::identity()];
        }
        (0..letters.len())
            .map(|s| Word::from_letters(letters[s..].iter().chain(&letters[..s]).copied()))
            .collect()
    }

    /// Renders the word in the text syntax, e.g. `a^2*b^-1`.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay { word: self, alphabet }
    }

    /// Rewrites each generator through `images`, one word per generator of
    /// the source alphabet, and freely reduces the result.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for &(g, e) in &self.syllables {
            out = out.concat(&images[g.0].pow(e));
        }
        out
    }
}

fn letter_lex(a: &[Letter], b: &[Letter]) -> Ordering {
    // Equal length by construction, lexicographic on letter keys.
    for (x, y) in a.iter().zip(b) {
        match x.key().cmp(&y.key()) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    Ordering::Equal
}

fn push_syllable(out: &mut Vec<(GeneratorId, i64)>, g: GeneratorId, e: i64) {
    if e == 0 {
        return;
    }
    match out.last_mut() {
        Some((h, f)) if *h == g => {
            *f += e;
            if *f == 0 {
                out.pop();
            }
        }
        _ => out.push((g, e)),
    }
}

/// `[x, y] = x y x^-1 y^-1`.
pub fn commutator(x: &Word, y: &Word) -> Word {
    x.concat(y).concat(&x.inverse()).concat(&y.inverse())
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (i, &(g, e)) in self.word.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", self.alphabet.name(g))?;
            if e != 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}
