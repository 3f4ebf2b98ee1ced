//! Letters, alphabets and words.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

/// A generator, stored as its index in the owning [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Ordered set of generator tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet {
    tokens: Vec<String>,
    lookup: HashMap<String, Letter>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a token, returning `None` if it was already declared.
    pub fn insert(&mut self, token: &str) -> Option<Letter> {
        if self.lookup.contains_key(token) {
            return None;
        }
        let letter = Letter(self.tokens.len() as u32);
        self.tokens.push(token.to_owned());
        self.lookup.insert(token.to_owned(), letter);
        Some(letter)
    }

    pub fn get(&self, token: &str) -> Option<Letter> {
        self.lookup.get(token).copied()
    }

    pub fn token(&self, letter: Letter) -> &str {
        &self.tokens[letter.index()]
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.index() < self.tokens.len()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn letters(&self) -> impl ExactSizeIterator<Item = Letter> + '_ {
        (0..self.tokens.len() as u32).map(Letter)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Renders a word as whitespace-separated tokens.
    pub fn render(&self, word: &[Letter]) -> String {
        let mut out = String::new();
        for (i, &l) in word.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(self.token(l));
        }
        out
    }

    /// Tokenizes whitespace-separated input. The error carries the first
    /// token that is not declared.
    pub fn parse_word(&self, text: &str) -> Result<Word, String> {
        text.split_whitespace()
            .map(|t| self.get(t).ok_or_else(|| t.to_owned()))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Like [`Alphabet::parse_word`], but a chunk that is not a declared
    /// token is split into characters when every character is one.
    pub fn parse_word_lenient(&self, text: &str) -> Result<Word, String> {
        let mut letters = Vec::new();
        for chunk in text.split_whitespace() {
            if let Some(l) = self.get(chunk) {
                letters.push(l);
                continue;
            }
            let mut buf = [0u8; 4];
            for c in chunk.chars() {
                match self.get(c.encode_utf8(&mut buf)) {
                    Some(l) => letters.push(l),
                    None => return Err(chunk.to_owned()),
                }
            }
        }
        Ok(Word(letters))
    }
}

/// A finite, possibly empty, sequence of letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_slice(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    /// Replaces `len` letters starting at `pos` by `with`.
    pub fn splice(&self, pos: usize, len: usize, with: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(self.len() - len + with.len());
        v.extend_from_slice(&self.0[..pos]);
        v.extend_from_slice(with);
        v.extend_from_slice(&self.0[pos + len..]);
        Word(v)
    }

    pub fn into_inner(self) -> Vec<Letter> {
        self.0
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

// Hashing and ordering agree with the slice, so maps keyed by `Word` can be
// queried with `&[Letter]`.
impl std::borrow::Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Length of the longest common beginning of two letter slices.
pub fn common_prefix_len(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Display adapter pairing a word with its alphabet.
pub struct Rendered<'a> {
    pub alphabet: &'a Alphabet,
    pub word: &'a [Letter],
}

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.render(self.word))
    }
}
