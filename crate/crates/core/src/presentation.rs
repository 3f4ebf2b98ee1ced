//! Semigroup presentations and their text format.
//!
//! ```text
//! # comment
//! generators: a b c
//! relation: a b = b c
//! ```
//!
//! The first non-comment line declares the generators; every following
//! non-blank line is a `relation:` line. Tokens are whitespace separated and
//! may be longer than one character.

use std::fmt;

use thiserror::Error;

use crate::word::{Alphabet, Letter, Word};

/// Stable index of a defining relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationId(pub usize);

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.0)
    }
}

/// Which side of a relation `P = Q` a defining word is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationSide {
    Lhs,
    Rhs,
}

impl RelationSide {
    pub fn other(self) -> Self {
        match self {
            RelationSide::Lhs => RelationSide::Rhs,
            RelationSide::Rhs => RelationSide::Lhs,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RelationSide::Lhs => "lhs",
            RelationSide::Rhs => "rhs",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub id: RelationId,
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    pub fn side(&self, side: RelationSide) -> &Word {
        match side {
            RelationSide::Lhs => &self.lhs,
            RelationSide::Rhs => &self.rhs,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: undeclared letter `{token}`")]
    UndeclaredLetter { line: usize, column: usize, token: String },
    #[error("line {line}: generator `{token}` declared twice")]
    DuplicateGenerator { line: usize, token: String },
    #[error("line {line}: empty relation side")]
    EmptySide { line: usize },
    #[error("line {line}: relation has identical sides")]
    DegenerateRelation { line: usize },
    #[error("line {line}: duplicate of the relation on line {previous}")]
    DuplicateRelation { line: usize, previous: usize },
    #[error("missing `generators:` line")]
    MissingGenerators,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("undeclared letter `{0}`")]
    Undeclared(String),
    #[error("letter index {0} is outside the alphabet")]
    OutOfRange(u32),
    #[error("word must be nonempty")]
    Empty,
}

/// Generators plus defining relations `P_i = Q_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relations: Vec<Relation>,
}

impl Presentation {
    /// Builds a presentation from already-interned words, applying the same
    /// checks as the text parser. Line numbers in errors count relations
    /// from 1.
    pub fn new(alphabet: Alphabet, sides: Vec<(Word, Word)>) -> Result<Self, ParseError> {
        let mut relations: Vec<Relation> = Vec::with_capacity(sides.len());
        for (i, (lhs, rhs)) in sides.into_iter().enumerate() {
            let line = i + 1;
            if lhs.is_empty() || rhs.is_empty() {
                return Err(ParseError::EmptySide { line });
            }
            for &l in lhs.iter().chain(rhs.iter()) {
                if !alphabet.contains(l) {
                    return Err(ParseError::UndeclaredLetter {
                        line,
                        column: 0,
                        token: format!("#{}", l.0),
                    });
                }
            }
            check_new_relation(&relations, &lhs, &rhs, line, |r| r.id.0 + 1)?;
            relations.push(Relation {
                id: RelationId(i),
                lhs,
                rhs,
            });
        }
        Ok(Presentation { alphabet, relations })
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut alphabet: Option<Alphabet> = None;
        let mut relations: Vec<Relation> = Vec::new();
        let mut relation_lines: Vec<usize> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(cut) => &raw[..cut],
                None => raw,
            };
            if content.trim().is_empty() {
                continue;
            }
            let Some(colon) = content.find(':') else {
                return Err(syntax(line, first_col(content), "expected `keyword:`"));
            };
            let keyword = content[..colon].trim();
            let body_offset = colon + 1;
            let body = &content[body_offset..];

            match (keyword, alphabet.as_mut()) {
                ("generators", None) => {
                    let mut a = Alphabet::new();
                    let toks = tokens(body, body_offset);
                    if toks.is_empty() {
                        return Err(syntax(line, body_offset + 1, "no generators declared"));
                    }
                    for (col, tok) in toks {
                        if tok.contains('=') {
                            return Err(syntax(line, col, "`=` is not allowed in a generator"));
                        }
                        if a.insert(tok).is_none() {
                            return Err(ParseError::DuplicateGenerator {
                                line,
                                token: tok.to_owned(),
                            });
                        }
                    }
                    alphabet = Some(a);
                }
                ("generators", Some(_)) => {
                    return Err(syntax(line, first_col(content), "generators declared twice"));
                }
                ("relation", None) => return Err(ParseError::MissingGenerators),
                ("relation", Some(a)) => {
                    let Some(eq) = body.find('=') else {
                        return Err(syntax(line, body_offset + 1, "expected `=`"));
                    };
                    if body[eq + 1..].contains('=') {
                        let col = body_offset + eq + 1 + body[eq + 1..].find('=').unwrap() + 1;
                        return Err(syntax(line, col, "more than one `=`"));
                    }
                    let lhs = intern(a, &body[..eq], body_offset, line)?;
                    let rhs = intern(a, &body[eq + 1..], body_offset + eq + 1, line)?;
                    if lhs.is_empty() || rhs.is_empty() {
                        return Err(ParseError::EmptySide { line });
                    }
                    check_new_relation(&relations, &lhs, &rhs, line, |r| relation_lines[r.id.0])?;
                    relations.push(Relation {
                        id: RelationId(relations.len()),
                        lhs,
                        rhs,
                    });
                    relation_lines.push(line);
                }
                (other, _) => return Err(syntax(line, first_col(content), &format!("unknown keyword `{other}`"))),
            }
        }

        let alphabet = alphabet.ok_or(ParseError::MissingGenerators)?;
        Ok(Presentation { alphabet, relations })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, id: RelationId) -> &Relation {
        &self.relations[id.0]
    }

    pub fn defining_word(&self, id: RelationId, side: RelationSide) -> &Word {
        self.relations[id.0].side(side)
    }

    /// The same presentation with every relation side read backwards.
    pub fn reversed(&self) -> Presentation {
        Presentation {
            alphabet: self.alphabet.clone(),
            relations: self
                .relations
                .iter()
                .map(|r| Relation {
                    id: r.id,
                    lhs: r.lhs.reversed(),
                    rhs: r.rhs.reversed(),
                })
                .collect(),
        }
    }

    pub fn render(&self, word: &[Letter]) -> String {
        self.alphabet.render(word)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        self.alphabet.parse_word(text).map_err(WordError::Undeclared)
    }

    pub fn parse_word_lenient(&self, text: &str) -> Result<Word, WordError> {
        self.alphabet.parse_word_lenient(text).map_err(WordError::Undeclared)
    }

    /// Checks that a programmatically built word is nonempty and only uses
    /// declared letters.
    pub fn check_word(&self, word: &[Letter]) -> Result<(), WordError> {
        if word.is_empty() {
            return Err(WordError::Empty);
        }
        match word.iter().find(|l| !self.alphabet.contains(**l)) {
            Some(l) => Err(WordError::OutOfRange(l.0)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators: {}", self.alphabet.tokens().join(" "))?;
        for r in &self.relations {
            writeln!(f, "relation: {} = {}", self.render(&r.lhs), self.render(&r.rhs))?;
        }
        Ok(())
    }
}

fn check_new_relation(
    existing: &[Relation],
    lhs: &Word,
    rhs: &Word,
    line: usize,
    line_of: impl Fn(&Relation) -> usize,
) -> Result<(), ParseError> {
    if lhs == rhs {
        return Err(ParseError::DegenerateRelation { line });
    }
    if let Some(prev) = existing
        .iter()
        .find(|r| (&r.lhs == lhs && &r.rhs == rhs) || (&r.lhs == rhs && &r.rhs == lhs))
    {
        return Err(ParseError::DuplicateRelation {
            line,
            previous: line_of(prev),
        });
    }
    Ok(())
}

fn syntax(line: usize, column: usize, message: &str) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.to_owned(),
    }
}

fn first_col(s: &str) -> usize {
    s.len() - s.trim_start().len() + 1
}

/// Whitespace-separated tokens with their 1-based byte columns.
fn tokens(s: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(st)) => {
                out.push((offset + st + 1, &s[st..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((offset + st + 1, &s[st..]));
    }
    out
}

fn intern(a: &Alphabet, s: &str, offset: usize, line: usize) -> Result<Word, ParseError> {
    tokens(s, offset)
        .into_iter()
        .map(|(column, tok)| {
            a.get(tok).ok_or_else(|| ParseError::UndeclaredLetter {
                line,
                column,
                token: tok.to_owned(),
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Word)
}
