//! Deterministic transformation orbits.
//!
//! One step represents the current word relative to the guide and, if a
//! head was found, replaces that occurrence by the other side of its
//! relation. Iterating gives the orbit `U = U₁ → U₂ → …`, which ends when
//! the word starts with the guide, when no head exists, when the period
//! detector proves it infinite, or when a budget runs out.

mod detect;
mod layout;
mod spans;

pub use detect::{detect_period, verify_certificate, CertificateError, PeriodCertificate, PeriodDetector};
pub use layout::{check_head_layout, HeadLayout, LayoutViolation};
pub use spans::{compute_spans, SpanAnnotation};

use crate::acyclic::AcyclicPresentation;
use crate::presentation::{RelationId, RelationSide};
use crate::represent::{represent, GuideLetter, Representation, Status};
use crate::word::{Letter, Word};

/// One head replacement. Step `index` rewrites term `index` of the orbit
/// into term `index + 1`; term 1 is the initial word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub index: usize,
    pub word_before: Word,
    pub word_after: Word,
    pub relation: RelationId,
    pub from_side: RelationSide,
    pub to_side: RelationSide,
    /// Left-to-right index of the replaced occurrence in `word_before`.
    pub position: usize,
    pub shift: isize,
    pub representation: Representation,
}

impl Step {
    /// Offset of the replaced occurrence from the scan origin.
    pub fn scan_position(&self) -> usize {
        self.representation.head_offset()
    }

    /// Length of the replaced occurrence.
    pub fn from_len(&self) -> usize {
        self.representation.head.as_ref().map_or(0, |h| h.word.len())
    }

    /// Letters between the end of the replaced occurrence and the far end
    /// of the word.
    pub fn tail_len(&self) -> usize {
        self.word_before.len() - self.position - self.from_len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Step(Box<Step>),
    Terminal(Status),
}

/// Performs one transformation of `u`.
pub fn step(ap: &AcyclicPresentation, u: &[Letter], g: GuideLetter) -> StepOutcome {
    step_at(ap, u, g, 1)
}

pub(crate) fn step_at(ap: &AcyclicPresentation, u: &[Letter], g: GuideLetter, index: usize) -> StepOutcome {
    let representation = represent(ap, u, g);
    let Some(head) = &representation.head else {
        return StepOutcome::Terminal(representation.status);
    };
    let (relation, from_side) = (head.relation, head.side);
    let to_side = from_side.other();
    let from_len = head.word.len();
    let to = ap.defining_word(relation, to_side);
    let position = representation.head_index().expect("head present");
    let word_after = Word::from_slice(u).splice(position, from_len, to);
    StepOutcome::Step(Box::new(Step {
        index,
        word_before: Word::from_slice(u),
        word_after,
        relation,
        from_side,
        to_side,
        position,
        shift: to.len() as isize - from_len as isize,
        representation,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_steps: usize,
    pub max_word_length: usize,
    pub detect_periods: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_steps: 10_000,
            max_word_length: 4096,
            detect_periods: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Steps,
    WordLength,
}

impl Budget {
    pub fn as_str(self) -> &'static str {
        match self {
            Budget::Steps => "steps",
            Budget::WordLength => "word-length",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Terminal {
    MatchesGuide,
    Stuck(Status),
    Periodic(Box<PeriodCertificate>),
    BudgetExhausted(Budget),
}

impl Terminal {
    pub fn as_str(&self) -> &'static str {
        match self {
            Terminal::MatchesGuide => "matches-guide",
            Terminal::Stuck(_) => "stuck",
            Terminal::Periodic(_) => "periodic",
            Terminal::BudgetExhausted(_) => "budget-exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTrace {
    pub guide: GuideLetter,
    pub initial: Word,
    pub steps: Vec<Step>,
    pub terminal: Terminal,
}

impl OrbitTrace {
    /// The last term of the orbit.
    pub fn final_word(&self) -> &Word {
        self.steps.last().map_or(&self.initial, |s| &s.word_after)
    }

    /// All terms, starting with the initial word.
    pub fn terms(&self) -> impl Iterator<Item = &Word> {
        std::iter::once(&self.initial).chain(self.steps.iter().map(|s| &s.word_after))
    }
}

/// Iterates [`step`] until the orbit terminates or a limit is hit.
pub fn run_orbit(ap: &AcyclicPresentation, u: &[Letter], g: GuideLetter, limits: Limits) -> OrbitTrace {
    let mut steps: Vec<Step> = Vec::new();
    let mut detector = PeriodDetector::new();
    let terminal = loop {
        let word = steps.last().map_or(u, |s| &s.word_after[..]);
        // Terminal words are reported as such even when a budget is spent.
        let next = match step_at(ap, word, g, steps.len() + 1) {
            StepOutcome::Terminal(Status::MatchesGuide) => break Terminal::MatchesGuide,
            StepOutcome::Terminal(status) => break Terminal::Stuck(status),
            StepOutcome::Step(s) => *s,
        };
        if word.len() > limits.max_word_length {
            break Terminal::BudgetExhausted(Budget::WordLength);
        }
        if steps.len() >= limits.max_steps {
            break Terminal::BudgetExhausted(Budget::Steps);
        }
        steps.push(next);
        if !limits.detect_periods {
            continue;
        }
        if let Some(cert) = detector.observe(&steps) {
            // The newest step is the first repeat; the trace ends before it.
            let repeat = steps.pop().expect("just pushed");
            match verify_certificate(ap, g, &steps, &cert) {
                Ok(()) => {
                    log::debug!("orbit periodic: terms {}..{} shift {}", cert.m, cert.n, cert.shift);
                    break Terminal::Periodic(Box::new(cert));
                }
                Err(e) => {
                    log::warn!("discarding period certificate {}..{}: {e}", cert.m, cert.n);
                    detector.reject(cert.m, cert.n);
                    steps.push(repeat);
                }
            }
        }
    };
    OrbitTrace {
        guide: g,
        initial: Word::from_slice(u),
        steps,
        terminal,
    }
}

/// Checks that a step is a literal application of its relation.
pub fn replay_step(ap: &AcyclicPresentation, s: &Step) -> bool {
    let from = ap.defining_word(s.relation, s.from_side);
    let to = ap.defining_word(s.relation, s.to_side);
    s.to_side == s.from_side.other()
        && s.word_before.get(s.position..s.position + from.len()) == Some(&from[..])
        && s.word_before.splice(s.position, from.len(), to) == s.word_after
        && s.shift == to.len() as isize - from.len() as isize
}
