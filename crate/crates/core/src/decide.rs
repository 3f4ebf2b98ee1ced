//! Equality and divisibility decisions.
//!
//! The target word `V` is consumed one letter at a time from the scan
//! origin. For each letter, the current form of `U` is transformed with that
//! letter as guide until it starts with it, and then the letter is stripped
//! from both. The answer is `No` as soon as an orbit gets stuck or is proven
//! periodic, and `Unknown` if the step budget runs out first.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::acyclic::{AcyclicPresentation, Mode};
use crate::engine::{
    replay_step, run_orbit, step_at, verify_certificate, Budget, Limits, OrbitTrace, PeriodCertificate, StepOutcome,
    Terminal,
};
use crate::presentation::WordError;
use crate::represent::{GuideLetter, Status};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        }
    }

    pub fn is_definitive(self) -> bool {
        self != Answer::Unknown
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueryKind {
    Equal,
    /// `U = V·W` for some `W`.
    DividesLeft,
    /// `U = W·V` for some `W`.
    DividesRight,
}

impl QueryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            QueryKind::Equal => "equal",
            QueryKind::DividesLeft => "divides-left",
            QueryKind::DividesRight => "divides-right",
        }
    }

    pub fn default_mode(self) -> Mode {
        match self {
            QueryKind::Equal | QueryKind::DividesLeft => Mode::Prefix,
            QueryKind::DividesRight => Mode::Suffix,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideLimits {
    /// Steps allowed in a single orbit.
    pub max_steps: usize,
    /// Steps allowed across all orbits of one query.
    pub total_steps: usize,
    pub max_word_length: usize,
}

impl Default for DecideLimits {
    fn default() -> Self {
        DecideLimits {
            max_steps: 10_000,
            total_steps: 100_000,
            max_word_length: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub kind: QueryKind,
    pub u: Word,
    pub v: Word,
    pub limits: DecideLimits,
}

impl Query {
    pub fn new(kind: QueryKind, u: Word, v: Word) -> Self {
        Query {
            kind,
            u,
            v,
            limits: DecideLimits::default(),
        }
    }
}

/// One orbit run towards a single letter of the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub orbit: OrbitTrace,
}

impl Segment {
    pub fn guide(&self) -> GuideLetter {
        self.orbit.guide
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    /// Every target letter was matched and stripped.
    Reduced,
    /// The form ran out while target letters remained.
    FormEmpty,
    /// The target ran out but the form did not.
    TrailingForm,
    Stuck(Status),
    Periodic(Box<PeriodCertificate>),
    Budget(Budget),
}

impl Reason {
    pub fn as_str(&self) -> &'static str {
        match self {
            Reason::Reduced => "reduced",
            Reason::FormEmpty => "form-empty",
            Reason::TrailingForm => "trailing-form",
            Reason::Stuck(_) => "stuck",
            Reason::Periodic(_) => "periodic",
            Reason::Budget(_) => "budget-exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kind: QueryKind,
    pub mode: Mode,
    pub answer: Answer,
    pub reason: Reason,
    pub segments: Vec<Segment>,
    /// Cofactor `W` for a positive divisibility answer.
    pub residual: Option<Word>,
    pub steps_used: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error("word U: {0}")]
    U(WordError),
    #[error("word V: {0}")]
    V(WordError),
    #[error("limits must be positive")]
    Limits,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("segment {segment}: does not start from the current form")]
    SegmentStart { segment: usize },
    #[error("segment {segment}: guide is not the next target letter")]
    Guide { segment: usize },
    #[error("segment {segment}, step {step}: {message}")]
    Step {
        segment: usize,
        step: usize,
        message: &'static str,
    },
    #[error("segment {segment}: terminal does not match the final form")]
    Terminal { segment: usize },
    #[error("segment {segment}: {0}", .source)]
    Certificate {
        segment: usize,
        source: crate::engine::CertificateError,
    },
    #[error("verdict does not follow from the replayed forms")]
    Conclusion,
}

/// Decides `q` in the mode implied by its kind.
pub fn decide(ap: &AcyclicPresentation, q: &Query) -> Result<Verdict, DecideError> {
    decide_in_mode(ap, q, q.kind.default_mode())
}

/// Decides `q`, consuming the target from the scan origin of `mode`.
pub fn decide_in_mode(ap: &AcyclicPresentation, q: &Query, mode: Mode) -> Result<Verdict, DecideError> {
    ap.check_word(&q.u).map_err(DecideError::U)?;
    ap.check_word(&q.v).map_err(DecideError::V)?;
    let l = q.limits;
    if l.max_steps == 0 || l.total_steps == 0 || l.max_word_length == 0 {
        return Err(DecideError::Limits);
    }

    let mut form = q.u.clone();
    let mut target = q.v.clone();
    let mut segments = Vec::new();
    let mut used = 0;
    let finish = |answer, reason, segments, residual, used| Verdict {
        kind: q.kind,
        mode,
        answer,
        reason,
        segments,
        residual,
        steps_used: used,
    };

    while let Some(letter) = mode.front(&target) {
        if form.is_empty() {
            return Ok(finish(Answer::No, Reason::FormEmpty, segments, None, used));
        }
        let limits = Limits {
            max_steps: l.max_steps.min(l.total_steps - used),
            max_word_length: l.max_word_length,
            detect_periods: true,
        };
        let orbit = run_orbit(ap, &form, GuideLetter { letter, mode }, limits);
        used += orbit.steps.len();
        let terminal = orbit.terminal.clone();
        let last = orbit.final_word().clone();
        segments.push(Segment { orbit });
        match terminal {
            Terminal::MatchesGuide => {
                form = mode.drop_front(&last, 1);
                target = mode.drop_front(&target, 1);
            }
            Terminal::Stuck(status) => return Ok(finish(Answer::No, Reason::Stuck(status), segments, None, used)),
            Terminal::Periodic(cert) => return Ok(finish(Answer::No, Reason::Periodic(cert), segments, None, used)),
            Terminal::BudgetExhausted(b) => {
                return Ok(finish(Answer::Unknown, Reason::Budget(b), segments, None, used))
            }
        }
    }

    Ok(match q.kind {
        QueryKind::Equal if form.is_empty() => finish(Answer::Yes, Reason::Reduced, segments, None, used),
        QueryKind::Equal => finish(Answer::No, Reason::TrailingForm, segments, None, used),
        QueryKind::DividesLeft | QueryKind::DividesRight => {
            finish(Answer::Yes, Reason::Reduced, segments, Some(form), used)
        }
    })
}

/// Equality decided from both ends.
pub fn decide_dual(ap: &AcyclicPresentation, q: &Query) -> Result<(Verdict, Verdict), DecideError> {
    let q = Query {
        kind: QueryKind::Equal,
        ..q.clone()
    };
    Ok((
        decide_in_mode(ap, &q, Mode::Prefix)?,
        decide_in_mode(ap, &q, Mode::Suffix)?,
    ))
}

impl Verdict {
    /// Replays the witness from the query words: every step is recomputed
    /// and checked as a literal relation application, stripped letters are
    /// checked against the target, and period certificates are re-verified.
    pub fn replay(&self, ap: &AcyclicPresentation, q: &Query) -> Result<(), ReplayError> {
        let mode = self.mode;
        let mut form = q.u.clone();
        let mut target = q.v.clone();
        let n = self.segments.len();
        for (i, seg) in self.segments.iter().enumerate() {
            let o = &seg.orbit;
            if o.initial != form {
                return Err(ReplayError::SegmentStart { segment: i });
            }
            if mode.front(&target) != Some(o.guide.letter) || o.guide.mode != mode {
                return Err(ReplayError::Guide { segment: i });
            }
            let mut word: &Word = &o.initial;
            for (k, s) in o.steps.iter().enumerate() {
                let err = |message| ReplayError::Step {
                    segment: i,
                    step: k + 1,
                    message,
                };
                if &s.word_before != word || s.index != k + 1 {
                    return Err(err("does not continue the previous term"));
                }
                if !replay_step(ap, s) {
                    return Err(err("is not a relation application"));
                }
                match step_at(ap, word, o.guide, k + 1) {
                    StepOutcome::Step(again) if *again == *s => {}
                    _ => return Err(err("differs from the recomputed step")),
                }
                word = &s.word_after;
            }
            let last = i + 1 == n;
            match &o.terminal {
                Terminal::MatchesGuide => {
                    if mode.front(word) != Some(o.guide.letter) {
                        return Err(ReplayError::Terminal { segment: i });
                    }
                    form = mode.drop_front(word, 1);
                    target = mode.drop_front(&target, 1);
                }
                Terminal::Stuck(status) => {
                    if !last || step_at(ap, word, o.guide, 0) != StepOutcome::Terminal(*status) {
                        return Err(ReplayError::Terminal { segment: i });
                    }
                }
                Terminal::Periodic(cert) => {
                    if !last {
                        return Err(ReplayError::Terminal { segment: i });
                    }
                    verify_certificate(ap, o.guide, &o.steps, cert)
                        .map_err(|source| ReplayError::Certificate { segment: i, source })?;
                }
                Terminal::BudgetExhausted(_) => {
                    if !last {
                        return Err(ReplayError::Terminal { segment: i });
                    }
                }
            }
        }

        let consistent = match (&self.reason, self.answer) {
            (Reason::Reduced, Answer::Yes) => {
                target.is_empty()
                    && match q.kind {
                        QueryKind::Equal => form.is_empty() && self.residual.is_none(),
                        _ => self.residual.as_ref() == Some(&form),
                    }
            }
            (Reason::FormEmpty, Answer::No) => form.is_empty() && !target.is_empty(),
            (Reason::TrailingForm, Answer::No) => q.kind == QueryKind::Equal && target.is_empty() && !form.is_empty(),
            (Reason::Stuck(_) | Reason::Periodic(_), Answer::No) => self
                .segments
                .last()
                .is_some_and(|s| s.orbit.terminal.as_str() == self.reason.as_str()),
            (Reason::Budget(_), Answer::Unknown) => true,
            _ => false,
        };
        if consistent {
            Ok(())
        } else {
            Err(ReplayError::Conclusion)
        }
    }
}

/// The first letter of `v` in `mode`, for callers that need the guide of
/// the first segment.
pub fn first_guide(v: &[Letter], mode: Mode) -> Option<GuideLetter> {
    mode.front(v).map(|letter| GuideLetter { letter, mode })
}
