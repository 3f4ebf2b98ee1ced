//! Periodicity detection for orbits.
//!
//! All offsets here are scan offsets (from the left end in prefix mode,
//! from the right end in suffix mode). Over steps `m..n`, let `s` be the
//! smallest rewrite offset and `λ` the smallest number of letters beyond
//! the end of what any step read. Then `W_m = X·C·Y` with `|X| = s`,
//! `|Y| = λ`: `X` is never rewritten and `Y` never even read, so the steps
//! depend only on the scan state after `X` and on `C`.
//!
//! If `W_n = X·D·C·E·Y` and the scan state after `X·D` equals the state
//! after `X`, step `n` replays step `m` displaced by `|D|`, and so on for
//! the whole period, ending in `X·D·D·C·E·E·Y`. Because the scan state
//! after a letter depends only on the previous state and that letter,
//! reading `D` again returns to the same state, so the orbit repeats
//! forever. With `E` empty this is the plain case where `W_m` and `W_n`
//! share the tail from `s` and `s + Δ`.

use std::collections::{HashMap, HashSet};
use std::ops::Range;

use thiserror::Error;

use super::{step_at, Step, StepOutcome};
use crate::acyclic::{AcyclicPresentation, Mode};
use crate::presentation::{RelationId, RelationSide};
use crate::represent::{scan_state_at, state_from_representation, GuideLetter, ScanKey, ScanState, ScanTerminated};
use crate::word::{Letter, Word};

/// Evidence that an orbit repeats forever.
///
/// `m < n` are term indices. `boundary` is `s`, `shift` is
/// `Δ = |W_n| − |W_m|` and `lead` is `|D|`, the displacement of every
/// replayed step. `tail` is `W_m` from `s` (`C·Y`), of which the last
/// `frozen` letters (`Y`) are never read; `trail` is `E`. Words are written
/// left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodCertificate {
    pub m: usize,
    pub n: usize,
    pub boundary: usize,
    pub shift: usize,
    pub lead: usize,
    pub tail: Word,
    pub frozen: usize,
    pub trail: Word,
    pub state_m: ScanState,
    pub state_n: ScanState,
}

impl PeriodCertificate {
    pub fn period(&self) -> usize {
        self.n - self.m
    }

    /// True when `W_n` ends with the whole tail of `W_m`, displaced by `Δ`.
    pub fn is_plain(&self) -> bool {
        self.trail.is_empty()
    }

    /// The part `C` of the tail that the period works on.
    pub fn core(&self, mode: Mode) -> &[Letter] {
        let t = &self.tail[..];
        let c = t.len() - self.frozen;
        match mode {
            Mode::Prefix => &t[..c],
            Mode::Suffix => &t[self.frozen..],
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("history has {have} steps, certificate needs {need}")]
    HistoryLength { have: usize, need: usize },
    #[error("indices m = {m}, n = {n} are not ordered")]
    Indices { m: usize, n: usize },
    #[error("lengths do not match shift {shift} and lead {lead}")]
    Shift { shift: usize, lead: usize },
    #[error("step {0} rewrites below the boundary")]
    BelowBoundary(usize),
    #[error("step {0} reads into the frozen end")]
    ReadsFrozen(usize),
    #[error("tails differ")]
    Tail,
    #[error("scan states differ")]
    State,
    #[error(transparent)]
    Scan(#[from] ScanTerminated),
    #[error("replay of step {step} diverged")]
    Replay { step: usize },
}

/// Left-to-right index range of the scan range `a..b` in a word of `len`.
fn span(mode: Mode, len: usize, a: usize, b: usize) -> Range<usize> {
    match mode {
        Mode::Prefix => a..b,
        Mode::Suffix => len - b..len - a,
    }
}

fn slice(mode: Mode, w: &[Letter], a: usize, b: usize) -> &[Letter] {
    &w[span(mode, w.len(), a, b)]
}

type StepKey = (RelationId, RelationSide);

/// Letters beyond the end of what the step's scan read.
fn unread(s: &Step) -> usize {
    s.word_before.len() - s.representation.scanned_len()
}

/// Running minima over suffixes of a sequence, as a monotone stack of
/// `(index, value)`.
#[derive(Debug, Clone, Default)]
struct SuffixMin(Vec<(usize, usize)>);

impl SuffixMin {
    fn push(&mut self, idx: usize, v: usize) {
        while self.0.last().is_some_and(|&(_, w)| w >= v) {
            self.0.pop();
        }
        self.0.push((idx, v));
    }

    /// Minimum over entries at index `from` or later.
    fn from(&self, from: usize) -> Option<usize> {
        let at = self.0.partition_point(|&(i, _)| i < from);
        self.0.get(at).map(|&(_, v)| v)
    }
}

/// Incremental detector. Candidates for `m` are earlier steps applying the
/// same relation side as the newest step.
#[derive(Debug, Clone)]
pub struct PeriodDetector {
    index: HashMap<StepKey, Vec<usize>>,
    positions: SuffixMin,
    gaps: SuffixMin,
    rejected: HashSet<(usize, usize)>,
    max_candidates: usize,
}

impl Default for PeriodDetector {
    fn default() -> Self {
        Self::new()
    }
}

impl PeriodDetector {
    pub fn new() -> Self {
        PeriodDetector {
            index: HashMap::new(),
            positions: SuffixMin::default(),
            gaps: SuffixMin::default(),
            rejected: HashSet::new(),
            max_candidates: 1024,
        }
    }

    /// Marks a certificate as invalid so it is not reported again.
    pub fn reject(&mut self, m: usize, n: usize) {
        self.rejected.insert((m, n));
    }

    /// Looks for a certificate ending at the newest step of `history`. Each
    /// step must be passed exactly once, in order.
    pub fn observe(&mut self, history: &[Step]) -> Option<PeriodCertificate> {
        let new_idx = history.len().checked_sub(1)?;
        let new = &history[new_idx];
        let key = (new.relation, new.from_side);
        let found = self.search(history, key);

        self.index.entry(key).or_default().push(new_idx);
        self.positions.push(new_idx, new.scan_position());
        self.gaps.push(new_idx, unread(new));
        found
    }

    fn search(&self, history: &[Step], key: StepKey) -> Option<PeriodCertificate> {
        let new_idx = history.len() - 1;
        let new = &history[new_idx];
        let mode = new.representation.mode;
        let (w_n, p_n) = (&new.word_before, new.scan_position());
        for &m_idx in self.index.get(&key)?.iter().rev().take(self.max_candidates) {
            let (m, n) = (m_idx + 1, new_idx + 1);
            let old = &history[m_idx];
            let w_m = &old.word_before;
            let (Some(lead), Some(shift)) = (p_n.checked_sub(old.scan_position()), w_n.len().checked_sub(w_m.len()))
            else {
                continue;
            };
            if lead > shift || self.rejected.contains(&(m, n)) {
                continue;
            }
            let s = self.positions.from(m_idx).expect("candidate is indexed");
            let frozen = self.gaps.from(m_idx).expect("candidate is indexed");
            let key_m = old.representation.scan_key_at(s);
            if key_m.is_none()
                || key_m == Some(ScanKey::HeadComplete)
                || key_m != new.representation.scan_key_at(s + lead)
            {
                continue;
            }
            let c = w_m.len() - s - frozen;
            if slice(mode, w_m, s, s + c) != slice(mode, w_n, s + lead, s + lead + c) {
                continue;
            }
            let state_m = state_from_representation(&old.representation, s).ok()?;
            let state_n = state_from_representation(&new.representation, s + lead).ok()?;
            return Some(PeriodCertificate {
                m,
                n,
                boundary: s,
                shift,
                lead,
                tail: Word::from_slice(slice(mode, w_m, s, w_m.len())),
                frozen,
                trail: Word::from_slice(slice(mode, w_n, s + lead + c, w_n.len() - frozen)),
                state_m,
                state_n,
            });
        }
        None
    }
}

/// Runs a fresh detector over `history` and returns the first certificate.
pub fn detect_period(history: &[Step]) -> Option<PeriodCertificate> {
    let mut d = PeriodDetector::new();
    (1..=history.len()).find_map(|len| d.observe(&history[..len]))
}

/// Re-checks a certificate from scratch and replays one full period.
/// `history` holds steps `1..n`, so its last word is term `n`.
pub fn verify_certificate(
    ap: &AcyclicPresentation,
    g: GuideLetter,
    history: &[Step],
    cert: &PeriodCertificate,
) -> Result<(), CertificateError> {
    let (m, n) = (cert.m, cert.n);
    if m == 0 || m >= n {
        return Err(CertificateError::Indices { m, n });
    }
    if history.len() != n - 1 {
        return Err(CertificateError::HistoryLength {
            have: history.len(),
            need: n - 1,
        });
    }
    let mode = g.mode;
    let w_m = mode.orient(&history[m - 1].word_before);
    let w_n = mode.orient(&history[n - 2].word_after);
    let tail = mode.orient(&cert.tail);
    let (s, lead) = (cert.boundary, cert.lead);
    let shape_ok = cert.frozen <= tail.len()
        && s + tail.len() == w_m.len()
        && w_n.len() == w_m.len() + cert.shift
        && lead + cert.trail.len() == cert.shift;
    if !shape_ok {
        return Err(CertificateError::Shift {
            shift: cert.shift,
            lead,
        });
    }
    for st in &history[m - 1..n - 1] {
        if st.scan_position() < s {
            return Err(CertificateError::BelowBoundary(st.index));
        }
        if unread(st) < cert.frozen {
            return Err(CertificateError::ReadsFrozen(st.index));
        }
    }

    // W_m = X·C·Y and W_n = X·D·C·E·Y, in scan order.
    let c = tail.len() - cert.frozen;
    let (x, core, y) = (&w_m[..s], &tail[..c], &tail[c..]);
    let d = &w_n[s..s + lead];
    let e = mode.orient(&cert.trail);
    let expect_n: Word = [x, d, core, &e[..], y].concat().into();
    if w_m[s..] != tail[..] || w_n != expect_n {
        return Err(CertificateError::Tail);
    }
    let key_m = scan_state_at(ap, &history[m - 1].word_before, g, s)?.key();
    let key_n = scan_state_at(ap, &history[n - 2].word_after, g, s + lead)?.key();
    if key_m != key_n || key_m == ScanKey::HeadComplete {
        return Err(CertificateError::State);
    }

    let mut word = history[n - 2].word_after.clone();
    for (j, original) in history[m - 1..n - 1].iter().enumerate() {
        let index = n + j;
        let StepOutcome::Step(replayed) = step_at(ap, &word, g, index) else {
            return Err(CertificateError::Replay { step: index });
        };
        if (replayed.relation, replayed.from_side) != (original.relation, original.from_side)
            || replayed.scan_position() != original.scan_position() + lead
        {
            return Err(CertificateError::Replay { step: index });
        }
        word = replayed.word_after;
    }
    let expect_next: Word = [x, d, d, core, &e[..], &e[..], y].concat().into();
    if mode.orient(&word) != expect_next {
        return Err(CertificateError::Replay { step: 2 * n - m - 1 });
    }
    Ok(())
}
