use super::OrbitTrace;
use crate::word::Word;

/// Split of term `term` into edges untouched by every later step and the
/// kernel between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanAnnotation {
    pub term: usize,
    pub frozen_left: Word,
    pub kernel: Word,
    pub frozen_right: Word,
}

/// Letters left of a rewrite keep their index and letters right of it keep
/// their distance to the end, so the untouched left edge of a term is the
/// smallest later rewrite index and the right edge the smallest later tail.
pub fn compute_spans(t: &OrbitTrace) -> Vec<SpanAnnotation> {
    let mut out = Vec::with_capacity(t.steps.len() + 1);
    let last = t.final_word();
    out.push(SpanAnnotation {
        term: t.steps.len() + 1,
        frozen_left: last.clone(),
        kernel: Word::empty(),
        frozen_right: Word::empty(),
    });
    let (mut left, mut right) = (usize::MAX, usize::MAX);
    for s in t.steps.iter().rev() {
        left = left.min(s.position);
        right = right.min(s.tail_len());
        let w = &s.word_before;
        out.push(SpanAnnotation {
            term: s.index,
            frozen_left: Word::from_slice(&w[..left]),
            kernel: Word::from_slice(&w[left..w.len() - right]),
            frozen_right: Word::from_slice(&w[w.len() - right..]),
        });
    }
    out.reverse();
    out
}
