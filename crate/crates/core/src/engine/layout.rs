use crate::acyclic::AcyclicPresentation;
use crate::represent::{represent, GuideLetter, Representation};
use crate::word::{Letter, Word};

/// Relative placement of the prefix head `A` and the suffix head `B` of a
/// word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeadLayout {
    /// One of the two representations has no head.
    Vacuous,
    /// `A` and `B` are the same occurrence.
    SharedHead,
    /// `… A X B …` with `A` strictly left of `B`.
    Separated {
        gap: Word,
    },
    Violation(LayoutViolation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayoutViolation {
    /// `B` starts strictly inside prefix block `block` (0-based).
    CutsPrefix { block: usize },
    /// The two occurrences overlap without coinciding.
    Overlapping,
    /// `B` lies entirely left of `A`.
    Reversed,
}

fn head_span(r: &Representation) -> Option<(usize, usize)> {
    let start = r.head_index()?;
    Some((start, start + r.head.as_ref()?.word.len()))
}

/// Diagnostic comparing the prefix head and suffix head of `u`.
pub fn check_head_layout(
    ap: &AcyclicPresentation,
    u: &[Letter],
    prefix_guide: Letter,
    suffix_guide: Letter,
) -> HeadLayout {
    let pre = represent(ap, u, GuideLetter::prefix(prefix_guide));
    let suf = represent(ap, u, GuideLetter::suffix(suffix_guide));
    let (Some(a), Some(b)) = (head_span(&pre), head_span(&suf)) else {
        return HeadLayout::Vacuous;
    };
    if a == b {
        return HeadLayout::SharedHead;
    }
    let mut start = 0;
    for (i, block) in pre.prefixes.iter().enumerate() {
        let end = start + block.word.len();
        if start < b.0 && b.0 < end {
            return HeadLayout::Violation(LayoutViolation::CutsPrefix { block: i });
        }
        start = end;
    }
    if a.1 <= b.0 {
        HeadLayout::Separated {
            gap: Word::from_slice(&u[a.1..b.0]),
        }
    } else if b.1 <= a.0 {
        HeadLayout::Violation(LayoutViolation::Reversed)
    } else {
        HeadLayout::Violation(LayoutViolation::Overlapping)
    }
}
