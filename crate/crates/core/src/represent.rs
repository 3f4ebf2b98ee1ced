//! Prefix and suffix representations of a word relative to a guide letter.
//!
//! In prefix mode the word `U` is decomposed greedily as
//! `U = α₁ … α_k U_k`. Each block is the longest common beginning of the
//! remaining word and the defining word chosen by the first edge of the
//! graph path from the current first letter to the current guide. A block
//! that is a complete defining word is the head and ends the scan;
//! otherwise the first unmatched letter of the defining word becomes the
//! guide for the rest of the word. Suffix mode is the mirror image, run on
//! the reversed word against reversed relation sides.

use crate::acyclic::{AcyclicPresentation, Mode};
use crate::presentation::{RelationId, RelationSide};
use crate::word::{common_prefix_len, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GuideLetter {
    pub letter: Letter,
    pub mode: Mode,
}

impl GuideLetter {
    pub fn prefix(letter: Letter) -> Self {
        GuideLetter {
            letter,
            mode: Mode::Prefix,
        }
    }

    pub fn suffix(letter: Letter) -> Self {
        GuideLetter {
            letter,
            mode: Mode::Suffix,
        }
    }
}

/// One block of a representation. `word` is in left-to-right order in both
/// modes; `guide` is the letter the block was matched towards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub word: Word,
    pub relation: RelationId,
    pub side: RelationSide,
    pub guide: Letter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    HeadFound,
    MatchesGuide,
    /// No graph path from the letter at the scan frontier to the guide.
    NoPath {
        from: Letter,
        to: Letter,
    },
    /// The word ended strictly inside a defining word.
    Exhausted,
    EmptyWord,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::HeadFound => "head-found",
            Status::MatchesGuide => "matches-guide",
            Status::NoPath { .. } => "no-path",
            Status::Exhausted => "exhausted",
            Status::EmptyWord => "empty-word",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub mode: Mode,
    pub guide: Letter,
    /// Blocks in scan order: `α₁, α₂, …` in prefix mode, `β₁, β₂, …` (from
    /// the right end inwards) in suffix mode. Excludes the head.
    pub prefixes: Vec<Block>,
    pub head: Option<Block>,
    pub residual: Word,
    pub status: Status,
}

impl Representation {
    /// Distance from the scan origin to the start of the head (or of the
    /// residual when there is no head).
    pub fn head_offset(&self) -> usize {
        self.prefixes.iter().map(|b| b.word.len()).sum()
    }

    /// Number of letters consumed by the scan.
    pub fn scanned_len(&self) -> usize {
        self.head_offset() + self.head.as_ref().map_or(0, |h| h.word.len())
    }

    /// Left-to-right index where the head occurrence starts.
    pub fn head_index(&self) -> Option<usize> {
        let head = self.head.as_ref()?;
        let total = self.scanned_len() + self.residual.len();
        Some(self.mode.to_index(self.head_offset(), head.word.len(), total))
    }

    /// Future-relevant scan state after consuming `pos` letters from the
    /// scan origin, or `None` if the scan stopped before `pos`.
    pub fn scan_key_at(&self, pos: usize) -> Option<ScanKey> {
        if pos == 0 {
            return Some(ScanKey::Start(self.guide));
        }
        let mut start = 0;
        for b in &self.prefixes {
            let end = start + b.word.len();
            if pos <= end {
                return Some(ScanKey::Matching {
                    relation: b.relation,
                    side: b.side,
                    offset: pos - start,
                });
            }
            start = end;
        }
        let head = self.head.as_ref()?;
        let end = start + head.word.len();
        if pos < end {
            Some(ScanKey::Matching {
                relation: head.relation,
                side: head.side,
                offset: pos - start,
            })
        } else if pos == end {
            Some(ScanKey::HeadComplete)
        } else {
            None
        }
    }
}

/// Scan state with the defining-word context that decides how the scan
/// continues from here, independent of how it got here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScanKey {
    /// Nothing consumed yet.
    Start(Letter),
    /// `offset` letters of the defining word have been matched by the
    /// current or most recent block.
    Matching {
        relation: RelationId,
        side: RelationSide,
        offset: usize,
    },
    HeadComplete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PendingMatch {
    pub relation: RelationId,
    pub side: RelationSide,
    /// Letters of the defining word matched by this block.
    pub offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanPhase {
    /// About to start a new block at `position`.
    Boundary,
    /// Strictly inside the block on top of the pending stack.
    Inside,
    /// The head ends exactly at `position`.
    HeadComplete,
}

/// Construction state of the greedy scan when it first reaches a position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanState {
    pub position: usize,
    pub depth: usize,
    pub pending: Vec<PendingMatch>,
    pub current_guide: Letter,
    pub phase: ScanPhase,
}

impl ScanState {
    pub fn key(&self) -> ScanKey {
        if self.phase == ScanPhase::HeadComplete {
            return ScanKey::HeadComplete;
        }
        match self.pending.last() {
            Some(m) => ScanKey::Matching {
                relation: m.relation,
                side: m.side,
                offset: m.offset,
            },
            None => ScanKey::Start(self.current_guide),
        }
    }
}

/// The scan ended before reaching the requested position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("scan terminated with {} after {scanned} letters", status.as_str())]
pub struct ScanTerminated {
    pub status: Status,
    pub scanned: usize,
}

/// Block found by the scanner, in scan coordinates.
#[derive(Debug, Clone, Copy)]
struct RawBlock {
    len: usize,
    relation: RelationId,
    side: RelationSide,
    guide: Letter,
}

struct RawScan {
    blocks: Vec<RawBlock>,
    head: Option<RawBlock>,
    status: Status,
}

fn scan(ap: &AcyclicPresentation, word: &[Letter], g: GuideLetter) -> RawScan {
    let o = ap.oriented(g.mode);
    let done = |blocks, head, status| RawScan { blocks, head, status };
    if word.is_empty() {
        return done(Vec::new(), None, Status::EmptyWord);
    }
    if word[0] == g.letter {
        return done(Vec::new(), None, Status::MatchesGuide);
    }

    let mut blocks: Vec<RawBlock> = Vec::new();
    let mut pos = 0;
    let mut guide = g.letter;
    loop {
        let x = word[pos];
        assert!(
            blocks.is_empty() || x != guide,
            "longest common beginning was not maximal"
        );
        let Some((relation, side)) = o.first_hop(x, guide) else {
            return done(blocks, None, Status::NoPath { from: x, to: guide });
        };
        let defining = o.side(relation, side);
        let common = common_prefix_len(&word[pos..], defining);
        let block = RawBlock {
            len: common,
            relation,
            side,
            guide,
        };
        if common == defining.len() {
            return done(blocks, Some(block), Status::HeadFound);
        }
        blocks.push(block);
        pos += common;
        if pos == word.len() {
            return done(blocks, None, Status::Exhausted);
        }
        guide = defining[common];
    }
}

/// Computes the representation of `u` relative to `g`.
pub fn represent(ap: &AcyclicPresentation, u: &[Letter], g: GuideLetter) -> Representation {
    let oriented = g.mode.orient(u);
    let raw = scan(ap, &oriented, g);

    let mut pos = 0;
    let mut cut = |b: &RawBlock| {
        let w = g.mode.orient(&oriented[pos..pos + b.len]);
        pos += b.len;
        Block {
            word: w,
            relation: b.relation,
            side: b.side,
            guide: b.guide,
        }
    };
    let prefixes: Vec<Block> = raw.blocks.iter().map(&mut cut).collect();
    let head = raw.head.as_ref().map(&mut cut);
    let residual = g.mode.orient(&oriented[pos..]);
    Representation {
        mode: g.mode,
        guide: g.letter,
        prefixes,
        head,
        residual,
        status: raw.status,
    }
}

/// Reassembles the word a representation was computed from.
pub fn reconstruct(r: &Representation) -> Word {
    let mut scanned: Vec<&Block> = r.prefixes.iter().collect();
    scanned.extend(r.head.as_ref());
    let mut out = Vec::with_capacity(r.scanned_len() + r.residual.len());
    match r.mode {
        Mode::Prefix => {
            for b in scanned {
                out.extend_from_slice(&b.word);
            }
            out.extend_from_slice(&r.residual);
        }
        Mode::Suffix => {
            out.extend_from_slice(&r.residual);
            for b in scanned.into_iter().rev() {
                out.extend_from_slice(&b.word);
            }
        }
    }
    Word(out)
}

/// The construction state when the scan of `u` first reaches `pos` letters
/// from its origin.
pub fn scan_state_at(
    ap: &AcyclicPresentation,
    u: &[Letter],
    g: GuideLetter,
    pos: usize,
) -> Result<ScanState, ScanTerminated> {
    let r = represent(ap, u, g);
    state_from_representation(&r, pos)
}

pub(crate) fn state_from_representation(r: &Representation, pos: usize) -> Result<ScanState, ScanTerminated> {
    if pos == 0 {
        return Ok(ScanState {
            position: 0,
            depth: 1,
            pending: Vec::new(),
            current_guide: r.guide,
            phase: ScanPhase::Boundary,
        });
    }
    let terminated = Err(ScanTerminated {
        status: r.status,
        scanned: r.scanned_len(),
    });
    let full = |blocks: &[Block]| -> Vec<PendingMatch> {
        blocks
            .iter()
            .map(|b| PendingMatch {
                relation: b.relation,
                side: b.side,
                offset: b.word.len(),
            })
            .collect()
    };

    let mut start = 0;
    for (t, b) in r.prefixes.iter().enumerate() {
        let end = start + b.word.len();
        if pos < end || (pos == end && r.status == Status::Exhausted && t + 1 == r.prefixes.len()) {
            let mut pending = full(&r.prefixes[..t]);
            pending.push(PendingMatch {
                relation: b.relation,
                side: b.side,
                offset: pos - start,
            });
            return Ok(ScanState {
                position: pos,
                depth: t + 1,
                pending,
                current_guide: b.guide,
                phase: ScanPhase::Inside,
            });
        }
        if pos == end {
            // A new block starts here: either the next prefix, the head, or
            // the point where no path was found.
            let next_guide = match (r.prefixes.get(t + 1), &r.head, r.status) {
                (Some(n), _, _) => n.guide,
                (None, Some(h), _) => h.guide,
                (None, None, Status::NoPath { to, .. }) => to,
                _ => return terminated,
            };
            return Ok(ScanState {
                position: pos,
                depth: t + 2,
                pending: full(&r.prefixes[..=t]),
                current_guide: next_guide,
                phase: ScanPhase::Boundary,
            });
        }
        start = end;
    }
    let Some(h) = &r.head else {
        return terminated;
    };
    let end = start + h.word.len();
    let depth = r.prefixes.len() + 1;
    let mut pending = full(&r.prefixes);
    if pos < end {
        pending.push(PendingMatch {
            relation: h.relation,
            side: h.side,
            offset: pos - start,
        });
        Ok(ScanState {
            position: pos,
            depth,
            pending,
            current_guide: h.guide,
            phase: ScanPhase::Inside,
        })
    } else if pos == end {
        Ok(ScanState {
            position: pos,
            depth,
            pending,
            current_guide: h.guide,
            phase: ScanPhase::HeadComplete,
        })
    } else {
        terminated
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;

    fn ap(text: &str) -> AcyclicPresentation {
        AcyclicPresentation::new(Presentation::parse(text).unwrap()).unwrap()
    }

    fn p1() -> AcyclicPresentation {
        ap("generators: a b c\nrelation: a b = b c")
    }

    fn p2() -> AcyclicPresentation {
        ap("generators: a b\nrelation: a b = b a a")
    }

    fn w(p: &AcyclicPresentation, s: &str) -> Word {
        p.parse_word(s).unwrap()
    }

    fn g(p: &AcyclicPresentation, s: &str) -> GuideLetter {
        GuideLetter::prefix(p.alphabet().get(s).unwrap())
    }

    fn words(p: &AcyclicPresentation, blocks: &[Block]) -> Vec<String> {
        blocks.iter().map(|b| p.render(&b.word)).collect()
    }

    #[test]
    fn head_at_depth_one() {
        let p = p1();
        let r = represent(&p, &w(&p, "a b b"), g(&p, "b"));
        assert_eq!(r.status, Status::HeadFound);
        assert!(r.prefixes.is_empty());
        let head = r.head.as_ref().unwrap();
        assert_eq!((head.relation, head.side), (RelationId(0), RelationSide::Lhs));
        assert_eq!(p.render(&head.word), "a b");
        assert_eq!(p.render(&r.residual), "b");
    }

    #[test]
    fn first_letter_is_guide() {
        let p = p1();
        let u = w(&p, "b a");
        let r = represent(&p, &u, g(&p, "b"));
        assert_eq!(r.status, Status::MatchesGuide);
        assert!(r.prefixes.is_empty());
        assert_eq!(r.residual, u);
    }

    #[test]
    fn letter_outside_graph() {
        let p = p1();
        let r = represent(&p, &w(&p, "c b"), g(&p, "b"));
        assert_eq!(
            r.status,
            Status::NoPath {
                from: p.alphabet().get("c").unwrap(),
                to: p.alphabet().get("b").unwrap()
            }
        );
    }

    #[test]
    fn word_ends_inside_defining_word() {
        let p = p1();
        let r = represent(&p, &w(&p, "a"), g(&p, "b"));
        assert_eq!(r.status, Status::Exhausted);
        assert_eq!(words(&p, &r.prefixes), ["a"]);
        assert!(r.residual.is_empty());
    }

    #[test]
    fn head_at_depth_two() {
        let p = p2();
        let r = represent(&p, &w(&p, "a a b"), g(&p, "b"));
        assert_eq!(r.status, Status::HeadFound);
        assert_eq!(words(&p, &r.prefixes), ["a"]);
        assert_eq!(r.prefixes[0].guide, p.alphabet().get("b").unwrap());
        let head = r.head.as_ref().unwrap();
        assert_eq!((head.relation, head.side), (RelationId(0), RelationSide::Lhs));
        assert!(r.residual.is_empty());
        assert_eq!(r.head_index(), Some(1));
    }

    #[test]
    fn empty_word_has_no_representation() {
        let p = p1();
        let r = represent(&p, &[], g(&p, "b"));
        assert_eq!(r.status, Status::EmptyWord);
        assert!(reconstruct(&r).is_empty());
    }

    #[test]
    fn reconstruct_fixtures() {
        let p = p1();
        for (u, guide) in [("a b b", "b"), ("b a", "b"), ("a", "b"), ("c b", "b")] {
            let u = w(&p, u);
            assert_eq!(reconstruct(&represent(&p, &u, g(&p, guide))), u);
        }
    }

    #[test]
    fn suffix_mode_reads_from_the_right() {
        // Right graph of {ab = bc} joins b and c; scanning "a b b" from the
        // right towards c matches one letter of "a b" read backwards, then
        // needs a path from b to a, which does not exist.
        let p = p1();
        let c = p.alphabet().get("c").unwrap();
        let r = represent(&p, &w(&p, "a b b"), GuideLetter::suffix(c));
        assert_eq!(r.mode, Mode::Suffix);
        assert!(matches!(r.status, Status::NoPath { .. }));
        assert_eq!(words(&p, &r.prefixes), ["b"]);
        assert_eq!(p.render(&r.residual), "a b");
        assert_eq!(reconstruct(&r), w(&p, "a b b"));

        let r = represent(&p, &w(&p, "c a b"), GuideLetter::suffix(c));
        assert_eq!(r.status, Status::HeadFound);
        assert_eq!(p.render(&r.head.as_ref().unwrap().word), "a b");
        assert_eq!(p.render(&r.residual), "c");
        assert_eq!(r.head_index(), Some(1));
    }

    #[test]
    fn scan_state_inside_second_level() {
        let p = p2();
        let s = scan_state_at(&p, &w(&p, "a a b"), g(&p, "b"), 1).unwrap();
        assert_eq!(s.position, 1);
        assert_eq!(s.depth, 2);
        assert_eq!(
            s.pending,
            [PendingMatch {
                relation: RelationId(0),
                side: RelationSide::Lhs,
                offset: 1
            }]
        );
        assert_eq!(s.current_guide, p.alphabet().get("b").unwrap());
        assert_eq!(s.phase, ScanPhase::Boundary);

        let s = scan_state_at(&p, &w(&p, "a a b"), g(&p, "b"), 2).unwrap();
        assert_eq!((s.depth, s.pending.len(), s.phase), (2, 2, ScanPhase::Inside));
        let s = scan_state_at(&p, &w(&p, "a a b"), g(&p, "b"), 3).unwrap();
        assert_eq!(s.phase, ScanPhase::HeadComplete);
    }

    #[test]
    fn scan_state_initial_and_terminated() {
        let p = p1();
        let b = p.alphabet().get("b").unwrap();
        for u in ["a b b", "b a", "c", "a"] {
            let s = scan_state_at(&p, &w(&p, u), g(&p, "b"), 0).unwrap();
            assert_eq!((s.depth, s.pending.len(), s.current_guide), (1, 0, b));
        }
        let s = scan_state_at(&p, &w(&p, "a b b"), g(&p, "b"), 2).unwrap();
        assert_eq!(s.phase, ScanPhase::HeadComplete);
        assert_eq!(s.key(), ScanKey::HeadComplete);
        let err = scan_state_at(&p, &w(&p, "a b b"), g(&p, "b"), 3).unwrap_err();
        assert_eq!(err.status, Status::HeadFound);
        assert!(scan_state_at(&p, &w(&p, "b a"), g(&p, "b"), 1).is_err());
        let s = scan_state_at(&p, &w(&p, "a"), g(&p, "b"), 1).unwrap();
        assert_eq!(s.phase, ScanPhase::Inside);
    }

    #[test]
    fn scan_key_matches_full_state() {
        let p = p2();
        let u = w(&p, "a a a b a b");
        let r = represent(&p, &u, g(&p, "b"));
        for pos in 0..=u.len() {
            let full = state_from_representation(&r, pos).ok().map(|s| s.key());
            assert_eq!(r.scan_key_at(pos), full, "pos {pos}");
        }
    }
}
