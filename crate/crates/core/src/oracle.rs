//! Bounded congruence closure.
//!
//! Explores every word reachable from a seed by applying any relation in
//! either direction at any position, breadth first. Exploration order is
//! position-major, then relation id, then direction (`P → Q` before
//! `Q → P`), so results are reproducible. This is deliberately unrelated to
//! the directed transformation used by [`crate::decide`].

use std::collections::HashMap;
use std::rc::Rc;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::decide::Answer;
use crate::presentation::Presentation;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_word_length: usize,
    pub max_states: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_word_length: 12,
            max_states: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    /// In discovery order; the seed comes first.
    pub members: IndexSet<Word>,
    /// True when the frontier was exhausted without hitting a bound.
    pub complete: bool,
    pub bounds: Bounds,
}

impl ClosureResult {
    pub fn contains(&self, w: &[Letter]) -> bool {
        self.members.contains(&Word::from_slice(w))
    }

    pub fn sorted_members(&self) -> Vec<&Word> {
        let mut v: Vec<&Word> = self.members.iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }
}

/// Breadth-first exploration that stops early once `stop` accepts a
/// member. Returns the closure so far and the accepted member.
fn explore(
    p: &Presentation,
    seed: &[Letter],
    bounds: Bounds,
    mut stop: impl FnMut(&Word) -> bool,
) -> (ClosureResult, Option<Word>) {
    let seed = Word::from_slice(seed);
    let mut members = IndexSet::new();
    members.insert(seed.clone());
    let mut complete = seed.len() <= bounds.max_word_length;
    if stop(&seed) {
        return (
            ClosureResult {
                members,
                complete: false,
                bounds,
            },
            Some(seed),
        );
    }
    if !complete {
        return (
            ClosureResult {
                members,
                complete,
                bounds,
            },
            None,
        );
    }

    let mut next = 0;
    while next < members.len() {
        let w = members[next].clone();
        next += 1;
        for pos in 0..w.len() {
            for r in p.relations() {
                for (from, to) in [(&r.lhs, &r.rhs), (&r.rhs, &r.lhs)] {
                    if !w[pos..].starts_with(from) {
                        continue;
                    }
                    let out = w.splice(pos, from.len(), to);
                    if out.len() > bounds.max_word_length {
                        complete = false;
                        continue;
                    }
                    if members.contains(&out) {
                        continue;
                    }
                    if members.len() >= bounds.max_states {
                        complete = false;
                        continue;
                    }
                    members.insert(out);
                    let added = members.last().expect("just inserted");
                    if stop(added) {
                        let hit = added.clone();
                        return (
                            ClosureResult {
                                members,
                                complete: false,
                                bounds,
                            },
                            Some(hit),
                        );
                    }
                }
            }
        }
    }
    (
        ClosureResult {
            members,
            complete,
            bounds,
        },
        None,
    )
}

/// The bounded congruence class of `u`.
pub fn closure(p: &Presentation, u: &[Letter], bounds: Bounds) -> ClosureResult {
    explore(p, u, bounds, |_| false).0
}

pub fn oracle_equal(p: &Presentation, u: &[Letter], v: &[Letter], bounds: Bounds) -> Answer {
    let (c, hit) = explore(p, u, bounds, |w| &w[..] == v);
    match (hit, c.complete) {
        (Some(_), _) => Answer::Yes,
        (None, true) => Answer::No,
        (None, false) => Answer::Unknown,
    }
}

/// `Yes` with the cofactor `W` when some word equal to `u` literally starts
/// with `v`.
pub fn oracle_divides_left(p: &Presentation, u: &[Letter], v: &[Letter], bounds: Bounds) -> (Answer, Option<Word>) {
    let (c, hit) = explore(p, u, bounds, |w| w.starts_with(v));
    match (hit, c.complete) {
        (Some(w), _) => (Answer::Yes, Some(Word::from_slice(&w[v.len()..]))),
        (None, true) => (Answer::No, None),
        (None, false) => (Answer::Unknown, None),
    }
}

/// Mirror of [`oracle_divides_left`]: `u = W·v`.
pub fn oracle_divides_right(p: &Presentation, u: &[Letter], v: &[Letter], bounds: Bounds) -> (Answer, Option<Word>) {
    let (c, hit) = explore(p, u, bounds, |w| w.ends_with(v));
    match (hit, c.complete) {
        (Some(w), _) => (Answer::Yes, Some(Word::from_slice(&w[..w.len() - v.len()]))),
        (None, true) => (Answer::No, None),
        (None, false) => (Answer::Unknown, None),
    }
}

/// Closures memoized per word; members of a complete class share one
/// result.
pub struct ClassCache<'a> {
    p: &'a Presentation,
    bounds: Bounds,
    cache: HashMap<Word, Rc<ClosureResult>>,
}

impl<'a> ClassCache<'a> {
    pub fn new(p: &'a Presentation, bounds: Bounds) -> Self {
        ClassCache {
            p,
            bounds,
            cache: HashMap::new(),
        }
    }

    pub fn class(&mut self, w: &[Letter]) -> Rc<ClosureResult> {
        if let Some(c) = self.cache.get(w) {
            return c.clone();
        }
        let c = Rc::new(closure(self.p, w, self.bounds));
        if c.complete {
            for m in &c.members {
                self.cache.insert(m.clone(), c.clone());
            }
        } else {
            self.cache.insert(Word::from_slice(w), c.clone());
        }
        c
    }

    pub fn equal(&mut self, u: &[Letter], v: &[Letter]) -> Answer {
        let cu = self.class(u);
        if cu.contains(v) {
            return Answer::Yes;
        }
        if cu.complete {
            return Answer::No;
        }
        let cv = self.class(v);
        if cv.contains(u) {
            Answer::Yes
        } else if cv.complete {
            Answer::No
        } else {
            Answer::Unknown
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationSample {
    pub letter: Letter,
    pub x: Word,
    pub y: Word,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CancelSide {
    /// `aX ~ aY`
    Left,
    /// `Xa ~ Ya`
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationViolation {
    pub sample: CancellationSample,
    pub side: CancelSide,
    pub extended_equal: Answer,
    pub base_equal: Answer,
    /// Sorted classes of `aX`/`Xa`, `aY`/`Ya`, `X` and `Y`.
    pub evidence: Vec<(Word, Vec<Word>)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CancellationReport {
    pub checked: usize,
    pub indefinite: usize,
    pub violations: Vec<CancellationViolation>,
}

/// Checks `aX ~ aY ⟺ X ~ Y` and `Xa ~ Ya ⟺ X ~ Y` on each sample where
/// the oracle decides both sides.
pub fn oracle_cancellation_check(
    p: &Presentation,
    bounds: Bounds,
    samples: impl IntoIterator<Item = CancellationSample>,
) -> CancellationReport {
    let mut cache = ClassCache::new(p, bounds);
    let mut report = CancellationReport::default();
    for sample in samples {
        let base = cache.equal(&sample.x, &sample.y);
        for side in [CancelSide::Left, CancelSide::Right] {
            let a = [sample.letter];
            let (ax, ay) = match side {
                CancelSide::Left => (
                    Word::from_slice(&a).concat(&sample.x),
                    Word::from_slice(&a).concat(&sample.y),
                ),
                CancelSide::Right => (sample.x.concat(&a), sample.y.concat(&a)),
            };
            let ext = cache.equal(&ax, &ay);
            if base == Answer::Unknown || ext == Answer::Unknown {
                report.indefinite += 1;
                continue;
            }
            report.checked += 1;
            if base != ext {
                let evidence = [&ax, &ay, &sample.x, &sample.y]
                    .into_iter()
                    .map(|w| {
                        let c = cache.class(w);
                        (w.clone(), c.sorted_members().into_iter().cloned().collect())
                    })
                    .collect();
                report.violations.push(CancellationViolation {
                    sample: sample.clone(),
                    side,
                    extended_equal: ext,
                    base_equal: base,
                    evidence,
                });
            }
        }
    }
    report
}

/// Every nonempty word of length at most `max_len`, shortest first.
pub fn all_words(alphabet_len: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..alphabet_len as u32).map(move |l| w.concat(&[Letter(l)])))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// All letters with all unordered pairs `X ≤ Y` of words up to `max_len`.
pub fn exhaustive_samples(p: &Presentation, max_len: usize) -> impl Iterator<Item = CancellationSample> + '_ {
    let words = all_words(p.alphabet().len(), max_len);
    let n = words.len();
    let words = Rc::new(words);
    p.alphabet().letters().flat_map(move |letter| {
        let words = words.clone();
        (0..n).flat_map(move |i| {
            let words = words.clone();
            (i..n).map(move |j| CancellationSample {
                letter,
                x: words[i].clone(),
                y: words[j].clone(),
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> Presentation {
        Presentation::parse("generators: a b c\nrelation: a b = b c").unwrap()
    }

    fn p2() -> Presentation {
        Presentation::parse("generators: a b\nrelation: a b = b a a").unwrap()
    }

    fn render_sorted(p: &Presentation, c: &ClosureResult) -> Vec<String> {
        c.sorted_members().into_iter().map(|w| p.render(w)).collect()
    }

    #[test]
    fn closure_of_single_rewrite() {
        let p = p1();
        let c = closure(&p, &p.parse_word("a b").unwrap(), Bounds::default());
        assert!(c.complete);
        assert_eq!(render_sorted(&p, &c), ["a b", "b c"]);
        let c = closure(&p, &p.parse_word("a").unwrap(), Bounds::default());
        assert!(c.complete);
        assert_eq!(c.members.len(), 1);
    }

    #[test]
    fn closure_with_length_cap() {
        let p = p2();
        let bounds = Bounds {
            max_word_length: 6,
            max_states: 1000,
        };
        let c = closure(&p, &p.parse_word("a a b").unwrap(), bounds);
        for w in ["a a b", "a b a a", "b a a a a"] {
            assert!(c.contains(&p.parse_word(w).unwrap()), "{w}");
        }
        assert!(c.complete);
        assert_eq!(c.members.len(), 3);
    }

    #[test]
    fn length_cap_marks_incomplete() {
        let p = p2();
        let bounds = Bounds {
            max_word_length: 4,
            max_states: 1000,
        };
        let c = closure(&p, &p.parse_word("a a b").unwrap(), bounds);
        assert!(!c.complete);
        assert_eq!(c.members.len(), 2);
    }

    #[test]
    fn state_cap_marks_incomplete() {
        let p = p1();
        let bounds = Bounds {
            max_word_length: 12,
            max_states: 1,
        };
        let c = closure(&p, &p.parse_word("a b").unwrap(), bounds);
        assert!(!c.complete);
    }

    #[test]
    fn equality_answers() {
        let (p1, p2) = (p1(), p2());
        let b = Bounds::default();
        let w1 = |s| p1.parse_word(s).unwrap();
        let w2 = |s| p2.parse_word(s).unwrap();
        assert_eq!(oracle_equal(&p2, &w2("a a b"), &w2("b a a a a"), b), Answer::Yes);
        assert_eq!(oracle_equal(&p1, &w1("a b"), &w1("b a"), b), Answer::No);
        assert_eq!(oracle_equal(&p1, &w1("c a"), &w1("c a"), b), Answer::Yes);
    }

    #[test]
    fn divisibility_answers() {
        let p = p1();
        let w = |s| p.parse_word(s).unwrap();
        let b = Bounds::default();
        assert_eq!(
            oracle_divides_left(&p, &w("a b b"), &w("b c"), b),
            (Answer::Yes, Some(w("b")))
        );
        assert_eq!(oracle_divides_left(&p, &w("a"), &w("a b"), b), (Answer::No, None));
        assert_eq!(
            oracle_divides_left(&p, &w("a c"), &w("a"), b),
            (Answer::Yes, Some(w("c")))
        );
        assert_eq!(
            oracle_divides_right(&p, &w("c a b"), &w("c"), b),
            (Answer::Yes, Some(w("c b")))
        );
    }

    #[test]
    fn cancellation_spot_checks() {
        let p = p1();
        let a = p.alphabet().get("a").unwrap();
        let w = |s| p.parse_word(s).unwrap();
        let samples = vec![
            CancellationSample {
                letter: a,
                x: w("b"),
                y: w("b"),
            },
            CancellationSample {
                letter: a,
                x: w("b"),
                y: w("c"),
            },
        ];
        let r = oracle_cancellation_check(&p, Bounds::default(), samples);
        assert_eq!(r.checked, 4);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(all_words(2, 3).len(), 2 + 4 + 8);
        assert_eq!(exhaustive_samples(&p2(), 2).count(), 2 * (6 * 7 / 2));
    }
}
