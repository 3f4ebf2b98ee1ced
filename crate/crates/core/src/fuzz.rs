//! Randomized agreement harness: decisions against the oracle, prefix mode
//! against suffix mode, witnesses against replay, and period certificates
//! against long undetected runs.

use std::fs;
use std::io;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acyclic::{AcyclicPresentation, Mode};
use crate::decide::{decide, decide_in_mode, Answer, DecideLimits, Query, QueryKind, Verdict};
use crate::engine::{run_orbit, Limits, Terminal};
use crate::oracle::{oracle_divides_left, oracle_divides_right, oracle_equal, Bounds};
use crate::presentation::Presentation;
use crate::word::{Alphabet, Letter, Word};

/// Shape of generated instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub max_generators: usize,
    pub max_relations: usize,
    pub max_side_length: usize,
    pub max_word_length: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_generators: 4,
            max_relations: 3,
            max_side_length: 4,
            max_word_length: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub cases: usize,
    pub shape: Shape,
    pub oracle: Bounds,
    pub limits: DecideLimits,
    /// Multiple of a certificate's step index for the undetected rerun.
    pub soundness_factor: usize,
    /// Flips every definitive decision, to prove the harness notices.
    pub inject_fault: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 1,
            cases: 1000,
            shape: Shape::default(),
            oracle: Bounds::default(),
            limits: DecideLimits::default(),
            soundness_factor: 100,
            inject_fault: false,
        }
    }
}

fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

fn random_word(rng: &mut impl Rng, letters: usize, min: usize, max: usize) -> Word {
    let len = rng.gen_range(min..=max);
    (0..len).map(|_| Letter(rng.gen_range(0..letters) as u32)).collect()
}

/// A random presentation with cycle-free graphs, by rejection sampling.
pub fn random_presentation(rng: &mut impl Rng, shape: Shape) -> AcyclicPresentation {
    loop {
        let n = rng.gen_range(1..=shape.max_generators);
        let mut alphabet = Alphabet::new();
        for i in 0..n {
            alphabet.insert(&((b'a' + i as u8) as char).to_string());
        }
        let r = rng.gen_range(0..=shape.max_relations);
        let sides = (0..r)
            .map(|_| {
                (
                    random_word(rng, n, 1, shape.max_side_length),
                    random_word(rng, n, 1, shape.max_side_length),
                )
            })
            .collect();
        let Ok(p) = Presentation::new(alphabet, sides) else {
            continue;
        };
        if let Ok(ap) = AcyclicPresentation::new(p) {
            return ap;
        }
    }
}

/// Applies up to `moves` random relation applications to `u`, never
/// exceeding `max_len` letters.
pub fn random_walk(rng: &mut impl Rng, p: &Presentation, u: &[Letter], moves: usize, max_len: usize) -> Word {
    let mut w = Word::from_slice(u);
    for _ in 0..moves {
        let mut options = Vec::new();
        for pos in 0..w.len() {
            for r in p.relations() {
                for (from, to) in [(&r.lhs, &r.rhs), (&r.rhs, &r.lhs)] {
                    if w[pos..].starts_with(from) && w.len() - from.len() + to.len() <= max_len {
                        options.push((pos, from.len(), to));
                    }
                }
            }
        }
        let Some(&(pos, len, to)) = options.choose(rng) else {
            break;
        };
        w = w.splice(pos, len, to);
    }
    w
}

/// One generated query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub case: u64,
    pub presentation: AcyclicPresentation,
    pub kind: QueryKind,
    pub u: Word,
    pub v: Word,
}

pub fn generate_instance(seed: u64, case: u64, shape: Shape) -> Instance {
    let rng = &mut case_rng(seed, case);
    let ap = random_presentation(rng, shape);
    let n = ap.alphabet().len();
    let max = shape.max_word_length;
    let kind = match rng.gen_range(0..4) {
        0 | 1 => QueryKind::Equal,
        2 => QueryKind::DividesLeft,
        _ => QueryKind::DividesRight,
    };
    let u = random_word(rng, n, 1, max);
    let related = rng.gen_bool(0.5);
    let v = match (kind, related) {
        (QueryKind::Equal, false) => random_word(rng, n, 1, max),
        (QueryKind::Equal, true) => {
            let moves = rng.gen_range(1..=6);
            random_walk(rng, &ap, &u, moves, max)
        }
        (_, false) => random_word(rng, n, 1, max / 2),
        (_, true) => {
            let moves = rng.gen_range(0..=6);
            let w = random_walk(rng, &ap, &u, moves, max);
            let k = rng.gen_range(1..=w.len());
            if kind == QueryKind::DividesLeft {
                Word::from_slice(&w[..k])
            } else {
                Word::from_slice(&w[w.len() - k..])
            }
        }
    };
    Instance {
        case,
        presentation: ap,
        kind,
        u,
        v,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    /// A definitive decision contradicts a definitive oracle answer.
    OracleMismatch,
    /// Prefix-mode and suffix-mode equality verdicts differ.
    DualMismatch,
    /// A verdict's witness does not replay.
    Witness,
    /// The oracle refutes a divisibility cofactor.
    Cofactor,
    /// An orbit certified periodic terminates when rerun without detection.
    UnsoundCertificate,
}

/// Everything checked for one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub decide: Answer,
    /// Suffix-mode verdict, for equality queries.
    pub dual: Option<Answer>,
    pub oracle: Answer,
    pub certificates: usize,
    pub problems: Vec<Problem>,
}

/// Runs `orbit`'s guide from its initial word with detection off and a
/// budget of `factor × n` steps; `true` if the orbit then terminates.
fn certificate_refuted(ap: &AcyclicPresentation, v: &Verdict, factor: usize) -> Option<bool> {
    let seg = v.segments.last()?;
    let Terminal::Periodic(cert) = &seg.orbit.terminal else {
        return None;
    };
    let limits = Limits {
        max_steps: cert.n.saturating_mul(factor),
        max_word_length: usize::MAX,
        detect_periods: false,
    };
    let rerun = run_orbit(ap, &seg.orbit.initial, seg.orbit.guide, limits);
    Some(matches!(rerun.terminal, Terminal::MatchesGuide | Terminal::Stuck(_)))
}

fn flip(a: Answer) -> Answer {
    match a {
        Answer::Yes => Answer::No,
        Answer::No => Answer::Yes,
        Answer::Unknown => Answer::Unknown,
    }
}

pub fn check_instance(inst: &Instance, config: &FuzzConfig) -> CaseOutcome {
    let ap = &inst.presentation;
    let q = Query {
        kind: inst.kind,
        u: inst.u.clone(),
        v: inst.v.clone(),
        limits: config.limits,
    };
    let mut problems = Vec::new();
    let mut certificates = 0;
    let mut verdicts = vec![decide(ap, &q).expect("generated words are valid")];
    if inst.kind == QueryKind::Equal {
        verdicts.push(decide_in_mode(ap, &q, Mode::Suffix).expect("generated words are valid"));
    }
    for v in &verdicts {
        if v.replay(ap, &q).is_err() {
            problems.push(Problem::Witness);
        }
        if let Some(refuted) = certificate_refuted(ap, v, config.soundness_factor) {
            certificates += 1;
            if refuted {
                problems.push(Problem::UnsoundCertificate);
            }
        }
    }
    let mut answers: Vec<Answer> = verdicts.iter().map(|v| v.answer).collect();
    if config.inject_fault {
        answers.iter_mut().for_each(|a| *a = flip(*a));
    }

    let (u, w) = (&inst.u[..], &inst.v[..]);
    let oracle = match inst.kind {
        QueryKind::Equal => oracle_equal(ap, u, w, config.oracle),
        QueryKind::DividesLeft => oracle_divides_left(ap, u, w, config.oracle).0,
        QueryKind::DividesRight => oracle_divides_right(ap, u, w, config.oracle).0,
    };
    if oracle.is_definitive() && answers.iter().any(|a| a.is_definitive() && *a != oracle) {
        problems.push(Problem::OracleMismatch);
    }
    if let [a, b] = answers[..] {
        if a.is_definitive() && b.is_definitive() && a != b {
            problems.push(Problem::DualMismatch);
        }
    }
    if let Some(cofactor) = &verdicts[0].residual {
        let product = match inst.kind {
            QueryKind::DividesRight => cofactor.concat(w),
            _ => Word::from_slice(w).concat(cofactor),
        };
        if oracle_equal(ap, u, &product, config.oracle) == Answer::No {
            problems.push(Problem::Cofactor);
        }
    }
    problems.sort_by_key(|p| *p as u8);
    problems.dedup();
    CaseOutcome {
        decide: answers[0],
        dual: answers.get(1).copied(),
        oracle,
        certificates,
        problems,
    }
}

/// A failing instance, self-contained enough to rerun.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub seed: u64,
    pub case: u64,
    pub presentation: String,
    pub kind: QueryKind,
    pub u: String,
    pub v: String,
    pub config: FuzzConfig,
    pub outcome: CaseOutcome,
}

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("presentation: {0}")]
    Presentation(String),
    #[error("word: {0}")]
    Word(String),
}

impl Fixture {
    pub fn new(config: &FuzzConfig, inst: &Instance, outcome: CaseOutcome) -> Self {
        let p = &inst.presentation;
        Fixture {
            seed: config.seed,
            case: inst.case,
            presentation: p.to_string(),
            kind: inst.kind,
            u: p.render(&inst.u),
            v: p.render(&inst.v),
            config: *config,
            outcome,
        }
    }

    pub fn instance(&self) -> Result<Instance, FixtureError> {
        let p = Presentation::parse(&self.presentation).map_err(|e| FixtureError::Presentation(e.to_string()))?;
        let ap = AcyclicPresentation::new(p).map_err(|e| FixtureError::Presentation(format!("{e:?}")))?;
        let u = ap.parse_word(&self.u).map_err(|e| FixtureError::Word(e.to_string()))?;
        let v = ap.parse_word(&self.v).map_err(|e| FixtureError::Word(e.to_string()))?;
        Ok(Instance {
            case: self.case,
            presentation: ap,
            kind: self.kind,
            u,
            v,
        })
    }

    pub fn load(path: &Path) -> Result<Self, FixtureError> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn save(&self, dir: &Path) -> Result<std::path::PathBuf, FixtureError> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("seed{}-case{}.json", self.seed, self.case));
        fs::write(&path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(path)
    }

    /// Recomputes the outcome under the recorded configuration.
    pub fn rerun(&self) -> Result<CaseOutcome, FixtureError> {
        Ok(check_instance(&self.instance()?, &self.config))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub cases: usize,
    /// Both sides definitive and consistent.
    pub agree: usize,
    pub disagree: usize,
    /// The decision or the oracle was not definitive.
    pub unknown: usize,
    pub decide_unknown: usize,
    pub oracle_unknown: usize,
    pub dual_checked: usize,
    pub certificates: usize,
    pub failures: Vec<Fixture>,
}

impl FuzzReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run_fuzz(config: &FuzzConfig) -> FuzzReport {
    let outcomes: Vec<(Instance, CaseOutcome)> = (0..config.cases as u64)
        .into_par_iter()
        .map(|case| {
            let inst = generate_instance(config.seed, case, config.shape);
            let out = check_instance(&inst, config);
            (inst, out)
        })
        .collect();

    let mut r = FuzzReport {
        seed: config.seed,
        cases: config.cases,
        ..FuzzReport::default()
    };
    for (inst, out) in outcomes {
        r.certificates += out.certificates;
        r.decide_unknown += usize::from(!out.decide.is_definitive());
        r.oracle_unknown += usize::from(!out.oracle.is_definitive());
        r.dual_checked += usize::from(
            out.dual
                .is_some_and(|d| d.is_definitive() && out.decide.is_definitive()),
        );
        if !out.problems.is_empty() {
            r.disagree += 1;
            log::error!("case {}: {:?}", inst.case, out.problems);
            r.failures.push(Fixture::new(config, &inst, out));
        } else if out.decide.is_definitive() && out.oracle.is_definitive() {
            r.agree += 1;
        } else {
            r.unknown += 1;
        }
    }
    r
}

/// Settings for [`orbit_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitSearch {
    pub seed: u64,
    pub presentations: usize,
    pub shape: Shape,
    /// Orbits with more steps than this count as long.
    pub long_threshold: usize,
    pub limits: Limits,
}

impl Default for OrbitSearch {
    fn default() -> Self {
        OrbitSearch {
            seed: 1,
            presentations: 20,
            shape: Shape {
                max_generators: 3,
                max_relations: 2,
                max_side_length: 4,
                max_word_length: 6,
            },
            long_threshold: 200,
            limits: Limits {
                max_steps: 2000,
                ..Limits::default()
            },
        }
    }
}

/// An orbit that ran out of budget without a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncompleteOrbit {
    pub presentation: String,
    pub word: String,
    pub guide: String,
    pub mode: String,
    pub steps: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSearchReport {
    pub presentations: usize,
    pub orbits: usize,
    pub terminated: usize,
    pub certified: usize,
    /// Orbits longer than the threshold, by outcome.
    pub long_terminated: usize,
    pub long_certified: usize,
    pub incomplete: Vec<IncompleteOrbit>,
}

/// Runs every word up to the shape's length from both ends towards every
/// letter, over distinct random presentations with the given shape.
pub fn orbit_search(cfg: &OrbitSearch) -> OrbitSearchReport {
    let mut seen = std::collections::HashSet::new();
    let mut presentations = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    while presentations.len() < cfg.presentations {
        let ap = random_presentation(&mut rng, cfg.shape);
        if !ap.relations().is_empty() && seen.insert(ap.to_string()) {
            presentations.push(ap);
        }
    }
    let parts: Vec<OrbitSearchReport> = presentations
        .par_iter()
        .map(|ap| {
            let mut r = OrbitSearchReport {
                presentations: 1,
                ..OrbitSearchReport::default()
            };
            let n = ap.alphabet().len();
            for w in crate::oracle::all_words(n, cfg.shape.max_word_length).iter() {
                for letter in ap.alphabet().letters() {
                    for mode in [Mode::Prefix, Mode::Suffix] {
                        let g = crate::represent::GuideLetter { letter, mode };
                        let o = run_orbit(ap, w, g, cfg.limits);
                        let long = o.steps.len() > cfg.long_threshold;
                        r.orbits += 1;
                        match &o.terminal {
                            Terminal::MatchesGuide | Terminal::Stuck(_) => {
                                r.terminated += 1;
                                r.long_terminated += usize::from(long);
                            }
                            Terminal::Periodic(c) => {
                                r.certified += 1;
                                r.long_certified += usize::from(c.n > cfg.long_threshold);
                            }
                            Terminal::BudgetExhausted(_) => r.incomplete.push(IncompleteOrbit {
                                presentation: ap.to_string(),
                                word: ap.render(w),
                                guide: ap.alphabet().token(letter).to_string(),
                                mode: mode.to_string(),
                                steps: o.steps.len(),
                            }),
                        }
                    }
                }
            }
            r
        })
        .collect();
    parts.into_iter().fold(OrbitSearchReport::default(), |mut acc, r| {
        acc.presentations += r.presentations;
        acc.orbits += r.orbits;
        acc.terminated += r.terminated;
        acc.certified += r.certified;
        acc.long_terminated += r.long_terminated;
        acc.long_certified += r.long_certified;
        acc.incomplete.extend(r.incomplete);
        acc
    })
}
