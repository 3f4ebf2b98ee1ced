//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use acyclic_rewriter::engine::{run_orbit, verify_certificate, Limits, PeriodDetector, Step, Terminal};
use acyclic_rewriter::fuzz::{random_presentation, run_fuzz, FuzzConfig, Problem, Shape};
use acyclic_rewriter::oracle::{exhaustive_samples, oracle_cancellation_check, oracle_equal, Bounds};
use acyclic_rewriter::represent::Block;
use acyclic_rewriter::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ap(text: &str) -> AcyclicPresentation {
    AcyclicPresentation::new(Presentation::parse(text).unwrap()).unwrap()
}

fn random_word(rng: &mut impl Rng, letters: usize, min: usize, max: usize) -> Word {
    let len = rng.gen_range(min..=max);
    (0..len).map(|_| Letter(rng.gen_range(0..letters) as u32)).collect()
}

fn fuzz_config() -> FuzzConfig {
    FuzzConfig {
        seed: 1,
        cases: 5000,
        ..FuzzConfig::default()
    }
}

fn count(report: &acyclic_rewriter::fuzz::FuzzReport, p: Problem) -> usize {
    report
        .failures
        .iter()
        .filter(|f| f.outcome.problems.contains(&p))
        .count()
}

fn oracle_agreement() -> Outcome {
    let cfg = fuzz_config();
    let r = run_fuzz(&cfg);
    let mismatches = count(&r, Problem::OracleMismatch);
    let other = r.failures.len();
    outcome(
        r.cases >= 5000 && r.disagree == 0 && mismatches == 0 && other == 0,
        format!(
            "{} cases, {} agree, {} disagree, {} unknown (decide {}, oracle {}), {} failing cases",
            r.cases, r.agree, r.disagree, r.unknown, r.decide_unknown, r.oracle_unknown, other
        ),
    )
}

fn duality() -> Outcome {
    let mut checked = 0;
    let mut disagree = 0;
    for seed in 1..=2 {
        let r = run_fuzz(&FuzzConfig { seed, ..fuzz_config() });
        checked += r.dual_checked;
        disagree += count(&r, Problem::DualMismatch);
    }
    outcome(
        checked > 0 && disagree == 0,
        format!("{checked} equality instances with both modes definitive, {disagree} disagreements"),
    )
}

fn constructed_positives() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shape = Shape::default();
    let mut failures = Vec::new();
    for i in 0..1000 {
        let ap = random_presentation(&mut rng, shape);
        let n = ap.alphabet().len();
        let v = random_word(&mut rng, n, 1, 4);
        let w = random_word(&mut rng, n, 0, 4);
        let q = Query::new(QueryKind::DividesLeft, v.concat(&w), v.clone());
        let verdict = decide(&ap, &q).unwrap();
        let replays = verdict.replay(&ap, &q).is_ok();
        let cofactor_ok = verdict
            .residual
            .as_ref()
            .is_some_and(|r| oracle_equal(&ap, &v.concat(&w), &v.concat(r), Bounds::default()) != Answer::No);
        if verdict.answer != Answer::Yes || !replays || !cofactor_ok {
            failures.push(i);
        }
    }
    outcome(
        failures.is_empty(),
        format!("1000 pairs, {} without a replayable Yes {:?}", failures.len(), failures),
    )
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let shape = Shape::default();
    let mut bad = 0;
    let mut ap = random_presentation(&mut rng, shape);
    for i in 0..10_000 {
        if i % 50 == 0 {
            ap = random_presentation(&mut rng, shape);
        }
        let n = ap.alphabet().len();
        let u = random_word(&mut rng, n, 0, 12);
        let letter = Letter(rng.gen_range(0..n) as u32);
        let g = if rng.gen() {
            GuideLetter::prefix(letter)
        } else {
            GuideLetter::suffix(letter)
        };
        if reconstruct(&represent(&ap, &u, g)) != u {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("10000 (word, guide) pairs, {bad} mismatches"))
}

/// Certificates from the fuzz run plus every orbit of short words over a
/// sample of presentations.
fn detector_soundness() -> Outcome {
    let r = run_fuzz(&fuzz_config());
    let fuzz_unsound = count(&r, Problem::UnsoundCertificate);
    let fuzz_witness = count(&r, Problem::Witness);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let shape = Shape {
        max_generators: 3,
        max_relations: 2,
        max_side_length: 4,
        max_word_length: 6,
    };
    let limits = Limits {
        max_steps: 2000,
        ..Limits::default()
    };
    let (mut orbits, mut certified, mut incomplete, mut unsound, mut unverified) = (0, 0, 0, 0, 0);
    let mut sampled = 0;
    while sampled < 150 {
        let ap = random_presentation(&mut rng, shape);
        if ap.relations().is_empty() {
            continue;
        }
        sampled += 1;
        for w in acyclic_rewriter::oracle::all_words(ap.alphabet().len(), shape.max_word_length) {
            for letter in ap.alphabet().letters() {
                for g in [GuideLetter::prefix(letter), GuideLetter::suffix(letter)] {
                    orbits += 1;
                    let o = run_orbit(&ap, &w, g, limits);
                    match &o.terminal {
                        Terminal::Periodic(c) => {
                            certified += 1;
                            if verify_certificate(&ap, g, &o.steps, c).is_err() {
                                unverified += 1;
                            }
                            let rerun = Limits {
                                max_steps: c.n * 100,
                                max_word_length: usize::MAX,
                                detect_periods: false,
                            };
                            let plain = run_orbit(&ap, &w, g, rerun);
                            if matches!(plain.terminal, Terminal::MatchesGuide | Terminal::Stuck(_)) {
                                unsound += 1;
                            }
                        }
                        Terminal::BudgetExhausted(_) => incomplete += 1,
                        _ => {}
                    }
                }
            }
        }
    }
    outcome(
        fuzz_unsound + fuzz_witness + unsound + unverified == 0 && r.certificates + certified > 0,
        format!(
            "fuzz: {} certificates, {} unsound, {} failed replay; sweep over {} presentations: {} orbits, {} certificates, \
             {} unsound, {} failed verification, {} undecided within budget",
            r.certificates, fuzz_unsound, fuzz_witness, sampled, orbits, certified, unsound, unverified, incomplete
        ),
    )
}

/// Period-2 trace `aᵏ·b·ccc → aᵏ·d·ccc → aᵏ⁺¹·b·ccc`.
fn synthetic_step(k: usize, odd: bool) -> Step {
    let (a, b, c, d) = (Letter(0), Letter(1), Letter(2), Letter(3));
    let tail = [c, c, c];
    let lead = vec![a; k];
    let (from, to, relation) = if odd {
        (vec![b], vec![d], RelationId(0))
    } else {
        (vec![d], vec![a, b], RelationId(1))
    };
    let block = |word: Vec<Letter>, relation| Block {
        word: word.into(),
        relation,
        side: RelationSide::Lhs,
        guide: b,
    };
    Step {
        index: 2 * k - usize::from(odd),
        word_before: [&lead[..], &from, &tail].concat().into(),
        word_after: [&lead[..], &to, &tail].concat().into(),
        relation,
        from_side: RelationSide::Lhs,
        to_side: RelationSide::Rhs,
        position: k,
        shift: to.len() as isize - from.len() as isize,
        representation: Representation {
            mode: Mode::Prefix,
            guide: b,
            prefixes: (0..k).map(|_| block(vec![a], RelationId(2))).collect(),
            head: Some(block(from, relation)),
            residual: Word::from_slice(&tail),
            status: Status::HeadFound,
        },
    }
}

fn synthetic_completeness() -> Outcome {
    const PERIOD: usize = 2;
    let history: Vec<Step> = (1..=4)
        .flat_map(|k| [synthetic_step(k, true), synthetic_step(k, false)])
        .collect();
    let mut d = PeriodDetector::new();
    let found = (1..=history.len()).find_map(|len| d.observe(&history[..len]).map(|c| (len, c)));
    let synthetic_ok = matches!(&found, Some((len, c)) if *len <= 2 * PERIOD && c.period() == PERIOD);

    // A real pumping orbit: b a → b b a b a → … under {a = b b a b}, guide a.
    let p = ap("generators: a b\nrelation: a = b b a b");
    let g = GuideLetter::prefix(p.alphabet().get("a").unwrap());
    let o = run_orbit(&p, &p.parse_word("b a").unwrap(), g, Limits::default());
    let real_ok = match &o.terminal {
        Terminal::Periodic(c) => {
            o.steps.len() <= c.m - 1 + 2 * c.period() && verify_certificate(&p, g, &o.steps, c).is_ok()
        }
        _ => false,
    };
    let describe = |found: &Option<(usize, _)>| match found {
        Some((len, c)) => {
            let c: &acyclic_rewriter::engine::PeriodCertificate = c;
            format!("certificate (m={}, n={}) after {len} steps", c.m, c.n)
        }
        None => "no certificate".into(),
    };
    outcome(
        synthetic_ok && real_ok,
        format!(
            "synthetic period-{PERIOD} trace: {}; pumping orbit: {} after {} steps",
            describe(&found),
            o.terminal.as_str(),
            o.steps.len()
        ),
    )
}

fn union_find_cycle_free(p: &Presentation) -> bool {
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let n = p.alphabet().len();
    let ends: [fn(&Word) -> Letter; 2] = [|w| w.first().unwrap(), |w| w.last().unwrap()];
    ends.iter().all(|end| {
        let mut parent: Vec<usize> = (0..n).collect();
        p.relations().iter().all(|r| {
            let (a, b) = (
                find(&mut parent, end(&r.lhs).index()),
                find(&mut parent, end(&r.rhs).index()),
            );
            parent[a] = b;
            a != b
        })
    })
}

fn cycle_free_validation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut checked, mut acyclic, mut disagree) = (0, 0, 0);
    while checked < 10_000 {
        let n = rng.gen_range(1..=4);
        let mut alphabet = Alphabet::new();
        for i in 0..n {
            alphabet.insert(&((b'a' + i as u8) as char).to_string());
        }
        let sides = (0..rng.gen_range(0..=4))
            .map(|_| (random_word(&mut rng, n, 1, 4), random_word(&mut rng, n, 1, 4)))
            .collect();
        let Ok(p) = Presentation::new(alphabet, sides) else {
            continue;
        };
        checked += 1;
        let ours = check_cycle_free(&p).is_ok();
        acyclic += usize::from(ours);
        disagree += usize::from(ours != union_find_cycle_free(&p));
    }

    let describe = |text: &str| {
        let p = Presentation::parse(text).unwrap();
        match check_cycle_free(&p) {
            Ok(()) => "ok".to_string(),
            Err(w) => w.describe(&p),
        }
    };
    let fixtures = [
        ("generators: a b c\nrelation: a b = b c", "ok"),
        ("generators: a b\nrelation: a b a = a b", "left graph: loop at a (R0)"),
        (
            "generators: a b\nrelation: a b = b a\nrelation: a a = b b",
            "left graph: parallel edges a-b (R0, R1)",
        ),
    ];
    let fixture_misses: Vec<String> = fixtures
        .iter()
        .filter(|(text, want)| describe(text) != *want)
        .map(|(text, _)| describe(text))
        .collect();
    outcome(
        disagree == 0 && fixture_misses.is_empty() && acyclic > 0 && acyclic < checked,
        format!(
            "{checked} random presentations ({acyclic} cycle-free), {disagree} disagreements; \
             fixtures {}",
            if fixture_misses.is_empty() {
                "match".to_string()
            } else {
                format!("differ: {fixture_misses:?}")
            }
        ),
    )
}

fn cancellation_sweep() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (name, text) in [
        ("P1", "generators: a b c\nrelation: a b = b c"),
        ("P2", "generators: a b\nrelation: a b = b a a"),
    ] {
        let p = Presentation::parse(text).unwrap();
        let r = oracle_cancellation_check(&p, Bounds::default(), exhaustive_samples(&p, 5));
        pass &= r.violations.is_empty() && r.checked > 0;
        details.push(format!(
            "{name}: {} checked, {} indefinite, {} violations",
            r.checked,
            r.indefinite,
            r.violations.len()
        ));
    }
    outcome(pass, details.join("; "))
}

struct Worked {
    name: &'static str,
    presentation: &'static str,
    kind: QueryKind,
    u: &'static str,
    v: &'static str,
    answer: Answer,
    segments: &'static [(&'static str, &'static [&'static str])],
    residual: Option<&'static str>,
}

fn worked_fixtures() -> Outcome {
    let fixtures = [
        Worked {
            name: "aab ~ baaaa",
            presentation: "generators: a b\nrelation: a b = b a a",
            kind: QueryKind::Equal,
            u: "a a b",
            v: "b a a a a",
            answer: Answer::Yes,
            segments: &[
                ("b", &["a a b", "a b a a", "b a a a a"]),
                ("a", &["a a a a"]),
                ("a", &["a a a"]),
                ("a", &["a a"]),
                ("a", &["a"]),
            ],
            residual: None,
        },
        Worked {
            name: "bc divides abb",
            presentation: "generators: a b c\nrelation: a b = b c",
            kind: QueryKind::DividesLeft,
            u: "a b b",
            v: "b c",
            answer: Answer::Yes,
            segments: &[("b", &["a b b", "b c b"]), ("c", &["c b"])],
            residual: Some("b"),
        },
        Worked {
            name: "ab !~ ba",
            presentation: "generators: a b c\nrelation: a b = b c",
            kind: QueryKind::Equal,
            u: "a b",
            v: "b a",
            answer: Answer::No,
            segments: &[("b", &["a b", "b c"]), ("a", &["c"])],
            residual: None,
        },
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for f in &fixtures {
        let start = Instant::now();
        let p = ap(f.presentation);
        let q = Query::new(f.kind, p.parse_word(f.u).unwrap(), p.parse_word(f.v).unwrap());
        let v = decide(&p, &q).unwrap();
        let elapsed = start.elapsed();
        let segments: Vec<(String, Vec<String>)> = v
            .segments
            .iter()
            .map(|s| {
                (
                    p.alphabet().token(s.guide().letter).to_string(),
                    s.orbit.terms().map(|t| p.render(t)).collect(),
                )
            })
            .collect();
        let want: Vec<(String, Vec<String>)> = f
            .segments
            .iter()
            .map(|(g, terms)| (g.to_string(), terms.iter().map(|t| t.to_string()).collect()))
            .collect();
        let ok = v.answer == f.answer
            && segments == want
            && v.residual.as_ref().map(|r| p.render(r)).as_deref() == f.residual
            && v.replay(&p, &q).is_ok()
            && elapsed < Duration::from_secs(1);
        pass &= ok;
        details.push(format!(
            "{} {} in {:.1?}",
            f.name,
            if ok { "reproduced" } else { "DIFFERS" },
            elapsed
        ));
    }
    outcome(pass, details.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle agreement", oracle_agreement),
        ("duality", duality),
        ("constructed positives", constructed_positives),
        ("representation round trip", round_trip),
        ("detector soundness", detector_soundness),
        ("detector synthetic completeness", synthetic_completeness),
        ("cycle-free validation", cycle_free_validation),
        ("cancellation sweep", cancellation_sweep),
        ("worked fixtures", worked_fixtures),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "criterion {} {name}: {} ({}; {:.2?})",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed()
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
