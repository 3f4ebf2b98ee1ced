//! Machine-readable and human-readable renderings. Words are rendered as
//! space-separated tokens.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::Serialize;

use crate::decide::{Reason, Verdict};
use crate::engine::{OrbitTrace, PeriodCertificate, SpanAnnotation, Step, Terminal};
use crate::graph::{CycleWitness, SideGraph};
use crate::presentation::Presentation;
use crate::represent::{Block, Representation, Status};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockRecord {
    pub word: String,
    pub relation: usize,
    pub side: &'static str,
    pub guide: String,
}

impl BlockRecord {
    fn new(p: &Presentation, b: &Block) -> Self {
        BlockRecord {
            word: p.render(&b.word),
            relation: b.relation.0,
            side: b.side.as_str(),
            guide: p.alphabet().token(b.guide).to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepresentationRecord {
    pub mode: &'static str,
    pub guide: String,
    pub prefixes: Vec<BlockRecord>,
    pub head: Option<BlockRecord>,
    pub residual: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_path: Option<[String; 2]>,
}

impl RepresentationRecord {
    pub fn new(p: &Presentation, r: &Representation) -> Self {
        let t = |l| p.alphabet().token(l).to_string();
        RepresentationRecord {
            mode: r.mode.as_str(),
            guide: t(r.guide),
            prefixes: r.prefixes.iter().map(|b| BlockRecord::new(p, b)).collect(),
            head: r.head.as_ref().map(|b| BlockRecord::new(p, b)),
            residual: p.render(&r.residual),
            status: r.status.as_str(),
            no_path: match r.status {
                Status::NoPath { from, to } => Some([t(from), t(to)]),
                _ => None,
            },
        }
    }
}

/// One JSON Lines record per step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub word_before: String,
    pub word_after: String,
    pub relation: usize,
    pub from_side: &'static str,
    pub position: usize,
    pub shift: isize,
    pub prefixes: Vec<String>,
    pub head: String,
    pub residual: String,
    pub status: &'static str,
}

impl StepRecord {
    pub fn new(p: &Presentation, s: &Step) -> Self {
        let r = &s.representation;
        StepRecord {
            step: s.index,
            word_before: p.render(&s.word_before),
            word_after: p.render(&s.word_after),
            relation: s.relation.0,
            from_side: s.from_side.as_str(),
            position: s.position,
            shift: s.shift,
            prefixes: r.prefixes.iter().map(|b| p.render(&b.word)).collect(),
            head: r.head.as_ref().map(|h| p.render(&h.word)).unwrap_or_default(),
            residual: p.render(&r.residual),
            status: r.status.as_str(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateRecord {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub delta: usize,
    pub lead: usize,
    pub tail: String,
    pub frozen: usize,
    pub trail: String,
}

impl CertificateRecord {
    pub fn new(p: &Presentation, c: &PeriodCertificate) -> Self {
        CertificateRecord {
            m: c.m,
            n: c.n,
            s: c.boundary,
            delta: c.shift,
            lead: c.lead,
            tail: p.render(&c.tail),
            frozen: c.frozen,
            trail: p.render(&c.trail),
        }
    }
}

/// Closing record of a trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TerminalRecord {
    pub terminal: &'static str,
    pub steps: usize,
    pub final_word: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<&'static str>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRecord>,
}

impl TerminalRecord {
    pub fn new(p: &Presentation, t: &OrbitTrace) -> Self {
        let (status, budget, certificate) = match &t.terminal {
            Terminal::MatchesGuide => (None, None, None),
            Terminal::Stuck(s) => (Some(s.as_str()), None, None),
            Terminal::Periodic(c) => (None, None, Some(CertificateRecord::new(p, c))),
            Terminal::BudgetExhausted(b) => (None, Some(b.as_str()), None),
        };
        TerminalRecord {
            terminal: t.terminal.as_str(),
            steps: t.steps.len(),
            final_word: p.render(t.final_word()),
            status,
            budget,
            certificate,
        }
    }
}

/// Writes one line per step followed by the terminal record.
pub fn write_trace_jsonl<W: Write + ?Sized>(out: &mut W, p: &Presentation, t: &OrbitTrace) -> io::Result<()> {
    for s in &t.steps {
        serde_json::to_writer(&mut *out, &StepRecord::new(p, s))?;
        out.write_all(b"\n")?;
    }
    serde_json::to_writer(&mut *out, &TerminalRecord::new(p, t))?;
    out.write_all(b"\n")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanRecord {
    pub term: usize,
    pub frozen_left: String,
    pub kernel: String,
    pub frozen_right: String,
}

impl SpanRecord {
    pub fn new(p: &Presentation, s: &SpanAnnotation) -> Self {
        SpanRecord {
            term: s.term,
            frozen_left: p.render(&s.frozen_left),
            kernel: p.render(&s.kernel),
            frozen_right: p.render(&s.frozen_right),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphRecord {
    pub side: &'static str,
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, usize)>,
}

impl GraphRecord {
    pub fn new(p: &Presentation, g: &SideGraph) -> Self {
        let t = |l| p.alphabet().token(l).to_string();
        GraphRecord {
            side: g.side.as_str(),
            vertices: g.vertices.iter().map(|&v| t(v)).collect(),
            edges: g.edges.iter().map(|e| (t(e.a), t(e.b), e.relation.0)).collect(),
        }
    }
}

fn dot_id(token: &str) -> String {
    format!("\"{}\"", token.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering of a side graph.
pub fn graph_dot(p: &Presentation, g: &SideGraph) -> String {
    let t = |l| dot_id(p.alphabet().token(l));
    let mut s = format!("graph {} {{\n", g.side.as_str());
    for &v in &g.vertices {
        let _ = writeln!(s, "  {};", t(v));
    }
    for e in &g.edges {
        let _ = writeln!(s, "  {} -- {} [label=\"{}\"];", t(e.a), t(e.b), e.relation);
    }
    s.push_str("}\n");
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRecord {
    pub side: &'static str,
    pub kind: &'static str,
    pub edges: Vec<(String, String, usize)>,
    pub description: String,
}

impl WitnessRecord {
    pub fn new(p: &Presentation, w: &CycleWitness) -> Self {
        let t = |l| p.alphabet().token(l).to_string();
        WitnessRecord {
            side: w.side.as_str(),
            kind: w.kind.as_str(),
            edges: w.edges.iter().map(|e| (t(e.a), t(e.b), e.relation.0)).collect(),
            description: w.describe(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentRecord {
    pub guide: String,
    pub initial: String,
    pub terms: Vec<String>,
    pub terminal: TerminalRecord,
}

/// A verdict with its full witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictRecord {
    pub kind: &'static str,
    pub mode: &'static str,
    pub answer: &'static str,
    pub reason: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    pub steps_used: usize,
    pub segments: Vec<SegmentRecord>,
}

impl VerdictRecord {
    pub fn new(p: &Presentation, v: &Verdict) -> Self {
        VerdictRecord {
            kind: v.kind.as_str(),
            mode: v.mode.as_str(),
            answer: v.answer.as_str(),
            reason: v.reason.as_str(),
            residual: v.residual.as_ref().map(|w| p.render(w)),
            steps_used: v.steps_used,
            segments: v
                .segments
                .iter()
                .map(|s| SegmentRecord {
                    guide: p.alphabet().token(s.guide().letter).to_string(),
                    initial: p.render(&s.orbit.initial),
                    terms: s.orbit.terms().map(|w| p.render(w)).collect(),
                    terminal: TerminalRecord::new(p, &s.orbit),
                })
                .collect(),
        }
    }
}

/// `α₁ | α₂ | … | [HEAD P=Q side] | residual`, in left-to-right order.
pub fn format_representation(p: &Presentation, r: &Representation) -> String {
    let mut parts: Vec<String> = r.prefixes.iter().map(|b| p.render(&b.word)).collect();
    if let Some(h) = &r.head {
        let rel = p.relation(h.relation);
        parts.push(format!(
            "[HEAD {} = {} {}]",
            p.render(&rel.lhs),
            p.render(&rel.rhs),
            h.side.as_str()
        ));
    }
    if !r.residual.is_empty() || parts.is_empty() {
        parts.push(p.render(&r.residual));
    }
    if r.mode == crate::acyclic::Mode::Suffix {
        parts.reverse();
    }
    parts.join(" | ")
}

/// One-line summary of why a verdict was reached.
pub fn describe_reason(p: &Presentation, v: &Verdict) -> String {
    let t = |l| p.alphabet().token(l).to_string();
    match &v.reason {
        Reason::Reduced => "target reduced to the empty word".into(),
        Reason::FormEmpty => "form ran out before the target".into(),
        Reason::TrailingForm => "target ran out before the form".into(),
        Reason::Stuck(Status::NoPath { from, to }) => format!("no path from {} to {}", t(*from), t(*to)),
        Reason::Stuck(s) => format!("no head ({})", s.as_str()),
        Reason::Periodic(c) => format!(
            "periodic orbit: terms {} and {}, boundary {}, shift {}",
            c.m, c.n, c.boundary, c.shift
        ),
        Reason::Budget(b) => format!("{} budget exhausted", b.as_str()),
    }
}
