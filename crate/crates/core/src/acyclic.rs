//! Validated presentations and scan orientation.

use std::fmt;

use crate::graph::{check_cycle_free, CycleWitness, GraphSide, HopTable, SideGraph};
use crate::presentation::{Presentation, RelationId, RelationSide};
use crate::word::{Letter, Word};

/// Direction of a scan: prefix mode reads words left to right against the
/// left graph, suffix mode right to left against the right graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Prefix,
    Suffix,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Prefix => "prefix",
            Mode::Suffix => "suffix",
        }
    }

    pub fn graph_side(self) -> GraphSide {
        match self {
            Mode::Prefix => GraphSide::Left,
            Mode::Suffix => GraphSide::Right,
        }
    }

    /// Letter at the scan origin.
    pub fn front(self, w: &[Letter]) -> Option<Letter> {
        match self {
            Mode::Prefix => w.first().copied(),
            Mode::Suffix => w.last().copied(),
        }
    }

    /// Drops `n` letters at the scan origin.
    pub fn drop_front(self, w: &[Letter], n: usize) -> Word {
        match self {
            Mode::Prefix => Word::from_slice(&w[n..]),
            Mode::Suffix => Word::from_slice(&w[..w.len() - n]),
        }
    }

    /// The word as seen by the scanner.
    pub fn orient(self, w: &[Letter]) -> Word {
        match self {
            Mode::Prefix => Word::from_slice(w),
            Mode::Suffix => w.iter().rev().copied().collect(),
        }
    }

    /// Converts a scan-origin offset of an occurrence of length `len` into
    /// a left-to-right index in a word of length `word_len`.
    pub fn to_index(self, scan_pos: usize, len: usize, word_len: usize) -> usize {
        match self {
            Mode::Prefix => scan_pos,
            Mode::Suffix => word_len - scan_pos - len,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Relation sides as the scanner reads them, plus first-hop routing in the
/// matching side graph.
#[derive(Debug, Clone)]
pub(crate) struct Oriented {
    sides: Vec<[Word; 2]>,
    hops: HopTable,
}

impl Oriented {
    fn new(p: &Presentation, mode: Mode) -> Self {
        let sides = p
            .relations()
            .iter()
            .map(|r| [mode.orient(&r.lhs), mode.orient(&r.rhs)])
            .collect();
        let hops = SideGraph::build(p, mode.graph_side()).hop_table(p.alphabet().len());
        Oriented { sides, hops }
    }

    pub(crate) fn side(&self, id: RelationId, side: RelationSide) -> &[Letter] {
        &self.sides[id.0][side as usize]
    }

    /// The relation on the first edge of the path `from -> to` and the side
    /// of it that starts with `from`.
    pub(crate) fn first_hop(&self, from: Letter, to: Letter) -> Option<(RelationId, RelationSide)> {
        let id = self.hops.first_edge(from, to)?;
        let side = if self.sides[id.0][0][0] == from {
            RelationSide::Lhs
        } else {
            RelationSide::Rhs
        };
        Some((id, side))
    }
}

/// A presentation whose left and right graphs are both simple forests.
#[derive(Debug, Clone)]
pub struct AcyclicPresentation {
    presentation: Presentation,
    prefix: Oriented,
    suffix: Oriented,
}

impl AcyclicPresentation {
    pub fn new(presentation: Presentation) -> Result<Self, CycleWitness> {
        check_cycle_free(&presentation)?;
        Ok(AcyclicPresentation {
            prefix: Oriented::new(&presentation, Mode::Prefix),
            suffix: Oriented::new(&presentation, Mode::Suffix),
            presentation,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub(crate) fn oriented(&self, mode: Mode) -> &Oriented {
        match mode {
            Mode::Prefix => &self.prefix,
            Mode::Suffix => &self.suffix,
        }
    }
}

// The derived tables are functions of the presentation.
impl PartialEq for AcyclicPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.presentation == other.presentation
    }
}

impl Eq for AcyclicPresentation {}

impl std::ops::Deref for AcyclicPresentation {
    type Target = Presentation;

    fn deref(&self) -> &Presentation {
        &self.presentation
    }
}
