//! Left and right graphs of a presentation.
//!
//! The left graph has a vertex for every letter that begins some defining
//! word and one edge per relation joining the first letters of its two
//! sides. The right graph is the same construction on last letters. A
//! presentation is cycle-free when both graphs are simple forests: no loop,
//! no two edges on the same vertex pair, and no longer cycle.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::presentation::{Presentation, RelationId};
use crate::word::Letter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphSide {
    Left,
    Right,
}

impl GraphSide {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphSide::Left => "left",
            GraphSide::Right => "right",
        }
    }
}

impl fmt::Display for GraphSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Edge joining the anchor letter of `P_i` (`a`) to that of `Q_i` (`b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: Letter,
    pub b: Letter,
    pub relation: RelationId,
}

impl Edge {
    pub fn other_end(&self, v: Letter) -> Letter {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideGraph {
    pub side: GraphSide,
    pub vertices: BTreeSet<Letter>,
    /// Indexed by relation id.
    pub edges: Vec<Edge>,
}

/// A walk through a side graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<Letter>,
    pub edges: Vec<RelationId>,
}

impl Path {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn reversed(&self) -> Path {
        Path {
            vertices: self.vertices.iter().rev().copied().collect(),
            edges: self.edges.iter().rev().copied().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    Loop,
    ParallelEdges,
    Cycle,
}

impl CycleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CycleKind::Loop => "loop",
            CycleKind::ParallelEdges => "parallel-edges",
            CycleKind::Cycle => "cycle",
        }
    }
}

/// Edges forming a closed walk in one of the side graphs, listed in walk
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub side: GraphSide,
    pub kind: CycleKind,
    pub edges: Vec<Edge>,
}

impl CycleWitness {
    pub fn describe(&self, p: &Presentation) -> String {
        let a = p.alphabet();
        match self.kind {
            CycleKind::Loop => {
                let e = self.edges[0];
                format!("{} graph: loop at {} ({})", self.side, a.token(e.a), e.relation)
            }
            CycleKind::ParallelEdges => {
                let e = self.edges[0];
                let ids: Vec<String> = self.edges.iter().map(|e| e.relation.to_string()).collect();
                format!(
                    "{} graph: parallel edges {}-{} ({})",
                    self.side,
                    a.token(e.a),
                    a.token(e.b),
                    ids.join(", ")
                )
            }
            CycleKind::Cycle => {
                let ids: Vec<String> = self.edges.iter().map(|e| e.relation.to_string()).collect();
                format!("{} graph: cycle through {}", self.side, ids.join(", "))
            }
        }
    }
}

impl SideGraph {
    pub fn build(p: &Presentation, side: GraphSide) -> SideGraph {
        let anchor = |w: &[Letter]| match side {
            GraphSide::Left => w[0],
            GraphSide::Right => w[w.len() - 1],
        };
        let mut vertices = BTreeSet::new();
        let mut edges = Vec::with_capacity(p.relations().len());
        for r in p.relations() {
            let (a, b) = (anchor(&r.lhs), anchor(&r.rhs));
            vertices.insert(a);
            vertices.insert(b);
            edges.push(Edge { a, b, relation: r.id });
        }
        SideGraph { side, vertices, edges }
    }

    fn adjacency(&self) -> BTreeMap<Letter, Vec<&Edge>> {
        let mut adj: BTreeMap<Letter, Vec<&Edge>> = BTreeMap::new();
        for e in &self.edges {
            adj.entry(e.a).or_default().push(e);
            if e.b != e.a {
                adj.entry(e.b).or_default().push(e);
            }
        }
        adj
    }

    /// First closed walk found when edges are added in relation order.
    pub fn find_cycle(&self) -> Option<CycleWitness> {
        let mut accepted: Vec<Edge> = Vec::new();
        for &e in &self.edges {
            if e.a == e.b {
                return Some(self.witness(CycleKind::Loop, vec![e]));
            }
            if let Some(&prev) = accepted
                .iter()
                .find(|p| (p.a == e.a && p.b == e.b) || (p.a == e.b && p.b == e.a))
            {
                return Some(self.witness(CycleKind::ParallelEdges, vec![prev, e]));
            }
            if let Some(path) = bfs_path(&accepted, e.b, e.a) {
                // e: a -> b, then the forest path b -> a closes the walk.
                let mut walk = vec![e];
                walk.extend(path);
                return Some(self.witness(CycleKind::Cycle, walk));
            }
            accepted.push(e);
        }
        None
    }

    fn witness(&self, kind: CycleKind, edges: Vec<Edge>) -> CycleWitness {
        CycleWitness {
            side: self.side,
            kind,
            edges,
        }
    }

    /// The simple path between two vertices of a forest. `None` when either
    /// endpoint is missing or they lie in different trees.
    pub fn unique_path(&self, from: Letter, to: Letter) -> Option<Path> {
        if !self.vertices.contains(&from) || !self.vertices.contains(&to) {
            return None;
        }
        if from == to {
            return Some(Path {
                vertices: vec![from],
                edges: Vec::new(),
            });
        }
        let edges = bfs_path(&self.edges, from, to)?;
        let mut vertices = vec![from];
        let mut at = from;
        for e in &edges {
            at = e.other_end(at);
            vertices.push(at);
        }
        Some(Path {
            vertices,
            edges: edges.iter().map(|e| e.relation).collect(),
        })
    }

    /// Precomputes the first edge of the path between every pair of
    /// vertices. Only meaningful on a forest.
    pub fn hop_table(&self, alphabet_len: usize) -> HopTable {
        let adj = self.adjacency();
        let mut hops = vec![None; alphabet_len * alphabet_len];
        for &target in &self.vertices {
            // BFS outward from the target; each reached vertex records the
            // edge leading back towards it.
            let mut queue = VecDeque::from([target]);
            let mut seen = BTreeSet::from([target]);
            while let Some(v) = queue.pop_front() {
                for e in adj.get(&v).into_iter().flatten() {
                    let w = e.other_end(v);
                    if seen.insert(w) {
                        hops[w.index() * alphabet_len + target.index()] = Some(e.relation);
                        queue.push_back(w);
                    }
                }
            }
        }
        HopTable { n: alphabet_len, hops }
    }
}

/// First edges of all forest paths, keyed by (from, to).
#[derive(Debug, Clone)]
pub struct HopTable {
    n: usize,
    hops: Vec<Option<RelationId>>,
}

impl HopTable {
    pub fn first_edge(&self, from: Letter, to: Letter) -> Option<RelationId> {
        if from.index() >= self.n || to.index() >= self.n {
            return None;
        }
        self.hops[from.index() * self.n + to.index()]
    }
}

fn bfs_path(edges: &[Edge], from: Letter, to: Letter) -> Option<Vec<Edge>> {
    let mut prev: BTreeMap<Letter, Edge> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = BTreeSet::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = Vec::new();
            let mut at = to;
            while at != from {
                let e = prev[&at];
                path.push(e);
                at = e.other_end(at);
            }
            path.reverse();
            return Some(path);
        }
        for e in edges.iter().filter(|e| e.a == v || e.b == v) {
            let w = e.other_end(v);
            if seen.insert(w) {
                prev.insert(w, *e);
                queue.push_back(w);
            }
        }
    }
    None
}

/// Checks both side graphs, left first.
pub fn check_cycle_free(p: &Presentation) -> Result<(), CycleWitness> {
    for side in [GraphSide::Left, GraphSide::Right] {
        if let Some(w) = SideGraph::build(p, side).find_cycle() {
            return Err(w);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    fn l(p: &Presentation, t: &str) -> Letter {
        p.alphabet().get(t).unwrap()
    }

    #[test]
    fn single_relation_graphs() {
        let p1 = pres("generators: a b c\nrelation: a b = b c");
        let left = SideGraph::build(&p1, GraphSide::Left);
        assert_eq!(left.vertices, BTreeSet::from([l(&p1, "a"), l(&p1, "b")]));
        assert_eq!(
            left.edges,
            vec![Edge {
                a: l(&p1, "a"),
                b: l(&p1, "b"),
                relation: RelationId(0)
            }]
        );
        let right = SideGraph::build(&p1, GraphSide::Right);
        assert_eq!(right.vertices, BTreeSet::from([l(&p1, "b"), l(&p1, "c")]));
        assert_eq!((right.edges[0].a, right.edges[0].b), (l(&p1, "b"), l(&p1, "c")));

        let p2 = pres("generators: a b\nrelation: a b = b a a");
        let right = SideGraph::build(&p2, GraphSide::Right);
        assert_eq!((right.edges[0].a, right.edges[0].b), (l(&p2, "b"), l(&p2, "a")));
    }

    #[test]
    fn cycle_free_fixtures() {
        let loop_p = pres("generators: a b\nrelation: a b a = a b");
        let w = check_cycle_free(&loop_p).unwrap_err();
        assert_eq!((w.side, w.kind), (GraphSide::Left, CycleKind::Loop));
        assert_eq!(w.edges[0].a, l(&loop_p, "a"));

        let par = pres("generators: a b\nrelation: a b = b a\nrelation: a a = b b");
        let w = check_cycle_free(&par).unwrap_err();
        assert_eq!((w.side, w.kind), (GraphSide::Left, CycleKind::ParallelEdges));
        assert_eq!(
            w.edges.iter().map(|e| e.relation).collect::<Vec<_>>(),
            [RelationId(0), RelationId(1)]
        );

        assert!(check_cycle_free(&pres("generators: a b c\nrelation: a b = b c")).is_ok());
        assert!(check_cycle_free(&pres("generators: a b c\nrelation: a b = b a\nrelation: a c = c a")).is_ok());
    }

    #[test]
    fn triangle_is_a_cycle() {
        let p = pres("generators: a b c\nrelation: a a = b b\nrelation: b a = c c\nrelation: c b = a c");
        let w = check_cycle_free(&p).unwrap_err();
        assert_eq!(w.kind, CycleKind::Cycle);
        assert_eq!(w.edges.len(), 3);
        assert_eq!(w.edges[0].relation, RelationId(2));
    }

    #[test]
    fn right_graph_checked_when_left_is_fine() {
        // left: a-b; right: b-b loop
        let p = pres("generators: a b\nrelation: a b = b b");
        let w = check_cycle_free(&p).unwrap_err();
        assert_eq!((w.side, w.kind), (GraphSide::Right, CycleKind::Loop));
    }

    #[test]
    fn paths_in_forest() {
        let p1 = pres("generators: a b c\nrelation: a b = b c");
        let left = SideGraph::build(&p1, GraphSide::Left);
        let path = left.unique_path(l(&p1, "a"), l(&p1, "b")).unwrap();
        assert_eq!(path.edges, [RelationId(0)]);
        assert_eq!(path.vertices, [l(&p1, "a"), l(&p1, "b")]);
        assert_eq!(left.unique_path(l(&p1, "c"), l(&p1, "b")), None);
        assert!(left.unique_path(l(&p1, "a"), l(&p1, "a")).unwrap().is_empty());

        let star = pres("generators: a b c\nrelation: a b = b a\nrelation: a c = c a");
        let left = SideGraph::build(&star, GraphSide::Left);
        let path = left.unique_path(l(&star, "b"), l(&star, "c")).unwrap();
        assert_eq!(path.vertices, [l(&star, "b"), l(&star, "a"), l(&star, "c")]);
        assert_eq!(path.edges, [RelationId(0), RelationId(1)]);

        let hops = left.hop_table(3);
        assert_eq!(hops.first_edge(l(&star, "b"), l(&star, "c")), Some(RelationId(0)));
        assert_eq!(hops.first_edge(l(&star, "c"), l(&star, "b")), Some(RelationId(1)));
        assert_eq!(hops.first_edge(l(&star, "a"), l(&star, "a")), None);
    }

    #[test]
    fn disconnected_trees_have_no_path() {
        let p = pres("generators: a b c d\nrelation: a b = b a\nrelation: c d = d c");
        let left = SideGraph::build(&p, GraphSide::Left);
        assert_eq!(left.unique_path(l(&p, "a"), l(&p, "c")), None);
        assert_eq!(left.hop_table(4).first_edge(l(&p, "a"), l(&p, "c")), None);
    }
}
