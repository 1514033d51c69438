//! Virtual, flat and rigid-vertex diagrams stored as 4-regular plane graphs.
//!
//! Every vertex has four ports numbered counterclockwise; slot `4v + p` is port
//! `p` of vertex `v`. `link` pairs slots into edges and `out` records which end
//! of an edge the orientation leaves from. Strands pass straight through
//! (`p` to `p + 2`) at every vertex except frozen smoothing sites. The outer face
//! is remembered by a dart: the face on the left of the edge leaving a slot.

pub mod embed;
pub mod gauss;
mod json;
pub mod moves;
pub mod ops;
pub mod rotation;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use json::DiagramJson;

pub type Slot = usize;

pub const UNLINKED: Slot = usize::MAX;

/// Which pair of opposite ports carries the overpass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OverPair {
    /// Ports 0 and 2.
    Even,
    /// Ports 1 and 3.
    Odd,
}

impl OverPair {
    pub fn other(self) -> Self {
        match self {
            OverPair::Even => OverPair::Odd,
            OverPair::Odd => OverPair::Even,
        }
    }

    pub fn contains(self, port: usize) -> bool {
        port.is_multiple_of(2) == (self == OverPair::Even)
    }

    pub fn of_port(port: usize) -> Self {
        if port.is_multiple_of(2) {
            OverPair::Even
        } else {
            OverPair::Odd
        }
    }
}

/// How a frozen smoothing site joins its ports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Join {
    /// 0-1 and 2-3.
    Next,
    /// 0-3 and 1-2.
    Prev,
}

impl Join {
    /// The port joined to `p`.
    pub fn partner(self, p: usize) -> usize {
        match (self, p.is_multiple_of(2)) {
            (Join::Next, true) | (Join::Prev, false) => (p + 1) % 4,
            _ => (p + 3) % 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexKind {
    Classical(OverPair),
    Virtual,
    Flat,
    Node,
    Smoothing(Join),
}

impl VertexKind {
    pub fn is_straight(self) -> bool {
        !matches!(self, VertexKind::Smoothing(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("diagram is not planar: V - E + F = {0}")]
    NotPlanar(i64),
    #[error("the vertex graph is disconnected")]
    Disconnected,
    #[error("unsupported vertex kind for this operation: {0}")]
    Unsupported(&'static str),
    #[error("move does not match the diagram: {0}")]
    PatternMismatch(String),
    #[error("orientation mismatch: {0}")]
    Orientation(String),
    #[error(transparent)]
    Code(#[from] crate::codes::CodeError),
}

impl DiagramError {
    pub fn code(&self) -> &'static str {
        match self {
            DiagramError::Invalid(_) => "invalid_diagram",
            DiagramError::NotPlanar(_) => "not_planar",
            DiagramError::Disconnected => "disconnected",
            DiagramError::Unsupported(_) => "unsupported_vertex",
            DiagramError::PatternMismatch(_) => "pattern_mismatch",
            DiagramError::Orientation(_) => "orientation",
            DiagramError::Code(c) => c.code(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    pub(crate) kinds: Vec<VertexKind>,
    pub(crate) link: Vec<Slot>,
    pub(crate) out: Vec<bool>,
    pub(crate) circles: usize,
    pub(crate) outer: Option<Slot>,
}

#[inline]
pub fn slot(v: usize, p: usize) -> Slot {
    4 * v + (p % 4)
}

#[inline]
pub fn vertex_of(s: Slot) -> usize {
    s / 4
}

#[inline]
pub fn port_of(s: Slot) -> usize {
    s % 4
}

#[inline]
pub fn opposite(s: Slot) -> Slot {
    slot(vertex_of(s), port_of(s) + 2)
}

impl Diagram {
    /// The round unknot.
    pub fn circle() -> Self {
        Self::circles(1)
    }

    /// `n` disjoint round circles.
    pub fn circles(n: usize) -> Self {
        Diagram { kinds: vec![], link: vec![], out: vec![], circles: n, outer: None }
    }

    pub fn num_vertices(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn free_circles(&self) -> usize {
        self.circles
    }

    pub fn partner(&self, s: Slot) -> Slot {
        self.link[s]
    }

    pub fn is_out(&self, s: Slot) -> bool {
        self.out[s]
    }

    pub fn outer_dart(&self) -> Option<Slot> {
        self.outer
    }

    pub fn count(&self, pred: impl Fn(VertexKind) -> bool) -> usize {
        self.kinds.iter().filter(|k| pred(**k)).count()
    }

    pub fn classical_count(&self) -> usize {
        self.count(|k| matches!(k, VertexKind::Classical(_)))
    }

    pub fn virtual_count(&self) -> usize {
        self.count(|k| k == VertexKind::Virtual)
    }

    pub fn node_count(&self) -> usize {
        self.count(|k| k == VertexKind::Node)
    }

    /// Adds an unconnected vertex and returns its index.
    pub(crate) fn add_vertex(&mut self, kind: VertexKind) -> usize {
        self.kinds.push(kind);
        self.link.extend([UNLINKED; 4]);
        self.out.extend([false; 4]);
        self.kinds.len() - 1
    }

    /// Joins two slots with an edge oriented from `tail` to `head`.
    pub(crate) fn connect(&mut self, tail: Slot, head: Slot) {
        self.link[tail] = head;
        self.link[head] = tail;
        self.out[tail] = true;
        self.out[head] = false;
    }

    /// The slot reached by turning left after arriving along the edge from `s`.
    pub fn next_in_face(&self, s: Slot) -> Slot {
        let t = self.link[s];
        slot(vertex_of(t), port_of(t) + 3)
    }

    /// All faces as cyclic dart lists, ordered by their least dart.
    pub fn faces(&self) -> Vec<Vec<Slot>> {
        let mut seen = vec![false; self.link.len()];
        let mut faces = Vec::new();
        for s in 0..self.link.len() {
            if seen[s] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                face.push(d);
                d = self.next_in_face(d);
            }
            faces.push(face);
        }
        faces
    }

    /// Darts bounding the face on the left of `s`.
    pub fn face_of(&self, s: Slot) -> Vec<Slot> {
        let mut face = vec![s];
        let mut d = self.next_in_face(s);
        while d != s {
            face.push(d);
            d = self.next_in_face(d);
        }
        face
    }

    /// Index into [`Diagram::faces`] of the outer face.
    pub fn outer_face_index(&self) -> Option<usize> {
        let o = self.outer?;
        self.faces().iter().position(|f| f.contains(&o))
    }

    /// `V - E + F` of the vertex graph (2 for a connected plane graph).
    pub fn euler_characteristic(&self) -> i64 {
        if self.kinds.is_empty() {
            return 2;
        }
        let v = self.kinds.len() as i64;
        v - 2 * v + self.faces().len() as i64
    }

    pub fn is_connected(&self) -> bool {
        let n = self.kinds.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for p in 0..4 {
                let w = vertex_of(self.link[slot(v, p)]);
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// Checks linkage, orientation, connectivity and the Euler formula.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let n = self.link.len();
        if n != 4 * self.kinds.len() || self.out.len() != n {
            return Err(DiagramError::Invalid("slot arrays have the wrong length".into()));
        }
        for s in 0..n {
            let t = self.link[s];
            if t >= n || t == s || self.link[t] != s {
                return Err(DiagramError::Invalid(format!("slot {s} is not properly linked")));
            }
            if self.out[s] == self.out[t] {
                return Err(DiagramError::Orientation(format!("edge {s}-{t} is not consistently directed")));
            }
        }
        for (v, k) in self.kinds.iter().enumerate() {
            if k.is_straight() {
                for p in 0..2 {
                    if self.out[slot(v, p)] == self.out[slot(v, p + 2)] {
                        return Err(DiagramError::Orientation(format!("strand through vertex {v} reverses")));
                    }
                }
            }
        }
        if !self.is_connected() {
            return Err(DiagramError::Disconnected);
        }
        let chi = self.euler_characteristic();
        if chi != 2 {
            return Err(DiagramError::NotPlanar(chi));
        }
        match self.outer {
            None if !self.kinds.is_empty() => Err(DiagramError::Invalid("missing outer face".into())),
            Some(o) if o >= n => Err(DiagramError::Invalid("outer dart out of range".into())),
            _ => Ok(()),
        }
    }

    /// Where a curve leaving through `s` re-enters a vertex, and the slot it leaves by.
    /// Straight through everywhere except smoothing sites.
    pub fn continue_straight(&self, s: Slot) -> Slot {
        let t = self.link[s];
        match self.kinds[vertex_of(t)] {
            VertexKind::Smoothing(j) => slot(vertex_of(t), j.partner(port_of(t))),
            _ => opposite(t),
        }
    }

    /// Closed walks following strands, each as the list of slots it leaves from.
    /// Walks start from the least unused outgoing slot; at smoothing sites a walk
    /// may continue against the edge orientation.
    pub fn strand_walks(&self) -> Vec<Vec<Slot>> {
        let mut used = vec![false; self.link.len()];
        let mut walks = Vec::new();
        let starts = (0..self.link.len()).filter(|&s| self.out[s]).chain(0..self.link.len());
        for s in starts {
            if used[s] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = s;
            while !used[d] {
                used[d] = true;
                used[self.link[d]] = true;
                walk.push(d);
                d = self.continue_straight(d);
            }
            walks.push(walk);
        }
        walks
    }

    /// Number of link components, free circles included.
    pub fn components(&self) -> usize {
        self.strand_walks().len() + self.circles
    }

    /// Sign of a classical, flat or node vertex from its port orientation. For flat
    /// and node vertices the even pair plays the role of the overpass.
    pub fn crossing_sign(&self, v: usize) -> i8 {
        let over = match self.kinds[v] {
            VertexKind::Classical(o) => o,
            _ => OverPair::Even,
        };
        let base = if over == OverPair::Even { 0 } else { 1 };
        let over_in = if self.out[slot(v, base)] { base + 2 } else { base };
        let under_in = if self.out[slot(v, base + 1)] { (base + 3) % 4 } else { base + 1 };
        if under_in == (over_in + 1) % 4 {
            1
        } else {
            -1
        }
    }

    pub fn writhe(&self) -> i64 {
        (0..self.kinds.len())
            .filter(|&v| matches!(self.kinds[v], VertexKind::Classical(_)))
            .map(|v| self.crossing_sign(v) as i64)
            .sum()
    }

    /// Directed edges as `(tail, head)` slot pairs.
    pub fn edges(&self) -> Vec<(Slot, Slot)> {
        (0..self.link.len()).filter(|&s| self.out[s]).map(|s| (s, self.link[s])).collect()
    }

    /// Removes vertex `v` (which must pass strands straight through) and joins
    /// the strands it carried. A strand that closes up on itself becomes a free circle.
    pub(crate) fn splice_out(&mut self, v: usize) {
        for p in 0..2 {
            let a = self.link[slot(v, p)];
            let b = self.link[slot(v, p + 2)];
            if a == slot(v, p + 2) {
                self.circles += 1;
                continue;
            }
            self.link[a] = b;
            self.link[b] = a;
        }
        for p in 0..4 {
            self.link[slot(v, p)] = UNLINKED;
        }
    }

    /// Drops vertices whose slots are all unlinked, renumbering the rest. `outer_hint`
    /// lists candidate outer darts (old numbering) in preference order.
    pub(crate) fn compact(&mut self, outer_hint: &[Slot]) {
        let n = self.kinds.len();
        let keep: Vec<bool> = (0..n).map(|v| self.link[slot(v, 0)] != UNLINKED).collect();
        let mut new_index = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if keep[v] {
                new_index[v] = next;
                next += 1;
            }
        }
        let map = |s: Slot| slot(new_index[vertex_of(s)], port_of(s));
        let mut kinds = Vec::with_capacity(next);
        let mut link = Vec::with_capacity(4 * next);
        let mut out = Vec::with_capacity(4 * next);
        for v in 0..n {
            if !keep[v] {
                continue;
            }
            kinds.push(self.kinds[v]);
            for p in 0..4 {
                link.push(map(self.link[slot(v, p)]));
                out.push(self.out[slot(v, p)]);
            }
        }
        self.outer = outer_hint.iter().find(|&&s| keep[vertex_of(s)]).map(|&s| map(s));
        self.kinds = kinds;
        self.link = link;
        self.out = out;
        if self.kinds.is_empty() {
            self.outer = None;
        }
    }

    /// The same diagram with vertex `v` of a different kind.
    pub fn with_kind(&self, v: usize, kind: VertexKind) -> Diagram {
        let mut d = self.clone();
        d.kinds[v] = kind;
        d
    }

    /// Reverses the orientation of every strand.
    pub fn reversed(&self) -> Diagram {
        let mut d = self.clone();
        for o in d.out.iter_mut() {
            *o = !*o;
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One-crossing curl: the strand enters port 0, loops from 2 back into 1, leaves by 3.
    pub(crate) fn curl(kind: VertexKind) -> Diagram {
        let mut d = Diagram::circles(0);
        let v = d.add_vertex(kind);
        d.connect(slot(v, 2), slot(v, 1));
        d.connect(slot(v, 3), slot(v, 0));
        d.outer = Some(slot(v, 0));
        d
    }

    #[test]
    fn curl_is_planar() {
        let d = curl(VertexKind::Classical(OverPair::Even));
        d.validate().unwrap();
        assert_eq!(d.faces().len(), 3);
        assert_eq!(d.components(), 1);
    }

    #[test]
    fn splice_out_curl_gives_circle() {
        let mut d = curl(VertexKind::Virtual);
        d.splice_out(0);
        d.compact(&[]);
        assert_eq!(d, Diagram::circle());
    }

    #[test]
    fn join_partners() {
        assert_eq!(Join::Next.partner(0), 1);
        assert_eq!(Join::Next.partner(3), 2);
        assert_eq!(Join::Prev.partner(0), 3);
        assert_eq!(Join::Prev.partner(1), 2);
    }
}
