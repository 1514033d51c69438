//! Generalized Reidemeister moves as local rewrites of the plane graph.
//!
//! Curl and bigon moves come in an inserting direction (`Apply`) and a removing
//! one (`Inverse`); triangle moves are their own inverse. Moves that would touch
//! the outer face or disconnect the vertex graph are not offered.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{port_of, slot, vertex_of, Diagram, DiagramError, OverPair, Slot, VertexKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    /// Classical curl.
    A1,
    /// Classical bigon.
    A2,
    /// Classical triangle.
    A3,
    /// Virtual curl.
    B1,
    /// Virtual bigon.
    B2,
    /// Virtual triangle.
    B3,
    /// Triangle with one classical and two virtual crossings.
    C,
    /// Flat curl.
    F1,
    /// Flat bigon.
    F2,
    /// Flat triangle.
    F3,
    /// Triangle with one flat and two virtual crossings.
    FC,
    /// A rigid vertex sliding past a strand that crosses its two branches the same way.
    RigidSlide,
}

impl MoveKind {
    /// Curl moves change the framing; everything else is a regular move.
    pub fn is_regular(self) -> bool {
        !matches!(self, MoveKind::A1 | MoveKind::B1 | MoveKind::F1)
    }

    pub const ALL: [MoveKind; 12] = [
        MoveKind::A1,
        MoveKind::A2,
        MoveKind::A3,
        MoveKind::B1,
        MoveKind::B2,
        MoveKind::B3,
        MoveKind::C,
        MoveKind::F1,
        MoveKind::F2,
        MoveKind::F3,
        MoveKind::FC,
        MoveKind::RigidSlide,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Apply,
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Site {
    /// A curl added to the edge of `dart`, on its left or right. For classical
    /// curls `over` says whether the first pass through the new crossing is over.
    Edge { dart: Slot, left: bool, over: bool },
    /// A curl added to a free circle of a diagram without vertices.
    Circle { left: bool, over: bool },
    /// The vertex of a curl to remove.
    Vertex(usize),
    /// A dart on the face a bigon or triangle move acts on.
    Face(Slot),
    /// The edge of dart `b` is pushed across the edge of dart `a` (both on one
    /// face). `over` says whether `a`'s strand passes over at the new crossings.
    DartPair { a: Slot, b: Slot, over: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveSpec {
    pub kind: MoveKind,
    pub site: Site,
    pub direction: Direction,
}

fn mismatch(msg: impl Into<String>) -> DiagramError {
    DiagramError::PatternMismatch(msg.into())
}

fn family(kind: VertexKind) -> Option<MoveKind> {
    match kind {
        VertexKind::Classical(_) => Some(MoveKind::A1),
        VertexKind::Virtual => Some(MoveKind::B1),
        VertexKind::Flat => Some(MoveKind::F1),
        _ => None,
    }
}

fn curl_kind(kind: MoveKind, over: bool) -> Result<VertexKind, DiagramError> {
    match kind {
        MoveKind::A1 => Ok(VertexKind::Classical(if over { OverPair::Even } else { OverPair::Odd })),
        MoveKind::B1 => Ok(VertexKind::Virtual),
        MoveKind::F1 => Ok(VertexKind::Flat),
        _ => Err(mismatch(format!("{kind:?} is not a curl move"))),
    }
}

fn bigon_kind(kind: MoveKind, over: bool) -> Result<VertexKind, DiagramError> {
    match kind {
        MoveKind::A2 => Ok(VertexKind::Classical(if over { OverPair::Even } else { OverPair::Odd })),
        MoveKind::B2 => Ok(VertexKind::Virtual),
        MoveKind::F2 => Ok(VertexKind::Flat),
        _ => Err(mismatch(format!("{kind:?} is not a bigon move"))),
    }
}

/// Applies a move, returning the rewritten diagram.
pub fn apply_move(d: &Diagram, m: &MoveSpec) -> Result<Diagram, DiagramError> {
    let mut e = d.clone();
    match (m.site, m.direction) {
        (Site::Edge { dart, left, over }, Direction::Apply) => insert_curl(&mut e, dart, left, curl_kind(m.kind, over)?)?,
        (Site::Circle { left, over }, Direction::Apply) => circle_curl(&mut e, left, curl_kind(m.kind, over)?)?,
        (Site::Vertex(v), Direction::Inverse) => remove_curl(&mut e, v, m.kind)?,
        (Site::DartPair { a, b, over }, Direction::Apply) => insert_bigon(&mut e, a, b, bigon_kind(m.kind, over)?)?,
        (Site::Face(f), Direction::Inverse) => remove_bigon(&mut e, f, m.kind)?,
        (Site::Face(f), Direction::Apply) => triangle(&mut e, f, m.kind)?,
        _ => return Err(mismatch("site does not fit the move direction")),
    }
    e.validate()?;
    debug_assert_eq!(e.components(), d.components());
    Ok(e)
}

fn check_slot(d: &Diagram, s: Slot) -> Result<(), DiagramError> {
    if s >= d.link.len() {
        Err(mismatch(format!("slot {s} does not exist")))
    } else {
        Ok(())
    }
}

fn insert_curl(d: &mut Diagram, dart: Slot, left: bool, kind: VertexKind) -> Result<(), DiagramError> {
    check_slot(d, dart)?;
    let (x, y) = (dart, d.link[dart]);
    let forward = d.out[dart];
    let v = d.add_vertex(kind);
    let pin = if left { 3 } else { 1 };
    if forward {
        d.connect(x, slot(v, 0));
        d.connect(slot(v, 2), slot(v, pin));
        d.connect(slot(v, pin + 2), y);
    } else {
        d.connect(slot(v, 0), x);
        d.connect(slot(v, pin), slot(v, 2));
        d.connect(y, slot(v, pin + 2));
    }
    Ok(())
}

fn circle_curl(d: &mut Diagram, left: bool, kind: VertexKind) -> Result<(), DiagramError> {
    if !d.kinds.is_empty() || d.circles == 0 {
        return Err(mismatch("a circle curl needs a diagram made of free circles"));
    }
    d.circles -= 1;
    let v = d.add_vertex(kind);
    let pin = if left { 3 } else { 1 };
    d.connect(slot(v, 2), slot(v, pin));
    d.connect(slot(v, pin + 2), slot(v, 0));
    d.outer = d.faces().into_iter().find(|f| f.len() == 2).map(|f| f[0]);
    Ok(())
}

/// Darts of the outer face not at the given vertices, in face order from the outer dart.
fn surviving_outer(d: &Diagram, gone: &[usize]) -> Vec<Slot> {
    match d.outer {
        Some(o) => d.face_of(o).into_iter().filter(|s| !gone.contains(&vertex_of(*s))).collect(),
        None => vec![],
    }
}

fn monogon_at(d: &Diagram, v: usize) -> Option<Slot> {
    (0..4).map(|q| slot(v, q)).find(|&s| d.link[s] == slot(v, port_of(s) + 1) && d.outer != Some(s))
}

fn remove_curl(d: &mut Diagram, v: usize, kind: MoveKind) -> Result<(), DiagramError> {
    if v >= d.kinds.len() {
        return Err(mismatch(format!("vertex {v} does not exist")));
    }
    if family(d.kinds[v]) != Some(kind) {
        return Err(mismatch(format!("vertex {v} is not a {kind:?} crossing")));
    }
    if monogon_at(d, v).is_none() {
        return Err(mismatch(format!("vertex {v} has no inner curl")));
    }
    let hint = surviving_outer(d, &[v]);
    d.splice_out(v);
    finish_removal(d, &hint)
}

fn finish_removal(d: &mut Diagram, hint: &[Slot]) -> Result<(), DiagramError> {
    d.compact(hint);
    if !d.kinds.is_empty() && d.outer.is_none() {
        return Err(mismatch("the outer face would be lost"));
    }
    if !d.is_connected() {
        return Err(DiagramError::Disconnected);
    }
    Ok(())
}

fn over_at(d: &Diagram, s: Slot) -> Option<bool> {
    match d.kinds[vertex_of(s)] {
        VertexKind::Classical(o) => Some(o.contains(port_of(s))),
        _ => None,
    }
}

fn remove_bigon(d: &mut Diagram, f: Slot, kind: MoveKind) -> Result<(), DiagramError> {
    check_slot(d, f)?;
    let face = d.face_of(f);
    if face.len() != 2 {
        return Err(mismatch("face is not a bigon"));
    }
    if d.outer.is_some_and(|o| face.contains(&o)) {
        return Err(mismatch("the bigon is the outer face"));
    }
    let (a, b) = (face[0], face[1]);
    let (x, y) = (vertex_of(a), vertex_of(b));
    if x == y {
        return Err(mismatch("bigon with a repeated vertex"));
    }
    let ok = match kind {
        MoveKind::A2 => match (over_at(d, a), over_at(d, d.link[a])) {
            (Some(p), Some(q)) => p == q,
            _ => false,
        },
        MoveKind::B2 => d.kinds[x] == VertexKind::Virtual && d.kinds[y] == VertexKind::Virtual,
        MoveKind::F2 => d.kinds[x] == VertexKind::Flat && d.kinds[y] == VertexKind::Flat,
        _ => false,
    };
    if !ok {
        return Err(mismatch(format!("bigon does not fit {kind:?}")));
    }
    let hint = surviving_outer(d, &[x, y]);
    d.splice_out(x);
    d.splice_out(y);
    finish_removal(d, &hint)
}

fn insert_bigon(d: &mut Diagram, a: Slot, b: Slot, kind: VertexKind) -> Result<(), DiagramError> {
    check_slot(d, a)?;
    check_slot(d, b)?;
    if b == a || b == d.link[a] || !d.face_of(a).contains(&b) {
        return Err(mismatch("darts must be distinct edges of one face"));
    }
    let (x, y, p, q) = (a, d.link[a], b, d.link[b]);
    let (fa, fb) = (d.out[a], d.out[b]);
    // ports: 0 east, 1 north, 2 west, 3 south; a's strand runs west to east
    let l = d.add_vertex(kind);
    let r = d.add_vertex(kind);
    if fa {
        d.connect(x, slot(l, 2));
        d.connect(slot(l, 0), slot(r, 2));
        d.connect(slot(r, 0), y);
    } else {
        d.connect(slot(l, 2), x);
        d.connect(slot(r, 2), slot(l, 0));
        d.connect(y, slot(r, 0));
    }
    if fb {
        d.connect(p, slot(r, 1));
        d.connect(slot(r, 3), slot(l, 3));
        d.connect(slot(l, 1), q);
    } else {
        d.connect(slot(r, 1), p);
        d.connect(slot(l, 3), slot(r, 3));
        d.connect(q, slot(l, 1));
    }
    Ok(())
}

/// Which triangle move a 3-face admits, given its darts.
fn classify_triangle(d: &Diagram, face: &[Slot]) -> Option<MoveKind> {
    let verts: Vec<usize> = face.iter().map(|&s| vertex_of(s)).collect();
    let kinds: Vec<VertexKind> = verts.iter().map(|&v| d.kinds[v]).collect();
    let count = |pred: &dyn Fn(VertexKind) -> bool| kinds.iter().filter(|k| pred(**k)).count();
    let classical = count(&|k| matches!(k, VertexKind::Classical(_)));
    let virt = count(&|k| k == VertexKind::Virtual);
    let flat = count(&|k| k == VertexKind::Flat);
    let node = count(&|k| k == VertexKind::Node);
    // strand i runs along the edge leaving face[i]
    let same_level = |i: usize| -> Option<bool> {
        let s = face[i];
        Some(over_at(d, s)? == over_at(d, d.link[s])?)
    };
    let over_over = |i: usize| over_at(d, face[i]) == Some(true) && over_at(d, d.link[face[i]]) == Some(true);
    match (classical, virt, flat, node) {
        (3, 0, 0, 0) if (0..3).any(over_over) => Some(MoveKind::A3),
        (0, 3, 0, 0) => Some(MoveKind::B3),
        (1, 2, 0, 0) => Some(MoveKind::C),
        (0, 0, 3, 0) => Some(MoveKind::F3),
        (0, 2, 1, 0) => Some(MoveKind::FC),
        (0, 2, 0, 1) => Some(MoveKind::RigidSlide),
        (2, 0, 0, 1) => {
            let i = (0..3).find(|&i| kinds[i] != VertexKind::Node && kinds[(i + 1) % 3] != VertexKind::Node)?;
            same_level(i).filter(|&b| b).map(|_| MoveKind::RigidSlide)
        }
        _ => None,
    }
}

fn triangle(d: &mut Diagram, f: Slot, kind: MoveKind) -> Result<(), DiagramError> {
    check_slot(d, f)?;
    let face = d.face_of(f);
    if face.len() != 3 {
        return Err(mismatch("face is not a triangle"));
    }
    if d.outer.is_some_and(|o| face.contains(&o)) {
        return Err(mismatch("the triangle is the outer face"));
    }
    let verts: BTreeSet<usize> = face.iter().map(|&s| vertex_of(s)).collect();
    if verts.len() != 3 {
        return Err(mismatch("triangle with a repeated vertex"));
    }
    if classify_triangle(d, &face) != Some(kind) {
        return Err(mismatch(format!("triangle does not fit {kind:?}")));
    }
    let mut rewires = Vec::new();
    for &s in &face {
        let t = d.link[s];
        let (ea, eb) = (slot(vertex_of(s), port_of(s) + 2), slot(vertex_of(t), port_of(t) + 2));
        let (oa, ob) = (d.link[ea], d.link[eb]);
        if verts.contains(&vertex_of(oa)) || verts.contains(&vertex_of(ob)) {
            return Err(mismatch("triangle vertices are adjacent outside the face"));
        }
        rewires.push([(s, ob), (t, oa), (ea, eb)]);
    }
    let verts_vec: Vec<usize> = verts.iter().copied().collect();
    let hint = surviving_outer(d, &verts_vec);
    if !d.kinds.is_empty() && hint.is_empty() {
        return Err(mismatch("the outer face would be lost"));
    }
    for pairs in rewires {
        for (u, w) in pairs {
            d.link[u] = w;
            d.link[w] = u;
        }
    }
    d.outer = hint.first().copied();
    Ok(())
}

/// Which move families make sense for a diagram: flat moves for diagrams with
/// flat crossings, classical ones otherwise.
fn uses_flat(d: &Diagram) -> bool {
    d.kinds.contains(&VertexKind::Flat)
}

/// Every applicable move, in a deterministic order.
pub fn enumerate_moves(d: &Diagram) -> Vec<MoveSpec> {
    let flat = uses_flat(d);
    let curls: &[MoveKind] = if flat { &[MoveKind::F1, MoveKind::B1] } else { &[MoveKind::A1, MoveKind::B1] };
    let bigons: &[MoveKind] = if flat { &[MoveKind::F2, MoveKind::B2] } else { &[MoveKind::A2, MoveKind::B2] };
    let variants = |k: MoveKind| -> &'static [bool] {
        if matches!(k, MoveKind::A1 | MoveKind::A2) {
            &[true, false]
        } else {
            &[true]
        }
    };
    let mut moves = Vec::new();
    let push = |moves: &mut Vec<MoveSpec>, kind, site, direction| moves.push(MoveSpec { kind, site, direction });
    if d.kinds.is_empty() && d.circles > 0 {
        for &k in curls {
            for left in [false, true] {
                for &over in variants(k) {
                    push(&mut moves, k, Site::Circle { left, over }, Direction::Apply);
                }
            }
        }
    }
    for dart in (0..d.link.len()).filter(|&s| d.out[s]) {
        for &k in curls {
            for left in [false, true] {
                for &over in variants(k) {
                    push(&mut moves, k, Site::Edge { dart, left, over }, Direction::Apply);
                }
            }
        }
    }
    let faces = d.faces();
    for face in &faces {
        for (i, &a) in face.iter().enumerate() {
            for &b in &face[i + 1..] {
                if b == d.link[a] {
                    continue;
                }
                for &k in bigons {
                    for &over in variants(k) {
                        push(&mut moves, k, Site::DartPair { a, b, over }, Direction::Apply);
                    }
                }
            }
        }
    }
    let mut candidates = Vec::new();
    for v in 0..d.kinds.len() {
        if let Some(k) = family(d.kinds[v]) {
            if monogon_at(d, v).is_some() {
                candidates.push(MoveSpec { kind: k, site: Site::Vertex(v), direction: Direction::Inverse });
            }
        }
    }
    for face in &faces {
        match face.len() {
            2 => {
                for &k in bigons {
                    candidates.push(MoveSpec { kind: k, site: Site::Face(face[0]), direction: Direction::Inverse });
                }
            }
            3 => {
                if let Some(k) = classify_triangle(d, face) {
                    candidates.push(MoveSpec { kind: k, site: Site::Face(face[0]), direction: Direction::Apply });
                }
            }
            _ => {}
        }
    }
    moves.extend(candidates.into_iter().filter(|m| apply_move(d, m).is_ok()));
    moves
}

/// Moves that shrink or rearrange the diagram without adding vertices.
pub fn enumerate_reductions(d: &Diagram) -> Vec<MoveSpec> {
    enumerate_moves(d)
        .into_iter()
        .filter(|m| !matches!(m.site, Site::Edge { .. } | Site::Circle { .. } | Site::DartPair { .. }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::SignedGaussCode;
    use crate::diagram::gauss::{from_gauss, to_gauss};

    fn diagram(code: &str) -> Diagram {
        from_gauss(&SignedGaussCode::parse(code).unwrap()).unwrap()
    }

    #[test]
    fn circle_offers_only_curls() {
        let moves = enumerate_moves(&Diagram::circle());
        assert!(!moves.is_empty());
        assert!(moves.iter().all(|m| matches!(m.kind, MoveKind::A1 | MoveKind::B1)));
        for m in &moves {
            let d = apply_move(&Diagram::circle(), m).unwrap();
            assert_eq!(d.num_vertices(), 1);
            assert_eq!(d.components(), 1);
        }
    }

    #[test]
    fn curl_insert_and_remove() {
        let t = diagram("O1+U2+O3+U1+O2+U3+");
        for m in enumerate_moves(&t).into_iter().filter(|m| m.kind == MoveKind::A1) {
            let e = apply_move(&t, &m).unwrap();
            assert_eq!(e.num_vertices(), 4);
            assert_eq!((e.writhe() - t.writhe()).abs(), 1);
            let back: Vec<_> = enumerate_reductions(&e).into_iter().filter(|r| r.kind == MoveKind::A1).collect();
            assert!(!back.is_empty());
            let r = apply_move(&e, &back[0]).unwrap();
            assert_eq!(to_gauss(&r).unwrap(), to_gauss(&t).unwrap());
        }
    }

    #[test]
    fn virtual_moves_keep_the_code() {
        let g = diagram("O1+U2+O3-U1+O2+U3-");
        let code = to_gauss(&g).unwrap();
        for m in enumerate_moves(&g) {
            if matches!(m.kind, MoveKind::B1 | MoveKind::B2 | MoveKind::B3 | MoveKind::C) {
                let e = apply_move(&g, &m).unwrap();
                assert_eq!(to_gauss(&e).unwrap(), code, "{m:?}");
            }
        }
    }

    #[test]
    fn bigon_round_trip() {
        let t = diagram("O1+U2+O3+U1+O2+U3+");
        let m = enumerate_moves(&t).into_iter().find(|m| m.kind == MoveKind::A2).unwrap();
        let e = apply_move(&t, &m).unwrap();
        assert_eq!(e.classical_count(), 5);
        assert_eq!(e.writhe(), t.writhe());
        let r = enumerate_reductions(&e).into_iter().find(|m| m.kind == MoveKind::A2).unwrap();
        let back = apply_move(&e, &r).unwrap();
        assert_eq!(back.classical_count(), 3);
    }

    #[test]
    fn triangle_moves_are_involutions() {
        let t = diagram("O1+U2+O3+U1+O2+U3+");
        let mut d = t.clone();
        // Build some triangles by random-ish insertions and check the triangle rewrite twice.
        for m in enumerate_moves(&t).into_iter().filter(|m| m.kind == MoveKind::B2).take(20) {
            d = apply_move(&t, &m).unwrap();
            for tri in enumerate_moves(&d).into_iter().filter(|m| matches!(m.kind, MoveKind::C | MoveKind::B3)) {
                let once = apply_move(&d, &tri).unwrap();
                let Site::Face(_) = tri.site else { unreachable!() };
                let again: Vec<_> = enumerate_moves(&once).into_iter().filter(|m| m.kind == tri.kind).collect();
                assert!(again.iter().any(|m2| apply_move(&once, m2).map(|x| x.num_vertices()) == Ok(d.num_vertices())));
            }
        }
        assert!(d.num_vertices() >= 3);
    }
}
