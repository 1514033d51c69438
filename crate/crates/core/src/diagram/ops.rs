//! Global operations on diagrams: mirror images, overturning, sums and tangles.

use super::{port_of, slot, vertex_of, Diagram, DiagramError, Join, Slot, VertexKind, UNLINKED};
use crate::codes::SignedGaussCode;

/// Switches every classical crossing.
pub fn mirror(d: &Diagram) -> Diagram {
    let mut e = d.clone();
    for k in e.kinds.iter_mut() {
        if let VertexKind::Classical(o) = k {
            *o = o.other();
        }
    }
    e
}

/// Turns the diagram over: the plane is reflected and every crossing switched,
/// so crossing signs are kept.
pub fn flip(d: &Diagram) -> Diagram {
    let map = |s: Slot| slot(vertex_of(s), (4 - port_of(s)) % 4);
    let mut e = d.clone();
    for s in 0..d.link.len() {
        e.link[map(s)] = map(d.link[s]);
        e.out[map(s)] = d.out[s];
    }
    for k in e.kinds.iter_mut() {
        *k = match *k {
            VertexKind::Classical(o) => VertexKind::Classical(o.other()),
            VertexKind::Smoothing(Join::Next) => VertexKind::Smoothing(Join::Prev),
            VertexKind::Smoothing(Join::Prev) => VertexKind::Smoothing(Join::Next),
            other => other,
        };
    }
    e.outer = d.outer.map(|o| map(d.link[o]));
    e
}

/// A diagram with one edge marked as the place where it was cut open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tangle {
    pub closure: Diagram,
    /// Out-slot of the closing edge.
    pub cut: Slot,
}

impl Tangle {
    /// The trivial tangle: a single arc.
    pub fn arc() -> Tangle {
        Tangle { closure: Diagram::circle(), cut: UNLINKED }
    }
}

/// Cuts the edge leaving `a1` in `d1` and the edge leaving `a2` in `d2` and
/// joins the ends crosswise. For a diagram without vertices the arc is a free circle.
pub fn connected_sum(d1: &Diagram, a1: Slot, d2: &Diagram, a2: Slot) -> Result<Diagram, DiagramError> {
    if d2.kinds.is_empty() {
        if d2.circles == 0 {
            return Err(DiagramError::Invalid("the second diagram is empty".into()));
        }
        let mut e = d1.clone();
        e.circles += d2.circles - 1;
        return Ok(e);
    }
    if d1.kinds.is_empty() {
        if d1.circles == 0 {
            return Err(DiagramError::Invalid("the first diagram is empty".into()));
        }
        let mut e = d2.clone();
        e.circles += d1.circles - 1;
        return Ok(e);
    }
    for (d, a) in [(d1, a1), (d2, a2)] {
        if a >= d.link.len() {
            return Err(DiagramError::Invalid(format!("slot {a} does not exist")));
        }
        if !d.out[a] {
            return Err(DiagramError::Orientation(format!("slot {a} is not the tail of its edge")));
        }
    }
    let offset = d1.link.len();
    let mut e = d1.clone();
    e.circles += d2.circles;
    for &k in &d2.kinds {
        e.add_vertex(k);
    }
    for s in 0..d2.link.len() {
        e.link[offset + s] = offset + d2.link[s];
        e.out[offset + s] = d2.out[s];
    }
    let (h1, h2) = (d1.link[a1], offset + d2.link[a2]);
    e.connect(a1, h2);
    e.connect(offset + a2, h1);
    e.validate()?;
    Ok(e)
}

/// Replaces the arc leaving `arc` by the tangle.
pub fn insert_tangle(d: &Diagram, arc: Slot, t: &Tangle) -> Result<Diagram, DiagramError> {
    connected_sum(d, arc, &t.closure, t.cut)
}

/// The virtual-free diagram with the same code, when one exists.
pub fn classicalize(d: &Diagram) -> Result<Option<Diagram>, DiagramError> {
    if d.kinds.is_empty() {
        return Ok(Some(d.clone()));
    }
    let code: SignedGaussCode = super::gauss::to_gauss(d)?;
    if code.components.len() != 1 {
        return Err(DiagramError::Code(crate::codes::CodeError::NotSingleComponent(code.components.len())));
    }
    Ok(super::gauss::classical_realization(&code))
}

/// A classical crossing whose two strands both cross virtually just before and
/// just after it: `(virtual, port on the virtual facing x, x, virtual)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlankedCrossing {
    pub crossing: usize,
    pub before: usize,
    pub after: usize,
}

/// If vertex `v` is virtual and joined to `x` by two edges at consecutive ports,
/// returns the port `u` of `v` such that ports `u` and `u + 1` face `x`.
fn bigon_port(d: &Diagram, v: usize, x: usize) -> Option<usize> {
    if d.kinds[v] != VertexKind::Virtual || v == x {
        return None;
    }
    (0..4).find(|&u| {
        let (a, b) = (d.link[slot(v, u)], d.link[slot(v, u + 1)]);
        vertex_of(a) == x && vertex_of(b) == x && d.link[slot(v, u + 1)] == slot(x, port_of(a) + 3)
    })
}

pub fn find_flanked_crossings(d: &Diagram) -> Vec<FlankedCrossing> {
    let mut found = Vec::new();
    for x in 0..d.kinds.len() {
        if !matches!(d.kinds[x], VertexKind::Classical(_)) {
            continue;
        }
        // a virtual vertex sitting on ports w and w + 1 of x
        let side = |w: usize| {
            let v = vertex_of(d.link[slot(x, w)]);
            (vertex_of(d.link[slot(x, w + 1)]) == v && bigon_port(d, v, x).is_some()).then_some(v)
        };
        for w in 0..2 {
            if let (Some(v1), Some(v2)) = (side(w), side(w + 2)) {
                if v1 != v2 {
                    found.push(FlankedCrossing { crossing: x, before: v1, after: v2 });
                    break;
                }
            }
        }
    }
    found
}

/// Uncrosses the two virtual crossings flanking a classical crossing, keeping the
/// classical crossing itself. The bracket is unchanged.
pub fn remove_flanked_virtuals(d: &Diagram) -> Result<Diagram, DiagramError> {
    let f = *find_flanked_crossings(d)
        .first()
        .ok_or_else(|| DiagramError::PatternMismatch("no classical crossing is flanked by virtual crossings".into()))?;
    remove_flanked_at(d, f)
}

pub fn remove_flanked_at(d: &Diagram, f: FlankedCrossing) -> Result<Diagram, DiagramError> {
    let mut e = d.clone();
    let x = f.crossing;
    let mut pairs = Vec::new();
    for v in [f.before, f.after] {
        let u = bigon_port(d, v, x).ok_or_else(|| DiagramError::PatternMismatch("flanking pattern absent".into()))?;
        let outside = [slot(v, u + 2), slot(v, u + 3)];
        if outside.iter().any(|&s| [f.before, f.after, x].contains(&vertex_of(d.link[s]))) {
            return Err(DiagramError::PatternMismatch("flanking virtuals are joined outside the crossing".into()));
        }
        pairs.push((d.link[slot(v, u + 2)], d.link[slot(v, u + 1)]));
        pairs.push((d.link[slot(v, u + 3)], d.link[slot(v, u)]));
    }
    let hint: Vec<Slot> = match d.outer {
        Some(o) => d.face_of(o).into_iter().filter(|s| ![f.before, f.after].contains(&vertex_of(*s))).collect(),
        None => vec![],
    };
    for v in [f.before, f.after] {
        for p in 0..4 {
            e.link[slot(v, p)] = UNLINKED;
        }
    }
    for (outer_end, xs) in pairs {
        e.link[outer_end] = xs;
        e.link[xs] = outer_end;
        e.out[xs] = !e.out[outer_end];
    }
    e.compact(&hint);
    if e.outer.is_none() {
        return Err(DiagramError::PatternMismatch("the outer face would be lost".into()));
    }
    e.validate()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::gauss::{from_gauss, to_gauss};

    fn diagram(code: &str) -> Diagram {
        from_gauss(&SignedGaussCode::parse(code).unwrap()).unwrap()
    }

    #[test]
    fn mirror_and_flip_are_involutions() {
        for code in ["O1+U2+O3+U1+O2+U3+", "O1+U2+O3-U1+O2+U3-", "O1-U2-O3+U1-O2-U3+"] {
            let d = diagram(code);
            assert_eq!(mirror(&mirror(&d)), d);
            assert_eq!(flip(&flip(&d)), d);
            assert_eq!(mirror(&d).writhe(), -d.writhe());
            flip(&d).validate().unwrap();
        }
    }

    #[test]
    fn flip_keeps_signs_and_switches_crossings() {
        let d = diagram("O1+U2+O3+U1+O2+U3+");
        let code = to_gauss(&flip(&d)).unwrap();
        assert_eq!(code, SignedGaussCode::parse("U1+O2+U3+O1+U2+O3+").unwrap().canonical());
    }

    #[test]
    fn sum_with_unknot_is_identity() {
        let d = diagram("O1+U2+O3+U1+O2+U3+");
        let s = connected_sum(&Diagram::circle(), 0, &d, 0).unwrap();
        assert_eq!(to_gauss(&s).unwrap(), to_gauss(&d).unwrap());
        assert_eq!(insert_tangle(&d, d.edges()[0].0, &Tangle::arc()).unwrap(), d);
    }

    #[test]
    fn sum_of_trefoils() {
        let d = diagram("O1+U2+O3+U1+O2+U3+");
        let a = d.edges()[0].0;
        let s = connected_sum(&d, a, &d, a).unwrap();
        assert_eq!(s.classical_count(), 6);
        assert_eq!(s.components(), 1);
        assert_eq!(s.writhe(), 6);
    }

    #[test]
    fn missing_flank_pattern_is_an_error() {
        let d = diagram("O1+U2+O3+U1+O2+U3+");
        assert!(remove_flanked_virtuals(&d).is_err());
    }
}
