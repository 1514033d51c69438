//! Rotation (Whitney) numbers of closed curves drawn on a diagram.
//!
//! Turning is counted in quarter turns. Each corner of a 4-valent vertex
//! contributes a quarter turn, so a consistent drawing assigns every directed
//! edge an integer amount of turning with the sum around an inner face equal to
//! `4 - corners` and around the outer face `-4 - corners`. Any solution gives the
//! same total on closed curves, since two solutions differ by a coboundary.

use std::collections::{HashMap, VecDeque};

use super::{port_of, slot, vertex_of, Diagram, DiagramError, Slot, VertexKind};

/// Turning of each directed edge, indexed by the slot it leaves from.
#[derive(Clone, Debug)]
pub struct AngleSystem {
    tau: Vec<i64>,
}

/// A closed curve given by the slots it leaves vertices from, in order.
pub type ClosedCurve = Vec<Slot>;

impl AngleSystem {
    pub fn new(d: &Diagram) -> AngleSystem {
        let n = d.link.len();
        let mut tau = vec![0i64; n];
        if n == 0 {
            return AngleSystem { tau };
        }
        let faces = d.faces();
        let mut face_of = vec![0usize; n];
        for (i, f) in faces.iter().enumerate() {
            for &s in f {
                face_of[s] = i;
            }
        }
        let outer = d.outer.map(|o| face_of[o]).unwrap_or(0);
        let target: Vec<i64> = faces
            .iter()
            .enumerate()
            .map(|(i, f)| if i == outer { -4 - f.len() as i64 } else { 4 - f.len() as i64 })
            .collect();
        // BFS tree on the dual graph rooted at the outer face; `via[f]` is the dart
        // of face f whose reverse lies in the parent face.
        let mut via = vec![usize::MAX; faces.len()];
        let mut seen = vec![false; faces.len()];
        let mut order = vec![outer];
        seen[outer] = true;
        let mut queue = VecDeque::from([outer]);
        while let Some(f) = queue.pop_front() {
            for &s in &faces[f] {
                let g = face_of[d.link[s]];
                if !seen[g] {
                    seen[g] = true;
                    via[g] = d.link[s];
                    order.push(g);
                    queue.push_back(g);
                }
            }
        }
        for &f in order.iter().skip(1).rev() {
            let s = via[f];
            let rest: i64 = faces[f].iter().filter(|&&x| x != s).map(|&x| tau[x]).sum();
            tau[s] = target[f] - rest;
            tau[d.link[s]] = -tau[s];
        }
        debug_assert_eq!(faces[outer].iter().map(|&s| tau[s]).sum::<i64>(), target[outer]);
        AngleSystem { tau }
    }

    pub fn edge_turning(&self, s: Slot) -> i64 {
        self.tau[s]
    }

    /// Signed rotation number of a curve, in full turns.
    pub fn rotation(&self, d: &Diagram, curve: &[Slot]) -> i64 {
        let mut total = 0i64;
        for (i, &s) in curve.iter().enumerate() {
            total += self.tau[s];
            let t = d.link[s];
            let next = curve[(i + 1) % curve.len()];
            total += turn(port_of(t), port_of(next));
        }
        debug_assert_eq!(total.rem_euclid(4), 0, "turning must be a whole number of turns");
        total.div_euclid(4)
    }
}

/// Quarter turns made by entering at port `pin` and leaving at `pout`.
pub fn turn(pin: usize, pout: usize) -> i64 {
    match (pout + 4 - pin) % 4 {
        3 => 1,
        1 => -1,
        _ => 0,
    }
}

/// Checks that `curve` is a legal closed walk and returns its signed rotation number.
pub fn rotation_number(d: &Diagram, curve: &[Slot]) -> Result<i64, DiagramError> {
    if curve.is_empty() {
        return Err(DiagramError::Invalid("empty curve".into()));
    }
    for (i, &s) in curve.iter().enumerate() {
        if s >= d.link.len() {
            return Err(DiagramError::Invalid(format!("slot {s} out of range")));
        }
        let t = d.link[s];
        let next = curve[(i + 1) % curve.len()];
        if vertex_of(next) != vertex_of(t) || next == t {
            return Err(DiagramError::Invalid(format!("curve is not connected after slot {s}")));
        }
        let straight = port_of(next) == (port_of(t) + 2) % 4;
        match d.kinds[vertex_of(t)] {
            VertexKind::Classical(_) | VertexKind::Node if straight => {
                return Err(DiagramError::Invalid(format!(
                    "curve passes through unsmoothed crossing {}",
                    vertex_of(t)
                )))
            }
            VertexKind::Virtual | VertexKind::Flat if !straight => {
                return Err(DiagramError::Invalid(format!("curve turns at vertex {}", vertex_of(t))))
            }
            VertexKind::Smoothing(j) if j.partner(port_of(t)) != port_of(next) => {
                return Err(DiagramError::Invalid(format!("curve ignores smoothing at {}", vertex_of(t))))
            }
            _ => {}
        }
    }
    let rot = super::embed::Embedding::new(d)?.rotation(d, curve)?;
    debug_assert_eq!(rot, AngleSystem::new(d).rotation(d, curve));
    Ok(rot)
}

/// The two values `|mu + sum of crossing signs|` allowed by Whitney's formula for
/// a curve: the base point is the leftmost point of its drawing and signs are
/// counted over the curve's straight self-crossings.
pub fn whitney_candidates(d: &Diagram, emb: &super::embed::Embedding, curve: &[Slot]) -> [i64; 2] {
    let pts = emb.polyline(d, curve);
    let lowest = (0..pts.len()).min_by(|&i, &j| pts[i].0.total_cmp(&pts[j].0)).unwrap_or(0);
    let n = curve.len();
    let start = lowest / 4 + 1;
    let mut first_pass: HashMap<usize, usize> = HashMap::new();
    let mut sum = 0i64;
    for i in 0..n {
        let s = curve[(start + i) % n];
        let pin = port_of(d.link[curve[(start + i + n - 1) % n]]);
        if pin != (port_of(s) + 2) % 4 {
            continue;
        }
        match first_pass.get(&vertex_of(s)) {
            None => {
                first_pass.insert(vertex_of(s), port_of(s));
            }
            Some(&q) => sum += if port_of(s) == (q + 1) % 4 { 1 } else { -1 },
        }
    }
    [(1 + sum).abs(), (sum - 1).abs()]
}

/// Traces the closed curves of a state. `exit(v, p)` gives the port a curve
/// arriving at port `p` of classical vertex `v` leaves by; other vertices pass
/// straight through or follow their smoothing.
pub fn trace_curves(d: &Diagram, exit: impl Fn(usize, usize) -> usize) -> Vec<ClosedCurve> {
    let n = d.link.len();
    let mut used = vec![false; n];
    let mut curves = Vec::new();
    for s0 in 0..n {
        if used[s0] {
            continue;
        }
        let mut curve = Vec::new();
        let mut s = s0;
        while !used[s] {
            used[s] = true;
            curve.push(s);
            let t = d.link[s];
            used[t] = true;
            let v = vertex_of(t);
            let p = port_of(t);
            let q = match d.kinds[v] {
                VertexKind::Classical(_) | VertexKind::Node => exit(v, p),
                VertexKind::Smoothing(j) => j.partner(p),
                _ => (p + 2) % 4,
            };
            s = slot(v, q);
        }
        curves.push(curve);
    }
    curves
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::tests::curl;
    use crate::diagram::OverPair;

    #[test]
    fn figure_eight_curve_has_rotation_zero() {
        let d = curl(VertexKind::Virtual);
        let curves = trace_curves(&d, |_, p| (p + 2) % 4);
        assert_eq!(curves.len(), 1);
        assert_eq!(rotation_number(&d, &curves[0]).unwrap(), 0);
    }

    #[test]
    fn smoothed_curl_gives_two_jordan_curves() {
        let d = curl(VertexKind::Classical(OverPair::Even));
        let curves = trace_curves(&d, |_, p| if p % 2 == 0 { (p + 3) % 4 } else { (p + 1) % 4 });
        assert_eq!(curves.len(), 2);
        for c in &curves {
            assert_eq!(rotation_number(&d, c).unwrap().abs(), 1);
        }
        let one = trace_curves(&d, |_, p| if p % 2 == 0 { (p + 1) % 4 } else { (p + 3) % 4 });
        assert_eq!(one.len(), 1);
        assert_eq!(rotation_number(&d, &one[0]).unwrap().abs(), 1);
    }

    #[test]
    fn straight_through_classical_is_rejected() {
        let d = curl(VertexKind::Classical(OverPair::Even));
        let curves = trace_curves(&d, |_, p| (p + 2) % 4);
        assert!(rotation_number(&d, &curves[0]).is_err());
    }
}
