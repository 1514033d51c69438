//! Straight-line drawings of diagrams.
//!
//! The plane graph is barycentrically subdivided twice, which yields a simple
//! triangulation of the sphere. Pinning one small triangle inside the outer
//! face and placing every other point at the average of its neighbours (Tutte)
//! gives a planar straight-line drawing. Each edge of the diagram is drawn as
//! the polyline through its subdivision points.

use std::f64::consts::PI;

use super::{vertex_of, Diagram, DiagramError, Slot};

type Point = (f64, f64);

#[derive(Clone, Debug)]
pub struct Embedding {
    pos: Vec<Point>,
    /// Index of the subdivision point of the edge through each slot.
    edge_point: Vec<usize>,
    /// Index of the point between a slot's vertex and its edge point.
    half_point: Vec<usize>,
}

impl Embedding {
    pub fn new(d: &Diagram) -> Result<Embedding, DiagramError> {
        d.validate()?;
        if d.kinds.is_empty() {
            return Err(DiagramError::Invalid("nothing to draw".into()));
        }
        let nv = d.kinds.len();
        let ns = d.link.len();
        let mut edge_id = vec![usize::MAX; ns];
        let mut ne = 0;
        for s in 0..ns {
            if edge_id[s] == usize::MAX {
                edge_id[s] = ne;
                edge_id[d.link[s]] = ne;
                ne += 1;
            }
        }
        let faces = d.faces();
        let mut face_id = vec![0; ns];
        let mut prev = vec![0; ns];
        for (i, f) in faces.iter().enumerate() {
            for (j, &s) in f.iter().enumerate() {
                face_id[s] = i;
                prev[s] = f[(j + f.len() - 1) % f.len()];
            }
        }
        let ep = |s: Slot| nv + edge_id[s];
        let fp = |s: Slot| nv + ne + face_id[s];
        let p1 = nv + ne + faces.len();
        // First subdivision: edge k has endpoints ends[k]; ids are
        // s (vertex to edge point), ns + d (face to edge point), 2ns + d (face to corner after d).
        let mut ends = Vec::with_capacity(3 * ns);
        for s in 0..ns {
            ends.push((vertex_of(s), ep(s)));
        }
        for s in 0..ns {
            ends.push((fp(s), ep(s)));
        }
        for s in 0..ns {
            ends.push((fp(s), vertex_of(d.link[s])));
        }
        let mid = |k: usize| p1 + k;
        let center = |t: usize| p1 + 3 * ns + t;
        let total = p1 + 3 * ns + 2 * ns;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
        let join = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
            if !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        };
        for (k, &(a, b)) in ends.iter().enumerate() {
            join(a, mid(k), &mut adj);
            join(mid(k), b, &mut adj);
        }
        // Triangles 2s and 2s + 1 on the left of the edge leaving s.
        for s in 0..ns {
            let tris = [
                ([vertex_of(s), ep(s), fp(s)], [s, ns + s, 2 * ns + prev[s]]),
                ([vertex_of(d.link[s]), ep(s), fp(s)], [d.link[s], ns + s, 2 * ns + s]),
            ];
            for (i, (corners, sides)) in tris.into_iter().enumerate() {
                let c = center(2 * s + i);
                for p in corners {
                    join(c, p, &mut adj);
                }
                for k in sides {
                    join(c, mid(k), &mut adj);
                }
            }
        }
        let o = d.outer.unwrap_or(0);
        let pinned = [(center(2 * o), (0.0, 0.0)), (fp(o), (1.0, 0.0)), (mid(ns + o), (0.5, 0.75f64.sqrt()))];
        let pos = tutte(&adj, &pinned);
        Ok(Embedding { pos, edge_point: (0..ns).map(ep).collect(), half_point: (0..ns).map(mid).collect() })
    }

    pub fn vertex_position(&self, v: usize) -> Point {
        self.pos[v]
    }

    /// The drawn polyline of a closed curve given by its leaving slots.
    pub fn polyline(&self, d: &Diagram, curve: &[Slot]) -> Vec<Point> {
        let mut pts = Vec::with_capacity(4 * curve.len());
        for &s in curve {
            let t = d.link[s];
            pts.push(self.pos[vertex_of(s)]);
            pts.push(self.pos[self.half_point[s]]);
            pts.push(self.pos[self.edge_point[s]]);
            pts.push(self.pos[self.half_point[t]]);
        }
        pts
    }

    /// Total turning of the drawn curve, in full turns.
    pub fn turning(&self, d: &Diagram, curve: &[Slot]) -> f64 {
        let pts = self.polyline(d, curve);
        let n = pts.len();
        let mut total = 0.0;
        for i in 0..n {
            let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            let u = (b.0 - a.0, b.1 - a.1);
            let w = (c.0 - b.0, c.1 - b.1);
            total += (u.0 * w.1 - u.1 * w.0).atan2(u.0 * w.0 + u.1 * w.1);
        }
        total / (2.0 * PI)
    }

    /// Signed rotation number of the drawn curve.
    pub fn rotation(&self, d: &Diagram, curve: &[Slot]) -> Result<i64, DiagramError> {
        let t = self.turning(d, curve);
        let r = t.round();
        if (t - r).abs() > 1e-6 {
            return Err(DiagramError::Invalid(format!("turning {t} is not close to an integer")));
        }
        Ok(r as i64)
    }
}

/// Positions every unpinned point at the average of its neighbours by conjugate
/// gradients on the graph Laplacian.
fn tutte(adj: &[Vec<usize>], pinned: &[(usize, Point)]) -> Vec<Point> {
    let n = adj.len();
    let mut pos = vec![(0.0, 0.0); n];
    let mut free = vec![true; n];
    for &(i, p) in pinned {
        pos[i] = p;
        free[i] = false;
    }
    let idx: Vec<usize> = (0..n).filter(|&i| free[i]).collect();
    let mut local = vec![usize::MAX; n];
    for (k, &i) in idx.iter().enumerate() {
        local[i] = k;
    }
    let apply = |x: &[f64], y: &mut [f64]| {
        for (k, &i) in idx.iter().enumerate() {
            let mut acc = adj[i].len() as f64 * x[k];
            for &j in &adj[i] {
                if free[j] {
                    acc -= x[local[j]];
                }
            }
            y[k] = acc;
        }
    };
    for coord in 0..2 {
        let get = |p: Point| if coord == 0 { p.0 } else { p.1 };
        let b: Vec<f64> = idx
            .iter()
            .map(|&i| adj[i].iter().filter(|&&j| !free[j]).map(|&j| get(pos[j])).sum())
            .collect();
        let m = idx.len();
        let mut x = vec![0.0; m];
        let mut r = b.clone();
        let mut p = r.clone();
        let mut ap = vec![0.0; m];
        let mut rr: f64 = r.iter().map(|v| v * v).sum();
        let tol = 1e-28 * b.iter().map(|v| v * v).sum::<f64>().max(1.0);
        for _ in 0..10 * m + 100 {
            if rr <= tol {
                break;
            }
            apply(&p, &mut ap);
            let alpha = rr / p.iter().zip(&ap).map(|(a, b)| a * b).sum::<f64>();
            for k in 0..m {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            let rr_new: f64 = r.iter().map(|v| v * v).sum();
            let beta = rr_new / rr;
            for k in 0..m {
                p[k] = r[k] + beta * p[k];
            }
            rr = rr_new;
        }
        for (k, &i) in idx.iter().enumerate() {
            if coord == 0 {
                pos[i].0 = x[k];
            } else {
                pos[i].1 = x[k];
            }
        }
    }
    pos
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::SignedGaussCode;
    use crate::diagram::gauss::from_gauss;
    use crate::diagram::rotation::{trace_curves, whitney_candidates, AngleSystem};
    use crate::diagram::tests::curl;
    use crate::diagram::{OverPair, VertexKind};

    #[test]
    fn figure_eight_turns_zero() {
        let d = curl(VertexKind::Virtual);
        let e = Embedding::new(&d).unwrap();
        let c = trace_curves(&d, |_, p| (p + 2) % 4);
        assert_eq!(e.rotation(&d, &c[0]).unwrap(), 0);
    }

    #[test]
    fn geometric_and_combinatorial_rotation_agree() {
        for code in ["O1+U2+O3+U1+O2+U3+", "O1+U2+O3-U1+O2+U3-", "O1-U2+O3+O4-U1-U3+O2+U4-"] {
            let d = from_gauss(&SignedGaussCode::parse(code).unwrap()).unwrap();
            let e = Embedding::new(&d).unwrap();
            let a = AngleSystem::new(&d);
            for state in 0..(1u32 << d.num_vertices()) {
                let curves = trace_curves(&d, |v, p| if state >> v & 1 == 1 { p ^ 1 } else { (p + 3 - 2 * (p % 2)) % 4 });
                for c in curves {
                    let r = e.rotation(&d, &c).unwrap();
                    assert_eq!(r, a.rotation(&d, &c), "{code} state {state}");
                    assert!(whitney_candidates(&d, &e, &c).contains(&r.abs()), "{code} state {state}");
                }
            }
        }
        let d = curl(VertexKind::Classical(OverPair::Odd));
        Embedding::new(&d).unwrap();
    }
}
