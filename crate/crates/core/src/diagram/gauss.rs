//! Conversions between Gauss codes and diagrams.
//!
//! Planar codes are reconstructed through the curve obtained by smoothing every
//! crossing against the orientation: the chords recording the smoothings sit on
//! either side of that curve according to a dual pairing, and contracting them
//! recovers the crossings. Other codes get an arc-diagram realization whose
//! routing intersections become virtual crossings.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_rational::Ratio;

use super::{slot, Diagram, DiagramError, OverPair, Slot, VertexKind};
use crate::codes::{chord_positions, interleaved, Flavor, Ou, Passage, SignedGaussCode};

/// Flattened view of a code: passages in reading order with cyclic successors.
struct Layout {
    passages: Vec<Passage>,
    next: Vec<usize>,
    prev: Vec<usize>,
    /// For each crossing index, its first and second passage.
    occ: Vec<[usize; 2]>,
    crossing_of: Vec<usize>,
    labels: Vec<u32>,
    empty_components: usize,
}

impl Layout {
    fn new(code: &SignedGaussCode) -> Layout {
        let labels = code.labels();
        let index: HashMap<u32, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let mut passages = Vec::new();
        let mut next = Vec::new();
        let mut prev = Vec::new();
        let mut empty_components = 0;
        for comp in &code.components {
            if comp.is_empty() {
                empty_components += 1;
                continue;
            }
            let base = passages.len();
            let len = comp.len();
            for (i, p) in comp.iter().enumerate() {
                passages.push(*p);
                next.push(base + (i + 1) % len);
                prev.push(base + (i + len - 1) % len);
            }
        }
        let mut occ = vec![[usize::MAX; 2]; labels.len()];
        let mut crossing_of = Vec::with_capacity(passages.len());
        for (k, p) in passages.iter().enumerate() {
            let c = index[&p.label];
            crossing_of.push(c);
            if occ[c][0] == usize::MAX {
                occ[c][0] = k;
            } else {
                occ[c][1] = k;
            }
        }
        Layout { passages, next, prev, occ, crossing_of, labels, empty_components }
    }

    fn is_first(&self, k: usize) -> bool {
        self.occ[self.crossing_of[k]][0] == k
    }
}

/// An end of edge `k` (which runs from passage `k` to its successor).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct End {
    edge: usize,
    head: bool,
}

/// Builds the diagram for `code`: a classical (virtual-free) diagram when the code
/// is planar and its signs are realizable, otherwise the arc-diagram realization.
pub fn from_gauss(code: &SignedGaussCode) -> Result<Diagram, DiagramError> {
    code.validate()?;
    if code.num_crossings() == 0 {
        return Ok(Diagram::circles(code.components.len()));
    }
    if crate::codes::is_planar(code) {
        let want_signs = matches!(code.flavor, Flavor::SignedOu | Flavor::FlatSigned);
        if let Some(d) = planar_realization(code, want_signs) {
            return Ok(d);
        }
    }
    virtual_realization(code)
}

/// The virtual-free diagram realizing a signed code, if its signs are standard.
pub fn classical_realization(code: &SignedGaussCode) -> Option<Diagram> {
    if code.validate().is_err() || !crate::codes::is_planar(code) {
        return None;
    }
    planar_realization(code, true)
}

fn vertex_kind(p: &Passage, port_parity_even: bool) -> VertexKind {
    match p.ou {
        Some(ou) => {
            let over_here = ou == Ou::O;
            let even = port_parity_even == over_here;
            VertexKind::Classical(if even { OverPair::Even } else { OverPair::Odd })
        }
        None => VertexKind::Flat,
    }
}

/// A visit of the smoothing curve: either an unsmoothed passage or a site where
/// two ends of crossing `crossing` have been joined.
#[derive(Clone, Copy, Debug)]
struct Visit {
    site: Option<usize>,
    crossing: usize,
    arrive: End,
    leave: End,
}

impl Visit {
    fn reversed(self) -> Visit {
        Visit { arrive: self.leave, leave: self.arrive, ..self }
    }
}

/// Smooths the crossings one at a time, each time joining the two in-ends and
/// the two out-ends, which keeps a single curve. Site `2c` joins the in-ends of
/// crossing `c` and `2c + 1` the out-ends. Returns the sites in curve order and
/// the (arriving, leaving) ends at each site.
fn smoothing_curve(lay: &Layout, code: &SignedGaussCode) -> Option<(Vec<usize>, Vec<(End, End)>)> {
    let n = lay.labels.len();
    let mut curves: Vec<Vec<Visit>> = Vec::new();
    let mut k = 0;
    for comp in code.components.iter().filter(|c| !c.is_empty()) {
        let curve = (k..k + comp.len())
            .map(|p| Visit {
                site: None,
                crossing: lay.crossing_of[p],
                arrive: End { edge: lay.prev[p], head: true },
                leave: End { edge: p, head: false },
            })
            .collect();
        curves.push(curve);
        k += comp.len();
    }
    let reverse = |seg: &[Visit]| -> Vec<Visit> { seg.iter().rev().map(|v| v.reversed()).collect() };
    for c in 0..n {
        let hits: Vec<(usize, usize)> = curves
            .iter()
            .enumerate()
            .flat_map(|(ci, cv)| {
                cv.iter().enumerate().filter(|(_, v)| v.site.is_none() && v.crossing == c).map(move |(i, _)| (ci, i))
            })
            .collect();
        let [(ca, i), (cb, j)] = hits[..] else { return None };
        if ca == cb {
            let cv = &curves[ca];
            let (a, b) = (cv[i], cv[j]);
            let mut new = cv[..i].to_vec();
            new.push(Visit { site: Some(2 * c), crossing: c, arrive: a.arrive, leave: b.arrive });
            new.extend(reverse(&cv[i + 1..j]));
            new.push(Visit { site: Some(2 * c + 1), crossing: c, arrive: a.leave, leave: b.leave });
            new.extend_from_slice(&cv[j + 1..]);
            curves[ca] = new;
        } else {
            let mut first = curves[ca].clone();
            first.rotate_left(i);
            let mut second = curves[cb].clone();
            second.rotate_left(j);
            let (a, b) = (first[0], second[0]);
            let mut new = vec![Visit { site: Some(2 * c), crossing: c, arrive: a.arrive, leave: b.arrive }];
            new.extend(reverse(&second[1..]));
            new.push(Visit { site: Some(2 * c + 1), crossing: c, arrive: b.leave, leave: a.leave });
            new.extend_from_slice(&first[1..]);
            curves[ca] = new;
            curves.remove(cb);
        }
    }
    if curves.len() != 1 {
        return None;
    }
    let mut site_ends = vec![(End { edge: 0, head: true }, End { edge: 0, head: true }); 2 * n];
    let order = curves[0]
        .iter()
        .map(|v| {
            let site = v.site.expect("every crossing is smoothed");
            site_ends[site] = (v.arrive, v.leave);
            site
        })
        .collect();
    Some((order, site_ends))
}

/// Reconstruction of a planar code. With `match_signs`, the code's signs must be
/// realized exactly; otherwise crossing 1 is made positive.
fn planar_realization(code: &SignedGaussCode, match_signs: bool) -> Option<Diagram> {
    let lay = Layout::new(code);
    let m = lay.passages.len();
    let n = lay.labels.len();
    let (order, site_ends) = smoothing_curve(&lay, code)?;
    // Chords and their interleavement classes.
    let word: Vec<u32> = order.iter().map(|s| (s / 2) as u32).collect();
    let chords = chord_positions(&word);
    let mut color: Vec<Option<(usize, bool)>> = vec![None; n];
    let mut classes = 0;
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some((classes, true));
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let (cls, cu) = color[u].unwrap();
            for v in 0..n {
                if v == u || !interleaved(chords[&(u as u32)], chords[&(v as u32)]) {
                    continue;
                }
                match color[v] {
                    Some((_, cv)) if cv == cu => return None,
                    Some(_) => {}
                    None => {
                        color[v] = Some((cls, !cu));
                        queue.push_back(v);
                    }
                }
            }
        }
        classes += 1;
    }
    let ports_for = |c: usize, inside: bool| -> [End; 4] {
        let (a_prev, a_next) = site_ends[2 * c];
        let (b_prev, b_next) = site_ends[2 * c + 1];
        if inside {
            [a_prev, a_next, b_prev, b_next]
        } else {
            [a_next, a_prev, b_next, b_prev]
        }
    };
    // The passage whose out-end is edge k's tail is k; whose in-end is edge k's head is next(k).
    let passage_of = |e: End| if e.head { lay.next[e.edge] } else { e.edge };
    for c in 0..n {
        let p = ports_for(c, true);
        if passage_of(p[0]) != passage_of(p[2]) || passage_of(p[1]) != passage_of(p[3]) {
            return None;
        }
    }
    let build = |inside: &[bool]| -> Diagram {
        let mut d = Diagram::circles(lay.empty_components);
        let mut end_slot: HashMap<End, Slot> = HashMap::new();
        for c in 0..n {
            let ports = ports_for(c, inside[c]);
            let first = lay.occ[c][0];
            let first_even = passage_of(ports[0]) == first;
            let v = d.add_vertex(vertex_kind(&lay.passages[first], first_even));
            for (i, e) in ports.iter().enumerate() {
                end_slot.insert(*e, slot(v, i));
            }
        }
        for k in 0..m {
            d.connect(end_slot[&End { edge: k, head: false }], end_slot[&End { edge: k, head: true }]);
        }
        if d.kinds.iter().all(|k| *k == VertexKind::Flat) {
            // Flat signs are read with the first passage on the even pair.
            for c in 0..n {
                let first = lay.occ[c][0];
                let even = passage_of(ports_for(c, inside[c])[0]) == first;
                if !even {
                    rotate_ports(&mut d, c);
                }
            }
        }
        let faces = d.faces();
        let outer = faces.iter().enumerate().max_by_key(|(i, f)| (f.len(), std::cmp::Reverse(*i))).unwrap();
        d.outer = Some(outer.1[0]);
        d
    };
    // Side of each crossing that realizes its sign, relative to "inside".
    let mut inside = vec![true; n];
    let trial = build(&inside);
    let wanted: Vec<i8> = (0..n)
        .map(|c| {
            let p = &lay.passages[lay.occ[c][0]];
            if match_signs {
                p.sign.unwrap_or(1)
            } else if c == 0 {
                1
            } else {
                0
            }
        })
        .collect();
    let mut flip = vec![None; classes];
    for c in 0..n {
        if wanted[c] == 0 {
            continue;
        }
        let (cls, col) = color[c].unwrap();
        let need_inside = trial.crossing_sign(c) == wanted[c];
        let f = need_inside != col;
        match flip[cls] {
            None => flip[cls] = Some(f),
            Some(g) if g != f => return None,
            _ => {}
        }
    }
    for c in 0..n {
        let (cls, col) = color[c].unwrap();
        inside[c] = col != flip[cls].unwrap_or(false);
    }
    let d = build(&inside);
    d.validate().ok()?;
    Some(d)
}

/// Relabels the ports of `v` one step counterclockwise (same embedding).
fn rotate_ports(d: &mut Diagram, v: usize) {
    let old: Vec<(Slot, bool)> = (0..4).map(|p| (d.link[slot(v, p)], d.out[slot(v, p)])).collect();
    for p in 0..4 {
        let (t, o) = old[p];
        let s = slot(v, p + 1);
        // a loop at v moves with the relabeling
        let t = if super::vertex_of(t) == v { slot(v, super::port_of(t) + 1) } else { t };
        d.link[s] = t;
        d.link[t] = s;
        d.out[s] = o;
    }
    if let Some(o) = d.outer {
        if super::vertex_of(o) == v {
            d.outer = Some(slot(v, super::port_of(o) + 1));
        }
    }
    d.kinds[v] = match d.kinds[v] {
        VertexKind::Classical(p) => VertexKind::Classical(p.other()),
        k => k,
    };
}

/// Semicircle between two axis points on one side of the axis.
#[derive(Clone, Debug)]
struct Arc {
    lo: i128,
    hi: i128,
    upper: bool,
}

/// Arc-diagram realization: crossing `i` sits on the axis at `x = 4i`, entered
/// from the west by its first passage and from the south or north by its second
/// (whichever gives the code's sign). Edges are semicircles; an edge joining a
/// north port to a south port crosses the axis to the right of every tile.
pub fn virtual_realization(code: &SignedGaussCode) -> Result<Diagram, DiagramError> {
    for attempt in 0..16 {
        if let Some(d) = virtual_realization_attempt(code, attempt)? {
            return Ok(d);
        }
    }
    Err(DiagramError::Invalid("could not place routing arcs in general position".into()))
}

fn virtual_realization_attempt(code: &SignedGaussCode, attempt: u64) -> Result<Option<Diagram>, DiagramError> {
    let lay = Layout::new(code);
    let m = lay.passages.len();
    let n = lay.labels.len();
    // Second passage goes south to north when `up[c]`.
    let up: Vec<bool> = (0..n)
        .map(|c| {
            let first = &lay.passages[lay.occ[c][0]];
            let sign = first.sign.unwrap_or(1);
            let first_over = first.ou != Some(Ou::U);
            (sign > 0) == first_over
        })
        .collect();
    // Port of passage k where the strand leaves / arrives.
    let out_port = |k: usize| {
        if lay.is_first(k) {
            0
        } else if up[lay.crossing_of[k]] {
            1
        } else {
            3
        }
    };
    let in_port = |k: usize| (out_port(k) + 2) % 4;
    let jitter = |id: u64| -> i128 {
        if attempt == 0 {
            0
        } else {
            let h = id.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(attempt.wrapping_mul(0xBF58_476D_1CE4_E5B9));
            ((h >> 29) % 7) as i128 - 3
        }
    };
    let port_x = |c: usize, port: usize| -> i128 {
        let base = 4 * c as i128;
        let x = match port {
            0 => base + 1,
            2 => base - 1,
            _ => base,
        };
        16 * x + jitter((4 * c + port) as u64)
    };
    let mut arcs: Vec<Arc> = Vec::new();
    // Per edge: list of (arc index, travelling towards larger x).
    let mut routes: Vec<Vec<(usize, bool)>> = Vec::with_capacity(m);
    let mut next_z = 4 * n as i128 + 2;
    for k in 0..m {
        let (c0, p0) = (lay.crossing_of[k], out_port(k));
        let nk = lay.next[k];
        let (c1, p1) = (lay.crossing_of[nk], in_port(nk));
        let (x0, x1) = (port_x(c0, p0), port_x(c1, p1));
        let side = |p: usize| match p {
            1 => Some(true),
            3 => Some(false),
            _ => None,
        };
        let push = |a: i128, b: i128, upper: bool, arcs: &mut Vec<Arc>| {
            arcs.push(Arc { lo: a.min(b), hi: a.max(b), upper });
            (arcs.len() - 1, b > a)
        };
        let route = match (side(p0), side(p1)) {
            (Some(u0), Some(u1)) if u0 != u1 => {
                let z = 16 * next_z + jitter(1_000_000 + k as u64);
                next_z += 2;
                vec![push(x0, z, u0, &mut arcs), push(z, x1, u1, &mut arcs)]
            }
            (Some(u), _) | (None, Some(u)) => vec![push(x0, x1, u, &mut arcs)],
            (None, None) => vec![push(x0, x1, true, &mut arcs)],
        };
        routes.push(route);
    }
    // Intersections between interleaved arcs on the same side.
    type Q = Ratio<i128>;
    let mut crossings: Vec<(usize, usize, Q)> = Vec::new();
    for a in 0..arcs.len() {
        for b in a + 1..arcs.len() {
            let (p, q) = (&arcs[a], &arcs[b]);
            if p.upper != q.upper {
                continue;
            }
            let inter = |x: i128, r: &Arc| r.lo < x && x < r.hi;
            if inter(q.lo, p) == inter(q.hi, p) {
                continue;
            }
            let (alpha, beta) = if p.lo < q.lo { (a, b) } else { (b, a) };
            let (s1, s2) = (arcs[alpha].lo + arcs[alpha].hi, arcs[beta].lo + arcs[beta].hi);
            let num = arcs[beta].lo * arcs[beta].hi - arcs[alpha].lo * arcs[alpha].hi;
            crossings.push((alpha, beta, Q::new(num, s2 - s1)));
        }
    }
    let mut on_arc: Vec<Vec<(Q, usize)>> = vec![Vec::new(); arcs.len()];
    for (i, (alpha, beta, x)) in crossings.iter().enumerate() {
        on_arc[*alpha].push((*x, i));
        on_arc[*beta].push((*x, i));
    }
    for list in on_arc.iter_mut() {
        list.sort();
        if list.windows(2).any(|w| w[0].0 == w[1].0) {
            return Ok(None);
        }
    }
    let mut d = Diagram::circles(lay.empty_components);
    for c in 0..n {
        let first = &lay.passages[lay.occ[c][0]];
        d.add_vertex(vertex_kind(first, true));
    }
    let vbase = n;
    // Port at virtual vertex `i` for arc `a` heading to larger x (fwd) or smaller.
    let vport = |i: usize, a: usize, fwd: bool| -> Slot {
        let (alpha, _, _) = crossings[i];
        let upper = arcs[a].upper;
        let pos = match (a == alpha, fwd, upper) {
            (true, true, _) => 0,
            (true, false, _) => 2,
            (false, true, true) => 1,
            (false, false, true) => 3,
            (false, true, false) => 3,
            (false, false, false) => 1,
        };
        slot(vbase + i, pos)
    };
    for _ in &crossings {
        d.add_vertex(VertexKind::Virtual);
    }
    // Dart leaving each arc's left endpoint towards larger x.
    let mut left_dart = vec![usize::MAX; arcs.len()];
    for k in 0..m {
        let start = slot(lay.crossing_of[k], out_port(k));
        let end = slot(lay.crossing_of[lay.next[k]], in_port(lay.next[k]));
        let mut cur = start;
        for &(a, inc) in &routes[k] {
            let list: Vec<usize> = if inc {
                on_arc[a].iter().map(|x| x.1).collect()
            } else {
                on_arc[a].iter().rev().map(|x| x.1).collect()
            };
            if inc {
                left_dart[a] = cur;
            } else {
                // decreasing arcs always end at the edge's head
                left_dart[a] = end;
            }
            for i in list {
                d.connect(cur, vport(i, a, !inc));
                cur = vport(i, a, inc);
            }
        }
        d.connect(cur, end);
    }
    // The leftmost upper endpoint sees the unbounded face above it.
    let leftmost = (0..arcs.len()).filter(|&a| arcs[a].upper).min_by_key(|&a| arcs[a].lo).expect("an upper arc exists");
    d.outer = Some(left_dart[leftmost]);
    if !d.is_connected() {
        return Err(DiagramError::Disconnected);
    }
    d.validate()?;
    Ok(Some(d))
}

/// Reads the signed Gauss code of a diagram, skipping virtual crossings.
pub fn to_gauss(d: &Diagram) -> Result<SignedGaussCode, DiagramError> {
    let mut flavor = None;
    for k in &d.kinds {
        let f = match k {
            VertexKind::Classical(_) => Flavor::SignedOu,
            VertexKind::Flat => Flavor::FlatSigned,
            VertexKind::Virtual => continue,
            VertexKind::Node => return Err(DiagramError::Unsupported("rigid node")),
            VertexKind::Smoothing(_) => return Err(DiagramError::Unsupported("smoothing site")),
        };
        if flavor.is_some_and(|g| g != f) {
            return Err(DiagramError::Unsupported("mixed classical and flat crossings"));
        }
        flavor = Some(f);
    }
    let mut components = Vec::new();
    for walk in d.strand_walks() {
        let mut comp = Vec::new();
        for s in walk {
            let t = d.link[s];
            let v = super::vertex_of(t);
            let ou = match d.kinds[v] {
                VertexKind::Classical(o) => Some(if o.contains(super::port_of(t)) { Ou::O } else { Ou::U }),
                VertexKind::Flat => None,
                _ => continue,
            };
            comp.push(Passage { label: v as u32 + 1, ou, sign: Some(d.crossing_sign(v)) });
        }
        components.push(comp);
    }
    components.extend(std::iter::repeat_n(Vec::new(), d.circles));
    let code = SignedGaussCode { components, flavor: flavor.unwrap_or(Flavor::Shadow) };
    let code = if code.flavor == Flavor::Shadow { code.shadow() } else { code };
    Ok(code.canonical())
}

/// Crossing labels to vertex indices for diagrams built by [`from_gauss`].
pub fn label_vertices(code: &SignedGaussCode) -> BTreeMap<u32, usize> {
    code.labels().into_iter().enumerate().map(|(i, l)| (l, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> SignedGaussCode {
        SignedGaussCode::parse(s).unwrap()
    }

    const T: &str = "O1+U2+O3+U1+O2+U3+";
    const G: &str = "O1+U2+O3-U1+O2+U3-";

    #[test]
    fn trefoil_is_classical() {
        let d = from_gauss(&code(T)).unwrap();
        assert_eq!(d.classical_count(), 3);
        assert_eq!(d.virtual_count(), 0);
        assert_eq!(d.writhe(), 3);
        assert_eq!(to_gauss(&d).unwrap(), code(T).canonical());
    }

    #[test]
    fn virtual_knot_needs_virtual_crossings() {
        let d = from_gauss(&code(G)).unwrap();
        assert_eq!(d.classical_count(), 3);
        assert!(d.virtual_count() >= 1);
        assert_eq!(to_gauss(&d).unwrap(), code(G).canonical());
    }

    #[test]
    fn writhe_of_four_crossing_code() {
        let d = from_gauss(&code("O1+U2+O3-U4-O2+U1+O4-U3-")).unwrap();
        assert_eq!(d.writhe(), 0);
    }

    #[test]
    fn empty_component_is_circle() {
        let d = from_gauss(&code("")).unwrap();
        assert_eq!(d.num_vertices(), 0);
        assert_eq!(d.components(), 1);
    }

    #[test]
    fn round_trips() {
        for s in [
            T, G, "O1+U1+", "O1-U1-", "O1+O2+U1+U2+", "O1-U2-/U1-O2-", "O1+U2+/U1+O2+",
            "O1+U2-O3+U1+O2-U3+", "O1+U2+U1+O2+", "123123", "1212", "12/12", "1+2+1+2+", "O1U2O3U1O2U3",
            "O1-U2+O3-U4+O5-U1-O2+U3-O4+U5-",
        ] {
            let c = code(s);
            let d = from_gauss(&c).unwrap();
            d.validate().unwrap();
            let back = to_gauss(&d).unwrap();
            let want = match c.flavor {
                Flavor::Ou => back.clone(),
                Flavor::Shadow => c.canonical(),
                _ => c.canonical(),
            };
            if c.flavor == Flavor::Shadow {
                assert_eq!(back.shadow(), want, "{s}");
            } else {
                assert_eq!(back, want, "{s}");
            }
        }
    }

    #[test]
    fn realizability() {
        assert!(classical_realization(&code(T)).is_some());
        assert!(classical_realization(&code(G)).is_none());
        assert!(classical_realization(&code("O1+U1+")).is_some());
    }
}
