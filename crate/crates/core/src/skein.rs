//! The bracket state sum and the normalized f-polynomial.
//!
//! The A-smoothing at a classical crossing joins each overcrossing port `q` to
//! port `q - 1`. Loops are counted with straight passage through virtual
//! crossings and along the fixed joins of smoothing sites; a state with `n`
//! loops weighs `d^(n-1)` with `d = -A^2 - A^-2`.

use std::collections::HashMap;

use crate::diagram::{slot, vertex_of, Diagram, DiagramError, Join, OverPair, VertexKind};
use crate::poly::LaurentPoly;

/// The join made by the A-smoothing of a crossing with the given overpass.
pub fn a_join(over: OverPair) -> Join {
    match over {
        OverPair::Even => Join::Prev,
        OverPair::Odd => Join::Next,
    }
}

pub fn b_join(over: OverPair) -> Join {
    match a_join(over) {
        Join::Next => Join::Prev,
        Join::Prev => Join::Next,
    }
}

fn check_kinds(d: &Diagram) -> Result<(), DiagramError> {
    for k in d.kinds() {
        match k {
            VertexKind::Flat => return Err(DiagramError::Unsupported("flat crossing")),
            VertexKind::Node => return Err(DiagramError::Unsupported("rigid vertex")),
            _ => {}
        }
    }
    Ok(())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
        ra != rb
    }
}

/// Sums `count * A^exp * d^(loops - 1)` over a table indexed by `(exp, loops)`.
fn assemble(table: &HashMap<(i64, usize), i64>) -> LaurentPoly {
    let d = LaurentPoly::loop_value();
    let max_loops = table.keys().map(|k| k.1).max().unwrap_or(1);
    let powers: Vec<LaurentPoly> = std::iter::successors(Some(LaurentPoly::one()), |p| Some(p * &d))
        .take(max_loops.max(1))
        .collect();
    let mut total = LaurentPoly::zero();
    for (&(exp, loops), &c) in table {
        if c != 0 {
            total += &powers[loops - 1].shift(exp).scale(&c.into());
        }
    }
    total
}

/// The bracket by enumerating every state.
pub fn bracket_states(d: &Diagram) -> Result<LaurentPoly, DiagramError> {
    check_kinds(d)?;
    let n = d.num_vertices();
    let classical: Vec<(usize, OverPair)> = d
        .kinds()
        .iter()
        .enumerate()
        .filter_map(|(v, k)| match k {
            VertexKind::Classical(o) => Some((v, *o)),
            _ => None,
        })
        .collect();
    if classical.len() > 30 {
        return Err(DiagramError::Invalid("too many crossings for state enumeration".into()));
    }
    // Slots joined regardless of the state: edges, virtual passages, fixed sites.
    let mut base = UnionFind::new(4 * n);
    for s in 0..4 * n {
        base.union(s, d.partner(s));
    }
    for v in 0..n {
        match d.kind(v) {
            VertexKind::Virtual => {
                base.union(slot(v, 0), slot(v, 2));
                base.union(slot(v, 1), slot(v, 3));
            }
            VertexKind::Smoothing(j) => {
                base.union(slot(v, 0), slot(v, j.partner(0)));
                base.union(slot(v, 2), slot(v, j.partner(2)));
            }
            _ => {}
        }
    }
    let base_loops = (0..4 * n).filter(|&s| base.find(s) == s).count();
    let mut table: HashMap<(i64, usize), i64> = HashMap::new();
    let c = classical.len();
    for state in 0..(1u64 << c) {
        let mut uf = UnionFind(base.0.clone());
        let mut loops = base_loops;
        let mut exp = 0i64;
        for (i, &(v, over)) in classical.iter().enumerate() {
            let a = state >> i & 1 == 0;
            let j = if a { a_join(over) } else { b_join(over) };
            exp += if a { 1 } else { -1 };
            for p in [0, 2] {
                if uf.union(slot(v, p), slot(v, j.partner(p))) {
                    loops -= 1;
                }
            }
        }
        *table.entry((exp, loops + d.free_circles())).or_insert(0) += 1;
    }
    if n == 0 {
        table.clear();
        table.insert((0, d.free_circles().max(1)), 1);
    }
    Ok(assemble(&table))
}

/// A crossing graph with virtual passages and fixed joins spliced out. Slot
/// `4v + p` as in [`Diagram`]; `even[v]` says the overpass uses ports 0 and 2.
#[derive(Clone, Debug)]
struct CrossingGraph {
    even: Vec<bool>,
    link: Vec<usize>,
    loops: usize,
}

impl CrossingGraph {
    fn from_diagram(d: &Diagram) -> CrossingGraph {
        let n = d.num_vertices();
        // walk from each classical slot through non-classical vertices
        let classical: Vec<usize> = (0..n).filter(|&v| matches!(d.kind(v), VertexKind::Classical(_))).collect();
        let mut index = vec![usize::MAX; n];
        for (i, &v) in classical.iter().enumerate() {
            index[v] = i;
        }
        let mut link = vec![usize::MAX; 4 * classical.len()];
        let mut seen = vec![false; 4 * n];
        let through = |s: usize| -> usize {
            let v = vertex_of(s);
            match d.kind(v) {
                VertexKind::Smoothing(j) => slot(v, j.partner(s % 4)),
                _ => slot(v, s % 4 + 2),
            }
        };
        for &v in &classical {
            for p in 0..4 {
                let s = slot(v, p);
                if seen[s] {
                    continue;
                }
                let mut t = d.partner(s);
                while !matches!(d.kind(vertex_of(t)), VertexKind::Classical(_)) {
                    seen[t] = true;
                    let u = through(t);
                    seen[u] = true;
                    t = d.partner(u);
                }
                seen[s] = true;
                seen[t] = true;
                let (a, b) = (slot(index[v], p), slot(index[vertex_of(t)], t % 4));
                link[a] = b;
                link[b] = a;
            }
        }
        // closed strands meeting no classical crossing
        let mut loops = d.free_circles();
        for s in 0..4 * n {
            if seen[s] || matches!(d.kind(vertex_of(s)), VertexKind::Classical(_)) {
                continue;
            }
            loops += 1;
            let mut t = s;
            loop {
                seen[t] = true;
                let u = d.partner(t);
                seen[u] = true;
                t = through(u);
                if seen[t] {
                    break;
                }
            }
        }
        let even = classical
            .iter()
            .map(|&v| matches!(d.kind(v), VertexKind::Classical(OverPair::Even)))
            .collect();
        CrossingGraph { even, link, loops }
    }

    fn len(&self) -> usize {
        self.even.len()
    }

    /// Removes vertex `v` joining its ports in the given pairs.
    fn smooth(&self, v: usize, pairs: [(usize, usize); 2]) -> CrossingGraph {
        let mut link = self.link.clone();
        let mut loops = self.loops;
        for (p, q) in pairs {
            let (a, b) = (link[slot(v, p)], link[slot(v, q)]);
            if a == slot(v, q) {
                loops += 1;
                continue;
            }
            link[a] = b;
            link[b] = a;
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&w| w != v).collect();
        let mut index = vec![usize::MAX; self.len()];
        for (i, &w) in keep.iter().enumerate() {
            index[w] = i;
        }
        let mut new_link = Vec::with_capacity(4 * keep.len());
        for &w in &keep {
            for p in 0..4 {
                let t = link[slot(w, p)];
                new_link.push(slot(index[vertex_of(t)], t % 4));
            }
        }
        CrossingGraph { even: keep.iter().map(|&w| self.even[w]).collect(), link: new_link, loops }
    }

    /// Vertex sets of the connected components.
    fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            comp[start] = id;
            let mut members = vec![];
            while let Some(v) = stack.pop() {
                members.push(v);
                for p in 0..4 {
                    let w = vertex_of(self.link[slot(v, p)]);
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Canonical relabelling of a connected graph: the least code over all
    /// starting ports, with ports renumbered counterclockwise from the entry port.
    fn canonical(&self) -> (Vec<u32>, CrossingGraph) {
        let n = self.len();
        let mut best: Option<(Vec<u32>, Vec<usize>, Vec<usize>)> = None;
        for start in 0..4 * n {
            let mut order = vec![usize::MAX; n];
            let mut rot = vec![0usize; n];
            let mut queue = vec![vertex_of(start)];
            order[vertex_of(start)] = 0;
            rot[vertex_of(start)] = start % 4;
            let mut code = Vec::with_capacity(9 * n);
            let mut next = 1;
            let mut head = 0;
            while head < queue.len() {
                let v = queue[head];
                head += 1;
                let even_rel = self.even[v] == rot[v].is_multiple_of(2);
                code.push(u32::from(even_rel));
                for i in 0..4 {
                    let t = self.link[slot(v, rot[v] + i)];
                    let w = vertex_of(t);
                    if order[w] == usize::MAX {
                        order[w] = next;
                        rot[w] = t % 4;
                        next += 1;
                        queue.push(w);
                    }
                    code.push(order[w] as u32);
                    code.push(((t % 4 + 4 - rot[w]) % 4) as u32);
                }
            }
            if best.as_ref().is_none_or(|b| code < b.0) {
                best = Some((code, order, rot));
            }
        }
        let (code, order, rot) = best.expect("nonempty graph");
        let mut even = vec![false; n];
        let mut link = vec![0; 4 * n];
        for v in 0..n {
            even[order[v]] = self.even[v] == (rot[v] % 2 == 0);
            for i in 0..4 {
                let t = self.link[slot(v, rot[v] + i)];
                let w = vertex_of(t);
                link[slot(order[v], i)] = slot(order[w], (t % 4 + 4 - rot[w]) % 4);
            }
        }
        (code, CrossingGraph { even, link, loops: 0 })
    }

    fn restrict(&self, members: &[usize]) -> CrossingGraph {
        let mut index = vec![usize::MAX; self.len()];
        for (i, &v) in members.iter().enumerate() {
            index[v] = i;
        }
        let mut link = Vec::with_capacity(4 * members.len());
        for &v in members {
            for p in 0..4 {
                let t = self.link[slot(v, p)];
                link.push(slot(index[vertex_of(t)], t % 4));
            }
        }
        CrossingGraph { even: members.iter().map(|&v| self.even[v]).collect(), link, loops: 0 }
    }
}

/// Memoized skein evaluation of the unnormalized sum `sum A^(a-b) d^loops`.
#[derive(Default)]
struct SkeinMemo {
    cache: HashMap<Vec<u32>, LaurentPoly>,
}

impl SkeinMemo {
    fn eval(&mut self, g: &CrossingGraph) -> LaurentPoly {
        let d = LaurentPoly::loop_value();
        let mut total = d.pow(g.loops as u32);
        for members in g.components() {
            let part = g.restrict(&members);
            total = &total * &self.eval_connected(&part);
        }
        total
    }

    fn eval_connected(&mut self, g: &CrossingGraph) -> LaurentPoly {
        let (key, canon) = g.canonical();
        if let Some(p) = self.cache.get(&key) {
            return p.clone();
        }
        let over = if canon.even[0] { OverPair::Even } else { OverPair::Odd };
        let pairs = |j: Join| [(0, j.partner(0)), (2, j.partner(2))];
        let a = self.eval(&canon.smooth(0, pairs(a_join(over))));
        let b = self.eval(&canon.smooth(0, pairs(b_join(over))));
        let value = &a.shift(1) + &b.shift(-1);
        self.cache.insert(key, value.clone());
        value
    }
}

/// The bracket by recursive skein expansion with memoization on canonical subgraphs.
pub fn bracket_recursive(d: &Diagram) -> Result<LaurentPoly, DiagramError> {
    check_kinds(d)?;
    let g = CrossingGraph::from_diagram(d);
    let total = SkeinMemo::default().eval(&g);
    if g.len() == 0 && g.loops == 0 {
        return Ok(LaurentPoly::one());
    }
    Ok(total.div_exact(&LaurentPoly::loop_value()).expect("every state has a loop"))
}

/// The bracket, normalized so that a round circle has value 1.
pub fn bracket(d: &Diagram) -> Result<LaurentPoly, DiagramError> {
    if d.classical_count() <= 10 {
        bracket_states(d)
    } else {
        bracket_recursive(d)
    }
}

/// `(-A^3)^(-w) <d>`, invariant under all classical and virtual moves.
pub fn f_polynomial(d: &Diagram) -> Result<LaurentPoly, DiagramError> {
    Ok(&LaurentPoly::neg_a_cubed_pow(-d.writhe()) * &bracket(d)?)
}

/// The oriented state sum: every classical crossing of sign `e` weighs
/// `-A^(-3e)` times `A` or `A^-1` for its A- or B-smoothing. Smoothing sites keep
/// their join; loops whose orientation reverses at such sites count as usual.
pub fn f_oriented_state_sum(d: &Diagram) -> Result<LaurentPoly, DiagramError> {
    check_kinds(d)?;
    f_polynomial(d)
}

/// Replaces crossing `v` by a smoothing site; the oriented smoothing follows the strands.
pub fn smooth_crossing(d: &Diagram, v: usize, oriented: bool) -> Result<Diagram, DiagramError> {
    let VertexKind::Classical(over) = d.kind(v) else {
        return Err(DiagramError::PatternMismatch(format!("vertex {v} is not a classical crossing")));
    };
    let positive = d.crossing_sign(v) > 0;
    let join = if oriented == positive { a_join(over) } else { b_join(over) };
    Ok(d.with_kind(v, VertexKind::Smoothing(join)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::SignedGaussCode;
    use crate::diagram::gauss::from_gauss;

    fn diagram(code: &str) -> Diagram {
        from_gauss(&SignedGaussCode::parse(code).unwrap()).unwrap()
    }

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn circle_and_curls() {
        assert_eq!(bracket(&Diagram::circle()).unwrap(), LaurentPoly::one());
        let curl = diagram("O1+U1+");
        assert_eq!(bracket(&curl).unwrap(), p("-A^3"));
        assert_eq!(f_polynomial(&curl).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn trefoil() {
        let t = diagram("O1+U2+O3+U1+O2+U3+");
        assert_eq!(bracket_states(&t).unwrap(), bracket_recursive(&t).unwrap());
        let f = f_polynomial(&t).unwrap();
        // the positive trefoil has Jones polynomial t + t^3 - t^4 with t = A^-4
        assert_eq!(f, p("-A^-16 + A^-12 + A^-4"));
    }

    #[test]
    fn evaluators_agree_on_virtual_knots() {
        for code in ["O1+U2+O3-U1+O2+U3-", "O1-U2-O3+O4+U1-U3+O2-U4+", "O1+O2+U1+U2+", "O1+U2-/U1+O2-"] {
            let d = diagram(code);
            assert_eq!(bracket_states(&d).unwrap(), bracket_recursive(&d).unwrap(), "{code}");
        }
    }

    #[test]
    fn skein_relation_for_oriented_sums() {
        let t = diagram("O1+U2+O3-U1+O2+U3-");
        for v in 0..t.num_vertices() {
            if !matches!(t.kind(v), VertexKind::Classical(_)) {
                continue;
            }
            let zero = f_oriented_state_sum(&smooth_crossing(&t, v, true).unwrap()).unwrap();
            let inf = f_oriented_state_sum(&smooth_crossing(&t, v, false).unwrap()).unwrap();
            let e = t.crossing_sign(v) as i64;
            let rhs = -(&zero.shift(-2 * e)) - inf.shift(-4 * e);
            assert_eq!(f_oriented_state_sum(&t).unwrap(), rhs);
        }
    }
}

