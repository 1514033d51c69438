//! Rotation-sensitive state sums and their tensor-network counterpart.
//!
//! `Z` weighs every state curve `C` by `(-1)^r (A^2r + A^-2r)` with `r` its
//! rotation number; `Z̄` keeps a formal variable `A_|r|` per curve instead. The
//! same quantity arises by cutting a drawing into cups, caps and crossings and
//! contracting the matrices `M` and `R` of the bracket model.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::embed::Embedding;
use crate::diagram::rotation::trace_curves;
use crate::diagram::{port_of, vertex_of, Diagram, DiagramError, VertexKind};
use crate::poly::{LaurentPoly, Monomial, MultiPoly};
use crate::skein::a_join;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantumError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("malformed Morse word: {0}")]
    Morse(String),
    #[error("tensor network has an unpaired index {0}")]
    Unpaired(u32),
    #[error("contraction left an imaginary part")]
    Imaginary,
    #[error("strand width {0} exceeds the limit of {MAX_WIDTH}")]
    TooWide(usize),
}

impl QuantumError {
    pub fn code(&self) -> &'static str {
        match self {
            QuantumError::Diagram(e) => e.code(),
            QuantumError::Morse(_) => "bad_morse_word",
            QuantumError::Unpaired(_) => "unpaired_index",
            QuantumError::Imaginary => "imaginary_residue",
            QuantumError::TooWide(_) => "too_wide",
        }
    }
}

pub const MAX_WIDTH: usize = 22;

/// `(-1)^n (A^2n + A^-2n)`, the value of a curve with rotation number `n`.
pub fn curve_value(n: u32) -> LaurentPoly {
    let n = n as i64;
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let mut p = LaurentPoly::monomial(sign, 2 * n);
    p += &LaurentPoly::monomial(sign, -2 * n);
    p
}

fn check_kinds(d: &Diagram) -> Result<(), DiagramError> {
    for k in d.kinds() {
        match k {
            VertexKind::Classical(_) | VertexKind::Virtual => {}
            VertexKind::Flat => return Err(DiagramError::Unsupported("flat crossing")),
            VertexKind::Node => return Err(DiagramError::Unsupported("rigid vertex")),
            VertexKind::Smoothing(_) => return Err(DiagramError::Unsupported("smoothing site")),
        }
    }
    Ok(())
}

/// The formal state sum `sum_S A^(a-b) prod_C A_|rot C|`.
pub fn z_bar(d: &Diagram) -> Result<MultiPoly, DiagramError> {
    check_kinds(d)?;
    state_sum(d)
}

/// `Z̄` of a flat diagram at `A = 1` (with `A_1 = -2`): every flat crossing is
/// smoothed both ways with weight one.
pub fn z_bar_flat(d: &Diagram) -> Result<MultiPoly, DiagramError> {
    let mut e = d.clone();
    for v in 0..d.num_vertices() {
        match d.kind(v) {
            VertexKind::Flat => e = e.with_kind(v, VertexKind::Classical(crate::diagram::OverPair::Even)),
            VertexKind::Virtual => {}
            _ => return Err(DiagramError::Unsupported("only flat and virtual crossings are allowed")),
        }
    }
    Ok(z_bar_at_one(&state_sum(&e)?))
}

fn state_sum(d: &Diagram) -> Result<MultiPoly, DiagramError> {
    let mut table: HashMap<(i64, BTreeMap<u32, u32>), i64> = HashMap::new();
    if d.num_vertices() == 0 {
        let mut vars = BTreeMap::new();
        if d.free_circles() > 0 {
            vars.insert(1, d.free_circles() as u32);
        }
        table.insert((0, vars), 1);
    } else {
        let emb = Embedding::new(d)?;
        let classical: Vec<usize> =
            (0..d.num_vertices()).filter(|&v| matches!(d.kind(v), VertexKind::Classical(_))).collect();
        if classical.len() > 24 {
            return Err(DiagramError::Invalid("too many crossings for state enumeration".into()));
        }
        let mut position = vec![usize::MAX; d.num_vertices()];
        for (i, &v) in classical.iter().enumerate() {
            position[v] = i;
        }
        for state in 0..(1u64 << classical.len()) {
            let curves = trace_curves(d, |v, p| {
                let VertexKind::Classical(over) = d.kind(v) else { unreachable!() };
                let j = a_join(over);
                let j = if state >> position[v] & 1 == 0 { j } else { crate::skein::b_join(over) };
                j.partner(p)
            });
            let mut vars: BTreeMap<u32, u32> = BTreeMap::new();
            for c in &curves {
                let r = emb.rotation(d, c)?.unsigned_abs() as u32;
                *vars.entry(r).or_insert(0) += 1;
            }
            if d.free_circles() > 0 {
                *vars.entry(1).or_insert(0) += d.free_circles() as u32;
            }
            let b = state.count_ones() as i64;
            let exp = classical.len() as i64 - 2 * b;
            *table.entry((exp, vars)).or_insert(0) += 1;
        }
    }
    let mut z = MultiPoly::zero();
    for ((exp, vars), c) in table {
        z.add_term(Monomial { vars, a_exp: exp }, BigInt::from(c));
    }
    Ok(z)
}

/// Replaces every `A_n` by `(-1)^n (A^2n + A^-2n)`.
pub fn specialize(z: &MultiPoly) -> LaurentPoly {
    z.substitute(|n| Some(curve_value(n))).as_laurent().expect("all variables substituted")
}

/// `Z = sum_S A^(a-b) prod_C (-1)^rot (A^2rot + A^-2rot)`.
pub fn z_invariant(d: &Diagram) -> Result<LaurentPoly, DiagramError> {
    Ok(specialize(&z_bar(d)?))
}

/// `Z̄` with `A_1 = -A^2 - A^-2` substituted, the variable-free part written as a
/// multiple of `A_1` when it is divisible by the loop value.
pub fn z_bar_reduced(z: &MultiPoly) -> MultiPoly {
    let sub = z.substitute(|n| (n == 1).then(|| curve_value(1)));
    let mut free = LaurentPoly::zero();
    let mut rest = MultiPoly::zero();
    for (m, c) in sub.terms() {
        if m.vars.is_empty() {
            free.add_term(m.a_exp, c.clone());
        } else {
            rest.add_term(m.clone(), c.clone());
        }
    }
    match free.div_exact(&curve_value(1)) {
        Some(q) if !free.is_zero() => &rest + &(&MultiPoly::from_laurent(&q) * &MultiPoly::var(1)),
        _ => &rest + &MultiPoly::from_laurent(&free),
    }
}

/// `Z̄` at `A = 1`, with `A_1 = -2`.
pub fn z_bar_at_one(z: &MultiPoly) -> MultiPoly {
    z.substitute(|n| (n == 1).then(|| LaurentPoly::monomial(-2, 0))).at_a_one()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slice {
    /// A minimum creating strands `i` and `i + 1`.
    Cup(usize),
    /// A maximum joining strands `i` and `i + 1`.
    Cap(usize),
    /// Strands `i` and `i + 1` cross with the one rising to the right on top.
    Over(usize),
    /// Strands `i` and `i + 1` cross with the one rising to the right below.
    Under(usize),
    Virt(usize),
}

impl Slice {
    fn position(self) -> usize {
        match self {
            Slice::Cup(i) | Slice::Cap(i) | Slice::Over(i) | Slice::Under(i) | Slice::Virt(i) => i,
        }
    }
}

/// A closed diagram read bottom to top.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MorseWord(pub Vec<Slice>);

impl MorseWord {
    /// Checks positions against the running strand count and returns the widest point.
    pub fn validate(&self) -> Result<usize, QuantumError> {
        let mut width = 0usize;
        let mut widest = 0;
        for (k, s) in self.0.iter().enumerate() {
            let i = s.position();
            match s {
                Slice::Cup(_) if i <= width => width += 2,
                Slice::Cap(_) if i + 2 <= width => width -= 2,
                Slice::Over(_) | Slice::Under(_) | Slice::Virt(_) if i + 2 <= width => {}
                _ => return Err(QuantumError::Morse(format!("slice {k} ({s}) is out of range for {width} strands"))),
            }
            widest = widest.max(width);
        }
        if width != 0 {
            return Err(QuantumError::Morse(format!("{width} strands left open")));
        }
        Ok(widest)
    }
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slice::Cup(i) => write!(f, "cup{i}"),
            Slice::Cap(i) => write!(f, "cap{i}"),
            Slice::Over(i) => write!(f, "over{i}"),
            Slice::Under(i) => write!(f, "under{i}"),
            Slice::Virt(i) => write!(f, "virt{i}"),
        }
    }
}

impl fmt::Display for MorseWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for MorseWord {
    type Err = QuantumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut slices = Vec::new();
        for tok in s.split_whitespace() {
            let split = tok.find(|c: char| c.is_ascii_digit()).ok_or_else(|| QuantumError::Morse(format!("`{tok}` has no position")))?;
            let (name, num) = tok.split_at(split);
            let i: usize = num.parse().map_err(|_| QuantumError::Morse(format!("bad position in `{tok}`")))?;
            slices.push(match name {
                "cup" => Slice::Cup(i),
                "cap" => Slice::Cap(i),
                "over" => Slice::Over(i),
                "under" => Slice::Under(i),
                "virt" => Slice::Virt(i),
                _ => return Err(QuantumError::Morse(format!("unknown slice `{tok}`"))),
            });
        }
        Ok(MorseWord(slices))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    /// `M^ab` at a minimum.
    Cup,
    /// `M_ab` at a maximum.
    Cap,
    /// `R^ab_cd = A M^ab M_cd + A^-1 d^a_c d^b_d`.
    R,
    /// `R̄^ab_cd = A^-1 M^ab M_cd + A d^a_c d^b_d`.
    RBar,
    /// `V^ab_cd = d^a_d d^b_c`.
    V,
}

/// One tensor; `upper` indices point up the page (`a` left, `b` right) and
/// `lower` ones down (`c` left, `d` right).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub kind: FactorKind,
    pub upper: Vec<u32>,
    pub lower: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorNetwork {
    pub factors: Vec<Factor>,
}

impl fmt::Display for TensorNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |k: FactorKind| match k {
            FactorKind::Cup | FactorKind::Cap => "M",
            FactorKind::R => "R",
            FactorKind::RBar => "Rbar",
            FactorKind::V => "V",
        };
        let idx = |v: &[u32]| v.iter().map(|i| format!("i{i}")).collect::<Vec<_>>().join(",");
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| match (x.upper.is_empty(), x.lower.is_empty()) {
                (false, true) => format!("{}^{{{}}}", name(x.kind), idx(&x.upper)),
                (true, false) => format!("{}_{{{}}}", name(x.kind), idx(&x.lower)),
                _ => format!("{}^{{{}}}_{{{}}}", name(x.kind), idx(&x.upper), idx(&x.lower)),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// One factor per slice with indices paired along the strands.
pub fn compile_morse(w: &MorseWord) -> Result<TensorNetwork, QuantumError> {
    w.validate()?;
    let mut next = 0u32;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut strands: Vec<u32> = Vec::new();
    let mut factors = Vec::with_capacity(w.0.len());
    for s in &w.0 {
        match *s {
            Slice::Cup(i) => {
                let (a, b) = (fresh(), fresh());
                strands.splice(i..i, [a, b]);
                factors.push(Factor { kind: FactorKind::Cup, upper: vec![a, b], lower: vec![] });
            }
            Slice::Cap(i) => {
                let lower: Vec<u32> = strands.drain(i..i + 2).collect();
                factors.push(Factor { kind: FactorKind::Cap, upper: vec![], lower });
            }
            Slice::Over(i) | Slice::Under(i) | Slice::Virt(i) => {
                let (a, b) = (fresh(), fresh());
                let lower = vec![strands[i], strands[i + 1]];
                strands[i] = a;
                strands[i + 1] = b;
                let kind = match s {
                    Slice::Over(_) => FactorKind::RBar,
                    Slice::Under(_) => FactorKind::R,
                    _ => FactorKind::V,
                };
                factors.push(Factor { kind, upper: vec![a, b], lower });
            }
        }
    }
    Ok(TensorNetwork { factors })
}

/// `re + i im` with Laurent coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Gauss {
    re: LaurentPoly,
    im: LaurentPoly,
}

impl Gauss {
    fn real(p: LaurentPoly) -> Gauss {
        Gauss { re: p, im: LaurentPoly::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &Gauss) -> Gauss {
        Gauss { re: &(&self.re * &o.re) - &(&self.im * &o.im), im: &(&self.re * &o.im) + &(&self.im * &o.re) }
    }

    fn add_assign(&mut self, o: &Gauss) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

/// `M_ab = M^ab` with `M_12 = iA`, `M_21 = -iA^-1` and zero diagonal; indices 0 and 1.
fn m_entry(a: usize, b: usize) -> Gauss {
    match (a, b) {
        (0, 1) => Gauss { re: LaurentPoly::zero(), im: LaurentPoly::monomial(1, 1) },
        (1, 0) => Gauss { re: LaurentPoly::zero(), im: LaurentPoly::monomial(-1, -1) },
        _ => Gauss::default(),
    }
}

fn crossing_entry(kind: FactorKind, a: usize, b: usize, c: usize, d: usize) -> Gauss {
    let delta = |x: bool| if x { LaurentPoly::one() } else { LaurentPoly::zero() };
    let (mm, dd) = match kind {
        FactorKind::R => (1, -1),
        FactorKind::RBar => (-1, 1),
        _ => {
            return Gauss::real(delta(a == d && b == c));
        }
    };
    let mut g = m_entry(a, b).mul(&m_entry(c, d));
    g.re = g.re.shift(mm);
    g.im = g.im.shift(mm);
    g.re += &delta(a == c && b == d).shift(dd);
    g
}

fn drop_bits(assign: u64, positions: &[usize]) -> u64 {
    let mut sorted = positions.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut x = assign;
    for p in sorted {
        let low = x & ((1u64 << p) - 1);
        x = ((x >> (p + 1)) << p) | low;
    }
    x
}

/// Contracts a closed network, consuming factors in order while tracking the
/// open indices.
pub fn evaluate_tensor(n: &TensorNetwork) -> Result<LaurentPoly, QuantumError> {
    let mut open: Vec<u32> = Vec::new();
    let mut vec: HashMap<u64, Gauss> = HashMap::from([(0, Gauss::real(LaurentPoly::one()))]);
    for f in &n.factors {
        let mut pos = Vec::with_capacity(f.lower.len());
        for l in &f.lower {
            pos.push(open.iter().position(|x| x == l).ok_or(QuantumError::Unpaired(*l))?);
        }
        if f.upper.iter().any(|u| open.contains(u)) {
            return Err(QuantumError::Morse("index produced twice".into()));
        }
        let mut next: HashMap<u64, Gauss> = HashMap::new();
        let remaining = open.len() - pos.len();
        for (assign, val) in &vec {
            let lower: Vec<usize> = pos.iter().map(|&p| (assign >> p & 1) as usize).collect();
            let base = drop_bits(*assign, &pos);
            let uppers: Vec<(usize, usize)> = if f.upper.is_empty() { vec![(0, 0)] } else { vec![(0, 0), (0, 1), (1, 0), (1, 1)] };
            for (a, b) in uppers {
                let coef = match f.kind {
                    FactorKind::Cup => m_entry(a, b),
                    FactorKind::Cap => m_entry(lower[0], lower[1]),
                    k => crossing_entry(k, a, b, lower[0], lower[1]),
                };
                if coef.is_zero() {
                    continue;
                }
                let key = if f.upper.is_empty() {
                    base
                } else {
                    base | (a as u64) << remaining | (b as u64) << (remaining + 1)
                };
                next.entry(key).or_default().add_assign(&val.mul(&coef));
            }
        }
        next.retain(|_, v| !v.is_zero());
        vec = next;
        let mut sorted = pos.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        for p in sorted {
            open.remove(p);
        }
        open.extend(&f.upper);
        if open.len() > MAX_WIDTH {
            return Err(QuantumError::TooWide(open.len()));
        }
    }
    if let Some(&l) = open.first() {
        return Err(QuantumError::Unpaired(l));
    }
    let g = vec.remove(&0).unwrap_or_default();
    if !g.im.is_zero() {
        return Err(QuantumError::Imaginary);
    }
    Ok(g.re)
}

/// Cuts the drawing of `d` into slices by sweeping a generic direction upward.
pub fn morse_from_diagram(d: &Diagram) -> Result<MorseWord, QuantumError> {
    check_kinds(d)?;
    let mut slices = Vec::new();
    if d.num_vertices() > 0 {
        let emb = Embedding::new(d)?;
        slices = sweep(d, &emb)?;
    }
    for _ in 0..d.free_circles() {
        slices.extend([Slice::Cup(0), Slice::Cap(0)]);
    }
    Ok(MorseWord(slices))
}

fn sweep(d: &Diagram, emb: &Embedding) -> Result<Vec<Slice>, QuantumError> {
    let (sin, cos) = 0.1234567f64.sin_cos();
    let rotate = |p: (f64, f64)| (p.0 * cos - p.1 * sin, p.0 * sin + p.1 * cos);
    // Points: vertices, then for each slot the half point, then for each edge the middle.
    let nv = d.num_vertices();
    let ns = 4 * nv;
    let edges = d.edges();
    let mut edge_of = vec![0; ns];
    for (k, &(s, t)) in edges.iter().enumerate() {
        edge_of[s] = k;
        edge_of[t] = k;
    }
    let mut pts: Vec<(f64, f64)> = (0..nv).map(|v| rotate(emb.vertex_position(v))).collect();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); nv + ns + edges.len()];
    let mut slot_leg = vec![0usize; ns];
    for s in 0..ns {
        let poly = emb.polyline(d, &[s]);
        pts.push(rotate(poly[1]));
    }
    for &(s, _) in &edges {
        pts.push(rotate(emb.polyline(d, &[s])[2]));
    }
    // segment list; each segment joins two points
    let mut segs: Vec<(usize, usize)> = Vec::new();
    let add_seg = |a: usize, b: usize, nbrs: &mut Vec<Vec<usize>>, segs: &mut Vec<(usize, usize)>| {
        segs.push((a, b));
        nbrs[a].push(segs.len() - 1);
        nbrs[b].push(segs.len() - 1);
        segs.len() - 1
    };
    for s in 0..ns {
        slot_leg[s] = add_seg(vertex_of(s), nv + s, &mut nbrs, &mut segs);
        add_seg(nv + s, nv + ns + edge_of[s], &mut nbrs, &mut segs);
    }
    let height = |i: usize| (pts[i].1, i);
    let other = |seg: usize, p: usize| if segs[seg].0 == p { segs[seg].1 } else { segs[seg].0 };
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| height(a).partial_cmp(&height(b)).expect("finite coordinates"));
    let mut rank = vec![0; pts.len()];
    for (r, &p) in order.iter().enumerate() {
        rank[p] = r;
    }
    let angle = |p: usize, q: usize| {
        let a = (pts[q].1 - pts[p].1).atan2(pts[q].0 - pts[p].0);
        if a < 0.0 {
            a + 2.0 * std::f64::consts::PI
        } else {
            a
        }
    };
    // x-coordinate of a segment at height y
    let x_at = |seg: usize, y: f64| {
        let (a, b) = segs[seg];
        let (pa, pb) = (pts[a], pts[b]);
        if (pb.1 - pa.1).abs() < 1e-300 {
            pa.0
        } else {
            pa.0 + (pb.0 - pa.0) * (y - pa.1) / (pb.1 - pa.1)
        }
    };
    let mut active: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for &p in &order {
        let mut down: Vec<usize> = nbrs[p].iter().copied().filter(|&s| rank[other(s, p)] < rank[p]).collect();
        let mut up: Vec<usize> = nbrs[p].iter().copied().filter(|&s| rank[other(s, p)] > rank[p]).collect();
        // left to right
        down.sort_by(|&a, &b| angle(p, other(a, p)).partial_cmp(&angle(p, other(b, p))).unwrap());
        up.sort_by(|&a, &b| angle(p, other(b, p)).partial_cmp(&angle(p, other(a, p))).unwrap());
        let i = if down.is_empty() {
            active.iter().filter(|&&s| x_at(s, pts[p].1) < pts[p].0).count()
        } else {
            let i = active.iter().position(|&s| s == down[0]).ok_or_else(|| QuantumError::Morse("sweep lost a strand".into()))?;
            if active.get(i..i + down.len()) != Some(&down[..]) {
                return Err(QuantumError::Morse("legs of a vertex are not adjacent in the sweep".into()));
            }
            i
        };
        let k = down.len();
        if p >= nv {
            match k {
                0 => out.push(Slice::Cup(i)),
                2 => out.push(Slice::Cap(i)),
                _ => {}
            }
        } else {
            // the strand rising to the right through the crossing
            let slash_leg = match k {
                0 => up[0],
                4 => down[1],
                _ => down[0],
            };
            let slash_slot = slot_leg.iter().position(|&l| l == slash_leg).expect("vertex leg");
            let slice = |j: usize| match d.kind(p) {
                VertexKind::Virtual => Slice::Virt(j),
                VertexKind::Classical(o) if o.contains(port_of(slash_slot)) => Slice::Over(j),
                _ => Slice::Under(j),
            };
            match k {
                0 => out.extend([Slice::Cup(i), Slice::Cup(i + 2), slice(i + 1)]),
                1 => out.extend([Slice::Cup(i + 1), slice(i)]),
                2 => out.push(slice(i)),
                3 => out.extend([slice(i), Slice::Cap(i + 1)]),
                _ => out.extend([slice(i + 1), Slice::Cap(i), Slice::Cap(i)]),
            }
        }
        active.splice(i..i + k, up.iter().copied());
    }
    debug_assert!(active.is_empty());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::SignedGaussCode;
    use crate::diagram::gauss::from_gauss;
    use crate::skein::bracket;

    fn diagram(code: &str) -> Diagram {
        from_gauss(&SignedGaussCode::parse(code).unwrap()).unwrap()
    }

    #[test]
    fn circle() {
        let w: MorseWord = "cup0 cap0".parse().unwrap();
        let n = compile_morse(&w).unwrap();
        assert_eq!(n.factors.len(), 2);
        assert_eq!(evaluate_tensor(&n).unwrap(), LaurentPoly::loop_value());
        assert_eq!(z_invariant(&Diagram::circle()).unwrap(), LaurentPoly::loop_value());
        assert_eq!(morse_from_diagram(&Diagram::circle()).unwrap(), w);
        let two: MorseWord = "cup0 cup0 cap0 cap0".parse().unwrap();
        assert_eq!(evaluate_tensor(&compile_morse(&two).unwrap()).unwrap(), LaurentPoly::loop_value().pow(2));
    }

    #[test]
    fn figure_eight_curve_has_value_two() {
        let w: MorseWord = "cup0 cup2 virt1 cap0 cap0".parse().unwrap();
        assert_eq!(evaluate_tensor(&compile_morse(&w).unwrap()).unwrap(), LaurentPoly::monomial(2, 0));
    }

    #[test]
    fn classical_z_is_d_times_bracket() {
        for code in ["O1+U2+O3+U1+O2+U3+", "O1-U2-O3-U1-O2-U3-", "O1-U2-O3+U4+O2-U1-O4+U3+"] {
            let d = diagram(code);
            let expected = &LaurentPoly::loop_value() * &bracket(&d).unwrap();
            assert_eq!(z_invariant(&d).unwrap(), expected, "{code}");
            let w = morse_from_diagram(&d).unwrap();
            assert_eq!(evaluate_tensor(&compile_morse(&w).unwrap()).unwrap(), expected, "{code}: {w}");
        }
    }

    #[test]
    fn tensor_path_matches_state_sum_on_virtual_knots() {
        for code in ["O1+U2+O3-U1+O2+U3-", "O1+O2+U1+U2+", "O1-O2-U1-U2-"] {
            let d = diagram(code);
            let w = morse_from_diagram(&d).unwrap();
            assert_eq!(evaluate_tensor(&compile_morse(&w).unwrap()).unwrap(), z_invariant(&d).unwrap(), "{code}");
        }
    }

    #[test]
    fn classical_z_bar_uses_only_a1() {
        let z = z_bar(&diagram("O1+U2+O3+U1+O2+U3+")).unwrap();
        assert_eq!(z.variables(), vec![1]);
    }
}
