//! Presentations read off a diagram and the invariants computed from them:
//! coloring and homomorphism counts, the determinant and the Alexander polynomial.

use std::fmt;

use num_bigint::BigInt;
use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::ops::{find_flanked_crossings, remove_flanked_at};
use crate::diagram::{opposite, port_of, slot, vertex_of, Diagram, DiagramError, OverPair, Slot, VertexKind};
use crate::poly::LaurentPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("search space too large: more than {0} assignments would be visited")]
    Budget(u64),
    #[error("table does not satisfy the quandle axioms: {0}")]
    NotAQuandle(String),
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(i64, u64),
    #[error("component {0} does not exist")]
    NoComponent(usize),
}

impl AlgebraError {
    pub fn code(&self) -> &'static str {
        match self {
            AlgebraError::Diagram(e) => e.code(),
            AlgebraError::Budget(_) => "budget_exceeded",
            AlgebraError::NotAQuandle(_) => "not_a_quandle",
            AlgebraError::NotInvertible(..) => "not_invertible",
            AlgebraError::NoComponent(_) => "no_component",
        }
    }
}

/// Upper bound on visited search nodes when counting colorings.
pub const SEARCH_BUDGET: u64 = 100_000_000;

/// One crossing read as `out = in ^ over` (sign `+1`) or `out = in ^ ~over` (sign `-1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossingRelation {
    pub out: usize,
    pub inc: usize,
    pub over: usize,
    pub sign: i8,
}

/// Arcs of a diagram and one relation per classical crossing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcStructure {
    pub arcs: usize,
    /// Arc of the edge through each slot.
    pub arc_of_slot: Vec<usize>,
    pub relations: Vec<CrossingRelation>,
    /// Vertex of each relation.
    pub crossings: Vec<usize>,
}

pub fn arc_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i}")
    }
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

fn is_under(d: &Diagram, t: Slot) -> bool {
    matches!(d.kind(vertex_of(t)), VertexKind::Classical(o) if !o.contains(port_of(t)))
}

/// Arcs run from one classical undercrossing to the next; free circles are arcs
/// of their own and come last.
pub fn arc_structure(d: &Diagram) -> Result<ArcStructure, DiagramError> {
    check_kinds(d)?;
    d.validate()?;
    let mut arc_of_slot = vec![usize::MAX; 4 * d.num_vertices()];
    let mut arcs = 0;
    for walk in d.strand_walks() {
        let n = walk.len();
        // index of an edge that starts a new arc
        let start = (0..n).find(|&i| is_under(d, d.partner(walk[(i + n - 1) % n]))).unwrap_or(0);
        for k in 0..n {
            let s = walk[(start + k) % n];
            if k > 0 && is_under(d, d.partner(walk[(start + k + n - 1) % n])) {
                arcs += 1;
            }
            arc_of_slot[s] = arcs;
            arc_of_slot[d.partner(s)] = arcs;
        }
        arcs += 1;
    }
    let mut relations = Vec::new();
    let mut crossings = Vec::new();
    for v in 0..d.num_vertices() {
        let VertexKind::Classical(o) = d.kind(v) else { continue };
        let base = if o == OverPair::Even { 1 } else { 0 };
        let inc_port = if d.is_out(slot(v, base)) { base + 2 } else { base };
        let inc = slot(v, inc_port);
        relations.push(CrossingRelation {
            out: arc_of_slot[opposite(inc)],
            inc: arc_of_slot[inc],
            over: arc_of_slot[slot(v, (base + 1) % 4)],
            sign: d.crossing_sign(v),
        });
        crossings.push(v);
    }
    Ok(ArcStructure { arcs: arcs + d.free_circles(), arc_of_slot, relations, crossings })
}

/// A generator raised to `+1` or `-1`.
pub type Letter = (usize, i8);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRelation {
    pub lhs: usize,
    pub rhs: Vec<Letter>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relations: Vec<GroupRelation>,
}

/// `c = b^-1 a b` at positive crossings and `c = b a b^-1` at negative ones.
pub fn wirtinger_presentation(d: &Diagram) -> Result<GroupPresentation, AlgebraError> {
    let s = arc_structure(d)?;
    let relations = s
        .relations
        .iter()
        .map(|r| GroupRelation { lhs: r.out, rhs: vec![(r.over, -r.sign), (r.inc, 1), (r.over, r.sign)] })
        .collect();
    Ok(GroupPresentation { generators: s.arcs, relations })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuandleRelation {
    pub lhs: usize,
    pub base: usize,
    pub exponent: usize,
    /// `false` for the inverse operation `base ^ ~exponent`.
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuandlePresentation {
    pub generators: usize,
    pub relations: Vec<QuandleRelation>,
    pub involutory: bool,
}

pub fn quandle_presentation(d: &Diagram, involutory: bool) -> Result<QuandlePresentation, AlgebraError> {
    let s = arc_structure(d)?;
    let relations = s
        .relations
        .iter()
        .map(|r| QuandleRelation { lhs: r.out, base: r.inc, exponent: r.over, positive: involutory || r.sign > 0 })
        .collect();
    Ok(QuandlePresentation { generators: s.arcs, relations, involutory })
}

#[derive(Serialize)]
struct RelationJson {
    lhs: String,
    rhs: String,
}

#[derive(Serialize)]
struct PresentationJson {
    generators: Vec<String>,
    relations: Vec<RelationJson>,
}

impl GroupPresentation {
    pub fn to_json(&self) -> serde_json::Value {
        let rel = |r: &GroupRelation| RelationJson {
            lhs: arc_name(r.lhs),
            rhs: r
                .rhs
                .iter()
                .map(|&(g, e)| if e < 0 { format!("{}^-1", arc_name(g)) } else { arc_name(g) })
                .collect::<Vec<_>>()
                .join(" "),
        };
        serde_json::to_value(PresentationJson {
            generators: (0..self.generators).map(arc_name).collect(),
            relations: self.relations.iter().map(rel).collect(),
        })
        .expect("serializable")
    }
}

impl fmt::Display for QuandleRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = if self.positive { "" } else { "~" };
        write!(f, "{} = {}^{}{}", arc_name(self.lhs), arc_name(self.base), bar, arc_name(self.exponent))
    }
}

impl QuandlePresentation {
    pub fn to_json(&self) -> serde_json::Value {
        let rel = |r: &QuandleRelation| {
            let bar = if r.positive { "" } else { "~" };
            RelationJson { lhs: arc_name(r.lhs), rhs: format!("{}^{}{}", arc_name(r.base), bar, arc_name(r.exponent)) }
        };
        serde_json::to_value(PresentationJson {
            generators: (0..self.generators).map(arc_name).collect(),
            relations: self.relations.iter().map(rel).collect(),
        })
        .expect("serializable")
    }
}

/// A finite quandle given by `a * b` and its inverse `a / b`, so `(a * b) / b = a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuandle {
    pub name: String,
    op: Vec<Vec<u32>>,
    inv: Vec<Vec<u32>>,
}

impl FiniteQuandle {
    /// Checks idempotence, invertibility of right multiplication and right
    /// self-distributivity.
    pub fn new(name: impl Into<String>, op: Vec<Vec<u32>>) -> Result<FiniteQuandle, AlgebraError> {
        let n = op.len();
        let bad = |m: String| Err(AlgebraError::NotAQuandle(m));
        if op.iter().any(|row| row.len() != n || row.iter().any(|&x| x as usize >= n)) {
            return bad("table is not square".into());
        }
        let mut inv = vec![vec![u32::MAX; n]; n];
        for a in 0..n {
            if op[a][a] as usize != a {
                return bad(format!("{a} * {a} != {a}"));
            }
            for b in 0..n {
                let c = op[a][b] as usize;
                if inv[c][b] != u32::MAX {
                    return bad(format!("right multiplication by {b} is not injective"));
                }
                inv[c][b] = a as u32;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let l = op[op[a][b] as usize][c];
                    let r = op[op[a][c] as usize][op[b][c] as usize];
                    if l != r {
                        return bad(format!("({a}*{b})*{c} != ({a}*{c})*({b}*{c})"));
                    }
                }
            }
        }
        Ok(FiniteQuandle { name: name.into(), op, inv })
    }

    pub fn size(&self) -> usize {
        self.op.len()
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.op[a][b] as usize
    }

    pub fn inv(&self, a: usize, b: usize) -> usize {
        self.inv[a][b] as usize
    }

    pub fn is_involutory(&self) -> bool {
        (0..self.size()).all(|a| (0..self.size()).all(|b| self.op[a][b] == self.inv[a][b]))
    }

    /// `a * b = 2b - a` on `Z/n`.
    pub fn dihedral(n: usize) -> FiniteQuandle {
        let op = (0..n).map(|a| (0..n).map(|b| ((2 * b + n - a) % n) as u32).collect()).collect();
        FiniteQuandle::new(format!("R{n}"), op).expect("dihedral quandle")
    }

    /// `a * b = t a + (1 - t) b` on `Z/n`.
    pub fn alexander(n: u64, t: i64) -> Result<FiniteQuandle, AlgebraError> {
        let m = n as i64;
        let t = t.rem_euclid(m);
        if num_integer::gcd(t, m) != 1 {
            return Err(AlgebraError::NotInvertible(t, n));
        }
        let op = (0..m).map(|a| (0..m).map(|b| ((t * a + (1 - t) * b).rem_euclid(m)) as u32).collect()).collect();
        FiniteQuandle::new(format!("Alex({n},{t})"), op)
    }

    /// `a * b = b^-1 a b` on the elements of a group.
    pub fn conjugation(g: &FiniteGroup) -> FiniteQuandle {
        let n = g.order();
        let op = (0..n).map(|a| (0..n).map(|b| g.mul(g.mul(g.inverse(b), a), b) as u32).collect()).collect();
        FiniteQuandle::new(format!("Conj({})", g.name), op).expect("conjugation quandle")
    }
}

/// A permutation group with its multiplication table; `mul(a, b)` applies `a` first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_permutations(name: impl Into<String>, gens: &[Vec<usize>]) -> FiniteGroup {
        let degree = gens.first().map_or(1, |g| g.len());
        let compose = |a: &[usize], b: &[usize]| a.iter().map(|&x| b[x]).collect::<Vec<usize>>();
        let mut elems: Vec<Vec<usize>> = vec![(0..degree).collect()];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let e = compose(&elems[i], g);
                if !elems.contains(&e) {
                    elems.push(e);
                }
            }
            i += 1;
        }
        let index = |p: &[usize]| elems.iter().position(|e| e == p).expect("closed");
        let table: Vec<Vec<usize>> =
            elems.iter().map(|a| elems.iter().map(|b| index(&compose(a, b))).collect()).collect();
        let inverse = (0..elems.len()).map(|a| (0..elems.len()).find(|&b| table[a][b] == 0).expect("group")).collect();
        FiniteGroup { name: name.into(), table, inverse }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]])
    }

    pub fn d4() -> FiniteGroup {
        FiniteGroup::from_permutations("D4", &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
    }

    pub fn a4() -> FiniteGroup {
        FiniteGroup::from_permutations("A4", &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
    }

    pub fn battery() -> Vec<FiniteGroup> {
        vec![FiniteGroup::s3(), FiniteGroup::d4(), FiniteGroup::a4()]
    }
}

/// Counts assignments of quandle elements to generators with `lhs = base * exponent`
/// (or `/` for negative relations). Values forced by two known entries of a
/// relation are propagated before branching.
fn count_solutions(gens: usize, rels: &[QuandleRelation], q: &FiniteQuandle) -> Result<BigInt, AlgebraError> {
    let mut by_gen: Vec<Vec<usize>> = vec![Vec::new(); gens];
    for (i, r) in rels.iter().enumerate() {
        for g in [r.lhs, r.base, r.exponent] {
            if !by_gen[g].contains(&i) {
                by_gen[g].push(i);
            }
        }
    }
    let mut search = Search { rels, q, by_gen, value: vec![None; gens], visited: 0 };
    search.run()
}

struct Search<'a> {
    rels: &'a [QuandleRelation],
    q: &'a FiniteQuandle,
    by_gen: Vec<Vec<usize>>,
    value: Vec<Option<usize>>,
    visited: u64,
}

impl Search<'_> {
    /// Assigns `g = x` and everything it forces; returns the assigned generators,
    /// or `None` after undoing them on a contradiction.
    fn assign(&mut self, g: usize, x: usize) -> Option<Vec<usize>> {
        let mut trail = vec![g];
        self.value[g] = Some(x);
        let mut queue = vec![g];
        while let Some(h) = queue.pop() {
            for &ri in &self.by_gen[h] {
                let r = &self.rels[ri];
                let (l, b, e) = (self.value[r.lhs], self.value[r.base], self.value[r.exponent]);
                let forced = match (l, b, e) {
                    (Some(l), Some(b), Some(e)) => {
                        let ok = if r.positive { self.q.op(b, e) == l } else { self.q.inv(b, e) == l };
                        if ok {
                            continue;
                        }
                        None
                    }
                    (None, Some(b), Some(e)) => {
                        Some((r.lhs, if r.positive { self.q.op(b, e) } else { self.q.inv(b, e) }))
                    }
                    (Some(l), None, Some(e)) => {
                        Some((r.base, if r.positive { self.q.inv(l, e) } else { self.q.op(l, e) }))
                    }
                    _ => continue,
                };
                match forced {
                    Some((t, y)) => {
                        self.value[t] = Some(y);
                        trail.push(t);
                        queue.push(t);
                    }
                    None => {
                        for &t in &trail {
                            self.value[t] = None;
                        }
                        return None;
                    }
                }
            }
        }
        Some(trail)
    }

    fn pick(&self) -> Option<usize> {
        let free = (0..self.value.len()).filter(|&g| self.value[g].is_none());
        // prefer generators that act as exponents of many relations
        free.max_by_key(|&g| {
            let w = self.by_gen[g].iter().filter(|&&ri| self.rels[ri].exponent == g).count();
            (w, std::cmp::Reverse(g))
        })
    }

    fn run(&mut self) -> Result<BigInt, AlgebraError> {
        let Some(g) = self.pick() else { return Ok(BigInt::one()) };
        // generators that appear in no relation multiply the count
        if self.by_gen[g].is_empty() {
            self.value[g] = Some(0);
            let rest = self.run();
            self.value[g] = None;
            return Ok(rest? * self.q.size());
        }
        let mut total = BigInt::zero();
        for x in 0..self.q.size() {
            self.visited += 1;
            if self.visited > SEARCH_BUDGET {
                return Err(AlgebraError::Budget(SEARCH_BUDGET));
            }
            if let Some(trail) = self.assign(g, x) {
                let r = self.run();
                for &t in &trail {
                    self.value[t] = None;
                }
                total += r?;
            }
        }
        Ok(total)
    }
}

/// Number of colorings of the presentation by `q`.
pub fn count_colorings(p: &QuandlePresentation, q: &FiniteQuandle) -> Result<BigInt, AlgebraError> {
    count_solutions(p.generators, &p.relations, q)
}

/// Number of homomorphisms from the presented group to `g`.
pub fn count_group_homs(p: &GroupPresentation, g: &FiniteGroup) -> Result<BigInt, AlgebraError> {
    // every relation has the form c = b^-e a b^e, a coloring by the conjugation quandle
    let rels: Vec<QuandleRelation> = p
        .relations
        .iter()
        .map(|r| match r.rhs[..] {
            [(b, e1), (a, 1), (b2, e2)] if b == b2 && e1 == -e2 => {
                QuandleRelation { lhs: r.lhs, base: a, exponent: b, positive: e2 > 0 }
            }
            _ => panic!("not a conjugation relation"),
        })
        .collect();
    count_solutions(p.generators, &rels, &FiniteQuandle::conjugation(g))
}

/// Colorings by the dihedral quandle of order `n`.
pub fn dihedral_colorings(d: &Diagram, n: usize) -> Result<BigInt, AlgebraError> {
    count_colorings(&quandle_presentation(d, true)?, &FiniteQuandle::dihedral(n))
}

pub fn alexander_coloring_count(d: &Diagram, n: u64, t: i64) -> Result<BigInt, AlgebraError> {
    count_colorings(&quandle_presentation(d, false)?, &FiniteQuandle::alexander(n, t)?)
}

/// Fraction-free elimination; returns the determinant of a square matrix.
fn bareiss<T: Clone + PartialEq>(
    mut m: Vec<Vec<T>>,
    zero: T,
    one: T,
    sub: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
    div: impl Fn(&T, &T) -> T,
    neg: impl Fn(&T) -> T,
) -> T {
    let n = m.len();
    if n == 0 {
        return one;
    }
    let mut sign_flip = false;
    let mut prev = one;
    for k in 0..n - 1 {
        if m[k][k] == zero {
            match (k + 1..n).find(|&i| m[i][k] != zero) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = sub(&mul(&m[i][j], &m[k][k]), &mul(&m[i][k], &m[k][j]));
                m[i][j] = div(&x, &prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        neg(&d)
    } else {
        d
    }
}

/// Determinants of the maximal square minors of `m` with its last column deleted.
///
/// Every row sums to zero, so deleting a column loses nothing; for virtual
/// diagrams the rows are not dependent and all row choices are needed.
fn column_minors<T: Clone + PartialEq>(
    m: &[Vec<T>],
    cols: usize,
    zero: T,
    one: T,
    sub: impl Fn(&T, &T) -> T + Copy,
    mul: impl Fn(&T, &T) -> T + Copy,
    div: impl Fn(&T, &T) -> T + Copy,
    neg: impl Fn(&T) -> T + Copy,
) -> Vec<T> {
    let k = cols.saturating_sub(1);
    m.iter()
        .map(|row| row[..k].to_vec())
        .combinations(k)
        .map(|rows| bareiss(rows, zero.clone(), one.clone(), sub, mul, div, neg))
        .collect()
}

/// The determinant: the gcd of the maximal minors of the relation matrix of
/// `c = 2b - a` with one column deleted.
pub fn determinant(d: &Diagram) -> Result<BigInt, AlgebraError> {
    let s = arc_structure(d)?;
    let mut m = vec![vec![BigInt::zero(); s.arcs]; s.relations.len()];
    for (i, r) in s.relations.iter().enumerate() {
        for (col, c) in [(r.out, -1), (r.inc, -1), (r.over, 2)] {
            m[i][col] += c;
        }
    }
    let minors = column_minors(&m, s.arcs, BigInt::zero(), BigInt::one(), |a, b| a - b, |a, b| a * b, |a, b| a / b, |a| -a);
    Ok(minors.iter().fold(BigInt::zero(), |g, x| g.gcd(x)))
}

/// The Alexander matrix over `Z[t, t^-1]`, rows `out - t in - (1 - t) over` at
/// positive crossings and `t out - in - (t - 1) over` at negative ones.
pub fn alexander_matrix(d: &Diagram) -> Result<Vec<Vec<LaurentPoly>>, AlgebraError> {
    let s = arc_structure(d)?;
    let t = LaurentPoly::monomial(1, 1);
    let one = LaurentPoly::one();
    let mut m = vec![vec![LaurentPoly::zero(); s.arcs]; s.relations.len()];
    for (i, r) in s.relations.iter().enumerate() {
        let entries = if r.sign > 0 {
            [(r.out, one.clone()), (r.inc, -&t), (r.over, &t - &one)]
        } else {
            [(r.out, t.clone()), (r.inc, -&one), (r.over, &one - &t)]
        };
        for (col, e) in entries {
            m[i][col] += &e;
        }
    }
    Ok(m)
}

/// The gcd of the maximal minors of the Alexander matrix with one column
/// deleted, shifted to start at `t^0` with a positive leading coefficient.
pub fn alexander_polynomial(d: &Diagram) -> Result<LaurentPoly, AlgebraError> {
    let s = arc_structure(d)?;
    let m = alexander_matrix(d)?;
    let minors = column_minors(
        &m,
        s.arcs,
        LaurentPoly::zero(),
        LaurentPoly::one(),
        |a, b| a - b,
        |a, b| a * b,
        |a, b| a.div_exact(b).expect("Bareiss division is exact"),
        |a| -a,
    );
    Ok(normalize_alexander(&minors.iter().fold(LaurentPoly::zero(), |g, x| poly_gcd(&g, x))))
}

/// Ascending coefficients of `p` shifted to start at `t^0`.
fn dense(p: &LaurentPoly) -> Vec<BigInt> {
    let (Some(lo), Some(hi)) = (p.min_exp(), p.max_exp()) else { return vec![] };
    (lo..=hi).map(|e| p.coeff(e)).collect()
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

/// Pseudo-remainder of `a` by `b` (`b` nonzero).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonzero").clone();
    while r.len() >= b.len() {
        let lr = r.last().expect("nonempty").clone();
        let shift = r.len() - b.len();
        for x in r.iter_mut() {
            *x *= &lb;
        }
        for (i, y) in b.iter().enumerate() {
            r[shift + i] -= &lr * y;
        }
        trim(&mut r);
        let c = content(&r);
        if !c.is_zero() {
            for x in r.iter_mut() {
                *x /= &c;
            }
        }
    }
    r
}

/// Gcd in `Z[t, t^-1]`, up to units.
fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let (mut x, mut y) = (dense(a), dense(b));
    if x.is_empty() {
        return b.clone();
    }
    if y.is_empty() {
        return a.clone();
    }
    let c = content(&x).gcd(&content(&y));
    for v in [&mut x, &mut y] {
        let k = content(v);
        for e in v.iter_mut() {
            *e /= &k;
        }
    }
    while !y.is_empty() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = r;
    }
    let k = content(&x);
    LaurentPoly::from_terms(x.into_iter().enumerate().map(|(i, e)| (i as i64, e / &k * &c)))
}

pub fn normalize_alexander(p: &LaurentPoly) -> LaurentPoly {
    let Some(lo) = p.min_exp() else { return p.clone() };
    let q = p.shift(-lo);
    if q.coeff(q.max_exp().expect("nonzero")).is_negative() {
        -&q
    } else {
        q
    }
}

/// Generators of the arcs passed over while travelling along component `component`
/// under them, with the crossing signs, rotated to the lexicographically least form.
pub fn longitude(d: &Diagram, component: usize) -> Result<Vec<Letter>, AlgebraError> {
    let s = arc_structure(d)?;
    let walks = d.strand_walks();
    if component >= walks.len() + d.free_circles() {
        return Err(AlgebraError::NoComponent(component));
    }
    let Some(walk) = walks.get(component) else { return Ok(Vec::new()) };
    let mut word = Vec::new();
    for &e in walk {
        let t = d.partner(e);
        if is_under(d, t) {
            let v = vertex_of(t);
            word.push((s.arc_of_slot[slot(v, (port_of(t) + 1) % 4)], d.crossing_sign(v)));
        }
    }
    Ok(least_rotation(word))
}

fn least_rotation<T: Ord + Clone>(w: Vec<T>) -> Vec<T> {
    (0..w.len().max(1))
        .map(|k| {
            let mut r = w.clone();
            r.rotate_left(k.min(w.len()));
            r
        })
        .min()
        .unwrap_or_default()
}

/// Smooths the two virtual crossings flanking a classical crossing and switches
/// that crossing. Involutory quandle colorings are unchanged.
pub fn iq_flank_rewrite(d: &Diagram) -> Result<Diagram, AlgebraError> {
    let f = *find_flanked_crossings(d)
        .first()
        .ok_or_else(|| DiagramError::PatternMismatch("no classical crossing is flanked by virtual crossings".into()))?;
    let e = remove_flanked_at(d, f)?;
    let x = f.crossing - [f.before, f.after].iter().filter(|&&v| v < f.crossing).count();
    let VertexKind::Classical(o) = e.kind(x) else { unreachable!("flanked vertex is classical") };
    Ok(e.with_kind(x, VertexKind::Classical(o.other())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::SignedGaussCode;
    use crate::diagram::gauss::from_gauss;

    fn diagram(code: &str) -> Diagram {
        from_gauss(&SignedGaussCode::parse(code).unwrap()).unwrap()
    }

    const TREFOIL: &str = "O1+U2+O3+U1+O2+U3+";

    #[test]
    fn groups_have_expected_orders() {
        assert_eq!(FiniteGroup::s3().order(), 6);
        assert_eq!(FiniteGroup::d4().order(), 8);
        assert_eq!(FiniteGroup::a4().order(), 12);
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(FiniteQuandle::new("x", vec![vec![1, 0], vec![1, 0]]).is_err());
        assert!(FiniteQuandle::alexander(4, 2).is_err());
        assert!(FiniteQuandle::dihedral(5).is_involutory());
        assert!(!FiniteQuandle::alexander(5, 2).unwrap().is_involutory());
    }

    #[test]
    fn circle_invariants() {
        let c = Diagram::circle();
        assert_eq!(wirtinger_presentation(&c).unwrap().generators, 1);
        assert_eq!(dihedral_colorings(&c, 7).unwrap(), BigInt::from(7));
        assert_eq!(determinant(&c).unwrap(), BigInt::one());
        assert_eq!(alexander_polynomial(&c).unwrap(), LaurentPoly::one());
        assert_eq!(longitude(&c, 0).unwrap(), vec![]);
    }

    #[test]
    fn trefoil_invariants() {
        let d = diagram(TREFOIL);
        let p = wirtinger_presentation(&d).unwrap();
        assert_eq!((p.generators, p.relations.len()), (3, 3));
        assert_eq!(count_group_homs(&p, &FiniteGroup::s3()).unwrap(), BigInt::from(12));
        assert_eq!(dihedral_colorings(&d, 3).unwrap(), BigInt::from(9));
        assert_eq!(determinant(&d).unwrap(), BigInt::from(3));
        assert_eq!(alexander_polynomial(&d).unwrap(), "A^2 - A + 1".parse().unwrap());
        assert_eq!(alexander_coloring_count(&d, 3, 2).unwrap(), BigInt::from(9));
        let l = longitude(&d, 0).unwrap();
        assert_eq!(l.len(), 3);
        assert!(l.iter().all(|&(_, e)| e == 1));
    }

    #[test]
    fn figure_eight_determinant() {
        let d = diagram("O1-U2-O3+U4+O2-U1-O4+U3+");
        assert_eq!(determinant(&d).unwrap(), BigInt::from(5));
        assert_eq!(alexander_polynomial(&d).unwrap(), "A^2 - 3*A + 1".parse().unwrap());
    }

    #[test]
    fn presentation_json() {
        let d = diagram(TREFOIL);
        let j = quandle_presentation(&d, false).unwrap().to_json();
        assert_eq!(j["generators"].as_array().unwrap().len(), 3);
        let g = wirtinger_presentation(&d).unwrap().to_json();
        assert!(g["relations"][0]["rhs"].as_str().unwrap().contains("^-1"));
    }
}
