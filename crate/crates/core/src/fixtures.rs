//! The built-in corpus of named diagrams, each with the values it must satisfy.
//!
//! A fixture is a signed Gauss code, drawn by [`from_gauss`], with optional
//! rigid nodes, a list of moves applied to the drawing and global transforms.

use std::collections::{BTreeMap, HashSet, VecDeque};

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{self, AlgebraError, FiniteGroup, FiniteQuandle, QuandlePresentation};
use crate::codes::{self, CodeError, SignedGaussCode};
use crate::diagram::gauss::{from_gauss, label_vertices, to_gauss};
use crate::diagram::moves::{apply_move, enumerate_reductions, MoveSpec};
use crate::diagram::ops::{flip, mirror, Tangle};
use crate::diagram::{Diagram, DiagramError, VertexKind};
use crate::poly::LaurentPoly;
use crate::{quantum, skein, vassiliev};

const SOURCES: [(&str, &str); 4] = [
    ("knots", include_str!("../fixtures/knots.json")),
    ("quantum", include_str!("../fixtures/quantum.json")),
    ("graphs", include_str!("../fixtures/graphs.json")),
    ("classical", include_str!("../fixtures/classical.json")),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    Unknown(String),
    #[error("fixture file `{0}`: {1}")]
    Corrupt(String, String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("fixture `{0}` has no crossing labelled {1}")]
    NoLabel(String, u32),
}

impl FixtureError {
    pub fn code(&self) -> &'static str {
        match self {
            FixtureError::Unknown(_) => "unknown_fixture",
            FixtureError::Corrupt(..) => "corrupt_fixture",
            FixtureError::Code(e) => e.code(),
            FixtureError::Diagram(e) => e.code(),
            FixtureError::NoLabel(..) => "unknown_label",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Mirror,
    Flip,
    /// Every classical crossing becomes flat.
    Flat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    Bracket { value: String },
    F { value: String },
    Z { value: String },
    ZBarReduced { value: String },
    ZBarFlat { value: String },
    Determinant { value: i64 },
    Alexander { value: String },
    AlexanderNontrivial,
    DihedralColorings { n: usize, count: u64 },
    AlexanderColorings { n: u64, t: i64, count: u64 },
    GroupHoms { group: String, count: u64 },
    /// The quandle relations agree with `relations` after renaming the arcs.
    QuandleRelations { relations: Vec<String> },
    /// Under a renaming that matches `relations`, `values` is a dihedral coloring.
    Coloring { n: usize, relations: Vec<String>, values: BTreeMap<String, usize> },
    Vassiliev { n: usize, value: String },
    ChordDiagram { value: String },
    Components { value: usize },
    Classical { value: bool },
    ClassicalCrossings { value: usize },
    VirtualCrossings { value: usize },
    FlatCrossings { value: usize },
    ReducesToUnknot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub code: String,
    /// Labels of crossings turned into rigid nodes.
    #[serde(default)]
    pub nodes: Vec<u32>,
    #[serde(default)]
    pub moves: Vec<MoveSpec>,
    #[serde(default)]
    pub transforms: Vec<Transform>,
    /// Part of the classical corpus.
    #[serde(default)]
    pub classical: bool,
    pub checks: Vec<Check>,
}

impl Fixture {
    pub fn diagram(&self) -> Result<Diagram, FixtureError> {
        let code = SignedGaussCode::parse(&self.code)?;
        let mut d = from_gauss(&code)?;
        let labels = label_vertices(&code);
        for l in &self.nodes {
            let v = *labels.get(l).ok_or_else(|| FixtureError::NoLabel(self.name.clone(), *l))?;
            d = d.with_kind(v, VertexKind::Node);
        }
        for m in &self.moves {
            d = apply_move(&d, m)?;
        }
        for t in &self.transforms {
            d = match t {
                Transform::Mirror => mirror(&d),
                Transform::Flip => flip(&d),
                Transform::Flat => {
                    let mut e = d.clone();
                    for v in 0..d.num_vertices() {
                        if matches!(d.kind(v), VertexKind::Classical(_)) {
                            e = e.with_kind(v, VertexKind::Flat);
                        }
                    }
                    e
                }
            };
        }
        Ok(d)
    }
}

/// Every fixture in corpus order.
pub fn all() -> Result<Vec<Fixture>, FixtureError> {
    let mut out = Vec::new();
    for (file, text) in SOURCES {
        let list: Vec<Fixture> =
            serde_json::from_str(text).map_err(|e| FixtureError::Corrupt(file.into(), e.to_string()))?;
        out.extend(list);
    }
    Ok(out)
}

pub fn names() -> Vec<String> {
    all().map(|v| v.into_iter().map(|f| f.name).collect()).unwrap_or_default()
}

pub fn get(name: &str) -> Result<Fixture, FixtureError> {
    all()?.into_iter().find(|f| f.name == name).ok_or_else(|| FixtureError::Unknown(name.into()))
}

pub fn diagram(name: &str) -> Result<Diagram, FixtureError> {
    get(name)?.diagram()
}

/// The classical corpus.
pub fn classical() -> Result<Vec<Fixture>, FixtureError> {
    Ok(all()?.into_iter().filter(|f| f.classical).collect())
}

/// `Kprime` opened on the edge that closes its code, the long knot `O1+O2+U1+U2+`.
/// Inserting it into any edge leaves the quandle unchanged.
pub fn w_tangle() -> Result<Tangle, FixtureError> {
    let closure = diagram("Kprime")?;
    let cut = *closure.strand_walks()[0].last().expect("nonempty");
    Ok(Tangle { closure, cut })
}

/// The mirror image of [`w_tangle`].
pub fn w_star_tangle() -> Result<Tangle, FixtureError> {
    let w = w_tangle()?;
    Ok(Tangle { closure: mirror(&w.closure), cut: w.cut })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub name: String,
    pub results: Vec<CheckResult>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

pub fn verify(f: &Fixture) -> FixtureReport {
    let results = match f.diagram() {
        Ok(d) => f.checks.iter().map(|c| run_check(&d, c)).collect(),
        Err(e) => vec![CheckResult { check: "build".into(), passed: false, detail: e.to_string() }],
    };
    FixtureReport { name: f.name.clone(), results }
}

pub fn verify_all() -> Result<Vec<FixtureReport>, FixtureError> {
    Ok(all()?.iter().map(verify).collect())
}

fn check_name(c: &Check) -> String {
    let v = serde_json::to_value(c).expect("serializable");
    v["check"].as_str().unwrap_or("?").to_string()
}

fn run_check(d: &Diagram, c: &Check) -> CheckResult {
    let (passed, detail) = match evaluate(d, c) {
        Ok((expected, got)) => (expected == got, if expected == got { got } else { format!("expected {expected}, got {got}") }),
        Err(e) => (false, e),
    };
    CheckResult { check: check_name(c), passed, detail }
}

fn poly(s: &str) -> Result<LaurentPoly, String> {
    s.parse()
}

fn group(name: &str) -> Result<FiniteGroup, String> {
    FiniteGroup::battery().into_iter().find(|g| g.name == name).ok_or_else(|| format!("unknown group {name}"))
}

/// Returns the expected and computed values in a comparable text form.
fn evaluate(d: &Diagram, c: &Check) -> Result<(String, String), String> {
    let e = |x: &dyn std::fmt::Display| x.to_string();
    let alg = |r: Result<BigInt, AlgebraError>| r.map(|x| x.to_string()).map_err(|x| x.to_string());
    Ok(match c {
        Check::Bracket { value } => (e(&poly(value)?), e(&skein::bracket(d).map_err(|x| e(&x))?)),
        Check::F { value } => (e(&poly(value)?), e(&skein::f_polynomial(d).map_err(|x| e(&x))?)),
        Check::Z { value } => (e(&poly(value)?), e(&quantum::z_invariant(d).map_err(|x| e(&x))?)),
        Check::ZBarReduced { value } => {
            (value.clone(), e(&quantum::z_bar_reduced(&quantum::z_bar(d).map_err(|x| e(&x))?)))
        }
        Check::ZBarFlat { value } => (value.clone(), e(&quantum::z_bar_flat(d).map_err(|x| e(&x))?)),
        Check::Determinant { value } => (value.to_string(), alg(algebra::determinant(d))?),
        Check::Alexander { value } => {
            (e(&poly(value)?), e(&algebra::alexander_polynomial(d).map_err(|x| e(&x))?))
        }
        Check::AlexanderNontrivial => {
            let a = algebra::alexander_polynomial(d).map_err(|x| e(&x))?;
            ("not 1".into(), if a == LaurentPoly::one() { "1".into() } else { "not 1".into() })
        }
        Check::DihedralColorings { n, count } => (count.to_string(), alg(algebra::dihedral_colorings(d, *n))?),
        Check::AlexanderColorings { n, t, count } => {
            (count.to_string(), alg(algebra::alexander_coloring_count(d, *n, *t))?)
        }
        Check::GroupHoms { group: g, count } => {
            let p = algebra::wirtinger_presentation(d).map_err(|x| e(&x))?;
            (count.to_string(), alg(algebra::count_group_homs(&p, &group(g)?))?)
        }
        Check::QuandleRelations { relations } => {
            let p = algebra::quandle_presentation(d, false).map_err(|x| e(&x))?;
            let found = renamings(&p, relations)?;
            ("matched".into(), if found.is_empty() { "no renaming matches".into() } else { "matched".into() })
        }
        Check::Coloring { n, relations, values } => {
            let p = algebra::quandle_presentation(d, false).map_err(|x| e(&x))?;
            let q = FiniteQuandle::dihedral(*n);
            let ok = renamings(&p, relations)?.iter().any(|names| {
                let color = |g: usize| values.get(&names[g]).copied();
                p.relations.iter().all(|r| match (color(r.lhs), color(r.base), color(r.exponent)) {
                    (Some(l), Some(b), Some(x)) => l == if r.positive { q.op(b, x) } else { q.inv(b, x) },
                    _ => false,
                })
            });
            ("coloring".into(), if ok { "coloring".into() } else { "not a coloring".into() })
        }
        Check::Vassiliev { n, value } => {
            let s = vassiliev::vassiliev_coeffs(d, *n).map_err(|x| e(&x))?;
            (value.clone(), e(&s.coeffs[*n]))
        }
        Check::ChordDiagram { value } => (value.clone(), e(&vassiliev::chord_diagram(d).map_err(|x| e(&x))?)),
        Check::Components { value } => (value.to_string(), d.components().to_string()),
        Check::Classical { value } => {
            let code = to_gauss(d).map_err(|x| e(&x))?;
            let got = d.virtual_count() == 0
                || codes::is_classically_realizable(&code).map_err(|x| e(&x))?;
            (value.to_string(), got.to_string())
        }
        Check::ClassicalCrossings { value } => (value.to_string(), d.classical_count().to_string()),
        Check::VirtualCrossings { value } => (value.to_string(), d.virtual_count().to_string()),
        Check::FlatCrossings { value } => {
            (value.to_string(), d.count(|k| k == VertexKind::Flat).to_string())
        }
        Check::ReducesToUnknot => {
            ("reduces".into(), if reduces_to_unknot(d, 20_000) { "reduces".into() } else { "stuck".into() })
        }
    })
}

/// Parses `x = y^z` or `x = y^~z`.
fn parse_relation(s: &str) -> Result<(String, String, String, bool), String> {
    let bad = || format!("bad relation `{s}`");
    let (lhs, rhs) = s.split_once('=').ok_or_else(bad)?;
    let (base, exp) = rhs.split_once('^').ok_or_else(bad)?;
    let exp = exp.trim();
    let (exp, positive) = match exp.strip_prefix('~') {
        Some(x) => (x, false),
        None => (exp, true),
    };
    Ok((lhs.trim().into(), base.trim().into(), exp.trim().into(), positive))
}

/// All assignments of the given names to arcs under which the presentation's
/// relations are exactly `relations`, as multisets.
fn renamings(p: &QuandlePresentation, relations: &[String]) -> Result<Vec<Vec<String>>, String> {
    let target: Vec<_> = relations.iter().map(|r| parse_relation(r)).try_collect()?;
    let names: Vec<String> =
        target.iter().flat_map(|(a, b, c, _)| [a.clone(), b.clone(), c.clone()]).unique().sorted().collect();
    if names.len() != p.generators || p.generators > 8 {
        return Ok(vec![]);
    }
    let mut want: Vec<_> = target.clone();
    want.sort();
    let mut out = Vec::new();
    for perm in names.iter().cloned().permutations(names.len()) {
        let mut got: Vec<_> = p
            .relations
            .iter()
            .map(|r| (perm[r.lhs].clone(), perm[r.base].clone(), perm[r.exponent].clone(), r.positive))
            .collect();
        got.sort();
        if got == want {
            out.push(perm);
        }
    }
    Ok(out)
}

/// Breadth-first search through non-inflating moves for a diagram without vertices.
pub fn reduces_to_unknot(d: &Diagram, cap: usize) -> bool {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([d.clone()]);
    while let Some(e) = queue.pop_front() {
        if e.num_vertices() == 0 {
            return e.free_circles() == 1;
        }
        if seen.len() > cap {
            return false;
        }
        for m in enumerate_reductions(&e) {
            if let Ok(n) = apply_move(&e, &m) {
                if seen.insert(n.to_json_string()) {
                    queue.push_back(n);
                }
            }
        }
    }
    false
}
