//! Finite-type coefficients of the f-polynomial.
//!
//! Substituting `A = e^x` into `f` gives a power series whose coefficients `v_n`
//! extend to rigid 4-valent graphs by `v(G) = v(G|+) - v(G|-)` at each node.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, OverPair, VertexKind};
use crate::poly::LaurentPoly;
use crate::skein::{f_oriented_state_sum, smooth_crossing};

pub const NMAX_DEFAULT: usize = 8;
pub const NMAX_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VassilievError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("order {0} exceeds the cap of {NMAX_CAP}")]
    Cap(usize),
    #[error("vertex {0} is not a rigid node")]
    NotANode(usize),
    #[error("chord diagrams need a single component, found {0}")]
    NotSingleComponent(usize),
}

impl VassilievError {
    pub fn code(&self) -> &'static str {
        match self {
            VassilievError::Diagram(e) => e.code(),
            VassilievError::Cap(_) => "nmax_cap",
            VassilievError::NotANode(_) => "not_a_node",
            VassilievError::NotSingleComponent(_) => "not_single_component",
        }
    }
}

/// `v_0 + v_1 x + ... + v_nmax x^nmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    pub coeffs: Vec<BigRational>,
}

impl RationalSeries {
    pub fn nmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients as `"p/q"`, or `"p"` for integers.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in self.coeffs.iter().enumerate() {
            writeln!(f, "v{n} = {c}")?;
        }
        Ok(())
    }
}

/// Number of rigid nodes.
pub fn node_count(g: &Diagram) -> usize {
    g.node_count()
}

fn nodes(g: &Diagram) -> Vec<usize> {
    (0..g.num_vertices()).filter(|&v| g.kind(v) == VertexKind::Node).collect()
}

/// Node `v` replaced by a crossing of sign `sign`.
pub fn resolve_node(g: &Diagram, v: usize, sign: i8) -> Result<Diagram, VassilievError> {
    if g.kind(v) != VertexKind::Node {
        return Err(VassilievError::NotANode(v));
    }
    // the sign of a node is read with the even pair on top
    let over = if g.crossing_sign(v) == sign { OverPair::Even } else { OverPair::Odd };
    Ok(g.with_kind(v, VertexKind::Classical(over)))
}

/// All `2^N` resolutions with the product of their signs.
pub fn resolve_nodes(g: &Diagram) -> Vec<(i8, Diagram)> {
    let mut terms = vec![(1i8, g.clone())];
    for v in nodes(g) {
        terms = terms
            .into_iter()
            .flat_map(|(s, d)| {
                [1i8, -1].map(|e| (s * e, resolve_node(&d, v, e).expect("node")))
            })
            .collect();
    }
    terms
}

/// `sum_i c_i d_i^n / n!` for `p = sum_i c_i A^d_i`, i.e. the coefficients of `p(e^x)`.
pub fn series_of(p: &LaurentPoly, nmax: usize) -> Result<RationalSeries, VassilievError> {
    if nmax > NMAX_CAP {
        return Err(VassilievError::Cap(nmax));
    }
    let mut coeffs = Vec::with_capacity(nmax + 1);
    let mut factorial = BigInt::one();
    for n in 0..=nmax {
        if n > 0 {
            factorial *= n;
        }
        let mut sum = BigInt::zero();
        for (e, c) in p.terms() {
            sum += c * BigInt::from(e).pow(n as u32);
        }
        coeffs.push(BigRational::new(sum, factorial.clone()));
    }
    Ok(RationalSeries { coeffs })
}

/// The signed sum of f over the node resolutions.
pub fn graph_f(g: &Diagram) -> Result<LaurentPoly, VassilievError> {
    let mut total = LaurentPoly::zero();
    for (s, d) in resolve_nodes(g) {
        let f = f_oriented_state_sum(&d)?;
        total = if s > 0 { &total + &f } else { &total - &f };
    }
    Ok(total)
}

pub fn vassiliev_coeffs(g: &Diagram, nmax: usize) -> Result<RationalSeries, VassilievError> {
    if nmax > NMAX_CAP {
        return Err(VassilievError::Cap(nmax));
    }
    series_of(&graph_f(g)?, nmax)
}

/// `c_(n,k) = 2^(n-k) (1 + (-1)^(n-k+1)) / (n-k)!`.
pub fn recursion_coefficient(n: usize, k: usize) -> BigRational {
    let j = n - k;
    if j.is_multiple_of(2) {
        return BigRational::zero();
    }
    let fact: BigInt = (1..=j).map(BigInt::from).product();
    BigRational::new(BigInt::from(2) << j, fact)
}

/// The oriented and unoriented smoothings of a node.
pub fn node_smoothings(g: &Diagram, node: usize) -> Result<(Diagram, Diagram), VassilievError> {
    let plus = resolve_node(g, node, 1)?;
    Ok((smooth_crossing(&plus, node, true)?, smooth_crossing(&plus, node, false)?))
}

/// `v_n(G) = sum_(k<n) c_(n,k) (v_k(G_0) + 2^(n-k) v_k(G_inf))` at the chosen node.
pub fn v_n_by_recursion(g: &Diagram, node: usize, n: usize) -> Result<BigRational, VassilievError> {
    if n > NMAX_CAP {
        return Err(VassilievError::Cap(n));
    }
    let (g0, ginf) = node_smoothings(g, node)?;
    let s0 = vassiliev_coeffs(&g0, n)?;
    let sinf = vassiliev_coeffs(&ginf, n)?;
    let mut total = BigRational::zero();
    for k in 0..n {
        let c = recursion_coefficient(n, k);
        if c.is_zero() {
            continue;
        }
        let two = BigRational::from_integer(BigInt::from(2) << (n - k - 1));
        total += c * (&s0.coeffs[k] + two * &sinf.coeffs[k]);
    }
    Ok(total)
}

/// Whether `v_k(G) = 0` holds whenever `k < N(G)`.
pub fn graphical_type_check(g: &Diagram, k: usize) -> Result<bool, VassilievError> {
    if k > NMAX_CAP {
        return Err(VassilievError::Cap(k));
    }
    if k >= node_count(g) {
        return Ok(true);
    }
    Ok(vassiliev_coeffs(g, k)?.coeffs[k].is_zero())
}

/// The cyclic order of node passages along a single component, labels
/// renumbered by first appearance and rotated to the least word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChordDiagram(pub Vec<u32>);

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", s.join(" "))
    }
}

pub fn chord_diagram(g: &Diagram) -> Result<ChordDiagram, VassilievError> {
    g.validate()?;
    let mu = g.components();
    if mu != 1 {
        return Err(VassilievError::NotSingleComponent(mu));
    }
    let walks = g.strand_walks();
    let word: Vec<usize> = walks
        .first()
        .map(|w| w.iter().map(|&s| crate::diagram::vertex_of(g.partner(s))).filter(|&v| g.kind(v) == VertexKind::Node).collect())
        .unwrap_or_default();
    let relabel = |w: &[usize]| {
        let mut seen: Vec<usize> = Vec::new();
        w.iter()
            .map(|v| match seen.iter().position(|x| x == v) {
                Some(i) => i as u32 + 1,
                None => {
                    seen.push(*v);
                    seen.len() as u32
                }
            })
            .collect::<Vec<u32>>()
    };
    let best = (0..word.len().max(1))
        .map(|k| {
            let mut r = word.clone();
            if !r.is_empty() {
                r.rotate_left(k);
            }
            relabel(&r)
        })
        .min()
        .unwrap_or_default();
    Ok(ChordDiagram(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::SignedGaussCode;
    use crate::diagram::gauss::from_gauss;

    fn diagram(code: &str) -> Diagram {
        from_gauss(&SignedGaussCode::parse(code).unwrap()).unwrap()
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn knots_start_with_one_and_links_with_minus_two() {
        let s = vassiliev_coeffs(&diagram("O1+U2+O3+U1+O2+U3+"), 4).unwrap();
        assert_eq!(s.coeffs[0], r(1));
        assert_eq!(vassiliev_coeffs(&Diagram::circles(2), 0).unwrap().coeffs[0], r(-2));
        assert!(vassiliev_coeffs(&Diagram::circle(), 17).is_err());
    }

    #[test]
    fn series_of_monomial() {
        let s = series_of(&LaurentPoly::monomial(1, 2), 3).unwrap();
        let expected: Vec<BigRational> = [1, 2, 2].iter().map(|&x| r(x)).chain([BigRational::new(4.into(), 3.into())]).collect();
        assert_eq!(s.coeffs, expected);
    }

    #[test]
    fn recursion_coefficients_vanish_for_even_gaps() {
        assert!(recursion_coefficient(4, 2).is_zero());
        assert_eq!(recursion_coefficient(3, 2), r(4));
        assert_eq!(recursion_coefficient(3, 0), BigRational::new(BigInt::from(16), BigInt::from(6)));
    }

    #[test]
    fn one_node_recursion_matches_expansion() {
        let d = diagram("O1+U2+O3+U1+O2+U3+");
        let g = d.with_kind(0, VertexKind::Node);
        let direct = vassiliev_coeffs(&g, 4).unwrap();
        assert!(direct.coeffs[0].is_zero());
        for n in 0..=4 {
            assert_eq!(v_n_by_recursion(&g, 0, n).unwrap(), direct.coeffs[n], "n = {n}");
        }
        assert_eq!(resolve_nodes(&g).len(), 2);
        assert_eq!(chord_diagram(&g).unwrap(), ChordDiagram(vec![1, 1]));
        assert!(graphical_type_check(&g, 0).unwrap());
    }

    #[test]
    fn two_node_signs() {
        let d = diagram("O1+U2+O3+U1+O2+U3+");
        let g = d.with_kind(0, VertexKind::Node).with_kind(1, VertexKind::Node);
        let signs: Vec<i8> = resolve_nodes(&g).iter().map(|t| t.0).collect();
        assert_eq!(signs, vec![1, -1, -1, 1]);
        let s = vassiliev_coeffs(&g, 2).unwrap();
        assert!(s.coeffs[0].is_zero() && s.coeffs[1].is_zero());
        assert_eq!(chord_diagram(&g).unwrap(), ChordDiagram(vec![1, 2, 1, 2]));
    }
}
