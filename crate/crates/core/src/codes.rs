//! Gauss codes: parsing, canonical forms, and the planarity machinery
//! (even interstices, the interleave-reversal `g*`, dual pairings, primality).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ou {
    O,
    U,
}

impl Ou {
    pub fn other(self) -> Ou {
        match self {
            Ou::O => Ou::U,
            Ou::U => Ou::O,
        }
    }
}

/// One pass of the curve through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Passage {
    pub label: u32,
    pub ou: Option<Ou>,
    /// `+1` or `-1`.
    pub sign: Option<i8>,
}

impl Passage {
    pub fn plain(label: u32) -> Self {
        Passage { label, ou: None, sign: None }
    }

    /// Sort key with `O < U` and `+ < -`, undecorated passages first.
    fn rank(&self) -> (u32, u8, u8) {
        let ou = match self.ou {
            None => 0,
            Some(Ou::O) => 1,
            Some(Ou::U) => 2,
        };
        let sign = match self.sign {
            None => 0,
            Some(s) if s > 0 => 1,
            Some(_) => 2,
        };
        (self.label, ou, sign)
    }
}

impl fmt::Display for Passage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(ou) = self.ou {
            write!(f, "{}", if ou == Ou::O { "O" } else { "U" })?;
        }
        write!(f, "{}", self.label)?;
        match self.sign {
            Some(s) if s > 0 => write!(f, "+"),
            Some(_) => write!(f, "-"),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Shadow,
    Ou,
    SignedOu,
    FlatSigned,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("malformed code at byte {pos}: {msg}")]
    Malformed { pos: usize, msg: String },
    #[error("label {label} occurs {count} times (expected 2)")]
    LabelCount { label: u32, count: usize },
    #[error("label {label} is marked {ou:?} at both passages")]
    SameOu { label: u32, ou: Ou },
    #[error("label {label} carries different signs at its two passages")]
    SignMismatch { label: u32 },
    #[error("passages mix decoration flavors")]
    MixedFlavor,
    #[error("operation needs a single-component code, got {0} components")]
    NotSingleComponent(usize),
    #[error("operation needs flavor {expected:?}, got {got:?}")]
    WrongFlavor { expected: Flavor, got: Flavor },
    #[error("empty code")]
    Empty,
}

impl CodeError {
    /// Stable identifier used by the command line front end.
    pub fn code(&self) -> &'static str {
        match self {
            CodeError::Malformed { .. } => "malformed",
            CodeError::LabelCount { .. } => "label_count",
            CodeError::SameOu { .. } => "same_ou",
            CodeError::SignMismatch { .. } => "sign_mismatch",
            CodeError::MixedFlavor => "mixed_flavor",
            CodeError::NotSingleComponent(_) => "not_single_component",
            CodeError::WrongFlavor { .. } => "wrong_flavor",
            CodeError::Empty => "empty",
        }
    }
}

/// A (possibly multi-component) Gauss code. Empty components are crossing-free circles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedGaussCode {
    pub components: Vec<Vec<Passage>>,
    pub flavor: Flavor,
}

fn flavor_of(p: &Passage) -> Flavor {
    match (p.ou.is_some(), p.sign.is_some()) {
        (false, false) => Flavor::Shadow,
        (true, false) => Flavor::Ou,
        (true, true) => Flavor::SignedOu,
        (false, true) => Flavor::FlatSigned,
    }
}

impl SignedGaussCode {
    /// Parses and validates a code such as `O1+U2+O3+U1+O2+U3+` or `12/12`.
    pub fn parse(text: &str) -> Result<Self, CodeError> {
        let code = Self::parse_unchecked(text)?;
        code.validate()?;
        Ok(code)
    }

    /// Parses the grammar and checks flavor uniformity but not label multiplicities.
    pub fn parse_unchecked(text: &str) -> Result<Self, CodeError> {
        let mut components = vec![Vec::new()];
        let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            if c == '/' {
                components.push(Vec::new());
                i += 1;
                continue;
            }
            let ou = match c {
                'O' | 'o' => Some(Ou::O),
                'U' | 'u' => Some(Ou::U),
                _ => None,
            };
            if ou.is_some() {
                i += 1;
            }
            let start = i;
            // unprefixed shadow labels are single digits so that `123123` reads naturally
            while i < chars.len() && chars[i].1.is_ascii_digit() && (ou.is_some() || i == start) {
                i += 1;
            }
            if start == i {
                let (p, c) = chars.get(i).copied().unwrap_or((text.len(), ' '));
                return Err(CodeError::Malformed { pos: p.max(pos), msg: format!("expected a label, found `{c}`") });
            }
            let digits: String = chars[start..i].iter().map(|(_, c)| *c).collect();
            let label: u32 = digits
                .parse()
                .map_err(|_| CodeError::Malformed { pos, msg: format!("label `{digits}` out of range") })?;
            if label == 0 {
                return Err(CodeError::Malformed { pos, msg: "labels start at 1".into() });
            }
            let sign = match chars.get(i).map(|x| x.1) {
                Some('+') => Some(1),
                Some('-') | Some('\u{2212}') => Some(-1),
                _ => None,
            };
            if sign.is_some() {
                i += 1;
            }
            components.last_mut().unwrap().push(Passage { label, ou, sign });
        }
        let flavors: BTreeSet<_> = components.iter().flatten().map(|p| flavor_of(p) as u8).collect();
        let flavor = match components.iter().flatten().next() {
            None => Flavor::Shadow,
            Some(p) => flavor_of(p),
        };
        if flavors.len() > 1 {
            return Err(CodeError::MixedFlavor);
        }
        Ok(SignedGaussCode { components, flavor })
    }

    /// Checks that every label occurs twice with consistent decorations.
    pub fn validate(&self) -> Result<(), CodeError> {
        let mut seen: BTreeMap<u32, Vec<&Passage>> = BTreeMap::new();
        for p in self.components.iter().flatten() {
            if flavor_of(p) != self.flavor {
                return Err(CodeError::MixedFlavor);
            }
            seen.entry(p.label).or_default().push(p);
        }
        for (&label, ps) in &seen {
            if ps.len() != 2 {
                return Err(CodeError::LabelCount { label, count: ps.len() });
            }
            if let (Some(a), Some(b)) = (ps[0].ou, ps[1].ou) {
                if a == b {
                    return Err(CodeError::SameOu { label, ou: a });
                }
            }
            if ps[0].sign != ps[1].sign {
                return Err(CodeError::SignMismatch { label });
            }
        }
        Ok(())
    }

    pub fn single(passages: Vec<Passage>, flavor: Flavor) -> Self {
        SignedGaussCode { components: vec![passages], flavor }
    }

    /// The round unknot: one empty component.
    pub fn unknot() -> Self {
        SignedGaussCode { components: vec![vec![]], flavor: Flavor::Shadow }
    }

    pub fn num_crossings(&self) -> usize {
        self.components.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> Vec<u32> {
        self.components.iter().flatten().map(|p| p.label).sorted().dedup().collect()
    }

    fn single_component(&self) -> Result<&[Passage], CodeError> {
        if self.components.len() != 1 {
            return Err(CodeError::NotSingleComponent(self.components.len()));
        }
        Ok(&self.components[0])
    }

    /// Label sequence of the only component.
    pub fn word(&self) -> Result<Vec<u32>, CodeError> {
        Ok(self.single_component()?.iter().map(|p| p.label).collect())
    }

    /// Sign of crossing `label`, if the code carries signs.
    pub fn sign_of(&self, label: u32) -> Option<i8> {
        self.components.iter().flatten().find(|p| p.label == label).and_then(|p| p.sign)
    }

    /// Same label sequence with every decoration removed.
    pub fn shadow(&self) -> SignedGaussCode {
        SignedGaussCode {
            components: self
                .components
                .iter()
                .map(|c| c.iter().map(|p| Passage::plain(p.label)).collect())
                .collect(),
            flavor: Flavor::Shadow,
        }
    }

    /// Relabels crossings `1..n` by first appearance, rotates each component to its
    /// lexicographically least form and orders components the same way. Empty
    /// components go last.
    pub fn canonical(&self) -> SignedGaussCode {
        let nonempty: Vec<&Vec<Passage>> = self.components.iter().filter(|c| !c.is_empty()).collect();
        let empties = self.components.len() - nonempty.len();
        let orders: Vec<Vec<usize>> = if nonempty.len() <= 6 {
            (0..nonempty.len()).permutations(nonempty.len()).collect()
        } else {
            vec![(0..nonempty.len()).collect()]
        };
        let mut best: Option<Vec<Vec<Passage>>> = None;
        for order in orders {
            let mut map = HashMap::new();
            let mut comps = Vec::new();
            for &ci in &order {
                comps.push(least_rotation(nonempty[ci], &mut map));
            }
            let better = match &best {
                None => true,
                Some(b) => compare_components(&comps, b) == Ordering::Less,
            };
            if better {
                best = Some(comps);
            }
        }
        let mut components = best.unwrap_or_default();
        components.extend(std::iter::repeat_n(Vec::new(), empties));
        if components.is_empty() {
            components.push(Vec::new());
        }
        SignedGaussCode { components, flavor: self.flavor }
    }
}

fn compare_components(a: &[Vec<Passage>], b: &[Vec<Passage>]) -> Ordering {
    let ka: Vec<Vec<_>> = a.iter().map(|c| c.iter().map(Passage::rank).collect()).collect();
    let kb: Vec<Vec<_>> = b.iter().map(|c| c.iter().map(Passage::rank).collect()).collect();
    ka.cmp(&kb)
}

/// Chooses the rotation of `comp` whose relabeled form is least, extending `map`
/// (old label to new label) with the labels first seen here.
fn least_rotation(comp: &[Passage], map: &mut HashMap<u32, u32>) -> Vec<Passage> {
    let mut best: Option<(Vec<(u32, u8, u8)>, Vec<Passage>, HashMap<u32, u32>)> = None;
    for r in 0..comp.len() {
        let mut local = map.clone();
        let mut next = local.len() as u32 + 1;
        let seq: Vec<Passage> = (0..comp.len())
            .map(|k| {
                let p = comp[(r + k) % comp.len()];
                let label = *local.entry(p.label).or_insert_with(|| {
                    next += 1;
                    next - 1
                });
                Passage { label, ..p }
            })
            .collect();
        let key: Vec<_> = seq.iter().map(Passage::rank).collect();
        if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
            best = Some((key, seq, local));
        }
    }
    let (_, seq, local) = best.expect("nonempty component");
    *map = local;
    seq
}

impl fmt::Display for SignedGaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.components.iter().map(|c| c.iter().map(ToString::to_string).collect()).collect();
        f.write_str(&parts.join("/"))
    }
}

impl FromStr for SignedGaussCode {
    type Err = CodeError;
    fn from_str(s: &str) -> Result<Self, CodeError> {
        Self::parse(s)
    }
}

/// True iff every label's two occurrences enclose an even number of entries.
pub fn is_evenly_intersticed(code: &SignedGaussCode) -> Result<bool, CodeError> {
    let word = code.word()?;
    let mut first: HashMap<u32, usize> = HashMap::new();
    for (i, l) in word.iter().enumerate() {
        if let Some(j) = first.insert(*l, i) {
            if (i - j - 1) % 2 != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The interleave-reversal `g*`: for each label in increasing order, reverse the
/// entries strictly between its two occurrences. A label shared by two components
/// first amalgamates them: with both rotated to start at the label, `i a` and
/// `i b` become `i a i reverse(b)` in the first component's place.
pub fn interleave_star(code: &SignedGaussCode) -> SignedGaussCode {
    let mut comps: Vec<Vec<u32>> = code
        .components
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| c.iter().map(|p| p.label).collect())
        .collect();
    for label in code.labels() {
        let hits: Vec<(usize, usize)> = comps
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| c.iter().positions(move |&l| l == label).map(move |k| (ci, k)))
            .collect();
        if hits.len() != 2 {
            continue;
        }
        let (c1, k1) = hits[0];
        let (c2, k2) = hits[1];
        if c1 == c2 {
            comps[c1][k1 + 1..k2].reverse();
        } else {
            let mut a = comps[c1].clone();
            a.rotate_left(k1);
            let mut b = comps[c2].clone();
            b.rotate_left(k2);
            let mut merged = a;
            merged.push(label);
            merged.extend(b[1..].iter().rev());
            comps[c1] = merged;
            comps.remove(c2);
        }
    }
    let word: Vec<Passage> = comps.concat().into_iter().map(Passage::plain).collect();
    SignedGaussCode::single(word, Flavor::Shadow)
}

/// Two-sided chord assignment witnessing that `g*` is dually paired.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPairing {
    pub inside: BTreeSet<u32>,
    pub outside: BTreeSet<u32>,
}

impl DualPairing {
    /// No two chords on the same side interleave on the circle `word`.
    pub fn is_valid_for(&self, word: &[u32]) -> bool {
        let chords = chord_positions(word);
        for side in [&self.inside, &self.outside] {
            for (a, b) in side.iter().tuple_combinations() {
                if interleaved(chords[a], chords[b]) {
                    return false;
                }
            }
        }
        true
    }
}

pub(crate) fn chord_positions(word: &[u32]) -> BTreeMap<u32, (usize, usize)> {
    let mut out: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    for (i, &l) in word.iter().enumerate() {
        out.entry(l).and_modify(|e| e.1 = i).or_insert((i, i));
    }
    out
}

pub(crate) fn interleaved(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |x: usize| a.0 < x && x < a.1;
    inside(b.0) != inside(b.1)
}

/// 2-colors the interleavement graph of the chords of `word`; `None` if it is not bipartite.
pub fn dual_pairing_of_word(word: &[u32]) -> Option<DualPairing> {
    let chords = chord_positions(word);
    let labels: Vec<u32> = chords.keys().copied().collect();
    let mut color: HashMap<u32, bool> = HashMap::new();
    for &start in &labels {
        if color.contains_key(&start) {
            continue;
        }
        color.insert(start, true);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[&u];
            for &v in &labels {
                if v == u || !interleaved(chords[&u], chords[&v]) {
                    continue;
                }
                match color.get(&v) {
                    Some(&cv) if cv == cu => return None,
                    Some(_) => {}
                    None => {
                        color.insert(v, !cu);
                        queue.push_back(v);
                    }
                }
            }
        }
    }
    let (inside, outside): (Vec<u32>, Vec<u32>) = labels.iter().partition(|l| color[l]);
    Some(DualPairing { inside: inside.into_iter().collect(), outside: outside.into_iter().collect() })
}

pub fn dual_pairing(g_star: &SignedGaussCode) -> Result<Option<DualPairing>, CodeError> {
    Ok(dual_pairing_of_word(&g_star.word()?))
}

/// Planarity of the shadow: even interstices (single component) and a dual pairing of `g*`.
pub fn is_planar(code: &SignedGaussCode) -> bool {
    let nonempty = code.components.iter().filter(|c| !c.is_empty()).count();
    if nonempty == 0 {
        return true;
    }
    if code.components.len() == 1 && !is_evenly_intersticed(code).unwrap_or(false) {
        return false;
    }
    let star = interleave_star(code);
    dual_pairing_of_word(&star.word().expect("g* has one component")).is_some()
}

/// Primality of a label word read cyclically: no proper contiguous block holds
/// every occurrence of each of its labels.
pub fn is_prime_word(word: &[u32]) -> bool {
    let n = word.len();
    if n < 2 {
        return true;
    }
    let mut total: HashMap<u32, usize> = HashMap::new();
    for l in word {
        *total.entry(*l).or_default() += 1;
    }
    for start in 0..n {
        let mut count: HashMap<u32, usize> = HashMap::new();
        let mut open = 0usize;
        for len in 1..n {
            let l = word[(start + len - 1) % n];
            let c = count.entry(l).or_default();
            if *c == 0 {
                open += 1;
            }
            *c += 1;
            if *c == total[&l] {
                open -= 1;
            }
            if open == 0 {
                return false;
            }
        }
    }
    true
}

pub fn is_prime(code: &SignedGaussCode) -> Result<bool, CodeError> {
    let word = code.word()?;
    if word.is_empty() {
        return Err(CodeError::Empty);
    }
    Ok(is_prime_word(&word))
}

pub fn shadow_of(code: &SignedGaussCode) -> SignedGaussCode {
    code.shadow()
}

pub fn is_almost_classical(code: &SignedGaussCode) -> bool {
    is_planar(&code.shadow())
}

/// Whether the signed code is realized by a virtual-free diagram: the shadow is
/// planar and the signs agree with one of the reconstructions of the shadow.
pub fn is_classically_realizable(code: &SignedGaussCode) -> Result<bool, CodeError> {
    if code.flavor != Flavor::SignedOu {
        return Err(CodeError::WrongFlavor { expected: Flavor::SignedOu, got: code.flavor });
    }
    code.single_component()?;
    if !is_planar(code) {
        return Ok(false);
    }
    Ok(crate::diagram::gauss::classical_realization(code).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> SignedGaussCode {
        SignedGaussCode::parse(s).unwrap()
    }

    #[test]
    fn parses_flavors() {
        assert_eq!(c("O1+U2+O3+U1+O2+U3+").flavor, Flavor::SignedOu);
        let hopf = c("12/12");
        assert_eq!(hopf.components.len(), 2);
        assert_eq!(hopf.flavor, Flavor::Shadow);
        assert_eq!(c("1+2-1+2-").flavor, Flavor::FlatSigned);
        assert_eq!(c(" O1 U1 ").flavor, Flavor::Ou);
        assert_eq!(c("").components, vec![Vec::<Passage>::new()]);
    }

    #[test]
    fn rejects_bad_codes() {
        assert!(matches!(SignedGaussCode::parse("O1U2O1U2O2"), Err(CodeError::SameOu { .. } | CodeError::LabelCount { .. })));
        assert!(matches!(SignedGaussCode::parse("O1U1+"), Err(CodeError::MixedFlavor)));
        assert!(matches!(SignedGaussCode::parse("12"), Err(CodeError::LabelCount { .. })));
        assert!(matches!(SignedGaussCode::parse("1x1"), Err(CodeError::Malformed { .. })));
        assert!(matches!(SignedGaussCode::parse("O1+U1-"), Err(CodeError::SignMismatch { .. })));
    }

    #[test]
    fn display_round_trip() {
        for s in ["O1+U2+O3+U1+O2+U3+", "12/12", "O1-U1-/"] {
            assert_eq!(c(s).to_string(), s);
        }
    }

    #[test]
    fn canonical_forms() {
        let t = c("O1+U2+O3+U1+O2+U3+");
        assert_eq!(t.canonical(), t);
        let g = c("O1+U2+O3-U1+O2+U3-");
        assert_eq!(g.canonical(), g);
        assert_eq!(c("U3+O1+U2+O3+U1+O2+").canonical(), t);
        assert_eq!(c("23/32").canonical().to_string(), "12/12");
        assert_eq!(c("/11").canonical().to_string(), "11/");
    }

    #[test]
    fn interstices() {
        assert!(is_evenly_intersticed(&c("123123")).unwrap());
        assert!(is_evenly_intersticed(&c("1234534125")).unwrap());
        assert!(!is_evenly_intersticed(&c("1212")).unwrap());
        assert!(is_evenly_intersticed(&c("12/12")).is_err());
    }

    #[test]
    fn star_examples() {
        assert_eq!(interleave_star(&c("1234/1536/2546")).to_string(), "236416215435");
        assert_eq!(interleave_star(&c("11")).to_string(), "11");
        assert_eq!(interleave_star(&c("123123")).to_string(), "132123");
    }

    #[test]
    fn pairings() {
        let p = dual_pairing(&interleave_star(&c("123123"))).unwrap().unwrap();
        assert!(p.is_valid_for(&[1, 3, 2, 1, 2, 3]));
        assert!(dual_pairing(&interleave_star(&c("1234534125"))).unwrap().is_none());
        let one = dual_pairing(&c("11")).unwrap().unwrap();
        assert_eq!(one.inside.len() + one.outside.len(), 1);
    }

    #[test]
    fn planarity_examples() {
        assert!(is_planar(&c("123123")));
        assert!(!is_planar(&c("1234534125")));
        assert!(!is_planar(&c("1212")));
        assert!(is_planar(&c("12/12")));
        assert!(is_planar(&c("")));
    }

    #[test]
    fn primality() {
        assert!(is_prime(&c("123123")).unwrap());
        assert!(is_prime(&c("11")).unwrap());
        assert!(!is_prime(&c("112233")).unwrap());
        assert!(!is_prime_word(&[1, 2, 1, 2, 3, 4, 5, 4, 3]));
        assert!(is_prime(&c("")).is_err());
    }

    #[test]
    fn shadows() {
        let t = c("O1+U2+O3+U1+O2+U3+");
        assert_eq!(shadow_of(&t).to_string(), "123123");
        assert_eq!(shadow_of(&c("O1+U2+O3-U1+O2+U3-")).to_string(), "123123");
        assert_eq!(shadow_of(&shadow_of(&t)), shadow_of(&t));
        assert!(is_almost_classical(&t));
        assert!(!is_almost_classical(&c("O1U2O3U4O5U3O4U1O2U5")));
    }
}
