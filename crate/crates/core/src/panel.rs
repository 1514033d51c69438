//! A fixed list of invariants computed for one diagram, each tagged with the
//! equivalence it is invariant under.

use std::fmt;

use serde::Serialize;

use crate::algebra::{self, FiniteGroup};
use crate::codes;
use crate::diagram::gauss::to_gauss;
use crate::diagram::Diagram;
use crate::{quantum, skein, vassiliev};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariance {
    /// Unchanged by every generalized Reidemeister move.
    VirtualIsotopy,
    /// Unchanged by every move except the classical and virtual curls.
    RegularIsotopy,
    /// A property of the drawing or its code.
    DiagramDependent,
}

impl fmt::Display for Invariance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariance::VirtualIsotopy => "virtual isotopy",
            Invariance::RegularIsotopy => "regular isotopy",
            Invariance::DiagramDependent => "diagram",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PanelEntry {
    pub name: String,
    pub invariance: Invariance,
    /// The value, or the error code when it cannot be computed for this diagram.
    #[serde(flatten)]
    pub value: EntryValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryValue {
    Value(String),
    Error(String),
}

impl fmt::Display for EntryValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntryValue::Value(v) => f.write_str(v),
            EntryValue::Error(e) => write!(f, "n/a ({e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PanelConfig {
    pub code_facts: bool,
    /// Orders of the dihedral quandles to count colorings by.
    pub dihedral: Vec<usize>,
    /// Count homomorphisms to the groups of [`FiniteGroup::battery`].
    pub groups: bool,
    pub alexander: bool,
    pub bracket: bool,
    pub quantum: bool,
    /// Highest Vassiliev coefficient, if any.
    pub nmax: Option<usize>,
}

impl Default for PanelConfig {
    fn default() -> Self {
        PanelConfig {
            code_facts: true,
            dihedral: (3..=9).collect(),
            groups: true,
            alexander: true,
            bracket: true,
            quantum: true,
            nmax: Some(vassiliev::NMAX_DEFAULT),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantPanel {
    pub entries: Vec<PanelEntry>,
}

impl InvariantPanel {
    pub fn get(&self, name: &str) -> Option<&PanelEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

impl fmt::Display for InvariantPanel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{} [{}]: {}", e.name, e.invariance, e.value)?;
        }
        Ok(())
    }
}

struct Builder(Vec<PanelEntry>);

impl Builder {
    fn push<T: fmt::Display, E: ErrorCode>(&mut self, name: impl Into<String>, inv: Invariance, r: Result<T, E>) {
        let value = match r {
            Ok(v) => EntryValue::Value(v.to_string()),
            Err(e) => EntryValue::Error(e.error_code().to_string()),
        };
        self.0.push(PanelEntry { name: name.into(), invariance: inv, value });
    }
}

trait ErrorCode {
    fn error_code(&self) -> &'static str;
}

macro_rules! error_code {
    ($($t:ty),*) => {$(
        impl ErrorCode for $t {
            fn error_code(&self) -> &'static str {
                self.code()
            }
        }
    )*};
}

error_code!(
    crate::codes::CodeError,
    crate::diagram::DiagramError,
    crate::algebra::AlgebraError,
    crate::vassiliev::VassilievError
);

pub fn compute_panel(d: &Diagram, cfg: &PanelConfig) -> InvariantPanel {
    use Invariance::*;
    let mut b = Builder(Vec::new());
    if cfg.code_facts {
        match to_gauss(d) {
            Ok(code) => {
                b.push::<_, codes::CodeError>("planar", DiagramDependent, Ok(codes::is_planar(&code)));
                b.push("prime", DiagramDependent, codes::is_prime(&code));
                b.push::<_, codes::CodeError>("almost_classical", DiagramDependent, Ok(codes::is_almost_classical(&code)));
                b.push("classically_realizable", DiagramDependent, codes::is_classically_realizable(&code));
            }
            Err(e) => {
                for name in ["planar", "prime", "almost_classical", "classically_realizable"] {
                    b.push::<bool, _>(name, DiagramDependent, Err(e.clone()));
                }
            }
        }
    }
    b.push::<_, crate::diagram::DiagramError>("components", VirtualIsotopy, Ok(d.components()));
    b.push::<_, crate::diagram::DiagramError>("writhe", RegularIsotopy, Ok(d.writhe()));
    for &n in &cfg.dihedral {
        b.push(format!("colorings_R{n}"), VirtualIsotopy, algebra::dihedral_colorings(d, n));
    }
    if cfg.groups {
        for g in FiniteGroup::battery() {
            let r = algebra::wirtinger_presentation(d).and_then(|p| algebra::count_group_homs(&p, &g));
            b.push(format!("homs_{}", g.name), VirtualIsotopy, r);
        }
    }
    b.push("determinant", VirtualIsotopy, algebra::determinant(d));
    if cfg.alexander {
        let r = algebra::alexander_polynomial(d).map(|p| p.display_in("t"));
        b.push("alexander", VirtualIsotopy, r);
    }
    b.push("f", VirtualIsotopy, skein::f_polynomial(d));
    if cfg.bracket {
        b.push("bracket", RegularIsotopy, skein::bracket(d));
    }
    if cfg.quantum {
        b.push("z", RegularIsotopy, quantum::z_invariant(d));
        let zbar = if d.count(|k| k == crate::VertexKind::Flat) > 0 {
            quantum::z_bar_flat(d)
        } else {
            quantum::z_bar(d).map(|z| quantum::z_bar_reduced(&z))
        };
        b.push("zbar", RegularIsotopy, zbar);
    }
    if let Some(nmax) = cfg.nmax {
        match vassiliev::vassiliev_coeffs(d, nmax) {
            Ok(s) => {
                for (n, c) in s.coeffs.iter().enumerate() {
                    b.push::<_, vassiliev::VassilievError>(format!("v{n}"), VirtualIsotopy, Ok(c));
                }
            }
            Err(e) => b.push::<String, _>("v", VirtualIsotopy, Err(e)),
        }
    }
    InvariantPanel { entries: b.0 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    /// The first isotopy-invariant entry that differs, if any.
    pub distinguished_by: Option<String>,
    pub left: Option<String>,
    pub right: Option<String>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.distinguished_by, &self.left, &self.right) {
            (Some(name), Some(l), Some(r)) => write!(f, "distinguished by {name}: {l} vs {r}"),
            _ => f.write_str("indistinguishable by panel"),
        }
    }
}

/// Compares two panels on the entries that are invariant under virtual isotopy
/// and computable for both diagrams.
pub fn distinguish(a: &InvariantPanel, b: &InvariantPanel) -> Verdict {
    for x in a.entries.iter().filter(|e| e.invariance == Invariance::VirtualIsotopy) {
        let Some(y) = b.get(&x.name) else { continue };
        if let (EntryValue::Value(l), EntryValue::Value(r)) = (&x.value, &y.value) {
            if l != r {
                return Verdict { distinguished_by: Some(x.name.clone()), left: Some(l.clone()), right: Some(r.clone()) };
            }
        }
    }
    Verdict { distinguished_by: None, left: None, right: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn light() -> PanelConfig {
        PanelConfig { dihedral: vec![3], groups: false, nmax: Some(2), ..PanelConfig::default() }
    }

    #[test]
    fn kprime_panel() {
        let p = compute_panel(&fixtures::diagram("Kprime").unwrap(), &PanelConfig::default());
        assert_eq!(p.get("f").unwrap().value, EntryValue::Value("A^-4 + A^-6 - A^-10".into()));
        assert_eq!(p.get("homs_S3").unwrap().value, EntryValue::Value("6".into()));
        assert_eq!(p.get("planar").unwrap().value, EntryValue::Value("false".into()));
        assert_eq!(p.get("v0").unwrap().value, EntryValue::Value("1".into()));
    }

    #[test]
    fn unavailable_entries_carry_error_codes() {
        let p = compute_panel(&fixtures::diagram("F").unwrap(), &light());
        assert!(matches!(p.get("f").unwrap().value, EntryValue::Error(_)));
        assert!(matches!(p.get("zbar").unwrap().value, EntryValue::Value(_)));
    }

    #[test]
    fn distinguishes_by_first_differing_entry() {
        let k = compute_panel(&fixtures::diagram("quandle_K").unwrap(), &light());
        let ks = compute_panel(&fixtures::diagram("quandle_Kstar").unwrap(), &light());
        assert_eq!(distinguish(&k, &ks).distinguished_by.as_deref(), Some("colorings_R3"));
        assert!(distinguish(&k, &k).distinguished_by.is_none());
        assert_eq!(distinguish(&k, &k).to_string(), "indistinguishable by panel");
    }
}
