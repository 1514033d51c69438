//! Seeded random walks through the move graph that watch the panel entries
//! which are supposed to stay fixed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::moves::{apply_move, enumerate_moves, MoveKind, MoveSpec, Site};
use crate::diagram::Diagram;
use crate::panel::{compute_panel, EntryValue, Invariance, InvariantPanel, PanelConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveClass {
    All,
    /// Everything but the curl moves.
    Regular,
}

impl MoveClass {
    pub fn allows(self, k: MoveKind) -> bool {
        self == MoveClass::All || k.is_regular()
    }

    /// Whether an entry with this tag must survive moves of the class.
    pub fn preserves(self, inv: Invariance) -> bool {
        match inv {
            Invariance::VirtualIsotopy => true,
            Invariance::RegularIsotopy => self == MoveClass::Regular,
            Invariance::DiagramDependent => false,
        }
    }
}

impl FromStr for MoveClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(MoveClass::All),
            "regular" => Ok(MoveClass::Regular),
            _ => Err(format!("unknown move class `{s}`")),
        }
    }
}

impl fmt::Display for MoveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveClass::All => "all",
            MoveClass::Regular => "regular",
        })
    }
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub iterations: usize,
    pub seed: u64,
    pub moves: MoveClass,
    /// Inserting moves are suppressed while the diagram has this many more
    /// vertices than at the start.
    pub growth: usize,
    /// Entries of the panel; code facts are ignored.
    pub panel: PanelConfig,
    /// The state sum is skipped on diagrams with more classical crossings.
    pub quantum_cap: usize,
}

impl FuzzConfig {
    pub fn new(iterations: usize, seed: u64, moves: MoveClass) -> FuzzConfig {
        FuzzConfig {
            iterations,
            seed,
            moves,
            growth: 4,
            panel: PanelConfig {
                code_facts: false,
                dihedral: vec![3, 5],
                groups: false,
                alexander: true,
                bracket: true,
                quantum: true,
                nmax: None,
            },
            quantum_cap: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Change {
    pub step: usize,
    pub entry: String,
    pub before: String,
    pub after: String,
    pub applied: MoveSpec,
}

impl fmt::Display for Change {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} ({:?}): {} changed from {} to {}", self.step, self.applied.kind, self.entry, self.before, self.after)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub moves: MoveClass,
    pub iterations: usize,
    /// Entries that must not change under the move class.
    pub checked: Vec<String>,
    pub violations: Vec<Change>,
    /// First change of each entry that the move class may alter.
    pub expected_changes: Vec<Change>,
    pub move_counts: BTreeMap<String, usize>,
    pub final_vertices: usize,
}

impl FuzzReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {} moves {} iterations {}", self.seed, self.moves, self.iterations)?;
        writeln!(f, "checked: {}", self.checked.join(", "))?;
        let counts: Vec<String> = self.move_counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "moves applied: {}", counts.join(" "))?;
        for c in &self.expected_changes {
            writeln!(f, "changed (not invariant under these moves): {c}")?;
        }
        for c in &self.violations {
            writeln!(f, "VIOLATION {c}")?;
        }
        write!(f, "{} violations", self.violations.len())
    }
}

fn inflates(m: &MoveSpec) -> bool {
    matches!(m.site, Site::Edge { .. } | Site::Circle { .. } | Site::DartPair { .. })
}

fn panel(d: &Diagram, cfg: &FuzzConfig) -> InvariantPanel {
    let mut pc = cfg.panel.clone();
    pc.quantum &= d.classical_count() <= cfg.quantum_cap;
    compute_panel(d, &pc)
}

/// Picks a move kind uniformly among those available, then a move of that kind.
fn choose(d: &Diagram, cfg: &FuzzConfig, limit: usize, rng: &mut ChaCha8Rng) -> Option<MoveSpec> {
    let grow = d.num_vertices() < limit;
    let mut by_kind: BTreeMap<(MoveKind, bool), Vec<MoveSpec>> = BTreeMap::new();
    for m in enumerate_moves(d) {
        if cfg.moves.allows(m.kind) && (grow || !inflates(&m)) {
            by_kind.entry((m.kind, inflates(&m))).or_default().push(m);
        }
    }
    let kinds: Vec<_> = by_kind.keys().copied().collect();
    let k = kinds.choose(rng)?;
    by_kind[k].choose(rng).copied()
}

pub fn fuzz(d: &Diagram, cfg: &FuzzConfig) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let base = panel(d, cfg);
    let mut checked = Vec::new();
    for e in &base.entries {
        if cfg.moves.preserves(e.invariance) && matches!(e.value, EntryValue::Value(_)) {
            checked.push(e.name.clone());
        }
    }
    let limit = d.num_vertices() + cfg.growth;
    let mut cur = d.clone();
    let mut violations = Vec::new();
    let mut expected_changes: Vec<Change> = Vec::new();
    let mut move_counts = BTreeMap::new();
    for step in 1..=cfg.iterations {
        let Some(m) = choose(&cur, cfg, limit, &mut rng) else { break };
        cur = match apply_move(&cur, &m) {
            Ok(n) => n,
            Err(_) => continue,
        };
        *move_counts.entry(format!("{:?}", m.kind)).or_insert(0) += 1;
        let now = panel(&cur, cfg);
        for e in &base.entries {
            let EntryValue::Value(before) = &e.value else { continue };
            let Some(EntryValue::Value(after)) = now.get(&e.name).map(|x| &x.value) else { continue };
            if before == after {
                continue;
            }
            let change =
                Change { step, entry: e.name.clone(), before: before.clone(), after: after.clone(), applied: m };
            if cfg.moves.preserves(e.invariance) {
                violations.push(change);
            } else if e.invariance != Invariance::DiagramDependent
                && !expected_changes.iter().any(|c| c.entry == e.name)
            {
                expected_changes.push(change);
            }
        }
        if !violations.is_empty() {
            break;
        }
    }
    FuzzReport {
        seed: cfg.seed,
        moves: cfg.moves,
        iterations: cfg.iterations,
        checked,
        violations,
        expected_changes,
        move_counts,
        final_vertices: cur.num_vertices(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn same_seed_same_report() {
        let d = fixtures::diagram("Kprime").unwrap();
        let cfg = FuzzConfig::new(40, 7, MoveClass::All);
        let a = fuzz(&d, &cfg);
        assert_eq!(a, fuzz(&d, &cfg));
        assert!(a.clean(), "{a}");
        assert!(a.checked.contains(&"f".to_string()));
    }

    #[test]
    fn regular_walks_avoid_curls() {
        let d = fixtures::diagram("K").unwrap();
        let r = fuzz(&d, &FuzzConfig::new(40, 3, MoveClass::Regular));
        assert!(r.clean(), "{r}");
        assert!(r.move_counts.keys().all(|k| !k.ends_with('1')));
        assert!(r.checked.contains(&"z".to_string()));
    }
}
