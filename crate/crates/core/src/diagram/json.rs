//! JSON exchange format for diagrams.

use serde::{Deserialize, Serialize};

use super::{port_of, slot, vertex_of, Diagram, DiagramError, Join, OverPair, VertexKind, UNLINKED};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub over: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join: Option<String>,
    /// Port names in counterclockwise order.
    #[serde(default = "default_rot")]
    pub rot: Vec<usize>,
}

fn default_rot() -> Vec<usize> {
    vec![0, 1, 2, 3]
}

/// `edges` are directed `[v, port, w, port]` from tail to head; `outer_face`
/// indexes the faces listed in order of their least dart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 4]>,
    #[serde(default)]
    pub outer_face: Option<usize>,
    #[serde(default)]
    pub circles: usize,
}

impl From<&Diagram> for DiagramJson {
    fn from(d: &Diagram) -> Self {
        let vertices = d
            .kinds
            .iter()
            .map(|k| {
                let (kind, over, join) = match k {
                    VertexKind::Classical(o) => {
                        ("classical", Some(if *o == OverPair::Even { "02" } else { "13" }), None)
                    }
                    VertexKind::Virtual => ("virtual", None, None),
                    VertexKind::Flat => ("flat", None, None),
                    VertexKind::Node => ("node", None, None),
                    VertexKind::Smoothing(j) => ("smoothing", None, Some(if *j == Join::Next { "01" } else { "03" })),
                };
                VertexJson {
                    kind: kind.into(),
                    over: over.map(Into::into),
                    join: join.map(Into::into),
                    rot: default_rot(),
                }
            })
            .collect();
        let edges = d
            .edges()
            .into_iter()
            .map(|(s, t)| [vertex_of(s), port_of(s), vertex_of(t), port_of(t)])
            .collect();
        DiagramJson { vertices, edges, outer_face: d.outer_face_index(), circles: d.circles }
    }
}

impl TryFrom<&DiagramJson> for Diagram {
    type Error = DiagramError;

    fn try_from(j: &DiagramJson) -> Result<Diagram, DiagramError> {
        let bad = |m: String| DiagramError::Invalid(m);
        let mut d = Diagram::circles(j.circles);
        // position[v][name] = ccw position of the port called `name`
        let mut position = Vec::new();
        for (v, vj) in j.vertices.iter().enumerate() {
            let mut pos = [usize::MAX; 4];
            if vj.rot.len() != 4 {
                return Err(bad(format!("vertex {v} needs four ports")));
            }
            for (i, &name) in vj.rot.iter().enumerate() {
                if name > 3 || pos[name] != usize::MAX {
                    return Err(bad(format!("vertex {v} has a bad rotation")));
                }
                pos[name] = i;
            }
            let over_pos = |s: &str| -> Result<OverPair, DiagramError> {
                let first = s.chars().next().and_then(|c| c.to_digit(10)).ok_or_else(|| bad(format!("bad over pair `{s}`")))?;
                Ok(OverPair::of_port(pos[first as usize]))
            };
            let kind = match vj.kind.as_str() {
                "classical" => VertexKind::Classical(over_pos(vj.over.as_deref().unwrap_or("02"))?),
                "virtual" => VertexKind::Virtual,
                "flat" => VertexKind::Flat,
                "node" => VertexKind::Node,
                "smoothing" => {
                    let s = vj.join.as_deref().unwrap_or("01");
                    let digits: Vec<usize> = s.chars().filter_map(|c| c.to_digit(10).map(|x| x as usize)).collect();
                    if digits.len() != 2 || digits.iter().any(|&x| x > 3) {
                        return Err(bad(format!("bad join `{s}`")));
                    }
                    let (a, b) = (pos[digits[0]], pos[digits[1]]);
                    let joined_next = (a.max(b) - a.min(b) == 1) == (a.min(b) % 2 == 0);
                    VertexKind::Smoothing(if joined_next { Join::Next } else { Join::Prev })
                }
                other => return Err(bad(format!("unknown vertex kind `{other}`"))),
            };
            d.add_vertex(kind);
            position.push(pos);
        }
        for e in &j.edges {
            if e[0] >= position.len() || e[2] >= position.len() || e[1] > 3 || e[3] > 3 {
                return Err(bad(format!("edge {e:?} out of range")));
            }
            let (s, t) = (slot(e[0], position[e[0]][e[1]]), slot(e[2], position[e[2]][e[3]]));
            if d.link[s] != UNLINKED || d.link[t] != UNLINKED || s == t {
                return Err(bad(format!("edge {e:?} reuses a port")));
            }
            d.connect(s, t);
        }
        if d.link.contains(&UNLINKED) {
            return Err(bad("some port is not attached to an edge".into()));
        }
        if !d.kinds.is_empty() {
            let faces = d.faces();
            let f = j.outer_face.unwrap_or(0);
            let face = faces.get(f).ok_or_else(|| bad(format!("outer face {f} does not exist")))?;
            d.outer = Some(face[0]);
        }
        d.validate()?;
        Ok(d)
    }
}

impl Diagram {
    pub fn to_json(&self) -> DiagramJson {
        DiagramJson::from(self)
    }

    pub fn from_json(j: &DiagramJson) -> Result<Diagram, DiagramError> {
        Diagram::try_from(j)
    }

    pub fn from_json_str(s: &str) -> Result<Diagram, DiagramError> {
        let j: DiagramJson = serde_json::from_str(s).map_err(|e| DiagramError::Invalid(e.to_string()))?;
        Diagram::from_json(&j)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("diagram serializes")
    }
}
