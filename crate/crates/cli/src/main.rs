use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vknot::algebra::{self, FiniteGroup, FiniteQuandle};
use vknot::codes::{self, SignedGaussCode};
use vknot::diagram::gauss::{from_gauss, to_gauss};
use vknot::fuzz::{fuzz, FuzzConfig, MoveClass};
use vknot::panel::{compute_panel, distinguish, PanelConfig};
use vknot::vassiliev::{self, NMAX_DEFAULT};
use vknot::{fixtures, quantum, skein, Diagram, LaurentPoly, VertexKind};

#[derive(Parser)]
#[command(name = "vknot", version, about = "Virtual knot diagrams and their invariants")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// One diagram: a signed Gauss code, a diagram JSON file or a fixture name.
/// With none of them the code is read from stdin.
#[derive(Args, Clone)]
struct Input {
    /// Signed Gauss code such as O1+U2+O3+U1+O2+U3+; components separated by `/`
    code: Option<String>,
    #[arg(long, value_name = "FILE", conflicts_with_all = ["code", "fixture"])]
    json: Option<PathBuf>,
    #[arg(long, value_name = "NAME", conflicts_with = "code")]
    fixture: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse an input and describe the diagram
    Parse(Input),
    /// Planarity of the Gauss code
    Planar(Input),
    /// Primality of the Gauss code
    Prime(Input),
    /// Whether the code is realized by a classical diagram
    Realizable(Input),
    /// The full invariant panel
    Invariants {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = NMAX_DEFAULT)]
        nmax: usize,
    },
    /// Bracket polynomial
    Bracket(Input),
    /// Normalized bracket (f-polynomial)
    F {
        #[command(flatten)]
        input: Input,
        /// Print as a Jones polynomial in t, with A = t^(-1/4)
        #[arg(long)]
        jones: bool,
    },
    /// Determinant
    Det(Input),
    /// Alexander polynomial
    Alexander(Input),
    /// Count colorings by a dihedral or Alexander quandle, or homomorphisms to a group
    Colorings {
        #[command(flatten)]
        input: Input,
        /// Quandle order
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Use the Alexander quandle Z/n with a*b = t*a + (1-t)*b
        #[arg(long, allow_hyphen_values = true)]
        t: Option<i64>,
        /// Count homomorphisms of the knot group to S3, D4 or A4 instead
        #[arg(long, conflicts_with = "t")]
        group: Option<String>,
    },
    /// Rotational state sum Z
    Z(Input),
    /// Rotational state sum with curve variables
    Zbar(Input),
    /// Vassiliev coefficients v0..vn
    Vassiliev {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = NMAX_DEFAULT)]
        nmax: usize,
    },
    /// Compare two diagrams by their panels
    Distinguish {
        /// Gauss codes
        codes: Vec<String>,
        #[arg(long, value_name = "FILE")]
        json: Vec<PathBuf>,
        #[arg(long, value_name = "NAME")]
        fixture: Vec<String>,
        #[arg(long, default_value_t = NMAX_DEFAULT)]
        nmax: usize,
    },
    /// Random walk through moves, checking that invariants stay fixed
    Fuzz {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Moves::All)]
        moves: Moves,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
    },
    /// Recompute the values recorded in the fixture corpus
    VerifyFixtures {
        #[arg(long, value_name = "NAME")]
        fixture: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Moves {
    All,
    Regular,
}

struct Failure {
    code: String,
    message: String,
}

impl Failure {
    fn new(code: &str, message: impl ToString) -> Failure {
        Failure { code: code.into(), message: message.to_string() }
    }
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Failure {
                Failure::new(e.code(), &e)
            }
        }
    )*};
}

failure_from!(
    codes::CodeError,
    vknot::diagram::DiagramError,
    algebra::AlgebraError,
    vassiliev::VassilievError,
    fixtures::FixtureError
);

/// What a command printed and how the process should exit.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Output {
        Output { text: text.into(), json, ok: true }
    }
}

enum Source {
    Code(String),
    Json(PathBuf),
    Fixture(String),
}

impl Source {
    fn of(input: &Input) -> Result<Source, Failure> {
        if let Some(p) = &input.json {
            return Ok(Source::Json(p.clone()));
        }
        if let Some(n) = &input.fixture {
            return Ok(Source::Fixture(n.clone()));
        }
        if let Some(c) = &input.code {
            return Ok(Source::Code(c.clone()));
        }
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::new("io", e))?;
        Ok(Source::Code(s.trim().to_string()))
    }

    fn diagram(&self) -> Result<Diagram, Failure> {
        match self {
            Source::Code(c) => Ok(from_gauss(&SignedGaussCode::parse(c)?)?),
            Source::Json(p) => {
                let s = fs::read_to_string(p).map_err(|e| Failure::new("io", format!("{}: {e}", p.display())))?;
                Ok(Diagram::from_json_str(&s)?)
            }
            Source::Fixture(n) => Ok(fixtures::diagram(n)?),
        }
    }

    /// The code as given, or read off the diagram.
    fn code(&self) -> Result<SignedGaussCode, Failure> {
        match self {
            Source::Code(c) => Ok(SignedGaussCode::parse(c)?),
            _ => Ok(to_gauss(&self.diagram()?)?),
        }
    }

    fn label(&self) -> String {
        match self {
            Source::Code(c) => c.clone(),
            Source::Json(p) => p.display().to_string(),
            Source::Fixture(n) => n.clone(),
        }
    }
}

fn poly_output(name: &str, p: &LaurentPoly) -> Output {
    Output::new(p.to_string(), json!({ name: p.to_string(), "terms": p.to_json_terms() }))
}

fn bool_output(name: &str, b: bool) -> Output {
    Output::new(b.to_string(), json!({ name: b }))
}

/// `f(A)` under `A = t^(-1/4)`. Links give half-integer powers, printed in `s = t^(1/2)`.
fn jones(f: &LaurentPoly) -> Result<(String, String), Failure> {
    if f.terms().all(|(e, _)| e % 4 == 0) {
        let p = LaurentPoly::from_terms(f.terms().map(|(e, c)| (-e / 4, c.clone())));
        return Ok((p.display_in("t"), "t".into()));
    }
    if f.terms().all(|(e, _)| e % 2 == 0) {
        let p = LaurentPoly::from_terms(f.terms().map(|(e, c)| (-e / 2, c.clone())));
        return Ok((p.display_in("s"), "s = t^(1/2)".into()));
    }
    Err(Failure::new("odd_exponent", "f has odd powers of A"))
}

fn parse_cmd(src: &Source) -> Result<Output, Failure> {
    let d = src.diagram()?;
    let code = to_gauss(&d)?;
    let flat = d.count(|k| k == VertexKind::Flat);
    let facts = [
        ("components", d.components() as i64),
        ("classical", d.classical_count() as i64),
        ("virtual", d.virtual_count() as i64),
        ("flat", flat as i64),
        ("nodes", d.node_count() as i64),
        ("writhe", d.writhe()),
    ];
    let mut text = format!("code: {code}\ncanonical: {}\n", code.canonical());
    for (k, v) in facts {
        text.push_str(&format!("{k}: {v}\n"));
    }
    let mut j = json!({ "code": code.to_string(), "canonical": code.canonical().to_string() });
    for (k, v) in facts {
        j[k] = json!(v);
    }
    j["diagram"] = serde_json::to_value(d.to_json()).expect("diagram serializes");
    Ok(Output::new(text.trim_end(), j))
}

fn colorings_cmd(src: &Source, n: usize, t: Option<i64>, group: Option<&str>) -> Result<Output, Failure> {
    let d = src.diagram()?;
    if let Some(name) = group {
        let g = FiniteGroup::battery()
            .into_iter()
            .find(|g| g.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Failure::new("unknown_group", format!("unknown group `{name}`; try S3, D4 or A4")))?;
        let p = algebra::wirtinger_presentation(&d)?;
        let c = algebra::count_group_homs(&p, &g)?;
        return Ok(Output::new(c.to_string(), json!({ "group": g.name, "homs": c.to_string() })));
    }
    let q = match t {
        Some(t) => FiniteQuandle::alexander(n as u64, t)?,
        None => FiniteQuandle::dihedral(n),
    };
    let p = algebra::quandle_presentation(&d, q.is_involutory())?;
    let c = algebra::count_colorings(&p, &q)?;
    Ok(Output::new(c.to_string(), json!({ "quandle": q.name, "colorings": c.to_string() })))
}

fn distinguish_cmd(sources: &[Source], nmax: usize) -> Result<Output, Failure> {
    let [a, b] = sources else {
        return Err(Failure::new("usage", format!("distinguish needs two inputs, got {}", sources.len())));
    };
    let cfg = PanelConfig { nmax: Some(nmax), ..PanelConfig::default() };
    let pa = compute_panel(&a.diagram()?, &cfg);
    let pb = compute_panel(&b.diagram()?, &cfg);
    let v = distinguish(&pa, &pb);
    let j = json!({ "left": a.label(), "right": b.label(), "verdict": v });
    Ok(Output::new(v.to_string(), j))
}

fn verify_cmd(only: Option<&str>) -> Result<Output, Failure> {
    let reports = match only {
        Some(n) => vec![fixtures::verify(&fixtures::get(n)?)],
        None => fixtures::verify_all()?,
    };
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!("{} {}\n", if r.passed() { "ok  " } else { "FAIL" }, r.name));
        for c in r.results.iter().filter(|c| !c.passed) {
            text.push_str(&format!("     {}: {}\n", c.check, c.detail));
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    text.push_str(&format!("{} fixtures, {failed} failed", reports.len()));
    let mut out = Output::new(text, json!({ "fixtures": reports, "failed": failed }));
    out.ok = failed == 0;
    Ok(out)
}

fn run(cmd: &Cmd, matches: &ArgMatches) -> Result<Output, Failure> {
    Ok(match cmd {
        Cmd::Parse(i) => parse_cmd(&Source::of(i)?)?,
        Cmd::Planar(i) => bool_output("planar", codes::is_planar(&Source::of(i)?.code()?)),
        Cmd::Prime(i) => bool_output("prime", codes::is_prime(&Source::of(i)?.code()?)?),
        Cmd::Realizable(i) => {
            bool_output("classically_realizable", codes::is_classically_realizable(&Source::of(i)?.code()?)?)
        }
        Cmd::Invariants { input, nmax } => {
            let cfg = PanelConfig { nmax: Some(*nmax), ..PanelConfig::default() };
            let p = compute_panel(&Source::of(input)?.diagram()?, &cfg);
            Output::new(p.to_string().trim_end(), serde_json::to_value(&p).expect("panel serializes"))
        }
        Cmd::Bracket(i) => poly_output("bracket", &skein::bracket(&Source::of(i)?.diagram()?)?),
        Cmd::F { input, jones: false } => poly_output("f", &skein::f_polynomial(&Source::of(input)?.diagram()?)?),
        Cmd::F { input, jones: true } => {
            let f = skein::f_polynomial(&Source::of(input)?.diagram()?)?;
            let (v, var) = jones(&f)?;
            Output::new(v.clone(), json!({ "jones": v, "variable": var, "f": f.to_string() }))
        }
        Cmd::Det(i) => {
            let det = algebra::determinant(&Source::of(i)?.diagram()?)?;
            Output::new(det.to_string(), json!({ "determinant": det.to_string() }))
        }
        Cmd::Alexander(i) => {
            let p = algebra::alexander_polynomial(&Source::of(i)?.diagram()?)?;
            Output::new(p.display_in("t"), json!({ "alexander": p.display_in("t"), "terms": p.to_json_terms() }))
        }
        Cmd::Colorings { input, n, t, group } => colorings_cmd(&Source::of(input)?, *n, *t, group.as_deref())?,
        Cmd::Z(i) => poly_output("z", &quantum::z_invariant(&Source::of(i)?.diagram()?)?),
        Cmd::Zbar(i) => {
            let d = Source::of(i)?.diagram()?;
            let z = if d.count(|k| k == VertexKind::Flat) > 0 {
                quantum::z_bar_flat(&d)?
            } else {
                quantum::z_bar_reduced(&quantum::z_bar(&d)?)
            };
            Output::new(z.to_string(), json!({ "zbar": z.to_string() }))
        }
        Cmd::Vassiliev { input, nmax } => {
            let s = vassiliev::vassiliev_coeffs(&Source::of(input)?.diagram()?, *nmax)?;
            Output::new(s.to_string().trim_end(), json!({ "coefficients": s.to_strings() }))
        }
        Cmd::Distinguish { nmax, .. } => {
            let sub = matches.subcommand_matches("distinguish").expect("distinguish matches");
            distinguish_cmd(&sources_in_order(sub), *nmax)?
        }
        Cmd::Fuzz { input, moves, seed, iterations } => {
            let class = match moves {
                Moves::All => MoveClass::All,
                Moves::Regular => MoveClass::Regular,
            };
            let r = fuzz(&Source::of(input)?.diagram()?, &FuzzConfig::new(*iterations, *seed, class));
            let mut out = Output::new(r.to_string(), serde_json::to_value(&r).expect("report serializes"));
            out.ok = r.clean();
            out
        }
        Cmd::VerifyFixtures { fixture } => verify_cmd(fixture.as_deref())?,
    })
}

/// The inputs of `distinguish` in command-line order, whatever their kind.
fn sources_in_order(m: &ArgMatches) -> Vec<Source> {
    let mut all: Vec<(usize, Source)> = Vec::new();
    let mut take = |id: &str, make: &dyn Fn(String) -> Source| {
        if let (Some(vals), Some(idx)) = (m.get_raw(id), m.indices_of(id)) {
            for (v, i) in vals.zip(idx) {
                all.push((i, make(v.to_string_lossy().into_owned())));
            }
        }
    };
    take("codes", &Source::Code);
    take("json", &|s| Source::Json(PathBuf::from(s)));
    take("fixture", &Source::Fixture);
    all.sort_by_key(|(i, _)| *i);
    all.into_iter().map(|(_, s)| s).collect()
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(&cli.cmd, &matches) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json"),
            };
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(io::stdout().lock(), "{body}");
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            match cli.format {
                Format::Text => eprintln!("error[{}]: {}", f.code, f.message),
                Format::Json => eprintln!("{}", json!({ "error": { "code": f.code, "message": f.message } })),
            }
            ExitCode::from(2)
        }
    }
}
