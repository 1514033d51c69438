//! Acceptance run: every criterion at its tolerance, one line per criterion.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use vknot::algebra::{self, quandle_presentation};
use vknot::codes::{self, is_evenly_intersticed, is_planar, is_prime, interleave_star, SignedGaussCode};
use vknot::diagram::ops::connected_sum;
use vknot::diagram::Diagram;
use vknot::fixtures;
use vknot::fuzz::{fuzz, FuzzConfig, MoveClass};
use vknot::poly::{LaurentPoly, MultiPoly};
use vknot::quantum::{self, compile_morse, evaluate_tensor, morse_from_diagram};
use vknot::skein;
use vknot::vassiliev;

type Outcome = Result<String, String>;

fn code(s: &str) -> SignedGaussCode {
    SignedGaussCode::parse(s).expect("valid code")
}

fn fixture(name: &str) -> Diagram {
    fixtures::diagram(name).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

fn poly(s: &str) -> LaurentPoly {
    s.parse().expect("valid polynomial")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + std::fmt::Display>(what: &str, got: T, want: T) -> Result<(), String> {
    ensure(got == want, || format!("{what}: got {got}, want {want}"))
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<T, String> {
    let t = Instant::now();
    let r = f();
    let e = t.elapsed();
    ensure(e <= limit, || format!("{what} took {e:?}, limit {limit:?}"))?;
    Ok(r)
}

fn first_out(d: &Diagram) -> usize {
    (0..4 * d.num_vertices()).find(|&s| d.is_out(s)).expect("diagram has vertices")
}

fn codes_algebra() -> Outcome {
    let ms = Duration::from_millis(1);
    let star = timed(ms, "interleave_star", || interleave_star(&code("1234/1536/2546")).to_string())?;
    eq("interleave_star", star.as_str(), "236416215435")?;
    eq("is_planar(123123)", timed(ms, "is_planar", || is_planar(&code("123123")))?, true)?;
    eq("is_planar(1234534125)", timed(ms, "is_planar", || is_planar(&code("1234534125")))?, false)?;
    let even = timed(ms, "is_evenly_intersticed", || is_evenly_intersticed(&code("1234534125")))?;
    eq("evenly intersticed(1234534125)", even.map_err(|e| e.to_string())?, true)?;
    eq("is_prime(123123)", timed(ms, "is_prime", || is_prime(&code("123123")))?.map_err(|e| e.to_string())?, true)?;
    // 121234543 names crossing 5 once, so it is not a Gauss code; primality is read off the raw word
    let raw = [1, 2, 1, 2, 3, 4, 5, 4, 3];
    eq("is_prime(121234543)", timed(ms, "is_prime_word", || codes::is_prime_word(&raw))?, false)?;
    Ok("star, planarity, interstices and primality exact".into())
}

fn bracket_and_f() -> Outcome {
    timed(Duration::from_secs(1), "bracket and f", || -> Result<(), String> {
        let kp = fixture("Kprime");
        eq("<K'>", skein::bracket(&kp).map_err(|e| e.to_string())?, poly("A^2 + 1 - A^-4"))?;
        eq("f(K')", skein::f_polynomial(&kp).map_err(|e| e.to_string())?, poly("A^-4 + A^-6 - A^-10"))?;
        eq("f(K)", skein::f_polynomial(&fixture("K")).map_err(|e| e.to_string())?, LaurentPoly::one())?;
        eq("<D>", skein::bracket(&fixture("D")).map_err(|e| e.to_string())?, poly("-A^3"))
    })??;
    Ok("<K'>, f(K'), f(K) = 1, <D> = -A^3".into())
}

fn quantum_values() -> Outcome {
    timed(Duration::from_secs(5), "quantum values", || -> Result<(), String> {
        let z = quantum::z_invariant(&fixture("D")).map_err(|e| e.to_string())?;
        eq("Z(D)", z, poly("A^7 - A^5 - 4*A^3 + 2*A + A^-1 - A^-3"))?;
        let a = |p: &str| MultiPoly::from_laurent(&poly(p));
        let a0 = MultiPoly::var(0);
        let want = &(&a("-A^-5") * &MultiPoly::var(1)) + &(&a("A - A^-3") * &(&a0 * &a0));
        let zbar = quantum::z_bar(&fixture("unit_jones")).map_err(|e| e.to_string())?;
        eq("reduced Zbar(unit_jones)", quantum::z_bar_reduced(&zbar), want)?;
        let want_f = &(&a("-2") * &a0) + &MultiPoly::var(2);
        eq("Zbar(F) at A = 1", quantum::z_bar_flat(&fixture("F")).map_err(|e| e.to_string())?, want_f)
    })??;
    Ok("Z(D), reduced Zbar, flat Zbar at A = 1".into())
}

fn state_sum_paths() -> Outcome {
    let corpus = fixtures::classical().map_err(|e| e.to_string())?;
    let checked = timed(Duration::from_secs(30), "classical corpus", || -> Result<usize, String> {
        for f in &corpus {
            let d = f.diagram().map_err(|e| e.to_string())?;
            ensure(d.classical_count() <= 8 && d.virtual_count() == 0, || format!("{} is not a small classical diagram", f.name))?;
            let z = quantum::z_invariant(&d).map_err(|e| e.to_string())?;
            let b = skein::bracket(&d).map_err(|e| e.to_string())?;
            eq(&format!("Z = d<K> on {}", f.name), z.clone(), &LaurentPoly::loop_value() * &b)?;
            let net = morse_from_diagram(&d).and_then(|w| compile_morse(&w)).map_err(|e| e.to_string())?;
            let t = evaluate_tensor(&net).map_err(|e| e.to_string())?;
            eq(&format!("tensor = state sum on {}", f.name), t, z)?;
        }
        Ok(corpus.len())
    })??;
    ensure(checked >= 10, || format!("only {checked} classical fixtures"))?;
    Ok(format!("{checked} classical fixtures, both identities"))
}

/// Colorings of the presentation by `Z/n` with `a * b = 2b - a`, by enumeration.
fn brute_dihedral(d: &Diagram, n: usize) -> usize {
    let p = quandle_presentation(d, true).expect("presentation");
    (0..p.generators)
        .map(|_| 0..n)
        .multi_cartesian_product()
        .filter(|c| p.relations.iter().all(|r| c[r.lhs] == (2 * c[r.exponent] + n - c[r.base]) % n))
        .count()
}

fn algebra_values() -> Outcome {
    let det = algebra::determinant(&fixture("K")).map_err(|e| e.to_string())?;
    eq("det(K)", det, BigInt::from(3))?;

    // the published relations a = b^d, b = c^d, c = d^b, d = a^b under some naming of our arcs
    let k = fixture("quandle_K");
    let p = quandle_presentation(&k, false).map_err(|e| e.to_string())?;
    let want = [(0, 1, 3), (1, 2, 3), (2, 3, 1), (3, 0, 1)];
    let coloring = [0usize, 2, 0, 1];
    let mut matched = false;
    for perm in (0..4).permutations(4) {
        let mut got: Vec<_> = p.relations.iter().map(|r| (perm[r.lhs], perm[r.base], perm[r.exponent])).collect();
        got.sort();
        if got == want && p.relations.iter().all(|r| r.positive) {
            matched = true;
            let ok = want.iter().all(|&(l, b, x)| coloring[l] == (2 * coloring[x] + 3 - coloring[b]) % 3);
            ensure(ok, || "(0,2,0,1) is not a 3-coloring".into())?;
        }
    }
    ensure(matched, || "quandle_K relations do not match the published ones".into())?;

    let ks = fixture("quandle_Kstar");
    let n = algebra::dihedral_colorings(&ks, 3).map_err(|e| e.to_string())?;
    eq("R3 colorings of K*", n.clone(), BigInt::from(3))?;
    eq("R3 colorings of K* (enumeration)", BigInt::from(brute_dihedral(&ks, 3)), n)?;
    eq("Alexander(K*)", algebra::alexander_polynomial(&ks).map_err(|e| e.to_string())?, LaurentPoly::one())?;
    let ak = algebra::alexander_polynomial(&k).map_err(|e| e.to_string())?;
    ensure(ak != LaurentPoly::one(), || "Alexander(K) = 1".into())?;
    Ok(format!("det 3; (0,2,0,1) colors K; K* has 3 colorings; Alexander {} vs 1", ak.display_in("t")))
}

fn infinite_family() -> Outcome {
    let summary = timed(Duration::from_secs(60), "family", || -> Result<String, String> {
        let l = fixture("knot_3_1");
        let w = fixtures::w_tangle().map_err(|e| e.to_string())?;
        let counts = |d: &Diagram| -> Result<Vec<BigInt>, String> {
            (3..=9).map(|n| algebra::dihedral_colorings(d, n).map_err(|e| e.to_string())).collect()
        };
        let base = counts(&l)?;
        let mut cur = l.clone();
        let mut fs = Vec::new();
        for m in 1..=4 {
            cur = connected_sum(&cur, first_out(&cur), &w.closure, w.cut).map_err(|e| e.to_string())?;
            ensure(counts(&cur)? == base, || format!("coloring counts change at m = {m}"))?;
            fs.push(skein::f_polynomial(&cur).map_err(|e| e.to_string())?);
        }
        ensure(fs.iter().all_unique(), || "two f-polynomials coincide".into())?;
        Ok(format!("4 sums with distinct f, colorings {:?}", base.iter().map(|c| c.to_string()).collect::<Vec<_>>()))
    })??;
    Ok(summary)
}

fn finite_type() -> Outcome {
    let r = |n: i64| BigRational::from_integer(BigInt::from(n));
    for name in ["two_node_trefoil", "two_node_virtual"] {
        let s = vassiliev::vassiliev_coeffs(&fixture(name), 2).map_err(|e| e.to_string())?;
        eq(&format!("v2({name})"), s.coeffs[2].clone(), r(-48))?;
    }
    let all = fixtures::all().map_err(|e| e.to_string())?;
    let mut plain = 0;
    let mut graphs = 0;
    for f in &all {
        let d = f.diagram().map_err(|e| e.to_string())?;
        let nodes = vassiliev::node_count(&d);
        let flat = d.count(|k| k == vknot::VertexKind::Flat) > 0;
        if nodes == 0 && !flat {
            let mu = d.components();
            if mu <= 2 {
                let v0 = vassiliev::vassiliev_coeffs(&d, 0).map_err(|e| e.to_string())?.coeffs[0].clone();
                eq(&format!("v0({})", f.name), v0, r((-2i64).pow(mu as u32 - 1)))?;
                plain += 1;
            }
        }
        if (1..=2).contains(&nodes) {
            let direct = vassiliev::vassiliev_coeffs(&d, 4).map_err(|e| e.to_string())?;
            for node in (0..d.num_vertices()).filter(|&v| d.kind(v) == vknot::VertexKind::Node) {
                for n in 0..=4 {
                    let rec = vassiliev::v_n_by_recursion(&d, node, n).map_err(|e| e.to_string())?;
                    eq(&format!("recursion at node {node}, n = {n}, {}", f.name), rec, direct.coeffs[n].clone())?;
                }
            }
            graphs += 1;
        }
        if (1..=3).contains(&nodes) {
            let s = vassiliev::vassiliev_coeffs(&d, nodes - 1).map_err(|e| e.to_string())?;
            ensure(s.coeffs.iter().all(Zero::is_zero), || format!("v_k != 0 below the node count on {}", f.name))?;
        }
    }
    ensure(graphs >= 4, || format!("only {graphs} graph fixtures with 1 or 2 nodes"))?;
    Ok(format!("v2 = -48 twice; v0 on {plain} fixtures; recursion on {graphs} graphs"))
}

fn move_fuzz() -> Outcome {
    let names = ["Kprime", "K", "D", "quandle_K", "knot_3_1", "knot_4_1"];
    let total = timed(Duration::from_secs(120), "fuzz", || -> Result<usize, String> {
        let mut runs = 0;
        for (i, name) in names.iter().enumerate() {
            let d = fixture(name);
            for class in [MoveClass::All, MoveClass::Regular] {
                let r = fuzz(&d, &FuzzConfig::new(1000, 1000 + i as u64, class));
                ensure(r.clean(), || format!("{name} ({class}): {}", r.violations[0]))?;
                let needed: &[&str] = match class {
                    MoveClass::All => &["f", "determinant", "colorings_R3"],
                    MoveClass::Regular => &["f", "determinant", "colorings_R3", "z"],
                };
                for n in needed {
                    ensure(r.checked.iter().any(|c| c == n), || format!("{name} ({class}) did not check {n}"))?;
                }
                runs += 1;
            }
        }
        let d = fixture("Kprime");
        let cfg = FuzzConfig::new(200, 5, MoveClass::All);
        ensure(fuzz(&d, &cfg) == fuzz(&d, &cfg), || "fuzz is not reproducible".into())?;
        Ok(runs)
    })??;
    Ok(format!("{total} walks of 1000 steps, no violations"))
}

/// Planarity by brute force: a code is planar when some choice of local
/// rotation at each crossing gives a sphere, i.e. `n + 2` faces.
fn oracle_planar(word: &[u32]) -> bool {
    let len = word.len();
    if len == 0 {
        return true;
    }
    let n = len / 2;
    // darts: 2p is the arrival at position p, 2p + 1 the departure from it
    let mut first = vec![usize::MAX; n + 1];
    let mut pair = vec![0usize; len];
    for (p, &l) in word.iter().enumerate() {
        let l = l as usize;
        if first[l] == usize::MAX {
            first[l] = p;
        } else {
            pair[p] = first[l];
            pair[first[l]] = p;
        }
    }
    let partner = |dart: usize| {
        let p = dart / 2;
        if dart % 2 == 1 {
            2 * ((p + 1) % len)
        } else {
            2 * ((p + len - 1) % len) + 1
        }
    };
    (0..1u32 << n).any(|choice| {
        let mut succ = vec![0usize; 2 * len];
        for p in 0..len {
            let q = pair[p];
            if p > q {
                continue;
            }
            let l = word[p] as usize;
            let (ip, op, iq, oq) = (2 * p, 2 * p + 1, 2 * q, 2 * q + 1);
            let cyc = if choice >> (l - 1) & 1 == 0 { [ip, iq, op, oq] } else { [ip, oq, op, iq] };
            for k in 0..4 {
                succ[cyc[k]] = cyc[(k + 1) % 4];
            }
        }
        let mut seen = vec![false; 2 * len];
        let mut faces = 0;
        for start in 0..2 * len {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                d = succ[partner(d)];
            }
        }
        faces == n + 2
    })
}

fn words(n: usize) -> Vec<Vec<u32>> {
    fn rec(w: &mut Vec<u32>, used: &mut Vec<u8>, n: usize, next: u32, out: &mut Vec<Vec<u32>>) {
        if w.len() == 2 * n {
            out.push(w.clone());
            return;
        }
        for l in 1..=next.min(n as u32) {
            let i = l as usize;
            if used[i] == 2 || (used[i] == 0 && l != next) {
                continue;
            }
            used[i] += 1;
            w.push(l);
            rec(w, used, n, if l == next { next + 1 } else { next }, out);
            w.pop();
            used[i] -= 1;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![0; n + 1], n, 1, &mut out);
    out
}

fn planarity_oracle() -> Outcome {
    let checked = timed(Duration::from_secs(300), "planarity sweep", || -> Result<usize, String> {
        let mut seen = HashSet::new();
        for n in 1..=5 {
            for w in words(n) {
                let expected = oracle_planar(&w);
                for deco in 0..1u32 << (2 * n) {
                    let mut first = vec![true; n + 1];
                    let text: String = w
                        .iter()
                        .map(|&l| {
                            let i = l as usize;
                            let over = (deco >> (i - 1) & 1 == 1) == first[i];
                            first[i] = false;
                            let sign = if deco >> (n + i - 1) & 1 == 1 { '+' } else { '-' };
                            format!("{}{l}{sign}", if over { 'O' } else { 'U' })
                        })
                        .collect();
                    let c = code(&text).canonical();
                    if !seen.insert(c.to_string()) {
                        continue;
                    }
                    ensure(is_planar(&c) == expected, || format!("{c}: is_planar disagrees with the oracle"))?;
                }
            }
        }
        Ok(seen.len())
    })??;
    ensure(codes::is_planar(&code("11")), || "11".into())?;
    Ok(format!("{checked} canonical codes agree with the rotation search"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("gauss code algebra", codes_algebra),
        ("bracket and f", bracket_and_f),
        ("quantum values", quantum_values),
        ("state sum identities", state_sum_paths),
        ("quandle and determinant", algebra_values),
        ("infinite family", infinite_family),
        ("finite type", finite_type),
        ("move invariance", move_fuzz),
        ("planarity oracle", planarity_oracle),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let e = t.elapsed();
        match r {
            Ok(msg) => println!("criterion {} {name}: PASS ({e:.2?}) {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({e:.2?}) {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
