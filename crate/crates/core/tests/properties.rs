use num_bigint::BigInt;
use proptest::prelude::*;

use vknot::algebra;
use vknot::codes::SignedGaussCode;
use vknot::diagram::gauss::{from_gauss, to_gauss};
use vknot::diagram::moves::{apply_move, enumerate_moves};
use vknot::diagram::ops::mirror;
use vknot::{fixtures, skein, LaurentPoly};

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-6i64..=6, -4i64..=4), 0..6).prop_map(LaurentPoly::from_terms)
}

/// A one-component signed Gauss code with `1..=max` crossings.
fn knot_code(max: u32) -> impl Strategy<Value = String> {
    (1..=max).prop_flat_map(|n| {
        let word: Vec<u32> = (1..=n).flat_map(|l| [l, l]).collect();
        let n = n as usize;
        (Just(word).prop_shuffle(), prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n))
    })
    .prop_map(|(word, over_first, positive)| {
        let mut seen = vec![false; word.len()];
        let mut s = String::new();
        for l in word {
            let i = l as usize - 1;
            let over = over_first[i] != seen[i];
            seen[i] = true;
            s.push_str(&format!("{}{l}{}", if over { 'O' } else { 'U' }, if positive[i] { '+' } else { '-' }));
        }
        s
    })
}

proptest! {
    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &a), &LaurentPoly::zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn laurent_display_parses_back(a in laurent()) {
        prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a);
    }

    #[test]
    fn exact_division_undoes_multiplication(a in laurent(), b in laurent()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn canonical_form_is_idempotent(code in knot_code(6)) {
        let c = SignedGaussCode::parse(&code).unwrap();
        let k = c.canonical();
        prop_assert_eq!(k.canonical(), k.clone());
        prop_assert_eq!(SignedGaussCode::parse(&k.to_string()).unwrap(), k);
    }

    #[test]
    fn drawing_reads_back_the_code(code in knot_code(6)) {
        let c = SignedGaussCode::parse(&code).unwrap();
        let d = from_gauss(&c).unwrap();
        prop_assert_eq!(d.classical_count(), c.num_crossings());
        prop_assert_eq!(to_gauss(&d).unwrap().canonical(), c.canonical());
    }

    #[test]
    fn state_sum_matches_recursion(code in knot_code(5)) {
        let d = from_gauss(&SignedGaussCode::parse(&code).unwrap()).unwrap();
        prop_assert_eq!(skein::bracket_states(&d).unwrap(), skein::bracket_recursive(&d).unwrap());
    }

    #[test]
    fn mirror_inverts_f(code in knot_code(5)) {
        let d = from_gauss(&SignedGaussCode::parse(&code).unwrap()).unwrap();
        let m = mirror(&d);
        prop_assert_eq!(m.writhe(), -d.writhe());
        prop_assert_eq!(skein::f_polynomial(&m).unwrap(), skein::f_polynomial(&d).unwrap().substitute_power(-1));
    }

    #[test]
    fn dihedral_colorings_come_in_translates(code in knot_code(5), n in 3usize..=6) {
        let d = from_gauss(&SignedGaussCode::parse(&code).unwrap()).unwrap();
        let c = algebra::dihedral_colorings(&d, n).unwrap();
        prop_assert!(c >= BigInt::from(n));
        prop_assert_eq!(c % BigInt::from(n), BigInt::from(0));
    }

    #[test]
    fn moves_preserve_f_and_colorings(code in knot_code(4), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..6)) {
        let mut d = from_gauss(&SignedGaussCode::parse(&code).unwrap()).unwrap();
        let f = skein::f_polynomial(&d).unwrap();
        let r3 = algebra::dihedral_colorings(&d, 3).unwrap();
        let det = algebra::determinant(&d).unwrap();
        for pick in picks {
            let moves = enumerate_moves(&d);
            if moves.is_empty() {
                break;
            }
            if let Ok(next) = apply_move(&d, &moves[pick.index(moves.len())]) {
                d = next;
            }
        }
        prop_assert_eq!(skein::f_polynomial(&d).unwrap(), f);
        prop_assert_eq!(algebra::dihedral_colorings(&d, 3).unwrap(), r3);
        prop_assert_eq!(algebra::determinant(&d).unwrap(), det);
    }
}

#[test]
fn determinant_is_alexander_at_minus_one_for_classical_knots() {
    for f in fixtures::classical().unwrap() {
        let d = f.diagram().unwrap();
        if d.components() != 1 {
            continue;
        }
        let det = algebra::determinant(&d).unwrap();
        let delta = algebra::alexander_polynomial(&d).unwrap();
        let at = delta.eval_unit(-1);
        assert_eq!(det, if at < BigInt::from(0) { -at } else { at }, "{}", f.name);
    }
}
