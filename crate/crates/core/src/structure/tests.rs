use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fo::{var, Formula, Term};

fn nat(n: u64) -> Element {
    Element::Nat(n)
}

fn q(n: i64, d: i64) -> Element {
    Element::Rat(ba::rat(n, d))
}

fn b(s: &str) -> Element {
    Element::Ba(BaElem::parse(s).unwrap())
}

fn xs(k: usize) -> Vec<String> {
    iota::default_vars(k)
}

fn x(i: usize) -> Term {
    var(&format!("x{i}"))
}

/// Minterm pattern computed with meets and complements directly, in
/// rendering order.
fn aba_pattern_oracle(es: &[BaElem]) -> String {
    let k = es.len();
    let n = 1u64 << k;
    (0..n)
        .map(|p| {
            let m = n - 1 - p;
            let cell = (0..k).fold(BaElem::one(), |acc, i| {
                let lit = if m >> i & 1 == 1 { es[i].clone() } else { es[i].complement() };
                acc.meet(&lit)
            });
            if cell.is_zero() {
                '0'
            } else {
                '1'
            }
        })
        .collect()
}

fn random_ba(rng: &mut impl Rng) -> BaElem {
    let cells = [1i64, 2, 4, 8][rng.gen_range(0..4)];
    let ivs = (0..cells)
        .filter(|_| rng.gen_bool(0.5))
        .map(|j| (ba::rat(j, cells), ba::rat(j + 1, cells)));
    BaElem::from_intervals(ivs).unwrap()
}

fn random_element(s: &Structure, rng: &mut impl Rng) -> Element {
    match s.kind() {
        Kind::Eq => nat(rng.gen_range(0..4)),
        Kind::Dlo => q(rng.gen_range(-3..4), rng.gen_range(1..3)),
        Kind::Aba => Element::Ba(random_ba(rng)),
        Kind::Product(cs) => Element::Tuple(cs.iter().map(|c| random_element(c, rng)).collect()),
        Kind::Constants { base, .. } => random_element(base, rng),
    }
}

#[test]
fn counts() {
    let eq = Structure::eq();
    let dlo = Structure::dlo();
    let aba = Structure::aba();
    for k in 0..=5 {
        assert_eq!(eq.enumerate_types(k).unwrap().len() as u128, bell(k));
        assert_eq!(dlo.enumerate_types(k).unwrap().len() as u128, ordered_bell(k));
    }
    assert_eq!(
        (0..=3).map(|k| aba.enumerate_types(k).unwrap().len()).collect::<Vec<_>>(),
        [1, 3, 15, 255]
    );
    let p = Structure::product(vec![Structure::eq(), Structure::dlo()]).unwrap();
    assert_eq!(p.enumerate_types(2).unwrap().len(), 6);
    let pe = Structure::product(vec![Structure::eq()]).unwrap();
    assert_eq!(pe.enumerate_types(2).unwrap().len(), 2);
    let pee = Structure::product(vec![Structure::eq(), Structure::eq()]).unwrap();
    for k in 0..=3 {
        assert_eq!(pee.enumerate_types(k).unwrap().len() as u128, bell(k) * bell(k));
    }
}

#[test]
fn sampled_type_counts_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in [Structure::eq(), Structure::dlo(), Structure::aba()] {
        let k = if matches!(s.kind(), Kind::Aba) { 2 } else { 3 };
        let mut seen = BTreeSet::new();
        for _ in 0..4000 {
            let t: Vec<Element> = (0..k).map(|_| random_element(&s, &mut rng)).collect();
            seen.insert(s.type_of(&t).unwrap());
        }
        assert_eq!(seen.len(), s.enumerate_types(k).unwrap().len(), "{s}");
    }
}

#[test]
fn aba_caps() {
    assert!(matches!(Structure::aba().enumerate_types(5), Err(Error::ResourceCap(_))));
    assert!(Structure::eq().enumerate_types(9).is_err());
    let s = Structure::eq().with_caps(Caps {
        max_arity: Some(2),
        ..Caps::default()
    });
    assert!(s.enumerate_types(3).is_err());
}

#[test]
fn type_of_examples() {
    let eq = Structure::eq();
    let t = eq.type_of(&[nat(5), nat(7), nat(5)]).unwrap();
    assert_eq!(eq.render_type(&t), "{1 3|2}");
    let dlo = Structure::dlo();
    let t = dlo.type_of(&[q(1, 2), q(1, 2), q(2, 1)]).unwrap();
    assert_eq!(dlo.render_type(&t), "1=2<3");
    let aba = Structure::aba();
    let es = [BaElem::parse("0/1:1/2").unwrap(), BaElem::one()];
    let t = aba.type_of(&[Element::Ba(es[0].clone()), Element::Ba(es[1].clone())]).unwrap();
    assert_eq!(aba.render_type(&t), aba_pattern_oracle(&es));
    assert_eq!(aba.render_type(&t), "1100");
    assert!(eq.type_of(&[q(1, 2)]).is_err());
}

#[test]
fn aba_type_of_matches_meet_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let aba = Structure::aba();
    for _ in 0..300 {
        let k = rng.gen_range(0..4);
        let es: Vec<BaElem> = (0..k).map(|_| random_ba(&mut rng)).collect();
        let t = aba.type_of(&es.iter().cloned().map(Element::Ba).collect::<Vec<_>>()).unwrap();
        assert_eq!(aba.render_type(&t), aba_pattern_oracle(&es));
    }
}

#[test]
fn restrict_examples() {
    let dlo = Structure::dlo();
    let t = dlo.parse_type(3, "1<2=3").unwrap();
    assert_eq!(dlo.render_type(&dlo.restrict(&t, &[1, 2]).unwrap()), "1=2");
    let eq = Structure::eq();
    let t = eq.parse_type(3, "{1 2|3}").unwrap();
    assert_eq!(eq.render_type(&eq.restrict(&t, &[1, 2]).unwrap()), "{1|2}");
    assert!(eq.restrict(&t, &[3]).is_err());
}

#[test]
fn aba_restrict_ors_minterms() {
    // Pattern over (x1,x2) -> x1 alone: OR of the bits differing only in x2.
    let aba = Structure::aba();
    for t in aba.enumerate_types(2).unwrap() {
        let CompleteType::Aba { bits, .. } = t else { unreachable!() };
        let pos = (bits >> 1 & 1) | (bits >> 3 & 1);
        let neg = (bits & 1) | (bits >> 2 & 1);
        let r = aba.restrict(&t, &[0]).unwrap();
        assert_eq!(r, CompleteType::Aba { arity: 1, bits: neg | pos << 1 });
    }
}

#[test]
fn memory_type_examples() {
    let eq = Structure::eq();
    let t = eq.parse_type(3, "{1 2|3}").unwrap();
    assert_eq!(eq.memory_type(&t, 1, 1, 1).unwrap(), CompleteType::Eq(vec![0]));
    let aba = Structure::aba();
    // y = 0: every minterm with y positive is zero.
    let t = aba.type_of(&[b("0/1:1/2"), b("1/4:3/4"), b("0")]).unwrap();
    assert_eq!(aba.render_type(&aba.memory_type(&t, 1, 1, 1).unwrap()), "01");
    let dlo = Structure::dlo();
    for t in dlo.enumerate_types(5).unwrap().iter().step_by(37) {
        assert_eq!(dlo.memory_type(t, 2, 1, 2).unwrap(), dlo.restrict(t, &[3, 4]).unwrap());
    }
    assert!(dlo.memory_type(&dlo.parse_type(2, "1<2").unwrap(), 1, 1, 1).is_err());
}

#[test]
fn atomic_holds_examples() {
    let dlo = Structure::dlo();
    let t = dlo.parse_type(2, "1<2").unwrap();
    assert!(!dlo.atomic_holds(&t, &Formula::lt(x(2), x(1)), &xs(2)).unwrap());
    let eq = Structure::eq();
    let t = eq.parse_type(2, "{1 2}").unwrap();
    assert!(eq.atomic_holds(&t, &Formula::eq(x(1), x(2)), &xs(2)).unwrap());
    assert!(matches!(
        eq.atomic_holds(&t, &Formula::lt(x(1), x(2)), &xs(2)),
        Err(Error::Signature(_))
    ));
    // aba: x1 = x2 iff both minterms of the symmetric difference are zero.
    let aba = Structure::aba();
    for t in aba.enumerate_types(2).unwrap() {
        let CompleteType::Aba { bits, .. } = t else { unreachable!() };
        let sym_diff_zero = bits >> 1 & 1 == 0 && bits >> 2 & 1 == 0;
        assert_eq!(aba.atomic_holds(&t, &Formula::eq(x(1), x(2)), &xs(2)).unwrap(), sym_diff_zero);
    }
}

#[test]
fn iota_projection_examples() {
    let dlo = Structure::dlo();
    let z = || var("z");
    let dense = Formula::exists("z", Formula::and(Formula::lt(x(1), z()), Formula::lt(z(), x(2))));
    let s = dlo.iota_k(&dense, 2).unwrap();
    let names: Vec<String> = dlo.members(&s).unwrap().iter().map(|t| dlo.render_type(t)).collect();
    assert_eq!(names, ["1<2"]);

    let eq = Structure::eq();
    let s = eq.iota_k(&Formula::exists("z", Formula::not(Formula::eq(z(), x(1)))), 1).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s.len(), s.universe());

    let aba = Structure::aba();
    let zero = || Term::Zero;
    let f = Formula::exists(
        "z",
        Formula::conj([
            Formula::not(Formula::eq(z(), zero())),
            Formula::not(Formula::eq(z(), x(1))),
            Formula::eq(Term::Meet(Box::new(z()), Box::new(x(1))), z()),
        ]),
    );
    let s = aba.iota_k(&f, 1).unwrap();
    let got: Vec<String> = aba.members(&s).unwrap().iter().map(|t| aba.render_type(t)).collect();
    // The two 1-types with x1 nonzero: "10" (x1 = 1) and "11".
    assert_eq!(got, ["10", "11"]);

    for st in [Structure::eq(), Structure::dlo(), Structure::aba()] {
        assert!(st.iota_k(&Formula::False, 2).unwrap().is_empty());
    }
}

#[test]
fn iota_rejects_free_and_fixpoints() {
    let eq = Structure::eq();
    assert!(eq.iota_k(&Formula::eq(x(1), x(3)), 2).is_err());
    assert!(eq.iota_k(&Formula::Rel("R".into(), vec![x(1)]), 1).is_err());
    let aba = Structure::aba();
    let deep = Formula::exists("a", Formula::exists("b", Formula::exists("c", Formula::True)));
    assert!(matches!(aba.iota_k(&deep, 2), Err(Error::ResourceCap(_))));
}

#[test]
fn isolating_examples() {
    let eq = Structure::eq();
    let t = eq.parse_type(3, "{1 2|3}").unwrap();
    assert_eq!(eq.isolating_formula(&t).to_string(), "((x1 = x2 & x1 != x3) & x2 != x3)");
    let dlo = Structure::dlo();
    let t = dlo.parse_type(2, "1<2").unwrap();
    assert_eq!(dlo.isolating_formula(&t).to_string(), "x1 < x2");
    let aba = Structure::aba();
    let t = aba.parse_type(1, "11").unwrap();
    assert_eq!(aba.isolating_formula(&t).to_string(), "(x1 != 0 & ~x1 != 0)");
}

#[test]
fn isolating_round_trip() {
    let structures = [
        Structure::eq(),
        Structure::dlo(),
        Structure::aba(),
        Structure::product(vec![Structure::eq(), Structure::dlo()]).unwrap(),
        Structure::dlo()
            .with_constants(vec![("a".into(), Some(q(0, 1))), ("b".into(), Some(q(1, 1)))])
            .unwrap(),
    ];
    for s in &structures {
        for k in 0..=3 {
            if matches!(s.kind(), Kind::Aba) && k == 3 {
                continue;
            }
            for t in s.enumerate_types(k).unwrap() {
                let f = s.isolating_formula(&t);
                assert_eq!(s.iota_k(&f, k).unwrap(), s.singleton(&t).unwrap(), "{s} {}", s.render_type(&t));
            }
        }
    }
}

#[test]
fn extend_witness_examples() {
    let dlo = Structure::dlo();
    let t = dlo.parse_type(3, "1<3<2").unwrap();
    assert_eq!(dlo.extend_witness(&[q(0, 1), q(1, 1)], &t).unwrap(), q(1, 2));
    let eq = Structure::eq();
    let t = eq.parse_type(2, "{1|2}").unwrap();
    assert_eq!(eq.extend_witness(&[nat(5)], &t).unwrap(), nat(0));
    let aba = Structure::aba();
    // x2&x1 != 0, ~x2&x1 != 0, x2&~x1 = 0, ~x2&~x1 != 0 (forced by ~x1 != 0).
    let t = aba.type_of(&[b("0/1:1/2"), b("0/1:1/4")]).unwrap();
    assert_eq!(aba.extend_witness(&[b("0/1:1/2")], &t).unwrap(), b("0/1:1/4"));
    // Precondition failure.
    let bad = eq.parse_type(2, "{1 2}").unwrap();
    assert!(eq.extend_witness(&[nat(1), nat(2)], &bad).is_err());
}

#[test]
fn extend_tuple_examples() {
    let eq = Structure::eq();
    let t = eq.parse_type(3, "{1 2|3}").unwrap();
    assert_eq!(eq.extend_witness_tuple(&[nat(3)], &t).unwrap(), vec![nat(3), nat(0)]);
    let dlo = Structure::dlo();
    let t = dlo.parse_type(2, "1<2").unwrap();
    assert_eq!(dlo.extend_witness_tuple(&[], &t).unwrap(), vec![q(0, 1), q(1, 1)]);
    let aba = Structure::aba();
    for (pattern, expect) in [("11", "0/1:1/2"), ("10", "1"), ("01", "0")] {
        let t = aba.parse_type(1, pattern).unwrap();
        assert_eq!(aba.extend_witness_tuple(&[], &t).unwrap(), vec![b(expect)]);
    }
}

#[test]
fn extension_soundness_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let structures = [
        Structure::eq(),
        Structure::dlo(),
        Structure::aba(),
        Structure::product(vec![Structure::dlo(), Structure::aba()]).unwrap(),
        Structure::eq().with_constants(vec![("c".into(), None)]).unwrap(),
    ];
    for s in &structures {
        for _ in 0..200 {
            let n = rng.gen_range(0..3);
            let a: Vec<Element> = (0..n).map(|_| random_element(s, &mut rng)).collect();
            let ta = s.type_of(&a).unwrap();
            let prefix: Vec<usize> = (0..n).collect();
            for t in s.enumerate_types(n + 1).unwrap() {
                if s.select(&t, &prefix).unwrap() == ta {
                    let bw = s.extend_witness(&a, &t).unwrap();
                    let mut full = a.clone();
                    full.push(bw);
                    assert_eq!(s.type_of(&full).unwrap(), t);
                }
            }
        }
    }
}

#[test]
fn constants_expansion_counts() {
    let eq = Structure::eq().with_constants(vec![("c".into(), Some(nat(4)))]).unwrap();
    assert_eq!(eq.enumerate_types(1).unwrap().len(), Structure::eq().enumerate_types(2).unwrap().len());
    let dlo = Structure::dlo()
        .with_constants(vec![("a".into(), Some(q(0, 1))), ("b".into(), Some(q(1, 1)))])
        .unwrap();
    assert_eq!(dlo.enumerate_types(1).unwrap().len(), 5);
    // aba with c=[0,1/2): type of x records the x∧c pattern.
    let aba = Structure::aba().with_constants(vec![("c".into(), Some(b("0/1:1/2")))]).unwrap();
    let t1 = aba.type_of(&[b("0/1:1/4")]).unwrap();
    let t2 = aba.type_of(&[b("1/2:3/4")]).unwrap();
    assert_ne!(t1, t2);
    let c = Term::Const("c".into());
    let inside = Formula::eq(Term::Meet(Box::new(x(1)), Box::new(c)), x(1));
    assert!(aba.iota_k(&inside, 1).unwrap().contains(aba.type_index(&t1).unwrap()));
    assert!(!aba.iota_k(&inside, 1).unwrap().contains(aba.type_index(&t2).unwrap()));
}

#[test]
fn uninterpreted_constants_are_distinct() {
    let s = Structure::eq()
        .with_constants(vec![("a".into(), Some(nat(0))), ("b".into(), None), ("c".into(), None)])
        .unwrap();
    assert_eq!(s.constant_value("b"), Some(&nat(1)));
    assert_eq!(s.constant_value("c"), Some(&nat(2)));
    let s = Structure::aba().with_constants(vec![("p".into(), None), ("r".into(), None)]).unwrap();
    let vals = [s.constant_value("p").unwrap().clone(), s.constant_value("r").unwrap().clone()];
    // Independent: all four minterms nonzero.
    assert_eq!(Structure::aba().render_type(&Structure::aba().type_of(&vals).unwrap()), "1111");
}

#[test]
fn product_projection_atoms() {
    let p = Structure::product(vec![Structure::eq(), Structure::dlo()]).unwrap();
    let t = p
        .type_of(&[
            Element::Tuple(vec![nat(1), q(0, 1)]),
            Element::Tuple(vec![nat(1), q(1, 1)]),
        ])
        .unwrap();
    assert_eq!(p.render_type(&t), "[{1 2};1<2]");
    let proj = |i: usize, c: usize| Term::Proj(Box::new(x(i)), c);
    assert!(p.atomic_holds(&t, &Formula::eq(proj(1, 0), proj(2, 0)), &xs(2)).unwrap());
    assert!(p.atomic_holds(&t, &Formula::lt(proj(1, 1), proj(2, 1)), &xs(2)).unwrap());
    assert!(!p.atomic_holds(&t, &Formula::eq(x(1), x(2)), &xs(2)).unwrap());
    assert!(p.atomic_holds(&t, &Formula::eq(proj(1, 0), proj(2, 1)), &xs(2)).is_err());
}

#[test]
fn element_round_trip() {
    let p = Structure::product(vec![Structure::aba(), Structure::dlo()]).unwrap();
    let e = p.parse_element("(0/1:1/4,1/2:1/1|-3/2)").unwrap();
    assert_eq!(e.to_string(), "(0/1:1/4,1/2:1/1|-3/2)");
    assert_eq!(p.parse_element(&e.to_string()).unwrap(), e);
    assert!(Structure::eq().parse_element("-1").is_err());
}
