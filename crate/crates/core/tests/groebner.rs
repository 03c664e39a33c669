use charplab_core::dense;
use charplab_core::groebner::{is_squarefree_hypersurface, subalgebra_presentation};
use charplab_core::{Field, Ideal, Monomial, MonomialOrder, Polynomial, Ring, RingSpec};
use proptest::prelude::*;

fn ring(p: u32, vars: &[&str]) -> Ring {
    RingSpec::new(Field::prime(p).unwrap(), vars).unwrap()
}

fn ideal(r: &Ring, gens: &[&str]) -> Ideal {
    Ideal::parse(r, gens).unwrap()
}

fn poly(r: &Ring, s: &str) -> Polynomial {
    charplab_core::parse_poly(s, r).unwrap()
}

#[test]
fn twisted_cubic_basis_is_already_reduced() {
    let r = ring(7, &["z", "y", "x"]);
    let i = ideal(&r, &["y - x^2", "z - x^3"]);
    let gb = i.groebner_basis(MonomialOrder::Lex).unwrap();
    let mut got = gb.polynomials();
    got.sort_by_key(|p| p.to_string());
    let mut want = vec![poly(&r, "y - x^2"), poly(&r, "z - x^3")];
    want.sort_by_key(|p| p.to_string());
    assert_eq!(got, want);
}

#[test]
fn leading_ideal_of_xy_plus_t2_with_cubes() {
    let r = ring(3, &["x", "y", "t"]);
    let gens = ["x*y + t^2", "x^3", "y^3", "t^3"];
    let i = ideal(&r, &gens);
    let gb = i.grevlex().unwrap();
    let st = gb.staircase();
    let mut corners: Vec<Vec<u32>> = st.corners().iter().map(|m| m.exps().to_vec()).collect();
    corners.sort();
    let mut want = vec![
        vec![1, 1, 0],
        vec![3, 0, 0],
        vec![0, 3, 0],
        vec![0, 0, 3],
        vec![2, 0, 2],
        vec![0, 2, 2],
    ];
    want.sort();
    assert_eq!(corners, want);
    // basis elements are members and standard monomials are not, according
    // to the dense oracle inside S/m^7 (exact there since m^7 ⊆ I)
    let polys: Vec<Polynomial> = gens.iter().map(|g| poly(&r, g)).collect();
    for g in gb.polynomials() {
        assert!(dense::member_mod_m_power(&polys, &g, 7), "{g}");
    }
    for m in st.enumerate(100).unwrap() {
        let f = Polynomial::monomial(&r, m.clone(), charplab_core::Fq::ONE);
        assert!(!dense::member_mod_m_power(&polys, &f, 7), "{f} is standard");
    }
    assert_eq!(i.colength().unwrap(), 13);
    assert_eq!(dense::colength_mod_m_power(&polys, 3, r.field(), 8), 13);
    assert!(gb.contains(&poly(&r, "x^2*t^2")).unwrap());
    assert!(dense::member_mod_m_power(&polys, &poly(&r, "x^2*t^2"), 7));
}

#[test]
fn zero_ideal_and_unit_behaviour() {
    let r = ring(5, &["x", "y"]);
    let zero = Ideal::zero(&r);
    assert!(zero.grevlex().unwrap().is_empty());
    let i = ideal(&r, &["x^2", "y^3"]);
    let gb = i.grevlex().unwrap();
    assert_eq!(gb.normal_form(&Polynomial::one(&r)).unwrap(), Polynomial::one(&r));
    for g in i.generators() {
        assert!(gb.normal_form(g).unwrap().is_zero());
    }
    assert!(ideal(&r, &["x + 1", "x"]).is_unit().unwrap());
}

#[test]
fn ideal_equality_examples() {
    let r = ring(5, &["x", "y"]);
    let a = ideal(&r, &["x^2", "x*y", "y + x^3"]);
    let b = ideal(&r, &["x^2", "x*y", "y"]);
    assert!(a.equals(&b, MonomialOrder::Grevlex).unwrap());
    assert!(a.is_subset_of(&b).unwrap() && b.is_subset_of(&a).unwrap());
    assert!(!ideal(&r, &["x"])
        .equals(&ideal(&r, &["x^2"]), MonomialOrder::Grevlex)
        .unwrap());
    assert!(a.equals(&a.clone(), MonomialOrder::Lex).unwrap());
}

#[test]
fn intersections() {
    let r = ring(5, &["x", "y"]);
    let xy = ideal(&r, &["x"]).intersect(&ideal(&r, &["y"])).unwrap();
    assert!(xy.equals(&ideal(&r, &["x*y"]), MonomialOrder::Grevlex).unwrap());
    let i = ideal(&r, &["x^2", "y"]).intersect(&ideal(&r, &["x"])).unwrap();
    let want = ideal(&r, &["x^2", "x*y"]);
    assert!(i.is_subset_of(&want).unwrap() && want.is_subset_of(&i).unwrap());
    let j = ideal(&r, &["x^3 + y", "x*y^2"]);
    let with_unit = j.intersect(&Ideal::unit(&r)).unwrap();
    assert!(with_unit.equals(&j, MonomialOrder::Grevlex).unwrap());
    assert_eq!(with_unit.ring().vars(), r.vars());
}

#[test]
fn colons() {
    let r = ring(2, &["x", "y"]);
    let c = ideal(&r, &["x^2", "x*y"]).colon(&ideal(&r, &["x"])).unwrap();
    assert!(c.equals(&ideal(&r, &["x", "y"]), MonomialOrder::Grevlex).unwrap());
    let c = ideal(&r, &["x^4"]).colon(&ideal(&r, &["x^2"])).unwrap();
    assert!(c.equals(&ideal(&r, &["x^2"]), MonomialOrder::Grevlex).unwrap());
    let i = ideal(&r, &["x^3 + y^2", "x*y"]);
    assert!(i
        .colon(&Ideal::unit(&r))
        .unwrap()
        .equals(&i, MonomialOrder::Grevlex)
        .unwrap());
    assert!(i.colon(&Ideal::zero(&r)).is_err());
}

#[test]
fn elimination() {
    let r = ring(7, &["x", "y", "z"]);
    let e = ideal(&r, &["y - x^2", "z - x^3"]).eliminate(1).unwrap();
    assert_eq!(e.ring().vars(), &["y".to_string(), "z".to_string()]);
    assert_eq!(e.generators().len(), 1);
    let rel = &e.generators()[0];
    // substituting y = x^2, z = x^3 kills the relation
    let rx = ring(7, &["x"]);
    let images = [poly(&rx, "x^2"), poly(&rx, "x^3")];
    assert!(rel.substitute(&images).unwrap().is_zero());
    let sub = e.ring().clone();
    assert!(e.equals(&ideal(&sub, &["z^2 - y^3"]), MonomialOrder::Grevlex).unwrap());

    let rw = ring(7, &["w", "x", "y"]);
    let t = ideal(&rw, &["w*x", "y - w*y"]).eliminate(1).unwrap();
    let sub = t.ring().clone();
    assert!(t.equals(&ideal(&sub, &["x*y"]), MonomialOrder::Grevlex).unwrap());
    assert!(Ideal::zero(&rw).eliminate(1).unwrap().is_zero());
    assert!(ideal(&rw, &["x"]).eliminate(0).is_err());
}

#[test]
fn frobenius_powers() {
    let r = ring(2, &["x", "y"]);
    let m2 = Ideal::maximal(&r).frobenius_power(1).unwrap();
    assert!(m2.equals(&ideal(&r, &["x^2", "y^2"]), MonomialOrder::Grevlex).unwrap());
    let r5 = ring(5, &["x", "y", "t"]);
    let f = ideal(&r5, &["x*y + t^3"]).frobenius_power(1).unwrap();
    assert_eq!(f.generators(), &[poly(&r5, "x^5*y^5 + t^15")]);
    assert!(Ideal::zero(&r5).frobenius_power(3).unwrap().is_zero());
}

#[test]
fn krull_dimensions() {
    let r = ring(3, &["x", "y", "t"]);
    assert_eq!(Ideal::zero(&r).krull_dim().unwrap(), 3);
    assert_eq!(ideal(&r, &["x*y + t^3"]).krull_dim().unwrap(), 2);
    let r2 = ring(3, &["x", "y"]);
    assert_eq!(ideal(&r2, &["x^2", "y^3"]).krull_dim().unwrap(), 0);
    assert!(Ideal::unit(&r2).krull_dim().is_err());
}

#[test]
fn colength_examples_and_errors() {
    let r = ring(2, &["x", "y"]);
    assert_eq!(ideal(&r, &["x^2", "y^2"]).colength().unwrap(), 4);
    assert!(ideal(&r, &["x"]).colength().is_err());
    assert!(ideal(&r, &["x + 1", "y^2"]).colength().is_err());
    for (p, n) in [(2u32, 1usize), (2, 3), (3, 2), (5, 3)] {
        let vars: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
        let r = ring(p, &refs);
        for e in 0..=4u32 {
            let c = Ideal::maximal_frobenius(&r, e).unwrap().colength().unwrap();
            assert_eq!(c, (p as u64).pow(e * n as u32));
        }
    }
}

#[test]
fn m_power_examples() {
    let r = ring(2, &["x", "y"]);
    assert_eq!(ideal(&r, &["x^2", "y^3"]).m_power_in().unwrap(), 4);
    assert_eq!(ideal(&r, &["x^2", "y^2"]).m_power_in().unwrap(), 3);
    assert_eq!(ideal(&r, &["x", "y"]).m_power_in().unwrap(), 1);
    // non-homogeneous: (x^2 + y^3, y^4, x*y) contains m^N for the first N the
    // membership search finds
    let r3 = ring(3, &["x", "y", "t"]);
    for gens in [
        vec!["x*y + t^2", "x^3", "y^3", "t^3"],
        vec!["x^2 + y^3", "y^4", "x*y", "t^2 - x*t"],
    ] {
        let i = ideal(&r3, &gens);
        let n = i.m_power_in().unwrap();
        let gb = i.grevlex().unwrap();
        let all_in = |d: u32| {
            dense::monomials_up_to(3, d)
                .into_iter()
                .filter(|m| m.degree() == d as u64)
                .all(|m| gb.contains_monomial(&m).unwrap())
        };
        assert!(all_in(n as u32));
        assert!(n == 1 || !all_in(n as u32 - 1));
    }
}

#[test]
fn subalgebra_presentations() {
    let r = ring(7, &["x"]);
    let pres = subalgebra_presentation(&[poly(&r, "x^2"), poly(&r, "x^3")]).unwrap();
    let a = pres.ring().clone();
    assert_eq!(a.vars(), &["a1".to_string(), "a2".to_string()]);
    assert!(pres
        .equals(&ideal(&a, &["a1^3 - a2^2"]), MonomialOrder::Grevlex)
        .unwrap());

    let r2 = ring(7, &["x", "y"]);
    let free = subalgebra_presentation(&[poly(&r2, "x"), poly(&r2, "y")]).unwrap();
    assert!(free.is_zero());

    let gens = [poly(&r2, "x^2"), poly(&r2, "x*y"), poly(&r2, "y^2")];
    let ver = subalgebra_presentation(&gens).unwrap();
    let a = ver.ring().clone();
    assert!(ver
        .equals(&ideal(&a, &["a1*a3 - a2^2"]), MonomialOrder::Grevlex)
        .unwrap());
    for rel in ver.generators() {
        assert!(rel.substitute(&gens).unwrap().is_zero());
    }
    assert!(subalgebra_presentation(&[poly(&r2, "3")]).is_err());
}

#[test]
fn squarefree_hypersurfaces() {
    let r5 = ring(5, &["x", "y", "t"]);
    assert!(is_squarefree_hypersurface(&poly(&r5, "x*y + t^3")).unwrap());
    assert!(!is_squarefree_hypersurface(&poly(&r5, "x^2")).unwrap());
    let r3 = ring(3, &["x", "y"]);
    assert!(!is_squarefree_hypersurface(&poly(&r3, "x^3 + y^3")).unwrap());
    assert!(is_squarefree_hypersurface(&poly(&r3, "x")).unwrap());
    assert!(!is_squarefree_hypersurface(&poly(&r3, "x^2*y")).unwrap());
    assert!(is_squarefree_hypersurface(&poly(&r3, "4")).is_err());
}

#[test]
fn cache_is_consistent_and_shared_between_threads() {
    let r = ring(5, &["x", "y", "t"]);
    let i = ideal(&r, &["x^2 + y^2 + t^2", "x^5", "y^5", "t^5"]);
    let bases: Vec<_> = std::thread::scope(|s| {
        let hs: Vec<_> = (0..4).map(|_| s.spawn(|| i.grevlex().unwrap())).collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert!(bases.windows(2).all(|w| *w[0] == *w[1]));
    i.groebner_basis(MonomialOrder::Lex).unwrap();
    i.verify_cache().unwrap();
}

#[test]
fn basis_limit_is_enforced() {
    let field = Field::prime(5).unwrap();
    let limits = charplab_core::Limits {
        max_basis: 3,
        ..Default::default()
    };
    let r = RingSpec::with_limits(field, vec!["x".into(), "y".into(), "t".into()], limits).unwrap();
    let i = ideal(&r, &["x*y + t^2", "x^5", "y^5", "t^5"]);
    assert!(matches!(i.grevlex(), Err(charplab_core::Error::Limit(_))));
}

// ---- properties on random small ideals ----

fn arb_poly(n: usize, q: u32, max_deg: u32, homogeneous: Option<u32>) -> impl Strategy<Value = Vec<(Vec<u32>, u32)>> {
    proptest::collection::vec((proptest::collection::vec(0..=max_deg, n), 1..q), 1..5).prop_map(move |terms| {
        terms
            .into_iter()
            .filter_map(|(mut e, c)| {
                let d: u32 = e.iter().sum();
                match homogeneous {
                    Some(h) if d > h => None,
                    Some(h) => {
                        e[0] += h - d;
                        Some((e, c))
                    }
                    None if d > max_deg => None,
                    None => Some((e, c)),
                }
            })
            .collect()
    })
}

fn build(r: &Ring, raw: &[(Vec<u32>, u32)]) -> Polynomial {
    Polynomial::from_terms(
        r,
        raw.iter()
            .map(|(e, c)| (Monomial::new(e), charplab_core::Fq::from_code(*c))),
    )
}

fn rings() -> Vec<Ring> {
    vec![
        ring(2, &["x", "y", "t"]),
        ring(3, &["x", "y", "t"]),
        ring(5, &["x", "y", "t"]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn membership_agrees_with_dense_oracle_homogeneous(
        which in 0usize..3,
        degs in proptest::collection::vec(1u32..=4, 1..=3),
        seeds in proptest::collection::vec(arb_poly(3, 5, 4, None), 3),
        tests in proptest::collection::vec(arb_poly(3, 5, 6, None), 5),
    ) {
        let r = &rings()[which];
        let q = r.field().q();
        let homog = |raw: &[(Vec<u32>, u32)], d: u32| -> Polynomial {
            let fixed: Vec<(Vec<u32>, u32)> = raw
                .iter()
                .filter_map(|(e, c)| {
                    let s: u32 = e.iter().sum();
                    (s <= d).then(|| {
                        let mut e = e.clone();
                        e[0] += d - s;
                        (e, c % q)
                    })
                })
                .collect();
            build(r, &fixed)
        };
        let gens: Vec<Polynomial> = degs.iter().zip(&seeds).map(|(&d, s)| homog(s, d)).collect();
        let i = Ideal::new(r, gens.clone()).unwrap();
        let gb = i.grevlex().unwrap();
        let mut candidates: Vec<Polynomial> = tests.iter().map(|t| build(r, &t.iter().map(|(e, c)| (e.clone(), c % q)).collect::<Vec<_>>())).collect();
        // members built from the generators
        for (k, t) in tests.iter().enumerate() {
            let h = build(r, &t.iter().map(|(e, c)| (e.clone(), c % q)).collect::<Vec<_>>()).truncate_degree(2);
            let g = &gens[k % gens.len()];
            candidates.push(h.mul(g).unwrap());
        }
        for f in candidates {
            if f.total_degree().unwrap_or(0) > 8 { continue; }
            let nf = gb.normal_form(&f).unwrap();
            prop_assert_eq!(nf.is_zero(), dense::member_up_to_degree(&gens, &f, 8));
            prop_assert_eq!(gb.normal_form(&nf).unwrap(), nf.clone());
        }
    }

    #[test]
    fn membership_agrees_with_truncated_oracle(
        which in 0usize..3,
        seeds in proptest::collection::vec(arb_poly(3, 5, 4, None), 1..=3),
        tests in proptest::collection::vec(arb_poly(3, 5, 5, None), 6),
        k in 3u32..=5,
    ) {
        let r = &rings()[which];
        let q = r.field().q();
        let mut gens: Vec<Polynomial> = seeds
            .iter()
            .map(|s| build(r, &s.iter().map(|(e, c)| (e.clone(), c % q)).collect::<Vec<_>>()))
            .map(|g| g.sub(&Polynomial::constant(r, g.constant_term())).unwrap())
            .collect();
        let mk = Ideal::maximal_power(r, k).unwrap();
        gens.extend(mk.generators().iter().cloned());
        let i = Ideal::new(r, gens.clone()).unwrap();
        let gb = i.grevlex().unwrap();
        for t in &tests {
            let f = build(r, &t.iter().map(|(e, c)| (e.clone(), c % q)).collect::<Vec<_>>());
            prop_assert_eq!(gb.contains(&f).unwrap(), dense::member_mod_m_power(&gens, &f, k));
        }
        prop_assert_eq!(i.colength().unwrap(), dense::colength_mod_m_power(&gens, 3, r.field(), k));
        let n = i.m_power_in().unwrap();
        prop_assert!(n <= k as u64);
    }

    #[test]
    fn reduced_basis_is_unique_under_regeneration(
        which in 0usize..3,
        seeds in proptest::collection::vec(arb_poly(3, 5, 3, None), 2..=3),
        mult in arb_poly(3, 5, 2, None),
    ) {
        let r = &rings()[which];
        let q = r.field().q();
        let gens: Vec<Polynomial> = seeds
            .iter()
            .map(|s| build(r, &s.iter().map(|(e, c)| (e.clone(), c % q)).collect::<Vec<_>>()))
            .collect();
        let h = build(r, &mult.iter().map(|(e, c)| (e.clone(), c % q)).collect::<Vec<_>>());
        let mut other: Vec<Polynomial> = gens.iter().rev().cloned().collect();
        other.push(h.mul(&gens[0]).unwrap().add(&gens[1]).unwrap());
        let a = Ideal::new(r, gens.clone()).unwrap();
        let b = Ideal::new(r, other).unwrap();
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            prop_assert_eq!(&*a.groebner_basis(order).unwrap(), &*b.groebner_basis(order).unwrap());
        }
        // linearity of the normal form
        let gb = a.grevlex().unwrap();
        let f = h.add(&Polynomial::var(r, 2)).unwrap();
        let lhs = gb.normal_form(&f.add(&h).unwrap()).unwrap();
        let rhs = gb.normal_form(&f).unwrap().add(&gb.normal_form(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // bracket powers depend only on the ideal
        let fa = a.frobenius_power(1).unwrap();
        let fb = b.frobenius_power(1).unwrap();
        prop_assert!(fa.equals(&fb, MonomialOrder::Grevlex).unwrap());
    }

    #[test]
    fn bracket_powers_and_colons(
        which in 0usize..3,
        seeds in proptest::collection::vec(arb_poly(3, 5, 2, None), 1..=2),
        jseed in arb_poly(3, 5, 2, None),
    ) {
        let r = &rings()[which];
        let q = r.field().q();
        let p = r.field().p() as u64;
        let gens: Vec<Polynomial> = seeds
            .iter()
            .map(|s| build(r, &s.iter().map(|(e, c)| (e.clone(), c % q)).collect::<Vec<_>>()))
            .collect();
        let i = Ideal::new(r, gens.clone()).unwrap();
        let ip = i.frobenius_power(1).unwrap();
        // I^[p] ⊆ I^p
        let mut ipow = i.clone();
        for _ in 1..p {
            ipow = ipow.product(&i).unwrap();
        }
        prop_assert!(ip.is_subset_of(&ipow).unwrap());
        prop_assert!(ip.frobenius_power(1).unwrap().equals(&i.frobenius_power(2).unwrap(), MonomialOrder::Grevlex).unwrap());
        let jg = build(r, &jseed.iter().map(|(e, c)| (e.clone(), c % q)).collect::<Vec<_>>());
        if !jg.is_zero() {
            let j = Ideal::new(r, vec![jg, Polynomial::var(r, 0)]).unwrap();
            let c = ip.colon(&j).unwrap();
            prop_assert!(c.product(&j).unwrap().is_subset_of(&ip).unwrap());
        }
    }
}
