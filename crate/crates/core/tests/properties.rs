use mcpp::exactmath::{Rational, Subset};
use mcpp::hypergraph::{is_alpha_acyclic, is_downward_closed};
use mcpp::instance::{Instance, Monomial, RawInstance};
use mcpp::lifting::{flip, MPInequality};
use mcpp::oracle::{choice_of_w, enumerate_mp_vertices, enumerate_x, w_of};
use mcpp::polytope::certify_inequality;
use mcpp::solve::{solve, MethodChoice, SolveOptions, SolveReport};
use num_traits::One;
use proptest::prelude::*;

/// 2 to 4 blocks of size 2 or 3, and up to five monomials with one index
/// from each of a random set of blocks.
fn instance() -> impl Strategy<Value = Instance> {
    prop::collection::vec(2usize..=3, 2..=4).prop_flat_map(|sizes| {
        let k = sizes.len();
        let term = (
            prop::collection::vec(any::<prop::sample::Index>(), k),
            1u32..(1 << k),
            -6i64..=6,
            1i64..=3,
        );
        (Just(sizes), prop::collection::vec(term, 0..=5)).prop_map(|(sizes, raw_terms)| {
            let mut blocks = Vec::new();
            let mut next = 1;
            for &s in &sizes {
                blocks.push((next..next + s).collect::<Vec<_>>());
                next += s;
            }
            let terms = raw_terms
                .into_iter()
                .map(|(picks, mask, p, q)| {
                    let vars = (0..blocks.len())
                        .filter(|b| mask & (1 << b) != 0)
                        .map(|b| blocks[b][picks[b].index(blocks[b].len())]);
                    Monomial::new(Subset::new(vars), Rational::new(p.into(), q.into()))
                })
                .collect();
            RawInstance {
                n: next - 1,
                blocks,
                terms,
            }
            .simplified()
            .validate()
            .expect("simplified instance")
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_route_matches_brute_force(inst in instance()) {
        let acyclic = is_alpha_acyclic(&inst.hypergraph()).is_acyclic();
        let bf = solve(&inst, SolveOptions { method: MethodChoice::Brute, ..Default::default() }).unwrap();
        let auto = solve(&inst, SolveOptions::default()).unwrap();
        prop_assert_eq!(auto.acyclic, acyclic);
        prop_assert_eq!(&auto.optimum, &bf.optimum);
        prop_assert_eq!(&auto.argmax, &bf.argmax);
    }

    #[test]
    fn report_serialization_round_trips(inst in instance()) {
        let r = solve(&inst, SolveOptions::default()).unwrap();
        let back: SolveReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn family_is_subset_uniform(inst in instance()) {
        let fam = inst.family();
        let p = inst.partition();
        for j in fam.space().labels() {
            for i in j.iter() {
                for k in p.block(p.block_of(i)).iter() {
                    prop_assert!(fam.contains(&j.without(i).with(k)));
                }
            }
        }
        for (e, group) in fam.groups() {
            prop_assert_eq!(group.len(), e.iter().map(|b| p.block(b).len()).product::<usize>());
        }
    }

    #[test]
    fn w_of_is_a_bijection_onto_its_image(inst in instance()) {
        let fam = inst.family();
        let xs = enumerate_x(inst.partition(), 1 << 12).unwrap();
        let mut ws: Vec<_> = xs.iter().map(|x| w_of(x, &fam)).collect();
        for (x, w) in xs.iter().zip(&ws) {
            prop_assert_eq!(choice_of_w(&fam, w), Some(x.clone()));
            for (_, group) in fam.groups() {
                let s: Rational = group.iter().map(|j| w[fam.space().position(j).unwrap()].clone()).sum();
                prop_assert!(s.is_one());
            }
        }
        ws.sort();
        ws.dedup();
        prop_assert_eq!(ws.len(), xs.len());
    }

    #[test]
    fn flip_is_an_involution_and_certificates_scale(
        inst in instance(),
        coefs in prop::collection::vec(-3i64..=3, 16),
        delta in -3i64..=3,
        k in 1i64..=9,
    ) {
        let h = inst.hypergraph();
        let labels = h.singletons_and_edges();
        let pairs: Vec<(Subset, Rational)> = labels
            .iter()
            .zip(&coefs)
            .map(|(e, c)| (e.clone(), Rational::from_integer((*c).into())))
            .collect();
        let ineq = MPInequality::new(&h, &pairs, Rational::from_integer(delta.into())).unwrap();
        if is_downward_closed(&h) {
            for &v in h.vertices() {
                prop_assert_eq!(flip(&flip(&ineq, v, &h).unwrap(), v, &h).unwrap(), ineq.clone());
            }
        }
        let mp = enumerate_mp_vertices(&h, 1 << 12).unwrap();
        let k = Rational::new(k.into(), 2.into());
        let a = certify_inequality(&ineq.c, &ineq.delta, &mp).unwrap();
        let b = certify_inequality(&ineq.c.scaled(&k), &(&ineq.delta * &k), &mp).unwrap();
        prop_assert_eq!(a, b);
    }
}
