mod common;

use common::{all_alignments, all_observations, alignment_counts, brute_monomials, hull_oracle, q, Mix};
use infcount::inference::{inference_function, observation_polytope, viterbi, DEFAULT_OBSERVATION_CAP};
use infcount::model::{
    block_observation, build_alignment_model, build_homogeneous_hmm, build_lowerbound_hmm, HmmTables,
    LowerBoundStates,
};
use infcount::{Error, FactorModel, ParameterPoint, Rational};

fn hmm(n: usize) -> FactorModel {
    build_homogeneous_hmm(n, 2, 2, &HmmTables::identity(2, 2)).unwrap()
}

fn binary() -> Vec<String> {
    vec!["0".into(), "1".into()]
}

fn dot(v: &ParameterPoint, m: &[i64]) -> Rational {
    v.0.iter().zip(m).map(|(a, &b)| a * Rational::from_integer(b.into())).sum()
}

fn small_models() -> Vec<FactorModel> {
    vec![
        hmm(1),
        hmm(2),
        hmm(3),
        build_lowerbound_hmm(1, 3).unwrap(),
        build_alignment_model(1, 1, &binary()).unwrap(),
        build_alignment_model(1, 2, &binary()).unwrap(),
        build_alignment_model(2, 1, &binary()).unwrap(),
    ]
}

#[test]
fn lower_bound_block_observations_have_exactly_two_explanations() {
    for (d, n) in [(1, 3), (1, 4), (1, 5), (2, 4), (2, 5)] {
        let model = build_lowerbound_hmm(d, n).unwrap();
        let st = LowerBoundStates { d };
        // every block vector with positive entries and a nonempty last block
        let mut blocks: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..d {
            blocks = blocks.into_iter().flat_map(|b| (1..n).map(move |x| [b.clone(), vec![x]].concat())).collect();
        }
        for a in blocks.into_iter().filter(|a| a.iter().sum::<usize>() < n) {
            let tau = block_observation(&a, n);
            let mut got = brute_monomials(&model, &tau);
            got.sort();
            let (t, tp) = st.paths(&a, n);
            let a_vec: Vec<i64> = a.iter().map(|&x| x as i64).collect();
            let mut expect = vec![(t, a_vec), (tp, vec![0; d])];
            expect.sort();
            assert_eq!(got, expect, "d={d} n={n} a={a:?}");
        }
    }
}

#[test]
fn lower_bound_viterbi_follows_the_sign_of_a_dot_v() {
    let model = build_lowerbound_hmm(2, 7).unwrap();
    let st = LowerBoundStates { d: 2 };
    let a = [2, 3];
    let tau = block_observation(&a, 7);
    let (t, tp) = st.paths(&a, 7);
    let mut rng = Mix(42);
    for _ in 0..200 {
        let v = ParameterPoint(vec![q(rng.range(-50, 50), rng.range(1, 9)), q(rng.range(-50, 50), rng.range(1, 9))]);
        let s = dot(&v, &[2, 3]);
        if s == Rational::from_integer(0.into()) {
            continue;
        }
        let (h, _) = viterbi(&model, &tau, &v).unwrap();
        assert_eq!(h.0, if s > Rational::from_integer(0.into()) { t.clone() } else { tp.clone() });
    }
}

#[test]
fn alignment_model_monomials_are_alignment_counts() {
    for (n1, n2) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let model = build_alignment_model(n1, n2, &binary()).unwrap();
        for tau in all_observations(&model) {
            let s1: Vec<u8> = tau[..n1].iter().map(|&c| b'0' + c as u8).collect();
            let s2: Vec<u8> = tau[n1..].iter().map(|&c| b'0' + c as u8).collect();
            let mut got: Vec<Vec<i64>> = brute_monomials(&model, &tau).into_iter().map(|(_, m)| m).collect();
            got.sort();
            let mut expect: Vec<Vec<i64>> =
                all_alignments(&s1, &s2).iter().map(|(t, b)| alignment_counts(t, b).to_vec()).collect();
            expect.sort();
            assert_eq!(got, expect);
            for m in &got {
                assert_eq!(2 * m[2] + 2 * m[0] + m[1], (n1 + n2) as i64);
            }
        }
    }
}

#[test]
fn complexity_equals_largest_brute_degree() {
    for model in small_models() {
        let max_deg = all_observations(&model)
            .iter()
            .flat_map(|tau| brute_monomials(&model, tau))
            .map(|(_, m)| m.iter().sum::<i64>())
            .max()
            .unwrap();
        assert_eq!(model.complexity(), max_deg as u64, "{}", model.d());
    }
}

#[test]
fn json_round_trip_preserves_polytopes() {
    for model in small_models() {
        let back = FactorModel::from_json(&model.to_json().unwrap()).unwrap();
        for tau in all_observations(&model).iter().take(8) {
            let a = observation_polytope(&model, tau).map(|p| p.into_polytope());
            let b = observation_polytope(&back, tau).map(|p| p.into_polytope());
            assert_eq!(a.ok(), b.ok());
        }
    }
}

#[test]
fn observation_polytopes_equal_brute_force_hulls() {
    for model in small_models() {
        for tau in all_observations(&model) {
            let brute = brute_monomials(&model, &tau);
            match observation_polytope(&model, &tau) {
                Err(Error::Unexplainable) => assert!(brute.is_empty()),
                Err(e) => panic!("{e}"),
                Ok(np) => {
                    let pts: Vec<Vec<i64>> = brute.iter().map(|(_, m)| m.clone()).collect();
                    let got: Vec<Vec<i64>> = np.polytope().vertices().iter().map(|v| v.0.clone()).collect();
                    assert_eq!(got, hull_oracle(&pts));
                    // each witness is the least assignment reaching its vertex
                    for v in np.polytope().vertices() {
                        let least = brute.iter().filter(|(_, m)| *m == v.0).map(|(h, _)| h).min().unwrap();
                        assert_eq!(np.witness(v), Some(least));
                    }
                }
            }
        }
    }
}

#[test]
fn viterbi_agrees_with_exhaustive_search() {
    let models = small_models();
    let mut rng = Mix(2024);
    for _ in 0..1000 {
        let model = &models[(rng.next() % models.len() as u64) as usize];
        let taus = all_observations(model);
        let tau = &taus[(rng.next() % taus.len() as u64) as usize];
        let v = ParameterPoint((0..model.d()).map(|_| q(rng.range(-6, 6), rng.range(1, 4))).collect());
        let brute = brute_monomials(model, tau);
        match viterbi(model, tau, &v) {
            Err(Error::Unexplainable) => assert!(brute.is_empty()),
            Err(e) => panic!("{e}"),
            Ok((h, score)) => {
                let best = brute.iter().map(|(_, m)| dot(&v, m)).max().unwrap();
                assert_eq!(score, best);
                let least = brute.iter().filter(|(_, m)| dot(&v, m) == best).map(|(h, _)| h).min().unwrap();
                assert_eq!(&h.0, least);
                // scaling the parameters keeps the explanation
                let scaled = v.scale(&q(7, 3));
                assert_eq!(viterbi(model, tau, &scaled).unwrap().0, h);
            }
        }
    }
}

#[test]
fn viterbi_witness_lies_on_the_maximizing_face() {
    use infcount::geometry::argmax_face;
    use infcount::Direction;
    let model = hmm(4);
    let mut rng = Mix(8);
    for tau in all_observations(&model) {
        let np = observation_polytope(&model, &tau).unwrap();
        let v = ParameterPoint((0..8).map(|_| q(rng.range(-5, 5), 1)).collect());
        if v.is_zero() {
            continue;
        }
        let (h, score) = viterbi(&model, &tau, &v).unwrap();
        let m = model.monomial_of(&h.0, &tau).unwrap().unwrap();
        let face = argmax_face(np.polytope(), &Direction(v.0.clone())).unwrap();
        assert_eq!(dot(&v, &face[0].0), score);
        assert_eq!(dot(&v, &m.0), score);
    }
}

#[test]
fn inference_function_is_pointwise_viterbi() {
    let model = build_lowerbound_hmm(1, 4).unwrap();
    let v = ParameterPoint(vec![q(-1, 2)]);
    let f = inference_function(&model, &v, DEFAULT_OBSERVATION_CAP).unwrap();
    assert_eq!(f.len(), 16);
    for (i, tau) in all_observations(&model).iter().enumerate() {
        assert_eq!(f.get(i).cloned(), viterbi(&model, tau, &v).ok().map(|r| r.0));
    }
    assert!(matches!(inference_function(&model, &v, 15), Err(Error::CapExceeded { .. })));
}
