use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::enveloping::DufloMap;
use crate::lie::catalog;
use crate::polyvector::kirillov_kostant;
use crate::scalar::{frac, int, Scalar};

fn brute_force(n: usize, m: usize, edges: Option<usize>) -> BTreeSet<Vec<(usize, Vertex)>> {
    let all: Vec<(usize, Vertex)> = (0..n)
        .flat_map(|s| {
            (0..n)
                .filter(move |&a| a != s)
                .map(Vertex::Aerial)
                .chain((0..m).map(Vertex::Ground))
                .map(move |t| (s, t))
        })
        .collect();
    let max = all.len();
    let mut out = BTreeSet::new();
    let lens: Vec<usize> = match edges {
        Some(e) => vec![e],
        None => (0..=max).collect(),
    };
    for len in lens {
        // every sequence of `len` candidate edges
        let mut idx = vec![0usize; len];
        loop {
            let seq: Vec<(usize, Vertex)> = idx.iter().map(|&i| all[i]).collect();
            let distinct = seq.iter().collect::<BTreeSet<_>>().len() == len;
            let sorted = seq.windows(2).all(|w| w[0].0 <= w[1].0);
            let linear = (0..n).all(|a| seq.iter().filter(|e| e.1 == Vertex::Aerial(a)).count() <= 1);
            if distinct && sorted && linear {
                out.insert(seq);
            }
            let mut k = len;
            let done = loop {
                if k == 0 {
                    break true;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < max {
                    break false;
                }
                idx[k] = 0;
            };
            if done || max == 0 {
                break;
            }
        }
    }
    out
}

fn edge_sets(gs: &[KGraph]) -> BTreeSet<Vec<(usize, Vertex)>> {
    gs.iter().map(|g| g.edges().to_vec()).collect()
}

#[test]
fn wedge_enumeration() {
    let gs = enumerate_linear_graphs(1, 2, EdgeCount::Weight);
    assert_eq!(gs.len(), 2);
    let expected: BTreeSet<_> = [
        vec![(0, Vertex::Ground(0)), (0, Vertex::Ground(1))],
        vec![(0, Vertex::Ground(1)), (0, Vertex::Ground(0))],
    ]
    .into_iter()
    .collect();
    assert_eq!(edge_sets(&gs), expected);
    assert!(enumerate_linear_graphs(0, 2, EdgeCount::Weight).is_empty());
    assert!(enumerate_linear_graphs(0, 2, EdgeCount::Any).is_empty());
}

#[test]
fn enumeration_matches_brute_force() {
    for (n, m) in [(2, 1), (2, 0), (1, 3), (3, 0)] {
        let fast = enumerate_linear_graphs(n, m, EdgeCount::Weight);
        assert_eq!(fast.len(), edge_sets(&fast).len(), "duplicates for n={n} m={m}");
        assert_eq!(edge_sets(&fast), brute_force(n, m, Some(2 * n + m - 2)), "n={n} m={m}");
    }
    let fast = enumerate_linear_graphs(2, 1, EdgeCount::Any);
    assert_eq!(edge_sets(&fast), brute_force(2, 1, None));
    let fast = enumerate_linear_graphs(2, 2, EdgeCount::Exactly(2));
    assert_eq!(edge_sets(&fast), brute_force(2, 2, Some(2)));
}

#[test]
fn parse_and_render() {
    let g = KGraph::parse("1->2, 2->G1").unwrap();
    assert_eq!((g.aerial(), g.ground()), (2, 1));
    assert_eq!(g.render(), "1->2, 2->G1");
    assert_eq!(KGraph::parse("1→2; 2→g1").unwrap(), g);
    assert_eq!(KGraph::parse(&snail_graph(3).render()).unwrap().edges(), snail_graph(3).edges());
    assert!(matches!(KGraph::parse("1->1"), Err(Error::Structural(_))));
    assert!(matches!(KGraph::parse("1->G1, 1->G1"), Err(Error::Structural(_))));
    assert!(matches!(KGraph::parse("2->G1, 1->G1"), Err(Error::Structural(_))));
    assert!(matches!(KGraph::parse("G1->1"), Err(Error::Parse(_))));
    assert!(matches!(KGraph::parse("1-2"), Err(Error::Parse(_))));
    assert!(matches!(KGraph::parse("0->G1"), Err(Error::Parse(_))));
    assert!(matches!(KGraph::parse_with("1->G3", 1, 2), Err(Error::Structural(_))));
}

#[test]
fn admissibility() {
    let wedge = wedge_graph().with_partition([0]).unwrap();
    assert!(is_l_admissible(&wedge, 0).unwrap());
    assert!(matches!(is_l_admissible(&wedge_graph(), 0), Err(Error::Structural(_))));
    // one extra edge breaks the count
    let g = KGraph::parse_with("1->G1, 1->G2, 1->G3", 1, 2);
    assert!(g.is_err());
    let g = KGraph::parse_with("1->G1", 1, 2).unwrap().with_partition([0]).unwrap();
    assert!(!is_l_admissible(&g, 0).unwrap());
    assert!(is_l_admissible(&g, 1).is_ok_and(|b| !b));
    // l = 1: vertices 1, 2 form V^{1,1}; e = 2n + m - 3
    let ok = KGraph::parse_with("1->G1, 2->G1", 2, 1).unwrap().with_partition([0, 1]).unwrap();
    assert!(is_l_admissible(&ok, 1).unwrap());
    let joined = KGraph::parse_with("1->2, 2->G1", 2, 1).unwrap().with_partition([0, 1]).unwrap();
    assert!(!is_l_admissible(&joined, 1).unwrap());
    let shifted = KGraph::parse_with("1->G1, 2->G1", 2, 1).unwrap().with_partition([1]).unwrap();
    assert!(!is_l_admissible(&shifted, 0).unwrap());
    assert!(is_l_admissible(&snail_graph(2), 0).unwrap());
}

#[test]
fn b_gamma_wedge_gives_bracket() {
    let alg = catalog("aff1").unwrap();
    let gamma = kirillov_kostant(&alg);
    let (x1, x2) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
    let labelings = enumerate_linear_graphs(1, 2, EdgeCount::Weight);
    let first = b_gamma(&labelings[0], std::slice::from_ref(&gamma), &[x1.clone(), x2.clone()]).unwrap();
    let second = b_gamma(&labelings[1], std::slice::from_ref(&gamma), &[x1.clone(), x2.clone()]).unwrap();
    // by hand: gamma^{12} = x2/2, gamma^{21} = -x2/2
    assert_eq!(first, x2.scale(&frac(1, 2)));
    assert_eq!(&first - &second, x2);
    // star commutator from the exact side; the wedge weight is 1/2
    let duflo = DufloMap::new(&alg, 2);
    let comm = &duflo.star(&x1, &x2).unwrap() - &duflo.star(&x2, &x1).unwrap();
    assert_eq!(comm, first.scale(&int(2)));
}

#[test]
fn b_gamma_abelian_and_errors() {
    let alg = catalog("abelian2").unwrap();
    let gamma = kirillov_kostant(&alg);
    let f = Polynomial::parse("x1^2*x2", &["x1".into(), "x2".into()]).unwrap();
    let b = b_gamma(&wedge_graph(), std::slice::from_ref(&gamma), &[f.clone(), f.clone()]).unwrap();
    assert!(b.is_zero());
    let err = b_gamma(&snail_graph(1), &[gamma.clone(), gamma.clone()], std::slice::from_ref(&f)).unwrap_err();
    assert!(matches!(err, Error::Precondition(ref s) if s.contains("vertex 1")));
    assert!(matches!(b_gamma(&wedge_graph(), &[gamma], &[f]), Err(Error::Structural(_))));
}

#[test]
fn b_gamma_functions_only() {
    // a ground-only graph multiplies the functions
    let g = KGraph::new(0, 2, vec![]).unwrap();
    let labels = ["x".to_string(), "y".to_string()];
    let f = Polynomial::parse("x+y", &labels).unwrap();
    let h = Polynomial::parse("x*y", &labels).unwrap();
    assert_eq!(b_gamma(&g, &[], &[f.clone(), h.clone()]).unwrap(), &f * &h);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabeling_flips_b_gamma(which in 0usize..5, seed in 0i64..50) {
        let alg = catalog(crate::lie::CATALOG[which]).unwrap();
        let d = alg.dim();
        let gamma = kirillov_kostant(&alg);
        let labels: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
        let mut f = Polynomial::zero(d);
        for (k, m) in crate::poly::monomials_up_to(d, 3).into_iter().enumerate() {
            f.add_term(m, int((k as i64 * 7 + seed) % 5 - 2));
        }
        let _ = labels;
        let g = bernoulli_graph(1);
        let args = [gamma.clone(), gamma.clone()];
        let fs = [f.clone(), f.scale(&int(3)).partial(0)];
        let base = b_gamma(&g, &args, &fs).unwrap();
        for (a, b) in [(0, 1), (2, 3)] {
            let swapped = g.swap_edges(a, b).unwrap();
            prop_assert_eq!(b_gamma(&swapped, &args, &fs).unwrap(), -&base);
        }
    }
}

#[test]
fn classification_of_named_graphs() {
    let d = classify_zero_admissible(&snail_graph(0)).unwrap();
    assert_eq!(d, Decomposition { trivial: 1, ..Default::default() });
    for p in 1..=4 {
        let d = classify_zero_admissible(&snail_graph(p)).unwrap();
        assert_eq!(d.snails, vec![p]);
        assert_eq!((d.trivial, d.other), (0, 0));
    }
    for p in 2..=4 {
        let d = classify_zero_admissible(&wheel_graph(p)).unwrap();
        assert_eq!(d.wheels, vec![p]);
        assert!(d.snails.is_empty() && d.is_simple());
    }
    assert!(matches!(classify_zero_admissible(&wedge_graph()), Err(Error::Precondition(_))));
    let two_first = KGraph::parse_with("1->G1, 2->G1", 2, 1).unwrap().with_partition([0, 1]).unwrap();
    assert!(classify_zero_admissible(&two_first).is_err());
}

#[test]
fn classification_is_exhaustive_up_to_four_vertices() {
    let mut seen_snail = false;
    let mut seen_wheel = false;
    let mut total = 0;
    for gammas in 0..=3 {
        for k in 0..=3 {
            for g in enumerate_zero_admissible(gammas, k) {
                let d = classify_zero_admissible(&g).unwrap();
                assert!(d.is_simple(), "unclassified graph {g}");
                let sizes: usize = d.snails.iter().sum::<usize>() + d.wheels.iter().sum::<usize>();
                assert_eq!(sizes, gammas, "{g}");
                assert_eq!(d.trivial + d.snails.len(), k, "{g}");
                seen_snail |= !d.snails.is_empty();
                seen_wheel |= !d.wheels.is_empty();
                total += 1;
            }
        }
    }
    assert!(seen_snail && seen_wheel);
    assert!(total > 50);
}

// t/(e^t - 1) and t e^t/(e^t - 1) as power series
fn bernoulli_series(n: usize, at_one: bool) -> Vec<Scalar> {
    let denom: Vec<Scalar> = (0..=n).map(|k| Scalar::from_integer(1.into()) / crate::scalar::factorial(k + 1)).collect();
    let mut inv = vec![int(0); n + 1];
    inv[0] = int(1);
    for k in 1..=n {
        let mut acc = int(0);
        for j in 1..=k {
            acc += &denom[j] * &inv[k - j];
        }
        inv[k] = -acc;
    }
    if !at_one {
        return inv;
    }
    (0..=n)
        .map(|k| {
            (0..=k)
                .map(|j| &inv[j] / crate::scalar::factorial(k - j))
                .fold(int(0), |a, b| a + b)
        })
        .collect()
}

#[test]
fn bernoulli_polynomials_match_generating_function() {
    for n in 0..=12 {
        let z = &bernoulli_series(n, false)[n] * crate::scalar::factorial(n);
        let o = &bernoulli_series(n, true)[n] * crate::scalar::factorial(n);
        assert_eq!(bernoulli_polynomial(n, &int(0)), z, "b_{n}(0)");
        assert_eq!(bernoulli_polynomial(n, &int(1)), o, "b_{n}(1)");
    }
    assert_eq!(bernoulli_polynomial(2, &int(0)), frac(1, 6));
    assert_eq!(bernoulli_polynomial(2, &frac(1, 2)), frac(-1, 12));
}

#[test]
fn bernoulli_weights() {
    let w = bernoulli_weight(0);
    assert_eq!((w.at_zero.clone(), w.at_pi.clone(), w.difference), (frac(1, 2), frac(-1, 2), int(1)));
    assert_eq!(bernoulli_weight(1).at_zero, frac(1, 12));
    for p in 1..=12 {
        let w = bernoulli_weight(p);
        assert_eq!(w.difference, int(0), "p={p}");
        if p % 2 == 0 {
            assert_eq!(w.at_zero, int(0), "p={p}");
        }
    }
}

#[test]
fn mc_wedge_weight_is_one_half() {
    let est = weight_mc(&wedge_graph(), 200_000, 7).unwrap();
    assert!((est.mean - 0.5).abs() < 4.0 * est.stderr + 1e-3, "{est:?}");
    assert!(est.stderr < 0.01);
    let swapped = weight_mc(&wedge_graph().swap_edges(0, 1).unwrap(), 200_000, 7).unwrap();
    assert_eq!(swapped.mean, -est.mean);
    assert_eq!(swapped.stderr, est.stderr);
}

#[test]
fn mc_snail_weights() {
    let trivial = weight_mc(&snail_graph(0), 50_000, 3).unwrap();
    assert!((trivial.mean - 1.0).abs() < 1e-9, "{trivial:?}");
    let est = weight_mc(&snail_graph(1), 200_000, 11).unwrap();
    assert!(est.mean.abs() < 3.0 * est.stderr, "{est:?}");
}

#[test]
fn mc_bernoulli_endpoint() {
    let est = weight_mc(&bernoulli_graph(1), 400_000, 5).unwrap();
    assert!((est.mean - 1.0 / 12.0).abs() < 3.0 * est.stderr, "{est:?}");
    let p0 = weight_mc(&bernoulli_graph(0), 100_000, 5).unwrap();
    assert!((p0.mean - 0.5).abs() < 4.0 * p0.stderr, "{p0:?}");
}

#[test]
fn mc_bookkeeping() {
    let g = KGraph::parse_with("1->G1", 1, 2).unwrap();
    let est = weight_mc(&g, 10, 1).unwrap();
    assert_eq!((est.mean, est.samples), (0.0, 0));
    assert!(matches!(weight_mc(&wedge_graph(), 0, 1), Err(Error::Parameter(_))));
    let a = weight_mc(&bernoulli_graph(1), 10_000, 99).unwrap();
    let b = weight_mc(&bernoulli_graph(1), 10_000, 99).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.samples, 10_000);
    assert_ne!(a.mean, weight_mc(&bernoulli_graph(1), 10_000, 100).unwrap().mean);
}
