mod common;

use std::collections::BTreeSet;

use ctxsim::corpus::{
    collect_context_articles, mix_corpora, read_articles, ArticleStore, CategoryGraph, ContextSpec, Corpus,
};
use ctxsim::embedding::EmbeddingSpace;
use ctxsim::eval::{
    bootstrap_statistics, compare_models, ensemble_mean, filter_participants, spearman, BootstrapOptions,
};
use ctxsim::projection::{axis_pair_distance, build_axis, project_word, AnchorMode, FeatureAxis, RatingsMatrix};
use ctxsim::similarity::{canonical_pairs, featurize_pairs, PairEncoding, PairScores};
use ctxsim::synthetic::Cohort;
use proptest::prelude::*;

use common::*;

fn vec_f32(dim: usize) -> impl Strategy<Value = Vec<f32>> {
    prop::collection::vec(-1.0f32..1.0, dim)
}

fn anchor_space(dim: usize) -> impl Strategy<Value = Vec<Vec<f32>>> {
    prop::collection::vec(vec_f32(dim), 6)
}

const ANCHORS: [&str; 6] = ["l0", "l1", "l2", "h0", "h1", "h2"];

fn space_of(rows: &[Vec<f32>]) -> EmbeddingSpace {
    EmbeddingSpace::from_rows(ANCHORS.iter().copied().zip(rows.iter().cloned())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_linear(
        a in prop::collection::vec(-2.0f64..2.0, 8),
        x in prop::collection::vec(-2.0f64..2.0, 8),
        y in prop::collection::vec(-2.0f64..2.0, 8),
        s in -3.0f64..3.0,
        t in -3.0f64..3.0,
    ) {
        prop_assume!(norm(&a) > 1e-3);
        let axis = FeatureAxis::from_direction("f", a).unwrap();
        let combo: Vec<f64> = x.iter().zip(&y).map(|(p, q)| s * p + t * q).collect();
        let lhs = axis.project(&combo);
        let rhs = s * axis.project(&x) + t * axis.project(&y);
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn rating_difference_is_pair_distance(rows in prop::collection::vec(vec_f32(6), 2), a in prop::collection::vec(-1.0f64..1.0, 6)) {
        prop_assume!(norm(&a) > 1e-3);
        let space = EmbeddingSpace::from_rows([("x", rows[0].clone()), ("y", rows[1].clone())]).unwrap();
        let axis = FeatureAxis::from_direction("f", a).unwrap();
        let gap = project_word(&space, "x", &axis).unwrap() - project_word(&space, "y", &axis).unwrap();
        let d = axis_pair_distance(&space, "x", "y", &axis).unwrap();
        prop_assert!((gap - d).abs() < 1e-12);
        let back = axis_pair_distance(&space, "y", "x", &axis).unwrap();
        prop_assert!((d + back).abs() < 1e-12);
    }

    #[test]
    fn axis_ignores_anchor_order(
        rows in anchor_space(7),
        lo_perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
        hi_perm in Just(vec![3usize, 4, 5]).prop_shuffle(),
    ) {
        let space = space_of(&rows);
        let base = build_axis(&space, "f", AnchorMode::Contextual, &ANCHORS[..3], &ANCHORS[3..]);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let lows: Vec<&str> = lo_perm.iter().map(|&i| ANCHORS[i]).collect();
        let highs: Vec<&str> = hi_perm.iter().map(|&i| ANCHORS[i]).collect();
        let other = build_axis(&space, "f", AnchorMode::Contextual, &lows, &highs).unwrap();
        for (p, q) in base.direction().iter().zip(other.direction()) {
            prop_assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn swapping_ends_negates_ratings(rows in anchor_space(5), probe in vec_f32(5)) {
        let space = space_of(&rows);
        let up = build_axis(&space, "f", AnchorMode::Contextual, &ANCHORS[..3], &ANCHORS[3..]);
        prop_assume!(up.is_ok());
        let up = up.unwrap();
        let down = build_axis(&space, "f", AnchorMode::Contextual, &ANCHORS[3..], &ANCHORS[..3]).unwrap();
        let v: Vec<f64> = probe.iter().map(|&x| x as f64).collect();
        for (p, q) in up.direction().iter().zip(down.direction()) {
            prop_assert!((p + q).abs() < 1e-12);
        }
        prop_assert!((up.project(&v) + down.project(&v)).abs() < 1e-12);
    }

    #[test]
    fn axis_scale_leaves_ratings_unchanged(a in prop::collection::vec(-1.0f64..1.0, 6), v in prop::collection::vec(-1.0f64..1.0, 6), c in 0.01f64..100.0) {
        prop_assume!(norm(&a) > 1e-3);
        let one = FeatureAxis::from_direction("f", a.clone()).unwrap();
        let scaled = FeatureAxis::from_direction("f", a.iter().map(|x| c * x).collect()).unwrap();
        prop_assert!((one.project(&v) - scaled.project(&v)).abs() < 1e-12);
    }
}

fn graph_from(edges: &[(usize, usize)], members: &[(usize, usize)]) -> CategoryGraph {
    let mut g = CategoryGraph::new();
    for &(p, c) in edges {
        g.add_edge(&format!("c{p}"), &format!("c{c}"));
    }
    for &(c, a) in members {
        g.add_member(&format!("c{c}"), &format!("a{a}"));
    }
    g
}

fn store_of(n: usize) -> ArticleStore {
    let lines: String = (0..n)
        .map(|i| format!("{{\"id\":\"a{i}\",\"title\":\"t{i}\",\"text\":\"word{i} common\"}}\n"))
        .collect();
    read_articles(lines.as_bytes(), "memory").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn traversal_is_order_independent(
        edges in prop::collection::vec((0usize..12, 0usize..12), 0..40),
        members in prop::collection::vec((0usize..12, 0usize..30), 1..60),
        seed in any::<u64>(),
    ) {
        let store = store_of(30);
        let mut shuffled_edges = edges.clone();
        let mut shuffled_members = members.clone();
        {
            use rand::seq::SliceRandom;
            let mut r = rng(seed);
            shuffled_edges.shuffle(&mut r);
            shuffled_members.shuffle(&mut r);
        }
        let mut g1 = graph_from(&edges, &members);
        let mut g2 = graph_from(&shuffled_edges, &shuffled_members);
        g1.add_member("c0", "a0");
        g2.add_member("c0", "a0");
        let spec = ContextSpec::new(["c0"]);
        let a = collect_context_articles(&g1, &store, &spec).unwrap();
        let b = collect_context_articles(&g2, &store, &spec).unwrap();
        prop_assert_eq!(&a, &b);

        // Brute-force closure over the edge list.
        let mut seen = BTreeSet::from([0usize]);
        loop {
            let before = seen.len();
            for &(p, c) in &edges {
                if seen.contains(&p) {
                    seen.insert(c);
                }
            }
            if seen.len() == before {
                break;
            }
        }
        let mut want: BTreeSet<String> = members
            .iter()
            .filter(|(c, _)| seen.contains(c))
            .map(|(_, a)| format!("a{a}"))
            .collect();
        want.insert("a0".into());
        prop_assert_eq!(a, want);
    }

    #[test]
    fn subtraction_makes_contexts_disjoint(
        members in prop::collection::vec((0usize..4, 0usize..30), 1..80),
    ) {
        let store = store_of(30);
        let mut g = graph_from(&[(0, 1), (2, 3)], &members);
        g.add_member("c0", "a0");
        g.add_member("c2", "a1");
        let first = collect_context_articles(&g, &store, &ContextSpec::new(["c0"])).unwrap();
        let second = collect_context_articles(&g, &store, &ContextSpec::new(["c2"])).unwrap();
        let a = collect_context_articles(&g, &store, &ContextSpec::new(["c0"]).subtract(second.clone())).unwrap();
        let b = collect_context_articles(&g, &store, &ContextSpec::new(["c2"]).subtract(first.clone())).unwrap();
        prop_assert!(a.is_disjoint(&b));
        prop_assert_eq!(a.len() + first.intersection(&second).count(), first.len());
    }

    #[test]
    fn mixing_conserves_tokens(
        la in prop::collection::vec(1usize..30, 1..25),
        lb in prop::collection::vec(1usize..30, 1..25),
        f in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let mk = |lens: &[usize], tag: &str| {
            Corpus::from_texts(lens.iter().map(|&n| vec![tag; n].join(" ")))
        };
        let a = mk(&la, "alpha");
        let b = mk(&lb, "beta");
        let m = mix_corpora(&a, &b, f, seed).unwrap();
        let budget = f * a.token_count() as f64 + (1.0 - f) * b.token_count() as f64;
        let total = m.corpus.token_count();
        prop_assert!(total as f64 <= budget + 1e-9);
        prop_assert_eq!(total, m.shares[0].tokens + m.shares[1].tokens);
        prop_assert_eq!(m.corpus.count("alpha"), m.shares[0].tokens);
        let longest = *la.iter().chain(&lb).max().unwrap() as f64;
        prop_assert!(budget - (total as f64) < 2.0 * longest + 2.0);
        let again = mix_corpora(&a, &b, f, seed).unwrap();
        let ids: Vec<&str> = m.corpus.source_ids().collect();
        let ids2: Vec<&str> = again.corpus.source_ids().collect();
        prop_assert_eq!(ids, ids2);
    }

    #[test]
    fn spearman_survives_monotone_maps(
        x in prop::collection::vec(-5i32..5, 8..40),
        y_seed in any::<u64>(),
    ) {
        let x: Vec<f64> = x.into_iter().map(f64::from).collect();
        let mut r = rng(y_seed);
        let y = uniform_vec(&mut r, x.len(), -1.0, 1.0);
        let base = spearman(&x, &y);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let fx: Vec<f64> = x.iter().map(|v| v.powi(3) + 2.0 * v).collect();
        let gy: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        prop_assert!((spearman(&fx, &y).unwrap() - base).abs() < 1e-12);
        prop_assert!((spearman(&x, &gy).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn ensemble_commutes_with_affine_maps(
        runs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 10), 1..6),
        s in -3.0f64..3.0,
        t in -3.0f64..3.0,
    ) {
        let items = item_names(5);
        let sets: Vec<PairScores> = runs
            .iter()
            .map(|v| PairScores::from_items("c", "m", &items, v.clone()).unwrap())
            .collect();
        let mapped: Vec<PairScores> = runs
            .iter()
            .map(|v| PairScores::from_items("c", "m", &items, v.iter().map(|x| s * x + t).collect()).unwrap())
            .collect();
        let e = ensemble_mean(&sets).unwrap();
        let em = ensemble_mean(&mapped).unwrap();
        for (p, q) in e.scores.iter().zip(&em.scores) {
            prop_assert!((s * p + t - q).abs() < 1e-9);
        }
        for (k, v) in e.scores.iter().enumerate() {
            let direct = runs.iter().map(|r| r[k]).sum::<f64>() / runs.len() as f64;
            prop_assert!((v - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn featurize_rows_are_symmetric(
        values in prop::collection::vec(prop::collection::vec(-0.6f64..0.4, 4), 6),
        squared in any::<bool>(),
    ) {
        let items = item_names(6);
        let features: Vec<String> = (0..4).map(|k| format!("f{k}")).collect();
        let m = RatingsMatrix::new(items.clone(), features, values.clone()).unwrap();
        let enc = if squared { PairEncoding::Squared } else { PairEncoding::Absolute };
        let fwd = featurize_pairs(&m, &items, enc).unwrap();
        let rev_items: Vec<String> = items.iter().rev().cloned().collect();
        let rev = featurize_pairs(&m, &rev_items, enc).unwrap();
        let n = items.len();
        let pairs = canonical_pairs(n);
        for (p, &(i, j)) in pairs.iter().enumerate() {
            // In reversed order item i sits at n-1-i.
            let (ri, rj) = (n - 1 - j, n - 1 - i);
            let q = pairs.iter().position(|&x| x == (ri, rj)).unwrap();
            for k in 0..4 {
                prop_assert_eq!(fwd[(p, k)], rev[(q, k)]);
                let d = values[i][k] - values[j][k];
                let want = if squared { d * d } else { d.abs() };
                prop_assert_eq!(fwd[(p, k)], want);
            }
        }
    }

    #[test]
    fn pair_lookup_ignores_item_order(v in prop::collection::vec(-1.0f64..1.0, 10)) {
        let items = item_names(5);
        let s = PairScores::from_items("c", "m", &items, v).unwrap();
        for &(i, j) in &canonical_pairs(5) {
            prop_assert_eq!(s.get(&items[i], &items[j]), s.get(&items[j], &items[i]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn filter_respects_threshold(seed in any::<u64>(), sigma in 0.3f64..2.5, threshold in 0.0f64..0.8) {
        let items = item_names(8);
        let mut r = rng(seed);
        let truth = uniform_vec(&mut r, 28, 1.0, 5.0);
        let mut cohort = Cohort::new("c", &items);
        for k in 0..12u64 {
            cohort = cohort.noisy(&format!("p{k:02}"), &truth, sigma, seed.wrapping_add(k));
        }
        let j = cohort.uniform("u", seed ^ 1).build().unwrap();
        if let Ok(f) = filter_participants(&j, threshold) {
            let kept: Vec<String> = f.retained().iter().cloned().collect();
            let pairs = canonical_pairs(items.len());
            let m: Vec<Vec<f64>> = kept
                .iter()
                .map(|p| {
                    pairs
                        .iter()
                        .map(|&(a, b)| {
                            let cell = ctxsim::eval::pair_cell(&items[a], &items[b]);
                            f.responses()
                                .iter()
                                .find(|x| &x.participant == p && x.cell == cell)
                                .unwrap()
                                .rating as f64
                        })
                        .collect()
                })
                .collect();
            for i in 0..kept.len() {
                prop_assert!(loo_r(&m, i) >= threshold - 1e-12);
            }
            // A stricter threshold keeps a subset.
            if let Ok(g) = filter_participants(&j, threshold + 0.1) {
                prop_assert!(g.retained().is_subset(f.retained()));
            }
        }
    }

    #[test]
    fn compare_models_is_antisymmetric(seed in any::<u64>(), noise in 0.1f64..2.0) {
        let items = item_names(10);
        let mut r = rng(seed);
        let t = uniform_vec(&mut r, 45, 0.0, 1.0);
        let a: Vec<f64> = t.iter().map(|x| x + noise * gauss(&mut r)).collect();
        let b: Vec<f64> = t.iter().map(|x| x + noise * gauss(&mut r)).collect();
        let truth = PairScores::from_items("c", "truth", &items, t).unwrap();
        let pa = PairScores::from_items("c", "a", &items, a).unwrap();
        let pb = PairScores::from_items("c", "b", &items, b).unwrap();
        let opts = BootstrapOptions { n_boot: 300, seed, ..Default::default() };
        let ab = compare_models(&pa, &pb, &truth, &opts).unwrap();
        let ba = compare_models(&pb, &pa, &truth, &opts).unwrap();
        prop_assert!((ab + ba - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ci_contains_bootstrap_mean(seed in any::<u64>(), noise in 0.1f64..2.0) {
        let items = item_names(10);
        let mut r = rng(seed);
        let t = uniform_vec(&mut r, 45, 0.0, 1.0);
        let p: Vec<f64> = t.iter().map(|x| x + noise * gauss(&mut r)).collect();
        let truth = PairScores::from_items("c", "truth", &items, t).unwrap();
        let pred = PairScores::from_items("c", "p", &items, p).unwrap();
        let rep = bootstrap_statistics(&pred, &truth, &BootstrapOptions::with_seed(seed)).unwrap();
        prop_assert_eq!(rep.n_boot, 1000);
        prop_assert!(rep.ci95[0] <= rep.r_mean && rep.r_mean <= rep.ci95[1]);
        prop_assert!(-1.0 <= rep.ci95[0] && rep.ci95[1] <= 1.0);
    }
}

#[test]
fn ci_covers_full_sample_r_in_most_runs() {
    let items = item_names(10);
    let runs = 60;
    let mut covered = 0;
    for seed in 0..runs {
        let mut r = rng(9000 + seed);
        // Population correlation 0.6 between truth and prediction.
        let t: Vec<f64> = (0..45).map(|_| gauss(&mut r)).collect();
        let p: Vec<f64> = t.iter().map(|x| 0.6 * x + 0.8 * gauss(&mut r)).collect();
        let full = pearson(&p, &t);
        let truth = PairScores::from_items("c", "truth", &items, t).unwrap();
        let pred = PairScores::from_items("c", "p", &items, p).unwrap();
        let rep = bootstrap_statistics(&pred, &truth, &BootstrapOptions::with_seed(seed)).unwrap();
        if rep.ci95[0] <= full && full <= rep.ci95[1] {
            covered += 1;
        }
    }
    assert!(covered as f64 >= 0.9 * runs as f64, "{covered}/{runs}");
}
