mod oracles;

use std::time::Instant;

use oracles::chains::chain_points;
use proptest::prelude::*;

use stratglue::arith::{q, qi, Q};
use stratglue::gluing_engine::{
    build_atlas, check_compatible, coincide, induce, linear_model, report, report_samples, restrict, sew, Arrow,
    ChartMap, Interval, RBox, Region, SampleSpec, Strategy as Rewrite, StratifiedModel,
};
use stratglue::linear_strata::{all_stratifications, Field, LinearStratification};

fn all_models(max_m: usize) -> Vec<StratifiedModel> {
    (0..=max_m)
        .flat_map(|m| all_stratifications(m, Field::Real))
        .map(|s| linear_model(&s).unwrap())
        .collect()
}

/// 100 deterministic points with all coordinates nonzero.
fn generic_points(model: &StratifiedModel) -> Vec<Vec<Q>> {
    let axes = model.axes();
    (0..100)
        .map(|k: i64| (0..axes as i64).map(|a| q(((k * 7 + a * 13) % 19) - 9, 1 + (k + a) % 5)).collect::<Vec<Q>>())
        .map(|mut z| {
            for x in z.iter_mut() {
                if *x == qi(0) {
                    *x = q(1, 3);
                }
            }
            z
        })
        .collect()
}

#[test]
fn atlas_on_every_small_model() {
    for model in all_models(3) {
        let start = Instant::now();
        let atlas = build_atlas(&model).unwrap();
        assert_eq!(atlas.passes, model.layers().len());
        let samples = report_samples(&model, &atlas, &SampleSpec::Full { per_axis: 21 });
        let r = report(&model, &atlas, &samples);
        assert!(r.compatible, "{:?}", r.incompatible);
        assert!(r.separated, "{:?}", r.separation);
        assert!(r.cover.ok, "{:?}", r.cover);
        assert!(start.elapsed().as_secs() < 30);
    }
}

#[test]
fn composition_identities_on_chains() {
    let mut chains = 0;
    for model in all_models(3) {
        let s = model.strat();
        let n = s.num_classes();
        for a in 0..n {
            for b in s.upper_set(a).into_iter().filter(|&b| b != a) {
                let glued = ChartMap::phi(a, b).then(&ChartMap::glue(b)).unwrap();
                assert_eq!(glued.normal_form(s), ChartMap::glue(a));
                for (i, z) in chain_points(&model, a, b, b) {
                    let v = glued.evaluate(&model, i, &z);
                    assert!(v.is_some());
                    assert_eq!(v, ChartMap::glue(a).evaluate(&model, i, &z));
                }
                for c in s.upper_set(b).into_iter().filter(|&c| c != b) {
                    let composite = ChartMap::phi(a, b).then(&ChartMap::phi(b, c)).unwrap();
                    assert_eq!(composite.normal_form(s), ChartMap::phi(a, c));
                    for (i, z) in chain_points(&model, a, b, c) {
                        let v = composite.evaluate(&model, i, &z);
                        assert!(v.is_some(), "{z:?}");
                        assert_eq!(v, ChartMap::phi(a, c).evaluate(&model, i, &z));
                    }
                    chains += 1;
                }
            }
        }
    }
    assert!(chains > 100);
}

#[test]
fn induced_maps_evaluate_like_the_originals() {
    // phi^b = phi^a o Psi and Phi^b_c = Phi^a_c o Psi wherever Psi is defined
    for model in all_models(3) {
        let s = model.strat();
        let points = generic_points(&model);
        for a in 0..s.num_classes() {
            for b in s.upper_set(a).into_iter().filter(|&b| b != a) {
                let psi = ChartMap::psi(b, a);
                for c in s.upper_set(b).into_iter().filter(|&c| c != b) {
                    let word = psi.then(&ChartMap::phi(a, c)).unwrap();
                    assert_eq!(word.normal_form(s), ChartMap::phi(b, c));
                    for z in &points {
                        for &j in s.class(b) {
                            if psi.evaluate(&model, j, z).is_some() {
                                assert_eq!(word.evaluate(&model, j, z), ChartMap::phi(b, c).evaluate(&model, j, z));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn restrict_then_induce_matches_induce_then_restrict() {
    let model = linear_model(&LinearStratification::by_cardinality(2, Field::Real)).unwrap();
    let d = model.canonical_datum(0).unwrap();
    let near = |r: Q| Region::from_boxes(1, vec![RBox { axes: vec![Interval::symmetric(&r), Interval::symmetric(&r)] }]);
    let small = Region::from_boxes(0, vec![RBox::whole(2)]);
    let d_small = restrict(&model, &d, &small, &q(1, 2)).unwrap();
    let a = induce(&model, &d_small, 1, &near(q(1, 8)), &q(1, 4)).unwrap();
    let b = restrict(&model, &induce(&model, &d, 1, &near(q(1, 4)), &q(1, 2)).unwrap(), &near(q(1, 8)), &q(1, 4)).unwrap();
    assert!(coincide(&model, &a, &b));
    let grid = stratglue::gluing_engine::grid_points(2, 17);
    for z in &grid {
        if a.region.contains(&model, z) {
            let supp = model.support(z);
            assert_eq!(a.chart.evaluate(&model, supp, z), b.chart.evaluate(&model, supp, z));
        }
    }
}

#[test]
fn sew_agrees_with_inputs() {
    let model = linear_model(&LinearStratification::by_cardinality(2, Field::Real)).unwrap();
    let d = model.canonical_datum(1).unwrap();
    let left = Region::from_boxes(1, vec![RBox { axes: vec![Interval::new(qi(-2), qi(1)), Interval::all()] }]);
    let right = Region::from_boxes(1, vec![RBox { axes: vec![Interval::new(qi(-1), qi(3)), Interval::all()] }]);
    let a = restrict(&model, &d, &left, &q(1, 2)).unwrap();
    let b = restrict(&model, &d, &right, &q(1, 3)).unwrap();
    let s = sew(&model, &a, &b).unwrap();
    assert_eq!(s.epsilon, q(1, 6));
    let grid = stratglue::gluing_engine::grid_points(2, 41);
    for z in grid.iter().map(|z| z.iter().map(|x| x * qi(3)).collect::<Vec<Q>>()) {
        for part in [&a, &b] {
            if part.region.contains(&model, &z) {
                assert!(s.region.contains(&model, &z));
                let supp = model.support(&z);
                assert_eq!(s.chart.evaluate(&model, supp, &z), part.chart.evaluate(&model, supp, &z));
            }
        }
    }
    assert!(check_compatible(&model, &s, &a, &grid).ok);
}

#[test]
fn complex_models_of_four_coordinates() {
    let mut models = vec![LinearStratification::by_cardinality(4, Field::Complex)];
    models.extend(all_stratifications(4, Field::Complex).into_iter().step_by(97));
    for s in models {
        let model = linear_model(&s).unwrap();
        let start = Instant::now();
        let atlas = build_atlas(&model).unwrap();
        let built = start.elapsed();
        let samples = report_samples(&model, &atlas, &SampleSpec::Spread { count: 256, seed: 3 });
        let r = report(&model, &atlas, &samples);
        assert!(r.ok, "{:?} {:?} {:?}", r.incompatible, r.separation, r.cover);
        eprintln!("{} classes: {:?} {:?}", s.num_classes(), built, start.elapsed());
    }
}

fn arb_word(model: StratifiedModel) -> impl Strategy<Value = (StratifiedModel, usize, Vec<Arrow>)> {
    let n = model.num_strata();
    (0..n, prop::collection::vec((0..n, any::<bool>()), 0..8)).prop_map(move |(start, steps)| {
        let s = model.strat();
        let mut word = Vec::new();
        let mut cur = start;
        for (next, restrict_step) in steps {
            if restrict_step {
                word.push(Arrow::Restrict(cur));
            } else if s.lt(cur, next) {
                word.push(Arrow::Phi(cur, next));
                cur = next;
            } else if s.lt(next, cur) {
                word.push(Arrow::Psi(cur, next));
                cur = next;
            }
        }
        (model.clone(), start, word)
    })
}

fn models_for_words() -> impl Strategy<Value = (StratifiedModel, usize, Vec<Arrow>)> {
    let models: Vec<StratifiedModel> = all_models(3).into_iter().filter(|m| m.num_strata() > 2).collect();
    prop::sample::select(models).prop_flat_map(arb_word)
}

proptest! {
    #[test]
    fn rewriting_is_confluent((model, start, word) in models_for_words(), seed in any::<u64>()) {
        let s = model.strat();
        let w = ChartMap::from_word(s, start, word).unwrap();
        let left = w.normalize(s, Rewrite::Leftmost);
        prop_assert_eq!(&left, &w.normalize(s, Rewrite::Rightmost));
        prop_assert_eq!(&left, &w.normalize(s, Rewrite::Random(seed)));
        prop_assert!(left.is_normal(s));
        prop_assert!(left.word().len() <= 2);
        prop_assert_eq!(left.target(), w.target());
        let with_glue = w.then(&ChartMap::glue(w.target().unwrap())).unwrap();
        prop_assert_eq!(with_glue.normal_form(s), ChartMap::glue(start));
    }

    #[test]
    fn upward_words_evaluate_like_their_normal_form((model, start, word) in models_for_words()) {
        let s = model.strat();
        let up: Vec<Arrow> = word.into_iter().take_while(|a| !matches!(a, Arrow::Psi(..))).collect();
        let w = ChartMap::from_word(s, start, up).unwrap();
        let nf = w.normal_form(s);
        for z in generic_points(&model).iter().take(20) {
            for &i in s.class(start) {
                if let Some(v) = w.evaluate(&model, i, z) {
                    prop_assert_eq!(Some(v), nf.evaluate(&model, i, z));
                }
            }
        }
    }
}
