use std::collections::BTreeMap;

use proptest::prelude::*;

use alba::classify::{check_inductive, polarity_map};
use alba::engine::{replay, run, Status};
use alba::fol::{correspondent, st_formula, st_quasi, FOSentence};
use alba::generate::{random_formula, random_model, rng, FormulaShape, InductiveGenerator};
use alba::semantics::{eval_fo, eval_fo_in, holds_quasi, truth_set, FiniteFrame, Model, Valuation};
use alba::syntax::{parse_formula, Formula, Inequality, SymbolKind, SymbolPool};
use rand::Rng;

fn leaf() -> impl Strategy<Value = Formula> {
    prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bot),
        prop::sample::select(vec!["p", "q", "r", "p1", "ab"]).prop_map(Formula::prop),
        (0u32..20).prop_map(|k| Formula::nom(format!("i{k}"))),
        (0u32..20).prop_map(|k| Formula::conom(format!("m{k}"))),
    ]
}

fn formula() -> impl Strategy<Value = Formula> {
    leaf().prop_recursive(8, 96, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::bdiam),
        ]
    })
}

fn count_props(phi: &Formula) -> usize {
    match phi {
        Formula::Prop(_) => 1,
        Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => count_props(a) + count_props(b),
        Formula::Box(a) | Formula::BlackDiamond(a) => count_props(a),
        _ => 0,
    }
}

fn all_frames(max_n: usize) -> impl Iterator<Item = FiniteFrame> {
    (1..=max_n).flat_map(|n| (0..1u64 << (n * n)).map(move |i| FiniteFrame::from_index(n, i)))
}

fn equivalent_on_frames(a: &FOSentence, b: &FOSentence, max_n: usize) -> bool {
    all_frames(max_n).all(|f| eval_fo(&f, a) == eval_fo(&f, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity(phi in formula()) {
        let printed = phi.to_string();
        prop_assert_eq!(parse_formula(&printed).unwrap(), phi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn substituting_a_variable_for_itself_is_identity(phi in formula()) {
        prop_assert_eq!(phi.substitute("p", &Formula::prop("p")), phi.clone());
        prop_assert_eq!(phi.substitute("zz", &Formula::Top), phi);
    }

    #[test]
    fn substitution_removes_the_variable(phi in formula(), eta in formula()) {
        let eta = eta.substitute("p", &Formula::Top);
        prop_assert!(!phi.substitute("p", &eta).contains_prop("p"));
    }

    #[test]
    fn every_occurrence_gets_one_polarity(phi in formula()) {
        let occurrences = polarity_map(&phi);
        prop_assert_eq!(occurrences.len(), count_props(&phi));
        let paths: std::collections::BTreeSet<_> = occurrences.iter().map(|o| o.path.clone()).collect();
        prop_assert_eq!(paths.len(), occurrences.len());
    }

    #[test]
    fn purity_matches_symbol_content(phi in formula()) {
        prop_assert_eq!(phi.is_pure(), phi.props().is_empty());
    }

    #[test]
    fn fresh_names_are_unused(phi in formula()) {
        let mut pool = SymbolPool::new();
        pool.register_formula(&phi);
        for kind in [SymbolKind::Prop, SymbolKind::Nominal, SymbolKind::Conominal] {
            let name = pool.fresh(kind);
            let mut clash = false;
            phi.collect_symbols(&mut |k, n| clash |= k == kind && n == name);
            prop_assert!(!clash, "{} reused", name);
            prop_assert!(pool.contains(kind, &name));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn generated_inequalities_are_recognized(seed in any::<u64>()) {
        let g = InductiveGenerator::default().generate(&mut rng(seed));
        let cert = check_inductive(&g.inequality);
        prop_assert!(cert.is_ok(), "{}: {:?}", g.inequality, cert);
        let cert = cert.unwrap();
        prop_assert!(cert.omega.is_acyclic());
        prop_assert!(cert.validate(&g.inequality));
    }

    #[test]
    fn runs_succeed_and_traces_replay(seed in any::<u64>()) {
        let ineq = InductiveGenerator::default().generate(&mut rng(seed)).inequality;
        let result = run(&ineq);
        prop_assert_eq!(result.status, Status::Success, "{}: {:?}", ineq, result.failure);
        prop_assert_eq!(result.quasis.len(), result.systems.len());
        for ((system, trace), quasi) in result.systems.iter().zip(&result.traces).zip(&result.quasis) {
            prop_assert!(quasi.is_pure());
            let replayed = replay(&system.inequalities, trace).unwrap();
            prop_assert_eq!(&replayed, &quasi.antecedents);
            prop_assert_eq!(&quasi.conclusion, &system.conclusion());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn simplification_preserves_frame_truth(seed in any::<u64>()) {
        let ineq = InductiveGenerator::new(2, 3).generate(&mut rng(seed)).inequality;
        let result = run(&ineq);
        prop_assert_eq!(result.status, Status::Success);
        let raw = correspondent(&result.quasis, false).unwrap();
        let simple = correspondent(&result.quasis, true).unwrap();
        prop_assert!(raw.is_closed() && simple.is_closed());
        prop_assert!(equivalent_on_frames(&raw, &simple, 3), "{} vs {}", raw, simple);
    }

    #[test]
    fn quasi_translation_matches_quasi_semantics(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ineq = InductiveGenerator::default().generate(&mut r).inequality;
        let result = run(&ineq);
        for quasi in &result.quasis {
            let s = st_quasi(quasi).unwrap();
            let mut body = &s.formula;
            while let alba::FOFormula::Forall(_, b) = body {
                body = b;
            }
            let mut symbols = Vec::new();
            for i in quasi.antecedents.iter().chain([&quasi.conclusion]) {
                i.collect_symbols(&mut |k, n| symbols.push((k, n.to_string())));
            }
            for _ in 0..8 {
                let n = r.gen_range(1..=4);
                let model = random_model(&mut r, n, symbols.iter().map(|(k, s)| (*k, s.as_str())));
                let env: BTreeMap<String, usize> = s
                    .promoted
                    .iter()
                    .map(|v| (v.clone(), model.valuation.point(v).unwrap()))
                    .collect();
                let plain = Model::new(model.frame.clone(), Valuation::new()).unwrap();
                let fo = eval_fo_in(&plain, body, &env).unwrap();
                prop_assert_eq!(holds_quasi(&model, quasi).unwrap(), fo, "{}", quasi);
            }
        }
    }

    #[test]
    fn standard_translation_matches_evaluation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = FormulaShape::pure(&["i0", "i1"], &["m0", "m1"]);
        let phi = random_formula(&mut r, &shape, 6);
        let st = st_formula(&phi, "x").unwrap();
        let n = r.gen_range(1..=4);
        let model = random_model(&mut r, n, [
            (SymbolKind::Nominal, "i0"), (SymbolKind::Nominal, "i1"),
            (SymbolKind::Conominal, "m0"), (SymbolKind::Conominal, "m1"),
        ]);
        let truth = truth_set(&model, &phi).unwrap();
        for w in 0..n {
            let env = BTreeMap::from([("x".to_string(), w)]);
            prop_assert_eq!(truth >> w & 1 == 1, eval_fo_in(&model, &st, &env).unwrap());
        }
    }
}

// Minimal-valuation lemma on finite models: for θ pure, η positive in p and
// ι negative in p, some Z ⊇ V(θ) satisfies every η[Z] ⊆ ι[Z] exactly when
// η[θ/p] ≤ ι[θ/p] holds.

fn positive_in_p(r: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 || r.gen_bool(0.3) {
        return match r.gen_range(0..4) {
            0 | 1 => Formula::prop("p"),
            2 => Formula::nom("i1"),
            _ => Formula::Top,
        };
    }
    match r.gen_range(0..6) {
        0 => Formula::and(positive_in_p(r, depth - 1), positive_in_p(r, depth - 1)),
        1 => Formula::or(positive_in_p(r, depth - 1), positive_in_p(r, depth - 1)),
        2 => Formula::boxed(positive_in_p(r, depth - 1)),
        3 => Formula::bdiam(positive_in_p(r, depth - 1)),
        _ => Formula::imp(negative_in_p(r, depth - 1), positive_in_p(r, depth - 1)),
    }
}

fn negative_in_p(r: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 || r.gen_bool(0.3) {
        return match r.gen_range(0..3) {
            0 => Formula::conom("m1"),
            1 => Formula::nom("i1"),
            _ => Formula::Bot,
        };
    }
    match r.gen_range(0..5) {
        0 => Formula::and(negative_in_p(r, depth - 1), negative_in_p(r, depth - 1)),
        1 => Formula::or(negative_in_p(r, depth - 1), negative_in_p(r, depth - 1)),
        2 => Formula::boxed(negative_in_p(r, depth - 1)),
        _ => Formula::imp(positive_in_p(r, depth - 1), negative_in_p(r, depth - 1)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn minimal_valuation_lemma(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = FormulaShape::pure(&["i1", "i2"], &["m1"]);
        let theta = random_formula(&mut r, &shape, 3);
        let pairs: Vec<(Formula, Formula)> = (0..r.gen_range(1..=2))
            .map(|_| (positive_in_p(&mut r, 3), negative_in_p(&mut r, 3)))
            .collect();
        let n = r.gen_range(1..=3);
        let model = random_model(&mut r, n, [
            (SymbolKind::Nominal, "i1"), (SymbolKind::Nominal, "i2"), (SymbolKind::Conominal, "m1"),
        ]);
        let lower = truth_set(&model, &theta).unwrap();
        let exists = (0..1u64 << n).filter(|z| z & lower == lower).any(|z| {
            let mut m = model.clone();
            m.valuation.props.insert("p".into(), z);
            pairs.iter().all(|(eta, iota)| {
                let ineq = Inequality::new(eta.clone(), iota.clone());
                alba::semantics::holds_ineq(&m, &ineq).unwrap()
            })
        });
        let substituted = pairs.iter().all(|(eta, iota)| {
            let ineq = Inequality::new(eta.clone(), iota.clone()).substitute("p", &theta);
            alba::semantics::holds_ineq(&model, &ineq).unwrap()
        });
        prop_assert_eq!(exists, substituted);
    }
}
