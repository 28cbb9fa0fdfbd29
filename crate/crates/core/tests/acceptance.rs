//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Random inputs are drawn from `ALBA_SEED`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use alba::engine::replay;
use alba::fol::{correspondent, st_formula, FOFormula, FOSentence, FOTerm};
use alba::generate::{random_formula, random_model, rng, seed_from_env, FormulaShape, InductiveGenerator};
use alba::semantics::{correspondence_check, eval, eval_fo, eval_fo_in, satisfiable_anchors, FiniteFrame};
use alba::syntax::{parse_formula, parse_inequality, Formula, Inequality, SymbolKind};
use alba::{run, Status};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn var(n: &str) -> FOTerm {
    FOTerm::var(n)
}

fn sentence(matrix: FOFormula, vars: &[&str]) -> FOSentence {
    FOSentence::close(matrix, vars.iter().map(|s| s.to_string()))
}

fn all_frames(max_n: usize) -> impl Iterator<Item = FiniteFrame> {
    (1..=max_n).flat_map(|n| (0..1u64 << (n * n)).map(move |i| FiniteFrame::from_index(n, i)))
}

/// Frame-level equivalence of two sentences on all frames up to `max_n`.
fn equivalent(a: &FOSentence, b: &FOSentence, max_n: usize) -> Result<(), String> {
    for frame in all_frames(max_n) {
        if eval_fo(&frame, a) != eval_fo(&frame, b) {
            return Err(format!("`{a}` and `{b}` differ on {frame}"));
        }
    }
    Ok(())
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn golden() -> Outcome {
    let start = Instant::now();
    let ineq = parse_inequality("T <= box(box p -> p)").map_err(|e| e.to_string())?;
    let result = run(&ineq);
    if result.status != Status::Success || result.quasis.len() != 1 {
        return Err(format!("unexpected result {:?}", result.failure));
    }
    let quasi = result.quasis[0].to_string();
    let expected_quasi = "box m1 <= m0 & i1 -> m2 <= m1 & bdiam i1 <= m2 => i0 <= m0";
    if quasi != expected_quasi {
        return Err(format!("quasi `{quasi}`"));
    }
    let fo = correspondent(&result.quasis, true).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let printed = fo.to_string();
    if printed != "A i0. A i1. (R(i0,i1) -> R(i1,i1))" {
        return Err(format!("correspondent `{printed}`"));
    }
    let shift = sentence(
        FOFormula::imp(FOFormula::R(var("x"), var("y")), FOFormula::R(var("y"), var("y"))),
        &["x", "y"],
    );
    equivalent(&fo, &shift, 3)?;
    within(elapsed, Duration::from_millis(100))?;
    Ok(format!("{printed} in {elapsed:?}"))
}

fn classical() -> Outcome {
    let start = Instant::now();
    let (x, y, z) = (var("x"), var("y"), var("z"));
    let cases = [
        ("box p <= p", sentence(FOFormula::R(x.clone(), x.clone()), &["x"])),
        (
            "box p <= box box p",
            sentence(
                FOFormula::imp(
                    FOFormula::and(FOFormula::R(x.clone(), y.clone()), FOFormula::R(y.clone(), z.clone())),
                    FOFormula::R(x.clone(), z.clone()),
                ),
                &["x", "y", "z"],
            ),
        ),
        (
            "p <= box p",
            sentence(FOFormula::imp(FOFormula::R(x.clone(), y.clone()), FOFormula::Eq(x, y)), &["x", "y"]),
        ),
    ];
    let mut shown = Vec::new();
    for (text, classical) in cases {
        let ineq = parse_inequality(text).map_err(|e| e.to_string())?;
        let result = run(&ineq);
        if result.status != Status::Success {
            return Err(format!("{text}: {:?}", result.failure));
        }
        let fo = correspondent(&result.quasis, true).map_err(|e| e.to_string())?;
        let report = correspondence_check(&ineq, &fo, 3).map_err(|e| e.to_string())?;
        if !report.agrees() {
            return Err(format!("{text}: {report}"));
        }
        equivalent(&fo, &classical, 3).map_err(|e| format!("{text}: {e}"))?;
        shown.push(format!("{text} ~> {fo}"));
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{} in {:?}", shown.join("; "), start.elapsed()))
}

fn corpus(count: usize, max_vars: usize) -> Vec<Inequality> {
    let mut r = rng(seed_from_env());
    let gen = InductiveGenerator::new(max_vars, 4);
    (0..count).map(|_| gen.generate(&mut r).inequality).collect()
}

fn success_property() -> Outcome {
    let mut slowest = Duration::ZERO;
    for ineq in corpus(200, 3) {
        let start = Instant::now();
        let result = run(&ineq);
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        if result.status != Status::Success {
            return Err(format!("{ineq}: {}", result.failure.map(|f| f.to_string()).unwrap_or_default()));
        }
        if let Some(q) = result.quasis.iter().find(|q| !q.is_pure()) {
            return Err(format!("{ineq}: impure output {q}"));
        }
        within(elapsed, Duration::from_secs(1)).map_err(|e| format!("{ineq}: {e}"))?;
    }
    Ok(format!("200/200 succeeded, slowest {slowest:?}"))
}

fn soundness_property() -> Outcome {
    let start = Instant::now();
    for ineq in corpus(50, 2) {
        let result = run(&ineq);
        if result.status != Status::Success {
            return Err(format!("{ineq}: run failed"));
        }
        let fo = correspondent(&result.quasis, true).map_err(|e| e.to_string())?;
        let report = correspondence_check(&ineq, &fo, 3).map_err(|e| e.to_string())?;
        if !report.agrees() {
            return Err(format!("{ineq} ~> {fo}: {report}"));
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("50/50 agree on all frames n<=3 in {:?}", start.elapsed()))
}

fn rule_soundness() -> Outcome {
    let start = Instant::now();
    let frames: Vec<FiniteFrame> = all_frames(2).collect();
    let mut steps = 0;
    for ineq in corpus(200, 3).into_iter().take(20) {
        let result = run(&ineq);
        for (system, trace) in result.systems.iter().zip(&result.traces) {
            let mut before = system.inequalities.clone();
            for (k, step) in trace.iter().enumerate() {
                let after = replay(&before, std::slice::from_ref(step)).map_err(|e| e.to_string())?;
                for frame in &frames {
                    let a = satisfiable_anchors(frame, &before, &system.i0, &system.m0);
                    let b = satisfiable_anchors(frame, &after, &system.i0, &system.m0);
                    if a != b {
                        return Err(format!("{ineq}: step {k} ({}) changes satisfiable anchors on {frame}", step.rule));
                    }
                }
                steps += 1;
                before = after;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{steps} rule instances sound on all models n<=2 in {:?}", start.elapsed()))
}

fn translation() -> Outcome {
    let mut r = rng(seed_from_env() ^ 0x5157);
    let shape = FormulaShape::pure(&["i0", "i1", "i2"], &["m0", "m1"]);
    let mut checks = 0;
    for _ in 0..500 {
        let phi = random_formula(&mut r, &shape, 5);
        let st = st_formula(&phi, "x").map_err(|e| e.to_string())?;
        let n = rand::Rng::gen_range(&mut r, 1..=4);
        let model = random_model(
            &mut r,
            n,
            [
                (SymbolKind::Nominal, "i0"),
                (SymbolKind::Nominal, "i1"),
                (SymbolKind::Nominal, "i2"),
                (SymbolKind::Conominal, "m0"),
                (SymbolKind::Conominal, "m1"),
            ],
        );
        for w in 0..n {
            let direct = eval(&model, w, &phi).map_err(|e| e.to_string())?;
            let env = BTreeMap::from([("x".to_string(), w)]);
            let translated = eval_fo_in(&model, &st, &env).map_err(|e| e.to_string())?;
            if direct != translated {
                return Err(format!("{phi} at world {w} of {}", model.frame));
            }
            checks += 1;
        }
    }
    Ok(format!("500 formulas, {checks} world checks agree"))
}

fn round_trip() -> Outcome {
    let mut r = rng(seed_from_env() ^ 0x7a7a);
    let shape = FormulaShape::any(&["p", "q", "r0"], &["i0", "i12"], &["m0", "m3"]);
    for _ in 0..1000 {
        let phi: Formula = random_formula(&mut r, &shape, 8);
        let printed = phi.to_string();
        let back = parse_formula(&printed).map_err(|e| format!("{printed}: {e}"))?;
        if back != phi {
            return Err(format!("`{printed}` reparsed as {back:?}"));
        }
    }
    Ok("1000/1000 round-trip".to_string())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 worked example end to end", golden),
        ("2 classical correspondents", classical),
        ("3 success on random inductive inequalities", success_property),
        ("4 correspondence on random inequalities", soundness_property),
        ("5 rule-level soundness", rule_soundness),
        ("6 standard translation agrees with evaluation", translation),
        ("7 parser round-trip", round_trip),
    ];
    println!("acceptance (seed {:#x})", seed_from_env());
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
