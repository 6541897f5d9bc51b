//! Acceptance suite: one PASS/FAIL line per criterion, with timings.
//!
//! Runs as a plain binary (no libtest harness) so the report is always
//! printed by `cargo test`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relforge_core::decompose::{decompose_singular, Method};
use relforge_core::derived::derived_operator_system;
use relforge_core::format::parse_relation;
use relforge_core::impossibility::{default_target, impossibility_search_order2};
use relforge_core::laws::{check_laws, check_laws_exhaustive, LawConfig};
use relforge_core::operator::{cyclic_function_set, operator_instantiation_demo};
use relforge_core::ops::{add, extend_false};
use relforge_core::solver::{brute_solve, pipeline_solve_default};
use relforge_core::{
    decompose, DecomposeOptions, DoubleBranchesEquation, Monoid, Relation, SingularRelation, ValueSet,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn table(text: &str) -> Relation {
    parse_relation(text).expect("fixture table parses")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn enumeration() -> Outcome {
    let listed: Vec<Vec<[usize; 2]>> = vec![
        vec![],
        vec![[0, 0]],
        vec![[0, 1]],
        vec![[1, 0]],
        vec![[1, 1]],
        vec![[0, 0], [0, 1]],
        vec![[0, 0], [1, 0]],
        vec![[0, 0], [1, 1]],
        vec![[0, 1], [1, 0]],
        vec![[0, 1], [1, 1]],
        vec![[1, 0], [1, 1]],
        vec![[0, 0], [0, 1], [1, 0]],
        vec![[0, 0], [0, 1], [1, 1]],
        vec![[0, 0], [1, 0], [1, 1]],
        vec![[0, 1], [1, 0], [1, 1]],
        vec![[0, 0], [0, 1], [1, 0], [1, 1]],
    ];
    let mut all: Vec<Vec<Vec<usize>>> = Relation::enumerate(1, 2)
        .map_err(|e| e.to_string())?
        .map(|r| r.tuples())
        .collect();
    ensure(all.len() == 16, || format!("enumerated {} relations", all.len()))?;
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for (i, (got, want)) in all.iter().zip(&listed).enumerate() {
        let want: Vec<Vec<usize>> = want.iter().map(|t| t.to_vec()).collect();
        ensure(*got == want, || format!("R{} is {got:?}, expected {want:?}", i + 1))?;
    }
    Ok("16 relations in listed order".into())
}

fn worked_sum() -> Outcome {
    let m = Monoid::modular(3);
    let lhs = table("relation arity=2 order=3\n- - -\n0 1 2\n0*1 1*2 0*1*2\n");
    let rhs = table("relation arity=2 order=3\n- 1 0*1*2\n- 0 0*2\n- 0 1*2\n");
    let want = table("relation arity=2 order=3\n- - -\n- 1 1*2\n- 1*2 0*1*2\n");
    let got = add(&lhs, &rhs, &m).map_err(|e| e.to_string())?;
    ensure(got == want, || format!("sum differs:\n{got:?}"))?;
    Ok("9 cells exact".into())
}

fn dummy_extension() -> Outcome {
    let r = Relation::unary(vec![ValueSet::singleton(0), ValueSet::from_values([1, 2]), ValueSet::EMPTY])
        .map_err(|e| e.to_string())?;
    let f1 = extend_false(&r, 2, &[1]).map_err(|e| e.to_string())?;
    let f2 = extend_false(&r, 2, &[2]).map_err(|e| e.to_string())?;
    ensure(f1 == table("relation arity=2 order=3\n0 0 0\n1*2 1*2 1*2\n- - -\n"), || "first-variable table differs".into())?;
    ensure(f2 == table("relation arity=2 order=3\n0 1*2 -\n0 1*2 -\n0 1*2 -\n"), || "second-variable table differs".into())?;
    Ok("both tables exact".into())
}

fn law_suite() -> Outcome {
    let mut total = 0;
    let cfg = LawConfig { samples: 500, seed: 2024, ..LawConfig::default() };
    for arity in [1, 2] {
        let reports = check_laws(&Monoid::modular(3), &LawConfig { arity, ..cfg }).map_err(|e| e.to_string())?;
        for r in &reports {
            ensure(r.holds, || format!("order 3 arity {arity}: {r}"))?;
            total += r.cases;
        }
    }
    for m in [Monoid::modular(2), Monoid::saturating(1)] {
        for arity in [1, 2] {
            let reports = check_laws_exhaustive(&m, arity).map_err(|e| e.to_string())?;
            for r in &reports {
                ensure(r.holds, || format!("exhaustive order 2 arity {arity}: {r}"))?;
                total += r.cases;
            }
        }
    }
    Ok(format!("6 laws, {total} cases, 0 violations"))
}

fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let runs: [(usize, usize, usize, Method); 4] = [
        (3, 2, 1000, Method::Trivial),
        (4, 2, 250, Method::Trivial),
        (5, 2, 250, Method::Trivial),
        (3, 3, 100, Method::Nested),
    ];
    let mut done = 0;
    for (order, arity, count, method) in runs {
        let m = Monoid::modular(order);
        for i in 0..count {
            let density = rng.gen_range(0.1..0.9);
            let r = Relation::random(&mut rng, arity, order, density).map_err(|e| e.to_string())?;
            let d = decompose(&r, &m, DecomposeOptions::default()).map_err(|e| e.to_string())?;
            let back = d.expr.to_relation(arity, &m).map_err(|e| e.to_string())?;
            ensure(back == r, || format!("order {order} arity {arity} sample {i} does not round-trip"))?;
            ensure(d.term_count == order.pow(arity as u32), || format!("term count {}", d.term_count))?;
            ensure(d.method == method, || format!("method {:?} at order {order} arity {arity}", d.method))?;
            done += 1;
        }
    }
    Ok(format!("{done} relations, 0 failures"))
}

fn singular_formula() -> Outcome {
    let m = Monoid::modular(3);
    let s = SingularRelation::new(2, 3, vec![0, 0], ValueSet::singleton(1)).map_err(|e| e.to_string())?;
    let e = decompose_singular(&s, &m).map_err(|e| e.to_string())?;
    let got = e.to_table_notation();
    let want = "(0,0,1)[(1,0,0)(x1)+(1,0,0)(x2)]";
    ensure(got == want, || format!("got {got}"))?;
    Ok(got)
}

fn impossibility() -> Outcome {
    let rep = impossibility_search_order2(&Monoid::modular(2), &default_target(), 1).map_err(|e| e.to_string())?;
    ensure(rep.candidates == 4096, || format!("{} candidates", rep.candidates))?;
    ensure(rep.single_term_matches == 0, || format!("{} matches", rep.single_term_matches))?;
    Ok(format!("0 of 4096 single terms match ({} distinct tables)", rep.achievable[0]))
}

fn double_branches() -> Outcome {
    let m = Monoid::modular(3);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut exact_checks = 0;
    for t in 0..200 {
        let r1 = Relation::random_function(&mut rng, 2, 3).map_err(|e| e.to_string())?;
        let r2 = Relation::random_function(&mut rng, 2, 3).map_err(|e| e.to_string())?;
        let density = rng.gen_range(0.1..0.9);
        let r3 = Relation::random(&mut rng, 2, 3, density).map_err(|e| e.to_string())?;
        let eq = DoubleBranchesEquation::new(r1, r2, r3, 0, 0, 0).map_err(|e| e.to_string())?;
        let w = pipeline_solve_default(&eq, &m).map_err(|e| e.to_string())?.w.expect("pipeline keeps W");
        for p in w.points() {
            let e = eq.with_constants(p[0], p[1], p[2]).map_err(|e| e.to_string())?;
            let (brute, pipe) = (brute_solve(&e), w.eval(&p));
            ensure(brute == pipe, || format!("function triple {t} at {p:?}: brute {brute}, pipeline {pipe}"))?;
            exact_checks += 1;
        }
    }
    let (mut checks, mut strict) = (0usize, 0usize);
    for t in 0..200 {
        let rel = |rng: &mut ChaCha8Rng| {
            let density = rng.gen_range(0.1..0.9);
            Relation::random(rng, 2, 3, density).map_err(|e| e.to_string())
        };
        let (r1, r2, r3) = (rel(&mut rng)?, rel(&mut rng)?, rel(&mut rng)?);
        let eq = DoubleBranchesEquation::new(r1, r2, r3, 0, 0, 0).map_err(|e| e.to_string())?;
        let w = pipeline_solve_default(&eq, &m).map_err(|e| e.to_string())?.w.expect("pipeline keeps W");
        for p in w.points() {
            let e = eq.with_constants(p[0], p[1], p[2]).map_err(|e| e.to_string())?;
            let (brute, pipe) = (brute_solve(&e), w.eval(&p));
            ensure(brute.is_subset(pipe), || format!("unrestricted triple {t} at {p:?}: brute {brute} not in {pipe}"))?;
            checks += 1;
            strict += usize::from(brute != pipe);
        }
    }
    Ok(format!(
        "{exact_checks} exact checks; unrestricted {checks} checks, superset rate {:.1}%",
        100.0 * strict as f64 / checks as f64
    ))
}

fn solution_formula() -> Outcome {
    let m = Monoid::modular(3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let r1 = Relation::random_function(&mut rng, 2, 3).map_err(|e| e.to_string())?;
    let r2 = Relation::random_function(&mut rng, 2, 3).map_err(|e| e.to_string())?;
    let r3 = Relation::random(&mut rng, 2, 3, 0.5).map_err(|e| e.to_string())?;
    let eq = DoubleBranchesEquation::new(r1, r2, r3, 0, 0, 0).map_err(|e| e.to_string())?;
    let w = pipeline_solve_default(&eq, &m).map_err(|e| e.to_string())?.w.expect("pipeline keeps W");
    let d = decompose(&w, &m, DecomposeOptions::default()).map_err(|e| e.to_string())?;
    ensure(d.term_count == 27 && d.expr.term_count() == 27, || format!("{} terms", d.term_count))?;
    let back = d.expr.to_relation(3, &m).map_err(|e| e.to_string())?;
    ensure(back == w, || "formula does not tabulate to W".into())?;
    Ok("27 terms, tabulates to W".into())
}

fn operator_system() -> Outcome {
    let sys = derived_operator_system(&Monoid::modular(2)).map_err(|e| e.to_string())?;
    ensure(sys.monoid.order() == 16, || format!("{} elements", sys.monoid.order()))?;
    sys.monoid.verify().map_err(|e| e.to_string())?;
    let base = Monoid::modular(3);
    let funcs = cyclic_function_set();
    let derived = derived_operator_system(&base).map_err(|e| e.to_string())?;
    for f in &funcs {
        for g in &funcs {
            let s = add(f, g, &base).map_err(|e| e.to_string())?;
            ensure(funcs.contains(&s), || format!("{f:?} + {g:?} leaves the set"))?;
        }
    }
    let rep = operator_instantiation_demo(&base, &funcs, 50, 5).map_err(|e| e.to_string())?;
    ensure(rep.all_match(), || {
        format!("brute mismatches {}, pipeline mismatches {}", rep.brute_mismatches, rep.pipeline_mismatches)
    })?;
    Ok(format!(
        "16-element monoid verified; {}-element system; closed set isomorphic to base; {} equations, {} checks",
        derived.monoid.order(),
        rep.equations,
        rep.checks
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("enumeration", Duration::from_secs(1), enumeration),
        ("worked addition table", Duration::from_secs(1), worked_sum),
        ("dummy-extension tables", Duration::from_secs(1), dummy_extension),
        ("law suite", Duration::from_secs(60), law_suite),
        ("decomposition round-trip", Duration::from_secs(120), round_trips),
        ("singular formula", Duration::from_secs(1), singular_formula),
        ("order-2 impossibility", Duration::from_secs(5), impossibility),
        ("double-branches agreement", Duration::from_secs(120), double_branches),
        ("solution formula", Duration::from_secs(10), solution_formula),
        ("operator system", Duration::from_secs(10), operator_system),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= *limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; exceeded {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    let total = start.elapsed();
    if total <= Duration::from_secs(300) {
        println!("PASS 11 whole suite ({total:.2?}): under 5 minutes");
    } else {
        failed += 1;
        println!("FAIL 11 whole suite ({total:.2?}): over 5 minutes");
    }
    if failed == 0 {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
