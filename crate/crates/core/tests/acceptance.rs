//! The ten acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria run concurrently over shared memo tables; lines are printed in
//! criterion order. Exit status is nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mmtr_core::airy::{self, AiryData};
use mmtr_core::report::{cross_pipeline, main1_case, run_with, stable_cases, Context, Suite};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Context) -> Outcome);

fn all_pass(ctx: &Context, suite: Suite, max: usize, keep: impl Fn(&str) -> bool) -> Outcome {
    let r = run_with(ctx, suite, max);
    let kept: Vec<_> = r.checks.iter().filter(|c| keep(&c.name)).collect();
    if kept.is_empty() {
        return Err("no checks selected".into());
    }
    match kept.iter().find(|c| !c.pass) {
        Some(c) => Err(format!("{}: {}", c.name, c.detail)),
        None => Ok(format!("{} checks", kept.len())),
    }
}

fn within(limit: Duration, start: Instant, out: Outcome) -> Outcome {
    let took = start.elapsed();
    let d = out?;
    if took > limit {
        return Err(format!("{d}, but took {took:.1?} (limit {limit:?})"));
    }
    Ok(format!("{d} in {took:.1?}"))
}

fn c1(ctx: &Context) -> Outcome {
    let start = Instant::now();
    let out = all_pass(ctx, Suite::ClosedForms, 0, |n| !n.starts_with("sequence"));
    within(Duration::from_secs(5), start, out)
}

fn c2(ctx: &Context) -> Outcome {
    all_pass(ctx, Suite::ClosedForms, 0, |n| n.starts_with("sequence"))
}

fn c3(ctx: &Context) -> Outcome {
    all_pass(ctx, Suite::Structure, 0, |n| n.starts_with("closed form"))
}

fn c4(ctx: &Context) -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for (g, n) in stable_cases(3) {
        cross_pipeline(ctx, g, n, 8)?;
        cases.push(format!("({g},{n})"));
    }
    within(Duration::from_secs(60), start, Ok(cases.join(" ")))
}

fn c5(ctx: &Context) -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for (g, n) in stable_cases(3) {
        main1_case(ctx, g, n)?;
        cases.push(format!("({g},{n})"));
    }
    within(Duration::from_secs(300), start, Ok(cases.join(" ")))
}

fn c6(ctx: &Context) -> Outcome {
    all_pass(ctx, Suite::Bridge, 0, |n| {
        n.starts_with("template") || n == "psi consistency"
    })
}

fn c7(ctx: &Context) -> Outcome {
    all_pass(ctx, Suite::Bridge, 0, |n| n.starts_with("airy curve"))
}

fn c8(ctx: &Context) -> Outcome {
    all_pass(ctx, Suite::Structure, 3, |n| n.starts_with("structure"))
}

fn c9(_: &Context) -> Outcome {
    let data = AiryData::new(4).map_err(|e| e.to_string())?;
    airy::zeta_basis(4).map_err(|e| e.to_string())?;
    if let Some(n) = (0..=10).find(|&n| !airy::lemma_holds(n)) {
        return Err(format!("lemma fails at n={n}"));
    }
    Ok(format!(
        "{} times, {} B, 5 zeta_k, lemma n<=10",
        data.times.len(),
        data.b.len()
    ))
}

fn c10(ctx: &Context) -> Outcome {
    all_pass(ctx, Suite::SpecialDeformation, 0, |n| {
        n.starts_with("one- and two-point")
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("closed-form correlators", c1),
        ("integer sequences", c2),
        ("n-point closed forms (0,3) (1,1) (0,4)", c3),
        ("n-point x-series vs Virasoro, level<=3", c4),
        ("recursion equals n-point differentials, level<=3", c5),
        ("intersection templates and psi read-off", c6),
        ("Airy curve control", c7),
        ("structure of G(g,n), level<=3", c8),
        ("ladder duality and integration lemma", c9),
        ("special deformation M=3 D=1", c10),
    ];
    let ctx = Context::new();
    let results: BTreeMap<usize, Outcome> = std::thread::scope(|s| {
        let hs: Vec<_> = criteria.iter().map(|(_, f)| s.spawn(|| f(&ctx))).collect();
        hs.into_iter()
            .enumerate()
            .map(|(i, h)| (i, h.join().unwrap_or_else(|_| Err("panicked".into()))))
            .collect()
    });
    let mut ok = true;
    for (i, out) in results {
        let (tag, detail) = match out {
            Ok(d) => ("PASS", d),
            Err(d) => {
                ok = false;
                ("FAIL", d)
            }
        };
        println!("{tag} [{:>2}] {}: {detail}", i + 1, criteria[i].0);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
