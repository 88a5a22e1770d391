//! Verification suites shared by the command-line front end and the
//! acceptance tests.
//!
//! Checks within a suite run on scoped threads; the report keeps the
//! declaration order, which is `(g, n)` lexicographic wherever a suite is
//! indexed by `(g, n)`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::airy::{self, AiryData};
use crate::deformation::{branch_coefficient, SpecialDeformation};
use crate::eo::{w_from_g, EoEngine, SpectralCurve};
use crate::exact::rational::{int, rat};
use crate::exact::{LaurentMulti, TPolynomial};
use crate::npoint::{closed_form_g, is_stable, structure_check, to_x_series, NPointBuilder};
use crate::virasoro::{
    closed_form, multisets_up_to, sequence_check, sequence_reference, CorrelatorTable,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ClosedForms,
    Main1,
    Bridge,
    Structure,
    SpecialDeformation,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = [
        "closed-forms",
        "main1",
        "bridge",
        "structure",
        "special-deformation",
        "all",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ClosedForms => "closed-forms",
            Suite::Main1 => "main1",
            Suite::Bridge => "bridge",
            Suite::Structure => "structure",
            Suite::SpecialDeformation => "special-deformation",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "closed-forms" => Suite::ClosedForms,
            "main1" => Suite::Main1,
            "bridge" => Suite::Bridge,
            "structure" => Suite::Structure,
            "special-deformation" => Suite::SpecialDeformation,
            "all" => Suite::All,
            other => {
                return Err(format!(
                    "unknown suite `{other}`; expected one of {}",
                    Suite::NAMES.join(", ")
                ))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub millis: u64,
    /// Summary on success; the first counterexample on failure.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{tag} {} ({} ms): {}\n",
                c.name, c.millis, c.detail
            ));
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        out.push_str(&format!(
            "{}: {passed}/{} checks passed\n",
            self.suite,
            self.checks.len()
        ));
        out
    }
}

type Outcome = std::result::Result<String, String>;

struct Check<'a> {
    name: String,
    run: Box<dyn Fn() -> Outcome + Send + Sync + 'a>,
}

fn check<'a, F: Fn() -> Outcome + Send + Sync + 'a>(name: impl Into<String>, f: F) -> Check<'a> {
    Check {
        name: name.into(),
        run: Box::new(f),
    }
}

fn run_checks(checks: Vec<Check<'_>>) -> Vec<CheckResult> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = checks
            .iter()
            .map(|c| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let out = (c.run)();
                    (out, start.elapsed().as_millis() as u64)
                })
            })
            .collect();
        checks
            .iter()
            .zip(handles)
            .map(|(c, h)| {
                let (out, millis) = h
                    .join()
                    .unwrap_or_else(|_| (Err("check panicked".into()), 0));
                let (pass, detail) = match out {
                    Ok(d) => (true, d),
                    Err(d) => (false, d),
                };
                CheckResult {
                    name: c.name.clone(),
                    pass,
                    millis,
                    detail,
                }
            })
            .collect()
    })
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Stable `(g, n)` with `2g - 2 + n <= max`, in lexicographic order.
pub fn stable_cases(max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for g in 0..=(max + 2) / 2 {
        for n in 1..=(max + 2) {
            if is_stable(g, n) && 2 * g + n <= max + 2 {
                out.push((g, n));
            }
        }
    }
    out
}

/// Shared engines, so that memo tables are reused across checks.
pub struct Context {
    pub table: CorrelatorTable,
    pub builder: NPointBuilder,
    pub even: EoEngine,
    pub airy: EoEngine,
}

impl Context {
    pub fn new() -> Self {
        Context {
            table: CorrelatorTable::new(),
            builder: NPointBuilder::new(),
            even: EoEngine::new(SpectralCurve::even_coupling())
                .expect("even-coupling curve is regular"),
            airy: EoEngine::new(SpectralCurve::airy()).expect("Airy curve is regular"),
        }
    }
}

impl Default for Context {
    fn default() -> Self {
        Self::new()
    }
}

fn compare_closed(table: &CorrelatorTable, g: usize, keys: &[Vec<u32>]) -> Outcome {
    for a in keys {
        let want = closed_form(g, a).ok_or_else(|| format!("no closed form for g={g}, a={a:?}"))?;
        let got = table.correlator(g, a).map_err(err)?;
        if got != want {
            return Err(format!(
                "g={g}, a={a:?}: recursion {got}, closed form {want}"
            ));
        }
    }
    Ok(format!("{} keys", keys.len()))
}

fn keys_of_len(bound: u32, len: usize) -> Vec<Vec<u32>> {
    multisets_up_to(bound)
        .into_iter()
        .filter(|a| a.len() == len)
        .collect()
}

fn closed_form_checks(ctx: &Context) -> Vec<Check<'_>> {
    let t = &ctx.table;
    let mut out = vec![
        check("one-point g=0, n<=12", move || {
            compare_closed(t, 0, &keys_of_len(12, 1))
        }),
        check("two-point g=0, m+n<=12", move || {
            compare_closed(t, 0, &keys_of_len(12, 2))
        }),
        check("three-point g=0, sum<=10", move || {
            compare_closed(t, 0, &keys_of_len(10, 3))
        }),
        check("four-point g=0, sum<=10", move || {
            compare_closed(t, 0, &keys_of_len(10, 4))
        }),
        check("one-point g=1, n<=10", move || {
            compare_closed(t, 1, &keys_of_len(10, 1))
        }),
    ];
    let literal: [(&str, &[i64]); 3] = [
        ("catalan", &[1, 2, 5, 14, 42, 132, 429]),
        ("A001791", &[1, 4, 15, 56, 210, 792]),
        ("A007946", &[2, 9, 36, 140, 540, 2079]),
    ];
    for (name, want) in literal {
        out.push(check(format!("sequence {name}"), move || {
            let got = sequence_check(t, name, want.len()).map_err(err)?;
            let reference = sequence_reference(name, want.len()).map_err(err)?;
            let want: Vec<_> = want.iter().map(|&v| num_bigint::BigInt::from(v)).collect();
            let show = |v: &[num_bigint::BigInt]| {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            if got != want || reference != want {
                return Err(format!(
                    "{name}: correlators {}, reference {}",
                    show(&got),
                    show(&reference)
                ));
            }
            Ok(show(&got))
        }));
    }
    out
}

/// `to_x_series(G_{g,n})` against the correlator table for `sum a_i <= bound`.
pub fn cross_pipeline(ctx: &Context, g: usize, n: usize, bound: u32) -> Outcome {
    let gf = ctx.builder.build_g(g, n).map_err(err)?;
    let series = to_x_series(&gf, bound).map_err(err)?;
    for (a, v) in &series {
        let want = ctx.table.correlator(g, a).map_err(err)?;
        if *v != want {
            return Err(format!("g={g}, a={a:?}: n-point {v}, Virasoro {want}"));
        }
    }
    Ok(format!("{} coefficients", series.len()))
}

/// Recursion output against `G_{g,n} dx_1 .. dx_n`.
pub fn main1_case(ctx: &Context, g: usize, n: usize) -> Outcome {
    let w = ctx.even.eo_omega(g, n).map_err(err)?;
    let v = w_from_g(&ctx.builder, g, n).map_err(err)?;
    if w != v {
        return Err(format!("({g},{n}): recursion {w}; from G: {v}"));
    }
    Ok(format!(
        "{} terms",
        w.laurent().map_or(0, LaurentMulti::len)
    ))
}

fn main1_checks(ctx: &Context, max: usize) -> Vec<Check<'_>> {
    let mut out = Vec::new();
    for (g, n) in stable_cases(max) {
        out.push(check(format!("x-series ({g},{n}), sum a<=8"), move || {
            cross_pipeline(ctx, g, n, 8)
        }));
    }
    for (g, n) in stable_cases(max) {
        out.push(check(format!("main1 ({g},{n})"), move || {
            main1_case(ctx, g, n)
        }));
    }
    out
}

fn bridge_checks(ctx: &Context) -> Vec<Check<'_>> {
    let mut out = vec![
        check("ladders k<=4", || {
            let d = AiryData::new(4).map_err(err)?;
            Ok(format!(
                "t_3 = {}, B_(0,0) = {}, t~_1 = {}",
                d.times[&3],
                d.b[&(0, 0)],
                d.ttilde[&1]
            ))
        }),
        check("zeta basis k<=4", || {
            airy::zeta_basis(4).map_err(err)?;
            Ok("closed, generating-function and Bergman forms agree".into())
        }),
        check("integration lemma n<=10", || {
            match (0..=10).find(|&n| !airy::lemma_holds(n)) {
                Some(n) => Err(format!("derivative identity fails at n={n}")),
                None => Ok("derivative identity holds".into()),
            }
        }),
    ];
    for (g, n) in [(0, 3), (0, 4), (1, 1)] {
        out.push(check(format!("template ({g},{n})"), move || {
            let tpl = airy::template_omega(g, n).map_err(err)?;
            let w = ctx.even.eo_omega(g, n).map_err(err)?;
            if tpl != w {
                return Err(format!("template {tpl}; recursion {w}"));
            }
            Ok(tpl.render())
        }));
    }
    out.push(check("psi consistency", move || {
        let w11 = ctx.even.value(1, 1).map_err(err)?;
        let w03 = ctx.even.value(0, 3).map_err(err)?;
        let r = airy::psi_consistency(&w11, &w03).map_err(err)?;
        let c1 = r
            .omega11
            .get(&vec![1])
            .map(|c| c.to_string())
            .unwrap_or_default();
        let c3 = r
            .omega03
            .get(&vec![0, 0, 0])
            .map(|c| c.to_string())
            .unwrap_or_default();
        let detail = format!("dzeta_1: {c1}, prod dzeta_0: {c3}");
        if r.pass() {
            Ok(detail)
        } else {
            Err(format!("{detail}; {r:?}"))
        }
    }));
    for (g, n, want) in [
        (0, 3, vec![(vec![0, 0, 0], int(1))]),
        (1, 1, vec![(vec![1], rat(1, 24))]),
    ] {
        out.push(check(format!("airy curve ({g},{n})"), move || {
            let w = ctx.airy.value(g, n).map_err(err)?;
            let got: Vec<_> = airy::airy_intersections(&w)
                .map_err(err)?
                .into_iter()
                .collect();
            if got != want {
                return Err(format!("read off {got:?} from {w}"));
            }
            Ok(format!("{w}"))
        }));
    }
    out
}

fn structure_checks(ctx: &Context, max: usize) -> Vec<Check<'_>> {
    let mut out = Vec::new();
    for (g, n) in [(0, 3), (0, 4), (1, 1)] {
        out.push(check(format!("closed form G({g},{n})"), move || {
            let want = closed_form_g(g, n).expect("fixture exists").map_err(err)?;
            let got = ctx.builder.build_g(g, n).map_err(err)?;
            if got.value != want {
                return Err(format!("built {got}"));
            }
            Ok(got.render())
        }));
    }
    for (g, n) in stable_cases(max) {
        out.push(check(format!("structure ({g},{n})"), move || {
            let r = structure_check(&ctx.builder.build_g(g, n).map_err(err)?);
            if !r.pass {
                return Err(r.offending.first().cloned().unwrap_or_default());
            }
            Ok(format!("basis {:?}", r.basis))
        }));
    }
    out.push(check("structure negative control", move || {
        let mut bad = ctx.builder.build_g(1, 1).map_err(err)?;
        bad.value = &bad.value + &LaurentMulti::var_pow(1, 0, -2);
        let r = structure_check(&bad);
        if r.pass {
            return Err("even exponent accepted".into());
        }
        Ok(format!("rejected: {}", r.offending.join("; ")))
    }));
    out
}

fn deformation_checks(ctx: &Context) -> Vec<Check<'_>> {
    let t = &ctx.table;
    vec![
        check("undeformed curve", || {
            let sol = SpecialDeformation::solve(3, 0, 8).map_err(err)?;
            for n in 0..8 {
                let got = sol.at_zero(n).map_err(err)?;
                if got != branch_coefficient(n + 2) {
                    return Err(format!("w_{n} = {got}"));
                }
            }
            Ok("w_n(0) match the branch expansion".into())
        }),
        check("one- and two-point, M=3 D=1", move || {
            let sol = SpecialDeformation::solve(3, 1, 6).map_err(err)?;
            for n in 1..=6u32 {
                let got = sol.at_zero(n as usize - 1).map_err(err)?;
                let want = t.correlator(0, &[n]).map_err(err)?;
                if got != want {
                    return Err(format!("w_{} at s=0: {got}, correlator {want}", n - 1));
                }
            }
            let mut count = 0;
            for m in 1..=3u32 {
                for n in 1..=(6 - m) {
                    let got = sol.linear_coeff(n as usize - 1, m as usize).map_err(err)?;
                    let want = t.correlator(0, &[m, n]).map_err(err)?;
                    if got != want {
                        return Err(format!(
                            "[s_{}] w_{}: {got}, correlator {want}",
                            2 * m,
                            n - 1
                        ));
                    }
                    count += 1;
                }
            }
            Ok(format!("6 one-point and {count} two-point values"))
        }),
        check("second order, M=2 D=2", move || {
            let sol = SpecialDeformation::solve(2, 2, 4).map_err(err)?;
            for n in 1..=4u32 {
                let c =
                    TPolynomial::from_scalar(&sol.w[n as usize - 1].coeff(&[2, 0])).map_err(err)?;
                let want = t.correlator(0, &[1, 1, n]).map_err(err)?;
                if c.scale(&int(2)) != want {
                    return Err(format!("[s_2^2] w_{}: {c}, correlator {want}", n - 1));
                }
            }
            Ok("matches three-point correlators".into())
        }),
    ]
}

/// Run a suite. `max` bounds `2g - 2 + n` in `main1` and `structure`.
pub fn run(suite: Suite, max: usize) -> SuiteReport {
    run_with(&Context::new(), suite, max)
}

pub fn run_with(ctx: &Context, suite: Suite, max: usize) -> SuiteReport {
    let checks = match suite {
        Suite::ClosedForms => closed_form_checks(ctx),
        Suite::Main1 => main1_checks(ctx, max),
        Suite::Bridge => bridge_checks(ctx),
        Suite::Structure => structure_checks(ctx, max),
        Suite::SpecialDeformation => deformation_checks(ctx),
        Suite::All => {
            let mut all = closed_form_checks(ctx);
            all.extend(main1_checks(ctx, max));
            all.extend(bridge_checks(ctx));
            all.extend(structure_checks(ctx, max));
            all.extend(deformation_checks(ctx));
            all
        }
    };
    SuiteReport {
        suite: suite.name().to_string(),
        checks: run_checks(checks),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_cases_by_level() {
        assert_eq!(stable_cases(1), vec![(0, 3), (1, 1)]);
        assert_eq!(
            stable_cases(3),
            vec![(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1)]
        );
    }

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn json_schema() {
        let r = SuiteReport {
            suite: "x".into(),
            checks: vec![CheckResult {
                name: "a".into(),
                pass: true,
                millis: 3,
                detail: "d".into(),
            }],
        };
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["suite"], "x");
        assert_eq!(v["checks"][0]["pass"], true);
        assert_eq!(v["checks"][0]["millis"], 3);
    }

    #[test]
    fn low_level_suites_pass() {
        let ctx = Context::new();
        for suite in [Suite::Main1, Suite::Structure] {
            let r = run_with(&ctx, suite, 1);
            assert!(r.pass(), "{}", r.to_text());
        }
    }
}
