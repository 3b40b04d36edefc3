//! Criteria 1 to 10, run in parallel and printed in order, one line each.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use nabla_core::fincat::quotient_left_cancellative;
use nabla_core::operad::{pullback, push};
use nabla_core::operators::{roundtrip, OperatorBase};
use nabla_core::quotal::{e_category, tilde_quotal};
use nabla_core::segal::{commutativity_check, verify_agreement, FinMonoid};
use nabla_core::{GroupOperad, IntervalMorphism, Report, Symmetric};
use nabla_ops::defs::parse_multicat_upto;
use nabla_ops::{parse_monoid, run_suite, OperadName, Suite, SuiteConfig};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn suite(suite: Suite, n_max: usize, multicat: Option<&str>) -> Result<Vec<Report>, String> {
    let cfg = SuiteConfig { suite, operad: OperadName::Symmetric, n_max, multicat: multicat.map(data), monoid: None };
    run_suite(&cfg).map_err(|e| e.to_string())
}

/// Every report passes; the detail names the first failure, otherwise counts the checks.
fn all_pass(reports: &[Report]) -> Result<String, String> {
    match reports.iter().find(|r| !r.passed()) {
        Some(r) => Err(r.to_string()),
        None => Ok(format!("{} checks", reports.len())),
    }
}

fn require(ids: &[&str], reports: &[Report]) -> Result<(), String> {
    for id in ids {
        if !reports.iter().any(|r| r.id == *id && r.passed()) {
            return Err(format!("{id} missing or failing"));
        }
    }
    Ok(())
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs()))
    } else {
        Ok(())
    }
}

/// `φ*(xy) = (φ^y)*(x) φ*(y)` and `(φψ)^x = φ^x ψ^{φ*(x)}`, quantified here directly.
fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let g = Symmetric::new(4);
    let mut checked = 0u64;
    for n in 0..=4 {
        for m in 0..=4 {
            for phi in IntervalMorphism::enumerate(m, n) {
                for x in g.elements(n) {
                    for y in g.elements(n) {
                        let lhs = pullback(&g, &phi, &g.mul(x, y));
                        let phi_y = push(&g, &phi, y).map_err(|e| e.to_string())?;
                        let rhs = g.mul(&pullback(&g, &phi_y, x), &pullback(&g, &phi, y));
                        checked += 1;
                        if lhs != rhs {
                            return Err(format!("first equation fails at phi={phi} x={x} y={y}"));
                        }
                    }
                    let phi_x = push(&g, &phi, x).map_err(|e| e.to_string())?;
                    let px = pullback(&g, &phi, x);
                    for l in 0..=4 {
                        for psi in IntervalMorphism::enumerate(l, m) {
                            let lhs = push(&g, &phi.after(&psi), x).map_err(|e| e.to_string())?;
                            let rhs = phi_x.after(&push(&g, &psi, &px).map_err(|e| e.to_string())?);
                            checked += 1;
                            if lhs != rhs {
                                return Err(format!("second equation fails at phi={phi} psi={psi} x={x}"));
                            }
                        }
                    }
                }
            }
        }
    }
    let axioms = nabla_core::operad::verify_axioms(&g, 4);
    if !axioms.passed() {
        return Err(axioms.to_string());
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("{checked} instances, library check {} instances", axioms.checked))
}

fn criterion_2() -> Result<String, String> {
    let r = suite(Suite::Rst, 3, None)?;
    let checked: u64 = r.iter().map(|r| r.checked).sum();
    all_pass(&r)?;
    Ok(format!("0 disagreements in {checked} pairs"))
}

fn criterion_3() -> Result<String, String> {
    let r = suite(Suite::Closure, 4, None)?;
    require(&["closure-monotone", "closure-triv-is-inr", "kecbar-is-inr"], &r)?;
    for k in ["Triv", "Dec", "Kec"] {
        require(&[&format!("closure-extensive-{k}"), &format!("closure-idempotent-{k}")], &r)?;
    }
    all_pass(&r)
}

fn criterion_4() -> Result<String, String> {
    let r = suite(Suite::Quotal, 4, None)?;
    for k in ["Triv", "Inr", "DecBar", "KecBar", "RSt"] {
        require(&[&format!("quotal-roundtrip-{k}")], &r)?;
    }
    all_pass(&r)
}

/// The frozen counts, against both the finite criterion and the generic congruence.
fn criterion_5() -> Result<String, String> {
    let g = Arc::new(Symmetric::new(2));
    let e = e_category(&g, 2).map_err(|e| e.to_string())?;
    let te = tilde_quotal(&e).map_err(|e| e.to_string())?;
    let active = |f| e.is_active(f);
    let (generic, _) = quotient_left_cancellative(e.cat(), &active, "generic").map_err(|e| e.to_string())?;
    let got = (e.cat().hom(2, 1).len(), te.cat.hom(2, 1).len(), te.cat.hom(1, 1).len());
    let oracle = (e.cat().hom(2, 1).len(), generic.hom(2, 1).len(), generic.hom(1, 1).len());
    if got != (10, 5, 2) || oracle != (10, 5, 2) {
        return Err(format!("criterion {got:?}, generic {oracle:?}, expected (10, 5, 2)"));
    }
    let r = suite(Suite::Homs, 3, None)?;
    all_pass(&r)?;
    Ok("E(2,1)=10 tE(2,1)=5 tE(1,1)=2".into())
}

fn criterion_6() -> Result<String, String> {
    let start = Instant::now();
    let r = suite(Suite::Double, 3, None)?;
    require(&["pair-DecBar-KecBar", "double-Q[KecBar|DecBar]", "double-tQ[KecBar|DecBar]", "pullback-squares-Q[KecBar|DecBar]"], &r)?;
    let out = all_pass(&r)?;
    within(Duration::from_secs(300), start)?;
    Ok(out)
}

fn criterion_7() -> Result<String, String> {
    let def = parse_multicat_upto(&data("two_object.json"), Some(3)).map_err(|e| e.to_string())?;
    let m = &def.multicat;
    let g = Arc::new(Symmetric::new(3));
    let a = def.action(&g).map_err(|e| e.to_string())?;
    let (f, gm) = (m.morphism_by_label("f").unwrap(), m.morphism_by_label("g").unwrap());
    let swap = g.elements(2)[1];
    if a.act(f, &swap) != gm || a.act(gm, &swap) != f {
        return Err("the sample's swap action does not exchange f and g".into());
    }
    let r = suite(Suite::Compare, 3, Some("two_object.json"))?;
    require(&["phi-two", "phi-tilde-two"], &r)?;
    all_pass(&r)
}

fn criterion_8() -> Result<String, String> {
    let r = suite(Suite::Operator, 3, Some("two_object.json"))?;
    require(&["std-lifts-twowrtE", "operator-pullbacks-twowrtE", "fiber-iso-twowrtE"], &r)?;
    all_pass(&r)
}

fn criterion_9() -> Result<String, String> {
    let g = Arc::new(Symmetric::new(3));
    let base = OperatorBase::new(&g, 3).map_err(|e| e.to_string())?;
    for file in ["terminal.json", "two_object.json", "involution.json"] {
        let def = parse_multicat_upto(&data(file), Some(3)).map_err(|e| e.to_string())?;
        let a = def.action(&g).map_err(|e| e.to_string())?;
        let r = roundtrip(&def.multicat, &a, &base).map_err(|e| e.to_string())?;
        if !r.passed() {
            return Err(r.to_string());
        }
    }
    let r = suite(Suite::Roundtrip, 3, Some("terminal.json"))?;
    let gt = r.iter().find(|r| r.id == "reconstruct-gtilde").ok_or("no reconstruct-gtilde report")?;
    if gt.note.as_deref() != Some("homs=[1, 1, 2, 6]") {
        return Err(format!("reconstruct(tG) homs: {gt}"));
    }
    all_pass(&r)?;
    Ok("terminal, two, involution round trip; tG homs 1, 1, 2, 6".into())
}

fn criterion_10() -> Result<String, String> {
    let start = Instant::now();
    let z2 = parse_monoid(&data("z2.json")).map_err(|e| e.to_string())?;
    let c = commutativity_check(&z2, 3);
    if !(c.commutative && c.report.note.as_deref() == Some("COMMUTATIVE")) {
        return Err(format!("Z/2: {}", c.report));
    }
    let lz = parse_monoid(&data("left_zero.json")).map_err(|e| e.to_string())?;
    if lz != FinMonoid::left_zero() {
        return Err("left_zero.json differs from the built-in left-zero monoid".into());
    }
    let c = commutativity_check(&lz, 3);
    if c.commutative || c.report.failure.as_deref() != Some("(a,b)") {
        return Err(format!("left zero: {}", c.report));
    }
    let agree = verify_agreement(4, 3);
    if !agree.passed() {
        return Err(agree.to_string());
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("Z/2 COMMUTATIVE, left zero witness (a,b), {} monoids agree", agree.checked))
}

fn main() -> ExitCode {
    let criteria: [fn() -> Result<String, String>; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let results: Vec<(Result<String, String>, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|c| {
                s.spawn(move || {
                    let start = Instant::now();
                    let r = std::panic::catch_unwind(c).unwrap_or_else(|_| Err("panicked".into()));
                    (r, start.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    });
    let mut failed = 0;
    for (i, (r, t)) in results.iter().enumerate() {
        let (verdict, detail) = match r {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2}: {verdict} ({:.1}s) {detail}", i + 1, t.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
