//! Named verification suites, each a list of independent jobs producing reports.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use nabla_core::congruence::{builtin_family, closure, in_rst, in_rst_bounded, verify_family, verify_pair, FamilyKind};
use nabla_core::fincat::{
    check_double_category, check_equivalence, check_factorization_system, check_internal_presheaf, check_split_epis,
    quotient_left_cancellative, EquivalenceKind,
};
use nabla_core::multicat::{semidirect, FinMulticategory, GSymAction};
use nabla_core::operad::verify_axioms;
use nabla_core::operators::{
    fiber_functor, is_cocartesian, phi_tilde, presheaf_action, presheaf_action_untilde, reconstruct, roundtrip,
    std_cocart_lift, validate_operator_category, wreath_family, OperatorBase, OperatorCandidate,
};
use nabla_core::quotal::{build_quotal, e_category, g_double, recover_family, tilde_double, tilde_quotal, total_category, verify_pullback_squares};
use nabla_core::segal::{
    commutativity_check, grothendieck, interval_nerve, verify_agreement, verify_discrete_fibration, verify_equivariance,
    FinMonoid,
};
use nabla_core::{GroupOperad, IntervalMorphism, Report, Symmetric, Trivial};
use rayon::prelude::*;
use thiserror::Error;

use crate::defs::{parse_monoid, parse_multicat_upto, DefError, MulticatDef};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperadName {
    Symmetric,
    Trivial,
}

impl FromStr for OperadName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "symmetric" | "S" => Ok(OperadName::Symmetric),
            "trivial" => Ok(OperadName::Trivial),
            _ => Err(format!("unknown operad {s:?} (expected symmetric or trivial)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Crossed,
    Rst,
    Closure,
    Quotal,
    Homs,
    Double,
    Compare,
    Operator,
    Roundtrip,
    Segal,
    Agreement,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Crossed,
        Suite::Rst,
        Suite::Closure,
        Suite::Quotal,
        Suite::Homs,
        Suite::Double,
        Suite::Compare,
        Suite::Operator,
        Suite::Roundtrip,
        Suite::Segal,
        Suite::Agreement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Crossed => "crossed",
            Suite::Rst => "rst",
            Suite::Closure => "closure",
            Suite::Quotal => "quotal",
            Suite::Homs => "homs",
            Suite::Double => "double",
            Suite::Compare => "compare",
            Suite::Operator => "operator",
            Suite::Roundtrip => "roundtrip",
            Suite::Segal => "segal",
            Suite::Agreement => "agreement",
        }
    }

    fn needs_multicat(self) -> bool {
        matches!(self, Suite::Compare | Suite::Operator | Suite::Roundtrip)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite {s:?} (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub operad: OperadName,
    pub n_max: usize,
    pub multicat: Option<PathBuf>,
    pub monoid: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Definition(#[from] DefError),
}

type Job = Box<dyn Fn() -> Vec<Report> + Send + Sync>;

fn job(f: impl Fn() -> Vec<Report> + Send + Sync + 'static) -> Job {
    Box::new(f)
}

/// A construction error becomes a failed report under `id`.
fn or_fail<E: fmt::Display>(id: &str, level: usize, r: Result<Vec<Report>, E>) -> Vec<Report> {
    r.unwrap_or_else(|e| vec![Report::fail(id, level, 0, e.to_string())])
}

fn same(id: impl Into<String>, level: usize, ok: bool, what: impl FnOnce() -> String) -> Report {
    if ok {
        Report::pass(id, level, 1)
    } else {
        Report::fail(id, level, 1, what())
    }
}

/// Parse the files the suite needs, then run its jobs on the current rayon pool; reports come
/// back in job order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    let n = cfg.n_max;
    let jobs = match cfg.suite {
        Suite::Segal => {
            let path = cfg.monoid.as_ref().ok_or_else(|| SuiteError::Usage("the segal suite needs --monoid".into()))?;
            segal_jobs(parse_monoid(path)?, n)
        }
        Suite::Agreement => vec![job(move || vec![verify_agreement(AGREEMENT_ORDER, n)])],
        s if s.needs_multicat() => {
            let path = cfg.multicat.as_ref().ok_or_else(|| SuiteError::Usage(format!("the {s} suite needs --multicat")))?;
            let def = parse_multicat_upto(path, Some(n))?;
            let bound = def.multicat.arity_bound();
            if bound < n {
                return Err(SuiteError::Usage(format!("{} has arity bound {bound}, below --n-max {n}", path.display())));
            }
            match cfg.operad {
                OperadName::Symmetric => multicat_jobs(s, Arc::new(Symmetric::new(n)), &def, n)?,
                OperadName::Trivial => multicat_jobs(s, Arc::new(Trivial::new(n)), &def, n)?,
            }
        }
        s => match cfg.operad {
            OperadName::Symmetric => operad_jobs(s, Arc::new(Symmetric::new(operad_bound(s, n))), n),
            OperadName::Trivial => operad_jobs(s, Arc::new(Trivial::new(operad_bound(s, n))), n),
        },
    };
    Ok(jobs.par_iter().flat_map_iter(|j| j()).collect())
}

/// Monoids of every order up to this are compared in the agreement suite.
pub const AGREEMENT_ORDER: usize = 4;

fn operad_bound(suite: Suite, n: usize) -> usize {
    if suite == Suite::Rst {
        n + 1
    } else {
        n
    }
}

fn multicat_jobs<G: GroupOperad + 'static>(suite: Suite, g: Arc<G>, def: &MulticatDef, n: usize) -> Result<Vec<Job>, SuiteError> {
    let a = def.action(&g)?;
    let m = def.multicat.clone();
    Ok(match suite {
        Suite::Compare => compare_jobs(g, m, a, n),
        Suite::Operator => operator_jobs(g, m, a, n),
        _ => roundtrip_jobs(g, m, a, n),
    })
}

fn operad_jobs<G: GroupOperad + 'static>(suite: Suite, g: Arc<G>, n: usize) -> Vec<Job> {
    match suite {
        Suite::Crossed => vec![job(move || vec![verify_axioms(&*g, n)])],
        Suite::Rst => rst_jobs(g, n),
        Suite::Closure => closure_jobs(g, n),
        Suite::Quotal => quotal_jobs(g, n),
        Suite::Homs => homs_jobs(g, n),
        _ => double_jobs(g, n),
    }
}

fn rst_jobs<G: GroupOperad + 'static>(g: Arc<G>, n: usize) -> Vec<Job> {
    (0..=n)
        .map(|m| {
            let g = g.clone();
            job(move || {
                let mut checked = 0;
                let mut witness = None;
                'all: for k in 0..=n {
                    for phi in IntervalMorphism::enumerate(m, k) {
                        for x in g.elements(m) {
                            checked += 1;
                            if in_rst(&*g, &phi, x) != in_rst_bounded(&*g, &phi, x) {
                                witness = Some(format!("phi={phi} x={x}"));
                                break 'all;
                            }
                        }
                    }
                }
                let id = format!("rst-criterion-dom-{m}");
                vec![match witness {
                    None => Report::pass(id, n, checked),
                    Some(w) => Report::fail(id, n, checked, w),
                }]
            })
        })
        .collect()
}

const CLOSED_UNDER_BAR: [FamilyKind; 3] = [FamilyKind::Triv, FamilyKind::Dec, FamilyKind::Kec];

fn closure_jobs<G: GroupOperad + 'static>(g: Arc<G>, n: usize) -> Vec<Job> {
    let mut jobs: Vec<Job> = CLOSED_UNDER_BAR
        .into_iter()
        .map(|kind| {
            let g = g.clone();
            job(move || {
                let k = builtin_family(&*g, kind, n);
                let bar = closure(&*g, &k);
                let twice = closure(&*g, &bar);
                vec![
                    verify_family(&*g, &bar, n),
                    same(format!("closure-extensive-{}", kind.name()), n, k.is_subfamily_of(&bar), || "K is not inside its closure".into()),
                    same(format!("closure-idempotent-{}", kind.name()), n, twice.is_subfamily_of(&bar) && bar.is_subfamily_of(&twice), || {
                        "the closure moves under a second application".into()
                    }),
                ]
            })
        })
        .collect();
    let g1 = g.clone();
    jobs.push(job(move || {
        let all = [
            FamilyKind::Triv,
            FamilyKind::Dec,
            FamilyKind::Kec,
            FamilyKind::Inr,
            FamilyKind::DecBar,
            FamilyKind::KecBar,
            FamilyKind::RSt,
        ];
        let fams: Vec<_> = all.iter().map(|&k| builtin_family(&*g1, k, n)).collect();
        let bars: Vec<_> = fams.iter().map(|k| closure(&*g1, k)).collect();
        let mut checked = 0;
        for i in 0..fams.len() {
            for j in 0..fams.len() {
                if fams[i].is_subfamily_of(&fams[j]) {
                    checked += 1;
                    if !bars[i].is_subfamily_of(&bars[j]) {
                        return vec![Report::fail("closure-monotone", n, checked, format!("{} <= {}", all[i].name(), all[j].name()))];
                    }
                }
            }
        }
        vec![Report::pass("closure-monotone", n, checked)]
    }));
    jobs.push(job(move || {
        let inr = builtin_family(&*g, FamilyKind::Inr, n);
        let eq = |k: &nabla_core::congruence::CongruenceFamily<G::Elem>| k.is_subfamily_of(&inr) && inr.is_subfamily_of(k);
        let trivbar = closure(&*g, &builtin_family(&*g, FamilyKind::Triv, n));
        let kecbar = closure(&*g, &builtin_family(&*g, FamilyKind::Kec, n));
        vec![
            same("closure-triv-is-inr", n, eq(&trivbar), || "TrivBar differs from Inr".into()),
            same("kecbar-is-inr", n, eq(&kecbar), || "KecBar differs from Inr".into()),
        ]
    }));
    jobs
}

const QUOTAL_FAMILIES: [FamilyKind; 5] = [FamilyKind::Triv, FamilyKind::Inr, FamilyKind::DecBar, FamilyKind::KecBar, FamilyKind::RSt];

fn quotal_jobs<G: GroupOperad + 'static>(g: Arc<G>, n: usize) -> Vec<Job> {
    QUOTAL_FAMILIES
        .into_iter()
        .map(|kind| {
            let g = g.clone();
            job(move || {
                let id = format!("quotal-roundtrip-{}", kind.name());
                or_fail(&id, n, (|| {
                    let k = builtin_family(&*g, kind, n);
                    let q = build_quotal(&g, &k, n)?;
                    let total = total_category(&g, n);
                    let back = recover_family(&total, &q.projection(&total))?;
                    let ok = back.is_subfamily_of(&k) && k.is_subfamily_of(&back);
                    Ok::<_, nabla_core::quotal::QuotalError>(vec![same(id.clone(), n, ok, || "the recovered family differs".into())])
                })())
            })
        })
        .collect()
}

/// `|𝔼(2,1)|`, `|𝔼̃(2,1)|`, `|𝔼̃(1,1)|` as the criterion computes them.
pub fn hom_note(e: &nabla_core::fincat::FinCategory, te: &nabla_core::fincat::FinCategory) -> String {
    format!("E(2,1)={} tE(2,1)={} tE(1,1)={}", e.hom(2, 1).len(), te.hom(2, 1).len(), te.hom(1, 1).len())
}

fn homs_jobs<G: GroupOperad + 'static>(g: Arc<G>, n: usize) -> Vec<Job> {
    vec![job(move || {
        or_fail("tilde-criterion-E", n, (|| {
            let e = e_category(&g, n)?;
            let te = tilde_quotal(&e)?;
            let active = |f| e.is_active(f);
            let (generic, _) = quotient_left_cancellative(e.cat(), &active, "generic")?;
            let sizes = |c: &nabla_core::fincat::FinCategory| c.hom_sizes();
            let mut reports = vec![Report::pass("tilde-criterion-E", n, e.cat().morphism_count() as u64)];
            reports.push(same("tilde-generic-E", n, sizes(&te.cat) == sizes(&generic), || {
                "the finite criterion and the generic congruence give different hom sizes".into()
            }));
            if n >= 2 {
                reports.push(Report::pass("hom-counts-E", n, 3).with_note(hom_note(e.cat(), &te.cat)));
            }
            Ok::<_, nabla_core::quotal::QuotalError>(reports)
        })())
    })]
}

fn double_jobs<G: GroupOperad + 'static>(g: Arc<G>, n: usize) -> Vec<Job> {
    let g1 = g.clone();
    let g2 = g.clone();
    vec![
        job(move || {
            let k = builtin_family(&*g1, FamilyKind::DecBar, n);
            let l = builtin_family(&*g1, FamilyKind::KecBar, n);
            vec![verify_pair(&*g1, &k, &l, n)]
        }),
        job(move || {
            or_fail("double-G", n, (|| {
                let d = g_double(&g2, n)?;
                let td = tilde_double(&d)?;
                Ok::<_, nabla_core::quotal::QuotalError>(vec![
                    d.verify_representatives(),
                    check_double_category(&d.double, n),
                    check_double_category(&td.double, n),
                    verify_pullback_squares(&d),
                ])
            })())
        }),
        job(move || {
            or_fail("factorization-G", n, (|| {
                let d = g_double(&g, n)?;
                let up = d.upper();
                let inert = |f| d.payload(f).0.is_inert();
                let active = |f| d.payload(f).0.is_active();
                Ok::<_, nabla_core::quotal::QuotalError>(vec![
                    check_factorization_system(up, &inert, &active, "factorization-G", n),
                    check_split_epis(up, &inert, "inert-split-G", n),
                ])
            })())
        }),
    ]
}

fn compare_jobs<G: GroupOperad + 'static>(g: Arc<G>, m: Arc<FinMulticategory>, a: GSymAction<G>, n: usize) -> Vec<Job> {
    vec![job(move || {
        or_fail(&format!("phi-{}", m.name()), n, (|| {
            let base = OperatorBase::new(&g, n)?;
            let sd = semidirect(&m, &*g)?;
            let (src, tgt) = (wreath_family(&m, &base)?, wreath_family(&sd.cat, &base)?);
            let (phi, phit) = phi_tilde(&base, &src, &tgt, &sd)?;
            let p = presheaf_action(&base, &m, &a, &src, &tgt, &sd)?;
            let pu = presheaf_action_untilde(&base, &m, &a, &src, &tgt, &sd)?;
            Ok::<_, nabla_core::operators::OperatorError>(vec![
                phi.report,
                phit.report,
                check_internal_presheaf(&pu, &base.g.double, n),
                check_internal_presheaf(&p, &base.tilde.double, n),
            ])
        })())
    })]
}

fn operator_jobs<G: GroupOperad + 'static>(g: Arc<G>, m: Arc<FinMulticategory>, a: GSymAction<G>, n: usize) -> Vec<Job> {
    let g1 = g.clone();
    vec![
        job(move || {
            or_fail(&format!("operator-{}", m.name()), n, (|| {
                let base = OperatorBase::new(&g, n)?;
                let sd = semidirect(&m, &*g)?;
                let (src, tgt) = (wreath_family(&m, &base)?, wreath_family(&sd.cat, &base)?);
                let p = presheaf_action(&base, &m, &a, &src, &tgt, &sd)?;
                let cand = OperatorCandidate::wreath(&src.tilde_e, Some(p));
                let r = validate_operator_category(&cand, &base);
                let w = &src.tilde_e;
                let mut lifts = Vec::new();
                for o in w.cat.objects() {
                    let k = w.anchor.obj(o);
                    for j in 0..=n {
                        for &c in base.e_tilde().hom(k, j).iter().filter(|&&c| base.is_inert(c)) {
                            lifts.push(std_cocart_lift(w, &base, c, o)?);
                        }
                    }
                }
                let bad = lifts.iter().map(|&l| is_cocartesian(&w.cat, &w.anchor, l, n)).find(|r| !r.passed());
                let std_id = format!("std-lifts-{}", cand.name);
                let std = match bad {
                    None => Report::pass(std_id, n, lifts.len() as u64),
                    Some(b) => Report::fail(std_id, n, lifts.len() as u64, b.failure.unwrap_or_default()),
                }
                .with_note(format!("coCartesian up to level {n}"));
                let mut kinds = Vec::new();
                for k in 0..=n {
                    let f = fiber_functor(&cand, &base, &r.chosen, k).map_err(nabla_core::operators::OperatorError::Invalid)?;
                    kinds.push(check_equivalence(&f).1);
                }
                let iso = same(format!("fiber-iso-{}", cand.name), n, kinds.iter().all(|&k| k == EquivalenceKind::Isomorphism), || {
                    format!("fiber functors are {kinds:?}")
                });
                Ok::<_, nabla_core::operators::OperatorError>(vec![r.presheaf, r.lifts, std, r.pullbacks, r.segal, iso])
            })())
        }),
        job(move || {
            or_fail("operator-bases", n, (|| {
                let base = OperatorBase::new(&g1, n)?;
                Ok::<_, nabla_core::operators::OperatorError>(vec![
                    validate_operator_category(&OperatorCandidate::e_tilde(&base), &base).overall,
                    validate_operator_category(&OperatorCandidate::g_tilde(&base), &base).overall,
                ])
            })())
        }),
    ]
}

/// `M_C(X, …, X; X)` for the one object `X` over `⟨⟨1⟩⟩`, for each arity up to the level.
pub fn single_object_homs<G: GroupOperad + 'static>(cand: &OperatorCandidate, base: &OperatorBase<G>) -> Result<Vec<usize>, String> {
    let r = validate_operator_category(cand, base);
    if let Some(w) = r.overall.failure {
        return Err(w);
    }
    let rec = reconstruct(cand, base, &r.chosen).map_err(|e| e.to_string())?;
    if let Some(w) = rec.report.failure {
        return Err(w);
    }
    if rec.multicat.object_count() != 1 {
        return Err(format!("{} objects over 1", rec.multicat.object_count()));
    }
    Ok((0..=base.level()).map(|k| rec.multicat.hom(&vec![0; k], 0).len()).collect())
}

fn roundtrip_jobs<G: GroupOperad + 'static>(g: Arc<G>, m: Arc<FinMulticategory>, a: GSymAction<G>, n: usize) -> Vec<Job> {
    let g1 = g.clone();
    vec![
        job(move || {
            or_fail(&format!("roundtrip-{}", m.name()), n, (|| {
                let base = OperatorBase::new(&g, n)?;
                Ok::<_, nabla_core::operators::OperatorError>(vec![roundtrip(&m, &a, &base)?])
            })())
        }),
        job(move || {
            or_fail("reconstruct-bases", n, (|| {
                let base = OperatorBase::new(&g1, n)?;
                let orders: Vec<usize> = (0..=n).map(|k| g1.elements(k).len()).collect();
                let mut out = Vec::new();
                for (cand, want, id) in [
                    (OperatorCandidate::e_tilde(&base), vec![1; n + 1], "reconstruct-etilde"),
                    (OperatorCandidate::g_tilde(&base), orders.clone(), "reconstruct-gtilde"),
                ] {
                    out.push(match single_object_homs(&cand, &base) {
                        Ok(got) if got == want => Report::pass(id, n, got.len() as u64).with_note(format!("homs={got:?}")),
                        Ok(got) => Report::fail(id, n, got.len() as u64, format!("homs={got:?} expected {want:?}")),
                        Err(w) => Report::fail(id, n, 0, w),
                    });
                }
                Ok::<_, nabla_core::operators::OperatorError>(out)
            })())
        }),
    ]
}

fn segal_jobs(monoid: FinMonoid, n: usize) -> Vec<Job> {
    let m = Arc::new(monoid);
    let m1 = m.clone();
    vec![
        job(move || {
            let nerve = interval_nerve(&m1, n);
            vec![nerve.verify_functoriality(), verify_discrete_fibration(&grothendieck(&nerve)), verify_equivariance(&nerve)]
        }),
        job(move || {
            let c = commutativity_check(&m, n);
            let agree = same("commutativity-pairwise", n, c.commutative == c.pairwise, || {
                format!("fibration says {}, pairwise says {}", c.commutative, c.pairwise)
            });
            vec![c.report, agree]
        }),
    ]
}
