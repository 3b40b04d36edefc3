use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{OperatorBase, OperatorError, Variant, WreathCategory};
use crate::fincat::{
    check_equivalence, check_internal_presheaf, product, subcategory, EquivalenceKind, FinCategory, Functor, InternalPresheaf,
    MorId, ObjId,
};
use crate::operad::{act_word, GroupOperad};
use crate::report::{Report, Tally};

/// A category over `𝔼̃_𝒢`, optionally with an action of `𝔾̃_𝒢 ⇉ 𝔼̃_𝒢`.
#[derive(Clone)]
pub struct OperatorCandidate {
    pub name: String,
    pub carrier: Arc<FinCategory>,
    pub anchor: Functor,
    pub presheaf: Option<InternalPresheaf>,
}

impl OperatorCandidate {
    /// `𝔼̃_𝒢` over itself; `𝔾̃_𝒢` acts through `s̃`.
    pub fn e_tilde<G: GroupOperad + 'static>(base: &OperatorBase<G>) -> Self {
        let d = &base.tilde.double;
        let carrier = base.e_tilde().clone();
        let mut action = BTreeMap::new();
        for xi in carrier.morphisms() {
            for c in d.vertical.morphisms().filter(|&c| d.t.mor(c) == xi) {
                action.insert((xi, c), d.s.mor(c));
            }
        }
        let action_obj = carrier.objects().map(|o| ((o, o), o)).collect();
        let anchor = Functor::identity(&carrier);
        let name = String::from(carrier.name());
        let presheaf = InternalPresheaf { name: name.clone(), carrier: carrier.clone(), anchor: anchor.clone(), action, action_obj };
        OperatorCandidate { name, carrier, anchor, presheaf: Some(presheaf) }
    }

    /// `𝔾̃_𝒢` over `𝔼̃_𝒢` by `s̃`, acting on itself by vertical composition.
    pub fn g_tilde<G: GroupOperad + 'static>(base: &OperatorBase<G>) -> Self {
        let d = &base.tilde.double;
        let carrier = d.vertical.clone();
        let action = d.comp.clone();
        let action_obj = carrier.objects().map(|o| ((o, o), o)).collect();
        let name = String::from(carrier.name());
        let presheaf =
            InternalPresheaf { name: name.clone(), carrier: carrier.clone(), anchor: d.s.clone(), action, action_obj };
        OperatorCandidate { name, carrier, anchor: d.s.clone(), presheaf: Some(presheaf) }
    }

    pub fn wreath(w: &WreathCategory, presheaf: Option<InternalPresheaf>) -> Self {
        OperatorCandidate {
            name: String::from(w.cat.name()),
            carrier: w.cat.clone(),
            anchor: w.anchor.clone(),
            presheaf,
        }
    }

    /// The full subcategory on `objs`, with the restricted action. The action must fix objects.
    pub fn restrict(&self, objs: &[ObjId], name: impl Into<String>) -> Result<Self, OperatorError> {
        let name = name.into();
        let (sub, inc) = subcategory(&self.carrier, objs, &|_| true, name.clone())?;
        let anchor = inc.then(&self.anchor);
        let back: BTreeMap<MorId, MorId> = sub.morphisms().map(|m| (inc.mor(m), m)).collect();
        let presheaf = match &self.presheaf {
            None => None,
            Some(p) => {
                let mut action = BTreeMap::new();
                for (&(xi, c), &v) in &p.action {
                    if let (Some(&x), Some(&y)) = (back.get(&xi), back.get(&v)) {
                        action.insert((x, c), y);
                    }
                }
                let action_obj = p
                    .action_obj
                    .iter()
                    .filter_map(|(&(o, co), &z)| {
                        let (i, j) = (objs.iter().position(|&q| q == o)?, objs.iter().position(|&q| q == z)?);
                        Some(((i, co), j))
                    })
                    .collect();
                Some(InternalPresheaf { name: name.clone(), carrier: sub.clone(), anchor: anchor.clone(), action, action_obj })
            }
        };
        Ok(OperatorCandidate { name, carrier: sub, anchor, presheaf })
    }
}

/// The standard lift `[ρ; id, …, id; x]: a⃗ → a_{x⁻¹(δ(1))} … a_{x⁻¹(δ(n))}` of an inert
/// morphism of the base (`𝔼_𝒢` for `M ≀ 𝔼_𝒢`, `𝔼̃_𝒢` for `M ≀ 𝔼̃_𝒢`).
pub fn std_cocart_lift<G: GroupOperad + 'static>(
    w: &WreathCategory,
    base: &OperatorBase<G>,
    rho: MorId,
    dom: ObjId,
) -> Result<MorId, OperatorError> {
    let e = base.e();
    let rep = match w.variant {
        Variant::E => Some(rho),
        Variant::TildeE => e
            .cat()
            .morphisms()
            .find(|&f| base.tilde.lower.proj.mor(f) == rho && e.payload(f).0.is_inert()),
        _ => return Err(OperatorError::Invalid("lifts are taken in M≀𝔼 or M≀𝔼̃".into())),
    };
    let label = || String::from(w.anchor.target.label(rho));
    let rep = rep.ok_or_else(|| OperatorError::NotInert(label()))?;
    let (phi, x) = e.payload(rep);
    if !phi.is_inert() {
        return Err(OperatorError::NotInert(label()));
    }
    let a = w.word(dom);
    if a.len() != phi.dom() {
        return Err(OperatorError::Invalid(format!("{} does not start at {}", label(), w.cat.object_label(dom))));
    }
    let ax = act_word(&**base.operad(), &x, a).map_err(|e| OperatorError::Invalid(format!("{e}")))?;
    let ids: Vec<usize> = (1..=phi.cod()).map(|j| w.multicat.identity(ax[phi.fiber(j)[0] - 1])).collect();
    w.lookup(dom, rho, &ids).ok_or_else(|| OperatorError::Missing(format!("lift of {} along {}", label(), w.cat.object_label(dom))))
}

/// First failure of the coCartesian property of `m`, counting checks in `t`.
fn cocartesian_failure(c: &FinCategory, p: &Functor, m: MorId, t: &mut Tally) -> Result<(), String> {
    let base = &*p.target;
    let (x, y) = (c.dom(m), c.cod(m));
    let pm = p.mor(m);
    for z in c.objects() {
        let mut counts: BTreeMap<(MorId, MorId), usize> = BTreeMap::new();
        for &gp in c.hom(y, z) {
            *counts.entry((p.mor(gp), c.comp(gp, m))).or_default() += 1;
        }
        for &g in c.hom(x, z) {
            for &h in base.hom(p.obj(y), p.obj(z)) {
                if base.comp(h, pm) != p.mor(g) {
                    continue;
                }
                let n = counts.get(&(h, g)).copied().unwrap_or(0);
                t.check(n == 1, || {
                    format!("{} factors through {} over {} in {n} ways", c.label(g), c.label(m), base.label(h))
                })?;
            }
        }
    }
    Ok(())
}

/// Whether `m` is `p`-coCartesian, checked against every object of the truncated category.
pub fn is_cocartesian(c: &FinCategory, p: &Functor, m: MorId, level: usize) -> Report {
    let mut t = Tally::new();
    let res = cocartesian_failure(c, p, m, &mut t);
    t.report(&format!("cocartesian-{}", c.label(m)), level, res).with_note(format!("coCartesian up to level {level}"))
}

/// Chosen coCartesian lifts: for each inert morphism of the base and each object over its
/// source, the first coCartesian morphism over it.
#[derive(Clone, Debug, Default)]
pub struct Lifts {
    map: BTreeMap<(ObjId, MorId), MorId>,
}

impl Lifts {
    pub fn get(&self, x: ObjId, rho: MorId) -> Option<MorId> {
        self.map.get(&(x, rho)).copied()
    }
}

/// Every inert morphism has a coCartesian lift along every object over its source.
fn choose_lifts<G: GroupOperad + 'static>(
    cand: &OperatorCandidate,
    base: &OperatorBase<G>,
    t: &mut Tally,
) -> (Lifts, Result<(), String>) {
    let (c, p, e) = (&*cand.carrier, &cand.anchor, base.e_tilde());
    let mut lifts = Lifts::default();
    let mut res = Ok(());
    for rho in e.morphisms().filter(|&r| base.is_inert(r)) {
        for x in c.objects().filter(|&x| p.obj(x) == e.dom(rho)) {
            let found = c.objects().find_map(|y| {
                c.hom(x, y).iter().copied().find(|&m| p.mor(m) == rho && cocartesian_failure(c, p, m, &mut Tally::new()).is_ok())
            });
            match found {
                Some(m) => {
                    lifts.map.insert((x, rho), m);
                }
                None => {
                    if res.is_ok() {
                        res = Err(format!("{} has no coCartesian lift along {}", e.label(rho), c.object_label(x)));
                    }
                }
            }
            t.checked += 1;
        }
    }
    (lifts, res)
}

fn rho_lifts<G: GroupOperad + 'static>(
    lifts: &Lifts,
    base: &OperatorBase<G>,
    x: ObjId,
    n: usize,
) -> Result<Vec<MorId>, String> {
    (1..=n).map(|i| lifts.get(x, base.rho(n, i)).ok_or_else(|| format!("no chosen lift of rho_{i} at object {x}"))).collect()
}

/// The hom squares along the chosen `ρ̂_i` are pullbacks, for every `W` in the truncation.
fn check_pullback_squares<G: GroupOperad + 'static>(
    cand: &OperatorCandidate,
    base: &OperatorBase<G>,
    lifts: &Lifts,
    t: &mut Tally,
) -> Result<(), String> {
    let (c, p, e) = (&*cand.carrier, &cand.anchor, base.e_tilde());
    for x in c.objects() {
        let n = p.obj(x);
        let hats = rho_lifts(lifts, base, x, n)?;
        let rhos: Vec<MorId> = (1..=n).map(|i| base.rho(n, i)).collect();
        for w in c.objects() {
            let mut seen = BTreeMap::new();
            for &f in c.hom(w, x) {
                let key: (MorId, Vec<MorId>) = (p.mor(f), hats.iter().map(|&r| c.comp(r, f)).collect());
                t.check(seen.insert(key, f).is_none(), || {
                    format!("{} is not determined by its projections", c.label(f))
                })?;
            }
            let expected: usize = e
                .hom(p.obj(w), n)
                .iter()
                .map(|&h| {
                    hats.iter()
                        .zip(&rhos)
                        .map(|(&r, &rho)| {
                            let target = e.comp(rho, h);
                            c.hom(w, c.cod(r)).iter().filter(|&&g| p.mor(g) == target).count()
                        })
                        .product::<usize>()
                })
                .sum();
            t.check(seen.len() == expected, || {
                format!(
                    "hom({}, {}) has {} elements, the pullback {expected}",
                    c.object_label(w),
                    c.object_label(x),
                    seen.len()
                )
            })?;
        }
    }
    Ok(())
}

/// `((ρ₁)_!, …, (ρ_n)_!): C_n → C_1^n` built from the chosen lifts.
pub fn fiber_functor<G: GroupOperad + 'static>(
    cand: &OperatorCandidate,
    base: &OperatorBase<G>,
    lifts: &Lifts,
    n: usize,
) -> Result<Functor, String> {
    let (c, p) = (&cand.carrier, &cand.anchor);
    let err = |e: crate::fincat::CatError| format!("{e}");
    let over = |k: usize| -> Vec<ObjId> { c.objects().filter(|&o| p.obj(o) == k).collect() };
    let keep = |k: usize| move |m: MorId| p.mor(m) == base.id(k);
    let (fiber_n, inc_n) = subcategory(c, &over(n), &keep(n), format!("{}_{n}", cand.name)).map_err(err)?;
    let (fiber_1, inc_1) = subcategory(c, &over(1), &keep(1), format!("{}_1", cand.name)).map_err(err)?;
    let (prod, projections) = product(&alloc::vec![fiber_1.clone(); n], format!("{}_1^{n}", cand.name)).map_err(err)?;
    let obj_1: BTreeMap<ObjId, ObjId> = fiber_1.objects().map(|o| (inc_1.obj(o), o)).collect();
    let mor_1: BTreeMap<MorId, MorId> = fiber_1.morphisms().map(|m| (inc_1.mor(m), m)).collect();
    let prod_obj: BTreeMap<Vec<ObjId>, ObjId> =
        prod.objects().map(|o| (projections.iter().map(|q| q.obj(o)).collect(), o)).collect();
    let prod_mor: BTreeMap<Vec<MorId>, MorId> =
        prod.morphisms().map(|m| (projections.iter().map(|q| q.mor(m)).collect(), m)).collect();
    let mut obj_map = Vec::with_capacity(fiber_n.object_count());
    for o in fiber_n.objects() {
        let hats = rho_lifts(lifts, base, inc_n.obj(o), n)?;
        let t = hats.iter().map(|&r| obj_1.get(&c.cod(r)).copied().ok_or("lift leaves the fiber")).collect::<Result<Vec<_>, _>>()?;
        obj_map.push(prod_obj[&t]);
    }
    let mut mor_map = Vec::with_capacity(fiber_n.morphism_count());
    for m in fiber_n.morphisms() {
        let f = inc_n.mor(m);
        let (hx, hy) = (rho_lifts(lifts, base, c.dom(f), n)?, rho_lifts(lifts, base, c.cod(f), n)?);
        let mut t = Vec::with_capacity(n);
        for (&rx, &ry) in hx.iter().zip(&hy) {
            let target = c.comp(ry, f);
            let fi = c
                .hom(c.cod(rx), c.cod(ry))
                .iter()
                .copied()
                .find(|&g| p.mor(g) == base.id(1) && c.comp(g, rx) == target)
                .ok_or_else(|| format!("{} has no component along the lifts", c.label(f)))?;
            t.push(mor_1[&fi]);
        }
        mor_map.push(prod_mor[&t]);
    }
    Ok(Functor { source: fiber_n, target: prod, obj_map, mor_map })
}

/// The validation of a candidate, split by condition.
pub struct OperatorReport {
    pub lifts: Report,
    pub pullbacks: Report,
    pub segal: Report,
    pub presheaf: Report,
    pub overall: Report,
    pub chosen: Lifts,
}

/// Checks the presheaf axioms and conditions (i)–(iii) within the truncation.
pub fn validate_operator_category<G: GroupOperad + 'static>(cand: &OperatorCandidate, base: &OperatorBase<G>) -> OperatorReport {
    let level = base.level();
    let id = |what: &str| format!("operator-{what}-{}", cand.name);
    let presheaf = match &cand.presheaf {
        Some(p) => check_internal_presheaf(p, &base.tilde.double, level),
        None => Report::fail(id("presheaf"), level, 0, "no action of the vertical category"),
    };
    let mut t = Tally::new();
    let anchored = Arc::ptr_eq(&cand.anchor.target, base.e_tilde()) && Arc::ptr_eq(&cand.anchor.source, &cand.carrier);
    let (chosen, res) = if anchored {
        choose_lifts(cand, base, &mut t)
    } else {
        (Lifts::default(), Err(String::from("anchor does not run from the carrier to the base")))
    };
    let lifts = t.report(&id("lifts"), level, res.clone()).with_note(format!("coCartesian up to level {level}"));
    let mut t = Tally::new();
    let r = res.clone().and_then(|_| check_pullback_squares(cand, base, &chosen, &mut t));
    let pullbacks = t.report(&id("pullbacks"), level, r).with_note(format!("all W up to level {level}"));
    let mut t = Tally::new();
    let r = res.and_then(|_| {
        for n in 0..=level {
            let f = fiber_functor(cand, base, &chosen, n)?;
            let (rep, kind) = check_equivalence(&f);
            t.check(kind != EquivalenceKind::Neither, || {
                format!("fiber over {n}: {}", rep.failure.clone().unwrap_or_default())
            })?;
        }
        Ok(())
    });
    let segal = t.report(&id("segal"), level, r);
    let overall = Report::all(id("all"), level, &[presheaf.clone(), lifts.clone(), pullbacks.clone(), segal.clone()]);
    OperatorReport { lifts, pullbacks, segal, presheaf, overall, chosen }
}
