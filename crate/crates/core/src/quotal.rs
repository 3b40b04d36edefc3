//! Quotal categories `Q_K`, the double categories `Q_{L∥K} ⇉ Q_L`, and their quotients by the
//! congruence generated by active morphisms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::congruence::{builtin_family, verify_family, verify_pair, CongruenceFamily, FamilyKind};
use crate::fincat::{
    pullback, quotient_by_classes, signature_classes, validate_functor, CatError, CategoryBuilder, DoubleCategory,
    FinCategory, Functor, MorId, Rule,
};
use crate::interval::IntervalMorphism;
use crate::operad::{pullback as pb, push, GroupOperad};
use crate::report::{Report, Tally};

/// Categories up to this level get a composition table; larger ones compose on demand.
pub const TABLE_LEVEL: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QuotalError {
    #[error("family {0} fails verification: {1}")]
    Family(String, String),
    #[error("pair fails verification: {0}")]
    Pair(String),
    #[error(transparent)]
    Category(#[from] CatError),
    #[error("not quotal: {0}")]
    NotQuotal(String),
    #[error("criterion disagrees with the generic congruence: {0}")]
    Criterion(String),
    #[error("induced structure is not well defined: {0}")]
    Induced(String),
}

/// Minimal element of the right coset `H·x`.
pub fn coset_rep<G: GroupOperad>(g: &G, h: &[G::Elem], x: &G::Elem) -> G::Elem {
    h.iter().map(|k| g.mul(k, x)).min().expect("subgroups are nonempty")
}

fn coset_reps<G: GroupOperad>(g: &G, h: &[G::Elem], xs: &[G::Elem]) -> Vec<G::Elem> {
    let mut reps: Vec<G::Elem> = xs.iter().map(|x| coset_rep(g, h, x)).collect();
    reps.sort();
    reps.dedup();
    reps
}

fn require(r: Report, name: &str) -> Result<(), QuotalError> {
    match r.failure {
        None => Ok(()),
        Some(w) => Err(QuotalError::Family(name.into(), w)),
    }
}

type Payload<E> = (IntervalMorphism, E);

/// `(ψ,[y]) ∘ (φ,[x]) = (ψφ^y, [φ*(y)x])`, with the coset taken in `K`.
pub fn compose_payloads<G: GroupOperad>(
    g: &G,
    k: &CongruenceFamily<G::Elem>,
    second: &Payload<G::Elem>,
    first: &Payload<G::Elem>,
) -> Option<Payload<G::Elem>> {
    let ((psi, y), (phi, x)) = (second, first);
    let pushed = push(g, phi, y).ok()?;
    let chi = psi.after(&pushed);
    let z = g.mul(&pb(g, phi, y), x);
    Some((chi, coset_rep(g, k.members(&chi).ok()?, &z)))
}

/// The quotal category `Q_K` on `⟨⟨0⟩⟩, …, ⟨⟨N⟩⟩`; morphisms are `(φ, [x])` with `[x] ∈ K_φ\𝒢(m)`
/// named by the least element of the coset.
pub struct QuotalCategory<G: GroupOperad> {
    operad: Arc<G>,
    family: Arc<CongruenceFamily<G::Elem>>,
    level: usize,
    cat: Arc<FinCategory>,
    payloads: Arc<Vec<Payload<G::Elem>>>,
    index: Arc<BTreeMap<Payload<G::Elem>, MorId>>,
}

impl<G: GroupOperad> Clone for QuotalCategory<G> {
    fn clone(&self) -> Self {
        QuotalCategory {
            operad: self.operad.clone(),
            family: self.family.clone(),
            level: self.level,
            cat: self.cat.clone(),
            payloads: self.payloads.clone(),
            index: self.index.clone(),
        }
    }
}

/// `Q_K`, after verifying `K` on `∇≤level`.
pub fn build_quotal<G: GroupOperad + 'static>(
    g: &Arc<G>,
    k: &CongruenceFamily<G::Elem>,
    level: usize,
) -> Result<QuotalCategory<G>, QuotalError> {
    require(verify_family(&**g, k, level), k.name())?;
    Ok(build_quotal_unchecked(g, k, level)?)
}

/// `Q_K` without verifying the family.
pub fn build_quotal_unchecked<G: GroupOperad + 'static>(
    g: &Arc<G>,
    k: &CongruenceFamily<G::Elem>,
    level: usize,
) -> Result<QuotalCategory<G>, CatError> {
    let k = Arc::new(k.restrict(level));
    let mut b = CategoryBuilder::new(format!("Q[{}]", k.name()));
    for n in 0..=level {
        b.add_object(format!("<<{n}>>"));
    }
    let mut payloads = Vec::new();
    let mut index = BTreeMap::new();
    for m in 0..=level {
        for n in 0..=level {
            for phi in IntervalMorphism::enumerate(m, n) {
                for x in coset_reps(&**g, k.get(&phi), g.elements(m)) {
                    let id = b.add_morphism(m, n, format!("({phi},{x})"));
                    payloads.push((phi, x));
                    index.insert((phi, x), id);
                }
            }
        }
    }
    for n in 0..=level {
        let id = IntervalMorphism::identity(n);
        b.set_identity(n, index[&(id, coset_rep(&**g, k.get(&id), &g.unit(n)))]);
    }
    let (payloads, index) = (Arc::new(payloads), Arc::new(index));
    let rule = {
        let (g, k, payloads, index) = (g.clone(), k.clone(), payloads.clone(), index.clone());
        move |s: MorId, f: MorId| compose_payloads(&*g, &k, &payloads[s], &payloads[f]).and_then(|p| index.get(&p).copied())
    };
    let cat = if level <= TABLE_LEVEL { b.build_table(rule)? } else { b.build_rule(Arc::new(rule) as Rule)? };
    Ok(QuotalCategory { operad: g.clone(), family: k, level, cat: Arc::new(cat), payloads, index })
}

impl<G: GroupOperad + 'static> QuotalCategory<G> {
    pub fn operad(&self) -> &Arc<G> {
        &self.operad
    }

    pub fn family(&self) -> &CongruenceFamily<G::Elem> {
        &self.family
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn cat(&self) -> &Arc<FinCategory> {
        &self.cat
    }

    pub fn payload(&self, f: MorId) -> (IntervalMorphism, G::Elem) {
        self.payloads[f]
    }

    /// The morphism `(φ, [x])`.
    pub fn morphism(&self, phi: &IntervalMorphism, x: &G::Elem) -> Option<MorId> {
        let rep = coset_rep(&*self.operad, self.family.members(phi).ok()?, x);
        self.index.get(&(*phi, rep)).copied()
    }

    /// Whether the underlying interval morphism is active.
    pub fn is_active(&self, f: MorId) -> bool {
        self.payloads[f].0.is_active()
    }

    pub fn is_inert(&self, f: MorId) -> bool {
        self.payloads[f].0.is_inert()
    }

    /// The quotient functor from the total category `∇_𝒢` (which must be `Q_Triv` at the same level).
    pub fn projection(&self, total: &QuotalCategory<G>) -> Functor {
        assert_eq!(total.level, self.level, "levels differ");
        Functor {
            source: total.cat.clone(),
            target: self.cat.clone(),
            obj_map: total.cat.objects().collect(),
            mor_map: total.payloads.iter().map(|(phi, x)| self.morphism(phi, x).expect("same level")).collect(),
        }
    }

    /// The functor `Q_K → Q_K'` for `K ⊆ K'`.
    pub fn order_functor(&self, other: &QuotalCategory<G>) -> Result<Functor, QuotalError> {
        if !self.family.is_subfamily_of(&other.family) {
            return Err(QuotalError::NotQuotal(format!("{} is not contained in {}", self.family.name(), other.family.name())));
        }
        Ok(Functor {
            source: self.cat.clone(),
            target: other.cat.clone(),
            obj_map: self.cat.objects().collect(),
            mor_map: self.payloads.iter().map(|(phi, x)| other.morphism(phi, x).expect("same level")).collect(),
        })
    }

    /// Composition does not depend on the chosen coset representatives.
    pub fn verify_representatives(&self) -> Report {
        let (g, c) = (&*self.operad, &*self.cat);
        let mut t = Tally::new();
        let res = (|| {
            for f in c.morphisms() {
                let (phi, x) = self.payloads[f];
                for o in c.objects() {
                    for &s in c.hom(c.cod(f), o) {
                        let (psi, y) = self.payloads[s];
                        let expected = self.payloads[c.comp(s, f)];
                        for kx in self.family.get(&phi) {
                            let r = compose_payloads(g, &self.family, &(psi, y), &(phi, g.mul(kx, &x)));
                            t.check(r == Some(expected), || format!("{} ∘ {} depends on the representative of x", c.label(s), c.label(f)))?;
                        }
                        for ky in self.family.get(&psi) {
                            let r = compose_payloads(g, &self.family, &(psi, g.mul(ky, &y)), &(phi, x));
                            t.check(r == Some(expected), || format!("{} ∘ {} depends on the representative of y", c.label(s), c.label(f)))?;
                        }
                    }
                }
            }
            Ok(())
        })();
        t.report(&format!("representatives-{}", c.name()), self.level, res)
    }
}

/// `K^Q_φ = {x : q(φ, x) = q(φ, e)}` for a functor `q` out of the total category, after checking
/// that `q` is full, bijective on objects, and only identifies morphisms over the same `φ`.
pub fn recover_family<G: GroupOperad + 'static>(
    total: &QuotalCategory<G>,
    q: &Functor,
) -> Result<CongruenceFamily<G::Elem>, QuotalError> {
    let g = &*total.operad;
    let (src, tgt) = (&*q.source, &*q.target);
    if !Arc::ptr_eq(&q.source, &total.cat) {
        return Err(QuotalError::NotQuotal("functor does not start at the total category".into()));
    }
    if total.payloads.iter().any(|(phi, x)| total.family.get(phi).len() != 1 || total.family.get(phi)[0] != g.unit(x_arity(g, x))) {
        return Err(QuotalError::NotQuotal("source is not the total category".into()));
    }
    let mut objs = q.obj_map.clone();
    objs.sort_unstable();
    objs.dedup();
    if objs.len() != src.object_count() || objs.len() != tgt.object_count() {
        return Err(QuotalError::NotQuotal("not bijective on objects".into()));
    }
    let mut over: BTreeMap<MorId, IntervalMorphism> = BTreeMap::new();
    for f in src.morphisms() {
        let phi = total.payloads[f].0;
        if let Some(prev) = over.insert(q.mor(f), phi) {
            if prev != phi {
                return Err(QuotalError::NotQuotal(format!("{} identifies morphisms over {prev} and {phi}", tgt.label(q.mor(f)))));
            }
        }
    }
    if over.len() != tgt.morphism_count() {
        return Err(QuotalError::NotQuotal("not full".into()));
    }
    Ok(CongruenceFamily::from_fn(format!("K[{}]", tgt.name()), total.level, |phi| {
        let m = phi.dom();
        let base = q.mor(total.index[&(*phi, g.unit(m))]);
        g.elements(m).iter().copied().filter(|x| q.mor(total.index[&(*phi, *x)]) == base).collect()
    }))
}

fn x_arity<G: GroupOperad>(g: &G, x: &G::Elem) -> usize {
    g.arity(x)
}

/// `∇_𝒢 = Q_Triv`.
pub fn total_category<G: GroupOperad + 'static>(g: &Arc<G>, level: usize) -> QuotalCategory<G> {
    build_quotal_unchecked(g, &builtin_family(&**g, FamilyKind::Triv, level), level).expect("total category")
}

type Triple<E> = (IntervalMorphism, E, E);

/// `Q_{L∥K}` with `s, t: Q_{L∥K} ⇉ Q_L`; morphisms `(φ, [u], [x])`, `[u] ∈ Inr_φ\K_φ`, `[x] ∈ L_φ\𝒢(m)`.
pub struct DoubleQuotal<G: GroupOperad> {
    operad: Arc<G>,
    k: Arc<CongruenceFamily<G::Elem>>,
    l: Arc<CongruenceFamily<G::Elem>>,
    inr: Arc<CongruenceFamily<G::Elem>>,
    level: usize,
    pub lower: QuotalCategory<G>,
    payloads: Vec<Triple<G::Elem>>,
    index: BTreeMap<Triple<G::Elem>, MorId>,
    pub double: DoubleCategory,
}

/// `(ψ,[v],[y]) ∘ (φ,[u],[x]) = (ψφ^y, [φ*(vy) u φ*(y)⁻¹], [φ*(y)x])`.
fn compose_triples<G: GroupOperad>(
    g: &G,
    inr: &CongruenceFamily<G::Elem>,
    l: &CongruenceFamily<G::Elem>,
    second: &Triple<G::Elem>,
    first: &Triple<G::Elem>,
) -> Option<Triple<G::Elem>> {
    let ((psi, v, y), (phi, u, x)) = (second, first);
    let chi = psi.after(&push(g, phi, y).ok()?);
    let py = pb(g, phi, y);
    let w = g.mul(&g.mul(&pb(g, phi, &g.mul(v, y)), u), &g.inv(&py));
    let z = g.mul(&py, x);
    Some((chi, coset_rep(g, inr.members(&chi).ok()?, &w), coset_rep(g, l.members(&chi).ok()?, &z)))
}

/// `Q_{L∥K} ⇉ Q_L`, after verifying both families and the pair conditions.
pub fn build_double<G: GroupOperad + 'static>(
    g: &Arc<G>,
    k: &CongruenceFamily<G::Elem>,
    l: &CongruenceFamily<G::Elem>,
    level: usize,
) -> Result<DoubleQuotal<G>, QuotalError> {
    require(verify_family(&**g, k, level), k.name())?;
    require(verify_family(&**g, l, level), l.name())?;
    let pair = verify_pair(&**g, k, l, level);
    if let Some(w) = pair.failure {
        return Err(QuotalError::Pair(w));
    }
    let lower = build_quotal_unchecked(g, l, level)?;
    let (k, l) = (Arc::new(k.restrict(level)), Arc::new(l.restrict(level)));
    let inr = Arc::new(builtin_family(&**g, FamilyKind::Inr, level));
    let gg = &**g;
    let mut b = CategoryBuilder::new(format!("Q[{}|{}]", l.name(), k.name()));
    for n in 0..=level {
        b.add_object(format!("<<{n}>>"));
    }
    let mut payloads = Vec::new();
    let mut index = BTreeMap::new();
    for m in 0..=level {
        for n in 0..=level {
            for phi in IntervalMorphism::enumerate(m, n) {
                let us = coset_reps(gg, inr.get(&phi), k.get(&phi));
                let xs = coset_reps(gg, l.get(&phi), g.elements(m));
                for u in &us {
                    for x in &xs {
                        let id = b.add_morphism(m, n, format!("({phi},{u},{x})"));
                        payloads.push((phi, *u, *x));
                        index.insert((phi, *u, *x), id);
                    }
                }
            }
        }
    }
    let unit_of = |phi: &IntervalMorphism, x: &G::Elem| -> (IntervalMorphism, G::Elem, G::Elem) {
        (*phi, coset_rep(gg, inr.get(phi), &gg.unit(phi.dom())), coset_rep(gg, l.get(phi), x))
    };
    for n in 0..=level {
        let id = IntervalMorphism::identity(n);
        b.set_identity(n, index[&unit_of(&id, &gg.unit(n))]);
    }
    let upper = Arc::new(b.build_table(|s, f| {
        compose_triples(gg, &inr, &l, &payloads[s], &payloads[f]).and_then(|p| index.get(&p).copied())
    })?);
    let lower_cat = lower.cat.clone();
    let s_map: Vec<MorId> = payloads.iter().map(|(phi, _, x)| lower.morphism(phi, x).expect("in range")).collect();
    let t_map: Vec<MorId> =
        payloads.iter().map(|(phi, u, x)| lower.morphism(phi, &gg.mul(u, x)).expect("in range")).collect();
    let objects: Vec<usize> = (0..=level).collect();
    let s = Functor { source: upper.clone(), target: lower_cat.clone(), obj_map: objects.clone(), mor_map: s_map };
    let t = Functor { source: upper.clone(), target: lower_cat.clone(), obj_map: objects.clone(), mor_map: t_map };
    let unit = Functor {
        source: lower_cat.clone(),
        target: upper.clone(),
        obj_map: objects.clone(),
        mor_map: lower.payloads.iter().map(|(phi, x)| index[&unit_of(phi, x)]).collect(),
    };
    let mut by_s: BTreeMap<MorId, Vec<MorId>> = BTreeMap::new();
    for a in upper.morphisms() {
        by_s.entry(s.mor(a)).or_default().push(a);
    }
    let mut comp = BTreeMap::new();
    for beta in upper.morphisms() {
        let (phi, u1, x) = payloads[beta];
        for &alpha in by_s.get(&t.mor(beta)).map(Vec::as_slice).unwrap_or(&[]) {
            let (_, u2, _) = payloads[alpha];
            let key = (phi, coset_rep(gg, inr.get(&phi), &gg.mul(&u2, &u1)), x);
            comp.insert((alpha, beta), index[&key]);
        }
    }
    let double = DoubleCategory {
        name: String::from(upper.name()),
        vertical: upper.clone(),
        base: lower_cat,
        s,
        t,
        unit,
        comp,
        comp_obj: objects.iter().map(|&o| ((o, o), o)).collect(),
    };
    Ok(DoubleQuotal { operad: g.clone(), k, l, inr, level, lower, payloads, index, double })
}

impl<G: GroupOperad + 'static> DoubleQuotal<G> {
    pub fn upper(&self) -> &Arc<FinCategory> {
        &self.double.vertical
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn k(&self) -> &CongruenceFamily<G::Elem> {
        &self.k
    }

    pub fn l(&self) -> &CongruenceFamily<G::Elem> {
        &self.l
    }

    pub fn payload(&self, f: MorId) -> (IntervalMorphism, G::Elem, G::Elem) {
        self.payloads[f]
    }

    /// The morphism `(φ, [u], [x])`.
    pub fn morphism(&self, phi: &IntervalMorphism, u: &G::Elem, x: &G::Elem) -> Option<MorId> {
        let g = &*self.operad;
        let key = (*phi, coset_rep(g, self.inr.members(phi).ok()?, u), coset_rep(g, self.l.members(phi).ok()?, x));
        self.index.get(&key).copied()
    }

    /// Composition does not depend on any of the four representatives.
    pub fn verify_representatives(&self) -> Report {
        let (g, c) = (&*self.operad, &**self.upper());
        let mut t = Tally::new();
        let res = (|| {
            for f in c.morphisms() {
                let (phi, u, x) = self.payloads[f];
                for o in c.objects() {
                    for &s in c.hom(c.cod(f), o) {
                        let (psi, v, y) = self.payloads[s];
                        let expected = Some(self.payloads[c.comp(s, f)]);
                        let mut variants = Vec::new();
                        for a in self.inr.get(&phi) {
                            variants.push(((psi, v, y), (phi, g.mul(a, &u), x)));
                        }
                        for a in self.l.get(&phi) {
                            variants.push(((psi, v, y), (phi, u, g.mul(a, &x))));
                        }
                        for a in self.inr.get(&psi) {
                            variants.push(((psi, g.mul(a, &v), y), (phi, u, x)));
                        }
                        for a in self.l.get(&psi) {
                            variants.push(((psi, v, g.mul(a, &y)), (phi, u, x)));
                        }
                        for (second, first) in variants {
                            t.check(compose_triples(g, &self.inr, &self.l, &second, &first) == expected, || {
                                format!("{} ∘ {} depends on representatives", c.label(s), c.label(f))
                            })?;
                        }
                    }
                }
            }
            Ok(())
        })();
        t.report(&format!("representatives-{}", c.name()), self.level, res)
    }

    /// The three conditions of the finite criterion for `∼_A`, tested at `ψ`.
    fn criterion_at(&self, psi: &IntervalMorphism, a: &Triple<G::Elem>, b: &Triple<G::Elem>) -> bool {
        criterion_at(&*self.operad, &self.l, &self.inr, psi, a, b)
    }

    /// `a ∼_A b` by testing only `ψ = δ^{x⁻¹}` and `ψ = δ'^{x'⁻¹}`.
    pub fn icong_equivalent(&self, a: MorId, b: MorId) -> bool {
        let (pa, pb_) = (self.payloads[a], self.payloads[b]);
        test_morphisms(&*self.operad, &pa, &pb_).iter().all(|psi| self.criterion_at(psi, &pa, &pb_))
    }
}

fn test_morphisms<G: GroupOperad>(g: &G, a: &Triple<G::Elem>, b: &Triple<G::Elem>) -> [IntervalMorphism; 2] {
    let t = |(phi, _, x): &Triple<G::Elem>| push(g, &phi.factorize().delta, &g.inv(x)).expect("crossed action");
    [t(a), t(b)]
}

fn criterion_at<G: GroupOperad>(
    g: &G,
    l: &CongruenceFamily<G::Elem>,
    inr: &CongruenceFamily<G::Elem>,
    psi: &IntervalMorphism,
    (phi, u, x): &Triple<G::Elem>,
    (phi2, u2, x2): &Triple<G::Elem>,
) -> bool {
    let (pa, pb_) = (push(g, psi, x).expect("crossed action"), push(g, psi, x2).expect("crossed action"));
    let (ca, cb) = (phi.after(&pa), phi2.after(&pb_));
    if !ca.is_active() && !cb.is_active() {
        return true;
    }
    if ca != cb {
        return false;
    }
    let (lc, ic) = (l.get(&ca), inr.get(&ca));
    coset_rep(g, lc, &pb(g, psi, x)) == coset_rep(g, lc, &pb(g, psi, x2))
        && coset_rep(g, ic, &pb(g, &pa, u)) == coset_rep(g, ic, &pb(g, &pb_, u2))
}

/// Classes of an equivalence given pairwise, comparing each morphism with the first member of
/// every class found so far in its hom-set.
fn classes_by(c: &FinCategory, equiv: impl Fn(MorId, MorId) -> bool) -> Vec<usize> {
    let mut class = alloc::vec![0usize; c.morphism_count()];
    let mut next = 0;
    for a in c.objects() {
        for b in c.objects() {
            let mut reps: Vec<MorId> = Vec::new();
            for &f in c.hom(a, b) {
                match reps.iter().find(|&&r| equiv(r, f)) {
                    Some(&r) => class[f] = class[r],
                    None => {
                        reps.push(f);
                        class[f] = next;
                        next += 1;
                    }
                }
            }
        }
    }
    class
}

/// First pair on which two partitions disagree.
pub fn partition_disagreement(a: &[usize], b: &[usize]) -> Option<(MorId, MorId)> {
    let mut ab: BTreeMap<usize, usize> = BTreeMap::new();
    let mut ba: BTreeMap<usize, usize> = BTreeMap::new();
    let mut first_a: BTreeMap<usize, MorId> = BTreeMap::new();
    let mut first_b: BTreeMap<usize, MorId> = BTreeMap::new();
    for f in 0..a.len() {
        let fa = *first_a.entry(a[f]).or_insert(f);
        let fb = *first_b.entry(b[f]).or_insert(f);
        if *ab.entry(a[f]).or_insert(b[f]) != b[f] {
            return Some((fa, f));
        }
        if *ba.entry(b[f]).or_insert(a[f]) != a[f] {
            return Some((fb, f));
        }
    }
    None
}

/// A quotient `X → X̃` with its class assignment.
#[derive(Clone, Debug)]
pub struct Tilde {
    pub cat: Arc<FinCategory>,
    pub proj: Functor,
    pub classes: Vec<usize>,
}

fn finish_tilde(c: &Arc<FinCategory>, classes: Vec<usize>, active: &dyn Fn(MorId) -> bool) -> Result<Tilde, QuotalError> {
    let generic = signature_classes(c, active);
    if let Some((f, h)) = partition_disagreement(&classes, &generic) {
        return Err(QuotalError::Criterion(format!("{} and {}", c.label(f), c.label(h))));
    }
    let (cat, proj) = quotient_by_classes(c, &classes, format!("t{}", c.name()))?;
    Ok(Tilde { cat, proj, classes })
}

/// `Q̃_L` via the finite criterion, cross-checked against the generic truncated congruence.
pub fn tilde_quotal<G: GroupOperad + 'static>(q: &QuotalCategory<G>) -> Result<Tilde, QuotalError> {
    let g = &*q.operad;
    let inr = builtin_family(g, FamilyKind::Inr, q.level);
    let triple = |f: MorId| {
        let (phi, x) = q.payloads[f];
        (phi, g.unit(phi.dom()), x)
    };
    let classes = classes_by(&q.cat, |a, b| {
        let (ta, tb) = (triple(a), triple(b));
        test_morphisms(g, &ta, &tb).iter().all(|psi| criterion_at(g, &q.family, &inr, psi, &ta, &tb))
    });
    finish_tilde(&q.cat, classes, &|f| q.is_active(f))
}

/// `Q̃_{L∥K}` via the finite criterion, cross-checked against the generic truncated congruence.
pub fn tilde_upper<G: GroupOperad + 'static>(d: &DoubleQuotal<G>) -> Result<Tilde, QuotalError> {
    let classes = classes_by(d.upper(), |a, b| d.icong_equivalent(a, b));
    finish_tilde(d.upper(), classes, &|f| d.payloads[f].0.is_active())
}

/// `Q̃_{L∥K} ⇉ Q̃_L` with the structure induced from `Q_{L∥K} ⇉ Q_L`.
#[derive(Clone, Debug)]
pub struct TildeDouble {
    pub upper: Tilde,
    pub lower: Tilde,
    pub double: DoubleCategory,
}

fn induce(what: &str, pairs: impl Iterator<Item = (MorId, MorId)>, size: usize) -> Result<Vec<MorId>, QuotalError> {
    let mut map = alloc::vec![usize::MAX; size];
    for (k, v) in pairs {
        if map[k] == usize::MAX {
            map[k] = v;
        } else if map[k] != v {
            return Err(QuotalError::Induced(format!("{what} at class {k}")));
        }
    }
    if map.contains(&usize::MAX) {
        return Err(QuotalError::Induced(format!("{what} is not total")));
    }
    Ok(map)
}

/// Induce `s̃, t̃, γ̃, ι̃` through the two quotients, checking well-definedness.
pub fn tilde_double<G: GroupOperad + 'static>(d: &DoubleQuotal<G>) -> Result<TildeDouble, QuotalError> {
    let up = tilde_upper(d)?;
    let lo = tilde_quotal(&d.lower)?;
    let dd = &d.double;
    let (pu, pl) = (&up.proj, &lo.proj);
    let n_up = up.cat.morphism_count();
    let objects: Vec<usize> = up.cat.objects().collect();
    let s = induce("s", dd.vertical.morphisms().map(|a| (pu.mor(a), pl.mor(dd.s.mor(a)))), n_up)?;
    let t = induce("t", dd.vertical.morphisms().map(|a| (pu.mor(a), pl.mor(dd.t.mor(a)))), n_up)?;
    let unit = induce("unit", dd.base.morphisms().map(|f| (pl.mor(f), pu.mor(dd.unit.mor(f)))), lo.cat.morphism_count())?;
    let mut comp: BTreeMap<(MorId, MorId), MorId> = BTreeMap::new();
    for (&(a, b), &c) in &dd.comp {
        let key = (pu.mor(a), pu.mor(b));
        let v = pu.mor(c);
        if *comp.entry(key).or_insert(v) != v {
            return Err(QuotalError::Induced(format!("composition at ({}, {})", dd.vertical.label(a), dd.vertical.label(b))));
        }
    }
    let mk = |map: Vec<MorId>, src: &Arc<FinCategory>, tgt: &Arc<FinCategory>| Functor {
        source: src.clone(),
        target: tgt.clone(),
        obj_map: objects.clone(),
        mor_map: map,
    };
    let double = DoubleCategory {
        name: String::from(up.cat.name()),
        vertical: up.cat.clone(),
        base: lo.cat.clone(),
        s: mk(s, &up.cat, &lo.cat),
        t: mk(t, &up.cat, &lo.cat),
        unit: mk(unit, &lo.cat, &up.cat),
        comp,
        comp_obj: objects.iter().map(|&o| ((o, o), o)).collect(),
    };
    Ok(TildeDouble { upper: up, lower: lo, double })
}

/// Both squares relating `s, t` to `s̃, t̃` are pullbacks: the comparison functors into the
/// pullbacks are isomorphisms.
pub fn verify_pullback_squares<G: GroupOperad + 'static>(d: &DoubleQuotal<G>) -> Report {
    let id = format!("pullback-squares-{}", d.upper().name());
    let mut t = Tally::new();
    let res = (|| {
        let td = tilde_double(d).map_err(|e| format!("{e}"))?;
        for (leg, tleg, name) in [(&d.double.s, &td.double.s, "s"), (&d.double.t, &td.double.t, "t")] {
            let p = pullback(tleg, &td.lower.proj, name).map_err(|e| format!("{e}"))?;
            let pairs: BTreeMap<(MorId, MorId), MorId> =
                p.cat.morphisms().map(|m| ((p.left.mor(m), p.right.mor(m)), m)).collect();
            let objs: BTreeMap<(usize, usize), usize> =
                p.cat.objects().map(|o| ((p.left.obj(o), p.right.obj(o)), o)).collect();
            let upper = d.upper();
            let mut mor_map = Vec::with_capacity(upper.morphism_count());
            for a in upper.morphisms() {
                let m = pairs.get(&(td.upper.proj.mor(a), leg.mor(a))).copied();
                t.check(m.is_some(), || format!("{} has no image in the pullback along {name}", upper.label(a)))?;
                mor_map.push(m.unwrap_or(0));
            }
            let obj_map = upper.objects().map(|o| objs[&(td.upper.proj.obj(o), leg.obj(o))]).collect();
            let cmp = Functor { source: upper.clone(), target: p.cat.clone(), obj_map, mor_map };
            let r = validate_functor(&cmp);
            t.check(r.passed(), || format!("comparison along {name} is not a functor: {}", r.failure.clone().unwrap_or_default()))?;
            t.check(cmp.is_isomorphism(), || format!("comparison along {name} is not an isomorphism"))?;
        }
        Ok(())
    })();
    t.report(&id, d.level, res)
}

/// `𝔼_𝒢 = Q_{KecBar}`.
pub fn e_category<G: GroupOperad + 'static>(g: &Arc<G>, level: usize) -> Result<QuotalCategory<G>, QuotalError> {
    build_quotal(g, &builtin_family(&**g, FamilyKind::KecBar, level), level)
}

/// `𝔾_𝒢 ⇉ 𝔼_𝒢`, the double category of the pair `(DecBar, KecBar)`.
pub fn g_double<G: GroupOperad + 'static>(g: &Arc<G>, level: usize) -> Result<DoubleQuotal<G>, QuotalError> {
    let k = builtin_family(&**g, FamilyKind::DecBar, level);
    let l = builtin_family(&**g, FamilyKind::KecBar, level);
    build_double(g, &k, &l, level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{check_double_category, validate_category};
    use crate::interval::Point::*;
    use crate::operad::{Symmetric, Trivial};
    use crate::perm::Permutation;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_one_line(v).unwrap()
    }

    fn s3() -> Arc<Symmetric> {
        Arc::new(Symmetric::new(3))
    }

    #[test]
    fn hom_counts() {
        let g = s3();
        let total = total_category(&g, 1);
        assert_eq!(total.cat().hom(1, 1).len(), 3);
        let e = e_category(&g, 2).unwrap();
        assert_eq!(e.cat().hom(2, 1).len(), 10);
        let te = tilde_quotal(&e).unwrap();
        assert_eq!(te.cat.hom(2, 1).len(), 5);
        assert_eq!(te.cat.hom(1, 1).len(), 2);
        assert!(validate_category(e.cat()).passed());
    }

    #[test]
    fn trivial_operad_gives_the_interval_category() {
        let g = Arc::new(Trivial::new(3));
        let q = total_category(&g, 3);
        for m in 0..=3 {
            for n in 0..=3 {
                assert_eq!(q.cat().hom(m, n).len(), IntervalMorphism::enumerate(m, n).len());
            }
        }
        assert!(q.verify_representatives().passed());
    }

    #[test]
    fn composition_in_the_double_category() {
        let g = s3();
        let d = g_double(&g, 3).unwrap();
        let phi = IntervalMorphism::new(3, 2, &[Fin(1), Fin(1), Fin(2)]).unwrap();
        let mu2 = IntervalMorphism::mu(2);
        let f = d.morphism(&phi, &p(&[1, 2, 3]), &p(&[1, 2, 3])).unwrap();
        let s = d.morphism(&mu2, &p(&[2, 1]), &p(&[1, 2])).unwrap();
        let expected = d.morphism(&IntervalMorphism::mu(3), &p(&[2, 3, 1]), &p(&[1, 2, 3])).unwrap();
        assert_eq!(d.upper().comp(s, f), expected);
        for f in d.lower.cat().morphisms() {
            let u = d.double.unit.mor(f);
            assert_eq!(d.double.s.mor(u), f);
            assert_eq!(d.double.t.mor(u), f);
        }
    }

    #[test]
    fn double_categories_pass() {
        let g = s3();
        let d = g_double(&g, 2).unwrap();
        assert!(check_double_category(&d.double, 2).passed());
        assert!(d.verify_representatives().passed());
        let td = tilde_double(&d).unwrap();
        assert!(check_double_category(&td.double, 2).passed());
        assert!(verify_pullback_squares(&d).passed());
    }

    #[test]
    fn corrupted_target_fails_the_pullback_check() {
        let g = s3();
        let mut d = g_double(&g, 2).unwrap();
        // send a non-identity morphism over μ₂ to its other coset
        let mu2 = IntervalMorphism::mu(2);
        let a = d.morphism(&mu2, &p(&[2, 1]), &p(&[1, 2])).unwrap();
        let wrong = d.lower.morphism(&mu2, &p(&[1, 2])).unwrap();
        assert_ne!(d.double.t.mor(a), wrong);
        d.double.t.mor_map[a] = wrong;
        assert!(!verify_pullback_squares(&d).passed());
    }

    #[test]
    fn recovery_round_trip() {
        let g = s3();
        let total = total_category(&g, 2);
        for kind in [FamilyKind::Triv, FamilyKind::Inr, FamilyKind::RSt] {
            let k = builtin_family(&*g, kind, 2);
            let q = build_quotal(&g, &k, 2).unwrap();
            let proj = q.projection(&total);
            assert!(validate_functor(&proj).passed());
            let r = recover_family(&total, &proj).unwrap();
            assert!(r.is_subfamily_of(&k) && k.is_subfamily_of(&r));
        }
    }

    #[test]
    fn bad_family_is_rejected() {
        let g = s3();
        let k = crate::congruence::explicit_family(&*g, "bad", 3, &[(IntervalMorphism::mu(3), alloc::vec![p(&[2, 1, 3])])]);
        assert!(matches!(build_quotal(&g, &k, 3), Err(QuotalError::Family(..))));
    }
}
