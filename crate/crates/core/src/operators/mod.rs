//! Wreath categories `M ≀ 𝔼_𝒢`, `M ≀ 𝔼̃_𝒢` and their 𝔾-pullbacks, the comparison isomorphisms
//! `Φ`, `Φ̃`, categories of algebraic operators, and the reconstruction of multicategories.

mod cocart;
mod phi;
mod reconstruct;

pub use cocart::{
    fiber_functor, is_cocartesian, std_cocart_lift, validate_operator_category, Lifts, OperatorCandidate, OperatorReport,
};
pub use phi::{phi_iso, phi_tilde, presheaf_action, presheaf_action_untilde, Comparison};
pub use reconstruct::{connecting_functor, reconstruct, roundtrip, theta, Reconstruction};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::fincat::{pullback, quotient_by_classes, CatError, CategoryBuilder, FinCategory, Functor, MorId, ObjId};
use crate::interval::IntervalMorphism;
use crate::multicat::{FinMulticategory, MultiError, MultiId, Multifunctor};
use crate::operad::{act_word, tuples, word_fiber, GroupOperad};
use crate::quotal::{g_double, tilde_double, DoubleQuotal, QuotalCategory, QuotalError, TildeDouble};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Quotal(#[from] QuotalError),
    #[error(transparent)]
    Category(#[from] CatError),
    #[error(transparent)]
    Multi(#[from] MultiError),
    #[error("arity bound {bound} is below the level {level}")]
    Truncation { bound: usize, level: usize },
    #[error("{0} is not inert")]
    NotInert(String),
    #[error("missing within truncation: {0}")]
    Missing(String),
    #[error("{0}")]
    Invalid(String),
}

/// `𝔾_𝒢 ⇉ 𝔼_𝒢` and `𝔾̃_𝒢 ⇉ 𝔼̃_𝒢` at one level, with the inert and active morphisms of `𝔼̃_𝒢`.
pub struct OperatorBase<G: GroupOperad> {
    operad: Arc<G>,
    level: usize,
    pub g: DoubleQuotal<G>,
    pub tilde: TildeDouble,
    inert: Vec<bool>,
    active: Vec<bool>,
}

impl<G: GroupOperad + 'static> OperatorBase<G> {
    pub fn new(g: &Arc<G>, level: usize) -> Result<Self, OperatorError> {
        let d = g_double(g, level)?;
        let tilde = tilde_double(&d)?;
        let n = tilde.lower.cat.morphism_count();
        let (mut inert, mut active) = (alloc::vec![false; n], alloc::vec![false; n]);
        for f in d.lower.cat().morphisms() {
            let c = tilde.lower.proj.mor(f);
            inert[c] |= d.lower.is_inert(f);
            active[c] |= d.lower.is_active(f);
        }
        Ok(OperatorBase { operad: g.clone(), level, g: d, tilde, inert, active })
    }

    pub fn operad(&self) -> &Arc<G> {
        &self.operad
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// `𝔼_𝒢`.
    pub fn e(&self) -> &QuotalCategory<G> {
        &self.g.lower
    }

    /// `𝔼̃_𝒢`.
    pub fn e_tilde(&self) -> &Arc<FinCategory> {
        &self.tilde.lower.cat
    }

    /// `𝔾̃_𝒢`.
    pub fn g_tilde(&self) -> &Arc<FinCategory> {
        &self.tilde.upper.cat
    }

    /// `[φ, x]` in `𝔼̃_𝒢`.
    pub fn class(&self, phi: &IntervalMorphism, x: &G::Elem) -> MorId {
        self.tilde.lower.proj.mor(self.e().morphism(phi, x).expect("within level"))
    }

    /// `[φ, u, x]` in `𝔾̃_𝒢`.
    pub fn g_class(&self, phi: &IntervalMorphism, u: &G::Elem, x: &G::Elem) -> MorId {
        self.tilde.upper.proj.mor(self.g.morphism(phi, u, x).expect("within level"))
    }

    pub fn id(&self, n: usize) -> MorId {
        self.e_tilde().identity(n)
    }

    pub fn rho(&self, n: usize, i: usize) -> MorId {
        self.class(&IntervalMorphism::rho(n, i), &self.operad.unit(n))
    }

    pub fn mu(&self, n: usize) -> MorId {
        self.class(&IntervalMorphism::mu(n), &self.operad.unit(n))
    }

    pub fn is_inert(&self, c: MorId) -> bool {
        self.inert[c]
    }

    pub fn is_active(&self, c: MorId) -> bool {
        self.active[c]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `M ≀ 𝔼_𝒢`.
    E,
    /// `M ≀ 𝔼̃_𝒢`.
    TildeE,
    /// `M ≀ 𝔾_𝒢`, the pullback of `M ≀ 𝔼_𝒢` along `t`.
    GPull,
    /// `M ≀ 𝔾̃_𝒢`.
    TildeGPull,
}

/// A wreath category. Each morphism is determined by its source, the morphism it covers in the
/// variant's base category (`𝔼`, `𝔼̃`, `𝔾` or `𝔾̃`), and its tuple of multimorphisms.
#[derive(Clone)]
pub struct WreathCategory {
    pub variant: Variant,
    pub multicat: Arc<FinMulticategory>,
    pub cat: Arc<FinCategory>,
    /// To `𝔼` for `E` and `GPull`, to `𝔼̃` for the tilde variants.
    pub anchor: Functor,
    words: Arc<Vec<Vec<usize>>>,
    word_index: Arc<BTreeMap<Vec<usize>, ObjId>>,
    base_mor: Vec<MorId>,
    fs: Vec<Vec<MultiId>>,
    index: BTreeMap<(ObjId, MorId, Vec<MultiId>), MorId>,
}

impl WreathCategory {
    pub fn word(&self, o: ObjId) -> &[usize] {
        &self.words[o]
    }

    pub fn object(&self, word: &[usize]) -> Option<ObjId> {
        self.word_index.get(word).copied()
    }

    /// The morphism of the base category covered by `m`.
    pub fn base(&self, m: MorId) -> MorId {
        self.base_mor[m]
    }

    pub fn components(&self, m: MorId) -> &[MultiId] {
        &self.fs[m]
    }

    pub fn lookup(&self, dom: ObjId, base: MorId, fs: &[MultiId]) -> Option<MorId> {
        self.index.get(&(dom, base, fs.to_vec())).copied()
    }

    #[allow(clippy::too_many_arguments)]
    fn from_parts(
        variant: Variant,
        multicat: &Arc<FinMulticategory>,
        cat: Arc<FinCategory>,
        anchor: Functor,
        words: &Arc<Vec<Vec<usize>>>,
        word_index: &Arc<BTreeMap<Vec<usize>, ObjId>>,
        base_mor: Vec<MorId>,
        fs: Vec<Vec<MultiId>>,
    ) -> Self {
        let index = cat.morphisms().map(|m| ((cat.dom(m), base_mor[m], fs[m].clone()), m)).collect();
        WreathCategory {
            variant,
            multicat: multicat.clone(),
            cat,
            anchor,
            words: words.clone(),
            word_index: word_index.clone(),
            base_mor,
            fs,
            index,
        }
    }
}

fn words_upto(objects: usize, level: usize) -> Vec<Vec<usize>> {
    let mut out = alloc::vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = alloc::vec![Vec::new()];
    for _ in 0..level {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..objects).map(move |o| {
                    let mut w = w.clone();
                    w.push(o);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn word_label(m: &FinMulticategory, w: &[usize]) -> String {
    let letters: Vec<&str> = w.iter().map(|&o| m.object_label(o)).collect();
    format!("[{}]", letters.join(","))
}

fn components_label(m: &FinMulticategory, fs: &[MultiId]) -> String {
    let labels: Vec<&str> = fs.iter().map(|&f| m.label(f)).collect();
    labels.join(",")
}

/// `M ≀ 𝔼_𝒢`: objects are words of length at most the level; a morphism `a⃗ → b⃗` is
/// `(φ; f₁, …, f_n; [x])` with `f_j ∈ M((x_* a⃗)^φ_j; b_j)`.
pub fn wreath_e<G: GroupOperad + 'static>(
    m: &Arc<FinMulticategory>,
    base: &OperatorBase<G>,
) -> Result<WreathCategory, OperatorError> {
    let level = base.level;
    if m.arity_bound() < level {
        return Err(OperatorError::Truncation { bound: m.arity_bound(), level });
    }
    let (g, e) = (&**base.operad(), base.e());
    let words = Arc::new(words_upto(m.object_count(), level));
    let word_index: Arc<BTreeMap<Vec<usize>, ObjId>> =
        Arc::new(words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect());
    let mut b = CategoryBuilder::new(format!("{}wrE", m.name()));
    for w in words.iter() {
        b.add_object(word_label(m, w));
    }
    let mut base_mor = Vec::new();
    let mut fss: Vec<Vec<MultiId>> = Vec::new();
    let mut doms = Vec::new();
    let mut index: BTreeMap<(ObjId, MorId, Vec<MultiId>), MorId> = BTreeMap::new();
    let map_err = |e: crate::operad::OperadError| OperatorError::Invalid(format!("{e}"));
    for (i, a) in words.iter().enumerate() {
        for (j, bw) in words.iter().enumerate() {
            for &em in e.cat().hom(a.len(), bw.len()) {
                let (phi, x) = e.payload(em);
                let ax = act_word(g, &x, a).map_err(map_err)?;
                let mut choices: Vec<&[MultiId]> = Vec::with_capacity(bw.len());
                for (k, &target) in bw.iter().enumerate() {
                    choices.push(m.hom(&word_fiber(&ax, &phi, k + 1).map_err(map_err)?, target));
                }
                for fs in tuples(&choices) {
                    let id = b.add_morphism(i, j, format!("[{phi};{};{x}]", components_label(m, &fs)));
                    index.insert((i, em, fs.clone()), id);
                    base_mor.push(em);
                    fss.push(fs);
                    doms.push(i);
                }
            }
        }
    }
    for (i, w) in words.iter().enumerate() {
        let fs: Vec<MultiId> = w.iter().map(|&o| m.identity(o)).collect();
        let id = index
            .get(&(i, e.cat().identity(w.len()), fs))
            .copied()
            .ok_or_else(|| OperatorError::Missing(format!("identity of {}", word_label(m, w))))?;
        b.set_identity(i, id);
    }
    let cat = b.build_table(|s, f| {
        let (ps, pf) = (e.payload(base_mor[s]), e.payload(base_mor[f]));
        let (psi, y) = ps;
        let yf = act_word(g, &y, &fss[f]).ok()?;
        let mut hs = Vec::with_capacity(psi.cod());
        for (k, &gk) in fss[s].iter().enumerate() {
            hs.push(m.compose(gk, &word_fiber(&yf, &psi, k + 1).ok()?).ok()?);
        }
        let _ = pf;
        index.get(&(doms[f], e.cat().comp(base_mor[s], base_mor[f]), hs)).copied()
    })?;
    let cat = Arc::new(cat);
    let anchor = Functor {
        source: cat.clone(),
        target: e.cat().clone(),
        obj_map: words.iter().map(Vec::len).collect(),
        mor_map: base_mor.clone(),
    };
    Ok(WreathCategory::from_parts(Variant::E, m, cat, anchor, &words, &word_index, base_mor, fss))
}

/// `M ≀ 𝔼̃_𝒢`, identifying morphisms with the same class in `𝔼̃_𝒢` and the same components,
/// together with the projection from `M ≀ 𝔼_𝒢`.
pub fn wreath_tilde<G: GroupOperad + 'static>(
    w: &WreathCategory,
    base: &OperatorBase<G>,
) -> Result<(WreathCategory, Functor), OperatorError> {
    assert_eq!(w.variant, Variant::E);
    let proj_e = &base.tilde.lower.proj;
    let mut keys: BTreeMap<(ObjId, MorId, &[MultiId]), usize> = BTreeMap::new();
    let classes: Vec<usize> = w
        .cat
        .morphisms()
        .map(|m| {
            let next = keys.len();
            *keys.entry((w.cat.dom(m), proj_e.mor(w.base_mor[m]), &w.fs[m])).or_insert(next)
        })
        .collect();
    let (q, proj) = quotient_by_classes(&w.cat, &classes, format!("{}wrtE", w.multicat.name()))?;
    let mut base_mor = alloc::vec![0; q.morphism_count()];
    let mut fs = alloc::vec![Vec::new(); q.morphism_count()];
    for m in w.cat.morphisms() {
        base_mor[proj.mor(m)] = proj_e.mor(w.base_mor[m]);
        fs[proj.mor(m)] = w.fs[m].clone();
    }
    let anchor = Functor {
        source: q.clone(),
        target: base.e_tilde().clone(),
        obj_map: w.words.iter().map(Vec::len).collect(),
        mor_map: base_mor.clone(),
    };
    let t = WreathCategory::from_parts(Variant::TildeE, &w.multicat, q, anchor, &w.words, &w.word_index, base_mor, fs);
    Ok((t, proj))
}

/// The pullback of `w` along `t` (from `𝔾` if `w` is over `𝔼`, from `𝔾̃` if over `𝔼̃`); its
/// anchor is `s` followed by the base projection.
pub fn wreath_pull<G: GroupOperad + 'static>(
    w: &WreathCategory,
    base: &OperatorBase<G>,
) -> Result<WreathCategory, OperatorError> {
    let (double, variant) = match w.variant {
        Variant::E => (&base.g.double, Variant::GPull),
        Variant::TildeE => (&base.tilde.double, Variant::TildeGPull),
        _ => return Err(OperatorError::Invalid("only wreath categories over the base can be pulled back".into())),
    };
    let suffix = if variant == Variant::GPull { "G" } else { "tG" };
    let p = pullback(&w.anchor, &double.t, format!("{}wr{suffix}", w.multicat.name()))?;
    let base_mor = p.right.mor_map.clone();
    let fs = p.left.mor_map.iter().map(|&m| w.fs[m].clone()).collect();
    let anchor = p.right.then(&double.s);
    Ok(WreathCategory::from_parts(variant, &w.multicat, p.cat, anchor, &w.words, &w.word_index, base_mor, fs))
}

/// All four variants, with the projections `E → TildeE` and `GPull → TildeGPull`.
pub struct WreathFamily {
    pub e: WreathCategory,
    pub tilde_e: WreathCategory,
    pub g: WreathCategory,
    pub tilde_g: WreathCategory,
    pub proj_e: Functor,
    pub proj_g: Functor,
}

pub fn wreath_family<G: GroupOperad + 'static>(
    m: &Arc<FinMulticategory>,
    base: &OperatorBase<G>,
) -> Result<WreathFamily, OperatorError> {
    let e = wreath_e(m, base)?;
    let (tilde_e, proj_e) = wreath_tilde(&e, base)?;
    let g = wreath_pull(&e, base)?;
    let tilde_g = wreath_pull(&tilde_e, base)?;
    let up = &base.tilde.upper.proj;
    let mor_map = g
        .cat
        .morphisms()
        .map(|a| {
            tilde_g.lookup(g.cat.dom(a), up.mor(g.base_mor[a]), &g.fs[a]).ok_or_else(|| {
                OperatorError::Invalid(format!("{} has no image in {}", g.cat.label(a), tilde_g.cat.name()))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let proj_g = Functor { source: g.cat.clone(), target: tilde_g.cat.clone(), obj_map: g.cat.objects().collect(), mor_map };
    Ok(WreathFamily { e, tilde_e, g, tilde_g, proj_e, proj_g })
}

/// The wreath variant of a multifunctor: words and components are mapped letterwise, the covered
/// base morphism is kept. Both sides must be the same variant over the same base.
pub fn wreath_map(f: &Multifunctor, src: &WreathCategory, tgt: &WreathCategory) -> Result<Functor, OperatorError> {
    if src.variant != tgt.variant {
        return Err(OperatorError::Invalid("wreath variants differ".into()));
    }
    let obj_map = src
        .words
        .iter()
        .map(|w| {
            let img: Vec<usize> = w.iter().map(|&o| f.obj(o)).collect();
            tgt.object(&img).ok_or_else(|| OperatorError::Missing(format!("image of {}", word_label(&src.multicat, w))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mor_map = src
        .cat
        .morphisms()
        .map(|m| {
            let fs: Vec<MultiId> = src.fs[m].iter().map(|&h| f.mor(h)).collect();
            tgt.lookup(obj_map[src.cat.dom(m)], src.base_mor[m], &fs)
                .ok_or_else(|| OperatorError::Missing(format!("image of {}", src.cat.label(m))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Functor { source: src.cat.clone(), target: tgt.cat.clone(), obj_map, mor_map })
}

/// `F̃` with `F̃ ∘ p = q ∘ F` for quotients `p`, `q` that are bijective on objects; fails if
/// `F` does not respect the quotients.
pub fn induce_functor(p: &Functor, q: &Functor, f: &Functor) -> Result<Functor, OperatorError> {
    let src = &p.target;
    let mut mor_map = alloc::vec![usize::MAX; src.morphism_count()];
    for m in f.source.morphisms() {
        let (k, v) = (p.mor(m), q.mor(f.mor(m)));
        if mor_map[k] == usize::MAX {
            mor_map[k] = v;
        } else if mor_map[k] != v {
            return Err(OperatorError::Invalid(format!("{} is not compatible with the quotients", f.source.label(m))));
        }
    }
    if mor_map.contains(&usize::MAX) {
        return Err(OperatorError::Invalid("the quotient is not surjective".into()));
    }
    let obj_map = src.objects().map(|o| q.obj(f.obj(o))).collect();
    Ok(Functor { source: src.clone(), target: q.target.clone(), obj_map, mor_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{find_isomorphism, validate_category, validate_functor};
    use crate::fincat::{check_internal_presheaf, InternalPresheaf};
    use crate::multicat::samples::{involution, terminal, two_object};
    use crate::multicat::{semidirect, GSymAction};
    use crate::operad::Symmetric;

    #[test]
    fn terminal_wreath_is_the_base() {
        let g = Arc::new(Symmetric::new(2));
        let base = OperatorBase::new(&g, 2).unwrap();
        let t = Arc::new(terminal(2));
        let w = wreath_family(&t, &base).unwrap();
        assert!(w.e.anchor.is_isomorphism());
        assert!(w.tilde_e.anchor.is_isomorphism());
        assert!(validate_functor(&w.proj_g).passed());
        let _ = find_isomorphism;
    }

    #[test]
    fn two_object_homs() {
        let g = Arc::new(Symmetric::new(2));
        let base = OperatorBase::new(&g, 2).unwrap();
        let m = Arc::new(two_object(2, true));
        let w = wreath_family(&m, &base).unwrap();
        assert!(validate_category(&w.e.cat).passed());
        let (ab, a) = (w.e.object(&[0, 1]).unwrap(), w.e.object(&[0]).unwrap());
        let over_mu = |w: &WreathCategory, c| {
            w.cat.hom(ab, c).iter().filter(|&&f| base.e().payload(w.base(f)).0 == IntervalMorphism::mu(2)).count()
        };
        // M(ab;a) ⊔ M(ba;a) and M(ab;b) ⊔ M(ba;b)
        assert_eq!(over_mu(&w.e, a), 2);
        assert_eq!(over_mu(&w.e, w.e.object(&[1]).unwrap()), 0);
        let left = wreath_e(&Arc::new(two_object(2, false)), &base).unwrap();
        assert_eq!(over_mu(&left, a), 1);
    }

    #[test]
    fn phi_and_presheaf() {
        let g = Arc::new(Symmetric::new(2));
        let base = OperatorBase::new(&g, 2).unwrap();
        let m = Arc::new(two_object(2, true));
        let sd = semidirect(&m, &*g).unwrap();
        let (src, tgt) = (wreath_family(&m, &base).unwrap(), wreath_family(&sd.cat, &base).unwrap());
        let (phi, phit) = phi_tilde(&base, &src, &tgt, &sd).unwrap();
        assert!(phi.report.passed(), "{:?}", phi.report);
        assert!(phit.report.passed(), "{:?}", phit.report);
        let a = GSymAction::positional(&g, &m);
        let p = presheaf_action(&base, &m, &a, &src, &tgt, &sd).unwrap();
        let r = check_internal_presheaf(&p, &base.tilde.double, 2);
        assert!(r.passed(), "{r:?}");
        let p = presheaf_action_untilde(&base, &m, &a, &src, &tgt, &sd).unwrap();
        let r = check_internal_presheaf(&p, &base.g.double, 2);
        assert!(r.passed(), "{r:?}");
    }

    fn two_object_setup(level: usize) -> (OperatorBase<Symmetric>, Arc<FinMulticategory>, WreathFamily, InternalPresheaf) {
        let g = Arc::new(Symmetric::new(level));
        let base = OperatorBase::new(&g, level).unwrap();
        let m = Arc::new(two_object(level, true));
        let sd = semidirect(&m, &*g).unwrap();
        let (src, tgt) = (wreath_family(&m, &base).unwrap(), wreath_family(&sd.cat, &base).unwrap());
        let a = GSymAction::positional(&g, &m);
        let p = presheaf_action(&base, &m, &a, &src, &tgt, &sd).unwrap();
        (base, m, src, p)
    }

    #[test]
    fn standard_lifts_are_cocartesian() {
        let (base, _, w, _) = two_object_setup(2);
        let t = &w.tilde_e;
        let ab = t.object(&[0, 1]).unwrap();
        let g = base.operad().clone();
        let swap = g.elements(2)[1];
        let r1 = std_cocart_lift(t, &base, base.rho(2, 1), ab).unwrap();
        assert_eq!(t.word(t.cat.cod(r1)), &[0]);
        let r1s = std_cocart_lift(t, &base, base.class(&IntervalMorphism::rho(2, 1), &swap), ab).unwrap();
        assert_eq!(t.word(t.cat.cod(r1s)), &[1]);
        assert_eq!(std_cocart_lift(t, &base, base.id(2), ab).unwrap(), t.cat.identity(ab));
        for m in [r1, r1s, t.cat.identity(ab)] {
            assert!(is_cocartesian(&t.cat, &t.anchor, m, 2).passed());
        }
        assert!(std_cocart_lift(t, &base, base.mu(2), ab).is_err());
        // [μ₂; f; e]: both id_a and h factor the identity-free composite
        let f = t.multicat.morphism_by_label("f").unwrap();
        let mu_f = t.lookup(ab, base.mu(2), &[f]).unwrap();
        assert!(!is_cocartesian(&t.cat, &t.anchor, mu_f, 2).passed());
    }

    #[test]
    fn operator_conditions() {
        let (base, _, w, p) = two_object_setup(2);
        for cand in [
            OperatorCandidate::e_tilde(&base),
            OperatorCandidate::g_tilde(&base),
            OperatorCandidate::wreath(&w.tilde_e, Some(p.clone())),
        ] {
            let r = validate_operator_category(&cand, &base);
            assert!(r.overall.passed(), "{}: {:?}", cand.name, r.overall);
        }
        let full = OperatorCandidate::wreath(&w.tilde_e, Some(p));
        let ba = w.tilde_e.object(&[1, 0]).unwrap();
        let objs: Vec<ObjId> = full.carrier.objects().filter(|&o| o != ba).collect();
        let cut = full.restrict(&objs, "cut").unwrap();
        let r = validate_operator_category(&cut, &base);
        assert!(r.presheaf.passed(), "{:?}", r.presheaf);
        assert!(!r.segal.passed());
    }

    #[test]
    fn reconstruct_bases() {
        let g = Arc::new(Symmetric::new(3));
        let base = OperatorBase::new(&g, 3).unwrap();
        let e = OperatorCandidate::e_tilde(&base);
        let r = validate_operator_category(&e, &base);
        let rec = reconstruct(&e, &base, &r.chosen).unwrap();
        assert!(rec.report.passed(), "{:?}", rec.report);
        assert_eq!(rec.multicat.object_count(), 1);
        for n in 0..=3 {
            assert_eq!(rec.multicat.hom(&alloc::vec![0; n], 0).len(), 1);
        }
        let gt = OperatorCandidate::g_tilde(&base);
        let r = validate_operator_category(&gt, &base);
        assert!(r.overall.passed(), "{:?}", r.overall);
        let rec = reconstruct(&gt, &base, &r.chosen).unwrap();
        assert!(rec.report.passed(), "{:?}", rec.report);
        for (n, fact) in [(0, 1), (1, 1), (2, 2), (3, 6)] {
            assert_eq!(rec.multicat.hom(&alloc::vec![0; n], 0).len(), fact);
        }
    }

    #[test]
    fn roundtrips() {
        let g = Arc::new(Symmetric::new(2));
        let base = OperatorBase::new(&g, 2).unwrap();
        for m in [terminal(2), two_object(2, true), involution(2)] {
            let m = Arc::new(m);
            let a = GSymAction::positional(&g, &m);
            let r = roundtrip(&m, &a, &base).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
