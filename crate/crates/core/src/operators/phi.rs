use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{induce_functor, wreath_map, OperatorBase, OperatorError, Variant, WreathCategory, WreathFamily};
use crate::fincat::{validate_functor, Functor, InternalPresheaf, MorId};
use crate::interval::IntervalMorphism;
use crate::multicat::{action_multifunctor, FinMulticategory, GSymAction, MultiId, Semidirect};
use crate::operad::{pullback as pb, GroupOperad};
use crate::report::{Report, Tally};

/// A comparison functor with its validation: functoriality, identity on objects, bijectivity.
pub struct Comparison {
    pub functor: Functor,
    pub report: Report,
}

fn preserves_fibers<G: GroupOperad>(g: &G, phi: &IntervalMorphism, u: &G::Elem) -> bool {
    let p = g.to_perm(u);
    (1..=phi.cod()).all(|j| phi.fiber(j).into_iter().all(|i| phi.fiber(j).contains(&p.image(i))))
}

/// `δ^{(φ)*}_j(u)` for each `j`, with `u` replaced by a representative of its coset that maps
/// every finite fiber of `φ` to itself.
fn block_components<G: GroupOperad + 'static>(base: &OperatorBase<G>, alpha: MorId) -> Result<Vec<G::Elem>, OperatorError> {
    let g = &**base.operad();
    let (phi, _, x) = base.g.payload(alpha);
    let u = g
        .elements(phi.dom())
        .iter()
        .find(|v| base.g.morphism(&phi, v, &x) == Some(alpha) && preserves_fibers(g, &phi, v))
        .ok_or_else(|| OperatorError::Missing(format!("block representative for {}", base.g.upper().label(alpha))))?;
    Ok((1..=phi.cod()).map(|j| pb(g, &phi.delta_fiber(j), u)).collect())
}

/// `Φ: M ≀ 𝔾_𝒢 → (M ⋊ 𝒢) ≀ 𝔼_𝒢`, `(φ; f⃗; [u], [x]) ↦ (φ; (f_j, δ^{(φ)*}_j(u))_j; [x])`.
pub fn phi_iso<G: GroupOperad + 'static>(
    base: &OperatorBase<G>,
    src: &WreathCategory,
    tgt: &WreathCategory,
    sd: &Semidirect<G>,
) -> Result<Comparison, OperatorError> {
    if src.variant != Variant::GPull || tgt.variant != Variant::E {
        return Err(OperatorError::Invalid("Φ runs from the 𝔾-pullback to the wreath over 𝔼".into()));
    }
    let mut blocks: BTreeMap<MorId, Vec<G::Elem>> = BTreeMap::new();
    let mut mor_map = Vec::with_capacity(src.cat.morphism_count());
    for a in src.cat.morphisms() {
        let alpha = src.base(a);
        if let Entry::Vacant(e) = blocks.entry(alpha) {
            e.insert(block_components(base, alpha)?);
        }
        let ys = &blocks[&alpha];
        let (phi, _, x) = base.g.payload(alpha);
        let fs = src
            .components(a)
            .iter()
            .zip(ys)
            .map(|(&f, y)| sd.lookup(f, y))
            .collect::<Option<Vec<MultiId>>>()
            .ok_or_else(|| OperatorError::Missing(format!("semidirect pair in {}", src.cat.label(a))))?;
        let e = base.e().morphism(&phi, &x).expect("within level");
        let img = tgt
            .lookup(src.cat.dom(a), e, &fs)
            .ok_or_else(|| OperatorError::Missing(format!("image of {}", src.cat.label(a))))?;
        mor_map.push(img);
    }
    let functor = Functor { source: src.cat.clone(), target: tgt.cat.clone(), obj_map: src.cat.objects().collect(), mor_map };
    let report = check_comparison(&functor, src, tgt, "phi", base.level());
    Ok(Comparison { functor, report })
}

/// `Φ̃: M ≀ 𝔾̃_𝒢 → (M ⋊ 𝒢) ≀ 𝔼̃_𝒢`, induced from `Φ` through the quotients.
pub fn phi_tilde<G: GroupOperad + 'static>(
    base: &OperatorBase<G>,
    src: &WreathFamily,
    tgt: &WreathFamily,
    sd: &Semidirect<G>,
) -> Result<(Comparison, Comparison), OperatorError> {
    let phi = phi_iso(base, &src.g, &tgt.e, sd)?;
    let functor = induce_functor(&src.proj_g, &tgt.proj_e, &phi.functor)?;
    let report = check_comparison(&functor, &src.tilde_g, &tgt.tilde_e, "phi-tilde", base.level());
    Ok((phi, Comparison { functor, report }))
}

fn check_comparison(f: &Functor, src: &WreathCategory, tgt: &WreathCategory, what: &str, level: usize) -> Report {
    let id = format!("{what}-{}", src.multicat.name());
    let mut t = Tally::new();
    let res: Result<(), String> = (|| {
        let r = validate_functor(f);
        t.check(r.passed(), || format!("not a functor: {}", r.failure.clone().unwrap_or_default()))?;
        for o in src.cat.objects() {
            t.check(tgt.word(f.obj(o)) == src.word(o), || format!("moves the object {}", src.cat.object_label(o)))?;
        }
        for a in src.cat.objects() {
            for b in src.cat.objects() {
                let (h, k) = (src.cat.hom(a, b), tgt.cat.hom(f.obj(a), f.obj(b)));
                let mut img: Vec<MorId> = h.iter().map(|&m| f.mor(m)).collect();
                img.sort_unstable();
                img.dedup();
                t.check(img.len() == h.len() && h.len() == k.len(), || {
                    format!(
                        "hom({}, {}) has {} elements, image {}, target {}",
                        src.cat.object_label(a),
                        src.cat.object_label(b),
                        h.len(),
                        img.len(),
                        k.len()
                    )
                })?;
            }
        }
        Ok(())
    })();
    t.report(&id, level, res)
}

/// The action of `𝔾̃_𝒢` on `M ≀ 𝔼̃_𝒢`: `(ξ, c) ↦ 𝒜(Φ̃(ξ, c))`, with `𝒜` applied componentwise.
pub fn presheaf_action<G: GroupOperad + 'static>(
    base: &OperatorBase<G>,
    m: &Arc<FinMulticategory>,
    a: &GSymAction<G>,
    src: &WreathFamily,
    tgt: &WreathFamily,
    sd: &Semidirect<G>,
) -> Result<InternalPresheaf, OperatorError> {
    let (_, phi) = phi_tilde(base, src, tgt, sd)?;
    build_action(&src.tilde_e, &src.tilde_g, &tgt.tilde_e, &phi.functor, m, a, sd, &base.tilde.double)
}

/// The same action over `𝔾_𝒢 ⇉ 𝔼_𝒢`, on `M ≀ 𝔼_𝒢`.
pub fn presheaf_action_untilde<G: GroupOperad + 'static>(
    base: &OperatorBase<G>,
    m: &Arc<FinMulticategory>,
    a: &GSymAction<G>,
    src: &WreathFamily,
    tgt: &WreathFamily,
    sd: &Semidirect<G>,
) -> Result<InternalPresheaf, OperatorError> {
    let phi = phi_iso(base, &src.g, &tgt.e, sd)?;
    build_action(&src.e, &src.g, &tgt.e, &phi.functor, m, a, sd, &base.g.double)
}

#[allow(clippy::too_many_arguments)]
fn build_action<G: GroupOperad>(
    carrier: &WreathCategory,
    pulled: &WreathCategory,
    sd_wreath: &WreathCategory,
    phi: &Functor,
    m: &Arc<FinMulticategory>,
    a: &GSymAction<G>,
    sd: &Semidirect<G>,
    double: &crate::fincat::DoubleCategory,
) -> Result<InternalPresheaf, OperatorError> {
    let act = action_multifunctor(m, sd, a);
    let apply = wreath_map(&act, sd_wreath, carrier)?;
    let mut action = BTreeMap::new();
    for xi in carrier.cat.morphisms() {
        for c in double.vertical.morphisms().filter(|&c| double.t.mor(c) == carrier.anchor.mor(xi)) {
            let p = pulled
                .lookup(carrier.cat.dom(xi), c, carrier.components(xi))
                .ok_or_else(|| OperatorError::Missing(format!("({}, {})", carrier.cat.label(xi), double.vertical.label(c))))?;
            action.insert((xi, c), apply.mor(phi.mor(p)));
        }
    }
    let mut action_obj = BTreeMap::new();
    for o in carrier.cat.objects() {
        for co in double.vertical.objects().filter(|&co| double.t.obj(co) == carrier.anchor.obj(o)) {
            action_obj.insert((o, co), o);
        }
    }
    Ok(InternalPresheaf {
        name: String::from(carrier.cat.name()),
        carrier: carrier.cat.clone(),
        anchor: carrier.anchor.clone(),
        action,
        action_obj,
    })
}
