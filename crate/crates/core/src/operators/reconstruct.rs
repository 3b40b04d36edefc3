use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{
    phi::presheaf_action, std_cocart_lift, validate_operator_category, wreath_e, wreath_family, wreath_map, wreath_tilde,
    Lifts, OperatorBase, OperatorCandidate, OperatorError, Variant, WreathCategory,
};
use crate::fincat::{check_equivalence, Functor, MorId, ObjId};
use crate::interval::IntervalMorphism;
use crate::multicat::{
    samples::terminal, semidirect, validate_equivariance, validate_gsym, validate_multicat, validate_multifunctor,
    FinMulticategory, GSymAction, MultiId, MulticatBuilder, Multifunctor,
};
use crate::operad::{act_word, GroupOperad};
use crate::report::Report;

/// The multicategory `M_C` of a category of operators, with its transferred action.
pub struct Reconstruction<G: GroupOperad> {
    pub multicat: Arc<FinMulticategory>,
    pub action: GSymAction<G>,
    /// The object of `C` behind each object of `M_C`.
    pub objects: Vec<ObjId>,
    /// The morphism of `C` behind each multimorphism of `M_C`.
    pub underlying: Vec<MorId>,
    varpi: BTreeMap<Vec<usize>, ObjId>,
    by_underlying: BTreeMap<MorId, MultiId>,
    pub report: Report,
}

impl<G: GroupOperad> Reconstruction<G> {
    /// `ϖ(X₁ … X_m)`.
    pub fn varpi(&self, word: &[usize]) -> Option<ObjId> {
        self.varpi.get(word).copied()
    }

    /// The multimorphism with the given underlying morphism.
    pub fn multimorphism(&self, f: MorId) -> Option<MultiId> {
        self.by_underlying.get(&f).copied()
    }
}

/// The category, anchor and chosen lifts, with the derived maps of reconstruction.
struct Ctx<'a, G: GroupOperad> {
    cand: &'a OperatorCandidate,
    base: &'a OperatorBase<G>,
    lifts: &'a Lifts,
}

impl<G: GroupOperad + 'static> Ctx<'_, G> {
    fn lift(&self, a: ObjId, cls: MorId) -> Result<MorId, OperatorError> {
        if cls == self.base.id(self.cand.anchor.obj(a)) {
            return Ok(self.cand.carrier.identity(a));
        }
        self.lifts.get(a, cls).ok_or_else(|| {
            OperatorError::Missing(format!(
                "lift of {} along {}",
                self.base.e_tilde().label(cls),
                self.cand.carrier.object_label(a)
            ))
        })
    }

    fn hats(&self, b: ObjId) -> Result<Vec<MorId>, OperatorError> {
        let n = self.cand.anchor.obj(b);
        (1..=n).map(|i| self.lift(b, self.base.rho(n, i))).collect()
    }

    /// The unique `u: a → b` over `cls` with `hats[j] ∘ u = targets[j]`.
    fn solve(&self, a: ObjId, b: ObjId, cls: MorId, hats: &[MorId], targets: &[MorId]) -> Result<MorId, OperatorError> {
        let (c, p) = (&self.cand.carrier, &self.cand.anchor);
        c.hom(a, b)
            .iter()
            .copied()
            .find(|&u| p.mor(u) == cls && hats.iter().zip(targets).all(|(&h, &t)| c.comp(h, u) == t))
            .ok_or_else(|| {
                OperatorError::Missing(format!(
                    "morphism {} -> {} over {}",
                    c.object_label(a),
                    c.object_label(b),
                    self.base.e_tilde().label(cls)
                ))
            })
    }
}

/// `M_C(X₁…X_m; X) = C(ϖ(X₁…X_m), X)` over `μ_m`, with `γ(f; f₁, …, f_n) = f ∘ h` where
/// `ρ̂_i ∘ h = f_i ∘ ρ̂^{(k)}_i`, and `f^x = 𝒜(f ∘ x̂, [μ_n, x, e])`.
pub fn reconstruct<G: GroupOperad + 'static>(
    cand: &OperatorCandidate,
    base: &OperatorBase<G>,
    lifts: &Lifts,
) -> Result<Reconstruction<G>, OperatorError> {
    let cx = Ctx { cand, base, lifts };
    let (c, p, e) = (&*cand.carrier, &cand.anchor, base.e_tilde());
    let level = base.level();
    let g = &**base.operad();
    let objects: Vec<ObjId> = c.objects().filter(|&o| p.obj(o) == 1).collect();
    let position: BTreeMap<ObjId, usize> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    // ϖ(word) is the first object whose chosen ρ̂_i land at the letters
    let mut varpi: BTreeMap<Vec<usize>, ObjId> = BTreeMap::new();
    for y in c.objects() {
        let n = p.obj(y);
        let mut word = Vec::with_capacity(n);
        for h in cx.hats(y)? {
            match position.get(&c.cod(h)) {
                Some(&i) => word.push(i),
                None => return Err(OperatorError::Invalid(format!("a lift from {} leaves the fiber over 1", c.object_label(y)))),
            }
        }
        varpi.entry(word).or_insert(y);
    }
    let mut b = MulticatBuilder::new(format!("M[{}]", cand.name), level);
    for &o in &objects {
        b.add_object(c.object_label(o));
    }
    let mut underlying = Vec::new();
    let mut inputs: Vec<Vec<usize>> = Vec::new();
    let mut by_underlying = BTreeMap::new();
    let mut words: Vec<Vec<usize>> = alloc::vec![Vec::new()];
    let mut layer = words.clone();
    for _ in 0..level {
        layer = layer.iter().flat_map(|w| (0..objects.len()).map(move |o| [w.as_slice(), &[o]].concat())).collect();
        words.extend(layer.iter().cloned());
    }
    for w in &words {
        let src = *varpi.get(w).ok_or_else(|| OperatorError::Missing(format!("an object over {} with fibers {w:?}", w.len())))?;
        let mu = base.mu(w.len());
        for (out, &o) in objects.iter().enumerate() {
            for &f in c.hom(src, o).iter().filter(|&&f| p.mor(f) == mu) {
                let id = b.add_morphism(w, out, c.label(f));
                underlying.push(f);
                inputs.push(w.clone());
                by_underlying.insert(f, id);
            }
        }
    }
    for (i, &o) in objects.iter().enumerate() {
        b.set_identity(i, by_underlying[&c.identity(o)]);
    }
    // ρ̂^{(k)}_i: ϖ(W) → ϖ(X⃗_i) over the block projection
    let block = |w: ObjId, k: &[usize], i: usize, target: ObjId| -> Result<MorId, OperatorError> {
        let cls = base.class(&IntervalMorphism::block_rho(k, i), &g.unit(k.iter().sum()));
        let off: usize = k[..i - 1].iter().sum();
        let all = cx.hats(w)?;
        cx.solve(w, target, cls, &cx.hats(target)?, &all[off..off + k[i - 1]])
    };
    let mut failure: Option<OperatorError> = None;
    let multicat = b
        .build(|f, gs| {
            let run = || -> Result<MultiId, OperatorError> {
                let ks: Vec<usize> = gs.iter().map(|&h| inputs[h].len()).collect();
                let concat: Vec<usize> = gs.iter().flat_map(|&h| inputs[h].iter().copied()).collect();
                let w = varpi[&concat];
                let y = varpi[&inputs[f]];
                let mut targets = Vec::with_capacity(gs.len());
                for (i, &h) in gs.iter().enumerate() {
                    let xi = varpi[&inputs[h]];
                    targets.push(c.comp(underlying[h], block(w, &ks, i + 1, xi)?));
                }
                let cls = base.class(&IntervalMorphism::mu_blocks(&ks), &g.unit(concat.len()));
                let hmor = cx.solve(w, y, cls, &cx.hats(y)?, &targets)?;
                by_underlying
                    .get(&c.comp(underlying[f], hmor))
                    .copied()
                    .ok_or_else(|| OperatorError::Invalid(String::from("a composite is not over μ")))
            };
            run().map_err(|e| failure.get_or_insert(e).clone()).ok()
        })
        .map_err(|e| failure.clone().unwrap_or(OperatorError::Multi(e)))?;
    let multicat = Arc::new(multicat);
    let presheaf = cand.presheaf.as_ref().ok_or_else(|| OperatorError::Missing(String::from("the action of the vertical category")))?;
    let mut act_err: Option<OperatorError> = None;
    let action = GSymAction::from_fn(base.operad(), &multicat, |f, x| {
        let run = || -> Result<MultiId, OperatorError> {
            let n = multicat.arity(f);
            let bw = multicat.inputs(f);
            let aw = act_word(g, &g.inv(x), bw).map_err(|e| OperatorError::Invalid(format!("{e}")))?;
            let (a, bo) = (varpi[&aw], varpi[bw]);
            let idx = base.class(&IntervalMorphism::identity(n), x);
            let targets = (1..=n).map(|l| cx.lift(a, e.comp(base.rho(n, l), idx))).collect::<Result<Vec<_>, _>>()?;
            let xhat = cx.solve(a, bo, idx, &cx.hats(bo)?, &targets)?;
            let twist = base.g_class(&IntervalMorphism::mu(n), x, &g.unit(n));
            let img = presheaf
                .action
                .get(&(c.comp(underlying[f], xhat), twist))
                .ok_or_else(|| OperatorError::Missing(format!("action on {}", multicat.label(f))))?;
            by_underlying.get(img).copied().ok_or_else(|| OperatorError::Invalid(String::from("the action leaves μ")))
        };
        run().map_err(|e| {
            act_err.get_or_insert(e);
        })
        .ok()
    });
    if let Some(e) = act_err {
        return Err(e);
    }
    let report = Report::all(
        format!("reconstruct-{}", cand.name),
        level,
        &[validate_multicat(&multicat), validate_gsym(&multicat, &action)],
    );
    Ok(Reconstruction { multicat, action, objects, underlying, varpi, by_underlying, report })
}

/// `P: M_C ≀ 𝔼̃_𝒢 → C`, the unique morphism over `[φ, x]` with `ρ̂_j ∘ P(m) = f_j ∘ π_j`, where
/// `π_j` is the inert part of `ρ_j ∘ [φ, x]`.
pub fn connecting_functor<G: GroupOperad + 'static>(
    rec: &Reconstruction<G>,
    w: &WreathCategory,
    cand: &OperatorCandidate,
    base: &OperatorBase<G>,
    lifts: &Lifts,
) -> Result<Functor, OperatorError> {
    if w.variant != Variant::TildeE || !Arc::ptr_eq(&w.multicat, &rec.multicat) {
        return Err(OperatorError::Invalid(String::from("P starts at the wreath of the reconstruction over 𝔼̃")));
    }
    let cx = Ctx { cand, base, lifts };
    let (c, e) = (&*cand.carrier, base.e_tilde());
    let obj_map = w
        .cat
        .objects()
        .map(|o| rec.varpi(w.word(o)).ok_or_else(|| OperatorError::Missing(format!("ϖ of {}", w.cat.object_label(o)))))
        .collect::<Result<Vec<_>, _>>()?;
    // a representative payload of each class of 𝔼̃
    let mut rep: BTreeMap<MorId, (IntervalMorphism, G::Elem)> = BTreeMap::new();
    for f in base.e().cat().morphisms() {
        rep.entry(base.tilde.lower.proj.mor(f)).or_insert_with(|| base.e().payload(f));
    }
    let mut mor_map = Vec::with_capacity(w.cat.morphism_count());
    for m in w.cat.morphisms() {
        let (a, b) = (obj_map[w.cat.dom(m)], obj_map[w.cat.cod(m)]);
        let cls = w.base(m);
        let (phi, x) = rep[&cls];
        let mut targets = Vec::with_capacity(phi.cod());
        for (j, &fj) in w.components(m).iter().enumerate() {
            let fac = IntervalMorphism::rho(phi.cod(), j + 1).after(&phi).factorize();
            let inert = base.class(&fac.rho, &x);
            let lifted = (1..=fac.rho.cod())
                .map(|l| cx.lift(a, e.comp(base.rho(fac.rho.cod(), l), inert)))
                .collect::<Result<Vec<_>, _>>()?;
            let src = c.dom(rec.underlying[fj]);
            let proj = cx.solve(a, src, inert, &cx.hats(src)?, &lifted)?;
            targets.push(c.comp(rec.underlying[fj], proj));
        }
        mor_map.push(cx.solve(a, b, cls, &cx.hats(b)?, &targets)?);
    }
    Ok(Functor { source: w.cat.clone(), target: cand.carrier.clone(), obj_map, mor_map })
}

/// `Θ(H)`: `f ↦ γ(H°(f); λ)`, read off from `H([μ_m; f; e]) ∘ λ` where `λ: H(a₁)…H(a_m) → H(a⃗)`
/// is the adapter over the identity compatible with the standard lifts.
pub fn theta<G: GroupOperad + 'static>(
    h: &Functor,
    src: &WreathCategory,
    tgt: &WreathCategory,
    base: &OperatorBase<G>,
) -> Result<Multifunctor, OperatorError> {
    let (m, n) = (&src.multicat, &tgt.multicat);
    let letter = |o: usize| -> Result<usize, OperatorError> {
        let img = h.obj(src.object(&[o]).expect("letters are objects"));
        match tgt.word(img) {
            [l] => Ok(*l),
            _ => Err(OperatorError::Invalid(String::from("H does not preserve the fiber over 1"))),
        }
    };
    let obj_map = (0..m.object_count()).map(letter).collect::<Result<Vec<_>, _>>()?;
    let mut mor_map = Vec::with_capacity(m.morphism_count());
    for f in m.morphisms() {
        let a = m.inputs(f);
        let k = a.len();
        let ao = src.object(a).ok_or_else(|| OperatorError::Missing(format!("word of {}", m.label(f))))?;
        let mf = src.lookup(ao, base.mu(k), &[f]).ok_or_else(|| OperatorError::Missing(format!("[μ; {}; e]", m.label(f))))?;
        let bw: Vec<usize> = a.iter().map(|&o| obj_map[o]).collect();
        let bo = tgt.object(&bw).ok_or_else(|| OperatorError::Missing(format!("word {bw:?}")))?;
        let hats = (1..=k)
            .map(|i| std_cocart_lift(src, base, base.rho(k, i), ao).map(|r| h.mor(r)))
            .collect::<Result<Vec<_>, _>>()?;
        let stds = (1..=k).map(|i| std_cocart_lift(tgt, base, base.rho(k, i), bo)).collect::<Result<Vec<_>, _>>()?;
        let lambda = tgt
            .cat
            .hom(bo, h.obj(ao))
            .iter()
            .copied()
            .find(|&l| tgt.base(l) == base.id(k) && hats.iter().zip(&stds).all(|(&r, &s)| tgt.cat.comp(r, l) == s))
            .ok_or_else(|| OperatorError::Missing(format!("adapter for {}", m.label(f))))?;
        let composite = tgt.cat.comp(h.mor(mf), lambda);
        match tgt.components(composite) {
            [g] if tgt.base(composite) == base.mu(k) => mor_map.push(*g),
            _ => return Err(OperatorError::Invalid(format!("H moves {} off μ", m.label(f)))),
        }
    }
    Ok(Multifunctor { source: m.clone(), target: n.clone(), obj_map, mor_map })
}

/// `K: M → M_C`, `f ↦ [μ_m; f; e] ∘ λ` with `λ: ϖ(a⃗) → a⃗` over the identity.
fn comparison<G: GroupOperad + 'static>(
    rec: &Reconstruction<G>,
    w: &WreathCategory,
    cand: &OperatorCandidate,
    base: &OperatorBase<G>,
    lifts: &Lifts,
) -> Result<Multifunctor, OperatorError> {
    let cx = Ctx { cand, base, lifts };
    let m = &w.multicat;
    let c = &*cand.carrier;
    let letter = |o: usize| {
        let x = w.object(&[o]).expect("letters are objects");
        rec.objects.iter().position(|&y| y == x).ok_or_else(|| OperatorError::Missing(format!("object {}", m.object_label(o))))
    };
    let obj_map = (0..m.object_count()).map(letter).collect::<Result<Vec<_>, _>>()?;
    let mut mor_map = Vec::with_capacity(m.morphism_count());
    for f in m.morphisms() {
        let a = m.inputs(f);
        let k = a.len();
        let ao = w.object(a).expect("words are objects");
        let word: Vec<usize> = a.iter().map(|&o| obj_map[o]).collect();
        let src = rec.varpi(&word).ok_or_else(|| OperatorError::Missing(format!("ϖ of {word:?}")))?;
        let stds = (1..=k).map(|i| std_cocart_lift(w, base, base.rho(k, i), ao)).collect::<Result<Vec<_>, _>>()?;
        let lambda = cx.solve(src, ao, base.id(k), &stds, &cx.hats(src)?)?;
        let mf = w.lookup(ao, base.mu(k), &[f]).ok_or_else(|| OperatorError::Missing(format!("[μ; {}; e]", m.label(f))))?;
        let img = rec
            .multimorphism(c.comp(mf, lambda))
            .ok_or_else(|| OperatorError::Missing(format!("image of {}", m.label(f))))?;
        mor_map.push(img);
    }
    Ok(Multifunctor { source: m.clone(), target: rec.multicat.clone(), obj_map, mor_map })
}

/// Build `M ≀ 𝔼̃_𝒢`, reconstruct `M_C`, and check `M ≅ M_C` as `𝒢`-symmetric multicategories,
/// that `P` is an equivalence, and that `Θ` recovers the identity and the map to the terminal
/// multicategory.
pub fn roundtrip<G: GroupOperad + 'static>(
    m: &Arc<FinMulticategory>,
    a: &GSymAction<G>,
    base: &OperatorBase<G>,
) -> Result<Report, OperatorError> {
    let level = base.level();
    let g = base.operad();
    let sd = semidirect(m, &**g)?;
    let (src, tgt) = (wreath_family(m, base)?, wreath_family(&sd.cat, base)?);
    let presheaf = presheaf_action(base, m, a, &src, &tgt, &sd)?;
    let cand = OperatorCandidate::wreath(&src.tilde_e, Some(presheaf));
    let oper = validate_operator_category(&cand, base);
    let mut parts = alloc::vec![oper.overall.clone()];
    if !oper.overall.passed() {
        return Ok(Report::all(format!("roundtrip-{}", m.name()), level, &parts));
    }
    let rec = reconstruct(&cand, base, &oper.chosen)?;
    parts.push(rec.report.clone());
    let k = comparison(&rec, &src.tilde_e, &cand, base, &oper.chosen)?;
    let kr = validate_multifunctor(&k);
    parts.push(kr.clone());
    parts.push(if k.is_isomorphism() {
        Report::pass(format!("iso-{}", m.name()), level, 1)
    } else {
        Report::fail(format!("iso-{}", m.name()), level, 1, "the comparison is not bijective")
    });
    parts.push(validate_equivariance(&k, a, &rec.action));
    let (wc, _) = wreath_tilde(&wreath_e(&rec.multicat, base)?, base)?;
    let pf = connecting_functor(&rec, &wc, &cand, base, &oper.chosen)?;
    parts.push(check_equivalence(&pf).0);
    let id = theta(&wreath_map(&Multifunctor::identity(m), &src.tilde_e, &src.tilde_e)?, &src.tilde_e, &src.tilde_e, base)?;
    parts.push(theta_report(&id, &Multifunctor::identity(m), "identity", level));
    let t = Arc::new(terminal(m.arity_bound()));
    if let Some(to_t) = Multifunctor::to_terminal(m, &t) {
        let tw = wreath_family(&t, base)?;
        let th = theta(&wreath_map(&to_t, &src.tilde_e, &tw.tilde_e)?, &src.tilde_e, &tw.tilde_e, base)?;
        parts.push(theta_report(&th, &to_t, "terminal", level));
    }
    Ok(Report::all(format!("roundtrip-{}", m.name()), level, &parts))
}

fn theta_report(got: &Multifunctor, want: &Multifunctor, what: &str, level: usize) -> Report {
    let id = format!("theta-{what}-{}", want.source.name());
    if got.obj_map == want.obj_map && got.mor_map == want.mor_map {
        Report::pass(id, level, (want.obj_map.len() + want.mor_map.len()) as u64)
    } else {
        let f = (0..want.mor_map.len()).find(|&f| got.mor(f) != want.mor(f));
        Report::fail(id, level, 1, format!("differs at {:?}", f.map(|f| want.source.label(f))))
    }
}
