//! Finite multicategories truncated at an arity bound, 𝒢-symmetric structures, and `M ⋊ 𝒢`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::operad::{act_word, GroupOperad};
use crate::report::{Report, Tally};

pub type MultiId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MultiError {
    #[error("composite of arity {arity} exceeds the bound {bound}")]
    Truncation { arity: usize, bound: usize },
    #[error("ill-typed composite: {0}")]
    Typing(String),
    #[error("missing composite: {0}")]
    Missing(String),
    #[error("object {0} has no identity")]
    NoIdentity(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMorphism {
    pub inputs: Vec<usize>,
    pub output: usize,
    pub label: String,
}

/// A multicategory whose multimorphisms of arity at most `arity_bound` are listed, with every
/// composite of in-bound arity tabulated.
#[derive(Clone, Debug)]
pub struct FinMulticategory {
    name: String,
    objects: Vec<String>,
    arity_bound: usize,
    mors: Vec<MultiMorphism>,
    homs: BTreeMap<(Vec<usize>, usize), Vec<MultiId>>,
    by_output: Vec<Vec<MultiId>>,
    identities: Vec<MultiId>,
    comp: BTreeMap<(MultiId, Vec<MultiId>), MultiId>,
}

pub struct MulticatBuilder {
    name: String,
    objects: Vec<String>,
    arity_bound: usize,
    mors: Vec<MultiMorphism>,
    identities: Vec<Option<MultiId>>,
}

impl MulticatBuilder {
    pub fn new(name: impl Into<String>, arity_bound: usize) -> Self {
        MulticatBuilder { name: name.into(), objects: Vec::new(), arity_bound, mors: Vec::new(), identities: Vec::new() }
    }

    pub fn add_object(&mut self, label: impl Into<String>) -> usize {
        self.objects.push(label.into());
        self.identities.push(None);
        self.objects.len() - 1
    }

    pub fn add_morphism(&mut self, inputs: &[usize], output: usize, label: impl Into<String>) -> MultiId {
        self.mors.push(MultiMorphism { inputs: inputs.to_vec(), output, label: label.into() });
        self.mors.len() - 1
    }

    pub fn set_identity(&mut self, object: usize, f: MultiId) {
        self.identities[object] = Some(f);
    }

    fn skeleton(self) -> Result<FinMulticategory, MultiError> {
        let mut homs: BTreeMap<(Vec<usize>, usize), Vec<MultiId>> = BTreeMap::new();
        let mut by_output = alloc::vec![Vec::new(); self.objects.len()];
        for (i, m) in self.mors.iter().enumerate() {
            if m.inputs.len() > self.arity_bound {
                return Err(MultiError::Truncation { arity: m.inputs.len(), bound: self.arity_bound });
            }
            if m.output >= self.objects.len() || m.inputs.iter().any(|&a| a >= self.objects.len()) {
                return Err(MultiError::Invalid(format!("{} refers to an unknown object", m.label)));
            }
            homs.entry((m.inputs.clone(), m.output)).or_default().push(i);
            by_output[m.output].push(i);
        }
        let mut identities = Vec::with_capacity(self.objects.len());
        for (o, id) in self.identities.iter().enumerate() {
            identities.push(id.ok_or_else(|| MultiError::NoIdentity(self.objects[o].clone()))?);
        }
        Ok(FinMulticategory {
            name: self.name,
            objects: self.objects,
            arity_bound: self.arity_bound,
            mors: self.mors,
            homs,
            by_output,
            identities,
            comp: BTreeMap::new(),
        })
    }

    /// Tabulate every in-bound composite from `rule(f, gs)`; a missing or ill-typed entry is an error.
    pub fn build(self, mut rule: impl FnMut(MultiId, &[MultiId]) -> Option<MultiId>) -> Result<FinMulticategory, MultiError> {
        let mut m = self.skeleton()?;
        let mut comp = BTreeMap::new();
        let mut err = None;
        for f in 0..m.mors.len() {
            m.for_each_composable(f, m.arity_bound, &mut |gs| {
                if err.is_some() {
                    return;
                }
                match rule(f, gs) {
                    Some(h) if m.composite_type(f, gs) == Some((m.mors[h].inputs.clone(), m.mors[h].output)) => {
                        comp.insert((f, gs.to_vec()), h);
                    }
                    Some(h) => err = Some(MultiError::Typing(format!("{} = {}", m.describe(f, gs), m.mors[h].label))),
                    None => err = Some(MultiError::Missing(m.describe(f, gs))),
                }
            });
        }
        if let Some(e) = err {
            return Err(e);
        }
        m.comp = comp;
        Ok(m)
    }

    /// Store the listed composites as given; `validate_multicat` reports what is wrong with them.
    pub fn build_unchecked(self, entries: impl IntoIterator<Item = ((MultiId, Vec<MultiId>), MultiId)>) -> Result<FinMulticategory, MultiError> {
        let mut m = self.skeleton()?;
        let n = m.mors.len();
        for ((f, gs), h) in entries {
            if f >= n || h >= n || gs.iter().any(|&g| g >= n) {
                return Err(MultiError::Invalid("composition entry refers to an unknown multimorphism".into()));
            }
            m.comp.insert((f, gs), h);
        }
        Ok(m)
    }
}

impl FinMulticategory {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_label(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn object_by_label(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    pub fn morphism_count(&self) -> usize {
        self.mors.len()
    }

    pub fn morphisms(&self) -> core::ops::Range<MultiId> {
        0..self.mors.len()
    }

    pub fn morphism(&self, f: MultiId) -> &MultiMorphism {
        &self.mors[f]
    }

    pub fn label(&self, f: MultiId) -> &str {
        &self.mors[f].label
    }

    pub fn morphism_by_label(&self, label: &str) -> Option<MultiId> {
        self.mors.iter().position(|m| m.label == label)
    }

    pub fn inputs(&self, f: MultiId) -> &[usize] {
        &self.mors[f].inputs
    }

    pub fn output(&self, f: MultiId) -> usize {
        self.mors[f].output
    }

    pub fn arity(&self, f: MultiId) -> usize {
        self.mors[f].inputs.len()
    }

    pub fn identity(&self, o: usize) -> MultiId {
        self.identities[o]
    }

    /// `M(a₁…aₙ; a)`.
    pub fn hom(&self, inputs: &[usize], output: usize) -> &[MultiId] {
        self.homs.get(&(inputs.to_vec(), output)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn with_output(&self, o: usize) -> &[MultiId] {
        &self.by_output[o]
    }

    /// Nonempty multihom sets.
    pub fn homs(&self) -> impl Iterator<Item = (&(Vec<usize>, usize), &Vec<MultiId>)> {
        self.homs.iter()
    }

    pub fn composition_entries(&self) -> impl Iterator<Item = (&(MultiId, Vec<MultiId>), &MultiId)> {
        self.comp.iter()
    }

    /// `γ(f; g₁, …, gₙ)`.
    pub fn compose(&self, f: MultiId, gs: &[MultiId]) -> Result<MultiId, MultiError> {
        if self.composite_type(f, gs).is_none() {
            return Err(MultiError::Typing(self.describe(f, gs)));
        }
        let arity: usize = gs.iter().map(|&g| self.arity(g)).sum();
        if arity > self.arity_bound {
            return Err(MultiError::Truncation { arity, bound: self.arity_bound });
        }
        self.comp.get(&(f, gs.to_vec())).copied().ok_or_else(|| MultiError::Missing(self.describe(f, gs)))
    }

    /// `γ` for arguments known to be composable within the bound.
    pub fn gamma(&self, f: MultiId, gs: &[MultiId]) -> MultiId {
        match self.compose(f, gs) {
            Ok(h) => h,
            Err(e) => panic!("{e}"),
        }
    }

    /// Source and target of `γ(f; gs)` if the arguments match.
    fn composite_type(&self, f: MultiId, gs: &[MultiId]) -> Option<(Vec<usize>, usize)> {
        let m = &self.mors[f];
        if gs.len() != m.inputs.len() || gs.iter().zip(&m.inputs).any(|(&g, &a)| self.mors[g].output != a) {
            return None;
        }
        Some((gs.iter().flat_map(|&g| self.mors[g].inputs.iter().copied()).collect(), m.output))
    }

    fn describe(&self, f: MultiId, gs: &[MultiId]) -> String {
        let args: Vec<&str> = gs.iter().map(|&g| self.mors[g].label.as_str()).collect();
        format!("γ({}; {})", self.mors[f].label, args.join(", "))
    }

    /// Every tuple `gs` composable with `f` whose total arity is at most `budget`.
    pub fn for_each_composable(&self, f: MultiId, budget: usize, visit: &mut dyn FnMut(&[MultiId])) {
        fn rec(m: &FinMulticategory, ins: &[usize], left: usize, cur: &mut Vec<MultiId>, visit: &mut dyn FnMut(&[MultiId])) {
            if cur.len() == ins.len() {
                visit(cur);
                return;
            }
            for &g in &m.by_output[ins[cur.len()]] {
                let k = m.mors[g].inputs.len();
                if k <= left {
                    cur.push(g);
                    rec(m, ins, left - k, cur, visit);
                    cur.pop();
                }
            }
        }
        rec(self, &self.mors[f].inputs, budget, &mut Vec::new(), visit);
    }

    /// Replace one composite; used to build negative controls.
    pub fn override_composite(&mut self, f: MultiId, gs: &[MultiId], h: MultiId) {
        self.comp.insert((f, gs.to_vec()), h);
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Exhaustive in-bound check of typing, unit and associativity laws.
pub fn validate_multicat(m: &FinMulticategory) -> Report {
    let mut t = Tally::new();
    let res = (|| {
        for o in 0..m.object_count() {
            let id = m.identity(o);
            t.check(m.inputs(id) == [o] && m.output(id) == o, || format!("identity of {} is ill-typed", m.object_label(o)))?;
        }
        let mut composites = Vec::new();
        for f in m.morphisms() {
            let mut bad = None;
            m.for_each_composable(f, m.arity_bound, &mut |gs| {
                if bad.is_none() {
                    match m.compose(f, gs) {
                        Ok(h) if m.composite_type(f, gs) == Some((m.inputs(h).to_vec(), m.output(h))) => {
                            composites.push((f, gs.to_vec(), h))
                        }
                        Ok(h) => bad = Some(format!("{} = {} is ill-typed", m.describe(f, gs), m.label(h))),
                        Err(e) => bad = Some(format!("{e}")),
                    }
                }
            });
            t.check(bad.is_none(), || bad.clone().unwrap_or_default())?;
        }
        for f in m.morphisms() {
            let ids: Vec<MultiId> = m.inputs(f).iter().map(|&a| m.identity(a)).collect();
            t.check(m.compose(f, &ids) == Ok(f), || format!("{} ∘ identities ≠ {}", m.label(f), m.label(f)))?;
            t.check(m.compose(m.identity(m.output(f)), &[f]) == Ok(f), || format!("identity ∘ {} ≠ {}", m.label(f), m.label(f)))?;
        }
        for (f, gs, c) in &composites {
            let mut bad = None;
            m.for_each_composable(*c, m.arity_bound, &mut |hs| {
                if bad.is_some() {
                    return;
                }
                let lhs = m.compose(*c, hs);
                let mut inner = Vec::with_capacity(gs.len());
                let mut k = 0;
                for &g in gs {
                    let a = m.arity(g);
                    inner.push(m.compose(g, &hs[k..k + a]));
                    k += a;
                }
                let rhs = inner.into_iter().collect::<Result<Vec<_>, _>>().and_then(|inner| m.compose(*f, &inner));
                if lhs != rhs || lhs.is_err() {
                    let hl: Vec<&str> = hs.iter().map(|&h| m.label(h)).collect();
                    bad = Some(format!("associativity fails for {} then ({})", m.describe(*f, gs), hl.join(", ")));
                }
            });
            t.check(bad.is_none(), || bad.clone().unwrap_or_default())?;
        }
        Ok(())
    })();
    t.report(&format!("multicat-{}", m.name), m.arity_bound, res)
}

/// A multifunctor between finite multicategories.
#[derive(Clone, Debug)]
pub struct Multifunctor {
    pub source: Arc<FinMulticategory>,
    pub target: Arc<FinMulticategory>,
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<MultiId>,
}

impl Multifunctor {
    pub fn identity(m: &Arc<FinMulticategory>) -> Self {
        Multifunctor {
            source: m.clone(),
            target: m.clone(),
            obj_map: (0..m.object_count()).collect(),
            mor_map: m.morphisms().collect(),
        }
    }

    /// The unique multifunctor into a multicategory with one multimorphism per arity.
    pub fn to_terminal(m: &Arc<FinMulticategory>, terminal: &Arc<FinMulticategory>) -> Option<Self> {
        let mor_map = m.morphisms().map(|f| terminal.hom(&alloc::vec![0; m.arity(f)], 0).first().copied()).collect::<Option<Vec<_>>>()?;
        Some(Multifunctor { source: m.clone(), target: terminal.clone(), obj_map: alloc::vec![0; m.object_count()], mor_map })
    }

    pub fn obj(&self, a: usize) -> usize {
        self.obj_map[a]
    }

    pub fn mor(&self, f: MultiId) -> MultiId {
        self.mor_map[f]
    }

    /// Bijective on objects and on multimorphisms.
    pub fn is_isomorphism(&self) -> bool {
        let bij = |v: &[usize], n: usize| {
            let mut s = v.to_vec();
            s.sort_unstable();
            s.dedup();
            s.len() == v.len() && v.len() == n
        };
        bij(&self.obj_map, self.target.object_count()) && bij(&self.mor_map, self.target.morphism_count())
    }
}

/// Typing, identities and in-bound composites are preserved.
pub fn validate_multifunctor(f: &Multifunctor) -> Report {
    let (s, c) = (&*f.source, &*f.target);
    let mut t = Tally::new();
    let res = (|| {
        t.check(f.obj_map.len() == s.object_count() && f.mor_map.len() == s.morphism_count(), || "map sizes differ".into())?;
        for a in 0..s.object_count() {
            t.check(f.mor(s.identity(a)) == c.identity(f.obj(a)), || format!("identity of {} not preserved", s.object_label(a)))?;
        }
        for g in s.morphisms() {
            let ins: Vec<usize> = s.inputs(g).iter().map(|&a| f.obj(a)).collect();
            let h = f.mor(g);
            t.check(c.inputs(h) == ins.as_slice() && c.output(h) == f.obj(s.output(g)), || format!("{} is sent to the wrong multihom", s.label(g)))?;
        }
        for ((g, gs), &h) in s.composition_entries() {
            let img: Vec<MultiId> = gs.iter().map(|&x| f.mor(x)).collect();
            t.check(c.compose(f.mor(*g), &img) == Ok(f.mor(h)), || format!("{} not preserved", s.describe(*g, gs)))?;
        }
        Ok(())
    })();
    t.report(&format!("multifunctor-{}-{}", s.name(), c.name()), s.arity_bound(), res)
}

/// A right action `f ↦ f^x` of `𝒢` on the multimorphisms of `M`.
pub struct GSymAction<G: GroupOperad> {
    operad: Arc<G>,
    table: BTreeMap<(MultiId, G::Elem), MultiId>,
}

impl<G: GroupOperad> Clone for GSymAction<G> {
    fn clone(&self) -> Self {
        GSymAction { operad: self.operad.clone(), table: self.table.clone() }
    }
}

impl<G: GroupOperad> GSymAction<G> {
    /// Tabulate `act(f, x)` for every `f` and every `x ∈ 𝒢(arity f)`; `None` leaves the entry out.
    pub fn from_fn(g: &Arc<G>, m: &FinMulticategory, mut act: impl FnMut(MultiId, &G::Elem) -> Option<MultiId>) -> Self {
        let mut table = BTreeMap::new();
        for f in m.morphisms() {
            for x in g.elements(m.arity(f)) {
                if let Some(h) = act(f, x) {
                    table.insert((f, *x), h);
                }
            }
        }
        GSymAction { operad: g.clone(), table }
    }

    /// `f^x` is the member of `M(a_{x(1)}…a_{x(n)}; a)` in the same position as `f` in its own hom.
    pub fn positional(g: &Arc<G>, m: &FinMulticategory) -> Self {
        Self::from_fn(g, m, |f, x| {
            let pos = m.hom(m.inputs(f), m.output(f)).iter().position(|&h| h == f)?;
            let ins = act_word(&**g, &g.inv(x), m.inputs(f)).ok()?;
            m.hom(&ins, m.output(f)).get(pos).copied()
        })
    }

    pub fn operad(&self) -> &Arc<G> {
        &self.operad
    }

    pub fn try_act(&self, f: MultiId, x: &G::Elem) -> Option<MultiId> {
        self.table.get(&(f, *x)).copied()
    }

    /// `f^x`.
    pub fn act(&self, f: MultiId, x: &G::Elem) -> MultiId {
        self.table[&(f, *x)]
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(MultiId, G::Elem), &MultiId)> {
        self.table.iter()
    }

    /// Replace one entry; used to build negative controls.
    pub fn override_entry(&mut self, f: MultiId, x: G::Elem, h: MultiId) {
        self.table.insert((f, x), h);
    }
}

/// The action is a multifunctor `M ⋊ 𝒢 → M` satisfying the unit and associativity squares.
pub fn validate_gsym<G: GroupOperad>(m: &FinMulticategory, a: &GSymAction<G>) -> Report {
    let g = &*a.operad;
    let mut t = Tally::new();
    let res = (|| {
        for f in m.morphisms() {
            let n = m.arity(f);
            t.check(n <= g.arity_bound(), || format!("{} exceeds the operad's bound", m.label(f)))?;
            for x in g.elements(n) {
                let h = a.try_act(f, x);
                t.check(h.is_some(), || format!("{}^{x} is missing", m.label(f)))?;
                let h = h.unwrap_or(f);
                let want = act_word(g, &g.inv(x), m.inputs(f)).map_err(|e| format!("{e}"))?;
                t.check(m.inputs(h) == want.as_slice() && m.output(h) == m.output(f), || {
                    format!("{}^{x} = {} is ill-typed", m.label(f), m.label(h))
                })?;
            }
            t.check(a.act(f, &g.unit(n)) == f, || format!("{}^e ≠ {}", m.label(f), m.label(f)))?;
            for x in g.elements(n) {
                for y in g.elements(n) {
                    let lhs = a.act(a.act(f, x), y);
                    t.check(lhs == a.act(f, &g.mul(x, y)), || format!("({}^{x})^{y} ≠ {}^({x}{y})", m.label(f), m.label(f)))?;
                }
            }
        }
        // γ(f; f_{x⁻¹(1)}, …)^{γ(x; x₁, …)} = γ(f^x; f₁^{x₁}, …)
        for f in m.morphisms() {
            let n = m.arity(f);
            for x in g.elements(n) {
                let fx = a.act(f, x);
                let xinv = g.to_perm(&g.inv(x));
                let mut bad = None;
                m.for_each_composable(fx, m.arity_bound(), &mut |fs| {
                    if bad.is_some() {
                        return;
                    }
                    let choices: Vec<&[G::Elem]> = fs.iter().map(|&fi| g.elements(m.arity(fi))).collect();
                    for xs in crate::operad::tuples(&choices) {
                        let permuted: Vec<MultiId> = (1..=n).map(|j| fs[xinv.image(j) - 1]).collect();
                        let lhs = m.compose(f, &permuted).map(|c| a.try_act(c, &g.compose(x, &xs)));
                        let acted: Vec<MultiId> = fs.iter().zip(&xs).map(|(&fi, xi)| a.act(fi, xi)).collect();
                        let rhs = m.compose(fx, &acted).map(Some);
                        if lhs != rhs {
                            bad = Some(format!("action is not multifunctorial at {} with {x}", m.describe(fx, fs)));
                            return;
                        }
                    }
                });
                t.check(bad.is_none(), || bad.clone().unwrap_or_default())?;
            }
        }
        Ok(())
    })();
    t.report(&format!("gsym-{}-{}", m.name(), g.name()), m.arity_bound(), res)
}

/// `G`-symmetric multifunctors commute with the actions.
pub fn validate_equivariance<G: GroupOperad>(f: &Multifunctor, a: &GSymAction<G>, b: &GSymAction<G>) -> Report {
    let g = &*a.operad;
    let s = &*f.source;
    let mut t = Tally::new();
    let res = (|| {
        for h in s.morphisms() {
            for x in g.elements(s.arity(h)) {
                t.check(f.mor(a.act(h, x)) == b.act(f.mor(h), x), || format!("F({}^{x}) ≠ F({})^{x}", s.label(h), s.label(h)))?;
            }
        }
        Ok(())
    })();
    t.report(&format!("equivariance-{}-{}", s.name(), f.target.name()), s.arity_bound(), res)
}

/// `M ⋊ 𝒢` with its pairs `(f, x)`.
pub struct Semidirect<G: GroupOperad> {
    pub cat: Arc<FinMulticategory>,
    pairs: Vec<(MultiId, G::Elem)>,
    index: BTreeMap<(MultiId, G::Elem), MultiId>,
}

impl<G: GroupOperad> Semidirect<G> {
    pub fn pair(&self, p: MultiId) -> (MultiId, G::Elem) {
        self.pairs[p]
    }

    /// The multimorphism `(f, x)`.
    pub fn lookup(&self, f: MultiId, x: &G::Elem) -> Option<MultiId> {
        self.index.get(&(f, *x)).copied()
    }
}

/// `(M ⋊ 𝒢)(a₁…aₙ; a) = {(f, x) : f ∈ M(a_{x⁻¹(1)}…a_{x⁻¹(n)}; a)}` with
/// `γ((f,x); (f₁,x₁), …) = (γ(f; f_{x⁻¹(1)}, …), γ(x; x₁, …))`.
pub fn semidirect<G: GroupOperad>(m: &FinMulticategory, g: &G) -> Result<Semidirect<G>, MultiError> {
    if m.arity_bound() > g.arity_bound() {
        return Err(MultiError::Truncation { arity: m.arity_bound(), bound: g.arity_bound() });
    }
    let mut b = MulticatBuilder::new(format!("{}x{}", m.name(), g.name()), m.arity_bound());
    for o in 0..m.object_count() {
        b.add_object(m.object_label(o));
    }
    let mut pairs = Vec::new();
    let mut index = BTreeMap::new();
    for f in m.morphisms() {
        for x in g.elements(m.arity(f)) {
            let ins = act_word(g, &g.inv(x), m.inputs(f)).map_err(|e| MultiError::Invalid(format!("{e}")))?;
            let id = b.add_morphism(&ins, m.output(f), format!("({},{x})", m.label(f)));
            pairs.push((f, *x));
            index.insert((f, *x), id);
        }
    }
    for o in 0..m.object_count() {
        b.set_identity(o, index[&(m.identity(o), g.unit(1))]);
    }
    let cat = b.build(|p, ps| {
        let (f, x) = pairs[p];
        let xinv = g.to_perm(&g.inv(&x));
        let permuted: Vec<MultiId> = (1..=ps.len()).map(|j| pairs[ps[xinv.image(j) - 1]].0).collect();
        let xs: Vec<G::Elem> = ps.iter().map(|&q| pairs[q].1).collect();
        let h = m.compose(f, &permuted).ok()?;
        index.get(&(h, g.compose(&x, &xs))).copied()
    })?;
    Ok(Semidirect { cat: Arc::new(cat), pairs, index })
}

/// `F ⋊ 𝒢: (f, x) ↦ (F(f), x)`.
pub fn semidirect_map<G: GroupOperad>(f: &Multifunctor, src: &Semidirect<G>, tgt: &Semidirect<G>) -> Multifunctor {
    Multifunctor {
        source: src.cat.clone(),
        target: tgt.cat.clone(),
        obj_map: f.obj_map.clone(),
        mor_map: src.pairs.iter().map(|(h, x)| tgt.lookup(f.mor(*h), x).expect("same operad")).collect(),
    }
}

/// The action as a map `M ⋊ 𝒢 → M`, `(f, x) ↦ f^x`.
pub fn action_multifunctor<G: GroupOperad>(m: &Arc<FinMulticategory>, sd: &Semidirect<G>, a: &GSymAction<G>) -> Multifunctor {
    Multifunctor {
        source: sd.cat.clone(),
        target: m.clone(),
        obj_map: (0..m.object_count()).collect(),
        mor_map: sd.pairs.iter().map(|(f, x)| a.act(*f, x)).collect(),
    }
}

/// `H: M → M ⋊ 𝒢`, `f ↦ (f, e)`.
pub fn unit_multifunctor<G: GroupOperad>(m: &Arc<FinMulticategory>, sd: &Semidirect<G>, g: &G) -> Multifunctor {
    Multifunctor {
        source: m.clone(),
        target: sd.cat.clone(),
        obj_map: (0..m.object_count()).collect(),
        mor_map: m.morphisms().map(|f| sd.lookup(f, &g.unit(m.arity(f))).expect("all pairs present")).collect(),
    }
}

/// Sample multicategories used by tests, examples and the command line.
pub mod samples {
    use super::*;

    /// One object with exactly one multimorphism of each arity up to `bound`.
    pub fn terminal(bound: usize) -> FinMulticategory {
        let mut b = MulticatBuilder::new("terminal", bound);
        let o = b.add_object("*");
        let ts: Vec<MultiId> = (0..=bound).map(|n| b.add_morphism(&alloc::vec![o; n], o, format!("t{n}"))).collect();
        b.set_identity(o, ts[1]);
        // t_n has id n
        b.build(|_, gs| ts.get(gs.iter().sum::<usize>()).copied()).expect("terminal sample")
    }

    /// Objects `a, b`; `M(w; a)` is a singleton for each word `w` of length at least 2 with exactly
    /// one `a`, which must come first unless `with_ba`; `M(a; a) = {id, h}` with `h² = h`, and
    /// `M(b; b) = {id}`.
    pub fn two_object(bound: usize, with_ba: bool) -> FinMulticategory {
        let mut b = MulticatBuilder::new(if with_ba { "two" } else { "two-left" }, bound);
        let (oa, ob) = (b.add_object("a"), b.add_object("b"));
        let ida = b.add_morphism(&[oa], oa, "id_a");
        let h = b.add_morphism(&[oa], oa, "h");
        let idb = b.add_morphism(&[ob], ob, "id_b");
        b.set_identity(oa, ida);
        b.set_identity(ob, idb);
        let mut words: BTreeMap<Vec<usize>, MultiId> = BTreeMap::new();
        for n in 2..=bound {
            for pos in 0..if with_ba { n } else { 1 } {
                let w: Vec<usize> = (0..n).map(|i| if i == pos { oa } else { ob }).collect();
                let label = match (n, pos) {
                    (2, 0) => "f".to_string(),
                    (2, 1) => "g".to_string(),
                    _ => w.iter().map(|&o| if o == oa { 'a' } else { 'b' }).collect(),
                };
                words.insert(w.clone(), b.add_morphism(&w, oa, label));
            }
        }
        let inputs: Vec<Vec<usize>> = b.mors.iter().map(|m| m.inputs.clone()).collect();
        b.build(|f, gs| {
            if f == idb {
                return Some(gs[0]);
            }
            let ins: Vec<usize> = gs.iter().flat_map(|&g| inputs[g].iter().copied()).collect();
            if ins.len() >= 2 {
                words.get(&ins).copied()
            } else {
                Some(if f == h || gs[0] == h { h } else { ida })
            }
        })
        .expect("two-object sample")
    }

    /// One object with unary multimorphisms `{id, t}`, `t² = id`, and nothing else.
    pub fn involution(bound: usize) -> FinMulticategory {
        let mut b = MulticatBuilder::new("involution", bound);
        let o = b.add_object("*");
        let id = b.add_morphism(&[o], o, "id");
        let t = b.add_morphism(&[o], o, "t");
        b.set_identity(o, id);
        b.build(|f, gs| Some(if (f == t) != (gs[0] == t) { t } else { id })).expect("involution sample")
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;
    use crate::operad::{Symmetric, Trivial};
    use crate::perm::Permutation;

    #[test]
    fn samples_validate() {
        for m in [terminal(3), two_object(3, true), two_object(3, false), involution(3)] {
            let r = validate_multicat(&m);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn broken_unit_fails() {
        let mut m = two_object(3, true);
        let (ida, h) = (m.morphism_by_label("id_a").unwrap(), m.morphism_by_label("h").unwrap());
        m.override_composite(ida, &[h], ida);
        assert!(!validate_multicat(&m).passed());
    }

    #[test]
    fn semidirect_counts() {
        let g = Symmetric::new(3);
        let full = two_object(3, true);
        let left = two_object(3, false);
        let (a, b) = (0, 1);
        let sd = semidirect(&full, &g).unwrap();
        assert_eq!(sd.cat.hom(&[a, b], a).len(), 2);
        assert!(validate_multicat(&sd.cat).passed());
        let sd = semidirect(&left, &g).unwrap();
        assert_eq!(sd.cat.hom(&[a, b], a).len(), 1);
        assert!(validate_multicat(&sd.cat).passed());
        let t = Trivial::new(3);
        let sd = semidirect(&full, &t).unwrap();
        assert_eq!(sd.cat.morphism_count(), full.morphism_count());
    }

    #[test]
    fn swap_action() {
        let g = Arc::new(Symmetric::new(3));
        let m = two_object(3, true);
        let act = GSymAction::positional(&g, &m);
        let (f, gm) = (m.morphism_by_label("f").unwrap(), m.morphism_by_label("g").unwrap());
        let swap = Permutation::from_one_line(&[2, 1]).unwrap();
        assert_eq!(act.act(f, &swap), gm);
        assert_eq!(act.act(gm, &swap), f);
        assert!(validate_gsym(&m, &act).passed());
        let mut bad = act.clone();
        bad.override_entry(f, swap, f);
        assert!(!validate_gsym(&m, &bad).passed());
    }
}
