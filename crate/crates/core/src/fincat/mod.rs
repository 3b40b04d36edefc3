//! Finite categories given by explicit hom-sets and composition.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::report::{Report, Tally};

mod double;
mod equivalence;
mod factorization;
mod functor;
mod pullback;
mod quotient;

pub use double::{check_double_category, check_internal_presheaf, DoubleCategory, InternalPresheaf};
pub use equivalence::{check_equivalence, find_isomorphism, EquivalenceKind};
pub use factorization::{check_factorization_system, check_split_epis, is_isomorphism};
pub use functor::{validate_functor, Functor};
pub use pullback::{product, pullback, subcategory, Pullback};
pub use quotient::{quotient_by_classes, quotient_left_cancellative, signature_classes};

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("morphisms {g} and {f} are not composable")]
    NotComposable { g: MorId, f: MorId },
    #[error("composite of {g} and {f} is missing or has the wrong type")]
    BadComposite { g: MorId, f: MorId },
    #[error("object {0} has no identity")]
    MissingIdentity(ObjId),
    #[error("identity of object {0} is not an endomorphism")]
    BadIdentity(ObjId),
    #[error("class is not left-cancellative: {0}")]
    NotLeftCancellative(String),
    #[error("relation is not a congruence: {0}")]
    NotCongruence(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Rule = Arc<dyn Fn(MorId, MorId) -> Option<MorId> + Send + Sync>;

#[derive(Clone)]
enum Composition {
    /// Indexed by `(a, b, c)`: row-major `|hom(a,b)| × |hom(b,c)|` local indices into `hom(a,c)`.
    Table(Vec<Vec<u32>>),
    Rule(Rule),
}

#[derive(Clone, Debug)]
struct MorInfo {
    dom: ObjId,
    cod: ObjId,
    local: u32,
}

/// A finite category. Composition is either tabulated or computed on demand by a rule.
#[derive(Clone)]
pub struct FinCategory {
    name: String,
    objects: Vec<String>,
    labels: Vec<String>,
    mors: Vec<MorInfo>,
    homs: Vec<Vec<MorId>>,
    ids: Vec<MorId>,
    comp: Composition,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinCategory({}, {} objects, {} morphisms)", self.name, self.objects.len(), self.mors.len())
    }
}

/// Collects objects and morphisms before composition is fixed.
pub struct CategoryBuilder {
    name: String,
    objects: Vec<String>,
    labels: Vec<String>,
    mors: Vec<(ObjId, ObjId)>,
    ids: Vec<Option<MorId>>,
}

impl CategoryBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CategoryBuilder { name: name.into(), objects: Vec::new(), labels: Vec::new(), mors: Vec::new(), ids: Vec::new() }
    }

    pub fn add_object(&mut self, label: impl Into<String>) -> ObjId {
        self.objects.push(label.into());
        self.ids.push(None);
        self.objects.len() - 1
    }

    pub fn add_morphism(&mut self, dom: ObjId, cod: ObjId, label: impl Into<String>) -> MorId {
        self.mors.push((dom, cod));
        self.labels.push(label.into());
        self.mors.len() - 1
    }

    pub fn set_identity(&mut self, obj: ObjId, mor: MorId) {
        self.ids[obj] = Some(mor);
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.mors.len()
    }

    fn skeleton(self) -> Result<FinCategory, CatError> {
        let n = self.objects.len();
        let mut homs = alloc::vec![Vec::new(); n * n];
        let mut mors = Vec::with_capacity(self.mors.len());
        for (id, &(d, c)) in self.mors.iter().enumerate() {
            let h = &mut homs[d * n + c];
            mors.push(MorInfo { dom: d, cod: c, local: h.len() as u32 });
            h.push(id);
        }
        let mut ids = Vec::with_capacity(n);
        for (o, i) in self.ids.iter().enumerate() {
            let i = i.ok_or(CatError::MissingIdentity(o))?;
            if mors[i].dom != o || mors[i].cod != o {
                return Err(CatError::BadIdentity(o));
            }
            ids.push(i);
        }
        Ok(FinCategory {
            name: self.name,
            objects: self.objects,
            labels: self.labels,
            mors,
            homs,
            ids,
            comp: Composition::Table(Vec::new()),
        })
    }

    /// Tabulate composition by evaluating `rule(g, f)` on every composable pair.
    pub fn build_table(self, mut rule: impl FnMut(MorId, MorId) -> Option<MorId>) -> Result<FinCategory, CatError> {
        let mut c = self.skeleton()?;
        let table = c.tabulate(&mut rule)?;
        c.comp = Composition::Table(table);
        Ok(c)
    }

    /// Keep the rule and compose on demand.
    pub fn build_rule(self, rule: Rule) -> Result<FinCategory, CatError> {
        let mut c = self.skeleton()?;
        c.comp = Composition::Rule(rule);
        Ok(c)
    }
}

impl FinCategory {
    fn tabulate(&self, rule: &mut dyn FnMut(MorId, MorId) -> Option<MorId>) -> Result<Vec<Vec<u32>>, CatError> {
        let n = self.objects.len();
        let mut table = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (hab, hbc) = (&self.homs[a * n + b], &self.homs[b * n + c]);
                    let mut t = Vec::with_capacity(hab.len() * hbc.len());
                    for &f in hab {
                        for &g in hbc {
                            let h = rule(g, f).ok_or(CatError::BadComposite { g, f })?;
                            if self.mors[h].dom != a || self.mors[h].cod != c {
                                return Err(CatError::BadComposite { g, f });
                            }
                            t.push(self.mors[h].local);
                        }
                    }
                    table.push(t);
                }
            }
        }
        Ok(table)
    }

    /// Replace a rule by a table.
    pub fn materialize(&mut self) -> Result<(), CatError> {
        if let Composition::Rule(r) = &self.comp {
            let r = r.clone();
            let table = self.tabulate(&mut |g, f| r(g, f))?;
            self.comp = Composition::Table(table);
        }
        Ok(())
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.comp, Composition::Table(_))
    }

    /// Overwrite one composite; used to build broken fixtures.
    pub fn override_composite(&mut self, g: MorId, f: MorId, h: MorId) -> Result<(), CatError> {
        self.materialize()?;
        let n = self.objects.len();
        let (a, b, c) = (self.mors[f].dom, self.mors[f].cod, self.mors[g].cod);
        if self.mors[g].dom != b || self.mors[h].dom != a || self.mors[h].cod != c {
            return Err(CatError::NotComposable { g, f });
        }
        let w = self.homs[b * n + c].len();
        let (lf, lg, lh) = (self.mors[f].local as usize, self.mors[g].local as usize, self.mors[h].local);
        if let Composition::Table(t) = &mut self.comp {
            t[(a * n + b) * n + c][lf * w + lg] = lh;
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.mors.len()
    }

    pub fn object_label(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn label(&self, f: MorId) -> &str {
        &self.labels[f]
    }

    pub fn dom(&self, f: MorId) -> ObjId {
        self.mors[f].dom
    }

    pub fn cod(&self, f: MorId) -> ObjId {
        self.mors[f].cod
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a * self.objects.len() + b]
    }

    /// Position of `f` within its hom-set.
    pub fn local_index(&self, f: MorId) -> usize {
        self.mors[f].local as usize
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.ids[o]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.ids[self.mors[f].dom] == f
    }

    pub fn objects(&self) -> core::ops::Range<ObjId> {
        0..self.objects.len()
    }

    pub fn morphisms(&self) -> core::ops::Range<MorId> {
        0..self.mors.len()
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: MorId, f: MorId) -> Result<MorId, CatError> {
        if self.mors[f].cod != self.mors[g].dom {
            return Err(CatError::NotComposable { g, f });
        }
        match &self.comp {
            Composition::Table(_) => Ok(self.comp_fast(g, f)),
            Composition::Rule(r) => {
                let h = r(g, f).ok_or(CatError::BadComposite { g, f })?;
                if self.mors[h].dom != self.mors[f].dom || self.mors[h].cod != self.mors[g].cod {
                    return Err(CatError::BadComposite { g, f });
                }
                Ok(h)
            }
        }
    }

    /// `g ∘ f` for composable arguments; panics otherwise.
    #[inline]
    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        match &self.comp {
            Composition::Table(_) => self.comp_fast(g, f),
            Composition::Rule(_) => self.compose(g, f).expect("composable"),
        }
    }

    #[inline]
    fn comp_fast(&self, g: MorId, f: MorId) -> MorId {
        let n = self.objects.len();
        let (fi, gi) = (&self.mors[f], &self.mors[g]);
        let (a, b, c) = (fi.dom, fi.cod, gi.cod);
        let Composition::Table(t) = &self.comp else { unreachable!() };
        let w = self.homs[b * n + c].len();
        let loc = t[(a * n + b) * n + c][fi.local as usize * w + gi.local as usize];
        self.homs[a * n + c][loc as usize]
    }

    /// Sizes of all hom-sets as `(a, b, |hom(a,b)|)`.
    pub fn hom_sizes(&self) -> Vec<(ObjId, ObjId, usize)> {
        let n = self.objects.len();
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| (a, b, self.hom(a, b).len())).collect()
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Exhaustive unit and associativity check.
pub fn validate_category(c: &FinCategory) -> Report {
    let mut t = Tally::new();
    let res = (|| {
        for o in c.objects() {
            let i = c.identity(o);
            t.check(c.dom(i) == o && c.cod(i) == o, || format!("identity of {} is not an endomorphism", c.object_label(o)))?;
        }
        for f in c.morphisms() {
            let (a, b) = (c.dom(f), c.cod(f));
            let l = c.compose(c.identity(b), f).map_err(|e| format!("{e}"))?;
            let r = c.compose(f, c.identity(a)).map_err(|e| format!("{e}"))?;
            t.check(l == f && r == f, || format!("unit law fails at {}", c.label(f)))?;
        }
        let n = c.object_count();
        for a in 0..n {
            for b in 0..n {
                for f in c.hom(a, b) {
                    for cc in 0..n {
                        for g in c.hom(b, cc) {
                            let gf = c.compose(*g, *f).map_err(|e| format!("{e}"))?;
                            for d in 0..n {
                                for h in c.hom(cc, d) {
                                    let hg = c.comp(*h, *g);
                                    t.check(c.comp(*h, gf) == c.comp(hg, *f), || {
                                        format!("associativity fails at ({}, {}, {})", c.label(*h), c.label(*g), c.label(*f))
                                    })?;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    t.report(&format!("category-{}", c.name()), 0, res)
}

/// One-object category of a finite monoid given by its multiplication table (`table[x][y] = xy`).
pub fn monoid_category(name: &str, labels: &[String], unit: usize, table: &[Vec<usize>]) -> Result<FinCategory, CatError> {
    let mut b = CategoryBuilder::new(name);
    let o = b.add_object("*");
    for l in labels {
        b.add_morphism(o, o, l.clone());
    }
    b.set_identity(o, unit);
    b.build_table(|g, f| table.get(g).and_then(|r| r.get(f)).copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn z2() -> FinCategory {
        monoid_category("Z2", &["0".to_string(), "1".to_string()], 0, &[alloc::vec![0, 1], alloc::vec![1, 0]]).unwrap()
    }

    #[test]
    fn monoid_category_is_valid() {
        assert!(validate_category(&z2()).passed());
    }

    #[test]
    fn broken_associativity_is_caught() {
        // {e, a, b} with b·a overwritten to e
        let l: Vec<String> = ["e", "a", "b"].iter().map(|s| s.to_string()).collect();
        let t = alloc::vec![alloc::vec![0, 1, 2], alloc::vec![1, 1, 1], alloc::vec![2, 2, 2]];
        let mut c = monoid_category("left-zero", &l, 0, &t).unwrap();
        assert!(validate_category(&c).passed());
        c.override_composite(2, 1, 0).unwrap();
        let r = validate_category(&c);
        assert!(!r.passed());
        assert!(r.failure.unwrap().contains("associativity"));
    }

    #[test]
    fn rule_and_table_agree() {
        let mut b = CategoryBuilder::new("Z2");
        let o = b.add_object("*");
        b.add_morphism(o, o, "0");
        b.add_morphism(o, o, "1");
        b.set_identity(o, 0);
        let mut c = b.build_rule(Arc::new(|g, f| Some(g ^ f))).unwrap();
        assert_eq!(c.comp(1, 1), 0);
        assert!(validate_category(&c).passed());
        c.materialize().unwrap();
        assert!(c.is_tabulated());
        assert_eq!(c.comp(1, 0), 1);
    }
}
