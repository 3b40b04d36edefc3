use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{validate_functor, FinCategory, Functor, MorId, ObjId};
use crate::report::{Report, Tally};

/// A category internal to finite categories: `vertical ⇉ base` via `s`, `t`, with composition
/// defined on pairs `(α, β)` such that `s(α) = t(β)`; the composite runs from `s(β)` to `t(α)`.
#[derive(Clone, Debug)]
pub struct DoubleCategory {
    pub name: String,
    pub vertical: Arc<FinCategory>,
    pub base: Arc<FinCategory>,
    pub s: Functor,
    pub t: Functor,
    pub unit: Functor,
    pub comp: BTreeMap<(MorId, MorId), MorId>,
    pub comp_obj: BTreeMap<(ObjId, ObjId), ObjId>,
}

impl DoubleCategory {
    /// The double category with `vertical = base` and `s = t = unit = id`.
    pub fn discrete(base: &Arc<FinCategory>) -> Self {
        let id = Functor::identity(base);
        DoubleCategory {
            name: format!("disc-{}", base.name()),
            vertical: base.clone(),
            base: base.clone(),
            s: id.clone(),
            t: id.clone(),
            unit: id,
            comp: base.morphisms().map(|f| ((f, f), f)).collect(),
            comp_obj: base.objects().map(|o| ((o, o), o)).collect(),
        }
    }

    /// Vertical morphisms grouped by their `t`-image.
    fn by_target(&self) -> BTreeMap<MorId, Vec<MorId>> {
        let mut m: BTreeMap<MorId, Vec<MorId>> = BTreeMap::new();
        for a in self.vertical.morphisms() {
            m.entry(self.t.mor(a)).or_default().push(a);
        }
        m
    }
}

/// An internal presheaf: `anchor: carrier → base` with an action defined on pairs `(ξ, c)`
/// such that `anchor(ξ) = t(c)`, landing over `s(c)`.
#[derive(Clone, Debug)]
pub struct InternalPresheaf {
    pub name: String,
    pub carrier: Arc<FinCategory>,
    pub anchor: Functor,
    pub action: BTreeMap<(MorId, MorId), MorId>,
    pub action_obj: BTreeMap<(ObjId, ObjId), ObjId>,
}

fn lookup<K: Ord + Copy + core::fmt::Debug>(m: &BTreeMap<K, usize>, k: K, what: &str) -> Result<usize, String> {
    m.get(&k).copied().ok_or_else(|| format!("{what} undefined at {k:?}"))
}

/// Internal-category axioms, checked exhaustively.
pub fn check_double_category(d: &DoubleCategory, level: usize) -> Report {
    let mut t = Tally::new();
    let res = double_inner(d, &mut t);
    t.report(&format!("double-{}", d.name), level, res)
}

fn double_inner(d: &DoubleCategory, t: &mut Tally) -> Result<(), String> {
    let (c, b) = (&*d.vertical, &*d.base);
    for (f, name) in [(&d.s, "s"), (&d.t, "t"), (&d.unit, "unit")] {
        let r = validate_functor(f);
        t.check(r.passed(), || format!("{name} is not a functor: {}", r.failure.clone().unwrap_or_default()))?;
    }
    for f in b.morphisms() {
        let u = d.unit.mor(f);
        t.check(d.s.mor(u) == f && d.t.mor(u) == f, || format!("s or t fails to invert unit at {}", b.label(f)))?;
    }
    for o in b.objects() {
        let u = d.unit.obj(o);
        t.check(d.s.obj(u) == o && d.t.obj(u) == o, || format!("s or t fails to invert unit at {}", b.object_label(o)))?;
    }
    let by_t = d.by_target();
    let empty = Vec::new();
    let partners = |a: MorId| by_t.get(&d.s.mor(a)).unwrap_or(&empty);
    // objects
    for x in c.objects() {
        for y in c.objects().filter(|&y| d.t.obj(y) == d.s.obj(x)) {
            let z = lookup(&d.comp_obj, (x, y), "object composite")?;
            t.check(d.s.obj(z) == d.s.obj(y) && d.t.obj(z) == d.t.obj(x), || {
                format!("object composite of {} and {} has the wrong boundary", c.object_label(x), c.object_label(y))
            })?;
        }
        let l = lookup(&d.comp_obj, (d.unit.obj(d.t.obj(x)), x), "object composite")?;
        let r = lookup(&d.comp_obj, (x, d.unit.obj(d.s.obj(x))), "object composite")?;
        t.check(l == x && r == x, || format!("unit law fails at object {}", c.object_label(x)))?;
    }
    // typing, units and identities
    for a in c.morphisms() {
        for &bm in partners(a) {
            let g = lookup(&d.comp, (a, bm), "composite")?;
            t.check(d.s.mor(g) == d.s.mor(bm) && d.t.mor(g) == d.t.mor(a), || {
                format!("composite of {} and {} has the wrong boundary", c.label(a), c.label(bm))
            })?;
            let (dom, cod) = (d.comp_obj[&(c.dom(a), c.dom(bm))], d.comp_obj[&(c.cod(a), c.cod(bm))]);
            t.check(c.dom(g) == dom && c.cod(g) == cod, || {
                format!("composite of {} and {} has the wrong type", c.label(a), c.label(bm))
            })?;
        }
        let l = lookup(&d.comp, (d.unit.mor(d.t.mor(a)), a), "composite")?;
        let r = lookup(&d.comp, (a, d.unit.mor(d.s.mor(a))), "composite")?;
        t.check(l == a && r == a, || format!("unit law fails at {}", c.label(a)))?;
    }
    for x in c.objects() {
        for y in c.objects().filter(|&y| d.t.obj(y) == d.s.obj(x)) {
            let z = d.comp_obj[&(x, y)];
            t.check(d.comp[&(c.identity(x), c.identity(y))] == c.identity(z), || {
                format!("composite of identities at ({}, {}) is not an identity", c.object_label(x), c.object_label(y))
            })?;
        }
    }
    // functoriality: comp(α₂α₁, β₂β₁) = comp(α₂, β₂) ∘ comp(α₁, β₁)
    for a1 in c.morphisms() {
        for &b1 in partners(a1) {
            let g1 = d.comp[&(a1, b1)];
            for o in c.objects() {
                for &a2 in c.hom(c.cod(a1), o) {
                    for &b2 in partners(a2) {
                        if c.dom(b2) != c.cod(b1) {
                            continue;
                        }
                        let lhs = d.comp[&(c.comp(a2, a1), c.comp(b2, b1))];
                        let rhs = c.comp(d.comp[&(a2, b2)], g1);
                        t.check(lhs == rhs, || {
                            format!(
                                "composition is not functorial at ({}, {}) then ({}, {})",
                                c.label(a1),
                                c.label(b1),
                                c.label(a2),
                                c.label(b2)
                            )
                        })?;
                    }
                }
            }
        }
    }
    // associativity
    for a in c.morphisms() {
        for &bm in partners(a) {
            let ab = d.comp[&(a, bm)];
            for &g in partners(bm) {
                let lhs = d.comp[&(ab, g)];
                let rhs = d.comp[&(a, d.comp[&(bm, g)])];
                t.check(lhs == rhs, || {
                    format!("associativity fails at ({}, {}, {})", c.label(a), c.label(bm), c.label(g))
                })?;
            }
        }
    }
    Ok(())
}

/// Internal presheaf axioms over `d`, checked exhaustively.
pub fn check_internal_presheaf(p: &InternalPresheaf, d: &DoubleCategory, level: usize) -> Report {
    let mut t = Tally::new();
    let res = presheaf_inner(p, d, &mut t);
    t.report(&format!("presheaf-{}", p.name), level, res)
}

fn presheaf_inner(p: &InternalPresheaf, d: &DoubleCategory, t: &mut Tally) -> Result<(), String> {
    let (x, c) = (&*p.carrier, &*d.vertical);
    t.check(Arc::ptr_eq(&p.anchor.target, &d.base), || "anchor does not target the base".into())?;
    let r = validate_functor(&p.anchor);
    t.check(r.passed(), || format!("anchor is not a functor: {}", r.failure.clone().unwrap_or_default()))?;
    let by_t = d.by_target();
    let empty = Vec::new();
    let partners = |xi: MorId| by_t.get(&p.anchor.mor(xi)).unwrap_or(&empty);
    for o in x.objects() {
        for co in c.objects().filter(|&co| d.t.obj(co) == p.anchor.obj(o)) {
            let z = lookup(&p.action_obj, (o, co), "object action")?;
            t.check(p.anchor.obj(z) == d.s.obj(co), || {
                format!("object action at ({}, {}) lies over the wrong object", x.object_label(o), c.object_label(co))
            })?;
        }
        let u = lookup(&p.action_obj, (o, d.unit.obj(p.anchor.obj(o))), "object action")?;
        t.check(u == o, || format!("unit acts nontrivially on object {}", x.object_label(o)))?;
    }
    for xi in x.morphisms() {
        for &cm in partners(xi) {
            let a = lookup(&p.action, (xi, cm), "action")?;
            t.check(p.anchor.mor(a) == d.s.mor(cm), || {
                format!("action at ({}, {}) lies over the wrong morphism", x.label(xi), c.label(cm))
            })?;
            let (dom, cod) = (p.action_obj[&(x.dom(xi), c.dom(cm))], p.action_obj[&(x.cod(xi), c.cod(cm))]);
            t.check(x.dom(a) == dom && x.cod(a) == cod, || {
                format!("action at ({}, {}) has the wrong type", x.label(xi), c.label(cm))
            })?;
        }
        let u = lookup(&p.action, (xi, d.unit.mor(p.anchor.mor(xi))), "action")?;
        t.check(u == xi, || format!("unit diagram fails at {}", x.label(xi)))?;
    }
    for o in x.objects() {
        for co in c.objects().filter(|&co| d.t.obj(co) == p.anchor.obj(o)) {
            let z = p.action_obj[&(o, co)];
            t.check(p.action[&(x.identity(o), c.identity(co))] == x.identity(z), || {
                format!("action does not preserve the identity at ({}, {})", x.object_label(o), c.object_label(co))
            })?;
        }
    }
    // functoriality
    for x1 in x.morphisms() {
        for &c1 in partners(x1) {
            let a1 = p.action[&(x1, c1)];
            for o in x.objects() {
                for &x2 in x.hom(x.cod(x1), o) {
                    for &c2 in partners(x2) {
                        if c.dom(c2) != c.cod(c1) {
                            continue;
                        }
                        let lhs = p.action[&(x.comp(x2, x1), c.comp(c2, c1))];
                        let rhs = x.comp(p.action[&(x2, c2)], a1);
                        t.check(lhs == rhs, || {
                            format!(
                                "action is not functorial at ({}, {}) then ({}, {})",
                                x.label(x1),
                                c.label(c1),
                                x.label(x2),
                                c.label(c2)
                            )
                        })?;
                    }
                }
            }
        }
    }
    // associativity: (ξ·c₁)·c₂ = ξ·(c₁c₂)
    for xi in x.morphisms() {
        for &c1 in partners(xi) {
            let a = p.action[&(xi, c1)];
            for &c2 in by_t.get(&d.s.mor(c1)).unwrap_or(&empty) {
                let lhs = p.action[&(a, c2)];
                let rhs = p.action[&(xi, d.comp[&(c1, c2)])];
                t.check(lhs == rhs, || {
                    format!("associativity diagram fails at ({}, {}, {})", x.label(xi), c.label(c1), c.label(c2))
                })?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::monoid_category;
    use alloc::string::ToString;

    fn z3() -> Arc<FinCategory> {
        let l: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        let t: Vec<Vec<usize>> = (0..3).map(|g| (0..3).map(|f| (g + f) % 3).collect()).collect();
        Arc::new(monoid_category("Z3", &l, 0, &t).unwrap())
    }

    #[test]
    fn discrete_double_category_passes() {
        let d = DoubleCategory::discrete(&z3());
        assert!(check_double_category(&d, 0).passed());
    }

    #[test]
    fn trivial_presheaf_passes_and_broken_unit_fails() {
        let b = z3();
        let d = DoubleCategory::discrete(&b);
        let mut p = InternalPresheaf {
            name: "base".into(),
            carrier: b.clone(),
            anchor: Functor::identity(&b),
            action: b.morphisms().map(|f| ((f, f), f)).collect(),
            action_obj: b.objects().map(|o| ((o, o), o)).collect(),
        };
        assert!(check_internal_presheaf(&p, &d, 0).passed());
        p.action.insert((1, 1), 2);
        let r = check_internal_presheaf(&p, &d, 0);
        assert!(!r.passed());
    }

    #[test]
    fn corrupted_comp_fails() {
        let b = z3();
        let mut d = DoubleCategory::discrete(&b);
        d.comp.insert((2, 2), 1);
        assert!(!check_double_category(&d, 0).passed());
    }
}
