use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{FinCategory, MorId, ObjId};
use crate::report::{Report, Tally};

/// A functor between finite categories, given by its object and morphism maps.
#[derive(Clone, Debug)]
pub struct Functor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub obj_map: Vec<ObjId>,
    pub mor_map: Vec<MorId>,
}

impl Functor {
    pub fn identity(c: &Arc<FinCategory>) -> Self {
        Functor {
            source: c.clone(),
            target: c.clone(),
            obj_map: c.objects().collect(),
            mor_map: c.morphisms().collect(),
        }
    }

    #[inline]
    pub fn obj(&self, o: ObjId) -> ObjId {
        self.obj_map[o]
    }

    #[inline]
    pub fn mor(&self, f: MorId) -> MorId {
        self.mor_map[f]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Functor) -> Functor {
        assert!(Arc::ptr_eq(&self.target, &other.source), "functors are not composable");
        Functor {
            source: self.source.clone(),
            target: other.target.clone(),
            obj_map: self.obj_map.iter().map(|&o| other.obj(o)).collect(),
            mor_map: self.mor_map.iter().map(|&f| other.mor(f)).collect(),
        }
    }

    /// Equal object and morphism maps (sources and targets must be shared).
    pub fn same_as(&self, other: &Functor) -> bool {
        Arc::ptr_eq(&self.source, &other.source)
            && Arc::ptr_eq(&self.target, &other.target)
            && self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
    }

    /// Bijective on objects and morphisms.
    pub fn is_isomorphism(&self) -> bool {
        let bij = |map: &[usize], n: usize| {
            let mut seen = alloc::vec![false; n];
            map.len() == n && map.iter().all(|&x| !core::mem::replace(&mut seen[x], true))
        };
        bij(&self.obj_map, self.target.object_count()) && bij(&self.mor_map, self.target.morphism_count())
    }
}

/// Exhaustive check that the maps are well-typed and preserve identities and composites.
pub fn validate_functor(f: &Functor) -> Report {
    let mut t = Tally::new();
    let res = validate_inner(f, &mut t);
    t.report(&format!("functor-{}-{}", f.source.name(), f.target.name()), 0, res)
}

fn validate_inner(f: &Functor, t: &mut Tally) -> Result<(), String> {
    let (s, c) = (&*f.source, &*f.target);
    t.check(f.obj_map.len() == s.object_count() && f.mor_map.len() == s.morphism_count(), || {
        "maps do not cover the source".into()
    })?;
    for o in s.objects() {
        t.check(f.obj(o) < c.object_count(), || format!("object {} maps outside the target", s.object_label(o)))?;
        t.check(f.mor(s.identity(o)) == c.identity(f.obj(o)), || format!("identity of {} not preserved", s.object_label(o)))?;
    }
    for m in s.morphisms() {
        let im = f.mor(m);
        t.check(im < c.morphism_count(), || format!("{} maps outside the target", s.label(m)))?;
        t.check(c.dom(im) == f.obj(s.dom(m)) && c.cod(im) == f.obj(s.cod(m)), || {
            format!("{} ↦ {} has the wrong type", s.label(m), c.label(im))
        })?;
    }
    let n = s.object_count();
    for a in 0..n {
        for b in 0..n {
            for &x in s.hom(a, b) {
                for cc in 0..n {
                    for &y in s.hom(b, cc) {
                        let lhs = f.mor(s.comp(y, x));
                        let rhs = c.comp(f.mor(y), f.mor(x));
                        t.check(lhs == rhs, || format!("composite {} ∘ {} not preserved", s.label(y), s.label(x)))?;
                    }
                }
            }
        }
    }
    Ok(())
}
