use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{CatError, CategoryBuilder, FinCategory, Functor, MorId, ObjId};

/// `A ×_C B` with its two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub cat: Arc<FinCategory>,
    pub left: Functor,
    pub right: Functor,
}

impl Pullback {
    /// The morphism `(f, g)`, if it lies in the pullback.
    pub fn pair(&self, f: MorId, g: MorId) -> Option<MorId> {
        self.cat.morphisms().find(|&m| self.left.mor(m) == f && self.right.mor(m) == g)
    }
}

/// Pullback of `f: A → C` and `g: B → C`; objects and morphisms are matching pairs.
pub fn pullback(f: &Functor, g: &Functor, name: impl Into<String>) -> Result<Pullback, CatError> {
    if !Arc::ptr_eq(&f.target, &g.target) {
        return Err(CatError::Invalid("pullback legs have different codomains".into()));
    }
    let (a, b) = (&f.source, &g.source);
    let mut builder = CategoryBuilder::new(name);
    let mut objs: Vec<(ObjId, ObjId)> = Vec::new();
    for x in a.objects() {
        for y in b.objects() {
            if f.obj(x) == g.obj(y) {
                builder.add_object(format!("({}|{})", a.object_label(x), b.object_label(y)));
                objs.push((x, y));
            }
        }
    }
    // index B's morphisms by (dom, cod, image)
    let mut by_image: BTreeMap<(ObjId, ObjId, MorId), Vec<MorId>> = BTreeMap::new();
    for m in b.morphisms() {
        by_image.entry((b.dom(m), b.cod(m), g.mor(m))).or_default().push(m);
    }
    let mut pairs: Vec<(MorId, MorId)> = Vec::new();
    let mut index: BTreeMap<(MorId, MorId), MorId> = BTreeMap::new();
    for (i, &(x, y)) in objs.iter().enumerate() {
        for (j, &(x2, y2)) in objs.iter().enumerate() {
            for &fa in a.hom(x, x2) {
                if let Some(gs) = by_image.get(&(y, y2, f.mor(fa))) {
                    for &gb in gs {
                        let id = builder.add_morphism(i, j, format!("({}|{})", a.label(fa), b.label(gb)));
                        pairs.push((fa, gb));
                        index.insert((fa, gb), id);
                    }
                }
            }
        }
    }
    for (i, &(x, y)) in objs.iter().enumerate() {
        builder.set_identity(i, index[&(a.identity(x), b.identity(y))]);
    }
    let cat = builder.build_table(|p2, p1| {
        let ((f2, g2), (f1, g1)) = (pairs[p2], pairs[p1]);
        index.get(&(a.comp(f2, f1), b.comp(g2, g1))).copied()
    })?;
    let cat = Arc::new(cat);
    let left = Functor {
        source: cat.clone(),
        target: a.clone(),
        obj_map: objs.iter().map(|p| p.0).collect(),
        mor_map: pairs.iter().map(|p| p.0).collect(),
    };
    let right = Functor {
        source: cat.clone(),
        target: b.clone(),
        obj_map: objs.iter().map(|p| p.1).collect(),
        mor_map: pairs.iter().map(|p| p.1).collect(),
    };
    Ok(Pullback { cat, left, right })
}

/// Product of finitely many categories, with its projections.
pub fn product(cats: &[Arc<FinCategory>], name: impl Into<String>) -> Result<(Arc<FinCategory>, Vec<Functor>), CatError> {
    let mut obj_tuples: Vec<Vec<ObjId>> = alloc::vec![Vec::new()];
    for c in cats {
        obj_tuples = obj_tuples
            .into_iter()
            .flat_map(|t| {
                c.objects().map(move |o| {
                    let mut t = t.clone();
                    t.push(o);
                    t
                })
            })
            .collect();
    }
    let mut builder = CategoryBuilder::new(name);
    let mut obj_index: BTreeMap<Vec<ObjId>, ObjId> = BTreeMap::new();
    for t in &obj_tuples {
        let label: Vec<&str> = t.iter().zip(cats).map(|(&o, c)| c.object_label(o)).collect();
        let id = builder.add_object(format!("({})", label.join(",")));
        obj_index.insert(t.clone(), id);
    }
    let mut mor_tuples: Vec<Vec<MorId>> = Vec::new();
    let mut mor_index: BTreeMap<Vec<MorId>, MorId> = BTreeMap::new();
    for (i, s) in obj_tuples.iter().enumerate() {
        for (j, t) in obj_tuples.iter().enumerate() {
            let mut ms: Vec<Vec<MorId>> = alloc::vec![Vec::new()];
            for (k, c) in cats.iter().enumerate() {
                let h = c.hom(s[k], t[k]);
                ms = ms
                    .into_iter()
                    .flat_map(|p| {
                        h.iter().map(move |&m| {
                            let mut p = p.clone();
                            p.push(m);
                            p
                        })
                    })
                    .collect();
            }
            for m in ms {
                let label: Vec<&str> = m.iter().zip(cats).map(|(&f, c)| c.label(f)).collect();
                let id = builder.add_morphism(i, j, format!("({})", label.join(",")));
                mor_index.insert(m.clone(), id);
                mor_tuples.push(m);
            }
        }
    }
    for (i, t) in obj_tuples.iter().enumerate() {
        let ids: Vec<MorId> = t.iter().zip(cats).map(|(&o, c)| c.identity(o)).collect();
        builder.set_identity(i, mor_index[&ids]);
    }
    let cat = builder.build_table(|g, f| {
        let comp: Vec<MorId> =
            mor_tuples[g].iter().zip(&mor_tuples[f]).zip(cats).map(|((&y, &x), c)| c.comp(y, x)).collect();
        mor_index.get(&comp).copied()
    })?;
    let cat = Arc::new(cat);
    let projections = cats
        .iter()
        .enumerate()
        .map(|(k, c)| Functor {
            source: cat.clone(),
            target: c.clone(),
            obj_map: obj_tuples.iter().map(|t| t[k]).collect(),
            mor_map: mor_tuples.iter().map(|t| t[k]).collect(),
        })
        .collect();
    Ok((cat, projections))
}

/// Subcategory on the given objects and the morphisms between them accepted by `keep`.
pub fn subcategory(
    c: &Arc<FinCategory>,
    objs: &[ObjId],
    keep: &dyn Fn(MorId) -> bool,
    name: impl Into<String>,
) -> Result<(Arc<FinCategory>, Functor), CatError> {
    let mut builder = CategoryBuilder::new(name);
    let mut obj_new: BTreeMap<ObjId, ObjId> = BTreeMap::new();
    for &o in objs {
        obj_new.insert(o, builder.add_object(c.object_label(o)));
    }
    let mut mors: Vec<MorId> = Vec::new();
    let mut mor_new: BTreeMap<MorId, MorId> = BTreeMap::new();
    for &x in objs {
        for &y in objs {
            for &m in c.hom(x, y) {
                if keep(m) {
                    mor_new.insert(m, builder.add_morphism(obj_new[&x], obj_new[&y], c.label(m)));
                    mors.push(m);
                }
            }
        }
    }
    for &o in objs {
        let id = *mor_new
            .get(&c.identity(o))
            .ok_or_else(|| CatError::Invalid(format!("identity of {} not kept", c.object_label(o))))?;
        builder.set_identity(obj_new[&o], id);
    }
    let sub = builder.build_table(|g, f| mor_new.get(&c.comp(mors[g], mors[f])).copied())?;
    let sub = Arc::new(sub);
    let inc = Functor { source: sub.clone(), target: c.clone(), obj_map: objs.to_vec(), mor_map: mors };
    Ok((sub, inc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{monoid_category, validate_category, validate_functor};
    use alloc::string::ToString;

    fn z(n: usize) -> Arc<FinCategory> {
        let l: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let t: Vec<Vec<usize>> = (0..n).map(|g| (0..n).map(|f| (g + f) % n).collect()).collect();
        Arc::new(monoid_category(&format!("Z{n}"), &l, 0, &t).unwrap())
    }

    #[test]
    fn pullback_over_terminal_is_product() {
        let (a, b, one) = (z(2), z(3), z(1));
        let fa = Functor { source: a.clone(), target: one.clone(), obj_map: alloc::vec![0], mor_map: alloc::vec![0, 0] };
        let fb = Functor { source: b.clone(), target: one.clone(), obj_map: alloc::vec![0], mor_map: alloc::vec![0; 3] };
        let p = pullback(&fa, &fb, "P").unwrap();
        assert_eq!(p.cat.morphism_count(), 6);
        assert!(validate_category(&p.cat).passed());
        assert!(validate_functor(&p.left).passed() && validate_functor(&p.right).passed());
        let (prod, _) = product(&[a, b], "AxB").unwrap();
        assert_eq!(prod.morphism_count(), 6);
        assert!(validate_category(&prod).passed());
    }

    #[test]
    fn pullback_along_identity() {
        let a = z(4);
        let p = pullback(&Functor::identity(&a), &Functor::identity(&a), "P").unwrap();
        assert!(p.left.is_isomorphism());
        assert_eq!(p.pair(1, 1), Some(1));
        assert_eq!(p.pair(1, 2), None);
    }

    #[test]
    fn subcategory_of_z4() {
        let a = z(4);
        let (s, inc) = subcategory(&a, &[0], &|m| m % 2 == 0, "2Z4").unwrap();
        assert_eq!(s.morphism_count(), 2);
        assert!(validate_functor(&inc).passed());
        assert!(subcategory(&a, &[0], &|m| m == 0 || m == 1, "bad").is_err());
    }
}
