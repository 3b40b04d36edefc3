use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{FinCategory, Functor, MorId, ObjId};
use crate::report::{Report, Tally};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivalenceKind {
    Isomorphism,
    Equivalence,
    Neither,
}

impl fmt::Display for EquivalenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquivalenceKind::Isomorphism => "isomorphism",
            EquivalenceKind::Equivalence => "equivalence",
            EquivalenceKind::Neither => "neither",
        })
    }
}

/// An inverse pair `(f: a → b, g: b → a)`, if `a ≅ b`.
pub fn find_isomorphism(c: &FinCategory, a: ObjId, b: ObjId) -> Option<(MorId, MorId)> {
    for &f in c.hom(a, b) {
        for &g in c.hom(b, a) {
            if c.comp(g, f) == c.identity(a) && c.comp(f, g) == c.identity(b) {
                return Some((f, g));
            }
        }
    }
    None
}

/// Decide whether `f` is fully faithful and essentially surjective by direct enumeration.
/// The report passes for isomorphisms and equivalences.
pub fn check_equivalence(f: &Functor) -> (Report, EquivalenceKind) {
    let mut t = Tally::new();
    let res = equivalence_inner(f, &mut t);
    let kind = match &res {
        Err(_) => EquivalenceKind::Neither,
        Ok(()) if f.is_isomorphism() => EquivalenceKind::Isomorphism,
        Ok(()) => EquivalenceKind::Equivalence,
    };
    let id = format!("equivalence-{}-{}", f.source.name(), f.target.name());
    (t.report(&id, 0, res).with_note(format!("kind={kind}")), kind)
}

fn equivalence_inner(f: &Functor, t: &mut Tally) -> Result<(), String> {
    let (s, c) = (&*f.source, &*f.target);
    for a in s.objects() {
        for b in s.objects() {
            let (fa, fb) = (f.obj(a), f.obj(b));
            let target = c.hom(fa, fb);
            let mut hit = alloc::vec![false; target.len()];
            for &m in s.hom(a, b) {
                let i = c.local_index(f.mor(m));
                t.check(!core::mem::replace(&mut hit[i], true), || {
                    format!("not faithful on hom({}, {})", s.object_label(a), s.object_label(b))
                })?;
            }
            t.check(hit.iter().all(|&h| h), || format!("not full on hom({}, {})", s.object_label(a), s.object_label(b)))?;
        }
    }
    let images: Vec<ObjId> = s.objects().map(|a| f.obj(a)).collect();
    for y in c.objects() {
        let hit = images.iter().any(|&x| x == y || find_isomorphism(c, x, y).is_some());
        t.check(hit, || format!("object {} is not in the essential image", c.object_label(y)))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{monoid_category, CategoryBuilder};
    use alloc::string::ToString;
    use alloc::sync::Arc;

    #[test]
    fn identity_is_isomorphism() {
        let l: Vec<String> = (0..2).map(|i| i.to_string()).collect();
        let c = Arc::new(monoid_category("Z2", &l, 0, &[alloc::vec![0, 1], alloc::vec![1, 0]]).unwrap());
        assert_eq!(check_equivalence(&Functor::identity(&c)).1, EquivalenceKind::Isomorphism);
    }

    #[test]
    fn inclusion_of_skeleton_is_equivalence() {
        // two isomorphic objects x ≅ y versus the one-object trivial category
        let mut b = CategoryBuilder::new("iso");
        let (x, y) = (b.add_object("x"), b.add_object("y"));
        let ix = b.add_morphism(x, x, "1x");
        let f = b.add_morphism(x, y, "f");
        let g = b.add_morphism(y, x, "g");
        let iy = b.add_morphism(y, y, "1y");
        b.set_identity(x, ix);
        b.set_identity(y, iy);
        // table[h][k] = h ∘ k
        let table = [
            [Some(ix), None, Some(g), None],
            [Some(f), None, Some(iy), None],
            [None, Some(ix), None, Some(g)],
            [None, Some(f), None, Some(iy)],
        ];
        let c = Arc::new(b.build_table(|h, k| table[h][k]).unwrap());
        let mut b1 = CategoryBuilder::new("pt");
        let o = b1.add_object("*");
        let i = b1.add_morphism(o, o, "1");
        b1.set_identity(o, i);
        let pt = Arc::new(b1.build_table(|_, _| Some(0)).unwrap());
        let inc = Functor { source: pt.clone(), target: c.clone(), obj_map: alloc::vec![x], mor_map: alloc::vec![ix] };
        assert_eq!(check_equivalence(&inc).1, EquivalenceKind::Equivalence);
        let l: Vec<String> = (0..2).map(|i| i.to_string()).collect();
        let z2 = Arc::new(monoid_category("Z2", &l, 0, &[alloc::vec![0, 1], alloc::vec![1, 0]]).unwrap());
        let bad = Functor { source: pt, target: z2, obj_map: alloc::vec![0], mor_map: alloc::vec![0] };
        assert_eq!(check_equivalence(&bad).1, EquivalenceKind::Neither);
    }
}
