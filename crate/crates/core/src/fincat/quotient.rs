use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{CatError, CategoryBuilder, FinCategory, Functor, MorId};

/// Quotient by a partition of the morphisms (`class[f]` is an arbitrary class key). The
/// partition must refine hom-sets and be compatible with composition; both are verified.
pub fn quotient_by_classes(
    c: &Arc<FinCategory>,
    class: &[usize],
    name: impl Into<String>,
) -> Result<(Arc<FinCategory>, Functor), CatError> {
    assert_eq!(class.len(), c.morphism_count());
    // renumber classes by smallest member
    let mut renum: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reps: Vec<MorId> = Vec::new();
    let mut new_class = Vec::with_capacity(class.len());
    for f in c.morphisms() {
        let k = *renum.entry(class[f]).or_insert_with(|| {
            reps.push(f);
            reps.len() - 1
        });
        let r = reps[k];
        if c.dom(r) != c.dom(f) || c.cod(r) != c.cod(f) {
            return Err(CatError::NotCongruence(format!("{} and {} lie in different hom-sets", c.label(r), c.label(f))));
        }
        new_class.push(k);
    }
    let mut b = CategoryBuilder::new(name);
    for o in c.objects() {
        b.add_object(c.object_label(o));
    }
    for &r in &reps {
        b.add_morphism(c.dom(r), c.cod(r), c.label(r));
    }
    for o in c.objects() {
        b.set_identity(o, new_class[c.identity(o)]);
    }
    let q = b.build_table(|g, f| Some(new_class[c.comp(reps[g], reps[f])]))?;
    // compatibility with composition on every composable pair
    for x in c.morphisms() {
        for cc in c.objects() {
            for &y in c.hom(c.cod(x), cc) {
                let lhs = new_class[c.comp(y, x)];
                let rhs = q.comp(new_class[y], new_class[x]);
                if lhs != rhs {
                    return Err(CatError::NotCongruence(format!(
                        "[{}] ∘ [{}] depends on representatives",
                        c.label(y),
                        c.label(x)
                    )));
                }
            }
        }
    }
    let q = Arc::new(q);
    let proj = Functor { source: c.clone(), target: q.clone(), obj_map: c.objects().collect(), mor_map: new_class };
    Ok((q, proj))
}

/// Classes of `α ∼ α′` iff for every `β` into the source, `αβ = α′β` whenever one of them is in `M`.
///
/// Computed by comparing signatures `β ↦ αβ if αβ ∈ M else ⊥`.
pub fn signature_classes(c: &FinCategory, in_m: &dyn Fn(MorId) -> bool) -> Vec<usize> {
    let mut class = alloc::vec![0usize; c.morphism_count()];
    let mut next = 0;
    for a in c.objects() {
        let pre: Vec<MorId> = c.objects().flat_map(|x| c.hom(x, a).iter().copied()).collect();
        for b in c.objects() {
            let mut seen: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
            for &alpha in c.hom(a, b) {
                let sig: Vec<u32> = pre
                    .iter()
                    .map(|&beta| {
                        let h = c.comp(alpha, beta);
                        if in_m(h) { h as u32 } else { u32::MAX }
                    })
                    .collect();
                class[alpha] = *seen.entry(sig).or_insert_with(|| {
                    next += 1;
                    next - 1
                });
            }
        }
    }
    class
}

/// Quotient of `c` by the congruence `∼_M` of a left-cancellative class `M`: whenever `δε ∈ M`,
/// the first factor `ε` is in `M`. This is the form the congruence property needs.
pub fn quotient_left_cancellative(
    c: &Arc<FinCategory>,
    in_m: &dyn Fn(MorId) -> bool,
    name: impl Into<String>,
) -> Result<(Arc<FinCategory>, Functor), CatError> {
    for e in c.morphisms() {
        for o in c.objects() {
            for &d in c.hom(c.cod(e), o) {
                if in_m(c.comp(d, e)) && !in_m(e) {
                    return Err(CatError::NotLeftCancellative(format!(
                        "{} ∘ {} lies in the class but {} does not",
                        c.label(d),
                        c.label(e),
                        c.label(e)
                    )));
                }
            }
        }
    }
    let class = signature_classes(c, in_m);
    quotient_by_classes(c, &class, name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{monoid_category, validate_functor};
    use alloc::string::ToString;

    #[test]
    fn all_morphisms_class_gives_isomorphism() {
        let l: Vec<String> = ["e", "a", "b"].iter().map(|s| s.to_string()).collect();
        let t = alloc::vec![alloc::vec![0, 1, 2], alloc::vec![1, 1, 1], alloc::vec![2, 2, 2]];
        let c = Arc::new(monoid_category("lz", &l, 0, &t).unwrap());
        let (q, p) = quotient_left_cancellative(&c, &|_| true, "q").unwrap();
        assert_eq!(q.morphism_count(), 3);
        assert!(p.is_isomorphism());
        assert!(validate_functor(&p).passed());
    }

    #[test]
    fn non_left_cancellative_class_is_rejected() {
        let l: Vec<String> = ["e", "a", "b"].iter().map(|s| s.to_string()).collect();
        let t = alloc::vec![alloc::vec![0, 1, 2], alloc::vec![1, 1, 1], alloc::vec![2, 2, 2]];
        let c = Arc::new(monoid_category("lz", &l, 0, &t).unwrap());
        // a ∘ e = a lies in {a} but e does not
        let err = quotient_left_cancellative(&c, &|f| f == 1, "q").unwrap_err();
        assert!(matches!(err, CatError::NotLeftCancellative(_)));
    }

    #[test]
    fn incompatible_partition_is_rejected() {
        let l: Vec<String> = ["0", "1", "2"].iter().map(|s| s.to_string()).collect();
        let t: Vec<Vec<usize>> = (0..3).map(|g| (0..3).map(|f| (g + f) % 3).collect()).collect();
        let c = Arc::new(monoid_category("Z3", &l, 0, &t).unwrap());
        assert!(quotient_by_classes(&c, &[0, 1, 0], "q").is_err());
        let (q, _) = quotient_by_classes(&c, &[0, 0, 0], "q").unwrap();
        assert_eq!(q.morphism_count(), 1);
    }
}
