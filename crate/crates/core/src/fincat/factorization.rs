use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{FinCategory, MorId};
use crate::report::{Report, Tally};

/// `(E, M)` is an orthogonal factorization system: every morphism is `m ∘ e`, and every
/// commuting square from an `E`-morphism to an `M`-morphism has exactly one diagonal filler.
pub fn check_factorization_system(
    c: &FinCategory,
    in_e: &dyn Fn(MorId) -> bool,
    in_m: &dyn Fn(MorId) -> bool,
    id: &str,
    level: usize,
) -> Report {
    let mut t = Tally::new();
    let res = (|| {
        let es: Vec<MorId> = c.morphisms().filter(|&f| in_e(f)).collect();
        let ms: Vec<MorId> = c.morphisms().filter(|&f| in_m(f)).collect();
        for f in c.morphisms() {
            let (a, b) = (c.dom(f), c.cod(f));
            let found = c.objects().any(|x| {
                c.hom(a, x).iter().any(|&e| in_e(e) && c.hom(x, b).iter().any(|&m| in_m(m) && c.comp(m, e) == f))
            });
            t.check(found, || format!("{} has no factorization", c.label(f)))?;
        }
        for &e in &es {
            let (a, b) = (c.dom(e), c.cod(e));
            for &m in &ms {
                let (cc, d) = (c.dom(m), c.cod(m));
                // squares (f, g) with m f = g e, counted via g ↦ g e
                let mut ge: Vec<MorId> = c.hom(b, d).iter().map(|&g| c.comp(g, e)).collect();
                ge.sort_unstable();
                let squares: usize = c
                    .hom(a, cc)
                    .iter()
                    .map(|&f| {
                        let mf = c.comp(m, f);
                        ge.partition_point(|&x| x <= mf) - ge.partition_point(|&x| x < mf)
                    })
                    .sum();
                let mut seen = BTreeSet::new();
                for &dg in c.hom(b, cc) {
                    t.check(seen.insert((c.comp(dg, e), c.comp(m, dg))), || {
                        format!("two diagonal fillers for {} against {}", c.label(e), c.label(m))
                    })?;
                }
                t.check(seen.len() == squares, || {
                    format!("some square from {} to {} has no diagonal filler", c.label(e), c.label(m))
                })?;
            }
        }
        Ok(())
    })();
    t.report(id, level, res)
}

/// Every morphism in the class has a right inverse.
pub fn check_split_epis(c: &FinCategory, class: &dyn Fn(MorId) -> bool, id: &str, level: usize) -> Report {
    let mut t = Tally::new();
    let res: Result<(), String> = (|| {
        for f in c.morphisms().filter(|&f| class(f)) {
            let (a, b) = (c.dom(f), c.cod(f));
            let split = c.hom(b, a).iter().any(|&s| c.comp(f, s) == c.identity(b));
            t.check(split, || format!("{} has no section", c.label(f)))?;
        }
        Ok(())
    })();
    t.report(id, level, res)
}

/// Whether `f` has a two-sided inverse.
pub fn is_isomorphism(c: &FinCategory, f: MorId) -> bool {
    let (a, b) = (c.dom(f), c.cod(f));
    c.hom(b, a).iter().any(|&g| c.comp(g, f) == c.identity(a) && c.comp(f, g) == c.identity(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::monoid_category;
    use alloc::string::ToString;

    #[test]
    fn groups_are_orthogonal_to_themselves() {
        let l: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        let t: Vec<Vec<usize>> = (0..3).map(|g| (0..3).map(|f| (g + f) % 3).collect()).collect();
        let c = monoid_category("Z3", &l, 0, &t).unwrap();
        // in a group every morphism is invertible
        assert!(check_factorization_system(&c, &|_| true, &|_| true, "ofs", 0).passed());
        assert!(check_split_epis(&c, &|_| true, "split", 0).passed());
        assert!(is_isomorphism(&c, 1));
    }

    #[test]
    fn left_zero_monoid_is_not_split() {
        let l: Vec<String> = ["e", "a", "b"].iter().map(|s| s.to_string()).collect();
        let t = alloc::vec![alloc::vec![0, 1, 2], alloc::vec![1, 1, 1], alloc::vec![2, 2, 2]];
        let c = monoid_category("lz", &l, 0, &t).unwrap();
        assert!(!check_split_epis(&c, &|f| f == 1, "split", 0).passed());
        assert!(!is_isomorphism(&c, 1));
        // (identities, all): every square with e = id has the unique filler g
        assert!(check_factorization_system(&c, &|f| f == 0, &|_| true, "ofs", 0).passed());
        // (all, all): squares from a to a outnumber their fillers
        assert!(!check_factorization_system(&c, &|_| true, &|_| true, "ofs", 0).passed());
    }
}
