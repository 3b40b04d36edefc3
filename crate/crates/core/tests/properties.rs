use std::sync::Arc;

use nabla_core::congruence::{builtin_family, closure, in_rst, in_rst_bounded, FamilyKind};
use nabla_core::fincat::validate_functor;
use nabla_core::operad::{pullback, push};
use nabla_core::quotal::{build_quotal, recover_family, total_category};
use nabla_core::segal::{commutativity_check, FinMonoid};
use nabla_core::{GroupOperad, IntervalMorphism, Symmetric};
use proptest::prelude::*;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// A morphism `⟨⟨m⟩⟩ → ⟨⟨n⟩⟩` picked by index from the full enumeration.
fn morphism(max: usize) -> impl Strategy<Value = IntervalMorphism> {
    (0..=max, 0..=max, any::<prop::sample::Index>()).prop_map(|(m, n, i)| {
        let all = IntervalMorphism::enumerate(m, n);
        all[i.index(all.len())]
    })
}

fn composable(max: usize) -> impl Strategy<Value = (IntervalMorphism, IntervalMorphism)> {
    (morphism(max), 0..=max, any::<prop::sample::Index>()).prop_map(|(f, l, i)| {
        let all = IntervalMorphism::enumerate(f.cod(), l);
        (f, all[i.index(all.len())])
    })
}

#[test]
fn hom_set_sizes_are_multiset_counts() {
    // weakly increasing maps into a chain of n + 2 points
    for m in 0..=5 {
        for n in 0..=5 {
            assert_eq!(IntervalMorphism::enumerate(m, n).len(), binomial(m + n + 1, m), "({m},{n})");
        }
    }
    assert_eq!(IntervalMorphism::enumerate(2, 1).len(), 6);
    assert_eq!(IntervalMorphism::enumerate(3, 2).len(), 20);
}

#[test]
fn total_category_hom_sizes() {
    let g = Arc::new(Symmetric::new(3));
    let total = total_category(&g, 3);
    for (a, b, size) in total.cat().hom_sizes() {
        assert_eq!(size, binomial(a + b + 1, a) * factorial(a), "({a},{b})");
    }
}

#[test]
fn closure_is_extensive_idempotent_and_monotone() {
    let g = Symmetric::new(3);
    let kinds = [FamilyKind::Triv, FamilyKind::Dec, FamilyKind::Kec, FamilyKind::Inr];
    let fams: Vec<_> = kinds.iter().map(|&k| builtin_family(&g, k, 3)).collect();
    for k in &fams {
        let bar = closure(&g, k);
        assert!(k.is_subfamily_of(&bar), "{}", k.name());
        let again = closure(&g, &bar);
        assert!(bar.morphisms().all(|phi| bar.get(phi) == again.get(phi)), "{}", k.name());
    }
    let (triv, inr) = (&fams[0], &fams[3]);
    assert!(triv.is_subfamily_of(inr));
    assert!(closure(&g, triv).is_subfamily_of(&closure(&g, inr)));
}

#[test]
fn families_are_recovered_from_their_quotients() {
    let g = Arc::new(Symmetric::new(3));
    let total = total_category(&g, 3);
    for kind in [FamilyKind::Triv, FamilyKind::Inr, FamilyKind::DecBar, FamilyKind::KecBar, FamilyKind::RSt] {
        let k = builtin_family(&*g, kind, 3);
        let q = build_quotal(&g, &k, 3).unwrap();
        let proj = q.projection(&total);
        assert!(validate_functor(&proj).passed(), "{}", kind.name());
        let back = recover_family(&total, &proj).unwrap();
        assert!(k.morphisms().all(|phi| k.get(phi) == back.get(phi)), "{}", kind.name());
    }
}

#[test]
fn projections_never_merge_active_morphisms_with_inert_ones() {
    let g = Arc::new(Symmetric::new(3));
    let total = total_category(&g, 3);
    let q = build_quotal(&g, &builtin_family(&*g, FamilyKind::RSt, 3), 3).unwrap();
    let proj = q.projection(&total);
    for f in total.cat().morphisms() {
        assert_eq!(total.is_active(f), q.is_active(proj.mor(f)));
        assert_eq!(total.is_inert(f), q.is_inert(proj.mor(f)));
    }
}

#[test]
fn commutativity_detects_exactly_the_commutative_monoids() {
    for order in 1..=3 {
        for m in FinMonoid::all_of_order(order) {
            let brute = (0..order).all(|a| (0..order).all(|b| m.mul(a, b) == m.mul(b, a)));
            assert_eq!(commutativity_check(&m, 3).commutative, brute);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_is_associative((f, g) in composable(4), l in 0usize..=4, i in any::<prop::sample::Index>()) {
        let hs = IntervalMorphism::enumerate(g.cod(), l);
        let h = hs[i.index(hs.len())];
        prop_assert_eq!(h.after(&g).after(&f), h.after(&g.after(&f)));
        prop_assert_eq!(IntervalMorphism::identity(g.cod()).after(&g), g);
    }

    #[test]
    fn factorization_recomposes(phi in morphism(5)) {
        let f = phi.factorize();
        prop_assert_eq!(f.mu.after(&f.rho), phi);
        prop_assert!(f.rho.is_inert() && f.mu.is_active());
        prop_assert!(f.rho.after(&f.delta).is_identity());
    }

    #[test]
    fn crossed_equations_at_higher_arity(phi in morphism(5), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let g = Symmetric::new(5);
        let els = g.elements(phi.cod());
        let (x, y) = (els[i.index(els.len())], els[j.index(els.len())]);
        let phi_y = push(&g, &phi, &y).unwrap();
        prop_assert_eq!(pullback(&g, &phi, &g.mul(&x, &y)), g.mul(&pullback(&g, &phi_y, &x), &pullback(&g, &phi, &y)));
        prop_assert_eq!(push(&g, &phi_y, &x).unwrap(), push(&g, &phi, &g.mul(&x, &y)).unwrap());
    }

    #[test]
    fn bounded_rst_criterion_agrees(phi in morphism(3), i in any::<prop::sample::Index>()) {
        let g = Symmetric::new(4);
        let els = g.elements(phi.dom());
        let x = els[i.index(els.len())];
        prop_assert_eq!(in_rst(&g, &phi, &x), in_rst_bounded(&g, &phi, &x));
    }
}
