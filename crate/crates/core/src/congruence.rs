//! Congruence families `φ ↦ K_φ ⊆ 𝒢(m)` and the closure operator.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::interval::IntervalMorphism;
use crate::operad::{pullback, push, tuples, GroupOperad};
use crate::report::{Report, Tally};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{phi} lies outside the truncation level {level} of family {family}")]
    Truncation { family: String, phi: IntervalMorphism, level: usize },
    #[error("family {family} fails verification: {witness}")]
    Invalid { family: String, witness: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Triv,
    RSt,
    Dec,
    Kec,
    Inr,
    DecBar,
    KecBar,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Triv => "Triv",
            FamilyKind::RSt => "RSt",
            FamilyKind::Dec => "Dec",
            FamilyKind::Kec => "Kec",
            FamilyKind::Inr => "Inr",
            FamilyKind::DecBar => "DecBar",
            FamilyKind::KecBar => "KecBar",
        }
    }
}

/// A family of subgroups `K_φ ⊆ 𝒢(dom φ)`, tabulated for every `φ` with `m, n ≤ level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceFamily<E> {
    name: String,
    level: usize,
    table: BTreeMap<IntervalMorphism, Vec<E>>,
}

impl<E: Copy + Ord> CongruenceFamily<E> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Sorted members of `K_φ`.
    pub fn members(&self, phi: &IntervalMorphism) -> Result<&[E], FamilyError> {
        self.table.get(phi).map(Vec::as_slice).ok_or_else(|| FamilyError::Truncation {
            family: self.name.clone(),
            phi: *phi,
            level: self.level,
        })
    }

    /// Panics outside the truncation.
    pub fn get(&self, phi: &IntervalMorphism) -> &[E] {
        match self.table.get(phi) {
            Some(v) => v,
            None => panic!("{phi} lies outside level {} of {}", self.level, self.name),
        }
    }

    pub fn contains(&self, phi: &IntervalMorphism, x: &E) -> bool {
        self.get(phi).binary_search(x).is_ok()
    }

    pub fn morphisms(&self) -> impl Iterator<Item = &IntervalMorphism> {
        self.table.keys()
    }

    /// `K_φ ⊆ K'_φ` for every `φ` of the smaller level.
    pub fn is_subfamily_of(&self, other: &Self) -> bool {
        self.table.iter().all(|(phi, xs)| match other.table.get(phi) {
            Some(ys) => xs.iter().all(|x| ys.binary_search(x).is_ok()),
            None => true,
        })
    }

    /// Same family restricted to `m, n ≤ level`.
    pub fn restrict(&self, level: usize) -> Self {
        let table =
            self.table.iter().filter(|(p, _)| p.dom() <= level && p.cod() <= level).map(|(p, v)| (*p, v.clone())).collect();
        CongruenceFamily { name: self.name.clone(), level: level.min(self.level), table }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// A family given by a rule, tabulated up to `level`.
    pub fn from_fn(name: impl Into<String>, level: usize, mut f: impl FnMut(&IntervalMorphism) -> Vec<E>) -> Self {
        let table = IntervalMorphism::enumerate_upto(level)
            .into_iter()
            .map(|phi| {
                let mut v = f(&phi);
                v.sort();
                v.dedup();
                (phi, v)
            })
            .collect();
        CongruenceFamily { name: name.into(), level, table }
    }
}

/// `x ∈ RSt_φ` iff the underlying permutation of `x` preserves every fiber of `φ`.
pub fn in_rst<G: GroupOperad>(g: &G, phi: &IntervalMorphism, x: &G::Elem) -> bool {
    let p = g.to_perm(x);
    (1..=phi.dom()).all(|i| phi.value(p.image(i)) == phi.value(i))
}

/// `x ∈ RSt_φ` straight from the definition, `φψ^x = φψ`, with `ψ` ranging over `⟨⟨l⟩⟩ → ⟨⟨m⟩⟩`
/// for `l ≤ m + 1`. Needs the operad's arity bound to reach `m + 1`.
pub fn in_rst_bounded<G: GroupOperad>(g: &G, phi: &IntervalMorphism, x: &G::Elem) -> bool {
    let m = phi.dom();
    (0..=m + 1).all(|l| {
        IntervalMorphism::enumerate(l, m)
            .iter()
            .all(|psi| push(g, psi, x).map(|p| phi.after(&p) == phi.after(psi)).unwrap_or(false))
    })
}

fn dec_members<G: GroupOperad>(g: &G, phi: &IntervalMorphism) -> Vec<G::Elem> {
    let t = phi.fiber_tuple();
    let mut arities = Vec::with_capacity(t.k.len() + 2);
    arities.push(t.k_neg);
    arities.extend(&t.k);
    arities.push(t.k_pos);
    let choices: Vec<&[G::Elem]> = arities.iter().map(|&k| g.elements(k)).collect();
    let e = g.unit(arities.len());
    tuples(&choices).iter().map(|xs| g.compose(&e, xs)).collect()
}

/// Tabulate a named family on `∇≤level`.
pub fn builtin_family<G: GroupOperad>(g: &G, kind: FamilyKind, level: usize) -> CongruenceFamily<G::Elem> {
    assert!(level <= g.arity_bound(), "level exceeds the operad's arity bound");
    let name = kind.name();
    match kind {
        FamilyKind::Triv => CongruenceFamily::from_fn(name, level, |phi| alloc::vec![g.unit(phi.dom())]),
        FamilyKind::RSt => CongruenceFamily::from_fn(name, level, |phi| {
            g.elements(phi.dom()).iter().copied().filter(|x| in_rst(g, phi, x)).collect()
        }),
        FamilyKind::Dec => CongruenceFamily::from_fn(name, level, |phi| dec_members(g, phi)),
        FamilyKind::Kec => CongruenceFamily::from_fn(name, level, |phi| {
            dec_members(g, phi).into_iter().filter(|x| g.to_perm(x).is_identity()).collect()
        }),
        FamilyKind::Inr => closure(g, &builtin_family(g, FamilyKind::Triv, level)).renamed(name),
        FamilyKind::DecBar => closure(g, &builtin_family(g, FamilyKind::Dec, level)).renamed(name),
        FamilyKind::KecBar => closure(g, &builtin_family(g, FamilyKind::Kec, level)).renamed(name),
    }
}

/// An explicitly listed family: the given subgroups (closed under products), `{e}` elsewhere.
pub fn explicit_family<G: GroupOperad>(
    g: &G,
    name: &str,
    level: usize,
    entries: &[(IntervalMorphism, Vec<G::Elem>)],
) -> CongruenceFamily<G::Elem> {
    CongruenceFamily::from_fn(name, level, |phi| match entries.iter().find(|(p, _)| p == phi) {
        Some((_, gens)) => generated_subgroup(g, phi.dom(), gens),
        None => alloc::vec![g.unit(phi.dom())],
    })
}

/// Subgroup of `𝒢(n)` generated by `gens`.
pub fn generated_subgroup<G: GroupOperad>(g: &G, n: usize, gens: &[G::Elem]) -> Vec<G::Elem> {
    let mut out = alloc::vec![g.unit(n)];
    let mut frontier = out.clone();
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = g.mul(&x, s);
            if let Err(pos) = out.binary_search(&y) {
                out.insert(pos, y);
                frontier.push(y);
            }
        }
    }
    out
}

/// `K̄_φ = {x ∈ RSt_φ : δ*(x) ∈ K_μ}` where `φ = μρ` and `δ` is the section of `ρ`.
pub fn closure<G: GroupOperad>(g: &G, k: &CongruenceFamily<G::Elem>) -> CongruenceFamily<G::Elem> {
    let level = k.level();
    CongruenceFamily::from_fn(format!("{}Bar", k.name()), level, |phi| {
        let f = phi.factorize();
        g.elements(phi.dom())
            .iter()
            .copied()
            .filter(|x| in_rst(g, phi, x) && k.contains(&f.mu, &pullback(g, &f.delta, x)))
            .collect()
    })
}

/// Whether `xs` (sorted) is a subgroup of `𝒢(n)`.
pub(crate) fn subgroup_failure<G: GroupOperad>(g: &G, n: usize, xs: &[G::Elem]) -> Option<String> {
    if xs.binary_search(&g.unit(n)).is_err() {
        return Some("missing unit".to_string());
    }
    for x in xs {
        if xs.binary_search(&g.inv(x)).is_err() {
            return Some(format!("not closed under inverse at {x}"));
        }
        for y in xs {
            if xs.binary_search(&g.mul(x, y)).is_err() {
                return Some(format!("not closed under product at ({x},{y})"));
            }
        }
    }
    None
}

/// Exhaustive check of the four congruence-family axioms on `∇≤level`.
pub fn verify_family<G: GroupOperad>(g: &G, k: &CongruenceFamily<G::Elem>, level: usize) -> Report {
    let mut t = Tally::new();
    let res = verify_family_inner(g, k, level, &mut t);
    t.report(&format!("family-{}", k.name()), level, res)
}

fn verify_family_inner<G: GroupOperad>(
    g: &G,
    k: &CongruenceFamily<G::Elem>,
    level: usize,
    t: &mut Tally,
) -> Result<(), String> {
    if level > k.level() {
        return Err(format!("family tabulated only up to level {}", k.level()));
    }
    let phis: Vec<IntervalMorphism> = IntervalMorphism::enumerate_upto(level);
    for phi in &phis {
        let kphi = k.get(phi);
        let (m, n) = (phi.dom(), phi.cod());
        t.check(subgroup_failure(g, m, kphi).is_none(), || {
            format!("(i) K at {phi} is not a subgroup: {}", subgroup_failure(g, m, kphi).unwrap_or_default())
        })?;
        for x in kphi {
            t.check(in_rst(g, phi, x), || format!("(i) {x} ∈ K at {phi} is not in RSt"))?;
        }
        for p in 0..=level {
            for chi in IntervalMorphism::enumerate(n, p) {
                let target = chi.after(phi);
                for x in kphi {
                    t.check(k.contains(&target, x), || format!("(ii) postcomposition: phi={phi} chi={chi} x={x}"))?;
                }
            }
        }
        for l in 0..=level {
            for psi in IntervalMorphism::enumerate(l, m) {
                let target = phi.after(&psi);
                for x in kphi {
                    let px = pullback(g, &psi, x);
                    t.check(k.contains(&target, &px), || format!("(iii) pullback: phi={phi} psi={psi} x={x}"))?;
                }
            }
        }
        for y in g.elements(n) {
            let py = pullback(g, phi, y);
            let pyi = g.inv(&py);
            let pushed = push(g, phi, y).map_err(|e| format!("{e}"))?;
            let mut conj: Vec<G::Elem> = kphi.iter().map(|x| g.mul(&g.mul(&py, x), &pyi)).collect();
            conj.sort();
            t.check(conj.as_slice() == k.get(&pushed), || format!("(iv) conjugation: phi={phi} y={y}"))?;
        }
    }
    Ok(())
}

/// Conditions (♠1) and (♠2) for a pair `(K, L)`, together with properness of both.
pub fn verify_pair<G: GroupOperad>(
    g: &G,
    k: &CongruenceFamily<G::Elem>,
    l: &CongruenceFamily<G::Elem>,
    level: usize,
) -> Report {
    let inr = builtin_family(g, FamilyKind::Inr, level);
    let k = k.restrict(level);
    let l = l.restrict(level);
    let id = format!("pair-{}-{}", k.name(), l.name());

    let mut t1 = Tally::new();
    let r1 = (|| {
        for phi in IntervalMorphism::enumerate_upto(level) {
            let lphi = l.get(&phi);
            for x in k.get(&phi) {
                let xi = g.inv(x);
                let mut conj: Vec<G::Elem> = lphi.iter().map(|u| g.mul(&g.mul(x, u), &xi)).collect();
                conj.sort();
                t1.check(conj.as_slice() == lphi, || format!("phi={phi} x={x} does not normalize L"))?;
            }
        }
        Ok(())
    })();

    let mut t2 = Tally::new();
    let r2 = (|| {
        for phi in IntervalMorphism::enumerate_upto(level) {
            for p in 0..=level {
                for psi in IntervalMorphism::enumerate(phi.cod(), p) {
                    let comp = psi.after(&phi);
                    for u in l.get(&psi) {
                        let pu = pullback(g, &phi, u);
                        let pui = g.inv(&pu);
                        for x in k.get(&phi) {
                            let a = g.mul(&g.mul(&pu, x), &pui);
                            let d = g.mul(&a, &g.inv(x));
                            t2.check(inr.contains(&comp, &d), || format!("phi={phi} psi={psi} u={u} x={x}"))?;
                        }
                    }
                }
            }
        }
        Ok(())
    })();

    let proper = |f: &CongruenceFamily<G::Elem>| {
        let bar = closure(g, f);
        Report::from_result(
            format!("proper-{}", f.name()),
            level,
            1,
            if bar.table == f.table { Ok(()) } else { Err(format!("{} differs from its closure", f.name())) },
        )
    };

    Report::all(
        id,
        level,
        &[
            t1.report("spade1", level, r1),
            t2.report("spade2", level, r2),
            proper(&k),
            proper(&l),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Point::*;
    use crate::operad::Symmetric;
    use crate::perm::Permutation;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_one_line(v).unwrap()
    }

    fn im(cod: usize, v: &[crate::interval::Point]) -> IntervalMorphism {
        IntervalMorphism::new(v.len(), cod, v).unwrap()
    }

    #[test]
    fn builtin_examples() {
        let s = Symmetric::new(4);
        let rst = builtin_family(&s, FamilyKind::RSt, 4);
        assert_eq!(rst.get(&IntervalMorphism::mu(2)).len(), 2);
        let dec = builtin_family(&s, FamilyKind::Dec, 4);
        let phi = im(2, &[Fin(1), Fin(1), Fin(2), Fin(2)]);
        assert_eq!(dec.get(&phi), &[p(&[1, 2, 3, 4]), p(&[1, 2, 4, 3]), p(&[2, 1, 3, 4]), p(&[2, 1, 4, 3])]);
        let kec = builtin_family(&s, FamilyKind::Kec, 4);
        assert!(kec.morphisms().all(|phi| kec.get(phi).len() == 1));
        let inr = builtin_family(&s, FamilyKind::Inr, 3);
        let rho = im(1, &[NegInf, NegInf, Fin(1)]);
        assert_eq!(inr.get(&rho), &[p(&[1, 2, 3]), p(&[2, 1, 3])]);
    }

    #[test]
    fn closure_examples() {
        let s = Symmetric::new(4);
        let triv = builtin_family(&s, FamilyKind::Triv, 3);
        let inr = builtin_family(&s, FamilyKind::Inr, 3);
        assert_eq!(closure(&s, &triv).table, inr.table);
        let dec = builtin_family(&s, FamilyKind::Dec, 3);
        let rho = im(1, &[NegInf, NegInf, Fin(1)]);
        assert_eq!(closure(&s, &dec).get(&rho).len(), 2);
        let bar = closure(&s, &dec);
        assert_eq!(closure(&s, &bar).table, bar.table);
    }

    #[test]
    fn family_verification() {
        let s = Symmetric::new(3);
        for kind in [FamilyKind::Triv, FamilyKind::RSt, FamilyKind::Dec, FamilyKind::Inr, FamilyKind::KecBar] {
            let r = verify_family(&s, &builtin_family(&s, kind, 3), 3);
            assert!(r.passed(), "{r}");
        }
        let bad = explicit_family(&s, "bad", 3, &[(IntervalMorphism::mu(3), alloc::vec![p(&[2, 1, 3])])]);
        let r = verify_family(&s, &bad, 3);
        assert!(r.failure.as_deref().unwrap().starts_with("(ii)"), "{r}");
    }

    #[test]
    fn pair_conditions() {
        let s = Symmetric::new(3);
        let inr = builtin_family(&s, FamilyKind::Inr, 3);
        let decbar = builtin_family(&s, FamilyKind::DecBar, 3);
        let kecbar = builtin_family(&s, FamilyKind::KecBar, 3);
        assert!(verify_pair(&s, &inr, &kecbar, 3).passed());
        assert!(verify_pair(&s, &decbar, &kecbar, 3).passed());
        let k = explicit_family(&s, "K", 3, &[(IntervalMorphism::mu(3), alloc::vec![p(&[1, 3, 2])])]);
        let l = explicit_family(&s, "L", 3, &[(IntervalMorphism::mu(3), alloc::vec![p(&[2, 1, 3])])]);
        let r = verify_pair(&s, &k, &l, 3);
        assert!(r.failure.as_deref().unwrap().starts_with("spade1"), "{r}");
    }
}
