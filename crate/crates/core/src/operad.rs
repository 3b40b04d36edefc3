//! Group operads, the crossed interval action they induce, and the word calculus.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::interval::{IntervalMorphism, MAX_DIM};
use crate::perm::Permutation;
use crate::report::{Report, Tally};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OperadError {
    #[error("arity {arity} exceeds the operad bound {bound}")]
    Truncation { arity: usize, bound: usize },
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("pushed map {0} is not monotone")]
    NotMonotone(String),
}

/// A group operad `𝒢` truncated at `arity_bound`, with its map to the symmetric operad.
pub trait GroupOperad: Send + Sync {
    type Elem: Copy + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static;

    fn name(&self) -> &str;
    fn arity_bound(&self) -> usize;
    fn arity(&self, x: &Self::Elem) -> usize;
    /// The group `𝒢(n)`, sorted; panics for `n > arity_bound`.
    fn elements(&self, n: usize) -> &[Self::Elem];
    fn unit(&self, n: usize) -> Self::Elem;
    /// Product of two elements of the same arity.
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Self::Elem;
    fn to_perm(&self, x: &Self::Elem) -> Permutation;
    /// Operadic composition; callers guarantee `ys.len() = arity(x)` and the bound.
    fn compose(&self, x: &Self::Elem, ys: &[Self::Elem]) -> Self::Elem;
    /// The element with the given underlying permutation, if there is exactly one.
    fn lift_perm(&self, p: &Permutation) -> Option<Self::Elem>;
}

/// The symmetric operad `𝔖`.
#[derive(Clone, Debug)]
pub struct Symmetric {
    bound: usize,
    elems: Vec<Vec<Permutation>>,
}

impl Symmetric {
    pub fn new(bound: usize) -> Self {
        assert!(bound <= 8, "symmetric groups beyond arity 8 are not tabulated");
        Symmetric { bound, elems: (0..=bound).map(Permutation::all).collect() }
    }
}

impl GroupOperad for Symmetric {
    type Elem = Permutation;

    fn name(&self) -> &str {
        "symmetric"
    }
    fn arity_bound(&self) -> usize {
        self.bound
    }
    fn arity(&self, x: &Permutation) -> usize {
        x.n()
    }
    fn elements(&self, n: usize) -> &[Permutation] {
        &self.elems[n]
    }
    fn unit(&self, n: usize) -> Permutation {
        Permutation::identity(n)
    }
    fn mul(&self, x: &Permutation, y: &Permutation) -> Permutation {
        x.mul(y)
    }
    fn inv(&self, x: &Permutation) -> Permutation {
        x.inverse()
    }
    fn to_perm(&self, x: &Permutation) -> Permutation {
        *x
    }
    fn compose(&self, x: &Permutation, ys: &[Permutation]) -> Permutation {
        x.gamma(ys)
    }
    fn lift_perm(&self, p: &Permutation) -> Option<Permutation> {
        (p.n() <= self.bound).then_some(*p)
    }
}

/// Element of the trivial operad: only the arity is recorded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrivialElem(pub u8);

impl fmt::Display for TrivialElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// The trivial operad: every `𝒢(n)` is the one-element group.
#[derive(Clone, Debug)]
pub struct Trivial {
    bound: usize,
    elems: Vec<[TrivialElem; 1]>,
}

impl Trivial {
    pub fn new(bound: usize) -> Self {
        assert!(bound <= MAX_DIM);
        Trivial { bound, elems: (0..=bound).map(|n| [TrivialElem(n as u8)]).collect() }
    }
}

impl GroupOperad for Trivial {
    type Elem = TrivialElem;

    fn name(&self) -> &str {
        "trivial"
    }
    fn arity_bound(&self) -> usize {
        self.bound
    }
    fn arity(&self, x: &TrivialElem) -> usize {
        x.0 as usize
    }
    fn elements(&self, n: usize) -> &[TrivialElem] {
        &self.elems[n]
    }
    fn unit(&self, n: usize) -> TrivialElem {
        TrivialElem(n as u8)
    }
    fn mul(&self, x: &TrivialElem, _y: &TrivialElem) -> TrivialElem {
        *x
    }
    fn inv(&self, x: &TrivialElem) -> TrivialElem {
        *x
    }
    fn to_perm(&self, x: &TrivialElem) -> Permutation {
        Permutation::identity(x.0 as usize)
    }
    fn compose(&self, _x: &TrivialElem, ys: &[TrivialElem]) -> TrivialElem {
        TrivialElem(ys.iter().map(|y| y.0).sum())
    }
    fn lift_perm(&self, p: &Permutation) -> Option<TrivialElem> {
        (p.is_identity() && p.n() <= self.bound).then_some(TrivialElem(p.n() as u8))
    }
}

/// Checked operadic composition `γ(x; y_1, …, y_n)`.
pub fn gamma<G: GroupOperad>(g: &G, x: &G::Elem, ys: &[G::Elem]) -> Result<G::Elem, OperadError> {
    let n = g.arity(x);
    if ys.len() != n {
        return Err(OperadError::ArityMismatch { expected: n, got: ys.len() });
    }
    let total: usize = ys.iter().map(|y| g.arity(y)).sum();
    if total > g.arity_bound() {
        return Err(OperadError::Truncation { arity: total, bound: g.arity_bound() });
    }
    Ok(g.compose(x, ys))
}

#[derive(Clone, Debug)]
pub enum GroupOp<E> {
    Mul(E, E),
    Inv(E),
    Unit(usize),
}

pub fn group_law<G: GroupOperad>(g: &G, op: GroupOp<G::Elem>) -> Result<G::Elem, OperadError> {
    match op {
        GroupOp::Mul(x, y) => {
            let (a, b) = (g.arity(&x), g.arity(&y));
            if a != b {
                return Err(OperadError::ArityMismatch { expected: a, got: b });
            }
            Ok(g.mul(&x, &y))
        }
        GroupOp::Inv(x) => Ok(g.inv(&x)),
        GroupOp::Unit(n) => {
            if n > g.arity_bound() {
                return Err(OperadError::Truncation { arity: n, bound: g.arity_bound() });
            }
            Ok(g.unit(n))
        }
    }
}

/// `φ*(y) = γ(e_3; e_{k_{-∞}}, γ(y; e_{k_1}, …, e_{k_n}), e_{k_{+∞}})`.
pub fn pullback<G: GroupOperad>(g: &G, phi: &IntervalMorphism, y: &G::Elem) -> G::Elem {
    debug_assert_eq!(g.arity(y), phi.cod());
    let t = phi.fiber_tuple();
    let units: Vec<G::Elem> = t.k.iter().map(|&k| g.unit(k)).collect();
    let mid = g.compose(y, &units);
    g.compose(&g.unit(3), &[g.unit(t.k_neg), mid, g.unit(t.k_pos)])
}

/// `φ^y`, solved from `ȳ ∘ φ = φ^y ∘ (underlying φ*(y))`.
pub fn push<G: GroupOperad>(g: &G, phi: &IntervalMorphism, y: &G::Elem) -> Result<IntervalMorphism, OperadError> {
    let p = g.to_perm(&pullback(g, phi, y)).inverse();
    let ybar = g.to_perm(y);
    push_with(phi, &p, &ybar)
}

fn push_with(phi: &IntervalMorphism, p_inv: &Permutation, ybar: &Permutation) -> Result<IntervalMorphism, OperadError> {
    let m = phi.dom();
    let mut raw = [0u8; MAX_DIM];
    for j in 0..m {
        let i = p_inv.zero_based()[j] as usize;
        raw[j] = match phi.finite_at(i) {
            Some(v) => ybar.image(v) as u8,
            None => phi.raw()[i],
        };
        if j > 0 && raw[j - 1] > raw[j] {
            return Err(OperadError::NotMonotone(format!("{phi} pushed by {ybar}")));
        }
    }
    Ok(IntervalMorphism::from_raw(m, phi.cod(), &raw))
}

/// The pair `(φ*(y), φ^y)`.
pub fn crossed_action<G: GroupOperad>(
    g: &G,
    phi: &IntervalMorphism,
    y: &G::Elem,
) -> Result<(G::Elem, IntervalMorphism), OperadError> {
    if g.arity(y) != phi.cod() {
        return Err(OperadError::ArityMismatch { expected: phi.cod(), got: g.arity(y) });
    }
    if phi.dom() > g.arity_bound() {
        return Err(OperadError::Truncation { arity: phi.dom(), bound: g.arity_bound() });
    }
    let pb = pullback(g, phi, y);
    let pushed = push_with(phi, &g.to_perm(&pb).inverse(), &g.to_perm(y))?;
    Ok((pb, pushed))
}

/// `x_* a⃗ = a_{x⁻¹(1)} … a_{x⁻¹(n)}`.
pub fn act_word<G: GroupOperad, T: Clone>(g: &G, x: &G::Elem, w: &[T]) -> Result<Vec<T>, OperadError> {
    let p = g.to_perm(x);
    if p.n() != w.len() {
        return Err(OperadError::ArityMismatch { expected: p.n(), got: w.len() });
    }
    Ok(permute_word(&p, w))
}

pub(crate) fn permute_word<T: Clone>(p: &Permutation, w: &[T]) -> Vec<T> {
    let inv = p.inverse();
    (1..=w.len()).map(|j| w[inv.image(j) - 1].clone()).collect()
}

/// The subword `a⃗^φ_j` indexed by `φ⁻¹{j}`.
pub fn word_fiber<T: Clone>(w: &[T], phi: &IntervalMorphism, j: usize) -> Result<Vec<T>, OperadError> {
    if w.len() != phi.dom() {
        return Err(OperadError::ArityMismatch { expected: phi.dom(), got: w.len() });
    }
    if j == 0 || j > phi.cod() {
        return Err(OperadError::ArityMismatch { expected: phi.cod(), got: j });
    }
    Ok(phi.fiber(j).into_iter().map(|i| w[i - 1].clone()).collect())
}

/// All tuples `(e_1, …, e_r)` with `e_i` ranging over `choices[i]`.
pub(crate) fn tuples<T: Clone>(choices: &[&[T]]) -> Vec<Vec<T>> {
    let mut out = alloc::vec![Vec::new()];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for prefix in &out {
            for v in c.iter() {
                let mut t = prefix.clone();
                t.push(v.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Sequences of `parts` naturals summing to at most `bound`.
pub(crate) fn arity_vectors(parts: usize, bound: usize) -> Vec<Vec<usize>> {
    fn rec(parts: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(parts - 1, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(parts, bound, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive check of group, operad, interchange and crossed-interval laws up to `n_max`.
pub fn verify_axioms<G: GroupOperad>(g: &G, n_max: usize) -> Report {
    let mut t = Tally::new();
    let res = (|| {
        if n_max > g.arity_bound() {
            return Err(format!("n_max {n_max} exceeds arity bound {}", g.arity_bound()));
        }
        check_groups(g, n_max, &mut t)?;
        check_operad(g, n_max, &mut t)?;
        check_crossed(g, n_max, &mut t)
    })();
    t.report(&format!("axioms-{}", g.name()), n_max, res)
}

fn check_groups<G: GroupOperad>(g: &G, n_max: usize, t: &mut Tally) -> Result<(), String> {
    for n in 0..=n_max {
        let els = g.elements(n);
        let e = g.unit(n);
        t.check(els.contains(&e), || format!("unit e_{n} missing from G({n})"))?;
        for x in els {
            t.check(g.mul(&e, x) == *x && g.mul(x, &e) == *x, || format!("unit law fails at {x}"))?;
            let xi = g.inv(x);
            t.check(g.mul(x, &xi) == e && g.mul(&xi, x) == e, || format!("inverse law fails at {x}"))?;
            t.check(g.to_perm(&xi) == g.to_perm(x).inverse(), || format!("to_perm does not commute with inverse at {x}"))?;
            for y in els {
                let xy = g.mul(x, y);
                t.check(g.to_perm(&xy) == g.to_perm(x).mul(&g.to_perm(y)), || {
                    format!("to_perm not multiplicative at ({x},{y})")
                })?;
                for z in els {
                    t.check(g.mul(&xy, z) == g.mul(x, &g.mul(y, z)), || format!("associativity fails at ({x},{y},{z})"))?;
                }
            }
        }
    }
    Ok(())
}

fn check_operad<G: GroupOperad>(g: &G, n_max: usize, t: &mut Tally) -> Result<(), String> {
    let e1 = g.unit(1);
    for n in 0..=n_max {
        for x in g.elements(n) {
            let units = alloc::vec![e1; n];
            t.check(g.compose(x, &units) == *x, || format!("right unit fails at {x}"))?;
            t.check(g.compose(&e1, &[*x]) == *x, || format!("left unit fails at {x}"))?;
        }
    }
    for n in 0..=n_max {
        for k in arity_vectors(n, n_max) {
            let kk: usize = k.iter().sum();
            let ys_choices: Vec<&[G::Elem]> = k.iter().map(|&ki| g.elements(ki)).collect();
            let all_ys = tuples(&ys_choices);
            for x in g.elements(n) {
                for ys in &all_ys {
                    let c = g.compose(x, ys);
                    let expect = g.to_perm(x).gamma(&ys.iter().map(|y| g.to_perm(y)).collect::<Vec<_>>());
                    t.check(g.to_perm(&c) == expect, || format!("to_perm is not an operad map at γ({x};{ys:?})"))?;
                }
            }
            // interchange: γ(xy; x_i y_i) = γ(x; x_{y⁻¹(i)}) γ(y; y_i)
            for x in g.elements(n) {
                for y in g.elements(n) {
                    let yinv = g.to_perm(y).inverse();
                    for xs in &all_ys {
                        for ys in &all_ys {
                            let prod: Vec<G::Elem> = xs.iter().zip(ys).map(|(a, b)| g.mul(a, b)).collect();
                            let lhs = g.compose(&g.mul(x, y), &prod);
                            let perm_xs: Vec<G::Elem> = (1..=n).map(|i| xs[yinv.image(i) - 1]).collect();
                            let rhs = g.mul(&g.compose(x, &perm_xs), &g.compose(y, ys));
                            t.check(lhs == rhs, || format!("interchange fails at x={x} y={y} xs={xs:?} ys={ys:?}"))?;
                        }
                    }
                }
            }
            // associativity: γ(γ(x; y⃗); z⃗) = γ(x; γ(y_i; z⃗_i))
            for l in arity_vectors(kk, n_max) {
                let zs_choices: Vec<&[G::Elem]> = l.iter().map(|&li| g.elements(li)).collect();
                let all_zs = tuples(&zs_choices);
                for x in g.elements(n) {
                    for ys in &all_ys {
                        let xy = g.compose(x, ys);
                        for zs in &all_zs {
                            let lhs = g.compose(&xy, zs);
                            let mut off = 0;
                            let inner: Vec<G::Elem> = ys
                                .iter()
                                .zip(&k)
                                .map(|(y, &ki)| {
                                    let r = g.compose(y, &zs[off..off + ki]);
                                    off += ki;
                                    r
                                })
                                .collect();
                            let rhs = g.compose(x, &inner);
                            t.check(lhs == rhs, || format!("associativity fails at x={x} ys={ys:?} zs={zs:?}"))?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_crossed<G: GroupOperad>(g: &G, n_max: usize, t: &mut Tally) -> Result<(), String> {
    let push_checked = |phi: &IntervalMorphism, y: &G::Elem| push(g, phi, y).map_err(|e| format!("{e}"));
    for m in 0..=n_max {
        for n in 0..=n_max {
            for phi in IntervalMorphism::enumerate(m, n) {
                t.check(pullback(g, &phi, &g.unit(n)) == g.unit(m), || format!("{phi}*(e) ≠ e"))?;
                t.check(push_checked(&phi, &g.unit(n))? == phi, || format!("{phi}^e ≠ {phi}"))?;
                for y in g.elements(n) {
                    let phi_y = push_checked(&phi, y)?;
                    let pb_y = pullback(g, &phi, y);
                    for x in g.elements(n) {
                        // φ*(xy) = (φ^y)*(x) φ*(y)
                        let lhs = pullback(g, &phi, &g.mul(x, y));
                        let rhs = g.mul(&pullback(g, &phi_y, x), &pb_y);
                        t.check(lhs == rhs, || format!("φ*(xy) ≠ (φ^y)*(x)φ*(y) at φ={phi} x={x} y={y}"))?;
                        // left action: φ^{xy} = (φ^y)^x
                        let a = push_checked(&phi, &g.mul(x, y))?;
                        let b = push_checked(&phi_y, x)?;
                        t.check(a == b, || format!("φ^(xy) ≠ (φ^y)^x at φ={phi} x={x} y={y}"))?;
                    }
                }
                for l in 0..=n_max {
                    for psi in IntervalMorphism::enumerate(l, m) {
                        let phipsi = phi.after(&psi);
                        for x in g.elements(n) {
                            let pbx = pullback(g, &phi, x);
                            // (φψ)* = ψ* φ*
                            t.check(pullback(g, &phipsi, x) == pullback(g, &psi, &pbx), || {
                                format!("(φψ)* ≠ ψ*φ* at φ={phi} ψ={psi} x={x}")
                            })?;
                            // (φψ)^x = φ^x ψ^{φ*(x)}
                            let lhs = push_checked(&phipsi, x)?;
                            let rhs = push_checked(&phi, x)?.after(&push_checked(&psi, &pbx)?);
                            t.check(lhs == rhs, || format!("(φψ)^x ≠ φ^x ψ^(φ*(x)) at φ={phi} ψ={psi} x={x}"))?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Point::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_one_line(v).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let s = Symmetric::new(4);
        let swap = p(&[2, 1]);
        assert_eq!(gamma(&s, &swap, &[s.unit(2), s.unit(1)]).unwrap(), p(&[2, 3, 1]));
        assert_eq!(gamma(&s, &s.unit(2), &[swap, swap]).unwrap(), p(&[2, 1, 4, 3]));
        let x = p(&[3, 1, 2]);
        assert_eq!(gamma(&s, &x, &[s.unit(1); 3]).unwrap(), x);
        assert!(matches!(gamma(&s, &swap, &[p(&[1, 2, 3]), p(&[2, 1])]), Err(OperadError::Truncation { .. })));
        assert!(matches!(gamma(&s, &swap, &[swap]), Err(OperadError::ArityMismatch { .. })));
    }

    #[test]
    fn group_law_examples() {
        let s = Symmetric::new(3);
        let swap = p(&[2, 1]);
        assert_eq!(group_law(&s, GroupOp::Mul(swap, swap)).unwrap(), s.unit(2));
        assert_eq!(group_law(&s, GroupOp::Inv(p(&[2, 3, 1]))).unwrap(), p(&[3, 1, 2]));
        assert!(group_law(&s, GroupOp::Mul(swap, s.unit(3))).is_err());
        let tr = Trivial::new(4);
        assert_eq!(group_law(&tr, GroupOp::Unit(3)).unwrap(), TrivialElem(3));
        assert_eq!(tr.elements(3), &[TrivialElem(3)]);
    }

    #[test]
    fn crossed_action_examples() {
        let s = Symmetric::new(4);
        let swap = p(&[2, 1]);
        let phi = IntervalMorphism::new(3, 2, &[Fin(1), Fin(1), Fin(2)]).unwrap();
        let (pb, pushed) = crossed_action(&s, &phi, &swap).unwrap();
        assert_eq!(pb, p(&[2, 3, 1]));
        assert_eq!(pushed, IntervalMorphism::new(3, 2, &[Fin(1), Fin(2), Fin(2)]).unwrap());
        let id2 = IntervalMorphism::identity(2);
        assert_eq!(crossed_action(&s, &id2, &swap).unwrap(), (swap, id2));
        let rho = IntervalMorphism::rho(3, 2);
        assert_eq!(crossed_action(&s, &rho, &s.unit(1)).unwrap(), (s.unit(3), rho));
    }

    #[test]
    fn word_examples() {
        let s = Symmetric::new(3);
        assert_eq!(act_word(&s, &s.unit(3), &['a', 'b', 'c']).unwrap(), ['a', 'b', 'c']);
        assert_eq!(act_word(&s, &p(&[2, 1]), &['a', 'b']).unwrap(), ['b', 'a']);
        assert_eq!(act_word(&s, &p(&[2, 3, 1]), &['a', 'b', 'c']).unwrap(), ['c', 'a', 'b']);
        let id = IntervalMorphism::identity(3);
        assert_eq!(word_fiber(&['a', 'b', 'c'], &id, 2).unwrap(), ['b']);
        let phi = IntervalMorphism::new(3, 2, &[Fin(1), Fin(1), Fin(2)]).unwrap();
        assert_eq!(word_fiber(&['a', 'b', 'c'], &phi, 1).unwrap(), ['a', 'b']);
        assert_eq!(word_fiber(&['a', 'b', 'c'], &phi, 2).unwrap(), ['c']);
        assert!(word_fiber(&['a', 'b', 'c'], &phi, 3).is_err());
    }

    #[test]
    fn axioms_small() {
        assert!(verify_axioms(&Trivial::new(3), 3).passed());
        let r = verify_axioms(&Symmetric::new(3), 3);
        assert!(r.passed(), "{r}");
    }
}
