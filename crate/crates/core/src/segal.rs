//! The interval nerve of a finite monoid, its category of elements, and the commutativity
//! criterion: the nerve always extends to `∇_𝔖`, and `M` is commutative exactly when the
//! extension identifies `(μ_n, σ)` with `(μ_n, e_n)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::fincat::{CategoryBuilder, FinCategory, Functor, MorId, ObjId};
use crate::interval::IntervalMorphism;
use crate::operad::{act_word, pullback, push, GroupOperad, Symmetric, Trivial};
use crate::quotal::{total_category, QuotalCategory};
use crate::report::{Report, Tally};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("the table is not {0}x{0}")]
    Shape(usize),
    #[error("entry {0} is not an element")]
    Entry(usize),
    #[error("{0} is not a unit")]
    Unit(String),
    #[error("({0}{1}){2} != {0}({1}{2})")]
    Associativity(String, String, String),
}

/// A finite monoid given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinMonoid {
    labels: Vec<String>,
    unit: usize,
    table: Vec<Vec<usize>>,
}

impl FinMonoid {
    pub fn new(labels: Vec<String>, unit: usize, table: Vec<Vec<usize>>) -> Result<Self, MonoidError> {
        let n = labels.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(MonoidError::Shape(n));
        }
        if let Some(&bad) = table.iter().flatten().find(|&&v| v >= n) {
            return Err(MonoidError::Entry(bad));
        }
        if unit >= n || (0..n).any(|x| table[unit][x] != x || table[x][unit] != x) {
            return Err(MonoidError::Unit(labels.get(unit).cloned().unwrap_or_default()));
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(MonoidError::Associativity(labels[x].clone(), labels[y].clone(), labels[z].clone()));
                    }
                }
            }
        }
        Ok(FinMonoid { labels, unit, table })
    }

    /// `ℤ/n` with elements `0, …, n-1`.
    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("{i}")).collect();
        let table = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        FinMonoid::new(labels, 0, table).expect("cyclic group")
    }

    /// `{e, a, b}` with `xy = x` for `x, y ∈ {a, b}`.
    pub fn left_zero() -> Self {
        let labels = ["e", "a", "b"].iter().map(|s| String::from(*s)).collect();
        FinMonoid::new(labels, 0, alloc::vec![alloc::vec![0, 1, 2], alloc::vec![1, 1, 1], alloc::vec![2, 2, 2]])
            .expect("left-zero monoid")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    /// `x₁ x₂ ⋯ x_k`, the unit when empty.
    pub fn product(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.unit, |acc, x| self.mul(acc, x))
    }

    /// The first pair with `xy ≠ yx`.
    pub fn noncommuting_pair(&self) -> Option<(usize, usize)> {
        let n = self.order();
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).find(|&(x, y)| self.mul(x, y) != self.mul(y, x))
    }

    /// Every monoid structure on `{0, …, n-1}` with unit `0`, in lexicographic order of tables.
    pub fn all_of_order(n: usize) -> Vec<FinMonoid> {
        let labels: Vec<String> = (0..n).map(|i| format!("{i}")).collect();
        if n == 0 {
            return Vec::new();
        }
        let free = (n - 1) * (n - 1);
        let mut out = Vec::new();
        let mut cells = alloc::vec![0usize; free];
        loop {
            let mut table: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| if x == 0 { y } else if y == 0 { x } else { 0 }).collect()).collect();
            for (k, &v) in cells.iter().enumerate() {
                table[1 + k / (n - 1)][1 + k % (n - 1)] = v;
            }
            if let Ok(m) = FinMonoid::new(labels.clone(), 0, table) {
                out.push(m);
            }
            let mut i = 0;
            while i < free {
                cells[i] += 1;
                if cells[i] < n {
                    break;
                }
                cells[i] = 0;
                i += 1;
            }
            if i == free {
                return out;
            }
        }
    }
}

fn tuples(order: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = alloc::vec![Vec::new()];
    for _ in 0..n {
        out = out.iter().flat_map(|t| (0..order).map(move |x| [t.as_slice(), &[x]].concat())).collect();
    }
    out
}

/// `M̂⊗ : ∇≤N → Set`, `⟨⟨n⟩⟩ ↦ Mⁿ`, with `φ_*(x⃗)_j = ∏_{φ(i)=j} x_i` in increasing `i`.
pub struct IntervalNerve {
    pub monoid: FinMonoid,
    pub base: QuotalCategory<Trivial>,
    /// `Mⁿ` in lexicographic order, for each `n ≤ N`.
    pub sets: Vec<Vec<Vec<usize>>>,
    index: Vec<BTreeMap<Vec<usize>, usize>>,
}

impl IntervalNerve {
    pub fn level(&self) -> usize {
        self.base.level()
    }

    pub fn position(&self, t: &[usize]) -> usize {
        self.index[t.len()][t]
    }

    pub fn apply(&self, phi: &IntervalMorphism, t: &[usize]) -> Vec<usize> {
        (1..=phi.cod()).map(|j| self.monoid.product(phi.fiber(j).into_iter().map(|i| t[i - 1]))).collect()
    }

    /// Identities act trivially and `(ψφ)_* = ψ_* φ_*`, for every composable pair in `∇≤N`.
    pub fn verify_functoriality(&self) -> Report {
        let c = self.base.cat();
        let mut t = Tally::new();
        let res = (|| {
            for n in 0..=self.level() {
                for x in &self.sets[n] {
                    t.check(&self.apply(&IntervalMorphism::identity(n), x) == x, || format!("id_{n} moves {x:?}"))?;
                }
            }
            for f in c.morphisms() {
                let phi = self.base.payload(f).0;
                for o in c.objects() {
                    for &g in c.hom(c.cod(f), o) {
                        let psi = self.base.payload(g).0;
                        let comp = psi.after(&phi);
                        for x in &self.sets[phi.dom()] {
                            t.check(self.apply(&comp, x) == self.apply(&psi, &self.apply(&phi, x)), || {
                                format!("({psi})({phi}) at {x:?}")
                            })?;
                        }
                    }
                }
            }
            Ok(())
        })();
        t.report(&format!("nerve-{}", self.monoid.order()), self.level(), res)
    }
}

pub fn interval_nerve(m: &FinMonoid, level: usize) -> IntervalNerve {
    let base = total_category(&Arc::new(Trivial::new(level)), level);
    let sets: Vec<Vec<Vec<usize>>> = (0..=level).map(|n| tuples(m.order(), n)).collect();
    let index = sets.iter().map(|s| s.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()).collect();
    IntervalNerve { monoid: m.clone(), base, sets, index }
}

/// The category of elements: objects `(⟨⟨n⟩⟩, x⃗)`, morphisms `(φ, x⃗): (⟨⟨m⟩⟩, x⃗) → (⟨⟨n⟩⟩, φ_* x⃗)`.
pub struct Elements {
    pub cat: Arc<FinCategory>,
    pub projection: Functor,
    objects: Vec<(usize, usize)>,
}

impl Elements {
    /// `(n, position of x⃗ in Mⁿ)`.
    pub fn object(&self, o: ObjId) -> (usize, usize) {
        self.objects[o]
    }
}

/// The target of the unique lift of `f = (φ, x)` out of `(⟨⟨m⟩⟩, x⃗)`: `φ_*(x_* x⃗)`.
pub fn transport<G: GroupOperad + 'static>(m: &FinMonoid, q: &QuotalCategory<G>, f: MorId, t: &[usize]) -> Vec<usize> {
    let (phi, x) = q.payload(f);
    let moved = act_word(&**q.operad(), &x, t).expect("arity");
    (1..=phi.cod()).map(|j| m.product(phi.fiber(j).into_iter().map(|i| moved[i - 1]))).collect()
}

fn elements_over<G: GroupOperad + 'static>(nerve: &IntervalNerve, q: &QuotalCategory<G>) -> Elements {
    let base = q.cat();
    let mut b = CategoryBuilder::new(format!("el-{}-{}", nerve.monoid.order(), q.operad().name()));
    let mut objects = Vec::new();
    let mut obj_of: BTreeMap<(usize, usize), ObjId> = BTreeMap::new();
    for n in 0..=q.level() {
        for (i, x) in nerve.sets[n].iter().enumerate() {
            let labels: Vec<&str> = x.iter().map(|&v| nerve.monoid.label(v)).collect();
            obj_of.insert((n, i), b.add_object(format!("<<{n}>>({})", labels.join(","))));
            objects.push((n, i));
        }
    }
    let mut mors: Vec<(MorId, ObjId)> = Vec::new();
    let mut mor_of: BTreeMap<(MorId, ObjId), MorId> = BTreeMap::new();
    for f in base.morphisms() {
        let (m, n) = (base.dom(f), base.cod(f));
        for (i, x) in nerve.sets[m].iter().enumerate() {
            let src = obj_of[&(m, i)];
            let tgt = obj_of[&(n, nerve.position(&transport(&nerve.monoid, q, f, x)))];
            let id = b.add_morphism(src, tgt, String::from(base.label(f)));
            mors.push((f, src));
            mor_of.insert((f, src), id);
        }
    }
    for (o, &(n, _)) in objects.iter().enumerate() {
        b.set_identity(o, mor_of[&(base.identity(n), o)]);
    }
    let cat = b
        .build_table(|g, f| {
            let ((bg, _), (bf, src)) = (mors[g], mors[f]);
            mor_of.get(&(base.comp(bg, bf), src)).copied()
        })
        .expect("category of elements");
    let cat = Arc::new(cat);
    let projection = Functor {
        source: cat.clone(),
        target: base.clone(),
        obj_map: objects.iter().map(|&(n, _)| n).collect(),
        mor_map: mors.iter().map(|&(f, _)| f).collect(),
    };
    Elements { cat, projection, objects }
}

/// The discrete fibration `M^⊗ → ∇≤N`.
pub fn grothendieck(nerve: &IntervalNerve) -> Elements {
    elements_over(nerve, &nerve.base)
}

/// The discrete fibration `M^∇_𝔖 → ∇_𝔖` of the extension, with its base.
pub fn symmetric_elements(nerve: &IntervalNerve) -> (Elements, QuotalCategory<Symmetric>) {
    let q = total_category(&Arc::new(Symmetric::new(nerve.level())), nerve.level());
    (elements_over(nerve, &q), q)
}

/// Each base morphism out of `p(X)` has exactly one lift with source `X`.
pub fn verify_discrete_fibration(el: &Elements) -> Report {
    let (c, p) = (&*el.cat, &el.projection);
    let base = &*p.target;
    let mut t = Tally::new();
    let res = (|| {
        for x in c.objects() {
            let mut lifts: BTreeMap<MorId, usize> = BTreeMap::new();
            for y in c.objects() {
                for &m in c.hom(x, y) {
                    *lifts.entry(p.mor(m)).or_default() += 1;
                }
            }
            for o in base.objects() {
                for &f in base.hom(p.obj(x), o) {
                    let k = lifts.get(&f).copied().unwrap_or(0);
                    t.check(k == 1, || format!("{} lifts to {} in {k} ways", base.label(f), c.object_label(x)))?;
                }
            }
        }
        Ok(())
    })();
    t.report(&format!("discrete-fibration-{}", c.name()), p.target.object_count().saturating_sub(1), res)
}

/// `(φ, x)_* = φ_* ∘ x_*` on `∇_𝔖`, with `x_* x⃗ = x_{x⁻¹(1)} … x_{x⁻¹(n)}`, is a functor:
/// `y_* φ_* = (φ^y)_* (φ*(y))_*`. This holds for every monoid.
pub fn verify_equivariance(nerve: &IntervalNerve) -> Report {
    let s = Symmetric::new(nerve.level());
    let mut t = Tally::new();
    let res = (|| {
        for m in 0..=nerve.level() {
            for n in 0..=nerve.level() {
                for phi in IntervalMorphism::enumerate(m, n) {
                    for y in s.elements(n) {
                        let (py, phiy) = (pullback(&s, &phi, y), push(&s, &phi, y).map_err(|e| format!("{e}"))?);
                        for x in &nerve.sets[m] {
                            let lhs = act_word(&s, y, &nerve.apply(&phi, x)).map_err(|e| format!("{e}"))?;
                            let rhs = nerve.apply(&phiy, &act_word(&s, &py, x).map_err(|e| format!("{e}"))?);
                            t.check(lhs == rhs, || format!("{phi} and {y} at {x:?}"))?;
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    t.report(&format!("equivariance-{}", nerve.monoid.order()), nerve.level(), res)
}

/// The outcome of the commutativity criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Commutativity {
    /// `(μ_n, σ)` and `(μ_n, e)` act identically on `Mⁿ` for all `n ≤ n_max`.
    pub commutative: bool,
    /// The first tuple on which they differ, with `n` and `σ`.
    pub witness: Option<(usize, Vec<usize>, Vec<usize>)>,
    /// `xy = yx` for all `x, y`.
    pub pairwise: bool,
    pub report: Report,
}

/// Compare the transports along `(μ_n, σ)` and `(μ_n, e_n)` in `M^∇_𝔖 → ∇_𝔖` for all `n ≤ n_max`,
/// and cross-check against the pairwise test.
pub fn commutativity_check(m: &FinMonoid, n_max: usize) -> Commutativity {
    let level = n_max.max(1);
    commutativity_over(m, &total_category(&Arc::new(Symmetric::new(level)), level), n_max)
}

/// As [`commutativity_check`], over a prebuilt `∇_𝔖` of level at least `n_max`.
pub fn commutativity_over(m: &FinMonoid, q: &QuotalCategory<Symmetric>, n_max: usize) -> Commutativity {
    let s = &**q.operad();
    let mut witness = None;
    let mut checked = 0u64;
    'outer: for n in 0..=n_max {
        let mu = IntervalMorphism::mu(n);
        let plain = q.morphism(&mu, &s.unit(n)).expect("within level");
        for sigma in s.elements(n) {
            let twisted = q.morphism(&mu, sigma).expect("within level");
            for x in tuples(m.order(), n) {
                checked += 1;
                if transport(m, q, twisted, &x) != transport(m, q, plain, &x) {
                    witness = Some((n, s.to_perm(sigma).one_line(), x));
                    break 'outer;
                }
            }
        }
    }
    let commutative = witness.is_none();
    let pairwise = m.noncommuting_pair().is_none();
    let id = "commutativity";
    let report = match &witness {
        None => Report::pass(id, n_max, checked).with_note("COMMUTATIVE"),
        Some((n, sigma, x)) => {
            let labels: Vec<&str> = x.iter().map(|&v| m.label(v)).collect();
            Report::fail(id, n_max, checked, format!("({})", labels.join(",")))
                .with_note(format!("NOT COMMUTATIVE at n={n} sigma={sigma:?}"))
        }
    };
    Commutativity { commutative, witness, pairwise, report }
}

/// The criterion agrees with the pairwise test for every monoid of order at most `order`.
pub fn verify_agreement(order: usize, n_max: usize) -> Report {
    let mut t = Tally::new();
    let res = (|| {
        let level = n_max.max(1);
        let q = total_category(&Arc::new(Symmetric::new(level)), level);
        for k in 1..=order {
            for m in FinMonoid::all_of_order(k) {
                let c = commutativity_over(&m, &q, n_max);
                t.check(c.commutative == c.pairwise, || format!("disagreement on {:?}", m.table))?;
            }
        }
        Ok(())
    })();
    t.report(&format!("agreement-order-{order}"), n_max, res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nerve_examples() {
        let z2 = FinMonoid::cyclic(2);
        let nerve = interval_nerve(&z2, 2);
        assert!(nerve.verify_functoriality().passed());
        assert_eq!(nerve.apply(&IntervalMorphism::mu(2), &[1, 1]), alloc::vec![0]);
        assert_eq!(nerve.apply(&IntervalMorphism::rho(2, 1), &[1, 0]), alloc::vec![1]);
        assert_eq!(nerve.apply(&IntervalMorphism::identity(2), &[1, 0]), alloc::vec![1, 0]);
        let el = grothendieck(&nerve);
        assert_eq!(el.cat.hom_sizes().len(), el.cat.object_count() * el.cat.object_count());
        assert_eq!(el.projection.obj_map.iter().filter(|&&n| n == 2).count(), 4);
        assert!(verify_discrete_fibration(&el).passed());
    }

    #[test]
    fn trivial_monoid_elements_are_the_base() {
        let el = grothendieck(&interval_nerve(&FinMonoid::cyclic(1), 2));
        assert!(el.projection.is_isomorphism());
    }

    #[test]
    fn commutativity() {
        let c = commutativity_check(&FinMonoid::cyclic(2), 3);
        assert!(c.commutative && c.pairwise && c.report.passed());
        let c = commutativity_check(&FinMonoid::left_zero(), 3);
        assert!(!c.commutative && !c.pairwise);
        assert_eq!(c.witness, Some((2, alloc::vec![2, 1], alloc::vec![1, 2])));
        assert_eq!(c.report.failure.as_deref(), Some("(a,b)"));
        assert!(alloc::format!("{}", c.report).starts_with("CHECK commutativity FAIL witness=(a,b)"));
        assert!(verify_equivariance(&interval_nerve(&FinMonoid::cyclic(3), 2)).passed());
        assert!(verify_equivariance(&interval_nerve(&FinMonoid::left_zero(), 2)).passed());
        // the lifts in the built fibration over ∇_𝔖 are the transports
        let nerve = interval_nerve(&FinMonoid::left_zero(), 2);
        let (el, q) = symmetric_elements(&nerve);
        assert!(verify_discrete_fibration(&el).passed());
        assert!(crate::fincat::validate_category(&el.cat).passed());
        for f in el.cat.morphisms() {
            let (n, i) = el.object(el.cat.dom(f));
            let (k, j) = el.object(el.cat.cod(f));
            let t = transport(&nerve.monoid, &q, el.projection.mor(f), &nerve.sets[n][i]);
            assert_eq!(t, nerve.sets[k][j]);
        }
    }

    #[test]
    fn monoid_validation() {
        let l = |n: usize| (0..n).map(|i| format!("{i}")).collect::<Vec<_>>();
        assert!(matches!(FinMonoid::new(l(2), 1, alloc::vec![alloc::vec![0, 1], alloc::vec![1, 0]]), Err(MonoidError::Unit(_))));
        assert_eq!(FinMonoid::all_of_order(1).len(), 1);
        assert_eq!(FinMonoid::all_of_order(2).len(), 2);
    }
}
