//! The interval category: objects `⟨⟨n⟩⟩ = {-∞, 1, …, n, +∞}` and monotone maps fixing both
//! endpoints.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Largest `n` for which `⟨⟨n⟩⟩` can be represented.
pub const MAX_DIM: usize = 16;

const NEG: u8 = 0;
const POS: u8 = u8::MAX;

/// A point of `⟨⟨n⟩⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    NegInf,
    Fin(usize),
    PosInf,
}

impl Point {
    fn encode(self) -> u8 {
        match self {
            Point::NegInf => NEG,
            Point::Fin(j) => j as u8,
            Point::PosInf => POS,
        }
    }

    fn decode(raw: u8) -> Point {
        match raw {
            NEG => Point::NegInf,
            POS => Point::PosInf,
            j => Point::Fin(j as usize),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::NegInf => f.write_str("-inf"),
            Point::Fin(j) => write!(f, "{j}"),
            Point::PosInf => f.write_str("+inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("cannot compose: source has codomain {cod} but target has domain {dom}")]
    DimensionMismatch { dom: usize, cod: usize },
    #[error("values are not monotone at position {0}")]
    NotMonotone(usize),
    #[error("value {value} at position {position} is outside ⟨⟨{cod}⟩⟩")]
    OutOfRange { position: usize, value: usize, cod: usize },
    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("morphism {0} is not active")]
    NotActive(IntervalMorphism),
    #[error("dimension {0} exceeds the supported maximum {MAX_DIM}")]
    TooLarge(usize),
}

/// A morphism `⟨⟨m⟩⟩ → ⟨⟨n⟩⟩`, stored by its values on `1..=m`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalMorphism {
    dom: u8,
    cod: u8,
    vals: [u8; MAX_DIM],
}

/// Sizes of the fibers of a morphism: `k_{-∞}`, `k_1..k_n`, `k_{+∞}`, counting finite points only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberTuple {
    pub k_neg: usize,
    pub k: Vec<usize>,
    pub k_pos: usize,
}

impl FiberTuple {
    pub fn total(&self) -> usize {
        self.k_neg + self.k.iter().sum::<usize>() + self.k_pos
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphismClass {
    /// Both active and inert; only identities.
    Identity,
    Active,
    Inert,
    Mixed,
}

/// The inert-active factorization `f = mu ∘ rho` together with the section `delta` of `rho`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub class: MorphismClass,
    pub rho: IntervalMorphism,
    pub mu: IntervalMorphism,
    pub delta: IntervalMorphism,
}

/// Names of the morphisms that recur in the constructions.
#[derive(Clone, Debug)]
pub enum Canonical<'a> {
    Id(usize),
    /// `μ_n: ⟨⟨n⟩⟩ → ⟨⟨1⟩⟩`, everything to `1`.
    Mu(usize),
    /// `ρ_i: ⟨⟨n⟩⟩ → ⟨⟨1⟩⟩`.
    Rho { n: usize, i: usize },
    /// `ρ^{(k)}_i: ⟨⟨Σk⟩⟩ → ⟨⟨k_i⟩⟩`, keeping the `i`-th block.
    BlockRho { k: &'a [usize], i: usize },
    /// `δ^{(φ)}_j: ⟨⟨k_j⟩⟩ → ⟨⟨m⟩⟩`, enumerating the fiber of `φ` over `j`.
    DeltaFiber { phi: &'a IntervalMorphism, j: usize },
}

fn check_dim(n: usize) -> Result<(), IntervalError> {
    if n > MAX_DIM || n >= POS as usize {
        Err(IntervalError::TooLarge(n))
    } else {
        Ok(())
    }
}

impl IntervalMorphism {
    pub fn new(dom: usize, cod: usize, values: &[Point]) -> Result<Self, IntervalError> {
        check_dim(dom)?;
        check_dim(cod)?;
        if values.len() != dom {
            return Err(IntervalError::WrongLength { expected: dom, got: values.len() });
        }
        let mut vals = [0u8; MAX_DIM];
        for (i, &p) in values.iter().enumerate() {
            if let Point::Fin(j) = p {
                if j == 0 || j > cod {
                    return Err(IntervalError::OutOfRange { position: i + 1, value: j, cod });
                }
            }
            vals[i] = p.encode();
            if i > 0 && vals[i - 1] > vals[i] {
                return Err(IntervalError::NotMonotone(i + 1));
            }
        }
        Ok(IntervalMorphism { dom: dom as u8, cod: cod as u8, vals })
    }

    /// Caller guarantees monotonicity and range.
    pub(crate) fn from_raw(dom: usize, cod: usize, raw: &[u8]) -> Self {
        let mut vals = [0u8; MAX_DIM];
        vals[..dom].copy_from_slice(&raw[..dom]);
        debug_assert!(vals[..dom].windows(2).all(|w| w[0] <= w[1]));
        IntervalMorphism { dom: dom as u8, cod: cod as u8, vals }
    }

    pub fn identity(n: usize) -> Self {
        let mut vals = [0u8; MAX_DIM];
        for (i, v) in vals.iter_mut().enumerate().take(n) {
            *v = (i + 1) as u8;
        }
        IntervalMorphism { dom: n as u8, cod: n as u8, vals }
    }

    pub fn dom(&self) -> usize {
        self.dom as usize
    }

    pub fn cod(&self) -> usize {
        self.cod as usize
    }

    /// `φ(i)` for `1 ≤ i ≤ m`.
    pub fn value(&self, i: usize) -> Point {
        Point::decode(self.vals[i - 1])
    }

    pub fn values(&self) -> Vec<Point> {
        self.raw().iter().map(|&r| Point::decode(r)).collect()
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.vals[..self.dom as usize]
    }

    /// Image of a raw point (`0` is `-∞`, `u8::MAX` is `+∞`).
    #[inline]
    pub(crate) fn apply_raw(&self, p: u8) -> u8 {
        match p {
            NEG => NEG,
            POS => POS,
            i => self.vals[i as usize - 1],
        }
    }

    /// The finite value at position `i`, if any.
    #[inline]
    pub(crate) fn finite_at(&self, i: usize) -> Option<usize> {
        match self.vals[i] {
            NEG | POS => None,
            j => Some(j as usize),
        }
    }

    pub fn compose(g: &IntervalMorphism, f: &IntervalMorphism) -> Result<Self, IntervalError> {
        if f.cod != g.dom {
            return Err(IntervalError::DimensionMismatch { dom: g.dom(), cod: f.cod() });
        }
        Ok(g.after(f))
    }

    /// `self ∘ f`; panics in debug builds on a dimension mismatch.
    #[inline]
    pub fn after(&self, f: &IntervalMorphism) -> Self {
        debug_assert_eq!(f.cod, self.dom);
        let mut vals = [0u8; MAX_DIM];
        for (v, &x) in vals.iter_mut().zip(&f.vals[..f.dom as usize]) {
            *v = self.apply_raw(x);
        }
        IntervalMorphism { dom: f.dom, cod: self.cod, vals }
    }

    pub fn fiber_tuple(&self) -> FiberTuple {
        let mut t = FiberTuple { k_neg: 0, k: alloc::vec![0; self.cod()], k_pos: 0 };
        for &v in self.raw() {
            match v {
                NEG => t.k_neg += 1,
                POS => t.k_pos += 1,
                j => t.k[j as usize - 1] += 1,
            }
        }
        t
    }

    /// Positions `i` (1-indexed, increasing) with `φ(i) = j`.
    pub fn fiber(&self, j: usize) -> Vec<usize> {
        (1..=self.dom()).filter(|&i| self.vals[i - 1] as usize == j).collect()
    }

    pub fn is_active(&self) -> bool {
        self.raw().iter().all(|&v| v != NEG && v != POS)
    }

    pub fn is_inert(&self) -> bool {
        let fin: Vec<u8> = self.raw().iter().copied().filter(|&v| v != NEG && v != POS).collect();
        fin.len() == self.cod() && fin.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.is_inert()
    }

    pub fn classify(&self) -> MorphismClass {
        match (self.is_active(), self.is_inert()) {
            (true, true) => MorphismClass::Identity,
            (true, false) => MorphismClass::Active,
            (false, true) => MorphismClass::Inert,
            (false, false) => MorphismClass::Mixed,
        }
    }

    pub fn factorize(&self) -> Factorization {
        let m = self.dom();
        let mut rho = [0u8; MAX_DIM];
        let mut mu = [0u8; MAX_DIM];
        let mut delta = [0u8; MAX_DIM];
        let mut r = 0usize;
        for (i, &v) in self.vals[..m].iter().enumerate() {
            match v {
                NEG => rho[i] = NEG,
                POS => rho[i] = POS,
                j => {
                    mu[r] = j;
                    delta[r] = (i + 1) as u8;
                    r += 1;
                    rho[i] = r as u8;
                }
            }
        }
        Factorization {
            class: self.classify(),
            rho: IntervalMorphism::from_raw(m, r, &rho),
            mu: IntervalMorphism::from_raw(r, self.cod(), &mu),
            delta: IntervalMorphism::from_raw(r, m, &delta),
        }
    }

    pub fn canonical(kind: Canonical<'_>) -> Result<Self, IntervalError> {
        match kind {
            Canonical::Id(n) => {
                check_dim(n)?;
                Ok(Self::identity(n))
            }
            Canonical::Mu(n) => {
                check_dim(n)?;
                Ok(Self::from_raw(n, 1, &[1u8; MAX_DIM]))
            }
            Canonical::Rho { n, i } => {
                check_dim(n)?;
                if i == 0 || i > n {
                    return Err(IntervalError::IndexOutOfRange { index: i, bound: n });
                }
                let raw: Vec<u8> = (1..=n)
                    .map(|j| match j.cmp(&i) {
                        core::cmp::Ordering::Less => NEG,
                        core::cmp::Ordering::Equal => 1,
                        core::cmp::Ordering::Greater => POS,
                    })
                    .collect();
                Ok(Self::from_raw(n, 1, &raw))
            }
            Canonical::BlockRho { k, i } => {
                let total: usize = k.iter().sum();
                check_dim(total)?;
                if i == 0 || i > k.len() {
                    return Err(IntervalError::IndexOutOfRange { index: i, bound: k.len() });
                }
                let offset: usize = k[..i - 1].iter().sum();
                let raw: Vec<u8> = (1..=total)
                    .map(|j| {
                        if j <= offset {
                            NEG
                        } else if j <= offset + k[i - 1] {
                            (j - offset) as u8
                        } else {
                            POS
                        }
                    })
                    .collect();
                Ok(Self::from_raw(total, k[i - 1], &raw))
            }
            Canonical::DeltaFiber { phi, j } => {
                if j == 0 || j > phi.cod() {
                    return Err(IntervalError::IndexOutOfRange { index: j, bound: phi.cod() });
                }
                let raw: Vec<u8> = phi.fiber(j).into_iter().map(|i| i as u8).collect();
                Ok(Self::from_raw(raw.len(), phi.dom(), &raw))
            }
        }
    }

    pub fn mu(n: usize) -> Self {
        Self::from_raw(n, 1, &[1u8; MAX_DIM])
    }

    pub fn rho(n: usize, i: usize) -> Self {
        Self::canonical(Canonical::Rho { n, i }).expect("index in range")
    }

    pub fn block_rho(k: &[usize], i: usize) -> Self {
        Self::canonical(Canonical::BlockRho { k, i }).expect("index in range")
    }

    pub fn delta_fiber(&self, j: usize) -> Self {
        Self::canonical(Canonical::DeltaFiber { phi: self, j }).expect("index in range")
    }

    /// `μ_{k⃗} = μ_{k_1} ◇ … ◇ μ_{k_n}`.
    pub fn mu_blocks(k: &[usize]) -> Self {
        let raw: Vec<u8> =
            k.iter().enumerate().flat_map(|(j, &kj)| core::iter::repeat_n((j + 1) as u8, kj)).collect();
        Self::from_raw(raw.len(), k.len(), &raw)
    }

    /// Block sum of active morphisms.
    pub fn diamond(nus: &[IntervalMorphism]) -> Result<Self, IntervalError> {
        let mut raw = Vec::new();
        let mut shift = 0usize;
        for nu in nus {
            if !nu.is_active() {
                return Err(IntervalError::NotActive(*nu));
            }
            raw.extend(nu.raw().iter().map(|&v| (v as usize + shift) as u8));
            shift += nu.cod();
        }
        check_dim(raw.len())?;
        check_dim(shift)?;
        Ok(Self::from_raw(raw.len(), shift, &raw))
    }

    /// All morphisms `⟨⟨m⟩⟩ → ⟨⟨n⟩⟩` in lexicographic order of their values.
    pub fn enumerate(m: usize, n: usize) -> Vec<Self> {
        assert!(m <= MAX_DIM && n <= MAX_DIM, "dimension exceeds MAX_DIM");
        let alphabet: Vec<u8> = core::iter::once(NEG).chain(1..=n as u8).chain(core::iter::once(POS)).collect();
        let mut out = Vec::new();
        let mut idx = alloc::vec![0usize; m];
        loop {
            let raw: Vec<u8> = idx.iter().map(|&a| alphabet[a]).collect();
            out.push(Self::from_raw(m, n, &raw));
            // next weakly increasing index sequence
            let mut pos = m;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if idx[pos] + 1 < alphabet.len() {
                    let v = idx[pos] + 1;
                    for slot in idx[pos..].iter_mut() {
                        *slot = v;
                    }
                    break;
                }
            }
        }
    }

    /// All morphisms with `m, n ≤ bound`, ordered by `(m, n)` and then lexicographically.
    pub fn enumerate_upto(bound: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for m in 0..=bound {
            for n in 0..=bound {
                out.extend(Self::enumerate(m, n));
            }
        }
        out
    }
}

impl fmt::Display for IntervalMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, &v) in self.raw().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", Point::decode(v))?;
        }
        write!(f, "]:{}->{}", self.dom, self.cod)
    }
}

impl fmt::Debug for IntervalMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Point::*;

    fn im(cod: usize, v: &[Point]) -> IntervalMorphism {
        IntervalMorphism::new(v.len(), cod, v).unwrap()
    }

    #[test]
    fn fiber_tuples() {
        assert_eq!(
            IntervalMorphism::identity(2).fiber_tuple(),
            FiberTuple { k_neg: 0, k: alloc::vec![1, 1], k_pos: 0 }
        );
        let phi = im(2, &[NegInf, Fin(1), Fin(1)]);
        assert_eq!(phi.fiber_tuple(), FiberTuple { k_neg: 1, k: alloc::vec![2, 0], k_pos: 0 });
        assert_eq!(IntervalMorphism::mu(3).fiber_tuple().k, alloc::vec![3]);
    }

    #[test]
    fn factorizations() {
        let f = IntervalMorphism::mu(3).factorize();
        assert_eq!(f.class, MorphismClass::Active);
        assert_eq!((f.rho, f.mu, f.delta), (IntervalMorphism::identity(3), IntervalMorphism::mu(3), IntervalMorphism::identity(3)));

        let rho2 = im(1, &[NegInf, Fin(1), PosInf]);
        assert_eq!(rho2, IntervalMorphism::rho(3, 2));
        let f = rho2.factorize();
        assert_eq!(f.class, MorphismClass::Inert);
        assert_eq!(f.rho, rho2);
        assert_eq!(f.mu, IntervalMorphism::identity(1));
        assert_eq!(f.delta.values(), alloc::vec![Fin(2)]);

        let f = im(2, &[NegInf, Fin(1), Fin(1)]).factorize();
        assert_eq!(f.class, MorphismClass::Mixed);
        assert_eq!(f.rho, im(2, &[NegInf, Fin(1), Fin(2)]));
        assert_eq!(f.mu, im(2, &[Fin(1), Fin(1)]));
        assert_eq!(f.delta, im(3, &[Fin(2), Fin(3)]));
    }

    #[test]
    fn canonical_morphisms() {
        assert_eq!(IntervalMorphism::mu(3).values(), alloc::vec![Fin(1), Fin(1), Fin(1)]);
        assert_eq!(IntervalMorphism::block_rho(&[1, 2], 2), im(2, &[NegInf, Fin(1), Fin(2)]));
        let phi = im(2, &[NegInf, Fin(1), Fin(1)]);
        assert_eq!(phi.delta_fiber(1), im(3, &[Fin(2), Fin(3)]));
        assert!(IntervalMorphism::canonical(Canonical::Rho { n: 2, i: 3 }).is_err());
    }

    #[test]
    fn composition_examples() {
        let phi = im(2, &[NegInf, Fin(2)]);
        assert_eq!(IntervalMorphism::identity(2).after(&phi), phi);
        let d = IntervalMorphism::diamond(&[IntervalMorphism::mu(2), IntervalMorphism::mu(1)]).unwrap();
        assert_eq!(d, im(2, &[Fin(1), Fin(1), Fin(2)]));
        assert_eq!(IntervalMorphism::mu(2).after(&d), IntervalMorphism::mu(3));
        let rho1 = IntervalMorphism::rho(1, 1);
        assert_eq!(rho1.after(&rho1.factorize().delta), IntervalMorphism::identity(1));
        assert!(IntervalMorphism::compose(&phi, &IntervalMorphism::mu(3)).is_err());
    }

    #[test]
    fn diamond_examples() {
        let id = IntervalMorphism::identity(1);
        assert_eq!(IntervalMorphism::diamond(&[id, id]).unwrap(), IntervalMorphism::identity(2));
        let mu2 = IntervalMorphism::mu(2);
        assert_eq!(
            IntervalMorphism::diamond(&[mu2, mu2]).unwrap(),
            im(2, &[Fin(1), Fin(1), Fin(2), Fin(2)])
        );
        assert!(IntervalMorphism::diamond(&[IntervalMorphism::rho(2, 1)]).is_err());
    }

    #[test]
    fn enumeration() {
        assert_eq!(IntervalMorphism::enumerate(0, 3).len(), 1);
        let e = IntervalMorphism::enumerate(1, 1);
        assert_eq!(e, alloc::vec![im(1, &[NegInf]), im(1, &[Fin(1)]), im(1, &[PosInf])]);
        assert_eq!(IntervalMorphism::enumerate(2, 1).len(), 6);
        let e = IntervalMorphism::enumerate(3, 2);
        assert!(e.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_values() {
        assert_eq!(
            IntervalMorphism::new(2, 1, &[Fin(1), NegInf]),
            Err(IntervalError::NotMonotone(2))
        );
        assert!(IntervalMorphism::new(1, 1, &[Fin(2)]).is_err());
        assert!(IntervalMorphism::new(1, 1, &[]).is_err());
    }
}
