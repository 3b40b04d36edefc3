//! Permutations of `{1..n}` in one-line notation.

use alloc::vec::Vec;
use core::fmt;

use crate::interval::MAX_DIM;

/// A permutation `x` of `{1..n}`. Products compose as maps: `(xy)(i) = x(y(i))`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    n: u8,
    img: [u8; MAX_DIM],
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DIM);
        let mut img = [0u8; MAX_DIM];
        for (i, v) in img.iter_mut().enumerate().take(n) {
            *v = i as u8;
        }
        Permutation { n: n as u8, img }
    }

    /// From 1-indexed one-line notation; `None` unless it is a bijection.
    pub fn from_one_line(images: &[usize]) -> Option<Self> {
        let n = images.len();
        if n > MAX_DIM {
            return None;
        }
        let mut seen = [false; MAX_DIM];
        let mut img = [0u8; MAX_DIM];
        for (i, &x) in images.iter().enumerate() {
            if x == 0 || x > n || seen[x - 1] {
                return None;
            }
            seen[x - 1] = true;
            img[i] = (x - 1) as u8;
        }
        Some(Permutation { n: n as u8, img })
    }

    pub(crate) fn from_zero_based(img0: &[u8]) -> Self {
        let mut img = [0u8; MAX_DIM];
        img[..img0.len()].copy_from_slice(img0);
        Permutation { n: img0.len() as u8, img }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.zero_based().iter().map(|&v| v as usize + 1).collect()
    }

    pub(crate) fn zero_based(&self) -> &[u8] {
        &self.img[..self.n as usize]
    }

    /// `x(i)` for `1 ≤ i ≤ n`.
    pub fn image(&self, i: usize) -> usize {
        self.img[i - 1] as usize + 1
    }

    pub fn is_identity(&self) -> bool {
        self.zero_based().iter().enumerate().all(|(i, &v)| v as usize == i)
    }

    pub fn mul(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n, other.n, "arity mismatch");
        let mut img = [0u8; MAX_DIM];
        for (v, &o) in img.iter_mut().zip(&other.img[..self.n as usize]) {
            *v = self.img[o as usize];
        }
        Permutation { n: self.n, img }
    }

    pub fn inverse(&self) -> Permutation {
        let mut img = [0u8; MAX_DIM];
        for i in 0..self.n as usize {
            img[self.img[i] as usize] = i as u8;
        }
        Permutation { n: self.n, img }
    }

    /// All permutations of `{1..n}` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<u8> = (0..n as u8).collect();
        let mut out = alloc::vec![Permutation::from_zero_based(&cur)];
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Permutation::from_zero_based(&cur));
        }
    }

    /// Block composition: block `i` (of size `k_i`) is permuted by `ys[i]` and moved to block
    /// position `self(i)`.
    pub fn gamma(&self, ys: &[Permutation]) -> Permutation {
        assert_eq!(ys.len(), self.n(), "arity mismatch");
        let n = self.n();
        let inv = self.inverse();
        // new starting offset of block i
        let mut start = [0usize; MAX_DIM];
        let mut acc = 0;
        for slot in 0..n {
            let i = inv.img[slot] as usize;
            start[i] = acc;
            acc += ys[i].n();
        }
        let mut img = [0u8; MAX_DIM];
        let mut pos = 0;
        for (i, y) in ys.iter().enumerate() {
            for r in 0..y.n() {
                img[pos] = (start[i] + y.img[r] as usize) as u8;
                pos += 1;
            }
        }
        Permutation { n: pos as u8, img }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.one_line().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_one_line(v).unwrap()
    }

    #[test]
    fn group_ops() {
        let swap = p(&[2, 1]);
        assert!(swap.mul(&swap).is_identity());
        assert_eq!(p(&[2, 3, 1]).inverse(), p(&[3, 1, 2]));
        assert_eq!(p(&[2, 3, 1]).mul(&p(&[2, 1, 3])), p(&[3, 2, 1]));
        assert_eq!(Permutation::all(3).len(), 6);
        assert_eq!(Permutation::all(0).len(), 1);
        assert!(Permutation::from_one_line(&[1, 1]).is_none());
    }

    #[test]
    fn block_composition() {
        let e1 = Permutation::identity(1);
        let e2 = Permutation::identity(2);
        let swap = p(&[2, 1]);
        assert_eq!(swap.gamma(&[e2, e1]), p(&[2, 3, 1]));
        assert_eq!(e2.gamma(&[swap, swap]), p(&[2, 1, 4, 3]));
        assert_eq!(swap.gamma(&[Permutation::identity(0), e1]), e1);
    }
}
