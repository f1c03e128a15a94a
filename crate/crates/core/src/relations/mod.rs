//! Binary relations as dense bit matrices, and congruences.

mod congruence;

pub use congruence::{all_congruences, all_congruences_capped, is_congruence, principal_congruence, Congruence, DEFAULT_CONGRUENCE_CAP};

use std::fmt;

use crate::algebra::Elem;
use crate::error::{Error, Result};

const WORD: usize = 64;

/// A binary relation on `0..size`; row `x` holds the set `{y : (x,y) ∈ R}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinRel {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BinRel {
    pub fn empty(size: usize) -> Self {
        let words = size.div_ceil(WORD).max(1);
        BinRel {
            size,
            words,
            bits: vec![0; words * size],
        }
    }

    /// The diagonal Δ.
    pub fn identity(size: usize) -> Self {
        let mut r = Self::empty(size);
        for x in 0..size {
            r.insert(x, x);
        }
        r
    }

    /// The full relation ∇.
    pub fn full(size: usize) -> Self {
        let mut r = Self::empty(size);
        for x in 0..size {
            for y in 0..size {
                r.insert(x, y);
            }
        }
        r
    }

    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (Elem, Elem)>) -> Self {
        let mut r = Self::empty(size);
        for (x, y) in pairs {
            r.insert(x, y);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn row(&self, x: Elem) -> &[u64] {
        &self.bits[x * self.words..(x + 1) * self.words]
    }

    fn row_mut(&mut self, x: Elem) -> &mut [u64] {
        &mut self.bits[x * self.words..(x + 1) * self.words]
    }

    pub fn insert(&mut self, x: Elem, y: Elem) {
        assert!(x < self.size && y < self.size, "({x},{y}) outside 0..{}", self.size);
        self.bits[x * self.words + y / WORD] |= 1 << (y % WORD);
    }

    pub fn contains(&self, x: Elem, y: Elem) -> bool {
        x < self.size && y < self.size && self.bits[x * self.words + y / WORD] >> (y % WORD) & 1 == 1
    }

    /// Elements related to `x`, ascending.
    pub fn image(&self, x: Elem) -> impl Iterator<Item = Elem> + '_ {
        self.row(x).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * WORD + b)
            })
        })
    }

    /// All pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        (0..self.size).flat_map(move |x| self.image(x).map(move |y| (x, y)))
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn check(&self, other: &BinRel) -> Result<()> {
        if self.size != other.size {
            return Err(Error::SizeMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }

    /// `R ∘ S = {(x,z) : ∃y. x R y ∧ y S z}`.
    pub fn compose(&self, other: &BinRel) -> Result<BinRel> {
        self.check(other)?;
        let mut out = BinRel::empty(self.size);
        for x in 0..self.size {
            let mut acc = vec![0u64; self.words];
            for y in self.image(x) {
                for (a, b) in acc.iter_mut().zip(other.row(y)) {
                    *a |= b;
                }
            }
            out.row_mut(x).copy_from_slice(&acc);
        }
        Ok(out)
    }

    pub fn intersect(&self, other: &BinRel) -> Result<BinRel> {
        self.check(other)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        Ok(BinRel { bits, ..self.clone() })
    }

    pub fn union(&self, other: &BinRel) -> Result<BinRel> {
        self.check(other)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        Ok(BinRel { bits, ..self.clone() })
    }

    pub fn converse(&self) -> BinRel {
        BinRel::from_pairs(self.size, self.pairs().map(|(x, y)| (y, x)))
    }

    pub fn is_subset(&self, other: &BinRel) -> Result<bool> {
        self.check(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0))
    }

    /// A pair of `self` outside `other`, first in row-major order.
    pub fn difference_witness(&self, other: &BinRel) -> Result<Option<(Elem, Elem)>> {
        self.check(other)?;
        Ok(self.pairs().find(|&(x, y)| !other.contains(x, y)))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|x| self.contains(x, x))
    }

    /// `ρ ∘ σ ∘ ρ ∘ ⋯` with exactly `k` factors, starting with `ρ`.
    pub fn alt_compose(rho: &BinRel, sigma: &BinRel, k: usize) -> Result<BinRel> {
        rho.check(sigma)?;
        assert!(k >= 1, "alt_compose needs at least one factor");
        let mut acc = rho.clone();
        for i in 1..k {
            acc = acc.compose(if i % 2 == 1 { sigma } else { rho })?;
        }
        Ok(acc)
    }
}

impl fmt::Debug for BinRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn beta() -> BinRel {
        Congruence::from_blocks(&[0, 0, 1]).relation().clone()
    }

    fn gamma() -> BinRel {
        Congruence::from_blocks(&[0, 1, 1]).relation().clone()
    }

    #[test]
    fn compose_examples() {
        let r = BinRel::from_pairs(3, [(0, 1)]);
        let s = BinRel::from_pairs(3, [(1, 2)]);
        assert_eq!(r.compose(&s).unwrap(), BinRel::from_pairs(3, [(0, 2)]));
        assert_eq!(BinRel::identity(3).compose(&s).unwrap(), s);

        let bg = beta().compose(&gamma()).unwrap();
        assert_eq!(bg.count(), 8);
        assert!(!bg.contains(2, 0));
    }

    #[test]
    fn intersect_and_converse() {
        let b = beta();
        assert_eq!(b.intersect(&b).unwrap(), b);
        let r = BinRel::from_pairs(3, [(0, 1), (2, 1)]);
        assert_eq!(r.converse().converse(), r);
        assert_eq!(beta().intersect(&gamma()).unwrap(), BinRel::identity(3));
    }

    #[test]
    fn alt_compose_examples() {
        let (b, g) = (beta(), gamma());
        assert_eq!(BinRel::alt_compose(&b, &g, 1).unwrap(), b);
        assert_eq!(BinRel::alt_compose(&b, &g, 2).unwrap(), b.compose(&g).unwrap());
        assert_eq!(BinRel::alt_compose(&b, &g, 3).unwrap(), BinRel::full(3));
    }

    #[test]
    fn size_mismatch() {
        let err = BinRel::identity(2).compose(&BinRel::identity(3)).unwrap_err();
        assert_eq!(err, Error::SizeMismatch { left: 2, right: 3 });
        assert!(BinRel::alt_compose(&BinRel::identity(2), &BinRel::identity(3), 2).is_err());
    }

    #[test]
    fn wide_relations_span_words() {
        let n = 130;
        let mut r = BinRel::empty(n);
        r.insert(0, 129);
        r.insert(129, 64);
        let c = r.compose(&r).unwrap();
        assert!(c.contains(0, 64));
        assert_eq!(c.count(), 1);
        assert_eq!(r.converse().pairs().collect::<Vec<_>>(), vec![(64, 129), (129, 0)]);
    }

    fn arb_rel(n: usize) -> impl Strategy<Value = BinRel> {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            BinRel::from_pairs(
                n,
                bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| (i / n, i % n)),
            )
        })
    }

    fn naive_compose(r: &BinRel, s: &BinRel) -> BinRel {
        let n = r.size();
        let mut out = BinRel::empty(n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if r.contains(x, y) && s.contains(y, z) {
                        out.insert(x, z);
                    }
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn compose_is_associative_with_identity(r in arb_rel(5), s in arb_rel(5), t in arb_rel(5)) {
            let lhs = r.compose(&s).unwrap().compose(&t).unwrap();
            let rhs = r.compose(&s.compose(&t).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let id = BinRel::identity(5);
            prop_assert_eq!(id.compose(&r).unwrap(), r.clone());
            prop_assert_eq!(r.compose(&id).unwrap(), r.clone());
            prop_assert_eq!(r.compose(&s).unwrap(), naive_compose(&r, &s));
        }

        #[test]
        fn congruences_are_transitive(blocks in proptest::collection::vec(0usize..3, 6)) {
            let c = Congruence::from_blocks(&blocks);
            let r = c.relation();
            prop_assert_eq!(&r.compose(r).unwrap(), r);
        }

        #[test]
        fn alternating_products_grow(
            b in proptest::collection::vec(0usize..3, 5),
            g in proptest::collection::vec(0usize..3, 5),
            k in 1usize..6,
        ) {
            let (b, g) = (Congruence::from_blocks(&b), Congruence::from_blocks(&g));
            let small = BinRel::alt_compose(b.relation(), g.relation(), k).unwrap();
            let big = BinRel::alt_compose(b.relation(), g.relation(), k + 1).unwrap();
            prop_assert!(small.is_subset(&big).unwrap());
        }
    }
}
