use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use super::BinRel;
use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};

pub const DEFAULT_CONGRUENCE_CAP: usize = 100_000;

/// A partition of the universe, kept with blocks numbered by first occurrence,
/// together with its relation view.
#[derive(Clone)]
pub struct Congruence {
    blocks: Vec<usize>,
    rel: BinRel,
}

impl Congruence {
    /// Renumbers `labels` by first occurrence. Any labelling of a partition is accepted.
    pub fn from_blocks(labels: &[usize]) -> Self {
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let blocks: Vec<usize> = labels
            .iter()
            .map(|&l| match seen.iter().find(|(old, _)| *old == l) {
                Some(&(_, new)) => new,
                None => {
                    let new = seen.len();
                    seen.push((l, new));
                    new
                }
            })
            .collect();
        let n = blocks.len();
        let mut rel = BinRel::empty(n);
        for x in 0..n {
            for y in 0..n {
                if blocks[x] == blocks[y] {
                    rel.insert(x, y);
                }
            }
        }
        Congruence { blocks, rel }
    }

    pub fn delta(size: usize) -> Self {
        Self::from_blocks(&(0..size).collect::<Vec<_>>())
    }

    pub fn nabla(size: usize) -> Self {
        Self::from_blocks(&vec![0; size])
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.iter().max().map_or(0, |m| m + 1)
    }

    pub fn relation(&self) -> &BinRel {
        &self.rel
    }

    #[inline]
    pub fn related(&self, x: Elem, y: Elem) -> bool {
        self.blocks[x] == self.blocks[y]
    }

    pub fn is_delta(&self) -> bool {
        self.block_count() == self.size()
    }

    pub fn is_nabla(&self) -> bool {
        self.block_count() <= 1
    }

    pub fn is_finer_than(&self, other: &Congruence) -> bool {
        (0..self.size()).all(|x| other.related(x, self.representative(x)))
    }

    fn representative(&self, x: Elem) -> Elem {
        let b = self.blocks[x];
        self.blocks.iter().position(|&c| c == b).expect("block present")
    }

    /// Least congruence containing both.
    pub fn join(&self, alg: &FiniteAlgebra, other: &Congruence) -> Congruence {
        let pairs = (0..self.size()).flat_map(|x| {
            [(self.representative(x), x), (other.representative(x), x)]
        });
        generated(alg, pairs)
    }
}

impl PartialEq for Congruence {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl Eq for Congruence {}

impl PartialOrd for Congruence {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Congruence {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.blocks.cmp(&other.blocks)
    }
}

impl std::hash::Hash for Congruence {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.blocks.hash(state);
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Congruence[{self}]")
    }
}

impl FromStr for Congruence {
    type Err = Error;

    /// Parses a block-index vector such as `"0 0 1"` (commas also accepted).
    fn from_str(s: &str) -> Result<Self> {
        let mut labels = Vec::new();
        for (i, tok) in s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).enumerate() {
            labels.push(tok.parse::<usize>().map_err(|_| Error::parse(format!("bad block index `{tok}`"), i + 1))?);
        }
        if labels.is_empty() {
            return Err(Error::parse("empty block vector", 1));
        }
        Ok(Congruence::from_blocks(&labels))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

/// Least congruence containing `pairs`. Every pair that merges two classes is
/// pushed through all basic translations until nothing new merges.
fn generated(alg: &FiniteAlgebra, pairs: impl IntoIterator<Item = (Elem, Elem)>) -> Congruence {
    let s = alg.size();
    let mut uf = UnionFind::new(s);
    let mut queue: VecDeque<(Elem, Elem)> = VecDeque::new();
    for (a, b) in pairs {
        if uf.union(a, b) {
            queue.push_back((a, b));
        }
    }
    let mut args = [0; crate::algebra::MAX_ARITY];
    while let Some((u, v)) = queue.pop_front() {
        for op in alg.ops() {
            let k = op.arity();
            if k == 0 {
                continue;
            }
            let others = s.pow(k as u32 - 1);
            for pos in 0..k {
                for mut idx in 0..others {
                    for p in (0..k).rev() {
                        if p == pos {
                            continue;
                        }
                        args[p] = idx % s;
                        idx /= s;
                    }
                    args[pos] = u;
                    let fu = op.apply(s, &args[..k]);
                    args[pos] = v;
                    let fv = op.apply(s, &args[..k]);
                    if uf.union(fu, fv) {
                        queue.push_back((fu, fv));
                    }
                }
            }
        }
    }
    let labels: Vec<usize> = (0..s).map(|x| uf.find(x)).collect();
    Congruence::from_blocks(&labels)
}

/// `Cg(a, b)`.
pub fn principal_congruence(alg: &FiniteAlgebra, a: Elem, b: Elem) -> Congruence {
    generated(alg, [(a, b)])
}

/// True iff `labels` describes a partition compatible with every operation.
pub fn is_congruence(alg: &FiniteAlgebra, labels: &[usize]) -> bool {
    if labels.len() != alg.size() {
        return false;
    }
    let c = Congruence::from_blocks(labels);
    let s = alg.size();
    let mut args = [0; crate::algebra::MAX_ARITY];
    for op in alg.ops() {
        let k = op.arity();
        if k == 0 {
            continue;
        }
        let others = s.pow(k as u32 - 1);
        for u in 0..s {
            let r = c.representative(u);
            if r == u {
                continue;
            }
            for pos in 0..k {
                for mut idx in 0..others {
                    for p in (0..k).rev() {
                        if p == pos {
                            continue;
                        }
                        args[p] = idx % s;
                        idx /= s;
                    }
                    args[pos] = u;
                    let fu = op.apply(s, &args[..k]);
                    args[pos] = r;
                    if !c.related(fu, op.apply(s, &args[..k])) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn all_congruences(alg: &FiniteAlgebra) -> Result<Vec<Congruence>> {
    all_congruences_capped(alg, DEFAULT_CONGRUENCE_CAP)
}

/// The whole congruence lattice, sorted by block vector: Δ together with the
/// closure of the principal congruences under joins.
pub fn all_congruences_capped(alg: &FiniteAlgebra, cap: usize) -> Result<Vec<Congruence>> {
    let s = alg.size();
    let mut principals: BTreeSet<Congruence> = BTreeSet::new();
    for a in 0..s {
        for b in a + 1..s {
            principals.insert(principal_congruence(alg, a, b));
        }
    }
    let principals: Vec<Congruence> = principals.into_iter().collect();
    let mut found: BTreeSet<Congruence> = BTreeSet::new();
    let mut queue: VecDeque<Congruence> = VecDeque::new();
    let delta = Congruence::delta(s);
    found.insert(delta.clone());
    queue.push_back(delta);
    while let Some(theta) = queue.pop_front() {
        for p in &principals {
            if p.is_finer_than(&theta) {
                continue;
            }
            let j = theta.join(alg, p);
            if !found.contains(&j) {
                if found.len() >= cap {
                    return Err(Error::ResourceLimit { cap });
                }
                found.insert(j.clone());
                queue.push_back(j);
            }
        }
    }
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    /// Restricted-growth strings of length `n`: every partition exactly once.
    fn all_partitions(n: usize) -> Vec<Vec<usize>> {
        fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            let next = prefix.iter().max().map_or(0, |m| m + 1);
            for b in 0..=next {
                prefix.push(b);
                go(prefix, n, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::new(), n, &mut out);
        out
    }

    /// Compatibility by brute force over all pairs of related argument tuples.
    fn brute_compatible(alg: &FiniteAlgebra, p: &[usize]) -> bool {
        let s = alg.size();
        alg.ops().iter().all(|op| {
            let k = op.arity();
            let total = s.pow(k as u32);
            let decode = |mut i: usize| {
                let mut v = vec![0; k];
                for slot in v.iter_mut().rev() {
                    *slot = i % s;
                    i /= s;
                }
                v
            };
            (0..total).all(|i| {
                (0..total).all(|j| {
                    let (u, v) = (decode(i), decode(j));
                    !u.iter().zip(&v).all(|(a, b)| p[*a] == p[*b])
                        || p[op.apply(s, &u)] == p[op.apply(s, &v)]
                })
            })
        })
    }

    #[test]
    fn partitions_count_bell_numbers() {
        assert_eq!(all_partitions(3).len(), 5);
        assert_eq!(all_partitions(4).len(), 15);
        assert_eq!(all_partitions(5).len(), 52);
    }

    #[test]
    fn principal_examples() {
        let chain = catalog::lattice_chain(3);
        assert!(principal_congruence(&chain, 1, 1).is_delta());
        assert_eq!(principal_congruence(&chain, 1, 2).blocks(), &[0, 1, 1]);
        assert!(principal_congruence(&chain, 0, 2).is_nabla());
    }

    #[test]
    fn congruence_lattices() {
        let two = all_congruences(&catalog::lattice_chain(2)).unwrap();
        assert_eq!(two, vec![Congruence::nabla(2), Congruence::delta(2)]);

        let three: Vec<Vec<usize>> = all_congruences(&catalog::lattice_chain(3))
            .unwrap()
            .iter()
            .map(|c| c.blocks().to_vec())
            .collect();
        assert_eq!(three, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 1], vec![0, 1, 2]]);

        let square: Vec<Vec<usize>> = all_congruences(&catalog::lattice_prod(2, 2))
            .unwrap()
            .iter()
            .map(|c| c.blocks().to_vec())
            .collect();
        assert_eq!(square, vec![vec![0, 0, 0, 0], vec![0, 0, 1, 1], vec![0, 1, 0, 1], vec![0, 1, 2, 3]]);
    }

    #[test]
    fn is_congruence_examples() {
        let chain = catalog::lattice_chain(3);
        assert!(is_congruence(&chain, &[0, 1, 2]));
        assert!(is_congruence(&chain, &[0, 0, 0]));
        assert!(!is_congruence(&chain, &[0, 1, 0]));
    }

    #[test]
    fn agrees_with_partition_filter() {
        let mut algebras = catalog::standard_catalog();
        algebras.push(catalog::lattice_chain(5));
        algebras.push(catalog::zmod(4));
        algebras.push(catalog::dual_discriminator(4));
        for alg in algebras.iter().filter(|a| a.size() <= 5) {
            let brute: Vec<Congruence> = {
                let mut v: Vec<Congruence> = all_partitions(alg.size())
                    .into_iter()
                    .filter(|p| brute_compatible(alg, p))
                    .map(|p| Congruence::from_blocks(&p))
                    .collect();
                v.sort();
                v
            };
            let fast = all_congruences(alg).unwrap();
            assert_eq!(fast, brute, "{}", alg.name());
            for p in all_partitions(alg.size()) {
                assert_eq!(is_congruence(alg, &p), brute_compatible(alg, &p), "{} {:?}", alg.name(), p);
            }
            // principal congruences are the least compatible partitions containing the pair
            for a in 0..alg.size() {
                for b in 0..alg.size() {
                    let cg = principal_congruence(alg, a, b);
                    assert!(is_congruence(alg, cg.blocks()));
                    assert!(cg.related(a, b));
                    for theta in brute.iter().filter(|t| t.related(a, b)) {
                        assert!(cg.is_finer_than(theta));
                    }
                }
            }
        }
    }

    #[test]
    fn cap_applies() {
        assert_eq!(
            all_congruences_capped(&catalog::lattice_chain(4), 3).unwrap_err(),
            Error::ResourceLimit { cap: 3 }
        );
    }

    #[test]
    fn text_form() {
        let c: Congruence = "0 0 1".parse().unwrap();
        assert_eq!(c.to_string(), "0 0 1");
        let d: Congruence = "5,5,2".parse().unwrap();
        assert_eq!(d, c);
        assert!("".parse::<Congruence>().is_err());
        assert!("0 a".parse::<Congruence>().is_err());
    }
}
