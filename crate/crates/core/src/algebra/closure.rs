use std::collections::HashMap;

use super::{Elem, FiniteAlgebra, Term};
use crate::error::{Error, Result};

pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureOptions {
    pub cap: usize,
    pub track_terms: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            cap: DEFAULT_CLOSURE_CAP,
            track_terms: false,
        }
    }
}

/// How an element of a [`Subpower`] was first produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Seed(usize),
    Op { op: usize, args: Vec<usize> },
}

/// A subuniverse of a direct power `A^I`, grown from seed vectors one
/// semi-naive round at a time. Elements keep insertion order.
#[derive(Clone, Debug)]
pub struct Subpower {
    dim: usize,
    elements: Vec<Vec<Elem>>,
    index: HashMap<Vec<Elem>, usize>,
    origins: Option<Vec<Origin>>,
    frontier: usize,
    closed: bool,
    cap: usize,
}

impl Subpower {
    pub fn new(seeds: Vec<Vec<Elem>>, opts: ClosureOptions) -> Result<Self> {
        let dim = match seeds.first() {
            Some(s) => s.len(),
            None => return Err(Error::InvalidAlgebra("closure needs a non-empty seed".into())),
        };
        let mut sp = Subpower {
            dim,
            elements: Vec::new(),
            index: HashMap::new(),
            origins: opts.track_terms.then(Vec::new),
            frontier: 0,
            closed: false,
            cap: opts.cap,
        };
        for (i, seed) in seeds.into_iter().enumerate() {
            if seed.len() != dim {
                return Err(Error::SizeMismatch {
                    left: dim,
                    right: seed.len(),
                });
            }
            sp.insert(seed, Origin::Seed(i))?;
        }
        Ok(sp)
    }

    fn insert(&mut self, v: Vec<Elem>, origin: Origin) -> Result<bool> {
        if self.index.contains_key(&v) {
            return Ok(false);
        }
        if self.elements.len() >= self.cap {
            return Err(Error::ResourceLimit { cap: self.cap });
        }
        self.index.insert(v.clone(), self.elements.len());
        self.elements.push(v);
        if let Some(o) = self.origins.as_mut() {
            o.push(origin);
        }
        Ok(true)
    }

    /// Applies every operation to every argument tuple that involves at least
    /// one element added in the previous round. Returns whether anything new
    /// appeared; once nothing does, the set is closed.
    pub fn grow(&mut self, alg: &FiniteAlgebra) -> Result<bool> {
        if self.closed {
            return Ok(false);
        }
        let old = self.frontier;
        let cur = self.elements.len();
        let s = alg.size();
        let mut out = vec![0; self.dim];
        let mut added = false;
        for (op_idx, op) in alg.ops().iter().enumerate() {
            let k = op.arity();
            if k == 0 {
                if old == 0 {
                    out.fill(op.table()[0]);
                    added |= self.insert(out.clone(), Origin::Op { op: op_idx, args: vec![] })?;
                }
                continue;
            }
            // `first` is the leftmost position holding a frontier element:
            // positions before it range over old elements, after it over all.
            for first in 0..k {
                let lo: Vec<usize> = (0..k).map(|p| if p == first { old } else { 0 }).collect();
                let hi: Vec<usize> = (0..k)
                    .map(|p| if p < first { old } else { cur })
                    .collect();
                if lo.iter().zip(&hi).any(|(l, h)| l >= h) {
                    continue;
                }
                let mut args = lo.clone();
                let mut vals = [0; super::MAX_ARITY];
                'tuples: loop {
                    for (c, slot) in out.iter_mut().enumerate() {
                        for (p, &a) in args.iter().enumerate() {
                            vals[p] = self.elements[a][c];
                        }
                        *slot = op.apply(s, &vals[..k]);
                    }
                    if !self.index.contains_key(&out) {
                        added |= self.insert(
                            out.clone(),
                            Origin::Op {
                                op: op_idx,
                                args: args.clone(),
                            },
                        )?;
                    }
                    let mut p = k;
                    loop {
                        if p == 0 {
                            break 'tuples;
                        }
                        p -= 1;
                        args[p] += 1;
                        if args[p] < hi[p] {
                            continue 'tuples;
                        }
                        args[p] = lo[p];
                    }
                }
            }
        }
        self.frontier = cur;
        if !added {
            self.closed = true;
        }
        Ok(added)
    }

    pub fn close(&mut self, alg: &FiniteAlgebra) -> Result<()> {
        while self.grow(alg)? {}
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Vec<Elem>] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &[Elem] {
        &self.elements[i]
    }

    pub fn position(&self, v: &[Elem]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.index.contains_key(v)
    }

    pub fn origin(&self, i: usize) -> Option<&Origin> {
        self.origins.as_ref().map(|o| &o[i])
    }

    /// A term producing element `i` from the seeds (seed `j` is variable `j`).
    /// `None` unless the subpower tracks terms.
    pub fn term(&self, alg: &FiniteAlgebra, i: usize) -> Option<Term> {
        let origins = self.origins.as_ref()?;
        let mut memo: Vec<Option<Term>> = vec![None; i + 1];
        Some(Self::build_term(alg, origins, i, &mut memo))
    }

    fn build_term(
        alg: &FiniteAlgebra,
        origins: &[Origin],
        i: usize,
        memo: &mut Vec<Option<Term>>,
    ) -> Term {
        if let Some(t) = &memo[i] {
            return t.clone();
        }
        let t = match &origins[i] {
            Origin::Seed(j) => Term::Var(*j),
            Origin::Op { op, args } => Term::Apply(
                alg.ops()[*op].symbol().to_string(),
                args.iter()
                    .map(|&a| Self::build_term(alg, origins, a, memo))
                    .collect(),
            ),
        };
        memo[i] = Some(t.clone());
        t
    }
}

/// Closes `seeds` in the power of `alg` indexed by their common length.
pub fn closure(alg: &FiniteAlgebra, seeds: Vec<Vec<Elem>>, opts: ClosureOptions) -> Result<Subpower> {
    let mut sp = Subpower::new(seeds, opts)?;
    sp.close(alg)?;
    Ok(sp)
}

/// Subuniverse of `alg` itself generated by `seed`, sorted.
pub fn closure_elements(alg: &FiniteAlgebra, seed: &[Elem], opts: ClosureOptions) -> Result<Vec<Elem>> {
    if let Some(&bad) = seed.iter().find(|&&a| a >= alg.size()) {
        return Err(Error::InvalidAlgebra(format!("seed element {bad} outside universe")));
    }
    let sp = closure(alg, seed.iter().map(|&a| vec![a]).collect(), opts)?;
    let mut out: Vec<Elem> = sp.elements().iter().map(|v| v[0]).collect();
    out.sort_unstable();
    Ok(out)
}
