//! Brute-force evaluation of congruence identities
//! `α(β∘γ∘⋯) ⊆ αβ∘αγ∘⋯` over all congruence triples of a finite algebra.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::Result;
use crate::relations::{all_congruences_capped, BinRel, Congruence, DEFAULT_CONGRUENCE_CAP};

/// Which factor the right-hand side starts with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Start {
    #[default]
    Beta,
    Gamma,
}

pub fn default_k_max(size: usize) -> usize {
    (2 * size * size).max(1)
}

/// `α ∩ (β∘γ∘β∘⋯)` with `m` factors.
pub fn lhs_relation(alpha: &Congruence, beta: &Congruence, gamma: &Congruence, m: usize) -> Result<BinRel> {
    alpha.relation().intersect(&BinRel::alt_compose(beta.relation(), gamma.relation(), m)?)
}

fn meets(alpha: &Congruence, beta: &Congruence, gamma: &Congruence, start: Start) -> Result<(BinRel, BinRel)> {
    let ab = alpha.relation().intersect(beta.relation())?;
    let ag = alpha.relation().intersect(gamma.relation())?;
    Ok(match start {
        Start::Beta => (ab, ag),
        Start::Gamma => (ag, ab),
    })
}

/// `αβ∘αγ∘⋯` (or `αγ∘αβ∘⋯`) with `k` factors.
pub fn rhs_relation(alpha: &Congruence, beta: &Congruence, gamma: &Congruence, k: usize, start: Start) -> Result<BinRel> {
    let (first, second) = meets(alpha, beta, gamma, start)?;
    BinRel::alt_compose(&first, &second, k)
}

#[derive(Clone, Copy, Debug)]
pub struct IdentityInstance<'a> {
    pub alpha: &'a Congruence,
    pub beta: &'a Congruence,
    pub gamma: &'a Congruence,
    pub m: usize,
    pub k: usize,
    pub rhs_start: Start,
}

impl IdentityInstance<'_> {
    /// First left-hand pair (row-major) missing from the right-hand side.
    pub fn violation(&self) -> Result<Option<(Elem, Elem)>> {
        let lhs = lhs_relation(self.alpha, self.beta, self.gamma, self.m)?;
        let rhs = rhs_relation(self.alpha, self.beta, self.gamma, self.k, self.rhs_start)?;
        lhs.difference_witness(&rhs)
    }
}

/// Whether the inclusion holds; congruences of different sizes never satisfy it.
pub fn check_identity(inst: &IdentityInstance) -> bool {
    matches!(inst.violation(), Ok(None))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinimalK {
    /// Inclusion holds at `k`; `witness` is a left-hand pair outside the
    /// right-hand side at `k − 1` (absent when `k = 1`).
    Found { k: usize, witness: Option<(Elem, Elem)> },
    /// Fails for every `k ≤ k_max`; `witness` fails at `k_max`.
    NoneUpTo { k_max: usize, witness: (Elem, Elem) },
}

impl MinimalK {
    pub fn k(&self) -> Option<usize> {
        match self {
            MinimalK::Found { k, .. } => Some(*k),
            MinimalK::NoneUpTo { .. } => None,
        }
    }
}

/// Least `k ≤ k_max` with `α(β∘γ∘⋯ m) ⊆ RHS(k)`.
pub fn minimal_k(
    alpha: &Congruence,
    beta: &Congruence,
    gamma: &Congruence,
    m: usize,
    k_max: usize,
    start: Start,
) -> Result<MinimalK> {
    assert!(k_max >= 1, "k_max must be at least 1");
    let lhs = lhs_relation(alpha, beta, gamma, m)?;
    let (first, second) = meets(alpha, beta, gamma, start)?;
    let mut rhs = first.clone();
    let mut witness = None;
    for k in 1..=k_max {
        if k > 1 {
            rhs = rhs.compose(if k % 2 == 0 { &second } else { &first })?;
        }
        match lhs.difference_witness(&rhs)? {
            None => return Ok(MinimalK::Found { k, witness }),
            w => witness = w,
        }
    }
    Ok(MinimalK::NoneUpTo {
        k_max,
        witness: witness.expect("a failing k leaves a witness"),
    })
}

/// Least `k ≤ k_max` with `(x, y)` in the right-hand side.
pub fn pair_minimal_k(
    alpha: &Congruence,
    beta: &Congruence,
    gamma: &Congruence,
    (x, y): (Elem, Elem),
    k_max: usize,
    start: Start,
) -> Result<Option<usize>> {
    let (first, second) = meets(alpha, beta, gamma, start)?;
    let mut rhs = first.clone();
    for k in 1..=k_max {
        if k > 1 {
            rhs = rhs.compose(if k % 2 == 0 { &second } else { &first })?;
        }
        if rhs.contains(x, y) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumRow {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub m: usize,
    pub result: MinimalK,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxEntry {
    pub m: usize,
    /// Largest minimal `k` over triples where one exists.
    pub max_minimal_k: Option<usize>,
    /// Triples with no `k ≤ k_max`.
    pub unresolved: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub algebra: String,
    pub congruences: Vec<String>,
    pub k_max: usize,
    pub rhs_start: Start,
    pub rows: Vec<SpectrumRow>,
    pub max_by_m: Vec<MaxEntry>,
}

/// Minimal `k` for every `m` in `m_list` and every triple of congruences,
/// in canonical order (α, then β, then γ, then `m`).
pub fn spectrum(alg: &FiniteAlgebra, m_list: &[usize], k_max: usize, start: Start) -> Result<Spectrum> {
    spectrum_capped(alg, m_list, k_max, start, DEFAULT_CONGRUENCE_CAP)
}

pub fn spectrum_capped(
    alg: &FiniteAlgebra,
    m_list: &[usize],
    k_max: usize,
    start: Start,
    cap: usize,
) -> Result<Spectrum> {
    let cons = all_congruences_capped(alg, cap)?;
    let c = cons.len();
    let jobs: Vec<(usize, usize, usize, usize)> = (0..c * c * c)
        .flat_map(|t| m_list.iter().map(move |&m| (t / (c * c), t / c % c, t % c, m)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(a, b, g, m)| {
            minimal_k(&cons[a], &cons[b], &cons[g], m, k_max, start).map(|result| SpectrumRow {
                alpha: a,
                beta: b,
                gamma: g,
                m,
                result,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_by_m = m_list
        .iter()
        .map(|&m| {
            let of_m = rows.iter().filter(|r| r.m == m);
            MaxEntry {
                m,
                max_minimal_k: of_m.clone().filter_map(|r| r.result.k()).max(),
                unresolved: of_m.filter(|r| r.result.k().is_none()).count(),
            }
        })
        .collect();
    Ok(Spectrum {
        algebra: alg.name().to_string(),
        congruences: cons.iter().map(|c| c.to_string()).collect(),
        k_max,
        rhs_start: start,
        rows,
        max_by_m,
    })
}

impl Spectrum {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,beta,gamma,m,minimal_k,witness_pair\n");
        for r in &self.rows {
            let (k, w) = match r.result {
                MinimalK::Found { k, witness } => (k.to_string(), witness),
                MinimalK::NoneUpTo { k_max, witness } => (format!(">{k_max}"), Some(witness)),
            };
            let w = w.map(|(x, y)| format!("{x}:{y}")).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{k},{w}", r.alpha, r.beta, r.gamma, r.m);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub algebra: String,
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub pair: (Elem, Elem),
    pub m: usize,
    pub k: usize,
}

/// First violation of `α(β∘γ∘⋯ m) ⊆ RHS(k)` scanning algebras in order and
/// triples in canonical order. The pair is re-checked by direct membership.
pub fn counterexample_search(catalog: &[FiniteAlgebra], m: usize, k: usize, start: Start) -> Result<Option<Counterexample>> {
    for alg in catalog {
        let cons = all_congruences_capped(alg, DEFAULT_CONGRUENCE_CAP)?;
        for al in &cons {
            for be in &cons {
                for ga in &cons {
                    let inst = IdentityInstance { alpha: al, beta: be, gamma: ga, m, k, rhs_start: start };
                    if let Some(pair) = inst.violation()? {
                        let lhs = lhs_relation(al, be, ga, m)?;
                        let rhs = rhs_relation(al, be, ga, k, start)?;
                        assert!(lhs.contains(pair.0, pair.1) && !rhs.contains(pair.0, pair.1));
                        return Ok(Some(Counterexample {
                            algebra: alg.name().to_string(),
                            alpha: al.to_string(),
                            beta: be.to_string(),
                            gamma: ga.to_string(),
                            pair,
                            m,
                            k,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::relations::all_congruences;
    use proptest::prelude::*;

    /// Path enumeration: is there `x = z_0 ρ_1 z_1 ⋯ ρ_k z_k = y` with `ρ_i`
    /// alternating through `rels` starting at `rels[0]`?
    fn naive_path(size: usize, rels: [&dyn Fn(Elem, Elem) -> bool; 2], k: usize, x: Elem, y: Elem) -> bool {
        let mut frontier = vec![false; size];
        frontier[x] = true;
        for i in 0..k {
            let mut next = vec![false; size];
            for u in 0..size {
                if frontier[u] {
                    for v in 0..size {
                        if rels[i % 2](u, v) {
                            next[v] = true;
                        }
                    }
                }
            }
            frontier = next;
        }
        frontier[y]
    }

    fn naive_check(size: usize, al: &Congruence, be: &Congruence, ga: &Congruence, m: usize, k: usize, start: Start) -> bool {
        let b = |x, y| be.related(x, y);
        let g = |x, y| ga.related(x, y);
        let ab = |x, y| al.related(x, y) && be.related(x, y);
        let ag = |x, y| al.related(x, y) && ga.related(x, y);
        let rhs: [&dyn Fn(Elem, Elem) -> bool; 2] = match start {
            Start::Beta => [&ab, &ag],
            Start::Gamma => [&ag, &ab],
        };
        (0..size).all(|x| {
            (0..size).all(|y| !(al.related(x, y) && naive_path(size, [&b, &g], m, x, y)) || naive_path(size, rhs, k, x, y))
        })
    }

    #[test]
    fn lhs_examples() {
        let g = catalog::generate("lattice-prod:2x2").unwrap();
        let (p1, p2) = (Congruence::from_blocks(&g.named[0].1), Congruence::from_blocks(&g.named[1].1));
        let top = Congruence::nabla(4);
        assert_eq!(lhs_relation(&top, &p1, &p2, 2).unwrap(), BinRel::full(4));
        assert_eq!(lhs_relation(&Congruence::delta(4), &p1, &p2, 3).unwrap(), BinRel::identity(4));
    }

    #[test]
    fn three_chain_minimal_k() {
        let alg = catalog::lattice_chain(3);
        let top = Congruence::nabla(3);
        let be = Congruence::from_blocks(&[0, 0, 1]);
        let ga = Congruence::from_blocks(&[0, 1, 1]);
        // brute force over k = 1..6 with the path oracle
        let oracle = (1..=6).find(|&k| naive_check(3, &top, &be, &ga, 2, k, Start::Beta)).unwrap();
        let got = minimal_k(&top, &be, &ga, 2, 6, Start::Beta).unwrap();
        assert_eq!(got.k(), Some(oracle));
        assert_eq!(oracle, 2);
        let MinimalK::Found { witness: Some((x, y)), .. } = got else { panic!("{got:?}") };
        assert!(lhs_relation(&top, &be, &ga, 2).unwrap().contains(x, y));
        assert!(!rhs_relation(&top, &be, &ga, 1, Start::Beta).unwrap().contains(x, y));
        let _ = alg;
    }

    #[test]
    fn trivial_rows() {
        let top = Congruence::nabla(3);
        assert_eq!(minimal_k(&top, &top, &top, 5, 4, Start::Beta).unwrap().k(), Some(1));
        let d = Congruence::delta(3);
        assert_eq!(minimal_k(&d, &top, &top, 5, 4, Start::Gamma).unwrap().k(), Some(1));
        let sp = spectrum(&catalog::trivial(), &[1, 2, 4], 4, Start::Beta).unwrap();
        assert!(sp.rows.iter().all(|r| r.result.k() == Some(1)));
    }

    #[test]
    fn two_element_lattice_spectrum() {
        let sp = spectrum(&catalog::lattice_chain(2), &[2], 8, Start::Beta).unwrap();
        assert_eq!(sp.rows.len(), 8);
        let cons = all_congruences(&catalog::lattice_chain(2)).unwrap();
        for r in &sp.rows {
            let (al, be, ga) = (&cons[r.alpha], &cons[r.beta], &cons[r.gamma]);
            let oracle = (1..=8).find(|&k| naive_check(2, al, be, ga, 2, k, Start::Beta));
            assert_eq!(r.result.k(), oracle);
        }
        // only β = Δ, α = γ = ∇ needs a second factor
        assert_eq!(sp.rows.iter().filter(|r| r.result.k() == Some(2)).count(), 1);
    }

    #[test]
    fn product_lattice_bound() {
        let sp = spectrum(&catalog::lattice_prod(2, 2), &[4], 32, Start::Beta).unwrap();
        assert_eq!(sp.rows.len(), 64);
        let max = sp.max_by_m[0].max_minimal_k.unwrap();
        assert!(max <= 8);
        assert_eq!(sp.max_by_m[0].unresolved, 0);
    }

    #[test]
    fn csv_layout_is_stable() {
        let sp = spectrum(&catalog::lattice_chain(2), &[2], 4, Start::Beta).unwrap();
        let csv = sp.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("alpha,beta,gamma,m,minimal_k,witness_pair"));
        assert_eq!(lines.next(), Some("0,0,0,2,1,"));
        assert_eq!(csv, spectrum(&catalog::lattice_chain(2), &[2], 4, Start::Beta).unwrap().to_csv());
    }

    #[test]
    fn klein_group_counterexample() {
        let cat = [catalog::lattice_chain(3), catalog::klein4()];
        let found = counterexample_search(&cat, 2, 2, Start::Beta).unwrap().unwrap();
        assert_eq!(found.algebra, "klein4");
        assert!(counterexample_search(&[catalog::zmod(2)], 2, 1, Start::Beta).unwrap().is_some());
        let top = Congruence::nabla(2);
        assert!(check_identity(&IdentityInstance { alpha: &top, beta: &top, gamma: &top, m: 2, k: 1, rhs_start: Start::Beta }));
        // three atoms of M_3: αβ = αγ = Δ while α(β∘γ) = α
        let cons = all_congruences(&catalog::klein4()).unwrap();
        assert_eq!(cons.len(), 5);
        let row = minimal_k(&cons[3], &cons[1], &cons[2], 2, 32, Start::Beta).unwrap();
        assert!(matches!(row, MinimalK::NoneUpTo { .. }));
    }

    #[test]
    fn distributive_catalog_has_no_violation_at_large_k() {
        let cat = [catalog::lattice_chain(2), catalog::lattice_chain(3), catalog::lattice_prod(2, 2), catalog::dual_discriminator(3)];
        assert_eq!(counterexample_search(&cat, 4, 16, Start::Beta).unwrap(), None);
    }

    #[test]
    fn agrees_with_path_oracle_on_catalog() {
        for alg in catalog::standard_catalog() {
            let s = alg.size();
            let cons = all_congruences(&alg).unwrap();
            for al in &cons {
                for be in &cons {
                    for ga in &cons {
                        for m in 1..=4 {
                            for k in 1..=4 {
                                for start in [Start::Beta, Start::Gamma] {
                                    let inst = IdentityInstance { alpha: al, beta: be, gamma: ga, m, k, rhs_start: start };
                                    assert_eq!(check_identity(&inst), naive_check(s, al, be, ga, m, k, start));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn rows_are_monotone(a in 0usize..5, b in 0usize..5, g in 0usize..5, m in 1usize..6, k in 1usize..8) {
            let cons = all_congruences(&catalog::lattice_chain(4)).unwrap();
            let (al, be, ga) = (&cons[a % cons.len()], &cons[b % cons.len()], &cons[g % cons.len()]);
            let at = |k| check_identity(&IdentityInstance { alpha: al, beta: be, gamma: ga, m, k, rhs_start: Start::Beta });
            prop_assert!(!at(k) || at(k + 1));
        }
    }
}
