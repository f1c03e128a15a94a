//! Re-checks chains against the congruences using nothing but membership
//! tests, so a transcription error in a builder cannot hide itself.

use serde::Serialize;

use super::{Factor, Label, NlnChain, WitnessChain};
use crate::algebra::{Elem, FiniteAlgebra};
use crate::relations::Congruence;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepCheck {
    pub index: usize,
    pub ok: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub steps: Vec<StepCheck>,
    /// Collapsed factors, rendered.
    pub factors: Vec<String>,
    pub factor_count: usize,
    /// Whether the factors embed into the claimed product.
    pub claim_ok: bool,
    pub first_failure: Option<usize>,
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.first_failure.is_none() && self.claim_ok && self.problems.is_empty()
    }
}

fn related(c: &Congruence, x: Elem, y: Elem) -> bool {
    c.related(x, y)
}

/// Checks continuity, each step's labeled relation, that every maximal run of
/// plain β/γ steps has α-related endpoints, and that the collapsed factors fit
/// the chain's claim.
pub fn validate_chain(
    alg: &FiniteAlgebra,
    chain: &WitnessChain,
    alpha: &Congruence,
    beta: &Congruence,
    gamma: &Congruence,
) -> ValidationReport {
    let s = alg.size();
    let mut steps = Vec::with_capacity(chain.steps.len());
    let mut problems = Vec::new();
    let mut prev = chain.start;
    for (i, st) in chain.steps.iter().enumerate() {
        let detail = if st.from >= s || st.to >= s {
            Some(format!("element outside 0..{s}"))
        } else if st.from != prev {
            Some(format!("starts at {} but the previous step ended at {prev}", st.from))
        } else {
            let (x, y) = (st.from, st.to);
            let ok = match st.label {
                Label::Equal => x == y,
                Label::Beta => related(beta, x, y),
                Label::Gamma => related(gamma, x, y),
                Label::AlphaBeta => related(alpha, x, y) && related(beta, x, y),
                Label::AlphaGamma => related(alpha, x, y) && related(gamma, x, y),
            };
            (!ok).then(|| format!("({x},{y}) ∉ {}", st.label))
        };
        steps.push(StepCheck { index: i, ok: detail.is_none(), detail });
        prev = st.to;
    }

    // plain runs: endpoints must be α-related; a failure sits on the run's last step
    let mut i = 0;
    while i < chain.steps.len() {
        if !chain.steps[i].label.is_plain() {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < chain.steps.len() && matches!(chain.steps[j + 1].label, Label::Beta | Label::Gamma | Label::Equal) {
            j += 1;
        }
        let (x, y) = (chain.steps[i].from, chain.steps[j].to);
        if x < s && y < s && !related(alpha, x, y) && steps[j].ok {
            steps[j].ok = false;
            steps[j].detail = Some(format!("plain run from step {i} joins {x} and {y}, which are not α-related"));
        }
        i = j + 1;
    }

    let mut factors: Vec<Factor> = Vec::new();
    let mut word: Vec<Label> = Vec::new();
    for st in &chain.steps {
        let next = match st.label {
            Label::Equal => continue,
            Label::Beta | Label::Gamma => {
                if word.last() != Some(&st.label) {
                    word.push(st.label);
                }
                continue;
            }
            Label::AlphaBeta => Factor::AlphaBeta,
            Label::AlphaGamma => Factor::AlphaGamma,
        };
        if !word.is_empty() {
            factors.push(Factor::normalized(std::mem::take(&mut word)));
        }
        factors.push(next);
    }
    if !word.is_empty() {
        factors.push(Factor::normalized(word));
    }
    factors.dedup();

    let mut pat = chain.claim.iter();
    let claim_ok = factors.iter().all(|f| pat.any(|p| f.fits(p)));
    if !claim_ok {
        problems.push(format!(
            "factors {} do not fit the claimed product {}",
            factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("∘"),
            chain.claim.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("∘")
        ));
    }
    if chain.exprs.len() != chain.steps.len() + 1 {
        problems.push(format!("{} expressions for {} steps", chain.exprs.len(), chain.steps.len()));
    }
    ValidationReport {
        first_failure: steps.iter().position(|c| !c.ok),
        factor_count: factors.len(),
        factors: factors.iter().map(|f| f.to_string()).collect(),
        steps,
        claim_ok,
        problems,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NlnReport {
    pub pattern_ok: bool,
    pub c1_ok: bool,
    pub c2_ok: bool,
    pub failures: Vec<String>,
}

impl NlnReport {
    pub fn ok(&self) -> bool {
        self.pattern_ok && self.c1_ok && self.c2_ok
    }
}

/// Checks an n-ℓ-n chain between `a` and `c`: parity and sizes, the
/// alternating pattern, (C1) and (C2).
pub fn validate_nln(
    chain: &NlnChain,
    a: Elem,
    c: Elem,
    alpha: &Congruence,
    beta: &Congruence,
    gamma: &Congruence,
) -> NlnReport {
    let mut failures = Vec::new();
    let n = chain.n;
    let rel = |k: usize| if k.is_multiple_of(2) { (beta, "β") } else { (gamma, "γ") };

    let shape_ok = chain.ell % 2 == n % 2
        && chain.a_part.len() == n
        && chain.b_part.len() == chain.ell + 1
        && chain.c_part.len() == n;
    if !shape_ok {
        failures.push(format!(
            "shape: n = {n}, ℓ = {}, |A| = {}, |B| = {}, |C| = {}",
            chain.ell,
            chain.a_part.len(),
            chain.b_part.len(),
            chain.c_part.len()
        ));
    }
    let seq: Vec<Elem> = chain.a_part.iter().chain(&chain.b_part).chain(&chain.c_part).copied().collect();
    let mut pattern_ok = shape_ok && seq.first() == Some(&a) && seq.last() == Some(&c);
    if seq.first() != Some(&a) || seq.last() != Some(&c) {
        failures.push(format!("sequence does not run from a = {a} to c = {c}"));
    }
    for k in 0..seq.len().saturating_sub(1) {
        let (r, name) = rel(k);
        if !r.related(seq[k], seq[k + 1]) {
            pattern_ok = false;
            failures.push(format!("pattern step {k}: ({}, {}) ∉ {name}", seq[k], seq[k + 1]));
        }
    }
    let mut c1_ok = true;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if !alpha.related(seq[i], seq[j]) {
                c1_ok = false;
                failures.push(format!("(C1): elements {i} and {j} are not α-related"));
            }
        }
    }
    let mut c2_ok = chain.from_a.len() == chain.b_part.len() && chain.to_c.len() == chain.b_part.len();
    if !c2_ok {
        failures.push("(C2): witness count differs from |B|".into());
    }
    for (j, &bj) in chain.b_part.iter().enumerate() {
        let sides = [(chain.from_a.get(j), a, bj, "a→B"), (chain.to_c.get(j), bj, c, "B→c")];
        for (w, start, end, name) in sides {
            let Some(w) = w else { continue };
            if w.len() != n + 1 || w.first() != Some(&start) || w.last() != Some(&end) {
                c2_ok = false;
                failures.push(format!("(C2) {name}_{j}: wrong length or endpoints"));
                continue;
            }
            for k in 0..n {
                let (r, rn) = rel(k);
                if !r.related(w[k], w[k + 1]) {
                    c2_ok = false;
                    failures.push(format!("(C2) {name}_{j} step {k}: ({}, {}) ∉ {rn}", w[k], w[k + 1]));
                }
            }
        }
    }
    NlnReport {
        pattern_ok,
        c1_ok,
        c2_ok,
        failures,
    }
}
