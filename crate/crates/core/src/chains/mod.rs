//! Witness chains: element sequences whose consecutive pairs lie in labeled
//! relations built from three congruences α, β, γ. The builders evaluate term
//! expressions in a concrete algebra; `validate` re-checks the result without
//! sharing any code with them.

mod build;
mod nln;
mod report;
mod validate;

use std::fmt;

use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::relations::Congruence;

pub use build::{find_x, thm22_chain, thm23_chain, thm43_chain, thm44_chain, XChoice};
pub use nln::{full_reduction, initial_chain, reduce_chain, NlnChain, Reading, Reduction};
pub use report::{ChainReport, InvariantCheck, StepRecord};
pub use validate::{validate_chain, validate_nln, NlnReport, StepCheck, ValidationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Beta,
    Gamma,
    AlphaBeta,
    AlphaGamma,
    Equal,
}

impl Label {
    pub fn is_plain(self) -> bool {
        matches!(self, Label::Beta | Label::Gamma)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Label::Beta => "β",
            Label::Gamma => "γ",
            Label::AlphaBeta => "αβ",
            Label::AlphaGamma => "αγ",
            Label::Equal => "=",
        }
    }

    pub fn swapped(self) -> Label {
        match self {
            Label::Beta => Label::Gamma,
            Label::Gamma => Label::Beta,
            Label::AlphaBeta => Label::AlphaGamma,
            Label::AlphaGamma => Label::AlphaBeta,
            Label::Equal => Label::Equal,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// One factor of a relational product: `αβ`, `αγ`, or `α(ρ_1 ∘ ⋯ ∘ ρ_k)`
/// with each `ρ_i` one of β, γ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    AlphaBeta,
    AlphaGamma,
    AlphaOf(Vec<Label>),
}

impl Factor {
    /// Normal form: `α(β)` is `αβ`, `α(γ)` is `αγ`.
    pub fn normalized(word: Vec<Label>) -> Factor {
        match word.as_slice() {
            [Label::Beta] => Factor::AlphaBeta,
            [Label::Gamma] => Factor::AlphaGamma,
            _ => Factor::AlphaOf(word),
        }
    }

    fn word(&self) -> Vec<Label> {
        match self {
            Factor::AlphaBeta => vec![Label::Beta],
            Factor::AlphaGamma => vec![Label::Gamma],
            Factor::AlphaOf(w) => w.clone(),
        }
    }

    /// Whether this factor is contained in `other` for all congruences;
    /// holds when its word is a subsequence of the other word.
    pub fn fits(&self, other: &Factor) -> bool {
        let (mine, theirs) = (self.word(), other.word());
        let mut it = theirs.iter();
        mine.iter().all(|l| it.any(|m| m == l))
    }

    /// `k` alternating factors beginning with `first`.
    pub fn alternating(first: Label, k: usize) -> Vec<Factor> {
        let (x, y) = match first {
            Label::Gamma | Label::AlphaGamma => (Factor::AlphaGamma, Factor::AlphaBeta),
            _ => (Factor::AlphaBeta, Factor::AlphaGamma),
        };
        (0..k).map(|i| if i % 2 == 0 { x.clone() } else { y.clone() }).collect()
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::AlphaBeta => f.write_str("αβ"),
            Factor::AlphaGamma => f.write_str("αγ"),
            Factor::AlphaOf(w) => {
                let inner: Vec<&str> = w.iter().map(|l| l.symbol()).collect();
                write!(f, "α({})", inner.join("∘"))
            }
        }
    }
}

/// Whether `factors` embeds, in order, into `pattern`.
pub fn embeds(factors: &[Factor], pattern: &[Factor]) -> bool {
    let mut it = pattern.iter();
    factors.iter().all(|f| it.any(|p| f.fits(p)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledStep {
    pub from: Elem,
    pub to: Elem,
    pub label: Label,
    pub justification: String,
}

/// A chain `x_0 ρ_1 x_1 ρ_2 ⋯ x_k`. `exprs[i]` is the expression that
/// produced `x_i`; `claim` is the relational product the construction asserts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessChain {
    pub construction: String,
    pub start: Elem,
    pub exprs: Vec<String>,
    pub steps: Vec<LabeledStep>,
    pub claim: Vec<Factor>,
}

impl WitnessChain {
    pub fn end(&self) -> Elem {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    pub fn elements(&self) -> Vec<Elem> {
        std::iter::once(self.start).chain(self.steps.iter().map(|s| s.to)).collect()
    }

    /// Factors after dropping `=` steps, merging equal neighbours and
    /// grouping runs of plain β/γ steps into one `α(…)` factor.
    pub fn factors(&self) -> Vec<Factor> {
        let mut out: Vec<Factor> = Vec::new();
        let mut run: Vec<Label> = Vec::new();
        let flush = |run: &mut Vec<Label>, out: &mut Vec<Factor>| {
            if !run.is_empty() {
                out.push(Factor::normalized(std::mem::take(run)));
            }
        };
        for step in &self.steps {
            match step.label {
                Label::Equal => {}
                Label::Beta | Label::Gamma => {
                    if run.last() != Some(&step.label) {
                        run.push(step.label);
                    }
                }
                l => {
                    flush(&mut run, &mut out);
                    let f = if l == Label::AlphaBeta { Factor::AlphaBeta } else { Factor::AlphaGamma };
                    if out.last() != Some(&f) {
                        out.push(f);
                    }
                }
            }
        }
        flush(&mut run, &mut out);
        out.dedup();
        out
    }

    pub fn factor_count(&self) -> usize {
        self.factors().len()
    }

    /// Occurrences of `∘` in the collapsed product.
    pub fn compose_count(&self) -> usize {
        self.factor_count().saturating_sub(1)
    }
}

/// The data every construction starts from: congruences and a chain
/// `a = b_0 β b_1 γ b_2 ⋯ b_n = c` alternating from β, with `a α c`.
#[derive(Clone, Debug)]
pub struct ChainContext<'a> {
    pub alg: &'a FiniteAlgebra,
    pub alpha: Congruence,
    pub beta: Congruence,
    pub gamma: Congruence,
    pub b: Vec<Elem>,
}

impl<'a> ChainContext<'a> {
    pub fn new(
        alg: &'a FiniteAlgebra,
        alpha: Congruence,
        beta: Congruence,
        gamma: Congruence,
        b: Vec<Elem>,
    ) -> Result<Self> {
        let s = alg.size();
        for c in [&alpha, &beta, &gamma] {
            if c.size() != s {
                return Err(Error::SizeMismatch { left: s, right: c.size() });
            }
        }
        if b.len() < 2 {
            return Err(Error::Premise("the element chain needs at least two elements".into()));
        }
        if let Some(&bad) = b.iter().find(|&&x| x >= s) {
            return Err(Error::Premise(format!("element {bad} outside the universe 0..{s}")));
        }
        for (i, w) in b.windows(2).enumerate() {
            let (rel, name) = if i % 2 == 0 { (&beta, "β") } else { (&gamma, "γ") };
            if !rel.related(w[0], w[1]) {
                return Err(Error::Premise(format!("b_{i} = {} and b_{} = {} are not {name}-related", w[0], i + 1, w[1])));
            }
        }
        let (a, c) = (b[0], b[b.len() - 1]);
        if !alpha.related(a, c) {
            return Err(Error::Premise(format!("endpoints {a} and {c} are not α-related")));
        }
        Ok(ChainContext { alg, alpha, beta, gamma, b })
    }

    pub fn n(&self) -> usize {
        self.b.len() - 1
    }

    pub fn a(&self) -> Elem {
        self.b[0]
    }

    pub fn c(&self) -> Elem {
        self.b[self.n()]
    }

    pub(crate) fn holds(&self, label: Label, x: Elem, y: Elem) -> bool {
        match label {
            Label::Beta => self.beta.related(x, y),
            Label::Gamma => self.gamma.related(x, y),
            Label::AlphaBeta => self.alpha.related(x, y) && self.beta.related(x, y),
            Label::AlphaGamma => self.alpha.related(x, y) && self.gamma.related(x, y),
            Label::Equal => x == y,
        }
    }
}
