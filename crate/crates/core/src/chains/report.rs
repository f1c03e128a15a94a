use std::fmt::Write as _;

use serde::Serialize;

use super::{Label, ValidationReport, WitnessChain};
use crate::algebra::Elem;

#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub from: Elem,
    pub to: Elem,
    pub label: Label,
    pub justification: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub ok: bool,
    pub detail: Option<String>,
}

/// A chain with the outcome of its validation, ready for JSON or text output.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub construction: String,
    pub start: Elem,
    pub end: Elem,
    pub steps: Vec<StepRecord>,
    pub factors: Vec<String>,
    pub factor_count: usize,
    pub compose_count: usize,
    pub claim: Vec<String>,
    pub invariants: Vec<InvariantCheck>,
    pub readings: Vec<String>,
    #[serde(skip)]
    exprs: Vec<String>,
}

impl ChainReport {
    pub fn new(chain: &WitnessChain, validation: &ValidationReport) -> Self {
        let steps = chain
            .steps
            .iter()
            .zip(&validation.steps)
            .map(|(s, v)| StepRecord {
                from: s.from,
                to: s.to,
                label: s.label,
                justification: s.justification.clone(),
                ok: v.ok,
            })
            .collect();
        let mut invariants = vec![InvariantCheck {
            name: "steps".into(),
            ok: validation.first_failure.is_none(),
            detail: validation.first_failure.map(|i| {
                format!("step {i}: {}", validation.steps[i].detail.clone().unwrap_or_default())
            }),
        }];
        invariants.push(InvariantCheck {
            name: "claim".into(),
            ok: validation.claim_ok,
            detail: validation.problems.first().cloned(),
        });
        ChainReport {
            construction: chain.construction.clone(),
            start: chain.start,
            end: chain.end(),
            steps,
            factors: validation.factors.clone(),
            factor_count: validation.factor_count,
            compose_count: validation.factor_count.saturating_sub(1),
            claim: chain.claim.iter().map(|f| f.to_string()).collect(),
            invariants,
            readings: Vec::new(),
            exprs: chain.exprs.clone(),
        }
    }

    pub fn ok(&self) -> bool {
        self.invariants.iter().all(|c| c.ok)
    }

    pub fn push_invariant(&mut self, name: impl Into<String>, ok: bool, detail: Option<String>) {
        self.invariants.push(InvariantCheck { name: name.into(), ok, detail });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per element, with the relation to the next element at the end.
    pub fn to_text(&self) -> String {
        let width = self.exprs.iter().map(|e| e.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "{}: {} → {}", self.construction, self.start, self.end);
        let values = std::iter::once(self.start).chain(self.steps.iter().map(|s| s.to));
        for (i, (expr, val)) in self.exprs.iter().zip(values).enumerate() {
            let pad = width - expr.chars().count();
            let _ = write!(out, "  {expr}{} = {val:<3}", " ".repeat(pad));
            if let Some(s) = self.steps.get(i) {
                let mark = if s.ok { "" } else { "  FAILED" };
                let _ = write!(out, " {:<2}  [{}]{mark}", s.label.symbol(), s.justification);
            }
            out.push('\n');
        }
        let _ = writeln!(out, "factors: {}", self.factors.join(" ∘ "));
        let _ = writeln!(out, "factor_count: {}  compose_count: {}", self.factor_count, self.compose_count);
        let _ = writeln!(out, "claim: {}", self.claim.join(" ∘ "));
        for r in &self.readings {
            let _ = writeln!(out, "reading: {r}");
        }
        for c in &self.invariants {
            let _ = writeln!(
                out,
                "{}: {}{}",
                c.name,
                if c.ok { "ok" } else { "FAILED" },
                c.detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default()
            );
        }
        out
    }
}
