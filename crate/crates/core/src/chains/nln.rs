//! n-ℓ-n chains: the base chain obtained from `t_1, t_2, t_3` and the
//! reduction that shortens its middle part by two.
//!
//! A chain `A_0..A_{n−1}, B_0..B_ℓ, C_1..C_n` alternates β, γ from `A_0 = a`
//! to `C_n = c`. Besides the elements it carries, for every `B_j`, β/γ
//! sequences of length `n` from `a` to `B_j` and from `B_j` to `c`; the
//! reduction uses these to build the primed elements.

use std::fmt;

use super::{ChainContext, Factor, Label, LabeledStep, WitnessChain};
use crate::algebra::Elem;
use crate::error::{Error, Result};
use crate::maltsev::{CompiledSystem, JonssonSystem, SystemFlavor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NlnChain {
    pub n: usize,
    pub ell: usize,
    /// `A_0..A_{n−1}`
    pub a_part: Vec<Elem>,
    /// `B_0..B_ℓ`
    pub b_part: Vec<Elem>,
    /// `C_1..C_n`
    pub c_part: Vec<Elem>,
    /// For each `j`, `a = W_0, …, W_n = B_j`.
    pub from_a: Vec<Vec<Elem>>,
    /// For each `j`, `B_j = V_0, …, V_n = c`.
    pub to_c: Vec<Vec<Elem>>,
    /// Which candidate reading produced each reduction so far.
    pub readings: Vec<String>,
}

impl NlnChain {
    /// The main sequence `A_0, …, A_{n−1}, B_0, …, B_ℓ, C_1, …, C_n`.
    pub fn sequence(&self) -> Vec<Elem> {
        self.a_part.iter().chain(&self.b_part).chain(&self.c_part).copied().collect()
    }

    /// Names matching `sequence`.
    pub fn names(&self) -> Vec<String> {
        (0..self.n)
            .map(|i| format!("A_{i}"))
            .chain((0..=self.ell).map(|j| format!("B_{j}")))
            .chain((1..=self.n).map(|i| format!("C_{i}")))
            .collect()
    }
}

/// How the reduction treats formulas the source displays inconsistently.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Reading {
    /// Only the first candidate.
    Strict,
    /// Every candidate in order until one validates.
    #[default]
    TryAll,
}

fn alternating(k: usize) -> Label {
    if k.is_multiple_of(2) {
        Label::Beta
    } else {
        Label::Gamma
    }
}

#[derive(Debug)]
struct Failure {
    step: usize,
    expected: String,
    detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: expected {} ({})", self.step, self.expected, self.detail)
    }
}

impl From<Failure> for Error {
    fn from(f: Failure) -> Error {
        Error::StepValidationFailed {
            step: f.step,
            expected: f.expected,
            detail: f.detail,
        }
    }
}

/// Builder-side postcondition: pattern, (C1) and (C2).
fn check(ctx: &ChainContext, ch: &NlnChain) -> Result<(), Failure> {
    let (a, c) = (ctx.a(), ctx.c());
    let seq = ch.sequence();
    let names = ch.names();
    if seq[0] != a || seq[seq.len() - 1] != c {
        return Err(Failure {
            step: 0,
            expected: "endpoints a and c".into(),
            detail: format!("sequence runs from {} to {}", seq[0], seq[seq.len() - 1]),
        });
    }
    for (k, w) in seq.windows(2).enumerate() {
        let label = alternating(k);
        if !ctx.holds(label, w[0], w[1]) {
            return Err(Failure {
                step: k,
                expected: label.to_string(),
                detail: format!("{} = {} and {} = {}", names[k], w[0], names[k + 1], w[1]),
            });
        }
    }
    if let Some(k) = seq.iter().position(|&x| !ctx.alpha.related(a, x)) {
        return Err(Failure {
            step: k,
            expected: "(C1) α-related elements".into(),
            detail: format!("{} = {} is not α-related to a = {a}", names[k], seq[k]),
        });
    }
    for j in 0..=ch.ell {
        for (side, w, start, end) in [("a→B", &ch.from_a[j], a, ch.b_part[j]), ("B→c", &ch.to_c[j], ch.b_part[j], c)] {
            let bad = |detail: String| Failure {
                step: ch.n + j,
                expected: format!("(C2) witness {side}_{j}"),
                detail,
            };
            if w.len() != ch.n + 1 || w[0] != start || w[ch.n] != end {
                return Err(bad(format!("sequence {w:?} does not run from {start} to {end} in {} steps", ch.n)));
            }
            if let Some(k) = (0..ch.n).find(|&k| !ctx.holds(alternating(k), w[k], w[k + 1])) {
                return Err(bad(format!("step {k} ({} → {}) is not {}", w[k], w[k + 1], alternating(k))));
            }
        }
    }
    Ok(())
}

fn jonsson4(ctx: &ChainContext, sys: &JonssonSystem) -> Result<CompiledSystem> {
    if sys.flavor() != SystemFlavor::Jonsson(4) {
        return Err(Error::Premise(format!("n-ℓ-n chains need a jonsson(4) system, got {}", sys.flavor())));
    }
    sys.compile(ctx.alg)
}

/// The base chain with `ℓ = n − 2`: `A_i = t_1(a,b_i,c)`,
/// `B_j = t_2(a,b_{n−1−j},c)`, `C_i = t_3(a,b_i,c)`.
pub fn initial_chain(ctx: &ChainContext, sys: &JonssonSystem) -> Result<NlnChain> {
    let t = jonsson4(ctx, sys)?;
    let n = ctx.n();
    if n < 2 {
        return Err(Error::Premise("n-ℓ-n chains need n ≥ 2".into()));
    }
    let (a, c, b) = (ctx.a(), ctx.c(), &ctx.b);
    let ell = n - 2;
    let b_part: Vec<Elem> = (0..=ell).map(|j| t.t(2, a, b[n - 1 - j], c)).collect();
    let from_a = (0..=ell)
        .map(|j| {
            let m = n - 1 - j;
            (0..=n).map(|k| t.t(2, a, b[k.min(m)], b[k])).collect()
        })
        .collect();
    let to_c = (0..=ell)
        .map(|j| {
            let m = n - 1 - j;
            (0..=n).map(|k| t.t(2, b[k], b[k.max(m)], c)).collect()
        })
        .collect();
    let chain = NlnChain {
        n,
        ell,
        a_part: (0..n).map(|i| t.t(1, a, b[i], c)).collect(),
        b_part,
        c_part: (1..=n).map(|i| t.t(3, a, b[i], c)).collect(),
        from_a,
        to_c,
        readings: Vec::new(),
    };
    check(ctx, &chain)?;
    Ok(chain)
}

/// One documented reading of the primed-element formulas.
struct Candidate {
    name: &'static str,
    /// Argument indices `(i0, i1, i2)` with `B'_j = t_2(B_{i0}, B_{i1}, B_{i2})`.
    b_args: Vec<[usize; 3]>,
    /// Index `h` with `C'_i = t_3(B_h, Y_i, C_i)` and `Y` the witness `B_h → c`.
    c_head: usize,
}

fn candidates(n: usize, ell: usize) -> Vec<Candidate> {
    let formula: Vec<[usize; 3]> = (0..=ell - 2).map(|j| [0, ell - 1 - j, ell]).collect();
    if n.is_multiple_of(2) {
        let mut listed = formula.clone();
        listed[0] = [0, ell - 1, ell - 1];
        vec![
            Candidate { name: "B'_0 = t_2(B_0,B_{ℓ−1},B_ℓ), C'_i = t_3(B_1,Y_i,C_i)", b_args: formula.clone(), c_head: 1 },
            Candidate { name: "B'_0 = t_2(B_0,B_{ℓ−1},B_ℓ), C'_i = t_3(B_0,Y_i,C_i)", b_args: formula, c_head: 0 },
            Candidate { name: "B'_0 = t_2(B_0,B_{ℓ−1},B_{ℓ−1}), C'_i = t_3(B_1,Y_i,C_i)", b_args: listed.clone(), c_head: 1 },
            Candidate { name: "B'_0 = t_2(B_0,B_{ℓ−1},B_{ℓ−1}), C'_i = t_3(B_0,Y_i,C_i)", b_args: listed, c_head: 0 },
        ]
    } else {
        let mut b_args = vec![[0, ell - 2, ell - 1]];
        b_args.extend((1..=ell - 2).map(|j| [0, ell - 2 - j, ell]));
        vec![Candidate { name: "B'_0 = t_2(B_0,B_{ℓ−2},B_{ℓ−1}), C'_i = t_3(B_0,Y_i,C_i)", b_args, c_head: 0 }]
    }
}

fn apply(t: &CompiledSystem, ch: &NlnChain, cand: &Candidate) -> NlnChain {
    let (n, ell) = (ch.n, ch.ell);
    let x = &ch.from_a[ell - 1];
    let y = &ch.to_c[cand.c_head];
    let bl1 = ch.b_part[ell - 1];
    let bh = ch.b_part[cand.c_head];
    let merge = |ws: &Vec<Vec<Elem>>, [i0, i1, i2]: [usize; 3]| -> Vec<Elem> {
        (0..=n).map(|k| t.t(2, ws[i0][k], ws[i1][k], ws[i2][k])).collect()
    };
    NlnChain {
        n,
        ell: ell - 2,
        a_part: (0..n).map(|i| t.t(1, ch.a_part[i], x[i], bl1)).collect(),
        b_part: cand
            .b_args
            .iter()
            .map(|&[i0, i1, i2]| t.t(2, ch.b_part[i0], ch.b_part[i1], ch.b_part[i2]))
            .collect(),
        c_part: (1..=n).map(|i| t.t(3, bh, y[i], ch.c_part[i - 1])).collect(),
        from_a: cand.b_args.iter().map(|&idx| merge(&ch.from_a, idx)).collect(),
        to_c: cand.b_args.iter().map(|&idx| merge(&ch.to_c, idx)).collect(),
        readings: ch.readings.clone(),
    }
}

/// `ℓ → ℓ − 2`. Candidate readings are tried in a fixed order; the one that
/// validates is appended to `readings`.
pub fn reduce_chain(ctx: &ChainContext, sys: &JonssonSystem, chain: &NlnChain, reading: Reading) -> Result<NlnChain> {
    let t = jonsson4(ctx, sys)?;
    let min = if chain.n.is_multiple_of(2) { 2 } else { 3 };
    if chain.ell < min {
        return Err(Error::Premise(format!(
            "cannot reduce an n-ℓ-n chain with n = {} and ℓ = {}",
            chain.n, chain.ell
        )));
    }
    let mut cands = candidates(chain.n, chain.ell);
    if reading == Reading::Strict {
        cands.truncate(1);
    }
    let mut failures = Vec::new();
    for cand in &cands {
        let mut next = apply(&t, chain, cand);
        match check(ctx, &next) {
            Ok(()) => {
                next.readings.push(format!("ℓ={}→{}: {}", chain.ell, next.ell, cand.name));
                return Ok(next);
            }
            Err(f) if cands.len() == 1 => {
                return Err(Error::StepValidationFailed {
                    step: f.step,
                    expected: f.expected,
                    detail: format!("{} under reading {}", f.detail, cand.name),
                })
            }
            Err(f) => failures.push(format!("{}: {f}", cand.name)),
        }
    }
    Err(Error::AmbiguousFormula(failures))
}

/// Every stage of a full reduction and the flattened final chain.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub stages: Vec<NlnChain>,
    pub chain: WitnessChain,
}

/// Base chain, then reductions down to `ℓ = 0` (n even) or `ℓ = 1` (n odd),
/// flattened to alternating `αβ`/`αγ` steps. Every step keeps its structural
/// label, so the factor count is exactly `2n` or `2n + 1`.
pub fn full_reduction(ctx: &ChainContext, sys: &JonssonSystem, reading: Reading) -> Result<Reduction> {
    let mut stages = vec![initial_chain(ctx, sys)?];
    let stop = ctx.n() % 2;
    while stages.last().expect("non-empty").ell > stop {
        let next = reduce_chain(ctx, sys, stages.last().expect("non-empty"), reading)?;
        stages.push(next);
    }
    let last = stages.last().expect("non-empty");
    let seq = last.sequence();
    let names = last.names();
    let steps = seq
        .windows(2)
        .enumerate()
        .map(|(k, w)| LabeledStep {
            from: w[0],
            to: w[1],
            label: if k % 2 == 0 { Label::AlphaBeta } else { Label::AlphaGamma },
            justification: format!("{} → {}", names[k], names[k + 1]),
        })
        .collect::<Vec<_>>();
    let claim = Factor::alternating(Label::AlphaBeta, steps.len());
    let chain = WitnessChain {
        construction: format!("full-reduction(n={})", ctx.n()),
        start: seq[0],
        exprs: names,
        steps,
        claim,
    };
    Ok(Reduction { stages, chain })
}
