//! The F-element chains for `α(β∘γ∘β∘γ)` and their extensions along longer
//! Jónsson and alvin systems.
//!
//! Each chain is assembled as two halves meeting at a middle element. The
//! front half is written out directly; the back half is the front half run on
//! the reversed element chain `e, d, c, b, a` through the reversed system
//! `t'_i(x,y,z) = t_{k−i}(z,y,x)` with β and γ exchanged, then read backwards.

use super::{ChainContext, Factor, Label, LabeledStep, WitnessChain};
use crate::algebra::Elem;
use crate::error::{Error, Result};
use crate::maltsev::{CompiledSystem, JonssonSystem, SystemFlavor};

/// An element together with the expression that produced it.
#[derive(Clone, Debug)]
struct Ex {
    val: Elem,
    text: String,
}

impl Ex {
    fn var(name: &str, val: Elem) -> Ex {
        Ex { val, text: name.to_string() }
    }
}

/// Term evaluation, optionally through the reversed system.
struct View<'s> {
    sys: &'s CompiledSystem,
    mirror: Option<usize>,
}

impl View<'_> {
    fn t(&self, i: usize, x: &Ex, y: &Ex, z: &Ex) -> Ex {
        match self.mirror {
            None => Ex {
                val: self.sys.t(i, x.val, y.val, z.val),
                text: format!("t_{i}({},{},{})", x.text, y.text, z.text),
            },
            Some(k) => Ex {
                val: self.sys.t(k - i, z.val, y.val, x.val),
                text: format!("t_{}({},{},{})", k - i, z.text, y.text, x.text),
            },
        }
    }

    /// The linking equation between `t_i` and `t_{i+1}`, in original indices.
    fn link(&self, i: usize) -> String {
        let j = match self.mirror {
            None => i,
            Some(k) => k - i - 1,
        };
        let shape = if j % 2 == 1 { "x,z,z" } else { "x,x,z" };
        format!("t_{j}({shape}) = t_{}({shape})", j + 1)
    }

    fn head(&self, flavor_alvin: bool) -> String {
        match (self.mirror, flavor_alvin) {
            (None, false) => "x = t_1(x,x,z)".into(),
            (None, true) => "x = t_0(x,y,y)".into(),
            (Some(k), false) => format!("t_{}(x,z,z) = z", k - 1),
            (Some(k), true) => format!("t_{k}(x,x,z) = z"),
        }
    }
}

/// A chain under construction with abstract labels; `Beta`/`Gamma` mean the
/// β/γ of the current half and become α-labels on assembly.
struct Trail {
    points: Vec<Ex>,
    steps: Vec<(Label, String)>,
}

impl Trail {
    fn start(p: Ex) -> Trail {
        Trail { points: vec![p], steps: Vec::new() }
    }

    fn push(&mut self, label: Label, why: impl Into<String>, p: Ex) {
        self.steps.push((label, why.into()));
        self.points.push(p);
    }

    fn last(&self) -> &Ex {
        self.points.last().expect("trail is never empty")
    }
}

fn mv(from: &Ex, to: &Ex) -> String {
    format!("{}→{}", from.text, to.text)
}

struct Names {
    a: Ex,
    b: Ex,
    c: Ex,
    d: Ex,
    e: Ex,
}

impl Names {
    fn new(v: [Elem; 5], reversed: bool) -> Names {
        let n = ["a", "b", "c", "d", "e"];
        let (v, n) = if reversed {
            ([v[4], v[3], v[2], v[1], v[0]], ["e", "d", "c", "b", "a"])
        } else {
            (v, n)
        };
        Names {
            a: Ex::var(n[0], v[0]),
            b: Ex::var(n[1], v[1]),
            c: Ex::var(n[2], v[2]),
            d: Ex::var(n[3], v[3]),
            e: Ex::var(n[4], v[4]),
        }
    }
}

/// The third line `t_1(t_1(a,c,e), t_2(a,c,c), t_2(a,c,e))` of the displayed chain.
fn line3(v: &View, n: &Names) -> Ex {
    let Names { a, c, e, .. } = n;
    v.t(1, &v.t(1, a, c, e), &v.t(2, a, c, c), &v.t(2, a, c, e))
}

/// From `a` (or from the third line when `tr` already ends there) to
/// `F_2 = t_2(t_2(a,d,e), t_2(a,c,e), t_2(a,b,e))`.
fn to_f2(v: &View, n: &Names, tr: &mut Trail, from_line3: bool, last: Label) {
    let Names { a, b, c, d, e } = n;
    let q = v.t(2, a, c, e);
    if !from_line3 {
        let l1 = v.t(1, &v.t(1, a, a, e), &v.t(2, a, a, a), &q);
        tr.push(Label::Equal, format!("{}, t_2 idempotent", v.head(false)), l1);
        let l2 = v.t(1, &v.t(1, a, b, e), &v.t(2, a, b, b), &q);
        tr.push(Label::Beta, mv(a, b), l2);
        tr.push(Label::Gamma, mv(b, c), line3(v, n));
    }
    let l4 = v.t(1, &v.t(1, a, d, e), &v.t(2, a, c, d), &q);
    tr.push(Label::Beta, mv(c, d), l4);
    let l5 = v.t(1, &v.t(1, a, e, e), &q, &q);
    tr.push(Label::Gamma, mv(d, e), l5);
    let l5b = v.t(2, &v.t(2, a, e, e), &q, &q);
    tr.push(Label::Equal, v.link(1), l5b);
    let f = v.t(2, &v.t(2, a, d, e), &q, &v.t(2, a, b, e));
    tr.push(last, format!("{}, {}", mv(e, d), mv(c, b)), f);
}

/// `F_p → F_{p+2}` for even `p`, through `t_{p+1}`.
fn block(v: &View, n: &Names, p: usize, tr: &mut Trail) {
    let Names { a, b, c, d, e } = n;
    let (q, r) = (p + 1, p + 2);
    let t = |i, x: &Ex, y: &Ex, z: &Ex| v.t(i, x, y, z);
    let pace = t(p, a, c, e);

    tr.push(Label::Beta, format!("{}, {}", mv(d, c), mv(b, a)), t(p, &t(p, a, c, e), &pace, &t(p, a, a, e)));
    tr.push(Label::Equal, v.link(p), t(q, &t(p, a, c, e), &pace, &t(q, a, a, e)));
    tr.push(Label::Beta, mv(a, b), t(q, &pace, &t(p, b, c, e), &t(q, a, b, e)));
    tr.push(Label::Gamma, format!("{}, {}", mv(c, b), mv(b, c)), t(q, &t(p, a, b, e), &t(p, c, c, e), &t(q, a, c, e)));
    tr.push(Label::Equal, v.link(p), t(q, &t(p, a, b, e), &t(q, c, c, e), &t(q, a, c, e)));
    tr.push(
        Label::Beta,
        format!("{}, {}", mv(b, a), mv(c, d)),
        t(q, &t(p, a, a, e), &t(q, c, d, e), &t(q, a, d, e)),
    );
    tr.push(Label::Equal, v.link(p), t(q, &t(q, a, a, e), &t(q, c, d, e), &t(q, a, d, e)));
    tr.push(Label::Beta, mv(a, b), t(q, &t(q, a, b, e), &t(q, c, d, e), &t(q, a, d, e)));
    tr.push(
        Label::Gamma,
        format!("{}, {}, {}", mv(b, c), mv(c, b), mv(d, e)),
        t(q, &t(q, a, c, e), &t(q, b, e, e), &t(q, a, e, e)),
    );
    tr.push(Label::Equal, v.link(q), t(q, &t(q, a, c, e), &t(r, b, e, e), &t(r, a, e, e)));
    tr.push(Label::Gamma, mv(e, d), t(q, &t(q, a, c, e), &t(r, b, d, e), &t(r, a, d, e)));
    let rc = t(r, a, c, e);
    tr.push(Label::Beta, format!("{}, {}, {}", mv(c, d), mv(b, a), mv(d, c)), t(q, &t(q, a, d, e), &rc, &rc));
    tr.push(Label::Equal, v.link(q), t(r, &t(q, a, d, e), &rc, &rc));
    tr.push(Label::Gamma, mv(d, e), t(r, &t(q, a, e, e), &rc, &rc));
    tr.push(Label::Equal, v.link(q), t(r, &t(r, a, e, e), &rc, &rc));
    tr.push(
        Label::Gamma,
        format!("{}, {}", mv(e, d), mv(c, b)),
        t(r, &t(r, a, d, e), &rc, &t(r, a, b, e)),
    );
}

/// The alvin prefix from `a` to the third line, through `t_0`.
fn alvin_prefix(v: &View, n: &Names, x: &Ex, tr: &mut Trail) -> Result<()> {
    let Names { a, b, c, d, e } = n;
    let t = |i, x: &Ex, y: &Ex, z: &Ex| v.t(i, x, y, z);
    let (ab, ac) = (t(1, a, b, e), t(1, a, c, e));
    let aa = t(1, a, a, e);
    tr.push(Label::Equal, v.head(true), t(0, a, &ab, &ab));
    tr.push(Label::Gamma, format!("{}, {}", mv(a, x), mv(b, c)), t(0, x, &ab, &ac));
    let head = t(0, a, a, e);
    tr.push(Label::Beta, format!("{}, {}", mv(x, &head), mv(b, a)), t(0, &head, &aa, &ac));
    tr.push(Label::Equal, v.link(0), t(0, &aa, &aa, &ac));
    tr.push(Label::Equal, v.link(0), t(1, &aa, &aa, &ac));
    tr.push(Label::Beta, format!("{}, {}", mv(a, b), mv(c, d)), t(1, &ab, &ab, &t(1, a, d, e)));
    tr.push(Label::Gamma, mv(d, e), t(1, &ab, &ab, &t(1, a, e, e)));
    tr.push(Label::Equal, v.link(1), t(1, &ab, &ab, &t(2, a, e, e)));
    tr.push(Label::Gamma, format!("{}, {}", mv(b, c), mv(e, d)), t(1, &ac, &t(1, a, c, d), &t(2, a, d, e)));
    tr.push(Label::Beta, format!("{}, {}", mv(d, c), mv(d, c)), t(1, &ac, &t(1, a, c, c), &t(2, a, c, e)));
    tr.push(Label::Equal, v.link(1), t(1, &ac, &t(2, a, c, c), &t(2, a, c, e)));
    let third = line3(v, n);
    if tr.last().val != third.val {
        return Err(Error::StepValidationFailed {
            step: tr.steps.len() - 1,
            expected: "the third line of the F-chain".into(),
            detail: format!("prefix ends at {} but {} = {}", tr.last().val, third.text, third.val),
        });
    }
    Ok(())
}

/// Front half up to `F_top`: optional alvin prefix, the F_2 segment, then blocks.
fn front(v: &View, n: &Names, x: Option<&Ex>, top: usize, last_f2: Label) -> Result<Trail> {
    let mut tr = Trail::start(n.a.clone());
    if let Some(x) = x {
        alvin_prefix(v, n, x, &mut tr)?;
    }
    to_f2(v, n, &mut tr, x.is_some(), last_f2);
    let mut p = 2;
    while p < top {
        block(v, n, p, &mut tr);
        p += 2;
    }
    Ok(tr)
}

enum Kind {
    Plain,
    Alpha,
}

/// Joins a front half and a reversed back half and converts the abstract
/// labels. In the back half β and γ are exchanged.
fn assemble(
    ctx: &ChainContext,
    construction: String,
    front: Trail,
    back: Trail,
    kinds: (Kind, Kind),
    claim: Vec<Factor>,
) -> Result<WitnessChain> {
    let mid = front.last().val;
    if back.last().val != mid {
        return Err(Error::StepValidationFailed {
            step: front.steps.len(),
            expected: "the mirrored half to end at the middle element".into(),
            detail: format!(
                "front half ends at {} = {}, mirrored half at {} = {}; compare the symmetric construction with the displayed half",
                front.last().text,
                mid,
                back.last().text,
                back.last().val
            ),
        });
    }
    let to_label = |l: Label, swap: bool, last_kind: &Kind, is_last: bool| -> Label {
        let l = if swap { l.swapped() } else { l };
        match (l, is_last, last_kind) {
            (Label::Equal, ..) => Label::Equal,
            (l, true, Kind::Plain) => l,
            (Label::Beta, ..) => Label::AlphaBeta,
            _ => Label::AlphaGamma,
        }
    };
    let mut exprs: Vec<String> = front.points.iter().map(|p| p.text.clone()).collect();
    let mut vals: Vec<Elem> = front.points.iter().map(|p| p.val).collect();
    let mut labels: Vec<(Label, String)> = Vec::new();
    let nf = front.steps.len();
    for (i, (l, why)) in front.steps.into_iter().enumerate() {
        labels.push((to_label(l, false, &kinds.0, i + 1 == nf), why));
    }
    let nb = back.steps.len();
    for (i, (l, why)) in back.steps.into_iter().enumerate().rev() {
        labels.push((to_label(l, true, &kinds.1, i + 1 == nb), why));
    }
    for p in back.points.into_iter().rev().skip(1) {
        exprs.push(p.text);
        vals.push(p.val);
    }

    let mut steps = Vec::with_capacity(labels.len());
    for (i, (label, why)) in labels.into_iter().enumerate() {
        let (from, to) = (vals[i], vals[i + 1]);
        if !ctx.holds(label, from, to) {
            return Err(Error::StepValidationFailed {
                step: i,
                expected: label.to_string(),
                detail: format!("{} = {from} and {} = {to}", exprs[i], exprs[i + 1]),
            });
        }
        let label = if from == to { Label::Equal } else { label };
        steps.push(LabeledStep { from, to, label, justification: why });
    }
    let chain = WitnessChain {
        construction,
        start: vals[0],
        exprs,
        steps,
        claim,
    };
    if !super::embeds(&chain.factors(), &chain.claim) {
        return Err(Error::StepValidationFailed {
            step: chain.steps.len().saturating_sub(1),
            expected: chain.claim.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" ∘ "),
            detail: format!(
                "collapsed chain is {}",
                chain.factors().iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" ∘ ")
            ),
        });
    }
    Ok(chain)
}

fn five(ctx: &ChainContext) -> Result<[Elem; 5]> {
    <[Elem; 5]>::try_from(ctx.b.as_slice())
        .map_err(|_| Error::Premise(format!("expected a β b γ c β d γ e, got {} elements", ctx.b.len())))
}

fn flavor_error(sys: &JonssonSystem, want: &str) -> Error {
    Error::Premise(format!("construction needs a {want} system, got {}", sys.flavor()))
}

/// Chain for `(a,e) ∈ αβ∘αγ∘⋯∘αγ` (8 factors) from `a β b γ c β d γ e`, `a α e`,
/// using a `Jonsson(4)` system.
pub fn thm22_chain(ctx: &ChainContext, sys: &JonssonSystem) -> Result<WitnessChain> {
    if sys.flavor() != SystemFlavor::Jonsson(4) {
        return Err(flavor_error(sys, "jonsson(4)"));
    }
    let mut chain = thm43_chain(ctx, sys)?;
    chain.construction = "thm22".into();
    Ok(chain)
}

/// Defective variant: from `a β b γ c β d γ e` with `a α c` and `c α e`,
/// a chain in `αβ∘αγ∘αβ∘α(γ∘β)∘αγ∘αβ∘αγ`.
pub fn thm23_chain(ctx: &ChainContext, sys: &JonssonSystem) -> Result<WitnessChain> {
    if !matches!(sys.flavor(), SystemFlavor::Defective4 | SystemFlavor::Jonsson(4)) {
        return Err(flavor_error(sys, "defective4"));
    }
    let v5 = five(ctx)?;
    if !ctx.alpha.related(v5[0], v5[2]) || !ctx.alpha.related(v5[2], v5[4]) {
        return Err(Error::Premise("a α c and c α e are required".into()));
    }
    let compiled = sys.compile(ctx.alg)?;
    let fwd = View { sys: &compiled, mirror: None };
    let rev = View { sys: &compiled, mirror: Some(4) };
    let f = front(&fwd, &Names::new(v5, false), None, 2, Label::Gamma)?;
    let b = front(&rev, &Names::new(v5, true), None, 2, Label::Gamma)?;
    let gb = Factor::AlphaOf(vec![Label::Gamma, Label::Beta]);
    let claim = vec![
        Factor::AlphaBeta,
        Factor::AlphaGamma,
        Factor::AlphaBeta,
        gb,
        Factor::AlphaGamma,
        Factor::AlphaBeta,
        Factor::AlphaGamma,
    ];
    assemble(ctx, "thm23".into(), f, b, (Kind::Plain, Kind::Plain), claim)
}

/// Extension of the F-chain along a `Jonsson(n)` system, `n` even ≥ 4:
/// `3n − 4` factors starting with `αβ`.
pub fn thm43_chain(ctx: &ChainContext, sys: &JonssonSystem) -> Result<WitnessChain> {
    let n = match sys.flavor() {
        SystemFlavor::Jonsson(n) if n >= 4 && n % 2 == 0 => n,
        _ => return Err(flavor_error(sys, "jonsson(n), n even ≥ 4")),
    };
    let v5 = five(ctx)?;
    let compiled = sys.compile(ctx.alg)?;
    let fwd = View { sys: &compiled, mirror: None };
    let rev = View { sys: &compiled, mirror: Some(n) };
    let f = front(&fwd, &Names::new(v5, false), None, n - 2, Label::Gamma)?;
    let b = front(&rev, &Names::new(v5, true), None, 2, Label::Gamma)?;
    let claim = Factor::alternating(Label::AlphaBeta, 3 * n - 4);
    assemble(ctx, format!("thm43(n={n})"), f, b, (Kind::Alpha, Kind::Alpha), claim)
}

/// How to obtain the auxiliary element of the alvin prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XChoice {
    Given(Elem),
    Search,
}

/// First `X` in universe order with `from ρ X σ to`.
pub fn find_x(
    ctx: &ChainContext,
    from: Elem,
    first: Label,
    second: Label,
    to: Elem,
) -> Option<Elem> {
    ctx.alg.universe().find(|&x| ctx.holds(first, from, x) && ctx.holds(second, x, to))
}

fn resolve_x(
    ctx: &ChainContext,
    choice: XChoice,
    from: Elem,
    labels: (Label, Label),
    to: Elem,
    what: &str,
) -> Result<Elem> {
    match choice {
        XChoice::Given(x) => {
            if x >= ctx.alg.size() || !ctx.holds(labels.0, from, x) || !ctx.holds(labels.1, x, to) {
                return Err(Error::NoSuchX(format!(
                    "given {what} = {x} does not satisfy {from} {} {what} {} {to}",
                    labels.0, labels.1
                )));
            }
            Ok(x)
        }
        XChoice::Search => find_x(ctx, from, labels.0, labels.1, to).ok_or_else(|| {
            Error::NoSuchX(format!("no {what} with {from} {} {what} {} {to}", labels.0, labels.1))
        }),
    }
}

/// Chain along an `Alvin(n+2)` system (terms `t_0..t_n`, `n` even ≥ 4):
/// `3n − 2` factors starting with `αγ` and ending with `αβ`. The front prefix
/// needs `a αγ X αβ t_0(a,a,e)`; the reversed prefix needs the mirrored
/// element `e αβ X' αγ t_n(a,e,e)`.
pub fn thm44_chain(ctx: &ChainContext, sys: &JonssonSystem, x: XChoice, x_back: XChoice) -> Result<WitnessChain> {
    let n = match sys.flavor() {
        SystemFlavor::Alvin(m) if m >= 6 && m % 2 == 0 => m - 2,
        _ => return Err(flavor_error(sys, "alvin(n+2), n even ≥ 4")),
    };
    let v5 = five(ctx)?;
    let (a, e) = (v5[0], v5[4]);
    let compiled = sys.compile(ctx.alg)?;
    let t0 = compiled.t(0, a, a, e);
    let tn = compiled.t(n, a, e, e);
    let xf = resolve_x(ctx, x, a, (Label::AlphaGamma, Label::AlphaBeta), t0, "X")?;
    let xb = resolve_x(ctx, x_back, e, (Label::AlphaBeta, Label::AlphaGamma), tn, "X'")?;
    let fwd = View { sys: &compiled, mirror: None };
    let rev = View { sys: &compiled, mirror: Some(n) };
    let f = front(&fwd, &Names::new(v5, false), Some(&Ex::var("X", xf)), n - 2, Label::Gamma)?;
    let b = front(&rev, &Names::new(v5, true), Some(&Ex::var("X'", xb)), 2, Label::Gamma)?;
    let claim = Factor::alternating(Label::AlphaGamma, 3 * n - 2);
    assemble(ctx, format!("thm44(n={n})"), f, b, (Kind::Alpha, Kind::Alpha), claim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::maltsev::{alvin_from_majority, extend_system, find_terms, pad_to_four};
    use crate::relations::{all_congruences, BinRel, Congruence};
    use crate::FiniteAlgebra;

    const CAP: usize = crate::algebra::DEFAULT_CLOSURE_CAP;

    fn prod() -> (FiniteAlgebra, Congruence, Congruence) {
        let g = catalog::generate("lattice-prod:2x2").unwrap();
        let p1 = Congruence::from_blocks(&g.named[0].1);
        let p2 = Congruence::from_blocks(&g.named[1].1);
        (g.algebra, p1, p2)
    }

    fn padded(alg: &FiniteAlgebra, n: usize) -> JonssonSystem {
        let maj = find_terms(alg, SystemFlavor::Jonsson(2), CAP).unwrap();
        extend_system(alg, &pad_to_four(alg, &maj).unwrap(), n).unwrap()
    }

    /// Every `a β b γ c β d γ e` chain.
    fn five_chains(size: usize, beta: &Congruence, gamma: &Congruence) -> Vec<[Elem; 5]> {
        let mut out = Vec::new();
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    for d in 0..size {
                        for e in 0..size {
                            if beta.related(a, b) && gamma.related(b, c) && beta.related(c, d) && gamma.related(d, e) {
                                out.push([a, b, c, d, e]);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn ctx<'a>(alg: &'a FiniteAlgebra, al: &Congruence, be: &Congruence, ga: &Congruence, v: [Elem; 5]) -> ChainContext<'a> {
        ChainContext::new(alg, al.clone(), be.clone(), ga.clone(), v.to_vec()).unwrap()
    }

    #[test]
    fn degenerate_chain_is_all_equal() {
        let (alg, p1, p2) = prod();
        let sys = padded(&alg, 4);
        let c = ctx(&alg, &Congruence::nabla(4), &p1, &p2, [3; 5]);
        let chain = thm22_chain(&c, &sys).unwrap();
        assert!(chain.steps.iter().all(|s| s.label == Label::Equal && s.from == 3));
        assert_eq!(chain.factor_count(), 0);
    }

    #[test]
    fn thm22_on_product_lattice() {
        let (alg, p1, p2) = prod();
        let sys = padded(&alg, 4);
        let top = Congruence::nabla(4);
        let mut seen = 0;
        for v in five_chains(4, &p1, &p2) {
            let chain = thm22_chain(&ctx(&alg, &top, &p1, &p2, v), &sys).unwrap();
            assert_eq!((chain.start, chain.end()), (v[0], v[4]));
            assert!(chain.factor_count() <= 8);
            seen += 1;
        }
        assert_eq!(seen, 4 * 2 * 2 * 2 * 2);
    }

    #[test]
    fn gamma_delta_collapses() {
        let (alg, p1, _) = prod();
        let sys = padded(&alg, 4);
        let delta = Congruence::delta(4);
        for v in five_chains(4, &p1, &delta) {
            let chain = thm22_chain(&ctx(&alg, &Congruence::nabla(4), &p1, &delta, v), &sys).unwrap();
            assert!(chain.factor_count() <= 1);
            assert!(chain.steps.iter().all(|s| matches!(s.label, Label::Equal | Label::AlphaBeta)));
        }
    }

    #[test]
    fn thm22_on_every_triple_of_the_three_chain() {
        let alg = catalog::lattice_chain(3);
        let sys = padded(&alg, 4);
        let cons = all_congruences(&alg).unwrap();
        for al in &cons {
            for be in &cons {
                for ga in &cons {
                    for v in five_chains(3, be, ga) {
                        if !al.related(v[0], v[4]) {
                            continue;
                        }
                        let chain = thm22_chain(&ctx(&alg, al, be, ga, v), &sys).unwrap();
                        let factors = chain.factors();
                        let k = match factors.first() {
                            None => 1,
                            Some(Factor::AlphaBeta) => factors.len(),
                            Some(_) => factors.len() + 1,
                        };
                        assert!(k <= 8);
                        let ab = al.relation().intersect(be.relation()).unwrap();
                        let ag = al.relation().intersect(ga.relation()).unwrap();
                        assert!(BinRel::alt_compose(&ab, &ag, k).unwrap().contains(v[0], v[4]));
                    }
                }
            }
        }
    }

    #[test]
    fn thm43_at_four_matches_thm22() {
        let (alg, p1, p2) = prod();
        let sys = padded(&alg, 4);
        for v in five_chains(4, &p1, &p2) {
            let c = ctx(&alg, &Congruence::nabla(4), &p1, &p2, v);
            let a = thm22_chain(&c, &sys).unwrap();
            let b = thm43_chain(&c, &sys).unwrap();
            assert_eq!(a.steps, b.steps);
        }
    }

    #[test]
    fn thm43_at_six_and_eight() {
        let (alg, p1, p2) = prod();
        for n in [6, 8] {
            let sys = padded(&alg, n);
            for v in five_chains(4, &p1, &p2) {
                let chain = thm43_chain(&ctx(&alg, &Congruence::nabla(4), &p1, &p2, v), &sys).unwrap();
                assert!(chain.factor_count() <= 3 * n - 4);
                assert_eq!(chain.end(), v[4]);
            }
        }
    }

    #[test]
    fn thm44_with_majority_head() {
        let (alg, p1, p2) = prod();
        let maj = find_terms(&alg, SystemFlavor::Jonsson(2), CAP).unwrap();
        for n in [4, 6] {
            let sys = alvin_from_majority(&alg, &maj, n + 2).unwrap();
            for v in five_chains(4, &p1, &p2) {
                let c = ctx(&alg, &Congruence::nabla(4), &p1, &p2, v);
                let chain = thm44_chain(&c, &sys, XChoice::Given(v[0]), XChoice::Search).unwrap();
                assert!(chain.factor_count() <= 3 * n - 2);
                assert_eq!((chain.start, chain.end()), (v[0], v[4]));
                if chain.factor_count() == 3 * n - 2 {
                    assert_eq!(chain.factors()[0], Factor::AlphaGamma);
                }
            }
        }
    }

    #[test]
    fn thm44_rejects_bad_x() {
        let (alg, p1, p2) = prod();
        let maj = find_terms(&alg, SystemFlavor::Jonsson(2), CAP).unwrap();
        let sys = alvin_from_majority(&alg, &maj, 6).unwrap();
        // a = 0, e = 3 through 0 β 1 γ 3 β 3 γ 3; X = 2 is not γ-related to 0
        let c = ctx(&alg, &Congruence::nabla(4), &p1, &p2, [0, 1, 3, 3, 3]);
        assert!(matches!(
            thm44_chain(&c, &sys, XChoice::Given(2), XChoice::Search),
            Err(Error::NoSuchX(_))
        ));
    }

    #[test]
    fn defective_chain_on_klein_group() {
        let g = catalog::generate("klein4").unwrap();
        let alg = g.algebra;
        let sys = find_terms(&alg, SystemFlavor::Defective4, CAP).unwrap();
        let cons = all_congruences(&alg).unwrap();
        let mut built = 0;
        for al in &cons {
            for be in &cons {
                for ga in &cons {
                    for v in five_chains(4, be, ga) {
                        if !al.related(v[0], v[2]) || !al.related(v[2], v[4]) {
                            continue;
                        }
                        let chain = thm23_chain(&ctx(&alg, al, be, ga, v), &sys).unwrap();
                        assert!(chain.factor_count() <= 7);
                        built += 1;
                    }
                }
            }
        }
        assert!(built > 0);
    }

    #[test]
    fn premise_errors() {
        let (alg, p1, p2) = prod();
        let sys = padded(&alg, 4);
        assert!(matches!(
            ChainContext::new(&alg, Congruence::nabla(4), p1.clone(), p2.clone(), vec![0, 3]),
            Err(Error::Premise(_))
        ));
        let c = ctx(&alg, &Congruence::nabla(4), &p1, &p2, [0, 1, 3, 3, 3]);
        assert!(matches!(thm44_chain(&c, &sys, XChoice::Search, XChoice::Search), Err(Error::Premise(_))));
    }
}
