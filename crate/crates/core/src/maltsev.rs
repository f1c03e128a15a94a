//! Jónsson, alvin and defective 4-Jónsson term systems: equation schedules,
//! exhaustive verification, and search by closing the three projections in
//! the indicator power `A^I`.
//!
//! Indexing follows the usual presentation with the trivial end projections
//! left out. A `Jonsson(n)` system has terms `t_1..t_{n−1}`:
//!
//! ```text
//! x = t_i(x,y,x)              every i
//! x = t_1(x,x,z)
//! t_i(x,z,z) = t_{i+1}(x,z,z)  i odd
//! t_i(x,x,z) = t_{i+1}(x,x,z)  i even
//! t_{n−1}(x,z,z) = z  (n even)     t_{n−1}(x,x,z) = z  (n odd)
//! ```
//!
//! An `Alvin(n)` system has terms `t_0..t_{n−2}` with `x = t_0(x,y,y)` in place
//! of `x = t_1(x,x,z)` and `t_0(x,x,z) = t_1(x,x,z)`; the remaining links and
//! the tail follow the same parity rule. `Defective4` is `Jonsson(4)` without
//! `x = t_2(x,y,x)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Assignment, ClosureOptions, Elem, FiniteAlgebra, Subpower, Term};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemFlavor {
    Jonsson(usize),
    Alvin(usize),
    Defective4,
}

/// Argument pattern of a ternary term: which variable sits in each slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    /// `(x, y, x)`
    Xyx,
    /// `(x, x, z)`
    Xxz,
    /// `(x, z, z)`
    Xzz,
    /// `(x, y, y)`, same coordinates as `Xzz`
    Xyy,
}

impl Shape {
    fn vars(self) -> [usize; 3] {
        match self {
            Shape::Xyx => [0, 1, 0],
            Shape::Xxz => [0, 0, 2],
            Shape::Xzz => [0, 2, 2],
            Shape::Xyy => [0, 1, 1],
        }
    }

    fn link(index: usize) -> Shape {
        if index % 2 == 1 {
            Shape::Xzz
        } else {
            Shape::Xxz
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Var(usize),
    Term(usize, Shape),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Side,
    pub rhs: Side,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Side::Var(v) => f.write_str(crate::algebra::VAR_NAMES[v]),
            Side::Term(i, shape) => {
                let [a, b, c] = shape.vars().map(|v| crate::algebra::VAR_NAMES[v]);
                write!(f, "t_{i}({a},{b},{c})")
            }
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl SystemFlavor {
    pub fn n(self) -> usize {
        match self {
            SystemFlavor::Jonsson(n) | SystemFlavor::Alvin(n) => n,
            SystemFlavor::Defective4 => 4,
        }
    }

    pub fn first_index(self) -> usize {
        match self {
            SystemFlavor::Alvin(_) => 0,
            _ => 1,
        }
    }

    pub fn last_index(self) -> usize {
        match self {
            SystemFlavor::Jonsson(n) => n - 1,
            SystemFlavor::Alvin(n) => n - 2,
            SystemFlavor::Defective4 => 3,
        }
    }

    pub fn term_count(self) -> usize {
        self.last_index() + 1 - self.first_index()
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemFlavor::Jonsson(_) => "jonsson",
            SystemFlavor::Alvin(_) => "alvin",
            SystemFlavor::Defective4 => "defective4",
        }
    }

    pub fn from_name(name: &str, n: usize) -> Result<Self> {
        let flavor = match name {
            "jonsson" => SystemFlavor::Jonsson(n),
            "alvin" => SystemFlavor::Alvin(n),
            "defective4" | "defective" if n == 4 => SystemFlavor::Defective4,
            _ => return Err(Error::parse(format!("unknown flavor `{name}` with n = {n}"), 1)),
        };
        flavor.check()?;
        Ok(flavor)
    }

    fn check(self) -> Result<()> {
        if self.n() < 2 {
            return Err(Error::parse(format!("{} needs n ≥ 2", self.name()), 1));
        }
        Ok(())
    }

    fn absorbs(self, i: usize) -> bool {
        match self {
            SystemFlavor::Defective4 => i != 2,
            _ => true,
        }
    }

    fn head_shape(self) -> Shape {
        match self {
            SystemFlavor::Alvin(_) => Shape::Xyy,
            _ => Shape::Xxz,
        }
    }

    /// Every defining equation, in a fixed order.
    pub fn equations(self) -> Vec<Equation> {
        let (first, last) = (self.first_index(), self.last_index());
        let mut eqs = Vec::new();
        for i in first..=last {
            if self.absorbs(i) {
                eqs.push(Equation {
                    lhs: Side::Var(0),
                    rhs: Side::Term(i, Shape::Xyx),
                });
            }
        }
        eqs.push(Equation {
            lhs: Side::Var(0),
            rhs: Side::Term(first, self.head_shape()),
        });
        for i in first..last {
            let shape = Shape::link(i);
            eqs.push(Equation {
                lhs: Side::Term(i, shape),
                rhs: Side::Term(i + 1, shape),
            });
        }
        eqs.push(Equation {
            lhs: Side::Term(last, Shape::link(last)),
            rhs: Side::Var(2),
        });
        eqs
    }
}

impl fmt::Display for SystemFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemFlavor::Defective4 => f.write_str("defective4"),
            other => write!(f, "{}({})", other.name(), other.n()),
        }
    }
}

/// A chain of ternary terms of one flavor. Constructors that search or pad
/// verify the system against the algebra before returning it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JonssonSystem {
    flavor: SystemFlavor,
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    flavor: String,
    n: usize,
    terms: Vec<String>,
}

impl JonssonSystem {
    /// Wraps `terms` without checking any equation.
    pub fn new_unchecked(flavor: SystemFlavor, terms: Vec<Term>) -> Result<Self> {
        flavor.check()?;
        if terms.len() != flavor.term_count() {
            return Err(Error::parse(
                format!("{flavor} needs {} terms, got {}", flavor.term_count(), terms.len()),
                1,
            ));
        }
        Ok(JonssonSystem { flavor, terms })
    }

    /// Wraps `terms` and verifies every equation on `alg`.
    pub fn new(alg: &FiniteAlgebra, flavor: SystemFlavor, terms: Vec<Term>) -> Result<Self> {
        let sys = Self::new_unchecked(flavor, terms)?;
        let report = verify_system(alg, &sys);
        if let Some(fail) = report.first_failure() {
            return Err(Error::VerificationFailed(fail.to_string()));
        }
        Ok(sys)
    }

    pub fn flavor(&self) -> SystemFlavor {
        self.flavor
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// `t_i` in the flavor's own indexing.
    pub fn term(&self, i: usize) -> &Term {
        &self.terms[i - self.flavor.first_index()]
    }

    pub fn to_json(&self) -> String {
        let file = SystemFile {
            flavor: self.flavor.name().to_string(),
            n: self.flavor.n(),
            terms: self.terms.iter().map(Term::to_string).collect(),
        };
        serde_json::to_string_pretty(&file).expect("system serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text)?;
        let flavor = SystemFlavor::from_name(&file.flavor, file.n)?;
        let terms = file
            .terms
            .iter()
            .map(|t| Term::parse(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new_unchecked(flavor, terms)
    }

    /// Ternary tables of every term, for fast repeated evaluation.
    pub fn compile(&self, alg: &FiniteAlgebra) -> Result<CompiledSystem> {
        Ok(CompiledSystem {
            size: alg.size(),
            first: self.flavor.first_index(),
            tables: self
                .terms
                .iter()
                .map(|t| t.ternary_table(alg))
                .collect::<Result<_>>()?,
        })
    }
}

/// Term operations of a system as ternary tables, indexed like the system.
#[derive(Clone, Debug)]
pub struct CompiledSystem {
    size: usize,
    first: usize,
    tables: Vec<Vec<Elem>>,
}

impl CompiledSystem {
    pub fn first_index(&self) -> usize {
        self.first
    }

    pub fn last_index(&self) -> usize {
        self.first + self.tables.len() - 1
    }

    #[inline]
    pub fn t(&self, i: usize, x: Elem, y: Elem, z: Elem) -> Elem {
        let s = self.size;
        self.tables[i - self.first][(x * s + y) * s + z]
    }

    /// The reversed system `t'_i(x,y,z) = t_{k−i}(z,y,x)` over the same index range.
    pub fn mirrored(&self, k: usize) -> CompiledSystem {
        let s = self.size;
        let tables = (self.first..=self.last_index())
            .map(|i| {
                let src = &self.tables[k - i - self.first];
                let mut out = vec![0; s * s * s];
                for x in 0..s {
                    for y in 0..s {
                        for z in 0..s {
                            out[(x * s + y) * s + z] = src[(z * s + y) * s + x];
                        }
                    }
                }
                out
            })
            .collect();
        CompiledSystem {
            size: s,
            first: self.first,
            tables,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationCheck {
    pub equation: String,
    pub ok: bool,
    /// First assignment `(x, y, z)` where the sides differ.
    pub counterexample: Option<Assignment>,
    pub error: Option<String>,
}

impl fmt::Display for EquationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.equation)?;
        if let Some(Assignment([x, y, z])) = self.counterexample {
            write!(f, " fails at (x,y,z) = ({x},{y},{z})")?;
        }
        if let Some(e) = &self.error {
            write!(f, " cannot be evaluated: {e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub flavor: String,
    pub checks: Vec<EquationCheck>,
}

impl SystemReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&EquationCheck> {
        self.checks.iter().find(|c| !c.ok)
    }
}

fn side_term(sys: &JonssonSystem, side: Side) -> Term {
    match side {
        Side::Var(v) => Term::Var(v),
        Side::Term(i, shape) => {
            let subst = shape.vars().map(Term::Var);
            sys.term(i).substitute(&subst)
        }
    }
}

/// Checks every defining equation of the system's flavor over all `s³` assignments.
pub fn verify_system(alg: &FiniteAlgebra, sys: &JonssonSystem) -> SystemReport {
    let checks = sys
        .flavor
        .equations()
        .into_iter()
        .map(|eq| {
            let (lhs, rhs) = (side_term(sys, eq.lhs), side_term(sys, eq.rhs));
            match alg.equation_counterexample(&lhs, &rhs) {
                Ok(cx) => EquationCheck {
                    equation: eq.to_string(),
                    ok: cx.is_none(),
                    counterexample: cx,
                    error: None,
                },
                Err(e) => EquationCheck {
                    equation: eq.to_string(),
                    ok: false,
                    counterexample: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    SystemReport {
        flavor: sys.flavor.to_string(),
        checks,
    }
}

/// All argument triples of the shapes `(a,b,a)`, `(a,a,b)`, `(a,b,b)`, sorted.
pub fn indicator_index(size: usize) -> Vec<[Elem; 3]> {
    let mut out = Vec::with_capacity(3 * size * size);
    for a in 0..size {
        for b in 0..size {
            out.push([a, b, a]);
            out.push([a, a, b]);
            out.push([a, b, b]);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Coordinates of the indicator power that each equation shape reads.
struct Indicator {
    triples: Vec<[Elem; 3]>,
    /// For shapes `Xyx`, `Xxz`, `Xzz`: coordinates in `(a, b)` order.
    coords: [Vec<usize>; 3],
    x_target: Vec<Elem>,
    z_target: Vec<Elem>,
}

impl Indicator {
    fn new(size: usize) -> Self {
        let triples = indicator_index(size);
        let pos: HashMap<[Elem; 3], usize> = triples.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let pairs: Vec<(Elem, Elem)> = (0..size).flat_map(|a| (0..size).map(move |b| (a, b))).collect();
        let coords_for = |f: &dyn Fn(Elem, Elem) -> [Elem; 3]| -> Vec<usize> {
            pairs.iter().map(|&(a, b)| pos[&f(a, b)]).collect()
        };
        let coords = [
            coords_for(&|a, b| [a, b, a]),
            coords_for(&|a, b| [a, a, b]),
            coords_for(&|a, b| [a, b, b]),
        ];
        Indicator {
            coords,
            x_target: pairs.iter().map(|p| p.0).collect(),
            z_target: pairs.iter().map(|p| p.1).collect(),
            triples,
        }
    }

    fn projections(&self) -> Vec<Vec<Elem>> {
        (0..3).map(|p| self.triples.iter().map(|t| t[p]).collect()).collect()
    }

    fn key(&self, v: &[Elem], shape: Shape) -> Vec<Elem> {
        let coords = match shape {
            Shape::Xyx => &self.coords[0],
            Shape::Xxz => &self.coords[1],
            Shape::Xzz | Shape::Xyy => &self.coords[2],
        };
        coords.iter().map(|&c| v[c]).collect()
    }
}

/// Layered search over the closed set: layer `i` holds elements usable as
/// `t_i`, each with the first (lowest-index) predecessor it links to.
fn search_chain(sp: &Subpower, ind: &Indicator, flavor: SystemFlavor) -> Option<Vec<usize>> {
    let (first, last) = (flavor.first_index(), flavor.last_index());
    let elems = sp.elements();
    let absorbs: Vec<bool> = elems.iter().map(|v| ind.key(v, Shape::Xyx) == ind.x_target).collect();

    let mut layer: Vec<(usize, usize)> = elems
        .iter()
        .enumerate()
        .filter(|(i, v)| {
            (!flavor.absorbs(first) || absorbs[*i]) && ind.key(v, flavor.head_shape()) == ind.x_target
        })
        .map(|(i, _)| (i, usize::MAX))
        .collect();
    let mut parents: Vec<Vec<(usize, usize)>> = Vec::new();
    for i in first..last {
        if layer.is_empty() {
            return None;
        }
        let shape = Shape::link(i);
        let mut by_key: HashMap<Vec<Elem>, usize> = HashMap::new();
        for &(e, _) in &layer {
            by_key.entry(ind.key(&elems[e], shape)).or_insert(e);
        }
        let next: Vec<(usize, usize)> = elems
            .iter()
            .enumerate()
            .filter(|(w, _)| !flavor.absorbs(i + 1) || absorbs[*w])
            .filter_map(|(w, v)| by_key.get(&ind.key(v, shape)).map(|&p| (w, p)))
            .collect();
        parents.push(std::mem::replace(&mut layer, next));
    }
    let tail = Shape::link(last);
    let &(end, mut parent) = layer.iter().find(|(e, _)| ind.key(&elems[*e], tail) == ind.z_target)?;
    let mut path = vec![end];
    for prev in parents.iter().rev() {
        path.push(parent);
        parent = prev.iter().find(|(e, _)| *e == parent).map(|p| p.1).expect("parent recorded");
    }
    path.reverse();
    Some(path)
}

/// Searches for a system of the given flavor. The closure of the projections
/// grows one round at a time and the chain search runs after every round, so
/// the terms returned are built from the earliest round that admits a chain.
pub fn find_terms(alg: &FiniteAlgebra, flavor: SystemFlavor, cap: usize) -> Result<JonssonSystem> {
    flavor.check()?;
    let ind = Indicator::new(alg.size());
    let mut sp = Subpower::new(ind.projections(), ClosureOptions { cap, track_terms: true })?;
    loop {
        if let Some(path) = search_chain(&sp, &ind, flavor) {
            let terms = path
                .iter()
                .map(|&i| sp.term(alg, i).expect("terms tracked"))
                .collect();
            return JonssonSystem::new(alg, flavor, terms);
        }
        if !sp.grow(alg)? {
            return Err(Error::NotFound(format!(
                "{} has no {flavor} terms ({} term operations on {} indicator coordinates)",
                alg.name(),
                sp.len(),
                sp.dim()
            )));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistributivityLevel {
    Found(usize, JonssonSystem),
    NotFoundUpTo(usize),
}

/// Least `n ≤ n_max` admitting `Jonsson(n)` terms.
pub fn distributivity_level(alg: &FiniteAlgebra, n_max: usize, cap: usize) -> Result<DistributivityLevel> {
    for n in 2..=n_max {
        match find_terms(alg, SystemFlavor::Jonsson(n), cap) {
            Ok(sys) => return Ok(DistributivityLevel::Found(n, sys)),
            Err(Error::NotFound(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(DistributivityLevel::NotFoundUpTo(n_max))
}

fn proj_x() -> Term {
    Term::Var(0)
}

fn proj_z() -> Term {
    Term::Var(2)
}

/// `(m, p_z, p_z)` from a majority term `m`.
pub fn pad_to_four(alg: &FiniteAlgebra, majority: &JonssonSystem) -> Result<JonssonSystem> {
    if majority.flavor != SystemFlavor::Jonsson(2) {
        return Err(Error::VerificationFailed(format!(
            "pad_to_four expects jonsson(2), got {}",
            majority.flavor
        )));
    }
    extend_system(alg, majority, 4)
}

/// Appends third projections until the system has flavor index `target_n`.
/// Each appended `p_z` continues the chain because the previous last term
/// already equals `z` on the linking shape.
pub fn extend_system(alg: &FiniteAlgebra, sys: &JonssonSystem, target_n: usize) -> Result<JonssonSystem> {
    let flavor = match sys.flavor {
        SystemFlavor::Jonsson(n) if target_n >= n => SystemFlavor::Jonsson(target_n),
        SystemFlavor::Alvin(n) if target_n >= n => SystemFlavor::Alvin(target_n),
        other => {
            return Err(Error::VerificationFailed(format!("cannot extend {other} to n = {target_n}")))
        }
    };
    let mut terms = sys.terms.clone();
    terms.resize(flavor.term_count(), proj_z());
    JonssonSystem::new(alg, flavor, terms)
}

/// `Alvin(n)` with head `t_0 = p_x`, `t_1` the majority term, and third
/// projections after it.
pub fn alvin_from_majority(alg: &FiniteAlgebra, majority: &JonssonSystem, n: usize) -> Result<JonssonSystem> {
    if majority.flavor != SystemFlavor::Jonsson(2) || n < 3 {
        return Err(Error::VerificationFailed(format!(
            "alvin_from_majority expects jonsson(2) and n ≥ 3, got {} and n = {n}",
            majority.flavor
        )));
    }
    let mut terms = vec![proj_x(), majority.terms[0].clone()];
    terms.resize(SystemFlavor::Alvin(n).term_count(), proj_z());
    JonssonSystem::new(alg, SystemFlavor::Alvin(n), terms)
}
