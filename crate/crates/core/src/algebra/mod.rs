//! Finite algebras over the universe `0..size`, terms over them, and
//! subuniverse generation in direct powers.

mod closure;
mod term;

pub use closure::{closure, closure_elements, ClosureOptions, Origin, Subpower, DEFAULT_CLOSURE_CAP};
pub use term::{Term, VAR_NAMES};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of a finite universe.
pub type Elem = usize;

pub const MAX_ARITY: usize = 4;

/// Values of the variables `x`, `y`, `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment(pub [Elem; 3]);

impl Assignment {
    pub fn new(x: Elem, y: Elem, z: Elem) -> Self {
        Assignment([x, y, z])
    }

    /// All `size³` assignments in lexicographic order.
    pub fn all(size: usize) -> impl Iterator<Item = Assignment> {
        (0..size).flat_map(move |x| {
            (0..size).flat_map(move |y| (0..size).map(move |z| Assignment([x, y, z])))
        })
    }
}

/// A basic operation given by its full table, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operation {
    symbol: String,
    arity: usize,
    table: Vec<Elem>,
}

impl Operation {
    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    /// Applies the operation. `args.len()` must equal the arity.
    #[inline]
    pub fn apply(&self, size: usize, args: &[Elem]) -> Elem {
        debug_assert_eq!(args.len(), self.arity);
        let idx = args.iter().fold(0, |acc, &a| acc * size + a);
        self.table[idx]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    ops: Vec<Operation>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    name: String,
    size: usize,
    operations: Vec<OperationFile>,
}

#[derive(Serialize, Deserialize)]
struct OperationFile {
    symbol: String,
    arity: usize,
    table: Vec<Elem>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FiniteAlgebra {
    /// Builds an algebra from `(symbol, arity, table)` triples, checking every
    /// table entry, table length, and symbol uniqueness.
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        size: usize,
        ops: impl IntoIterator<Item = (S, usize, Vec<Elem>)>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidAlgebra("size must be positive".into()));
        }
        let mut built: Vec<Operation> = Vec::new();
        for (op_index, (symbol, arity, table)) in ops.into_iter().enumerate() {
            let symbol = symbol.into();
            if !is_identifier(&symbol) || Term::parse_var(&symbol).is_some() {
                return Err(Error::InvalidAlgebra(format!(
                    "operation {op_index}: `{symbol}` is not a valid operation symbol"
                )));
            }
            if built.iter().any(|o| o.symbol == symbol) {
                return Err(Error::InvalidAlgebra(format!(
                    "operation {op_index}: duplicate symbol `{symbol}`"
                )));
            }
            if arity > MAX_ARITY {
                return Err(Error::InvalidAlgebra(format!(
                    "operation {op_index} (`{symbol}`): arity {arity} exceeds {MAX_ARITY}"
                )));
            }
            let expected = size.pow(arity as u32);
            if table.len() != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "operation {op_index} (`{symbol}`): table has length {}, expected {expected}",
                    table.len()
                )));
            }
            if let Some(pos) = table.iter().position(|&v| v >= size) {
                return Err(Error::InvalidAlgebra(format!(
                    "operation {op_index} (`{symbol}`): table[{pos}] = {} is outside 0..{size}",
                    table[pos]
                )));
            }
            built.push(Operation {
                symbol,
                arity,
                table,
            });
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            size,
            ops: built,
        })
    }

    /// Builds an operation table by evaluating `f` on every argument tuple.
    pub fn table_from_fn(size: usize, arity: usize, f: impl Fn(&[Elem]) -> Elem) -> Vec<Elem> {
        let total = size.pow(arity as u32);
        let mut args = vec![0; arity];
        let mut table = Vec::with_capacity(total);
        for mut idx in 0..total {
            for slot in args.iter_mut().rev() {
                *slot = idx % size;
                idx /= size;
            }
            table.push(f(&args));
        }
        table
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn op(&self, symbol: &str) -> Option<&Operation> {
        self.ops.iter().find(|o| o.symbol == symbol)
    }

    pub fn universe(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    /// True iff `f(a,…,a) = a` for every operation and element.
    pub fn is_idempotent(&self) -> bool {
        self.ops.iter().all(|op| {
            (0..self.size).all(|a| {
                let args = vec![a; op.arity];
                op.apply(self.size, &args) == a
            })
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlgebraFile = serde_json::from_str(text)?;
        FiniteAlgebra::new(
            file.name,
            file.size,
            file.operations
                .into_iter()
                .map(|o| (o.symbol, o.arity, o.table)),
        )
    }

    pub fn to_json(&self) -> String {
        let file = AlgebraFile {
            name: self.name.clone(),
            size: self.size,
            operations: self
                .ops
                .iter()
                .map(|o| OperationFile {
                    symbol: o.symbol.clone(),
                    arity: o.arity,
                    table: o.table.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("algebra serializes")
    }

    /// Evaluates `t` under `asg`.
    pub fn eval(&self, t: &Term, asg: Assignment) -> Result<Elem> {
        t.eval(self, &asg.0)
    }

    /// True iff `lhs` and `rhs` agree under all `size³` assignments.
    pub fn check_equation(&self, lhs: &Term, rhs: &Term) -> Result<bool> {
        Ok(self.equation_counterexample(lhs, rhs)?.is_none())
    }

    /// The first assignment (in lexicographic order) where the two sides differ.
    pub fn equation_counterexample(&self, lhs: &Term, rhs: &Term) -> Result<Option<Assignment>> {
        for asg in Assignment::all(self.size) {
            if lhs.eval(self, &asg.0)? != rhs.eval(self, &asg.0)? {
                return Ok(Some(asg));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn rejects_out_of_range_entry_with_index() {
        let err = FiniteAlgebra::new("bad", 2, [("f", 1, vec![0, 2])]).unwrap_err();
        assert!(err.to_string().contains("table[1]"), "{err}");
    }

    #[test]
    fn rejects_wrong_table_length() {
        let err = FiniteAlgebra::new("bad", 2, [("f", 2, vec![0, 1, 1])]).unwrap_err();
        assert!(err.to_string().contains("expected 4"), "{err}");
    }

    #[test]
    fn rejects_duplicate_symbols_and_high_arity() {
        assert!(FiniteAlgebra::new("d", 1, [("f", 0, vec![0]), ("f", 0, vec![0])]).is_err());
        assert!(FiniteAlgebra::new("a", 1, [("f", 5, vec![0])]).is_err());
        assert!(FiniteAlgebra::new("v", 1, [("x", 0, vec![0])]).is_err());
        assert!(FiniteAlgebra::new::<&str>("e", 0, []).is_err());
    }

    #[test]
    fn json_round_trip() {
        let alg = catalog::lattice_prod(2, 3);
        let back = FiniteAlgebra::from_json(&alg.to_json()).unwrap();
        assert_eq!(alg, back);
    }

    #[test]
    fn json_reports_position() {
        let err = FiniteAlgebra::from_json("{\"name\": \"a\",\n \"size\": }").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn idempotence() {
        assert!(catalog::lattice_chain(2).is_idempotent());
        assert!(!catalog::zmod(2).is_idempotent());
        assert!(catalog::dual_discriminator(3).is_idempotent());
    }

    #[test]
    fn equations() {
        let lat = catalog::lattice_chain(2);
        let x = Term::var(0);
        assert!(lat.check_equation(&x, &x).unwrap());
        let maj = Term::parse("join(meet(x,y),join(meet(y,z),meet(x,z)))").unwrap();
        let maj_xyx = maj.substitute(&[Term::var(0), Term::var(1), Term::var(0)]);
        assert!(lat.check_equation(&maj_xyx, &x).unwrap());

        let z2 = catalog::zmod(2);
        let sum = Term::parse("add(x,y)").unwrap();
        assert_eq!(
            z2.equation_counterexample(&sum, &x).unwrap(),
            Some(Assignment::new(0, 1, 0))
        );
    }
}
