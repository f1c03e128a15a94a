//! Built-in algebras, addressable by short generator specs such as
//! `lattice-chain:3` or `lattice-prod:2x2`.

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};

/// A generated algebra plus named congruences (as block vectors) that make
/// sense for it, e.g. the projection kernels of a product.
#[derive(Clone, Debug)]
pub struct Generated {
    pub algebra: FiniteAlgebra,
    pub named: Vec<(String, Vec<usize>)>,
}

fn lattice_ops(size: usize, meet: impl Fn(Elem, Elem) -> Elem, join: impl Fn(Elem, Elem) -> Elem) -> Vec<(&'static str, usize, Vec<Elem>)> {
    vec![
        ("meet", 2, FiniteAlgebra::table_from_fn(size, 2, |a| meet(a[0], a[1]))),
        ("join", 2, FiniteAlgebra::table_from_fn(size, 2, |a| join(a[0], a[1]))),
    ]
}

/// The chain `0 < 1 < … < n−1` with `meet = min`, `join = max`.
pub fn lattice_chain(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::new(format!("lattice-chain:{n}"), n, lattice_ops(n, Elem::min, Elem::max))
        .expect("chain lattice is well formed")
}

/// Product of an `a`-chain and a `b`-chain; `(i, j)` is encoded as `i·b + j`.
pub fn lattice_prod(a: usize, b: usize) -> FiniteAlgebra {
    let split = move |v: Elem| (v / b, v % b);
    let meet = move |u, v| {
        let ((i, j), (k, l)) = (split(u), split(v));
        i.min(k) * b + j.min(l)
    };
    let join = move |u, v| {
        let ((i, j), (k, l)) = (split(u), split(v));
        i.max(k) * b + j.max(l)
    };
    FiniteAlgebra::new(format!("lattice-prod:{a}x{b}"), a * b, lattice_ops(a * b, meet, join))
        .expect("product lattice is well formed")
}

/// `{0,1}` with the ternary majority operation.
pub fn majority2() -> FiniteAlgebra {
    let maj = FiniteAlgebra::table_from_fn(2, 3, |a| usize::from(a[0] + a[1] + a[2] >= 2));
    FiniteAlgebra::new("majority2", 2, [("maj", 3, maj)]).expect("well formed")
}

/// `d(x,y,z) = x` if `x = y`, else `z`.
pub fn dual_discriminator(n: usize) -> FiniteAlgebra {
    let d = FiniteAlgebra::table_from_fn(n, 3, |a| if a[0] == a[1] { a[0] } else { a[2] });
    FiniteAlgebra::new(format!("dualdisc{n}"), n, [("d", 3, d)]).expect("well formed")
}

/// The cyclic group `Z_n` as `({0..n−1}, +)`.
pub fn zmod(n: usize) -> FiniteAlgebra {
    let add = FiniteAlgebra::table_from_fn(n, 2, |a| (a[0] + a[1]) % n);
    FiniteAlgebra::new(format!("zmod:{n}"), n, [("add", 2, add)]).expect("well formed")
}

/// `Z_2 × Z_2` under `+`; its congruence lattice is the non-distributive `M_3`.
pub fn klein4() -> FiniteAlgebra {
    let add = FiniteAlgebra::table_from_fn(4, 2, |a| a[0] ^ a[1]);
    FiniteAlgebra::new("klein4", 4, [("add", 2, add)]).expect("well formed")
}

/// One element, no operations.
pub fn trivial() -> FiniteAlgebra {
    FiniteAlgebra::new::<&str>("trivial:1", 1, []).expect("well formed")
}

fn parse_usize(spec: &str, text: &str) -> Result<usize> {
    match text.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::UnknownGenerator(spec.to_string())),
    }
}

/// Resolves a generator spec. Recognized: `lattice-chain:n`, `lattice-prod:axb`,
/// `majority2`, `dualdisc3` (or `dualdisc:n`), `z2`, `zmod:n`, `klein4`, `trivial:1`.
pub fn generate(spec: &str) -> Result<Generated> {
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    let mut named = Vec::new();
    let algebra = match (head, arg) {
        ("lattice-chain", Some(n)) => lattice_chain(parse_usize(spec, n)?),
        ("lattice-prod", Some(dims)) => {
            let (a, b) = dims
                .split_once('x')
                .ok_or_else(|| Error::UnknownGenerator(spec.to_string()))?;
            let (a, b) = (parse_usize(spec, a)?, parse_usize(spec, b)?);
            named.push(("proj1".to_string(), (0..a * b).map(|v| v / b).collect()));
            named.push(("proj2".to_string(), (0..a * b).map(|v| v % b).collect()));
            lattice_prod(a, b)
        }
        ("majority2", None) => majority2(),
        ("dualdisc3", None) => dual_discriminator(3),
        ("dualdisc", Some(n)) => dual_discriminator(parse_usize(spec, n)?),
        ("z2", None) => zmod(2),
        ("zmod", Some(n)) => zmod(parse_usize(spec, n)?),
        ("klein4", None) => {
            named.push(("proj1".to_string(), vec![0, 0, 1, 1]));
            named.push(("proj2".to_string(), vec![0, 1, 0, 1]));
            klein4()
        }
        ("trivial", None) | ("trivial", Some("1")) => trivial(),
        _ => return Err(Error::UnknownGenerator(spec.to_string())),
    };
    Ok(Generated { algebra, named })
}

/// The small algebras every test and catalog scan iterates over.
pub fn standard_catalog() -> Vec<FiniteAlgebra> {
    vec![
        trivial(),
        lattice_chain(2),
        lattice_chain(3),
        lattice_prod(2, 2),
        majority2(),
        dual_discriminator(3),
        zmod(2),
        klein4(),
    ]
}
