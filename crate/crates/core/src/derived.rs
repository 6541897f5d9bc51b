//! Monoids whose elements are themselves one-variable relations.
//!
//! Relation addition turns the one-variable relations over a carrier into a
//! monoid of order `2^(order^2)`. Submonoids of it (for example a few
//! functions closed under pointwise addition) serve as carriers for operator
//! equations.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::monoid::Monoid;
use crate::ops::add;
use crate::relation::Relation;

/// Largest base order for which the derived system is built.
pub const MAX_DERIVED_BASE_ORDER: usize = 3;

/// Associativity samples used when the derived table is too large to check
/// exhaustively.
const ASSOCIATIVITY_SAMPLES: usize = 200_000;

#[derive(Clone, Debug)]
pub struct DerivedSystem {
    pub monoid: Monoid,
    /// `elements[i]` is the relation labelled `i`; `elements[0]` is the
    /// constant-`{0}` relation.
    pub elements: Vec<Relation>,
    index: HashMap<Relation, usize>,
}

impl DerivedSystem {
    pub fn index_of(&self, r: &Relation) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn element(&self, i: usize) -> &Relation {
        &self.elements[i]
    }
}

/// All one-variable relations over `m`'s carrier under relation addition.
///
/// Elements are labelled by their bit pattern, except that the identity
/// (constant `{0}`) and the empty relation trade places so that the identity
/// is element 0.
pub fn derived_operator_system(m: &Monoid) -> Result<DerivedSystem> {
    let order = m.order();
    if order > MAX_DERIVED_BASE_ORDER {
        return Err(Error::CarrierTooLarge { order, limit: MAX_DERIVED_BASE_ORDER });
    }
    let mut elements: Vec<Relation> = Relation::enumerate(1, order)?.collect();
    let identity = Relation::zero(1, order)?;
    let id_pos = elements
        .iter()
        .position(|r| *r == identity)
        .expect("enumeration covers every relation");
    elements.swap(0, id_pos);
    let index: HashMap<Relation, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), i))
        .collect();

    let n = elements.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &elements {
        for b in &elements {
            let s = add(a, b, m)?;
            table.push(index[&s] as u32);
        }
    }
    let monoid = Monoid::from_flat(n, table);
    monoid.verify_identity()?;
    monoid.verify_commutative()?;
    if n <= 64 {
        monoid.verify_associative_exhaustive()?;
    } else {
        monoid.verify_associative_sampled(ASSOCIATIVITY_SAMPLES, 0x0bad_cafe)?;
    }
    Ok(DerivedSystem { monoid, elements, index })
}

#[derive(Clone, Debug)]
pub struct Submonoid {
    /// Induced table, relabelled so the identity is element 0.
    pub monoid: Monoid,
    /// `embedding[i]` is the parent element labelled `i` in the submonoid.
    pub embedding: Vec<usize>,
}

/// Checks that `elements` contains the identity and is closed under the
/// parent's addition, and returns the induced monoid.
pub fn submonoid_closure(m: &Monoid, elements: &[usize]) -> Result<Submonoid> {
    for &e in elements {
        if e >= m.order() {
            return Err(Error::OutOfRange { value: e, order: m.order() });
        }
    }
    let mut embedding: Vec<usize> = Vec::with_capacity(elements.len());
    for &e in elements {
        if !embedding.contains(&e) {
            embedding.push(e);
        }
    }
    let id = embedding.iter().position(|&e| e == 0).ok_or(Error::MissingIdentity)?;
    let zero = embedding.remove(id);
    embedding.insert(0, zero);

    let label: HashMap<usize, usize> = embedding.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let k = embedding.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &embedding {
        for &b in &embedding {
            let s = m.add(a, b);
            let l = label.get(&s).ok_or(Error::NotClosed { a, b, sum: s })?;
            table.push(*l as u32);
        }
    }
    Ok(Submonoid { monoid: Monoid::from_flat(k, table), embedding })
}

/// All isomorphisms `phi` from `a` to `b` (as label maps with `phi[0] = 0`).
pub fn isomorphisms(a: &Monoid, b: &Monoid) -> Vec<Vec<usize>> {
    if a.order() != b.order() || a.order() > 8 {
        return Vec::new();
    }
    let n = a.order();
    let rest: Vec<usize> = (1..n).collect();
    crate::ops::permutations(&rest)
        .into_iter()
        .map(|tail| {
            let mut phi = vec![0];
            phi.extend(tail);
            phi
        })
        .filter(|phi| {
            (0..n).all(|x| (0..n).all(|y| phi[a.add(x, y)] == b.add(phi[x], phi[y])))
        })
        .collect()
}
