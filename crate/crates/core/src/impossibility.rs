//! Exhaustive search showing that a two-variable singular relation over a
//! two-element carrier has no short superposition representation.
//!
//! Candidate terms are `f[g1(x1) + g2(x2)]` for all unary `f, g1, g2` (16
//! each at order 2). Sums of up to `max_terms` such terms are explored as
//! iterated sumsets of the achievable tables.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::SuperpositionExpr;
use crate::monoid::Monoid;
use crate::ops::add;
use crate::relation::Relation;
use crate::valueset::ValueSet;

/// Carrier order handled by the exhaustive search.
pub const SEARCH_ORDER: usize = 2;

#[derive(Clone, Debug)]
pub struct ImpossibilityReport {
    pub target: Relation,
    /// Number of `(f, g1, g2)` triples examined.
    pub candidates: usize,
    /// Triples whose single term equals the target.
    pub single_term_matches: usize,
    /// First matching single term, if any.
    pub witness: Option<SuperpositionExpr>,
    /// Distinct tables reachable with exactly `L` terms, for `L = 1..=max_terms`.
    pub achievable: Vec<usize>,
    /// Smallest term count reaching the target, if within `max_terms`.
    pub representable_at: Option<usize>,
}

impl ImpossibilityReport {
    pub fn impossible(&self) -> bool {
        self.representable_at.is_none()
    }
}

impl fmt::Display for ImpossibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "candidates: {}", self.candidates)?;
        writeln!(f, "single-term matches: {}", self.single_term_matches)?;
        for (i, n) in self.achievable.iter().enumerate() {
            writeln!(f, "distinct tables with {} term(s): {n}", i + 1)?;
        }
        match self.representable_at {
            Some(l) => write!(f, "representable with {l} term(s)"),
            None => write!(f, "not representable within {} term(s)", self.achievable.len()),
        }
    }
}

/// The singular relation with value `{1}` at `(0, 0)` and `{0}` elsewhere.
pub fn default_target() -> Relation {
    let mut r = Relation::zero(2, SEARCH_ORDER).expect("small relation");
    r.set(&[0, 0], ValueSet::singleton(1));
    r
}

fn single_term(f: &Relation, g1: &Relation, g2: &Relation) -> SuperpositionExpr {
    SuperpositionExpr::Apply(
        f.clone(),
        Box::new(SuperpositionExpr::Sum(vec![
            SuperpositionExpr::Apply(g1.clone(), Box::new(SuperpositionExpr::Var(1))),
            SuperpositionExpr::Apply(g2.clone(), Box::new(SuperpositionExpr::Var(2))),
        ])),
    )
}

pub fn impossibility_search_order2(m: &Monoid, target: &Relation, max_terms: usize) -> Result<ImpossibilityReport> {
    if m.order() != SEARCH_ORDER {
        return Err(Error::OrderMismatch { left: m.order(), right: SEARCH_ORDER });
    }
    if target.order() != SEARCH_ORDER {
        return Err(Error::OrderMismatch { left: target.order(), right: SEARCH_ORDER });
    }
    if target.arity() != 2 {
        return Err(Error::UnsupportedArity(target.arity()));
    }
    let unary: Vec<Relation> = Relation::enumerate(1, SEARCH_ORDER)?.collect();

    let mut candidates = 0;
    let mut matches = 0;
    let mut witness = None;
    let mut singles = BTreeSet::new();
    for f in &unary {
        for g1 in &unary {
            for g2 in &unary {
                candidates += 1;
                let e = single_term(f, g1, g2);
                let table = e.to_relation(2, m)?;
                if &table == target {
                    matches += 1;
                    witness.get_or_insert(e);
                }
                singles.insert(table.into_cells());
            }
        }
    }

    let singles: Vec<Relation> = singles
        .into_iter()
        .map(|cells| Relation::from_cells(2, SEARCH_ORDER, cells))
        .collect::<Result<_>>()?;
    let mut achievable = Vec::new();
    let mut representable_at = None;
    let mut layer: BTreeSet<Vec<ValueSet>> = BTreeSet::new();
    for l in 1..=max_terms.max(1) {
        layer = if l == 1 {
            singles.iter().map(|r| r.cells().to_vec()).collect()
        } else {
            let mut next = BTreeSet::new();
            for cells in &layer {
                let lhs = Relation::from_cells(2, SEARCH_ORDER, cells.clone())?;
                for rhs in &singles {
                    next.insert(add(&lhs, rhs, m)?.into_cells());
                }
            }
            next
        };
        achievable.push(layer.len());
        if representable_at.is_none() && layer.contains(target.cells()) {
            representable_at = Some(l);
        }
    }

    Ok(ImpossibilityReport {
        target: target.clone(),
        candidates,
        single_term_matches: matches,
        witness,
        achievable,
        representable_at,
    })
}
