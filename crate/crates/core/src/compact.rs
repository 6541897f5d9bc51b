//! Experimental search for two-variable decompositions with fewer terms than
//! the one-term-per-point construction.
//!
//! The location relations are fixed in advance (see [`location_family`]) and
//! the entries of each term's value relation are the unknowns. Every point
//! `(x, y)` yields one constraint: the monoid sum of the value entries that
//! the point selects must equal `R(x, y)`. The constraints are solved by
//! backtracking with a node limit, so a failure only means the bounded search
//! found nothing.

use crate::decompose::{decompose, DecomposeOptions, DecompositionResult, FlatTerm, Method};
use crate::error::{Error, Result};
use crate::expr::SuperpositionExpr;
use crate::monoid::Monoid;
use crate::ops::check_monoid;
use crate::relation::Relation;
use crate::valueset::ValueSet;

/// Default cap on assignments tried by [`compact_decompose_search`].
pub const DEFAULT_NODE_LIMIT: u64 = 5_000_000;

/// Location maps `(x-map, y-map)` of the fixed family, truncated to `terms`.
///
/// For carrier order `n` the full family has `n + 1` terms:
///
/// ```text
/// term 0:      x -> [x == 0]        y -> max(n-2-y, 0)
/// term 1:      x -> max(x-1, 0)     y -> [y == n-1]
/// term 2:      x -> max(n-2-x, 0)   y -> [y == n-1]
/// term 3+k:    x -> n-1-x           y -> [y == k]        (k = 0 .. n-3)
/// ```
///
/// Every term but the first has its value entry at `n-1` pinned to `{0}`.
pub fn location_family(order: usize, terms: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = order;
    let down = |v: usize| if v + 2 <= n { n - 2 - v } else { 0 };
    let up = |v: usize| v.saturating_sub(1);
    let indicator = |k: usize| move |v: usize| usize::from(v == k);
    let tab = |f: &dyn Fn(usize) -> usize| (0..n).map(f).collect::<Vec<_>>();

    let mut family = vec![
        (tab(&indicator(0)), tab(&down)),
        (tab(&up), tab(&indicator(n - 1))),
        (tab(&down), tab(&indicator(n - 1))),
    ];
    for k in 0..n.saturating_sub(2) {
        family.push((tab(&|v| n - 1 - v), tab(&indicator(k))));
    }
    family.truncate(terms);
    family
}

#[derive(Clone, Copy)]
enum Entry {
    Fixed(ValueSet),
    Unknown(usize),
}

struct Constraint {
    entries: Vec<Entry>,
    target: ValueSet,
}

struct Search<'a> {
    m: &'a Monoid,
    constraints: Vec<Constraint>,
    /// Constraints whose last unknown (in search order) is at each depth.
    completes_at: Vec<Vec<usize>>,
    order: Vec<usize>,
    domain: Vec<ValueSet>,
    values: Vec<ValueSet>,
    nodes: u64,
    node_limit: u64,
}

impl Search<'_> {
    fn holds(&self, c: &Constraint) -> bool {
        let mut acc: Option<ValueSet> = None;
        for e in &c.entries {
            let v = match *e {
                Entry::Fixed(v) => v,
                Entry::Unknown(u) => self.values[u],
            };
            acc = Some(match acc {
                None => v,
                Some(a) => self.m.sum_sets(a, v),
            });
        }
        acc.unwrap_or(ValueSet::singleton(0)) == c.target
    }

    fn run(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let u = self.order[depth];
        for k in 0..self.domain.len() {
            self.nodes += 1;
            if self.nodes > self.node_limit {
                return None;
            }
            self.values[u] = self.domain[k];
            let ok = self.completes_at[depth]
                .iter()
                .all(|&c| self.holds(&self.constraints[c]));
            if ok && self.run(depth + 1)? {
                return Some(true);
            }
        }
        Some(false)
    }
}

/// Candidate value sets for an unknown: singletons first, then larger sets,
/// then the empty set. Carriers above order 4 only try singletons, the empty
/// set and value sets that occur in the target.
fn candidate_sets(order: usize, target: &Relation) -> Vec<ValueSet> {
    let mut sets: Vec<ValueSet> = if order <= 4 {
        (1u64..1 << order).map(ValueSet::from_bits).collect()
    } else {
        let mut v: Vec<ValueSet> = (0..order).map(ValueSet::singleton).collect();
        v.extend(target.cells().iter().copied().filter(|c| !c.is_empty()));
        v
    };
    sets.sort_by_key(|s| (s.len(), s.bits()));
    sets.dedup();
    sets.push(ValueSet::EMPTY);
    sets
}

/// Searches for a decomposition of a two-variable relation with at most
/// `budget` terms. With `budget >= order^2` the one-term-per-point
/// construction is returned directly.
pub fn compact_decompose_search(
    r: &Relation,
    m: &Monoid,
    budget: usize,
    node_limit: u64,
) -> Result<DecompositionResult> {
    check_monoid(r, m)?;
    if r.arity() != 2 {
        return Err(Error::UnsupportedArity(r.arity()));
    }
    let n = m.order();
    if budget >= n * n && n >= 3 && m.faithfulness() >= 2 {
        let mut d = decompose(r, m, DecomposeOptions::default())?;
        d.method = Method::Compact;
        return Ok(d);
    }
    let family = location_family(n, budget);
    if family.is_empty() {
        return Err(Error::NoSolutionWithinBudget { budget, nodes: 0 });
    }

    // Unknown ids per (term, slot).
    let mut slots: Vec<Vec<Entry>> = Vec::with_capacity(family.len());
    let mut unknowns = 0;
    for t in 0..family.len() {
        let row = (0..n)
            .map(|s| {
                if t > 0 && s == n - 1 {
                    Entry::Fixed(ValueSet::singleton(0))
                } else {
                    unknowns += 1;
                    Entry::Unknown(unknowns - 1)
                }
            })
            .collect();
        slots.push(row);
    }

    let mut constraints = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let entries = family
                .iter()
                .zip(&slots)
                .map(|((gx, gy), row)| row[m.add(gx[x], gy[y])])
                .collect();
            constraints.push(Constraint { entries, target: r.eval(&[x, y]) });
        }
    }

    let order = search_order(unknowns, &constraints);
    let mut position = vec![usize::MAX; unknowns];
    for (d, &u) in order.iter().enumerate() {
        position[u] = d;
    }
    let mut completes_at = vec![Vec::new(); order.len()];
    let mut always_checked = Vec::new();
    for (ci, c) in constraints.iter().enumerate() {
        let last = c
            .entries
            .iter()
            .filter_map(|e| match e {
                Entry::Unknown(u) => Some(position[*u]),
                Entry::Fixed(_) => None,
            })
            .max();
        match last {
            Some(d) => completes_at[d].push(ci),
            None => always_checked.push(ci),
        }
    }

    let mut search = Search {
        m,
        constraints,
        completes_at,
        order,
        domain: candidate_sets(n, r),
        values: vec![ValueSet::singleton(0); unknowns],
        nodes: 0,
        node_limit,
    };
    let fixed_ok = always_checked.iter().all(|&c| search.holds(&search.constraints[c]));
    let found = fixed_ok && search.run(0) == Some(true);
    if !found {
        return Err(Error::NoSolutionWithinBudget { budget, nodes: search.nodes });
    }

    let terms: Vec<FlatTerm> = family
        .iter()
        .zip(&slots)
        .map(|((gx, gy), row)| {
            let cells = row
                .iter()
                .map(|e| match *e {
                    Entry::Fixed(v) => v,
                    Entry::Unknown(u) => search.values[u],
                })
                .collect();
            Ok(FlatTerm {
                value: Relation::unary(cells)?,
                locations: vec![Relation::function(gx)?, Relation::function(gy)?],
            })
        })
        .collect::<Result<_>>()?;

    let result = DecompositionResult {
        expr: SuperpositionExpr::Sum(terms.iter().map(FlatTerm::to_expr).collect()),
        method: Method::Compact,
        arity: 2,
        term_count: terms.len(),
        location_relations: terms.iter().map(|t| t.locations.clone()).collect(),
        value_relations: terms.into_iter().map(|t| t.value).collect(),
    };
    result.verify(r, m)?;
    Ok(result)
}

/// Greedy variable order: repeatedly take the unknown that completes the most
/// constraints, breaking ties by how many constraints mention it.
fn search_order(unknowns: usize, constraints: &[Constraint]) -> Vec<usize> {
    let mentions: Vec<Vec<usize>> = constraints
        .iter()
        .map(|c| {
            let mut us: Vec<usize> = c
                .entries
                .iter()
                .filter_map(|e| match e {
                    Entry::Unknown(u) => Some(*u),
                    Entry::Fixed(_) => None,
                })
                .collect();
            us.sort_unstable();
            us.dedup();
            us
        })
        .collect();
    let mut assigned = vec![false; unknowns];
    let mut order = Vec::with_capacity(unknowns);
    for _ in 0..unknowns {
        let best = (0..unknowns)
            .filter(|&u| !assigned[u])
            .max_by_key(|&u| {
                let mut completes = 0;
                let mut touches = 0;
                for us in &mentions {
                    if us.contains(&u) {
                        touches += 1;
                        if us.iter().all(|&v| v == u || assigned[v]) {
                            completes += 1;
                        }
                    }
                }
                (completes, touches, std::cmp::Reverse(u))
            })
            .expect("an unassigned unknown remains");
        assigned[best] = true;
        order.push(best);
    }
    order
}
