//! Decomposition of a relation of `M` variables into a superposition of
//! one-variable relations.
//!
//! A relation is split into one singular relation per point (value set at
//! that point, `{0}` elsewhere). Each singular relation is addressed by
//! indicator-style location relations `g_j` (1 at the point's `j`-th
//! coordinate, 0 elsewhere) whose monoid sum reaches the key element
//! `1 + .. + 1` only at the point; a value relation `f` then maps the key
//! to the point's value set and everything else to `{0}`. When the
//! iterated sums of `1` collide before `M` terms, the indicators are chained
//! pairwise through a collapse relation instead.

use crate::error::{Error, Result};
use crate::expr::SuperpositionExpr;
use crate::monoid::Monoid;
use crate::ops::{add, check_monoid};
use crate::relation::Relation;
use crate::valueset::ValueSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// One flat term per point.
    Trivial,
    /// One term per point, with chained collapse relations.
    Nested,
    /// Fewer terms from the fixed-location search in [`crate::compact`].
    Compact,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Trivial => "trivial",
            Method::Nested => "nested",
            Method::Compact => "compact",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionResult {
    pub expr: SuperpositionExpr,
    pub method: Method,
    pub arity: usize,
    pub term_count: usize,
    /// Per term, the location relations in the order they occur in the term
    /// (collapse relations included for nested terms). These depend only on
    /// the term's point, never on the decomposed relation's values.
    pub location_relations: Vec<Vec<Relation>>,
    /// Per term, the value relation applied outermost.
    pub value_relations: Vec<Relation>,
}

impl DecompositionResult {
    /// Fails with [`Error::DecompositionMismatch`] unless the expression
    /// tabulates to `r`.
    pub fn verify(&self, r: &Relation, m: &Monoid) -> Result<()> {
        if self.arity != r.arity() || self.expr.to_relation(r.arity(), m)? != *r {
            return Err(Error::DecompositionMismatch);
        }
        Ok(())
    }

    /// The terms as `f[g_1(x_1) + .. + g_M(x_M)]`, when every term has that shape.
    pub fn flat_terms(&self) -> Option<Vec<FlatTerm>> {
        flat_terms(&self.expr, self.arity)
    }
}

/// A term `value[locations[0](x_1) + .. + locations[M-1](x_M)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatTerm {
    pub value: Relation,
    pub locations: Vec<Relation>,
}

impl FlatTerm {
    pub fn to_expr(&self) -> SuperpositionExpr {
        let inner = self
            .locations
            .iter()
            .enumerate()
            .map(|(j, g)| SuperpositionExpr::Apply(g.clone(), Box::new(SuperpositionExpr::Var(j + 1))))
            .collect();
        SuperpositionExpr::Apply(self.value.clone(), Box::new(SuperpositionExpr::Sum(inner)))
    }
}

/// Reads every top-level term of `expr` as a [`FlatTerm`] over `arity` variables.
pub fn flat_terms(expr: &SuperpositionExpr, arity: usize) -> Option<Vec<FlatTerm>> {
    expr.terms()
        .iter()
        .map(|t| {
            let SuperpositionExpr::Apply(f, inner) = t else { return None };
            let SuperpositionExpr::Sum(children) = inner.as_ref() else { return None };
            if children.len() != arity {
                return None;
            }
            let locations = children
                .iter()
                .enumerate()
                .map(|(j, c)| match c {
                    SuperpositionExpr::Apply(g, v) if **v == SuperpositionExpr::Var(j + 1) => Some(g.clone()),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()?;
            Some(FlatTerm { value: f.clone(), locations })
        })
        .collect()
}

/// A relation that is `{0}` at every point except `point`, where it is `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularRelation {
    pub relation: Relation,
    pub point: Vec<usize>,
    pub value: ValueSet,
}

impl SingularRelation {
    pub fn new(arity: usize, order: usize, point: Vec<usize>, value: ValueSet) -> Result<Self> {
        let mut relation = Relation::zero(arity, order)?;
        relation.check_point(&point)?;
        if value.span() > order {
            return Err(Error::OutOfRange { value: value.span() - 1, order });
        }
        relation.set(&point, value);
        Ok(SingularRelation { relation, point, value })
    }

    pub fn arity(&self) -> usize {
        self.relation.arity()
    }
}

/// One singular relation per point, in point order. Their sum is `r`.
pub fn singular_split(r: &Relation) -> Vec<SingularRelation> {
    r.points()
        .enumerate()
        .map(|(i, p)| {
            SingularRelation::new(r.arity(), r.order(), p, r.eval_index(i))
                .expect("point and value come from a valid relation")
        })
        .collect()
}

/// Location relation: `at -> {1}`, every other element `-> {0}`.
pub fn location_relation(order: usize, at: usize) -> Result<Relation> {
    if order < 2 {
        return Err(Error::FaithfulnessTooLow { required: 1, actual: 0 });
    }
    Relation::function(&(0..order).map(|x| usize::from(x == at)).collect::<Vec<_>>())
}

/// Value relation: `key -> value`, every other element `-> {0}`.
pub fn value_relation(order: usize, key: usize, value: ValueSet) -> Result<Relation> {
    Relation::unary(
        (0..order)
            .map(|x| if x == key { value } else { ValueSet::singleton(0) })
            .collect(),
    )
}

/// Collapse relation used between chained indicator pairs: `1+1 -> {1}`,
/// everything else `-> {0}`.
pub fn collapse_relation(m: &Monoid) -> Result<Relation> {
    value_relation(m.order(), m.multiple_of_one(2), ValueSet::singleton(1))
}

struct Term {
    expr: SuperpositionExpr,
    locations: Vec<Relation>,
    value: Relation,
}

fn located_var(order: usize, at: usize, var: usize) -> Result<(SuperpositionExpr, Relation)> {
    let g = location_relation(order, at)?;
    Ok((SuperpositionExpr::Apply(g.clone(), Box::new(SuperpositionExpr::Var(var))), g))
}

fn flat_term(s: &SingularRelation, m: &Monoid) -> Result<Term> {
    let arity = s.arity();
    if m.faithfulness() < arity {
        return Err(Error::FaithfulnessTooLow { required: arity, actual: m.faithfulness() });
    }
    let order = m.order();
    let mut children = Vec::with_capacity(arity);
    let mut locations = Vec::with_capacity(arity);
    for (j, &c) in s.point.iter().enumerate() {
        let (e, g) = located_var(order, c, j + 1)?;
        children.push(e);
        locations.push(g);
    }
    let value = value_relation(order, m.multiple_of_one(arity), s.value)?;
    let expr = SuperpositionExpr::Apply(value.clone(), Box::new(SuperpositionExpr::Sum(children)));
    Ok(Term { expr, locations, value })
}

fn nested_term(s: &SingularRelation, m: &Monoid) -> Result<Term> {
    let arity = s.arity();
    if m.faithfulness() < 2 {
        return Err(Error::FaithfulnessTooLow { required: 2, actual: m.faithfulness() });
    }
    if arity < 2 {
        return Err(Error::UnsupportedArity(arity));
    }
    let order = m.order();
    let collapse = collapse_relation(m)?;
    let (x1, g1) = located_var(order, s.point[0], 1)?;
    let (x2, g2) = located_var(order, s.point[1], 2)?;
    let mut locations = vec![g1, g2];
    let mut acc = SuperpositionExpr::Sum(vec![x1, x2]);
    for j in 2..arity {
        let (xj, gj) = located_var(order, s.point[j], j + 1)?;
        acc = SuperpositionExpr::Sum(vec![
            SuperpositionExpr::Apply(collapse.clone(), Box::new(acc)),
            xj,
        ]);
        locations.push(collapse.clone());
        locations.push(gj);
    }
    let value = value_relation(order, m.multiple_of_one(2), s.value)?;
    let expr = SuperpositionExpr::Apply(value.clone(), Box::new(acc));
    Ok(Term { expr, locations, value })
}

/// `f[g_1(x_1) + .. + g_M(x_M)]` for a singular relation. Needs the monoid's
/// indicator faithfulness to be at least the arity.
pub fn decompose_singular(s: &SingularRelation, m: &Monoid) -> Result<SuperpositionExpr> {
    check_monoid(&s.relation, m)?;
    Ok(flat_term(s, m)?.expr)
}

/// Chained form `f[c[..c[g_1(x_1) + g_2(x_2)] + ..] + g_M(x_M)]` for a
/// singular relation. Needs indicator faithfulness of at least 2.
pub fn decompose_singular_nested(s: &SingularRelation, m: &Monoid) -> Result<SuperpositionExpr> {
    check_monoid(&s.relation, m)?;
    Ok(nested_term(s, m)?.expr)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecomposeOptions {
    /// Drop terms whose point value is `{0}`; they contribute the identity.
    pub prune_zero: bool,
}

/// Decomposes `r` into one term per point, flat when the monoid's indicator
/// faithfulness covers the arity and nested otherwise. The result is checked
/// by tabulation before it is returned.
pub fn decompose(r: &Relation, m: &Monoid, opts: DecomposeOptions) -> Result<DecompositionResult> {
    check_monoid(r, m)?;
    if m.order() < 3 {
        return Err(Error::OrderTooSmall { order: m.order() });
    }
    if m.faithfulness() < 2 {
        return Err(Error::FaithfulnessTooLow { required: 2, actual: m.faithfulness() });
    }
    let flat = m.faithfulness() >= r.arity();
    let zero = ValueSet::singleton(0);
    let singulars = singular_split(r);
    let keep: Vec<&SingularRelation> = if opts.prune_zero {
        let kept: Vec<_> = singulars.iter().filter(|s| s.value != zero).collect();
        if kept.is_empty() {
            vec![&singulars[0]]
        } else {
            kept
        }
    } else {
        singulars.iter().collect()
    };

    let mut children = Vec::with_capacity(keep.len());
    let mut location_relations = Vec::with_capacity(keep.len());
    let mut value_relations = Vec::with_capacity(keep.len());
    for s in keep {
        let term = if flat { flat_term(s, m)? } else { nested_term(s, m)? };
        children.push(term.expr);
        location_relations.push(term.locations);
        value_relations.push(term.value);
    }
    let result = DecompositionResult {
        term_count: children.len(),
        expr: SuperpositionExpr::Sum(children),
        method: if flat { Method::Trivial } else { Method::Nested },
        arity: r.arity(),
        location_relations,
        value_relations,
    };
    result.verify(r, m)?;
    Ok(result)
}

/// Sum of the relations of a singular split (the inverse of [`singular_split`]).
pub fn resum(parts: &[SingularRelation], m: &Monoid) -> Result<Relation> {
    let mut it = parts.iter();
    let first = it
        .next()
        .ok_or_else(|| Error::MalformedExpr("no singular relations".into()))?
        .relation
        .clone();
    it.try_fold(first, |acc, s| add(&acc, &s.relation, m))
}
