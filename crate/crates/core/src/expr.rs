//! Superposition expressions: trees of one-variable relations, monoid sums
//! and variable leaves, with multi-valued evaluation.

use std::fmt;

use crate::error::{Error, Result};
use crate::monoid::Monoid;
use crate::relation::Relation;
use crate::valueset::ValueSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SuperpositionExpr {
    /// The `j`-th argument (1-based).
    Var(usize),
    /// Monoid sum of one or more subexpressions.
    Sum(Vec<SuperpositionExpr>),
    /// A one-variable relation applied to a subexpression.
    Apply(Relation, Box<SuperpositionExpr>),
}

impl SuperpositionExpr {
    pub fn var(index: usize) -> Result<Self> {
        if index == 0 {
            return Err(Error::MalformedExpr("variables are numbered from 1".into()));
        }
        Ok(SuperpositionExpr::Var(index))
    }

    pub fn sum(children: Vec<SuperpositionExpr>) -> Result<Self> {
        if children.is_empty() {
            return Err(Error::MalformedExpr("sum needs at least one term".into()));
        }
        Ok(SuperpositionExpr::Sum(children))
    }

    pub fn apply(f: Relation, child: SuperpositionExpr) -> Result<Self> {
        if f.arity() != 1 {
            return Err(Error::ArityMismatch { left: f.arity(), right: 1 });
        }
        Ok(SuperpositionExpr::Apply(f, Box::new(child)))
    }

    /// Checks variable indices against `arity` and relation orders against `order`.
    pub fn validate(&self, arity: usize, order: usize) -> Result<()> {
        match self {
            SuperpositionExpr::Var(j) => {
                if *j == 0 || *j > arity {
                    return Err(Error::BadIndex { index: *j, arity });
                }
            }
            SuperpositionExpr::Sum(children) => {
                if children.is_empty() {
                    return Err(Error::MalformedExpr("sum needs at least one term".into()));
                }
                for c in children {
                    c.validate(arity, order)?;
                }
            }
            SuperpositionExpr::Apply(f, child) => {
                if f.arity() != 1 {
                    return Err(Error::ArityMismatch { left: f.arity(), right: 1 });
                }
                if f.order() != order {
                    return Err(Error::OrderMismatch { left: f.order(), right: order });
                }
                child.validate(arity, order)?;
            }
        }
        Ok(())
    }

    /// Value set at `point`. The expression must be valid for the point's
    /// arity and the monoid's order.
    pub fn evaluate(&self, point: &[usize], m: &Monoid) -> ValueSet {
        match self {
            SuperpositionExpr::Var(j) => ValueSet::singleton(point[j - 1]),
            SuperpositionExpr::Sum(children) => {
                let mut it = children.iter();
                let first = it.next().map_or(ValueSet::EMPTY, |c| c.evaluate(point, m));
                it.fold(first, |acc, c| {
                    if acc.is_empty() {
                        acc
                    } else {
                        m.sum_sets(acc, c.evaluate(point, m))
                    }
                })
            }
            SuperpositionExpr::Apply(f, child) => f.image_unary(child.evaluate(point, m)),
        }
    }

    /// Tabulates the expression over every point of `{0..order}^arity`.
    pub fn to_relation(&self, arity: usize, m: &Monoid) -> Result<Relation> {
        self.validate(arity, m.order())?;
        Relation::from_fn(arity, m.order(), |p| self.evaluate(p, m))
    }

    /// Number of top-level summands (1 for a non-sum expression).
    pub fn term_count(&self) -> usize {
        match self {
            SuperpositionExpr::Sum(children) => children.len(),
            _ => 1,
        }
    }

    /// Top-level summands.
    pub fn terms(&self) -> &[SuperpositionExpr] {
        match self {
            SuperpositionExpr::Sum(children) => children,
            other => std::slice::from_ref(other),
        }
    }

    /// Largest variable index used.
    pub fn max_var(&self) -> usize {
        match self {
            SuperpositionExpr::Var(j) => *j,
            SuperpositionExpr::Sum(children) => children.iter().map(|c| c.max_var()).max().unwrap_or(0),
            SuperpositionExpr::Apply(_, child) => child.max_var(),
        }
    }

    /// Order shared by every relation in the tree, if any relation occurs.
    pub fn carrier_order(&self) -> Result<Option<usize>> {
        fn walk(e: &SuperpositionExpr, seen: &mut Option<usize>) -> Result<()> {
            match e {
                SuperpositionExpr::Var(_) => Ok(()),
                SuperpositionExpr::Sum(children) => children.iter().try_for_each(|c| walk(c, seen)),
                SuperpositionExpr::Apply(f, child) => {
                    match *seen {
                        Some(o) if o != f.order() => {
                            return Err(Error::OrderMismatch { left: o, right: f.order() })
                        }
                        _ => *seen = Some(f.order()),
                    }
                    walk(child, seen)
                }
            }
        }
        let mut seen = None;
        walk(self, &mut seen)?;
        Ok(seen)
    }

    /// Human-oriented rendering in table notation, e.g.
    /// `(0,0,1)[(1,0,0)(x1)+(1,0,0)(x2)]`.
    pub fn to_table_notation(&self) -> String {
        let mut out = String::new();
        self.write_table_notation(&mut out);
        out
    }

    fn write_table_notation(&self, out: &mut String) {
        match self {
            SuperpositionExpr::Var(j) => out.push_str(&format!("x{j}")),
            SuperpositionExpr::Sum(children) => {
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push('+');
                    }
                    c.write_table_notation(out);
                }
            }
            SuperpositionExpr::Apply(f, child) => {
                out.push('(');
                for (i, c) in f.cells().iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&c.to_string());
                }
                out.push(')');
                match child.as_ref() {
                    SuperpositionExpr::Var(j) => out.push_str(&format!("(x{j})")),
                    inner => {
                        out.push('[');
                        inner.write_table_notation(out);
                        out.push(']');
                    }
                }
            }
        }
    }
}

/// Canonical s-expression text; see [`crate::format::parse_expr`].
impl fmt::Display for SuperpositionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuperpositionExpr::Var(j) => write!(f, "(var {j})"),
            SuperpositionExpr::Sum(children) => {
                f.write_str("(sum")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
            SuperpositionExpr::Apply(rel, child) => {
                f.write_str("(apply [")?;
                for (i, c) in rel.cells().iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "] {child})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(map: &[usize]) -> Relation {
        Relation::function(map).unwrap()
    }

    fn step_one() -> SuperpositionExpr {
        SuperpositionExpr::apply(
            f(&[0, 0, 1]),
            SuperpositionExpr::sum(vec![
                SuperpositionExpr::apply(f(&[1, 0, 0]), SuperpositionExpr::Var(1)).unwrap(),
                SuperpositionExpr::apply(f(&[1, 0, 0]), SuperpositionExpr::Var(2)).unwrap(),
            ])
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn evaluates_singular_expression() {
        let m = Monoid::modular(3);
        let e = step_one();
        assert_eq!(e.evaluate(&[0, 0], &m), ValueSet::singleton(1));
        assert_eq!(e.evaluate(&[0, 1], &m), ValueSet::singleton(0));
        let r = e.to_relation(2, &m).unwrap();
        for p in r.points() {
            let expect = if p == [0, 0] { 1 } else { 0 };
            assert_eq!(r.eval(&p), ValueSet::singleton(expect));
        }
    }

    #[test]
    fn empty_relation_absorbs() {
        let m = Monoid::modular(3);
        let e = SuperpositionExpr::apply(Relation::empty(1, 3).unwrap(), SuperpositionExpr::Var(1)).unwrap();
        assert_eq!(e.evaluate(&[2], &m), ValueSet::EMPTY);
    }

    #[test]
    fn constructors_reject_malformed() {
        assert!(SuperpositionExpr::sum(vec![]).is_err());
        assert!(SuperpositionExpr::var(0).is_err());
        assert!(SuperpositionExpr::apply(Relation::zero(2, 3).unwrap(), SuperpositionExpr::Var(1)).is_err());
        let m = Monoid::modular(3);
        assert!(matches!(step_one().to_relation(1, &m), Err(Error::BadIndex { index: 2, arity: 1 })));
        assert!(matches!(step_one().to_relation(2, &Monoid::modular(4)), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn renders_both_notations() {
        let e = step_one();
        assert_eq!(e.to_table_notation(), "(0,0,1)[(1,0,0)(x1)+(1,0,0)(x2)]");
        assert_eq!(
            e.to_string(),
            "(apply [0,0,1] (sum (apply [1,0,0] (var 1)) (apply [1,0,0] (var 2))))"
        );
        assert_eq!(e.term_count(), 1);
        assert_eq!(e.max_var(), 2);
        assert_eq!(e.carrier_order().unwrap(), Some(3));
    }
}
