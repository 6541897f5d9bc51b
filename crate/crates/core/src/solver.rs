//! The double-branches equation `(x R1 a) R3 (x R2 b) = c`.
//!
//! [`brute_solve`] enumerates witnesses directly. [`pipeline_solve`] builds a
//! three-variable relation `R5(x, a, b)` from a decomposition of `R3`, turns
//! it into `W(a, b, c) = x` by a tuple transformation, and reads solutions
//! off `W`. The two agree exactly when `R1` and `R2` are functions; otherwise
//! every term of the decomposition may pick its own witnesses and the
//! pipeline can only over-approximate.

use crate::decompose::{decompose, DecomposeOptions, DecompositionResult};
use crate::error::{Error, Result};
use crate::expr::SuperpositionExpr;
use crate::monoid::Monoid;
use crate::ops::{add, compose_val, extend_false, sum_all, transform, TransformSpec};
use crate::relation::{PointClass, Relation};
use crate::valueset::ValueSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleBranchesEquation {
    pub r1: Relation,
    pub r2: Relation,
    pub r3: Relation,
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl DoubleBranchesEquation {
    pub fn new(r1: Relation, r2: Relation, r3: Relation, a: usize, b: usize, c: usize) -> Result<Self> {
        for r in [&r1, &r2, &r3] {
            if r.arity() != 2 {
                return Err(Error::ArityMismatch { left: r.arity(), right: 2 });
            }
            if r.order() != r1.order() {
                return Err(Error::OrderMismatch { left: r1.order(), right: r.order() });
            }
        }
        let order = r1.order();
        for v in [a, b, c] {
            if v >= order {
                return Err(Error::OutOfRange { value: v, order });
            }
        }
        Ok(DoubleBranchesEquation { r1, r2, r3, a, b, c })
    }

    pub fn order(&self) -> usize {
        self.r1.order()
    }

    /// Same relations with different constants.
    pub fn with_constants(&self, a: usize, b: usize, c: usize) -> Result<Self> {
        Self::new(self.r1.clone(), self.r2.clone(), self.r3.clone(), a, b, c)
    }
}

/// `{x | some u in R1(x,a) and v in R2(x,b) have c in R3(u,v)}`.
pub fn brute_solve(eq: &DoubleBranchesEquation) -> ValueSet {
    let order = eq.order();
    (0..order)
        .filter(|&x| {
            let us = eq.r1.eval(&[x, eq.a]);
            let vs = eq.r2.eval(&[x, eq.b]);
            us.iter()
                .any(|u| vs.iter().any(|v| eq.r3.eval(&[u, v]).contains(eq.c)))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Brute,
    Pipeline,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub solution_set: ValueSet,
    pub method: SolveMethod,
    /// `R5(x, a, b)`, the summed three-variable relation (pipeline only).
    pub r5: Option<Relation>,
    /// `W(a, b, c) = x` (pipeline only).
    pub w: Option<Relation>,
    pub formula: Option<DecompositionResult>,
}

impl SolveOutcome {
    pub fn brute(eq: &DoubleBranchesEquation) -> Self {
        SolveOutcome {
            solution_set: brute_solve(eq),
            method: SolveMethod::Brute,
            r5: None,
            w: None,
            formula: None,
        }
    }

    /// No solution, unique solution or several solutions.
    pub fn class(&self) -> PointClass {
        PointClass::of(self.solution_set)
    }
}

/// `(2, 3, 0, 1)`: sends `(x, a, b, c)` to `(a, b, c, x)`.
pub fn solution_transform() -> TransformSpec {
    TransformSpec::new(vec![2, 3, 0, 1]).expect("valid permutation")
}

/// Builds `R5(x, a, b) = sum_i f_i[g_i1[R1(x,a)] + g_i2[R2(x,b)]]` from a flat
/// decomposition of `R3`.
pub fn summed_relation(
    r1: &Relation,
    r2: &Relation,
    d: &DecompositionResult,
    m: &Monoid,
) -> Result<Relation> {
    let terms = d.flat_terms().ok_or(Error::DecompositionMismatch)?;
    let parts = terms
        .iter()
        .map(|t| {
            let left = extend_false(&compose_val(r1, &t.locations[0].converse())?, 3, &[1, 2])?;
            let right = extend_false(&compose_val(r2, &t.locations[1].converse())?, 3, &[1, 3])?;
            compose_val(&add(&left, &right, m)?, &t.value.converse())
        })
        .collect::<Result<Vec<_>>>()?;
    sum_all(&parts, m)
}

/// Solves through the decomposition `d` of `R3`, which must tabulate to `R3`
/// and consist of flat two-variable terms.
pub fn pipeline_solve(eq: &DoubleBranchesEquation, d: &DecompositionResult, m: &Monoid) -> Result<SolveOutcome> {
    d.verify(&eq.r3, m)?;
    let r5 = summed_relation(&eq.r1, &eq.r2, d, m)?;
    let w = transform(&r5, &solution_transform())?;
    Ok(SolveOutcome {
        solution_set: w.eval(&[eq.a, eq.b, eq.c]),
        method: SolveMethod::Pipeline,
        r5: Some(r5),
        w: Some(w),
        formula: None,
    })
}

/// Pipeline with the default one-term-per-point decomposition of `R3`.
pub fn pipeline_solve_default(eq: &DoubleBranchesEquation, m: &Monoid) -> Result<SolveOutcome> {
    let d = decompose(&eq.r3, m, DecomposeOptions::default())?;
    pipeline_solve(eq, &d, m)
}

/// Decomposes `W` into an explicit formula in the variables `(a, b, c)`.
pub fn pipeline_formula(outcome: &SolveOutcome, m: &Monoid) -> Result<DecompositionResult> {
    let w = outcome
        .w
        .as_ref()
        .ok_or_else(|| Error::MalformedExpr("outcome carries no solution relation".into()))?;
    decompose(w, m, DecomposeOptions::default())
}

/// Attaches the formula to a pipeline outcome.
pub fn with_formula(mut outcome: SolveOutcome, m: &Monoid) -> Result<SolveOutcome> {
    outcome.formula = Some(pipeline_formula(&outcome, m)?);
    Ok(outcome)
}

/// Evaluates a formula at `(a, b, c)`.
pub fn evaluate_formula(formula: &SuperpositionExpr, a: usize, b: usize, c: usize, m: &Monoid) -> ValueSet {
    formula.evaluate(&[a, b, c], m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    /// Brute-force solutions strictly inside the pipeline's.
    Subset,
    /// Some brute-force solution is missing from the pipeline.
    Mismatch,
}

impl Agreement {
    pub fn compare(brute: ValueSet, pipeline: ValueSet) -> Self {
        if brute == pipeline {
            Agreement::Agree
        } else if brute.is_subset(pipeline) {
            Agreement::Subset
        } else {
            Agreement::Mismatch
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Agreement::Agree => "AGREE",
            Agreement::Subset => "SUBSET",
            Agreement::Mismatch => "MISMATCH",
        }
    }
}
