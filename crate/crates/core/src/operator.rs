//! Double-branches equations whose unknowns and constants are functions.
//!
//! A set of one-variable functions closed under pointwise addition forms a
//! small monoid. When that monoid is isomorphic to the base carrier, an
//! equation over the base can be transported across the isomorphism and
//! solved on the function side; the solution sets must correspond.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::derived::{derived_operator_system, isomorphisms, submonoid_closure, Submonoid};
use crate::error::{Error, Result};
use crate::monoid::Monoid;
use crate::relation::Relation;
use crate::solver::{brute_solve, pipeline_solve_default, DoubleBranchesEquation};
use crate::valueset::ValueSet;

/// The three functions `(0,0,0)`, `(2,0,1)`, `(1,0,2)` over `{0, 1, 2}`.
pub fn cyclic_function_set() -> Vec<Relation> {
    [[0, 0, 0], [2, 0, 1], [1, 0, 2]]
        .iter()
        .map(|f| Relation::function(f).expect("valid function"))
        .collect()
}

#[derive(Clone, Debug)]
pub struct OperatorDemoReport {
    pub submonoid: Submonoid,
    /// The submonoid's elements as relations over the base carrier.
    pub functions: Vec<Relation>,
    /// Label map from the base monoid into the submonoid, when one exists.
    pub isomorphism: Option<Vec<usize>>,
    pub equations: usize,
    pub checks: usize,
    pub brute_mismatches: usize,
    pub pipeline_mismatches: usize,
}

impl OperatorDemoReport {
    pub fn all_match(&self) -> bool {
        self.isomorphism.is_some() && self.brute_mismatches == 0 && self.pipeline_mismatches == 0
    }
}

fn transport(r: &Relation, phi: &[usize], order: usize) -> Result<Relation> {
    let mut out = Relation::empty(r.arity(), order)?;
    for (i, p) in r.points().enumerate() {
        let q: Vec<usize> = p.iter().map(|&x| phi[x]).collect();
        out.set(&q, r.eval_index(i).iter().map(|v| phi[v]).collect());
    }
    Ok(out)
}

/// Builds the submonoid spanned by `functions` inside the derived system of
/// `base`, and when it is isomorphic to `base`, solves `samples` random
/// equations (half with function branches, half unrestricted) for every
/// choice of constants on both sides.
pub fn operator_instantiation_demo(
    base: &Monoid,
    functions: &[Relation],
    samples: usize,
    seed: u64,
) -> Result<OperatorDemoReport> {
    let derived = derived_operator_system(base)?;
    let ids = functions
        .iter()
        .map(|f| {
            derived
                .index_of(f)
                .ok_or(Error::OrderMismatch { left: f.order(), right: base.order() })
        })
        .collect::<Result<Vec<_>>>()?;
    let submonoid = submonoid_closure(&derived.monoid, &ids)?;
    let functions: Vec<Relation> = submonoid
        .embedding
        .iter()
        .map(|&i| derived.element(i).clone())
        .collect();
    let isomorphism = isomorphisms(base, &submonoid.monoid).into_iter().next();
    let mut report = OperatorDemoReport {
        submonoid,
        functions,
        isomorphism,
        equations: 0,
        checks: 0,
        brute_mismatches: 0,
        pipeline_mismatches: 0,
    };
    let Some(phi) = report.isomorphism.clone() else {
        return Ok(report);
    };
    let sub = report.submonoid.monoid.clone();
    let n = base.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        let (r1, r2) = if s % 2 == 0 {
            (Relation::random_function(&mut rng, 2, n)?, Relation::random_function(&mut rng, 2, n)?)
        } else {
            (Relation::random(&mut rng, 2, n, 0.4)?, Relation::random(&mut rng, 2, n, 0.4)?)
        };
        let r3 = Relation::random(&mut rng, 2, n, 0.4)?;
        let base_eq = DoubleBranchesEquation::new(r1, r2, r3, 0, 0, 0)?;
        let sub_eq = DoubleBranchesEquation::new(
            transport(&base_eq.r1, &phi, n)?,
            transport(&base_eq.r2, &phi, n)?,
            transport(&base_eq.r3, &phi, n)?,
            0,
            0,
            0,
        )?;
        report.equations += 1;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let be = base_eq.with_constants(a, b, c)?;
                    let se = sub_eq.with_constants(phi[a], phi[b], phi[c])?;
                    let map = |set: ValueSet| set.iter().map(|x| phi[x]).collect::<ValueSet>();
                    report.checks += 1;
                    if map(brute_solve(&be)) != brute_solve(&se) {
                        report.brute_mismatches += 1;
                    }
                    let bp = pipeline_solve_default(&be, base)?.solution_set;
                    let sp = pipeline_solve_default(&se, &sub)?.solution_set;
                    if map(bp) != sp {
                        report.pipeline_mismatches += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}
