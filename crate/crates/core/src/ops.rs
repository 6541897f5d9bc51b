//! The operation algebra on relations: addition, tuple transformations,
//! composition with one-variable relations and dummy-variable extension.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::monoid::Monoid;
use crate::relation::{advance, Relation};
use crate::valueset::ValueSet;

fn same_shape(lhs: &Relation, rhs: &Relation) -> Result<()> {
    if lhs.arity() != rhs.arity() {
        return Err(Error::ArityMismatch { left: lhs.arity(), right: rhs.arity() });
    }
    if lhs.order() != rhs.order() {
        return Err(Error::OrderMismatch { left: lhs.order(), right: rhs.order() });
    }
    Ok(())
}

pub(crate) fn check_monoid(r: &Relation, m: &Monoid) -> Result<()> {
    if r.order() != m.order() {
        return Err(Error::OrderMismatch { left: r.order(), right: m.order() });
    }
    Ok(())
}

/// Pointwise set-sum: at each point, every `a + b` with `a` from `lhs` and
/// `b` from `rhs`. A point undefined on either side stays undefined.
pub fn add(lhs: &Relation, rhs: &Relation, m: &Monoid) -> Result<Relation> {
    same_shape(lhs, rhs)?;
    check_monoid(lhs, m)?;
    let cells = lhs
        .cells()
        .iter()
        .zip(rhs.cells())
        .map(|(&a, &b)| m.sum_sets(a, b))
        .collect();
    Ok(Relation::from_parts(lhs.arity(), lhs.order(), cells))
}

/// Sum of a non-empty sequence of same-shaped relations.
pub fn sum_all<'a, I>(relations: I, m: &Monoid) -> Result<Relation>
where
    I: IntoIterator<Item = &'a Relation>,
{
    let mut it = relations.into_iter();
    let first = it
        .next()
        .ok_or_else(|| Error::MalformedExpr("sum of no relations".into()))?
        .clone();
    check_monoid(&first, m)?;
    it.try_fold(first, |acc, r| add(&acc, r, m))
}

/// A permutation of the tuple positions `(1, .., M, 0)`.
///
/// Label `0` names the value slot and `j >= 1` the `j`-th argument. Applying
/// the spec `(i1, .., iM, i0)` sends each tuple `(b1, .., bM, b0)` to
/// `(b_i1, .., b_iM, b_i0)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TransformSpec(Vec<usize>);

impl TransformSpec {
    pub fn new(positions: Vec<usize>) -> Result<Self> {
        let n = positions.len();
        if n < 2 {
            return Err(Error::NotAPermutation(positions));
        }
        let mut seen = vec![false; n];
        for &p in &positions {
            if p >= n || seen[p] {
                return Err(Error::NotAPermutation(positions));
            }
            seen[p] = true;
        }
        Ok(TransformSpec(positions))
    }

    /// `(1, 2, .., M, 0)`.
    pub fn identity(arity: usize) -> Self {
        let mut v: Vec<usize> = (1..=arity).collect();
        v.push(0);
        TransformSpec(v)
    }

    /// Exchange of the two arguments of a two-variable relation, `(2, 1, 0)`.
    pub fn swap() -> Self {
        TransformSpec(vec![2, 1, 0])
    }

    /// Converse of a one-variable relation, `(0, 1)`.
    pub fn inverse_unary() -> Self {
        TransformSpec(vec![0, 1])
    }

    /// All `(M+1)!` transformations for arity `M`.
    pub fn all(arity: usize) -> Vec<Self> {
        let mut labels: Vec<usize> = (1..=arity).collect();
        labels.push(0);
        permutations(&labels).into_iter().map(TransformSpec).collect()
    }

    pub fn arity(&self) -> usize {
        self.0.len() - 1
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    fn slot(&self, label: usize) -> usize {
        if label == 0 {
            self.arity()
        } else {
            label - 1
        }
    }

    /// The spec equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &TransformSpec) -> Result<TransformSpec> {
        if self.0.len() != next.0.len() {
            return Err(Error::ArityMismatch { left: self.arity(), right: next.arity() });
        }
        Ok(TransformSpec(next.0.iter().map(|&l| self.0[self.slot(l)]).collect()))
    }

    /// The spec undoing `self`.
    pub fn inverse(&self) -> TransformSpec {
        let n = self.0.len();
        let mut inv = vec![0; n];
        for (k, &l) in self.0.iter().enumerate() {
            // slot k of the output came from slot(l); send it back.
            inv[self.slot(l)] = if k == n - 1 { 0 } else { k + 1 };
        }
        TransformSpec(inv)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.arity())
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for TransformSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let positions = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::NotAPermutation(Vec::new()))?;
        TransformSpec::new(positions)
    }
}

pub(crate) fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Rearranges every tuple of `r` according to `spec`.
pub fn transform(r: &Relation, spec: &TransformSpec) -> Result<Relation> {
    if spec.arity() != r.arity() {
        return Err(Error::ArityMismatch { left: spec.arity(), right: r.arity() });
    }
    let m = r.arity();
    let mut out = vec![ValueSet::EMPTY; r.len()];
    let sources: Vec<usize> = spec.0.iter().map(|&l| spec.slot(l)).collect();
    let mut tuple = vec![0; m + 1];
    let mut moved = vec![0; m + 1];
    for (i, p) in r.points().enumerate() {
        tuple[..m].copy_from_slice(&p);
        for v in r.eval_index(i) {
            tuple[m] = v;
            for (dst, &src) in moved.iter_mut().zip(&sources) {
                *dst = tuple[src];
            }
            out[r.index_of(&moved[..m])].insert(moved[m]);
        }
    }
    Ok(Relation::from_parts(m, r.order(), out))
}

fn check_beta(r: &Relation, beta: &Relation) -> Result<()> {
    if beta.arity() != 1 {
        return Err(Error::ArityMismatch { left: beta.arity(), right: 1 });
    }
    if beta.order() != r.order() {
        return Err(Error::OrderMismatch { left: r.order(), right: beta.order() });
    }
    Ok(())
}

/// Substitutes `beta` into argument `index` (1-based):
/// `(.., b_i, .., b0)` is in the result iff some `y` has `(b_i, y)` in
/// `beta` and `(.., y, .., b0)` in `r`.
pub fn compose_arg(r: &Relation, index: usize, beta: &Relation) -> Result<Relation> {
    if index == 0 || index > r.arity() {
        return Err(Error::BadIndex { index, arity: r.arity() });
    }
    check_beta(r, beta)?;
    let k = index - 1;
    let mut point = vec![0; r.arity()];
    let mut probe = vec![0; r.arity()];
    let mut cells = Vec::with_capacity(r.len());
    for _ in 0..r.len() {
        probe.copy_from_slice(&point);
        let mut acc = ValueSet::EMPTY;
        for y in beta.at(point[k]) {
            probe[k] = y;
            acc = acc.union(r.eval(&probe));
        }
        cells.push(acc);
        advance(&mut point, r.order());
    }
    Ok(Relation::from_parts(r.arity(), r.order(), cells))
}

/// Composition at the value slot: `(args, c)` is in the result iff some `y`
/// has `(args, y)` in `r` and `(c, y)` in `beta`. Each value set becomes its
/// preimage under `beta`.
pub fn compose_val(r: &Relation, beta: &Relation) -> Result<Relation> {
    check_beta(r, beta)?;
    let preimage_of = beta.converse();
    Ok(r.map_cells(|s| preimage_of.image_unary(s)))
}

/// Composition at position `index`, where `0` is the value slot.
pub fn compose(r: &Relation, index: usize, beta: &Relation) -> Result<Relation> {
    if index == 0 {
        compose_val(r, beta)
    } else {
        compose_arg(r, index, beta)
    }
}

/// Embeds `r` into `target_arity` variables: argument `j` of `r` becomes
/// argument `positions[j]` (1-based) of the result, and the remaining
/// arguments do not affect the value.
pub fn extend_false(r: &Relation, target_arity: usize, positions: &[usize]) -> Result<Relation> {
    if positions.len() != r.arity() {
        return Err(Error::BadPositions(format!(
            "expected {} positions, got {}",
            r.arity(),
            positions.len()
        )));
    }
    if target_arity < r.arity() {
        return Err(Error::BadPositions(format!(
            "target arity {target_arity} is below the source arity {}",
            r.arity()
        )));
    }
    let mut seen = vec![false; target_arity + 1];
    for &p in positions {
        if p == 0 || p > target_arity || seen[p] {
            return Err(Error::BadPositions(format!("{positions:?} within 1..={target_arity}")));
        }
        seen[p] = true;
    }
    let mut sub = vec![0; r.arity()];
    Relation::from_fn(target_arity, r.order(), |p| {
        for (s, &pos) in sub.iter_mut().zip(positions) {
            *s = p[pos - 1];
        }
        r.eval(&sub)
    })
}
