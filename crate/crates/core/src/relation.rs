//! Multi-valued relations of `M` variables over a finite carrier.
//!
//! A relation is stored densely: one [`ValueSet`] per argument point, with
//! points laid out in lexicographic order (first coordinate most
//! significant). An empty value set marks an undefined point.

use rand::Rng;

use crate::error::{Error, Result};
use crate::valueset::{ValueSet, MAX_ORDER};

/// Upper bound on `order^arity`, the number of stored cells.
pub const MAX_CELLS: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointClass {
    Undefined,
    Single,
    Many,
}

impl PointClass {
    pub fn of(values: ValueSet) -> Self {
        match values.len() {
            0 => PointClass::Undefined,
            1 => PointClass::Single,
            _ => PointClass::Many,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    order: usize,
    cells: Vec<ValueSet>,
}

impl std::fmt::Debug for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Relation<{}, {}>[", self.arity, self.order)?;
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

pub(crate) fn cell_count(arity: usize, order: usize) -> Result<usize> {
    if arity == 0 {
        return Err(Error::InvalidArity(arity));
    }
    if order == 0 || order > MAX_ORDER {
        return Err(Error::CarrierTooLarge { order, limit: MAX_ORDER });
    }
    let mut n: usize = 1;
    for _ in 0..arity {
        n = n
            .checked_mul(order)
            .filter(|&n| n <= MAX_CELLS)
            .ok_or(Error::CarrierTooLarge { order, limit: MAX_CELLS })?;
    }
    Ok(n)
}

impl Relation {
    /// The relation undefined at every point.
    pub fn empty(arity: usize, order: usize) -> Result<Self> {
        Self::constant(arity, order, ValueSet::EMPTY)
    }

    /// The relation taking every value at every point.
    pub fn universal(arity: usize, order: usize) -> Result<Self> {
        Self::constant(arity, order, ValueSet::full(order))
    }

    /// The relation equal to `{0}` everywhere (the additive identity).
    pub fn zero(arity: usize, order: usize) -> Result<Self> {
        Self::constant(arity, order, ValueSet::singleton(0))
    }

    pub fn constant(arity: usize, order: usize, value: ValueSet) -> Result<Self> {
        let n = cell_count(arity, order)?;
        check_set(value, order)?;
        Ok(Relation { arity, order, cells: vec![value; n] })
    }

    pub fn from_cells(arity: usize, order: usize, cells: Vec<ValueSet>) -> Result<Self> {
        let n = cell_count(arity, order)?;
        if cells.len() != n {
            return Err(Error::CellCountMismatch { expected: n, got: cells.len() });
        }
        for &c in &cells {
            check_set(c, order)?;
        }
        Ok(Relation { arity, order, cells })
    }

    /// Tabulates `f` over every point.
    pub fn from_fn<F>(arity: usize, order: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> ValueSet,
    {
        let n = cell_count(arity, order)?;
        let mut cells = Vec::with_capacity(n);
        let mut point = vec![0; arity];
        for _ in 0..n {
            let v = f(&point);
            check_set(v, order)?;
            cells.push(v);
            advance(&mut point, order);
        }
        Ok(Relation { arity, order, cells })
    }

    /// Builds the relation whose tuple-set view is `tuples`, each tuple being
    /// `(b1, .., bM, b0)`.
    pub fn from_tuples<'a, I>(arity: usize, order: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [usize]>,
    {
        let mut r = Self::empty(arity, order)?;
        for t in tuples {
            if t.len() != arity + 1 {
                return Err(Error::ArityMismatch { left: t.len(), right: arity + 1 });
            }
            for &v in t {
                if v >= order {
                    return Err(Error::OutOfRange { value: v, order });
                }
            }
            let idx = r.index_of(&t[..arity]);
            r.cells[idx].insert(t[arity]);
        }
        Ok(r)
    }

    /// One-variable relation from its value cells, `(v0, v1, ..)` in table notation.
    pub fn unary(cells: Vec<ValueSet>) -> Result<Self> {
        let order = cells.len();
        Self::from_cells(1, order, cells)
    }

    /// Single-valued total one-variable relation `x -> map[x]`.
    pub fn function(map: &[usize]) -> Result<Self> {
        Self::unary(map.iter().map(|&v| ValueSet::singleton(v)).collect())
    }

    /// The one-variable identity relation `x -> {x}`.
    pub fn identity(order: usize) -> Result<Self> {
        Self::function(&(0..order).collect::<Vec<_>>())
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn cells(&self) -> &[ValueSet] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<ValueSet> {
        self.cells
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|c| c.is_empty())
    }

    /// Row-major index of a point. Coordinates must be in range.
    #[inline]
    pub fn index_of(&self, point: &[usize]) -> usize {
        debug_assert_eq!(point.len(), self.arity);
        point.iter().fold(0, |acc, &c| {
            debug_assert!(c < self.order);
            acc * self.order + c
        })
    }

    pub fn point_of(&self, mut index: usize) -> Vec<usize> {
        let mut p = vec![0; self.arity];
        for slot in p.iter_mut().rev() {
            *slot = index % self.order;
            index /= self.order;
        }
        p
    }

    pub fn check_point(&self, point: &[usize]) -> Result<()> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch { left: point.len(), right: self.arity });
        }
        match point.iter().find(|&&c| c >= self.order) {
            Some(&c) => Err(Error::OutOfRange { value: c, order: self.order }),
            None => Ok(()),
        }
    }

    /// Value set at a point; empty where undefined.
    #[inline]
    pub fn eval(&self, point: &[usize]) -> ValueSet {
        self.cells[self.index_of(point)]
    }

    #[inline]
    pub fn eval_index(&self, index: usize) -> ValueSet {
        self.cells[index]
    }

    /// Value set of a one-variable relation at `x`.
    #[inline]
    pub fn at(&self, x: usize) -> ValueSet {
        debug_assert_eq!(self.arity, 1);
        self.cells[x]
    }

    pub fn set(&mut self, point: &[usize], values: ValueSet) {
        let i = self.index_of(point);
        self.cells[i] = values;
    }

    pub fn classify_point(&self, point: &[usize]) -> PointClass {
        PointClass::of(self.eval(point))
    }

    /// Counts of undefined, single and many-valued points.
    pub fn class_counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for &c in &self.cells {
            counts[PointClass::of(c) as usize] += 1;
        }
        counts
    }

    /// True when every point has exactly one value.
    pub fn is_function(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 1)
    }

    /// True when every point has at most one value.
    pub fn is_partial_function(&self) -> bool {
        self.cells.iter().all(|c| c.len() <= 1)
    }

    /// Union of the values at every point of `sets[0] x .. x sets[M-1]`.
    pub fn image(&self, sets: &[ValueSet]) -> ValueSet {
        assert_eq!(sets.len(), self.arity, "one set per argument");
        if sets.iter().any(|s| s.is_empty()) {
            return ValueSet::EMPTY;
        }
        let choices: Vec<Vec<usize>> = sets.iter().map(|s| s.iter().collect()).collect();
        let mut digits = vec![0; self.arity];
        let mut out = ValueSet::EMPTY;
        loop {
            let idx = digits
                .iter()
                .zip(&choices)
                .fold(0, |acc, (&d, c)| acc * self.order + c[d]);
            out = out.union(self.cells[idx]);
            let mut k = self.arity;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < choices[k].len() {
                    break;
                }
                digits[k] = 0;
            }
        }
    }

    /// Image of a value set under a one-variable relation.
    #[inline]
    pub fn image_unary(&self, set: ValueSet) -> ValueSet {
        debug_assert_eq!(self.arity, 1);
        set.iter().fold(ValueSet::EMPTY, |acc, x| acc.union(self.cells[x]))
    }

    /// Iterator over all argument points in storage order.
    pub fn points(&self) -> Points {
        Points::new(self.arity, self.order)
    }

    /// Tuple-set view: every `(b1, .., bM, b0)` in the relation.
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for (i, p) in self.points().enumerate() {
            for v in self.cells[i] {
                let mut t = p.clone();
                t.push(v);
                out.push(t);
            }
        }
        out
    }

    pub fn tuple_count(&self) -> usize {
        self.cells.iter().map(|c| c.len()).sum()
    }

    /// Converse of a one-variable relation: `{(y, x) | (x, y) in R}`.
    pub fn converse(&self) -> Relation {
        assert_eq!(self.arity, 1, "converse is defined for one-variable relations");
        let mut cells = vec![ValueSet::EMPTY; self.order];
        for (x, &ys) in self.cells.iter().enumerate() {
            for y in ys {
                cells[y].insert(x);
            }
        }
        Relation { arity: 1, order: self.order, cells }
    }

    /// Every relation of the given arity and order, in bit-pattern order.
    ///
    /// There are `2^(order^(arity+1))` of them; callers must keep that small.
    pub fn enumerate(arity: usize, order: usize) -> Result<impl Iterator<Item = Relation>> {
        let n = cell_count(arity, order)?;
        let bits = n * order;
        if bits > 24 {
            return Err(Error::CarrierTooLarge { order, limit: 24 });
        }
        let mask = (1u64 << order) - 1;
        Ok((0u64..1 << bits).map(move |code| {
            let cells = (0..n)
                .map(|i| ValueSet::from_bits((code >> (i * order)) & mask))
                .collect();
            Relation { arity, order, cells }
        }))
    }

    /// Random relation where each point independently holds each value with
    /// probability `density`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, arity: usize, order: usize, density: f64) -> Result<Self> {
        let n = cell_count(arity, order)?;
        let cells = (0..n)
            .map(|_| {
                (0..order)
                    .filter(|_| rng.gen_bool(density.clamp(0.0, 1.0)))
                    .collect()
            })
            .collect();
        Ok(Relation { arity, order, cells })
    }

    /// Random single-valued total relation.
    pub fn random_function<R: Rng + ?Sized>(rng: &mut R, arity: usize, order: usize) -> Result<Self> {
        let n = cell_count(arity, order)?;
        let cells = (0..n)
            .map(|_| ValueSet::singleton(rng.gen_range(0..order)))
            .collect();
        Ok(Relation { arity, order, cells })
    }

    /// Applies `f` to every value set.
    pub fn map_cells<F: FnMut(ValueSet) -> ValueSet>(&self, f: F) -> Relation {
        Relation {
            arity: self.arity,
            order: self.order,
            cells: self.cells.iter().copied().map(f).collect(),
        }
    }

    pub(crate) fn from_parts(arity: usize, order: usize, cells: Vec<ValueSet>) -> Relation {
        debug_assert_eq!(cells.len(), order.pow(arity as u32));
        Relation { arity, order, cells }
    }
}

fn check_set(set: ValueSet, order: usize) -> Result<()> {
    if set.span() > order {
        Err(Error::OutOfRange { value: set.span() - 1, order })
    } else {
        Ok(())
    }
}

/// Steps a point to its lexicographic successor, wrapping to all zeros.
#[inline]
pub(crate) fn advance(point: &mut [usize], order: usize) {
    for c in point.iter_mut().rev() {
        *c += 1;
        if *c < order {
            return;
        }
        *c = 0;
    }
}

/// Iterator over `{0..order}^arity` in lexicographic order.
pub struct Points {
    next: Option<Vec<usize>>,
    order: usize,
}

impl Points {
    pub fn new(arity: usize, order: usize) -> Self {
        Points { next: (order > 0).then(|| vec![0; arity]), order }
    }
}

impl Iterator for Points {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        advance(&mut succ, self.order);
        if succ.iter().any(|&c| c != 0) {
            self.next = Some(succ);
        }
        Some(cur)
    }
}
