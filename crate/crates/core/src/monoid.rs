//! Finite commutative monoids given by an explicit addition table.
//!
//! Elements are the ordinals `0..order`, and element `0` is always the
//! identity. Construction checks closure, identity, associativity and
//! commutativity exhaustively, then records the indicator-faithfulness
//! degree used to gate the decomposition constructions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::valueset::{ValueSet, MAX_ORDER};

/// Upper bound on the order of any monoid table we are willing to build.
pub const MAX_MONOID_ORDER: usize = 1 << 12;

#[derive(Clone, PartialEq, Eq)]
pub struct Monoid {
    order: usize,
    table: Vec<u32>,
    faithfulness: usize,
}

impl std::fmt::Debug for Monoid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Monoid")
            .field("order", &self.order)
            .field("faithfulness", &self.faithfulness)
            .finish_non_exhaustive()
    }
}

impl Monoid {
    /// Builds a monoid from a square table, verifying every axiom exhaustively.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let m = Self::from_rows_unverified(rows)?;
        m.verify_identity()?;
        m.verify_associative_exhaustive()?;
        m.verify_commutative()?;
        Ok(m)
    }

    /// Shape and range checks only; the caller is responsible for the axioms.
    pub(crate) fn from_rows_unverified(rows: &[Vec<usize>]) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::MalformedTable("table is empty".into()));
        }
        if order > MAX_MONOID_ORDER {
            return Err(Error::CarrierTooLarge { order, limit: MAX_MONOID_ORDER });
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::MalformedTable(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= order {
                    return Err(Error::OutOfRange { value: v, order });
                }
                table.push(v as u32);
            }
        }
        Ok(Self::from_flat(order, table))
    }

    pub(crate) fn from_flat(order: usize, table: Vec<u32>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let mut m = Monoid { order, table, faithfulness: 0 };
        m.faithfulness = m.compute_faithfulness();
        m
    }

    /// Cyclic group `Z_k` under addition modulo `k`.
    pub fn modular(k: usize) -> Self {
        assert!((1..=MAX_MONOID_ORDER).contains(&k), "modulus out of range");
        let table = (0..k)
            .flat_map(|a| (0..k).map(move |b| ((a + b) % k) as u32))
            .collect();
        Self::from_flat(k, table)
    }

    /// `{0, .., n}` under `min(a + b, n)`.
    pub fn saturating(n: usize) -> Self {
        let order = n + 1;
        assert!(order <= MAX_MONOID_ORDER, "saturation bound out of range");
        let table = (0..order)
            .flat_map(|a| (0..order).map(move |b| (a + b).min(n) as u32))
            .collect();
        Self::from_flat(order, table)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(|row| row.iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// Largest `m` such that `0, 1, 1+1, .., m*1` are pairwise distinct.
    ///
    /// Zero for the trivial monoid, which has no element `1`.
    #[inline]
    pub fn faithfulness(&self) -> usize {
        self.faithfulness
    }

    /// The `k`-fold sum `1 + 1 + .. + 1` (`0` when `k == 0`).
    pub fn multiple_of_one(&self, k: usize) -> usize {
        assert!(self.order >= 2, "the trivial monoid has no element 1");
        (0..k).fold(0, |acc, _| self.add(acc, 1))
    }

    fn compute_faithfulness(&self) -> usize {
        if self.order < 2 {
            return 0;
        }
        let mut seen = vec![false; self.order];
        let mut s = 0;
        seen[0] = true;
        let mut degree = 0;
        loop {
            s = self.add(s, 1);
            if seen[s] {
                return degree;
            }
            seen[s] = true;
            degree += 1;
        }
    }

    /// `{a + b | a in lhs, b in rhs}`; empty when either side is empty.
    pub fn sum_sets(&self, lhs: ValueSet, rhs: ValueSet) -> ValueSet {
        debug_assert!(self.order <= MAX_ORDER);
        let mut out = ValueSet::EMPTY;
        if rhs.is_empty() {
            return out;
        }
        for a in lhs {
            let row = &self.table[a * self.order..(a + 1) * self.order];
            for b in rhs {
                out.insert(row[b] as usize);
            }
        }
        out
    }

    pub(crate) fn verify_identity(&self) -> Result<()> {
        for a in 0..self.order {
            if self.add(0, a) != a || self.add(a, 0) != a {
                return Err(Error::NoIdentityAtZero { element: a });
            }
        }
        Ok(())
    }

    pub(crate) fn verify_commutative(&self) -> Result<()> {
        for a in 0..self.order {
            for b in a + 1..self.order {
                if self.add(a, b) != self.add(b, a) {
                    return Err(Error::NotCommutative { a, b });
                }
            }
        }
        Ok(())
    }

    pub(crate) fn verify_associative_exhaustive(&self) -> Result<()> {
        for a in 0..self.order {
            for b in 0..self.order {
                let ab = self.add(a, b);
                for c in 0..self.order {
                    if self.add(ab, c) != self.add(a, self.add(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    /// Associativity on `samples` seeded random triples, for tables too
    /// large to check exhaustively.
    pub fn verify_associative_sampled(&self, samples: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let (a, b, c) = (
                rng.gen_range(0..self.order),
                rng.gen_range(0..self.order),
                rng.gen_range(0..self.order),
            );
            if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                return Err(Error::NotAssociative { a, b, c });
            }
        }
        Ok(())
    }

    /// Re-runs all axiom checks exhaustively.
    pub fn verify(&self) -> Result<()> {
        self.verify_identity()?;
        self.verify_associative_exhaustive()?;
        self.verify_commutative()
    }
}
