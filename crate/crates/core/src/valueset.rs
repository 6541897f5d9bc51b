use std::fmt;

/// Largest carrier a [`ValueSet`] can hold.
pub const MAX_ORDER: usize = 64;

/// A subset of the carrier `{0, .., order-1}` stored as a 64-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValueSet(u64);

impl ValueSet {
    pub const EMPTY: ValueSet = ValueSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        ValueSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn singleton(value: usize) -> Self {
        debug_assert!(value < MAX_ORDER);
        ValueSet(1u64 << value)
    }

    /// Every element of a carrier of the given order.
    #[inline]
    pub fn full(order: usize) -> Self {
        if order >= MAX_ORDER {
            ValueSet(u64::MAX)
        } else {
            ValueSet((1u64 << order) - 1)
        }
    }

    pub fn from_values<I: IntoIterator<Item = usize>>(values: I) -> Self {
        values.into_iter().fold(Self::EMPTY, |s, v| s.with(v))
    }

    #[inline]
    pub fn with(self, value: usize) -> Self {
        ValueSet(self.0 | (1u64 << value))
    }

    #[inline]
    pub fn insert(&mut self, value: usize) {
        self.0 |= 1u64 << value;
    }

    #[inline]
    pub fn contains(self, value: usize) -> bool {
        value < MAX_ORDER && self.0 & (1u64 << value) != 0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        ValueSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        ValueSet(self.0 & other.0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// The single element, if the set has exactly one.
    pub fn single(self) -> Option<usize> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest element plus one (0 for the empty set).
    pub fn span(self) -> usize {
        MAX_ORDER - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

impl IntoIterator for ValueSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for ValueSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_values(iter)
    }
}

/// Ascending iterator over the elements of a [`ValueSet`].
#[derive(Clone)]
pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Table cell notation: `-` when empty, otherwise ascending values joined by `*`.
impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
