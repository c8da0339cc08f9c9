//! Fixed-width bit sets over point (or atom) indices.
//!
//! Every frame handled by this crate has at most [`MAX_POINTS`] points, so a
//! subset of points fits into a single machine word. Both [`PointSet`] (a set
//! of frame points) and [`Element`] (an element of a finite closure algebra,
//! i.e. a set of atoms) are thin newtypes over that word.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub};

/// Largest number of points a frame may have.
pub const MAX_POINTS: usize = 64;

/// Mask with the lowest `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Ascending iterator over the set bits of a word.
#[derive(Clone, Debug)]
pub struct Ones(u64);

impl Iterator for Ones {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Ones {}

macro_rules! bitset64 {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub u64);

        impl $name {
            pub const EMPTY: $name = $name(0);

            #[inline]
            pub fn full(n: usize) -> Self {
                $name(full_mask(n))
            }

            #[inline]
            pub fn singleton(i: usize) -> Self {
                $name(1u64 << i)
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
                $name(indices.into_iter().fold(0u64, |acc, i| acc | (1u64 << i)))
            }

            #[inline]
            pub fn bits(self) -> u64 {
                self.0
            }

            #[inline]
            pub fn contains(self, i: usize) -> bool {
                i < 64 && self.0 & (1u64 << i) != 0
            }

            #[inline]
            pub fn insert(&mut self, i: usize) {
                self.0 |= 1u64 << i;
            }

            #[inline]
            pub fn remove(&mut self, i: usize) {
                self.0 &= !(1u64 << i);
            }

            #[inline]
            pub fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            #[inline]
            pub fn is_empty(self) -> bool {
                self.0 == 0
            }

            #[inline]
            pub fn is_subset(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            #[inline]
            pub fn intersects(self, other: Self) -> bool {
                self.0 & other.0 != 0
            }

            /// Complement relative to the universe `0..n`.
            #[inline]
            pub fn complement(self, n: usize) -> Self {
                $name(!self.0 & full_mask(n))
            }

            /// Least index in the set.
            #[inline]
            pub fn first(self) -> Option<usize> {
                (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
            }

            #[inline]
            pub fn iter(self) -> Ones {
                Ones(self.0)
            }
        }

        impl BitOr for $name {
            type Output = $name;
            #[inline]
            fn bitor(self, rhs: $name) -> $name {
                $name(self.0 | rhs.0)
            }
        }

        impl BitOrAssign for $name {
            #[inline]
            fn bitor_assign(&mut self, rhs: $name) {
                self.0 |= rhs.0;
            }
        }

        impl BitAnd for $name {
            type Output = $name;
            #[inline]
            fn bitand(self, rhs: $name) -> $name {
                $name(self.0 & rhs.0)
            }
        }

        impl BitAndAssign for $name {
            #[inline]
            fn bitand_assign(&mut self, rhs: $name) {
                self.0 &= rhs.0;
            }
        }

        impl Sub for $name {
            type Output = $name;
            #[inline]
            fn sub(self, rhs: $name) -> $name {
                $name(self.0 & !rhs.0)
            }
        }

        impl IntoIterator for $name {
            type Item = usize;
            type IntoIter = Ones;
            fn into_iter(self) -> Ones {
                Ones(self.0)
            }
        }

        impl FromIterator<usize> for $name {
            fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
                $name::from_indices(iter)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }
    };
}

bitset64!(
    /// A set of points of a fixed frame.
    PointSet
);

bitset64!(
    /// An element of a finite closure algebra: the set of atoms below it.
    Element
);

impl From<PointSet> for Element {
    fn from(s: PointSet) -> Element {
        Element(s.0)
    }
}

impl From<Element> for PointSet {
    fn from(e: Element) -> PointSet {
        PointSet(e.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_is_ascending() {
        let s = PointSet::from_indices([5, 1, 63, 0]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 1, 5, 63]);
        assert_eq!(s.len(), 4);
        assert_eq!(s.first(), Some(0));
    }

    #[test]
    fn complement_stays_in_universe() {
        let s = PointSet::from_indices([0, 2]);
        assert_eq!(s.complement(4), PointSet::from_indices([1, 3]));
        assert_eq!(PointSet::full(64).complement(64), PointSet::EMPTY);
    }

    #[test]
    fn subset_and_difference() {
        let a = Element::from_indices([1, 2]);
        let b = Element::from_indices([1, 2, 3]);
        assert!(a.is_subset(b));
        assert!(!b.is_subset(a));
        assert_eq!(b - a, Element::singleton(3));
    }
}
