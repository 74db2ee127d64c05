//! Natural numbers extended by a single infinite value.

use core::fmt;
use core::ops::{Add, Mul};

/// A value in ℕ ∪ {∞}. `Infinite` absorbs addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    Finite(u64),
    Infinite,
}

impl Extended {
    pub const ZERO: Extended = Extended::Finite(0);
    pub const ONE: Extended = Extended::Finite(1);

    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Extended::Finite(n) => Some(n),
            Extended::Infinite => None,
        }
    }
}

impl Default for Extended {
    fn default() -> Self {
        Extended::ZERO
    }
}

impl From<u64> for Extended {
    fn from(n: u64) -> Self {
        Extended::Finite(n)
    }
}

impl Add for Extended {
    type Output = Extended;
    fn add(self, rhs: Extended) -> Extended {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => match a.checked_add(b) {
                Some(s) => Extended::Finite(s),
                None => Extended::Infinite,
            },
            _ => Extended::Infinite,
        }
    }
}

impl Mul for Extended {
    type Output = Extended;
    fn mul(self, rhs: Extended) -> Extended {
        match (self, rhs) {
            (Extended::Finite(0), _) | (_, Extended::Finite(0)) => Extended::ZERO,
            (Extended::Finite(a), Extended::Finite(b)) => match a.checked_mul(b) {
                Some(s) => Extended::Finite(s),
                None => Extended::Infinite,
            },
            _ => Extended::Infinite,
        }
    }
}

impl core::iter::Sum for Extended {
    fn sum<I: Iterator<Item = Extended>>(iter: I) -> Extended {
        iter.fold(Extended::ZERO, Add::add)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(n) => write!(f, "{n}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs() {
        assert_eq!(Extended::Finite(3) + Extended::Infinite, Extended::Infinite);
        assert_eq!(Extended::Infinite * Extended::ZERO, Extended::ZERO);
        assert!(Extended::Finite(u64::MAX) < Extended::Infinite);
        assert_eq!(Extended::Finite(u64::MAX) + Extended::ONE, Extended::Infinite);
    }
}
