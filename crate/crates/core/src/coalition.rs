//! Coalitions as bitmasks over 0-indexed players.

use std::fmt;

/// A set of players; bit `i` is set iff player `i` is a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub const fn from_mask(mask: u32) -> Self {
        Coalition(mask)
    }

    /// The coalition of all `n` players.
    pub fn grand(n: usize) -> Self {
        debug_assert!(n < 32);
        Coalition((1u32 << n) - 1)
    }

    pub fn singleton(player: usize) -> Self {
        Coalition(1 << player)
    }

    pub fn from_players<I: IntoIterator<Item = usize>>(players: I) -> Self {
        players
            .into_iter()
            .fold(Coalition::EMPTY, |c, p| c.with(p))
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, player: usize) -> bool {
        self.0 & (1 << player) != 0
    }

    #[must_use]
    pub const fn with(self, player: usize) -> Self {
        Coalition(self.0 | (1 << player))
    }

    #[must_use]
    pub const fn without(self, player: usize) -> Self {
        Coalition(self.0 & !(1 << player))
    }

    #[must_use]
    pub const fn union(self, other: Coalition) -> Self {
        Coalition(self.0 | other.0)
    }

    pub const fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    /// Lowest-index member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Highest-index member.
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn members(self) -> Members {
        Members(self.0)
    }

    /// Every subset, including the empty set and `self`, in ascending mask order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            full: self.0,
            next: Some(0),
        }
    }

    /// Every coalition over `n` players, in ascending mask order.
    pub fn all(n: usize) -> impl Iterator<Item = Coalition> {
        (0..1u32 << n).map(Coalition)
    }

    /// Coalitions over `n` players grouped by size: `result[s]` holds all
    /// coalitions of size `s` in ascending mask order.
    pub fn by_size(n: usize) -> Vec<Vec<Coalition>> {
        let mut levels = vec![Vec::new(); n + 1];
        for c in Coalition::all(n) {
            levels[c.len()].push(c);
        }
        levels
    }
}

impl fmt::Display for Coalition {
    /// 1-indexed set notation, e.g. `{1,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.members().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone)]
pub struct Members(u32);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// Ascending enumeration of the submasks of a mask.
#[derive(Debug, Clone)]
pub struct Subsets {
    full: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = Coalition;

    fn next(&mut self) -> Option<Coalition> {
        let cur = self.next?;
        // (cur - full) & full steps to the next larger submask.
        self.next = if cur == self.full {
            None
        } else {
            Some(cur.wrapping_sub(self.full) & self.full)
        };
        Some(Coalition(cur))
    }
}
