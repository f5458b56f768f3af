use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A strict subset `I ⊊ [ℓ]` of the players, stored as a bitmask (bit `i` for
/// player `i`, players numbered from 0).
///
/// The mask doubles as the binary-digit index of the subset, so iterating
/// masks in ascending order gives the canonical block order used by the
/// reconstruction procedures.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex {
    mask: u32,
    players: u8,
}

/// Largest supported player count. Tables grow exponentially long before this.
pub const MAX_PLAYERS: usize = 16;

impl SubsetIndex {
    pub fn new(players: usize, members: &[usize]) -> Result<Self> {
        check_players(players)?;
        let mut mask = 0u32;
        for &m in members {
            if m >= players {
                return Err(Error::argument(format!("player {m} out of range for {players} players")));
            }
            mask |= 1 << m;
        }
        Self::from_mask(players, mask)
    }

    pub fn from_mask(players: usize, mask: u32) -> Result<Self> {
        check_players(players)?;
        let full = full_mask(players);
        if mask & !full != 0 {
            return Err(Error::argument(format!("mask {mask:#b} names players beyond {players}")));
        }
        if mask == full {
            return Err(Error::argument("subset must be a strict subset of the players"));
        }
        Ok(SubsetIndex { mask, players: players as u8 })
    }

    pub fn empty(players: usize) -> Self {
        Self::from_mask(players, 0).expect("empty set is always strict")
    }

    /// `[ℓ] ∖ {i}`.
    pub fn all_but(players: usize, i: usize) -> Result<Self> {
        check_players(players)?;
        if i >= players {
            return Err(Error::argument(format!("player {i} out of range")));
        }
        Self::from_mask(players, full_mask(players) & !(1 << i))
    }

    /// Every strict subset including `∅`, in ascending mask order.
    pub fn all_strict(players: usize) -> impl Iterator<Item = SubsetIndex> {
        let full = full_mask(players);
        (0..full).map(move |mask| SubsetIndex { mask, players: players as u8 })
    }

    /// Every non-empty strict subset, in ascending mask order.
    pub fn nonempty_strict(players: usize) -> impl Iterator<Item = SubsetIndex> {
        Self::all_strict(players).skip(1)
    }

    /// The complements of single players, `[ℓ]∖{i}` for each `i`.
    pub fn singles_complement(players: usize) -> impl Iterator<Item = SubsetIndex> {
        (0..players).map(move |i| SubsetIndex {
            mask: full_mask(players) & !(1 << i),
            players: players as u8,
        })
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn players(&self) -> usize {
        self.players as usize
    }

    pub fn contains(&self, player: usize) -> bool {
        player < self.players() && self.mask & (1 << player) != 0
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Sorted member list.
    pub fn members(&self) -> Vec<usize> {
        (0..self.players()).filter(|&i| self.contains(i)).collect()
    }

    /// Sorted list of players not in the subset. Never empty.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.players()).filter(|&i| !self.contains(i)).collect()
    }

    pub fn is_subset_of(&self, other: &SubsetIndex) -> bool {
        self.players == other.players && self.mask & !other.mask == 0
    }
}

fn check_players(players: usize) -> Result<()> {
    if players == 0 || players > MAX_PLAYERS {
        return Err(Error::argument(format!("player count {players} outside 1..={MAX_PLAYERS}")));
    }
    Ok(())
}

fn full_mask(players: usize) -> u32 {
    (1u32 << players) - 1
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, m) in self.members().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetIndex({self} of {})", self.players)
    }
}

/// Serialized as the sorted member list.
impl Serialize for SubsetIndex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}

/// Member lists only carry meaning together with a player count, so
/// deserialization goes through [`SubsetList`] in document types instead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetList(pub Vec<usize>);

impl SubsetList {
    pub fn resolve(&self, players: usize) -> Result<SubsetIndex> {
        SubsetIndex::new(players, &self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_is_rejected() {
        assert!(SubsetIndex::new(3, &[0, 1, 2]).is_err());
        assert!(SubsetIndex::new(3, &[3]).is_err());
        assert!(SubsetIndex::new(0, &[]).is_err());
    }

    #[test]
    fn canonical_order_and_members() {
        let all: Vec<_> = SubsetIndex::all_strict(3).map(|s| s.members()).collect();
        assert_eq!(all.len(), 7);
        assert_eq!(all[0], Vec::<usize>::new());
        assert_eq!(all[3], vec![0, 1]);
        let s = SubsetIndex::new(3, &[2, 0, 0]).unwrap();
        assert_eq!(s.members(), vec![0, 2]);
        assert_eq!(s.complement(), vec![1]);
        assert_eq!(s.to_string(), "{0,2}");
        assert_eq!(SubsetIndex::nonempty_strict(2).count(), 2);
        let sc: Vec<_> = SubsetIndex::singles_complement(3).map(|s| s.members()).collect();
        assert_eq!(sc, vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
    }
}
