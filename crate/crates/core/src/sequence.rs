//! Skolem-type sequences and their position-pair representation.
//!
//! A Skolem-type sequence of order `n` places each element `i` of a multiset
//! `D` of positive integers into two positions exactly `i` apart; positions
//! not used by any element hold a *hole* (rendered as `0` in text form). The
//! classic kinds are captured by [`SequenceKind`]: Skolem sequences
//! (`D = {1..n}`, no holes), hooked Skolem sequences (one hole at position
//! `2n`), and (hooked) Langford sequences (`D = {d..d+n-1}`).
//!
//! The pair view is the bridge to block constructions: a valid sequence is
//! equivalent to the collection of pairs `(a_i, b_i)` with `b_i - a_i = i`.
//! All positions are 1-indexed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// One slot of a sequence: either a positive value or a hole.
///
/// Holes are explicit in the data model; the textual rendering writes them
/// as `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolSlot {
    Value(u32),
    Hole,
}

impl SymbolSlot {
    pub fn value(self) -> Option<u32> {
        match self {
            SymbolSlot::Value(v) => Some(v),
            SymbolSlot::Hole => None,
        }
    }

    pub fn is_hole(self) -> bool {
        matches!(self, SymbolSlot::Hole)
    }
}

/// Errors from sequence validation and pair extraction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("sequence has length {actual}, expected {expected}")]
    WrongLength { expected: usize, actual: usize },
    #[error("hole misplaced at position {0}")]
    MisplacedHole(u32),
    #[error("difference {0} is not realized by the sequence")]
    MissingDifference(u32),
    #[error("position {0} used by more than one pair")]
    PositionReuse(u32),
    #[error("occurrences of {0} are not spaced {0} apart")]
    PairDistanceMismatch(u32),
    #[error("value at position {0} cannot be paired")]
    UnpairableValue(u32),
    #[error("value 0 is not a valid entry; holes are separate from values")]
    ZeroValue,
}

/// A sequence of slots, optionally with a declared difference multiset.
///
/// Entries are stored in order; position `p` (1-indexed) is `entries[p-1]`.
/// When no multiset is declared, `D` is derived from the entries themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkolemTypeSequence {
    entries: Vec<SymbolSlot>,
    declared: Option<BTreeMap<u32, usize>>,
}

impl SkolemTypeSequence {
    pub fn new(entries: Vec<SymbolSlot>) -> Self {
        SkolemTypeSequence {
            entries,
            declared: None,
        }
    }

    /// A sequence with a declared difference multiset `D` (value -> multiplicity).
    pub fn with_multiset(entries: Vec<SymbolSlot>, declared: BTreeMap<u32, usize>) -> Self {
        SkolemTypeSequence {
            entries,
            declared: Some(declared),
        }
    }

    /// Build from plain integers where `0` denotes a hole.
    pub fn from_values(values: &[u32]) -> Self {
        let entries = values
            .iter()
            .map(|&v| {
                if v == 0 {
                    SymbolSlot::Hole
                } else {
                    SymbolSlot::Value(v)
                }
            })
            .collect();
        SkolemTypeSequence::new(entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[SymbolSlot] {
        &self.entries
    }

    /// Slot at 1-indexed position `p`.
    pub fn slot(&self, p: u32) -> Option<SymbolSlot> {
        self.entries.get(p as usize - 1).copied()
    }

    pub fn declared_multiset(&self) -> Option<&BTreeMap<u32, usize>> {
        self.declared.as_ref()
    }
}

impl fmt::Display for SkolemTypeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, slot) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            match slot {
                SymbolSlot::Value(v) => write!(f, "{v}")?,
                SymbolSlot::Hole => f.write_str("0")?,
            }
        }
        Ok(())
    }
}

impl FromStr for SkolemTypeSequence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, SequenceError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(SkolemTypeSequence::new(Vec::new()));
        }
        let mut entries = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let v: u32 = tok.parse().map_err(|_| SequenceError::ZeroValue)?;
            entries.push(if v == 0 {
                SymbolSlot::Hole
            } else {
                SymbolSlot::Value(v)
            });
        }
        Ok(SkolemTypeSequence::new(entries))
    }
}

/// The named families of Skolem-type sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    /// Order n: length 2n, D = {1..n}, no holes.
    Skolem(u32),
    /// Order n: length 2n+1 with the single hole at position 2n.
    HookedSkolem(u32),
    /// Defect d, length parameter n: length 2n, D = {d..d+n-1}.
    Langford { defect: u32, order: u32 },
    /// Hooked variant: length 2n+1, hole at position 2n.
    HookedLangford { defect: u32, order: u32 },
    /// No length constraint; D is declared or derived from the entries.
    General,
}

impl SequenceKind {
    /// Total slot count, when the kind fixes it.
    pub fn expected_len(self) -> Option<usize> {
        match self {
            SequenceKind::Skolem(n) => Some(2 * n as usize),
            SequenceKind::HookedSkolem(n) => Some(2 * n as usize + 1),
            SequenceKind::Langford { order, .. } => Some(2 * order as usize),
            SequenceKind::HookedLangford { order, .. } => Some(2 * order as usize + 1),
            SequenceKind::General => None,
        }
    }

    /// The 1-indexed positions that must hold holes (empty for non-hooked kinds).
    pub fn hole_positions(self) -> Vec<u32> {
        match self {
            SequenceKind::HookedSkolem(n) => vec![2 * n],
            SequenceKind::HookedLangford { order, .. } => vec![2 * order],
            _ => Vec::new(),
        }
    }

    /// The difference multiset `D` required by the kind, if fixed.
    pub fn difference_multiset(self) -> Option<BTreeMap<u32, usize>> {
        let range = match self {
            SequenceKind::Skolem(n) | SequenceKind::HookedSkolem(n) => (1, n),
            SequenceKind::Langford { defect, order }
            | SequenceKind::HookedLangford { defect, order } => (defect, defect + order - 1),
            SequenceKind::General => return None,
        };
        Some((range.0..=range.1).map(|i| (i, 1)).collect())
    }

    pub fn is_hooked(self) -> bool {
        matches!(
            self,
            SequenceKind::HookedSkolem(_) | SequenceKind::HookedLangford { .. }
        )
    }
}

/// A pair of positions `(first, second)` realizing `second - first = difference`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    pub difference: u32,
    pub first: u32,
    pub second: u32,
}

impl Pair {
    pub fn new(difference: u32, first: u32, second: u32) -> Self {
        Pair {
            difference,
            first,
            second,
        }
    }
}

/// The pairs of a sequence, sorted by (difference, first position).
///
/// Distinct pairs never share a position. Several pairs may carry the same
/// difference; that happens only for general Skolem-type sequences whose `D`
/// is a proper multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSet {
    pairs: Vec<Pair>,
}

impl PairSet {
    pub fn empty() -> Self {
        PairSet { pairs: Vec::new() }
    }

    /// Build from raw pairs, checking distances and position disjointness.
    pub fn from_pairs(mut pairs: Vec<Pair>) -> Result<Self, SequenceError> {
        for p in &pairs {
            if p.first == 0 || p.second <= p.first || p.second - p.first != p.difference {
                return Err(SequenceError::PairDistanceMismatch(p.difference));
            }
        }
        let mut positions: Vec<u32> = pairs.iter().flat_map(|p| [p.first, p.second]).collect();
        positions.sort_unstable();
        for w in positions.windows(2) {
            if w[0] == w[1] {
                return Err(SequenceError::PositionReuse(w[0]));
            }
        }
        pairs.sort_unstable();
        Ok(PairSet { pairs })
    }

    /// Number of pairs (the order of the underlying sequence, with multiplicity).
    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Pair> {
        self.pairs.iter()
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// The pair for difference `i`, when it is unique.
    pub fn pair_for(&self, difference: u32) -> Option<Pair> {
        let mut it = self.pairs.iter().filter(|p| p.difference == difference);
        let hit = it.next().copied();
        if it.next().is_some() {
            return None;
        }
        hit
    }

    /// The difference multiset realized by the pairs.
    pub fn difference_multiset(&self) -> BTreeMap<u32, usize> {
        let mut d = BTreeMap::new();
        for p in &self.pairs {
            *d.entry(p.difference).or_insert(0) += 1;
        }
        d
    }

    pub fn max_position(&self) -> u32 {
        self.pairs.iter().map(|p| p.second).max().unwrap_or(0)
    }
}

impl fmt::Display for PairSet {
    /// Renders like `{1:(1,2), 2:(14,16)}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.pairs.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:({},{})", p.difference, p.first, p.second)?;
        }
        f.write_str("}")
    }
}

/// Check that a sequence satisfies the invariants of `kind` and return its pairs.
///
/// For sized kinds this verifies length, hole placement, and that each
/// difference of `D` is realized exactly once. For [`SequenceKind::General`]
/// the multiset is the declared one (if any) or the one derived greedily from
/// the entries.
pub fn validate(seq: &SkolemTypeSequence, kind: SequenceKind) -> Result<PairSet, SequenceError> {
    if let Some(expected) = kind.expected_len() {
        if seq.len() != expected {
            return Err(SequenceError::WrongLength {
                expected,
                actual: seq.len(),
            });
        }
    }
    let required_holes = kind.hole_positions();
    if kind != SequenceKind::General {
        for (k, slot) in seq.entries().iter().enumerate() {
            let pos = k as u32 + 1;
            let must_hole = required_holes.contains(&pos);
            if slot.is_hole() != must_hole {
                return Err(SequenceError::MisplacedHole(pos));
            }
        }
    }

    let multiset = match kind.difference_multiset() {
        Some(d) => d,
        None => match seq.declared_multiset() {
            Some(d) => d.clone(),
            None => return extract_pairs(seq),
        },
    };

    let pairs = pair_up(seq, &multiset)?;
    PairSet::from_pairs(pairs)
}

/// Pair every value of `multiset` greedily and insist nothing is left over.
fn pair_up(
    seq: &SkolemTypeSequence,
    multiset: &BTreeMap<u32, usize>,
) -> Result<Vec<Pair>, SequenceError> {
    let mut used = vec![false; seq.len()];
    let mut pairs = Vec::new();
    for (&value, &mult) in multiset {
        if value == 0 {
            return Err(SequenceError::ZeroValue);
        }
        let occurrences: Vec<usize> = seq
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.value() == Some(value))
            .map(|(k, _)| k)
            .collect();
        if occurrences.len() < 2 * mult {
            return Err(SequenceError::MissingDifference(value));
        }
        // The leftmost unpaired occurrence can only pair to its right.
        let mut unpaired = occurrences.clone();
        for _ in 0..mult {
            let first = unpaired[0];
            let partner = first + value as usize;
            if !unpaired.contains(&partner) {
                return Err(SequenceError::PairDistanceMismatch(value));
            }
            unpaired.retain(|&k| k != first && k != partner);
            used[first] = true;
            used[partner] = true;
            pairs.push(Pair::new(value, first as u32 + 1, partner as u32 + 1));
        }
        if !unpaired.is_empty() {
            return Err(SequenceError::PairDistanceMismatch(value));
        }
    }
    // Every remaining occupied slot holds a value outside the multiset.
    for (k, slot) in seq.entries().iter().enumerate() {
        if !slot.is_hole() && !used[k] {
            return Err(SequenceError::UnpairableValue(k as u32 + 1));
        }
    }
    Ok(pairs)
}

/// Extract pairs greedily, left to right, without a declared kind.
///
/// The first unpaired occurrence of value `i` at position `j` must be matched
/// by another `i` at position `j + i`; anything else is unpairable. The result
/// is deterministic and independent of how `D` would be listed.
pub fn extract_pairs(seq: &SkolemTypeSequence) -> Result<PairSet, SequenceError> {
    let mut used = vec![false; seq.len()];
    let mut pairs = Vec::new();
    for (k, slot) in seq.entries().iter().enumerate() {
        if used[k] {
            continue;
        }
        let value = match slot {
            SymbolSlot::Hole => continue,
            SymbolSlot::Value(v) => *v,
        };
        let partner = k + value as usize;
        if partner >= seq.len()
            || used[partner]
            || seq.entries()[partner].value() != Some(value)
        {
            return Err(SequenceError::UnpairableValue(k as u32 + 1));
        }
        used[k] = true;
        used[partner] = true;
        pairs.push(Pair::new(value, k as u32 + 1, partner as u32 + 1));
    }
    PairSet::from_pairs(pairs)
}

/// True when no position pair occurs in more than one of the given sets.
///
/// The sets are compared as collections of `(first, second)` position pairs,
/// the sense in which the disjoint-sequence construction needs them distinct.
pub fn are_position_disjoint(sets: &[PairSet]) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    for set in sets {
        for p in set.iter() {
            if !seen.insert((p.first, p.second)) {
                return false;
            }
        }
    }
    true
}
