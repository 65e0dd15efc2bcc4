//! Base blocks, cyclic development, and the block-level checks.
//!
//! A [`Design`] is a list of base blocks over `Z_v` with a replication number
//! λ. Developing it applies every cyclic shift to every base block; an orbit
//! has length `v` except for the short orbit `{x, x+v/3, x+2v/3}` (when
//! `3 | v`), which closes after `v/3` shifts. Coverage, simplicity, and
//! short-orbit checks all operate on the developed multiset and report
//! deterministic witnesses (lexicographically smallest).
//!
//! All check functions are pure; values are immutable once built and safe to
//! share across threads.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sequence::PairSet;

/// Version tag for the design and report file formats.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("block {0:?} is not valid modulo {1}")]
    InvalidBlock([u32; 3], u32),
    #[error("order {0} must be odd")]
    EvenOrder(u32),
    #[error("order {0} is too small")]
    OrderTooSmall(u32),
    #[error("replication must be at least 1")]
    ZeroLambda,
    #[error("pair set is not a valid order-{0} input: {1}")]
    InvalidPairSet(u32, String),
    #[error("unsupported file format {0}")]
    UnsupportedFormat(u32),
    #[error("malformed design file: {0}")]
    Malformed(String),
}

/// A block of three distinct residues, stored sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseBlock([u32; 3]);

impl BaseBlock {
    pub fn new(elements: [u32; 3], v: u32) -> Result<Self, DesignError> {
        let mut e = elements;
        e.sort_unstable();
        if e[0] == e[1] || e[1] == e[2] || e[2] >= v {
            return Err(DesignError::InvalidBlock(elements, v));
        }
        Ok(BaseBlock(e))
    }

    pub fn elements(&self) -> [u32; 3] {
        self.0
    }

    /// The cyclic shift of this block by `k`, canonicalized.
    pub fn shifted(&self, k: u32, v: u32) -> [u32; 3] {
        canonical_triple([
            (self.0[0] + k) % v,
            (self.0[1] + k) % v,
            (self.0[2] + k) % v,
        ])
    }

    /// True for `{x, x+v/3, x+2v/3}`, the block whose orbit has length `v/3`.
    pub fn is_short_orbit(&self, v: u32) -> bool {
        v.is_multiple_of(3) && self.0[1] - self.0[0] == v / 3 && self.0[2] - self.0[1] == v / 3
    }

    /// Orbit length under development: `v`, or `v/3` for the short orbit.
    pub fn orbit_length(&self, v: u32) -> u32 {
        if self.is_short_orbit(v) {
            v / 3
        } else {
            v
        }
    }
}

impl fmt::Display for BaseBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

fn canonical_triple(mut t: [u32; 3]) -> [u32; 3] {
    t.sort_unstable();
    t
}

/// How a design was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// The difference blocks `{0, a, v-a}` for `v = 1, 5 (mod 6)`.
    Kramer,
    /// Skolem-sequence construction; `residue` is `n mod 4`, `r` the table parameter.
    SkolemCase { residue: u8, r: i64 },
    /// Hooked-Skolem construction.
    HookedCase { residue: u8, r: i64 },
    Custom(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Kramer => f.write_str("kramer"),
            Provenance::SkolemCase { residue, r } => write!(f, "skolem(residue={residue},r={r})"),
            Provenance::HookedCase { residue, r } => write!(f, "hooked(residue={residue},r={r})"),
            Provenance::Custom(s) => f.write_str(s),
        }
    }
}

impl FromStr for Provenance {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "kramer" {
            return Ok(Provenance::Kramer);
        }
        for (prefix, hooked) in [("skolem(residue=", false), ("hooked(residue=", true)] {
            if let Some(rest) = s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')) {
                if let Some((res, r)) = rest.split_once(",r=") {
                    if let (Ok(residue), Ok(r)) = (res.parse(), r.parse()) {
                        return Ok(if hooked {
                            Provenance::HookedCase { residue, r }
                        } else {
                            Provenance::SkolemCase { residue, r }
                        });
                    }
                }
            }
        }
        Ok(Provenance::Custom(s.to_string()))
    }
}

/// A cyclic design given by base blocks over `Z_v`.
///
/// Base blocks may repeat: a λ-fold design that uses the short orbit needs it
/// listed λ times for the developed multiset to cover the `v/3` difference
/// λ-fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    pub v: u32,
    pub lambda: u32,
    pub base_blocks: Vec<BaseBlock>,
    pub provenance: Provenance,
}

impl Design {
    pub fn new(
        v: u32,
        lambda: u32,
        base_blocks: Vec<BaseBlock>,
        provenance: Provenance,
    ) -> Result<Self, DesignError> {
        if v.is_multiple_of(2) {
            return Err(DesignError::EvenOrder(v));
        }
        if v < 3 {
            return Err(DesignError::OrderTooSmall(v));
        }
        if lambda == 0 {
            return Err(DesignError::ZeroLambda);
        }
        for b in &base_blocks {
            if b.elements()[2] >= v {
                return Err(DesignError::InvalidBlock(b.elements(), v));
            }
        }
        Ok(Design {
            v,
            lambda,
            base_blocks,
            provenance,
        })
    }

    /// Canonical JSON: sorted keys, no insignificant whitespace, one trailing
    /// newline. Byte-stable under read/write round trips.
    pub fn to_canonical_json(&self) -> String {
        let file = DesignFile {
            base_blocks: self.base_blocks.iter().map(|b| b.elements()).collect(),
            format: FORMAT_VERSION,
            lambda: self.lambda,
            provenance: self.provenance.to_string(),
            v: self.v,
        };
        let mut s = serde_json::to_string(&file).expect("design serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, DesignError> {
        let file: DesignFile =
            serde_json::from_str(text).map_err(|e| DesignError::Malformed(e.to_string()))?;
        if file.format != FORMAT_VERSION {
            return Err(DesignError::UnsupportedFormat(file.format));
        }
        let blocks = file
            .base_blocks
            .iter()
            .map(|&b| BaseBlock::new(b, file.v))
            .collect::<Result<Vec<_>, _>>()?;
        let provenance = file.provenance.parse().expect("provenance parse is total");
        Design::new(file.v, file.lambda, blocks, provenance)
    }
}

/// On-disk shape of a design; field order gives sorted JSON keys.
#[derive(Serialize, Deserialize)]
struct DesignFile {
    base_blocks: Vec<[u32; 3]>,
    format: u32,
    lambda: u32,
    provenance: String,
    v: u32,
}

/// Which base block and shift a developed block came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BlockOrigin {
    pub base_index: usize,
    pub shift: u32,
}

/// The full developed block multiset of a design, with per-block origins.
#[derive(Debug, Clone)]
pub struct DevelopedSystem {
    pub v: u32,
    blocks: Vec<[u32; 3]>,
    origins: Vec<BlockOrigin>,
}

impl DevelopedSystem {
    pub fn blocks(&self) -> &[[u32; 3]] {
        &self.blocks
    }

    pub fn origins(&self) -> &[BlockOrigin] {
        &self.origins
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// Develop a design: all cyclic shifts of every base block, short orbits
/// shifted only `v/3` times so the multiset counts are exact.
pub fn develop(design: &Design) -> DevelopedSystem {
    let v = design.v;
    let mut blocks = Vec::new();
    let mut origins = Vec::new();
    for (base_index, block) in design.base_blocks.iter().enumerate() {
        for shift in 0..block.orbit_length(v) {
            blocks.push(block.shifted(shift, v));
            origins.push(BlockOrigin { base_index, shift });
        }
    }
    DevelopedSystem { v, blocks, origins }
}

/// Construct the `TS₃(2n+1)` base blocks `{0, i, b_i}` from Skolem pairs.
pub fn blocks_from_skolem(pairs: &PairSet, n: u32) -> Result<Design, DesignError> {
    check_construction_pairs(pairs, n, false)?;
    let v = 2 * n + 1;
    let blocks = pairs
        .iter()
        .map(|p| BaseBlock::new([0, p.difference, p.second], v))
        .collect::<Result<Vec<_>, _>>()?;
    Design::new(v, 3, blocks, Provenance::Custom(format!("skolem-order-{n}")))
}

/// Construct the `TS₃(2n+1)` base blocks `{0, i, b_i + 1}` from hooked pairs.
pub fn blocks_from_hooked(pairs: &PairSet, n: u32) -> Result<Design, DesignError> {
    check_construction_pairs(pairs, n, true)?;
    let v = 2 * n + 1;
    let blocks = pairs
        .iter()
        .map(|p| BaseBlock::new([0, p.difference, (p.second + 1) % v], v))
        .collect::<Result<Vec<_>, _>>()?;
    Design::new(v, 3, blocks, Provenance::Custom(format!("hooked-order-{n}")))
}

fn check_construction_pairs(pairs: &PairSet, n: u32, hooked: bool) -> Result<(), DesignError> {
    let fail = |msg: String| DesignError::InvalidPairSet(n, msg);
    if pairs.order() != n as usize {
        return Err(fail(format!("{} pairs, expected {n}", pairs.order())));
    }
    let d = pairs.difference_multiset();
    for i in 1..=n {
        if d.get(&i) != Some(&1) {
            return Err(fail(format!("difference {i} not realized exactly once")));
        }
    }
    let max = if hooked { 2 * n + 1 } else { 2 * n };
    if pairs.max_position() > max {
        return Err(fail(format!("position beyond {max}")));
    }
    if hooked {
        let hook = 2 * n;
        if pairs.iter().any(|p| p.first == hook || p.second == hook) {
            return Err(fail(format!("hook position {hook} is occupied")));
        }
    }
    Ok(())
}

/// Outcome of the pair-coverage check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageCheck {
    /// First pair (lexicographic) whose count differs from λ, with its count.
    pub violation: Option<(u32, u32, u32)>,
}

impl CoverageCheck {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Count, for each unordered pair of `Z_v`, how many blocks contain it.
pub fn pair_counts(v: u32, blocks: &[[u32; 3]]) -> BTreeMap<(u32, u32), u32> {
    let n = v as usize;
    let mut counts = vec![0u32; n * n];
    for b in blocks {
        for (x, y) in [(b[0], b[1]), (b[0], b[2]), (b[1], b[2])] {
            counts[x as usize * n + y as usize] += 1;
        }
    }
    let mut map = BTreeMap::new();
    for x in 0..v {
        for y in (x + 1)..v {
            map.insert((x, y), counts[x as usize * n + y as usize]);
        }
    }
    map
}

/// Check that every unordered pair of `Z_v` occurs in exactly `lambda` blocks.
pub fn check_coverage_blocks(v: u32, lambda: u32, blocks: &[[u32; 3]]) -> CoverageCheck {
    let n = v as usize;
    let mut counts = vec![0u32; n * n];
    for b in blocks {
        for (x, y) in [(b[0], b[1]), (b[0], b[2]), (b[1], b[2])] {
            counts[x as usize * n + y as usize] += 1;
        }
    }
    for x in 0..v {
        for y in (x + 1)..v {
            let c = counts[x as usize * n + y as usize];
            if c != lambda {
                return CoverageCheck {
                    violation: Some((x, y, c)),
                };
            }
        }
    }
    CoverageCheck { violation: None }
}

/// Develop and check λ-coverage of a design.
pub fn check_coverage(design: &Design) -> CoverageCheck {
    let system = develop(design);
    check_coverage_blocks(design.v, design.lambda, system.blocks())
}

/// A repeated developed block together with two of its origins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepeatedBlock {
    pub block: [u32; 3],
    pub first: BlockOrigin,
    pub second: BlockOrigin,
}

/// Outcome of the simplicity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityCheck {
    pub witness: Option<RepeatedBlock>,
}

impl SimplicityCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Check that the developed multiset has no repeated blocks.
///
/// Copies of the *same short-orbit base block* are the one sanctioned
/// repetition: a λ-fold design carries the short orbit λ times by
/// construction, and that multiplicity is reported by the short-orbit check
/// rather than here. Any duplicate between distinct orbits fails, with the
/// lexicographically smallest duplicated triple as witness.
pub fn check_simple(design: &Design) -> SimplicityCheck {
    let system = develop(design);
    let mut order: Vec<usize> = (0..system.block_count()).collect();
    order.sort_unstable_by_key(|&k| (system.blocks()[k], system.origins()[k]));
    for w in order.windows(2) {
        let (i, j) = (w[0], w[1]);
        if system.blocks()[i] != system.blocks()[j] {
            continue;
        }
        let oi = system.origins()[i];
        let oj = system.origins()[j];
        let bi = design.base_blocks[oi.base_index];
        let bj = design.base_blocks[oj.base_index];
        if bi == bj && bi.is_short_orbit(design.v) {
            continue;
        }
        return SimplicityCheck {
            witness: Some(RepeatedBlock {
                block: system.blocks()[i],
                first: oi.min(oj),
                second: oi.max(oj),
            }),
        };
    }
    SimplicityCheck { witness: None }
}

/// Outcome of the short-orbit scan: the base blocks of orbit length `v/3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortOrbitCheck {
    /// Indexes into `base_blocks`, with the blocks themselves.
    pub short_blocks: Vec<(usize, BaseBlock)>,
}

impl ShortOrbitCheck {
    pub fn none_found(&self) -> bool {
        self.short_blocks.is_empty()
    }
}

pub fn check_short_orbits(design: &Design) -> ShortOrbitCheck {
    let short_blocks = design
        .base_blocks
        .iter()
        .enumerate()
        .filter(|(_, b)| b.is_short_orbit(design.v))
        .map(|(k, b)| (k, *b))
        .collect();
    ShortOrbitCheck { short_blocks }
}

/// The three pairwise differences of a block, folded into `1..=v/2` and sorted.
pub fn difference_triple(block: &BaseBlock, v: u32) -> [u32; 3] {
    let e = block.elements();
    let fold = |x: u32, y: u32| {
        let d = y.abs_diff(x);
        d.min(v - d)
    };
    canonical_triple([fold(e[0], e[1]), fold(e[1], e[2]), fold(e[0], e[2])])
}
