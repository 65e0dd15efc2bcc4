//! The fixed construction tables and the sequence builders on top of them.
//!
//! Four residue classes of the order `n` (mod 4) each come with a table of
//! rows; a row gives the positions `(a, b)` and difference `i = b - a` as
//! affine forms in the case parameter `r` and a per-row index `j` ranging
//! over `0..=j_max(r)`. Rows without a `j` column contribute a single pair.
//! Together with a fixed tail (the pairs for differences 1 and 2, plus 3 in
//! the `4k` case) the rows assemble into a Skolem sequence (`n = 0, 1` mod 4)
//! or hooked Skolem sequence (`n = 2, 3` mod 4) of order `n`.
//!
//! The tables are literal data, transcribed once; a checksum test pins the
//! audit rendering against accidental edits. Small orders 7, 8, and 12 are
//! below the tables' range and use fixed sequences.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::design::BaseBlock;
use crate::sequence::{
    validate, Pair, PairSet, SequenceError, SequenceKind, SkolemTypeSequence, SymbolSlot,
};

/// An exact integer form `c0 + cr*r + cj*j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AffineForm {
    pub c0: i64,
    pub cr: i64,
    pub cj: i64,
}

impl AffineForm {
    pub const fn new(c0: i64, cr: i64, cj: i64) -> Self {
        AffineForm { c0, cr, cj }
    }

    pub fn eval(&self, r: i64, j: i64) -> i64 {
        self.c0 + self.cr * r + self.cj * j
    }

    /// Evaluate a form that does not involve `j`.
    pub fn eval_r(&self, r: i64) -> i64 {
        debug_assert_eq!(self.cj, 0);
        self.c0 + self.cr * r
    }

    pub fn sub(&self, other: &AffineForm) -> AffineForm {
        AffineForm::new(self.c0 - other.c0, self.cr - other.cr, self.cj - other.cj)
    }
}

impl fmt::Display for AffineForm {
    /// Renders like `2r+3-j` with terms ordered r, constant, j.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (coeff, var) in [(self.cr, Some("r")), (self.c0, None), (self.cj, Some("j"))] {
            if coeff == 0 {
                continue;
            }
            if wrote {
                f.write_str(if coeff > 0 { "+" } else { "-" })?;
            } else if coeff < 0 {
                f.write_str("-")?;
            }
            let mag = coeff.abs();
            match var {
                Some(v) if mag == 1 => write!(f, "{v}")?,
                Some(v) => write!(f, "{mag}{v}")?,
                None => write!(f, "{mag}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

const fn af(c0: i64, cr: i64, cj: i64) -> AffineForm {
    AffineForm::new(c0, cr, cj)
}

/// One table row: position forms, difference form, and the `j` bound.
///
/// `j_max == None` means the row has no `j` column and contributes the single
/// pair at `j = 0`.
#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub label: &'static str,
    pub a: AffineForm,
    pub b: AffineForm,
    pub i: AffineForm,
    pub j_max: Option<AffineForm>,
}

const fn row(
    label: &'static str,
    a: AffineForm,
    b: AffineForm,
    i: AffineForm,
    j_max: Option<AffineForm>,
) -> TableRow {
    TableRow {
        label,
        a,
        b,
        i,
        j_max,
    }
}

/// One residue class of the construction.
#[derive(Debug, Clone, Copy)]
pub struct CaseSpec {
    /// `n mod 4`.
    pub residue: u8,
    /// Human label: `4k`, `4k+1`, `4k+2`, `4k+3`.
    pub label: &'static str,
    pub n_of_r: AffineForm,
    pub v_of_r: AffineForm,
    pub r_min: i64,
    pub hooked: bool,
    /// Added to `b_i` when forming base blocks: 0 plain, 1 hooked.
    pub b_shift: i64,
    pub rows: &'static [TableRow],
}

impl CaseSpec {
    /// The fixed pairs for the smallest differences at order `n`.
    pub fn tail_pairs(&self, n: i64) -> Vec<Pair> {
        let n = n as u32;
        match self.residue {
            0 => vec![
                Pair::new(1, 1, 2),
                Pair::new(2, 2 * n - 2, 2 * n),
                Pair::new(3, 2 * n - 4, 2 * n - 1),
            ],
            1 => vec![Pair::new(1, 1, 2), Pair::new(2, 2 * n - 2, 2 * n)],
            _ => vec![Pair::new(1, 1, 2), Pair::new(2, 2 * n - 1, 2 * n + 1)],
        }
    }
}

const ROWS_4K: &[TableRow] = &[
    row("(1)", af(3, 2, -1), af(7, 2, 1), af(4, 0, 2), Some(af(0, 1, 0))),
    row("(2)", af(2, 1, -1), af(9, 3, 1), af(7, 2, 2), Some(af(-1, 1, 0))),
    row("(3)", af(12, 6, -1), af(17, 6, 1), af(5, 0, 2), Some(af(-1, 1, 0))),
    row("(4)", af(12, 5, -1), af(18, 7, 1), af(6, 2, 2), Some(af(0, 1, 0))),
    row("(5)", af(8, 3, 0), af(17, 7, 0), af(9, 4, 0), None),
    row("(6)", af(9, 4, 0), af(21, 8, 0), af(12, 4, 0), None),
    row("(7)", af(6, 2, 0), af(13, 6, 0), af(7, 4, 0), None),
    row("(14)", af(5, 2, 0), af(16, 6, 0), af(11, 4, 0), None),
    row("(8*)", af(11, 4, 0), af(19, 8, 0), af(8, 4, 0), None),
    row("(10*)", af(10, 4, 0), af(15, 6, 0), af(5, 2, 0), None),
    row("(11*)", af(4, 2, 0), af(14, 6, 0), af(10, 4, 0), None),
];

const ROWS_4K1: &[TableRow] = &[
    row("(1)", af(3, 2, -1), af(6, 2, 1), af(3, 0, 2), Some(af(0, 1, 0))),
    row("(2)", af(2, 1, -1), af(8, 3, 1), af(6, 2, 2), Some(af(-1, 1, 0))),
    row("(3)", af(10, 6, -1), af(14, 6, 1), af(4, 0, 2), Some(af(-1, 1, 0))),
    row("(4)", af(10, 5, -1), af(15, 7, 1), af(5, 2, 2), Some(af(0, 1, 0))),
    row("(5)", af(7, 3, 0), af(14, 7, 0), af(7, 4, 0), None),
    row("(6)", af(8, 4, 0), af(17, 8, 0), af(9, 4, 0), None),
    row("(14)", af(4, 2, 0), af(12, 6, 0), af(8, 4, 0), None),
    row("(7')", af(5, 2, 0), af(11, 6, 0), af(6, 4, 0), None),
    row("(10')", af(9, 4, 0), af(13, 6, 0), af(4, 2, 0), None),
];

const ROWS_4K2: &[TableRow] = &[
    row("(1)", af(0, 2, -1), af(4, 2, 1), af(4, 0, 2), Some(af(-3, 1, 0))),
    row("(2)", af(2, 1, -1), af(3, 3, 1), af(1, 2, 2), Some(af(-1, 1, 0))),
    row("(3)", af(1, 6, -1), af(4, 6, 1), af(3, 0, 2), Some(af(-2, 1, 0))),
    row("(4)", af(2, 5, -1), af(4, 7, 1), af(2, 2, 2), Some(af(-2, 1, 0))),
    row("(6)", af(3, 2, 0), af(3, 4, 0), af(0, 2, 0), None),
    row("(9)", af(2, 3, 0), af(3, 7, 0), af(1, 4, 0), None),
    row("(11)", af(1, 2, 0), af(3, 6, 0), af(2, 4, 0), None),
    row("(13)", af(2, 2, 0), af(2, 6, 0), af(0, 4, 0), None),
];

const ROWS_4K3: &[TableRow] = &[
    row("(1)", af(2, 2, -1), af(6, 2, 1), af(4, 0, 2), Some(af(-2, 1, 0))),
    row("(2)", af(2, 1, -1), af(5, 3, 1), af(3, 2, 2), Some(af(-2, 1, 0))),
    row("(3)", af(3, 0, 0), af(4, 4, 0), af(1, 4, 0), None),
    row("(4)", af(4, 2, 0), af(5, 4, 0), af(1, 2, 0), None),
    row("(6)", af(3, 1, 0), af(5, 5, 0), af(2, 4, 0), None),
    row("(7)", af(5, 2, 0), af(5, 6, 0), af(0, 4, 0), None),
    row("(8)", af(3, 2, 0), af(6, 6, 0), af(3, 4, 0), None),
    row("(9)", af(4, 6, -1), af(7, 6, 1), af(3, 0, 2), Some(af(-2, 1, 0))),
    row("(10)", af(4, 5, -1), af(6, 7, 1), af(2, 2, 2), Some(af(-2, 1, 0))),
];

const CASES: [CaseSpec; 4] = [
    CaseSpec {
        residue: 0,
        label: "4k",
        n_of_r: af(12, 4, 0),
        v_of_r: af(25, 8, 0),
        r_min: 1,
        hooked: false,
        b_shift: 0,
        rows: ROWS_4K,
    },
    CaseSpec {
        residue: 1,
        label: "4k+1",
        n_of_r: af(9, 4, 0),
        v_of_r: af(19, 8, 0),
        r_min: 0,
        hooked: false,
        b_shift: 0,
        rows: ROWS_4K1,
    },
    CaseSpec {
        residue: 2,
        label: "4k+2",
        n_of_r: af(2, 4, 0),
        v_of_r: af(5, 8, 0),
        r_min: 2,
        hooked: true,
        b_shift: 1,
        rows: ROWS_4K2,
    },
    CaseSpec {
        residue: 3,
        label: "4k+3",
        n_of_r: af(3, 4, 0),
        v_of_r: af(7, 8, 0),
        r_min: 2,
        hooked: true,
        b_shift: 1,
        rows: ROWS_4K3,
    },
];

pub fn cases() -> &'static [CaseSpec; 4] {
    &CASES
}

/// Fixed sequences for the orders below the tables' range.
pub const SEQ_S8: &str = "1,1,8,3,5,7,3,4,6,5,8,4,7,2,6,2";
pub const SEQ_S12: &str = "1,1,9,11,3,12,4,3,7,10,4,9,8,5,11,7,6,12,5,10,8,2,6,2";
pub const SEQ_HS7: &str = "1,1,6,7,3,4,5,3,6,4,7,5,2,0,2";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("r = {r} is below the case minimum {min}")]
    RBelowMinimum { r: i64, min: i64 },
    #[error("no sequence construction for order {0}")]
    UnsupportedOrder(u32),
    #[error("order {0} is not admissible here")]
    InadmissibleOrder(u32),
    #[error("two pairs place a value at position {0}")]
    PositionCollision(u32),
    #[error("a pair occupies the hole position {0}")]
    HolePositionOccupied(u32),
    #[error("position {0} is outside the sequence")]
    PositionOutOfRange(u32),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// Evaluate a case's table at parameter `r`: tail pairs plus every row pair.
///
/// Rows whose `j_max(r)` is negative contribute nothing; that uniformly
/// covers the omitted first row of the `4k+2` case at `r = 2`.
pub fn table_pairs(case: &CaseSpec, r: i64) -> Result<PairSet, TableError> {
    if r < case.r_min {
        return Err(TableError::RBelowMinimum {
            r,
            min: case.r_min,
        });
    }
    let n = case.n_of_r.eval_r(r);
    let mut pairs = case.tail_pairs(n);
    for row in case.rows {
        let j_max = match row.j_max {
            Some(f) => f.eval_r(r),
            None => 0,
        };
        for j in 0..=j_max {
            let a = row.a.eval(r, j);
            let b = row.b.eval(r, j);
            let i = row.i.eval(r, j);
            pairs.push(Pair::new(i as u32, a as u32, b as u32));
        }
    }
    Ok(PairSet::from_pairs(pairs)?)
}

/// Build the order-`n` Skolem (`n = 0, 1` mod 4) or hooked Skolem
/// (`n = 2, 3` mod 4) sequence with the fixed tail, together with its pairs.
pub fn build_sequence(n: u32) -> Result<(SkolemTypeSequence, PairSet), TableError> {
    if n < 7 {
        return Err(TableError::UnsupportedOrder(n));
    }
    let fixed = match n {
        7 => Some((SEQ_HS7, SequenceKind::HookedSkolem(7))),
        8 => Some((SEQ_S8, SequenceKind::Skolem(8))),
        12 => Some((SEQ_S12, SequenceKind::Skolem(12))),
        _ => None,
    };
    if let Some((text, kind)) = fixed {
        let seq: SkolemTypeSequence = text.parse().expect("fixed sequence parses");
        let pairs = validate(&seq, kind).expect("fixed sequence is valid");
        return Ok((seq, pairs));
    }
    let case = &cases()[(n % 4) as usize];
    let r = (n as i64 - case.n_of_r.c0) / case.n_of_r.cr;
    if case.n_of_r.eval_r(r) != n as i64 || r < case.r_min {
        return Err(TableError::UnsupportedOrder(n));
    }
    let pairs = table_pairs(case, r)?;
    let kind = if case.hooked {
        SequenceKind::HookedSkolem(n)
    } else {
        SequenceKind::Skolem(n)
    };
    let seq = assemble(&pairs, kind)?;
    Ok((seq, pairs))
}

/// The difference blocks `{0, a, v-a}` for `a = 1..=(v-1)/2`.
pub fn kramer_base_blocks(v: u32) -> Result<Vec<BaseBlock>, TableError> {
    if v < 5 || v.is_multiple_of(2) || (v % 6 != 1 && v % 6 != 5) {
        return Err(TableError::InadmissibleOrder(v));
    }
    Ok((1..=(v - 1) / 2)
        .map(|a| BaseBlock::new([0, a, v - a], v).expect("kramer block is valid"))
        .collect())
}

/// Inverse of validation: lay pairs out as a sequence of the given kind.
///
/// For `General` the length is the largest position used.
pub fn assemble(pairs: &PairSet, kind: SequenceKind) -> Result<SkolemTypeSequence, TableError> {
    let len = kind
        .expected_len()
        .unwrap_or(pairs.max_position() as usize);
    let holes = kind.hole_positions();
    let mut slots = vec![SymbolSlot::Hole; len];
    for p in pairs.iter() {
        for pos in [p.first, p.second] {
            if pos as usize > len || pos == 0 {
                return Err(TableError::PositionOutOfRange(pos));
            }
            if holes.contains(&pos) {
                return Err(TableError::HolePositionOccupied(pos));
            }
            let slot = &mut slots[pos as usize - 1];
            if !slot.is_hole() {
                return Err(TableError::PositionCollision(pos));
            }
            *slot = SymbolSlot::Value(p.difference);
        }
    }
    Ok(SkolemTypeSequence::new(slots))
}

/// Machine-readable rendering of every case and row, for audit.
///
/// One row per line: label, the `[c0,cr,cj]` triples for `a`, `b`, `i`, and
/// the `j` bound (`[c0,cr]` or `-`).
pub fn rows_audit_text() -> String {
    let mut out = String::new();
    for case in cases() {
        out.push_str(&format!(
            "# case {}: n=[{},{}], v=[{},{}], r_min={}, hooked={}, shift={}\n",
            case.label,
            case.n_of_r.c0,
            case.n_of_r.cr,
            case.v_of_r.c0,
            case.v_of_r.cr,
            case.r_min,
            case.hooked,
            case.b_shift,
        ));
        for row in case.rows {
            let jm = match row.j_max {
                Some(f) => format!("[{},{}]", f.c0, f.cr),
                None => "-".to_string(),
            };
            out.push_str(&format!(
                "{} a=[{},{},{}] b=[{},{},{}] i=[{},{},{}] jmax={}\n",
                row.label,
                row.a.c0,
                row.a.cr,
                row.a.cj,
                row.b.c0,
                row.b.cr,
                row.b.cj,
                row.i.c0,
                row.i.cr,
                row.i.cj,
                jm,
            ));
        }
    }
    out
}
