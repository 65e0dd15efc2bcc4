//! Method dispatch: which construction serves which order.
//!
//! Every odd `v >= 5` except `v = 9` gets a cyclic `TS₃(v)`:
//! `v = 1, 5 (mod 6)` from the difference blocks `{0, a, v-a}`, and
//! `v = 3 (mod 6)`, `v >= 15`, from the Skolem (`n = (v-1)/2 = 0, 1` mod 4)
//! or hooked Skolem (`n = 2, 3` mod 4) constructions. `v = 9` stays open and
//! is refused under automatic dispatch. Orders in the family `57 + 24c`,
//! `c >= 2`, construct fine but are known not to be simple; callers can ask
//! [`is_known_nonsimple`] to warn.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::design::{blocks_from_hooked, blocks_from_skolem, Design, Provenance};
use crate::tables::{build_sequence, cases, kramer_base_blocks};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Kramer,
    Skolem,
    Hooked,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Auto => "auto",
            Method::Kramer => "kramer",
            Method::Skolem => "skolem",
            Method::Hooked => "hooked",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Method::Auto),
            "kramer" => Ok(Method::Kramer),
            "skolem" => Ok(Method::Skolem),
            "hooked" => Ok(Method::Hooked),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("order {0} must be odd and at least 5")]
    InadmissibleOrder(u32),
    #[error("no construction is known for v = 9; the case is open")]
    OpenCaseNine,
    #[error("method {method} does not apply to v = {v}: {reason}")]
    MethodMismatch {
        v: u32,
        method: Method,
        reason: String,
    },
}

/// True for the orders `57 + 24c`, `c >= 2`, whose constructed designs are
/// known to contain a repeated block.
pub fn is_known_nonsimple(v: u32) -> bool {
    v >= 105 && (v - 57).is_multiple_of(24)
}

/// Construct a `TS₃(v)` by the requested method.
pub fn construct(v: u32, method: Method) -> Result<Design, ConstructError> {
    if v.is_multiple_of(2) || v < 5 {
        return Err(ConstructError::InadmissibleOrder(v));
    }
    match method {
        Method::Auto => match v % 6 {
            1 | 5 => construct(v, Method::Kramer),
            _ if v == 9 => Err(ConstructError::OpenCaseNine),
            _ => {
                let n = (v - 1) / 2;
                if n % 4 < 2 {
                    construct(v, Method::Skolem)
                } else {
                    construct(v, Method::Hooked)
                }
            }
        },
        Method::Kramer => {
            let blocks = kramer_base_blocks(v).map_err(|_| ConstructError::MethodMismatch {
                v,
                method,
                reason: "needs v = 1 or 5 (mod 6)".to_string(),
            })?;
            Ok(Design::new(v, 3, blocks, Provenance::Kramer).expect("kramer design is valid"))
        }
        Method::Skolem => {
            let n = (v - 1) / 2;
            if n % 4 > 1 {
                return Err(ConstructError::MethodMismatch {
                    v,
                    method,
                    reason: format!("n = {n} is not 0 or 1 (mod 4)"),
                });
            }
            let (_, pairs) = build_sequence(n).map_err(|e| ConstructError::MethodMismatch {
                v,
                method,
                reason: e.to_string(),
            })?;
            let mut design =
                blocks_from_skolem(&pairs, n).expect("constructed pairs are valid");
            design.provenance = case_provenance(n, false);
            Ok(design)
        }
        Method::Hooked => {
            let n = (v - 1) / 2;
            if n % 4 < 2 {
                return Err(ConstructError::MethodMismatch {
                    v,
                    method,
                    reason: format!("n = {n} is not 2 or 3 (mod 4)"),
                });
            }
            let (_, pairs) = build_sequence(n).map_err(|e| ConstructError::MethodMismatch {
                v,
                method,
                reason: e.to_string(),
            })?;
            let mut design =
                blocks_from_hooked(&pairs, n).expect("constructed pairs are valid");
            design.provenance = case_provenance(n, true);
            Ok(design)
        }
    }
}

/// Provenance for a table-backed order. The parameter satisfies
/// `n = c0 + 4r` for the residue's case, so it identifies `n` even for the
/// fixed small orders where it falls below the table minimum.
fn case_provenance(n: u32, hooked: bool) -> Provenance {
    let residue = (n % 4) as u8;
    let case = &cases()[residue as usize];
    let r = (n as i64 - case.n_of_r.c0) / case.n_of_r.cr;
    if hooked {
        Provenance::HookedCase { residue, r }
    } else {
        Provenance::SkolemCase { residue, r }
    }
}
