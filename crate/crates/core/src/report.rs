//! Assembling per-design verification reports.
//!
//! A report runs a selection of checks against a design and records one
//! status per check, with a witness on failure. The short-orbit scan is cheap
//! and always computed: when it is not among the selected checks its result
//! is still attached informationally (status `skipped`), since a legitimate
//! short orbit is structure worth seeing, not an error.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;

use crate::decompose::{
    check_indecomposable, find_cyclic_sub_sts, SearchBudget, SubDesignResult, SubStsSearch,
};
use crate::design::{
    check_coverage, check_short_orbits, check_simple, Design, FORMAT_VERSION,
};

/// Sub-STS search is skipped above this order unless the caller overrides:
/// exhaustive decomposability search is desk-scale work.
pub const DEFAULT_SUB_STS_V_LIMIT: u32 = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckName {
    Coverage,
    Simple,
    ShortOrbits,
    Indecomposable,
    CyclicIndecomposable,
}

impl CheckName {
    pub const ALL: [CheckName; 5] = [
        CheckName::Coverage,
        CheckName::Simple,
        CheckName::ShortOrbits,
        CheckName::Indecomposable,
        CheckName::CyclicIndecomposable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Coverage => "coverage",
            CheckName::Simple => "simple",
            CheckName::ShortOrbits => "short-orbit",
            CheckName::Indecomposable => "indecomposable",
            CheckName::CyclicIndecomposable => "cyclic-indecomposable",
        }
    }
}

impl FromStr for CheckName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "coverage" => Ok(CheckName::Coverage),
            "simple" => Ok(CheckName::Simple),
            "short-orbit" | "short-orbits" => Ok(CheckName::ShortOrbits),
            "indecomposable" => Ok(CheckName::Indecomposable),
            "cyclic-indecomposable" => Ok(CheckName::CyclicIndecomposable),
            other => Err(format!("unknown check '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    CoverageViolation {
        count: u32,
        pair: [u32; 2],
    },
    RepeatedBlock {
        block: [u32; 3],
        first: OriginRef,
        second: OriginRef,
    },
    ShortOrbits {
        blocks: Vec<[u32; 3]>,
    },
    SubSts {
        #[serde(skip_serializing_if = "Option::is_none")]
        blocks: Option<Vec<[u32; 3]>>,
        exhaustive: bool,
        nodes: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OriginRef {
    pub base_index: usize,
    pub shift: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckReport {
    fn pass() -> Self {
        CheckReport {
            note: None,
            status: CheckStatus::Pass,
            witness: None,
        }
    }

    fn fail(witness: Witness) -> Self {
        CheckReport {
            note: None,
            status: CheckStatus::Fail,
            witness: Some(witness),
        }
    }

    fn skipped(note: &str) -> Self {
        CheckReport {
            note: Some(note.to_string()),
            status: CheckStatus::Skipped,
            witness: None,
        }
    }
}

/// Per-check outcomes for one design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub v: u32,
    pub lambda: u32,
    pub checks: BTreeMap<CheckName, CheckReport>,
}

impl VerificationReport {
    pub fn status(&self, name: CheckName) -> Option<CheckStatus> {
        self.checks.get(&name).map(|c| c.status)
    }

    pub fn any_failed(&self) -> bool {
        self.checks.values().any(|c| c.status == CheckStatus::Fail)
    }

    pub fn any_inconclusive(&self) -> bool {
        self.checks
            .values()
            .any(|c| c.status == CheckStatus::Inconclusive)
    }

    pub fn to_canonical_json(&self) -> String {
        #[derive(Serialize)]
        struct ReportFile<'a> {
            checks: BTreeMap<&'static str, &'a CheckReport>,
            format: u32,
            lambda: u32,
            v: u32,
        }
        let file = ReportFile {
            checks: self
                .checks
                .iter()
                .map(|(name, rep)| (name.as_str(), rep))
                .collect(),
            format: FORMAT_VERSION,
            lambda: self.lambda,
            v: self.v,
        };
        let mut s = serde_json::to_string(&file).expect("report serialization cannot fail");
        s.push('\n');
        s
    }
}

/// Options for [`run_checks`].
#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub budget: SearchBudget,
    /// Orders above this skip the sub-STS search with a note.
    pub sub_sts_v_limit: u32,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            budget: SearchBudget::default(),
            sub_sts_v_limit: DEFAULT_SUB_STS_V_LIMIT,
        }
    }
}

fn sub_sts_witness(search: &SubStsSearch) -> Witness {
    let blocks = match &search.result {
        SubDesignResult::Found(blocks) => Some(blocks.clone()),
        _ => None,
    };
    Witness::SubSts {
        blocks,
        exhaustive: search.exhaustive(),
        nodes: search.nodes,
    }
}

/// Run the selected checks and attach the informational short-orbit scan.
pub fn run_checks(
    design: &Design,
    selected: &[CheckName],
    options: &CheckOptions,
) -> VerificationReport {
    let mut checks = BTreeMap::new();

    if selected.contains(&CheckName::Coverage) {
        let out = check_coverage(design);
        checks.insert(
            CheckName::Coverage,
            match out.violation {
                None => CheckReport::pass(),
                Some((x, y, count)) => CheckReport::fail(Witness::CoverageViolation {
                    count,
                    pair: [x, y],
                }),
            },
        );
    }

    if selected.contains(&CheckName::Simple) {
        let out = check_simple(design);
        checks.insert(
            CheckName::Simple,
            match out.witness {
                None => CheckReport::pass(),
                Some(w) => CheckReport::fail(Witness::RepeatedBlock {
                    block: w.block,
                    first: OriginRef {
                        base_index: w.first.base_index,
                        shift: w.first.shift,
                    },
                    second: OriginRef {
                        base_index: w.second.base_index,
                        shift: w.second.shift,
                    },
                }),
            },
        );
    }

    // Always computed; informational when not selected.
    {
        let out = check_short_orbits(design);
        let blocks: Vec<[u32; 3]> = out.short_blocks.iter().map(|(_, b)| b.elements()).collect();
        let report = if selected.contains(&CheckName::ShortOrbits) {
            if blocks.is_empty() {
                CheckReport::pass()
            } else {
                CheckReport::fail(Witness::ShortOrbits { blocks })
            }
        } else {
            CheckReport {
                note: Some("not selected; listed informationally".to_string()),
                status: CheckStatus::Skipped,
                witness: if blocks.is_empty() {
                    None
                } else {
                    Some(Witness::ShortOrbits { blocks })
                },
            }
        };
        checks.insert(CheckName::ShortOrbits, report);
    }

    if selected.contains(&CheckName::Indecomposable) {
        let report = if design.lambda != 3 {
            CheckReport::skipped("decomposability splits need lambda = 3")
        } else if design.v > options.sub_sts_v_limit {
            CheckReport::skipped(&format!(
                "exhaustive search infeasible for v > {}",
                options.sub_sts_v_limit
            ))
        } else {
            let search =
                check_indecomposable(design, options.budget).expect("lambda checked above");
            match &search.result {
                SubDesignResult::AbsentExhaustive => CheckReport {
                    note: None,
                    status: CheckStatus::Pass,
                    witness: Some(sub_sts_witness(&search)),
                },
                SubDesignResult::Found(_) => CheckReport::fail(sub_sts_witness(&search)),
                SubDesignResult::BudgetExhausted(_) => CheckReport {
                    note: Some("node budget exhausted".to_string()),
                    status: CheckStatus::Inconclusive,
                    witness: Some(sub_sts_witness(&search)),
                },
            }
        };
        checks.insert(CheckName::Indecomposable, report);
    }

    if selected.contains(&CheckName::CyclicIndecomposable) {
        let report = if design.lambda != 3 {
            CheckReport::skipped("decomposability splits need lambda = 3")
        } else {
            let search = find_cyclic_sub_sts(design).expect("lambda checked above");
            match &search.result {
                SubDesignResult::AbsentExhaustive => CheckReport {
                    note: None,
                    status: CheckStatus::Pass,
                    witness: Some(sub_sts_witness(&search)),
                },
                SubDesignResult::Found(_) => CheckReport::fail(sub_sts_witness(&search)),
                SubDesignResult::BudgetExhausted(_) => unreachable!("cyclic search is unbudgeted"),
            }
        };
        checks.insert(CheckName::CyclicIndecomposable, report);
    }

    VerificationReport {
        v: design.v,
        lambda: design.lambda,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{blocks_from_hooked, BaseBlock, Provenance};
    use crate::tables::build_sequence;

    fn ts3_15() -> Design {
        let (_, pairs) = build_sequence(7).unwrap();
        blocks_from_hooked(&pairs, 7).unwrap()
    }

    fn ts3_33_fixture() -> Design {
        let raw: [[u32; 3]; 18] = [
            [0, 1, 7],
            [0, 1, 10],
            [0, 1, 15],
            [0, 2, 8],
            [0, 2, 15],
            [0, 2, 17],
            [0, 3, 10],
            [0, 3, 12],
            [0, 3, 17],
            [0, 4, 10],
            [0, 4, 17],
            [0, 4, 12],
            [0, 5, 12],
            [0, 5, 13],
            [0, 5, 14],
            [0, 11, 22],
            [0, 11, 22],
            [0, 11, 22],
        ];
        Design::new(
            33,
            3,
            raw.iter().map(|&b| BaseBlock::new(b, 33).unwrap()).collect(),
            Provenance::Custom("three disjoint hooked sequences of order 5".into()),
        )
        .unwrap()
    }

    #[test]
    fn all_checks_pass_for_ts3_15() {
        let report = run_checks(&ts3_15(), &CheckName::ALL, &CheckOptions::default());
        assert!(!report.any_failed());
        assert!(!report.any_inconclusive());
        assert_eq!(report.status(CheckName::Coverage), Some(CheckStatus::Pass));
        assert_eq!(
            report.status(CheckName::Indecomposable),
            Some(CheckStatus::Pass)
        );
    }

    #[test]
    fn short_orbit_reported_informationally_when_not_selected() {
        let design = ts3_33_fixture();
        let report = run_checks(
            &design,
            &[CheckName::Coverage, CheckName::Simple],
            &CheckOptions::default(),
        );
        assert!(!report.any_failed());
        let short = &report.checks[&CheckName::ShortOrbits];
        assert_eq!(short.status, CheckStatus::Skipped);
        match &short.witness {
            Some(Witness::ShortOrbits { blocks }) => {
                assert_eq!(blocks.as_slice(), &[[0, 11, 22]; 3]);
            }
            other => panic!("expected short-orbit witness, got {other:?}"),
        }
    }

    #[test]
    fn sub_sts_search_skipped_above_the_limit() {
        let (_, pairs) = build_sequence(16).unwrap();
        let design = crate::design::blocks_from_skolem(&pairs, 16).unwrap();
        let report = run_checks(
            &design,
            &[CheckName::Indecomposable],
            &CheckOptions::default(),
        );
        assert_eq!(
            report.status(CheckName::Indecomposable),
            Some(CheckStatus::Skipped)
        );
    }

    #[test]
    fn report_json_shape() {
        let report = run_checks(
            &ts3_15(),
            &[CheckName::Coverage],
            &CheckOptions::default(),
        );
        let json = report.to_canonical_json();
        assert!(json.starts_with("{\"checks\":{\"coverage\":{\"status\":\"pass\"}"));
        assert!(json.contains("\"format\":1"));
        assert!(json.ends_with("\"v\":15}\n"));
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["checks"]["coverage"]["status"], "pass");
    }
}
