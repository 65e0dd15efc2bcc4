//! Decomposability checks by exhaustive exact-cover search.
//!
//! A `TS₃(v)` is decomposable exactly when a Steiner triple system `STS(v)`
//! hides among its developed blocks (the only λ-split of 3 is 1 + 2), so
//! [`find_sub_sts`] poses exact cover: items are the unordered pairs of
//! `Z_v`, options are the distinct developed blocks. The search is dancing
//! links with the fewest-options item heuristic, ties broken by smallest
//! item; options enter in lexicographic block order. It is single-threaded
//! and fully deterministic: identical inputs give identical certificates and
//! node counts. `AbsentExhaustive` is claimed only when the whole tree was
//! explored; running out of budget is surfaced, never treated as absence.
//!
//! [`find_cyclic_sub_sts`] answers the cyclic variant at the orbit level: a
//! cyclic `STS(v)` inside the design would pick whole orbits whose difference
//! triples cover each difference `1..=(v-1)/2` exactly once (the short orbit
//! accounts for the difference `v/3`). Orbits with a repeated difference can
//! never take part, which settles most designs without any search.

use crate::design::{develop, difference_triple, BaseBlock, Design, DevelopedSystem};
use thiserror::Error;

/// Node limit for an exhaustive search. One node = one option tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl SearchBudget {
    /// Search order is fixed; results never depend on timing or threads.
    pub const DETERMINISTIC: bool = true;

    pub fn new(max_nodes: u64) -> Self {
        assert!(max_nodes > 0, "budget must allow at least one node");
        SearchBudget { max_nodes }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 100_000_000,
        }
    }
}

/// What the sub-design search concluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubDesignResult {
    /// A sub-STS, as a list of blocks (orbit representatives for the cyclic
    /// search), each pair covered exactly once.
    Found(Vec<[u32; 3]>),
    /// The search tree was exhausted without a solution.
    AbsentExhaustive,
    /// The node budget ran out; nothing is claimed either way.
    BudgetExhausted(u64),
}

/// Search result plus statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubStsSearch {
    pub result: SubDesignResult,
    pub nodes: u64,
}

impl SubStsSearch {
    /// True when the whole tree was explored (an absence proof).
    pub fn exhaustive(&self) -> bool {
        matches!(self.result, SubDesignResult::AbsentExhaustive)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("decomposability splits need lambda = 3, got {0}")]
    LambdaNotThree(u32),
}

/// Search the developed system for a Steiner triple system.
///
/// Orders with `v` not 1 or 3 (mod 6) admit no `STS(v)` at all and return
/// `AbsentExhaustive` with zero nodes. Duplicate developed blocks collapse to
/// a single option; a Steiner system never uses a block twice.
pub fn find_sub_sts(system: &DevelopedSystem, budget: SearchBudget) -> SubStsSearch {
    let v = system.v;
    if v % 6 != 1 && v % 6 != 3 {
        return SubStsSearch {
            result: SubDesignResult::AbsentExhaustive,
            nodes: 0,
        };
    }
    let mut blocks: Vec<[u32; 3]> = system.blocks().to_vec();
    blocks.sort_unstable();
    blocks.dedup();

    let pair_index = |x: u32, y: u32| -> usize {
        // x < y; lexicographic rank of the pair among all C(v,2).
        let (x, y, v) = (x as usize, y as usize, v as usize);
        x * (2 * v - x - 1) / 2 + (y - x - 1)
    };
    let n_items = (v as usize) * (v as usize - 1) / 2;
    let mut solver = Dlx::new(n_items);
    for b in &blocks {
        solver.add_option(&[
            pair_index(b[0], b[1]),
            pair_index(b[0], b[2]),
            pair_index(b[1], b[2]),
        ]);
    }
    let (outcome, nodes) = solver.search_first(budget.max_nodes);
    let result = match outcome {
        DlxOutcome::Found(option_ids) => {
            let mut cert: Vec<[u32; 3]> = option_ids.iter().map(|&k| blocks[k]).collect();
            cert.sort_unstable();
            SubDesignResult::Found(cert)
        }
        DlxOutcome::Exhausted => SubDesignResult::AbsentExhaustive,
        DlxOutcome::OutOfBudget => SubDesignResult::BudgetExhausted(nodes),
    };
    SubStsSearch { result, nodes }
}

/// Decide indecomposability of a λ=3 design by sub-STS search.
pub fn check_indecomposable(
    design: &Design,
    budget: SearchBudget,
) -> Result<SubStsSearch, DecomposeError> {
    if design.lambda != 3 {
        return Err(DecomposeError::LambdaNotThree(design.lambda));
    }
    Ok(find_sub_sts(&develop(design), budget))
}

/// Search for a cyclic `STS(v)` made of whole orbits of the design.
///
/// Items are the differences `1..=(v-1)/2`; a full orbit covers its three
/// (distinct) folded differences, the short orbit covers `v/3` alone. Each
/// distinct orbit is usable once. When no subset size can work modulo 3 the
/// answer is forced without search: full orbits cover three differences each,
/// so a design without a short orbit needs `(v-1)/2` divisible by 3.
pub fn find_cyclic_sub_sts(design: &Design) -> Result<SubStsSearch, DecomposeError> {
    if design.lambda != 3 {
        return Err(DecomposeError::LambdaNotThree(design.lambda));
    }
    let v = design.v;
    let n_items = ((v - 1) / 2) as usize;

    // Distinct orbits, keyed by their lexicographically least block.
    let mut orbit_reps: Vec<[u32; 3]> = design
        .base_blocks
        .iter()
        .map(|b| orbit_representative(b, v))
        .collect();
    orbit_reps.sort_unstable();
    orbit_reps.dedup();

    let mut options: Vec<(Vec<usize>, [u32; 3])> = Vec::new();
    let mut short_count = 0usize;
    for rep in &orbit_reps {
        let block = BaseBlock::new(*rep, v).expect("orbit representative is valid");
        if block.is_short_orbit(v) {
            short_count += 1;
            options.push((vec![(v / 3) as usize - 1], *rep));
        } else {
            let d = difference_triple(&block, v);
            if d[0] == d[1] || d[1] == d[2] {
                continue; // covers a difference twice; unusable in an exact cover
            }
            options.push((
                vec![d[0] as usize - 1, d[1] as usize - 1, d[2] as usize - 1],
                *rep,
            ));
        }
    }

    let feasible_mod3 = (0..=short_count).any(|s| (n_items - s).is_multiple_of(3));
    if !feasible_mod3 {
        return Ok(SubStsSearch {
            result: SubDesignResult::AbsentExhaustive,
            nodes: 0,
        });
    }

    let mut solver = Dlx::new(n_items);
    for (items, _) in &options {
        solver.add_option(items);
    }
    let (outcome, nodes) = solver.search_first(u64::MAX);
    let result = match outcome {
        DlxOutcome::Found(option_ids) => {
            let mut cert: Vec<[u32; 3]> = option_ids.iter().map(|&k| options[k].1).collect();
            cert.sort_unstable();
            SubDesignResult::Found(cert)
        }
        DlxOutcome::Exhausted => SubDesignResult::AbsentExhaustive,
        DlxOutcome::OutOfBudget => unreachable!("cyclic search runs unbudgeted"),
    };
    Ok(SubStsSearch { result, nodes })
}

/// The lexicographically least block in the orbit of `block`.
fn orbit_representative(block: &BaseBlock, v: u32) -> [u32; 3] {
    let mut best = block.elements();
    for k in 1..block.orbit_length(v) {
        let cand = block.shifted(k, v);
        if cand < best {
            best = cand;
        }
    }
    best
}

enum DlxOutcome {
    Found(Vec<usize>),
    Exhausted,
    OutOfBudget,
}

/// Dancing-links exact cover over `0..n_items`, all items primary.
struct Dlx {
    // Node 0 is the root; nodes 1..=n_items are column headers.
    left: Vec<u32>,
    right: Vec<u32>,
    up: Vec<u32>,
    down: Vec<u32>,
    col: Vec<u32>,
    option_id: Vec<u32>,
    len: Vec<u32>,
    n_options: usize,
}

impl Dlx {
    fn new(n_items: usize) -> Self {
        let n = n_items + 1;
        let mut dlx = Dlx {
            left: (0..n as u32).map(|k| if k == 0 { n as u32 - 1 } else { k - 1 }).collect(),
            right: (0..n as u32).map(|k| (k + 1) % n as u32).collect(),
            up: (0..n as u32).collect(),
            down: (0..n as u32).collect(),
            col: (0..n as u32).collect(),
            option_id: vec![u32::MAX; n],
            len: vec![0; n],
            n_options: 0,
        };
        dlx.option_id[0] = u32::MAX;
        dlx
    }

    fn add_option(&mut self, items: &[usize]) {
        debug_assert!(!items.is_empty());
        let option = self.n_options as u32;
        self.n_options += 1;
        let first_new = self.left.len() as u32;
        for (k, &item) in items.iter().enumerate() {
            let node = self.left.len() as u32;
            let header = item as u32 + 1;
            let tail = self.up[header as usize];
            // vertical splice at the bottom of the column
            self.up.push(tail);
            self.down.push(header);
            self.down[tail as usize] = node;
            self.up[header as usize] = node;
            self.len[header as usize] += 1;
            self.col.push(header);
            self.option_id.push(option);
            // horizontal circular links within the option
            let prev = if k == 0 { node } else { node - 1 };
            self.left.push(prev);
            self.right.push(first_new);
            if k > 0 {
                self.right[prev as usize] = node;
            }
        }
        let last = self.left.len() as u32 - 1;
        self.left[first_new as usize] = last;
    }

    fn cover(&mut self, c: u32) {
        let (l, r) = (self.left[c as usize], self.right[c as usize]);
        self.right[l as usize] = r;
        self.left[r as usize] = l;
        let mut i = self.down[c as usize];
        while i != c {
            let mut j = self.right[i as usize];
            while j != i {
                let (u, d) = (self.up[j as usize], self.down[j as usize]);
                self.down[u as usize] = d;
                self.up[d as usize] = u;
                self.len[self.col[j as usize] as usize] -= 1;
                j = self.right[j as usize];
            }
            i = self.down[i as usize];
        }
    }

    fn uncover(&mut self, c: u32) {
        let mut i = self.up[c as usize];
        while i != c {
            let mut j = self.left[i as usize];
            while j != i {
                self.len[self.col[j as usize] as usize] += 1;
                let (u, d) = (self.up[j as usize], self.down[j as usize]);
                self.down[u as usize] = j;
                self.up[d as usize] = j;
                j = self.left[j as usize];
            }
            i = self.up[i as usize];
        }
        let (l, r) = (self.left[c as usize], self.right[c as usize]);
        self.right[l as usize] = c;
        self.left[r as usize] = c;
    }

    /// Fewest remaining options, ties to the smallest item id.
    fn choose_column(&self) -> u32 {
        let mut best = 0;
        let mut best_len = u32::MAX;
        let mut c = self.right[0];
        while c != 0 {
            if self.len[c as usize] < best_len {
                best_len = self.len[c as usize];
                best = c;
            }
            c = self.right[c as usize];
        }
        best
    }

    fn search_first(&mut self, max_nodes: u64) -> (DlxOutcome, u64) {
        let mut chosen: Vec<u32> = Vec::new();
        let mut nodes = 0u64;
        let outcome = self.search(&mut chosen, &mut nodes, max_nodes);
        let outcome = match outcome {
            SearchState::Solved => DlxOutcome::Found(
                chosen
                    .iter()
                    .map(|&node| self.option_id[node as usize] as usize)
                    .collect(),
            ),
            SearchState::Exhausted => DlxOutcome::Exhausted,
            SearchState::Aborted => DlxOutcome::OutOfBudget,
        };
        (outcome, nodes)
    }

    fn search(&mut self, chosen: &mut Vec<u32>, nodes: &mut u64, max_nodes: u64) -> SearchState {
        if self.right[0] == 0 {
            return SearchState::Solved;
        }
        let c = self.choose_column();
        if self.len[c as usize] == 0 {
            return SearchState::Exhausted;
        }
        self.cover(c);
        let mut r = self.down[c as usize];
        while r != c {
            *nodes += 1;
            if *nodes > max_nodes {
                self.uncover(c);
                return SearchState::Aborted;
            }
            chosen.push(r);
            let mut j = self.right[r as usize];
            while j != r {
                self.cover(self.col[j as usize]);
                j = self.right[j as usize];
            }
            match self.search(chosen, nodes, max_nodes) {
                SearchState::Exhausted => {}
                done => {
                    // unwind links before surfacing Solved/Aborted
                    let mut j = self.left[r as usize];
                    while j != r {
                        self.uncover(self.col[j as usize]);
                        j = self.left[j as usize];
                    }
                    if matches!(done, SearchState::Aborted) {
                        chosen.pop();
                        self.uncover(c);
                        return SearchState::Aborted;
                    }
                    self.uncover(c);
                    return done;
                }
            }
            let mut j = self.left[r as usize];
            while j != r {
                self.uncover(self.col[j as usize]);
                j = self.left[j as usize];
            }
            chosen.pop();
            r = self.down[r as usize];
        }
        self.uncover(c);
        SearchState::Exhausted
    }
}

enum SearchState {
    Solved,
    Exhausted,
    Aborted,
}
