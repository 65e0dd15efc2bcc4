//! Exact analysis of the row-pair collision systems.
//!
//! For rows `(row1, row2)` of a case table, a repeated developed block would
//! require
//!
//! ```text
//! i1 + i2 = b2 + shift          b1 + shift + i2 = 2n(r) + 1
//! ```
//!
//! in the variables `(j1, j2, r)` with `0 <= j <= j_max(r)` and `r >= r_min`
//! (`shift` is 1 for the hooked cases, 0 otherwise). A short orbit would
//! require `3 i = v(r)` and `3 (b + shift) = 2 v(r)`; multiplying by 3 keeps
//! everything integral. [`solve_exact`] classifies the solution set of such a
//! system over the bounded nonnegative integers exactly - `Empty`, a finite
//! list, or a one-parameter arithmetic family - and [`brute_force`] provides
//! the independent enumeration oracle. [`run_case`] reproduces the analysis
//! for every ordered row pair and every row of a case.
//!
//! Equations here are tiny (two equations, at most three unknowns), so the
//! integer solve is a direct diagonalization with unimodular row and column
//! operations; no approximation, no rationals.

use serde::Serialize;
use thiserror::Error;

use crate::tables::{cases, AffineForm, CaseSpec, TableRow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinesError {
    #[error("system is degenerate: solution set has two free parameters")]
    DegenerateSystem,
}

/// One equation `cj1*j1 + cj2*j2 + cr*r = rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LinEq {
    pub cj1: i64,
    pub cj2: i64,
    pub cr: i64,
    pub rhs: i64,
}

impl LinEq {
    pub fn satisfied(&self, sol: (i64, i64, i64)) -> bool {
        self.cj1 * sol.0 + self.cj2 * sol.1 + self.cr * sol.2 == self.rhs
    }

    /// Residual of the equation along a family, as `(constant, coefficient of C)`.
    pub fn residual_along(&self, family: &ParametricFamily) -> (i64, i64) {
        let (b, s) = (family.base, family.step);
        (
            self.cj1 * b.0 + self.cj2 * b.1 + self.cr * b.2 - self.rhs,
            self.cj1 * s.0 + self.cj2 * s.1 + self.cr * s.2,
        )
    }
}

/// Two equations in `(j1, j2, r)` with per-variable bounds.
///
/// A `None` bound means the variable is structurally absent (a row with no
/// `j` column); solutions report it as 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearSystem {
    pub eq1: LinEq,
    pub eq2: LinEq,
    /// `j1` ranges over `0..=j1_max(r)`.
    pub j1_max: Option<AffineForm>,
    pub j2_max: Option<AffineForm>,
    pub r_min: i64,
}

impl LinearSystem {
    /// Equations plus all bounds.
    pub fn satisfies(&self, sol: (i64, i64, i64)) -> bool {
        if !self.eq1.satisfied(sol) || !self.eq2.satisfied(sol) {
            return false;
        }
        if sol.2 < self.r_min {
            return false;
        }
        for (value, bound) in [(sol.0, &self.j1_max), (sol.1, &self.j2_max)] {
            match bound {
                Some(f) => {
                    if value < 0 || value > f.eval_r(sol.2) {
                        return false;
                    }
                }
                None => {
                    if value != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A one-parameter family `{base + C*step : C >= 0}`.
///
/// `step` is primitive (content 1) and has a positive `r` component; `base`
/// is the first member, so equal families render identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParametricFamily {
    pub base: (i64, i64, i64),
    pub step: (i64, i64, i64),
}

impl ParametricFamily {
    /// Normalize a family given as `{offset + C*step : C >= c_min}`.
    pub fn from_offset(offset: (i64, i64, i64), step: (i64, i64, i64), c_min: i64) -> Self {
        ParametricFamily {
            base: (
                offset.0 + c_min * step.0,
                offset.1 + c_min * step.1,
                offset.2 + c_min * step.2,
            ),
            step,
        }
    }

    pub fn nth(&self, c: i64) -> (i64, i64, i64) {
        (
            self.base.0 + c * self.step.0,
            self.base.1 + c * self.step.1,
            self.base.2 + c * self.step.2,
        )
    }

    fn members_up_to_r(&self, r_max: i64) -> Vec<(i64, i64, i64)> {
        let mut out = Vec::new();
        let mut c = 0;
        loop {
            let m = self.nth(c);
            if m.2 > r_max {
                break;
            }
            out.push(m);
            c += 1;
        }
        out
    }
}

/// The classified solutions of a [`LinearSystem`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SolutionSet {
    Empty,
    Finite(Vec<(i64, i64, i64)>),
    Parametric(ParametricFamily),
}

impl SolutionSet {
    pub fn is_empty(&self) -> bool {
        matches!(self, SolutionSet::Empty)
    }

    /// Set equality; parametric families compare by their normalized form.
    pub fn same_solutions(&self, other: &SolutionSet) -> bool {
        self == other
    }

    /// All solutions with `r <= r_max`, sorted; the shape brute force returns.
    pub fn up_to_r(&self, r_max: i64) -> Vec<(i64, i64, i64)> {
        let mut sols = match self {
            SolutionSet::Empty => Vec::new(),
            SolutionSet::Finite(list) => {
                list.iter().copied().filter(|s| s.2 <= r_max).collect()
            }
            SolutionSet::Parametric(f) => f.members_up_to_r(r_max),
        };
        sols.sort_unstable();
        sols
    }
}

/// The system a repeated block between `row1` and `row2` would have to solve.
pub fn repeated_block_system(case: &CaseSpec, row1: &TableRow, row2: &TableRow) -> LinearSystem {
    let shift = case.b_shift;
    let n = case.n_of_r;
    // i1 + i2 = b2 + shift
    let eq1 = LinEq {
        cj1: row1.i.cj,
        cj2: row2.i.cj - row2.b.cj,
        cr: row1.i.cr + row2.i.cr - row2.b.cr,
        rhs: row2.b.c0 + shift - row1.i.c0 - row2.i.c0,
    };
    // b1 + shift + i2 = 2n + 1
    let eq2 = LinEq {
        cj1: row1.b.cj,
        cj2: row2.i.cj,
        cr: row1.b.cr + row2.i.cr - 2 * n.cr,
        rhs: 2 * n.c0 + 1 - row1.b.c0 - shift - row2.i.c0,
    };
    LinearSystem {
        eq1,
        eq2,
        j1_max: row1.j_max,
        j2_max: row2.j_max,
        r_min: case.r_min,
    }
}

/// The system a short orbit in `row` would have to solve (times 3, to stay
/// integral): `3i = v` and `3(b + shift) = 2v`.
pub fn short_orbit_system(case: &CaseSpec, row: &TableRow) -> LinearSystem {
    let shift = case.b_shift;
    let v = case.v_of_r;
    let eq1 = LinEq {
        cj1: 3 * row.i.cj,
        cj2: 0,
        cr: 3 * row.i.cr - v.cr,
        rhs: v.c0 - 3 * row.i.c0,
    };
    let eq2 = LinEq {
        cj1: 3 * row.b.cj,
        cj2: 0,
        cr: 3 * row.b.cr - 2 * v.cr,
        rhs: 2 * v.c0 - 3 * row.b.c0 - 3 * shift,
    };
    LinearSystem {
        eq1,
        eq2,
        j1_max: row.j_max,
        j2_max: None,
        r_min: case.r_min,
    }
}

/// Exact classification of the integer solutions within the bounds.
pub fn solve_exact(system: &LinearSystem) -> Result<SolutionSet, LinesError> {
    // Active columns: j1 and j2 only when their rows have a j range.
    let mut active = Vec::new();
    if system.j1_max.is_some() {
        active.push(0usize);
    }
    if system.j2_max.is_some() {
        active.push(1);
    }
    active.push(2);
    let k = active.len();

    let full = [
        [system.eq1.cj1, system.eq1.cj2, system.eq1.cr],
        [system.eq2.cj1, system.eq2.cj2, system.eq2.cr],
    ];
    let mut a = [[0i64; 3]; 2];
    for (col, &src) in active.iter().enumerate() {
        a[0][col] = full[0][src];
        a[1][col] = full[1][src];
    }
    let c = [system.eq1.rhs, system.eq2.rhs];

    let Some(lattice) = solve_linear_2xk(a, c, k) else {
        return Ok(SolutionSet::Empty);
    };

    let expand = |compact: &[i64]| -> (i64, i64, i64) {
        let mut out = [0i64; 3];
        for (col, &src) in active.iter().enumerate() {
            out[src] = compact[col];
        }
        (out[0], out[1], out[2])
    };

    match lattice.free_dirs.len() {
        0 => {
            let sol = expand(&lattice.particular);
            if system.satisfies(sol) {
                Ok(SolutionSet::Finite(vec![sol]))
            } else {
                Ok(SolutionSet::Empty)
            }
        }
        1 => {
            let x0 = expand(&lattice.particular);
            let d = expand(&lattice.free_dirs[0]);
            classify_ray(system, x0, d)
        }
        _ => Err(LinesError::DegenerateSystem),
    }
}

/// Intersect the line `x0 + t*d` with the bounds and classify.
fn classify_ray(
    system: &LinearSystem,
    x0: (i64, i64, i64),
    d: (i64, i64, i64),
) -> Result<SolutionSet, LinesError> {
    // Constraints p + q*t >= 0.
    let mut constraints: Vec<(i64, i64)> = Vec::new();
    constraints.push((x0.2 - system.r_min, d.2));
    for (value0, dir, bound) in [
        (x0.0, d.0, &system.j1_max),
        (x0.1, d.1, &system.j2_max),
    ] {
        if let Some(f) = bound {
            constraints.push((value0, dir));
            // j_max(r(t)) - j(t) >= 0
            constraints.push((
                f.c0 + f.cr * x0.2 - value0,
                f.cr * d.2 - dir,
            ));
        }
    }

    let mut lo: Option<i64> = None;
    let mut hi: Option<i64> = None;
    for (p, q) in constraints {
        if q == 0 {
            if p < 0 {
                return Ok(SolutionSet::Empty);
            }
        } else if q > 0 {
            let bound = div_ceil(-p, q);
            lo = Some(lo.map_or(bound, |x| x.max(bound)));
        } else {
            let bound = div_floor(p, -q);
            hi = Some(hi.map_or(bound, |x| x.min(bound)));
        }
    }

    match (lo, hi) {
        (Some(lo), Some(hi)) if lo > hi => Ok(SolutionSet::Empty),
        (Some(lo), Some(hi)) => {
            let sols = (lo..=hi)
                .map(|t| (x0.0 + t * d.0, x0.1 + t * d.1, x0.2 + t * d.2))
                .collect::<Vec<_>>();
            let mut sols = sols;
            sols.sort_unstable();
            Ok(SolutionSet::Finite(sols))
        }
        (Some(lo), None) => Ok(SolutionSet::Parametric(oriented(x0, d, lo, 1))),
        (None, Some(hi)) => Ok(SolutionSet::Parametric(oriented(x0, d, hi, -1))),
        // r >= r_min always constrains one side unless d is degenerate.
        (None, None) => Err(LinesError::DegenerateSystem),
    }
}

fn oriented(x0: (i64, i64, i64), d: (i64, i64, i64), start: i64, sign: i64) -> ParametricFamily {
    let base = (
        x0.0 + start * d.0,
        x0.1 + start * d.1,
        x0.2 + start * d.2,
    );
    let step = (sign * d.0, sign * d.1, sign * d.2);
    debug_assert!(step.2 > 0, "unbounded family must grow in r");
    ParametricFamily { base, step }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a / b + ((a % b != 0 && a > 0) as i64)
}

fn div_floor(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a / b - ((a % b != 0 && a < 0) as i64)
}

struct IntLattice {
    particular: Vec<i64>,
    free_dirs: Vec<Vec<i64>>,
}

/// Integer solutions of a 2 x k system (k <= 3) by diagonalization.
///
/// Returns `None` when no integer solution exists; otherwise a particular
/// solution and a basis of the kernel lattice (columns of the unimodular
/// column transform, hence primitive).
#[allow(clippy::needless_range_loop)] // row/column ops read clearest with indices
fn solve_linear_2xk(a: [[i64; 3]; 2], c: [i64; 2], k: usize) -> Option<IntLattice> {
    let mut m = a;
    let mut u = [[1i64, 0], [0, 1]];
    let mut v = [[0i64; 3]; 3];
    for (i, row) in v.iter_mut().enumerate().take(k) {
        row[i] = 1;
    }

    for pivot in 0..2.min(k) {
        // Bring the smallest-magnitude nonzero entry to the pivot.
        let mut best: Option<(usize, usize)> = None;
        for r in pivot..2 {
            for col in pivot..k {
                if m[r][col] != 0
                    && best.is_none_or(|(br, bc)| m[br][bc].abs() > m[r][col].abs())
                {
                    best = Some((r, col));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        if br != pivot {
            m.swap(br, pivot);
            u.swap(br, pivot);
        }
        if bc != pivot {
            for row in m.iter_mut() {
                row.swap(bc, pivot);
            }
            for row in v.iter_mut().take(k) {
                row.swap(bc, pivot);
            }
        }
        loop {
            let mut clean = true;
            for r in (pivot + 1)..2 {
                if m[r][pivot] != 0 {
                    let q = m[r][pivot].div_euclid(m[pivot][pivot]);
                    for col in 0..k {
                        m[r][col] -= q * m[pivot][col];
                    }
                    for col in 0..2 {
                        u[r][col] -= q * u[pivot][col];
                    }
                    if m[r][pivot] != 0 {
                        m.swap(r, pivot);
                        u.swap(r, pivot);
                        clean = false;
                    }
                }
            }
            for col in (pivot + 1)..k {
                if m[pivot][col] != 0 {
                    let q = m[pivot][col].div_euclid(m[pivot][pivot]);
                    for r in 0..2 {
                        m[r][col] -= q * m[r][pivot];
                    }
                    for row in v.iter_mut().take(k) {
                        row[col] -= q * row[pivot];
                    }
                    if m[pivot][col] != 0 {
                        for row in m.iter_mut() {
                            row.swap(col, pivot);
                        }
                        for row in v.iter_mut().take(k) {
                            row.swap(col, pivot);
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
    }

    let tc = [
        u[0][0] * c[0] + u[0][1] * c[1],
        u[1][0] * c[0] + u[1][1] * c[1],
    ];
    let mut y: [Option<i64>; 3] = [None, None, None];
    for i in 0..2 {
        let d = if i < k { m[i][i] } else { 0 };
        if d == 0 {
            if tc[i] != 0 {
                return None;
            }
        } else {
            if tc[i] % d != 0 {
                return None;
            }
            y[i] = Some(tc[i] / d);
        }
    }

    let mut particular = vec![0i64; k];
    let mut free_dirs = Vec::new();
    for idx in 0..k {
        match y[idx] {
            Some(val) => {
                for (row, part) in particular.iter_mut().enumerate() {
                    *part += v[row][idx] * val;
                }
            }
            None => {
                free_dirs.push((0..k).map(|row| v[row][idx]).collect());
            }
        }
    }
    Some(IntLattice {
        particular,
        free_dirs,
    })
}

/// Enumerate every solution with `r <= r_max` directly. Independent oracle
/// for [`solve_exact`]; shares nothing with the lattice path.
pub fn brute_force(system: &LinearSystem, r_max: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for r in system.r_min..=r_max {
        let range = |bound: &Option<AffineForm>| match bound {
            Some(f) => 0..=f.eval_r(r),
            None => 0..=0,
        };
        for j1 in range(&system.j1_max) {
            for j2 in range(&system.j2_max) {
                let sol = (j1, j2, r);
                if system.eq1.satisfied(sol) && system.eq2.satisfied(sol) {
                    out.push(sol);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// A non-empty repeated-block system: which ordered row pair, and what solves it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionEntry {
    /// 1-based row indices into the case table.
    pub row1: usize,
    pub row2: usize,
    pub solutions: SolutionSet,
}

/// The full analysis of one case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub case_index: usize,
    pub case_label: &'static str,
    pub exceptions: Vec<ExceptionEntry>,
    /// Short-orbit systems with solutions (expected empty), by row index.
    pub short_orbit_exceptions: Vec<(usize, SolutionSet)>,
}

/// Solve every ordered row pair and every short-orbit system of a case.
pub fn run_case(case: &CaseSpec) -> Result<CaseReport, LinesError> {
    let case_index = cases()
        .iter()
        .position(|c| c.residue == case.residue)
        .expect("case comes from the table set");
    let mut exceptions = Vec::new();
    for (i1, row1) in case.rows.iter().enumerate() {
        for (i2, row2) in case.rows.iter().enumerate() {
            let system = repeated_block_system(case, row1, row2);
            let sols = solve_exact(&system)?;
            if !sols.is_empty() {
                exceptions.push(ExceptionEntry {
                    row1: i1 + 1,
                    row2: i2 + 1,
                    solutions: sols,
                });
            }
        }
    }
    let mut short_orbit_exceptions = Vec::new();
    for (i, row) in case.rows.iter().enumerate() {
        let system = short_orbit_system(case, row);
        let sols = solve_exact(&system)?;
        if !sols.is_empty() {
            short_orbit_exceptions.push((i + 1, sols));
        }
    }
    Ok(CaseReport {
        case_index,
        case_label: case.label,
        exceptions,
        short_orbit_exceptions,
    })
}

pub fn run_all() -> Result<Vec<CaseReport>, LinesError> {
    cases().iter().map(run_case).collect()
}

fn render_linear(offset: i64, step: i64) -> String {
    match (offset, step) {
        (_, 0) => format!("{offset}"),
        (0, 1) => "C".to_string(),
        (0, s) => format!("{s}C"),
        (o, 1) => format!("{o}+C"),
        (o, s) if s > 0 => format!("{o}+{s}C"),
        (o, s) => format!("{o}-{}C", -s),
    }
}

fn render_solutions(sols: &SolutionSet) -> String {
    match sols {
        SolutionSet::Empty => "empty".to_string(),
        SolutionSet::Finite(list) => {
            let parts: Vec<String> = list
                .iter()
                .map(|s| format!("(j1={}, j2={}, r={})", s.0, s.1, s.2))
                .collect();
            format!("{{{}}}", parts.join(", "))
        }
        SolutionSet::Parametric(f) => format!(
            "{{j1={}, j2={}, r={}; C>=0}}",
            render_linear(f.base.0, f.step.0),
            render_linear(f.base.1, f.step.1),
            render_linear(f.base.2, f.step.2),
        ),
    }
}

fn render_v_info(case: &CaseSpec, sols: &SolutionSet) -> String {
    let v = case.v_of_r;
    match sols {
        SolutionSet::Empty => String::new(),
        SolutionSet::Finite(list) => {
            let parts: Vec<String> = list
                .iter()
                .map(|s| {
                    let val = v.eval_r(s.2);
                    format!("v={val}, v mod 6 = {}", val.rem_euclid(6))
                })
                .collect();
            format!(" [{}]", parts.join("; "))
        }
        SolutionSet::Parametric(f) => {
            let v0 = v.eval_r(f.base.2);
            let step = v.cr * f.step.2;
            if step % 6 == 0 {
                format!(
                    " [v={}, v mod 6 = {}]",
                    render_linear(v0, step),
                    v0.rem_euclid(6)
                )
            } else {
                format!(" [v={}]", render_linear(v0, step))
            }
        }
    }
}

/// The pinned text report: one line per non-empty system.
pub fn report_text(reports: &[CaseReport]) -> String {
    let mut out = String::new();
    out.push_str("exception cases (repeated-block systems with solutions)\n");
    out.push_str("case, first line, second line, solution\n");
    for report in reports {
        let case = &cases()[report.case_index];
        for e in &report.exceptions {
            out.push_str(&format!(
                "{}, {}, {}, {}{}\n",
                report.case_label,
                e.row1,
                e.row2,
                render_solutions(&e.solutions),
                render_v_info(case, &e.solutions),
            ));
        }
    }
    let any_short = reports.iter().any(|r| !r.short_orbit_exceptions.is_empty());
    if any_short {
        out.push_str("short-orbit systems with solutions:\n");
        for report in reports {
            for (row, sols) in &report.short_orbit_exceptions {
                out.push_str(&format!(
                    "{}, {}, {}\n",
                    report.case_label,
                    row,
                    render_solutions(sols),
                ));
            }
        }
    } else {
        out.push_str("short-orbit systems: all empty\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(ix: usize) -> &'static CaseSpec {
        &cases()[ix]
    }

    fn rb_system(case_ix: usize, row1: usize, row2: usize) -> LinearSystem {
        let c = case(case_ix);
        repeated_block_system(c, &c.rows[row1 - 1], &c.rows[row2 - 1])
    }

    #[test]
    fn system_for_case_4k_rows_1_1_matches_the_worked_form() {
        // 8 + 2j1 + 2j2 = 7 + j2 + 2r  and  11 + j1 + 2j2 + 2r = 1 + 2(12 + 4r)
        let s = rb_system(0, 1, 1);
        assert_eq!(
            s.eq1,
            LinEq {
                cj1: 2,
                cj2: 1,
                cr: -2,
                rhs: -1
            }
        );
        assert_eq!(
            s.eq2,
            LinEq {
                cj1: 1,
                cj2: 2,
                cr: -6,
                rhs: 14
            }
        );
        assert_eq!(solve_exact(&s).unwrap(), SolutionSet::Empty);
    }

    #[test]
    fn case_4k_rows_3_1_is_the_parametric_family() {
        let s = rb_system(0, 3, 1);
        let got = solve_exact(&s).unwrap();
        let known = SolutionSet::Parametric(ParametricFamily::from_offset(
            (0, 6, 4),
            (2, 2, 3),
            2,
        ));
        assert!(got.same_solutions(&known), "{got:?}");
        if let SolutionSet::Parametric(f) = &got {
            assert_eq!(f.base, (4, 10, 10));
            assert_eq!(f.step, (2, 2, 3));
            assert_eq!(s.eq1.residual_along(f), (0, 0));
            assert_eq!(s.eq2.residual_along(f), (0, 0));
        }
    }

    #[test]
    fn case_4k_rows_3_2_is_the_single_point() {
        let s = rb_system(0, 3, 2);
        assert_eq!(
            solve_exact(&s).unwrap(),
            SolutionSet::Finite(vec![(1, 0, 5)])
        );
    }

    #[test]
    fn case_4k3_rows_9_1_is_the_single_point() {
        let s = rb_system(3, 9, 1);
        assert_eq!(
            solve_exact(&s).unwrap(),
            SolutionSet::Finite(vec![(0, 1, 6)])
        );
    }

    #[test]
    fn case_4k1_rows_1_1_and_2_7_are_empty() {
        assert_eq!(solve_exact(&rb_system(1, 1, 1)).unwrap(), SolutionSet::Empty);
        assert_eq!(solve_exact(&rb_system(1, 2, 7)).unwrap(), SolutionSet::Empty);
        assert_eq!(solve_exact(&rb_system(1, 7, 2)).unwrap(), SolutionSet::Empty);
    }

    #[test]
    fn short_orbit_systems_from_the_worked_cases_are_empty() {
        // 4k row (5); 4k+2 row (1) forces r = 1/4; 4k+3 row (2) forces r = 1/2.
        for (case_ix, row) in [(0, 5), (2, 1), (3, 2)] {
            let c = case(case_ix);
            let s = short_orbit_system(c, &c.rows[row - 1]);
            assert_eq!(solve_exact(&s).unwrap(), SolutionSet::Empty, "{case_ix}/{row}");
        }
    }

    #[test]
    fn brute_force_case_4k_rows_3_1_up_to_r20() {
        let s = rb_system(0, 3, 1);
        assert_eq!(
            brute_force(&s, 20),
            vec![(4, 10, 10), (6, 12, 13), (8, 14, 16), (10, 16, 19)]
        );
        assert_eq!(solve_exact(&s).unwrap().up_to_r(20), brute_force(&s, 20));
    }

    #[test]
    fn brute_force_case_4k3_rows_9_1_up_to_r20() {
        let s = rb_system(3, 9, 1);
        assert_eq!(brute_force(&s, 20), vec![(0, 1, 6)]);
    }

    #[test]
    fn brute_force_empty_systems_stay_empty_to_r200() {
        for (case_ix, r1, r2) in [(0, 1, 1), (0, 1, 3), (1, 2, 7), (2, 2, 2), (3, 1, 2)] {
            let s = rb_system(case_ix, r1, r2);
            if solve_exact(&s).unwrap().is_empty() {
                assert_eq!(brute_force(&s, 200), vec![], "{case_ix} {r1} {r2}");
            }
        }
    }

    #[test]
    fn run_case_4k_finds_exactly_the_two_exceptions() {
        let report = run_case(case(0)).unwrap();
        let pairs: Vec<(usize, usize)> =
            report.exceptions.iter().map(|e| (e.row1, e.row2)).collect();
        assert_eq!(pairs, vec![(3, 1), (3, 2)]);
        assert!(report.short_orbit_exceptions.is_empty());
    }

    #[test]
    fn run_case_4k2_finds_one_exception() {
        let report = run_case(case(2)).unwrap();
        let pairs: Vec<(usize, usize)> =
            report.exceptions.iter().map(|e| (e.row1, e.row2)).collect();
        assert_eq!(pairs, vec![(3, 1)]);
        let known = SolutionSet::Parametric(ParametricFamily::from_offset(
            (0, -2, 0),
            (2, 2, 3),
            2,
        ));
        assert!(report.exceptions[0].solutions.same_solutions(&known));
    }

    #[test]
    fn all_cases_have_six_exceptions_total() {
        let reports = run_all().unwrap();
        let total: usize = reports.iter().map(|r| r.exceptions.len()).sum();
        assert_eq!(total, 6);
        assert!(reports.iter().all(|r| r.short_orbit_exceptions.is_empty()));
    }

    #[test]
    fn degenerate_systems_are_surfaced() {
        let zero = LinEq {
            cj1: 0,
            cj2: 0,
            cr: 0,
            rhs: 0,
        };
        let s = LinearSystem {
            eq1: zero,
            eq2: zero,
            j1_max: Some(AffineForm::new(5, 0, 0)),
            j2_max: None,
            r_min: 0,
        };
        assert_eq!(solve_exact(&s), Err(LinesError::DegenerateSystem));
    }

    #[test]
    fn finite_interval_families_are_enumerated() {
        // j1 - r = 0 twice over, with j1 <= 3: solutions (0,0,0)..(3,0,3).
        let eq = LinEq {
            cj1: 1,
            cj2: 0,
            cr: -1,
            rhs: 0,
        };
        let s = LinearSystem {
            eq1: eq,
            eq2: LinEq {
                cj1: 2,
                cj2: 0,
                cr: -2,
                rhs: 0,
            },
            j1_max: Some(AffineForm::new(3, 0, 0)),
            j2_max: None,
            r_min: 0,
        };
        assert_eq!(
            solve_exact(&s).unwrap(),
            SolutionSet::Finite(vec![(0, 0, 0), (1, 0, 1), (2, 0, 2), (3, 0, 3)])
        );
    }

    #[test]
    fn report_text_is_stable() {
        let text = report_text(&run_all().unwrap());
        let want = "\
exception cases (repeated-block systems with solutions)
case, first line, second line, solution
4k, 3, 1, {j1=4+2C, j2=10+2C, r=10+3C; C>=0} [v=105+24C, v mod 6 = 3]
4k, 3, 2, {(j1=1, j2=0, r=5)} [v=65, v mod 6 = 5]
4k+1, 3, 1, {j1=2+2C, j2=5+2C, r=5+3C; C>=0} [v=59+24C, v mod 6 = 5]
4k+2, 3, 1, {j1=4+2C, j2=2+2C, r=6+3C; C>=0} [v=53+24C, v mod 6 = 5]
4k+3, 8, 1, {j1=9+2C, j2=4+2C, r=11+3C; C>=0} [v=95+24C, v mod 6 = 5]
4k+3, 9, 1, {(j1=0, j2=1, r=6)} [v=55, v mod 6 = 1]
short-orbit systems: all empty
";
        assert_eq!(text, want);
    }
}
