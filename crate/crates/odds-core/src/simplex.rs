//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! Sized for the problems this crate builds (a few hundred rows at most),
//! so the tableau is kept dense and pricing is Bland's smallest-index rule
//! throughout: termination is guaranteed and speed is irrelevant at this
//! scale.  Everything is deterministic — identical input produces the
//! identical pivot sequence and bitwise-identical output.
//!
//! General bounds are reduced to nonnegative columns: finite lower bounds
//! are shifted out, variables with only a finite upper bound are mirrored,
//! free variables are split into differences, and residual finite upper
//! bounds become explicit rows appended after the user's constraints.

use thiserror::Error;

use crate::lp::{LpProblem, Rel, Sense, VarId};

/// Pivot elements smaller than this are refused.
pub const PIVOT_TOL: f64 = 1e-9;
/// Feasibility tolerance: phase-1 leftovers below this (scaled) are accepted.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Reported values within this of zero are snapped to zero.
pub const SNAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error("numerically singular basis: {detail}")]
    SingularBasis { detail: String },
    #[error("iteration limit {limit} exceeded")]
    IterationLimit { limit: usize },
}

/// Optimal primal/dual data.  Dual values follow the shadow-price
/// convention of the problem's own sense: the rate of change of the
/// optimal objective per unit of right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    /// Per declared variable, in declaration order.
    pub primal: Vec<f64>,
    /// Per constraint, in declaration order.
    pub duals: Vec<f64>,
}

impl LpSolution {
    pub fn value(&self, var: VarId) -> f64 {
        self.primal[var.0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    /// Unwraps the optimal solution; panics otherwise.
    pub fn expect_optimal(self, context: &str) -> LpSolution {
        match self {
            LpOutcome::Optimal(sol) => sol,
            other => panic!("{context}: expected optimal, got {other:?}"),
        }
    }
}

/// How an original variable maps onto tableau columns.
enum ColMap {
    /// `x = offset + col`, `col >= 0`.
    Shifted { col: usize, offset: f64 },
    /// `x = offset - col`, `col >= 0`.
    Mirrored { col: usize, offset: f64 },
    /// `x = pos - neg`, both `>= 0`.
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<f64>>, // each row: n_cols coefficients then rhs
    basis: Vec<usize>,
    /// Tableau row -> original row index (user rows first, bound rows after).
    row_origin: Vec<usize>,
    n_cols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.rows[r][self.n_cols]
    }

    /// Pivots on (row, col): normalizes the row and eliminates the column
    /// from every other row and from the cost row.
    fn pivot(&mut self, r: usize, c: usize, cost: &mut [f64]) -> Result<(), SimplexError> {
        let pivot_val = self.rows[r][c];
        if !pivot_val.is_finite() || pivot_val.abs() < PIVOT_TOL {
            return Err(SimplexError::SingularBasis {
                detail: format!("pivot element {pivot_val:.3e} at basis column {c}"),
            });
        }
        let inv = 1.0 / pivot_val;
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        let pivot_row = self.rows[r].clone();
        for (rr, row) in self.rows.iter_mut().enumerate() {
            if rr == r {
                continue;
            }
            let factor = row[c];
            if factor != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
                row[c] = 0.0;
            }
        }
        let factor = cost[c];
        if factor != 0.0 {
            for (v, pv) in cost.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
            cost[c] = 0.0;
        }
        self.basis[r] = c;
        Ok(())
    }
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

/// Runs Bland's rule to optimality of the given cost row.
/// `allow` filters the columns that may enter.
fn run_phase(
    tab: &mut Tableau,
    cost: &mut [f64],
    allow: impl Fn(usize) -> bool,
    max_iter: usize,
) -> Result<PhaseEnd, SimplexError> {
    for _ in 0..max_iter {
        // Entering: smallest column index with a negative reduced cost.
        let entering = (0..tab.n_cols).find(|&j| allow(j) && cost[j] < -PIVOT_TOL);
        let Some(c) = entering else {
            return Ok(PhaseEnd::Optimal);
        };
        // Leaving: tightest ratio; ties go to the smallest basis variable.
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..tab.rows.len() {
            let a = tab.rows[r][c];
            if a > PIVOT_TOL {
                let theta = tab.rhs(r).max(0.0) / a;
                let better = match leave {
                    None => true,
                    Some((lr, lt)) => {
                        theta < lt || (theta == lt && tab.basis[r] < tab.basis[lr])
                    }
                };
                if better {
                    leave = Some((r, theta));
                }
            }
        }
        let Some((r, _)) = leave else {
            return Ok(PhaseEnd::Unbounded);
        };
        tab.pivot(r, c, cost)?;
    }
    Err(SimplexError::IterationLimit { limit: max_iter })
}

/// Solves a linear program with the two-phase dense simplex method.
///
/// Returns the optimum with primal values, duals, and objective, or the
/// infeasible/unbounded verdict.  Numerical breakdown (a singular basis,
/// an exhausted iteration budget) is reported as an error, never as a
/// spurious infeasibility.
pub fn solve_lp(prob: &LpProblem) -> Result<LpOutcome, SimplexError> {
    // --- Column transformation -------------------------------------------
    let mut col_maps: Vec<ColMap> = Vec::with_capacity(prob.num_vars());
    let mut n_structural = 0usize;
    let mut bound_rows: Vec<(usize, f64)> = Vec::new(); // (column, upper bound)
    for var in prob.variables() {
        if var.lower.is_finite() {
            let col = n_structural;
            n_structural += 1;
            if var.upper.is_finite() {
                bound_rows.push((col, var.upper - var.lower));
            }
            col_maps.push(ColMap::Shifted {
                col,
                offset: var.lower,
            });
        } else if var.upper.is_finite() {
            let col = n_structural;
            n_structural += 1;
            col_maps.push(ColMap::Mirrored {
                col,
                offset: var.upper,
            });
        } else {
            let pos = n_structural;
            let neg = n_structural + 1;
            n_structural += 2;
            col_maps.push(ColMap::Split { pos, neg });
        }
    }

    // --- Row assembly ------------------------------------------------------
    struct RawRow {
        coeffs: Vec<f64>,
        rel: Rel,
        rhs: f64,
        flipped: bool,
    }
    let n_user = prob.num_constraints();
    let n_rows = n_user + bound_rows.len();
    let mut raw_rows: Vec<RawRow> = Vec::with_capacity(n_rows);
    for con in prob.constraints() {
        let mut coeffs = vec![0.0; n_structural];
        let mut rhs = con.rhs;
        for &(VarId(j), a) in &con.terms {
            match col_maps[j] {
                ColMap::Shifted { col, offset } => {
                    coeffs[col] += a;
                    rhs -= a * offset;
                }
                ColMap::Mirrored { col, offset } => {
                    coeffs[col] -= a;
                    rhs -= a * offset;
                }
                ColMap::Split { pos, neg } => {
                    coeffs[pos] += a;
                    coeffs[neg] -= a;
                }
            }
        }
        raw_rows.push(RawRow {
            coeffs,
            rel: con.rel,
            rhs,
            flipped: false,
        });
    }
    for &(col, ub) in &bound_rows {
        let mut coeffs = vec![0.0; n_structural];
        coeffs[col] = 1.0;
        raw_rows.push(RawRow {
            coeffs,
            rel: Rel::Le,
            rhs: ub,
            flipped: false,
        });
    }
    let mut rhs_scale = 1.0f64;
    for row in raw_rows.iter_mut() {
        if row.rhs < 0.0 {
            for v in row.coeffs.iter_mut() {
                *v = -*v;
            }
            row.rhs = -row.rhs;
            row.rel = match row.rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
            row.flipped = true;
        }
        rhs_scale = rhs_scale.max(row.rhs);
    }

    // --- Slack, surplus, artificial columns --------------------------------
    let n_slack = raw_rows
        .iter()
        .filter(|r| matches!(r.rel, Rel::Le | Rel::Ge))
        .count();
    let n_artificial = raw_rows
        .iter()
        .filter(|r| matches!(r.rel, Rel::Ge | Rel::Eq))
        .count();
    let first_slack = n_structural;
    let first_artificial = n_structural + n_slack;
    let n_cols = first_artificial + n_artificial;

    let mut tab = Tableau {
        rows: Vec::with_capacity(n_rows),
        basis: Vec::with_capacity(n_rows),
        row_origin: (0..n_rows).collect(),
        n_cols,
    };
    // id_col[r]: the column that starts as +identity in row r; its reduced
    // cost at optimality yields the row's dual value.
    let mut id_col = vec![0usize; n_rows];
    let mut next_slack = first_slack;
    let mut next_artificial = first_artificial;
    for (r, raw) in raw_rows.iter().enumerate() {
        let mut row = vec![0.0; n_cols + 1];
        row[..n_structural].copy_from_slice(&raw.coeffs);
        row[n_cols] = raw.rhs;
        match raw.rel {
            Rel::Le => {
                row[next_slack] = 1.0;
                tab.basis.push(next_slack);
                id_col[r] = next_slack;
                next_slack += 1;
            }
            Rel::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
                row[next_artificial] = 1.0;
                tab.basis.push(next_artificial);
                id_col[r] = next_artificial;
                next_artificial += 1;
            }
            Rel::Eq => {
                row[next_artificial] = 1.0;
                tab.basis.push(next_artificial);
                id_col[r] = next_artificial;
                next_artificial += 1;
            }
        }
        tab.rows.push(row);
    }

    let max_iter = 1000 + 200 * (n_rows + n_cols);

    // --- Phase 1: minimize the artificial sum -------------------------------
    if n_artificial > 0 {
        let mut cost = vec![0.0; n_cols + 1];
        cost[first_artificial..n_cols].fill(1.0);
        // Price out the basic artificials.
        for r in 0..tab.rows.len() {
            if tab.basis[r] >= first_artificial {
                let row = tab.rows[r].clone();
                for (v, rv) in cost.iter_mut().zip(&row) {
                    *v -= rv;
                }
            }
        }
        match run_phase(&mut tab, &mut cost, |_| true, max_iter)? {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => {
                return Err(SimplexError::SingularBasis {
                    detail: "phase 1 reported unbounded".into(),
                });
            }
        }
        let infeasibility = -cost[n_cols];
        if infeasibility > FEASIBILITY_TOL * rhs_scale.max(1.0) {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive leftover artificials out of the basis with degenerate
        // pivots; rows that offer no pivot are redundant and get dropped.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= first_artificial {
                // Largest-magnitude pivot keeps the degenerate basic value
                // tiny after the swap.
                let col = (0..first_artificial)
                    .filter(|&j| tab.rows[r][j].abs() > PIVOT_TOL)
                    .max_by(|&a, &b| {
                        tab.rows[r][a]
                            .abs()
                            .partial_cmp(&tab.rows[r][b].abs())
                            .expect("tableau entries are finite")
                            .then(b.cmp(&a))
                    });
                match col {
                    Some(c) => tab.pivot(r, c, &mut cost)?,
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                        tab.row_origin.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // --- Phase 2: the real objective ----------------------------------------
    // Work in minimization form; maximization negates in and out.
    let sense_sign = match prob.sense() {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut min_obj = vec![0.0; n_cols + 1];
    for (var, map) in prob.variables().iter().zip(&col_maps) {
        let c = sense_sign * var.objective;
        match *map {
            ColMap::Shifted { col, .. } => min_obj[col] += c,
            ColMap::Mirrored { col, .. } => min_obj[col] -= c,
            ColMap::Split { pos, neg } => {
                min_obj[pos] += c;
                min_obj[neg] -= c;
            }
        }
    }
    let mut cost = min_obj;
    for r in 0..tab.rows.len() {
        let cb = cost[tab.basis[r]];
        if cb != 0.0 {
            let row = tab.rows[r].clone();
            for (v, rv) in cost.iter_mut().zip(&row) {
                *v -= cb * rv;
            }
            cost[tab.basis[r]] = 0.0;
        }
    }
    let banned_from = first_artificial;
    match run_phase(&mut tab, &mut cost, |j| j < banned_from, max_iter)? {
        PhaseEnd::Optimal => {}
        PhaseEnd::Unbounded => return Ok(LpOutcome::Unbounded),
    }

    // --- Extraction ----------------------------------------------------------
    let mut col_values = vec![0.0; n_cols];
    for r in 0..tab.rows.len() {
        col_values[tab.basis[r]] = tab.rhs(r);
    }
    let snap = |v: f64| if v.abs() <= SNAP_TOL { 0.0 } else { v };
    let primal: Vec<f64> = col_maps
        .iter()
        .map(|map| {
            snap(match *map {
                ColMap::Shifted { col, offset } => offset + col_values[col],
                ColMap::Mirrored { col, offset } => offset - col_values[col],
                ColMap::Split { pos, neg } => col_values[pos] - col_values[neg],
            })
        })
        .collect();
    let objective: f64 = prob
        .variables()
        .iter()
        .zip(&primal)
        .map(|(var, x)| var.objective * x)
        .sum();
    if !objective.is_finite() {
        return Err(SimplexError::SingularBasis {
            detail: "non-finite objective after extraction".into(),
        });
    }

    // Duals: the reduced cost of row r's initial identity column equals
    // -lambda_r in minimization form; undo the sense and row flips.
    let mut duals = vec![0.0; n_user];
    for (r_orig, &col) in id_col.iter().enumerate().take(n_user) {
        if !tab.row_origin.contains(&r_orig) {
            continue; // redundant row dropped in phase 1: dual stays 0
        }
        let lambda_min = -cost[col];
        let flip = if raw_rows[r_orig].flipped { -1.0 } else { 1.0 };
        duals[r_orig] = snap(sense_sign * flip * lambda_min);
    }

    Ok(LpOutcome::Optimal(LpSolution {
        objective,
        primal,
        duals,
    }))
}
