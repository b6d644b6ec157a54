//! Two-phase dense revised simplex with Bland's anti-cycling rule.
//!
//! The solver works on an internal standard form `min c'x, Ax = b, x >= 0`:
//! finite lower bounds are shifted to zero, free variables are split, finite
//! upper bounds become explicit rows. The basis inverse is kept dense and
//! refactorized periodically to bound drift.

use super::{LinearProgram, LpSolution, LpStatus, Relation, Sense, SolverOptions};
use crate::error::{Error, Result};

const REFACTOR_EVERY: usize = 256;

#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `x = y + offset`
    Shift { col: usize, offset: f64 },
    /// `x = y_pos - y_neg`
    Split { pos: usize, neg: usize },
    /// `x = offset - y` (unbounded below, finite upper bound)
    Flipped { col: usize, offset: f64 },
}

enum RunOutcome {
    Optimal,
    Unbounded,
}

struct Tableau {
    m: usize,
    /// Sparse columns of the full constraint matrix (structural + logical).
    cols: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    banned: Vec<bool>,
    /// Dense basis inverse, row-major `m x m`.
    binv: Vec<f64>,
    xb: Vec<f64>,
    rhs: Vec<f64>,
    pivots: usize,
}

impl Tableau {
    fn dual_row(&self) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for r in 0..m {
                acc += self.cost[self.basis[r]] * self.binv[r * m + i];
            }
            *yi = acc;
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64]) -> f64 {
        let mut rc = self.cost[j];
        for &(i, v) in &self.cols[j] {
            rc -= y[i] * v;
        }
        rc
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut d = vec![0.0; m];
        for (r, dr) in d.iter_mut().enumerate() {
            let mut acc = 0.0;
            for &(i, v) in &self.cols[j] {
                acc += self.binv[r * m + i] * v;
            }
            *dr = acc;
        }
        d
    }

    /// Exchanges the basic variable of `row` for column `j` along direction
    /// `d = B^-1 A_j`. Works for any nonzero pivot element.
    fn pivot(&mut self, row: usize, j: usize, d: &[f64]) {
        let m = self.m;
        let piv = d[row];
        let theta = self.xb[row] / piv;
        for r in 0..m {
            if r != row {
                self.xb[r] -= theta * d[r];
                if self.xb[r] < 0.0 && self.xb[r] > -1e-9 {
                    self.xb[r] = 0.0;
                }
            }
        }
        self.xb[row] = theta;
        let inv_piv = 1.0 / piv;
        for i in 0..m {
            self.binv[row * m + i] *= inv_piv;
        }
        for r in 0..m {
            if r != row {
                let factor = d[r];
                if factor != 0.0 {
                    for i in 0..m {
                        self.binv[r * m + i] -= factor * self.binv[row * m + i];
                    }
                }
            }
        }
        self.in_basis[self.basis[row]] = false;
        self.basis[row] = j;
        self.in_basis[j] = true;
        self.pivots += 1;
        if self.pivots % REFACTOR_EVERY == 0 {
            self.refactorize();
        }
    }

    /// Rebuilds the basis inverse from scratch by Gauss-Jordan elimination.
    fn refactorize(&mut self) {
        let m = self.m;
        if m == 0 {
            return;
        }
        let mut mat = vec![0.0; m * m];
        for (r, &col) in self.basis.iter().enumerate() {
            for &(i, v) in &self.cols[col] {
                mat[i * m + r] = v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for k in 0..m {
            let mut best = k;
            for r in k + 1..m {
                if mat[r * m + k].abs() > mat[best * m + k].abs() {
                    best = r;
                }
            }
            if best != k {
                for i in 0..m {
                    mat.swap(k * m + i, best * m + i);
                    inv.swap(k * m + i, best * m + i);
                }
            }
            let piv = mat[k * m + k];
            if piv.abs() < 1e-14 {
                // Singular refactorization should not happen for a valid
                // basis; keep the incrementally updated inverse instead.
                return;
            }
            let inv_piv = 1.0 / piv;
            for i in 0..m {
                mat[k * m + i] *= inv_piv;
                inv[k * m + i] *= inv_piv;
            }
            for r in 0..m {
                if r != k {
                    let f = mat[r * m + k];
                    if f != 0.0 {
                        for i in 0..m {
                            mat[r * m + i] -= f * mat[k * m + i];
                            inv[r * m + i] -= f * inv[k * m + i];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        let mut xb = vec![0.0; m];
        for (r, x) in xb.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in 0..m {
                acc += self.binv[r * m + i] * self.rhs[i];
            }
            *x = if acc < 0.0 && acc > -1e-9 { 0.0 } else { acc };
        }
        self.xb = xb;
    }

    /// Runs Bland-rule simplex iterations under the current cost vector.
    fn run(&mut self, pivot_tol: f64, budget: &mut usize) -> Result<RunOutcome> {
        loop {
            if *budget == 0 {
                return Err(Error::SolverStall("simplex iteration cap exceeded".into()));
            }
            *budget -= 1;
            let y = self.dual_row();
            let mut entering = None;
            for j in 0..self.cols.len() {
                if self.in_basis[j] || self.banned[j] {
                    continue;
                }
                if self.reduced_cost(j, &y) < -pivot_tol {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(RunOutcome::Optimal);
            };
            let d = self.ftran(j);
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                if d[r] > pivot_tol {
                    let ratio = self.xb[r].max(0.0) / d[r];
                    match leave {
                        None => leave = Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - pivot_tol
                                || (ratio < lratio + pivot_tol && self.basis[r] < self.basis[lr])
                            {
                                leave = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Ok(RunOutcome::Unbounded);
            };
            self.pivot(row, j, &d);
        }
    }

    fn objective_value(&self) -> f64 {
        self.basis.iter().zip(&self.xb).map(|(&c, &x)| self.cost[c] * x).sum()
    }
}

pub(super) fn solve(lp: &LinearProgram, options: &SolverOptions) -> Result<LpSolution> {
    let n = lp.num_vars();
    let obj_sign = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };

    // Map original variables onto non-negative structural columns.
    let mut maps = Vec::with_capacity(n);
    let mut struct_cost: Vec<f64> = Vec::new();
    let mut upper_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let (l, u) = lp.bounds[j];
        let cj = obj_sign * lp.objective[j];
        if l.is_finite() {
            let col = struct_cost.len();
            struct_cost.push(cj);
            maps.push(VarMap::Shift { col, offset: l });
            if u.is_finite() {
                upper_rows.push((col, u - l));
            }
        } else if u.is_finite() {
            let col = struct_cost.len();
            struct_cost.push(-cj);
            maps.push(VarMap::Flipped { col, offset: u });
        } else {
            let pos = struct_cost.len();
            struct_cost.push(cj);
            let neg = struct_cost.len();
            struct_cost.push(-cj);
            maps.push(VarMap::Split { pos, neg });
        }
    }
    let ns = struct_cost.len();
    let m0 = lp.constraints.len();

    // Substituted rows: sparse coefficients over structural columns.
    let mut rows: Vec<(Vec<(usize, f64)>, Relation, f64)> = Vec::with_capacity(m0);
    for c in &lp.constraints {
        let mut coeffs: Vec<(usize, f64)> = Vec::new();
        let mut rhs = c.rhs;
        for (j, &a) in c.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match maps[j] {
                VarMap::Shift { col, offset } => {
                    coeffs.push((col, a));
                    rhs -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    coeffs.push((pos, a));
                    coeffs.push((neg, -a));
                }
                VarMap::Flipped { col, offset } => {
                    coeffs.push((col, -a));
                    rhs -= a * offset;
                }
            }
        }
        rows.push((coeffs, c.relation, rhs));
    }
    for &(col, bound) in &upper_rows {
        rows.push((vec![(col, 1.0)], Relation::Le, bound));
    }
    let m = rows.len();

    // Normalize to non-negative right-hand sides.
    let mut negated = vec![false; m];
    for (i, row) in rows.iter_mut().enumerate() {
        if row.2 < 0.0 {
            negated[i] = true;
            row.2 = -row.2;
            for entry in row.0.iter_mut() {
                entry.1 = -entry.1;
            }
            row.1 = match row.1 {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    // Assemble sparse columns: structural, then slack/surplus, then
    // artificial. Initial basis is the identity (slacks and artificials).
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); ns];
    for (i, (coeffs, _, _)) in rows.iter().enumerate() {
        for &(col, v) in coeffs {
            cols[col].push((i, v));
        }
    }
    let mut cost = struct_cost.clone();
    let mut basis = Vec::with_capacity(m);
    let mut artificials = Vec::new();
    for (i, (_, rel, _)) in rows.iter().enumerate() {
        match rel {
            Relation::Le => {
                cols.push(vec![(i, 1.0)]);
                cost.push(0.0);
                basis.push(cols.len() - 1);
            }
            Relation::Ge => {
                cols.push(vec![(i, -1.0)]);
                cost.push(0.0);
                cols.push(vec![(i, 1.0)]);
                cost.push(0.0);
                artificials.push(cols.len() - 1);
                basis.push(cols.len() - 1);
            }
            Relation::Eq => {
                cols.push(vec![(i, 1.0)]);
                cost.push(0.0);
                artificials.push(cols.len() - 1);
                basis.push(cols.len() - 1);
            }
        }
    }
    let ncols = cols.len();
    let mut in_basis = vec![false; ncols];
    for &b in &basis {
        in_basis[b] = true;
    }
    let rhs: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let mut binv = vec![0.0; m * m];
    for i in 0..m {
        binv[i * m + i] = 1.0;
    }

    let mut tab = Tableau {
        m,
        cols,
        cost: cost.clone(),
        basis,
        in_basis,
        banned: vec![false; ncols],
        binv,
        xb: rhs.clone(),
        rhs,
        pivots: 0,
    };

    let mut budget = options
        .max_iterations
        .unwrap_or_else(|| 10 * (m0 + n) * (m0 + n))
        .max(64);
    let empty = LpSolution {
        status: LpStatus::Infeasible,
        objective: 0.0,
        primal: Vec::new(),
        duals: Vec::new(),
    };

    // Phase 1: minimize the sum of artificials.
    if !artificials.is_empty() {
        let mut phase1 = vec![0.0; ncols];
        for &a in &artificials {
            phase1[a] = 1.0;
        }
        tab.cost = phase1;
        match tab.run(options.pivot_tol, &mut budget)? {
            RunOutcome::Optimal => {}
            RunOutcome::Unbounded => {
                return Err(Error::Invariant("phase-1 objective unbounded".into()))
            }
        }
        if tab.objective_value() > options.feasibility_tol {
            return Ok(empty);
        }
        // Drive remaining artificials out of the basis where possible.
        let is_artificial: Vec<bool> = {
            let mut v = vec![false; ncols];
            for &a in &artificials {
                v[a] = true;
            }
            v
        };
        for r in 0..m {
            if !is_artificial[tab.basis[r]] {
                continue;
            }
            let mut replaced = false;
            for j in 0..ncols {
                if is_artificial[j] || tab.in_basis[j] {
                    continue;
                }
                let d = tab.ftran(j);
                if d[r].abs() > options.pivot_tol {
                    tab.pivot(r, j, &d);
                    replaced = true;
                    break;
                }
            }
            // A row that cannot be cleared is redundant; its artificial
            // stays basic at zero and never leaves.
            let _ = replaced;
        }
        tab.cost = cost;
        for &a in &artificials {
            tab.banned[a] = true;
        }
    }

    // Phase 2.
    let status = match tab.run(options.pivot_tol, &mut budget)? {
        RunOutcome::Optimal => LpStatus::Optimal,
        RunOutcome::Unbounded => {
            return Ok(LpSolution { status: LpStatus::Unbounded, ..empty });
        }
    };

    // Recover the original primal vector.
    let mut internal = vec![0.0; ncols];
    for (r, &c) in tab.basis.iter().enumerate() {
        internal[c] = tab.xb[r].max(0.0);
    }
    let mut primal = vec![0.0; n];
    for (j, map) in maps.iter().enumerate() {
        primal[j] = match *map {
            VarMap::Shift { col, offset } => internal[col] + offset,
            VarMap::Split { pos, neg } => internal[pos] - internal[neg],
            VarMap::Flipped { col, offset } => offset - internal[col],
        };
    }
    let objective: f64 = lp
        .objective
        .iter()
        .zip(&primal)
        .map(|(&c, &x)| c * x)
        .sum();

    // Shadow prices for the original rows (upper-bound rows are dropped).
    let y = tab.dual_row();
    let mut duals = Vec::with_capacity(m0);
    for i in 0..m0 {
        let raw = if negated[i] { -y[i] } else { y[i] };
        duals.push(obj_sign * raw);
    }

    Ok(LpSolution { status, objective, primal, duals })
}
