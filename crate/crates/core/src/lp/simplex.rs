//! Bounded-variable simplex with a dense basis inverse.
//!
//! Cold solves run a two-phase primal: row slacks (plus crash-basis hints
//! from the caller) give the starting basis, rows whose start value falls
//! outside its bounds get a unit artificial column, and phase 1 minimizes the
//! artificial sum. Pricing is Dantzig with a Bland fallback engaged after a
//! degenerate stall.
//!
//! Warm solves reuse a previous basis after bound changes (the
//! branch-and-bound case): the old basis stays dual feasible, so a bounded
//! dual simplex drives out the primal infeasibilities and the primal phase 2
//! finishes in a handful of pivots. Any trouble (singular basis, lost dual
//! feasibility, stalling) falls back to the cold path.
//!
//! The constraint matrix is equilibrated with power-of-two row/column scales
//! so scaling is exact in floating point.

use super::{LinearProgram, LpSolution, LpStatus, Relation, SolverOptions};

const PIVOT_TOL: f64 = 1e-9;
const RATIO_TOL: f64 = 1e-10;
const DUAL_TOL: f64 = 1e-7;
const DEGEN_STALL: usize = 60;
const REFACTOR_EVERY: usize = 100;
const DUAL_ITER_CAP: usize = 2000;

/// A reusable basis snapshot: basic column per row plus, for every
/// structural/slack column, whether a nonbasic one sits at its upper bound.
#[derive(Debug, Clone)]
pub(crate) struct WarmBasis {
    basis: Vec<usize>,
    at_upper: Vec<bool>,
}

pub(crate) fn solve(
    lp: &LinearProgram,
    lower: &[f64],
    upper: &[f64],
    options: &SolverOptions,
) -> LpSolution {
    solve_warm(lp, lower, upper, options, None).0
}

/// Solves `lp` under overriding variable bounds (used by branch-and-bound so
/// nodes do not clone the row data).
pub(crate) fn solve_with_bounds(
    lp: &LinearProgram,
    lower: &[f64],
    upper: &[f64],
    options: &SolverOptions,
) -> LpSolution {
    solve_warm(lp, lower, upper, options, None).0
}

/// Like [`solve_with_bounds`], reusing `warm` when possible. Returns the
/// final basis for the next resolve whenever the solve ended cleanly.
pub(crate) fn solve_warm(
    lp: &LinearProgram,
    lower: &[f64],
    upper: &[f64],
    options: &SolverOptions,
    warm: Option<&WarmBasis>,
) -> (LpSolution, Option<WarmBasis>) {
    if let Some(w) = warm {
        if let Some(outcome) = Worker::new(lp, lower, upper, options).run_warm(w) {
            return outcome;
        }
    }
    Worker::new(lp, lower, upper, options).run_cold()
}

struct Worker<'a> {
    lp: &'a LinearProgram,
    options: &'a SolverOptions,
    m: usize,
    n: usize,
    /// total columns: structural + slack + artificial
    ncols: usize,
    n_artificial: usize,
    cols: Vec<Vec<(usize, f64)>>,
    lo: Vec<f64>,
    up: Vec<f64>,
    cost: Vec<f64>,
    phase1_cost: Vec<f64>,
    b: Vec<f64>,
    row_scale: Vec<f64>,
    col_scale: Vec<f64>,
    x: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<i64>,
    frozen: Vec<bool>,
    binv: Vec<f64>,
    iterations: usize,
    pivots_since_refactor: usize,
    stall: usize,
    bland: bool,
}

enum StepOutcome {
    Optimal,
    Unbounded,
    Moved,
    IterationLimit,
}

enum DualOutcome {
    PrimalFeasible,
    Infeasible,
    GiveUp,
}

fn pow2_scale(max_abs: f64) -> f64 {
    if max_abs <= 0.0 || !max_abs.is_finite() {
        return 1.0;
    }
    let e = max_abs.log2().round();
    (2.0f64).powi(-(e as i32))
}

impl<'a> Worker<'a> {
    fn new(lp: &'a LinearProgram, lower: &[f64], upper: &[f64], options: &'a SolverOptions) -> Self {
        let m = lp.n_rows();
        let n = lp.n_vars();

        let mut row_scale = vec![1.0; m];
        for (i, row) in lp.rows().iter().enumerate() {
            let max = row.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            row_scale[i] = pow2_scale(max);
        }
        let mut col_max = vec![0.0f64; n];
        for (i, row) in lp.rows().iter().enumerate() {
            for &(j, v) in row {
                col_max[j] = col_max[j].max((row_scale[i] * v).abs());
            }
        }
        let col_scale: Vec<f64> = col_max.iter().map(|&mx| pow2_scale(mx)).collect();

        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n + m];
        for (i, row) in lp.rows().iter().enumerate() {
            for &(j, v) in row {
                cols[j].push((i, row_scale[i] * v * col_scale[j]));
            }
        }
        for i in 0..m {
            cols[n + i].push((i, 1.0));
        }

        let mut lo = Vec::with_capacity(n + m);
        let mut up = Vec::with_capacity(n + m);
        for j in 0..n {
            lo.push(lower[j] / col_scale[j]);
            up.push(upper[j] / col_scale[j]);
        }
        for rel in lp.relations() {
            match rel {
                Relation::Le => {
                    lo.push(0.0);
                    up.push(f64::INFINITY);
                }
                Relation::Ge => {
                    lo.push(f64::NEG_INFINITY);
                    up.push(0.0);
                }
                Relation::Eq => {
                    lo.push(0.0);
                    up.push(0.0);
                }
            }
        }

        let mut cost = vec![0.0; n + m];
        for j in 0..n {
            cost[j] = lp.objective_vec()[j] * col_scale[j];
        }

        let b: Vec<f64> = lp.rhs().iter().zip(&row_scale).map(|(bi, ri)| bi * ri).collect();

        let frozen: Vec<bool> = (0..n + m).map(|j| up[j] - lo[j] <= 0.0).collect();

        Self {
            lp,
            options,
            m,
            n,
            ncols: n + m,
            n_artificial: 0,
            cols,
            lo,
            up,
            cost,
            phase1_cost: Vec::new(),
            b,
            row_scale,
            col_scale,
            x: Vec::new(),
            basis: Vec::new(),
            in_basis: Vec::new(),
            frozen,
            binv: Vec::new(),
            iterations: 0,
            pivots_since_refactor: 0,
            stall: 0,
            bland: false,
        }
    }

    // ---- cold path -------------------------------------------------------

    fn run_cold(mut self) -> (LpSolution, Option<WarmBasis>) {
        self.initial_point();
        let needs_phase1 = self.install_artificials();

        if needs_phase1 {
            match self.iterate(true) {
                StepOutcome::IterationLimit => {
                    return (self.extract(LpStatus::IterationLimit, false), None)
                }
                StepOutcome::Unbounded => {
                    // the artificial sum is bounded below by zero; a claimed
                    // unbounded ray is numerical failure
                    return (self.extract(LpStatus::IterationLimit, false), None);
                }
                _ => {}
            }
            let infeas: f64 = (self.ncols - self.n_artificial..self.ncols)
                .map(|j| self.x[j].abs())
                .sum();
            if infeas > 1e-7 {
                return (self.extract(LpStatus::Infeasible, true), None);
            }
            for j in self.ncols - self.n_artificial..self.ncols {
                self.lo[j] = 0.0;
                self.up[j] = 0.0;
                self.frozen[j] = true;
                if self.in_basis[j] < 0 {
                    self.x[j] = 0.0;
                }
            }
        }

        self.finish_primal()
    }

    fn finish_primal(mut self) -> (LpSolution, Option<WarmBasis>) {
        match self.iterate(false) {
            StepOutcome::Optimal => {
                let warm = self.snapshot();
                (self.extract(LpStatus::Optimal, false), Some(warm))
            }
            StepOutcome::Unbounded => (self.extract(LpStatus::Unbounded, false), None),
            StepOutcome::IterationLimit => (self.extract(LpStatus::IterationLimit, false), None),
            StepOutcome::Moved => unreachable!(),
        }
    }

    /// Nonbasic structural variables start at their finite bound nearest
    /// zero; slacks start basic unless a crash hint claims the row.
    fn initial_point(&mut self) {
        let mut x = vec![0.0; self.ncols];
        for j in 0..self.n {
            let (lo, up) = (self.lo[j], self.up[j]);
            x[j] = if lo.is_finite() && up.is_finite() {
                if lo.abs() <= up.abs() {
                    lo
                } else {
                    up
                }
            } else if lo.is_finite() {
                lo
            } else if up.is_finite() {
                up
            } else {
                0.0
            };
        }
        let mut basis = Vec::with_capacity(self.m);
        let mut in_basis = vec![-1i64; self.ncols];
        for i in 0..self.m {
            let s = self.n + i;
            basis.push(s);
            in_basis[s] = i as i64;
        }
        let mut resid = self.b.clone();
        for j in 0..self.n {
            if x[j] != 0.0 {
                for &(i, v) in &self.cols[j] {
                    resid[i] -= v * x[j];
                }
            }
        }

        self.binv = identity(self.m);
        // crash hints: a designated single-row variable absorbs the residual
        // when its bounds allow, clearing the row without an artificial
        for &(row, var) in self.lp.basis_hints() {
            let col = &self.cols[var];
            if col.len() != 1 || col[0].0 != row || in_basis[var] >= 0 {
                continue;
            }
            let a = col[0].1;
            if a.abs() < 1e-12 {
                continue;
            }
            let val = x[var] + resid[row] / a;
            if val < self.lo[var] - 1e-9 || val > self.up[var] + 1e-9 {
                continue;
            }
            resid[row] = 0.0;
            let s = self.n + row;
            in_basis[s] = -1;
            basis[row] = var;
            in_basis[var] = row as i64;
            x[s] = 0.0;
            x[var] = val;
            // basis column is a * e_row; fix the inverse row
            for k in 0..self.m {
                self.binv[row * self.m + k] /= a;
            }
        }
        for i in 0..self.m {
            let s = self.n + i;
            if in_basis[s] == i as i64 {
                x[s] = resid[i];
            }
        }
        self.x = x;
        self.basis = basis;
        self.in_basis = in_basis;
    }

    /// Replaces infeasible basic slacks with unit artificial columns so the
    /// starting basis is primal feasible. Returns whether phase 1 is needed.
    fn install_artificials(&mut self) -> bool {
        let mut any = false;
        for i in 0..self.m {
            let bi = self.basis[i];
            let v = self.x[bi];
            let out_low = v < self.lo[bi] - 1e-9;
            let out_high = v > self.up[bi] + 1e-9;
            if !(out_low || out_high) {
                continue;
            }
            // only slack-basic rows can start infeasible (crash hints are
            // bound-checked), and the slack bound is always zero
            debug_assert!(bi >= self.n);
            any = true;
            let resid = v;
            let sign = if resid >= 0.0 { 1.0 } else { -1.0 };
            let a = self.ncols;
            self.cols.push(vec![(i, sign)]);
            self.lo.push(0.0);
            self.up.push(f64::INFINITY);
            self.cost.push(0.0);
            self.frozen.push(false);
            self.in_basis.push(i as i64);
            self.x.push(resid.abs());
            self.x[bi] = 0.0;
            self.in_basis[bi] = -1;
            self.basis[i] = a;
            self.ncols += 1;
            self.n_artificial += 1;
            if sign < 0.0 {
                for k in 0..self.m {
                    self.binv[i * self.m + k] = -self.binv[i * self.m + k];
                }
            }
        }
        if any {
            self.phase1_cost = vec![0.0; self.ncols];
            for j in self.ncols - self.n_artificial..self.ncols {
                self.phase1_cost[j] = 1.0;
            }
        }
        any
    }

    // ---- warm path -------------------------------------------------------

    /// Attempts a warm solve; `None` means fall back to the cold path.
    fn run_warm(mut self, warm: &WarmBasis) -> Option<(LpSolution, Option<WarmBasis>)> {
        if warm.basis.len() != self.m || warm.at_upper.len() != self.n + self.m {
            return None;
        }
        let mut in_basis = vec![-1i64; self.ncols];
        for (i, &j) in warm.basis.iter().enumerate() {
            if j >= self.ncols || in_basis[j] >= 0 {
                return None;
            }
            in_basis[j] = i as i64;
        }
        self.basis = warm.basis.clone();
        self.in_basis = in_basis;

        // nonbasic point under the current bounds
        let mut x = vec![0.0; self.ncols];
        for j in 0..self.ncols {
            if self.in_basis[j] >= 0 {
                continue;
            }
            let (lo, up) = (self.lo[j], self.up[j]);
            x[j] = if warm.at_upper[j] && up.is_finite() {
                up
            } else if lo.is_finite() {
                lo
            } else if up.is_finite() {
                up
            } else {
                0.0
            };
        }
        self.x = x;
        self.binv = identity(self.m);
        if !self.refactorize() {
            return None;
        }

        // the basis must price out dual feasible to run the dual simplex
        let y = self.dual_vector(false);
        for j in 0..self.ncols {
            if self.in_basis[j] >= 0 || self.frozen[j] {
                continue;
            }
            let d = self.reduced_cost(j, &y, false);
            let at_lower = (self.x[j] - self.lo[j]).abs() <= 1e-9 && self.lo[j].is_finite();
            let at_upper = (self.up[j] - self.x[j]).abs() <= 1e-9 && self.up[j].is_finite();
            let ok = if at_lower && at_upper {
                true
            } else if at_lower {
                d >= -DUAL_TOL
            } else if at_upper {
                d <= DUAL_TOL
            } else {
                d.abs() <= DUAL_TOL
            };
            if !ok {
                return None;
            }
        }

        match self.dual_iterate() {
            DualOutcome::PrimalFeasible => Some(self.finish_primal()),
            // cold start recovers the Farkas ray on infeasibility
            DualOutcome::Infeasible => None,
            DualOutcome::GiveUp => None,
        }
    }

    /// Bounded dual simplex: drives basic bound violations out while the
    /// pricing stays dual feasible.
    fn dual_iterate(&mut self) -> DualOutcome {
        for _ in 0..DUAL_ITER_CAP {
            self.iterations += 1;
            if self.iterations >= self.options.iteration_limit {
                return DualOutcome::GiveUp;
            }

            // most violated basic variable leaves
            let mut leave: Option<(usize, f64, bool)> = None; // (row, violation, below)
            for i in 0..self.m {
                let bi = self.basis[i];
                let v = self.x[bi];
                let viol_lo = self.lo[bi] - v;
                let viol_up = v - self.up[bi];
                let (viol, below) = if viol_lo > viol_up { (viol_lo, true) } else { (viol_up, false) };
                if viol > 1e-9 {
                    match leave {
                        Some((_, best, _)) if viol <= best => {}
                        _ => leave = Some((i, viol, below)),
                    }
                }
            }
            let Some((r, _, below)) = leave else {
                return DualOutcome::PrimalFeasible;
            };

            // pivot row over the nonbasic columns
            let rho: Vec<f64> = self.binv[r * self.m..(r + 1) * self.m].to_vec();
            let y = self.dual_vector(false);
            // entering candidate: moving it toward feasibility must push the
            // leaving variable back inside its bound
            let mut enter: Option<(usize, f64, f64)> = None; // (col, ratio, alpha)
            for j in 0..self.ncols {
                if self.in_basis[j] >= 0 || self.frozen[j] {
                    continue;
                }
                let mut alpha = 0.0;
                for &(i, v) in &self.cols[j] {
                    alpha += rho[i] * v;
                }
                if alpha.abs() <= RATIO_TOL {
                    continue;
                }
                let at_lower = (self.x[j] - self.lo[j]).abs() <= 1e-9 && self.lo[j].is_finite();
                let at_upper = (self.up[j] - self.x[j]).abs() <= 1e-9 && self.up[j].is_finite();
                // x_B[r] moves by -alpha * dx_j
                let eligible = if below {
                    // need x_B[r] to increase
                    (at_lower && alpha < 0.0)
                        || (at_upper && alpha > 0.0)
                        || (!at_lower && !at_upper)
                } else {
                    (at_lower && alpha > 0.0)
                        || (at_upper && alpha < 0.0)
                        || (!at_lower && !at_upper)
                };
                if !eligible {
                    continue;
                }
                let d = self.reduced_cost(j, &y, false);
                let ratio = d.abs() / alpha.abs();
                let replace = match enter {
                    None => true,
                    Some((bj, br, ba)) => {
                        ratio < br - 1e-12
                            || (ratio <= br + 1e-12
                                && (alpha.abs() > ba.abs() + 1e-12
                                    || (alpha.abs() >= ba.abs() - 1e-12 && j < bj)))
                    }
                };
                if replace {
                    enter = Some((j, ratio, alpha));
                }
            }
            let Some((j, _, alpha)) = enter else {
                // no entering column can repair the violation: primal infeasible
                return DualOutcome::Infeasible;
            };

            let bi = self.basis[r];
            let target = if below { self.lo[bi] } else { self.up[bi] };
            let dxj = (self.x[bi] - target) / alpha;

            // entering variable may hit its own opposite bound first
            let span = self.up[j] - self.lo[j];
            let flip = span.is_finite() && dxj.abs() > span + 1e-12;
            let step = if flip { span * dxj.signum() } else { dxj };

            let mut w = vec![0.0; self.m];
            for &(row_i, v) in &self.cols[j] {
                if v != 0.0 {
                    for i in 0..self.m {
                        w[i] += self.binv[i * self.m + row_i] * v;
                    }
                }
            }
            self.x[j] += step;
            for i in 0..self.m {
                if w[i] != 0.0 {
                    let bk = self.basis[i];
                    self.x[bk] -= step * w[i];
                }
            }
            if flip {
                continue; // bound flip; the violation shrank but may remain
            }
            self.x[bi] = target;
            self.basis[r] = j;
            self.in_basis[j] = r as i64;
            self.in_basis[bi] = -1;
            self.update_inverse(r, &w);
            self.pivots_since_refactor += 1;
            if self.pivots_since_refactor >= REFACTOR_EVERY {
                if !self.refactorize() {
                    return DualOutcome::GiveUp;
                }
            }
        }
        DualOutcome::GiveUp
    }

    /// Basis snapshot with artificial columns replaced by their row slacks.
    fn snapshot(&self) -> WarmBasis {
        let mut basis = Vec::with_capacity(self.m);
        for (i, &j) in self.basis.iter().enumerate() {
            basis.push(if j < self.n + self.m { j } else { self.n + i });
        }
        let mut at_upper = vec![false; self.n + self.m];
        for (j, flag) in at_upper.iter_mut().enumerate() {
            if self.in_basis[j] < 0
                && self.up[j].is_finite()
                && (self.up[j] - self.x[j]).abs() <= 1e-9
                && self.up[j] != self.lo[j]
            {
                *flag = true;
            }
        }
        WarmBasis { basis, at_upper }
    }

    // ---- shared machinery ------------------------------------------------

    fn active_cost(&self, phase1: bool) -> &[f64] {
        if phase1 {
            &self.phase1_cost
        } else {
            &self.cost
        }
    }

    fn dual_vector(&self, phase1: bool) -> Vec<f64> {
        let cost = self.active_cost(phase1);
        let mut y = vec![0.0; self.m];
        for (k, &bk) in self.basis.iter().enumerate() {
            let cb = cost[bk];
            if cb != 0.0 {
                let row = &self.binv[k * self.m..(k + 1) * self.m];
                for i in 0..self.m {
                    y[i] += cb * row[i];
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64], phase1: bool) -> f64 {
        let mut d = self.active_cost(phase1)[j];
        for &(i, v) in &self.cols[j] {
            d -= y[i] * v;
        }
        d
    }

    fn iterate(&mut self, phase1: bool) -> StepOutcome {
        loop {
            if self.iterations >= self.options.iteration_limit {
                return StepOutcome::IterationLimit;
            }
            match self.step(phase1) {
                StepOutcome::Moved => continue,
                other => return other,
            }
        }
    }

    fn step(&mut self, phase1: bool) -> StepOutcome {
        self.iterations += 1;
        let y = self.dual_vector(phase1);

        let mut best: Option<(usize, f64, f64)> = None; // (col, |d|, direction)
        for j in 0..self.ncols {
            if self.in_basis[j] >= 0 || self.frozen[j] {
                continue;
            }
            let lo = self.lo[j];
            let up = self.up[j];
            let xj = self.x[j];
            let at_lower = lo.is_finite() && (xj - lo).abs() <= 1e-9;
            let at_upper = up.is_finite() && (up - xj).abs() <= 1e-9;
            let d = self.reduced_cost(j, &y, phase1);
            let dir = if at_lower && at_upper {
                continue;
            } else if at_lower {
                if d < -PIVOT_TOL {
                    1.0
                } else {
                    continue;
                }
            } else if at_upper {
                if d > PIVOT_TOL {
                    -1.0
                } else {
                    continue;
                }
            } else if d < -PIVOT_TOL {
                1.0
            } else if d > PIVOT_TOL {
                -1.0
            } else {
                continue;
            };
            if self.bland {
                best = Some((j, d.abs(), dir));
                break;
            }
            match best {
                Some((_, mag, _)) if d.abs() <= mag => {}
                _ => best = Some((j, d.abs(), dir)),
            }
        }
        let Some((enter, _, dir)) = best else {
            return StepOutcome::Optimal;
        };

        let mut w = vec![0.0; self.m];
        for &(r, v) in &self.cols[enter] {
            if v != 0.0 {
                for i in 0..self.m {
                    w[i] += self.binv[i * self.m + r] * v;
                }
            }
        }

        let own_span = self.up[enter] - self.lo[enter];
        let mut t_best = if own_span.is_finite() { own_span } else { f64::INFINITY };
        let mut leave: Option<usize> = None;
        let mut leave_to_upper = false;
        for i in 0..self.m {
            let delta = -dir * w[i];
            if delta.abs() <= RATIO_TOL {
                continue;
            }
            let bi = self.basis[i];
            let xb = self.x[bi];
            let (lim, to_upper) = if delta < 0.0 {
                if self.lo[bi].is_finite() {
                    ((xb - self.lo[bi]) / -delta, false)
                } else {
                    continue;
                }
            } else if self.up[bi].is_finite() {
                ((self.up[bi] - xb) / delta, true)
            } else {
                continue;
            };
            let lim = lim.max(0.0);
            let replace = match leave {
                None => lim < t_best - 1e-12,
                Some(cur) => {
                    lim < t_best - 1e-12
                        || (lim <= t_best + 1e-12 && w[i].abs() > w[cur].abs() + 1e-12)
                }
            };
            if replace {
                t_best = lim.min(t_best);
                leave = Some(i);
                leave_to_upper = to_upper;
            }
        }

        if !t_best.is_finite() {
            return StepOutcome::Unbounded;
        }

        if t_best <= 1e-12 {
            self.stall += 1;
            if self.stall >= DEGEN_STALL {
                self.bland = true;
            }
        } else {
            self.stall = 0;
            self.bland = false;
        }

        let t = t_best;
        self.x[enter] += dir * t;
        for i in 0..self.m {
            if w[i] != 0.0 {
                let bi = self.basis[i];
                self.x[bi] -= dir * t * w[i];
            }
        }

        match leave {
            None => {
                let target = if dir > 0.0 { self.up[enter] } else { self.lo[enter] };
                self.x[enter] = target;
                StepOutcome::Moved
            }
            Some(r) => {
                let leaving = self.basis[r];
                self.x[leaving] =
                    if leave_to_upper { self.up[leaving] } else { self.lo[leaving] };
                self.basis[r] = enter;
                self.in_basis[enter] = r as i64;
                self.in_basis[leaving] = -1;
                self.update_inverse(r, &w);
                self.pivots_since_refactor += 1;
                if self.pivots_since_refactor >= REFACTOR_EVERY {
                    self.refactorize();
                }
                StepOutcome::Moved
            }
        }
    }

    /// Product-form update of the explicit inverse after `basis[r]` changed;
    /// `w` is B^-1 times the entering column (for the old basis).
    fn update_inverse(&mut self, r: usize, w: &[f64]) {
        let piv = w[r];
        debug_assert!(piv.abs() > 1e-12, "singular pivot {piv}");
        let m = self.m;
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (pivot_row, after) = rest.split_at_mut(m);
        for k in 0..m {
            pivot_row[k] /= piv;
        }
        for (i, chunk) in before.chunks_mut(m).enumerate() {
            let f = w[i];
            if f != 0.0 {
                for k in 0..m {
                    chunk[k] -= f * pivot_row[k];
                }
            }
        }
        for (off, chunk) in after.chunks_mut(m).enumerate() {
            let f = w[r + 1 + off];
            if f != 0.0 {
                for k in 0..m {
                    chunk[k] -= f * pivot_row[k];
                }
            }
        }
    }

    /// Rebuilds the inverse from the basis columns by Gauss-Jordan and
    /// recomputes the basic values from the nonbasic point. Returns false if
    /// the basis is numerically singular.
    fn refactorize(&mut self) -> bool {
        let m = self.m;
        let mut mat = vec![0.0; m * m];
        for (k, &bk) in self.basis.iter().enumerate() {
            for &(i, v) in &self.cols[bk] {
                mat[i * m + k] = v;
            }
        }
        let mut inv = identity(m);
        let mut singular = false;
        for col in 0..m {
            let mut piv_row = col;
            let mut piv_val = mat[col * m + col].abs();
            for r in col + 1..m {
                let v = mat[r * m + col].abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = r;
                }
            }
            if piv_val <= 1e-11 {
                singular = true;
                continue;
            }
            if piv_row != col {
                for k in 0..m {
                    mat.swap(col * m + k, piv_row * m + k);
                    inv.swap(col * m + k, piv_row * m + k);
                }
            }
            let p = mat[col * m + col];
            for k in 0..m {
                mat[col * m + k] /= p;
                inv[col * m + k] /= p;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = mat[r * m + col];
                if f != 0.0 {
                    for k in 0..m {
                        mat[r * m + k] -= f * mat[col * m + k];
                        inv[r * m + k] -= f * inv[col * m + k];
                    }
                }
            }
        }
        self.binv = inv;
        self.pivots_since_refactor = 0;
        if singular {
            return false;
        }

        let mut resid = self.b.clone();
        for j in 0..self.ncols {
            if self.in_basis[j] >= 0 || self.x[j] == 0.0 {
                continue;
            }
            for &(i, v) in &self.cols[j] {
                resid[i] -= v * self.x[j];
            }
        }
        for k in 0..m {
            let row = &self.binv[k * m..(k + 1) * m];
            let mut acc = 0.0;
            for i in 0..m {
                acc += row[i] * resid[i];
            }
            let bk = self.basis[k];
            self.x[bk] = acc;
        }
        true
    }

    fn extract(&mut self, status: LpStatus, farkas: bool) -> LpSolution {
        let n = self.n;
        let mut primal = vec![0.0; n];
        for j in 0..n {
            primal[j] = self.x[j] * self.col_scale[j];
        }
        let mut duals = vec![0.0; self.m];
        let mut reduced = vec![0.0; n];
        let mut farkas_ray = None;
        if status == LpStatus::Optimal {
            let y = self.dual_vector(false);
            for i in 0..self.m {
                duals[i] = y[i] * self.row_scale[i];
            }
            for j in 0..n {
                reduced[j] = self.reduced_cost(j, &y, false) / self.col_scale[j];
            }
        } else if farkas {
            let y = self.dual_vector(true);
            let ray: Vec<f64> = (0..self.m).map(|i| y[i] * self.row_scale[i]).collect();
            farkas_ray = Some(ray);
        }
        let objective = self.lp.objective_value(&primal);
        LpSolution {
            status,
            primal,
            duals,
            reduced_costs: reduced,
            objective,
            farkas: farkas_ray,
            gap: 0.0,
            iterations: self.iterations,
            nodes: 0,
        }
    }
}

fn identity(m: usize) -> Vec<f64> {
    let mut id = vec![0.0; m * m];
    for i in 0..m {
        id[i * m + i] = 1.0;
    }
    id
}
