//! Dense two-phase revised simplex for `min cᵀx  s.t.  Ax = b, x ≥ 0`.
//!
//! Sized for the membership LPs here: a few dozen rows and up to ~10⁵
//! columns. The basis inverse is kept explicitly (m ≤ ~100) and refactored
//! periodically; pricing is Dantzig with a fallback to Bland's rule after a
//! run of degenerate pivots, and the ratio test is a two-pass Harris test.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("infeasible (phase-one residual {0:e})")]
    Infeasible(f64),
    #[error("unbounded objective")]
    Unbounded,
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
    #[error("basis became numerically singular")]
    Singular,
    #[error("malformed problem: {0}")]
    Malformed(String),
    #[error("solution residual {0:e} exceeds tolerance")]
    Inaccurate(f64),
}

/// Equality-form problem with non-negative variables. The constraint matrix
/// is stored column-major.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl LinearProgram {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            a: vec![0.0; rows * cols],
            b: vec![0.0; rows],
            c: vec![0.0; cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.a[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.a[j * self.rows..(j + 1) * self.rows]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.a[col * self.rows + row] = value;
    }

    pub fn set_rhs(&mut self, row: usize, value: f64) {
        self.b[row] = value;
    }

    pub fn set_cost(&mut self, col: usize, value: f64) {
        self.c[col] = value;
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    /// Largest `|Ax − b|` component.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let mut r = self.b.iter().map(|v| -v).collect::<Vec<_>>();
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (ri, aij) in r.iter_mut().zip(self.column(j)) {
                    *ri += aij * xj;
                }
            }
        }
        r.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct SimplexOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub pivot_tol: f64,
    pub refactor_every: usize,
    /// Consecutive non-improving pivots before switching to Bland's rule.
    pub degenerate_limit: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-9,
            optimality_tol: 1e-9,
            pivot_tol: 1e-9,
            refactor_every: 64,
            degenerate_limit: 40,
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    solve_with(lp, SimplexOptions::default())
}

pub fn solve_with(lp: &LinearProgram, opts: SimplexOptions) -> Result<LpSolution, LpError> {
    if lp.a.iter().chain(&lp.b).chain(&lp.c).any(|v| !v.is_finite()) {
        return Err(LpError::Malformed("non-finite coefficient".into()));
    }
    if lp.rows == 0 {
        return Err(LpError::Malformed("no constraints".into()));
    }
    let mut s = Simplex::new(lp, opts);

    let phase_one: Vec<f64> = (0..s.total)
        .map(|j| if j < s.n { 0.0 } else { 1.0 })
        .collect();
    s.run(&phase_one, true)?;
    let infeasibility: f64 = s
        .basis
        .iter()
        .zip(&s.xb)
        .filter(|(&j, _)| j >= s.n)
        .map(|(_, v)| v.abs())
        .sum();
    let scale = 1.0 + s.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if infeasibility > opts.feasibility_tol * scale {
        return Err(LpError::Infeasible(infeasibility));
    }
    s.drive_out_artificials();

    let mut phase_two = lp.c.clone();
    phase_two.resize(s.total, 0.0);
    s.run(&phase_two, false)?;

    let mut x = vec![0.0; s.n];
    for (&j, &v) in s.basis.iter().zip(&s.xb) {
        if j < s.n {
            x[j] = v;
        }
    }
    let objective = x.iter().zip(&lp.c).map(|(a, b)| a * b).sum();
    Ok(LpSolution {
        x,
        objective,
        iterations: s.iterations,
    })
}

struct Simplex {
    m: usize,
    n: usize,
    total: usize,
    /// Row-sign-normalized constraint matrix (so that b ≥ 0), column-major.
    a: Vec<f64>,
    b: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    /// Row-major m×m.
    binv: Vec<f64>,
    xb: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
    opts: SimplexOptions,
}

impl Simplex {
    fn new(lp: &LinearProgram, opts: SimplexOptions) -> Self {
        let (m, n) = (lp.rows, lp.cols);
        let sign: Vec<f64> = lp.b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
        let mut a = lp.a.clone();
        for col in a.chunks_mut(m) {
            for (v, s) in col.iter_mut().zip(&sign) {
                *v *= s;
            }
        }
        let b: Vec<f64> = lp.b.iter().zip(&sign).map(|(v, s)| v * s).collect();
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        let mut is_basic = vec![false; n + m];
        is_basic[n..].fill(true);
        Self {
            m,
            n,
            total: n + m,
            a,
            xb: b.clone(),
            b,
            basis: (n..n + m).collect(),
            is_basic,
            binv,
            iterations: 0,
            since_refactor: 0,
            opts,
        }
    }

    fn column_into(&self, j: usize, out: &mut [f64]) {
        if j < self.n {
            out.copy_from_slice(&self.a[j * self.m..(j + 1) * self.m]);
        } else {
            out.fill(0.0);
            out[j - self.n] = 1.0;
        }
    }

    /// `B⁻¹ a_j`.
    fn ftran(&self, j: usize, out: &mut [f64]) {
        let m = self.m;
        if j < self.n {
            let col = &self.a[j * m..(j + 1) * m];
            for (i, o) in out.iter_mut().enumerate() {
                let row = &self.binv[i * m..(i + 1) * m];
                *o = row.iter().zip(col).map(|(r, c)| r * c).sum();
            }
        } else {
            let k = j - self.n;
            for (i, o) in out.iter_mut().enumerate() {
                *o = self.binv[i * m + k];
            }
        }
    }

    fn run(&mut self, cost: &[f64], phase_one: bool) -> Result<(), LpError> {
        let (m, n) = (self.m, self.n);
        let limit = 50 * (m + n) + 10_000;
        let mut y = vec![0.0; m];
        let mut u = vec![0.0; m];
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations >= limit {
                return Err(LpError::IterationLimit(limit));
            }
            if self.since_refactor >= self.opts.refactor_every {
                self.refactor()?;
            }
            // yᵀ = c_Bᵀ B⁻¹
            y.fill(0.0);
            for (k, &j) in self.basis.iter().enumerate() {
                let cb = cost[j];
                if cb != 0.0 {
                    for (yi, bi) in y.iter_mut().zip(&self.binv[k * m..(k + 1) * m]) {
                        *yi += cb * bi;
                    }
                }
            }
            let bland = degenerate_run >= self.opts.degenerate_limit;
            let mut entering = None;
            let mut best = -self.opts.optimality_tol;
            let candidates = if phase_one { self.total } else { n };
            for j in 0..candidates {
                if self.is_basic[j] {
                    continue;
                }
                let d = if j < n {
                    let col = &self.a[j * m..(j + 1) * m];
                    cost[j] - y.iter().zip(col).map(|(a, b)| a * b).sum::<f64>()
                } else {
                    cost[j] - y[j - n]
                };
                if d < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(q) = entering else {
                return Ok(());
            };

            self.ftran(q, &mut u);
            let ptol = self.opts.pivot_tol;
            let ftol = self.opts.feasibility_tol;
            let mut theta_max = f64::INFINITY;
            for i in 0..m {
                if u[i] > ptol {
                    theta_max = theta_max.min((self.xb[i].max(0.0) + ftol) / u[i]);
                }
            }
            if theta_max.is_infinite() {
                return Err(LpError::Unbounded);
            }
            let mut leave: Option<usize> = None;
            for i in 0..m {
                if u[i] > ptol && self.xb[i].max(0.0) / u[i] <= theta_max {
                    let better = match leave {
                        None => true,
                        Some(r) if bland => self.basis[i] < self.basis[r],
                        Some(r) => u[i] > u[r],
                    };
                    if better {
                        leave = Some(i);
                    }
                }
            }
            let r = leave.expect("theta_max finite implies a candidate row");
            let theta = self.xb[r].max(0.0) / u[r];
            if theta <= ftol {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, q, &u, theta);
        }
    }

    fn pivot(&mut self, r: usize, q: usize, u: &[f64], theta: f64) {
        let m = self.m;
        for i in 0..m {
            if i != r {
                self.xb[i] -= theta * u[i];
            }
        }
        self.xb[r] = theta;
        let pivot = u[r];
        for k in 0..m {
            self.binv[r * m + k] /= pivot;
        }
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (prow, after) = rest.split_at_mut(m);
        for (i, row) in before.chunks_mut(m).chain(after.chunks_mut(m)).enumerate() {
            let i = if i < r { i } else { i + 1 };
            let f = u[i];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
            }
        }
        self.is_basic[self.basis[r]] = false;
        self.is_basic[q] = true;
        self.basis[r] = q;
        self.iterations += 1;
        self.since_refactor += 1;
    }

    /// Recomputes `B⁻¹` by Gauss–Jordan elimination with partial pivoting.
    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        let mut bmat = vec![0.0; m * m];
        let mut col = vec![0.0; m];
        for (k, &j) in self.basis.iter().enumerate() {
            self.column_into(j, &mut col);
            for i in 0..m {
                bmat[i * m + k] = col[i];
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let p = (c..m)
                .max_by(|&i, &k| bmat[i * m + c].abs().total_cmp(&bmat[k * m + c].abs()))
                .expect("non-empty range");
            if bmat[p * m + c].abs() < 1e-12 {
                return Err(LpError::Singular);
            }
            if p != c {
                for k in 0..m {
                    bmat.swap(p * m + k, c * m + k);
                    inv.swap(p * m + k, c * m + k);
                }
            }
            let d = bmat[c * m + c];
            for k in 0..m {
                bmat[c * m + k] /= d;
                inv[c * m + k] /= d;
            }
            for i in 0..m {
                if i != c {
                    let f = bmat[i * m + c];
                    if f != 0.0 {
                        for k in 0..m {
                            bmat[i * m + k] -= f * bmat[c * m + k];
                            inv[i * m + k] -= f * inv[c * m + k];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        for i in 0..m {
            self.xb[i] = (0..m).map(|k| self.binv[i * m + k] * self.b[k]).sum();
        }
        self.since_refactor = 0;
        Ok(())
    }

    /// Pivots zero-valued artificials out of the basis where some structural
    /// column can replace them; rows where none can are redundant.
    fn drive_out_artificials(&mut self) {
        let m = self.m;
        let mut u = vec![0.0; m];
        for r in 0..m {
            if self.basis[r] < self.n {
                continue;
            }
            let row = &self.binv[r * m..(r + 1) * m];
            let replacement = (0..self.n).filter(|&j| !self.is_basic[j]).find(|&j| {
                let col = &self.a[j * m..(j + 1) * m];
                row.iter().zip(col).map(|(a, b)| a * b).sum::<f64>().abs() > 1e-7
            });
            if let Some(q) = replacement {
                self.ftran(q, &mut u);
                let theta = self.xb[r] / u[r];
                self.pivot(r, q, &u, theta);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp_from_rows(rows: &[&[f64]], b: &[f64], c: &[f64]) -> LinearProgram {
        let mut lp = LinearProgram::new(rows.len(), c.len());
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                lp.set(i, j, v);
            }
            lp.set_rhs(i, b[i]);
        }
        for (j, &v) in c.iter().enumerate() {
            lp.set_cost(j, v);
        }
        lp
    }

    #[test]
    fn small_textbook_problem() {
        // max 3x + 2y s.t. x + y ≤ 4, x + 3y ≤ 6, x ≤ 3 → (3, 1), value 11.
        let lp = lp_from_rows(
            &[&[1.0, 1.0, 1.0, 0.0, 0.0], &[1.0, 3.0, 0.0, 1.0, 0.0], &[1.0, 0.0, 0.0, 0.0, 1.0]],
            &[4.0, 6.0, 3.0],
            &[-3.0, -2.0, 0.0, 0.0, 0.0],
        );
        let sol = solve(&lp).unwrap();
        assert!((sol.objective + 11.0).abs() < 1e-12);
        assert!((sol.x[0] - 3.0).abs() < 1e-12 && (sol.x[1] - 1.0).abs() < 1e-12);
        assert!(lp.residual(&sol.x) < 1e-12);
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        // −x − y = −2, min x → x = 0, y = 2.
        let lp = lp_from_rows(&[&[-1.0, -1.0]], &[-2.0], &[1.0, 0.0]);
        let sol = solve(&lp).unwrap();
        assert!(sol.objective.abs() < 1e-12);
        assert!((sol.x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasibility() {
        // x + y = 1, x + y = 2.
        let lp = lp_from_rows(&[&[1.0, 1.0], &[1.0, 1.0]], &[1.0, 2.0], &[0.0, 0.0]);
        assert!(matches!(solve(&lp), Err(LpError::Infeasible(_))));
    }

    #[test]
    fn detects_unboundedness() {
        // x − y = 0, min −x.
        let lp = lp_from_rows(&[&[1.0, -1.0]], &[0.0], &[-1.0, 0.0]);
        assert_eq!(solve(&lp).unwrap_err(), LpError::Unbounded);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let lp = lp_from_rows(
            &[&[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0], &[1.0, 0.0, 0.0]],
            &[1.0, 2.0, 0.25],
            &[0.0, -1.0, 0.0],
        );
        let sol = solve(&lp).unwrap();
        assert!((sol.objective + 0.75).abs() < 1e-12);
        assert!(lp.residual(&sol.x) < 1e-12);
    }

    #[test]
    fn rejects_nan() {
        let lp = lp_from_rows(&[&[f64::NAN]], &[1.0], &[0.0]);
        assert!(matches!(solve(&lp), Err(LpError::Malformed(_))));
    }
}
