//! Exact linear programming over the rationals.
//!
//! Dense two-phase tableau simplex with Bland's rule. Problems here have a
//! few dozen columns at most, so the dense tableau is the simple choice.

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("constraint matrix is {rows}×? but b has {b} entries")]
    RowMismatch { rows: usize, b: usize },
    #[error("row {row} has {len} entries, expected {cols}")]
    Ragged { row: usize, len: usize, cols: usize },
    #[error("cost vector has {len} entries, expected {cols}")]
    CostMismatch { len: usize, cols: usize },
}

/// `minimise c·x subject to A·x = b, x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub value: Rational,
    /// Dual prices `y` with `yᵀA ≤ c` and `yᵀb = value`.
    pub duals: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `rows × (n + rows)`; the last `rows` columns are the artificials.
    t: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    n: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col].clone();
        for x in self.t[row].iter_mut() {
            *x = &*x / &p;
        }
        self.rhs[row] = &self.rhs[row] / &p;
        for r in 0..self.t.len() {
            if r == row || self.t[r][col].is_zero() {
                continue;
            }
            let factor = self.t[r][col].clone();
            for c in 0..self.t[r].len() {
                if !self.t[row][c].is_zero() {
                    let d = &factor * &self.t[row][c];
                    self.t[r][c] -= &d;
                }
            }
            let d = &factor * &self.rhs[row];
            self.rhs[r] -= &d;
        }
        self.basis[row] = col;
    }

    /// Reduced costs `cⱼ − c_Bᵀ·B⁻¹·Aⱼ` for every column.
    fn reduced(&self, cost: &[Rational]) -> Vec<Rational> {
        (0..cost.len())
            .map(|j| {
                let mut r = cost[j].clone();
                for (i, &bv) in self.basis.iter().enumerate() {
                    if !self.t[i][j].is_zero() && !cost[bv].is_zero() {
                        r -= &(&cost[bv] * &self.t[i][j]);
                    }
                }
                r
            })
            .collect()
    }

    /// Runs simplex iterations for `cost` over the columns `< allowed`.
    /// Returns `false` when unbounded.
    fn optimise(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let red = self.reduced(cost);
            // Bland: lowest-index improving column
            let Some(col) = (0..allowed).find(|&j| red[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(Rational, usize, usize)> = None;
            for i in 0..self.t.len() {
                if self.t[i][col].is_positive() {
                    let ratio = &self.rhs[i] / &self.t[i][col];
                    let better = match &best {
                        None => true,
                        Some((r, _, bv)) => ratio < *r || (ratio == *r && self.basis[i] < *bv),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match best {
                Some((_, row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    let m = lp.a.len();
    if lp.b.len() != m {
        return Err(LpError::RowMismatch {
            rows: m,
            b: lp.b.len(),
        });
    }
    let n = lp.c.len();
    for (row, r) in lp.a.iter().enumerate() {
        if r.len() != n {
            return Err(LpError::Ragged {
                row,
                len: r.len(),
                cols: n,
            });
        }
    }
    // flip rows so that b ≥ 0
    let mut t = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let flipped: Vec<bool> = lp.b.iter().map(Rational::is_negative).collect();
    for (i, (a, b)) in lp.a.iter().zip(&lp.b).enumerate() {
        let neg = flipped[i];
        let mut row: Vec<Rational> = a.iter().map(|x| if neg { -x } else { x.clone() }).collect();
        row.extend((0..m).map(|k| {
            if k == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        t.push(row);
        rhs.push(b.abs());
    }
    let mut tab = Tableau {
        t,
        rhs,
        basis: (n..n + m).collect(),
        n,
    };

    let mut phase1 = vec![Rational::zero(); n + m];
    for x in phase1.iter_mut().skip(n) {
        *x = Rational::one();
    }
    tab.optimise(&phase1, n + m);
    let infeas: Rational = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(bv, _)| **bv >= n)
        .map(|(_, v)| v.clone())
        .sum();
    if infeas.is_positive() {
        return Ok(LpOutcome::Infeasible);
    }
    // drive degenerate artificials out where possible
    for i in 0..m {
        if tab.basis[i] >= tab.n {
            if let Some(col) = (0..tab.n).find(|&j| !tab.t[i][j].is_zero()) {
                tab.pivot(i, col);
            }
        }
    }

    let mut phase2 = lp.c.clone();
    phase2.extend((0..m).map(|_| Rational::zero()));
    if !tab.optimise(&phase2, n) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab.rhs[i].clone();
        }
    }
    let value: Rational = lp.c.iter().zip(&x).map(|(c, x)| c * x).sum();
    // y_i = −(reduced cost of artificial i), undoing any row flip
    let red = tab.reduced(&phase2);
    let duals = (0..m)
        .map(|i| {
            let y = -&red[n + i];
            if flipped[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    Ok(LpOutcome::Optimal(LpSolution { x, value, duals }))
}
