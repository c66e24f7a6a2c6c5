//! Dense two-phase simplex over exact rationals with Bland's anti-cycling rule.
//!
//! Problems are stated as `maximize c.x` subject to rows `a.x {<=,>=,=} b`,
//! with each variable either free or non-negative. Optimal outcomes carry dual
//! multipliers and infeasible outcomes a Farkas vector; both can be re-checked
//! against the problem with [`LpProblem::dual_bound`] and
//! [`LpProblem::is_farkas_certificate`] without trusting the solver.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn flipped(self) -> Sense {
        match self {
            Sense::Le => Sense::Ge,
            Sense::Ge => Sense::Le,
            Sense::Eq => Sense::Eq,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

#[derive(Clone, Debug)]
pub struct LpProblem {
    n_vars: usize,
    free: Vec<bool>,
    objective: Vec<Rational>,
    rows: Vec<Row>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisVar {
    /// Structural variable; `negative` marks the negative part of a split free variable.
    Variable { index: usize, negative: bool },
    Slack { row: usize },
    Artificial { row: usize },
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
    /// One multiplier per row: `>= 0` on `<=` rows, `<= 0` on `>=` rows.
    pub duals: Vec<Rational>,
    pub basis: Vec<BasisVar>,
    pub pivots: usize,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
}

impl LpProblem {
    /// `n_vars` non-negative variables and a zero objective.
    pub fn new(n_vars: usize) -> Self {
        LpProblem { n_vars, free: vec![false; n_vars], objective: vec![Rational::zero(); n_vars], rows: Vec::new() }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn set_objective(&mut self, var: usize, c: Rational) {
        self.objective[var] = c;
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) -> usize {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.n_vars));
        self.rows.push(Row { coeffs, sense, rhs });
        self.rows.len() - 1
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        if x.len() != self.n_vars || (0..self.n_vars).any(|j| !self.free[j] && x[j].is_negative()) {
            return false;
        }
        self.rows.iter().all(|row| {
            let lhs: Rational = row.coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
            match row.sense {
                Sense::Le => lhs <= row.rhs,
                Sense::Ge => lhs >= row.rhs,
                Sense::Eq => lhs == row.rhs,
            }
        })
    }

    fn multiplier_signs_ok(&self, y: &[Rational]) -> bool {
        y.len() == self.rows.len()
            && self.rows.iter().zip(y).all(|(row, yi)| match row.sense {
                Sense::Le => !yi.is_negative(),
                Sense::Ge => !yi.is_positive(),
                Sense::Eq => true,
            })
    }

    fn combined_columns(&self, y: &[Rational]) -> Vec<Rational> {
        let mut s = vec![Rational::zero(); self.n_vars];
        for (row, yi) in self.rows.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (j, a) in &row.coeffs {
                s[*j] += a * yi;
            }
        }
        s
    }

    fn combined_rhs(&self, y: &[Rational]) -> Rational {
        self.rows.iter().zip(y).map(|(row, yi)| &row.rhs * yi).sum()
    }

    /// If `y` is dual feasible, the upper bound `y.b` it proves on the objective.
    pub fn dual_bound(&self, y: &[Rational]) -> Option<Rational> {
        if !self.multiplier_signs_ok(y) {
            return None;
        }
        let s = self.combined_columns(y);
        let ok = (0..self.n_vars).all(|j| if self.free[j] { s[j] == self.objective[j] } else { s[j] >= self.objective[j] });
        ok.then(|| self.combined_rhs(y))
    }

    /// True iff `y` proves the rows have no solution.
    pub fn is_farkas_certificate(&self, y: &[Rational]) -> bool {
        if !self.multiplier_signs_ok(y) {
            return false;
        }
        let s = self.combined_columns(y);
        let ok = (0..self.n_vars).all(|j| if self.free[j] { s[j].is_zero() } else { !s[j].is_negative() });
        ok && self.combined_rhs(y).is_negative()
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    /// `m` rows of `ncols + 1` entries, right-hand side last.
    t: Vec<Vec<Rational>>,
    reduced: Vec<Rational>,
    basis: Vec<usize>,
    /// Column that held the identity entry of each row initially.
    id_col: Vec<usize>,
    /// Row normalisation factor (+1 or -1).
    sigma: Vec<Rational>,
    kinds: Vec<BasisVar>,
    artificial: Vec<bool>,
    pivots: usize,
}

impl Tableau {
    fn build(p: &LpProblem) -> Tableau {
        let mut kinds = Vec::new();
        let mut pos_col = vec![0; p.n_vars];
        let mut neg_col = vec![None; p.n_vars];
        for j in 0..p.n_vars {
            pos_col[j] = kinds.len();
            kinds.push(BasisVar::Variable { index: j, negative: false });
            if p.free[j] {
                neg_col[j] = Some(kinds.len());
                kinds.push(BasisVar::Variable { index: j, negative: true });
            }
        }
        let mut senses = Vec::with_capacity(p.rows.len());
        let mut sigma = Vec::with_capacity(p.rows.len());
        let mut slack_col = vec![None; p.rows.len()];
        let mut art_col = vec![None; p.rows.len()];
        for (i, row) in p.rows.iter().enumerate() {
            let (s, sense) = if row.rhs.is_negative() { (-1, row.sense.flipped()) } else { (1, row.sense) };
            sigma.push(Rational::from_integer(s.into()));
            senses.push(sense);
            if sense != Sense::Eq {
                slack_col[i] = Some(kinds.len());
                kinds.push(BasisVar::Slack { row: i });
            }
            if sense != Sense::Le {
                art_col[i] = Some(kinds.len());
                kinds.push(BasisVar::Artificial { row: i });
            }
        }
        let ncols = kinds.len();
        let mut t = Vec::with_capacity(p.rows.len());
        let mut basis = Vec::with_capacity(p.rows.len());
        for (i, row) in p.rows.iter().enumerate() {
            let mut r = vec![Rational::zero(); ncols + 1];
            for (j, a) in &row.coeffs {
                let a = a * &sigma[i];
                if let Some(nc) = neg_col[*j] {
                    r[nc] -= &a;
                }
                r[pos_col[*j]] += a;
            }
            if let Some(sc) = slack_col[i] {
                r[sc] = if senses[i] == Sense::Le { Rational::one() } else { -Rational::one() };
            }
            if let Some(ac) = art_col[i] {
                r[ac] = Rational::one();
            }
            r[ncols] = &row.rhs * &sigma[i];
            t.push(r);
            basis.push(art_col[i].or(slack_col[i]).expect("every row has an identity column"));
        }
        let artificial = kinds.iter().map(|k| matches!(k, BasisVar::Artificial { .. })).collect();
        let id_col = basis.clone();
        Tableau { t, reduced: Vec::new(), basis, id_col, sigma, kinds, artificial, pivots: 0 }
    }

    fn ncols(&self) -> usize {
        self.kinds.len()
    }

    fn set_costs(&mut self, cost: &[Rational]) {
        let n = self.ncols();
        let mut reduced: Vec<Rational> = cost.to_vec();
        reduced.push(Rational::zero());
        for (i, row) in self.t.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=n {
                if !row[j].is_zero() {
                    reduced[j] -= cb * &row[j];
                }
            }
        }
        // last entry holds -objective value
        self.reduced = reduced;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let nz: Vec<usize> = (0..self.t[r].len()).filter(|&j| !self.t[r][j].is_zero()).collect();
        let pivot_row = std::mem::take(&mut self.t[r]);
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !self.reduced[c].is_zero() {
            let f = self.reduced[c].clone();
            for &j in &nz {
                self.reduced[j] -= &f * &pivot_row[j];
            }
        }
        self.t[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Minimises the current cost row. Returns false if unbounded.
    fn simplex(&mut self, allow_artificial: bool) -> bool {
        let n = self.ncols();
        loop {
            let entering = (0..n).find(|&j| (allow_artificial || !self.artificial[j]) && self.reduced[j].is_negative());
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                if !self.t[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.t[i][n] / &self.t[i][c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c);
        }
    }

    fn row_multipliers(&self, cost: &[Rational]) -> Vec<Rational> {
        // y' = c_B B^-1; column id_col[i] of the tableau is B^-1 e_i
        (0..self.t.len())
            .map(|i| {
                let col = self.id_col[i];
                let y: Rational = self
                    .t
                    .iter()
                    .enumerate()
                    .filter(|(_, row)| !row[col].is_zero())
                    .map(|(r, row)| &cost[self.basis[r]] * &row[col])
                    .sum();
                -y * &self.sigma[i]
            })
            .collect()
    }

    fn run(mut self, p: &LpProblem) -> LpOutcome {
        let n = self.ncols();
        if self.artificial.iter().any(|&a| a) {
            let cost: Vec<Rational> =
                self.artificial.iter().map(|&a| if a { Rational::one() } else { Rational::zero() }).collect();
            self.set_costs(&cost);
            self.simplex(true);
            if self.reduced[n].is_negative() {
                let farkas = self.row_multipliers(&cost);
                debug_assert!(p.is_farkas_certificate(&farkas));
                return LpOutcome::Infeasible { farkas };
            }
            for r in 0..self.t.len() {
                if self.artificial[self.basis[r]] {
                    if let Some(c) = (0..n).find(|&j| !self.artificial[j] && !self.t[r][j].is_zero()) {
                        self.pivot(r, c);
                    }
                }
            }
        }
        let cost: Vec<Rational> = self
            .kinds
            .iter()
            .map(|k| match k {
                BasisVar::Variable { index, negative: false } => -p.objective[*index].clone(),
                BasisVar::Variable { index, negative: true } => p.objective[*index].clone(),
                _ => Rational::zero(),
            })
            .collect();
        self.set_costs(&cost);
        if !self.simplex(false) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); p.n_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if let BasisVar::Variable { index, negative } = self.kinds[b] {
                if negative {
                    x[index] -= &self.t[r][n];
                } else {
                    x[index] += &self.t[r][n];
                }
            }
        }
        let value: Rational = (0..p.n_vars).map(|j| &p.objective[j] * &x[j]).sum();
        let duals = self.row_multipliers(&cost);
        debug_assert_eq!(p.dual_bound(&duals).as_ref(), Some(&value));
        LpOutcome::Optimal(LpSolution {
            value,
            x,
            duals,
            basis: self.basis.iter().map(|&b| self.kinds[b]).collect(),
            pivots: self.pivots,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), value 36
        let mut lp = LpProblem::new(2);
        lp.set_objective(0, int(3));
        lp.set_objective(1, int(5));
        lp.add_row(vec![(0, int(1))], Sense::Le, int(4));
        lp.add_row(vec![(1, int(2))], Sense::Le, int(12));
        lp.add_row(vec![(0, int(3)), (1, int(2))], Sense::Le, int(18));
        let LpOutcome::Optimal(sol) = lp.solve() else { panic!() };
        assert_eq!(sol.value, int(36));
        assert_eq!(sol.x, vec![int(2), int(6)]);
        assert_eq!(lp.dual_bound(&sol.duals), Some(int(36)));
        assert_eq!(sol.duals, vec![int(0), frac(3, 2), int(1)]);
    }

    #[test]
    fn free_variables_and_equalities() {
        // max t, w1 - t >= 0, w2 - t >= 0, w1 + w2 = 1, t free -> t = 1/2
        let mut lp = LpProblem::new(3);
        lp.set_free(0);
        lp.set_free(1);
        lp.set_free(2);
        lp.set_objective(2, int(1));
        lp.add_row(vec![(0, int(1)), (2, int(-1))], Sense::Ge, int(0));
        lp.add_row(vec![(1, int(1)), (2, int(-1))], Sense::Ge, int(0));
        lp.add_row(vec![(0, int(1)), (1, int(1))], Sense::Eq, int(1));
        let LpOutcome::Optimal(sol) = lp.solve() else { panic!() };
        assert_eq!(sol.value, frac(1, 2));
        assert!(lp.is_feasible_point(&sol.x));
        assert_eq!(lp.dual_bound(&sol.duals), Some(frac(1, 2)));
    }

    #[test]
    fn contradictory_equalities_give_farkas() {
        let mut lp = LpProblem::new(2);
        lp.set_free(0);
        lp.set_free(1);
        lp.add_row(vec![(0, int(1)), (1, int(1))], Sense::Eq, int(2));
        lp.add_row(vec![(0, int(1)), (1, int(1))], Sense::Eq, int(3));
        let LpOutcome::Infeasible { farkas } = lp.solve() else { panic!() };
        assert!(lp.is_farkas_certificate(&farkas));
    }

    #[test]
    fn negative_right_hand_sides() {
        // max -x - y, x + y >= 2 written as -x - y <= -2
        let mut lp = LpProblem::new(2);
        lp.set_objective(0, int(-1));
        lp.set_objective(1, int(-1));
        lp.add_row(vec![(0, int(-1)), (1, int(-1))], Sense::Le, int(-2));
        let LpOutcome::Optimal(sol) = lp.solve() else { panic!() };
        assert_eq!(sol.value, int(-2));
        assert_eq!(lp.dual_bound(&sol.duals), Some(int(-2)));
    }

    #[test]
    fn unbounded_is_reported() {
        let mut lp = LpProblem::new(1);
        lp.set_objective(0, int(1));
        lp.add_row(vec![(0, int(1))], Sense::Ge, int(1));
        assert!(matches!(lp.solve(), LpOutcome::Unbounded));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule
        let mut lp = LpProblem::new(4);
        for (j, c) in [(0, frac(3, 4)), (1, int(-150)), (2, frac(1, 50)), (3, int(-6))] {
            lp.set_objective(j, c);
        }
        lp.add_row(vec![(0, frac(1, 4)), (1, int(-60)), (2, frac(-1, 25)), (3, int(9))], Sense::Le, int(0));
        lp.add_row(vec![(0, frac(1, 2)), (1, int(-90)), (2, frac(-1, 50)), (3, int(3))], Sense::Le, int(0));
        lp.add_row(vec![(2, int(1))], Sense::Le, int(1));
        let LpOutcome::Optimal(sol) = lp.solve() else { panic!() };
        assert_eq!(sol.value, frac(1, 20));
    }
}
