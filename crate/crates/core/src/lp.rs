//! Exact rational linear programming: dense two-phase primal simplex with
//! Bland's rule, returning row duals that certify optimality.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Optimize `objective · x` subject to row constraints and per-variable
/// bounds. Variables default to `x >= 0` with no upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// `value`, `assignment` and `duals` are meaningful only when `Optimal`;
/// otherwise they are zero and empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: Rational,
    pub assignment: Vec<Rational>,
    /// One multiplier per constraint row, in the Lagrangian convention
    /// `objective = Aᵀ·duals + reduced costs`.
    pub duals: Vec<Rational>,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            constraints: Vec::new(),
            lower: vec![Some(Rational::zero()); n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn bound(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::InvalidInput("bound vectors do not match the variable count".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::InvalidInput(format!("row {i} has {} coefficients, expected {n}", c.coeffs.len())));
            }
        }
        for j in 0..n {
            if let (Some(l), Some(u)) = (&self.lower[j], &self.upper[j]) {
                if l > u {
                    return Err(Error::InvalidInput(format!("variable {j} has lower bound above upper bound")));
                }
            }
        }
        Ok(())
    }

    pub fn row_activity(&self, row: usize, x: &[Rational]) -> Rational {
        self.constraints[row].coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Whether `x` satisfies every row and bound exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let bounds_ok = x.iter().enumerate().all(|(j, v)| {
            self.lower[j].as_ref().is_none_or(|l| v >= l) && self.upper[j].as_ref().is_none_or(|u| v <= u)
        });
        bounds_ok
            && self.constraints.iter().enumerate().all(|(i, c)| {
                let a = self.row_activity(i, x);
                match c.relation {
                    Relation::Le => a <= c.rhs,
                    Relation::Eq => a == c.rhs,
                    Relation::Ge => a >= c.rhs,
                }
            })
    }
}

/// How an original variable is expressed through nonnegative columns.
#[derive(Clone, Debug)]
enum VarMap {
    /// `x = offset + z`
    Shift { col: usize, offset: Rational },
    /// `x = offset - z`
    Flip { col: usize, offset: Rational },
    /// `x = z⁺ - z⁻`
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let p = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// Maximizes with Bland's rule over the columns allowed to enter.
    fn run(&mut self, allowed: impl Fn(usize) -> bool) -> Outcome {
        loop {
            let Some(c) = (0..self.width).find(|&j| allowed(j) && self.obj[j].is_negative()) else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][c];
                if a.is_positive() {
                    let ratio = self.rhs(r) / a;
                    let better = match &leave {
                        None => true,
                        Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return Outcome::Unbounded,
            }
        }
    }

    fn set_objective(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.iter().map(|c| -c).collect();
        obj.push(Rational::zero());
        for (r, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[r]];
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                if !v.is_zero() {
                    *o += cb * v;
                }
            }
        }
        self.obj = obj;
    }
}

/// Solves `lp` exactly. Malformed programs are errors; infeasibility and
/// unboundedness are statuses.
pub fn solve(lp: &LinearProgram, sense: Sense) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.num_vars();
    let flip_obj = sense == Sense::Min;

    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for j in 0..n {
        match (&lp.lower[j], &lp.upper[j]) {
            (Some(l), u) => {
                if let Some(u) = u {
                    bound_rows.push((ncols, u - l));
                }
                maps.push(VarMap::Shift { col: ncols, offset: l.clone() });
                ncols += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Flip { col: ncols, offset: u.clone() });
                ncols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
                ncols += 2;
            }
        }
    }

    // Structural rows over the nonnegative columns.
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs = vec![Rational::zero(); ncols];
        let mut rhs = c.rhs.clone();
        for (a, m) in c.coeffs.iter().zip(&maps) {
            if a.is_zero() {
                continue;
            }
            match m {
                VarMap::Shift { col, offset } => {
                    coeffs[*col] += a;
                    rhs -= a * offset;
                }
                VarMap::Flip { col, offset } => {
                    coeffs[*col] -= a;
                    rhs -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[*pos] += a;
                    coeffs[*neg] -= a;
                }
            }
        }
        rows.push((coeffs, c.relation, rhs));
    }
    for (col, cap) in &bound_rows {
        let mut coeffs = vec![Rational::zero(); ncols];
        coeffs[*col] = Rational::one();
        rows.push((coeffs, Relation::Le, cap.clone()));
    }
    let mut cost = vec![Rational::zero(); ncols];
    for (c, m) in lp.objective.iter().zip(&maps) {
        let c = if flip_obj { -c } else { c.clone() };
        match m {
            VarMap::Shift { col, .. } => cost[*col] += &c,
            VarMap::Flip { col, .. } => cost[*col] -= &c,
            VarMap::Split { pos, neg } => {
                cost[*pos] += &c;
                cost[*neg] -= &c;
            }
        }
    }

    // Normalize to nonnegative right-hand sides and lay out slack, surplus
    // and artificial columns.
    let m = rows.len();
    let mut signs = Vec::with_capacity(m);
    for (coeffs, rel, rhs) in rows.iter_mut() {
        if rhs.is_negative() {
            for v in coeffs.iter_mut() {
                *v = -&*v;
            }
            *rhs = -&*rhs;
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            signs.push(-Rational::one());
        } else {
            signs.push(Rational::one());
        }
    }
    let n_slack = rows.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
    let n_art = rows.iter().filter(|(_, r, _)| *r != Relation::Le).count();
    let art_start = ncols + n_slack;
    let width = art_start + n_art;
    let mut tab_rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut unit_col = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (ncols, art_start);
    for (coeffs, rel, rhs) in &rows {
        let mut row = coeffs.clone();
        row.resize(width + 1, Rational::zero());
        row[width] = rhs.clone();
        match rel {
            Relation::Le => {
                row[next_slack] = Rational::one();
                basis.push(next_slack);
                unit_col.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_art] = Rational::one();
                basis.push(next_art);
                unit_col.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = Rational::one();
                basis.push(next_art);
                unit_col.push(next_art);
                next_art += 1;
            }
        }
        tab_rows.push(row);
    }
    let mut tab = Tableau { rows: tab_rows, obj: Vec::new(), basis, width, pivots: 0 };
    let is_art = |j: usize| j >= art_start && j < width;

    if n_art > 0 {
        let phase1: Vec<Rational> =
            (0..width).map(|j| if is_art(j) { -Rational::one() } else { Rational::zero() }).collect();
        tab.set_objective(&phase1);
        tab.run(|_| true);
        if tab.obj[width].is_negative() {
            return Ok(not_optimal(LpStatus::Infeasible, tab.pivots));
        }
        for r in 0..m {
            if is_art(tab.basis[r]) {
                if let Some(c) = (0..art_start).find(|&c| !tab.rows[r][c].is_zero()) {
                    tab.pivot(r, c);
                }
            }
        }
    }

    let mut phase2 = cost.clone();
    phase2.resize(width, Rational::zero());
    tab.set_objective(&phase2);
    if let Outcome::Unbounded = tab.run(|j| j < art_start) {
        return Ok(not_optimal(LpStatus::Unbounded, tab.pivots));
    }

    let mut z = vec![Rational::zero(); width];
    for (r, &b) in tab.basis.iter().enumerate() {
        z[b] = tab.rhs(r).clone();
    }
    let assignment: Vec<Rational> = maps
        .iter()
        .map(|m| match m {
            VarMap::Shift { col, offset } => offset + &z[*col],
            VarMap::Flip { col, offset } => offset - &z[*col],
            VarMap::Split { pos, neg } => &z[*pos] - &z[*neg],
        })
        .collect();
    let duals: Vec<Rational> = (0..lp.constraints.len())
        .map(|i| {
            let y = &signs[i] * &tab.obj[unit_col[i]];
            if flip_obj {
                -y
            } else {
                y
            }
        })
        .collect();
    let value = lp.objective_value(&assignment);
    Ok(LpSolution { status: LpStatus::Optimal, value, assignment, duals, pivots: tab.pivots })
}

fn not_optimal(status: LpStatus, pivots: usize) -> LpSolution {
    LpSolution { status, value: Rational::zero(), assignment: Vec::new(), duals: Vec::new(), pivots }
}

/// Objective of the Lagrangian dual at `duals`: `b·y` plus the bound terms
/// picked by the sign of each reduced cost. `None` when a reduced cost points
/// at an infinite bound.
pub fn dual_objective(lp: &LinearProgram, sense: Sense, duals: &[Rational]) -> Option<Rational> {
    let mut total: Rational = lp.constraints.iter().zip(duals).map(|(c, y)| &c.rhs * y).sum();
    for j in 0..lp.num_vars() {
        let d = reduced_cost(lp, duals, j);
        // In a max problem positive reduced costs push to the upper bound.
        let toward_upper = match sense {
            Sense::Max => d.is_positive(),
            Sense::Min => d.is_negative(),
        };
        if d.is_zero() {
            continue;
        }
        let bound = if toward_upper { &lp.upper[j] } else { &lp.lower[j] };
        total += &d * bound.as_ref()?;
    }
    Some(total)
}

fn reduced_cost(lp: &LinearProgram, duals: &[Rational], j: usize) -> Rational {
    let aty: Rational = lp.constraints.iter().zip(duals).map(|(c, y)| &c.coeffs[j] * y).sum();
    &lp.objective[j] - aty
}

/// Exact optimality check of an `Optimal` solution: primal feasibility, dual
/// sign conditions, equal primal and dual objectives, and complementary
/// slackness on rows and bounds.
pub fn verify(lp: &LinearProgram, sense: Sense, sol: &LpSolution) -> Result<()> {
    let fail = |m: String| Err(Error::Inconsistent(format!("lp certificate: {m}")));
    if sol.status != LpStatus::Optimal {
        return fail("only optimal solutions carry certificates".into());
    }
    let x = &sol.assignment;
    if !lp.is_feasible(x) {
        return fail("assignment is infeasible".into());
    }
    if sol.duals.len() != lp.constraints.len() {
        return fail("wrong number of duals".into());
    }
    if lp.objective_value(x) != sol.value {
        return fail("value differs from the objective at the assignment".into());
    }
    for (i, (c, y)) in lp.constraints.iter().zip(&sol.duals).enumerate() {
        // Max: rows bounding from above carry nonnegative multipliers.
        let ok = match (c.relation, sense) {
            (Relation::Eq, _) => true,
            (Relation::Le, Sense::Max) | (Relation::Ge, Sense::Min) => !y.is_negative(),
            (Relation::Ge, Sense::Max) | (Relation::Le, Sense::Min) => !y.is_positive(),
        };
        if !ok {
            return fail(format!("dual {i} has the wrong sign"));
        }
        if !y.is_zero() && lp.row_activity(i, x) != c.rhs {
            return fail(format!("row {i} is slack but has a nonzero dual"));
        }
    }
    for j in 0..lp.num_vars() {
        let d = reduced_cost(lp, &sol.duals, j);
        if d.is_zero() {
            continue;
        }
        let toward_upper = match sense {
            Sense::Max => d.is_positive(),
            Sense::Min => d.is_negative(),
        };
        let bound = if toward_upper { &lp.upper[j] } else { &lp.lower[j] };
        match bound {
            Some(b) if *b == x[j] => {}
            _ => return fail(format!("reduced cost of variable {j} is not matched by an active bound")),
        }
    }
    match dual_objective(lp, sense, &sol.duals) {
        Some(d) if d == sol.value => Ok(()),
        Some(d) => fail(format!("dual objective {d} differs from primal {}", sol.value)),
        None => fail("dual objective is unbounded".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| Rational::from_integer(n)).collect()
    }

    #[test]
    fn simple_max() {
        let mut lp = LinearProgram::new(ints(&[1]));
        lp.constrain(ints(&[1]), Relation::Le, r(3, 2));
        let s = solve(&lp, Sense::Max).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, r(3, 2));
        verify(&lp, Sense::Max, &s).unwrap();
    }

    #[test]
    fn equality_min() {
        let mut lp = LinearProgram::new(ints(&[1, 1]));
        lp.constrain(ints(&[1, 1]), Relation::Eq, Rational::one());
        let s = solve(&lp, Sense::Min).unwrap();
        assert_eq!(s.value, Rational::one());
        verify(&lp, Sense::Min, &s).unwrap();
    }

    #[test]
    fn unbounded_and_infeasible() {
        let lp = LinearProgram::new(ints(&[1]));
        assert_eq!(solve(&lp, Sense::Max).unwrap().status, LpStatus::Unbounded);
        let mut lp = LinearProgram::new(ints(&[1]));
        lp.constrain(ints(&[1]), Relation::Ge, ints(&[2])[0].clone());
        lp.constrain(ints(&[1]), Relation::Le, Rational::one());
        assert_eq!(solve(&lp, Sense::Max).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn bounds_free_and_flipped() {
        // max x - y with x in [-1, 2], y free, x + y >= -3/2, y <= 4 via a flip.
        let mut lp = LinearProgram::new(ints(&[1, -1, 1]));
        lp.bound(0, Some(-Rational::one()), Some(ints(&[2])[0].clone()));
        lp.bound(1, None, None);
        lp.bound(2, None, Some(r(1, 3)));
        lp.constrain(ints(&[1, 1, 0]), Relation::Ge, r(-3, 2));
        let s = solve(&lp, Sense::Max).unwrap();
        assert_eq!(s.value, &r(2, 1) + &r(7, 2) + r(1, 3));
        verify(&lp, Sense::Max, &s).unwrap();
        let s = solve(&lp, Sense::Min).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn degenerate_and_redundant_rows() {
        let mut lp = LinearProgram::new(ints(&[2, 3, 0]));
        lp.constrain(ints(&[1, 1, 1]), Relation::Eq, ints(&[4])[0].clone());
        lp.constrain(ints(&[2, 2, 2]), Relation::Eq, ints(&[8])[0].clone());
        lp.constrain(ints(&[1, 0, 0]), Relation::Le, Rational::zero());
        lp.constrain(ints(&[0, 1, -1]), Relation::Le, ints(&[2])[0].clone());
        let s = solve(&lp, Sense::Max).unwrap();
        assert_eq!(s.value, ints(&[9])[0]);
        verify(&lp, Sense::Max, &s).unwrap();
    }

    #[test]
    fn tampered_duals_fail() {
        let mut lp = LinearProgram::new(ints(&[1, 1]));
        lp.constrain(ints(&[1, 2]), Relation::Le, ints(&[4])[0].clone());
        lp.constrain(ints(&[3, 1]), Relation::Le, ints(&[6])[0].clone());
        let mut s = solve(&lp, Sense::Max).unwrap();
        verify(&lp, Sense::Max, &s).unwrap();
        s.duals[0] += Rational::one();
        assert!(verify(&lp, Sense::Max, &s).is_err());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let mut lp = LinearProgram::new(ints(&[1, 1]));
        lp.constrain(ints(&[1]), Relation::Le, Rational::one());
        assert!(solve(&lp, Sense::Max).is_err());
    }
}
