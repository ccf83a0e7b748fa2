//! Dense exact simplex with Bland's anti-cycling rule.
//!
//! Variables of a [`LinearSystem`] are free; sign constraints are ordinary
//! rows. Rows of the exact form `-c·x_k <= 0` are recognised and turned into
//! variable bounds so that nonnegative variables are not split. Pivoting
//! always takes the lowest-index improving column and breaks ratio ties by
//! the lowest-index basic variable, so identical input gives an identical
//! witness.

use num_traits::{One, Signed, Zero};

use super::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Lt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        let lhs = dot(&self.coeffs, point);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Lt => lhs < self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Option<Objective>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("constraint {row} has {found} coefficients but the system has {expected} variables")]
    DimensionMismatch { row: usize, expected: usize, found: usize },
    #[error("objective has {found} coefficients but the system has {expected} variables")]
    ObjectiveDimension { expected: usize, found: usize },
    #[error("strict inequalities are only allowed in feasibility queries")]
    StrictWithObjective,
    #[error("an objective is required for optimization")]
    MissingObjective,
    #[error("feasibility queries take no objective")]
    UnexpectedObjective,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpSolution {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpSolution::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpSolution::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            constraints: Vec::new(),
            objective: None,
        }
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn le(mut self, coeffs: Vec<Rational>, rhs: Rational) -> Self {
        self.push(coeffs, Relation::Le, rhs);
        self
    }

    pub fn ge(mut self, coeffs: Vec<Rational>, rhs: Rational) -> Self {
        self.push(coeffs.into_iter().map(|c| -c).collect(), Relation::Le, -rhs);
        self
    }

    pub fn eq(mut self, coeffs: Vec<Rational>, rhs: Rational) -> Self {
        self.push(coeffs, Relation::Eq, rhs);
        self
    }

    pub fn lt(mut self, coeffs: Vec<Rational>, rhs: Rational) -> Self {
        self.push(coeffs, Relation::Lt, rhs);
        self
    }

    pub fn gt(mut self, coeffs: Vec<Rational>, rhs: Rational) -> Self {
        self.push(coeffs.into_iter().map(|c| -c).collect(), Relation::Lt, -rhs);
        self
    }

    pub fn maximize(mut self, coeffs: Vec<Rational>) -> Self {
        self.objective = Some(Objective {
            coeffs,
            sense: Sense::Maximize,
        });
        self
    }

    pub fn minimize(mut self, coeffs: Vec<Rational>) -> Self {
        self.objective = Some(Objective {
            coeffs,
            sense: Sense::Minimize,
        });
        self
    }

    /// Unit coefficient vector for variable `k`.
    pub fn unit(&self, k: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.num_vars];
        v[k] = Rational::one();
        v
    }

    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars && self.constraints.iter().all(|c| c.is_satisfied_by(point))
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(|c| c.relation == Relation::Lt)
    }

    fn check_dimensions(&self) -> Result<(), LpError> {
        for (row, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(LpError::DimensionMismatch {
                    row,
                    expected: self.num_vars,
                    found: c.coeffs.len(),
                });
            }
        }
        if let Some(obj) = &self.objective {
            if obj.coeffs.len() != self.num_vars {
                return Err(LpError::ObjectiveDimension {
                    expected: self.num_vars,
                    found: obj.coeffs.len(),
                });
            }
        }
        Ok(())
    }
}

/// Returns a point satisfying every constraint exactly, or `None` when the
/// system is infeasible. Strict rows are handled by maximizing a common
/// slack `t <= 1` and requiring the optimum to be positive.
pub fn lp_feasible(system: &LinearSystem) -> Result<Option<Vec<Rational>>, LpError> {
    system.check_dimensions()?;
    if system.objective.is_some() {
        return Err(LpError::UnexpectedObjective);
    }
    if !system.has_strict() {
        let standard = StandardForm::build(system);
        return Ok(standard.phase_one().map(|(tableau, _)| standard.recover(&tableau)));
    }
    let n = system.num_vars;
    let mut widened = LinearSystem::new(n + 1);
    for c in &system.constraints {
        let mut coeffs = c.coeffs.clone();
        coeffs.push(if c.relation == Relation::Lt {
            Rational::one()
        } else {
            Rational::zero()
        });
        let relation = if c.relation == Relation::Lt {
            Relation::Le
        } else {
            c.relation
        };
        widened.push(coeffs, relation, c.rhs.clone());
    }
    let slack = widened.unit(n);
    widened = widened.le(slack.clone(), Rational::one()).maximize(slack);
    match lp_optimize(&widened)? {
        LpSolution::Optimal { value, mut point } if value.is_positive() => {
            point.truncate(n);
            Ok(Some(point))
        }
        _ => Ok(None),
    }
}

pub fn lp_optimize(system: &LinearSystem) -> Result<LpSolution, LpError> {
    system.check_dimensions()?;
    let objective = system.objective.as_ref().ok_or(LpError::MissingObjective)?;
    if system.has_strict() {
        return Err(LpError::StrictWithObjective);
    }
    let standard = StandardForm::build(system);
    let Some((mut tableau, artificial_start)) = standard.phase_one() else {
        return Ok(LpSolution::Infeasible);
    };
    // phase two minimizes; a maximization is negated here and restored below
    let mut costs = vec![Rational::zero(); tableau.ncols];
    for (k, c) in objective.coeffs.iter().enumerate() {
        let c = match objective.sense {
            Sense::Maximize => -c.clone(),
            Sense::Minimize => c.clone(),
        };
        let (pos, neg) = standard.columns[k];
        if let Some(neg) = neg {
            costs[neg] = -c.clone();
        }
        costs[pos] = c;
    }
    tableau.set_objective(&costs);
    if tableau.minimize(|j| j < artificial_start).is_err() {
        return Ok(LpSolution::Unbounded);
    }
    let point = standard.recover(&tableau);
    let value = dot(&objective.coeffs, &point);
    Ok(LpSolution::Optimal { value, point })
}

/// Farkas certificate for an infeasible nonstrict system: multipliers `y`
/// with `y_i >= 0` on `<=` rows, `Σ y_i a_i = 0` and `Σ y_i b_i = -1`.
pub fn infeasibility_certificate(system: &LinearSystem) -> Result<Option<Vec<Rational>>, LpError> {
    system.check_dimensions()?;
    if system.has_strict() {
        return Err(LpError::StrictWithObjective);
    }
    let m = system.constraints.len();
    let mut dual = LinearSystem::new(m);
    for k in 0..system.num_vars {
        let column = system.constraints.iter().map(|c| c.coeffs[k].clone()).collect();
        dual = dual.eq(column, Rational::zero());
    }
    for (i, c) in system.constraints.iter().enumerate() {
        if c.relation == Relation::Le {
            let u = dual.unit(i);
            dual = dual.ge(u, Rational::zero());
        }
    }
    let rhs = system.constraints.iter().map(|c| c.rhs.clone()).collect();
    dual = dual.eq(rhs, -Rational::one());
    lp_feasible(&dual)
}

pub fn verify_infeasibility_certificate(system: &LinearSystem, multipliers: &[Rational]) -> bool {
    if multipliers.len() != system.constraints.len() || system.has_strict() {
        return false;
    }
    let signs_ok = system
        .constraints
        .iter()
        .zip(multipliers)
        .all(|(c, y)| c.relation == Relation::Eq || !y.is_negative());
    let combination_vanishes = (0..system.num_vars).all(|k| {
        system
            .constraints
            .iter()
            .zip(multipliers)
            .fold(Rational::zero(), |acc, (c, y)| acc + &c.coeffs[k] * y)
            .is_zero()
    });
    let bound: Rational = system
        .constraints
        .iter()
        .zip(multipliers)
        .fold(Rational::zero(), |acc, (c, y)| acc + &c.rhs * y);
    signs_ok && combination_vanishes && bound.is_negative()
}

/// Equality-form problem `A z = b, z >= 0, b >= 0` derived from a system.
struct StandardForm {
    // per original variable: (positive part column, negative part column if free)
    columns: Vec<(usize, Option<usize>)>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    // column index of the slack that can start basic in each row, if any
    initial_basic: Vec<Option<usize>>,
    structural: usize,
}

impl StandardForm {
    fn build(system: &LinearSystem) -> Self {
        let n = system.num_vars;
        let mut nonneg = vec![false; n];
        let mut kept = Vec::new();
        for c in &system.constraints {
            if let Some(k) = sign_row(c) {
                nonneg[k] = true;
            } else {
                kept.push(c);
            }
        }
        let mut columns = Vec::with_capacity(n);
        let mut next = 0;
        for &is_nonneg in &nonneg {
            if is_nonneg {
                columns.push((next, None));
                next += 1;
            } else {
                columns.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let slack_count = kept.iter().filter(|c| c.relation == Relation::Le).count();
        let structural = next + slack_count;
        let mut rows = Vec::with_capacity(kept.len());
        let mut rhs = Vec::with_capacity(kept.len());
        let mut initial_basic = Vec::with_capacity(kept.len());
        let mut slack = next;
        for c in kept {
            let mut row = vec![Rational::zero(); structural];
            for (k, a) in c.coeffs.iter().enumerate() {
                let (pos, neg) = columns[k];
                row[pos] = a.clone();
                if let Some(neg) = neg {
                    row[neg] = -a.clone();
                }
            }
            let mut slack_col = None;
            if c.relation == Relation::Le {
                row[slack] = Rational::one();
                slack_col = Some(slack);
                slack += 1;
            }
            let mut b = c.rhs.clone();
            if b.is_negative() {
                for a in row.iter_mut() {
                    *a = -a.clone();
                }
                b = -b;
                slack_col = None;
            }
            rows.push(row);
            rhs.push(b);
            initial_basic.push(slack_col);
        }
        Self {
            columns,
            rows,
            rhs,
            initial_basic,
            structural,
        }
    }

    /// Runs phase one. On success returns a feasible tableau with no
    /// artificial column left in the basis, plus the index where artificial
    /// columns start.
    fn phase_one(&self) -> Option<(Tableau, usize)> {
        let m = self.rows.len();
        let artificial_rows: Vec<usize> = (0..m).filter(|&i| self.initial_basic[i].is_none()).collect();
        let ncols = self.structural + artificial_rows.len();
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_art = self.structural;
        for i in 0..m {
            let mut row = self.rows[i].clone();
            row.resize(ncols + 1, Rational::zero());
            row[ncols] = self.rhs[i].clone();
            match self.initial_basic[i] {
                Some(col) => basis.push(col),
                None => {
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        let mut tableau = Tableau {
            rows,
            objective: vec![Rational::zero(); ncols + 1],
            basis,
            ncols,
        };
        let mut costs = vec![Rational::zero(); ncols];
        for c in costs.iter_mut().skip(self.structural) {
            *c = Rational::one();
        }
        tableau.set_objective(&costs);
        tableau
            .minimize(|_| true)
            .expect("phase one objective is bounded below by zero");
        if !tableau.objective[ncols].is_zero() {
            return None;
        }
        tableau.expel_artificials(self.structural);
        Some((tableau, self.structural))
    }

    fn recover(&self, tableau: &Tableau) -> Vec<Rational> {
        let mut values = vec![Rational::zero(); tableau.ncols];
        for (i, &col) in tableau.basis.iter().enumerate() {
            values[col] = tableau.rows[i][tableau.ncols].clone();
        }
        self.columns
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &values[pos] - &values[neg],
                None => values[pos].clone(),
            })
            .collect()
    }
}

/// Index `k` when the row reads `c·x_k <= 0` with `c < 0`.
fn sign_row(c: &Constraint) -> Option<usize> {
    if c.relation != Relation::Le || !c.rhs.is_zero() {
        return None;
    }
    let mut nonzero = c.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero());
    match (nonzero.next(), nonzero.next()) {
        (Some((k, a)), None) if a.is_negative() => Some(k),
        _ => None,
    }
}

struct Tableau {
    // each row has ncols coefficients followed by the right-hand side
    rows: Vec<Vec<Rational>>,
    // reduced costs followed by minus the current objective value
    objective: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
}

#[derive(Debug)]
struct Unbounded;

impl Tableau {
    fn set_objective(&mut self, costs: &[Rational]) {
        let mut objective: Vec<Rational> = costs.to_vec();
        objective.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (o, a) in objective.iter_mut().zip(&self.rows[i]) {
                *o -= cb * a;
            }
        }
        self.objective = objective;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for a in self.rows[r].iter_mut() {
            if !a.is_zero() {
                *a *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |row: &mut Vec<Rational>| {
            let factor = row[c].clone();
            if factor.is_zero() {
                return;
            }
            for (a, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a -= &factor * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.objective);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    fn minimize(&mut self, allowed: impl Fn(usize) -> bool) -> Result<(), Unbounded> {
        loop {
            let entering = (0..self.ncols).find(|&j| allowed(j) && self.objective[j].is_negative());
            let Some(c) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[c];
                let better = match &leaving {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio || (ratio == *best_ratio && self.basis[i] < self.basis[*best])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((r, _)) = leaving else {
                return Err(Unbounded);
            };
            self.pivot(r, c);
        }
    }

    /// After a successful phase one, pivots zero-valued artificial columns
    /// out of the basis and drops rows that turn out to be redundant.
    fn expel_artificials(&mut self, artificial_start: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < artificial_start {
                i += 1;
                continue;
            }
            match (0..artificial_start).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}
