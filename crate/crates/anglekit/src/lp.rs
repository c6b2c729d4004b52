//! Exact rational linear programming, sized for desk-scale feasibility
//! questions: cone membership certificates and interior points of strict
//! sign systems.
//!
//! The solver is a dense two-phase simplex on the standard form
//! `max c·x  s.t.  Ax = b, x >= 0` with Bland's rule, so it terminates on
//! every input without perturbation.

use num_traits::{One, Signed, Zero};

use crate::linalg::{RatMat, RatVec};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    /// Optimal value and a primal solution.
    Optimal(Rat, RatVec),
    Infeasible,
    Unbounded,
}

/// max c·x subject to Ax = b, x >= 0 (standard form).
pub fn simplex_standard(a: &RatMat, b: &RatVec, c: &RatVec) -> LpOutcome {
    let m = a.nrows();
    let n = a.cols;
    debug_assert_eq!(b.dim(), m);
    debug_assert_eq!(c.dim(), n);

    // Make b nonnegative.
    let mut rows: Vec<Vec<Rat>> = a.rows.iter().map(|r| r.coords.clone()).collect();
    let mut rhs = b.coords.clone();
    for i in 0..m {
        if rhs[i].is_negative() {
            for x in rows[i].iter_mut() {
                *x = -x.clone();
            }
            rhs[i] = -rhs[i].clone();
        }
    }

    // Phase 1 tableau with artificial variables.
    let total = n + m;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = rows[i].clone();
        for j in 0..m {
            row.push(if i == j { Rat::one() } else { Rat::zero() });
        }
        row.push(rhs[i].clone());
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..total).collect();

    // Phase-1 objective: maximize -(sum of artificials). Written through the
    // artificial basis, z = -Σ rhs + Σ_j (Σ_i A_ij) x_j, and we store the
    // reduced coefficients plus -z in the last slot.
    let mut obj = vec![Rat::zero(); total + 1];
    for i in 0..m {
        for j in 0..n {
            let add = t[i][j].clone();
            obj[j] = &obj[j] + &add;
        }
        let add = t[i][total].clone();
        obj[total] = &obj[total] + &add;
    }

    fn pivot(t: &mut [Vec<Rat>], obj: &mut [Rat], basis: &mut [usize], row: usize, col: usize) {
        let total = obj.len() - 1;
        let inv = t[row][col].recip();
        for j in 0..=total {
            t[row][j] = &t[row][j] * &inv;
        }
        for i in 0..t.len() {
            if i != row && !t[i][col].is_zero() {
                let f = t[i][col].clone();
                for j in 0..=total {
                    let sub = &t[row][j] * &f;
                    t[i][j] = &t[i][j] - &sub;
                }
            }
        }
        if !obj[col].is_zero() {
            let f = obj[col].clone();
            for j in 0..=total {
                let sub = &t[row][j] * &f;
                obj[j] = &obj[j] - &sub;
            }
        }
        basis[row] = col;
    }

    // Bland's rule: entering = smallest index with positive reduced profit
    // (we maximize -sum(artificials), i.e. look for obj coefficient > 0 after
    // sign bookkeeping below). We store obj so that obj[j] is the coefficient
    // of variable j in the current expression of the objective; a variable
    // improves if its coefficient is positive.
    let run = |t: &mut Vec<Vec<Rat>>, obj: &mut Vec<Rat>, basis: &mut Vec<usize>, limit: usize| -> bool {
        loop {
            let enter = (0..limit).find(|&j| obj[j].is_positive());
            let Some(col) = enter else { return true };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..t.len() {
                if t[i][col].is_positive() {
                    let ratio = &t[i][obj.len() - 1] / &t[i][col];
                    match &best {
                        None => best = Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < *br || (ratio == *br && basis[i] < basis[*bi]) {
                                best = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((row, _)) = best else { return false };
            pivot(t, obj, basis, row, col);
        }
    };

    // Phase 1 maximizes -(sum artificials); optimum 0 iff feasible.
    let finished = run(&mut t, &mut obj, &mut basis, total);
    debug_assert!(finished, "phase 1 is always bounded");
    if !obj[total].is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive any artificial variables out of the basis.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(col) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut obj, &mut basis, i, col);
            }
            // A redundant row may keep its artificial at value zero; harmless.
        }
    }

    // Phase 2: objective c over original variables only.
    let mut obj2 = vec![Rat::zero(); total + 1];
    for j in 0..n {
        obj2[j] = c.coords[j].clone();
    }
    // Express objective through the current basis.
    for i in 0..m {
        let bj = basis[i];
        if bj < n && !obj2[bj].is_zero() {
            let f = obj2[bj].clone();
            for j in 0..=total {
                let sub = &t[i][j] * &f;
                obj2[j] = &obj2[j] - &sub;
            }
        }
    }
    // Forbid artificials from re-entering.
    if !run(&mut t, &mut obj2, &mut basis, n) {
        return LpOutcome::Unbounded;
    }

    let mut x = RatVec::zeros(n);
    for i in 0..m {
        if basis[i] < n {
            x.coords[basis[i]] = t[i][total].clone();
        }
    }
    let value = -obj2[total].clone();
    LpOutcome::Optimal(value, x)
}

/// Is there λ >= 0 with Σ λ_i g_i = target? (Exact cone membership.)
pub fn nonneg_combination(generators: &[RatVec], target: &RatVec) -> bool {
    if target.is_zero() {
        return true;
    }
    if generators.is_empty() {
        return false;
    }
    let dim = target.dim();
    // Columns are generators; rows are coordinates.
    let rows: Vec<RatVec> = (0..dim)
        .map(|i| RatVec::new(generators.iter().map(|g| g.coords[i].clone()).collect()))
        .collect();
    let a = RatMat::new(rows, generators.len());
    let c = RatVec::zeros(generators.len());
    matches!(simplex_standard(&a, target, &c), LpOutcome::Optimal(..))
}

/// Decides the strict/equality sign system
///   <z_i, x> > 0   (sign +), < 0 (sign −), = 0 (sign 0)
/// by maximizing a slack ε with σ_i<z_i,x> >= ε and ε <= 1. The system is
/// homogeneous, so it is realizable iff the optimum is positive; the witness
/// then satisfies every strict constraint with margin ε.
pub fn strict_sign_system_witness(normals: &[RatVec], signs: &[i8]) -> Option<RatVec> {
    debug_assert_eq!(normals.len(), signs.len());
    let dim = normals.first().map(|n| n.dim()).unwrap_or(0);
    if dim == 0 {
        return if signs.iter().all(|&s| s == 0) { Some(RatVec::zeros(0)) } else { None };
    }
    // Variables: x = x+ − x− (2·dim), ε, slacks (one per strict row), s_eps.
    let strict: Vec<usize> = (0..signs.len()).filter(|&i| signs[i] != 0).collect();
    let eqs: Vec<usize> = (0..signs.len()).filter(|&i| signs[i] == 0).collect();
    let nvars = 2 * dim + 1 + strict.len() + 1;
    let eps_col = 2 * dim;
    let mut rows: Vec<RatVec> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    // σ_i<z_i,x> − ε − slack_i = 0
    for (k, &i) in strict.iter().enumerate() {
        let mut row = vec![Rat::zero(); nvars];
        let sgn = if signs[i] > 0 { Rat::one() } else { -Rat::one() };
        for j in 0..dim {
            let v = &normals[i].coords[j] * &sgn;
            row[j] = v.clone();
            row[dim + j] = -v;
        }
        row[eps_col] = -Rat::one();
        row[eps_col + 1 + k] = -Rat::one();
        rows.push(RatVec::new(row));
        rhs.push(Rat::zero());
    }
    // <z_i,x> = 0
    for &i in &eqs {
        let mut row = vec![Rat::zero(); nvars];
        for j in 0..dim {
            row[j] = normals[i].coords[j].clone();
            row[dim + j] = -normals[i].coords[j].clone();
        }
        rows.push(RatVec::new(row));
        rhs.push(Rat::zero());
    }
    // ε + s_eps = 1
    let mut row = vec![Rat::zero(); nvars];
    row[eps_col] = Rat::one();
    row[nvars - 1] = Rat::one();
    rows.push(RatVec::new(row));
    rhs.push(Rat::one());

    let a = RatMat::new(rows, nvars);
    let b = RatVec::new(rhs);
    let mut c = RatVec::zeros(nvars);
    c.coords[eps_col] = Rat::one();
    match simplex_standard(&a, &b, &c) {
        LpOutcome::Optimal(value, x) if value.is_positive() => {
            let coords: Vec<Rat> = (0..dim)
                .map(|j| &x.coords[j] - &x.coords[dim + j])
                .collect();
            Some(RatVec::new(coords))
        }
        _ => None,
    }
}
