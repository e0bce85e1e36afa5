//! Exact sparse linear algebra over Q: solve, kernel, image membership.
//!
//! Everything any cohomology verdict rests on funnels through
//! [`linear_solve`]. The solver is a deterministic sparse row-echelon
//! elimination with first-nonzero pivoting (no magnitude heuristics, no
//! randomization), so identical problems produce identical witnesses across
//! runs. Both outcomes carry exact certificates: a solution comes with a
//! particular vector plus a kernel basis, an inconsistency comes with a
//! left-kernel vector `y` with `y^T A = 0`, `y^T b != 0`.

use num_traits::Zero;

use crate::exec;
use crate::rat::Rat;

/// Sparse vector as (column, value) pairs, sorted by column, no zeros.
pub type SparseVec = Vec<(usize, Rat)>;

/// Finite linear system `A x = b` with labeled unknowns.
#[derive(Debug, Clone)]
pub struct LinearProblem {
    /// Canonical labels of the unknowns; `labels.len()` is the column count.
    pub labels: Vec<String>,
    /// Rows of `A`, sparse.
    pub rows: Vec<SparseVec>,
    /// Right hand side, one entry per row.
    pub rhs: Vec<Rat>,
}

#[derive(Debug, Clone)]
pub struct LinearSolution {
    /// One exact solution (free unknowns set to zero).
    pub particular: Vec<Rat>,
    /// Basis of the kernel of `A`.
    pub kernel: Vec<Vec<Rat>>,
}

/// Witness of inconsistency: `y` as sparse combination of original rows.
#[derive(Debug, Clone)]
pub struct InconsistencyCertificate {
    pub row_combination: SparseVec,
}

#[derive(Debug, Clone)]
pub enum LinearOutcome {
    Solution(LinearSolution),
    NoSolution(InconsistencyCertificate),
}

/// `acc = acc - factor * row`, sparse merge.
fn axpy_sub(acc: &SparseVec, factor: &Rat, row: &SparseVec) -> SparseVec {
    let mut out = SparseVec::with_capacity(acc.len() + row.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() || j < row.len() {
        if j >= row.len() || (i < acc.len() && acc[i].0 < row[j].0) {
            out.push(acc[i].clone());
            i += 1;
        } else if i >= acc.len() || row[j].0 < acc[i].0 {
            let v = -(factor * &row[j].1);
            if !v.is_zero() {
                out.push((row[j].0, v));
            }
            j += 1;
        } else {
            let v = &acc[i].1 - factor * &row[j].1;
            if !v.is_zero() {
                out.push((acc[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn sparse_get(row: &SparseVec, col: usize) -> Option<&Rat> {
    row.binary_search_by_key(&col, |e| e.0)
        .ok()
        .map(|k| &row[k].1)
}

struct WorkRow {
    coeffs: SparseVec,
    rhs: Rat,
    // combination of original rows that produced this row
    trace: SparseVec,
}

/// Solves `A x = b` exactly.
pub fn linear_solve(problem: &LinearProblem) -> LinearOutcome {
    let ncols = problem.labels.len();
    debug_assert_eq!(problem.rows.len(), problem.rhs.len());
    for row in &problem.rows {
        debug_assert!(row.iter().all(|(c, _)| *c < ncols));
    }

    let mut work: Vec<WorkRow> = problem
        .rows
        .iter()
        .zip(&problem.rhs)
        .enumerate()
        .map(|(i, (coeffs, rhs))| WorkRow {
            coeffs: coeffs.clone(),
            rhs: rhs.clone(),
            trace: vec![(i, Rat::from_integer(1.into()))],
        })
        .collect();

    // pivot_of_col[c] = index into `pivots` for the pivot in column c
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut pivots: Vec<WorkRow> = Vec::new();

    for col in 0..ncols {
        let Some(pos) = work
            .iter()
            .position(|r| sparse_get(&r.coeffs, col).is_some())
        else {
            continue;
        };
        let mut pivot = work.remove(pos);
        let inv = {
            let p = sparse_get(&pivot.coeffs, col).unwrap().clone();
            Rat::from_integer(1.into()) / p
        };
        pivot.coeffs = pivot
            .coeffs
            .iter()
            .map(|(c, v)| (*c, v * &inv))
            .collect();
        pivot.rhs *= &inv;
        pivot.trace = pivot.trace.iter().map(|(c, v)| (*c, v * &inv)).collect();

        // eliminate the column everywhere else (reduced echelon form)
        let reduce = |r: WorkRow| -> WorkRow {
            match sparse_get(&r.coeffs, col) {
                None => r,
                Some(f) => {
                    let f = f.clone();
                    WorkRow {
                        coeffs: axpy_sub(&r.coeffs, &f, &pivot.coeffs),
                        rhs: &r.rhs - &f * &pivot.rhs,
                        trace: axpy_sub(&r.trace, &f, &pivot.trace),
                    }
                }
            }
        };
        work = exec::par_map(work, &reduce);
        pivots = exec::par_map(pivots, &reduce);

        pivot_of_col[col] = Some(pivots.len());
        pivots.push(pivot);
    }

    // every remaining working row must now be 0 = rhs
    for r in &work {
        debug_assert!(r.coeffs.is_empty());
        if !r.rhs.is_zero() {
            return LinearOutcome::NoSolution(InconsistencyCertificate {
                row_combination: r.trace.clone(),
            });
        }
    }

    let mut particular = vec![Rat::zero(); ncols];
    for (col, p) in pivot_of_col.iter().enumerate() {
        if let Some(pi) = p {
            particular[col] = pivots[*pi].rhs.clone();
        }
    }

    let mut kernel = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::from_integer(1.into());
        for (col, p) in pivot_of_col.iter().enumerate() {
            if let Some(pi) = p {
                if let Some(c) = sparse_get(&pivots[*pi].coeffs, free) {
                    v[col] = -c.clone();
                }
            }
        }
        kernel.push(v);
    }

    LinearOutcome::Solution(LinearSolution { particular, kernel })
}

/// `A x` for a dense `x`.
pub fn apply(problem: &LinearProblem, x: &[Rat]) -> Vec<Rat> {
    problem
        .rows
        .iter()
        .map(|row| row.iter().map(|(c, v)| v * &x[*c]).sum())
        .collect()
}

#[derive(Debug, Clone)]
pub enum Membership {
    /// Coefficients expressing `v` over the generators.
    InSpan(Vec<Rat>),
    /// Separating functional: zero on every generator, nonzero on `v`.
    NotInSpan(InconsistencyCertificate),
}

/// Decides whether `v` lies in the span of `generators` (all dense, equal
/// length), with an exact witness either way.
pub fn membership(v: &[Rat], generators: &[Vec<Rat>]) -> Membership {
    for g in generators {
        assert_eq!(g.len(), v.len(), "generator length mismatch");
    }
    let labels = (0..generators.len()).map(|i| format!("g{i}")).collect();
    let rows = (0..v.len())
        .map(|r| {
            let mut row = SparseVec::new();
            for (j, g) in generators.iter().enumerate() {
                if !g[r].is_zero() {
                    row.push((j, g[r].clone()));
                }
            }
            row
        })
        .collect();
    let problem = LinearProblem {
        labels,
        rows,
        rhs: v.to_vec(),
    };
    match linear_solve(&problem) {
        LinearOutcome::Solution(s) => Membership::InSpan(s.particular),
        LinearOutcome::NoSolution(c) => Membership::NotInSpan(c),
    }
}
