//! C ABI over the Clarabel interior-point solver.
//!
//! Problem form: minimize q'x subject to Ax + s = b, s in K, with A given in
//! compressed sparse column form (m rows, n columns) and K a product of cones
//! listed in order.

#![allow(non_camel_case_types)]

use clarabel::algebra::CscMatrix;
use clarabel::solver::*;
use std::panic::{catch_unwind, AssertUnwindSafe};

pub const MS_CONE_ZERO: i32 = 0;
pub const MS_CONE_NONNEG: i32 = 1;
pub const MS_CONE_SOC: i32 = 2;
pub const MS_CONE_PSD_TRIANGLE: i32 = 3;

#[repr(C)]
pub struct ms_clarabel_settings {
    pub tol_feas: f64,
    pub tol_gap_abs: f64,
    pub tol_gap_rel: f64,
    pub max_iter: u32,
    pub time_limit: f64,
    pub verbose: i32,
}

#[repr(C)]
pub struct ms_clarabel_result {
    pub status: i32,
    pub iterations: u32,
    pub obj_val: f64,
    pub obj_val_dual: f64,
    pub r_prim: f64,
    pub r_dual: f64,
    pub solve_time: f64,
}

fn status_code(s: SolverStatus) -> i32 {
    match s {
        SolverStatus::Unsolved => 0,
        SolverStatus::Solved => 1,
        SolverStatus::PrimalInfeasible => 2,
        SolverStatus::DualInfeasible => 3,
        SolverStatus::AlmostSolved => 4,
        SolverStatus::AlmostPrimalInfeasible => 5,
        SolverStatus::AlmostDualInfeasible => 6,
        SolverStatus::MaxIterations => 7,
        SolverStatus::MaxTime => 8,
        SolverStatus::NumericalError => 9,
        SolverStatus::InsufficientProgress => 10,
        SolverStatus::CallbackTerminated => 11,
    }
}

/// Returns 0 when the solver ran (check `out.status`), -1 on rejected input
/// and -2 if the solver panicked.
///
/// # Safety
/// All pointers must reference arrays of the documented lengths: `q`, `x_out`
/// of length n; `b`, `s_out`, `z_out` of length m; `colptr` of length n + 1;
/// `rowval`, `nzval` of length colptr[n]; `kinds`, `dims` of length ncones.
#[no_mangle]
pub unsafe extern "C" fn ms_clarabel_solve(
    n: usize,
    m: usize,
    q: *const f64,
    colptr: *const usize,
    rowval: *const usize,
    nzval: *const f64,
    b: *const f64,
    ncones: usize,
    kinds: *const i32,
    dims: *const usize,
    settings: *const ms_clarabel_settings,
    x_out: *mut f64,
    s_out: *mut f64,
    z_out: *mut f64,
    out: *mut ms_clarabel_result,
) -> i32 {
    let run = || -> Result<(), ()> {
        let q = std::slice::from_raw_parts(q, n).to_vec();
        let colptr = std::slice::from_raw_parts(colptr, n + 1).to_vec();
        let nnz = colptr[n];
        let rowval = std::slice::from_raw_parts(rowval, nnz).to_vec();
        let nzval = std::slice::from_raw_parts(nzval, nnz).to_vec();
        let b = std::slice::from_raw_parts(b, m).to_vec();
        let kinds = std::slice::from_raw_parts(kinds, ncones);
        let dims = std::slice::from_raw_parts(dims, ncones);
        let opts = &*settings;

        let mut cones = Vec::with_capacity(ncones);
        for (&k, &d) in kinds.iter().zip(dims.iter()) {
            cones.push(match k {
                MS_CONE_ZERO => ZeroConeT(d),
                MS_CONE_NONNEG => NonnegativeConeT(d),
                MS_CONE_SOC => SecondOrderConeT(d),
                MS_CONE_PSD_TRIANGLE => PSDTriangleConeT(d),
                _ => return Err(()),
            });
        }

        let a = CscMatrix::new(m, n, colptr, rowval, nzval);
        let p = CscMatrix::<f64>::zeros((n, n));
        let settings = DefaultSettingsBuilder::default()
            .tol_feas(opts.tol_feas)
            .tol_gap_abs(opts.tol_gap_abs)
            .tol_gap_rel(opts.tol_gap_rel)
            .max_iter(opts.max_iter)
            .time_limit(opts.time_limit)
            .verbose(opts.verbose != 0)
            .build()
            .map_err(|_| ())?;

        let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, settings).map_err(|_| ())?;
        solver.solve();
        let sol = &solver.solution;

        std::slice::from_raw_parts_mut(x_out, n).copy_from_slice(&sol.x);
        std::slice::from_raw_parts_mut(s_out, m).copy_from_slice(&sol.s);
        std::slice::from_raw_parts_mut(z_out, m).copy_from_slice(&sol.z);
        let res = &mut *out;
        res.status = status_code(sol.status);
        res.iterations = sol.iterations;
        res.obj_val = sol.obj_val;
        res.obj_val_dual = sol.obj_val_dual;
        res.r_prim = sol.r_prim;
        res.r_dual = sol.r_dual;
        res.solve_time = sol.solve_time;
        Ok(())
    };
    match catch_unwind(AssertUnwindSafe(run)) {
        Ok(Ok(())) => 0,
        Ok(Err(())) => -1,
        Err(_) => -2,
    }
}
