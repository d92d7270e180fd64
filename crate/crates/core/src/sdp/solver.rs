//! Primal-dual interior-point method (Mehrotra predictor-corrector, HKM
//! direction) for the block LMI problem  min c.y  s.t.  F0 + sum y_i F_i >= 0.
//!
//! Both phases keep the inequality side exactly feasible: S is recomputed as
//! F(y) after every step, so any returned y satisfies the LMIs to roundoff.
//! Feasibility of the problem itself is decided by a phase-I slack
//! minimization (min t s.t. F(y) + tI >= 0, t >= -1); an infeasibility verdict
//! carries a dual improving-ray check, and boundary cases where no ray exists
//! (weak infeasibility) are reported as uncertified.
//!
//! Presolve, applied exactly: per-variable and per-block rescaling, and
//! restriction of every block to the common range of its matrices (rank-one
//! measurement projectors otherwise leave the slack cone without interior,
//! which stalls interior-point iterations).

use super::{SdpOptions, SdpProblem, SdpSolution, SdpStatus};
use crate::linalg::{dot, norm2, norm_inf, Mat};
use crate::scalar::{fl, Scalar};

/// Fraction of the distance to the cone boundary taken per step.
const STEP_FRACTION: f64 = 0.98;
/// Phase-I slack below -this counts as a strictly feasible point.
const PHASE1_EXIT_MARGIN: f64 = 1e-6;
/// Phase-I iterations that stall with the slack pinned inside this band above
/// zero are classified as infeasible (uncertified): the slack could not be
/// pushed negative, yet no improving ray exists.
const PHASE1_STALL_BAND: f64 = 1e-4;
/// Relative eigenvalue cutoff of the common-range (facial) reduction.
const REDUCTION_TOL: f64 = 1e-12;
/// Iterations without gap improvement before giving up.
const STALL_LIMIT: usize = 30;
/// Objective below -this (after scaling) triggers the unboundedness check.
const DIVERGE_LIMIT: f64 = 1e9;

struct WorkBlock<T> {
    f0: Mat<T>,
    fs: Vec<Mat<T>>, // one per live variable, reduced and scaled
}

impl<T: Scalar> WorkBlock<T> {
    fn eval(&self, y: &[T]) -> Mat<T> {
        let mut s = self.f0.clone();
        for (yi, fi) in y.iter().zip(&self.fs) {
            s.axpy(*yi, fi);
        }
        s
    }
}

struct Work<T> {
    /// objective over live variables, in scaled coordinates
    c: Vec<T>,
    blocks: Vec<WorkBlock<T>>,
    /// original index of each live variable
    live: Vec<usize>,
    /// y_original = y_scaled / var_scale
    var_scale: Vec<T>,
}

enum Presolved<T> {
    Ready(Work<T>),
    Done(SdpSolution<T>),
}

pub(super) fn solve<T: Scalar>(problem: &SdpProblem<T>, options: &SdpOptions<T>) -> SdpSolution<T> {
    let work = match presolve(problem, options) {
        Presolved::Ready(w) => w,
        Presolved::Done(sol) => return sol,
    };

    // Caller-provided start, if it verifies as strictly feasible. Should the
    // iteration strand from there, fall through to the phase-I start rather
    // than give up: a warm start near a face can steer the path badly.
    let mut iterations = 0;
    let provided = options
        .start
        .as_ref()
        .filter(|y0| y0.len() == problem.num_vars())
        .map(|y0| work.live.iter().map(|&i| y0[i] * work.var_scale[i]).collect::<Vec<T>>())
        .filter(|ys| {
            work.blocks.iter().all(|b| b.eval(ys).cholesky().is_some())
        });
    if let Some(ys) = provided {
        let out = ipm(&work.c, &work.blocks, ys, options, None, &mut iterations);
        match out.kind {
            IpmKind::MaxIter | IpmKind::Stall => {
                let sol = finish(problem, &work, options, out, iterations);
                if sol.status != SdpStatus::NumericalTrouble {
                    return sol;
                }
            }
            _ => return finish(problem, &work, options, out, iterations),
        }
    }

    let y0 = match phase1(&work, options, &mut iterations) {
        Phase1Outcome::Feasible(ys) => ys,
        Phase1Outcome::Infeasible { certified } => {
            return SdpSolution {
                status: SdpStatus::Infeasible,
                y: vec![T::zero(); problem.num_vars()],
                objective: T::nan(),
                duality_gap: T::nan(),
                max_violation: T::nan(),
                iterations,
                certified,
            }
        }
        Phase1Outcome::Trouble => {
            return SdpSolution {
                status: SdpStatus::NumericalTrouble,
                y: vec![T::zero(); problem.num_vars()],
                objective: T::nan(),
                duality_gap: T::nan(),
                max_violation: T::nan(),
                iterations,
                certified: false,
            }
        }
    };

    let out = ipm(&work.c, &work.blocks, y0, options, None, &mut iterations);
    finish(problem, &work, options, out, iterations)
}

fn finish<T: Scalar>(
    problem: &SdpProblem<T>,
    work: &Work<T>,
    options: &SdpOptions<T>,
    out: IpmOut<T>,
    iterations: usize,
) -> SdpSolution<T> {
    let y_full = unscale(work, &out.y, problem.num_vars());
    let objective = dot(&problem.objective, &y_full);
    let report = super::feasibility_check(problem, &y_full);
    match out.kind {
        IpmKind::Converged => SdpSolution {
            status: SdpStatus::Optimal,
            y: y_full,
            objective,
            duality_gap: out.gap.max(T::zero()),
            max_violation: report.max_violation,
            iterations,
            certified: true,
        },
        IpmKind::Diverging => {
            // normalized improving direction for the objective
            let ray: Vec<T> = {
                let n = norm2(&out.y).max(T::min_positive_value());
                out.y.iter().map(|&v| v / n).collect()
            };
            let ray_ok = work.blocks.iter().all(|b| {
                let mut g = Mat::zeros(b.f0.rows(), b.f0.rows());
                for (ri, fi) in ray.iter().zip(&b.fs) {
                    g.axpy(*ri, fi);
                }
                g.min_eigval() >= -options.ray_tol
            }) && dot(&work.c, &ray) <= -options.ray_tol;
            SdpSolution {
                status: if ray_ok { SdpStatus::Unbounded } else { SdpStatus::NumericalTrouble },
                y: y_full,
                objective: if ray_ok { T::neg_infinity() } else { objective },
                duality_gap: out.gap,
                max_violation: report.max_violation,
                iterations,
                certified: ray_ok,
            }
        }
        IpmKind::EarlyExit => unreachable!("phase-II has no early exit"),
        IpmKind::MaxIter | IpmKind::Stall => {
            // A degenerate optimal face can strand the iteration short of its
            // internal residual targets with the answer already in hand. The
            // point is acceptable if it passes the same test a caller could
            // run: y feasible on the original blocks, and the measured gap --
            // which bounds the remaining suboptimality -- within tolerance.
            let settled = report.max_violation <= options.feas_tol
                && out.gap.abs() <= options.gap_tol * (T::one() + objective.abs());
            SdpSolution {
                status: if settled {
                    SdpStatus::Optimal
                } else {
                    SdpStatus::NumericalTrouble
                },
                y: y_full,
                objective,
                duality_gap: out.gap,
                max_violation: report.max_violation,
                iterations,
                certified: settled,
            }
        }
    }
}

fn unscale<T: Scalar>(work: &Work<T>, y_scaled: &[T], num_vars: usize) -> Vec<T> {
    let mut y = vec![T::zero(); num_vars];
    for (k, &i) in work.live.iter().enumerate() {
        y[i] = y_scaled[k] / work.var_scale[i];
    }
    y
}

fn presolve<T: Scalar>(problem: &SdpProblem<T>, options: &SdpOptions<T>) -> Presolved<T> {
    let m = problem.num_vars();

    // Per-variable scale: stacked Frobenius norm of its constraint matrices.
    let mut var_scale = vec![T::zero(); m];
    let mut live = Vec::new();
    for i in 0..m {
        let s2: T = problem.blocks.iter().map(|b| b.fs[i].inner(&b.fs[i])).sum();
        if s2 > T::zero() {
            var_scale[i] = s2.sqrt();
            live.push(i);
        } else {
            var_scale[i] = T::one();
            if problem.objective[i] != T::zero() {
                // unconstrained variable with nonzero cost: trivial free ray
                return Presolved::Done(SdpSolution {
                    status: SdpStatus::Unbounded,
                    y: vec![T::zero(); m],
                    objective: T::neg_infinity(),
                    duality_gap: T::nan(),
                    max_violation: T::zero(),
                    iterations: 0,
                    certified: true,
                });
            }
        }
    }

    let c: Vec<T> = live.iter().map(|&i| problem.objective[i] / var_scale[i]).collect();

    let mut blocks = Vec::new();
    for raw in &problem.blocks {
        let d = raw.dim();
        let beta = raw.f0.frob_norm().max(T::one());
        let f0 = raw.f0.scale(T::one() / beta);
        let fs: Vec<Mat<T>> = live
            .iter()
            .map(|&i| raw.fs[i].scale(T::one() / (var_scale[i] * beta)))
            .collect();

        // Common-range reduction: every F(y) vanishes on the joint null space
        // of {F0, F_i}, so restrict to range(F0^2 + sum F_i^2). Exact.
        let mut gram = f0.matmul(&f0);
        for f in &fs {
            gram = gram.add(&f.matmul(f));
        }
        let (vals, vecs) = gram.sym_eig();
        let top = vals[d - 1].max(T::zero());
        let keep: Vec<usize> =
            (0..d).filter(|&k| vals[k] > top * fl(REDUCTION_TOL)).collect();
        if keep.is_empty() {
            continue; // identically zero block
        }
        let (f0, fs) = if keep.len() == d {
            (f0, fs)
        } else {
            let w = Mat::from_fn(d, keep.len(), |i, j| vecs[(i, keep[j])]);
            let wt = w.transpose();
            (
                wt.matmul(&f0).matmul(&w).symmetrize(),
                fs.iter().map(|f| wt.matmul(f).matmul(&w).symmetrize()).collect(),
            )
        };

        if fs.iter().all(|f| f.is_zero()) {
            // constant block: satisfied within tolerance, or plainly infeasible
            // (certificate: the most negative eigenvector, orthogonal to all F_i)
            if f0.min_eigval() >= -options.feas_tol {
                continue;
            }
            return Presolved::Done(SdpSolution {
                status: SdpStatus::Infeasible,
                y: vec![T::zero(); m],
                objective: T::nan(),
                duality_gap: T::nan(),
                max_violation: T::nan(),
                iterations: 0,
                certified: true,
            });
        }
        blocks.push(WorkBlock { f0, fs });
    }

    if blocks.is_empty() {
        // no constraints left on the live variables
        let status = if c.iter().all(|&ci| ci == T::zero()) {
            SdpStatus::Optimal
        } else {
            SdpStatus::Unbounded
        };
        let y = vec![T::zero(); m];
        let objective =
            if status == SdpStatus::Optimal { T::zero() } else { T::neg_infinity() };
        return Presolved::Done(SdpSolution {
            status,
            y,
            objective,
            duality_gap: T::zero(),
            max_violation: T::zero(),
            iterations: 0,
            certified: true,
        });
    }

    Presolved::Ready(Work { c, blocks, live, var_scale })
}

enum Phase1Outcome<T> {
    Feasible(Vec<T>),
    Infeasible { certified: bool },
    Trouble,
}

/// min t  s.t.  F(y) + t I >= 0 per block, and t >= -1 to keep it bounded.
fn phase1<T: Scalar>(
    work: &Work<T>,
    options: &SdpOptions<T>,
    iterations: &mut usize,
) -> Phase1Outcome<T> {
    let n_live = work.c.len();
    let t_idx = n_live;
    let mut blocks: Vec<WorkBlock<T>> = work
        .blocks
        .iter()
        .map(|b| {
            let mut fs = b.fs.clone();
            fs.push(Mat::identity(b.f0.rows()));
            WorkBlock { f0: b.f0.clone(), fs }
        })
        .collect();
    // bound block: 1 + t >= 0
    let mut bound_fs = vec![Mat::zeros(1, 1); n_live];
    let mut ft = Mat::zeros(1, 1);
    ft[(0, 0)] = T::one();
    bound_fs.push(ft);
    let mut one = Mat::zeros(1, 1);
    one[(0, 0)] = T::one();
    blocks.push(WorkBlock { f0: one, fs: bound_fs });

    let mut c1 = vec![T::zero(); n_live + 1];
    c1[t_idx] = T::one();

    let t0 = work
        .blocks
        .iter()
        .map(|b| -b.f0.min_eigval())
        .fold(T::zero(), |m, x| m.max(x))
        + T::one();
    let mut y0 = vec![T::zero(); n_live + 1];
    y0[t_idx] = t0;

    let out = ipm(
        &c1,
        &blocks,
        y0,
        options,
        Some((t_idx, -fl::<T>(PHASE1_EXIT_MARGIN))),
        iterations,
    );
    match out.kind {
        IpmKind::EarlyExit => Phase1Outcome::Feasible(out.y[..n_live].to_vec()),
        IpmKind::Converged => {
            let t_star = out.y[t_idx];
            if t_star < -fl::<T>(PHASE1_EXIT_MARGIN) {
                return Phase1Outcome::Feasible(out.y[..n_live].to_vec());
            }
            // improving-ray check on the dual solution, bound block excluded
            let xs = &out.x[..work.blocks.len()];
            let trace: T = xs.iter().map(|x| x.trace()).sum();
            let certified = if trace > T::zero() {
                let viol = (0..n_live)
                    .map(|i| {
                        let v: T = xs
                            .iter()
                            .zip(&work.blocks)
                            .map(|(x, b)| b.fs[i].inner(x))
                            .sum();
                        (v / trace).abs()
                    })
                    .fold(T::zero(), |m, v| m.max(v));
                let value: T = xs
                    .iter()
                    .zip(&work.blocks)
                    .map(|(x, b)| b.f0.inner(x))
                    .sum::<T>()
                    / trace;
                viol <= options.ray_tol && value <= -options.ray_tol
            } else {
                false
            };
            Phase1Outcome::Infeasible { certified }
        }
        IpmKind::Diverging => Phase1Outcome::Trouble, // t >= -1: cannot diverge
        IpmKind::MaxIter | IpmKind::Stall => {
            // Weakly infeasible problems end here: the slack creeps towards
            // zero from above while the iterates blow up, until the linear
            // algebra gives out. If the slack is pinned just above zero the
            // verdict is infeasible-without-a-ray; anything else is a failure.
            let t_star = out.y[t_idx];
            if t_star < -fl::<T>(PHASE1_EXIT_MARGIN) {
                Phase1Outcome::Feasible(out.y[..n_live].to_vec())
            } else if t_star <= fl::<T>(PHASE1_STALL_BAND) {
                Phase1Outcome::Infeasible { certified: false }
            } else {
                Phase1Outcome::Trouble
            }
        }
    }
}

enum IpmKind {
    Converged,
    EarlyExit,
    MaxIter,
    Stall,
    Diverging,
}

struct IpmOut<T> {
    kind: IpmKind,
    y: Vec<T>,
    x: Vec<Mat<T>>,
    gap: T,
}

/// Core predictor-corrector loop. `early_exit`: stop as soon as y[idx] < thr.
fn ipm<T: Scalar>(
    c: &[T],
    blocks: &[WorkBlock<T>],
    y0: Vec<T>,
    options: &SdpOptions<T>,
    early_exit: Option<(usize, T)>,
    iterations: &mut usize,
) -> IpmOut<T> {
    let m = c.len();
    let nb = blocks.len();
    let n_total: usize = blocks.iter().map(|b| b.f0.rows()).sum();
    let n_t = fl::<T>(n_total as f64);
    let tau = fl::<T>(STEP_FRACTION);
    let c_scale = T::one() + norm_inf(c);

    let mut y = y0;
    let mut s: Vec<Mat<T>> = blocks.iter().map(|b| b.eval(&y)).collect();
    let mut x: Vec<Mat<T>> = blocks.iter().map(|b| Mat::identity(b.f0.rows())).collect();

    let mut best = T::infinity();
    let mut since_best = 0usize;
    let mut gap = T::nan();

    for _ in 0..options.max_iter {
        *iterations += 1;

        // Convergence is decided before any factorization: at machine
        // precision the converged iterate often sits on the cone boundary,
        // where the Cholesky used for the next step no longer succeeds.
        gap = s.iter().zip(&x).map(|(sb, xb)| sb.inner(xb)).sum();
        let obj_p = dot(c, &y);
        let obj_d: T = -blocks.iter().zip(&x).map(|(b, xb)| b.f0.inner(xb)).sum::<T>();
        let relgap = gap / (T::one() + obj_p.abs() + obj_d.abs());
        let d: Vec<T> = (0..m)
            .map(|i| {
                c[i] - blocks.iter().zip(&x).map(|(b, xb)| b.fs[i].inner(xb)).sum::<T>()
            })
            .collect();
        let pinf = norm_inf(&d) / c_scale;

        if relgap <= options.gap_tol && pinf <= options.feas_tol {
            return IpmOut { kind: IpmKind::Converged, y, x, gap };
        }
        if obj_p < -fl::<T>(DIVERGE_LIMIT) * c_scale {
            return IpmOut { kind: IpmKind::Diverging, y, x, gap };
        }
        let score = relgap.max(pinf);
        if score < best * fl(0.9) {
            best = score;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best > STALL_LIMIT {
                return IpmOut { kind: IpmKind::Stall, y, x, gap };
            }
        }

        let mut chols = Vec::with_capacity(nb);
        for sb in &s {
            match sb.cholesky() {
                Some(l) => chols.push(l),
                None => return IpmOut { kind: IpmKind::Stall, y, x, gap },
            }
        }
        let mut chols_x = Vec::with_capacity(nb);
        for xb in &x {
            match xb.cholesky() {
                Some(l) => chols_x.push(l),
                None => return IpmOut { kind: IpmKind::Stall, y, x, gap },
            }
        }
        let sinv: Vec<Mat<T>> = chols.iter().map(|l| l.chol_inverse()).collect();

        // Schur complement M_ij = sum_b <F_i, X F_j Sinv>
        let mut v = vec![Vec::with_capacity(nb); m];
        for (b, (xb, sb_inv)) in blocks.iter().zip(x.iter().zip(&sinv)).map(|(b, p)| (b, p)) {
            for (j, vj) in v.iter_mut().enumerate() {
                vj.push(xb.matmul(&b.fs[j]).matmul(sb_inv));
            }
        }
        let mut mm = Mat::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let mut acc = T::zero();
                for (bi, b) in blocks.iter().enumerate() {
                    acc += b.fs[i].inner(&v[j][bi]);
                }
                mm[(i, j)] = acc;
                mm[(j, i)] = acc;
            }
        }
        let lm = match chol_with_jitter(&mut mm) {
            Some(l) => l,
            None => return IpmOut { kind: IpmKind::Stall, y, x, gap },
        };

        let a_vec: Vec<T> = (0..m)
            .map(|i| blocks.iter().zip(&sinv).map(|(b, si)| b.fs[i].inner(si)).sum())
            .collect();

        // predictor: sigma = 0
        let rhs_aff: Vec<T> = c.iter().map(|&ci| -ci).collect();
        let dy_aff = lm.chol_solve(&rhs_aff);
        let ds_aff: Vec<Mat<T>> = blocks
            .iter()
            .map(|b| {
                let mut g = Mat::zeros(b.f0.rows(), b.f0.rows());
                for (dyj, fj) in dy_aff.iter().zip(&b.fs) {
                    g.axpy(*dyj, fj);
                }
                g
            })
            .collect();
        let dx_aff: Vec<Mat<T>> = (0..nb)
            .map(|b| {
                let w = x[b].matmul(&ds_aff[b]).matmul(&sinv[b]);
                x[b].scale(-T::one()).sub(&w.add(&w.transpose()).scale(fl(0.5)))
            })
            .collect();

        let ap_aff = step_to_boundary(&x, &dx_aff, &chols_x);
        let ad_aff = step_to_boundary(&s, &ds_aff, &chols);
        let ap_aff = (tau * ap_aff).min(T::one());
        let ad_aff = (tau * ad_aff).min(T::one());
        let mut gap_aff = T::zero();
        for b in 0..nb {
            let xa = {
                let mut t = x[b].clone();
                t.axpy(ap_aff, &dx_aff[b]);
                t
            };
            let sa = {
                let mut t = s[b].clone();
                t.axpy(ad_aff, &ds_aff[b]);
                t
            };
            gap_aff += xa.inner(&sa);
        }
        let sigma = {
            let ratio = (gap_aff / gap).max(T::zero()).min(T::one());
            ratio * ratio * ratio
        };
        let mu = gap / n_t;

        // corrector
        let rhs: Vec<T> = (0..m)
            .map(|i| {
                let h: T = (0..nb)
                    .map(|b| {
                        let w = dx_aff[b].matmul(&ds_aff[b]).matmul(&sinv[b]);
                        blocks[b].fs[i].inner(&w)
                    })
                    .sum();
                sigma * mu * a_vec[i] - c[i] - h
            })
            .collect();
        let dy = lm.chol_solve(&rhs);
        let ds: Vec<Mat<T>> = blocks
            .iter()
            .map(|b| {
                let mut g = Mat::zeros(b.f0.rows(), b.f0.rows());
                for (dyj, fj) in dy.iter().zip(&b.fs) {
                    g.axpy(*dyj, fj);
                }
                g
            })
            .collect();
        let dx: Vec<Mat<T>> = (0..nb)
            .map(|b| {
                let w1 = x[b].matmul(&ds[b]).matmul(&sinv[b]);
                let w2 = dx_aff[b].matmul(&ds_aff[b]).matmul(&sinv[b]);
                let mut out = sinv[b].scale(sigma * mu);
                out.axpy(-T::one(), &x[b]);
                out.axpy(-fl::<T>(0.5), &w1.add(&w1.transpose()));
                out.axpy(-fl::<T>(0.5), &w2.add(&w2.transpose()));
                out
            })
            .collect();

        let ap = (tau * step_to_boundary(&x, &dx, &chols_x)).min(T::one());
        let ad = (tau * step_to_boundary(&s, &ds, &chols)).min(T::one());

        for (yi, dyi) in y.iter_mut().zip(&dy) {
            *yi += ad * *dyi;
        }
        for (b, block) in blocks.iter().enumerate() {
            s[b] = block.eval(&y);
            x[b].axpy(ap, &dx[b]);
            x[b] = x[b].symmetrize();
        }

        if let Some((idx, thr)) = early_exit {
            if y[idx] < thr {
                return IpmOut { kind: IpmKind::EarlyExit, y, x, gap };
            }
        }
    }
    IpmOut { kind: IpmKind::MaxIter, y, x, gap }
}

/// Largest alpha with P + alpha*dP still PSD, given chol(P); infinite if dP
/// pushes inward everywhere.
fn step_to_boundary<T: Scalar>(p: &[Mat<T>], dp: &[Mat<T>], chols: &[Mat<T>]) -> T {
    let mut alpha = T::infinity();
    for ((_, l), d) in p.iter().zip(chols).zip(dp).map(|((p, l), d)| ((p, l), d)) {
        let n = l.rows();
        // W = L^-1 dP L^-T
        let mut z = Mat::zeros(n, n);
        for j in 0..n {
            let col: Vec<T> = (0..n).map(|i| d[(i, j)]).collect();
            let sol = l.solve_lower(&col);
            for i in 0..n {
                z[(i, j)] = sol[i];
            }
        }
        let mut w = Mat::zeros(n, n);
        for j in 0..n {
            let col: Vec<T> = (0..n).map(|i| z[(j, i)]).collect();
            let sol = l.solve_lower(&col);
            for i in 0..n {
                w[(i, j)] = sol[i];
            }
        }
        let lam_min = w.symmetrize().min_eigval();
        if lam_min < T::zero() {
            alpha = alpha.min(-T::one() / lam_min);
        }
    }
    alpha
}

/// Cholesky with escalating diagonal regularization; duplicated measurement
/// settings make the Schur complement legitimately singular.
fn chol_with_jitter<T: Scalar>(mm: &mut Mat<T>) -> Option<Mat<T>> {
    let base = mm.max_abs().max(T::min_positive_value());
    let n = mm.rows();
    let mut jitter = T::zero();
    for attempt in 0..8 {
        let mut trial = mm.clone();
        if jitter > T::zero() {
            for i in 0..n {
                trial[(i, i)] += jitter;
            }
        }
        if let Some(l) = trial.cholesky() {
            return Some(l);
        }
        jitter = if attempt == 0 { base * fl(1e-14) } else { jitter * fl(100.0) };
    }
    None
}
