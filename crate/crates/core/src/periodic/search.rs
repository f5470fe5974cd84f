//! Generic numeric search for periodic words, independent of the
//! per-shape reductions.

use std::collections::BTreeSet;

use super::{closure_jacobian, distinct_tuples, solve2, sort_solutions, Family, PeriodicSolution};
use crate::exec::{self, Execution};
use crate::params::Params;
use crate::recurrence::step_forward;

/// Largest period the numeric search accepts.
pub const SEARCH_Q_MAX: usize = 12;

const ACCEPT_RESIDUAL: f64 = 1e-9;

fn stays_positive(a: f64, b: f64, q: usize, params: &Params) -> bool {
    let (mut prev, mut cur) = (1.0, b);
    for _ in 1..q {
        let next = step_forward(prev, cur, a, b, params);
        if !next.is_finite() || next <= 0.0 {
            return false;
        }
        prev = cur;
        cur = next;
    }
    true
}

fn newton(mut a: f64, mut b: f64, q: usize, params: &Params) -> Option<(f64, f64)> {
    let tau = params.tau();
    let (mut f, mut jac) = closure_jacobian(a, b, q, params);
    let mut norm = f[0].abs().max(f[1].abs());
    for _ in 0..60 {
        if !norm.is_finite() {
            return None;
        }
        if norm < 1e-13 {
            break;
        }
        let step = solve2(jac, f)?;
        let mut lambda = 1.0;
        let mut moved = false;
        for _ in 0..25 {
            let na = a - lambda * step[0];
            let nb = b - lambda * step[1];
            if na > 0.0 && nb > 0.0 && na + nb < tau {
                let (nf, nj) = closure_jacobian(na, nb, q, params);
                let nn = nf[0].abs().max(nf[1].abs());
                if nn < norm {
                    a = na;
                    b = nb;
                    f = nf;
                    jac = nj;
                    norm = nn;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (norm < 1e-8 * tau).then_some((a, b))
}

/// Scans a `grid x grid` lattice of initial values `(u_-1, u_1)` in
/// `(0, tau)^2` with `u_-1 + u_1 < tau`, and polishes every start whose
/// orbit stays positive by damped Newton on the `q`-cycle closure, for each
/// `q <= q_max`.
///
/// Returns one solution per distinct seed, labelled with its minimal
/// period and flagged experimental. The result is not exhaustive.
pub fn search_periodic_numeric(params: &Params, q_max: usize, grid: usize) -> Vec<PeriodicSolution> {
    search_periodic_numeric_with(params, q_max, grid, Execution::default())
}

pub fn search_periodic_numeric_with(
    params: &Params,
    q_max: usize,
    grid: usize,
    exec: Execution,
) -> Vec<PeriodicSolution> {
    let q_max = q_max.min(SEARCH_Q_MAX);
    if q_max == 0 || grid == 0 {
        return Vec::new();
    }
    let tau = params.tau();
    let h = tau / grid as f64;
    let per_row = exec::map_range(exec, grid, |i| {
        let a = (i as f64 + 0.5) * h;
        let mut found = Vec::new();
        for j in 0..grid {
            let b = (j as f64 + 0.5) * h;
            if a + b >= tau {
                break;
            }
            for q in 1..=q_max {
                if !stays_positive(a, b, q, params) {
                    break;
                }
                if let Some((x, y)) = newton(a, b, q, params) {
                    found.push((q, x, y));
                }
            }
        }
        found
    });
    // one representative per quantised seed, in a deterministic order
    let mut keys = BTreeSet::new();
    let mut seeds = Vec::new();
    for (q, x, y) in per_row.into_iter().flatten() {
        let key = (q, (x * 1e6).round() as i64, (y * 1e6).round() as i64);
        if keys.insert(key) {
            seeds.push((key, q, x, y));
        }
    }
    seeds.sort_by_key(|s| s.0);
    let sols = exec::map(exec, &seeds, |&(_, q, x, y)| {
        PeriodicSolution::from_seed(x, y, q, Family::Numeric, params).ok()
    });
    let mut sols: Vec<PeriodicSolution> = sols
        .into_iter()
        .flatten()
        .filter(|s| s.system_residual() < ACCEPT_RESIDUAL)
        .collect();
    sort_solutions(&mut sols);
    distinct_tuples(&sols)
}
