use super::families::*;
use super::{search, Branch, Family, PeriodicSolution};
use crate::error::Result;
use crate::params::Params;
use crate::polyroot::PolyFamily;

fn from_roots<F>(
    family: &dyn PolyFamily,
    params: &Params,
    q: usize,
    tag: Family,
    seeds: F,
) -> Result<Vec<PeriodicSolution>>
where
    F: Fn(f64) -> Vec<(f64, f64)>,
{
    let roots = family.roots(params)?;
    let mut out = Vec::new();
    for &x in &roots.roots {
        for (a, b) in seeds(x) {
            out.push(PeriodicSolution::from_seed(a, b, q, tag, params)?);
        }
    }
    Ok(out)
}

/// The constant word `(1)`.
pub fn solve_q1(params: &Params) -> Result<Vec<PeriodicSolution>> {
    Ok(vec![PeriodicSolution::from_seed(
        1.0,
        1.0,
        1,
        Family::Constant,
        params,
    )?])
}

/// Mirror 2-cycles `(1, x)`.
pub fn solve_q2_mirror(params: &Params) -> Result<Vec<PeriodicSolution>> {
    from_roots(&Q2Mirror, params, 2, Family::Q2Mirror, |x| vec![(x, x)])
}

/// Mirror 3-cycles `(1, x, x)`.
pub fn solve_q3_mirror(params: &Params) -> Result<Vec<PeriodicSolution>> {
    from_roots(&Q3Mirror, params, 3, Family::Q3Mirror, |x| vec![(x, x)])
}

/// Mirror 4-cycles `(1, x, y, x)` with `y != 1`.
pub fn solve_q4_mirror(params: &Params) -> Result<Vec<PeriodicSolution>> {
    from_roots(&Q4Mirror, params, 4, Family::Q4Mirror, |x| vec![(x, x)])
}

/// Mirror 5-cycles `(1, x, y, y, x)`; the root `x = 1` is returned as the
/// constant word.
pub fn solve_q5_mirror(params: &Params) -> Result<Vec<PeriodicSolution>> {
    from_roots(&Q5Mirror, params, 5, Family::Q5Mirror, |x| vec![(x, x)])
}

/// Non-mirror 3-cycles.
///
/// With a neighbour of the anchor equal to 1 the words are `(1, 1, x)` and
/// `(1, x, 1)`. Otherwise elimination forces `u_-1 + u_1 = tau` for
/// `k <= 4`, which is inadmissible; for larger `k` that branch is probed by
/// the numeric search.
pub fn solve_q3_nonmirror(params: &Params) -> Result<Vec<PeriodicSolution>> {
    let mut out = from_roots(&Q3NonMirrorUnit, params, 3, Family::Q3NonMirror, |x| {
        vec![(x, 1.0), (1.0, x)]
    })?;
    if params.k() >= 5 {
        out.extend(q3_generic_numeric(params));
    }
    Ok(out)
}

/// Solutions of the q = 3 system with `u_-1 != u_1` and neither equal to 1,
/// from the numeric search.
pub fn q3_generic_numeric(params: &Params) -> Vec<PeriodicSolution> {
    let unit = |v: f64| (v - 1.0).abs() <= 1e-7;
    search::search_periodic_numeric(params, 3, 160)
        .into_iter()
        .filter(|s| s.q() == 3 && s.branch() == Branch::NonMirror && !unit(s.u_m1()) && !unit(s.u_1()))
        .collect()
}

/// Non-mirror 4-cycles `(1, y, y, 1)` and `(1, 1, y, y)`; for `k = 2` also
/// the closed-form branch `u_-1 + u_1 = (tau +- sqrt(tau (tau - 4))) / 2`.
pub fn solve_q4_nonmirror(params: &Params) -> Result<Vec<PeriodicSolution>> {
    let mut out = from_roots(&Q4NonMirrorUnit, params, 4, Family::Q4NonMirror, |y| {
        vec![(1.0, y), (y, 1.0)]
    })?;
    if params.k() == 2 {
        let tau = params.tau();
        let disc = tau * (tau - 4.0);
        if disc >= 0.0 {
            for sum in [0.5 * (tau + disc.sqrt()), 0.5 * (tau - disc.sqrt())] {
                let other = sum - 1.0;
                if other <= 0.0 {
                    continue;
                }
                for (a, b) in [(other, 1.0), (1.0, other)] {
                    let (f, _) = super::closure_jacobian(a, b, 4, params);
                    if f[0].abs().max(f[1].abs()) < 1e-8 * tau {
                        out.push(PeriodicSolution::from_seed(
                            a,
                            b,
                            4,
                            Family::Q4NonMirrorExplicit,
                            params,
                        )?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Alternating-ones 4-cycles `(1, u_1, 1, u_-1)`.
pub fn solve_q4_type_up(params: &Params) -> Result<Vec<PeriodicSolution>> {
    let p = *params;
    from_roots(&Q4TypeUp, params, 4, Family::Q4TypeUp, move |x| {
        vec![(x, eta(x, &p))]
    })
}

/// Non-mirror 5-cycles `(1, y, y, 1, x)` with `y = eta(x)`.
pub fn solve_q5_nonmirror(params: &Params) -> Result<Vec<PeriodicSolution>> {
    let p = *params;
    from_roots(&Q5NonMirror, params, 5, Family::Q5NonMirror, move |x| {
        vec![(x, eta(x, &p))]
    })
}
