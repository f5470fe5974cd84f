//! Periodic solutions of the boundary-law recurrence for small periods.
//!
//! Each family of periodic words is reduced to a single univariate
//! polynomial whose admissible positive roots are isolated with
//! [`crate::polyroot`]. The resulting seeds `(u_-1, u_1)` are then refined in
//! double-double arithmetic against the closure conditions
//! `u_{q-1} = u_-1`, `u_q = 1`, so the stored words close to high accuracy
//! even on strongly unstable cycles.

mod families;
mod search;
mod solvers;

use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::recurrence::{self, Trajectory};

pub use families::{
    eta, g_poly, zeta_k2, Q2Mirror, Q3Mirror, Q3NonMirrorUnit, Q4Mirror, Q4NonMirrorUnit, Q4TypeUp, Q5Mirror,
    Q5NonMirror,
};
pub use search::{search_periodic_numeric, search_periodic_numeric_with, SEARCH_Q_MAX};
pub use solvers::*;

/// Two entries closer than this (relative) are identified when computing
/// the minimal period of a word.
pub const COLLAPSE_TOL: f64 = 1e-7;

/// Which side of the `u_-1 = u_1` dichotomy a solution lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Mirror,
    NonMirror,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Mirror => "mirror",
            Branch::NonMirror => "nonmirror",
        }
    }
}

/// The reduction a solution came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Constant,
    Q2Mirror,
    Q3Mirror,
    Q4Mirror,
    Q5Mirror,
    Q3NonMirror,
    Q4NonMirror,
    /// k = 2 closed-form branch of the q = 4 non-mirror system.
    Q4NonMirrorExplicit,
    Q4TypeUp,
    Q5NonMirror,
    Numeric,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Constant => "q1",
            Family::Q2Mirror => "q2_mirror",
            Family::Q3Mirror => "q3_mirror",
            Family::Q4Mirror => "q4_mirror",
            Family::Q5Mirror => "q5_mirror",
            Family::Q3NonMirror => "q3_nonmirror",
            Family::Q4NonMirror => "q4_nonmirror",
            Family::Q4NonMirrorExplicit => "q4_nonmirror_explicit",
            Family::Q4TypeUp => "q4_up",
            Family::Q5NonMirror => "q5_nonmirror",
            Family::Numeric => "numeric",
        }
    }
}

/// A periodic positive solution `(u_0 = 1, u_1, ..., u_{q-1})` of the
/// recurrence, with `u_-1 = u_{q-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSolution {
    word: Vec<f64>,
    q: usize,
    branch: Branch,
    family: Family,
    system_residual: f64,
    params: Params,
    experimental: bool,
    seed: [TwoFloat; 2],
}

impl PeriodicSolution {
    /// Builds a solution from approximate initial values `(u_-1, u_1)` of a
    /// cycle of period dividing `q`.
    ///
    /// The seed is polished by Newton's method on the closure in
    /// double-double arithmetic; the reported period is the minimal one.
    pub fn from_seed(u_m1: f64, u_1: f64, q: usize, family: Family, params: &Params) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        let seed = refine_seed(TwoFloat::from(u_m1), TwoFloat::from(u_1), q, params);
        let traj = recurrence::generate_extended(seed[0], seed[1], q, params)?;
        if traj.is_truncated() {
            return Err(Error::InvalidArgument(format!(
                "seed ({u_m1}, {u_1}) does not give a positive orbit"
            )));
        }
        let full = &traj.values()[1..=q];
        let p = minimal_period(full);
        let word = full[..p].to_vec();
        let m1 = f64::from(seed[0]);
        let one = f64::from(seed[1]);
        let branch = if (m1 - one).abs() <= 1e-9 * m1.max(one) {
            Branch::Mirror
        } else {
            Branch::NonMirror
        };
        let system_residual = va_residual(&word, params);
        Ok(PeriodicSolution {
            word,
            q: p,
            branch,
            family,
            system_residual,
            params: *params,
            experimental: family == Family::Numeric,
            seed,
        })
    }

    pub fn word(&self) -> &[f64] {
        &self.word
    }

    /// Minimal period.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Largest pointwise violation of the cyclic recurrence.
    pub fn system_residual(&self) -> f64 {
        self.system_residual
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Found by the generic numeric search rather than a reduction.
    pub fn experimental(&self) -> bool {
        self.experimental
    }

    pub fn u_m1(&self) -> f64 {
        f64::from(self.seed[0])
    }

    pub fn u_1(&self) -> f64 {
        f64::from(self.seed[1])
    }

    pub fn is_trivial(&self) -> bool {
        self.q == 1
    }

    /// Regenerates `periods` periods from the stored seed and returns
    /// `max |u_{i+q} - u_i|` over the orbit.
    pub fn closure_deviation(&self, periods: usize) -> f64 {
        match recurrence::generate_extended(self.seed[0], self.seed[1], periods * self.q, &self.params) {
            Ok(t) => orbit_deviation(&t, self.q),
            Err(_) => f64::INFINITY,
        }
    }

    /// Same as [`closure_deviation`](Self::closure_deviation), but iterating
    /// in plain double precision from the rounded seed.
    pub fn closure_deviation_f64(&self, periods: usize) -> f64 {
        match recurrence::generate(self.u_m1(), self.u_1(), periods * self.q, &self.params) {
            Ok(t) => orbit_deviation(&t, self.q),
            Err(_) => f64::INFINITY,
        }
    }
}

fn orbit_deviation(t: &Trajectory, q: usize) -> f64 {
    if t.is_truncated() {
        return f64::INFINITY;
    }
    let v = t.values();
    (0..v.len() - q)
        .map(|i| (v[i + q] - v[i]).abs())
        .fold(0.0, f64::max)
}

/// Smallest `p` dividing `word.len()` such that the word is `p`-periodic up
/// to [`COLLAPSE_TOL`].
pub fn minimal_period(word: &[f64]) -> usize {
    let q = word.len();
    (1..=q)
        .filter(|&p| q.is_multiple_of(p))
        .find(|&p| {
            (p..q).all(|i| {
                let (a, b) = (word[i], word[i % p]);
                (a - b).abs() <= COLLAPSE_TOL * a.abs().max(b.abs()).max(1.0)
            })
        })
        .unwrap_or(q)
}

/// `max_i |u_i^k (u_-1 + u_1 - tau) - (u_{i-1} + u_{i+1} - tau u_i)|` over
/// one period, indices cyclic.
pub fn va_residual(word: &[f64], params: &Params) -> f64 {
    let q = word.len();
    if q == 0 {
        return 0.0;
    }
    let tau = params.tau();
    let s = word[q - 1] + word[1 % q] - tau;
    (0..q)
        .map(|i| {
            let prev = word[(i + q - 1) % q];
            let next = word[(i + 1) % q];
            let lhs = word[i].powi(params.ki()) * s;
            (lhs - (prev + next - tau * word[i])).abs()
        })
        .fold(0.0, f64::max)
}

/// Closure map `(u_{q-1} - u_-1, u_q - 1)` in double-double.
fn closure_dd(a: TwoFloat, b: TwoFloat, q: usize, params: &Params) -> [TwoFloat; 2] {
    let s = a + b - params.tau();
    let mut prev = a;
    let mut cur = TwoFloat::from(1.0);
    for _ in 0..q {
        let next = s * cur.powi(params.ki()) + cur * params.tau() - prev;
        prev = cur;
        cur = next;
    }
    [prev - a, cur - 1.0]
}

/// Closure map and its Jacobian in `(u_-1, u_1)`, by forward-mode
/// differentiation along the orbit.
pub(crate) fn closure_jacobian(a: f64, b: f64, q: usize, params: &Params) -> ([f64; 2], [[f64; 2]; 2]) {
    let tau = params.tau();
    let k = params.ki();
    let s = a + b - tau;
    let (mut prev, mut dprev) = (a, [1.0, 0.0]);
    let (mut cur, mut dcur) = (1.0f64, [0.0, 0.0]);
    for _ in 0..q {
        let pk1 = cur.powi(k - 1);
        let pk = pk1 * cur;
        let slope = s * k as f64 * pk1 + tau;
        let next = s * pk + tau * cur - prev;
        let dnext = [pk + slope * dcur[0] - dprev[0], pk + slope * dcur[1] - dprev[1]];
        prev = cur;
        dprev = dcur;
        cur = next;
        dcur = dnext;
    }
    (
        [prev - a, cur - 1.0],
        [[dprev[0] - 1.0, dprev[1]], [dcur[0], dcur[1]]],
    )
}

fn norm_dd(f: &[TwoFloat; 2]) -> f64 {
    f64::from(f[0]).abs().max(f64::from(f[1]).abs())
}

pub(crate) fn solve2(j: [[f64; 2]; 2], f: [f64; 2]) -> Option<[f64; 2]> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some([
        (f[0] * j[1][1] - j[0][1] * f[1]) / det,
        (j[0][0] * f[1] - j[1][0] * f[0]) / det,
    ])
}

/// Damped Newton on the closure with residuals in double-double and the
/// Jacobian in double precision.
fn refine_seed(a0: TwoFloat, b0: TwoFloat, q: usize, params: &Params) -> [TwoFloat; 2] {
    let (mut a, mut b) = (a0, b0);
    let mut f = closure_dd(a, b, q, params);
    let mut norm = norm_dd(&f);
    for _ in 0..60 {
        if norm == 0.0 {
            break;
        }
        let (_, jac) = closure_jacobian(f64::from(a), f64::from(b), q, params);
        let Some(step) = solve2(jac, [f64::from(f[0]), f64::from(f[1])]) else {
            break;
        };
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let na = a - step[0] * lambda;
            let nb = b - step[1] * lambda;
            let nf = closure_dd(na, nb, q, params);
            let nn = norm_dd(&nf);
            if nn < norm && f64::from(na) > 0.0 && f64::from(nb) > 0.0 {
                a = na;
                b = nb;
                f = nf;
                norm = nn;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    [a, b]
}

/// Which reductions [`solve`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryFilter {
    Mirror,
    NonMirror,
    /// The q = 4 alternating-ones family `(1, u_1, 1, u_-1)`.
    TypeUp,
    All,
}

/// Runs every reduction for period `q` (1 to 5) admitted by `filter`.
///
/// The result contains every seed the reductions produce, including
/// lower-period words, sorted by `(q, word)`.
pub fn solve(params: &Params, q: usize, filter: SymmetryFilter) -> Result<Vec<PeriodicSolution>> {
    use SymmetryFilter as F;
    let mirror = matches!(filter, F::Mirror | F::All);
    let nonmirror = matches!(filter, F::NonMirror | F::All);
    let up = matches!(filter, F::TypeUp | F::All);
    let mut out = Vec::new();
    match q {
        1 => out.extend(solve_q1(params)?),
        2 => {
            if mirror {
                out.extend(solve_q2_mirror(params)?);
            }
        }
        3 => {
            if mirror {
                out.extend(solve_q3_mirror(params)?);
            }
            if nonmirror {
                out.extend(solve_q3_nonmirror(params)?);
            }
        }
        4 => {
            if mirror {
                out.extend(solve_q4_mirror(params)?);
            }
            if nonmirror {
                out.extend(solve_q4_nonmirror(params)?);
            }
            if up {
                out.extend(solve_q4_type_up(params)?);
            }
        }
        5 => {
            if mirror {
                out.extend(solve_q5_mirror(params)?);
            }
            if nonmirror {
                out.extend(solve_q5_nonmirror(params)?);
            }
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "closed reductions cover q in 1..=5, got {q}"
            )))
        }
    }
    sort_solutions(&mut out);
    Ok(out)
}

/// Orders solutions by minimal period, then word, then family.
pub fn sort_solutions(sols: &mut [PeriodicSolution]) {
    sols.sort_by(|a, b| {
        a.q.cmp(&b.q)
            .then_with(|| cmp_words(&a.word, &b.word))
            .then_with(|| a.family.cmp(&b.family))
    });
}

pub(crate) fn cmp_words(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Drops repeated seeds `(u_-1, u_1)`, keeping the first occurrence.
pub fn distinct_tuples(sols: &[PeriodicSolution]) -> Vec<PeriodicSolution> {
    let mut out: Vec<PeriodicSolution> = Vec::new();
    for s in sols {
        let dup = out.iter().any(|o| {
            o.q == s.q && close(o.u_m1(), s.u_m1(), COLLAPSE_TOL) && close(o.u_1(), s.u_1(), COLLAPSE_TOL)
        });
        if !dup {
            out.push(s.clone());
        }
    }
    out
}

pub(crate) fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
