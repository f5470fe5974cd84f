//! Forward and backward iteration of the boundary-law recurrence
//! `u_{i+1} = (u_-1 + u_1 - tau) u_i^k + tau u_i - u_{i-1}` with `u_0 = 1`.

use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::params::Params;

/// Default tolerance for [`detect_period`].
pub const PERIOD_TOL: f64 = 1e-8;

#[inline]
fn drive(u_cur: f64, u_m1: f64, u_1: f64, params: &Params) -> f64 {
    (u_m1 + u_1 - params.tau()) * u_cur.powi(params.ki()) + params.tau() * u_cur
}

/// One forward step: returns `u_{i+1}` from `(u_{i-1}, u_i)`.
#[inline]
pub fn step_forward(u_prev: f64, u_cur: f64, u_m1: f64, u_1: f64, params: &Params) -> f64 {
    drive(u_cur, u_m1, u_1, params) - u_prev
}

/// One backward step: returns `u_{i-1}` from `(u_{i+1}, u_i)`.
#[inline]
pub fn step_backward(u_next: f64, u_cur: f64, u_m1: f64, u_1: f64, params: &Params) -> f64 {
    drive(u_cur, u_m1, u_1, params) - u_next
}

/// An orbit `(u_-1, u_0 = 1, u_1, u_2, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    values: Vec<f64>,
    params: Params,
    truncated_at: Option<usize>,
}

impl Trajectory {
    /// All retained values; `values()[i + 1]` is `u_i`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Position in `values()` of the first non-positive term, if the
    /// orbit left the positive cone. That term is not retained.
    pub fn truncated_at(&self) -> Option<usize> {
        self.truncated_at
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated_at.is_some()
    }

    /// `u_i` for `i >= -1`.
    pub fn u(&self, i: isize) -> Option<f64> {
        self.values.get((i + 1) as usize).copied()
    }

    pub fn u_m1(&self) -> f64 {
        self.values[0]
    }

    pub fn u_1(&self) -> f64 {
        self.values[2]
    }
}

/// Iterates the recurrence `n` times from `(u_-1, 1, u_1)`.
///
/// Stops at the first non-positive value and records its index.
pub fn generate(u_m1: f64, u_1: f64, n: usize, params: &Params) -> Result<Trajectory> {
    let sum = u_m1 + u_1;
    if sum >= params.tau() {
        return Err(Error::ConstraintViolation {
            sum,
            tau: params.tau(),
        });
    }
    if !(u_m1 > 0.0 && u_1 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "initial values must be positive, got ({u_m1}, {u_1})"
        )));
    }
    let mut values = Vec::with_capacity(n + 3);
    values.extend_from_slice(&[u_m1, 1.0, u_1]);
    let mut truncated_at = None;
    for _ in 0..n {
        let len = values.len();
        let next = step_forward(values[len - 2], values[len - 1], u_m1, u_1, params);
        if !next.is_finite() || next <= 0.0 {
            truncated_at = Some(len);
            break;
        }
        values.push(next);
    }
    Ok(Trajectory {
        values,
        params: *params,
        truncated_at,
    })
}

/// Same as [`generate`], but iterates in double-double arithmetic from
/// double-double initial values. Near unstable cycles the forward map
/// amplifies rounding by orders of magnitude per period; this keeps a few
/// periods of a cycle accurate to double precision.
pub fn generate_extended(u_m1: TwoFloat, u_1: TwoFloat, n: usize, params: &Params) -> Result<Trajectory> {
    let tau = params.tau();
    let s = u_m1 + u_1 - tau;
    if f64::from(s) >= 0.0 {
        return Err(Error::ConstraintViolation {
            sum: f64::from(u_m1 + u_1),
            tau,
        });
    }
    if !(f64::from(u_m1) > 0.0 && f64::from(u_1) > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "initial values must be positive, got ({}, {})",
            f64::from(u_m1),
            f64::from(u_1)
        )));
    }
    let mut prev = TwoFloat::from(1.0);
    let mut cur = u_1;
    let mut values = Vec::with_capacity(n + 3);
    values.extend_from_slice(&[f64::from(u_m1), 1.0, f64::from(u_1)]);
    let mut truncated_at = None;
    for _ in 0..n {
        let next = s * cur.powi(params.ki()) + cur * tau - prev;
        let v = f64::from(next);
        if !v.is_finite() || v <= 0.0 {
            truncated_at = Some(values.len());
            break;
        }
        values.push(v);
        prev = cur;
        cur = next;
    }
    Ok(Trajectory {
        values,
        params: *params,
        truncated_at,
    })
}

/// Smallest period `q <= q_max` with `|u_{i+q} - u_i| < tol` over the
/// first three periods of the trajectory.
///
/// This is a diagnostic: near non-attracting cycles the forward
/// recurrence amplifies rounding, so only a short window is inspected.
pub fn detect_period(traj: &Trajectory, q_max: usize, tol: f64) -> Option<usize> {
    if traj.is_truncated() {
        return None;
    }
    let v = traj.values();
    (1..=q_max).find(|&q| {
        let window = 3 * q + 2;
        if v.len() < window {
            return false;
        }
        (0..window - q).all(|i| (v[i + q] - v[i]).abs() < tol)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p25() -> Params {
        Params::new(2, 5.0).unwrap()
    }

    /// x_1(tau) of the k = 2 mirror 4-cycle, from its closed form.
    fn x1(tau: f64) -> f64 {
        let d = (tau * tau - 4.0 * tau).sqrt();
        (tau + (tau * tau - 4.0 * tau + 4.0 * d).sqrt()) / 4.0
    }

    fn g(x: f64, tau: f64) -> f64 {
        (2.0 * x - tau) * x * x + tau * x - 1.0
    }

    #[test]
    fn forward_examples() {
        let p = p25();
        assert_eq!(step_forward(1.0, 1.0, 1.0, 1.0, &p), 1.0);
        let x = x1(5.0);
        let y = step_forward(1.0, x, x, x, &p);
        assert_relative_eq!(y, g(x, 5.0), epsilon = 1e-12);
        assert!((y - 6.9001).abs() < 1e-3);
        assert_relative_eq!(step_forward(x, y, x, x, &p), x, epsilon = 1e-10);
    }

    #[test]
    fn backward_examples() {
        let p = p25();
        let fwd = step_forward(1.0, 1.0, 1.0, 1.0, &p);
        assert_eq!(step_backward(fwd, 1.0, 1.0, 1.0, &p), 1.0);

        let b = 1.3;
        let next = step_forward(0.7, b, 1.0, 1.0, &p);
        assert_relative_eq!(step_backward(next, b, 1.0, 1.0, &p), 0.7, epsilon = 1e-12);

        let x = x1(5.0);
        let y = g(x, 5.0);
        // backwards through the anchor of the 4-cycle (.., y, x, 1, x, y, ..)
        assert_relative_eq!(step_backward(x, 1.0, x, x, &p), x, epsilon = 1e-12);
        assert_relative_eq!(step_backward(1.0, x, x, x, &p), y, epsilon = 1e-9);
    }

    #[test]
    fn generate_examples() {
        let p = p25();
        let t = generate(1.0, 1.0, 20, &p).unwrap();
        assert_eq!(t.values().len(), 23);
        assert!(t.values().iter().all(|&v| v == 1.0));
        assert!(!t.is_truncated());

        let x = x1(5.0);
        let t = generate(x, x, 12, &p).unwrap();
        assert!(!t.is_truncated());
        let y = g(x, 5.0);
        let expect = [x, 1.0, x, y, x, 1.0, x, y, x, 1.0, x, y, x];
        for (a, b) in t.values().iter().zip(expect) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }

        let t = generate(0.1, 0.1, 50, &p).unwrap();
        // 0.1, 1, 0.1, then (0.2 - 5) 0.01 + 0.5 - 1 < 0
        assert_eq!(t.truncated_at(), Some(3));

        assert!(matches!(
            generate(2.5, 2.5, 5, &p),
            Err(Error::ConstraintViolation { .. })
        ));
    }

    #[test]
    fn period_detection() {
        let p = p25();
        let t = generate(1.0, 1.0, 40, &p).unwrap();
        assert_eq!(detect_period(&t, 12, PERIOD_TOL), Some(1));

        let x = x1(5.0);
        let t = generate(x, x, 14, &p).unwrap();
        assert_eq!(detect_period(&t, 4, PERIOD_TOL), Some(4));

        let t = generate(1.0, 1.1, 40, &p).unwrap();
        assert_eq!(detect_period(&t, 12, PERIOD_TOL), None);
    }

    proptest::proptest! {
        #[test]
        fn forward_backward_inverse(a in 0.01f64..5.0, b in 0.01f64..5.0,
                                    um1 in 0.01f64..2.0, u1 in 0.01f64..2.0,
                                    tau in 4.1f64..10.0, k in 2u32..5) {
            let p = Params::new(k, tau).unwrap();
            let next = step_forward(a, b, um1, u1, &p);
            let back = step_backward(next, b, um1, u1, &p);
            proptest::prop_assert!((back - a).abs() < 1e-10 * (1.0 + next.abs()));
        }

        #[test]
        fn anchor_step_is_vacuous(um1 in 0.01f64..2.0, u1 in 0.01f64..2.0, tau in 4.1f64..10.0, k in 2u32..5) {
            let p = Params::new(k, tau).unwrap();
            let out = step_forward(um1, 1.0, um1, u1, &p);
            proptest::prop_assert!((out - u1).abs() < 1e-12 * tau);
        }
    }
}
