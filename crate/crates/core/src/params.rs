//! Model parameters of the SOS model on the Cayley tree of order `k`.
//!
//! The temperature enters only through `tau = 1/theta + theta`, where
//! `theta = exp(-J beta)` lies in `(0, 1)` for ferromagnetic coupling.

use crate::error::{Error, Result};

/// Tree order and temperature parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    k: u32,
    tau: f64,
    theta: f64,
}

impl Params {
    /// Builds parameters from `tau`, choosing the root `theta < 1` of
    /// `theta + 1/theta = tau`.
    pub fn new(k: u32, tau: f64) -> Result<Self> {
        theta_from_tau(tau, k)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `k` as an `i32` exponent.
    pub(crate) fn ki(&self) -> i32 {
        self.k as i32
    }

    /// SOS transfer weight `theta^|zeta|` of a gradient increment.
    pub fn q_weight(&self, zeta: i64) -> f64 {
        q_weight(self.theta, zeta)
    }

    /// Sum of all transfer weights, `(1 + theta) / (1 - theta)`.
    pub fn total_weight(&self) -> f64 {
        (1.0 + self.theta) / (1.0 - self.theta)
    }

    pub fn thresholds(&self) -> Thresholds {
        tau_thresholds(self.k)
    }

    /// Same order, different temperature.
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Params::new(self.k, tau)
    }
}

/// Solves `theta + 1/theta = tau` for the root in `(0, 1)`.
pub fn theta_from_tau(tau: f64, k: u32) -> Result<Params> {
    if k < 2 {
        return Err(Error::InvalidOrder(k));
    }
    if !tau.is_finite() || tau <= 2.0 {
        return Err(Error::InvalidTemperature(tau));
    }
    // (tau - sqrt(tau^2 - 4)) / 2 cancels badly for large tau; use the
    // reciprocal of the large root instead.
    let disc = ((tau - 2.0) * (tau + 2.0)).sqrt();
    let theta = 2.0 / (tau + disc);
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidTemperature(tau));
    }
    Ok(Params { k, tau, theta })
}

pub fn q_weight(theta: f64, zeta: i64) -> f64 {
    theta.powi(zeta.unsigned_abs().min(i32::MAX as u64) as i32)
}

/// Critical thresholds `tau_0 = (2k+1)/(k-1)` and `tau_1 = 2k/(k-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub tau0: f64,
    pub tau1: f64,
}

pub fn tau_thresholds(k: u32) -> Thresholds {
    let k = k as f64;
    Thresholds {
        tau0: (2.0 * k + 1.0) / (k - 1.0),
        tau1: 2.0 * k / (k - 1.0),
    }
}

/// Upper bound on a positive orbit of the recurrence.
///
/// `psi(x) = (u_-1 + u_1 - tau) x^k + tau x` vanishes at `x0`, peaks at
/// `x_star`, and every later term of a positive orbit stays below `upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityBound {
    pub x0: f64,
    pub x_star: f64,
    pub upper: f64,
}

pub fn positivity_bound(params: &Params, u_m1: f64, u_1: f64) -> Result<PositivityBound> {
    let tau = params.tau();
    let sum = u_m1 + u_1;
    if !(u_m1 > 0.0 && u_1 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "initial values must be positive, got ({u_m1}, {u_1})"
        )));
    }
    if sum >= tau {
        return Err(Error::ConstraintViolation { sum, tau });
    }
    let km1 = params.k() as f64 - 1.0;
    let k = params.k() as f64;
    let x0 = (tau / (tau - sum)).powf(1.0 / km1);
    let x_star = x0 * k.powf(-1.0 / km1);
    let cap = km1 * tau / k.powf(k / km1);
    Ok(PositivityBound {
        x0,
        x_star,
        upper: x0 * cap.min(1.0),
    })
}
