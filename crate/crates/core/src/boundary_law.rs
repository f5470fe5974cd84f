//! Height-periodic boundary laws `z_i = u_i^k` and their closed-form
//! checks against the infinite boundary-law system.

use crate::error::{Error, Result};
use crate::params::Params;
use crate::periodic::PeriodicSolution;

/// A translation-invariant, `q`-height-periodic boundary law with
/// `z_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLaw {
    z: Vec<f64>,
    params: Params,
}

impl BoundaryLaw {
    pub fn new(z: Vec<f64>, params: &Params) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::InvalidArgument("boundary law needs q >= 1 entries".into()));
        }
        if let Some(bad) = z.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "boundary law entries must be positive, got {bad}"
            )));
        }
        if (z[0] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "boundary law must be anchored at z_0 = 1, got {}",
                z[0]
            )));
        }
        Ok(BoundaryLaw { z, params: *params })
    }

    /// `z_i = u_i^k`.
    pub fn from_word(sol: &PeriodicSolution) -> Self {
        Self::from_values(sol.word(), sol.params()).expect("periodic solutions are positive and anchored")
    }

    pub fn from_values(word: &[f64], params: &Params) -> Result<Self> {
        Self::new(word.iter().map(|u| u.powi(params.ki())).collect(), params)
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn q(&self) -> usize {
        self.z.len()
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `z_i` for any integer height.
    pub fn at(&self, i: i64) -> f64 {
        self.z[i.rem_euclid(self.q() as i64) as usize]
    }

    /// The law seen from height `m`: `z'_i = z_{i+m} / z_m`.
    pub fn cyclic_shift(&self, m: i64) -> Self {
        let zm = self.at(m);
        let z = (0..self.q() as i64).map(|i| self.at(i + m) / zm).collect();
        BoundaryLaw {
            z,
            params: self.params,
        }
    }

    /// Same law with `z_i` multiplied by `factor` (`i != 0`), for
    /// sensitivity checks.
    pub fn perturbed(&self, i: usize, factor: f64) -> Self {
        let mut z = self.z.clone();
        z[i % self.q()] *= factor;
        BoundaryLaw {
            z,
            params: self.params,
        }
    }
}

/// `S[r] = sum over integers zeta = r (mod q) of theta^|zeta|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSums {
    pub s: Vec<f64>,
}

impl ClassSums {
    pub fn q(&self) -> usize {
        self.s.len()
    }

    pub fn total(&self) -> f64 {
        self.s.iter().sum()
    }
}

pub fn class_sums(params: &Params, q: usize) -> ClassSums {
    let theta = params.theta();
    let tq = theta.powi(q as i32);
    let denom = 1.0 - tq;
    let mut s = Vec::with_capacity(q);
    s.push(1.0 + 2.0 * tq / denom);
    for r in 1..q {
        s.push((theta.powi(r as i32) + theta.powi((q - r) as i32)) / denom);
    }
    ClassSums { s }
}

/// Class sums restricted to `|zeta| <= cutoff`.
pub fn truncated_class_sums(params: &Params, q: usize, cutoff: u32) -> ClassSums {
    let mut s = vec![0.0; q];
    for zeta in -(cutoff as i64)..=cutoff as i64 {
        s[zeta.rem_euclid(q as i64) as usize] += params.q_weight(zeta);
    }
    ClassSums { s }
}

/// `N_i = sum_j theta^|i-j| z_j`, for `i = 0..q`.
pub fn neighbour_sums(law: &BoundaryLaw) -> Vec<f64> {
    let q = law.q();
    let cs = class_sums(law.params(), q);
    (0..q)
        .map(|i| (0..q).map(|r| law.z[r] * cs.s[(r + q - i) % q]).sum())
        .collect()
}

/// `max_i |z_i - (N_i / N_0)^k|`: the violation of the translation
/// invariant boundary-law equations.
pub fn residual_di1(law: &BoundaryLaw) -> Result<f64> {
    let n = neighbour_sums(law);
    if !n[0].is_finite() || n[0] <= 0.0 {
        return Err(Error::Internal(format!("N_0 = {} is not positive", n[0])));
    }
    let k = law.params().ki();
    Ok((0..law.q())
        .map(|i| (law.z[i] - (n[i] / n[0]).powi(k)).abs())
        .fold(0.0, f64::max))
}

/// `sum_{m >= 0} theta^m z_{start + dir m}`.
fn tail(law: &BoundaryLaw, start: i64, dir: i64) -> f64 {
    let theta = law.params().theta();
    let q = law.q() as i64;
    let period: f64 = (0..q)
        .map(|r| theta.powi(r as i32) * law.at(start + dir * r))
        .sum();
    period / (1.0 - theta.powi(q as i32))
}

/// One-sided sums `l_i = sum_{j <= -1} theta^|i-j| z_j` and
/// `r_i = sum_{j >= 1} theta^|i-j| z_j`.
pub fn lr_sums(law: &BoundaryLaw, i: i64) -> (f64, f64) {
    let theta = law.params().theta();
    let l = if i <= -1 {
        let near: f64 = (i..=-1).map(|j| theta.powi((j - i) as i32) * law.at(j)).sum();
        near + theta * tail(law, i - 1, -1)
    } else {
        theta.powi((i + 1) as i32) * tail(law, -1, -1)
    };
    let r = if i >= 1 {
        let near: f64 = (1..=i).map(|j| theta.powi((i - j) as i32) * law.at(j)).sum();
        near + theta * tail(law, i + 1, 1)
    } else {
        theta.powi((1 - i) as i32) * tail(law, 1, 1)
    };
    (l, r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalisability {
    Normalisable,
    /// The per-height summand is periodic and at least `witness`, so the
    /// sum over heights diverges.
    Divergent {
        witness: f64,
    },
}

impl Normalisability {
    pub fn is_divergent(&self) -> bool {
        matches!(self, Normalisability::Divergent { .. })
    }
}

/// The normalisation sum `sum_i (sum_j theta^|i-j| z_j)^{k+1}` of a
/// periodic law has periodic positive terms, hence always diverges.
pub fn normalisability_verdict(law: &BoundaryLaw) -> Normalisability {
    let k1 = law.params().ki() + 1;
    let witness = neighbour_sums(law)
        .into_iter()
        .map(|n| n.powi(k1))
        .fold(f64::INFINITY, f64::min);
    if witness > 0.0 {
        Normalisability::Divergent { witness }
    } else {
        Normalisability::Normalisable
    }
}
