//! Real polynomials, certified positive-root isolation and location of the
//! critical parameter values where a family of polynomials gains or loses
//! positive roots.
//!
//! Roots are isolated by partitioning the search interval at the critical
//! points of the polynomial (found recursively from its derivative). On
//! each monotone piece there is at most one root, located by bisection on
//! a sign change. A critical point where the polynomial vanishes up to
//! rounding is a tangential (double) root.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::params::Params;

/// Dense real polynomial, coefficients in ascending degree.
#[derive(Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// `c x^n`.
    pub fn monomial(c: f64, n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = c;
        Poly::new(coeffs)
    }

    /// `x`.
    pub fn x() -> Self {
        Poly::monomial(1.0, 1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc.mul_add(x, c))
    }

    /// Horner evaluation with error-free transformations; the result is as
    /// accurate as if computed in twice the working precision.
    pub fn eval_compensated(&self, x: f64) -> f64 {
        let mut s = 0.0f64;
        let mut err = 0.0f64;
        for &c in self.coeffs.iter().rev() {
            let (p, ep) = two_prod(s, x);
            let (t, es) = two_sum(p, c);
            s = t;
            err = err.mul_add(x, ep + es);
        }
        s + err
    }

    pub fn eval_with(&self, x: f64, precision: Precision) -> f64 {
        match precision {
            Precision::Double => self.eval(x),
            Precision::Compensated => self.eval_compensated(x),
        }
    }

    /// `sum |a_i| |x|^i`, the scale of the rounding error of Horner at `x`.
    pub fn abs_eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::constant(1.0);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, &c| &(&acc * inner) + &Poly::constant(c))
    }

    /// Number of sign changes in the coefficient sequence; bounds the
    /// number of positive roots counted with multiplicity.
    pub fn sign_changes(&self) -> usize {
        let mut last = 0.0f64;
        let mut n = 0;
        for &c in &self.coeffs {
            if c == 0.0 {
                continue;
            }
            if last != 0.0 && (c > 0.0) != (last > 0.0) {
                n += 1;
            }
            last = c;
        }
        n
    }

    /// Synthetic division by `x - r`, returning quotient and remainder.
    pub fn divide_linear(&self, r: f64) -> (Poly, f64) {
        let n = self.degree();
        if n == 0 {
            return (Poly::zero(), self.coeffs[0]);
        }
        let mut q = vec![0.0; n];
        let mut carry = 0.0;
        for i in (0..=n).rev() {
            let v = self.coeffs[i] + carry * r;
            if i == 0 {
                return (Poly::new(q), v);
            }
            q[i - 1] = v;
            carry = v;
        }
        unreachable!()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&0.0) + rhs.coeffs.get(i).unwrap_or(&0.0))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Evaluation precision used while certifying roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    Compensated,
}

impl Precision {
    /// Relative rounding bound of a degree-`n` Horner evaluation, in units
    /// of `sum |a_i| |x|^i`.
    fn horner_bound(self, n: usize) -> f64 {
        let g = 2.0 * (n.max(1) as f64) * f64::EPSILON;
        match self {
            Precision::Double => 8.0 * g,
            Precision::Compensated => 8.0 * (f64::EPSILON + g * g),
        }
    }
}

/// Options for [`isolate_positive_roots`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Bisection stops at this bracket width.
    pub tol: f64,
    /// Roots closer than `merge_rel * (hi - lo)` are merged and flagged.
    pub merge_rel: f64,
    pub precision: Precision,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            tol: 1e-14,
            merge_rel: 1e-6,
            precision: Precision::Double,
        }
    }
}

impl RootOptions {
    pub fn with_tol(tol: f64) -> Self {
        RootOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Positive roots of a polynomial in an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<f64>,
    /// Root is a tangency or a merged pair of near-coincident roots.
    pub multiplicity_flags: Vec<bool>,
    pub residuals: Vec<f64>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, bool)> + '_ {
        self.roots
            .iter()
            .copied()
            .zip(self.multiplicity_flags.iter().copied())
    }

    pub fn has_double(&self) -> bool {
        self.multiplicity_flags.iter().any(|&f| f)
    }
}

#[derive(Debug, Clone, Copy)]
struct RawRoot {
    x: f64,
    double: bool,
}

fn sign_with_tol(p: &Poly, x: f64, precision: Precision) -> (f64, i8) {
    let v = p.eval_with(x, precision);
    let tol = precision.horner_bound(p.degree()) * p.abs_eval(x);
    let s = if v.abs() <= tol {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    };
    (v, s)
}

fn bisect(p: &Poly, mut a: f64, mut b: f64, sa: i8, opts: &RootOptions) -> f64 {
    while b - a > opts.tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let v = p.eval_with(m, opts.precision);
        if v == 0.0 {
            return m;
        }
        if (v > 0.0) == (sa > 0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// All real roots of `p` in the open interval `(lo, hi)`.
fn roots_in(p: &Poly, lo: f64, hi: f64, opts: &RootOptions) -> Vec<RawRoot> {
    match p.degree() {
        0 => return Vec::new(),
        1 => {
            let r = -p.coeffs[0] / p.coeffs[1];
            return if r > lo && r < hi {
                vec![RawRoot { x: r, double: false }]
            } else {
                Vec::new()
            };
        }
        _ => {}
    }
    let crit = roots_in(&p.derivative(), lo, hi, opts);
    let mut points = Vec::with_capacity(crit.len() + 2);
    points.push(lo);
    points.extend(crit.iter().map(|c| c.x));
    points.push(hi);

    let signs: Vec<i8> = points
        .iter()
        .map(|&x| sign_with_tol(p, x, opts.precision).1)
        .collect();

    let mut out = Vec::new();
    for i in 0..points.len() - 1 {
        let (a, b) = (points[i], points[i + 1]);
        if i > 0 && signs[i] == 0 {
            out.push(RawRoot { x: a, double: true });
        }
        if signs[i] != 0 && signs[i + 1] != 0 && signs[i] != signs[i + 1] {
            out.push(RawRoot {
                x: bisect(p, a, b, signs[i], opts),
                double: false,
            });
        }
    }
    out
}

fn merge_close(mut raw: Vec<RawRoot>, min_gap: f64) -> Vec<RawRoot> {
    raw.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut out: Vec<RawRoot> = Vec::with_capacity(raw.len());
    for r in raw {
        if let Some(last) = out.last_mut() {
            if r.x - last.x < min_gap {
                // keep the tangency point when one of the two is one
                if r.double && !last.double {
                    last.x = r.x;
                } else if !last.double {
                    last.x = 0.5 * (last.x + r.x);
                }
                last.double = true;
                continue;
            }
        }
        out.push(r);
    }
    out
}

/// Isolates all positive roots of `p` in `(lo, hi)`.
///
/// Tangential roots and pairs of roots closer than
/// `opts.merge_rel * (hi - lo)` are reported once and flagged.
pub fn isolate_positive_roots(p: &Poly, lo: f64, hi: f64, opts: &RootOptions) -> Result<RootSet> {
    if p.degree() == 0 {
        return Err(Error::EmptyProblem("polynomial has degree 0"));
    }
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::InvalidArgument(format!(
            "search interval ({lo}, {hi}) must satisfy 0 <= lo < hi"
        )));
    }
    // monic scaling keeps the tolerance logic independent of the leading coefficient
    let q = p.scale(1.0 / p.leading().abs());
    let raw = merge_close(roots_in(&q, lo, hi, opts), opts.merge_rel * (hi - lo));
    let bound = p.sign_changes();
    let mut set = RootSet {
        roots: Vec::with_capacity(raw.len()),
        multiplicity_flags: Vec::with_capacity(raw.len()),
        residuals: Vec::with_capacity(raw.len()),
    };
    for r in raw.into_iter().take(bound) {
        set.roots.push(r.x);
        set.multiplicity_flags.push(r.double);
        set.residuals.push(p.eval_with(r.x, opts.precision).abs());
    }
    Ok(set)
}

/// Divides out the linear factor `x - r` of a polynomial with root `r`.
pub fn deflate_by_root(p: &Poly, r: f64) -> Result<Poly> {
    let residual = p.eval_compensated(r).abs();
    let scale = p.abs_eval(r).max(p.max_abs_coeff());
    if residual >= 1e-8 * scale {
        return Err(Error::NotARoot { value: r, residual });
    }
    Ok(p.divide_linear(r).0)
}

/// A polynomial family `tau -> p_tau` together with the admissible search
/// domain and a filter on roots.
pub trait PolyFamily: Sync {
    fn poly(&self, params: &Params) -> Poly;

    fn domain(&self, params: &Params) -> (f64, f64) {
        (1e-9, params.tau() * params.tau())
    }

    fn accept(&self, _x: f64, _params: &Params) -> bool {
        true
    }

    fn root_options(&self) -> RootOptions {
        RootOptions {
            precision: Precision::Compensated,
            ..RootOptions::default()
        }
    }

    /// `p(x)` evaluated from the factored form when one exists. Expanded
    /// coefficients of composed polynomials lose relative accuracy, which
    /// matters when two roots nearly meet.
    fn value(&self, x: f64, params: &Params) -> f64 {
        self.poly(params).eval_compensated(x)
    }

    fn roots(&self, params: &Params) -> Result<RootSet> {
        let (lo, hi) = self.domain(params);
        let raw = isolate_positive_roots(&self.poly(params), lo, hi, &self.root_options())?;
        let set = confirm_roots(raw, lo, hi, |x| self.value(x, params));
        let keep: Vec<usize> = (0..set.len())
            .filter(|&i| self.accept(set.roots[i], params))
            .collect();
        Ok(RootSet {
            roots: keep.iter().map(|&i| set.roots[i]).collect(),
            multiplicity_flags: keep.iter().map(|&i| set.multiplicity_flags[i]).collect(),
            residuals: keep.iter().map(|&i| set.residuals[i]).collect(),
        })
    }

    fn count(&self, params: &Params) -> Result<usize> {
        Ok(self.roots(params)?.len())
    }
}

/// Confirms isolated roots with an independent evaluator. Around each
/// root (up to halfway to its neighbours) the evaluator is sampled: every
/// sign change found there becomes a simple root located by bisection, a
/// root without one is kept as double only if the evaluator vanishes
/// there, and is dropped otherwise. Two adjacent roots with the evaluator
/// at rounding level between them are one double root split by rounding.
fn confirm_roots<F: Fn(f64) -> f64>(set: RootSet, lo: f64, hi: f64, value: F) -> RootSet {
    const SAMPLES: usize = 256;
    let mut out = RootSet {
        roots: Vec::new(),
        multiplicity_flags: Vec::new(),
        residuals: Vec::new(),
    };
    let mut scales = Vec::new();
    let n = set.len();
    for i in 0..n {
        let x = set.roots[i];
        let left = if i > 0 { 0.5 * (set.roots[i - 1] + x) } else { lo };
        let right = if i + 1 < n {
            0.5 * (x + set.roots[i + 1])
        } else {
            hi
        };
        let a = left.max(x - 1e-2 * (hi - lo));
        let b = right.min(x + 1e-2 * (hi - lo));
        let xs: Vec<f64> = (0..=SAMPLES)
            .map(|j| a + (b - a) * j as f64 / SAMPLES as f64)
            .collect();
        let vs: Vec<f64> = xs.iter().map(|&t| value(t)).collect();
        let scale = vs
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let mut found = false;
        for j in 0..SAMPLES {
            let (va, vb) = (vs[j], vs[j + 1]);
            if va == 0.0 && j > 0 {
                continue;
            }
            if va == 0.0 || (vb != 0.0 && (va > 0.0) != (vb > 0.0)) {
                let r = if va == 0.0 {
                    xs[j]
                } else {
                    bisect_fn(&value, xs[j], xs[j + 1], va > 0.0)
                };
                out.roots.push(r);
                out.multiplicity_flags.push(false);
                out.residuals.push(value(r).abs());
                scales.push(scale);
                found = true;
            }
        }
        if !found && value(x).abs() <= 1e-9 * scale {
            out.roots.push(x);
            out.multiplicity_flags.push(true);
            out.residuals.push(value(x).abs());
            scales.push(scale);
        }
    }
    merge_split_doubles(out, &scales, 1e-6 * (hi - lo), value)
}

fn merge_split_doubles<F: Fn(f64) -> f64>(set: RootSet, scales: &[f64], max_gap: f64, value: F) -> RootSet {
    let mut out = RootSet {
        roots: Vec::new(),
        multiplicity_flags: Vec::new(),
        residuals: Vec::new(),
    };
    let mut i = 0;
    while i < set.len() {
        if i + 1 < set.len() {
            let (a, b) = (set.roots[i], set.roots[i + 1]);
            let mid = 0.5 * (a + b);
            if b - a <= max_gap && value(mid).abs() <= 1e-9 * scales[i].max(scales[i + 1]) {
                out.roots.push(mid);
                out.multiplicity_flags.push(true);
                out.residuals.push(value(mid).abs());
                i += 2;
                continue;
            }
        }
        out.roots.push(set.roots[i]);
        out.multiplicity_flags.push(set.multiplicity_flags[i]);
        out.residuals.push(set.residuals[i]);
        i += 1;
    }
    out
}

fn bisect_fn<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, a_pos: bool) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let v = f(m);
        if v == 0.0 {
            return m;
        }
        if (v > 0.0) == a_pos {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Tolerance on the critical value returned by [`find_critical_tau`].
pub const CRITICAL_TAU_TOL: f64 = 1e-9;

/// Locates the value of `tau` in `(tau_lo, tau_hi)` where the number of
/// admissible roots of `family` changes, by bisection on the count.
///
/// When the change is a tangency the bracket is polished by Newton's
/// method on `p = dp/dx = 0` in `(x, tau)`.
pub fn find_critical_tau(family: &dyn PolyFamily, k: u32, tau_lo: f64, tau_hi: f64) -> Result<f64> {
    let at = |tau: f64| -> Result<usize> { family.count(&Params::new(k, tau)?) };
    let (mut lo, mut hi) = (tau_lo, tau_hi);
    let c_lo = at(lo)?;
    let c_hi = at(hi)?;
    if c_lo == c_hi {
        return Err(Error::NoTransition {
            lo: tau_lo,
            hi: tau_hi,
            count: c_lo,
        });
    }
    while hi - lo > 0.25 * CRITICAL_TAU_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at(mid)? == c_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let bisected = 0.5 * (lo + hi);
    Ok(polish_tangency(family, k, lo, hi).unwrap_or(bisected))
}

fn polish_tangency(family: &dyn PolyFamily, k: u32, lo: f64, hi: f64) -> Option<f64> {
    let mut tau = 0.5 * (lo + hi);
    let params = Params::new(k, tau).ok()?;
    let p = family.poly(&params);
    let (dlo, dhi) = family.domain(&params);
    let dp = p.derivative();
    let crit = isolate_positive_roots(&dp, dlo, dhi, &RootOptions::default()).ok()?;
    // the tangency is the critical point where p is smallest relative to its scale
    let mut x = crit.roots.iter().copied().min_by(|a, b| {
        let ra = p.eval(*a).abs() / p.abs_eval(*a);
        let rb = p.eval(*b).abs() / p.abs_eval(*b);
        ra.total_cmp(&rb)
    })?;
    if p.eval(x).abs() / p.abs_eval(x) > 1e-6 {
        return None;
    }
    let h = 1e-6;
    for _ in 0..50 {
        let pt = family.poly(&Params::new(k, tau).ok()?);
        let ptp = family.poly(&Params::new(k, tau + h).ok()?);
        let ptm = family.poly(&Params::new(k, tau - h).ok()?);
        let d1 = pt.derivative();
        let d2 = d1.derivative();
        let f0 = pt.eval(x);
        let f1 = d1.eval(x);
        let a11 = d1.eval(x);
        let a12 = (ptp.eval(x) - ptm.eval(x)) / (2.0 * h);
        let a21 = d2.eval(x);
        let a22 = (ptp.derivative().eval(x) - ptm.derivative().eval(x)) / (2.0 * h);
        let det = a11 * a22 - a12 * a21;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = (f0 * a22 - a12 * f1) / det;
        let dt = (a11 * f1 - a21 * f0) / det;
        x -= dx;
        tau -= dt;
        if !(x.is_finite() && tau.is_finite()) {
            return None;
        }
        if dx.abs() < 1e-15 * x.abs().max(1.0) && dt.abs() < 1e-15 * tau.abs().max(1.0) {
            break;
        }
    }
    let slack = 2.0 * CRITICAL_TAU_TOL;
    (tau >= lo - slack && tau <= hi + slack).then_some(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn x3(k: u32, tau: f64) -> Poly {
        // 2x^{k+1} - tau x^k + (tau - 1) x - 1
        let k = k as usize;
        let mut c = vec![0.0; k + 2];
        c[0] = -1.0;
        c[1] += tau - 1.0;
        c[k] += -tau;
        c[k + 1] += 2.0;
        Poly::new(c)
    }

    #[test]
    fn isolate_examples() {
        let p = Poly::new(vec![-1.0, 5.0, -6.0, 2.0]);
        let r = isolate_positive_roots(&p, 0.0, 10.0, &RootOptions::with_tol(1e-12)).unwrap();
        let h = 2f64.sqrt() / 2.0;
        assert_eq!(r.len(), 3);
        for (got, want) in r.roots.iter().zip([1.0 - h, 1.0, 1.0 + h]) {
            assert!((got - want).abs() < 1e-11, "{got} vs {want}");
        }
        assert!(!r.has_double());

        let p = Poly::new(vec![-1.0, 3.0, -4.0, 2.0]);
        let r = isolate_positive_roots(&p, 0.0, 10.0, &RootOptions::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert_relative_eq!(r.roots[0], 1.0, epsilon = 1e-12);

        let p = Poly::new(vec![1.0, -2.0, 1.0]);
        let r = isolate_positive_roots(&p, 0.0, 10.0, &RootOptions::default()).unwrap();
        assert_eq!(r.roots, vec![1.0]);
        assert_eq!(r.multiplicity_flags, vec![true]);

        assert_eq!(
            isolate_positive_roots(&Poly::constant(3.0), 0.0, 1.0, &RootOptions::default()),
            Err(Error::EmptyProblem("polynomial has degree 0"))
        );
    }

    #[test]
    fn compensated_precision_finds_same_roots() {
        let p = x3(2, 6.0);
        let opts = RootOptions {
            precision: Precision::Compensated,
            ..Default::default()
        };
        let a = isolate_positive_roots(&p, 0.0, 10.0, &opts).unwrap();
        let b = isolate_positive_roots(&p, 0.0, 10.0, &RootOptions::default()).unwrap();
        assert_eq!(a.len(), 3);
        for (x, y) in a.roots.iter().zip(&b.roots) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn compensated_horner_beats_plain_near_multiple_root() {
        // (x - 1)^7 expanded, evaluated just off the root
        let p = Poly::new(vec![1.0, -1.0]).scale(-1.0).pow(7);
        let x = 1.0 + 1e-3;
        let exact = 1e-21;
        let plain = (p.eval(x) - exact).abs();
        let comp = (p.eval_compensated(x) - exact).abs();
        assert!(comp <= plain);
        assert!(comp < 1e-22);
    }

    #[test]
    fn deflation_examples() {
        let p = Poly::new(vec![-1.0, 5.0, -6.0, 2.0]);
        assert_eq!(deflate_by_root(&p, 1.0).unwrap(), Poly::new(vec![1.0, -4.0, 2.0]));
        assert_eq!(
            deflate_by_root(&Poly::new(vec![-1.0, 0.0, 1.0]), 1.0).unwrap(),
            Poly::new(vec![1.0, 1.0])
        );
        assert!(matches!(deflate_by_root(&p, 2.0), Err(Error::NotARoot { .. })));
    }

    #[test]
    fn deflate_reconstructs() {
        let p = Poly::new(vec![8.0, -88.0, 360.0, -672.0, 558.0, -170.0, 15.0]);
        let prod = &p * &Poly::new(vec![-1.0, 1.0]);
        let q = deflate_by_root(&prod, 1.0).unwrap();
        for (a, b) in q.coeffs().iter().zip(p.coeffs()) {
            assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
        }
    }

    #[test]
    fn compose_and_pow() {
        // (x + 1)^2 composed with 2x = 4x^2 + 4x + 1
        let p = Poly::new(vec![1.0, 1.0]).pow(2);
        assert_eq!(p.compose(&Poly::monomial(2.0, 1)), Poly::new(vec![1.0, 4.0, 4.0]));
        assert_eq!(p.sign_changes(), 0);
        assert_eq!(Poly::new(vec![-1.0, 5.0, -6.0, 2.0]).sign_changes(), 3);
    }

    struct X3;
    impl PolyFamily for X3 {
        fn poly(&self, params: &Params) -> Poly {
            x3(params.k(), params.tau())
        }
    }

    #[test]
    fn critical_tau_of_x3() {
        let t = find_critical_tau(&X3, 2, 3.0, 6.0).unwrap();
        assert!((t - 2.0 * (1.0 + 2f64.sqrt())).abs() < 1e-9, "{t}");
        let t3 = find_critical_tau(&X3, 3, 3.0, 5.0).unwrap();
        assert!(t3 < 3.5);
        let at = X3.roots(&Params::new(3, t3).unwrap()).unwrap();
        assert!(at.has_double());
        assert!(matches!(
            find_critical_tau(&X3, 2, 3.0, 4.0),
            Err(Error::NoTransition { .. })
        ));
    }

    fn random_poly_with_roots(roots: &[f64], lead: f64) -> Poly {
        roots
            .iter()
            .fold(Poly::constant(lead), |acc, &r| &acc * &Poly::new(vec![-r, 1.0]))
    }

    proptest::proptest! {
        #[test]
        fn finds_planted_roots(mut roots in proptest::collection::vec(0.05f64..8.0, 1..7),
                               lead in 0.5f64..3.0) {
            roots.sort_by(f64::total_cmp);
            roots.dedup_by(|a, b| (*a - *b).abs() < 0.05);
            let p = random_poly_with_roots(&roots, lead);
            let set = isolate_positive_roots(&p, 0.0, 10.0, &RootOptions::default()).unwrap();
            proptest::prop_assert_eq!(set.len(), roots.len());
            proptest::prop_assert!(set.len() <= p.sign_changes());
            for (got, want) in set.roots.iter().zip(&roots) {
                proptest::prop_assert!((got - want).abs() < 1e-7 * want.max(1.0));
            }
            for (r, res) in set.roots.iter().zip(&set.residuals) {
                proptest::prop_assert!(*res < 1e-9 * (1.0 + p.max_abs_coeff()), "{} {}", r, res);
            }
            // deflating one planted root leaves the rest
            let q = deflate_by_root(&p, set.roots[0]).unwrap();
            if q.degree() > 0 {
                let rest = isolate_positive_roots(&q, 0.0, 10.0, &RootOptions::default()).unwrap();
                proptest::prop_assert_eq!(rest.len(), roots.len() - 1);
            }
        }

        #[test]
        fn descartes_bound_holds(coeffs in proptest::collection::vec(-5.0f64..5.0, 2..9)) {
            let p = Poly::new(coeffs);
            if p.degree() > 0 {
                let set = isolate_positive_roots(&p, 0.0, 20.0, &RootOptions::default()).unwrap();
                proptest::prop_assert!(set.len() <= p.sign_changes());
            }
        }
    }
}
