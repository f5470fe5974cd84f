//! Univariate reductions of the closure conditions, one per word shape.

use crate::params::Params;
use crate::polyroot::{Poly, PolyFamily};

/// `g(x) = (2x - tau) x^k + tau x - 1`, the value of `u_2` on the mirror
/// branch `u_-1 = u_1 = x`.
pub fn g_poly(params: &Params) -> Poly {
    let k = params.k() as usize;
    let tau = params.tau();
    let mut c = vec![0.0; k + 2];
    c[0] = -1.0;
    c[1] = tau;
    c[k] -= tau;
    c[k + 1] += 2.0;
    Poly::new(c)
}

/// `A(x) = 2 - tau x + tau x^k - x^{k+1}`, so that `u_1 = A(x) / x^k` when
/// `u_-1 = x` and `u_{q-1}`, `u_q` close through an anchor.
fn a_poly(params: &Params) -> Poly {
    let k = params.k() as usize;
    let tau = params.tau();
    let mut c = vec![0.0; k + 2];
    c[0] = 2.0;
    c[1] = -tau;
    c[k] += tau;
    c[k + 1] -= 1.0;
    Poly::new(c)
}

/// `eta(x) = A(x) / x^k`.
pub fn eta(x: f64, params: &Params) -> f64 {
    a_poly(params).eval(x) / x.powi(params.ki())
}

/// `1 + y + ... + y^m`, or zero for `m < 0`.
fn geometric(m: i64) -> Poly {
    if m < 0 {
        Poly::zero()
    } else {
        Poly::new(vec![1.0; m as usize + 1])
    }
}

fn half_tau(params: &Params) -> (f64, f64) {
    (1e-9, 0.5 * params.tau())
}

/// `(2x - tau) x^k + tau x - 2`: mirror 2-cycles `(1, x)`.
pub struct Q2Mirror;

impl PolyFamily for Q2Mirror {
    fn poly(&self, params: &Params) -> Poly {
        &g_poly(params) - &Poly::constant(1.0)
    }

    fn domain(&self, params: &Params) -> (f64, f64) {
        half_tau(params)
    }
}

/// `2x^{k+1} - tau x^k + (tau - 1) x - 1`: mirror 3-cycles `(1, x, x)`.
pub struct Q3Mirror;

impl PolyFamily for Q3Mirror {
    fn poly(&self, params: &Params) -> Poly {
        &g_poly(params) - &Poly::x()
    }

    fn domain(&self, params: &Params) -> (f64, f64) {
        half_tau(params)
    }
}

/// `2x S_{k-1}(g) - tau g S_{k-2}(g)`: mirror 4-cycles `(1, x, g(x), x)`
/// after dividing out the factor `g - 1` of the 2-cycles.
pub struct Q4Mirror;

impl PolyFamily for Q4Mirror {
    fn poly(&self, params: &Params) -> Poly {
        let k = params.k() as i64;
        let g = g_poly(params);
        let left = &Poly::monomial(2.0, 1) * &geometric(k - 1).compose(&g);
        let right = &g.scale(params.tau()) * &geometric(k - 2).compose(&g);
        &left - &right
    }

    fn domain(&self, params: &Params) -> (f64, f64) {
        half_tau(params)
    }

    fn value(&self, x: f64, params: &Params) -> f64 {
        let k = params.k() as i64;
        let g = g_poly(params).eval(x);
        2.0 * x * geometric(k - 1).eval(g) - params.tau() * g * geometric(k - 2).eval(g)
    }

    // The factor `g - 1` is already divided out; a remaining root with
    // `g(x) = 1` is a 2-cycle where the 4-cycle branch is born, and is
    // reported with its minimal period.
    fn accept(&self, x: f64, params: &Params) -> bool {
        g_poly(params).eval(x) > 0.0
    }
}

/// `phi(x) - x = (2x - tau) g^k + (tau - 1) g - x`: mirror 5-cycles
/// `(1, x, y, y, x)` with `y = g(x)`.
pub struct Q5Mirror;

impl PolyFamily for Q5Mirror {
    fn poly(&self, params: &Params) -> Poly {
        let g = g_poly(params);
        let lead = Poly::new(vec![-params.tau(), 2.0]);
        let t1 = &lead * &g.pow(params.k());
        let t2 = g.scale(params.tau() - 1.0);
        &(&t1 + &t2) - &Poly::x()
    }

    fn domain(&self, params: &Params) -> (f64, f64) {
        half_tau(params)
    }

    fn value(&self, x: f64, params: &Params) -> f64 {
        let tau = params.tau();
        let g = g_poly(params).eval(x);
        (2.0 * x - tau) * g.powi(params.ki()) + (tau - 1.0) * g - x
    }

    fn accept(&self, x: f64, params: &Params) -> bool {
        g_poly(params).eval(x) > 0.0
    }
}

/// `x^{k+1} - (tau - 1) x^k + tau x - 2`: 3-cycles `(1, 1, x)` with one
/// neighbour of the anchor equal to 1.
pub struct Q3NonMirrorUnit;

impl PolyFamily for Q3NonMirrorUnit {
    fn poly(&self, params: &Params) -> Poly {
        let k = params.k() as usize;
        let tau = params.tau();
        let mut c = vec![0.0; k + 2];
        c[0] = -2.0;
        c[1] = tau;
        c[k] -= tau - 1.0;
        c[k + 1] += 1.0;
        Poly::new(c)
    }

    fn domain(&self, params: &Params) -> (f64, f64) {
        (1e-9, params.tau() - 1.0)
    }
}

/// `y^k - (tau - 2)(y + ... + y^{k-1}) + 1`: 4-cycles `(1, y, y, 1)`.
///
/// Palindromic, so roots come in pairs `y, 1/y`.
pub struct Q4NonMirrorUnit;

impl PolyFamily for Q4NonMirrorUnit {
    fn poly(&self, params: &Params) -> Poly {
        let k = params.k() as usize;
        let mut c = vec![-(params.tau() - 2.0); k + 1];
        c[0] = 1.0;
        c[k] = 1.0;
        Poly::new(c)
    }

    fn domain(&self, params: &Params) -> (f64, f64) {
        (1e-9, params.tau() - 1.0)
    }
}

/// Shared shape of the anchored eliminations: with `u_-1 = x` and
/// `u_1 = eta(x)`, `(2 - tau x) A^k + c A x^{k^2} - d x^{k^2+k}`.
fn anchored(params: &Params, c: f64, d: f64) -> Poly {
    let k = params.k();
    let a = a_poly(params);
    let kk = (k * k) as usize;
    let t1 = &Poly::new(vec![2.0, -params.tau()]) * &a.pow(k);
    let t2 = &a * &Poly::monomial(c, kk);
    let t3 = Poly::monomial(d, kk + k as usize);
    &(&t1 + &t2) - &t3
}

fn anchored_value(x: f64, params: &Params, c: f64, d: f64) -> f64 {
    let k = params.ki();
    let a = a_poly(params).eval(x);
    let xk = x.powi(k);
    (2.0 - params.tau() * x) * a.powi(k) + c * a * xk.powi(k) - d * xk.powi(k + 1)
}

fn anchored_domain(params: &Params) -> (f64, f64) {
    (2.0 / params.tau() + 1e-12, params.tau())
}

// The elimination is only a necessary condition, and where all its terms
// are tiny it also has roots from rounding alone; keep roots whose seeded
// orbit is positive and closes after `q` steps.
fn anchored_accept(x: f64, params: &Params, q: usize) -> bool {
    let tau = params.tau();
    let y = eta(x, params);
    if !(y > 0.0 && x + y < tau) {
        return false;
    }
    let s = x + y - tau;
    let (mut prev, mut cur) = (1.0f64, y);
    let mut word = vec![x, 1.0, y];
    for _ in 1..q {
        let next = s * cur.powi(params.ki()) + tau * cur - prev;
        if !(next > 0.0 && next.is_finite()) {
            return false;
        }
        word.push(next);
        prev = cur;
        cur = next;
    }
    let scale = word.iter().fold(1.0f64, |m, v| m.max(*v));
    (word[q] - x).abs() <= 1e-6 * scale && (word[q + 1] - 1.0).abs() <= 1e-6 * scale
}

/// Alternating-ones 4-cycles `(1, eta(x), 1, x)`.
pub struct Q4TypeUp;

impl PolyFamily for Q4TypeUp {
    fn poly(&self, params: &Params) -> Poly {
        anchored(params, params.tau(), 2.0)
    }

    fn value(&self, x: f64, params: &Params) -> f64 {
        anchored_value(x, params, params.tau(), 2.0)
    }

    fn domain(&self, params: &Params) -> (f64, f64) {
        anchored_domain(params)
    }

    fn accept(&self, x: f64, params: &Params) -> bool {
        anchored_accept(x, params, 4)
    }
}

/// 5-cycles `(1, y, y, 1, x)` with `y = eta(x)`: solutions of
/// `x = xi(eta(x))`.
pub struct Q5NonMirror;

impl PolyFamily for Q5NonMirror {
    fn poly(&self, params: &Params) -> Poly {
        anchored(params, params.tau() - 1.0, 1.0)
    }

    fn value(&self, x: f64, params: &Params) -> f64 {
        anchored_value(x, params, params.tau() - 1.0, 1.0)
    }

    fn domain(&self, params: &Params) -> (f64, f64) {
        anchored_domain(params)
    }

    fn accept(&self, x: f64, params: &Params) -> bool {
        anchored_accept(x, params, 5)
    }
}

/// The k = 2 reduction of [`Q5NonMirror`] with the trivial root `x = 1`
/// divided out (degree 6).
pub fn zeta_k2(tau: f64) -> Poly {
    let t2 = tau * tau;
    let t3 = t2 * tau;
    Poly::new(vec![
        8.0,
        -(12.0 * tau - 8.0),
        6.0 * t2 - 4.0 * tau + 8.0,
        -(t3 + 2.0 * t2 + 4.0 * tau),
        t3 + 6.0 * tau - 2.0,
        -(3.0 * t2 - 3.0 * tau + 2.0),
        2.0 * tau - 1.0,
    ])
}
