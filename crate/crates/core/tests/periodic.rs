use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use sosggm::params::positivity_bound;
use sosggm::periodic::{self, Branch, Family, PeriodicSolution, SymmetryFilter};
use sosggm::recurrence::{generate, generate_extended, step_backward, step_forward};
use sosggm::symmetry::{classify, distinct_values, SymmetryKind};
use sosggm::Params;
use twofloat::TwoFloat;

fn params(k: u32, tau: f64) -> Params {
    Params::new(k, tau).unwrap()
}

/// Every solution of every reduction with q <= 5.
fn all_solutions(p: &Params) -> Vec<PeriodicSolution> {
    (1..=5)
        .flat_map(|q| periodic::solve(p, q, SymmetryFilter::All).unwrap())
        .collect()
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

// independent check of the two reflections about the anchor at p
fn two_mirror_at(word: &[f64], p: usize) -> bool {
    let q = word.len();
    let at = |i: usize| word[i % q];
    (0..=p).all(|i| near(at(i), at(p - i))) && (0..=q - p).all(|j| near(at(p + j), at(q - j)))
}

#[test]
fn q3_mirror_roots_are_fixed_points_of_g() {
    // u_2 = g(x) must equal x on the word (1, x, x)
    let p = params(2, 6.0);
    let sols = periodic::solve_q3_mirror(&p).unwrap();
    for s in sols.iter().filter(|s| s.q() == 3) {
        let x = s.word()[1];
        let g = (2.0 * x - 6.0) * x * x + 6.0 * x - 1.0;
        assert_abs_diff_eq!(g, x, epsilon = 1e-10);
        assert_abs_diff_eq!(s.word()[2], x, epsilon = 1e-10);
    }
}

#[test]
fn q4_nonmirror_unit_roots_k2() {
    // y^2 - (tau - 2) y + 1 = 0 at tau = 6
    let p = params(2, 6.0);
    let sols = periodic::solve_q4_nonmirror(&p).unwrap();
    let ys: Vec<f64> = sols
        .iter()
        .filter(|s| s.q() == 4)
        .map(|s| s.word()[1].max(s.word()[2]))
        .collect();
    for y in [2.0 + 3f64.sqrt(), 2.0 - 3f64.sqrt()] {
        assert!(
            ys.iter().any(|v| (v - y).abs() < 1e-10),
            "{y} missing from {ys:?}"
        );
    }
}

#[test]
fn below_threshold_only_trivial() {
    let p = params(2, 2.1);
    for s in all_solutions(&p) {
        assert!(s.is_trivial(), "{:?}", s.word());
    }
}

#[test]
fn closure_in_extended_precision() {
    for tau in [5.0, 8.0] {
        for s in all_solutions(&params(2, tau)) {
            assert!(s.closure_deviation(3) < 1e-9, "{:?}", s.word());
            assert!(s.system_residual() < 1e-9);
        }
    }
}

#[test]
fn numeric_search_recovers_closed_forms() {
    let p = params(2, 8.0);
    let found = periodic::search_periodic_numeric(&p, 5, 200);
    let closed: Vec<PeriodicSolution> = periodic::solve_q5_mirror(&p).unwrap();
    for s in closed.iter().filter(|s| s.q() == 5) {
        assert!(
            found.iter().any(|f| f.q() == 5
                && (f.u_m1() - s.u_m1()).abs() < 1e-7
                && (f.u_1() - s.u_1()).abs() < 1e-7),
            "search missed {:?}",
            s.word()
        );
    }
    assert!(found
        .iter()
        .all(|f| f.family() == Family::Numeric && f.experimental()));
}

#[test]
fn vacuous_step_at_anchor() {
    let p = params(3, 7.0);
    for (a, b) in [(0.3, 2.0), (1.5, 4.0), (2.2, 0.1)] {
        assert_abs_diff_eq!(step_forward(a, 1.0, a, b, &p), b, epsilon = 1e-12);
    }
}

fn admissible() -> impl Strategy<Value = (u32, f64)> {
    (2u32..=4, 2.1f64..12.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mirror_branch_gives_mirror_words((k, tau) in admissible()) {
        for s in all_solutions(&params(k, tau)) {
            if s.branch() == Branch::Mirror {
                prop_assert_eq!(classify(s.word()).kind, SymmetryKind::Mirror, "{:?}", s.word());
            }
        }
    }

    #[test]
    fn internal_anchor_gives_two_mirror((k, tau) in admissible()) {
        for s in all_solutions(&params(k, tau)) {
            let w = s.word();
            let q = w.len();
            if s.branch() != Branch::NonMirror || near(w[q - 1], w[1 % q]) {
                continue;
            }
            for p in 1..q {
                if near(w[p], 1.0) && near(w[(p + 1) % q], w[q - 1]) {
                    prop_assert!(matches!(classify(w).kind, SymmetryKind::TwoMirror(_)), "{:?}", w);
                    prop_assert!(two_mirror_at(w, p), "{:?} at {}", w, p);
                }
            }
        }
    }

    #[test]
    fn symmetric_words_have_few_values((k, tau) in admissible()) {
        for s in all_solutions(&params(k, tau)) {
            let w = s.word();
            if classify(w).kind != SymmetryKind::None {
                prop_assert!(distinct_values(w) <= w.len() / 2 + 1, "{:?}", w);
            }
        }
    }

    #[test]
    fn periodic_orbits_respect_bound((k, tau) in admissible()) {
        let p = params(k, tau);
        for s in all_solutions(&p) {
            let b = positivity_bound(&p, s.u_m1(), s.u_1()).unwrap();
            // f64 iteration drifts off unstable cycles, so follow the orbit
            // in extended precision over one period
            let t = generate_extended(TwoFloat::from(s.u_m1()), TwoFloat::from(s.u_1()), s.q() + 1, &p).unwrap();
            prop_assert!(!t.is_truncated());
            // index 2 holds u_1
            for &u in &t.values()[2..] {
                prop_assert!(u < b.upper + 1e-9, "u = {} above {} for {:?}", u, b.upper, s.word());
            }
        }
    }

    #[test]
    fn random_untruncated_orbits_respect_bound(
        (k, tau) in admissible(),
        a in 0.01f64..1.0,
        b in 0.01f64..1.0,
    ) {
        let p = params(k, tau);
        let (um1, u1) = (a * tau * 0.5, b * tau * 0.5);
        let t = generate(um1, u1, 6, &p).unwrap();
        prop_assume!(!t.is_truncated());
        let bound = positivity_bound(&p, um1, u1).unwrap();
        // u_i < x0 needs u_{i+1} > 0, which is unknown for the last term
        let v = t.values();
        for &u in &v[2..v.len() - 1] {
            prop_assert!(u < bound.upper + 1e-9);
        }
    }

    #[test]
    fn backward_inverts_forward(
        (k, tau) in admissible(),
        a in 0.01f64..0.99,
        b in 0.01f64..0.99,
        prev in 0.01f64..3.0,
        cur in 0.01f64..3.0,
    ) {
        let p = params(k, tau);
        let (um1, u1) = (a * tau * 0.5, b * tau * 0.5);
        let next = step_forward(prev, cur, um1, u1, &p);
        let back = step_backward(next, cur, um1, u1, &p);
        prop_assert!((back - prev).abs() < 1e-10 * next.abs().max(1.0));
    }
}
