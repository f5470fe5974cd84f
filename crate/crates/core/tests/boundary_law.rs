use approx::assert_relative_eq;
use proptest::prelude::*;

use sosggm::boundary_law::{
    class_sums, lr_sums, neighbour_sums, normalisability_verdict, residual_di1, truncated_class_sums,
    BoundaryLaw, Normalisability,
};
use sosggm::periodic::{self, va_residual, PeriodicSolution, SymmetryFilter};
use sosggm::Params;

fn x1_law() -> BoundaryLaw {
    let p = Params::new(2, 5.0).unwrap();
    let sols = periodic::solve_q4_mirror(&p).unwrap();
    let s = sols.iter().find(|s| s.word()[1] > 1.0).unwrap();
    BoundaryLaw::from_word(s)
}

// N_i summed directly over a long window of heights
fn brute_neighbour_sum(law: &BoundaryLaw, i: i64) -> f64 {
    let theta = law.params().theta();
    (-400i64..=400)
        .map(|j| theta.powi((i - j).unsigned_abs() as i32) * law.at(j))
        .sum()
}

#[test]
fn neighbour_sums_match_direct_sum() {
    let law = x1_law();
    let n = neighbour_sums(&law);
    for (i, &ni) in n.iter().enumerate() {
        assert_relative_eq!(ni, brute_neighbour_sum(&law, i as i64), max_relative = 1e-12);
    }
}

#[test]
fn q4_mirror_law_solves_boundary_equation() {
    let law = x1_law();
    assert!(residual_di1(&law).unwrap() < 1e-9);
    assert!(residual_di1(&law.perturbed(1, 1.01)).unwrap() > 1e-4);
    match normalisability_verdict(&law) {
        Normalisability::Divergent { witness } => {
            let min = neighbour_sums(&law)
                .into_iter()
                .map(|n| n.powi(3))
                .fold(f64::INFINITY, f64::min);
            assert_relative_eq!(witness, min);
        }
        v => panic!("{v:?}"),
    }
}

#[test]
fn one_sided_sums_add_up() {
    // the two sides exclude height 0: l_i + theta^|i| z_0 + r_i = N_i
    let law = x1_law();
    let theta = law.params().theta();
    for i in -6i64..6 {
        let (l, r) = lr_sums(&law, i);
        assert_relative_eq!(
            l + theta.powi(i.unsigned_abs() as i32) + r,
            brute_neighbour_sum(&law, i),
            max_relative = 1e-12
        );
    }
}

fn random_law(k: u32, tau: f64, z: Vec<f64>) -> BoundaryLaw {
    let mut z = z;
    z[0] = 1.0;
    BoundaryLaw::new(z, &Params::new(k, tau).unwrap()).unwrap()
}

fn solutions(k: u32, tau: f64) -> Vec<PeriodicSolution> {
    let p = Params::new(k, tau).unwrap();
    (1..=5)
        .flat_map(|q| periodic::solve(&p, q, SymmetryFilter::All).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn class_sums_match_truncation(k in 2u32..=4, tau in 2.01f64..20.0, q in 1usize..=6) {
        let p = Params::new(k, tau).unwrap();
        prop_assume!(p.theta() <= 0.9);
        let exact = class_sums(&p, q);
        let trunc = truncated_class_sums(&p, q, 200);
        for r in 0..q {
            prop_assert!((exact.s[r] - trunc.s[r]).abs() < 1e-12);
        }
    }

    #[test]
    fn lr_sums_finite(tau in 2.1f64..12.0, z in prop::collection::vec(0.01f64..50.0, 1..6), i in -20i64..20) {
        let law = random_law(2, tau, z);
        let (l, r) = lr_sums(&law, i);
        prop_assert!(l.is_finite() && r.is_finite() && l > 0.0 && r > 0.0);
    }

    #[test]
    fn never_normalisable(k in 2u32..=4, tau in 2.1f64..12.0, z in prop::collection::vec(0.01f64..50.0, 1..6)) {
        prop_assert!(normalisability_verdict(&random_law(k, tau, z)).is_divergent());
    }

    #[test]
    fn word_system_matches_boundary_equation(k in 2u32..=3, tau in 2.1f64..10.0) {
        for s in solutions(k, tau) {
            let law = BoundaryLaw::from_word(&s);
            let scale = s.word().iter().fold(1.0f64, |m, u| m.max(u.powi(k as i32)));
            prop_assert!(va_residual(s.word(), s.params()) < 1e-9 * tau * scale);
            prop_assert!(residual_di1(&law).unwrap() < 1e-8 * scale);
            if s.q() > 1 {
                // off the solution set both residuals are large
                let mut w = s.word().to_vec();
                w[1] *= 1.01;
                let bumped = BoundaryLaw::from_values(&w, s.params()).unwrap();
                prop_assert!(va_residual(&w, s.params()) > 1e-9);
                prop_assert!(residual_di1(&bumped).unwrap() > 1e-8);
            }
        }
    }

    #[test]
    fn shifting_a_solution_keeps_it_a_solution(tau in 4.1f64..10.0, m in 0i64..5) {
        for s in solutions(2, tau) {
            let law = BoundaryLaw::from_word(&s);
            let scale = law.z().iter().fold(1.0f64, |a, &b| a.max(b / law.at(m)));
            prop_assert!(residual_di1(&law.cyclic_shift(m)).unwrap() < 1e-8 * scale);
        }
    }
}
