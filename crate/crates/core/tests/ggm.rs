use approx::assert_abs_diff_eq;

use sosggm::boundary_law::BoundaryLaw;
use sosggm::exec::Execution;
use sosggm::ggm::{
    build_ball, consistency_check, mixed_marginal, observed_marginal_with, pinned_marginal, tail_bound,
    tv_distance, tv_exact_truncated, Mode, Pinning,
};
use sosggm::periodic;
use sosggm::Error;
use sosggm::Params;

fn x1_law() -> BoundaryLaw {
    let p = Params::new(2, 5.0).unwrap();
    let sols = periodic::solve_q4_mirror(&p).unwrap();
    BoundaryLaw::from_word(sols.iter().find(|s| s.word()[1] > 1.0).unwrap())
}

#[test]
fn class_table_has_all_assignments() {
    let ball = build_ball(2, 0).unwrap();
    let t = mixed_marginal(&ball, &x1_law(), Mode::ExactClass).unwrap();
    assert_eq!(t.rows(), 64);
    assert_abs_diff_eq!(t.total(), 1.0, epsilon = 1e-12);
}

#[test]
fn truncation_error_within_tail_bound() {
    let law = x1_law();
    let ball = build_ball(2, 0).unwrap();
    let exact = mixed_marginal(&ball, &law, Mode::ExactClass).unwrap();
    for cut in [10, 20, 40] {
        let trunc = mixed_marginal(&ball, &law, Mode::Truncated(cut)).unwrap();
        assert_abs_diff_eq!(trunc.total(), 1.0, epsilon = 1e-12);
        let tv = tv_exact_truncated(&exact, &trunc, &law).unwrap();
        // past cut 20 the bound is below double rounding of the table
        assert!(
            tv <= tail_bound(&ball, law.params().theta(), cut) + 1e-13,
            "cut {cut}: {tv}"
        );
    }
}

#[test]
fn consistent_on_solutions_only() {
    let law = x1_law();
    assert!(consistency_check(&law, 2, 0, 1, Mode::ExactClass).unwrap() < 1e-10);
    let off = law.perturbed(1, 1.05);
    assert!(consistency_check(&off, 2, 0, 1, Mode::ExactClass).unwrap() > 1e-4);

    let ones = BoundaryLaw::new(vec![1.0], &Params::new(2, 5.0).unwrap()).unwrap();
    assert!(consistency_check(&ones, 2, 0, 1, Mode::ExactClass).unwrap() < 1e-12);
}

#[test]
fn shift_does_not_change_mixed_measure() {
    let law = x1_law();
    let ball = build_ball(2, 1).unwrap();
    let base = mixed_marginal(&ball, &law, Mode::ExactClass).unwrap();
    for m in 1..4 {
        let shifted = mixed_marginal(&ball, &law.cyclic_shift(m), Mode::ExactClass).unwrap();
        assert!(tv_distance(&base, &shifted).unwrap() < 1e-12);
    }
}

#[test]
fn root_edges_exchangeable() {
    let ball = build_ball(2, 0).unwrap();
    let t = mixed_marginal(&ball, &x1_law(), Mode::ExactClass).unwrap();
    let m0 = t.edge_marginal(0);
    for e in 1..3 {
        for (a, b) in m0.iter().zip(t.edge_marginal(e)) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
    }
}

#[test]
fn mirror_law_increments_symmetric() {
    let ball = build_ball(2, 0).unwrap();
    let t = mixed_marginal(&ball, &x1_law(), Mode::Truncated(12)).unwrap();
    let m = t.edge_marginal(0);
    let n = m.len();
    for i in 0..n / 2 {
        assert_abs_diff_eq!(m[i], m[n - 1 - i], epsilon = 1e-10);
    }
}

#[test]
fn q3_law_charges_every_class() {
    let p = Params::new(2, 6.0).unwrap();
    let y = 6.0 + 4.0 * 2f64.sqrt();
    let law = BoundaryLaw::new(vec![1.0, y, y], &p).unwrap();
    let t = mixed_marginal(&build_ball(2, 0).unwrap(), &law, Mode::ExactClass).unwrap();
    assert_abs_diff_eq!(t.total(), 1.0, epsilon = 1e-12);
    for e in 0..3 {
        assert!(t.edge_marginal(e).iter().all(|&v| v > 0.0));
    }
}

#[test]
fn constant_law_pinning_irrelevant() {
    let law = BoundaryLaw::new(vec![1.0], &Params::new(2, 5.0).unwrap()).unwrap();
    let ball = build_ball(2, 1).unwrap();
    let pinned = pinned_marginal(&ball, &law, 0, Mode::Truncated(2)).unwrap();
    let mixed = mixed_marginal(&ball, &law, Mode::Truncated(2)).unwrap();
    assert!(tv_distance(&pinned, &mixed).unwrap() < 1e-14);
}

#[test]
fn execution_modes_agree() {
    let law = x1_law();
    let ball = build_ball(2, 0).unwrap();
    let run =
        |exec| observed_marginal_with(&ball, &law, Pinning::Pinned(1), Mode::Truncated(8), 0, exec).unwrap();
    let (a, b) = (run(Execution::Sequential), run(Execution::Parallel));
    assert!(tv_distance(&a, &b).unwrap() < 1e-15);
}

#[test]
fn oversized_tables_rejected() {
    let ball = build_ball(2, 3).unwrap();
    match mixed_marginal(&ball, &x1_law(), Mode::ExactClass) {
        Err(Error::Oversized { .. }) => {}
        other => panic!("{other:?}"),
    }
    assert!(matches!(build_ball(2, 9), Err(Error::RadiusTooLarge { .. })));
}
