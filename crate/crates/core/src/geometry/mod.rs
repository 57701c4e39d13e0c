//! Closest pairs between the hypothesis sets and the fixed-length Hoeffding
//! machinery.

mod closest;
mod hoeffding;
mod lemmas;
mod simplex;

pub use closest::{build_instance, closest_pair, ClosestPairResult, Direction, ProblemInstance};
pub use hoeffding::{
    check_hoeffding_vertex_inequality, hardest_pair, hoeffding_exponent_pair, hoeffding_objective, HoeffdingSolution,
};
pub use lemmas::{check_likelihood_ratio_bound, check_pythagorean, check_pythagorean_reverse};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defaults::SOLVER_TOL;
    use crate::prob::{ConvexSet, Distribution};
    use crate::{Error, Hypothesis};

    use crate::fixtures::{bern, interval_sets as interval_fixture};

    #[test]
    fn singleton_pair_is_forced() {
        let (p, q) = (ConvexSet::singleton(bern(0.2)), ConvexSet::singleton(bern(0.8)));
        let r = closest_pair(&p, &q, Direction::Forward, SOLVER_TOL).unwrap();
        assert_eq!(r.p_star, bern(0.2));
        assert_eq!(r.q_star, bern(0.8));
        assert!((r.divergence - 1.2).abs() < 1e-12);
    }

    #[test]
    fn interval_fixture_pairs() {
        let (p, q) = interval_fixture();
        let f = closest_pair(&p, &q, Direction::Forward, SOLVER_TOL).unwrap();
        assert!((f.divergence - 0.265148).abs() < 1e-4);
        assert!((f.p_star.prob(1) - 0.3).abs() < 1e-9);
        assert!((f.q_star.prob(1) - 0.6).abs() < 1e-9);
        let r = closest_pair(&p, &q, Direction::Reverse, SOLVER_TOL).unwrap();
        assert!((r.divergence - 0.277058).abs() < 1e-4);
        assert!(f.converged && r.converged);
    }

    #[test]
    fn objective_trace_is_monotone() {
        let (p, q) = interval_fixture();
        for dir in [Direction::Forward, Direction::Reverse] {
            let r = closest_pair(&p, &q, dir, SOLVER_TOL).unwrap();
            for w in r.objective_trace.windows(2) {
                assert!(w[1] <= w[0]);
            }
        }
    }

    #[test]
    fn instance_constants() {
        let (p, q) = interval_fixture();
        let inst = build_instance(&p, &q, SOLVER_TOL).unwrap();
        assert!((inst.c_fwd - 1.0).abs() < 1e-9);
        assert!((inst.c_rev - 1.0).abs() < 1e-9);

        let inst =
            build_instance(&ConvexSet::singleton(bern(0.2)), &ConvexSet::singleton(bern(0.8)), SOLVER_TOL).unwrap();
        assert!((inst.c_fwd - 2.0).abs() < 1e-12);
        assert!((inst.c_rev - 2.0).abs() < 1e-12);
    }

    #[test]
    fn identical_sets_overlap() {
        let u = ConvexSet::singleton(Distribution::uniform(3).unwrap());
        assert!(matches!(build_instance(&u, &u, SOLVER_TOL), Err(Error::SetsOverlap { .. })));
    }

    #[test]
    fn pythagorean_examples() {
        let (p, q) = interval_fixture();
        let inst = build_instance(&p, &q, SOLVER_TOL).unwrap();
        assert!(check_pythagorean(&inst, inst.p0()).unwrap().abs() < 1e-9);
        for v in p.vertices() {
            assert!(check_pythagorean(&inst, v).unwrap() >= -1e-9);
        }
        // (0.1*(-1) + 0.9*log2(0.7/0.4)) - D(Bern(0.3)||Bern(0.6))
        let expected = -0.1 + 0.9 * (0.7f64 / 0.4).log2() - (-0.3 + 0.7 * (0.7f64 / 0.4).log2());
        let slack = check_pythagorean(&inst, &bern(0.1)).unwrap();
        assert!((slack - expected).abs() < 1e-9);
        assert!((slack - 0.361471).abs() < 1e-5);
        assert!(check_pythagorean_reverse(&inst, inst.q1()).unwrap().abs() < 1e-9);
    }

    #[test]
    fn likelihood_ratio_examples() {
        let (p, q) = interval_fixture();
        let inst = build_instance(&p, &q, SOLVER_TOL).unwrap();
        // q = q0* = Bern(0.6) is vertex 0 of Q
        assert!((check_likelihood_ratio_bound(&inst, Hypothesis::H1, 0).unwrap() - 1.0).abs() < 1e-12);
        let v = check_likelihood_ratio_bound(&inst, Hypothesis::H1, 1).unwrap();
        assert!((v - (0.8 * 0.5 + 0.2 * 0.7 / 0.4)).abs() < 1e-9);
        assert!((v - 0.75).abs() < 1e-9);
        let v = check_likelihood_ratio_bound(&inst, Hypothesis::H0, 0).unwrap();
        assert!((v - 0.714286).abs() < 1e-6);
        assert!(check_likelihood_ratio_bound(&inst, Hypothesis::H0, 7).is_err());
    }

    #[test]
    fn hardest_pair_zero_floor_is_reverse_pair() {
        let (p, q) = interval_fixture();
        let inst = build_instance(&p, &q, SOLVER_TOL).unwrap();
        let sol = hardest_pair(&p, &q, 0.0, SOLVER_TOL).unwrap();
        assert!((sol.s_star - inst.d_rev()).abs() < 1e-9);
    }

    #[test]
    fn hardest_pair_vertex_inequalities_hold() {
        let (p, q) = interval_fixture();
        let sol = hardest_pair(&p, &q, 0.05, SOLVER_TOL).unwrap();
        for i in 0..2 {
            assert!(check_hoeffding_vertex_inequality(&sol, &q, Hypothesis::H1, i).unwrap() >= -1e-6);
            assert!(check_hoeffding_vertex_inequality(&sol, &p, Hypothesis::H0, i).unwrap() >= -1e-6);
        }
        // equality at q_h itself
        let at_qh = ConvexSet::singleton(sol.q_h.clone());
        assert!(check_hoeffding_vertex_inequality(&sol, &at_qh, Hypothesis::H1, 0).unwrap().abs() < 1e-9);
    }

    #[test]
    fn hardest_pair_above_forward_divergence_uses_forward_pair() {
        let (p, q) = interval_fixture();
        let sol = hardest_pair(&p, &q, 0.5, SOLVER_TOL).unwrap();
        assert_eq!(sol.s_star, 0.0);
        assert_eq!(sol.lambda_star, 0.0);
        assert!((sol.p_h.prob(1) - 0.3).abs() < 1e-9);
    }
}
