//! Property tests for the closed form against the series oracle, the
//! hand-transcribed low-order formulas, and structural identities.

use ddm_core::{
    cumulative_stage_ends, dividend_at, implied_return, partial_sum, sensitivity,
    value_closed_form, value_closed_form_d0, value_series, DiscountContext, DividendSchedule,
    OracleConfig, Parameter, SolveConfig,
};
use proptest::prelude::*;

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

#[derive(Debug, Clone)]
struct Case {
    d0: f64,
    stages: Vec<(f64, u32)>,
    terminal: f64,
    r: f64,
}

impl Case {
    fn schedule(&self) -> DividendSchedule {
        DividendSchedule::from_pairs(self.d0, &self.stages, self.terminal).unwrap()
    }

    fn ctx(&self) -> DiscountContext {
        DiscountContext::new(self.r).unwrap()
    }

    fn value(&self) -> f64 {
        value_closed_form(&self.schedule(), &self.ctx())
            .unwrap()
            .present_value
    }
}

/// N ≤ 6, T ≤ 30, g ∈ [−0.5, 0.5], r ∈ (0, 0.5], g_{N+1} ≤ r − 0.005, D₀ ∈ (0, 100].
fn valid_case(max_stages: usize) -> impl Strategy<Value = Case> {
    (
        0.001f64..=100.0,
        prop::collection::vec((-0.5f64..=0.5, 0u32..=30), 0..=max_stages),
        0.0101f64..=0.5,
        0.0f64..1.0,
    )
        .prop_map(|(d0, stages, r, u)| {
            // terminal growth spread over [-0.5, r - 0.005]
            let hi = r - 0.005;
            let terminal = -0.5 + u * (hi + 0.5);
            Case {
                d0,
                stages,
                terminal,
                r,
            }
        })
}

/// Same as `valid_case` with every stage growth kept 1e-3 away from r, where
/// the hand-written 0/0-prone quotients below stay well conditioned.
fn off_diagonal_case(stages: usize) -> impl Strategy<Value = Case> {
    valid_case(stages)
        .prop_filter("exact stage count", move |c| c.stages.len() == stages)
        .prop_filter("stage growth near r", |c| {
            c.stages.iter().all(|&(g, _)| (g - c.r).abs() > 1e-3)
        })
}

fn powt(x: f64, t: u32) -> f64 {
    x.powi(t as i32)
}

fn example_1(c: &Case) -> f64 {
    let (g1, t) = c.stages[0];
    let (g2, r, d0) = (c.terminal, c.r, c.d0);
    let d1 = d0 * (1.0 + g1);
    let d_t1 = d0 * powt(1.0 + g1, t) * (1.0 + g2);
    d1 / (r - g1) * (1.0 - powt((1.0 + g1) / (1.0 + r), t)) + d_t1 / (powt(1.0 + r, t) * (r - g2))
}

fn example_2(c: &Case) -> f64 {
    let (g1, t1) = c.stages[0];
    let (g2, t2) = c.stages[1];
    let (g3, r, d0) = (c.terminal, c.r, c.d0);
    let a1 = 1.0 - powt((1.0 + g1) / (1.0 + r), t1);
    let a2 = 1.0 - powt((1.0 + g2) / (1.0 + r), t2);
    let d_st0_1 = d0 * (1.0 + g1);
    let d_st1_1 = d0 * powt(1.0 + g1, t1) * (1.0 + g2);
    let d_st2_1 = d0 * powt(1.0 + g1, t1) * powt(1.0 + g2, t2) * (1.0 + g3);
    d_st0_1 / (r - g1) * a1
        + d_st1_1 / (powt(1.0 + r, t1) * (r - g2)) * a2
        + d_st2_1 / (powt(1.0 + r, t1 + t2) * (r - g3))
}

fn example_3(c: &Case) -> f64 {
    let (g1, t1) = c.stages[0];
    let (g2, t2) = c.stages[1];
    let (g3, t3) = c.stages[2];
    let (g4, r, d0) = (c.terminal, c.r, c.d0);
    let a = |g: f64, t: u32| 1.0 - powt((1.0 + g) / (1.0 + r), t);
    let d_st0_1 = d0 * (1.0 + g1);
    let d_st1_1 = d0 * powt(1.0 + g1, t1) * (1.0 + g2);
    let d_st2_1 = d0 * powt(1.0 + g1, t1) * powt(1.0 + g2, t2) * (1.0 + g3);
    let d_st3_1 = d0 * powt(1.0 + g1, t1) * powt(1.0 + g2, t2) * powt(1.0 + g3, t3) * (1.0 + g4);
    d_st0_1 / (r - g1) * a(g1, t1)
        + d_st1_1 / (powt(1.0 + r, t1) * (r - g2)) * a(g2, t2)
        + d_st2_1 / (powt(1.0 + r, t1 + t2) * (r - g3)) * a(g3, t3)
        + d_st3_1 / (powt(1.0 + r, t1 + t2 + t3) * (r - g4))
}

/// Fraction of P₀ carried by stage `k` (zero-based) and everything after it;
/// `k == N` selects the perpetuity alone.
fn affected_share(c: &Case, k: usize) -> f64 {
    let v = value_closed_form(&c.schedule(), &c.ctx()).unwrap();
    let later: f64 = v.stage_terms[k..].iter().sum::<f64>() + v.terminal_term;
    later / v.present_value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closed_form_matches_series(c in valid_case(6)) {
        let p = c.value();
        let oracle = value_series(&c.schedule(), &c.ctx(), &OracleConfig::default()).unwrap();
        prop_assert!((p - oracle).abs() <= 1e-8f64.max(1e-10 * p), "{p} vs {oracle}");
    }

    #[test]
    fn both_closed_form_paths_agree(c in valid_case(6)) {
        let a = value_closed_form(&c.schedule(), &c.ctx()).unwrap();
        let b = value_closed_form_d0(&c.schedule(), &c.ctx()).unwrap();
        prop_assert!(rel_diff(a.present_value, b.present_value) <= 1e-12);
    }

    #[test]
    fn terms_add_up(c in valid_case(6)) {
        let v = value_closed_form(&c.schedule(), &c.ctx()).unwrap();
        prop_assert_eq!(v.stage_terms.len(), c.stages.len());
        let total: f64 = v.stage_terms.iter().sum::<f64>() + v.terminal_term;
        prop_assert!(rel_diff(total, v.present_value) <= 1e-12);
        prop_assert!(v.stage_terms.iter().all(|&t| t >= 0.0) && v.terminal_term > 0.0);
    }

    #[test]
    fn value_is_linear_in_initial_dividend(c in valid_case(6), scale in 0.01f64..100.0) {
        let scaled = Case { d0: c.d0 * scale, ..c.clone() };
        prop_assert!(rel_diff(scaled.value(), scale * c.value()) <= 1e-12);
    }

    #[test]
    fn zero_duration_stage_is_a_no_op(c in valid_case(5), at in 0usize..6, g in -0.5f64..0.5) {
        let at = at.min(c.stages.len());
        let mut stages = c.stages.clone();
        stages.insert(at, (g, 0));
        let padded = Case { stages, ..c.clone() };
        prop_assert!(rel_diff(padded.value(), c.value()) <= 1e-12);
        let (a, b) = (c.schedule(), padded.schedule());
        for t in 0..=a.horizon() + 3 {
            prop_assert_eq!(dividend_at(&a, t), dividend_at(&b, t));
        }
    }

    #[test]
    fn splitting_a_stage_changes_nothing(c in valid_case(5), which in 0usize..5, cut in 0.0f64..1.0) {
        prop_assume!(!c.stages.is_empty());
        let which = which % c.stages.len();
        let (g, t) = c.stages[which];
        let first = (cut * f64::from(t)).floor() as u32;
        let mut stages = c.stages.clone();
        stages[which] = (g, first);
        stages.insert(which + 1, (g, t - first));
        let split = Case { stages, ..c.clone() };
        prop_assert!(rel_diff(split.value(), c.value()) <= 1e-12);
    }

    #[test]
    fn gordon_degeneration(d0 in 0.01f64..100.0, r in 0.01f64..0.5, u in 0.0f64..1.0) {
        let g = -0.5 + u * (r - 0.005 + 0.5);
        let c = Case { d0, stages: vec![], terminal: g, r };
        prop_assert_eq!(c.value(), d0 * (1.0 + g) / (r - g));
    }

    #[test]
    fn one_stage_formula(c in off_diagonal_case(1)) {
        prop_assert!(rel_diff(c.value(), example_1(&c)) <= 1e-12);
    }

    #[test]
    fn two_stage_formula(c in off_diagonal_case(2)) {
        prop_assert!(rel_diff(c.value(), example_2(&c)) <= 1e-12);
    }

    #[test]
    fn three_stage_formula(c in off_diagonal_case(3)) {
        prop_assert!(rel_diff(c.value(), example_3(&c)) <= 1e-12);
    }

    #[test]
    fn stage_ends_are_running_sums(c in valid_case(6)) {
        let ends = cumulative_stage_ends(&c.schedule());
        prop_assert_eq!(ends[0], 0);
        for (k, &(_, t)) in c.stages.iter().enumerate() {
            prop_assert_eq!(ends[k + 1], ends[k] + u64::from(t));
        }
    }

    #[test]
    fn dividends_are_positive(c in valid_case(6), t in 0u64..250) {
        prop_assert!(dividend_at(&c.schedule(), t) > 0.0);
    }

    #[test]
    fn truncated_series_grows_with_horizon(c in valid_case(4)) {
        let (s, ctx) = (c.schedule(), c.ctx());
        let sums: Vec<f64> = (0..80).map(|h| partial_sum(&s, &ctx, h)).collect();
        prop_assert!(sums.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn value_decreases_in_required_return(c in valid_case(4), dr in 0.001f64..0.1) {
        let higher = Case { r: c.r + dr, ..c.clone() };
        prop_assert!(higher.value() < c.value());
    }

    #[test]
    fn value_increases_in_every_growth(c in valid_case(4), k in 0usize..5, dg in 0.001f64..0.05) {
        let mut up = c.clone();
        let k = k.min(c.stages.len());
        if k < c.stages.len() {
            prop_assume!(c.stages[k].1 > 0);
            up.stages[k].0 += dg;
        } else {
            prop_assume!(c.terminal + dg < c.r);
            up.terminal += dg;
        }
        prop_assert!(up.value() >= c.value());
        // Strictness is only observable when the affected terms are not lost
        // to rounding against the rest of P₀.
        if affected_share(&c, k) > 1e-9 {
            prop_assert!(up.value() > c.value());
        }
    }

    #[test]
    fn implied_return_round_trip(c in valid_case(6), v in 0.0f64..1.0) {
        let r = (c.terminal + 0.01) + v * (0.5 - (c.terminal + 0.01));
        let priced = Case { r, ..c.clone() };
        let s = c.schedule();
        let cfg = SolveConfig::for_schedule(&s);
        let sol = implied_return(&s, priced.value(), &cfg).unwrap();
        prop_assert!((sol.rate - r).abs() <= 1e-6, "{} vs {}", sol.rate, r);
        prop_assert!(sol.iterations <= cfg.iteration_bound() + 2);
    }

    #[test]
    fn sensitivity_signs(c in valid_case(3)) {
        let (s, ctx) = (c.schedule(), c.ctx());
        let bump = 1e-4;
        let d = |p| sensitivity(&s, &ctx, p, bump).map(|rep| rep.central_difference);
        prop_assert!(d(Parameter::InitialDividend).unwrap() > 0.0);
        prop_assert!(d(Parameter::RequiredReturn).unwrap() < 0.0);
        for (k, &(_, t)) in c.stages.iter().enumerate() {
            if t > 0 && affected_share(&c, k) > 1e-6 {
                prop_assert!(d(Parameter::StageGrowth(k)).unwrap() > 0.0);
            }
        }
        if c.terminal + bump < c.r && affected_share(&c, c.stages.len()) > 1e-6 {
            prop_assert!(d(Parameter::TerminalGrowth).unwrap() > 0.0);
        }
    }

    #[test]
    fn d0_sensitivity_is_exact_ratio(c in valid_case(6), bump in 1e-4f64..1e-2) {
        prop_assume!(bump < c.d0);
        let rep = sensitivity(&c.schedule(), &c.ctx(), Parameter::InitialDividend, bump).unwrap();
        prop_assert!(rel_diff(rep.central_difference, c.value() / c.d0) <= 1e-9);
    }
}

#[test]
fn stage_at_required_return_matches_series() {
    for &(g, t) in &[(0.09, 5u32), (0.09, 30), (0.09, 1)] {
        let s = DividendSchedule::from_pairs(2.0, &[(0.04, 3), (g, t), (0.2, 2)], 0.03).unwrap();
        let ctx = DiscountContext::new(0.09).unwrap();
        let p = value_closed_form(&s, &ctx).unwrap().present_value;
        let oracle = value_series(&s, &ctx, &OracleConfig::default()).unwrap();
        assert!((p - oracle).abs() <= 1e-9, "{p} vs {oracle}");
    }
}
