use lsq3::{estimate_power, lsq3_step, PowerBounds};
use proptest::prelude::*;

// Closed forms of the step with N substituted and simplified by hand.
fn step_n1(x: f64, ym: f64, y0: f64, yp: f64, d: f64) -> f64 {
    x - 2.0 * d * (ym + y0 + yp) / (3.0 * (yp - ym))
}

fn step_n2(x: f64, ym: f64, y0: f64, yp: f64, d: f64) -> f64 {
    x - d * (ym + 2.0 * y0 + yp) / (yp - ym)
}

fn step_n3(x: f64, ym: f64, y0: f64, yp: f64, d: f64) -> f64 {
    x - 2.0 * d * (2.0 * ym + 5.0 * y0 + 2.0 * yp) / (3.0 * (yp - ym))
}

fn close(a: f64, b: f64, x: f64) -> bool {
    // relative to the size of the correction, not of x, so cancellation in
    // x - correction does not hide a wrong correction
    let scale = a.abs().max(b.abs()).max((a - x).abs()).max((b - x).abs());
    (a - b).abs() <= 1e-12 * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn general_step_matches_closed_forms(
        x in -100.0f64..100.0,
        ym in -1e3f64..1e3,
        y0 in -1e3f64..1e3,
        yp in -1e3f64..1e3,
        d in 1e-6f64..1.0,
    ) {
        prop_assume!((yp - ym).abs() > 1e-6 * ym.abs().max(yp.abs()).max(1e-300));
        let forms: [(f64, fn(f64, f64, f64, f64, f64) -> f64); 3] =
            [(1.0, step_n1), (2.0, step_n2), (3.0, step_n3)];
        for (n, form) in forms {
            let got = lsq3_step(x, ym, y0, yp, d, n).unwrap();
            let want = form(x, ym, y0, yp, d);
            prop_assert!(close(got, want, x), "N={n}: {got} vs {want}");
        }
    }

    #[test]
    fn power_stays_in_bounds(
        ym in -1e6f64..1e6,
        y0 in -1e6f64..1e6,
        yp in -1e6f64..1e6,
        d in 1e-12f64..1.0,
    ) {
        let b = PowerBounds::default();
        let n = estimate_power(ym, y0, yp, d, &b);
        prop_assert!(n >= b.lo && n <= b.hi);
        prop_assert!(n.abs() >= b.min_abs);
    }

    #[test]
    fn quadratics_give_two(
        a in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0],
        root in -5.0f64..5.0,
        off in prop_oneof![-3.0f64..-0.01, 0.01f64..3.0],
        // below 0.01 the second difference of values this far from the root
        // carries rounding error above 1e-9 relative
        d in 0.01f64..=0.5,
    ) {
        let f = |x: f64| a * (x - root) * (x - root);
        let x = root + off;
        let n = estimate_power(f(x - d), f(x), f(x + d), d, &PowerBounds::default());
        prop_assert!((n - 2.0).abs() < 1e-9, "N = {n}");
    }

    #[test]
    fn cubes_approach_three(
        root in -5.0f64..5.0,
        off in prop_oneof![-5.0f64..-0.01, 0.01f64..5.0],
    ) {
        let d = 1e-4;
        let f = |x: f64| (x - root).powi(3);
        let x = root + off;
        let n = estimate_power(f(x - d), f(x), f(x + d), d, &PowerBounds::default());
        prop_assert!((n - 3.0).abs() < 1e-3, "N = {n}");
    }

    #[test]
    fn lines_give_exactly_one(
        a in prop_oneof![-64i32..-1, 1i32..64],
        c in -64i32..64,
        x in -256i32..256,
        e in 1i32..12,
    ) {
        // integer lines at dyadic points: the second difference is exactly 0
        let (a, c, x, d) = (a as f64, c as f64, x as f64 / 8.0, 2f64.powi(-e));
        let f = |t: f64| a * t + c;
        prop_assert_eq!(estimate_power(f(x - d), f(x), f(x + d), d, &PowerBounds::default()), 1.0);
    }
}

#[test]
fn one_step_solves_a_line() {
    // y = 3x - 6 sampled around 5 with δ = 0.25: every value is exact
    let f = |x: f64| 3.0 * x - 6.0;
    let (x, d) = (5.0, 0.25);
    assert_eq!(lsq3_step(x, f(x - d), f(x), f(x + d), d, 1.0).unwrap(), 2.0);
}

#[test]
fn one_step_is_close_on_arbitrary_lines() {
    let f = |x: f64| 0.7 * x + 0.3;
    let (x, d) = (1.9, 0.1);
    let r = -0.3 / 0.7;
    let got = lsq3_step(x, f(x - d), f(x), f(x + d), d, 1.0).unwrap();
    assert!((got - r).abs() < 1e-13, "{got}");
}
