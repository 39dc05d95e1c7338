use proptest::prelude::*;
use squeeze_hpm::Interval;

fn interval() -> impl Strategy<Value = Interval> {
    (-10.0..10.0_f64, 0.0..5.0_f64).prop_map(|(lo, w)| Interval::new(lo, lo + w).unwrap())
}

fn point_in(iv: Interval, t: f64) -> f64 {
    iv.param_form(t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn arithmetic_contains_pointwise_results(
        a in interval(), b in interval(), s in 0.0..=1.0_f64, t in 0.0..=1.0_f64,
    ) {
        let (x, y) = (point_in(a, s), point_in(b, t));
        let tol = 1e-12;
        let holds = |iv: Interval, v: f64| iv.lo() - tol <= v && v <= iv.hi() + tol;
        prop_assert!(holds(a + b, x + y));
        prop_assert!(holds(a - b, x - y));
        prop_assert!(holds(a * b, x * y));
        if !b.contains_zero() {
            let q = a.checked_div(b).unwrap();
            prop_assert!(q.lo() - 1e-9 * q.lo().abs().max(1.0) <= x / y
                && x / y <= q.hi() + 1e-9 * q.hi().abs().max(1.0));
        } else {
            prop_assert!(a.checked_div(b).is_err());
        }
    }

    #[test]
    fn addition_widths_add(a in interval(), b in interval()) {
        prop_assert!(((a + b).width() - (a.width() + b.width())).abs() <= 1e-12);
    }

    #[test]
    fn crisp_operands_reduce_to_real_arithmetic(x in -10.0..10.0_f64, y in 0.5..10.0_f64) {
        let (cx, cy) = (Interval::crisp(x), Interval::crisp(y));
        prop_assert_eq!(cx + cy, Interval::crisp(x + y));
        prop_assert_eq!(cx - cy, Interval::crisp(x - y));
        prop_assert_eq!(cx * cy, Interval::crisp(x * y));
        prop_assert_eq!(cx.checked_div(cy).unwrap(), Interval::crisp(x / y));
    }

    #[test]
    fn param_form_sweeps_the_interval(a in interval(), s in 0.0..=1.0_f64, t in 0.0..=1.0_f64) {
        prop_assert_eq!(a.param_form(0.0).unwrap(), a.lo());
        prop_assert_eq!(a.param_form(1.0).unwrap(), a.hi());
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        let (u, v) = (a.param_form(lo).unwrap(), a.param_form(hi).unwrap());
        prop_assert!(u <= v);
        prop_assert!(a.contains(u) && a.contains(v));
        prop_assert!(a.contains(a.midpoint()));
    }
}
