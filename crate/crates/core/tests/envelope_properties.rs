use squeeze_hpm::flow::{evaluate, expand_with, uniform_grid};
use squeeze_hpm::sweep::{
    band_width, envelope, envelope_from_draws, sample_box, sensitivity_report, UncertainParam,
};
use squeeze_hpm::{Field, FlowParams, HpmOptions, Pairing, UncertainSpec};

fn spec(params: &[UncertainParam], alpha_samples: usize) -> UncertainSpec {
    UncertainSpec {
        alpha_samples,
        eta_points: 41,
        ..UncertainSpec::crisp(FlowParams::default())
    }
    .with_relative_spread(params, 0.05)
    .unwrap()
}

#[test]
fn nested_alpha_grids_give_nested_bands() {
    let opts = HpmOptions::default();
    let all = [UncertainParam::S, UncertainParam::A, UncertainParam::M];
    // {0, 1/2, 1} ⊂ {0, 1/4, 1/2, 3/4, 1}
    let coarse = envelope(&spec(&all, 3), &opts).unwrap();
    let fine = envelope(&spec(&all, 5), &opts).unwrap();
    for field in Field::ALL {
        let (c, f) = (coarse.band(field), fine.band(field));
        for i in 0..c.lower.len() {
            assert!(f.lower[i] <= c.lower[i] && c.upper[i] <= f.upper[i], "{field} at {i}");
        }
    }
}

#[test]
fn subset_of_draws_gives_a_sub_band() {
    let opts = HpmOptions::default();
    let draws = sample_box(&spec(&[UncertainParam::S, UncertainParam::M], 4)).unwrap();
    let grid = uniform_grid(21).unwrap();
    let small = envelope_from_draws(&draws[..7], &grid, &opts).unwrap();
    let large = envelope_from_draws(&draws, &grid, &opts).unwrap();
    for field in Field::ALL {
        let (s, l) = (small.band(field), large.band(field));
        assert!(l.contains(&s.lower, 0.0) && l.contains(&s.upper, 0.0));
    }
}

#[test]
fn band_contains_every_corner_and_the_midpoint() {
    let opts = HpmOptions::default();
    let sp = spec(&[UncertainParam::A, UncertainParam::M], 5);
    let band = envelope(&sp, &opts).unwrap();
    let grid = uniform_grid(sp.eta_points).unwrap();
    let a = sp.interval(UncertainParam::A).unwrap();
    let m = sp.interval(UncertainParam::M).unwrap();
    let mut probes = vec![FlowParams { a: a.midpoint(), m: m.midpoint(), ..sp.base }];
    for av in [a.lo(), a.hi()] {
        for mv in [m.lo(), m.hi()] {
            probes.push(FlowParams { a: av, m: mv, ..sp.base });
        }
    }
    for p in probes {
        let t = evaluate(&expand_with(&p, &opts).unwrap(), &grid).unwrap();
        assert!(band.fprime.contains(&t.fprime, 1e-14));
        assert!(band.theta.contains(&t.theta, 1e-14));
        assert!(band.phi.contains(&t.phi, 1e-14));
    }
}

#[test]
fn widths_scale_linearly_with_spread() {
    let opts = HpmOptions::default();
    let full = sensitivity_report(&FlowParams::default(), 0.05, 5, 51, &opts).unwrap();
    let half = sensitivity_report(&FlowParams::default(), 0.025, 5, 51, &opts).unwrap();
    for (f, h) in full.pairings.iter().zip(&half.pairings) {
        for field in Field::RANKED {
            let ratio = h.get(field).integral_width / f.get(field).integral_width;
            assert!((ratio - 0.5).abs() <= 0.1, "{} {field}: {ratio}", f.pairing);
        }
    }
}

#[test]
fn report_is_independent_of_evaluation_order() {
    let opts = HpmOptions::default();
    let a = sensitivity_report(&FlowParams::default(), 0.05, 3, 21, &opts).unwrap();
    let b = sensitivity_report(&FlowParams::default(), 0.05, 3, 21, &opts).unwrap();
    assert_eq!(a, b);
    // a pairing's widths do not depend on which pairings ran before it
    for pw in &a.pairings {
        let sp = UncertainSpec {
            alpha_samples: 3,
            eta_points: 21,
            ..UncertainSpec::crisp(FlowParams::default())
        }
        .with_relative_spread(&pw.pairing.params(), 0.05)
        .unwrap();
        let band = envelope(&sp, &opts).unwrap();
        assert_eq!(band_width(&band, Field::Theta), pw.theta);
    }
}

#[test]
fn default_sm_band_widths_are_pinned() {
    let band = envelope(&spec(&[UncertainParam::S, UncertainParam::M], 5), &HpmOptions::default()).unwrap();
    let sp = UncertainSpec {
        eta_points: 101,
        ..spec(&[UncertainParam::S, UncertainParam::M], 5)
    };
    let band101 = envelope(&sp, &HpmOptions::default()).unwrap();
    assert_eq!(band.draws, 25);
    let close = |x: f64, pin: f64| (x - pin).abs() <= 1e-6 * pin;
    let w = |f| band_width(&band101, f);
    assert!(close(w(Field::Fprime).integral_width, 0.003_089_435_411_945_816));
    assert!(close(w(Field::Fprime).max_width, 0.005_581_342_186_834_148));
    assert!(close(w(Field::Theta).integral_width, 0.008_888_462_248_628_647));
    assert!(close(w(Field::Phi).integral_width, 0.001_400_779_735_605_368_3));
}

#[test]
fn default_ranking_for_temperature_and_concentration() {
    let rep = sensitivity_report(&FlowParams::default(), 0.05, 5, 101, &HpmOptions::default()).unwrap();
    let top = |field| rep.rankings.iter().find(|r| r.field == field).unwrap().order[0];
    assert_eq!(top(Field::Theta), Pairing::SA);
    assert_eq!(top(Field::Phi), Pairing::SA);
    // velocity: S,A edges out A,M at these bases, so the flag reports disagreement
    assert_eq!(top(Field::Fprime), Pairing::SA);
    assert!(!rep.degenerate);
}
