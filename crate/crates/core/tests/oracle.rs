use nullx_core::oracle::{integrate_frame, integrate_reduced_el, uniform_grid, IntegratorConfig};
use nullx_core::potential::invariants_from_jet;
use nullx_core::verify::{momentum_drift, null_residual};
use nullx_core::{Branch, ClosedForm, ComplexMat2, Error, Invariants, ModelParams, Potential, Spin};

fn potential(g2: f64, g3: f64) -> Potential {
    Potential::new(Invariants::new(g2, g3), Branch::Auto).unwrap()
}

/// Three potentials covering negative discriminant, zero discriminant and
/// the rational case, each with a starting parameter away from poles.
fn conservation_cases() -> Vec<(Potential, f64)> {
    vec![(potential(4.0, 0.0), -0.5), (potential(12.0, -8.0), 0.0), (potential(0.0, 0.0), 1.0)]
}

fn endpoint(p: &Potential, params: &ModelParams, step: f64) -> ComplexMat2 {
    let gamma0 = ClosedForm::new(p, params).unwrap().frame(1.0).unwrap();
    integrate_frame(p, params, &IntegratorConfig::new(step, 1.0, 2.0), &gamma0).unwrap().last().unwrap().gamma_frame
}

#[test]
fn rk4_converges_at_fourth_order() {
    // successive differences E(h) − E(h/2) shrink like h⁴; unlike errors
    // against the closed form they do not bottom out at its accuracy
    let params = ModelParams::new(0.0, Spin::Positive);
    for p in [potential(0.0, 0.0), Potential::new(Invariants::new(4.0, 0.0), Branch::Wp).unwrap()] {
        let ends: Vec<ComplexMat2> = [0.04, 0.02, 0.01, 0.005].iter().map(|&h| endpoint(&p, &params, h)).collect();
        let diffs: Vec<f64> = ends.windows(2).map(|w| (w[0] - w[1]).norm()).collect();
        // the h⁵ term is still visible at these steps, so the order is
        // estimated across two halvings rather than from one ratio
        let order = (diffs[0] / diffs[2]).log2() / 2.0;
        assert!((3.5..5.0).contains(&order), "{}: {diffs:?}", p.tag());
    }
}

#[test]
fn rk4_agrees_with_the_closed_form_at_small_steps() {
    let params = ModelParams::new(0.0, Spin::Positive);
    let p = potential(0.0, 0.0);
    let want = ClosedForm::new(&p, &params).unwrap().frame(2.0).unwrap();
    assert!((endpoint(&p, &params, 0.01) - want).norm() <= 1e-9);
}

#[test]
fn conservation_along_unit_length_trajectories() {
    let gamma0 = ComplexMat2::from_real(2.0, 1.0, 3.0, 2.0);
    for (p, s0) in conservation_cases() {
        for m in [0.0, 1.0, -1.0, 3.0] {
            for eps in [Spin::Positive, Spin::Negative] {
                let params = ModelParams::new(m, eps);
                let track = integrate_frame(&p, &params, &IntegratorConfig::new(1e-3, s0, s0 + 1.0), &gamma0).unwrap();
                assert_eq!(track.len(), 1001);
                let det = track.iter().map(|x| x.det_drift()).fold(0.0, f64::max);
                assert!(det <= 1e-9, "{} {params:?}: det drift {det:e}", p.tag());
                let mom = momentum_drift(&track, &params);
                assert!(mom <= 1e-6, "{} {params:?}: momentum drift {mom:e}", p.tag());
                let null = null_residual(&track);
                assert!(null <= 1e-7, "{} {params:?}: null residual {null:e}", p.tag());
            }
        }
    }
}

#[test]
fn renormalization_pins_the_determinant() {
    let p = potential(4.0, 0.0);
    let params = ModelParams::new(1.0, Spin::Negative);
    let mut cfg = IntegratorConfig::new(5e-2, -2.0, 2.0);
    cfg.renormalize = true;
    let track = integrate_frame(&p, &params, &cfg, &ComplexMat2::IDENTITY).unwrap();
    for x in &track {
        assert!(x.det_drift() <= 1e-12, "s={}: {:e}", x.s, x.det_drift());
    }
}

#[test]
fn non_unimodular_start_is_rejected() {
    let p = potential(4.0, 0.0);
    let params = ModelParams::new(0.0, Spin::Positive);
    let bad = ComplexMat2::from_real(2.0, 0.0, 0.0, 1.0);
    assert!(integrate_frame(&p, &params, &IntegratorConfig::new(1e-2, 0.0, 1.0), &bad).is_err());
    assert!(matches!(
        integrate_frame(&p, &params, &IntegratorConfig::new(-1e-2, 0.0, 1.0), &ComplexMat2::IDENTITY),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn reduced_equation_reproduces_the_potentials() {
    for (p, s0) in conservation_cases() {
        let inv = p.invariants();
        let jet0 = p.eval(s0).unwrap();
        let track = integrate_reduced_el(&jet0, &IntegratorConfig::new(1e-3, s0, s0 + 1.0)).unwrap();
        for x in &track {
            let want = p.eval(x.s).unwrap();
            let scale = 1.0 + want.h.abs() + want.h1.abs();
            assert!((x.jet.h - want.h).abs() <= 1e-8 * scale, "{} s={}", p.tag(), x.s);
            assert!((x.jet.h1 - want.h1).abs() <= 1e-7 * scale, "{} s={}", p.tag(), x.s);
            let got = invariants_from_jet(&x.jet);
            let scale = 1.0 + x.jet.h.abs().powi(3) + x.jet.h1 * x.jet.h1;
            assert!((got.g2 - inv.g2).abs() <= 1e-7 * scale, "{} s={}", p.tag(), x.s);
            assert!((got.g3 - inv.g3).abs() <= 1e-7 * scale, "{} s={}", p.tag(), x.s);
        }
    }
}

#[test]
fn reduced_equation_reports_blow_up() {
    // the rational potential reaches its pole at s = 0
    let p = potential(0.0, 0.0);
    let jet0 = p.eval(-1.0 + 2.0).unwrap();
    let mirrored = nullx_core::Jet3::new(jet0.h, -jet0.h1, jet0.h2);
    // h(s) = (s − 2)⁻² from s = 1 runs into s = 2
    let r = integrate_reduced_el(&mirrored, &IntegratorConfig::new(1e-3, 1.0, 3.0));
    assert!(matches!(r, Err(Error::BlowUp { .. })), "{r:?}");
}

#[test]
fn uniform_grids_are_exact_at_both_ends() {
    let g = uniform_grid(-0.3, 2.7, 7);
    assert_eq!(g.first(), Some(&-0.3));
    assert_eq!(g.last(), Some(&2.7));
    assert!(g.windows(2).all(|w| ((w[1] - w[0]) - 0.5).abs() < 1e-15));
}
