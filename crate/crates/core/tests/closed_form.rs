use nullx_core::closed_form::{find_w, frame_case1, frame_case2, helix_frame, is_nilpotent};
use nullx_core::dynamics::hamiltonian_k;
use nullx_core::oracle::{compare_frames, integrate_frame_on_grid, uniform_grid};
use nullx_core::verify::{maurer_cartan_residual, momentum_drift, null_residual, phi_derivative_residual};
use nullx_core::{
    Branch, ClosedForm, ClosedFormTag, Complex64, ComplexMat2, Error, FrameSample, Invariants, ModelParams, Potential,
    Spin,
};

const POS: ModelParams = ModelParams::new(0.0, Spin::Positive);

fn potential(g2: f64, g3: f64) -> Potential {
    Potential::new(Invariants::new(g2, g3), Branch::Auto).unwrap()
}

/// Closed-form and oracle tracks on `grid`, the oracle started at the
/// closed-form frame and stepped at 1e-3.
fn tracks(cf: &ClosedForm, grid: &[f64]) -> (Vec<FrameSample>, Vec<FrameSample>) {
    let closed: Vec<FrameSample> = grid.iter().map(|&s| cf.sample(s).unwrap()).collect();
    let oracle =
        integrate_frame_on_grid(cf.potential(), &cf.params(), grid, 1e-3, &closed[0].gamma_frame, false).unwrap();
    (closed, oracle)
}

fn pole_free_window(p: &Potential) -> (f64, f64) {
    p.sample_window(0.3, 2.5)
}

#[test]
fn rational_potential_selects_case_one() {
    let cf = ClosedForm::new(&potential(0.0, 0.0), &POS).unwrap();
    assert_eq!(cf.tag(), ClosedFormTag::CaseI);
    assert_eq!(cf.tag().as_str(), "CASE_I");
}

#[test]
fn case_one_frame_solves_the_frame_equation() {
    let cf = ClosedForm::new(&potential(0.0, 0.0), &POS).unwrap();
    for s in uniform_grid(0.5, 3.0, 60) {
        let r = maurer_cartan_residual(&cf, s, &POS).unwrap();
        assert!(r <= 1e-6, "s={s}: {r:e}");
    }
}

#[test]
fn case_one_frame_matches_the_oracle() {
    let cf = ClosedForm::new(&potential(0.0, 0.0), &POS).unwrap();
    let (closed, oracle) = tracks(&cf, &uniform_grid(0.5, 3.0, 101));
    let cmp = compare_frames(&oracle, &closed).unwrap();
    assert!(cmp.max_deviation <= 1e-6, "{:e}", cmp.max_deviation);
    assert!(cmp.variation <= 1e-6, "{:e}", cmp.variation);
}

#[test]
fn nilpotent_configuration_selects_case_two() {
    let p = potential(-4.0, 0.0);
    assert!(is_nilpotent(&p.invariants(), &POS));
    let cf = ClosedForm::new(&p, &POS).unwrap();
    assert_eq!(cf.tag(), ClosedFormTag::CaseII);
    assert!(frame_case1(&p, 1.0, &POS).is_err());
    assert!(frame_case2(&p, 1.0, &POS).is_ok());
    assert!(frame_case2(&potential(0.0, 0.0), 1.0, &POS).is_err());
}

#[test]
fn case_two_frame_solves_the_frame_equation_and_matches_the_oracle() {
    let p = potential(-4.0, 0.0);
    let cf = ClosedForm::new(&p, &POS).unwrap();
    let (lo, hi) = pole_free_window(&p);
    let grid = uniform_grid(lo, hi, 101);
    for &s in &grid {
        let r = maurer_cartan_residual(&cf, s, &POS).unwrap();
        assert!(r <= 1e-6, "s={s}: {r:e}");
    }
    let (closed, oracle) = tracks(&cf, &grid);
    let cmp = compare_frames(&oracle, &closed).unwrap();
    assert!(cmp.max_deviation <= 1e-6, "{:e}", cmp.max_deviation);
}

#[test]
fn closed_forms_agree_with_the_oracle_for_every_spin_and_multiplier() {
    for (g2, g3, branch) in
        [(4.0, 0.0, Branch::Wp3), (4.0, 0.0, Branch::Wp), (12.0, -8.0, Branch::Auto), (0.0, 4.0, Branch::Auto)]
    {
        let p = Potential::new(Invariants::new(g2, g3), branch).unwrap();
        let (lo, hi) = pole_free_window(&p);
        let grid = uniform_grid(lo, hi, 41);
        for m in [0.0, 1.0, -1.0, 3.0] {
            for eps in [Spin::Positive, Spin::Negative] {
                let params = ModelParams::new(m, eps);
                let cf = ClosedForm::new(&p, &params).unwrap();
                let (closed, oracle) = tracks(&cf, &grid);
                let cmp = compare_frames(&oracle, &closed).unwrap();
                assert!(cmp.max_deviation <= 1e-6, "{} {params:?}: {:e}", p.tag(), cmp.max_deviation);
                for &s in grid.iter().step_by(8) {
                    let r = maurer_cartan_residual(&cf, s, &params).unwrap();
                    assert!(r <= 1e-6, "{} {params:?} s={s}: {r:e}", p.tag());
                }
            }
        }
    }
}

#[test]
fn closed_form_points_lie_on_de_sitter_space_and_are_null() {
    for (g2, g3) in [(0.0, 0.0), (-4.0, 0.0), (4.0, 0.0)] {
        let p = potential(g2, g3);
        let cf = ClosedForm::new(&p, &POS).unwrap();
        let (lo, _) = pole_free_window(&p);
        let track: Vec<FrameSample> = uniform_grid(lo, lo + 1.0, 1001).iter().map(|&s| cf.sample(s).unwrap()).collect();
        for x in &track {
            assert!((x.point.minkowski_norm_sqr() - 1.0).abs() <= 1e-9, "{} s={}", p.tag(), x.s);
            assert!(x.det_drift() <= 1e-9, "{} s={}", p.tag(), x.s);
        }
        assert!(null_residual(&track) <= 1e-7, "{}", p.tag());
        assert!(momentum_drift(&track, &POS) <= 1e-6, "{}", p.tag());
    }
}

#[test]
fn momentum_map_of_the_closed_form_has_determinant_p_of_e() {
    let p = potential(4.0, 0.0);
    for params in [POS, ModelParams::new(3.0, Spin::Negative)] {
        let cf = ClosedForm::new(&p, &params).unwrap();
        let want = p.invariants().cubic(params.spectral_point());
        for s in uniform_grid(-1.0, 1.0, 11) {
            let phi = cf.momentum(s).unwrap();
            assert!((phi.det() - want).norm() <= 1e-9 * (1.0 + want.norm()));
        }
    }
}

#[test]
fn helix_frames_match_the_oracle() {
    for k0 in [0.0, 1.0, -2.0] {
        for eps in [Spin::Positive, Spin::Negative] {
            let params = ModelParams::new(0.0, eps);
            // a constant potential whose curvature is k0
            let p = Potential::constant(nullx_core::potential::h_from_k(k0, &params));
            let cf = ClosedForm::new(&p, &params).unwrap();
            assert_eq!(cf.tag(), ClosedFormTag::Helix);
            let (closed, oracle) = tracks(&cf, &uniform_grid(0.0, 1.0, 101));
            let cmp = compare_frames(&oracle, &closed).unwrap();
            assert!(cmp.max_deviation <= 1e-8, "k0={k0} {eps}: {:e}", cmp.max_deviation);
            assert!((closed[50].k - k0).abs() <= 1e-14);
        }
    }
}

#[test]
fn helix_frames_form_a_one_parameter_subgroup() {
    for k0 in [0.0, 1.0, -2.0] {
        for eps in [Spin::Positive, Spin::Negative] {
            let params = ModelParams::new(1.5, eps);
            assert!((helix_frame(k0, 0.0, &params) - ComplexMat2::IDENTITY).norm() <= 1e-15);
            for (s, t) in [(0.3, 0.7), (-1.1, 0.4), (2.0, -0.5), (1.25, 1.25)] {
                let lhs = helix_frame(k0, s + t, &params);
                let rhs = helix_frame(k0, s, &params) * helix_frame(k0, t, &params);
                assert!((lhs - rhs).norm() <= 1e-10, "k0={k0} {eps} s={s} t={t}");
            }
            // and the generator is H(k0)
            let d = (helix_frame(k0, 1e-5, &params) - helix_frame(k0, -1e-5, &params)) * (0.5e5);
            assert!((d - hamiltonian_k(k0, &params)).norm() <= 1e-8);
        }
    }
}

#[test]
fn third_kind_integrals_match_their_integrands() {
    let central = |cf: &ClosedForm, s: f64| {
        let step = 1e-5;
        let d = (cf.phi(s + step).unwrap() - cf.phi(s - step).unwrap()) / (2.0 * step);
        let want = cf.phi_integrand(s).unwrap();
        (d - want).norm() / (1.0 + want.norm())
    };
    for (p, tag) in [(potential(0.0, 0.0), ClosedFormTag::CaseI), (potential(-4.0, 0.0), ClosedFormTag::CaseII)] {
        let cf = ClosedForm::new(&p, &POS).unwrap();
        assert_eq!(cf.tag(), tag);
        let (lo, hi) = pole_free_window(&p);
        for s in uniform_grid(lo, hi, 50) {
            assert!(central(&cf, s) <= 1e-6, "{tag} s={s}");
            assert!(phi_derivative_residual(&cf, s).unwrap() <= 1e-6, "{tag} s={s}");
        }
    }
    // Case I on a lattice potential, crossing several periods of the continuation
    for params in [POS, ModelParams::new(-1.0, Spin::Negative)] {
        let cf = ClosedForm::new(&potential(4.0, 0.0), &params).unwrap();
        for s in uniform_grid(-4.0, 4.0, 81) {
            assert!(central(&cf, s) <= 1e-6, "s={s}");
        }
    }
}

#[test]
fn rational_third_kind_integral_has_its_elementary_form() {
    for params in [POS, ModelParams::new(2.0, Spin::Negative), ModelParams::new(-3.0, Spin::Positive)] {
        let cf = ClosedForm::new(&potential(0.0, 0.0), &params).unwrap();
        let w = cf.case().w.unwrap();
        for s in uniform_grid(0.5, 3.0, 26) {
            let s_c = Complex64::new(s, 0.0);
            let want = ((s_c - w) / (s_c + w)).ln() + 2.0 * s / w;
            let got = cf.phi(s).unwrap();
            assert!((got - want).norm() <= 1e-12 * (1.0 + want.norm()), "{params:?} s={s}: {got} vs {want}");
        }
    }
}

#[test]
fn w_is_the_unique_cell_point_with_the_right_value_and_slope() {
    for (g2, g3) in [(0.0, 0.0), (4.0, 0.0), (0.0, 4.0), (5.0, -2.0)] {
        let p = potential(g2, g3);
        for m in [0.0, 1.0, -2.0] {
            for eps in [Spin::Positive, Spin::Negative] {
                let params = ModelParams::new(m, eps);
                let w = find_w(&p, &params).unwrap();
                let e = params.spectral_point();
                let cf = ClosedForm::new(&p, &params).unwrap();
                let nu = cf.case().nu;
                let (pw, dpw) = p.weierstrass().wp(w).unwrap();
                assert!((pw - e).norm() <= 1e-9 * (1.0 + e.norm()));
                assert!((dpw - nu).norm() <= 1e-8 * (1.0 + nu.norm()));
                // the other preimage, −w, has the opposite slope
                let (_, dpm) = p.weierstrass().wp(-w).unwrap();
                assert!((dpm - nu).norm() > 1e-3 * (1.0 + nu.norm()));
                // ν is the principal root, so the eigenvalues of U are ±iν
                assert!(nu.re >= 0.0);
            }
        }
    }
}

#[test]
fn formal_third_case_has_no_frame() {
    let p = potential(0.0, 0.0);
    let cf = ClosedForm::formal_case_iii(&p, &POS).unwrap();
    assert_eq!(cf.tag(), ClosedFormTag::CaseIIIFormal);
    assert_eq!(cf.phi(2.0).unwrap(), Complex64::new(8.0 / 3.0, 0.0));
    assert!(matches!(cf.frame(2.0), Err(Error::CaseMismatch { .. })));
    assert!(ClosedForm::formal_case_iii(&potential(4.0, 0.0), &POS).is_err());
}
