//! Full bound reports on small instances, checked against hand-computed
//! values and cross-checked with the exact spectrum enumeration.

use elmkit_aqc::{
    min_interpolated_gap, runtime_bounds, Epsilon, InitKind, InterpolationProblem,
};
use elmkit_core::{
    enumerate_spectrum, EnumerateOptions, EquationSystem, Fraction, Hamiltonian, SpectrumReport,
};

const TOY: &str = "x1 + x2 = x3 + 1\nx1 + x1*x2 = 2*x2*x3 + x2 + 1\n";

fn hamiltonian(text: &str) -> Hamiltonian {
    EquationSystem::parse(text)
        .unwrap()
        .to_hamiltonian(None)
        .unwrap()
}

fn spectrum(h: &Hamiltonian) -> SpectrumReport {
    enumerate_spectrum(h, &EnumerateOptions::default()).unwrap()
}

#[test]
fn toy_loose_bound_is_exactly_ten_r() {
    // The toy landscape has width 17 and gap 1, so R = 289 and
    // R/0.1 = 2890 — exactly, which plain floating point would miss.
    let h = hamiltonian(TOY);
    let report = runtime_bounds(
        &InterpolationProblem::new(h.clone(), Epsilon::parse("0.1").unwrap()),
        &spectrum(&h),
    )
    .unwrap();
    assert_eq!(report.loose_bound_exact, Fraction { num: 2890, den: 1 });
    assert_eq!(report.loose_bound, 2890.0);
    assert_eq!(report.final_gap, 1);
    assert_eq!(report.qubits, 3);
    assert!(!report.degenerate_ground);
    assert!(report.min_gap <= 1.0 + 1e-9);
    assert!((report.min_gap_argmin - 1.0).abs() <= 1.0);
}

#[test]
fn norm_checks_hold_on_every_driver() {
    let h = hamiltonian(TOY);
    let spec = spectrum(&h);
    let eps = Epsilon::parse("0.1").unwrap();
    for init in [
        InitKind::TransverseField { scale: 1.0 },
        InitKind::TransverseField { scale: 2.5 },
        InitKind::Zero,
    ] {
        let mut p = InterpolationProblem::new(h.clone(), eps);
        p.h_init = init;
        let report = runtime_bounds(&p, &spec).unwrap();
        assert!(report.weyl_check.triangle_holds);
        // Reverse triangle inequality, which the printed form contradicts
        // whenever the driver norm is nonzero.
        assert!(
            report.spectral_norm_diff
                >= report.weyl_check.norm_final - report.weyl_check.norm_init - 1e-9
        );
    }
}

#[test]
fn zero_driver_degenerates_cleanly() {
    // With no driver the interpolation starts at the zero operator: the
    // norm difference is the full final spectrum, the printed norm
    // comparison becomes an equality, and the gap closes at t = 0 so no
    // finite tight bound exists.
    let h = hamiltonian(TOY);
    let mut p = InterpolationProblem::new(h.clone(), Epsilon::parse("0.1").unwrap());
    p.h_init = InitKind::Zero;
    let report = runtime_bounds(&p, &spectrum(&h)).unwrap();
    assert_eq!(report.spectral_norm_diff, 17.0);
    assert!(report.weyl_check.printed_form_holds);
    assert_eq!(report.tight_bound, None);
    assert_eq!(report.min_gap_argmin, 0.0);
}

#[test]
fn tight_and_loose_bounds_sit_side_by_side() {
    let h = hamiltonian(TOY);
    let p = InterpolationProblem::new(h.clone(), Epsilon::parse("0.1").unwrap());
    let report = runtime_bounds(&p, &spectrum(&h)).unwrap();

    let norm2 = report.spectral_norm_diff * report.spectral_norm_diff;
    let expect_term = norm2 / (0.1 * (report.final_gap as f64).powi(3));
    assert!((report.final_time_term - expect_term).abs() < 1e-6);

    // The documented relationship: once ‖H_f − H_i‖ ≤ E_width, the loose
    // bound dominates the final-time term.
    let e_width = 17.0;
    if report.spectral_norm_diff <= e_width {
        assert!(report.loose_bound >= report.final_time_term - 1e-9);
    }

    let tight = report.tight_bound.unwrap();
    assert!(
        tight >= report.final_time_term - 1e-9,
        "minimum gap cannot beat the final gap"
    );
}

#[test]
fn degenerate_final_ground_is_reported() {
    let h = hamiltonian("x1 + x2 = 1\n");
    let report = runtime_bounds(
        &InterpolationProblem::new(h.clone(), Epsilon::parse("0.25").unwrap()),
        &spectrum(&h),
    )
    .unwrap();
    assert!(report.degenerate_ground);
    assert_eq!(report.ground_multiplicity, 2);
    assert_eq!(report.final_gap, 1);
    // width 1, gap 1 → R = 1, R/ε = 4.
    assert_eq!(report.loose_bound_exact, Fraction { num: 4, den: 1 });
}

#[test]
fn mismatched_spectra_are_refused() {
    let toy = hamiltonian(TOY);
    let other = hamiltonian("x1 + x2 = 1\n");
    let p = InterpolationProblem::new(toy, Epsilon::parse("0.1").unwrap());
    let err = runtime_bounds(&p, &spectrum(&other)).unwrap_err();
    assert!(err.to_string().contains("variables"));

    // Same shape, different energies: tamper with a level count.
    let h = hamiltonian(TOY);
    let mut spec = spectrum(&h);
    spec.levels[1].count += 1;
    let p = InterpolationProblem::new(h, Epsilon::parse("0.1").unwrap());
    let err = runtime_bounds(&p, &spec).unwrap_err();
    assert!(err.to_string().contains("histogram"));
}

#[test]
fn reports_serialize_round_trip() {
    let h = hamiltonian(TOY);
    let report = runtime_bounds(
        &InterpolationProblem::new(h.clone(), Epsilon::parse("0.1").unwrap()),
        &spectrum(&h),
    )
    .unwrap();
    let json = serde_json::to_string(&report).unwrap();
    let back: elmkit_aqc::BoundReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
}

#[test]
fn min_gap_agrees_between_scan_and_report() {
    let h = hamiltonian(TOY);
    let p = InterpolationProblem::new(h.clone(), Epsilon::parse("0.1").unwrap());
    let scan = min_interpolated_gap(&p).unwrap();
    let report = runtime_bounds(&p, &spectrum(&h)).unwrap();
    assert_eq!(report.min_gap, scan.min_gap);
    assert_eq!(report.min_gap_argmin, scan.argmin);
}
