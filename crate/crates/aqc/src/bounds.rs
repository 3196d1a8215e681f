//! Runtime-bound quantities for one interpolation problem, combining the
//! dense operator analysis with the exact spectrum report.

use elmkit_core::{CoreError, Fraction, SpectrumReport};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::AqcError;
use crate::gap::{scan_operators, spectral_norm};
use crate::problem::{build_operators, InterpolationProblem};

/// Numerical comparison of the operator norms. The reverse triangle
/// inequality guarantees `‖H_final − H_init‖ ≥ ‖H_final‖ − ‖H_init‖`; the
/// literature this follows prints the inequality the other way around, so
/// both sides are recorded and the printed form is flagged, not assumed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylCheck {
    /// `‖H_final − H_init‖`.
    pub norm_diff: f64,
    pub norm_final: f64,
    pub norm_init: f64,
    /// `‖H_final − H_init‖ ≤ ‖H_final‖ + ‖H_init‖` — must always hold.
    pub triangle_holds: bool,
    /// `‖H_final − H_init‖ ≤ ‖H_final‖ − ‖H_init‖` — the printed form;
    /// generally false, true only in degenerate alignments.
    pub printed_form_holds: bool,
}

/// Everything the runtime analysis produces for one problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub qubits: u32,
    /// ε as the exact fraction it was given as.
    pub epsilon: Fraction,
    /// `‖H_final − H_init‖`.
    pub spectral_norm_diff: f64,
    /// Smallest gap seen along the interpolation.
    pub min_gap: f64,
    /// `t/T` at which `min_gap` occurred.
    pub min_gap_argmin: f64,
    /// Exact classical gap of the final landscape.
    pub final_gap: i64,
    /// Ground-level degeneracy of the final landscape; when above 1 the
    /// gap is measured to the lowest distinct level.
    pub ground_multiplicity: u64,
    pub degenerate_ground: bool,
    /// `‖H_final − H_init‖² / (ε · min_gap³)` — absent when the gap
    /// closes completely (no finite bound).
    pub tight_bound: Option<f64>,
    /// Same numerator over the final classical gap, for side-by-side
    /// reading with `loose_bound`.
    pub final_time_term: f64,
    /// `R/ε = width²/(ε·gap³)`, computed in exact integer arithmetic.
    pub loose_bound: f64,
    pub loose_bound_exact: Fraction,
    pub weyl_check: WeylCheck,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

/// Check that `spectrum` really describes `p.h_final`: same variables and
/// the same exact level histogram as the operator diagonal.
fn check_spectrum_matches(
    p: &InterpolationProblem,
    diagonal: &[i64],
    spectrum: &SpectrumReport,
) -> Result<(), AqcError> {
    let mismatch = |detail: String| AqcError::Core(CoreError::SpectrumMismatch { detail });
    if spectrum.n != p.qubits() {
        return Err(mismatch(format!(
            "report describes {} variables, problem has {}",
            spectrum.n,
            p.qubits()
        )));
    }
    if spectrum.variables != p.h_final.table().names() {
        return Err(mismatch("report names different variables".into()));
    }
    let mut histogram: BTreeMap<i64, u64> = BTreeMap::new();
    for &e in diagonal {
        *histogram.entry(e).or_insert(0) += 1;
    }
    let from_diagonal: Vec<(i64, u64)> = histogram.into_iter().collect();
    let from_report: Vec<(i64, u64)> = spectrum.levels.iter().map(|l| (l.energy, l.count)).collect();
    if from_diagonal != from_report {
        return Err(mismatch(
            "level histogram disagrees with the final operator's diagonal".into(),
        ));
    }
    Ok(())
}

/// Evaluate every bound quantity for `p`, validating the supplied exact
/// spectrum against the final operator first.
pub fn runtime_bounds(
    p: &InterpolationProblem,
    spectrum: &SpectrumReport,
) -> Result<BoundReport, AqcError> {
    let ops = build_operators(p)?;
    check_spectrum_matches(p, &ops.diagonal, spectrum)?;
    let ratio = spectrum.ratio.ok_or(AqcError::Core(CoreError::ZeroGap))?;

    let scan = scan_operators(&ops, p.grid)?;

    let norm_final = spectral_norm(&ops.h_final);
    let norm_init = spectral_norm(&ops.h_init);
    let norm_diff = spectral_norm(&(&ops.h_final - &ops.h_init));
    const TOL: f64 = 1e-9;
    let weyl_check = WeylCheck {
        norm_diff,
        norm_final,
        norm_init,
        triangle_holds: norm_diff <= norm_final + norm_init + TOL,
        printed_form_holds: norm_diff <= norm_final - norm_init + TOL,
    };

    let eps = p.epsilon;
    // R/ε = (num/den)·(eps_den/eps_num), reduced exactly.
    let loose_num = ratio.num as i128 * eps.den as i128;
    let loose_den = ratio.den as i128 * eps.num as i128;
    let g = gcd(loose_num, loose_den);
    let loose_bound_exact = Fraction {
        num: i64::try_from(loose_num / g).map_err(|_| AqcError::Core(CoreError::Overflow))?,
        den: i64::try_from(loose_den / g).map_err(|_| AqcError::Core(CoreError::Overflow))?,
    };

    let eps_f = eps.to_f64();
    let tight_bound = if scan.min_gap > TOL {
        Some(norm_diff * norm_diff / (eps_f * scan.min_gap.powi(3)))
    } else {
        None
    };
    let final_time_term = norm_diff * norm_diff / (eps_f * scan.final_gap.powi(3));

    Ok(BoundReport {
        qubits: p.qubits(),
        epsilon: Fraction {
            num: eps.num,
            den: eps.den,
        },
        spectral_norm_diff: norm_diff,
        min_gap: scan.min_gap,
        min_gap_argmin: scan.argmin,
        final_gap: scan.final_gap as i64,
        ground_multiplicity: scan.ground_multiplicity as u64,
        degenerate_ground: scan.degenerate_ground,
        tight_bound,
        final_time_term,
        loose_bound: loose_bound_exact.to_f64(),
        loose_bound_exact,
        weyl_check,
    })
}
