//! Minimum spectral gap along the interpolation
//! `H(s) = (1−s)·H_init + s·H_final`, `s = t/T ∈ [0, 1]`.

use nalgebra::DMatrix;

use crate::error::AqcError;
use crate::problem::{build_operators, InterpolationProblem, Operators};

/// Bracket width at which golden-section refinement stops (the domain is
/// `[0, 1]`, so this is also the relative tolerance on the argmin).
const S_TOLERANCE: f64 = 1e-6;

/// Result of scanning the interpolation for its smallest gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapScan {
    pub min_gap: f64,
    /// `t/T` where the minimum was found.
    pub argmin: f64,
    /// Exact classical gap of `H_final`, to the lowest distinct level.
    pub final_gap: f64,
    /// Ground-level multiplicity of `H_final` (exact).
    pub ground_multiplicity: usize,
    /// True when `ground_multiplicity > 1`; the gap is then measured from
    /// the degenerate ground manifold to the next distinct level.
    pub degenerate_ground: bool,
}

/// Gap of `(1−s)·H_init + s·H_final`, from the lowest `g` levels (the
/// ground manifold) to the next one.
fn gap_at(ops: &Operators, ground_multiplicity: usize, s: f64) -> f64 {
    let m = &ops.h_init * (1.0 - s) + &ops.h_final * s;
    let mut eigs: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(f64::total_cmp);
    eigs[ground_multiplicity] - eigs[0]
}

/// Spectral norm (largest |eigenvalue|) of a real symmetric matrix.
pub(crate) fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.symmetric_eigenvalues()
        .iter()
        .fold(0.0f64, |acc, e| acc.max(e.abs()))
}

pub(crate) fn scan_operators(ops: &Operators, grid: usize) -> Result<GapScan, AqcError> {
    let mut sorted = ops.diagonal.clone();
    sorted.sort_unstable();
    let ground_multiplicity = sorted.iter().filter(|&&e| e == sorted[0]).count();
    if ground_multiplicity == sorted.len() {
        // Flat final landscape: no distinct level to measure a gap to.
        return Err(elmkit_core::CoreError::ZeroGap.into());
    }
    let final_gap = (sorted[ground_multiplicity] - sorted[0]) as f64;

    // Coarse pass, parallel across grid points. Results land in a
    // position-indexed vector, so the outcome is independent of the
    // worker count.
    let samples: Vec<f64> = (0..grid)
        .map(|i| i as f64 / (grid - 1) as f64)
        .collect();
    let dim = ops.diagonal.len();
    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(grid)
        .min(if dim > 512 { 2 } else { 16 });
    let mut gaps = vec![0.0f64; grid];
    let chunk = grid.div_ceil(workers);
    std::thread::scope(|sc| {
        for (w, slot) in gaps.chunks_mut(chunk).enumerate() {
            let samples = &samples;
            sc.spawn(move || {
                for (k, out) in slot.iter_mut().enumerate() {
                    *out = gap_at(ops, ground_multiplicity, samples[w * chunk + k]);
                }
            });
        }
    });

    let mut best = (gaps[0], samples[0]);
    for (g, s) in gaps.iter().zip(&samples).skip(1) {
        if *g < best.0 {
            best = (*g, *s);
        }
    }

    // Golden-section refinement inside the bracket around the coarse
    // minimum; avoided crossings are far narrower than any sane grid.
    let k = samples.iter().position(|&s| s == best.1).unwrap();
    let mut a = samples[k.saturating_sub(1)];
    let mut b = samples[(k + 1).min(grid - 1)];
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = gap_at(ops, ground_multiplicity, c);
    let mut fd = gap_at(ops, ground_multiplicity, d);
    while b - a > S_TOLERANCE {
        if fc < best.0 {
            best = (fc, c);
        }
        if fd < best.0 {
            best = (fd, d);
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = gap_at(ops, ground_multiplicity, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = gap_at(ops, ground_multiplicity, d);
        }
    }

    Ok(GapScan {
        min_gap: best.0,
        argmin: best.1,
        final_gap,
        ground_multiplicity,
        degenerate_ground: ground_multiplicity > 1,
    })
}

/// Minimum gap of the interpolation, from a coarse grid of `p.grid`
/// samples refined to [`S_TOLERANCE`] around the smallest one.
pub fn min_interpolated_gap(p: &InterpolationProblem) -> Result<GapScan, AqcError> {
    let ops = build_operators(p)?;
    scan_operators(&ops, p.grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Epsilon, InitKind};
    use elmkit_core::EquationSystem;

    fn problem(text: &str) -> InterpolationProblem {
        let h = EquationSystem::parse(text)
            .unwrap()
            .to_hamiltonian(None)
            .unwrap();
        InterpolationProblem::new(h, Epsilon::parse("0.1").unwrap())
    }

    #[test]
    fn one_qubit_matches_the_closed_form() {
        // H(s) for H_final = x1 is a 2×2 avoided crossing with
        // gap(s) = √(s² + (1−s)²), minimized at s = ½ with value 1/√2.
        let p = problem("x1 = 0\n");
        let ops = build_operators(&p).unwrap();
        for s in [0.0f64, 0.2, 0.5, 0.8, 1.0] {
            let expect = (s * s + (1.0 - s) * (1.0 - s)).sqrt();
            assert!((gap_at(&ops, 1, s) - expect).abs() < 1e-9, "s = {s}");
        }
        let scan = min_interpolated_gap(&p).unwrap();
        assert!((scan.min_gap - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        assert!((scan.argmin - 0.5).abs() < 1e-6);
        assert_eq!(scan.final_gap, 1.0);
        assert!(!scan.degenerate_ground);
    }

    #[test]
    fn identical_endpoints_give_a_constant_gap() {
        let mut p = problem("x1 + x2 = x3 + 1\nx1 + x1*x2 = 2*x2*x3 + x2 + 1\n");
        let diag: Vec<f64> = (0..8)
            .map(|x| p.h_final.evaluate(x).unwrap() as f64)
            .collect();
        p.h_init = InitKind::Diagonal { entries: diag };
        let scan = min_interpolated_gap(&p).unwrap();
        assert!((scan.min_gap - 1.0).abs() < 1e-9);
        assert_eq!(scan.final_gap, 1.0);
    }

    #[test]
    fn toy_minimum_gap_never_exceeds_the_classical_gap() {
        let p = problem("x1 + x2 = x3 + 1\nx1 + x1*x2 = 2*x2*x3 + x2 + 1\n");
        let scan = min_interpolated_gap(&p).unwrap();
        assert!(scan.min_gap <= scan.final_gap + 1e-9);
        assert_eq!(scan.final_gap, 1.0);
        assert_eq!(scan.ground_multiplicity, 1);
    }

    #[test]
    fn degenerate_ground_is_flagged_and_measured_to_the_next_level() {
        // Two solutions: 01 and 10.
        let p = problem("x1 + x2 = 1\n");
        let scan = min_interpolated_gap(&p).unwrap();
        assert!(scan.degenerate_ground);
        assert_eq!(scan.ground_multiplicity, 2);
        assert_eq!(scan.final_gap, 1.0);
        assert!(scan.min_gap <= 1.0 + 1e-9);
    }

    #[test]
    fn no_driver_means_the_gap_closes_at_zero_time() {
        let mut p = problem("x1 + x2 = x3 + 1\nx1 + x1*x2 = 2*x2*x3 + x2 + 1\n");
        p.h_init = InitKind::Zero;
        let scan = min_interpolated_gap(&p).unwrap();
        assert!(scan.min_gap.abs() < 1e-9);
        assert_eq!(scan.argmin, 0.0);
    }

    #[test]
    fn flat_landscapes_are_rejected() {
        let p = problem("x1 + x2 = x1 + x2\n");
        assert!(min_interpolated_gap(&p).is_err());
    }

    #[test]
    fn doubling_the_grid_barely_moves_the_minimum() {
        for text in ["x1 = 0\n", "x1 + x2 = x3 + 1\nx1 + x1*x2 = 2*x2*x3 + x2 + 1\n"] {
            let mut p = problem(text);
            let coarse = min_interpolated_gap(&p).unwrap();
            p.grid *= 2;
            let fine = min_interpolated_gap(&p).unwrap();
            let scale = coarse.min_gap.max(1.0);
            assert!((coarse.min_gap - fine.min_gap).abs() < 1e-6 * scale);
        }
    }
}
