//! Exhaustive energy-landscape characterization.
//!
//! [`enumerate_spectrum`] walks all `2^n` assignments of a Hamiltonian and
//! produces the exact density of states plus the quantities that control
//! adiabatic runtime estimates: the gap `E_|1⟩ − E_|0⟩` from the ground
//! level to the first excited level, the spectral width `E_max − E_|0⟩`,
//! and the ratio `width² / gap³`.
//!
//! Enumeration is data-parallel over contiguous, disjoint assignment
//! ranges. Workers build local histograms that are merged in range order,
//! so the report is identical whatever the worker count or scheduling —
//! including the truncated ground-state listing, which is always the first
//! entries in assignment order. [`enumerate_spectrum_naive`] is the
//! deliberately plain single-threaded evaluator the optimized path is
//! tested against.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::system::Hamiltonian;

/// One energy level: its exact energy and how many assignments attain it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub energy: i64,
    pub count: u64,
}

/// The ratio `width² / gap³`, kept unreduced (numerator is the squared
/// width, denominator the cubed gap) next to its rounded display value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
    pub display: i64,
}

/// `width² / gap³` as an exact rational plus its half-up-rounded integer.
pub fn spectral_ratio(e_width: i64, e_gap: i64) -> Result<Ratio, CoreError> {
    if e_gap <= 0 {
        return Err(CoreError::ZeroGap);
    }
    let num = e_width.checked_mul(e_width).ok_or(CoreError::Overflow)?;
    let den = e_gap
        .checked_mul(e_gap)
        .and_then(|g2| g2.checked_mul(e_gap))
        .ok_or(CoreError::Overflow)?;
    // Round half-up: floor(num/den + 1/2) = floor((2·num + den) / (2·den)).
    let display = ((2 * num as i128 + den as i128) / (2 * den as i128)) as i64;
    Ok(Ratio { num, den, display })
}

/// The full exhaustive characterization of one landscape.
///
/// For a flat landscape (a single level) the gap does not exist; `e_gap`
/// and `ratio` are absent to mark that explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: u32,
    /// Legend for the ground-state bitstrings: bit `i` of an assignment is
    /// the value of `variables[i]`.
    pub variables: Vec<String>,
    pub levels: Vec<Level>,
    /// Ground states as bitstrings, first `cap` in assignment order.
    pub ground_states: Vec<String>,
    /// Exact ground-level degeneracy, even when the listing is truncated.
    pub total_ground_states: u64,
    pub e_gap: Option<i64>,
    pub e_width: i64,
    pub ratio: Option<Ratio>,
    pub mode_notes: Vec<String>,
}

impl SpectrumReport {
    pub fn ground_energy(&self) -> i64 {
        self.levels[0].energy
    }

    pub fn max_energy(&self) -> i64 {
        self.levels[self.levels.len() - 1].energy
    }
}

/// Knobs for [`enumerate_spectrum`].
#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    /// Refuse instances with more variables than this.
    pub max_vars: u32,
    /// Keep at most this many ground states in the report listing.
    pub ground_state_cap: usize,
    /// Worker threads; `None` uses the machine's available parallelism.
    pub workers: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            max_vars: 28,
            ground_state_cap: 64,
            workers: None,
        }
    }
}

/// Per-worker tally for one contiguous assignment range.
struct RangeTally {
    histogram: HashMap<i64, u64>,
    min_energy: i64,
    // First `cap` assignments in the range attaining `min_energy`.
    ground_states: Vec<u64>,
}

fn tally_range(
    terms: &[(u64, i64)],
    range: std::ops::Range<u64>,
    cap: usize,
) -> RangeTally {
    let mut histogram = HashMap::new();
    let mut min_energy = i64::MAX;
    let mut ground_states = Vec::new();
    for a in range {
        // The coefficient-magnitude precheck in `enumerate_spectrum` makes
        // plain addition safe here.
        let mut e = 0i64;
        for &(mask, coeff) in terms {
            if a & mask == mask {
                e += coeff;
            }
        }
        *histogram.entry(e).or_insert(0) += 1;
        if e < min_energy {
            min_energy = e;
            ground_states.clear();
            ground_states.push(a);
        } else if e == min_energy && ground_states.len() < cap {
            ground_states.push(a);
        }
    }
    RangeTally {
        histogram,
        min_energy,
        ground_states,
    }
}

fn build_report(
    h: &Hamiltonian,
    levels_map: BTreeMap<i64, u64>,
    ground_states: Vec<u64>,
    notes: Vec<String>,
) -> Result<SpectrumReport, CoreError> {
    let levels: Vec<Level> = levels_map
        .into_iter()
        .map(|(energy, count)| Level { energy, count })
        .collect();
    let e0 = levels[0].energy;
    let e_width = levels[levels.len() - 1].energy - e0;
    let (e_gap, ratio) = if levels.len() == 1 {
        (None, None)
    } else {
        let gap = levels[1].energy - e0;
        (Some(gap), Some(spectral_ratio(e_width, gap)?))
    };
    let table = h.table();
    Ok(SpectrumReport {
        n: h.n_vars(),
        variables: table.names().to_vec(),
        levels: levels.clone(),
        ground_states: ground_states.iter().map(|&a| table.bitstring(a)).collect(),
        total_ground_states: levels[0].count,
        e_gap,
        e_width,
        ratio,
        mode_notes: notes,
    })
}

/// Exact histogram of `H` over all `2^n` assignments, in parallel.
pub fn enumerate_spectrum(
    h: &Hamiltonian,
    options: &EnumerateOptions,
) -> Result<SpectrumReport, CoreError> {
    let n = h.n_vars();
    if n > options.max_vars {
        return Err(CoreError::CapExceeded {
            n,
            cap: options.max_vars,
        });
    }
    if h.poly().coeff_magnitude_sum() > i64::MAX as i128 {
        return Err(CoreError::Overflow);
    }
    let terms: Vec<(u64, i64)> = h.poly().terms().map(|(m, c)| (m.mask(), c)).collect();
    let total: u64 = 1 << n;
    let workers = options
        .workers
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        })
        .clamp(1, total.min(256) as usize);
    let chunk = total.div_ceil(workers as u64);
    let cap = options.ground_state_cap;

    let tallies: Vec<RangeTally> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let start = w * chunk;
                let end = (start + chunk).min(total);
                let terms = &terms;
                s.spawn(move || tally_range(terms, start..end, cap))
            })
            .collect();
        handles
            .into_iter()
            .map(|handle| handle.join().expect("enumeration worker panicked"))
            .collect()
    });

    let mut levels_map: BTreeMap<i64, u64> = BTreeMap::new();
    for t in &tallies {
        for (&e, &c) in &t.histogram {
            *levels_map.entry(e).or_insert(0) += c;
        }
    }
    let global_min = tallies
        .iter()
        .map(|t| t.min_energy)
        .min()
        .expect("at least one worker");
    // Ranges are in ascending assignment order, so concatenation followed
    // by truncation gives the globally-first `cap` ground states.
    let mut ground_states = Vec::new();
    for t in &tallies {
        if t.min_energy == global_min {
            ground_states.extend_from_slice(&t.ground_states);
        }
    }
    ground_states.truncate(cap);

    build_report(h, levels_map, ground_states, Vec::new())
}

/// Single-threaded reference enumeration: evaluate the polynomial term by
/// term for every assignment, no shortcuts. Exists to pin down what the
/// parallel path must produce.
pub fn enumerate_spectrum_naive(
    h: &Hamiltonian,
    options: &EnumerateOptions,
) -> Result<SpectrumReport, CoreError> {
    let n = h.n_vars();
    if n > options.max_vars {
        return Err(CoreError::CapExceeded {
            n,
            cap: options.max_vars,
        });
    }
    let mut levels_map: BTreeMap<i64, u64> = BTreeMap::new();
    let mut min_energy = i64::MAX;
    let mut ground_states = Vec::new();
    for a in 0..(1u64 << n) {
        let e = h.evaluate(a)?;
        *levels_map.entry(e).or_insert(0) += 1;
        if e < min_energy {
            min_energy = e;
            ground_states.clear();
            ground_states.push(a);
        } else if e == min_energy && ground_states.len() < options.ground_state_cap {
            ground_states.push(a);
        }
    }
    build_report(h, levels_map, ground_states, Vec::new())
}

/// First levels of two reports side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelPair {
    pub energy_a: i64,
    pub count_a: u64,
    pub energy_b: i64,
    pub count_b: u64,
    /// `energy_b − energy_a`.
    pub shift: i64,
}

/// An exact reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl Fraction {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Outcome of [`compare_spectra`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumComparison {
    /// `ratio_a / ratio_b`, reduced; absent when either landscape is flat.
    pub factor: Option<Fraction>,
    /// The same factor as a percentage.
    pub factor_percent: Option<f64>,
    pub first_levels: Vec<LevelPair>,
    pub ground_states_equal: bool,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

/// Compare two landscapes: how much the spectral ratio changed, how the
/// lowest levels moved, and whether the ground-state sets agree.
pub fn compare_spectra(
    a: &SpectrumReport,
    b: &SpectrumReport,
) -> Result<SpectrumComparison, CoreError> {
    const SHOWN_LEVELS: usize = 5;
    let factor = match (&a.ratio, &b.ratio) {
        (Some(ra), Some(rb)) => {
            let num = (ra.num as i128) * (rb.den as i128);
            let den = (ra.den as i128) * (rb.num as i128);
            let num = i64::try_from(num).map_err(|_| CoreError::Overflow)?;
            let den = i64::try_from(den).map_err(|_| CoreError::Overflow)?;
            let g = gcd(num, den);
            Some(Fraction {
                num: num / g,
                den: den / g,
            })
        }
        _ => None,
    };
    let first_levels = a
        .levels
        .iter()
        .zip(&b.levels)
        .take(SHOWN_LEVELS)
        .map(|(la, lb)| LevelPair {
            energy_a: la.energy,
            count_a: la.count,
            energy_b: lb.energy,
            count_b: lb.count,
            shift: lb.energy - la.energy,
        })
        .collect();
    let ground_states_equal = a.total_ground_states == b.total_ground_states
        && a.ground_states == b.ground_states;
    Ok(SpectrumComparison {
        factor,
        factor_percent: factor.map(|f| f.to_f64() * 100.0),
        first_levels,
        ground_states_equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::EquationSystem;

    fn toy_h(weights: Option<&[i64]>) -> Hamiltonian {
        EquationSystem::parse("x1 + x2 = x3 + 1\nx1 + x1*x2 = 2*x2*x3 + x2 + 1\n")
            .unwrap()
            .to_hamiltonian(weights)
            .unwrap()
    }

    fn levels(report: &SpectrumReport) -> Vec<(i64, u64)> {
        report.levels.iter().map(|l| (l.energy, l.count)).collect()
    }

    #[test]
    fn toy_landscape() {
        let report = enumerate_spectrum(&toy_h(None), &EnumerateOptions::default()).unwrap();
        assert_eq!(
            levels(&report),
            [(0, 1), (1, 2), (2, 1), (4, 2), (5, 1), (17, 1)]
        );
        assert_eq!(report.e_gap, Some(1));
        assert_eq!(report.e_width, 17);
        let ratio = report.ratio.unwrap();
        assert_eq!((ratio.num, ratio.den, ratio.display), (289, 1, 289));
        assert_eq!(report.ground_states, ["100"]);
        assert_eq!(report.total_ground_states, 1);
        assert_eq!(report.variables, ["x1", "x2", "x3"]);
    }

    #[test]
    fn toy_landscape_reweighted() {
        let report =
            enumerate_spectrum(&toy_h(Some(&[4, 1])), &EnumerateOptions::default()).unwrap();
        assert_eq!(levels(&report), [(0, 1), (4, 4), (5, 1), (17, 1), (20, 1)]);
        assert_eq!(report.e_gap, Some(4));
        assert_eq!(report.e_width, 20);
        let ratio = report.ratio.unwrap();
        // 400/64 = 6.25 rounds down under half-up.
        assert_eq!((ratio.num, ratio.den, ratio.display), (400, 64, 6));
        assert_eq!(report.ground_states, ["100"]);
    }

    #[test]
    fn degeneracies_cover_the_whole_cube() {
        for report in [
            enumerate_spectrum(&toy_h(None), &EnumerateOptions::default()).unwrap(),
            enumerate_spectrum(&toy_h(Some(&[3, 2])), &EnumerateOptions::default()).unwrap(),
        ] {
            let sum: u64 = report.levels.iter().map(|l| l.count).sum();
            assert_eq!(sum, 1 << report.n);
            for pair in report.levels.windows(2) {
                assert!(pair[0].energy < pair[1].energy);
            }
        }
    }

    #[test]
    fn flat_landscape_has_no_gap() {
        let sys = EquationSystem::parse("x1 + x2 = x2 + x1 + 7\n").unwrap();
        // Residual is the constant −7, so every assignment scores 49.
        let h = sys.to_hamiltonian(None).unwrap();
        let report = enumerate_spectrum(&h, &EnumerateOptions::default()).unwrap();
        assert_eq!(levels(&report), [(49, 4)]);
        assert_eq!(report.e_gap, None);
        assert_eq!(report.e_width, 0);
        assert!(report.ratio.is_none());
    }

    #[test]
    fn reports_are_identical_across_worker_counts() {
        let h = toy_h(Some(&[2, 3]));
        let baseline = enumerate_spectrum(
            &h,
            &EnumerateOptions {
                workers: Some(1),
                ..EnumerateOptions::default()
            },
        )
        .unwrap();
        for workers in 2..=6 {
            let report = enumerate_spectrum(
                &h,
                &EnumerateOptions {
                    workers: Some(workers),
                    ..EnumerateOptions::default()
                },
            )
            .unwrap();
            assert_eq!(report, baseline, "worker count {workers}");
            assert_eq!(
                serde_json::to_string(&report).unwrap(),
                serde_json::to_string(&baseline).unwrap()
            );
        }
    }

    #[test]
    fn parallel_path_matches_the_naive_evaluator() {
        for weights in [None, Some([4i64, 1].as_slice()), Some([13, 2].as_slice())] {
            let h = toy_h(weights);
            let fast = enumerate_spectrum(&h, &EnumerateOptions::default()).unwrap();
            let naive = enumerate_spectrum_naive(&h, &EnumerateOptions::default()).unwrap();
            assert_eq!(fast, naive);
        }
    }

    #[test]
    fn ground_state_listing_truncates_but_counts_exactly() {
        // x1 + x2 + x3 + x4 = 2 has C(4,2) = 6 solutions.
        let sys = EquationSystem::parse("x1 + x2 + x3 + x4 = 2\n").unwrap();
        let h = sys.to_hamiltonian(None).unwrap();
        let opts = EnumerateOptions {
            ground_state_cap: 3,
            ..EnumerateOptions::default()
        };
        let report = enumerate_spectrum(&h, &opts).unwrap();
        assert_eq!(report.total_ground_states, 6);
        assert_eq!(report.ground_states.len(), 3);
        // First three two-hot assignments in numeric order: 0011, 0101, 0110.
        assert_eq!(report.ground_states, ["1100", "1010", "0110"]);
        // Truncation is worker-count independent.
        let with_more_workers = enumerate_spectrum(
            &h,
            &EnumerateOptions {
                workers: Some(5),
                ..opts
            },
        )
        .unwrap();
        assert_eq!(with_more_workers, report);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let h = toy_h(None);
        let opts = EnumerateOptions {
            max_vars: 2,
            ..EnumerateOptions::default()
        };
        assert!(matches!(
            enumerate_spectrum(&h, &opts),
            Err(CoreError::CapExceeded { n: 3, cap: 2 })
        ));
    }

    #[test]
    fn ratio_examples() {
        let r = spectral_ratio(171, 2).unwrap();
        assert_eq!((r.num, r.den, r.display), (29241, 8, 3655));
        let r = spectral_ratio(238, 2).unwrap();
        assert_eq!((r.num, r.den, r.display), (56644, 8, 7081));
        let r = spectral_ratio(1, 1).unwrap();
        assert_eq!((r.num, r.den, r.display), (1, 1, 1));
        assert!(matches!(spectral_ratio(5, 0), Err(CoreError::ZeroGap)));
    }

    #[test]
    fn comparisons_report_factor_levels_and_ground_states() {
        let a = enumerate_spectrum(&toy_h(None), &EnumerateOptions::default()).unwrap();
        let b = enumerate_spectrum(&toy_h(Some(&[4, 1])), &EnumerateOptions::default()).unwrap();
        let cmp = compare_spectra(&a, &b).unwrap();
        // (289/1) / (400/64) = 18496/400 = 1156/25 = 46.24.
        assert_eq!(cmp.factor, Some(Fraction { num: 1156, den: 25 }));
        assert!((cmp.factor_percent.unwrap() - 4624.0).abs() < 1e-9);
        assert!(cmp.ground_states_equal);
        assert_eq!(cmp.first_levels.len(), 5);
        assert_eq!(cmp.first_levels[0].shift, 0);
        assert_eq!(cmp.first_levels[1].shift, 3); // 1 -> 4

        let same = compare_spectra(&a, &a).unwrap();
        assert_eq!(same.factor, Some(Fraction { num: 1, den: 1 }));
        assert!(same.ground_states_equal);
        assert!(same.first_levels.iter().all(|p| p.shift == 0));
    }
}
