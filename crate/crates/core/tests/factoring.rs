//! End-to-end checks of the factoring generator and the simplification
//! pass: generated systems encode exactly the factorizations of N, and the
//! bundled 841/551 equation files are reproduced from scratch.

use std::collections::BTreeSet;

use elmkit_core::{
    apply_simple_deductions, datasets, decode_factors, generate_factoring_system,
};

fn bits(v: u64) -> u32 {
    64 - v.leading_zeros()
}

/// Every solution of a generated system decodes to a factor pair of `n`,
/// and the pair the system was sized for is among them.
fn check_instance(n: u64, a: u64, b: u64) {
    let sys = generate_factoring_system(n, bits(a), bits(b)).unwrap();
    let solutions = sys.solve_exhaustive(24).unwrap();
    let mut pairs = BTreeSet::new();
    for s in &solutions {
        let (p, q) = decode_factors(sys.table(), *s, bits(a), bits(b));
        assert_eq!(p * q, n, "solution of the {n} system decodes to {p} x {q}");
        pairs.insert((p, q));
    }
    assert!(
        pairs.contains(&(a, b)),
        "{n} system sized for {a} x {b} admits {pairs:?}"
    );
}

#[test]
fn odd_products_below_200_are_recovered() {
    for a in (3..=13u64).step_by(2) {
        for b in (a..=63u64).step_by(2) {
            let n = a * b;
            if n < 9 || n >= 200 {
                continue;
            }
            check_instance(n, a, b);
            if bits(a) != bits(b) {
                check_instance(n, b, a);
            }
        }
    }
}

#[test]
fn reduction_commutes_with_solving() {
    for (n, pb, qb) in [(143u64, 4, 4), (391, 5, 5), (437, 5, 5), (899, 5, 5)] {
        let sys = generate_factoring_system(n, pb, qb).unwrap();
        let reduced = apply_simple_deductions(&sys).unwrap();
        assert!(reduced.system.table().len() <= sys.table().len());

        let full: BTreeSet<u64> = sys.solve_exhaustive(24).unwrap().into_iter().collect();
        let lifted: BTreeSet<u64> = reduced
            .system
            .solve_exhaustive(24)
            .unwrap()
            .into_iter()
            .map(|s| reduced.lift(s).unwrap())
            .collect();
        assert_eq!(full, lifted, "solution sets diverge for {n}");
    }
}

/// All factor pairs encoded by a system's solutions.
fn factor_pairs(sys: &elmkit_core::EquationSystem, pb: u32, qb: u32) -> BTreeSet<(u64, u64)> {
    sys.solve_exhaustive(24)
        .unwrap()
        .into_iter()
        .map(|s| decode_factors(sys.table(), s, pb, qb))
        .collect()
}

// The bundled files carry the hand-simplified forms, which used deductions
// beyond the elementary rule classes (e.g. parity of p1 + q1 = 2*z12), so
// the generated systems have more variables. What must agree is the set of
// factorizations they encode.
#[test]
fn bundled_systems_match_generated_ones_on_solutions() {
    let reduced_pairs = |n: u64| -> BTreeSet<(u64, u64)> {
        let raw = generate_factoring_system(n, 5, 5).unwrap();
        let reduced = apply_simple_deductions(&raw).unwrap();
        reduced
            .system
            .solve_exhaustive(24)
            .unwrap()
            .into_iter()
            .map(|s| decode_factors(raw.table(), reduced.lift(s).unwrap(), 5, 5))
            .collect()
    };

    let expect_841 = BTreeSet::from([(29u64, 29u64)]);
    assert_eq!(factor_pairs(&datasets::system_841(), 5, 5), expect_841);
    assert_eq!(reduced_pairs(841), expect_841);

    let expect_551 = BTreeSet::from([(19u64, 29u64), (29u64, 19u64)]);
    assert_eq!(factor_pairs(&datasets::system_551(), 5, 5), expect_551);
    assert_eq!(reduced_pairs(551), expect_551);
}
