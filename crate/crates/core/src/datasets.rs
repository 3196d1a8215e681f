//! Bundled example systems.
//!
//! Two factoring instances ship with the library so the documented energy
//! tables can be reproduced without generating anything: 841 = 29 x 29
//! (seven equations after simplification, 16 variables) and 551 = 19 x 29
//! (nine equations, 17 variables). The deduction file for 841 carries the
//! two implications used to inject penalties into its landscape.

use crate::elm::{parse_deductions, Deduction};
use crate::system::EquationSystem;

pub const SYSTEM_841_TEXT: &str = include_str!("../../../data/841.eqs");
pub const SYSTEM_551_TEXT: &str = include_str!("../../../data/551.eqs");
pub const DEDUCTIONS_841_TEXT: &str = include_str!("../../../data/841.deductions");

/// The two-equation toy system used throughout the documentation: unique
/// solution x1=1, x2=0, x3=0; landscape gap 1, width 17.
pub const SYSTEM_TOY_TEXT: &str = "x1 + x2 = x3 + 1\nx1 + x1*x2 = 2*x2*x3 + x2 + 1\n";

/// The toy two-equation system over x1, x2, x3.
pub fn system_toy() -> EquationSystem {
    EquationSystem::parse(SYSTEM_TOY_TEXT).expect("bundled toy system parses")
}

/// The 841 = 29 x 29 system: 7 equations over 16 variables.
pub fn system_841() -> EquationSystem {
    EquationSystem::parse(SYSTEM_841_TEXT).expect("bundled 841 system parses")
}

/// The 551 = 19 x 29 system: 9 equations over 17 variables.
pub fn system_551() -> EquationSystem {
    EquationSystem::parse(SYSTEM_551_TEXT).expect("bundled 551 system parses")
}

/// The two implication penalties that reshape the 841 landscape.
pub fn deductions_841() -> Vec<Deduction> {
    parse_deductions(DEDUCTIONS_841_TEXT, system_841().table())
        .expect("bundled 841 deductions parse")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_systems_have_documented_shape() {
        let s841 = system_841();
        assert_eq!(s841.equations().len(), 7);
        assert_eq!(s841.table().len(), 16);
        let s551 = system_551();
        assert_eq!(s551.equations().len(), 9);
        assert_eq!(s551.table().len(), 17);
    }

    #[test]
    fn bundled_deductions_parse_against_841() {
        let deductions = deductions_841();
        assert_eq!(deductions.len(), 2);
        let sys = system_841();
        let shown: Vec<String> = deductions.iter().map(|d| d.describe(sys.table())).collect();
        assert_eq!(shown[0], "z24*(3 - p1 - p2 - q2)");
        assert_eq!(shown[1], "z79*(4 - p3 - q3 - z57 - z67)");
    }

    #[test]
    fn bundled_systems_encode_their_factorizations() {
        // 841 = 29 x 29 with p = q = 11101b.
        let s841 = system_841();
        let t = s841.table();
        let mut a = 0u64;
        for name in ["p2", "p3", "q2", "q3", "z23", "z34", "z46", "z56", "z68"] {
            a |= 1 << t.index_of(name).unwrap();
        }
        assert!(s841.is_solution(a).unwrap());

        // 551 = 19 x 29 with p = 10011b, q = 11101b.
        let s551 = system_551();
        let t = s551.table();
        let mut b = 0u64;
        for name in ["p1", "q2", "q3", "z34", "z46", "z67", "z78", "z89"] {
            b |= 1 << t.index_of(name).unwrap();
        }
        assert!(s551.is_solution(b).unwrap());
    }
}
