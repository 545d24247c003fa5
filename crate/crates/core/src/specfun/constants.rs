use std::f64::consts::PI;

use super::zeta::riemann_zeta;
use num_complex::Complex64;

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ζ(½) to double precision. Used as a reference value in tests; the
/// constants bundle below recomputes it.
pub const ZETA_HALF: f64 = -1.460_354_508_809_586_8;

/// Constants that appear in the main terms of the reciprocity formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticConstants {
    pub euler_gamma: f64,
    /// ζ(½), evaluated by Euler–Maclaurin summation.
    pub zeta_half: f64,
    pub log_8pi: f64,
    /// γ − log 8π
    pub a: f64,
}

impl AnalyticConstants {
    pub fn compute() -> Self {
        let zeta_half = riemann_zeta(Complex64::new(0.5, 0.0))
            .expect("s = 1/2 is far from the pole")
            .re;
        let log_8pi = (8.0 * PI).ln();
        Self {
            euler_gamma: EULER_GAMMA,
            zeta_half,
            log_8pi,
            a: EULER_GAMMA - log_8pi,
        }
    }

    pub fn zeta_half_squared(&self) -> f64 {
        self.zeta_half * self.zeta_half
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_hold() {
        let c = AnalyticConstants::compute();
        assert_eq!(c.a, c.euler_gamma - c.log_8pi);
        assert!(c.zeta_half < 0.0);
        assert!((c.zeta_half - ZETA_HALF).abs() < 1e-14);
        assert!((c.a - (-2.646_955_762_627_703)).abs() < 1e-13);
    }
}
