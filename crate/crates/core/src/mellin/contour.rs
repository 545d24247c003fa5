use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Envelope target for the discarded part of the line: e^{c² − T² + 2πT}.
const TAIL_TARGET: f64 = 1e-16;
const MAX_STEP: f64 = 0.1;

/// Environment variable that overrides the contour height.
pub const CONTOUR_HEIGHT_ENV: &str = "RECIP_CONTOUR_T";

/// A truncated vertical line c − iT … c + iT sampled with the trapezoid
/// rule at spacing `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub abscissa: f64,
    pub height: f64,
    pub step: f64,
}

impl ContourSpec {
    /// Line used for the kernels V.
    pub const V_DEFAULT: ContourSpec = ContourSpec {
        abscissa: 1.0,
        height: 12.0,
        step: 0.05,
    };

    /// Line used for k(y).
    pub const K_DEFAULT: ContourSpec = ContourSpec {
        abscissa: 2.0,
        height: 12.0,
        step: 0.05,
    };

    pub fn tail_bound(&self) -> f64 {
        let c = self.abscissa;
        let t = self.height;
        (c * c - t * t + 2.0 * PI * t).exp()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step <= MAX_STEP) {
            return Err(Error::domain(
                "contour",
                format!("step {} must lie in (0, {MAX_STEP}]", self.step),
            ));
        }
        if !(self.height > 0.0) || !self.abscissa.is_finite() {
            return Err(Error::domain("contour", format!("invalid line {:?}", self)));
        }
        let bound = self.tail_bound();
        if bound > TAIL_TARGET {
            return Err(Error::domain(
                "contour",
                format!(
                    "height {} leaves a tail envelope of {bound:e} at abscissa {} (need <= {TAIL_TARGET:e})",
                    self.height, self.abscissa
                ),
            ));
        }
        Ok(())
    }

    /// Smallest height meeting the tail target at abscissa `c`.
    pub fn minimal_height(c: f64) -> f64 {
        // T² − 2πT ≥ c² − ln(target)
        PI + (PI * PI + c * c - TAIL_TARGET.ln()).sqrt()
    }

    /// The same rule moved to abscissa `c`, raising the height if the
    /// tail target requires it.
    pub fn at_abscissa(&self, c: f64) -> ContourSpec {
        ContourSpec {
            abscissa: c,
            height: self.height.max(Self::minimal_height(c)),
            step: self.step,
        }
    }

    /// Applies the `RECIP_CONTOUR_T` override, if set.
    pub fn with_env_override(self) -> Result<ContourSpec> {
        match std::env::var(CONTOUR_HEIGHT_ENV) {
            Ok(raw) => {
                let height: f64 = raw.trim().parse().map_err(|_| {
                    Error::domain(
                        "contour",
                        format!("{CONTOUR_HEIGHT_ENV}={raw:?} is not a number"),
                    )
                })?;
                Ok(ContourSpec { height, ..self })
            }
            Err(_) => Ok(self),
        }
    }

    /// Number of nodes with t ≥ 0.
    pub(crate) fn half_nodes(&self) -> usize {
        (self.height / self.step).round() as usize + 1
    }
}
