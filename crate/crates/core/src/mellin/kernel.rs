use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use super::{analytic_part, mellin_with_shape, ContourSpec, ExpCosSquared, KernelShape, Parity};
use crate::error::{Error, Result};
use crate::specfun::zeta::zeta_unchecked;
use crate::specfun::ZETA_HALF;

/// Abscissa of the line left of the pole at 0.
const LEFT_ABSCISSA: f64 = -1.0;
/// How many lines to the right of the default one are prepared for large x.
const EXTRA_RIGHT_LINES: usize = 7;

const CACHE_X_MIN: f64 = 1e-8;
const CACHE_X_MAX: f64 = 1e6;
const CACHE_NODES: usize = 4096;

const FD_STEP: f64 = 1e-4;

/// Trapezoid rule on one vertical line, folded onto t ≥ 0 using the
/// conjugate symmetry of the integrand. The weights already contain δ/2π
/// and the factor 2 for t > 0.
#[derive(Debug, Clone)]
struct LineRule {
    abscissa: f64,
    t: Vec<f64>,
    w: Vec<Complex64>,
    /// (δ/2π) Σ |integrand| over the full line.
    mass: f64,
}

impl LineRule {
    fn new(spec: &ContourSpec, integrand: impl Fn(Complex64) -> Result<Complex64>) -> Result<Self> {
        spec.validate()?;
        let n = spec.half_nodes();
        let scale = spec.step / (2.0 * PI);
        let mut t = Vec::with_capacity(n);
        let mut w = Vec::with_capacity(n);
        let mut mass = 0.0;
        for j in 0..n {
            let tj = j as f64 * spec.step;
            let value = integrand(Complex64::new(spec.abscissa, tj))?;
            let fold = if j == 0 { 1.0 } else { 2.0 };
            t.push(tj);
            w.push(value * scale * fold);
            mass += value.norm() * scale * fold;
        }
        Ok(LineRule {
            abscissa: spec.abscissa,
            t,
            w,
            mass,
        })
    }

    /// (1/2πi) ∫ F(s) x^{-s} ds along the line, with u = ln x.
    fn integrate(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for (&t, w) in self.t.iter().zip(&self.w) {
            let (sin, cos) = (t * u).sin_cos();
            acc += w.re * cos + w.im * sin;
        }
        acc * (-self.abscissa * u).exp()
    }

    /// Value and first two u-derivatives of the line integral.
    fn integrate_with_derivatives(&self, u: f64) -> [f64; 3] {
        let mut acc = [0.0; 3];
        for (&t, w) in self.t.iter().zip(&self.w) {
            let (sin, cos) = (t * u).sin_cos();
            let e = Complex64::new(cos, -sin);
            let s = Complex64::new(self.abscissa, t);
            let base = w * e;
            let d1 = -s * base;
            let d2 = s * s * base;
            acc[0] += base.re;
            acc[1] += d1.re;
            acc[2] += d2.re;
        }
        let scale = (-self.abscissa * u).exp();
        acc.map(|v| v * scale)
    }

    /// Bound on |line integral| at u = ln x, up to the truncation tail.
    fn envelope(&self, u: f64) -> f64 {
        self.mass * (-self.abscissa * u).exp()
    }
}

/// A family of parallel lines for one integrand, plus the residue picked up
/// when the left line is used.
#[derive(Debug, Clone)]
struct LineSet {
    lines: Vec<LineRule>,
    residue: f64,
}

impl LineSet {
    fn build(
        base: &ContourSpec,
        abscissas: &[f64],
        residue: f64,
        integrand: impl Fn(Complex64) -> Result<Complex64>,
    ) -> Result<Self> {
        let lines = abscissas
            .iter()
            .map(|&c| LineRule::new(&base.at_abscissa(c), &integrand))
            .collect::<Result<Vec<_>>>()?;
        Ok(LineSet { lines, residue })
    }

    /// The line with the smallest integrand mass at u, which is also the
    /// line with the least cancellation in floating point.
    fn best(&self, u: f64) -> &LineRule {
        self.lines
            .iter()
            .min_by(|a, b| a.envelope(u).total_cmp(&b.envelope(u)))
            .expect("at least one line")
    }

    fn correction(&self, line: &LineRule) -> f64 {
        if line.abscissa < 0.0 {
            self.residue
        } else {
            0.0
        }
    }

    fn eval(&self, u: f64) -> f64 {
        let line = self.best(u);
        line.integrate(u) + self.correction(line)
    }

    fn eval_with_derivatives(&self, u: f64) -> [f64; 3] {
        let line = self.best(u);
        let mut out = line.integrate_with_derivatives(u);
        out[0] += self.correction(line);
        out
    }

    /// Bound on |integral| for x ≥ 1 from the right lines alone.
    fn right_envelope(&self, u: f64) -> f64 {
        self.lines
            .iter()
            .filter(|l| l.abscissa > 0.0)
            .map(|l| l.envelope(u))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Quintic Hermite interpolation of (V, dV/du, d²V/du²) on a uniform grid in
/// u = ln x.
#[derive(Debug, Clone)]
struct LogCache {
    u_lo: f64,
    u_hi: f64,
    h: f64,
    nodes: Vec<[f64; 3]>,
}

impl LogCache {
    fn build(lines: &LineSet) -> Self {
        let u_lo = CACHE_X_MIN.ln();
        let u_hi = CACHE_X_MAX.ln();
        let h = (u_hi - u_lo) / (CACHE_NODES - 1) as f64;
        let nodes = (0..CACHE_NODES)
            .map(|i| lines.eval_with_derivatives(u_lo + i as f64 * h))
            .collect();
        LogCache {
            u_lo,
            u_hi,
            h,
            nodes,
        }
    }

    fn get(&self, u: f64) -> Option<f64> {
        if !(u >= self.u_lo && u <= self.u_hi) {
            return None;
        }
        let pos = (u - self.u_lo) / self.h;
        let i = (pos.floor() as usize).min(self.nodes.len() - 2);
        let t = pos - i as f64;
        let [f0, d0, s0] = self.nodes[i];
        let [f1, d1, s1] = self.nodes[i + 1];
        let h = self.h;
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
        let h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 0.5 * (t3 - 2.0 * t4 + t5);
        Some(f0 * h0 + h * d0 * h1 + h * h * s0 * h2 + f1 * h3 + h * d1 * h4 + h * h * s1 * h5)
    }
}

/// a₋₁ and a₀ in f̃(s) = a₋₁/s + a₀ + O(s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaurentData {
    pub a_minus1: f64,
    pub a_zero: f64,
}

fn laurent_from_shape(shape: &dyn KernelShape, parity: Parity) -> LaurentData {
    let h = |x: f64| analytic_part(shape, Complex64::new(x, 0.0), parity).re;
    let central = |d: f64| (h(d) - h(-d)) / (2.0 * d);
    let a_zero = (4.0 * central(FD_STEP / 2.0) - central(FD_STEP)) / 3.0;
    LaurentData {
        a_minus1: h(0.0),
        a_zero,
    }
}

/// V_parity(x) together with the data needed to sum it quickly: a cache on
/// a log grid, the Laurent coefficients of f̃ at 0 and the lines used for
/// k(y).
#[derive(Debug)]
pub struct SmoothingKernel {
    parity: Parity,
    contour: ContourSpec,
    shape: Arc<dyn KernelShape>,
    v_lines: LineSet,
    k_lines: LineSet,
    cache: LogCache,
    laurent: LaurentData,
}

impl SmoothingKernel {
    pub fn new(parity: Parity, contour: ContourSpec, shape: Arc<dyn KernelShape>) -> Result<Self> {
        contour.validate()?;
        let laurent = laurent_from_shape(shape.as_ref(), parity);
        let mut abscissas = vec![LEFT_ABSCISSA];
        abscissas.extend((0..=EXTRA_RIGHT_LINES).map(|k| contour.abscissa + k as f64));
        let v_lines = LineSet::build(&contour, &abscissas, laurent.a_minus1, |s| {
            mellin_with_shape(shape.as_ref(), s, parity)
        })?;

        let k_contour = ContourSpec {
            abscissa: ContourSpec::K_DEFAULT.abscissa,
            ..contour
        };
        let mut k_abscissas = vec![LEFT_ABSCISSA];
        k_abscissas.extend((0..=4).map(|k| k_contour.abscissa + k as f64));
        let k_shape = shape.clone();
        let k_lines = LineSet::build(
            &k_contour,
            &k_abscissas,
            laurent.a_minus1 * ZETA_HALF * ZETA_HALF,
            move |s| k_integrand(k_shape.as_ref(), s, parity),
        )?;

        let cache = LogCache::build(&v_lines);
        Ok(SmoothingKernel {
            parity,
            contour,
            shape,
            v_lines,
            k_lines,
            cache,
            laurent,
        })
    }

    pub fn with_defaults(parity: Parity) -> Result<Self> {
        Self::new(parity, ContourSpec::V_DEFAULT, Arc::new(ExpCosSquared))
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn contour(&self) -> ContourSpec {
        self.contour
    }

    pub fn laurent(&self) -> LaurentData {
        self.laurent
    }

    /// f̃(s) for this kernel's shape and parity.
    pub fn mellin(&self, s: Complex64) -> Result<Complex64> {
        mellin_with_shape(self.shape.as_ref(), s, self.parity)
    }

    /// V(x), interpolated from the cache where it covers x and computed by
    /// quadrature elsewhere.
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        let u = x.ln();
        match self.cache.get(u) {
            Some(v) => v,
            None => self.v_lines.eval(u),
        }
    }

    /// V(x) by contour quadrature, bypassing the cache. The line is chosen
    /// among the prepared ones to minimise the integrand mass at x.
    pub fn eval_direct(&self, x: f64) -> Result<f64> {
        check_positive("eval_V", x)?;
        Ok(self.v_lines.eval(x.ln()))
    }

    /// V(x) by quadrature on one explicitly given line. Lines left of the
    /// origin include the residue at s = 0.
    pub fn eval_on_contour(&self, x: f64, contour: &ContourSpec) -> Result<f64> {
        check_positive("eval_V", x)?;
        check_off_origin(contour)?;
        let line = LineRule::new(contour, |s| self.mellin(s))?;
        let u = x.ln();
        let residue = if contour.abscissa < 0.0 {
            self.laurent.a_minus1
        } else {
            0.0
        };
        Ok(line.integrate(u) + residue)
    }

    /// k(y) = (1/2πi) ∫ y^{-s} f̃(s) ζ²(½+s) ds.
    pub fn k(&self, y: f64) -> Result<f64> {
        check_positive("eval_k", y)?;
        Ok(self.k_lines.eval(y.ln()))
    }

    /// k(y) on an explicitly given line.
    pub fn k_on_contour(&self, y: f64, contour: &ContourSpec) -> Result<f64> {
        check_positive("eval_k", y)?;
        check_off_origin(contour)?;
        let line = LineRule::new(contour, |s| {
            k_integrand(self.shape.as_ref(), s, self.parity)
        })?;
        let residue = if contour.abscissa < 0.0 {
            self.k_lines.residue
        } else {
            0.0
        };
        Ok(line.integrate(y.ln()) + residue)
    }

    /// An upper bound for |V(x)| when x ≥ 1, from the L¹ norm of f̃ on the
    /// prepared right lines.
    pub fn envelope(&self, x: f64) -> f64 {
        self.v_lines.right_envelope(x.max(1.0).ln())
    }

    /// Where to truncate Σ (mn)^{-½} V(mn/X) over pairs (m, n) whose
    /// products have the given density per unit length (1 for the full
    /// double sum, 1/q for one residue class).
    ///
    /// The discarded pairs mn > τX are bounded with the envelope and the
    /// divisor-function average ln(mn):
    /// density · √X ∫_τ^∞ ln(e·Xy) y^{-½} envelope(y) dy ≤ target.
    pub fn truncation(&self, scale: f64, density: f64, target: f64) -> Truncation {
        const STEP: f64 = 0.01;
        const U_MAX: f64 = 60.0;
        let weight = |u: f64| {
            let y = u.exp();
            (1.0 + scale.ln() + u).max(1.0) * y.sqrt() * self.v_lines.right_envelope(u)
        };
        let factor = density * scale.sqrt();
        let mut u = U_MAX;
        let mut tail = 0.0;
        while u > 0.0 {
            let step = factor * 0.5 * STEP * (weight(u) + weight(u - STEP));
            if tail + step > target {
                break;
            }
            tail += step;
            u -= STEP;
        }
        Truncation {
            tau: u.exp(),
            tail_bound: tail,
        }
    }
}

/// A cutoff τ for a smoothed sum and the bound on what it discards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub tau: f64,
    pub tail_bound: f64,
}

fn k_integrand(shape: &dyn KernelShape, s: Complex64, parity: Parity) -> Result<Complex64> {
    let z = zeta_unchecked(s + 0.5);
    Ok(mellin_with_shape(shape, s, parity)? * z * z)
}

fn check_positive(function: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            function,
            format!("argument {x} must be positive and finite"),
        ))
    }
}

fn check_off_origin(contour: &ContourSpec) -> Result<()> {
    if contour.abscissa.abs() < 0.05 {
        return Err(Error::domain(
            "contour",
            format!(
                "abscissa {} passes too close to the pole at 0",
                contour.abscissa
            ),
        ));
    }
    Ok(())
}

/// The four kernels V₊, V₋, V₀, V₁ for one shape and contour, built lazily.
#[derive(Debug)]
pub struct KernelFamily {
    contour: ContourSpec,
    shape: Arc<dyn KernelShape>,
    kernels: [OnceLock<SmoothingKernel>; 4],
}

impl KernelFamily {
    pub fn new(contour: ContourSpec, shape: Arc<dyn KernelShape>) -> Result<Self> {
        contour.validate()?;
        // Build one line eagerly so that shape errors surface here.
        mellin_with_shape(
            shape.as_ref(),
            Complex64::new(contour.abscissa, 0.0),
            Parity::Plus,
        )?;
        Ok(KernelFamily {
            contour,
            shape,
            kernels: Default::default(),
        })
    }

    /// The shipped shape on the default contour, with the contour height
    /// taken from `RECIP_CONTOUR_T` when that is set.
    pub fn from_env() -> Result<Self> {
        let contour = ContourSpec::V_DEFAULT.with_env_override()?;
        Self::new(contour, Arc::new(ExpCosSquared))
    }

    /// A process-wide family for the shipped shape and default contour.
    pub fn standard() -> &'static KernelFamily {
        static STANDARD: OnceLock<KernelFamily> = OnceLock::new();
        STANDARD.get_or_init(|| {
            KernelFamily::new(ContourSpec::V_DEFAULT, Arc::new(ExpCosSquared))
                .expect("default contour is valid")
        })
    }

    pub fn contour(&self) -> ContourSpec {
        self.contour
    }

    pub fn shape_name(&self) -> &'static str {
        self.shape.name()
    }

    pub fn kernel(&self, parity: Parity) -> &SmoothingKernel {
        let slot = match parity {
            Parity::Plus => 0,
            Parity::Minus => 1,
            Parity::Even => 2,
            Parity::Odd => 3,
        };
        self.kernels[slot].get_or_init(|| {
            SmoothingKernel::new(parity, self.contour, self.shape.clone())
                .expect("contour validated at construction")
        })
    }
}
