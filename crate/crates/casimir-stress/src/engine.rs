//! Matsubara frequency generation, adaptive transverse-wavenumber
//! quadrature and truncation control shared by both cavity-stress modules.
//!
//! Everything here is deterministic: panels are split worst-error-first
//! with a fixed tie-break, final sums run in a fixed order, and no state is
//! shared between evaluations. Distinct frequency terms may be evaluated
//! concurrently by callers; the engine itself is single-threaded.

use crate::constants::{BOLTZMANN, REDUCED_PLANCK};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("temperature must be positive for Matsubara frequencies, got {0} K")]
    NonPositiveTemperature(f64),
    #[error("relative tolerance must be positive, got {0}")]
    NonPositiveRelTol(f64),
    #[error("absolute tolerance must be non-negative, got {0}")]
    NegativeAbsTol(f64),
    #[error("finite transverse-wavenumber cutoff must be positive, got {0}")]
    NonPositiveCutoff(f64),
    #[error("evaluation budget must be nonzero")]
    ZeroBudget,
}

/// Transverse-wavenumber integration limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KCutoff {
    /// The physical semi-infinite integral.
    Infinite,
    /// Hard cutoff Λ (1/m), available as a diagnostic.
    Finite(f64),
}

/// Tolerances, truncation policy and the optional transverse cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance on every reported quantity.
    pub rel_tol: f64,
    /// Absolute tolerance floor (Pa).
    pub abs_tol: f64,
    /// Hard limit on the number of Matsubara terms.
    pub max_matsubara_terms: usize,
    /// Transverse-wavenumber cutoff.
    pub k_cutoff: KCutoff,
    /// Evaluation budget for each one-dimensional quadrature.
    pub max_quadrature_evals_per_term: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-20,
            max_matsubara_terms: 100_000,
            k_cutoff: KCutoff::Infinite,
            max_quadrature_evals_per_term: 10_000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), EngineError> {
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(EngineError::NonPositiveRelTol(self.rel_tol));
        }
        if !(self.abs_tol.is_finite() && self.abs_tol >= 0.0) {
            return Err(EngineError::NegativeAbsTol(self.abs_tol));
        }
        if let KCutoff::Finite(l) = self.k_cutoff {
            if !(l.is_finite() && l > 0.0) {
                return Err(EngineError::NonPositiveCutoff(l));
            }
        }
        if self.max_matsubara_terms == 0 || self.max_quadrature_evals_per_term == 0 {
            return Err(EngineError::ZeroBudget);
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_cutoff(mut self, k_cutoff: KCutoff) -> Self {
        self.k_cutoff = k_cutoff;
        self
    }
}

/// How a summed or integrated quantity converged.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConvergenceReport {
    pub matsubara_terms_used: usize,
    /// Estimated truncation tail (same units as the value).
    pub tail_estimate: f64,
    pub total_function_evals: u64,
    pub converged: bool,
}

impl ConvergenceReport {
    pub fn merge(self, other: ConvergenceReport) -> ConvergenceReport {
        ConvergenceReport {
            matsubara_terms_used: self.matsubara_terms_used.max(other.matsubara_terms_used),
            tail_estimate: self.tail_estimate + other.tail_estimate,
            total_function_evals: self.total_function_evals + other.total_function_evals,
            converged: self.converged && other.converged,
        }
    }
}

/// Result of a one-dimensional adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evals: u64,
    pub converged: bool,
}

/// One evaluated series term with its own accuracy bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermEval {
    pub value: f64,
    pub error: f64,
    pub evals: u64,
    pub converged: bool,
}

impl From<f64> for TermEval {
    fn from(value: f64) -> Self {
        TermEval {
            value,
            error: 0.0,
            evals: 1,
            converged: true,
        }
    }
}

impl From<QuadResult> for TermEval {
    fn from(q: QuadResult) -> Self {
        TermEval {
            value: q.value,
            error: q.error,
            evals: q.evals,
            converged: q.converged,
        }
    }
}

/// Matsubara frequency ζ_m = 2π k_B T m / ħ (rad/s); exactly 0 for m = 0.
pub fn matsubara_frequency(m: usize, temperature: f64) -> Result<f64, EngineError> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(EngineError::NonPositiveTemperature(temperature));
    }
    Ok(2.0 * std::f64::consts::PI * BOLTZMANN * temperature * m as f64 / REDUCED_PLANCK)
}

// 15-point Kronrod nodes on [-1, 1] (positive half) with the embedded
// 7-point Gauss rule, as tabulated for the classic QUADPACK qk15 kernel.
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

/// Gauss-Kronrod 7/15 on [a, b]: returns (kronrod value, error estimate).
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();

    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for (j, &v) in fv.iter().enumerate() {
        let w = WGK[if j < 8 { j } else { 14 - j }];
        if j != 7 {
            res_asc += w * (v - mean).abs();
        }
    }

    let value = kronrod * half;
    let raw_err = ((kronrod - gauss) * half).abs();
    res_abs *= half.abs();
    res_asc *= half.abs();

    // QUADPACK-style error rescaling
    let mut err = raw_err;
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    seq: u64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.seq == other.seq
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on error, older panel wins ties for determinism
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Adaptive Gauss-Kronrod quadrature of `f` over the finite interval
/// [a, b] to `rel_tol`/`abs_tol`, within an evaluation budget.
pub fn integrate_finite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_evals: usize,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            evals: 0,
            converged: true,
        };
    }
    let mut evals: u64 = 0;
    let mut seq: u64 = 0;
    let mut heap = BinaryHeap::new();

    let (v, e) = gk15(&mut f, a, b);
    evals += 15;
    let mut total_value = v;
    let mut total_error = e;
    heap.push(Panel {
        a,
        b,
        value: v,
        error: e,
        seq,
    });

    let mut converged = total_error <= rel_tol * total_value.abs() + abs_tol;
    while !converged {
        if evals + 30 > max_evals as u64 {
            break;
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in floating point
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        evals += 30;
        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        seq += 1;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            seq,
        });
        seq += 1;
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            seq,
        });
        converged = total_error <= rel_tol * total_value.abs() + abs_tol;
    }

    // fixed summation order: left-to-right over the final panel set
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum::<f64>();
    let error = panels.iter().map(|p| p.error).sum::<f64>();

    QuadResult {
        value,
        error,
        evals,
        converged: error <= rel_tol * value.abs() + abs_tol,
    }
}

/// Adaptive quadrature of `f` over [lower, ∞) using the rational map
/// x = lower + scale·t/(1−t). `scale` should sit near the integrand's decay
/// length so the bulk of the mass lands at moderate t.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    lower: f64,
    scale: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_evals: usize,
) -> QuadResult {
    let g = move |t: f64| {
        let one_minus = 1.0 - t;
        let x = lower + scale * t / one_minus;
        let jac = scale / (one_minus * one_minus);
        let fx = f(x);
        if fx == 0.0 {
            0.0
        } else {
            fx * jac
        }
    };
    integrate_finite(g, 0.0, 1.0, rel_tol, abs_tol, max_evals)
}

/// Transverse-wavenumber integral ∫ dk⊥ of `integrand` from 0 up to the
/// cutoff in `spec` (or to infinity). `scale` sets the rational map for the
/// semi-infinite branch.
pub fn integrate_kperp<F: FnMut(f64) -> f64>(
    integrand: F,
    scale: f64,
    spec: &QuadratureSpec,
) -> QuadResult {
    match spec.k_cutoff {
        KCutoff::Infinite => integrate_semi_infinite(
            integrand,
            0.0,
            scale,
            spec.rel_tol,
            spec.abs_tol,
            spec.max_quadrature_evals_per_term,
        ),
        KCutoff::Finite(lambda) => integrate_finite(
            integrand,
            0.0,
            lambda,
            spec.rel_tol,
            spec.abs_tol,
            spec.max_quadrature_evals_per_term,
        ),
    }
}

/// Instrumented pieces of a primed Matsubara sum: the m = 0 term and the
/// m ≥ 1 remainder are kept separate so the half-weight bookkeeping stays
/// algebraically checkable. `quad_error` accumulates the per-term
/// integration errors, distinct from the truncation tail in the report.
#[derive(Debug, Clone, Copy)]
pub struct MatsubaraParts {
    pub zero_term: f64,
    pub rest: f64,
    pub quad_error: f64,
    pub report: ConvergenceReport,
}

impl MatsubaraParts {
    /// The primed sum: half weight on m = 0.
    pub fn primed_value(&self) -> f64 {
        0.5 * self.zero_term + self.rest
    }

    /// The unprimed sum: full weight on m = 0.
    pub fn full_weight_value(&self) -> f64 {
        self.zero_term + self.rest
    }
}

/// Primed Matsubara sum ½·term(0) + Σ_{m≥1} term(m).
///
/// Truncation needs three consecutive terms below
/// rel_tol·|partial sum| + abs_tol *and* a geometric tail bound (from the
/// last term ratio) below the same threshold, so the reported
/// `tail_estimate` respects the tolerance whenever `converged` is set.
/// Hitting `max_matsubara_terms` without decay flags `converged = false`.
pub fn matsubara_sum<T, F>(mut term: F, spec: &QuadratureSpec) -> (f64, ConvergenceReport)
where
    T: Into<TermEval>,
    F: FnMut(usize) -> T,
{
    let parts = matsubara_sum_instrumented(&mut term, spec);
    (parts.primed_value(), parts.report)
}

/// Geometric extrapolation of the remaining tail after the last kept term.
fn geometric_tail(last_abs: f64, prev_abs: f64) -> f64 {
    if last_abs == 0.0 {
        return 0.0;
    }
    if prev_abs.is_finite() && prev_abs > 0.0 {
        let ratio = last_abs / prev_abs;
        if ratio < 1.0 {
            return last_abs * ratio / (1.0 - ratio);
        }
    }
    last_abs
}

pub fn matsubara_sum_instrumented<T, F>(term: &mut F, spec: &QuadratureSpec) -> MatsubaraParts
where
    T: Into<TermEval>,
    F: FnMut(usize) -> T,
{
    let t0: TermEval = term(0).into();
    let mut rest = 0.0f64;
    let mut quad_error = t0.error * 0.5;
    let mut evals = t0.evals;
    let mut all_quad_converged = t0.converged;

    let mut below_count = 0usize;
    let mut last_abs = f64::INFINITY;
    #[allow(unused_assignments)]
    let mut prev_abs = f64::INFINITY;
    let mut decayed = false;
    let mut terms_used = 1usize;
    let mut tail = f64::INFINITY;

    for m in 1..spec.max_matsubara_terms {
        let t: TermEval = term(m).into();
        rest += t.value;
        quad_error += t.error;
        evals += t.evals;
        all_quad_converged &= t.converged;
        terms_used = m + 1;

        let partial = 0.5 * t0.value + rest;
        let threshold = spec.rel_tol * partial.abs() + spec.abs_tol;
        prev_abs = last_abs;
        last_abs = t.value.abs();
        if last_abs <= threshold {
            below_count += 1;
            if below_count >= 3 {
                tail = geometric_tail(last_abs, prev_abs);
                if tail <= threshold {
                    decayed = true;
                    break;
                }
                // decay too slow for the extrapolated tail: keep summing
                below_count = 2;
            }
        } else {
            below_count = 0;
        }
    }

    let report = ConvergenceReport {
        matsubara_terms_used: terms_used,
        tail_estimate: if decayed { tail } else { f64::INFINITY },
        total_function_evals: evals,
        converged: decayed && all_quad_converged,
    };
    MatsubaraParts {
        zero_term: t0.value,
        rest,
        quad_error,
        report,
    }
}

/// Zero-temperature replacement of the primed sum:
/// k_B T Σ'_m → (ħ/2π) ∫₀^∞ dζ, applied to `term(ζ)`.
///
/// `zeta_scale` sets the rational map of the semi-infinite ζ integral.
pub fn zero_temperature_integral<F: FnMut(f64) -> f64>(
    term: F,
    zeta_scale: f64,
    spec: &QuadratureSpec,
) -> (f64, ConvergenceReport) {
    let q = integrate_semi_infinite(
        term,
        0.0,
        zeta_scale,
        spec.rel_tol,
        spec.abs_tol,
        spec.max_quadrature_evals_per_term,
    );
    let pref = REDUCED_PLANCK / (2.0 * std::f64::consts::PI);
    (
        pref * q.value,
        ConvergenceReport {
            matsubara_terms_used: 0,
            tail_estimate: pref * q.error,
            total_function_evals: q.evals,
            converged: q.converged,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn matsubara_frequency_basics() {
        assert_eq!(matsubara_frequency(0, 300.0).unwrap(), 0.0);
        let z1 = matsubara_frequency(1, 300.0).unwrap();
        let z2 = matsubara_frequency(2, 300.0).unwrap();
        assert_eq!(z2, 2.0 * z1);
        // 2π k_B T / ħ at 300 K
        assert_relative_eq!(z1, 2.4677e14, max_relative = 1e-4);
        assert!(matsubara_frequency(1, 0.0).is_err());
        assert!(matsubara_frequency(1, -5.0).is_err());
    }

    #[test]
    fn finite_quadrature_polynomial() {
        // GK15 integrates low-degree polynomials essentially exactly
        let q = integrate_finite(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-12, 0.0, 10_000);
        assert!(q.converged);
        assert_relative_eq!(q.value, 16.0, max_relative = 1e-14);
    }

    #[test]
    fn semi_infinite_exponential() {
        // ∫₀^∞ k e^(-2k) dk = 1/4
        let q = integrate_semi_infinite(|k| k * (-2.0 * k).exp(), 0.0, 0.5, 1e-10, 0.0, 10_000);
        assert!(q.converged);
        assert_relative_eq!(q.value, 0.25, max_relative = 1e-10);
    }

    #[test]
    fn zero_integrand_is_zero() {
        let q = integrate_semi_infinite(|_| 0.0, 0.0, 1.0, 1e-10, 0.0, 10_000);
        assert_eq!(q.value, 0.0);
        assert!(q.converged);
    }

    #[test]
    fn finite_cutoff_linear_growth() {
        // integrand -> 1 as k -> ∞: the cutoff integral grows linearly and
        // the slope between Λ and 2Λ recovers the tail constant.
        let f = |k: f64| k * k / (1.0 + k * k);
        let spec = QuadratureSpec::default();
        let lambda = 50.0;
        let i1 = integrate_kperp(f, 1.0, &spec.with_cutoff(KCutoff::Finite(lambda))).value;
        let i2 = integrate_kperp(f, 1.0, &spec.with_cutoff(KCutoff::Finite(2.0 * lambda))).value;
        assert_relative_eq!((i2 - i1) / lambda, 1.0, max_relative = 1e-3);
    }

    #[test]
    fn budget_exhaustion_reports_nonconverged() {
        // nasty oscillatory integrand with a tiny budget
        let q = integrate_finite(|x: f64| (50.0 * x).sin() / (1e-3 + x * x), 0.0, 10.0, 1e-14, 0.0, 60);
        assert!(!q.converged);
        assert!(q.value.is_finite());
    }

    #[test]
    fn geometric_series_sum() {
        // term(m) = (1/2)^m: primed sum = 1/2 + (1/2 + 1/4 + ...) = 1.5
        let spec = QuadratureSpec::default();
        let (value, report) = matsubara_sum(|m| 0.5f64.powi(m as i32), &spec);
        assert!(report.converged);
        assert_relative_eq!(value, 1.5, max_relative = 1e-7);
        assert!(report.tail_estimate < 1e-6);
    }

    #[test]
    fn zero_series_and_half_weight() {
        let spec = QuadratureSpec::default();
        let (value, _) = matsubara_sum(|_| 0.0, &spec);
        assert_eq!(value, 0.0);

        // term(0) = 2, rest zero -> primed sum 1.0
        let (value, _) = matsubara_sum(|m| if m == 0 { 2.0 } else { 0.0 }, &spec);
        assert_eq!(value, 1.0);
    }

    #[test]
    fn half_weight_identity_is_algebraic() {
        let spec = QuadratureSpec::default();
        let mut term = |m: usize| (0.8f64).powi(m as i32) * 3.7;
        let parts = matsubara_sum_instrumented(&mut term, &spec);
        // replacing the half weight by full weight moves the value by
        // exactly half the zero term: exact on the instrumented parts
        assert_eq!(parts.primed_value(), 0.5 * parts.zero_term + parts.rest);
        assert_eq!(parts.full_weight_value(), parts.zero_term + parts.rest);
        assert_relative_eq!(
            parts.full_weight_value() - parts.primed_value(),
            0.5 * parts.zero_term,
            max_relative = 1e-14
        );
    }

    #[test]
    fn converged_tail_respects_tolerance_even_for_slow_decay() {
        // ratio 0.995: individual terms cross the threshold long before the
        // extrapolated tail does; the sum must keep going until the tail
        // itself is inside the tolerance
        let spec = QuadratureSpec::default().with_rel_tol(1e-6);
        let (value, report) = matsubara_sum(|m| 0.995f64.powi(m as i32), &spec);
        assert!(report.converged);
        let exact = 0.5 + 0.995 / (1.0 - 0.995);
        assert_relative_eq!(value, exact, max_relative = 1e-5);
        assert!(
            report.tail_estimate <= spec.rel_tol * value.abs() + spec.abs_tol,
            "tail {} exceeds tolerance",
            report.tail_estimate
        );
    }

    #[test]
    fn non_decaying_series_flags_failure() {
        let spec = QuadratureSpec {
            max_matsubara_terms: 200,
            ..QuadratureSpec::default()
        };
        let (value, report) = matsubara_sum(|m| 1.0 + m as f64 * 0.0, &spec);
        assert!(!report.converged);
        assert!(value.is_finite());
        assert_eq!(report.matsubara_terms_used, 200);
    }

    #[test]
    fn zero_temperature_exponential() {
        // term = e^(-ζ/ζ0) -> (ħ/2π) ζ0
        let zeta0 = 3.0e14;
        let spec = QuadratureSpec::default();
        let (value, report) = zero_temperature_integral(|z| (-z / zeta0).exp(), zeta0, &spec);
        assert!(report.converged);
        assert_relative_eq!(
            value,
            REDUCED_PLANCK / (2.0 * std::f64::consts::PI) * zeta0,
            max_relative = 1e-9
        );
    }

    #[test]
    fn halving_tolerance_stays_within_reported_error() {
        let f = |k: f64| (k * k + 0.3 * (7.0 * k).sin().powi(2)) * (-1.3 * k).exp();
        let loose = integrate_semi_infinite(f, 0.0, 1.0, 1e-6, 0.0, 10_000);
        let tight = integrate_semi_infinite(f, 0.0, 1.0, 5e-7, 0.0, 10_000);
        assert!(loose.converged && tight.converged);
        assert!((loose.value - tight.value).abs() <= loose.error);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        assert!(QuadratureSpec {
            rel_tol: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(QuadratureSpec {
            k_cutoff: KCutoff::Finite(-1.0),
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
