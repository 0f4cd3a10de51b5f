//! The Abraham-Minkowski (Lifshitz) Casimir pressure of the symmetric
//! three-layer cavity: two half-space walls of the same material separated
//! by a gap of width `a` filled with a (usually more dilute) medium.
//!
//! The pressure is a primed Matsubara sum over imaginary frequencies of a
//! transverse-wavenumber integral,
//!
//!   P = −(k_B T/π) Σ'_m ∫₀^∞ dk⊥ k⊥ κ₁ [1/d_s + 1/d_p],
//!
//! negative for attraction. ⟨T_zz⟩ is position independent inside the gap
//! and vanishes identically outside it, so the full content of the
//! control-surface balance is the single number computed here.
//!
//! μ = 1 everywhere in this module; magnetic response only enters the
//! classical diagnostics in [`crate::classical`].

use crate::constants::{BOLTZMANN, SPEED_OF_LIGHT};
use crate::engine::{
    self, ConvergenceReport, KCutoff, QuadResult, QuadratureSpec, TermEval,
};
use crate::materials::{zero_frequency_eps_ratio, MaterialError, PermittivityModel};
use crate::planar::{fresnel, Polarization};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CavityError {
    #[error("gap width must be positive, got {0} m")]
    NonPositiveGap(f64),
    #[error("temperature must be non-negative, got {0} K")]
    NegativeTemperature(f64),
    #[error(
        "a finite transverse cutoff distorts the converged pressure integral; \
         use am_pressure_with_forced_cutoff if you really want it"
    )]
    FiniteCutoffRejected,
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
    #[error(transparent)]
    Material(#[from] MaterialError),
}

/// Wall half-space description: a dispersive material or the perfectly
/// reflecting limit (r_s² = r_p² = 1 at every frequency, including m = 0).
#[derive(Debug, Clone, PartialEq)]
pub enum WallModel {
    Material(PermittivityModel),
    IdealMetal,
}

/// The symmetric three-layer cavity: gap width, temperature, wall material
/// (both sides equal) and gap material.
#[derive(Debug, Clone, PartialEq)]
pub struct CavitySpec {
    /// Gap width a (m).
    pub gap_width: f64,
    /// Temperature (K); 0 selects the zero-temperature integral.
    pub temperature: f64,
    /// Wall half-spaces (ε₂).
    pub wall: WallModel,
    /// Gap medium (ε₁).
    pub gap: PermittivityModel,
}

impl CavitySpec {
    pub fn new(
        gap_width: f64,
        temperature: f64,
        wall: WallModel,
        gap: PermittivityModel,
    ) -> Result<Self, CavityError> {
        if !(gap_width.is_finite() && gap_width > 0.0) {
            return Err(CavityError::NonPositiveGap(gap_width));
        }
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(CavityError::NegativeTemperature(temperature));
        }
        Ok(Self {
            gap_width,
            temperature,
            wall,
            gap,
        })
    }

    /// Checks ε₂(iζ) > ε₁(iζ) on a logarithmic frequency sample. The
    /// standing assumption behind the attraction sign is that the gap is
    /// more dilute than the walls; a violation is worth a warning but is
    /// not an error.
    pub fn dilute_gap_violations(&self) -> Vec<f64> {
        let wall = match &self.wall {
            WallModel::IdealMetal => return Vec::new(),
            WallModel::Material(m) => m,
        };
        let mut bad = Vec::new();
        for i in 0..=40 {
            let zeta = 1e10 * 10f64.powf(i as f64 * 0.2); // 1e10 .. 1e18
            let e1 = self.gap.eval(zeta).unwrap_or(f64::INFINITY);
            let e2 = wall.eval(zeta).unwrap_or(f64::INFINITY);
            if e2 <= e1 {
                bad.push(zeta);
            }
        }
        bad
    }
}

/// Which interface of the gap a stress difference refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfaceSide {
    Left,
    Right,
}

/// Cavity pressure with its TE/TM split and convergence bookkeeping.
/// `pressure = te_part + tm_part` holds exactly by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureResult {
    /// Total pressure (Pa), negative = attraction.
    pub pressure: f64,
    /// TE (s) polarisation share (Pa).
    pub te_part: f64,
    /// TM (p) polarisation share (Pa).
    pub tm_part: f64,
    /// Estimated numerical error (Pa).
    pub error: f64,
    pub report: ConvergenceReport,
}

/// How reflection coefficients are produced at one frequency.
#[derive(Debug, Clone, Copy)]
pub(crate) enum ReflectKind {
    /// r_s = 1, r_p = −1 at all wavenumbers.
    IdealMetal,
    /// Finite ε₁, ε₂ at ζ > 0.
    Dielectric { eps1: f64, eps2: f64 },
    /// ζ = 0 limit: r_p from the ε-ratio limit, r_s from the κ's.
    ZeroFrequency { eps_ratio: f64 },
}

/// All per-frequency constants needed by the wavenumber integrals of both
/// stress tensors. Built once per Matsubara index (or per ζ sample on the
/// zero-temperature path) and shared across polarisations.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FrequencyContext {
    /// Lower edge of κ₁ at this frequency: sqrt(ε₁)·ζ/c (1/m).
    pub kappa1_min: f64,
    /// κ₂² − κ₁² = (ε₂ − ε₁)ζ²/c², constant in k⊥ [1/m²].
    pub kappa_sq_offset: f64,
    pub reflect: ReflectKind,
    /// lim 1/ε₁(iζ): TM weight of the flux bracket.
    pub inv_eps1: f64,
    /// (ε₁(iζ) − 1)·ζ²/(2c²): coupling strength of the position-dependent
    /// bracket [1/m²]. Zero for a vacuum gap and for the m = 0 term of any
    /// gap medium with lim ε₁ζ² = 0.
    pub coupling: f64,
}

impl FrequencyContext {
    /// Context at ζ > 0.
    pub(crate) fn at_zeta(cavity: &CavitySpec, zeta: f64) -> Result<Self, CavityError> {
        debug_assert!(zeta.is_finite() && zeta > 0.0);
        let eps1 = cavity.gap.eval(zeta)?;
        let zc = zeta / SPEED_OF_LIGHT;
        let (kappa_sq_offset, reflect) = match &cavity.wall {
            WallModel::IdealMetal => (0.0, ReflectKind::IdealMetal),
            WallModel::Material(m) => {
                let eps2 = m.eval(zeta)?;
                ((eps2 - eps1) * zc * zc, ReflectKind::Dielectric { eps1, eps2 })
            }
        };
        Ok(Self {
            kappa1_min: eps1.sqrt() * zc,
            kappa_sq_offset,
            reflect,
            inv_eps1: 1.0 / eps1,
            coupling: (eps1 - 1.0) * zc * zc / 2.0,
        })
    }

    /// Context of the m = 0 term, taking the analytic ζ → 0 limits per
    /// material class instead of evaluating the ε(0) sentinel.
    pub(crate) fn zero_frequency(cavity: &CavitySpec) -> Self {
        let gap = &cavity.gap;
        let c2 = SPEED_OF_LIGHT * SPEED_OF_LIGHT;
        // lim ε ζ²/c² keeps a plasma-model knee alive at ζ = 0
        let e1 = gap.eps_zeta_sq_limit() / c2;
        let (e2, reflect) = match &cavity.wall {
            WallModel::IdealMetal => (0.0, ReflectKind::IdealMetal),
            WallModel::Material(m) => (
                m.eps_zeta_sq_limit() / c2,
                ReflectKind::ZeroFrequency {
                    eps_ratio: zero_frequency_eps_ratio(gap, m),
                },
            ),
        };
        let inv_eps1 = match gap.zero_frequency_eps() {
            Some(e) => 1.0 / e,
            None => 0.0,
        };
        Self {
            kappa1_min: e1.sqrt(),
            kappa_sq_offset: e2 - e1,
            reflect,
            inv_eps1,
            coupling: e1 / 2.0,
        }
    }

    /// (r_s, r_p) at longitudinal decay constant κ₁ ≥ `kappa1_min`.
    #[inline]
    pub(crate) fn reflectivities(&self, kappa1: f64) -> (f64, f64) {
        match self.reflect {
            ReflectKind::IdealMetal => (1.0, -1.0),
            ReflectKind::Dielectric { eps1, eps2 } => {
                let kappa2 = (kappa1 * kappa1 + self.kappa_sq_offset).sqrt();
                fresnel(kappa1, kappa2, eps1, eps2)
            }
            ReflectKind::ZeroFrequency { eps_ratio } => {
                let kappa2 = (kappa1 * kappa1 + self.kappa_sq_offset).sqrt();
                let r_s = (kappa2 - kappa1) / (kappa2 + kappa1);
                let r_p = if eps_ratio.is_infinite() {
                    1.0
                } else {
                    (eps_ratio * kappa2 - kappa1) / (eps_ratio * kappa2 + kappa1)
                };
                (r_s, r_p)
            }
        }
    }

    /// Tail values of (r_s, r_p) as k⊥ → ∞ at this frequency.
    pub(crate) fn reflectivity_tails(&self) -> (f64, f64) {
        match self.reflect {
            ReflectKind::IdealMetal => (1.0, -1.0),
            ReflectKind::Dielectric { eps1, eps2 } => (0.0, (eps1 - eps2) / (eps1 + eps2)),
            ReflectKind::ZeroFrequency { eps_ratio } => {
                if eps_ratio.is_infinite() {
                    (0.0, 1.0)
                } else {
                    (0.0, (eps_ratio - 1.0) / (eps_ratio + 1.0))
                }
            }
        }
    }
}

/// 1 − r² e^(−y) computed without cancellation for r² e^(−y) near 1.
#[inline]
pub(crate) fn round_trip_denominator(r: f64, y: f64) -> f64 {
    -(-y).exp_m1() + (1.0 - r * r) * (-y).exp()
}

/// ∫ y² r_q² e^(−y)/(1 − r_q² e^(−y)) dy over the round-trip variable
/// y = 2κ₁a, from y₀ = 2a·κ₁_min up to the cutoff image (or ∞).
///
/// This is the whole k⊥-and-κ₁ content of one polarisation of the pressure
/// integrand; the caller applies the 1/(8a³) prefactor.
pub(crate) fn flux_integral(
    ctx: &FrequencyContext,
    gap_width: f64,
    pol: Polarization,
    spec: &QuadratureSpec,
) -> QuadResult {
    let two_a = 2.0 * gap_width;
    let y0 = two_a * ctx.kappa1_min;
    let ctx = *ctx;
    let f = move |y: f64| {
        let kappa1 = y / two_a;
        let (r_s, r_p) = ctx.reflectivities(kappa1);
        let r = match pol {
            Polarization::Te => r_s,
            Polarization::Tm => r_p,
        };
        if r == 0.0 {
            return 0.0;
        }
        let num = r * r * (-y).exp();
        if num == 0.0 {
            return 0.0;
        }
        y * y * num / round_trip_denominator(r, y)
    };
    match spec.k_cutoff {
        KCutoff::Infinite => engine::integrate_semi_infinite(
            f,
            y0,
            2.0,
            spec.rel_tol,
            spec.abs_tol,
            spec.max_quadrature_evals_per_term,
        ),
        KCutoff::Finite(lambda) => {
            let kappa_top = (lambda * lambda + ctx.kappa1_min * ctx.kappa1_min).sqrt();
            engine::integrate_finite(
                f,
                y0,
                two_a * kappa_top,
                spec.rel_tol,
                spec.abs_tol,
                spec.max_quadrature_evals_per_term,
            )
        }
    }
}

/// k_B T / (8 π a³): converts the summed raw flux integrals into pascal.
pub(crate) fn pressure_prefactor(gap_width: f64, temperature: f64) -> f64 {
    BOLTZMANN * temperature
        / (std::f64::consts::PI * 8.0 * gap_width * gap_width * gap_width)
}

/// Zero-temperature analogue: 1/(8 π a³), to be combined with the
/// (ħ/2π)∫dζ replacement of k_B T Σ'.
pub(crate) fn pressure_prefactor_t0(gap_width: f64) -> f64 {
    1.0 / (std::f64::consts::PI * 8.0 * gap_width * gap_width * gap_width)
}

fn identical_media(cavity: &CavitySpec) -> bool {
    matches!(&cavity.wall, WallModel::Material(m) if *m == cavity.gap)
}

/// One polarisation summed over frequencies; returns the raw sum, its raw
/// numerical error (quadrature plus truncation tail) and the report.
fn summed_flux(
    cavity: &CavitySpec,
    pol: Polarization,
    spec: &QuadratureSpec,
) -> Result<(f64, f64, ConvergenceReport), CavityError> {
    let a = cavity.gap_width;
    if cavity.temperature > 0.0 {
        let t = cavity.temperature;
        let mut term_err: Option<CavityError> = None;
        let mut term = |m: usize| -> TermEval {
            if term_err.is_some() {
                return 0.0.into();
            }
            let ctx = if m == 0 {
                FrequencyContext::zero_frequency(cavity)
            } else {
                match engine::matsubara_frequency(m, t)
                    .map_err(CavityError::from)
                    .and_then(|z| FrequencyContext::at_zeta(cavity, z))
                {
                    Ok(c) => c,
                    Err(e) => {
                        term_err = Some(e);
                        return 0.0.into();
                    }
                }
            };
            flux_integral(&ctx, a, pol, spec).into()
        };
        let parts = engine::matsubara_sum_instrumented(&mut term, spec);
        if let Some(e) = term_err {
            return Err(e);
        }
        // an infinite tail (non-convergence) deliberately poisons the
        // error figure; the flag in the report says why
        Ok((
            parts.primed_value(),
            parts.quad_error + parts.report.tail_estimate,
            parts.report,
        ))
    } else {
        let mut inner_ok = true;
        let mut inner_evals: u64 = 0;
        let mut term_err: Option<CavityError> = None;
        let inner_spec = QuadratureSpec {
            rel_tol: spec.rel_tol * 0.1,
            ..*spec
        };
        let (value, mut report) = engine::zero_temperature_integral(
            |zeta| {
                if term_err.is_some() {
                    return 0.0;
                }
                let ctx = match FrequencyContext::at_zeta(cavity, zeta) {
                    Ok(c) => c,
                    Err(e) => {
                        term_err = Some(e);
                        return 0.0;
                    }
                };
                let q = flux_integral(&ctx, a, pol, &inner_spec);
                inner_ok &= q.converged;
                inner_evals += q.evals;
                q.value
            },
            SPEED_OF_LIGHT / (2.0 * a),
            spec,
        );
        if let Some(e) = term_err {
            return Err(e);
        }
        report.converged &= inner_ok;
        report.total_function_evals += inner_evals;
        Ok((value, report.tail_estimate, report))
    }
}

/// The cavity pressure. Negative means the walls attract.
///
/// Identical wall and gap materials short-circuit to an exact zero; finite
/// transverse cutoffs are rejected (they belong to the position-resolved
/// diagnostics), use [`am_pressure_with_forced_cutoff`] to override.
pub fn am_pressure(
    cavity: &CavitySpec,
    spec: &QuadratureSpec,
) -> Result<PressureResult, CavityError> {
    if matches!(spec.k_cutoff, KCutoff::Finite(_)) {
        return Err(CavityError::FiniteCutoffRejected);
    }
    am_pressure_with_forced_cutoff(cavity, spec)
}

/// [`am_pressure`] without the finite-cutoff guard.
pub fn am_pressure_with_forced_cutoff(
    cavity: &CavitySpec,
    spec: &QuadratureSpec,
) -> Result<PressureResult, CavityError> {
    spec.validate()?;
    if identical_media(cavity) {
        return Ok(PressureResult {
            pressure: 0.0,
            te_part: 0.0,
            tm_part: 0.0,
            error: 0.0,
            report: ConvergenceReport {
                matsubara_terms_used: 0,
                tail_estimate: 0.0,
                total_function_evals: 0,
                converged: true,
            },
        });
    }

    let (s_raw, s_err, s_rep) = summed_flux(cavity, Polarization::Te, spec)?;
    let (p_raw, p_err, p_rep) = summed_flux(cavity, Polarization::Tm, spec)?;

    let pref = if cavity.temperature > 0.0 {
        pressure_prefactor(cavity.gap_width, cavity.temperature)
    } else {
        pressure_prefactor_t0(cavity.gap_width)
    };

    let te_part = -(pref * s_raw);
    let tm_part = -(pref * p_raw);
    let error = pref * (s_err + p_err);
    let mut report = s_rep.merge(p_rep);
    report.tail_estimate = pref * (s_rep.tail_estimate + p_rep.tail_estimate);

    Ok(PressureResult {
        pressure: te_part + tm_part,
        te_part,
        tm_part,
        error,
        report,
    })
}

/// Normal-stress difference across one gap interface, with the outside
/// stress identically zero. For the left interface this equals the gap
/// pressure itself; the right interface carries the same magnitude with
/// the opposite orientation (its outward normal points the other way).
pub fn am_stress_difference(
    side: InterfaceSide,
    cavity: &CavitySpec,
    spec: &QuadratureSpec,
) -> Result<PressureResult, CavityError> {
    let mut r = am_pressure(cavity, spec)?;
    if side == InterfaceSide::Right {
        r.pressure = -r.pressure;
        r.te_part = -r.te_part;
        r.tm_part = -r.tm_part;
    }
    Ok(r)
}

/// Perfectly reflecting walls around a vacuum gap: the analytic reference
/// branch with r_s² = r_p² = 1 at every frequency.
pub fn ideal_metal_limit(
    gap_width: f64,
    temperature: f64,
    spec: &QuadratureSpec,
) -> Result<PressureResult, CavityError> {
    let cavity = CavitySpec::new(
        gap_width,
        temperature,
        WallModel::IdealMetal,
        PermittivityModel::vacuum(),
    )?;
    am_pressure(&cavity, spec)
}
