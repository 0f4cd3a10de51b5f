//! Per-frequency building blocks of the planar cavity: longitudinal decay
//! constants, Fresnel reflection coefficients of the gap-wall interface,
//! the round-trip mode factor 1/d_q and the position kernel χ_q(z).
//!
//! Everything here lives on the imaginary frequency axis, where all
//! quantities are real. TE (s) and TM (p) polarisations are kept separate
//! throughout.

use crate::constants::SPEED_OF_LIGHT;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("zeta and k_perp cannot both vanish (kappa = 0 makes the mode factor singular)")]
    ZeroFrequencyAndWavenumber,
    #[error("round-trip factor r^2 e^(-2 kappa a) = {0} >= 1 is unphysical")]
    ModeSumDivergent(f64),
    #[error("position z = {z} outside the gap [0, {a}]")]
    PositionOutsideGap { z: f64, a: f64 },
}

/// Polarisation label for the two planar mode families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    /// Transverse electric (s).
    Te,
    /// Transverse magnetic (p).
    Tm,
}

/// All per-(ζ, k⊥) quantities assembled in one place, mainly for
/// diagnostics and tests; the integration loops use the dimensionless
/// helpers below directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub zeta: f64,
    pub k_perp: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub r_s: f64,
    pub r_p: f64,
}

impl SpectralPoint {
    pub fn new(eps1: f64, eps2: f64, zeta: f64, k_perp: f64) -> Result<Self, KernelError> {
        let kappa1 = kappa(eps1, zeta, k_perp)?;
        let kappa2 = kappa(eps2, zeta, k_perp)?;
        let (r_s, r_p) = fresnel(kappa1, kappa2, eps1, eps2);
        Ok(Self {
            zeta,
            k_perp,
            kappa1,
            kappa2,
            eps1,
            eps2,
            r_s,
            r_p,
        })
    }
}

/// Longitudinal decay constant κ = sqrt(k⊥² + ε ζ²/c²) (1/m).
pub fn kappa(eps: f64, zeta: f64, k_perp: f64) -> Result<f64, KernelError> {
    if zeta == 0.0 && k_perp == 0.0 {
        return Err(KernelError::ZeroFrequencyAndWavenumber);
    }
    let zc = zeta / SPEED_OF_LIGHT;
    Ok((k_perp * k_perp + eps * zc * zc).sqrt())
}

/// Fresnel reflection coefficients (r_s, r_p) of the gap-wall interface,
/// evaluated on the imaginary axis:
///
///   r_s = (κ₂ − κ₁)/(κ₂ + κ₁),
///   r_p = (ε₁κ₂ − ε₂κ₁)/(ε₁κ₂ + ε₂κ₁).
///
/// For ε₂ ≥ ε₁ one has r_s ≥ 0 and r_p ≤ 0, with |r_q| < 1 for finite ε.
pub fn fresnel(kappa1: f64, kappa2: f64, eps1: f64, eps2: f64) -> (f64, f64) {
    let r_s = (kappa2 - kappa1) / (kappa2 + kappa1);
    let r_p = (eps1 * kappa2 - eps2 * kappa1) / (eps1 * kappa2 + eps2 * kappa1);
    (r_s, r_p)
}

/// Round-trip mode factor 1/d_q = r² e^(−2κ₁a) / (1 − r² e^(−2κ₁a)).
pub fn mode_sum(r_q: f64, kappa1: f64, a: f64) -> Result<f64, KernelError> {
    mode_sum_u(r_q, 2.0 * kappa1 * a)
}

/// Position kernel χ_q(z) = r e^(−κ₁a) cosh(2κ₁(z − a/2)) / (1 − r² e^(−2κ₁a))
/// for z in [0, a].
pub fn chi(r_q: f64, kappa1: f64, a: f64, z: f64) -> Result<f64, KernelError> {
    if !(0.0..=a).contains(&z) {
        return Err(KernelError::PositionOutsideGap { z, a });
    }
    chi_u(r_q, 2.0 * kappa1 * a, z / a)
}

/// `mode_sum` in terms of the round-trip exponent u = 2κ₁a.
///
/// The exponential underflows to exact zero for u ≳ 1490, which is the
/// correct value there; no separate cutoff is needed.
pub(crate) fn mode_sum_u(r_q: f64, u: f64) -> Result<f64, KernelError> {
    let x = r_q * r_q * (-u).exp();
    if x >= 1.0 {
        return Err(KernelError::ModeSumDivergent(x));
    }
    Ok(x / (1.0 - x))
}

/// `chi` in terms of u = 2κ₁a and the fractional position ξ = z/a.
///
/// cosh is folded into the prefactor,
///
///   e^(−κ₁a) cosh(2κ₁(z − a/2)) = (e^(−2κ₁(a−z)) + e^(−2κ₁z)) / 2,
///
/// so no intermediate ever exceeds 1 and the kernel stays finite for
/// arbitrarily large κ₁a (near the interfaces one exponent tends to 0, and
/// the kernel legitimately does not decay).
pub(crate) fn chi_u(r_q: f64, u: f64, xi: f64) -> Result<f64, KernelError> {
    let denom = 1.0 - r_q * r_q * (-u).exp();
    if denom <= 0.0 {
        return Err(KernelError::ModeSumDivergent(1.0 - denom));
    }
    let folded = 0.5 * ((-u * (1.0 - xi)).exp() + (-u * xi).exp());
    Ok(r_q * folded / denom)
}
