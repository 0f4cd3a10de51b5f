//! Relative permittivity models on the imaginary frequency axis.
//!
//! Every causal, passive dielectric has a real permittivity ε(iζ) ≥ 1 that
//! decreases monotonically towards 1 along the imaginary axis. The model
//! family below covers the usual closed forms:
//!
//! * `Constant`: a frequency-independent dielectric constant,
//! * `Drude`   : ε(iζ) = 1 + ω_p²/(ζ(ζ+γ)),
//! * `Plasma`  : ε(iζ) = 1 + ω_p²/ζ²,
//! * `Lorentz` : ε(iζ) = 1 + Σ_j f_j/(ω_j² + ζ² + γ_jζ).
//!
//! Drude and plasma models diverge at ζ = 0; evaluation there returns an
//! infinity sentinel and downstream zero-frequency terms must branch on
//! [`ZeroFrequencyClass`] instead.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MaterialError {
    #[error("constant permittivity must be >= 1, got {0}")]
    ConstantBelowOne(f64),
    #[error("plasma frequency must be positive, got {0}")]
    NonPositivePlasmaFrequency(f64),
    #[error("damping rate must be positive, got {0}")]
    NonPositiveDamping(f64),
    #[error("Lorentz oscillator strength must be positive, got {0}")]
    NonPositiveOscillatorStrength(f64),
    #[error("Lorentz resonance frequency must be positive, got {0}; use a Drude or plasma model for free carriers")]
    NonPositiveResonance(f64),
    #[error("Lorentz damping must be non-negative, got {0}")]
    NegativeLorentzDamping(f64),
    #[error("Lorentz model needs at least one oscillator")]
    EmptyLorentz,
    #[error("negative imaginary frequency {0}")]
    NegativeFrequency(f64),
}

/// One Lorentz oscillator: strength f [rad²/s²], resonance ω (rad/s),
/// damping γ (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzTerm {
    pub strength: f64,
    pub omega: f64,
    pub gamma: f64,
}

/// A material's ε(iζ) model. Construct through the checked constructors so
/// that invalid parameters are rejected up front rather than at evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum PermittivityModel {
    Constant(f64),
    Drude { omega_p: f64, gamma: f64 },
    Plasma { omega_p: f64 },
    Lorentz(Vec<LorentzTerm>),
}

/// Behaviour of ε(iζ) as ζ → 0⁺.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroFrequencyClass {
    /// ε(0) finite (constant and Lorentz models).
    Finite,
    /// ε ~ ω_p²/(γζ) (Drude).
    DivergentAsOneOverZeta,
    /// ε ~ ω_p²/ζ² (plasma).
    DivergentAsOneOverZetaSquared,
}

impl ZeroFrequencyClass {
    /// Divergence exponent n in ε ~ ζ⁻ⁿ.
    fn exponent(self) -> i32 {
        match self {
            ZeroFrequencyClass::Finite => 0,
            ZeroFrequencyClass::DivergentAsOneOverZeta => 1,
            ZeroFrequencyClass::DivergentAsOneOverZetaSquared => 2,
        }
    }
}

impl PermittivityModel {
    pub fn constant(eps: f64) -> Result<Self, MaterialError> {
        if !(eps.is_finite() && eps >= 1.0) {
            return Err(MaterialError::ConstantBelowOne(eps));
        }
        Ok(PermittivityModel::Constant(eps))
    }

    /// Vacuum, ε ≡ 1.
    pub fn vacuum() -> Self {
        PermittivityModel::Constant(1.0)
    }

    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self, MaterialError> {
        if !(omega_p.is_finite() && omega_p > 0.0) {
            return Err(MaterialError::NonPositivePlasmaFrequency(omega_p));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(MaterialError::NonPositiveDamping(gamma));
        }
        Ok(PermittivityModel::Drude { omega_p, gamma })
    }

    pub fn plasma(omega_p: f64) -> Result<Self, MaterialError> {
        if !(omega_p.is_finite() && omega_p > 0.0) {
            return Err(MaterialError::NonPositivePlasmaFrequency(omega_p));
        }
        Ok(PermittivityModel::Plasma { omega_p })
    }

    pub fn lorentz(terms: Vec<LorentzTerm>) -> Result<Self, MaterialError> {
        if terms.is_empty() {
            return Err(MaterialError::EmptyLorentz);
        }
        for t in &terms {
            if !(t.strength.is_finite() && t.strength > 0.0) {
                return Err(MaterialError::NonPositiveOscillatorStrength(t.strength));
            }
            if !(t.omega.is_finite() && t.omega > 0.0) {
                return Err(MaterialError::NonPositiveResonance(t.omega));
            }
            if !(t.gamma.is_finite() && t.gamma >= 0.0) {
                return Err(MaterialError::NegativeLorentzDamping(t.gamma));
            }
        }
        Ok(PermittivityModel::Lorentz(terms))
    }

    /// ε(iζ) for ζ ≥ 0. Drude and plasma models return `f64::INFINITY` at
    /// ζ = 0; callers evaluating a zero-frequency term must branch on
    /// [`Self::zero_frequency_class`] instead of consuming the sentinel.
    pub fn eval(&self, zeta: f64) -> Result<f64, MaterialError> {
        if zeta < 0.0 || zeta.is_nan() {
            return Err(MaterialError::NegativeFrequency(zeta));
        }
        Ok(match self {
            PermittivityModel::Constant(eps) => *eps,
            PermittivityModel::Drude { omega_p, gamma } => {
                if zeta == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 + omega_p * omega_p / (zeta * (zeta + gamma))
                }
            }
            PermittivityModel::Plasma { omega_p } => {
                if zeta == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 + (omega_p / zeta) * (omega_p / zeta)
                }
            }
            PermittivityModel::Lorentz(terms) => {
                1.0 + terms
                    .iter()
                    .map(|t| t.strength / (t.omega * t.omega + zeta * zeta + t.gamma * zeta))
                    .sum::<f64>()
            }
        })
    }

    pub fn zero_frequency_class(&self) -> ZeroFrequencyClass {
        match self {
            PermittivityModel::Constant(_) | PermittivityModel::Lorentz(_) => {
                ZeroFrequencyClass::Finite
            }
            PermittivityModel::Drude { .. } => ZeroFrequencyClass::DivergentAsOneOverZeta,
            PermittivityModel::Plasma { .. } => ZeroFrequencyClass::DivergentAsOneOverZetaSquared,
        }
    }

    /// lim ζ→0 ε(iζ)·ζ². Nonzero only for the plasma model (ω_p²), where it
    /// keeps the zero-frequency TE reflection alive.
    pub fn eps_zeta_sq_limit(&self) -> f64 {
        match self {
            PermittivityModel::Plasma { omega_p } => omega_p * omega_p,
            _ => 0.0,
        }
    }

    /// Finite ε(0) when the class is `Finite`.
    pub fn zero_frequency_eps(&self) -> Option<f64> {
        match self {
            PermittivityModel::Constant(eps) => Some(*eps),
            PermittivityModel::Lorentz(terms) => Some(
                1.0 + terms
                    .iter()
                    .map(|t| t.strength / (t.omega * t.omega))
                    .sum::<f64>(),
            ),
            _ => None,
        }
    }

    /// Leading coefficient of the ζ → 0 behaviour: ε(0) itself for finite
    /// models, ω_p²/γ for Drude (ε ≈ coeff/ζ), ω_p² for plasma
    /// (ε ≈ coeff/ζ²). Used to take ratio limits like ε₁/ε₂ at ζ = 0.
    pub fn zero_frequency_strength(&self) -> f64 {
        match self {
            PermittivityModel::Constant(eps) => *eps,
            PermittivityModel::Lorentz(_) => self.zero_frequency_eps().unwrap(),
            PermittivityModel::Drude { omega_p, gamma } => omega_p * omega_p / gamma,
            PermittivityModel::Plasma { omega_p } => omega_p * omega_p,
        }
    }
}

/// lim ζ→0 of ε_num(iζ)/ε_den(iζ). Returns `f64::INFINITY` when the
/// numerator diverges faster.
pub fn zero_frequency_eps_ratio(num: &PermittivityModel, den: &PermittivityModel) -> f64 {
    let (cn, cd) = (num.zero_frequency_class(), den.zero_frequency_class());
    match cn.exponent().cmp(&cd.exponent()) {
        std::cmp::Ordering::Less => 0.0,
        std::cmp::Ordering::Greater => f64::INFINITY,
        std::cmp::Ordering::Equal => num.zero_frequency_strength() / den.zero_frequency_strength(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn constant_is_constant() {
        let m = PermittivityModel::constant(2.0).unwrap();
        for zeta in [0.0, 1.0, 1e12, 1e18] {
            assert_eq!(m.eval(zeta).unwrap(), 2.0);
        }
    }

    #[test]
    fn plasma_at_its_own_frequency() {
        let m = PermittivityModel::plasma(9.0e15).unwrap();
        assert_relative_eq!(m.eval(9.0e15).unwrap(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn drude_hand_value() {
        // 1 + ω_p²/(ζ(ζ+γ)) at ω_p = 1.38e16, γ = 5.07e13, ζ = 1e15:
        // 1 + 1.9044e32 / (1e15 * 1.0507e15) = 182.2509...
        let m = PermittivityModel::drude(1.38e16, 5.07e13).unwrap();
        let expected = 1.0 + 1.38e16_f64.powi(2) / (1e15 * (1e15 + 5.07e13));
        assert_relative_eq!(m.eval(1e15).unwrap(), expected, max_relative = 1e-15);
        assert_relative_eq!(m.eval(1e15).unwrap(), 182.25, max_relative = 1e-4);
    }

    #[test]
    fn zero_frequency_sentinels_and_classes() {
        let c = PermittivityModel::constant(5.0).unwrap();
        let d = PermittivityModel::drude(1e16, 1e13).unwrap();
        let p = PermittivityModel::plasma(1e16).unwrap();
        let l = PermittivityModel::lorentz(vec![LorentzTerm {
            strength: 1e32,
            omega: 1e16,
            gamma: 0.0,
        }])
        .unwrap();

        assert_eq!(c.zero_frequency_class(), ZeroFrequencyClass::Finite);
        assert_eq!(l.zero_frequency_class(), ZeroFrequencyClass::Finite);
        assert_eq!(
            d.zero_frequency_class(),
            ZeroFrequencyClass::DivergentAsOneOverZeta
        );
        assert_eq!(
            p.zero_frequency_class(),
            ZeroFrequencyClass::DivergentAsOneOverZetaSquared
        );

        assert_eq!(c.eval(0.0).unwrap(), 5.0);
        assert_eq!(l.eval(0.0).unwrap(), 2.0);
        assert!(d.eval(0.0).unwrap().is_infinite());
        assert!(p.eval(0.0).unwrap().is_infinite());
    }

    #[test]
    fn eps_ratio_limits() {
        let c = PermittivityModel::constant(2.0).unwrap();
        let c2 = PermittivityModel::constant(8.0).unwrap();
        let d = PermittivityModel::drude(1e16, 1e13).unwrap();
        let p = PermittivityModel::plasma(1e16).unwrap();

        assert_eq!(zero_frequency_eps_ratio(&c, &c2), 0.25);
        assert_eq!(zero_frequency_eps_ratio(&c, &d), 0.0);
        assert_eq!(zero_frequency_eps_ratio(&d, &c), f64::INFINITY);
        assert_eq!(zero_frequency_eps_ratio(&d, &p), 0.0);
        assert_eq!(zero_frequency_eps_ratio(&p, &p), 1.0);
    }

    #[test]
    fn invalid_parameters_rejected_at_construction() {
        assert!(PermittivityModel::constant(0.5).is_err());
        assert!(PermittivityModel::drude(-1.0, 1e13).is_err());
        assert!(PermittivityModel::drude(1e16, 0.0).is_err());
        assert!(PermittivityModel::plasma(0.0).is_err());
        assert!(PermittivityModel::lorentz(vec![]).is_err());
        assert!(PermittivityModel::lorentz(vec![LorentzTerm {
            strength: 1e32,
            omega: 0.0,
            gamma: 0.0
        }])
        .is_err());
    }

    fn arbitrary_model() -> impl Strategy<Value = PermittivityModel> {
        prop_oneof![
            (1.0..100.0f64).prop_map(|e| PermittivityModel::constant(e).unwrap()),
            (1e14..1e17f64, 1e12..1e15f64)
                .prop_map(|(wp, g)| PermittivityModel::drude(wp, g).unwrap()),
            (1e14..1e17f64).prop_map(|wp| PermittivityModel::plasma(wp).unwrap()),
            proptest::collection::vec(
                (1e13..1e16f64, 1e12..1e15f64).prop_map(|(w, g)| LorentzTerm {
                    // keep f_j <= ω_j² so the high-frequency transparency
                    // bound below stays meaningful
                    strength: w * w * 0.9,
                    omega: w,
                    gamma: g,
                }),
                1..4
            )
            .prop_map(|ts| PermittivityModel::lorentz(ts).unwrap()),
        ]
    }

    fn max_internal_frequency(m: &PermittivityModel) -> f64 {
        match m {
            PermittivityModel::Constant(_) => 1e15,
            PermittivityModel::Drude { omega_p, gamma } => omega_p.max(*gamma),
            PermittivityModel::Plasma { omega_p } => *omega_p,
            PermittivityModel::Lorentz(ts) => ts
                .iter()
                .map(|t| t.omega.max(t.gamma))
                .fold(0.0, f64::max),
        }
    }

    proptest! {
        #[test]
        fn monotone_decay_and_floor(m in arbitrary_model(), z1 in 1e10..1e18f64, ratio in 1.001..1e4f64) {
            let z2 = z1 * ratio;
            let e1 = m.eval(z1).unwrap();
            let e2 = m.eval(z2).unwrap();
            prop_assert!(e1.is_finite() && e1 >= 1.0);
            prop_assert!(e2.is_finite() && e2 >= 1.0);
            prop_assert!(e2 <= e1 + 1e-12 * e1);
        }

        #[test]
        fn transparent_at_high_frequency(m in arbitrary_model()) {
            let zeta = 1e3 * max_internal_frequency(&m);
            if !matches!(m, PermittivityModel::Constant(_)) {
                prop_assert!((m.eval(zeta).unwrap() - 1.0).abs() < 1e-4);
            }
        }
    }
}
