//! SI physical constants (CODATA 2018 / 2019 SI redefinition).

/// Fixed physical constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Vacuum permittivity ε₀ [F/m].
    pub eps0: f64,
    /// Vacuum permeability μ₀ [H/m].
    pub mu0: f64,
    /// Speed of light in vacuum c [m/s].
    pub c: f64,
    /// Reduced Planck constant ħ [J·s].
    pub hbar: f64,
    /// Boltzmann constant k_B [J/K].
    pub kb: f64,
}

/// Speed of light in vacuum [m/s] (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permittivity [F/m].
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Vacuum permeability [H/m], defined through 1/(ε₀c²) so that
/// c² ε₀ μ₀ = 1 holds to machine precision.
pub const VACUUM_PERMEABILITY: f64 =
    1.0 / (VACUUM_PERMITTIVITY * SPEED_OF_LIGHT * SPEED_OF_LIGHT);

/// Reduced Planck constant [J·s] (h = 6.62607015e-34 J·s exact).
pub const REDUCED_PLANCK: f64 = 6.626_070_15e-34 / (2.0 * std::f64::consts::PI);

/// Boltzmann constant [J/K] (exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Apéry's constant ζ(3).
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

impl PhysicalConstants {
    pub const fn si() -> Self {
        Self {
            eps0: VACUUM_PERMITTIVITY,
            mu0: VACUUM_PERMEABILITY,
            c: SPEED_OF_LIGHT,
            hbar: REDUCED_PLANCK,
            kb: BOLTZMANN,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::si()
    }
}
