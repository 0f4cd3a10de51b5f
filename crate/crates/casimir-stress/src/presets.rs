//! Built-in run presets: one-command reproductions of the reference
//! configurations used throughout the tests.

use crate::am::{CavitySpec, WallModel};
use crate::classical::LiquidRiseSpec;
use crate::materials::PermittivityModel;

/// A cavity preset with a default separation scan.
#[derive(Debug, Clone)]
pub struct CavityPreset {
    pub name: &'static str,
    pub wall: WallModel,
    pub wall_label: &'static str,
    pub gap: PermittivityModel,
    pub gap_label: &'static str,
    pub temperature: f64,
    /// Default gap widths for pressure scans (m).
    pub gap_widths: Vec<f64>,
}

impl CavityPreset {
    pub fn cavity(&self, gap_width: f64) -> CavitySpec {
        CavitySpec::new(gap_width, self.temperature, self.wall.clone(), self.gap.clone())
            .expect("preset parameters are valid")
    }

    pub fn default_gap_width(&self) -> f64 {
        self.gap_widths[self.gap_widths.len() / 2]
    }
}

/// Perfectly reflecting mirrors around vacuum at T = 0.
pub fn ideal_metal_vacuum() -> CavityPreset {
    CavityPreset {
        name: "ideal-metal-vacuum",
        wall: WallModel::IdealMetal,
        wall_label: "ideal-metal",
        gap: PermittivityModel::vacuum(),
        gap_label: "vacuum",
        temperature: 0.0,
        gap_widths: vec![0.1e-6, 1e-6, 10e-6],
    }
}

/// Constant dielectrics ε₁ = 1.5 in the gap, ε₂ = 10 walls, room
/// temperature, micron gap.
pub fn dilute_gap_demo() -> CavityPreset {
    CavityPreset {
        name: "dilute-gap-demo",
        wall: WallModel::Material(PermittivityModel::constant(10.0).unwrap()),
        wall_label: "constant(eps=10)",
        gap: PermittivityModel::constant(1.5).unwrap(),
        gap_label: "constant(eps=1.5)",
        temperature: 300.0,
        gap_widths: vec![1e-6],
    }
}

/// Gold-like Drude walls around vacuum at room temperature.
pub fn gold_vacuum() -> CavityPreset {
    CavityPreset {
        name: "gold-vacuum",
        wall: WallModel::Material(PermittivityModel::drude(1.38e16, 5.07e13).unwrap()),
        wall_label: "drude(omega_p=1.38e16, gamma=5.07e13)",
        gap: PermittivityModel::vacuum(),
        gap_label: "vacuum",
        temperature: 300.0,
        gap_widths: vec![1e-6],
    }
}

/// Drude media on both sides with the plasma knee well below the gap's
/// light-cone scale; the near-interface scan window then sits inside the
/// single-mode 1/z regime on every retained frequency.
pub fn soft_drude_gap() -> CavityPreset {
    CavityPreset {
        name: "soft-drude-gap",
        wall: WallModel::Material(PermittivityModel::drude(3.0e15, 1.0e13).unwrap()),
        wall_label: "drude(omega_p=3e15, gamma=1e13)",
        gap: PermittivityModel::drude(1.5e15, 1.0e13).unwrap(),
        gap_label: "drude(omega_p=1.5e15, gamma=1e13)",
        temperature: 300.0,
        gap_widths: vec![1e-6],
    }
}

/// Water between condenser plates: ε = 80, E = 10⁶ V/m, ρ = 1000 kg/m³.
pub fn water_condenser() -> LiquidRiseSpec {
    LiquidRiseSpec::new(80.0, 1e6, 1000.0, 9.81).expect("preset parameters are valid")
}

pub fn cavity_preset(name: &str) -> Option<CavityPreset> {
    match name {
        "ideal-metal-vacuum" => Some(ideal_metal_vacuum()),
        "dilute-gap-demo" => Some(dilute_gap_demo()),
        "gold-vacuum" => Some(gold_vacuum()),
        "soft-drude-gap" => Some(soft_drude_gap()),
        _ => None,
    }
}

pub const CAVITY_PRESET_NAMES: [&str; 4] = [
    "ideal-metal-vacuum",
    "dilute-gap-demo",
    "gold-vacuum",
    "soft-drude-gap",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_resolve() {
        for name in CAVITY_PRESET_NAMES {
            let p = cavity_preset(name).unwrap();
            assert_eq!(p.name, name);
            let cavity = p.cavity(p.default_gap_width());
            assert!(cavity.gap_width.is_finite() && cavity.gap_width > 0.0);
            assert!(cavity.dilute_gap_violations().is_empty());
        }
        assert!(cavity_preset("nope").is_none());
    }

    #[test]
    fn water_preset_values() {
        let w = water_condenser();
        assert_eq!(w.eps, 80.0);
        assert_eq!(w.e_field, 1e6);
    }
}
