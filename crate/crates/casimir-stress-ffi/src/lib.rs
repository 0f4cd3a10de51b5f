//! C ABI over the casimir-stress library.
//!
//! Conventions:
//! * materials and cavities are opaque handles created by `cs_*_new`
//!   constructors and released by the matching `cs_*_free`;
//! * every fallible call returns a [`CsStatus`] and writes its result
//!   through an out pointer that is only valid on `CS_STATUS_OK`;
//! * numerical non-convergence is not an error: results carry a
//!   `converged` flag instead;
//! * all quantities are SI, pressures in pascal (negative = attraction).
//!
//! The generated header lives in `include/casimir_stress.h`.

use casimir_stress::am::{self, CavitySpec, InterfaceSide, WallModel};
use casimir_stress::classical::{
    liquid_rise_height, surface_stress_jump, LiquidRiseSpec, TensorKind, UniformFieldRegion,
};
use casimir_stress::engine::{KCutoff, QuadratureSpec};
use casimir_stress::materials::{LorentzTerm, PermittivityModel};
use casimir_stress::rw::{self, RwError};
use std::ffi::{c_char, c_double, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Return status of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsStatus {
    /// Success; out parameters are valid.
    Ok = 0,
    /// A required pointer was null.
    NullPointer = 1,
    /// Parameters violate a documented precondition.
    InvalidArgument = 2,
    /// Evaluation outside the quantity's domain (e.g. position outside
    /// the gap).
    DomainError = 3,
    /// The requested quantity diverges there (interface position under an
    /// infinite transverse cutoff).
    Divergent = 4,
    /// An internal invariant failed; the out parameters are untouched.
    InternalError = 5,
}

/// Opaque permittivity model handle.
pub struct CsMaterial(PermittivityModel);

/// Opaque cavity handle (gap width, temperature, wall and gap media).
pub struct CsCavity(CavitySpec);

/// Quadrature and truncation controls. `k_cutoff <= 0` means the physical
/// semi-infinite transverse integral.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CsQuadrature {
    pub rel_tol: c_double,
    pub abs_tol: c_double,
    pub max_matsubara_terms: u64,
    pub k_cutoff: c_double,
    pub max_quadrature_evals_per_term: u64,
}

/// Cavity pressure with its polarisation split.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CsPressure {
    /// Total pressure (Pa), negative = attraction.
    pub pressure: c_double,
    pub te_part: c_double,
    pub tm_part: c_double,
    pub error: c_double,
    pub matsubara_terms: u64,
    pub function_evals: u64,
    /// 1 when every sum and quadrature converged.
    pub converged: c_int,
}

/// Position-resolved gap stress with its instrumented decomposition.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CsStress {
    /// Normal stress at the requested position (Pa).
    pub value: c_double,
    pub error: c_double,
    pub flux_part: c_double,
    pub roundtrip_part: c_double,
    pub position_part: c_double,
    pub matsubara_terms: u64,
    pub function_evals: u64,
    pub converged: c_int,
}

/// Uniform fields and linear response of one homogeneous region.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CsFieldRegion {
    pub e: [c_double; 3],
    pub b: [c_double; 3],
    pub eps: c_double,
    pub mu: c_double,
}

/// Stress tensor selector for the classical calls.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsTensorKind {
    RaabeWelsch = 0,
    AbrahamMinkowski = 1,
}

fn guard<F: FnOnce() -> CsStatus>(f: F) -> CsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => CsStatus::InternalError,
    }
}

fn quadrature_of(c: &CsQuadrature) -> Result<QuadratureSpec, CsStatus> {
    let spec = QuadratureSpec {
        rel_tol: c.rel_tol,
        abs_tol: c.abs_tol,
        max_matsubara_terms: c.max_matsubara_terms as usize,
        k_cutoff: if c.k_cutoff > 0.0 {
            KCutoff::Finite(c.k_cutoff)
        } else {
            KCutoff::Infinite
        },
        max_quadrature_evals_per_term: c.max_quadrature_evals_per_term as usize,
    };
    spec.validate().map_err(|_| CsStatus::InvalidArgument)?;
    Ok(spec)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Human-readable description of a status code (static storage).
#[no_mangle]
pub extern "C" fn cs_status_message(status: CsStatus) -> *const c_char {
    let s: &'static str = match status {
        CsStatus::Ok => "ok\0",
        CsStatus::NullPointer => "null pointer argument\0",
        CsStatus::InvalidArgument => "invalid argument\0",
        CsStatus::DomainError => "outside the quantity's domain\0",
        CsStatus::Divergent => "quantity diverges at this configuration\0",
        CsStatus::InternalError => "internal error\0",
    };
    s.as_ptr() as *const c_char
}

/// Default tolerances: rel 1e-8, abs 1e-20 Pa, 1e5 frequency terms,
/// infinite transverse integral, 1e4 evaluations per term.
#[no_mangle]
pub extern "C" fn cs_quadrature_default() -> CsQuadrature {
    let d = QuadratureSpec::default();
    CsQuadrature {
        rel_tol: d.rel_tol,
        abs_tol: d.abs_tol,
        max_matsubara_terms: d.max_matsubara_terms as u64,
        k_cutoff: 0.0,
        max_quadrature_evals_per_term: d.max_quadrature_evals_per_term as u64,
    }
}

unsafe fn write_material(
    out: *mut *mut CsMaterial,
    model: Result<PermittivityModel, casimir_stress::materials::MaterialError>,
) -> CsStatus {
    if out.is_null() {
        return CsStatus::NullPointer;
    }
    match model {
        Ok(m) => {
            *out = Box::into_raw(Box::new(CsMaterial(m)));
            CsStatus::Ok
        }
        Err(_) => CsStatus::InvalidArgument,
    }
}

/// Frequency-independent permittivity, eps >= 1.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_material_constant(eps: c_double, out: *mut *mut CsMaterial) -> CsStatus {
    guard(|| write_material(out, PermittivityModel::constant(eps)))
}

/// Drude model 1 + omega_p^2/(zeta(zeta+gamma)); omega_p, gamma > 0 rad/s.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_material_drude(
    omega_p: c_double,
    gamma: c_double,
    out: *mut *mut CsMaterial,
) -> CsStatus {
    guard(|| write_material(out, PermittivityModel::drude(omega_p, gamma)))
}

/// Plasma model 1 + omega_p^2/zeta^2; omega_p > 0 rad/s.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_material_plasma(omega_p: c_double, out: *mut *mut CsMaterial) -> CsStatus {
    guard(|| write_material(out, PermittivityModel::plasma(omega_p)))
}

/// Lorentz oscillator sum from three parallel arrays of length `count`:
/// strengths [rad^2/s^2] > 0, resonances (rad/s) > 0, dampings (rad/s) >= 0.
///
/// # Safety
/// The arrays must be readable for `count` elements; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cs_material_lorentz(
    strengths: *const c_double,
    omegas: *const c_double,
    gammas: *const c_double,
    count: usize,
    out: *mut *mut CsMaterial,
) -> CsStatus {
    guard(|| {
        if strengths.is_null() || omegas.is_null() || gammas.is_null() {
            return CsStatus::NullPointer;
        }
        let s = std::slice::from_raw_parts(strengths, count);
        let w = std::slice::from_raw_parts(omegas, count);
        let g = std::slice::from_raw_parts(gammas, count);
        let terms = (0..count)
            .map(|i| LorentzTerm {
                strength: s[i],
                omega: w[i],
                gamma: g[i],
            })
            .collect();
        write_material(out, PermittivityModel::lorentz(terms))
    })
}

/// Relative permittivity on the imaginary axis. Returns
/// `CS_STATUS_DOMAIN_ERROR` for negative zeta; a divergent zero-frequency
/// value comes back as +infinity.
///
/// # Safety
/// `material` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cs_material_eval(
    material: *const CsMaterial,
    zeta: c_double,
    out: *mut c_double,
) -> CsStatus {
    guard(|| {
        if material.is_null() || out.is_null() {
            return CsStatus::NullPointer;
        }
        match (*material).0.eval(zeta) {
            Ok(v) => {
                *out = v;
                CsStatus::Ok
            }
            Err(_) => CsStatus::DomainError,
        }
    })
}

/// Releases a material handle; null is ignored.
///
/// # Safety
/// `material` must come from a `cs_material_*` constructor and not be
/// freed twice.
#[no_mangle]
pub unsafe extern "C" fn cs_material_free(material: *mut CsMaterial) {
    if !material.is_null() {
        drop(Box::from_raw(material));
    }
}

unsafe fn new_cavity(
    gap_width: c_double,
    temperature: c_double,
    wall: WallModel,
    gap: *const CsMaterial,
    out: *mut *mut CsCavity,
) -> CsStatus {
    if gap.is_null() || out.is_null() {
        return CsStatus::NullPointer;
    }
    match CavitySpec::new(gap_width, temperature, wall, (*gap).0.clone()) {
        Ok(c) => {
            *out = Box::into_raw(Box::new(CsCavity(c)));
            CsStatus::Ok
        }
        Err(_) => CsStatus::InvalidArgument,
    }
}

/// Symmetric three-layer cavity with material walls. The material handles
/// are copied; the caller keeps ownership.
///
/// # Safety
/// `wall`, `gap` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cs_cavity_new(
    gap_width: c_double,
    temperature: c_double,
    wall: *const CsMaterial,
    gap: *const CsMaterial,
    out: *mut *mut CsCavity,
) -> CsStatus {
    guard(|| {
        if wall.is_null() {
            return CsStatus::NullPointer;
        }
        new_cavity(
            gap_width,
            temperature,
            WallModel::Material((*wall).0.clone()),
            gap,
            out,
        )
    })
}

/// Cavity bounded by perfectly reflecting walls (|r| = 1 at every
/// frequency).
///
/// # Safety
/// `gap` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cs_cavity_new_ideal_metal(
    gap_width: c_double,
    temperature: c_double,
    gap: *const CsMaterial,
    out: *mut *mut CsCavity,
) -> CsStatus {
    guard(|| new_cavity(gap_width, temperature, WallModel::IdealMetal, gap, out))
}

/// Releases a cavity handle; null is ignored.
///
/// # Safety
/// `cavity` must come from a `cs_cavity_new*` constructor and not be
/// freed twice.
#[no_mangle]
pub unsafe extern "C" fn cs_cavity_free(cavity: *mut CsCavity) {
    if !cavity.is_null() {
        drop(Box::from_raw(cavity));
    }
}

fn fill_pressure(out: &mut CsPressure, r: &am::PressureResult) {
    out.pressure = r.pressure;
    out.te_part = r.te_part;
    out.tm_part = r.tm_part;
    out.error = r.error;
    out.matsubara_terms = r.report.matsubara_terms_used as u64;
    out.function_evals = r.report.total_function_evals;
    out.converged = r.report.converged as c_int;
}

/// Cavity pressure under the position-independent tensor. A finite
/// `k_cutoff` is rejected as invalid for this quantity.
///
/// # Safety
/// `cavity`, `quadrature` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cs_am_pressure(
    cavity: *const CsCavity,
    quadrature: *const CsQuadrature,
    out: *mut CsPressure,
) -> CsStatus {
    guard(|| {
        if cavity.is_null() || quadrature.is_null() || out.is_null() {
            return CsStatus::NullPointer;
        }
        let spec = match quadrature_of(&*quadrature) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match am::am_pressure(&(*cavity).0, &spec) {
            Ok(r) => {
                fill_pressure(&mut *out, &r);
                CsStatus::Ok
            }
            Err(am::CavityError::FiniteCutoffRejected) => CsStatus::InvalidArgument,
            Err(_) => CsStatus::InvalidArgument,
        }
    })
}

/// Normal-stress difference across one gap interface (0 = left,
/// nonzero = right), with the outside stress identically zero.
///
/// # Safety
/// `cavity`, `quadrature` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cs_am_stress_difference(
    cavity: *const CsCavity,
    right_interface: c_int,
    quadrature: *const CsQuadrature,
    out: *mut CsPressure,
) -> CsStatus {
    guard(|| {
        if cavity.is_null() || quadrature.is_null() || out.is_null() {
            return CsStatus::NullPointer;
        }
        let spec = match quadrature_of(&*quadrature) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let side = if right_interface == 0 {
            InterfaceSide::Left
        } else {
            InterfaceSide::Right
        };
        match am::am_stress_difference(side, &(*cavity).0, &spec) {
            Ok(r) => {
                fill_pressure(&mut *out, &r);
                CsStatus::Ok
            }
            Err(_) => CsStatus::InvalidArgument,
        }
    })
}

/// Perfect-mirror vacuum cavity pressure at the given separation and
/// temperature.
///
/// # Safety
/// `quadrature` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cs_ideal_metal_pressure(
    gap_width: c_double,
    temperature: c_double,
    quadrature: *const CsQuadrature,
    out: *mut CsPressure,
) -> CsStatus {
    guard(|| {
        if quadrature.is_null() || out.is_null() {
            return CsStatus::NullPointer;
        }
        let spec = match quadrature_of(&*quadrature) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match am::ideal_metal_limit(gap_width, temperature, &spec) {
            Ok(r) => {
                fill_pressure(&mut *out, &r);
                CsStatus::Ok
            }
            Err(_) => CsStatus::InvalidArgument,
        }
    })
}

/// Position-resolved gap stress at 0 < z < gap width (interface positions
/// need a finite cutoff and report `CS_STATUS_DIVERGENT` otherwise).
///
/// # Safety
/// `cavity`, `quadrature` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cs_rw_stress(
    cavity: *const CsCavity,
    z: c_double,
    quadrature: *const CsQuadrature,
    out: *mut CsStress,
) -> CsStatus {
    guard(|| {
        if cavity.is_null() || quadrature.is_null() || out.is_null() {
            return CsStatus::NullPointer;
        }
        let spec = match quadrature_of(&*quadrature) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match rw::rw_stress(&(*cavity).0, z, &spec) {
            Ok(r) => {
                let out = &mut *out;
                out.value = r.value;
                out.error = r.error;
                out.flux_part = r.flux_part;
                out.roundtrip_part = r.roundtrip_part;
                out.position_part = r.position_part;
                out.matsubara_terms = r.report.matsubara_terms_used as u64;
                out.function_evals = r.report.total_function_evals;
                out.converged = r.report.converged as c_int;
                CsStatus::Ok
            }
            Err(RwError::EndpointDivergence { .. }) => CsStatus::Divergent,
            Err(RwError::PositionOutsideGap { .. }) => CsStatus::DomainError,
            Err(_) => CsStatus::InvalidArgument,
        }
    })
}

/// Equilibrium rise height eps0 (eps-1) E^2 / (2 rho g) of a dielectric
/// liquid between condenser plates (m).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_liquid_rise_height(
    eps: c_double,
    e_field: c_double,
    rho_mass: c_double,
    g: c_double,
    out: *mut c_double,
) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return CsStatus::NullPointer;
        }
        match LiquidRiseSpec::new(eps, e_field, rho_mass, g) {
            Ok(spec) => {
                *out = liquid_rise_height(&spec);
                CsStatus::Ok
            }
            Err(_) => CsStatus::InvalidArgument,
        }
    })
}

/// Normal-stress jump across a boundary layer: the normal traction just
/// above minus just below, under the selected tensor. `normal` must be a
/// unit vector.
///
/// # Safety
/// `below`, `above` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cs_surface_stress_jump(
    kind: CsTensorKind,
    below: *const CsFieldRegion,
    above: *const CsFieldRegion,
    normal: *const c_double,
    out: *mut c_double,
) -> CsStatus {
    guard(|| {
        if below.is_null() || above.is_null() || normal.is_null() || out.is_null() {
            return CsStatus::NullPointer;
        }
        let to_region = |r: &CsFieldRegion| UniformFieldRegion::new(r.e, r.b, r.eps, r.mu);
        let (b, a) = match (to_region(&*below), to_region(&*above)) {
            (Ok(b), Ok(a)) => (b, a),
            _ => return CsStatus::InvalidArgument,
        };
        let n = std::slice::from_raw_parts(normal, 3);
        let tensor = match kind {
            CsTensorKind::RaabeWelsch => TensorKind::RaabeWelsch,
            CsTensorKind::AbrahamMinkowski => TensorKind::AbrahamMinkowski,
        };
        match surface_stress_jump(tensor, &b, &a, [n[0], n[1], n[2]]) {
            Ok(v) => {
                *out = v;
                CsStatus::Ok
            }
            Err(_) => CsStatus::InvalidArgument,
        }
    })
}
