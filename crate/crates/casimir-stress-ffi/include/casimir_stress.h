/* C interface of the casimir-stress library. Generated by cbindgen; do not edit. */

#ifndef CASIMIR_STRESS_H
#define CASIMIR_STRESS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Return status of every fallible call.
typedef enum CsStatus {
  // Success; out parameters are valid.
  CS_STATUS_OK = 0,
  // A required pointer was null.
  CS_STATUS_NULL_POINTER = 1,
  // Parameters violate a documented precondition.
  CS_STATUS_INVALID_ARGUMENT = 2,
  // Evaluation outside the quantity's domain (e.g. position outside
  // the gap).
  CS_STATUS_DOMAIN_ERROR = 3,
  // The requested quantity diverges there (interface position under an
  // infinite transverse cutoff).
  CS_STATUS_DIVERGENT = 4,
  // An internal invariant failed; the out parameters are untouched.
  CS_STATUS_INTERNAL_ERROR = 5,
} CsStatus;

// Stress tensor selector for the classical calls.
typedef enum CsTensorKind {
  CS_TENSOR_KIND_RAABE_WELSCH = 0,
  CS_TENSOR_KIND_ABRAHAM_MINKOWSKI = 1,
} CsTensorKind;

// Opaque cavity handle (gap width, temperature, wall and gap media).
typedef struct CsCavity CsCavity;

// Opaque permittivity model handle.
typedef struct CsMaterial CsMaterial;

// Quadrature and truncation controls. `k_cutoff <= 0` means the physical
// semi-infinite transverse integral.
typedef struct CsQuadrature {
  double rel_tol;
  double abs_tol;
  uint64_t max_matsubara_terms;
  double k_cutoff;
  uint64_t max_quadrature_evals_per_term;
} CsQuadrature;

// Cavity pressure with its polarisation split.
typedef struct CsPressure {
  // Total pressure (Pa), negative = attraction.
  double pressure;
  double te_part;
  double tm_part;
  double error;
  uint64_t matsubara_terms;
  uint64_t function_evals;
  // 1 when every sum and quadrature converged.
  int converged;
} CsPressure;

// Position-resolved gap stress with its instrumented decomposition.
typedef struct CsStress {
  // Normal stress at the requested position (Pa).
  double value;
  double error;
  double flux_part;
  double roundtrip_part;
  double position_part;
  uint64_t matsubara_terms;
  uint64_t function_evals;
  int converged;
} CsStress;

// Uniform fields and linear response of one homogeneous region.
typedef struct CsFieldRegion {
  double e[3];
  double b[3];
  double eps;
  double mu;
} CsFieldRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *cs_version(void);

// Human-readable description of a status code (static storage).
const char *cs_status_message(enum CsStatus status);

// Default tolerances: rel 1e-8, abs 1e-20 Pa, 1e5 frequency terms,
// infinite transverse integral, 1e4 evaluations per term.
struct CsQuadrature cs_quadrature_default(void);

// Frequency-independent permittivity, eps >= 1.
//
// # Safety
// `out` must be a valid pointer.
enum CsStatus cs_material_constant(double eps, struct CsMaterial **out);

// Drude model 1 + omega_p^2/(zeta(zeta+gamma)); omega_p, gamma > 0 rad/s.
//
// # Safety
// `out` must be a valid pointer.
enum CsStatus cs_material_drude(double omega_p, double gamma, struct CsMaterial **out);

// Plasma model 1 + omega_p^2/zeta^2; omega_p > 0 rad/s.
//
// # Safety
// `out` must be a valid pointer.
enum CsStatus cs_material_plasma(double omega_p, struct CsMaterial **out);

// Lorentz oscillator sum from three parallel arrays of length `count`:
// strengths [rad^2/s^2] > 0, resonances (rad/s) > 0, dampings (rad/s) >= 0.
//
// # Safety
// The arrays must be readable for `count` elements; `out` must be valid.
enum CsStatus cs_material_lorentz(const double *strengths,
                                  const double *omegas,
                                  const double *gammas,
                                  size_t count,
                                  struct CsMaterial **out);

// Relative permittivity on the imaginary axis. Returns
// `CS_STATUS_DOMAIN_ERROR` for negative zeta; a divergent zero-frequency
// value comes back as +infinity.
//
// # Safety
// `material` and `out` must be valid pointers.
enum CsStatus cs_material_eval(const struct CsMaterial *material, double zeta, double *out);

// Releases a material handle; null is ignored.
//
// # Safety
// `material` must come from a `cs_material_*` constructor and not be
// freed twice.
void cs_material_free(struct CsMaterial *material);

// Symmetric three-layer cavity with material walls. The material handles
// are copied; the caller keeps ownership.
//
// # Safety
// `wall`, `gap` and `out` must be valid pointers.
enum CsStatus cs_cavity_new(double gap_width,
                            double temperature,
                            const struct CsMaterial *wall,
                            const struct CsMaterial *gap,
                            struct CsCavity **out);

// Cavity bounded by perfectly reflecting walls (|r| = 1 at every
// frequency).
//
// # Safety
// `gap` and `out` must be valid pointers.
enum CsStatus cs_cavity_new_ideal_metal(double gap_width,
                                        double temperature,
                                        const struct CsMaterial *gap,
                                        struct CsCavity **out);

// Releases a cavity handle; null is ignored.
//
// # Safety
// `cavity` must come from a `cs_cavity_new*` constructor and not be
// freed twice.
void cs_cavity_free(struct CsCavity *cavity);

// Cavity pressure under the position-independent tensor. A finite
// `k_cutoff` is rejected as invalid for this quantity.
//
// # Safety
// `cavity`, `quadrature` and `out` must be valid pointers.
enum CsStatus cs_am_pressure(const struct CsCavity *cavity,
                             const struct CsQuadrature *quadrature,
                             struct CsPressure *out);

// Normal-stress difference across one gap interface (0 = left,
// nonzero = right), with the outside stress identically zero.
//
// # Safety
// `cavity`, `quadrature` and `out` must be valid pointers.
enum CsStatus cs_am_stress_difference(const struct CsCavity *cavity,
                                      int right_interface,
                                      const struct CsQuadrature *quadrature,
                                      struct CsPressure *out);

// Perfect-mirror vacuum cavity pressure at the given separation and
// temperature.
//
// # Safety
// `quadrature` and `out` must be valid pointers.
enum CsStatus cs_ideal_metal_pressure(double gap_width,
                                      double temperature,
                                      const struct CsQuadrature *quadrature,
                                      struct CsPressure *out);

// Position-resolved gap stress at 0 < z < gap width (interface positions
// need a finite cutoff and report `CS_STATUS_DIVERGENT` otherwise).
//
// # Safety
// `cavity`, `quadrature` and `out` must be valid pointers.
enum CsStatus cs_rw_stress(const struct CsCavity *cavity,
                           double z,
                           const struct CsQuadrature *quadrature,
                           struct CsStress *out);

// Equilibrium rise height eps0 (eps-1) E^2 / (2 rho g) of a dielectric
// liquid between condenser plates (m).
//
// # Safety
// `out` must be a valid pointer.
enum CsStatus cs_liquid_rise_height(double eps,
                                    double e_field,
                                    double rho_mass,
                                    double g,
                                    double *out);

// Normal-stress jump across a boundary layer: the normal traction just
// above minus just below, under the selected tensor. `normal` must be a
// unit vector.
//
// # Safety
// `below`, `above` and `out` must be valid pointers.
enum CsStatus cs_surface_stress_jump(enum CsTensorKind kind,
                                     const struct CsFieldRegion *below,
                                     const struct CsFieldRegion *above,
                                     const double *normal,
                                     double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CASIMIR_STRESS_H */
