//! Classical discriminating diagnostics: pointwise stress tensors, static
//! volume force densities on a field grid, surface stress jumps and the
//! dielectric liquid rise between condenser plates.
//!
//! The two tensors agree in vacuum but respond differently to a dielectric:
//! across the free surface of a liquid in a horizontal field the
//! Abraham-Minkowski normal stress jumps by (ε₀/2)(ε−1)E², which balances
//! the hydrostatic column of the risen liquid, while the Raabe-Welsch
//! normal stress does not jump at all.

use crate::constants::{VACUUM_PERMEABILITY, VACUUM_PERMITTIVITY};
use std::io::{BufRead, Write};
use thiserror::Error;

pub type Vec3 = [f64; 3];
pub type Tensor3 = [[f64; 3]; 3];

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("relative permittivity must be >= 1, got {0}")]
    BadPermittivity(f64),
    #[error("relative permeability must be positive, got {0}")]
    BadPermeability(f64),
    #[error("field components must be finite")]
    NonFiniteField,
    #[error("normal vector must have unit length, |n| = {0}")]
    NonUnitNormal(f64),
    #[error("grid must span at least 3 cells per axis, got {0}x{1}x{2}")]
    GridTooSmall(usize, usize, usize),
    #[error("grid spacing must be positive, got {0}")]
    BadSpacing(f64),
    #[error("{0} must be positive, got {1}")]
    NonPositiveParameter(&'static str, f64),
    #[error("field must be non-negative, got {0}")]
    NegativeField(f64),
    #[error("state file, line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which stress tensor to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorKind {
    RaabeWelsch,
    AbrahamMinkowski,
}

/// Uniform fields and linear response in one homogeneous region.
/// D = ε₀εE and H = B/(μ₀μ) are always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformFieldRegion {
    pub e: Vec3,
    pub b: Vec3,
    pub eps: f64,
    pub mu: f64,
}

impl UniformFieldRegion {
    pub fn new(e: Vec3, b: Vec3, eps: f64, mu: f64) -> Result<Self, ClassicalError> {
        if !(eps.is_finite() && eps >= 1.0) {
            return Err(ClassicalError::BadPermittivity(eps));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(ClassicalError::BadPermeability(mu));
        }
        if !e.iter().chain(b.iter()).all(|c| c.is_finite()) {
            return Err(ClassicalError::NonFiniteField);
        }
        Ok(Self { e, b, eps, mu })
    }

    pub fn electrostatic(e: Vec3, eps: f64) -> Result<Self, ClassicalError> {
        Self::new(e, [0.0; 3], eps, 1.0)
    }

    fn d(&self) -> Vec3 {
        scale(self.e, VACUUM_PERMITTIVITY * self.eps)
    }

    fn h(&self) -> Vec3 {
        scale(self.b, 1.0 / (VACUUM_PERMEABILITY * self.mu))
    }
}

fn scale(v: Vec3, s: f64) -> Vec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

fn dot(u: Vec3, v: Vec3) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn cross(u: Vec3, v: Vec3) -> Vec3 {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Pointwise stress tensor of the requested kind in a uniform region (Pa).
///
/// Raabe-Welsch:      ε₀E_iE_k + B_iB_k/μ₀ − ½δ_ik(ε₀E² + B²/μ₀)
/// Abraham-Minkowski: E_iD_k + H_iB_k − ½δ_ik(E·D + H·B)
///
/// Both share the shape E_i X_k + Y_i B_k − ½δ_ik(E·X + Y·B) with
/// (X, Y) = (ε₀E, B/μ₀) or (D, H); in vacuum the pairs coincide and so do
/// the tensors.
pub fn stress_tensor(kind: TensorKind, region: &UniformFieldRegion) -> Tensor3 {
    let e = region.e;
    let b = region.b;
    let (x, y) = match kind {
        TensorKind::RaabeWelsch => (
            scale(e, VACUUM_PERMITTIVITY),
            scale(b, 1.0 / VACUUM_PERMEABILITY),
        ),
        TensorKind::AbrahamMinkowski => (region.d(), region.h()),
    };
    let trace_half = 0.5 * (dot(e, x) + dot(y, b));
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            t[i][k] = e[i] * x[k] + y[i] * b[k];
            if i == k {
                t[i][k] -= trace_half;
            }
        }
    }
    t
}

/// Normal-stress jump across a planar boundary layer, evaluated as the
/// normal traction just above minus just below: n·T(above)·n − n·T(below)·n.
/// This is the outward surface force density on the lower medium; positive
/// pulls it upward.
pub fn surface_stress_jump(
    kind: TensorKind,
    below: &UniformFieldRegion,
    above: &UniformFieldRegion,
    normal: Vec3,
) -> Result<f64, ClassicalError> {
    let norm = dot(normal, normal).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(ClassicalError::NonUnitNormal(norm));
    }
    let t_b = stress_tensor(kind, below);
    let t_a = stress_tensor(kind, above);
    Ok(project(t_a, normal) - project(t_b, normal))
}

fn project(t: Tensor3, n: Vec3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for k in 0..3 {
            s += n[i] * t[i][k] * n[k];
        }
    }
    s
}

/// Magnitude of the tangential E mismatch across the surface; nonzero
/// values mean the configuration is not electrostatically consistent and
/// the jump numbers should be read with care.
pub fn tangential_mismatch(below: &UniformFieldRegion, above: &UniformFieldRegion, normal: Vec3) -> f64 {
    let tangential = |e: Vec3| {
        let en = dot(e, normal);
        [
            e[0] - en * normal[0],
            e[1] - en * normal[1],
            e[2] - en * normal[2],
        ]
    };
    let tb = tangential(below.e);
    let ta = tangential(above.e);
    let d = [ta[0] - tb[0], ta[1] - tb[1], ta[2] - tb[2]];
    dot(d, d).sqrt()
}

/// Condenser-plates-in-a-liquid configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiquidRiseSpec {
    /// Relative permittivity of the liquid, ≥ 1.
    pub eps: f64,
    /// Horizontal field magnitude [V/m].
    pub e_field: f64,
    /// Mass density of the liquid [kg/m³].
    pub rho_mass: f64,
    /// Gravitational acceleration [m/s²].
    pub g: f64,
}

impl LiquidRiseSpec {
    pub fn new(eps: f64, e_field: f64, rho_mass: f64, g: f64) -> Result<Self, ClassicalError> {
        if !(eps.is_finite() && eps >= 1.0) {
            return Err(ClassicalError::BadPermittivity(eps));
        }
        if !(e_field.is_finite() && e_field >= 0.0) {
            return Err(ClassicalError::NegativeField(e_field));
        }
        if !(rho_mass.is_finite() && rho_mass > 0.0) {
            return Err(ClassicalError::NonPositiveParameter("mass density", rho_mass));
        }
        if !(g.is_finite() && g > 0.0) {
            return Err(ClassicalError::NonPositiveParameter("gravity", g));
        }
        Ok(Self {
            eps,
            e_field,
            rho_mass,
            g,
        })
    }
}

/// Equilibrium rise height h = ε₀(ε−1)E²/(2ρg) (m) of the liquid column
/// between the plates.
pub fn liquid_rise_height(spec: &LiquidRiseSpec) -> f64 {
    VACUUM_PERMITTIVITY * (spec.eps - 1.0) * spec.e_field * spec.e_field
        / (2.0 * spec.rho_mass * spec.g)
}

/// Piecewise-uniform classical field state on a regular 3D grid.
/// The polarisation is caller-supplied; [`DiscreteFieldState::set_linear_polarisation`]
/// fills in the linear-medium value P = ε₀(ε−1)E.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFieldState {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    /// Uniform grid spacing (m).
    pub spacing: f64,
    pub e: Vec<Vec3>,
    pub b: Vec<Vec3>,
    /// Polarisation [C/m²].
    pub p: Vec<Vec3>,
    /// Magnetisation [A/m].
    pub m: Vec<Vec3>,
    /// External charge density [C/m³].
    pub rho_charge: Vec<f64>,
    /// External current density [A/m²].
    pub j: Vec<Vec3>,
    pub eps: Vec<f64>,
    pub mu: Vec<f64>,
}

impl DiscreteFieldState {
    pub fn new(nx: usize, ny: usize, nz: usize, spacing: f64) -> Result<Self, ClassicalError> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(ClassicalError::BadSpacing(spacing));
        }
        let n = nx * ny * nz;
        Ok(Self {
            nx,
            ny,
            nz,
            spacing,
            e: vec![[0.0; 3]; n],
            b: vec![[0.0; 3]; n],
            p: vec![[0.0; 3]; n],
            m: vec![[0.0; 3]; n],
            rho_charge: vec![0.0; n],
            j: vec![[0.0; 3]; n],
            eps: vec![1.0; n],
            mu: vec![1.0; n],
        })
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.ny + j) * self.nz + k
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    /// P = ε₀(ε−1)E in every cell.
    pub fn set_linear_polarisation(&mut self) {
        for c in 0..self.cells() {
            self.p[c] = scale(self.e[c], VACUUM_PERMITTIVITY * (self.eps[c] - 1.0));
        }
    }

    /// Columnar text export: a `# nx ny nz spacing` header line followed by
    /// one row per cell,
    /// `i j k Ex Ey Ez Bx By Bz Px Py Pz Mx My Mz rho Jx Jy Jz eps mu`.
    pub fn write_columns<W: Write>(&self, mut w: W) -> Result<(), ClassicalError> {
        writeln!(w, "# discrete field state: i j k E(3) B(3) P(3) M(3) rho J(3) eps mu")?;
        writeln!(w, "# grid {} {} {} {:.16e}", self.nx, self.ny, self.nz, self.spacing)?;
        for i in 0..self.nx {
            for j in 0..self.ny {
                for k in 0..self.nz {
                    let c = self.idx(i, j, k);
                    let row: Vec<String> = self.e[c]
                        .iter()
                        .chain(self.b[c].iter())
                        .chain(self.p[c].iter())
                        .chain(self.m[c].iter())
                        .chain(std::iter::once(&self.rho_charge[c]))
                        .chain(self.j[c].iter())
                        .chain(std::iter::once(&self.eps[c]))
                        .chain(std::iter::once(&self.mu[c]))
                        .map(|v| format!("{v:.16e}"))
                        .collect();
                    writeln!(w, "{i} {j} {k} {}", row.join(" "))?;
                }
            }
        }
        Ok(())
    }

    pub fn read_columns<R: BufRead>(r: R) -> Result<Self, ClassicalError> {
        let mut state: Option<DiscreteFieldState> = None;
        let mut seen = 0usize;
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("# grid ") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 4 {
                    return Err(ClassicalError::Parse {
                        line: lineno,
                        message: "grid header needs nx ny nz spacing".into(),
                    });
                }
                let parse_usize = |s: &str| {
                    s.parse::<usize>().map_err(|e| ClassicalError::Parse {
                        line: lineno,
                        message: format!("bad grid dimension {s:?}: {e}"),
                    })
                };
                let nx = parse_usize(parts[0])?;
                let ny = parse_usize(parts[1])?;
                let nz = parse_usize(parts[2])?;
                let spacing = parts[3].parse::<f64>().map_err(|e| ClassicalError::Parse {
                    line: lineno,
                    message: format!("bad spacing: {e}"),
                })?;
                state = Some(DiscreteFieldState::new(nx, ny, nz, spacing)?);
                continue;
            }
            if trimmed.starts_with('#') {
                continue;
            }
            let st = state.as_mut().ok_or_else(|| ClassicalError::Parse {
                line: lineno,
                message: "cell row before `# grid` header".into(),
            })?;
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 3 + 18 {
                return Err(ClassicalError::Parse {
                    line: lineno,
                    message: format!("expected 21 columns, got {}", parts.len()),
                });
            }
            let mut nums = Vec::with_capacity(21);
            for p in &parts {
                nums.push(p.parse::<f64>().map_err(|e| ClassicalError::Parse {
                    line: lineno,
                    message: format!("bad number {p:?}: {e}"),
                })?);
            }
            let (i, j, k) = (nums[0] as usize, nums[1] as usize, nums[2] as usize);
            if i >= st.nx || j >= st.ny || k >= st.nz {
                return Err(ClassicalError::Parse {
                    line: lineno,
                    message: format!("cell index ({i},{j},{k}) outside grid"),
                });
            }
            let c = st.idx(i, j, k);
            st.e[c] = [nums[3], nums[4], nums[5]];
            st.b[c] = [nums[6], nums[7], nums[8]];
            st.p[c] = [nums[9], nums[10], nums[11]];
            st.m[c] = [nums[12], nums[13], nums[14]];
            st.rho_charge[c] = nums[15];
            st.j[c] = [nums[16], nums[17], nums[18]];
            st.eps[c] = nums[19];
            st.mu[c] = nums[20];
            seen += 1;
        }
        let st = state.ok_or(ClassicalError::Parse {
            line: 0,
            message: "missing `# grid` header".into(),
        })?;
        if seen != st.cells() {
            return Err(ClassicalError::Parse {
                line: 0,
                message: format!("grid declares {} cells, file has {seen}", st.cells()),
            });
        }
        Ok(st)
    }
}

/// Second-order finite-difference derivative of a sampled line: central in
/// the interior, one-sided three-point at the ends.
fn derivative_along(values: &[f64], h: f64, out: &mut [f64]) {
    let n = values.len();
    debug_assert!(n >= 3);
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
}

/// ∂(component `comp` of `field`)/∂(axis) over the whole grid.
fn partial(
    state: &DiscreteFieldState,
    field: &dyn Fn(usize) -> f64,
    axis: usize,
) -> Vec<f64> {
    let (nx, ny, nz) = (state.nx, state.ny, state.nz);
    let mut out = vec![0.0; state.cells()];
    let h = state.spacing;
    let len = [nx, ny, nz][axis];
    let mut line = vec![0.0; len];
    let mut dline = vec![0.0; len];
    let (u_max, v_max) = match axis {
        0 => (ny, nz),
        1 => (nx, nz),
        _ => (nx, ny),
    };
    for u in 0..u_max {
        for v in 0..v_max {
            for (t, l) in line.iter_mut().enumerate() {
                let c = match axis {
                    0 => state.idx(t, u, v),
                    1 => state.idx(u, t, v),
                    _ => state.idx(u, v, t),
                };
                *l = field(c);
            }
            derivative_along(&line, h, &mut dline);
            for (t, d) in dline.iter().enumerate() {
                let c = match axis {
                    0 => state.idx(t, u, v),
                    1 => state.idx(u, t, v),
                    _ => state.idx(u, v, t),
                };
                out[c] = *d;
            }
        }
    }
    out
}

/// Static volume force density per cell [N/m³]:
///
/// Raabe-Welsch:      (ρ − ∇·P)E + J×B + (∇×M)×B
/// Abraham-Minkowski: ρE + J×B − (ε₀/2)E²∇ε − (μ₀/2)H²∇μ
pub fn force_density(
    kind: TensorKind,
    state: &DiscreteFieldState,
) -> Result<Vec<Vec3>, ClassicalError> {
    if state.nx < 3 || state.ny < 3 || state.nz < 3 {
        return Err(ClassicalError::GridTooSmall(state.nx, state.ny, state.nz));
    }
    let n = state.cells();
    let mut f = vec![[0.0; 3]; n];

    match kind {
        TensorKind::RaabeWelsch => {
            let dpx = partial(state, &|c| state.p[c][0], 0);
            let dpy = partial(state, &|c| state.p[c][1], 1);
            let dpz = partial(state, &|c| state.p[c][2], 2);
            // curl M
            let dmz_dy = partial(state, &|c| state.m[c][2], 1);
            let dmy_dz = partial(state, &|c| state.m[c][1], 2);
            let dmx_dz = partial(state, &|c| state.m[c][0], 2);
            let dmz_dx = partial(state, &|c| state.m[c][2], 0);
            let dmy_dx = partial(state, &|c| state.m[c][1], 0);
            let dmx_dy = partial(state, &|c| state.m[c][0], 1);
            for c in 0..n {
                let div_p = dpx[c] + dpy[c] + dpz[c];
                let bound = state.rho_charge[c] - div_p;
                let curl_m = [
                    dmz_dy[c] - dmy_dz[c],
                    dmx_dz[c] - dmz_dx[c],
                    dmy_dx[c] - dmx_dy[c],
                ];
                let jxb = cross(state.j[c], state.b[c]);
                let mxb = cross(curl_m, state.b[c]);
                for d in 0..3 {
                    f[c][d] = bound * state.e[c][d] + jxb[d] + mxb[d];
                }
            }
        }
        TensorKind::AbrahamMinkowski => {
            let deps = [
                partial(state, &|c| state.eps[c], 0),
                partial(state, &|c| state.eps[c], 1),
                partial(state, &|c| state.eps[c], 2),
            ];
            let dmu = [
                partial(state, &|c| state.mu[c], 0),
                partial(state, &|c| state.mu[c], 1),
                partial(state, &|c| state.mu[c], 2),
            ];
            for c in 0..n {
                let e2 = dot(state.e[c], state.e[c]);
                let h_vec = scale(state.b[c], 1.0 / (VACUUM_PERMEABILITY * state.mu[c]));
                let h2 = dot(h_vec, h_vec);
                let jxb = cross(state.j[c], state.b[c]);
                for d in 0..3 {
                    f[c][d] = state.rho_charge[c] * state.e[c][d] + jxb[d]
                        - 0.5 * VACUUM_PERMITTIVITY * e2 * deps[d][c]
                        - 0.5 * VACUUM_PERMEABILITY * h2 * dmu[d][c];
                }
            }
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const EPS0: f64 = VACUUM_PERMITTIVITY;

    #[test]
    fn zero_fields_zero_tensor() {
        let r = UniformFieldRegion::new([0.0; 3], [0.0; 3], 3.0, 2.0).unwrap();
        for kind in [TensorKind::RaabeWelsch, TensorKind::AbrahamMinkowski] {
            let t = stress_tensor(kind, &r);
            assert_eq!(t, [[0.0; 3]; 3]);
        }
    }

    #[test]
    fn rw_tensor_uniaxial_field() {
        let e0 = 2.5e5;
        let r = UniformFieldRegion::electrostatic([e0, 0.0, 0.0], 4.0).unwrap();
        let t = stress_tensor(TensorKind::RaabeWelsch, &r);
        assert_relative_eq!(t[0][0], 0.5 * EPS0 * e0 * e0, max_relative = 1e-15);
        assert_relative_eq!(t[1][1], -0.5 * EPS0 * e0 * e0, max_relative = 1e-15);
        assert_relative_eq!(t[2][2], -0.5 * EPS0 * e0 * e0, max_relative = 1e-15);
        assert_eq!(t[0][1], 0.0);
    }

    #[test]
    fn condenser_surface_jumps() {
        let e0 = 1e6;
        let eps = 80.0;
        let liquid = UniformFieldRegion::electrostatic([e0, 0.0, 0.0], eps).unwrap();
        let vacuum = UniformFieldRegion::electrostatic([e0, 0.0, 0.0], 1.0).unwrap();
        let up = [0.0, 0.0, 1.0];

        let am = surface_stress_jump(TensorKind::AbrahamMinkowski, &liquid, &vacuum, up).unwrap();
        assert_relative_eq!(am, 0.5 * EPS0 * (eps - 1.0) * e0 * e0, max_relative = 1e-14);

        let rw = surface_stress_jump(TensorKind::RaabeWelsch, &liquid, &vacuum, up).unwrap();
        assert_eq!(rw, 0.0);

        let same = surface_stress_jump(TensorKind::AbrahamMinkowski, &liquid, &liquid, up).unwrap();
        assert_eq!(same, 0.0);

        assert!(surface_stress_jump(TensorKind::RaabeWelsch, &liquid, &vacuum, [0.0, 0.0, 0.5]).is_err());
        assert_eq!(tangential_mismatch(&liquid, &vacuum, up), 0.0);
    }

    #[test]
    fn liquid_rise_hand_value() {
        let spec = LiquidRiseSpec::new(80.0, 1e6, 1000.0, 9.81).unwrap();
        let h = liquid_rise_height(&spec);
        assert_relative_eq!(h, 0.035_651_418_818_103_98, max_relative = 1e-12);
        // h is the surface jump balanced against gravity, by construction
        let liquid = UniformFieldRegion::electrostatic([1e6, 0.0, 0.0], 80.0).unwrap();
        let vacuum = UniformFieldRegion::electrostatic([1e6, 0.0, 0.0], 1.0).unwrap();
        let jump =
            surface_stress_jump(TensorKind::AbrahamMinkowski, &liquid, &vacuum, [0.0, 0.0, 1.0])
                .unwrap();
        assert_relative_eq!(h, jump / (1000.0 * 9.81), max_relative = 1e-14);
    }

    #[test]
    fn liquid_rise_degenerate_cases() {
        let no_contrast = LiquidRiseSpec::new(1.0, 1e6, 1000.0, 9.81).unwrap();
        assert_eq!(liquid_rise_height(&no_contrast), 0.0);
        let no_field = LiquidRiseSpec::new(80.0, 0.0, 1000.0, 9.81).unwrap();
        assert_eq!(liquid_rise_height(&no_field), 0.0);
    }

    #[test]
    fn homogeneous_interior_has_no_force() {
        let mut st = DiscreteFieldState::new(4, 4, 4, 1e-3).unwrap();
        for c in 0..st.cells() {
            st.e[c] = [3e5, 0.0, 0.0];
            st.eps[c] = 5.0;
        }
        st.set_linear_polarisation();
        for kind in [TensorKind::RaabeWelsch, TensorKind::AbrahamMinkowski] {
            let f = force_density(kind, &st).unwrap();
            for cell in &f {
                for d in 0..3 {
                    assert!(cell[d].abs() < 1e-9, "{kind:?} force {cell:?}");
                }
            }
        }
    }

    #[test]
    fn all_zero_grid_has_zero_force() {
        let st = DiscreteFieldState::new(3, 3, 3, 1.0).unwrap();
        for kind in [TensorKind::RaabeWelsch, TensorKind::AbrahamMinkowski] {
            let f = force_density(kind, &st).unwrap();
            assert!(f.iter().all(|c| *c == [0.0; 3]));
        }
    }

    #[test]
    fn grid_too_small_rejected() {
        let st = DiscreteFieldState::new(2, 3, 3, 1.0).unwrap();
        assert!(matches!(
            force_density(TensorKind::RaabeWelsch, &st),
            Err(ClassicalError::GridTooSmall(2, 3, 3))
        ));
    }

    #[test]
    fn linear_ramp_horizontal_field() {
        // ε rises linearly along z, E is horizontal and uniform.
        // AM: f_z = -(ε₀/2)E²·dε/dz everywhere; RW: ∇·P = 0 since E ⊥ ∇ε,
        // so the force vanishes.
        let e0 = 2e5;
        let slope = 80.0; // dε/dz per metre
        let h = 1e-3;
        let mut st = DiscreteFieldState::new(3, 3, 9, h).unwrap();
        for i in 0..st.nx {
            for j in 0..st.ny {
                for k in 0..st.nz {
                    let c = st.idx(i, j, k);
                    st.e[c] = [e0, 0.0, 0.0];
                    st.eps[c] = 2.0 + slope * (k as f64 * h);
                }
            }
        }
        st.set_linear_polarisation();

        let am = force_density(TensorKind::AbrahamMinkowski, &st).unwrap();
        let expected = -0.5 * EPS0 * e0 * e0 * slope;
        let c_mid = st.idx(1, 1, 4);
        assert_relative_eq!(am[c_mid][2], expected, max_relative = 1e-10);
        assert_eq!(am[c_mid][0], 0.0);

        let rw = force_density(TensorKind::RaabeWelsch, &st).unwrap();
        for cell in &rw {
            for component in cell {
                assert!(component.abs() <= 1e-12 * expected.abs());
            }
        }
    }

    #[test]
    fn am_ramp_force_converges_at_second_order() {
        // smooth ε(z): interior central differences converge as h².
        let e0 = 1e5;
        let length = 1.0e-2;
        let eps_profile = |z: f64| 2.0 + (std::f64::consts::PI * z / length).sin();
        let deps = |z: f64| std::f64::consts::PI / length * (std::f64::consts::PI * z / length).cos();

        let mut errors = Vec::new();
        let mut hs = Vec::new();
        for n in [17usize, 33, 65] {
            let h = length / (n - 1) as f64;
            let mut st = DiscreteFieldState::new(3, 3, n, h).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..n {
                        let c = st.idx(i, j, k);
                        st.e[c] = [e0, 0.0, 0.0];
                        st.eps[c] = eps_profile(k as f64 * h);
                    }
                }
            }
            let f = force_density(TensorKind::AbrahamMinkowski, &st).unwrap();
            // probe at a quarter of the span, away from the derivative zero
            let k_probe = (n - 1) / 4;
            let exact = -0.5 * EPS0 * e0 * e0 * deps(k_probe as f64 * h);
            let err = (f[st.idx(1, 1, k_probe)][2] - exact).abs();
            errors.push(err);
            hs.push(h);
        }
        let slope = ((errors[0] / errors[2]).ln()) / ((hs[0] / hs[2]).ln());
        assert!(
            (slope - 2.0).abs() < 0.1,
            "convergence order {slope} should be 2.0 +- 0.1 (errors {errors:?})"
        );
    }

    #[test]
    fn ramp_volume_force_balances_stress_jump() {
        // box enclosing a smooth planar ε ramp: ∫ f_z^AM dz equals the
        // T_zz difference of the end faces
        let e0 = 3e5;
        let n = 81;
        let length = 1e-2;
        let h = length / (n - 1) as f64;
        let eps_at = |z: f64| 2.0 + 3.0 * (z / length).powi(2) * (3.0 - 2.0 * z / length);
        let mut st = DiscreteFieldState::new(3, 3, n, h).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..n {
                    let c = st.idx(i, j, k);
                    st.e[c] = [e0, 0.0, 0.0];
                    st.eps[c] = eps_at(k as f64 * h);
                }
            }
        }
        let f = force_density(TensorKind::AbrahamMinkowski, &st).unwrap();
        // trapezoid along the ramp axis
        let mut integral = 0.0;
        for k in 0..n {
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            integral += w * f[st.idx(1, 1, k)][2] * h;
        }
        let bottom = UniformFieldRegion::electrostatic([e0, 0.0, 0.0], eps_at(0.0)).unwrap();
        let top = UniformFieldRegion::electrostatic([e0, 0.0, 0.0], eps_at(length)).unwrap();
        let t_b = stress_tensor(TensorKind::AbrahamMinkowski, &bottom)[2][2];
        let t_t = stress_tensor(TensorKind::AbrahamMinkowski, &top)[2][2];
        assert_relative_eq!(integral, t_t - t_b, max_relative = 1e-3);
    }

    #[test]
    fn state_roundtrip_through_columnar_text() {
        let mut st = DiscreteFieldState::new(3, 3, 4, 2.5e-4).unwrap();
        for c in 0..st.cells() {
            st.e[c] = [c as f64, -1.5, 0.25 * c as f64];
            st.eps[c] = 1.0 + c as f64 * 0.1;
            st.rho_charge[c] = 1e-6 * c as f64;
        }
        st.set_linear_polarisation();
        let mut buf = Vec::new();
        st.write_columns(&mut buf).unwrap();
        let back = DiscreteFieldState::read_columns(buf.as_slice()).unwrap();
        assert_eq!(st, back);
    }

    proptest! {
        #[test]
        fn tensors_are_symmetric(
            e in proptest::array::uniform3(-1e6..1e6f64),
            b in proptest::array::uniform3(-10.0..10.0f64),
            eps in 1.0..100.0f64,
            mu in 0.1..10.0f64,
        ) {
            let r = UniformFieldRegion::new(e, b, eps, mu).unwrap();
            for kind in [TensorKind::RaabeWelsch, TensorKind::AbrahamMinkowski] {
                let t = stress_tensor(kind, &r);
                for (i, row) in t.iter().enumerate() {
                    for (k, v) in row.iter().enumerate() {
                        let denom = v.abs().max(t[k][i].abs()).max(1e-30);
                        prop_assert!(((v - t[k][i]) / denom).abs() < 1e-9);
                    }
                }
            }
        }

        #[test]
        fn tensors_agree_in_vacuum(
            e in proptest::array::uniform3(-1e6..1e6f64),
            b in proptest::array::uniform3(-10.0..10.0f64),
        ) {
            let r = UniformFieldRegion::new(e, b, 1.0, 1.0).unwrap();
            let rw = stress_tensor(TensorKind::RaabeWelsch, &r);
            let am = stress_tensor(TensorKind::AbrahamMinkowski, &r);
            for i in 0..3 {
                for k in 0..3 {
                    prop_assert_eq!(rw[i][k], am[i][k]);
                }
            }
        }
    }
}
