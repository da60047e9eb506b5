//! Input data for an arch and its validation.
//!
//! Raw inputs (`Material`, `ArchGeometry`, `CrackSpec`, `ModelOptions`) are
//! plain values. [`ArchModel::new`] checks every invariant, reporting each
//! violation with the config path of the offending field, and derives the
//! section properties and interface joints used by the solver.

use std::f64::consts::{PI, TAU};

use crate::compliance::{self, ComplianceResult};
use crate::error::{Error, FieldError, Result};

/// Largest relative crack depth for which the shape functions are used.
pub const MAX_DEPTH_RATIO: f64 = 0.7;

/// Default conditioning limit above which a cracked interface is treated as a hinge.
pub const DEFAULT_HINGE_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    /// E, Pa.
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    /// Volumetric density, kg/m³.
    pub mass_density: f64,
    /// Nonlocal parameter (e₀a)², m².
    pub nonlocal_eta: f64,
}

/// Constant-thickness piece of the arch ending at `end_angle`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub end_angle: f64,
    pub thickness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchGeometry {
    pub radius: f64,
    pub width: f64,
    pub central_angle: f64,
    /// Ordered by angle; the last segment ends at `central_angle`.
    pub segments: Vec<Segment>,
}

impl ArchGeometry {
    pub fn uniform(radius: f64, width: f64, central_angle: f64, thickness: f64) -> Self {
        Self {
            radius,
            width,
            central_angle,
            segments: vec![Segment {
                end_angle: central_angle,
                thickness,
            }],
        }
    }

    /// Arch with thickness steps at `step_angles`; `thicknesses` has one more entry.
    pub fn stepped(
        radius: f64,
        width: f64,
        central_angle: f64,
        step_angles: &[f64],
        thicknesses: &[f64],
    ) -> Self {
        let ends = step_angles
            .iter()
            .copied()
            .chain(std::iter::once(central_angle));
        Self {
            radius,
            width,
            central_angle,
            segments: ends
                .zip(thicknesses)
                .map(|(end_angle, &thickness)| Segment {
                    end_angle,
                    thickness,
                })
                .collect(),
        }
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn interface_count(&self) -> usize {
        self.segments.len().saturating_sub(1)
    }

    pub fn start_angle(&self, segment: usize) -> f64 {
        if segment == 0 {
            0.0
        } else {
            self.segments[segment - 1].end_angle
        }
    }

    pub fn span(&self, segment: usize) -> f64 {
        self.segments[segment].end_angle - self.start_angle(segment)
    }

    /// Angle of interface `i`, between segments `i` and `i + 1`.
    pub fn interface_angle(&self, interface: usize) -> f64 {
        self.segments[interface].end_angle
    }

    pub fn thickness(&self, segment: usize) -> f64 {
        self.segments[segment].thickness
    }

    pub fn min_thickness(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.thickness)
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the segment containing `phi` (interfaces belong to the left segment).
    pub fn segment_at(&self, phi: f64) -> usize {
        self.segments
            .iter()
            .position(|s| phi <= s.end_angle)
            .unwrap_or(self.segments.len() - 1)
    }

    fn validate(&self, errors: &mut Vec<FieldError>) {
        positive(errors, "[geometry].radius", self.radius);
        positive(errors, "[geometry].width", self.width);
        if !(self.central_angle > 0.0 && self.central_angle < TAU) {
            errors.push(FieldError::new(
                "[geometry].central_angle",
                format!("must lie in (0, 2π) rad, got {}", self.central_angle),
            ));
        }
        if self.segments.is_empty() {
            errors.push(FieldError::new(
                "[geometry].thicknesses",
                "segment list is empty",
            ));
            return;
        }
        let mut previous = 0.0;
        for (j, seg) in self.segments.iter().enumerate() {
            let last = j + 1 == self.segments.len();
            if !(seg.end_angle > previous) || !seg.end_angle.is_finite() {
                let path = if last {
                    "[geometry].central_angle".to_string()
                } else {
                    format!("[geometry].step_angles[{j}]")
                };
                errors.push(FieldError::new(
                    path,
                    format!(
                        "segment end angles must be strictly increasing ({} after {previous})",
                        seg.end_angle
                    ),
                ));
            }
            previous = seg.end_angle;
            positive(
                errors,
                &format!("[geometry].thicknesses[{j}]"),
                seg.thickness,
            );
        }
        let last = self.segments[self.segments.len() - 1].end_angle;
        if last != self.central_angle {
            errors.push(FieldError::new(
                "[geometry].central_angle",
                format!(
                    "last segment ends at {last}, expected {}",
                    self.central_angle
                ),
            ));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ShapeFunction {
    #[default]
    RizosPolynomial,
    TadaTrigonometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PlaneState {
    #[default]
    Stress,
    Strain,
}

/// Which side of a step the relative depth `s = c/h` is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ReferenceThickness {
    #[default]
    ThinnerSide,
    LeftSide,
    RightSide,
}

/// Edge crack at a thickness step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrackSpec {
    /// Interface between segment `interface_index` and `interface_index + 1`.
    pub interface_index: usize,
    pub depth_ratio: f64,
    pub shape_function: ShapeFunction,
    pub plane_state: PlaneState,
    pub reference_thickness: ReferenceThickness,
    /// Replaces the fracture-mechanics compliance (rad/(N·m)); `f64::INFINITY` gives a hinge.
    pub compliance_override: Option<f64>,
}

impl CrackSpec {
    pub fn new(interface_index: usize, depth_ratio: f64) -> Self {
        Self {
            interface_index,
            depth_ratio,
            shape_function: ShapeFunction::default(),
            plane_state: PlaneState::default(),
            reference_thickness: ReferenceThickness::default(),
            compliance_override: None,
        }
    }

    /// Interface with a prescribed rotational compliance.
    pub fn with_compliance(interface_index: usize, compliance: f64) -> Self {
        Self {
            compliance_override: Some(compliance),
            ..Self::new(interface_index, 0.0)
        }
    }

    pub fn hinge(interface_index: usize) -> Self {
        Self::with_compliance(interface_index, f64::INFINITY)
    }
}

/// Governing equation variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Formulation {
    /// `X⁗ + (1 + K)X″ − K X = 0` with `K = ω²ηρhR²/(EI)`; moment `−EI X″ − ηρbhω² X`.
    #[default]
    Reduced,
    /// Arc-length Laplacian and curvature `−W″/R²`:
    /// `X⁗ + (1 + (η/R²)Ω²)X″ − Ω² X = 0` with `Ω² = 12ρR⁴ω²/(E h²)`;
    /// moment `−(EI/R²) X″ − ηρbhω² X`.
    Consistent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelOptions {
    pub formulation: Formulation,
    /// Interfaces with `C_θ·EI/R` above this are assembled as pure hinges.
    pub hinge_threshold: f64,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            formulation: Formulation::default(),
            hinge_threshold: DEFAULT_HINGE_THRESHOLD,
        }
    }
}

impl ModelOptions {
    pub fn with_formulation(formulation: Formulation) -> Self {
        Self {
            formulation,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub omega_min: f64,
    pub omega_max: f64,
    pub scan_points: usize,
    pub bisect_tol_rel: f64,
    pub max_modes: usize,
}

pub const DEFAULT_SCAN_POINTS: usize = 2000;
pub const DEFAULT_BISECT_TOL_REL: f64 = 1e-12;
pub const DEFAULT_MAX_MODES: usize = 5;

impl SolverConfig {
    pub fn new(omega_min: f64, omega_max: f64) -> Self {
        Self {
            omega_min,
            omega_max,
            scan_points: DEFAULT_SCAN_POINTS,
            bisect_tol_rel: DEFAULT_BISECT_TOL_REL,
            max_modes: DEFAULT_MAX_MODES,
        }
    }

    /// Window `[1e-3, f·h_max/h_min] × ω₁` around the uniform-arch estimate
    /// of the first frequency, using the thinnest segment. `f` is 10 for the
    /// reduced formulation and 40 for the consistent one, whose frequencies
    /// grow roughly as n² instead of n.
    pub fn default_for(model: &ArchModel) -> Result<Self> {
        let omega1 = model.estimate_first_frequency()?;
        let upper = match model.formulation() {
            Formulation::Reduced => 10.0,
            Formulation::Consistent => 40.0,
        };
        let g = model.geometry();
        let (lo, hi) = (0..g.segments.len())
            .map(|i| g.thickness(i))
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), h| {
                (lo.min(h), hi.max(h))
            });
        Ok(Self::new(1e-3 * omega1, upper * (hi / lo) * omega1))
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<FieldError>> {
        let mut errors = Vec::new();
        if !(self.omega_min > 0.0 && self.omega_min.is_finite()) {
            errors.push(FieldError::new("[solver].omega_min", "must be > 0"));
        }
        if !(self.omega_max > self.omega_min && self.omega_max.is_finite()) {
            errors.push(FieldError::new(
                "[solver].omega_max",
                "must exceed omega_min",
            ));
        }
        if self.scan_points < 2 {
            errors.push(FieldError::new(
                "[solver].scan_points",
                "must be at least 2",
            ));
        }
        if !(self.bisect_tol_rel > 0.0 && self.bisect_tol_rel < 1e-2) {
            errors.push(FieldError::new(
                "[solver].bisect_tol_rel",
                "must lie in (0, 1e-2)",
            ));
        }
        if self.max_modes == 0 {
            errors.push(FieldError::new("[solver].max_modes", "must be at least 1"));
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }
}

/// Derived per-segment cross-section properties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section {
    /// I = b h³/12, m⁴.
    pub second_moment: f64,
    /// ρ b h, kg/m.
    pub mass_per_length: f64,
}

/// Second moment and mass per unit arc length of segment `segment`.
pub fn derive_section(
    material: &Material,
    geometry: &ArchGeometry,
    segment: usize,
) -> Result<Section> {
    let seg = geometry.segments.get(segment).ok_or(Error::SegmentIndex {
        index: segment,
        count: geometry.segments.len(),
    })?;
    let h = seg.thickness;
    Ok(Section {
        second_moment: geometry.width * h * h * h / 12.0,
        mass_per_length: material.mass_density * geometry.width * h,
    })
}

/// How the two sides of an interface are joined in rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Joint {
    /// Slope jump `R·C_θ·M`; `compliance == 0` is a rigid connection.
    Spring { compliance: f64 },
    /// Zero moment at the interface, free slope jump.
    Hinge,
}

/// A crack with its reference thickness and compliance resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedCrack {
    pub spec: CrackSpec,
    pub reference_thickness: f64,
    /// `None` when the compliance was prescribed directly.
    pub fracture: Option<ComplianceResult>,
    pub compliance: f64,
}

/// A validated arch: immutable, with derived sections and joints.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchModel {
    material: Material,
    geometry: ArchGeometry,
    cracks: Vec<CrackSpec>,
    options: ModelOptions,
    sections: Vec<Section>,
    resolved: Vec<Option<ResolvedCrack>>,
    joints: Vec<Joint>,
}

fn positive(errors: &mut Vec<FieldError>, path: &str, value: f64) {
    if !(value > 0.0 && value.is_finite()) {
        errors.push(FieldError::new(path, format!("must be > 0, got {value}")));
    }
}

fn validate_material(m: &Material, errors: &mut Vec<FieldError>) {
    positive(errors, "[material].youngs_modulus", m.youngs_modulus);
    positive(errors, "[material].mass_density", m.mass_density);
    if !(m.poisson_ratio >= 0.0 && m.poisson_ratio < 0.5) {
        errors.push(FieldError::new(
            "[material].poisson_ratio",
            format!("must lie in [0, 0.5), got {}", m.poisson_ratio),
        ));
    }
    if !(m.nonlocal_eta >= 0.0 && m.nonlocal_eta.is_finite()) {
        errors.push(FieldError::new(
            "[material].nonlocal_eta",
            format!("must be >= 0, got {}", m.nonlocal_eta),
        ));
    }
}

fn crack_path(k: usize, field: &str) -> String {
    format!("[crack#{}].{field}", k + 1)
}

impl ArchModel {
    pub fn new(
        material: Material,
        geometry: ArchGeometry,
        cracks: Vec<CrackSpec>,
        options: ModelOptions,
    ) -> Result<Self> {
        let mut errors = Vec::new();
        validate_material(&material, &mut errors);
        geometry.validate(&mut errors);
        if !(options.hinge_threshold > 0.0) {
            errors.push(FieldError::new("[model].hinge_threshold", "must be > 0"));
        }
        let interfaces = geometry.interface_count();
        let mut seen = vec![false; interfaces];
        for (k, crack) in cracks.iter().enumerate() {
            if crack.interface_index >= interfaces {
                errors.push(FieldError::new(
                    crack_path(k, "interface"),
                    format!(
                        "crack must sit at an interior interface (0..{interfaces}), got {}",
                        crack.interface_index
                    ),
                ));
            } else if std::mem::replace(&mut seen[crack.interface_index], true) {
                errors.push(FieldError::new(
                    crack_path(k, "interface"),
                    format!("interface {} already has a crack", crack.interface_index),
                ));
            }
            if !(0.0..=MAX_DEPTH_RATIO).contains(&crack.depth_ratio) {
                errors.push(FieldError::new(
                    crack_path(k, "depth_ratio"),
                    format!(
                        "depth_ratio out of supported range [0, {MAX_DEPTH_RATIO}], got {}",
                        crack.depth_ratio
                    ),
                ));
            }
            if let Some(c) = crack.compliance_override {
                if !(c >= 0.0) {
                    errors.push(FieldError::new(crack_path(k, "compliance"), "must be >= 0"));
                }
            }
        }
        if !errors.is_empty() {
            return Err(Error::Invalid(errors));
        }

        let sections = (0..geometry.segment_count())
            .map(|j| derive_section(&material, &geometry, j))
            .collect::<Result<Vec<_>>>()?;
        let mut model = Self {
            material,
            geometry,
            cracks,
            options,
            sections,
            resolved: vec![None; interfaces],
            joints: vec![Joint::Spring { compliance: 0.0 }; interfaces],
        };
        model.cracks.sort_by_key(|c| c.interface_index);
        for crack in model.cracks.clone() {
            let i = crack.interface_index;
            let (left, right) = (model.geometry.thickness(i), model.geometry.thickness(i + 1));
            let h_ref = match crack.reference_thickness {
                ReferenceThickness::ThinnerSide => left.min(right),
                ReferenceThickness::LeftSide => left,
                ReferenceThickness::RightSide => right,
            };
            let (fracture, compliance) = match crack.compliance_override {
                Some(c) => (None, c),
                None => {
                    let r = compliance::rotational_compliance(
                        &model.material,
                        model.geometry.width,
                        h_ref,
                        &crack,
                    )?;
                    (Some(r), r.compliance)
                }
            };
            // dimensionless spring flexibility C_θ·EI/R of the left side
            let ei = model.material.youngs_modulus * model.sections[i].second_moment;
            let conditioning = compliance * ei / model.geometry.radius;
            model.joints[i] =
                if compliance.is_infinite() || conditioning > model.options.hinge_threshold {
                    Joint::Hinge
                } else {
                    Joint::Spring { compliance }
                };
            model.resolved[i] = Some(ResolvedCrack {
                spec: crack,
                reference_thickness: h_ref,
                fracture,
                compliance,
            });
        }
        Ok(model)
    }

    /// Re-runs validation on the raw inputs this model was built from.
    pub fn revalidate(&self) -> Result<Self> {
        Self::new(
            self.material,
            self.geometry.clone(),
            self.cracks.clone(),
            self.options,
        )
    }

    pub fn material(&self) -> &Material {
        &self.material
    }

    pub fn geometry(&self) -> &ArchGeometry {
        &self.geometry
    }

    pub fn cracks(&self) -> &[CrackSpec] {
        &self.cracks
    }

    pub fn options(&self) -> &ModelOptions {
        &self.options
    }

    pub fn formulation(&self) -> Formulation {
        self.options.formulation
    }

    pub fn segment_count(&self) -> usize {
        self.geometry.segment_count()
    }

    pub fn section(&self, segment: usize) -> &Section {
        &self.sections[segment]
    }

    pub fn joint(&self, interface: usize) -> Joint {
        self.joints[interface]
    }

    pub fn resolved_crack(&self, interface: usize) -> Option<&ResolvedCrack> {
        self.resolved[interface].as_ref()
    }

    /// Coefficient of X″ in the bending moment of segment `segment` (N·m per unit X″).
    pub fn bending_stiffness(&self, segment: usize) -> f64 {
        let ei = self.material.youngs_modulus * self.sections[segment].second_moment;
        match self.options.formulation {
            Formulation::Reduced => -ei,
            Formulation::Consistent => -ei / (self.geometry.radius * self.geometry.radius),
        }
    }

    /// Coefficient of ω²X in the bending moment: `−η ρ b h`.
    pub fn moment_inertia_coefficient(&self, segment: usize) -> f64 {
        -self.material.nonlocal_eta * self.sections[segment].mass_per_length
    }

    /// First natural frequency of a uniform simply supported arch with the
    /// thinnest segment's thickness. Uses the lowest mode with `nπ/β > 1`.
    pub fn estimate_first_frequency(&self) -> Result<f64> {
        let beta = self.geometry.central_angle;
        let n = (beta / PI).floor() + 1.0;
        let k2 = (n * PI / beta).powi(2);
        let thinnest = (0..self.segment_count())
            .min_by(|&a, &b| {
                self.geometry
                    .thickness(a)
                    .total_cmp(&self.geometry.thickness(b))
            })
            .unwrap_or(0);
        let scale = crate::basis::frequency_scale(self, thinnest);
        if scale.c_per_omega2 <= 0.0 {
            return Err(Error::NoDefaultWindow(
                "the reduced formulation has no inertia when nonlocal_eta = 0".into(),
            ));
        }
        // λ² = −k² in λ⁴ + (1 + ω²a₁)λ² − ω²c₁ = 0
        let omega2 = (k2 * k2 - k2) / (scale.c_per_omega2 + k2 * scale.a_per_omega2);
        Ok(omega2.sqrt())
    }

    /// `ω·(Rβ)²·√(12ρ/E)/h₀`.
    pub fn normalized_frequency(&self, omega: f64) -> f64 {
        let g = &self.geometry;
        let m = &self.material;
        omega
            * (g.radius * g.central_angle).powi(2)
            * (12.0 * m.mass_density / m.youngs_modulus).sqrt()
            / g.thickness(0)
    }
}

/// A model paired with its solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedModel {
    pub model: ArchModel,
    pub solver: SolverConfig,
}

impl ValidatedModel {
    pub fn revalidate(&self) -> Result<Self> {
        validate_model(
            self.model.material,
            self.model.geometry.clone(),
            self.model.cracks.clone(),
            self.model.options,
            self.solver,
        )
    }
}

/// Validates all inputs, collecting every violated invariant.
pub fn validate_model(
    material: Material,
    geometry: ArchGeometry,
    cracks: Vec<CrackSpec>,
    options: ModelOptions,
    solver: SolverConfig,
) -> Result<ValidatedModel> {
    let solver_errors = solver.validate().err().unwrap_or_default();
    match ArchModel::new(material, geometry, cracks, options) {
        Ok(model) if solver_errors.is_empty() => Ok(ValidatedModel { model, solver }),
        Ok(_) => Err(Error::Invalid(solver_errors)),
        Err(Error::Invalid(mut errors)) => {
            errors.extend(solver_errors);
            Err(Error::Invalid(errors))
        }
        Err(e) => Err(e),
    }
}
