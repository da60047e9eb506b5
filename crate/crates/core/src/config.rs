//! Run configuration files.
//!
//! A config is a sequence of `[section]` headers followed by `key = value`
//! lines. `#` starts a comment. Sections are `[material]`, `[geometry]`,
//! `[model]`, `[solver]` and `[sweep]`, each at most once, plus any number
//! of `[crack]` sections. Angles are in radians, lengths in meters, E in Pa,
//! ρ in kg/m³ and η in m². Lists are comma separated.
//!
//! ```text
//! [material]
//! youngs_modulus = 7e11
//! poisson_ratio = 0.3
//! mass_density = 2300
//! nonlocal_eta = 1e-18
//!
//! [geometry]
//! radius = 30e-9
//! central_angle = 1
//! thicknesses = 10e-9, 20e-9
//! step_angles = 0.5
//!
//! [crack]
//! interface = 0
//! depth_ratio = 0.3
//! ```
//!
//! Unknown sections and keys are errors. Every problem is reported with
//! the line it came from and the field path, e.g. `[geometry].radius`.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::FieldError;
use crate::model::{
    ArchGeometry, ArchModel, CrackSpec, Formulation, Material, ModelOptions, PlaneState,
    ReferenceThickness, ShapeFunction, SolverConfig, ValidatedModel, DEFAULT_BISECT_TOL_REL,
    DEFAULT_HINGE_THRESHOLD, DEFAULT_MAX_MODES, DEFAULT_SCAN_POINTS,
};

/// Section width used when `[geometry].width` is omitted; frequencies do not depend on it.
pub const DEFAULT_WIDTH: f64 = 1e-9;
pub const DEFAULT_ORACLE_THRESHOLD: f64 = 5e-3;
/// Grid density of the finite-difference cross-check, nodes per radian.
pub const DEFAULT_ORACLE_NODES: usize = 400;

/// One problem found while reading a config.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub path: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub diagnostics: Vec<Diagnostic>,
}

impl ConfigError {
    fn single(line: Option<usize>, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            diagnostics: vec![Diagnostic {
                line,
                path: path.into(),
                message: message.into(),
            }],
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

/// Quantity varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    /// First step angle.
    Alpha,
    /// Central angle.
    Beta,
    Radius,
    Eta,
    /// Thickness of the first segment.
    H0,
    /// Thickness of the second segment.
    H1,
    /// Depth ratio of the crack at the first interface.
    S,
}

impl SweepParam {
    pub const ALL: [SweepParam; 7] = [
        SweepParam::Alpha,
        SweepParam::Beta,
        SweepParam::Radius,
        SweepParam::Eta,
        SweepParam::H0,
        SweepParam::H1,
        SweepParam::S,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Alpha => "alpha",
            SweepParam::Beta => "beta",
            SweepParam::Radius => "radius",
            SweepParam::Eta => "eta",
            SweepParam::H0 => "h0",
            SweepParam::H1 => "h1",
            SweepParam::S => "s",
        }
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                format!("unknown sweep parameter '{s}' (expected alpha, beta, radius, eta, h0, h1 or s)")
            })
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepSpec {
    /// `from + i·(to − from)/(steps − 1)`, with `to` hit exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        let step = (self.to - self.from) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.to
                } else {
                    self.from + step * i as f64
                }
            })
            .collect()
    }

    pub fn check(&self) -> Result<(), String> {
        if self.steps == 0 {
            return Err("steps must be at least 1".into());
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if self.steps > 1 && self.from == self.to {
            return Err(format!("empty range: from = to = {}", self.from));
        }
        Ok(())
    }
}

/// Solver settings as written in the file; the frequency window is optional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// `(omega_min, omega_max)` in rad/s; derived from the model when absent.
    pub window: Option<(f64, f64)>,
    pub scan_points: usize,
    pub bisect_tol_rel: f64,
    pub max_modes: usize,
    pub oracle_threshold: f64,
    pub oracle_nodes: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            window: None,
            scan_points: DEFAULT_SCAN_POINTS,
            bisect_tol_rel: DEFAULT_BISECT_TOL_REL,
            max_modes: DEFAULT_MAX_MODES,
            oracle_threshold: DEFAULT_ORACLE_THRESHOLD,
            oracle_nodes: DEFAULT_ORACLE_NODES,
        }
    }
}

impl SolverSettings {
    /// Solver configuration for `model`, filling in the default window if needed.
    pub fn for_model(&self, model: &ArchModel) -> crate::Result<SolverConfig> {
        let base = match self.window {
            Some((lo, hi)) => SolverConfig::new(lo, hi),
            None => SolverConfig::default_for(model)?,
        };
        Ok(SolverConfig {
            scan_points: self.scan_points,
            bisect_tol_rel: self.bisect_tol_rel,
            max_modes: self.max_modes,
            ..base
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub material: Material,
    pub geometry: ArchGeometry,
    pub cracks: Vec<CrackSpec>,
    pub options: ModelOptions,
    pub solver: SolverSettings,
    pub sweep: Option<SweepSpec>,
}

impl RunConfig {
    /// Parses and validates config text.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let (config, lines) = parse_raw(text)?;
        config.check().map_err(|errors| locate(errors, &lines))?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::single(None, "", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn model(&self) -> crate::Result<ArchModel> {
        ArchModel::new(
            self.material,
            self.geometry.clone(),
            self.cracks.clone(),
            self.options,
        )
    }

    /// Model together with the solver configuration it will be solved with.
    pub fn validated(&self) -> crate::Result<ValidatedModel> {
        let model = self.model()?;
        let solver = self.solver.for_model(&model)?;
        solver.validate().map_err(crate::Error::Invalid)?;
        Ok(ValidatedModel { model, solver })
    }

    /// Copy with `param` set to `value`.
    ///
    /// Sweeping `s` on an uncracked stepped arch adds a crack at the first
    /// interface with default shape function and plane state.
    pub fn with_param(&self, param: SweepParam, value: f64) -> Result<Self, String> {
        let mut c = self.clone();
        let segments = c.geometry.segments.len();
        match param {
            SweepParam::Alpha => {
                if segments < 2 {
                    return Err("sweeping alpha requires at least two segments".into());
                }
                c.geometry.segments[0].end_angle = value;
            }
            SweepParam::Beta => {
                c.geometry.central_angle = value;
                c.geometry.segments[segments - 1].end_angle = value;
            }
            SweepParam::Radius => c.geometry.radius = value,
            SweepParam::Eta => c.material.nonlocal_eta = value,
            SweepParam::H0 => c.geometry.segments[0].thickness = value,
            SweepParam::H1 => {
                if segments < 2 {
                    return Err("sweeping h1 requires at least two segments".into());
                }
                c.geometry.segments[1].thickness = value;
            }
            SweepParam::S => {
                if segments < 2 {
                    return Err("sweeping s requires at least two segments".into());
                }
                match c.cracks.iter_mut().min_by_key(|k| k.interface_index) {
                    Some(crack) => crack.depth_ratio = value,
                    None => c.cracks.push(CrackSpec::new(0, value)),
                }
            }
        }
        Ok(c)
    }

    fn check(&self) -> Result<(), Vec<FieldError>> {
        let model = match self.model() {
            Ok(m) => m,
            Err(crate::Error::Invalid(errors)) => return Err(errors),
            Err(e) => return Err(vec![FieldError::new("", e.to_string())]),
        };
        let mut errors = Vec::new();
        match self.solver.for_model(&model) {
            Ok(solver) => {
                if let Err(e) = solver.validate() {
                    errors.extend(e);
                }
            }
            Err(e) => errors.push(FieldError::new("[solver].omega_min", e.to_string())),
        }
        if !(self.solver.oracle_threshold > 0.0) {
            errors.push(FieldError::new("[solver].oracle_threshold", "must be > 0"));
        }
        if self.solver.oracle_nodes == 0 {
            errors.push(FieldError::new(
                "[solver].oracle_nodes",
                "must be at least 1",
            ));
        }
        if let Some(sweep) = &self.sweep {
            if let Err(message) = sweep.check() {
                errors.push(FieldError::new("[sweep].steps", message));
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }
}

impl Default for RunConfig {
    /// Stepped arch with E = 700 GPa, ν = 0.3, R = 30 nm, h = 10/20 nm.
    fn default() -> Self {
        Self {
            material: Material {
                youngs_modulus: 7e11,
                poisson_ratio: 0.3,
                mass_density: 2300.0,
                nonlocal_eta: 1e-18,
            },
            geometry: ArchGeometry::stepped(30e-9, DEFAULT_WIDTH, 1.0, &[0.5], &[10e-9, 20e-9]),
            cracks: Vec::new(),
            options: ModelOptions::default(),
            solver: SolverSettings::default(),
            sweep: None,
        }
    }
}

fn list(values: impl IntoIterator<Item = f64>) -> String {
    values
        .into_iter()
        .map(|v| format!("{v:e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Canonical text form; parses back to an equal config.
impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.material;
        writeln!(f, "[material]")?;
        writeln!(f, "youngs_modulus = {:e}", m.youngs_modulus)?;
        writeln!(f, "poisson_ratio = {:e}", m.poisson_ratio)?;
        writeln!(f, "mass_density = {:e}", m.mass_density)?;
        writeln!(f, "nonlocal_eta = {:e}", m.nonlocal_eta)?;

        let g = &self.geometry;
        writeln!(f, "\n[geometry]")?;
        writeln!(f, "radius = {:e}", g.radius)?;
        writeln!(f, "width = {:e}", g.width)?;
        writeln!(f, "central_angle = {:e}", g.central_angle)?;
        writeln!(
            f,
            "thicknesses = {}",
            list(g.segments.iter().map(|s| s.thickness))
        )?;
        if g.segments.len() > 1 {
            let steps = g.segments[..g.segments.len() - 1]
                .iter()
                .map(|s| s.end_angle);
            writeln!(f, "step_angles = {}", list(steps))?;
        }

        for c in &self.cracks {
            writeln!(f, "\n[crack]")?;
            writeln!(f, "interface = {}", c.interface_index)?;
            writeln!(f, "depth_ratio = {:e}", c.depth_ratio)?;
            writeln!(f, "shape_function = {}", shape_name(c.shape_function))?;
            writeln!(f, "plane_state = {}", plane_name(c.plane_state))?;
            writeln!(
                f,
                "reference_thickness = {}",
                reference_name(c.reference_thickness)
            )?;
            if let Some(v) = c.compliance_override {
                writeln!(f, "compliance = {v:e}")?;
            }
        }

        writeln!(f, "\n[model]")?;
        writeln!(
            f,
            "formulation = {}",
            formulation_name(self.options.formulation)
        )?;
        writeln!(f, "support = simply-supported")?;
        writeln!(f, "hinge_threshold = {:e}", self.options.hinge_threshold)?;

        let s = &self.solver;
        writeln!(f, "\n[solver]")?;
        if let Some((lo, hi)) = s.window {
            writeln!(f, "omega_min = {lo:e}")?;
            writeln!(f, "omega_max = {hi:e}")?;
        }
        writeln!(f, "scan_points = {}", s.scan_points)?;
        writeln!(f, "bisect_tol_rel = {:e}", s.bisect_tol_rel)?;
        writeln!(f, "max_modes = {}", s.max_modes)?;
        writeln!(f, "oracle_threshold = {:e}", s.oracle_threshold)?;
        writeln!(f, "oracle_nodes = {}", s.oracle_nodes)?;

        if let Some(sw) = &self.sweep {
            writeln!(f, "\n[sweep]")?;
            writeln!(f, "param = {}", sw.param)?;
            writeln!(f, "from = {:e}", sw.from)?;
            writeln!(f, "to = {:e}", sw.to)?;
            writeln!(f, "steps = {}", sw.steps)?;
        }
        Ok(())
    }
}

pub fn formulation_name(f: Formulation) -> &'static str {
    match f {
        Formulation::Reduced => "reduced",
        Formulation::Consistent => "consistent",
    }
}

pub fn parse_formulation(s: &str) -> Result<Formulation, String> {
    match s {
        "reduced" => Ok(Formulation::Reduced),
        "consistent" => Ok(Formulation::Consistent),
        _ => Err(format!(
            "unknown formulation '{s}' (expected reduced or consistent)"
        )),
    }
}

fn shape_name(s: ShapeFunction) -> &'static str {
    match s {
        ShapeFunction::RizosPolynomial => "rizos",
        ShapeFunction::TadaTrigonometric => "tada",
    }
}

fn plane_name(p: PlaneState) -> &'static str {
    match p {
        PlaneState::Stress => "stress",
        PlaneState::Strain => "strain",
    }
}

fn reference_name(r: ReferenceThickness) -> &'static str {
    match r {
        ReferenceThickness::ThinnerSide => "thinner",
        ReferenceThickness::LeftSide => "left",
        ReferenceThickness::RightSide => "right",
    }
}

fn choice<T: Copy>(value: &str, options: &[(&str, T)]) -> Result<T, String> {
    options
        .iter()
        .find(|(name, _)| *name == value)
        .map(|(_, v)| *v)
        .ok_or_else(|| {
            let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
            format!(
                "unknown value '{value}' (expected one of {})",
                names.join(", ")
            )
        })
}

fn number(value: &str) -> Result<f64, String> {
    let v: f64 = value
        .parse()
        .map_err(|_| format!("expected a number, got '{value}'"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a finite number, got '{value}'"))
    }
}

fn count(value: &str) -> Result<usize, String> {
    value
        .parse()
        .map_err(|_| format!("expected a non-negative integer, got '{value}'"))
}

fn numbers(value: &str) -> Result<Vec<f64>, String> {
    value.split(',').map(|v| number(v.trim())).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Section {
    Material,
    Geometry,
    Crack,
    Model,
    Solver,
    Sweep,
}

impl Section {
    fn keys(self) -> &'static [&'static str] {
        match self {
            Section::Material => &[
                "youngs_modulus",
                "poisson_ratio",
                "mass_density",
                "nonlocal_eta",
            ],
            Section::Geometry => &[
                "radius",
                "width",
                "central_angle",
                "thicknesses",
                "step_angles",
            ],
            Section::Crack => &[
                "interface",
                "depth_ratio",
                "shape_function",
                "plane_state",
                "reference_thickness",
                "compliance",
            ],
            Section::Model => &["formulation", "support", "hinge_threshold"],
            Section::Solver => &[
                "omega_min",
                "omega_max",
                "scan_points",
                "bisect_tol_rel",
                "max_modes",
                "oracle_threshold",
                "oracle_nodes",
            ],
            Section::Sweep => &["param", "from", "to", "steps"],
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            Section::Material => &[
                "youngs_modulus",
                "poisson_ratio",
                "mass_density",
                "nonlocal_eta",
            ],
            Section::Geometry => &["radius", "central_angle", "thicknesses"],
            Section::Crack => &["interface", "depth_ratio"],
            Section::Sweep => &["param", "from", "to", "steps"],
            Section::Model | Section::Solver => &[],
        }
    }
}

/// Entries of one section instance, with their line numbers.
#[derive(Debug)]
struct Block {
    section: Section,
    /// `[crack#k]` or `[geometry]`, used in field paths.
    label: String,
    header_line: usize,
    entries: HashMap<String, (String, usize)>,
}

impl Block {
    fn path(&self, key: &str) -> String {
        format!("{}.{key}", self.label)
    }
}

/// Field path to line number, for mapping validation errors back to the file.
type LineMap = HashMap<String, usize>;

fn locate(errors: Vec<FieldError>, lines: &LineMap) -> ConfigError {
    let diagnostics = errors
        .into_iter()
        .map(|e| {
            // "[geometry].thicknesses[1]" was written on the "thicknesses" line
            let key = match e.path.rfind('[') {
                Some(i) if i > 0 && e.path.ends_with(']') => &e.path[..i],
                _ => e.path.as_str(),
            };
            let section = key.split('.').next().unwrap_or("");
            let line = lines.get(key).or_else(|| lines.get(section)).copied();
            Diagnostic {
                line,
                path: e.path,
                message: e.message,
            }
        })
        .collect();
    ConfigError { diagnostics }
}

fn split_blocks(text: &str) -> Result<Vec<Block>, ConfigError> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut errors = Vec::new();
    let mut cracks = 0;
    let mut seen: HashMap<Section, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let section = match name.trim() {
                "material" => Section::Material,
                "geometry" => Section::Geometry,
                "crack" => Section::Crack,
                "model" => Section::Model,
                "solver" => Section::Solver,
                "sweep" => Section::Sweep,
                other => {
                    errors.push(Diagnostic {
                        line: Some(line),
                        path: format!("[{other}]"),
                        message: "unknown section".into(),
                    });
                    continue;
                }
            };
            let label = if section == Section::Crack {
                cracks += 1;
                format!("[crack#{cracks}]")
            } else {
                if let Some(first) = seen.insert(section, line) {
                    errors.push(Diagnostic {
                        line: Some(line),
                        path: format!("[{}]", name.trim()),
                        message: format!("section repeated (first defined on line {first})"),
                    });
                }
                format!("[{}]", name.trim())
            };
            blocks.push(Block {
                section,
                label,
                header_line: line,
                entries: HashMap::new(),
            });
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            errors.push(Diagnostic {
                line: Some(line),
                path: String::new(),
                message: format!("expected 'key = value', got '{content}'"),
            });
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(block) = blocks.last_mut() else {
            errors.push(Diagnostic {
                line: Some(line),
                path: key.to_string(),
                message: "entry before any [section] header".into(),
            });
            continue;
        };
        if !block.section.keys().contains(&key) {
            errors.push(Diagnostic {
                line: Some(line),
                path: block.path(key),
                message: "unknown key".into(),
            });
            continue;
        }
        if let Some((_, first)) = block.entries.get(key) {
            errors.push(Diagnostic {
                line: Some(line),
                path: block.path(key),
                message: format!("key repeated (first set on line {first})"),
            });
            continue;
        }
        block
            .entries
            .insert(key.to_string(), (value.to_string(), line));
    }
    for section in [Section::Material, Section::Geometry] {
        if !seen.contains_key(&section) {
            let name = if section == Section::Material {
                "material"
            } else {
                "geometry"
            };
            errors.push(Diagnostic {
                line: None,
                path: format!("[{name}]"),
                message: "missing required section".into(),
            });
        }
    }
    for block in &blocks {
        for key in block.section.required() {
            if !block.entries.contains_key(*key) {
                errors.push(Diagnostic {
                    line: Some(block.header_line),
                    path: block.path(key),
                    message: "missing required key".into(),
                });
            }
        }
    }
    if errors.is_empty() {
        Ok(blocks)
    } else {
        Err(ConfigError {
            diagnostics: errors,
        })
    }
}

/// Typed access to a block, collecting conversion errors.
struct Reader<'a> {
    block: &'a Block,
    errors: &'a mut Vec<Diagnostic>,
}

impl Reader<'_> {
    fn get<T>(&mut self, key: &str, convert: impl FnOnce(&str) -> Result<T, String>) -> Option<T> {
        let (value, line) = self.block.entries.get(key)?;
        match convert(value) {
            Ok(v) => Some(v),
            Err(message) => {
                self.errors.push(Diagnostic {
                    line: Some(*line),
                    path: self.block.path(key),
                    message,
                });
                None
            }
        }
    }
}

fn parse_raw(text: &str) -> Result<(RunConfig, LineMap), ConfigError> {
    let blocks = split_blocks(text)?;
    let mut lines = LineMap::new();
    for b in &blocks {
        lines.insert(b.label.clone(), b.header_line);
        for (key, (_, line)) in &b.entries {
            lines.insert(b.path(key), *line);
        }
    }

    let mut errors = Vec::new();
    let mut config = RunConfig {
        geometry: ArchGeometry::uniform(0.0, DEFAULT_WIDTH, 0.0, 0.0),
        ..RunConfig::default()
    };
    let mut window = (None, None);
    for block in &blocks {
        let mut r = Reader {
            block,
            errors: &mut errors,
        };
        match block.section {
            Section::Material => {
                let m = &mut config.material;
                m.youngs_modulus = r.get("youngs_modulus", number).unwrap_or(f64::NAN);
                m.poisson_ratio = r.get("poisson_ratio", number).unwrap_or(f64::NAN);
                m.mass_density = r.get("mass_density", number).unwrap_or(f64::NAN);
                m.nonlocal_eta = r.get("nonlocal_eta", number).unwrap_or(f64::NAN);
            }
            Section::Geometry => {
                let radius = r.get("radius", number).unwrap_or(f64::NAN);
                let width = r.get("width", number).unwrap_or(DEFAULT_WIDTH);
                let angle = r.get("central_angle", number).unwrap_or(f64::NAN);
                let thicknesses = r.get("thicknesses", numbers).unwrap_or_default();
                let steps = r.get("step_angles", numbers).unwrap_or_default();
                if !thicknesses.is_empty() && steps.len() + 1 != thicknesses.len() {
                    let key = if block.entries.contains_key("step_angles") {
                        "step_angles"
                    } else {
                        "thicknesses"
                    };
                    errors.push(Diagnostic {
                        line: block.entries.get(key).map(|(_, l)| *l),
                        path: block.path(key),
                        message: format!(
                            "{} thicknesses need {} step angles, got {}",
                            thicknesses.len(),
                            thicknesses.len() - 1,
                            steps.len()
                        ),
                    });
                }
                config.geometry = ArchGeometry::stepped(radius, width, angle, &steps, &thicknesses);
            }
            Section::Crack => {
                let mut crack = CrackSpec::new(
                    r.get("interface", count).unwrap_or(usize::MAX),
                    r.get("depth_ratio", number).unwrap_or(f64::NAN),
                );
                if let Some(v) = r.get("shape_function", |s| {
                    choice(
                        s,
                        &[
                            ("rizos", ShapeFunction::RizosPolynomial),
                            ("tada", ShapeFunction::TadaTrigonometric),
                        ],
                    )
                }) {
                    crack.shape_function = v;
                }
                if let Some(v) = r.get("plane_state", |s| {
                    choice(
                        s,
                        &[
                            ("stress", PlaneState::Stress),
                            ("strain", PlaneState::Strain),
                        ],
                    )
                }) {
                    crack.plane_state = v;
                }
                if let Some(v) = r.get("reference_thickness", |s| {
                    choice(
                        s,
                        &[
                            ("thinner", ReferenceThickness::ThinnerSide),
                            ("left", ReferenceThickness::LeftSide),
                            ("right", ReferenceThickness::RightSide),
                        ],
                    )
                }) {
                    crack.reference_thickness = v;
                }
                // "inf" is allowed here and means a hinge
                crack.compliance_override = r.get("compliance", |s| {
                    s.parse::<f64>()
                        .ok()
                        .filter(|v| !v.is_nan())
                        .ok_or_else(|| format!("expected a number or inf, got '{s}'"))
                });
                config.cracks.push(crack);
            }
            Section::Model => {
                if let Some(f) = r.get("formulation", parse_formulation) {
                    config.options.formulation = f;
                }
                r.get("support", |s| match s {
                    "simply-supported" => Ok(()),
                    other => Err(format!(
                        "unsupported support type '{other}' (only simply-supported is available)"
                    )),
                });
                config.options.hinge_threshold = r
                    .get("hinge_threshold", number)
                    .unwrap_or(DEFAULT_HINGE_THRESHOLD);
            }
            Section::Solver => {
                let s = &mut config.solver;
                window = (r.get("omega_min", number), r.get("omega_max", number));
                if let Some(v) = r.get("scan_points", count) {
                    s.scan_points = v;
                }
                if let Some(v) = r.get("bisect_tol_rel", number) {
                    s.bisect_tol_rel = v;
                }
                if let Some(v) = r.get("max_modes", count) {
                    s.max_modes = v;
                }
                if let Some(v) = r.get("oracle_threshold", number) {
                    s.oracle_threshold = v;
                }
                if let Some(v) = r.get("oracle_nodes", count) {
                    s.oracle_nodes = v;
                }
                let (lo, hi) = (
                    block.entries.contains_key("omega_min"),
                    block.entries.contains_key("omega_max"),
                );
                if lo != hi {
                    let (present, missing) = if lo {
                        ("omega_min", "omega_max")
                    } else {
                        ("omega_max", "omega_min")
                    };
                    errors.push(Diagnostic {
                        line: block.entries.get(present).map(|(_, l)| *l),
                        path: block.path(missing),
                        message: format!("{present} and {missing} must be given together"),
                    });
                }
            }
            Section::Sweep => {
                let param = r.get("param", |s| s.parse::<SweepParam>());
                let from = r.get("from", number);
                let to = r.get("to", number);
                let steps = r.get("steps", count);
                if let (Some(param), Some(from), Some(to), Some(steps)) = (param, from, to, steps) {
                    config.sweep = Some(SweepSpec {
                        param,
                        from,
                        to,
                        steps,
                    });
                }
            }
        }
    }
    if let (Some(lo), Some(hi)) = window {
        config.solver.window = Some((lo, hi));
    }
    if errors.is_empty() {
        Ok((config, lines))
    } else {
        Err(ConfigError {
            diagnostics: errors,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const STEPPED: &str = "\
# stepped arch
[material]
youngs_modulus = 7e11
poisson_ratio = 0.3
mass_density = 2300
nonlocal_eta = 1e-18

[geometry]
radius = 30e-9
central_angle = 1.0
thicknesses = 10e-9, 20e-9
step_angles = 0.5

[crack]
interface = 0
depth_ratio = 0.3
shape_function = tada
";

    fn messages(text: &str) -> Vec<Diagnostic> {
        RunConfig::parse(text).unwrap_err().diagnostics
    }

    #[test]
    fn parses_stepped_config() {
        let c = RunConfig::parse(STEPPED).unwrap();
        assert_eq!(c.geometry.segments.len(), 2);
        assert_eq!(c.geometry.segments[0].end_angle, 0.5);
        assert_eq!(c.geometry.width, DEFAULT_WIDTH);
        assert_eq!(c.cracks.len(), 1);
        assert_eq!(c.cracks[0].shape_function, ShapeFunction::TadaTrigonometric);
        assert_eq!(c.options.formulation, Formulation::Reduced);
        assert!(c.solver.window.is_none());
        assert!(c.validated().is_ok());
    }

    #[test]
    fn negative_radius_names_field_and_line() {
        let text = STEPPED.replace("radius = 30e-9", "radius = -1");
        let d = messages(&text);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].path, "[geometry].radius");
        assert_eq!(d[0].line, Some(9));
    }

    #[test]
    fn unknown_key_rejected() {
        let text = STEPPED.replace("mass_density", "density");
        let d = messages(&text);
        assert!(d
            .iter()
            .any(|d| d.path == "[material].density" && d.line == Some(5)));
        assert!(d.iter().any(|d| d.path == "[material].mass_density"));
    }

    #[test]
    fn unsupported_support_type() {
        let text = format!("{STEPPED}\n[model]\nsupport = clamped\n");
        let d = messages(&text);
        assert!(
            d[0].message.contains("unsupported support type"),
            "{}",
            d[0]
        );
    }

    #[test]
    fn crack_errors_use_crack_index() {
        let text = format!("{STEPPED}\n[crack]\ninterface = 3\ndepth_ratio = 0.9\n");
        let d = messages(&text);
        let paths: Vec<&str> = d.iter().map(|d| d.path.as_str()).collect();
        assert_eq!(paths, ["[crack#2].interface", "[crack#2].depth_ratio"]);
        assert_eq!(d[0].line, Some(20));
        assert_eq!(d[1].line, Some(21));
    }

    #[test]
    fn thickness_count_mismatch() {
        let text = STEPPED.replace("step_angles = 0.5", "step_angles = 0.3, 0.6");
        let d = messages(&text);
        assert_eq!(d[0].path, "[geometry].step_angles");
    }

    #[test]
    fn list_element_error_points_at_list_line() {
        let text = STEPPED.replace("10e-9, 20e-9", "10e-9, 0");
        let d = messages(&text);
        assert_eq!(d[0].path, "[geometry].thicknesses[1]");
        assert_eq!(d[0].line, Some(11));
    }

    #[test]
    fn window_needs_both_bounds() {
        let text = format!("{STEPPED}\n[solver]\nomega_min = 1e9\n");
        let d = messages(&text);
        assert_eq!(d[0].path, "[solver].omega_max");
    }

    #[test]
    fn hinge_compliance_accepts_inf() {
        let text = STEPPED.replace("shape_function = tada", "compliance = inf");
        let c = RunConfig::parse(&text).unwrap();
        assert_eq!(c.cracks[0].compliance_override, Some(f64::INFINITY));
        assert_eq!(c.model().unwrap().joint(0), crate::Joint::Hinge);
    }

    #[test]
    fn display_round_trips() {
        let mut c = RunConfig::parse(STEPPED).unwrap();
        c.solver.window = Some((1e9, 3.3e14));
        c.options.formulation = Formulation::Consistent;
        c.sweep = Some(SweepSpec {
            param: SweepParam::S,
            from: 0.0,
            to: 0.7,
            steps: 8,
        });
        c.cracks.push(CrackSpec {
            compliance_override: Some(f64::INFINITY),
            ..CrackSpec::new(0, 0.1)
        });
        c.cracks.remove(0);
        let text = c.to_string();
        assert_eq!(RunConfig::parse(&text).unwrap(), c);
    }

    #[test]
    fn sweep_values_hit_both_ends() {
        let s = SweepSpec {
            param: SweepParam::H0,
            from: 0.1,
            to: 0.7,
            steps: 8,
        };
        let v = s.values();
        assert_eq!(v.len(), 8);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[7], 0.7);
        assert!(SweepSpec { steps: 0, ..s }.check().is_err());
        assert!(SweepSpec { to: 0.1, ..s }.check().is_err());
        assert!(SweepSpec {
            to: 0.1,
            steps: 1,
            ..s
        }
        .check()
        .is_ok());
    }

    #[test]
    fn s_sweep_adds_crack() {
        let mut c = RunConfig::parse(STEPPED).unwrap();
        c.cracks.clear();
        let swept = c.with_param(SweepParam::S, 0.4).unwrap();
        assert_eq!(swept.cracks, vec![CrackSpec::new(0, 0.4)]);
        let uniform = RunConfig {
            geometry: ArchGeometry::uniform(30e-9, 1e-9, 1.0, 1e-8),
            ..c
        };
        assert!(uniform.with_param(SweepParam::Alpha, 0.3).is_err());
    }
}
