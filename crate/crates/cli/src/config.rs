//! Experiment configuration files.
//!
//! One `key = value` assignment per line, `#` starts a comment, complex
//! numbers are written `re+imi` (`-1+0.001i`, `0.5i`, `2`). Every key is
//! optional; the defaults describe the reference experiment at one million
//! particles.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use scatter_core::fftconv::Precision;
use scatter_core::kernel::Padding;
use scatter_core::material::{h_from_target_n, ImpedancePolicy, MaterialSpec, SPHERE_SHAPE_CONSTANT};
use scatter_core::{
    build_lattice, Complex64, Formulation, LatticeSize, Point, ReportGrid, ScatteringConfig,
    SolveOptions, SolverChoice, UniformLattice,
};
use sha2::{Digest, Sha256};

/// Relative tolerance between an explicit `wave_number` and `2πf/v`.
pub const WAVE_NUMBER_TOLERANCE: f64 = 5e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("config key `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(key: &str, message: impl Into<String>) -> Self {
        ConfigError {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Wave speed in cm/s.
    pub speed: f64,
    /// Frequency in Hz.
    pub frequency: f64,
    pub wave_number: f64,
    pub direction: Point,
    pub kappa: f64,
    pub shape_constant: f64,
    pub domain_side: f64,
    pub density: f64,
    pub n0: Complex64,
    pub n_target: Complex64,
    /// Explicit `h`; when absent it is designed from `n_target`.
    pub impedance: Option<Complex64>,
    pub lattice: LatticeSize,
    pub p_side: usize,
    pub c_side: usize,
    pub formulations: Vec<Formulation>,
    pub solve: SolveOptions,
    pub solver: SolverChoice,
    pub precision: Precision,
    pub padding: Padding,
    pub impedance_policy: ImpedancePolicy,
    pub report: ReportGrid,
    pub output: PathBuf,
    /// Write every node value, not only the report grid and slice.
    pub write_solutions: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let (speed, frequency) = (34400.0, 1000.0);
        ExperimentConfig {
            speed,
            frequency,
            wave_number: 2.0 * PI * frequency / speed,
            direction: [1.0, 0.0, 0.0],
            kappa: 0.5,
            shape_constant: SPHERE_SHAPE_CONSTANT,
            domain_side: 1.0,
            density: 1.0,
            n0: Complex64::new(1.0, 0.0),
            n_target: Complex64::new(-1.0, 0.001),
            impedance: None,
            lattice: LatticeSize::PerSide(100),
            p_side: 20,
            c_side: 40,
            formulations: Formulation::ALL.to_vec(),
            solve: SolveOptions::default(),
            solver: SolverChoice::Auto,
            precision: Precision::Double,
            padding: Padding::Exact,
            impedance_policy: ImpedancePolicy::default(),
            report: ReportGrid::default(),
            output: PathBuf::from("output"),
            write_solutions: true,
        }
    }
}

/// Parses `re+imi` style complex numbers.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => t.parse().ok(),
    };
    match split {
        Some(i) => Some(Complex64::new(body[..i].parse().ok()?, imag(&body[i..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

/// `a+bi` with Rust's shortest round-trip formatting.
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key).map(|(_, v)| v)
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Result<Option<T>> {
        self.take(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| ConfigError::new(key, format!("expected {what}, got {v:?}")))
            })
            .transpose()
    }

    fn float(&mut self, key: &str) -> Result<Option<f64>> {
        self.parsed(key, "a number")
    }

    fn count(&mut self, key: &str) -> Result<Option<usize>> {
        self.parsed(key, "a non-negative integer")
    }

    fn flag(&mut self, key: &str) -> Result<Option<bool>> {
        self.parsed(key, "true or false")
    }

    fn complex(&mut self, key: &str) -> Result<Option<Complex64>> {
        self.take(key)
            .map(|v| {
                parse_complex(&v)
                    .ok_or_else(|| ConfigError::new(key, format!("expected a complex number like -1+0.001i, got {v:?}")))
            })
            .transpose()
    }
}

fn positive(key: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ConfigError::new(key, format!("must be positive, got {value}")))
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::new(line, format!("line {}: expected key = value", n + 1)));
            };
            let key = key.trim().to_ascii_lowercase();
            if map.insert(key.clone(), (n + 1, value.trim().to_string())).is_some() {
                return Err(ConfigError::new(&key, format!("line {}: assigned twice", n + 1)));
            }
        }
        let mut e = Entries { map };
        let mut cfg = ExperimentConfig::default();

        if let Some(v) = e.float("speed")? {
            cfg.speed = positive("speed", v)?;
        }
        if let Some(v) = e.float("frequency")? {
            cfg.frequency = positive("frequency", v)?;
        }
        cfg.wave_number = 2.0 * PI * cfg.frequency / cfg.speed;
        if let Some(k) = e.float("wave_number")? {
            positive("wave_number", k)?;
            let rel = (k - cfg.wave_number).abs() / cfg.wave_number;
            if rel > WAVE_NUMBER_TOLERANCE {
                return Err(ConfigError::new(
                    "wave_number",
                    format!(
                        "{k} disagrees with 2*pi*frequency/speed = {} (relative difference {rel:.2e})",
                        cfg.wave_number
                    ),
                ));
            }
        }
        if let Some(v) = e.take("direction") {
            let parts: Vec<f64> = v
                .split([',', ' '])
                .filter(|s| !s.is_empty())
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| ConfigError::new("direction", format!("expected three numbers, got {v:?}")))?;
            let [x, y, z] = parts[..] else {
                return Err(ConfigError::new("direction", format!("expected three numbers, got {v:?}")));
            };
            let norm = (x * x + y * y + z * z).sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(ConfigError::new("direction", format!("must be a unit vector, |alpha| = {norm}")));
            }
            cfg.direction = [x, y, z];
        }
        if let Some(v) = e.float("kappa")? {
            if !(0.0..1.0).contains(&v) {
                return Err(ConfigError::new("kappa", format!("must lie in [0, 1), got {v}")));
            }
            cfg.kappa = v;
        }
        if let Some(v) = e.float("shape_constant")? {
            cfg.shape_constant = positive("shape_constant", v)?;
        }
        if let Some(v) = e.float("domain_side")? {
            cfg.domain_side = positive("domain_side", v)?;
        }
        if let Some(v) = e.float("density")? {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ConfigError::new("density", format!("must be non-negative, got {v}")));
            }
            cfg.density = v;
        }
        if let Some(v) = e.complex("n0")? {
            cfg.n0 = v;
        }
        if let Some(v) = e.complex("n_target")? {
            cfg.n_target = v;
        }
        cfg.impedance = e.complex("impedance")?;

        match (e.parsed::<u64>("particles", "a particle count")?, e.count("per_side")?) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::new("particles", "give either particles or per_side, not both"))
            }
            (Some(m), None) => {
                let size = LatticeSize::Particles(m);
                size.per_side().map_err(|err| ConfigError::new("particles", err.to_string()))?;
                cfg.lattice = size;
            }
            (None, Some(b)) => cfg.lattice = LatticeSize::PerSide(b),
            (None, None) => {}
        }
        if let Some(v) = e.count("p_side")? {
            cfg.p_side = v;
        }
        if let Some(v) = e.count("c_side")? {
            cfg.c_side = v;
        }
        if let Some(v) = e.take("formulations") {
            let list: Vec<Formulation> = v
                .split([',', ' '])
                .filter(|s| !s.trim().is_empty())
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|err: scatter_core::Error| ConfigError::new("formulations", err.to_string()))?;
            if list.is_empty() {
                return Err(ConfigError::new("formulations", "at least one of ORI, RED, IE is required"));
            }
            let mut unique = list.clone();
            unique.sort();
            unique.dedup();
            if unique.len() != list.len() {
                return Err(ConfigError::new("formulations", "listed a formulation twice"));
            }
            cfg.formulations = list;
        }
        if let Some(v) = e.float("tol")? {
            cfg.solve.tol = positive("tol", v)?;
        }
        if let Some(v) = e.count("max_iter")? {
            cfg.solve.max_iter = v;
        }
        if let Some(v) = e.count("restart")? {
            cfg.solve.restart = v;
        }
        cfg.solve
            .validate()
            .map_err(|err| ConfigError::new("max_iter", err.to_string()))?;
        if let Some(v) = e.take("solver") {
            cfg.solver = v.parse().map_err(|err: scatter_core::Error| ConfigError::new("solver", err.to_string()))?;
        }
        if let Some(v) = e.take("precision") {
            cfg.precision = match v.to_ascii_lowercase().as_str() {
                "single" => Precision::Single,
                "double" => Precision::Double,
                _ => return Err(ConfigError::new("precision", format!("expected single or double, got {v:?}"))),
            };
        }
        if let Some(v) = e.take("padding") {
            cfg.padding = match v.to_ascii_lowercase().as_str() {
                "exact" => Padding::Exact,
                "fft_friendly" | "friendly" => Padding::FftFriendly,
                _ => return Err(ConfigError::new("padding", format!("expected exact or fft_friendly, got {v:?}"))),
            };
        }
        if let Some(v) = e.float("positive_im_h_threshold")? {
            cfg.impedance_policy.positive_im_threshold = v;
        }
        if let Some(v) = e.flag("allow_positive_im_h")? {
            cfg.impedance_policy.force = v;
        }
        if let Some(v) = e.count("report_points")? {
            if v == 0 {
                return Err(ConfigError::new("report_points", "must be positive"));
            }
            cfg.report.points_per_side = v;
        }
        if let Some(v) = e.float("report_step")? {
            cfg.report.step = positive("report_step", v)?;
        }
        if let Some(v) = e.take("output") {
            cfg.output = PathBuf::from(v);
        }
        if let Some(v) = e.flag("write_solutions")? {
            cfg.write_solutions = v;
        }

        if let Some((key, (line, _))) = e.map.into_iter().next() {
            return Err(ConfigError::new(&key, format!("line {line}: unknown key")));
        }
        cfg.build_lattice()?;
        Ok(cfg)
    }

    /// Checks the material, including the designed impedance, for a solve.
    pub fn validate(&self) -> Result<()> {
        self.material().map(|_| ())
    }

    /// Material parameters with `h = 0`, not validated.
    pub fn base_material(&self) -> MaterialSpec {
        MaterialSpec {
            wave_number: self.wave_number,
            shape_constant: self.shape_constant,
            kappa: self.kappa,
            density: self.density,
            impedance: Complex64::new(0.0, 0.0),
            background: self.n0,
            direction: self.direction,
        }
    }

    /// Material parameters, designing `h` from `n_target` unless given.
    pub fn material(&self) -> Result<MaterialSpec> {
        let mut spec = self.base_material();
        spec.impedance = match self.impedance {
            Some(h) => h,
            None => h_from_target_n(self.n_target, &spec).map_err(|err| {
                let key = if matches!(err, scatter_core::Error::ZeroDensity) { "density" } else { "n_target" };
                ConfigError::new(key, err.to_string())
            })?,
        };
        spec.validate(self.impedance_policy).map_err(|err| {
            let key = match err {
                scatter_core::Error::PositiveImpedance { .. } => {
                    if self.impedance.is_some() {
                        "impedance"
                    } else {
                        "n_target"
                    }
                }
                scatter_core::Error::LossyBackground(_) => "n0",
                _ => "material",
            };
            ConfigError::new(key, err.to_string())
        })?;
        Ok(spec)
    }

    pub fn build_lattice(&self) -> Result<UniformLattice> {
        let key = match self.lattice {
            LatticeSize::Particles(_) => "particles",
            LatticeSize::PerSide(_) => "per_side",
        };
        build_lattice(self.lattice, self.kappa, self.domain_side).map_err(|err| ConfigError::new(key, err.to_string()))
    }

    /// Solver configuration for one formulation with an already validated
    /// material.
    pub fn scattering(&self, spec: MaterialSpec, formulation: Formulation) -> Result<ScatteringConfig> {
        let mut cfg = ScatteringConfig::new(self.build_lattice()?, spec, formulation);
        cfg.p_side = self.p_side;
        cfg.c_side = self.c_side;
        cfg.solve = self.solve;
        cfg.solver = self.solver;
        cfg.precision = self.precision;
        cfg.padding = self.padding;
        cfg.impedance_policy = self.impedance_policy;
        Ok(cfg)
    }

    /// Resolved configuration, one `key = value` per line in a fixed order.
    pub fn canonical(&self) -> String {
        let lattice = match self.lattice {
            LatticeSize::Particles(m) => format!("particles = {m}"),
            LatticeSize::PerSide(b) => format!("per_side = {b}"),
        };
        let formulations: Vec<&str> = self.formulations.iter().map(|f| f.tag()).collect();
        let [ax, ay, az] = self.direction;
        let lines = [
            format!("speed = {}", self.speed),
            format!("frequency = {}", self.frequency),
            format!("wave_number = {}", self.wave_number),
            format!("direction = {ax},{ay},{az}"),
            format!("kappa = {}", self.kappa),
            format!("shape_constant = {}", self.shape_constant),
            format!("domain_side = {}", self.domain_side),
            format!("density = {}", self.density),
            format!("n0 = {}", format_complex(self.n0)),
            format!("n_target = {}", format_complex(self.n_target)),
            format!("impedance = {}", self.impedance.map_or("design".into(), format_complex)),
            lattice,
            format!("p_side = {}", self.p_side),
            format!("c_side = {}", self.c_side),
            format!("formulations = {}", formulations.join(",")),
            format!("tol = {}", self.solve.tol),
            format!("max_iter = {}", self.solve.max_iter),
            format!("restart = {}", self.solve.restart),
            format!("solver = {:?}", self.solver).to_ascii_lowercase(),
            format!("precision = {:?}", self.precision).to_ascii_lowercase(),
            format!("padding = {:?}", self.padding).to_ascii_lowercase(),
            format!("positive_im_h_threshold = {}", self.impedance_policy.positive_im_threshold),
            format!("allow_positive_im_h = {}", self.impedance_policy.force),
            format!("report_points = {}", self.report.points_per_side),
            format!("report_step = {}", self.report.step),
        ];
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }

    /// SHA-256 of [`canonical`](Self::canonical), hex encoded. The output
    /// directory does not enter the hash.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}
