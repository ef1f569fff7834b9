//! Scenario files: TOML with `space`, `fiber`, `graph`, `probes`, `outputs`
//! and an optional `comparison` section.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use warpgraph::radial::{Density, RadialSpace, Warping};

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub space: SpaceConfig,
    #[serde(default)]
    pub fiber: FiberConfig,
    pub graph: GraphConfig,
    #[serde(default)]
    pub probes: ProbeConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
    /// Ricci and gradient bounds for the space-form eigenvalue comparison.
    pub comparison: Option<ComparisonConfig>,
}

fn default_name() -> String {
    "scenario".into()
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    /// `euclidean`, `hyperbolic`, `sphere` or `custom-series`.
    pub tau: String,
    #[serde(default)]
    pub tau_coefficients: Vec<f64>,
    /// `zero`, `constant`, `quadratic`, `log-cosh` or `series`.
    #[serde(default = "zero")]
    pub psi: String,
    /// Value for `constant`, coefficient `a` of `a t^2` for `quadratic`.
    pub psi_parameter: Option<f64>,
    #[serde(default)]
    pub psi_coefficients: Vec<f64>,
    pub m: usize,
    pub t_max: f64,
}

fn zero() -> String {
    "zero".into()
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FiberConfig {
    pub dim: usize,
    /// `flat` or `round-sphere`.
    pub metric: String,
}

impl Default for FiberConfig {
    fn default() -> Self {
        Self {
            dim: 1,
            metric: "flat".into(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphConfig {
    CmcRadial {
        c: f64,
        #[serde(default)]
        d: f64,
    },
    /// `f(x) = A x + b` in chart coordinates, `A` given by rows.
    Affine {
        matrix: Vec<Vec<f64>>,
        #[serde(default)]
        offset: Vec<f64>,
    },
    Constant {
        #[serde(default)]
        value: Vec<f64>,
    },
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    #[serde(default = "default_grid")]
    pub grid_size: usize,
    #[serde(default = "default_profile_points")]
    pub profile_points: usize,
    pub fd_first: Option<f64>,
    pub fd_second: Option<f64>,
}

fn default_radii() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}

fn default_grid() -> usize {
    1024
}

fn default_profile_points() -> usize {
    2001
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            radii: default_radii(),
            grid_size: default_grid(),
            profile_points: default_profile_points(),
            fd_first: None,
            fd_second: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: Option<String>,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

fn default_formats() -> Vec<String> {
    vec!["json".into(), "csv".into()]
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: None,
            formats: default_formats(),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComparisonConfig {
    pub alpha: f64,
    pub delta: f64,
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| anyhow::anyhow!("config parse error: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn warping(&self) -> Result<Warping<f64>> {
        Ok(match self.space.tau.as_str() {
            "euclidean" => Warping::Euclidean,
            "hyperbolic" => Warping::Hyperbolic,
            "sphere" => Warping::Spherical,
            "custom-series" => Warping::Series(self.space.tau_coefficients.clone()),
            other => bail!("space.tau: unknown builtin `{other}` (see `warpgraph list-builtins`)"),
        })
    }

    pub fn density(&self) -> Result<Density<f64>> {
        let param = |what: &str| {
            self.space
                .psi_parameter
                .with_context(|| format!("space.psi_parameter is required for `{what}`"))
        };
        Ok(match self.space.psi.as_str() {
            "zero" => Density::Zero,
            "constant" => Density::Constant(param("constant")?),
            "quadratic" => Density::Quadratic(param("quadratic")?),
            "log-cosh" => Density::LogCosh,
            "series" => Density::Series(self.space.psi_coefficients.clone()),
            other => bail!("space.psi: unknown builtin `{other}` (see `warpgraph list-builtins`)"),
        })
    }

    pub fn radial_space(&self) -> Result<RadialSpace<f64>> {
        RadialSpace::new(self.space.m, self.warping()?, self.density()?, self.space.t_max)
            .context("space: invalid radial space")
    }

    /// Structural checks plus admissibility of `c`.
    pub fn validate(&self) -> Result<()> {
        let rs = self.radial_space()?;
        if !matches!(self.fiber.metric.as_str(), "flat" | "round-sphere") {
            bail!(
                "fiber.metric: unknown metric `{}` (flat | round-sphere)",
                self.fiber.metric
            );
        }
        if self.fiber.dim == 0 {
            bail!("fiber.dim must be positive");
        }
        if self.probes.radii.is_empty() {
            bail!("probes.radii must not be empty");
        }
        if let Some(r) = self.probes.radii.iter().find(|&&r| !(r > 0.0 && r <= self.space.t_max)) {
            bail!("probes.radii: {r} lies outside (0, t_max = {}]", self.space.t_max);
        }
        if self.probes.grid_size < warpgraph::spectral::MIN_GRID {
            bail!("probes.grid_size must be at least {}", warpgraph::spectral::MIN_GRID);
        }
        if self.probes.profile_points < 3 {
            bail!("probes.profile_points must be at least 3");
        }
        for f in &self.outputs.formats {
            if !matches!(f.as_str(), "json" | "csv") {
                bail!("outputs.formats: unknown format `{f}` (json | csv)");
            }
        }
        let (m, n) = (self.space.m, self.fiber.dim);
        match &self.graph {
            GraphConfig::CmcRadial { c, .. } => {
                if n != 1 || self.fiber.metric != "flat" {
                    bail!("graph.kind = cmc-radial needs a flat fiber of dimension 1");
                }
                if !(2..=3).contains(&m) {
                    bail!("graph.kind = cmc-radial supports m = 2 or 3, got {m}");
                }
                let c0 = rs.c_zero()?;
                if c.abs() >= c0.value {
                    bail!(
                        "graph.c = {c} is not admissible: |c| must be below C0 = {:.6}{}",
                        c0.value,
                        if c0.boundary {
                            " (infimum truncated at t_max)"
                        } else {
                            ""
                        }
                    );
                }
            }
            GraphConfig::Affine { matrix, offset } => {
                if matrix.len() != n || matrix.iter().any(|row| row.len() != m) {
                    bail!("graph.matrix must have {n} rows of length {m}");
                }
                if !offset.is_empty() && offset.len() != n {
                    bail!("graph.offset must have length {n}");
                }
            }
            GraphConfig::Constant { value } => {
                if !value.is_empty() && value.len() != n {
                    bail!("graph.value must have length {n}");
                }
            }
        }
        if let Some(cmp) = self.comparison {
            if !(cmp.alpha >= cmp.delta && cmp.delta >= 0.0) {
                bail!(
                    "comparison needs alpha >= delta >= 0, got alpha = {}, delta = {}",
                    cmp.alpha,
                    cmp.delta
                );
            }
        }
        Ok(())
    }
}
