//! Run configuration from command-line flags and `key = value` files.

use std::path::PathBuf;

use clap::Parser;

use crate::adaptivity::{AdaptParams, LoopOptions, Strategy};
use crate::linsolve::{SolveOptions, SolverKind};
use crate::problems::{by_name, key_values, parse_problem_file, Problem};
use crate::quadrature::TriangleRule;
use crate::solver::DiscreteOptions;
use crate::{Error, Result};

/// Artifacts written by a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Emit {
    pub csv: bool,
    pub svg: bool,
    pub vtk: bool,
    pub indicators: bool,
    pub mesh: bool,
}

impl Default for Emit {
    fn default() -> Self {
        Self { csv: true, svg: false, vtk: false, indicators: false, mesh: false }
    }
}

impl Emit {
    /// Comma separated list, e.g. `csv,svg`. `none` turns everything off.
    pub fn parse(list: &str) -> Result<Self> {
        let mut emit = Self { csv: false, ..Self::default() };
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "csv" => emit.csv = true,
                "svg" => emit.svg = true,
                "vtk" => emit.vtk = true,
                "indicators" => emit.indicators = true,
                "mesh" => emit.mesh = true,
                "none" => emit = Self { csv: false, ..Self::default() },
                _ => {
                    return Err(Error::Config(format!(
                        "unknown emit target `{item}` (expected csv, svg, vtk, indicators or mesh)"
                    )))
                }
            }
        }
        Ok(emit)
    }

    pub fn any(&self) -> bool {
        self.csv || self.svg || self.vtk || self.indicators || self.mesh
    }

    fn list(&self) -> String {
        let names: Vec<&str> = [
            (self.csv, "csv"),
            (self.svg, "svg"),
            (self.vtk, "vtk"),
            (self.indicators, "indicators"),
            (self.mesh, "mesh"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect();
        if names.is_empty() {
            "none".to_string()
        } else {
            names.join(",")
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Benchmark name or path of a problem file.
    pub problem: String,
    pub params: AdaptParams,
    pub out: PathBuf,
    pub emit: Emit,
    pub quad_degree: Option<usize>,
    pub solver_tol: f64,
    pub solver: SolverKind,
    pub timing: bool,
}

/// Adaptive mixed finite elements for `-div(A∇u + ub) + γu = f`.
#[derive(Parser, Debug, Default)]
#[command(name = "amfem", version, allow_negative_numbers = true)]
pub struct Cli {
    /// example1, example2, example3 or a problem file
    #[arg(long)]
    pub problem: Option<String>,
    /// key = value file applied before the other flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub theta_a: Option<String>,
    #[arg(long)]
    pub theta_b: Option<String>,
    #[arg(long)]
    pub kappa: Option<String>,
    /// separate, collective or uniform
    #[arg(long)]
    pub strategy: Option<String>,
    #[arg(long)]
    pub max_ndof: Option<String>,
    #[arg(long)]
    pub max_levels: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<String>,
    /// Comma separated: csv, svg, vtk, indicators, mesh
    #[arg(long)]
    pub emit: Option<String>,
    #[arg(long)]
    pub quad_degree: Option<String>,
    #[arg(long)]
    pub solver_tol: Option<String>,
    /// direct or bicgstab
    #[arg(long)]
    pub solver: Option<String>,
    /// Record wall time per level in the table
    #[arg(long)]
    pub timing: bool,
}

impl Cli {
    fn settings(&self) -> Vec<(&'static str, String)> {
        let flags = [
            ("problem", &self.problem),
            ("theta-a", &self.theta_a),
            ("theta-b", &self.theta_b),
            ("kappa", &self.kappa),
            ("strategy", &self.strategy),
            ("max-ndof", &self.max_ndof),
            ("max-levels", &self.max_levels),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("out", &self.out),
            ("emit", &self.emit),
            ("quad-degree", &self.quad_degree),
            ("solver-tol", &self.solver_tol),
            ("solver", &self.solver),
        ];
        let mut out: Vec<(&'static str, String)> =
            flags.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, v))).collect();
        if self.timing {
            out.push(("timing", "true".into()));
        }
        out
    }
}

fn number(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: expected a number, got `{value}`")))
}

fn count(key: &str, value: &str) -> Result<usize> {
    let v = number(key, value)?;
    if v < 0.0 || v.fract() != 0.0 || v > 1e15 {
        return Err(Error::Config(format!("{key} = {value} out of range: must be a whole number >= 0")));
    }
    Ok(v as usize)
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got `{value}`"))),
    }
}

impl RunConfig {
    /// Defaults for `problem`, with its own marking parameters.
    pub fn for_problem(problem: &str) -> Result<Self> {
        let p = load_problem(problem)?;
        Ok(Self {
            problem: problem.to_string(),
            params: AdaptParams::for_problem(p.as_ref()),
            out: PathBuf::from("out"),
            emit: Emit::default(),
            quad_degree: None,
            solver_tol: SolveOptions::default().tol,
            solver: SolverKind::Direct,
            timing: false,
        })
    }

    /// Sets one `key=value` setting. Keys use dashes.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "problem" => {}
            "theta-a" => self.params.theta_a = number(key, value)?,
            "theta-b" => self.params.theta_b = number(key, value)?,
            "kappa" => self.params.kappa = number(key, value)?,
            "strategy" => self.params.strategy = value.parse::<Strategy>()?,
            "max-ndof" => self.params.max_ndof = count(key, value)?,
            "max-levels" => self.params.max_levels = count(key, value)?,
            "alpha" => self.params.alpha = number(key, value)?,
            "beta" => self.params.beta = number(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "emit" => self.emit = Emit::parse(value)?,
            "quad-degree" => self.quad_degree = Some(count(key, value)?),
            "solver-tol" => self.solver_tol = number(key, value)?,
            "solver" => self.solver = value.parse()?,
            "timing" => self.timing = boolean(key, value)?,
            _ => return Err(Error::Config(format!("unknown setting `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if let Some(d) = self.quad_degree {
            TriangleRule::new(d)?;
        }
        if !(self.solver_tol > 0.0 && self.solver_tol < 1.0) {
            return Err(Error::Config(format!(
                "solver-tol = {} out of range: must lie in (0, 1)",
                self.solver_tol
            )));
        }
        Ok(())
    }

    /// The configuration as `key=value` pairs on one line, readable back by
    /// [`parse_config_file`].
    pub fn describe(&self) -> String {
        let p = &self.params;
        let mut s = format!(
            "problem={} theta-a={} theta-b={} kappa={} strategy={} max-ndof={} max-levels={} alpha={} beta={} out={} emit={}",
            self.problem,
            p.theta_a,
            p.theta_b,
            p.kappa,
            p.strategy.as_str(),
            p.max_ndof,
            p.max_levels,
            p.alpha,
            p.beta,
            self.out.display(),
            self.emit.list(),
        );
        if let Some(d) = self.quad_degree {
            s += &format!(" quad-degree={d}");
        }
        s += &format!(
            " solver-tol={} solver={} timing={}",
            self.solver_tol,
            match self.solver {
                SolverKind::Direct => "direct",
                SolverKind::BiCgStab => "bicgstab",
            },
            self.timing
        );
        s
    }

    pub fn problem(&self) -> Result<Box<dyn Problem>> {
        load_problem(&self.problem)
    }

    pub fn loop_options(&self) -> LoopOptions {
        let base = LoopOptions::default();
        let degree = |d: usize| self.quad_degree.unwrap_or(d);
        LoopOptions {
            discrete: DiscreteOptions {
                load_degree: degree(base.discrete.load_degree),
                solve: SolveOptions { kind: self.solver, tol: self.solver_tol, ..SolveOptions::default() },
            },
            osc_degree: degree(base.osc_degree),
            error_degree: degree(base.error_degree),
            timing: self.timing,
            ..base
        }
    }
}

fn load_problem(name: &str) -> Result<Box<dyn Problem>> {
    match by_name(name) {
        Ok(p) => Ok(p),
        Err(unknown) => {
            let path = std::path::Path::new(name);
            if !path.is_file() {
                return Err(unknown);
            }
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            Ok(Box::new(parse_problem_file(&text)?))
        }
    }
}

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

/// Settings of a `key = value` file, one per line, or several separated by
/// spaces. Keys are the flag names without dashes, e.g. `theta-a = 0.3`.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let body = line.split('#').next().unwrap_or("");
        // several `k=v` on one line, as written by `describe`
        if body.matches('=').count() > 1 {
            for item in body.split_whitespace() {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Config(format!("expected `key=value`, got `{item}`")))?;
                out.push((normalize(k), v.to_string()));
            }
        } else {
            for (_, k, v) in key_values(body)? {
                out.push((normalize(k), v.to_string()));
            }
        }
    }
    Ok(out)
}

/// Builds a [`RunConfig`] from parsed flags: problem defaults, then the
/// `--config` file, then the remaining flags.
pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut settings = Vec::new();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        settings.extend(parse_config_file(&text)?);
    }
    settings.extend(cli.settings().into_iter().map(|(k, v)| (k.to_string(), v)));
    let problem = settings
        .iter()
        .rev()
        .find(|(k, _)| k == "problem")
        .map_or("example1", |(_, v)| v.as_str());
    let mut config = RunConfig::for_problem(problem)?;
    for (k, v) in &settings {
        config.apply(k, v)?;
    }
    config.validate()?;
    Ok(config)
}

/// Parses `argv` (program name first).
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Config(e.to_string()))?;
    resolve(&cli)
}
