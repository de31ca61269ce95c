//! Flat `key = value` study configuration.
//!
//! ```text
//! # spatial study on the table1 ladder
//! mode      = spatial          # spatial | temporal
//! alpha     = 0.1, 0.5, 0.9
//! nx        = 1/6, 1/12, 1/24  # interval counts or step sizes
//! nt        = 10000            # a single value is broadcast over the ladder
//! problem   = hallaire         # hallaire | hallaire-integral
//! backend   = woodbury         # woodbury | dense
//! out       = table1.csv
//! format    = csv              # csv | markdown
//! reference = table1           # table1 | table2, enables self-check
//! deep      = false
//! ```
//!
//! Blank lines and `#` comments are ignored. Later keys override earlier ones.

use std::path::PathBuf;

use super::report::{parse_step, ReportFormat};
use super::{ReferenceTable, Refinement, Rung, StudyConfig, Tolerances};
use crate::error::{invalid, Error, Result};
use crate::problems::BundledProblem;
use crate::stepper::{Backend, SolverOptions};

/// A ladder entry as written: an interval count (`24`) or a step size (`1/24`, `0.125`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSize {
    Count(usize),
    Step(f64),
}

impl GridSize {
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(n) = s.parse::<usize>() {
            return Ok(GridSize::Count(n));
        }
        match parse_step(s) {
            Some(v) if v > 0.0 && v.is_finite() => Ok(GridSize::Step(v)),
            _ => Err(invalid(
                "grid",
                format!("`{s}` is neither a count nor a step"),
            )),
        }
    }

    /// Interval count over `extent`.
    pub fn count(self, extent: f64) -> Result<usize> {
        match self {
            GridSize::Count(n) => Ok(n),
            GridSize::Step(step) => {
                let n = extent / step;
                if (n - n.round()).abs() > 1e-9 * n.max(1.0) || n.round() < 1.0 {
                    return Err(invalid(
                        "grid",
                        format!("step {step} does not divide the extent {extent}"),
                    ));
                }
                Ok(n.round() as usize)
            }
        }
    }
}

/// Everything a study run can be configured with. Unset fields fall back to
/// the reference preset (if any) or to defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StudySettings {
    pub mode: Option<Refinement>,
    pub alphas: Option<Vec<f64>>,
    pub nx: Option<Vec<GridSize>>,
    pub nt: Option<Vec<GridSize>>,
    pub problem: Option<BundledProblem>,
    pub backend: Option<Backend>,
    pub out: Option<PathBuf>,
    pub format: Option<ReportFormat>,
    pub reference: Option<String>,
    pub deep: Option<bool>,
}

fn list<T>(value: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let items: Vec<T> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse)
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(invalid("list", "no values given"));
    }
    Ok(items)
}

impl StudySettings {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "mode" => self.mode = Some(value.parse()?),
            "alpha" => {
                self.alphas = Some(list(value, |s| {
                    s.parse::<f64>()
                        .map_err(|_| invalid("alpha", format!("bad number `{s}`")))
                })?)
            }
            "nx" => self.nx = Some(list(value, GridSize::parse)?),
            "nt" => self.nt = Some(list(value, GridSize::parse)?),
            "problem" => self.problem = Some(value.parse()?),
            "backend" => self.backend = Some(value.parse()?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(value.parse()?),
            "reference" => {
                ReferenceTable::by_name(value)?;
                self.reference = Some(value.to_string());
            }
            "deep" => {
                self.deep = Some(value.parse().map_err(|_| {
                    invalid("deep", format!("expected true or false, got `{value}`"))
                })?)
            }
            other => return Err(invalid("key", format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overridden_by(self, over: StudySettings) -> StudySettings {
        StudySettings {
            mode: over.mode.or(self.mode),
            alphas: over.alphas.or(self.alphas),
            nx: over.nx.or(self.nx),
            nt: over.nt.or(self.nt),
            problem: over.problem.or(self.problem),
            backend: over.backend.or(self.backend),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
            reference: over.reference.or(self.reference),
            deep: over.deep.or(self.deep),
        }
    }

    pub fn reference_table(&self) -> Option<Result<ReferenceTable>> {
        self.reference.as_deref().map(ReferenceTable::by_name)
    }

    /// Builds the study. With a reference the matching preset supplies any
    /// missing field; without one `mode`, `nx` and `nt` are required.
    pub fn to_study(&self) -> Result<StudyConfig> {
        let preset = match self.reference_table() {
            Some(table) => Some(table?.study_config(self.deep.unwrap_or(false))?),
            None => None,
        };
        let mode = match (self.mode, &preset) {
            (Some(m), _) => m,
            (None, Some(p)) => p.mode,
            (None, None) => return Err(invalid("mode", "required without a reference table")),
        };
        let problem = self
            .problem
            .or(preset.as_ref().map(|p| p.problem))
            .unwrap_or(BundledProblem::Hallaire);
        let spec = problem.build(0.5)?;
        let alphas = match (&self.alphas, &preset) {
            (Some(a), _) => a.clone(),
            (None, Some(p)) => p.alphas.clone(),
            (None, None) => return Err(invalid("alpha", "required without a reference table")),
        };
        let preset_n: Option<Vec<usize>> = preset
            .as_ref()
            .map(|p| p.ladder.iter().map(|r| r.n).collect());
        let preset_m: Option<Vec<usize>> = preset
            .as_ref()
            .map(|p| p.ladder.iter().map(|r| r.m).collect());
        let resolve = |given: &Option<Vec<GridSize>>,
                       fallback: Option<Vec<usize>>,
                       extent: f64,
                       key: &'static str|
         -> Result<Vec<usize>> {
            match (given, fallback) {
                (Some(list), _) => list.iter().map(|g| g.count(extent)).collect(),
                (None, Some(f)) => Ok(f),
                (None, None) => Err(invalid(key, "required without a reference table")),
            }
        };
        let ns = resolve(&self.nx, preset_n, spec.length, "nx")?;
        let ms = resolve(&self.nt, preset_m, spec.final_time, "nt")?;
        let len = ns.len().max(ms.len());
        let broadcast = |v: &[usize], key: &'static str| -> Result<Vec<usize>> {
            match v.len() {
                1 => Ok(vec![v[0]; len]),
                l if l == len => Ok(v.to_vec()),
                l => Err(invalid(
                    key,
                    format!("{l} values cannot be matched to a ladder of {len}"),
                )),
            }
        };
        let ladder = broadcast(&ns, "nx")?
            .into_iter()
            .zip(broadcast(&ms, "nt")?)
            .map(|(n, m)| Rung { n, m })
            .collect();
        let config = StudyConfig {
            mode,
            alphas,
            ladder,
            problem,
            options: SolverOptions::with_backend(self.backend.unwrap_or_default()),
            tolerances: preset
                .map(|p| p.tolerances)
                .unwrap_or_else(Tolerances::default),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Parses the configuration text. Errors carry the 1-based line number.
pub fn parse_config(text: &str) -> Result<StudySettings> {
    let mut settings = StudySettings::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fail = |message: String| Error::Config {
            line: idx + 1,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| fail(format!("expected `key = value`, got `{line}`")))?;
        settings.set(key, value).map_err(|e| fail(e.to_string()))?;
    }
    Ok(settings)
}
