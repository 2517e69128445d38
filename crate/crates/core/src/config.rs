//! Flat `key = value` configuration files.
//!
//! One assignment per line, `#` starts a comment, keys are the physical
//! parameter names plus the integrator/diagnostics settings below. The
//! ambient pressure is accepted either directly (`p0`) or as the pair
//! `p_stat`/`p_v` with `p0 = p_stat - p_v`. Parse errors name the offending
//! line.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::integrator::IntegratorConfig;
use crate::model::PhysicalParams;
use crate::poincare;

/// Spectrum accumulation lengths, in forcing periods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovConfig {
    pub transient_periods: usize,
    pub accumulate_periods: usize,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        LyapunovConfig {
            transient_periods: 20_000,
            accumulate_periods: 100_000,
        }
    }
}

/// Section-cloud diagnostics settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareConfig {
    pub cluster_eps: f64,
    pub period_eps: f64,
    pub keep_points: usize,
}

impl Default for PoincareConfig {
    fn default() -> Self {
        PoincareConfig {
            cluster_eps: poincare::DEFAULT_CLUSTER_EPS,
            period_eps: poincare::DEFAULT_PERIOD_EPS,
            keep_points: poincare::DEFAULT_KEEP_POINTS,
        }
    }
}

/// Per-pixel settings of the two-parameter chart. Accumulation is shorter
/// than for single-point spectra; override for publication-quality runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartConfig {
    pub seed_settle_periods: usize,
    pub transient_periods: usize,
    pub accumulate_periods: usize,
}

impl Default for ChartConfig {
    fn default() -> Self {
        ChartConfig {
            seed_settle_periods: 10_000,
            transient_periods: 2_000,
            accumulate_periods: 20_000,
        }
    }
}

/// Per-sample settings of one-parameter path scans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathConfig {
    pub settle_periods: usize,
    pub transient_periods: usize,
    pub accumulate_periods: usize,
}

impl Default for PathConfig {
    fn default() -> Self {
        PathConfig {
            settle_periods: 2_000,
            transient_periods: 500,
            accumulate_periods: 3_000,
        }
    }
}

/// Everything a run needs, with the reference constants as defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub physical: PhysicalParams,
    pub integrator: IntegratorConfig,
    pub lyapunov: LyapunovConfig,
    pub poincare: PoincareConfig,
    pub chart: ChartConfig,
    pub path: PathConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            physical: PhysicalParams::reference(),
            integrator: IntegratorConfig::default(),
            lyapunov: LyapunovConfig::default(),
            poincare: PoincareConfig::default(),
            chart: ChartConfig::default(),
            path: PathConfig::default(),
        }
    }
}

struct Entries<'a> {
    label: &'a str,
    map: BTreeMap<String, (usize, f64)>,
}

impl Entries<'_> {
    fn take(&mut self, key: &str) -> Option<f64> {
        self.map.remove(key).map(|(_, v)| v)
    }

    fn take_count(&mut self, key: &str) -> Result<Option<usize>> {
        match self.map.remove(key) {
            None => Ok(None),
            Some((line, v)) => {
                if v < 0.0 || v.fract() != 0.0 || v > u64::MAX as f64 {
                    Err(Error::Config {
                        path: self.label.to_string(),
                        line,
                        msg: format!("{key} must be a non-negative integer, got {v}"),
                    })
                } else {
                    Ok(Some(v as usize))
                }
            }
        }
    }

    fn line_of(&self, key: &str) -> usize {
        self.map.get(key).map(|(l, _)| *l).unwrap_or(0)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::ConfigIo {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses config text; `label` names the source in errors.
    pub fn parse(text: &str, label: &str) -> Result<Self> {
        let mut entries = Entries {
            label,
            map: BTreeMap::new(),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some(eq) = line.find('=') else {
                return Err(Error::Config {
                    path: label.to_string(),
                    line: line_no,
                    msg: format!("expected `key = value`, got {line:?}"),
                });
            };
            let key = line[..eq].trim();
            let value_text = line[eq + 1..].trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::Config {
                    path: label.to_string(),
                    line: line_no,
                    msg: format!("unknown key {key:?}"),
                });
            }
            let value: f64 = value_text.parse().map_err(|_| Error::Config {
                path: label.to_string(),
                line: line_no,
                msg: format!("cannot parse {value_text:?} as a number"),
            })?;
            if let Some((first_line, _)) = entries.map.get(key) {
                return Err(Error::Config {
                    path: label.to_string(),
                    line: line_no,
                    msg: format!("duplicate key {key:?} (first set on line {first_line})"),
                });
            }
            entries.map.insert(key.to_string(), (line_no, value));
        }

        let mut config = RunConfig::default();

        let p = &mut config.physical;
        if let Some(v) = entries.take("rho") {
            p.rho = v;
        }
        if let Some(v) = entries.take("sigma") {
            p.sigma = v;
        }
        if let Some(v) = entries.take("mu") {
            p.mu = v;
        }
        if let Some(v) = entries.take("c") {
            p.c = v;
        }
        if let Some(v) = entries.take("kappa") {
            p.kappa = v;
        }
        if let Some(v) = entries.take("chi") {
            p.chi = v;
        }
        if let Some(v) = entries.take("kappa_s") {
            p.kappa_s = v;
        }
        if let Some(v) = entries.take("r0") {
            p.r0 = v;
        }
        if let Some(v) = entries.take("a") {
            p.a = v;
        }
        if let Some(v) = entries.take("omega") {
            p.omega = v;
        }
        if let Some(v) = entries.take("d") {
            p.d = v;
        }

        let p0_line = entries.line_of("p0");
        let pair_line = entries.line_of("p_stat").max(entries.line_of("p_v"));
        let p0_direct = entries.take("p0");
        let p_stat = entries.take("p_stat");
        let p_v = entries.take("p_v");
        match (p0_direct, p_stat, p_v) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(Error::Config {
                    path: label.to_string(),
                    line: p0_line,
                    msg: "give either p0 or the pair p_stat/p_v, not both".into(),
                });
            }
            (Some(v), None, None) => config.physical.p0 = v,
            (None, Some(stat), Some(vap)) => config.physical.p0 = stat - vap,
            (None, Some(_), None) | (None, None, Some(_)) => {
                return Err(Error::Config {
                    path: label.to_string(),
                    line: pair_line,
                    msg: "p_stat and p_v must be given together".into(),
                });
            }
            (None, None, None) => {}
        }

        if let Some(v) = entries.take("rel_tol") {
            config.integrator.rel_tol = v;
        }
        if let Some(v) = entries.take("abs_tol") {
            config.integrator.abs_tol = v;
        }
        if let Some(v) = entries.take("h_init") {
            config.integrator.h_init = v;
        }
        if let Some(v) = entries.take("h_max") {
            config.integrator.h_max = v;
        }
        if let Some(v) = entries.take_count("max_steps")? {
            config.integrator.max_steps = v;
        }

        if let Some(v) = entries.take_count("transient_periods")? {
            config.lyapunov.transient_periods = v;
        }
        if let Some(v) = entries.take_count("accumulate_periods")? {
            config.lyapunov.accumulate_periods = v;
        }

        if let Some(v) = entries.take("cluster_eps") {
            config.poincare.cluster_eps = v;
        }
        if let Some(v) = entries.take("period_eps") {
            config.poincare.period_eps = v;
        }
        if let Some(v) = entries.take_count("keep_points")? {
            config.poincare.keep_points = v;
        }

        if let Some(v) = entries.take_count("seed_settle_periods")? {
            config.chart.seed_settle_periods = v;
        }
        if let Some(v) = entries.take_count("chart_transient_periods")? {
            config.chart.transient_periods = v;
        }
        if let Some(v) = entries.take_count("chart_accumulate_periods")? {
            config.chart.accumulate_periods = v;
        }
        if let Some(v) = entries.take_count("path_settle_periods")? {
            config.path.settle_periods = v;
        }
        if let Some(v) = entries.take_count("path_transient_periods")? {
            config.path.transient_periods = v;
        }
        if let Some(v) = entries.take_count("path_accumulate_periods")? {
            config.path.accumulate_periods = v;
        }

        config.physical.validate().map_err(|e| Error::Config {
            path: label.to_string(),
            line: 0,
            msg: e.to_string(),
        })?;
        config.integrator.validate().map_err(|e| Error::Config {
            path: label.to_string(),
            line: 0,
            msg: e.to_string(),
        })?;
        Ok(config)
    }
}

const KNOWN_KEYS: &[&str] = &[
    "rho",
    "sigma",
    "mu",
    "c",
    "kappa",
    "chi",
    "kappa_s",
    "p0",
    "p_stat",
    "p_v",
    "r0",
    "a",
    "omega",
    "d",
    "rel_tol",
    "abs_tol",
    "h_init",
    "h_max",
    "max_steps",
    "transient_periods",
    "accumulate_periods",
    "cluster_eps",
    "period_eps",
    "keep_points",
    "seed_settle_periods",
    "chart_transient_periods",
    "chart_accumulate_periods",
    "path_settle_periods",
    "path_transient_periods",
    "path_accumulate_periods",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_physical_block() {
        let text = "\
# liquid
rho = 998
sigma = 0.0725
mu = 0.001
c = 1500
kappa = 1.07   # gas core
chi = 0.22
kappa_s = 2.4e-9
p0 = 99297
r0 = 1.72e-6
a = 1.5e6
omega = 2.87e7
d = 6.278e-5
rel_tol = 1e-10
abs_tol = 1e-12
transient_periods = 100
";
        let cfg = RunConfig::parse(text, "test.cfg").unwrap();
        assert_eq!(cfg.physical.rho, 998.0);
        assert_eq!(cfg.physical.p0, 99297.0);
        assert_eq!(cfg.lyapunov.transient_periods, 100);
        assert_eq!(cfg.lyapunov.accumulate_periods, 100_000); // default kept
    }

    #[test]
    fn p_stat_minus_p_v() {
        let text = "p_stat = 101625\np_v = 2328\n";
        let cfg = RunConfig::parse(text, "t").unwrap();
        assert_eq!(cfg.physical.p0, 101625.0 - 2328.0);
    }

    #[test]
    fn both_pressure_forms_rejected() {
        let err = RunConfig::parse("p0 = 1e5\np_stat = 1.01e5\np_v = 2e3\n", "t").unwrap_err();
        assert!(err.to_string().contains("not both"), "{err}");
    }

    #[test]
    fn lone_p_stat_rejected() {
        let err = RunConfig::parse("p_stat = 1.01e5\n", "t").unwrap_err();
        assert!(err.to_string().contains("together"), "{err}");
    }

    #[test]
    fn errors_name_the_line() {
        let err = RunConfig::parse("rho = 998\nbogus_key = 3\n", "bubbles.cfg").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bubbles.cfg:2"), "{msg}");
        assert!(msg.contains("bogus_key"), "{msg}");

        let err = RunConfig::parse("rho = not_a_number\n", "bubbles.cfg").unwrap_err();
        assert!(err.to_string().contains("bubbles.cfg:1"), "{err}");

        let err = RunConfig::parse("rho 998\n", "bubbles.cfg").unwrap_err();
        assert!(err.to_string().contains("key = value"), "{err}");

        let err = RunConfig::parse("rho = 998\nrho = 997\n", "bubbles.cfg").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn invalid_physics_rejected_after_parse() {
        let err = RunConfig::parse("kappa = 0.5\n", "t").unwrap_err();
        assert!(err.to_string().contains("kappa"), "{err}");
    }

    #[test]
    fn counts_must_be_integers() {
        let err = RunConfig::parse("keep_points = 2.5\n", "t").unwrap_err();
        assert!(err.to_string().contains("integer"), "{err}");
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let cfg = RunConfig::parse("\n# comment only\n  \nrho = 1000 # trailing\n", "t").unwrap();
        assert_eq!(cfg.physical.rho, 1000.0);
    }
}
