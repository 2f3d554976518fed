use std::path::PathBuf;

use super::output::fmt_f64;
use super::preset::Preset;
use crate::acat1d::{Boundary, SchemeKind, SchemeSpec};
use crate::models::DEFAULT_GAMMA;
use crate::{Error, Execution, Result};

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Preset,
    pub scheme: SchemeSpec,
    /// Cells per axis.
    pub cells: usize,
    pub cfl: f64,
    pub t_final: f64,
    /// Overrides the preset boundary condition.
    pub bc: Option<Boundary>,
    pub gamma: f64,
    pub out_dir: PathBuf,
    /// Write the indicator fields of the last step.
    pub dump_psi: bool,
    /// Keep every n-th step record in `diagnostics.csv` (the last one is always kept).
    pub history_every: usize,
    pub exec: Execution,
}

const KEYS: &[&str] = &[
    "preset",
    "scheme",
    "P",
    "low_order",
    "limiter",
    "psi1",
    "modified_p2",
    "select_threshold",
    "nested_selection",
    "eps_scale",
    "cells",
    "cfl",
    "t_final",
    "bc",
    "gamma",
    "out_dir",
    "dump_psi",
    "history_every",
    "exec",
];

/// Default configuration of a named preset, run with ACAT4.
pub fn preset(name: &str) -> Result<RunConfig> {
    Ok(RunConfig::for_preset(name.parse()?))
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config(format!("invalid value '{value}' for '{key}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("invalid boolean '{value}' for '{key}'"))),
    }
}

fn config_err(e: Error) -> Error {
    match e {
        Error::InvalidArgument(msg) => Error::Config(msg),
        other => other,
    }
}

impl RunConfig {
    pub fn for_preset(preset: Preset) -> Self {
        Self {
            preset,
            scheme: SchemeSpec::acat(2),
            cells: preset.default_cells(),
            cfl: preset.default_cfl(),
            t_final: preset.default_t_final(),
            bc: None,
            gamma: DEFAULT_GAMMA,
            out_dir: PathBuf::from("out"),
            dump_psi: false,
            history_every: 1,
            exec: Execution::default(),
        }
    }

    pub fn with_scheme(mut self, scheme: SchemeSpec) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_cells(mut self, cells: usize) -> Self {
        self.cells = cells;
        self
    }

    pub fn boundary(&self) -> Boundary {
        self.bc.unwrap_or(self.preset.default_bc())
    }

    /// Checks the mesh, time and scheme against each other.
    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        if self.cells == 0 {
            return Err(Error::InvalidArgument("cells must be positive".into()));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidArgument(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidArgument(format!("t_final must be finite and >= 0, got {}", self.t_final)));
        }
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if self.history_every == 0 {
            return Err(Error::InvalidArgument("history_every must be at least 1".into()));
        }
        if self.preset.is_2d() && self.scheme.kind == SchemeKind::Lat {
            return Err(Error::InvalidArgument("LAT is only available in 1D".into()));
        }
        if self.boundary() == Boundary::Periodic && self.scheme.halo() > self.cells {
            return Err(Error::InvalidArgument(format!(
                "{} needs {} ghost cells but the periodic mesh has only {} cells",
                self.scheme.label(),
                self.scheme.halo(),
                self.cells
            )));
        }
        Ok(())
    }

    /// Sets one `key = value` entry. `preset` resets every other field.
    pub fn apply_override(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let ind = &mut self.scheme.indicator;
        match key {
            "preset" => *self = Self::for_preset(value.parse().map_err(config_err)?),
            "scheme" => self.scheme.kind = value.parse().map_err(config_err)?,
            "P" | "p" => self.scheme.max_p = parse(key, value)?,
            "low_order" => self.scheme.low_order = value.parse().map_err(config_err)?,
            "limiter" => ind.limiter = value.parse().map_err(config_err)?,
            "psi1" => ind.psi1_rule = value.parse().map_err(config_err)?,
            "modified_p2" => ind.use_modified_p2 = parse_bool(key, value)?,
            "select_threshold" => ind.select_threshold = parse(key, value)?,
            "nested_selection" => ind.nested_selection = parse_bool(key, value)?,
            "eps_scale" => ind.eps_scale = parse(key, value)?,
            "cells" => self.cells = parse(key, value)?,
            "cfl" => self.cfl = parse(key, value)?,
            "t_final" | "tfinal" => self.t_final = parse(key, value)?,
            "bc" => self.bc = if value == "default" { None } else { Some(value.parse().map_err(config_err)?) },
            "gamma" => self.gamma = parse(key, value)?,
            "out_dir" | "out" => self.out_dir = PathBuf::from(value),
            "dump_psi" => self.dump_psi = parse_bool(key, value)?,
            "history_every" => self.history_every = parse(key, value)?,
            "exec" => {
                self.exec = match value {
                    "serial" => Execution::Serial,
                    "parallel" => Execution::Parallel,
                    _ => return Err(Error::Config(format!("invalid value '{value}' for 'exec'"))),
                }
            }
            _ => return Err(Error::Config(format!("unknown key '{key}' (known: {})", KEYS.join(", ")))),
        }
        Ok(())
    }

    /// Plain-text `key = value` form, one entry per line.
    pub fn to_kv_string(&self) -> String {
        let ind = &self.scheme.indicator;
        let mut lines = vec![
            format!("preset = {}", self.preset.name()),
            format!("scheme = {}", self.scheme.kind.name()),
            format!("P = {}", self.scheme.max_p),
            format!("low_order = {}", self.scheme.low_order.name()),
            format!("limiter = {}", ind.limiter.name()),
            format!("psi1 = {}", ind.psi1_rule.name()),
            format!("modified_p2 = {}", ind.use_modified_p2),
            format!("select_threshold = {}", fmt_f64(ind.select_threshold)),
            format!("nested_selection = {}", ind.nested_selection),
            format!("eps_scale = {}", fmt_f64(ind.eps_scale)),
            format!("cells = {}", self.cells),
            format!("cfl = {}", fmt_f64(self.cfl)),
            format!("t_final = {}", fmt_f64(self.t_final)),
        ];
        if let Some(bc) = self.bc {
            lines.push(format!("bc = {}", bc.name()));
        }
        lines.extend([
            format!("gamma = {}", fmt_f64(self.gamma)),
            format!("out_dir = {}", self.out_dir.display()),
            format!("dump_psi = {}", self.dump_psi),
            format!("history_every = {}", self.history_every),
            format!("exec = {}", if self.exec == Execution::Serial { "serial" } else { "parallel" }),
        ]);
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }

    /// Parses the `key = value` form. `preset` is required and applied first;
    /// blank lines and `#` comments are ignored.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value', got '{raw}'", n + 1)))?;
            entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        let preset = entries
            .iter()
            .find(|(k, _)| k == "preset")
            .ok_or_else(|| Error::Config("missing 'preset' entry".into()))?;
        let mut cfg = Self::for_preset(preset.1.parse().map_err(config_err)?);
        for (k, v) in entries.iter().filter(|(k, _)| k != "preset") {
            cfg.apply_override(k, v)?;
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acat1d::LowOrderKind;
    use crate::smooth::Limiter;

    #[test]
    fn preset_defaults() {
        let sod = preset("sod").unwrap();
        assert_eq!((sod.cells, sod.cfl, sod.t_final), (200, 0.8, 0.25));
        assert_eq!(sod.boundary(), Boundary::Outflow);
        let blast = preset("blast_right").unwrap();
        assert_eq!((blast.cells, blast.t_final), (450, 0.012));
        assert_eq!(preset("euler2d_cfg6").unwrap().t_final, 0.3);
        assert_eq!(preset("transport_sine").unwrap().boundary(), Boundary::Periodic);
        assert!(preset("nope").is_err());
    }

    #[test]
    fn every_preset_round_trips() {
        for p in Preset::ALL {
            let cfg = RunConfig::for_preset(p);
            assert_eq!(RunConfig::from_kv_str(&cfg.to_kv_string()).unwrap(), cfg, "{p}");
        }
    }

    #[test]
    fn overrides_round_trip() {
        let mut cfg = preset("sod").unwrap();
        for (k, v) in [
            ("scheme", "cat"),
            ("P", "3"),
            ("low_order", "hll"),
            ("limiter", "minmod"),
            ("cfl", "0.1"),
            ("t_final", "0.3333333333333333"),
            ("bc", "periodic"),
            ("dump_psi", "true"),
            ("exec", "serial"),
        ] {
            cfg.apply_override(k, v).unwrap();
        }
        assert_eq!(cfg.scheme.low_order, LowOrderKind::Hll);
        assert_eq!(cfg.scheme.indicator.limiter, Limiter::Minmod);
        assert_eq!(cfg.t_final, 1.0 / 3.0);
        assert_eq!(RunConfig::from_kv_str(&cfg.to_kv_string()).unwrap(), cfg);
    }

    #[test]
    fn bad_input_is_reported() {
        let mut cfg = preset("sod").unwrap();
        assert!(matches!(cfg.apply_override("colour", "red"), Err(Error::Config(_))));
        assert!(matches!(cfg.apply_override("cfl", "fast"), Err(Error::Config(_))));
        assert!(RunConfig::from_kv_str("cells = 10\n").is_err());
        assert!(RunConfig::from_kv_str("preset sod\n").is_err());
        let parsed = RunConfig::from_kv_str("# comment\npreset = sod\ncells = 50 # coarse\n").unwrap();
        assert_eq!(parsed.cells, 50);
        cfg.cfl = 1.5;
        assert!(cfg.validate().is_err());
        let lat2d = RunConfig::for_preset(Preset::Euler2dCfg4).with_scheme(SchemeSpec::lat(2));
        assert!(lat2d.validate().is_err());
        let tiny = RunConfig::for_preset(Preset::TransportSine).with_cells(2).with_scheme(SchemeSpec::acat(3));
        assert!(tiny.validate().is_err());
    }
}
