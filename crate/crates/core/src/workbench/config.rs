//! `key = value` configuration files.
//!
//! ```text
//! # grid
//! grid.n = 16
//! grid.k = 16
//! norm.p = 4
//! split.eps0 = auto
//! ```

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::solver::SolverConfig;

/// Named initial-data generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitKind {
    /// Projected smooth random sample with algebraically decaying spectrum.
    RandomDecay,
    /// One perpendicular Fourier x sine mode, an eigenfunction of `A` on
    /// which the nonlinearity vanishes.
    SingleMode,
    /// Smooth sample plus a small flat-spectrum perturbation.
    RoughPerturbation,
}

impl FromStr for InitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-decay" => Ok(InitKind::RandomDecay),
            "single-mode" => Ok(InitKind::SingleMode),
            "rough-perturbation" => Ok(InitKind::RoughPerturbation),
            other => Err(Error::Config(format!("unknown initial data `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitSpec {
    pub kind: InitKind,
    /// Target `L^inf_H L^p_z` norm of the (smooth part of the) data.
    pub amplitude: f64,
    /// Signed horizontal frequencies and vertical index for `single-mode`.
    pub mode: (i64, i64, usize),
    /// Norm of the rough part relative to `amplitude`.
    pub rough: f64,
}

impl Default for InitSpec {
    fn default() -> Self {
        Self { kind: InitKind::RandomDecay, amplitude: 0.5, mode: (1, 0, 0), rough: 0.02 }
    }
}

/// Parameters of the recursion check run by `verify recursion`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecursionParams {
    pub a0: f64,
    pub c1: f64,
    pub c2: f64,
    pub steps: usize,
}

impl Default for RecursionParams {
    fn default() -> Self {
        Self { a0: 0.1, c1: 1.0, c2: 0.25, steps: 200 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorkbenchConfig {
    pub solver: SolverConfig,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub init: InitSpec,
    /// Write a snapshot every this many steps; 0 writes only the first and last.
    pub snapshot_every: usize,
    /// Samples per scan in `verify`.
    pub samples: usize,
    pub recursion: RecursionParams,
}

impl Default for WorkbenchConfig {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            seed: 1,
            output_dir: PathBuf::from("out"),
            init: InitSpec::default(),
            snapshot_every: 0,
            samples: 8,
            recursion: RecursionParams::default(),
        }
    }
}

pub const KEYS: &[&str] = &[
    "grid.n",
    "grid.k",
    "grid.h",
    "norm.p",
    "time.dt",
    "time.horizon",
    "split.delta",
    "split.eps0",
    "picard.max_iter",
    "picard.tol",
    "picard.window",
    "dealias",
    "reproject",
    "seed",
    "output.dir",
    "output.snapshot_every",
    "init.kind",
    "init.amplitude",
    "init.mode",
    "init.rough",
    "verify.samples",
    "recursion.a0",
    "recursion.c1",
    "recursion.c2",
    "recursion.steps",
];

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse `{v}`")))
}

fn boolean(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got `{v}`"))),
    }
}

fn mode(key: &str, v: &str) -> Result<(i64, i64, usize)> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("{key}: expected `m, n, k`, got `{v}`")));
    }
    Ok((num(key, parts[0])?, num(key, parts[1])?, num(key, parts[2])?))
}

impl WorkbenchConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!("line {}: expected `key = value`", lineno + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let s = &mut self.solver;
        match key {
            "grid.n" => s.n = num(key, v)?,
            "grid.k" => s.k = num(key, v)?,
            "grid.h" => s.h = num(key, v)?,
            "norm.p" => s.p = num(key, v)?,
            "time.dt" => s.dt = num(key, v)?,
            "time.horizon" => s.horizon = num(key, v)?,
            "split.delta" => s.delta = num(key, v)?,
            "split.eps0" => s.eps0 = if v == "auto" { None } else { Some(num(key, v)?) },
            "picard.max_iter" => s.max_iter = num(key, v)?,
            "picard.tol" => s.tol = num(key, v)?,
            "picard.window" => s.picard_window = num(key, v)?,
            "dealias" => s.dealias = boolean(key, v)?,
            "reproject" => s.reproject = boolean(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "output.dir" => self.output_dir = PathBuf::from(v),
            "output.snapshot_every" => self.snapshot_every = num(key, v)?,
            "init.kind" => self.init.kind = v.parse()?,
            "init.amplitude" => self.init.amplitude = num(key, v)?,
            "init.mode" => self.init.mode = mode(key, v)?,
            "init.rough" => self.init.rough = num(key, v)?,
            "verify.samples" => self.samples = num(key, v)?,
            "recursion.a0" => self.recursion.a0 = num(key, v)?,
            "recursion.c1" => self.recursion.c1 = num(key, v)?,
            "recursion.c2" => self.recursion.c2 = num(key, v)?,
            "recursion.steps" => self.recursion.steps = num(key, v)?,
            _ => unreachable!("key list checked"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        let i = &self.init;
        if !(i.amplitude >= 0.0 && i.amplitude.is_finite()) {
            return Err(Error::Config(format!("init.amplitude {} must be nonnegative", i.amplitude)));
        }
        if !(i.rough >= 0.0 && i.rough.is_finite()) {
            return Err(Error::Config(format!("init.rough {} must be nonnegative", i.rough)));
        }
        if self.samples == 0 {
            return Err(Error::Config("verify.samples must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_defaults() {
        let cfg = WorkbenchConfig::parse("# comment\n grid.n = 8 # trailing\n\ndealias = off\nsplit.eps0 = 0.01\n").unwrap();
        assert_eq!(cfg.solver.n, 8);
        assert!(!cfg.solver.dealias);
        assert_eq!(cfg.solver.eps0, Some(0.01));
        assert_eq!(cfg.solver.k, SolverConfig::default().k);
    }

    #[test]
    fn rejects_bad_input() {
        for text in ["grid.m = 4", "grid.n = four", "grid.n 4", "norm.p = 3", "grid.n = 4\ngrid.n = 8", "dealias = maybe"] {
            assert!(matches!(WorkbenchConfig::parse(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn init_spec() {
        let cfg = WorkbenchConfig::parse("init.kind = single-mode\ninit.mode = -1, 2, 3\n").unwrap();
        assert_eq!(cfg.init.kind, InitKind::SingleMode);
        assert_eq!(cfg.init.mode, (-1, 2, 3));
    }
}
