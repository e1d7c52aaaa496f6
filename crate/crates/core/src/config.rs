//! Numerical tolerances and resource bounds, in one record.
//!
//! Loaded from a `key = value` text file; `#` starts a comment.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    /// Radius at which ray tracing starts; `φ(z) ≈ z` is assumed there.
    pub escape_radius: f64,
    /// Newton sub-steps per halving of the potential.
    pub sharpness: u32,
    /// Default number of potential halvings for a ray trace.
    pub ray_depth: u32,
    /// Hard ceiling on `ray_depth`.
    pub max_ray_depth: u32,
    pub newton_max_steps: u32,
    /// Residual required of converged solver roots.
    pub newton_tol: f64,
    /// Step size under which three consecutive levels count as landed.
    pub landing_tol: f64,
    /// A landing polish is accepted if it lies within this many final
    /// step lengths of the ray tip.
    pub capture_factor: f64,
    /// Traces whose final level still moves more than this are not polished.
    pub polish_gate: f64,
    /// Width of the band around piece boundaries that yields inconclusive.
    pub boundary_band: f64,
    /// Green's-function level of the equipotential that caps pieces.
    pub cap_potential: f64,
    /// Orbit magnitude treated as escape/overflow.
    pub magnitude_cap: f64,
    /// Largest period `build_lamination` accepts.
    pub max_lamination_period: u32,
    /// Landing agreement required by `verify_ray_pair` when no tolerance is given.
    pub pair_tol: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            escape_radius: 100.0,
            sharpness: 4,
            ray_depth: 60,
            max_ray_depth: 400,
            newton_max_steps: 200,
            newton_tol: 1e-12,
            landing_tol: 1e-9,
            capture_factor: 100.0,
            polish_gate: 1e-2,
            boundary_band: 1e-6,
            cap_potential: 1.0 / 1024.0,
            magnitude_cap: 1e150,
            max_lamination_period: 20,
            pair_tol: 1e-6,
        }
    }
}

impl Config {
    pub const KEYS: [&'static str; 14] = [
        "escape_radius",
        "sharpness",
        "ray_depth",
        "max_ray_depth",
        "newton_max_steps",
        "newton_tol",
        "landing_tol",
        "capture_factor",
        "polish_gate",
        "boundary_band",
        "cap_potential",
        "magnitude_cap",
        "max_lamination_period",
        "pair_tol",
    ];

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Config::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            self.set_unchecked(k.trim(), v.trim())?;
        }
        self.validate()
    }

    /// Sets one key and validates the result; the record is unchanged on error.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let mut next = self.clone();
        next.set_unchecked(key, value)?;
        next.validate()?;
        *self = next;
        Ok(())
    }

    fn set_unchecked(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Config(format!("bad value {v:?} for {key}")))
        }
        match key {
            "escape_radius" => self.escape_radius = num(key, value)?,
            "sharpness" => self.sharpness = num(key, value)?,
            "ray_depth" => self.ray_depth = num(key, value)?,
            "max_ray_depth" => self.max_ray_depth = num(key, value)?,
            "newton_max_steps" => self.newton_max_steps = num(key, value)?,
            "newton_tol" => self.newton_tol = num(key, value)?,
            "landing_tol" => self.landing_tol = num(key, value)?,
            "capture_factor" => self.capture_factor = num(key, value)?,
            "polish_gate" => self.polish_gate = num(key, value)?,
            "boundary_band" => self.boundary_band = num(key, value)?,
            "cap_potential" => self.cap_potential = parse_potential(value)?,
            "magnitude_cap" => self.magnitude_cap = num(key, value)?,
            "max_lamination_period" => self.max_lamination_period = num(key, value)?,
            "pair_tol" => self.pair_tol = num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("escape_radius", self.escape_radius),
            ("newton_tol", self.newton_tol),
            ("landing_tol", self.landing_tol),
            ("capture_factor", self.capture_factor),
            ("polish_gate", self.polish_gate),
            ("boundary_band", self.boundary_band),
            ("cap_potential", self.cap_potential),
            ("magnitude_cap", self.magnitude_cap),
            ("pair_tol", self.pair_tol),
        ];
        for (k, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{k} must be positive, got {v}")));
            }
        }
        if self.escape_radius <= 2.0 {
            return Err(Error::Config("escape_radius must exceed 2".into()));
        }
        if self.sharpness == 0 || self.newton_max_steps == 0 {
            return Err(Error::Config("sharpness and newton_max_steps must be positive".into()));
        }
        if self.ray_depth > self.max_ray_depth {
            return Err(Error::Config("ray_depth exceeds max_ray_depth".into()));
        }
        if !(2..=30).contains(&self.max_lamination_period) {
            return Err(Error::Config("max_lamination_period must lie in 2..=30".into()));
        }
        Ok(())
    }

    /// Serializes back to the file format; round-trips through [`Config::apply_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for k in Self::KEYS {
            let v = match k {
                "escape_radius" => self.escape_radius.to_string(),
                "sharpness" => self.sharpness.to_string(),
                "ray_depth" => self.ray_depth.to_string(),
                "max_ray_depth" => self.max_ray_depth.to_string(),
                "newton_max_steps" => self.newton_max_steps.to_string(),
                "newton_tol" => self.newton_tol.to_string(),
                "landing_tol" => self.landing_tol.to_string(),
                "capture_factor" => self.capture_factor.to_string(),
                "polish_gate" => self.polish_gate.to_string(),
                "boundary_band" => self.boundary_band.to_string(),
                "cap_potential" => self.cap_potential.to_string(),
                "magnitude_cap" => self.magnitude_cap.to_string(),
                "max_lamination_period" => self.max_lamination_period.to_string(),
                "pair_tol" => self.pair_tol.to_string(),
                _ => unreachable!(),
            };
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

/// Accepts either a decimal or a fraction such as `1/1024`.
fn parse_potential(v: &str) -> Result<f64> {
    let bad = || Error::Config(format!("bad potential {v:?}"));
    match v.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            Ok(a / b)
        }
        None => v.parse().map_err(|_| bad()),
    }
}
