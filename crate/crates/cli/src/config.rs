//! Limits resolution: defaults, then an optional `key = value` file, then
//! environment variables and flags (clap merges the last two, flags first).

use std::fs;
use std::path::Path;

use domino_core::Limits;

use crate::CliError;

/// Overrides gathered from flags or the environment.
#[derive(Debug, Clone, Copy, Default)]
pub struct LimitOverrides {
    pub max_vertices: Option<u64>,
    pub work_limit: Option<u64>,
    pub max_path_degree: Option<(u32, u32)>,
    pub max_count_degree: Option<(u32, u32)>,
}

impl LimitOverrides {
    fn apply(&self, limits: &mut Limits) {
        if let Some(v) = self.max_vertices {
            limits.max_vertices = v;
        }
        if let Some(v) = self.work_limit {
            limits.work_limit = v;
        }
        if let Some(v) = self.max_path_degree {
            limits.max_path_degree = v;
        }
        if let Some(v) = self.max_count_degree {
            limits.max_count_degree = v;
        }
    }
}

pub fn parse_degree(text: &str) -> Result<(u32, u32), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("expected \"m1,m2\", got {text:?}"))?;
    let parse = |s: &str| s.trim().parse::<u32>().map_err(|e| format!("{s:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// Parses a config file body. Blank lines and `#` comments are ignored.
pub fn parse_config(text: &str) -> Result<LimitOverrides, CliError> {
    let mut out = LimitOverrides::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| CliError::Usage(format!("config line {}: {msg}", i + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key = value, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let number = || value.parse::<u64>().map_err(|e| bad(format!("{key}: {e}")));
        match key {
            "max_vertices" => out.max_vertices = Some(number()?),
            "work_limit" => out.work_limit = Some(number()?),
            "max_path_degree" => out.max_path_degree = Some(parse_degree(value).map_err(bad)?),
            "max_count_degree" => out.max_count_degree = Some(parse_degree(value).map_err(bad)?),
            other => return Err(bad(format!("unknown key {other:?}"))),
        }
    }
    Ok(out)
}

pub fn resolve(config: Option<&Path>, overrides: &LimitOverrides) -> Result<Limits, CliError> {
    let mut limits = Limits::default();
    if let Some(path) = config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        parse_config(&text)?.apply(&mut limits);
    }
    overrides.apply(&mut limits);
    Ok(limits)
}
