use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Everything a batch command needs besides the set-spec file contents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub spec_path: PathBuf,
    pub command: String,
    /// Verification matrix for `verify`.
    pub which: Option<String>,
    /// Restrict to these set names; empty means every set in the file.
    #[serde(default)]
    pub sets: Vec<String>,
    /// Maximal degree; `None` lets each command use its own default.
    pub degree: Option<usize>,
    /// Shell scales, coarse to fine; `None` means the dyadic default.
    pub scales: Option<Vec<f64>>,
    pub ells: Vec<f64>,
    pub resolution: f64,
    pub function: String,
    pub cache_dir: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub expect_fail: bool,
    /// Always on: no seeds, no timestamps, fixed iteration orders.
    pub deterministic: bool,
}

/// Keys a spec file's `[run]` table may set.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunDefaults {
    pub degree: Option<usize>,
    pub scales: Option<Vec<f64>>,
    pub ells: Option<Vec<f64>>,
    pub resolution: Option<f64>,
    pub function: Option<String>,
    pub sets: Option<Vec<String>>,
}

impl RunConfig {
    pub fn new(spec_path: impl Into<PathBuf>, command: &str, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            spec_path: spec_path.into(),
            command: command.to_string(),
            which: None,
            sets: Vec::new(),
            degree: None,
            scales: None,
            ells: vec![1.0, 2.0, 4.0, 8.0],
            resolution: 0.01,
            function: "cauchy(3,0)".to_string(),
            cache_dir: None,
            out_dir: out_dir.into(),
            expect_fail: false,
            deterministic: true,
        }
    }

    pub fn apply_defaults(&mut self, d: RunDefaults) {
        if let Some(v) = d.degree {
            self.degree = Some(v);
        }
        if let Some(v) = d.scales {
            self.scales = Some(v);
        }
        if let Some(v) = d.ells {
            self.ells = v;
        }
        if let Some(v) = d.resolution {
            self.resolution = v;
        }
        if let Some(v) = d.function {
            self.function = v;
        }
        if let Some(v) = d.sets {
            self.sets = v;
        }
    }

    /// Sort and deduplicate the grids, then check them.
    pub fn normalize(&mut self) -> Result<()> {
        self.ells.sort_by(f64::total_cmp);
        self.ells.dedup();
        if let Some(s) = &mut self.scales {
            // coarse to fine
            s.sort_by(|a, b| b.total_cmp(a));
            s.dedup();
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.ells.is_empty() || self.ells.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
            return bad("ℓ grid must be nonempty with finite ℓ >= 0");
        }
        if !self.ells.windows(2).all(|w| w[0] < w[1]) {
            return bad("ℓ grid must be sorted");
        }
        if let Some(s) = &self.scales {
            if s.is_empty() || s.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
                return bad("scales must be nonempty and lie in (0, 1]");
            }
            if !s.windows(2).all(|w| w[0] > w[1]) {
                return bad("scales must be sorted coarse to fine");
            }
        }
        if !(self.resolution > 0.0 && self.resolution.is_finite()) {
            return bad("resolution must be positive");
        }
        if !self.deterministic {
            return bad("nondeterministic runs are not supported");
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::SpecParse {
            line: e.span().map(|sp| s[..sp.start].lines().count().max(1)).unwrap_or(0),
            message: e.message().to_string(),
        })
    }

    pub fn out_path(&self, file: &str) -> PathBuf {
        self.out_dir.join(file)
    }

    pub fn spec_dir(&self) -> &Path {
        self.spec_path.parent().unwrap_or(Path::new("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = RunConfig::new("sets.toml", "verify", "out");
        c.which = Some("lemma31".into());
        c.scales = Some(vec![0.25, 0.125, 0.0625]);
        c.degree = Some(12);
        c.cache_dir = Some("cache".into());
        let back = RunConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn normalize_sorts_and_rejects_empty() {
        let mut c = RunConfig::new("s.toml", "jackson", "o");
        c.ells = vec![4.0, 1.0, 2.0, 1.0];
        c.scales = Some(vec![0.0625, 0.25, 0.125]);
        c.normalize().unwrap();
        assert_eq!(c.ells, vec![1.0, 2.0, 4.0]);
        assert_eq!(c.scales.as_deref(), Some(&[0.25, 0.125, 0.0625][..]));
        c.ells.clear();
        assert!(c.normalize().is_err());
    }
}
