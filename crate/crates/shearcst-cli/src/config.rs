//! Layered run configuration.
//!
//! A run starts from [`VerifyConfig::default`], then applies, in order:
//! an optional `key = value` file, `SHEARCST_*` environment variables, and
//! command-line flags. Later layers win. The resolved configuration is
//! validated once at the end, so a nonsensical value is rejected no matter
//! which layer introduced it.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use shearcst::verify::VerifyConfig;

/// Keys understood in config files; the same names, upper-cased and
/// prefixed with `SHEARCST_`, are read from the environment.
pub const KEYS: [&str; 7] = ["seed", "squeeze", "seed_radius", "hbar4", "h2", "m", "omega"];

/// One layer of optional settings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub squeeze: Option<f64>,
    pub seed_radius: Option<f64>,
    pub hbar4: Option<f64>,
    pub h2: Option<f64>,
    pub m: Option<f64>,
    pub omega: Option<f64>,
}

impl Overrides {
    /// Applies every present field onto `cfg`.
    pub fn apply(&self, cfg: &mut VerifyConfig) {
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.squeeze {
            cfg.squeeze = v;
        }
        if let Some(v) = self.seed_radius {
            cfg.seed_radius = v;
        }
        if let Some(v) = self.hbar4 {
            cfg.params.hbar4 = v;
        }
        if let Some(v) = self.h2 {
            cfg.params.h2 = v;
        }
        if let Some(v) = self.m {
            cfg.params.m = v;
        }
        if let Some(v) = self.omega {
            cfg.params.omega = v;
        }
    }

    fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut out = Overrides::default();
        for (key, raw) in map {
            match key.as_str() {
                "seed" => {
                    out.seed =
                        Some(raw.parse().with_context(|| format!("seed = {raw:?} is not a u64"))?)
                }
                "squeeze" => out.squeeze = Some(parse_f64(key, raw)?),
                "seed_radius" => out.seed_radius = Some(parse_f64(key, raw)?),
                "hbar4" => out.hbar4 = Some(parse_f64(key, raw)?),
                "h2" => out.h2 = Some(parse_f64(key, raw)?),
                "m" => out.m = Some(parse_f64(key, raw)?),
                "omega" => out.omega = Some(parse_f64(key, raw)?),
                other => bail!("unknown configuration key {other:?} (expected one of {KEYS:?})"),
            }
        }
        Ok(out)
    }
}

fn parse_f64(key: &str, raw: &str) -> Result<f64> {
    raw.parse().with_context(|| format!("{key} = {raw:?} is not a number"))
}

/// Parses `key = value` text. Blank lines and `#` comments are skipped;
/// unknown keys are errors (misspellings should not silently fall back to
/// defaults).
pub fn parse_file(text: &str) -> Result<Overrides> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected `key = value`, got {raw:?}", idx + 1);
        };
        let key = key.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            bail!("config line {}: unknown key {key:?} (expected one of {KEYS:?})", idx + 1);
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            bail!("config line {}: key {key:?} set twice", idx + 1);
        }
    }
    Overrides::from_map(&map)
}

/// Reads the `SHEARCST_*` environment layer.
pub fn from_env() -> Result<Overrides> {
    let mut map = BTreeMap::new();
    for key in KEYS {
        let var = format!("SHEARCST_{}", key.to_uppercase());
        if let Ok(value) = std::env::var(&var) {
            map.insert(key.to_string(), value);
        }
    }
    Overrides::from_map(&map).context("invalid SHEARCST_* environment variable")
}

/// Resolves the full layering: defaults → file → environment → flags.
pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<VerifyConfig> {
    let mut cfg = VerifyConfig::default();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        parse_file(&text)
            .with_context(|| format!("in config file {}", path.display()))?
            .apply(&mut cfg);
    }
    from_env()?.apply(&mut cfg);
    flags.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_layer_parses_comments_and_spacing() {
        let text = "\n# reference point\nseed = 11   # trailing note\nsqueeze=2.5\n  omega = 0.5\n";
        let got = parse_file(text).unwrap();
        assert_eq!(got.seed, Some(11));
        assert_eq!(got.squeeze, Some(2.5));
        assert_eq!(got.omega, Some(0.5));
        assert_eq!(got.h2, None);
    }

    #[test]
    fn unknown_and_duplicate_keys_are_rejected() {
        assert!(parse_file("sqeeze = 1.0").is_err());
        assert!(parse_file("seed = 1\nseed = 2").is_err());
        assert!(parse_file("just a line").is_err());
        assert!(parse_file("squeeze = fast").is_err());
    }

    #[test]
    fn later_layers_override_earlier_ones() {
        let mut cfg = VerifyConfig::default();
        parse_file("squeeze = 2.0\nseed = 3").unwrap().apply(&mut cfg);
        Overrides { squeeze: Some(0.8), ..Default::default() }.apply(&mut cfg);
        assert_eq!(cfg.squeeze, 0.8);
        assert_eq!(cfg.seed, 3);
    }
}
