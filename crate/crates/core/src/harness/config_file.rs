//! Flat `key = value` configuration files.
//!
//! Blank lines and `#` comments are ignored. Keys not present keep their
//! defaults; unknown or repeated keys are errors.

use std::collections::HashSet;
use std::path::Path;

use crate::config::{dbm_to_watts, SystemConfig};
use crate::error::{Error, Result};
use crate::harness::SweepSpec;

pub const KEYS: [&str; 12] = [
    "carrier_hz",
    "n_strips",
    "m_elements",
    "d_e_over_lambda",
    "d_s_over_lambda",
    "n_paths",
    "n_rf",
    "noise_dbm",
    "wg_beta",
    "wg_alpha",
    "eps",
    "max_outer_iters",
];

/// Reads a configuration file. The sweep spec is the default power sweep;
/// callers override it from the command line.
pub fn load_config(path: impl AsRef<Path>) -> Result<(SystemConfig<f64>, SweepSpec)> {
    let text = std::fs::read_to_string(path)?;
    let cfg = parse_config(&text)?;
    let spec = SweepSpec::default_power(&cfg);
    Ok((cfg, spec))
}

pub fn parse_config(text: &str) -> Result<SystemConfig<f64>> {
    let defaults = SystemConfig::<f64>::default();
    let mut cfg = defaults.clone();
    let mut d_e_over_lambda = 0.2;
    let mut d_s_over_lambda = 0.5;
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: line_no, msg };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let value = value.trim();
        if !KEYS.contains(&key) {
            return Err(parse_err(format!("unknown key `{key}`")));
        }
        if !seen.insert(key.to_string()) {
            return Err(parse_err(format!("duplicate key `{key}`")));
        }
        let real = || {
            value
                .parse::<f64>()
                .map_err(|_| parse_err(format!("`{key}` expects a number, got `{value}`")))
        };
        let count = || {
            value
                .parse::<usize>()
                .map_err(|_| parse_err(format!("`{key}` expects a non-negative integer, got `{value}`")))
        };
        match key {
            "carrier_hz" => cfg.carrier_frequency = real()?,
            "n_strips" => cfg.n_strips = count()?,
            "m_elements" => cfg.m_elements = count()?,
            "d_e_over_lambda" => d_e_over_lambda = real()?,
            "d_s_over_lambda" => d_s_over_lambda = real()?,
            "n_paths" => cfg.n_paths = count()?,
            "n_rf" => cfg.n_rf = count()?,
            "noise_dbm" => cfg.noise_var = dbm_to_watts(real()?),
            "wg_beta" => cfg.wg_attenuation = real()?,
            "wg_alpha" => cfg.wg_wavenumber = real()?,
            "eps" => cfg.convergence_eps = real()?,
            "max_outer_iters" => cfg.max_outer_iters = count()?,
            _ => unreachable!("key list checked above"),
        }
    }
    let lambda = cfg.wavelength();
    cfg.d_e = d_e_over_lambda * lambda;
    cfg.d_s = d_s_over_lambda * lambda;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = parse_config("").unwrap();
        let d = SystemConfig::<f64>::default();
        assert_eq!(cfg.n_strips, 10);
        assert_eq!(cfg.m_elements, 30);
        assert_eq!(cfg.n_rf, 3);
        assert_eq!(cfg.n_paths, 12);
        assert_relative_eq!(cfg.d_e, d.d_e, max_relative = 1e-15);
        assert_relative_eq!(cfg.d_s, d.d_s, max_relative = 1e-15);
        assert_relative_eq!(cfg.noise_var, 1e-3);
        assert_eq!(cfg.wg_attenuation, 0.6);
        assert_eq!(cfg.wg_wavenumber, 827.67);
        assert_eq!(cfg.convergence_eps, 1e-4);
    }

    #[test]
    fn overrides_and_comments() {
        let text = "# link\n n_rf = 3 \n\ncarrier_hz=30e9 # Hz\nd_e_over_lambda = 0.5\nnoise_dbm = -10\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.n_rf, 3);
        assert_eq!(cfg.carrier_frequency, 30e9);
        assert_relative_eq!(cfg.d_e, cfg.wavelength() / 2.0, max_relative = 1e-15);
        assert_relative_eq!(cfg.noise_var, 1e-4, max_relative = 1e-12);
    }

    #[test]
    fn too_many_rf_chains_is_invariant_error() {
        assert!(matches!(parse_config("n_rf=11\n"), Err(Error::Config(_))));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_config("n_rf = 2\n\nbogus = 1\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, msg: "unknown key `bogus`".into() });
        assert!(matches!(parse_config("n_rf\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_config("n_rf = two\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_config("n_rf = 2\nn_rf = 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_config("n_strips = -1\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn load_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("link.cfg");
        std::fs::write(&path, "n_strips = 8\nn_rf = 2\n").unwrap();
        let (cfg, spec) = load_config(&path).unwrap();
        assert_eq!(cfg.n_strips, 8);
        assert_eq!(spec.values, vec![-10.0, -5.0, 0.0, 5.0, 10.0]);
        assert!(load_config(dir.path().join("missing.cfg")).is_err());
    }
}
