//! Flat `key = value` configuration files for [`SelectorConfig`].

use thiserror::Error;

use super::{FilterMode, SelectorConfig};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value `{value}` for `{key}`")]
    BadValue { line: usize, key: String, value: String },
    #[error("{key} {msg}")]
    Range { key: &'static str, msg: &'static str },
}

impl SelectorConfig {
    /// Parse a configuration file: one `key = value` per line, `#` starts a
    /// comment, keys named exactly like the struct fields. Unset keys keep
    /// their defaults.
    pub fn from_config_str(text: &str) -> Result<SelectorConfig, ConfigError> {
        let mut cfg = SelectorConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax { line: lineno });
            };
            let key = key.trim();
            let value = value.trim();
            cfg.set(key, value, lineno)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
        let bad = || ConfigError::BadValue { line, key: key.into(), value: value.into() };
        let as_f64 = || value.parse::<f64>().map_err(|_| bad());
        let as_usize = || value.parse::<usize>().map_err(|_| bad());
        match key {
            "lambda_eff" => self.lambda_eff = as_f64()?,
            "lambda_exp" => self.lambda_exp = as_f64()?,
            "lambda_obp" => self.lambda_obp = as_f64()?,
            "lambda_isp" => self.lambda_isp = as_f64()?,
            "lambda_psc" => self.lambda_psc = as_f64()?,
            "lambda_loc" => self.lambda_loc = as_f64()?,
            "lambda_sps" => self.lambda_sps = as_f64()?,
            "lock_complement" => {
                self.lock_complement = value.parse::<bool>().map_err(|_| bad())?
            }
            "maxsps" => self.maxsps = as_f64()?,
            "endsps" => self.endsps = as_f64()?,
            "density_threshold" => self.density_threshold = as_f64()?,
            "filter_mode" => {
                self.filter_mode = match value {
                    "ParallelismFilter" | "parallelism_filter" => FilterMode::ParallelismFilter,
                    "ParallelismPenalty" | "parallelism_penalty" => FilterMode::ParallelismPenalty,
                    "NoFilter" | "no_filter" => FilterMode::NoFilter,
                    _ => return Err(bad()),
                }
            }
            "parallelism_threshold" => self.parallelism_threshold = as_f64()?,
            "penalty" => self.penalty = as_f64()?,
            "removal_threshold" => self.removal_threshold = as_f64()?,
            "budget_multiplier" => self.budget_multiplier = as_f64()?,
            "max_cuts_per_round" => self.max_cuts_per_round = as_usize()?,
            "max_rounds" => self.max_rounds = as_usize()?,
            other => return Err(ConfigError::UnknownKey { line, key: other.into() }),
        }
        Ok(())
    }

    /// Render as a configuration file that parses back to `self`.
    pub fn to_config_string(&self) -> String {
        let mode = match self.filter_mode {
            FilterMode::ParallelismFilter => "ParallelismFilter",
            FilterMode::ParallelismPenalty => "ParallelismPenalty",
            FilterMode::NoFilter => "NoFilter",
        };
        format!(
            "lambda_eff = {}\nlambda_exp = {}\nlambda_obp = {}\nlambda_isp = {}\n\
             lambda_psc = {}\nlambda_loc = {}\nlambda_sps = {}\nlock_complement = {}\n\
             maxsps = {}\nendsps = {}\ndensity_threshold = {}\nfilter_mode = {}\n\
             parallelism_threshold = {}\npenalty = {}\nremoval_threshold = {}\n\
             budget_multiplier = {}\nmax_cuts_per_round = {}\nmax_rounds = {}\n",
            self.lambda_eff,
            self.lambda_exp,
            self.lambda_obp,
            self.lambda_isp,
            self.lambda_psc,
            self.lambda_loc,
            self.lambda_sps,
            self.lock_complement,
            self.maxsps,
            self.endsps,
            self.density_threshold,
            mode,
            self.parallelism_threshold,
            self.penalty,
            self.removal_threshold,
            self.budget_multiplier,
            self.max_cuts_per_round,
            self.max_rounds,
        )
    }
}
