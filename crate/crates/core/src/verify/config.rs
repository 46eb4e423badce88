use std::path::PathBuf;
use std::str::FromStr;

use crate::arith::is_fundamental;
use crate::arith::numth::is_prime;
use crate::error::{Error, Result};
use crate::siegel::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Parse(format!("unknown output format {other:?}"))),
        }
    }
}

/// Run parameters; read from a flat `key = value` file and overridden by flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub disc: u64,
    pub prime: u64,
    pub degree: usize,
    pub max_diag: i64,
    pub max_h: u64,
    pub limits: Limits,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            disc: 4,
            prime: 7,
            degree: 2,
            max_diag: 4,
            max_h: 200,
            limits: Limits::default(),
            cache_dir: None,
            format: OutputFormat::Json,
        }
    }
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse(format!("{key}: expected a decimal number, got {v:?}")))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "disc" => self.disc = num(key, v)?,
            "prime" => self.prime = num(key, v)?,
            "degree" => self.degree = num(key, v)?,
            "max_diag" => self.max_diag = num(key, v)?,
            "max_h" => self.max_h = num(key, v)?,
            "cap_group_size" => self.limits.max_group = num(key, v)?,
            "max_level" => self.limits.max_level = num(key, v)?,
            "cache_dir" => self.cache_dir = Some(PathBuf::from(v)),
            "format" => self.format = v.parse()?,
            other => return Err(Error::Parse(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", no + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        c.apply_text(text)?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_fundamental(self.disc) {
            return Err(Error::NotFundamental(self.disc));
        }
        if !is_prime(self.prime) {
            return Err(Error::InvalidArgument(format!("{} is not prime", self.prime)));
        }
        if self.max_diag < 1 || self.max_h < 1 || self.degree < 1 {
            return Err(Error::InvalidArgument("bounds and degree must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_override() {
        let mut c = RunConfig::from_text("# scan\ndisc = 3\nprime=13\nmax-diag = 2\n\nformat = csv\n").unwrap();
        assert_eq!((c.disc, c.prime, c.max_diag, c.format), (3, 13, 2, OutputFormat::Csv));
        c.set("cap_group_size", "1000").unwrap();
        assert_eq!(c.limits.max_group, 1000);
        assert!(c.validate().is_ok());
        assert!(RunConfig::from_text("disc 3").is_err());
        assert!(RunConfig::from_text("colour = red").is_err());
        assert!(RunConfig::from_text("prime = seven").is_err());
        assert!(RunConfig::from_text("disc = 5").unwrap().validate().is_err());
        assert!(RunConfig::from_text("prime = 9").unwrap().validate().is_err());
    }
}
