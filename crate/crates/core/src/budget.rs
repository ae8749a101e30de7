//! Enumeration and dynamic-programming caps.

use crate::error::{Error, Result};

/// Environment variable overriding [`Budget::default`].
pub const BUDGET_ENV: &str = "SNAKELAB_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest seed-tuple count expanded into an explicit ensemble.
    pub ensemble: u64,
    /// Largest tail-tuple count enumerated for one exact consistency value.
    pub tail: u64,
    /// Largest `N·|support|·ℓ` (and similar work estimates) for exact DPs.
    pub dp: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { ensemble: 1_000_000, tail: 100_000, dp: 200_000_000 }
    }
}

impl Budget {
    /// Parse `<n>` (all caps) or a comma list such as `ensemble=1e6,tail=5000`.
    pub fn parse(text: &str) -> Result<Budget> {
        let text = text.trim();
        let mut b = Budget::default();
        if !text.contains('=') {
            let v = parse_count(text)?;
            return Ok(Budget { ensemble: v, tail: v, dp: v });
        }
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("budget entry `{part}` is not key=value")))?;
            let v = parse_count(value)?;
            match key.trim() {
                "ensemble" => b.ensemble = v,
                "tail" => b.tail = v,
                "dp" => b.dp = v,
                other => return Err(Error::Parse(format!("unknown budget key `{other}`"))),
            }
        }
        Ok(b)
    }

    /// Defaults, overridden by `SNAKELAB_BUDGET` when set.
    pub fn from_env() -> Result<Budget> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => Budget::parse(&v),
            Err(_) => Ok(Budget::default()),
        }
    }
}

fn parse_count(text: &str) -> Result<u64> {
    let t = text.trim();
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    match t.parse::<f64>() {
        Ok(f) if f.is_finite() && f >= 0.0 && f <= u64::MAX as f64 => Ok(f as u64),
        _ => Err(Error::Parse(format!("bad budget value `{text}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(Budget::parse("500").unwrap(), Budget { ensemble: 500, tail: 500, dp: 500 });
        let b = Budget::parse("tail=1e3, dp=20").unwrap();
        assert_eq!((b.ensemble, b.tail, b.dp), (1_000_000, 1000, 20));
        assert!(Budget::parse("x=1").is_err());
        assert!(Budget::parse("-3").is_err());
    }
}
