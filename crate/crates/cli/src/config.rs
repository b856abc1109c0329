//! Experiment parameters: `--key value` pairs layered over an optional
//! `key = value` file.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
    used: BTreeSet<String>,
}

impl Params {
    /// Command-line pairs override the file.
    pub fn new(file: Option<&Path>, pairs: Vec<(String, String)>) -> Result<Self> {
        let mut values = BTreeMap::new();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
            values.extend(parse_config(&text)?);
        }
        for (k, v) in pairs {
            values.insert(k, v);
        }
        Ok(Self {
            values,
            used: BTreeSet::new(),
        })
    }

    /// Remove a runner-level key.
    pub fn take_common(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    /// All values as given, for the verdict.
    pub fn snapshot(&self) -> BTreeMap<String, String> {
        self.values.clone()
    }

    fn raw(&mut self, key: &str) -> Option<&str> {
        self.used.insert(key.to_string());
        self.values.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => parse_f64(key, s),
        }
    }

    /// A nonnegative integer; scientific notation such as `1e6` is accepted.
    pub fn count(&mut self, key: &str, default: u64) -> Result<u64> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => parse_count(key, s),
        }
    }

    pub fn list(&mut self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(s) => s.split(',').map(|t| parse_f64(key, t.trim())).collect(),
        }
    }

    pub fn counts(&mut self, key: &str, default: &[u64]) -> Result<Vec<u64>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(s) => s.split(',').map(|t| parse_count(key, t.trim())).collect(),
        }
    }

    /// `a:b:n`, `n` evenly spaced points from `a` to `b` inclusive.
    pub fn grid(&mut self, key: &str, default: (f64, f64, u64)) -> Result<Vec<f64>> {
        let (a, b, n) = match self.raw(key) {
            None => default,
            Some(s) => {
                let parts: Vec<&str> = s.split(':').collect();
                if parts.len() != 3 {
                    bail!("--{key}: expected start:end:count, got {s:?}");
                }
                (parse_f64(key, parts[0])?, parse_f64(key, parts[1])?, parse_count(key, parts[2])?)
            }
        };
        if n < 2 || b <= a {
            bail!("--{key}: need count ≥ 2 and end > start");
        }
        Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect())
    }

    /// Fails on keys no experiment step asked for.
    pub fn finish(&self) -> Result<()> {
        let unknown: Vec<&str> = self
            .values
            .keys()
            .filter(|k| !self.used.contains(*k))
            .map(String::as_str)
            .collect();
        if !unknown.is_empty() {
            bail!("unknown parameter(s): {}", unknown.join(", "));
        }
        Ok(())
    }
}

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    let v: f64 = s.parse().with_context(|| format!("--{key}: {s:?} is not a number"))?;
    if !v.is_finite() {
        bail!("--{key}: {s:?} is not finite");
    }
    Ok(v)
}

fn parse_count(key: &str, s: &str) -> Result<u64> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v = parse_f64(key, s)?;
    if v < 0.0 || v.fract() != 0.0 || v > u64::MAX as f64 {
        bail!("--{key}: {s:?} is not a nonnegative integer");
    }
    Ok(v as u64)
}

/// `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected key = value", i + 1);
        };
        let k = k.trim();
        if k.is_empty() {
            bail!("config line {}: empty key", i + 1);
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Split `--key value` / `--key=value` tokens into pairs.
pub fn parse_pairs(tokens: &[String]) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut it = tokens.iter();
    while let Some(tok) = it.next() {
        let Some(key) = tok.strip_prefix("--") else {
            bail!("unexpected argument {tok:?}; parameters are given as --key value");
        };
        if let Some((k, v)) = key.split_once('=') {
            out.push((k.to_string(), v.to_string()));
        } else {
            let Some(v) = it.next() else {
                bail!("--{key} needs a value");
            };
            out.push((key.to_string(), v.clone()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, &str)]) -> Params {
        Params::new(None, pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()).unwrap()
    }

    #[test]
    fn scientific_counts() {
        let mut p = params(&[("steps", "1e6"), ("bad", "1.5")]);
        assert_eq!(p.count("steps", 0).unwrap(), 1_000_000);
        assert!(p.count("bad", 0).is_err());
        assert_eq!(p.count("missing", 42).unwrap(), 42);
    }

    #[test]
    fn grids_and_lists() {
        let mut p = params(&[("t-grid", "1:20:100"), ("weights", "1, 2,1,1")]);
        let g = p.grid("t-grid", (0.0, 1.0, 2)).unwrap();
        assert_eq!(g.len(), 100);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[99], 20.0);
        assert_eq!(p.list("weights", &[]).unwrap(), vec![1.0, 2.0, 1.0, 1.0]);
    }

    #[test]
    fn unknown_keys_are_reported() {
        let mut p = params(&[("alpha", "3"), ("typo", "1")]);
        p.f64("alpha", 1.0).unwrap();
        let err = p.finish().unwrap_err().to_string();
        assert!(err.contains("typo"), "{err}");
    }

    #[test]
    fn config_file_syntax() {
        let pairs = parse_config("# comment\nalpha = 3\n\nbeta=1 # trailing\n").unwrap();
        assert_eq!(pairs, vec![("alpha".into(), "3".into()), ("beta".into(), "1".into())]);
        assert!(parse_config("novalue\n").is_err());
    }

    #[test]
    fn pair_tokens() {
        let toks: Vec<String> = ["--a", "1", "--b=2"].iter().map(|s| s.to_string()).collect();
        assert_eq!(parse_pairs(&toks).unwrap(), vec![("a".into(), "1".into()), ("b".into(), "2".into())]);
        assert!(parse_pairs(&["--a".to_string()]).is_err());
        assert!(parse_pairs(&["a".to_string()]).is_err());
    }
}
