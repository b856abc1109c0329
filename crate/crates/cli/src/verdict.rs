//! Verdicts: measured values against expectations.

use std::collections::BTreeMap;

use serde::Serialize;

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    /// Stated by a theorem, lemma or closed-form law.
    Theorem,
    /// Obtained by an independent numerical computation.
    Derived,
    /// Immediate from a formula or a structural fact.
    Trivial,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Theorem => "theorem",
            Tag::Derived => "derived",
            Tag::Trivial => "trivial",
        }
    }
}

/// How `value` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `|value − expected| ≤ tolerance`
    Absolute,
    /// `|value / expected − 1| ≤ tolerance`
    Relative,
    /// `value ≤ expected + tolerance`
    AtMost,
    /// `value ≥ expected − tolerance`
    AtLeast,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Absolute => "absolute",
            Rule::Relative => "relative",
            Rule::AtMost => "at_most",
            Rule::AtLeast => "at_least",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub rule: Rule,
    pub tolerance: f64,
    pub tag: Tag,
    pub pass: bool,
}

impl Measurement {
    pub fn new(name: impl Into<String>, value: f64, expected: f64, rule: Rule, tolerance: f64, tag: Tag) -> Self {
        let pass = match rule {
            Rule::Absolute => (value - expected).abs() <= tolerance,
            Rule::Relative => (value / expected - 1.0).abs() <= tolerance,
            Rule::AtMost => value <= expected + tolerance,
            Rule::AtLeast => value >= expected - tolerance,
        };
        Self {
            name: name.into(),
            value,
            expected,
            rule,
            tolerance,
            tag,
            pass,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.name,
            num(self.value),
            num(self.expected),
            self.rule.as_str(),
            num(self.tolerance),
            self.tag.as_str(),
            self.pass
        )
    }
}

/// Plain notation, switching to exponent notation for tiny magnitudes.
fn num(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

pub const MEASUREMENT_CSV_HEADER: &str = "name,value,expected,rule,tolerance,tag,pass";

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub experiment: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, String>,
    pub measurements: Vec<Measurement>,
    /// Data files written next to the verdict.
    pub artifacts: Vec<String>,
    pub pass: bool,
    pub wall_seconds: f64,
}

impl Verdict {
    pub fn new(
        experiment: &str,
        seed: u64,
        parameters: BTreeMap<String, String>,
        measurements: Vec<Measurement>,
        artifacts: Vec<String>,
        wall_seconds: f64,
    ) -> Self {
        let pass = !measurements.is_empty() && measurements.iter().all(|m| m.pass);
        Self {
            experiment: experiment.to_string(),
            seed,
            parameters,
            measurements,
            artifacts,
            pass,
            wall_seconds,
        }
    }
}
