//! JSON domain descriptions and run settings.

use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::polyring::{parse_holo, HoloPoly, PolyParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    pub tau: u32,
    pub l: u32,
    pub k: u32,
}

impl FamilyParams {
    /// Whether `k > tau > l > 0` and `tau > 2`.
    pub fn in_range(&self) -> bool {
        self.k > self.tau && self.tau > self.l && self.l > 0 && self.tau > 2
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default)]
    pub f: Vec<String>,
    #[serde(default)]
    pub g: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<FamilyParams>,
    #[serde(default = "default_radius")]
    pub sample_radius: f64,
}

fn default_name() -> String {
    "spec".into()
}

fn default_radius() -> f64 {
    0.1
}

/// A spec file expanded to a domain, with warnings about parameters
/// outside the family's stated range.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub domain: DomainSpec,
    pub warnings: Vec<String>,
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let spec: SpecFile = serde_json::from_str(text).map_err(|e| Error::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    spec.check(text)?;
    Ok(spec)
}

impl SpecFile {
    /// Components as written, or the family template `w^tau + z^k*w^l`.
    pub fn f_strings(&self) -> Vec<String> {
        match (&self.params, self.f.is_empty()) {
            (Some(p), true) => vec![format!("w^{} + z^{}*w^{}", p.tau, p.k, p.l)],
            _ => self.f.clone(),
        }
    }

    fn check(&self, text: &str) -> Result<()> {
        if self.params.is_some() && !self.f.is_empty() {
            return Err(Error::Invalid("give either f or params, not both".into()));
        }
        if self.params.is_none() && self.f.is_empty() {
            return Err(Error::Invalid("f must list at least one component".into()));
        }
        if !(self.sample_radius > 0.0 && self.sample_radius.is_finite()) {
            return Err(Error::Invalid(format!("sample_radius must be positive, got {}", self.sample_radius)));
        }
        self.components(Some(text)).map(|_| ())
    }

    fn components(&self, text: Option<&str>) -> Result<(Vec<HoloPoly>, Vec<HoloPoly>)> {
        let parse = |field: &str, list: &[String]| -> Result<Vec<HoloPoly>> {
            list.iter()
                .enumerate()
                .map(|(i, s)| parse_holo(s).map_err(|e| locate(text, &format!("{field}[{i}]"), s, e)))
                .collect()
        };
        Ok((parse("f", &self.f_strings())?, parse("g", &self.g)?))
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let (f, g) = self.components(None)?;
        let mut domain = DomainSpec::new(self.name.clone(), f, g)?;
        domain.sample_radius = self.sample_radius;
        let mut warnings = Vec::new();
        if let Some(p) = self.params.filter(|p| !p.in_range()) {
            warnings.push(format!(
                "params (tau, l, k) = ({}, {}, {}) are outside k > tau > l > 0, tau > 2",
                p.tau, p.l, p.k
            ));
        }
        Ok(Resolved { domain, warnings })
    }
}

impl From<&DomainSpec> for SpecFile {
    /// The concrete components of `domain`, templates already expanded.
    fn from(domain: &DomainSpec) -> Self {
        Self {
            name: domain.name.clone(),
            f: domain.f.iter().map(ToString::to_string).collect(),
            g: domain.g.iter().map(ToString::to_string).collect(),
            params: None,
            sample_radius: domain.sample_radius,
        }
    }
}

/// Converts a column inside a component string into a position in the
/// file when the string can be found there verbatim.
fn locate(text: Option<&str>, field: &str, src: &str, e: PolyParseError) -> Error {
    let quoted = format!("\"{src}\"");
    let Some(at) = text.and_then(|t| t.find(&quoted).map(|i| (t, i))) else {
        return Error::Poly { field: field.into(), source: e };
    };
    let (t, start) = at;
    let before = &t[..start + 1];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    let column = before[line_start..].chars().count() + e.column;
    Error::Json { line, column, message: format!("{field}: {}", e.message) }
}

/// Settings shared by all subcommands; echoed into every JSON output.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub max_steps: u32,
    pub radical_cap: u32,
    pub curve_degree_cap: u32,
    pub samples: usize,
    pub seed: u64,
    pub force: bool,
    pub assert_hypo: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            max_steps: 16,
            radical_cap: 32,
            curve_degree_cap: 8,
            samples: 1000,
            seed: 42,
            force: false,
            assert_hypo: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("max-steps", self.max_steps as u64),
            ("radical-cap", self.radical_cap as u64),
            ("curve-degree-cap", self.curve_degree_cap as u64),
            ("samples", self.samples as u64),
        ] {
            if v == 0 {
                return Err(Error::Invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn kohn(&self) -> crate::kohn::KohnConfig {
        crate::kohn::KohnConfig { max_steps: self.max_steps, radical_cap: self.radical_cap }
    }
}
