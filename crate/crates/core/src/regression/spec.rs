use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::distributions::{MU_T_MAX, MU_T_MIN};
use crate::error::{Error, Result};

use super::Dataset;

/// Serialized in kebab case (`tilted-beta-binomial`); the short labels
/// (`tbb`) are also accepted when reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Binomial,
    BetaBinomial,
    BetaRectangularBinomial,
    TiltedBetaBinomial,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Binomial,
        Family::BetaBinomial,
        Family::BetaRectangularBinomial,
        Family::TiltedBetaBinomial,
    ];

    /// Short label used in tables (`Bin`, `BB`, `BRB`, `TBB`).
    pub fn label(self) -> &'static str {
        match self {
            Family::Binomial => "Bin",
            Family::BetaBinomial => "BB",
            Family::BetaRectangularBinomial => "BRB",
            Family::TiltedBetaBinomial => "TBB",
        }
    }

    pub fn has_dispersion(self) -> bool {
        !matches!(self, Family::Binomial)
    }

    pub fn has_mixture(self) -> bool {
        matches!(self, Family::BetaRectangularBinomial | Family::TiltedBetaBinomial)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bin" | "binomial" => Ok(Family::Binomial),
            "bb" | "beta-binomial" => Ok(Family::BetaBinomial),
            "brb" | "beta-rectangular-binomial" => Ok(Family::BetaRectangularBinomial),
            "tbb" | "tilted-beta-binomial" => Ok(Family::TiltedBetaBinomial),
            other => Err(Error::Spec(format!("unknown family `{other}`"))),
        }
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One column of a design matrix: the intercept, or a covariate shifted by a
/// constant (`"x1"`, `"x1+1"`, `"x2 - 0.5"`).
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Intercept,
    Covariate { name: String, shift: f64 },
}

impl Term {
    pub fn covariate(name: impl Into<String>) -> Self {
        Term::Covariate {
            name: name.into(),
            shift: 0.0,
        }
    }

    pub fn shifted(name: impl Into<String>, shift: f64) -> Self {
        Term::Covariate {
            name: name.into(),
            shift,
        }
    }

    pub fn covariate_name(&self) -> Option<&str> {
        match self {
            Term::Intercept => None,
            Term::Covariate { name, .. } => Some(name),
        }
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Term::Intercept);
        }
        let bad = || Error::Spec(format!("cannot parse model term `{s}`"));
        // Split at the last sign that is not the first character.
        let split = s
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (name, shift) = match split {
            Some(i) => {
                let shift: f64 = s[i..].replace(' ', "").parse().map_err(|_| bad())?;
                (s[..i].trim(), shift)
            }
            None => (s, 0.0),
        };
        let valid = !name.is_empty()
            && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.')
            && !name.starts_with(|c: char| c.is_ascii_digit());
        if !valid {
            return Err(bad());
        }
        Ok(Term::shifted(name, shift))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Intercept => f.write_str("1"),
            Term::Covariate { name, shift } if *shift == 0.0 => f.write_str(name),
            Term::Covariate { name, shift } if *shift > 0.0 => write!(f, "{name}+{shift}"),
            Term::Covariate { name, shift } => write!(f, "{name}{shift}"),
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// How `μ_t` enters a tilted model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuTMode {
    /// Sampled under a `U(1/3, 2/3)` prior.
    Free,
    Fixed(f64),
}

impl Serialize for MuTMode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MuTMode::Free => s.serialize_str("free"),
            MuTMode::Fixed(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for MuTMode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(MuTMode::Fixed(v)),
            Raw::Str(s) if s.eq_ignore_ascii_case("free") => Ok(MuTMode::Free),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "mu_t must be \"free\" or a number, got `{s}`"
            ))),
        }
    }
}

/// Which covariates enter each regression structure.
///
/// `mu_b` uses the logit link, `phi` the log link and `theta` the logit link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: Family,
    #[serde(default)]
    pub mu_b: Vec<Term>,
    #[serde(default)]
    pub phi: Vec<Term>,
    #[serde(default)]
    pub theta: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_t: Option<MuTMode>,
}

impl ModelSpec {
    pub fn new(family: Family, mu_b: Vec<Term>, phi: Vec<Term>, theta: Vec<Term>) -> Result<Self> {
        let spec = Self {
            family,
            mu_b,
            phi,
            theta,
            mu_t: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parse term lists written as strings, e.g. `["1", "x1+1"]`.
    pub fn parse(family: Family, mu_b: &[&str], phi: &[&str], theta: &[&str]) -> Result<Self> {
        let p = |ts: &[&str]| ts.iter().map(|t| t.parse()).collect::<Result<Vec<Term>>>();
        Self::new(family, p(mu_b)?, p(phi)?, p(theta)?)
    }

    pub fn with_mu_t(mut self, mode: MuTMode) -> Result<Self> {
        self.mu_t = Some(mode);
        self.validate()?;
        Ok(self)
    }

    /// The effective `μ_t` handling; `None` for families without a tilted component.
    pub fn mu_t_mode(&self) -> Option<MuTMode> {
        match self.family {
            Family::TiltedBetaBinomial => Some(self.mu_t.unwrap_or(MuTMode::Free)),
            Family::BetaRectangularBinomial => Some(MuTMode::Fixed(0.5)),
            _ => None,
        }
    }

    pub fn has_free_mu_t(&self) -> bool {
        self.mu_t_mode() == Some(MuTMode::Free)
    }

    pub fn validate(&self) -> Result<()> {
        let fam = self.family;
        if self.mu_b.is_empty() {
            return Err(Error::Spec(format!("{fam}: the mu_b structure needs at least one term")));
        }
        match (fam.has_dispersion(), self.phi.is_empty()) {
            (false, false) => return Err(Error::Spec(format!("{fam} has no dispersion; phi terms must be empty"))),
            (true, true) => return Err(Error::Spec(format!("{fam}: the phi structure needs at least one term"))),
            _ => {}
        }
        match (fam.has_mixture(), self.theta.is_empty()) {
            (false, false) => return Err(Error::Spec(format!("{fam} has no mixture weight; theta terms must be empty"))),
            (true, true) => return Err(Error::Spec(format!("{fam}: the theta structure needs at least one term"))),
            _ => {}
        }
        match (fam, self.mu_t) {
            (_, None) => {}
            (Family::TiltedBetaBinomial, Some(MuTMode::Free)) => {}
            (Family::TiltedBetaBinomial, Some(MuTMode::Fixed(v))) if (MU_T_MIN..=MU_T_MAX).contains(&v) => {}
            (Family::TiltedBetaBinomial, Some(MuTMode::Fixed(v))) => {
                return Err(Error::Spec(format!("fixed mu_t = {v} lies outside [1/3, 2/3]")))
            }
            (Family::BetaRectangularBinomial, Some(MuTMode::Fixed(0.5))) => {}
            (f, Some(_)) => return Err(Error::Spec(format!("{f} does not take a mu_t setting"))),
        }
        Ok(())
    }

    /// Every named covariate must be a dataset column.
    pub fn validate_against(&self, data: &Dataset) -> Result<()> {
        self.validate()?;
        for term in self.mu_b.iter().chain(&self.phi).chain(&self.theta) {
            if let Some(name) = term.covariate_name() {
                if data.covariate(name).is_none() {
                    return Err(Error::Spec(format!("covariate `{name}` is not in the dataset")));
                }
            }
        }
        Ok(())
    }
}
