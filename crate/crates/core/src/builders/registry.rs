use std::collections::BTreeMap;

use crate::builders::case::*;
use crate::builders::fe::DEFAULT_QUAD_ORDER;
use crate::builders::GridMap;
use crate::error::{Error, Result};
use crate::symbol::{coefficient_preset, Coefficient};

/// Registry identifiers in listing order.
pub const CASE_NAMES: &[&str] = &[
    "fd_t1", "fd_t2", "fd_t3", "fd_t4", "fd_t5", "fd_t6", "fd_t7", "fe_t1", "fe_mass", "schur", "Ln",
];

const ALIASES: &[(&str, &str)] = &[
    ("fd_diffusion", "fd_t1"),
    ("fd_cdr_dirichlet", "fd_t2"),
    ("fd_cdr_neumann", "fd_t3"),
    ("fd_nondiv", "fd_t4"),
    ("fd_fourth_order", "fd_t5"),
    ("fd_fourth_derivative", "fd_t6"),
    ("fd_nonuniform", "fd_t7"),
    ("fe_cdr", "fe_t1"),
    ("fe_system_schur", "schur"),
    ("fe_eigproblem", "Ln"),
];

const KEYS: &[&str] = &["a", "b", "c", "q", "rho", "quad"];

/// Canonical registry name for `name` or one of its aliases.
pub fn canonical_name(name: &str) -> Result<&'static str> {
    if let Some(n) = CASE_NAMES.iter().find(|n| **n == name) {
        return Ok(n);
    }
    ALIASES
        .iter()
        .find(|(alias, _)| *alias == name)
        .map(|(_, n)| *n)
        .ok_or_else(|| Error::UnknownCase(name.to_string()))
}

/// Presets plus `sing`, the integrable singular coefficient `|x - 1/2|^{-1/4}`.
pub fn default_resolver(name: &str) -> Result<Coefficient> {
    match name {
        "sing" => Ok(Coefficient::abs_power_singular(0.5, 0.25)),
        other => coefficient_preset(other),
    }
}

/// Parsed `name[:key=value,...]` case specification.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseSpec {
    pub name: &'static str,
    pub params: BTreeMap<String, String>,
}

impl CaseSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (text, None),
        };
        let name = canonical_name(name.trim())?;
        let mut params = BTreeMap::new();
        for item in rest.into_iter().flat_map(|r| r.split(',')).filter(|s| !s.trim().is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("case parameter `{item}` is not key=value"))
            })?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Error::InvalidArgument(format!(
                    "unknown case parameter `{k}` (expected one of {})",
                    KEYS.join(", ")
                )));
            }
            if params.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::InvalidArgument(format!("case parameter `{k}` given twice")));
            }
        }
        Ok(Self { name, params })
    }

    fn number(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::InvalidArgument(format!("{key}={v} is not a finite number"))),
        }
    }

    fn quad(&self) -> Result<usize> {
        match self.params.get("quad") {
            None => Ok(DEFAULT_QUAD_ORDER),
            Some(v) => v
                .parse::<usize>()
                .ok()
                .filter(|&q| q >= 1)
                .ok_or_else(|| Error::InvalidArgument(format!("quad={v} is not a positive integer"))),
        }
    }

    fn coeff(
        &self,
        key: &str,
        default: &str,
        resolve: &dyn Fn(&str) -> Result<Coefficient>,
    ) -> Result<Coefficient> {
        resolve(self.params.get(key).map(String::as_str).unwrap_or(default))
    }

    /// Builds the case. Unused keys are rejected so typos surface.
    pub fn instantiate(&self, resolve: &dyn Fn(&str) -> Result<Coefficient>) -> Result<DiscretizationCase> {
        let allowed: &[&str] = match self.name {
            "fd_t1" | "fd_t6" => &["a"],
            "fd_t2" | "fd_t3" | "fd_t4" | "fd_t5" => &["a", "b", "c"],
            "fd_t7" => &["a", "q"],
            "fe_t1" => &["a", "b", "c", "quad"],
            "fe_mass" => &["c", "quad"],
            "schur" => &["a", "rho", "quad"],
            "Ln" => &["a", "c", "quad"],
            _ => unreachable!("canonical names are exhaustive"),
        };
        if let Some(k) = self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidArgument(format!("case {} does not take `{k}`", self.name)));
        }
        let a = || self.coeff("a", "one", resolve);
        let b = || self.coeff("b", "zero", resolve);
        let c = || self.coeff("c", "zero", resolve);
        match self.name {
            "fd_t1" => Ok(fd_diffusion(a()?)),
            "fd_t2" => fd_cdr_dirichlet(a()?, b()?, c()?),
            "fd_t3" => fd_cdr_neumann(a()?, b()?, c()?),
            "fd_t4" => fd_nondiv(a()?, b()?, c()?),
            "fd_t5" => fd_fourth_order_scheme(a()?, b()?, c()?),
            "fd_t6" => fd_fourth_derivative(a()?),
            "fd_t7" => fd_nonuniform(a()?, GridMap::power(self.number("q", 2.0)?)?),
            "fe_t1" => Ok(fe_cdr(a()?, b()?, c()?, self.quad()?)),
            "fe_mass" => Ok(fe_mass_case(self.coeff("c", "one", resolve)?, self.quad()?)),
            "schur" => fe_system_schur(a()?, self.number("rho", 1.0)?, self.quad()?),
            "Ln" => fe_eigproblem(a()?, self.coeff("c", "one", resolve)?, self.quad()?),
            _ => unreachable!(),
        }
    }
}

/// Parses and builds a case with the default coefficient resolver.
pub fn case_from_spec(text: &str) -> Result<DiscretizationCase> {
    CaseSpec::parse(text)?.instantiate(&default_resolver)
}

/// Every registered case with default parameters.
pub fn registry() -> Vec<DiscretizationCase> {
    CASE_NAMES
        .iter()
        .map(|n| case_from_spec(n).expect("default parameters are valid"))
        .collect()
}

/// One listing line per registered case.
pub fn list_cases() -> Vec<String> {
    registry().iter().map(DiscretizationCase::listing).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_contains_required_lines() {
        let lines = list_cases();
        assert_eq!(lines.len(), CASE_NAMES.len());
        assert!(lines.iter().any(|l| l.starts_with("fd_t1 | a(x)(2-2cos(theta)) | alpha=1")));
        assert!(lines.iter().any(|l| l.starts_with("Ln | (a/c)(6-6cos)/(2+cos) | alpha=(n+1)^-2")));
    }

    #[test]
    fn parse_with_parameters() {
        let s = CaseSpec::parse("fd_t4:a=1+x,b=one, c=exp").unwrap();
        assert_eq!(s.name, "fd_t4");
        assert_eq!(s.params["c"], "exp");
        let case = s.instantiate(&default_resolver).unwrap();
        assert_eq!(case.coefficients()[2].1, "exp");
        assert_eq!(CaseSpec::parse("fd_fourth_derivative").unwrap().name, "fd_t6");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(CaseSpec::parse("nope"), Err(Error::UnknownCase(_))));
        assert!(CaseSpec::parse("fd_t1:z=1").is_err());
        assert!(CaseSpec::parse("fd_t1:a").is_err());
        assert!(case_from_spec("fd_t1:rho=2").is_err());
        assert!(matches!(case_from_spec("fd_t1:a=wat"), Err(Error::UnknownCoefficient(_))));
        assert!(case_from_spec("schur:rho=inf").is_err());
    }

    #[test]
    fn every_case_builds() {
        for case in registry() {
            let n = case.min_n().max(8);
            let m = case.build(n).unwrap();
            assert_eq!(m.n(), n, "{}", case.name());
            assert!(m.to_dense().unwrap().is_finite());
        }
    }
}
