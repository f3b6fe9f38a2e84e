//! Problem documents.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::spectrum::ExtensionPolicy;
use crate::logmonomial::NCProblem;
use crate::mpoly::{parse, MPoly};
use crate::{Error, Q};

/// An exact rational written as `"p/q"` in documents. Integers are also
/// accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(pub Q);

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&self.0.to_string())
    }
}

impl FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num = num.parse().map_err(|_| format!("not a rational number: {s:?}"))?;
        let den: num_bigint::BigInt = den.parse().map_err(|_| format!("not a rational number: {s:?}"))?;
        if den == 0.into() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Rat(Q::new(num, den)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Rat(Q::from_integer(n.into()))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Isolated,
    NcMonomial,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extension {
    #[default]
    Off,
    One,
}

impl Extension {
    pub fn policy(self) -> ExtensionPolicy {
        match self {
            Extension::Off => ExtensionPolicy::RationalOnly,
            Extension::One => ExtensionPolicy::AllowOneExtension,
        }
    }
}

/// `certify` recomputes at twice the precision and compares.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    None,
    #[default]
    Certify,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub mode: Mode,
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_prime: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<BTreeMap<String, u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residues: Option<BTreeMap<String, Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(Rat, Rat)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u64>,
    #[serde(default)]
    pub extension: Extension,
    #[serde(default)]
    pub check: Check,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, Error> {
    Err(Error::InvalidProblem(msg.into()))
}

impl ProblemSpec {
    pub fn isolated(variables: &[&str], f: &str) -> Self {
        ProblemSpec {
            mode: Mode::Isolated,
            variables: variables.iter().map(|s| s.to_string()).collect(),
            f: Some(f.to_string()),
            precision: None,
            j: None,
            j_prime: None,
            exponents: None,
            residues: None,
            window: None,
            degree_bound: None,
            extension: Extension::Off,
            check: Check::Certify,
        }
    }

    /// A normal-crossing problem for the monomial `f` with zero residues.
    pub fn nc_monomial(variables: &[&str], f: &str, window: (Q, Q)) -> Self {
        ProblemSpec {
            mode: Mode::NcMonomial,
            window: Some((Rat(window.0), Rat(window.1))),
            ..ProblemSpec::isolated(variables, f)
        }
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::InvalidProblem(e.to_string()))
    }

    /// A problem document, or a corpus entry holding one under `problem`.
    pub fn from_document(text: &str) -> Result<Self, Error> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::InvalidProblem(e.to_string()))?;
        let inner = match value {
            serde_json::Value::Object(mut map) if map.contains_key("problem") => map.remove("problem").unwrap(),
            other => other,
        };
        serde_json::from_value(inner).map_err(|e| Error::InvalidProblem(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem documents always serialize")
    }

    fn check_variables(&self) -> Result<Arc<Vec<String>>, Error> {
        for (i, v) in self.variables.iter().enumerate() {
            let mut chars = v.chars();
            let ok = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && chars.all(|c| c.is_alphanumeric() || c == '_');
            if !ok {
                return invalid(format!("bad variable name {v:?}"));
            }
            if self.variables[..i].contains(v) {
                return invalid(format!("variable {v:?} listed twice"));
            }
        }
        Ok(Arc::new(self.variables.clone()))
    }

    pub fn function(&self) -> Result<MPoly<Q>, Error> {
        let vars = self.check_variables()?;
        let Some(f) = &self.f else {
            return invalid("missing field `f`");
        };
        Ok(parse(f, &vars)?)
    }

    fn index_of(&self, name: &str) -> Result<usize, Error> {
        match self.variables.iter().position(|v| v == name) {
            Some(i) => Ok(i),
            None => invalid(format!("unknown variable {name:?}")),
        }
    }

    fn indices(&self, names: &[String]) -> Result<Vec<usize>, Error> {
        let mut out = names.iter().map(|n| self.index_of(n)).collect::<Result<Vec<_>, _>>()?;
        out.sort_unstable();
        if out.windows(2).any(|w| w[0] == w[1]) {
            return invalid("index set lists a variable twice");
        }
        Ok(out)
    }

    /// The normal-crossing problem. `J` and the exponents come from `f`
    /// when it is given, and must agree with explicit fields.
    pub fn nc_problem(&self) -> Result<NCProblem, Error> {
        let vars = self.check_variables()?;
        let n = vars.len();
        let mut exponents = vec![0u32; n];
        if let Some(map) = &self.exponents {
            for (name, &e) in map {
                exponents[self.index_of(name)?] = e;
            }
        }
        let mut j = match &self.j {
            Some(names) => Some(self.indices(names)?),
            None => None,
        };
        if self.f.is_some() {
            let f = self.function()?;
            if f.len() != 1 {
                return invalid("nc-monomial mode needs f to be a single monomial");
            }
            let (m, _) = f.leading_term().expect("one term");
            let from_f: Vec<u32> = m.exponents().to_vec();
            let j_f: Vec<usize> = (0..n).filter(|&i| from_f[i] > 0).collect();
            if self.exponents.is_some() && exponents != from_f {
                return invalid("exponents disagree with f");
            }
            if j.as_ref().is_some_and(|j| *j != j_f) {
                return invalid("J disagrees with f");
            }
            exponents = from_f;
            j = Some(j_f);
        }
        let Some(j) = j.or_else(|| self.exponents.as_ref().map(|_| (0..n).filter(|&i| exponents[i] > 0).collect()))
        else {
            return invalid("nc-monomial mode needs f, J or exponents");
        };
        let j_prime = match &self.j_prime {
            Some(names) => self.indices(names)?,
            None => j.clone(),
        };
        let mut residues = vec![Q::from_integer(0.into()); n];
        if let Some(map) = &self.residues {
            for (name, r) in map {
                let i = self.index_of(name)?;
                if !j_prime.contains(&i) {
                    return invalid(format!("residue given for {name:?}, which is not in J'"));
                }
                residues[i] = r.0.clone();
            }
        }
        let prob = NCProblem {
            n,
            j,
            j_prime,
            exponents,
            residues,
            window: self.window.as_ref().map(|(a, b)| (a.0.clone(), b.0.clone())),
            degree_bound: self.degree_bound,
        };
        prob.validate()?;
        Ok(prob)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn rationals() {
        assert_eq!("5/6".parse::<Rat>().unwrap(), Rat(q(5, 6)));
        assert_eq!(" -2 / 4 ".parse::<Rat>().unwrap(), Rat(q(-1, 2)));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        let r: Vec<Rat> = serde_json::from_str(r#"[1, "1/3"]"#).unwrap();
        assert_eq!(r, vec![Rat(q(1, 1)), Rat(q(1, 3))]);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"["1","1/3"]"#);
    }

    #[test]
    fn parse_documents() {
        let spec = ProblemSpec::from_json(r#"{"mode": "isolated", "variables": ["x", "y"], "f": "x^2 + y^3"}"#).unwrap();
        assert_eq!(spec, ProblemSpec::isolated(&["x", "y"], "x^2 + y^3"));
        assert_eq!(ProblemSpec::from_json(&spec.to_json()).unwrap(), spec);
        assert!(ProblemSpec::from_json(r#"{"mode": "isolated", "variables": [], "g": "x"}"#).is_err());
        assert!(ProblemSpec::from_json(r#"{"mode": "other", "variables": []}"#).is_err());
    }

    #[test]
    fn variable_names() {
        let dup = ProblemSpec::isolated(&["x", "x"], "x");
        assert!(matches!(dup.function(), Err(Error::InvalidProblem(_))));
        let bad = ProblemSpec::isolated(&["1x"], "x");
        assert!(matches!(bad.function(), Err(Error::InvalidProblem(_))));
    }

    #[test]
    fn nc_from_monomial() {
        let spec = ProblemSpec::nc_monomial(&["x", "y", "z"], "x^2*y", (q(0, 1), q(1, 1)));
        let p = spec.nc_problem().unwrap();
        assert_eq!(p.j, vec![0, 1]);
        assert_eq!(p.j_prime, vec![0, 1]);
        assert_eq!(p.exponents, vec![2, 1, 0]);

        let mut with_boundary = spec.clone();
        with_boundary.f = None;
        with_boundary.exponents = Some([("x".to_string(), 2), ("y".to_string(), 1)].into());
        with_boundary.j_prime = Some(vec!["z".into(), "x".into(), "y".into()]);
        with_boundary.residues = Some([("z".to_string(), Rat(q(1, 3)))].into());
        let p = with_boundary.nc_problem().unwrap();
        assert_eq!(p.j, vec![0, 1]);
        assert_eq!(p.j_prime, vec![0, 1, 2]);
        assert_eq!(p.residues[2], q(1, 3));

        let not_monomial = ProblemSpec::nc_monomial(&["x", "y"], "x + y", (q(0, 1), q(1, 1)));
        assert!(not_monomial.nc_problem().is_err());
        let mut clash = spec.clone();
        clash.exponents = Some([("x".to_string(), 3)].into());
        assert!(clash.nc_problem().is_err());
    }
}
