//! JSON scenario files and their resolution into typed instances.
//!
//! ```json
//! {
//!   "theorem": "zvp",
//!   "space": { "n": 2, "d": [[0, 1], [2, 0]] },
//!   "potential": { "phi": [2, 0] },
//!   "normal": { "kind": "inv1p" },
//!   "weight": { "kind": "anchor", "a": 0 },
//!   "u": 0
//! }
//! ```
//!
//! `space` may instead be `{ "seed": 7, "n": 5 }` to use a generated space.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::almost_metric::{AlmostMetricTable, PointId};
use crate::equilibrium::Bifunction;
use crate::error::{Error, Result};
use crate::generate;
use crate::normal_fn::NormalFunction;
use crate::report::{unwrap_ext, wrap_ext, ExtReal};
use crate::solver::Potential;
use crate::zhong::{weight_from_anchor, weight_infimal, Weight};

/// What a scenario asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selector {
    Evp,
    EvpLocal,
    Zvp,
    ZvpLocal,
    Eq,
    EqZhong,
    Bkp,
    Validate,
    Properties,
}

impl Selector {
    pub const ALL: [Selector; 9] = [
        Selector::Evp,
        Selector::EvpLocal,
        Selector::Zvp,
        Selector::ZvpLocal,
        Selector::Eq,
        Selector::EqZhong,
        Selector::Bkp,
        Selector::Validate,
        Selector::Properties,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Selector::Evp => "evp",
            Selector::EvpLocal => "evp-local",
            Selector::Zvp => "zvp",
            Selector::ZvpLocal => "zvp-local",
            Selector::Eq => "eq",
            Selector::EqZhong => "eq-zhong",
            Selector::Bkp => "bkp",
            Selector::Validate => "validate",
            Selector::Properties => "properties",
        }
    }

    /// Fields a scenario must carry for this selector.
    pub fn required_fields(self) -> &'static [&'static str] {
        match self {
            Selector::Evp => &["potential", "u"],
            Selector::EvpLocal => &["potential", "u", "rho"],
            Selector::Zvp => &["potential", "normal", "weight", "u"],
            Selector::ZvpLocal => &["potential", "normal", "weight", "u", "rho"],
            Selector::Eq => &["bifunction", "u"],
            Selector::EqZhong => &["bifunction", "normal", "weight", "u"],
            Selector::Bkp => &["bifunction", "u"],
            Selector::Validate => &[],
            Selector::Properties => &["normal"],
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Selector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Selector::ALL
            .into_iter()
            .find(|sel| sel.as_str() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown theorem selector {s:?}")))
    }
}

/// A space file: `{ "n": 2, "d": [[0, 1], [2, 0]], "name": "..." }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub n: usize,
    pub d: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl SpaceFile {
    pub fn check_size(&self) -> Result<()> {
        if self.d.len() != self.n {
            return Err(Error::Malformed(format!("space declares n = {} but has {} rows", self.n, self.d.len())));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    Table(SpaceFile),
    Generated { seed: u64, n: usize },
}

impl SpaceSpec {
    /// The raw table, unvalidated.
    pub fn table(&self) -> Result<Vec<Vec<f64>>> {
        match self {
            SpaceSpec::Table(file) => {
                file.check_size()?;
                Ok(file.d.clone())
            }
            SpaceSpec::Generated { seed, n } => Ok(generate::space_from_seed(*seed, *n)?.rows()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub phi: Vec<ExtReal>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BifunctionSpec {
    #[serde(rename = "F")]
    pub f: Vec<Vec<ExtReal>>,
}

impl BifunctionSpec {
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.f.iter().map(|r| unwrap_ext(r)).collect()
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        Self { f: rows.iter().map(|r| wrap_ext(r)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WeightSpec {
    Anchor { a: PointId },
    Infimal { g: Vec<f64> },
    Explicit { values: Vec<f64> },
}

impl WeightSpec {
    pub fn resolve(&self, d: &AlmostMetricTable) -> Result<Weight> {
        let w = match self {
            WeightSpec::Anchor { a } => weight_from_anchor(d, *a)?,
            WeightSpec::Infimal { g } => weight_infimal(d, g)?,
            WeightSpec::Explicit { values } => Weight::new(values.clone())?,
        };
        if w.len() != d.n() {
            return Err(Error::Malformed(format!("weight has {} entries for a space of size {}", w.len(), d.n())));
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<Selector>,
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bifunction: Option<BifunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal: Option<NormalFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<PointId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
}

/// A scenario with every table validated and typed.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: Option<String>,
    pub d: AlmostMetricTable,
    pub phi: Option<Potential>,
    pub bifunction: Option<Bifunction>,
    pub normal: Option<NormalFunction>,
    pub weight: Option<Weight>,
    pub u: Option<PointId>,
    pub rho: Option<f64>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("scenario: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Checks that the selector's required fields are present and that
    /// declared sizes agree. Both failures are input errors.
    pub fn check_shape(&self, selector: Selector) -> Result<()> {
        let present = |field: &str| match field {
            "potential" => self.potential.is_some(),
            "bifunction" => self.bifunction.is_some(),
            "normal" => self.normal.is_some(),
            "weight" => self.weight.is_some(),
            "u" => self.u.is_some(),
            "rho" => self.rho.is_some(),
            _ => true,
        };
        let missing: Vec<_> = selector.required_fields().iter().filter(|f| !present(f)).collect();
        if !missing.is_empty() {
            return Err(Error::Malformed(format!("selector {selector} needs field(s) {missing:?}")));
        }
        let n = match &self.space {
            SpaceSpec::Table(file) => {
                file.check_size()?;
                file.n
            }
            SpaceSpec::Generated { n, .. } => *n,
        };
        let mismatch = |what: &str, len: usize| {
            Err(Error::Malformed(format!("{what} has {len} entries for a space of size {n}")))
        };
        if let Some(p) = &self.potential {
            if p.phi.len() != n {
                return mismatch("potential", p.phi.len());
            }
        }
        if let Some(b) = &self.bifunction {
            if b.f.len() != n || b.f.iter().any(|r| r.len() != n) {
                return mismatch("bifunction", b.f.len());
            }
        }
        if let Some(WeightSpec::Explicit { values: v } | WeightSpec::Infimal { g: v }) = &self.weight {
            if v.len() != n {
                return mismatch("weight", v.len());
            }
        }
        if let Some(u) = self.u {
            if u >= n {
                return Err(Error::Malformed(format!("start point {u} outside a space of size {n}")));
            }
        }
        Ok(())
    }

    /// Builds typed objects. Invalid tables surface as precondition errors.
    pub fn resolve(&self, tol: f64) -> Result<Instance> {
        let d = AlmostMetricTable::new(&self.space.table()?, tol)?;
        let phi = self.potential.as_ref().map(|p| Potential::new(unwrap_ext(&p.phi))).transpose()?;
        let bifunction = self.bifunction.as_ref().map(|b| Bifunction::new(&b.rows(), tol)).transpose()?;
        let weight = self.weight.as_ref().map(|w| w.resolve(&d)).transpose()?;
        Ok(Instance {
            name: self.name.clone(),
            d,
            phi,
            bifunction,
            normal: self.normal.clone(),
            weight,
            u: self.u,
            rho: self.rho,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::TAU_AXIOM;

    const FIXTURE: &str = r#"{
        "theorem": "zvp",
        "space": { "n": 2, "d": [[0, 1], [2, 0]], "name": "two-point" },
        "potential": { "phi": [2, 0] },
        "normal": { "kind": "inv1p" },
        "weight": { "kind": "anchor", "a": 0 },
        "u": 0
    }"#;

    #[test]
    fn parse_and_resolve_fixture() {
        let s = Scenario::from_json(FIXTURE).unwrap();
        assert_eq!(s.theorem, Some(Selector::Zvp));
        s.check_shape(Selector::Zvp).unwrap();
        let inst = s.resolve(TAU_AXIOM).unwrap();
        assert_eq!(inst.d.rows(), vec![vec![0.0, 1.0], vec![2.0, 0.0]]);
        assert_eq!(inst.weight.unwrap().values(), [0.0, 1.0]);
        assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn missing_fields_are_input_errors() {
        let s = Scenario::from_json(FIXTURE).unwrap();
        let err = s.check_shape(Selector::ZvpLocal).unwrap_err();
        assert!(err.is_input_error());
        assert!(err.to_string().contains("rho"));
        assert!(s.check_shape(Selector::Eq).is_err());
        assert!(s.check_shape(Selector::Validate).is_ok());
    }

    #[test]
    fn size_mismatch_detected() {
        let text = FIXTURE.replace(r#""phi": [2, 0]"#, r#""phi": [2, 0, 1]"#);
        let s = Scenario::from_json(&text).unwrap();
        assert!(s.check_shape(Selector::Zvp).unwrap_err().is_input_error());
        let text = FIXTURE.replace(r#""n": 2"#, r#""n": 3"#);
        assert!(Scenario::from_json(&text).unwrap().check_shape(Selector::Validate).is_err());
    }

    #[test]
    fn unknown_fields_and_selectors_rejected() {
        assert!(Scenario::from_json(&FIXTURE.replace(r#""u": 0"#, r#""u": 0, "bogus": 1"#)).is_err());
        assert!("zvp-local".parse::<Selector>().is_ok());
        assert!("zvpx".parse::<Selector>().is_err());
    }

    #[test]
    fn invalid_space_is_precondition() {
        let text = FIXTURE.replace("[[0, 1], [2, 0]]", "[[0, 1], [0, 0]]");
        let err = Scenario::from_json(&text).unwrap().resolve(TAU_AXIOM).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn generated_space_and_infinities() {
        let text = r#"{ "space": { "seed": 3, "n": 4 }, "potential": { "phi": [1, "inf", 0, 2] },
                        "bifunction": { "F": [[0, "inf"], ["-inf", 0]] } }"#;
        let s = Scenario::from_json(text).unwrap();
        assert!(s.check_shape(Selector::Validate).is_err());
        let text = r#"{ "space": { "seed": 3, "n": 4 }, "potential": { "phi": [1, "inf", 0, 2] } }"#;
        let inst = Scenario::from_json(text).unwrap().resolve(TAU_AXIOM).unwrap();
        assert_eq!(inst.d.n(), 4);
        assert_eq!(inst.phi.unwrap().domain(), vec![0, 2, 3]);
    }
}
