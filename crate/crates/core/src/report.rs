//! Validation reports, checked inequalities and the JSON encoding of
//! extended reals shared by every module.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Default tolerance for axiom and inequality checks.
pub const TAU_AXIOM: f64 = 1e-9;
/// Absolute tolerance of the adaptive quadrature.
pub const TAU_QUAD: f64 = 1e-10;
/// Residual tolerance `|B(t) - s|` of the numeric inverse.
pub const TAU_INV: f64 = 1e-8;
/// Tolerance of the `d -> e -> d` round trip.
pub const TAU_ROUNDTRIP: f64 = 1e-7;

/// The tolerance set used by checkers. Defaults are the module constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub axiom: f64,
    pub quad: f64,
    pub inv: f64,
    pub roundtrip: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { axiom: TAU_AXIOM, quad: TAU_QUAD, inv: TAU_INV, roundtrip: TAU_ROUNDTRIP }
    }
}

/// What a violation points at: table indices or sampled real arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Points(Vec<usize>),
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Witness,
    /// How far the checked relation misses, always positive.
    #[serde(with = "ext_f64")]
    pub magnitude: f64,
}

/// Outcome of an axiom or property scan. `passed` is true iff there are
/// no violations; `notes` carries caveats such as finite-evidence limits.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub checked: usize,
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self { passed: true, ..Default::default() }
    }

    pub fn violation(&mut self, axiom: impl Into<String>, witness: Witness, magnitude: f64) {
        self.violations.push(Violation { axiom: axiom.into(), witness, magnitude });
        self.passed = false;
    }

    /// Counts one check and records a violation when `lhs <= rhs + tol` fails.
    pub fn check_le(&mut self, axiom: &str, witness: impl FnOnce() -> Witness, lhs: f64, rhs: f64, tol: f64) {
        self.checked += 1;
        if !le_tol(lhs, rhs, tol) {
            self.violation(axiom, witness(), lhs - rhs);
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.checked += other.checked;
        self.passed &= other.passed;
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
    }

    /// Largest violation magnitude, 0 when passed.
    pub fn worst(&self) -> f64 {
        self.violations.iter().map(|v| v.magnitude).fold(0.0, f64::max)
    }
}

/// `lhs <= rhs` up to `tol`, with `+inf <= +inf` and `-inf <= x` accepted.
pub fn le_tol(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs || lhs - rhs <= tol
}

/// One certified relation `lhs <= rhs` (or `lhs < rhs` when `strict`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub name: String,
    #[serde(with = "ext_f64")]
    pub lhs: f64,
    #[serde(with = "ext_f64")]
    pub rhs: f64,
    /// `rhs - lhs`; `+inf` whenever `lhs = -inf` or `rhs = +inf` with the other side finite.
    #[serde(with = "ext_f64")]
    pub slack: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub strict: bool,
}

impl Inequality {
    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self { name: name.into(), lhs, rhs, slack: slack(lhs, rhs), strict: false }
    }

    pub fn lt(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self { strict: true, ..Self::le(name, lhs, rhs) }
    }

    /// Strict relations need slack > 0 exactly; the others slack >= -tol.
    pub fn holds(&self, tol: f64) -> bool {
        if self.strict {
            self.slack > 0.0
        } else {
            self.slack >= -tol
        }
    }
}

fn slack(lhs: f64, rhs: f64) -> f64 {
    if lhs == rhs {
        // also covers inf = inf
        0.0
    } else {
        rhs - lhs
    }
}

/// Serde adapter writing non-finite reals as `"inf"` / `"-inf"` strings.
pub mod ext_f64 {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        ExtReal(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        ExtReal::deserialize(d).map(|x| x.0)
    }
}

/// An extended real in JSON: a number, or one of `"inf"`, `"+inf"`, `"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ExtReal(pub f64);

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = self.0;
        if x == f64::INFINITY {
            s.serialize_str("inf")
        } else if x == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else {
            s.serialize_f64(x)
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(ExtReal(x)),
            Raw::Str(s) => match s.as_str() {
                "inf" | "+inf" | "Infinity" => Ok(ExtReal(f64::INFINITY)),
                "-inf" | "-Infinity" => Ok(ExtReal(f64::NEG_INFINITY)),
                other => Err(serde::de::Error::custom(format!("expected a number or \"inf\"/\"-inf\", got {other:?}"))),
            },
        }
    }
}

pub(crate) fn unwrap_ext(values: &[ExtReal]) -> Vec<f64> {
    values.iter().map(|x| x.0).collect()
}

pub(crate) fn wrap_ext(values: &[f64]) -> Vec<ExtReal> {
    values.iter().copied().map(ExtReal).collect()
}
