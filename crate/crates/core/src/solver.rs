//! Variational points by ordered descent.
//!
//! Points are ordered by `x <= y` iff `e(x, y) + phi(y) <= phi(x)`. Starting
//! from `u`, the descent repeatedly moves to the successor of smallest
//! potential (lowest index on ties) until the current point has no strict
//! successor. On a finite space the result is a maximal element above `u`,
//! which gives both the descent bound `e(u, v) <= phi(u) - phi(v)` and strict
//! maximality `e(v, x) > phi(v) - phi(x)` for every `x != v`.
//!
//! Every solver returns a [`Certificate`] listing each inequality it claims
//! together with its numeric slack.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::almost_metric::{AlmostMetricTable, PointId, PseudometricTable};
use crate::error::{Error, Result};
use crate::normal_fn::NormalFunction;
use crate::report::{ext_f64, unwrap_ext, wrap_ext, ExtReal, Inequality, ValidationReport, Witness};
use crate::zhong::{build_zhong, Weight, ZhongMetric};

/// An inf-proper potential with values in `R u {+inf}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    values: Vec<f64>,
    inf: f64,
}

impl Potential {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((x, v)) = values.iter().enumerate().find(|(_, v)| v.is_nan() || **v == f64::NEG_INFINITY) {
            return Err(Error::Malformed(format!("potential at {x} is {v}; values lie in R u {{+inf}}")));
        }
        let inf = values.iter().copied().fold(f64::INFINITY, f64::min);
        if inf == f64::INFINITY {
            return Err(Error::Precondition("potential has empty domain (every value is +inf)".into()));
        }
        Ok(Self { values, inf })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn at(&self, x: PointId) -> f64 {
        self.values[x]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `phi_* = inf phi`.
    pub fn infimum(&self) -> f64 {
        self.inf
    }

    /// `psi(x) = phi(x) - phi_*`.
    pub fn excess(&self, x: PointId) -> f64 {
        self.values[x] - self.inf
    }

    pub fn in_domain(&self, x: PointId) -> bool {
        self.values.get(x).is_some_and(|v| v.is_finite())
    }

    pub fn domain(&self) -> Vec<PointId> {
        (0..self.len()).filter(|&x| self.in_domain(x)).collect()
    }
}

impl Serialize for Potential {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        wrap_ext(&self.values).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Potential {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<ExtReal>::deserialize(d)?;
        Potential::new(unwrap_ext(&raw)).map_err(serde::de::Error::custom)
    }
}

/// Which statement a certificate instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Evp,
    EvpLocal,
    Zvp,
    ZvpLocal,
    Eq,
    EqZhong,
    Bkp,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theorem::Evp => "evp",
            Theorem::EvpLocal => "evp-local",
            Theorem::Zvp => "zvp",
            Theorem::ZvpLocal => "zvp-local",
            Theorem::Eq => "eq",
            Theorem::EqZhong => "eq-zhong",
            Theorem::Bkp => "bkp",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    #[serde(with = "ext_f64")]
    pub value: f64,
}

impl NamedValue {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self { name: name.into(), value }
    }
}

/// The quantitative premise of a local statement, `lhs <= rhs`, and the
/// intermediate quantities derived from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Premise {
    pub name: String,
    pub rho: f64,
    #[serde(with = "ext_f64")]
    pub lhs: f64,
    #[serde(with = "ext_f64")]
    pub rhs: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derived: Vec<NamedValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub theorem: Theorem,
    pub u: PointId,
    pub v: PointId,
    pub chain: Vec<PointId>,
    pub inequalities: Vec<Inequality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub premise: Option<Premise>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn holds(&self, tol: f64) -> bool {
        self.inequalities.iter().all(|q| q.holds(tol))
    }

    pub fn failures(&self, tol: f64) -> Vec<&Inequality> {
        self.inequalities.iter().filter(|q| !q.holds(tol)).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Inequality> {
        self.inequalities.iter().find(|q| q.name == name)
    }

    /// The smallest slack, `+inf` for an empty certificate.
    pub fn min_slack(&self) -> f64 {
        self.inequalities.iter().map(|q| q.slack).fold(f64::INFINITY, f64::min)
    }

    fn push(&mut self, q: Inequality) {
        self.inequalities.push(q);
    }
}

/// How the descent picks the next point among the strict successors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// Exact argmin of the potential.
    #[default]
    Exact,
    /// Lowest-index successor within `2^-k` of the infimum at step `k`.
    Relaxed,
}

/// `x <= y` iff `e(x, y) + phi(y) <= phi(x)`. Always true when `phi(x) = +inf`.
pub fn leq(x: PointId, y: PointId, e: &PseudometricTable, phi: &Potential) -> bool {
    e.get(x, y) + phi.at(y) <= phi.at(x)
}

fn check_sizes(e: &PseudometricTable, phi: &Potential) -> Result<()> {
    if e.n() != phi.len() {
        return Err(Error::Malformed(format!("potential has {} values for a space of size {}", phi.len(), e.n())));
    }
    Ok(())
}

fn check_start(u: PointId, phi: &Potential) -> Result<()> {
    if !phi.in_domain(u) {
        return Err(Error::Domain(format!("point {u} is not in the domain of the potential")));
    }
    Ok(())
}

/// `{ y : x <= y }`, which always contains `x`.
pub fn successor_set(x: PointId, e: &PseudometricTable, phi: &Potential) -> Result<BTreeSet<PointId>> {
    check_sizes(e, phi)?;
    check_start(x, phi)?;
    Ok(e.points().filter(|&y| leq(x, y, e, phi)).collect())
}

/// Points of the domain whose only successor is themselves.
pub fn maximal_elements(e: &PseudometricTable, phi: &Potential) -> Result<BTreeSet<PointId>> {
    check_sizes(e, phi)?;
    Ok(phi
        .domain()
        .into_iter()
        .filter(|&v| e.points().all(|y| y == v || !leq(v, y, e, phi)))
        .collect())
}

/// Successors of `c` with strictly smaller potential. On an almost metric
/// these are exactly the successors other than `c`.
fn strict_successors<'a>(c: PointId, e: &'a PseudometricTable, phi: &'a Potential) -> impl Iterator<Item = PointId> + 'a {
    e.points().filter(move |&y| phi.at(y) < phi.at(c) && leq(c, y, e, phi))
}

/// The descent chain from `u`; the last entry is the variational point.
pub fn descent_chain(u: PointId, e: &PseudometricTable, phi: &Potential, selection: Selection) -> Result<Vec<PointId>> {
    check_sizes(e, phi)?;
    check_start(u, phi)?;
    let mut chain = vec![u];
    let mut c = u;
    for step in 0.. {
        let Some(best) = strict_successors(c, e, phi).map(|y| phi.at(y)).reduce(f64::min) else {
            break;
        };
        let cutoff = match selection {
            Selection::Exact => best,
            Selection::Relaxed => best + (-(step as f64)).exp2(),
        };
        c = strict_successors(c, e, phi)
            .find(|&y| phi.at(y) <= cutoff)
            .expect("the minimizer itself passes the cutoff");
        chain.push(c);
    }
    Ok(chain)
}

fn descent_certificate(theorem: Theorem, e: &PseudometricTable, phi: &Potential, chain: Vec<PointId>) -> Certificate {
    let (u, v) = (chain[0], *chain.last().expect("nonempty"));
    let mut cert = Certificate { theorem, u, v, chain, inequalities: vec![], premise: None, notes: vec![] };
    for (k, w) in cert.chain.windows(2).enumerate() {
        cert.inequalities.push(Inequality::lt(format!("chain-step[{k}]"), phi.at(w[1]), phi.at(w[0])));
    }
    cert.push(Inequality::le("descent", e.get(u, v), phi.at(u) - phi.at(v)));
    for x in e.points().filter(|&x| x != v) {
        cert.push(Inequality::lt(format!("maximality[{x}]"), phi.at(v) - phi.at(x), e.get(v, x)));
    }
    cert
}

/// Variational point above `u` for an almost metric `e`.
pub fn evp_point(u: PointId, e: &AlmostMetricTable, phi: &Potential) -> Result<Certificate> {
    evp_point_with(u, e, phi, Selection::Exact)
}

pub fn evp_point_with(u: PointId, e: &AlmostMetricTable, phi: &Potential, selection: Selection) -> Result<Certificate> {
    let chain = descent_chain(u, e.as_pseudometric(), phi, selection)?;
    Ok(descent_certificate(Theorem::Evp, e.as_pseudometric(), phi, chain))
}

fn require_positive_radius(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Premise { what: "radius must be positive and finite".into(), lhs: 0.0, rhs: rho });
    }
    Ok(())
}

/// [`evp_point`] under the premise `phi(u) - phi_* <= rho`, which bounds
/// `e(u, v) <= rho`.
pub fn evp_local(u: PointId, rho: f64, e: &AlmostMetricTable, phi: &Potential) -> Result<Certificate> {
    check_sizes(e.as_pseudometric(), phi)?;
    check_start(u, phi)?;
    require_positive_radius(rho)?;
    let excess = phi.excess(u);
    if excess > rho {
        return Err(Error::Premise { what: "phi(u) - inf phi <= rho".into(), lhs: excess, rhs: rho });
    }
    let mut cert = evp_point(u, e, phi)?;
    cert.theorem = Theorem::EvpLocal;
    cert.premise = Some(Premise { name: "phi(u) - inf phi <= rho".into(), rho, lhs: excess, rhs: rho, derived: vec![] });
    let v = cert.v;
    cert.push(Inequality::le("radius", e.get(u, v), rho));
    cert.push(Inequality::le("monotone", phi.at(v), phi.at(u)));
    Ok(cert)
}

/// Checks the conclusions a variational point `v` enjoys over a general
/// pseudometric:
/// 1. `e(v, x) <= phi(v) - phi(x)` forces `phi(v) = phi(x)` and `e(v, x) = 0`;
/// 2. `e(v, x) >= phi(v) - phi(x)` for all `x`;
/// 3. the inequality in 2. is strict whenever `e(v, x) > 0`.
pub fn prop1_conclusions(v: PointId, e: &PseudometricTable, phi: &Potential, tol: f64) -> Result<ValidationReport> {
    check_sizes(e, phi)?;
    check_start(v, phi)?;
    let mut report = ValidationReport::new();
    for x in e.points() {
        let (exv, gap) = (e.get(v, x), phi.at(v) - phi.at(x));
        report.checked += 3;
        if exv <= gap && !(phi.at(v) == phi.at(x) && exv == 0.0) {
            report.violation("successor-collapse", Witness::Points(vec![v, x]), gap - exv);
        }
        if gap > exv + tol {
            report.violation("weak-maximality", Witness::Points(vec![v, x]), gap - exv);
        }
        if exv > 0.0 && !(gap < exv) {
            report.violation("strict-maximality", Witness::Points(vec![v, x]), gap - exv);
        }
        if x != v && exv == 0.0 {
            report.note(format!("non-sufficient witness: e({v}, {x}) = 0"));
        }
    }
    Ok(report)
}

/// Variational point for the derived metric built from `(d, weight, f)`.
pub fn zvp_point(
    u: PointId,
    d: &AlmostMetricTable,
    phi: &Potential,
    f: &NormalFunction,
    weight: &Weight,
    tol: f64,
) -> Result<Certificate> {
    let z = build_zhong(d, weight, f, tol)?;
    zvp_point_on(u, &z, phi)
}

/// [`zvp_point`] with a prebuilt derived metric. Adds the lower sandwich
/// `b(G(u) + d(u, v)) d(u, v) <= e(u, v)` and the caps
/// `e(v, x) <= b(G(v)) d(v, x)` to the descent certificate on `e`.
pub fn zvp_point_on(u: PointId, z: &ZhongMetric, phi: &Potential) -> Result<Certificate> {
    let mut cert = evp_point(u, z.derived(), phi)?;
    cert.theorem = Theorem::Zvp;
    let (d, e, g, f) = (z.base(), z.derived(), z.weight(), z.normal());
    let v = cert.v;
    cert.push(Inequality::le("sandwich-lower", f.b(g.at(u) + d.get(u, v)) * d.get(u, v), e.get(u, v)));
    for x in d.points().filter(|&x| x != v) {
        cert.push(Inequality::le(format!("weight-cap[{x}]"), e.get(v, x), f.b(g.at(v)) * d.get(v, x)));
    }
    cert.notes.push("d-compatibility of e holds on a finite space".into());
    Ok(cert)
}

/// [`zvp_point`] under `phi(u) - phi_* <= B(G(u) + rho) - B(G(u))`, which
/// gives `d(u, v) <= rho`, `G(v) <= G(u) + rho` and
/// `b(G(u) + rho) d(u, v) <= phi(u) - phi(v)`.
#[allow(clippy::too_many_arguments)]
pub fn zvp_local(
    u: PointId,
    rho: f64,
    d: &AlmostMetricTable,
    phi: &Potential,
    f: &NormalFunction,
    weight: &Weight,
    tol: f64,
) -> Result<Certificate> {
    let z = build_zhong(d, weight, f, tol)?;
    zvp_local_on(u, rho, &z, phi)
}

pub fn zvp_local_on(u: PointId, rho: f64, z: &ZhongMetric, phi: &Potential) -> Result<Certificate> {
    check_sizes(z.base().as_pseudometric(), phi)?;
    check_start(u, phi)?;
    require_positive_radius(rho)?;
    let (d, g, f) = (z.base(), z.weight(), z.normal());
    let excess = phi.excess(u);
    let budget = f.increment(g.at(u), rho);
    if excess > budget {
        return Err(Error::Premise { what: "phi(u) - inf phi <= B(G(u) + rho) - B(G(u))".into(), lhs: excess, rhs: budget });
    }
    let mut cert = zvp_point_on(u, z, phi)?;
    cert.theorem = Theorem::ZvpLocal;
    let v = cert.v;
    let reach = f.inverse_increment(g.at(u), excess)?;
    cert.premise = Some(Premise {
        name: "phi(u) - inf phi <= B(G(u) + rho) - B(G(u))".into(),
        rho,
        lhs: excess,
        rhs: budget,
        derived: vec![NamedValue::new("B^-1(B(G(u)) + psi(u)) - G(u)", reach)],
    });
    let duv = d.get(u, v);
    cert.push(Inequality::le("reach", duv, reach));
    cert.push(Inequality::le("reach-within-radius", reach, rho));
    cert.push(Inequality::le("radius", duv, rho));
    cert.push(Inequality::le("weight-growth", g.at(v), g.at(u) + rho));
    cert.push(Inequality::le("rate", f.b(g.at(u) + rho) * duv, phi.at(u) - phi.at(v)));
    cert.push(Inequality::le("monotone", phi.at(v), phi.at(u)));
    Ok(cert)
}
