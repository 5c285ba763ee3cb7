//! Equilibrium points of bifunctions.
//!
//! A bifunction `F(x, y)` takes values in the extended reals. It is reflexive
//! when `F(x, x) = 0` and triangular when `F(x, z) <= F(x, y) + F(y, z)`
//! wherever the right side is defined (it is not for `inf + (-inf)`). A point
//! `v` is an equilibrium of `G` when `G(v, x) >= 0` for all `x`.
//!
//! All three solvers reduce to a descent on the row potential
//! `F_u(x) = F(u, x)` and then transfer its conclusions back to `F` through
//! the triangular inequality.

use serde::{Deserialize, Serialize};

use crate::almost_metric::{AlmostMetricTable, PointId};
use crate::error::{Error, Result};
use crate::normal_fn::NormalFunction;
use crate::report::{unwrap_ext, wrap_ext, ExtReal, Inequality, ValidationReport, Witness};
use crate::solver::{evp_point, Certificate, NamedValue, Potential, Premise, Theorem};
use crate::zhong::{build_zhong, Weight, ZhongMetric};

/// Square table of extended reals. [`Bifunction::new`] enforces
/// reflexivity and triangularity.
#[derive(Debug, Clone, PartialEq)]
pub struct Bifunction {
    n: usize,
    values: Vec<f64>,
}

impl Bifunction {
    pub fn new(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let report = validate_bifunction(rows, tol)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::Precondition(format!("not a valid bifunction: {} at {:?}", v.axiom, v.witness)));
        }
        Ok(Self::from_rows_unchecked(rows))
    }

    fn from_rows_unchecked(rows: &[Vec<f64>]) -> Self {
        Self { n: rows.len(), values: rows.iter().flatten().copied().collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: PointId, y: PointId) -> f64 {
        self.values[x * self.n + y]
    }

    pub fn row(&self, x: PointId) -> &[f64] {
        &self.values[x * self.n..(x + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn is_real_valued(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

impl Serialize for Bifunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().iter().map(|r| wrap_ext(r)).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Bifunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Vec<ExtReal>>::deserialize(d)?;
        let rows: Vec<Vec<f64>> = raw.iter().map(|r| unwrap_ext(r)).collect();
        Bifunction::new(&rows, crate::report::TAU_AXIOM).map_err(serde::de::Error::custom)
    }
}

/// Extended sum, `None` for `inf + (-inf)`.
fn ext_sum(a: f64, b: f64) -> Option<f64> {
    let s = a + b;
    (!s.is_nan()).then_some(s)
}

/// Exact-zero diagonal and every triangle whose right side exists.
pub fn validate_bifunction(rows: &[Vec<f64>], tol: f64) -> Result<ValidationReport> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Malformed("empty bifunction table".into()));
    }
    for (x, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Malformed(format!("row {x} has {} entries, expected {n}", row.len())));
        }
        if let Some(y) = row.iter().position(|v| v.is_nan()) {
            return Err(Error::Malformed(format!("entry ({x}, {y}) is NaN")));
        }
    }
    let mut report = ValidationReport::new();
    for x in 0..n {
        report.checked += 1;
        if rows[x][x] != 0.0 {
            report.violation("reflexivity", Witness::Points(vec![x]), rows[x][x].abs());
        }
    }
    let mut skipped = 0usize;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                match ext_sum(rows[x][y], rows[y][z]) {
                    Some(rhs) => report.check_le("triangularity", || Witness::Points(vec![x, y, z]), rows[x][z], rhs, tol),
                    None => skipped += 1,
                }
            }
        }
    }
    if skipped > 0 {
        report.note(format!("{skipped} triangle(s) skipped: right side inf + (-inf) does not exist"));
    }
    Ok(report)
}

/// `F(x, y) = phi(y) - phi(x)` with `inf - inf = 0`.
pub fn potential_to_bifunction(phi: &Potential) -> Bifunction {
    let n = phi.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let (a, b) = (phi.at(y), phi.at(x));
                    if a == f64::INFINITY && b == f64::INFINITY {
                        0.0
                    } else {
                        a - b
                    }
                })
                .collect()
        })
        .collect();
    Bifunction::from_rows_unchecked(&rows)
}

/// `mu(x) = sup_y -F(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marginal {
    #[serde(serialize_with = "ser_ext_vec", deserialize_with = "de_ext_vec")]
    pub mu: Vec<f64>,
}

fn ser_ext_vec<S: serde::Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    wrap_ext(v).serialize(s)
}

fn de_ext_vec<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    Ok(unwrap_ext(&Vec::<ExtReal>::deserialize(d)?))
}

impl Marginal {
    pub fn at(&self, x: PointId) -> f64 {
        self.mu[x]
    }

    pub fn domain(&self) -> Vec<PointId> {
        (0..self.mu.len()).filter(|&x| self.mu[x] < f64::INFINITY).collect()
    }

    /// Nonempty domain.
    pub fn is_proper(&self) -> bool {
        self.mu.iter().any(|m| *m < f64::INFINITY)
    }
}

pub fn marginal(f: &Bifunction) -> Marginal {
    let mu = (0..f.n()).map(|x| f.row(x).iter().map(|v| -v).fold(f64::NEG_INFINITY, f64::max)).collect();
    Marginal { mu }
}

/// `-inf F(u, .)`, the other route to `mu(u)`.
pub fn row_infimum_gap(f: &Bifunction, u: PointId) -> f64 {
    -f.row(u).iter().copied().fold(f64::INFINITY, f64::min)
}

fn row_potential(f: &Bifunction, u: PointId, mu: &Marginal) -> Result<Potential> {
    if u >= f.n() {
        return Err(Error::Domain(format!("point {u} outside a space of size {}", f.n())));
    }
    if mu.at(u) == f64::INFINITY {
        return Err(Error::Domain(format!("point {u} is not in the domain of mu (mu = inf)")));
    }
    Potential::new(f.row(u).to_vec())
}

/// Transfers a descent certificate on `F_u` (over `e`) back to `F`.
fn transfer(theorem: Theorem, f: &Bifunction, e: &AlmostMetricTable, mu_u: f64, base: Certificate) -> Certificate {
    let (u, v) = (base.u, base.v);
    // the chain steps compare values of F_u, which are already in terms of F
    let steps = base.inequalities.into_iter().filter(|q| q.name.starts_with("chain-step")).collect();
    let mut cert = Certificate { theorem, u, v, chain: base.chain, inequalities: steps, premise: None, notes: vec![] };
    let neg = -f.get(u, v);
    cert.inequalities.push(Inequality::le("descent", e.get(u, v), neg));
    cert.inequalities.push(Inequality::le("marginal", neg, mu_u));
    for x in e.points().filter(|&x| x != v) {
        cert.inequalities.push(Inequality::lt(format!("maximality[{x}]"), -f.get(v, x), e.get(v, x)));
    }
    for x in e.points().filter(|&x| x != v) {
        // F_u(v) - F_u(x) >= -F(v, x) by triangularity
        let gap = f.get(u, v) - f.get(u, x);
        cert.inequalities.push(Inequality::le(format!("transfer[{x}]"), -f.get(v, x), gap));
    }
    for x in e.points() {
        let g = f.get(v, x) + e.get(v, x);
        cert.inequalities.push(Inequality::le(format!("equilibrium[{x}]"), 0.0, g));
    }
    cert.notes.push("semi descending completeness holds on a finite space".into());
    cert
}

fn check_tables(f: &Bifunction, d: &AlmostMetricTable, e: &AlmostMetricTable) -> Result<()> {
    if f.n() != d.n() || d.n() != e.n() {
        return Err(Error::Malformed(format!("size mismatch: F is {}, d is {}, e is {}", f.n(), d.n(), e.n())));
    }
    Ok(())
}

/// Equilibrium point of `G = F + e` above `u`, with the chain
/// `e(u, v) <= -F(u, v) <= mu(u)` and `e(v, x) > -F(v, x)` for `x != v`.
///
/// `d` only fixes the ambient space; on a finite space every almost metric
/// `e` is `d`-compatible.
pub fn equilibrium_via_e(u: PointId, f: &Bifunction, d: &AlmostMetricTable, e: &AlmostMetricTable) -> Result<Certificate> {
    check_tables(f, d, e)?;
    let mu = marginal(f);
    let fu = row_potential(f, u, &mu)?;
    let base = evp_point(u, e, &fu)?;
    Ok(transfer(Theorem::Eq, f, e, mu.at(u), base))
}

/// Equilibrium point of `G(x, y) = F(x, y) + b(G(x)) d(x, y)` through the
/// derived metric. With `rho`, also checks the premise
/// `mu(u) <= B(G(u) + rho) - B(G(u))` and certifies the localization
/// `d(u, v) <= rho`, `b(G(u) + rho) d(u, v) <= -F(u, v)`.
#[allow(clippy::too_many_arguments)]
pub fn equilibrium_zhong(
    u: PointId,
    f: &Bifunction,
    d: &AlmostMetricTable,
    normal: &NormalFunction,
    weight: &Weight,
    rho: Option<f64>,
    tol: f64,
) -> Result<Certificate> {
    let z = build_zhong(d, weight, normal, tol)?;
    equilibrium_zhong_on(u, f, &z, rho)
}

pub fn equilibrium_zhong_on(u: PointId, f: &Bifunction, z: &ZhongMetric, rho: Option<f64>) -> Result<Certificate> {
    let (d, e, g, b) = (z.base(), z.derived(), z.weight(), z.normal());
    check_tables(f, d, e)?;
    let mu = marginal(f);
    let mut premise = None;
    if let Some(rho) = rho {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::Premise { what: "radius must be positive and finite".into(), lhs: 0.0, rhs: rho });
        }
        if u >= f.n() {
            return Err(Error::Domain(format!("point {u} outside a space of size {}", f.n())));
        }
        let budget = b.increment(g.at(u), rho);
        if !(mu.at(u) <= budget) {
            return Err(Error::Premise { what: "mu(u) <= B(G(u) + rho) - B(G(u))".into(), lhs: mu.at(u), rhs: budget });
        }
        let reach = b.inverse_increment(g.at(u), mu.at(u))?;
        premise = Some(Premise {
            name: "mu(u) <= B(G(u) + rho) - B(G(u))".into(),
            rho,
            lhs: mu.at(u),
            rhs: budget,
            derived: vec![NamedValue::new("B^-1(B(G(u)) + mu(u)) - G(u)", reach)],
        });
    }
    let mut cert = equilibrium_via_e(u, f, d, e)?;
    cert.theorem = Theorem::EqZhong;
    let v = cert.v;
    let duv = d.get(u, v);
    cert.inequalities.push(Inequality::le("sandwich-lower", b.b(g.at(u) + duv) * duv, e.get(u, v)));
    for x in d.points().filter(|&x| x != v) {
        cert.inequalities.push(Inequality::le(format!("weight-cap[{x}]"), e.get(v, x), b.b(g.at(v)) * d.get(v, x)));
    }
    for x in d.points() {
        let gw = f.get(v, x) + b.b(g.at(v)) * d.get(v, x);
        cert.inequalities.push(Inequality::le(format!("weighted-equilibrium[{x}]"), 0.0, gw));
    }
    if let Some(p) = &premise {
        let reach = p.derived[0].value;
        cert.inequalities.push(Inequality::le("reach", duv, reach));
        cert.inequalities.push(Inequality::le("reach-within-radius", reach, p.rho));
        cert.inequalities.push(Inequality::le("radius", duv, p.rho));
        cert.inequalities.push(Inequality::le("weight-growth", g.at(v), g.at(u) + p.rho));
        cert.inequalities.push(Inequality::le("rate", b.b(g.at(u) + p.rho) * duv, -f.get(u, v)));
        cert.inequalities.push(Inequality::le("sign", f.get(u, v), 0.0));
    }
    cert.premise = premise;
    Ok(cert)
}

/// Equilibrium of `g = f + d` for a real-valued bifunction, by running the
/// descent on `h(x) = f(u, x)` over `d` and transferring back.
pub fn bkp_point(u: PointId, f: &Bifunction, d: &AlmostMetricTable) -> Result<Certificate> {
    if !f.is_real_valued() {
        return Err(Error::Domain("bifunction must be real-valued (no infinite entries)".into()));
    }
    if f.n() != d.n() {
        return Err(Error::Malformed(format!("size mismatch: f is {}, d is {}", f.n(), d.n())));
    }
    if u >= f.n() {
        return Err(Error::Domain(format!("point {u} outside a space of size {}", f.n())));
    }
    let h = Potential::new(f.row(u).to_vec())?;
    let base = evp_point(u, d, &h)?;
    let (v, mut cert) = (base.v, Certificate { theorem: Theorem::Bkp, ..base });
    cert.inequalities.retain(|q| q.name.starts_with("chain-step"));
    // h(u) = 0 turns the descent bound into d(u, v) <= -f(u, v)
    cert.inequalities.push(Inequality::le("descent", d.get(u, v), h.at(u) - h.at(v)));
    cert.inequalities.push(Inequality::le("marginal", -f.get(u, v), -h.infimum()));
    for x in d.points().filter(|&x| x != v) {
        cert.inequalities.push(Inequality::lt(format!("maximality[{x}]"), -f.get(v, x), d.get(v, x)));
    }
    for x in d.points().filter(|&x| x != v) {
        cert.inequalities.push(Inequality::le(format!("transfer[{x}]"), -f.get(v, x), h.at(v) - h.at(x)));
    }
    for x in d.points() {
        cert.inequalities.push(Inequality::le(format!("equilibrium[{x}]"), 0.0, f.get(v, x) + d.get(v, x)));
    }
    cert.notes.push("row boundedness and lower semicontinuity hold on a finite space".into());
    Ok(cert)
}
