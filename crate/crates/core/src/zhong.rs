//! Almost nonexpansive weights and the derived metric
//! `e(x, y) = B(G(x) + d(x, y)) - B(G(x))`.
//!
//! The derived table is again an almost metric whenever `d` is one and the
//! weight `G` satisfies `G(x) - G(y) + d(x, y) >= 0`. [`build_zhong`] checks
//! that conclusion on every table it builds instead of assuming it.

use serde::{Deserialize, Serialize};

use crate::almost_metric::{validate_almost_metric, AlmostMetricTable, FinitePrefixSequence, PointId};
use crate::error::{Error, Result};
use crate::normal_fn::NormalFunction;
use crate::report::{Inequality, ValidationReport, Witness};

/// Per-point nonnegative weight `G(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<f64>);

impl Weight {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((x, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Malformed(format!("weight at {x} is {v}; weights are finite and nonnegative")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    #[inline]
    pub fn at(&self, x: PointId) -> f64 {
        self.0[x]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Distance from a fixed anchor, `G(x) = d(a, x)`.
pub fn weight_from_anchor(d: &AlmostMetricTable, a: PointId) -> Result<Weight> {
    if a >= d.n() {
        return Err(Error::Domain(format!("anchor {a} outside a space of size {}", d.n())));
    }
    Weight::new(d.row(a).to_vec())
}

/// Infimal convolution `G(x) = min_a (g(a) + d(a, x))`, which is almost
/// nonexpansive for any nonnegative `g`.
pub fn weight_infimal(d: &AlmostMetricTable, g: &[f64]) -> Result<Weight> {
    if g.len() != d.n() {
        return Err(Error::Malformed(format!("offsets have {} entries for a space of size {}", g.len(), d.n())));
    }
    if let Some(v) = g.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::Malformed(format!("offset {v} is not a finite nonnegative real")));
    }
    let values = d
        .points()
        .map(|x| d.points().map(|a| g[a] + d.get(a, x)).fold(f64::INFINITY, f64::min))
        .collect();
    Weight::new(values)
}

/// Checks `G(x) - G(y) + d(x, y) >= -tol` for all pairs.
pub fn validate_weight(weight: &Weight, d: &AlmostMetricTable, tol: f64) -> Result<ValidationReport> {
    if weight.len() != d.n() {
        return Err(Error::Malformed(format!("weight has {} entries for a space of size {}", weight.len(), d.n())));
    }
    let mut report = ValidationReport::new();
    for x in d.points() {
        for y in d.points() {
            let (gx, gy) = (weight.at(x), weight.at(y));
            report.check_le("nonexpansiveness", || Witness::Points(vec![x, y]), gy, gx + d.get(x, y), tol);
        }
    }
    Ok(report)
}

/// The derived metric with everything it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct ZhongMetric {
    d: AlmostMetricTable,
    weight: Weight,
    f: NormalFunction,
    e: AlmostMetricTable,
}

impl ZhongMetric {
    pub fn base(&self) -> &AlmostMetricTable {
        &self.d
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn normal(&self) -> &NormalFunction {
        &self.f
    }

    pub fn derived(&self) -> &AlmostMetricTable {
        &self.e
    }

    pub fn n(&self) -> usize {
        self.d.n()
    }
}

/// Materializes `e` as a full table and checks that it is an almost metric.
pub fn build_zhong(d: &AlmostMetricTable, weight: &Weight, f: &NormalFunction, tol: f64) -> Result<ZhongMetric> {
    let wr = validate_weight(weight, d, tol)?;
    if let Some(v) = wr.violations.first() {
        return Err(Error::Precondition(format!("weight is not almost nonexpansive at {:?}", v.witness)));
    }
    let n = d.n();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|x| (0..n).map(|y| if x == y { 0.0 } else { f.increment(weight.at(x), d.get(x, y)) }).collect())
        .collect();
    let report = validate_almost_metric(&rows, tol)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::CheckFailed(format!("derived table is not an almost metric: {} at {:?}", v.axiom, v.witness)));
    }
    Ok(ZhongMetric { d: d.clone(), weight: weight.clone(), f: f.clone(), e: AlmostMetricTable::from_rows_unchecked(&rows) })
}

/// `d(x, y) = B^-1(B(G(x)) + e(x, y)) - G(x)` for every pair.
pub fn recover_d(z: &ZhongMetric) -> Result<Vec<Vec<f64>>> {
    z.e.points()
        .map(|x| z.e.points().map(|y| z.f.inverse_increment(z.weight.at(x), z.e.get(x, y))).collect())
        .collect()
}

/// Largest entrywise gap between [`recover_d`] and the base table.
pub fn roundtrip_error(z: &ZhongMetric) -> Result<f64> {
    let back = recover_d(z)?;
    let mut worst = 0.0f64;
    for x in z.d.points() {
        for y in z.d.points() {
            worst = worst.max((back[x][y] - z.d.get(x, y)).abs());
        }
    }
    Ok(worst)
}

/// Entrywise sandwich `b(G(x) + d) d <= e <= b(G(x)) d` and cap `e <= B(d)`.
pub fn lemma2_bounds(z: &ZhongMetric, tol: f64) -> ValidationReport {
    let mut report = ValidationReport::new();
    for x in z.d.points() {
        let gx = z.weight.at(x);
        for y in z.d.points() {
            let (dxy, exy) = (z.d.get(x, y), z.e.get(x, y));
            let w = || Witness::Points(vec![x, y]);
            report.check_le("sandwich-lower", w, z.f.b(gx + dxy) * dxy, exy, tol);
            report.check_le("sandwich-upper", w, exy, z.f.b(gx) * dxy, tol);
            report.check_le("cap", w, exy, z.f.big_b(dxy), tol);
        }
    }
    report.note("lower semicontinuity of y -> e(x, y) holds vacuously on a finite space");
    report
}

/// Output of [`compatibility_certificate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityCertificate {
    pub sequence: Vec<PointId>,
    pub mu: f64,
    /// `B^-1(B(G(x_0)) + 2 mu)`, a common bound on `G(x_i) + d(x_i, x_j)`.
    pub nu: f64,
    pub b_nu: f64,
    pub inequalities: Vec<Inequality>,
    pub passed: bool,
}

impl CompatibilityCertificate {
    /// `d`-Cauchy modulus: `e(x_i, x_j) <= delta` forces `d(x_i, x_j) <= delta / b(nu)`.
    pub fn d_modulus(&self, delta: f64) -> f64 {
        delta / self.b_nu
    }
}

/// Replays the argument that an `e`-bounded sequence is uniformly controlled
/// in `d`: with `e(x_i, x_j) <= mu` for `i <= j`, every
/// `G(x_i) + d(x_i, x_j)` stays below `nu` and so `e >= b(nu) d` on the prefix.
pub fn compatibility_certificate(
    z: &ZhongMetric,
    seq: &FinitePrefixSequence,
    mu: f64,
    tol: f64,
) -> Result<CompatibilityCertificate> {
    let pts = seq.points();
    if let Some(p) = pts.iter().find(|&&p| p >= z.n()) {
        return Err(Error::Domain(format!("point {p} outside a space of size {}", z.n())));
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::Malformed(format!("mu must be finite and nonnegative, got {mu}")));
    }
    let e_sup = prefix_sup(z.derived(), pts);
    if e_sup > mu + tol {
        return Err(Error::Premise { what: "prefix bound e(x_i, x_j) <= mu".into(), lhs: e_sup, rhs: mu });
    }
    let (f, g0) = (&z.f, z.weight.at(pts[0]));
    let nu = f.inverse_increment(g0, 2.0 * mu)? + g0;
    let first_step = f.inverse_increment(g0, mu)? + g0;
    let b_nu = f.b(nu);
    let mut ineqs = Vec::new();
    for (i, &xi) in pts.iter().enumerate() {
        ineqs.push(Inequality::le(format!("weight-bound[{i}]"), z.weight.at(xi), first_step));
        for (j, &xj) in pts.iter().enumerate().skip(i) {
            let (dij, eij) = (z.d.get(xi, xj), z.e.get(xi, xj));
            ineqs.push(Inequality::le(format!("nu-bound[{i},{j}]"), z.weight.at(xi) + dij, nu));
            ineqs.push(Inequality::le(format!("lower-rate[{i},{j}]"), b_nu * dij, eij));
        }
    }
    let passed = ineqs.iter().all(|q| q.holds(tol));
    Ok(CompatibilityCertificate { sequence: pts.to_vec(), mu, nu, b_nu, inequalities: ineqs, passed })
}

/// `max e(x_i, x_j)` over `i <= j`.
pub fn prefix_sup(e: &AlmostMetricTable, pts: &[PointId]) -> f64 {
    let mut sup = 0.0f64;
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i..] {
            sup = sup.max(e.get(p, q));
        }
    }
    sup
}
