//! Finite pseudometric and almost metric tables.
//!
//! A table is an `n x n` array of nonnegative reals `e(x, y)`. It is a
//! *pseudometric* here when it is triangular and has a zero diagonal, and an
//! *almost metric* when in addition `e(x, y) = 0` only for `x = y`. Symmetry
//! is never assumed.
//!
//! Sequence notions (strongly asymptotic, Cauchy, convergent) are tail
//! properties, so they are decided only for sequences whose tail is known to
//! be constant. Open prefixes report [`Verdict::Undetermined`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{ValidationReport, Witness};

/// Index of a point in a finite space of size `n`.
pub type PointId = usize;

/// A triangular, reflexive table. Construct with [`PseudometricTable::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct PseudometricTable {
    n: usize,
    values: Vec<f64>,
}

/// A pseudometric that is also reflexive sufficient.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostMetricTable(PseudometricTable);

impl PseudometricTable {
    /// Validates `rows` and wraps them. Any axiom violation is reported as a
    /// precondition error naming the first offending witness.
    pub fn new(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let report = validate_pseudometric(rows, tol)?;
        reject_on_violation("pseudometric", &report)?;
        Ok(Self::from_rows_unchecked(rows))
    }

    pub(crate) fn from_rows_unchecked(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        Self { n, values: rows.iter().flatten().copied().collect() }
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
        self.values.chunks(self.n.max(1)).take(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn points(&self) -> std::ops::Range<PointId> {
        0..self.n
    }
}

impl AlmostMetricTable {
    pub fn new(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let report = validate_almost_metric(rows, tol)?;
        reject_on_violation("almost metric", &report)?;
        Ok(Self(PseudometricTable::from_rows_unchecked(rows)))
    }

    pub(crate) fn from_rows_unchecked(rows: &[Vec<f64>]) -> Self {
        Self(PseudometricTable::from_rows_unchecked(rows))
    }

    pub fn as_pseudometric(&self) -> &PseudometricTable {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    #[inline]
    pub fn get(&self, x: PointId, y: PointId) -> f64 {
        self.0.get(x, y)
    }

    pub fn row(&self, x: PointId) -> &[f64] {
        self.0.row(x)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.0.rows()
    }

    pub fn points(&self) -> std::ops::Range<PointId> {
        self.0.points()
    }

    /// Whether `e(x, y) = e(y, x)` holds everywhere.
    pub fn is_symmetric(&self) -> bool {
        self.points().all(|x| self.points().all(|y| self.get(x, y) == self.get(y, x)))
    }
}

fn reject_on_violation(kind: &str, report: &ValidationReport) -> Result<()> {
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::Precondition(format!(
            "not a valid {kind}: {} at {:?} (by {:.3e})",
            v.axiom, v.witness, v.magnitude
        ))),
    }
}

fn check_shape(rows: &[Vec<f64>]) -> Result<usize> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Malformed("empty table; the space must be nonempty".into()));
    }
    for (x, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Malformed(format!("row {x} has {} entries, expected {n}", row.len())));
        }
        for (y, &v) in row.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Malformed(format!("entry ({x}, {y}) = {v} is not a finite nonnegative real")));
            }
        }
    }
    Ok(n)
}

/// Scans all `n^3` triangle inequalities and the diagonal.
///
/// The diagonal must be exactly zero; triangle slack may be as low as `-tol`.
pub fn validate_pseudometric(rows: &[Vec<f64>], tol: f64) -> Result<ValidationReport> {
    let n = check_shape(rows)?;
    let mut report = ValidationReport::new();
    for x in 0..n {
        report.checked += 1;
        if rows[x][x] != 0.0 {
            report.violation("reflexivity", Witness::Points(vec![x]), rows[x][x]);
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (lhs, rhs) = (rows[x][z], rows[x][y] + rows[y][z]);
                report.check_le("triangularity", || Witness::Points(vec![x, y, z]), lhs, rhs, tol);
            }
        }
    }
    Ok(report)
}

/// [`validate_pseudometric`] plus reflexive sufficiency: off-diagonal zeros
/// are reported as `sufficiency` violations at `(x, y)`.
pub fn validate_almost_metric(rows: &[Vec<f64>], tol: f64) -> Result<ValidationReport> {
    let mut report = validate_pseudometric(rows, tol)?;
    for (x, row) in rows.iter().enumerate() {
        for (y, &v) in row.iter().enumerate() {
            if x != y {
                report.checked += 1;
                if v == 0.0 {
                    report.violation("sufficiency", Witness::Points(vec![x, y]), 0.0);
                }
            }
        }
    }
    Ok(report)
}

/// Min-plus (all pairs shortest path) closure of a table with zero diagonal
/// and positive off-diagonal entries. The result is the largest triangular
/// table below `raw`; since every path has positive length it stays
/// sufficient.
pub fn metric_closure(raw: &[Vec<f64>]) -> Result<AlmostMetricTable> {
    let n = check_shape(raw)?;
    for x in 0..n {
        if raw[x][x] != 0.0 {
            return Err(Error::Malformed(format!("diagonal entry ({x}, {x}) = {} must be 0", raw[x][x])));
        }
        for y in 0..n {
            if x != y && raw[x][y] == 0.0 {
                return Err(Error::SufficiencyUnachievable(x, y));
            }
        }
    }
    let mut dist = raw.to_vec();
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i][k];
            for j in 0..n {
                let via = dik + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    Ok(AlmostMetricTable::from_rows_unchecked(&dist))
}

/// How a finite prefix continues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    /// The last listed point repeats forever.
    EventuallyConstant,
    /// Nothing is known beyond the prefix.
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePrefixSequence {
    points: Vec<PointId>,
    tail: Tail,
}

impl FinitePrefixSequence {
    pub fn new(points: Vec<PointId>, tail: Tail) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Malformed("sequence prefix must be nonempty".into()));
        }
        Ok(Self { points, tail })
    }

    pub fn eventually_constant(points: Vec<PointId>) -> Result<Self> {
        Self::new(points, Tail::EventuallyConstant)
    }

    pub fn open(points: Vec<PointId>) -> Result<Self> {
        Self::new(points, Tail::Open)
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    fn check_points(&self, n: usize) -> Result<()> {
        match self.points.iter().find(|&&p| p >= n) {
            Some(p) => Err(Error::Domain(format!("point {p} outside a space of size {n}"))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    Undetermined,
}

impl Verdict {
    pub fn is_decided(self) -> bool {
        self != Verdict::Undetermined
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesDiagnosis {
    pub verdict: Verdict,
    /// Full series value for constant tails, otherwise the prefix sum.
    pub sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchyDiagnosis {
    pub verdict: Verdict,
    /// Largest `e(x_p, x_q)`, `p <= q`, over the second half of the prefix.
    pub tail_gap: f64,
}

/// Strong asymptoticity: convergence of `sum e(x_n, x_{n+1})`.
pub fn is_strasy(seq: &FinitePrefixSequence, e: &PseudometricTable) -> Result<SeriesDiagnosis> {
    seq.check_points(e.n())?;
    let sum = seq.points.windows(2).map(|w| e.get(w[0], w[1])).sum();
    let verdict = match seq.tail {
        // the repeated tail contributes e(c, c) = 0 terms
        Tail::EventuallyConstant => Verdict::Holds,
        Tail::Open => Verdict::Undetermined,
    };
    Ok(SeriesDiagnosis { verdict, sum })
}

pub fn is_cauchy(seq: &FinitePrefixSequence, e: &PseudometricTable) -> Result<CauchyDiagnosis> {
    seq.check_points(e.n())?;
    let pts = &seq.points;
    let half = &pts[pts.len() / 2..];
    let mut tail_gap = 0.0f64;
    for (i, &p) in half.iter().enumerate() {
        for &q in &half[i..] {
            tail_gap = tail_gap.max(e.get(p, q));
        }
    }
    let verdict = match seq.tail {
        Tail::EventuallyConstant => Verdict::Holds,
        Tail::Open => Verdict::Undetermined,
    };
    Ok(CauchyDiagnosis { verdict, tail_gap })
}

/// The set of limits `{ x : e(x_n, x) -> 0 }`, which for a tail constant at
/// `c` is `{ x : e(c, x) = 0 }`.
pub fn e_limits(seq: &FinitePrefixSequence, e: &PseudometricTable) -> Result<BTreeSet<PointId>> {
    seq.check_points(e.n())?;
    if seq.tail == Tail::Open {
        return Err(Error::UndeterminedTail);
    }
    let c = *seq.points.last().expect("nonempty");
    Ok(e.points().filter(|&x| e.get(c, x) == 0.0).collect())
}
