//! Normal functions `b` on `[0, inf)` and their integrals `B(t) = int_0^t b`.
//!
//! A normal function is decreasing and strictly positive and its integral
//! diverges, so `B` is an increasing bijection of `[0, inf)` onto itself. The
//! four closed forms below carry exact `B` and `B^-1`; tabulated functions
//! are piecewise linear, integrated exactly by the trapezoid rule and
//! inverted by bracketing plus bisection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{ValidationReport, Witness, TAU_INV, TAU_QUAD};

/// Doublings of the upper bracket before the inverse gives up. Enough to
/// reach the top of the `f64` range, which logarithmic `B` needs.
pub const MAX_DOUBLINGS: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormalFunction {
    /// `b = 1`, so `B` is the identity.
    One,
    /// `b(t) = 1 / (1 + t)`, `B(t) = ln(1 + t)`.
    Inv1p,
    /// `b(t) = 1 / sqrt(1 + t)`, `B(t) = 2 (sqrt(1 + t) - 1)`.
    InvSqrt1p,
    /// `b = c` for a constant `c > 0`.
    Const { c: f64 },
    Table(Tabulated),
}

/// Piecewise-linear `b` through `(t, b)` samples starting at `t = 0`,
/// continued by its last value past the final sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TabulatedSamples", into = "TabulatedSamples")]
pub struct Tabulated {
    knots: Vec<f64>,
    values: Vec<f64>,
    /// `cumulative[i] = B(knots[i])`.
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TabulatedSamples {
    samples: Vec<[f64; 2]>,
}

impl TryFrom<TabulatedSamples> for Tabulated {
    type Error = Error;
    fn try_from(s: TabulatedSamples) -> Result<Self> {
        Tabulated::new(&s.samples)
    }
}

impl From<Tabulated> for TabulatedSamples {
    fn from(t: Tabulated) -> Self {
        Self { samples: t.samples() }
    }
}

impl Tabulated {
    /// Structural checks only: strictly ascending knots from 0 and finite
    /// nonnegative values. Normality is left to [`check_normality`].
    pub fn new(samples: &[[f64; 2]]) -> Result<Self> {
        let Some(first) = samples.first() else {
            return Err(Error::Malformed("tabulated normal function needs at least one sample".into()));
        };
        if first[0] != 0.0 {
            return Err(Error::Malformed(format!("first sample must be at t = 0, got {}", first[0])));
        }
        for w in samples.windows(2) {
            if !(w[1][0] > w[0][0]) {
                return Err(Error::Malformed(format!("sample abscissae not strictly ascending at {}", w[1][0])));
            }
        }
        if let Some(bad) = samples.iter().find(|s| !s[0].is_finite() || !s[1].is_finite() || s[1] < 0.0) {
            return Err(Error::Malformed(format!("invalid sample {bad:?}")));
        }
        let knots: Vec<f64> = samples.iter().map(|s| s[0]).collect();
        let values: Vec<f64> = samples.iter().map(|s| s[1]).collect();
        let mut cumulative = Vec::with_capacity(knots.len());
        cumulative.push(0.0);
        for i in 1..knots.len() {
            let area = 0.5 * (values[i - 1] + values[i]) * (knots[i] - knots[i - 1]);
            cumulative.push(cumulative[i - 1] + area);
        }
        Ok(Self { knots, values, cumulative })
    }

    pub fn samples(&self) -> Vec<[f64; 2]> {
        self.knots.iter().zip(&self.values).map(|(&t, &b)| [t, b]).collect()
    }

    /// Index `i` of the segment `[knots[i], knots[i + 1])` containing `t`.
    fn segment(&self, t: f64) -> usize {
        self.knots.partition_point(|&k| k <= t).saturating_sub(1)
    }

    fn eval(&self, t: f64) -> f64 {
        let i = self.segment(t);
        if i + 1 >= self.knots.len() {
            return self.values[self.values.len() - 1];
        }
        let (t0, t1) = (self.knots[i], self.knots[i + 1]);
        let w = (t - t0) / (t1 - t0);
        self.values[i] + w * (self.values[i + 1] - self.values[i])
    }

    fn integral(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let t0 = self.knots[i];
        // trapezoid over the partial segment is exact for a linear interpolant
        self.cumulative[i] + 0.5 * (self.values[i] + self.eval(t)) * (t - t0)
    }
}

impl NormalFunction {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Malformed(format!("constant normal function needs 0 < c < inf, got {c}")));
        }
        Ok(Self::Const { c })
    }

    pub fn tabulated(samples: &[[f64; 2]]) -> Result<Self> {
        Tabulated::new(samples).map(Self::Table)
    }

    /// The four shipped closed forms, with `c = 2` for the constant.
    pub fn shipped() -> Vec<NormalFunction> {
        vec![Self::One, Self::Inv1p, Self::InvSqrt1p, Self::Const { c: 2.0 }]
    }

    pub fn name(&self) -> String {
        match self {
            Self::One => "one".into(),
            Self::Inv1p => "inv1p".into(),
            Self::InvSqrt1p => "invsqrt1p".into(),
            Self::Const { c } => format!("const({c})"),
            Self::Table(t) => format!("table({} samples)", t.knots.len()),
        }
    }

    pub fn has_closed_form(&self) -> bool {
        !matches!(self, Self::Table(_))
    }

    pub fn density(&self, t: f64) -> Result<f64> {
        check_arg("b", t)?;
        Ok(self.b(t))
    }

    pub fn integral(&self, t: f64) -> Result<f64> {
        check_arg("B", t)?;
        Ok(self.big_b(t))
    }

    /// `B^-1(s)`: exact for closed forms, bracket doubling plus bisection
    /// otherwise.
    pub fn inverse_integral(&self, s: f64) -> Result<f64> {
        check_arg("B^-1", s)?;
        match self {
            Self::One => Ok(s),
            Self::Const { c } => Ok(s / c),
            Self::Inv1p => Ok(s.exp_m1()),
            Self::InvSqrt1p => Ok(s + 0.25 * s * s),
            Self::Table(_) => self.inverse_integral_numeric(s),
        }
    }

    pub(crate) fn b(&self, t: f64) -> f64 {
        match self {
            Self::One => 1.0,
            Self::Const { c } => *c,
            Self::Inv1p => 1.0 / (1.0 + t),
            Self::InvSqrt1p => 1.0 / (1.0 + t).sqrt(),
            Self::Table(tab) => tab.eval(t),
        }
    }

    pub(crate) fn big_b(&self, t: f64) -> f64 {
        match self {
            Self::One => t,
            Self::Const { c } => c * t,
            Self::Inv1p => t.ln_1p(),
            Self::InvSqrt1p => 2.0 * ((1.0 + t).sqrt() - 1.0),
            Self::Table(tab) => tab.integral(t),
        }
    }

    /// `B(a + h) - B(a)` for `a, h >= 0`, in a cancellation-free form when
    /// one exists. For `b = 1` this returns `h` bit for bit.
    pub fn increment(&self, a: f64, h: f64) -> f64 {
        match self {
            Self::One => h,
            Self::Const { c } => c * h,
            Self::Inv1p => (h / (1.0 + a)).ln_1p(),
            Self::InvSqrt1p => 2.0 * h / ((1.0 + a + h).sqrt() + (1.0 + a).sqrt()),
            Self::Table(tab) => tab.integral(a + h) - tab.integral(a),
        }
    }

    /// `B^-1(B(a) + s) - a`, the inverse of `h -> increment(a, h)`.
    pub fn inverse_increment(&self, a: f64, s: f64) -> Result<f64> {
        check_arg("B^-1", s)?;
        match self {
            Self::One => Ok(s),
            Self::Const { c } => Ok(s / c),
            Self::Inv1p => Ok((1.0 + a) * s.exp_m1()),
            Self::InvSqrt1p => Ok(s * (1.0 + a).sqrt() + 0.25 * s * s),
            Self::Table(tab) => Ok(self.inverse_integral_numeric(tab.integral(a) + s)? - a),
        }
    }

    /// Adaptive Simpson quadrature of `b` over `[0, t]`, independent of the
    /// closed forms.
    pub fn integral_numeric(&self, t: f64, tol: f64) -> Result<f64> {
        check_arg("B", t)?;
        Ok(adaptive_simpson(|x| self.b(x), 0.0, t, tol))
    }

    /// Bracket doubling on `[0, hi]` then bisection on the increasing `B`.
    /// Usable for every kind; the closed forms use it only in cross-checks.
    pub fn inverse_integral_numeric(&self, s: f64) -> Result<f64> {
        check_arg("B^-1", s)?;
        if s == 0.0 {
            return Ok(0.0);
        }
        let mut hi = 1.0f64;
        let mut doublings = 0;
        while self.big_b(hi) < s {
            hi *= 2.0;
            doublings += 1;
            if doublings > MAX_DOUBLINGS {
                return Err(Error::Divergence { target: s, doublings: MAX_DOUBLINGS });
            }
        }
        let mut lo = if doublings == 0 { 0.0 } else { 0.5 * hi };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.big_b(mid) < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = if (self.big_b(lo) - s).abs() <= (self.big_b(hi) - s).abs() { lo } else { hi };
        let residual = (self.big_b(t) - s).abs();
        if residual > TAU_INV * s.max(1.0) {
            return Err(Error::CheckFailed(format!("B^-1({s}) bisection residual {residual:e}")));
        }
        Ok(t)
    }
}

fn check_arg(what: &str, t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        Err(Error::Domain(format!("{what} is defined on [0, inf), got {t}")))
    } else {
        Ok(())
    }
}

/// `b(t)`; same as [`NormalFunction::density`].
pub fn eval_b(f: &NormalFunction, t: f64) -> Result<f64> {
    f.density(t)
}

/// `B(t)`; same as [`NormalFunction::integral`].
#[allow(non_snake_case)]
pub fn eval_B(f: &NormalFunction, t: f64) -> Result<f64> {
    f.integral(t)
}

/// `B^-1(s)`; same as [`NormalFunction::inverse_integral`].
#[allow(non_snake_case)]
pub fn invert_B(f: &NormalFunction, s: f64) -> Result<f64> {
    f.inverse_integral(s)
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Positivity and monotone decrease of `b` on an ascending grid, and
/// optionally that `B` exceeds `bound` somewhere.
pub fn check_normality(f: &NormalFunction, grid: &[f64], bound: Option<f64>) -> Result<ValidationReport> {
    if grid.iter().any(|t| t.is_nan() || *t < 0.0) {
        return Err(Error::Malformed("normality grid must be nonnegative".into()));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Malformed("normality grid must be sorted ascending".into()));
    }
    let mut report = ValidationReport::new();
    let values: Vec<f64> = grid.iter().map(|&t| f.b(t)).collect();
    for (&t, &v) in grid.iter().zip(&values) {
        report.checked += 1;
        if !(v > 0.0) {
            report.violation("positivity", Witness::Values(vec![t]), -v);
        }
    }
    for i in 1..grid.len() {
        report.checked += 1;
        if values[i] > values[i - 1] {
            report.violation("increasing", Witness::Values(vec![grid[i - 1], grid[i]]), values[i] - values[i - 1]);
        }
    }
    if let Some(bound) = bound {
        report.checked += 1;
        match f.inverse_integral_numeric(bound) {
            Ok(t) => report.note(format!("B exceeds {bound} by t = {t}")),
            Err(_) => report.violation("divergence", Witness::Values(vec![bound]), bound - f.big_b(f64::MAX.sqrt())),
        }
    }
    report.note("normality certified on the sampled grid only; divergence only up to the requested bound");
    Ok(report)
}

/// One sample for the integral property suite: `t < s`, a shift `h >= 0`
/// and a convex weight `lambda` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropertySample {
    pub t: f64,
    pub s: f64,
    pub shift: f64,
    pub lambda: f64,
}

/// Seeded samples with `0 <= t < s <= max`.
pub fn random_property_samples(seed: u64, count: usize, max: f64) -> Vec<PropertySample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a: f64 = rng.random_range(0.0..max);
        let b: f64 = rng.random_range(0.0..max);
        if a == b {
            continue;
        }
        out.push(PropertySample {
            t: a.min(b),
            s: a.max(b),
            shift: rng.random_range(0.0..max),
            lambda: rng.random_range(0.0..=1.0),
        });
    }
    out
}

/// Checks the structural inequalities of `B` on each sample.
///
/// * `mean-value`: `b(s)(s - t) <= B(s) - B(t) <= b(t)(s - t)`
/// * `almost-concavity`: `B(s + h) - B(s) <= B(t + h) - B(t)`
/// * `concavity`: `B(t + l(s - t)) >= B(t) + l(B(s) - B(t))`
/// * `sub-additivity`: `B(t + s) <= B(t) + B(s)`
/// * `inverse-super-additivity`: `B^-1(t + s) >= B^-1(t) + B^-1(s)`
///
/// The mean-value quotient is checked multiplied through by `s - t`.
/// Tolerances are `tol * (1 + |rhs|)`.
pub fn check_p2_properties(f: &NormalFunction, samples: &[PropertySample], tol: f64) -> Result<ValidationReport> {
    let mut report = ValidationReport::new();
    let mut families = [true; 5];
    for p in samples {
        let (t, s, h, l) = (p.t, p.s, p.shift, p.lambda);
        if !(t >= 0.0 && s > t && h >= 0.0 && (0.0..=1.0).contains(&l)) {
            return Err(Error::Malformed(format!("invalid property sample {p:?}")));
        }
        let w = || Witness::Values(vec![t, s, h, l]);
        let (bt, bs) = (f.big_b(t), f.big_b(s));
        let mut le = |family: usize, name: &str, lhs: f64, rhs: f64| {
            let before = report.violations.len();
            report.check_le(name, w, lhs, rhs, tol * (1.0 + rhs.abs()));
            if report.violations.len() > before {
                families[family] = false;
            }
        };
        le(0, "mean-value-lower", f.b(s) * (s - t), bs - bt);
        le(0, "mean-value-upper", bs - bt, f.b(t) * (s - t));
        le(1, "almost-concavity", f.big_b(s + h) - bs, f.big_b(t + h) - bt);
        le(2, "concavity", bt + l * (bs - bt), f.big_b(t + l * (s - t)));
        le(3, "sub-additivity", f.big_b(t + s), bt + bs);
        let inv = |x: f64| f.inverse_integral(x);
        le(4, "inverse-super-additivity", inv(t)? + inv(s)?, inv(t + s)?);
    }
    if families[1] != families[2] {
        report.note("almost-concavity and concavity disagree on this sample set");
    }
    Ok(report)
}

/// Both sides of the change of variables
/// `int_p^q b = (q - p) int_0^1 b(p + tau (q - p)) dtau`, each by quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reparametrization {
    pub direct: f64,
    pub rescaled: f64,
}

pub fn reparametrization(f: &NormalFunction, p: f64, q: f64) -> Result<Reparametrization> {
    check_arg("b", p)?;
    if !(q > p) {
        return Err(Error::Domain(format!("need p < q, got p = {p}, q = {q}")));
    }
    let direct = adaptive_simpson(|x| f.b(x), p, q, TAU_QUAD);
    let rescaled = (q - p) * adaptive_simpson(|tau| f.b(p + tau * (q - p)), 0.0, 1.0, TAU_QUAD / (q - p));
    Ok(Reparametrization { direct, rescaled })
}
