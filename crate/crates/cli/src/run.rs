//! Scenario dispatch and the report it produces.

use std::collections::BTreeMap;

use serde::Serialize;
use zvp_core::almost_metric::validate_almost_metric;
use zvp_core::equilibrium::{bkp_point, equilibrium_via_e, equilibrium_zhong_on, validate_bifunction};
use zvp_core::normal_fn::{check_normality, check_p2_properties, random_property_samples, reparametrization};
use zvp_core::scenario::{Instance, SpaceFile};
use zvp_core::solver::{evp_local, evp_point, zvp_local_on, zvp_point_on};
use zvp_core::zhong::{
    build_zhong, compatibility_certificate, lemma2_bounds, prefix_sup, roundtrip_error, validate_weight, ZhongMetric,
};
use zvp_core::{
    AlmostMetricTable, Certificate, Error, FinitePrefixSequence, NormalFunction, Potential, Scenario, Selector,
    Tolerances, ValidationReport,
};

/// Tolerance for the integral property suite, which compares quotients of
/// differences of `B` rather than raw table entries.
pub const PROPERTY_TOL: f64 = 1e-6;
const NORMALITY_BOUND: f64 = 20.0;
const SAMPLE_MAX: f64 = 20.0;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub tol: Tolerances,
    pub seed: u64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub name: Option<String>,
    pub selector: Option<Selector>,
    pub passed: bool,
    pub exit_code: i32,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub validations: BTreeMap<String, ValidationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Scenario>,
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Malformed(_) => 2,
        Error::CheckFailed(_) => 1,
        _ => 3,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Malformed(_) => "malformed",
        Error::Domain(_) => "domain",
        Error::Precondition(_) => "precondition",
        Error::Premise { .. } => "premise",
        Error::SufficiencyUnachievable(..) => "sufficiency",
        Error::Divergence { .. } => "divergence",
        Error::UndeterminedTail => "undetermined-tail",
        Error::CheckFailed(_) => "check-failed",
    }
}

impl Report {
    fn new(name: Option<String>, selector: Option<Selector>, tol: Tolerances) -> Self {
        Report {
            name,
            selector,
            passed: false,
            exit_code: 1,
            tolerances: tol,
            validations: BTreeMap::new(),
            checks: Vec::new(),
            certificate: None,
            error: None,
            scenario: None,
        }
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { name: name.into(), passed, detail });
    }

    fn finish(mut self) -> Self {
        let cert_ok = self.certificate.as_ref().is_none_or(|c| c.holds(self.tolerances.axiom));
        self.passed = cert_ok && self.validations.values().all(|r| r.passed) && self.checks.iter().all(|c| c.passed);
        self.exit_code = if self.passed { 0 } else { 1 };
        self
    }

    fn failed_with(mut self, err: &Error) -> Self {
        self.passed = false;
        self.exit_code = exit_code_for(err);
        self.error = Some(ErrorInfo { kind: error_kind(err), message: err.to_string() });
        self
    }

    pub fn from_error(name: Option<String>, err: &Error, tol: Tolerances) -> Self {
        Report::new(name, None, tol).failed_with(err)
    }
}

/// Runs one input file. `forced` overrides the scenario's own selector.
pub fn run_text(text: &str, label: Option<String>, forced: Option<Selector>, opts: &Options) -> Report {
    match Scenario::from_json(text) {
        Ok(s) => run_scenario(s, label, forced, opts),
        Err(scenario_err) => match (forced, serde_json::from_str::<SpaceFile>(text)) {
            (Some(Selector::Validate), Ok(space)) => validate_space_file(space, label, opts),
            _ => Report::from_error(label, &scenario_err, opts.tol),
        },
    }
}

fn validate_space_file(space: SpaceFile, label: Option<String>, opts: &Options) -> Report {
    let name = space.name.clone().or(label);
    let mut report = Report::new(name, Some(Selector::Validate), opts.tol);
    let result = space.check_size().and_then(|_| validate_almost_metric(&space.d, opts.tol.axiom));
    match result {
        Ok(r) => {
            report.validations.insert("space".into(), r);
            report.finish()
        }
        Err(e) => report.failed_with(&e),
    }
}

pub fn run_scenario(s: Scenario, label: Option<String>, forced: Option<Selector>, opts: &Options) -> Report {
    let name = s.name.clone().or(label);
    let Some(selector) = forced.or(s.theorem) else {
        let err = Error::Malformed("no theorem selector in the scenario or on the command line".into());
        return Report::from_error(name, &err, opts.tol);
    };
    let mut report = Report::new(name, Some(selector), opts.tol);
    let outcome = s.check_shape(selector).and_then(|_| match selector {
        Selector::Validate => validate(&s, &mut report, opts),
        Selector::Properties => properties(&s, &mut report, opts),
        _ => solve(&s, selector, &mut report, opts),
    });
    report.scenario = Some(s);
    match outcome {
        Ok(()) => report.finish(),
        Err(e) => report.failed_with(&e),
    }
}

fn validate(s: &Scenario, report: &mut Report, opts: &Options) -> zvp_core::Result<()> {
    let tol = opts.tol.axiom;
    let rows = s.space.table()?;
    let space = validate_almost_metric(&rows, tol)?;
    let space_ok = space.passed;
    report.validations.insert("space".into(), space);
    if let Some(p) = &s.potential {
        let values: Vec<f64> = p.phi.iter().map(|x| x.0).collect();
        match Potential::new(values) {
            Ok(phi) => report.check("potential", true, format!("inf = {}, domain size {}", phi.infimum(), phi.domain().len())),
            Err(e) if !e.is_input_error() => report.check("potential", false, e.to_string()),
            Err(e) => return Err(e),
        }
    }
    if let Some(b) = &s.bifunction {
        report.validations.insert("bifunction".into(), validate_bifunction(&b.rows(), tol)?);
    }
    if let Some(f) = &s.normal {
        report.validations.insert("normal".into(), normality(f)?);
    }
    if let (Some(w), true) = (&s.weight, space_ok) {
        let d = AlmostMetricTable::new(&rows, tol)?;
        let g = w.resolve(&d)?;
        report.validations.insert("weight".into(), validate_weight(&g, &d, tol)?);
    }
    Ok(())
}

fn normality(f: &NormalFunction) -> zvp_core::Result<ValidationReport> {
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 * 0.25).collect();
    check_normality(f, &grid, Some(NORMALITY_BOUND))
}

fn properties(s: &Scenario, report: &mut Report, opts: &Options) -> zvp_core::Result<()> {
    let f = s.normal.as_ref().expect("shape checked");
    let tol = opts.tol;
    report.validations.insert("normal".into(), normality(f)?);
    let samples = random_property_samples(opts.seed, opts.count, SAMPLE_MAX);
    report.validations.insert("integral-properties".into(), check_p2_properties(f, &samples, PROPERTY_TOL)?);

    let points = [0.5, 1.0, 2.0, 5.0, 10.0];
    let mut quad = 0.0f64;
    let mut inv = 0.0f64;
    for &t in &points {
        let b = f.integral(t)?;
        quad = quad.max((b - f.integral_numeric(t, tol.quad)?).abs());
        inv = inv.max((f.inverse_integral(b)? - t).abs() / (1.0 + t));
    }
    report.check("quadrature", quad <= tol.inv, format!("max |B - quadrature| = {quad:.3e} at t in {points:?}"));
    report.check("inverse", inv <= tol.inv, format!("max relative |B^-1(B(t)) - t| = {inv:.3e}"));
    let mut rep = 0.0f64;
    for (p, q) in [(0.0, 1.0), (0.5, 2.0), (1.0, 10.0)] {
        let r = reparametrization(f, p, q)?;
        rep = rep.max((r.direct - r.rescaled).abs());
    }
    report.check("reparametrization", rep <= tol.inv, format!("max |direct - rescaled| = {rep:.3e}"));

    if let Some(w) = &s.weight {
        let d = AlmostMetricTable::new(&s.space.table()?, tol.axiom)?;
        let g = w.resolve(&d)?;
        report.validations.insert("weight".into(), validate_weight(&g, &d, tol.axiom)?);
        let z = build_zhong(&d, &g, f, tol.axiom)?;
        report.validations.insert("derived".into(), validate_almost_metric(&z.derived().rows(), tol.axiom)?);
        report.validations.insert("sandwich".into(), lemma2_bounds(&z, tol.axiom));
        let rt = roundtrip_error(&z)?;
        report.check("round-trip", rt <= tol.roundtrip, format!("max |recovered d - d| = {rt:.3e}"));
        compatibility(&z, report, tol.axiom)?;
    }
    Ok(())
}

/// Certificates for every sequence of length one or two.
fn compatibility(z: &ZhongMetric, report: &mut Report, tol: f64) -> zvp_core::Result<()> {
    let n = z.n();
    let (mut total, mut failed) = (0, 0);
    for x in 0..n {
        for y in 0..n {
            let pts = if x == y { vec![x] } else { vec![x, y] };
            let mu = prefix_sup(z.derived(), &pts);
            let cert = compatibility_certificate(z, &FinitePrefixSequence::eventually_constant(pts)?, mu, tol)?;
            total += 1;
            if !cert.passed {
                failed += 1;
            }
        }
    }
    report.check("compatibility", failed == 0, format!("{total} sequences, {failed} failing"));
    Ok(())
}

fn derived(inst: &Instance, tol: f64) -> zvp_core::Result<ZhongMetric> {
    let f = inst.normal.as_ref().expect("shape checked");
    let g = inst.weight.as_ref().expect("shape checked");
    build_zhong(&inst.d, g, f, tol)
}

fn solve(s: &Scenario, selector: Selector, report: &mut Report, opts: &Options) -> zvp_core::Result<()> {
    let tol = opts.tol.axiom;
    let inst = s.resolve(tol)?;
    let u = inst.u.expect("shape checked");
    let phi = || inst.phi.as_ref().expect("shape checked");
    let f = || inst.bifunction.as_ref().expect("shape checked");
    let rho = || inst.rho.expect("shape checked");
    let cert = match selector {
        Selector::Evp => evp_point(u, &inst.d, phi())?,
        Selector::EvpLocal => evp_local(u, rho(), &inst.d, phi())?,
        Selector::Zvp => zvp_point_on(u, &derived(&inst, tol)?, phi())?,
        Selector::ZvpLocal => zvp_local_on(u, rho(), &derived(&inst, tol)?, phi())?,
        Selector::Eq => {
            // with a normal function and weight the derived metric is used, otherwise e = d
            if inst.normal.is_some() && inst.weight.is_some() {
                let z = derived(&inst, tol)?;
                equilibrium_via_e(u, f(), &inst.d, z.derived())?
            } else {
                equilibrium_via_e(u, f(), &inst.d, &inst.d)?
            }
        }
        Selector::EqZhong => equilibrium_zhong_on(u, f(), &derived(&inst, tol)?, inst.rho)?,
        Selector::Bkp => bkp_point(u, f(), &inst.d)?,
        Selector::Validate | Selector::Properties => unreachable!("dispatched earlier"),
    };
    report.certificate = Some(cert);
    Ok(())
}
