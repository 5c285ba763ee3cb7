//! Acceptance run: every criterion is checked against an oracle written
//! here, independent of the library's own checkers, and reported on one line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zvp_core::almost_metric::{e_limits, is_strasy, validate_almost_metric, FinitePrefixSequence, Verdict};
use zvp_core::equilibrium::{bkp_point, equilibrium_via_e, equilibrium_zhong_on, potential_to_bifunction, Bifunction};
use zvp_core::generate::corpus;
use zvp_core::normal_fn::{adaptive_simpson, check_p2_properties, random_property_samples, NormalFunction, PropertySample};
use zvp_core::report::TAU_AXIOM;
use zvp_core::scenario::{Instance, Selector};
use zvp_core::solver::{
    evp_local, evp_point, leq, maximal_elements, prop1_conclusions, zvp_local_on, zvp_point, zvp_point_on, Certificate,
    Potential,
};
use zvp_core::zhong::{
    build_zhong, compatibility_certificate, lemma2_bounds, recover_d, roundtrip_error, validate_weight,
    weight_from_anchor, Weight, ZhongMetric,
};
use zvp_core::{AlmostMetricTable, Error};

const SEED: u64 = 20_240_601;
const PER_SIZE: usize = 50;
const SIZES: std::ops::RangeInclusive<usize> = 1..=12;

// ---------- oracles ----------

fn b_oracle(f: &NormalFunction, t: f64) -> f64 {
    match f {
        NormalFunction::One => 1.0,
        NormalFunction::Inv1p => 1.0 / (1.0 + t),
        NormalFunction::InvSqrt1p => 1.0 / (1.0 + t).sqrt(),
        NormalFunction::Const { c } => *c,
        other => other.density(t).unwrap(),
    }
}

fn big_b_oracle(f: &NormalFunction, t: f64) -> f64 {
    match f {
        NormalFunction::One => t,
        NormalFunction::Inv1p => (1.0 + t).ln(),
        NormalFunction::InvSqrt1p => 2.0 * ((1.0 + t).sqrt() - 1.0),
        NormalFunction::Const { c } => c * t,
        other => adaptive_simpson(|x| other.density(x).unwrap(), 0.0, t, 1e-12),
    }
}

/// `B^-1(s)` by plain bisection on the oracle `B`.
fn big_b_inv_oracle(f: &NormalFunction, s: f64) -> f64 {
    let mut hi = 1.0;
    while big_b_oracle(f, hi) < s {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if big_b_oracle(f, mid) < s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn le_scaled(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs || lhs - rhs <= tol * (1.0 + rhs.abs())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn maximal_oracle(e: &AlmostMetricTable, phi: &Potential, v: usize) -> bool {
    e.points().filter(|&x| x != v).all(|x| !(e.get(v, x) + phi.at(x) <= phi.at(v)))
}

fn leq_oracle(e: &AlmostMetricTable, phi: &Potential, x: usize, y: usize) -> bool {
    e.get(x, y) + phi.at(y) <= phi.at(x)
}

// ---------- corpus ----------

struct Case {
    inst: Instance,
    phi: Potential,
    f: Bifunction,
    normal: NormalFunction,
    weight: Weight,
    u: usize,
    rho: f64,
    z: ZhongMetric,
}

fn load_corpus() -> Vec<Case> {
    let mut out = Vec::new();
    for n in SIZES {
        for s in corpus(SEED + n as u64, n, PER_SIZE, Selector::Zvp).expect("corpus") {
            let inst = s.resolve(TAU_AXIOM).expect("resolve");
            let phi = inst.phi.clone().unwrap();
            let f = inst.bifunction.clone().unwrap();
            let normal = inst.normal.clone().unwrap();
            let weight = inst.weight.clone().unwrap();
            let z = build_zhong(&inst.d, &weight, &normal, TAU_AXIOM).expect("zhong");
            out.push(Case { u: inst.u.unwrap(), rho: inst.rho.unwrap(), phi, f, normal, weight, z, inst });
        }
    }
    out
}

// ---------- criteria ----------

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn c1_axioms(cases: &[Case]) -> Outcome {
    let mut triples = 0usize;
    for (k, c) in cases.iter().enumerate() {
        let d = &c.inst.d;
        for x in d.points() {
            for y in d.points() {
                if (d.get(x, y) == 0.0) != (x == y) {
                    return Err(format!("instance {k}: sufficiency fails at ({x},{y})"));
                }
                for w in d.points() {
                    triples += 1;
                    if d.get(x, w) + d.get(w, y) - d.get(x, y) < -1e-9 {
                        return Err(format!("instance {k}: triangle ({x},{w},{y})"));
                    }
                }
            }
        }
        if !validate_almost_metric(&d.rows(), TAU_AXIOM).unwrap().passed {
            return Err(format!("instance {k}: validator rejects a table the oracle accepts"));
        }
    }
    Ok(format!("{} tables, {triples} triangle checks", cases.len()))
}

fn mean_value_oracle(f: &NormalFunction, p: &PropertySample, tol: f64) -> bool {
    let q = big_b_oracle(f, p.s) - big_b_oracle(f, p.t);
    let w = p.s - p.t;
    le_scaled(b_oracle(f, p.s) * w, q, tol) && le_scaled(q, b_oracle(f, p.t) * w, tol)
}

fn c2_integral_properties() -> Outcome {
    let samples = random_property_samples(SEED, 10_000, 20.0);
    for f in NormalFunction::shipped() {
        let r = check_p2_properties(&f, &samples, 1e-6).unwrap();
        if !r.passed {
            return Err(format!("{}: {:?}", f.name(), r.worst()));
        }
        if let Some(p) = samples.iter().find(|p| !mean_value_oracle(&f, p, 1e-6)) {
            return Err(format!("{}: oracle mean-value bound fails at {p:?}", f.name()));
        }
    }
    let f = NormalFunction::Inv1p;
    let quad = adaptive_simpson(|t| f.density(t).unwrap(), 0.0, 2.0, 1e-12);
    let closed = f.integral(2.0).unwrap();
    let ln3 = 3f64.ln();
    if !close(quad, ln3, 1e-8) || !close(closed, ln3, 1e-8) || !close(f.integral_numeric(2.0, 1e-12).unwrap(), ln3, 1e-8) {
        return Err(format!("B(2): closed {closed}, quadrature {quad}, ln 3 {ln3}"));
    }
    Ok(format!("4 functions x {} samples; |B(2) - ln 3| = {:.1e}", samples.len(), (quad - ln3).abs()))
}

fn c3_derived_metric(cases: &[Case]) -> Outcome {
    let mut combos = 0;
    let mut worst = 0.0f64;
    for (k, c) in cases.iter().enumerate() {
        let mut normals = NormalFunction::shipped();
        normals.push(c.normal.clone());
        for f in &normals {
            combos += 1;
            let z = build_zhong(&c.inst.d, &c.weight, f, TAU_AXIOM).map_err(|e| format!("instance {k}: {e}"))?;
            let e = z.derived();
            if !validate_almost_metric(&e.rows(), TAU_AXIOM).unwrap().passed {
                return Err(format!("instance {k}, {}: derived table fails the axioms", f.name()));
            }
            for x in e.points() {
                let g = c.weight.at(x);
                for y in e.points() {
                    let expect = big_b_oracle(f, g + c.inst.d.get(x, y)) - big_b_oracle(f, g);
                    worst = worst.max((expect - e.get(x, y)).abs());
                }
            }
        }
    }
    if worst > 1e-9 {
        return Err(format!("derived entries differ from the closed form by {worst:e}"));
    }
    Ok(format!("{combos} (d, G, b) combinations; max |e - closed form| = {worst:.1e}"))
}

fn c4_roundtrip(cases: &[Case]) -> Outcome {
    let mut worst = 0.0f64;
    for (k, c) in cases.iter().enumerate() {
        let lib = roundtrip_error(&c.z).unwrap();
        let rec = recover_d(&c.z).unwrap();
        for x in c.inst.d.points() {
            let g = c.weight.at(x);
            for y in c.inst.d.points() {
                let oracle = big_b_inv_oracle(&c.normal, big_b_oracle(&c.normal, g) + c.z.derived().get(x, y)) - g;
                let dxy = c.inst.d.get(x, y);
                worst = worst.max((oracle - dxy).abs()).max((rec[x][y] - dxy).abs());
            }
        }
        worst = worst.max(lib);
        if worst > 1e-7 {
            return Err(format!("instance {k}: round trip error {worst:e}"));
        }
    }
    Ok(format!("max |recovered d - d| = {worst:.1e}"))
}

fn c5_sandwich(cases: &[Case]) -> Outcome {
    for (k, c) in cases.iter().enumerate() {
        let r = lemma2_bounds(&c.z, TAU_AXIOM);
        if !r.passed {
            return Err(format!("instance {k}: {:?}", r.worst()));
        }
        let (d, e, f) = (&c.inst.d, c.z.derived(), &c.normal);
        for x in d.points() {
            let g = c.weight.at(x);
            for y in d.points() {
                let (dxy, exy) = (d.get(x, y), e.get(x, y));
                let ok = le_scaled(b_oracle(f, g + dxy) * dxy, exy, TAU_AXIOM)
                    && le_scaled(exy, b_oracle(f, g) * dxy, TAU_AXIOM)
                    && le_scaled(exy, big_b_oracle(f, dxy), TAU_AXIOM);
                if !ok {
                    return Err(format!("instance {k}: oracle sandwich fails at ({x},{y})"));
                }
            }
        }
    }
    Ok(format!("{} instances", cases.len()))
}

fn sequences(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let max_len = if n <= 6 { 3 } else { 2 };
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    let mut all = Vec::new();
    for _ in 0..max_len {
        out = out.iter().flat_map(|s| (0..n).map(move |x| [s.clone(), vec![x]].concat())).collect();
        all.extend(out.iter().cloned());
    }
    for _ in 0..40 {
        let len = rng.random_range(4..=8);
        all.push((0..len).map(|_| rng.random_range(0..n)).collect());
    }
    all
}

fn c6_compatibility(cases: &[Case]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0usize;
    for (k, c) in cases.iter().enumerate() {
        let (d, e, f) = (&c.inst.d, c.z.derived(), &c.normal);
        for pts in sequences(c.inst.d.n(), &mut rng) {
            let mu = pts.iter().enumerate().flat_map(|(i, &a)| pts[i..].iter().map(move |&b| (a, b)))
                .map(|(a, b)| e.get(a, b)).fold(0.0, f64::max);
            let g0 = c.weight.at(pts[0]);
            let nu = big_b_inv_oracle(f, big_b_oracle(f, g0) + 2.0 * mu);
            let b_nu = b_oracle(f, nu);
            for i in 0..pts.len() {
                for j in i..pts.len() {
                    let (xi, xj) = (pts[i], pts[j]);
                    checked += 1;
                    if !le_scaled(c.weight.at(xi) + d.get(xi, xj), nu, 1e-9)
                        || !le_scaled(b_nu * d.get(xi, xj), e.get(xi, xj), 1e-9)
                    {
                        return Err(format!("instance {k}: counterexample on {pts:?} at ({i},{j})"));
                    }
                }
            }
            let seq = FinitePrefixSequence::eventually_constant(pts.clone()).unwrap();
            let cert = compatibility_certificate(&c.z, &seq, mu, TAU_AXIOM).map_err(|e| format!("instance {k}: {e}"))?;
            if !cert.passed || !close(cert.nu, nu, 1e-9 * (1.0 + nu)) {
                return Err(format!("instance {k}: certificate on {pts:?} disagrees (nu {} vs {nu})", cert.nu));
            }
        }
    }
    Ok(format!("{checked} pair checks, 0 counterexamples"))
}

fn descent_ok(cert: &Certificate, e: &AlmostMetricTable, phi: &Potential) -> Result<(), String> {
    let (u, v) = (cert.u, cert.v);
    if cert.chain.first() != Some(&u) || cert.chain.last() != Some(&v) {
        return Err("chain endpoints".into());
    }
    if cert.chain.windows(2).any(|w| !(phi.at(w[1]) < phi.at(w[0]))) {
        return Err("chain does not strictly decrease phi".into());
    }
    if !leq_oracle(e, phi, u, v) || !leq(u, v, e.as_pseudometric(), phi) {
        return Err("u <= v fails".into());
    }
    if !maximal_oracle(e, phi, v) {
        return Err(format!("v = {v} is not maximal"));
    }
    let oracle_set: BTreeSet<usize> = e.points().filter(|&x| phi.in_domain(x) && maximal_oracle(e, phi, x)).collect();
    let lib_set: BTreeSet<usize> = maximal_elements(e.as_pseudometric(), phi).unwrap().into_iter().filter(|&x| phi.in_domain(x)).collect();
    if oracle_set != lib_set || !lib_set.contains(&v) {
        return Err(format!("maximal sets differ: {oracle_set:?} vs {lib_set:?}"));
    }
    Ok(())
}

fn c7_solver(cases: &[Case]) -> Outcome {
    for (k, c) in cases.iter().enumerate() {
        for e in [&c.inst.d, c.z.derived()] {
            let cert = evp_point(c.u, e, &c.phi).map_err(|err| format!("instance {k}: {err}"))?;
            descent_ok(&cert, e, &c.phi).map_err(|m| format!("instance {k}: {m}"))?;
            if !cert.holds(TAU_AXIOM) {
                return Err(format!("instance {k}: certificate fails {:?}", cert.failures(TAU_AXIOM)));
            }
        }
    }
    Ok(format!("{} instances x 2 metrics", cases.len()))
}

fn strict_positive(cert: &Certificate) -> bool {
    cert.inequalities.iter().filter(|q| q.strict).all(|q| q.slack > 0.0)
}

fn c8_zvp(cases: &[Case]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let (mut local_ok, mut premise_fail) = (0, 0);
    for (k, c) in cases.iter().enumerate() {
        let cert = zvp_point_on(c.u, &c.z, &c.phi).map_err(|e| format!("instance {k}: {e}"))?;
        let (d, e, f, g) = (&c.inst.d, c.z.derived(), &c.normal, &c.weight);
        let (u, v) = (c.u, cert.v);
        let duv = d.get(u, v);
        let sandwich = le_scaled(b_oracle(f, g.at(u) + duv) * duv, e.get(u, v), TAU_AXIOM)
            && le_scaled(e.get(u, v), c.phi.at(u) - c.phi.at(v), TAU_AXIOM);
        let caps = d.points().filter(|&x| x != v).all(|x| {
            le_scaled(e.get(v, x), b_oracle(f, g.at(v)) * d.get(v, x), TAU_AXIOM)
                && c.phi.at(v) - c.phi.at(x) < e.get(v, x)
        });
        if !sandwich || !caps || !cert.holds(TAU_AXIOM) || !strict_positive(&cert) {
            return Err(format!("instance {k}: zvp certificate fails {:?}", cert.failures(TAU_AXIOM)));
        }
        let mut radii = vec![c.rho];
        radii.extend((0..3).map(|_| rng.random_range(0.05..10.0)));
        for rho in radii {
            let budget = big_b_oracle(f, g.at(u) + rho) - big_b_oracle(f, g.at(u));
            let excess = c.phi.excess(u);
            match zvp_local_on(u, rho, &c.z, &c.phi) {
                Ok(cert) => {
                    if !le_scaled(excess, budget, 1e-9) {
                        return Err(format!("instance {k}: premise accepted but oracle says {excess} > {budget}"));
                    }
                    let v = cert.v;
                    let duv = d.get(u, v);
                    let ok = cert.holds(TAU_AXIOM)
                        && strict_positive(&cert)
                        && le_scaled(duv, rho, TAU_AXIOM)
                        && le_scaled(g.at(v), g.at(u) + rho, TAU_AXIOM)
                        && le_scaled(b_oracle(f, g.at(u) + rho) * duv, c.phi.at(u) - c.phi.at(v), TAU_AXIOM);
                    if !ok {
                        return Err(format!("instance {k}, rho {rho}: local conclusions fail"));
                    }
                    local_ok += 1;
                }
                Err(Error::Premise { .. }) => {
                    if le_scaled(excess, budget, -1e-9) {
                        return Err(format!("instance {k}: premise rejected but oracle says {excess} <= {budget}"));
                    }
                    premise_fail += 1;
                }
                Err(e) => return Err(format!("instance {k}: {e}")),
            }
        }
    }
    Ok(format!("{} global; {local_ok} local with premise, {premise_fail} premise rejections", cases.len()))
}

fn same_slacks(a: &Certificate, b: &Certificate, names: impl Fn(&str) -> bool) -> bool {
    let pick = |c: &Certificate| -> Vec<(String, u64)> {
        c.inequalities.iter().filter(|q| names(&q.name)).map(|q| (q.name.clone(), q.slack.to_bits())).collect()
    };
    a.v == b.v && a.chain == b.chain && pick(a) == pick(b)
}

fn c9_reductions(cases: &[Case]) -> Outcome {
    let shared = |n: &str| n == "descent" || n.starts_with("chain-step") || n.starts_with("maximality");
    let mut bkp_runs = 0;
    for (k, c) in cases.iter().enumerate() {
        let d = &c.inst.d;
        let one = Weight::new(c.weight.values().to_vec()).unwrap();
        let zvp = zvp_point(c.u, d, &c.phi, &NormalFunction::One, &one, TAU_AXIOM).unwrap();
        let evp = evp_point(c.u, d, &c.phi).unwrap();
        if !same_slacks(&zvp, &evp, shared) {
            return Err(format!("instance {k}: zvp with b = 1 differs from evp"));
        }
        let fphi = potential_to_bifunction(&c.phi);
        for e in [d, c.z.derived()] {
            let eq = equilibrium_via_e(c.u, &fphi, d, e).unwrap();
            let evp = evp_point(c.u, e, &c.phi).unwrap();
            if !same_slacks(&eq, &evp, shared) {
                return Err(format!("instance {k}: potential-derived equilibrium differs from evp"));
            }
        }
        if c.f.is_real_valued() {
            bkp_runs += 1;
            let eq = equilibrium_via_e(c.u, &c.f, d, d).unwrap();
            let bkp = bkp_point(c.u, &c.f, d).unwrap();
            if !same_slacks(&eq, &bkp, |_| true) {
                return Err(format!("instance {k}: bkp differs from equilibrium with e = d"));
            }
        }
    }
    Ok(format!("{} instances, {bkp_runs} real-valued bifunctions", cases.len()))
}

fn c10_equilibrium(cases: &[Case]) -> Outcome {
    let mut runs = 0;
    for (k, c) in cases.iter().enumerate() {
        let (d, e, f, g, b) = (&c.inst.d, c.z.derived(), &c.f, &c.weight, &c.normal);
        let u = c.u;
        let cert = equilibrium_via_e(u, f, d, e).map_err(|err| format!("instance {k}: {err}"))?;
        if !d.points().all(|x| f.get(cert.v, x) + e.get(cert.v, x) >= -TAU_AXIOM) || !cert.holds(TAU_AXIOM) {
            return Err(format!("instance {k}: F + e < 0 at v = {}", cert.v));
        }
        for rho in [None, Some(c.rho)] {
            let cert = equilibrium_zhong_on(u, f, &c.z, rho).map_err(|err| format!("instance {k}: {err}"))?;
            let v = cert.v;
            if !d.points().all(|x| f.get(v, x) + b_oracle(b, g.at(v)) * d.get(v, x) >= -TAU_AXIOM) || !cert.holds(TAU_AXIOM) {
                return Err(format!("instance {k}: F + b(G) d < 0 at v = {v}"));
            }
        }
        if f.is_real_valued() {
            let cert = bkp_point(u, f, d).unwrap();
            if !d.points().all(|x| f.get(cert.v, x) + d.get(cert.v, x) >= -TAU_AXIOM) || !cert.holds(TAU_AXIOM) {
                return Err(format!("instance {k}: f + d < 0 at v = {}", cert.v));
            }
        }
        runs += 1;
    }
    Ok(format!("{runs} instances, exhaustive over x"))
}

fn c11_fixture() -> Outcome {
    let tol = 1e-9;
    let ln2 = std::f64::consts::LN_2;
    let mut fails: Vec<String> = Vec::new();
    let mut check = |what: &str, ok: bool| {
        if !ok {
            fails.push(what.to_string());
        }
    };
    let rows = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
    let d = AlmostMetricTable::new(&rows, TAU_AXIOM).unwrap();
    let phi = Potential::new(vec![2.0, 0.0]).unwrap();
    let inv = NormalFunction::Inv1p;

    check("asymmetric table validates", validate_almost_metric(&rows, TAU_AXIOM).unwrap().passed);
    let seq = FinitePrefixSequence::eventually_constant(vec![0, 1]).unwrap();
    let s = is_strasy(&seq, d.as_pseudometric()).unwrap();
    check("series sum 1", s.verdict == Verdict::Holds && close(s.sum, 1.0, tol));
    check("limits {1}", e_limits(&seq, d.as_pseudometric()).unwrap() == BTreeSet::from([1]));
    check("B(2) = ln 3", close(inv.integral(2.0).unwrap(), 3f64.ln(), tol));
    check("B^-1(ln 3) = 2", close(inv.inverse_integral(3f64.ln()).unwrap(), 2.0, tol));
    let q = inv.integral(1.0).unwrap() - inv.integral(0.0).unwrap();
    check("0.5 <= ln 2 <= 1", close(q, ln2, tol) && inv.density(1.0).unwrap() <= q && q <= inv.density(0.0).unwrap());

    let g = weight_from_anchor(&d, 0).unwrap();
    check("G = (0, 1)", g.values() == [0.0, 1.0]);
    check("G nonexpansive", validate_weight(&g, &d, TAU_AXIOM).unwrap().passed);
    let z = build_zhong(&d, &g, &inv, TAU_AXIOM).unwrap();
    let e = z.derived();
    check("e(0,1) = ln 2", close(e.get(0, 1), ln2, tol));
    check("e(1,0) = ln 4 - ln 2", close(e.get(1, 0), 4f64.ln() - 2f64.ln(), tol));
    check("recovered d(0,1) = 1", close(recover_d(&z).unwrap()[0][1], 1.0, tol));
    check("sandwich and cap", lemma2_bounds(&z, TAU_AXIOM).passed && close(inv.integral(1.0).unwrap(), e.get(0, 1), tol));
    let cc = compatibility_certificate(&z, &FinitePrefixSequence::eventually_constant(vec![0, 1]).unwrap(), ln2, TAU_AXIOM).unwrap();
    check("nu = 3, b(nu) = 1/4", close(cc.nu, 3.0, tol) && close(cc.b_nu, 0.25, tol) && cc.passed);

    check("maximal set {1}", maximal_elements(d.as_pseudometric(), &phi).unwrap() == BTreeSet::from([1]));
    let evp = evp_point(0, &d, &phi).unwrap();
    let get = |c: &Certificate, n: &str| c.get(n).map(|q| (q.lhs, q.rhs)).unwrap_or((f64::NAN, f64::NAN));
    check("evp v = 1", evp.v == 1);
    check("evp 1 <= 2", get(&evp, "descent") == (1.0, 2.0));
    check("evp -2 < 2", get(&evp, "maximality[0]") == (-2.0, 2.0));
    check("evp_local radius 1 <= 2", evp_local(0, 2.0, &d, &phi).unwrap().get("radius").map(|q| (q.lhs, q.rhs)) == Some((1.0, 2.0)));
    check("stationarity at v = 1", prop1_conclusions(1, d.as_pseudometric(), &phi, TAU_AXIOM).unwrap().passed);

    let zvp = zvp_point_on(0, &z, &phi).unwrap();
    let (sl, sr) = get(&zvp, "sandwich-lower");
    let (cl, cr) = get(&zvp, "weight-cap[0]");
    let (ml, mr) = get(&zvp, "maximality[0]");
    check("zvp v = 1", zvp.v == 1);
    check("zvp 0.5 <= ln 2 <= 2", close(sl, 0.5, tol) && close(sr, ln2, tol) && get(&zvp, "descent") == (e.get(0, 1), 2.0));
    check("zvp cap ln 2 <= 1", close(cl, ln2, tol) && close(cr, 1.0, tol));
    check("zvp -2 < ln 2", close(ml, -2.0, tol) && close(mr, ln2, tol));
    match zvp_local_on(0, 3.0, &z, &phi) {
        Err(Error::Premise { lhs, rhs, .. }) => check("premise 2 > ln 4", close(lhs, 2.0, tol) && close(rhs, 4f64.ln(), tol)),
        _ => check("premise rejected at rho = 3", false),
    }

    let f = Bifunction::new(&[vec![0.0, -2.0], vec![2.0, 0.0]], TAU_AXIOM).unwrap();
    let eq = equilibrium_via_e(0, &f, &d, &d).unwrap();
    check("eq v = 1", eq.v == 1);
    check("eq 1 <= 2 <= 2", get(&eq, "descent") == (1.0, 2.0) && get(&eq, "marginal") == (2.0, 2.0));
    check("eq -2 < 2", get(&eq, "maximality[0]") == (-2.0, 2.0));
    check("eq G >= 0", (0..2).all(|x| f.get(1, x) + d.get(1, x) >= 0.0) && eq.holds(TAU_AXIOM));
    let eqz = equilibrium_zhong_on(0, &f, &z, None).unwrap();
    let (sl, sr) = get(&eqz, "sandwich-lower");
    let (cl, cr) = get(&eqz, "weight-cap[0]");
    check("eq-zhong v = 1", eqz.v == 1);
    check("eq-zhong 0.5 <= ln 2 <= 2 <= 2", close(sl, 0.5, tol) && close(sr, ln2, tol) && get(&eqz, "marginal") == (2.0, 2.0));
    check("eq-zhong cap 1 >= ln 2 > -2", close(cl, ln2, tol) && close(cr, 1.0, tol) && get(&eqz, "maximality[0]").0 == -2.0);
    let bkp = bkp_point(0, &f, &d).unwrap();
    check("bkp v = 1 matches eq", bkp.v == 1 && same_slacks(&bkp, &eq, |_| true));

    if fails.is_empty() {
        Ok("all quoted fixture values reproduced".into())
    } else {
        Err(format!("mismatched: {}", fails.join("; ")))
    }
}

fn main() {
    let start = Instant::now();
    let cases = load_corpus();
    let criteria: Vec<Criterion> = vec![
        ("axiom suite", Box::new(|| c1_axioms(&cases))),
        ("integral properties", Box::new(c2_integral_properties)),
        ("derived metric is an almost metric", Box::new(|| c3_derived_metric(&cases))),
        ("round trip", Box::new(|| c4_roundtrip(&cases))),
        ("sandwich and cap", Box::new(|| c5_sandwich(&cases))),
        ("compatibility certificate", Box::new(|| c6_compatibility(&cases))),
        ("solver oracle equivalence", Box::new(|| c7_solver(&cases))),
        ("weighted variational certificates", Box::new(|| c8_zvp(&cases))),
        ("reduction identities", Box::new(|| c9_reductions(&cases))),
        ("equilibrium soundness", Box::new(|| c10_equilibrium(&cases))),
        ("two-point fixture", Box::new(c11_fixture)),
    ];
    println!("acceptance corpus: {} instances, n = 1..=12", cases.len());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let (tag, detail) = match &outcome {
            Ok(m) => ("PASS", m.clone()),
            Err(m) => ("FAIL", m.clone()),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("criterion {:>2} {tag}: {name}: {detail} ({:.2?})", i + 1, t.elapsed());
    }
    println!("acceptance: {} of {} criteria pass in {:.2?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
