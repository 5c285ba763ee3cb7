//! Seeded random instances.
//!
//! All reals are snapped to multiples of `2^-20` so that sums and
//! differences of table entries are exact in `f64`. Spaces are built from
//! uniform positive entries followed by the min-plus closure, so they are
//! almost metrics without rejection sampling. Each instance of a corpus uses
//! its own ChaCha stream, so instance `i` does not depend on `count`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::almost_metric::{metric_closure, AlmostMetricTable, PointId};
use crate::equilibrium::{marginal, potential_to_bifunction, Bifunction};
use crate::error::{Error, Result};
use crate::normal_fn::NormalFunction;
use crate::report::{wrap_ext, TAU_AXIOM};
use crate::scenario::{BifunctionSpec, PotentialSpec, Scenario, Selector, SpaceFile, SpaceSpec, WeightSpec};
use crate::solver::Potential;

pub const GRID: f64 = 1.0 / 1_048_576.0;

pub fn snap(x: f64) -> f64 {
    (x / GRID).round() * GRID
}

fn snap_up(x: f64) -> f64 {
    (x / GRID).ceil() * GRID
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    snap(rng.random_range(lo..hi))
}

pub fn random_space(rng: &mut ChaCha8Rng, n: usize) -> Result<AlmostMetricTable> {
    if n == 0 {
        return Err(Error::Malformed("space size must be at least 1".into()));
    }
    let raw: Vec<Vec<f64>> =
        (0..n).map(|x| (0..n).map(|y| if x == y { 0.0 } else { uniform(rng, 0.25, 8.0) }).collect()).collect();
    metric_closure(&raw)
}

pub fn space_from_seed(seed: u64, n: usize) -> Result<AlmostMetricTable> {
    random_space(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

/// Values in `[0, 10)`, each `+inf` with probability `inf_rate`, with at
/// least one finite entry.
pub fn random_potential(rng: &mut ChaCha8Rng, n: usize, inf_rate: f64) -> Potential {
    let mut values: Vec<f64> =
        (0..n).map(|_| if rng.random_bool(inf_rate) { f64::INFINITY } else { uniform(rng, 0.0, 10.0) }).collect();
    if values.iter().all(|v| v.is_infinite()) {
        let k = rng.random_range(0..n);
        values[k] = uniform(rng, 0.0, 10.0);
    }
    Potential::new(values).expect("nonempty domain by construction")
}

pub fn random_normal(rng: &mut ChaCha8Rng) -> NormalFunction {
    match rng.random_range(0..4) {
        0 => NormalFunction::One,
        1 => NormalFunction::Inv1p,
        2 => NormalFunction::InvSqrt1p,
        _ => NormalFunction::Const { c: uniform(rng, 0.25, 4.0) },
    }
}

pub fn random_weight_spec(rng: &mut ChaCha8Rng, n: usize) -> WeightSpec {
    if rng.random_bool(0.5) {
        WeightSpec::Anchor { a: rng.random_range(0..n) }
    } else {
        WeightSpec::Infimal { g: (0..n).map(|_| uniform(rng, 0.0, 4.0)).collect() }
    }
}

/// `F(x, y) = phi(y) - phi(x) + eta(x, y)` with `eta` a closed table
/// (or zero), which keeps reflexivity and triangularity.
pub fn random_bifunction(rng: &mut ChaCha8Rng, phi: &Potential) -> Result<Bifunction> {
    let n = phi.len();
    let base = potential_to_bifunction(phi).rows();
    let eta = if rng.random_bool(0.25) {
        vec![vec![0.0; n]; n]
    } else {
        let raw: Vec<Vec<f64>> =
            (0..n).map(|x| (0..n).map(|y| if x == y { 0.0 } else { uniform(rng, 0.25, 3.0) }).collect()).collect();
        metric_closure(&raw)?.rows()
    };
    let rows: Vec<Vec<f64>> = (0..n).map(|x| (0..n).map(|y| base[x][y] + eta[x][y]).collect()).collect();
    Bifunction::new(&rows, TAU_AXIOM)
}

/// One complete scenario. The radius is chosen so that both local premises
/// (for the potential and for the bifunction's marginal) hold.
pub fn random_scenario(rng: &mut ChaCha8Rng, n: usize, selector: Selector, name: String) -> Result<Scenario> {
    let d = random_space(rng, n)?;
    let phi = random_potential(rng, n, 0.15);
    let bif_phi = if rng.random_bool(0.5) { phi.clone() } else { random_potential(rng, n, 0.0) };
    let bif = random_bifunction(rng, &bif_phi)?;
    let normal = random_normal(rng);
    let weight_spec = random_weight_spec(rng, n);
    let weight = weight_spec.resolve(&d)?;

    let dom = phi.domain();
    let mu = marginal(&bif);
    let both: Vec<PointId> = dom.iter().copied().filter(|&x| mu.at(x) < f64::INFINITY).collect();
    let pool = if both.is_empty() { &dom } else { &both };
    let u = pool[rng.random_range(0..pool.len())];

    let mut reach = normal.inverse_increment(weight.at(u), phi.excess(u))?;
    if mu.at(u).is_finite() {
        reach = reach.max(normal.inverse_increment(weight.at(u), mu.at(u))?);
    }
    let rho = snap_up(reach * rng.random_range(1.0..2.0) + 0.5);

    Ok(Scenario {
        name: Some(name),
        theorem: Some(selector),
        space: SpaceSpec::Table(SpaceFile { n, d: d.rows(), name: None }),
        potential: Some(PotentialSpec { phi: wrap_ext(phi.values()) }),
        bifunction: Some(BifunctionSpec::from_rows(&bif.rows())),
        normal: Some(normal),
        weight: Some(weight_spec),
        u: Some(u),
        rho: Some(rho),
    })
}

/// `count` scenarios of size `n`; instance `i` draws from stream `i` of the
/// generator seeded with `seed`.
pub fn corpus(seed: u64, n: usize, count: usize, selector: Selector) -> Result<Vec<Scenario>> {
    if n == 0 || count == 0 {
        return Err(Error::Malformed("corpus needs n >= 1 and count >= 1".into()));
    }
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            random_scenario(&mut rng, n, selector, format!("s{seed}-n{n}-{i:04}"))
        })
        .collect()
}
