//! The invariant suite behind `gcdm verify`.
//!
//! Every check draws its samples from its own seeded stream, evaluates them
//! through [`Exec`] and reduces only with order-independent operations, so
//! the rendered report is byte-identical for a fixed seed regardless of
//! worker count.

use std::fmt::Write as _;

use rand::Rng;

use crate::descriptors::{
    closed_form, default_step, delta_h, delta_u, descriptor_set, edge_energy, energy,
    energy_trend_check, slope_checks,
};
use crate::exec::Exec;
use crate::oracle::{build_operators, ensemble_of, purity, trace_observable, FockSpaceSpec};
use crate::scan::{region_counts, scan};
use crate::simplex::{
    assemble_state, classify, mean_particle_number, weights_from_omega_n, weights_from_reference,
    ChargeFraction, DomainSpec, ReferenceFraction, Region, SimplexPoint, WeightVector,
    DEFAULT_CLASSIFY_TOL, WEIGHT_TOL,
};
use crate::species::{parse_catalog, to_domain, write_catalog, CatalogFormat, SpeciesRecord};
use crate::synthetic::{random_catalog, rng, synthetic_domains};

/// Agreement between closed forms and the oracle or each other.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Relative tolerance of the finite-difference slopes.
pub const SLOPE_TOL: f64 = 1e-6;
/// Relative tolerance of the region-area estimate.
pub const AREA_TOL: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub synthetic: usize,
    /// Intervals of the normalization grid along `x` and `omega_N`.
    pub grid_x: usize,
    pub grid_w: usize,
    pub random_points: usize,
    pub oracle_pairs: usize,
    pub pad_dimension: usize,
    pub delta_cases: usize,
    pub trend_lines: usize,
    pub trend_samples: usize,
    pub slope_points: usize,
    pub reference_pairs: usize,
    pub scan_grid: usize,
    pub roundtrip_catalogs: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            synthetic: 100,
            grid_x: 2000,
            grid_w: 1000,
            random_points: 100_000,
            oracle_pairs: 10_000,
            pad_dimension: 5,
            delta_cases: 10_000,
            trend_lines: 100,
            trend_samples: 64,
            slope_points: 1000,
            reference_pairs: 1000,
            scan_grid: 400,
            roundtrip_catalogs: 1000,
        }
    }
}

impl VerifyConfig {
    /// Reduced sample sizes for smoke runs.
    pub fn quick(seed: u64) -> Self {
        Self {
            seed,
            synthetic: 10,
            grid_x: 200,
            grid_w: 100,
            random_points: 2000,
            oracle_pairs: 300,
            pad_dimension: 3,
            delta_cases: 300,
            trend_lines: 10,
            trend_samples: 16,
            slope_points: 100,
            reference_pairs: 100,
            scan_grid: 400,
            roundtrip_catalogs: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub seed: u64,
    pub catalog_domains: usize,
    pub synthetic_domains: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(
            out,
            "domains: {} catalog + {} synthetic",
            self.catalog_domains, self.synthetic_domains
        );
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status} {:<22} {}", c.name, c.detail);
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "summary: {passed}/{} checks passed", self.checks.len());
        out
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Uniform point of the closed triangle.
fn random_point(rng: &mut impl Rng) -> (f64, f64) {
    let w = rng.random_range(0.0..1.0);
    let x = rng.random_range(-1.0..=1.0) * (1.0 - w);
    (x, w)
}

fn pick<'a>(rng: &mut impl Rng, pool: &'a [DomainSpec]) -> &'a DomainSpec {
    &pool[rng.random_range(0..pool.len())]
}

pub fn run(catalog: &[DomainSpec], config: &VerifyConfig, exec: Exec) -> Report {
    let synthetic = synthetic_domains(config.synthetic, config.seed);
    let pool: Vec<DomainSpec> = catalog.iter().cloned().chain(synthetic).collect();
    let mut checks = vec![normalization(config, exec), boundary_conditions()];
    if pool.is_empty() {
        checks.push(Check::new("domains", false, "no domains to verify".into()));
    } else {
        checks.push(reference_agreement(&pool, config, exec));
        checks.extend(oracle_checks(&pool, config, exec));
        checks.push(delta_h_check(&pool, config, exec));
        checks.push(trend_check(&pool, config, exec));
        checks.push(delta_u_check(&pool, config, exec));
        checks.push(mean_energy_check(&pool));
        checks.push(slope_check(&pool, config, exec));
        checks.push(region_census_check(&pool[0], config, exec));
    }
    checks.push(roundtrip_check(&pool, config, exec));
    Report {
        seed: config.seed,
        catalog_domains: catalog.len(),
        synthetic_domains: config.synthetic,
        checks,
    }
}

/// Weight sums and bounds over the full grid plus random triangle points;
/// grid points above the triangle must be rejected.
pub fn normalization(config: &VerifyConfig, exec: Exec) -> Check {
    let (gx, gw) = (config.grid_x.max(1), config.grid_w.max(1));
    let row_stats = exec.map_range(gw + 1, |j| {
        let w = j as f64 / gw as f64;
        let mut stats = (0usize, 0.0f64, f64::INFINITY, f64::NEG_INFINITY, 0usize);
        for i in 0..=gx {
            let x = (2.0 * i as f64 - gx as f64) / gx as f64;
            let inside = w <= 1.0 - x.abs() + WEIGHT_TOL;
            match (inside, weights_from_omega_n(x, w)) {
                (true, Ok(wv)) => accumulate(&mut stats, wv),
                (false, Err(_)) => {}
                _ => stats.4 += 1,
            }
        }
        stats
    });
    let mut r = rng(config.seed, 1);
    let points: Vec<(f64, f64)> = (0..config.random_points).map(|_| random_point(&mut r)).collect();
    let point_stats = exec.map(&points, |&(x, w)| {
        let mut stats = (0usize, 0.0f64, f64::INFINITY, f64::NEG_INFINITY, 0usize);
        match weights_from_omega_n(x, w) {
            Ok(wv) => accumulate(&mut stats, wv),
            Err(_) => stats.4 += 1,
        }
        stats
    });
    let (mut n, mut dev, mut lo, mut hi, mut bad) = (0, 0.0f64, f64::INFINITY, f64::NEG_INFINITY, 0);
    for s in row_stats.into_iter().chain(point_stats) {
        n += s.0;
        dev = dev.max(s.1);
        lo = lo.min(s.2);
        hi = hi.max(s.3);
        bad += s.4;
    }
    let passed = bad == 0 && dev <= WEIGHT_TOL && lo >= -WEIGHT_TOL && hi <= 1.0 + WEIGHT_TOL;
    Check::new(
        "normalization",
        passed,
        format!("points={n} max|sum-1|={dev:.3e} min={lo} max={hi} misclassified={bad}"),
    )
}

fn accumulate(stats: &mut (usize, f64, f64, f64, usize), w: WeightVector) {
    stats.0 += 1;
    stats.1 = stats.1.max((w.sum() - 1.0).abs());
    for v in w.as_array() {
        stats.2 = stats.2.min(v);
        stats.3 = stats.3.max(v);
    }
}

/// Pure states at the three vertices and the neutral-weight boundary
/// conditions, exactly.
pub fn boundary_conditions() -> Check {
    let mut failures = Vec::new();
    let cases = [
        ((0.0, 1.0), [0.0, 1.0, 0.0]),
        ((1.0, 0.0), [0.0, 0.0, 1.0]),
        ((-1.0, 0.0), [1.0, 0.0, 0.0]),
    ];
    for ((x, w), expected) in cases {
        match weights_from_omega_n(x, w) {
            Ok(wv) if wv.as_array() == expected => {}
            other => failures.push(format!("({x},{w})->{other:?}")),
        }
        if classify(SimplexPoint::new(x, w), DEFAULT_CLASSIFY_TOL).is_vertex() {
            continue;
        }
        failures.push(format!("({x},{w}) not a vertex"));
    }
    for q in 1..=4u32 {
        let qf = f64::from(q);
        for (nu, expected) in [(0.0, [0.0, 1.0, 0.0]), (qf, [0.0, 0.0, 1.0]), (-qf, [1.0, 0.0, 0.0])] {
            let got = ChargeFraction::new(nu, q)
                .and_then(|c| ReferenceFraction::new(nu, q).and_then(|r| weights_from_reference(c, r)));
            match got {
                Ok(wv) if wv.as_array() == expected => {}
                other => failures.push(format!("q={q} nu=nu0={nu}->{other:?}")),
            }
        }
    }
    Check::new(
        "boundary-conditions",
        failures.is_empty(),
        if failures.is_empty() {
            "vertices exact for q=1..4".into()
        } else {
            failures.join("; ")
        },
    )
}

/// Region-resolved weights agree with the central-weight solution on every
/// horizontal line, and reach the two-state form at `nu = nu0`.
pub fn reference_agreement(pool: &[DomainSpec], config: &VerifyConfig, exec: Exec) -> Check {
    let mut r = rng(config.seed, 2);
    let cases: Vec<(u32, f64, f64)> = (0..2 * config.reference_pairs)
        .map(|k| {
            let q = pick(&mut r, pool).q();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let nu0 = sign * f64::from(q) * r.random_range(0.0..=1.0);
            let nu = nu0 * r.random_range(0.0..=1.0);
            (q, nu, nu0)
        })
        .collect();
    let outcome = exec.map(&cases, |&(q, nu, nu0)| -> Result<(f64, bool), String> {
        let c = ChargeFraction::new(nu, q).map_err(|e| e.to_string())?;
        let r0 = ReferenceFraction::new(nu0, q).map_err(|e| e.to_string())?;
        let a = weights_from_reference(c, r0).map_err(|e| e.to_string())?;
        let b = weights_from_omega_n(c.ratio(), r0.omega_n()).map_err(|e| e.to_string())?;
        let dev = max_of(a.as_array().iter().zip(b.as_array()).map(|(u, v)| (u - v).abs()));
        let edge = weights_from_reference(ChargeFraction::new(nu0, q).map_err(|e| e.to_string())?, r0)
            .map_err(|e| e.to_string())?;
        let zeros = edge.as_array().iter().filter(|&&v| v == 0.0).count();
        let two_state = if nu0 == 0.0 { zeros == 2 } else { zeros >= 1 };
        Ok((dev, two_state))
    });
    let mut dev = 0.0f64;
    let mut errors = 0;
    let mut two_state_failures = 0;
    for o in outcome {
        match o {
            Ok((d, ok)) => {
                dev = dev.max(d);
                two_state_failures += usize::from(!ok);
            }
            Err(_) => errors += 1,
        }
    }
    Check::new(
        "reference-agreement",
        errors == 0 && two_state_failures == 0 && dev <= WEIGHT_TOL,
        format!(
            "pairs={} max|dw|={dev:.3e} errors={errors} two-state-failures={two_state_failures}",
            cases.len()
        ),
    )
}

struct OracleOutcome {
    moment_err: f64,
    energy_rel_err: f64,
    closed_moment_err: f64,
    purity: f64,
    mixed: bool,
    invariant_error: Option<String>,
}

/// First moment, energy and purity through explicit density matrices.
pub fn oracle_checks(pool: &[DomainSpec], config: &VerifyConfig, exec: Exec) -> Vec<Check> {
    let mut r = rng(config.seed, 3);
    let cases: Vec<(usize, f64, f64, usize)> = (0..config.oracle_pairs)
        .map(|k| {
            let d = r.random_range(0..pool.len());
            let (x, w) = random_point(&mut r);
            let dim = if k % 2 == 0 { 1 } else { config.pad_dimension.max(1) };
            (d, x, w, dim)
        })
        .collect();
    let outcomes = exec.map(&cases, |&(d, x, w, dim)| oracle_outcome(&pool[d], x, w, dim));

    let vertex_purity = max_of(
        pool.iter()
            .take(8)
            .flat_map(|d| {
                [-1i8, 0, 1].map(|s| {
                    let space = FockSpaceSpec::three_state(d, config.pad_dimension.max(1)).expect("space");
                    let state = ensemble_of(&assemble_state(d, WeightVector::vertex(s)), &space).expect("ensemble");
                    (purity(&state) - 1.0).abs()
                })
            }),
    );
    let origin = {
        let d = &pool[0];
        let space = FockSpaceSpec::three_state(d, 1).expect("space");
        let w = WeightVector::new(0.5, 0.0, 0.5).expect("origin");
        purity(&ensemble_of(&assemble_state(d, w), &space).expect("ensemble"))
    };

    let mut moment = 0.0f64;
    let mut closed_moment = 0.0f64;
    let mut energy_err = 0.0f64;
    let mut invariant_failures = Vec::new();
    let mut impure_mixtures = 0;
    let mut mixtures = 0;
    for o in &outcomes {
        moment = moment.max(o.moment_err);
        closed_moment = closed_moment.max(o.closed_moment_err);
        energy_err = energy_err.max(o.energy_rel_err);
        if let Some(e) = &o.invariant_error {
            invariant_failures.push(e.clone());
        }
        if o.mixed {
            mixtures += 1;
            impure_mixtures += usize::from(o.purity < 1.0);
        }
    }
    let n = outcomes.len();
    vec![
        Check::new(
            "first-moment",
            moment <= CLOSED_FORM_TOL && closed_moment <= CLOSED_FORM_TOL && invariant_failures.is_empty(),
            format!(
                "pairs={n} max|Tr(ND)-(N+nu)|={moment:.3e} max|<M>-(N+nu)|={closed_moment:.3e} invalid-states={}",
                invariant_failures.len()
            ),
        ),
        Check::new(
            "energy-oracle",
            energy_err <= CLOSED_FORM_TOL,
            format!("pairs={n} max rel|Tr(HD)-E|={energy_err:.3e}"),
        ),
        Check::new(
            "purity",
            vertex_purity <= WEIGHT_TOL && origin == 0.5 && impure_mixtures == mixtures,
            format!(
                "vertex max|Tr(D^2)-1|={vertex_purity:.3e} origin={origin} mixed<1: {impure_mixtures}/{mixtures}"
            ),
        ),
    ]
}

fn oracle_outcome(domain: &DomainSpec, x: f64, w: f64, dim: usize) -> OracleOutcome {
    let weights = weights_from_omega_n(x, w).expect("sampled inside the triangle");
    let space = FockSpaceSpec::three_state(domain, dim).expect("valid space");
    let ops = build_operators(&space);
    let state = ensemble_of(&assemble_state(domain, weights), &space).expect("valid ensemble");
    let invariant_error = state.check_invariants().err().map(|e| e.to_string());
    let expected_m = f64::from(domain.n_electrons()) + x * f64::from(domain.q());
    let tr_n = trace_observable(&state, &ops.number).expect("dims");
    let tr_h = trace_observable(&state, &ops.hamiltonian).expect("dims");
    let e = energy(domain, weights);
    OracleOutcome {
        moment_err: (tr_n - expected_m).abs(),
        closed_moment_err: (mean_particle_number(domain, weights) - expected_m).abs(),
        energy_rel_err: (tr_h - e).abs() / e.abs().max(f64::MIN_POSITIVE),
        purity: purity(&state),
        mixed: weights.as_array().iter().filter(|&&v| v > 0.0).count() >= 2,
        invariant_error,
    }
}

/// Domains whose descriptors give `mu0 < 0`.
fn negative_mu(pool: &[DomainSpec]) -> Vec<&DomainSpec> {
    pool.iter().filter(|d| descriptor_set(d).0.mu0 < 0.0).collect()
}

/// `(domain index, nu, nu0)` on a random horizontal line and side.
fn random_line_state(r: &mut impl Rng, count: usize, q_of: impl Fn(usize) -> u32) -> (usize, f64, f64) {
    let d = r.random_range(0..count);
    let qf = f64::from(q_of(d));
    let sign = if r.random_bool(0.5) { 1.0 } else { -1.0 };
    let nu0 = sign * qf * r.random_range(0.0..=1.0);
    let nu = nu0 * r.random_range(0.0..=1.0);
    (d, nu, nu0)
}

/// Direct subtraction, the `(A+I)` form and the `mu0` form of `ΔH`.
pub fn delta_h_check(pool: &[DomainSpec], config: &VerifyConfig, exec: Exec) -> Check {
    let domains = negative_mu(pool);
    if domains.is_empty() {
        return Check::new("delta-h", true, "skipped: no domain with mu0 < 0".into());
    }
    let mut r = rng(config.seed, 4);
    let cases: Vec<_> = (0..config.delta_cases)
        .map(|_| random_line_state(&mut r, domains.len(), |i| domains[i].q()))
        .collect();
    let outcomes = exec.map(&cases, |&(d, nu, nu0)| -> Result<(f64, f64, bool), String> {
        let domain = domains[d];
        let q = domain.q();
        let (set, _) = descriptor_set(domain);
        let c = ChargeFraction::new(nu, q).map_err(|e| e.to_string())?;
        let r0 = ReferenceFraction::new(nu0, q).map_err(|e| e.to_string())?;
        let direct = delta_h(domain, c, r0).map_err(|e| e.to_string())?;
        let by_mu = closed_form::delta_h_from_mu(&set, nu, nu0, q);
        let by_ai = closed_form::delta_h_from_ai(&set, nu, nu0, q);
        let spread = max_of([(direct - by_mu).abs(), (direct - by_ai).abs(), (by_mu - by_ai).abs()]);
        let edge = delta_h(domain, ChargeFraction::new(nu0, q).map_err(|e| e.to_string())?, r0)
            .map_err(|e| e.to_string())?;
        Ok((spread, direct, edge == 0.0))
    });
    let (mut spread, mut min_dh, mut errors, mut nonzero_edges) = (0.0f64, f64::INFINITY, 0, 0);
    for o in outcomes {
        match o {
            Ok((s, dh, edge_zero)) => {
                spread = spread.max(s);
                min_dh = min_dh.min(dh);
                nonzero_edges += usize::from(!edge_zero);
            }
            Err(_) => errors += 1,
        }
    }
    Check::new(
        "delta-h",
        errors == 0 && nonzero_edges == 0 && spread <= CLOSED_FORM_TOL && min_dh >= 0.0,
        format!(
            "cases={} max spread={spread:.3e} min dH={min_dh:.3e} nonzero at nu=nu0: {nonzero_edges} errors={errors}",
            cases.len()
        ),
    )
}

/// Energy strictly decreases from `gamma-` to `gamma+` on lines with `mu0 < 0`.
pub fn trend_check(pool: &[DomainSpec], config: &VerifyConfig, exec: Exec) -> Check {
    let domains = negative_mu(pool);
    if domains.is_empty() {
        return Check::new("trend", true, "skipped: no domain with mu0 < 0".into());
    }
    let mut r = rng(config.seed, 5);
    let lines: Vec<(usize, f64)> = (0..config.trend_lines)
        .map(|_| (r.random_range(0..domains.len()), r.random_range(0.0..=0.98)))
        .collect();
    let samples = config.trend_samples.max(3);
    let outcomes = exec.map(&lines, |&(d, w)| -> Result<bool, String> {
        let domain = domains[d];
        let e = energy_trend_check(domain, w, samples).map_err(|e| e.to_string())?;
        let q = domain.q();
        let reach = f64::from(q) * (1.0 - w);
        let left = edge_energy(domain, ReferenceFraction::new(-reach, q).map_err(|e| e.to_string())?);
        let right = edge_energy(domain, ReferenceFraction::new(reach, q).map_err(|e| e.to_string())?);
        let ends = (e[0] - left).abs() <= CLOSED_FORM_TOL && (e[samples - 1] - right).abs() <= CLOSED_FORM_TOL;
        Ok(ends && e.windows(2).all(|p| p[0] > p[1]))
    });
    let failures = outcomes.iter().filter(|o| !matches!(o, Ok(true))).count();
    Check::new(
        "trend",
        failures == 0,
        format!("lines={} samples={samples} failures={failures}", lines.len()),
    )
}

/// Direct subtraction vs the `eta0` form of `ΔU`, and `ΔU <= 0` going up.
pub fn delta_u_check(pool: &[DomainSpec], config: &VerifyConfig, exec: Exec) -> Check {
    let mut r = rng(config.seed, 6);
    let cases: Vec<(usize, f64, f64, f64)> = (0..config.delta_cases)
        .map(|_| {
            let (d, nu, nu0) = random_line_state(&mut r, pool.len(), |i| pool[i].q());
            // nu0' between nu and nu0 lies above the state at nu0
            let nu0_prime = nu + (nu0 - nu) * r.random_range(0.0..=1.0);
            (d, nu, nu0, nu0_prime)
        })
        .collect();
    let outcomes = exec.map(&cases, |&(d, nu, nu0, nu0p)| -> Result<(f64, bool), String> {
        let domain = &pool[d];
        let q = domain.q();
        let (set, _) = descriptor_set(domain);
        let du = delta_u(
            domain,
            ChargeFraction::new(nu, q).map_err(|e| e.to_string())?,
            ReferenceFraction::new(nu0, q).map_err(|e| e.to_string())?,
            ReferenceFraction::new(nu0p, q).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let closed = closed_form::delta_u_from_eta(&set, nu0, nu0p, q);
        let sign_ok = set.eta0 <= 0.0 || du <= 0.0;
        Ok(((du - closed).abs(), sign_ok))
    });
    let (mut dev, mut sign_failures, mut errors) = (0.0f64, 0, 0);
    for o in outcomes {
        match o {
            Ok((d, ok)) => {
                dev = dev.max(d);
                sign_failures += usize::from(!ok);
            }
            Err(_) => errors += 1,
        }
    }
    Check::new(
        "delta-u",
        errors == 0 && sign_failures == 0 && dev <= CLOSED_FORM_TOL,
        format!(
            "cases={} max|dU-eta form|={dev:.3e} positive dU={sign_failures} errors={errors}",
            cases.len()
        ),
    )
}

/// `Ē0 > E0^N` whenever `I^q > |A^q|`.
pub fn mean_energy_check(pool: &[DomainSpec]) -> Check {
    let mut applicable = 0;
    let mut failures = 0;
    for d in pool {
        let (set, _) = descriptor_set(d);
        if set.i_q > set.a_q.abs() {
            applicable += 1;
            failures += usize::from(set.e_bar <= d.e_neutral());
        }
    }
    Check::new(
        "mean-ionic-energy",
        failures == 0,
        format!("domains={applicable} failures={failures}"),
    )
}

/// Central differences of the energy against `mu0/q` and `±eta0/q`.
pub fn slope_check(pool: &[DomainSpec], config: &VerifyConfig, exec: Exec) -> Check {
    let mut r = rng(config.seed, 7);
    let cases: Vec<(usize, f64, f64)> = (0..config.slope_points)
        .map(|_| {
            let d = r.random_range(0..pool.len());
            let w = r.random_range(0.05..=0.95);
            let sign = if r.random_bool(0.5) { 1.0 } else { -1.0 };
            let x = sign * (1.0 - w) * r.random_range(0.1..=0.9);
            (d, x, w)
        })
        .collect();
    let outcomes = exec.map(&cases, |&(d, x, w)| -> Result<f64, String> {
        let domain = &pool[d];
        let qf = f64::from(domain.q());
        let (set, _) = descriptor_set(domain);
        let (d_nu, d_nu0) = slope_checks(domain, SimplexPoint::new(x, w), default_step(domain))
            .map_err(|e| e.to_string())?;
        let side = if x > 0.0 { 1.0 } else { -1.0 };
        let scale = set.mu0.abs().max(set.eta0.abs()) / qf;
        let rel = |got: f64, want: f64| (got - want).abs() / want.abs().max(scale);
        Ok(rel(d_nu, set.mu0 / qf).max(rel(d_nu0, side * set.eta0 / qf)))
    });
    let errors = outcomes.iter().filter(|o| o.is_err()).count();
    let worst = max_of(outcomes.into_iter().flatten());
    Check::new(
        "slopes",
        errors == 0 && worst <= SLOPE_TOL,
        format!("points={} max rel err={worst:.3e} errors={errors}", cases.len()),
    )
}

/// Region census of a scan: mirror symmetry, exhaustiveness and the area of
/// each interior against a quarter of the bounding rectangle.
pub fn region_census_check(domain: &DomainSpec, config: &VerifyConfig, exec: Exec) -> Check {
    let grid = config.scan_grid.max(2);
    let rows = match scan(domain, grid, exec) {
        Ok(rows) => rows,
        Err(e) => return Check::new("region-census", false, e.to_string()),
    };
    let counts = region_counts(&rows);
    let count = |r: Region| counts.get(&r).copied().unwrap_or(0);
    let plus = count(Region::InteriorAcceptor);
    let minus = count(Region::InteriorDonor);
    let inside = rows.len() - count(Region::Outside);
    let boundary: usize = Region::ALL.iter().filter(|r| r.is_boundary()).map(|&r| count(r)).sum();
    let area_fraction = plus as f64 / (grid * grid) as f64;
    let area_err = (area_fraction - 0.25).abs() / 0.25;
    let agree = rows
        .iter()
        .all(|r| r.region == classify(SimplexPoint::new(r.x, r.w_zero), DEFAULT_CLASSIFY_TOL));
    let monotone = descriptor_set(domain).0.mu0 >= 0.0
        || rows
            .chunks(grid + 1)
            .all(|row| {
                let e: Vec<f64> = row.iter().filter_map(|r| r.energy).collect();
                e.windows(2).all(|p| p[0] >= p[1])
            });
    Check::new(
        "region-census",
        plus == minus && plus + minus + boundary == inside && area_err <= AREA_TOL && agree && monotone,
        format!(
            "grid={grid} D+={plus} D-={minus} boundary={boundary} inside={inside} area rel err={area_err:.3e}"
        ),
    )
}

/// `Debug` prints the shortest round-trip form of every float, so equal text
/// means bit-identical values (including the sign of zero).
fn same_bits(a: &[SpeciesRecord], b: &[SpeciesRecord]) -> bool {
    format!("{a:?}") == format!("{b:?}")
}

/// Bit-exact write/parse round trips in both formats, and equality of the
/// domains rebuilt from absolute and descriptor encodings.
pub fn roundtrip_check(pool: &[DomainSpec], config: &VerifyConfig, exec: Exec) -> Check {
    let mut r = rng(config.seed, 8);
    let catalogs: Vec<Vec<SpeciesRecord>> = (0..config.roundtrip_catalogs)
        .map(|_| random_catalog(&mut r, 8))
        .collect();
    let broken = exec
        .map(&catalogs, |records| {
            [CatalogFormat::Json, CatalogFormat::Csv].iter().any(|&f| {
                let bytes = write_catalog(records, f);
                parse_catalog(&bytes[..], f).map_or(true, |back| !same_bits(&back, records))
            })
        })
        .into_iter()
        .filter(|&b| b)
        .count();
    let mode_dev = max_of(pool.iter().map(|d| {
        let desc = SpeciesRecord::descriptor(
            d.label(),
            d.n_electrons(),
            d.q(),
            d.e_neutral(),
            d.ionization(),
            d.affinity(),
        );
        match to_domain(&desc) {
            Ok(back) => max_of([
                (back.e_anion() - d.e_anion()).abs(),
                (back.e_cation() - d.e_cation()).abs(),
                (back.e_neutral() - d.e_neutral()).abs(),
            ]),
            Err(_) => f64::INFINITY,
        }
    }));
    Check::new(
        "catalog-roundtrip",
        broken == 0 && mode_dev <= WEIGHT_TOL,
        format!(
            "catalogs={} failed={broken} max|abs-descriptor|={mode_dev:.3e}",
            catalogs.len()
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_run_passes_and_is_deterministic() {
        let fixture = DomainSpec::new("fixture", 6, 1, -100.0, -99.0, -90.0).unwrap();
        let config = VerifyConfig::quick(11);
        let a = run(std::slice::from_ref(&fixture), &config, Exec::default());
        assert!(a.passed(), "{}", a.render());
        let b = run(std::slice::from_ref(&fixture), &config, Exec::Sequential);
        assert_eq!(a.render(), b.render());
    }

    #[test]
    fn empty_pool_fails() {
        let config = VerifyConfig {
            synthetic: 0,
            ..VerifyConfig::quick(0)
        };
        assert!(!run(&[], &config, Exec::Sequential).passed());
    }
}
