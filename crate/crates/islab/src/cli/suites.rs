//! The five suites. Each draws all randomness from one seeded generator
//! before dispatching pure work to the pool, so results do not depend on
//! scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::island::{link_saddles, r2_point, symmetry_and_identity_report, IslandMap, LinkSaddle, SurgeryProfile};
use crate::links::{
    closed_form_defect, contraction_factor, mean_after_link_a, random_model, random_trig, restoration_trial, Side,
    SolverOptions, TraceRow,
};
use crate::lyapunov::{
    cone_certificate, entropy_estimate, entropy_estimate_excluding, max_lyapunov, CellResult, EntropyReport, GridSpec,
};
use crate::rescaling::{corollary_composition, disc_grid, phi_maps, pointwise_error, random_quadratics, verify_rescaling};
use crate::symplectic::maps::{anosov_exponent, anosov_map, chirikov_map, rotation, torus_identity};
use crate::symplectic::scalar::Polynomial;
use crate::symplectic::{MapDescriptor, PlanePoint};

use super::config::{ExponentMap, IslandParams, LinksParams, LyapunovParams, RescalingParams, ScanParams};
use super::report::{Artifacts, Check, RunReport};
use super::CliError;

fn ln4() -> f64 {
    4f64.ln()
}

#[derive(Serialize)]
struct EntropySummary {
    estimate: f64,
    fraction: f64,
    threshold: f64,
    n: usize,
    grid: [usize; 2],
    valid_cells: usize,
    mean_lambda: f64,
}

impl EntropySummary {
    fn of(r: &EntropyReport) -> Self {
        Self {
            estimate: r.estimate,
            fraction: r.fraction_above,
            threshold: r.threshold,
            n: r.n,
            grid: [r.grid.nx, r.grid.ny],
            valid_cells: r.valid_cells,
            mean_lambda: r.mean_lambda(),
        }
    }
}

fn write_field(out: &mut Artifacts, cells: &[CellResult]) -> Result<(), CliError> {
    out.csv("lambda_field.csv", cells)
}

/// Island exponent fraction and Pesin bound on the grid, holes excluded.
fn island_entropy(
    map: &IslandMap,
    grid: usize,
    n: usize,
    min_fraction: f64,
    slack: f64,
    report: &mut RunReport,
    out: &mut Artifacts,
) -> Result<(), CliError> {
    let m = map.clone();
    let excluded = move |p: PlanePoint| m.in_hole(p, 0.0);
    match entropy_estimate_excluding(&map.descriptor(), GridSpec::torus(grid).expect("validated"), n, &excluded) {
        Ok(e) => {
            let delta = map.profile().delta;
            let bound = ln4() * (1.0 - 4.0 * std::f64::consts::PI * delta * delta) - slack;
            report.check(Check::at_least("exponent_fraction_above_ln4", e.fraction_above, min_fraction));
            report.check(Check::at_least("pesin_estimate", e.estimate, bound));
            report.metric("entropy", EntropySummary::of(&e));
            write_field(out, &e.cells)?;
            out.json("entropy_summary.json", &EntropySummary::of(&e))?;
        }
        Err(e) => report.error("entropy grid", e),
    }
    Ok(())
}

pub fn island(p: &IslandParams, report: &mut RunReport, out: &mut Artifacts) -> Result<(), CliError> {
    let map = match p.profile().and_then(|prof| IslandMap::with_flow_steps(prof, p.flow_steps)) {
        Ok(m) => m,
        Err(e) => {
            report.error("island map", e);
            return Ok(());
        }
    };
    match symmetry_and_identity_report(&map, p.samples) {
        Ok(s) => {
            report.check(Check::at_most("equivariance_defect", s.equivariance_defect, p.symmetry_tol));
            report.check(Check::at_most("identity_defect", s.identity_defect, p.identity_tol));
            report.check(Check::at_most("conjugacy_defect", s.conjugacy_defect, p.symmetry_tol));
            report.metric("symmetry", s);
        }
        Err(e) => report.error("symmetry report", e),
    }

    let det = (0..p.det_samples)
        .into_par_iter()
        .map(|k| {
            let (x, y) = r2_point(k);
            map.omega_hat_defect(PlanePoint::new(x, y))
        })
        .collect::<Result<Vec<f64>, _>>();
    match det {
        Ok(v) => report.check(Check::at_most("area_form_defect", v.into_iter().fold(0.0, f64::max), p.det_tol)),
        Err(e) => report.error("area form", e),
    }

    let e2s = (2.0 * map.sigma()).exp();
    let mut rows: Vec<LinkSaddle> = Vec::new();
    let mut links_ok = 0usize;
    let mut eig_err: f64 = 0.0;
    for link in 0..4 {
        match link_saddles(link, &map) {
            Ok(s) => {
                if s.len() == 4 {
                    links_ok += 1;
                }
                for sd in &s {
                    eig_err = eig_err
                        .max((sd.fd_unstable_eigenvalue / e2s - 1.0).abs())
                        .max((sd.fd_stable_eigenvalue * e2s - 1.0).abs())
                        .max((sd.unstable_eigenvalue / e2s - 1.0).abs());
                }
                rows.extend(s);
            }
            Err(e) => report.error("saddles", e),
        }
    }
    report.check(Check::equal("links_with_four_saddles", links_ok as f64, 4.0));
    report.check(Check::at_most("saddle_eigenvalue_rel_error", eig_err, p.eigen_tol));
    out.json("saddles.json", &rows)?;

    island_entropy(&map, p.grid, p.horizon, p.min_fraction, p.entropy_slack, report, out)
}

#[derive(Serialize)]
struct PointRow {
    x: f64,
    y: f64,
    lambda: f64,
    lambda_2n: f64,
    tangent_lambda: f64,
}

fn exponent_points(f: &MapDescriptor, pts: &[PlanePoint], n: usize) -> Result<Vec<PointRow>, crate::lyapunov::LyapunovError> {
    pts.par_iter()
        .map(|&q| {
            let a = max_lyapunov(f, q, n)?;
            let b = max_lyapunov(f, q, 2 * n)?;
            Ok(PointRow { x: q.x, y: q.y, lambda: a.lambda, lambda_2n: b.lambda, tangent_lambda: a.tangent_lambda })
        })
        .collect()
}

pub fn lyapunov(p: &LyapunovParams, seed: u64, report: &mut RunReport, out: &mut Artifacts) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<PlanePoint> = (0..p.points).map(|_| PlanePoint::new(rng.gen(), rng.gen())).collect();
    let grid = GridSpec::torus(p.grid).expect("validated");
    let island = if p.map == ExponentMap::Island {
        match SurgeryProfile::new(p.delta, p.epsilon).and_then(IslandMap::new) {
            Ok(m) => Some(m),
            Err(e) => {
                report.error("island map", e);
                return Ok(());
            }
        }
    } else {
        None
    };
    let f = match p.map {
        ExponentMap::Anosov => anosov_map(),
        ExponentMap::Identity => torus_identity(),
        ExponentMap::Chirikov => chirikov_map(p.chirikov_a),
        ExponentMap::Island => island.as_ref().expect("built above").descriptor(),
    };
    // Island orbits starting in a hole never leave it and are not sampled.
    let pts: Vec<PlanePoint> = match &island {
        Some(m) => pts.into_iter().filter(|q| !m.in_hole(*q, 0.0)).collect(),
        None => pts,
    };
    let rows = match exponent_points(&f, &pts, p.n) {
        Ok(r) => r,
        Err(e) => {
            report.error("exponents", e);
            return Ok(());
        }
    };
    out.csv("exponents.csv", &rows)?;
    let probe = rows.iter().map(|r| (r.lambda - r.lambda_2n).abs()).fold(0.0, f64::max);
    report.metric("stability_probe_max", probe);
    report.metric("points", rows.len());

    match p.map {
        ExponentMap::Anosov => {
            let sigma = anosov_exponent();
            let err = rows.iter().map(|r| (r.lambda - sigma).abs()).fold(0.0, f64::max);
            report.metric("sigma", sigma);
            report.check(Check::at_most("exponent_error", err, p.tol));
            let cone = pts.par_iter().map(|&q| cone_certificate(&f, q, p.cone_steps)).collect::<Result<Vec<_>, _>>();
            match cone {
                Ok(c) => report.check(Check::equal(
                    "cone_certificate_failures",
                    c.iter().filter(|c| !c.holds).count() as f64,
                    0.0,
                )),
                Err(e) => report.error("cone certificate", e),
            }
            match cone_certificate(&rotation(std::f64::consts::FRAC_PI_2), PlanePoint::new(0.3, 0.1), p.cone_steps) {
                Ok(c) => report.check(Check::equal("rotation_cone_failed_step", c.failed_step.unwrap_or(0) as f64, 1.0)),
                Err(e) => report.error("rotation certificate", e),
            }
            match entropy_estimate(&f, grid, p.n) {
                Ok(e) => {
                    report.check(Check::at_most("entropy_error", (e.estimate - sigma).abs(), p.tol));
                    report.metric("entropy", EntropySummary::of(&e));
                    write_field(out, &e.cells)?;
                    out.json("entropy_summary.json", &EntropySummary::of(&e))?;
                }
                Err(e) => report.error("entropy grid", e),
            }
        }
        ExponentMap::Identity => {
            let worst = rows.iter().map(|r| r.lambda.abs()).fold(0.0, f64::max);
            report.check(Check::equal("exponent", worst, 0.0));
            match entropy_estimate(&f, grid, p.n) {
                Ok(e) => {
                    report.check(Check::equal("entropy", e.estimate, 0.0));
                    write_field(out, &e.cells)?;
                    out.json("entropy_summary.json", &EntropySummary::of(&e))?;
                }
                Err(e) => report.error("entropy grid", e),
            }
        }
        ExponentMap::Chirikov => match entropy_estimate(&f, grid, p.n) {
            Ok(e) => {
                report.metric("entropy", EntropySummary::of(&e));
                write_field(out, &e.cells)?;
                out.json("entropy_summary.json", &EntropySummary::of(&e))?;
            }
            Err(e) => report.error("entropy grid", e),
        },
        ExponentMap::Island => {
            let below = rows.iter().filter(|r| r.lambda < ln4()).count();
            report.metric("sampled_points_below_ln4", below);
            let m = island.expect("built above");
            island_entropy(&m, p.grid, p.n, p.min_fraction, p.entropy_slack, report, out)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ScanRow {
    a: f64,
    mean_lambda: f64,
    entropy: f64,
    fraction_above: f64,
}

pub fn stdmap_scan(p: &ScanParams, report: &mut RunReport, out: &mut Artifacts) -> Result<(), CliError> {
    let grid = GridSpec::torus(p.grid).expect("validated");
    let mut rows = Vec::new();
    for a in p.values() {
        match entropy_estimate(&chirikov_map(a), grid, p.n) {
            Ok(e) => rows.push(ScanRow { a, mean_lambda: e.mean_lambda(), entropy: e.estimate, fraction_above: e.fraction_above }),
            Err(e) => report.error(&format!("a = {a}"), e),
        }
    }
    report.metric("parameter_values", rows.len());
    out.csv("stdmap_scan.csv", &rows)
}

#[derive(Serialize)]
struct ClosedFormRow {
    trial: usize,
    defect_a: f64,
    defect_b: f64,
}

#[derive(Serialize)]
struct FactorRow {
    trial: usize,
    factor: f64,
}

#[derive(Serialize)]
struct MeanRow {
    trial: usize,
    mean_b: f64,
    residual_a: f64,
}

#[derive(Serialize)]
struct RestorationRow {
    trial: usize,
    iterations_a: usize,
    iterations_b: usize,
    residual_a: f64,
    residual_b: f64,
    gap_a: f64,
    gap_b: f64,
}

fn worst<T>(v: &[T], f: impl Fn(&T) -> f64) -> f64 {
    v.iter().map(f).fold(0.0, f64::max)
}

pub fn links(p: &LinksParams, seed: u64, report: &mut RunReport, out: &mut Artifacts) -> Result<(), CliError> {
    let g = p.geometry;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = (0..p.closed_form_trials)
        .map(|_| {
            let a = random_trig(&mut rng, &g, Side::A, p.harmonics, p.amplitude, false);
            (a, random_trig(&mut rng, &g, Side::B, p.harmonics, p.amplitude, false))
        })
        .collect();
    let zero_mean: Vec<_> =
        (0..p.contraction_trials).map(|_| random_trig(&mut rng, &g, Side::B, p.harmonics, p.amplitude, true)).collect();
    let mut models = |count: usize| -> Result<Vec<_>, crate::links::LinkError> {
        (0..count).map(|_| random_model(&mut rng, &g, p.size)).collect()
    };
    let (mean_models, trial_models) = match models(p.mean_trials).and_then(|a| Ok((a, models(p.perturbations)?))) {
        Ok(m) => m,
        Err(e) => {
            report.error("perturbations", e);
            return Ok(());
        }
    };
    let opts = SolverOptions { tol: p.solver_tol, max_iter: p.max_iter, ..SolverOptions::default() };

    if !pairs.is_empty() {
        match pairs.par_iter().map(|(a, b)| closed_form_defect(&g, a, b)).collect::<Result<Vec<_>, _>>() {
            Ok(d) => {
                report.check(Check::at_most("closed_form_a", worst(&d, |x| x.a), p.closed_form_tol));
                report.check(Check::at_most("closed_form_b", worst(&d, |x| x.b), p.closed_form_tol));
                let rows: Vec<_> =
                    d.iter().enumerate().map(|(trial, x)| ClosedFormRow { trial, defect_a: x.a, defect_b: x.b }).collect();
                out.csv("closed_forms.csv", &rows)?;
            }
            Err(e) => report.error("closed forms", e),
        }
    }
    if !zero_mean.is_empty() {
        match zero_mean.par_iter().map(|q| contraction_factor(&g, q)).collect::<Result<Vec<_>, _>>() {
            Ok(f) => {
                report.check(Check::at_most("contraction_factor", worst(&f, |x| *x), p.contraction_max));
                let rows: Vec<_> = f.iter().enumerate().map(|(trial, &factor)| FactorRow { trial, factor }).collect();
                out.csv("contraction.csv", &rows)?;
            }
            Err(e) => report.error("contraction", e),
        }
    }
    if !mean_models.is_empty() {
        match mean_models.par_iter().map(|m| mean_after_link_a(m, opts)).collect::<Result<Vec<_>, _>>() {
            Ok(v) => {
                report.check(Check::at_most("mean_b", worst(&v, |x| x.0), p.mean_tol));
                let rows: Vec<_> =
                    v.iter().enumerate().map(|(trial, x)| MeanRow { trial, mean_b: x.0, residual_a: x.1 }).collect();
                out.csv("mean_b.csv", &rows)?;
            }
            Err(e) => report.error("mean of M^b", e),
        }
    }

    let trials: Vec<_> = trial_models.par_iter().map(|m| restoration_trial(m, opts, p.gap_points)).collect();
    let mut rows = Vec::new();
    let mut failures = 0usize;
    for (i, t) in trials.iter().enumerate() {
        match t {
            Ok(t) => rows.push(RestorationRow {
                trial: i,
                iterations_a: t.a.iterations,
                iterations_b: t.b.iterations,
                residual_a: t.a.final_residual,
                residual_b: t.b.final_residual,
                gap_a: t.gap_a,
                gap_b: t.gap_b,
            }),
            Err(e) => {
                failures += 1;
                report.error(&format!("restoration trial {i}"), e);
            }
        }
    }
    report.check(Check::equal("restoration_failures", failures as f64, 0.0));
    if !rows.is_empty() {
        let iters = rows.iter().map(|r| r.iterations_a.max(r.iterations_b)).max().unwrap_or(0);
        report.check(Check::at_most("restoration_iterations", iters as f64, p.max_iter as f64));
        report.check(Check::at_most("restoration_residual", worst(&rows, |r| r.residual_a.max(r.residual_b)), p.residual_tol));
        report.check(Check::at_most("restored_curve_gap", worst(&rows, |r| r.gap_a.max(r.gap_b)), p.curve_tol));
        out.csv("restoration.csv", &rows)?;
    }
    if let Some(Ok(first)) = trials.first() {
        out.csv::<TraceRow>("residuals.csv", &first.b.trace)?;
        out.csv::<TraceRow>("residuals_a.csv", &first.a.trace)?;
        out.json("psi_a.json", &first.a.psi_tilde.to_sampled())?;
        out.json("psi_b.json", &first.b.psi_tilde.to_sampled())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EkRow {
    k: usize,
    n: usize,
    error: f64,
    phi_defect: f64,
}

#[derive(Serialize)]
struct GridErrorRow {
    x: f64,
    y: f64,
    error: f64,
}

pub fn rescaling(p: &RescalingParams, seed: u64, report: &mut RunReport, out: &mut Artifacts) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<Vec<Polynomial>> =
        (0..p.psi_sets).map(|_| random_quadratics(&mut rng, p.n_legs, p.psi_amplitude)).collect();
    let prefix = random_quadratics(&mut rng, p.corollary_prefix, p.psi_amplitude);
    let last = random_quadratics(&mut rng, 1, p.psi_amplitude).remove(0);
    let grid = disc_grid(p.grid_points);
    let ks = &p.k_values;
    let model = match p.model() {
        Ok(m) => m,
        Err(e) => {
            report.error("model", e);
            return Ok(());
        }
    };

    match verify_rescaling(&model, ks, &sets[0], &grid) {
        Ok(rep) => {
            let e: Vec<f64> = rep.rows.iter().map(|r| r.error).collect();
            if p.is_affine() {
                report.check(Check::at_most("affine_error", e.iter().copied().fold(0.0, f64::max), p.affine_tol));
            } else {
                let drops = e.windows(2).filter(|w| !(w[1] < w[0])).count();
                report.check(
                    Check::equal("error_non_decreasing_steps", drops as f64, 0.0).with_detail(format!("E(k) = {e:?}")),
                );
                report.check(Check::at_most("error_at_largest_k", *e.last().expect("k list validated"), p.error_max));
            }
            let rows: Vec<EkRow> =
                rep.rows.iter().map(|r| EkRow { k: r.k, n: r.n, error: r.error, phi_defect: r.phi_defect }).collect();
            out.csv("e_of_k.csv", &rows)?;
            out.json("rescaling_rows.json", &rep.rows)?;
            report.metric("rows", &rep.rows);
        }
        Err(e) => report.error("rescaling sweep", e),
    }

    let kmax = *ks.iter().max().expect("k list validated");
    match pointwise_error(&model, kmax, &sets[0], &grid) {
        Ok(v) => {
            let rows: Vec<_> = grid.iter().zip(v).map(|(q, error)| GridErrorRow { x: q.x, y: q.y, error }).collect();
            out.csv("pointwise_error.csv", &rows)?;
        }
        Err(e) => report.error("pointwise error", e),
    }

    if p.affine_check && !p.is_affine() {
        match p.affine_model().and_then(|m| verify_rescaling(&m, ks, &sets[0], &grid)) {
            Ok(rep) => {
                let w = rep.rows.iter().map(|r| r.error.max(r.phi_defect)).fold(0.0, f64::max);
                report.check(Check::at_most("affine_error", w, p.affine_tol));
                let rows: Vec<EkRow> =
                    rep.rows.iter().map(|r| EkRow { k: r.k, n: r.n, error: r.error, phi_defect: r.phi_defect }).collect();
                out.csv("e_of_k_affine.csv", &rows)?;
            }
            Err(e) => report.error("affine sweep", e),
        }
    }

    if sets.len() > 1 {
        let mut spread: f64 = 0.0;
        let mut failed = false;
        for &k in ks {
            match sets.iter().map(|s| phi_maps(&model, k, s, &grid)).collect::<Result<Vec<_>, _>>() {
                Ok(all) => {
                    for other in &all[1..] {
                        for (u, v) in all[0].iter().zip(other) {
                            spread = u.iter().zip(v).fold(spread, |m, (a, b)| m.max(a.dist(*b)));
                        }
                    }
                }
                Err(e) => {
                    failed = true;
                    report.error(&format!("Φ maps at k = {k}"), e);
                }
            }
        }
        if !failed {
            report.check(Check::at_most("phi_psi_dependence", spread, p.phi_tol));
        }
    }

    match corollary_composition(&prefix, &last) {
        Ok(pair) => match pair.defect(&disc_grid(p.corollary_points)) {
            Ok(d) => report.check(Check::at_most("corollary_identity", d, p.corollary_tol)),
            Err(e) => report.error("corollary", e),
        },
        Err(e) => report.error("corollary", e),
    }
    Ok(())
}
