use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context};
use dualrlpn::asymptotics::{exponent_curve, Algorithm, OptimizerOptions};
use dualrlpn::codes::{gv_distance, random_code_with, DecodingInstance, Partition};
use dualrlpn::decoder::double_rlpn;
use dualrlpn::duality::{
    candidate_bound, duality_check as check_identity, experimental_survival, independence_survival, poisson_survival,
    ExperimentRun, ScoreAxis,
};
use dualrlpn::krawtchouk::{KrawtchoukTable, MAX_ORDER};
use dualrlpn::lattice::{floor_onset, survival_refined, LatticeScoreParams, RefinedOptions, MIN_MC_TRIALS};
use dualrlpn::samples::{AuxCode, AuxStructure};
use dualrlpn::{BitVec, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{self, config_error, range, DecodeConfig, LatticeConfig, SurvivalConfig, FORMAT_VERSION};
use crate::output::{fmt_f64, write_csv, write_file, Csv, Meta};
use crate::Global;

const MIN_POISSON_TRIALS: u64 = 10_000;

/// Turns a library validation failure into a configuration error.
fn bad(context: &str) -> impl FnOnce(Error) -> anyhow::Error + '_ {
    move |e| config_error(format!("{context}: {e}"))
}

/// Sets up the global pool once; returns the worker count in use.
fn init_threads(requested: Option<usize>) -> anyhow::Result<usize> {
    let n = requested.unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("starting the worker pool")?;
    Ok(rayon::current_num_threads())
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

pub fn krawtchouk(g: Global, n: usize, w: usize, out: Option<&Path>) -> anyhow::Result<()> {
    if n > MAX_ORDER || w > n {
        return Err(config_error(format!("need w <= n <= {MAX_ORDER}, got n = {n}, w = {w}")));
    }
    let threads = init_threads(g.threads)?;
    let start = Instant::now();
    let table = KrawtchoukTable::new(n, w).map_err(bad("krawtchouk"))?;
    let mut csv = Csv::new(&["t", "value"])?;
    for t in 0..=n {
        csv.row([t.to_string(), table.get(t).to_string()])?;
    }
    match out {
        Some(path) => {
            let meta = Meta {
                command: command_line(),
                seed: g.seed.unwrap_or(0),
                threads,
                wall_time_ms: start.elapsed().as_millis(),
                config: json!({ "n": n, "w": w }),
                notes: json!({ "value": "exact integer" }),
            };
            write_csv(path, csv, &meta)
        }
        None => {
            std::io::stdout().write_all(&csv.into_bytes()?)?;
            Ok(())
        }
    }
}

pub fn decode(g: Global, path: &Path, out: Option<&Path>) -> anyhow::Result<()> {
    let cfg: DecodeConfig = config::load(path)?;
    if cfg.k == 0 || cfg.k >= cfg.n {
        return Err(config_error(format!("need 0 < k < n, got n = {}, k = {}", cfg.n, cfg.k)));
    }
    let t = cfg.t.unwrap_or_else(|| gv_distance(cfg.n, cfg.k));
    if t > cfg.n {
        return Err(config_error(format!("t = {t} exceeds n = {}", cfg.n)));
    }
    if t > 0 {
        cfg.params.validate(cfg.n, cfg.k, t).map_err(bad("params"))?;
    }
    let seed = g.seed.unwrap_or(cfg.seed);
    init_threads(g.threads.or(cfg.threads))?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code = random_code_with(cfg.n, cfg.k, &mut rng)?;
    let inst = DecodingInstance::planted(code, t, &mut rng);
    let outcome = double_rlpn(&inst, &cfg.params)?;
    let record = json!({
        "format_version": FORMAT_VERSION,
        "found": outcome.e.is_some(),
        "e": outcome.e.as_ref().map(BitVec::to_hex),
        "trials_used": outcome.trials_used,
        "n_iter": outcome.n_iter,
        "wall_time_ms": start.elapsed().as_millis() as u64,
    });
    let mut text = serde_json::to_string_pretty(&record)?;
    text.push('\n');
    match out {
        Some(p) => write_file(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn survival(g: Global, path: &Path, out: &Path) -> anyhow::Result<()> {
    let cfg: SurvivalConfig = config::load(path)?;
    let model = cfg.model;
    model.validate().map_err(bad("model"))?;
    let sv = &cfg.survival;
    if sv.sample_budget == Some(0) {
        return Err(config_error("survival.sample_budget must be positive"));
    }
    if sv.poisson_trials < MIN_POISSON_TRIALS {
        return Err(config_error(format!("survival.poisson_trials must be at least {MIN_POISSON_TRIALS}")));
    }
    if sv.region_exponent.is_nan() || sv.region_exponent < 0.0 {
        return Err(config_error("survival.region_exponent must be non-negative"));
    }
    let selection = sv.candidates.selection()?;
    let explicit = sv.thresholds.as_ref().map(|t| t.points("survival.thresholds")).transpose()?;
    let seed = g.seed.unwrap_or(cfg.seed);
    let threads = init_threads(g.threads.or(cfg.threads))?;
    let start = Instant::now();

    let run = ExperimentRun::generate(&model, sv.sample_budget, seed)?;
    let grid = match explicit {
        Some(t) => t,
        None => {
            let mut g: Vec<f64> = run
                .wrong_scores(selection, seed)
                .into_iter()
                .filter(|&x| x >= 0)
                .map(|x| x as f64)
                .collect();
            g.dedup();
            if g.is_empty() {
                g.push(0.0);
            }
            g
        }
    };
    let axis = if run.complete {
        ScoreAxis::FullSet
    } else {
        ScoreAxis::Subsampled {
            samples: run.samples_used as u64,
        }
    };
    let experimental = experimental_survival(&run, selection, Some(&grid), seed)?;
    let poisson = poisson_survival(&model, &grid, sv.poisson_trials, seed, axis)?;
    let independence = independence_survival(model.k_aux, run.samples_used.max(1) as u64, &grid)?;
    let bound = candidate_bound(&model, sv.region_exponent)?;

    let mut csv = Csv::new(&["label", "threshold", "count", "ci_low", "ci_high"])?;
    for c in [&experimental, &poisson, &independence] {
        csv.curve(c)?;
    }
    let meta = Meta {
        command: command_line(),
        seed,
        threads,
        wall_time_ms: start.elapsed().as_millis(),
        config: serde_json::to_value(&cfg)?,
        notes: json!({
            "threshold_units": "raw",
            "axis": if run.complete { "full set" } else { "subsampled" },
            "samples_used": run.samples_used,
            "htilde_total": run.htilde_total,
            "secret_score": run.secret_score(),
            "candidate_count": run.candidate_count(),
            "candidate_bound_times_n4": bound.value * (model.n as f64).powi(4),
        }),
    };
    write_csv(out, csv, &meta)
}

pub fn exponent(
    g: Global,
    algs: &[String],
    (rmin, rmax, step): (f64, f64, f64),
    out: &Path,
    restarts: usize,
    n_aux: usize,
) -> anyhow::Result<()> {
    let algorithms = algs
        .iter()
        .map(|a| a.parse::<Algorithm>().map_err(bad("--algs")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let rates = range(rmin, rmax, step).map_err(|m| config_error(format!("rate grid: {m}")))?;
    if rates.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(config_error("rates must lie strictly between 0 and 1"));
    }
    if n_aux == 0 {
        return Err(config_error("--n-aux must be at least 1"));
    }
    let seed = g.seed.unwrap_or(0);
    let threads = init_threads(g.threads)?;
    let start = Instant::now();
    let opts = OptimizerOptions {
        restarts,
        seed,
        n_aux,
        ..Default::default()
    };
    let rows = exponent_curve(&algorithms, &rates, &opts)?;
    let mut csv = Csv::new(&[
        "algorithm", "R", "tau", "alpha", "feasible", "sigma", "R_aux", "tau_aux", "omega", "mu",
    ])?;
    for row in &rows {
        let mut fields = vec![
            row.algorithm.as_str().to_string(),
            fmt_f64(row.rate),
            fmt_f64(row.tau),
            fmt_f64(row.alpha),
            row.feasible.to_string(),
        ];
        match row.argmin {
            Some(p) => fields.extend([p.sigma, p.r_aux, p.tau_aux, p.omega, p.mu].map(fmt_f64)),
            None => fields.extend(std::iter::repeat_n(String::new(), 5)),
        }
        csv.row(fields)?;
    }
    let meta = Meta {
        command: command_line(),
        seed,
        threads,
        wall_time_ms: start.elapsed().as_millis(),
        config: json!({
            "algs": algorithms.iter().map(Algorithm::as_str).collect::<Vec<_>>(),
            "rmin": rmin, "rmax": rmax, "step": step,
            "restarts": restarts, "n_aux": n_aux,
        }),
        notes: json!({
            "tau": "h^-1(1 - R); bjmm-eq rows report the dual weight h^-1(R) in this column",
            "units": "log2 of the cost, divided by n",
        }),
    };
    write_csv(out, csv, &meta)
}

pub struct CurveOverrides {
    pub mc_trials: Option<u64>,
    pub points: Option<usize>,
    pub max_sds: Option<f64>,
}

pub fn lattice_score(g: Global, preset: &str, config: Option<&Path>, out: &Path, o: CurveOverrides) -> anyhow::Result<()> {
    let mut cfg = match (preset, config) {
        ("custom", Some(path)) => config::load::<LatticeConfig>(path)?,
        ("custom", None) => return Err(config_error("--preset custom needs --config")),
        (_, Some(_)) => return Err(config_error("--config is only read with --preset custom")),
        (name, None) => LatticeConfig {
            format_version: FORMAT_VERSION,
            seed: 0,
            threads: None,
            lattice: LatticeScoreParams::preset(name).map_err(bad("--preset"))?,
            curve: Default::default(),
        },
    };
    cfg.lattice.validate().map_err(bad("lattice"))?;
    let c = &mut cfg.curve;
    c.mc_trials = o.mc_trials.unwrap_or(c.mc_trials);
    c.points = o.points.unwrap_or(c.points);
    c.max_sds = o.max_sds.unwrap_or(c.max_sds);
    if c.mc_trials < MIN_MC_TRIALS {
        return Err(config_error(format!("mc_trials must be at least {MIN_MC_TRIALS}")));
    }
    if c.points < 2 || c.points > 100_000 {
        return Err(config_error("points must lie in [2, 100000]"));
    }
    if !(c.max_sds > 0.0 && c.max_sds.is_finite()) {
        return Err(config_error("max_sds must be positive"));
    }
    if c.fall_variance.is_some_and(|v| !(v >= 0.0 && v.is_finite())) {
        return Err(config_error("fall_variance must be non-negative"));
    }
    let seed = g.seed.unwrap_or(cfg.seed);
    let threads = init_threads(g.threads.or(cfg.threads))?;
    let start = Instant::now();

    let p = cfg.lattice;
    let sd = c.fall_variance.unwrap_or(p.n_vectors / 2.0).sqrt();
    let top = c.max_sds * sd.max(1.0);
    let thresholds: Vec<f64> = (0..c.points).map(|i| top * i as f64 / (c.points - 1) as f64).collect();
    let opts = RefinedOptions {
        fall_variance: c.fall_variance,
        mc_trials: c.mc_trials,
        seed,
        floor_index: c.floor_index,
        ..Default::default()
    };
    let curves = survival_refined(&p, &thresholds, &opts)?;
    let (j_gh, onset) = floor_onset(&p)?;
    let mut csv = Csv::new(&["model", "threshold", "survival", "ci_low", "ci_high"])?;
    for curve in curves.all() {
        csv.curve(curve)?;
    }
    let meta = Meta {
        command: command_line(),
        seed,
        threads,
        wall_time_ms: start.elapsed().as_millis(),
        config: json!({ "preset": preset, "lattice": p, "curve": c }),
        notes: json!({
            "threshold_units": "raw",
            "fall_sd": sd,
            "gaussian_heuristic_radius_j": j_gh,
            "floor_onset_threshold": onset,
            "ln_volume": p.ln_volume(),
        }),
    };
    write_csv(out, csv, &meta)
}

#[derive(Clone, Copy, Debug)]
pub struct CheckShape {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub k_aux: usize,
    pub t_aux: usize,
    pub w: usize,
    pub t: usize,
}

/// Retries per requested trial before giving up on instances with an empty `H̃`.
const CHECK_RETRIES: usize = 100;

pub fn duality_check(g: Global, shape: CheckShape, trials: usize) -> anyhow::Result<()> {
    let CheckShape { n, k, s, k_aux, t_aux, w, t } = shape;
    if !(0 < k && k < n && s <= k && k_aux <= s && t_aux <= s && w <= n - s && t <= n) {
        return Err(config_error(format!("inconsistent shape {shape:?}")));
    }
    if trials == 0 {
        return Err(config_error("--trials must be positive"));
    }
    init_threads(g.threads)?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed.unwrap_or(0));
    let (mut exact, mut done, mut skipped) = (0usize, 0usize, 0usize);
    while done < trials {
        if skipped > CHECK_RETRIES * trials {
            bail!("gave up after {skipped} instances with no usable sample set");
        }
        let code = random_code_with(n, k, &mut rng)?;
        let part = Partition::random(n, s, &mut rng)?;
        let aux = AuxCode::random(s, k_aux, t_aux, AuxStructure::Single, &mut rng)?;
        let inst = DecodingInstance::planted(code, t, &mut rng);
        let e = inst.e.clone().expect("planted instance carries its error");
        let x = BitVec::random(s, &mut rng);
        match check_identity(&inst.code, &aux, &part, &e, &inst.y, &x, w) {
            Ok((lhs, rhs)) => {
                done += 1;
                if lhs == rhs {
                    exact += 1;
                }
            }
            Err(Error::EmptySamples | Error::RankDeficient) => skipped += 1,
            Err(err) => return Err(err.into()),
        }
    }
    println!("{exact}/{trials} exact");
    if skipped > 0 {
        println!("({skipped} instances with an empty or degenerate sample set were redrawn)");
    }
    if exact != trials {
        bail!("{} of {trials} instances violate the identity", trials - exact);
    }
    Ok(())
}
