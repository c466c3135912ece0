use std::fs::File;
use std::io::BufWriter;

use serde_json::json;

use super::args::{
    BatchArgs, BergerArgs, FdrArgs, InflationArgs, PowerArgs, ScreenArgs, SimulateArgs,
};
use super::report::{Cell, Report};
use super::Failure;
use fdrlab::fdr::{
    alpha_for_target_fdr, berger_min_bayes_factor, berger_min_fdr, berger_table, posterior_odds,
    screening_breakdown, significance_breakdown, Breakdown, DiagnosticSpec, TestScenario,
    REFERENCE_P_VALUES,
};
use fdrlab::montecarlo::{
    inflation_curve, interval_fdr, mixture_fdr, run_batch, simulate_mixture, SimConfig,
};
use fdrlab::power::{power_two_sample, solve_n, PowerQuery};
use fdrlab::Error;

fn warn(lines: &[String]) {
    for l in lines {
        eprintln!("warning: {l}");
    }
}

fn breakdown_cells(b: &Breakdown) -> Vec<(&'static str, Cell)> {
    vec![
        ("true_pos", b.true_pos.into()),
        ("false_pos", b.false_pos.into()),
        ("true_neg", b.true_neg.into()),
        ("false_neg", b.false_neg.into()),
        ("fdr", b.fdr.into()),
        ("ppv", b.ppv.into()),
        ("npv", b.npv.into()),
        ("fnr_among_negatives", b.fnr_among_negatives.into()),
    ]
}

pub fn screen(a: &ScreenArgs) -> Result<Report, Failure> {
    let spec = DiagnosticSpec::new(a.prevalence, a.sensitivity, a.specificity)?;
    let b = screening_breakdown(&spec, a.population)?;
    warn(&b.warnings);
    let json = json!({ "spec": spec, "population": a.population, "breakdown": b });
    Ok(Report::record(breakdown_cells(&b), &json))
}

pub fn fdr(a: &FdrArgs) -> Result<Report, Failure> {
    let scenario = TestScenario::new(a.prevalence, a.power, a.alpha)?;
    let b = significance_breakdown(&scenario, a.n_tests)?;
    let odds = posterior_odds(&scenario)?;
    warn(&b.warnings);
    let mut cells = breakdown_cells(&b);
    cells.extend([
        ("prior_odds_h0", odds.prior_odds_h0.into()),
        ("likelihood_ratio_h0_h1", odds.likelihood_ratio_h0_h1.into()),
        ("posterior_odds_h0", odds.posterior_odds_h0.into()),
    ]);
    let json = json!({
        "scenario": scenario,
        "n_tests": a.n_tests,
        "breakdown": b,
        "odds": odds,
    });
    Ok(Report::record(cells, &json))
}

pub fn berger(a: &BergerArgs) -> Result<Report, Failure> {
    if let Some(p) = a.p {
        let bf = berger_min_bayes_factor(p)?;
        let fdr = berger_min_fdr(p)?;
        let json = json!({ "p": p, "bayes_factor": bf, "min_fdr": fdr });
        return Ok(Report::record(
            vec![
                ("p", p.into()),
                ("bayes_factor", bf.into()),
                ("min_fdr", fdr.into()),
            ],
            &json,
        ));
    }
    if let Some(target) = a.target_fdr {
        let p = alpha_for_target_fdr(target)?;
        let json = json!({ "target_fdr": target, "p": p });
        return Ok(Report::record(
            vec![("target_fdr", target.into()), ("p", p.into())],
            &json,
        ));
    }
    let rows = berger_table(&REFERENCE_P_VALUES)?;
    let mut r = Report::new(vec!["p", "bayes_factor", "min_fdr"], &rows);
    for row in &rows {
        r.push(vec![
            row.p.into(),
            row.bayes_factor.into(),
            row.min_fdr.into(),
        ]);
    }
    Ok(r)
}

pub fn power(a: &PowerArgs) -> Result<Report, Failure> {
    let n = match (a.n, a.target) {
        (Some(n), _) => n,
        (None, Some(target)) => solve_n(target, a.d, a.alpha)?,
        (None, None) => return Err(Error::Config("--solve needs --target".into()).into()),
    };
    let q = PowerQuery::new(n, a.d, a.alpha)?;
    let power = power_two_sample(&q)?;
    let json = json!({
        "n_per_group": n,
        "effect_size": a.d,
        "alpha": a.alpha,
        "df": q.df(),
        "noncentrality": q.noncentrality(),
        "power": power,
        "target": if a.solve { a.target } else { None },
    });
    let mut cells = vec![
        ("n_per_group", Cell::from(n)),
        ("effect_size", a.d.into()),
        ("alpha", a.alpha.into()),
        ("df", q.df().into()),
        ("noncentrality", q.noncentrality().into()),
        ("power", power.into()),
    ];
    if a.solve {
        cells.push(("target", a.target.into()));
    }
    Ok(Report::record(cells, &json))
}

fn pool(batch: &BatchArgs) -> Result<rayon::ThreadPool, Failure> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = batch.threads {
        b = b.num_threads(t);
    }
    b.build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")).into())
}

fn base_config(n_per_group: usize, batch: &BatchArgs) -> SimConfig {
    SimConfig {
        n_per_group,
        sd: batch.sd,
        n_sims: batch.n_sims,
        alpha: batch.alpha,
        master_seed: batch.seed,
        ..SimConfig::default()
    }
    .with_difference(batch.delta)
}

pub fn simulate(a: &SimulateArgs) -> Result<Report, Failure> {
    let config = base_config(a.n_per_group, &a.batch);
    let pool = pool(&a.batch)?;
    match a.prevalence {
        Some(prevalence) => pool.install(|| simulate_mixed(a, prevalence, &config)),
        None => pool.install(|| simulate_single(a, &config)),
    }
}

fn simulate_single(a: &SimulateArgs, config: &SimConfig) -> Result<Report, Failure> {
    let s = run_batch(config)?;
    if let Some(path) = &a.emit_histogram {
        let io = |e: std::io::Error| Failure::Io(format!("cannot write {}: {e}", path.display()));
        let file = File::create(path).map_err(io)?;
        s.write_histogram_csv(BufWriter::new(file), a.bin_width)
            .map_err(|e| Failure::Io(e.to_string()))?;
    }
    let mut cells = vec![
        ("n_per_group", Cell::from(config.n_per_group)),
        ("true_difference", config.true_difference().into()),
        ("sd", config.sd.into()),
        ("n_sims", s.n_sims.into()),
        ("alpha", config.alpha.into()),
        ("seed", config.master_seed.into()),
        ("count_significant", s.count_significant.into()),
        ("fraction_significant", s.fraction_significant().into()),
        ("mean_diff_all", s.mean_diff_all.into()),
        ("sd_diff_all", s.sd_diff_all.into()),
        ("mean_diff_significant", s.mean_diff_significant.into()),
        (
            "count_wrong_sign_significant",
            s.count_wrong_sign_significant.into(),
        ),
    ];
    let mut interval = None;
    if let Some((lo, hi)) = a.interval {
        let count = s.count_in_interval(lo, hi)?;
        cells.extend([
            ("interval_lo", lo.into()),
            ("interval_hi", hi.into()),
            ("count_in_interval", count.into()),
        ]);
        interval = Some(json!({ "lo": lo, "hi": hi, "count": count }));
    }
    let json = json!({
        "fraction_significant": s.fraction_significant(),
        "interval": interval,
        "summary": s,
    });
    Ok(Report::record(cells, &json))
}

fn simulate_mixed(
    a: &SimulateArgs,
    prevalence: f64,
    config: &SimConfig,
) -> Result<Report, Failure> {
    let m = simulate_mixture(prevalence, config)?;
    let b = mixture_fdr(&m)?;
    warn(&b.warnings);
    let (null, effect) = (&m.null_summary, &m.effect_summary);
    let mut cells = vec![
        ("prevalence", Cell::from(prevalence)),
        ("n_per_group", config.n_per_group.into()),
        ("true_difference", config.true_difference().into()),
        ("n_sims", config.n_sims.into()),
        ("null_seed", null.config.master_seed.into()),
        ("effect_seed", effect.config.master_seed.into()),
        ("null_count_significant", null.count_significant.into()),
        ("effect_count_significant", effect.count_significant.into()),
        ("null_rate", null.fraction_significant().into()),
        ("effect_rate", effect.fraction_significant().into()),
        ("fdr", b.fdr.into()),
    ];
    let mut interval = None;
    if let Some((lo, hi)) = a.interval {
        let n0 = null.count_in_interval(lo, hi)?;
        let n1 = effect.count_in_interval(lo, hi)?;
        let f = interval_fdr(&m, lo, hi)?;
        cells.extend([
            ("interval_lo", lo.into()),
            ("interval_hi", hi.into()),
            ("null_in_interval", n0.into()),
            ("effect_in_interval", n1.into()),
            ("interval_fdr", f.into()),
        ]);
        interval = Some(json!({
            "lo": lo,
            "hi": hi,
            "null_count": n0,
            "effect_count": n1,
            "fdr": f,
        }));
    }
    let json = json!({
        "prevalence": prevalence,
        "breakdown": b,
        "interval": interval,
        "null_summary": null,
        "effect_summary": effect,
    });
    Ok(Report::record(cells, &json))
}

pub fn inflation(a: &InflationArgs) -> Result<Report, Failure> {
    let mut ns = Vec::with_capacity(a.n_list.len());
    for &n in &a.n_list {
        if ns.contains(&n) {
            warn(&[format!("n = {n} listed more than once; using it once")]);
        } else {
            ns.push(n);
        }
    }
    let base = base_config(ns[0], &a.batch);
    let pts = pool(&a.batch)?.install(|| inflation_curve(&ns, &base))?;
    let mut r = Report::new(
        vec![
            "n",
            "power_analytic",
            "power_simulated",
            "mean_diff_significant",
            "inflation",
            "count_wrong_sign_significant",
        ],
        &pts,
    );
    for p in &pts {
        r.push(vec![
            p.n.into(),
            p.power_analytic.into(),
            p.power_simulated.into(),
            p.mean_diff_significant.into(),
            p.inflation.into(),
            p.count_wrong_sign_significant.into(),
        ]);
    }
    Ok(r)
}
