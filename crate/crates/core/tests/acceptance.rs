//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line for
//! each, and exits nonzero if any failed.

use std::process::{Command, ExitCode};

use fdrlab::distributions::RngStream;
use fdrlab::fdr::{
    berger_min_fdr, posterior_odds, screening_breakdown, significance_breakdown, DiagnosticSpec,
    TestScenario, REFERENCE_P_VALUES,
};
use fdrlab::montecarlo::{
    diff_distribution_stats, inflation_curve, interval_fdr, mixture_fdr, mixture_fdr_from_rates,
    run_batch, simulate_mixture, MixtureSpec, SimConfig, DEFAULT_SEED,
};
use fdrlab::power::{power_two_sample, PowerQuery};

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn within(what: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, want {want} ± {tol}"))
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Rounds to `sig` significant figures.
fn sig_round(x: f64, sig: i32) -> f64 {
    let scale = 10f64.powi(sig - 1 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

fn screening_exactness() -> Outcome {
    let spec = ok(DiagnosticSpec::new(0.01, 0.8, 0.95))?;
    let b = ok(screening_breakdown(&spec, Some(10_000.0)))?;
    within("false positives", b.false_pos, 495.0, 5e-5)?;
    within("true positives", b.true_pos, 80.0, 5e-5)?;
    within("positives", b.positives(), 575.0, 5e-5)?;
    within("fdr", b.fdr, 0.8609, 5e-5)?;
    within("ppv", b.ppv, 0.1391, 5e-5)?;
    Ok(format!(
        "FP {} TP {} FDR {:.4}",
        b.false_pos, b.true_pos, b.fdr
    ))
}

fn significance_exactness() -> Outcome {
    let s = ok(TestScenario::new(0.1, 0.8, 0.05))?;
    let b = ok(significance_breakdown(&s, Some(1000.0)))?;
    within("false positives", b.false_pos, 45.0, 1e-12)?;
    within("true positives", b.true_pos, 80.0, 1e-12)?;
    within("fdr", b.fdr, 45.0 / 125.0, 1e-15)?;
    let o = ok(posterior_odds(&s))?;
    within("likelihood ratio", o.likelihood_ratio_h0_h1, 0.0625, 1e-15)?;
    within("posterior odds", o.posterior_odds_h0, 0.5625, 1e-15)?;
    if o.fdr != b.fdr {
        return Err(format!(
            "odds fdr {} differs from tree fdr {}",
            o.fdr, b.fdr
        ));
    }
    Ok(format!("FDR {} OR {}", b.fdr, o.posterior_odds_h0))
}

fn even_prevalence() -> Outcome {
    let b = ok(significance_breakdown(
        &ok(TestScenario::new(0.5, 0.8, 0.05))?,
        None,
    ))?;
    within("fdr", b.fdr, 0.0588, 1e-4)?;
    Ok(format!("FDR {:.5}", b.fdr))
}

fn berger_table_values() -> Outcome {
    // table entries with the significant figures they are printed to
    let want = [
        (0.465, 3),
        (0.385, 3),
        (0.289, 3),
        (0.111, 3),
        (0.067, 2),
        (0.0184, 3),
    ];
    let mut bad = Vec::new();
    for (&p, (w, sig)) in REFERENCE_P_VALUES.iter().zip(want) {
        let got = ok(berger_min_fdr(p))?;
        if sig_round(got, sig) != w {
            bad.push(format!("P = {p}: {got:.4} does not round to {w}"));
        }
    }
    within("alpha(0.0027)", ok(berger_min_fdr(0.0027))?, 0.042, 1e-3)?;
    if bad.is_empty() {
        Ok("six rows match".into())
    } else {
        Err(bad.join("; "))
    }
}

fn analytic_power() -> Outcome {
    let mut shown = Vec::new();
    for (n, want) in [(3, 0.157), (4, 0.22), (8, 0.46), (16, 0.78), (50, 0.9986)] {
        let got = ok(power_two_sample(&ok(PowerQuery::new(n, 1.0, 0.05))?))?;
        within(&format!("power at n = {n}"), got, want, 0.005)?;
        shown.push(format!("{n}:{got:.4}"));
    }
    Ok(shown.join(" "))
}

fn null_batch() -> Outcome {
    let s = ok(run_batch(&SimConfig::null(16, 100_000, DEFAULT_SEED)))?;
    within(
        "significant fraction",
        s.fraction_significant(),
        0.05,
        0.003,
    )?;
    let bins = ok(s.histogram(0.05))?;
    if bins.len() != 20 {
        return Err(format!("{} bins", bins.len()));
    }
    for b in &bins {
        within(
            &format!("bin at {}", b.bin_left),
            b.count as f64,
            5000.0,
            207.0,
        )?;
    }
    let (lo, hi) = bins.iter().fold((u64::MAX, 0), |(lo, hi), b| {
        (lo.min(b.count), hi.max(b.count))
    });
    Ok(format!(
        "fraction {:.4}, bins {lo}..{hi}",
        s.fraction_significant()
    ))
}

fn effect_batch() -> Outcome {
    let s = ok(run_batch(
        &SimConfig::null(16, 100_000, DEFAULT_SEED).with_difference(1.0),
    ))?;
    within(
        "significant fraction",
        s.fraction_significant(),
        0.78,
        0.005,
    )?;
    let (mean, sd) = diff_distribution_stats(&s);
    within("mean difference", mean, 1.0, 0.004)?;
    within("sd of differences", sd, 0.354, 0.004)?;
    Ok(format!(
        "fraction {:.4}, mean {mean:.4}, sd {sd:.4}",
        s.fraction_significant()
    ))
}

fn large_mixture(prevalence: f64) -> Result<MixtureSpec, String> {
    let config = SimConfig::null(16, 1_000_000, DEFAULT_SEED).with_difference(1.0);
    ok(simulate_mixture(prevalence, &config))
}

fn mixture_by_simulation(m: &MixtureSpec) -> Outcome {
    let at = |prevalence: f64| {
        let spec = MixtureSpec {
            prevalence,
            ..m.clone()
        };
        ok(mixture_fdr(&spec)).map(|b| b.fdr)
    };
    let f = at(0.1)?;
    within("fdr at prevalence 0.1", f, 0.36, 0.01)?;
    if at(0.0)? != 1.0 {
        return Err("fdr at prevalence 0 is not 1".into());
    }
    if at(1.0)? != 0.0 {
        return Err("fdr at prevalence 1 is not 0".into());
    }
    Ok(format!("FDR {f:.4} (10^6 per batch)"))
}

fn interval_analysis(m: &MixtureSpec) -> Outcome {
    let at = |prevalence: f64| {
        let spec = MixtureSpec {
            prevalence,
            ..m.clone()
        };
        ok(interval_fdr(&spec, 0.045, 0.05))
    };
    let half = at(0.5)?;
    let tenth = at(0.1)?;
    within("prevalence 0.5", half, 0.26, 0.02)?;
    within("prevalence 0.1", tenth, 0.76, 0.02)?;
    let n0 = ok(m.null_summary.count_in_interval(0.045, 0.05))?;
    let n1 = ok(m.effect_summary.count_in_interval(0.045, 0.05))?;
    Ok(format!(
        "{half:.4} and {tenth:.4}; counts {n0} null / {n1} effect per 10^6"
    ))
}

fn inflation() -> Outcome {
    let base = SimConfig::null(3, 100_000, DEFAULT_SEED).with_difference(1.0);
    let pts = ok(inflation_curve(&[4, 8, 16, 50], &base))?;
    within("n = 4", pts[0].mean_diff_significant, 1.8, 0.08)?;
    within("n = 8", pts[1].mean_diff_significant, 1.4, 0.05)?;
    within("n = 16", pts[2].mean_diff_significant, 1.14, 0.02)?;
    if pts[3].mean_diff_significant > 1.02 {
        return Err(format!(
            "n = 50: {} exceeds 1.02",
            pts[3].mean_diff_significant
        ));
    }
    Ok(pts
        .iter()
        .map(|p| format!("{}:{:.3}", p.n, p.mean_diff_significant))
        .collect::<Vec<_>>()
        .join(" "))
}

fn cli_json(args: &[&str], threads: usize) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fdrlab"))
        .args(args)
        .args(["--format", "json", "--threads", &threads.to_string()])
        .env_remove("FDRLAB_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let max = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .max(4);
    let commands: [&[&str]; 3] = [
        &["simulate", "--n-sims", "100000", "--seed", "7"],
        &[
            "simulate",
            "--n-sims",
            "50000",
            "--seed",
            "7",
            "--prevalence",
            "0.1",
            "--interval",
            "0.045,0.05",
        ],
        &[
            "inflation",
            "--n-list",
            "4,16",
            "--n-sims",
            "20000",
            "--seed",
            "7",
        ],
    ];
    for args in commands {
        let first = cli_json(args, 1)?;
        for threads in [1, max] {
            if cli_json(args, threads)? != first {
                return Err(format!("{} differs at {threads} threads", args.join(" ")));
            }
        }
    }
    Ok(format!("3 commands identical at 1 and {max} threads"))
}

fn oracle_property() -> Outcome {
    let mut rng = RngStream::new(DEFAULT_SEED, 0);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let prevalence = 0.02 + 0.96 * rng.next_open01();
        let alpha = 0.005 + 0.15 * rng.next_open01();
        let n = 3 + (rng.next_u64() % 28) as usize;
        let d = 0.2 + 1.3 * rng.next_open01();
        let power = ok(power_two_sample(&ok(PowerQuery::new(n as u64, d, alpha))?))?;

        let closed = (1.0 - prevalence) * alpha / ((1.0 - prevalence) * alpha + prevalence * power);
        let analytic = ok(mixture_fdr_from_rates(prevalence, alpha, power))?.fdr;
        within(
            &format!("triple {i} with analytic rates"),
            analytic,
            closed,
            1e-12,
        )?;

        let n_sims = 20_000;
        let config = SimConfig {
            alpha,
            ..SimConfig::null(n, n_sims, 1000 + i).with_difference(d)
        };
        let simulated = ok(mixture_fdr(&ok(simulate_mixture(prevalence, &config))?))?.fdr;
        // delta-method SE of the FDR from the two binomial rates
        let (a, b) = (1.0 - prevalence, prevalence);
        let denom = (a * alpha + b * power).powi(2);
        let d0 = a * b * power / denom;
        let d1 = a * b * alpha / denom;
        let se = (d0 * d0 * alpha * (1.0 - alpha) / n_sims as f64
            + d1 * d1 * power * (1.0 - power) / n_sims as f64)
            .sqrt();
        within(
            &format!("triple {i} with simulated rates"),
            simulated,
            closed,
            3.0 * se,
        )?;
        worst = worst.max((simulated - closed).abs() / se);
    }
    Ok(format!(
        "20 triples; largest simulated deviation {worst:.2} SE"
    ))
}

fn main() -> ExitCode {
    let mixture = large_mixture(0.1);
    let criteria: Vec<(&str, Check)> = vec![
        ("screening exactness", Box::new(screening_exactness)),
        ("significance exactness", Box::new(significance_exactness)),
        ("prevalence 0.5", Box::new(even_prevalence)),
        ("calibration table", Box::new(berger_table_values)),
        ("analytic power", Box::new(analytic_power)),
        ("simulated null batch", Box::new(null_batch)),
        ("simulated effect batch", Box::new(effect_batch)),
        (
            "mixture FDR by simulation",
            Box::new(|| mixture.clone().and_then(|m| mixture_by_simulation(&m))),
        ),
        (
            "interval FDR",
            Box::new(|| mixture.clone().and_then(|m| interval_analysis(&m))),
        ),
        ("effect-size inflation", Box::new(inflation)),
        ("determinism", Box::new(determinism)),
        ("oracle consistency", Box::new(oracle_property)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
