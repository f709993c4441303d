//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line; the
//! process exits nonzero if any fails. Positional arguments select criteria
//! by substring, e.g. `cargo test --test acceptance -- 08`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vqae_core::ansatz::{build_layered, build_minimal, AnsatzSpec};
use vqae_core::estimator::{mlae_search, QueryLedger, SampleRecord, GRID_SPACING};
use vqae_core::experiment::{linear_fit, loglog_slope, log_spaced, run_sweep, Estimator, Sweep, SweepRow};
use vqae_core::grover::{closed_form_good_probability, GroverOracle};
use vqae_core::optimizer::{optimize, parameter_shift, OptimizerConfig, VariationalTarget};
use vqae_core::problem::{exact_amplitude, prepare_chi0, Distribution, ProblemSpec};
use vqae_core::VqaeConfig;

const DISTRIBUTIONS: [Distribution; 3] = [
    Distribution::gaussian(),
    Distribution::cauchy_lorentz(),
    Distribution::log_normal(),
];

fn report(id: u32, name: &str, pass: bool, detail: &str, elapsed: Duration) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:2} [{verdict}] {name}: {detail} ({:.1} s)", elapsed.as_secs_f64());
}

fn spec(d: Distribution, n: usize) -> ProblemSpec {
    ProblemSpec::new(d, n, 1.0).unwrap()
}

/// Log-log slope of `δθ` against total queries for rows with `m` in `range`.
fn trace_slope(rows: &[SweepRow], range: std::ops::RangeInclusive<usize>) -> f64 {
    let (x, y): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| range.contains(&r.m))
        .map(|r| (r.queries.total() as f64, r.delta_theta))
        .unzip();
    loglog_slope(&x, &y)
}

fn criterion_01_expectation_encoding() -> bool {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut pass = true;
    for d in DISTRIBUTIONS {
        let s = spec(d, 5);
        let a = exact_amplitude(&s).unwrap().a;
        let p = prepare_chi0(&s).unwrap().ancilla_one_probability().unwrap();
        let ok = (a - 0.5).abs() <= 0.02 && (p - a).abs() <= 1e-12;
        pass &= ok;
        details.push(format!("{} a={a:.6} |a-P1|={:.1e}", d.name(), (p - a).abs()));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(1);
    report(1, "expectation encoding", pass, &details.join("; "), elapsed);
    pass
}

fn criterion_02_grover_closed_form() -> bool {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_p, mut worst_residual) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let d = DISTRIBUTIONS[rng.random_range(0..3)];
        let n = rng.random_range(2..=7);
        let c = rng.random_range(0.05..1.0);
        let Ok(s) = ProblemSpec::new(d, n, c) else { continue };
        let theta = exact_amplitude(&s).unwrap().theta;
        let o = GroverOracle::new(&s).unwrap();
        let mut state = o.chi0().clone();
        for m in 0..=100 {
            let p = state.ancilla_one_probability().unwrap();
            worst_p = worst_p.max((p - closed_form_good_probability(theta, m)).abs());
            let mut residual = state.clone();
            let cg = o.good_axis().inner_product(&state).unwrap();
            let cb = o.bad_axis().inner_product(&state).unwrap();
            residual.axpy(-cg, o.good_axis()).unwrap();
            residual.axpy(-cb, o.bad_axis()).unwrap();
            worst_residual = worst_residual.max(residual.norm_sqr().sqrt());
            o.apply(&mut state, 1).unwrap();
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_p <= 1e-9 && worst_residual < 1e-10 && elapsed < Duration::from_secs(10);
    let detail = format!("max |P - sin^2((2m+1)θ)| = {worst_p:.1e}, max residual = {worst_residual:.1e}");
    report(2, "Grover closed form", pass, &detail, elapsed);
    pass
}

fn criterion_03_mlae_self_consistency() -> bool {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for i in 0..20 {
        let theta = 0.1 + 1.3 * i as f64 / 19.0;
        let records: Vec<SampleRecord> = (0..=10).map(|m| SampleRecord::noiseless(m, 2000.0, theta)).collect();
        worst = worst.max((mlae_search(&records).unwrap() - theta).abs());
    }
    let elapsed = start.elapsed();
    let pass = worst <= PI / 1e4 && elapsed < Duration::from_secs(10);
    let detail = format!("max |θ̂ - θ| = {worst:.3e} (grid spacing {GRID_SPACING:.3e})");
    report(3, "MLAE self-consistency", pass, &detail, elapsed);
    pass
}

fn criterion_04_classical_mc_scaling() -> bool {
    let start = Instant::now();
    let sweep = Sweep {
        spec: spec(Distribution::gaussian(), 5),
        estimator: Estimator::Mc,
        config: VqaeConfig::ideal(1, 2, 1),
        mc_shots: log_spaced(3, 7, 2),
        reps: 100,
        seed: 4,
    };
    let rows = run_sweep(&sweep).unwrap();
    let slope = trace_slope(&rows, 0..=usize::MAX);
    let elapsed = start.elapsed();
    let pass = (slope + 0.5).abs() <= 0.05 && elapsed < Duration::from_secs(60);
    report(4, "classical MC scaling", pass, &format!("slope {slope:.4} (target -0.5 ± 0.05)"), elapsed);
    pass
}

fn criterion_05_mlae_scaling() -> bool {
    let start = Instant::now();
    let sweep = Sweep {
        spec: spec(Distribution::gaussian(), 5),
        estimator: Estimator::Mlae,
        config: VqaeConfig::ideal(1, 50, 2000),
        mc_shots: vec![],
        reps: 40,
        seed: 5,
    };
    let rows = run_sweep(&sweep).unwrap();
    let slope = trace_slope(&rows, 1..=50);
    let elapsed = start.elapsed();
    let pass = (slope + 0.75).abs() <= 0.1 && elapsed < Duration::from_secs(300);
    report(5, "MLAE scaling", pass, &format!("slope {slope:.4} (target -0.75 ± 0.1)"), elapsed);
    pass
}

fn criterion_06_ideal_vqae_scaling() -> bool {
    let start = Instant::now();
    let sweep = Sweep {
        spec: spec(Distribution::gaussian(), 5),
        estimator: Estimator::VqaeIdeal,
        config: VqaeConfig::ideal(1, 20, 2000),
        mc_shots: vec![],
        reps: 40,
        seed: 6,
    };
    let rows = run_sweep(&sweep).unwrap();
    let slope = trace_slope(&rows, 1..=20);
    let elapsed = start.elapsed();
    let pass = (slope + 1.5).abs() <= 0.15 && elapsed < Duration::from_secs(300);
    report(6, "ideal VQAE scaling", pass, &format!("slope {slope:.4} (target -1.5 ± 0.15)"), elapsed);
    pass
}

/// Two-segment log-log fit: breakpoint `m_b` and the slopes on either side,
/// chosen by least total squared residual.
fn two_regime_fit(rows: &[SweepRow]) -> (usize, f64, f64) {
    let points: Vec<(usize, f64, f64)> = rows
        .iter()
        .filter(|r| r.m >= 1)
        .map(|r| (r.m, (r.queries.total() as f64).ln(), r.delta_theta.ln()))
        .collect();
    let sse = |seg: &[(usize, f64, f64)]| {
        let x: Vec<f64> = seg.iter().map(|p| p.1).collect();
        let y: Vec<f64> = seg.iter().map(|p| p.2).collect();
        let (slope, icpt) = linear_fit(&x, &y);
        let err: f64 = x.iter().zip(&y).map(|(a, b)| (b - slope * a - icpt).powi(2)).sum();
        (slope, err)
    };
    let mut best = (0, 0.0, 0.0, f64::INFINITY);
    for split in 4..points.len() - 4 {
        let (s1, e1) = sse(&points[..=split]);
        let (s2, e2) = sse(&points[split..]);
        if e1 + e2 < best.3 {
            best = (points[split].0, s1, s2, e1 + e2);
        }
    }
    (best.0, best.1, best.2)
}

fn criterion_07_naive_vqae_regime_change() -> bool {
    let start = Instant::now();
    let mut config = VqaeConfig::naive(1, 50, 2000, 4, OptimizerConfig::new(0.1, 1000, 0));
    config.charge_variational = false;
    let sweep = Sweep {
        spec: spec(Distribution::gaussian(), 5),
        estimator: Estimator::VqaeNaive,
        config,
        mc_shots: vec![],
        reps: 20,
        seed: 7,
    };
    let rows = run_sweep(&sweep).unwrap();
    let (breakpoint, early, late) = two_regime_fit(&rows);
    let m: Vec<f64> = rows.iter().map(|r| r.m as f64).collect();
    let infid: Vec<f64> = rows.iter().map(|r| r.infidelity.unwrap()).collect();
    let (infid_slope, _) = linear_fit(&m, &infid);
    let elapsed = start.elapsed();
    let transition = (10..=35).contains(&breakpoint) && (early + 1.5).abs() <= 0.3 && (late + 0.5).abs() <= 0.3;
    let infid_ok = (1.7e-4 / 3.0..=1.7e-4 * 3.0).contains(&infid_slope);
    let pass = transition && infid_ok && elapsed < Duration::from_secs(1800);
    let detail = format!(
        "breakpoint m={breakpoint}, slopes {early:.3} -> {late:.3} (target -1.5 -> -0.5 ± 0.3); \
         infidelity slope {infid_slope:.3e} per step (target 1.7e-4 within x3), I_50 = {:.3e}",
        infid[50]
    );
    report(7, "naive VQAE regime change", pass, &detail, elapsed);
    pass
}

fn adaptive_sweep(d: Distribution, n: usize, reps: u64, seed: u64) -> Vec<SweepRow> {
    let config = VqaeConfig::adaptive(10, 50, 2000, OptimizerConfig::new(1e-3, 100, 100));
    let sweep = Sweep {
        spec: spec(d, n),
        estimator: Estimator::VqaeAdaptive,
        config,
        mc_shots: vec![],
        reps,
        seed,
    };
    run_sweep(&sweep).unwrap()
}

/// MC queries needed for a phase error `δθ`: `δθ = 1/(2√N)`.
fn mc_queries_for(delta_theta: f64) -> f64 {
    1.0 / (4.0 * delta_theta * delta_theta)
}

fn criterion_08_adaptive_vqae_headline() -> bool {
    let start = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();
    for (i, d) in DISTRIBUTIONS.into_iter().enumerate() {
        let rows = adaptive_sweep(d, 5, 100, 80 + i as u64);
        let last = rows.last().unwrap();
        let nq = last.queries.total() as f64;
        let advantage = mc_queries_for(last.delta_theta) / nq;
        pass &= last.delta_theta <= 2e-4 && advantage >= 2.0;
        details.push(format!(
            "{} δθ={:.3e} N_q={:.3e} MC/VQAE={advantage:.2}",
            d.name(),
            last.delta_theta,
            nq
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(1800);
    report(8, "adaptive VQAE headline (δθ <= 2e-4, MC/VQAE >= 2)", pass, &details.join("; "), elapsed);
    pass
}

fn criterion_09_qubit_count_independence() -> bool {
    let start = Instant::now();
    let finals: Vec<(usize, f64, f64)> = [8, 10, 12]
        .into_iter()
        .map(|n| {
            let rows = adaptive_sweep(Distribution::gaussian(), n, 100, 90 + n as u64);
            let last = rows.last().unwrap();
            (n, last.delta_theta, mc_queries_for(last.delta_theta) / last.queries.total() as f64)
        })
        .collect();
    let max = finals.iter().map(|f| f.1).fold(0.0, f64::max);
    let min = finals.iter().map(|f| f.1).fold(f64::INFINITY, f64::min);
    let elapsed = start.elapsed();
    let pass = max / min <= 3.0 && elapsed < Duration::from_secs(3600);
    let detail = finals
        .iter()
        .map(|(n, dt, adv)| format!("n={n} δθ={dt:.3e} MC/VQAE={adv:.2}"))
        .chain([format!("max/min = {:.2} (target <= 3)", max / min)])
        .collect::<Vec<_>>()
        .join("; ");
    report(9, "n-independence", pass, &detail, elapsed);
    pass
}

fn random_ansatz(rng: &mut ChaCha8Rng) -> (AnsatzSpec, usize) {
    let n = rng.random_range(2..=5);
    let ansatz = if rng.random_bool(0.5) {
        build_minimal(n + 1).unwrap()
    } else {
        build_layered(n + 1, rng.random_range(1..=3)).unwrap()
    };
    (ansatz, n)
}

fn criterion_10_gradient_and_ledger() -> bool {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let h = 1e-5;
    let mut worst = 0.0f64;
    let mut ratio_sum = 0.0;
    let mut ratio_count = 0;
    for _ in 0..50 {
        let (ansatz, n) = random_ansatz(&mut rng);
        let d = DISTRIBUTIONS[rng.random_range(0..3)];
        let o = GroverOracle::new(&ProblemSpec::new(d, n, rng.random_range(0.2..1.0)).unwrap()).unwrap();
        let power = rng.random_range(0..=4);
        let t = VariationalTarget::new(&ansatz, &o, o.chi0(), power).unwrap();
        let params = ansatz.random_init(&mut rng);
        let j = rng.random_range(0..ansatz.num_params());
        let shift = parameter_shift(&ansatz, &params, j, &t, 0, &mut rng).unwrap();
        let mut up = params.clone();
        up.0[j] += h;
        let mut down = params.clone();
        down.0[j] -= h;
        let fd = (t.objective(&ansatz, &up).unwrap() - t.objective(&ansatz, &down).unwrap()) / (2.0 * h);
        worst = worst.max((shift - 2f64.sqrt() * fd).abs());
        if fd.abs() > 1e-3 {
            ratio_sum += shift / fd;
            ratio_count += 1;
        }
    }
    let gradient_ok = worst <= 1e-5;

    let mut ledger_ok = true;
    for (trials, sweeps, power) in [(100u64, 3usize, 10usize), (7, 5, 0), (1, 1, 3)] {
        let (ansatz, n) = random_ansatz(&mut rng);
        let o = GroverOracle::new(&spec(Distribution::gaussian(), n)).unwrap();
        let t = VariationalTarget::new(&ansatz, &o, o.chi0(), power).unwrap();
        let mut ledger = QueryLedger::default();
        ledger.charge_sampling(11);
        let cfg = OptimizerConfig::new(1e-2, sweeps, trials);
        optimize(&ansatz, ansatz.random_init(&mut rng), &t, &cfg, &mut rng, &mut ledger).unwrap();
        let expected = 2 * trials * sweeps as u64 * ansatz.num_params() as u64 * (2 * power as u64 + 2);
        ledger_ok &= ledger.variational_queries() == expected && ledger.sampling_queries() == 11;
    }
    let elapsed = start.elapsed();
    let pass = gradient_ok && ledger_ok;
    let detail = format!(
        "max |shift - √2·FD| = {worst:.3e} (target 1e-5), mean shift/FD = {:.5}; ledger exact: {ledger_ok}",
        ratio_sum / ratio_count as f64
    );
    report(10, "gradient property and ledger", pass, &detail, elapsed);
    pass
}

type Criterion = (&'static str, fn() -> bool);

fn main() {
    let criteria: [Criterion; 10] = [
        ("criterion_01_expectation_encoding", criterion_01_expectation_encoding),
        ("criterion_02_grover_closed_form", criterion_02_grover_closed_form),
        ("criterion_03_mlae_self_consistency", criterion_03_mlae_self_consistency),
        ("criterion_04_classical_mc_scaling", criterion_04_classical_mc_scaling),
        ("criterion_05_mlae_scaling", criterion_05_mlae_scaling),
        ("criterion_06_ideal_vqae_scaling", criterion_06_ideal_vqae_scaling),
        ("criterion_07_naive_vqae_regime_change", criterion_07_naive_vqae_regime_change),
        ("criterion_08_adaptive_vqae_headline", criterion_08_adaptive_vqae_headline),
        ("criterion_09_qubit_count_independence", criterion_09_qubit_count_independence),
        ("criterion_10_gradient_and_ledger", criterion_10_gradient_and_ledger),
    ];
    // libtest flags forwarded by `cargo test` are ignored
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let selected: Vec<_> = criteria
        .iter()
        .filter(|(name, _)| filters.is_empty() || filters.iter().any(|f| name.contains(f.as_str())))
        .collect();
    let failed: Vec<&str> = selected.iter().filter(|(_, run)| !run()).map(|(name, _)| *name).collect();
    println!(
        "acceptance: {} passed, {} failed of {}",
        selected.len() - failed.len(),
        failed.len(),
        selected.len()
    );
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
