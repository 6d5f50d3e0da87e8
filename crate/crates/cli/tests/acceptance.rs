//! Acceptance criteria, one test each. Every test writes a single
//! `[PASS]`/`[FAIL]` line straight to stdout so it shows up without
//! `--nocapture`.

use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use pchaos_core::chaos::{
    a_prime, canonical_family_q2, contraction_inequality_checks, fourth_moment_gaussian, fourth_moment_poisson,
    symmetrization_identity_check, t_decomposition, third_moment_gaussian, third_moment_poisson, DenseEngine,
    MatrixEngine, MomentReport,
};
use pchaos_core::gamma::GammaLaw;
use pchaos_core::kernel::{from_index_function, random_partition, random_symmetric, IndexFunction, Partition, SignMode};
use pchaos_core::mc::{
    exact_moments_small, ks_distance, mc_moments, run_draws, GaussianSeq, Intensities, McConfig, PoissonNormalized,
};
use pchaos_core::rng::stream_rng;
use pchaos_core::stats::mean_and_se;
use pchaos_core::ustat::{coupled_gap, CellCounts, GridKernel, Scaling, UstatSampler};
use rand::Rng;

type Outcome = Result<String, String>;

fn criterion(id: usize, title: &str, budget: Duration, body: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let mut outcome = body();
    let elapsed = start.elapsed();
    if outcome.is_ok() && elapsed > budget {
        outcome = Err(format!("took {elapsed:.1?}, budget {budget:?}"));
    }
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    let line = format!("[{tag}] criterion {id:>2} {title}: {detail} ({elapsed:.2?})\n");
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    if let Err(e) = outcome {
        panic!("criterion {id} failed: {e}");
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

#[test]
fn c01_symmetrization_identity() {
    criterion(1, "symmetrization identity", Duration::from_secs(10), || {
        let mut worst = 0.0f64;
        for q in 1..=3 {
            for k in 0..100u64 {
                let mut rng = stream_rng(101, 1000 * q as u64 + k);
                let n = rng.random_range(1..=4);
                let p = random_partition(n, 0.1, 3.0, &mut rng).map_err(err)?;
                let f = random_symmetric(q, &p, &mut rng, SignMode::Signed).map_err(err)?;
                let c = symmetrization_identity_check(&f).map_err(err)?;
                let g = rel(c.lhs, c.rhs);
                ensure(g < 1e-10, || format!("q={q} kernel {k}: gap {g:e}"))?;
                worst = worst.max(g);
            }
        }
        Ok(format!("300 kernels, max relative gap {worst:.2e}"))
    });
}

#[test]
fn c02_contraction_inequalities() {
    criterion(2, "contraction inequalities", Duration::from_secs(30), || {
        let (mut upper, mut reverse) = (0, 0);
        for q in 2..=4 {
            for k in 0..100u64 {
                let mut rng = stream_rng(202, 1000 * q as u64 + k);
                let n = rng.random_range(1..=4);
                let p = random_partition(n, 0.1, 3.0, &mut rng).map_err(err)?;
                let f = random_symmetric(q, &p, &mut rng, SignMode::Signed).map_err(err)?;
                let sign = if k % 2 == 0 { SignMode::NonNegative } else { SignMode::NonPositive };
                let g = random_symmetric(q, &p, &mut rng, sign).map_err(err)?;
                for c in contraction_inequality_checks(&f).map_err(err)? {
                    if c.name == "contraction_upper" {
                        ensure(c.satisfied, || format!("q={q} kernel {k}: {c:?}"))?;
                        upper += 1;
                    }
                }
                let checks = contraction_inequality_checks(&g).map_err(err)?;
                ensure(checks.iter().filter(|c| c.name == "contraction_reverse").count() == q, || {
                    format!("q={q} kernel {k}: reverse checks missing")
                })?;
                for c in checks {
                    ensure(c.satisfied, || format!("q={q} sign-constant kernel {k}: {c:?}"))?;
                    reverse += usize::from(c.name == "contraction_reverse");
                }
            }
        }
        Ok(format!("{upper} upper and {reverse} reverse checks hold"))
    });
}

#[test]
fn c03_decomposition_identity() {
    criterion(3, "T-decomposition identity", Duration::from_secs(30), || {
        let mut worst = 0.0f64;
        for q in [2, 4] {
            for k in 0..50u64 {
                let mut rng = stream_rng(303, 1000 * q as u64 + k);
                let n = rng.random_range(1..=4);
                let p = random_partition(n, 0.1, 3.0, &mut rng).map_err(err)?;
                let f = random_symmetric(q, &p, &mut rng, SignMode::Signed).map_err(err)?;
                let t = t_decomposition(&DenseEngine::new(f).map_err(err)?).map_err(err)?;
                ensure(t.residual.abs() < 1e-9, || format!("q={q} kernel {k}: residual {:e}", t.residual))?;
                worst = worst.max(t.residual.abs());
            }
        }
        Ok(format!("100 kernels, max relative residual {worst:.2e}"))
    });
}

#[test]
fn c04_a_prime_nonnegative() {
    criterion(4, "A' nonnegativity", Duration::from_secs(30), || {
        let mut worst = f64::INFINITY;
        for q in [2, 4] {
            for k in 0..100u64 {
                let mut rng = stream_rng(404, 1000 * q as u64 + k);
                let n = rng.random_range(1..=4);
                let p = random_partition(n, 0.1, 3.0, &mut rng).map_err(err)?;
                let sign = if k % 2 == 0 { SignMode::NonNegative } else { SignMode::NonPositive };
                let f = random_symmetric(q, &p, &mut rng, sign).map_err(err)?;
                let e = DenseEngine::new(f).map_err(err)?;
                let scale = fourth_moment_poisson(&e).map_err(err)?.abs() + 12.0 * third_moment_poisson(&e).map_err(err)?.abs();
                let a = a_prime(&e).map_err(err)?;
                ensure(a >= -1e-12 * scale, || format!("q={q} kernel {k}: A' = {a:e}, scale {scale:e}"))?;
                worst = worst.min(a / scale);
            }
        }
        Ok(format!("200 sign-constant kernels, min A'/scale {worst:.3e}"))
    });
}

#[test]
fn c05_oracle_equivalence() {
    criterion(5, "oracle equivalence", Duration::from_secs(120), || {
        let mut worst = 0.0f64;
        for k in 0..25u64 {
            let mut rng = stream_rng(505, k);
            let n = rng.random_range(2..=5);
            let h = IndexFunction::random(2, n, &mut rng, SignMode::Signed).map_err(err)?;
            let lambda: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..3.0)).collect();
            let law = PoissonNormalized::new(Intensities::PerIndex(lambda.clone())).map_err(err)?;
            let f = from_index_function(&h, &Partition::with_masses(lambda).map_err(err)?).map_err(err)?;
            let e = DenseEngine::new(f).map_err(err)?;
            let pairs = [
                (exact_moments_small(&h, &law, 3).map_err(err)?, third_moment_poisson(&e).map_err(err)?),
                (exact_moments_small(&h, &law, 4).map_err(err)?, fourth_moment_poisson(&e).map_err(err)?),
            ];
            let fg = from_index_function(&h, &Partition::unit(n)).map_err(err)?;
            let eg = DenseEngine::new(fg).map_err(err)?;
            let gauss = [
                (exact_moments_small(&h, &GaussianSeq, 3).map_err(err)?, third_moment_gaussian(&eg).map_err(err)?),
                (exact_moments_small(&h, &GaussianSeq, 4).map_err(err)?, fourth_moment_gaussian(&eg).map_err(err)?),
            ];
            for (i, (a, b)) in pairs.iter().chain(&gauss).enumerate() {
                let g = rel(*a, *b);
                ensure(g < 1e-8, || format!("kernel {k} (N={n}) moment {i}: oracle {a} vs formula {b}"))?;
                worst = worst.max(g);
            }
        }
        Ok(format!("25 kernels, Poisson and Gaussian, max relative gap {worst:.2e}"))
    });
}

#[test]
fn c06_canonical_trajectory() {
    criterion(6, "canonical q=2 trajectory", Duration::from_secs(60), || {
        let h4 = canonical_family_q2(4).map_err(err)?;
        let e4 = MatrixEngine::new(&from_index_function(&h4, &Partition::unit(4)).map_err(err)?).map_err(err)?;
        let third = third_moment_poisson(&e4).map_err(err)?;
        ensure((third - 3.75).abs() < 1e-12, || format!("third moment at N=4 is {third}"))?;
        let mut dist = Vec::new();
        for n in [8, 32, 128, 512] {
            let h = canonical_family_q2(n).map_err(err)?;
            let e = MatrixEngine::new(&from_index_function(&h, &Partition::unit(n)).map_err(err)?).map_err(err)?;
            dist.push((MomentReport::poisson(&e).map_err(err)?.gamma_statistic + 36.0).abs());
        }
        ensure(dist.windows(2).all(|w| w[1] < w[0]), || format!("|stat + 36| not decreasing: {dist:?}"))?;
        ensure(dist[3] < 0.5, || format!("|stat(512) + 36| = {}", dist[3]))?;
        Ok(format!("|stat + 36| along N=8,32,128,512: {dist:.4?}; third(N=4) = {third}"))
    });
}

#[test]
fn c07_distributional_convergence() {
    criterion(7, "distributional convergence", Duration::from_secs(300), || {
        let law = PoissonNormalized::constant(1.0).map_err(err)?;
        let target = GammaLaw::centred(1.0).map_err(err)?;
        let mut ks = Vec::new();
        for n in [8, 32, 128] {
            let h = canonical_family_q2(n).map_err(err)?;
            let r = mc_moments(&h, &law, &McConfig::new(200_000, 7).keep_samples(true)).map_err(err)?;
            ks.push(ks_distance(r.samples.as_deref().unwrap_or_default(), &target).map_err(err)?);
        }
        ensure(ks.windows(2).all(|w| w[1] < w[0]), || format!("KS not decreasing: {ks:?}"))?;
        ensure(ks[2] < 0.02, || format!("KS along N=8,32,128 is {ks:.4?}; KS(128) = {:.4} is not below 0.02", ks[2]))?;
        Ok(format!("KS along N=8,32,128: {ks:.4?}"))
    });
}

#[test]
fn c08_centred_gamma_law() {
    criterion(8, "centred Gamma law", Duration::from_secs(30), || {
        let mut worst_ks = 0.0f64;
        for (i, nu) in [0.5, 1.0, 2.0, 7.0].into_iter().enumerate() {
            let law = GammaLaw::centred(nu).map_err(err)?;
            let mass = law.expectation(|_| 1.0, 1e-12).map_err(err)?;
            ensure((mass - 1.0).abs() < 1e-8, || format!("nu={nu}: density mass {mass}"))?;
            let expected = [0.0, 2.0 * nu, 8.0 * nu, 12.0 * nu * nu + 48.0 * nu];
            for (k, want) in expected.into_iter().enumerate() {
                let got = law.expectation(|x| x.powi(k as i32 + 1), 1e-12).map_err(err)?;
                let ok = if want == 0.0 { got.abs() < 1e-6 * 2.0 * nu } else { rel(got, want) < 1e-6 };
                ensure(ok, || format!("nu={nu}: moment {} is {got}, expected {want}", k + 1))?;
            }
            let sample = law.sample(&mut stream_rng(808, i as u64), 100_000).map_err(err)?;
            let ks = ks_distance(&sample, &law).map_err(err)?;
            ensure(ks < 0.01, || format!("nu={nu}: sampler KS {ks}"))?;
            worst_ks = worst_ks.max(ks);
        }
        Ok(format!("mass and moments exact for nu = 0.5, 1, 2, 7; max sampler KS {worst_ks:.4}"))
    });
}

#[test]
fn c09_ustat_coupling() {
    criterion(9, "U-statistic coupling", Duration::from_secs(180), || {
        let k = GridKernel::pearson(2).map_err(err)?;
        ensure(k.degeneracy_defect() < 1e-12, || "kernel is not degenerate".into())?;
        let s = UstatSampler::new(&k, &CellCounts, Scaling::Natural).map_err(err)?;
        let mut gaps = Vec::new();
        for n in [100, 400, 1600] {
            gaps.push(coupled_gap(&s, n, &McConfig::new(2000, 909)).map_err(err)?.mean);
        }
        ensure(gaps.windows(2).all(|w| w[1] < w[0]), || format!("gap not decreasing: {gaps:?}"))?;
        let ratio = gaps[2] / gaps[0];
        let envelope = 3.0 * 16f64.powf(-0.25);
        ensure(ratio < envelope, || format!("gap(1600)/gap(100) = {ratio} exceeds {envelope}"))?;
        let mut worst = 0.0f64;
        for (g, scaling) in [(2, Scaling::Verbatim), (3, Scaling::Natural)] {
            let kd = GridKernel::pearson(g).map_err(err)?;
            let sd = UstatSampler::new(&kd, &CellCounts, scaling).map_err(err)?;
            let u = run_draws(10_000, 0, |i| sd.poisson(500, &mut stream_rng(910 + g as u64, i))).map_err(err)?;
            let (m, se) = mean_and_se(&u);
            ensure(m.abs() < 5.0 * se, || format!("g={g}: mean U_n = {m} with se {se}"))?;
            worst = worst.max(m.abs() / se);
        }
        Ok(format!("gaps {gaps:.4?}, ratio {ratio:.3} < {envelope:.3}; degenerate means within {worst:.2} SE"))
    });
}

fn run_cli(dir: &Path, name: &str, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = dir.join(name);
    let status = Command::new(env!("CARGO_BIN_EXE_pchaos"))
        .args(args)
        .arg("--out")
        .arg(&out)
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(err)?;
    ensure(status.success(), || format!("{args:?} exited with {status}"))?;
    std::fs::read(&out).map_err(err)
}

#[test]
fn c10_determinism() {
    criterion(10, "determinism", Duration::from_secs(120), || {
        let dir = tempfile::tempdir().map_err(err)?;
        let cfg = |name: &str, body: &str| -> Result<String, String> {
            let p = dir.path().join(name);
            std::fs::write(&p, body).map_err(err)?;
            Ok(p.display().to_string())
        };
        let random_q2 = cfg("random.toml", "family = \"random\"\nq = 2\nsizes = [3, 5]\nlambda-range = [0.5, 3.0]\n")?;
        let export = cfg("export.toml", "family = \"random\"\nq = 3\nsizes = [4]\n")?;
        let q4 = cfg("q4.toml", "q = 4\nfamily = \"random\"\nsizes = [3]\n")?;
        let small_mc = cfg("mc.toml", "sizes = [8, 32]\n[sequence]\nkind = \"poisson_normalized\"\nlambda = 1.0\n")?;
        let runs: Vec<(&str, Vec<&str>)> = vec![
            ("identities", vec!["identities", "--seed", "11", "--samples", "20"]),
            ("identities-q4", vec!["identities", "--config", &q4, "--seed", "11", "--samples", "10"]),
            ("diagnostics", vec!["diagnostics-sequence", "--seed", "12"]),
            ("mc-gamma", vec!["mc-gamma", "--config", &small_mc, "--seed", "42", "--samples", "50000"]),
            ("mc-gamma-json", vec!["mc-gamma", "--config", &small_mc, "--seed", "42", "--samples", "20000", "--format", "json"]),
            ("oracle", vec!["oracle-check", "--config", &random_q2, "--seed", "13", "--samples", "5"]),
            ("ustat-gap", vec!["ustat-gap", "--seed", "14", "--samples", "500"]),
            ("ustat-gamma", vec!["ustat-gamma", "--seed", "15", "--samples", "2000"]),
            ("gamma-sample", vec!["gamma-sample", "--seed", "16", "--samples", "20000"]),
            ("kernel-export", vec!["kernel-export", "--config", &export, "--seed", "17"]),
        ];
        let mut checked = 0;
        for (name, args) in &runs {
            let mut outputs = Vec::new();
            for (tag, lanes) in [("a", "1"), ("b", "1"), ("c", "4")] {
                let mut a = args.clone();
                a.extend(["--lanes", lanes]);
                outputs.push(run_cli(dir.path(), &format!("{name}-{tag}"), &a)?);
            }
            ensure(!outputs[0].is_empty(), || format!("{name}: empty output"))?;
            ensure(outputs[0] == outputs[1], || format!("{name}: two runs differ"))?;
            ensure(outputs[0] == outputs[2], || format!("{name}: 1 and 4 lanes differ"))?;
            checked += 1;
        }
        Ok(format!("{checked} experiment configs byte-identical across reruns and 1 vs 4 lanes"))
    });
}
