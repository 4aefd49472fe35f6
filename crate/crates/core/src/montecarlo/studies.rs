use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kernel::{
    bernstein_tail, bilinear_from_gram, clustered_eigen_bound, clustered_failure_budget,
    clustered_level, separated_eigen_bound, separated_failure_budget, separated_level,
    uniform_points, upsilon_from_dev, xi_from_radius, FeatureGram, KernelModel, SampleSet,
};
use crate::linalg::{op_norm, spec_desc, Matrix, SymmetricMatrix};
use crate::montecarlo::config::{McConfig, Prepared, StudyKind};
use crate::montecarlo::index_estimate::{estimate_index_set, loglog_slope, median};
use crate::montecarlo::limits::{
    bilinear_limit_variance, gaussian_limit_sampler, ks_distance, normal_draws,
};
use crate::montecarlo::report::{rate, McReport, Summary, TailCheck, TrialRecord};
use crate::montecarlo::runner::run_trials;

/// Number of warm-up trials used to calibrate the index-set gap tolerance.
pub const WARMUP_TRIALS: u32 = 32;
/// Stream offset of warm-up samples, disjoint from the trial streams.
const WARMUP_STREAM: u64 = 1 << 63;

/// The per-trial Gram system and the trace of the discarded tail of `Ĥ_n`.
struct TrialGram {
    fg: FeatureGram,
    /// `(1/n) Σ_i Σ_{k>R} λ_k φ_k(X_i)²`, zero for finite-rank kernels.
    tail_trace: f64,
}

fn trial_gram(model: &KernelModel, sample: &SampleSet) -> Result<TrialGram> {
    let fg = FeatureGram::new(model, sample)?;
    let tail_trace = if model.is_finite_rank() {
        0.0
    } else {
        let n = sample.points.len();
        let mut s = 0.0;
        for (i, &x) in sample.points.iter().enumerate() {
            let head: f64 = (0..fg.rank())
                .map(|k| fg.lambdas[k] * fg.features[(i, k)].powi(2))
                .sum();
            s += model.eval(x, x) - head;
        }
        (s / n as f64).max(0.0)
    };
    Ok(TrialGram { fg, tail_trace })
}

impl TrialGram {
    /// `‖Ĥ_n − H‖` in the retained coordinates, and an upper bound on the full norm.
    ///
    /// Writing `Ĥ_n − H` in blocks (head, tail), the tail block is a difference of two PSD
    /// blocks of norms at most `tail_trace` and `λ_{R+1}`, and the off-diagonal block of the
    /// PSD `Ĥ_n` is at most `√(‖Ĥ_head‖ · tail_trace)`.
    fn opnorm(&self, model: &KernelModel) -> Result<(f64, f64)> {
        let head = op_norm(&self.fg.deviation_operator())?;
        if model.is_finite_rank() {
            return Ok((head, head));
        }
        let top = self.fg.eigenvalues()[0].max(0.0);
        let tail = self.tail_trace.max(model.next_lambda());
        Ok((head, head.max(tail) + (top * self.tail_trace).sqrt()))
    }
}

fn validate_for(cfg: &McConfig, kind: StudyKind) -> Result<Prepared> {
    let prep = cfg.validate()?;
    if matches!(kind, StudyKind::Projection) && cfg.functions.is_empty() {
        return Err(Error::ConfigInvalid(
            "the projection study needs a nonempty function class".into(),
        ));
    }
    if kind == StudyKind::Opnorm && cfg.cluster_rank.is_some() {
        return Err(Error::ConfigInvalid(
            "cluster_rank applies to the eigenvalue study only".into(),
        ));
    }
    Ok(prep)
}

fn sample(cfg: &McConfig, trial: u32) -> SampleSet {
    SampleSet {
        seed: cfg.seed,
        trial,
        n: cfg.n,
        points: uniform_points(cfg.n, cfg.seed, u64::from(trial)),
    }
}

/// Gap tolerance of the index estimator: three times the median of `|λ̂_k − λ_k|` over
/// all retained `k` in [`WARMUP_TRIALS`] warm-up samples.
pub fn calibrate_gap_tol(cfg: &McConfig, model: &KernelModel) -> Result<f64> {
    let jitters = run_trials(WARMUP_TRIALS, |t| {
        let s = SampleSet {
            seed: cfg.seed,
            trial: t,
            n: cfg.n,
            points: uniform_points(cfg.n, cfg.seed, WARMUP_STREAM + u64::from(t)),
        };
        let g = FeatureGram::new(model, &s)?;
        Ok(g.eigenvalues()
            .iter()
            .zip(model.lambdas())
            .map(|(a, b)| (a - b).abs())
            .collect::<Vec<_>>())
    })?;
    Ok(3.0 * median(&jitters.concat()))
}

/// `⊕_j spec↓(θ_j (P_n − P)(φ_kφ_ℓ))_{k,ℓ∈J_j}` in the order of `J`.
fn separated_prediction(info: &crate::spectral::IndexSetInfo, dev: &Matrix) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(info.j_set.len());
    for (cluster, &theta) in info.clusters.iter().zip(&info.thetas) {
        let pos: Vec<usize> = cluster.iter().map(|k| k - 1).collect();
        let block = dev.select(&pos, &pos).scale(theta);
        out.extend(spec_desc(&SymmetricMatrix::new(block)?)?);
    }
    Ok(out)
}

/// Eigenvalue concentration in both regimes, with the optional index-set estimator.
pub fn run_eigenvalue_study(cfg: &McConfig) -> Result<McReport> {
    let prep = validate_for(cfg, StudyKind::Eigenvalue)?;
    let Prepared {
        model,
        info,
        constants: c,
        radius,
        ..
    } = &prep;
    let threshold = c.threshold(cfg.n);
    let sep_level = separated_level(info);
    let cl_level = clustered_level(info);
    let sep_ok = threshold <= sep_level;
    let cl_ok = threshold <= cl_level;
    let sep_bound = separated_eigen_bound(info, *radius);
    let cl_bound = clustered_eigen_bound(info, *radius);
    let gap_tol = match cfg.cluster_rank {
        Some(_) => Some(match cfg.gap_tol {
            Some(g) => g,
            None => calibrate_gap_tol(cfg, model)?,
        }),
        None => None,
    };
    let root_n = (cfg.n as f64).sqrt();
    let jn = info.j_set.len() as f64;

    let mut extra_columns: Vec<String> = [
        "clustered_residual",
        "clustered_bound",
        "clustered_covered",
        "clustered_condition_ok",
        "sum_dev_scaled",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    extra_columns.extend(info.j_set.iter().map(|k| format!("dev_scaled_{k}")));
    if gap_tol.is_some() {
        extra_columns.push("index_correct".into());
    }

    let records = run_trials(cfg.trials as u32, |t| {
        let s = sample(cfg, t);
        let tg = trial_gram(model, &s)?;
        let dev = tg.fg.deviation();
        let eig = tg.fg.eigenvalues();
        let shifts: Vec<f64> = info
            .j_set
            .iter()
            .map(|&k| eig[k - 1] - model.lambda(k))
            .collect();
        let pred = separated_prediction(info, &dev)?;
        // Eigenvalues of the truncated Gram differ from the full ones by at most the tail trace.
        let sep_res = shifts
            .iter()
            .zip(&pred)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
            + jn.sqrt() * tg.tail_trace;
        let cl_pred: f64 = info
            .j_set
            .iter()
            .map(|&k| model.lambda(k) * dev[(k - 1, k - 1)])
            .sum();
        let sum: f64 = shifts.iter().sum();
        let cl_res = (sum - cl_pred).abs() + jn * tg.tail_trace;
        let (opnorm, _) = tg.opnorm(model)?;

        let mut extra = vec![
            cl_res,
            cl_bound,
            f64::from(u8::from(cl_res <= cl_bound)),
            f64::from(u8::from(cl_ok)),
            root_n * sum,
        ];
        extra.extend(shifts.iter().map(|d| root_n * d));
        if let (Some(tol), Some(rank)) = (gap_tol, cfg.cluster_rank) {
            let correct = match estimate_index_set(eig, rank, tol) {
                Ok(est) => est == info.j_set,
                Err(Error::RankOutOfRange { .. }) => false,
                Err(e) => return Err(e),
            };
            extra.push(f64::from(u8::from(correct)));
        }
        Ok(TrialRecord {
            trial: t,
            n: cfg.n,
            condition_ok: sep_ok,
            residual: sep_res,
            bound: Some(sep_bound),
            covered: Some(sep_res <= sep_bound),
            opnorm_dev: opnorm,
            extra,
        })
    })?;

    let cl_cov = |r: &TrialRecord| r.extra[2] == 1.0;
    let sep_cov = |r: &TrialRecord| r.covered == Some(true);
    let mut summary = Summary {
        condition_ok_trials: records.iter().filter(|r| r.condition_ok).count(),
        ..Summary::default()
    };
    summary.coverage = rate(records.iter().filter(|r| r.condition_ok).map(sep_cov));
    if let Some(v) = summary.coverage {
        summary.coverage_by_regime.insert("separated".into(), v);
    }
    if cl_ok {
        if let Some(v) = rate(records.iter().map(cl_cov)) {
            summary.coverage_by_regime.insert("clustered".into(), v);
        }
    }
    if let Some(tol) = gap_tol {
        let idx = extra_columns.len() - 1;
        let correct: Vec<&TrialRecord> = records.iter().filter(|r| r.extra[idx] == 1.0).collect();
        summary.gap_tol = Some(tol);
        summary.alpha_hat = rate(records.iter().map(|r| r.extra[idx] != 1.0));
        if sep_ok {
            if let Some(v) = rate(correct.iter().map(|r| sep_cov(r))) {
                summary.conditional_coverage.insert("separated".into(), v);
            }
        }
        if cl_ok {
            if let Some(v) = rate(correct.iter().map(|r| cl_cov(r))) {
                summary.conditional_coverage.insert("clustered".into(), v);
            }
        }
    }
    let k = &mut summary.constants;
    k.insert("radius".into(), *radius);
    k.insert("threshold".into(), threshold);
    k.insert("separated_level".into(), sep_level);
    k.insert("clustered_level".into(), cl_level);
    k.insert("separated_bound".into(), sep_bound);
    k.insert("clustered_bound".into(), cl_bound);
    k.insert(
        "separated_failure_budget".into(),
        cfg.tau + separated_failure_budget(info, c, cfg.n),
    );
    k.insert(
        "clustered_failure_budget".into(),
        cfg.tau + clustered_failure_budget(info, c, cfg.n),
    );
    finish(cfg, StudyKind::Eigenvalue, extra_columns, records, summary)
}

fn finish(
    cfg: &McConfig,
    study: StudyKind,
    extra_columns: Vec<String>,
    records: Vec<TrialRecord>,
    mut summary: Summary,
) -> Result<McReport> {
    summary.median_residual = median(&records.iter().map(|r| r.residual.abs()).collect::<Vec<_>>());
    Ok(McReport {
        study,
        config: cfg.clone(),
        extra_columns,
        records,
        summary,
    })
}

fn function_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect()
}

/// Sup-over-pairs bilinear-form residuals against `ξ`, and weak limits of each pair.
pub fn run_projection_study(cfg: &McConfig) -> Result<McReport> {
    let prep = validate_for(cfg, StudyKind::Projection)?;
    let Prepared {
        model,
        info,
        constants: c,
        radius,
        r_trunc,
        m_f,
    } = &prep;
    let threshold = c.threshold(cfg.n);
    let level = info.gamma_j / 4.0;
    let cond = threshold <= level;
    let xi = xi_from_radius(info, *m_f, *radius);
    let pairs = function_pairs(cfg.functions.len());
    let root_n = (cfg.n as f64).sqrt();
    let extra_columns: Vec<String> = pairs
        .iter()
        .map(|(a, b)| format!("scaled_dev_{a}_{b}"))
        .collect();

    let records = run_trials(cfg.trials as u32, |t| {
        let s = sample(cfg, t);
        let tg = trial_gram(model, &s)?;
        let ups = upsilon_from_dev(model.lambdas(), &tg.fg.deviation(), info, *r_trunc)?;
        let mut sup: f64 = 0.0;
        let mut extra = Vec::with_capacity(pairs.len());
        for &(a, b) in &pairs {
            let d = bilinear_from_gram(&tg.fg, info, &ups, &cfg.functions[a], &cfg.functions[b])?;
            sup = sup.max(d.residual());
            extra.push(root_n * (d.empirical - d.population));
        }
        let (opnorm, _) = tg.opnorm(model)?;
        Ok(TrialRecord {
            trial: t,
            n: cfg.n,
            condition_ok: cond,
            residual: sup,
            bound: Some(xi),
            covered: Some(sup <= xi),
            opnorm_dev: opnorm,
            extra,
        })
    })?;

    let mut summary = Summary {
        condition_ok_trials: records.iter().filter(|r| r.condition_ok).count(),
        coverage: rate(
            records
                .iter()
                .filter(|r| r.condition_ok)
                .map(|r| r.covered == Some(true)),
        ),
        ..Summary::default()
    };
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let var = bilinear_limit_variance(model, info, &cfg.functions[a], &cfg.functions[b]);
        let limit = normal_draws(var, cfg.limit_draws, cfg.seed, i as u64);
        let emp: Vec<f64> = records.iter().map(|r| r.extra[i]).collect();
        summary
            .ks
            .insert(format!("pair_{a}_{b}"), ks_distance(&emp, &limit)?);
        summary
            .constants
            .insert(format!("limit_variance_{a}_{b}"), var);
    }
    let k = &mut summary.constants;
    k.insert("radius".into(), *radius);
    k.insert("threshold".into(), threshold);
    k.insert("level".into(), level);
    k.insert("xi".into(), xi);
    k.insert("m_f".into(), *m_f);
    finish(cfg, StudyKind::Projection, extra_columns, records, summary)
}

/// Exceedance of `‖Ĥ_n − H‖_{op,H}` over the Bernstein radius and over smaller levels.
pub fn run_opnorm_study(cfg: &McConfig) -> Result<McReport> {
    let prep = validate_for(cfg, StudyKind::Opnorm)?;
    let Prepared {
        model,
        constants: c,
        radius,
        ..
    } = &prep;
    let threshold = c.threshold(cfg.n);
    let extra_columns = vec!["tail_trace".to_string()];
    let records = run_trials(cfg.trials as u32, |t| {
        let s = sample(cfg, t);
        let tg = trial_gram(model, &s)?;
        let (head, upper) = tg.opnorm(model)?;
        Ok(TrialRecord {
            trial: t,
            n: cfg.n,
            condition_ok: true,
            residual: upper,
            bound: Some(*radius),
            covered: Some(upper < *radius),
            opnorm_dev: head,
            extra: vec![tg.tail_trace],
        })
    })?;
    let mut summary = Summary {
        condition_ok_trials: records.len(),
        coverage: rate(records.iter().map(|r| r.covered == Some(true))),
        exceedance: rate(records.iter().map(|r| r.residual >= *radius)),
        ..Summary::default()
    };
    for s in [1.0 / 3.0, 2.0 / 3.0, 1.0] {
        let t = threshold + (radius - threshold) * s;
        summary.tail_checks.push(TailCheck {
            t,
            exceedance: rate(records.iter().map(|r| r.residual >= t)).unwrap_or(0.0),
            tail_bound: bernstein_tail(c, cfg.n, t)?,
        });
    }
    summary.constants.insert("radius".into(), *radius);
    summary.constants.insert("threshold".into(), threshold);
    summary.constants.insert("tau".into(), cfg.tau);
    finish(cfg, StudyKind::Opnorm, extra_columns, records, summary)
}

/// Empirical laws of `√n Σ_{k∈J}(λ̂_k − λ_k)`, of each `√n(λ̂_k − λ_k)` and of one bilinear
/// form, compared by KS distance with draws from their Gaussian limits.
pub fn run_limit_study(cfg: &McConfig) -> Result<McReport> {
    let prep = validate_for(cfg, StudyKind::Limit)?;
    let Prepared {
        model,
        info,
        constants: c,
        r_trunc,
        ..
    } = &prep;
    let root_n = (cfg.n as f64).sqrt();
    let cond = c.threshold(cfg.n) <= info.gamma_j / 4.0;
    let pair = match cfg.functions.len() {
        0 => None,
        1 => Some((0, 0)),
        _ => Some((0, 1)),
    };
    let mut extra_columns: Vec<String> =
        info.j_set.iter().map(|k| format!("component_{k}")).collect();
    if pair.is_some() {
        extra_columns.push("bilinear".into());
    }

    let records = run_trials(cfg.trials as u32, |t| {
        let s = sample(cfg, t);
        let tg = trial_gram(model, &s)?;
        let eig = tg.fg.eigenvalues();
        let comps: Vec<f64> = info
            .j_set
            .iter()
            .map(|&k| root_n * (eig[k - 1] - model.lambda(k)))
            .collect();
        let sum: f64 = comps.iter().sum();
        let mut extra = comps;
        if let Some((a, b)) = pair {
            let ups = upsilon_from_dev(model.lambdas(), &tg.fg.deviation(), info, *r_trunc)?;
            let d = bilinear_from_gram(&tg.fg, info, &ups, &cfg.functions[a], &cfg.functions[b])?;
            extra.push(root_n * (d.empirical - d.population));
        }
        let (opnorm, _) = tg.opnorm(model)?;
        Ok(TrialRecord {
            trial: t,
            n: cfg.n,
            condition_ok: cond,
            residual: sum,
            bound: None,
            covered: None,
            opnorm_dev: opnorm,
            extra,
        })
    })?;

    let limits = gaussian_limit_sampler(model, info, cfg.limit_draws, cfg.seed)?;
    let mut summary = Summary {
        condition_ok_trials: records.iter().filter(|r| r.condition_ok).count(),
        ..Summary::default()
    };
    let sums: Vec<f64> = records.iter().map(|r| r.residual).collect();
    summary.ks.insert("sum".into(), ks_distance(&sums, &limits.sum)?);
    for (i, &k) in info.j_set.iter().enumerate() {
        let emp: Vec<f64> = records.iter().map(|r| r.extra[i]).collect();
        summary
            .ks
            .insert(format!("component_{k}"), ks_distance(&emp, &limits.component(i))?);
    }
    if let Some((a, b)) = pair {
        let var = bilinear_limit_variance(model, info, &cfg.functions[a], &cfg.functions[b]);
        let i = info.j_set.len();
        let emp: Vec<f64> = records.iter().map(|r| r.extra[i]).collect();
        let limit = normal_draws(var, cfg.limit_draws, cfg.seed, 0);
        summary.ks.insert("bilinear".into(), ks_distance(&emp, &limit)?);
        summary.constants.insert("bilinear_limit_variance".into(), var);
    }
    let mean = sums.iter().sum::<f64>() / sums.len() as f64;
    let sd = if sums.len() > 1 {
        (sums.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (sums.len() - 1) as f64).sqrt()
    } else {
        0.0
    };
    let k = &mut summary.constants;
    k.insert("sum_limit_variance".into(), limits.sum_variance);
    k.insert("sum_sample_sd".into(), sd);
    finish(cfg, StudyKind::Limit, extra_columns, records, summary)
}

pub fn run_study(cfg: &McConfig, kind: StudyKind) -> Result<McReport> {
    match kind {
        StudyKind::Eigenvalue => run_eigenvalue_study(cfg),
        StudyKind::Projection => run_projection_study(cfg),
        StudyKind::Opnorm => run_opnorm_study(cfg),
        StudyKind::Limit => run_limit_study(cfg),
    }
}

/// One study repeated over several sample sizes.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub reports: Vec<McReport>,
    /// `median_residual`: log-log slope of the median residual against `n`;
    /// `alpha_hat`: log-log slope of the index-estimator error rate, when present.
    pub slopes: BTreeMap<String, f64>,
}

impl Sweep {
    pub fn ns(&self) -> Vec<usize> {
        self.reports.iter().map(|r| r.config.n).collect()
    }
}

pub fn run_sweep(cfg: &McConfig, kind: StudyKind, ns: &[usize]) -> Result<Sweep> {
    if ns.is_empty() {
        return Err(Error::ConfigInvalid("sample-size sweep is empty".into()));
    }
    let reports = ns
        .iter()
        .map(|&n| {
            let mut c = cfg.clone();
            c.n = n;
            run_study(&c, kind)
        })
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let mut slopes = BTreeMap::new();
    let med: Vec<f64> = reports.iter().map(|r| r.summary.median_residual).collect();
    if ns.len() > 1 {
        slopes.insert("median_residual".into(), loglog_slope(&x, &med));
        let alpha: Option<Vec<f64>> = reports.iter().map(|r| r.summary.alpha_hat).collect();
        if let Some(a) = alpha {
            slopes.insert("alpha_hat".into(), loglog_slope(&x, &a));
        }
    }
    Ok(Sweep { reports, slopes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{KernelKind, KernelSpec};

    fn finite(l: &[f64]) -> KernelSpec {
        KernelSpec {
            kind: KernelKind::FiniteRank,
            lambdas: Some(l.to_vec()),
            rank: None,
        }
    }

    #[test]
    fn constant_kernel_single_point() {
        let cfg = McConfig::new(finite(&[1.0]), 1, 1, 0, vec![1]);
        let r = run_eigenvalue_study(&cfg).unwrap();
        assert_eq!(r.records[0].extra[4], 0.0);
        assert_eq!(r.records[0].residual, 0.0);
    }

    #[test]
    fn zero_function_class() {
        let mut cfg = McConfig::new(finite(&[1.0, 0.5, 0.5, 0.25]), 2000, 5, 0, vec![2, 3]);
        cfg.functions = vec![vec![0.0]];
        cfg.limit_draws = 100;
        let r = run_projection_study(&cfg).unwrap();
        assert!(r.records.iter().all(|t| t.residual == 0.0));
        assert_eq!(r.summary.coverage, Some(1.0));
    }

    #[test]
    fn rejects_bad_configs() {
        let cfg = McConfig::new(finite(&[1.0]), 10, 0, 0, vec![1]);
        assert!(matches!(run_opnorm_study(&cfg), Err(Error::ConfigInvalid(_))));
        let cfg = McConfig::new(finite(&[1.0, 0.5]), 10, 2, 0, vec![2]);
        assert!(matches!(run_projection_study(&cfg), Err(Error::ConfigInvalid(_))));
    }

    #[test]
    fn brownian_opnorm_rows() {
        let spec = KernelSpec {
            kind: KernelKind::Brownian,
            lambdas: None,
            rank: Some(16),
        };
        let cfg = McConfig::new(spec, 200, 8, 1, vec![1]);
        let r = run_opnorm_study(&cfg).unwrap();
        assert_eq!(r.records.len(), 8);
        assert!(r.records.iter().all(|t| t.residual >= t.opnorm_dev));
    }
}
