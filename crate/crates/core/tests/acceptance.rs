//! Acceptance suite: one line per criterion, non-zero exit if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectra::cli::{cmd_kernel_study, KernelStudyConfig};
use spectra::fixtures::{all_fixtures, fixture_f1, fixture_f2, random_case, random_symmetric, PairCondition};
use spectra::kernel::{
    gram, nystrom, FeatureGram, KernelKind, KernelModel, KernelSpec, SampleSet, EPS_EIG,
};
use spectra::linalg::{eigh, spectral_distance, Matrix, SymmetricMatrix};
use spectra::montecarlo::{
    loglog_slope, run_eigenvalue_study, run_limit_study, run_opnorm_study, McConfig, StudyKind,
    THREADS_ENV,
};
use spectra::perturbation::{
    congruence_shift, eigval_expansion_clustered, eigval_expansion_separated, overlap,
    projection_expansion, ExpansionReport,
};
use spectra::spectral::{
    build_index_set, cauchy_integral, cauchy_residue, compress, contour_compress, HoloFunction,
};

type Outcome = Result<String, String>;

fn finite_rank_spec() -> KernelSpec {
    KernelSpec {
        kind: KernelKind::FiniteRank,
        lambdas: Some(vec![1.0, 0.5, 0.5, 0.25]),
        rank: None,
    }
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Closed-form eigenvalues of a symmetric 3×3 matrix (trigonometric solution of the cubic).
fn cubic_eigenvalues(a: &Matrix) -> [f64; 3] {
    let p1 = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
    let q = a.trace() / 3.0;
    let p2 = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q, q, q];
    }
    let b = Matrix::from_fn(3, 3, |i, j| (a[(i, j)] - if i == j { q } else { 0.0 }) / p);
    let det = b[(0, 0)] * (b[(1, 1)] * b[(2, 2)] - b[(1, 2)] * b[(2, 1)])
        - b[(0, 1)] * (b[(1, 0)] * b[(2, 2)] - b[(1, 2)] * b[(2, 0)])
        + b[(0, 2)] * (b[(1, 0)] * b[(2, 1)] - b[(1, 1)] * b[(2, 0)]);
    let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    [e1, 3.0 * q - e1 - e3, e3]
}

fn c1_eigensolver() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_rec, mut worst_orth, mut worst_cubic) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..500u64 {
        let dim = rng.random_range(2..=12usize);
        let a = random_symmetric(dim, 10_000 + i);
        let s = eigh(&a).map_err(|e| e.to_string())?;
        let rec = s.reconstruct().matrix().sub(a.matrix()).fro_norm() / a.matrix().fro_norm();
        let v = &s.eigenvectors;
        let orth = v.transpose().matmul(v).sub(&Matrix::identity(dim)).max_abs();
        worst_rec = worst_rec.max(rec);
        worst_orth = worst_orth.max(orth);
        if dim == 3 {
            let c = cubic_eigenvalues(a.matrix());
            for k in 0..3 {
                worst_cubic = worst_cubic.max((c[k] - s.eigenvalues[k]).abs());
            }
        }
    }
    // Make sure the cubic oracle is exercised even if few draws had dimension 3.
    for i in 0..100u64 {
        let a = random_symmetric(3, 50_000 + i);
        let s = eigh(&a).map_err(|e| e.to_string())?;
        let c = cubic_eigenvalues(a.matrix());
        for k in 0..3 {
            worst_cubic = worst_cubic.max((c[k] - s.eigenvalues[k]).abs());
        }
    }
    ensure(
        worst_rec <= 1e-10 && worst_orth <= 1e-12 && worst_cubic <= 1e-10,
        format!("reconstruction {worst_rec:.2e}, orthonormality {worst_orth:.2e}, cubic {worst_cubic:.2e}"),
    )
}

fn c2_weyl_hoffman_wielandt() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0;
    let (mut weyl_margin, mut hw_margin) = (f64::INFINITY, f64::INFINITY);
    for i in 0..1000u64 {
        let dim = rng.random_range(2..=10usize);
        let a = random_symmetric(dim, 20_000 + 2 * i);
        let scale: f64 = rng.random_range(1e-3..1.0);
        let b = a
            .add(&random_symmetric(dim, 20_001 + 2 * i).scale(scale).unwrap())
            .unwrap();
        let d = spectral_distance(&a, &b).map_err(|e| e.to_string())?;
        if d.max_eig_diff > d.op_norm_diff + 1e-12 || d.l2_eig_diff > d.fro_norm_diff + 1e-12 {
            violations += 1;
        }
        weyl_margin = weyl_margin.min(d.op_norm_diff - d.max_eig_diff);
        hw_margin = hw_margin.min(d.fro_norm_diff - d.l2_eig_diff);
    }
    ensure(
        violations == 0,
        format!("{violations} violations in 1000 pairs; smallest slack Weyl {weyl_margin:.2e}, HW {hw_margin:.2e}"),
    )
}

fn violations(
    condition: PairCondition,
    f: impl Fn(&spectra::linalg::Spectrum, &SymmetricMatrix, &spectra::spectral::IndexSetInfo) -> spectra::Result<ExpansionReport>,
) -> Result<(usize, usize, f64), String> {
    let (mut bad, mut checked, mut worst) = (0, 0, 0.0f64);
    for seed in 0..200u64 {
        let c = random_case(1000 + seed, condition);
        let spec = eigh(&c.h).map_err(|e| e.to_string())?;
        let info = build_index_set(&spec, &c.j_set).map_err(|e| e.to_string())?;
        let r = f(&spec, &c.h_hat(), &info).map_err(|e| format!("seed {seed}: {e}"))?;
        if !r.condition_ok {
            return Err(format!("seed {seed}: generated pair misses its condition"));
        }
        checked += 1;
        if !r.within_bound() {
            bad += 1;
        }
        if r.bound > 0.0 {
            worst = worst.max(r.remainder / r.bound);
        }
    }
    Ok((bad, checked, worst))
}

fn fixture_slope(
    fixture: &spectra::fixtures::MatrixFixture,
    f: impl Fn(&spectra::linalg::Spectrum, &SymmetricMatrix, &spectra::spectral::IndexSetInfo) -> spectra::Result<ExpansionReport>,
) -> Result<f64, String> {
    let spec = eigh(&fixture.h).map_err(|e| e.to_string())?;
    let info = build_index_set(&spec, &fixture.j_set).map_err(|e| e.to_string())?;
    let eps = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut rem = Vec::new();
    for &e in &eps {
        let r = f(&spec, &fixture.perturbed(e).unwrap(), &info).map_err(|e| e.to_string())?;
        rem.push(r.remainder);
    }
    Ok(loglog_slope(&eps, &rem))
}

fn c3_projection_bound() -> Outcome {
    let (bad, n, worst) = violations(PairCondition::Outer, projection_expansion)?;
    let slope = fixture_slope(&fixture_f1(), projection_expansion)?;
    ensure(
        bad == 0 && (1.8..=2.2).contains(&slope),
        format!("{bad}/{n} violations (max remainder/bound {worst:.3}); F1 slope {slope:.3}"),
    )
}

fn c4_eigenvalue_bounds() -> Outcome {
    let (bad_s, n_s, worst_s) = violations(PairCondition::PerCluster, eigval_expansion_separated)?;
    let (bad_c, n_c, worst_c) = violations(PairCondition::Clustered, eigval_expansion_clustered)?;
    let slope_s = fixture_slope(&fixture_f2(), eigval_expansion_separated)?;
    let slope_c = fixture_slope(&fixture_f2(), eigval_expansion_clustered)?;
    let ok = bad_s == 0
        && bad_c == 0
        && (1.8..=2.2).contains(&slope_s)
        && (1.8..=2.2).contains(&slope_c);
    ensure(
        ok,
        format!(
            "separated {bad_s}/{n_s} violations (max ratio {worst_s:.3}), clustered {bad_c}/{n_c} (max ratio {worst_c:.3}); F2 slopes {slope_s:.3}, {slope_c:.3}"
        ),
    )
}

fn c5_compression() -> Outcome {
    let funcs = [
        HoloFunction::One,
        HoloFunction::Identity,
        HoloFunction::Power(2),
        HoloFunction::Exp,
    ];
    let mut worst = 0.0f64;
    let mut runs = 0;
    let mut overlapping = Vec::new();
    for fx in all_fixtures() {
        {
            let spec = eigh(&fx.h).map_err(|e| e.to_string())?;
            let info = build_index_set(&spec, &fx.j_set).map_err(|e| format!("{}: {e}", fx.name))?;
            // Inside cluster values closer than γ_J give intersecting disks, which must be
            // reported rather than merged.
            let close = info.thetas.windows(2).any(|w| w[0] - w[1] < info.gamma_j);
            if close {
                match contour_compress(&spec, &HoloFunction::One, &info, 512) {
                    Err(spectra::Error::OverlappingDisks { .. }) => overlapping.push(fx.name.clone()),
                    other => return Err(format!("{}: expected OverlappingDisks, got {other:?}", fx.name)),
                }
                continue;
            }
            for f in &funcs {
                let exact = compress(&spec, f, &info);
                let quad = contour_compress(&spec, f, &info, 512)
                    .map_err(|e| format!("{}: {e}", fx.name))?;
                worst = worst.max(quad.matrix().sub(exact.matrix()).fro_norm());
                runs += 1;
            }
        }
    }
    let c = |re: f64| Complex64::new(re, 0.0);
    let center = c(0.0);
    let cases = [
        (c(0.3), c(0.3)),
        (c(0.3), c(-0.4)),
        (c(0.2), c(2.0)),
        (c(-3.0), Complex64::new(0.1, 0.5)),
        (c(2.0), c(-1.7)),
    ];
    let mut worst_res = 0.0f64;
    for f in &funcs {
        for &(a, b) in &cases {
            let q = cauchy_integral(a, b, f, center, 1.0, 256).map_err(|e| e.to_string())?;
            let r = cauchy_residue(a, b, f, center, 1.0);
            worst_res = worst_res.max((q - r).norm());
        }
    }
    ensure(
        worst <= 1e-8 && worst_res <= 1e-8,
        format!(
            "max Frobenius gap {worst:.2e} over {runs} runs; overlapping disks reported for {overlapping:?}; residue table max error {worst_res:.2e}"
        ),
    )
}

fn c6_overlap() -> Outcome {
    let mut runs = 0;
    let mut bad = 0;
    for fx in all_fixtures() {
        let spec = eigh(&fx.h).map_err(|e| e.to_string())?;
        let info = build_index_set(&spec, &fx.j_set).map_err(|e| e.to_string())?;
        for eps in [0.02, 0.05, 0.1, 0.2, 0.4, 0.8, 1.2] {
            let hh = fx.perturbed(eps).unwrap();
            let sh = eigh(&hh).map_err(|e| e.to_string())?;
            let o = overlap(&spec, &sh, &info).map_err(|e| e.to_string())?;
            if !o.condition_ok {
                continue;
            }
            runs += 1;
            if o.defect > o.bound + 1e-12 {
                bad += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad_pairs = 0;
    let mut spec_checked = 0;
    for i in 0..200u64 {
        let dim = rng.random_range(2..=8usize);
        let q = spectra::fixtures::random_orthogonal(dim, &mut rng);
        let g = Matrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
        let size: f64 = rng.random_range(0.0..0.2) / dim as f64;
        let a = q.add(&g.scale(size));
        let u = if i % 2 == 0 {
            random_symmetric(dim, 60_000 + i).into_matrix()
        } else {
            Matrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0))
        };
        let s = congruence_shift(&a, &u).map_err(|e| e.to_string())?;
        if s.defect >= 0.5 {
            return Err(format!("pair {i}: defect {} not below 1/2", s.defect));
        }
        let mut ok = s.trace_diff <= s.bound + 1e-12;
        if let Some(d) = s.spectrum_diff {
            spec_checked += 1;
            ok &= d <= s.bound + 1e-12;
        }
        if !ok {
            bad_pairs += 1;
        }
    }
    ensure(
        bad == 0 && bad_pairs == 0 && runs > 0,
        format!(
            "overlap {bad}/{runs} fixture runs violated; congruence {bad_pairs}/200 pairs violated ({spec_checked} with spectrum check)"
        ),
    )
}

fn c7_nystrom() -> Outcome {
    let models = [
        ("finite-rank", KernelModel::finite_rank(&[1.0, 0.5, 0.5, 0.25]).unwrap()),
        ("constant", KernelModel::constant()),
        ("brownian", KernelModel::brownian()),
    ];
    let (mut id_err, mut orth_err, mut spec_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut functions = 0;
    let mut eigh_secs = 0.0f64;
    for (name, model) in &models {
        for (i, &n) in [50usize, 200, 800].iter().enumerate() {
            let s = SampleSet::draw(n, 70 + i as u64, 0).map_err(|e| e.to_string())?;
            let t0 = Instant::now();
            let g = gram(model, &s).map_err(|e| e.to_string())?;
            if n == 800 {
                eigh_secs = eigh_secs.max(t0.elapsed().as_secs_f64());
            }
            let ks: Vec<usize> = (1..=n).filter(|&k| g.eigenvalues[k - 1] > 1e-8).collect();
            // Columns c_k = φ̂_k/(n√λ̂_k); ⟨ψ̂_k, ψ̂_ℓ⟩_H = c_kᵀ K c_ℓ with K = nĤ_n.
            let mut cols = Matrix::zeros(n, ks.len());
            for (j, &k) in ks.iter().enumerate() {
                let psi = nystrom(model, &s, &g, k).map_err(|e| e.to_string())?;
                let phi = g.phi_hat(k);
                for (v, p) in psi.sample_values().iter().zip(&phi) {
                    id_err = id_err.max((v - psi.lambda_hat.sqrt() * p).abs());
                }
                let c = 1.0 / (n as f64 * psi.lambda_hat.sqrt());
                for r in 0..n {
                    cols[(r, j)] = phi[r] * c;
                }
                functions += 1;
            }
            let kmat = g.gram.matrix().scale(n as f64);
            let inner = cols.transpose().matmul(&kmat).matmul(&cols);
            orth_err = orth_err.max(inner.sub(&Matrix::identity(ks.len())).max_abs());
            if model.is_finite_rank() {
                let fg = FeatureGram::new(model, &s).map_err(|e| e.to_string())?;
                for k in 0..n {
                    let other = fg.eigenvalues().get(k).copied().unwrap_or(0.0);
                    spec_err = spec_err.max((g.eigenvalues[k] - other).abs());
                }
            }
            let _ = name;
        }
    }
    let _ = EPS_EIG;
    ensure(
        id_err <= 1e-10 && orth_err <= 1e-8 && spec_err <= 1e-9,
        format!(
            "sample-point identity {id_err:.2e}, H-orthonormality {orth_err:.2e} over {functions} functions, Gram vs covariance spectrum {spec_err:.2e}; dense n = 800 solve {eigh_secs:.1}s"
        ),
    )
}

fn c8_bernstein() -> Outcome {
    let mut cfg = McConfig::new(finite_rank_spec(), 2000, 2000, 8, vec![1]);
    cfg.tau = 0.1;
    let r = run_opnorm_study(&cfg).map_err(|e| e.to_string())?;
    let exc = r.summary.exceedance.unwrap_or(1.0);
    let tails_ok = r.summary.tail_checks.len() == 3
        && r
            .summary
            .tail_checks
            .iter()
            .all(|t| t.exceedance <= t.tail_bound);
    let tails: Vec<String> = r
        .summary
        .tail_checks
        .iter()
        .map(|t| format!("t={:.4}: {:.4} <= {:.4}", t.t, t.exceedance, t.tail_bound))
        .collect();
    ensure(
        exc <= 0.1 && tails_ok,
        format!(
            "exceedance at radius {:.4}: {exc:.4}; {}",
            r.summary.constants["radius"],
            tails.join(", ")
        ),
    )
}

fn eigen_config(n: usize, trials: usize) -> McConfig {
    let mut cfg = McConfig::new(finite_rank_spec(), n, trials, 9, vec![2, 3]);
    cfg.tau = 0.1;
    cfg
}

fn c9_eigen_coverage() -> Outcome {
    let r = run_eigenvalue_study(&eigen_config(2000, 500)).map_err(|e| e.to_string())?;
    let sep = r.summary.coverage_by_regime.get("separated").copied();
    let cl = r.summary.coverage_by_regime.get("clustered").copied();
    ensure(
        sep.is_some_and(|v| v >= 0.85) && cl.is_some_and(|v| v >= 0.85),
        format!(
            "coverage separated {sep:?}, clustered {cl:?} (bounds {:.3}, {:.3}; median residual {:.2e})",
            r.summary.constants["separated_bound"],
            r.summary.constants["clustered_bound"],
            r.summary.median_residual
        ),
    )
}

fn c10_weak_limits() -> Outcome {
    let mut cfg = McConfig::new(finite_rank_spec(), 2000, 2000, 10, vec![2, 3]);
    cfg.functions = vec![vec![0.0, 1.0], vec![0.0, 0.0, 1.0]];
    cfg.limit_draws = 10_000;
    let r = run_limit_study(&cfg).map_err(|e| e.to_string())?;
    let ks = &r.summary.ks;
    let want = ["sum", "component_2", "component_3", "bilinear"];
    let ok = want.iter().all(|k| ks.get(*k).is_some_and(|v| *v <= 0.08));
    let detail: Vec<String> = want
        .iter()
        .map(|k| format!("{k} {:.4}", ks.get(*k).copied().unwrap_or(f64::NAN)))
        .collect();
    ensure(ok, format!("KS {}", detail.join(", ")))
}

fn c11_index_estimate() -> Outcome {
    let mut alphas = Vec::new();
    for n in [200, 800, 3200] {
        let mut cfg = eigen_config(n, 500);
        cfg.cluster_rank = Some(2);
        cfg.gap_tol = Some(0.03);
        let r = run_eigenvalue_study(&cfg).map_err(|e| e.to_string())?;
        alphas.push(r.summary.alpha_hat.unwrap_or(f64::NAN));
    }
    let decreasing = alphas.windows(2).all(|w| w[1] < w[0]);

    let mut cfg = eigen_config(2000, 500);
    cfg.cluster_rank = Some(2);
    cfg.gap_tol = Some(0.03);
    let r = run_eigenvalue_study(&cfg).map_err(|e| e.to_string())?;
    let alpha = r.summary.alpha_hat.unwrap_or(1.0);
    let m_all = r.records.len() as f64;
    let m_cond = ((1.0 - alpha) * m_all).round().max(1.0);
    let mut ok = decreasing;
    let mut parts = Vec::new();
    for regime in ["separated", "clustered"] {
        let p = r.summary.coverage_by_regime.get(regime).copied();
        let q = r.summary.conditional_coverage.get(regime).copied();
        match (p, q) {
            (Some(p), Some(q)) => {
                let var = p * (1.0 - p);
                let margin = 3.0 * (var * (1.0 / m_all + 1.0 / m_cond)).sqrt() + 1.0 / m_cond;
                ok &= (p - q).abs() <= margin;
                parts.push(format!("{regime} {q:.4} vs {p:.4} (margin {margin:.4})"));
            }
            _ => {
                ok = false;
                parts.push(format!("{regime} missing"));
            }
        }
    }
    ensure(
        ok,
        format!(
            "alpha_hat {:.3}, {:.3}, {:.3} at n = 200, 800, 3200 (gap_tol 0.03); conditional coverage {}",
            alphas[0],
            alphas[1],
            alphas[2],
            parts.join(", ")
        ),
    )
}

fn study_csv(cfg: &KernelStudyConfig) -> Result<Vec<u8>, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    cmd_kernel_study(cfg, dir.path()).map_err(|e| e.to_string())?;
    std::fs::read(dir.path().join(format!("{}.csv", cfg.study.name()))).map_err(|e| e.to_string())
}

fn c12_determinism() -> Outcome {
    let studies = [
        StudyKind::Eigenvalue,
        StudyKind::Projection,
        StudyKind::Opnorm,
        StudyKind::Limit,
    ];
    let mut checked = Vec::new();
    for kernel in [finite_rank_spec(), KernelSpec { kind: KernelKind::Brownian, lambdas: None, rank: Some(32) }] {
        for study in studies {
            let cfg = KernelStudyConfig {
                study,
                kernel: kernel.clone(),
                n: Some(300),
                n_sweep: None,
                trials: Some(64),
                seed: 12,
                j_set: Some(vec![1]),
                tau: 0.1,
                r_trunc: None,
                functions: vec![vec![0.0, 1.0], vec![0.5, 0.0, 1.0]],
                gap_tol: None,
                cluster_rank: (study == StudyKind::Eigenvalue).then_some(2),
                limit_draws: 500,
            };
            let a = study_csv(&cfg)?;
            let b = study_csv(&cfg)?;
            std::env::set_var(THREADS_ENV, "1");
            let c = study_csv(&cfg);
            std::env::remove_var(THREADS_ENV);
            let c = c?;
            if a != b || a != c {
                return Err(format!("{:?} {} CSV differs between runs", kernel.kind, study.name()));
            }
            checked.push(format!("{:?}/{}", kernel.kind, study.name()));
        }
    }
    Ok(format!(
        "{} studies byte-identical across reruns and thread counts",
        checked.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("eigensolver oracle equivalence", c1_eigensolver),
        ("Weyl and Hoffman-Wielandt", c2_weyl_hoffman_wielandt),
        ("projection expansion bound", c3_projection_bound),
        ("separated and clustered eigenvalue bounds", c4_eigenvalue_bounds),
        ("compression equivalence", c5_compression),
        ("overlap and congruence inequalities", c6_overlap),
        ("Nystrom duality", c7_nystrom),
        ("Bernstein coverage", c8_bernstein),
        ("eigenvalue concentration coverage", c9_eigen_coverage),
        ("weak limits", c10_weak_limits),
        ("random index set", c11_index_estimate),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
