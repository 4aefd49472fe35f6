use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{trial_rng, unit_quadrature, KernelModel};
use crate::linalg::{eigh, spec_desc, Matrix, SymmetricMatrix};
use crate::spectral::IndexSetInfo;

/// Relative tolerance for negative covariance eigenvalues caused by roundoff.
pub const PSD_TOL: f64 = 1e-10;

/// Stream offsets keeping limit draws apart from the per-trial sample streams.
pub(crate) const LIMIT_STREAM: u64 = 1 << 62;

/// Two-sample Kolmogorov–Smirnov statistic `sup_x |F_a(x) − F_b(x)|`.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // Step past every copy of the smallest remaining value before comparing.
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Covariance of the Brownian bridge `G_P` over functions tabulated on the quadrature nodes:
/// `P(fg) − Pf·Pg`, computed as `P((f − Pf)(g − Pg))`.
pub fn bridge_covariance(table: &[Vec<f64>]) -> SymmetricMatrix {
    let q = unit_quadrature();
    let means: Vec<f64> = table
        .iter()
        .map(|f| q.weights.iter().zip(f).map(|(w, v)| w * v).sum())
        .collect();
    // Centering first keeps constant functions at exactly zero variance.
    let centered: Vec<Vec<f64>> = table
        .iter()
        .zip(&means)
        .map(|(f, m)| f.iter().map(|v| v - m).collect())
        .collect();
    let m = table.len();
    let mut cov = Matrix::zeros(m, m);
    for a in 0..m {
        for b in a..m {
            let v: f64 = q
                .weights
                .iter()
                .zip(centered[a].iter().zip(&centered[b]))
                .map(|(w, (x, y))| w * x * y)
                .sum();
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }
    SymmetricMatrix::new(cov).expect("finite covariance")
}

/// `Var_P(w)` for `w` evaluated on the quadrature nodes.
pub fn bridge_variance(w: impl Fn(f64) -> f64) -> f64 {
    let q = unit_quadrature();
    let table: Vec<f64> = q.nodes.iter().map(|&x| w(x)).collect();
    bridge_covariance(&[table]).get(0, 0).max(0.0)
}

/// A factor `L` with `L Lᵀ = cov`, from the symmetric eigen-decomposition.
pub fn covariance_root(cov: &SymmetricMatrix) -> Result<Matrix> {
    let spec = eigh(cov)?;
    let scale = spec.eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    let min = spec.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -PSD_TOL * scale {
        return Err(Error::NonPsdCovariance(min));
    }
    let m = cov.dim();
    Ok(Matrix::from_fn(m, m, |i, j| {
        spec.eigenvectors[(i, j)] * spec.eigenvalues[j].max(0.0).sqrt()
    }))
}

fn normals<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.sample(StandardNormal)).collect()
}

/// Draws from the weak limits of the eigenvalues in `J`.
#[derive(Debug, Clone, Serialize)]
pub struct LimitSamples {
    /// Per draw, `⊕_j spec↓(θ_j G(φ_kφ_ℓ))_{k,ℓ∈J_j}` in the order of `J`.
    pub ordered: Vec<Vec<f64>>,
    /// Independent draws of `G(Σ_{k∈J} λ_k φ_k²)`.
    pub sum: Vec<f64>,
    pub sum_variance: f64,
}

impl LimitSamples {
    /// Draws of the `i`-th ordered component.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.ordered.iter().map(|v| v[i]).collect()
    }
}

/// Samples the Gaussian limits of `√n(λ̂_k − λ_k)_{k∈J}` and of `√n Σ_{k∈J}(λ̂_k − λ_k)`.
///
/// The joint law of `G(φ_kφ_ℓ)` over pairs inside each cluster comes from quadrature
/// covariances and an eigen-decomposition square root.
pub fn gaussian_limit_sampler(
    model: &KernelModel,
    info: &IndexSetInfo,
    draws: usize,
    seed: u64,
) -> Result<LimitSamples> {
    let q = unit_quadrature();
    let phi = |k: usize| -> Vec<f64> {
        q.nodes.iter().map(|&x| model.eigenfunction(k, x)).collect()
    };
    // Pairs (k, ℓ), k ≤ ℓ, inside each cluster, with their cluster and local positions.
    let mut pairs = Vec::new();
    let mut table = Vec::new();
    for (c, cluster) in info.clusters.iter().enumerate() {
        for a in 0..cluster.len() {
            let fa = phi(cluster[a]);
            for b in a..cluster.len() {
                let fb = phi(cluster[b]);
                table.push(fa.iter().zip(&fb).map(|(x, y)| x * y).collect::<Vec<_>>());
                pairs.push((c, a, b));
            }
        }
    }
    let root = covariance_root(&bridge_covariance(&table))?;
    let mut rng = trial_rng(seed, LIMIT_STREAM);
    let mut ordered = Vec::with_capacity(draws);
    for _ in 0..draws {
        let g = root.matvec(&normals(&mut rng, pairs.len()));
        let mut blocks: Vec<Matrix> = info
            .clusters
            .iter()
            .map(|c| Matrix::zeros(c.len(), c.len()))
            .collect();
        for (&(c, a, b), v) in pairs.iter().zip(&g) {
            let s = v * info.thetas[c];
            blocks[c][(a, b)] = s;
            blocks[c][(b, a)] = s;
        }
        let mut out = Vec::with_capacity(info.j_set.len());
        for b in blocks {
            out.extend(spec_desc(&SymmetricMatrix::new(b)?)?);
        }
        ordered.push(out);
    }

    let sum_variance = bridge_variance(|x| {
        info.j_set
            .iter()
            .map(|&k| model.lambda(k) * model.eigenfunction(k, x).powi(2))
            .sum()
    });
    let sd = sum_variance.sqrt();
    let mut rng = trial_rng(seed, LIMIT_STREAM + 1);
    let sum = (0..draws)
        .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Ok(LimitSamples {
        ordered,
        sum,
        sum_variance,
    })
}

/// `Var_P` of `w = Σ_{k,ℓ} a_k b_ℓ c_kℓ φ_kφ_ℓ`, where `c_kℓ` are the `Υ` weights, so that
/// the limit of `√n(⟨P̂ S_n f, S_n g⟩ − ⟨P_J f, g⟩)` is `N(0, Var_P(w))`.
pub fn bilinear_limit_variance(
    model: &KernelModel,
    info: &IndexSetInfo,
    f: &[f64],
    g: &[f64],
) -> f64 {
    let weight = |k: usize, l: usize| -> f64 {
        match (info.contains(k), info.contains(l)) {
            (true, true) => 1.0,
            (true, false) => model.lambda(k) / (model.lambda(k) - model.lambda(l)),
            (false, true) => model.lambda(l) / (model.lambda(l) - model.lambda(k)),
            (false, false) => 0.0,
        }
    };
    let mut terms = Vec::new();
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            let c = a * b * weight(i + 1, j + 1);
            if c != 0.0 {
                terms.push((i + 1, j + 1, c));
            }
        }
    }
    bridge_variance(|x| {
        terms
            .iter()
            .map(|&(k, l, c)| c * model.eigenfunction(k, x) * model.eigenfunction(l, x))
            .sum()
    })
}

/// `draws` i.i.d. `N(0, variance)` values from the stream reserved for limit draws.
pub fn normal_draws(variance: f64, draws: usize, seed: u64, stream: u64) -> Vec<f64> {
    let sd = variance.max(0.0).sqrt();
    let mut rng = trial_rng(seed, LIMIT_STREAM + 2 + stream);
    (0..draws)
        .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
        .collect()
}
