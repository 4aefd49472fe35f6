//! Frozen matrix fixtures and seeded generators of symmetric matrices and perturbation pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{eigh, op_norm, Matrix, SymmetricMatrix};

/// A matrix, a perturbation direction and an index set, in the JSON matrix format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFixture {
    pub name: String,
    pub h: SymmetricMatrix,
    /// Direction `E`; the perturbed matrix is `H + εE`.
    pub direction: SymmetricMatrix,
    pub j_set: Vec<usize>,
}

impl MatrixFixture {
    pub fn perturbed(&self, eps: f64) -> Result<SymmetricMatrix> {
        self.h.add(&self.direction.scale(eps)?)
    }
}

fn tridiagonal_direction(couplings: &[f64]) -> SymmetricMatrix {
    let n = couplings.len() + 1;
    let mut m = Matrix::zeros(n, n);
    for (i, &c) in couplings.iter().enumerate() {
        m[(i, i + 1)] = c;
        m[(i + 1, i)] = c;
    }
    SymmetricMatrix::new(m).expect("finite fixture")
}

/// `H = diag(3, 2, 2, 1)`, `J = {2, 3}`, couplings `0.1` between consecutive coordinates.
///
/// The symmetric couplings make the second-order eigenvalue shifts cancel, so the
/// eigenvalue remainders are of third order here.
pub fn fixture_f1() -> MatrixFixture {
    MatrixFixture {
        name: "F1".into(),
        h: SymmetricMatrix::from_diag(&[3.0, 2.0, 2.0, 1.0]).expect("diag"),
        direction: tridiagonal_direction(&[0.1, 0.1, 0.1]),
        j_set: vec![2, 3],
    }
}

/// Same `H` and `J` as [`fixture_f1`] with an unequal last coupling `0.2`, which gives
/// nonzero second-order eigenvalue shifts.
pub fn fixture_f2() -> MatrixFixture {
    MatrixFixture {
        name: "F2".into(),
        h: SymmetricMatrix::from_diag(&[3.0, 2.0, 2.0, 1.0]).expect("diag"),
        direction: tridiagonal_direction(&[0.1, 0.1, 0.2]),
        j_set: vec![2, 3],
    }
}

/// Two nearby values inside `J`: `H = diag(3, 2.001, 2, 1)`, `J = {2, 3}`.
pub fn fixture_near_cluster() -> MatrixFixture {
    MatrixFixture {
        name: "near-cluster".into(),
        h: SymmetricMatrix::from_diag(&[3.0, 2.001, 2.0, 1.0]).expect("diag"),
        direction: tridiagonal_direction(&[0.1, 0.1, 0.2]),
        j_set: vec![2, 3],
    }
}

/// Two well-separated clusters inside `J`: `H = diag(5, 3, 3, 1.5, 0)`, `J = {1, 2, 3}`.
///
/// The cluster values are `2 ≥ γ_J = 1.5` apart, so the contour disks stay disjoint.
pub fn fixture_two_clusters() -> MatrixFixture {
    MatrixFixture {
        name: "two-clusters".into(),
        h: SymmetricMatrix::from_diag(&[5.0, 3.0, 3.0, 1.5, 0.0]).expect("diag"),
        direction: tridiagonal_direction(&[0.1, 0.15, 0.2, 0.1]),
        j_set: vec![1, 2, 3],
    }
}

/// A non-diagonal fixture: `H` is a seeded rotation of `diag(2, 1, 1, 0.2)`, `J = {2, 3}`.
pub fn fixture_rotated() -> MatrixFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let q = random_orthogonal(4, &mut rng);
    let h = conjugate_diag(&q, &[2.0, 1.0, 1.0, 0.2]);
    let e = random_symmetric_with(4, &mut rng);
    let norm = op_norm(&e).expect("finite");
    MatrixFixture {
        name: "rotated".into(),
        h,
        direction: e.scale(0.1 / norm).expect("finite"),
        j_set: vec![2, 3],
    }
}

/// The frozen fixture set shared by tests and examples.
pub fn all_fixtures() -> Vec<MatrixFixture> {
    vec![
        fixture_f1(),
        fixture_f2(),
        fixture_near_cluster(),
        fixture_two_clusters(),
        fixture_rotated(),
    ]
}

/// Symmetric matrix with upper-triangle entries uniform on `[-1, 1]`, drawn row by row.
pub fn random_symmetric(dim: usize, seed: u64) -> SymmetricMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_symmetric_with(dim, &mut rng)
}

pub fn random_symmetric_with<R: Rng>(dim: usize, rng: &mut R) -> SymmetricMatrix {
    let mut m = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let x: f64 = rng.random_range(-1.0..=1.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    SymmetricMatrix::new(m).expect("finite draws")
}

/// Orthogonal matrix: eigenvectors of a random symmetric matrix.
pub fn random_orthogonal<R: Rng>(dim: usize, rng: &mut R) -> Matrix {
    eigh(&random_symmetric_with(dim, rng))
        .expect("random symmetric converges")
        .eigenvectors
}

/// `Q diag(d) Qᵀ`.
pub fn conjugate_diag(q: &Matrix, d: &[f64]) -> SymmetricMatrix {
    let scaled = Matrix::from_fn(q.rows(), q.cols(), |i, j| q[(i, j)] * d[j]);
    SymmetricMatrix::new(scaled.matmul(&q.transpose())).expect("finite product")
}

/// Which condition a generated pair is scaled to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCondition {
    /// `‖Δ‖/γ_J < 1/4`.
    Outer,
    /// `‖Δ‖/γ_{J_j} < 1/4` for every cluster.
    PerCluster,
    /// `‖Δ‖/γ_J < 1/(4√K)`.
    Clustered,
}

/// A generated `(H, Δ, J)` triple.
#[derive(Debug, Clone)]
pub struct PerturbationCase {
    pub h: SymmetricMatrix,
    pub delta: SymmetricMatrix,
    pub j_set: Vec<usize>,
    /// Distinct eigenvalue levels of `H`, descending, with multiplicities.
    pub levels: Vec<(f64, usize)>,
}

impl PerturbationCase {
    pub fn h_hat(&self) -> SymmetricMatrix {
        self.h.add(&self.delta).expect("same dim")
    }
}

/// Seeded random `(H, Δ, J)` with `H = Q diag(λ) Qᵀ`.
///
/// Levels are at least `0.5`, spaced by at least `0.1`, with multiplicities 1 to 3. `J` is a
/// nonempty proper union of levels. `Δ` is a random symmetric direction scaled so that the
/// requested ratio lands uniformly in `(0, limit)`.
pub fn random_case(seed: u64, condition: PairCondition) -> PerturbationCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.random_range(4..=10usize);

    let mut mults = Vec::new();
    let mut left = dim;
    while left > 0 {
        let m = rng.random_range(1..=3usize).min(left);
        mults.push(m);
        left -= m;
    }
    let n_levels = mults.len();
    let values = loop {
        let mut v: Vec<f64> = (0..n_levels).map(|_| rng.random_range(0.5..5.0)).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        if v.windows(2).all(|w| w[0] - w[1] >= 0.1) {
            break v;
        }
    };

    let mut chosen: Vec<bool> = (0..n_levels).map(|_| rng.random_bool(0.4)).collect();
    if !chosen.iter().any(|&c| c) {
        let i = rng.random_range(0..n_levels);
        chosen[i] = true;
    }
    if chosen.iter().all(|&c| c) {
        let i = rng.random_range(0..n_levels);
        chosen[i] = false;
    }

    let mut eig = Vec::with_capacity(dim);
    let mut j_set = Vec::new();
    for (l, (&v, &m)) in values.iter().zip(&mults).enumerate() {
        for _ in 0..m {
            eig.push(v);
            if chosen[l] {
                j_set.push(eig.len());
            }
        }
    }

    let q = random_orthogonal(dim, &mut rng);
    let h = conjugate_diag(&q, &eig);

    let gap_outer = values
        .iter()
        .zip(&chosen)
        .filter(|(_, &c)| c)
        .flat_map(|(&a, _)| {
            values
                .iter()
                .zip(&chosen)
                .filter(|(_, &c)| !c)
                .map(move |(&b, _)| (a - b).abs())
        })
        .fold(f64::INFINITY, f64::min);
    let inner: Vec<f64> = values
        .iter()
        .zip(&chosen)
        .filter(|(_, &c)| c)
        .map(|(&a, _)| {
            values
                .iter()
                .filter(|&&b| b != a)
                .map(|&b| (a - b).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let k = chosen.iter().filter(|&&c| c).count() as f64;

    let (gap, limit) = match condition {
        PairCondition::Outer => (gap_outer, 0.25),
        PairCondition::PerCluster => (inner.iter().cloned().fold(f64::INFINITY, f64::min), 0.25),
        PairCondition::Clustered => (gap_outer, 0.25 / k.sqrt()),
    };
    let target = rng.random_range(0.005..0.995) * limit;

    let e = random_symmetric_with(dim, &mut rng);
    let norm = op_norm(&e).expect("finite");
    let delta = e.scale(target * gap / norm).expect("finite");

    PerturbationCase {
        h,
        delta,
        j_set,
        levels: values.into_iter().zip(mults).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_index_set;

    #[test]
    fn generated_cases_respect_their_condition() {
        for seed in 0..20 {
            for cond in [
                PairCondition::Outer,
                PairCondition::PerCluster,
                PairCondition::Clustered,
            ] {
                let c = random_case(seed, cond);
                let spec = eigh(&c.h).unwrap();
                let info = build_index_set(&spec, &c.j_set).unwrap();
                let norm = op_norm(&c.delta).unwrap();
                let ok = match cond {
                    PairCondition::Outer => norm / info.gamma_j < 0.25,
                    PairCondition::PerCluster => info.gamma_jj.iter().all(|g| norm / g < 0.25),
                    PairCondition::Clustered => {
                        norm / info.gamma_j < 0.25 / (info.k_clusters as f64).sqrt()
                    }
                };
                assert!(ok, "seed {seed} {cond:?}");
            }
        }
    }

    #[test]
    fn fixtures_round_trip_through_json() {
        for f in all_fixtures() {
            let s = serde_json::to_string(&f).unwrap();
            let back: MatrixFixture = serde_json::from_str(&s).unwrap();
            assert_eq!(back, f);
        }
    }
}
