//! Seeded Monte Carlo coverage of the eigenvalue and projection expansions for the
//! empirical kernel operator, with a sample-size sweep.

use spectra::kernel::{KernelKind, KernelSpec};
use spectra::montecarlo::{
    run_eigenvalue_study, run_projection_study, run_sweep, McConfig, StudyKind,
};

fn main() -> spectra::Result<()> {
    let kernel = KernelSpec {
        kind: KernelKind::FiniteRank,
        lambdas: Some(vec![1.0, 0.5, 0.5, 0.25]),
        rank: None,
    };
    let mut cfg = McConfig::new(kernel, 1000, 200, 7, vec![2, 3]);
    cfg.cluster_rank = Some(2);

    let eig = run_eigenvalue_study(&cfg)?;
    println!(
        "eigenvalue coverage by regime: {:?}",
        eig.summary.coverage_by_regime
    );
    println!("index-set error rate: {:?}", eig.summary.alpha_hat);

    cfg.functions = vec![vec![0.0, 1.0], vec![0.0, 0.0, 1.0]];
    let proj = run_projection_study(&cfg)?;
    println!(
        "projection coverage {:?}, median residual {:.3e}",
        proj.summary.coverage, proj.summary.median_residual
    );

    let sweep = run_sweep(&cfg, StudyKind::Projection, &[250, 1000, 4000])?;
    println!(
        "n {:?}: residual slope {:.3}",
        sweep.ns(),
        sweep.slopes["median_residual"]
    );
    Ok(())
}
