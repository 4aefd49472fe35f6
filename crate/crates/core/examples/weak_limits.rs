//! Gaussian limits of rescaled eigenvalue fluctuations compared with simulated ones
//! through Kolmogorov-Smirnov distances.

use spectra::kernel::{KernelKind, KernelModel, KernelSpec};
use spectra::montecarlo::{gaussian_limit_sampler, run_limit_study, McConfig};

fn main() -> spectra::Result<()> {
    let lambdas = vec![1.0, 0.5, 0.5, 0.25];
    let model = KernelModel::finite_rank(&lambdas)?;
    let info = model.index_set(&[2, 3])?;
    let draws = gaussian_limit_sampler(&model, &info, 20_000, 1)?;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    println!(
        "limit of the summed shift: variance {:.4}",
        draws.sum_variance
    );
    println!(
        "ordered components: means {:.4} {:.4}",
        mean(&draws.component(0)),
        mean(&draws.component(1))
    );

    let kernel = KernelSpec {
        kind: KernelKind::FiniteRank,
        lambdas: Some(lambdas),
        rank: None,
    };
    let mut cfg = McConfig::new(kernel, 2000, 300, 11, vec![2, 3]);
    cfg.functions = vec![vec![0.0, 1.0], vec![0.0, 0.0, 1.0]];
    let r = run_limit_study(&cfg)?;
    for (name, ks) in &r.summary.ks {
        println!("KS {name}: {ks:.4}");
    }
    Ok(())
}
