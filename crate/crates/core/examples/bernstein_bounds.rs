//! Concentration radius of the empirical operator and the eigenvalue bounds it implies,
//! for a finite-rank kernel across sample sizes.

use spectra::kernel::{
    bernstein_constants, bernstein_radius, clustered_eigen_bound, separated_eigen_bound, xi_bound,
    KernelModel,
};

fn main() -> spectra::Result<()> {
    let model = KernelModel::finite_rank(&[1.0, 0.5, 0.5, 0.25])?;
    let c = bernstein_constants(&model)?;
    println!("kappa {} r {} sigma {} d {}", c.kappa, c.r, c.sigma, c.d);
    let info = model.index_set(&[2, 3])?;
    let m_f = 2f64.sqrt();
    for n in [1_000, 10_000, 100_000, 1_000_000] {
        let radius = bernstein_radius(&c, n, 0.1)?;
        let xi = match xi_bound(&info, m_f, &c, n, 0.1) {
            Ok(v) => format!("{v:.3e}"),
            Err(e) => format!("n/a ({e})"),
        };
        println!(
            "n {n:>8}: radius {radius:.4e}  separated {:.3e}  clustered {:.3e}  xi {xi}",
            separated_eigen_bound(&info, radius),
            clustered_eigen_bound(&info, radius)
        );
    }
    Ok(())
}
