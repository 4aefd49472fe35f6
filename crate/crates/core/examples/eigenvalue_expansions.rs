//! Eigenvalue shifts predicted to first order: per cluster when the clusters are well
//! separated, and summed over the index set when they are not.

use spectra::fixtures::{fixture_near_cluster, fixture_two_clusters};
use spectra::linalg::eigh;
use spectra::perturbation::{eigval_expansion_clustered, eigval_expansion_separated};
use spectra::spectral::build_index_set;

fn main() -> spectra::Result<()> {
    let fx = fixture_two_clusters();
    let spec = eigh(&fx.h)?;
    let info = build_index_set(&spec, &fx.j_set)?;
    let r = eigval_expansion_separated(&spec, &fx.perturbed(0.05)?, &info)?;
    println!("{} (separated)", fx.name);
    println!(
        "  predicted {:.6?}",
        r.predicted.as_vector().unwrap_or_default()
    );
    println!(
        "  actual    {:.6?}",
        r.actual.as_vector().unwrap_or_default()
    );
    println!("  remainder {:.3e} <= {:.3e}", r.remainder, r.bound);

    let fx = fixture_near_cluster();
    let spec = eigh(&fx.h)?;
    let info = build_index_set(&spec, &fx.j_set)?;
    let r = eigval_expansion_clustered(&spec, &fx.perturbed(0.3)?, &info)?;
    println!("{} (clustered, {} clusters)", fx.name, info.k_clusters);
    println!(
        "  sum shift predicted {:.6}, actual {:.6}, remainder {:.3e} <= {:.3e}",
        r.predicted.as_scalar().unwrap_or(f64::NAN),
        r.actual.as_scalar().unwrap_or(f64::NAN),
        r.remainder,
        r.bound
    );
    Ok(())
}
