//! First-order expansion of an eigenprojection under a growing perturbation.
//! The remainder shrinks quadratically until the gap condition breaks.

use spectra::fixtures::fixture_f2;
use spectra::linalg::eigh;
use spectra::perturbation::{canonical_expansion, projection_expansion};
use spectra::spectral::build_index_set;

fn main() -> spectra::Result<()> {
    let fx = fixture_f2();
    let spec = eigh(&fx.h)?;
    let info = build_index_set(&spec, &fx.j_set)?;
    println!("{}: J = {:?}, gap {:.3}", fx.name, info.j_set, info.gamma_j);
    println!(
        "{:>8} {:>8} {:>12} {:>12} {:>12}",
        "eps", "ratio", "remainder", "bound", "canonical"
    );
    for eps in [1e-3, 1e-2, 1e-1, 0.5, 2.0] {
        let h_hat = fx.perturbed(eps)?;
        let r = projection_expansion(&spec, &h_hat, &info)?;
        let c = canonical_expansion(&spec, &h_hat, &info)?;
        let flag = if r.condition_ok {
            ""
        } else {
            "  (condition fails)"
        };
        println!(
            "{eps:>8.0e} {:>8.4} {:>12.3e} {:>12.3e} {:>12.3e}{flag}",
            r.ratio, r.remainder, r.bound, c.remainder
        );
    }
    Ok(())
}
