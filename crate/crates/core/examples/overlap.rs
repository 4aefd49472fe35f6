//! The overlap matrix between old and new eigenvectors of an index set is nearly
//! orthogonal, so congruence by it barely moves traces and spectra.

use spectra::fixtures::{fixture_f2, random_symmetric};
use spectra::linalg::eigh;
use spectra::perturbation::{congruence_shift, overlap};
use spectra::spectral::build_index_set;

fn main() -> spectra::Result<()> {
    let fx = fixture_f2();
    let spec = eigh(&fx.h)?;
    let info = build_index_set(&spec, &fx.j_set)?;
    for eps in [1e-2, 1e-1, 0.3] {
        let o = overlap(&spec, &eigh(&fx.perturbed(eps)?)?, &info)?;
        println!(
            "eps {eps:<5} defect {:.3e}  bound {:.3e}  ok {}",
            o.defect, o.bound, o.condition_ok
        );
    }

    let o = overlap(&spec, &eigh(&fx.perturbed(0.1)?)?, &info)?;
    let a = o.matrix();
    let u = random_symmetric(a.rows(), 5);
    let s = congruence_shift(&a, u.matrix())?;
    println!(
        "congruence: trace moves {:.3e}, spectrum moves {:.3e}, bound {:.3e}",
        s.trace_diff,
        s.spectrum_diff.unwrap_or(f64::NAN),
        s.bound
    );
    Ok(())
}
