//! Jacobi eigen-decomposition of a random symmetric matrix, and how far a perturbation
//! moves the spectrum compared with the norms that bound the move.

use spectra::fixtures::random_symmetric;
use spectra::linalg::{eigh, op_norm, spectral_distance};

fn main() -> spectra::Result<()> {
    let a = random_symmetric(6, 42);
    let spec = eigh(&a)?;
    println!("eigenvalues (non-increasing): {:.6?}", spec.eigenvalues);

    let err = spec.reconstruct().sub(&a)?;
    println!("reconstruction error: {:.2e}", op_norm(&err)?);

    let b = a.add(&random_symmetric(6, 43).scale(1e-2)?)?;
    let d = spectral_distance(&a, &b)?;
    // Weyl: max shift <= op norm; Hoffman-Wielandt: l2 shift <= Frobenius norm.
    println!(
        "max shift {:.3e} <= op {:.3e}",
        d.max_eig_diff, d.op_norm_diff
    );
    println!(
        "l2 shift  {:.3e} <= fro {:.3e}",
        d.l2_eig_diff, d.fro_norm_diff
    );
    Ok(())
}
