//! Index sets, clusters and gaps, and the compression `f ↦ Σ_{k∈J} f(λ_k) P_k`
//! checked against its contour-integral representation.

use spectra::fixtures::fixture_two_clusters;
use spectra::linalg::eigh;
use spectra::spectral::{
    build_index_set, compress, contour_compress, eigenprojection, HoloFunction,
};

fn main() -> spectra::Result<()> {
    let fx = fixture_two_clusters();
    let spec = eigh(&fx.h)?;
    let info = build_index_set(&spec, &fx.j_set)?;
    println!("J = {:?}", info.j_set);
    println!("clusters {:?} at {:?}", info.clusters, info.thetas);
    println!(
        "outer gap {:.3}, per-cluster gaps {:?}",
        info.gamma_j, info.gamma_jj
    );

    let p = eigenprojection(&spec, &info);
    println!("trace of the projection: {:.12}", p.matrix().trace());

    for f in [
        HoloFunction::Identity,
        HoloFunction::Exp,
        HoloFunction::Power(3),
    ] {
        let exact = compress(&spec, &f, &info);
        let quad = contour_compress(&spec, &f, &info, 256)?;
        let gap = quad.matrix().sub(exact.matrix()).fro_norm();
        println!("{f:?}: contour vs spectral {gap:.2e}");
    }
    Ok(())
}
