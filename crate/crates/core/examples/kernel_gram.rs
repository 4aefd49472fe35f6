//! Gram matrix of the Brownian-motion kernel on uniform points: its scaled eigenvalues
//! approach the operator spectrum and Nyström extends eigenvectors to functions.

use spectra::kernel::{gram, nystrom, KernelModel, SampleSet};

fn main() -> spectra::Result<()> {
    let model = KernelModel::brownian();
    for n in [50, 200, 800] {
        let s = SampleSet::draw(n, 1, 0)?;
        let g = gram(&model, &s)?;
        let errs: Vec<String> = (1..=3)
            .map(|k| format!("{:+.2e}", g.eigenvalues[k - 1] - model.lambda(k)))
            .collect();
        println!("n = {n:>3}: first eigenvalue errors {}", errs.join(" "));
    }

    let s = SampleSet::draw(400, 2, 0)?;
    let g = gram(&model, &s)?;
    let psi = nystrom(&model, &s, &g, 1)?;
    let sign = psi.eval(0.5).signum();
    println!("x     nystrom   population");
    for x in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let v = sign * psi.eval(x) / psi.lambda_hat.sqrt();
        println!("{x:.1}  {v:+.5}  {:+.5}", model.eigenfunction(1, x));
    }
    Ok(())
}
