//! First-order expansions of eigenprojections and eigenvalues with explicit remainder bounds.

mod expansion;
mod overlap;
mod report;

pub use expansion::{
    a_hat, canonical_expansion, eigval_expansion_clustered, eigval_expansion_separated,
    projection_expansion, s_hat,
};
pub use overlap::{
    congruence_shift, gram_compression, orthogonality_defect, overlap, CongruenceShift,
    OverlapMatrix,
};
pub use report::{ExpansionReport, Quantity, Regime};

use crate::error::Result;
use crate::linalg::{eigh, SymmetricMatrix};
use crate::spectral::build_index_set;

/// All four expansion reports for `H`, `Ĥ` and a 1-based index set.
pub fn expand_all(
    h: &SymmetricMatrix,
    h_hat: &SymmetricMatrix,
    j: &[usize],
) -> Result<Vec<ExpansionReport>> {
    let spec = eigh(h)?;
    let info = build_index_set(&spec, j)?;
    Ok(vec![
        projection_expansion(&spec, h_hat, &info)?,
        canonical_expansion(&spec, h_hat, &info)?,
        eigval_expansion_separated(&spec, h_hat, &info)?,
        eigval_expansion_clustered(&spec, h_hat, &info)?,
    ])
}
