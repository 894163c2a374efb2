#![no_main]

use gaussmeas::schemes::simon_separability;
use gaussmeas::{apply_symplectic, canonical_interaction, GaussianState, Interaction};
use libfuzzer_sys::fuzz_target;
use nalgebra::DMatrix;

// First byte picks the mode count (1 or 2); the rest are little-endian f64s
// filling the mean and then the covariance row by row.
fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else {
        return;
    };
    let modes = 1 + (head as usize & 1);
    let dim = 2 * modes;
    let vals: Vec<f64> = rest
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if vals.len() < dim + dim * dim {
        return;
    }
    let mean = vals[..dim].to_vec();
    let cov = DMatrix::from_row_slice(dim, dim, &vals[dim..dim + dim * dim]);
    let Ok(state) = GaussianState::from_parts(mean, cov) else {
        return;
    };
    let nu = state.cov().symplectic_eigenvalues();
    assert!(nu[0] >= 0.5 - 1e-6, "accepted unphysical state: {nu:?}");
    if modes == 2 {
        let _ = simon_separability(state.cov());
        if let Ok((_, s)) = canonical_interaction(Interaction::SequentialQ) {
            let _ = apply_symplectic(&state, &s);
        }
    }
});
