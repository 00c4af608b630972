// The kernel of ρ ↦ (tr₁ρ, …, trₙρ) on Hermitian matrices, computed by row
// reduction, is exactly the span of full-weight Pauli words.
//
//     cargo run --example kernel

use rdm_determined::compat::{
    fullweight_basis, orthonormalize, partial_trace_kernel, subspace_residual,
};

fn main() -> rdm_determined::Result<()> {
    for n in 2..=3 {
        let kernel = partial_trace_kernel(n)?;
        let words = fullweight_basis(n)?.normalized_matrices();
        let k = orthonormalize(&kernel);
        let w = orthonormalize(&words);
        let there = subspace_residual(&words, &k);
        let back = subspace_residual(&kernel, &w);
        println!(
            "n = {n}: kernel dim {}, 3^n = {}, residuals {there:.1e} / {back:.1e}",
            k.len(),
            words.len()
        );
        assert_eq!(k.len(), 3usize.pow(n as u32));
        assert!(there < 1e-10 && back < 1e-10);
    }
    Ok(())
}
