//! Dense complex matrices over labeled qubit registers.

mod density;
mod eigen;
pub mod json;
mod matrix;

pub use density::{
    partial_trace, tensor, validate_density, DensityMatrix, SystemLabel, ValidationReport,
    HERMITIAN_TOL, MAX_QUBITS, PSD_TOL, TRACE_TOL,
};
pub use eigen::{eig_hermitian, eigvals_hermitian, HermitianEigen};
pub use json::DensityFile;
pub use matrix::{ComplexMatrix, C64};

pub(crate) use matrix::{dephase_positions, embed_operator, partial_trace_positions};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::random_density;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn partial_trace_composes(seed in any::<u64>(), rank in 1usize..=8) {
            let rho = random_density(3, rank, seed).unwrap();
            let stepwise = rho.trace_out(&["A"]).unwrap().trace_out(&["B"]).unwrap();
            let direct = rho.partial_trace(&["C"]).unwrap();
            prop_assert!(stepwise.matrix().max_abs_diff(direct.matrix()) <= 1e-10);
        }

        #[test]
        fn tensor_partial_trace_round_trip(s1 in any::<u64>(), s2 in any::<u64>()) {
            let a = random_density(1, 2, s1).unwrap();
            let b = random_density(2, 3, s2).unwrap();
            let b = DensityMatrix::new(b.matrix().clone(), SystemLabel::new(["X", "Y"]).unwrap()).unwrap();
            let ab = a.tensor(&b).unwrap();
            prop_assert!((ab.matrix().trace().re - 1.0).abs() <= 1e-10);
            let back = ab.partial_trace(a.labels().names()).unwrap();
            prop_assert!(back.matrix().max_abs_diff(a.matrix()) <= 1e-10);
        }

        #[test]
        fn density_spectrum_sums_to_one(seed in any::<u64>(), n in 1usize..=3) {
            let rho = random_density(n, 1 << n, seed).unwrap();
            let e = eig_hermitian(rho.matrix()).unwrap();
            prop_assert!((e.values.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
    }
}
