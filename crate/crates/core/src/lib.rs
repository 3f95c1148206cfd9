//! Assisted coherence distillation for multi-qubit states.
//!
//! An auxiliary qubit is measured projectively and the remaining subsystems keep, on
//! average, the relative entropy of coherence of their residual states. Maximizing that
//! average over the auxiliary basis gives the coordinately assisted distillable
//! coherence `C_CoP`. This crate evaluates it by a global grid scan with pattern-search
//! refinement, builds the distribution core `τ = C^{A|BC} − C^{A|B} − C^{A|C}` on top,
//! and provides the correlation measures (concurrence, `Δ_SEF`, three-tangle,
//! genuine tripartite discord) used to interpret `τ` on W-type and GHZ-type families.
//!
//! Modules, bottom up:
//!
//! - [`densmat`]: dense complex matrices, labeled registers, partial trace, Jacobi eigensolver.
//! - [`coherence`]: von Neumann entropy, dephasing, `C_r`, `l₁` coherence, QI relative entropy.
//! - [`measure`]: single-qubit projective bases and residual ensembles.
//! - [`distill`]: `C_CoP`, `τ`, the shared-measurement objective and the N-party check.
//! - [`states`]: W/GHZ families, the two generating channels, seeded random densities.
//! - [`correlations`]: multipartite correlation measures.
//!
//! ```
//! use cohdistill_core::distill::tau;
//! use cohdistill_core::states::make_family;
//! use cohdistill_core::{Family, FamilyParam, OptimizerConfig};
//!
//! let psi = make_family(&FamilyParam::new(Family::WType, 0.5))?;
//! let report = tau(&psi, "A", "B", "C", &OptimizerConfig::default())?;
//! assert!((report.tau - 0.8485).abs() < 1e-4);
//! # Ok::<(), cohdistill_core::Error>(())
//! ```

#![forbid(unsafe_code)]

pub mod coherence;
pub mod correlations;
pub mod densmat;
pub mod distill;
mod error;
pub mod measure;
pub mod optimize;
pub mod states;

pub use densmat::{ComplexMatrix, DensityMatrix, SystemLabel, ValidationReport, C64};
pub use distill::{DistillReport, InequalityReport, OptimizerConfig, TauReport};
pub use error::{Error, Result};
pub use measure::{MeasurementEnsemble, ProjectiveBasis};
pub use states::{ChannelKind, ChannelSpec, Family, FamilyParam};
