//! Contact triples: compatible metric, complements, torsion and integrability.

mod complement;
mod local;
mod metric;
mod triple;

pub use complement::{
    adapt, adapted_complement, adapted_complement_extended, dual_complement_extended, frame_complex, dual_complement, integrability_residual, predicted_conformal_complement,
    shift_matrix, vertical_torsion, ComplementKind, FramePack, IntegrabilityResidual, PipelineOptions,
    TorsionElement, ANALYTIC_THRESHOLD, FD_THRESHOLD,
};
pub use local::{horizontal_basis, local_structure, validate_qc, GramReport, HorizontalBasis, LocalStructure};
pub use metric::{gram, metric_from_triple, wedge, CompatiblePack};
pub use triple::ContactTriple;
