//! Encoding integer polynomials as quantum systems of linear forms.
//!
//! [`systems`] builds the pinpointing systems `L`, `M` and the per-coordinate
//! `V_j`, `E_j`, `T_j`; [`bundle`] assembles `ψ(q*)`; [`graph`] holds the
//! directed Cayley graphs `U_j(g)` whose edge and triangle densities the
//! systems encode; [`witness`] and [`pinpoint`] verify the construction on
//! explicit groups.

pub mod bundle;
pub mod graph;
pub mod pinpoint;
pub mod sampling;
pub mod systems;
pub mod witness;

pub use bundle::{build_psi, eval_reduction, eval_reduction_shared_g, ReductionBundle, SharedGValue};
pub use graph::{
    compute_b_c, compute_b_c_with, verify_homdensity_identity, verify_homdensity_identity_with,
    DirectedCayleyGraph, GraphDensities, HomDensityReport,
};
pub use sampling::{random_half_subset, verify_homdensity_random, HomDensitySweep};
pub use pinpoint::{verify_pinpoint, PinpointReport, DEFAULT_PINPOINT_MAX_K};
pub use systems::{
    build_e, build_l, build_l_sub, build_m, build_t, build_v, layout_names, ReductionSystems,
};
pub use witness::{build_witness, verify_witness, WitnessClass, WitnessEntry, WitnessReport, WitnessSpec};
