//! Certified bounds for the Gromov width of complex Grassmannians and smooth
//! toric manifolds, plus a numerical engine that builds the ball embeddings
//! realizing the lower bounds.
//!
//! The library has three layers:
//!
//! * **Combinatorics** ([`partition`], [`schubert`]): quantum Schubert
//!   calculus on Gr(k,n). Littlewood-Richardson coefficients by tableau
//!   counting, quantum products by rim-hook reduction, genus-zero three-point
//!   Gromov-Witten invariants.
//! * **Certificates** ([`certificates`], [`toric`]): exact rational upper and
//!   lower bounds. A nonzero invariant through a class of positive symplectic
//!   area caps the width from above; a torus action with all weights one, or a
//!   unimodular simplex sitting inside a moment polytope, bounds it from
//!   below.
//! * **Geometry** ([`grassmann`], [`moser`]): floating-point models of the
//!   standard symplectic form on a Grassmannian coordinate chart, circle-action
//!   moment maps, and a Moser-flow engine producing explicit symplectic ball
//!   embeddings with verifiable pullback residuals.
//!
//! Normalization: the symplectic form is scaled so that its cohomology class
//! is the integral generator, i.e. every line has area one. Under this
//! convention the Gromov width of Gr(k,n) equals one, and a ball of capacity
//! c has radius sqrt(c/pi).

pub mod certificates;
pub mod grassmann;
pub mod moser;
pub mod numeric;
pub mod partition;
pub mod rational;
pub mod report;
pub mod schubert;
pub mod selftest;
pub mod toric;

pub use certificates::{
    dimension_condition, grassmannian_width_certificate, lower_bound_all_weights_one,
    upper_bound_from_invariant, CertificateError, IndecomposabilityCheck, MonotonicityCheck,
    WidthCertificate,
};
pub use grassmann::{
    act_on_chart, coordinate_line_area, isotropy_weights, moment_map_circle, symplectic_form_at,
    verify_moment_equation, CircleActionSpec, FixedPointLabel, GraphChartPoint, GrassmannError,
};
pub use moser::{
    construct_embedding, euler_flow, lift_euler, radial_primitive, verify_pullback, ChartForm,
    Embedding, InnerNormalization, IntegrationGrid, MoserError,
};
pub use partition::{BoxContext, Partition, PartitionError};
pub use report::{Check, Report};
pub use selftest::run_selftest;
pub use schubert::{gw_invariant_3pt, lr_coefficient, quantum_product, QuantumProduct, SchubertError};
pub use toric::{
    centered_region, toric_lower_bound, validate_delzant, vertex_capacity,
    CenteredRegionDescription, DelzantPolytope, DelzantReport, DelzantViolation, Facet,
    FaceDescription, ToricError, VertexData,
};
