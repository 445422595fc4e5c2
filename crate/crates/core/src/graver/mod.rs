pub mod lift;
pub mod nucleus;
pub mod oracle;
pub mod pipeline;
pub mod sample;

pub use lift::{lift_cone, lift_ghost, lift_lambda2, lift_lambda3_over_ghost};
pub use nucleus::{graver_disjoint_nucleus, graver_dual_nucleus};
pub use oracle::{find_non_unit_graver_vector, graver_oracle, graver_oracle_with, OracleConfig};
pub use pipeline::graver_for_unimodular_pair;
pub use sample::{is_graver_circuit, sample_graver};
