//! Built-in operator fields, the slow-closing set family, parameter spaces and
//! the polynomial samples used for Hölder constants.

mod counterexample;
mod fields;
mod params;
mod sampling;

pub use counterexample::{counterexample_family, CounterexampleConfig, CounterexampleFamily, PlacedGap, RESOLUTION};
pub use fields::{
    almost_mathieu, almost_mathieu_hull, field_bound, kohmoto, substitution_field, OperatorField, SubstitutionWord,
};
pub(crate) use fields::at_param;
pub use params::{convergents, log_dist, Irrational, Metric, Param, ParameterSpace, Rational};
pub use sampling::{ball_probes, edge_probes, sample_p2, DEFAULT_PER_AXIS};
