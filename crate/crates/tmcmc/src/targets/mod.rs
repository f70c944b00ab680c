//! Log-density evaluators for the bundled experiments.

mod challenger;
mod circular;
mod gaussian;
mod geo;

pub use challenger::{
    challenger_log_posterior, fit_challenger_mle, ChallengerPosterior, MleFit, CHALLENGER_DATA,
    CHALLENGER_RIDGE_SCALES,
};
pub use circular::{circular_log_z, circular_unnorm_log_f, wrap_angle, CircularSample};
pub use gaussian::StdGaussian;
pub use geo::{
    make_synthetic_geo_data, GeoPoissonData, GeoPoissonPosterior, GeoPoissonState, GeoTrueParams,
};
