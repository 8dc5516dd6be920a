//! Objects of the smooth-number counterexample: the normalized indicator
//! `f_T` of a smooth block, averaging operators `S_n` and their orbits,
//! covering numbers, weight families and the Gaussian randomization
//! `F_{J,f}`.

mod experiment;
mod gaussian;
mod orbit;
mod weights;

pub use experiment::{
    theorem1_experiment, Cardinalities, EntropyEntry, ExperimentConfig, Theorem1Bundle,
    WeightDiagnostics,
};
pub use gaussian::{gaussian_norm_expectation, GaussianNormReport, MonteCarlo, MonteCarloConfig};
pub use orbit::{
    average_operator, average_operator_exact, build_ft, entropy_number, ft_norm_sq_exact,
    orbit_distances, EntropyResult, OrbitSet, EXACT_COVER_LIMIT,
};
pub use weights::{check_weight_properties, WeightDescriptor, WeightFamily, WeightReport};
