//! Fourier coefficient models `(a_k)`, series coefficients `(c_k)`, and the
//! Weyl-factor functionals built from them.

mod criteria;
mod model;
mod parse;
mod weyl;

pub use criteria::{
    compute_psi_h, corollary1_condition_check, koksma_sum, loglog_weight, necessity_bound_check,
    regular_variation_estimate, sigma_tilde, theorem2_condition_sum, Checkpoint, Cor1Condition,
    Cor1Verdict, CriterionSum, EpsRule, KoksmaWeight, NecessityCheck, PhiDescriptor, PsiTable,
    RegularVariation,
};
pub use model::{
    CoeffModel, CoeffsDescriptor, Cor3Form, CustomRule, ModelDescriptor, SeriesCoefficients,
};
pub use parse::{parse_model_spec, ModelSpec};
pub(crate) use weyl::scale_power;
pub use weyl::{build_weyl_table, compute_g, Certified, WeylTable, DEFAULT_TOL, MAX_TERMS};
