//! Exact measurement of decoder parameters and checks of the supporting lemmas.

mod chernoff;
mod lemmas;
mod measure;
mod report;

pub use chernoff::{chernoff_exact, ChernoffModel};
pub use lemmas::{fooling_probability, light_corruption_prob, nonsmoothable_entries, ns_mass};
pub use measure::{
    measure, measure_at_fraction, measure_completeness, measure_ldc_error, measure_rldc_soundness, radius_of,
    radius_sweep, witness_value, SweepConfig, DEFAULT_EVAL_BUDGET, WORKERS_ENV,
};
pub use report::{sweep_csv, Adversary, Mode, RadiusConversion, SweepRow, VerificationReport, Witness};
