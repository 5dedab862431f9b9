//! Diagnostics on approximate eigenpairs: the squared-operator test, the
//! verdict built on its convergence, and two physical cross-checks.

mod classify;
mod delta;
mod forbidden;
mod sumrule;

pub use classify::{
    classify, trend, Classification, ClassifyConfig, Trend, Verdict, DECREASE_RATIO, ISOLATION_FACTOR, TREND_WINDOW,
};
pub use delta::{delta_diagnostic, squared_operator_gap, DeltaRecord, EXACT_DELTA_FACTOR};
pub use forbidden::forbidden_fraction;
pub use sumrule::{position_matrix, trk_sum_rule, TRK_COMPLETE};
