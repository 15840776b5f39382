//! Complex special functions: q-products, theta, Gamma, Barnes multiple Gamma,
//! double sine and the basic hypergeometric series.

mod elem;
mod gamma;
mod multigamma;
mod qhyper;
mod qpoch;
pub(crate) mod quad;
mod dsine;
pub mod laws;
mod theta;

pub use dsine::{double_sine, log_double_sine};
pub use elem::{cot, expm1, ln1p, sin_shift_ratio};
pub use gamma::{cgamma, ln_gamma, ln_gamma_balanced};
pub use multigamma::{gamma1, gamma2, ln_gamma1, ln_gamma1_balanced, ln_gamma2, ln_multi_gamma};
pub use qhyper::qhyper_2phi1;
pub use qpoch::{ln_qpoch, qpoch_finite, qpoch_multi};
pub use theta::{ln_theta, theta, theta_quotient};

use serde::{Deserialize, Serialize};

/// Truncation control for infinite products and series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    pub term_tolerance: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            max_terms: 10_000,
            term_tolerance: 1e-15,
        }
    }
}

impl TruncationPolicy {
    pub fn new(max_terms: usize, term_tolerance: f64) -> crate::Result<Self> {
        if max_terms == 0 || !(term_tolerance > 0.0) {
            return crate::error::domain("truncation policy needs max_terms >= 1 and term_tolerance > 0");
        }
        Ok(Self {
            max_terms,
            term_tolerance,
        })
    }
}
