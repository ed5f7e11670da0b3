//! Bound calculators, concentration checks and exact verifiers for the
//! walker-based allocation schemes.

mod bounds;
mod concentration;
mod poly;
mod profiles;
mod stats;
mod verify;

pub use bounds::{
    lowgirth_published_closed_form, theory_bounds_lowgirth, theory_bounds_scheme1, theory_bounds_scheme2,
    theory_bounds_scheme3, Applicability, FailureTerm, TheoryInputs, TheoryReport,
};
pub use concentration::{
    bernstein_corollary_bound, empirical_tail_check, AdaptedProcess, ConcentrationSpec, IidBernoulli,
    MarkovBernoulli, TailCheck, TailRow,
};
pub use poly::{default_lambda_tilde, exact_mu, exact_mu_series, mu_analytic, mu_eigen, psi, qt_eval};
pub use profiles::{profiles, Profiles};
pub use stats::{chi_square_homogeneity, Homogeneity};
pub use verify::{
    estimate_assumption1, first_reset_time, mixing_certificate, return_prob_check, wilson_interval,
    Assumption1Estimate, MixingCertificate, ReturnGap, ReturnStatus, ReturnVerdict,
};
