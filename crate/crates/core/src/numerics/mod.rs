//! Special functions, root finding, quadrature and Gaussian fitting.

pub mod erf;
pub mod fit;
pub mod quad;
pub mod root;

pub use erf::{erf, erf_diff, erf_span, erf_taylor, erfc};
pub use fit::{fit_gaussian, FitResult};
pub use quad::integrate;
pub use root::{find_root, Bracket};
