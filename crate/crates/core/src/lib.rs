//! Certified exponential squeeze inequalities
//!
//! ```text
//! exp(-θ x²) < cos x   < exp(-x²/2)
//! exp(-θ x²) < x/tan x < exp(-x²/3)
//! ```
//!
//! on `(0, x0)`, worked entirely in the log domain with exact rational
//! arithmetic over the Bernoulli-number Taylor series of `-log cos x` and
//! `-log(x / tan x)`.

pub mod bernoulli;
pub mod certifier;
pub mod cli;
pub mod constants;
pub mod error;
pub mod kernel;
pub mod report;
pub mod series;
pub mod settings;

pub use bernoulli::Family;
pub use error::{Error, Result};
pub use kernel::{Enclosure, ExactRational, Sign};
pub use settings::Settings;
