//! Weibull Birnbaum–Saunders (WBS) lifetime distribution.
//!
//! The crate covers exact evaluation of the four-parameter WBS law and its
//! Birnbaum–Saunders baseline, inverse-transform sampling, truncated mixture
//! series, quadrature-based moments and reliability measures, maximum
//! likelihood fitting with analytic score, and goodness-of-fit comparison
//! against seven related BS-family models.
//!
//! ```
//! use wbs_core::{WbsParams, Sample, mle};
//!
//! let p = WbsParams::new(0.8152, 22.9053, 0.1115, 0.2683).unwrap();
//! assert!((p.cdf(22.9053).unwrap() - (1.0 - (-0.1115f64).exp())).abs() < 1e-12);
//!
//! let data = Sample::new(wbs_core::datasets::MEEKER_ESCOBAR.to_vec()).unwrap();
//! let ll = mle::loglik(&data, &p);
//! assert!((-2.0 * ll - 352.8431).abs() < 0.05);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

pub mod bs;
pub mod competitors;
pub mod datasets;
pub mod error;
pub mod gof;
pub mod mle;
pub mod optim;
pub mod quad;
pub mod rng;
pub mod sample;
pub mod series;
pub mod specfun;
pub mod wbs;

pub use bs::BsParams;
pub use competitors::{Family, ModelFit, ModelSpec};
pub use error::{Error, Result};
pub use gof::{GofReport, TttCurve};
pub use mle::{FitOptions, FitResult};
pub use rng::{CounterRng, RngSeed};
pub use sample::Sample;
pub use series::{EbsParams, SeriesTruncation};
pub use wbs::WbsParams;
