//! Numerical laboratory for the non-centered fractional maximal operator
//! `M_beta f(x) = sup_{B ∋ x} r^beta ⨍_B |f|` of radial functions on `R^n`.
//!
//! The crate finds best balls, classifies them, evaluates the derivative of
//! the maximal function through two independent channels, checks the
//! integral identities and estimates satisfied by best balls, and reports
//! the ratio `||D M_beta f||_q / ||Df||_1`.

pub mod averages;
pub mod best_ball;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod identities;
pub mod maximal;
pub mod optimize;
pub mod oracles;
pub mod params;
pub mod profile;
pub mod quadrature;
pub mod variation;

pub use best_ball::{BestBallResult, Region, SearchConfig};
pub use error::{Error, Result};
pub use geometry::{AxisBall, Contact, ContactKind};
pub use params::AmbientParams;
pub use profile::{load_profile, RadialProfile};
pub use quadrature::QuadratureConfig;
