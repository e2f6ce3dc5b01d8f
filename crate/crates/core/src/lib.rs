//! Exact colored Jones polynomials of pretzel knots with three negative twist
//! regions, computed by fusion, and the head / 1-head / 2-head stabilization
//! machinery built on top of them.

pub mod closedform;
pub mod cyclo;
pub mod error;
pub mod exec;
pub mod laurent;
pub mod qcalc;
pub mod rational;
pub mod series;
pub mod stability;
pub mod statesum;
pub mod tloracle;

pub use error::{Error, Result};
pub use laurent::{canonicalize, CanonicalSeries, FactoredScalar, LaurentPoly};
pub use rational::RationalFn;
pub use statesum::PretzelSpec;
pub use series::{QSeries, TopSeries};
