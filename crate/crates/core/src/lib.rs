pub mod error;
pub mod rng;
pub mod stats;
pub mod wasserstein;

pub use error::{Error, Result};
pub mod builders;
pub mod experiments;
pub mod manifold;
pub mod quad;
pub mod relu_net;
pub mod starshape;
pub mod transport;

pub(crate) use manifold::norm as manifold_norm;
