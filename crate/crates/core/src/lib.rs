//! Beamwidth selection for phased arrays receiving a clustered mmWave
//! channel.
//!
//! A uniform linear array trades gain against angular coverage: a narrower
//! beam has more gain but collects less of a spread cluster, and a beam
//! pointed off the cluster centre collects less still. This crate models
//! that trade-off for Gaussian power-angle spectra (the 802.11ad cluster
//! model, or a Gaussian fitted to a ray-traced profile) and finds the
//! beamwidth, and array size, that maximises received power.
//!
//! ```
//! use mmwave_beamwidth::cluster::GaussianCluster;
//! use mmwave_beamwidth::optimizer::percentile_plan;
//!
//! let cluster = GaussianCluster::conference_room(1.0, 53.0)?;
//! let plan = percentile_plan(&cluster, 53.0, 0.95)?;
//! assert_eq!(plan.n_elements, 23);
//! # Ok::<(), mmwave_beamwidth::Error>(())
//! ```

pub mod antenna;
pub mod cli;
pub mod cluster;
pub mod error;
pub mod numerics;
pub mod optimizer;

pub use error::{Error, Result};
