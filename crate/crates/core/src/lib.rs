//! Link-level simulation of a UAV-mounted reconfigurable intelligent surface
//! (RIS) relaying a base-station to IoT OFDM downlink.
//!
//! * [`channel`] synthesizes the LoS cascade through the surface and the
//!   NLoS multipath direct link, and moves them to the subcarrier domain.
//! * [`ofdm`] turns a composite channel into per-subcarrier SNR and rate.
//! * [`optimizer`] configures the surface phases by semidefinite relaxation
//!   with Gaussian randomization, and provides the reference configurations.
//! * [`harness`] runs seeded Monte-Carlo sweeps and writes CSV results.

pub mod channel;
pub mod error;
pub mod harness;
pub mod ofdm;
pub mod optimizer;

pub use error::{Error, Result};
