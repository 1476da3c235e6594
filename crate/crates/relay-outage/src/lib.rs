//! Outage probability of dual-hop amplify-and-forward relay links where one
//! terminal carries an antenna array and the relay sees a single dominant
//! co-channel interferer plus noise.
//!
//! Three antenna placements (source, destination, relay) under fixed-gain
//! and variable-gain relaying are covered by:
//!
//! * exact outage — closed Bessel-kernel forms where they exist, a single
//!   semi-infinite integral where they do not ([`analytic`]);
//! * closed-form lower bounds for the variable-gain designs;
//! * high-SNR approximations exposing the diversity order and array gain;
//! * a seedable vector-level Monte Carlo channel simulator ([`model`],
//!   [`montecarlo`]) that cross-validates every formula.
//!
//! Powers are normalized to unit noise and unit channel variances, so a
//! configuration is just (topology, scheme, N, rho1, rho2, rho_i, gamma_th)
//! in linear units; see [`model::SystemConfig`].

pub mod analytic;
pub mod model;
pub mod montecarlo;
pub mod quadrature;
pub mod specfun;
