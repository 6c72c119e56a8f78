//! Equilibrium analysis, mechanism design, and Monte Carlo simulation for
//! master-worker computations over untrusted (rational, possibly colluding)
//! workers.
//!
//! A master assigns a task to `n` workers, each of which either computes it
//! honestly or fabricates an answer. Workers may form colluding groups that
//! act as a single player. The master verifies the returned answers with some
//! probability and otherwise accepts the majority, rewarding workers under
//! one of three reward models. The crate provides:
//!
//! * [`payoff`] — the payoff parameters, reward models, game variants, and
//!   scenario validation shared by everything else;
//! * [`majority`] — exact majority-cheating probabilities over colluding
//!   groups (dynamic-programming convolution and binomial tails);
//! * [`games`] — closed-form equilibrium classification for the four game
//!   variants under each reward model;
//! * [`mechanism`] — scenario-driven designers that pick a game, reward
//!   model, and verification probability guaranteeing a unique all-honest
//!   equilibrium, plus the worker-facing certificate;
//! * [`sim`] — a seeded, reproducible Monte Carlo simulator of the master
//!   protocol, used to validate the analytical predictions;
//! * [`oracle`] — independent brute-force equilibrium enumeration used to
//!   cross-check the closed forms and certificate uniqueness claims;
//! * [`config`] — the JSON instance-configuration schema shared with the CLI.

pub mod config;
pub mod error;
pub mod games;
pub mod majority;
pub mod mechanism;
pub mod oracle;
pub mod payoff;
pub mod sim;

pub use error::{Error, Result};

/// Absolute tolerance for equality predicates in equilibrium conditions
/// (for example `MC_V = 0` or `WC_T = WB_A + WP_C`).
pub const EQ_TOL: f64 = 1e-9;

/// Default additive margin applied to strict inequalities on probabilities.
pub const DEFAULT_MARGIN: f64 = 1e-3;
