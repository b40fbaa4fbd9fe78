//! Attention and opinion dynamics of individuals in a social network.
//!
//! Attention decays exponentially and spikes on each information arrival;
//! opinion relaxes onto the folded steady-state surface of a cubic (a cusp
//! catastrophe). The polarization number `P = τ/N²` decides whether the
//! attention envelope keeps an individual inside the fold.
//!
//! - [`attention`]: closed-form decay, spikes, periodic attractor and envelope
//! - [`cusp`]: steady states, stability, saddle nodes, extent of polarization
//! - [`polarization`]: `P`, critical values `P1`/`P2`, regime maps
//! - [`abm`]: seeded agent-based simulation and the jitter study
//! - [`io`], [`plot`], [`cli`]: CSV/JSON/SVG output and the command line

// Comparisons are written as `!(x > 0.0)` on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod abm;
pub mod attention;
pub mod cli;
pub mod cubic;
pub mod cusp;
pub mod error;
pub mod io;
pub mod params;
pub mod plot;
pub mod polarization;

pub use error::{Error, Result};
pub use params::{PsychParams, SocialParams, SECONDS_PER_HOUR};
