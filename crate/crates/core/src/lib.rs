//! Two-dimensional topological stabilizer codes with quaternary belief-propagation
//! decoding (BP₄, MBP₄, AMBP₄), a depolarizing-channel Monte-Carlo harness and
//! brute-force oracles for small instances.

pub mod cli;
pub mod codes;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod oracle;
pub mod pauli;
pub mod sim;
pub mod tanner;

pub use codes::{Code, CodeMeta, CodeSpec, Family};
pub use decoder::{AlphaSchedule, DecodeResult, DecoderConfig, ErrorPrior, Real, Variant};
pub use error::{Error, Result};
pub use pauli::{logical_operators, CheckMatrix, Pauli, PauliString, Syndrome};
pub use tanner::TannerGraph;

/// Double-precision decoder, the default for simulation.
pub type Decoder<'g> = decoder::Decoder<'g, f64>;
/// Single-precision decoder.
pub type Decoder32<'g> = decoder::Decoder<'g, f32>;
pub type Prior = ErrorPrior<f64>;
pub type Config = DecoderConfig<f64>;
