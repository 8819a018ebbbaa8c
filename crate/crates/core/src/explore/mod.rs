//! Seeded fuzzing, α-plane maps and extremal search.
//!
//! All randomness comes from [`generators::stream_rng`]; instance `k` of a
//! run seeded with `s` always uses stream `(s, k)`, and parallel results are
//! merged in index order.

pub mod alpha_map;
pub mod extremal;
pub mod fuzz;
pub mod generators;
pub mod nelder_mead;

pub use alpha_map::{alpha_map, AlphaCell, AlphaGrid, AlphaMapResult};
pub use extremal::{extremal_search, ExtremalConfig, ExtremalResult};
pub use fuzz::{fuzz, fuzz_instance, FuzzConfig, FuzzReport, FuzzSample, VerdictCounts};
pub use generators::{gen_poly, parse_complex, sample_alpha, stream_rng, AlphaPolicy, GeneratorKind};
pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
