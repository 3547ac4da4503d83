//! Stochastic string-duplication systems on circular sequences.
//!
//! A sequence evolves by repeated random mutations: tandem duplications
//! (a block is copied next to itself), interspersed duplications (a block
//! is copied to an unrelated position), and point substitutions. This
//! crate provides three coordinated views of such a process:
//!
//! * **Simulation** ([`mutate`]): seeded, reproducible trajectories that
//!   record k-mer frequency snapshots as the string grows.
//! * **Exact analysis** ([`tds`], [`id`], [`nullspace`]): the expected
//!   one-step change of every k-mer count, computed in exact rational
//!   arithmetic, and the limit sets it implies (null spaces of rate
//!   matrices for the tandem model, product measures for the
//!   interspersed model).
//! * **Entropy bounds** ([`entropy`]): capacities of semiconstrained
//!   shift spaces evaluated at the limiting frequencies, yielding upper
//!   bounds on the entropy rate of the evolving sequence.
//!
//! Everything analytic is cross-checked against a formula-free oracle
//! ([`oracle`]) that enumerates every possible mutation event by plain
//! string editing and counting.

pub mod alphabet;
pub mod circular;
pub mod entropy;
pub mod error;
pub mod form;
pub mod id;
pub mod kmer;
pub mod model;
pub mod mutate;
pub mod nullspace;
pub mod oracle;
pub mod report;
pub mod tds;

pub use alphabet::{symbol_counts, Alphabet, Word};
pub use circular::CircularString;
pub use error::{Error, Result};
pub use kmer::{count_kmers, hamming_ball_1, lift_to_k, KmerCounts, KmerFrequencies, KmerIndex};
pub use model::{ModelKind, MutationModel};

/// Exact rational scalar used throughout the analysis paths.
pub type Rational = num_rational::BigRational;

/// Shorthand for building a small exact rational.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}
